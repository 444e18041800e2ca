//! Near-colex hypergraph constructions and the decision procedure for
//! extremal families of prescribed size and depth.

use crate::bbw::BbwConfig;
use crate::error::{invalid, Error, Result};
use crate::extremal::{depth, is_extremal_direct};
use crate::hypergraph::{colex_hypergraph_labelled, family_of_hypergraph, BallSpec, Hypergraph, FAMILY_BUDGET};
use crate::numeric::{binom, full_k_binomial_decomposition, Decomposition};
use crate::setfam::{bit, KSetFamily};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    /// The colex hypergraph itself, unmodified.
    Colex,
    A,
    B,
    APrime,
    BPrime,
}

/// Parameters of one construction. `r` is only used by the primed kinds and
/// names the modified edge e_{r+1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Spec {
    pub kind: Kind,
    pub j: usize,
    pub r: Option<usize>,
    pub counts: Vec<usize>,
    pub n: usize,
}

// Shape of the colex hypergraph without materialising masks.
#[derive(Debug, Clone)]
struct Layout {
    /// cumulative edge counts: prefix[i] = n_1 + ... + n_i
    prefix: Vec<usize>,
}

impl Layout {
    fn new(counts: &[usize]) -> Layout {
        let mut prefix = vec![0];
        for &c in counts {
            prefix.push(prefix.last().unwrap() + c);
        }
        Layout { prefix }
    }

    /// Size of edge e_i (1-based).
    fn size_of(&self, i: usize) -> usize {
        self.prefix.iter().position(|&p| p >= i).unwrap()
    }

    /// Degree of v_s among e_1..e_upto: edges of size >= s + 1.
    fn v_degree(&self, s: usize, upto: usize) -> usize {
        upto.saturating_sub(self.prefix[s.min(self.prefix.len() - 1)])
    }
}

/// The modified edge index (1-based) and the exchanged vertex index t.
fn pivot(spec: &Spec) -> Result<(usize, usize)> {
    let j = spec.j;
    let c = &spec.counts;
    if j == 0 || j >= c.len() {
        return invalid(format!("j = {j} must lie in [1, {}]", c.len().saturating_sub(1)));
    }
    let lay = Layout::new(c);
    let top = lay.prefix[j + 1];
    if c[j] < 1 || top < 2 {
        return Err(Error::InvalidCounts(format!("need n_{} >= 1 and n_1 + ... + n_{} >= 2", j + 1, j + 1)));
    }
    let idx = match spec.kind {
        Kind::Colex => return invalid("the colex hypergraph has no pivot"),
        Kind::A | Kind::B => top,
        Kind::APrime | Kind::BPrime => {
            let r = spec.r.ok_or_else(|| Error::InvalidInput("primed constructions need r".into()))?;
            if r < lay.prefix[j] || r + 1 > top {
                return invalid(format!("r + 1 = {} outside [{}, {top}]", r + 1, lay.prefix[j] + 1));
            }
            r + 1
        }
    };
    let t = (1..=j).rev().find(|&s| lay.v_degree(s, idx) >= 2);
    let t = t.ok_or_else(|| Error::InvalidCounts("no vertex v_s, s <= j, of degree >= 2".into()))?;
    // v_t lies in e_{idx-1}; if no other earlier edge holds it, moving it out
    // of e_idx leaves a relabelled colex hypergraph (depth drops below k - j)
    if matches!(spec.kind, Kind::A | Kind::APrime) && lay.v_degree(t, idx) < 3 {
        return Err(Error::InvalidCounts(format!("construction A needs v_{t} in three of e_1..e_{idx}")));
    }
    Ok((idx, t))
}

fn build(spec: &Spec) -> Result<Hypergraph> {
    if spec.kind == Kind::Colex {
        return crate::hypergraph::colex_hypergraph(spec.n, &spec.counts);
    }
    let (idx, t) = pivot(spec)?;
    check_budget(spec)?;
    let (h, lab) = colex_hypergraph_labelled(spec.n, &spec.counts)?;
    let j = spec.j;
    // v_{j+1} sits just below the private vertices of level j+1
    let vj1 = if lab.v.len() > j {
        lab.v[j]
    } else {
        let lowest = lab.u[Layout::new(&spec.counts).prefix[j + 1] - 1];
        if lowest < 2 {
            return Err(Error::InvalidCounts("no vertex left for v_{j+1}".into()));
        }
        lowest - 1
    };
    let mut edges = h.edges.clone();
    let e = &mut edges[idx - 1];
    *e &= !bit(lab.v[t - 1]);
    match spec.kind {
        Kind::Colex => unreachable!(),
        Kind::B | Kind::BPrime => *e |= bit(vj1),
        Kind::A | Kind::APrime => {
            *e &= !bit(lab.u[idx - 1]);
            *e |= bit(lab.u[idx - 2]) | bit(vj1);
        }
    }
    Hypergraph::new(spec.n, edges)
}

pub fn construction_b(j: usize, counts: &[usize], n: usize) -> Result<Hypergraph> {
    build(&Spec { kind: Kind::B, j, r: None, counts: counts.to_vec(), n })
}

pub fn construction_a(j: usize, counts: &[usize], n: usize) -> Result<Hypergraph> {
    build(&Spec { kind: Kind::A, j, r: None, counts: counts.to_vec(), n })
}

pub fn construction_a_prime(j: usize, r: usize, counts: &[usize], n: usize) -> Result<Hypergraph> {
    build(&Spec { kind: Kind::APrime, j, r: Some(r), counts: counts.to_vec(), n })
}

pub fn construction_b_prime(j: usize, r: usize, counts: &[usize], n: usize) -> Result<Hypergraph> {
    build(&Spec { kind: Kind::BPrime, j, r: Some(r), counts: counts.to_vec(), n })
}

pub fn construction(spec: &Spec) -> Result<Hypergraph> {
    build(spec)
}

/// Closed-form (position, delay) of every ball of the construction, sorted.
pub fn ball_profile(spec: &Spec) -> Result<Vec<BallSpec>> {
    let lay = Layout::new(&spec.counts);
    if spec.kind == Kind::Colex {
        check_levels(spec)?;
        let total = *lay.prefix.last().unwrap();
        return Ok((1..=total).map(|i| BallSpec { position: i as u64 - 1, delay: lay.size_of(i) as u64 }).collect());
    }
    let (p, t) = pivot(spec)?;
    check_budget(spec)?;
    let j = spec.j;
    let total = *lay.prefix.last().unwrap();
    // v_t loses e_p, so d counts the earlier edges through it
    let d = lay.v_degree(t, p) - 1;
    let a_like = matches!(spec.kind, Kind::A | Kind::APrime);
    let mut out = Vec::with_capacity(total + 2);
    let ball = |pos: usize, delay: usize| BallSpec { position: pos as u64, delay: delay as u64 };
    for i in 1..=total {
        let size = lay.size_of(i);
        if i < p {
            out.push(ball(i - 1, size));
        } else if i == p {
            out.push(ball(p - d, j + 1));
            if !a_like {
                out.push(ball(p - 1, j + 2));
            }
        } else if a_like {
            out.push(ball(i - 2, size));
        } else {
            out.push(ball(i - 1, size));
            if size == j + 1 {
                out.push(ball(i - 1, j + 2));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// How a decision was checked before being returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verification {
    /// The family was built and tested for size, extremality and depth.
    Materialized,
    /// Too large to build: the process walls of the closed-form profile
    /// were rerun and compared with the target decomposition.
    Walls,
}

#[derive(Debug, Clone, Serialize)]
pub struct Decision {
    pub spec: Spec,
    pub k: usize,
    pub beta: Decomposition,
    pub verification: Verification,
    #[serde(skip)]
    pub hypergraph: Option<Hypergraph>,
    #[serde(skip)]
    pub family: Option<KSetFamily>,
}

/// Is there an extremal k-uniform family on [n] of size `m` and depth `t`?
///
/// t = 0 is answered by the colex hypergraph itself. For t >= 1 the levels
/// 1..=j+1 (j = k - t) are forced by the target decomposition; construction
/// A and then B is tried, topping up every later level with just enough
/// edges to land each wall on its target.
pub fn decide_extremal_with_depth(n: usize, k: usize, m: &BigInt, t: usize) -> Result<Option<Decision>> {
    let small = n <= 63 && binom(n as i64, k as i64) <= BigInt::from(FAMILY_BUDGET);
    decide_inner(n, k, m, t, small)
}

fn decide_inner(n: usize, k: usize, m: &BigInt, t: usize, materialize: bool) -> Result<Option<Decision>> {
    if k == 0 || k > n {
        return invalid(format!("k = {k} outside [1, {n}]"));
    }
    if !m.is_positive() || *m > binom(n as i64, k as i64) {
        return invalid(format!("m = {m} outside [1, binom({n}, {k})]"));
    }
    if t >= k {
        return Ok(None);
    }
    let a = full_k_binomial_decomposition(m, k)?;
    let targets = target_walls(n, &a.coeffs);
    let kinds: &[Kind] = if t == 0 { &[Kind::Colex] } else { &[Kind::A, Kind::B] };
    for &kind in kinds {
        let Some(spec) = greedy_counts(n, k, kind, k - t, &targets)? else { continue };
        if let Some(d) = verify(spec, k, m, t, &a, materialize)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Wall at the end of iteration i (index i, 1..=k) for an extremal family
/// with full decomposition `a`; index 0 is the starting wall.
fn target_walls(n: usize, a: &[i64]) -> Vec<i64> {
    let k = a.len();
    let n = n as i64;
    let mut w = vec![0];
    for i in 1..=k {
        let shift = if i < k { i as i64 } else { k as i64 - 1 };
        w.push(n - a[i - 1] - shift);
    }
    w
}

// Runs the process level by level, deciding the count of each free level
// just before the iteration that consumes its balls.
fn greedy_counts(n: usize, k: usize, kind: Kind, j: usize, targets: &[i64]) -> Result<Option<Spec>> {
    let mut counts = vec![0usize; k];
    let forced = if kind == Kind::Colex { k } else { j + 1 };
    for i in 1..=forced {
        let c = targets[i] - targets[i - 1];
        if c < 0 {
            return Ok(None);
        }
        counts[i - 1] = c as usize;
    }
    let mut spec = Spec { kind, j, r: None, counts, n };
    let balls = match ball_profile(&spec) {
        Ok(b) => b,
        Err(Error::InvalidCounts(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if kind == Kind::Colex {
        return Ok(Some(spec));
    }
    let mut edges = spec.counts.iter().sum::<usize>();
    let shift = if kind == Kind::A { 2 } else { 1 };
    let mut cfg = BbwConfig::with_balls(0, balls.iter().map(|b| ((b.position, b.delay), BigInt::one())));
    for i in 0..=k {
        if i >= j + 2 {
            let pending: BigInt = cfg.balls.range((0, 0)..).filter(|(key, _)| key.1 == i as u64).map(|(_, m)| m).sum();
            let pending = pending.to_i64().unwrap_or(i64::MAX);
            let x = targets[i] - cfg.wall as i64 - pending;
            if x < 0 {
                return Ok(None);
            }
            let x = x as usize;
            // the new level needs |e| - 1 + (edges so far) vertices below n
            if x > 0 && edges + x + i - 1 > n {
                return Ok(None);
            }
            for q in 1..=x {
                cfg.add((edges + q - shift) as u64, i as u64, BigInt::one());
            }
            edges += x;
            spec.counts[i - 1] = x;
        }
        let out = match cfg.step_in_place(i < k) {
            Ok(o) => o,
            Err(Error::Capacity(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if out.abrupt || (i >= 1 && cfg.wall as i64 != targets[i]) {
            return Ok(None);
        }
        if i < k && out.spawned_future > BigInt::from(n) * BigInt::from(n) {
            return Ok(None);
        }
    }
    Ok(Some(spec))
}

fn verify(spec: Spec, k: usize, m: &BigInt, t: usize, a: &Decomposition, materialize: bool) -> Result<Option<Decision>> {
    let n = spec.n;
    if materialize {
        let h = construction(&spec)?;
        let s = match family_of_hypergraph(&h, k) {
            Ok(s) => s,
            Err(Error::InvalidHypergraph(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if BigInt::from(s.len()) != *m || !is_extremal_direct(&s)? || depth(&s)? != t {
            return Ok(None);
        }
        return Ok(Some(Decision {
            spec,
            k,
            beta: a.clone(),
            verification: Verification::Materialized,
            hypergraph: Some(h),
            family: Some(s),
        }));
    }
    // rerun the process from scratch on the closed-form profile
    let balls = ball_profile(&spec)?;
    let mut cfg = BbwConfig::with_balls(0, balls.iter().map(|b| ((b.position, b.delay), BigInt::one())));
    let targets = target_walls(n, &a.coeffs);
    for (i, &w) in targets.iter().enumerate() {
        let out = cfg.step_in_place(i < k)?;
        if out.abrupt || (i >= 1 && cfg.wall as i64 != w) {
            return Ok(None);
        }
    }
    Ok(Some(Decision { spec, k, beta: a.clone(), verification: Verification::Walls, hypergraph: None, family: None }))
}

/// Recognises `h` as one of the constructions (edges compared as a set)
/// and returns that construction's closed-form profile.
pub fn ball_profile_of_construction(h: &Hypergraph) -> Result<Vec<BallSpec>> {
    let k = h.max_edge();
    if k == 0 {
        return Err(Error::Unsupported("empty hypergraph".into()));
    }
    let counts = h.size_profile(k);
    let lay = Layout::new(&counts);
    let mut specs = vec![Spec { kind: Kind::Colex, j: 0, r: None, counts: counts.clone(), n: h.n }];
    for j in 1..k {
        for kind in [Kind::A, Kind::B] {
            specs.push(Spec { kind, j, r: None, counts: counts.clone(), n: h.n });
        }
        for r in lay.prefix[j]..lay.prefix[j + 1] {
            for kind in [Kind::APrime, Kind::BPrime] {
                specs.push(Spec { kind, j, r: Some(r), counts: counts.clone(), n: h.n });
            }
        }
    }
    for spec in specs {
        if build(&spec).is_ok_and(|g| g.same_edges(h)) {
            return ball_profile(&spec);
        }
    }
    Err(Error::Unsupported("not a recognised construction".into()))
}

// Every level must fit below n.
fn check_levels(spec: &Spec) -> Result<()> {
    let lay = Layout::new(&spec.counts);
    let n = spec.n;
    for (i, &c) in spec.counts.iter().enumerate() {
        if c > 0 && lay.prefix[i + 1] + i > n {
            return Err(Error::InvalidCounts(format!("level {} needs more than {n} vertices", i + 1)));
        }
    }
    Ok(())
}

// The levels fit and v_{j+1} exists.
fn check_budget(spec: &Spec) -> Result<()> {
    check_levels(spec)?;
    let lay = Layout::new(&spec.counts);
    let n = spec.n;
    if lay.prefix[spec.j + 1] + spec.j + 1 > n {
        return Err(Error::InvalidCounts(format!("no vertex left for v_{}", spec.j + 1)));
    }
    Ok(())
}
