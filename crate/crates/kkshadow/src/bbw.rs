//! The bins-balls-wall (hypotenusal) process.
//!
//! Balls are kept as a multiplicity map keyed by (position, delay). One
//! iteration is a sweep over positions in ascending order; the descendants
//! of a bin of `c` identical balls are two ranges of the next delay (a flat
//! block of height `c` up to the wall and a descending ramp past it), which
//! are carried as difference events instead of being expanded ball by ball.

use crate::error::{invalid, Error, Result};
use crate::hypergraph::{tree_ball_specs, Hypergraph};
use crate::numeric::{binom, binom_big, Decomposition, Kind};
use crate::setfam::{shadow_sizes, KSetFamily};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Largest position range expanded when materialising spawned balls.
pub const MATERIALIZE_LIMIT: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BbwConfig {
    pub balls: BTreeMap<(u64, u64), BigInt>,
    pub wall: u64,
    pub iteration: u64,
}

/// Walls at the beginning of each iteration: `walls[t]` for t = 0, 1, ...
/// The end of iteration t is `walls[t + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallTrace {
    pub walls: Vec<u64>,
}

impl WallTrace {
    pub fn end_of(&self, t: usize) -> Option<u64> {
        self.walls.get(t + 1).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub abrupt: bool,
    /// Balls processed during the iteration.
    pub processed: BigInt,
    /// Balls spawned with a delay beyond the iteration.
    pub spawned_future: BigInt,
}

impl BbwConfig {
    pub fn new(wall: u64) -> Self {
        BbwConfig { balls: BTreeMap::new(), wall, iteration: 0 }
    }

    pub fn with_balls(wall: u64, balls: impl IntoIterator<Item = ((u64, u64), BigInt)>) -> Self {
        let mut c = Self::new(wall);
        for (key, m) in balls {
            c.add(key.0, key.1, m);
        }
        c
    }

    pub fn add(&mut self, pos: u64, delay: u64, m: BigInt) {
        if m.is_zero() {
            return;
        }
        let e = self.balls.entry((pos, delay)).or_insert_with(BigInt::zero);
        *e += m;
    }

    pub fn total_balls(&self) -> BigInt {
        self.balls.values().sum()
    }

    /// One iteration with descendants materialised.
    pub fn step(&self) -> Result<(BbwConfig, bool)> {
        let mut c = self.clone();
        let out = c.step_in_place(true)?;
        Ok((c, out.abrupt))
    }

    /// One iteration. With `materialize = false` balls spawned for later
    /// iterations are only counted, never stored.
    pub fn step_in_place(&mut self, materialize: bool) -> Result<StepOutcome> {
        let t = self.iteration;
        let mut points: BTreeMap<u64, BTreeMap<u64, BigInt>> = BTreeMap::new();
        let keys: Vec<(u64, u64)> = self.balls.keys().filter(|k| k.1 <= t).copied().collect();
        for key in keys {
            let m = self.balls.remove(&key).unwrap();
            points.entry(key.0).or_default().insert(key.1, m);
        }
        // range events for spawned balls with delay <= t: pos -> delay -> (Δα, Δβ)
        let mut events: BTreeMap<u64, BTreeMap<u64, (BigInt, BigInt)>> = BTreeMap::new();
        let mut active: BTreeMap<u64, (BigInt, BigInt)> = BTreeMap::new();
        let mut future: Vec<(u64, u64, u64, BigInt, BigInt)> = Vec::new();
        let mut out = StepOutcome { abrupt: false, processed: BigInt::zero(), spawned_future: BigInt::zero() };
        let mut w = self.wall;

        let mut p = match (points.keys().next(), events.keys().next()) {
            (Some(&a), _) => a,
            _ => {
                self.iteration += 1;
                return Ok(out);
            }
        };
        loop {
            if let Some(ev) = events.remove(&p) {
                for (d, (da, db)) in ev {
                    let e = active.entry(d).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
                    e.0 += da;
                    e.1 += db;
                    if e.0.is_zero() && e.1.is_zero() {
                        active.remove(&d);
                    }
                }
            }
            let mut here = points.remove(&p).unwrap_or_default();
            let pb = BigInt::from(p);
            let mut d_lo: Option<u64> = None;
            loop {
                // smallest delay > d_lo present at p (points or active ranges)
                let next_point = here.keys().find(|&&d| d_lo.is_none_or(|x| d > x)).copied();
                let next_active = active.keys().find(|&&d| d_lo.is_none_or(|x| d > x)).copied();
                let d = match (next_point, next_active) {
                    (None, None) => break,
                    (Some(a), None) | (None, Some(a)) => a,
                    (Some(a), Some(b)) => a.min(b),
                };
                d_lo = Some(d);
                let mut c = here.remove(&d).unwrap_or_default();
                if let Some((a, b)) = active.get(&d) {
                    c += a + b * &pb;
                }
                if !c.is_positive() {
                    continue;
                }
                if p > w {
                    // every remaining ball sits at a position >= p > w
                    out.abrupt = true;
                    here.insert(d, c);
                    self.restore(p, here, points);
                    self.wall = w;
                    self.iteration += 1;
                    return Ok(out);
                }
                let spawned = spawn_count(&c, p, w);
                let wb = BigInt::from(w);
                let flat_end = w.checked_sub(1).filter(|&e| e >= p);
                // ramp on [w, w+c-2] with height (w+c-1) - q
                let ramp_alpha = &wb + &c - 1;
                if d + 1 <= t {
                    let cu = c.to_u64().ok_or_else(|| Error::Capacity("bin multiplicity exceeds 64 bits".into()))?;
                    if let Some(fe) = flat_end {
                        add_event(&mut events, &mut active, p, fe, d + 1, c.clone(), BigInt::zero(), p);
                    }
                    if cu >= 2 {
                        let end = w.checked_add(cu - 2).ok_or_else(|| Error::Capacity("position overflow".into()))?;
                        add_event(&mut events, &mut active, w, end, d + 1, ramp_alpha, -BigInt::one(), p);
                    }
                } else {
                    out.spawned_future += &spawned;
                    if materialize {
                        let cu = c.to_u64().filter(|&x| x <= MATERIALIZE_LIMIT);
                        let cu = cu.ok_or_else(|| Error::Capacity("too many spawned positions to materialise".into()))?;
                        if let Some(fe) = flat_end {
                            future.push((p, fe, d + 1, c.clone(), BigInt::zero()));
                        }
                        if cu >= 2 {
                            future.push((w, w + cu - 2, d + 1, ramp_alpha, -BigInt::one()));
                        }
                    }
                }
                out.processed += &c;
                let cu = c.to_u64().ok_or_else(|| Error::Capacity("wall position exceeds 64 bits".into()))?;
                w = w.checked_add(cu).ok_or_else(|| Error::Capacity("wall position exceeds 64 bits".into()))?;
            }
            let next_event = events.keys().next().copied();
            let next_point = points.keys().next().copied();
            p = if !active.is_empty() {
                p + 1
            } else {
                match (next_event, next_point) {
                    (None, None) => break,
                    (Some(a), None) | (None, Some(a)) => a,
                    (Some(a), Some(b)) => a.min(b),
                }
            };
        }
        self.materialize(future)?;
        self.wall = w;
        self.iteration += 1;
        Ok(out)
    }

    // difference-array sweep over the spawned ranges
    fn materialize(&mut self, future: Vec<(u64, u64, u64, BigInt, BigInt)>) -> Result<()> {
        if future.is_empty() {
            return Ok(());
        }
        let lo = future.iter().map(|f| f.0).min().unwrap();
        let hi = future.iter().map(|f| f.1).max().unwrap();
        if hi - lo >= MATERIALIZE_LIMIT {
            return Err(Error::Capacity("too many spawned positions to materialise".into()));
        }
        let mut events: BTreeMap<u64, BTreeMap<u64, (BigInt, BigInt)>> = BTreeMap::new();
        for (a, z, d, al, be) in future {
            let e = events.entry(a).or_default().entry(d).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
            e.0 += &al;
            e.1 += &be;
            let e = events.entry(z + 1).or_default().entry(d).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
            e.0 -= al;
            e.1 -= be;
        }
        let mut active: BTreeMap<u64, (BigInt, BigInt)> = BTreeMap::new();
        for q in lo..=hi {
            if let Some(ev) = events.remove(&q) {
                for (d, (da, db)) in ev {
                    let e = active.entry(d).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
                    e.0 += da;
                    e.1 += db;
                    if e.0.is_zero() && e.1.is_zero() {
                        active.remove(&d);
                    }
                }
            }
            let qb = BigInt::from(q);
            for (&d, (a, b)) in &active {
                let m = a + b * &qb;
                if !m.is_zero() {
                    let e = self.balls.entry((q, d)).or_insert_with(BigInt::zero);
                    *e += m;
                }
            }
        }
        Ok(())
    }

    fn restore(&mut self, p: u64, here: BTreeMap<u64, BigInt>, points: BTreeMap<u64, BTreeMap<u64, BigInt>>) {
        for (d, m) in here {
            self.add(p, d, m);
        }
        for (q, row) in points {
            for (d, m) in row {
                self.add(q, d, m);
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn add_event(
    events: &mut BTreeMap<u64, BTreeMap<u64, (BigInt, BigInt)>>,
    active: &mut BTreeMap<u64, (BigInt, BigInt)>,
    lo: u64,
    hi: u64,
    d: u64,
    a: BigInt,
    b: BigInt,
    now: u64,
) {
    // a range starting at the current sweep position is live immediately
    if lo == now {
        let e = active.entry(d).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
        e.0 += &a;
        e.1 += &b;
        if e.0.is_zero() && e.1.is_zero() {
            active.remove(&d);
        }
    } else {
        let e = events.entry(lo).or_default().entry(d).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
        e.0 += &a;
        e.1 += &b;
    }
    let e = events.entry(hi + 1).or_default().entry(d).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
    e.0 -= a;
    e.1 -= b;
}

/// Descendants of `c` identical balls at position `p` with the wall at `w`:
/// c(w - p) + c(c - 1)/2.
fn spawn_count(c: &BigInt, p: u64, w: u64) -> BigInt {
    c * BigInt::from(w - p) + (c * (c - 1)) / 2
}

/// Runs `t` iterations, stopping at the first abrupt one.
pub fn run(config: &BbwConfig, t: usize) -> Result<(WallTrace, BbwConfig, bool)> {
    let mut c = config.clone();
    let mut walls = vec![c.wall];
    for _ in 0..t {
        let out = c.step_in_place(true)?;
        walls.push(c.wall);
        if out.abrupt {
            return Ok((WallTrace { walls }, c, true));
        }
    }
    Ok((WallTrace { walls }, c, false))
}

/// Reference simulation, one ball at a time, for cross-checking.
pub fn run_naive(config: &BbwConfig, t: usize) -> Result<(WallTrace, BbwConfig, bool)> {
    let mut balls: Vec<(u64, u64)> = Vec::new();
    for (&(p, d), m) in &config.balls {
        let m = m.to_u64().ok_or_else(|| Error::Capacity("naive simulation needs small counts".into()))?;
        for _ in 0..m {
            balls.push((p, d));
        }
    }
    let mut w = config.wall;
    let mut it = config.iteration;
    let mut walls = vec![w];
    for _ in 0..t {
        let mut pending: Vec<(u64, u64)> = balls.iter().copied().filter(|b| b.1 <= it).collect();
        balls.retain(|b| b.1 > it);
        let mut abrupt = false;
        while !pending.is_empty() {
            pending.sort_unstable();
            let (p, d) = pending[0];
            if p > w {
                abrupt = true;
                break;
            }
            pending.remove(0);
            for q in p..w {
                if d < it {
                    pending.push((q, d + 1));
                } else {
                    balls.push((q, d + 1));
                }
            }
            w += 1;
        }
        balls.extend(pending);
        it += 1;
        walls.push(w);
        if abrupt {
            let cfg = collect_config(&balls, w, it);
            return Ok((WallTrace { walls }, cfg, true));
        }
    }
    Ok((WallTrace { walls }, collect_config(&balls, w, it), false))
}

fn collect_config(balls: &[(u64, u64)], wall: u64, iteration: u64) -> BbwConfig {
    let mut c = BbwConfig::new(wall);
    c.iteration = iteration;
    for &(p, d) in balls {
        c.add(p, d, BigInt::one());
    }
    c
}

/// Balls of the family's trees at wall 0, iteration 0.
pub fn init_from_hypergraph(h: &Hypergraph) -> Result<BbwConfig> {
    let mut c = BbwConfig::new(0);
    for b in tree_ball_specs(h)? {
        c.add(b.position, b.delay, BigInt::one());
    }
    Ok(c)
}

/// β_i = n - w_{i+1} - (i+1) for i < k-1 and β_{k-1} = n - w_k - (k-1), where
/// w_i is the wall at the end of iteration i.
pub fn beta_from_walls(n: usize, k: usize, trace: &WallTrace) -> Result<Decomposition> {
    if k == 0 || trace.walls.len() < k + 2 {
        return invalid(format!("trace with {} walls cannot cover iterations 1..{k}", trace.walls.len()));
    }
    let n = n as i64;
    let mut coeffs = Vec::with_capacity(k);
    for i in 0..k {
        let w = trace.end_of(i + 1).unwrap() as i64;
        let shift = if i + 1 < k { i as i64 + 1 } else { k as i64 - 1 };
        coeffs.push(n - w - shift);
    }
    Ok(Decomposition::new(Kind::Shadow, k, coeffs))
}

/// Runs the family's process through iteration k; returns the trace, the
/// final configuration and whether it ended abruptly.
pub fn family_process(s: &KSetFamily) -> Result<(WallTrace, BbwConfig, bool)> {
    let h = crate::hypergraph::hypergraph_of_family(s)?;
    run(&init_from_hypergraph(&h)?, s.k + 1)
}

/// The shadow decomposition read off the process walls.
pub fn shadow_decomposition_by_walls(s: &KSetFamily) -> Result<Decomposition> {
    let (trace, _, abrupt) = family_process(s)?;
    if abrupt {
        return Err(Error::Unsupported("family process ended abruptly".into()));
    }
    beta_from_walls(s.n, s.k, &trace)
}

/// The recursion on iterated shadow sizes.
pub fn shadow_decomposition_direct(s: &KSetFamily) -> Result<Decomposition> {
    if s.is_empty() {
        return invalid("empty family");
    }
    let sizes = shadow_sizes(s);
    Ok(beta_from_sizes(&sizes))
}

/// `sizes[i] = |Δ^i S|`.
pub fn beta_from_sizes(sizes: &[usize]) -> Decomposition {
    let k = sizes.len();
    if k == 1 {
        return Decomposition::new(Kind::Shadow, 1, vec![sizes[0] as i64]);
    }
    let mut beta: Vec<i64> = Vec::with_capacity(k);
    beta.push(sizes[k - 1] as i64 - 1);
    for i in 1..k {
        let target = sizes[k - 1 - i] as i64;
        let sub: BigInt = (0..i).map(|l| binom(beta[l], (i + 1 - l) as i64)).sum();
        let sub = sub.to_i64().expect("shadow sizes fit in i64");
        beta.push(if i + 1 < k { target - sub - 1 } else { target - sub });
    }
    Decomposition::new(Kind::Shadow, k, beta)
}

/// a[i] read off the process seeded with one ball at (0,0) and wall 1.
/// Feasible up to `count = 9`; further values need ~10^11 bins.
pub fn hypotenusal_by_process(count: usize) -> Result<Vec<BigInt>> {
    let mut c = BbwConfig::with_balls(1, [((0, 0), BigInt::one())]);
    let mut a = Vec::with_capacity(count);
    if count == 0 {
        return Ok(a);
    }
    loop {
        // iteration i processes the a[i] delay-i balls and spawns a[i+1]
        let last = a.len() + 1 >= count;
        let out = c.step_in_place(!last)?;
        debug_assert!(!out.abrupt);
        if a.is_empty() {
            a.push(out.processed.clone());
        }
        if a.len() < count {
            a.push(out.spawned_future.clone());
        }
        if a.len() >= count {
            break;
        }
    }
    a.truncate(count);
    Ok(a)
}

/// Row-by-row evaluation of the triangle (only practical for a[0..7]).
pub fn hypotenusal_by_table_rows(count: usize) -> Vec<BigInt> {
    let width = count + 1;
    let mut out = Vec::new();
    let mut row: Vec<BigInt> = vec![BigInt::zero(); width];
    row[0] = BigInt::one();
    let mut start = 0usize;
    out.push(BigInt::one());
    // remaining rows in the current block
    let mut left: BigInt = BigInt::zero();
    while out.len() < count {
        let mut next = vec![BigInt::zero(); width];
        if left.is_zero() {
            // new block at column start+1: prefix sums including column `start`
            let ns = start + 1;
            let mut acc = BigInt::zero();
            for c in start..width {
                acc += &row[c];
                if c >= ns {
                    next[c] = acc.clone();
                }
            }
            start = ns;
            out.push(next[start].clone());
            left = next[start].clone() - 1;
        } else {
            next[start] = &row[start] - 1;
            let mut acc = BigInt::zero();
            for c in start..width {
                acc += &row[c];
                if c > start {
                    next[c] = acc.clone();
                }
            }
            left -= 1;
        }
        row = next;
    }
    out.truncate(count);
    out
}

/// Integer-valued polynomial in the binomial basis: p(r) = Σ c_j binom(r, j).
#[derive(Debug, Clone, PartialEq, Eq)]
struct NewtonPoly(Vec<BigInt>);

impl NewtonPoly {
    fn eval(&self, r: &BigInt) -> BigInt {
        self.0.iter().enumerate().map(|(j, c)| c * binom_big(r, j as i64)).sum()
    }

    fn add(&self, other: &NewtonPoly) -> NewtonPoly {
        let n = self.0.len().max(other.0.len());
        NewtonPoly((0..n).map(|j| self.0.get(j).cloned().unwrap_or_default() + other.0.get(j).cloned().unwrap_or_default()).collect())
    }

    /// r -> Σ_{q<r} p(q), using Σ_{q<r} binom(q,j) = binom(r,j+1).
    fn prefix_sum(&self) -> NewtonPoly {
        let mut v = vec![BigInt::zero()];
        v.extend(self.0.iter().cloned());
        NewtonPoly(v)
    }
}

/// The triangle evaluated block by block: inside a block of `a` rows every
/// column is a polynomial in the row index, so a block is crossed in closed form.
pub fn hypotenusal_by_table(count: usize) -> Vec<BigInt> {
    let width = count + 1;
    let mut out = vec![BigInt::one()];
    let mut first: Vec<BigInt> = vec![BigInt::zero(); width];
    first[0] = BigInt::one();
    let mut start = 0usize;
    while out.len() < count {
        let a = first[start].clone();
        // P_start(r) = a - r; P_c(r) = F[c] + Σ_{q<r} Σ_{c'<c} P_c'(q)
        let mut polys: Vec<NewtonPoly> = vec![NewtonPoly(vec![a.clone(), -BigInt::one()])];
        let mut below = polys[0].clone();
        for c in start + 1..width {
            let p = NewtonPoly(vec![first[c].clone()]).add(&below.prefix_sum());
            below = below.add(&p);
            polys.push(p);
        }
        let r = a - 1;
        let last: Vec<BigInt> = polys.iter().map(|p| p.eval(&r)).collect();
        let mut next = vec![BigInt::zero(); width];
        let mut acc = BigInt::zero();
        for (off, v) in last.iter().enumerate() {
            acc += v;
            let c = start + off;
            if c > start {
                next[c] = acc.clone();
            }
        }
        start += 1;
        out.push(next[start].clone());
        first = next;
    }
    out.truncate(count);
    out
}

/// Hamilton numbers h[1..=count] from their recurrence.
pub fn hamilton_numbers(count: usize) -> Vec<BigInt> {
    let mut h: Vec<BigInt> = vec![BigInt::zero(), BigInt::from(2)];
    for n in 2..=count {
        let mut v = BigInt::from(2);
        for i in 1..n {
            let term = binom_big(&h[n - i], i as i64 + 1);
            if i % 2 == 1 {
                v += term;
            } else {
                v -= term;
            }
        }
        h.push(v);
    }
    h.remove(0);
    h.truncate(count);
    h
}

/// a[0] = 1, a[n] = h[n+1] - h[n].
pub fn hypotenusal_by_hamilton(count: usize) -> Vec<BigInt> {
    let h = hamilton_numbers(count + 1);
    let mut a = vec![BigInt::one()];
    for n in 1..count {
        a.push(&h[n] - &h[n - 1]);
    }
    a.truncate(count);
    a
}

/// First `count` hypotenusal numbers. The process supplies the prefix it can
/// reach (nine values); the block-wise triangle supplies the rest. Where both
/// exist they are required to agree.
pub fn hypotenusal_numbers(count: usize) -> Result<Vec<BigInt>> {
    if count == 0 {
        return invalid("count must be positive");
    }
    let from_process = hypotenusal_by_process(count.min(9))?;
    let table = hypotenusal_by_table(count);
    if table[..from_process.len()] != from_process[..] {
        return Err(Error::Unsupported("process and triangle disagree".into()));
    }
    Ok(table)
}

/// a[i] with a[-1] = 1.
pub fn hyp_at(a: &[BigInt], i: i64) -> BigInt {
    if i < 0 {
        BigInt::one()
    } else {
        a[i as usize].clone()
    }
}

/// The three growth bounds at index `i` within the supplied prefix.
pub fn verify_growth(a: &[BigInt], i: usize) -> bool {
    if i >= a.len() {
        return false;
    }
    let mut ok = true;
    if i >= 2 {
        let p = &a[i - 1];
        ok &= a[i] >= binom_big(&(p + 1), 2) + p;
    }
    if i >= 4 {
        ok &= &a[i - 1] * &a[i - 1] >= a[i];
        let hi = BigInt::one() << (1usize << i);
        let lo = BigInt::one() << ((1usize << (i - 2)) + 1);
        ok &= hi >= a[i] && a[i] >= lo;
    }
    ok
}
