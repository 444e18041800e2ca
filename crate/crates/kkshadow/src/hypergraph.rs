//! Minimal non-faces of a family, blocking sets and extension trees.

use crate::error::{invalid, Error, Result};
use crate::numeric::binom;
use crate::setfam::{bit, check_n, elems, ground_mask, ksets, shadow_masks, KSetFamily};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::{HashSet, VecDeque};

/// Largest edge count accepted by the supercomfortable search.
pub const SC_MAX_EDGES: usize = 20;
/// Largest binom(n,k) materialised by [`family_of_hypergraph`].
pub const FAMILY_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    pub n: usize,
    /// Edges in the stored ordering.
    pub edges: Vec<u64>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<u64>) -> Result<Self> {
        check_n(n)?;
        let g = ground_mask(n);
        for &e in &edges {
            if e == 0 || e & !g != 0 {
                return invalid(format!("edge {:?} is empty or outside [{n}]", elems(e)));
            }
        }
        Ok(Hypergraph { n, edges })
    }

    pub fn from_elems(n: usize, edges: &[&[usize]]) -> Result<Self> {
        let masks = edges
            .iter()
            .map(|e| crate::setfam::KSet::new(n, e).map(|s| s.bits))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, masks)
    }

    /// Same edges, reordered comfortably.
    pub fn comfortable(&self) -> Hypergraph {
        let order = comfortable_order(self);
        self.reordered(&order)
    }

    pub fn reordered(&self, order: &[usize]) -> Hypergraph {
        Hypergraph { n: self.n, edges: order.iter().map(|&i| self.edges[i]).collect() }
    }

    pub fn max_edge(&self) -> usize {
        self.edges.iter().map(|e| e.count_ones() as usize).max().unwrap_or(0)
    }

    pub fn is_antichain(&self) -> bool {
        let e = &self.edges;
        (0..e.len()).all(|i| (0..e.len()).all(|j| i == j || e[i] & e[j] != e[i]))
    }

    /// Edge-count per size, index 0 = size 1.
    pub fn size_profile(&self, k: usize) -> Vec<usize> {
        let mut v = vec![0; k.max(self.max_edge())];
        for e in &self.edges {
            v[e.count_ones() as usize - 1] += 1;
        }
        v
    }

    /// Vertex degree.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&e| e & bit(v) != 0).count()
    }

    /// Same edge set irrespective of order.
    pub fn same_edges(&self, other: &Hypergraph) -> bool {
        let mut a = self.edges.clone();
        let mut b = other.edges.clone();
        a.sort_unstable();
        b.sort_unstable();
        self.n == other.n && a == b
    }
}

/// Minimal non-faces of the complex generated by `S` (sizes 1..k).
pub fn hypergraph_of_family(s: &KSetFamily) -> Result<Hypergraph> {
    if s.is_empty() {
        return invalid("empty family");
    }
    Ok(Hypergraph { n: s.n, edges: minimal_non_faces(s.n, s.k, s.sets()) }.comfortable())
}

pub(crate) fn minimal_non_faces(n: usize, k: usize, sets: &[u64]) -> Vec<u64> {
    // levels[r] = faces of size r, r = 1..k
    let mut levels: Vec<Vec<u64>> = vec![Vec::new(); k + 1];
    levels[k] = sets.to_vec();
    for r in (1..k).rev() {
        levels[r] = shadow_masks(&levels[r + 1]);
    }
    let mut edges = Vec::new();
    for v in 1..=n {
        if levels[1].binary_search(&bit(v)).is_err() {
            edges.push(bit(v));
        }
    }
    for r in 2..=k {
        let lower = &levels[r - 1];
        let here = &levels[r];
        let mut cand = Vec::new();
        for &f in lower {
            // extend only by elements above the top of f: each candidate is
            // generated once, from its subset missing the largest element
            let top = 64 - f.leading_zeros() as usize;
            for v in top + 1..=n {
                cand.push(f | bit(v));
            }
        }
        for c in cand {
            if here.binary_search(&c).is_ok() {
                continue;
            }
            let mut m = c;
            let mut ok = true;
            while m != 0 {
                let b = m & m.wrapping_neg();
                m &= m - 1;
                if lower.binary_search(&(c & !b)).is_err() {
                    ok = false;
                    break;
                }
            }
            if ok {
                edges.push(c);
            }
        }
    }
    edges
}

/// binom([n],k) minus every k-extension of an edge.
pub fn family_of_hypergraph(h: &Hypergraph, k: usize) -> Result<KSetFamily> {
    if k == 0 || k > h.n {
        return invalid(format!("k = {k} outside [1, {}]", h.n));
    }
    if h.max_edge() > k {
        return invalid(format!("edge of size {} exceeds k = {k}", h.max_edge()));
    }
    if !h.is_antichain() {
        return Err(Error::InvalidHypergraph("edges do not form an antichain".into()));
    }
    let total = binom(h.n as i64, k as i64).to_u64().unwrap_or(u64::MAX);
    if total > FAMILY_BUDGET {
        return Err(Error::Capacity(format!("binom({}, {k}) = {total} sets to scan", h.n)));
    }
    let sets: Vec<u64> = ksets(h.n, k)
        .into_iter()
        .filter(|&x| h.edges.iter().all(|&e| x & e != e))
        .collect();
    if sets.is_empty() {
        return Err(Error::InvalidHypergraph("the edges cover every k-set".into()));
    }
    let s = KSetFamily::new(h.n, k, sets)?;
    let back = hypergraph_of_family(&s)?;
    if !back.same_edges(h) {
        return Err(Error::InvalidHypergraph(
            "edges are not the minimal non-faces of any family (a full star is present)".into(),
        ));
    }
    Ok(s)
}

/// H^{(k')}: edges of size at most k'.
pub fn truncate(h: &Hypergraph, kp: usize) -> Hypergraph {
    Hypergraph { n: h.n, edges: h.edges.iter().copied().filter(|e| e.count_ones() as usize <= kp).collect() }
}

/// Indices sorted by edge size, ties by colex of the edge masks.
pub fn comfortable_order(h: &Hypergraph) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..h.edges.len()).collect();
    idx.sort_by_key(|&i| (h.edges[i].count_ones(), h.edges[i]));
    idx
}

/// Minimal sets s ⊆ [n] \ e_j hitting every e_i, i < j (1-based j).
/// Shortest first, then lexicographic on the sorted vertex lists.
pub fn blocking_sets(edges: &[u64], j: usize) -> Result<Vec<u64>> {
    if j == 0 || j > edges.len() {
        return invalid(format!("edge index {j} outside [1, {}]", edges.len()));
    }
    let ej = edges[j - 1];
    let prev = &edges[..j - 1];
    let mut found: HashSet<u64> = HashSet::new();
    transversals(prev, ej, 0, &mut found);
    let mut out: Vec<u64> = found.into_iter().collect();
    sort_blocking(&mut out);
    Ok(out)
}

pub(crate) fn sort_blocking(v: &mut [u64]) {
    v.sort_by(|&a, &b| a.count_ones().cmp(&b.count_ones()).then_with(|| elems(a).cmp(&elems(b))));
}

fn transversals(prev: &[u64], forbidden: u64, cur: u64, out: &mut HashSet<u64>) {
    match prev.iter().find(|&&e| e & cur == 0) {
        None => {
            if is_minimal_transversal(prev, cur) {
                out.insert(cur);
            }
        }
        Some(&e) => {
            let mut choices = e & !forbidden;
            while choices != 0 {
                let b = choices & choices.wrapping_neg();
                choices &= choices - 1;
                transversals(prev, forbidden, cur | b, out);
            }
        }
    }
}

// every vertex of s has a private edge
fn is_minimal_transversal(prev: &[u64], s: u64) -> bool {
    let mut m = s;
    while m != 0 {
        let b = m & m.wrapping_neg();
        m &= m - 1;
        if !prev.iter().any(|&e| e & s == b) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    /// First coordinate: odd for internal vertices, even for leaves.
    pub counter: usize,
    /// Index into the blocking-set list (second coordinate).
    pub set_index: usize,
    pub parent: Option<usize>,
    /// Label of the edge towards the parent.
    pub edge_label: u64,
    /// Vertex label for internal vertices.
    pub label: u64,
    /// (ℓ_v(P), ℓ_e(P)) for leaves.
    pub leaf: Option<(u64, u64)>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.leaf.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionTree {
    pub n: usize,
    pub edge: u64,
    pub blocking: Vec<u64>,
    /// Node 0 is the root.
    pub nodes: Vec<TreeNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BallSpec {
    pub position: u64,
    pub delay: u64,
}

impl ExtensionTree {
    pub fn leaves(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.nodes.iter().filter_map(|v| v.leaf)
    }

    /// binom(n - |e_j| - |ℓ_v|, k - |e_j| - |ℓ_e|) per leaf.
    pub fn leaf_coefficients(&self, k: usize) -> Vec<BigInt> {
        let e = self.edge.count_ones() as i64;
        self.leaves()
            .map(|(lv, le)| binom(self.n as i64 - e - lv.count_ones() as i64, k as i64 - e - le.count_ones() as i64))
            .collect()
    }

    /// (|ℓ_v|, |ℓ_e|) per leaf; independent of k.
    pub fn leaf_shapes(&self) -> Vec<(usize, usize)> {
        self.leaves().map(|(lv, le)| (lv.count_ones() as usize, le.count_ones() as usize)).collect()
    }

    pub fn ball_specs(&self) -> Vec<BallSpec> {
        let e = self.edge.count_ones() as u64;
        self.leaves()
            .map(|(lv, le)| {
                let (lv, le) = (lv.count_ones() as u64, le.count_ones() as u64);
                BallSpec { position: lv - le, delay: e + le }
            })
            .collect()
    }

    /// The k-sets counted by each leaf: e_j ∪ ℓ_e ∪ X with X avoiding e_j ∪ ℓ_v.
    pub fn leaf_sets(&self, k: usize) -> Vec<Vec<u64>> {
        self.leaves()
            .map(|(lv, le)| {
                let base = self.edge | le;
                let free = ground_mask(self.n) & !(self.edge | lv);
                let need = k as i64 - base.count_ones() as i64;
                if need < 0 {
                    return Vec::new();
                }
                subsets_of_size(free, need as usize).into_iter().map(|x| x | base).collect()
            })
            .collect()
    }

    fn path_unions(&self, mut v: usize) -> (u64, u64) {
        // (vertex labels, edge labels) from v to the root, v included
        let (mut lv, mut le) = (0, 0);
        loop {
            lv |= self.nodes[v].label;
            le |= self.nodes[v].edge_label;
            match self.nodes[v].parent {
                Some(p) => v = p,
                None => return (lv, le),
            }
        }
    }
}

/// Subsets of `free` with exactly `r` elements.
pub fn subsets_of_size(free: u64, r: usize) -> Vec<u64> {
    let el = elems(free);
    let mut out = Vec::new();
    if r > el.len() {
        return out;
    }
    for local in ksets(el.len().max(1), r) {
        if el.is_empty() {
            out.push(0);
            break;
        }
        out.push(elems(local).iter().fold(0, |m, &i| m | bit(el[i - 1])));
    }
    out
}

/// The tree T_{e_j} of the extension procedure (FIFO work list).
pub fn build_extension_tree(n: usize, edges: &[u64], j: usize) -> Result<ExtensionTree> {
    let blocking = blocking_sets(edges, j)?;
    build_tree_with(n, edges[j - 1], blocking)
}

pub(crate) fn build_tree_with(n: usize, edge: u64, blocking: Vec<u64>) -> Result<ExtensionTree> {
    if blocking.is_empty() {
        return Err(Error::NoTree(format!("no blocking set avoids edge {:?}", elems(edge))));
    }
    let mut internal_count = vec![0usize; blocking.len()];
    let mut tree = ExtensionTree { n, edge, blocking, nodes: Vec::new() };
    tree.nodes.push(TreeNode { counter: 1, set_index: 0, parent: None, edge_label: 0, label: 0, leaf: None });
    internal_count[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let (above_v, _) = match tree.nodes[u].parent {
            Some(p) => tree.path_unions(p),
            None => (0, 0),
        };
        let si = tree.blocking[tree.nodes[u].set_index];
        let label = si & !above_v;
        tree.nodes[u].label = label;
        let (lv, le) = tree.path_unions(u);
        let mut sub: u64 = 0;
        loop {
            if sub == 0 {
                let (counter, set_index) = (tree.nodes[u].counter + 1, tree.nodes[u].set_index);
                tree.nodes.push(TreeNode { counter, set_index, parent: Some(u), edge_label: 0, label: 0, leaf: Some((lv, le)) });
            } else if let Some(r) = tree.blocking.iter().position(|&b| b & (le | sub) == 0) {
                let counter = 2 * internal_count[r] + 1;
                internal_count[r] += 1;
                tree.nodes.push(TreeNode { counter, set_index: r, parent: Some(u), edge_label: sub, label: 0, leaf: None });
                queue.push_back(tree.nodes.len() - 1);
            }
            // next submask of `label` in increasing order
            sub = (sub.wrapping_sub(label)) & label;
            if sub == 0 {
                break;
            }
        }
    }
    Ok(tree)
}

/// All trees for the edges in their stored order.
pub fn extension_trees(h: &Hypergraph) -> Result<Vec<ExtensionTree>> {
    (1..=h.edges.len()).map(|j| build_extension_tree(h.n, &h.edges, j)).collect()
}

/// Multiset of (position, delay) over every leaf of every tree, sorted.
pub fn tree_ball_specs(h: &Hypergraph) -> Result<Vec<BallSpec>> {
    let mut out = Vec::new();
    for t in extension_trees(h)? {
        out.extend(t.ball_specs());
    }
    out.sort_unstable();
    Ok(out)
}

/// The colex criterion on the stored ordering: every B_i = {s_i}, |s_i| = i-1.
pub fn is_colex_hypergraph(h: &Hypergraph) -> bool {
    (1..=h.edges.len()).all(|i| prefix_step_is_colex(&h.edges[..i]))
}

fn prefix_step_is_colex(edges: &[u64]) -> bool {
    let i = edges.len();
    match blocking_sets(edges, i) {
        Ok(b) => b.len() == 1 && b[0].count_ones() as usize == i - 1,
        Err(_) => false,
    }
}

/// A comfortable ordering maximising the colex prefix, and that prefix length.
pub fn supercomfortable_order(h: &Hypergraph) -> Result<(Vec<usize>, usize)> {
    if h.edges.len() > SC_MAX_EDGES {
        return Err(Error::Capacity(format!("{} edges exceed the supercomfortable search limit", h.edges.len())));
    }
    let base = comfortable_order(h);
    let mut best: Vec<usize> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; h.edges.len()];
    sc_search(h, &base, &mut used, &mut cur, &mut best);
    let sc = best.len();
    let mut order = best;
    for &i in &base {
        if !order.contains(&i) {
            order.push(i);
        }
    }
    Ok((order, sc))
}

fn sc_search(h: &Hypergraph, base: &[usize], used: &mut [bool], cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    if cur.len() > best.len() {
        *best = cur.clone();
    }
    if best.len() == base.len() {
        return;
    }
    // comfortable: the next edge must have the smallest remaining size
    let Some(min_size) = base.iter().filter(|&&i| !used[i]).map(|&i| h.edges[i].count_ones()).min() else {
        return;
    };
    let mut prefix: Vec<u64> = cur.iter().map(|&i| h.edges[i]).collect();
    for &i in base {
        if used[i] || h.edges[i].count_ones() != min_size {
            continue;
        }
        prefix.push(h.edges[i]);
        if prefix_step_is_colex(&prefix) {
            used[i] = true;
            cur.push(i);
            sc_search(h, base, used, cur, best);
            cur.pop();
            used[i] = false;
            if best.len() == base.len() {
                return;
            }
        }
        prefix.pop();
    }
}

/// Vertex roles of a colex hypergraph: `u[i]` is the private vertex of edge
/// `i` (0-based) and `v[i]` is v_{i+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColexLabels {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

/// H_C(n_1, ..., n_k) with its u/v vertex naming.
pub fn colex_hypergraph_labelled(n: usize, counts: &[usize]) -> Result<(Hypergraph, ColexLabels)> {
    check_n(n)?;
    let last = counts.iter().rposition(|&c| c > 0).map_or(0, |p| p + 1);
    let mut sum = 0usize;
    for (t, &c) in counts.iter().enumerate().take(last) {
        sum += c;
        if sum + t > n {
            return Err(Error::InvalidCounts(format!(
                "n_1 + ... + n_{} = {sum} exceeds n - {} + 1 = {}",
                t + 1,
                t + 1,
                n as i64 - t as i64
            )));
        }
    }
    let mut edges = Vec::new();
    let mut us = Vec::new();
    let mut vs = Vec::new();
    // a = a_{i-1}: the top of the free range for level i (level 1 starts at n)
    let mut top = n as i64;
    let mut vmask = 0u64;
    for (i, &c) in counts.iter().enumerate().take(last) {
        for x in 0..c as i64 {
            let u = (top - x) as usize;
            edges.push(vmask | bit(u));
            us.push(u);
        }
        // v_{i+1} = a_i + 1 where a_i = top - c - 1
        let v = top - c as i64;
        if i + 1 < last {
            if v < 1 {
                return Err(Error::InvalidCounts("ran out of vertices".into()));
            }
            vs.push(v as usize);
            vmask |= bit(v as usize);
        }
        top = v - 1;
    }
    Ok((Hypergraph { n, edges }, ColexLabels { u: us, v: vs }))
}

pub fn colex_hypergraph(n: usize, counts: &[usize]) -> Result<Hypergraph> {
    colex_hypergraph_labelled(n, counts).map(|x| x.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::{initial_segment, iterated_shadow, mask};

    fn ex1() -> Hypergraph {
        Hypergraph::from_elems(10, &[&[6, 7], &[7, 8], &[1, 2], &[2, 3, 4], &[5, 9, 10]]).unwrap()
    }

    fn m(e: &[usize]) -> u64 {
        mask(e)
    }

    #[test]
    fn hypergraph_examples() {
        let full = initial_segment(5, 3, 10).unwrap();
        assert!(hypergraph_of_family(&full).unwrap().edges.is_empty());
        let s = KSetFamily::from_elems(5, 3, &[&[1, 2, 3], &[1, 4, 5]]).unwrap();
        let h = hypergraph_of_family(&s).unwrap();
        assert_eq!(h.edges, vec![m(&[2, 4]), m(&[3, 4]), m(&[2, 5]), m(&[3, 5])]);
        assert_eq!(family_of_hypergraph(&h, 3).unwrap(), s);
        let none = Hypergraph::new(5, vec![]).unwrap();
        assert_eq!(family_of_hypergraph(&none, 3).unwrap(), full);
    }

    #[test]
    fn example1_round_trip() {
        let h = ex1();
        let s = family_of_hypergraph(&h, 4).unwrap();
        assert!(hypergraph_of_family(&s).unwrap().same_edges(&h));
        assert_eq!(truncate(&h, 2).edges, vec![m(&[6, 7]), m(&[7, 8]), m(&[1, 2])]);
        assert_eq!(truncate(&h, 4), h);
    }

    #[test]
    fn invalid_hypergraphs() {
        let h = Hypergraph::from_elems(5, &[&[1, 2], &[1, 2, 3]]).unwrap();
        assert!(matches!(family_of_hypergraph(&h, 3), Err(Error::InvalidHypergraph(_))));
        // a full star around {1}: every pair {1,x} is an edge, so {1} is a non-face
        let h = Hypergraph::from_elems(4, &[&[1, 2], &[1, 3], &[1, 4]]).unwrap();
        assert!(matches!(family_of_hypergraph(&h, 2), Err(Error::InvalidHypergraph(_))));
        let h = Hypergraph::from_elems(5, &[&[1, 2, 3, 4]]).unwrap();
        assert!(matches!(family_of_hypergraph(&h, 3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn example1_blocking_sets() {
        let h = ex1();
        let b = |j| blocking_sets(&h.edges, j).unwrap();
        assert_eq!(b(1), vec![0]);
        assert_eq!(b(2), vec![m(&[6])]);
        assert_eq!(b(3), vec![m(&[7]), m(&[6, 8])]);
        assert_eq!(b(4), vec![m(&[1, 7]), m(&[1, 6, 8])]);
        let mut expect = vec![m(&[2, 7]), m(&[1, 3, 7]), m(&[2, 6, 8]), m(&[1, 3, 6, 8]), m(&[1, 4, 7]), m(&[1, 4, 6, 8])];
        sort_blocking(&mut expect);
        assert_eq!(b(5), expect);
    }

    #[test]
    fn example1_trees() {
        let h = ex1();
        let shapes = |j| {
            let mut v = build_extension_tree(10, &h.edges, j).unwrap().leaf_shapes();
            v.sort();
            v
        };
        assert_eq!(shapes(1), vec![(0, 0)]);
        assert_eq!(shapes(2), vec![(1, 0)]);
        assert_eq!(shapes(3), vec![(1, 0), (3, 1)]);
        assert_eq!(shapes(4), vec![(2, 0), (4, 1)]);
        assert_eq!(shapes(5), vec![(2, 0), (4, 1), (4, 1), (5, 2), (6, 2), (7, 3)]);
    }

    /// Leaf blocks are pairwise disjoint and cover exactly the new extensions.
    pub(crate) fn check_partition(h: &Hypergraph, k: usize) {
        let mut seen: HashSet<u64> = HashSet::new();
        for j in 1..=h.edges.len() {
            let t = build_extension_tree(h.n, &h.edges, j).unwrap();
            let coeffs = t.leaf_coefficients(k);
            for (blk, c) in t.leaf_sets(k).into_iter().zip(coeffs) {
                assert_eq!(BigInt::from(blk.len()), c);
                for x in blk {
                    assert!(seen.insert(x), "set {:?} counted twice", elems(x));
                }
            }
        }
        let complement: HashSet<u64> =
            ksets(h.n, k).into_iter().filter(|&x| h.edges.iter().any(|&e| x & e == e)).collect();
        assert_eq!(seen, complement);
    }

    #[test]
    fn example1_partition() {
        for k in 3..=8 {
            check_partition(&ex1(), k);
        }
    }

    #[test]
    fn single_blocking_set_tree() {
        let t = build_tree_with(7, m(&[1, 2]), vec![0]).unwrap();
        assert_eq!(t.nodes.len(), 2);
        assert_eq!(t.leaf_coefficients(4), vec![binom(5, 2)]);
        assert!(matches!(build_tree_with(7, m(&[1]), vec![]), Err(Error::NoTree(_))));
    }

    #[test]
    fn ball_specs_example() {
        let s = KSetFamily::from_elems(5, 3, &[&[1, 2, 3], &[1, 4, 5]]).unwrap();
        let h = hypergraph_of_family(&s).unwrap();
        let specs: Vec<(u64, u64)> = tree_ball_specs(&h).unwrap().iter().map(|b| (b.position, b.delay)).collect();
        assert_eq!(specs, vec![(0, 2), (1, 2), (1, 2), (2, 2)]);
        assert!(tree_ball_specs(&Hypergraph::new(5, vec![]).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn colex_hypergraph_examples() {
        assert!(colex_hypergraph(8, &[0, 0, 0]).unwrap().edges.is_empty());
        let h = colex_hypergraph(10, &[2, 1]).unwrap();
        assert_eq!(h.edges, vec![m(&[10]), m(&[9]), m(&[7, 8])]);
        assert!(is_colex_hypergraph(&h.comfortable()));
        assert!(matches!(colex_hypergraph(4, &[3, 1]), Err(Error::InvalidCounts(_))));
        let (_, lab) = colex_hypergraph_labelled(10, &[2, 1, 2]).unwrap();
        assert_eq!(lab.v, vec![8, 6]);
        assert_eq!(lab.u, vec![10, 9, 7, 5, 4]);
    }

    #[test]
    fn colex_predicate_examples() {
        let a = Hypergraph::from_elems(6, &[&[1, 2], &[3, 4, 5]]).unwrap();
        assert!(!is_colex_hypergraph(&a));
        let b = Hypergraph::from_elems(6, &[&[1, 2], &[1, 3], &[2, 3, 4]]).unwrap();
        assert!(!is_colex_hypergraph(&b));
        assert_eq!(supercomfortable_order(&a).unwrap().1, 1);
        let one = Hypergraph::from_elems(6, &[&[2, 5]]).unwrap();
        assert_eq!(supercomfortable_order(&one).unwrap().1, 1);
        let c = colex_hypergraph(9, &[1, 2, 2]).unwrap();
        assert_eq!(supercomfortable_order(&c).unwrap().1, 5);
    }

    #[test]
    fn segment_hypergraph_is_colex_hypergraph() {
        for n in 2..=8 {
            for k in 1..=n.min(5) {
                let total = binom(n as i64, k as i64).to_u64().unwrap();
                for mm in 1..=total {
                    let h = hypergraph_of_family(&initial_segment(n, k, mm).unwrap()).unwrap();
                    let counts = h.size_profile(k);
                    let c = colex_hypergraph(n, &counts).unwrap();
                    assert!(c.same_edges(&h), "n={n} k={k} m={mm} {:?}", counts);
                    assert!(is_colex_hypergraph(&h));
                }
            }
        }
    }

    #[test]
    fn truncation_is_shadow_hypergraph() {
        let s = KSetFamily::from_elems(7, 4, &[&[1, 2, 3, 4], &[1, 2, 5, 6], &[3, 5, 6, 7], &[2, 4, 6, 7]]).unwrap();
        let h = hypergraph_of_family(&s).unwrap();
        for i in 0..4 {
            let sh = iterated_shadow(&s, i).unwrap();
            assert!(truncate(&h, 4 - i).same_edges(&hypergraph_of_family(&sh).unwrap()));
        }
    }
}
