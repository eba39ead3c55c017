//! Minimum rank over GF(p) by exhaustive enumeration of the matrices with a
//! prescribed off-diagonal pattern, and known closed forms over the reals.
//!
//! Diagonal similarity `D A D` (and `D1 B D2` in the bipartite case) keeps
//! both rank and zero pattern, so the entries on a spanning forest of the
//! graph can be fixed to 1 before enumerating.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{bits, BipartiteGraph, Graph};
use crate::linalg::{rank_gf2, rank_mod, ExactMatrix, Field};

#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            deadline: None,
        }
    }

    fn exceeded(&self, nodes: u64) -> bool {
        self.max_nodes.is_some_and(|m| nodes > m)
            || (nodes.is_multiple_of(256) && self.deadline.is_some_and(|d| Instant::now() >= d))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinRankResult {
    /// `witness` has rank `rank` and exactly the requested pattern.
    Exact { rank: usize, witness: ExactMatrix },
    Unknown {
        nodes: u64,
        best_upper: Option<usize>,
    },
}

impl MinRankResult {
    pub fn value(&self) -> Option<usize> {
        match self {
            MinRankResult::Exact { rank, .. } => Some(*rank),
            MinRankResult::Unknown { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&ExactMatrix> {
        match self {
            MinRankResult::Exact { witness, .. } => Some(witness),
            MinRankResult::Unknown { .. } => None,
        }
    }
}

/// Edges of a BFS spanning forest, as indices into `edges`.
fn spanning_forest(n: usize, edges: &[(usize, usize)]) -> Vec<bool> {
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], mut v: usize) -> usize {
        while c[v] != v {
            c[v] = c[c[v]];
            v = c[v];
        }
        v
    }
    edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (find(&mut comp, u), find(&mut comp, v));
            if a != b {
                comp[a] = b;
                true
            } else {
                false
            }
        })
        .collect()
}

/// Advances a little-endian odometer whose digits range over `lo..hi`;
/// returns `false` after the last value.
fn step(digits: &mut [u64], lo: u64, hi: u64) -> bool {
    for d in digits.iter_mut() {
        if *d + 1 < hi {
            *d += 1;
            return true;
        }
        *d = lo;
    }
    false
}

/// Closure of `black` under the rule "a black vertex with exactly one white
/// neighbour turns it black".
fn force(g: &Graph, mut black: u64) -> u64 {
    loop {
        let mut changed = false;
        for v in bits(black) {
            let white = g.neighbors(v) & !black;
            if white.count_ones() == 1 {
                black |= white;
                changed = true;
            }
        }
        if !changed {
            return black;
        }
    }
}

/// Zero forcing number: the smallest vertex set whose forcing closure is
/// everything. It bounds the nullity of every matrix fitting `g`, over any
/// field, so `mr(G) >= n - Z(G)`.
pub fn zero_forcing_number(g: &Graph) -> usize {
    let n = g.n();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0..=n)
        .find(|&size| {
            let mut found = false;
            subsets_of_size(n, size, &mut |s| {
                found = force(g, s) == all;
                found
            });
            found
        })
        .expect("the full vertex set forces")
}

/// Calls `f` on each `size`-subset of `0..n` until it returns true.
fn subsets_of_size(n: usize, size: usize, f: &mut dyn FnMut(u64) -> bool) {
    fn go(start: usize, n: usize, left: usize, acc: u64, f: &mut dyn FnMut(u64) -> bool) -> bool {
        if left == 0 {
            return f(acc);
        }
        (start..=n - left).any(|v| go(v + 1, n, left - 1, acc | 1 << v, f))
    }
    go(0, n, size, 0, f);
}

/// `mr_F(G)` for `F = GF(p)`: least rank of a symmetric matrix whose
/// off-diagonal nonzeros are exactly the edges of `g`, diagonal free.
pub fn minrank_gfp(g: &Graph, p: u64, budget: &Budget) -> Result<MinRankResult> {
    let field = Field::prime(p)?;
    let n = g.n();
    // search stops as soon as it meets this bound
    let lower = usize::from(g.edge_count() > 0).max(n - zero_forcing_number(g));
    if p == 2 {
        return Ok(minrank_gf2(g, budget, lower));
    }
    let edges = g.edges();
    let forest = spanning_forest(n, &edges);
    let free: Vec<usize> = (0..edges.len()).filter(|&e| !forest[e]).collect();
    let mut offdiag = vec![1u64; free.len()];
    let mut nodes = 0u64;
    let mut best: Option<(usize, Vec<u64>)> = None;
    let mut base = vec![0u64; n * n];
    loop {
        for &(u, v) in &edges {
            base[u * n + v] = 1;
            base[v * n + u] = 1;
        }
        for (k, &e) in free.iter().enumerate() {
            let (u, v) = edges[e];
            base[u * n + v] = offdiag[k];
            base[v * n + u] = offdiag[k];
        }
        let mut diag = vec![0u64; n];
        loop {
            nodes += 1;
            if budget.exceeded(nodes) {
                return Ok(MinRankResult::Unknown {
                    nodes,
                    best_upper: best.map(|b| b.0),
                });
            }
            let mut a = base.clone();
            for (i, &d) in diag.iter().enumerate() {
                a[i * n + i] = d;
            }
            let r = rank_mod(a.clone(), n, n, p);
            if best.as_ref().is_none_or(|b| r < b.0) {
                best = Some((r, a));
                if r == lower {
                    break;
                }
            }
            if !step(&mut diag, 0, p) {
                break;
            }
        }
        if best.as_ref().is_some_and(|b| b.0 == lower) || !step(&mut offdiag, 1, p) {
            break;
        }
    }
    let (rank, entries) = best.expect("at least one matrix enumerated");
    let values: Vec<i64> = entries.iter().map(|&v| v as i64).collect();
    Ok(MinRankResult::Exact {
        rank,
        witness: ExactMatrix::from_ints(field, n, n, &values)?,
    })
}

fn minrank_gf2(g: &Graph, budget: &Budget, lower: usize) -> MinRankResult {
    let n = g.n();
    let mut best: Option<(usize, u64)> = None;
    let mut nodes = 0u64;
    let diagonals = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut d = 0u64;
    loop {
        nodes += 1;
        if budget.exceeded(nodes) {
            return MinRankResult::Unknown {
                nodes,
                best_upper: best.map(|b| b.0),
            };
        }
        let rows: Vec<u64> = (0..n).map(|i| g.neighbors(i) | (d & 1 << i)).collect();
        let r = rank_gf2(rows);
        if best.is_none_or(|b| r < b.0) {
            best = Some((r, d));
        }
        if r == lower || d == diagonals {
            break;
        }
        d += 1;
    }
    let (rank, d) = best.expect("at least one diagonal enumerated");
    let mut witness = ExactMatrix::zeros(Field::Prime(2), n, n);
    for i in 0..n {
        for j in bits(g.neighbors(i) | (d & 1 << i)) {
            witness.set_int(i, j, 1);
        }
    }
    MinRankResult::Exact { rank, witness }
}

/// `bmr_F(G)` for `F = GF(p)`: least rank of an `n1 × n2` matrix whose
/// support is exactly the biadjacency pattern.
pub fn bipartite_minrank_gfp(g: &BipartiteGraph, p: u64, budget: &Budget) -> Result<MinRankResult> {
    let field = Field::prime(p)?;
    let (n1, n2) = (g.n1(), g.n2());
    let lower = usize::from(g.edge_count() > 0);
    let edges: Vec<(usize, usize)> = (0..n1)
        .flat_map(|x| bits(g.row(x)).map(move |y| (x, y)))
        .collect();
    // forest on the vertex set V1 ∪ V2 (columns shifted by n1)
    let shifted: Vec<(usize, usize)> = edges.iter().map(|&(x, y)| (x, n1 + y)).collect();
    let forest = spanning_forest(n1 + n2, &shifted);
    let free: Vec<usize> = (0..edges.len()).filter(|&e| !forest[e]).collect();
    let mut values = vec![1u64; free.len()];
    let mut nodes = 0u64;
    let mut best: Option<(usize, Vec<u64>)> = None;
    loop {
        nodes += 1;
        if budget.exceeded(nodes) {
            return Ok(MinRankResult::Unknown {
                nodes,
                best_upper: best.map(|b| b.0),
            });
        }
        let mut a = vec![0u64; n1 * n2];
        for &(x, y) in &edges {
            a[x * n2 + y] = 1;
        }
        for (k, &e) in free.iter().enumerate() {
            let (x, y) = edges[e];
            a[x * n2 + y] = values[k];
        }
        let r = rank_mod(a.clone(), n1, n2, p);
        if best.as_ref().is_none_or(|b| r < b.0) {
            best = Some((r, a));
        }
        if r == lower || !step(&mut values, 1, p) {
            break;
        }
    }
    let (rank, entries) = best.expect("at least one matrix enumerated");
    let values: Vec<i64> = entries.iter().map(|&v| v as i64).collect();
    Ok(MinRankResult::Exact {
        rank,
        witness: ExactMatrix::from_ints(field, n1, n2, &values)?,
    })
}

/// Graph classes whose real minimum rank has a closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormClass {
    Edgeless,
    Complete,
    Path,
    Cycle,
    CompleteBipartite,
    /// Components each in one of the other classes; ranks add.
    DisjointUnion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealMinRank {
    Known { rank: usize, class: ClosedFormClass },
    Unsupported,
}

impl RealMinRank {
    pub fn value(&self) -> Option<usize> {
        match self {
            RealMinRank::Known { rank, .. } => Some(*rank),
            RealMinRank::Unsupported => None,
        }
    }
}

/// `mr(G)` over the reals for edgeless graphs (0), `K_n` (1), `P_n` (n−1),
/// `C_n` (n−2) and `K_{a,b}` (2), and disjoint unions of these (the rank of a
/// block-diagonal matrix is the sum of the block ranks); anything else is
/// unsupported.
pub fn minrank_real_closed_form(g: &Graph) -> RealMinRank {
    let n = g.n();
    let m = g.edge_count();
    let known = |rank, class| RealMinRank::Known { rank, class };
    if m == 0 {
        return known(0, ClosedFormClass::Edgeless);
    }
    if m == n * (n - 1) / 2 {
        return known(1, ClosedFormClass::Complete);
    }
    if !g.is_connected() {
        let mut total = 0;
        for comp in g.components() {
            let h = g
                .induced_by_mask(comp)
                .expect("component is a valid vertex mask");
            match minrank_real_closed_form(&h) {
                RealMinRank::Known { rank, .. } => total += rank,
                RealMinRank::Unsupported => return RealMinRank::Unsupported,
            }
        }
        return known(total, ClosedFormClass::DisjointUnion);
    }
    let max_deg = g.max_degree();
    if m == n - 1 && max_deg <= 2 {
        return known(n - 1, ClosedFormClass::Path);
    }
    if m == n && (0..n).all(|v| g.degree(v) == 2) {
        return known(n - 2, ClosedFormClass::Cycle);
    }
    // complete multipartite with two parts: non-adjacency is an equivalence
    // relation with exactly two classes
    let side = g.complement().neighbors(0) | 1;
    let other = !side & ((1u64 << n) - 1);
    let closed = |mask: u64| bits(mask).all(|v| g.neighbors(v) == !mask & ((1u64 << n) - 1));
    if other != 0 && closed(side) && closed(other) {
        return known(2, ClosedFormClass::CompleteBipartite);
    }
    RealMinRank::Unsupported
}

/// Checks that `m` is symmetric with off-diagonal support exactly `E(g)`.
pub fn matches_pattern(g: &Graph, m: &ExactMatrix) -> bool {
    let n = g.n();
    m.rows() == n
        && m.cols() == n
        && (0..n).all(|i| {
            (0..n).all(|j| {
                i == j || (m.entry(i, j) == m.entry(j, i) && m.is_zero_at(i, j) != g.has_edge(i, j))
            })
        })
}

pub fn matches_bipartite_pattern(g: &BipartiteGraph, m: &ExactMatrix) -> bool {
    m.rows() == g.n1()
        && m.cols() == g.n2()
        && (0..g.n1()).all(|x| (0..g.n2()).all(|y| m.is_zero_at(x, y) != g.has_edge(x, y)))
}

/// Validates the enumeration limits used by the CLI defaults.
pub fn check_size(n: usize, p: u64) -> Result<()> {
    let limit = match p {
        2 => 8,
        3 | 5 => 6,
        _ => 5,
    };
    if n > limit {
        return Err(Error::Budget(format!(
            "exhaustive minimum rank over GF({p}) is limited to {limit} vertices"
        )));
    }
    Ok(())
}
