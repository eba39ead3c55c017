//! Brute-force reference implementations, deliberately independent of the
//! library's algorithms. Only usable on tiny inputs.
#![allow(dead_code, clippy::needless_range_loop)]

use thetakit::{BipartiteGraph, Graph};

/// Smallest `l <= l_cap` admitting an assignment of subsets of `{0..l}` to the
/// vertices with `u ~ v` iff `member(|A_u ∩ A_v|)`, by trying every
/// assignment. `None` if no `l <= l_cap` works.
pub fn brute_theta(g: &Graph, member: impl Fn(u32) -> bool, l_cap: usize) -> Option<usize> {
    let n = g.n();
    (0..=l_cap).find(|&l| {
        let per = 1usize << l;
        let total = per.checked_pow(n as u32).expect("search space fits usize");
        (0..total).any(|code| {
            let sets: Vec<u32> = (0..n)
                .map(|v| ((code / per.pow(v as u32)) % per) as u32)
                .collect();
            (0..n).all(|u| {
                (u + 1..n).all(|v| member((sets[u] & sets[v]).count_ones()) == g.has_edge(u, v))
            })
        })
    })
}

/// Bipartite analogue: only cross pairs are constrained.
pub fn brute_theta_bip(
    g: &BipartiteGraph,
    member: impl Fn(u32) -> bool,
    l_cap: usize,
) -> Option<usize> {
    let (n1, n2) = (g.n1(), g.n2());
    let n = n1 + n2;
    (0..=l_cap).find(|&l| {
        let per = 1usize << l;
        let total = per.checked_pow(n as u32).expect("search space fits usize");
        (0..total).any(|code| {
            let sets: Vec<u32> = (0..n)
                .map(|v| ((code / per.pow(v as u32)) % per) as u32)
                .collect();
            (0..n1).all(|x| {
                (0..n2).all(|y| member((sets[x] & sets[n1 + y]).count_ones()) == g.has_edge(x, y))
            })
        })
    })
}

/// Rank over GF(p) by plain Gaussian elimination with inverses from Fermat.
pub fn rank_mod(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(p);
        }
    }
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let inv = |a: i64| {
        let (mut r, mut b, mut e) = (1i64, a, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let iv = inv(m[rank][c]);
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * iv % p;
                for k in 0..cols {
                    m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over the rationals by fraction-free elimination in i128.
pub fn rank_rational(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        for r in rank + 1..rows {
            if m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                let mut g = 0;
                for k in 0..cols {
                    m[r][k] = m[r][k] * a - m[rank][k] * b;
                    g = gcd(g, m[r][k].abs());
                }
                if g > 1 {
                    for k in 0..cols {
                        m[r][k] /= g;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Minimum rank over GF(p) by enumerating every symmetric matrix with the
/// graph's off-diagonal pattern (no normalization).
pub fn brute_minrank(g: &Graph, p: i64) -> usize {
    let n = g.n();
    let edges = g.edges();
    let slots = edges.len() + n;
    let mut digits = vec![0i64; slots];
    let mut best = n;
    loop {
        let mut m = vec![vec![0i64; n]; n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            m[u][v] = digits[e] + 1;
            m[v][u] = digits[e] + 1;
        }
        for v in 0..n {
            m[v][v] = digits[edges.len() + v];
        }
        best = best.min(rank_mod(m, p));
        // odometer: edge digits range over 0..p-1, diagonal digits over 0..p
        let mut i = 0;
        loop {
            if i == slots {
                return best;
            }
            let radix = if i < edges.len() { p - 1 } else { p };
            digits[i] += 1;
            if digits[i] < radix {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Bipartite minimum rank over GF(p): every matrix with exactly the edge
/// pattern, no normalization.
pub fn brute_bminrank(g: &BipartiteGraph, p: i64) -> usize {
    let (n1, n2) = (g.n1(), g.n2());
    let cells: Vec<(usize, usize)> = (0..n1)
        .flat_map(|x| (0..n2).map(move |y| (x, y)))
        .filter(|&(x, y)| g.has_edge(x, y))
        .collect();
    let mut digits = vec![0i64; cells.len()];
    let mut best = n1.min(n2);
    loop {
        let mut m = vec![vec![0i64; n2]; n1];
        for (c, &(x, y)) in cells.iter().enumerate() {
            m[x][y] = digits[c] + 1;
        }
        best = best.min(rank_mod(m, p));
        let mut i = 0;
        loop {
            if i == cells.len() {
                return best;
            }
            digits[i] += 1;
            if digits[i] < p - 1 {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Minimum real rank over symmetric matrices with integer entries in
/// `[-bound, bound]`, edge entries nonzero. `fixed_positive` edges may be
/// taken positive (valid after a diagonal ±1 similarity along a forest).
pub fn bounded_real_minrank(g: &Graph, bound: i128, fixed_positive: &[(usize, usize)]) -> usize {
    let n = g.n();
    let edges = g.edges();
    let edge_vals: Vec<Vec<i128>> = edges
        .iter()
        .map(|e| {
            (-bound..=bound)
                .filter(|&x| x != 0 && (x > 0 || !fixed_positive.contains(e)))
                .collect()
        })
        .collect();
    let diag_vals: Vec<i128> = (-bound..=bound).collect();
    let mut choice = vec![0usize; edges.len() + n];
    let mut best = n;
    loop {
        let mut m = vec![vec![0i128; n]; n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            m[u][v] = edge_vals[e][choice[e]];
            m[v][u] = m[u][v];
        }
        for v in 0..n {
            m[v][v] = diag_vals[choice[edges.len() + v]];
        }
        best = best.min(rank_rational(m));
        let mut i = 0;
        loop {
            if i == choice.len() {
                return best;
            }
            let radix = if i < edges.len() {
                edge_vals[i].len()
            } else {
                diag_vals.len()
            };
            choice[i] += 1;
            if choice[i] < radix {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Binomial coefficient by the multiplicative formula in u128.
pub fn choose(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Coefficients `a_0..a_d` of `f` in the binomial basis mod p, by triangular
/// substitution `a_x = f(x) - Σ_{t<x} a_t C(x,t)`.
pub fn basis_coeffs(f: impl Fn(u64) -> i64, d: usize, p: i64) -> Vec<i64> {
    let mut a: Vec<i64> = Vec::with_capacity(d + 1);
    for x in 0..=d as u64 {
        let partial: i64 = a
            .iter()
            .enumerate()
            .map(|(t, &at)| at * (choose(x, t as u64) % p as u128) as i64 % p)
            .sum();
        a.push((f(x) - partial).rem_euclid(p));
    }
    a
}

/// Number of isomorphism classes of graphs on `n` vertices, by brute-force
/// canonical forms over all permutations.
pub fn iso_class_count(n: usize) -> usize {
    let perms = permutations(n);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut canon = std::collections::BTreeSet::new();
    for mask in 0u64..1 << pairs.len() {
        let has = |u: usize, v: usize| {
            let (a, b) = (u.min(v), u.max(v));
            let idx = pairs.iter().position(|&e| e == (a, b)).unwrap();
            mask >> idx & 1 == 1
        };
        let best = perms
            .iter()
            .map(|pi| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|&(_, &(u, v))| has(pi[u], pi[v]))
                    .fold(0u64, |acc, (i, _)| acc | 1 << i)
            })
            .min()
            .unwrap();
        canon.insert(best);
    }
    canon.len()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `N(u) − {v} = N(v) − {u}` checked from the edge relation directly.
pub fn has_twin_pair(g: &Graph) -> bool {
    let n = g.n();
    (0..n).any(|u| {
        (u + 1..n).any(|v| {
            (0..n)
                .filter(|&w| w != u && w != v)
                .all(|w| g.has_edge(u, w) == g.has_edge(v, w))
        })
    })
}
