//! Exact L-intersection numbers by incremental-universe backtracking.
//!
//! For each candidate universe size `l` (ascending), vertices receive subsets
//! of `{1..l}` one at a time; every completed pair is checked against the
//! adjacency rule as soon as both endpoints are assigned.
//!
//! Element relabelings are factored out by keeping the ground set split into
//! classes of elements that no assigned set distinguishes. Elements inside a
//! class are interchangeable, so the next set only chooses *how many* of each
//! class to take and always takes the lowest ones. Classes therefore stay
//! contiguous ranges, and the first vertex always gets a prefix `{1..c}`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Graph};
use crate::linalg::{binomial, is_prime};
use crate::sets::{SetFamily, MAX_GROUND};

/// Hard ceiling on the universe size the default search bound will reach.
pub const DEFAULT_L_CAP: usize = 20;

/// The set `L` of admissible intersection sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LSpec {
    Finite(Vec<u32>),
    Modular {
        p: u64,
        residues: Vec<u64>,
    },
    /// `L = {1, 2, ...}`.
    Threshold,
    /// All non-negative integers except the listed ones.
    CofiniteComplement(Vec<u32>),
}

impl LSpec {
    pub fn finite(values: &[u32]) -> Result<Self> {
        let mut v = values.to_vec();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(Error::arg("finite L must be nonempty"));
        }
        Ok(LSpec::Finite(v))
    }

    pub fn modular(p: u64, residues: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::arg(format!("{p} is not prime")));
        }
        let mut r = residues.to_vec();
        r.sort_unstable();
        r.dedup();
        if r.is_empty() {
            return Err(Error::arg("residue set must be nonempty"));
        }
        if let Some(bad) = r.iter().find(|&&x| x >= p) {
            return Err(Error::arg(format!(
                "residue {bad} out of range for p = {p}"
            )));
        }
        Ok(LSpec::Modular { p, residues: r })
    }

    pub fn cofinite(excluded: &[u32]) -> Self {
        let mut v = excluded.to_vec();
        v.sort_unstable();
        v.dedup();
        LSpec::CofiniteComplement(v)
    }

    /// The odd numbers.
    pub fn odd() -> Self {
        LSpec::Modular {
            p: 2,
            residues: vec![1],
        }
    }

    pub fn member(&self, x: u64) -> bool {
        match self {
            LSpec::Finite(v) => u32::try_from(x).is_ok_and(|x| v.binary_search(&x).is_ok()),
            LSpec::Modular { p, residues } => residues.contains(&(x % p)),
            LSpec::Threshold => x >= 1,
            LSpec::CofiniteComplement(excl) => {
                u32::try_from(x).map_or(true, |x| excl.binary_search(&x).is_err())
            }
        }
    }

    /// Bit `x` set iff `x ∈ L`, for `x` in `0..=32`.
    fn membership_table(&self) -> u64 {
        (0..=MAX_GROUND as u64).fold(0, |m, x| m | (self.member(x) as u64) << x)
    }

    /// `s = |R|` for modular types, `|L|` for finite ones.
    pub fn size_parameter(&self) -> Option<usize> {
        match self {
            LSpec::Finite(v) => Some(v.len()),
            LSpec::Modular { residues, .. } => Some(residues.len()),
            _ => None,
        }
    }
}

impl fmt::Display for LSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(",");
        match self {
            LSpec::Finite(v) => write!(f, "finite:{}", join(&mut v.iter().map(u32::to_string))),
            LSpec::Modular { p, residues } => {
                write!(
                    f,
                    "mod:{p}:{}",
                    join(&mut residues.iter().map(u64::to_string))
                )
            }
            LSpec::Threshold => write!(f, "threshold"),
            LSpec::CofiniteComplement(v) => {
                write!(
                    f,
                    "cofinite-excl:{}",
                    join(&mut v.iter().map(u32::to_string))
                )
            }
        }
    }
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::arg(format!("bad {what} value {t:?}")))
        })
        .collect()
}

impl FromStr for LSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "threshold" {
            return Ok(LSpec::Threshold);
        }
        if let Some(rest) = s.strip_prefix("finite:") {
            return LSpec::finite(&parse_list(rest, "finite L")?);
        }
        if let Some(rest) = s.strip_prefix("mod:") {
            let (p, r) = rest
                .split_once(':')
                .ok_or_else(|| Error::arg(format!("expected mod:<p>:<residues>, got {s:?}")))?;
            let p: u64 = p
                .parse()
                .map_err(|_| Error::arg(format!("bad prime {p:?}")))?;
            return LSpec::modular(p, &parse_list(r, "residue")?);
        }
        if let Some(rest) = s.strip_prefix("cofinite-excl:") {
            return Ok(LSpec::cofinite(&parse_list(rest, "excluded")?));
        }
        Err(Error::arg(format!("unrecognized L descriptor {s:?}")))
    }
}

/// Which adjacency rule and set-size restriction a representation obeys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Full,
    /// Only pairs across the parts are constrained; sets `0..n1` belong to `V1`.
    Bipartite {
        n1: usize,
    },
    Uniform(usize),
    Sizes(Vec<usize>),
}

/// A verified assignment of sets to vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub family: SetFamily,
    pub lspec: LSpec,
    pub universe: usize,
    pub mode: Mode,
}

impl Representation {
    /// Set-family text followed by the L descriptor line.
    pub fn to_text(&self) -> String {
        format!("{}{}\n", self.family.to_text(), self.lspec)
    }
}

pub fn verify_representation(g: &Graph, fam: &SetFamily, lspec: &LSpec) -> Result<bool> {
    if fam.len() != g.n() {
        return Err(Error::arg(format!(
            "family has {} sets for {} vertices",
            fam.len(),
            g.n()
        )));
    }
    Ok((0..g.n()).all(|u| {
        (u + 1..g.n())
            .all(|v| g.has_edge(u, v) == lspec.member(fam.intersection_size(u, fam, v) as u64))
    }))
}

/// Checks the rule across parts only; `fam` lists `V1` then `V2`.
pub fn verify_bipartite_representation(
    g: &BipartiteGraph,
    fam: &SetFamily,
    lspec: &LSpec,
) -> Result<bool> {
    let (n1, n2) = (g.n1(), g.n2());
    if fam.len() != n1 + n2 {
        return Err(Error::arg(format!(
            "family has {} sets for {} vertices",
            fam.len(),
            n1 + n2
        )));
    }
    Ok((0..n1).all(|x| {
        (0..n2)
            .all(|y| g.has_edge(x, y) == lspec.member(fam.intersection_size(x, fam, n1 + y) as u64))
    }))
}

fn sizes_ok(fam: &SetFamily, mode: &Mode) -> bool {
    match mode {
        Mode::Uniform(k) => fam.sets().iter().all(|s| s.count_ones() as usize == *k),
        Mode::Sizes(ks) => fam
            .sets()
            .iter()
            .all(|s| ks.contains(&(s.count_ones() as usize))),
        _ => true,
    }
}

/// Search limits. `l_max: None` uses [`default_l_max`].
#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub l_max: Option<usize>,
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
}

impl SolveOptions {
    pub fn with_l_max(l_max: usize) -> Self {
        SolveOptions {
            l_max: Some(l_max),
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    /// Every universe size up to the bound was refuted.
    Exhausted,
    /// The node or time budget ran out first.
    Budget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaResult {
    Exact(Representation),
    /// No witness found. Every universe size below `refuted_below` was
    /// exhaustively refuted; `bound` is the search limit.
    Unknown {
        bound: usize,
        refuted_below: usize,
        reason: UnknownReason,
        nodes: u64,
    },
}

impl ThetaResult {
    pub fn value(&self) -> Option<usize> {
        match self {
            ThetaResult::Exact(r) => Some(r.universe),
            ThetaResult::Unknown { .. } => None,
        }
    }

    /// True when every universe size up to `l` was refuted.
    pub fn refuted_through(&self, l: usize) -> bool {
        matches!(self, ThetaResult::Unknown { refuted_below, .. } if *refuted_below > l)
    }

    pub fn witness(&self) -> Option<&Representation> {
        match self {
            ThetaResult::Exact(r) => Some(r),
            ThetaResult::Unknown { .. } => None,
        }
    }
}

/// `min(20, n(n-1)/2 + c)` where `c` is the largest value the finite part of
/// `L` mentions (its maximum, the largest excluded value, or `p`).
pub fn default_l_max(n: usize, lspec: &LSpec) -> usize {
    let extra = match lspec {
        LSpec::Finite(v) => v.last().copied().unwrap_or(0) as usize,
        LSpec::CofiniteComplement(v) => v.last().copied().unwrap_or(0) as usize,
        LSpec::Modular { p, .. } => *p as usize,
        LSpec::Threshold => 0,
    };
    (n * (n.saturating_sub(1)) / 2 + extra).clamp(1, DEFAULT_L_CAP)
}

/// Dropping unused elements never changes an intersection, so sets with sizes
/// from `sizes` fit in `n * max(sizes)` elements if they fit at all. Capped at
/// [`MAX_GROUND`]; below the cap, exhausting this bound proves that no such
/// representation exists.
pub fn uniform_l_max(n: usize, sizes: &[usize]) -> usize {
    (n * sizes.iter().copied().max().unwrap_or(0)).min(MAX_GROUND)
}

/// Per-position search data; `partners` lists earlier positions.
struct Problem {
    n: usize,
    partners: Vec<Vec<(usize, bool)>>,
    must_differ: Vec<Vec<usize>>,
    sizes: Option<u64>,
    table: u64,
}

enum Flow {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Search<'a> {
    problem: &'a Problem,
    sets: Vec<u32>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
}

impl Search<'_> {
    fn out_of_budget(&self) -> bool {
        self.nodes >= self.max_nodes
            || (self.nodes.is_multiple_of(1024)
                && self.deadline.is_some_and(|d| Instant::now() >= d))
    }

    fn dfs(&mut self, pos: usize, classes: &[(u32, u32)]) -> Flow {
        if pos == self.problem.n {
            return Flow::Found;
        }
        let mut counts = vec![0u32; classes.len()];
        loop {
            self.nodes += 1;
            if self.out_of_budget() {
                return Flow::OutOfBudget;
            }
            let set = classes
                .iter()
                .zip(&counts)
                .fold(0u32, |m, (&(start, _), &c)| m | range_mask(start, c));
            if self.admissible(pos, set) {
                self.sets[pos] = set;
                let mut next = Vec::with_capacity(classes.len() * 2);
                for (&(start, len), &c) in classes.iter().zip(&counts) {
                    if c > 0 {
                        next.push((start, c));
                    }
                    if c < len {
                        next.push((start + c, len - c));
                    }
                }
                match self.dfs(pos + 1, &next) {
                    Flow::Exhausted => {}
                    other => return other,
                }
            }
            // odometer over per-class counts
            let mut k = 0;
            loop {
                if k == counts.len() {
                    return Flow::Exhausted;
                }
                if counts[k] < classes[k].1 {
                    counts[k] += 1;
                    break;
                }
                counts[k] = 0;
                k += 1;
            }
        }
    }

    fn admissible(&self, pos: usize, set: u32) -> bool {
        let p = self.problem;
        if let Some(sizes) = p.sizes {
            if sizes >> set.count_ones() & 1 == 0 {
                return false;
            }
        }
        p.must_differ[pos].iter().all(|&j| self.sets[j] != set)
            && p.partners[pos].iter().all(|&(j, adjacent)| {
                let x = (set & self.sets[j]).count_ones();
                (p.table >> x & 1 == 1) == adjacent
            })
    }
}

fn range_mask(start: u32, len: u32) -> u32 {
    if len == 0 {
        0
    } else {
        (u32::MAX >> (32 - len)) << start
    }
}

/// Outcome of a search at one fixed universe size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedSizeOutcome {
    /// Sets in search-position order.
    Found(Vec<u32>),
    Refuted,
    OutOfBudget,
}

fn search_fixed(
    problem: &Problem,
    l: usize,
    max_nodes: u64,
    deadline: Option<Instant>,
    nodes: &mut u64,
) -> FixedSizeOutcome {
    let mut s = Search {
        problem,
        sets: vec![0; problem.n],
        nodes: *nodes,
        max_nodes,
        deadline,
    };
    let classes: Vec<(u32, u32)> = if l == 0 {
        Vec::new()
    } else {
        vec![(0, l as u32)]
    };
    let flow = s.dfs(0, &classes);
    *nodes = s.nodes;
    match flow {
        Flow::Found => FixedSizeOutcome::Found(s.sets),
        Flow::Exhausted => FixedSizeOutcome::Refuted,
        Flow::OutOfBudget => FixedSizeOutcome::OutOfBudget,
    }
}

/// A search instance in original vertex labels, before ordering.
struct Instance {
    n: usize,
    /// `constraint(u, v)`: `None` if unconstrained, else whether adjacent.
    constraint: Vec<Vec<Option<bool>>>,
    differ: Vec<Vec<bool>>,
    order: Vec<usize>,
    /// Minimum number of pairwise distinct sets any representation needs.
    distinct_needed: usize,
}

impl Instance {
    fn full(g: &Graph) -> Instance {
        let n = g.n();
        let constraint = (0..n)
            .map(|u| (0..n).map(|v| (u != v).then(|| g.has_edge(u, v))).collect())
            .collect();
        let differ = (0..n)
            .map(|u| (0..n).map(|v| u != v && !g.are_twins(u, v)).collect())
            .collect();
        Instance {
            n,
            constraint,
            differ,
            order: g.degeneracy_order(),
            distinct_needed: g.twin_reduce().survivors.len(),
        }
    }

    fn bipartite(g: &BipartiteGraph) -> Instance {
        let (n1, n2) = (g.n1(), g.n2());
        let n = n1 + n2;
        let neigh: Vec<u64> = (0..n1)
            .map(|x| g.row(x))
            .chain((0..n2).map(|y| g.column(y)))
            .collect();
        let part = |v: usize| v >= n1;
        let constraint = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| {
                        (part(u) != part(v)).then(|| {
                            let (x, y) = if part(u) { (v, u - n1) } else { (u, v - n1) };
                            g.has_edge(x, y)
                        })
                    })
                    .collect()
            })
            .collect();
        let differ = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| u != v && part(u) == part(v) && neigh[u] != neigh[v])
                    .collect()
            })
            .collect();
        let distinct = |v: &[u64]| {
            let mut s = v.to_vec();
            s.sort_unstable();
            s.dedup();
            s.len()
        };
        // interleave the parts so cross constraints appear early
        let mut order = Vec::with_capacity(n);
        for i in 0..n1.max(n2) {
            if i < n1 {
                order.push(i);
            }
            if i < n2 {
                order.push(n1 + i);
            }
        }
        Instance {
            n,
            constraint,
            differ,
            order,
            distinct_needed: distinct(&neigh[..n1]).max(distinct(&neigh[n1..])),
        }
    }

    fn problem(&self, lspec: &LSpec, sizes: Option<&[usize]>) -> Problem {
        let mut partners = Vec::with_capacity(self.n);
        let mut must_differ = Vec::with_capacity(self.n);
        for (pos, &u) in self.order.iter().enumerate() {
            let earlier = &self.order[..pos];
            partners.push(
                earlier
                    .iter()
                    .enumerate()
                    .filter_map(|(j, &v)| self.constraint[u][v].map(|adj| (j, adj)))
                    .collect(),
            );
            must_differ.push(
                earlier
                    .iter()
                    .enumerate()
                    .filter(|&(_, &v)| self.differ[u][v])
                    .map(|(j, _)| j)
                    .collect(),
            );
        }
        Problem {
            n: self.n,
            partners,
            must_differ,
            sizes: sizes.map(|ks| ks.iter().fold(0u64, |m, &k| m | 1 << k)),
            table: lspec.membership_table(),
        }
    }

    /// Smallest `l` with enough admissible sets to keep the forced-distinct
    /// vertices apart.
    fn lower_bound(&self, sizes: Option<&[usize]>) -> usize {
        let need = self.distinct_needed as u64;
        let min_size = sizes.and_then(|ks| ks.iter().min().copied()).unwrap_or(0);
        (min_size..=MAX_GROUND)
            .find(|&l| {
                let available: num_bigint::BigUint = match sizes {
                    None => num_bigint::BigUint::from(1u8) << l,
                    Some(ks) => ks.iter().map(|&k| binomial(l as u64, k as u64)).sum(),
                };
                available >= need.into()
            })
            .unwrap_or(MAX_GROUND)
    }
}

fn solve(
    inst: &Instance,
    lspec: &LSpec,
    mode: Mode,
    sizes: Option<&[usize]>,
    opts: &SolveOptions,
) -> ThetaResult {
    let l_max = opts
        .l_max
        .unwrap_or_else(|| default_l_max(inst.n, lspec))
        .min(MAX_GROUND);
    let problem = inst.problem(lspec, sizes);
    let max_nodes = opts.max_nodes.unwrap_or(u64::MAX);
    let mut nodes = 0;
    let start = inst.lower_bound(sizes);
    for l in start..=l_max {
        match search_fixed(&problem, l, max_nodes, opts.deadline, &mut nodes) {
            FixedSizeOutcome::Found(by_pos) => {
                let mut sets = vec![0u32; inst.n];
                for (pos, &v) in inst.order.iter().enumerate() {
                    sets[v] = by_pos[pos];
                }
                let family = SetFamily::new(l, sets).expect("sets fit the ground set");
                return ThetaResult::Exact(Representation {
                    family,
                    lspec: lspec.clone(),
                    universe: l,
                    mode,
                });
            }
            FixedSizeOutcome::Refuted => {}
            FixedSizeOutcome::OutOfBudget => {
                return ThetaResult::Unknown {
                    bound: l_max,
                    refuted_below: l,
                    reason: UnknownReason::Budget,
                    nodes,
                }
            }
        }
    }
    ThetaResult::Unknown {
        bound: l_max,
        refuted_below: l_max + 1,
        reason: UnknownReason::Exhausted,
        nodes,
    }
}

/// `Θ_L(G)`: the least universe size of an L-intersection representation.
pub fn theta_exact(g: &Graph, lspec: &LSpec, l_max: usize) -> ThetaResult {
    theta_exact_with(g, lspec, &SolveOptions::with_l_max(l_max))
}

pub fn theta_exact_with(g: &Graph, lspec: &LSpec, opts: &SolveOptions) -> ThetaResult {
    let result = solve(&Instance::full(g), lspec, Mode::Full, None, opts);
    debug_assert!(result
        .witness()
        .is_none_or(|w| verify_representation(g, &w.family, lspec) == Ok(true)));
    result
}

/// `θ_L(G)`: adjacency enforced only between `V1` and `V2`.
pub fn theta_bipartite_exact(g: &BipartiteGraph, lspec: &LSpec, l_max: usize) -> ThetaResult {
    theta_bipartite_exact_with(g, lspec, &SolveOptions::with_l_max(l_max))
}

pub fn theta_bipartite_exact_with(
    g: &BipartiteGraph,
    lspec: &LSpec,
    opts: &SolveOptions,
) -> ThetaResult {
    let result = solve(
        &Instance::bipartite(g),
        lspec,
        Mode::Bipartite { n1: g.n1() },
        None,
        opts,
    );
    debug_assert!(result
        .witness()
        .is_none_or(|w| { verify_bipartite_representation(g, &w.family, lspec) == Ok(true) }));
    result
}

/// `Θ_{L,K}(G)`: every set size must lie in `sizes`; `{k}` is the uniform case.
pub fn theta_uniform_exact(
    g: &Graph,
    lspec: &LSpec,
    sizes: &[usize],
    l_max: usize,
) -> Result<ThetaResult> {
    theta_uniform_exact_with(g, lspec, sizes, &SolveOptions::with_l_max(l_max))
}

pub fn theta_uniform_exact_with(
    g: &Graph,
    lspec: &LSpec,
    sizes: &[usize],
    opts: &SolveOptions,
) -> Result<ThetaResult> {
    let mut ks = sizes.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let Some(&k_max) = ks.last() else {
        return Err(Error::arg("set-size restriction K must be nonempty"));
    };
    if k_max > MAX_GROUND {
        return Err(Error::arg(format!("set size {k_max} exceeds {MAX_GROUND}")));
    }
    if let Some(l_max) = opts.l_max {
        if k_max > l_max {
            return Err(Error::arg(format!(
                "set size {k_max} exceeds l_max = {l_max}"
            )));
        }
    }
    let mode = match ks[..] {
        [k] => Mode::Uniform(k),
        _ => Mode::Sizes(ks.clone()),
    };
    let result = solve(&Instance::full(g), lspec, mode, Some(&ks), opts);
    debug_assert!(result.witness().is_none_or(|w| {
        verify_representation(g, &w.family, lspec) == Ok(true) && sizes_ok(&w.family, &w.mode)
    }));
    Ok(result)
}

/// Exhaustive search at exactly `l` elements, for independent confirmation
/// that a reported minimum cannot be lowered.
pub fn representation_exists_at(
    g: &Graph,
    lspec: &LSpec,
    sizes: Option<&[usize]>,
    l: usize,
) -> Option<bool> {
    let problem = Instance::full(g).problem(lspec, sizes);
    match search_fixed(&problem, l, u64::MAX, None, &mut 0) {
        FixedSizeOutcome::Found(_) => Some(true),
        FixedSizeOutcome::Refuted => Some(false),
        FixedSizeOutcome::OutOfBudget => None,
    }
}

pub fn bipartite_representation_exists_at(g: &BipartiteGraph, lspec: &LSpec, l: usize) -> bool {
    let problem = Instance::bipartite(g).problem(lspec, None);
    matches!(
        search_fixed(&problem, l, u64::MAX, None, &mut 0),
        FixedSizeOutcome::Found(_)
    )
}
