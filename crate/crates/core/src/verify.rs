//! Inequality verification over graph corpora.
//!
//! Every row is normalized to the form `lhs <= rhs` (or `lhs == rhs` for the
//! tightness check). Fractional exponents are removed by raising both sides to
//! an integer power, so verdicts never involve floating point.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{enumerate_bipartite, enumerate_graphs, BipartiteGraph, Graph};
use crate::linalg::binomial;
use crate::minrank::{
    bipartite_minrank_gfp, minrank_gfp, minrank_real_closed_form, Budget, MinRankResult,
};
use crate::sets::{check_inclusion_identity, SetFamily};
use crate::theta::{
    default_l_max, theta_bipartite_exact_with, theta_exact_with, theta_uniform_exact_with,
    uniform_l_max, LSpec, SolveOptions, ThetaResult,
};

/// Default per-row time budget.
pub const DEFAULT_BUDGET_MS: u64 = 10_000;

/// Environment variable overriding the per-row budget in milliseconds.
pub const BUDGET_ENV: &str = "THETAKIT_BUDGET_MS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremId {
    T1_1,
    T1_2i,
    T1_2ii,
    P2_1a,
    P2_1b,
    P2_2,
    T3_1i,
    T3_1ii,
    C3_2i,
    C3_2ii,
    T3_3,
    T4_1i,
    T4_1ii,
    C4_2i,
    C4_2ii,
    TightGf2,
    T5_1,
    T5_2,
    StarIneq,
}

const NAMES: [(TheoremId, &str); 19] = [
    (TheoremId::T1_1, "T1.1"),
    (TheoremId::T1_2i, "T1.2i"),
    (TheoremId::T1_2ii, "T1.2ii"),
    (TheoremId::P2_1a, "P2.1a"),
    (TheoremId::P2_1b, "P2.1b"),
    (TheoremId::P2_2, "P2.2"),
    (TheoremId::T3_1i, "T3.1i"),
    (TheoremId::T3_1ii, "T3.1ii"),
    (TheoremId::C3_2i, "C3.2i"),
    (TheoremId::C3_2ii, "C3.2ii"),
    (TheoremId::T3_3, "T3.3"),
    (TheoremId::T4_1i, "T4.1i"),
    (TheoremId::T4_1ii, "T4.1ii"),
    (TheoremId::C4_2i, "C4.2i"),
    (TheoremId::C4_2ii, "C4.2ii"),
    (TheoremId::TightGf2, "TIGHT-GF2"),
    (TheoremId::T5_1, "T5.1"),
    (TheoremId::T5_2, "T5.2"),
    (TheoremId::StarIneq, "STAR-INEQ"),
];

impl TheoremId {
    pub fn all() -> impl Iterator<Item = TheoremId> {
        NAMES.iter().map(|&(t, _)| t)
    }

    pub fn item_kind(self) -> ItemKind {
        use TheoremId::*;
        match self {
            T1_2i | T1_2ii | T4_1i | T4_1ii | C4_2i | C4_2ii | TightGf2 => ItemKind::Bipartite,
            P2_1a => ItemKind::Pair,
            P2_2 => ItemKind::Inclusion,
            StarIneq => ItemKind::Star,
            _ => ItemKind::Graph,
        }
    }

    /// Rows that are only evaluated when the item meets [`hypothesis_holds`]:
    /// the power bounds rely on the graph being twin-free without isolated
    /// vertices, and the union bound on the two edge sets being disjoint.
    fn has_hypothesis(self) -> bool {
        use TheoremId::*;
        matches!(
            self,
            P2_1a | T1_2i | T1_2ii | C3_2i | C3_2ii | T3_3 | C4_2i | C4_2ii
        )
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = NAMES
            .iter()
            .find(|(t, _)| t == self)
            .map(|(_, n)| *n)
            .unwrap();
        f.write_str(name)
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NAMES
            .iter()
            .find(|(_, n)| n.eq_ignore_ascii_case(s))
            .map(|(t, _)| *t)
            .ok_or_else(|| Error::arg(format!("unknown theorem id {s:?}")))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ItemKind {
    Graph,
    Bipartite,
    Pair,
    Star,
    Inclusion,
}

/// One unit of a corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Graph(Graph),
    Bipartite(BipartiteGraph),
    Pair(Graph, Graph),
    Star {
        x: u64,
        s: u64,
    },
    /// All `k`-uniform families over `{1..l}`, checked at `(i, t)`.
    Inclusion {
        l: usize,
        k: usize,
        i: usize,
        t: usize,
    },
}

impl Item {
    pub fn id(&self) -> String {
        match self {
            Item::Graph(g) => g.to_graph6().expect("corpus graphs fit graph6"),
            Item::Bipartite(b) => b.id(),
            Item::Pair(a, b) => format!(
                "{}|{}",
                a.to_graph6().expect("fits graph6"),
                b.to_graph6().expect("fits graph6")
            ),
            Item::Star { .. } | Item::Inclusion { .. } => "-".to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "true")]
    Holds,
    #[serde(rename = "false")]
    Fails,
    #[serde(rename = "indeterminate")]
    Indeterminate,
    /// The graph lies outside the theorem's hypotheses.
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "true",
            Verdict::Fails => "false",
            Verdict::Indeterminate => "indeterminate",
            Verdict::NotApplicable => "n/a",
        })
    }
}

/// One row: both sides of an inequality for one corpus item.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub graph6: String,
    pub theorem: TheoremId,
    pub params: String,
    #[serde(serialize_with = "ser_opt_u128")]
    pub lhs: Option<u128>,
    #[serde(serialize_with = "ser_opt_u128")]
    pub rhs: Option<u128>,
    pub holds: Verdict,
    #[serde(serialize_with = "ser_opt_i128")]
    pub slack: Option<i128>,
    pub millis: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_path: Option<String>,
    /// Named text artifacts (representations, matrices) for reproduction.
    #[serde(skip)]
    pub artifacts: Vec<(String, String)>,
}

fn ser_opt_u128<S: serde::Serializer>(
    v: &Option<u128>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_str("unknown"),
    }
}

fn ser_opt_i128<S: serde::Serializer>(
    v: &Option<i128>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

/// Parameters shared by the theorem rows; which ones are required depends on
/// the theorem (see [`Params::validate`]).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub lspec: Option<LSpec>,
    /// `k` in `L = {0..k-1}` (T1.1) or the uniform set size (T5.1).
    pub k: Option<usize>,
    /// `K` for T5.2.
    pub sizes: Vec<usize>,
    /// Field characteristic for rows that only need a prime (P2.1a/b).
    pub p: Option<u64>,
}

impl Params {
    pub fn modular(p: u64, residues: &[u64]) -> Result<Self> {
        Ok(Params {
            lspec: Some(LSpec::modular(p, residues)?),
            p: Some(p),
            ..Default::default()
        })
    }

    fn modular_parts(&self) -> Option<(u64, usize)> {
        match &self.lspec {
            Some(LSpec::Modular { p, residues }) => Some((*p, residues.len())),
            _ => None,
        }
    }

    /// Rejects parameter sets a theorem is not stated for, before any solving.
    pub fn validate(&self, theorem: TheoremId) -> Result<()> {
        use TheoremId::*;
        let need_modular = || {
            self.modular_parts()
                .ok_or_else(|| Error::arg(format!("{theorem} needs a modular L (mod:<p>:<R>)")))
        };
        match theorem {
            T1_1 => match self.k {
                Some(k) if k >= 1 => Ok(()),
                _ => Err(Error::arg("T1.1 needs k >= 1 (L = {0,...,k-1})")),
            },
            T1_2i | T1_2ii | T3_1i | T3_1ii | T4_1i | T4_1ii => need_modular().map(drop),
            C3_2i | C3_2ii | C4_2i | C4_2ii => {
                let (_, s) = need_modular()?;
                if s <= 1 {
                    return Err(Error::arg(format!("{theorem} requires |R| = s > 1")));
                }
                Ok(())
            }
            T3_3 => match &self.lspec {
                Some(LSpec::Finite(v)) if v.len() > 1 => Ok(()),
                Some(LSpec::Finite(_)) => Err(Error::arg("T3.3 requires |L| = s > 1")),
                _ => Err(Error::arg("T3.3 needs a finite L (finite:<values>)")),
            },
            T5_1 => {
                let (_, s) = need_modular()?;
                match self.k {
                    Some(k) if k >= s => Ok(()),
                    Some(k) => Err(Error::arg(format!("T5.1 needs k >= s, got k={k}, s={s}"))),
                    None => Err(Error::arg("T5.1 needs the uniform size k")),
                }
            }
            T5_2 => {
                let s = match &self.lspec {
                    Some(LSpec::Finite(v)) => v.len(),
                    Some(LSpec::Modular { residues, .. }) => residues.len(),
                    _ => return Err(Error::arg("T5.2 needs a finite or modular L")),
                };
                let r = self.sizes.len();
                if r == 0 {
                    return Err(Error::arg("T5.2 needs a nonempty size set K"));
                }
                if let Some(&k) = self
                    .sizes
                    .iter()
                    .find(|&&k| k as i64 <= s as i64 - r as i64)
                {
                    return Err(Error::arg(format!(
                        "T5.2 requires every k_i > s - r = {}, got {k}",
                        s as i64 - r as i64
                    )));
                }
                Ok(())
            }
            P2_1a | P2_1b => match self.p.or(self.modular_parts().map(|m| m.0)) {
                Some(p) if crate::linalg::is_prime(p) => Ok(()),
                _ => Err(Error::arg(format!("{theorem} needs a prime p"))),
            },
            TightGf2 | StarIneq | P2_2 => Ok(()),
        }
    }

    fn prime(&self) -> u64 {
        self.p.or(self.modular_parts().map(|m| m.0)).unwrap_or(2)
    }

    fn describe(&self, theorem: TheoremId) -> String {
        use TheoremId::*;
        match theorem {
            T1_1 => format!(
                "{};k={}",
                l_zero_to(self.k.unwrap_or(1)),
                self.k.unwrap_or(1)
            ),
            T5_1 => format!("{};k={}", self.lspec_text(), self.k.unwrap_or(0)),
            T5_2 => format!("{};K={}", self.lspec_text(), join(&self.sizes)),
            P2_1a | P2_1b => format!("p={}", self.prime()),
            TightGf2 => LSpec::odd().to_string(),
            StarIneq | P2_2 => String::new(),
            _ => self.lspec_text(),
        }
    }

    fn lspec_text(&self) -> String {
        self.lspec
            .as_ref()
            .map(LSpec::to_string)
            .unwrap_or_default()
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn l_zero_to(k: usize) -> LSpec {
    LSpec::Finite((0..k as u32).collect())
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub budget: Duration,
    pub record_millis: bool,
    /// Evaluate rows even when the standing hypothesis fails.
    pub ignore_hypothesis: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            budget: Duration::from_millis(DEFAULT_BUDGET_MS),
            record_millis: false,
            ignore_hypothesis: false,
        }
    }
}

impl CheckConfig {
    /// Default config with the budget taken from the environment when set.
    pub fn from_env() -> Result<Self> {
        let mut c = CheckConfig::default();
        if let Ok(v) = std::env::var(BUDGET_ENV) {
            let ms: u64 = v
                .parse()
                .map_err(|_| Error::arg(format!("{BUDGET_ENV} must be an integer, got {v:?}")))?;
            c.budget = Duration::from_millis(ms);
        }
        Ok(c)
    }
}

/// Solver calls for one row, all sharing one deadline.
struct Solvers {
    deadline: Instant,
    artifacts: Vec<(String, String)>,
    /// A size-restricted representation provably does not exist.
    no_representation: bool,
}

impl Solvers {
    fn opts(&self, n: usize, lspec: &LSpec) -> SolveOptions {
        SolveOptions {
            l_max: Some(default_l_max(n, lspec)),
            max_nodes: None,
            deadline: Some(self.deadline),
        }
    }

    fn budget(&self) -> Budget {
        Budget {
            max_nodes: None,
            deadline: Some(self.deadline),
        }
    }

    fn keep_theta(&mut self, name: &str, r: &ThetaResult) -> Option<u128> {
        if let Some(w) = r.witness() {
            self.artifacts.push((format!("{name}.rep"), w.to_text()));
        }
        r.value().map(|v| v as u128)
    }

    fn keep_rank(&mut self, name: &str, r: Result<MinRankResult>) -> Option<u128> {
        let r = r.ok()?;
        if let Some(w) = r.witness() {
            self.artifacts
                .push((format!("{name}.mat"), w.to_grid_string()));
        }
        r.value().map(|v| v as u128)
    }

    fn theta(&mut self, name: &str, g: &Graph, lspec: &LSpec) -> Option<u128> {
        let r = theta_exact_with(g, lspec, &self.opts(g.n(), lspec));
        self.keep_theta(name, &r)
    }

    fn theta_bip(&mut self, name: &str, g: &BipartiteGraph, lspec: &LSpec) -> Option<u128> {
        let r = theta_bipartite_exact_with(g, lspec, &self.opts(g.n1() + g.n2(), lspec));
        self.keep_theta(name, &r)
    }

    fn theta_sizes(&mut self, name: &str, g: &Graph, lspec: &LSpec, ks: &[usize]) -> Option<u128> {
        let bound = uniform_l_max(g.n(), ks);
        let opts = SolveOptions {
            l_max: Some(bound),
            ..self.opts(g.n(), lspec)
        };
        let r = theta_uniform_exact_with(g, lspec, ks, &opts).ok()?;
        let k_max = ks.iter().copied().max().unwrap_or(0);
        if g.n() * k_max <= bound && r.refuted_through(bound) {
            self.no_representation = true;
        }
        self.keep_theta(name, &r)
    }

    fn mr(&mut self, name: &str, g: &Graph, p: u64) -> Option<u128> {
        let r = minrank_gfp(g, p, &self.budget());
        self.keep_rank(name, r)
    }

    fn bmr(&mut self, name: &str, g: &BipartiteGraph, p: u64) -> Option<u128> {
        let r = bipartite_minrank_gfp(g, p, &self.budget());
        self.keep_rank(name, r)
    }
}

fn pow(base: u128, exp: usize) -> u128 {
    base.checked_pow(exp as u32).expect("power fits in u128")
}

fn binom_sum(x: u128, lo: i64, hi: usize) -> u128 {
    (lo.max(0) as u64..=hi as u64)
        .map(|t| binomial(x as u64, t))
        .sum::<num_bigint::BigUint>()
        .try_into()
        .expect("binomial sum fits in u128")
}

fn hypothesis_holds(item: &Item, theorem: TheoremId) -> bool {
    match item {
        // over GF(2) a shared edge can cancel in the sum of the two matrices
        Item::Pair(a, b) => (0..a.n()).all(|v| a.neighbors(v) & b.neighbors(v) == 0),
        Item::Graph(g) => g.is_twin_free() && !g.has_isolated_vertex(),
        Item::Bipartite(b) => {
            let square =
                !matches!(theorem, TheoremId::T1_2i | TheoremId::T1_2ii) || b.n1() == b.n2();
            square && b.is_twin_free() && !b.has_isolated_vertex()
        }
        _ => true,
    }
}

/// Evaluates one theorem on one corpus item.
pub fn check_item(
    theorem: TheoremId,
    params: &Params,
    item: &Item,
    config: &CheckConfig,
) -> Result<BoundReport> {
    use TheoremId::*;
    params.validate(theorem)?;
    if item_kind(item) != theorem.item_kind() {
        return Err(Error::arg(format!(
            "{theorem} cannot be checked on {item:?}"
        )));
    }
    let start = Instant::now();
    let mut sv = Solvers {
        deadline: start + config.budget,
        artifacts: Vec::new(),
        no_representation: false,
    };
    let lspec = params.lspec.clone();
    let modular = params.modular_parts();
    let mut equality = false;
    let (lhs, rhs) = match (theorem, item) {
        (T1_1, Item::Graph(g)) => {
            let k = params.k.expect("validated");
            let lhs = sv.theta("theta1_G", g, &LSpec::Threshold);
            let rhs = sv
                .theta("thetaL_Gc", &g.complement(), &l_zero_to(k))
                .map(|t| pow(t, k));
            (lhs, rhs)
        }
        (T1_2i | T1_2ii, Item::Bipartite(b)) => {
            let (p, s) = modular.expect("validated");
            let lspec = lspec.as_ref().expect("validated");
            let delta = b.max_degree() as u128;
            let n = b.n1() as u128;
            let rhs = if theorem == T1_2i {
                sv.theta_bip("thetaL_Gc", &b.complement(), lspec)
                    .map(|t| delta * pow(t, s))
            } else {
                sv.theta_bip("thetaL_G", b, lspec)
                    .map(|t| s as u128 * delta * pow(t, p as usize - 1))
            };
            (Some(n), rhs)
        }
        (P2_1a, Item::Pair(a, b)) => {
            let p = params.prime();
            let union = a.union(b)?;
            let lhs = sv.mr("mr_union", &union, p);
            let ra = sv.mr("mr_G1", a, p);
            let rb = sv.mr("mr_G2", b, p);
            (lhs, ra.zip(rb).map(|(x, y)| x + y))
        }
        (P2_1b, Item::Graph(g)) => {
            let p = params.prime();
            let full = (1u64 << g.n()) - 1;
            let mut best = Some(0u128);
            for mask in 1..full {
                let h = g.induced_by_mask(mask)?;
                let r = minrank_gfp(&h, p, &sv.budget())
                    .ok()
                    .and_then(|r| r.value());
                best = best.zip(r).map(|(b, r)| b.max(r as u128));
            }
            (best, sv.mr("mr_G", g, p))
        }
        (P2_2, Item::Inclusion { l, k, i, t }) => {
            let families = uniform_families(*l, *k)?;
            let mut ok = 0u128;
            for f in &families {
                if check_inclusion_identity(f, *k, *i, *t)? {
                    ok += 1;
                } else {
                    sv.artifacts.push(("family.txt".into(), f.to_text()));
                }
            }
            equality = true;
            (Some(families.len() as u128), Some(ok))
        }
        (T3_1i | T3_1ii, Item::Graph(g)) => {
            let (p, s) = modular.expect("validated");
            let lspec = lspec.as_ref().expect("validated");
            let theta = sv.theta("thetaL_G", g, lspec);
            let (lhs, top) = if theorem == T3_1i {
                (sv.mr("mr_Gc", &g.complement(), p), s)
            } else {
                (sv.mr("mr_G", g, p), p as usize - 1)
            };
            (lhs, theta.map(|x| binom_sum(x, 0, top)))
        }
        (C3_2i | C3_2ii, Item::Graph(g)) => {
            let (p, s) = modular.expect("validated");
            let lspec = lspec.as_ref().expect("validated");
            let lhs = sv.mr("mr_G", g, p);
            let rhs = if theorem == C3_2i {
                sv.theta("thetaL_Gc", &g.complement(), lspec)
                    .map(|t| pow(t, s))
            } else {
                sv.theta("thetaL_G", g, lspec)
                    .map(|t| pow(t, p as usize - 1))
            };
            (lhs, rhs)
        }
        (T3_3, Item::Graph(g)) => {
            let lspec = lspec.as_ref().expect("validated");
            let s = lspec.size_parameter().expect("finite");
            let lhs = minrank_real_closed_form(g).value().map(|v| v as u128);
            let rhs = sv
                .theta("thetaL_Gc", &g.complement(), lspec)
                .map(|t| pow(t, s));
            (lhs, rhs)
        }
        (T4_1i | T4_1ii, Item::Bipartite(b)) => {
            let (p, s) = modular.expect("validated");
            let lspec = lspec.as_ref().expect("validated");
            let theta = sv.theta_bip("thetaL_G", b, lspec);
            let (lhs, top) = if theorem == T4_1i {
                (sv.bmr("bmr_Gc", &b.complement(), p), s)
            } else {
                (sv.bmr("bmr_G", b, p), p as usize - 1)
            };
            (lhs, theta.map(|x| binom_sum(x, 0, top)))
        }
        (C4_2i | C4_2ii, Item::Bipartite(b)) => {
            let (p, s) = modular.expect("validated");
            let lspec = lspec.as_ref().expect("validated");
            let lhs = sv.bmr("bmr_G", b, p);
            let rhs = if theorem == C4_2i {
                sv.theta_bip("thetaL_Gc", &b.complement(), lspec)
                    .map(|t| pow(t, s))
            } else {
                sv.theta_bip("thetaL_G", b, lspec)
                    .map(|t| pow(t, p as usize - 1))
            };
            (lhs, rhs)
        }
        (TightGf2, Item::Bipartite(b)) => {
            equality = true;
            let lhs = sv.theta_bip("theta_odd", b, &LSpec::odd());
            (lhs, sv.bmr("bmr2_G", b, 2))
        }
        (T5_1, Item::Graph(g)) => {
            let (p, s) = modular.expect("validated");
            let lspec = lspec.as_ref().expect("validated");
            let k = params.k.expect("validated");
            let lhs = sv.mr("mr_Gc", &g.complement(), p);
            let rhs = sv
                .theta_sizes("thetaLk_G", g, lspec, &[k])
                .map(|t| binom_sum(t, s as i64, s));
            (lhs, rhs)
        }
        (T5_2, Item::Graph(g)) => {
            let lspec = lspec.as_ref().expect("validated");
            let s = lspec.size_parameter().expect("validated");
            let r = params.sizes.len();
            let gc = g.complement();
            let lhs = match modular {
                Some((p, _)) => sv.mr("mr_Gc", &gc, p),
                None => minrank_real_closed_form(&gc).value().map(|v| v as u128),
            };
            let rhs = sv
                .theta_sizes("thetaLK_G", g, lspec, &params.sizes)
                .map(|t| r as u128 * binom_sum(t, s as i64 - r as i64 + 1, s));
            (lhs, rhs)
        }
        (StarIneq, Item::Star { x, s }) => {
            let lhs = binom_sum(*x as u128, 0, *s as usize);
            (Some(lhs), Some(pow(*x as u128, *s as usize)))
        }
        _ => unreachable!("item kind checked above"),
    };
    let holds = match (lhs, rhs) {
        _ if theorem.has_hypothesis()
            && !config.ignore_hypothesis
            && !hypothesis_holds(item, theorem) =>
        {
            Verdict::NotApplicable
        }
        _ if sv.no_representation => Verdict::NotApplicable,
        (Some(a), Some(b)) if equality => {
            if a == b {
                Verdict::Holds
            } else {
                Verdict::Fails
            }
        }
        (Some(a), Some(b)) => {
            if a <= b {
                Verdict::Holds
            } else {
                Verdict::Fails
            }
        }
        _ => Verdict::Indeterminate,
    };
    Ok(BoundReport {
        graph6: item.id(),
        theorem,
        params: match item {
            Item::Star { x, s } => format!("x={x};s={s}"),
            Item::Inclusion { l, k, i, t } => format!("l={l};k={k};i={i};t={t}"),
            _ => params.describe(theorem),
        },
        lhs,
        rhs,
        holds,
        slack: lhs.zip(rhs).map(|(a, b)| b as i128 - a as i128),
        millis: config
            .record_millis
            .then(|| start.elapsed().as_millis() as u64),
        witness_path: None,
        artifacts: sv.artifacts,
    })
}

fn item_kind(item: &Item) -> ItemKind {
    match item {
        Item::Graph(_) => ItemKind::Graph,
        Item::Bipartite(_) => ItemKind::Bipartite,
        Item::Pair(..) => ItemKind::Pair,
        Item::Star { .. } => ItemKind::Star,
        Item::Inclusion { .. } => ItemKind::Inclusion,
    }
}

/// Every `k`-uniform family (as a set of distinct `k`-subsets) over `{1..l}`,
/// including the empty family.
pub fn uniform_families(l: usize, k: usize) -> Result<Vec<SetFamily>> {
    let pool = SetFamily::all_subsets_of_size(l, k)?;
    if pool.len() > 16 {
        return Err(Error::Budget(format!(
            "exhaustive {k}-uniform families over {l} elements: 2^{} too many",
            pool.len()
        )));
    }
    (0..1u32 << pool.len())
        .map(|mask| {
            let sets = (0..pool.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| pool.set(b))
                .collect();
            SetFamily::new(l, sets)
        })
        .collect()
}

/// How to generate a corpus for a theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorpusSpec {
    /// Exhaustive up to a size: graphs on `1..=n` vertices, bipartite graphs
    /// with parts in `1..=n`, pairs on a common vertex set of size `<= n`,
    /// `2 <= x, s <= n` for the binomial inequality, `l <= n` for inclusion.
    Exhaustive(usize),
    /// Paths, cycles and complete graphs on up to `n` vertices.
    Classes(usize),
    /// Explicit items (e.g. read from a file).
    Items(Vec<Item>),
}

pub fn build_corpus(kind: ItemKind, spec: &CorpusSpec) -> Result<Vec<Item>> {
    let n = match spec {
        CorpusSpec::Items(items) => {
            if let Some(bad) = items.iter().find(|i| item_kind(i) != kind) {
                return Err(Error::arg(format!(
                    "corpus item {} has the wrong kind",
                    bad.id()
                )));
            }
            return Ok(items.clone());
        }
        CorpusSpec::Classes(n) => {
            if kind != ItemKind::Graph {
                return Err(Error::arg("class corpora contain plain graphs only"));
            }
            return Ok(class_graphs(*n).into_iter().map(Item::Graph).collect());
        }
        CorpusSpec::Exhaustive(n) => *n,
    };
    let mut out = Vec::new();
    match kind {
        ItemKind::Graph => {
            for v in 1..=n {
                out.extend(enumerate_graphs(v)?.map(Item::Graph));
            }
        }
        ItemKind::Bipartite => {
            for n1 in 1..=n {
                for n2 in 1..=n {
                    out.extend(enumerate_bipartite(n1, n2)?.map(Item::Bipartite));
                }
            }
        }
        ItemKind::Pair => {
            for v in 1..=n {
                let graphs: Vec<Graph> = enumerate_graphs(v)?.collect();
                for a in &graphs {
                    for b in &graphs {
                        out.push(Item::Pair(a.clone(), b.clone()));
                    }
                }
            }
        }
        ItemKind::Star => {
            for x in 2..=n as u64 {
                for s in 2..=n as u64 {
                    out.push(Item::Star { x, s });
                }
            }
        }
        ItemKind::Inclusion => {
            for l in 0..=n {
                for k in 0..=l {
                    for i in 0..=k {
                        for t in 0..=i {
                            out.push(Item::Inclusion { l, k, i, t });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `P_n`, `C_n` (n >= 3) and `K_n` for `n` in `1..=max`, duplicates removed.
pub fn class_graphs(max: usize) -> Vec<Graph> {
    let mut out: Vec<Graph> = Vec::new();
    for n in 1..=max {
        let mut candidates = vec![Graph::path(n)];
        if n >= 3 {
            candidates.push(Graph::cycle(n));
        }
        candidates.push(Graph::complete(n));
        for g in candidates {
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out
}

/// Parses corpus text: one graph6 string per line, or `graph6:n1` bipartite
/// ids, or `graph6|graph6` pairs. Blank lines and `#` comments are skipped.
pub fn parse_corpus(kind: ItemKind, text: &str) -> Result<Vec<Item>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| match kind {
            ItemKind::Graph => Graph::parse_graph6(line).map(Item::Graph),
            ItemKind::Bipartite => BipartiteGraph::parse_id(line).map(Item::Bipartite),
            ItemKind::Pair => {
                let (a, b) = line
                    .split_once('|')
                    .ok_or_else(|| Error::arg(format!("pair line {line:?} lacks '|'")))?;
                let (a, b) = (Graph::parse_graph6(a)?, Graph::parse_graph6(b)?);
                if a.n() != b.n() {
                    return Err(Error::arg(format!(
                        "pair {line:?} has unequal vertex counts"
                    )));
                }
                Ok(Item::Pair(a, b))
            }
            ItemKind::Star | ItemKind::Inclusion => {
                Err(Error::arg("this theorem takes no corpus file"))
            }
        })
        .collect()
}

/// Rows in corpus order; a failing row stops the run after its chunk.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub rows: Vec<BoundReport>,
    /// Index into `rows` of the first failing row.
    pub violation: Option<usize>,
}

const CHUNK: usize = 64;

/// Checks every item on a worker pool, emitting rows in input order. Stops at
/// the first failing row.
pub fn run_corpus(
    theorem: TheoremId,
    params: &Params,
    items: &[Item],
    config: &CheckConfig,
) -> Result<RunOutcome> {
    params.validate(theorem)?;
    let mut rows = Vec::with_capacity(items.len());
    for chunk in items.chunks(CHUNK) {
        let reports: Vec<BoundReport> = chunk
            .par_iter()
            .map(|item| check_item(theorem, params, item, config))
            .collect::<Result<_>>()?;
        for r in reports {
            let failed = r.holds == Verdict::Fails;
            rows.push(r);
            if failed {
                let at = rows.len() - 1;
                return Ok(RunOutcome {
                    rows,
                    violation: Some(at),
                });
            }
        }
    }
    Ok(RunOutcome {
        rows,
        violation: None,
    })
}

pub const CSV_HEADER: [&str; 8] = [
    "graph6", "theorem", "params", "lhs", "rhs", "holds", "slack", "millis",
];

pub fn write_csv<W: std::io::Write>(rows: &[BoundReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Argument(format!("csv output failed: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "unknown".into());
        w.write_record([
            r.graph6.clone(),
            r.theorem.to_string(),
            r.params.clone(),
            opt(r.lhs.map(|v| v.to_string())),
            opt(r.rhs.map(|v| v.to_string())),
            r.holds.to_string(),
            r.slack.map(|v| v.to_string()).unwrap_or_default(),
            r.millis.map(|v| v.to_string()).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Argument(format!("csv output failed: {e}")))
}

pub fn to_json(rows: &[BoundReport]) -> String {
    serde_json::to_string_pretty(rows).expect("reports serialize")
}

/// Writes the failing row and its solver witnesses under `dir`; returns the
/// bundle directory.
pub fn write_repro_bundle(dir: &Path, row: &BoundReport) -> std::io::Result<PathBuf> {
    let safe: String = row
        .graph6
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    let bundle = dir.join(format!("{}-{}", row.theorem, safe));
    fs::create_dir_all(&bundle)?;
    let mut row_with_path = row.clone();
    row_with_path.witness_path = Some(bundle.display().to_string());
    fs::write(
        bundle.join("row.json"),
        serde_json::to_string_pretty(&row_with_path).expect("reports serialize"),
    )?;
    fs::write(bundle.join("graph.txt"), format!("{}\n", row.graph6))?;
    for (name, text) in &row.artifacts {
        fs::write(bundle.join(name), text)?;
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> CheckConfig {
        CheckConfig::default()
    }

    #[test]
    fn theorem_ids_round_trip() {
        for t in TheoremId::all() {
            assert_eq!(t.to_string().parse::<TheoremId>().unwrap(), t);
        }
        assert!("T9.9".parse::<TheoremId>().is_err());
    }

    #[test]
    fn t31i_on_p3() {
        let params = Params::modular(2, &[1]).unwrap();
        let row = check_item(
            TheoremId::T3_1i,
            &params,
            &Item::Graph(Graph::path(3)),
            &cfg(),
        )
        .unwrap();
        // Θ_L(P_3) = 2 for L = odd, so the cap is C(2,0) + C(2,1) = 3
        assert_eq!(row.rhs, Some(3));
        // complement of P_3 is an edge plus an isolated vertex: mr_2 = 1
        assert_eq!(row.lhs, Some(1));
        assert_eq!(row.holds, Verdict::Holds);
        assert_eq!(row.slack, Some(2));
    }

    #[test]
    fn params_validated_before_solving() {
        let single = Params::modular(3, &[1]).unwrap();
        assert!(single.validate(TheoremId::C3_2i).is_err());
        assert!(single.validate(TheoremId::T3_1i).is_ok());
        let p = Params {
            lspec: Some(LSpec::finite(&[1]).unwrap()),
            ..Default::default()
        };
        assert!(p.validate(TheoremId::T3_3).is_err());
        let p = Params {
            lspec: Some(LSpec::finite(&[1, 2, 3]).unwrap()),
            sizes: vec![1, 2],
            ..Default::default()
        };
        // s - r = 1, so k = 1 violates k_i > s - r
        assert!(p.validate(TheoremId::T5_2).is_err());
        assert!(Params::default().validate(TheoremId::T1_1).is_err());
    }

    #[test]
    fn star_rows() {
        let row = check_item(
            TheoremId::StarIneq,
            &Params::default(),
            &Item::Star { x: 3, s: 2 },
            &cfg(),
        )
        .unwrap();
        assert_eq!(
            (row.lhs, row.rhs, row.holds),
            (Some(7), Some(9), Verdict::Holds)
        );
    }

    #[test]
    fn hypothesis_gate_marks_twins() {
        let params = Params::modular(3, &[1, 2]).unwrap();
        let row = check_item(
            TheoremId::C3_2i,
            &params,
            &Item::Graph(Graph::path(3)),
            &cfg(),
        )
        .unwrap();
        assert_eq!(row.holds, Verdict::NotApplicable);
        let strict = CheckConfig {
            ignore_hypothesis: true,
            ..cfg()
        };
        let row = check_item(
            TheoremId::C3_2i,
            &params,
            &Item::Graph(Graph::path(3)),
            &strict,
        )
        .unwrap();
        // Θ_L(co-P_3) = 1 and mr_3(P_3) = 2: the power bound needs twin-freeness
        assert_eq!(
            (row.lhs, row.rhs, row.holds),
            (Some(2), Some(1), Verdict::Fails)
        );
    }

    #[test]
    fn csv_quotes_params() {
        let params = Params::modular(3, &[1, 2]).unwrap();
        let row = check_item(
            TheoremId::T3_1i,
            &params,
            &Item::Graph(Graph::complete(2)),
            &cfg(),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("graph6,theorem,params,lhs,rhs,holds,slack,millis\n"));
        assert!(text.contains("A_,T3.1i,\"mod:3:1,2\","), "{text}");
    }

    #[test]
    fn corpus_sizes() {
        assert_eq!(
            build_corpus(ItemKind::Graph, &CorpusSpec::Exhaustive(4))
                .unwrap()
                .len(),
            1 + 2 + 8 + 64
        );
        assert_eq!(
            build_corpus(ItemKind::Bipartite, &CorpusSpec::Exhaustive(2))
                .unwrap()
                .len(),
            2 + 4 + 4 + 16
        );
        assert_eq!(class_graphs(3).len(), 3 + 1); // P1, P2, P3, K3 (= C3)
        assert_eq!(uniform_families(4, 2).unwrap().len(), 64);
    }
}
