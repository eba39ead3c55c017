//! Set families over a ground set `{1..l}`, inclusion and t-intersection
//! matrices, and the witness matrices whose zero pattern encodes membership
//! of pairwise intersection sizes in a modular or finite set.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{
    binomial, binomial_basis_coeffs, binomial_i64, fermat_basis_coeffs,
    integer_binomial_basis_coeffs, pow_mod, CoeffVector, ExactMatrix, Field,
};

/// Ground sets are limited to 32 elements (one `u32` mask per set).
pub const MAX_GROUND: usize = 32;

/// Ordered family of subsets of `{1..l}`. Element `e` is bit `e - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    l: usize,
    sets: Vec<u32>,
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily(l={}, {:?})", self.l, self.element_lists())
    }
}

impl SetFamily {
    pub fn new(l: usize, sets: Vec<u32>) -> Result<Self> {
        if l > MAX_GROUND {
            return Err(Error::arg(format!(
                "ground set size {l} exceeds {MAX_GROUND}"
            )));
        }
        let allowed = ground_mask(l);
        if let Some(s) = sets.iter().find(|&&s| s & !allowed != 0) {
            return Err(Error::arg(format!(
                "set {s:#b} not contained in {{1..{l}}}"
            )));
        }
        Ok(SetFamily { l, sets })
    }

    /// Builds from 1-based element lists.
    pub fn from_lists<S: AsRef<[u32]>>(l: usize, lists: &[S]) -> Result<Self> {
        let mut sets = Vec::with_capacity(lists.len());
        for list in lists {
            let mut mask = 0u32;
            for &e in list.as_ref() {
                if e == 0 || e as usize > l {
                    return Err(Error::arg(format!("element {e} outside {{1..{l}}}")));
                }
                mask |= 1 << (e - 1);
            }
            sets.push(mask);
        }
        SetFamily::new(l, sets)
    }

    /// All `t`-subsets of `{1..l}` in lexicographic order of sorted element lists.
    pub fn all_subsets_of_size(l: usize, t: usize) -> Result<Self> {
        if t > l {
            return Err(Error::arg(format!("t = {t} exceeds ground set size {l}")));
        }
        let mut sets = Vec::new();
        let mut current = Vec::with_capacity(t);
        lex_combinations(l, t, 0, &mut current, &mut sets);
        SetFamily::new(l, sets)
    }

    pub fn ground_size(&self) -> usize {
        self.l
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[u32] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> u32 {
        self.sets[i]
    }

    /// The common set size, if every set has the same size.
    pub fn uniform_size(&self) -> Option<usize> {
        let first = self.sets.first()?.count_ones();
        self.sets
            .iter()
            .all(|s| s.count_ones() == first)
            .then_some(first as usize)
    }

    pub fn intersection_size(&self, i: usize, other: &SetFamily, j: usize) -> u32 {
        (self.sets[i] & other.sets[j]).count_ones()
    }

    /// Number of ground elements actually used by some set.
    pub fn support_size(&self) -> usize {
        self.sets.iter().fold(0u32, |a, s| a | s).count_ones() as usize
    }

    pub fn element_lists(&self) -> Vec<Vec<u32>> {
        self.sets
            .iter()
            .map(|&s| (0..32).filter(|b| s >> b & 1 == 1).map(|b| b + 1).collect())
            .collect()
    }

    /// Text form: `l n`, then one line per set with space-separated
    /// elements, `-` for the empty set.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.l, self.sets.len());
        for list in self.element_lists() {
            if list.is_empty() {
                out.push('-');
            } else {
                let parts: Vec<String> = list.iter().map(u32::to_string).collect();
                out.push_str(&parts.join(" "));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<SetFamily> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::arg("empty set family text"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::arg(format!("bad header token {t:?}")))
            })
            .collect::<Result<_>>()?;
        let [l, n] = dims[..] else {
            return Err(Error::arg("header must be \"l n\""));
        };
        let mut lists = Vec::with_capacity(n);
        for (i, line) in lines.take(n).enumerate() {
            let line = line.trim();
            if line == "-" {
                lists.push(Vec::new());
                continue;
            }
            let list = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::arg(format!("set {i}: bad element {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if list.is_empty() {
                return Err(Error::arg(format!(
                    "set {i}: empty line (use '-' for the empty set)"
                )));
            }
            lists.push(list);
        }
        if lists.len() != n {
            return Err(Error::arg(format!(
                "expected {n} sets, found {}",
                lists.len()
            )));
        }
        SetFamily::from_lists(l, &lists)
    }
}

fn lex_combinations(l: usize, t: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<u32>) {
    if cur.len() == t {
        out.push(cur.iter().fold(0u32, |m, &e| m | 1 << e));
        return;
    }
    for e in start..l {
        if l - e < t - cur.len() {
            break;
        }
        cur.push(e);
        lex_combinations(l, t, e + 1, cur, out);
        cur.pop();
    }
}

fn ground_mask(l: usize) -> u32 {
    if l >= 32 {
        u32::MAX
    } else {
        (1u32 << l) - 1
    }
}

fn same_ground(f: &SetFamily, t: &SetFamily) -> Result<()> {
    if f.l != t.l {
        return Err(Error::arg(format!(
            "ground set mismatch: {} vs {}",
            f.l, t.l
        )));
    }
    Ok(())
}

/// `I(F, T)`: entry `(i, j)` is 1 iff `T_j ⊆ F_i`.
pub fn inclusion_matrix(f: &SetFamily, t: &SetFamily) -> Result<ExactMatrix> {
    same_ground(f, t)?;
    let values: Vec<i64> = f
        .sets
        .iter()
        .flat_map(|&fi| t.sets.iter().map(move |&tj| (tj & !fi == 0) as i64))
        .collect();
    ExactMatrix::from_ints(Field::Rational, f.len(), t.len(), &values)
}

/// `I(F, t)`, columns indexed by the `t`-subsets of the ground set in lex order.
pub fn t_inclusion_matrix(f: &SetFamily, t: usize) -> Result<ExactMatrix> {
    let cols = SetFamily::all_subsets_of_size(f.l, t)?;
    inclusion_matrix(f, &cols)
}

/// `A_t(F, T)` with entries `C(|F_i ∩ T_j|, t)`.
pub fn t_intersection_matrix(f: &SetFamily, t_fam: &SetFamily, t: usize) -> Result<ExactMatrix> {
    same_ground(f, t_fam)?;
    if t > f.l {
        return Err(Error::arg(format!(
            "t = {t} exceeds ground set size {}",
            f.l
        )));
    }
    let values: Vec<i64> = (0..f.len())
        .flat_map(|i| {
            (0..t_fam.len())
                .map(move |j| binomial_i64(f.intersection_size(i, t_fam, j) as u64, t as u64))
        })
        .collect();
    ExactMatrix::from_ints(Field::Rational, f.len(), t_fam.len(), &values)
}

/// Checks `I(F,i) · I(i,t) = C(k−t, i−t) · I(F,t)` exactly over the integers.
pub fn check_inclusion_identity(f: &SetFamily, k: usize, i: usize, t: usize) -> Result<bool> {
    if f.sets.iter().any(|s| s.count_ones() as usize != k) {
        return Err(Error::Precondition(format!("family is not {k}-uniform")));
    }
    if !(t <= i && i <= k && k <= f.l) {
        return Err(Error::Precondition(format!(
            "need 0 <= t <= i <= k <= l, got t={t} i={i} k={k} l={}",
            f.l
        )));
    }
    let i_subsets = SetFamily::all_subsets_of_size(f.l, i)?;
    let lhs = t_inclusion_matrix(f, i)?.mul(&t_inclusion_matrix(&i_subsets, t)?)?;
    let scalar = BigInt::from(binomial((k - t) as u64, (i - t) as u64));
    let rhs = t_inclusion_matrix(f, t)?.scale(&scalar);
    Ok(lhs == rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessVariant {
    /// Entry `∏_{r∈R} (x − r) mod p`: zero iff `x mod p ∈ R`.
    Product,
    /// Entry `Σ_{r∈R} [1 − (x − r)^(p−1)] mod p`: zero iff `x mod p ∉ R`.
    Fermat,
}

impl WitnessVariant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(WitnessVariant::Product),
            "fermat" => Ok(WitnessVariant::Fermat),
            other => Err(Error::arg(format!("unknown witness variant {other:?}"))),
        }
    }
}

fn normalized_residues(residues: &[u64], p: u64) -> Result<Vec<u64>> {
    Field::prime(p)?;
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
    Ok(r)
}

/// Witness matrix over GF(p) evaluated entrywise on intersection sizes
/// `x = |F_u ∩ T_v|`.
pub fn witness_matrix_modular(
    f: &SetFamily,
    t: &SetFamily,
    residues: &[u64],
    p: u64,
    variant: WitnessVariant,
) -> Result<ExactMatrix> {
    same_ground(f, t)?;
    let r = normalized_residues(residues, p)?;
    let entry = |x: u64| -> i64 {
        let v = match variant {
            WitnessVariant::Product => r.iter().fold(1, |acc, &ri| acc * ((x + p - ri) % p) % p),
            WitnessVariant::Fermat => r.iter().fold(0, |acc, &ri| {
                (acc + 1 + p - pow_mod((x % p + p - ri) % p, p - 1, p)) % p
            }),
        };
        v as i64
    };
    let values: Vec<i64> = (0..f.len())
        .flat_map(|u| (0..t.len()).map(move |v| (u, v)))
        .map(|(u, v)| entry(f.intersection_size(u, t, v) as u64))
        .collect();
    ExactMatrix::from_ints(Field::prime(p)?, f.len(), t.len(), &values)
}

/// The binomial-basis coefficient vectors the witness is assembled from:
/// one vector for the product variant, one per residue for the Fermat variant.
pub fn witness_coefficients(
    residues: &[u64],
    p: u64,
    variant: WitnessVariant,
) -> Result<Vec<CoeffVector>> {
    let r = normalized_residues(residues, p)?;
    match variant {
        WitnessVariant::Product => Ok(vec![binomial_basis_coeffs(&r, p)?]),
        WitnessVariant::Fermat => r.iter().map(|&ri| fermat_basis_coeffs(ri, p)).collect(),
    }
}

/// The same witness assembled as `Σ c_t · A_t(F, T)` over GF(p).
pub fn witness_matrix_by_basis(
    f: &SetFamily,
    t: &SetFamily,
    residues: &[u64],
    p: u64,
    variant: WitnessVariant,
) -> Result<ExactMatrix> {
    same_ground(f, t)?;
    let field = Field::prime(p)?;
    let mut acc = ExactMatrix::zeros(field, f.len(), t.len());
    for coeffs in witness_coefficients(residues, p, variant)? {
        for (deg, &c) in coeffs.coeffs().iter().enumerate() {
            if c == 0 || deg > f.l {
                // A_t vanishes for t > l
                continue;
            }
            let m = t_intersection_matrix(f, t, deg)?.reduce_mod(p)?;
            acc = acc.add(&m.scale(&BigInt::from(c)))?;
        }
    }
    Ok(acc)
}

/// Witness matrix over the rationals for a finite set `L`: entries
/// `∏_{l∈L} (x − l)`, zero exactly when `x ∈ L`.
pub fn witness_matrix_finite(f: &SetFamily, t: &SetFamily, values: &[u64]) -> Result<ExactMatrix> {
    same_ground(f, t)?;
    if values.is_empty() {
        return Err(Error::arg("L must be nonempty"));
    }
    let entries: Vec<BigInt> = (0..f.len())
        .flat_map(|u| (0..t.len()).map(move |v| (u, v)))
        .map(|(u, v)| {
            let x = f.intersection_size(u, t, v) as i64;
            values.iter().map(|&l| BigInt::from(x - l as i64)).product()
        })
        .collect();
    ExactMatrix::from_bigints(Field::Rational, f.len(), t.len(), &entries)
}

/// The finite-L witness assembled as `Σ a_t · A_t(F, T)` with integer `a_t`.
pub fn witness_matrix_finite_by_basis(
    f: &SetFamily,
    t: &SetFamily,
    values: &[u64],
) -> Result<ExactMatrix> {
    same_ground(f, t)?;
    let mut acc = ExactMatrix::zeros(Field::Rational, f.len(), t.len());
    for (deg, a) in integer_binomial_basis_coeffs(values).iter().enumerate() {
        if deg > f.l {
            continue;
        }
        acc = acc.add(&t_intersection_matrix(f, t, deg)?.scale(a))?;
    }
    Ok(acc)
}

/// `Σ_{t=lo}^{hi} C(l, t)` as a `u128`.
pub fn binomial_sum(l: u64, lo: u64, hi: u64) -> u128 {
    (lo..=hi)
        .map(|t| binomial(l, t))
        .sum::<num_bigint::BigUint>()
        .try_into()
        .expect("binomial sum fits in u128")
}

/// Rank cap `Σ_{t=0}^{d} C(l, t)` for a witness of binomial-basis degree `d`.
pub fn witness_rank_cap(
    l: usize,
    residues: &[u64],
    p: u64,
    variant: WitnessVariant,
) -> Result<u128> {
    let r = normalized_residues(residues, p)?;
    let degree = match variant {
        WitnessVariant::Product => r.len(),
        WitnessVariant::Fermat => p as usize - 1,
    };
    Ok(binomial_sum(l as u64, 0, degree as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(l: usize, lists: &[&[u32]]) -> SetFamily {
        SetFamily::from_lists(l, lists).unwrap()
    }

    fn ints(m: &ExactMatrix) -> Vec<Vec<String>> {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.entry(i, j).to_string()).collect())
            .collect()
    }

    #[test]
    fn inclusion_examples() {
        let empty = fam(0, &[&[]]);
        assert_eq!(
            ints(&inclusion_matrix(&empty, &empty).unwrap()),
            vec![vec!["1"]]
        );

        let f = fam(3, &[&[1, 2]]);
        let t = fam(3, &[&[1], &[2], &[3]]);
        assert_eq!(
            ints(&inclusion_matrix(&f, &t).unwrap()),
            vec![vec!["1", "1", "0"]]
        );

        let g = fam(4, &[&[1, 2], &[], &[4]]);
        let col = t_inclusion_matrix(&g, 0).unwrap();
        assert_eq!(col.cols(), 1);
        assert!((0..3).all(|i| col.entry(i, 0).to_string() == "1"));

        assert!(inclusion_matrix(&f, &g).is_err());
    }

    #[test]
    fn t_inclusion_examples() {
        let singles = SetFamily::all_subsets_of_size(3, 1).unwrap();
        let m = t_inclusion_matrix(&singles, 1).unwrap();
        assert_eq!(m, ExactMatrix::identity(Field::Rational, 3));

        let pairs = SetFamily::all_subsets_of_size(4, 2).unwrap();
        let m = t_inclusion_matrix(&pairs, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (6, 4));
        for i in 0..6 {
            assert_eq!((0..4).filter(|&j| !m.is_zero_at(i, j)).count(), 2);
        }
        assert_eq!(m.rank(), 4);
        assert!(t_inclusion_matrix(&pairs, 5).is_err());
    }

    #[test]
    fn lexicographic_subset_order() {
        let f = SetFamily::all_subsets_of_size(4, 2).unwrap();
        assert_eq!(
            f.element_lists(),
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
    }

    #[test]
    fn t_intersection_examples() {
        let f = fam(2, &[&[1], &[1, 2], &[2]]);
        let m = t_intersection_matrix(&f, &f, 1).unwrap();
        assert_eq!(
            ints(&m),
            vec![
                vec!["1", "1", "0"],
                vec!["1", "2", "1"],
                vec!["0", "1", "1"]
            ]
        );
        let m0 = t_intersection_matrix(&f, &f, 0).unwrap();
        assert!((0..3).all(|i| (0..3).all(|j| m0.entry(i, j).to_string() == "1")));
    }

    #[test]
    fn inclusion_identity_examples() {
        let pairs = SetFamily::all_subsets_of_size(4, 2).unwrap();
        assert!(check_inclusion_identity(&pairs, 2, 2, 1).unwrap());
        assert!(check_inclusion_identity(&pairs, 2, 1, 1).unwrap());
        assert!(check_inclusion_identity(&pairs, 2, 2, 0).unwrap());
        let mixed = fam(3, &[&[1], &[1, 2]]);
        assert!(matches!(
            check_inclusion_identity(&mixed, 1, 1, 0),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_inclusion_identity(&pairs, 2, 3, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn product_witness_zero_where_intersection_odd() {
        let f = fam(2, &[&[1], &[1, 2], &[2]]);
        let m = witness_matrix_modular(&f, &f, &[1], 2, WitnessVariant::Product).unwrap();
        // intersection sizes [[1,1,0],[1,2,1],[0,1,1]]
        let zero: Vec<Vec<bool>> = (0..3)
            .map(|i| (0..3).map(|j| m.is_zero_at(i, j)).collect())
            .collect();
        assert_eq!(
            zero,
            vec![
                vec![true, true, false],
                vec![true, false, true],
                vec![false, true, true]
            ]
        );
    }

    #[test]
    fn witness_routes_agree_on_small_family() {
        let f = fam(4, &[&[1, 2], &[2, 3, 4], &[], &[1, 4], &[1, 2, 3, 4]]);
        for (p, r) in [(2u64, vec![1u64]), (3, vec![1, 2]), (5, vec![0, 3])] {
            for variant in [WitnessVariant::Product, WitnessVariant::Fermat] {
                let direct = witness_matrix_modular(&f, &f, &r, p, variant).unwrap();
                let basis = witness_matrix_by_basis(&f, &f, &r, p, variant).unwrap();
                assert_eq!(direct, basis, "p={p} R={r:?} {variant:?}");
            }
        }
        let direct = witness_matrix_finite(&f, &f, &[0, 1]).unwrap();
        let basis = witness_matrix_finite_by_basis(&f, &f, &[0, 1]).unwrap();
        assert_eq!(direct, basis);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let f = fam(5, &[&[1, 3], &[], &[5]]);
        let text = f.to_text();
        assert_eq!(text, "5 3\n1 3\n-\n5\n");
        assert_eq!(SetFamily::parse_text(&text).unwrap(), f);
        assert!(SetFamily::parse_text("3 2\n1\n").is_err());
        assert!(SetFamily::parse_text("3 1\n4\n").is_err());
        assert!(SetFamily::parse_text("3 1\n\n").is_err());
    }

    #[test]
    fn rank_caps() {
        assert_eq!(binomial_sum(4, 0, 2), 11);
        assert_eq!(
            witness_rank_cap(4, &[1, 2], 3, WitnessVariant::Product).unwrap(),
            11
        );
        assert_eq!(
            witness_rank_cap(4, &[1], 5, WitnessVariant::Fermat).unwrap(),
            16
        );
    }
}
