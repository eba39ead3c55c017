//! Exact dense linear algebra over GF(p) and the rationals, binomial
//! coefficients, and coefficient extraction in the binomial basis
//! `{C(x,0), C(x,1), ...}`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus accepted; keeps products of residues inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Prime(u64),
    Rational,
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::arg(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "gf:{p}"),
            Field::Rational => write!(f, "rational"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Mod(u64),
    Rat(BigRational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(v) => *v == 0,
            Scalar::Rat(v) => v.is_zero(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(v) => write!(f, "{v}"),
            Scalar::Rat(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Entries {
    Mod(Vec<u64>),
    Rat(Vec<BigRational>),
}

/// Dense row-major matrix whose entries are canonical field elements:
/// residues in `0..p` for GF(p), reduced fractions for the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Entries,
}

impl ExactMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        let entries = match field {
            Field::Prime(_) => Entries::Mod(vec![0; rows * cols]),
            Field::Rational => Entries::Rat(vec![BigRational::zero(); rows * cols]),
        };
        ExactMatrix {
            rows,
            cols,
            field,
            entries,
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = ExactMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set_int(i, i, 1);
        }
        m
    }

    /// Builds from row-major integers, reducing into the field.
    pub fn from_ints(field: Field, rows: usize, cols: usize, values: &[i64]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::arg(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        let mut m = ExactMatrix::zeros(field, rows, cols);
        for (k, &v) in values.iter().enumerate() {
            m.set_int(k / cols, k % cols, v);
        }
        Ok(m)
    }

    pub fn from_bigints(field: Field, rows: usize, cols: usize, values: &[BigInt]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::arg(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        let mut m = ExactMatrix::zeros(field, rows, cols);
        for (k, v) in values.iter().enumerate() {
            m.set_bigint(k / cols, k % cols, v);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn set_int(&mut self, i: usize, j: usize, v: i64) {
        self.set_bigint(i, j, &BigInt::from(v));
    }

    pub fn set_bigint(&mut self, i: usize, j: usize, v: &BigInt) {
        let k = i * self.cols + j;
        match (&mut self.entries, self.field) {
            (Entries::Mod(e), Field::Prime(p)) => e[k] = reduce_bigint(v, p),
            (Entries::Rat(e), _) => e[k] = BigRational::from_integer(v.clone()),
            _ => unreachable!("entries always match the field"),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        let k = i * self.cols + j;
        match &self.entries {
            Entries::Mod(e) => Scalar::Mod(e[k]),
            Entries::Rat(e) => Scalar::Rat(e[k].clone()),
        }
    }

    pub fn is_zero_at(&self, i: usize, j: usize) -> bool {
        let k = i * self.cols + j;
        match &self.entries {
            Entries::Mod(e) => e[k] == 0,
            Entries::Rat(e) => e[k].is_zero(),
        }
    }

    /// Residue at `(i, j)`; panics on a rational matrix.
    pub fn get_mod(&self, i: usize, j: usize) -> u64 {
        match &self.entries {
            Entries::Mod(e) => e[i * self.cols + j],
            Entries::Rat(_) => panic!("get_mod on a rational matrix"),
        }
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.rows, self.cols);
        let entries = match &self.entries {
            Entries::Mod(e) => Entries::Mod((0..r * c).map(|k| e[(k % r) * c + k / r]).collect()),
            Entries::Rat(e) => {
                Entries::Rat((0..r * c).map(|k| e[(k % r) * c + k / r].clone()).collect())
            }
        };
        ExactMatrix {
            rows: c,
            cols: r,
            field: self.field,
            entries,
        }
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.field != other.field || self.cols != other.rows {
            return Err(Error::arg(format!(
                "cannot multiply {}x{} over {} by {}x{} over {}",
                self.rows, self.cols, self.field, other.rows, other.cols, other.field
            )));
        }
        let (n, m, q) = (self.rows, self.cols, other.cols);
        let entries = match (&self.entries, &other.entries, self.field) {
            (Entries::Mod(a), Entries::Mod(b), Field::Prime(p)) => {
                let mut out = vec![0u64; n * q];
                for i in 0..n {
                    for k in 0..m {
                        let x = a[i * m + k];
                        if x == 0 {
                            continue;
                        }
                        for j in 0..q {
                            out[i * q + j] = (out[i * q + j] + x * b[k * q + j]) % p;
                        }
                    }
                }
                Entries::Mod(out)
            }
            (Entries::Rat(a), Entries::Rat(b), _) => {
                let mut out = vec![BigRational::zero(); n * q];
                for i in 0..n {
                    for k in 0..m {
                        let x = &a[i * m + k];
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..q {
                            let y = &b[k * q + j];
                            if !y.is_zero() {
                                out[i * q + j] += x * y;
                            }
                        }
                    }
                }
                Entries::Rat(out)
            }
            _ => unreachable!("fields checked above"),
        };
        Ok(ExactMatrix {
            rows: n,
            cols: q,
            field: self.field,
            entries,
        })
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.field != other.field || self.rows != other.rows || self.cols != other.cols {
            return Err(Error::arg("matrix sum needs equal shapes and fields"));
        }
        let entries = match (&self.entries, &other.entries, self.field) {
            (Entries::Mod(a), Entries::Mod(b), Field::Prime(p)) => {
                Entries::Mod(a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
            }
            (Entries::Rat(a), Entries::Rat(b), _) => {
                Entries::Rat(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => unreachable!("fields checked above"),
        };
        Ok(ExactMatrix {
            entries,
            ..self.clone()
        })
    }

    /// Multiplies every entry by an integer.
    pub fn scale(&self, factor: &BigInt) -> ExactMatrix {
        let entries = match (&self.entries, self.field) {
            (Entries::Mod(a), Field::Prime(p)) => {
                let f = reduce_bigint(factor, p);
                Entries::Mod(a.iter().map(|x| x * f % p).collect())
            }
            (Entries::Rat(a), _) => {
                let f = BigRational::from_integer(factor.clone());
                Entries::Rat(a.iter().map(|x| x * &f).collect())
            }
            _ => unreachable!("entries always match the field"),
        };
        ExactMatrix {
            entries,
            ..self.clone()
        }
    }

    /// Image of an integer-valued rational matrix in GF(p).
    pub fn reduce_mod(&self, p: u64) -> Result<ExactMatrix> {
        let field = Field::prime(p)?;
        match &self.entries {
            Entries::Mod(_) => Err(Error::arg("matrix is already over a finite field")),
            Entries::Rat(e) => {
                let mut out = Vec::with_capacity(e.len());
                for v in e {
                    if !v.is_integer() {
                        return Err(Error::arg("reduction mod p needs integer entries"));
                    }
                    out.push(reduce_bigint(v.numer(), p));
                }
                Ok(ExactMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    field,
                    entries: Entries::Mod(out),
                })
            }
        }
    }

    pub fn rank(&self) -> usize {
        match (&self.entries, self.field) {
            (Entries::Mod(e), Field::Prime(p)) => rank_mod(e.clone(), self.rows, self.cols, p),
            (Entries::Rat(e), _) => rank_bareiss(self.integer_rows(e), self.cols),
            _ => unreachable!("entries always match the field"),
        }
    }

    /// Each row scaled by the lcm of its denominators.
    fn integer_rows(&self, e: &[BigRational]) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = &e[i * self.cols..(i + 1) * self.cols];
                let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect()
    }

    /// Dense integer grid with a header line `<field> <rows> <cols>`.
    pub fn to_grid_string(&self) -> String {
        let mut out = format!("{} {} {}\n", self.field, self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.entry(i, j).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_grid(text: &str) -> Result<ExactMatrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| Error::arg("empty matrix text"))?
            .split_whitespace()
            .collect();
        let [tag, r, c] = header[..] else {
            return Err(Error::arg(
                "matrix header must be \"<field> <rows> <cols>\"",
            ));
        };
        let field = match tag.strip_prefix("gf:") {
            Some(p) => Field::prime(
                p.parse()
                    .map_err(|_| Error::arg(format!("bad field {tag}")))?,
            )?,
            None if tag == "rational" => Field::Rational,
            None => return Err(Error::arg(format!("unknown field tag {tag}"))),
        };
        let rows: usize = r.parse().map_err(|_| Error::arg("bad row count"))?;
        let cols: usize = c.parse().map_err(|_| Error::arg("bad column count"))?;
        let mut values = Vec::with_capacity(rows * cols);
        for line in lines {
            for tok in line.split_whitespace() {
                values.push(
                    tok.parse::<BigInt>()
                        .map_err(|_| Error::arg(format!("non-integer entry {tok:?}")))?,
                );
            }
        }
        ExactMatrix::from_bigints(field, rows, cols, &values)
    }
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Rank over GF(p) of a row-major residue matrix.
pub(crate) fn rank_mod(mut a: Vec<u64>, rows: usize, cols: usize, p: u64) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                a.swap(piv * cols + j, rank * cols + j);
            }
        }
        let inv = inv_mod(a[rank * cols + col], p);
        for j in col..cols {
            a[rank * cols + j] = a[rank * cols + j] * inv % p;
        }
        for i in rank + 1..rows {
            let f = a[i * cols + col];
            if f == 0 {
                continue;
            }
            for j in col..cols {
                let sub = f * a[rank * cols + j] % p;
                a[i * cols + j] = (a[i * cols + j] + p - sub) % p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank over GF(2) of bit-packed rows (bit j of a row is column j).
pub(crate) fn rank_gf2(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let pivot_row = rows[i];
        if pivot_row == 0 {
            continue;
        }
        rank += 1;
        let low = pivot_row & pivot_row.wrapping_neg();
        for r in rows.iter_mut().skip(i + 1) {
            if *r & low != 0 {
                *r ^= pivot_row;
            }
        }
    }
    rank
}

/// Fraction-free (Bareiss) elimination; every division is exact.
fn rank_bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = &pivot_row[col];
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..cols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot.clone();
        rank += 1;
    }
    rank
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    (binomial(n, k) % p).to_u64().expect("residue fits")
}

pub fn binomial_i64(n: u64, k: u64) -> i64 {
    binomial(n, k).to_i64().expect("binomial fits in i64")
}

/// Coefficients `a_0..a_d` in GF(p) of a polynomial written in the binomial
/// basis: `f(x) ≡ Σ a_t C(x, t) (mod p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffVector {
    p: u64,
    coeffs: Vec<u64>,
}

impl CoeffVector {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(t, &a)| a * binomial_mod(x, t as u64, self.p) % self.p)
            .fold(0, |acc, v| (acc + v) % self.p)
    }

    /// Binomial-basis coefficients from values `f(0..=degree)` via forward
    /// differences: `a_t = Σ_j (-1)^(t-j) C(t,j) f(j)`.
    fn from_values(p: u64, values: &[u64]) -> CoeffVector {
        let coeffs = (0..values.len())
            .map(|t| {
                (0..=t).fold(0u64, |acc, j| {
                    let term = binomial_mod(t as u64, j as u64, p) * values[j] % p;
                    if (t - j) % 2 == 0 {
                        (acc + term) % p
                    } else {
                        (acc + p - term) % p
                    }
                })
            })
            .collect();
        CoeffVector { p, coeffs }
    }
}

impl fmt::Display for CoeffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn check_residues(residues: &[u64], p: u64) -> Result<()> {
    Field::prime(p)?;
    if let Some(r) = residues.iter().find(|&&r| r >= p) {
        return Err(Error::arg(format!("residue {r} out of range for p = {p}")));
    }
    Ok(())
}

/// Coefficients with `∏_{r∈R} (x − r) ≡ Σ_{t=0}^{|R|} a_t C(x,t) (mod p)`.
pub fn binomial_basis_coeffs(residues: &[u64], p: u64) -> Result<CoeffVector> {
    check_residues(residues, p)?;
    let mut r = residues.to_vec();
    r.sort_unstable();
    r.dedup();
    if r.is_empty() {
        return Err(Error::arg("residue set must be nonempty"));
    }
    let values: Vec<u64> = (0..=r.len() as u64)
        .map(|x| r.iter().fold(1, |acc, &ri| acc * ((x + p - ri) % p) % p))
        .collect();
    Ok(CoeffVector::from_values(p, &values))
}

/// Coefficients with `1 − (x − r)^(p−1) ≡ Σ_{t=0}^{p−1} b_t C(x,t) (mod p)`;
/// the left side is the indicator of `x ≡ r (mod p)`.
pub fn fermat_basis_coeffs(r: u64, p: u64) -> Result<CoeffVector> {
    check_residues(&[r], p)?;
    let values: Vec<u64> = (0..p)
        .map(|x| (1 + p - pow_mod((x + p - r) % p, p - 1, p)) % p)
        .collect();
    Ok(CoeffVector::from_values(p, &values))
}

/// Integer coefficients with `∏_{l∈L} (x − l) = Σ_t a_t C(x,t)` exactly.
pub fn integer_binomial_basis_coeffs(values: &[u64]) -> Vec<BigInt> {
    let f: Vec<BigInt> = (0..=values.len() as i64)
        .map(|x| values.iter().map(|&l| BigInt::from(x - l as i64)).product())
        .collect();
    (0..f.len())
        .map(|t| {
            (0..=t)
                .map(|j| {
                    let c = BigInt::from(binomial(t as u64, j as u64)) * &f[j];
                    if (t - j) % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .sum()
        })
        .collect()
}

/// `|v|` as a `u64`; helper for reports on integer-valued rationals.
pub fn bigint_to_u64(v: &BigInt) -> Option<u64> {
    if v.is_negative() {
        None
    } else {
        v.to_u64()
    }
}
