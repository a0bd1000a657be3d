//! The correspondence between an m-homogeneous polynomial `P` and its
//! symmetric m-linear form `B` with `B(z, ..., z) = P(z)`.
//!
//! For `P(z) = sum_{j in J(m,n)} c_j z_{j_1} ... z_{j_m}` the form has
//! coefficients `b_i = c_{[i]} / |i|` for every `i` in `M(m, n)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{invalid, Result};
use crate::index::{CanonicalIndex, MultiIndex};
use crate::multilinear::MultilinearForm;
use crate::numeric::ln_factorial;
use crate::poly::{HomogeneousDoc, HomogeneousPolynomial, PolynomialDoc};

/// A symmetric m-linear form on `C^n`.
///
/// Only one coefficient per permutation class is kept. Internally the class
/// total `|j| b_j` is stored, so that restricting a polarized polynomial to
/// the diagonal gives back its coefficients bit for bit; `coeff` divides by
/// the multiplicity on access.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricForm {
    m: usize,
    n: usize,
    class_coeffs: BTreeMap<CanonicalIndex, Complex64>,
}

impl SymmetricForm {
    pub fn zero(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return invalid("symmetric form needs m, n >= 1");
        }
        Ok(Self { m, n, class_coeffs: BTreeMap::new() })
    }

    /// Builds from `(i, b_i)` pairs. Setting any member of a class sets the
    /// whole class; a later pair for the same class wins.
    pub fn from_coefficients<I>(m: usize, n: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut form = Self::zero(m, n)?;
        for (idx, b) in coeffs {
            if idx.degree() != m || idx.dimension() != n {
                return invalid(format!("index {idx} does not fit m = {m}, n = {n}"));
            }
            let mult = idx.multiplicity()? as f64;
            form.class_coeffs.insert(idx.canonical(), b * mult);
        }
        Ok(form)
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// `b_i`, resolved through the class of `i`.
    pub fn coeff(&self, idx: &MultiIndex) -> Result<Complex64> {
        let key = idx.canonical();
        match self.class_coeffs.get(&key) {
            Some(c) => Ok(c / key.multiplicity()? as f64),
            None => Ok(Complex64::new(0.0, 0.0)),
        }
    }

    /// `B(z^(1), ..., z^(m))`, summing each stored class over its distinct
    /// rearrangements.
    pub fn evaluate(&self, points: &[Vec<Complex64>]) -> Result<Complex64> {
        if points.len() != self.m {
            return invalid(format!("expected {} points, got {}", self.m, points.len()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != self.n) {
            return invalid(format!("point of dimension {} but n = {}", p.len(), self.n));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (j, c) in &self.class_coeffs {
            let b = c / j.multiplicity()? as f64;
            let class_sum: Complex64 = j
                .permutations()
                .map(|perm| perm.iter().zip(points).fold(Complex64::new(1.0, 0.0), |acc, (&v, z)| acc * z[v - 1]))
                .sum();
            total += b * class_sum;
        }
        Ok(total)
    }

    /// `P(z) = B(z, ..., z)`.
    pub fn restrict_diagonal(&self) -> HomogeneousPolynomial {
        HomogeneousPolynomial::from_terms(
            self.m,
            self.n,
            self.class_coeffs.iter().map(|(j, c)| (j.as_multi().clone(), *c)),
        )
        .expect("stored indices fit the form's shape")
    }

    /// `P_k(z) = B(z, ..., e^(d), ..., z)` with the basis vector `e^(d)` in
    /// 1-based slot `k`; a polynomial of degree `m - 1`.
    pub fn partial_substitution(&self, k: usize, d: usize) -> Result<HomogeneousPolynomial> {
        if self.m < 2 {
            return invalid("partial substitution needs m >= 2");
        }
        if k == 0 || k > self.m {
            return invalid(format!("slot {k} outside 1..={}", self.m));
        }
        if d == 0 || d > self.n {
            return invalid(format!("basis vector e^({d}) outside 1..={}", self.n));
        }
        // coefficient of the class [j'] is |j'| * b_{[j', d]}
        let mut out = HomogeneousPolynomial::zero(self.m - 1, self.n)?;
        for j_rest in crate::index::enumerate_j(self.m - 1, self.n)? {
            let full = j_rest.insert_coordinate(k, d)?;
            let b = self.coeff(&full)?;
            if b != Complex64::new(0.0, 0.0) {
                out.add_term(&j_rest, b * j_rest.multiplicity()? as f64)?;
            }
        }
        Ok(out)
    }

    /// Dense table over `M(m, n)`.
    pub fn to_multilinear(&self) -> Result<MultilinearForm> {
        let mut err = None;
        let form = MultilinearForm::from_fn(self.m, self.n, |i| {
            let idx = MultiIndex::new(i.to_vec(), self.n).expect("odometer stays in range");
            self.coeff(&idx).unwrap_or_else(|e| {
                err.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            })
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(form),
        }
    }

    /// Serialized as the diagonal polynomial with `"polarized": true`.
    pub fn to_json(&self) -> Result<String> {
        let mut doc = HomogeneousDoc::from(&self.restrict_diagonal());
        doc.polarized = true;
        Ok(serde_json::to_string(&PolynomialDoc::Homogeneous(doc))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        match serde_json::from_str::<PolynomialDoc>(s)? {
            PolynomialDoc::Homogeneous(doc) if doc.polarized => Ok(polarize(&HomogeneousPolynomial::try_from(&doc)?)),
            _ => invalid("expected a homogeneous document with \"polarized\": true"),
        }
    }
}

/// The symmetric form of `P`: `b_j = c_j / |j|`.
pub fn polarize(p: &HomogeneousPolynomial) -> SymmetricForm {
    SymmetricForm {
        m: p.degree(),
        n: p.dimension(),
        class_coeffs: p.terms().map(|(j, c)| (j.clone(), *c)).collect(),
    }
}

/// Repetition pattern `(m_1, ..., m_k)` of the arguments, `sum m_j = m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarrisPartition {
    pub parts: Vec<usize>,
}

impl HarrisPartition {
    pub fn new(parts: Vec<usize>, m: usize) -> Result<Self> {
        let sum: usize = parts.iter().sum();
        if sum != m {
            return invalid(format!("partition {parts:?} sums to {sum}, not {m}"));
        }
        Ok(Self { parts })
    }
}

/// `(m_1! ... m_k! / (m_1^m_1 ... m_k^m_k)) * m^m / m!`, with `0^0 = 1`.
pub fn harris_factor(m: usize, partition: &HarrisPartition) -> Result<f64> {
    let sum: usize = partition.parts.iter().sum();
    if sum != m || m == 0 {
        return invalid(format!("partition {:?} is not a partition of {m}", partition.parts));
    }
    let ln_pow = |k: usize| if k == 0 { 0.0 } else { k as f64 * (k as f64).ln() };
    let ln = partition
        .parts
        .iter()
        .map(|&k| ln_factorial(k as u64) - ln_pow(k))
        .sum::<f64>()
        + ln_pow(m)
        - ln_factorial(m as u64);
    Ok(ln.exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarrisReport {
    pub partition: Vec<usize>,
    /// `|B(z^(1) x m_1, ..., z^(k) x m_k)|`
    pub value: f64,
    pub factor: f64,
    pub supnorm_bound: f64,
    /// `factor * supnorm_bound`
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Relative tolerance for deterministic inequality checks.
pub const REL_TOL: f64 = 1e-9;

/// Evaluates the polarization of `p` with point `k` repeated `m_k` times and
/// checks it against `harris_factor * supnorm_bound`.
pub fn check_harris(
    p: &HomogeneousPolynomial,
    partition: &HarrisPartition,
    points: &[Vec<Complex64>],
    supnorm_bound: f64,
) -> Result<HarrisReport> {
    let m = p.degree();
    if points.len() != partition.parts.len() {
        return invalid(format!("{} points for a partition with {} parts", points.len(), partition.parts.len()));
    }
    for z in points {
        if z.len() != p.dimension() {
            return invalid(format!("point of dimension {} but n = {}", z.len(), p.dimension()));
        }
        if z.iter().any(|c| c.norm() > 1.0 + 1e-12) {
            return invalid("point outside the closed polydisc");
        }
    }
    let factor = harris_factor(m, partition)?;
    let args: Vec<Vec<Complex64>> = partition
        .parts
        .iter()
        .zip(points)
        .flat_map(|(&k, z)| std::iter::repeat_n(z.clone(), k))
        .collect();
    let value = polarize(p).evaluate(&args)?.norm();
    let rhs = factor * supnorm_bound;
    Ok(HarrisReport {
        partition: partition.parts.clone(),
        value,
        factor,
        supnorm_bound,
        rhs,
        slack: rhs - value,
        pass: value <= rhs * (1.0 + REL_TOL),
    })
}
