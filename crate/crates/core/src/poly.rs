//! Polynomials on `C^n`: homogeneous and general, with evaluation,
//! coefficient norms, torus norms and random generation.
//!
//! Coefficients of a [`HomogeneousPolynomial`] are keyed by
//! [`CanonicalIndex`], i.e. `P(z) = sum_j c_j z_{j_1} ... z_{j_m}` over
//! `j` in `J(m, n)`. Exponent vectors are the wire format only.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::index::{enumerate_j, CanonicalIndex, ExponentVector, MultiIndex};
use crate::numeric::{lp_norm, ExactSum, NormExponent};
use crate::seed;

#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPolynomial {
    m: usize,
    n: usize,
    coeffs: BTreeMap<CanonicalIndex, Complex64>,
}

impl HomogeneousPolynomial {
    pub fn zero(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return invalid("homogeneous polynomial needs m, n >= 1");
        }
        Ok(Self { m, n, coeffs: BTreeMap::new() })
    }

    /// Builds from `(index, coefficient)` pairs; repeated keys add up and
    /// any `MultiIndex` is resolved through its class.
    pub fn from_terms<I>(m: usize, n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut p = Self::zero(m, n)?;
        for (idx, c) in terms {
            p.add_term(&idx, c)?;
        }
        Ok(p)
    }

    /// Builds from exponent vectors, each of length `n` and degree `m`.
    pub fn from_exponents<I>(m: usize, n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Complex64)>,
    {
        let mut p = Self::zero(m, n)?;
        for (alpha, c) in terms {
            if alpha.dimension() != n {
                return invalid(format!("exponent vector has length {} but n = {n}", alpha.dimension()));
            }
            let idx = CanonicalIndex::from_exponent(&alpha, m)?;
            p.add_term(&idx, c)?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, idx: &MultiIndex, c: Complex64) -> Result<()> {
        if idx.degree() != self.m || idx.dimension() != self.n {
            return invalid(format!(
                "index {idx} of degree {} / dimension {} does not fit m = {}, n = {}",
                idx.degree(),
                idx.dimension(),
                self.m,
                self.n
            ));
        }
        let key = idx.canonical();
        let entry = self.coeffs.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// `c_{[i]}`.
    pub fn coeff(&self, idx: &MultiIndex) -> Complex64 {
        self.coeffs.get(&idx.canonical()).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self {
            m: self.m,
            n: self.n,
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c * lambda)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.m, self.n) != (other.m, other.n) {
            return invalid("adding polynomials of different shape");
        }
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            *out.coeffs.entry(k.clone()).or_default() += c;
        }
        Ok(out)
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return invalid(format!("point has dimension {} but n = {}", z.len(), self.n));
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(j, c)| j.entries().iter().fold(*c, |acc, &v| acc * z[v - 1]))
            .sum())
    }

    fn moduli(&self) -> Vec<f64> {
        self.coeffs.values().map(|c| c.norm()).collect()
    }

    /// `l^p` norm of the coefficient family, one entry per monomial.
    pub fn coeff_norm(&self, p: NormExponent) -> Result<CoefficientNormReport> {
        if let NormExponent::Finite(q) = p {
            if q.is_nan() || q <= 0.0 {
                return invalid(format!("norm exponent must be > 0, got {q}"));
            }
        }
        Ok(CoefficientNormReport { p, value: lp_norm(&self.moduli(), p) })
    }

    /// `|||P|||_1 = sum |a_alpha|`.
    pub fn l1_coeff_norm(&self) -> f64 {
        lp_norm(&self.moduli(), NormExponent::Finite(1.0))
    }

    /// The `L^2` norm over the torus with normalized Haar measure; by
    /// orthonormality of monomials it is the `l^2` coefficient norm.
    pub fn l2_torus_norm(&self) -> f64 {
        lp_norm(&self.moduli(), NormExponent::Finite(2.0))
    }

    /// Largest exponent of any single variable.
    pub fn max_variable_degree(&self) -> usize {
        self.coeffs
            .keys()
            .flat_map(|j| j.to_exponent().alpha)
            .max()
            .unwrap_or(0) as usize
    }
}

/// Result of [`HomogeneousPolynomial::coeff_norm`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientNormReport {
    pub p: NormExponent,
    pub value: f64,
}

/// `P = a0 + sum_m P_m` with finitely many homogeneous parts.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralPolynomial {
    n: usize,
    a0: Complex64,
    parts: BTreeMap<usize, HomogeneousPolynomial>,
}

impl GeneralPolynomial {
    /// `n = 0` is allowed and leaves only the constant term.
    pub fn constant(n: usize, a0: Complex64) -> Self {
        Self { n, a0, parts: BTreeMap::new() }
    }

    pub fn from_parts<I>(n: usize, a0: Complex64, parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = HomogeneousPolynomial>,
    {
        let mut p = Self::constant(n, a0);
        for part in parts {
            p.add_part(part)?;
        }
        Ok(p)
    }

    pub fn add_part(&mut self, part: HomogeneousPolynomial) -> Result<()> {
        if part.dimension() != self.n {
            return invalid(format!("part has dimension {} but n = {}", part.dimension(), self.n));
        }
        match self.parts.get_mut(&part.degree()) {
            Some(existing) => *existing = existing.add(&part)?,
            None => {
                self.parts.insert(part.degree(), part);
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn a0(&self) -> Complex64 {
        self.a0
    }

    pub fn part(&self, m: usize) -> Option<&HomogeneousPolynomial> {
        self.parts.get(&m)
    }

    pub fn parts(&self) -> impl Iterator<Item = &HomogeneousPolynomial> {
        self.parts.values()
    }

    pub fn max_degree(&self) -> usize {
        self.parts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self {
            n: self.n,
            a0: self.a0 * lambda,
            parts: self.parts.iter().map(|(m, p)| (*m, p.scale(lambda))).collect(),
        }
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return invalid(format!("point has dimension {} but n = {}", z.len(), self.n));
        }
        self.parts.values().try_fold(self.a0, |acc, p| Ok(acc + p.evaluate(z)?))
    }

    /// `sum |a_alpha|` over all monomials including the constant.
    pub fn l1_coeff_norm(&self) -> f64 {
        let mut s = ExactSum::default();
        s.add(self.a0.norm());
        for p in self.parts.values() {
            for (_, c) in p.terms() {
                s.add(c.norm());
            }
        }
        s.value()
    }

    /// `sup_{z in r D^n} sum |a_alpha z^alpha| = |a0| + sum_m r^m |||P_m|||_1`.
    pub fn majorant_sum(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r < 0.0 {
            return invalid(format!("radius must be >= 0, got {r}"));
        }
        let mut s = ExactSum::default();
        s.add(self.a0.norm());
        for (m, p) in &self.parts {
            s.add(r.powi(*m as i32) * p.l1_coeff_norm());
        }
        Ok(s.value())
    }

    pub fn max_variable_degree(&self) -> usize {
        self.parts.values().map(|p| p.max_variable_degree()).max().unwrap_or(0)
    }
}

impl From<HomogeneousPolynomial> for GeneralPolynomial {
    fn from(p: HomogeneousPolynomial) -> Self {
        let mut g = Self::constant(p.dimension(), Complex64::new(0.0, 0.0));
        g.parts.insert(p.degree(), p);
        g
    }
}

/// Flattened view of a polynomial used by the torus searches: one
/// coefficient and one list of 0-based variables (with repetition) per term.
#[derive(Clone, Debug)]
pub struct TermTable {
    pub n: usize,
    pub constant: Complex64,
    pub coeffs: Vec<Complex64>,
    vars: Vec<u32>,
    offsets: Vec<u32>,
    /// `Some(m)` when every term has degree `m >= 1` and there is no constant.
    pub homogeneous_degree: Option<usize>,
    /// Per-variable maximal exponent.
    pub variable_degrees: Vec<usize>,
}

impl TermTable {
    fn build<'a>(
        n: usize,
        constant: Complex64,
        terms: impl Iterator<Item = (&'a CanonicalIndex, &'a Complex64)>,
    ) -> Self {
        let mut coeffs = Vec::new();
        let mut vars = Vec::new();
        let mut offsets = vec![0u32];
        let mut variable_degrees = vec![0usize; n];
        let mut degrees = Vec::new();
        for (j, c) in terms {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            coeffs.push(*c);
            vars.extend(j.entries().iter().map(|&v| (v - 1) as u32));
            offsets.push(vars.len() as u32);
            for (k, &a) in j.to_exponent().alpha.iter().enumerate() {
                variable_degrees[k] = variable_degrees[k].max(a as usize);
            }
            degrees.push(j.degree());
        }
        let homogeneous_degree = match degrees.first() {
            Some(&m) if constant == Complex64::new(0.0, 0.0) && degrees.iter().all(|&d| d == m) => Some(m),
            _ => None,
        };
        Self { n, constant, coeffs, vars, offsets, homogeneous_degree, variable_degrees }
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant == Complex64::new(0.0, 0.0)
    }

    pub fn term_vars(&self, t: usize) -> &[u32] {
        &self.vars[self.offsets[t] as usize..self.offsets[t + 1] as usize]
    }

    pub fn l1_coeff_norm(&self) -> f64 {
        let mut s: ExactSum = self.coeffs.iter().map(|c| c.norm()).collect();
        s.add(self.constant.norm());
        s.value()
    }

    /// Value at the point `z` (any point of `C^n`).
    #[inline]
    pub fn eval_point(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = self.constant;
        for (t, c) in self.coeffs.iter().enumerate() {
            let mut term = *c;
            for &v in self.term_vars(t) {
                term *= z[v as usize];
            }
            acc += term;
        }
        acc
    }

    /// Value at `z = e^{i theta}`.
    #[inline]
    pub fn eval_phase(&self, theta: &[f64], scratch: &mut PhaseScratch) -> Complex64 {
        for (zk, &t) in scratch.z.iter_mut().zip(theta) {
            *zk = Complex64::cis(t);
        }
        self.eval_point(&scratch.z)
    }

    /// Value at `z = e^{i theta}` and the gradient of `|P|^2` with respect
    /// to `theta`, written into `grad`. Returns `(P, |P|^2)`.
    pub fn eval_phase_grad(&self, theta: &[f64], scratch: &mut PhaseScratch, grad: &mut [f64]) -> (Complex64, f64) {
        let PhaseScratch { z, dp } = scratch;
        for (zk, &t) in z.iter_mut().zip(theta) {
            *zk = Complex64::cis(t);
        }
        dp.iter_mut().for_each(|d| *d = Complex64::new(0.0, 0.0));
        // dP/dtheta_k = i sum alpha_k a_alpha z^alpha
        let mut acc = self.constant;
        for (t, c) in self.coeffs.iter().enumerate() {
            let vars = self.term_vars(t);
            let mut term = *c;
            for &v in vars {
                term *= z[v as usize];
            }
            acc += term;
            for &v in vars {
                dp[v as usize] += term;
            }
        }
        let conj = acc.conj();
        for (g, d) in grad.iter_mut().zip(dp.iter()) {
            // 2 Re(conj(P) * i * d)
            *g = -2.0 * (conj * d).im;
        }
        (acc, acc.norm_sqr())
    }
}

/// Reusable buffers for phase evaluation.
#[derive(Clone, Debug)]
pub struct PhaseScratch {
    z: Vec<Complex64>,
    dp: Vec<Complex64>,
}

impl PhaseScratch {
    pub fn new(n: usize) -> Self {
        Self { z: vec![Complex64::new(0.0, 0.0); n], dp: vec![Complex64::new(0.0, 0.0); n] }
    }
}

/// Anything that can be searched on the torus.
pub trait TorusPolynomial {
    fn term_table(&self) -> TermTable;
}

impl TorusPolynomial for HomogeneousPolynomial {
    fn term_table(&self) -> TermTable {
        TermTable::build(self.n, Complex64::new(0.0, 0.0), self.coeffs.iter())
    }
}

impl TorusPolynomial for GeneralPolynomial {
    fn term_table(&self) -> TermTable {
        TermTable::build(self.n, self.a0, self.parts.values().flat_map(|p| p.coeffs.iter()))
    }
}

impl TorusPolynomial for TermTable {
    fn term_table(&self) -> TermTable {
        self.clone()
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Samples per Monte Carlo batch; batch `b` draws from stream `(seed, MC, b)`.
pub const MC_BATCH: usize = 4096;
const MC_STREAM: u64 = 0x4D43;

/// `||P||_{L^1(mu^n)}` by Monte Carlo over independent uniform phases.
///
/// Batches run in parallel and are merged in batch order, so the estimate
/// depends only on `(P, samples, seed)`.
pub fn l1_torus_norm_mc<P: TorusPolynomial + ?Sized>(p: &P, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples < 2 {
        return invalid("Monte Carlo needs at least 2 samples");
    }
    let table = p.term_table();
    let batches = samples.div_ceil(MC_BATCH);
    let stats: Vec<(usize, f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let len = MC_BATCH.min(samples - b * MC_BATCH);
            let mut rng = seed::rng(seed, &[MC_STREAM, b as u64]);
            let mut z = vec![Complex64::new(0.0, 0.0); table.n];
            let vals: Vec<f64> = (0..len)
                .map(|_| {
                    for zk in z.iter_mut() {
                        *zk = Complex64::cis(rng.random::<f64>() * TAU);
                    }
                    table.eval_point(&z).norm()
                })
                .collect();
            let mean = vals.iter().copied().collect::<ExactSum>().value() / len as f64;
            let m2 = vals.iter().map(|v| (v - mean) * (v - mean)).collect::<ExactSum>().value();
            (len, mean, m2)
        })
        .collect();
    // Chan et al. pairwise merge, in batch order
    let (count, mean, m2) = stats.into_iter().fold((0usize, 0.0f64, 0.0f64), |(na, ma, sa), (nb, mb, sb)| {
        let n = na + nb;
        let delta = mb - ma;
        let mean = ma + delta * nb as f64 / n as f64;
        let m2 = sa + sb + delta * delta * (na as f64) * (nb as f64) / n as f64;
        (n, mean, m2)
    });
    let var = m2 / (count as f64 - 1.0);
    Ok(McEstimate { mean, std_error: (var / count as f64).sqrt(), samples: count, seed })
}

/// Coefficient distributions for [`random_homogeneous`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientDistribution {
    /// `(X + iY)/sqrt 2` with `X, Y` standard normal.
    ComplexGaussian,
    /// Uniform on the closed unit disc.
    UniformDisc,
    /// `+1` or `-1` with equal probability.
    RandomSigns,
}

impl CoefficientDistribution {
    pub const ALL: [Self; 3] = [Self::ComplexGaussian, Self::UniformDisc, Self::RandomSigns];

    pub fn tag(self) -> &'static str {
        match self {
            Self::ComplexGaussian => "complex-gaussian",
            Self::UniformDisc => "uniform-disc",
            Self::RandomSigns => "random-signs",
        }
    }

    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> Complex64 {
        match self {
            Self::ComplexGaussian => {
                let x: f64 = StandardNormal.sample(rng);
                let y: f64 = StandardNormal.sample(rng);
                Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
            }
            Self::UniformDisc => {
                let r = rng.random::<f64>().sqrt();
                Complex64::from_polar(r, rng.random::<f64>() * TAU)
            }
            Self::RandomSigns => Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0),
        }
    }
}

impl FromStr for CoefficientDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|d| d.tag() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown distribution {s:?}")))
    }
}

/// Dense random polynomial over `J(m, n)`, coefficients drawn in
/// lexicographic index order from the stream of `seed`.
pub fn random_homogeneous(m: usize, n: usize, dist: CoefficientDistribution, seed: u64) -> Result<HomogeneousPolynomial> {
    let mut rng = seed::rng(seed, &[]);
    let mut p = HomogeneousPolynomial::zero(m, n)?;
    for j in enumerate_j(m, n)? {
        let c = dist.sample(&mut rng);
        p.coeffs.insert(j, c);
    }
    Ok(p)
}

pub use crate::index::dimension_count;

// ---------------------------------------------------------------------------
// JSON wire format

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub alpha: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousDoc {
    pub m: usize,
    pub n: usize,
    pub terms: Vec<TermDoc>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub polarized: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralDoc {
    pub n: usize,
    pub a0: ComplexDoc,
    pub parts: Vec<HomogeneousDoc>,
}

/// `{"kind":"homogeneous",...}` or `{"kind":"general",...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PolynomialDoc {
    Homogeneous(HomogeneousDoc),
    General(GeneralDoc),
}

impl From<&HomogeneousPolynomial> for HomogeneousDoc {
    fn from(p: &HomogeneousPolynomial) -> Self {
        Self {
            m: p.m,
            n: p.n,
            terms: p
                .coeffs
                .iter()
                .map(|(j, c)| TermDoc { alpha: j.to_exponent().alpha, re: c.re, im: c.im })
                .collect(),
            polarized: false,
        }
    }
}

impl TryFrom<&HomogeneousDoc> for HomogeneousPolynomial {
    type Error = Error;

    fn try_from(doc: &HomogeneousDoc) -> Result<Self> {
        Self::from_exponents(
            doc.m,
            doc.n,
            doc.terms
                .iter()
                .map(|t| (ExponentVector::new(t.alpha.clone()), Complex64::new(t.re, t.im))),
        )
    }
}

impl From<&GeneralPolynomial> for GeneralDoc {
    fn from(p: &GeneralPolynomial) -> Self {
        Self {
            n: p.n,
            a0: ComplexDoc { re: p.a0.re, im: p.a0.im },
            parts: p.parts.values().map(HomogeneousDoc::from).collect(),
        }
    }
}

impl TryFrom<&GeneralDoc> for GeneralPolynomial {
    type Error = Error;

    fn try_from(doc: &GeneralDoc) -> Result<Self> {
        let parts = doc.parts.iter().map(HomogeneousPolynomial::try_from).collect::<Result<Vec<_>>>()?;
        Self::from_parts(doc.n, Complex64::new(doc.a0.re, doc.a0.im), parts)
    }
}

impl HomogeneousPolynomial {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&PolynomialDoc::Homogeneous(self.into()))?)
    }
}

impl GeneralPolynomial {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&PolynomialDoc::General(self.into()))?)
    }

    /// Accepts either wire kind; a homogeneous document becomes a general
    /// polynomial with a single part.
    pub fn from_json(s: &str) -> Result<Self> {
        match serde_json::from_str::<PolynomialDoc>(s)? {
            PolynomialDoc::General(doc) => Self::try_from(&doc),
            PolynomialDoc::Homogeneous(doc) => Ok(HomogeneousPolynomial::try_from(&doc)?.into()),
        }
    }
}

impl HomogeneousPolynomial {
    pub fn from_json(s: &str) -> Result<Self> {
        match serde_json::from_str::<PolynomialDoc>(s)? {
            PolynomialDoc::Homogeneous(doc) => Self::try_from(&doc),
            PolynomialDoc::General(_) => invalid("expected a homogeneous polynomial document"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(m: usize, n: usize, terms: &[(&[u32], f64)]) -> HomogeneousPolynomial {
        HomogeneousPolynomial::from_exponents(
            m,
            n,
            terms.iter().map(|(a, v)| (ExponentVector::new(a.to_vec()), c(*v, 0.0))),
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let p = poly(2, 2, &[(&[1, 1], 1.0)]);
        let v = p.evaluate(&[c(0.0, 1.0), c(0.0, 1.0)]).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);
        let q = poly(2, 2, &[(&[2, 0], 1.0), (&[0, 2], 1.0)]);
        assert_eq!(q.evaluate(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), c(2.0, 0.0));
        assert!(q.evaluate(&[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn evaluate_is_homogeneous() {
        let p = random_homogeneous(3, 3, CoefficientDistribution::ComplexGaussian, 11).unwrap();
        let z = [c(0.3, -0.2), c(-0.7, 0.1), c(0.25, 0.5)];
        let lambda = c(0.6, -0.9);
        let lz: Vec<_> = z.iter().map(|x| x * lambda).collect();
        let lhs = p.evaluate(&lz).unwrap();
        let rhs = lambda.powu(3) * p.evaluate(&z).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * p.l1_coeff_norm());
    }

    #[test]
    fn coeff_norm_examples() {
        let p = poly(2, 2, &[(&[2, 0], 1.0), (&[1, 1], 2.0), (&[0, 2], 1.0)]);
        let v = p.coeff_norm(NormExponent::Finite(4.0 / 3.0)).unwrap().value;
        let oracle = (2.0 + 2f64.powf(4.0 / 3.0)).powf(0.75);
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - 3.100).abs() < 1e-3);
        let mono = poly(2, 2, &[(&[1, 1], 1.0)]);
        for q in [0.5, 1.0, 4.0 / 3.0, 2.0, 7.0] {
            assert!((mono.coeff_norm(NormExponent::Finite(q)).unwrap().value - 1.0).abs() < 1e-15);
        }
        assert_eq!(mono.coeff_norm(NormExponent::Infinity).unwrap().value, 1.0);
        let n = 5;
        let powers = HomogeneousPolynomial::from_exponents(
            3,
            n,
            (0..n).map(|k| {
                let mut a = vec![0; n];
                a[k] = 3;
                (ExponentVector::new(a), c(1.0, 0.0))
            }),
        )
        .unwrap();
        for q in [1.0, 1.5, 3.0] {
            let v = powers.coeff_norm(NormExponent::Finite(q)).unwrap().value;
            assert!((v - (n as f64).powf(1.0 / q)).abs() < 1e-12);
        }
        assert!(p.coeff_norm(NormExponent::Finite(0.0)).is_err());
        assert!(p.coeff_norm(NormExponent::Finite(-1.0)).is_err());
    }

    #[test]
    fn zero_polynomial_norms() {
        let z = HomogeneousPolynomial::zero(3, 2).unwrap();
        assert_eq!(z.coeff_norm(NormExponent::Finite(1.5)).unwrap().value, 0.0);
        assert_eq!(z.l2_torus_norm(), 0.0);
        assert_eq!(z.l1_coeff_norm(), 0.0);
        assert!(z.is_zero());
    }

    #[test]
    fn l2_torus_norm_examples() {
        let p = poly(2, 2, &[(&[2, 0], 1.0), (&[0, 2], 1.0)]);
        assert!((p.l2_torus_norm() - 2f64.sqrt()).abs() < 1e-15);
        let mut q = HomogeneousPolynomial::zero(2, 3).unwrap();
        q.add_term(&MultiIndex::new(vec![3, 1], 3).unwrap(), c(3.0, -4.0)).unwrap();
        assert!((q.l2_torus_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn l2_torus_norm_monte_carlo() {
        // mean of |P|^2 over uniform phases, independent of the estimator code
        let p = random_homogeneous(2, 3, CoefficientDistribution::ComplexGaussian, 5).unwrap();
        let mut rng = seed::rng(99, &[]);
        let samples = 200_000;
        let vals: Vec<f64> = (0..samples)
            .map(|_| {
                let z: Vec<Complex64> = (0..3).map(|_| Complex64::cis(rng.random::<f64>() * TAU)).collect();
                p.evaluate(&z).unwrap().norm_sqr()
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / samples as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
        let se = (var / samples as f64).sqrt();
        assert!((mean - p.l2_torus_norm().powi(2)).abs() <= 3.0 * se, "{mean} vs {}", p.l2_torus_norm().powi(2));
    }

    #[test]
    fn monte_carlo_l1_examples() {
        let z1 = poly(1, 1, &[(&[1], 1.0)]);
        let e = l1_torus_norm_mc(&z1, 10_000, 3).unwrap();
        assert!((e.mean - 1.0).abs() < 1e-12);
        assert!(e.std_error < 1e-12);

        let sum = poly(1, 2, &[(&[1, 0], 1.0), (&[0, 1], 1.0)]);
        let e = l1_torus_norm_mc(&sum, 1_000_000, 3).unwrap();
        let exact = 4.0 / std::f64::consts::PI;
        assert!((e.mean - exact).abs() <= 3.0 * e.std_error, "{} +- {}", e.mean, e.std_error);
        assert_eq!(e.samples, 1_000_000);

        let scaled = l1_torus_norm_mc(&sum.scale(c(2.0, 0.0)), 1_000_000, 3).unwrap();
        assert_eq!(scaled.mean, 2.0 * e.mean);
        let scaled = l1_torus_norm_mc(&sum.scale(c(3.7, 0.0)), 1_000_000, 3).unwrap();
        assert!((scaled.mean - 3.7 * e.mean).abs() <= 1e-13 * scaled.mean);

        assert!(l1_torus_norm_mc(&sum, 1, 3).is_err());
    }

    #[test]
    fn monte_carlo_is_thread_count_independent() {
        let p = random_homogeneous(3, 3, CoefficientDistribution::UniformDisc, 8).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| l1_torus_norm_mc(&p, 50_000, 12).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn random_generation() {
        let p = random_homogeneous(2, 2, CoefficientDistribution::RandomSigns, 1).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert!(p.terms().all(|(_, c)| c.im == 0.0 && c.re.abs() == 1.0));
        let q = random_homogeneous(2, 2, CoefficientDistribution::RandomSigns, 1).unwrap();
        assert_eq!(p, q);
        assert!("cauchy".parse::<CoefficientDistribution>().is_err());
        for d in CoefficientDistribution::ALL {
            assert_eq!(d.tag().parse::<CoefficientDistribution>().unwrap(), d);
        }
        let disc = random_homogeneous(4, 3, CoefficientDistribution::UniformDisc, 2).unwrap();
        assert!(disc.terms().all(|(_, c)| c.norm() <= 1.0));
    }

    #[test]
    fn gaussian_coefficients_have_zero_mean() {
        let seeds = 2000;
        let mut total = Complex64::new(0.0, 0.0);
        let mut count = 0;
        for s in 0..seeds {
            let p = random_homogeneous(3, 3, CoefficientDistribution::ComplexGaussian, s).unwrap();
            assert_eq!(p.num_terms(), 10);
            for (_, c) in p.terms() {
                total += c;
                count += 1;
            }
        }
        // each coefficient has E|c|^2 = 1, so the mean has s.d. 1/sqrt(count) per part
        let mean = total / count as f64;
        let sd = (0.5 / count as f64).sqrt();
        assert!(mean.re.abs() < 4.0 * sd && mean.im.abs() < 4.0 * sd, "{mean}");
    }

    #[test]
    fn majorant_examples() {
        let a0 = GeneralPolynomial::constant(2, c(0.4, 0.3));
        for r in [0.0, 0.3, 1.0, 5.0] {
            assert!((a0.majorant_sum(r).unwrap() - 0.5).abs() < 1e-15);
        }
        let lin: GeneralPolynomial = poly(1, 2, &[(&[1, 0], 1.0), (&[0, 1], 1.0)]).into();
        assert_eq!(lin.majorant_sum(0.5).unwrap(), 1.0);
        assert!(lin.majorant_sum(-0.1).is_err());

        // (a - z)/(1 - a z) = a - (1 - a^2) sum_{k>=1} a^{k-1} z^k
        let a = 0.9f64;
        let r = 1.0 / 3.0;
        let parts: Vec<_> = (1..=50)
            .map(|k| poly(k, 1, &[(&[k as u32], -(1.0 - a * a) * a.powi(k as i32 - 1))]))
            .collect();
        let f = GeneralPolynomial::from_parts(1, c(a, 0.0), parts).unwrap();
        let oracle = a + (1.0 - a * a) * (1..=50).map(|k| a.powi(k - 1) / 3f64.powi(k)).sum::<f64>();
        let got = f.majorant_sum(r).unwrap();
        assert!((got - oracle).abs() < 1e-14);
        assert!(got < 1.0);
    }

    #[test]
    fn json_round_trip_and_wire_shape() {
        let text = r#"{"kind":"homogeneous","m":2,"n":2,"terms":[{"alpha":[1,1],"re":2.0,"im":0.0}]}"#;
        let p = HomogeneousPolynomial::from_json(text).unwrap();
        assert_eq!(p.coeff(&MultiIndex::new(vec![2, 1], 2).unwrap()), c(2.0, 0.0));
        assert_eq!(p.to_json().unwrap(), text);

        let g = GeneralPolynomial::from_parts(2, c(0.5, -0.25), [p.clone()]).unwrap();
        let back = GeneralPolynomial::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);
        assert!(g.to_json().unwrap().starts_with(r#"{"kind":"general""#));
        assert_eq!(GeneralPolynomial::from_json(text).unwrap().part(2), Some(&p));

        let bad = r#"{"kind":"homogeneous","m":3,"n":2,"terms":[{"alpha":[1,1],"re":2.0,"im":0.0}]}"#;
        assert!(HomogeneousPolynomial::from_json(bad).is_err());
    }

    #[test]
    fn phase_gradient_matches_finite_differences() {
        let p = random_homogeneous(3, 3, CoefficientDistribution::ComplexGaussian, 21).unwrap();
        let t = p.term_table();
        let theta = [0.3, -1.1, 2.0];
        let mut z = PhaseScratch::new(3);
        let mut g = vec![0.0; 3];
        let (_, f0) = t.eval_phase_grad(&theta, &mut z, &mut g);
        let mut scratch = vec![0.0; 3];
        for k in 0..3 {
            let h = 1e-6;
            let mut tp = theta;
            tp[k] += h;
            let mut tm = theta;
            tm[k] -= h;
            let (_, fp) = t.eval_phase_grad(&tp, &mut z, &mut scratch);
            let (_, fm) = t.eval_phase_grad(&tm, &mut z, &mut scratch);
            let fd = (fp - fm) / (2.0 * h);
            assert!((fd - g[k]).abs() < 1e-6 * (1.0 + f0), "k={k} fd={fd} g={}", g[k]);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn coeff_norm_nonincreasing_in_p(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
                let p = random_homogeneous(m, n, CoefficientDistribution::ComplexGaussian, seed).unwrap();
                let ps = [0.5, 1.0, 4.0 / 3.0, 1.5, 2.0, 3.0];
                let vals: Vec<f64> = ps.iter().map(|&q| p.coeff_norm(NormExponent::Finite(q)).unwrap().value).collect();
                for w in vals.windows(2) {
                    prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
                }
                prop_assert!(p.coeff_norm(NormExponent::Infinity).unwrap().value <= vals[vals.len() - 1] * (1.0 + 1e-12));
            }

            #[test]
            fn evaluation_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), re in -1.0f64..1.0, im in -1.0f64..1.0) {
                let p = random_homogeneous(3, 2, CoefficientDistribution::UniformDisc, s1).unwrap();
                let q = random_homogeneous(3, 2, CoefficientDistribution::ComplexGaussian, s2).unwrap();
                let z = [c(re, im), c(im, -re)];
                let lhs = p.add(&q).unwrap().evaluate(&z).unwrap();
                let rhs = p.evaluate(&z).unwrap() + q.evaluate(&z).unwrap();
                prop_assert!((lhs - rhs).norm() < 1e-12);
            }

            #[test]
            fn parseval_is_coefficient_sum(seed in any::<u64>()) {
                let p = random_homogeneous(3, 3, CoefficientDistribution::ComplexGaussian, seed).unwrap();
                let direct: f64 = p.terms().map(|(_, c)| c.norm_sqr()).sum();
                prop_assert!((p.l2_torus_norm().powi(2) - direct).abs() <= 1e-12 * direct);
            }

            #[test]
            fn majorant_nondecreasing(seed in any::<u64>(), r1 in 0.0f64..2.0, dr in 0.0f64..1.0) {
                let parts: Vec<_> = (1..4)
                    .map(|m| random_homogeneous(m, 2, CoefficientDistribution::ComplexGaussian, seed ^ m as u64).unwrap())
                    .collect();
                let g = GeneralPolynomial::from_parts(2, c(0.3, 0.1), parts).unwrap();
                prop_assert!(g.majorant_sum(r1).unwrap() <= g.majorant_sum(r1 + dr).unwrap());
            }
        }
    }
}
