//! Bohnenblust-Hille type inequalities: constants, verification of the
//! polynomial and multilinear forms, and the lemmas used in the proof of the
//! hypercontractive bound.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::index::MultiIndex;
use crate::multilinear::MultilinearForm;
use crate::numeric::{ln_factorial, lp_norm, ExactSum, NormExponent};
use crate::polarization::{polarize, REL_TOL};
use crate::poly::{l1_torus_norm_mc, HomogeneousPolynomial, McEstimate};
use crate::supnorm::{sup_certified, sup_lower, sup_multilinear, AscentOptions, GridOptions, SupNormEstimate};

/// Relative tolerance for Blei's lemma, whose two sides are both exact sums.
pub const BLEI_TOL: f64 = 1e-12;

/// Minimum Monte Carlo budget for [`check_bayart`].
pub const MIN_BAYART_SAMPLES: usize = 1000;

/// `2m / (m + 1)` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BhExponent {
    pub num: u64,
    pub den: u64,
}

impl BhExponent {
    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn norm(self) -> NormExponent {
        NormExponent::Finite(self.value())
    }
}

impl std::fmt::Display for BhExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn bh_exponent(m: usize) -> Result<BhExponent> {
    if m == 0 {
        return invalid("degree must be >= 1");
    }
    let (num, den) = (2 * m as u64, m as u64 + 1);
    let g = gcd(num, den);
    Ok(BhExponent { num: num / g, den: den / g })
}

fn finite(ln: f64, what: &str, m: usize) -> Result<f64> {
    let v = ln.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{what}({m}) overflows f64")))
    }
}

fn need_m2(m: usize) -> Result<()> {
    if m < 2 {
        return invalid(format!("constant defined for m >= 2, got {m}"));
    }
    Ok(())
}

/// `(1 + 1/(m-1))^{m-1} sqrt(m) (sqrt 2)^{m-1}`.
pub fn bh_constant_hyper(m: usize) -> Result<f64> {
    finite(ln_bh_constant_hyper(m)?, "bh_constant_hyper", m)
}

/// Natural log of [`bh_constant_hyper`], finite for every `m >= 2`.
pub fn ln_bh_constant_hyper(m: usize) -> Result<f64> {
    need_m2(m)?;
    let k = (m - 1) as f64;
    Ok(k * (1.0 / k).ln_1p() + 0.5 * (m as f64).ln() + 0.5 * k * 2f64.ln())
}

/// The constant of the reduction step, `(1 + 1/(m-1))^{m-1} (sqrt 2)^{m-1}`.
pub fn proof_step_constant(m: usize) -> Result<f64> {
    Ok(bh_constant_hyper(m)? / (m as f64).sqrt())
}

/// `ln [ m^{m/2} (m+1)^{(m+1)/2} / (2^m (m!)^{(m+1)/2m}) ]`
fn ln_harris_tail(m: usize) -> f64 {
    let mf = m as f64;
    0.5 * mf * mf.ln() + 0.5 * (mf + 1.0) * (mf + 1.0).ln()
        - mf * 2f64.ln()
        - (mf + 1.0) / (2.0 * mf) * ln_factorial(m as u64)
}

/// `(sqrt 2)^{m-1} m^{m/2} (m+1)^{(m+1)/2} / (2^m (m!)^{(m+1)/2m})`.
pub fn bh_constant_polarization(m: usize) -> Result<f64> {
    need_m2(m)?;
    finite((m - 1) as f64 * SQRT_2.ln() + ln_harris_tail(m), "bh_constant_polarization", m)
}

/// As [`bh_constant_polarization`] with `2/sqrt(pi)` in place of `sqrt 2`.
pub fn bh_constant_queffelec(m: usize) -> Result<f64> {
    need_m2(m)?;
    let base = (2.0 / PI.sqrt()).ln();
    finite((m - 1) as f64 * base + ln_harris_tail(m), "bh_constant_queffelec", m)
}

/// `(sqrt 2)^{m-1}`, the multilinear constant.
pub fn davie_kaijser_constant(m: usize) -> Result<f64> {
    if m == 0 {
        return invalid("degree must be >= 1");
    }
    finite((m - 1) as f64 * SQRT_2.ln(), "davie_kaijser_constant", m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRow {
    pub m: usize,
    pub exponent: String,
    pub hyper: f64,
    pub polarization: f64,
    pub queffelec: f64,
    pub davie_kaijser: f64,
}

/// Rows for `2 <= m <= m_max`.
pub fn constants_table(m_max: usize) -> Result<Vec<ConstantsRow>> {
    (2..=m_max)
        .map(|m| {
            Ok(ConstantsRow {
                m,
                exponent: bh_exponent(m)?.to_string(),
                hyper: bh_constant_hyper(m)?,
                polarization: bh_constant_polarization(m)?,
                queffelec: bh_constant_queffelec(m)?,
                davie_kaijser: davie_kaijser_constant(m)?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    ViolatedNumerically,
    Inconclusive,
}

impl Verdict {
    pub fn tag(self) -> &'static str {
        match self {
            Self::Verified => "verified",
            Self::ViolatedNumerically => "violated-numerically",
            Self::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs_constant: f64,
    pub supnorm_used: SupNormEstimate,
    /// `lhs / supnorm_used.lower`
    pub ratio: f64,
    pub slack: f64,
    pub verdict: Verdict,
}

impl InequalityReport {
    /// Since `lower <= ||P||_inf`, `ratio <= C` proves the inequality for
    /// this `P`. A violation is only claimed against a certified upper bound.
    pub fn judge(lhs: f64, rhs_constant: f64, sup: SupNormEstimate) -> Self {
        let ratio = if lhs == 0.0 { 0.0 } else { lhs / sup.lower };
        let verdict = if ratio <= rhs_constant * (1.0 + REL_TOL) {
            Verdict::Verified
        } else if sup.upper.is_some_and(|u| lhs > rhs_constant * u * (1.0 + REL_TOL)) {
            Verdict::ViolatedNumerically
        } else {
            Verdict::Inconclusive
        };
        Self { lhs, rhs_constant, supnorm_used: sup, ratio, slack: rhs_constant - ratio, verdict }
    }
}

/// How `||P||_inf` is estimated for a check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SupMode {
    Ascent(AscentOptions),
    Certified(GridOptions),
}

impl SupMode {
    pub fn estimate(&self, p: &HomogeneousPolynomial) -> Result<SupNormEstimate> {
        match self {
            Self::Ascent(o) => sup_lower(p, o),
            Self::Certified(g) => sup_certified(p, g),
        }
    }
}

/// `|||P|||_{2m/(m+1)} <= C_hyper(m) ||P||_inf`.
pub fn verify_bh(p: &HomogeneousPolynomial, mode: &SupMode) -> Result<InequalityReport> {
    let m = p.degree();
    let constant = bh_constant_hyper(m)?;
    let lhs = p.coeff_norm(bh_exponent(m)?.norm())?.value;
    let sup = mode.estimate(p)?;
    Ok(InequalityReport::judge(lhs, constant, sup))
}

/// The multilinear inequality with constant `(sqrt 2)^{m-1}`; the left side
/// runs over every index in `M(m, n)`.
pub fn verify_bh_multilinear(b: &MultilinearForm, opts: &AscentOptions) -> Result<InequalityReport> {
    let m = b.degree();
    need_m2(m)?;
    let moduli: Vec<f64> = b.entries().iter().map(|c| c.norm()).collect();
    let lhs = lp_norm(&moduli, bh_exponent(m)?.norm());
    let sup = sup_multilinear(b, opts)?;
    Ok(InequalityReport::judge(lhs, davie_kaijser_constant(m)?, sup))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BleiReport {
    pub m: usize,
    pub n: usize,
    pub lhs: f64,
    /// `sum_{i_k} (sum_{i^k} |c_i|^2)^{1/2}` for each slot `k`.
    pub slot_factors: Vec<f64>,
    pub rhs: f64,
    pub pass: bool,
}

/// Slot factors `sum_d (sum_{i: i_k = d} |c_i|^2)^{1/2}`.
fn blei_slot_factors(c: &MultilinearForm) -> Vec<f64> {
    let (m, n) = (c.degree(), c.dimension());
    let mut groups = vec![vec![Vec::new(); n]; m];
    c.for_each(|i, v| {
        let s = v.norm();
        for (k, &d) in i.iter().enumerate() {
            groups[k][d - 1].push(s);
        }
    });
    groups
        .iter()
        .map(|row| row.iter().map(|g| lp_norm(g, NormExponent::Finite(2.0))).collect::<ExactSum>().value())
        .collect()
}

/// Blei's inequality for a full table over `M(m, n)`.
pub fn check_blei(c: &MultilinearForm) -> Result<BleiReport> {
    let (m, n) = (c.degree(), c.dimension());
    need_m2(m)?;
    let moduli: Vec<f64> = c.entries().iter().map(|v| v.norm()).collect();
    let lhs = lp_norm(&moduli, bh_exponent(m)?.norm());
    let slot_factors = blei_slot_factors(c);
    let rhs = if slot_factors.iter().all(|&f| f == slot_factors[0]) {
        slot_factors[0]
    } else {
        slot_factors.iter().map(|f| f.powf(1.0 / m as f64)).product()
    };
    Ok(BleiReport { m, n, lhs, slot_factors, rhs, pass: lhs <= rhs * (1.0 + BLEI_TOL) })
}

/// The table `c_[i] / sqrt(|i|)` over `M(m, n)`. Its `l^{2m/(m+1)}` norm
/// dominates `|||P|||_{2m/(m+1)}`, which is how Blei's lemma enters the proof.
pub fn weighted_class_table(p: &HomogeneousPolynomial) -> Result<MultilinearForm> {
    let mut err = None;
    let table = MultilinearForm::from_fn(p.degree(), p.dimension(), |i| {
        let idx = MultiIndex::new(i.to_vec(), p.dimension()).expect("index within shape");
        match idx.multiplicity() {
            Ok(mult) => p.coeff(&idx) / (mult as f64).sqrt(),
            Err(e) => {
                err.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(table),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatisticalVerdict {
    Pass,
    /// The inequality failed against the upper 3-sigma band. Expected in a
    /// small fraction of runs; not a counterexample.
    StatisticalFlag,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayartReport {
    pub m: usize,
    pub l2: f64,
    pub factor: f64,
    pub l1: McEstimate,
    /// `factor * (l1.mean + 3 l1.std_error)`
    pub rhs_band: f64,
    pub verdict: StatisticalVerdict,
}

/// `|||P|||_2 <= (sqrt 2)^m ||P||_{L^1}` with the `L^1` norm estimated by
/// Monte Carlo and compared at the upper 3-sigma band.
pub fn check_bayart(p: &HomogeneousPolynomial, samples: usize, seed: u64) -> Result<BayartReport> {
    if samples < MIN_BAYART_SAMPLES {
        return invalid(format!("need at least {MIN_BAYART_SAMPLES} samples, got {samples}"));
    }
    let m = p.degree();
    let l2 = p.coeff_norm(NormExponent::Finite(2.0))?.value;
    let factor = SQRT_2.powi(m as i32);
    let l1 = l1_torus_norm_mc(p, samples, seed)?;
    let rhs_band = factor * (l1.mean + 3.0 * l1.std_error);
    let verdict = if l2 <= rhs_band * (1.0 + REL_TOL) {
        StatisticalVerdict::Pass
    } else {
        StatisticalVerdict::StatisticalFlag
    };
    Ok(BayartReport { m, l2, factor, l1, rhs_band, verdict })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofStepReport {
    pub k: usize,
    /// `sum_{i^k} |i^k| |c_[i]|^2 / |i|^2` for each value `d` of `i_k`.
    pub inner_sums: Vec<f64>,
    pub lhs: f64,
    pub constant: f64,
    pub supnorm_upper: f64,
    pub rhs: f64,
    /// Largest relative gap between an inner sum and `||P_k||_2^2`.
    pub parseval_rel_err: f64,
    pub pass: bool,
}

/// Tolerance for the identity `inner sum = ||P_k||_2^2`.
pub const PARSEVAL_TOL: f64 = 1e-12;

fn m_tuples(m: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (n as u64).pow(m as u32);
    (0..total).map(move |mut flat| {
        let mut i = vec![0usize; m];
        for e in i.iter_mut().rev() {
            *e = (flat % n as u64) as usize + 1;
            flat /= n as u64;
        }
        i
    })
}

/// `sum_{i_k} (sum_{i^k} |i^k| |c_[i]|^2 / |i|^2)^{1/2} <= (1 + 1/(m-1))^{m-1} (sqrt 2)^{m-1} ||P||_inf`
/// for the 1-based slot `k`, evaluated against a certified upper bound on
/// `||P||_inf`.
pub fn check_proof_step(p: &HomogeneousPolynomial, k: usize, supnorm_upper: f64) -> Result<ProofStepReport> {
    let (m, n) = (p.degree(), p.dimension());
    need_m2(m)?;
    if k == 0 || k > m {
        return invalid(format!("slot {k} outside 1..={m}"));
    }
    let form = polarize(p);
    let mut inner_sums = Vec::with_capacity(n);
    let mut parseval_rel_err = 0.0f64;
    for d in 1..=n {
        let mut s = ExactSum::default();
        for rest in m_tuples(m - 1, n) {
            let rest = MultiIndex::new(rest, n)?;
            let full = rest.insert_coordinate(k, d)?;
            let c = p.coeff(&full);
            if c != Complex64::new(0.0, 0.0) {
                let (wr, wf) = (rest.multiplicity()? as f64, full.multiplicity()? as f64);
                s.add(wr * c.norm_sqr() / (wf * wf));
            }
        }
        let inner = s.value();
        let l2 = form.partial_substitution(k, d)?.l2_torus_norm();
        let scale = inner.max(l2 * l2);
        if scale > 0.0 {
            parseval_rel_err = parseval_rel_err.max((inner - l2 * l2).abs() / scale);
        }
        inner_sums.push(inner);
    }
    let lhs = inner_sums.iter().map(|s| s.sqrt()).collect::<ExactSum>().value();
    let constant = proof_step_constant(m)?;
    let rhs = constant * supnorm_upper;
    Ok(ProofStepReport {
        k,
        inner_sums,
        lhs,
        constant,
        supnorm_upper,
        rhs,
        parseval_rel_err,
        pass: lhs <= rhs * (1.0 + REL_TOL) && parseval_rel_err <= PARSEVAL_TOL,
    })
}
