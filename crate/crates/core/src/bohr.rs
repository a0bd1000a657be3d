//! Bohr radii `K_n`: a certified lower bound from Sidon constant bounds,
//! the Boas-Khavinson upper bound, and a bracket for `K_1` from the Möbius
//! family.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numeric::ExactSum;
use crate::poly::{GeneralPolynomial, HomogeneousPolynomial};
use crate::sidon::{ln_sidon_upper_hyper, ln_sidon_upper_trivial};

/// Relative precision of the bisection on `r`.
pub const BISECTION_REL_TOL: f64 = 1e-9;

/// The geometric tail bound is only used while its ratio stays at or below this.
pub const TAIL_RATIO_MAX: f64 = 0.9;

/// Initial truncation degree when none is given.
pub const DEFAULT_TRUNCATION: usize = 32;

/// `M` keeps doubling until the tail bound at the answer is below this.
pub const TAIL_NEGLIGIBLE: f64 = 1e-12;

const MAX_TRUNCATION: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BohrRadiusReport {
    pub n: u64,
    pub lower: f64,
    pub upper: f64,
    /// `lower * sqrt(n / ln n)`
    pub b_lower: f64,
    pub m_used: usize,
    pub tail_bound: f64,
    /// `sum_{m=1}^{M} lower^m S(m, n) + tail_bound`; at most 1/2.
    pub certificate_sum: f64,
}

/// `ln S^(m, n)`: 0 for `m = 1`, else the smaller of the two Sidon bounds.
pub fn ln_sidon_hat(m: usize, n: f64) -> Result<f64> {
    if m == 1 {
        return Ok(0.0);
    }
    Ok(ln_sidon_upper_hyper(m, n)?.min(ln_sidon_upper_trivial(m, n)))
}

/// Truncated majorant sum with its geometric tail, for the pipeline radius `r`.
struct Pipeline {
    n: f64,
    m: usize,
    ln_s: Vec<f64>,
}

impl Pipeline {
    fn new(n: f64, m: usize) -> Result<Self> {
        let ln_s = (1..=m).map(|k| ln_sidon_hat(k, n)).collect::<Result<Vec<_>>>()?;
        Ok(Self { n, m, ln_s })
    }

    fn tail_ratio(&self, r: f64) -> f64 {
        r * (std::f64::consts::E * (1.0 + self.n / self.m as f64)).sqrt()
    }

    /// `r` at which the tail ratio reaches [`TAIL_RATIO_MAX`].
    fn r_max(&self) -> f64 {
        TAIL_RATIO_MAX / (std::f64::consts::E * (1.0 + self.n / self.m as f64)).sqrt()
    }

    fn tail(&self, r: f64) -> f64 {
        let q = self.tail_ratio(r);
        q.powi(self.m as i32 + 1) / (1.0 - q)
    }

    fn sum(&self, r: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        let ln_r = r.ln();
        let mut s: ExactSum = self.ln_s.iter().enumerate().map(|(k, &ls)| ((k + 1) as f64 * ln_r + ls).exp()).collect();
        s.add(self.tail(r));
        s.value()
    }
}

/// `min(1/3, 2 sqrt(ln n / n))`.
pub fn bohr_upper(n: u64) -> Result<f64> {
    if n < 2 {
        return invalid(format!("need n >= 2, got {n}"));
    }
    let nf = n as f64;
    Ok((1.0 / 3.0f64).min(2.0 * (nf.ln() / nf).sqrt()))
}

/// Largest `r` (to relative precision [`BISECTION_REL_TOL`]) with
/// `sum_{m=1}^{M} r^m S^(m, n) + tail <= 1/2`.
///
/// Any `P` with `||P||_inf <= 1` has `|||P_m|||_1 <= S(m, n)(1 - |a0|^2)`
/// by Wiener's lemma, so its majorant at radius `r` is at most
/// `|a0| + (1 - |a0|^2) c` with `c` the sum above, and `|a0| + (1 - |a0|^2)/2 <= 1`.
/// For `m > M` the tail uses `S(m, n) <= (e(1 + n/M))^{m/2}`; `M` doubles
/// while the tail-ratio constraint is what limits `r` or the tail is not
/// negligible.
pub fn bohr_lower(n: u64, truncation: Option<usize>) -> Result<BohrRadiusReport> {
    let upper = bohr_upper(n)?;
    let nf = n as f64;
    let mut m = truncation.unwrap_or(DEFAULT_TRUNCATION).max(1);
    loop {
        let pipe = Pipeline::new(nf, m)?;
        let hi0 = pipe.r_max();
        if pipe.sum(hi0) <= 0.5 && m < MAX_TRUNCATION {
            m *= 2;
            continue;
        }
        let (mut lo, mut hi) = (0.0f64, hi0);
        if pipe.sum(hi) <= 0.5 {
            lo = hi;
        }
        while hi - lo > BISECTION_REL_TOL * lo.max(f64::MIN_POSITIVE) {
            let mid = 0.5 * (lo + hi);
            if pipe.sum(mid) <= 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if pipe.tail(lo) > TAIL_NEGLIGIBLE && m < MAX_TRUNCATION {
            m *= 2;
            continue;
        }
        return Ok(BohrRadiusReport {
            n,
            lower: lo,
            upper,
            b_lower: lo * (nf / nf.ln()).sqrt(),
            m_used: m,
            tail_bound: pipe.tail(lo),
            certificate_sum: pipe.sum(lo),
        });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct K1Bracket {
    /// Largest grid radius (below the first violation) where no family member violates.
    pub lower: f64,
    /// Smallest grid radius where some member has majorant above 1.
    pub upper: Option<f64>,
    /// Member attaining the first violation.
    pub violating_a: Option<f64>,
    pub degree: usize,
    pub a_step: f64,
    pub r_step: f64,
}

/// `f_a(z) = (a - z) / (1 - a z)` truncated at `degree`.
pub fn truncated_mobius(a: f64, degree: usize) -> Result<GeneralPolynomial> {
    if !(0.0..1.0).contains(&a) {
        return invalid(format!("need 0 <= a < 1, got {a}"));
    }
    let parts = (1..=degree).map(|k| {
        let coef = -(1.0 - a * a) * a.powi(k as i32 - 1);
        HomogeneousPolynomial::from_exponents(
            k,
            1,
            [(crate::index::ExponentVector::new(vec![k as u32]), num_complex::Complex64::new(coef, 0.0))],
        )
    });
    GeneralPolynomial::from_parts(1, num_complex::Complex64::new(a, 0.0), parts.collect::<Result<Vec<_>>>()?)
}

/// Brackets `K_1` by scanning radii `0, r_step, 2 r_step, ...` against the
/// family `f_a`, `a in {0, a_step, ...} < 1`.
pub fn bohr_estimate_small(n: usize, degree: usize, a_step: f64, r_step: f64) -> Result<K1Bracket> {
    if n != 1 {
        return invalid(format!("the Möbius bracket is for n = 1, got {n}"));
    }
    if !(a_step > 0.0 && a_step < 1.0 && r_step > 0.0 && r_step <= 1.0) || degree == 0 {
        return invalid("need 0 < a_step < 1, 0 < r_step <= 1, degree >= 1");
    }
    let family = (0..)
        .map(|j| j as f64 * a_step)
        .take_while(|&a| a < 1.0)
        .map(|a| truncated_mobius(a, degree).map(|f| (a, f)))
        .collect::<Result<Vec<_>>>()?;
    let steps = (1.0 / r_step).round() as usize;
    let mut lower = 0.0;
    for k in 0..=steps {
        let r = k as f64 * r_step;
        for (a, f) in &family {
            if f.majorant_sum(r)? > 1.0 {
                return Ok(K1Bracket { lower, upper: Some(r), violating_a: Some(*a), degree, a_step, r_step });
            }
        }
        lower = r;
    }
    Ok(K1Bracket { lower, upper: None, violating_a: None, degree, a_step, r_step })
}
