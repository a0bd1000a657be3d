//! Sidon constants `S(m, n)`: the best `C` with `|||P|||_1 <= C ||P||_inf`
//! over m-homogeneous `P` on `C^n`. Closed-form upper bounds, lower bounds by
//! search, and F. Wiener's lemma on homogeneous parts.

use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bh::ln_bh_constant_hyper;
use crate::error::{invalid, Error, Result};
use crate::index::{dimension_count, CanonicalIndex, ExponentVector};
use crate::numeric::ln_dimension_count;
use crate::polarization::REL_TOL;
use crate::poly::{random_homogeneous, CoefficientDistribution, GeneralPolynomial, HomogeneousPolynomial};
use crate::seed;
use crate::supnorm::{certified_step, sup_certified, sup_lower, AscentOptions, GridOptions, SupNormEstimate};

const CANDIDATE_STREAM: u64 = 0x51D0;
const LOCAL_STREAM: u64 = 0x10CA;

fn need_mn(m: usize, n: usize) -> Result<()> {
    if m < 2 || n < 2 {
        return invalid(format!("need m, n >= 2, got m = {m}, n = {n}"));
    }
    Ok(())
}

/// `ln` of the hypercontractive bound, for real `n` of any size.
pub fn ln_sidon_upper_hyper(m: usize, n: f64) -> Result<f64> {
    Ok(ln_bh_constant_hyper(m)? + (m - 1) as f64 / (2 * m) as f64 * ln_dimension_count(m as u64, n))
}

/// `ln sqrt C(n + m - 1, m)`.
pub fn ln_sidon_upper_trivial(m: usize, n: f64) -> f64 {
    0.5 * ln_dimension_count(m as u64, n)
}

/// `C_hyper(m) C(n + m - 1, m)^{(m-1)/2m}`.
pub fn sidon_upper_hyper(m: usize, n: usize) -> Result<f64> {
    need_mn(m, n)?;
    let v = ln_sidon_upper_hyper(m, n as f64)?.exp();
    if !v.is_finite() {
        return Err(Error::Overflow(format!("sidon_upper_hyper({m}, {n}) overflows f64")));
    }
    Ok(v)
}

/// `sqrt C(n + m - 1, m)`, from the exact binomial.
pub fn sidon_upper_trivial(m: usize, n: usize) -> Result<f64> {
    if m == 0 || n == 0 {
        return invalid(format!("need m, n >= 1, got m = {m}, n = {n}"));
    }
    Ok((dimension_count(m, n)? as f64).sqrt())
}

/// Smallest `n` in `2..=n_max` with `sidon_upper_hyper(m, n) < sidon_upper_trivial(m, n)`.
///
/// The ratio of the two bounds is `C_hyper(m) C(n+m-1, m)^{-1/2m}`, which
/// decreases in `n`, so the crossover is found by bisection.
pub fn sidon_crossover(m: usize, n_max: u64) -> Result<Option<u64>> {
    need_mn(m, 2)?;
    let threshold = 2.0 * m as f64 * ln_bh_constant_hyper(m)?;
    let wins = |n: u64| ln_dimension_count(m as u64, n as f64) > threshold;
    if n_max < 2 || !wins(n_max) {
        return Ok(None);
    }
    let (mut lo, mut hi) = (1u64, n_max);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if wins(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi.max(2)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStrategy {
    RandomSign,
    Gaussian,
    CoordinateAscent,
}

impl SearchStrategy {
    pub const ALL: [Self; 3] = [Self::RandomSign, Self::Gaussian, Self::CoordinateAscent];

    pub fn tag(self) -> &'static str {
        match self {
            Self::RandomSign => "random-sign",
            Self::Gaussian => "gaussian",
            Self::CoordinateAscent => "coordinate-ascent",
        }
    }
}

impl FromStr for SearchStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.tag() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown strategy {s:?}")))
    }
}

/// Whether a Sidon lower bound divides by an ascent estimate of the sup
/// norm (heuristic: it may overestimate) or by a certified upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundLabel {
    Heuristic,
    Certified,
}

impl BoundLabel {
    pub fn tag(self) -> &'static str {
        match self {
            Self::Heuristic => "heuristic",
            Self::Certified => "certified",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidonSearchOptions {
    /// Number of candidates (including the monomial baseline) or local moves.
    pub budget: usize,
    pub seed: u64,
    pub strategy: SearchStrategy,
    pub label: BoundLabel,
    /// Sup estimation for each candidate.
    pub search: AscentOptions,
    /// Heavier sup estimation for the final witness.
    pub polish: AscentOptions,
    /// Grid cap for the certified label.
    pub grid_cap: u64,
}

impl SidonSearchOptions {
    pub fn new(n: usize, budget: usize, seed: u64, strategy: SearchStrategy) -> Self {
        Self {
            budget,
            seed,
            strategy,
            label: BoundLabel::Heuristic,
            search: AscentOptions { starts: (2 * n).max(4), iterations: 100, seed },
            polish: AscentOptions { starts: 16 * n, iterations: 400, seed: seed::derive(seed, &[0x9011]) },
            grid_cap: 2_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SidonBounds {
    pub m: usize,
    pub n: usize,
    pub upper_hyper: f64,
    pub upper_trivial: f64,
    pub upper_best: f64,
    pub lower_search: f64,
    pub label: BoundLabel,
    pub witness: HomogeneousPolynomial,
    /// The sup estimate `lower_search` divides by.
    pub witness_sup: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidonRow {
    pub m: usize,
    pub n: usize,
    pub upper_hyper: f64,
    pub upper_trivial: f64,
    pub upper_best: f64,
    pub lower_search: f64,
    pub label: BoundLabel,
    pub witness_l1: f64,
    pub witness_sup: f64,
}

impl SidonBounds {
    pub fn row(&self) -> SidonRow {
        SidonRow {
            m: self.m,
            n: self.n,
            upper_hyper: self.upper_hyper,
            upper_trivial: self.upper_trivial,
            upper_best: self.upper_best,
            lower_search: self.lower_search,
            label: self.label,
            witness_l1: self.witness.l1_coeff_norm(),
            witness_sup: self.witness_sup,
        }
    }
}

fn monomial(m: usize, n: usize) -> Result<HomogeneousPolynomial> {
    let mut alpha = vec![0u32; n];
    alpha[0] = m as u32;
    HomogeneousPolynomial::from_exponents(m, n, [(ExponentVector::new(alpha), Complex64::new(1.0, 0.0))])
}

fn ratio(p: &HomogeneousPolynomial, opts: &AscentOptions) -> Result<f64> {
    let sup = sup_lower(p, opts)?.lower;
    Ok(if sup > 0.0 { p.l1_coeff_norm() / sup } else { 0.0 })
}

fn best_index(scores: &[f64]) -> usize {
    let mut best = 0;
    for (k, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = k;
        }
    }
    best
}

fn random_candidates(
    m: usize,
    n: usize,
    count: usize,
    dist: CoefficientDistribution,
    opts: &SidonSearchOptions,
) -> Result<(HomogeneousPolynomial, f64)> {
    let scored: Vec<Result<(HomogeneousPolynomial, f64)>> = (0..count)
        .into_par_iter()
        .map(|c| {
            let p = if c == 0 {
                monomial(m, n)?
            } else {
                random_homogeneous(m, n, dist, seed::derive(opts.seed, &[CANDIDATE_STREAM, c as u64]))?
            };
            let r = ratio(&p, &opts.search)?;
            Ok((p, r))
        })
        .collect();
    let scored = scored.into_iter().collect::<Result<Vec<_>>>()?;
    let k = best_index(&scored.iter().map(|s| s.1).collect::<Vec<_>>());
    Ok(scored.into_iter().nth(k).expect("nonempty"))
}

/// Random phase and magnitude moves on single coefficients, kept when the
/// ratio improves.
fn local_moves(start: (HomogeneousPolynomial, f64), moves: usize, opts: &SidonSearchOptions) -> Result<(HomogeneousPolynomial, f64)> {
    let (mut best, mut best_ratio) = start;
    let (m, n) = (best.degree(), best.dimension());
    for k in 0..moves {
        let mut rng = seed::rng(opts.seed, &[LOCAL_STREAM, k as u64]);
        let terms: Vec<(CanonicalIndex, Complex64)> = best.terms().map(|(i, c)| (i.clone(), *c)).collect();
        if terms.is_empty() {
            break;
        }
        let t = rng.random_range(0..terms.len());
        let phase = rng.random_range(-std::f64::consts::FRAC_PI_2..std::f64::consts::FRAC_PI_2);
        let scale = rng.random_range(0.5..1.5);
        let cand = HomogeneousPolynomial::from_terms(
            m,
            n,
            terms.into_iter().enumerate().map(|(j, (i, c))| {
                let c = if j == t { c * Complex64::from_polar(scale, phase) } else { c };
                (i.as_multi().clone(), c)
            }),
        )?;
        let r = ratio(&cand, &opts.search)?;
        if r > best_ratio {
            best = cand;
            best_ratio = r;
        }
    }
    Ok((best, best_ratio))
}

/// Lower bound on `S(m, n)` by search, with both upper bounds.
///
/// A heuristic bound divides by the best ascent estimate of the witness's
/// sup norm; a certified bound divides by a grid upper bound instead.
pub fn sidon_lower_search(m: usize, n: usize, opts: &SidonSearchOptions) -> Result<SidonBounds> {
    need_mn(m, n)?;
    if opts.budget == 0 {
        return invalid("search budget must be >= 1");
    }
    let upper_hyper = sidon_upper_hyper(m, n)?;
    let upper_trivial = sidon_upper_trivial(m, n)?;
    let found = match opts.strategy {
        SearchStrategy::RandomSign => random_candidates(m, n, opts.budget, CoefficientDistribution::RandomSigns, opts)?,
        SearchStrategy::Gaussian => random_candidates(m, n, opts.budget, CoefficientDistribution::ComplexGaussian, opts)?,
        SearchStrategy::CoordinateAscent => {
            let seeds = opts.budget.div_ceil(2);
            let start = random_candidates(m, n, seeds, CoefficientDistribution::RandomSigns, opts)?;
            local_moves(start, opts.budget - seeds, opts)?
        }
    };
    let witness = found.0;
    let l1 = witness.l1_coeff_norm();
    let (lower_search, witness_sup, witness) = match opts.label {
        BoundLabel::Heuristic => {
            // two valid lower bounds on the sup norm: keep the larger
            let sup = sup_lower(&witness, &opts.search)?.lower.max(sup_lower(&witness, &opts.polish)?.lower);
            (l1 / sup, sup, witness)
        }
        BoundLabel::Certified => {
            let h = certified_step(&witness, opts.grid_cap, 0.01)?;
            let upper = sup_certified(&witness, &GridOptions { grid_step: h, max_points: opts.grid_cap })?
                .upper
                .expect("grid bounds carry an upper bound");
            (l1 / upper, upper, witness)
        }
    };
    let (lower_search, witness_sup, witness) =
        if lower_search >= 1.0 { (lower_search, witness_sup, witness) } else { (1.0, 1.0, monomial(m, n)?) };
    Ok(SidonBounds {
        m,
        n,
        upper_hyper,
        upper_trivial,
        upper_best: upper_hyper.min(upper_trivial),
        lower_search,
        label: opts.label,
        witness,
        witness_sup,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum WienerMode {
    /// Grid upper bounds for each part, aiming at the given Bernstein slack.
    Certified { max_points: u64, slack: f64 },
    /// Ascent lower bounds only; a consistency check, not a certificate.
    Ascent(AscentOptions),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WienerPart {
    pub m: usize,
    pub sup: SupNormEstimate,
    /// The bound compared against `1 - |a0|^2`.
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WienerReport {
    pub a0_abs: f64,
    /// `1 - |a0|^2`
    pub bound: f64,
    pub supnorm_upper: f64,
    pub parts: Vec<WienerPart>,
    pub pass: bool,
}

/// F. Wiener: if `||P||_inf <= 1` then `||P_m||_inf <= 1 - |a0|^2` for every `m > 0`.
pub fn check_wiener(p: &GeneralPolynomial, supnorm_upper: f64, mode: &WienerMode) -> Result<WienerReport> {
    if supnorm_upper.is_nan() || supnorm_upper > 1.0 + 1e-12 {
        return invalid(format!("needs a certified ||P||_inf <= 1, got {supnorm_upper}"));
    }
    let a0_abs = p.a0().norm();
    let bound = 1.0 - a0_abs * a0_abs;
    let parts = p
        .parts()
        .map(|part| {
            let sup = match mode {
                WienerMode::Certified { max_points, slack } => {
                    let h = certified_step(part, *max_points, *slack)?;
                    sup_certified(part, &GridOptions { grid_step: h, max_points: *max_points })?
                }
                WienerMode::Ascent(o) => sup_lower(part, o)?,
            };
            let value = sup.upper.unwrap_or(sup.lower);
            let pass = value <= bound * (1.0 + REL_TOL) + 1e-12;
            Ok(WienerPart { m: part.degree(), sup, value, pass })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = parts.iter().all(|x| x.pass);
    Ok(WienerReport { a0_abs, bound, supnorm_upper, parts, pass })
}
