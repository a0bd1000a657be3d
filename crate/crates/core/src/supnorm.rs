//! Estimation of `||P||_inf = sup_{z in D^n} |P(z)|`.
//!
//! By the maximum principle in each variable the supremum over the closed
//! polydisc is attained on the torus, so every search here runs over phase
//! vectors `theta` with `z = e^{i theta}`.
//!
//! * [`sup_lower`]: multistart gradient ascent of `|P|^2`; a lower bound.
//! * [`sup_certified`]: uniform phase grid plus a Bernstein correction; a
//!   lower and an upper bound. The upper bound is rigorous up to floating
//!   point rounding (no interval arithmetic).
//! * [`sup_multilinear`]: block coordinate ascent for m-linear forms over
//!   products of polydiscs; a lower bound.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::multilinear::MultilinearForm;
use crate::poly::{PhaseScratch, TermTable, TorusPolynomial};
use crate::seed;

/// Label carried by grid upper bounds.
pub const CERTIFICATION_LABEL: &str = "certified-modulo-floating-point";

/// Default cap on the number of grid evaluations.
pub const DEFAULT_GRID_CAP: u64 = 100_000_000;

const ASCENT_STREAM: u64 = 0xA5C3;
const MULTILINEAR_STREAM: u64 = 0x3B1E;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SupMethod {
    Ascent {
        starts: usize,
        iterations: usize,
        seed: u64,
    },
    Grid {
        grid_step: f64,
        points_per_axis: usize,
        grid_points: u64,
        /// Number of phases actually searched (one fewer for homogeneous
        /// polynomials, whose modulus is invariant under a common rotation).
        free_axes: usize,
        /// `upper = lower / (1 - bernstein_slack)` before capping by `|||P|||_1`.
        bernstein_slack: f64,
        certification: String,
    },
    MultilinearAscent {
        starts: usize,
        iterations: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupNormEstimate {
    pub lower: f64,
    pub upper: Option<f64>,
    /// Phase vector in `[0, 2 pi)^n` (concatenated over the slots for
    /// multilinear forms) at which `lower` is attained.
    pub argmax: Vec<f64>,
    pub method: SupMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AscentOptions {
    pub starts: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl AscentOptions {
    pub const DEFAULT_ITERATIONS: usize = 200;

    /// `8 n` starts and 200 iterations.
    pub fn for_dimension(n: usize, seed: u64) -> Self {
        Self { starts: (8 * n).max(1), iterations: Self::DEFAULT_ITERATIONS, seed }
    }
}

fn wrap_phase(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

fn initial_phases(n: usize, opts: &AscentOptions, start: usize, stream: u64) -> Vec<f64> {
    if start == 0 {
        return vec![0.0; n];
    }
    let mut rng = seed::rng(opts.seed, &[stream, start as u64]);
    (0..n).map(|_| rng.random::<f64>() * TAU).collect()
}

/// Gradient ascent on `|P(e^{i theta})|^2` from one start; returns the
/// final value of `|P|^2` and the phases.
fn ascend(table: &TermTable, mut theta: Vec<f64>, iterations: usize, step0: f64) -> (f64, Vec<f64>) {
    let n = table.n;
    let mut scratch = PhaseScratch::new(n);
    let mut grad = vec![0.0; n];
    let mut trial_grad = vec![0.0; n];
    let (_, mut f) = table.eval_phase_grad(&theta, &mut scratch, &mut grad);
    let mut step = step0;
    let mut trial = vec![0.0; n];
    for _ in 0..iterations {
        let mut accepted = false;
        for _ in 0..40 {
            for k in 0..n {
                trial[k] = theta[k] + step * grad[k];
            }
            let (_, ft) = table.eval_phase_grad(&trial, &mut scratch, &mut trial_grad);
            if ft > f {
                std::mem::swap(&mut theta, &mut trial);
                std::mem::swap(&mut grad, &mut trial_grad);
                f = ft;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        step *= 2.0;
    }
    (f, theta)
}

/// Best value over a list of `(value, phases)` candidates; ties go to the
/// earliest candidate.
fn best_of(results: Vec<(f64, Vec<f64>)>) -> (f64, Vec<f64>) {
    results
        .into_iter()
        .reduce(|best, cand| if cand.0 > best.0 { cand } else { best })
        .expect("at least one start")
}

/// Lower bound on `||P||_inf` by multistart phase ascent.
///
/// Start 0 is `theta = 0`; the others are uniform phases drawn from the
/// stream `(seed, start)`. Starts run in parallel and the result does not
/// depend on the thread count.
pub fn sup_lower<P: TorusPolynomial + ?Sized>(p: &P, opts: &AscentOptions) -> Result<SupNormEstimate> {
    if opts.starts == 0 {
        return invalid("sup_lower needs at least one start");
    }
    let table = p.term_table();
    let method = SupMethod::Ascent { starts: opts.starts, iterations: opts.iterations, seed: opts.seed };
    if table.is_zero() {
        return Ok(SupNormEstimate { lower: 0.0, upper: None, argmax: vec![0.0; table.n], method });
    }
    let l1 = table.l1_coeff_norm();
    let deg = table.variable_degrees.iter().sum::<usize>().max(1) as f64;
    let step0 = 1.0 / (deg * deg * l1 * l1);
    let results: Vec<(f64, Vec<f64>)> = (0..opts.starts)
        .into_par_iter()
        .map(|s| ascend(&table, initial_phases(table.n, opts, s, ASCENT_STREAM), opts.iterations, step0))
        .collect();
    let (_, theta) = best_of(results);
    let argmax: Vec<f64> = theta.into_iter().map(wrap_phase).collect();
    let lower = table.eval_phase(&argmax, &mut PhaseScratch::new(table.n)).norm();
    Ok(SupNormEstimate { lower, upper: None, argmax, method })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    pub grid_step: f64,
    pub max_points: u64,
}

impl GridOptions {
    pub fn new(grid_step: f64) -> Self {
        Self { grid_step, max_points: DEFAULT_GRID_CAP }
    }
}

/// Which phases the grid runs over.
struct GridPlan {
    /// Free variables (0-based), outermost first; the last is the inner axis.
    free: Vec<usize>,
    /// Bernstein sum of per-variable degrees over the free variables.
    degree_sum: usize,
}

fn plan_grid(table: &TermTable) -> GridPlan {
    let n = table.n;
    let mut free: Vec<usize> = (0..n).collect();
    if table.homogeneous_degree.is_some() && n > 0 {
        // |P| is invariant under theta -> theta + t(1,...,1): pin the
        // variable of highest degree to phase 0
        let pinned = (0..n).max_by_key(|&k| (table.variable_degrees[k], std::cmp::Reverse(k))).unwrap();
        free.retain(|&k| k != pinned);
    }
    free.retain(|&k| table.variable_degrees[k] > 0);
    let degree_sum = free.iter().map(|&k| table.variable_degrees[k]).sum();
    GridPlan { free, degree_sum }
}

/// Grid step for [`sup_certified`] aiming at a Bernstein slack of `target_slack`
/// within `max_points` evaluations. Fails when even the coarsest admissible
/// grid exceeds the budget.
pub fn certified_step<P: TorusPolynomial + ?Sized>(p: &P, max_points: u64, target_slack: f64) -> Result<f64> {
    let table = p.term_table();
    let plan = plan_grid(&table);
    let bound = precondition_bound(&table);
    if plan.free.is_empty() || plan.degree_sum == 0 {
        return Ok(0.5 * bound.min(1.0));
    }
    let wanted = 2.0 * target_slack / plan.degree_sum as f64;
    let k_budget = (max_points as f64).powf(1.0 / plan.free.len() as f64).floor();
    let h = wanted.max(TAU / k_budget);
    if h >= bound {
        return Err(Error::BudgetExceeded(format!(
            "no admissible grid step within {max_points} points (need h < {bound})"
        )));
    }
    Ok(h)
}

/// `2 / (n m_max)`; grid steps must be strictly smaller.
fn precondition_bound(table: &TermTable) -> f64 {
    let m_max = table.variable_degrees.iter().copied().max().unwrap_or(0);
    if m_max == 0 || table.n == 0 {
        f64::INFINITY
    } else {
        2.0 / (table.n * m_max) as f64
    }
}

/// Lower and certified upper bound on `||P||_inf` from a phase grid.
///
/// The grid has `K = ceil(2 pi / h)` points per axis (actual step
/// `2 pi / K <= h`). Every point of the torus is within half a step of a
/// grid point in each free phase, and by Bernstein's inequality
/// `|d|P|/d theta_k| <= d_k ||P||_inf`, so
/// `||P||_inf <= max_grid / (1 - sum_k d_k h / 2)`. The reported upper
/// bound is the smaller of that and `|||P|||_1`.
pub fn sup_certified<P: TorusPolynomial + ?Sized>(p: &P, opts: &GridOptions) -> Result<SupNormEstimate> {
    let table = p.term_table();
    let h = opts.grid_step;
    let bound = precondition_bound(&table);
    if h.is_nan() || h <= 0.0 || h >= bound {
        return invalid(format!("grid step {h} must lie in (0, {bound})"));
    }
    let plan = plan_grid(&table);
    let k = (TAU / h).ceil() as usize;
    let step = TAU / k as f64;
    let points = (k as u64)
        .checked_pow(plan.free.len() as u32)
        .filter(|&pts| pts <= opts.max_points)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!("grid of {k}^{} points exceeds cap {}", plan.free.len(), opts.max_points))
        })?;
    let (gmax, argmax) = grid_max(&table, &plan, k);
    let slack = plan.degree_sum as f64 * step / 2.0;
    let upper = (gmax / (1.0 - slack)).min(table.l1_coeff_norm()).max(gmax);
    Ok(SupNormEstimate {
        lower: gmax,
        upper: Some(upper),
        argmax,
        method: SupMethod::Grid {
            grid_step: step,
            points_per_axis: k,
            grid_points: points,
            free_axes: plan.free.len(),
            bernstein_slack: slack,
            certification: CERTIFICATION_LABEL.to_string(),
        },
    })
}

/// Per-term exponents restricted to the free variables.
struct GridTerms {
    coeffs: Vec<Complex64>,
    /// `exps[t * free + a]`: exponent of free axis `a` in term `t`.
    exps: Vec<usize>,
}

fn grid_max(table: &TermTable, plan: &GridPlan, k: usize) -> (f64, Vec<f64>) {
    let n = table.n;
    let axes = plan.free.len();
    let mut pos_of = vec![usize::MAX; n];
    for (a, &v) in plan.free.iter().enumerate() {
        pos_of[v] = a;
    }
    let mut terms = GridTerms { coeffs: table.coeffs.clone(), exps: vec![0; table.num_terms() * axes] };
    for t in 0..table.num_terms() {
        for &v in table.term_vars(t) {
            let a = pos_of[v as usize];
            if a != usize::MAX {
                terms.exps[t * axes + a] += 1;
            }
        }
    }
    let to_theta = |flat: u64| -> Vec<f64> {
        let mut theta = vec![0.0; n];
        let mut rest = flat;
        for a in (0..axes).rev() {
            theta[plan.free[a]] = (rest % k as u64) as f64 * TAU / k as f64;
            rest /= k as u64;
        }
        theta
    };
    if axes == 0 {
        let value = table.constant + terms.coeffs.iter().sum::<Complex64>();
        return (value.norm(), vec![0.0; n]);
    }
    // powers[a][e][g] = e^{i e theta_g} for free axis a
    let powers: Vec<Vec<Vec<Complex64>>> = plan
        .free
        .iter()
        .map(|&v| {
            (0..=table.variable_degrees[v])
                .map(|e| (0..k).map(|g| Complex64::cis((e * g) as f64 * TAU / k as f64)).collect())
                .collect()
        })
        .collect();
    let inner = axes - 1;
    let inner_deg = table.variable_degrees[plan.free[inner]];
    let outer_count = (k as u64).pow(inner as u32);
    let chunk = |outer: u64| -> (f64, u64) {
        // outer grid coordinates
        let mut coords = vec![0usize; inner];
        let mut rest = outer;
        for a in (0..inner).rev() {
            coords[a] = (rest % k as u64) as usize;
            rest /= k as u64;
        }
        // collapse to a polynomial in the inner variable
        let mut q = vec![table.constant; inner_deg + 1];
        q[1..].iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        for (t, c) in terms.coeffs.iter().enumerate() {
            let e = &terms.exps[t * axes..(t + 1) * axes];
            let mut part = *c;
            for a in 0..inner {
                part *= powers[a][e[a]][coords[a]];
            }
            q[e[inner]] += part;
        }
        let mut best = (-1.0f64, 0u64);
        for g in 0..k {
            let mut v = q[0];
            for (e, qe) in q.iter().enumerate().skip(1) {
                v += qe * powers[inner][e][g];
            }
            let val = v.norm();
            if val > best.0 {
                best = (val, outer * k as u64 + g as u64);
            }
        }
        best
    };
    let per_outer: Vec<(f64, u64)> = (0..outer_count).into_par_iter().map(chunk).collect();
    let (gmax, flat) = per_outer
        .into_iter()
        .reduce(|best, cand| if cand.0 > best.0 { cand } else { best })
        .expect("nonempty grid");
    (gmax, to_theta(flat))
}

/// Lower bound on `sup |B(z^(1), ..., z^(m))|` over `(D^n)^m`.
///
/// `B` is linear in each slot, so for the others fixed the best unimodular
/// choice is `z^(k)_d = conj(g_d) / |g_d|` with `g` the slot gradient,
/// giving `sum_d |g_d|`. Each sweep updates every slot in turn.
pub fn sup_multilinear(b: &MultilinearForm, opts: &AscentOptions) -> Result<SupNormEstimate> {
    if opts.starts == 0 {
        return invalid("sup_multilinear needs at least one start");
    }
    let (m, n) = (b.degree(), b.dimension());
    let method = SupMethod::MultilinearAscent { starts: opts.starts, iterations: opts.iterations, seed: opts.seed };
    let run = |s: usize| -> (f64, Vec<f64>) {
        let phases = initial_phases(m * n, opts, s, MULTILINEAR_STREAM);
        let mut pts: Vec<Vec<Complex64>> = phases.chunks(n).map(|c| c.iter().map(|&t| Complex64::cis(t)).collect()).collect();
        let mut theta = phases;
        let mut value = -1.0;
        for _ in 0..opts.iterations.max(1) {
            let before = value;
            for k in 0..m {
                let g = b.slot_gradient(k, &pts);
                for d in 0..n {
                    if g[d].norm() > 0.0 {
                        let t = wrap_phase(-g[d].arg());
                        theta[k * n + d] = t;
                        pts[k][d] = Complex64::cis(t);
                    }
                }
                value = g.iter().map(|x| x.norm()).sum::<f64>();
            }
            if value <= before * (1.0 + 1e-15) {
                break;
            }
        }
        (b.evaluate(&pts).map(|v| v.norm()).unwrap_or(0.0), theta)
    };
    let results: Vec<(f64, Vec<f64>)> = (0..opts.starts).into_par_iter().map(run).collect();
    let (lower, argmax) = best_of(results);
    Ok(SupNormEstimate { lower, upper: None, argmax, method })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::ExponentVector;
    use crate::polarization::polarize;
    use crate::poly::{random_homogeneous, CoefficientDistribution, GeneralPolynomial, HomogeneousPolynomial};

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

    fn opts(n: usize, seed: u64) -> AscentOptions {
        AscentOptions::for_dimension(n, seed)
    }

    #[test]
    fn ascent_examples() {
        let e = sup_lower(&poly(2, 2, &[(&[1, 1], 1.0)]), &opts(2, 1)).unwrap();
        assert!((e.lower - 1.0).abs() < 1e-12);
        let e = sup_lower(&poly(1, 2, &[(&[1, 0], 1.0), (&[0, 1], 1.0)]), &opts(2, 1)).unwrap();
        assert!((e.lower - 2.0).abs() < 1e-9);
        let sq = poly(2, 2, &[(&[2, 0], 1.0), (&[1, 1], 2.0), (&[0, 2], 1.0)]);
        assert!((sup_lower(&sq, &opts(2, 1)).unwrap().lower - 4.0).abs() < 1e-9);
        // alignment needs the ascent when phases are scrambled
        let scrambled = HomogeneousPolynomial::from_exponents(
            1,
            3,
            [
                (ExponentVector::new(vec![1, 0, 0]), Complex64::cis(1.0)),
                (ExponentVector::new(vec![0, 1, 0]), Complex64::cis(-2.0)),
                (ExponentVector::new(vec![0, 0, 1]), Complex64::cis(2.5)),
            ],
        )
        .unwrap();
        assert!((sup_lower(&scrambled, &opts(3, 4)).unwrap().lower - 3.0).abs() < 1e-9);
    }

    #[test]
    fn ascent_zero_polynomial() {
        let z = HomogeneousPolynomial::zero(2, 3).unwrap();
        assert_eq!(sup_lower(&z, &opts(3, 1)).unwrap().lower, 0.0);
        assert!(sup_lower(&z, &AscentOptions { starts: 0, iterations: 1, seed: 0 }).is_err());
    }

    #[test]
    fn ascent_reports_its_argmax() {
        let p = random_homogeneous(3, 3, CoefficientDistribution::ComplexGaussian, 7).unwrap();
        let e = sup_lower(&p, &opts(3, 2)).unwrap();
        let z: Vec<Complex64> = e.argmax.iter().map(|&t| Complex64::cis(t)).collect();
        assert!((p.evaluate(&z).unwrap().norm() - e.lower).abs() < 1e-12);
        assert!(e.argmax.iter().all(|&t| (0.0..TAU).contains(&t)));
    }

    #[test]
    fn ascent_improves_with_budget() {
        let p = random_homogeneous(4, 3, CoefficientDistribution::ComplexGaussian, 3).unwrap();
        let small = sup_lower(&p, &AscentOptions { starts: 2, iterations: 5, seed: 9 }).unwrap();
        let large = sup_lower(&p, &AscentOptions { starts: 2, iterations: 200, seed: 9 }).unwrap();
        assert!(large.lower >= small.lower);
        let more = sup_lower(&p, &AscentOptions { starts: 8, iterations: 200, seed: 9 }).unwrap();
        assert!(more.lower >= large.lower);
    }

    #[test]
    fn ascent_scales_with_polynomial() {
        let p = random_homogeneous(3, 4, CoefficientDistribution::UniformDisc, 12).unwrap();
        let base = sup_lower(&p, &opts(4, 5)).unwrap().lower;
        let doubled = sup_lower(&p.scale(c(2.0, 0.0)), &opts(4, 5)).unwrap().lower;
        assert_eq!(doubled, 2.0 * base);
        let rotated = sup_lower(&p.scale(c(0.0, -3.0)), &opts(4, 5)).unwrap().lower;
        assert!((rotated - 3.0 * base).abs() < 1e-9 * base);
    }

    #[test]
    fn certified_examples() {
        let z1 = poly(1, 1, &[(&[1], 1.0)]);
        for h in [0.5, 0.1, 0.01] {
            let e = sup_certified(&z1, &GridOptions::new(h)).unwrap();
            assert_eq!(e.lower, 1.0);
            assert!(e.upper.unwrap() <= 1.0 / (1.0 - h / 2.0));
        }
        let sum = poly(1, 2, &[(&[1, 0], 1.0), (&[0, 1], 1.0)]);
        let e = sup_certified(&sum, &GridOptions::new(0.01)).unwrap();
        let upper = e.upper.unwrap();
        assert!(upper >= 2.0 && upper - 2.0 <= 2.0 * 0.01 / (1.0 - 0.01));
        assert!(matches!(e.method, SupMethod::Grid { ref certification, .. } if certification == CERTIFICATION_LABEL));
    }

    #[test]
    fn certified_rejects_bad_steps_and_budgets() {
        let p = random_homogeneous(2, 2, CoefficientDistribution::ComplexGaussian, 1).unwrap();
        // 2 / (n m_max) = 0.5
        assert!(matches!(sup_certified(&p, &GridOptions::new(0.5)), Err(Error::InvalidArgument(_))));
        assert!(matches!(sup_certified(&p, &GridOptions::new(0.0)), Err(Error::InvalidArgument(_))));
        let tiny = GridOptions { grid_step: 1e-3, max_points: 1000 };
        assert!(matches!(sup_certified(&p, &tiny), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn certified_general_polynomial() {
        // 1 + z1 z2 on the torus has sup 2, at z1 z2 = 1
        let g = GeneralPolynomial::from_parts(2, c(1.0, 0.0), [poly(2, 2, &[(&[1, 1], 1.0)])]).unwrap();
        let e = sup_certified(&g, &GridOptions::new(0.05)).unwrap();
        assert!((e.lower - 2.0).abs() < 1e-12);
        assert!(e.upper.unwrap() >= 2.0);
    }

    #[test]
    fn certified_gap_shrinks_with_step() {
        let p = random_homogeneous(3, 2, CoefficientDistribution::ComplexGaussian, 33).unwrap();
        // cap by |||P|||_1 would hide the refinement, so inspect the slack
        let gaps: Vec<f64> = [0.05, 0.025, 0.0125]
            .iter()
            .map(|&h| {
                let e = sup_certified(&p, &GridOptions::new(h)).unwrap();
                let SupMethod::Grid { bernstein_slack, .. } = e.method else { unreachable!() };
                e.lower / (1.0 - bernstein_slack) - e.lower
            })
            .collect();
        assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1], "{gaps:?}");
    }

    #[test]
    fn certified_grid_is_thread_count_independent() {
        let p = random_homogeneous(3, 3, CoefficientDistribution::RandomSigns, 4).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sup_certified(&p, &GridOptions::new(0.02)).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn certified_step_respects_budget() {
        let p = random_homogeneous(4, 4, CoefficientDistribution::ComplexGaussian, 2).unwrap();
        let h = certified_step(&p, 1_000_000, 0.05).unwrap();
        let e = sup_certified(&p, &GridOptions { grid_step: h, max_points: 1_000_000 }).unwrap();
        assert!(e.upper.unwrap() >= e.lower);
    }

    #[test]
    fn multilinear_examples() {
        let one = MultilinearForm::from_fn(2, 2, |i| if i == [1, 1] { c(1.0, 0.0) } else { c(0.0, 0.0) }).unwrap();
        assert!((sup_multilinear(&one, &opts(2, 1)).unwrap().lower - 1.0).abs() < 1e-12);
        let id = MultilinearForm::from_fn(2, 2, |i| if i[0] == i[1] { c(1.0, 0.0) } else { c(0.0, 0.0) }).unwrap();
        assert!((sup_multilinear(&id, &opts(2, 1)).unwrap().lower - 2.0).abs() < 1e-12);
    }

    #[test]
    fn multilinear_dominates_diagonal() {
        for seed in 0..10 {
            let p = random_homogeneous(3, 3, CoefficientDistribution::ComplexGaussian, seed).unwrap();
            let dense = polarize(&p).to_multilinear().unwrap();
            let ml = sup_multilinear(&dense, &opts(3, seed)).unwrap().lower;
            let diag = sup_lower(&p, &opts(3, seed)).unwrap().lower;
            assert!(ml >= diag - 1e-9, "seed {seed}: {ml} < {diag}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]

            #[test]
            fn interior_points_never_beat_torus(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
                let p = random_homogeneous(m, n, CoefficientDistribution::ComplexGaussian, seed).unwrap();
                let best = sup_lower(&p, &opts(n, seed)).unwrap().lower;
                let mut rng = crate::seed::rng(seed, &[77]);
                for _ in 0..50 {
                    let z: Vec<Complex64> = (0..n).map(|_| CoefficientDistribution::UniformDisc.sample(&mut rng)).collect();
                    prop_assert!(p.evaluate(&z).unwrap().norm() <= best * (1.0 + 1e-9));
                }
            }

            #[test]
            fn estimates_bounded_by_l1(seed in any::<u64>(), m in 1usize..5, n in 1usize..4) {
                let p = random_homogeneous(m, n, CoefficientDistribution::ComplexGaussian, seed).unwrap();
                let l1 = p.l1_coeff_norm();
                prop_assert!(sup_lower(&p, &opts(n, seed)).unwrap().lower <= l1 * (1.0 + 1e-9));
                let h = certified_step(&p, 200_000, 0.1).unwrap();
                let e = sup_certified(&p, &GridOptions { grid_step: h, max_points: 200_000 }).unwrap();
                prop_assert!(e.upper.unwrap() <= l1 * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn certified_upper_dominates_ascent() {
        let mut rng = crate::seed::rng(2024, &[]);
        for case in 0..100u64 {
            let m = rng.random_range(1..=4);
            let n = rng.random_range(1..=3);
            let p = random_homogeneous(m, n, CoefficientDistribution::ALL[(case % 3) as usize], case).unwrap();
            let asc = sup_lower(&p, &opts(n, case)).unwrap().lower;
            let h = certified_step(&p, 2_000_000, 0.05).unwrap();
            let cert = sup_certified(&p, &GridOptions { grid_step: h, max_points: 2_000_000 }).unwrap();
            assert!(cert.upper.unwrap() >= asc * (1.0 - 1e-12), "case {case}: {} < {asc}", cert.upper.unwrap());
        }
    }
}
