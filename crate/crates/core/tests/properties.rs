//! Randomized invariants across modules.

use polydisc::bh::{check_blei, check_proof_step, verify_bh, SupMode, PARSEVAL_TOL};
use polydisc::dirichlet::{bohr_lift, factorize, sidon_brute, DirichletPolynomial};
use polydisc::index::MultiIndex;
use polydisc::multilinear::MultilinearForm;
use polydisc::polarization::{check_harris, polarize, HarrisPartition};
use polydisc::poly::{random_homogeneous, CoefficientDistribution};
use polydisc::sidon::{sidon_lower_search, SearchStrategy, SidonSearchOptions};
use polydisc::supnorm::{certified_step, sup_certified, sup_lower, AscentOptions, GridOptions};
use polydisc::Complex64;
use proptest::prelude::*;

fn dist() -> impl Strategy<Value = CoefficientDistribution> {
    prop::sample::select(CoefficientDistribution::ALL.to_vec())
}

/// `2^k i^j`: multiplying by it is exact in floating point.
fn exact_scalar() -> impl Strategy<Value = Complex64> {
    (-3i32..=3, 0u8..4).prop_map(|(k, j)| {
        let r = 2f64.powi(k);
        match j {
            0 => Complex64::new(r, 0.0),
            1 => Complex64::new(0.0, r),
            2 => Complex64::new(-r, 0.0),
            _ => Complex64::new(0.0, -r),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polarize_then_restrict_is_identity(m in 1usize..=4, n in 1usize..=4, d in dist(), seed in any::<u64>()) {
        let p = random_homogeneous(m, n, d, seed).unwrap();
        prop_assert_eq!(polarize(&p).restrict_diagonal(), p);
    }

    #[test]
    fn partial_substitution_parseval(m in 2usize..=4, n in 1usize..=4, d in dist(), seed in any::<u64>(), k in 0usize..4) {
        let p = random_homogeneous(m, n, d, seed).unwrap();
        let r = check_proof_step(&p, 1 + k % m, p.l1_coeff_norm()).unwrap();
        prop_assert!(r.parseval_rel_err <= PARSEVAL_TOL, "{}", r.parseval_rel_err);
        prop_assert!(r.pass);
    }

    #[test]
    fn harris_holds_against_certified_bounds(
        m in 2usize..=4,
        n in 1usize..=3,
        d in dist(),
        seed in any::<u64>(),
        cut in 1usize..4,
        pts in prop::collection::vec((0.0f64..=1.0, 0.0f64..std::f64::consts::TAU), 8),
    ) {
        let p = random_homogeneous(m, n, d, seed).unwrap();
        let first = cut.min(m - 1);
        let partition = HarrisPartition::new(vec![first, m - first], m).unwrap();
        let points: Vec<Vec<Complex64>> = (0..2)
            .map(|j| (0..n).map(|k| { let (r, t) = pts[(j * 4 + k) % 8]; Complex64::from_polar(r, t) }).collect())
            .collect();
        let h = certified_step(&p, 200_000, 0.05).unwrap();
        let upper = sup_certified(&p, &GridOptions { grid_step: h, max_points: 200_000 }).unwrap().upper.unwrap();
        prop_assert!(check_harris(&p, &partition, &points, upper).unwrap().pass);
    }

    #[test]
    fn sup_estimate_is_homogeneous(m in 1usize..=3, n in 1usize..=3, d in dist(), seed in any::<u64>(), lambda in exact_scalar()) {
        let p = random_homogeneous(m, n, d, seed).unwrap();
        let opts = AscentOptions { starts: 6, iterations: 60, seed };
        let a = sup_lower(&p, &opts).unwrap().lower;
        let b = sup_lower(&p.scale(lambda), &opts).unwrap().lower;
        prop_assert_eq!(b, lambda.norm() * a);
        prop_assert!(a <= p.l1_coeff_norm() * (1.0 + 1e-9));
    }

    #[test]
    fn bh_ratio_is_scale_invariant(m in 2usize..=3, n in 2usize..=3, d in dist(), seed in any::<u64>(), lambda in exact_scalar()) {
        let p = random_homogeneous(m, n, d, seed).unwrap();
        let mode = SupMode::Ascent(AscentOptions { starts: 6, iterations: 60, seed });
        let a = verify_bh(&p, &mode).unwrap().ratio;
        let b = verify_bh(&p.scale(lambda), &mode).unwrap().ratio;
        prop_assert!((a - b).abs() <= 1e-15 * a, "{} vs {}", a, b);
    }

    #[test]
    fn blei_is_equality_on_single_entries(m in 2usize..=3, n in 1usize..=4, flat in any::<u64>(), re in -5.0f64..5.0, im in -5.0f64..5.0) {
        prop_assume!(re != 0.0 || im != 0.0);
        let mut c = MultilinearForm::zeros(m, n).unwrap();
        let mut idx = vec![0; m];
        let mut f = flat;
        for e in idx.iter_mut() {
            *e = (f % n as u64) as usize + 1;
            f /= n as u64;
        }
        c.set(&idx, Complex64::new(re, im)).unwrap();
        let r = check_blei(&c).unwrap();
        prop_assert_eq!(r.lhs, r.rhs);
    }

    #[test]
    fn sidon_sandwich(m in 2usize..=3, n in 2usize..=3, seed in any::<u64>(), s in 0usize..3) {
        let opts = SidonSearchOptions::new(n, 6, seed, SearchStrategy::ALL[s]);
        let b = sidon_lower_search(m, n, &opts).unwrap();
        prop_assert!(1.0 <= b.lower_search);
        prop_assert!(b.lower_search <= b.upper_best * (1.0 + 1e-9));
    }

    #[test]
    fn sidon_ratio_is_scale_invariant(m in 2usize..=3, n in 2usize..=3, d in dist(), seed in any::<u64>(), lambda in exact_scalar()) {
        let p = random_homogeneous(m, n, d, seed).unwrap();
        let q = p.scale(lambda);
        let opts = AscentOptions { starts: 6, iterations: 60, seed };
        let a = p.l1_coeff_norm() / sup_lower(&p, &opts).unwrap().lower;
        let b = q.l1_coeff_norm() / sup_lower(&q, &opts).unwrap().lower;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn lift_transports_l1(len in 1usize..=400, d in dist(), seed in any::<u64>()) {
        let q = DirichletPolynomial::random(len, d, seed).unwrap();
        prop_assert_eq!(bohr_lift(&q).unwrap().poly.l1_coeff_norm(), q.l1_norm());
    }

    #[test]
    fn factorization_is_additive(a in 1u64..5000, b in 1u64..5000) {
        let (fa, fb, fab) = (factorize(a).unwrap().alpha, factorize(b).unwrap().alpha, factorize(a * b).unwrap().alpha);
        for (j, &e) in fab.iter().enumerate() {
            let ea = fa.get(j).copied().unwrap_or(0);
            let eb = fb.get(j).copied().unwrap_or(0);
            prop_assert_eq!(e, ea + eb);
        }
    }

    #[test]
    fn multiplicity_bound_on_removal(m in 2usize..=5, n in 1usize..=5, flat in any::<u64>(), k in 0usize..5) {
        let mut i = vec![0; m];
        let mut f = flat;
        for e in i.iter_mut() {
            *e = (f % n as u64) as usize + 1;
            f /= n as u64;
        }
        let idx = MultiIndex::new(i, n).unwrap();
        let reduced = idx.remove_coordinate(1 + k % m).unwrap();
        prop_assert!(idx.multiplicity().unwrap() <= m as u64 * reduced.multiplicity().unwrap());
    }
}

#[test]
fn brute_sidon_is_nondecreasing_in_len() {
    let values = sidon_brute(8).unwrap();
    for w in values.windows(2) {
        assert!(w[1].estimate >= w[0].estimate, "S({}) < S({})", w[1].len, w[0].len);
    }
}
