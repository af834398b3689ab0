use hermvar::covariance::{alpha, beta, fbm_covariance, rho, HurstParam};
use hermvar::generator::generate_circulant;
use hermvar::harness::{phi_four_term, phi_two_branch};
use hermvar::hermite::{hermite_eval, HermiteOrder};
use hermvar::seed::{derive_seed, ETA_TAG, PATH_TAG};
use hermvar::variation::{decompose, skorohod_variation, weighted_variation};
use hermvar::weight::{WeightFunction, CATALOG};
use proptest::prelude::*;

fn hurst() -> impl Strategy<Value = HurstParam> {
    (0.02f64..0.98).prop_map(|h| HurstParam::new(h).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rho_partial_sums_telescope(h in hurst(), k in 1i64..5000) {
        let direct: f64 = (-k..=k).map(|j| rho(h, j)).sum();
        let closed = ((k + 1) as f64).powf(h.two_h()) - (k as f64).powf(h.two_h());
        prop_assert!((direct - closed).abs() <= 1e-10 * closed.abs().max(1.0));
    }

    #[test]
    fn rho_is_even(h in hurst(), k in 0i64..100_000) {
        prop_assert_eq!(rho(h, k), rho(h, -k));
    }

    #[test]
    fn alpha_sums_to_terminal_covariance(h in hurst(), n in 2usize..300, t in 0.0f64..=1.0) {
        let sum: f64 = (0..n).map(|k| alpha(h, n, k, t).unwrap()).sum();
        let target = fbm_covariance(h, 1.0, t).unwrap();
        prop_assert!((sum - target).abs() < 1e-12);
    }

    #[test]
    fn beta_is_scaled_rho(h in hurst(), n in 1usize..5000, j in 0usize..5000, k in 0usize..5000) {
        prop_assume!(j < n && k < n);
        let b = beta(h, n, j, k).unwrap() * (n as f64).powf(h.two_h());
        let r = rho(h, j as i64 - k as i64);
        prop_assert!((b - r).abs() <= 1e-14 * r.abs().max(1e-300) + 1e-300);
    }

    #[test]
    fn decomposition_identity(
        h in hurst(),
        q in 1u32..=4,
        log_n in 3u32..=10,
        which in 0usize..CATALOG.len(),
        seed in any::<u64>(),
    ) {
        let n = 1usize << log_n;
        let path = generate_circulant(h, n, seed).unwrap();
        let f = WeightFunction::from_label(CATALOG[which]).unwrap();
        let d = decompose(&path, &f, q).unwrap();
        let lhs = weighted_variation(&path, &f, q).unwrap() - skorohod_variation(&path, &f, q).unwrap();
        let rhs = d.correction_total();
        let scale = d.f_n.abs().max(d.g_n.abs()).max(rhs.abs()).max(1e-300);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn hermite_parity(q in 0u32..=20, x in -10.0f64..10.0) {
        let o = HermiteOrder::new(q).unwrap();
        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        let a = hermite_eval(o, -x);
        let b = sign * hermite_eval(o, x);
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn seed_domains_disjoint(master in any::<u64>(), r in 0u64..(1 << 32)) {
        prop_assert_ne!(derive_seed(master, PATH_TAG, r), derive_seed(master, ETA_TAG, r));
        prop_assert_eq!(derive_seed(master, PATH_TAG, r), derive_seed(master, PATH_TAG, r));
    }

    #[test]
    fn phi_forms_agree(q in 2u32..10, h in hurst()) {
        prop_assert!((phi_two_branch(q, h) - phi_four_term(q, h)).abs() <= 1e-15);
    }
}

#[test]
fn brownian_and_constant_weight_have_no_corrections() {
    for (hv, label) in [(0.5, "cos"), (0.5, "x2"), (0.7, "one"), (0.3, "one")] {
        let h = HurstParam::new(hv).unwrap();
        let f = WeightFunction::from_label(label).unwrap();
        for q in 1..=4 {
            let path = generate_circulant(h, 256, 17).unwrap();
            let d = decompose(&path, &f, q).unwrap();
            assert_eq!(d.f_n, d.g_n, "H={hv} f={label} q={q}");
        }
    }
}
