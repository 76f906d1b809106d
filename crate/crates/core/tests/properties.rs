use proptest::prelude::*;

use pgdus::analytic::{mgf, raw_moment_series, SeriesOptions};
use pgdus::dist::{Dataset, Lifetime, ModelKind, ParamVector, PgduseParams};
use pgdus::estimation::{fit_mle, FitOptions};
use pgdus::order_stats::{order_stat_cdf, system_lifetime_cdf, OrderSpec, Topology};
use pgdus::select::{aic, bic, ecdf, ks_pvalue, ks_statistic, PValueMethod};

fn rate() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(f64::exp)
}

fn shape() -> impl Strategy<Value = f64> {
    (-2.5f64..2.5).prop_map(f64::exp)
}

fn any_model() -> impl Strategy<Value = ParamVector> {
    (0usize..5, rate(), shape()).prop_map(|(i, a, b)| {
        let kind = ModelKind::ALL[i];
        let raw = match kind {
            ModelKind::Pgduse => vec![a, b],
            ModelKind::Gduse => vec![b, a],
            _ => vec![a],
        };
        ParamVector::new(kind, &raw).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cdf_and_survival_partition_unity(p in any_model(), x in 0.0f64..50.0) {
        let (f, s) = (p.cdf(x), p.survival(x));
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert!((f + s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cdf_is_nondecreasing(p in any_model(), x in 0.0f64..20.0, dx in 0.0f64..5.0) {
        prop_assert!(p.cdf(x + dx) >= p.cdf(x));
    }

    #[test]
    fn quantile_inverts_cdf(p in any_model(), q in 0.0f64..0.999_999) {
        let x = p.quantile(q).unwrap();
        prop_assert!(x >= 0.0);
        prop_assert!((p.cdf(x) - q).abs() < 1e-9);
    }

    #[test]
    fn hazard_times_survival_is_density(p in any_model(), q in 0.001f64..0.99) {
        let x = p.quantile(q).unwrap();
        let lhs = p.hazard(x) * p.survival(x);
        prop_assert!((lhs - p.pdf(x)).abs() <= 1e-12 * p.pdf(x).max(1e-300));
    }

    #[test]
    fn sampling_is_seed_deterministic(p in any_model(), seed in any::<u64>()) {
        let a = p.sample(20, seed);
        prop_assert_eq!(&a, &p.sample(20, seed));
        prop_assert!(a.iter().all(|v| *v >= 0.0 && v.is_finite()));
    }

    #[test]
    fn unit_shape_is_duse(l in rate(), x in 0.0f64..30.0) {
        let pg = ParamVector::new(ModelKind::Pgduse, &[l, 1.0]).unwrap();
        let du = ParamVector::new(ModelKind::Duse, &[l]).unwrap();
        prop_assert!((pg.cdf(x) - du.cdf(x)).abs() < 1e-12);
        prop_assert!((pg.ln_pdf(x) - du.ln_pdf(x)).abs() < 1e-12 * du.ln_pdf(x).abs().max(1.0));
    }

    #[test]
    fn mean_scales_inversely_with_rate(l in rate(), t in shape(), c in 0.2f64..5.0) {
        let opts = SeriesOptions::default();
        let a = raw_moment_series(&PgduseParams::new(l, t).unwrap(), 1, &opts).unwrap();
        let b = raw_moment_series(&PgduseParams::new(c * l, t).unwrap(), 1, &opts).unwrap();
        prop_assert!((b * c - a).abs() < 1e-9 * a);
    }

    #[test]
    fn mgf_is_log_convex_in_t(l in rate(), t in shape()) {
        let p = PgduseParams::new(l, t).unwrap();
        let opts = SeriesOptions::default();
        let h = 0.2 * l;
        let m = |s: f64| mgf(&p, s, &opts).unwrap().ln();
        prop_assert!(m(-h) + m(h) - 2.0 * m(0.0) >= -1e-9);
    }

    #[test]
    fn order_statistic_cdf_ordering(l in rate(), t in shape(), n in 1usize..12, q in 0.01f64..0.99) {
        let p = PgduseParams::new(l, t).unwrap();
        let x = p.quantile(q).unwrap();
        let mut prev = 1.0;
        for r in 1..=n {
            let g = order_stat_cdf(&p, OrderSpec::new(n, r).unwrap(), x);
            prop_assert!(g <= prev + 1e-14);
            prev = g;
        }
        let s = system_lifetime_cdf(&p, n, Topology::Series, x).unwrap();
        let pl = system_lifetime_cdf(&p, n, Topology::Parallel, x).unwrap();
        prop_assert!(s >= pl - 1e-15);
    }

    #[test]
    fn ks_pvalue_nonincreasing(n in 1usize..60, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        for m in [PValueMethod::Exact, PValueMethod::Asymptotic] {
            let (pl, ph) = (ks_pvalue(lo, n, m).unwrap(), ks_pvalue(hi, n, m).unwrap());
            prop_assert!((0.0..=1.0).contains(&pl) && (0.0..=1.0).contains(&ph));
            prop_assert!(ph <= pl + 1e-9, "{:?} n={} {} {} {} {}", m, n, lo, hi, pl, ph);
        }
    }

    #[test]
    fn ks_statistic_ignores_order(mut xs in prop::collection::vec(0.01f64..100.0, 1..40), rate in rate()) {
        let f = |x: f64| 1.0 - (-rate * x).exp();
        let a = ks_statistic(&Dataset::new(xs.clone()).unwrap(), f);
        xs.reverse();
        let b = ks_statistic(&Dataset::new(xs).unwrap(), f);
        prop_assert_eq!(a, b);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn ecdf_is_a_step_cdf(xs in prop::collection::vec(0.01f64..100.0, 1..40)) {
        let e = ecdf(&Dataset::new(xs.clone()).unwrap());
        prop_assert!(e.steps().windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(*e.steps().last().unwrap(), 1.0);
        let max = xs.iter().cloned().fold(0.0, f64::max);
        prop_assert_eq!(e.eval(max), 1.0);
        prop_assert_eq!(e.eval(0.0), 0.0);
    }

    #[test]
    fn information_criteria_identity(ll in -1e4f64..1e4, k in 0usize..5, n in 1usize..10_000) {
        let diff = aic(ll, k) - bic(ll, k, n);
        let expected = 2.0 * k as f64 - k as f64 * (n as f64).ln();
        prop_assert!((diff - expected).abs() < 1e-9 * (1.0 + ll.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fitted_parameters_are_positive(xs in prop::collection::vec(0.05f64..20.0, 2..30), i in 0usize..5) {
        let data = Dataset::new(xs).unwrap();
        let opts = FitOptions { starts: 2, ..FitOptions::default() };
        let fit = fit_mle(ModelKind::ALL[i], &data, &opts).unwrap();
        prop_assert!(fit.params.values().iter().all(|v| *v > 0.0 && v.is_finite()));
        prop_assert!(fit.log_likelihood.is_finite());
    }
}

#[test]
fn dataset_rejects_bad_values() {
    assert!(Dataset::new(vec![]).is_err());
    assert!(Dataset::new(vec![1.0, 0.0]).is_err());
    assert!(Dataset::new(vec![1.0, f64::INFINITY]).is_err());
}
