use casual_stable::cmath::ZPoint;
use casual_stable::extract::{radial_limit, validate_thinning, ExtractOptions};
use casual_stable::samplers::Seed;
use casual_stable::transforms::{chebyshev_map, chebyshev_t};
use casual_stable::{gfun_eval, pgf_eval, LaplaceFamily, PgfFamily, ThinningFamily};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn families() -> Vec<PgfFamily> {
    vec![
        PgfFamily::SvhStable { lambda: 1.0, alpha: 0.5 },
        PgfFamily::SvhStable { lambda: 2.0, alpha: 1.0 },
        PgfFamily::Example1 { lambda: 1.0, gamma: 0.7, kappa: 0.3, m: 1 },
        PgfFamily::Example1 { lambda: 0.5, gamma: 1.0, kappa: 0.7, m: 2 },
        PgfFamily::Example2 { lambda: 1.0, gamma: 0.5, b: -0.5 },
        PgfFamily::Example2 { lambda: 1.0, gamma: 2.0, b: 0.5 },
        PgfFamily::Geometric { q: 0.3 },
        PgfFamily::Sibuya { p: 0.5 },
        PgfFamily::AuthorCitations { p: 0.5, q: 0.5 },
        PgfFamily::FieldCitations { lambda: 1.0, p: 0.5, q: 0.5 },
    ]
}

#[test]
fn radial_normalization_is_monotone() {
    for fam in families() {
        let gaps: Vec<f64> =
            (2..=6).map(|k| (1.0 - pgf_eval(&fam, c(1.0 - 10f64.powi(-k))).unwrap().norm()).abs()).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{fam:?}: {gaps:?}");
        let limit = radial_limit(|r| Ok(pgf_eval(&fam, c(r))?.re)).unwrap();
        assert!((limit - 1.0).abs() < 5e-3, "{fam:?}: limit {limit}");
    }
}

#[test]
fn reduction_and_field_identities_on_fine_grid() {
    let grid: Vec<f64> = (0..1001).map(|i| i as f64 / 1000.0).collect();
    let (lambda, gamma) = (1.4, 0.55);
    let e1 = PgfFamily::Example1 { lambda, gamma, kappa: 0.0, m: 1 };
    let svh = PgfFamily::SvhStable { lambda, alpha: gamma };
    let field = PgfFamily::FieldCitations { lambda, p: gamma, q: 0.35 };
    let e1q = PgfFamily::Example1 { lambda, gamma, kappa: 0.65, m: 1 };
    let mut worst: f64 = 0.0;
    for &z in &grid {
        worst = worst.max((pgf_eval(&e1, c(z)).unwrap() - pgf_eval(&svh, c(z)).unwrap()).norm());
        worst = worst.max((pgf_eval(&field, c(z)).unwrap() - pgf_eval(&e1q, c(z)).unwrap()).norm());
    }
    assert!(worst < 1e-13, "{worst}");
}

#[test]
fn coefficient_round_trips() {
    for q in [0.2, 0.5, 0.9] {
        let t = PgfFamily::Geometric { q }.pmf(40).unwrap();
        for k in 1..=40 {
            assert!((t.mass(k) - q * (1.0 - q).powi(k as i32 - 1)).abs() < 1e-10);
        }
    }
    for p in [0.1, 0.5, 0.9] {
        let t = ThinningFamily::Bernoulli.pmf(p, &ExtractOptions::new(30)).unwrap();
        assert!((t.mass(0) - (1.0 - p)).abs() < 1e-10);
        assert!((t.mass(1) - p).abs() < 1e-10);
        assert!((2..=30).all(|k| t.mass(k).abs() < 1e-10));
    }
}

#[test]
fn sibuya_pochhammer_masses() {
    let p = 0.3;
    let t = PgfFamily::Sibuya { p }.pmf(60).unwrap();
    // p (1-p)_{k-1} / k!
    let mut expected = p;
    for k in 1..=60usize {
        if k > 1 {
            expected *= (k as f64 - 1.0 - p) / k as f64;
        }
        assert!((t.mass(k) - expected).abs() < 1e-10, "k={k}");
    }
}

#[test]
fn thinning_validity_examples() {
    let v = validate_thinning(&ThinningFamily::Example2 { b: 0.0 }, 1.0 / 3.0, 200, 1e-9).unwrap();
    assert!(v.report.sup_residual <= 1e-8, "{v:?}");
    assert!(v.normalization_defect < 1e-10);
    let v = validate_thinning(&ThinningFamily::Example1 { kappa: 0.6, m: 2 }, 0.3, 200, 1e-9).unwrap();
    assert!(v.report.sup_residual <= 1e-8, "{v:?}");
}

#[test]
fn tempered_normalizer_matches_direct_formula() {
    // straight transcription of exp(h - ((s+h)^α/n + (n-1)h^α/n)^{1/α})
    let direct = |lambda: f64, h: f64, n: u32, s: f64| {
        let _ = lambda;
        let a = 0.5;
        let n = n as f64;
        (h - ((s + h).powf(a) / n + (n - 1.0) / n * h.powf(a)).powf(1.0 / a)).exp()
    };
    let mut rng = Seed::new(13).rng();
    for _ in 0..10 {
        let n = rng.random_range(1..60u32);
        let s = rng.random_range(0.0..20.0);
        let h = rng.random_range(0.2..3.0);
        let fam = LaplaceFamily::TemperedStable { lambda: 1.0, alpha: 0.5, h };
        let got = gfun_eval(&fam, n, s).unwrap();
        assert!((got - direct(1.0, h, n, s)).abs() < 1e-13, "n={n} s={s} h={h}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn thinning_maps_fix_one_and_preserve_the_unit_interval(
        p in 0.01f64..0.99,
        kappa in 0.05f64..0.95,
        b in -0.95f64..0.95,
        z in 0.0f64..1.0,
    ) {
        let fams = [
            ThinningFamily::Bernoulli,
            ThinningFamily::Example1 { kappa, m: 1 },
            ThinningFamily::Example2 { b },
        ];
        for fam in fams {
            let one = fam.eval(p, c(1.0)).unwrap();
            prop_assert!((one - 1.0).norm() < 1e-14);
            let q = fam.eval(p, c(z)).unwrap();
            prop_assert!(q.im.abs() < 1e-12);
            prop_assert!(q.re >= -1e-15 && q.re <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn chebyshev_conjugation_holds(b in -0.9f64..0.9, p in 0.05f64..1.0, z in 0.0f64..0.999) {
        let fam = ThinningFamily::Example2 { b };
        let lhs = chebyshev_map(fam.eval(p, c(z)).unwrap(), b).unwrap();
        let rhs = chebyshev_t(p, chebyshev_map(c(z), b).unwrap());
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn complement_tracking_agrees_with_direct_evaluation(
        p in 0.05f64..0.95,
        kappa in 0.0f64..0.9,
        r in 0.0f64..0.95,
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        // away from z = 1 the complement-carrying path matches the raw formula
        let z = Complex64::from_polar(r, theta);
        let fam = ThinningFamily::Example1 { kappa, m: 1 };
        let raw = ((1.0 - p) + (p - kappa) * z) / ((1.0 - p * kappa) - kappa * (1.0 - p) * z);
        let got = fam.apply(p, ZPoint::new(z)).unwrap();
        prop_assert!((got.z - raw).norm() < 1e-13);
        prop_assert!((got.one_minus_z - (1.0 - raw)).norm() < 1e-13);
    }
}
