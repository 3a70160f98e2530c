use casual_stable::samplers::Seed;
use casual_stable::stability::{
    casual_stability_residual, commutativity_residual, compose_thinning, discrete_stability_residual, solve_pn,
};
use casual_stable::{GridSpec, LaplaceFamily, PgfFamily, ThinningFamily};
use proptest::prelude::*;
use rand::Rng;

fn pairs() -> Vec<PgfFamily> {
    vec![
        PgfFamily::SvhStable { lambda: 1.0, alpha: 0.6 },
        PgfFamily::Example1 { lambda: 0.8, gamma: 0.9, kappa: 0.4, m: 1 },
        PgfFamily::Example1 { lambda: 1.0, gamma: 0.4, kappa: 0.7, m: 2 },
        PgfFamily::Example2 { lambda: 1.2, gamma: 1.5, b: -0.3 },
        PgfFamily::FieldCitations { lambda: 1.0, p: 0.5, q: 0.5 },
    ]
}

#[test]
fn solved_parameters_close_the_equation() {
    let grid = GridSpec::default_z();
    for fam in pairs() {
        let th = fam.natural_thinning().unwrap();
        for n in [2, 3, 5, 10, 50] {
            match solve_pn(&fam, &th, n) {
                Ok(sol) => {
                    let r = discrete_stability_residual(&fam, &th, n, sol.p, &grid).unwrap();
                    assert!(r.sup_residual < 1e-10, "{fam:?} n={n} {r:?}");
                }
                Err(casual_stable::Error::Admissibility(_)) => {
                    // p(n) = n^{-1/γ} ≥ κ is only possible for m > 1
                    assert!(matches!(th, ThinningFamily::Example1 { m, .. } if m > 1));
                }
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn residual_is_stable_under_grid_refinement() {
    let grid = GridSpec::default_z();
    let fine = grid.refined();
    for fam in pairs() {
        let th = fam.natural_thinning().unwrap();
        let p = solve_pn(&fam, &th, 10).map(|s| s.p).unwrap_or(0.1f64.min(th.p_upper() / 2.0));
        let a = discrete_stability_residual(&fam, &th, 10, p, &grid).unwrap().sup_residual;
        let b = discrete_stability_residual(&fam, &th, 10, p, &fine).unwrap().sup_residual;
        assert!((a - b).abs() < 1e-10, "{fam:?}: {a} vs {b}");
    }
}

#[test]
fn perturbed_parameter_is_detected() {
    let fam = PgfFamily::SvhStable { lambda: 1.0, alpha: 0.5 };
    let p = 0.01;
    let exact = discrete_stability_residual(&fam, &ThinningFamily::Bernoulli, 10, p, &GridSpec::default_z()).unwrap();
    // oracle for the perturbed residual: sup_z |e^{-(1-z)^α}| |1 - e^{-(1.01^α - 1)(1-z)^α}|
    let oracle = GridSpec::default_z()
        .points()
        .into_iter()
        .map(|z| {
            let u = (1.0 - z).sqrt();
            (-u).exp() * (1.0 - (-(1.01f64.sqrt() - 1.0) * u).exp())
        })
        .fold(0.0, f64::max);
    let off =
        discrete_stability_residual(&fam, &ThinningFamily::Bernoulli, 10, 1.01 * p, &GridSpec::default_z()).unwrap();
    assert!(exact.sup_residual < 1e-13);
    assert!(off.sup_residual > 1e-4);
    assert!((off.sup_residual - oracle).abs() < 1e-12);
}

#[test]
fn gamma_casual_stability_uniform_in_n() {
    let grid = GridSpec::log(1e-3, 1e3, 200);
    let fam = LaplaceFamily::Gamma { b: 0.7, shape: 3.0 };
    for n in 1..=100 {
        assert!(casual_stability_residual(&fam, n, &grid).unwrap().sup_residual < 1e-12);
    }
}

#[test]
fn wrong_normalizer_fails_casual_check() {
    // the Gamma normalizer does not stabilize a tempered stable law
    let grid = GridSpec::default_s();
    let g = LaplaceFamily::Gamma { b: 1.0, shape: 1.0 };
    let t = LaplaceFamily::TemperedStable { lambda: 1.0, alpha: 0.5, h: 1.0 };
    let worst = grid
        .points()
        .into_iter()
        .map(|s| {
            let x = g.neg_log_normalizer(4, s).unwrap();
            (t.laplace(s).unwrap() - t.laplace(x).unwrap().powi(4)).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst > 1e-3);
}

#[test]
fn random_commuting_pairs() {
    let grid = GridSpec::uniform(0.0, 1.0, 401);
    let mut rng = Seed::new(77).rng();
    for fam in [ThinningFamily::Example1 { kappa: 0.5, m: 3 }, ThinningFamily::Example2 { b: 0.8 }] {
        for _ in 0..10 {
            let p1 = rng.random_range(0.01..fam.p_upper());
            let p2 = rng.random_range(0.01..fam.p_upper());
            assert!(commutativity_residual(&fam, p1, p2, &grid).unwrap().sup_residual < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_multiplies_parameters(p1 in 0.05f64..0.95, p2 in 0.05f64..0.95, kappa in 0.0f64..0.9) {
        let grid = GridSpec::uniform(0.0, 1.0, 101);
        for fam in [ThinningFamily::Bernoulli, ThinningFamily::Example1 { kappa, m: 1 }, ThinningFamily::Example2 { b: kappa - 0.45 }] {
            let c = compose_thinning(&fam, p1, p2, &grid).unwrap();
            prop_assert!((c.p_eff - p1 * p2).abs() < 1e-9, "{:?} {:?}", fam, c);
            prop_assert!(c.fit_residual < 1e-10);
        }
    }
}
