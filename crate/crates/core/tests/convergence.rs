use casual_stable::convergence::*;
use casual_stable::{GridSpec, LaplaceFamily};

fn gamma() -> LaplaceFamily {
    LaplaceFamily::Gamma { b: 1.0, shape: 2.0 }
}

#[test]
fn normalized_sum_matches_hand_derivation() {
    // exponential mean 2 vs Gamma(b=1, γ=2) at s = 1: x_n = (2^{1/n} - 1)
    let fam = gamma();
    let h = mean_matched_exponential(&fam).unwrap();
    for n in [1u32, 3, 10, 100] {
        let x = 2f64.powf(1.0 / n as f64) - 1.0;
        let expect = (1.0 / (1.0 + 2.0 * x)).powi(n as i32);
        let got = normalized_sum_transform(h, &fam, n, 1.0).unwrap();
        assert!((got - expect).abs() < 1e-13, "n={n}");
    }
}

#[test]
fn condition_a_flags_first_order_mismatch() {
    let fam = gamma();
    let h = exponential_transform(3.0);
    let narrow = condition_a(h, &fam, 2.0, &GridSpec::log(1e-2, 1e2, 200)).unwrap();
    let wide = condition_a(h, &fam, 2.0, &GridSpec::log(1e-4, 1e2, 300)).unwrap();
    assert!(wide.sup > 10.0 * narrow.sup);
    assert!(wide.divergent());
    let matched = condition_a(mean_matched_exponential(&fam).unwrap(), &fam, 2.0, &GridSpec::theorem_s()).unwrap();
    assert!(!matched.divergent());
}

#[test]
fn condition_b_closed_form() {
    let fam = LaplaceFamily::Gamma { b: 0.5, shape: 1.0 };
    let grid = GridSpec::default_s();
    let ns = [2u32, 4, 8, 16];
    let vals = condition_b(&fam, 2.0, &ns, &grid).unwrap();
    for (&n, &v) in ns.iter().zip(&vals) {
        assert!(v <= 1.0 / n as f64 + 1e-12);
        let closed = grid
            .points()
            .into_iter()
            .map(|s: f64| n as f64 * (s * 0.5).powi(2) / ((1.0 + 0.5 * s).powi(n as i32) - 1.0).powi(2))
            .fold(0.0, f64::max);
        assert!((v - closed).abs() < 1e-12 * closed.max(1.0), "n={n}");
    }
    assert!(vals.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn inverse_round_trips() {
    let fams = [gamma(), LaplaceFamily::TemperedStable { lambda: 1.0, alpha: 0.5, h: 2.0 }];
    for fam in fams {
        for n in [1u32, 2, 7, 30, 100] {
            for s in [1e-3, 0.5, 3.0] {
                let x = g_inverse(&fam, n, s).unwrap();
                let back = fam.neg_log_normalizer(n, x).unwrap();
                assert!((back - s).abs() < 1e-9 * s, "{fam:?} n={n} s={s}");
            }
        }
    }
}

#[test]
fn curve_settles_and_is_grid_stable() {
    let fam = gamma();
    let h = mean_matched_exponential(&fam).unwrap();
    let ns = [1u32, 2, 4, 8, 16, 32, 64];
    let grid = GridSpec::theorem_s();
    let curve = convergence_curve(h, &fam, 2.0, &ns, &grid).unwrap();
    assert!(curve.settles(4));
    assert!(curve.warnings.is_empty(), "{:?}", curve.warnings);
    let fine = convergence_curve(h, &fam, 2.0, &ns, &grid.refined()).unwrap();
    for (a, b) in curve.points.iter().zip(&fine.points) {
        assert!((a.sup_distance - b.sup_distance).abs() < 1e-9, "n={}", a.n);
    }
}

#[test]
fn target_is_a_fixed_point() {
    let fam = LaplaceFamily::TemperedStable { lambda: 1.0, alpha: 0.5, h: 1.0 };
    let h = |s: f64| fam.laplace(s).unwrap();
    let curve = convergence_curve(h, &fam, 1.0, &[1, 5, 50], &GridSpec::default_s()).unwrap();
    assert!(curve.points.iter().all(|p| p.sup_distance < 1e-12));
    assert!(curve.settles(3));
}
