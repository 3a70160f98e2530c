//! Residual checkers for the stability equations
//! `P(z) = P(Q_p(z))^n` (discrete) and `L(s) = L(-ln g_n(s))^n` (casual),
//! and for the semigroup structure of thinning families.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmath::ZPoint;
use crate::error::{Error, Result};
use crate::grid::{golden_section, GridSpec, ResidualReport};
use crate::transforms::{LaplaceFamily, PgfFamily, ThinningFamily};

/// Golden-section settings used when no closed form for p(n) is known.
pub const PN_SEARCH_TOL: f64 = 1e-10;
pub const PN_SEARCH_MAX_ITER: usize = 200;

/// `sup_z |P(z) - P(Q_p(z))^n|` over a real grid in `[0, 1]`.
pub fn discrete_stability_residual(
    family: &PgfFamily,
    thinning: &ThinningFamily,
    n: u32,
    p: f64,
    grid: &GridSpec,
) -> Result<ResidualReport> {
    family.validate()?;
    thinning.check(p)?;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let mut pairs = Vec::with_capacity(grid.len());
    for z in grid.points() {
        let pt = ZPoint::real(z);
        let lhs = family.eval_point(pt)?;
        let rhs = family.eval_point(thinning.apply(p, pt)?)?.powi(n as i32);
        pairs.push((z, (lhs - rhs).norm()));
    }
    Ok(ResidualReport::from_pairs(grid.clone(), pairs))
}

/// How a normalizing parameter was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PnMethod {
    Identity,
    ClosedForm,
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PnSolution {
    pub p: f64,
    pub residual: f64,
    pub method: PnMethod,
}

fn matched_pair(family: &PgfFamily, thinning: &ThinningFamily) -> bool {
    family.natural_thinning().as_ref() == Some(thinning)
}

/// Normalizing parameter `p(n)` for the pair `(family, thinning)`.
///
/// Matched pairs use the closed form `p(n) = n^{-1/index}` (α for the
/// Bernoulli case, γ for the Möbius and Chebyshev cases). Other pairs are
/// solved by golden-section search of the residual on the default grid.
pub fn solve_pn(family: &PgfFamily, thinning: &ThinningFamily, n: u32) -> Result<PnSolution> {
    family.validate()?;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if n == 1 {
        return Ok(PnSolution { p: 1.0, residual: 0.0, method: PnMethod::Identity });
    }
    let grid = GridSpec::default_z();
    if matched_pair(family, thinning) {
        let index = family.stability_index().expect("matched families carry an index");
        let p = (n as f64).powf(-1.0 / index);
        thinning.check(p).map_err(|e| match e {
            Error::Admissibility(msg) => Error::Admissibility(format!("p({n}) = {p:.6e} is not admissible: {msg}")),
            other => other,
        })?;
        let residual = discrete_stability_residual(family, thinning, n, p, &grid)?.sup_residual;
        return Ok(PnSolution { p, residual, method: PnMethod::ClosedForm });
    }
    let upper = thinning.p_upper();
    let hi = if upper < 1.0 { upper * (1.0 - 1e-12) } else { 1.0 };
    let coarse = GridSpec::uniform(0.0, 1.0 - 1e-6, 201);
    let objective = |p: f64| {
        discrete_stability_residual(family, thinning, n, p, &coarse).map(|r| r.sup_residual).unwrap_or(f64::INFINITY)
    };
    let m = golden_section(objective, 1e-12, hi, PN_SEARCH_TOL, PN_SEARCH_MAX_ITER);
    let residual = discrete_stability_residual(family, thinning, n, m.x, &grid)?.sup_residual;
    Ok(PnSolution { p: m.x, residual, method: PnMethod::Search })
}

/// `sup_s |L(s) - L(-ln g_n(s))^n|` over a grid of positive `s`.
pub fn casual_stability_residual(family: &LaplaceFamily, n: u32, grid: &GridSpec) -> Result<ResidualReport> {
    family.validate()?;
    if grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    let mut pairs = Vec::with_capacity(grid.len());
    for s in grid.points() {
        if !(s > 0.0) {
            return Err(Error::Domain(format!("grid points must be positive, got {s}")));
        }
        let lhs = family.laplace(s)?;
        let inner = family.laplace(family.neg_log_normalizer(n, s)?)?;
        pairs.push((s, lhs - inner.powi(n as i32)));
    }
    Ok(ResidualReport::from_pairs(grid.clone(), pairs))
}

/// `sup_z |Q_{p1}(Q_{p2}(z)) - Q_{p2}(Q_{p1}(z))|`.
pub fn commutativity_residual(thinning: &ThinningFamily, p1: f64, p2: f64, grid: &GridSpec) -> Result<ResidualReport> {
    thinning.check(p1)?;
    thinning.check(p2)?;
    let mut pairs = Vec::with_capacity(grid.len());
    for z in grid.points() {
        let pt = ZPoint::real(z);
        let a = thinning.apply(p1, thinning.apply(p2, pt)?)?;
        let b = thinning.apply(p2, thinning.apply(p1, pt)?)?;
        pairs.push((z, (a.z - b.z).norm()));
    }
    Ok(ResidualReport::from_pairs(grid.clone(), pairs))
}

/// Effective parameter of a composition `Q_{p1} ∘ Q_{p2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Composition {
    pub p_eff: f64,
    pub fit_residual: f64,
}

impl Composition {
    /// Whether the family is closed under this composition at tolerance `tol`.
    pub fn closes(&self, tol: f64) -> bool {
        self.fit_residual <= tol
    }
}

fn composition_distance(thinning: &ThinningFamily, targets: &[(ZPoint, Complex64)], p: f64) -> f64 {
    let mut sup = 0.0_f64;
    for (pt, target) in targets {
        match thinning.apply(p, *pt) {
            Ok(q) => sup = sup.max((q.z - target).norm()),
            Err(_) => return f64::INFINITY,
        }
    }
    sup
}

/// Finds `p_eff` minimizing `sup_z |Q_{p1}(Q_{p2}(z)) - Q_{p_eff}(z)|`.
///
/// Non-closure is reported through `fit_residual`, never as an error.
pub fn compose_thinning(thinning: &ThinningFamily, p1: f64, p2: f64, grid: &GridSpec) -> Result<Composition> {
    thinning.check(p1)?;
    thinning.check(p2)?;
    let mut targets = Vec::with_capacity(grid.len());
    for z in grid.points() {
        let pt = ZPoint::real(z);
        targets.push((pt, thinning.apply(p1, thinning.apply(p2, pt)?)?.z));
    }
    let upper = thinning.p_upper();
    let hi = if upper < 1.0 { upper * (1.0 - 1e-12) } else { 1.0 };
    let m = golden_section(|p| composition_distance(thinning, &targets, p), 0.0, hi, 1e-15, PN_SEARCH_MAX_ITER);
    let p_eff = m.x.max(f64::MIN_POSITIVE);
    Ok(Composition { p_eff, fit_residual: composition_distance(thinning, &targets, p_eff) })
}

/// Necessary conditions for `g_n` to be a Laplace transform, checked on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizerShape {
    pub at_zero: f64,
    pub decreasing: bool,
    pub convex: bool,
    pub log_convex: bool,
}

impl NormalizerShape {
    pub fn plausible(&self) -> bool {
        (self.at_zero - 1.0).abs() < 1e-15 && self.decreasing && self.convex && self.log_convex
    }
}

/// Checks `g_n(0) = 1` and monotonicity, convexity and log-convexity of
/// `g_n` on the grid via divided differences. Complete monotonicity is not
/// certified.
pub fn normalizer_shape(family: &LaplaceFamily, n: u32, grid: &GridSpec) -> Result<NormalizerShape> {
    let s = grid.points();
    let g: Vec<f64> = s.iter().map(|&x| family.normalizer(n, x)).collect::<Result<_>>()?;
    let lg: Vec<f64> = s.iter().map(|&x| family.neg_log_normalizer(n, x).map(|v| -v)).collect::<Result<_>>()?;
    let slope = |v: &[f64], i: usize| (v[i + 1] - v[i]) / (s[i + 1] - s[i]);
    let slack = 1e-12;
    let decreasing = (0..s.len() - 1).all(|i| g[i + 1] <= g[i]);
    let convex = (0..s.len().saturating_sub(2))
        .all(|i| slope(&g, i + 1) >= slope(&g, i) - slack * slope(&g, i).abs().max(1e-300));
    let log_convex = (0..s.len().saturating_sub(2))
        .all(|i| slope(&lg, i + 1) >= slope(&lg, i) - slack * slope(&lg, i).abs().max(1e-300));
    Ok(NormalizerShape { at_zero: family.normalizer(n, 0.0)?, decreasing, convex, log_convex })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_grid() -> GridSpec {
        GridSpec::default_z()
    }

    #[test]
    fn svh_bernoulli_identity() {
        let fam = PgfFamily::SvhStable { lambda: 1.0, alpha: 0.5 };
        let r = discrete_stability_residual(&fam, &ThinningFamily::Bernoulli, 4, 0.0625, &z_grid()).unwrap();
        assert!(r.sup_residual < 1e-12, "{r:?}");
    }

    #[test]
    fn example1_identity() {
        let fam = PgfFamily::Example1 { lambda: 1.0, gamma: 0.5, kappa: 0.5, m: 1 };
        let th = ThinningFamily::Example1 { kappa: 0.5, m: 1 };
        let r = discrete_stability_residual(&fam, &th, 4, 1.0 / 16.0, &z_grid()).unwrap();
        assert!(r.sup_residual < 1e-12);
    }

    #[test]
    fn identity_thinning_gives_zero() {
        let fam = PgfFamily::SvhStable { lambda: 1.7, alpha: 0.8 };
        let r = discrete_stability_residual(&fam, &ThinningFamily::Bernoulli, 1, 1.0, &z_grid()).unwrap();
        assert_eq!(r.sup_residual, 0.0);
    }

    #[test]
    fn example2_identity() {
        let fam = PgfFamily::Example2 { lambda: 1.0, gamma: 1.0, b: 0.2 };
        let th = ThinningFamily::Example2 { b: 0.2 };
        let r = discrete_stability_residual(&fam, &th, 3, 1.0 / 3.0, &z_grid()).unwrap();
        assert!(r.sup_residual < 1e-10);
    }

    #[test]
    fn closed_form_pn() {
        let svh = PgfFamily::SvhStable { lambda: 1.0, alpha: 0.5 };
        let s = solve_pn(&svh, &ThinningFamily::Bernoulli, 9).unwrap();
        assert!((s.p - 1.0 / 81.0).abs() < 1e-15);
        assert_eq!(s.method, PnMethod::ClosedForm);
        let e1 = PgfFamily::Example1 { lambda: 1.0, gamma: 1.0, kappa: 0.35, m: 1 };
        let s = solve_pn(&e1, &ThinningFamily::Example1 { kappa: 0.35, m: 1 }, 5).unwrap();
        assert!((s.p - 0.2).abs() < 1e-15);
        let s = solve_pn(&svh, &ThinningFamily::Bernoulli, 1).unwrap();
        assert_eq!(s.p, 1.0);
    }

    #[test]
    fn inadmissible_pn_is_reported() {
        let e1 = PgfFamily::Example1 { lambda: 1.0, gamma: 1.0, kappa: 0.3, m: 2 };
        let th = ThinningFamily::Example1 { kappa: 0.3, m: 2 };
        assert!(matches!(solve_pn(&e1, &th, 3), Err(Error::Admissibility(_))));
        assert!(solve_pn(&e1, &th, 4).is_ok());
    }

    #[test]
    fn search_recovers_closed_form() {
        // Example 1 with κ = 0 is the Bernoulli thinning, so the unmatched
        // pair (SvH, Example1Thin{0,1}) goes through the search path.
        let svh = PgfFamily::SvhStable { lambda: 1.0, alpha: 0.7 };
        let th = ThinningFamily::Example1 { kappa: 0.0, m: 1 };
        let s = solve_pn(&svh, &th, 3).unwrap();
        assert_eq!(s.method, PnMethod::Search);
        assert!((s.p - 3f64.powf(-1.0 / 0.7)).abs() < 1e-8, "{s:?}");
        assert!(s.residual < 1e-8);
    }

    #[test]
    fn casual_gamma_and_tempered() {
        let g = LaplaceFamily::Gamma { b: 1.0, shape: 2.0 };
        assert!(casual_stability_residual(&g, 7, &GridSpec::default_s()).unwrap().sup_residual < 1e-12);
        let t = LaplaceFamily::TemperedStable { lambda: 1.0, alpha: 0.5, h: 1.0 };
        assert!(casual_stability_residual(&t, 5, &GridSpec::default_s()).unwrap().sup_residual < 1e-12);
        for f in [g, t] {
            assert!(casual_stability_residual(&f, 1, &GridSpec::default_s()).unwrap().sup_residual < 1e-14);
        }
    }

    #[test]
    fn commutativity_examples() {
        let g = GridSpec::uniform(0.0, 1.0, 201);
        let b = commutativity_residual(&ThinningFamily::Bernoulli, 0.3, 0.8, &g).unwrap();
        assert!(b.sup_residual < 1e-14);
        let e1 = commutativity_residual(&ThinningFamily::Example1 { kappa: 0.5, m: 1 }, 0.3, 0.7, &g).unwrap();
        assert!(e1.sup_residual < 1e-12);
        let same = commutativity_residual(&ThinningFamily::Example2 { b: 0.1 }, 0.4, 0.4, &g).unwrap();
        assert_eq!(same.sup_residual, 0.0);
    }

    #[test]
    fn composition_laws() {
        let g = GridSpec::uniform(0.0, 1.0, 101);
        let c = compose_thinning(&ThinningFamily::Bernoulli, 0.3, 0.6, &g).unwrap();
        assert!((c.p_eff - 0.18).abs() < 1e-12);
        assert!(c.fit_residual < 1e-12);
        let c2 = compose_thinning(&ThinningFamily::Example2 { b: -0.4 }, 0.5, 0.7, &g).unwrap();
        assert!((c2.p_eff - 0.35).abs() < 1e-9, "{c2:?}");
        assert!(c2.fit_residual < 1e-10);
        let id = compose_thinning(&ThinningFamily::Example1 { kappa: 0.2, m: 1 }, 0.45, 1.0, &g).unwrap();
        assert!((id.p_eff - 0.45).abs() < 1e-9);
    }

    #[test]
    fn normalizer_shapes() {
        let g = GridSpec::log(1e-3, 1e2, 120);
        for fam in [
            LaplaceFamily::Gamma { b: 1.0, shape: 2.0 },
            LaplaceFamily::TemperedStable { lambda: 1.0, alpha: 0.5, h: 1.0 },
            LaplaceFamily::TemperedStable { lambda: 0.5, alpha: 1.0 / 3.0, h: 2.0 },
        ] {
            for n in [2, 5, 20] {
                let sh = normalizer_shape(&fam, n, &g).unwrap();
                assert!(sh.plausible(), "{fam:?} n={n} {sh:?}");
            }
        }
    }
}
