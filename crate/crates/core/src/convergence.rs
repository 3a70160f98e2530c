//! Transform-domain harness for the limit theorem: a sum of `n` i.i.d.
//! `g_n`-normalized variables with Laplace transform `h` converges to the
//! casual stable law `L` when
//!
//! * (a) `sup_s |h(s) - L(s)| / s^a < ∞`, and
//! * (b) `sup_s n s^a / g_n^{-1}(e^{-s})^a → 0`.
//!
//! Sups over `s > 0` are taken on log grids; the smallest-decade trend is
//! reported so that a sup escaping to infinity is visible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{golden_section, GridSpec};
use crate::transforms::LaplaceFamily;

/// Laplace transform of the normalized sum: `h(-ln g_n(s))^n`.
pub fn normalized_sum_transform(h: impl Fn(f64) -> f64, family: &LaplaceFamily, n: u32, s: f64) -> Result<f64> {
    let x = family.neg_log_normalizer(n, s)?;
    Ok(h(x).powi(n as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionA {
    pub sup: f64,
    pub argmax: f64,
    /// Ratio of the weighted gap at the smallest grid point to its value one
    /// decade higher. Stays near 1 when the condition holds and grows like
    /// `10^{a - k}` when `|h - L|` only vanishes to order `k < a`.
    pub edge_growth: f64,
}

impl ConditionA {
    pub fn divergent(&self) -> bool {
        !self.sup.is_finite() || self.edge_growth > 3.0
    }
}

/// `sup_s |h(s) - L(s)| / s^a` over the grid, with its small-s trend.
pub fn condition_a(h: impl Fn(f64) -> f64, family: &LaplaceFamily, a: f64, grid: &GridSpec) -> Result<ConditionA> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("a must be positive, got {a}")));
    }
    let pts = grid.points();
    if pts.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    let weighted = |s: f64| -> Result<f64> { Ok((h(s) - family.laplace(s)?).abs() / s.powf(a)) };
    let mut sup = 0.0_f64;
    let mut argmax = pts[0];
    for &s in &pts {
        let v = weighted(s)?;
        if v > sup || v.is_nan() {
            sup = v;
            argmax = s;
        }
    }
    let s0 = pts[0];
    let base = weighted(10.0 * s0)?;
    let edge = weighted(s0)?;
    let edge_growth = if base == 0.0 {
        if edge == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        edge / base
    };
    Ok(ConditionA { sup, argmax, edge_growth })
}

/// `g_n^{-1}(e^{-s})`: the `x` with `g_n(x) = e^{-s}`.
///
/// Gamma uses the closed form `((1+bs)^n - 1)/b`, summed as
/// `s Σ_{j<n} (1+bs)^j`. Tempered stable is inverted by bisection on
/// `-ln g_n(x) = s` to relative tolerance 1e-12.
pub fn g_inverse(family: &LaplaceFamily, n: u32, s: f64) -> Result<f64> {
    family.validate()?;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if !(s > 0.0) {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    match *family {
        LaplaceFamily::Gamma { b, .. } => {
            let r = 1.0 + b * s;
            let mut acc = 0.0;
            let mut pow = 1.0;
            for _ in 0..n {
                acc += pow;
                pow *= r;
            }
            Ok(s * acc)
        }
        LaplaceFamily::TemperedStable { .. } => bisect_inverse(family, n, s),
    }
}

fn bisect_inverse(family: &LaplaceFamily, n: u32, s: f64) -> Result<f64> {
    let f = |x: f64| family.neg_log_normalizer(n, x).map(|v| v - s);
    let mut lo = 0.0;
    let mut hi = s.max(1e-300);
    let mut expand = 0;
    while f(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        expand += 1;
        if expand > 2000 || !hi.is_finite() {
            return Err(Error::Inversion { lo, hi });
        }
    }
    for _ in 0..400 {
        if hi - lo <= 1e-12 * hi {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        let v = f(mid)?;
        if v.is_nan() {
            return Err(Error::Inversion { lo, hi });
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Inversion { lo, hi })
}

/// `sup_s n s^a / g_n^{-1}(e^{-s})^a` for each `n` in `n_list`.
pub fn condition_b(family: &LaplaceFamily, a: f64, n_list: &[u32], grid: &GridSpec) -> Result<Vec<f64>> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("a must be positive, got {a}")));
    }
    let pts = grid.points();
    n_list
        .iter()
        .map(|&n| {
            let mut sup = 0.0_f64;
            let mut prev = 0.0;
            for &s in &pts {
                let x = g_inverse(family, n, s)?;
                if x < prev {
                    return Err(Error::Inversion { lo: prev, hi: x });
                }
                prev = x;
                sup = sup.max(n as f64 * (s / x).powf(a));
            }
            Ok(sup)
        })
        .collect()
}

/// One point of a convergence curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: u32,
    pub condition_b: f64,
    pub sup_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCurve {
    pub condition_a: ConditionA,
    pub points: Vec<CurvePoint>,
    /// Human-readable notes when a theorem condition looks violated.
    pub warnings: Vec<String>,
}

impl ConvergenceCurve {
    /// Whether the sup distance decreases strictly over the last `k` points,
    /// or sits at the fixed point (every distance below 1e-12).
    pub fn settles(&self, k: usize) -> bool {
        if self.points.iter().all(|p| p.sup_distance < 1e-12) {
            return true;
        }
        let tail = &self.points[self.points.len().saturating_sub(k)..];
        tail.windows(2).all(|w| w[1].sup_distance < w[0].sup_distance)
    }
}

/// `sup_s |h(-ln g_n(s))^n - L(s)|` for each `n`, after checking both
/// theorem conditions for exponent `a`.
pub fn convergence_curve(
    h: impl Fn(f64) -> f64,
    family: &LaplaceFamily,
    a: f64,
    n_list: &[u32],
    grid: &GridSpec,
) -> Result<ConvergenceCurve> {
    let ca = condition_a(&h, family, a, grid)?;
    let cb = condition_b(family, a, n_list, grid)?;
    let mut warnings = Vec::new();
    if ca.divergent() {
        warnings.push(format!(
            "condition (a) looks divergent: weighted gap grows by {:.3e} over the smallest decade",
            ca.edge_growth
        ));
    }
    if cb.windows(2).any(|w| w[1] >= w[0]) {
        warnings.push("condition (b) values are not decreasing in n".into());
    }
    let pts = grid.points();
    let mut points = Vec::with_capacity(n_list.len());
    for (&n, &b) in n_list.iter().zip(&cb) {
        let dist =
            |s: f64| -> Result<f64> { Ok((normalized_sum_transform(&h, family, n, s)? - family.laplace(s)?).abs()) };
        let sup = polished_sup(dist, &pts)?;
        points.push(CurvePoint { n, condition_b: b, sup_distance: sup });
    }
    Ok(ConvergenceCurve { condition_a: ca, points, warnings })
}

/// Grid maximum of `f`, refined by a golden-section search in `ln s`
/// between the neighbours of the best grid point. The refined value never
/// falls below the grid value.
fn polished_sup(f: impl Fn(f64) -> Result<f64>, pts: &[f64]) -> Result<f64> {
    let vals = pts.iter().map(|&s| f(s)).collect::<Result<Vec<_>>>()?;
    let Some((i, &best)) = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) else {
        return Ok(0.0);
    };
    if i == 0 || i + 1 == pts.len() {
        return Ok(best);
    }
    let (lo, hi) = (pts[i - 1].ln(), pts[i + 1].ln());
    let m = golden_section(|t| -f(t.exp()).unwrap_or(f64::NAN), lo, hi, 1e-12 * (hi - lo).max(1.0), 200);
    Ok(best.max(-m.value))
}

/// Exponential transform `1/(1 + μ s)` with mean `μ`.
pub fn exponential_transform(mean: f64) -> impl Fn(f64) -> f64 + Copy {
    move |s| 1.0 / (1.0 + mean * s)
}

/// Exponential candidate whose mean matches the Gamma target (`b γ`).
pub fn mean_matched_exponential(family: &LaplaceFamily) -> Result<impl Fn(f64) -> f64 + Copy> {
    match *family {
        LaplaceFamily::Gamma { b, shape } => Ok(exponential_transform(b * shape)),
        _ => Err(Error::Unsupported("mean-matched exponential is defined for Gamma targets".into())),
    }
}
