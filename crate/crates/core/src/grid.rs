//! Evaluation grids, residual reports and a one-dimensional minimizer.

use serde::{Deserialize, Serialize};

/// Description of a set of evaluation points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    /// `points` equally spaced values from `start` to `end` inclusive.
    Uniform { start: f64, end: f64, points: usize },
    /// `points` logarithmically spaced values from `start` to `end` inclusive.
    Log { start: f64, end: f64, points: usize },
    /// Coefficient indices `0..=n_max` read off a circle of the given radius.
    Coefficients { n_max: usize, radius: f64, transform_points: usize },
}

impl GridSpec {
    /// 2001 points on `[0, 1 - 1e-6]`, approaching z = 1 without touching it.
    pub fn default_z() -> Self {
        GridSpec::Uniform { start: 0.0, end: 1.0 - 1e-6, points: 2001 }
    }

    /// 200 log-spaced points on `[1e-3, 1e3]`.
    pub fn default_s() -> Self {
        GridSpec::Log { start: 1e-3, end: 1e3, points: 200 }
    }

    /// 400 log-spaced points on `[1e-4, 1e4]`, used for the limit-theorem sups.
    pub fn theorem_s() -> Self {
        GridSpec::Log { start: 1e-4, end: 1e4, points: 400 }
    }

    pub fn uniform(start: f64, end: f64, points: usize) -> Self {
        GridSpec::Uniform { start, end, points }
    }

    pub fn log(start: f64, end: f64, points: usize) -> Self {
        GridSpec::Log { start, end, points }
    }

    /// Same range with twice the density (2k - 1 points).
    pub fn refined(&self) -> Self {
        match *self {
            GridSpec::Uniform { start, end, points } => GridSpec::Uniform { start, end, points: 2 * points.max(1) - 1 },
            GridSpec::Log { start, end, points } => GridSpec::Log { start, end, points: 2 * points.max(1) - 1 },
            ref c @ GridSpec::Coefficients { .. } => c.clone(),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        match *self {
            GridSpec::Uniform { start, end, points } => spaced(points, |t| start + (end - start) * t),
            GridSpec::Log { start, end, points } => {
                let (a, b) = (start.ln(), end.ln());
                spaced(points, |t| (a + (b - a) * t).exp())
            }
            GridSpec::Coefficients { n_max, .. } => (0..=n_max).map(|k| k as f64).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            GridSpec::Uniform { points, .. } | GridSpec::Log { points, .. } => points,
            GridSpec::Coefficients { n_max, .. } => n_max + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn spaced(points: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![f(0.0)],
        _ => {
            let last = (points - 1) as f64;
            let mut v: Vec<f64> = (0..points).map(|i| f(i as f64 / last)).collect();
            // pin the endpoint exactly
            v[points - 1] = f(1.0);
            v
        }
    }
}

/// Sup-norm residual of an identity over a grid, with the point attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub sup_residual: f64,
    pub argmax_point: f64,
    pub grid: GridSpec,
}

impl ResidualReport {
    /// Folds `(point, residual)` pairs into a report. NaN residuals win the sup
    /// so that a broken evaluation can never pass silently.
    pub fn from_pairs(grid: GridSpec, pairs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut sup = 0.0_f64;
        let mut arg = f64::NAN;
        for (x, r) in pairs {
            let r = r.abs();
            if r.is_nan() {
                return ResidualReport { sup_residual: f64::NAN, argmax_point: x, grid };
            }
            if arg.is_nan() || r > sup {
                sup = r;
                arg = x;
            }
        }
        ResidualReport { sup_residual: sup, argmax_point: arg, grid }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.sup_residual <= tol
    }
}

/// Result of a golden-section search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
///
/// Stops when the bracket is narrower than `tol` or after `max_iter`
/// iterations. Ties keep the left (smaller) half of the bracket.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Minimum {
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut it = 0;
    while (hi - lo) > tol && it < max_iter {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
        it += 1;
    }
    let (x, value) = if fc <= fd { (c, fc) } else { (d, fd) };
    Minimum { x, value, iterations: it }
}
