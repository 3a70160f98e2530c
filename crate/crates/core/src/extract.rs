//! Probability mass extraction from a p.g.f. by discrete Fourier inversion
//! on a circle inside the unit disk.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, ResidualReport};
use crate::transforms::{PgfFamily, ThinningFamily};

/// Default threshold below which a negative coefficient counts as noise.
pub const DEFAULT_TOL_NEG: f64 = 1e-9;

/// Truncated probability mass table `k -> mass` for `k = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfTable {
    /// `masses[k]` is the mass at atom `k`.
    pub masses: Vec<f64>,
    /// `1 - Σ masses`, clamped to `[0, 1]`.
    pub mass_deficit: f64,
    /// Lattice span of the support.
    pub support_step: u32,
    /// Certified bound on the absolute error of every listed mass.
    pub tol_neg: f64,
}

impl PmfTable {
    pub fn n_max(&self) -> usize {
        self.masses.len().saturating_sub(1)
    }

    pub fn atoms(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.masses.iter().enumerate().map(|(k, &m)| (k as u64, m))
    }

    pub fn mass(&self, k: usize) -> f64 {
        self.masses.get(k).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Most negative mass and its atom; `(0.0, None)` when none is negative.
    pub fn most_negative(&self) -> (f64, Option<usize>) {
        let mut best = (0.0, None);
        for (k, &m) in self.masses.iter().enumerate() {
            if m < best.0 {
                best = (m, Some(k));
            }
        }
        best
    }
}

/// Settings for [`extract_pmf`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractOptions {
    pub n_max: usize,
    pub radius: f64,
    /// Transform size; at least `4 * n_max`.
    pub points: usize,
    /// Largest certified error bound accepted before a precision error.
    pub tol: f64,
    pub support_step: u32,
}

impl ExtractOptions {
    /// Defaults: radius 0.9, `max(4096, 8 n_max)` points, tolerance 1e-9.
    pub fn new(n_max: usize) -> Self {
        ExtractOptions { n_max, radius: 0.9, points: 4096.max(8 * n_max), tol: DEFAULT_TOL_NEG, support_step: 1 }
    }

    /// Like [`ExtractOptions::new`] but with a radius large enough that the
    /// `r^{-n_max}` amplification of round-off stays near 1e4 (capped at 0.95).
    pub fn for_degree(n_max: usize) -> Self {
        let r = 10f64.powf(-4.0 / n_max.max(1) as f64).clamp(0.9, 0.95);
        ExtractOptions { radius: r, ..Self::new(n_max) }
    }

    pub fn radius(mut self, r: f64) -> Self {
        self.radius = r;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn support_step(mut self, m: u32) -> Self {
        self.support_step = m;
        self
    }
}

/// Extracts the first `n_max + 1` power-series coefficients of `pgf`.
///
/// The coefficients are read from an N-point DFT on the circle `|z| = r`.
/// The reported `tol_neg` adds two terms: the aliasing bound obtained from a
/// Cauchy estimate on the larger circle `ρ = (1 + r)/2`,
/// `M_ρ ρ^{-n_max} (r/ρ)^N / (1 - (r/ρ)^N)`, and the transform round-off
/// `ε log2(N) M_r r^{-n_max}`.
pub fn extract_pmf<F>(pgf: F, opts: &ExtractOptions) -> Result<PmfTable>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let ExtractOptions { n_max, radius, points, tol, support_step } = *opts;
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Domain(format!("radius must lie in (0, 1), got {radius}")));
    }
    let n = points.max(4 * n_max);

    let mut buf = Vec::with_capacity(n);
    let mut max_r = 0.0_f64;
    for j in 0..n {
        let z = Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64);
        let v = pgf(z)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Evaluation(format!("non-finite p.g.f. value at z = {z}")));
        }
        max_r = max_r.max(v.norm());
        buf.push(v);
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let mut masses = Vec::with_capacity(n_max + 1);
    let inv_r = 1.0 / radius;
    let mut scale = 1.0 / n as f64;
    for c in buf.iter().take(n_max + 1) {
        masses.push(c.re * scale);
        scale *= inv_r;
    }

    let outer = 0.5 * (1.0 + radius);
    let probe = 1024;
    let mut max_outer = 0.0_f64;
    for j in 0..probe {
        let z = Complex64::from_polar(outer, 2.0 * PI * j as f64 / probe as f64);
        max_outer = max_outer.max(pgf(z)?.norm());
    }
    let ratio_n = (radius / outer).powi(n as i32);
    let amplify_outer = outer.powi(-(n_max as i32));
    let aliasing = max_outer * amplify_outer * ratio_n / (1.0 - ratio_n);
    let roundoff = f64::EPSILON * (n as f64).log2() * max_r * radius.powi(-(n_max as i32));
    let bound = aliasing + roundoff;
    if !(bound <= tol) {
        return Err(Error::Precision { bound, tol });
    }

    let total: f64 = masses.iter().sum();
    Ok(PmfTable { masses, mass_deficit: (1.0 - total).clamp(0.0, 1.0), support_step, tol_neg: bound })
}

impl PgfFamily {
    /// Probability mass table for `k = 0..=n_max` with default options.
    pub fn pmf(&self, n_max: usize) -> Result<PmfTable> {
        self.pmf_with(&ExtractOptions::new(n_max))
    }

    pub fn pmf_with(&self, opts: &ExtractOptions) -> Result<PmfTable> {
        self.validate()?;
        let opts = opts.support_step(self.support_step());
        extract_pmf(|z| self.eval(z), &opts)
    }
}

impl ThinningFamily {
    /// Probability mass table of the thinning law `Q_p`.
    pub fn pmf(&self, p: f64, opts: &ExtractOptions) -> Result<PmfTable> {
        self.check(p)?;
        let step = match *self {
            ThinningFamily::Example1 { m, .. } => m,
            _ => 1,
        };
        extract_pmf(|z| self.eval(p, z), &opts.support_step(step))
    }
}

/// Radial limit `lim_{r↑1} f(r)` estimated from `f(1 - 10^{-k})`, `k = 1..=8`,
/// by two passes of Aitken's Δ² extrapolation.
pub fn radial_limit(f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut seq = Vec::with_capacity(8);
    for k in 1..=8 {
        seq.push(f(1.0 - 10f64.powi(-k))?);
    }
    for _ in 0..2 {
        if seq.len() < 3 {
            break;
        }
        seq = aitken(&seq);
    }
    Ok(*seq.last().expect("nonempty"))
}

fn aitken(s: &[f64]) -> Vec<f64> {
    s.windows(3)
        .map(|w| {
            let d1 = w[1] - w[0];
            let d2 = w[2] - w[1];
            let den = d2 - d1;
            if den == 0.0 {
                w[2]
            } else {
                w[2] - d2 * d2 / den
            }
        })
        .collect()
}

/// Outcome of a numerical p.g.f. validity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PgfValidation {
    /// `sup_residual` is the magnitude of the most negative coefficient.
    pub report: ResidualReport,
    pub min_coefficient: f64,
    /// `|P(1⁻) - 1|` from the radial limit.
    pub normalization_defect: f64,
    /// Certified extraction error bound.
    pub error_bound: f64,
    pub mass_deficit: f64,
}

impl PgfValidation {
    pub fn passes(&self, tol_neg: f64) -> bool {
        self.report.passes(tol_neg)
    }
}

/// Extracts coefficients up to `n_max` and reports the most negative one,
/// together with the normalization defect along the real radius.
pub fn validate_pgf<F>(pgf: F, n_max: usize, tol: f64) -> Result<PgfValidation>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    validate_pgf_with(pgf, &ExtractOptions::for_degree(n_max).tol(tol))
}

/// [`validate_pgf`] with explicit extraction options.
pub fn validate_pgf_with<F>(pgf: F, opts: &ExtractOptions) -> Result<PgfValidation>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let n_max = opts.n_max;
    let table = extract_pmf(&pgf, opts)?;
    let (min_coef, arg) = table.most_negative();
    let limit = radial_limit(|r| Ok(pgf(Complex64::new(r, 0.0))?.re))?;
    let grid = GridSpec::Coefficients { n_max, radius: opts.radius, transform_points: opts.points };
    Ok(PgfValidation {
        report: ResidualReport { sup_residual: (-min_coef).max(0.0), argmax_point: arg.unwrap_or(0) as f64, grid },
        min_coefficient: table.masses.iter().cloned().fold(f64::INFINITY, f64::min),
        normalization_defect: (limit - 1.0).abs(),
        error_bound: table.tol_neg,
        mass_deficit: table.mass_deficit,
    })
}

/// [`validate_pgf`] for a member `Q_p` of a thinning family.
pub fn validate_thinning(family: &ThinningFamily, p: f64, n_max: usize, tol: f64) -> Result<PgfValidation> {
    family.check(p)?;
    validate_pgf(|z| family.eval(p, z), n_max, tol)
}
