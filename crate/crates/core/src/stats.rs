//! Empirical summaries used to compare samplers against transforms.

use serde::{Deserialize, Serialize};

use crate::extract::PmfTable;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut n, mut mean, mut m2) = (0.0, 0.0, 0.0);
        for x in values {
            n += 1.0;
            let d = x - mean;
            mean += d / n;
            m2 += d * (x - mean);
        }
        let var = if n > 1.0 { m2 / (n - 1.0) } else { 0.0 };
        Estimate { mean, std_error: (var / n).sqrt() }
    }

    /// Distance to `target` in standard errors (0 when both coincide exactly).
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Empirical p.g.f. `mean(z^X)` at a real `z ∈ [0, 1]`.
pub fn empirical_pgf(samples: &[u64], z: f64) -> Estimate {
    Estimate::from_values(samples.iter().map(|&x| z.powf(x as f64)))
}

/// Empirical Laplace transform `mean(e^{-sX})`.
pub fn empirical_laplace(samples: &[f64], s: f64) -> Estimate {
    Estimate::from_values(samples.iter().map(|&x| (-s * x).exp()))
}

/// Relative frequencies of atoms `0..=k_max`, plus the overflow share.
pub fn histogram(samples: &[u64], k_max: usize) -> (Vec<f64>, f64) {
    let mut counts = vec![0u64; k_max + 1];
    let mut over = 0u64;
    for &x in samples {
        match usize::try_from(x) {
            Ok(i) if i <= k_max => counts[i] += 1,
            _ => over += 1,
        }
    }
    let n = samples.len().max(1) as f64;
    (counts.into_iter().map(|c| c as f64 / n).collect(), over as f64 / n)
}

/// Total variation distance between the empirical law of `samples` and
/// `table` on atoms `0..=k_max`, with everything above `k_max` pooled into
/// one tail cell.
pub fn tv_distance(samples: &[u64], table: &PmfTable, k_max: usize) -> f64 {
    let (freq, over) = histogram(samples, k_max);
    let mut l1 = 0.0;
    let mut listed = 0.0;
    for (k, f) in freq.iter().enumerate() {
        let m = table.mass(k);
        listed += m;
        l1 += (f - m).abs();
    }
    l1 += (over - (1.0 - listed)).abs();
    0.5 * l1
}

/// Two-sample Kolmogorov–Smirnov statistic for integer samples.
pub fn ks_statistic(a: &[u64], b: &[u64]) -> f64 {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_unstable();
    y.sort_unstable();
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0_f64;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] == v {
            i += 1;
        }
        while j < y.len() && y[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Whether the two-sample KS test rejects equality at level `alpha`, using
/// the asymptotic critical value `sqrt(-ln(α/2)/2) sqrt((n+m)/(nm))`.
/// Conservative for discrete laws.
pub fn ks_rejects(a: &[u64], b: &[u64], alpha: f64) -> bool {
    let (n, m) = (a.len() as f64, b.len() as f64);
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    ks_statistic(a, b) > c * ((n + m) / (n * m)).sqrt()
}
