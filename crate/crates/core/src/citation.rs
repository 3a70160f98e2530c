//! Publication/citation generative model.
//!
//! An author publishes a Sibuya(p) number of citation-bearing units, each
//! contributing a Geometric(q) count, so the author's total has p.g.f.
//! `1 - (1 - qz/(1-(1-q)z))^p`. A field holds Poisson(λ) authors and its
//! total citation count has p.g.f. `exp{-λ((1-z)/(1-(1-q)z))^p}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::samplers::{sample_geometric_sum, sample_poisson, sample_sibuya, Seed};

/// Minimum sample size accepted by [`tail_exponent`].
pub const TAIL_MIN_SAMPLES: usize = 10_000;

/// Configuration of a simulated field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSim {
    /// Expected number of scientists.
    pub lambda: f64,
    /// Sibuya index (never-cited probability).
    pub p: f64,
    /// Rejection probability of the geometric publication count.
    pub q: f64,
    pub seed: Seed,
}

impl FieldSim {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return domain(format!("lambda must be positive, got {}", self.lambda));
        }
        check_pq(self.p, self.q)
    }
}

fn check_pq(p: f64, q: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return domain(format!("p must lie in (0, 1], got {p}"));
    }
    if !(q > 0.0 && q <= 1.0) {
        return domain(format!("q must lie in (0, 1], got {q}"));
    }
    Ok(())
}

/// Summary statistics of one simulated field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub n_scientists: usize,
    #[serde(skip)]
    pub per_author_citations: Vec<u64>,
    pub total: u64,
    pub mean: f64,
    pub median: f64,
    pub mode: u64,
    /// `None` when there are too few authors for the Hill estimator.
    pub tail_exponent_hat: Option<f64>,
    /// Share of all citations held by the top 1% of authors.
    pub top_share: f64,
}

/// Citations of one author: a Sibuya(p) count of Geometric(q) draws.
pub fn simulate_author<R: Rng + ?Sized>(p: f64, q: f64, rng: &mut R) -> Result<u64> {
    check_pq(p, q)?;
    let s = sample_sibuya(p, rng)?;
    sample_geometric_sum(s, q, rng)
}

/// Total citations of a field, drawn without keeping per-author counts.
pub fn sample_field_total<R: Rng + ?Sized>(lambda: f64, p: f64, q: f64, rng: &mut R) -> Result<u64> {
    check_pq(p, q)?;
    let n = sample_poisson(lambda, rng)?;
    let mut total = 0u64;
    for _ in 0..n {
        total = total.saturating_add(simulate_author(p, q, rng)?);
    }
    Ok(total)
}

/// `count` author draws from one stream.
pub fn author_samples(p: f64, q: f64, count: usize, seed: Seed) -> Result<Vec<u64>> {
    let mut rng = seed.rng();
    (0..count).map(|_| simulate_author(p, q, &mut rng)).collect()
}

/// Simulates one field and summarizes it.
pub fn simulate_field(cfg: &FieldSim) -> Result<SimSummary> {
    cfg.validate()?;
    let mut rng = cfg.seed.rng();
    let n = sample_poisson(cfg.lambda, &mut rng)? as usize;
    let authors = (0..n).map(|_| simulate_author(cfg.p, cfg.q, &mut rng)).collect::<Result<Vec<_>>>()?;
    Ok(summarize(authors))
}

/// Summary statistics of a vector of per-author counts.
pub fn summarize(authors: Vec<u64>) -> SimSummary {
    let total = authors.iter().fold(0u64, |a, &b| a.saturating_add(b));
    let tail = if authors.len() >= TAIL_MIN_SAMPLES { tail_exponent(&authors, 0.01).ok() } else { None };
    SimSummary {
        n_scientists: authors.len(),
        total,
        mean: mean(&authors),
        median: lower_median(&authors),
        mode: mode(&authors),
        tail_exponent_hat: tail,
        top_share: top_share(&authors, 0.01),
        per_author_citations: authors,
    }
}

pub fn mean(xs: &[u64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().map(|&x| x as f64).sum::<f64>() / xs.len() as f64
}

/// Smallest value whose empirical CDF reaches 1/2.
pub fn lower_median(xs: &[u64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    let idx = (v.len() - 1) / 2;
    let (_, m, _) = v.select_nth_unstable(idx);
    *m as f64
}

/// Most frequent value; ties go to the smaller value. Zero for an empty sample.
pub fn mode(xs: &[u64]) -> u64 {
    let mut v = xs.to_vec();
    v.sort_unstable();
    let (mut best, mut best_count) = (0u64, 0usize);
    let mut i = 0;
    while i < v.len() {
        let j = i + v[i..].partition_point(|&x| x == v[i]);
        if j - i > best_count {
            best = v[i];
            best_count = j - i;
        }
        i = j;
    }
    best
}

/// Fraction of the total held by the largest `fraction` of the entries (at least one).
pub fn top_share(xs: &[u64], fraction: f64) -> f64 {
    let total: f64 = xs.iter().map(|&x| x as f64).sum();
    if xs.is_empty() || total == 0.0 {
        return 0.0;
    }
    let k = ((fraction * xs.len() as f64).ceil() as usize).clamp(1, xs.len());
    let mut v = xs.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v[..k].iter().map(|&x| x as f64).sum::<f64>() / total
}

/// Hill estimate of the survival exponent from the top `top_fraction` of
/// the positive samples: `k / Σ_{i≤k} ln(x_(i) / x_(k+1))`.
pub fn tail_exponent(samples: &[u64], top_fraction: f64) -> Result<f64> {
    if !(top_fraction > 0.0 && top_fraction <= 0.1) {
        return domain(format!("top_fraction must lie in (0, 0.1], got {top_fraction}"));
    }
    let mut pos: Vec<u64> = samples.iter().copied().filter(|&x| x >= 1).collect();
    if pos.len() < TAIL_MIN_SAMPLES {
        return Err(Error::InsufficientData { needed: TAIL_MIN_SAMPLES, got: pos.len() });
    }
    pos.sort_unstable_by(|a, b| b.cmp(a));
    let k = ((top_fraction * pos.len() as f64) as usize).max(1);
    let threshold = pos[k] as f64;
    let sum: f64 = pos[..k].iter().map(|&x| (x as f64 / threshold).ln()).sum();
    if sum <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(k as f64 / sum)
}

/// Average ranks (ties share the mean rank).
fn ranks(xs: &[u64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by_key(|&i| xs[i]);
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = 0.5 * (i + j) as f64 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation; zero when either side has no spread.
pub fn spearman(a: &[u64], b: &[u64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let (ra, rb) = (ranks(a), ranks(b));
    let n = ra.len() as f64;
    if n < 2.0 {
        return 0.0;
    }
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return 0.0;
    }
    sab / (saa * sbb).sqrt()
}

/// Agreement of citation rankings between independent re-runs of a field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    /// Spearman correlation of author ranks, one per replicate pair.
    pub rank_correlations: Vec<f64>,
    pub mean_correlation: f64,
    /// Mean/median of per-author citations, one per replicate pair.
    pub mean_median_ratios: Vec<f64>,
}

/// Re-runs the same field twice per replicate with independent streams and
/// compares the citation ranks of same-index authors.
pub fn ranking_instability(cfg: &FieldSim, n_replicates: usize) -> Result<RankingReport> {
    cfg.validate()?;
    if n_replicates < 2 {
        return domain("n_replicates must be at least 2");
    }
    let mut corr = Vec::with_capacity(n_replicates);
    let mut ratios = Vec::with_capacity(n_replicates);
    for i in 0..n_replicates as u64 {
        let mut first = cfg.seed.child(2 * i).rng();
        let mut second = cfg.seed.child(2 * i + 1).rng();
        let n = sample_poisson(cfg.lambda, &mut first)? as usize;
        let a = (0..n).map(|_| simulate_author(cfg.p, cfg.q, &mut first)).collect::<Result<Vec<_>>>()?;
        let b = (0..n).map(|_| simulate_author(cfg.p, cfg.q, &mut second)).collect::<Result<Vec<_>>>()?;
        corr.push(spearman(&a, &b));
        ratios.push(mean(&a) / lower_median(&a));
    }
    let mean_correlation = corr.iter().sum::<f64>() / corr.len() as f64;
    Ok(RankingReport { rank_correlations: corr, mean_correlation, mean_median_ratios: ratios })
}
