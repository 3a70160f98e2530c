//! Seed-deterministic exact samplers.
//!
//! Every sampler takes an explicit RNG handle. [`Seed`] addresses a ChaCha8
//! keystream by `(value, stream_id)`, so parallel replicates stay
//! reproducible regardless of scheduling.

use std::cell::Cell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Gamma, Geometric, InverseGaussian, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::extract::PmfTable;
use crate::transforms::LaplaceFamily;

/// RNG used throughout the crate.
pub type StreamRng = ChaCha8Rng;

/// Address of a reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub value: u64,
    pub stream_id: u64,
}

impl Seed {
    pub fn new(value: u64) -> Self {
        Seed { value, stream_id: 0 }
    }

    pub fn with_stream(value: u64, stream_id: u64) -> Self {
        Seed { value, stream_id }
    }

    /// Independent child stream, e.g. one per replicate.
    pub fn child(&self, index: u64) -> Seed {
        // splitmix64 finalizer keeps children of nearby streams apart
        let mut x = self.stream_id ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed { value: self.value, stream_id: x ^ (x >> 31) }
    }

    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.value);
        rng.set_stream(self.stream_id);
        rng
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        domain(format!("{name} must lie in (0, 1], got {x}"))
    }
}

/// Geometric law on `{1, 2, ...}` with `P(k) = q (1-q)^{k-1}`.
pub fn sample_geometric<R: Rng + ?Sized>(q: f64, rng: &mut R) -> Result<u64> {
    check_unit("q", q)?;
    let g = Geometric::new(q).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(1 + g.sample(rng))
}

/// Sum of `count` independent Geometric(q) draws (support ≥ 1 each).
///
/// Large counts use the negative-binomial representation
/// `count + Poisson(Gamma(count, (1-q)/q))`, which is exact.
pub fn sample_geometric_sum<R: Rng + ?Sized>(count: u64, q: f64, rng: &mut R) -> Result<u64> {
    check_unit("q", q)?;
    if q == 1.0 || count == 0 {
        return Ok(count);
    }
    if count <= 32 {
        let g = Geometric::new(q).map_err(|e| Error::Domain(e.to_string()))?;
        return Ok((0..count).map(|_| 1 + g.sample(rng)).fold(0u64, u64::saturating_add));
    }
    let gamma = Gamma::new(count as f64, (1.0 - q) / q).map_err(|e| Error::Domain(e.to_string()))?;
    let mean = gamma.sample(rng);
    Ok(count.saturating_add(poisson_draw(mean, rng)))
}

fn poisson_draw<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    match Poisson::new(lambda) {
        Ok(p) => p.sample(rng) as u64,
        // beyond the sampler's range the relative spread is below 1e-9
        Err(_) => lambda.round() as u64,
    }
}

/// Poisson(λ).
pub fn sample_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> Result<u64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return domain(format!("lambda must be positive, got {lambda}"));
    }
    Ok(poisson_draw(lambda, rng))
}

/// Iteration cap of the sequential Sibuya mechanism.
pub const SIBUYA_ITERATION_CAP: u64 = 1_000_000_000;

/// Sibuya(p) by the citation mechanism: an item with `k - 1` citations
/// stops with probability `p / k`.
///
/// The expected loop length is infinite for `p < 1`, so the loop is capped
/// at `cap` steps and reports [`Error::IterationCap`] when reached.
pub fn sample_sibuya_sequential<R: Rng + ?Sized>(p: f64, cap: u64, rng: &mut R) -> Result<u64> {
    check_unit("p", p)?;
    let mut k = 1u64;
    loop {
        let u: f64 = rng.random();
        if u < p / k as f64 {
            return Ok(k);
        }
        k += 1;
        if k > cap {
            return Err(Error::IterationCap(cap));
        }
    }
}

/// `ln Γ(x - α) - ln Γ(x)`, with a Stirling-difference expansion for large x.
fn ln_gamma_ratio(x: f64, alpha: f64) -> f64 {
    if x < 1e4 {
        return libm::lgamma(x - alpha) - libm::lgamma(x);
    }
    let a = -alpha;
    let inv = 1.0 / x;
    a * x.ln() + (a * a - a) * 0.5 * inv - (a * a * a - 1.5 * a * a + 0.5 * a) / 6.0 * inv * inv
        + (a * a * a * a - 2.0 * a * a * a + a * a) / 12.0 * inv * inv * inv
}

/// Sibuya(p) by inversion of the survival function
/// `P(X > k) = Π_{j≤k} (1 - p/j) = Γ(k+1-p) / (Γ(k+1) Γ(1-p))`.
///
/// Same law as [`sample_sibuya_sequential`] in O(log X) time. Draws that
/// exceed `u64::MAX` saturate.
pub fn sample_sibuya<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Result<u64> {
    check_unit("p", p)?;
    if p == 1.0 {
        return Ok(1);
    }
    // X = min { k : S(k) ≤ u }
    let u: f64 = 1.0 - rng.random::<f64>();
    let mut surv = 1.0 - p;
    if surv <= u {
        return Ok(1);
    }
    let mut k = 1u64;
    while k < 64 {
        k += 1;
        surv *= 1.0 - p / k as f64;
        if surv <= u {
            return Ok(k);
        }
    }
    let ln_u = u.ln();
    let ln_g = libm::lgamma(1.0 - p);
    let ln_surv = |k: f64| ln_gamma_ratio(k + 1.0, p) - ln_g;
    // S(k) ~ k^{-p}/Γ(1-p)
    let guess = ((ln_u + ln_g) / -p).exp();
    if !(guess < 2f64.powi(52)) {
        return Ok(if guess >= u64::MAX as f64 { u64::MAX } else { guess as u64 });
    }
    let mut lo = k as f64; // S(lo) > u
    let mut hi = guess.max(lo + 1.0).floor();
    while ln_surv(hi) > ln_u {
        lo = hi;
        hi *= 2.0;
        if hi > 2f64.powi(60) {
            return Ok(hi as u64);
        }
    }
    // the guess may sit well above the answer: tighten from below
    let mut probe = (hi / 2.0).floor();
    while probe > lo {
        if ln_surv(probe) > ln_u {
            lo = probe;
            break;
        }
        hi = probe;
        probe = (probe / 2.0).floor();
    }
    while hi - lo > 1.0 {
        let mid = (0.5 * (lo + hi)).floor();
        if ln_surv(mid) > ln_u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi as u64)
}

/// Binomial thinning: number of survivors among `x` particles kept w.p. `p`.
pub fn thin_bernoulli<R: Rng + ?Sized>(x: u64, p: f64, rng: &mut R) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("p must lie in [0, 1], got {p}"));
    }
    if x == 0 {
        return Ok(0);
    }
    let b = Binomial::new(x, p).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(b.sample(rng))
}

/// Largest mass deficit tolerated when a table is used for sampling.
pub const MAX_SAMPLING_DEFICIT: f64 = 1e-6;

/// Inverse-CDF sampler over a [`PmfTable`].
///
/// Uniforms that land in the table's mass deficit are assigned to the
/// largest atom and counted in [`TableSampler::overflow_hits`].
#[derive(Debug)]
pub struct TableSampler {
    cumulative: Vec<f64>,
    overflow: Cell<u64>,
}

impl TableSampler {
    pub fn new(table: &PmfTable) -> Result<Self> {
        if !(table.mass_deficit <= MAX_SAMPLING_DEFICIT) {
            return Err(Error::Table(format!(
                "mass deficit {:.3e} exceeds {:.0e}; extract more atoms",
                table.mass_deficit, MAX_SAMPLING_DEFICIT
            )));
        }
        if table.masses.is_empty() {
            return Err(Error::Table("empty table".into()));
        }
        let mut acc = 0.0;
        let cumulative = table
            .masses
            .iter()
            .map(|&m| {
                acc += m.max(0.0);
                acc
            })
            .collect();
        Ok(TableSampler { cumulative, overflow: Cell::new(0) })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        let idx = self.cumulative.partition_point(|&c| c <= u);
        if idx >= self.cumulative.len() {
            self.overflow.set(self.overflow.get() + 1);
            return (self.cumulative.len() - 1) as u64;
        }
        idx as u64
    }

    pub fn overflow_hits(&self) -> u64 {
        self.overflow.get()
    }
}

/// Generalized thinning: the sum of `x` independent draws from `law`.
pub fn thin_general<R: Rng + ?Sized>(x: u64, law: &TableSampler, rng: &mut R) -> u64 {
    (0..x).map(|_| law.sample(rng)).fold(0, u64::saturating_add)
}

/// Discrete stable law with p.g.f. `exp{-λ(1-z)^α}`: Poisson(λ) many
/// Sibuya(α) summands.
pub fn sample_discrete_stable_svh<R: Rng + ?Sized>(lambda: f64, alpha: f64, rng: &mut R) -> Result<u64> {
    check_unit("alpha", alpha)?;
    let n = sample_poisson(lambda, rng)?;
    let mut total = 0u64;
    for _ in 0..n {
        total = total.saturating_add(sample_sibuya(alpha, rng)?);
    }
    Ok(total)
}

/// Law with p.g.f. `exp{-λ((1-z^m)/(1-κz^m))^γ}`.
///
/// Poisson(λ) clusters, each a Sibuya(γ) count of Geometric(1-κ) draws; the
/// grand total is scaled by `m`.
pub fn sample_discrete_stable_ex1<R: Rng + ?Sized>(
    lambda: f64,
    gamma: f64,
    kappa: f64,
    m: u32,
    rng: &mut R,
) -> Result<u64> {
    check_unit("gamma", gamma)?;
    if !(0.0..1.0).contains(&kappa) {
        return domain(format!("kappa must lie in [0, 1), got {kappa}"));
    }
    if m == 0 {
        return domain("m must be a positive integer");
    }
    let n = sample_poisson(lambda, rng)?;
    let mut total = 0u64;
    for _ in 0..n {
        let s = sample_sibuya(gamma, rng)?;
        total = total.saturating_add(sample_geometric_sum(s, 1.0 - kappa, rng)?);
    }
    Ok(total.saturating_mul(m as u64))
}

/// Mean and shape of the inverse Gaussian law whose Laplace transform is
/// `exp{-2√λ (√(s+h) - √h)}`.
///
/// IG(μ, ν) has transform `exp{√(2ν) (√(ν/(2μ²)) - √(s + ν/(2μ²)))}`, so
/// `ν = 2λ` and `μ = √(λ/h)`.
pub fn inverse_gaussian_params(family: &LaplaceFamily) -> Result<(f64, f64)> {
    family.validate()?;
    match *family {
        LaplaceFamily::TemperedStable { lambda, alpha, h } if (alpha - 0.5).abs() < 1e-12 => {
            Ok(((lambda / h).sqrt(), 2.0 * lambda))
        }
        _ => {
            Err(Error::Unsupported("inverse Gaussian sampling needs a tempered stable family with alpha = 1/2".into()))
        }
    }
}

/// Exact draw from the α = 1/2 tempered stable (inverse Gaussian) law.
pub fn sample_inverse_gaussian<R: Rng + ?Sized>(family: &LaplaceFamily, rng: &mut R) -> Result<f64> {
    let (mean, shape) = inverse_gaussian_params(family)?;
    let ig = InverseGaussian::new(mean, shape).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(ig.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible_and_distinct() {
        let s = Seed::with_stream(42, 7);
        let a: Vec<u64> = (0..5).map(|_| s.rng().random()).collect();
        let b: Vec<u64> = (0..5).map(|_| s.rng().random()).collect();
        assert_eq!(a, b);
        let mut r1 = s.rng();
        let mut r2 = s.child(0).rng();
        let x: u64 = r1.random();
        let y: u64 = r2.random();
        assert_ne!(x, y);
        assert_ne!(s.child(0), s.child(1));
    }

    #[test]
    fn degenerate_parameters() {
        let mut rng = Seed::new(1).rng();
        for _ in 0..100 {
            assert_eq!(sample_geometric(1.0, &mut rng).unwrap(), 1);
            assert_eq!(sample_sibuya(1.0, &mut rng).unwrap(), 1);
            assert_eq!(sample_sibuya_sequential(1.0, 10, &mut rng).unwrap(), 1);
            assert_eq!(thin_bernoulli(0, 0.4, &mut rng).unwrap(), 0);
            assert_eq!(thin_bernoulli(17, 1.0, &mut rng).unwrap(), 17);
            assert_eq!(sample_geometric_sum(9, 1.0, &mut rng).unwrap(), 9);
        }
        assert!(sample_geometric(0.0, &mut rng).is_err());
        assert!(sample_sibuya(1.2, &mut rng).is_err());
        assert!(sample_poisson(0.0, &mut rng).is_err());
    }

    #[test]
    fn sequential_cap_is_reported() {
        let mut rng = Seed::new(3).rng();
        let mut capped = 0;
        for _ in 0..200 {
            if let Err(Error::IterationCap(c)) = sample_sibuya_sequential(0.05, 5, &mut rng) {
                assert_eq!(c, 5);
                capped += 1;
            }
        }
        assert!(capped > 100);
    }

    #[test]
    fn sibuya_inversion_matches_survival_function() {
        // the returned k satisfies S(k) ≤ u < S(k-1) for a fixed uniform stream
        let p = 0.37;
        let mut rng = Seed::new(9).rng();
        let mut replay = Seed::new(9).rng();
        for _ in 0..2000 {
            let k = sample_sibuya(p, &mut rng).unwrap();
            let u = 1.0 - replay.random::<f64>();
            let ln_s = |k: u64| -> f64 { (1..=k).map(|j| (1.0 - p / j as f64).ln()).sum() };
            if k < 200_000 {
                assert!(ln_s(k) <= u.ln() + 1e-12, "k={k}");
                assert!(ln_s(k - 1) > u.ln() - 1e-12, "k={k}");
            }
        }
    }

    #[test]
    fn ln_gamma_ratio_branches_agree() {
        for &alpha in &[0.1, 0.5, 0.9] {
            let x = 1e4;
            let direct = libm::lgamma(x - alpha) - libm::lgamma(x);
            let series = ln_gamma_ratio(x, alpha);
            assert!((direct - series).abs() < 1e-10);
        }
    }

    #[test]
    fn inverse_gaussian_parameters() {
        let fam = LaplaceFamily::TemperedStable { lambda: 2.0, alpha: 0.5, h: 0.5 };
        let (mu, nu) = inverse_gaussian_params(&fam).unwrap();
        // transform of IG(μ, ν) matches laplace_eval
        for s in [0.3, 1.0, 4.0] {
            let ig = ((nu / mu) * (1.0 - (1.0 + 2.0 * mu * mu * s / nu).sqrt())).exp();
            assert!((ig - fam.laplace(s).unwrap()).abs() < 1e-14);
        }
        let third = LaplaceFamily::TemperedStable { lambda: 1.0, alpha: 1.0 / 3.0, h: 1.0 };
        assert!(matches!(inverse_gaussian_params(&third), Err(Error::Unsupported(_))));
    }

    #[test]
    fn table_sampler_rejects_large_deficit() {
        let t = PmfTable { masses: vec![0.5, 0.4], mass_deficit: 0.1, support_step: 1, tol_neg: 0.0 };
        assert!(matches!(TableSampler::new(&t), Err(Error::Table(_))));
        let ok = PmfTable { masses: vec![0.25, 0.75], mass_deficit: 0.0, support_step: 1, tol_neg: 0.0 };
        let s = TableSampler::new(&ok).unwrap();
        let mut rng = Seed::new(5).rng();
        assert_eq!(thin_general(0, &s, &mut rng), 0);
        let n = 20000;
        let ones = (0..n).filter(|_| s.sample(&mut rng) == 1).count();
        assert!((ones as f64 / n as f64 - 0.75).abs() < 0.015);
    }

    #[test]
    fn ex1_support_scaling() {
        let mut rng = Seed::new(11).rng();
        for _ in 0..2000 {
            let x = sample_discrete_stable_ex1(2.0, 0.6, 0.4, 3, &mut rng).unwrap();
            assert_eq!(x % 3, 0);
        }
    }
}
