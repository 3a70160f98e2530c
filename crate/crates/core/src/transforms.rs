//! Probability generating functions, thinning maps and Laplace transforms.
//!
//! All fractional powers, logarithms and inverse cosines use principal
//! branches. Evaluation goes through [`ZPoint`] so that `1 - z` is carried
//! exactly through compositions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::cmath::{self, ZPoint};
use crate::error::{domain, Error, Result};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// A discrete distribution on the nonnegative integers, described by its p.g.f.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PgfFamily {
    /// `exp{-λ (1 - z)^α}`.
    SvhStable { lambda: f64, alpha: f64 },
    /// `exp{-λ ((1 - z^m)/(1 - κ z^m))^γ}`.
    Example1 { lambda: f64, gamma: f64, kappa: f64, m: u32 },
    /// `exp{-λ arccos(A(z))^γ}` with `A(z) = ((1+b)z - 2b)/(2 - (1+b)z)`.
    Example2 { lambda: f64, gamma: f64, b: f64 },
    /// `qz / (1 - (1 - q) z)`, support starting at 1.
    Geometric { q: f64 },
    /// `1 - (1 - z)^p`.
    Sibuya { p: f64 },
    /// Sibuya(p) compounded with Geometric(q): `1 - (1 - G_q(z))^p`.
    AuthorCitations { p: f64, q: f64 },
    /// Poisson(λ) compounded with the author law: `exp{-λ ((1-z)/(1-(1-q)z))^p}`.
    FieldCitations { lambda: f64, p: f64, q: f64 },
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be positive and finite, got {x}"))
    }
}

fn unit_half_open(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        domain(format!("{name} must lie in (0, 1], got {x}"))
    }
}

impl PgfFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PgfFamily::SvhStable { lambda, alpha } => {
                positive("lambda", lambda)?;
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return domain(format!(
                        "alpha must lie in (0, 1]; a distribution on the nonnegative integers cannot have alpha > 1 (got {alpha})"
                    ));
                }
                Ok(())
            }
            PgfFamily::Example1 { lambda, gamma, kappa, m } => {
                positive("lambda", lambda)?;
                positive("gamma", gamma)?;
                if !(0.0..1.0).contains(&kappa) {
                    return domain(format!("kappa must lie in [0, 1), got {kappa}"));
                }
                if m == 0 {
                    return domain("m must be a positive integer");
                }
                Ok(())
            }
            PgfFamily::Example2 { lambda, gamma, b } => {
                positive("lambda", lambda)?;
                if !(gamma > 0.0 && gamma <= 2.0) {
                    return domain(format!("gamma must lie in (0, 2], got {gamma}"));
                }
                check_b(b)
            }
            PgfFamily::Geometric { q } => unit_half_open("q", q),
            PgfFamily::Sibuya { p } => unit_half_open("p", p),
            PgfFamily::AuthorCitations { p, q } => {
                unit_half_open("p", p)?;
                unit_half_open("q", q)
            }
            PgfFamily::FieldCitations { lambda, p, q } => {
                positive("lambda", lambda)?;
                unit_half_open("p", p)?;
                unit_half_open("q", q)
            }
        }
    }

    /// Lattice span of the support (m for `Example1`, 1 otherwise).
    pub fn support_step(&self) -> u32 {
        match *self {
            PgfFamily::Example1 { m, .. } => m,
            _ => 1,
        }
    }

    /// Evaluates the p.g.f. at `z` (|z| ≤ 1).
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_point(ZPoint::new(z))
    }

    /// Evaluates the p.g.f. at a point carrying its exact complement.
    pub fn eval_point(&self, pt: ZPoint) -> Result<Complex64> {
        self.validate()?;
        let v = match *self {
            PgfFamily::SvhStable { lambda, alpha } => (-lambda * cmath::powf(pt.one_minus_z, alpha)).exp(),
            PgfFamily::Example1 { lambda, gamma, kappa, m } => {
                let ratio = mobius_ratio(&pt, kappa, m)?;
                (-lambda * cmath::powf(ratio, gamma)).exp()
            }
            PgfFamily::Example2 { lambda, gamma, b } => {
                let theta = chebyshev_angle(&pt, b)?;
                (-lambda * cmath::powf(theta, gamma)).exp()
            }
            PgfFamily::Geometric { q } => {
                let den = geometric_denominator(&pt, q)?;
                q * pt.z / den
            }
            PgfFamily::Sibuya { p } => ONE - cmath::powf(pt.one_minus_z, p),
            PgfFamily::AuthorCitations { p, q } => {
                let den = geometric_denominator(&pt, q)?;
                ONE - cmath::powf(pt.one_minus_z / den, p)
            }
            PgfFamily::FieldCitations { lambda, p, q } => {
                let den = geometric_denominator(&pt, q)?;
                (-lambda * cmath::powf(pt.one_minus_z / den, p)).exp()
            }
        };
        Ok(v)
    }

    /// Natural thinning partner for stability checks, if the family has one.
    pub fn natural_thinning(&self) -> Option<ThinningFamily> {
        match *self {
            PgfFamily::SvhStable { .. } => Some(ThinningFamily::Bernoulli),
            PgfFamily::Example1 { kappa, m, .. } => Some(ThinningFamily::Example1 { kappa, m }),
            PgfFamily::Example2 { b, .. } => Some(ThinningFamily::Example2 { b }),
            PgfFamily::FieldCitations { q, .. } => Some(ThinningFamily::Example1 { kappa: 1.0 - q, m: 1 }),
            _ => None,
        }
    }

    /// Stability index: the exponent that fixes `p(n) = n^{-1/index}`.
    pub fn stability_index(&self) -> Option<f64> {
        match *self {
            PgfFamily::SvhStable { alpha, .. } => Some(alpha),
            PgfFamily::Example1 { gamma, .. } | PgfFamily::Example2 { gamma, .. } => Some(gamma),
            PgfFamily::FieldCitations { p, .. } => Some(p),
            _ => None,
        }
    }
}

fn check_b(b: f64) -> Result<()> {
    if b > -1.0 && b < 1.0 {
        Ok(())
    } else {
        domain(format!("b must lie in (-1, 1), got {b}"))
    }
}

/// `1 - (1 - q) z = q + (1 - q)(1 - z)`.
fn geometric_denominator(pt: &ZPoint, q: f64) -> Result<Complex64> {
    let den = q + (1.0 - q) * pt.one_minus_z;
    if den.norm() == 0.0 {
        return Err(Error::Evaluation(format!("1 - (1 - q) z vanishes at z = {}", pt.z)));
    }
    Ok(den)
}

/// `(1 - z^m)/(1 - κ z^m)` with `1 - κ w = (1 - κ) + κ (1 - w)`.
fn mobius_ratio(pt: &ZPoint, kappa: f64, m: u32) -> Result<Complex64> {
    let one_minus_w = pt.one_minus_pow(m);
    let den = (1.0 - kappa) + kappa * one_minus_w;
    if den.norm() == 0.0 {
        return Err(Error::Evaluation(format!("1 - κ z^m vanishes at z = {}", pt.z)));
    }
    Ok(one_minus_w / den)
}

/// Complement of the Möbius map `A(z) = ((1+b)z - 2b)/(2 - (1+b)z)`:
/// `1 - A(z) = 2(1+b)(1-z) / (2 - (1+b)z)`.
fn chebyshev_complement(pt: &ZPoint, b: f64) -> Result<Complex64> {
    let den = 2.0 - (1.0 + b) * pt.z;
    if den.norm() == 0.0 {
        return Err(Error::Evaluation(format!("2 - (1+b) z vanishes at z = {}", pt.z)));
    }
    Ok(2.0 * (1.0 + b) * pt.one_minus_z / den)
}

/// `arccos(A(z))` on the principal branch.
fn chebyshev_angle(pt: &ZPoint, b: f64) -> Result<Complex64> {
    Ok(cmath::acos_from_complement(chebyshev_complement(pt, b)?))
}

/// The Möbius map `A(z)` that conjugates the Example 2 thinning to `T_p`.
pub fn chebyshev_map(z: Complex64, b: f64) -> Result<Complex64> {
    check_b(b)?;
    let pt = ZPoint::new(z);
    Ok(ONE - chebyshev_complement(&pt, b)?)
}

/// `T_p(x) = cos(p arccos x)`.
pub fn chebyshev_t(p: f64, x: Complex64) -> Complex64 {
    (p * x.acos()).cos()
}

/// A family of thinning p.g.f.s `Q_p(z)` indexed by `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "thinning", rename_all = "snake_case")]
pub enum ThinningFamily {
    /// `1 - p + p z`.
    Bernoulli,
    /// `(((1-p) + (p-κ) z^m) / ((1-pκ) - κ(1-p) z^m))^{1/m}`.
    Example1 { kappa: f64, m: u32 },
    /// `2(b + T_p(A(z))) / ((1+b)(1 + T_p(A(z))))`.
    Example2 { b: f64 },
}

impl ThinningFamily {
    /// Checks the family's own parameters and the admissibility of `p`.
    ///
    /// `p = 1` is accepted where `Q_1` is the identity map.
    pub fn check(&self, p: f64) -> Result<()> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Admissibility(format!("thinning parameter p must lie in (0, 1], got {p}")));
        }
        match *self {
            ThinningFamily::Bernoulli => Ok(()),
            ThinningFamily::Example1 { kappa, m } => {
                if m == 0 {
                    return domain("m must be a positive integer");
                }
                if m == 1 {
                    if !(0.0..1.0).contains(&kappa) {
                        return domain(format!("kappa must lie in [0, 1) for m = 1, got {kappa}"));
                    }
                    Ok(())
                } else {
                    if !(kappa > 0.0 && kappa < 1.0) {
                        return domain(format!("kappa must lie in (0, 1) for m > 1, got {kappa}"));
                    }
                    if p >= kappa {
                        return Err(Error::Admissibility(format!(
                            "m = {m} requires 0 < p < kappa < 1, got p = {p}, kappa = {kappa}"
                        )));
                    }
                    Ok(())
                }
            }
            ThinningFamily::Example2 { b } => check_b(b),
        }
    }

    /// `Q_p(z)`.
    pub fn eval(&self, p: f64, z: Complex64) -> Result<Complex64> {
        Ok(self.apply(p, ZPoint::new(z))?.z)
    }

    /// `Q_p` applied to a point, returning the image with its complement.
    pub fn apply(&self, p: f64, pt: ZPoint) -> Result<ZPoint> {
        self.check(p)?;
        match *self {
            ThinningFamily::Bernoulli => Ok(ZPoint::from_complement(p * pt.one_minus_z)),
            ThinningFamily::Example1 { kappa, m } => {
                let one_minus_w = pt.one_minus_pow(m);
                // (1-pκ) - κ(1-p) w = (1-κ) + κ(1-p)(1-w)
                let den = (1.0 - kappa) + kappa * (1.0 - p) * one_minus_w;
                if den.norm() == 0.0 {
                    return Err(Error::Evaluation(format!("thinning denominator vanishes at z = {}", pt.z)));
                }
                // 1 - M(w) = p(1-κ)(1-w)/den
                let one_minus_m = p * (1.0 - kappa) * one_minus_w / den;
                if m == 1 {
                    Ok(ZPoint::from_complement(one_minus_m))
                } else {
                    let log_q = cmath::ln1p(-one_minus_m) / m as f64;
                    Ok(ZPoint::from_complement(-cmath::expm1(log_q)))
                }
            }
            ThinningFamily::Example2 { b } => {
                let theta = chebyshev_angle(&pt, b)?;
                let t_angle = p * theta;
                // T = cos(pθ), 1 - T = 2 sin²(pθ/2)
                let t = t_angle.cos();
                let half = (0.5 * t_angle).sin();
                let one_minus_t = 2.0 * half * half;
                let den = (1.0 + b) * (1.0 + t);
                if den.norm() == 0.0 {
                    return Err(Error::Evaluation(format!("1 + T_p vanishes at z = {}", pt.z)));
                }
                Ok(ZPoint::from_complement((1.0 - b) * one_minus_t / den))
            }
        }
    }

    /// Largest admissible p below 1 (exclusive bound for `m > 1`).
    pub fn p_upper(&self) -> f64 {
        match *self {
            ThinningFamily::Example1 { kappa, m } if m > 1 => kappa,
            _ => 1.0,
        }
    }
}

/// `Q_p(z)` as a free function.
pub fn thinning_eval(family: &ThinningFamily, p: f64, z: Complex64) -> Result<Complex64> {
    family.eval(p, z)
}

/// `P(z)` as a free function.
pub fn pgf_eval(family: &PgfFamily, z: Complex64) -> Result<Complex64> {
    family.eval(z)
}

/// Laplace transform of a positive random variable, with its casual normalizers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LaplaceFamily {
    /// `(1 + b s)^{-γ}`.
    Gamma { b: f64, shape: f64 },
    /// `exp{-λ^α (1 + tan(πα/2)) ((s + h)^α - h^α)}` with `1/α` an integer.
    TemperedStable { lambda: f64, alpha: f64, h: f64 },
}

impl LaplaceFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LaplaceFamily::Gamma { b, shape } => {
                positive("b", b)?;
                positive("gamma", shape)
            }
            LaplaceFamily::TemperedStable { lambda, alpha, h } => {
                positive("lambda", lambda)?;
                positive("h", h)?;
                if !(alpha > 0.0 && alpha < 1.0) {
                    return domain(format!("alpha must lie in (0, 1), got {alpha}"));
                }
                let inv = 1.0 / alpha;
                if (inv - inv.round()).abs() > 1e-9 {
                    return domain(format!("1/alpha must be a positive integer, got alpha = {alpha}"));
                }
                Ok(())
            }
        }
    }

    fn tempered_scale(lambda: f64, alpha: f64) -> f64 {
        lambda.powf(alpha) * (1.0 + (PI * alpha / 2.0).tan())
    }

    /// `L(s)` for `s ≥ 0`.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        self.validate()?;
        if !(s >= 0.0) {
            return domain(format!("Laplace argument must be nonnegative, got {s}"));
        }
        Ok(match *self {
            LaplaceFamily::Gamma { b, shape } => (-shape * (b * s).ln_1p()).exp(),
            LaplaceFamily::TemperedStable { lambda, alpha, h } => {
                // (s+h)^α - h^α = h^α expm1(α ln1p(s/h))
                let shift = h.powf(alpha) * (alpha * (s / h).ln_1p()).exp_m1();
                (-Self::tempered_scale(lambda, alpha) * shift).exp()
            }
        })
    }

    /// `-ln g_n(s)`, the argument substituted into `L` by the casual normalizer.
    pub fn neg_log_normalizer(&self, n: u32, s: f64) -> Result<f64> {
        self.validate()?;
        if n == 0 {
            return domain("n must be at least 1");
        }
        if !(s >= 0.0) {
            return domain(format!("Laplace argument must be nonnegative, got {s}"));
        }
        let n = n as f64;
        Ok(match *self {
            // ((1 + bs)^{1/n} - 1)/b
            LaplaceFamily::Gamma { b, .. } => ((b * s).ln_1p() / n).exp_m1() / b,
            // ((s+h)^α/n + (n-1)h^α/n)^{1/α} - h
            LaplaceFamily::TemperedStable { alpha, h, .. } => {
                let rel = (alpha * (s / h).ln_1p()).exp_m1() / n;
                h * (rel.ln_1p() / alpha).exp_m1()
            }
        })
    }

    /// The casual normalizer `g_n(s)`.
    pub fn normalizer(&self, n: u32, s: f64) -> Result<f64> {
        Ok((-self.neg_log_normalizer(n, s)?).exp())
    }
}

pub fn laplace_eval(family: &LaplaceFamily, s: f64) -> Result<f64> {
    family.laplace(s)
}

/// `g_n(s)` for the family.
pub fn gfun_eval(family: &LaplaceFamily, n: u32, s: f64) -> Result<f64> {
    family.normalizer(n, s)
}
