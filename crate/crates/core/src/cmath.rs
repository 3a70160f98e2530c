//! Complex helpers that keep precision near z = 1.
//!
//! Points are carried together with their complement `1 - z` so that
//! compositions of thinning maps do not lose digits to cancellation when
//! the thinning parameter is tiny.

use num_complex::Complex64;

/// A point of the closed unit disk together with its complement `1 - z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZPoint {
    pub z: Complex64,
    pub one_minus_z: Complex64,
}

impl ZPoint {
    pub fn new(z: Complex64) -> Self {
        ZPoint { z, one_minus_z: Complex64::new(1.0, 0.0) - z }
    }

    pub fn real(x: f64) -> Self {
        ZPoint::new(Complex64::new(x, 0.0))
    }

    /// Builds a point from its complement, which is taken as exact.
    pub fn from_complement(one_minus_z: Complex64) -> Self {
        ZPoint { z: Complex64::new(1.0, 0.0) - one_minus_z, one_minus_z }
    }

    /// `1 - z^m`, accurate when z is close to 1.
    pub fn one_minus_pow(&self, m: u32) -> Complex64 {
        if m == 1 {
            return self.one_minus_z;
        }
        // 1 - z^m = (1 - z)(1 + z + ... + z^{m-1})
        let mut acc = Complex64::new(0.0, 0.0);
        let mut zp = Complex64::new(1.0, 0.0);
        for _ in 0..m {
            acc += zp;
            zp *= self.z;
        }
        self.one_minus_z * acc
    }
}

/// `exp(w) - 1` without cancellation for small |w|.
pub fn expm1(w: Complex64) -> Complex64 {
    let (x, y) = (w.re, w.im);
    let ex = x.exp();
    let half = (0.5 * y).sin();
    Complex64::new(x.exp_m1() * y.cos() - 2.0 * half * half, ex * y.sin())
}

/// `ln(1 + u)` on the principal branch, accurate for small |u|.
pub fn ln1p(u: Complex64) -> Complex64 {
    let (a, b) = (u.re, u.im);
    let re = 0.5 * (2.0 * a + a * a + b * b).ln_1p();
    let im = b.atan2(1.0 + a);
    Complex64::new(re, im)
}

/// Principal `arccos(1 - c)` computed from the complement `c`.
///
/// Uses `arccos(x) = 2 asin(sqrt((1 - x)/2))`, which agrees with the
/// principal branch everywhere off the cuts and keeps full relative
/// accuracy as x approaches 1.
pub fn acos_from_complement(c: Complex64) -> Complex64 {
    2.0 * (0.5 * c).sqrt().asin()
}

/// Principal power `w^e` with `0^e = 0` for e > 0.
pub fn powf(w: Complex64, e: f64) -> Complex64 {
    if w.re == 0.0 && w.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    w.powf(e)
}
