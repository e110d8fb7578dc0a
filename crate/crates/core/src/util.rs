//! Small numeric and formatting helpers shared across the crate.

use num_complex::Complex64;

/// Default tolerance for identities that hold in exact arithmetic and are
/// only exposed to float roundoff.
pub const TOL_EXACT: f64 = 1e-12;

/// Default tolerance for norm identities (singular values, C*-identity).
pub const TOL_NORM: f64 = 1e-8;

/// Tolerance for unit-modulus checks before a value is rejected outright.
pub const TOL_MODULUS: f64 = 1e-9;

pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn capprox_eq(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

/// Renormalizes `z` to unit modulus. Values further than [`TOL_MODULUS`]
/// from the unit circle are rejected as data errors, not silently fixed.
pub fn renormalize_unit(z: Complex64) -> Option<Complex64> {
    let n = z.norm();
    if (n - 1.0).abs() > TOL_MODULUS {
        return None;
    }
    Some(z / n)
}

/// Rounds to 12 significant digits. Used by every text report so that
/// output is byte-stable across runs and platforms.
pub fn sig12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { 0.0 } else { v };
    }
    let exp = v.abs().log10().floor() as i32;
    let scale = 10f64.powi(11 - exp);
    (v * scale).round() / scale
}

/// Formats a complex number as `a+bi` with 12 significant digits per part.
pub fn fmt_complex(z: Complex64) -> String {
    let re = sig12(z.re);
    let im = sig12(z.im);
    if im == 0.0 {
        format!("{}", re)
    } else if re == 0.0 {
        format!("{}i", im)
    } else if im < 0.0 {
        format!("{}{}i", re, im)
    } else {
        format!("{}+{}i", re, im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_rounds_to_significant_digits() {
        assert_eq!(sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(sig12(12345.678901234567), 12345.6789012);
        assert_eq!(sig12(0.0), 0.0);
        assert_eq!(sig12(-2.5e-13), -2.5e-13);
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(fmt_complex(Complex64::new(1.0, 0.0)), "1");
        assert_eq!(fmt_complex(Complex64::new(0.0, 2.0)), "2i");
        assert_eq!(fmt_complex(Complex64::new(0.5, -0.5)), "0.5-0.5i");
        assert_eq!(fmt_complex(Complex64::new(-1.5, 2.0)), "-1.5+2i");
    }

    #[test]
    fn renormalize_rejects_off_circle_values() {
        assert!(renormalize_unit(Complex64::new(0.9, 0.0)).is_none());
        let z = renormalize_unit(Complex64::new(0.0, 1.0 + 1e-10)).unwrap();
        assert!((z.norm() - 1.0).abs() < 1e-15);
    }
}
