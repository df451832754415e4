//! Special functions and closed-form comparison quantities used to
//! cross-check the area integrator.

use std::f64::consts::PI;

use crate::error::{GeomError, Result};

use super::oned::adaptive_simpson;

/// Real dilogarithm on [0, 1]: the sum of z^k / k^2.
///
/// The series is used directly below 1/2 and through the reflection
/// identity Li2(z) + Li2(1-z) = pi^2/6 - ln(z) ln(1-z) above it.
/// Arguments outside [0, 1] return NaN.
pub fn dilog(z: f64) -> f64 {
    if !(0.0..=1.0).contains(&z) {
        return f64::NAN;
    }
    if z == 0.0 {
        return 0.0;
    }
    if z == 1.0 {
        return PI * PI / 6.0;
    }
    if z > 0.5 {
        return PI * PI / 6.0 - z.ln() * (1.0 - z).ln() - dilog(1.0 - z);
    }
    let mut term = z;
    let mut sum = z;
    let mut k = 1.0f64;
    while term.abs() > 1e-17 * sum.abs() {
        k += 1.0;
        term *= z;
        sum += term / (k * k);
    }
    sum
}

/// The reference integral comparing a unit-speed corner approach
/// against the logarithmic model: the integral over x in (0, 1) of
/// ln(((1 - tau) x + tau) / (tau (1 - x))) / x, evaluated by adaptive
/// quadrature. Requires tau > 0. For tau in (0, 1] it equals
/// pi^2/6 + ln(tau)^2/2 + Li2(1 - tau), which the tests pin.
pub fn comparison_integral_triangle(tau: f64) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(GeomError::Precondition(format!(
            "comparison integral needs tau > 0, got {tau}"
        )));
    }
    // Split the logarithm so both endpoint limits are tame:
    // ln_1p((1 - tau) x / tau) / x tends to (1 - tau) / tau at 0 and
    // -ln_1p(-x) / x tends to 1, while x = 1 keeps an integrable log
    // singularity handled by refinement.
    let ratio = (1.0 - tau) / tau;
    let g = |x: f64| {
        if x <= 0.0 {
            return ratio + 1.0;
        }
        let x = x.min(1.0 - 1e-16);
        ((ratio * x).ln_1p() - (-x).ln_1p()) / x
    };
    let q = adaptive_simpson(g, 0.0, 1.0, 1e-9, 60);
    Ok(q.value)
}

/// Lower bound for the Hilbert area of a triangular sector of height h
/// cut off at distance m from the apex: 2 h / m. Grows without bound
/// as the cut approaches the apex, which is what certifies divergence
/// for regions with a vertex pushed into a corner.
pub fn sector_bound(height: f64, cutoff: f64) -> Result<f64> {
    if !(height > 0.0 && cutoff > 0.0) {
        return Err(GeomError::Precondition(
            "sector bound needs positive height and cutoff".into(),
        ));
    }
    Ok(2.0 * height / cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dilog_special_values() {
        assert_eq!(dilog(0.0), 0.0);
        assert_relative_eq!(dilog(1.0), PI * PI / 6.0, max_relative = 1e-15);
        let ln2 = std::f64::consts::LN_2;
        assert_relative_eq!(
            dilog(0.5),
            PI * PI / 12.0 - ln2 * ln2 / 2.0,
            max_relative = 1e-14
        );
        assert!(dilog(1.5).is_nan());
        assert!(dilog(-0.1).is_nan());
    }

    #[test]
    fn dilog_reflection_identity() {
        for &z in &[0.05, 0.2, 0.35, 0.49, 0.61, 0.8, 0.93] {
            let lhs = dilog(z) + dilog(1.0 - z);
            let rhs = PI * PI / 6.0 - z.ln() * (1.0 - z).ln();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
        }
    }

    #[test]
    fn comparison_integral_closed_form() {
        for &tau in &[1.0, 0.5, 0.25, 0.1] {
            let numeric = comparison_integral_triangle(tau).unwrap();
            let exact = PI * PI / 6.0 + tau.ln().powi(2) / 2.0 + dilog(1.0 - tau);
            assert_relative_eq!(numeric, exact, max_relative = 1e-7);
        }
        assert_relative_eq!(
            comparison_integral_triangle(1.0).unwrap(),
            PI * PI / 6.0,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            comparison_integral_triangle(0.5).unwrap(),
            PI * PI / 4.0,
            max_relative = 1e-8
        );
        assert!(comparison_integral_triangle(0.0).is_err());
        assert!(comparison_integral_triangle(-1.0).is_err());
    }

    #[test]
    fn sector_bound_scaling() {
        let near = sector_bound(1.0, 1e-6).unwrap();
        let far = sector_bound(1.0, 1e-2).unwrap();
        assert!(near > far);
        assert_relative_eq!(near, 2e6, max_relative = 1e-12);
        assert!(sector_bound(0.0, 1.0).is_err());
        assert!(sector_bound(1.0, 0.0).is_err());
    }
}
