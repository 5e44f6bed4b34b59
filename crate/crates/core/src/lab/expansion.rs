use num_complex::Complex64;

use super::LabError;

/// `| |A+z| − (|A| + Re((|A|/A)·z)) |`, the error of the first-order
/// expansion of `|A + z|` around `A`.
///
/// With `u = z/A = a + ib`, the residual is `|A|·(|1+u| − (1+a))`, and for
/// `1 + a > 0` that equals `|A|·b² / (|1+u| + 1 + a)`; that form is used to
/// avoid cancellation.
pub fn abs_expansion_residual(a: Complex64, z: Complex64) -> Result<f64, LabError> {
    let norm_a = a.norm();
    if norm_a == 0.0 {
        return Err(LabError::ZeroAmplitude);
    }
    let u = z / a;
    let one_plus = 1.0 + u.re;
    let modulus = Complex64::new(one_plus, u.im).norm();
    let residual = if one_plus > 0.0 {
        norm_a * u.im * u.im / (modulus + one_plus)
    } else {
        norm_a * (modulus - one_plus)
    };
    Ok(residual.abs())
}

/// `|z|² / |A|`.
pub fn expansion_bound(a: Complex64, z: Complex64) -> f64 {
    z.norm_sqr() / a.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exact_at_origin() {
        assert_eq!(abs_expansion_residual(c(2.0, -1.0), c(0.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn orthogonal_perturbation() {
        let r = abs_expansion_residual(c(1.0, 0.0), c(0.0, 0.1)).unwrap();
        let direct = 1.01f64.sqrt() - 1.0;
        assert!((r - direct).abs() < 1e-15);
        assert!((r - 0.004_987_562).abs() < 1e-9);
        assert!(r <= 0.01);
    }

    #[test]
    fn collinear_perturbation_is_exact() {
        assert_eq!(abs_expansion_residual(c(1.0, 0.0), c(0.1, 0.0)).unwrap(), 0.0);
        assert_eq!(abs_expansion_residual(c(0.0, 3.0), c(0.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn matches_direct_formula_away_from_cancellation() {
        let (a, z) = (c(0.3, -1.2), c(-0.2, 0.4));
        let direct = ((a + z).norm() - (a.norm() + ((a.norm() / a) * z).re)).abs();
        assert!((abs_expansion_residual(a, z).unwrap() - direct).abs() < 1e-12);
        let (a, z) = (c(1.0, 0.0), c(-3.0, 0.5));
        let direct = ((a + z).norm() - (a.norm() + ((a.norm() / a) * z).re)).abs();
        assert!((abs_expansion_residual(a, z).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn zero_amplitude_rejected() {
        assert_eq!(abs_expansion_residual(c(0.0, 0.0), c(1.0, 0.0)), Err(LabError::ZeroAmplitude));
    }
}
