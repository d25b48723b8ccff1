use num_complex::Complex64;

use super::gamma::{gamma, nonpositive_integer, rgamma};
use super::hyper::gauss_2f1;
use super::SeriesControl;
use crate::error::{Error, Result};

/// Complete beta function B(a, b) = Γ(a)Γ(b)/Γ(a+b).
pub fn beta(a: Complex64, b: Complex64) -> Result<Complex64> {
    Ok(gamma(a)? * gamma(b)? * rgamma(a + b))
}

/// Incomplete beta function B_z(a, b) = ∫₀^z t^{a−1}(1−t)^{b−1} dt.
///
/// Evaluated everywhere as `(z^a / a) ₂F₁(a, 1−b; a+1; z)` with the principal
/// branch of `z^a`, which is the analytic continuation along the straight
/// path from 0. On the real segment `(1/2, 1]` the reflection
/// `B(a,b) − B_{1−z}(b,a)` is used instead when `Re b > 0`.
pub fn incomplete_beta(z: Complex64, a: Complex64, b: Complex64) -> Result<Complex64> {
    incomplete_beta_with(z, a, b, &SeriesControl::default())
}

pub fn incomplete_beta_with(z: Complex64, a: Complex64, b: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    if let Some(n) = nonpositive_integer(a) {
        return Err(Error::Domain(format!("incomplete beta with a = {n}")));
    }
    if z.norm() == 0.0 {
        if a.re > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::Pole(format!("incomplete beta at z = 0 with Re a = {} <= 0", a.re)));
    }
    let real_near_one = z.im == 0.0 && z.re > 0.5 && z.re <= 1.0;
    if real_near_one && b.re > 0.0 && nonpositive_integer(b).is_none() {
        let complement = if z.re == 1.0 {
            Complex64::new(0.0, 0.0)
        } else {
            let w = Complex64::new(1.0 - z.re, 0.0);
            w.powc(b) / b * gauss_2f1(b, 1.0 - a, b + 1.0, w, ctl)?
        };
        return Ok(beta(a, b)? - complement);
    }
    if z.im == 0.0 && z.re == 1.0 {
        return Err(Error::Pole(format!("B_1(a, b) diverges for Re b = {} <= 0", b.re)));
    }
    Ok(z.powc(a) / a * gauss_2f1(a, 1.0 - b, a + 1.0, z, ctl)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn unit_parameters_give_z() {
        for z in [c(0.3), c(-2.0), Complex64::new(0.2, 0.7)] {
            let v = incomplete_beta(z, c(1.0), c(1.0)).unwrap();
            assert!((v - z).norm() < 1e-14, "{z}: {v}");
        }
    }

    #[test]
    fn closure_at_one() {
        let v = incomplete_beta(c(1.0), c(0.75), c(0.5)).unwrap();
        let expect = beta(c(0.75), c(0.5)).unwrap();
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn arctan_and_artanh_forms() {
        // B_z(1/2, 0) = 2 artanh(√z) on (0,1), 2i arctan(√|z|) on z < 0
        let v = incomplete_beta(c(0.36), c(0.5), c(0.0)).unwrap();
        assert!((v.re - 2.0 * 0.6f64.atanh()).abs() < 1e-12 && v.im.abs() < 1e-14);
        let v = incomplete_beta(c(-3.0), c(0.5), c(0.0)).unwrap();
        let expect = 2.0 * 3.0f64.sqrt().atan();
        assert!(v.re.abs() < 1e-13 && (v.im - expect).abs() < 1e-12, "{v}");
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(incomplete_beta(c(0.5), c(0.0), c(1.0)), Err(Error::Domain(_))));
        assert!(matches!(incomplete_beta(c(0.5), c(-2.0), c(1.0)), Err(Error::Domain(_))));
        assert!(incomplete_beta(c(1.0), c(0.5), c(-0.5)).is_err());
    }
}
