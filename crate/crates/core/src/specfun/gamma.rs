//! Complex gamma function: Lanczos approximation (g = 7, nine coefficients)
//! with reflection for `Re z < 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Returns `Some(n)` when `z` is (numerically) the non-positive integer `n`.
pub(crate) fn nonpositive_integer(z: Complex64) -> Option<i64> {
    let r = z.re.round();
    if r <= 0.0 && (z.re - r).abs() < 1e-13 * (1.0 + r.abs()) && z.im.abs() < 1e-13 {
        Some(r as i64)
    } else {
        None
    }
}

fn lanczos(z: Complex64) -> Complex64 {
    // valid for Re z >= 1/2
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Γ(z) for complex `z`; errors at the poles `z = 0, -1, -2, ...`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if let Some(n) = nonpositive_integer(z) {
        return Err(Error::Pole(format!("gamma function at z = {n}")));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(PI / (s * lanczos(1.0 - z)))
    } else {
        Ok(lanczos(z))
    }
}

/// 1/Γ(z), which is entire: exactly zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    if nonpositive_integer(z).is_some() {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        (PI * z).sin() * lanczos(1.0 - z) / PI
    } else {
        1.0 / lanczos(z)
    }
}

/// Γ for real arguments.
pub fn gamma_real(x: f64) -> Result<f64> {
    gamma(Complex64::new(x, 0.0)).map(|g| g.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn factorials() {
        let mut f = 1.0;
        for n in 1..20 {
            let g = gamma(c(n as f64)).unwrap();
            assert!((g.re / f - 1.0).abs() < 1e-13, "n={n}: {g} vs {f}");
            f *= n as f64;
        }
    }

    #[test]
    fn half_integers_and_reflection() {
        let sqrt_pi = PI.sqrt();
        assert!((gamma(c(0.5)).unwrap().re - sqrt_pi).abs() < 1e-14);
        assert!((gamma(c(-0.5)).unwrap().re + 2.0 * sqrt_pi).abs() < 1e-13);
        assert!((gamma(c(-1.5)).unwrap().re - 4.0 * sqrt_pi / 3.0).abs() < 1e-13);
    }

    #[test]
    fn poles() {
        assert!(gamma(c(0.0)).is_err());
        assert!(gamma(c(-3.0)).is_err());
        assert_eq!(rgamma(c(-2.0)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn complex_recurrence() {
        let z = Complex64::new(0.3, 1.7);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm());
        // |Γ(iy)|² = π / (y sinh πy)
        let y = 1.3;
        let g = gamma(Complex64::new(0.0, y)).unwrap();
        assert!((g.norm_sqr() - PI / (y * (PI * y).sinh())).abs() < 1e-13);
    }
}
