//! Complex special functions used by the traveling-wave curves: Pochhammer
//! symbols, Gauss ₂F₁, Appell F₁, the continued incomplete beta function,
//! Γ, Jacobi `dn`, and the explicit branch phases.
//!
//! Multi-valuedness is handled in one place: every complex power goes
//! through [`branch_power`] (principal branch), and sheet selection enters
//! only through [`branch_phase_vx`] / [`branch_phase_xt`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod beta;
mod elliptic;
mod gamma;
mod hyper;
pub mod quad;

pub use beta::{beta, incomplete_beta, incomplete_beta_with};
pub use elliptic::{ellipk, jacobi_dn, jacobi_sn_cn_dn};
pub use gamma::{gamma, gamma_real, rgamma};
pub use hyper::{appell_f1, appell_f1_quadrature, appell_f1_series, appell_f1_with_route, gauss_2f1, F1Route};

/// Truncation control for the hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Series are used strictly inside this radius; transformations or
    /// quadrature take over outside it.
    pub convergence_radius_guard: f64,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize, convergence_radius_guard: f64) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::Config(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::Config("max_terms must be at least 1".into()));
        }
        if !(convergence_radius_guard > 0.0 && convergence_radius_guard < 1.0) {
            return Err(Error::Config(format!(
                "convergence radius guard must lie in (0, 1), got {convergence_radius_guard}"
            )));
        }
        Ok(SeriesControl { rel_tol, max_terms, convergence_radius_guard })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl { rel_tol: 1e-12, max_terms: 100_000, convergence_radius_guard: 0.95 }
    }
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1).
pub fn pochhammer(a: Complex64, n: u64) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (a + k as f64))
}

/// Principal power `exp(p Log z)`, `Log` with imaginary part in (−π, π].
///
/// `z = 0` gives 1 for `p = 0`, 0 for `p > 0` and a pole error for `p < 0`.
pub fn branch_power(z: Complex64, p: f64) -> Result<Complex64> {
    if p == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if z.re == 0.0 && z.im == 0.0 {
        if p > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::Pole(format!("0 raised to the negative power {p}")));
    }
    // -0.0 imaginary parts would put negative reals on arg = -π
    let z = Complex64::new(z.re, if z.im == 0.0 { 0.0 } else { z.im });
    if p.fract() == 0.0 && p.abs() <= 64.0 {
        return Ok(z.powi(p as i32));
    }
    Ok((z.ln() * p).exp())
}

fn check_phase_epsilon(epsilon: f64) -> Result<()> {
    if epsilon == -1.0 {
        return Err(Error::Pole("branch phase is singular at epsilon = -1".into()));
    }
    if !epsilon.is_finite() {
        return Err(Error::Domain(format!("epsilon = {epsilon} is not finite")));
    }
    Ok(())
}

fn unit_phase(half_turns: f64) -> Complex64 {
    // reduce before exponentiating so integer multiples of π stay exact
    let r = half_turns.rem_euclid(2.0);
    if r == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    if r == 1.0 {
        return Complex64::new(-1.0, 0.0);
    }
    if r == 0.5 {
        return Complex64::new(0.0, 1.0);
    }
    if r == 1.5 {
        return Complex64::new(0.0, -1.0);
    }
    Complex64::from_polar(1.0, PI * r)
}

/// Sheet factor of the reduced first-order equation for `v_x`:
/// `exp(iπ(4n + 3ε + 1) / (2(1+ε)))`.
pub fn branch_phase_vx(epsilon: f64, n: i64) -> Result<Complex64> {
    check_phase_epsilon(epsilon)?;
    Ok(unit_phase((4.0 * n as f64 + 3.0 * epsilon + 1.0) / (2.0 * (1.0 + epsilon))))
}

/// Sheet factor of the separated solution `x − ct(v)`:
/// `exp(iπ(4n + ε − 1) / (2(1+ε)))`.
pub fn branch_phase_xt(epsilon: f64, n: i64) -> Result<Complex64> {
    check_phase_epsilon(epsilon)?;
    Ok(unit_phase((4.0 * n as f64 + epsilon - 1.0) / (2.0 * (1.0 + epsilon))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(Complex64::new(2.5, -1.0), 0), c(1.0));
        assert_eq!(pochhammer(c(1.0), 4), c(24.0));
        assert!((pochhammer(c(0.5), 3) - c(1.875)).norm() < 1e-15);
    }

    #[test]
    fn branch_power_principal() {
        assert!((branch_power(Complex64::i(), 2.0).unwrap() - c(-1.0)).norm() < 1e-15);
        assert_eq!(branch_power(c(1.0), 0.37).unwrap(), c(1.0));
        assert!((branch_power(c(-1.0), 0.5).unwrap() - Complex64::i()).norm() < 1e-15);
        // -0.0 imaginary part must not flip the sheet
        let z = Complex64::new(-4.0, -0.0);
        assert!((branch_power(z, 0.5).unwrap() - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        assert!(branch_power(c(0.0), -0.5).is_err());
        assert_eq!(branch_power(c(0.0), 0.0).unwrap(), c(1.0));
    }

    #[test]
    fn phases() {
        assert_eq!(branch_phase_vx(1.0, 0).unwrap(), c(-1.0));
        assert_eq!(branch_phase_vx(1.0, 1).unwrap(), c(1.0));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((branch_phase_vx(3.0, 2).unwrap() - Complex64::new(h, h)).norm() < 1e-15);
        assert_eq!(branch_phase_xt(1.0, 0).unwrap(), c(1.0));
        assert_eq!(branch_phase_xt(1.0, 1).unwrap(), c(-1.0));
        assert!((branch_phase_xt(3.0, 1).unwrap() - Complex64::from_polar(1.0, 0.75 * PI)).norm() < 1e-15);
        assert!(branch_phase_vx(-1.0, 0).is_err());
        assert!(branch_phase_xt(-1.0, 3).is_err());
    }

    #[test]
    fn vx_phase_alternates_at_eps_one() {
        for n in -10..10 {
            let p = branch_phase_vx(1.0, n).unwrap();
            let expect = if n % 2 == 0 { -1.0 } else { 1.0 };
            assert_eq!(p, c(expect), "n={n}");
        }
    }

    #[test]
    fn inverse_vx_phase_is_xt_phase_of_mirrored_label() {
        for eps in [0.5, 1.0, 3.0, 5.0, 11.0, 2.7] {
            for n in -6..6 {
                let lhs = 1.0 / branch_phase_vx(eps, n).unwrap();
                let rhs = branch_phase_xt(eps, 1 - n).unwrap();
                assert!((lhs - rhs).norm() < 1e-13, "eps={eps} n={n}");
            }
        }
    }

    #[test]
    fn control_validation() {
        assert!(SeriesControl::new(0.0, 10, 0.9).is_err());
        assert!(SeriesControl::new(1e-10, 0, 0.9).is_err());
        assert!(SeriesControl::new(1e-10, 10, 1.0).is_err());
        assert!(SeriesControl::new(1e-10, 10, 0.9).is_ok());
    }
}
