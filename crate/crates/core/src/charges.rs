//! Conserved charges `I⁽ⁿ⁾ = ∫ T⁽ⁿ⁾ dx`, their fluxes and the residual of
//! `T_t + X_x = 0` along trajectories.
//!
//! | n | density `T⁽ⁿ⁾` | flux `X⁽ⁿ⁾` |
//! |---|----------------|-------------|
//! | 1 | `u` | `−3u² + ε(iu_x)^{ε−1}u_xx` |
//! | 2 | `u²` | `2ε/(1+ε)(iu_x)^{ε+1} + 2εu(iu_x)^{ε−1}u_xx − 4u³` |
//! | 3 | `𝓗` | `(ε²/2 − ε)(iu_x)^{2ε−2}u_xx² + 3(εu u_xx − 2u_x²)u(iu_x)^{ε−1} − iε(iu_x)^{2ε−1}u_xxx − (9/2)u⁴` |
//!
//! The fluxes belong to the scaled equation with κ = 0.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::Trajectory;
use crate::model::{deformed_power, hamiltonian_density, DeformationParams, Field};
use crate::spectral;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Deliberate corruptions used to check that the verification suite can
/// fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    None,
    /// Flip the overall sign of `X⁽³⁾`.
    FlipX3Sign,
}

fn check_index(n: i64) -> Result<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(Error::ChargeIndex(n))
    }
}

/// Pointwise conserved density `T⁽ⁿ⁾`.
pub fn density(n: i64, f: &Field, params: &DeformationParams) -> Result<Field> {
    check_index(n)?;
    let values = match n {
        1 => f.values.clone(),
        2 => f.values.iter().map(|u| u * u).collect(),
        _ => {
            let ux = spectral::derivative(&f.values, f.length, 1);
            f.values
                .iter()
                .zip(&ux)
                .map(|(u, d)| hamiltonian_density(*u, *d, params))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(f.with_values(values))
}

pub fn charge(n: i64, f: &Field, params: &DeformationParams) -> Result<Complex64> {
    Ok(density(n, f, params)?.integral())
}

pub fn flux(n: i64, f: &Field, params: &DeformationParams) -> Result<Field> {
    flux_with(n, f, params, Mutation::None)
}

pub fn flux_with(n: i64, f: &Field, params: &DeformationParams, mutation: Mutation) -> Result<Field> {
    check_index(n)?;
    let e = params.epsilon;
    let bf = params.branch_factor();
    let [ux, uxx, uxxx] = spectral::derivatives3(&f.values, f.length);
    // (iu_x)^{jε + q} carries the branch phase bf^j
    let pw = |j: usize, q: f64, coef: f64, idx: usize| -> Result<Complex64> {
        if coef == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(coef * deformed_power(ux[idx], j as f64 * e + q, idx, params)? * bf.powu(j as u32))
    };
    let mut out = Vec::with_capacity(f.len());
    for idx in 0..f.len() {
        let (u, d1, d2, d3) = (f.values[idx], ux[idx], uxx[idx], uxxx[idx]);
        let x = match n {
            1 => -3.0 * u * u + pw(1, -1.0, e, idx)? * d2,
            2 => pw(1, 1.0, 2.0 * e / (1.0 + e), idx)? + 2.0 * u * pw(1, -1.0, e, idx)? * d2 - 4.0 * u * u * u,
            _ => {
                let x3 = pw(2, -2.0, e * e / 2.0 - e, idx)? * d2 * d2
                    + 3.0 * (e * u * d2 - 2.0 * d1 * d1) * u * pw(1, -1.0, 1.0, idx)?
                    - I * pw(2, -1.0, e, idx)? * d3
                    - 4.5 * u * u * u * u;
                match mutation {
                    Mutation::None => x3,
                    Mutation::FlipX3Sign => -x3,
                }
            }
        };
        out.push(x);
    }
    Ok(f.with_values(out))
}

/// `max |∂_t T⁽ⁿ⁾ + ∂_x X⁽ⁿ⁾|` over interior snapshots, with a centred
/// difference in time and a spectral derivative in space.
pub fn conservation_residual(n: i64, traj: &Trajectory, params: &DeformationParams) -> Result<f64> {
    conservation_residual_with(n, traj, params, Mutation::None)
}

pub fn conservation_residual_with(n: i64, traj: &Trajectory, params: &DeformationParams, mutation: Mutation) -> Result<f64> {
    check_index(n)?;
    let snaps = &traj.snapshots;
    if snaps.len() < 3 {
        return Err(Error::InsufficientSamples(format!(
            "conservation residual needs at least 3 snapshots, got {}",
            snaps.len()
        )));
    }
    let spacing = traj.snapshot_spacing();
    let densities = snaps.iter().map(|s| density(n, &s.field, params)).collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for i in 1..snaps.len() - 1 {
        let xx = flux_with(n, &snaps[i].field, params, mutation)?.derivative(1);
        for j in 0..xx.len() {
            let tt = (densities[i + 1].values[j] - densities[i - 1].values[j]) / (2.0 * spacing);
            worst = worst.max((tt + xx.values[j]).norm());
        }
    }
    Ok(worst)
}

/// Time series of one charge along a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeReport {
    pub charge_index: i64,
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
    /// `max |I(t) − I(0)| / (1 + |I(0)|)`.
    pub drift: f64,
    /// Conservation-law residual; absent for trajectories with fewer than
    /// three snapshots.
    pub flux_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeSummary {
    pub charge_index: i64,
    pub drift: f64,
    pub flux_residual: Option<f64>,
}

impl ChargeReport {
    pub fn from_trajectory(n: i64, traj: &Trajectory, params: &DeformationParams) -> Result<Self> {
        check_index(n)?;
        let mut times = Vec::with_capacity(traj.snapshots.len());
        let mut values = Vec::with_capacity(traj.snapshots.len());
        for s in &traj.snapshots {
            times.push(s.t);
            values.push(charge(n, &s.field, params)?);
        }
        let drift = relative_drift(&values);
        let flux_residual = if traj.snapshots.len() >= 3 { Some(conservation_residual(n, traj, params)?) } else { None };
        Ok(ChargeReport { charge_index: n, times, values, drift, flux_residual })
    }

    pub fn summary(&self) -> ChargeSummary {
        ChargeSummary { charge_index: self.charge_index, drift: self.drift, flux_residual: self.flux_residual }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re,im\n");
        for (t, v) in self.times.iter().zip(&self.values) {
            let _ = writeln!(out, "{t:.16e},{:.16e},{:.16e}", v.re, v.im);
        }
        out
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.summary())?)
    }
}

pub fn relative_drift(values: &[Complex64]) -> f64 {
    let Some(first) = values.first() else {
        return 0.0;
    };
    let scale = 1.0 + first.norm();
    values.iter().map(|v| (v - first).norm() / scale).fold(0.0, f64::max)
}
