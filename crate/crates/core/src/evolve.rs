//! Pseudospectral time stepping of the deformed equations.
//!
//! Spatial derivatives are Fourier; time stepping is classical RK4. When
//! ε = 1 the dispersive term is the linear `u_xxx`, and the default
//! integrator switches to the integrating-factor (Lawson) form of RK4 that
//! propagates that term exactly. For every other ε the term is nonlinear
//! in `u_x` and plain RK4 is used.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charges::ChargeReport;
use crate::error::{Error, Result};
use crate::io::atomic_write;
use crate::model::{eom_rhs, DeformationParams, Field, Variant};
use crate::spectral;

/// Fields whose modulus exceeds this abort the run.
pub const BLOW_UP_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// Integrating factor when the dispersion is linear, RK4 otherwise.
    #[default]
    Auto,
    Rk4,
    IntegratingFactorRk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveConfig {
    pub grid_points: usize,
    pub domain_length: f64,
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_stride: usize,
    pub dealias: bool,
    pub singular_clamp: Option<f64>,
    #[serde(default)]
    pub integrator: Integrator,
}

impl EvolveConfig {
    /// Config with the conservative step `0.1 dx³`, dealiasing on and a
    /// snapshot every step.
    pub fn new(grid_points: usize, domain_length: f64, t_final: f64) -> Self {
        let dx = domain_length / grid_points as f64;
        EvolveConfig {
            grid_points,
            domain_length,
            dt: 0.1 * dx * dx * dx,
            t_final,
            snapshot_stride: 1,
            dealias: true,
            singular_clamp: None,
            integrator: Integrator::Auto,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 16 || !self.grid_points.is_power_of_two() {
            return Err(Error::Config(format!("grid_points must be a power of two >= 16, got {}", self.grid_points)));
        }
        if !(self.domain_length > 0.0 && self.domain_length.is_finite()) {
            return Err(Error::Config(format!("domain_length must be positive, got {}", self.domain_length)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config(format!("t_final must be non-negative, got {}", self.t_final)));
        }
        if self.t_final > 0.0 && self.t_final < self.dt * (1.0 - 1e-12) {
            return Err(Error::Config(format!("t_final = {} is shorter than one step dt = {}", self.t_final, self.dt)));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::Config("snapshot_stride must be at least 1".into()));
        }
        if let Some(d) = self.singular_clamp {
            if !(d > 0.0) {
                return Err(Error::Config(format!("singular clamp must be positive, got {d}")));
            }
        }
        Ok(())
    }

    /// Number of steps and the step actually taken (`t_final / steps`).
    pub fn schedule(&self) -> (usize, f64) {
        if self.t_final == 0.0 {
            return (0, self.dt);
        }
        let steps = (self.t_final / self.dt - 1e-9).ceil().max(1.0) as usize;
        (steps, self.t_final / steps as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub field: Field,
}

/// Uniformly spaced snapshots of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    pub dt: f64,
    pub params: DeformationParams,
}

impl Trajectory {
    /// Time between consecutive snapshots.
    pub fn snapshot_spacing(&self) -> f64 {
        match self.snapshots.as_slice() {
            [a, b, ..] => b.t - a.t,
            _ => self.dt,
        }
    }

    /// Write one `snapshot_NNNNN.csv` per snapshot plus a `trajectory.json`
    /// index, removing snapshot files left over from an earlier, longer run.
    /// Returns every file written.
    pub fn write_dir(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            let stale = path
                .file_name()
                .and_then(|n| n.to_str())
                .and_then(|n| n.strip_prefix("snapshot_")?.strip_suffix(".csv")?.parse::<usize>().ok())
                .is_some_and(|i| i >= self.snapshots.len());
            if stale {
                std::fs::remove_file(&path)?;
            }
        }
        let mut files = Vec::with_capacity(self.snapshots.len() + 1);
        let mut entries = Vec::with_capacity(self.snapshots.len());
        for (i, s) in self.snapshots.iter().enumerate() {
            let name = format!("snapshot_{i:05}.csv");
            let path = dir.join(&name);
            atomic_write(&path, s.field.to_csv().as_bytes())?;
            files.push(path);
            entries.push(IndexEntry { t: s.t, file: name });
        }
        let index = TrajectoryIndex { dt: self.dt, params: self.params, snapshots: entries };
        let path = dir.join("trajectory.json");
        atomic_write(&path, serde_json::to_string_pretty(&index)?.as_bytes())?;
        files.push(path);
        Ok(files)
    }

    pub fn read_dir(dir: &Path) -> Result<Trajectory> {
        let text = std::fs::read_to_string(dir.join("trajectory.json"))?;
        let index: TrajectoryIndex = serde_json::from_str(&text)?;
        let mut snapshots = Vec::with_capacity(index.snapshots.len());
        for e in &index.snapshots {
            let field = Field::read(&dir.join(&e.file))?;
            if let Some(first) = snapshots.first() {
                let first: &Snapshot = first;
                if field.len() != first.field.len() {
                    return Err(Error::Parse(format!("{}: grid size differs from the first snapshot", e.file)));
                }
            }
            snapshots.push(Snapshot { t: e.t, field });
        }
        if snapshots.is_empty() {
            return Err(Error::Parse("trajectory index lists no snapshots".into()));
        }
        let traj = Trajectory { snapshots, dt: index.dt, params: index.params };
        traj.check_uniform()?;
        Ok(traj)
    }

    fn check_uniform(&self) -> Result<()> {
        let h = self.snapshot_spacing();
        for (i, w) in self.snapshots.windows(2).enumerate() {
            let d = w[1].t - w[0].t;
            if !(d > 0.0) || (d - h).abs() > 1e-9 * h.abs().max(1e-300) {
                return Err(Error::Parse(format!("snapshot times are not uniform at index {}", i + 1)));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct IndexEntry {
    t: f64,
    file: String,
}

#[derive(Serialize, Deserialize)]
struct TrajectoryIndex {
    dt: f64,
    params: DeformationParams,
    snapshots: Vec<IndexEntry>,
}

/// Result of [`evolve`]. A run that aborts keeps every snapshot taken
/// before the failure and records the reason in `abort`.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub trajectory: Trajectory,
    /// State after the last completed step (not necessarily a snapshot).
    pub final_field: Field,
    pub final_time: f64,
    pub charges: Vec<ChargeReport>,
    pub abort: Option<Error>,
}

/// Fourier derivative of order 1, 2 or 3.
pub fn spectral_derivative(f: &Field, order: u32) -> Result<Field> {
    if !(1..=3).contains(&order) {
        return Err(Error::Config(format!("derivative order must be 1, 2 or 3, got {order}")));
    }
    Ok(f.derivative(order))
}

/// Whether `integrator` resolves to the integrating-factor scheme for
/// `params`.
pub fn uses_integrating_factor(integrator: Integrator, params: &DeformationParams) -> Result<bool> {
    let linear = params.epsilon == 1.0;
    match integrator {
        Integrator::Auto => Ok(linear),
        Integrator::Rk4 => Ok(false),
        Integrator::IntegratingFactorRk4 if linear => Ok(true),
        Integrator::IntegratingFactorRk4 => Err(Error::Config(format!(
            "the integrating-factor scheme needs linear dispersion (epsilon = 1), got epsilon = {}",
            params.epsilon
        ))),
    }
}

fn check_finite(f: &Field, t: f64) -> Result<()> {
    for (index, z) in f.values.iter().enumerate() {
        let r = z.norm();
        if !(r <= BLOW_UP_THRESHOLD) {
            return Err(Error::BlowUp { t, index, max_abs: r });
        }
    }
    Ok(())
}

fn stage_rhs(f: &Field, params: &DeformationParams, dealias: bool) -> Result<Vec<Complex64>> {
    let r = eom_rhs(f, params)?;
    Ok(if dealias { spectral::dealias(&r.values) } else { r.values })
}

/// One classical RK4 step of `u_t = eom_rhs(u)`.
pub fn step_rk4(f: &Field, params: &DeformationParams, dt: f64, dealias: bool) -> Result<Field> {
    let axpy = |a: f64, k: &[Complex64]| f.with_values(f.values.iter().zip(k).map(|(u, d)| u + a * d).collect());
    let k1 = stage_rhs(f, params, dealias)?;
    let k2 = stage_rhs(&axpy(0.5 * dt, &k1), params, dealias)?;
    let k3 = stage_rhs(&axpy(0.5 * dt, &k2), params, dealias)?;
    let k4 = stage_rhs(&axpy(dt, &k3), params, dealias)?;
    let values = (0..f.len())
        .map(|j| f.values[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]))
        .collect();
    Ok(f.with_values(values))
}

// Everything except the dispersive term, in Fourier space.
fn advective_spectrum(spec: &[Complex64], length: f64, params: &DeformationParams, dealias: bool) -> Vec<Complex64> {
    let u = spectral::inverse(spec.to_vec());
    let ux = spectral::inverse(spectral::differentiate_spectrum(spec, length, 1));
    let vals: Vec<Complex64> = u
        .iter()
        .zip(&ux)
        .map(|(a, b)| match params.variant {
            Variant::Unscaled => -a * b,
            Variant::Scaled => 6.0 * a * b + params.kappa,
        })
        .collect();
    let mut out = spectral::forward(&vals);
    if dealias {
        spectral::dealias_spectrum(&mut out);
    }
    out
}

/// One Lawson RK4 step for ε = 1, where `u_t = N(u) − u_xxx` and the
/// linear part is integrated exactly.
pub fn step_integrating_factor(f: &Field, params: &DeformationParams, dt: f64, dealias: bool) -> Result<Field> {
    if params.epsilon != 1.0 {
        return Err(Error::Config("integrating-factor step needs epsilon = 1".into()));
    }
    let n = f.len();
    let base = 2.0 * std::f64::consts::PI / f.length;
    // -∂³ in Fourier space is multiplication by i k³
    let half: Vec<Complex64> = (0..n)
        .map(|j| {
            let k = base * spectral::mode(j, n) as f64;
            Complex64::from_polar(1.0, 0.5 * dt * k * k * k)
        })
        .collect();
    let v = spectral::forward(&f.values);
    let nl = |s: &[Complex64]| advective_spectrum(s, f.length, params, dealias);
    let a = nl(&v);
    let s2: Vec<Complex64> = (0..n).map(|j| half[j] * (v[j] + 0.5 * dt * a[j])).collect();
    let b = nl(&s2);
    let s3: Vec<Complex64> = (0..n).map(|j| half[j] * v[j] + 0.5 * dt * b[j]).collect();
    let c = nl(&s3);
    let s4: Vec<Complex64> = (0..n).map(|j| half[j] * half[j] * v[j] + dt * half[j] * c[j]).collect();
    let d = nl(&s4);
    let next: Vec<Complex64> = (0..n)
        .map(|j| {
            let e = half[j];
            e * e * v[j] + dt / 6.0 * (e * e * a[j] + 2.0 * e * (b[j] + c[j]) + d[j])
        })
        .collect();
    Ok(f.with_values(spectral::inverse(next)))
}

/// Integrate from `f0` to `cfg.t_final`, keeping a snapshot every
/// `snapshot_stride` steps and attaching the three charge reports.
pub fn evolve(f0: &Field, cfg: &EvolveConfig, params: &DeformationParams) -> Result<Evolution> {
    cfg.validate()?;
    params.validate()?;
    if f0.len() != cfg.grid_points || (f0.length - cfg.domain_length).abs() > 1e-12 * cfg.domain_length {
        return Err(Error::Config(format!(
            "initial field has {} points on length {}, config expects {} on {}",
            f0.len(),
            f0.length,
            cfg.grid_points,
            cfg.domain_length
        )));
    }
    let params = DeformationParams { singular_clamp: cfg.singular_clamp.or(params.singular_clamp), ..*params };
    let lawson = uses_integrating_factor(cfg.integrator, &params)?;
    let (steps, dt) = cfg.schedule();

    let mut u = f0.clone();
    let mut t = 0.0;
    let mut snapshots = vec![Snapshot { t, field: u.clone() }];
    let mut abort = check_finite(&u, t).err();
    if abort.is_none() && params.has_negative_power() {
        // surface singular initial data before the first step
        abort = eom_rhs(&u, &params).err();
    }
    if abort.is_none() {
        for step in 1..=steps {
            let next = if lawson {
                step_integrating_factor(&u, &params, dt, cfg.dealias)
            } else {
                step_rk4(&u, &params, dt, cfg.dealias)
            };
            let t_next = step as f64 * dt;
            match next.and_then(|f| check_finite(&f, t_next).map(|_| f)) {
                Ok(f) => {
                    u = f;
                    t = t_next;
                }
                Err(e) => {
                    abort = Some(e);
                    break;
                }
            }
            if step % cfg.snapshot_stride == 0 {
                snapshots.push(Snapshot { t, field: u.clone() });
            }
        }
    }
    let trajectory = Trajectory { snapshots, dt, params };
    let charges = (1..=3).map(|n| ChargeReport::from_trajectory(n, &trajectory, &params)).collect::<Result<Vec<_>>>();
    let charges = match charges {
        Ok(c) => c,
        // charges of a field that blew up are not meaningful
        Err(_) if abort.is_some() => Vec::new(),
        Err(e) => return Err(e),
    };
    Ok(Evolution { trajectory, final_field: u, final_time: t, charges, abort })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn derivative_examples() {
        let f = Field::from_real_fn(32, TAU, f64::sin).unwrap();
        let d = spectral_derivative(&f, 1).unwrap();
        for j in 0..f.len() {
            assert!((d.values[j] - c(f.x(j).cos())).norm() < 1e-12);
        }
        let k = Field::constant(16, 2.0, c(3.0)).unwrap();
        for order in 1..=3 {
            assert!(spectral_derivative(&k, order).unwrap().max_abs() < 1e-13);
        }
        let e = Field::from_fn(32, TAU, |x| Complex64::new(0.0, 2.0 * x).exp()).unwrap();
        let d3 = spectral_derivative(&e, 3).unwrap();
        for j in 0..e.len() {
            let expect = Complex64::new(0.0, -8.0) * e.values[j];
            assert!((d3.values[j] - expect).norm() < 1e-11);
        }
        assert!(spectral_derivative(&e, 4).is_err());
    }

    #[test]
    fn constant_state_is_fixed() {
        let p = DeformationParams::new(3.0, Variant::Scaled).unwrap();
        let f = Field::constant(32, 5.0, c(0.4)).unwrap();
        let g = step_rk4(&f, &p, 1e-3, true).unwrap();
        assert!(g.distance(&f) < 1e-15);
    }

    #[test]
    fn zero_horizon_gives_single_snapshot() {
        let p = DeformationParams::new(1.0, Variant::Unscaled).unwrap();
        let f = Field::from_real_fn(32, TAU, f64::sin).unwrap();
        let mut cfg = EvolveConfig::new(32, TAU, 0.0);
        cfg.dt = 1e-3;
        let run = evolve(&f, &cfg, &p).unwrap();
        assert_eq!(run.trajectory.snapshots.len(), 1);
        assert_eq!(run.trajectory.snapshots[0].field, f);
        assert!(run.charges.iter().all(|r| r.drift == 0.0 && r.flux_residual.is_none()));
    }

    #[test]
    fn integrators_agree_at_eps_one() {
        let p = DeformationParams::new(1.0, Variant::Unscaled).unwrap();
        let f = Field::from_real_fn(32, TAU, |x| 0.5 * x.sin()).unwrap();
        let mut a = f.clone();
        let mut b = f.clone();
        for _ in 0..200 {
            a = step_rk4(&a, &p, 1e-4, true).unwrap();
            b = step_integrating_factor(&b, &p, 1e-4, true).unwrap();
        }
        assert!(a.distance(&b) < 1e-9, "{}", a.distance(&b));
    }

    #[test]
    fn singular_start_aborts_with_location() {
        let p = DeformationParams::new(1.5, Variant::Scaled).unwrap();
        let f = Field::from_real_fn(16, TAU, f64::sin).unwrap();
        let mut cfg = EvolveConfig::new(16, TAU, 1e-3);
        cfg.dt = 1e-4;
        let run = evolve(&f, &cfg, &p).unwrap();
        assert!(matches!(run.abort, Some(Error::Singularity { .. })));
        assert_eq!(run.trajectory.snapshots.len(), 1);
    }

    #[test]
    fn blow_up_is_reported() {
        let p = DeformationParams::new(1.0, Variant::Unscaled).unwrap();
        let f = Field::constant(16, TAU, c(1e13)).unwrap();
        let run = evolve(&f, &EvolveConfig { dt: 1e-3, ..EvolveConfig::new(16, TAU, 1e-2) }, &p).unwrap();
        assert!(matches!(run.abort, Some(Error::BlowUp { .. })));
    }

    #[test]
    fn config_validation() {
        let mut cfg = EvolveConfig::new(24, 1.0, 1.0);
        assert!(cfg.validate().is_err());
        cfg.grid_points = 32;
        assert!(cfg.validate().is_ok());
        cfg.snapshot_stride = 0;
        assert!(cfg.validate().is_err());
        let cfg = EvolveConfig { dt: 0.3, ..EvolveConfig::new(32, 1.0, 1.0) };
        assert_eq!(cfg.schedule().0, 4);
    }

    #[test]
    fn trajectory_round_trip() {
        let p = DeformationParams::new(1.0, Variant::Unscaled).unwrap();
        let f = Field::from_real_fn(16, TAU, |x| 0.1 * x.cos()).unwrap();
        let cfg = EvolveConfig { dt: 1e-3, snapshot_stride: 2, ..EvolveConfig::new(16, TAU, 6e-3) };
        let run = evolve(&f, &cfg, &p).unwrap();
        let dir = tempfile::tempdir().unwrap();
        run.trajectory.write_dir(dir.path()).unwrap();
        let back = Trajectory::read_dir(dir.path()).unwrap();
        assert_eq!(back.snapshots.len(), 4);
        assert_eq!(back.snapshots[3].field.values, run.trajectory.snapshots[3].field.values);
    }
}
