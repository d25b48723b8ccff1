use std::f64::consts::TAU;

use num_complex::Complex64;
use ptkdv::charges::relative_drift;
use ptkdv::evolve::{evolve, spectral_derivative, step_integrating_factor, step_rk4, EvolveConfig, Integrator};
use ptkdv::model::{energy, DeformationParams, Field, Variant};
use ptkdv::verify::{cnoidal_benchmark, eps3_initial, EPS3_HORIZON};
use ptkdv::waves::{exact_solution, ExactKind};

fn sine_run(n: usize, dt: f64, steps: usize) -> Field {
    let params = DeformationParams::new(1.0, Variant::Scaled).unwrap();
    let f0 = Field::from_real_fn(n, TAU, f64::sin).unwrap();
    let mut cfg = EvolveConfig::new(n, TAU, dt * steps as f64);
    cfg.dt = dt;
    cfg.snapshot_stride = steps;
    let out = evolve(&f0, &cfg, &params).unwrap();
    assert!(out.abort.is_none());
    out.final_field
}

#[test]
fn derivative_examples() {
    let f = Field::from_fn(64, TAU, |x| Complex64::new(0.0, 2.0 * x).exp()).unwrap();
    let d3 = spectral_derivative(&f, 3).unwrap();
    for (d, u) in d3.values.iter().zip(&f.values) {
        assert!((d - Complex64::new(0.0, -8.0) * u).norm() < 1e-12);
    }
    let s = Field::from_real_fn(64, TAU, f64::sin).unwrap();
    let d1 = spectral_derivative(&s, 1).unwrap();
    for j in 0..64 {
        assert!((d1.values[j].re - s.x(j).cos()).abs() < 1e-13);
    }
    assert!(spectral_derivative(&s, 4).is_err());
}

#[test]
fn sine_run_matches_fine_reference() {
    let coarse = sine_run(128, 1e-3, 100);
    let fine = sine_run(512, 1e-4, 1000);
    let diff = (0..128).map(|j| (coarse.values[j] - fine.values[4 * j]).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-7, "coarse vs fine {diff:e}");
    let frozen = [(0, 0.321_709_892_650_214_4), (32, 0.817_589_790_180_042_4), (77, -0.412_626_647_062_050_5)];
    for (j, value) in frozen {
        assert!((coarse.values[j] - Complex64::new(value, 0.0)).norm() < 1e-7, "x_{j}: {}", coarse.values[j]);
    }
}

#[test]
fn one_cnoidal_step_is_locally_exact() {
    let bm = cnoidal_benchmark().unwrap();
    let dt = 1e-4;
    let exact = Field::from_fn(256, bm.length, |x| exact_solution(ExactKind::Cnoidal, x, dt, &bm.wave).unwrap()).unwrap();
    let lawson = step_integrating_factor(&bm.initial, &bm.params, dt, true).unwrap();
    let classic = step_rk4(&bm.initial, &bm.params, dt, true).unwrap();
    let halves = step_integrating_factor(&bm.initial, &bm.params, dt / 2.0, true).unwrap();
    let halves = step_integrating_factor(&halves, &bm.params, dt / 2.0, true).unwrap();
    assert!(lawson.distance(&exact) < 1e-12);
    assert!(classic.distance(&exact) < 1e-12);
    assert!(lawson.distance(&halves) < 1e-12);
}

#[test]
fn cnoidal_period_translates_back() {
    let bm = cnoidal_benchmark().unwrap();
    let steps = (bm.period / 1e-4).round() as usize;
    let mut cfg = EvolveConfig::new(256, bm.length, bm.period);
    cfg.dt = bm.period / steps as f64;
    cfg.snapshot_stride = steps;
    cfg.integrator = Integrator::IntegratingFactorRk4;
    let out = evolve(&bm.initial, &cfg, &bm.params).unwrap();
    assert!(out.abort.is_none());
    // cT is one wavelength, so the shifted profile is the initial one
    let err = out.final_field.distance(&bm.initial);
    assert!(err < 1e-5, "max-norm error {err:e}");
    for report in &out.charges {
        assert!(report.drift < 1e-8, "I{} drift {:e}", report.charge_index, report.drift);
    }
}

#[test]
fn zero_horizon_keeps_the_initial_field() {
    let bm = cnoidal_benchmark().unwrap();
    let cfg = EvolveConfig::new(256, bm.length, 0.0);
    let out = evolve(&bm.initial, &cfg, &bm.params).unwrap();
    assert_eq!(out.trajectory.snapshots.len(), 1);
    assert_eq!(out.trajectory.snapshots[0].field, bm.initial);
}

#[test]
fn eps3_charges_hold_over_short_horizon() {
    let params = DeformationParams::new(3.0, Variant::Scaled).unwrap();
    let f0 = eps3_initial().unwrap();
    let mut cfg = EvolveConfig::new(64, TAU, EPS3_HORIZON);
    cfg.dt = 1e-4;
    cfg.snapshot_stride = 100;
    let out = evolve(&f0, &cfg, &params).unwrap();
    assert!(out.abort.is_none());
    for report in &out.charges {
        assert_eq!(report.drift, relative_drift(&report.values));
        assert!(report.drift < 1e-6, "I{} drift {:e}", report.charge_index, report.drift);
    }
}

#[test]
fn pt_symmetric_orbit_keeps_real_energy() {
    let params = DeformationParams::new(3.0, Variant::Scaled).unwrap();
    // real cosine plus imaginary sine is invariant under x -> -x with conjugation
    let f0 = Field::from_fn(64, TAU, |x| Complex64::new(2.0 + 0.1 * x.cos(), 0.05 * x.sin())).unwrap();
    let mut cfg = EvolveConfig::new(64, TAU, 0.05);
    cfg.dt = 1e-4;
    cfg.snapshot_stride = 50;
    let out = evolve(&f0, &cfg, &params).unwrap();
    assert!(out.abort.is_none());
    for s in &out.trajectory.snapshots {
        let e = energy(&s.field, &params).unwrap();
        assert!(e.im.abs() <= 1e-6 * (1.0 + e.norm()), "t = {}: E = {e}", s.t);
    }
}
