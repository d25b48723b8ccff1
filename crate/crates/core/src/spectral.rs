//! Fourier operations on periodic complex grids.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type Plans = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

thread_local! {
    static PLANS: RefCell<HashMap<usize, Plans>> = RefCell::new(HashMap::new());
}

fn plans(n: usize) -> Plans {
    PLANS.with(|cell| {
        cell.borrow_mut()
            .entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
            })
            .clone()
    })
}

pub(crate) fn forward(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    plans(buf.len()).0.process(&mut buf);
    buf
}

/// Inverse transform including the 1/N normalisation.
pub(crate) fn inverse(mut spec: Vec<Complex64>) -> Vec<Complex64> {
    let n = spec.len();
    plans(n).1.process(&mut spec);
    let scale = 1.0 / n as f64;
    spec.iter_mut().for_each(|z| *z *= scale);
    spec
}

/// Signed mode index of FFT slot `j`; the Nyquist slot maps to `+n/2`.
pub(crate) fn mode(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn is_nyquist(j: usize, n: usize) -> bool {
    n.is_multiple_of(2) && j == n / 2
}

/// Multiply every mode by `(i k)^order`, zeroing Nyquist for odd orders.
pub(crate) fn differentiate_spectrum(spec: &[Complex64], length: f64, order: u32) -> Vec<Complex64> {
    let n = spec.len();
    let base = 2.0 * PI / length;
    spec.iter()
        .enumerate()
        .map(|(j, &z)| {
            if order % 2 == 1 && is_nyquist(j, n) {
                return Complex64::new(0.0, 0.0);
            }
            let k = base * mode(j, n) as f64;
            z * Complex64::new(0.0, k).powu(order)
        })
        .collect()
}

/// Zero the modes that sit at the rounding level of the largest one, so
/// that differentiation does not amplify transform noise by `k³`.
pub(crate) fn drop_noise(spec: &mut [Complex64]) {
    let peak = spec.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = NOISE_FLOOR * peak;
    for z in spec.iter_mut() {
        if z.norm() <= floor {
            *z = Complex64::new(0.0, 0.0);
        }
    }
}

const NOISE_FLOOR: f64 = 8.0 * f64::EPSILON;

pub(crate) fn derivative(values: &[Complex64], length: f64, order: u32) -> Vec<Complex64> {
    if order == 0 {
        return values.to_vec();
    }
    let mut spec = forward(values);
    drop_noise(&mut spec);
    inverse(differentiate_spectrum(&spec, length, order))
}

/// First three derivatives from a single forward transform.
pub(crate) fn derivatives3(values: &[Complex64], length: f64) -> [Vec<Complex64>; 3] {
    let mut spec = forward(values);
    drop_noise(&mut spec);
    [1, 2, 3].map(|order| inverse(differentiate_spectrum(&spec, length, order)))
}

/// Zero every mode with `|j| > n/3`.
pub(crate) fn dealias_spectrum(spec: &mut [Complex64]) {
    let n = spec.len();
    let cutoff = (n / 3) as i64;
    for (j, z) in spec.iter_mut().enumerate() {
        if mode(j, n).abs() > cutoff {
            *z = Complex64::new(0.0, 0.0);
        }
    }
}

pub(crate) fn dealias(values: &[Complex64]) -> Vec<Complex64> {
    let mut spec = forward(values);
    dealias_spectrum(&mut spec);
    inverse(spec)
}

/// Samples of `u(x − s)` by trigonometric interpolation. The Nyquist mode
/// is treated as a cosine so real fields stay real.
pub(crate) fn shift(values: &[Complex64], length: f64, s: f64) -> Vec<Complex64> {
    let n = values.len();
    let base = 2.0 * PI / length;
    let spec: Vec<Complex64> = forward(values)
        .into_iter()
        .enumerate()
        .map(|(j, z)| {
            let k = base * mode(j, n) as f64;
            if is_nyquist(j, n) {
                z * (k * s).cos()
            } else {
                z * Complex64::from_polar(1.0, -k * s)
            }
        })
        .collect();
    inverse(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect()
    }

    #[test]
    fn round_trip() {
        let v = grid(32, |x| Complex64::new(x.sin(), x.cos() * 0.5));
        let back = inverse(forward(&v));
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn shift_by_half_period() {
        let v = grid(64, |x| Complex64::new(x.sin() + 0.2 * (3.0 * x).cos(), 0.0));
        let w = shift(&v, 2.0 * PI, PI);
        let expect = grid(64, |x| Complex64::new(-x.sin() - 0.2 * (3.0 * x).cos(), 0.0));
        for (a, b) in w.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn dealias_keeps_low_modes() {
        let v = grid(48, |x| Complex64::new(0.0, 4.0 * x).exp() + Complex64::new(0.0, 20.0 * x).exp());
        let w = dealias(&v);
        let expect = grid(48, |x| Complex64::new(0.0, 4.0 * x).exp());
        for (a, b) in w.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
