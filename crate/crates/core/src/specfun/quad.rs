//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands
//! of a real variable, with global error control.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).norm();
    Panel { a, b, value, err }
}

/// Integrate `f` over `[a, b]` until the summed error estimate falls below
/// `max(abs_tol, rel_tol * |I|)`. Returns the value and the error estimate.
pub fn integrate<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64,
{
    const MAX_PANELS: usize = 4000;
    if a == b {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let mut panels = vec![gk15(&f, a, b)];
    loop {
        let total: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if !total.is_finite() {
            return Err(Error::NonConvergence(format!(
                "quadrature on [{a}, {b}] produced a non-finite value"
            )));
        }
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, err));
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::NonConvergence(format!(
                "quadrature on [{a}, {b}] stalled at error {err:e} after {MAX_PANELS} panels"
            )));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("panel list is never empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::NonConvergence(format!(
                "quadrature panel near {mid} cannot be bisected further"
            )));
        }
        panels.push(gk15(&f, p.a, mid));
        panels.push(gk15(&f, mid, p.b));
    }
}

/// Integrate over `[a, b]` where the integrand may carry integrable algebraic
/// endpoint behaviour `(t-a)^lambda_a` and `(b-t)^lambda_b` (`lambda > -1`).
///
/// Each half of the interval is mapped by `t = end ± h s^r` with `r` chosen so
/// that the transformed integrand vanishes like `s²` or faster, then handed to
/// [`integrate`].
pub fn integrate_singular<F>(
    f: F,
    a: f64,
    b: f64,
    lambda_a: f64,
    lambda_b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    integrate_singular_offsets(|t, _, _| f(t), a, b, lambda_a, lambda_b, abs_tol, rel_tol)
}

/// [`integrate_singular`] for integrands that need the distances `t − a` and
/// `b − t` to full relative precision near the endpoints. `f` receives
/// `(t, t − a, b − t)`.
pub fn integrate_singular_offsets<F>(
    f: F,
    a: f64,
    b: f64,
    lambda_a: f64,
    lambda_b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Complex64>
where
    F: Fn(f64, f64, f64) -> Complex64,
{
    let mid = 0.5 * (a + b);
    let half = mid - a;
    let width = b - a;
    let ra = stretch_exponent(lambda_a);
    let rb = stretch_exponent(lambda_b);
    let left = |s: f64| {
        if s <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let da = half * s.powi(ra);
        let jac = half * f64::from(ra) * s.powi(ra - 1);
        guard_value(f(a + da, da, width - da) * jac)
    };
    let right = |s: f64| {
        if s <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let db = half * s.powi(rb);
        let jac = half * f64::from(rb) * s.powi(rb - 1);
        guard_value(f(b - db, width - db, db) * jac)
    };
    let (l, _) = integrate(left, 0.0, 1.0, 0.5 * abs_tol, rel_tol)?;
    let (r, _) = integrate(right, 0.0, 1.0, 0.5 * abs_tol, rel_tol)?;
    Ok(l + r)
}

fn stretch_exponent(lambda: f64) -> i32 {
    if lambda >= 0.0 {
        1
    } else {
        ((3.0 / (1.0 + lambda)).ceil() as i32).clamp(1, 32)
    }
}

// Rounding can land a node exactly on an endpoint singularity of the
// untransformed integrand; the transformed integrand is bounded there.
fn guard_value(z: Complex64) -> Complex64 {
    if z.is_finite() {
        z
    } else {
        Complex64::new(0.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let (v, _) = integrate(|x| Complex64::new(x.powi(5), -x * x), 0.0, 2.0, 1e-14, 1e-14).unwrap();
        assert!((v.re - 64.0 / 6.0).abs() < 1e-12);
        assert!((v.im + 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_sqrt_endpoints() {
        // ∫₀¹ t^{-1/2}(1-t)^{-1/2} dt = π
        let f = |_: f64, da: f64, db: f64| Complex64::new(1.0 / (da * db).sqrt(), 0.0);
        let v = integrate_singular_offsets(f, 0.0, 1.0, -0.5, -0.5, 1e-14, 1e-13).unwrap();
        assert!((v.re - std::f64::consts::PI).abs() < 1e-12, "{v}");
        let g = |t: f64| Complex64::new(1.0 / (t * (1.0 - t)).sqrt(), 0.0);
        let w = integrate_singular(g, 0.0, 1.0, -0.5, -0.5, 1e-10, 1e-10).unwrap();
        assert!((w.re - std::f64::consts::PI).abs() < 1e-7, "{w}");
    }

    #[test]
    fn oscillatory() {
        let (v, _) = integrate(|x| Complex64::new(0.0, x).exp(), 0.0, 20.0, 1e-13, 1e-13).unwrap();
        let exact = (Complex64::new(0.0, 20.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((v - exact).norm() < 1e-11);
    }
}
