//! Gauss ₂F₁ and Appell F₁.

use num_complex::Complex64;

use super::gamma::{gamma, nonpositive_integer, rgamma};
use super::quad::integrate_singular_offsets;
use super::SeriesControl;
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Gauss hypergeometric function ₂F₁(a, b; c; z).
///
/// Inside `|z| < guard` the defining series is summed directly. Beyond the
/// guard the Pfaff transformation covers `Re z < 1/2` (this includes the
/// whole negative real axis) and the `z -> 1 - z` connection formula covers
/// the neighbourhood of `z = 1` when `c - a - b` is not an integer; what is
/// left inside the unit disk falls back to the raw series with the full
/// term budget.
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    if let Some(n) = nonpositive_integer(c) {
        return Err(Error::Pole(format!("2F1 lower parameter c = {n}")));
    }
    if !z.is_finite() {
        return Err(Error::Domain(format!("2F1 argument {z} is not finite")));
    }
    let terminates = [a, b].iter().any(|&p| nonpositive_integer(p).is_some_and(|n| n.unsigned_abs() < ctl.max_terms as u64));
    if terminates {
        return polynomial_2f1(a, b, c, z);
    }
    eval_2f1(a, b, c, z, ctl, 0)
}

// Terminating series, summed in full for any z.
fn polynomial_2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    let mut term = ONE;
    let mut sum = ONE;
    let mut n = 0.0;
    while term.norm() != 0.0 {
        term *= (a + n) * (b + n) / ((n + 1.0) * (c + n)) * z;
        sum += term;
        n += 1.0;
    }
    Ok(sum)
}

fn eval_2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64, ctl: &SeriesControl, depth: u32) -> Result<Complex64> {
    if z.norm() < ctl.convergence_radius_guard {
        return series_2f1(a, b, c, z, ctl);
    }
    if depth < 3 {
        if z.re < 0.5 {
            // Pfaff: (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)), |z/(z-1)| < 1 here.
            let w = z / (z - 1.0);
            let inner = eval_2f1(a, c - b, c, w, ctl, depth + 1)?;
            return Ok((ONE - z).powc(-a) * inner);
        }
        let s = c - a - b;
        let s_is_integer = (s.re - s.re.round()).abs() < 1e-6 && s.im.abs() < 1e-6;
        let one_minus = ONE - z;
        if !s_is_integer && one_minus.norm() < z.norm() {
            return connection_1mz(a, b, c, z, ctl, depth);
        }
    }
    if z.norm() < 1.0 {
        return series_2f1(a, b, c, z, ctl);
    }
    Err(Error::NonConvergence(format!(
        "2F1({a}, {b}; {c}; {z}): argument outside the unit disk and no transformation applies"
    )))
}

fn connection_1mz(a: Complex64, b: Complex64, c: Complex64, z: Complex64, ctl: &SeriesControl, depth: u32) -> Result<Complex64> {
    let s = c - a - b;
    let w = ONE - z;
    let gc = gamma(c)?;
    let first = if rgamma(c - a) == Complex64::new(0.0, 0.0) && rgamma(c - b) == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        let coef = gc * gamma(s)? * rgamma(c - a) * rgamma(c - b);
        if coef.norm() == 0.0 {
            coef
        } else {
            coef * eval_2f1(a, b, ONE - s, w, ctl, depth + 1)?
        }
    };
    let coef2 = gc * gamma(-s)? * rgamma(a) * rgamma(b);
    let second = if coef2.norm() == 0.0 {
        coef2
    } else {
        coef2 * w.powc(s) * eval_2f1(c - a, c - b, ONE + s, w, ctl, depth + 1)?
    };
    Ok(first + second)
}

fn series_2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    let zabs = z.norm();
    let tail = if zabs < 1.0 { 1.0 / (1.0 - zabs) } else { f64::INFINITY };
    let mut term = ONE;
    let mut sum = ONE;
    let mut quiet = 0;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((nf + 1.0) * (c + nf));
        term *= ratio * z;
        sum += term;
        if term.norm() == 0.0 {
            return Ok(sum);
        }
        // only trust the bound once the terms are shrinking
        let shrinking = ratio.norm() * zabs < 1.0;
        if shrinking && term.norm() * tail <= ctl.rel_tol * sum.norm() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence(format!(
        "2F1({a}, {b}; {c}; {z}) series did not converge in {} terms",
        ctl.max_terms
    )))
}

/// Which route [`appell_f1_with_route`] took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum F1Route {
    DoubleSeries,
    Quadrature,
}

/// Appell F₁(α; β, β′; γ; x, y).
pub fn appell_f1(
    alpha: Complex64,
    beta: Complex64,
    beta_prime: Complex64,
    gamma_: Complex64,
    x: Complex64,
    y: Complex64,
    ctl: &SeriesControl,
) -> Result<Complex64> {
    appell_f1_with_route(alpha, beta, beta_prime, gamma_, x, y, ctl).map(|(v, _)| v)
}

/// Appell F₁ that also reports which evaluation route produced the value.
/// The double series is used when `max(|x|, |y|) < guard`, quadrature of the
/// Euler integral otherwise.
pub fn appell_f1_with_route(
    alpha: Complex64,
    beta: Complex64,
    beta_prime: Complex64,
    gamma_: Complex64,
    x: Complex64,
    y: Complex64,
    ctl: &SeriesControl,
) -> Result<(Complex64, F1Route)> {
    if let Some(n) = nonpositive_integer(gamma_) {
        return Err(Error::Pole(format!("F1 lower parameter gamma = {n}")));
    }
    if x.norm().max(y.norm()) < ctl.convergence_radius_guard {
        Ok((appell_f1_series(alpha, beta, beta_prime, gamma_, x, y, ctl)?, F1Route::DoubleSeries))
    } else {
        Ok((appell_f1_quadrature(alpha, beta, beta_prime, gamma_, x, y, ctl)?, F1Route::Quadrature))
    }
}

/// Double series of F₁, summed row by row in the `y` index. Each row stops
/// after two consecutive negligible terms, the outer sum after two
/// consecutive negligible rows.
pub fn appell_f1_series(
    alpha: Complex64,
    beta: Complex64,
    beta_prime: Complex64,
    gamma_: Complex64,
    x: Complex64,
    y: Complex64,
    ctl: &SeriesControl,
) -> Result<Complex64> {
    if let Some(n) = nonpositive_integer(gamma_) {
        return Err(Error::Pole(format!("F1 lower parameter gamma = {n}")));
    }
    let (xa, ya) = (x.norm(), y.norm());
    if xa >= 1.0 || ya >= 1.0 {
        return Err(Error::NonConvergence(format!("F1 double series needs |x|, |y| < 1, got {x}, {y}")));
    }
    let xtail = 1.0 / (1.0 - xa);
    let ytail = 1.0 / (1.0 - ya);
    let mut total = Complex64::new(0.0, 0.0);
    let mut row_lead = ONE;
    let mut quiet_rows = 0;
    for m in 0..ctl.max_terms {
        let mf = m as f64;
        let mut term = row_lead;
        let mut row = Complex64::new(0.0, 0.0);
        let mut quiet = 0;
        let mut converged = false;
        for n in 0..ctl.max_terms {
            row += term;
            let nf = n as f64;
            let ratio = (alpha + nf + mf) * (beta + nf) / ((nf + 1.0) * (gamma_ + nf + mf));
            term *= ratio * x;
            if term.norm() == 0.0 {
                converged = true;
                break;
            }
            if ratio.norm() * xa < 1.0 && term.norm() * xtail <= ctl.rel_tol * row.norm().max(f64::MIN_POSITIVE) {
                quiet += 1;
                if quiet >= 2 {
                    row += term;
                    converged = true;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if !converged {
            return Err(Error::NonConvergence(format!("F1 row {m} did not converge")));
        }
        total += row;
        let ratio = (alpha + mf) * (beta_prime + mf) / ((mf + 1.0) * (gamma_ + mf));
        row_lead *= ratio * y;
        if row_lead.norm() == 0.0 {
            return Ok(total);
        }
        // row m+1 is roughly row m scaled by the ratio of leading coefficients
        let next_row = row.norm() * ratio.norm() * ya;
        if ratio.norm() * ya < 1.0 && next_row * ytail <= ctl.rel_tol * total.norm() {
            quiet_rows += 1;
            if quiet_rows >= 2 {
                return Ok(total);
            }
        } else {
            quiet_rows = 0;
        }
    }
    Err(Error::NonConvergence(format!(
        "F1 double series did not converge in {} rows",
        ctl.max_terms
    )))
}

/// F₁ from its Euler integral
/// Γ(γ)/(Γ(α)Γ(γ−α)) ∫₀¹ t^{α−1}(1−t)^{γ−α−1}(1−xt)^{−β}(1−yt)^{−β′} dt,
/// valid for `Re γ > Re α > 0`. All powers use the principal branch, so a
/// real `x > 1` is evaluated on the cut with `arg(1 - x t) = π`. The interval
/// is split at the real zeros of `1 - x t` and `1 - y t`.
pub fn appell_f1_quadrature(
    alpha: Complex64,
    beta: Complex64,
    beta_prime: Complex64,
    gamma_: Complex64,
    x: Complex64,
    y: Complex64,
    ctl: &SeriesControl,
) -> Result<Complex64> {
    if !(alpha.re > 0.0 && gamma_.re > alpha.re) {
        return Err(Error::NonConvergence(format!(
            "F1 outside the series region needs Re gamma > Re alpha > 0 (alpha = {alpha}, gamma = {gamma_})"
        )));
    }
    let tail = gamma_ - alpha;
    let prefactor = gamma(gamma_)? * rgamma(alpha) * rgamma(tail);

    // breakpoints with their local exponents
    let mut cuts: Vec<(f64, f64)> = vec![(0.0, alpha.re - 1.0), (1.0, tail.re - 1.0)];
    for (w, p) in [(x, beta), (y, beta_prime)] {
        if w.im == 0.0 && w.re >= 1.0 - 1e-12 {
            let t = (1.0 / w.re).min(1.0);
            match cuts.iter_mut().find(|(s, _)| (s - t).abs() < 1e-15) {
                Some(entry) => entry.1 += -p.re,
                None => cuts.push((t, -p.re)),
            }
        }
    }
    // a zero at or just beyond t = 1 merges with the endpoint
    cuts.sort_by(|l, r| l.0.total_cmp(&r.0));

    // zeros of `1 - w t` that sit on a breakpoint
    let zero_of = |w: Complex64| {
        if w.im == 0.0 && w.re >= 1.0 - 1e-12 {
            let t = (1.0 / w.re).min(1.0);
            cuts.iter().map(|c| c.0).find(|s| (s - t).abs() < 1e-15)
        } else {
            None
        }
    };
    let (zx, zy) = (zero_of(x), zero_of(y));
    let mut total = Complex64::new(0.0, 0.0);
    for seg in cuts.windows(2) {
        let (a, la) = seg[0];
        let (b, lb) = seg[1];
        if b - a <= 0.0 {
            continue;
        }
        if la <= -1.0 || lb <= -1.0 {
            return Err(Error::NonConvergence(format!(
                "F1 Euler integral has a non-integrable singularity on [{a}, {b}]"
            )));
        }
        // linear factors are rebuilt from the endpoint offsets so they keep
        // full relative precision next to their zeros
        let linear = |w: Complex64, zero: Option<f64>, t: f64, da: f64, db: f64| match zero {
            Some(tw) if tw == a => Complex64::new(-w.re * da, 0.0),
            Some(tw) if tw == b => Complex64::new(w.re * db, 0.0),
            Some(tw) => Complex64::new(w.re * (tw - t), 0.0),
            None => ONE - w * t,
        };
        let integrand = |t: f64, da: f64, db: f64| {
            let one_minus_t = if b == 1.0 { db } else { 1.0 - t };
            let mut v = Complex64::new(t, 0.0).powc(alpha - 1.0) * Complex64::new(one_minus_t, 0.0).powc(tail - 1.0);
            v *= power_principal(linear(x, zx, t, da, db), -beta);
            v *= power_principal(linear(y, zy, t, da, db), -beta_prime);
            v
        };
        total += integrate_singular_offsets(integrand, a, b, la, lb, 1e-2 * ctl.rel_tol, ctl.rel_tol)?;
    }
    Ok(prefactor * total)
}

// Principal power, with the exact-zero base left to the caller's exponent.
fn power_principal(z: Complex64, p: Complex64) -> Complex64 {
    if z.norm() == 0.0 {
        if p.re > 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        return Complex64::new(f64::INFINITY, 0.0);
    }
    // snap tiny imaginary noise so that real negative bases sit on arg = π
    let z = if z.im == 0.0 { Complex64::new(z.re, 0.0) } else { z };
    z.powc(p)
}
