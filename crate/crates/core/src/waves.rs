//! Traveling waves `u(x, t) = v(x − ct)`.
//!
//! With `c = 4k²(2−m)`, `κ = 4k⁴(1−m)` and `κ̂ = 0` the reduced equation is
//!
//! ```text
//! v_x^{1+ε} = e^{iπ(3ε+1)/2} ((ε+1)/ε) P(v),   P(v) = v³ + (c/2)v² + κv = v(v + a)(v + b)
//! ```
//!
//! with `a = 2k²(1−m)` and `b = 2k²`. Its branches are
//! `v_x⁽ⁿ⁾ = e^{iπ(4n+3ε+1)/(2(1+ε))} [((ε+1)/ε) P(v)]^{1/(1+ε)}`, and the
//! separated solution `x − ct = ∫₀^v dw / v_x` is available in closed form:
//! Appell F₁ for general `m`, an incomplete beta function for `m = 0` and
//! `m = 1`.
//!
//! The curve of branch label `n` carries the phase `e^{iπ(4n+ε−1)/(2(1+ε))}`,
//! which is the reciprocal of the `v_x` phase of label `1 − n`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{
    appell_f1, branch_phase_vx, branch_phase_xt, branch_power, gamma, incomplete_beta_with, jacobi_dn, SeriesControl,
};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Default realness tolerances of [`scan_real_branches`].
pub const REAL_TOL_ABS: f64 = 1e-8;
pub const REAL_TOL_REL: f64 = 1e-8;

/// Wave parameters. Speed, frequency and integration constants are always
/// derived from `(k, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WaveSpec", into = "WaveSpec")]
pub struct TravelingWaveParams {
    k: Complex64,
    m: f64,
    c: Complex64,
    omega: Complex64,
    kappa: Complex64,
    kappa_hat: Complex64,
}

#[derive(Serialize, Deserialize)]
struct WaveSpec {
    k_re: f64,
    k_im: f64,
    m: f64,
}

impl TryFrom<WaveSpec> for TravelingWaveParams {
    type Error = Error;
    fn try_from(s: WaveSpec) -> Result<Self> {
        TravelingWaveParams::new(Complex64::new(s.k_re, s.k_im), s.m)
    }
}

impl From<TravelingWaveParams> for WaveSpec {
    fn from(w: TravelingWaveParams) -> Self {
        WaveSpec { k_re: w.k.re, k_im: w.k.im, m: w.m }
    }
}

impl TravelingWaveParams {
    pub fn new(k: Complex64, m: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::Domain(format!("elliptic parameter m = {m} outside [0, 1]")));
        }
        if k.norm() == 0.0 || !k.is_finite() {
            return Err(Error::Domain(format!("wavenumber k = {k} must be finite and nonzero")));
        }
        let k2 = k * k;
        let c = 4.0 * k2 * (2.0 - m);
        Ok(TravelingWaveParams { k, m, c, omega: c * k, kappa: 4.0 * k2 * k2 * (1.0 - m), kappa_hat: ZERO })
    }

    pub fn real_k(k: f64, m: f64) -> Result<Self> {
        TravelingWaveParams::new(Complex64::new(k, 0.0), m)
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }
    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn c(&self) -> Complex64 {
        self.c
    }
    pub fn omega(&self) -> Complex64 {
        self.omega
    }
    pub fn kappa(&self) -> Complex64 {
        self.kappa
    }
    pub fn kappa_hat(&self) -> Complex64 {
        self.kappa_hat
    }

    /// `2k²(1−m)`.
    pub fn root_a(&self) -> Complex64 {
        2.0 * self.k * self.k * (1.0 - self.m)
    }

    /// `2k²`.
    pub fn root_b(&self) -> Complex64 {
        2.0 * self.k * self.k
    }

    /// Zeros `0, −a, −b` of `P`.
    pub fn roots(&self) -> [Complex64; 3] {
        [ZERO, -self.root_a(), -self.root_b()]
    }

    /// `P(v) = v³ + (c/2)v² + κv + κ̂`.
    pub fn polynomial(&self, v: Complex64) -> Complex64 {
        ((v + self.c / 2.0) * v + self.kappa) * v + self.kappa_hat
    }

    /// Spatial period `2K(m)/k` of the cnoidal wave (real `k`, `m < 1`).
    pub fn cnoidal_wavelength(&self) -> Result<f64> {
        let k = self.real_wavenumber()?;
        if self.m >= 1.0 {
            return Err(Error::Domain("the m = 1 wave is not periodic".into()));
        }
        Ok(2.0 * crate::specfun::ellipk(self.m) / k.abs())
    }

    /// Time for the cnoidal wave to travel one wavelength.
    pub fn cnoidal_period(&self) -> Result<f64> {
        Ok(self.cnoidal_wavelength()? / self.c.re.abs())
    }

    fn real_wavenumber(&self) -> Result<f64> {
        if self.k.im != 0.0 {
            return Err(Error::Domain(format!("operation needs a real wavenumber, got k = {}", self.k)));
        }
        Ok(self.k.re)
    }
}

fn exponents(epsilon: f64) -> Result<(f64, f64)> {
    if epsilon == 0.0 || epsilon == -1.0 {
        return Err(Error::Pole(format!("traveling-wave reduction is singular at epsilon = {epsilon}")));
    }
    if !epsilon.is_finite() {
        return Err(Error::Domain(format!("epsilon = {epsilon} is not finite")));
    }
    Ok((epsilon / (1.0 + epsilon), 1.0 / (1.0 + epsilon)))
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `v_x` on branch `n`.
pub fn ode_rhs_vx(v: Complex64, wave: &TravelingWaveParams, epsilon: f64, n: i64) -> Result<Complex64> {
    let (_, beta) = exponents(epsilon)?;
    let p = (epsilon + 1.0) / epsilon * wave.polynomial(v);
    Ok(branch_phase_vx(epsilon, n)? * branch_power(p, beta)?)
}

/// `x − ct` for `m < 1` through Appell F₁:
///
/// ```text
/// e^{iπ(4n+ε−1)/(2(1+ε))} ((1+ε)/ε)^α v^α (4k⁴(1−m))^{−β}
///     × F₁(α; β, β; 1+α; −v/(2k²(1−m)), −v/(2k²)),   α = ε/(1+ε), β = 1/(1+ε).
/// ```
pub fn curve_general(v: f64, wave: &TravelingWaveParams, epsilon: f64, n: i64) -> Result<Complex64> {
    curve_general_with(v, wave, epsilon, n, &SeriesControl::default())
}

pub fn curve_general_with(v: f64, wave: &TravelingWaveParams, epsilon: f64, n: i64, ctl: &SeriesControl) -> Result<Complex64> {
    let (alpha, beta) = exponents(epsilon)?;
    if wave.m >= 1.0 {
        return Err(Error::Pole("curve_general needs m < 1; use curve_m1".into()));
    }
    if v == 0.0 {
        return Ok(ZERO);
    }
    let vc = real(v);
    let kappa = 4.0 * wave.k.powu(4) * (1.0 - wave.m);
    let pre = branch_phase_xt(epsilon, n)?
        * ((1.0 + epsilon) / epsilon).powf(alpha)
        * branch_power(vc, alpha)?
        * branch_power(kappa, -beta)?;
    let x = -vc / wave.root_a();
    let y = -vc / wave.root_b();
    let f1 = appell_f1(real(alpha), real(beta), real(beta), real(1.0 + alpha), x, y, ctl)?;
    Ok(pre * f1)
}

/// Unit connection factor `v^α (−v)^{−α}` between the straight-path
/// integral from 0 and the incomplete beta function of `−v`.
fn connection_m0(v: f64, alpha: f64) -> Complex64 {
    if v > 0.0 {
        Complex64::from_polar(1.0, -PI * alpha)
    } else {
        Complex64::from_polar(1.0, PI * alpha)
    }
}

/// `x − 4t` for `m = 0`, `k = ±1/√2`:
///
/// ```text
/// e^{iπ(4n+ε−1)/(2(1+ε))} (ε/(1+ε))^β · v^α(−v)^{−α} · B_{−v}(α, (ε−1)/(ε+1))
/// ```
///
/// At ε = 1 this is `(−1)ⁿ √2 arctan √v`, which is used directly.
pub fn curve_m0(v: f64, epsilon: f64, n: i64) -> Result<Complex64> {
    if epsilon == 1.0 {
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        if v == -1.0 {
            return Err(Error::Pole("the epsilon = 1, m = 0 curve diverges at v = -1".into()));
        }
        return Ok(sign * SQRT_2 * real(v).sqrt().atan());
    }
    curve_m0_beta(v, epsilon, n, &SeriesControl::default())
}

/// The incomplete-beta route of [`curve_m0`], valid at ε = 1 as well.
pub fn curve_m0_beta(v: f64, epsilon: f64, n: i64, ctl: &SeriesControl) -> Result<Complex64> {
    let (alpha, beta) = exponents(epsilon)?;
    if v == 0.0 {
        return Ok(ZERO);
    }
    let b = incomplete_beta_with(real(-v), real(alpha), real(1.0 - 2.0 * beta), ctl)?;
    Ok(branch_phase_xt(epsilon, n)? * (epsilon / (1.0 + epsilon)).powf(beta) * connection_m0(v, alpha) * b)
}

/// Prefactor exponent of `2k²` in the `m = 1` curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum M1Exponent {
    /// `(ε−2)/(ε+1)`, the limit `m → 1` of [`curve_general`], together
    /// with its branch connection factor.
    #[default]
    Derived,
    /// `(1+ε)/(2−ε)` with no connection factor, for comparison.
    AsPublished,
}

/// `x − ct` for `m = 1`:
///
/// ```text
/// e^{iπ(4n+ε−1)/(2(1+ε))} (ε/(1+ε))^β (2k²)^{(ε−2)/(ε+1)} R± B_{−v/2k²}((ε−1)/(ε+1), ε/(ε+1))
/// ```
///
/// `R±` is the unit phase matching the limit `m → 1` of the F₁ integrand on
/// each side of `v = 0`. At ε = 1 the integral from 0 diverges; the curve is
/// then `−(−1)ⁿ (1/k) artanh √(1 + v/2k²)`, zero at the soliton peak.
pub fn curve_m1(v: f64, wave: &TravelingWaveParams, epsilon: f64, n: i64, exponent: M1Exponent) -> Result<Complex64> {
    curve_m1_with(v, wave, epsilon, n, exponent, &SeriesControl::default())
}

pub fn curve_m1_with(
    v: f64,
    wave: &TravelingWaveParams,
    epsilon: f64,
    n: i64,
    exponent: M1Exponent,
    ctl: &SeriesControl,
) -> Result<Complex64> {
    let (alpha, beta) = exponents(epsilon)?;
    let b = wave.root_b();
    let phase = branch_phase_xt(epsilon, n)?;
    if epsilon == 1.0 {
        let w = (ONE + real(v) / b).sqrt();
        if (w - ONE).norm() == 0.0 {
            return Err(Error::Pole("the epsilon = 1 soliton curve diverges at v = 0".into()));
        }
        return Ok(-phase * w.atanh() / wave.k);
    }
    if exponent == M1Exponent::AsPublished && epsilon == 2.0 {
        return Err(Error::Pole("published m = 1 prefactor exponent (1+eps)/(2-eps) has a pole at eps = 2".into()));
    }
    if epsilon < 1.0 {
        return Err(Error::Domain(format!(
            "the m = 1 integral from v = 0 diverges for epsilon = {epsilon} <= 1"
        )));
    }
    if v == 0.0 {
        return Ok(ZERO);
    }
    let p = 1.0 - 2.0 * beta;
    let bz = incomplete_beta_with(-real(v) / b, real(p), real(alpha), ctl)?;
    let scale = (epsilon / (1.0 + epsilon)).powf(beta);
    match exponent {
        M1Exponent::Derived => {
            let pre = branch_power(b, (epsilon - 2.0) / (epsilon + 1.0))?;
            Ok(phase * scale * pre * connection_m1(v, b, beta)? * bz)
        }
        M1Exponent::AsPublished => {
            let pre = branch_power(b, (1.0 + epsilon) / (2.0 - epsilon))?;
            Ok(phase * scale * pre * bz)
        }
    }
}

/// Phase of `lim_{a→0} g(v) / D(v)` where `g` is the F₁ integrand
/// `v^{−β}(ab)^{−β}(1+v/a)^{−β}(1+v/b)^{−β}` with `a = δb`, and `D` is the
/// `v`-derivative of `b^{(ε−2)/(ε+1)} B_{−v/b}`. The ratio is constant on
/// each side of `v = 0`.
fn connection_m1(v: f64, b: Complex64, beta: f64) -> Result<Complex64> {
    let probe = real(v.signum() * 1e-3 * b.norm());
    let delta = 1e-12;
    let a = delta * b;
    let g = branch_power(probe, -beta)?
        * branch_power(a * b, -beta)?
        * branch_power(ONE + probe / a, -beta)?
        * branch_power(ONE + probe / b, -beta)?;
    let d = -branch_power(b, 1.0 - 3.0 * beta)? / b
        * branch_power(-probe / b, -2.0 * beta)?
        * branch_power(ONE + probe / b, -beta)?;
    let r = g / d;
    Ok(r / r.norm())
}

/// Closed-form ε = 1 solutions used as ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactKind {
    /// `−2k² dn²(kx − ωt | m)`.
    Cnoidal,
    /// `tan²((x − 4t)/√2)`.
    Tan2,
    /// `−2k² sech²(kx − ωt)`.
    Sech2,
}

pub fn exact_solution(kind: ExactKind, x: f64, t: f64, wave: &TravelingWaveParams) -> Result<Complex64> {
    let k2 = wave.k * wave.k;
    match kind {
        ExactKind::Cnoidal => {
            let phase = wave.k * x - wave.omega * t;
            if phase.im != 0.0 {
                return Err(Error::Domain("the cnoidal solution needs a real phase kx - wt".into()));
            }
            let d = jacobi_dn(phase.re, wave.m);
            Ok(-2.0 * k2 * d * d)
        }
        ExactKind::Tan2 => {
            let theta = (x - 4.0 * t) / SQRT_2;
            if theta.cos().abs() < 1e-12 {
                return Err(Error::Pole(format!("tan^2 is singular at x - 4t = {}", x - 4.0 * t)));
            }
            Ok(real(theta.tan().powi(2)))
        }
        ExactKind::Sech2 => {
            let s = ONE / (wave.k * x - wave.omega * t).cosh();
            Ok(-2.0 * k2 * s * s)
        }
    }
}

/// `|u_t − 6u u_x + u_xxx|` for an exact solution at `(x, t)`, with
/// derivatives from central finite differences of step `h`.
pub fn exact_solution_residual(kind: ExactKind, x: f64, t: f64, wave: &TravelingWaveParams, h: f64) -> Result<f64> {
    const D1: [f64; 9] = [1.0 / 280.0, -4.0 / 105.0, 0.2, -0.8, 0.0, 0.8, -0.2, 4.0 / 105.0, -1.0 / 280.0];
    const D3: [f64; 9] = [
        -7.0 / 240.0,
        0.3,
        -169.0 / 120.0,
        61.0 / 30.0,
        0.0,
        -61.0 / 30.0,
        169.0 / 120.0,
        -0.3,
        7.0 / 240.0,
    ];
    let mut ux = ZERO;
    let mut uxxx = ZERO;
    let mut ut = ZERO;
    for (i, (&w1, &w3)) in D1.iter().zip(&D3).enumerate() {
        let s = (i as f64 - 4.0) * h;
        let ux_s = exact_solution(kind, x + s, t, wave)?;
        ux += w1 * ux_s;
        uxxx += w3 * ux_s;
        ut += w1 * exact_solution(kind, x, t + s, wave)?;
    }
    let u = exact_solution(kind, x, t, wave)?;
    Ok((ut / h - 6.0 * u * ux / h + uxxx / (h * h * h)).norm())
}

/// Which closed form generates a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CurveMethod {
    General,
    M0,
    M1 { exponent: M1Exponent },
}

impl CurveMethod {
    /// `M0` for `m = 0` with `k² = 1/2`, `M1` for `m = 1`, `General`
    /// otherwise.
    pub fn for_wave(wave: &TravelingWaveParams) -> CurveMethod {
        let k2 = wave.k * wave.k;
        if wave.m == 1.0 {
            CurveMethod::M1 { exponent: M1Exponent::Derived }
        } else if wave.m == 0.0 && (k2 - 0.5).norm() < 1e-14 {
            CurveMethod::M0
        } else {
            CurveMethod::General
        }
    }
}

/// Everything needed to evaluate one branch curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub epsilon: f64,
    pub branch_n: i64,
    pub wave: TravelingWaveParams,
    pub method: CurveMethod,
    /// When set, `i Im(x−ct)` at this `v` is subtracted from every value,
    /// fixing the integration constant on a real branch that does not
    /// contain `v = 0`.
    pub anchor: Option<f64>,
}

impl CurveSpec {
    pub fn new(epsilon: f64, branch_n: i64, wave: TravelingWaveParams) -> Self {
        CurveSpec { epsilon, branch_n, wave, method: CurveMethod::for_wave(&wave), anchor: None }
    }

    pub fn with_method(mut self, method: CurveMethod) -> Self {
        self.method = method;
        self
    }

    pub fn anchored_at(mut self, v0: f64) -> Self {
        self.anchor = Some(v0);
        self
    }

    fn eval_raw(&self, v: f64) -> Result<Complex64> {
        match self.method {
            CurveMethod::General => curve_general(v, &self.wave, self.epsilon, self.branch_n),
            CurveMethod::M0 => {
                let k2 = self.wave.k * self.wave.k;
                if (k2 - 0.5).norm() > 1e-14 || self.wave.m != 0.0 {
                    return Err(Error::Domain("the m = 0 curve is defined for k = ±1/√2 and m = 0".into()));
                }
                curve_m0(v, self.epsilon, self.branch_n)
            }
            CurveMethod::M1 { exponent } => {
                if self.wave.m != 1.0 {
                    return Err(Error::Domain("the m = 1 curve needs m = 1".into()));
                }
                curve_m1(v, &self.wave, self.epsilon, self.branch_n, exponent)
            }
        }
    }

    pub fn offset(&self) -> Result<Complex64> {
        match self.anchor {
            Some(v0) => Ok(Complex64::new(0.0, self.eval_raw(v0)?.im)),
            None => Ok(ZERO),
        }
    }

    pub fn eval(&self, v: f64) -> Result<Complex64> {
        Ok(self.eval_raw(v)? - self.offset()?)
    }

    /// Sample on `count` uniform points of `[v0, v1]`. Isolated poles are
    /// skipped and listed in [`Curve::skipped`]; any other failure aborts.
    pub fn sample(&self, v0: f64, v1: f64, count: usize) -> Result<Curve> {
        if count < 1 || !(v1 >= v0) {
            return Err(Error::Config(format!("invalid sampling range [{v0}, {v1}] with {count} points")));
        }
        let offset = self.offset()?;
        let mut samples = Vec::with_capacity(count);
        let mut skipped = Vec::new();
        for i in 0..count {
            let v = if count == 1 { v0 } else { v0 + (v1 - v0) * i as f64 / (count - 1) as f64 };
            match self.eval_raw(v) {
                Ok(z) if z.is_finite() => samples.push(CurveSample { v, xct: z - offset }),
                Ok(_) | Err(Error::Pole(_)) => skipped.push(v),
                Err(e) => return Err(e),
            }
        }
        let mut curve = Curve { spec: *self, samples, skipped, real_intervals: Vec::new() };
        curve.real_intervals = scan_real_branches(&curve, REAL_TOL_ABS, REAL_TOL_REL);
        Ok(curve)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub v: f64,
    pub xct: Complex64,
}

/// A sampled branch curve `v ↦ x − ct`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub spec: CurveSpec,
    pub samples: Vec<CurveSample>,
    /// Sample points where the closed form has a pole.
    pub skipped: Vec<f64>,
    pub real_intervals: Vec<(f64, f64)>,
}

impl Curve {
    /// Wrap explicit samples (ordered by `v`).
    pub fn from_samples(spec: CurveSpec, samples: Vec<CurveSample>) -> Result<Curve> {
        if samples.windows(2).any(|w| !(w[1].v > w[0].v)) {
            return Err(Error::Config("curve samples must be strictly increasing in v".into()));
        }
        let mut c = Curve { spec, samples, skipped: Vec::new(), real_intervals: Vec::new() };
        c.real_intervals = scan_real_branches(&c, REAL_TOL_ABS, REAL_TOL_REL);
        Ok(c)
    }

    pub fn epsilon(&self) -> f64 {
        self.spec.epsilon
    }

    pub fn branch_n(&self) -> i64 {
        self.spec.branch_n
    }

    /// Largest fraction of `[lo, hi]` covered by a single real interval.
    pub fn real_coverage(&self, lo: f64, hi: f64) -> f64 {
        let span = hi - lo;
        if span <= 0.0 {
            return 0.0;
        }
        self.real_intervals
            .iter()
            .map(|&(a, b)| (b.min(hi) - a.max(lo)).max(0.0) / span)
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("v,re_xct,im_xct\n");
        for s in &self.samples {
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", s.v, s.xct.re, s.xct.im);
        }
        out
    }

    pub fn sidecar(&self) -> CurveSidecar {
        CurveSidecar {
            epsilon: self.spec.epsilon,
            branch_n: self.spec.branch_n,
            k_re: self.spec.wave.k.re,
            k_im: self.spec.wave.k.im,
            m: self.spec.wave.m,
            method: self.spec.method,
            anchor: self.spec.anchor,
            real_intervals: self.real_intervals.clone(),
            skipped: self.skipped.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSidecar {
    pub epsilon: f64,
    pub branch_n: i64,
    pub k_re: f64,
    pub k_im: f64,
    pub m: f64,
    pub method: CurveMethod,
    pub anchor: Option<f64>,
    pub real_intervals: Vec<(f64, f64)>,
    pub skipped: Vec<f64>,
}

/// Maximal runs of consecutive samples with
/// `|Im(x−ct)| ≤ tol_abs + tol_rel |Re(x−ct)|`, as closed `v`-intervals.
pub fn scan_real_branches(c: &Curve, tol_abs: f64, tol_rel: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    let mut last = 0.0;
    for s in &c.samples {
        let ok = s.xct.im.abs() <= tol_abs + tol_rel * s.xct.re.abs();
        match (ok, start) {
            (true, None) => start = Some(s.v),
            (false, Some(a)) => {
                out.push((a, last));
                start = None;
            }
            _ => {}
        }
        last = s.v;
    }
    if let Some(a) = start {
        out.push((a, last));
    }
    out
}

/// Limit of [`curve_m0`] as `v → −1⁺`:
///
/// ```text
/// e^{iπ(4n+ε−1)/(2(1+ε))} (ε/(ε+1))^β e^{iπα} Γ(α) Γ((ε−1)/(ε+1)) / Γ((2ε−1)/(ε+1))
/// ```
pub fn tail_limit(epsilon: f64, n: i64) -> Result<Complex64> {
    let (alpha, beta) = exponents(epsilon)?;
    if epsilon == 1.0 {
        return Err(Error::Pole("the tail limit diverges at epsilon = 1 (Gamma(0))".into()));
    }
    if epsilon < 1.0 {
        return Err(Error::Domain(format!("the tail limit needs epsilon > 1, got {epsilon}")));
    }
    let g = gamma(real(alpha))? * gamma(real(1.0 - 2.0 * beta))? / gamma(real((2.0 * epsilon - 1.0) / (epsilon + 1.0)))?;
    Ok(branch_phase_xt(epsilon, n)? * (epsilon / (1.0 + epsilon)).powf(beta) * Complex64::from_polar(1.0, PI * alpha) * g)
}

/// Outcome of [`ode_residual`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeResidual {
    /// Largest relative mismatch over the checked samples.
    pub max: f64,
    pub checked: usize,
    /// Samples left out because they sit next to a zero of `P`.
    pub excluded: Vec<f64>,
    /// Branch labels of `v_x` that matched somewhere on the curve.
    pub labels: Vec<i64>,
}

/// Compare `d(x−ct)/dv` (fourth-order centred differences) with `1/v_x`.
///
/// The curve of label `n` solves the equation for `v_x` of label `1 − n`
/// up to the sheet changes of principal powers, so each sample is matched
/// against the nearest labels `1 − n ± (2 + ⌈ε⌉)`; the labels used are
/// reported. Samples within `20h` of a zero of `P` are excluded.
pub fn ode_residual(c: &Curve, wave: &TravelingWaveParams) -> Result<OdeResidual> {
    let s = &c.samples;
    if s.len() < 5 {
        return Err(Error::InsufficientSamples(format!("ode_residual needs at least 5 samples, got {}", s.len())));
    }
    let eps = c.spec.epsilon;
    let h = s[1].v - s[0].v;
    if s.windows(2).any(|w| ((w[1].v - w[0].v) - h).abs() > 1e-9 * h.abs()) {
        return Err(Error::InsufficientSamples("ode_residual needs uniformly spaced samples".into()));
    }
    let roots = wave.roots();
    let window = 2 + eps.abs().ceil() as i64;
    let centre = 1 - c.spec.branch_n;
    let mut labels = std::collections::BTreeSet::new();
    let mut excluded = Vec::new();
    let mut max: f64 = 0.0;
    let mut checked = 0;
    for i in 2..s.len() - 2 {
        let v = s[i].v;
        if roots.iter().any(|r| (real(v) - r).norm() < 20.0 * h) {
            excluded.push(v);
            continue;
        }
        let d = (s[i - 2].xct - 8.0 * s[i - 1].xct + 8.0 * s[i + 1].xct - s[i + 2].xct) / (12.0 * h);
        let mut best = f64::INFINITY;
        let mut best_label = centre;
        for label in centre - window..=centre + window {
            let inv = ONE / ode_rhs_vx(real(v), wave, eps, label)?;
            let r = (d - inv).norm() / inv.norm();
            if r < best {
                best = r;
                best_label = label;
            }
        }
        if !best.is_finite() {
            excluded.push(v);
            continue;
        }
        labels.insert(best_label);
        max = max.max(best);
        checked += 1;
    }
    Ok(OdeResidual { max, checked, excluded, labels: labels.into_iter().collect() })
}

/// One curve of a figure preset and the real range it is expected to show.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PresetCurve {
    pub spec: CurveSpec,
    pub v_range: (f64, f64),
    pub expected_real: (f64, f64),
}

/// Sample count used for figure presets.
pub const PRESET_SAMPLES: usize = 2001;

/// Elliptic parameter used for the general-`m` figure.
pub const FIG1_M: f64 = 0.05;

fn k_real() -> Complex64 {
    real(FRAC_1_SQRT_2)
}

fn k_imag() -> Complex64 {
    Complex64::new(0.0, FRAC_1_SQRT_2)
}

/// Figure presets `fig1` (general `m`), `fig2` (`m = 0`) and `fig3`
/// (`m = 1`). Ranges are in units of `|1/2k²| = 1`, with infinite ranges
/// cut at `|v| = 10`.
pub fn figure_preset(name: &str) -> Result<Vec<PresetCurve>> {
    let mut out = Vec::new();
    let mut push = |eps: f64, ns: &[i64], k: Complex64, m: f64, range: (f64, f64), expected: (f64, f64)| -> Result<()> {
        let wave = TravelingWaveParams::new(k, m)?;
        for &n in ns {
            out.push(PresetCurve { spec: CurveSpec::new(eps, n, wave), v_range: range, expected_real: expected });
        }
        Ok(())
    };
    let (kr, ki) = (k_real(), k_imag());
    match name {
        "fig1" => {
            let m = FIG1_M;
            push(3.0, &[2, 4], kr, m, (-1.0, 0.0), (-1.0, 0.0))?;
            push(5.0, &[2, 5], ki, m, (0.0, 1.0), (0.0, 1.0))?;
            push(3.0, &[2, 4], ki, m, (-10.0, 0.0), (-10.0, 0.0))?;
            push(5.0, &[2, 5], kr, m, (0.0, 10.0), (0.0, 10.0))?;
        }
        "fig2" => {
            push(1.0, &[0, 1], kr, 0.0, (0.0, 10.0), (0.0, 10.0))?;
            push(5.0, &[2, 5], kr, 0.0, (0.0, 10.0), (0.0, 10.0))?;
            push(3.0, &[2, 4], kr, 0.0, (-1.0, 0.0), (-1.0, 0.0))?;
            push(11.0, &[4, 10], kr, 0.0, (-1.0, 0.0), (-1.0, 0.0))?;
        }
        "fig3" => {
            push(1.0, &[0, 1], kr, 1.0, (-1.0, 0.0), (-1.0, 0.0))?;
            push(5.0, &[0, 3], kr, 1.0, (-1.0, 0.0), (-1.0, 0.0))?;
            push(5.0, &[2, 5], kr, 1.0, (0.0, 10.0), (0.0, 10.0))?;
            push(3.0, &[2, 4], ki, 1.0, (0.0, 1.0), (0.0, 1.0))?;
            push(3.0, &[2, 4], ki, 1.0, (-10.0, 0.0), (-10.0, 0.0))?;
            push(11.0, &[4, 10], ki, 1.0, (-10.0, 0.0), (-10.0, 0.0))?;
        }
        other => return Err(Error::Config(format!("unknown figure preset `{other}` (expected fig1, fig2 or fig3)"))),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        real(x)
    }

    #[test]
    fn derived_parameters() {
        let w = TravelingWaveParams::real_k(FRAC_1_SQRT_2, 0.9).unwrap();
        assert!((w.c() - c(2.2)).norm() < 1e-14);
        assert!((w.kappa() - c(0.1)).norm() < 1e-14);
        assert!((w.omega() - c(2.2 * FRAC_1_SQRT_2)).norm() < 1e-14);
        assert_eq!(w.kappa_hat(), ZERO);
        for r in w.roots() {
            assert!(w.polynomial(r).norm() < 1e-15);
        }
        assert!(TravelingWaveParams::real_k(1.0, 1.5).is_err());
        let json = serde_json::to_string(&w).unwrap();
        let back: TravelingWaveParams = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn ode_rhs_examples() {
        let w = TravelingWaveParams::real_k(FRAC_1_SQRT_2, 0.9).unwrap();
        assert_eq!(ode_rhs_vx(ZERO, &w, 3.0, 2).unwrap(), ZERO);
        let v = c(-0.5);
        let p = w.polynomial(v);
        assert!(p.re > 0.0);
        let vx = ode_rhs_vx(v, &w, 1.0, 1).unwrap();
        assert!((vx - c((2.0 * p.re).sqrt())).norm() < 1e-14);
        assert!(ode_rhs_vx(v, &w, 0.0, 1).is_err());
        assert!(ode_rhs_vx(v, &w, -1.0, 1).is_err());
    }

    #[test]
    fn curves_vanish_at_origin() {
        let w = TravelingWaveParams::real_k(FRAC_1_SQRT_2, 0.5).unwrap();
        assert_eq!(curve_general(0.0, &w, 3.0, 2).unwrap(), ZERO);
        assert_eq!(curve_m0(0.0, 3.0, 2).unwrap(), ZERO);
        let w1 = TravelingWaveParams::real_k(FRAC_1_SQRT_2, 1.0).unwrap();
        assert_eq!(curve_m1(0.0, &w1, 3.0, 2, M1Exponent::Derived).unwrap(), ZERO);
        assert!(curve_general(0.3, &w1, 3.0, 2).is_err());
    }

    #[test]
    fn arctan_at_eps_one() {
        let v = curve_m0(1.0, 1.0, 0).unwrap();
        assert!((v - c(SQRT_2 * PI / 4.0)).norm() < 1e-15);
        let b = curve_m0_beta(1.0, 1.0, 0, &SeriesControl::default()).unwrap();
        assert!((b - v).norm() < 1e-12, "{b}");
    }

    #[test]
    fn tail_limit_errors() {
        assert!(matches!(tail_limit(1.0, 0), Err(Error::Pole(_))));
        assert!(tail_limit(0.5, 0).is_err());
        assert!(tail_limit(3.0, 2).unwrap().is_finite());
    }

    #[test]
    fn published_exponent_pole() {
        let w = TravelingWaveParams::real_k(FRAC_1_SQRT_2, 1.0).unwrap();
        assert!(matches!(curve_m1(-0.5, &w, 2.0, 0, M1Exponent::AsPublished), Err(Error::Pole(_))));
        assert!(curve_m1(-0.5, &w, 2.0, 0, M1Exponent::Derived).is_ok());
    }

    #[test]
    fn exact_solution_examples() {
        let w1 = TravelingWaveParams::real_k(0.8, 1.0).unwrap();
        for x in [-1.0, 0.0, 0.4, 2.0] {
            let a = exact_solution(ExactKind::Cnoidal, x, 0.3, &w1).unwrap();
            let b = exact_solution(ExactKind::Sech2, x, 0.3, &w1).unwrap();
            assert!((a - b).norm() < 1e-13);
        }
        let w0 = TravelingWaveParams::real_k(0.8, 0.0).unwrap();
        assert!((exact_solution(ExactKind::Cnoidal, 1.7, 0.2, &w0).unwrap() - c(-1.28)).norm() < 1e-14);
        assert_eq!(exact_solution(ExactKind::Tan2, 0.8, 0.2, &w0).unwrap(), ZERO);
        let pole = PI / SQRT_2;
        assert!(exact_solution(ExactKind::Tan2, pole, 0.0, &w0).is_err());
    }

    #[test]
    fn scan_examples() {
        let w = TravelingWaveParams::real_k(FRAC_1_SQRT_2, 0.5).unwrap();
        let spec = CurveSpec::new(3.0, 0, w);
        let imag: Vec<CurveSample> = (0..10).map(|i| CurveSample { v: i as f64, xct: Complex64::new(0.0, 1.0) }).collect();
        let curve = Curve::from_samples(spec, imag).unwrap();
        assert!(curve.real_intervals.is_empty());
        let mixed: Vec<CurveSample> = (0..6)
            .map(|i| CurveSample { v: i as f64, xct: Complex64::new(1.0, if i == 2 { 1e-3 } else { 0.0 }) })
            .collect();
        let curve = Curve::from_samples(spec, mixed).unwrap();
        assert_eq!(curve.real_intervals, vec![(0.0, 1.0), (3.0, 5.0)]);
        assert!((curve.real_coverage(0.0, 5.0) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn ode_residual_needs_samples() {
        let w = TravelingWaveParams::real_k(FRAC_1_SQRT_2, 0.0).unwrap();
        let curve = CurveSpec::new(1.0, 0, w).sample(0.5, 0.5, 1).unwrap();
        assert!(matches!(ode_residual(&curve, &w), Err(Error::InsufficientSamples(_))));
    }

    #[test]
    fn presets_parse() {
        assert_eq!(figure_preset("fig1").unwrap().len(), 8);
        assert!(figure_preset("fig9").is_err());
    }
}
