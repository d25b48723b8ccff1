//! Jacobi elliptic functions by the arithmetic-geometric mean and the
//! descending Landen transformation.

/// `(sn, cn, dn)` of `u` at parameter `m ∈ [0, 1]`.
///
/// The AGM sequence of `(1, √(1−m))` rescales the argument; the descending
/// recurrence then rebuilds `dn` directly and `sn`, `cn` from the cotangent
/// ratio, so `dn` is never formed from `√(1 − m sn²)` and the Pythagorean
/// identities are a genuine check on the outputs.
pub fn jacobi_sn_cn_dn(u: f64, m: f64) -> (f64, f64, f64) {
    assert!((0.0..=1.0).contains(&m), "elliptic parameter m = {m} outside [0, 1]");
    if m == 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    if m == 1.0 {
        let s = 1.0 / u.cosh();
        return (u.tanh(), s, s);
    }
    const MAX_STEPS: usize = 32;
    let mut em = [0.0f64; MAX_STEPS];
    let mut en = [0.0f64; MAX_STEPS];
    let mut emc = 1.0 - m;
    let mut a = 1.0;
    let mut c = 1.0;
    let mut steps = 0;
    for i in 0..MAX_STEPS {
        steps = i + 1;
        em[i] = a;
        emc = emc.sqrt();
        en[i] = emc;
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= 1e-9 * a {
            break;
        }
        emc *= a;
        a = c;
    }
    let w = u * c;
    let mut sn = w.sin();
    let mut cn = w.cos();
    let mut dn = 1.0;
    if sn != 0.0 {
        let mut a = cn / sn;
        let mut c = c * a;
        for i in (0..steps).rev() {
            let b = em[i];
            a *= c;
            c *= dn;
            dn = (en[i] + a) / (b + a);
            a = c / b;
        }
        let s = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn >= 0.0 { s } else { -s };
        cn = c * sn;
    }
    (sn, cn, dn)
}

/// Jacobi `dn(u | m)`.
pub fn jacobi_dn(u: f64, m: f64) -> f64 {
    jacobi_sn_cn_dn(u, m).2
}

/// Complete elliptic integral of the first kind, `K(m) = π / (2 AGM(1, √(1−m)))`.
pub fn ellipk(m: f64) -> f64 {
    assert!((0.0..1.0).contains(&m), "K(m) needs 0 <= m < 1, got {m}");
    let (mut a, mut b) = (1.0f64, (1.0 - m).sqrt());
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    std::f64::consts::PI / (2.0 * a)
}
