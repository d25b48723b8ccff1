//! Complex literals accepted on the command line.
//!
//! Plain numbers (`0.5`, `-2e-3`), `a+bi`, `a-bi`, pure imaginaries (`2i`,
//! `-i`) and the exact tokens `1/sqrt2`, `-1/sqrt2`, `i/sqrt2`, `-i/sqrt2`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.as_str();
    match s {
        "1/sqrt2" | "+1/sqrt2" => return Ok(Complex64::new(FRAC_1_SQRT_2, 0.0)),
        "-1/sqrt2" => return Ok(Complex64::new(-FRAC_1_SQRT_2, 0.0)),
        "i/sqrt2" | "+i/sqrt2" => return Ok(Complex64::new(0.0, FRAC_1_SQRT_2)),
        "-i/sqrt2" => return Ok(Complex64::new(0.0, -FRAC_1_SQRT_2)),
        _ => {}
    }
    let bad = || format!("cannot parse `{text}` as a complex number (try 0.5, 1-2i, i/sqrt2)");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return real(s).map(|x| Complex64::new(x, 0.0)).ok_or_else(bad);
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (real(&body[..i]).ok_or_else(bad)?, imag(&body[i..]).ok_or_else(bad)?),
        None => (0.0, imag(body).ok_or_else(bad)?),
    };
    Ok(Complex64::new(re, im))
}

fn real(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => real(s),
    }
}

/// `a:b` with `a ≤ b`.
pub fn parse_range(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text.split_once(':').ok_or_else(|| format!("range `{text}` must look like lo:hi"))?;
    let lo = real(a.trim()).ok_or_else(|| format!("bad range start `{a}`"))?;
    let hi = real(b.trim()).ok_or_else(|| format!("bad range end `{b}`"))?;
    if hi < lo {
        return Err(format!("range `{text}` is reversed"));
    }
    Ok((lo, hi))
}
