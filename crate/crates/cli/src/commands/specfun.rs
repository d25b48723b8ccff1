use num_complex::Complex64;
use ptkdv::specfun::{
    appell_f1, beta, branch_phase_vx, branch_phase_xt, ellipk, gamma, gauss_2f1, incomplete_beta, jacobi_dn, SeriesControl,
};

use super::{Failure, Outcome, EXIT_OK};
use crate::args::SpecfunArgs;
use crate::literal::parse_complex;

const USAGE: &str = "functions: dn u m | ellipk m | gamma z | beta a b | betainc z a b | 2f1 a b c z | f1 a b1 b2 c x y | phases eps n";

fn real_arg(z: Complex64, name: &str) -> Result<f64, Failure> {
    if z.im != 0.0 {
        return Err(Failure::usage(format!("{name} takes real arguments")));
    }
    Ok(z.re)
}

/// Seventeen significant digits, readable back as a complex literal.
pub fn format_complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Evaluate one function; returns the printed lines.
pub fn evaluate(function: &str, raw: &[String]) -> Result<Vec<String>, Failure> {
    let expect = |n: usize| -> Result<Vec<Complex64>, Failure> {
        if raw.len() != n {
            return Err(Failure::usage(format!("{function} takes {n} arguments, got {}; {USAGE}", raw.len())));
        }
        raw.iter().map(|s| parse_complex(s).map_err(Failure::usage)).collect()
    };
    let ctl = SeriesControl::default();
    let line = match function {
        "dn" => {
            let a = expect(2)?;
            let (u, m) = (real_arg(a[0], "dn")?, real_arg(a[1], "dn")?);
            if !(0.0..=1.0).contains(&m) {
                return Err(Failure::usage(format!("dn needs 0 <= m <= 1, got {m}")));
            }
            format_real(jacobi_dn(u, m))
        }
        "ellipk" => {
            let m = real_arg(expect(1)?[0], "ellipk")?;
            if !(0.0..1.0).contains(&m) {
                return Err(Failure::usage(format!("ellipk needs 0 <= m < 1, got {m}")));
            }
            format_real(ellipk(m))
        }
        "gamma" => format_complex(gamma(expect(1)?[0])?),
        "beta" => {
            let a = expect(2)?;
            format_complex(beta(a[0], a[1])?)
        }
        "betainc" => {
            let a = expect(3)?;
            format_complex(incomplete_beta(a[0], a[1], a[2])?)
        }
        "2f1" => {
            let a = expect(4)?;
            format_complex(gauss_2f1(a[0], a[1], a[2], a[3], &ctl)?)
        }
        "f1" => {
            let a = expect(6)?;
            format_complex(appell_f1(a[0], a[1], a[2], a[3], a[4], a[5], &ctl)?)
        }
        "phases" => {
            let a = expect(2)?;
            let eps = real_arg(a[0], "phases")?;
            let n = real_arg(a[1], "phases")?;
            if n.fract() != 0.0 {
                return Err(Failure::usage("phases needs an integer branch n"));
            }
            let n = n as i64;
            return Ok(vec![
                format!("vx {}", format_complex(branch_phase_vx(eps, n)?)),
                format!("xt {}", format_complex(branch_phase_xt(eps, n)?)),
            ]);
        }
        other => return Err(Failure::usage(format!("unknown function `{other}`; {USAGE}"))),
    };
    Ok(vec![line])
}

pub fn run(args: &SpecfunArgs) -> Outcome {
    for line in evaluate(&args.function, &args.args)? {
        println!("{line}");
    }
    Ok(EXIT_OK)
}
