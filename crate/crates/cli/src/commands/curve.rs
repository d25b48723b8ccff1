use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use ptkdv::specfun::branch_phase_xt;
use ptkdv::waves::{figure_preset, CurveMethod, CurveSpec, M1Exponent, TravelingWaveParams, PRESET_SAMPLES};
use ptkdv::Error;

use super::{exit_code, output_dir, tag, Failure, Outcome, EXIT_OK};
use crate::args::{to_map, CurveArgs};
use crate::literal::{parse_complex, parse_range};
use crate::manifest::Recorder;

const DEFAULT_SAMPLES: usize = 401;

struct Job {
    spec: CurveSpec,
    range: (f64, f64),
    samples: usize,
}

fn parse_method(text: Option<&str>, wave: &TravelingWaveParams) -> Result<CurveMethod, Failure> {
    Ok(match text.unwrap_or("auto") {
        "auto" => CurveMethod::for_wave(wave),
        "general" => CurveMethod::General,
        "m0" => CurveMethod::M0,
        "m1" => CurveMethod::M1 { exponent: M1Exponent::Derived },
        "m1-published" => CurveMethod::M1 { exponent: M1Exponent::AsPublished },
        other => return Err(Failure::usage(format!("unknown curve method `{other}`"))),
    })
}

fn jobs(args: &CurveArgs) -> Result<Vec<Job>, Failure> {
    if let Some(name) = &args.preset {
        if !args.eps.is_empty() || !args.n.is_empty() || args.k.is_some() || args.m.is_some() {
            return Err(Failure::usage("--preset fixes eps, n, k and m; drop those flags"));
        }
        let samples = args.samples.unwrap_or(PRESET_SAMPLES);
        return Ok(figure_preset(name)?
            .into_iter()
            .map(|pc| Job { spec: pc.spec, range: pc.v_range, samples })
            .collect());
    }
    if args.eps.is_empty() {
        return Err(Failure::usage("give at least one --eps or a --preset"));
    }
    let m = args.m.ok_or_else(|| Failure::usage("--m is required without --preset"))?;
    let k = match &args.k {
        Some(s) => parse_complex(s).map_err(Failure::usage)?,
        None => Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    };
    let wave = TravelingWaveParams::new(k, m)?;
    let range = parse_range(args.vrange.as_deref().unwrap_or("-1:0")).map_err(Failure::usage)?;
    let samples = args.samples.unwrap_or(DEFAULT_SAMPLES);
    let method = parse_method(args.method.as_deref(), &wave)?;
    let ns = if args.n.is_empty() { vec![0] } else { args.n.clone() };
    let mut out = Vec::new();
    for &eps in &args.eps {
        for &n in &ns {
            // rejects the excluded ε before any sampling
            branch_phase_xt(eps, n)?;
            let mut spec = CurveSpec::new(eps, n, wave).with_method(method);
            if let Some(v0) = args.anchor {
                spec = spec.anchored_at(v0);
            }
            out.push(Job { spec, range, samples });
        }
    }
    Ok(out)
}

fn fmt_k(k: Complex64) -> String {
    format!("{:.6}{:+.6}i", k.re, k.im)
}

pub fn run(args: &CurveArgs, root: &Path) -> Outcome {
    if args.samples == Some(0) {
        return Err(Failure::usage("--samples must be positive"));
    }
    let jobs = jobs(args)?;
    let dir = output_dir(args.out.as_deref(), root, "curve");
    let mut rec = Recorder::new("curve", to_map(args), &dir);
    let mut code = EXIT_OK;
    let mut table = String::from("idx  eps     n    k                        m      range            real intervals\n");
    for (i, job) in jobs.iter().enumerate() {
        let s = &job.spec;
        let stem = format!("curve_{i:02}_eps{}_n{}", tag(s.epsilon), s.branch_n);
        let head = format!(
            "{i:<4} {:<7} {:<4} {:<24} {:<6} [{}, {}]",
            s.epsilon,
            s.branch_n,
            fmt_k(s.wave.k()),
            s.wave.m(),
            job.range.0,
            job.range.1
        );
        match s.sample(job.range.0, job.range.1, job.samples) {
            Ok(curve) => {
                rec.write(&format!("{stem}.csv"), curve.to_csv().as_bytes())?;
                let side = serde_json::to_string_pretty(&curve.sidecar()).map_err(Error::from)?;
                rec.write(&format!("{stem}.json"), side.as_bytes())?;
                let intervals = if curve.real_intervals.is_empty() {
                    "none".to_string()
                } else {
                    curve.real_intervals.iter().map(|(a, b)| format!("[{a:.4}, {b:.4}]")).collect::<Vec<_>>().join(" ")
                };
                let _ = writeln!(table, "{head:<60} {intervals}");
            }
            Err(e) => {
                let _ = writeln!(table, "{head:<60} FAILED: {e}");
                rec.fail(format!("{stem}: {e}"));
                code = code.max(exit_code(&e));
            }
        }
    }
    print!("{table}");
    rec.finish(code)?;
    if code != EXIT_OK {
        eprintln!("some curves failed; partial outputs are listed in {}", dir.join("manifest.json").display());
    }
    Ok(code)
}
