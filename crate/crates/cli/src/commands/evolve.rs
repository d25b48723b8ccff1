use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2, TAU};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use ptkdv::charges::ChargeSummary;
use ptkdv::evolve::{evolve, uses_integrating_factor, EvolveConfig, Integrator};
use ptkdv::model::{DeformationParams, Field, Variant};
use ptkdv::waves::{exact_solution, ExactKind, TravelingWaveParams};
use ptkdv::Error;
use serde::Serialize;
use serde_json::json;

use super::{output_dir, Failure, Outcome, EXIT_DYNAMICS, EXIT_OK};
use crate::args::{to_map, EvolveArgs};
use crate::literal::parse_complex;
use crate::manifest::Recorder;

/// Step used by default when the dispersion is integrated exactly.
const IF_DEFAULT_DT: f64 = 1e-4;
const TARGET_SNAPSHOTS: usize = 100;

struct Initial {
    field: Field,
    wave: Option<TravelingWaveParams>,
    label: String,
}

fn wave_from(args: &EvolveArgs, m_default: f64) -> Result<TravelingWaveParams, Failure> {
    let k = match &args.k {
        Some(s) => parse_complex(s).map_err(Failure::usage)?,
        None => Complex64::new(FRAC_1_SQRT_2, 0.0),
    };
    Ok(TravelingWaveParams::new(k, args.m.unwrap_or(m_default))?)
}

fn sample_exact(kind: ExactKind, n: usize, length: f64, shift: f64, wave: &TravelingWaveParams) -> ptkdv::Result<Field> {
    let values = (0..n)
        .map(|j| exact_solution(kind, j as f64 * length / n as f64 - shift, 0.0, wave))
        .collect::<ptkdv::Result<Vec<_>>>()?;
    Field::new(values, length)
}

fn initial(args: &EvolveArgs) -> Result<Initial, Failure> {
    let init = args.init.as_deref().unwrap_or("sine");
    let field = |kind, n_default, l_default: f64, shift: fn(f64) -> f64, wave: &TravelingWaveParams| {
        let n = args.grid.unwrap_or(n_default);
        let l = args.length.unwrap_or(l_default);
        sample_exact(kind, n, l, shift(l), wave)
    };
    Ok(match init {
        "cnoidal" => {
            let wave = wave_from(args, 0.9)?;
            let l = wave.cnoidal_wavelength()?;
            let f = field(ExactKind::Cnoidal, 256, l, |_| 0.0, &wave)?;
            Initial { field: f, wave: Some(wave), label: init.into() }
        }
        "sech2" => {
            if args.m.is_some_and(|m| m != 1.0) {
                return Err(Failure::usage("sech2 data are the m = 1 wave; drop --m"));
            }
            let wave = wave_from(args, 1.0)?;
            let f = field(ExactKind::Sech2, 256, 40.0, |l| 0.5 * l, &wave)?;
            Initial { field: f, wave: Some(wave), label: init.into() }
        }
        "tan2" => {
            let wave = TravelingWaveParams::real_k(FRAC_1_SQRT_2, 0.0)?;
            let f = field(ExactKind::Tan2, 64, PI * SQRT_2, |_| 0.0, &wave)?;
            Initial { field: f, wave: Some(wave), label: init.into() }
        }
        "sine" => {
            let n = args.grid.unwrap_or(64);
            let l = args.length.unwrap_or(TAU);
            let a = args.amplitude.unwrap_or(1.0);
            let f = Field::from_real_fn(n, l, |x| a * (TAU * x / l).sin())?;
            Initial { field: f, wave: None, label: init.into() }
        }
        path => {
            if args.grid.is_some() || args.length.is_some() {
                return Err(Failure::usage("--grid and --length come from the initial-data file"));
            }
            let f = Field::read(Path::new(path)).map_err(|e| Failure::usage(format!("initial data {path}: {e}")))?;
            Initial { field: f, wave: None, label: format!("file:{path}") }
        }
    })
}

fn parse_variant(text: Option<&str>) -> Result<Variant, Failure> {
    match text.unwrap_or("scaled") {
        "scaled" => Ok(Variant::Scaled),
        "unscaled" => Ok(Variant::Unscaled),
        other => Err(Failure::usage(format!("unknown variant `{other}` (scaled or unscaled)"))),
    }
}

fn parse_integrator(text: Option<&str>) -> Result<Integrator, Failure> {
    match text.unwrap_or("auto") {
        "auto" => Ok(Integrator::Auto),
        "rk4" => Ok(Integrator::Rk4),
        "if-rk4" => Ok(Integrator::IntegratingFactorRk4),
        other => Err(Failure::usage(format!("unknown integrator `{other}` (auto, rk4 or if-rk4)"))),
    }
}

fn parse_clamp(text: Option<&str>) -> Result<Option<f64>, Failure> {
    match text {
        None | Some("off") => Ok(None),
        Some(s) => s
            .parse::<f64>()
            .ok()
            .filter(|d| *d > 0.0 && d.is_finite())
            .map(Some)
            .ok_or_else(|| Failure::usage(format!("--clamp takes a positive number or `off`, got `{s}`"))),
    }
}

#[derive(Serialize)]
struct AbortReport {
    kind: &'static str,
    message: String,
    last_time: f64,
    grid_index: Option<usize>,
    ux_abs: Option<f64>,
    delta: Option<f64>,
    max_abs: Option<f64>,
}

fn abort_report(e: &Error, last_time: f64) -> AbortReport {
    let mut r = AbortReport {
        kind: "other",
        message: e.to_string(),
        last_time,
        grid_index: None,
        ux_abs: None,
        delta: None,
        max_abs: None,
    };
    match *e {
        Error::Singularity { index, ux_abs, delta } => {
            r.kind = "singularity";
            r.grid_index = Some(index);
            r.ux_abs = Some(ux_abs);
            r.delta = Some(delta);
        }
        Error::BlowUp { t, index, max_abs } => {
            r.kind = "blow-up";
            r.last_time = t;
            r.grid_index = Some(index);
            r.max_abs = Some(max_abs);
        }
        _ => {}
    }
    r
}

fn write_abort(rec: &mut Recorder, e: &Error, last_time: f64) -> Result<(), Failure> {
    let report = serde_json::to_string_pretty(&abort_report(e, last_time)).map_err(Error::from)?;
    rec.write("abort.json", report.as_bytes())?;
    rec.fail(e.to_string());
    Ok(())
}

pub fn run(args: &EvolveArgs, root: &Path) -> Outcome {
    let eps = args.eps.unwrap_or(1.0);
    let params = DeformationParams::new(eps, parse_variant(args.variant.as_deref())?)?
        .with_branch(args.n.unwrap_or(0))
        .with_kappa(args.kappa.unwrap_or(0.0))
        .with_clamp(parse_clamp(args.clamp.as_deref())?);
    params.validate()?;
    let integrator = parse_integrator(args.integrator.as_deref())?;
    let lawson = uses_integrating_factor(integrator, &params)?;
    let dir: PathBuf = output_dir(args.out.as_deref(), root, "evolve");
    let mut rec = Recorder::new("evolve", to_map(args), &dir);

    let init = match initial(args) {
        Ok(i) => i,
        Err(Failure { source: Some(e @ Error::Pole(_)), .. }) => {
            // singular initial data are recorded like a failed run
            write_abort(&mut rec, &e, 0.0)?;
            eprintln!("initial data are singular: {e}");
            rec.finish(EXIT_DYNAMICS)?;
            return Ok(EXIT_DYNAMICS);
        }
        Err(f) => return Err(f),
    };
    let f0 = init.field.clone();
    let t_final = match args.t_final.as_deref() {
        None => match &init.wave {
            Some(w) if init.label == "cnoidal" => w.cnoidal_period()?,
            _ => 1.0,
        },
        Some("period") => match &init.wave {
            Some(w) if init.label == "cnoidal" => w.cnoidal_period()?,
            _ => return Err(Failure::usage("--T period needs --init cnoidal")),
        },
        Some(s) => s.parse::<f64>().map_err(|_| Failure::usage(format!("--T takes a number or `period`, got `{s}`")))?,
    };
    let mut cfg = EvolveConfig::new(f0.len(), f0.length, t_final);
    cfg.integrator = integrator;
    cfg.dealias = !args.no_dealias;
    if let Some(dt) = args.dt {
        cfg.dt = dt;
    } else if lawson {
        cfg.dt = IF_DEFAULT_DT;
    }
    if t_final > 0.0 && t_final < cfg.dt {
        cfg.dt = t_final;
    }
    let mut steps = cfg.schedule().0;
    cfg.snapshot_stride = match args.stride {
        Some(s) => s,
        None if steps > TARGET_SNAPSHOTS => {
            // shrink dt so the last snapshot lands on t_final
            let per = steps.div_ceil(TARGET_SNAPSHOTS);
            steps = per * TARGET_SNAPSHOTS;
            cfg.dt = t_final / steps as f64;
            per
        }
        None => 1,
    };
    cfg.validate()?;

    let run = evolve(&f0, &cfg, &params)?;
    rec.record(run.trajectory.write_dir(&dir)?);
    for report in &run.charges {
        rec.write(&format!("charges_{}.csv", report.charge_index), report.to_csv().as_bytes())?;
    }
    let summaries: Vec<ChargeSummary> = run.charges.iter().map(|r| r.summary()).collect();
    let info = json!({
        "config": cfg,
        "params": params,
        "init": init.label,
        "wave": init.wave,
        "final_time": run.final_time,
        "charges": summaries,
        "abort": run.abort.as_ref().map(|e| e.to_string()),
    });
    rec.write("evolve.json", serde_json::to_string_pretty(&info).map_err(Error::from)?.as_bytes())?;

    let mut code = EXIT_OK;
    println!("eps={} variant={:?} N={} L={} dt={} T={} steps={}", eps, params.variant, cfg.grid_points, cfg.domain_length, cfg.schedule().1, t_final, steps);
    for s in &summaries {
        match s.flux_residual {
            Some(r) => println!("I{}: drift {:.3e}  flux residual {:.3e}", s.charge_index, s.drift, r),
            None => println!("I{}: drift {:.3e}", s.charge_index, s.drift),
        }
    }
    if let Some(e) = &run.abort {
        write_abort(&mut rec, e, run.final_time)?;
        eprintln!("run aborted: {e}");
        code = EXIT_DYNAMICS;
    } else {
        match std::fs::remove_file(dir.join("abort.json")) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => return Err(Error::from(e).into()),
            _ => {}
        }
    }
    rec.finish(code)?;
    Ok(code)
}
