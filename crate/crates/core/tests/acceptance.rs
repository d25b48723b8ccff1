//! The twelve acceptance criteria at their pinned tolerances.
//!
//! Prints one `PASS`/`FAIL` line per criterion and exits non-zero if any
//! criterion fails. A positional argument restricts the run to matching
//! criteria, as with `ptkdv verify --filter`.

use std::process::ExitCode;

use ptkdv::charges::Mutation;
use ptkdv::verify::{criteria, tol, VerifyOptions};

const PINNED: &[(&str, f64, f64)] = &[
    ("EPS1_RECOVERY", tol::EPS1_RECOVERY, 1e-10),
    ("VARIATIONAL", tol::VARIATIONAL, 1e-6),
    ("DRIFT_EPS1", tol::DRIFT_EPS1, 1e-8),
    ("DRIFT_EPS3", tol::DRIFT_EPS3, 1e-6),
    ("DRIFT_ROUNDOFF", tol::DRIFT_ROUNDOFF, 1e-11),
    ("DT4_RATIO.lo", tol::DT4_RATIO.0, 8.0),
    ("DT4_RATIO.hi", tol::DT4_RATIO.1, 32.0),
    ("FLUX_RATIO.lo", tol::FLUX_RATIO.0, 3.0),
    ("FLUX_RATIO.hi", tol::FLUX_RATIO.1, 5.0),
    ("FLUX_BOUND_FACTOR", tol::FLUX_BOUND_FACTOR, 2.0),
    ("INVERSION", tol::INVERSION, 1e-6),
    ("ARCTAN", tol::ARCTAN, 1e-8),
    ("EXACT_RESIDUAL", tol::EXACT_RESIDUAL, 1e-6),
    ("SPECFUN", tol::SPECFUN, 1e-10),
    ("ODE_RESIDUAL", tol::ODE_RESIDUAL, 1e-5),
    ("COVERAGE", tol::COVERAGE, 0.9),
    ("TAIL", tol::TAIL, 1e-4),
    ("PT_ENERGY", tol::PT_ENERGY, 1e-10),
    ("SHADOW_FACTOR", tol::SHADOW_FACTOR, 10.0),
    ("SHADOW_FLOOR", tol::SHADOW_FLOOR, 1e-12),
];

fn main() -> ExitCode {
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut ok = true;

    let drifted: Vec<&str> = PINNED.iter().filter(|(_, used, pinned)| used != pinned).map(|(n, _, _)| *n).collect();
    if !drifted.is_empty() {
        println!("FAIL tolerance table: {} differ from the pinned values", drifted.join(", "));
        ok = false;
    }

    let opts = VerifyOptions::default();
    let selected: Vec<_> = criteria().into_iter().filter(|c| filter.as_deref().is_none_or(|f| c.matches(f))).collect();
    if selected.is_empty() {
        return ExitCode::SUCCESS;
    }
    let mut passed = 0;
    for c in &selected {
        let report = c.run(&opts);
        println!("{}", report.line());
        if report.passed {
            passed += 1;
        } else {
            ok = false;
        }
    }
    println!("{passed} of {} criteria passed", selected.len());

    if selected.iter().any(|c| c.id == 4) {
        let flux = selected.iter().find(|c| c.id == 4).unwrap();
        let mutated = flux.run(&VerifyOptions { mutation: Mutation::FlipX3Sign });
        if mutated.passed {
            println!("FAIL mutation flip-x3-sign went undetected by criterion 04");
            ok = false;
        } else {
            println!("PASS mutation flip-x3-sign is caught by criterion 04");
        }
    }

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
