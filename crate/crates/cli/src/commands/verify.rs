use std::path::Path;

use ptkdv::charges::Mutation;
use ptkdv::io::atomic_write;
use ptkdv::verify::{criteria, junit_xml, run_all, VerifyOptions};

use super::{output_dir, Failure, Outcome, EXIT_OK, EXIT_VERIFY};
use crate::args::{to_map, VerifyArgs};
use crate::manifest::Recorder;

fn parse_mutation(text: Option<&str>) -> Result<Mutation, Failure> {
    match text.unwrap_or("none") {
        "none" => Ok(Mutation::None),
        "flip-x3-sign" => Ok(Mutation::FlipX3Sign),
        other => Err(Failure::usage(format!("unknown mutation `{other}` (none or flip-x3-sign)"))),
    }
}

pub fn run(args: &VerifyArgs, root: &Path) -> Outcome {
    let opts = VerifyOptions { mutation: parse_mutation(args.mutation.as_deref())? };
    let filter = args.filter.as_deref();
    if let Some(f) = filter {
        if !criteria().iter().any(|c| c.matches(f)) {
            return Err(Failure::usage(format!("no acceptance criterion matches `{f}`")));
        }
    }
    let dir = output_dir(args.out.as_deref(), root, "verify");
    let mut rec = Recorder::new("verify", to_map(args), &dir);
    let reports = run_all(&opts, filter);
    for r in &reports {
        println!("{}", r.line());
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    let xml = junit_xml(&reports);
    match &args.junit {
        Some(path) => {
            atomic_write(path, xml.as_bytes())?;
            rec.record([std::path::absolute(path).unwrap_or_else(|_| path.clone())]);
        }
        None => {
            rec.write("junit.xml", xml.as_bytes())?;
        }
    }
    for name in &failed {
        rec.fail(format!("{name} failed"));
    }
    let code = if failed.is_empty() { EXIT_OK } else { EXIT_VERIFY };
    rec.finish(code)?;
    println!("{} of {} criteria passed", reports.len() - failed.len(), reports.len());
    if !failed.is_empty() {
        eprintln!("failed: {}", failed.join(", "));
    }
    Ok(code)
}
