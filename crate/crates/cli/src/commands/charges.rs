use std::path::Path;

use ptkdv::charges::{ChargeReport, ChargeSummary};
use ptkdv::evolve::Trajectory;
use ptkdv::Error;

use super::{output_dir, Failure, Outcome, EXIT_OK};
use crate::args::{to_map, ChargesArgs};
use crate::manifest::Recorder;

pub fn run(args: &ChargesArgs, root: &Path) -> Outcome {
    let traj = Trajectory::read_dir(&args.run_dir)
        .map_err(|e| Failure::usage(format!("{} is not a readable trajectory: {e}", args.run_dir.display())))?;
    let reports = (1..=3).map(|n| ChargeReport::from_trajectory(n, &traj, &traj.params)).collect::<ptkdv::Result<Vec<_>>>()?;
    let dir = output_dir(args.out.as_deref(), root, "charges");
    let mut rec = Recorder::new("charges", to_map(args), &dir);
    println!("{} snapshots, spacing {}, eps = {}", traj.snapshots.len(), traj.snapshot_spacing(), traj.params.epsilon);
    for r in &reports {
        rec.write(&format!("charges_{}.csv", r.charge_index), r.to_csv().as_bytes())?;
        let residual = r.flux_residual.map_or("n/a".to_string(), |x| format!("{x:.3e}"));
        println!("I{}: drift {:.3e}  conservation residual {residual}", r.charge_index, r.drift);
    }
    let summaries: Vec<ChargeSummary> = reports.iter().map(ChargeReport::summary).collect();
    rec.write("charges.json", serde_json::to_string_pretty(&summaries).map_err(Error::from)?.as_bytes())?;
    rec.finish(EXIT_OK)?;
    Ok(EXIT_OK)
}
