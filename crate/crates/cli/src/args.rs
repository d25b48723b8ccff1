//! Command-line flags and the JSON config file that can supply them.
//!
//! The config file is a JSON object with one section per command:
//!
//! ```json
//! { "curve": { "eps": [3], "n": [2, 4], "k": "1/sqrt2", "m": 1.0 } }
//! ```
//!
//! Keys use the flag names with `-` replaced by `_`. A flag given on the
//! command line always wins over the file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Parser)]
#[command(name = "ptkdv", version, about = "Deformed KdV toolkit: traveling-wave curves, evolution, charge audits")]
pub struct Cli {
    /// Root directory under which each command writes its outputs.
    #[arg(long, global = true, env = "PTKDV_OUT_ROOT", default_value = "runs")]
    pub out_root: PathBuf,

    /// JSON config file with per-command defaults.
    #[arg(long, global = true, env = "PTKDV_CONFIG")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample traveling-wave curves x − ct as functions of v.
    Curve(CurveArgs),
    /// Evolve initial data in time and monitor the conserved charges.
    Evolve(EvolveArgs),
    /// Audit conservation along a stored trajectory.
    Charges(ChargesArgs),
    /// Evaluate a special function.
    Specfun(SpecfunArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct CurveArgs {
    /// Deformation parameter ε (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Vec<f64>,
    /// Branch label n (repeatable, default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub n: Vec<i64>,
    /// Wavenumber, e.g. 1/sqrt2, i/sqrt2, 0.5+0.1i [default: 1/sqrt2].
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Elliptic parameter m in [0, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    /// Sampled v-range as lo:hi [default: -1:0].
    #[arg(long, allow_hyphen_values = true)]
    pub vrange: Option<String>,
    /// Number of samples [default: 401, presets 2001].
    #[arg(long)]
    pub samples: Option<usize>,
    /// auto, general, m0, m1 or m1-published [default: auto].
    #[arg(long)]
    pub method: Option<String>,
    /// Subtract the imaginary part of x − ct at this v.
    #[arg(long, allow_hyphen_values = true)]
    pub anchor: Option<f64>,
    /// Figure parameter set: fig1, fig2 or fig3.
    #[arg(long)]
    pub preset: Option<String>,
    /// Output directory [default: <out-root>/curve].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolveArgs {
    /// Deformation parameter ε [default: 1].
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    /// scaled or unscaled [default: scaled].
    #[arg(long)]
    pub variant: Option<String>,
    /// Branch label n of the complex powers [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
    /// Source constant κ of the scaled equation [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    /// Initial data: cnoidal, tan2, sech2, sine or a field CSV path [default: sine].
    #[arg(long)]
    pub init: Option<String>,
    /// Wavenumber for cnoidal and sech2 data [default: 1/sqrt2].
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Elliptic parameter for cnoidal data [default: 0.9].
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    /// Amplitude of sine data [default: 1].
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Grid points, a power of two.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Domain length.
    #[arg(long)]
    pub length: Option<f64>,
    /// Time step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time, or `period` for one temporal period of cnoidal data.
    #[arg(long = "T", alias = "t-final", allow_hyphen_values = true)]
    #[serde(rename = "T")]
    pub t_final: Option<String>,
    /// Steps between snapshots [default: about 100 snapshots per run].
    #[arg(long)]
    pub stride: Option<usize>,
    /// Disable 2/3-rule dealiasing.
    #[arg(long)]
    pub no_dealias: bool,
    /// Singular-point clamp δ, or `off` [default: off].
    #[arg(long)]
    pub clamp: Option<String>,
    /// auto, rk4 or if-rk4 [default: auto].
    #[arg(long)]
    pub integrator: Option<String>,
    /// Run directory [default: <out-root>/evolve].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ChargesArgs {
    /// Run directory written by `evolve`.
    pub run_dir: PathBuf,
    /// Output directory [default: <out-root>/charges].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct SpecfunArgs {
    /// dn, ellipk, gamma, beta, betainc, 2f1, f1 or phases.
    pub function: String,
    /// Arguments; complex literals are accepted where the function allows.
    #[arg(allow_hyphen_values = true)]
    pub args: Vec<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyArgs {
    /// Run only criteria whose id, module or name contains this text.
    #[arg(long)]
    pub filter: Option<String>,
    /// JUnit report path [default: <out>/junit.xml].
    #[arg(long)]
    pub junit: Option<PathBuf>,
    /// Inject a defect: none or flip-x3-sign.
    #[arg(long)]
    pub mutation: Option<String>,
    /// Output directory [default: <out-root>/verify].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn is_unset(v: &Value) -> bool {
    match v {
        Value::Null | Value::Bool(false) => true,
        Value::Array(a) => a.is_empty(),
        _ => false,
    }
}

/// Fill the flags left unset in `args` from `section`.
pub fn merge<T: Serialize + DeserializeOwned>(args: &T, section: Option<&Value>) -> Result<T, String> {
    let mut value = serde_json::to_value(args).map_err(|e| e.to_string())?;
    if let (Some(Value::Object(cfg)), Value::Object(obj)) = (section, &mut value) {
        for (key, v) in cfg {
            match obj.get(key) {
                None => return Err(format!("config key `{key}` is not a flag of this command")),
                Some(cur) if is_unset(cur) => {
                    obj.insert(key.clone(), v.clone());
                }
                Some(_) => {}
            }
        }
    } else if let Some(other) = section {
        if !other.is_object() {
            return Err("config sections must be JSON objects".into());
        }
    }
    serde_json::from_value(value).map_err(|e| format!("config: {e}"))
}

pub fn load_config(path: Option<&Path>) -> Result<Map<String, Value>, String> {
    let Some(path) = path else {
        return Ok(Map::new());
    };
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    match serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))? {
        Value::Object(m) => Ok(m),
        _ => Err(format!("config {} must be a JSON object", path.display())),
    }
}

/// Flags as a JSON map, for manifests.
pub fn to_map<T: Serialize>(args: &T) -> Map<String, Value> {
    match serde_json::to_value(args) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flags_win_over_config() {
        let args = CurveArgs { eps: vec![3.0], m: Some(0.5), ..Default::default() };
        let cfg = json!({ "eps": [1.0, 5.0], "m": 0.9, "k": "i/sqrt2", "n": [2, 4] });
        let merged = merge(&args, Some(&cfg)).unwrap();
        assert_eq!(merged.eps, vec![3.0]);
        assert_eq!(merged.m, Some(0.5));
        assert_eq!(merged.k.as_deref(), Some("i/sqrt2"));
        assert_eq!(merged.n, vec![2, 4]);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let cfg = json!({ "epsilon": 3 });
        assert!(merge(&CurveArgs::default(), Some(&cfg)).is_err());
        assert!(merge(&CurveArgs::default(), Some(&json!([1]))).is_err());
        let e = merge(&EvolveArgs::default(), Some(&json!({ "T": "period", "no_dealias": true }))).unwrap();
        assert_eq!(e.t_final.as_deref(), Some("period"));
        assert!(e.no_dealias);
    }
}
