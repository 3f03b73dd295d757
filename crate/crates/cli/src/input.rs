//! Input documents: a JSON object given inline or as a file path, merged
//! with command-line overrides.

use std::fs;

use grand_lebesgue::{FunctionSpec, SuiteConfig, Variant, WeightSpec};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::{CliError, SCHEMA_VERSION};

/// Fields a compute command may read from its input document. Every field
/// can also come from a flag; flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    #[serde(default)]
    pub schema_version: Option<u32>,
    pub function: Option<FunctionSpec>,
    pub p: Option<f64>,
    #[serde(alias = "theta1")]
    pub theta: Option<f64>,
    pub q: Option<f64>,
    pub theta2: Option<f64>,
    /// Time-side weight `a`.
    pub grandizer: Option<WeightSpec>,
    /// Frequency-side weight `b`.
    pub weight: Option<WeightSpec>,
    pub variant: Option<Variant>,
    pub eps_grid: Option<usize>,
    pub tol: Option<f64>,
    pub fft_n: Option<usize>,
    pub fft_r: Option<f64>,
    pub n_max: Option<u32>,
    pub eps0: Option<f64>,
}

/// Reads `arg` as inline JSON when it starts with `{`, else as a path.
pub fn load_value(arg: &str) -> Result<Value, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("cannot read input `{arg}`: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("input is not valid JSON: {e}")))
}

/// Deserializes with the path of the offending field in the message.
pub fn parse_at<T: DeserializeOwned>(value: Value, origin: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let at = if path == "." {
            origin.to_string()
        } else {
            format!("{origin}.{path}")
        };
        CliError::Usage(format!("invalid input at `{at}`: {}", e.into_inner()))
    })
}

fn check_version(v: Option<u32>) -> Result<(), CliError> {
    match v {
        Some(v) if v != SCHEMA_VERSION => Err(CliError::Usage(format!(
            "unsupported schema_version {v} (this build reads {SCHEMA_VERSION})"
        ))),
        _ => Ok(()),
    }
}

pub fn input_doc(arg: Option<&str>) -> Result<InputDoc, CliError> {
    let Some(arg) = arg else { return Ok(InputDoc::default()) };
    let doc: InputDoc = parse_at(load_value(arg)?, "input")?;
    check_version(doc.schema_version)?;
    Ok(doc)
}

/// A weight given on the command line as JSON, or `unit`.
pub fn weight_flag(arg: &str, flag: &str) -> Result<WeightSpec, CliError> {
    if arg == "unit" {
        return Ok(WeightSpec::unit());
    }
    let value = serde_json::from_str(arg).map_err(|e| CliError::Usage(format!("--{flag} is not valid JSON: {e}")))?;
    parse_at(value, &format!("--{flag}"))
}

/// Suite configuration: the input document (a `SuiteConfig`, optionally with
/// `schema_version`) with the suite name from the command line.
pub fn suite_config(arg: Option<&str>, suite: Option<&str>) -> Result<SuiteConfig, CliError> {
    let mut value = match arg {
        Some(a) => load_value(a)?,
        None => Value::Object(Default::default()),
    };
    let Value::Object(map) = &mut value else {
        return Err(CliError::Usage(
            "invalid input at `input`: expected a JSON object".into(),
        ));
    };
    if let Some(v) = map.remove("schema_version") {
        let v: u32 = parse_at(v, "input.schema_version")?;
        check_version(Some(v))?;
    }
    if let Some(s) = suite {
        map.insert("suite".into(), Value::String(s.into()));
    }
    parse_at(value, "input")
}

pub fn require<T>(v: Option<T>, field: &str, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| {
        CliError::Usage(format!(
            "missing field `{field}` (give it in the input document or as --{flag})"
        ))
    })
}
