//! Output documents, their tables and CSV forms, atomic file writes and the
//! SVG plot of φ(ε).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use grand_lebesgue::ap_space::TransformDiagnostics;
use grand_lebesgue::verify::Prop5Sequence;
use grand_lebesgue::{
    APNorm, APNormParams, CurvePoint, FunctionSpec, GrandNormParams, GrandNormResult, NumericTransform, SuiteConfig,
    VerificationReport,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Every JSON document the CLI writes. `command` names the variant.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Doc {
    GrandNorm {
        schema_version: u32,
        function: FunctionSpec,
        params: GrandNormParams,
        result: GrandNormResult,
    },
    ApNorm {
        schema_version: u32,
        function: FunctionSpec,
        params: APNormParams,
        result: APNorm,
    },
    Curve {
        schema_version: u32,
        function: FunctionSpec,
        params: GrandNormParams,
        curve: Vec<CurvePoint>,
    },
    Fourier {
        schema_version: u32,
        function: FunctionSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        formula: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        analytic_unsupported: Option<String>,
        transform: NumericTransform,
    },
    Verify {
        schema_version: u32,
        config: SuiteConfig,
        report: VerificationReport,
    },
    Prop5 {
        schema_version: u32,
        sequence: Prop5Sequence,
    },
}

fn row(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key:<16} {value}");
}

/// The serialized name of a unit enum value.
fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

fn curve_rows(curve: &[CurvePoint]) -> Vec<Vec<String>> {
    curve
        .iter()
        .map(|c| vec![c.eps.to_string(), c.phi.to_string(), c.err.to_string()])
        .collect()
}

impl Doc {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents hold only serializable data");
        s.push('\n');
        s
    }

    /// Human-readable summary. Depends only on the document, so a re-read
    /// JSON file gives the same table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        match self {
            Doc::GrandNorm {
                function,
                params,
                result,
                ..
            } => {
                row(&mut out, "function", function.label());
                row(&mut out, "grandizer", params.weight.label());
                row(&mut out, "variant", tag(&result.variant));
                row(&mut out, "p", result.p);
                row(&mut out, "theta", result.theta);
                row(&mut out, "norm", format!("{:.12e}", result.value));
                row(&mut out, "argmax_eps", format!("{:.12e}", result.argmax));
                row(&mut out, "error_bound", format!("{:.3e}", result.error_bound));
                row(&mut out, "boundary", tag(&result.boundary));
                row(&mut out, "curve_points", result.curve.len());
            }
            Doc::ApNorm {
                function,
                params,
                result,
                ..
            } => {
                row(&mut out, "function", function.label());
                row(&mut out, "grandizer", params.time.weight.label());
                row(&mut out, "weight", params.freq.weight.label());
                row(
                    &mut out,
                    "p, theta1",
                    format!("{}, {}", params.time.p, params.time.theta),
                );
                row(
                    &mut out,
                    "q, theta2",
                    format!("{}, {}", params.freq.p, params.freq.theta),
                );
                row(
                    &mut out,
                    "time_norm",
                    format!("{:.12e} (eps {:.6})", result.time.value, result.time.argmax),
                );
                row(
                    &mut out,
                    "freq_norm",
                    format!("{:.12e} (eta {:.6})", result.freq.value, result.freq.argmax),
                );
                row(&mut out, "norm", format!("{:.12e}", result.value));
                row(&mut out, "error_bound", format!("{:.3e}", result.error_bound));
                diagnostics(&mut out, &result.diagnostics);
            }
            Doc::Curve {
                function,
                params,
                curve,
                ..
            } => {
                row(&mut out, "function", function.label());
                row(&mut out, "grandizer", params.weight.label());
                row(&mut out, "p, theta", format!("{}, {}", params.p, params.theta));
                let _ = writeln!(out, "{:>14}  {:>22}  {:>10}", "eps", "phi", "err");
                for c in curve {
                    let _ = writeln!(out, "{:>14.8e}  {:>22.14e}  {:>10.2e}", c.eps, c.phi, c.err);
                }
            }
            Doc::Fourier {
                function,
                formula,
                analytic_unsupported,
                transform,
                ..
            } => {
                row(&mut out, "function", function.label());
                match (formula, analytic_unsupported) {
                    (Some(f), _) => row(&mut out, "analytic", f),
                    (None, Some(r)) => row(&mut out, "analytic", format!("unsupported ({r})")),
                    (None, None) => row(&mut out, "analytic", "unsupported"),
                }
                row(&mut out, "half_width", transform.half_width);
                row(&mut out, "samples", transform.samples);
                row(&mut out, "gamma_step", format!("{:.6e}", transform.gamma_step));
                row(&mut out, "max_modulus", format!("{:.12e}", transform.max_modulus()));
                row(&mut out, "error_estimate", format!("{:.3e}", transform.error_estimate));
                for w in &transform.warnings {
                    row(&mut out, "warning", format!("{w:?}"));
                }
            }
            Doc::Verify { report, .. } => out.push_str(&report.to_table()),
            Doc::Prop5 { sequence, .. } => {
                row(&mut out, "p, theta", format!("{}, {}", sequence.p, sequence.theta));
                row(&mut out, "eps0", sequence.eps0);
                let _ = writeln!(out, "{:>5}  {:>20}  {:>10}  {:>20}", "n", "norm", "err", "lower_bound");
                for r in &sequence.rows {
                    let _ = writeln!(
                        out,
                        "{:>5}  {:>20.12e}  {:>10.2e}  {:>20.12e}",
                        r.n, r.norm, r.error_bound, r.lower_bound
                    );
                }
                row(&mut out, "observed_limit", format!("{:.6e}", sequence.observed_limit));
                row(&mut out, "fitted_rate", format!("{:.4}", sequence.fitted_rate));
                row(&mut out, "bound_limit", format!("{:.6e}", sequence.bound_limit));
            }
        }
        out
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let (header, rows): (Vec<&str>, Vec<Vec<String>>) = match self {
            Doc::GrandNorm { result, .. } => (vec!["eps", "phi", "err"], curve_rows(&result.curve)),
            Doc::Curve { curve, .. } => (vec!["eps", "phi", "err"], curve_rows(curve)),
            Doc::ApNorm { result, .. } => {
                let side = |name: &'static str, c: &[CurvePoint]| -> Vec<Vec<String>> {
                    curve_rows(c)
                        .into_iter()
                        .map(|mut r| {
                            r.insert(0, name.to_string());
                            r
                        })
                        .collect()
                };
                let mut rows = side("time", &result.time.curve);
                rows.extend(side("frequency", &result.freq.curve));
                (vec!["side", "eps", "phi", "err"], rows)
            }
            Doc::Fourier { transform, .. } => (vec!["gamma", "re", "im"], transform_rows(transform)),
            Doc::Verify { report, .. } => {
                let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                let rows = report
                    .checks
                    .iter()
                    .map(|c| {
                        vec![
                            c.name.clone(),
                            c.property.clone(),
                            tag(&c.status),
                            opt(c.lhs),
                            opt(c.rhs),
                            c.detail.clone(),
                        ]
                    })
                    .collect();
                (vec!["name", "property", "status", "lhs", "rhs", "detail"], rows)
            }
            Doc::Prop5 { sequence, .. } => {
                let rows = sequence
                    .rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.n.to_string(),
                            r.norm.to_string(),
                            r.error_bound.to_string(),
                            r.argmax.to_string(),
                            r.lower_bound.to_string(),
                        ]
                    })
                    .collect();
                (vec!["n", "norm", "err", "argmax", "lower_bound"], rows)
            }
        };
        csv_string(&header, &rows)
    }
}

fn diagnostics(out: &mut String, d: &TransformDiagnostics) {
    row(out, "route", tag(&d.route));
    if let Some(f) = &d.formula {
        row(out, "formula", f);
    }
    if let Some(r) = &d.analytic_unsupported {
        row(out, "note", r);
    }
    for w in &d.warnings {
        row(out, "warning", format!("{w:?}"));
    }
}

fn transform_rows(t: &NumericTransform) -> Vec<Vec<String>> {
    (0..t.len())
        .map(|k| vec![t.gamma(k).to_string(), t.re[k].to_string(), t.im[k].to_string()])
        .collect()
}

pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// `<stem>.curve.csv` and `<stem>.svg` next to `output`.
pub fn plot_paths(output: &Path) -> (PathBuf, PathBuf) {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "phi".into());
    let dir = output.parent().unwrap_or(Path::new(""));
    (dir.join(format!("{stem}.curve.csv")), dir.join(format!("{stem}.svg")))
}

/// Static line plot of `φ(ε)`.
pub fn svg_plot(curve: &[CurvePoint], title: &str) -> String {
    let (w, h, m) = (640.0, 400.0, 56.0);
    let pts: Vec<(f64, f64)> = curve
        .iter()
        .filter(|c| c.phi.is_finite())
        .map(|c| (c.eps, c.phi))
        .collect();
    let (x0, x1) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (y0, y1) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let sx = |x: f64| m + (x - x0) / span(x0, x1) * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - y0) / span(y0, y1) * (h - 2.0 * m);
    let line: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    let esc = title.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{esc}</text>"#,
        w / 2.0
    );
    let _ = writeln!(
        s,
        r#"<path d="M{m},{m} V{b} H{r}" fill="none" stroke="black" stroke-width="1"/>"#,
        b = h - m,
        r = w - m
    );
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{text}</text>"#
        );
    };
    if !pts.is_empty() {
        label(&mut s, m, h - m + 16.0, "start", format!("{x0:.4}"));
        label(&mut s, w - m, h - m + 16.0, "end", format!("{x1:.4}"));
        label(&mut s, m - 4.0, h - m, "end", format!("{y0:.4}"));
        label(&mut s, m - 4.0, m + 4.0, "end", format!("{y1:.4}"));
    }
    label(&mut s, w / 2.0, h - 12.0, "middle", "ε".into());
    label(&mut s, 16.0, h / 2.0, "middle", "φ(ε)".into());
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
        line.join(" ")
    );
    s.push_str("</svg>\n");
    s
}
