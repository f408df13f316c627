//! Run reports and their JSON, Markdown and CSV renderings.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use super::source::InputDigest;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    #[value(alias = "markdown")]
    Md,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl Residual {
    /// A residual compared against `tol`.
    pub fn check(name: &str, value: f64, tol: f64) -> Self {
        Residual {
            name: name.into(),
            value,
            tol: Some(tol),
            pass: Some(value < tol),
        }
    }

    /// A value compared against `tol` to reach a verdict; not a check.
    pub fn threshold(name: &str, value: f64, tol: f64) -> Self {
        Residual {
            name: name.into(),
            value,
            tol: Some(tol),
            pass: None,
        }
    }

    /// A diagnostic without a threshold.
    pub fn info(name: &str, value: f64) -> Self {
        Residual {
            name: name.into(),
            value,
            tol: None,
            pass: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub subcommand: String,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub config: Value,
    pub payload: Value,
    pub residuals: Vec<Residual>,
    pub status: Status,
    /// Wall-clock time; the only field that varies between identical runs.
    pub duration_ms: f64,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Md => markdown(report),
        Format::Csv => csv_text(report),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn is_complex(v: &Value) -> bool {
    v.as_object()
        .is_some_and(|o| o.len() == 2 && o.contains_key("re") && o.contains_key("im"))
}

/// Leaves of `v` as `(dotted.key, text)`; arrays and complex numbers are
/// written as compact JSON.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) if !is_complex(v) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::Array(_) | Value::Object(_) => out.push((prefix.to_string(), v.to_string())),
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

/// `payload.rows` as a table when it is an array of objects.
fn rows_table(payload: &Value) -> Option<(Vec<String>, Vec<Vec<String>>)> {
    let rows = payload.get("rows")?.as_array()?;
    let mut header: Vec<String> = Vec::new();
    let mut flat_rows = Vec::new();
    for r in rows {
        let mut flat = Vec::new();
        flatten("", r, &mut flat);
        for (k, _) in &flat {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
        flat_rows.push(flat);
    }
    let body = flat_rows
        .into_iter()
        .map(|flat| {
            header
                .iter()
                .map(|h| {
                    flat.iter()
                        .find(|(k, _)| k == h)
                        .map(|(_, v)| v.clone())
                        .unwrap_or_default()
                })
                .collect()
        })
        .collect();
    Some((header, body))
}

fn md_cell(s: &str) -> String {
    const MAX: usize = 160;
    let s = s.replace('|', "\\|");
    if s.chars().count() > MAX {
        let cut: String = s.chars().take(MAX).collect();
        format!("{cut}…")
    } else {
        s
    }
}

fn md_table(out: &mut String, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) {
    out.push_str(&format!("| {} |\n", header.join(" | ")));
    out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| md_cell(c)).collect();
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
}

fn markdown(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# {}\n\n`{}`\n\n",
        report.subcommand,
        report.command.join(" ")
    ));
    if !report.inputs.is_empty() {
        md_table(
            &mut out,
            &["input", "source", "sha256"],
            report
                .inputs
                .iter()
                .map(|d| vec![d.role.to_string(), d.source.clone(), d.sha256.clone()]),
        );
        out.push('\n');
    }
    out.push_str("## Result\n\n");
    match rows_table(&report.payload) {
        Some((header, body)) => {
            let h: Vec<&str> = header.iter().map(String::as_str).collect();
            md_table(&mut out, &h, body);
        }
        None => {
            let mut flat = Vec::new();
            flatten("", &report.payload, &mut flat);
            md_table(&mut out, &["field", "value"], flat.into_iter().map(|(k, v)| vec![k, v]));
        }
    }
    if !report.residuals.is_empty() {
        out.push_str("\n## Residuals\n\n");
        md_table(
            &mut out,
            &["residual", "value", "tol", "pass"],
            report.residuals.iter().map(|r| {
                vec![
                    r.name.clone(),
                    format!("{:.3e}", r.value),
                    r.tol.map(|t| format!("{t:.0e}")).unwrap_or_default(),
                    r.pass
                        .map(|p| if p { "yes" } else { "no" }.to_string())
                        .unwrap_or_default(),
                ]
            }),
        );
    }
    let status = match report.status {
        Status::Pass => "pass",
        Status::Fail => "fail",
    };
    out.push_str(&format!("\nstatus: **{status}**, {:.1} ms\n", report.duration_ms));
    out
}

fn csv_text(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let written: csv::Result<()> = (|| {
        match rows_table(&report.payload) {
            Some((header, body)) => {
                w.write_record(&header)?;
                for r in body {
                    w.write_record(&r)?;
                }
            }
            None => {
                w.write_record(["field", "value"])?;
                let mut flat = Vec::new();
                flatten("", &report.payload, &mut flat);
                for (k, v) in flat {
                    w.write_record([k, v])?;
                }
                for r in &report.residuals {
                    w.write_record([format!("residual.{}", r.name), Value::from(r.value).to_string()])?;
                }
            }
        }
        Ok(())
    })();
    written.expect("writing to memory");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn report(payload: Value) -> Report {
        Report {
            subcommand: "sweep".into(),
            command: vec!["finsler-lie".into(), "sweep".into()],
            inputs: vec![],
            config: json!({}),
            payload,
            residuals: vec![Residual::check("x", 1e-12, 1e-8), Residual::info("y", 2.0)],
            status: Status::Pass,
            duration_ms: 1.0,
        }
    }

    #[test]
    fn rows_become_tables() {
        let r = report(
            json!({"rows": [{"params": {"beta": 1.0}, "k_min": -1.0}, {"params": {"beta": 2.0}, "error": "bad"}]}),
        );
        let csv = render(&r, Format::Csv);
        assert_eq!(csv.lines().next().unwrap(), "params.beta,k_min,error");
        assert_eq!(csv.lines().nth(2).unwrap(), "2.0,,bad");
        assert!(render(&r, Format::Md).contains("| params.beta | k_min | error |"));
    }

    #[test]
    fn complex_leaves_stay_whole() {
        let r = report(json!({"k": {"re": 1.0, "im": 0.0}, "n": 2}));
        let csv = render(&r, Format::Csv);
        assert!(csv.contains("k,\"{\"\"re\"\":1.0,\"\"im\"\":0.0}\""));
        assert!(csv.contains("residual.x,1e-12"));
    }
}
