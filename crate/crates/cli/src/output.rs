use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 9] = [
    "schema_version",
    "seed",
    "subcommand",
    "p",
    "N",
    "statistic",
    "value",
    "bound_expression",
    "ratio",
];

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub statistic: String,
    pub value: String,
    pub bound_expression: String,
    pub ratio: Option<f64>,
}

impl Row {
    pub fn plain(statistic: &str, value: impl ToString) -> Self {
        Row {
            statistic: statistic.into(),
            value: value.to_string(),
            bound_expression: String::new(),
            ratio: None,
        }
    }

    /// `value` against `bound`; the expression is written as `expr=bound`.
    pub fn bounded(statistic: &str, value: u64, expr: &str, bound: u64) -> Self {
        Row {
            statistic: statistic.into(),
            value: value.to_string(),
            bound_expression: format!("{expr}={bound}"),
            ratio: (bound != 0).then(|| value as f64 / bound as f64),
        }
    }
}

/// Everything a subcommand produced, before serialization.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub p: u64,
    pub size: String,
    pub rows: Vec<Row>,
    pub data: Option<Value>,
}

pub fn format_ratio(r: Option<f64>) -> String {
    r.map(|x| format!("{x:.6}")).unwrap_or_default()
}

pub fn to_csv(art: &Artifact, seed: u64, subcommand: &str) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in &art.rows {
        w.write_record([
            SCHEMA_VERSION.to_string(),
            seed.to_string(),
            subcommand.to_string(),
            art.p.to_string(),
            art.size.clone(),
            r.statistic.clone(),
            r.value.clone(),
            r.bound_expression.clone(),
            format_ratio(r.ratio),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn to_json(art: &Artifact, seed: u64, subcommand: &str, config: &Value) -> Vec<u8> {
    let rows: Vec<Value> = art
        .rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "statistic": r.statistic,
                "value": r.value,
                "bound_expression": r.bound_expression,
                "ratio": format_ratio(r.ratio),
            })
        })
        .collect();
    let mut doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "subcommand": subcommand,
        "p": art.p,
        "N": art.size,
        "config": config,
        "rows": rows,
    });
    if let Some(data) = &art.data {
        doc["data"] = data.clone();
    }
    let mut out = serde_json::to_vec_pretty(&doc).expect("json values serialize");
    out.push(b'\n');
    out
}

/// Writes to `path` through a sibling temp file, so a failed run leaves nothing behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
