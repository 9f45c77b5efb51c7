use std::collections::BTreeMap;
use std::path::PathBuf;

use kil_core::{Error, Result};

use crate::output::{format_ratio, CSV_HEADER, SCHEMA_VERSION};

/// Regression ceilings on the ratio column, keyed by (subcommand, statistic).
const THRESHOLDS: [(&str, &str, f64); 1] = [("incidence", "I", 10.0)];

fn threshold(subcommand: &str, statistic: &str) -> Option<f64> {
    THRESHOLDS
        .iter()
        .find(|(c, s, _)| *c == subcommand && *s == statistic)
        .map(|t| t.2)
}

#[derive(Default)]
struct Group {
    runs: usize,
    min: Option<f64>,
    max: Option<f64>,
}

type Key = (String, u64, String, String);

/// One summary row per (subcommand, p, N, statistic) over all input CSVs.
pub fn run(files: &[PathBuf]) -> Result<Vec<u8>> {
    if files.is_empty() {
        return Err(Error::MissingArtifact("no artifacts given".into()));
    }
    let mut groups: BTreeMap<Key, Group> = BTreeMap::new();
    for path in files {
        let mut rd = csv::Reader::from_path(path)
            .map_err(|e| Error::MissingArtifact(format!("{}: {e}", path.display())))?;
        let bad = |what: String| Error::InvalidInput(format!("{}: {what}", path.display()));
        let header = rd.headers().map_err(|e| bad(e.to_string()))?;
        if header.iter().ne(CSV_HEADER) {
            return Err(bad("not a kil CSV artifact".into()));
        }
        for rec in rd.records() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let p = rec[3]
                .parse()
                .map_err(|_| bad(format!("bad p {:?}", &rec[3])))?;
            let key = (
                rec[2].to_string(),
                p,
                rec[4].to_string(),
                rec[5].to_string(),
            );
            let g = groups.entry(key).or_default();
            g.runs += 1;
            if !rec[8].is_empty() {
                let r: f64 = rec[8]
                    .parse()
                    .map_err(|_| bad(format!("bad ratio {:?}", &rec[8])))?;
                g.min = Some(g.min.map_or(r, |m| m.min(r)));
                g.max = Some(g.max.map_or(r, |m| m.max(r)));
            }
        }
    }
    if groups.is_empty() {
        return Err(Error::MissingArtifact("artifacts contain no rows".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "schema_version",
        "subcommand",
        "p",
        "N",
        "statistic",
        "runs",
        "min_ratio",
        "max_ratio",
        "threshold",
        "verdict",
    ])
    .expect("in-memory write");
    for ((cmd, p, size, stat), g) in &groups {
        let limit = threshold(cmd, stat);
        let verdict = match (limit, g.max) {
            (Some(t), Some(m)) if m <= t => "pass",
            (Some(_), _) => "fail",
            (None, _) => "-",
        };
        w.write_record([
            SCHEMA_VERSION.to_string(),
            cmd.clone(),
            p.to_string(),
            size.clone(),
            stat.clone(),
            g.runs.to_string(),
            format_ratio(g.min),
            format_ratio(g.max),
            limit.map(|t| t.to_string()).unwrap_or_default(),
            verdict.to_string(),
        ])
        .expect("in-memory write");
    }
    Ok(w.into_inner().expect("in-memory flush"))
}
