use std::path::Path;
use std::process::{Command, Output};

fn kil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kil"))
        .args(args)
        .env_remove("KIL_BUDGET_OPS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).expect("stderr is a JSON error object")
}

fn row<'a>(csv: &'a str, statistic: &str) -> Vec<&'a str> {
    csv.lines()
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|f| f[5] == statistic)
        .unwrap_or_else(|| panic!("no {statistic} row in\n{csv}"))
}

#[test]
fn klein_check_at_three() {
    let o = kil(&["klein-check", "--p", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with(
        "schema_version,seed,subcommand,p,N,statistic,value,bound_expression,ratio\n"
    ));
    assert_eq!(row(&out, "lines")[6], "130");
    assert_eq!(row(&out, "k_points")[6], "130");
    assert_eq!(row(&out, "bijection")[6], "OK");
    assert_eq!(row(&out, "meet_agreement")[6], "16900");
}

#[test]
fn reduce_is_infeasible_at_three() {
    let o = kil(&["reduce", "--p", "3", "--m", "20", "--n", "20"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let e = error_json(&o);
    assert_eq!(e["code"], "SearchExhausted");
    assert_eq!(e["subcommand"], "reduce");
    assert_eq!(e["config"]["m"], 20);
    assert_eq!(e["config"]["seed"], 0);
}

#[test]
fn tightness_row() {
    let o = kil(&["tightness", "--n", "12"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let e = row(&out, "E");
    assert_eq!(e[3], "577");
    assert_eq!(e[6], "526001");
    assert_eq!(e[7], "N^3=753571");
    assert_eq!(e[8], "0.698011");
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        &["klein-check", "--p", "4"][..],
        &["incidence", "--construction", "bogus"],
        &["sumprod", "--construction", "grid"],
        &["enumerate", "--size", "9"],
        &["tightness", "--n", "12", "--p", "101"],
    ] {
        let o = kil(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let e = error_json(&o);
        assert_eq!(e["subcommand"], args[0]);
        assert!(e["message"].as_str().is_some_and(|m| !m.is_empty()));
    }
    let o = kil(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_json(&o)["code"], "InvalidInput");
}

#[test]
fn budget_env_overrides_flag() {
    let o = Command::new(env!("CARGO_BIN_EXE_kil"))
        .args(["klein-check", "--p", "5", "--budget-ops", "1000000000"])
        .env("KIL_BUDGET_OPS", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let e = error_json(&o);
    assert_eq!(e["code"], "BudgetExceeded");
    assert_eq!(e["config"]["budget_ops"], 10);
}

#[test]
fn reruns_are_byte_identical_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["incidence", "reduce", "convert", "distances", "bilinear"] {
        let mut outs = Vec::new();
        for threads in ["1", "4", "1"] {
            let path = dir
                .path()
                .join(format!("{sub}-{threads}-{}.json", outs.len()));
            let p = path.to_str().unwrap();
            let o = kil(&[
                sub,
                "--seed",
                "7",
                "--threads",
                threads,
                "--format",
                "json",
                "--out",
                p,
            ]);
            assert!(
                o.status.success(),
                "{sub}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
            assert!(o.stdout.is_empty());
            outs.push(std::fs::read(&path).unwrap());
        }
        assert!(outs.windows(2).all(|w| w[0] == w[1]), "{sub}");
        let doc: serde_json::Value = serde_json::from_slice(&outs[0]).unwrap();
        assert_eq!(doc["seed"], 7);
        assert_eq!(doc["subcommand"], sub);
        assert!(doc["config"].get("threads").is_none());
    }
}

#[test]
fn seeds_change_the_artifact() {
    let a = stdout(&kil(&["incidence", "--seed", "1", "--format", "json"]));
    let b = stdout(&kil(&["incidence", "--seed", "2", "--format", "json"]));
    assert_ne!(a, b);
}

#[test]
fn failed_run_leaves_no_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let o = kil(&[
        "reduce",
        "--p",
        "3",
        "--m",
        "20",
        "--n",
        "20",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn incidence_from_input_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("arr.json");
    let o = kil(&["incidence", "--m", "40", "--n", "20", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    std::fs::write(&json, serde_json::to_string(&doc["data"]).unwrap()).unwrap();
    let generated = stdout(&kil(&["incidence", "--m", "40", "--n", "20"]));
    let loaded = stdout(&kil(&["incidence", "--input", json.to_str().unwrap()]));
    assert_eq!(row(&generated, "I")[6], row(&loaded, "I")[6]);
    let o = kil(&["incidence", "--input", json.to_str().unwrap(), "--p", "103"]);
    assert_eq!(o.status.code(), Some(1));
}

fn write(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut full = args.to_vec();
    full.extend(["--out", &p]);
    assert!(kil(&full).status.success());
    p
}

#[test]
fn report_over_bound_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (seed, k) in [("0", "2"), ("1", "2"), ("0", "10")] {
        files.push(write(
            dir.path(),
            &format!("inc-{seed}-{k}.csv"),
            &[
                "incidence",
                "--construction",
                "clustered",
                "--m",
                "100",
                "--n",
                "50",
                "--k-target",
                k,
                "--seed",
                seed,
            ],
        ));
    }
    let mut args = vec!["report"];
    args.extend(files.iter().map(String::as_str));
    let first = kil(&args);
    assert!(first.status.success());
    let out = stdout(&first);
    let summary: Vec<_> = out.lines().filter(|l| l.contains(",I,")).collect();
    assert_eq!(summary.len(), 2, "{out}");
    assert!(summary[0].contains("k_target=10") && summary[1].contains("k_target=2"));
    assert!(summary.iter().all(|l| l.ends_with(",10,pass")));
    assert!(summary[1].contains(",I,2,"));
    assert_eq!(first.stdout, kil(&args).stdout);
}

#[test]
fn report_needs_artifacts() {
    let o = kil(&["report"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_json(&o)["code"], "MissingArtifact");
    let o = kil(&["report", "/nonexistent/run.csv"]);
    assert_eq!(error_json(&o)["code"], "MissingArtifact");
}

#[test]
fn every_subcommand_runs_with_defaults() {
    for sub in [
        "enumerate",
        "klein-check",
        "incidence",
        "reduce",
        "convert",
        "sl2-cover",
        "bilinear",
        "sumprod",
        "distances",
        "tightness",
        "vanishing-poly",
        "cubic",
    ] {
        let o = kil(&[sub]);
        assert!(
            o.status.success(),
            "{sub}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let out = stdout(&o);
        assert!(out.lines().count() >= 2, "{sub}");
        assert!(
            out.lines()
                .skip(1)
                .all(|l| l.starts_with(&format!("1,0,{sub},"))),
            "{sub}"
        );
    }
}

#[test]
fn convert_matches_meeting_pairs() {
    for seed in ["0", "1", "2", "3"] {
        let out = stdout(&kil(&["convert", "--seed", seed]));
        assert_eq!(row(&out, "ordered_meeting_pairs")[8], "1.000000");
    }
}
