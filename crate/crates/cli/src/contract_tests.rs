//! Whole-command behaviour: columns, exit codes, output files.

use std::time::{Duration, Instant};

use clap::Parser;

use crate::table::{Cell, Table};
use crate::{execute, render, run, Cli, Format, EXIT_INVALID, EXIT_OK};

fn argv<'a>(args: &'a [&'a str]) -> impl Iterator<Item = &'a str> {
    std::iter::once("squeeze3").chain(args.iter().copied())
}

/// Exit code and rendered text for a command line, without touching stdout.
fn invoke(args: &[&str]) -> (i32, String) {
    let cli = match Cli::try_parse_from(argv(args)) {
        Ok(cli) => cli,
        Err(e) => return (e.exit_code(), String::new()),
    };
    if cli.output.is_some() {
        return (run(&cli), String::new());
    }
    match execute(&cli.command) {
        Ok(out) => (EXIT_OK, render(&out, cli.format)),
        Err(e) => (e.exit_code(), String::new()),
    }
}

fn table(args: &[&str]) -> Table {
    let (code, text) = invoke(args);
    assert_eq!(code, EXIT_OK, "{args:?}");
    let t = Table::read_csv(text.as_bytes()).unwrap();
    assert_eq!(t.to_csv_string(), text, "{args:?} does not round-trip");
    t
}

fn float(cell: &Cell) -> f64 {
    match cell {
        Cell::Float(x) => *x,
        Cell::Int(n) => *n as f64,
        other => panic!("not numeric: {other:?}"),
    }
}

#[test]
fn every_subcommand_emits_its_columns() {
    let cases: &[(&[&str], &[&str])] = &[
        (&["moments", "--lambda", "0.2"], &["m", "hos_x", "hos_y", "product"]),
        (
            &["pk", "--k", "2", "--lambda", "0.3", "--alpha", "1,1,0.2"],
            &["k", "lambda", "path", "value", "paper_value", "exact_value", "discrepancy"],
        ),
        (&["fig1", "--re", "-1:0.5:1", "--im", "0:1:1"], &["re_alpha3", "im_alpha3", "p2_paper", "p2_exact"]),
        (
            &["wigner", "--lambda", "0.1", "--alpha", "0,0,0", "--q", "0,0,0", "--p", "0,0,0"],
            &["q1", "q2", "q3", "p1", "p2", "p3", "w", "w_covariance"],
        ),
        (&["bell", "--lambda", "0.3", "--b", "0.2"], &["lambda", "b3"]),
        (&["fig2", "--lambda", "0:0.5:1", "--b", "0.1:0.1:1"], &["lambda", "b_star", "b3_max"]),
        (
            &["oracle-check", "--quantity", "norm", "--lambda", "0.1", "--cutoffs", "4,6"],
            &["cutoff", "value", "delta", "analytic"],
        ),
    ];
    for (args, columns) in cases {
        let t = table(args);
        assert_eq!(&t.columns, columns, "{args:?}");
        assert!(!t.rows.is_empty(), "{args:?}");
    }
}

#[test]
fn moments_row_values() {
    let t = table(&["moments", "--lambda", "0.5", "--m-max", "2"]);
    let x = t.column("hos_x").unwrap();
    let prod = t.column("product").unwrap();
    assert!((float(&t.rows[0][x]) - (-2.0f64).exp() / 4.0).abs() < 1e-11);
    assert!((float(&t.rows[0][prod]) - 1.0 / 16.0).abs() < 1e-12);
}

#[test]
fn oracle_check_takes_a_cutoff_list() {
    let t = table(&["oracle-check", "--quantity", "var-x3", "--lambda", "0.1", "--cutoffs", "6,8"]);
    assert_eq!(t.rows.len(), 2);
    assert!((float(&t.rows[1][1]) - float(&t.rows[1][3])).abs() < 1e-8);
}

#[test]
fn bell_oracle_column() {
    let t = table(&["bell", "--lambda", "0.1", "--b", "0.3", "--oracle-cutoff", "10"]);
    assert_eq!(t.columns, ["lambda", "b3", "b3_oracle", "abs_diff"]);
    assert!(float(&t.rows[0][3]) < 1e-3);
}

#[test]
fn json_output_is_an_array_of_objects() {
    let (code, text) = invoke(&["--format", "json", "fig2", "--lambda", "0:1:1", "--b", "0.5:0.5:1"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["lambda", "b_star", "b3_max"]);
}

#[test]
fn errata_document_lists_evidence() {
    let (code, text) = invoke(&["--format", "json", "errata"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let errata = v["errata"].as_array().unwrap();
    assert!(!errata.is_empty());
    for e in errata {
        assert!(!e["evidence"].as_array().unwrap().is_empty(), "{e}");
    }
    let (code, text) = invoke(&["errata"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.lines().count() > errata.len());
}

#[test]
fn invalid_input_exits_2() {
    let cases: &[&[&str]] = &[
        &["moments", "--lambda", "nan"],
        &["moments", "--lambda", "0.1", "--m-max", "0"],
        &["pk", "--k", "1", "--lambda", "0.1", "--alpha", "1,1,1"],
        &["pk", "--k", "2", "--lambda", "0.1", "--alpha", "1,1"],
        &["fig1", "--re", "1:0.1:0"],
        &["bell", "--lambda", "0.1"],
        &["bell", "--lambda", "0.1", "--b", "0"],
        &["fig2", "--b", "0:0.1:1"],
        &["oracle-check", "--cutoffs", "8,6"],
        &["oracle-check", "--cutoffs", "1,4"],
        &["--gnuplot", "x.gp", "fig2"],
        &["--format", "xml", "errata"],
        &["no-such-command"],
    ];
    for args in cases {
        assert_eq!(invoke(args).0, EXIT_INVALID, "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_2() {
    let (code, _) = invoke(&["--output", "/nonexistent/dir/out.csv", "moments", "--lambda", "0.1"]);
    assert_eq!(code, EXIT_INVALID);
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("m.csv");
    let args = ["--output", data.to_str().unwrap(), "--format", "json", "--gnuplot", "m.gp", "moments", "--lambda", "0.1"];
    assert_eq!(invoke(&args).0, EXIT_INVALID);
}

#[test]
fn output_file_and_gnuplot_script() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("fig2.csv");
    let script = dir.path().join("fig2.gp");
    let (data_s, script_s) = (data.to_str().unwrap(), script.to_str().unwrap());
    let args = ["--output", data_s, "--gnuplot", script_s, "fig2", "--lambda", "0:0.5:1", "--b", "0.2:0.2:1"];
    assert_eq!(invoke(&args).0, EXIT_OK);
    let csv = std::fs::read_to_string(&data).unwrap();
    assert!(csv.starts_with("lambda,b_star,b3_max\n"));
    assert!(!csv.contains('\r'));
    assert!(std::fs::read_to_string(&script).unwrap().contains(data_s));

    let cli = Cli::try_parse_from(argv(&["fig2", "--lambda", "0:0.5:1", "--b", "0.2:0.2:1"])).unwrap();
    assert_eq!(render(&execute(&cli.command).unwrap(), Format::Csv), csv);
}

#[test]
fn default_scans_finish_within_a_minute() {
    for args in [&["fig1"][..], &["fig2"][..]] {
        let start = Instant::now();
        let t = table(args);
        assert!(start.elapsed() < Duration::from_secs(60), "{args:?} took {:?}", start.elapsed());
        assert!(t.rows.len() > 40);
    }
}
