//! Command-line front end: scans and reports written as CSV or JSON.
//!
//! Exit codes: 0 on success, 2 for invalid arguments (including an
//! unwritable output path), 3 for numeric or truncation failures.

pub mod errata;
pub mod parse;
pub mod table;

#[cfg(test)]
mod contract_tests;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use squeeze3::bell::{self, BellSetting, Fig2Config, SearchOptions};
use squeeze3::fock::{self, build_arena, coherent_ket, s3_unitary, FockOperator, KetVector};
use squeeze3::gaussian::{self, make_state, CoherentAmplitudes, MomentQuery};
use squeeze3::grid::Grid;
use squeeze3::photon::{self, PkPath};

use table::{Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<squeeze3::Error> for CliError {
    fn from(e: squeeze3::Error) -> Self {
        use squeeze3::Error as E;
        match e {
            E::InvalidParameter(_) | E::SingularParameter(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "squeeze3", version, about = "Three-mode enhanced squeezing: scans, moments and cross-checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,

    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Also write a gnuplot script plotting the CSV written to --output.
    #[arg(long, global = true, requires = "output")]
    pub gnuplot: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Higher-order squeezing moments of X3 and Y3 for m = 1..m_max.
    Moments(MomentsArgs),
    /// Sub-Poissonian parameter P_k of the collective mode.
    Pk(PkArgs),
    /// P2 over a grid of alpha3 with alpha1 = alpha2 = lambda = 1.
    Fig1(Fig1Args),
    /// Wigner function at one phase-space point.
    Wigner(WignerArgs),
    /// Bell combination B(3) for one setting, or a heuristic search.
    Bell(BellArgs),
    /// Maximum of B(3) over b for each lambda.
    Fig2(Fig2Args),
    /// Convergence of a Fock-oracle quantity with the cutoff.
    OracleCheck(OracleArgs),
    /// Suspected misprints with numeric evidence.
    Errata,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 6)]
    pub m_max: u32,
    /// Coherent amplitudes; the moments do not depend on them.
    #[arg(long, value_parser = parse::complex_triple, default_value = "0,0,0", allow_hyphen_values = true)]
    pub alpha: [Complex64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathArg {
    Paper,
    Exact,
}

#[derive(Debug, Args)]
pub struct PkArgs {
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, value_parser = parse::complex_triple, allow_hyphen_values = true)]
    pub alpha: [Complex64; 3],
    #[arg(long, value_enum, default_value = "exact")]
    pub path: PathArg,
}

#[derive(Debug, Args)]
pub struct Fig1Args {
    #[arg(long, value_parser = parse::grid, default_value = "-1:0.05:1", allow_hyphen_values = true)]
    pub re: Grid,
    #[arg(long, value_parser = parse::grid, default_value = "-1:0.05:1", allow_hyphen_values = true)]
    pub im: Grid,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, value_parser = parse::complex_triple, default_value = "0,0,0", allow_hyphen_values = true)]
    pub alpha: [Complex64; 3],
    #[arg(long, value_parser = parse::real_triple, default_value = "0,0,0", allow_hyphen_values = true)]
    pub q: [f64; 3],
    #[arg(long, value_parser = parse::real_triple, default_value = "0,0,0", allow_hyphen_values = true)]
    pub p: [f64; 3],
}

#[derive(Debug, Args)]
pub struct BellArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, value_parser = parse::complex_triple, default_value = "0.4,0.5,0.6", allow_hyphen_values = true)]
    pub alpha: [Complex64; 3],
    /// Use the pattern beta = (0, 0, -b), beta' = (b, b, 0).
    #[arg(long, conflicts_with_all = ["beta", "beta_prime"])]
    pub b: Option<f64>,
    #[arg(long, value_parser = parse::complex_triple, requires = "beta_prime", allow_hyphen_values = true)]
    pub beta: Option<[Complex64; 3]>,
    #[arg(long, value_parser = parse::complex_triple, requires = "beta", allow_hyphen_values = true)]
    pub beta_prime: Option<[Complex64; 3]>,
    /// Also evaluate B(3) from displaced parity in a truncated Fock space.
    #[arg(long)]
    pub oracle_cutoff: Option<usize>,
    /// Heuristic Nelder-Mead search over lambda and all twelve displacement
    /// components, seeded from the --b pattern, with alpha = (0.4, 0.5, 0.6).
    #[arg(long, requires = "b", conflicts_with_all = ["oracle_cutoff", "alpha"])]
    pub search: bool,
    #[arg(long, default_value_t = 4000)]
    pub max_evals: usize,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    #[arg(long, value_parser = parse::grid, default_value = "0:0.02:1", allow_hyphen_values = true)]
    pub lambda: Grid,
    #[arg(long, value_parser = parse::grid, default_value = "0.01:0.01:2")]
    pub b: Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// Variance of X3.
    VarX3,
    /// Variance of Y3.
    VarY3,
    /// Fourth central moment of X3.
    FourthX3,
    /// Mean photon number of the collective mode.
    MeanPhoton,
    /// <A†² A²> of the collective mode.
    SecondFactorial,
    /// <000|S3|000>.
    VacuumAmplitude,
    /// Parity expectation at zero displacement.
    Parity,
    /// Norm of the prepared state.
    Norm,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum, default_value = "var-x3")]
    pub quantity: Quantity,
    #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, value_parser = parse::complex_triple, default_value = "0,0,0", allow_hyphen_values = true)]
    pub alpha: [Complex64; 3],
    /// Comma-separated, strictly increasing.
    #[arg(long, value_parser = parse::cutoff_list, default_value = "8,10,12,14")]
    pub cutoffs: std::vec::Vec<usize>,
}

/// What a subcommand produced.
pub enum Output {
    Table(Table),
    Json(serde_json::Value, Table),
}

fn finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Invalid(format!("--{name} must be finite")))
    }
}

fn moments(a: &MomentsArgs) -> Result<Output, CliError> {
    let max = gaussian::MAX_MOMENT_ORDER / 2;
    if !(1..=max).contains(&a.m_max) {
        return Err(CliError::Invalid(format!("--m-max must be in 1..={max}")));
    }
    let state = make_state(finite("lambda", a.lambda)?, CoherentAmplitudes::new(a.alpha)?)?;
    let mut t = Table::new(&["m", "hos_x", "hos_y", "product"]);
    for m in 1..=a.m_max {
        let x = gaussian::central_moment(&state, &MomentQuery::x3(2 * m)?);
        let y = gaussian::central_moment(&state, &MomentQuery::y3(2 * m)?);
        t.push(vec![m.into(), x.into(), y.into(), (x * y).into()]);
    }
    Ok(Output::Table(t))
}

fn pk(a: &PkArgs) -> Result<Output, CliError> {
    let path = match a.path {
        PathArg::Paper => PkPath::Paper,
        PathArg::Exact => PkPath::Exact,
    };
    let r = photon::pk(a.k, &CoherentAmplitudes::new(a.alpha)?, finite("lambda", a.lambda)?, path)?;
    let name = match path {
        PkPath::Paper => "paper",
        PkPath::Exact => "exact",
    };
    let mut t = Table::new(&["k", "lambda", "path", "value", "paper_value", "exact_value", "discrepancy"]);
    t.push(vec![
        r.k.into(),
        a.lambda.into(),
        name.into(),
        r.value.into(),
        r.paper_value.into(),
        r.exact_value.into(),
        r.discrepancy.into(),
    ]);
    Ok(Output::Table(t))
}

fn fig1(a: &Fig1Args) -> Result<Output, CliError> {
    let mut t = Table::new(&["re_alpha3", "im_alpha3", "p2_paper", "p2_exact"]);
    for r in photon::fig1_scan(&a.re, &a.im)? {
        t.push(vec![r.re_alpha3.into(), r.im_alpha3.into(), r.p2_paper.into(), r.p2_exact.into()]);
    }
    Ok(Output::Table(t))
}

fn wigner(a: &WignerArgs) -> Result<Output, CliError> {
    for x in a.q.iter().chain(&a.p) {
        finite("q/--p", *x)?;
    }
    let state = make_state(finite("lambda", a.lambda)?, CoherentAmplitudes::new(a.alpha)?)?;
    let w = gaussian::wigner(&state, a.q, a.p);
    let wc = gaussian::wigner_from_covariance(&state, a.q, a.p);
    let mut t = Table::new(&["q1", "q2", "q3", "p1", "p2", "p3", "w", "w_covariance"]);
    let mut row: Vec<Cell> = a.q.iter().chain(&a.p).map(|&x| x.into()).collect();
    row.push(w.into());
    row.push(wc.into());
    t.push(row);
    Ok(Output::Table(t))
}

fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", table::format_float(z.re), sign, table::format_float(z.im.abs()))
}

fn bell_cmd(a: &BellArgs) -> Result<Output, CliError> {
    let lambda = finite("lambda", a.lambda)?;
    if a.search {
        let b = a.b.expect("clap enforces --b with --search");
        let options = SearchOptions { max_evaluations: a.max_evals, ..Default::default() };
        let r = bell::global_search(lambda, b, options)?;
        let mut cols = vec!["lambda", "b3", "evaluations"];
        cols.extend(["beta1", "beta2", "beta3", "beta1_prime", "beta2_prime", "beta3_prime"]);
        let mut t = Table::new(&cols);
        let mut row: Vec<Cell> = vec![r.lambda.into(), r.b3.into(), r.evaluations.into()];
        row.extend(r.setting.beta.iter().chain(&r.setting.beta_prime).map(|z| Cell::Text(fmt_complex(*z))));
        t.push(row);
        return Ok(Output::Table(t));
    }
    let setting = match (a.b, a.beta, a.beta_prime) {
        (Some(b), _, _) => Fig2Config::new(b)?.setting(),
        (None, Some(beta), Some(beta_prime)) => BellSetting::new(beta, beta_prime)?,
        _ => return Err(CliError::Invalid("give either --b or both --beta and --beta-prime".into())),
    };
    let alpha = CoherentAmplitudes::new(a.alpha)?;
    let analytic = bell::b3(&make_state(lambda, alpha)?, &setting);
    match a.oracle_cutoff {
        None => {
            let mut t = Table::new(&["lambda", "b3"]);
            t.push(vec![lambda.into(), analytic.into()]);
            Ok(Output::Table(t))
        }
        Some(cutoff) => {
            let r = bell::b3_oracle_check(lambda, &alpha, &setting, cutoff)?;
            let mut t = Table::new(&["lambda", "b3", "b3_oracle", "abs_diff"]);
            t.push(vec![lambda.into(), r.analytic.into(), r.oracle.into(), r.abs_diff().into()]);
            Ok(Output::Table(t))
        }
    }
}

fn fig2(a: &Fig2Args) -> Result<Output, CliError> {
    let mut t = Table::new(&["lambda", "b_star", "b3_max"]);
    for r in bell::fig2_scan(&a.lambda, &a.b)? {
        t.push(vec![r.lambda.into(), r.b_star.into(), r.b3_max.into()]);
    }
    Ok(Output::Table(t))
}

/// The quantity in the truncated Fock space at one cutoff.
fn oracle_value(q: Quantity, lambda: f64, alpha: &CoherentAmplitudes, cutoff: usize) -> squeeze3::Result<f64> {
    let arena = build_arena(cutoff)?;
    let prepared = |alpha: &CoherentAmplitudes| -> squeeze3::Result<KetVector> {
        let u = s3_unitary(&arena, lambda)?;
        u.apply(&coherent_ket(&arena, alpha)?)
    };
    match q {
        Quantity::VarX3 => fock::moment_x3(&arena, &prepared(alpha)?, 2),
        Quantity::VarY3 => fock::central_moment(&arena, &prepared(alpha)?, &FockOperator::y3(&arena), 2),
        Quantity::FourthX3 => fock::moment_x3(&arena, &prepared(alpha)?, 4),
        Quantity::MeanPhoton => fock::mean_power(&arena, &prepared(alpha)?, 1),
        Quantity::SecondFactorial => fock::mean_power(&arena, &prepared(alpha)?, 2),
        Quantity::VacuumAmplitude => Ok(prepared(&CoherentAmplitudes::vacuum())?.amplitude(&arena, [0, 0, 0]).re),
        Quantity::Parity => fock::displaced_parity(&arena, &prepared(alpha)?, [Complex64::new(0.0, 0.0); 3]),
        Quantity::Norm => Ok(prepared(alpha)?.norm()),
    }
}

/// The same quantity from the closed forms.
fn analytic_value(q: Quantity, lambda: f64, alpha: &CoherentAmplitudes) -> squeeze3::Result<f64> {
    let state = make_state(lambda, *alpha)?;
    Ok(match q {
        Quantity::VarX3 => gaussian::central_moment(&state, &MomentQuery::x3(2)?),
        Quantity::VarY3 => gaussian::central_moment(&state, &MomentQuery::y3(2)?),
        Quantity::FourthX3 => gaussian::central_moment(&state, &MomentQuery::x3(4)?),
        Quantity::MeanPhoton => photon::mean_power_exact(1, alpha, lambda)?,
        Quantity::SecondFactorial => photon::mean_power_exact(2, alpha, lambda)?,
        Quantity::VacuumAmplitude => gaussian::normal_order_coefficients(lambda)?.prefactor,
        Quantity::Parity => std::f64::consts::PI.powi(3) * gaussian::wigner(&state, [0.0; 3], [0.0; 3]),
        Quantity::Norm => 1.0,
    })
}

fn oracle_check(a: &OracleArgs) -> Result<Output, CliError> {
    let lambda = finite("lambda", a.lambda)?;
    let alpha = CoherentAmplitudes::new(a.alpha)?;
    let report = fock::convergence_report(|c| oracle_value(a.quantity, lambda, &alpha, c), &a.cutoffs)?;
    let reference = analytic_value(a.quantity, lambda, &alpha)?;
    if report.non_monotone {
        eprintln!("warning: successive differences do not shrink monotonically");
    }
    let mut t = Table::new(&["cutoff", "value", "delta", "analytic"]);
    for r in &report.rows {
        t.push(vec![r.cutoff.into(), r.value.into(), r.delta.into(), reference.into()]);
    }
    Ok(Output::Table(t))
}

fn errata_cmd() -> Result<Output, CliError> {
    let report = errata::errata_report()?;
    let mut t = Table::new(&["id", "topic", "point", "quantity", "printed", "implemented", "reference", "discrepancy"]);
    for e in &report.errata {
        for r in &e.evidence {
            t.push(vec![
                e.id.as_str().into(),
                e.topic.as_str().into(),
                r.point.as_str().into(),
                r.quantity.as_str().into(),
                r.printed.into(),
                r.implemented.into(),
                r.reference.into(),
                r.discrepancy.into(),
            ]);
        }
    }
    let json = serde_json::to_value(&report).map_err(|e| CliError::Numeric(e.to_string()))?;
    Ok(Output::Json(round_floats(json), t))
}

/// Rounds every float in a JSON document to 12 significant digits.
fn round_floats(v: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("checked f64");
            table::format_float(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

/// Computes the requested table without writing anything.
pub fn execute(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Moments(a) => moments(a),
        Command::Pk(a) => pk(a),
        Command::Fig1(a) => fig1(a),
        Command::Wigner(a) => wigner(a),
        Command::Bell(a) => bell_cmd(a),
        Command::Fig2(a) => fig2(a),
        Command::OracleCheck(a) => oracle_check(a),
        Command::Errata => errata_cmd(),
    }
}

/// Renders an output in the requested format.
pub fn render(output: &Output, format: Format) -> String {
    match (output, format) {
        (Output::Table(t) | Output::Json(_, t), Format::Csv) => t.to_csv_string(),
        (Output::Table(t), Format::Json) => json_text(&t.to_json()),
        (Output::Json(v, _), Format::Json) => json_text(v),
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

fn gnuplot_script(command: &Command, data: &Path, columns: &[String]) -> String {
    let file = data.display().to_string().replace('\'', "''");
    let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\n");
    match command {
        Command::Fig1(_) => {
            s.push_str("set xlabel 'Re alpha3'\nset ylabel 'Im alpha3'\nset zlabel 'P2'\n");
            s.push_str(&format!("splot '{file}' using 1:2:3 with points, '' using 1:2:4 with points\n"));
        }
        Command::Fig2(_) => {
            s.push_str("set xlabel 'lambda'\nset ylabel 'max B(3)'\n");
            s.push_str(&format!("plot '{file}' using 1:3 with linespoints, 2 title 'local bound'\n"));
        }
        _ => {
            s.push_str(&format!("set xlabel '{}'\n", columns.first().map_or("", String::as_str)));
            let series: Vec<String> = (2..=columns.len())
                .map(|c| {
                    let src = if c == 2 { format!("'{file}'") } else { "''".to_string() };
                    format!("{src} using 1:{c} with linespoints")
                })
                .collect();
            s.push_str(&format!("plot {}\n", series.join(", ")));
        }
    }
    s
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match try_run(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn try_run(cli: &Cli) -> Result<(), CliError> {
    if cli.gnuplot.is_some() && cli.format != Format::Csv {
        return Err(CliError::Invalid("--gnuplot needs --format csv".into()));
    }
    // Open outputs first so an unwritable path fails before any computation.
    let out_file = cli.output.as_deref().map(create).transpose()?;
    let script_file = cli.gnuplot.as_deref().map(create).transpose()?;

    let output = execute(&cli.command)?;
    let text = render(&output, cli.format);
    let write_err = |e: io::Error| CliError::Invalid(format!("write failed: {e}"));
    match out_file {
        Some(mut f) => f.write_all(text.as_bytes()).map_err(write_err)?,
        None => io::stdout().lock().write_all(text.as_bytes()).map_err(write_err)?,
    }
    if let (Some(mut f), Some(data)) = (script_file, cli.output.as_deref()) {
        let columns = match &output {
            Output::Table(t) | Output::Json(_, t) => &t.columns,
        };
        f.write_all(gnuplot_script(&cli.command, data, columns).as_bytes()).map_err(write_err)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("squeeze3").chain(args.iter().copied())).unwrap()
    }

    fn table(args: &[&str]) -> Table {
        match execute(&parse(args).command).unwrap() {
            Output::Table(t) | Output::Json(_, t) => t,
        }
    }

    #[test]
    fn moments_table() {
        let t = table(&["moments", "--lambda", "0.2", "--m-max", "4"]);
        assert_eq!(t.columns, ["m", "hos_x", "hos_y", "product"]);
        assert_eq!(t.rows.len(), 4);
        let Cell::Float(x) = t.rows[0][1] else { panic!() };
        assert!((x - (-0.8f64).exp() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn negative_values_parse() {
        let t = table(&["pk", "--lambda", "-0.3", "--alpha", "-1+0.5i,0.2,-i"]);
        assert_eq!(t.rows.len(), 1);
        let t = table(&["fig1", "--re", "-0.1:0.1:0.1", "--im", "0"]);
        assert_eq!(t.rows.len(), 3);
    }

    #[test]
    fn bell_options() {
        let t = table(&["bell", "--lambda", "0", "--alpha", "0,0,0", "--beta", "0,0,0", "--beta-prime", "0,0,0"]);
        assert_eq!(t.rows[0][1], Cell::Float(2.0));
        assert!(Cli::try_parse_from(["squeeze3", "bell", "--lambda", "0", "--b", "1", "--beta", "0,0,0"]).is_err());
        assert!(Cli::try_parse_from(["squeeze3", "bell", "--lambda", "0", "--search"]).is_err());
        let e = execute(&parse(&["bell", "--lambda", "0"]).command).err().unwrap();
        assert_eq!(e.exit_code(), EXIT_INVALID);
    }

    #[test]
    fn error_classes() {
        let e = execute(&parse(&["moments", "--lambda", "0.2", "--m-max", "9"]).command).err().unwrap();
        assert_eq!(e.exit_code(), EXIT_INVALID);
        // The paper path is singular at lambda = 0.
        let e = execute(&parse(&["pk", "--lambda", "0", "--alpha", "1,1,1", "--path", "paper"]).command).err().unwrap();
        assert_eq!(e.exit_code(), EXIT_INVALID);
        // Vacuum has no photons, so P_k divides by zero.
        let e = execute(&parse(&["pk", "--lambda", "0", "--alpha", "0,0,0"]).command).err().unwrap();
        assert_eq!(e.exit_code(), EXIT_NUMERIC);
    }

    #[test]
    fn complex_cells_round_trip_as_text() {
        let z = Complex64::new(0.25, -1.5);
        assert_eq!(fmt_complex(z), "2.50000000000e-1-1.50000000000e0i");
        assert_eq!(parse::complex(&fmt_complex(z)).unwrap(), z);
    }

    #[test]
    fn gnuplot_scripts_reference_the_data() {
        let cli = parse(&["fig2"]);
        let s = gnuplot_script(&cli.command, Path::new("out.csv"), &["lambda".into(), "b_star".into(), "b3_max".into()]);
        assert!(s.contains("plot 'out.csv' using 1:3"));
        let cli = parse(&["moments", "--lambda", "0.1"]);
        let s = gnuplot_script(&cli.command, Path::new("m.csv"), &["m".into(), "hos_x".into(), "hos_y".into()]);
        assert!(s.contains("plot 'm.csv' using 1:2 with linespoints, '' using 1:3 with linespoints"));
    }

    #[test]
    fn json_rendering_rounds() {
        let out = execute(&parse(&["moments", "--lambda", "0.2", "--m-max", "1"]).command).unwrap();
        let s = render(&out, Format::Json);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v[0]["m"], 1);
        assert_eq!(v[0]["hos_x"].as_f64().unwrap(), 0.112332241029);
    }
}
