use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use level_spectra::bounds::{leafstar_cubic_roots, path_rho_closed_form};
use level_spectra::enumerate::cap_from_env;
use level_spectra::report::{bounds_csv, fmt_sig, round_json};
use level_spectra::spectra::{characteristic_polynomial, DEFAULT_CLUSTER_TOL};
use level_spectra::tree::parse_tree_file;
use level_spectra::verify::{extremal_sweep, Statistic};
use level_spectra::{
    AnalysisReport, AnalyzedTree, BoundSelection, EigenMethod, Error, Parallelism, RootedTree,
    VerifyOptions,
};

/// Largest tree `analyze` and `special` accept; dense eigensolves are cubic.
const MAX_ANALYZE_ORDER: usize = 2048;
/// Relative agreement required between closed forms and the eigensolver.
const CLOSED_FORM_TOL: f64 = 1e-8;

mod exit {
    pub const OK: u8 = 0;
    pub const VIOLATION: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const IO: u8 = 3;
    pub const RESOURCE: u8 = 4;
    pub const USAGE: u8 = 64;
}

#[derive(Parser)]
#[command(name = "level-spectra", version, about = "Level matrices of rooted trees")]
struct Cli {
    /// Relative tolerance for clustering eigenvalues.
    #[arg(long, global = true, default_value_t = DEFAULT_CLUSTER_TOL)]
    tol: f64,
    /// Dense eigensolver.
    #[arg(long, global = true, value_enum, default_value_t = Method::Ql)]
    method: Method,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Ql,
    Jacobi,
}

impl From<Method> for EigenMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Ql => EigenMethod::TridiagonalQl,
            Method::Jacobi => EigenMethod::Jacobi,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a tree file (`-` reads stdin).
    Analyze(AnalyzeArgs),
    /// Run every check over all rooted trees of one order.
    Verify(VerifyArgs),
    /// Find the trees minimizing or maximizing a spectral statistic.
    Extremal(ExtremalArgs),
    /// Analyze a named family against its closed form.
    Special(SpecialArgs),
    /// Print the exact characteristic polynomial of a tree file.
    Charpoly(CharpolyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
    Csv,
    Dot,
    Treefile,
    Matrix,
}

#[derive(Args)]
struct AnalyzeArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    /// Include the exact characteristic polynomial.
    #[arg(long)]
    charpoly: bool,
    /// `all`, `none`, or comma-separated bound names.
    #[arg(long, default_value = "all")]
    bounds: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LedgerFormat {
    Text,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    order: usize,
    /// Comma-separated check names.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Worker threads; defaults to all available cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the ledger here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = LedgerFormat::Text)]
    format: LedgerFormat,
    /// Largest order for the exact characteristic polynomial checks.
    #[arg(long, default_value_t = 10)]
    charpoly_max: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stat {
    Rho,
    Energy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Star,
    Path,
    Leafstar,
    Dary,
}

#[derive(Args)]
struct ExtremalArgs {
    #[arg(long)]
    order: usize,
    #[arg(long, value_enum)]
    stat: Stat,
    #[arg(long, conflicts_with = "max")]
    min: bool,
    #[arg(long)]
    max: bool,
    /// Fail unless the extreme tree is this family.
    #[arg(long, value_enum)]
    expect: Option<Family>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = LedgerFormat::Text)]
    format: LedgerFormat,
}

#[derive(Args)]
struct SpecialArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    arity: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long, value_enum, default_value_t = LedgerFormat::Text)]
    format: LedgerFormat,
    #[arg(long)]
    charpoly: bool,
}

#[derive(Args)]
struct CharpolyArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = LedgerFormat::Text)]
    format: LedgerFormat,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Empty
            | Error::NoRoot
            | Error::MultipleRoots { .. }
            | Error::IndexOutOfRange { .. }
            | Error::CycleDetected { .. }
            | Error::Parse { .. } => exit::PARSE,
            Error::ResourceLimit(_) => exit::RESOURCE,
            Error::InvalidOrder(_) | Error::UnknownCheck(_) => exit::USAGE,
            _ => exit::VIOLATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: exit::IO,
        message: format!("{}: {e}", path.display()),
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: exit::USAGE,
        message: message.into(),
    }
}

type CmdResult = Result<(String, u8), Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| io_failure(path, e))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| io_failure(path, e))
    }
}

fn load_tree(path: &Path) -> Result<RootedTree, Failure> {
    let text = read_input(path)?;
    parse_tree_file(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn analyze_tree(cli: &Cli, tree: RootedTree) -> Result<AnalyzedTree, Failure> {
    if tree.len() > MAX_ANALYZE_ORDER {
        return Err(Error::ResourceLimit(format!(
            "{} vertices exceeds the analysis limit of {MAX_ANALYZE_ORDER}",
            tree.len()
        ))
        .into());
    }
    Ok(AnalyzedTree::with_options(tree, cli.tol, cli.method.into())?)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn cmd_analyze(cli: &Cli, args: &AnalyzeArgs) -> CmdResult {
    let tree = load_tree(&args.path)?;
    match args.format {
        ReportFormat::Dot => return Ok((tree.to_dot(), exit::OK)),
        ReportFormat::Treefile => return Ok((tree.to_tree_file(), exit::OK)),
        _ => {}
    }
    let selection: BoundSelection = args.bounds.parse()?;
    let analyzed = analyze_tree(cli, tree)?;
    if args.format == ReportFormat::Matrix {
        return Ok((analyzed.matrix.to_text(), exit::OK));
    }
    let report = AnalysisReport::new(&analyzed, args.charpoly, &selection)?;
    let code = if report.violations() == 0 {
        exit::OK
    } else {
        exit::VIOLATION
    };
    let out = match args.format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => report.to_json() + "\n",
        ReportFormat::Csv => bounds_csv(&report.bounds),
        _ => unreachable!("handled above"),
    };
    Ok((out, code))
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> CmdResult {
    let mut opts = VerifyOptions {
        parallelism: Parallelism::from_jobs(args.jobs),
        cluster_tol: cli.tol,
        method: cli.method.into(),
        cap: cap_from_env(),
        charpoly_max_order: args.charpoly_max,
        ..VerifyOptions::default()
    };
    if !args.only.is_empty() {
        opts = opts.select(&args.only)?;
    }
    let ledger = level_spectra::verify_order(args.order, &opts)?;
    let body = match args.format {
        LedgerFormat::Text => ledger.to_text(),
        LedgerFormat::Json => {
            let mut v = serde_json::to_value(&ledger).expect("ledger serializes");
            round_json(&mut v);
            pretty(&v)
        }
    };
    let code = if ledger.is_clean() {
        exit::OK
    } else {
        exit::VIOLATION
    };
    match &args.out {
        Some(path) => {
            fs::write(path, &body).map_err(|e| io_failure(path, e))?;
            let summary = format!(
                "order {}: {} trees, {} violation(s); ledger written to {}\n",
                ledger.order,
                ledger.tree_count,
                ledger.total_violations(),
                path.display()
            );
            Ok((summary, code))
        }
        None => Ok((body, code)),
    }
}

fn family_matches(family: Family, tree: &RootedTree) -> bool {
    let n = tree.len();
    let seq = tree.canonical_level_sequence();
    match family {
        Family::Star => n >= 2 && tree.is_rooted_star(),
        Family::Path => seq.iter().enumerate().all(|(i, &l)| l == i),
        Family::Leafstar => RootedTree::star_rooted_at_leaf(n)
            .is_ok_and(|t| t.canonical_level_sequence() == seq),
        Family::Dary => false,
    }
}

fn family_name(family: Family) -> &'static str {
    match family {
        Family::Star => "star",
        Family::Path => "path",
        Family::Leafstar => "leafstar",
        Family::Dary => "dary",
    }
}

fn cmd_extremal(cli: &Cli, args: &ExtremalArgs) -> CmdResult {
    if args.min == args.max {
        return Err(usage("pass exactly one of --min or --max"));
    }
    if args.expect == Some(Family::Dary) {
        return Err(usage("--expect accepts star, path or leafstar"));
    }
    let statistic = match args.stat {
        Stat::Rho => Statistic::Rho,
        Stat::Energy => Statistic::Energy,
    };
    let opts = VerifyOptions {
        parallelism: Parallelism::from_jobs(args.jobs),
        cluster_tol: cli.tol,
        method: cli.method.into(),
        cap: cap_from_env(),
        ..VerifyOptions::default()
    };
    let outcome = extremal_sweep(args.order, statistic, &opts)?;
    let (tree, value, gap, direction) = if args.min {
        (&outcome.argmin, outcome.min_value, outcome.min_gap, "min")
    } else {
        (&outcome.argmax, outcome.max_value, outcome.max_gap, "max")
    };
    let matched = args.expect.map(|f| family_matches(f, tree));
    let code = if matched == Some(false) {
        exit::VIOLATION
    } else {
        exit::OK
    };
    let out = match args.format {
        LedgerFormat::Text => {
            let mut s = format!(
                "order {} {} {}: {} at [{}]\n",
                args.order,
                direction,
                statistic.name(),
                fmt_sig(value),
                tree.canonical_encoding()
            );
            if let Some(g) = gap {
                s += &format!("gap to runner-up: {}\n", fmt_sig(g));
            }
            if let (Some(f), Some(ok)) = (args.expect, matched) {
                s += &format!(
                    "expect {}: {}\n",
                    family_name(f),
                    if ok { "PASS" } else { "FAIL" }
                );
            }
            s
        }
        LedgerFormat::Json => {
            let mut v = json!({
                "order": args.order,
                "statistic": statistic.name(),
                "direction": direction,
                "tree": tree.canonical_encoding(),
                "value": value,
                "gap": gap,
                "expect": args.expect.map(family_name),
                "matched": matched,
            });
            round_json(&mut v);
            pretty(&v)
        }
    };
    Ok((out, code))
}

fn build_family(args: &SpecialArgs) -> Result<RootedTree, Failure> {
    let order = || args.order.ok_or_else(|| usage("--order is required for this family"));
    let tree = match args.family {
        Family::Star => RootedTree::rooted_star(order()?)?,
        Family::Path => RootedTree::rooted_path(order()?)?,
        Family::Leafstar => RootedTree::star_rooted_at_leaf(order()?)?,
        Family::Dary => {
            let arity = args.arity.ok_or_else(|| usage("--arity is required for dary"))?;
            let height = args.height.ok_or_else(|| usage("--height is required for dary"))?;
            RootedTree::complete_dary(arity, height)?
        }
    };
    Ok(tree)
}

/// Closed-form comparison for the families that have one.
fn closed_form_check(family: Family, t: &AnalyzedTree) -> Result<Option<Value>, Failure> {
    let n = t.n();
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    let value = match family {
        Family::Star if n >= 2 => {
            let want = ((n - 1) as f64).sqrt();
            let residual = rel(t.rho(), want);
            json!({"closed_form_rho": want, "residual": residual, "ok": residual <= CLOSED_FORM_TOL})
        }
        Family::Path if n >= 2 => {
            let want = path_rho_closed_form(n)?;
            let residual = rel(t.rho(), want);
            json!({"closed_form_rho": want, "residual": residual, "ok": residual <= CLOSED_FORM_TOL})
        }
        Family::Leafstar => {
            let roots = leafstar_cubic_roots(n)?;
            let mut rest = t.spectrum.values.clone();
            let mut residuals = Vec::new();
            for r in roots {
                let (idx, err) = rest
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i, (v - r).abs()))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("at least three eigenvalues");
                residuals.push(err);
                rest.remove(idx);
            }
            let window = t.spectrum.window();
            let zeros = rest.iter().filter(|v| v.abs() <= window).count();
            let ok = residuals.iter().all(|&e| e <= CLOSED_FORM_TOL) && zeros == n - 3;
            json!({
                "cubic": format!("x^3 + ({})x + ({})", 9 - 5 * n as i64, 8 - 4 * n as i64),
                "cubic_roots": roots,
                "residuals": residuals,
                "residual_zeros": zeros,
                "ok": ok,
            })
        }
        _ => return Ok(None),
    };
    Ok(Some(value))
}

fn cmd_special(cli: &Cli, args: &SpecialArgs) -> CmdResult {
    let tree = build_family(args)?;
    let analyzed = analyze_tree(cli, tree)?;
    let report = AnalysisReport::new(&analyzed, args.charpoly, &BoundSelection::All)?;
    let check = closed_form_check(args.family, &analyzed)?;
    let closed_ok = check
        .as_ref()
        .is_none_or(|c| c["ok"].as_bool().unwrap_or(false));
    let code = if closed_ok && report.violations() == 0 {
        exit::OK
    } else {
        exit::VIOLATION
    };
    let out = match args.format {
        LedgerFormat::Text => {
            let mut s = format!("family:          {}\n", family_name(args.family));
            s += &report.to_text();
            if let Some(c) = &check {
                s += "closed form:\n";
                if let Some(obj) = c.as_object() {
                    for (k, v) in obj {
                        let shown = match v {
                            Value::Number(x) => fmt_sig(x.as_f64().unwrap_or(f64::NAN)),
                            Value::Array(xs) => xs
                                .iter()
                                .map(|x| fmt_sig(x.as_f64().unwrap_or(f64::NAN)))
                                .collect::<Vec<_>>()
                                .join(", "),
                            Value::String(x) => x.clone(),
                            other => other.to_string(),
                        };
                        s += &format!("  {k:<16} {shown}\n");
                    }
                }
            }
            s
        }
        LedgerFormat::Json => {
            let mut v = json!({
                "family": family_name(args.family),
                "report": report.to_json_value(),
                "closed_form": check,
            });
            round_json(&mut v);
            pretty(&v)
        }
    };
    Ok((out, code))
}

fn cmd_charpoly(args: &CharpolyArgs) -> CmdResult {
    let tree = load_tree(&args.path)?;
    let p = characteristic_polynomial(level_spectra::LevelMatrix::new(&tree).entries())?;
    let out = match args.format {
        LedgerFormat::Text => format!("{}\n", p.to_display_string()),
        LedgerFormat::Json => pretty(&json!({
            "n": tree.len(),
            "coefficients": p.to_decimal_strings(),
        })),
    };
    Ok((out, exit::OK))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        eprintln!("error: --tol must be a positive number");
        return ExitCode::from(exit::USAGE);
    }
    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(&cli, a),
        Command::Verify(a) => cmd_verify(&cli, a),
        Command::Extremal(a) => cmd_extremal(&cli, a),
        Command::Special(a) => cmd_special(&cli, a),
        Command::Charpoly(a) => cmd_charpoly(a),
    };
    match result {
        Ok((out, code)) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(exit::IO);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
