use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use graph_sobolev::approximation::{
    example_f, example_f_k, example_g, example_g_k, experiment_csv, experiment_summary_json,
    geometric_ks, run_experiment_in, InfiniteGraphModel, SeriesKind,
};
use graph_sobolev::inequalities::{
    run_suite, write_reports_csv, CheckKind, SuiteConfig, DEFAULT_SEED,
};
use graph_sobolev::io::{
    graph_to_json, parse_graph, parse_scalar_field, scalar_field_to_json, vector_field_to_json,
};
use graph_sobolev::numeric::fmt17;
use graph_sobolev::sobolev::MARGIN_TOLERANCE;
use graph_sobolev::{
    build_graph, gradient, gradient_norm, iterated_nabla, laplacian, p_laplacian, sobolev_norm,
    Edge, Error, Exponent, ExponentSpec, NablaPayload, NormVariant, ScalarField, SobolevNorm,
};

#[derive(Debug, Parser)]
#[command(
    name = "graph-sobolev",
    version,
    about = "Sobolev spaces on weighted graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply an operator to a scalar field.
    ///
    /// OPERATOR is one of: gradient, gradient-norm, laplacian, nabla M,
    /// plaplacian P, norm SPEC. SPEC is `lp:P`, `w:M:P`, `w:M:P:power`,
    /// `mixed:P0,P1,...` or `reduced:M`; P may be `inf`.
    Op {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        operator: String,
        param: Option<String>,
    },
    /// Run the randomized inequality suites and write a CSV report.
    Verify {
        /// Use this graph for every trial instead of random graphs.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = MARGIN_TOLERANCE)]
        tol: f64,
        /// Comma-separated subset of checks.
        #[arg(long, value_enum, value_delimiter = ',')]
        checks: Vec<CheckArg>,
        /// Directory for witness files of failed trials.
        #[arg(long, default_value = ".")]
        witness_dir: PathBuf,
    },
    /// Fit the convergence rate of an approximating sequence.
    Converge {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long, value_enum)]
        series: SeriesArg,
        #[arg(long, default_value_t = 16)]
        k_min: u64,
        #[arg(long, default_value_t = 4096)]
        k_max: u64,
        /// Fixed window length for every k (default 4k).
        #[arg(long)]
        window: Option<usize>,
        /// CSV destination (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON summary destination (stdout when absent).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Write a sample graph and field into a directory.
    Example {
        #[arg(value_enum)]
        name: ExampleArg,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckArg {
    Holder,
    Minkowski,
    Clarkson,
    EmbeddingSup,
    EmbeddingLq,
    PathBound,
    ReducedGap,
}

impl From<CheckArg> for CheckKind {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::Holder => CheckKind::Holder,
            CheckArg::Minkowski => CheckKind::Minkowski,
            CheckArg::Clarkson => CheckKind::Clarkson,
            CheckArg::EmbeddingSup => CheckKind::EmbeddingSup,
            CheckArg::EmbeddingLq => CheckKind::EmbeddingLq,
            CheckArg::PathBound => CheckKind::PathBound,
            CheckArg::ReducedGap => CheckKind::ReducedGap,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Nstar,
    Unitpath,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeriesArg {
    TruncLp,
    CutoffW1p,
    F,
    G,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExampleArg {
    /// Two vertices, unit weight and measure, u = (0, 1).
    TwoVertex,
    /// The 1/n^2 half-line window of length 4k with f_k.
    F,
    /// The 1/n^2 half-line window of length 4k with g_k.
    G,
    /// f = 1 on the same window.
    FLimit,
    /// g = n^{1/3} on the same window.
    GLimit,
}

enum Failure {
    Input(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_parse() {
            Failure::Input(e.to_string())
        } else {
            Failure::Precondition(e.to_string())
        }
    }
}

type CliResult = std::result::Result<ExitCode, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> std::result::Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(e.to_string())),
    }
}

fn parse_exponent(s: &str) -> std::result::Result<f64, Failure> {
    match s {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => s
            .parse::<f64>()
            .map_err(|_| Failure::Input(format!("not an exponent: {s}"))),
    }
}

fn parse_order(s: &str) -> std::result::Result<usize, Failure> {
    s.parse()
        .map_err(|_| Failure::Input(format!("not a non-negative integer: {s}")))
}

enum NormRequest {
    Lp(f64),
    Sobolev(SobolevNorm),
}

fn parse_norm_spec(spec: &str) -> std::result::Result<NormRequest, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Failure::Input(format!("unknown norm spec: {spec}"));
    match parts.as_slice() {
        ["lp", p] => Ok(NormRequest::Lp(parse_exponent(p)?)),
        ["w", m, p] => Ok(NormRequest::Sobolev(SobolevNorm::sum(
            parse_order(m)?,
            parse_exponent(p)?,
        )?)),
        ["w", m, p, "power"] => Ok(NormRequest::Sobolev(SobolevNorm::power_sum(
            parse_order(m)?,
            parse_exponent(p)?,
        )?)),
        ["mixed", ps] => {
            let ps = ps
                .split(',')
                .map(parse_exponent)
                .collect::<std::result::Result<Vec<f64>, Failure>>()?;
            Ok(NormRequest::Sobolev(SobolevNorm::new(
                ps.len().saturating_sub(1),
                ExponentSpec::mixed(&ps)?,
                NormVariant::Sum,
            )?))
        }
        ["reduced", m] => Ok(NormRequest::Sobolev(SobolevNorm::reduced(parse_order(m)?))),
        _ => Err(bad()),
    }
}

fn require<'a>(param: &'a Option<String>, op: &str) -> std::result::Result<&'a str, Failure> {
    param
        .as_deref()
        .ok_or_else(|| Failure::Input(format!("operator {op} needs a parameter")))
}

fn cmd_op(
    graph: &Path,
    field: &Path,
    out: Option<&Path>,
    operator: &str,
    param: &Option<String>,
) -> CliResult {
    let g = parse_graph(&read(graph)?)?;
    let u = parse_scalar_field(&read(field)?, &g)?;
    let text = match operator {
        "gradient" => vector_field_to_json(&gradient(&u)),
        "gradient-norm" => scalar_field_to_json(&gradient_norm(&u)),
        "laplacian" => scalar_field_to_json(&laplacian(&u)),
        "nabla" => {
            let m = parse_order(require(param, operator)?)?;
            match iterated_nabla(&u, m).payload {
                NablaPayload::Scalar(s) => scalar_field_to_json(&s),
                NablaPayload::Vector(v) => vector_field_to_json(&v),
            }
        }
        "plaplacian" => {
            let p = parse_exponent(require(param, operator)?)?;
            scalar_field_to_json(&p_laplacian(&u, p)?)
        }
        "norm" => {
            let value = match parse_norm_spec(require(param, operator)?)? {
                NormRequest::Lp(p) => u.norm(Exponent::new(p)?),
                NormRequest::Sobolev(spec) => sobolev_norm(&u, &spec)?,
            };
            format!("{{\"value\": {}}}\n", fmt17(value))
        }
        other => return Err(Failure::Input(format!("unknown operator: {other}"))),
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn file_safe(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '-'
            }
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    graph: Option<&Path>,
    out: Option<&Path>,
    seed: u64,
    trials: u64,
    tol: f64,
    checks: &[CheckArg],
    witness_dir: &Path,
) -> CliResult {
    let fixed = match graph {
        Some(p) => Some(parse_graph(&read(p)?)?),
        None => None,
    };
    let mut kinds: Vec<CheckKind> = if checks.is_empty() {
        CheckKind::ALL.to_vec()
    } else {
        checks.iter().map(|&c| c.into()).collect()
    };
    if checks.is_empty() && fixed.as_ref().is_some_and(|g| !g.is_symmetric()) {
        eprintln!("graph-sobolev: skipping reduced-gap, it needs symmetric weights");
        kinds.retain(|&k| k != CheckKind::ReducedGap);
    }
    let cfg = SuiteConfig {
        trials,
        seed,
        checks: kinds,
        fixed_graph: fixed,
        tolerance: tol,
        ..SuiteConfig::default()
    };
    let reports = run_suite(&cfg)?;
    let mut csv = Vec::new();
    write_reports_csv(&mut csv, &reports)?;
    emit(out, &String::from_utf8(csv).expect("csv is utf-8"))?;

    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    if failed.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    fs::create_dir_all(witness_dir)
        .map_err(|e| Failure::Input(format!("{}: {e}", witness_dir.display())))?;
    for r in &failed {
        let path = witness_dir.join(format!("witness-{}-{}.json", file_safe(&r.name), r.trial));
        let body = r.witness.as_deref().unwrap_or("{}\n");
        fs::write(&path, body).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        eprintln!(
            "FAIL {} trial {}: lhs {} rhs {}; witness {}",
            r.name,
            r.trial,
            fmt17(r.lhs),
            fmt17(r.rhs),
            path.display()
        );
    }
    eprintln!("{} of {} trials failed", failed.len(), reports.len());
    Ok(ExitCode::from(1))
}

fn cmd_converge(
    model: ModelArg,
    series: SeriesArg,
    k_min: u64,
    k_max: u64,
    window: Option<usize>,
    out: Option<&Path>,
    summary: Option<&Path>,
) -> CliResult {
    let model = match model {
        ModelArg::Nstar => InfiniteGraphModel::nstar(),
        ModelArg::Unitpath => InfiniteGraphModel::unit_path(),
    };
    let kind = match series {
        SeriesArg::TruncLp => SeriesKind::TruncLp,
        SeriesArg::CutoffW1p => SeriesKind::CutoffW1p,
        SeriesArg::F => SeriesKind::F,
        SeriesArg::G => SeriesKind::G,
    };
    let ks = geometric_ks(k_min, k_max);
    let result = run_experiment_in(&model, kind, &ks, window)?;
    emit(out, &experiment_csv(&result))?;
    emit(summary, &experiment_summary_json(&result))?;
    if result.iter().all(|s| s.pass) {
        Ok(ExitCode::SUCCESS)
    } else {
        for s in result.iter().filter(|s| !s.pass) {
            eprintln!(
                "{}: fitted slope {} differs from expected {}",
                s.name,
                fmt17(s.fitted_slope()),
                fmt17(s.expected_slope)
            );
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_example(name: ExampleArg, k: usize, out: &Path) -> CliResult {
    fs::create_dir_all(out).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    let (graph_json, field_json) = match name {
        ExampleArg::TwoVertex => {
            let g = build_graph(&[Edge::new(1, 2, 1.0)], [(1, 1.0), (2, 1.0)])?;
            let u = ScalarField::from_sparse(&g, [(2, 1.0)])?;
            (graph_to_json(&g), scalar_field_to_json(&u))
        }
        _ => {
            let w = InfiniteGraphModel::nstar().window(4 * k.max(1))?;
            let u = match name {
                ExampleArg::F => example_f_k(&w, k)?,
                ExampleArg::G => example_g_k(&w, k)?,
                ExampleArg::FLimit => example_f(&w),
                _ => example_g(&w),
            };
            (graph_to_json(w.graph()), scalar_field_to_json(&u))
        }
    };
    let gp = out.join("graph.json");
    let fp = out.join("field.json");
    emit(Some(&gp), &graph_json)?;
    emit(Some(&fp), &field_json)?;
    println!("{}\n{}", gp.display(), fp.display());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Op {
            graph,
            field,
            out,
            operator,
            param,
        } => cmd_op(graph, field, out.as_deref(), operator, param),
        Command::Verify {
            graph,
            out,
            seed,
            trials,
            tol,
            checks,
            witness_dir,
        } => cmd_verify(
            graph.as_deref(),
            out.as_deref(),
            *seed,
            *trials,
            *tol,
            checks,
            witness_dir,
        ),
        Command::Converge {
            model,
            series,
            k_min,
            k_max,
            window,
            out,
            summary,
        } => cmd_converge(
            *model,
            *series,
            *k_min,
            *k_max,
            *window,
            out.as_deref(),
            summary.as_deref(),
        ),
        Command::Example { name, k, out } => cmd_example(*name, *k, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("graph-sobolev: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("graph-sobolev: {msg}");
            ExitCode::from(3)
        }
    }
}
