//! `rhg`: generate, analyze and check random hyperbolic graphs.
//!
//! Exit codes: 0 success, 1 tolerance or validation failure, 2 usage error,
//! 3 I/O or parse error.

mod config;
mod manifest;

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rhg_core::oracle::{self, CampaignTolerances, MeasureValidationConfig};
use rhg_core::predictions::{PredictionOptions, PredictionReport};
use rhg_core::stats::{SlopeEstimator, StatsOptions, StatsReport};
use rhg_core::{build_bucketed, io, sample_coordinates, Adjacency, Graph, Params, SeededStream};

use manifest::Manifest;

pub const RUN_CONFIG_FILE: &str = "run.conf";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Tolerance(String),
    Compute(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Tolerance(_) | CliError::Compute(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Tolerance(m) => write!(f, "validation failed: {m}"),
            CliError::Compute(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<rhg_core::Error> for CliError {
    fn from(e: rhg_core::Error) -> Self {
        use rhg_core::Error as E;
        match e {
            E::InvalidParams(_) | E::Domain { .. } | E::InvalidInput(_) => CliError::Usage(e.to_string()),
            E::Io(_) | E::Parse { .. } | E::Json(_) => CliError::Io(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

/// Errors while reading user-supplied data files are I/O errors, whatever
/// their cause.
fn input_err(path: &Path) -> impl Fn(rhg_core::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Parser, Debug)]
#[command(name = "rhg", version, about = "Random hyperbolic graph toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a graph and write its edge list, coordinates and manifest.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Generate(GenerateArgs),
    /// Measure an edge list (plus optional coordinates).
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Analyze(AnalyzeArgs),
    /// Write the closed-form predictions for a parameter set.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Predict(PredictArgs),
    /// Run a multi-seed campaign and compare with the predictions.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Compare(CompareArgs),
    /// Check the ball measure formula against Monte Carlo estimates.
    #[command(name = "validate-measures", args_override_self = true, allow_negative_numbers = true)]
    ValidateMeasures(ValidateArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Key-value file supplying defaults for any of the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker thread cap (default: all cores). Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, env = "RHG_OUTPUT_DIR", default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Radial density exponent, must exceed 1/2.
    #[arg(long)]
    alpha: f64,
    /// Radius offset in R = 2 ln n + C.
    #[arg(long = "C", default_value_t = 0.0)]
    c: f64,
    /// Number of vertices.
    #[arg(long)]
    n: usize,
}

impl ModelArgs {
    fn params(&self) -> Result<Params, CliError> {
        Ok(Params::new(self.alpha, self.c, self.n)?)
    }

    fn canonical(&self, out: &mut Vec<(String, String)>) {
        push(out, "alpha", self.alpha);
        push(out, "C", self.c);
        push(out, "n", self.n);
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EstimatorArg {
    LogBinned,
    LeastSquares,
    MaximumLikelihood,
}

impl EstimatorArg {
    fn name(self) -> &'static str {
        match self {
            EstimatorArg::LogBinned => "log-binned",
            EstimatorArg::LeastSquares => "least-squares",
            EstimatorArg::MaximumLikelihood => "maximum-likelihood",
        }
    }

    fn estimator(self) -> SlopeEstimator {
        match self {
            EstimatorArg::LogBinned => SlopeEstimator::default(),
            EstimatorArg::LeastSquares => SlopeEstimator::LeastSquares,
            EstimatorArg::MaximumLikelihood => SlopeEstimator::MaximumLikelihood,
        }
    }
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Edge list, one `u v` pair per line.
    #[arg(long)]
    edges: PathBuf,
    /// Coordinate CSV; enables partition statistics. Needs --alpha.
    #[arg(long)]
    coords: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "C", default_value_t = 0.0)]
    c: f64,
    /// Vertex count when there are no coordinates (default: largest id + 1).
    #[arg(long)]
    n: Option<usize>,
    /// Partition radius fraction, used with --coords.
    #[arg(long, default_value_t = 0.8)]
    beta: f64,
    /// Lower end of the power-law fit range.
    #[arg(long)]
    k_min: Option<usize>,
    /// Upper end of the power-law fit range.
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long, value_enum, default_value_t = EstimatorArg::LogBinned)]
    estimator: EstimatorArg,
    /// Also write gnuplot two-column data files.
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true")]
    plot: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    k_min: usize,
    #[arg(long, default_value_t = 20)]
    k_max: usize,
    /// Partition radius fractions, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.8")]
    beta: Vec<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Seeds, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = 0.8)]
    beta: f64,
    #[arg(long)]
    tol_average_degree: Option<f64>,
    #[arg(long)]
    tol_dispersion: Option<f64>,
    #[arg(long)]
    tol_max_degree_exponent: Option<f64>,
    #[arg(long)]
    tol_degree_fraction: Option<f64>,
    #[arg(long)]
    tol_tail_fraction: Option<f64>,
    #[arg(long)]
    tol_clustering_floor: Option<f64>,
    #[arg(long)]
    tol_inner_count_factor: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

impl CompareArgs {
    fn tolerances(&self) -> CampaignTolerances {
        let mut t = CampaignTolerances::default();
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut t.average_degree, self.tol_average_degree);
        set(&mut t.average_degree_dispersion, self.tol_dispersion);
        set(&mut t.max_degree_exponent, self.tol_max_degree_exponent);
        set(&mut t.degree_fraction, self.tol_degree_fraction);
        set(&mut t.tail_fraction, self.tol_tail_fraction);
        set(&mut t.clustering_floor, self.tol_clustering_floor);
        set(&mut t.inner_count_factor, self.tol_inner_count_factor);
        t
    }
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.6,0.75,1.0")]
    alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
    x_fractions: Vec<f64>,
    #[arg(long = "C", default_value_t = 0.0)]
    c: f64,
    #[arg(long, default_value_t = oracle::DEFAULT_VALIDATION_N)]
    n: usize,
    #[arg(long, default_value_t = oracle::DEFAULT_VALIDATION_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = oracle::DEFAULT_VALIDATION_SIGMAS)]
    sigmas: f64,
    #[arg(long, default_value_t = oracle::DEFAULT_REQUIRED_PASS_FRACTION)]
    required_fraction: f64,
    #[command(flatten)]
    common: CommonArgs,
}

fn push(out: &mut Vec<(String, String)>, key: &str, value: impl Display) {
    out.push((key.to_string(), value.to_string()));
}

fn join<T: Display>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Creates the output directory and applies the thread cap.
fn prepare(common: &CommonArgs) -> Result<(), CliError> {
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    fs::create_dir_all(&common.out_dir).map_err(|e| CliError::Io(format!("{}: {e}", common.out_dir.display())))
}

/// Writes `run.conf` and returns a manifest listing it.
fn start_manifest(command: &str, dir: &Path, pairs: &[(String, String)]) -> Result<Manifest, CliError> {
    write_file(&dir.join(RUN_CONFIG_FILE), config::render(command, pairs).as_bytes())?;
    let mut m = Manifest::new(command, pairs);
    m.add_output(dir, RUN_CONFIG_FILE)?;
    Ok(m)
}

fn generate(args: &GenerateArgs) -> Result<(), CliError> {
    let params = args.model.params()?;
    prepare(&args.common)?;
    let dir = &args.common.out_dir;
    let mut pairs = Vec::new();
    args.model.canonical(&mut pairs);
    push(&mut pairs, "seed", args.seed);

    let coords = sample_coordinates(&params, &mut SeededStream::new(args.seed));
    let graph = build_bucketed(coords, params)?;

    let mut m = start_manifest("generate", dir, &pairs)?;
    let mut out = create(&dir.join("edges.txt"))?;
    io::write_edge_list(&mut out, graph.adjacency())?;
    let mut out = create(&dir.join("coords.csv"))?;
    io::write_coordinates(&mut out, graph.coords())?;
    m.add_output(dir, "edges.txt")?;
    m.add_output(dir, "coords.csv")?;
    m.params = Some(params);
    m.seeds = vec![args.seed];
    m.edge_count = Some(graph.edge_count());
    m.write(dir)?;
    println!(
        "generated n = {}, R = {:.6}, edges = {}, average degree = {:.4}",
        params.n(),
        params.radius(),
        graph.edge_count(),
        2.0 * graph.edge_count() as f64 / params.n() as f64
    );
    Ok(())
}

fn write_plot_files(dir: &Path, report: &StatsReport, graph: Option<&Graph>) -> Result<Vec<&'static str>, CliError> {
    let mut written = vec!["degree_histogram.dat"];
    let mut out = create(&dir.join(written[0]))?;
    let io_err = |e: std::io::Error| CliError::Io(e.to_string());
    writeln!(out, "# degree count").map_err(io_err)?;
    for (k, c) in &report.degree_histogram {
        writeln!(out, "{k} {c}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)?;

    if let Some(g) = graph {
        const WIDTH: f64 = 0.5;
        let mut bins: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
        for (v, p) in g.coords().iter().enumerate() {
            let e = bins.entry((p.r / WIDTH) as usize).or_insert((0.0, 0));
            e.0 += g.adjacency().degree(v) as f64;
            e.1 += 1;
        }
        written.push("radius_degree.dat");
        let mut out = create(&dir.join(written[1]))?;
        writeln!(out, "# radius mean_degree").map_err(io_err)?;
        for (b, (sum, count)) in bins {
            writeln!(out, "{} {}", (b as f64 + 0.5) * WIDTH, sum / count as f64).map_err(io_err)?;
        }
        out.flush().map_err(io_err)?;
    }
    Ok(written)
}

fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    prepare(&args.common)?;
    let dir = &args.common.out_dir;
    let edges = io::read_edge_list(open(&args.edges)?).map_err(input_err(&args.edges))?;

    let mut pairs = Vec::new();
    push(&mut pairs, "edges", args.edges.display());
    let mut options = StatsOptions {
        estimator: args.estimator.estimator(),
        ..Default::default()
    };
    match (args.k_min, args.k_max) {
        (Some(lo), Some(hi)) => {
            options.slope_range = Some((lo, hi));
            push(&mut pairs, "k-min", lo);
            push(&mut pairs, "k-max", hi);
            push(&mut pairs, "estimator", args.estimator.name());
        }
        (None, None) => {}
        _ => return Err(CliError::Usage("--k-min and --k-max must be given together".into())),
    }

    let (report, graph) = if let Some(coords_path) = &args.coords {
        let Some(alpha) = args.alpha else {
            return Err(CliError::Usage("--coords needs --alpha (and --C)".into()));
        };
        let coords = io::read_coordinates(open(coords_path)?).map_err(input_err(coords_path))?;
        let params = Params::new(alpha, args.c, coords.len())?;
        let adjacency = Adjacency::from_edges(coords.len(), &edges).map_err(input_err(&args.edges))?;
        let graph = Graph::from_parts(params, coords, adjacency).map_err(input_err(coords_path))?;
        push(&mut pairs, "coords", coords_path.display());
        push(&mut pairs, "alpha", alpha);
        push(&mut pairs, "C", args.c);
        push(&mut pairs, "beta", args.beta);
        options.beta = Some(args.beta);
        (StatsReport::from_graph(&graph, &options)?, Some(graph))
    } else {
        let n = match args.n {
            Some(n) => {
                push(&mut pairs, "n", n);
                n
            }
            None => edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0),
        };
        let adjacency = Adjacency::from_edges(n, &edges).map_err(input_err(&args.edges))?;
        (StatsReport::from_adjacency(&adjacency, &options)?, None)
    };
    if args.plot {
        push(&mut pairs, "plot", true);
    }

    let mut m = start_manifest("analyze", dir, &pairs)?;
    m.add_input(&args.edges)?;
    if let Some(p) = &args.coords {
        m.add_input(p)?;
    }
    m.params = graph.as_ref().map(|g| *g.params());
    m.edge_count = Some(report.edge_count);
    write_file(&dir.join("stats.json"), report.to_json()?.as_bytes())?;
    m.add_output(dir, "stats.json")?;
    if args.plot {
        for name in write_plot_files(dir, &report, graph.as_ref())? {
            m.add_output(dir, name)?;
        }
    }
    m.write(dir)?;
    println!(
        "n = {}, edges = {}, average degree = {:.4}, max degree = {}, clustering = {:.4}",
        report.n, report.edge_count, report.average_degree, report.max_degree, report.global_clustering
    );
    Ok(())
}

fn predict(args: &PredictArgs) -> Result<(), CliError> {
    let params = args.model.params()?;
    prepare(&args.common)?;
    let dir = &args.common.out_dir;
    let mut pairs = Vec::new();
    args.model.canonical(&mut pairs);
    push(&mut pairs, "k-min", args.k_min);
    push(&mut pairs, "k-max", args.k_max);
    push(&mut pairs, "beta", join(&args.beta));

    let options = PredictionOptions {
        k_min: args.k_min,
        k_max: args.k_max,
        betas: args.beta.clone(),
    };
    let report = PredictionReport::compute(&params, &options)?;
    let mut m = start_manifest("predict", dir, &pairs)?;
    m.params = Some(params);
    write_file(&dir.join("prediction.json"), report.to_json()?.as_bytes())?;
    m.add_output(dir, "prediction.json")?;
    m.write(dir)?;
    println!(
        "average degree = {:.4}, max degree exponent = {:.4}, power-law slope = {:.4}",
        report.average_degree, report.max_degree_exponent, report.powerlaw_slope
    );
    Ok(())
}

fn compare(args: &CompareArgs) -> Result<(), CliError> {
    let params = args.model.params()?;
    if args.seeds.is_empty() {
        return Err(CliError::Usage("--seeds needs at least one seed".into()));
    }
    prepare(&args.common)?;
    let dir = &args.common.out_dir;
    let tol = args.tolerances();
    let mut pairs = Vec::new();
    args.model.canonical(&mut pairs);
    push(&mut pairs, "seeds", join(&args.seeds));
    push(&mut pairs, "beta", args.beta);
    for (key, value) in [
        ("tol-average-degree", tol.average_degree),
        ("tol-dispersion", tol.average_degree_dispersion),
        ("tol-max-degree-exponent", tol.max_degree_exponent),
        ("tol-degree-fraction", tol.degree_fraction),
        ("tol-tail-fraction", tol.tail_fraction),
        ("tol-clustering-floor", tol.clustering_floor),
        ("tol-inner-count-factor", tol.inner_count_factor),
    ] {
        push(&mut pairs, key, value);
    }

    let table = oracle::campaign(&params, &args.seeds, args.beta, &tol)?;
    let mut m = start_manifest("compare", dir, &pairs)?;
    m.params = Some(params);
    m.seeds = args.seeds.clone();
    write_file(&dir.join("comparison.csv"), table.to_csv().as_bytes())?;
    write_file(&dir.join("comparison.txt"), table.to_text().as_bytes())?;
    let json = serde_json::to_string_pretty(&table).map_err(|e| CliError::Io(e.to_string()))?;
    write_file(&dir.join("comparison.json"), json.as_bytes())?;
    for name in ["comparison.csv", "comparison.txt", "comparison.json"] {
        m.add_output(dir, name)?;
    }
    m.write(dir)?;
    print!("{}", table.to_text());
    if table.passed() {
        Ok(())
    } else {
        Err(CliError::Tolerance("one or more quantities are outside their tolerance band".into()))
    }
}

fn validate_measures(args: &ValidateArgs) -> Result<(), CliError> {
    prepare(&args.common)?;
    let dir = &args.common.out_dir;
    let mut pairs = Vec::new();
    push(&mut pairs, "alphas", join(&args.alphas));
    push(&mut pairs, "x-fractions", join(&args.x_fractions));
    push(&mut pairs, "C", args.c);
    push(&mut pairs, "n", args.n);
    push(&mut pairs, "samples", args.samples);
    push(&mut pairs, "seed", args.seed);
    push(&mut pairs, "sigmas", args.sigmas);
    push(&mut pairs, "required-fraction", args.required_fraction);
    if args.x_fractions.iter().any(|f| !(0.0..=1.0).contains(f)) {
        return Err(CliError::Usage("--x-fractions must lie in [0, 1]".into()));
    }

    let config = MeasureValidationConfig {
        alphas: args.alphas.clone(),
        x_fractions: args.x_fractions.clone(),
        c: args.c,
        n: args.n,
        samples: args.samples,
        seed: args.seed,
        sigmas: args.sigmas,
        required_pass_fraction: args.required_fraction,
    };
    let report = oracle::validate_ball_origin(&config)?;
    let mut m = start_manifest("validate-measures", dir, &pairs)?;
    m.seeds = vec![args.seed];
    write_file(&dir.join("measures.json"), report.to_json()?.as_bytes())?;
    m.add_output(dir, "measures.json")?;
    m.write(dir)?;
    for c in &report.checks {
        println!(
            "alpha = {:<5} x = {:.2}R  exact = {:.6e}  mc = {:.6e} ± {:.2e}  z = {:.2}  {}",
            c.alpha,
            c.x_fraction,
            c.exact,
            c.estimate.mean,
            c.estimate.std_error,
            c.z,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    println!("pass fraction = {:.4} (required {})", report.pass_fraction, report.required_pass_fraction);
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Tolerance(format!(
            "pass fraction {:.4} below {}",
            report.pass_fraction, report.required_pass_fraction
        )))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Analyze(a) => analyze(a),
        Command::Predict(a) => predict(a),
        Command::Compare(a) => compare(a),
        Command::ValidateMeasures(a) => validate_measures(a),
    }
}

fn main() -> ExitCode {
    let args = match config::expand_args(std::env::args().collect()) {
        Ok(args) => args,
        Err(e) => {
            eprintln!("rhg: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rhg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
