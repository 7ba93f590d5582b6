use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use envcontour::contour::{ds_contour, equal_angles, hd_contour, iform_contour, isorm_contour};
use envcontour::joint::registered_models;
use envcontour::response::{
    failure_probability, failure_probability_mc, max_response_on_contour, return_response,
};
use envcontour::sampling::{sample, DEFAULT_SEED};
use envcontour::{
    build_paper_model, Capacity, Contour, Error, ExceedanceKind, ExceedanceSpec, GridSpec, JointModel,
    Method, Model, ModelConfig, ResponseFunction, RosenblattOrder,
};
use envcontour_cli::manifest::{manifest_path, sha256_hex, Recorder, RunManifest, Status};
use envcontour_cli::reference::{Reference, COMPARISON_HEADER, REFERENCE_TOML};
use envcontour_cli::reproduce::{Session, Settings, Target};
use envcontour_cli::exit_code;

#[derive(Debug, Parser)]
#[command(name = "envcontour", version, about = "Environmental contours and long-term structural response")]
struct Cli {
    /// No progress messages on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute an environmental contour.
    Contour(ContourArgs),
    /// Largest response on a contour, long-term return response, or
    /// failure probability of a capacity.
    Response(ResponseArgs),
    /// Recompute a published table or figure and compare with stored values.
    Reproduce(ReproduceArgs),
    /// Draw a seeded sample from a model.
    Sample(SampleArgs),
    /// List the built-in models.
    Models,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Iform,
    Isorm,
    Ds,
    Hd,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Iform => Method::Iform,
            MethodArg::Isorm => Method::Isorm,
            MethodArg::Ds => Method::Ds,
            MethodArg::Hd => Method::Hd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Marginal,
    Total,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    #[value(name = "12")]
    X1First,
    #[value(name = "21")]
    X2First,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct ExceedanceArgs {
    /// Exceedance probability.
    #[arg(long, conflicts_with = "return_period")]
    alpha: Option<f64>,
    /// Return period in years.
    #[arg(long)]
    return_period: Option<f64>,
    /// Sea state duration in hours.
    #[arg(long, default_value_t = 3.0)]
    state_duration: f64,
    /// Exceedance kind; defaults to the one the method is defined by.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
}

#[derive(Debug, Args)]
struct ContourArgs {
    /// Built-in model name or model TOML file.
    #[arg(long)]
    config: String,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[command(flatten)]
    exceedance: ExceedanceArgs,
    /// Rosenblatt conditioning order.
    #[arg(long, value_enum, default_value = "12")]
    order: OrderArg,
    /// U-space angles (IFORM, ISORM).
    #[arg(long, default_value_t = 360)]
    points: usize,
    /// Halfplane angles (DS).
    #[arg(long, default_value_t = 360)]
    angles: usize,
    /// Density grid, `N` or `NxM` nodes (HD).
    #[arg(long, default_value = "1000", value_parser = parse_grid)]
    grid: (usize, usize),
    /// Monte Carlo sample size (DS).
    #[arg(long, default_value_t = 10_000_000)]
    samples: usize,
    #[arg(long, env = "ENVCONTOUR_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; taken from the file extension when absent.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
#[group(id = "mode", required = true, multiple = false, args = ["contour", "all_states", "capacity"])]
struct ResponseArgs {
    /// Built-in model name or model TOML file.
    #[arg(long)]
    config: Option<String>,
    /// `sdof`, `bimodal`, `ellipse` or a response TOML file.
    #[arg(long)]
    response: String,
    /// Contour CSV or JSON file.
    #[arg(long)]
    contour: Option<PathBuf>,
    /// Long-term return response at the given exceedance.
    #[arg(long)]
    all_states: bool,
    /// Failure probability of this capacity.
    #[arg(long)]
    capacity: Option<f64>,
    #[command(flatten)]
    exceedance: ExceedanceArgs,
    /// Also estimate the failure probability from this many samples.
    #[arg(long)]
    mc: Option<usize>,
    #[arg(long, env = "ENVCONTOUR_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    #[arg(value_enum, required_unless_present = "all")]
    targets: Vec<Target>,
    /// Every target in turn.
    #[arg(long, conflicts_with = "targets")]
    all: bool,
    /// Write `<target>.csv` and `<target>.comparison.csv` here.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, env = "ENVCONTOUR_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 10_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 360)]
    points: usize,
    #[arg(long, default_value_t = 1000)]
    grid: usize,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    config: String,
    #[arg(long)]
    count: usize,
    #[arg(long, env = "ENVCONTOUR_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("grid must be `N` or `NxM`, got `{s}`");
    let (a, b) = s.split_once('x').unwrap_or((s, s));
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// A failed command: message and exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut message = e.to_string();
        if let Error::SpecKindMismatch { .. } = e {
            message.push_str(
                "\nIFORM and DS contours are set by a marginal exceedance probability: the chance of \
                 crossing one tangent halfplane. ISORM and HD contours are set by a total exceedance \
                 probability: the chance of falling anywhere outside the contour.",
            );
        }
        Self { code: exit_code(&e), message }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: 2, message: format!("i/o error: {e}") }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let progress = !cli.quiet;
    let result = match cli.command {
        Command::Contour(a) => contour(a, progress),
        Command::Response(a) => response(a),
        Command::Reproduce(a) => reproduce(a, progress),
        Command::Sample(a) => sample_cmd(a, progress),
        Command::Models => models(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn command_line() -> Vec<String> {
    std::env::args().collect()
}

/// Model and the bytes its hash is taken over.
fn load_model(config: &str) -> Result<(Model, Vec<u8>), Failure> {
    if registered_models().contains(&config) {
        let text = ModelConfig::Registered { name: config.to_string() }.to_toml()?;
        return Ok((build_paper_model(config)?, text.into_bytes()));
    }
    let bytes = std::fs::read(config)
        .map_err(|e| Failure { code: 2, message: format!("cannot read model config `{config}`: {e}") })?;
    let text = String::from_utf8_lossy(&bytes);
    Ok((ModelConfig::from_toml(&text)?.build()?, bytes))
}

fn load_response(name: &str) -> Result<(ResponseFunction, Vec<u8>), Failure> {
    let builtin = match name {
        "sdof" => Some(ResponseFunction::paper_sdof()),
        "bimodal" => Some(ResponseFunction::paper_bimodal()),
        "ellipse" => Some(ResponseFunction::paper_ellipse()),
        _ => None,
    };
    if let Some(f) = builtin {
        let text = toml::to_string(&f).map_err(|e| Failure { code: 2, message: e.to_string() })?;
        return Ok((f, text.into_bytes()));
    }
    let bytes = std::fs::read(name)
        .map_err(|e| Failure { code: 2, message: format!("cannot read response config `{name}`: {e}") })?;
    Ok((envcontour::config::response_from_toml(&String::from_utf8_lossy(&bytes))?, bytes))
}

fn exceedance(args: &ExceedanceArgs, default_kind: ExceedanceKind) -> Result<ExceedanceSpec, Failure> {
    let kind = match args.kind {
        Some(KindArg::Marginal) => ExceedanceKind::Marginal,
        Some(KindArg::Total) => ExceedanceKind::Total,
        None => default_kind,
    };
    match (args.alpha, args.return_period) {
        (Some(a), _) => Ok(ExceedanceSpec::new(kind, a)?),
        (None, Some(years)) => Ok(ExceedanceSpec::from_return_period(kind, years, args.state_duration)?),
        (None, None) => Err(Failure { code: 2, message: "give --alpha or --return-period".into() }),
    }
}

/// Starts a manifest for `out` and arranges for Ctrl-C to mark it
/// interrupted before exiting.
fn start_manifest(out: &Path, config: &[u8], seed: Option<u64>) -> Result<Recorder, Failure> {
    let rec = Recorder::new(RunManifest::new(command_line(), sha256_hex(config), seed), manifest_path(out));
    rec.finish(Status::Running)?;
    let handler = rec.clone();
    // Only the first handler can be installed; one command runs per process.
    let _ = ctrlc::set_handler(move || {
        let _ = handler.finish(Status::Interrupted);
        eprintln!("interrupted; partial manifest at {}", handler.path().display());
        std::process::exit(130);
    });
    Ok(rec)
}

fn contour(a: ContourArgs, progress: bool) -> Outcome {
    let method: Method = a.method.into();
    let (model, config) = load_model(&a.config)?;
    let spec = exceedance(&a.exceedance, method.required_kind())?;
    let order = match a.order {
        OrderArg::X1First => RosenblattOrder::X1First,
        OrderArg::X2First => RosenblattOrder::X2First,
    };
    let seed = (method == Method::Ds).then_some(a.seed);
    let rec = a.out.as_deref().map(|out| start_manifest(out, &config, seed)).transpose()?;
    let note = |msg: String| {
        if progress {
            eprintln!("{msg}");
        }
    };
    let c = match method {
        Method::Iform => iform_contour(&model, &spec, order, a.points)?,
        Method::Isorm => isorm_contour(&model, &spec, order, a.points)?,
        Method::Ds => {
            spec.require("DS", ExceedanceKind::Marginal)?;
            note(format!("sampling {} points (seed {})", a.samples, a.seed));
            let s = sample(&model, &a.config, a.samples, a.seed)?;
            note(format!("intersecting {} halfplanes", a.angles));
            ds_contour(&s, &spec, &equal_angles(a.angles))?
        }
        Method::Hd => {
            note(format!("tabulating the density on a {}x{} grid", a.grid.0, a.grid.1));
            let grid = GridSpec { n1: a.grid.0, n2: a.grid.1, bounds: None };
            hd_contour(&model, &spec, &grid)?
        }
    };
    let format = a.format.unwrap_or(match &a.out {
        Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
        _ => Format::Csv,
    });
    let manifest_name = rec.as_ref().map(Recorder::file_name);
    let text = render_contour(&c, format, manifest_name.as_deref())?;
    match (&a.out, &rec) {
        (Some(out), Some(rec)) => {
            std::fs::write(out, text)?;
            rec.output(out)?;
            rec.finish(Status::Complete)?;
            note(format!("wrote {} ({} vertices)", out.display(), c.len()));
        }
        _ => print!("{text}"),
    }
    Ok(0)
}

fn render_contour(c: &Contour, format: Format, manifest: Option<&str>) -> Result<String, Failure> {
    Ok(match format {
        Format::Csv => {
            let mut s = c.to_csv_string();
            if let Some(m) = manifest {
                s.push_str(&format!("# manifest: {m}\n"));
            }
            s
        }
        Format::Json => {
            let v = serde_json::json!({ "manifest": manifest, "contour": c });
            serde_json::to_string_pretty(&v).map_err(|e| Failure { code: 2, message: e.to_string() })? + "\n"
        }
    })
}

fn read_contour(path: &Path) -> Result<Contour, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: 2, message: format!("cannot read contour `{}`: {e}", path.display()) })?;
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Failure { code: 2, message: format!("contour JSON: {e}") })?;
        let inner = v.get("contour").cloned().unwrap_or(v);
        return Ok(Contour::from_json(&inner.to_string())?);
    }
    Ok(Contour::read_csv(text.as_bytes())?)
}

fn response(a: ResponseArgs) -> Outcome {
    let (f, response_bytes) = load_response(&a.response)?;
    let mut lines = vec!["quantity,value".to_string()];
    let model = a.config.as_deref().map(load_model).transpose()?;
    let config_bytes = model.as_ref().map(|m| m.1.clone()).unwrap_or_default();
    let needs_model = || {
        model.as_ref().map(|m| &m.0).ok_or_else(|| Failure {
            code: 2,
            message: "--config is needed for --all-states and --capacity".into(),
        })
    };
    let mut seed = None;
    if let Some(path) = &a.contour {
        let c = read_contour(path)?;
        let best = max_response_on_contour(&f, &c)?;
        lines.push(format!("response,{}", best.response));
        lines.push(format!("{},{}", c.labels[0].name, best.state[0]));
        lines.push(format!("{},{}", c.labels[1].name, best.state[1]));
    } else if a.all_states {
        let m = needs_model()?;
        let spec = exceedance(&a.exceedance, ExceedanceKind::Total)?;
        lines.push(format!("alpha,{}", spec.alpha()));
        lines.push(format!("return_response,{}", return_response(m, &f, &spec)?));
    } else if let Some(cap) = a.capacity {
        let m = needs_model()?;
        let cap = Capacity::new(cap)?;
        let pf = failure_probability(m, &f, cap)?.value();
        lines.push(format!("capacity,{}", cap.value()));
        lines.push(format!("pf,{pf}"));
        if a.exceedance.alpha.is_some() || a.exceedance.return_period.is_some() {
            let spec = exceedance(&a.exceedance, ExceedanceKind::Total)?;
            lines.push(format!("alpha,{}", spec.alpha()));
            lines.push(format!("pf_over_alpha,{}", pf / spec.alpha().value()));
        }
        if let Some(n) = a.mc {
            let mc = failure_probability_mc(m, &f, cap, n, a.seed)?;
            lines.push(format!("pf_monte_carlo,{}", mc.probability));
            lines.push(format!("pf_monte_carlo_se,{}", mc.standard_error));
            seed = Some(a.seed);
        }
    }
    let text = lines.join("\n") + "\n";
    match &a.out {
        Some(out) => {
            let rec = start_manifest(out, &config_bytes, seed)?;
            rec.set_response(sha256_hex(&response_bytes));
            std::fs::write(out, format!("{text}# manifest: {}\n", rec.file_name()))?;
            rec.output(out)?;
            rec.finish(Status::Complete)?;
        }
        None => print!("{text}"),
    }
    Ok(0)
}

fn reproduce(a: ReproduceArgs, progress: bool) -> Outcome {
    let targets: Vec<Target> = if a.all { Target::ALL.to_vec() } else { a.targets.clone() };
    let settings = Settings { seed: a.seed, samples: a.samples, points: a.points, grid: a.grid, progress };
    let session = Session::new(settings);
    let reference = Reference::builtin();
    let sampled = targets.iter().any(|t| t.is_sampled());
    let rec = match &a.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join("reproduce");
            Some(start_manifest(&path, REFERENCE_TOML.as_bytes(), sampled.then_some(a.seed))?)
        }
        None => None,
    };
    let mut failed = 0usize;
    let stdout = std::io::stdout();
    for t in targets {
        let exhibit = session.run(t)?;
        let comparisons = reference.compare(&exhibit);
        let mut table = String::from(COMPARISON_HEADER);
        table.push('\n');
        for c in &comparisons {
            table.push_str(&c.csv_row());
            table.push('\n');
        }
        let bad = comparisons.iter().filter(|c| !c.pass).count();
        failed += bad;
        let mut out = stdout.lock();
        match (&a.out_dir, &rec) {
            (Some(dir), Some(rec)) => {
                let head = format!("# manifest: {}\n", rec.file_name());
                let data = dir.join(format!("{t}.csv"));
                std::fs::write(&data, format!("{head}{}", exhibit.to_csv()))?;
                rec.output(&data)?;
                let cmp = dir.join(format!("{t}.comparison.csv"));
                std::fs::write(&cmp, format!("{head}{table}"))?;
                rec.output(&cmp)?;
                writeln!(out, "# {t}")?;
                write!(out, "{table}")?;
            }
            _ => {
                writeln!(out, "# {t}")?;
                write!(out, "{}", exhibit.to_csv())?;
                writeln!(out)?;
                write!(out, "{table}")?;
            }
        }
        writeln!(out, "# {t}: {} of {} cells within tolerance", comparisons.len() - bad, comparisons.len())?;
    }
    if let Some(rec) = rec {
        rec.finish(Status::Complete)?;
    }
    Ok(if failed > 0 { 1 } else { 0 })
}

fn sample_cmd(a: SampleArgs, progress: bool) -> Outcome {
    let (model, config) = load_model(&a.config)?;
    let rec = a.out.as_deref().map(|out| start_manifest(out, &config, Some(a.seed))).transpose()?;
    if progress {
        eprintln!("sampling {} points (seed {})", a.count, a.seed);
    }
    let s = sample(&model, &a.config, a.count, a.seed)?;
    match (&a.out, &rec) {
        (Some(out), Some(rec)) => {
            let mut w = std::io::BufWriter::new(std::fs::File::create(out)?);
            s.write_csv(&mut w)?;
            writeln!(w, "# manifest: {}", rec.file_name())?;
            w.flush()?;
            drop(w);
            rec.output(out)?;
            rec.finish(Status::Complete)?;
        }
        _ => s.write_csv(std::io::stdout().lock())?,
    }
    Ok(0)
}

fn models() -> Outcome {
    println!("name,x1,x2");
    for name in registered_models() {
        let m = build_paper_model(name)?;
        let [a, b] = m.labels();
        println!("{name},{},{}", a.name, b.name);
    }
    Ok(0)
}
