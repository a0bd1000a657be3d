use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polydisc::campaign::{run, Command, Format, GridStep, IntList, RunConfig, Starts};
use polydisc::poly::CoefficientDistribution;
use polydisc::sidon::{BoundLabel, SearchStrategy};

/// Numerical checks around the Bohnenblust-Hille inequality on the polydisc.
///
/// The thread count defaults to POLYDISC_THREADS when set.
#[derive(Parser)]
#[command(name = "polydisc", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Random homogeneous polynomials against the hypercontractive constant.
    VerifyBh(Opts),
    /// Random m-linear forms against (sqrt 2)^(m-1).
    VerifyBhMultilinear(Opts),
    /// Blei's inequality on random tables over M(m, n).
    CheckBlei(Opts),
    /// Bayart's L1 inequality with a Monte Carlo 3-sigma band.
    CheckBayart(Opts),
    /// The per-slot mixed-norm step, against certified sup bounds.
    CheckProofStep(Opts),
    /// Harris' bound for the polarization at repeated arguments.
    CheckHarris(Opts),
    /// Wiener's lemma for random P scaled to sup norm 1.
    CheckWiener(Opts),
    /// Sidon constant bounds S(m, n).
    SidonMn(Opts),
    /// Certified lower bound and upper bound on the Bohr radius K_n.
    BohrRadius(Opts),
    /// Bracket for K_1 from truncated Möbius maps.
    BohrSmall(Opts),
    /// Bohr lift of a Dirichlet polynomial read from --input.
    Lift(Opts),
    /// Bounds on the Sidon constant S(N) of Dirichlet polynomials.
    #[command(name = "sidon-N")]
    SidonN(Opts),
    /// Weighted coefficient sum of a Dirichlet polynomial.
    BcqSum(Opts),
    /// Table of the inequality constants for m = 2..m-max.
    ConstantsTable(Opts),
    /// A mix of the polynomial checks.
    RandomCampaign(Opts),
}

impl Cmd {
    fn split(self) -> (Command, Opts) {
        match self {
            Self::VerifyBh(o) => (Command::VerifyBh, o),
            Self::VerifyBhMultilinear(o) => (Command::VerifyBhMultilinear, o),
            Self::CheckBlei(o) => (Command::CheckBlei, o),
            Self::CheckBayart(o) => (Command::CheckBayart, o),
            Self::CheckProofStep(o) => (Command::CheckProofStep, o),
            Self::CheckHarris(o) => (Command::CheckHarris, o),
            Self::CheckWiener(o) => (Command::CheckWiener, o),
            Self::SidonMn(o) => (Command::SidonMn, o),
            Self::BohrRadius(o) => (Command::BohrRadius, o),
            Self::BohrSmall(o) => (Command::BohrSmall, o),
            Self::Lift(o) => (Command::Lift, o),
            Self::SidonN(o) => (Command::SidonN, o),
            Self::BcqSum(o) => (Command::BcqSum, o),
            Self::ConstantsTable(o) => (Command::ConstantsTable, o),
            Self::RandomCampaign(o) => (Command::RandomCampaign, o),
        }
    }
}

#[derive(Args)]
struct Opts {
    /// Degrees: 3, 2..5 or 2,4 (bohr-radius: initial truncation)
    #[arg(long)]
    m: Option<IntList>,
    /// Dimensions, same syntax; 1e12 is accepted
    #[arg(long)]
    n: Option<IntList>,
    /// Dirichlet lengths
    #[arg(long = "N")]
    big_n: Option<IntList>,
    #[arg(long)]
    m_max: Option<usize>,
    /// Number of random cases
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// complex-gaussian, uniform-disc or random-signs; all three in turn if absent
    #[arg(long)]
    dist: Option<CoefficientDistribution>,
    /// Ascent starts: 16 or 8n
    #[arg(long)]
    starts: Option<Starts>,
    #[arg(long)]
    iters: Option<usize>,
    /// Monte Carlo samples
    #[arg(long)]
    samples: Option<usize>,
    /// Grid step for certified sup bounds, or auto
    #[arg(long)]
    grid_step: Option<GridStep>,
    /// Maximum grid evaluations for certified sup bounds
    #[arg(long)]
    grid_cap: Option<u64>,
    /// Target Bernstein slack when the grid step is auto
    #[arg(long)]
    grid_slack: Option<f64>,
    /// Search candidates
    #[arg(long)]
    budget: Option<usize>,
    /// random-sign, gaussian or coordinate-ascent
    #[arg(long)]
    strategy: Option<SearchStrategy>,
    /// heuristic or certified
    #[arg(long, value_parser = parse_label)]
    label: Option<BoundLabel>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long)]
    n_start: Option<usize>,
    /// Truncation degree
    #[arg(long)]
    degree: Option<usize>,
    /// Input JSON file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Report path; stdout if absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

fn parse_label(s: &str) -> Result<BoundLabel, String> {
    match s {
        "heuristic" => Ok(BoundLabel::Heuristic),
        "certified" => Ok(BoundLabel::Certified),
        _ => Err(format!("unknown label {s:?} (heuristic|certified)")),
    }
}

fn config(command: Command, o: Opts) -> (RunConfig, Option<PathBuf>) {
    let mut c = RunConfig::new(command);
    c.m = o.m;
    c.n = o.n;
    c.big_n = o.big_n;
    c.m_max = o.m_max;
    c.count = o.count;
    c.seed = o.seed;
    c.dist = o.dist;
    c.starts = o.starts;
    c.iters = o.iters;
    c.samples = o.samples;
    c.grid_step = o.grid_step;
    c.grid_cap = o.grid_cap;
    c.grid_slack = o.grid_slack;
    c.budget = o.budget;
    c.strategy = o.strategy;
    c.label = o.label;
    c.c = o.c;
    c.n_start = o.n_start;
    c.degree = o.degree;
    c.input = o.input.map(|p| p.display().to_string());
    c.format = o.format;
    (c, o.out)
}

/// Writes to a sibling temporary file and renames it over `path`.
fn write_atomically(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| std::io::Error::other("output path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = std::fs::File::create(&tmp).and_then(|mut f| {
        f.write_all(text.as_bytes())?;
        f.sync_all()
    });
    match result.and_then(|()| std::fs::rename(&tmp, path)) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = std::fs::remove_file(&tmp);
            Err(e)
        }
    }
}

fn threads_from_env() -> Result<Option<usize>, String> {
    match std::env::var("POLYDISC_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(Some(t)),
            _ => Err(format!("POLYDISC_THREADS must be a positive integer, got {v:?}")),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match threads_from_env() {
        Ok(Some(t)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let (command, opts) = cli.command.split();
    let (cfg, out) = config(command, opts);
    let report = match run(cfg).and_then(|r| r.render().map(|text| (r, text))) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let (report, text) = report;
    let written = match &out {
        Some(path) => write_atomically(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let s = &report.summary;
    eprintln!(
        "{}: {} cases, {} pass, {} statistical flags, {} inconclusive, {} failures",
        command, s.cases, s.pass, s.statistical_flags, s.inconclusive, s.failures
    );
    ExitCode::from(report.exit_code() as u8)
}
