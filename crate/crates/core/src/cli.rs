//! Command-line front end: `simulate`, `curve` and `verify`.
//!
//! Every numeric option may also come from a plain `key = value` file given
//! with `--config`; flags win over the file. Exit codes are 0 on success, 1
//! on a failed verification or a runtime fault, 2 on a usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use crate::closed_forms::{big_psi, left_flux_bound, small_psi};
use crate::experiments::{run_suite, summary_text, write_outputs, Budget, Overrides, Suite};
use crate::lattice::{
    sample_config, trace_dual_extremal, trace_extremal, LatticePath, Side, Window,
};
use crate::svg::{line_plot, paths_svg, Scale, SvgPath};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "bnet",
    version,
    about = "Branching-coalescing walks, sticky SDEs and their checks"
)]
struct Cli {
    /// Plain `key = value` file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for replicas (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Sample one arrow configuration and trace extremal forward and dual
    /// paths; writes trajectories.csv and optionally skeleton.svg.
    Simulate {
        #[arg(long)]
        beta: Option<f64>,
        /// Scaling parameter for the written coordinates (default: beta).
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Half width of the window in lattice units.
        #[arg(long)]
        half_width: Option<i64>,
        /// Height of the window in lattice steps.
        #[arg(long)]
        height: Option<i64>,
        /// Spacing of path starting points in lattice units.
        #[arg(long)]
        stride: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: bool,
        /// `linear` or `theta`.
        #[arg(long)]
        scale: Option<String>,
    },
    /// Tabulate a closed form on a grid in t; writes a CSV and an SVG plot.
    Curve {
        #[arg(value_enum)]
        which: Which,
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// Comma-separated eps values for `Psi`.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a suite of experiments; writes reports.csv and summary.txt.
    Verify {
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        /// `quick` or `full`.
        #[arg(long)]
        budget: Option<String>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        replicas: Option<usize>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "psi")]
    Psi,
    #[value(name = "Psi")]
    BigPsi,
    #[value(name = "flux")]
    Flux,
}

impl Which {
    fn stem(self) -> &'static str {
        match self {
            Which::Psi => "psi",
            Which::BigPsi => "big_psi",
            Which::Flux => "flux",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Simulate {
        svg: bool,
        scale: Scale,
        stride: i64,
    },
    Curve {
        which: Which,
        tmin: f64,
        tmax: f64,
        steps: usize,
        eps: Vec<f64>,
    },
    Verify {
        suite: Suite,
        budget: Budget,
    },
}

/// Fully resolved and validated settings of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub beta: Option<f64>,
    /// Defaults to `beta`.
    pub epsilon: Option<f64>,
    pub half_width: i64,
    pub height: i64,
    pub seed: u64,
    pub replicas: Option<usize>,
    pub h: Option<f64>,
    pub out: PathBuf,
    pub k: Option<f64>,
}

/// A failure with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failure(_) => EXIT_FAIL,
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

/// Parse a `key = value` file. Blank lines and lines starting with `#` are
/// skipped.
pub fn parse_config_file(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut m = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key = value", i + 1)))?;
        m.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(m)
}

const KNOWN_KEYS: [&str; 16] = [
    "beta",
    "eps",
    "seed",
    "half_width",
    "height",
    "stride",
    "out",
    "scale",
    "tmin",
    "tmax",
    "steps",
    "budget",
    "k",
    "replicas",
    "h",
    "svg",
];

struct Sources {
    file: BTreeMap<String, String>,
}

impl Sources {
    fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| usage(format!("config key {key}: {e}"))),
        }
    }
}

fn finite_in(name: &str, v: f64, lo: f64, hi: f64) -> CliResult<f64> {
    if !v.is_finite() || v < lo || v > hi {
        return Err(usage(format!("--{name} must lie in [{lo}, {hi}], got {v}")));
    }
    Ok(v)
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(usage(format!("--{name} must be positive, got {v}")));
    }
    Ok(v)
}

fn resolve(cmd: Cmd, file: BTreeMap<String, String>) -> CliResult<RunConfig> {
    if let Some(k) = file.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(usage(format!("unknown config key {k}")));
    }
    let src = Sources { file };
    let out_default = |o: Option<PathBuf>| -> CliResult<PathBuf> {
        Ok(src
            .get(o, "out")?
            .unwrap_or_else(|| PathBuf::from("bnet-out")))
    };
    let mut cfg = RunConfig {
        command: Command::Simulate {
            svg: false,
            scale: Scale::Linear,
            stride: 4,
        },
        beta: None,
        epsilon: None,
        half_width: 64,
        height: 32,
        seed: 0,
        replicas: None,
        h: None,
        out: PathBuf::new(),
        k: None,
    };
    match cmd {
        Cmd::Simulate {
            beta,
            eps,
            seed,
            half_width,
            height,
            stride,
            out,
            svg,
            scale,
        } => {
            let beta = src.get(beta, "beta")?.unwrap_or(0.1);
            cfg.beta = Some(finite_in("beta", beta, 0.0, 1.0)?);
            let eps = src
                .get(eps, "eps")?
                .unwrap_or(if beta > 0.0 { beta } else { 1.0 });
            cfg.epsilon = Some(positive("eps", eps)?);
            cfg.seed = src.get(seed, "seed")?.unwrap_or(0);
            cfg.half_width = src.get(half_width, "half_width")?.unwrap_or(64);
            cfg.height = src.get(height, "height")?.unwrap_or(32);
            if cfg.half_width < 2 || cfg.height < 1 {
                return Err(usage("--half-width must be >= 2 and --height >= 1"));
            }
            let stride = src.get(stride, "stride")?.unwrap_or(4);
            if stride < 2 || stride % 2 != 0 {
                return Err(usage(format!(
                    "--stride must be even and >= 2, got {stride}"
                )));
            }
            let scale: Scale = src
                .get(scale, "scale")?
                .unwrap_or_else(|| "linear".into())
                .parse()
                .map_err(|e: crate::Error| usage(e.to_string()))?;
            let svg = svg || src.get(None::<bool>, "svg")?.unwrap_or(false);
            cfg.out = out_default(out)?;
            cfg.command = Command::Simulate { svg, scale, stride };
        }
        Cmd::Curve {
            which,
            tmin,
            tmax,
            steps,
            eps,
            out,
        } => {
            let tmin = positive("tmin", src.get(tmin, "tmin")?.unwrap_or(0.1))?;
            let tmax = positive("tmax", src.get(tmax, "tmax")?.unwrap_or(10.0))?;
            if tmax < tmin {
                return Err(usage(format!("--tmax ({tmax}) must be >= --tmin ({tmin})")));
            }
            let steps = src.get(steps, "steps")?.unwrap_or(100);
            if steps == 0 || (steps == 1 && tmax > tmin) {
                return Err(usage("--steps must be >= 2 unless tmin = tmax"));
            }
            let eps = src.get(eps, "eps")?.unwrap_or_else(|| "1".into());
            let eps = eps
                .split(',')
                .map(|s| {
                    let v: f64 = s
                        .trim()
                        .parse()
                        .map_err(|_| usage(format!("bad --eps value {s}")))?;
                    finite_in("eps", v, 0.0, f64::MAX)
                })
                .collect::<CliResult<Vec<_>>>()?;
            cfg.out = out_default(out)?;
            cfg.command = Command::Curve {
                which,
                tmin,
                tmax,
                steps,
                eps,
            };
        }
        Cmd::Verify {
            suite,
            seed,
            budget,
            beta,
            k,
            replicas,
            h,
            out,
        } => {
            let suite: Suite = suite
                .parse()
                .map_err(|e: crate::Error| usage(e.to_string()))?;
            let budget: Budget = src
                .get(budget, "budget")?
                .unwrap_or_else(|| "quick".into())
                .parse()
                .map_err(|e: crate::Error| usage(e.to_string()))?;
            cfg.seed = src.get(seed, "seed")?.unwrap_or(0);
            cfg.beta = src
                .get(beta, "beta")?
                .map(|b| finite_in("beta", b, 0.0, 1.0))
                .transpose()?;
            if suite != Suite::Structural && cfg.beta == Some(0.0) {
                return Err(usage(
                    "--beta 0 is only meaningful for the structural suite",
                ));
            }
            cfg.epsilon = cfg.beta;
            cfg.k = src.get(k, "k")?.map(|k| positive("k", k)).transpose()?;
            cfg.replicas = src.get(replicas, "replicas")?;
            if cfg.replicas == Some(0) {
                return Err(usage("--replicas must be >= 1"));
            }
            cfg.h = src.get(h, "h")?.map(|h| positive("h", h)).transpose()?;
            cfg.out = out_default(out)?;
            cfg.command = Command::Verify { suite, budget };
        }
    }
    Ok(cfg)
}

/// Create the output directory and check that it accepts files.
fn prepare_out(dir: &Path) -> CliResult<()> {
    let unwritable = |e: std::io::Error| {
        usage(format!(
            "output directory {} is not writable: {e}",
            dir.display()
        ))
    };
    fs::create_dir_all(dir).map_err(unwritable)?;
    let probe = dir.join(".bnet-write-probe");
    fs::write(&probe, b"").map_err(unwritable)?;
    fs::remove_file(&probe).map_err(unwritable)?;
    Ok(())
}

fn write(path: &Path, body: &[u8]) -> CliResult<()> {
    fs::write(path, body).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> CliResult<Vec<u8>>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Failure(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Failure(e.to_string()))
}

/// Trace extremal paths on one sampled configuration: left-most and
/// right-most forward paths from the bottom row and dual left-most and
/// right-most paths from the top row, started every `stride` sites within
/// `half_width - height - 2` of the origin, so that speed-one paths stay
/// inside the window. Writes `trajectories.csv` with physical coordinates
/// `(t eps^2, x eps)`.
pub fn cmd_simulate(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let Command::Simulate { svg, scale, stride } = cfg.command.clone() else {
        return Err(usage("not a simulate configuration"));
    };
    let (beta, eps) = (cfg.beta.unwrap_or(0.1), cfg.epsilon.unwrap_or(1.0));
    let window =
        Window::centered(cfg.half_width, 0, cfg.height).map_err(|e| usage(e.to_string()))?;
    prepare_out(&cfg.out)?;
    let arrows = sample_config(window, beta, cfg.seed)?;
    let dual = arrows.dual();
    let reach = (cfg.half_width - cfg.height - 2).max(0);
    let mut paths: Vec<(String, LatticePath)> = Vec::new();
    let mut x = -reach - (-reach).rem_euclid(2);
    while x <= reach {
        for (tag, side) in [("fl", Side::Left), ("fr", Side::Right)] {
            paths.push((format!("{tag}{x}"), trace_extremal(&arrows, (x, 0), side)?));
        }
        let xd = x + if (x + cfg.height).rem_euclid(2) == 0 {
            1
        } else {
            0
        };
        for (tag, side) in [("dl", Side::Left), ("dr", Side::Right)] {
            paths.push((
                format!("{tag}{xd}"),
                trace_dual_extremal(&dual, (xd, cfg.height), side)?,
            ));
        }
        x += stride;
    }
    let phys = |t: i64, x: i64| (t as f64 * eps * eps, x as f64 * eps);
    let rows = paths.iter().flat_map(|(id, p)| {
        p.points().map(move |(t, x)| {
            let (pt, px) = phys(t, x);
            vec![pt.to_string(), px.to_string(), id.clone()]
        })
    });
    let csv_path = cfg.out.join("trajectories.csv");
    write(&csv_path, &csv_bytes(&["t", "x", "path_id"], rows)?)?;
    let mut written = vec![csv_path];
    if svg {
        let drawn: Vec<SvgPath> = paths
            .iter()
            .map(|(id, p)| SvgPath {
                points: p
                    .points()
                    .map(|(t, x)| (phys(t, x).1, phys(t, x).0))
                    .collect(),
                dashed: id.starts_with('d'),
            })
            .collect();
        let svg_path = cfg.out.join("skeleton.svg");
        write(&svg_path, paths_svg(&drawn, scale)?.as_bytes())?;
        written.push(svg_path);
    }
    Ok(written)
}

fn grid(tmin: f64, tmax: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![tmin];
    }
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                tmax
            } else {
                tmin + (tmax - tmin) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

/// Tabulate `psi(t)`, `Psi_eps(t)` for each eps, or `int_tmin^t 2 psi^2`.
/// Writes `curve_<name>.csv` and `curve_<name>.svg`.
pub fn cmd_curve(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let Command::Curve {
        which,
        tmin,
        tmax,
        steps,
        eps,
    } = cfg.command.clone()
    else {
        return Err(usage("not a curve configuration"));
    };
    prepare_out(&cfg.out)?;
    let ts = grid(tmin, tmax, steps);
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut plot: Vec<(f64, f64)> = Vec::new();
    let header: &[&str] = match which {
        Which::BigPsi => &["eps", "t", "value"],
        _ => &["t", "value"],
    };
    match which {
        Which::Psi | Which::Flux => {
            for &t in &ts {
                let v = match which {
                    Which::Psi => small_psi(t)?,
                    _ => left_flux_bound(tmin, t)?,
                };
                rows.push(vec![t.to_string(), v.to_string()]);
                plot.push((t, v));
            }
        }
        Which::BigPsi => {
            for &e in &eps {
                for &t in &ts {
                    let v = big_psi(e, t)?;
                    rows.push(vec![e.to_string(), t.to_string(), v.to_string()]);
                    if e == eps[0] {
                        plot.push((t, v));
                    }
                }
            }
        }
    }
    let stem = format!("curve_{}", which.stem());
    let csv_path = cfg.out.join(format!("{stem}.csv"));
    write(&csv_path, &csv_bytes(header, rows)?)?;
    let title = match which {
        Which::BigPsi => format!("{} at eps = {}", which.stem(), eps[0]),
        _ => which.stem().to_string(),
    };
    let svg_path = cfg.out.join(format!("{stem}.svg"));
    write(&svg_path, line_plot(&plot, &title).as_bytes())?;
    Ok(vec![csv_path, svg_path])
}

/// Run a suite and write `reports.csv` and `summary.txt`. Returns whether
/// every verdict passed.
pub fn cmd_verify(cfg: &RunConfig) -> CliResult<bool> {
    let Command::Verify { suite, budget } = cfg.command.clone() else {
        return Err(usage("not a verify configuration"));
    };
    prepare_out(&cfg.out)?;
    let ov = Overrides {
        beta: cfg.beta,
        replicas: cfg.replicas,
        h: cfg.h,
        k: cfg.k,
    };
    let reports = run_suite(suite, cfg.seed, budget, ov)?;
    for r in &reports {
        for n in &r.notes {
            eprintln!("warning: {}: {n}", r.name);
        }
    }
    write_outputs(&cfg.out, &reports)?;
    print!("{}", summary_text(&reports));
    Ok(reports.iter().all(|r| r.pass))
}

/// Parse arguments (including the program name) into a validated config.
pub fn parse_run_config<I, T>(args: I) -> CliResult<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| usage(e.to_string()))?;
    resolve(cli.cmd, load_config(cli.config.as_deref())?)
}

fn load_config(path: Option<&Path>) -> CliResult<BTreeMap<String, String>> {
    match path {
        None => Ok(BTreeMap::new()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read config {}: {e}", p.display())))?;
            parse_config_file(&text)
        }
    }
}

/// Entry point of the binary. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("{}", usage("--threads must be >= 1"));
            return EXIT_USAGE;
        }
        // fails only if the pool already exists, in which case it is kept
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let outcome = load_config(cli.config.as_deref())
        .and_then(|file| resolve(cli.cmd, file))
        .and_then(|cfg| match cfg.command {
            Command::Simulate { .. } => cmd_simulate(&cfg).map(|_| true),
            Command::Curve { .. } => cmd_curve(&cfg).map(|_| true),
            Command::Verify { .. } => cmd_verify(&cfg),
        });
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("{e}");
            e.code()
        }
    }
}
