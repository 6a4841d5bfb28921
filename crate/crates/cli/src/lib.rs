//! The `szego` command-line tool.
//!
//! Exit codes: 0 on success, 1 for bad input (usage, domain errors, I/O),
//! 2 when a computation reports a numerical failure.

pub mod output;
pub mod parse;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use szego::cmv::band_structure;
use szego::cocycle::{growth_trace, lyapunov_estimate, LyapunovEstimate};
use szego::dos::{fit_r, gap_labels, DensityOfStates, GapLabelReport};
use szego::ensemble::{centered_window, convergence_experiment, word_zero_set, Source};
use szego::ising::{leeyang_zeros, leeyang_zeros_grid, IsingChain};
use szego::transfer::gap_arc;
use szego::{CirclePoint, Word64};

use output::Layer;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] szego::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "szego", version, about = "Spectra of CMV matrices, Lee-Yang zeros and gap labels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// The zero-free arc R_alpha = {|theta| < 2 arcsin alpha}.
    Gap(GapArgs),
    /// Zeros of the discriminant of a periodic word.
    DiscZeros(WordArgs),
    /// Bands and gaps of a periodic word.
    Spectrum(SpectrumArgs),
    /// Window zero sets against the limiting spectrum.
    RandomApprox(RandomApproxArgs),
    /// Lee-Yang zeros of a periodic Ising chain.
    IsingZeros(IsingArgs),
    /// Monte Carlo Lyapunov exponent of an i.i.d. coefficient sequence.
    Lyapunov(LyapunovArgs),
    /// Gap labels of a periodic word from its density of states.
    Gaplabels(GapLabelArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct OutArgs {
    /// Directory for output files; stdout only when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GapArgs {
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct WordArgs {
    /// Comma-separated complex coefficients, e.g. 0.6,0.9i,0.1-0.2i.
    #[arg(long, allow_hyphen_values = true)]
    pub word: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub word: String,
    /// Sampling grid for the band search; defaults to 256 per letter.
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct RandomApproxArgs {
    /// i.i.d. measure: constant:A, uniform:A,B or atoms:Z1,Z2[,...].
    #[arg(long, conflicts_with = "word", required_unless_present = "word")]
    pub measure: Option<String>,
    /// Periodic word instead of a random measure.
    #[arg(long, allow_hyphen_values = true)]
    pub word: Option<String>,
    /// Window lengths (centered windows), increasing.
    #[arg(long, default_value = "250,1000,4000")]
    pub windows: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroMethod {
    /// Polynomial roots up to 64 sites, sign-change pipeline beyond.
    Auto,
    Poly,
    Grid,
}

#[derive(Debug, Args, Serialize)]
pub struct IsingArgs {
    /// Coupling file: one positive J per line.
    #[arg(long)]
    pub couplings: PathBuf,
    #[arg(long)]
    pub tau: f64,
    #[arg(long = "kb", default_value_t = 1.0)]
    pub k_b: f64,
    #[arg(long, value_enum, default_value_t = ZeroMethod::Auto)]
    pub method: ZeroMethod,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct LyapunovArgs {
    #[arg(long)]
    pub measure: String,
    /// Spectral parameter z = e^{i theta}.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "z", default_value_t = 0.0)]
    pub theta: f64,
    /// Spectral parameter as a complex literal, |z| <= 1.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct GapLabelArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub word: String,
    /// Periods in the window whose zeros give the density of states.
    #[arg(long, default_value_t = 50)]
    pub repeat: usize,
    /// Fit the Thouless constant R at z = 1 and include it.
    #[arg(long)]
    pub fit_r: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Serialize)]
struct RunConfig<'a> {
    version: &'static str,
    #[serde(flatten)]
    command: &'a Command,
}

/// Output directory plus the files written to it.
struct Sink<'a> {
    dir: Option<&'a Path>,
}

impl Sink<'_> {
    fn write(&self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        match self.dir {
            Some(d) => output::write_atomic(&d.join(name), bytes),
            None => Ok(()),
        }
    }
}

fn fmt_pair(a: f64, b: f64) -> String {
    format!("({a:.6}, {b:.6})")
}

/// Parses `argv` (program name first), runs the command, returns the exit
/// code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn out_dir(cmd: &Command) -> Option<&Path> {
    let o = match cmd {
        Command::Gap(a) => &a.out,
        Command::DiscZeros(a) => &a.out,
        Command::Spectrum(a) => &a.out,
        Command::RandomApprox(a) => &a.out,
        Command::IsingZeros(a) => &a.out,
        Command::Lyapunov(a) => &a.out,
        Command::Gaplabels(a) => &a.out,
    };
    o.out.as_deref()
}

pub fn execute(cmd: &Command) -> Result<(), CliError> {
    let dir = out_dir(cmd);
    if let Some(d) = dir {
        fs::create_dir_all(d)?;
    }
    let sink = Sink { dir };
    match cmd {
        Command::Gap(a) => gap(a, &sink)?,
        Command::DiscZeros(a) => disc_zeros(a, &sink)?,
        Command::Spectrum(a) => spectrum(a, &sink)?,
        Command::RandomApprox(a) => random_approx(a, &sink)?,
        Command::IsingZeros(a) => ising_zeros(a, &sink)?,
        Command::Lyapunov(a) => lyapunov(a, &sink)?,
        Command::Gaplabels(a) => gaplabels(a, &sink)?,
    }
    let config = RunConfig {
        version: env!("CARGO_PKG_VERSION"),
        command: cmd,
    };
    sink.write("config.json", &output::json(&config)?)
}

fn gap(a: &GapArgs, sink: &Sink<'_>) -> Result<(), CliError> {
    let g = gap_arc(a.alpha)?;
    #[derive(Serialize)]
    struct Gap {
        alpha: f64,
        start: Option<f64>,
        end: Option<f64>,
    }
    let (start, end) = match g.arcs().first() {
        Some(arc) => {
            println!("{}", fmt_pair(arc.start().radians(), arc.end().radians()));
            (Some(arc.start().radians()), Some(arc.end().radians()))
        }
        None => {
            println!("empty");
            (None, None)
        }
    };
    sink.write("gap.json", &output::json(&Gap { alpha: a.alpha, start, end })?)
}

fn disc_zeros(a: &WordArgs, sink: &Sink<'_>) -> Result<(), CliError> {
    let w = parse::word(&a.word)?;
    let z = word_zero_set(&w)?;
    let csv = output::zeros_csv(&z)?;
    if sink.dir.is_some() {
        sink.write("zeros.csv", &csv)?;
        let svg = output::circle_svg(&[Layer::Zeros(&z, "discriminant zeros")]);
        sink.write("zeros.svg", svg.as_bytes())?;
        println!("{} zeros", z.count());
    } else {
        print!("{}", String::from_utf8_lossy(&csv));
    }
    Ok(())
}

fn spectrum(a: &SpectrumArgs, sink: &Sink<'_>) -> Result<(), CliError> {
    let w = parse::word(&a.word)?;
    let b = band_structure(&w, a.grid.unwrap_or(256 * w.len()))?;
    for arc in b.spectrum.arcs() {
        println!("{}", fmt_pair(arc.start().radians(), arc.end().radians()));
    }
    #[derive(Serialize)]
    struct Arcs {
        bands: Vec<[f64; 2]>,
        gaps: Vec<GapRecord>,
    }
    #[derive(Serialize)]
    struct GapRecord {
        start: f64,
        end: f64,
        closed: bool,
    }
    let rec = Arcs {
        bands: b
            .spectrum
            .arcs()
            .iter()
            .map(|a| [a.start().radians(), a.end().radians()])
            .collect(),
        gaps: b
            .gaps
            .iter()
            .map(|g| GapRecord {
                start: g.arc.start().radians(),
                end: g.arc.end().radians(),
                closed: g.closed,
            })
            .collect(),
    };
    sink.write("spectrum.json", &output::json(&rec)?)?;
    let svg = output::circle_svg(&[Layer::Arcs(&b.spectrum, "spectrum"), Layer::Zeros(&b.zeros, "discriminant zeros")]);
    sink.write("spectrum.svg", svg.as_bytes())
}

fn random_approx(a: &RandomApproxArgs, sink: &Sink<'_>) -> Result<(), CliError> {
    let source = match (&a.measure, &a.word) {
        (Some(m), None) => Source::Random(parse::measure(m)?),
        (None, Some(w)) => Source::Periodic(parse::word(w)?),
        _ => return Err(CliError::Usage("give exactly one of --measure and --word".into())),
    };
    let sizes: Vec<usize> = a
        .windows
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Usage(format!("bad window length '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    let schedule: Vec<(usize, usize)> = sizes.iter().map(|&n| centered_window(n)).collect();
    let records = convergence_experiment(&source, &schedule, a.seed)?;
    for r in &records {
        println!(
            "k={} l={} r={} distance={:.6} zeros={}",
            r.k, r.l, r.r, r.distance, r.zero_count
        );
    }
    #[derive(Serialize)]
    struct Report<'a> {
        records: &'a [szego::ensemble::ConvergenceRecord<f64>],
    }
    sink.write("records.json", &output::json(&Report { records: &records })?)?;
    if sink.dir.is_some() {
        if let Some(&(l, r)) = schedule.last() {
            let seq = source.window(l, r, a.seed)?;
            let z = szego::ensemble::window_zero_set(&seq)?;
            let reference = source.reference()?;
            let svg = output::circle_svg(&[Layer::Arcs(&reference, "limit spectrum"), Layer::Zeros(&z, "largest window zeros")]);
            sink.write("window.svg", svg.as_bytes())?;
        }
    }
    Ok(())
}

fn ising_zeros(a: &IsingArgs, sink: &Sink<'_>) -> Result<(), CliError> {
    if a.couplings.as_os_str() == "none" {
        return Err(CliError::Usage(
            "--couplings needs a file with one positive J per line".into(),
        ));
    }
    let j = parse::couplings(&a.couplings)?;
    let chain = IsingChain::with_boltzmann(j, a.tau, a.k_b)?;
    let z = match a.method {
        ZeroMethod::Poly => leeyang_zeros(&chain)?,
        ZeroMethod::Grid => leeyang_zeros_grid(&chain)?,
        ZeroMethod::Auto if chain.len() <= 64 => leeyang_zeros(&chain)?,
        ZeroMethod::Auto => leeyang_zeros_grid(&chain)?,
    };
    let csv = output::zeros_csv(&z)?;
    if sink.dir.is_some() {
        sink.write("zeros.csv", &csv)?;
        let arc = chain.zero_free_arc()?;
        let svg = output::circle_svg(&[Layer::Arcs(&arc, "zero-free arc"), Layer::Zeros(&z, "Lee-Yang zeros")]);
        sink.write("zeros.svg", svg.as_bytes())?;
        println!("{} zeros, alpha_inf = {:.6}", z.count(), chain.alpha_inf());
    } else {
        print!("{}", String::from_utf8_lossy(&csv));
    }
    Ok(())
}

fn lyapunov(a: &LyapunovArgs, sink: &Sink<'_>) -> Result<(), CliError> {
    let m = parse::measure(&a.measure)?;
    let z = match &a.z {
        Some(s) => {
            let z = parse::complex(s)?;
            if z.norm() > 1.0 + 1e-12 {
                return Err(CliError::Core(szego::Error::Domain(format!("|z| = {} exceeds 1", z.norm()))));
            }
            z
        }
        None => CirclePoint::from_angle(a.theta).value(),
    };
    let e = lyapunov_estimate(&m, z, a.n, a.trials, a.seed)?;
    println!(
        "L = {:.6} (std error {:.6}, n = {}, trials = {})",
        e.value, e.std_error, e.n, e.trials
    );
    sink.write("lyapunov.json", &output::json(&e)?)
}

fn gaplabels(a: &GapLabelArgs, sink: &Sink<'_>) -> Result<(), CliError> {
    let w = parse::word(&a.word)?;
    if a.repeat == 0 {
        return Err(CliError::Usage("--repeat must be positive".into()));
    }
    let report = labels_for(&w, a.repeat, a.fit_r)?;
    if let Some(msg) = &report.warning {
        eprintln!("warning: {msg}");
    }
    let bytes = output::json(&report)?;
    if sink.dir.is_some() {
        sink.write("gaplabels.json", &bytes)?;
        for g in &report.gaps {
            println!("{} label {:.6}", fmt_pair(g.start, g.end), g.label);
        }
    } else {
        print!("{}", String::from_utf8_lossy(&bytes));
    }
    Ok(())
}

fn labels_for(w: &Word64, repeat: usize, with_r: bool) -> Result<GapLabelReport<f64>, CliError> {
    let bands = band_structure(w, 256 * w.len())?;
    let window = w.repeated(repeat);
    let dos = DensityOfStates::from_zero_set(&word_zero_set(&window)?)?;
    let report = gap_labels(&bands, &dos)?;
    if !with_r {
        return Ok(report);
    }
    // the periodic word is its own ensemble: the direct exponent at z = 1
    // is the growth rate of the window product
    let n = window.len();
    let g = growth_trace(&window, &CirclePoint::from_angle(0.0));
    let direct = LyapunovEstimate {
        value: g.log_norms[n - 1] / n as f64,
        std_error: 0.0,
        n,
        trials: 1,
    };
    let r = fit_r(&dos, szego::Complex64::new(1.0, 0.0), &direct)?;
    Ok(report.with_offset(r))
}
