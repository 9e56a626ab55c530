//! Command-line front end.
//!
//! JCM quantities are in units of the spectral width: `--gamma` is γ/λ,
//! `--delta` is δ/λ, `--dt`/`--tmax` are in units of 1/λ. Harper times are
//! integer kicks. Exit codes: 0 success, 2 invalid input, 1 runtime failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::capacities::{capacity_series, CapacityKind};
use crate::error::{Error, Result};
use crate::harper::{classical_trajectory, fidelity_series, HarperParams};
use crate::io::{read_kseries_csv, write_atomic, write_csv, write_pgm, Cell, Normalization, Table};
use crate::jcm::{g_series, GSeries, JcmParams, TimeGrid};
use crate::measures::{compute, KSeries, MeasureKind};
use crate::scan::{harper_scan, jcm_scan, Axis, Process, ScanResult, ScanSpec};
use crate::vault::{best_retrieval_time, vault_metrics};

#[derive(Debug, Parser)]
#[command(name = "qvault", version, about = "Revival-based non-Markovianity measures and quantum-vault metrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample G(t) of the Jaynes-Cummings model, or a capacity of it.
    JcmSeries(JcmSeriesArgs),
    /// Non-Markovianity measures of a JCM capacity series.
    JcmMeasures(JcmMeasuresArgs),
    /// Measure over a (δ/λ, γ/λ) grid.
    JcmScan(JcmScanArgs),
    /// Fidelity amplitude of the kicked-Harper environment.
    HarperSeries(HarperArgs),
    /// Non-Markovianity measures of the Harper fidelity F(t).
    HarperMeasures(HarperArgs),
    /// Measure over a (q0, p0) grid of initial conditions.
    HarperScan(HarperScanArgs),
    /// Orbit of the classical Harper map.
    HarperClassical(ClassicalArgs),
    /// Quantum-vault metrics of a `t,K` CSV series over attack probabilities.
    Vault(VaultArgs),
    /// All measures of a `t,K` CSV series.
    MeasuresFromCsv(MeasuresCsvArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CapacityArg {
    Q,
    C,
    D,
    F,
}

impl From<CapacityArg> for CapacityKind {
    fn from(c: CapacityArg) -> Self {
        match c {
            CapacityArg::Q => CapacityKind::Quantum,
            CapacityArg::C => CapacityKind::Classical,
            CapacityArg::D => CapacityKind::Distinguishability,
            CapacityArg::F => CapacityKind::Fidelity,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MeasureArg {
    Inf,
    Max,
    Avg,
    Blp,
    Rhp,
}

impl From<MeasureArg> for MeasureKind {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Inf => MeasureKind::MInf,
            MeasureArg::Max => MeasureKind::MMax,
            MeasureArg::Avg => MeasureKind::MAvg,
            MeasureArg::Blp => MeasureKind::BlpF,
            MeasureArg::Rhp => MeasureKind::RhpF,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Significant digits for floats (shortest round-trip when absent).
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct JcmArgs {
    /// Coupling γ/λ.
    #[arg(long)]
    pub gamma: f64,
    /// Spectral width λ (results depend only on γ/λ, δ/λ).
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Detuning δ/λ.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Time step in units of 1/λ.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Fixed horizon in units of 1/λ; with --cut, the cap of the adaptive horizon.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Adaptive cutoff: stop once |G|^2 stays below this for a window of 1/λ.
    #[arg(long)]
    pub cut: Option<f64>,
}

impl JcmArgs {
    fn grid(&self) -> Result<TimeGrid> {
        match (self.cut, self.tmax) {
            (Some(cut), tmax) => TimeGrid::adaptive(self.dt, cut, 0.0, tmax.unwrap_or(1000.0)),
            (None, Some(tmax)) => TimeGrid::fixed(self.dt, tmax),
            (None, None) => Err(Error::input("one of --tmax or --cut is required")),
        }
    }

    fn params(&self) -> Result<JcmParams> {
        if !(self.lambda > 0.0) {
            return Err(Error::input(format!("--lambda must be positive, got {}", self.lambda)));
        }
        JcmParams::new(self.gamma * self.lambda, self.lambda, self.delta * self.lambda)
    }
}

#[derive(Debug, Clone, Args)]
pub struct JcmSeriesArgs {
    #[command(flatten)]
    pub jcm: JcmArgs,
    /// Emit `lambda_t,K` for this capacity instead of G itself.
    #[arg(long, value_enum)]
    pub capacity: Option<CapacityArg>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct JcmMeasuresArgs {
    #[command(flatten)]
    pub jcm: JcmArgs,
    #[arg(long, value_enum, default_value = "q")]
    pub capacity: CapacityArg,
    /// Single measure (all applicable when absent).
    #[arg(long, value_enum)]
    pub measure: Option<MeasureArg>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Grid size as WxH.
    #[arg(long, default_value = "16x16")]
    pub grid: String,
    #[arg(long, value_enum, default_value = "avg")]
    pub measure: MeasureArg,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Also write a PGM image of the matrix here.
    #[arg(long)]
    pub pgm: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct JcmScanArgs {
    #[command(flatten)]
    pub scan: ScanArgs,
    /// δ/λ range `lo:hi`.
    #[arg(long, default_value = "0.1:100")]
    pub delta_range: String,
    /// γ/λ range `lo:hi`.
    #[arg(long, default_value = "0.1:1000")]
    pub gamma_range: String,
    /// Log-spaced axes.
    #[arg(long)]
    pub log: bool,
    #[arg(long, value_enum, default_value = "q")]
    pub capacity: CapacityArg,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub cut: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct HarperEnvArgs {
    /// Hilbert-space dimension N.
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Kick strength k.
    #[arg(long, default_value_t = 0.2)]
    pub k: f64,
    /// Qubit-conditioned kick perturbation δk (default 2ħ = 1/(πN)).
    #[arg(long)]
    pub dk: Option<f64>,
    /// Number of kicks.
    #[arg(long, default_value_t = 4000)]
    pub tmax: usize,
}

impl HarperEnvArgs {
    fn params(&self) -> Result<HarperParams> {
        match self.dk {
            Some(dk) => HarperParams::with_dk(self.n, self.k, dk),
            None => HarperParams::new(self.n, self.k),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct HarperArgs {
    #[command(flatten)]
    pub env: HarperEnvArgs,
    #[arg(long)]
    pub q0: f64,
    #[arg(long)]
    pub p0: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct HarperScanArgs {
    #[command(flatten)]
    pub env: HarperEnvArgs,
    #[command(flatten)]
    pub scan: ScanArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ClassicalArgs {
    #[arg(long)]
    pub q0: f64,
    #[arg(long)]
    pub p0: f64,
    #[arg(long, default_value_t = 0.2)]
    pub k: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VaultArgs {
    /// Input `t,K` CSV.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Single attack probability; a sweep over [0, 1] when absent.
    #[arg(long)]
    pub q: Option<f64>,
    /// Number of points in the q sweep.
    #[arg(long, default_value_t = 11)]
    pub q_steps: usize,
    /// Retrieval time, or `auto` for the time maximizing K(t_f) - <K>.
    #[arg(long, default_value = "auto")]
    pub tf: String,
    /// Capacity of the identity channel (overrides --capacity).
    #[arg(long)]
    pub kmax: Option<f64>,
    #[arg(long, value_enum, default_value = "q")]
    pub capacity: CapacityArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MeasuresCsvArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let first = rendered.lines().next().unwrap_or("invalid arguments");
                let _ = writeln!(stderr, "{first}");
            }
            return code;
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn execute(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::JcmSeries(a) => {
            let g = jcm_g(&a.jcm, stderr)?;
            let table = match a.capacity {
                None => g_table(&g),
                Some(cap) => k_table("lambda_t", &capacity_series(&g.values, cap.into(), 0.0, g.dt)?),
            };
            emit(&table, &a.output, stdout)
        }
        Command::JcmMeasures(a) => {
            let g = jcm_g(&a.jcm, stderr)?;
            let series = capacity_series(&g.values, a.capacity.into(), 0.0, g.dt)?;
            emit(&measures_table(&series, a.measure.map(Into::into))?, &a.output, stdout)
        }
        Command::JcmScan(a) => {
            let (w, h) = parse_grid(&a.scan.grid)?;
            let (dlo, dhi) = parse_range(&a.delta_range)?;
            let (glo, ghi) = parse_range(&a.gamma_range)?;
            let make = |lo, hi, n| if a.log { Axis::log(lo, hi, n) } else { Axis::linear(lo, hi, n) };
            let grid = JcmArgs { gamma: 0.0, lambda: 1.0, delta: 0.0, dt: a.dt, tmax: a.tmax, cut: a.cut }.grid()?;
            let spec = ScanSpec {
                x: make(dlo, dhi, w),
                y: make(glo, ghi, h),
                measure: a.scan.measure.into(),
                process: Process::Jcm { grid, capacity: a.capacity.into() },
                workers: a.scan.workers,
            };
            let result = jcm_scan(&spec)?;
            if !result.coarse_cells.is_empty() {
                let _ = writeln!(stderr, "warning: time step too coarse in {} cells", result.coarse_cells.len());
            }
            emit_scan(&result, "delta_over_lambda", "gamma_over_lambda", &a.scan, stdout)
        }
        Command::HarperSeries(a) => {
            let fs = fidelity_series(&a.env.params()?, a.q0, a.p0, a.env.tmax);
            let mut t = Table::new(["t", "Re_f", "Im_f", "F"]);
            for (i, (f, big_f)) in fs.f.iter().zip(fs.fidelity()).enumerate() {
                t.push(vec![i.into(), f.re.into(), f.im.into(), big_f.into()]);
            }
            emit(&t, &a.output, stdout)
        }
        Command::HarperMeasures(a) => {
            let series = fidelity_series(&a.env.params()?, a.q0, a.p0, a.env.tmax).to_kseries()?;
            emit(&measures_table(&series, None)?, &a.output, stdout)
        }
        Command::HarperScan(a) => {
            let (w, h) = parse_grid(&a.scan.grid)?;
            let spec = ScanSpec {
                x: Axis::unit_cells(w),
                y: Axis::unit_cells(h),
                measure: a.scan.measure.into(),
                process: Process::Harper { params: a.env.params()?, t_max: a.env.tmax },
                workers: a.scan.workers,
            };
            emit_scan(&harper_scan(&spec)?, "q0", "p0", &a.scan, stdout)
        }
        Command::HarperClassical(a) => {
            let mut t = Table::new(["step", "q", "p"]);
            for (i, (q, p)) in classical_trajectory(a.q0, a.p0, a.k, a.steps).into_iter().enumerate() {
                t.push(vec![i.into(), q.into(), p.into()]);
            }
            emit(&t, &a.output, stdout)
        }
        Command::Vault(a) => {
            let series = read_series(&a.input)?;
            let k_max = a.kmax.unwrap_or_else(|| CapacityKind::from(a.capacity).k_max());
            let t_f = match a.tf.as_str() {
                "auto" => best_retrieval_time(&series)?,
                s => s.parse().map_err(|_| Error::input(format!("--tf must be a time or 'auto', got '{s}'")))?,
            };
            let qs: Vec<f64> = match a.q {
                Some(q) => vec![q],
                None if a.q_steps >= 2 => (0..a.q_steps).map(|i| i as f64 / (a.q_steps - 1) as f64).collect(),
                None => return Err(Error::input("--q-steps must be at least 2")),
            };
            let mut t = Table::new(["q", "t_f", "delta_k", "eta", "p_success", "n_quality"]);
            for q in qs {
                let m = vault_metrics(&series, k_max, t_f, q)?;
                t.push(vec![m.q.into(), m.t_f.into(), m.delta_k.into(), m.eta.into(), m.p_success.into(), m.n_quality.into()]);
            }
            emit(&t, &a.output, stdout)
        }
        Command::MeasuresFromCsv(a) => {
            let series = read_series(&a.input)?;
            emit(&measures_table(&series, None)?, &a.output, stdout)
        }
    }
}

fn jcm_g(a: &JcmArgs, stderr: &mut dyn Write) -> Result<GSeries> {
    let g = g_series(&a.params()?, &a.grid()?)?;
    if g.coarse {
        let _ = writeln!(stderr, "warning: time step may not resolve the oscillations of G");
    }
    if g.truncated {
        let _ = writeln!(stderr, "warning: cutoff not reached before the horizon cap");
    }
    Ok(g)
}

fn read_series(path: &PathBuf) -> Result<KSeries> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    read_kseries_csv(&text)
}

fn g_table(g: &GSeries) -> Table {
    let mut t = Table::new(["lambda_t", "Re_G", "Im_G", "abs_G2"]);
    for (i, z) in g.values.iter().enumerate() {
        t.push(vec![g.lambda_time(i).into(), z.re.into(), z.im.into(), z.norm_sqr().into()]);
    }
    t
}

fn k_table(time_col: &str, s: &KSeries) -> Table {
    let mut t = Table::new([time_col, "K"]);
    for (i, &v) in s.values().iter().enumerate() {
        t.push(vec![s.time(i).into(), v.into()]);
    }
    t
}

/// `measure,value,t_low,t_f,flagged`; fidelity measures only when the series
/// lies in [0, 1], `M_AVG` only with two or more samples.
fn measures_table(series: &KSeries, only: Option<MeasureKind>) -> Result<Table> {
    let kinds: Vec<MeasureKind> = match only {
        Some(k) => vec![k],
        None => MeasureKind::ALL
            .into_iter()
            .filter(|k| !k.needs_fidelity() || series.check_range(1.0, 1e-9).is_ok())
            .filter(|k| *k != MeasureKind::MAvg || series.len() >= 2)
            .collect(),
    };
    let mut t = Table::new(["measure", "value", "t_low", "t_f", "flagged"]);
    for kind in kinds {
        let r = compute(kind, series)?;
        t.push(vec![kind.name().into(), r.value.into(), r.t_low.into(), r.t_f.into(), Cell::Int(r.flagged as i64)]);
    }
    Ok(t)
}

fn emit(table: &Table, out: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    let bytes = write_csv(table, out.precision)?;
    match &out.out {
        Some(path) => write_atomic(path, &bytes),
        None => stdout.write_all(&bytes).map_err(Error::from),
    }
}

fn emit_scan(r: &ScanResult, xname: &str, yname: &str, scan: &ScanArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut t = Table::new([xname, yname, "value"]);
    for (row, &y) in r.y.iter().enumerate() {
        for (col, &x) in r.x.iter().enumerate() {
            t.push(vec![x.into(), y.into(), r.get(col, row).into()]);
        }
    }
    if let Some(path) = &scan.pgm {
        write_atomic(path, &write_pgm(&r.values, r.width(), r.height(), Normalization::MinMax)?)?;
    }
    emit(&t, &scan.output, stdout)
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::input(format!("--grid must be WxH, got '{s}'"));
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((w.trim().parse().map_err(|_| bad())?, h.trim().parse().map_err(|_| bad())?))
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::input(format!("range must be lo:hi, got '{s}'"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}
