//! Parameter-grid drivers: a measure evaluated over Harper initial conditions
//! `(q0, p0)` or over Jaynes-Cummings parameters `(δ/λ, γ/λ)`.
//!
//! Each cell runs the same single-point pipeline a caller would run by hand
//! and writes into its own slot, so results do not depend on the worker count.

use rayon::prelude::*;

use crate::capacities::{capacity_series, CapacityKind};
use crate::error::{Error, Result};
use crate::harper::{fidelity_series, HarperParams};
use crate::jcm::{g_series, JcmParams, TimeGrid};
use crate::measures::{compute, MeasureKind};

/// Linear or logarithmic axis with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
    pub log: bool,
}

impl Axis {
    pub fn linear(start: f64, end: f64, count: usize) -> Self {
        Axis { start, end, count, log: false }
    }

    pub fn log(start: f64, end: f64, count: usize) -> Self {
        Axis { start, end, count, log: true }
    }

    /// `count` cell centres covering `[0, 1)`.
    pub fn unit_cells(count: usize) -> Self {
        let h = 0.5 / count as f64;
        Axis::linear(h, 1.0 - h, count)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::input(format!("axis needs at least 2 points, got {}", self.count)));
        }
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(Error::input("axis endpoints must be finite"));
        }
        if self.log && !(self.start > 0.0 && self.end > 0.0) {
            return Err(Error::input("log axis needs positive endpoints"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let s = i as f64 / last;
                if self.log {
                    let (a, b) = (self.start.log10(), self.end.log10());
                    10f64.powf(a + s * (b - a))
                } else {
                    self.start + s * (self.end - self.start)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Process {
    /// Axes are `(q0, p0)`; the measure is taken on `F(t)`, `t = 0..=t_max`.
    Harper { params: HarperParams, t_max: usize },
    /// Axes are `(δ/λ, γ/λ)`.
    Jcm { grid: TimeGrid, capacity: CapacityKind },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub x: Axis,
    pub y: Axis,
    pub measure: MeasureKind,
    pub process: Process,
    pub workers: usize,
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        self.x.validate()?;
        self.y.validate()?;
        if self.workers == 0 {
            return Err(Error::input("worker count must be at least 1"));
        }
        if let Process::Jcm { grid, .. } = &self.process {
            grid.validate()?;
            if self.y.points().iter().any(|&g| g < 0.0) {
                return Err(Error::input("coupling axis must be non-negative"));
            }
        }
        Ok(())
    }
}

/// Row-major matrix: row `r` is `y[r]`, column `c` is `x[c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
    /// Cells `(col, row)` whose time grid was flagged as too coarse.
    pub coarse_cells: Vec<(usize, usize)>,
}

impl ScanResult {
    pub fn width(&self) -> usize {
        self.x.len()
    }

    pub fn height(&self) -> usize {
        self.y.len()
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.values[row * self.width() + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.width())
    }
}

/// Measure of the Harper fidelity series for one initial condition.
pub fn harper_point(params: &HarperParams, q0: f64, p0: f64, t_max: usize, measure: MeasureKind) -> Result<f64> {
    if t_max == 0 {
        return Ok(0.0);
    }
    let series = fidelity_series(params, q0, p0, t_max).to_kseries()?;
    Ok(compute(measure, &series)?.value)
}

/// Measure of the JCM capacity series for one parameter pair (in units of λ).
/// Also reports whether the time grid was flagged as coarse.
pub fn jcm_point(
    delta: f64,
    gamma: f64,
    grid: &TimeGrid,
    capacity: CapacityKind,
    measure: MeasureKind,
) -> Result<(f64, bool)> {
    let params = JcmParams::scaled(gamma, delta)?;
    let g = g_series(&params, grid)?;
    if g.values.len() < 2 {
        return Ok((0.0, g.coarse));
    }
    let series = capacity_series(&g.values, capacity, 0.0, g.dt)?;
    Ok((compute(measure, &series)?.value, g.coarse))
}

pub fn harper_scan(spec: &ScanSpec) -> Result<ScanResult> {
    match spec.process {
        Process::Harper { .. } => run(spec),
        Process::Jcm { .. } => Err(Error::input("harper_scan needs a Harper process")),
    }
}

pub fn jcm_scan(spec: &ScanSpec) -> Result<ScanResult> {
    match spec.process {
        Process::Jcm { .. } => run(spec),
        Process::Harper { .. } => Err(Error::input("jcm_scan needs a Jaynes-Cummings process")),
    }
}

fn run(spec: &ScanSpec) -> Result<ScanResult> {
    spec.validate()?;
    let xs = spec.x.points();
    let ys = spec.y.points();
    let width = xs.len();
    let cells: Vec<(usize, usize)> = (0..ys.len()).flat_map(|r| (0..width).map(move |c| (c, r))).collect();

    let eval = |&(c, r): &(usize, usize)| -> Result<(f64, bool)> {
        let (x, y) = (xs[c], ys[r]);
        let out = match &spec.process {
            Process::Harper { params, t_max } => harper_point(params, x, y, *t_max, spec.measure).map(|v| (v, false)),
            Process::Jcm { grid, capacity } => jcm_point(x, y, grid, *capacity, spec.measure),
        };
        out.map_err(|e| match e {
            Error::Input(msg) => Error::Input(format!("cell ({x}, {y}): {msg}")),
            Error::Runtime(msg) => Error::Runtime(format!("cell ({x}, {y}): {msg}")),
            other => other,
        })
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::Runtime(format!("cannot start worker pool: {e}")))?;
    let results: Vec<(f64, bool)> = pool.install(|| cells.par_iter().map(eval).collect::<Result<_>>())?;

    let values: Vec<f64> = results.iter().map(|r| r.0).collect();
    let coarse_cells = cells.iter().zip(&results).filter(|(_, r)| r.1).map(|(c, _)| *c).collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ScanResult { x: xs, y: ys, values, min, max, coarse_cells })
}
