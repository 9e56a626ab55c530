//! Revival-based non-Markovianity measures over a sampled resource series.
//!
//! All measures operate on a [`KSeries`], a uniformly sampled record of some
//! channel resource `K(t)` (a capacity, a distinguishability, a fidelity).
//! A Markovian process never increases `K`, so every measure here is built from
//! increases of the series:
//!
//! * [`m_infty`] integrates every positive increment.
//! * [`m_max`] keeps only the largest revival above a prior minimum.
//! * [`m_avg`] keeps only the largest revival above the prior time average.
//! * [`blp_f`] and [`rhp_f`] are the trace-distance and divisibility measures
//!   written in terms of a dephasing fidelity `F(t)`.
//!
//! On any series `m_avg <= m_max <= m_infty`, and `m_infty > 0` exactly when
//! `m_max > 0`.

use std::fmt;

use crate::error::{Error, Result};

/// Uniformly sampled time series `K(t_i)`, `t_i = t0 + i * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct KSeries {
    t0: f64,
    dt: f64,
    values: Vec<f64>,
}

impl KSeries {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::input("series is empty"));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::input(format!("time step must be positive and finite, got {dt}")));
        }
        if !t0.is_finite() {
            return Err(Error::input(format!("start time must be finite, got {t0}")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!("sample {i} is not finite ({})", values[i])));
        }
        Ok(KSeries { t0, dt, values })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Time of sample `i`.
    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    /// Checks that every sample lies in `[0, k_max]` up to `tol`.
    pub fn check_range(&self, k_max: f64, tol: f64) -> Result<()> {
        match self.values.iter().position(|&v| v < -tol || v > k_max + tol) {
            Some(i) => Err(Error::input(format!(
                "sample {i} = {} outside [0, {k_max}]",
                self.values[i]
            ))),
            None => Ok(()),
        }
    }

    /// Running trapezoidal integral: `cum[j] = ∫_{t0}^{t_j} K dt`.
    pub(crate) fn cumulative_trapezoid(&self) -> Vec<f64> {
        let mut cum = Vec::with_capacity(self.values.len());
        let mut acc = 0.0;
        cum.push(0.0);
        for w in self.values.windows(2) {
            acc += 0.5 * (w[0] + w[1]) * self.dt;
            cum.push(acc);
        }
        cum
    }
}

/// Which measure produced a [`MeasureResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    MInf,
    MMax,
    MAvg,
    BlpF,
    RhpF,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 5] = [
        MeasureKind::MInf,
        MeasureKind::MMax,
        MeasureKind::MAvg,
        MeasureKind::BlpF,
        MeasureKind::RhpF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::MInf => "M_INF",
            MeasureKind::MMax => "M_MAX",
            MeasureKind::MAvg => "M_AVG",
            MeasureKind::BlpF => "BLP_F",
            MeasureKind::RhpF => "RHP_F",
        }
    }

    /// Whether the measure expects a fidelity series with samples in `[0, 1]`.
    pub fn needs_fidelity(self) -> bool {
        matches!(self, MeasureKind::BlpF | MeasureKind::RhpF)
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureResult {
    pub kind: MeasureKind,
    pub value: f64,
    /// Start of the revival: the prior minimum for `M_MAX`, otherwise `t0`.
    pub t_low: f64,
    /// Time of the revival peak (argmax for `M_MAX`/`M_AVG`, last positive
    /// increment for the integrated measures).
    pub t_f: f64,
    /// Set by `RHP_F` when a denominator hit the floor.
    pub flagged: bool,
}

impl MeasureResult {
    fn new(kind: MeasureKind, value: f64, t_low: f64, t_f: f64) -> Self {
        MeasureResult { kind, value, t_low, t_f, flagged: false }
    }
}

/// Default floor for the `RHP_F` denominator.
pub const RHP_FLOOR: f64 = 1e-12;

const FIDELITY_TOL: f64 = 1e-9;

/// Sum of all positive increments.
pub fn m_infty(series: &KSeries) -> MeasureResult {
    let (value, last) = positive_increments(series.values(), |_, d| d);
    let t_f = last.map_or(series.t0(), |i| series.time(i + 1));
    MeasureResult::new(MeasureKind::MInf, value, series.t0(), t_f)
}

/// Largest revival `K(t_j) - K(t_i)` over `i <= j`, in one running-minimum pass.
pub fn m_max(series: &KSeries) -> MeasureResult {
    let v = series.values();
    let mut min_idx = 0;
    let (mut best, mut best_low, mut best_f) = (0.0, 0, 0);
    for (j, &k) in v.iter().enumerate() {
        if k < v[min_idx] {
            min_idx = j;
        }
        let rise = k - v[min_idx];
        if rise > best {
            best = rise;
            best_low = min_idx;
            best_f = j;
        }
    }
    MeasureResult::new(MeasureKind::MMax, best, series.time(best_low), series.time(best_f))
}

/// Largest excess of `K(t_f)` over its trapezoidal time average on `[t0, t_f]`,
/// floored at zero. `t_f = t0` is excluded.
pub fn m_avg(series: &KSeries) -> Result<MeasureResult> {
    let (objective, j) = avg_excess_argmax(series)?;
    Ok(MeasureResult::new(MeasureKind::MAvg, objective.max(0.0), series.t0(), series.time(j)))
}

/// `(max_j [K_j - <K>_{[t0,t_j]}], argmax)` with the earliest index on ties.
/// The objective may be negative.
pub(crate) fn avg_excess_argmax(series: &KSeries) -> Result<(f64, usize)> {
    if series.len() < 2 {
        return Err(Error::input("time-averaged measure needs at least two samples"));
    }
    let cum = series.cumulative_trapezoid();
    let v = series.values();
    let mut best = f64::NEG_INFINITY;
    let mut arg = 1;
    for j in 1..v.len() {
        let excess = v[j] - window_average(&cum, j, series.dt());
        if excess > best {
            best = excess;
            arg = j;
        }
    }
    Ok((best, arg))
}

/// Trapezoidal average of the series on `[t0, t_j]`, `j >= 1`.
pub(crate) fn window_average(cum: &[f64], j: usize, dt: f64) -> f64 {
    cum[j] / (j as f64 * dt)
}

/// Trace-distance measure written in the fidelity: `2 * Σ max(0, ΔF)`.
pub fn blp_f(series: &KSeries) -> Result<MeasureResult> {
    check_fidelity(series)?;
    let (sum, last) = positive_increments(series.values(), |_, d| d);
    let t_f = last.map_or(series.t0(), |i| series.time(i + 1));
    Ok(MeasureResult::new(MeasureKind::BlpF, 2.0 * sum, series.t0(), t_f))
}

/// Divisibility measure written in the fidelity: `Σ max(0, ΔF_i) / max(F_i, floor)`.
pub fn rhp_f(series: &KSeries, floor: f64) -> Result<MeasureResult> {
    if !(floor > 0.0) || !floor.is_finite() {
        return Err(Error::input(format!("denominator floor must be positive, got {floor}")));
    }
    check_fidelity(series)?;
    let v = series.values();
    let mut floored = false;
    let (sum, last) = positive_increments(v, |i, d| {
        let denom = if v[i] < floor {
            floored = true;
            floor
        } else {
            v[i]
        };
        d / denom
    });
    let t_f = last.map_or(series.t0(), |i| series.time(i + 1));
    let mut res = MeasureResult::new(MeasureKind::RhpF, sum, series.t0(), t_f);
    res.flagged = floored;
    Ok(res)
}

/// Dispatch by kind. `RHP_F` uses [`RHP_FLOOR`].
pub fn compute(kind: MeasureKind, series: &KSeries) -> Result<MeasureResult> {
    match kind {
        MeasureKind::MInf => Ok(m_infty(series)),
        MeasureKind::MMax => Ok(m_max(series)),
        MeasureKind::MAvg => m_avg(series),
        MeasureKind::BlpF => blp_f(series),
        MeasureKind::RhpF => rhp_f(series, RHP_FLOOR),
    }
}

fn check_fidelity(series: &KSeries) -> Result<()> {
    series.check_range(1.0, FIDELITY_TOL).map_err(|e| match e {
        Error::Input(msg) => Error::Input(format!("fidelity series: {msg}")),
        other => other,
    })
}

// Sums `weight(i, K_{i+1} - K_i)` over positive increments; also returns the
// index of the last positive increment.
fn positive_increments<W>(v: &[f64], mut weight: W) -> (f64, Option<usize>)
where
    W: FnMut(usize, f64) -> f64,
{
    let mut sum = 0.0;
    let mut last = None;
    for (i, w) in v.windows(2).enumerate() {
        let d = w[1] - w[0];
        if d > 0.0 {
            sum += weight(i, d);
            last = Some(i);
        }
    }
    (sum, last)
}
