//! Quantum-vault figures of merit.
//!
//! Alice stores information at `t0` and reads it at `t_f`; Eve attacks once
//! with probability `q` at a uniformly random time, destroying the state and
//! obtaining on average `<K>` over `[t0, t_f]`. The advantage of Alice over Eve
//! is `ΔK_q = (1-q) K(t_f) - q <K>`.

use crate::error::{Error, Result};
use crate::measures::{avg_excess_argmax, window_average, KSeries};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VaultMetrics {
    pub delta_k: f64,
    /// `ΔK_q / K_max`.
    pub eta: f64,
    pub p_success: f64,
    /// `K_max · P_q`.
    pub n_quality: f64,
    pub t_f: f64,
    pub q: f64,
}

/// Relative tolerance for locating `t_f` on the sample grid.
const GRID_TOL: f64 = 1e-9;

pub fn vault_metrics(series: &KSeries, k_max: f64, t_f: f64, q: f64) -> Result<VaultMetrics> {
    if !(k_max > 0.0) || !k_max.is_finite() {
        return Err(Error::input(format!("K_max must be positive, got {k_max}")));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::input(format!("attack probability {q} outside [0, 1]")));
    }
    series.check_range(k_max, 1e-9)?;
    let j = grid_index(series, t_f)?;

    let cum = series.cumulative_trapezoid();
    let avg = window_average(&cum, j, series.dt());
    let k_f = series.values()[j];
    let delta_k = (1.0 - q) * k_f - q * avg;
    let p_success = q * (1.0 - avg / k_max) + (1.0 - q) * (k_f / k_max);
    Ok(VaultMetrics {
        delta_k,
        eta: delta_k / k_max,
        p_success,
        n_quality: k_max * p_success,
        t_f: series.time(j),
        q,
    })
}

/// The retrieval time maximizing `K(t_f) - <K>_{[t0, t_f]}` (earliest on ties).
pub fn best_retrieval_time(series: &KSeries) -> Result<f64> {
    let (_, j) = avg_excess_argmax(series)?;
    Ok(series.time(j))
}

fn grid_index(series: &KSeries, t_f: f64) -> Result<usize> {
    if !t_f.is_finite() {
        return Err(Error::input("retrieval time must be finite"));
    }
    let pos = (t_f - series.t0()) / series.dt();
    let j = pos.round();
    if (pos - j).abs() > GRID_TOL * pos.abs().max(1.0) {
        return Err(Error::input(format!("retrieval time {t_f} is not on the sample grid")));
    }
    if j < 1.0 || j as usize >= series.len() {
        return Err(Error::input(format!(
            "retrieval time {t_f} outside ({}, {}]",
            series.t0(),
            series.time(series.len() - 1)
        )));
    }
    Ok(j as usize)
}
