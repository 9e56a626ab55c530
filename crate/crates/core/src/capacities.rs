//! Channel capacities as functions of the channel parameter.
//!
//! For the amplitude-damping channel with transmissivity `eta = |G|^2`:
//!
//! * quantum capacity `Q = max_p [H2(eta p) - H2((1-eta) p)]` for `eta > 1/2`,
//!   zero otherwise;
//! * entanglement-assisted classical capacity
//!   `C = max_p [H2(p) + H2(eta p) - H2((1-eta) p)]`.
//!
//! The distinguishability `D` of the σx eigenstates and the dephasing
//! fidelity `F` are both the modulus of the channel parameter.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::channels::PARAM_TOL;
use crate::error::{Error, Result};
use crate::measures::KSeries;
use crate::optimize::{grid_then_golden, COARSE_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CapacityKind {
    Quantum,
    Classical,
    Distinguishability,
    Fidelity,
}

impl CapacityKind {
    /// Value at the identity channel: 1 qubit, 2 bits, 1, 1.
    pub fn k_max(self) -> f64 {
        match self {
            CapacityKind::Classical => 2.0,
            _ => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CapacityKind::Quantum => "Q",
            CapacityKind::Classical => "C",
            CapacityKind::Distinguishability => "D",
            CapacityKind::Fidelity => "F",
        }
    }

    /// Capacity for a single channel parameter (`G` or `f`).
    pub fn evaluate(self, param: C64) -> Result<f64> {
        let modulus = param.norm();
        if !modulus.is_finite() || modulus > 1.0 + PARAM_TOL {
            return Err(Error::input(format!("channel parameter modulus {modulus} > 1")));
        }
        let modulus = modulus.min(1.0);
        Ok(match self {
            CapacityKind::Quantum => q_capacity_unchecked(modulus * modulus),
            CapacityKind::Classical => c_capacity_unchecked(modulus * modulus),
            CapacityKind::Distinguishability | CapacityKind::Fidelity => modulus,
        })
    }
}

impl fmt::Display for CapacityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for CapacityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" | "q" => Ok(CapacityKind::Quantum),
            "C" | "c" => Ok(CapacityKind::Classical),
            "D" | "d" => Ok(CapacityKind::Distinguishability),
            "F" | "f" => Ok(CapacityKind::Fidelity),
            other => Err(Error::input(format!("unknown capacity '{other}' (expected Q, C, D or F)"))),
        }
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::input(format!("binary entropy argument {x} outside [0, 1]")));
    }
    Ok(h2(x))
}

#[inline]
fn h2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let y = 1.0 - x;
    -(x * x.log2() + y * y.log2())
}

fn check_eta(eta: f64) -> Result<f64> {
    if !eta.is_finite() || eta < -PARAM_TOL || eta > 1.0 + PARAM_TOL {
        return Err(Error::input(format!("transmissivity {eta} outside [0, 1]")));
    }
    Ok(eta.clamp(0.0, 1.0))
}

/// Quantum capacity of the amplitude-damping channel with transmissivity `eta`.
pub fn q_capacity(eta: f64) -> Result<f64> {
    check_eta(eta).map(q_capacity_unchecked)
}

/// Entanglement-assisted classical capacity of the amplitude-damping channel.
pub fn c_capacity(eta: f64) -> Result<f64> {
    check_eta(eta).map(c_capacity_unchecked)
}

fn q_capacity_unchecked(eta: f64) -> f64 {
    q_capacity_with_grid(eta, COARSE_POINTS)
}

fn c_capacity_unchecked(eta: f64) -> f64 {
    c_capacity_with_grid(eta, COARSE_POINTS)
}

pub(crate) fn q_capacity_with_grid(eta: f64, points: usize) -> f64 {
    if eta <= 0.5 {
        return 0.0;
    }
    let loss = 1.0 - eta;
    grid_then_golden(|p| h2(eta * p) - h2(loss * p), 0.0, 1.0, points).value.max(0.0)
}

pub(crate) fn c_capacity_with_grid(eta: f64, points: usize) -> f64 {
    let loss = 1.0 - eta;
    grid_then_golden(|p| h2(p) + h2(eta * p) - h2(loss * p), 0.0, 1.0, points).value.max(0.0)
}

/// Maps channel parameters sampled at `t0 + i dt` to a capacity series.
pub fn capacity_series(params: &[C64], kind: CapacityKind, t0: f64, dt: f64) -> Result<KSeries> {
    let values: Vec<f64> = params
        .par_iter()
        .enumerate()
        .map(|(i, &p)| {
            kind.evaluate(p)
                .map_err(|e| Error::input(format!("parameter at index {i}: {e}")))
        })
        .collect::<Result<_>>()?;
    KSeries::new(t0, dt, values)
}
