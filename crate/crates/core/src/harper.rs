//! Quantum kicked-Harper map on an `N`-site torus used as a dephasing
//! environment for a qubit.
//!
//! One kick is `U_k = exp[i N k cos(2π p̂)] exp[i N k cos(2π q̂)]` with
//! `ħ = 1/(2πN)`, `q_n = n/N`, `p_m = m/N`, i.e. potentials
//! `-(k/2π) cos(2π·)` divided by `ħ`. This is the exact quantization of the
//! classical map in [`classical_step`]: a phase `N k cos(2π q)` shifts the
//! momentum by `-k sin(2π q)`. The position factor acts first; the momentum
//! factor is applied after a unitary DFT to the momentum basis.
//! The qubit shifts the kick strength by `δk`, and its coherence is multiplied
//! by the fidelity amplitude `f(t) = <ψ_{k+δk}(t)|ψ_k(t)>`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::measures::KSeries;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarperParams {
    pub n: usize,
    pub k: f64,
    pub dk: f64,
}

impl HarperParams {
    /// Environment with the default qubit perturbation `δk = 2ħ`.
    pub fn new(n: usize, k: f64) -> Result<Self> {
        Self::with_dk(n, k, 2.0 / (TAU * n as f64))
    }

    pub fn with_dk(n: usize, k: f64, dk: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::input(format!("Hilbert-space dimension must be >= 2, got {n}")));
        }
        if !k.is_finite() || !dk.is_finite() {
            return Err(Error::input("kick strengths must be finite"));
        }
        Ok(HarperParams { n, k, dk })
    }

    pub fn hbar(&self) -> f64 {
        1.0 / (TAU * self.n as f64)
    }

    /// Kick phase amplitude `N k_eff = k_eff / (2πħ)`.
    fn kick_phase(&self, k_eff: f64) -> f64 {
        self.n as f64 * k_eff
    }
}

/// Environment state in the position basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusState {
    amps: Vec<C64>,
}

impl TorusState {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let state = TorusState { amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::input(format!("state norm is {norm}, expected 1")));
        }
        Ok(state)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &TorusState) -> C64 {
        overlap(&self.amps, &other.amps)
    }
}

fn overlap(bra: &[C64], ket: &[C64]) -> C64 {
    bra.iter().zip(ket).map(|(b, k)| b.conj() * k).sum()
}

/// Periodized Gaussian centred at `(q0, p0)` with position variance `ħ/2`.
pub fn coherent_state(params: &HarperParams, q0: f64, p0: f64) -> TorusState {
    let n = params.n;
    let nf = n as f64;
    let (q0, p0) = (q0.rem_euclid(1.0), p0.rem_euclid(1.0));
    let mut amps: Vec<C64> = (0..n)
        .map(|j| {
            let q = j as f64 / nf;
            (-3..=3)
                .map(|mu| {
                    let x = q + mu as f64 - q0;
                    let phase = (TAU * nf * p0 * x).rem_euclid(TAU);
                    C64::from_polar((-std::f64::consts::PI * nf * x * x).exp(), phase)
                })
                .sum()
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    TorusState { amps }
}

/// Split-operator propagator for one kick strength with its own FFT plans
/// and scratch buffer.
pub struct HarperPropagator {
    position_kick: Vec<C64>,
    // momentum phases with the 1/N normalization of the FFT round trip folded in
    momentum_kick: Vec<C64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<C64>,
}

impl HarperPropagator {
    pub fn new(params: &HarperParams, k_eff: f64) -> Self {
        let n = params.n;
        let strength = params.kick_phase(k_eff);
        let phases: Vec<C64> = (0..n)
            .map(|j| {
                let arg = (strength * (TAU * j as f64 / n as f64).cos()).rem_euclid(TAU);
                C64::from_polar(1.0, arg)
            })
            .collect();
        let scale = 1.0 / n as f64;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        HarperPropagator {
            momentum_kick: phases.iter().map(|p| p * scale).collect(),
            position_kick: phases,
            forward,
            inverse,
            scratch: vec![C64::new(0.0, 0.0); scratch_len],
        }
    }

    /// Applies one kick in place.
    pub fn step(&mut self, amps: &mut [C64]) {
        for (a, p) in amps.iter_mut().zip(&self.position_kick) {
            *a *= p;
        }
        self.forward.process_with_scratch(amps, &mut self.scratch);
        for (a, p) in amps.iter_mut().zip(&self.momentum_kick) {
            *a *= p;
        }
        self.inverse.process_with_scratch(amps, &mut self.scratch);
    }
}

/// One kick of strength `k_eff`.
pub fn harper_step(state: &TorusState, k_eff: f64, params: &HarperParams) -> Result<TorusState> {
    if state.dim() != params.n {
        return Err(Error::input(format!(
            "state dimension {} does not match N = {}",
            state.dim(),
            params.n
        )));
    }
    let mut amps = state.amps.clone();
    HarperPropagator::new(params, k_eff).step(&mut amps);
    Ok(TorusState { amps })
}

/// Fidelity amplitude `f(t)` at integer kicks `t = 0..=t_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelitySeries {
    pub f: Vec<C64>,
}

impl FidelitySeries {
    pub fn fidelity(&self) -> Vec<f64> {
        self.f.iter().map(|z| z.norm().min(1.0)).collect()
    }

    /// `F(t)` as a unit-step series starting at `t = 0`.
    pub fn to_kseries(&self) -> Result<KSeries> {
        KSeries::new(0.0, 1.0, self.fidelity())
    }
}

pub fn fidelity_series(params: &HarperParams, q0: f64, p0: f64, t_max: usize) -> FidelitySeries {
    let start = coherent_state(params, q0, p0);
    let mut f = Vec::with_capacity(t_max + 1);
    f.push(C64::new(1.0, 0.0));
    if t_max == 0 {
        return FidelitySeries { f };
    }
    let mut unperturbed = start.amps.clone();
    let mut perturbed = start.amps;
    let mut u = HarperPropagator::new(params, params.k);
    let mut u_pert = HarperPropagator::new(params, params.k + params.dk);
    for _ in 0..t_max {
        u.step(&mut unperturbed);
        u_pert.step(&mut perturbed);
        f.push(overlap(&perturbed, &unperturbed));
    }
    FidelitySeries { f }
}

/// One iteration of the classical map; momentum first, both mod 1.
pub fn classical_step(q: f64, p: f64, k: f64) -> (f64, f64) {
    let p1 = (p - k * (TAU * q).sin()).rem_euclid(1.0);
    let q1 = (q + k * (TAU * p1).sin()).rem_euclid(1.0);
    (wrap_unit(q1), wrap_unit(p1))
}

// rem_euclid can round up to exactly 1.0 for tiny negative inputs
fn wrap_unit(x: f64) -> f64 {
    if x >= 1.0 {
        0.0
    } else {
        x
    }
}

/// Orbit `[(q0, p0), ...]` of length `steps + 1`.
pub fn classical_trajectory(q0: f64, p0: f64, k: f64, steps: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut pt = (q0, p0);
    out.push(pt);
    for _ in 0..steps {
        pt = classical_step(pt.0, pt.1, k);
        out.push(pt);
    }
    out
}

/// Circular standard deviation of a set of torus coordinates in `[0, 1)`.
/// Near zero for a localized orbit, large (> 0.3) for one spread over the circle.
pub fn circular_spread(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut c, mut s, mut n) = (0.0, 0.0, 0usize);
    for x in xs {
        c += (TAU * x).cos();
        s += (TAU * x).sin();
        n += 1;
    }
    if n == 0 {
        return 0.0;
    }
    let r = ((c * c + s * s).sqrt() / n as f64).min(1.0);
    if r <= 0.0 {
        return f64::INFINITY;
    }
    (-2.0 * r.ln()).max(0.0).sqrt() / TAU
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_definition() {
        let p = HarperParams::new(1024, 0.2).unwrap();
        assert!((p.hbar() * TAU * p.n as f64 - 1.0).abs() < 1e-15);
        assert!((p.dk - 2.0 * p.hbar()).abs() < 1e-18);
        assert!(HarperParams::new(1, 0.2).is_err());
    }

    #[test]
    fn coherent_state_moments() {
        let p = HarperParams::new(256, 0.2).unwrap();
        for (q0, p0) in [(0.1, 0.7), (0.5, 0.5), (0.99, 0.0), (-0.3, 1.4)] {
            let s = coherent_state(&p, q0, p0);
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
        let s = coherent_state(&p, 0.5, 0.5);
        let probs: Vec<f64> = s.amplitudes().iter().map(|a| a.norm_sqr()).collect();
        let mean: f64 = probs.iter().enumerate().map(|(j, w)| w * j as f64 / 256.0).sum();
        assert!((mean - 0.5).abs() < 1e-6);
        let var: f64 = probs
            .iter()
            .enumerate()
            .map(|(j, w)| w * (j as f64 / 256.0 - mean).powi(2))
            .sum();
        assert!((var - p.hbar() / 2.0).abs() < 1e-3 * p.hbar());
    }

    #[test]
    fn coherent_state_lattice_translation() {
        let p = HarperParams::new(64, 0.2).unwrap();
        let a = coherent_state(&p, 0.3, 0.25);
        let b = coherent_state(&p, 0.3 + 1.0 / 64.0, 0.25);
        for j in 0..64 {
            let prev = (j + 63) % 64;
            assert!((b.amplitudes()[j] - a.amplitudes()[prev]).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_kick_is_identity() {
        let p = HarperParams::new(32, 0.2).unwrap();
        let s = coherent_state(&p, 0.2, 0.6);
        let out = harper_step(&s, 0.0, &p).unwrap();
        for (a, b) in s.amplitudes().iter().zip(out.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn step_preserves_norm() {
        let p = HarperParams::new(100, 0.3).unwrap();
        let s = coherent_state(&p, 0.4, 0.1);
        let out = harper_step(&s, 0.3, &p).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-12);
        assert!(harper_step(&out, 0.3, &HarperParams::new(64, 0.3).unwrap()).is_err());
    }

    #[test]
    fn fidelity_trivial_cases() {
        let p = HarperParams::with_dk(64, 0.2, 0.0).unwrap();
        let fs = fidelity_series(&p, 0.3, 0.3, 50);
        assert_eq!(fs.f[0], C64::new(1.0, 0.0));
        assert!(fs.f.iter().all(|f| (f - 1.0).norm() < 1e-12));
        let fs = fidelity_series(&HarperParams::new(64, 0.2).unwrap(), 0.3, 0.3, 0);
        assert_eq!(fs.f, vec![C64::new(1.0, 0.0)]);
    }

    #[test]
    fn classical_step_examples() {
        let (q, p) = classical_step(0.25, 0.25, 0.2);
        assert!((p - 0.05).abs() < 1e-15);
        assert!((q - (0.25 + 0.2 * (0.1 * std::f64::consts::PI).sin())).abs() < 1e-15);
        assert!((q - 0.3118034).abs() < 1e-7);
        assert_eq!(classical_step(0.37, 0.81, 0.0), (0.37, 0.81));
        assert_eq!(classical_step(0.0, 0.0, 0.7), (0.0, 0.0));
    }

    #[test]
    fn trajectories() {
        assert_eq!(classical_trajectory(0.1, 0.2, 0.2, 0), vec![(0.1, 0.2)]);
        let fixed = classical_trajectory(0.5, 0.5, 0.2, 100);
        assert!(fixed.iter().all(|&(q, p)| (q - 0.5).abs() < 1e-12 && (p - 0.5).abs() < 1e-12));
        let orbit = classical_trajectory(0.123, 0.456, 0.2, 10_000);
        assert!(orbit.iter().all(|&(q, p)| (0.0..1.0).contains(&q) && (0.0..1.0).contains(&p)));
    }

    #[test]
    fn spread_distinguishes_localized_orbits() {
        assert!(circular_spread([0.99, 0.0, 0.01]) < 0.01);
        let uniform = (0..100).map(|i| i as f64 / 100.0);
        assert!(circular_spread(uniform) > 0.3);
    }
}
