//! Decoherence function of the detuned Jaynes-Cummings model with a
//! Lorentzian spectral density,
//!
//! ```text
//! G(t) = e^{-(λ-iδ)t/2} [ (λ-iδ)/Ω · sinh(Ωt/2) + cosh(Ωt/2) ],
//! Ω = sqrt((λ-iδ)^2 - 2γλ).
//! ```
//!
//! The expression is even in `Ω`, so the square-root branch does not matter.
//! It is evaluated as a combination of two decaying exponentials so that long
//! horizons do not overflow `sinh`/`cosh`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcmParams {
    pub gamma: f64,
    pub lambda: f64,
    pub delta: f64,
}

impl JcmParams {
    pub fn new(gamma: f64, lambda: f64, delta: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::input(format!("spectral width must be positive, got {lambda}")));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::input(format!("coupling must be non-negative, got {gamma}")));
        }
        if !delta.is_finite() {
            return Err(Error::input("detuning must be finite"));
        }
        Ok(JcmParams { gamma, lambda, delta })
    }

    /// Parameters expressed in units of the spectral width (`λ = 1`).
    pub fn scaled(gamma_over_lambda: f64, delta_over_lambda: f64) -> Result<Self> {
        Self::new(gamma_over_lambda, 1.0, delta_over_lambda)
    }

    fn a(&self) -> C64 {
        C64::new(self.lambda, -self.delta)
    }

    /// Principal root `Ω = sqrt((λ-iδ)^2 - 2γλ)`.
    pub fn omega(&self) -> C64 {
        let a = self.a();
        (a * a - 2.0 * self.gamma * self.lambda).sqrt()
    }
}

/// `G(t)` for `t >= 0` (physical time, not scaled by λ).
pub fn g_of_t(params: &JcmParams, t: f64) -> Result<C64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::input(format!("time must be non-negative and finite, got {t}")));
    }
    Ok(clamp_unit(g_with_omega(params.a(), params.omega(), t)))
}

pub(crate) fn g_with_omega(a: C64, omega: C64, t: f64) -> C64 {
    if t == 0.0 {
        return C64::new(1.0, 0.0);
    }
    let z = 0.5 * omega * t;
    if z.norm() < 1e-3 {
        // Ω -> 0 series: sinh(z)/z and cosh(z) to O(z^8)
        let z2 = z * z;
        let cosh = 1.0 + z2 * (0.5 + z2 * (1.0 / 24.0 + z2 / 720.0));
        let sinhc = 1.0 + z2 * (1.0 / 6.0 + z2 * (1.0 / 120.0 + z2 / 5040.0));
        let half_at = 0.5 * a * t;
        return (-half_at).exp() * (half_at * sinhc + cosh);
    }
    let r = a / omega;
    0.5 * (1.0 + r) * (0.5 * (omega - a) * t).exp() + 0.5 * (1.0 - r) * (-0.5 * (omega + a) * t).exp()
}

fn clamp_unit(g: C64) -> C64 {
    let m = g.norm();
    if m > 1.0 && m <= 1.0 + 1e-9 {
        g / m
    } else {
        g
    }
}

/// How far to sample `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    /// Sample `λt ∈ [0, t_max]`.
    Fixed { t_max: f64 },
    /// Sample until `|G|^2 < threshold` for a full trailing window of width
    /// `1/λ` after `λt >= t_min`, but never beyond `λt = t_cap`.
    Adaptive { threshold: f64, t_min: f64, t_cap: f64 },
}

/// Uniform sampling grid in units of `1/λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub dt: f64,
    pub horizon: Horizon,
}

impl TimeGrid {
    pub fn fixed(dt: f64, t_max: f64) -> Result<Self> {
        let grid = TimeGrid { dt, horizon: Horizon::Fixed { t_max } };
        grid.validate()?;
        Ok(grid)
    }

    pub fn adaptive(dt: f64, threshold: f64, t_min: f64, t_cap: f64) -> Result<Self> {
        let grid = TimeGrid { dt, horizon: Horizon::Adaptive { threshold, t_min, t_cap } };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::input(format!("time step must be positive, got {}", self.dt)));
        }
        match self.horizon {
            Horizon::Fixed { t_max } if !(t_max > 0.0) || !t_max.is_finite() => {
                Err(Error::input(format!("horizon must be positive, got {t_max}")))
            }
            Horizon::Adaptive { threshold, t_min, t_cap } => {
                if !(threshold > 0.0 && threshold < 1.0) {
                    return Err(Error::input(format!("cutoff threshold must lie in (0, 1), got {threshold}")));
                }
                if !(t_min >= 0.0) || !(t_cap > t_min) || !t_cap.is_finite() {
                    return Err(Error::input("adaptive horizon needs 0 <= t_min < t_cap"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Samples of `G` on `λt_i = i dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct GSeries {
    pub dt: f64,
    pub values: Vec<C64>,
    /// `dt · |Im Ω| / λ > π/4`: the grid may not resolve the oscillations.
    pub coarse: bool,
    /// Adaptive horizon reached `t_cap` before the cutoff condition held.
    pub truncated: bool,
}

impl GSeries {
    pub fn lambda_time(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }
}

pub fn g_series(params: &JcmParams, grid: &TimeGrid) -> Result<GSeries> {
    grid.validate()?;
    let a = params.a();
    let omega = params.omega();
    let lambda = params.lambda;
    let sample = |i: usize| clamp_unit(g_with_omega(a, omega, i as f64 * grid.dt / lambda));
    let coarse = grid.dt * omega.im.abs() / lambda > std::f64::consts::FRAC_PI_4;

    let (values, truncated) = match grid.horizon {
        Horizon::Fixed { t_max } => {
            let n = (t_max / grid.dt + 1e-9).floor() as usize;
            ((0..=n).map(sample).collect(), false)
        }
        Horizon::Adaptive { threshold, t_min, t_cap } => {
            let window = (1.0 / grid.dt).ceil() as usize;
            let cap = (t_cap / grid.dt + 1e-9).floor() as usize;
            let mut values = Vec::new();
            let mut below = 0usize;
            let mut done = false;
            for i in 0..=cap {
                let g = sample(i);
                values.push(g);
                below = if g.norm_sqr() < threshold { below + 1 } else { 0 };
                if below > window && grid.dt * i as f64 >= t_min {
                    done = true;
                    break;
                }
            }
            (values, !done)
        }
    };
    Ok(GSeries { dt: grid.dt, values, coarse, truncated })
}
