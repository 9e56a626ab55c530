//! Single-qubit states and the two channel families used by the example
//! processes: pure dephasing (coherence scaled by a complex `f`) and amplitude
//! damping (excited population scaled by `|G|^2`, coherence by `G`).
//!
//! The basis ordering is `{|g>, |e>}`; `ρ_ge = <g|ρ|e>`. Bloch components are
//! `x = 2 Re ρ_ge`, `y = -2 Im ρ_ge`, `z = ρ_gg - ρ_ee`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance on Hermiticity, trace and positivity.
pub const STATE_TOL: f64 = 1e-12;

/// Tolerance on `|f| <= 1` / `|G| <= 1` for channel parameters.
pub const PARAM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    pub gg: C64,
    pub ge: C64,
    pub eg: C64,
    pub ee: C64,
}

impl DensityMatrix2 {
    /// Builds a state from its populations and coherence, checking physicality.
    pub fn new(rho_gg: f64, rho_ge: C64, rho_ee: f64) -> Result<Self> {
        let rho = DensityMatrix2 {
            gg: C64::new(rho_gg, 0.0),
            ge: rho_ge,
            eg: rho_ge.conj(),
            ee: C64::new(rho_ee, 0.0),
        };
        rho.validate()?;
        Ok(rho)
    }

    /// Pure state `a|g> + b|e>` (normalized internally).
    pub fn pure(a: C64, b: C64) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !(n > 0.0) {
            return Err(Error::input("zero state vector"));
        }
        let (a, b) = (a / n, b / n);
        Ok(DensityMatrix2 {
            gg: C64::new(a.norm_sqr(), 0.0),
            ge: a * b.conj(),
            eg: b * a.conj(),
            ee: C64::new(b.norm_sqr(), 0.0),
        })
    }

    pub fn ground() -> Self {
        DensityMatrix2 {
            gg: C64::new(1.0, 0.0),
            ge: C64::new(0.0, 0.0),
            eg: C64::new(0.0, 0.0),
            ee: C64::new(0.0, 0.0),
        }
    }

    /// `|±> = (|g> ± |e>)/√2`, the σx eigenstates.
    pub fn plus() -> Self {
        Self::from_bloch([1.0, 0.0, 0.0])
    }

    pub fn minus() -> Self {
        Self::from_bloch([-1.0, 0.0, 0.0])
    }

    pub fn from_bloch(r: [f64; 3]) -> Self {
        let [x, y, z] = r;
        let ge = C64::new(0.5 * x, -0.5 * y);
        DensityMatrix2 {
            gg: C64::new(0.5 * (1.0 + z), 0.0),
            ge,
            eg: ge.conj(),
            ee: C64::new(0.5 * (1.0 - z), 0.0),
        }
    }

    pub fn bloch(&self) -> [f64; 3] {
        [2.0 * self.ge.re, -2.0 * self.ge.im, (self.gg - self.ee).re]
    }

    pub fn trace(&self) -> C64 {
        self.gg + self.ee
    }

    /// Checks Hermiticity, unit trace and positivity within [`STATE_TOL`].
    pub fn validate(&self) -> Result<()> {
        let entries = [self.gg, self.ge, self.eg, self.ee];
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::input("density matrix has non-finite entries"));
        }
        if self.gg.im.abs() > STATE_TOL
            || self.ee.im.abs() > STATE_TOL
            || (self.eg - self.ge.conj()).norm() > STATE_TOL
        {
            return Err(Error::input("density matrix is not Hermitian"));
        }
        if (self.trace() - 1.0).norm() > STATE_TOL {
            return Err(Error::input(format!("density matrix trace is {}", self.trace())));
        }
        let (lo, _) = hermitian_eigenvalues(self.gg.re, self.ee.re, self.ge);
        if lo < -STATE_TOL {
            return Err(Error::input(format!("density matrix has negative eigenvalue {lo}")));
        }
        Ok(())
    }
}

/// Eigenvalues `(low, high)` of the Hermitian matrix `[[a, c], [c*, d]]`.
fn hermitian_eigenvalues(a: f64, d: f64, c: C64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + c.norm_sqr()).sqrt();
    (mean - r, mean + r)
}

/// Trace distance `½ tr|ρ1 - ρ2|`.
pub fn trace_distance(rho1: &DensityMatrix2, rho2: &DensityMatrix2) -> Result<f64> {
    rho1.validate()?;
    rho2.validate()?;
    // ρ1 - ρ2 is Hermitian and traceless; the eigenvalues are ±r.
    let a = (rho1.gg - rho2.gg).re;
    let d = (rho1.ee - rho2.ee).re;
    let c = rho1.ge - rho2.ge;
    let (lo, hi) = hermitian_eigenvalues(a, d, c);
    Ok((0.5 * (lo.abs() + hi.abs())).min(1.0))
}

/// Real 4×4 channel matrix in the normalized Pauli basis `{I, σx, σy, σz}/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTransferMatrix(pub [[f64; 4]; 4]);

impl PauliTransferMatrix {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        PauliTransferMatrix(m)
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.0
    }

    /// First row `(1, 0, 0, 0)`.
    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let r = self.0[0];
        (r[0] - 1.0).abs() <= tol && r[1..].iter().all(|x| x.abs() <= tol)
    }
}

/// Dephasing channel realizing `ρ_ge ↦ f ρ_ge` with populations fixed.
///
/// The x–y block is the rotation-scaling `(x, y) ↦ (Re f·x + Im f·y,
/// −Im f·x + Re f·y)`; only `|f|` matters for capacities.
pub fn dephasing_ptm(f: C64) -> Result<PauliTransferMatrix> {
    check_param(f, "dephasing factor")?;
    let mut m = PauliTransferMatrix::identity().0;
    m[1][1] = f.re;
    m[1][2] = f.im;
    m[2][1] = -f.im;
    m[2][2] = f.re;
    Ok(PauliTransferMatrix(m))
}

/// Same channel as [`dephasing_ptm`], applied directly to the coherence.
pub fn dephasing_apply(f: C64, rho: &DensityMatrix2) -> Result<DensityMatrix2> {
    check_param(f, "dephasing factor")?;
    rho.validate()?;
    let ge = f * rho.ge;
    Ok(DensityMatrix2 { gg: rho.gg, ge, eg: ge.conj(), ee: rho.ee })
}

/// Amplitude-damping channel of the Jaynes-Cummings process.
pub fn jcm_apply(g: C64, rho: &DensityMatrix2) -> Result<DensityMatrix2> {
    check_param(g, "decoherence function")?;
    rho.validate()?;
    let eta = g.norm_sqr().min(1.0);
    let ee = eta * rho.ee.re;
    let ge = g * rho.ge;
    Ok(DensityMatrix2 {
        gg: C64::new(1.0 - ee, 0.0),
        ge,
        eg: ge.conj(),
        ee: C64::new(ee, 0.0),
    })
}

/// Applies a transfer matrix in Pauli coordinates. The output trace is set
/// from the (preserved) identity component.
pub fn apply_ptm(ptm: &PauliTransferMatrix, rho: &DensityMatrix2) -> Result<DensityMatrix2> {
    rho.validate()?;
    // coordinates c_i = tr(σ_i ρ)/√2 up to the common 1/√2 factor
    let [x, y, z] = rho.bloch();
    let input = [1.0, x, y, z];
    let m = ptm.matrix();
    let mut out = [0.0; 4];
    for (o, row) in out.iter_mut().zip(m.iter()) {
        *o = row.iter().zip(input.iter()).map(|(a, b)| a * b).sum();
    }
    // trace is fixed by the identity row; normalize Bloch components by it
    let r = [out[1], out[2], out[3]];
    Ok(DensityMatrix2::from_bloch(r))
}

fn check_param(f: C64, what: &str) -> Result<()> {
    if !f.re.is_finite() || !f.im.is_finite() {
        return Err(Error::input(format!("{what} is not finite")));
    }
    if f.norm() > 1.0 + PARAM_TOL {
        return Err(Error::input(format!("{what} has modulus {} > 1 (non-physical)", f.norm())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_state_close(a: &DensityMatrix2, b: &DensityMatrix2, tol: f64) {
        for (x, y) in [(a.gg, b.gg), (a.ge, b.ge), (a.eg, b.eg), (a.ee, b.ee)] {
            assert!((x - y).norm() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn dephasing_limits() {
        assert_eq!(dephasing_ptm(c(1.0, 0.0)).unwrap(), PauliTransferMatrix::identity());
        let m = dephasing_ptm(c(0.0, 0.0)).unwrap();
        let mut d = [[0.0; 4]; 4];
        d[0][0] = 1.0;
        d[3][3] = 1.0;
        assert_eq!(m.0, d);
        assert!(dephasing_ptm(c(1.0, 0.1)).is_err());
    }

    #[test]
    fn dephasing_by_i_block() {
        // ρ_ge ↦ i ρ_ge: x = 2Re ρ_ge → 2Re(iρ_ge) = -2Im ρ_ge = y
        let m = dephasing_ptm(c(0.0, 1.0)).unwrap().0;
        assert_eq!([m[1][1], m[1][2], m[2][1], m[2][2]], [0.0, 1.0, -1.0, 0.0]);
        let rho = DensityMatrix2::from_bloch([0.3, 0.4, 0.1]);
        let direct = dephasing_apply(c(0.0, 1.0), &rho).unwrap();
        assert_eq!(direct.bloch()[0], 0.4);
    }

    #[test]
    fn jcm_examples() {
        let rho = DensityMatrix2::new(0.5, c(0.5, 0.0), 0.5).unwrap();
        assert_eq!(jcm_apply(c(1.0, 0.0), &rho).unwrap(), rho);
        assert_state_close(&jcm_apply(c(0.0, 0.0), &rho).unwrap(), &DensityMatrix2::ground(), 0.0);
        let out = jcm_apply(c(0.6, 0.0), &rho).unwrap();
        assert!((out.ee.re - 0.18).abs() < 1e-15);
        assert!((out.ge - c(0.3, 0.0)).norm() < 1e-15);
        assert!((out.gg.re - 0.82).abs() < 1e-15);
        assert!(jcm_apply(c(0.0, 1.1), &rho).is_err());
    }

    #[test]
    fn invalid_states_rejected() {
        assert!(DensityMatrix2::new(0.6, c(0.0, 0.0), 0.6).is_err());
        assert!(DensityMatrix2::new(0.5, c(0.6, 0.0), 0.5).is_err());
        let mut rho = DensityMatrix2::plus();
        rho.eg = c(0.2, 0.1);
        assert!(rho.validate().is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let p = DensityMatrix2::plus();
        let m = DensityMatrix2::minus();
        assert_eq!(trace_distance(&p, &p).unwrap(), 0.0);
        assert!((trace_distance(&p, &m).unwrap() - 1.0).abs() < 1e-15);
        for f in [c(0.3, 0.4), c(-0.9, 0.1), c(0.0, 0.0), c(0.0, 1.0)] {
            let ptm = dephasing_ptm(f).unwrap();
            let a = apply_ptm(&ptm, &p).unwrap();
            let b = apply_ptm(&ptm, &m).unwrap();
            assert!((trace_distance(&a, &b).unwrap() - f.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn apply_ptm_examples() {
        let rho = DensityMatrix2::new(0.5, c(0.5, 0.0), 0.5).unwrap();
        assert_state_close(&apply_ptm(&PauliTransferMatrix::identity(), &rho).unwrap(), &rho, 1e-15);
        let out = apply_ptm(&dephasing_ptm(c(0.0, 0.0)).unwrap(), &rho).unwrap();
        assert_eq!(out.ge, c(0.0, 0.0));
    }

    #[test]
    fn pure_state_normalizes() {
        let rho = DensityMatrix2::pure(c(3.0, 0.0), c(0.0, 4.0)).unwrap();
        rho.validate().unwrap();
        assert!((rho.ee.re - 0.64).abs() < 1e-15);
    }

    fn arb_state() -> impl Strategy<Value = DensityMatrix2> {
        (0.0f64..1.0, 0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::TAU).prop_map(
            |(r, theta, phi)| {
                DensityMatrix2::from_bloch([
                    r * theta.sin() * phi.cos(),
                    r * theta.sin() * phi.sin(),
                    r * theta.cos(),
                ])
            },
        )
    }

    fn arb_param() -> impl Strategy<Value = C64> {
        (0.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, a)| C64::from_polar(r, a))
    }

    proptest! {
        #[test]
        fn dephasing_paths_agree(f in arb_param(), rho in arb_state()) {
            let ptm = dephasing_ptm(f).unwrap();
            prop_assert!(ptm.is_trace_preserving(0.0));
            let a = apply_ptm(&ptm, &rho).unwrap();
            let b = dephasing_apply(f, &rho).unwrap();
            a.validate().unwrap();
            assert_state_close(&a, &b, 1e-15);
            let norm = |r: [f64; 3]| (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            prop_assert!(norm(a.bloch()) <= norm(rho.bloch()) + 1e-12);
        }

        #[test]
        fn trace_distance_is_metric(a in arb_state(), b in arb_state(), c in arb_state()) {
            let ab = trace_distance(&a, &b).unwrap();
            let ba = trace_distance(&b, &a).unwrap();
            prop_assert_eq!(ab, ba);
            let ac = trace_distance(&a, &c).unwrap();
            let cb = trace_distance(&c, &b).unwrap();
            prop_assert!(ab <= ac + cb + 1e-12);
            prop_assert!((0.0..=1.0).contains(&ab));
        }

        #[test]
        fn jcm_pm_distance_is_abs_g(g in arb_param()) {
            let a = jcm_apply(g, &DensityMatrix2::plus()).unwrap();
            let b = jcm_apply(g, &DensityMatrix2::minus()).unwrap();
            a.validate().unwrap();
            prop_assert!((trace_distance(&a, &b).unwrap() - g.norm()).abs() <= 1e-12);
        }
    }
}
