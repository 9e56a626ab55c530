use qvault::capacities::{capacity_series, CapacityKind};
use qvault::jcm::{g_of_t, g_series, JcmParams, TimeGrid};
use qvault::measures::{m_avg, m_infty, m_max, KSeries, MeasureKind};
use qvault::optimize::golden_section_max;
use qvault::scan::{jcm_point, jcm_scan, Axis, Process, ScanSpec};

fn q_series(gamma: f64, delta: f64, grid: &TimeGrid) -> KSeries {
    let g = g_series(&JcmParams::scaled(gamma, delta).unwrap(), grid).unwrap();
    capacity_series(&g.values, CapacityKind::Quantum, 0.0, g.dt).unwrap()
}

/// First zero of |G| located by sampling at `dt` and refining with golden
/// section on -|G|.
fn first_zero(params: &JcmParams, dt: f64) -> f64 {
    let abs = |t: f64| g_of_t(params, t).unwrap().norm();
    let mut i = 1;
    while !(abs(i as f64 * dt) <= abs((i - 1) as f64 * dt) && abs(i as f64 * dt) <= abs((i + 1) as f64 * dt)) {
        i += 1;
    }
    golden_section_max(|t| -abs(t), (i - 1) as f64 * dt, (i + 1) as f64 * dt, 1e-12).x
}

#[test]
fn first_zero_matches_closed_form() {
    // on resonance G = e^{-t/2}[cos(wt/2) + sin(wt/2)/w], w = sqrt(2γ - 1)
    let gamma = 1000.0;
    let params = JcmParams::scaled(gamma, 0.0).unwrap();
    let w = (2.0 * gamma - 1.0f64).sqrt();
    let exact = 2.0 * (std::f64::consts::PI - w.atan()) / w;
    let coarse = first_zero(&params, 1e-4);
    let fine = first_zero(&params, 5e-5);
    assert!((coarse - fine).abs() < 1e-6);
    assert!((fine - exact).abs() < 1e-6, "{fine} vs {exact}");
}

#[test]
fn quantum_capacity_onset_near_three() {
    // γ/λ = 20: M_Q^max stays zero for small detuning and turns on near δ/λ ≈ 3
    let grid = TimeGrid::adaptive(1e-3, 1e-8, 0.0, 1000.0).unwrap();
    let m = |delta: f64| m_max(&q_series(20.0, delta, &grid)).value;
    assert!(m(2.5) < 1e-9, "{}", m(2.5));
    assert!(m(3.5) > 1e-4, "{}", m(3.5));
    assert!(m(0.0) < 1e-9);
}

#[test]
fn measures_converge_under_dt_halving() {
    for delta in [0.0, 40.0] {
        let a = q_series(1000.0, delta, &TimeGrid::adaptive(1e-4, 1e-8, 0.0, 1000.0).unwrap());
        let b = q_series(1000.0, delta, &TimeGrid::adaptive(5e-5, 1e-8, 0.0, 1000.0).unwrap());
        let pairs = [
            (m_avg(&a).unwrap().value, m_avg(&b).unwrap().value),
            (m_max(&a).value, m_max(&b).value),
            (m_infty(&a).value, m_infty(&b).value),
        ];
        for (x, y) in pairs {
            assert!((x - y).abs() / y < 1e-3, "δ={delta}: {x} vs {y}");
        }
    }
}

#[test]
fn strong_coupling_region_is_bright() {
    let grid = TimeGrid::fixed(2e-3, 30.0).unwrap();
    let spec = ScanSpec {
        x: Axis::log(0.1, 100.0, 6),
        y: Axis::log(0.1, 1000.0, 5),
        measure: MeasureKind::MAvg,
        process: Process::Jcm { grid, capacity: CapacityKind::Quantum },
        workers: 1,
    };
    let r = jcm_scan(&spec).unwrap();
    // weak coupling near resonance has no revival; the brightest cells sit
    // at the strongest coupling and moderate detuning
    assert!(r.rows().take(3).all(|row| row[..4].iter().all(|&v| v < 1e-9)));
    let top = r.rows().last().unwrap();
    let bottom_max = r.rows().next().unwrap().iter().copied().fold(0.0, f64::max);
    assert!(r.max == top.iter().copied().fold(0.0, f64::max) && r.max > 0.4);
    assert!(r.max > 100.0 * bottom_max);
    assert_eq!(top.iter().position(|&v| v == r.max), Some(4), "{top:?}");
    let (cell, _) = jcm_point(r.x[2], r.y[4], &grid, CapacityKind::Quantum, MeasureKind::MAvg).unwrap();
    assert_eq!(cell, r.get(2, 4));
}
