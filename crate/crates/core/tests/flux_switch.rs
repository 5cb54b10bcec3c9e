use pibus::bus::BusParams;
use pibus::fluxqubit::{flux_spectrum, flux_sweep, switch_analysis, switch_analysis_with_ratios, FluxQubitParams};

#[test]
fn transition_rises_and_dipole_falls_away_from_the_symmetric_point() {
    let p = FluxQubitParams::default();
    let grid: Vec<f64> = (0..=15).map(|i| 0.5 + 0.002 * i as f64).collect();
    let sweep: Vec<_> = flux_sweep(&p, &grid, 12).into_iter().map(|r| r.unwrap()).collect();
    for w in sweep.windows(2) {
        assert!(w[1].omega_f > w[0].omega_f, "omega_f at {}", w[1].f);
        assert!(w[1].dipole < w[0].dipole, "dipole at {}", w[1].f);
    }
}

#[test]
fn symmetric_point_is_the_flux_qubit_optimum() {
    let p = FluxQubitParams::default();
    let on = flux_spectrum(&p, 12).unwrap();
    for f in [0.49, 0.51] {
        let s = flux_spectrum(&p.at_flux(f), 12).unwrap();
        assert!(s.omega_f > on.omega_f);
        assert!(s.dipole < on.dipole);
    }
}

#[test]
fn levels_are_converged_in_the_plane_wave_basis() {
    let p = FluxQubitParams::default().at_flux(0.522);
    let a = flux_spectrum(&p, 12).unwrap();
    let b = flux_spectrum(&p, 16).unwrap();
    for k in 0..2 {
        assert!((a.levels[k] - b.levels[k]).abs() < 1e-4 * b.levels[k].abs());
    }
    assert!((a.dipole - b.dipole).abs() < 1e-4 * b.dipole);
}

#[test]
fn switching_off_suppresses_the_coupling() {
    let s = switch_analysis(
        &FluxQubitParams::default().at_flux(0.522),
        &BusParams::default().with_lambda_s_ratio(0.3),
        12,
    )
    .unwrap();
    assert!(s.lambda_eff_off.abs() < 1e-9);
    assert!(s.single_off.residual.abs() < 1e-6);
    assert!(s.on_off_ratio > s.single_off.on_off_ratio);
    assert!(s.single_off.on_off_ratio > 1.0);
    assert!(s.single_off.partner_shift.abs() > 0.0);
}

#[test]
fn off_coupling_follows_the_dipole_ratio_at_weak_coupling() {
    // With only lambda_s scaled, the fourth-order coupling scales as d^4.
    let bus = BusParams::default().with_lambda_s_ratio(0.02);
    let d: f64 = 0.5;
    let s = switch_analysis_with_ratios(&bus, 1.0, d).unwrap();
    assert!((s.on_off_ratio * d.powi(4) - 1.0).abs() < 1e-2, "{}", s.on_off_ratio);
}
