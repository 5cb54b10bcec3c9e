//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary so every criterion is evaluated and reported even
//! when an earlier one fails. The process exits nonzero only when a check
//! cannot be evaluated at all.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::algebra::{
    cross_commutator, eigen_check, hamiltonian_hermiticity, homomorphism_error, ladder_error, pauli_error,
};
use common::dynamics::{decay_error, gate_state_check, truncation_shift, zero_rate_vs_unitary};
use common::rel_diff;
use pibus::bus::{BusParams, ModelVariant};
use pibus::fluxqubit::{switch_analysis_with_ratios, switch_ratios, FluxQubitParams, SwitchAnalysis};
use pibus::gates::{direct_gate_pipeline, gate_pipeline, FidelityResult, GateOptions};
use pibus::network::{
    coefficient_sum_on_qubit, interaction_hamiltonian, network_on_off_ratio, residual_on_last_qubit, ArchitectureState,
};
use pibus::spectral::{converge_fock, effective_coupling_split, effective_coupling_sum, effective_coupling_sw};

type Outcome = Result<(bool, String), String>;

const SWEEP: [f64; 6] = [0.10, 0.15, 0.20, 0.25, 0.30, 0.35];
const FOCK_TOL: f64 = 0.01;
const MAX_N_PH: usize = 7;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn within_factor(x: f64, target: f64, factor: f64) -> bool {
    x.is_finite() && x / target <= factor && target / x <= factor
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn with_fock_policy(p: BusParams) -> Result<BusParams, String> {
    let fc = converge_fock(&p, FOCK_TOL, MAX_N_PH).map_err(err)?;
    let n = p.n_ph.max(fc.n_ph);
    Ok(p.with_n_ph(n))
}

fn fixed_fock() -> GateOptions {
    GateOptions {
        auto_fock: false,
        ..GateOptions::default()
    }
}

fn cross_method() -> Outcome {
    let mut worst = (0.0, 0.0, "");
    let start = Instant::now();
    let mut res = Vec::new();
    for r in SWEEP {
        let p = BusParams::default().with_lambda_s_ratio(r);
        let sum = effective_coupling_sum(&p)
            .map_err(err)?
            .lambda_eff_sum
            .ok_or("no sum")?;
        let split = effective_coupling_split(&p, ModelVariant::Full)
            .map_err(err)?
            .lambda_xx_split
            .ok_or("no split")?;
        let sw = effective_coupling_sw(&p).map_err(err)?;
        res.push((r, sum, split, sw));
    }
    let elapsed = start.elapsed();
    for &(r, sum, split, sw) in &res {
        for (d, name) in [
            (rel_diff(sum, split), "sum/split"),
            (rel_diff(sum, sw), "sum/sw"),
            (rel_diff(split, sw), "split/sw"),
        ] {
            if d > worst.0 {
                worst = (d, r, name);
            }
        }
    }
    let fast = elapsed < Duration::from_secs(60);
    let at = |x: f64| res.iter().find(|row| row.0 == x).unwrap();
    let r35 = at(0.35);
    Ok((
        worst.0 < 0.05 && fast,
        format!(
            "worst pairwise deviation {:.1}% ({} at {}); at 0.35: sum {:.4e}, split {:.4e}, sw {:.4e}; {:.1} s",
            100.0 * worst.0,
            worst.2,
            worst.1,
            r35.1,
            r35.2,
            r35.3,
            elapsed.as_secs_f64()
        ),
    ))
}

fn counter_rotating_boost() -> Outcome {
    let mut ratios = Vec::new();
    for r in SWEEP {
        let p = with_fock_policy(BusParams::default().with_lambda_s_ratio(r))?;
        let split = |v| -> Result<f64, String> {
            effective_coupling_split(&p, v)
                .map_err(err)?
                .lambda_xx_split
                .ok_or_else(|| "no split".into())
        };
        ratios.push((split(ModelVariant::Full)? / split(ModelVariant::BusRwa)?).abs());
    }
    let above_one = ratios.iter().all(|&x| x > 1.0);
    let monotone = ratios.windows(2).all(|w| w[1] > w[0]);
    let boost = ratios[5] / ratios[1];
    let listed: Vec<String> = ratios.iter().map(|x| format!("{x:.2}")).collect();
    Ok((
        above_one && monotone && boost >= 1.2,
        format!("full/rwa = [{}]; 0.35 vs 0.15: x{boost:.2}", listed.join(", ")),
    ))
}

fn operating_point() -> Result<(FidelityResult, Duration), String> {
    let (r, t) = timed(|| gate_pipeline(&BusParams::default().with_lambda_s_ratio(0.32), &GateOptions::default()));
    Ok((r.map_err(err)?, t))
}

fn gate_time(g: &FidelityResult) -> Outcome {
    Ok((
        (10.0..=13.5).contains(&g.t_gate_ns),
        format!(
            "t_gate = {:.3} ns (n_ph {}, lambda_xx {:.5e})",
            g.t_gate_ns, g.n_ph, g.lambda_xx
        ),
    ))
}

fn fidelity(g: &FidelityResult, elapsed: Duration) -> Outcome {
    Ok((
        (0.996..=0.9995).contains(&g.f_avg) && elapsed < Duration::from_secs(600),
        format!("f_avg = {:.6}; {:.1} s", g.f_avg, elapsed.as_secs_f64()),
    ))
}

fn anharmonicity() -> Outcome {
    let p = BusParams::default().with_lambda_s_ratio(0.30);
    let opts = fixed_fock();
    let two = gate_pipeline(&p, &opts).map_err(err)?.f_avg;
    let three = gate_pipeline(&p.clone().with_data_levels(3), &opts).map_err(err)?.f_avg;
    let ideal = GateOptions {
        decoherence: None,
        ..opts
    };
    let three_ideal = gate_pipeline(&p.with_data_levels(3), &ideal).map_err(err)?.f_avg;
    Ok((
        (three - 0.9972).abs() <= 0.0015 && three < two && three_ideal >= 0.9995,
        format!("three-level {three:.6}, two-level {two:.6}, three-level without dissipation {three_ideal:.6}"),
    ))
}

fn transparency() -> Outcome {
    let opts = GateOptions::default();
    let mut worst = (0.0, 0.0);
    for r in [0.10, 0.15, 0.20, 0.25, 0.30, 0.32] {
        let bus = gate_pipeline(&BusParams::default().with_lambda_s_ratio(r), &opts).map_err(err)?;
        let direct = direct_gate_pipeline(bus.lambda_xx, 1.0, &opts).map_err(err)?;
        let d = (bus.f_avg - direct.f_avg).abs();
        if d >= worst.0 {
            worst = (d, r);
        }
    }
    Ok((
        worst.0 < 1e-3,
        format!("max |f_bus - f_direct| = {:.4} pp at {}", 100.0 * worst.0, worst.1),
    ))
}

fn switch_values() -> Result<(f64, f64, SwitchAnalysis), String> {
    let fq = FluxQubitParams::default().at_flux(0.522);
    let (on, off) = switch_ratios(&fq, 12).map_err(err)?;
    let freq = off.omega_f / on.omega_f;
    let dipole = off.dipole / on.dipole;
    let p = with_fock_policy(BusParams::default().with_lambda_s_ratio(0.30))?;
    let s = switch_analysis_with_ratios(&p, freq, dipole).map_err(err)?;
    Ok((freq, dipole, s))
}

fn flux_switch(freq: f64, dipole: f64) -> Outcome {
    Ok((
        (11.0..=17.0).contains(&freq) && (0.04..=0.09).contains(&dipole),
        format!("frequency ratio {freq:.3}, dipole ratio {dipole:.4}"),
    ))
}

fn residuals(s: &SwitchAnalysis) -> Outcome {
    let off = s.lambda_eff_off.abs();
    let single = s.single_off.residual.abs();
    let shift = s.single_off.partner_shift.abs();
    Ok((
        within_factor(off, 2e-11, 10.0)
            && within_factor(s.on_off_ratio, 6e7, 10.0)
            && within_factor(single, 1.5e-7, 3.0)
            && (shift - 9.3e-4).abs() <= 0.2 * 9.3e-4,
        format!(
            "off {off:.3e}, on/off {:.3e}, single-off {single:.3e}, partner shift {shift:.3e}",
            s.on_off_ratio
        ),
    ))
}

fn scaling(s: &SwitchAnalysis) -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=12 {
        let h = interaction_hamiltonian(&ArchitectureState::uniform(n, s.lambda_eff_off).map_err(err)?).map_err(err)?;
        let explicit = coefficient_sum_on_qubit(&h, n).map_err(err)?;
        let closed = residual_on_last_qubit(n, s.lambda_eff_off).map_err(err)?;
        worst = worst.max(rel_diff(explicit, closed));
    }
    let ratio = network_on_off_ratio(100, s.lambda_eff_on, s.lambda_eff_off).map_err(err)?;
    Ok((
        worst <= 4.0 * f64::EPSILON && within_factor(ratio, 12_000.0, 3.0),
        format!("closed form vs explicit sum, N <= 12: {worst:.1e}; N = 100 on/off {ratio:.0}"),
    ))
}

fn dynamics_suite() -> Outcome {
    let decay = decay_error();
    let gate = gate_state_check(0.32);
    let unitary = zero_rate_vs_unitary(0.30);
    let shift = truncation_shift(0.32);
    Ok((
        decay < 1e-6
            && gate.trace < 1e-8
            && gate.hermiticity < 1e-8
            && gate.min_eigenvalue > -1e-8
            && unitary < 1e-8
            && shift < 1e-3,
        format!(
            "decay {decay:.1e}, trace {:.1e}, zero-rate vs unitary {unitary:.1e}, M+20 shift {:.3}%",
            gate.trace,
            100.0 * shift
        ),
    ))
}

fn algebra_suite() -> Outcome {
    let start = Instant::now();
    let seeds: [&[f64]; 3] = [
        &[0.3, -0.7, 0.1, 0.9, -0.2],
        &[-0.4, 0.8, 0.05, -0.6, 0.2, 0.7, -0.9],
        &[1.0, -1.0, 0.5],
    ];
    let shapes: [&[usize]; 5] = [&[2], &[3, 2], &[4, 2, 3], &[2, 3, 4], &[4, 4]];
    let mut hom: f64 = 0.0;
    let mut comm: f64 = 0.0;
    for dims in shapes {
        for idx in 0..dims.len() {
            for a in seeds {
                for b in seeds {
                    hom = hom.max(homomorphism_error(dims, idx, a, b));
                    if dims.len() > 1 {
                        comm = comm.max(cross_commutator(dims, a, b));
                    }
                }
            }
        }
    }
    let mut herm: f64 = 0.0;
    for r in [0.0, 0.1, 0.3, 0.45] {
        for levels in [2, 3] {
            for v in [ModelVariant::Full, ModelVariant::BusRwa] {
                let p = BusParams::default()
                    .with_lambda_s_ratio(r)
                    .with_n_ph(2)
                    .with_data_levels(levels);
                herm = herm.max(hamiltonian_hermiticity(&p, v).abs());
            }
        }
    }
    let ladder = (1..=8).map(ladder_error).fold(0.0, f64::max);
    let (mut ortho, mut resid, mut sorted) = (0.0f64, 0.0f64, true);
    for r in [0.0, 0.2, 0.35] {
        let c = eigen_check(r, 2);
        ortho = ortho.max(c.orthonormality);
        resid = resid.max(c.residual);
        sorted &= c.sorted;
    }
    let pauli = pauli_error();
    let elapsed = start.elapsed();
    Ok((
        hom < 1e-12
            && comm < 1e-12
            && herm < 1e-13
            && ladder < 1e-12
            && ortho < 1e-10
            && resid < 1e-9
            && sorted
            && pauli == 0.0
            && elapsed < Duration::from_secs(30),
        format!(
            "embedding {hom:.1e}, commutator {comm:.1e}, hermiticity {herm:.1e}, ladder {ladder:.1e}, \
             orthonormality {ortho:.1e}, residual {resid:.1e}; {:.1} s",
            elapsed.as_secs_f64()
        ),
    ))
}

fn report(id: usize, title: &str, check: impl FnOnce() -> Outcome, tally: &mut (usize, usize, usize)) {
    let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    match outcome {
        Ok((true, detail)) => {
            tally.0 += 1;
            println!("[PASS] {id:>2} {title}: {detail}");
        }
        Ok((false, detail)) => {
            tally.1 += 1;
            println!("[FAIL] {id:>2} {title}: {detail}");
        }
        Err(e) => {
            tally.2 += 1;
            println!("[FAIL] {id:>2} {title}: error: {e}");
        }
    }
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut tally = (0, 0, 0);
    let gate = operating_point();
    let switch = switch_values();
    let gate_check = |f: fn(&FidelityResult, Duration) -> Outcome| match &gate {
        Ok((g, t)) => f(g, *t),
        Err(e) => Err(e.clone()),
    };
    let switch_check = |f: &dyn Fn(&(f64, f64, SwitchAnalysis)) -> Outcome| match &switch {
        Ok(s) => f(s),
        Err(e) => Err(e.clone()),
    };

    report(1, "cross-method effective coupling", cross_method, &mut tally);
    report(2, "counter-rotating enhancement", counter_rotating_boost, &mut tally);
    report(
        3,
        "gate time at 0.32 omega_c",
        || gate_check(|g, _| gate_time(g)),
        &mut tally,
    );
    report(4, "fidelity with decoherence", || gate_check(fidelity), &mut tally);
    report(5, "three-level data qubits", anharmonicity, &mut tally);
    report(6, "bus transparency", transparency, &mut tally);
    report(
        7,
        "flux-qubit switch",
        || switch_check(&|s| flux_switch(s.0, s.1)),
        &mut tally,
    );
    report(
        8,
        "switch-off residuals",
        || switch_check(&|s| residuals(&s.2)),
        &mut tally,
    );
    report(9, "crosstalk scaling", || switch_check(&|s| scaling(&s.2)), &mut tally);
    report(10, "dynamics sanity", dynamics_suite, &mut tally);
    report(11, "operator algebra", algebra_suite, &mut tally);

    let (pass, fail, errors) = tally;
    println!("acceptance: {pass} passed, {} failed", fail + errors);
    if errors > 0 {
        std::process::exit(1);
    }
}
