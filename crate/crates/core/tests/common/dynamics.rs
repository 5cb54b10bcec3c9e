use faer::{c64, Mat};
use pibus::bus::{
    build_direct_coupling, build_hamiltonian, coupling_operators, direct_coupling_operators, BusParams, ModelVariant,
};
use pibus::dynamics::{
    dressed_jump_operators, mesolve, rate_channels, unitary_evolve, DecoherenceParams, LindbladModel, SolverOptions,
};
use pibus::gates::{dressed_model, gate_from_dressed, sqrt_iswap_time, GateOptions};
use pibus::ops::basis_ket;
use pibus::spectral::diagonalize;
use pibus::units::Units;

pub fn projector(amps: &[c64]) -> Mat<c64> {
    Mat::from_fn(amps.len(), amps.len(), |i, j| amps[i] * amps[j].conj())
}

fn fixed_fock(decoherence: bool) -> GateOptions {
    let opts = GateOptions {
        auto_fock: false,
        ..GateOptions::default()
    };
    if decoherence {
        opts
    } else {
        GateOptions {
            decoherence: None,
            ..opts
        }
    }
}

/// Largest deviation of an uncoupled qubit's excited population and
/// coherence from `exp(-Gamma_1 t)` and `exp(-Gamma_1 t / 2 - Gamma_phi t)`.
/// Short lifetimes keep the integration span small.
pub fn decay_error() -> f64 {
    let dec = DecoherenceParams {
        data_t1_us: 0.002,
        data_tphi_us: 0.003,
        ..DecoherenceParams::default()
    };
    let units = Units::default();
    let h = build_direct_coupling(0.0, 1.0).unwrap();
    let spec = diagonalize(&h, None).unwrap();
    let params = BusParams::default();
    let rated = rate_channels(direct_coupling_operators().unwrap(), Some(&dec), &params, &units).unwrap();
    let model = LindbladModel::dressed(&spec, dressed_jump_operators(&spec, &rated, 4).unwrap()).unwrap();

    let idx = |occ: &[usize]| -> usize {
        let k = basis_ket(h.space(), occ).unwrap();
        let o = spec.overlaps(&k);
        (0..4)
            .max_by(|&a, &b| o[a].norm().partial_cmp(&o[b].norm()).unwrap())
            .unwrap()
    };
    let (g, e) = (idx(&[0, 0]), idx(&[1, 0]));
    let gamma1 = units.rate_from_lifetime_us(dec.data_t1_us);
    let gamma_phi = units.rate_from_lifetime_us(dec.data_tphi_us);

    let mut plus = vec![c64::new(0.0, 0.0); 4];
    plus[g] = c64::new(0.5f64.sqrt(), 0.0);
    plus[e] = c64::new(0.5f64.sqrt(), 0.0);
    let times: Vec<f64> = [0.2, 1.0, 3.0].iter().map(|x| x / gamma1).collect();
    let tr = mesolve(&model, &projector(&plus), &times, &SolverOptions::default()).unwrap();
    let mut err: f64 = 0.0;
    for (i, &t) in times.iter().enumerate() {
        let p_e = tr.states[i][(e, e)].re;
        let coh = tr.states[i][(g, e)].norm();
        err = err
            .max((p_e - 0.5 * (-gamma1 * t).exp()).abs())
            .max((coh - 0.5 * (-0.5 * gamma1 * t - gamma_phi * t).exp()).abs());
    }
    err
}

pub struct GateStateCheck {
    pub trace: f64,
    pub hermiticity: f64,
    pub min_eigenvalue: f64,
}

/// Evolves `(|01> + |10>)/sqrt 2` through a dissipative bus gate.
pub fn gate_state_check(ratio: f64) -> GateStateCheck {
    let p = BusParams::default().with_lambda_s_ratio(ratio);
    let opts = fixed_fock(true);
    let dm = dressed_model(&p, &opts).unwrap();
    let rated = rate_channels(
        coupling_operators(&dm.params).unwrap(),
        opts.decoherence.as_ref(),
        &dm.params,
        &opts.units,
    )
    .unwrap();
    let jumps = dressed_jump_operators(&dm.spectrum, &rated, dm.spectrum.len()).unwrap();
    let model = LindbladModel::dressed(&dm.spectrum, jumps).unwrap();
    let c = dm.logical.coefficients();
    let amps: Vec<c64> = (0..c.nrows())
        .map(|k| (c[(k, 2)] + c[(k, 3)]) * 0.5f64.sqrt())
        .collect();
    let t = sqrt_iswap_time(dm.lambda_xx).unwrap();
    let times = [0.25 * t, 0.5 * t, t];
    let tr = mesolve(&model, &projector(&amps), &times, &SolverOptions::default()).unwrap();
    GateStateCheck {
        trace: (0..times.len())
            .map(|i| (tr.trace(i).re - 1.0).abs())
            .fold(0.0, f64::max),
        hermiticity: tr.hermiticity_error(),
        min_eigenvalue: tr.min_eigenvalue(),
    }
}

/// Largest difference in logical-state populations between the rate-free
/// master equation and Schrodinger evolution of the full Hamiltonian.
pub fn zero_rate_vs_unitary(ratio: f64) -> f64 {
    let p = BusParams::default().with_lambda_s_ratio(ratio);
    let dm = dressed_model(&p, &fixed_fock(false)).unwrap();
    let model = LindbladModel::dressed(&dm.spectrum, Vec::new()).unwrap();
    let c = dm.logical.coefficients();
    let amps: Vec<c64> = (0..c.nrows()).map(|k| c[(k, 2)]).collect();
    let t = sqrt_iswap_time(dm.lambda_xx).unwrap();
    let times = [0.3 * t, t, 2.0 * t];
    let me = mesolve(&model, &projector(&amps), &times, &SolverOptions::default()).unwrap();

    let h = build_hamiltonian(&dm.params, ModelVariant::Full).unwrap();
    let un = unitary_evolve(&h, &dm.logical.states()[2], &times).unwrap();
    let mut err: f64 = 0.0;
    for (i, psi) in un.states.iter().enumerate() {
        for l in 0..4 {
            let p_unitary = dm.logical.states()[l].inner(psi).norm_sqr();
            let rho = &me.states[i];
            let mut p_me = c64::new(0.0, 0.0);
            for a in 0..c.nrows() {
                for b in 0..c.nrows() {
                    p_me += c[(a, l)].conj() * rho[(a, b)] * c[(b, l)];
                }
            }
            err = err.max((p_unitary - p_me.re).abs());
        }
    }
    err
}

/// Relative change of the gate fidelity when 20 more dressed states are kept.
pub fn truncation_shift(ratio: f64) -> f64 {
    let p = BusParams::default().with_lambda_s_ratio(ratio);
    let base = fixed_fock(true);
    let wide = GateOptions {
        truncation: base.truncation + 20,
        ..base.clone()
    };
    let f0 = gate_from_dressed(&dressed_model(&p, &base).unwrap(), &base)
        .unwrap()
        .f_avg;
    let f1 = gate_from_dressed(&dressed_model(&p, &wide).unwrap(), &wide)
        .unwrap()
        .f_avg;
    (f0 - f1).abs() / f1
}
