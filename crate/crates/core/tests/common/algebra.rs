use std::sync::Arc;

use faer::{c64, Mat};
use pibus::bus::{build_hamiltonian, coupling_operators, BusParams, ModelVariant};
use pibus::ops::{embed, embed_named, local_operator, CompositeSpace, LocalOp, Operator, SubsystemSpec};
use pibus::spectral::diagonalize;

pub fn space(dims: &[usize]) -> Arc<CompositeSpace> {
    let subs = dims
        .iter()
        .enumerate()
        .map(|(i, &d)| match d {
            2 => SubsystemSpec::qubit(format!("q{i}")),
            3 => SubsystemSpec::qutrit(format!("t{i}")),
            n => SubsystemSpec::mode(format!("m{i}"), n - 1).unwrap(),
        })
        .collect();
    Arc::new(CompositeSpace::new(subs).unwrap())
}

pub fn random_local(dim: usize, seed: &[f64]) -> Mat<c64> {
    Mat::from_fn(dim, dim, |i, j| {
        let k = (i * dim + j) % seed.len();
        c64::new(seed[k], seed[(k + 1) % seed.len()] - 0.5)
    })
}

fn max_diff(a: &Operator, b: &Operator) -> f64 {
    (a - b).matrix().max_abs()
}

/// Largest deviation of embedding from preserving products, sums and
/// adjoints of two local operators on subsystem `idx`.
pub fn homomorphism_error(dims: &[usize], idx: usize, seed_a: &[f64], seed_b: &[f64]) -> f64 {
    let s = space(dims);
    let d = dims[idx];
    let (a, b) = (random_local(d, seed_a), random_local(d, seed_b));
    let ea = embed(&a, idx, &s).unwrap();
    let eb = embed(&b, idx, &s).unwrap();
    let prod = embed(&(&a * &b), idx, &s).unwrap();
    let sum = embed(&(&a + &b), idx, &s).unwrap();
    let adj = embed(&a.adjoint().to_owned(), idx, &s).unwrap();
    max_diff(&prod, &(&ea * &eb))
        .max(max_diff(&sum, &(&ea + &eb)))
        .max(max_diff(&adj, &ea.adjoint()))
}

/// Norm of the commutator of operators embedded on subsystems 0 and 1.
pub fn cross_commutator(dims: &[usize], seed_a: &[f64], seed_b: &[f64]) -> f64 {
    let s = space(dims);
    let ea = embed(&random_local(dims[0], seed_a), 0, &s).unwrap();
    let eb = embed(&random_local(dims[1], seed_b), 1, &s).unwrap();
    ea.commutator(&eb).matrix().max_abs()
}

/// Worst Hermiticity error of the Hamiltonian and its coupling channels.
pub fn hamiltonian_hermiticity(p: &BusParams, variant: ModelVariant) -> f64 {
    let h = build_hamiltonian(p, variant).unwrap();
    coupling_operators(p)
        .unwrap()
        .iter()
        .map(|ch| ch.operator.hermiticity_error())
        .fold(h.hermiticity_error(), f64::max)
}

/// Deviation from `[a, a^dag] = 1 - (n_ph + 1)|n_ph><n_ph|` and `n = a^dag a`.
pub fn ladder_error(n_ph: usize) -> f64 {
    let s = space(&[n_ph + 1]);
    let a = embed_named(LocalOp::Annihilate, 0, &s).unwrap();
    let c = a.commutator(&a.adjoint());
    let mut expected = Mat::<c64>::identity(n_ph + 1, n_ph + 1);
    expected[(n_ph, n_ph)] = c64::new(-(n_ph as f64), 0.0);
    let mut err: f64 = 0.0;
    for i in 0..=n_ph {
        for j in 0..=n_ph {
            err = err.max((c.get(i, j) - expected[(i, j)]).norm());
        }
    }
    let n = embed_named(LocalOp::Number, 0, &s).unwrap();
    err.max(max_diff(&n, &(&a.adjoint() * &a)))
}

pub struct EigenCheck {
    pub orthonormality: f64,
    pub residual: f64,
    pub sorted: bool,
}

pub fn eigen_check(ratio: f64, n_ph: usize) -> EigenCheck {
    let p = BusParams::default().with_lambda_s_ratio(ratio).with_n_ph(n_ph);
    let h = build_hamiltonian(&p, ModelVariant::Full).unwrap();
    let s = diagonalize(&h, Some(40)).unwrap();
    EigenCheck {
        orthonormality: s.orthonormality_error(),
        residual: s.residual(&h),
        sorted: s.energies().windows(2).all(|w| w[0] <= w[1]),
    }
}

/// Deviation from `X^2 = Z^2 = 1`, `XZ = -ZX` and `sigma_+ + sigma_- = X`.
pub fn pauli_error() -> f64 {
    let sx = local_operator(LocalOp::SigmaX, 2).unwrap();
    let sz = local_operator(LocalOp::SigmaZ, 2).unwrap();
    let sp = local_operator(LocalOp::SigmaPlus, 2).unwrap();
    let sm = local_operator(LocalOp::SigmaMinus, 2).unwrap();
    let id = Mat::<c64>::identity(2, 2);
    let (xx, zz, xz, zx) = (&sx * &sx, &sz * &sz, &sx * &sz, &sz * &sx);
    let mut err: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            err = err
                .max((xx[(i, j)] - id[(i, j)]).norm())
                .max((zz[(i, j)] - id[(i, j)]).norm())
                .max((xz[(i, j)] + zx[(i, j)]).norm())
                .max((sp[(i, j)] + sm[(i, j)] - sx[(i, j)]).norm());
        }
    }
    err
}
