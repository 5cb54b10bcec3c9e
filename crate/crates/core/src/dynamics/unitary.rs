use faer::c64;

use crate::error::{Error, Result};
use crate::ops::{Ket, Operator};
use crate::spectral::diagonalize;

#[derive(Clone, Debug)]
pub struct KetTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Ket>,
}

/// `|psi(t)> = sum_k exp(-i E_k t) |k><k|psi0>`
pub fn unitary_evolve(h: &Operator, psi0: &Ket, times: &[f64]) -> Result<KetTrajectory> {
    if psi0.dim() != h.dim() {
        return Err(Error::invalid("state and Hamiltonian dimensions differ"));
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!("initial state has norm {}", psi0.norm())));
    }
    let spec = diagonalize(h, None)?;
    let coeff = spec.overlaps(psi0);
    let u = spec.vectors();
    let e = spec.energies();
    let states = times
        .iter()
        .map(|&t| {
            let ck: Vec<c64> = coeff
                .iter()
                .zip(e)
                .map(|(c, &ek)| c * c64::from_polar(1.0, -ek * t))
                .collect();
            let amps = (0..spec.dim())
                .map(|i| ck.iter().enumerate().map(|(k, c)| u[(i, k)] * c).sum())
                .collect();
            Ket::new(h.space().clone(), amps)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KetTrajectory {
        times: times.to_vec(),
        states,
    })
}
