use faer::{c64, Mat};

use super::coupling::{bus_couplings, data_basis, data_bus_product};
use super::eigen::diagonalize;
use crate::bus::{build_hamiltonian, full_space, BusParams, ModelVariant};
use crate::error::{Error, Result};
use crate::ops::{Ket, Operator};

/// Weight in range(P) treated as "inside" / "outside" when sorting the
/// eigenvectors of `H0` into sectors.
const SECTOR_TOL: f64 = 1e-8;
const DENOMINATOR_TOL: f64 = 1e-9;

/// Lowest-order Schrieffer–Wolff effective Hamiltonian on range(P),
/// `P H0 P + 1/2 P [S, V] P` with `[H0, S] = P V Q + Q V P`.
///
/// `p_basis` is an orthonormal basis of range(P); the result is expressed in
/// it. Only the P–Q blocks of `V` enter at this order, so a Q–Q block is
/// allowed and ignored. A P–P block is rejected.
pub fn schrieffer_wolff(h0: &Operator, v: &Operator, p_basis: &[Ket]) -> Result<Mat<c64>> {
    let np = p_basis.len();
    if np == 0 {
        return Err(Error::invalid("empty P subspace"));
    }
    for (a, ka) in p_basis.iter().enumerate() {
        for (b, kb) in p_basis.iter().enumerate() {
            let target = if a == b { 1.0 } else { 0.0 };
            if (ka.inner(kb) - c64::new(target, 0.0)).norm() > 1e-10 {
                return Err(Error::invalid("P basis is not orthonormal"));
            }
        }
    }
    let scale = v.matrix().max_abs().max(1.0);
    for ka in p_basis {
        let vk = v.apply(ka);
        for kb in p_basis {
            if kb.inner(&vk).norm() > 1e-10 * scale {
                return Err(Error::invalid("V has a nonzero block inside range(P)"));
            }
        }
    }

    let spec = diagonalize(h0, None)?;
    let u = spec.vectors();
    let n = spec.len();
    // overlaps[a][k] = <p_a | k>
    let overlaps: Vec<Vec<c64>> = p_basis
        .iter()
        .map(|p| spec.overlaps(p).iter().map(|x| x.conj()).collect())
        .collect();
    let mut in_p = Vec::new();
    let mut in_q = Vec::new();
    for k in 0..n {
        let w: f64 = overlaps.iter().map(|o| o[k].norm_sqr()).sum();
        if w > 1.0 - SECTOR_TOL {
            in_p.push(k);
        } else if w < SECTOR_TOL {
            in_q.push(k);
        } else {
            return Err(Error::invalid(format!(
                "H0 does not commute with P (eigenstate {k} has weight {w:.3e} in P)"
            )));
        }
    }
    if in_p.len() != np {
        return Err(Error::invalid(format!(
            "found {} eigenstates of H0 in P, expected {np}",
            in_p.len()
        )));
    }

    let e = spec.energies();
    let pvec = Mat::<c64>::from_fn(u.nrows(), np, |i, j| u[(i, in_p[j])]);
    let vp = v.matrix().mul_dense(&pvec);
    let w = u.adjoint() * &vp; // w[q, i] = <q|V|p_i>

    let mut small = Vec::new();
    for (i, &pi) in in_p.iter().enumerate() {
        for &q in &in_q {
            if w[(q, i)].norm() > 1e-14 && (e[pi] - e[q]).abs() < DENOMINATOR_TOL {
                small.push((pi, q, e[pi] - e[q]));
            }
        }
    }
    if !small.is_empty() {
        return Err(Error::SmallDenominator { pairs: small });
    }

    let mut heff = Mat::<c64>::zeros(np, np);
    for (i, &pi) in in_p.iter().enumerate() {
        heff[(i, i)] += c64::new(e[pi], 0.0);
        for (j, &pj) in in_p.iter().enumerate() {
            let mut acc = c64::new(0.0, 0.0);
            for &q in &in_q {
                let term = w[(q, i)].conj() * w[(q, j)];
                acc += term * (0.5 / (e[pi] - e[q]) + 0.5 / (e[pj] - e[q]));
            }
            heff[(i, j)] += acc;
        }
    }
    // b[a, i] = <p_a | p_i eigen>
    let b = Mat::<c64>::from_fn(np, np, |a, i| overlaps[a][in_p[i]]);
    Ok(&b * &heff * b.adjoint())
}

/// Effective `sigma_x sigma_x` coupling of the data qubits from the
/// Schrieffer–Wolff Hamiltonian on `{|00>, |01>, |10>, |11>} ⊗ |0~>_bus`.
pub fn effective_coupling_sw(params: &BusParams) -> Result<f64> {
    let bare = BusParams {
        lambda: 0.0,
        ..params.clone()
    };
    let h0 = build_hamiltonian(&bare, ModelVariant::Full)?;
    let h = build_hamiltonian(params, ModelVariant::Full)?;
    let v = &h - &h0;
    let ground = bus_couplings(params, ModelVariant::Full)?.ground();
    let space = full_space(params)?;
    let levels = params.data_levels;
    let p_basis = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .iter()
        .map(|&(a, b)| data_bus_product(&space, &data_basis(levels, a, b), &ground))
        .collect::<Result<Vec<_>>>()?;
    let heff = schrieffer_wolff(&h0, &v, &p_basis)?;
    Ok(heff[(2, 1)].re)
}
