use serde::Serialize;

use crate::bus::{build_hamiltonian, BusParams, ModelVariant};
use crate::error::Result;

/// Number of interaction vertices on a path.
const ORDER: usize = 6;
const DEGENERACY_TOL: f64 = 1e-12;

/// A sequence of bare product states connecting `|1,0>|0>_bus` to
/// `|0,1>|0>_bus`, with its perturbative weight
/// `prod <m_{i+1}|V|m_i> / prod (E_0 - E_{m_i})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VirtualPath {
    /// Occupations `[q_a, q_b, f_1, f_2, C_1, C_2, C_3]`, endpoints included.
    pub states: Vec<Vec<usize>>,
    pub amplitude: f64,
}

/// Enumerates all sixth-order paths between the two one-excitation data
/// states through intermediate states not degenerate with them, ranked by
/// `|amplitude|`. With `counter_rotating = false` every matrix element that
/// changes the total excitation number is dropped first.
pub fn virtual_path_weights(params: &BusParams, counter_rotating: bool, max_paths: usize) -> Result<Vec<VirtualPath>> {
    let h = build_hamiltonian(params, ModelVariant::Full)?;
    let space = h.space().clone();
    let n = h.dim();
    let excitations: Vec<usize> = (0..n).map(|i| space.occupation_of(i).iter().sum()).collect();
    let diag: Vec<f64> = h.matrix().diagonal().iter().map(|d| d.re).collect();
    let adjacency: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| {
            h.matrix()
                .row(i)
                .filter(|&(j, _)| j != i)
                .filter(|&(j, _)| counter_rotating || excitations[i] == excitations[j])
                .map(|(j, v)| (j, v.re))
                .collect()
        })
        .collect();

    let start = space.index_of(&[1, 0, 0, 0, 0, 0, 0])?;
    let end = space.index_of(&[0, 1, 0, 0, 0, 0, 0])?;
    let e0 = diag[start];

    let mut found = Vec::new();
    let mut stack = vec![start];
    fn walk(
        stack: &mut Vec<usize>,
        amp: f64,
        end: usize,
        e0: f64,
        diag: &[f64],
        adjacency: &[Vec<(usize, f64)>],
        found: &mut Vec<(Vec<usize>, f64)>,
    ) {
        let here = *stack.last().unwrap();
        if stack.len() == ORDER {
            if let Some(&(_, v)) = adjacency[here].iter().find(|&&(j, _)| j == end) {
                let mut path = stack.clone();
                path.push(end);
                found.push((path, amp * v));
            }
            return;
        }
        for &(next, v) in &adjacency[here] {
            let denom = e0 - diag[next];
            if denom.abs() < DEGENERACY_TOL || stack.contains(&next) {
                continue;
            }
            stack.push(next);
            walk(stack, amp * v / denom, end, e0, diag, adjacency, found);
            stack.pop();
        }
    }
    walk(&mut stack, 1.0, end, e0, &diag, &adjacency, &mut found);

    found.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()).then_with(|| a.0.cmp(&b.0)));
    found.truncate(max_paths);
    Ok(found
        .into_iter()
        .map(|(path, amplitude)| VirtualPath {
            states: path.into_iter().map(|i| space.occupation_of(i)).collect(),
            amplitude,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_path_without_flux_coupling() {
        let p = BusParams::default().with_n_ph(2);
        assert!(virtual_path_weights(&p, true, 10).unwrap().is_empty());
    }

    #[test]
    fn dominant_path_hops_through_every_bus_element() {
        let p = BusParams::default().with_lambda_s_ratio(0.3).with_n_ph(2);
        let paths = virtual_path_weights(&p, true, 5).unwrap();
        let expected: Vec<Vec<usize>> = vec![
            vec![1, 0, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 1, 0, 0],
            vec![0, 0, 1, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 0, 1],
            vec![0, 0, 0, 1, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 1, 0],
            vec![0, 1, 0, 0, 0, 0, 0],
        ];
        assert_eq!(paths[0].states, expected);
        let (l, ls) = (p.lambda, p.lambda_s1);
        let amp = l * l * ls.powi(4) / (-2.0f64).powi(5);
        assert!((paths[0].amplitude - amp).abs() < 1e-12 * amp.abs());
    }
}
