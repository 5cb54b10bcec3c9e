use pibus::network::{
    coefficient_sum_on_qubit, interaction_hamiltonian, network_on_off_ratio, residual_on_last_qubit, ArchitectureState,
};

#[test]
fn closed_form_residual_equals_the_operator_coefficient_sum() {
    let lambda_off = 2.05e-11;
    for n in 2..=12 {
        let h = interaction_hamiltonian(&ArchitectureState::uniform(n, lambda_off).unwrap()).unwrap();
        let explicit = coefficient_sum_on_qubit(&h, n).unwrap();
        let closed = residual_on_last_qubit(n, lambda_off).unwrap();
        assert!(
            (explicit - closed).abs() <= 1e-15 * closed.abs(),
            "{n}: {explicit} vs {closed}"
        );
    }
}

#[test]
fn ratio_scales_with_the_number_of_pairs() {
    let (on, off) = (1.4e-3, 2e-11);
    let pair = network_on_off_ratio(2, on, off).unwrap();
    for n in [3, 10, 100, 1000] {
        let r = network_on_off_ratio(n, on, off).unwrap();
        let expected = pair * 2.0 / (n * (n - 1)) as f64;
        assert!((r - expected).abs() < 1e-12 * expected);
    }
}

#[test]
fn interaction_is_hermitian_and_real() {
    let s = ArchitectureState::from_fn(5, |k, l| 1e-3 * (k + 2 * l) as f64).unwrap();
    let h = interaction_hamiltonian(&s).unwrap();
    assert!(h.hermiticity_error() < 1e-15);
    assert!(h.matrix().is_real(0.0));
    // qubit 4 couples to 5 with weight 4
    assert_eq!(s.pair_coefficient(4, 5), 4.0 * s.coupling(4, 5));
}
