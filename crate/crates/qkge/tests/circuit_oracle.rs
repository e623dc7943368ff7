//! Property-based agreement between the in-place simulator and the dense
//! matrix oracle, over randomized circuits and parameters.

mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qkge::ansatz::{apply_ansatz, apply_ansatz_inverse, embed_entity, AnsatzShape};
use qkge::simulator::StateVector;

/// One randomly chosen gate for sequence tests.
#[derive(Clone, Debug)]
enum Gate {
    H(usize),
    Rz(usize, f64),
    Ry(usize, f64),
    Rot(usize, f64, f64, f64),
    Cnot(usize, usize),
}

fn gate_strategy(n_qubits: usize) -> impl Strategy<Value = Gate> {
    let angle = -7.0..7.0f64;
    let q = 0..n_qubits;
    if n_qubits == 1 {
        prop_oneof![
            q.clone().prop_map(Gate::H),
            (q.clone(), angle.clone()).prop_map(|(q, a)| Gate::Rz(q, a)),
            (q.clone(), angle.clone()).prop_map(|(q, a)| Gate::Ry(q, a)),
            (q, angle.clone(), angle.clone(), angle).prop_map(|(q, a, b, c)| Gate::Rot(q, a, b, c)),
        ]
        .boxed()
    } else {
        prop_oneof![
            q.clone().prop_map(Gate::H),
            (q.clone(), angle.clone()).prop_map(|(q, a)| Gate::Rz(q, a)),
            (q.clone(), angle.clone()).prop_map(|(q, a)| Gate::Ry(q, a)),
            (q.clone(), angle.clone(), angle.clone(), angle)
                .prop_map(|(q, a, b, c)| Gate::Rot(q, a, b, c)),
            (q.clone(), 1..n_qubits)
                .prop_map(move |(control, offset)| Gate::Cnot(control, (control + offset) % n_qubits)),
        ]
        .boxed()
    }
}

fn apply_to_simulator(state: &mut StateVector, gate: &Gate) {
    match *gate {
        Gate::H(q) => state.apply_hadamard(q).unwrap(),
        Gate::Rz(q, a) => state.apply_rz(q, a).unwrap(),
        Gate::Ry(q, a) => state.apply_ry(q, a).unwrap(),
        Gate::Rot(q, a, b, c) => state.apply_rot(q, a, b, c).unwrap(),
        Gate::Cnot(c_, t) => state.apply_cnot(c_, t).unwrap(),
    }
}

fn gate_matrix(n_qubits: usize, gate: &Gate) -> Matrix {
    match *gate {
        Gate::H(q) => single_qubit_matrix(n_qubits, q, &hadamard2()),
        Gate::Rz(q, a) => single_qubit_matrix(n_qubits, q, &rz_matrix(a)),
        Gate::Ry(q, a) => single_qubit_matrix(n_qubits, q, &ry_matrix(a)),
        Gate::Rot(q, a, b, c) => single_qubit_matrix(n_qubits, q, &rot_matrix(a, b, c)),
        Gate::Cnot(c_, t) => cnot_matrix(n_qubits, c_, t),
    }
}

/// A register width together with a random gate sequence on it.
fn circuit_strategy() -> impl Strategy<Value = (usize, Vec<Gate>)> {
    (1usize..=3).prop_flat_map(|n_qubits| {
        proptest::collection::vec(gate_strategy(n_qubits), 1..25)
            .prop_map(move |gates| (n_qubits, gates))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_gate_sequences_match_the_matrix_oracle(
        (n_qubits, gates) in circuit_strategy(),
        basis_seed in any::<usize>(),
    ) {
        let mut state = StateVector::basis(n_qubits, basis_seed % (1 << n_qubits)).unwrap();
        let mut oracle: Vec<Complex64> = state.amplitudes().to_vec();
        for gate in &gates {
            apply_to_simulator(&mut state, gate);
            oracle = mat_vec(&gate_matrix(n_qubits, gate), &oracle);
        }
        prop_assert!(max_state_diff(&state, &oracle) < 1e-10);
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ansatz_circuit_matches_its_oracle_unitary(
        n_qubits in 1usize..=3,
        n_layers in 0usize..=3,
        seed in any::<u64>(),
        basis_index in any::<usize>(),
    ) {
        let shape = AnsatzShape::new(n_qubits, n_layers).unwrap();
        let params = random_params(shape, seed);
        let unitary = ansatz_matrix(&params);
        prop_assert!(unitarity_defect(&unitary) < 1e-10);

        let mut state = StateVector::basis(n_qubits, basis_index % (1 << n_qubits)).unwrap();
        let expected = mat_vec(&unitary, state.amplitudes());
        apply_ansatz(&mut state, &params).unwrap();
        prop_assert!(max_state_diff(&state, &expected) < 1e-10);
    }

    #[test]
    fn inverse_ansatz_matches_the_conjugate_transpose(
        n_qubits in 1usize..=3,
        n_layers in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let shape = AnsatzShape::new(n_qubits, n_layers).unwrap();
        let params = random_params(shape, seed);
        let adjoint = dagger(&ansatz_matrix(&params));

        let mut state = StateVector::zero(n_qubits).unwrap();
        state.apply_hadamard_all();
        let expected = mat_vec(&adjoint, state.amplitudes());
        apply_ansatz_inverse(&mut state, &params).unwrap();
        prop_assert!(max_state_diff(&state, &expected) < 1e-10);
    }

    #[test]
    fn entity_embedding_matches_the_oracle_pipeline(
        n_qubits in 1usize..=3,
        n_layers in 1usize..=2,
        seed in any::<u64>(),
    ) {
        let shape = AnsatzShape::new(n_qubits, n_layers).unwrap();
        let params = random_params(shape, seed);
        let state = embed_entity(&params);
        let oracle = embed_entity_oracle(&params);
        prop_assert!(max_state_diff(&state, &oracle) < 1e-10);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(
        seed_a in any::<u64>(),
        seed_b in any::<u64>(),
    ) {
        let shape = AnsatzShape::new(2, 2).unwrap();
        let a = embed_entity(&random_params(shape, seed_a));
        let b = embed_entity(&random_params(shape, seed_b));
        let ab = a.fidelity(&b).unwrap();
        let ba = b.fidelity(&a).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&ab));
    }
}
