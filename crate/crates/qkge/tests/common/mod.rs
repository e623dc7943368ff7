//! Shared fixtures and an independent dense-matrix circuit oracle.
//!
//! The oracle builds full `2^n × 2^n` gate matrices with Kronecker products
//! and multiplies them out explicitly — a deliberately different code path
//! from the simulator's in-place kernels, usable as ground truth for small
//! registers. Index convention matches the simulator: qubit 0 owns the most
//! significant bit of the amplitude index, so qubit 0's gate is the leftmost
//! Kronecker factor.

#![allow(dead_code)]

use std::path::PathBuf;

use num_complex::Complex64;
use qkge::ansatz::{AnsatzShape, ParameterTensor};
use qkge::data::{KnowledgeGraph, Triple, Vocabulary};
use qkge::simulator::StateVector;

/// Directory holding the bundled UMLS split files.
pub fn umls_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/umls")
}

/// A tiny fully-separable graph: three entities, four relations, ten
/// triples, with exactly one tail per `(head, relation)` pair (cycle,
/// identity, reverse cycle, and one extra edge).
pub fn toy_graph() -> KnowledgeGraph {
    let vocab = Vocabulary::from_lists(
        vec!["a".into(), "b".into(), "c".into()],
        vec!["r0".into(), "r1".into(), "r2".into(), "r3".into()],
    )
    .expect("lists are sorted");
    let train = vec![
        Triple::new(0, 0, 1),
        Triple::new(1, 0, 2),
        Triple::new(2, 0, 0),
        Triple::new(0, 1, 0),
        Triple::new(1, 1, 1),
        Triple::new(2, 1, 2),
        Triple::new(0, 2, 2),
        Triple::new(1, 2, 0),
        Triple::new(2, 2, 1),
        Triple::new(0, 3, 1),
    ];
    KnowledgeGraph::from_parts(vocab, train, vec![], vec![])
}

// ---------------------------------------------------------------------------
// Dense-matrix oracle
// ---------------------------------------------------------------------------

pub type Matrix = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| (0..dim).map(|j| c(f64::from(u8::from(i == j)), 0.0)).collect())
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    assert_eq!(a[0].len(), k, "inner dimensions must agree");
    let mut out = vec![vec![c(0.0, 0.0); m]; n];
    for i in 0..n {
        for l in 0..k {
            let a_il = a[i][l];
            for j in 0..m {
                out[i][j] += a_il * b[l][j];
            }
        }
    }
    out
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca) = (a.len(), a[0].len());
    let (rb, cb) = (b.len(), b[0].len());
    let mut out = vec![vec![c(0.0, 0.0); ca * cb]; ra * rb];
    for ia in 0..ra {
        for ja in 0..ca {
            for ib in 0..rb {
                for jb in 0..cb {
                    out[ia * rb + ib][ja * cb + jb] = a[ia][ja] * b[ib][jb];
                }
            }
        }
    }
    out
}

/// Conjugate transpose.
pub fn dagger(m: &Matrix) -> Matrix {
    let rows = m.len();
    let cols = m[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].conj()).collect())
        .collect()
}

pub fn mat_vec(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Largest absolute entry of `a − b`.
pub fn max_matrix_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

/// Largest absolute amplitude difference between two states.
pub fn max_state_diff(a: &StateVector, b: &[Complex64]) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// How far `m` is from unitary: `max |m†m − I|`.
pub fn unitarity_defect(m: &Matrix) -> f64 {
    max_matrix_diff(&matmul(&dagger(m), m), &identity(m.len()))
}

pub fn hadamard2() -> Matrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]]
}

pub fn rz_matrix(angle: f64) -> Matrix {
    vec![
        vec![Complex64::from_polar(1.0, -angle / 2.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), Complex64::from_polar(1.0, angle / 2.0)],
    ]
}

pub fn ry_matrix(angle: f64) -> Matrix {
    let (s, co) = (angle / 2.0).sin_cos();
    vec![vec![c(co, 0.0), c(-s, 0.0)], vec![c(s, 0.0), c(co, 0.0)]]
}

/// `Rot(φ, θ, ω) = RZ(ω) · RY(θ) · RZ(φ)`.
pub fn rot_matrix(phi: f64, theta: f64, omega: f64) -> Matrix {
    matmul(&rz_matrix(omega), &matmul(&ry_matrix(theta), &rz_matrix(phi)))
}

/// Lifts a 2×2 gate on `qubit` to the full register. Qubit 0 is the
/// leftmost Kronecker factor (most significant index bit).
pub fn single_qubit_matrix(n_qubits: usize, qubit: usize, gate: &Matrix) -> Matrix {
    assert!(qubit < n_qubits);
    let left = identity(1 << qubit);
    let right = identity(1 << (n_qubits - 1 - qubit));
    kron(&kron(&left, gate), &right)
}

/// Full-register CNOT as an explicit permutation matrix.
pub fn cnot_matrix(n_qubits: usize, control: usize, target: usize) -> Matrix {
    assert!(control < n_qubits && target < n_qubits && control != target);
    let dim = 1usize << n_qubits;
    let cmask = 1usize << (n_qubits - 1 - control);
    let tmask = 1usize << (n_qubits - 1 - target);
    // The permutation is an involution (flipping the target bit never touches
    // the control bit), so the per-row source column uses the same map.
    let mut out = vec![vec![c(0.0, 0.0); dim]; dim];
    for (row, out_row) in out.iter_mut().enumerate() {
        let col = if row & cmask != 0 { row ^ tmask } else { row };
        out_row[col] = c(1.0, 0.0);
    }
    out
}

/// `H^{⊗n}`.
pub fn hadamard_wall(n_qubits: usize) -> Matrix {
    let mut out = hadamard2();
    for _ in 1..n_qubits {
        out = kron(&out, &hadamard2());
    }
    out
}

/// Full unitary of the layered ansatz, built gate by gate in the same
/// temporal order the simulator uses (later gates multiply from the left).
pub fn ansatz_matrix(params: &ParameterTensor) -> Matrix {
    let shape = params.shape();
    let n = shape.n_qubits();
    let mut total = identity(1 << n);
    for layer in 0..shape.n_layers() {
        for q in 0..n {
            let rot = rot_matrix(
                params.get(layer, q, 0),
                params.get(layer, q, 1),
                params.get(layer, q, 2),
            );
            total = matmul(&single_qubit_matrix(n, q, &rot), &total);
        }
        if let Some(range) = shape.entangler_range(layer) {
            for q in 0..n {
                total = matmul(&cnot_matrix(n, q, (q + range) % n), &total);
            }
        }
    }
    total
}

/// Oracle entity embedding: `ansatz_matrix · H^{⊗n} · |0…0⟩` as raw
/// amplitudes.
pub fn embed_entity_oracle(params: &ParameterTensor) -> Vec<Complex64> {
    let n = params.shape().n_qubits();
    let dim = 1usize << n;
    let mut zero = vec![c(0.0, 0.0); dim];
    zero[0] = c(1.0, 0.0);
    let plus = mat_vec(&hadamard_wall(n), &zero);
    mat_vec(&ansatz_matrix(params), &plus)
}

/// Convenience: random parameter tensor from a seeded RNG.
pub fn random_params(shape: AnsatzShape, seed: u64) -> ParameterTensor {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    ParameterTensor::random_uniform(shape, &mut rng)
}

/// `H_m = 1 + 1/2 + … + 1/m`.
pub fn harmonic(m: usize) -> f64 {
    (1..=m).map(|i| 1.0 / i as f64).sum()
}

/// Uniformly initialized store with identical entity/relation shapes.
pub fn random_store(
    n_entities: usize,
    n_relations: usize,
    n_qubits: usize,
    layers: usize,
    seed: u64,
) -> qkge::model::EmbeddingStore {
    use rand::SeedableRng;
    let shape = AnsatzShape::new(n_qubits, layers).expect("valid shape");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    qkge::model::EmbeddingStore::random(n_entities, n_relations, shape, shape, &mut rng)
        .expect("matching shapes")
}

/// Central finite difference of an example's score with respect to one
/// parameter coordinate, evaluated on perturbed copies of the store.
pub fn finite_difference_score(
    store: &qkge::model::EmbeddingStore,
    example: &qkge::gradient::LabeledExample,
    coord: qkge::gradient::ParamCoord,
    step: f64,
) -> f64 {
    use qkge::gradient::{score_example, ParamTable};
    let eval_at = |delta: f64| {
        let mut perturbed = store.clone();
        match coord.table {
            ParamTable::Entity => {
                perturbed.entity_mut(coord.id).unwrap().values_mut()[coord.index] += delta;
            }
            ParamTable::Relation => {
                perturbed.relation_mut(coord.id).unwrap().values_mut()[coord.index] += delta;
            }
        }
        score_example(&perturbed, example).unwrap()
    };
    (eval_at(step) - eval_at(-step)) / (2.0 * step)
}
