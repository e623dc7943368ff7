//! Layered, strongly-entangling circuit ansatz and its parameter tensors.
//!
//! Each layer applies one composite [`Rot`](crate::simulator::StateVector::apply_rot)
//! rotation per qubit (in ascending qubit order) followed by a ring of CNOTs:
//! in layer `l` every qubit `q` controls a CNOT onto qubit
//! `(q + r_l) mod n`, where the layer's entangler range is
//! `r_l = (l mod (n − 1)) + 1`. Single-qubit registers have no entanglers.
//! The circuit therefore uses exactly `3 · layers · qubits` angles.
//!
//! Entities are embedded as states by running their circuit on the uniform
//! superposition: `|e⟩ = U(α_e) · H^{⊗n} |0…0⟩`. Relations reuse the same
//! ansatz as a plain unitary evolution applied to an already-prepared state.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::simulator::{StateVector, MAX_QUBITS};
use crate::{Error, Result};

/// Architecture of a layered ansatz: register width and layer count.
///
/// A shape with zero layers is a valid, parameter-free identity circuit;
/// this is what an "untrained relation acts as the identity" configuration
/// uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzShape {
    n_qubits: usize,
    n_layers: usize,
}

impl AnsatzShape {
    /// Creates a shape, validating the qubit count.
    pub fn new(n_qubits: usize, n_layers: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(n_qubits));
        }
        Ok(Self { n_qubits, n_layers })
    }

    /// Register width.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of layers (zero means the identity circuit).
    pub fn n_layers(&self) -> usize {
        self.n_layers
    }

    /// Total number of rotation angles: `3 · layers · qubits`.
    pub fn param_count(&self) -> usize {
        3 * self.n_layers * self.n_qubits
    }

    /// CNOT target offset for `layer`: `(layer mod (n − 1)) + 1`.
    ///
    /// Returns `None` for single-qubit registers, which have no entanglers.
    pub fn entangler_range(&self, layer: usize) -> Option<usize> {
        if self.n_qubits < 2 {
            None
        } else {
            Some((layer % (self.n_qubits - 1)) + 1)
        }
    }

    /// Flat index of angle component `component ∈ {0, 1, 2}` (φ, θ, ω) of
    /// `qubit` in `layer`. Layout is layer-major, then qubit, then component.
    pub fn flat_index(&self, layer: usize, qubit: usize, component: usize) -> usize {
        debug_assert!(layer < self.n_layers && qubit < self.n_qubits && component < 3);
        3 * (layer * self.n_qubits + qubit) + component
    }
}

/// The angles of one ansatz instance, stored flat in
/// [`AnsatzShape::flat_index`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterTensor {
    shape: AnsatzShape,
    values: Vec<f64>,
}

impl ParameterTensor {
    /// All-zero angles (the circuit still applies its CNOT rings).
    pub fn zeros(shape: AnsatzShape) -> Self {
        Self {
            shape,
            values: vec![0.0; shape.param_count()],
        }
    }

    /// Wraps explicit values, checking length and finiteness.
    pub fn from_values(shape: AnsatzShape, values: Vec<f64>) -> Result<Self> {
        if values.len() != shape.param_count() {
            return Err(Error::ParameterLengthMismatch {
                expected: shape.param_count(),
                actual: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("parameter value at flat index {pos}"),
            });
        }
        Ok(Self { shape, values })
    }

    /// Draws every angle independently and uniformly from `[0, 2π)`.
    pub fn random_uniform<R: Rng + ?Sized>(shape: AnsatzShape, rng: &mut R) -> Self {
        let values = (0..shape.param_count())
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        Self { shape, values }
    }

    /// Shape of this tensor.
    pub fn shape(&self) -> AnsatzShape {
        self.shape
    }

    /// Flat view of the angles.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mutable flat view of the angles (used by the optimizer).
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Angle `component ∈ {0: φ, 1: θ, 2: ω}` of `qubit` in `layer`.
    pub fn get(&self, layer: usize, qubit: usize, component: usize) -> f64 {
        self.values[self.shape.flat_index(layer, qubit, component)]
    }

    /// A copy with the angle at `flat_index` shifted by `delta`
    /// (the building block of parameter-shift differentiation).
    pub fn shifted(&self, flat_index: usize, delta: f64) -> Result<Self> {
        if flat_index >= self.values.len() {
            return Err(Error::ParamIndexOutOfRange {
                index: flat_index,
                count: self.values.len(),
            });
        }
        let mut out = self.clone();
        out.values[flat_index] += delta;
        Ok(out)
    }
}

/// Runs the layered circuit `U(params)` on `state` in place.
///
/// Gate order within layer `l`: `Rot` on qubits `0, 1, …, n−1`, then CNOTs
/// with control `q` and target `(q + r_l) mod n` for `q = 0, 1, …, n−1`.
pub fn apply_ansatz(state: &mut StateVector, params: &ParameterTensor) -> Result<()> {
    let shape = params.shape();
    let n = shape.n_qubits();
    if state.n_qubits() != n {
        return Err(Error::QubitCountMismatch {
            left: state.n_qubits(),
            right: n,
        });
    }
    for layer in 0..shape.n_layers() {
        for q in 0..n {
            state.apply_rot(
                q,
                params.get(layer, q, 0),
                params.get(layer, q, 1),
                params.get(layer, q, 2),
            )?;
        }
        if let Some(range) = shape.entangler_range(layer) {
            for q in 0..n {
                state.apply_cnot(q, (q + range) % n)?;
            }
        }
    }
    Ok(())
}

/// Runs the exact inverse circuit `U(params)†` on `state` in place.
///
/// This is the forward gate sequence reversed, with every rotation angle
/// negated; `apply_ansatz` followed by `apply_ansatz_inverse` with the same
/// parameters restores the input state up to floating-point error.
pub fn apply_ansatz_inverse(state: &mut StateVector, params: &ParameterTensor) -> Result<()> {
    let shape = params.shape();
    let n = shape.n_qubits();
    if state.n_qubits() != n {
        return Err(Error::QubitCountMismatch {
            left: state.n_qubits(),
            right: n,
        });
    }
    for layer in (0..shape.n_layers()).rev() {
        if let Some(range) = shape.entangler_range(layer) {
            for q in (0..n).rev() {
                state.apply_cnot(q, (q + range) % n)?;
            }
        }
        for q in (0..n).rev() {
            // Rot(φ, θ, ω)† = RZ(−φ)·RY(−θ)·RZ(−ω) = Rot(−ω, −θ, −φ).
            state.apply_rot(
                q,
                -params.get(layer, q, 2),
                -params.get(layer, q, 1),
                -params.get(layer, q, 0),
            )?;
        }
    }
    Ok(())
}

/// Prepares the embedding state `U(params) · H^{⊗n} |0…0⟩`.
pub fn embed_entity(params: &ParameterTensor) -> StateVector {
    let mut state =
        StateVector::zero(params.shape().n_qubits()).expect("shape has a validated qubit count");
    state.apply_hadamard_all();
    apply_ansatz(&mut state, params).expect("state was built with the matching qubit count");
    state
}
