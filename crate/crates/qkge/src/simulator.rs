//! Dense statevector simulator for small qubit registers.
//!
//! A register of `n` qubits is stored as `2^n` complex amplitudes in a
//! [`StateVector`]. Amplitude index `i` encodes the computational basis state
//! whose binary expansion, read from the **most significant bit down**, gives
//! the values of qubits `0, 1, …, n-1`. In other words qubit 0 owns the most
//! significant bit of the index: for two qubits, index `0b10` is the basis
//! state with qubit 0 in `|1⟩` and qubit 1 in `|0⟩`.
//!
//! The gate set is exactly what the embedding circuits need: Hadamard,
//! single-qubit `RZ`/`RY` rotations, the composite `Rot` (a `ZYZ` Euler
//! rotation), and `CNOT`. All gates act in place in `O(2^n)` time; no gate
//! matrices are ever expanded to the full `2^n × 2^n` form.

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest register size accepted by [`StateVector::zero`].
///
/// `2^24` amplitudes (256 MiB as `Complex64`) is a practical ceiling for
/// dense simulation on one machine; typical embedding registers here use
/// 2–4 qubits.
pub const MAX_QUBITS: usize = 24;

/// A pure quantum state over a fixed number of qubits, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state `|0…0⟩`.
    ///
    /// Fails if `n_qubits` is zero or exceeds [`MAX_QUBITS`].
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(n_qubits));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// The computational basis state with amplitude index `index`.
    ///
    /// Qubit 0 corresponds to the most significant bit of `index`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut state = Self::zero(n_qubits)?;
        if index >= state.dim() {
            return Err(Error::BasisIndexOutOfRange {
                index,
                dim: state.dim(),
            });
        }
        state.amps[0] = Complex64::new(0.0, 0.0);
        state.amps[index] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    /// Builds a state directly from amplitudes (for tests and oracles).
    ///
    /// The amplitude count must be a power of two between `2` and
    /// `2^MAX_QUBITS`; the vector is **not** renormalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(n_qubits));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Number of qubits in the register.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Dimension of the state (`2^n_qubits`).
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Read-only view of the amplitudes.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Squared norm `Σ |a_i|²` (1 for any physical state).
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit mask selecting `qubit`'s bit inside an amplitude index.
    ///
    /// Qubit 0 maps to the most significant bit.
    #[inline]
    fn qubit_mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitIndexOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Applies an arbitrary 2×2 matrix `m` (row-major) to `qubit`.
    ///
    /// This is the generic single-qubit kernel; the named gates below either
    /// delegate to it or use a specialized diagonal/permutation path.
    pub fn apply_single_qubit(&mut self, qubit: usize, m: &[[Complex64; 2]; 2]) -> Result<()> {
        self.check_qubit(qubit)?;
        let mask = self.qubit_mask(qubit);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let a0 = self.amps[i];
                let a1 = self.amps[j];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// Applies a Hadamard gate to `qubit`.
    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = [
            [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        ];
        self.apply_single_qubit(qubit, &m)
    }

    /// Applies a Hadamard gate to every qubit (the `H^{⊗n}` wall used to
    /// prepare the uniform superposition from `|0…0⟩`).
    pub fn apply_hadamard_all(&mut self) {
        for q in 0..self.n_qubits {
            self.apply_hadamard(q).expect("qubit index in range");
        }
    }

    /// Applies `RZ(angle) = diag(e^{-i·angle/2}, e^{+i·angle/2})` to `qubit`.
    ///
    /// `RZ` is diagonal, so this multiplies each amplitude by a phase
    /// instead of mixing pairs.
    pub fn apply_rz(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.check_qubit(qubit)?;
        let mask = self.qubit_mask(qubit);
        let half = 0.5 * angle;
        let phase0 = Complex64::from_polar(1.0, -half);
        let phase1 = Complex64::from_polar(1.0, half);
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & mask == 0 { phase0 } else { phase1 };
        }
        Ok(())
    }

    /// Applies the real rotation
    /// `RY(angle) = [[cos(angle/2), -sin(angle/2)], [sin(angle/2), cos(angle/2)]]`
    /// to `qubit`.
    pub fn apply_ry(&mut self, qubit: usize, angle: f64) -> Result<()> {
        let (s, c) = (0.5 * angle).sin_cos();
        let m = [
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ];
        self.apply_single_qubit(qubit, &m)
    }

    /// Applies the composite Euler rotation
    /// `Rot(φ, θ, ω) = RZ(ω) · RY(θ) · RZ(φ)` to `qubit`, i.e. `RZ(φ)`
    /// first in time, then `RY(θ)`, then `RZ(ω)`.
    ///
    /// Implemented as the literal three-gate sequence so it agrees with the
    /// product of the individual gates to the last bit.
    pub fn apply_rot(&mut self, qubit: usize, phi: f64, theta: f64, omega: f64) -> Result<()> {
        self.apply_rz(qubit, phi)?;
        self.apply_ry(qubit, theta)?;
        self.apply_rz(qubit, omega)
    }

    /// Applies a CNOT with the given control and target qubits.
    ///
    /// Swaps the amplitudes of every index pair that differs only in the
    /// target bit while having the control bit set.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::ControlEqualsTarget(control));
        }
        let cmask = self.qubit_mask(control);
        let tmask = self.qubit_mask(target);
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
        Ok(())
    }

    /// Inner product `⟨self|other⟩ = Σ_i conj(self_i) · other_i`.
    ///
    /// Fails if the registers have different sizes.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitCountMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Fidelity `|⟨self|other⟩|²` between two pure states.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_state_has_unit_amplitude_at_index_zero() {
        let s = StateVector::zero(2).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| *a == c(0.0, 0.0)));
        assert_abs_diff_eq!(s.norm_sqr(), 1.0);
    }

    #[test]
    fn zero_state_rejects_bad_qubit_counts() {
        assert!(matches!(
            StateVector::zero(0),
            Err(Error::QubitCountOutOfRange(0))
        ));
        assert!(matches!(
            StateVector::zero(MAX_QUBITS + 1),
            Err(Error::QubitCountOutOfRange(_))
        ));
        assert!(StateVector::zero(1).is_ok());
    }

    #[test]
    fn basis_state_places_amplitude_at_requested_index() {
        let s = StateVector::basis(3, 5).unwrap();
        assert_eq!(s.amplitudes()[5], c(1.0, 0.0));
        assert_abs_diff_eq!(s.norm_sqr(), 1.0);
        assert!(matches!(
            StateVector::basis(2, 4),
            Err(Error::BasisIndexOutOfRange { index: 4, dim: 4 })
        ));
    }

    #[test]
    fn qubit_zero_owns_the_most_significant_bit() {
        // Flipping qubit 0 of |00⟩ (via RY(π), a Y-flip up to sign) must move
        // the amplitude to index 0b10 = 2, not 0b01 = 1.
        let mut s = StateVector::zero(2).unwrap();
        s.apply_ry(0, PI).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[2].norm_sqr(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.amplitudes()[1].norm_sqr(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hadamard_all_gives_uniform_superposition() {
        for n in 1..=4 {
            let mut s = StateVector::zero(n).unwrap();
            s.apply_hadamard_all();
            let expected = 1.0 / (s.dim() as f64).sqrt();
            for a in s.amplitudes() {
                assert_abs_diff_eq!(a.re, expected, epsilon = 1e-12);
                assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn hadamard_is_self_inverse() {
        let mut s = random_state(3, 7);
        let before = s.clone();
        s.apply_hadamard(1).unwrap();
        s.apply_hadamard(1).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rz_applies_expected_phases() {
        // On |+⟩, RZ(θ) yields amplitudes (e^{-iθ/2}, e^{+iθ/2})/√2.
        let mut s = StateVector::zero(1).unwrap();
        s.apply_hadamard_all();
        let theta = 0.7316;
        s.apply_rz(0, theta).unwrap();
        let expect0 = Complex64::from_polar(FRAC_1_SQRT_2, -theta / 2.0);
        let expect1 = Complex64::from_polar(FRAC_1_SQRT_2, theta / 2.0);
        assert_abs_diff_eq!((s.amplitudes()[0] - expect0).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((s.amplitudes()[1] - expect1).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ry_rotates_zero_to_cos_sin() {
        let theta = 1.234;
        let mut s = StateVector::zero(1).unwrap();
        s.apply_ry(0, theta).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, (theta / 2.0).cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.amplitudes()[1].re, (theta / 2.0).sin(), epsilon = 1e-12);
    }

    #[test]
    fn rot_equals_rz_ry_rz_sequence() {
        let (phi, theta, omega) = (0.3, 1.1, -0.8);
        let mut a = random_state(2, 11);
        let mut b = a.clone();
        a.apply_rot(1, phi, theta, omega).unwrap();
        b.apply_rz(1, phi).unwrap();
        b.apply_ry(1, theta).unwrap();
        b.apply_rz(1, omega).unwrap();
        assert_eq!(a, b, "Rot must be the literal RZ·RY·RZ product");
    }

    #[test]
    fn cnot_truth_table_msb_convention() {
        // Control qubit 0 (MSB), target qubit 1: |10⟩ → |11⟩, i.e. index 2 → 3.
        let mut s = StateVector::basis(2, 2).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s.amplitudes()[3], c(1.0, 0.0));
        // |01⟩ (control clear) is untouched.
        let mut s = StateVector::basis(2, 1).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s.amplitudes()[1], c(1.0, 0.0));
        // Reversed wires: control qubit 1 (LSB), |01⟩ → |11⟩, index 1 → 3.
        let mut s = StateVector::basis(2, 1).unwrap();
        s.apply_cnot(1, 0).unwrap();
        assert_eq!(s.amplitudes()[3], c(1.0, 0.0));
    }

    #[test]
    fn cnot_rejects_equal_wires_and_bad_indexes() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(matches!(
            s.apply_cnot(1, 1),
            Err(Error::ControlEqualsTarget(1))
        ));
        assert!(matches!(
            s.apply_cnot(0, 2),
            Err(Error::QubitIndexOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_the_left_argument() {
        let a = random_state(2, 3);
        let b = random_state(2, 4);
        let ab = a.inner_product(&b).unwrap();
        let ba = b.inner_product(&a).unwrap();
        assert_abs_diff_eq!((ab - ba.conj()).norm(), 0.0, epsilon = 1e-12);
        assert!(matches!(
            a.inner_product(&random_state(3, 5)),
            Err(Error::QubitCountMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn fidelity_of_state_with_itself_is_one() {
        let s = random_state(3, 9);
        assert_relative_eq!(s.fidelity(&s).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn single_qubit_fidelity_closed_form() {
        // |⟨0| RY(θ) |0⟩|² = cos²(θ/2).
        for &theta in &[0.0, 0.4, 1.0, PI / 2.0, 2.5, PI] {
            let zero = StateVector::zero(1).unwrap();
            let mut rotated = zero.clone();
            rotated.apply_ry(0, theta).unwrap();
            assert_abs_diff_eq!(
                zero.fidelity(&rotated).unwrap(),
                (theta / 2.0).cos().powi(2),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn gates_preserve_norm() {
        let mut s = random_state(3, 21);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..200 {
            match rng.gen_range(0..4u8) {
                0 => s.apply_rz(rng.gen_range(0..3), rng.gen_range(-6.0..6.0)).unwrap(),
                1 => s.apply_ry(rng.gen_range(0..3), rng.gen_range(-6.0..6.0)).unwrap(),
                2 => s.apply_hadamard(rng.gen_range(0..3)).unwrap(),
                _ => {
                    let control = rng.gen_range(0..3);
                    let target = (control + rng.gen_range(1..3)) % 3;
                    s.apply_cnot(control, target).unwrap();
                }
            }
        }
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rz_ry_inverses_undo_themselves() {
        let mut s = random_state(2, 33);
        let before = s.clone();
        s.apply_rz(0, 1.7).unwrap();
        s.apply_ry(1, -0.9).unwrap();
        s.apply_ry(1, 0.9).unwrap();
        s.apply_rz(0, -1.7).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
        }
    }

    /// A normalized pseudo-random state for tests.
    fn random_state(n_qubits: usize, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut amps: Vec<Complex64> = (0..1usize << n_qubits)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        StateVector::from_amplitudes(amps).unwrap()
    }
}
