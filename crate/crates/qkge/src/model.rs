//! Embedding store and fidelity scoring.
//!
//! Every entity and every relation owns one [`ParameterTensor`]. An entity's
//! state is `|e⟩ = U(α_e) · H^{⊗n}|0…0⟩`; a relation evolves a head state as
//! `|h̃⟩ = U(β_r)|h⟩`. The plausibility of a triple `(h, r, t)` is the
//! fidelity
//!
//! ```text
//! δ(h, r, t) = |⟨t| U(β_r) |h⟩|²
//! ```
//!
//! and a multi-tail example averages the per-tail fidelities against the
//! same evolved head:
//!
//! ```text
//! δ(h, r, {t_1 … t_k}) = (1/k) Σ_i |⟨t_i| U(β_r) |h⟩|²
//! ```
//!
//! which is exactly what a uniform superposition over `k` tail registers
//! would measure. Tails index the same entity table as heads; there is no
//! separate tail parameterization.

use rand::Rng;

use crate::ansatz::{apply_ansatz, apply_ansatz_inverse, embed_entity, AnsatzShape, ParameterTensor};
use crate::simulator::StateVector;
use crate::{Error, Result};

/// A triple plausibility score, guaranteed to lie in `[0, 1]` up to
/// floating-point rounding.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Score(f64);

impl Score {
    /// Tolerance for rounding excursions above 1 produced by finite
    /// arithmetic on normalized states.
    const SLACK: f64 = 1e-10;

    fn new(value: f64) -> Self {
        debug_assert!(
            (-Self::SLACK..=1.0 + Self::SLACK).contains(&value),
            "fidelity {value} outside [0, 1] beyond rounding slack"
        );
        Self(value)
    }

    /// The raw fidelity value.
    pub fn value(&self) -> f64 {
        self.0
    }
}

/// All entity and relation parameters of one model instance.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingStore {
    entity_shape: AnsatzShape,
    relation_shape: AnsatzShape,
    entities: Vec<ParameterTensor>,
    relations: Vec<ParameterTensor>,
}

impl EmbeddingStore {
    /// Initializes every tensor with angles drawn uniformly from `[0, 2π)`.
    ///
    /// Draw order is fixed — entities `0…E−1`, then relations `0…R−1` — so a
    /// given RNG state always produces the same store.
    pub fn random<R: Rng + ?Sized>(
        n_entities: usize,
        n_relations: usize,
        entity_shape: AnsatzShape,
        relation_shape: AnsatzShape,
        rng: &mut R,
    ) -> Result<Self> {
        Self::check_shapes(entity_shape, relation_shape)?;
        let entities = (0..n_entities)
            .map(|_| ParameterTensor::random_uniform(entity_shape, rng))
            .collect();
        let relations = (0..n_relations)
            .map(|_| ParameterTensor::random_uniform(relation_shape, rng))
            .collect();
        Ok(Self {
            entity_shape,
            relation_shape,
            entities,
            relations,
        })
    }

    /// Builds a store from explicit tensors (checkpoint loading).
    ///
    /// Every entity tensor must match `entity_shape` and every relation
    /// tensor `relation_shape`.
    pub fn from_tensors(
        entity_shape: AnsatzShape,
        relation_shape: AnsatzShape,
        entities: Vec<ParameterTensor>,
        relations: Vec<ParameterTensor>,
    ) -> Result<Self> {
        Self::check_shapes(entity_shape, relation_shape)?;
        if let Some(bad) = entities.iter().find(|t| t.shape() != entity_shape) {
            return Err(Error::Integrity(format!(
                "entity tensor shape {:?} does not match store shape {:?}",
                bad.shape(),
                entity_shape
            )));
        }
        if let Some(bad) = relations.iter().find(|t| t.shape() != relation_shape) {
            return Err(Error::Integrity(format!(
                "relation tensor shape {:?} does not match store shape {:?}",
                bad.shape(),
                relation_shape
            )));
        }
        Ok(Self {
            entity_shape,
            relation_shape,
            entities,
            relations,
        })
    }

    fn check_shapes(entity_shape: AnsatzShape, relation_shape: AnsatzShape) -> Result<()> {
        if entity_shape.n_qubits() != relation_shape.n_qubits() {
            return Err(Error::QubitCountMismatch {
                left: entity_shape.n_qubits(),
                right: relation_shape.n_qubits(),
            });
        }
        Ok(())
    }

    /// Register width shared by entity and relation circuits.
    pub fn n_qubits(&self) -> usize {
        self.entity_shape.n_qubits()
    }

    /// Shape of every entity tensor.
    pub fn entity_shape(&self) -> AnsatzShape {
        self.entity_shape
    }

    /// Shape of every relation tensor.
    pub fn relation_shape(&self) -> AnsatzShape {
        self.relation_shape
    }

    /// Number of entities.
    pub fn n_entities(&self) -> usize {
        self.entities.len()
    }

    /// Number of relations.
    pub fn n_relations(&self) -> usize {
        self.relations.len()
    }

    /// Parameter tensor of entity `id`.
    pub fn entity(&self, id: usize) -> Result<&ParameterTensor> {
        self.entities.get(id).ok_or(Error::EntityIdOutOfRange {
            id,
            n_entities: self.entities.len(),
        })
    }

    /// Parameter tensor of relation `id`.
    pub fn relation(&self, id: usize) -> Result<&ParameterTensor> {
        self.relations.get(id).ok_or(Error::RelationIdOutOfRange {
            id,
            n_relations: self.relations.len(),
        })
    }

    /// Mutable parameter tensor of entity `id` (optimizer access).
    pub fn entity_mut(&mut self, id: usize) -> Result<&mut ParameterTensor> {
        let n_entities = self.entities.len();
        self.entities
            .get_mut(id)
            .ok_or(Error::EntityIdOutOfRange { id, n_entities })
    }

    /// Mutable parameter tensor of relation `id` (optimizer access).
    pub fn relation_mut(&mut self, id: usize) -> Result<&mut ParameterTensor> {
        let n_relations = self.relations.len();
        self.relations
            .get_mut(id)
            .ok_or(Error::RelationIdOutOfRange { id, n_relations })
    }

    /// The embedding state `|e⟩ = U(α_e) · H^{⊗n}|0…0⟩` of entity `id`.
    pub fn entity_state(&self, id: usize) -> Result<StateVector> {
        Ok(embed_entity(self.entity(id)?))
    }

    /// The evolved head `U(β_r)|h⟩` for head entity `head` under relation
    /// `relation`.
    pub fn evolved_head(&self, head: usize, relation: usize) -> Result<StateVector> {
        let mut state = self.entity_state(head)?;
        apply_ansatz(&mut state, self.relation(relation)?)?;
        Ok(state)
    }

    /// Triple score `δ(h, r, t) = |⟨t| U(β_r) |h⟩|²`.
    pub fn score_triple(&self, head: usize, relation: usize, tail: usize) -> Result<Score> {
        let evolved = self.evolved_head(head, relation)?;
        let tail_state = self.entity_state(tail)?;
        Ok(Score::new(tail_state.fidelity(&evolved)?))
    }

    /// The same triple score computed by *uncomputation*: instead of
    /// preparing `|t⟩` and overlapping, the tail circuit is run backwards on
    /// the evolved head and the result is overlapped with the uniform
    /// superposition:
    ///
    /// ```text
    /// δ = |⟨0…0| H^{⊗n} U(α_t)† U(β_r) U(α_h) H^{⊗n} |0…0⟩|²
    /// ```
    ///
    /// Mathematically identical to [`EmbeddingStore::score_triple`]; kept as
    /// an independent route for cross-checks.
    pub fn score_triple_uncompute(
        &self,
        head: usize,
        relation: usize,
        tail: usize,
    ) -> Result<Score> {
        let mut state = self.evolved_head(head, relation)?;
        apply_ansatz_inverse(&mut state, self.entity(tail)?)?;
        let mut reference = StateVector::zero(self.n_qubits())?;
        reference.apply_hadamard_all();
        Ok(Score::new(reference.fidelity(&state)?))
    }

    /// Multi-tail score: the mean of `|⟨t_i| U(β_r) |h⟩|²` over `tails`.
    ///
    /// The evolved head is computed once and reused for every tail. At least
    /// one tail is required; repeated tail ids are allowed and contribute one
    /// term each.
    pub fn score_multi_tail(&self, head: usize, relation: usize, tails: &[usize]) -> Result<Score> {
        if tails.is_empty() {
            return Err(Error::EmptyTails);
        }
        let evolved = self.evolved_head(head, relation)?;
        let mut sum = 0.0;
        for &tail in tails {
            sum += self.entity_state(tail)?.fidelity(&evolved)?;
        }
        Ok(Score::new(sum / tails.len() as f64))
    }
}
