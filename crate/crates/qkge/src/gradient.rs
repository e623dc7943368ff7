//! Exact analytic gradients via the parameter-shift rule.
//!
//! Every angle in the circuits enters through `RZ` or `RY`, i.e. through a
//! generator with eigenvalues `±1/2`. For such rotations the derivative of
//! any expectation-style score `δ(θ)` is *exactly*
//!
//! ```text
//! ∂δ/∂θ = [ δ(θ + π/2) − δ(θ − π/2) ] / 2
//! ```
//!
//! with no truncation error — the only inaccuracy is floating-point
//! rounding. When one entity tensor appears several times in an example
//! (head also drawn as a tail, or a tail drawn for an example whose head it
//! is), the shift is applied per occurrence and the contributions are
//! summed, which is the product rule for repeated parameters.
//!
//! Gradients are sparse: an example touches only its head, its relation,
//! and its tails, so partials are kept in an ordered map keyed by
//! [`ParamCoord`] rather than in a dense table.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::ansatz::{apply_ansatz, embed_entity, ParameterTensor};
use crate::data::Triple;
use crate::model::EmbeddingStore;
use crate::simulator::StateVector;
use crate::{Error, Result};

/// Parameter-shift offset `π/2` for generators with eigenvalues `±1/2`.
pub const SHIFT: f64 = std::f64::consts::FRAC_PI_2;

/// Which parameter table a coordinate addresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamTable {
    Entity,
    Relation,
}

/// One scalar parameter: a table, a row id, and a flat angle index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamCoord {
    pub table: ParamTable,
    pub id: usize,
    pub index: usize,
}

impl ParamCoord {
    pub fn entity(id: usize, index: usize) -> Self {
        Self {
            table: ParamTable::Entity,
            id,
            index,
        }
    }

    pub fn relation(id: usize, index: usize) -> Self {
        Self {
            table: ParamTable::Relation,
            id,
            index,
        }
    }
}

/// A sparse gradient: partial derivatives keyed by coordinate.
///
/// Backed by a `BTreeMap`, so iteration order is the coordinate order —
/// deterministic regardless of how the gradient was assembled.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GradientVector {
    partials: BTreeMap<ParamCoord, f64>,
}

impl GradientVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `value` to the partial at `coord`.
    pub fn add(&mut self, coord: ParamCoord, value: f64) {
        *self.partials.entry(coord).or_insert(0.0) += value;
    }

    /// Accumulates `scale · other` into `self`, coordinate by coordinate.
    pub fn add_scaled(&mut self, other: &GradientVector, scale: f64) {
        for (&coord, &value) in &other.partials {
            self.add(coord, scale * value);
        }
    }

    /// The partial at `coord` (zero if absent).
    pub fn get(&self, coord: ParamCoord) -> f64 {
        self.partials.get(&coord).copied().unwrap_or(0.0)
    }

    /// Iterates partials in coordinate order.
    pub fn iter(&self) -> impl Iterator<Item = (ParamCoord, f64)> + '_ {
        self.partials.iter().map(|(&c, &v)| (c, v))
    }

    /// Number of stored coordinates.
    pub fn len(&self) -> usize {
        self.partials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partials.is_empty()
    }

    /// Whether every stored partial is finite.
    pub fn all_finite(&self) -> bool {
        self.partials.values().all(|v| v.is_finite())
    }

    /// Largest absolute partial (zero for an empty gradient).
    pub fn max_abs(&self) -> f64 {
        self.partials.values().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// One training example: a head, a relation, `k ≥ 1` tail entities scored
/// as a uniform mixture, and a regression label.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledExample {
    pub head: usize,
    pub relation: usize,
    pub tails: Vec<usize>,
    pub label: f64,
}

impl LabeledExample {
    /// A positive example (label 1) from a knowledge-graph triple.
    pub fn positive(triple: &Triple) -> Self {
        Self {
            head: triple.head,
            relation: triple.relation,
            tails: vec![triple.tail],
            label: 1.0,
        }
    }

    /// A negative example (label 0) from a positive's head and relation plus
    /// sampled corrupted tails.
    pub fn negative(head: usize, relation: usize, tails: Vec<usize>) -> Self {
        Self {
            head,
            relation,
            tails,
            label: 0.0,
        }
    }
}

/// Score of one example: the multi-tail fidelity mean.
pub fn score_example(store: &EmbeddingStore, example: &LabeledExample) -> Result<f64> {
    Ok(store
        .score_multi_tail(example.head, example.relation, &example.tails)?
        .value())
}

/// `U(β_r) · U(α_h) · H^{⊗n} |0…0⟩` for explicit head/relation tensors.
fn evolve(head: &ParameterTensor, relation: &ParameterTensor) -> Result<StateVector> {
    let mut state = embed_entity(head);
    apply_ansatz(&mut state, relation)?;
    Ok(state)
}

/// Mean fidelity of `tails` against an evolved head.
fn mean_fidelity(tails: &[StateVector], evolved: &StateVector) -> Result<f64> {
    let mut sum = 0.0;
    for t in tails {
        sum += t.fidelity(evolved)?;
    }
    Ok(sum / tails.len() as f64)
}

/// Score and full parameter-shift gradient of one example.
///
/// Returns `(δ, ∂δ/∂params)` where the gradient covers the example's head
/// angles, relation angles, and each tail's angles. Occurrence overlaps
/// (head id also appearing among the tails) accumulate into the same
/// coordinates, which is exactly the chain rule for shared parameters.
pub fn score_and_gradient(
    store: &EmbeddingStore,
    example: &LabeledExample,
) -> Result<(f64, GradientVector)> {
    if example.tails.is_empty() {
        return Err(Error::EmptyTails);
    }
    let head = store.entity(example.head)?;
    let relation = store.relation(example.relation)?;
    let tail_tensors: Vec<&ParameterTensor> = example
        .tails
        .iter()
        .map(|&t| store.entity(t))
        .collect::<Result<_>>()?;

    let k = example.tails.len() as f64;
    let head_state = embed_entity(head);
    let evolved = {
        let mut s = head_state.clone();
        apply_ansatz(&mut s, relation)?;
        s
    };
    let tail_states: Vec<StateVector> = tail_tensors.iter().map(|t| embed_entity(t)).collect();
    let score = mean_fidelity(&tail_states, &evolved)?;

    let mut grad = GradientVector::new();

    // Head occurrence: shift each head angle, re-embed, re-evolve, and
    // re-average over the *unshifted* tails.
    for index in 0..head.shape().param_count() {
        let plus = evolve(&head.shifted(index, SHIFT)?, relation)?;
        let minus = evolve(&head.shifted(index, -SHIFT)?, relation)?;
        let partial = (mean_fidelity(&tail_states, &plus)? - mean_fidelity(&tail_states, &minus)?) / 2.0;
        grad.add(ParamCoord::entity(example.head, index), partial);
    }

    // Relation occurrence: the head embedding is unchanged, so reuse it and
    // only re-run the shifted relation circuit.
    for index in 0..relation.shape().param_count() {
        let plus = {
            let mut s = head_state.clone();
            apply_ansatz(&mut s, &relation.shifted(index, SHIFT)?)?;
            s
        };
        let minus = {
            let mut s = head_state.clone();
            apply_ansatz(&mut s, &relation.shifted(index, -SHIFT)?)?;
            s
        };
        let partial = (mean_fidelity(&tail_states, &plus)? - mean_fidelity(&tail_states, &minus)?) / 2.0;
        grad.add(ParamCoord::relation(example.relation, index), partial);
    }

    // Tail occurrences: shifting tail i's angle only changes term i of the
    // mean, so the partial is the shifted-term difference over 2k.
    for (i, tail) in tail_tensors.iter().enumerate() {
        for index in 0..tail.shape().param_count() {
            let plus = embed_entity(&tail.shifted(index, SHIFT)?).fidelity(&evolved)?;
            let minus = embed_entity(&tail.shifted(index, -SHIFT)?).fidelity(&evolved)?;
            let partial = (plus - minus) / (2.0 * k);
            grad.add(ParamCoord::entity(example.tails[i], index), partial);
        }
    }

    Ok((score, grad))
}

/// Scores and gradients for a whole batch, computed in parallel.
///
/// Results come back in batch order, so any serial reduction over them is
/// independent of thread count and scheduling.
pub fn batch_scores_and_gradients(
    store: &EmbeddingStore,
    batch: &[LabeledExample],
) -> Result<Vec<(f64, GradientVector)>> {
    batch
        .par_iter()
        .map(|example| score_and_gradient(store, example))
        .collect()
}

/// Gradient of the mean-squared-error loss
/// `L = (1/D) Σ_d (δ_d − y_d)²` over a batch of `D` examples:
/// `∂L/∂θ = (2/D) Σ_d (δ_d − y_d) · ∂δ_d/∂θ`.
///
/// Per-example work runs in parallel; the final accumulation is a serial
/// fold in batch order, so the result is bitwise reproducible.
pub fn loss_gradient(store: &EmbeddingStore, batch: &[LabeledExample]) -> Result<GradientVector> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let per_example = batch_scores_and_gradients(store, batch)?;
    let d = batch.len() as f64;
    let mut total = GradientVector::new();
    for (example, (score, grad)) in batch.iter().zip(&per_example) {
        total.add_scaled(grad, 2.0 * (score - example.label) / d);
    }
    Ok(total)
}
