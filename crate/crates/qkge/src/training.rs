//! Mini-batch training with Adam on mean-squared-error loss.
//!
//! Each epoch shuffles the training triples with the run's RNG, walks them
//! in batches, and for every positive draws one negative example whose
//! corrupted tails come from the deterministic per-draw stream in
//! [`crate::sampling`]. A batch of `P` positives therefore contributes
//! `D = 2 P` labeled examples (or `P · (1 + k)` when negatives are scored
//! separately instead of as one multi-tail mixture), and the loss is
//!
//! ```text
//! L = (1/D) Σ_d (δ_d − y_d)²
//! ```
//!
//! Adam is implemented from scratch with bias-corrected moments. Updates
//! are sparse — only the coordinates present in the batch gradient move —
//! while the step counter is global, which is the standard lazy-Adam
//! treatment of embedding tables.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ansatz::AnsatzShape;
use crate::data::KnowledgeGraph;
use crate::eval::{evaluate, EvalMode};
use crate::gradient::{
    batch_scores_and_gradients, GradientVector, LabeledExample, ParamCoord, ParamTable,
};
use crate::model::EmbeddingStore;
use crate::sampling::{negative_tails_for_draw, NegativeSpec};
use crate::{Error, Result};

/// Hyperparameters of one training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    /// Register width shared by entity and relation circuits.
    pub n_qubits: usize,
    /// Layers in every entity circuit.
    pub entity_layers: usize,
    /// Layers in every relation circuit.
    pub relation_layers: usize,
    /// Adam learning rate.
    pub learning_rate: f64,
    /// Number of passes over the training split.
    pub epochs: usize,
    /// Positives per batch (each positive also contributes its negative).
    pub batch_size: usize,
    /// Adam first-moment decay.
    pub adam_beta1: f64,
    /// Adam second-moment decay.
    pub adam_beta2: f64,
    /// Adam denominator offset.
    pub adam_epsilon: f64,
    /// Negative-sampling policy.
    pub negative: NegativeSpec,
    /// Seed for initialization and epoch shuffles (the sampling stream has
    /// its own seed inside `negative`).
    pub seed: u64,
    /// Score each sampled tail as its own single-tail example (label 0)
    /// instead of one k-tail mixture example.
    pub separate_negatives: bool,
    /// Compute filtered tail MRR on the valid split after every epoch.
    pub validation_mrr: bool,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            n_qubits: 2,
            entity_layers: 2,
            relation_layers: 2,
            learning_rate: 0.01,
            epochs: 10,
            batch_size: 128,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            negative: NegativeSpec::new(1, 42),
            seed: 42,
            separate_negatives: false,
            validation_mrr: false,
        }
    }
}

impl TrainingConfig {
    /// Validates the configuration against a dataset.
    pub fn validate(&self, kg: &KnowledgeGraph) -> Result<()> {
        AnsatzShape::new(self.n_qubits, self.entity_layers)?;
        AnsatzShape::new(self.n_qubits, self.relation_layers)?;
        if self.entity_layers == 0 {
            return Err(Error::InvalidConfig(
                "entity circuits need at least one layer to be trainable".into(),
            ));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        let n_train = kg.train().len();
        if n_train == 0 {
            return Err(Error::EmptySplit("train"));
        }
        if self.batch_size == 0 || self.batch_size > n_train {
            return Err(Error::InvalidConfig(format!(
                "batch size must be between 1 and the training-split size ({n_train}), got {}",
                self.batch_size
            )));
        }
        for (name, beta) in [("beta1", self.adam_beta1), ("beta2", self.adam_beta2)] {
            if !(0.0..1.0).contains(&beta) {
                return Err(Error::InvalidConfig(format!(
                    "adam {name} must lie in [0, 1), got {beta}"
                )));
            }
        }
        if !(self.adam_epsilon.is_finite() && self.adam_epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "adam epsilon must be positive and finite, got {}",
                self.adam_epsilon
            )));
        }
        self.negative.validate(kg.n_entities())?;
        if self.validation_mrr && kg.valid().is_empty() {
            return Err(Error::EmptySplit("valid"));
        }
        Ok(())
    }
}

/// Adam first/second moments for every parameter, plus the global step
/// counter. Moment tables mirror the store's layout.
#[derive(Clone, Debug)]
pub struct AdamState {
    m_entities: Vec<Vec<f64>>,
    v_entities: Vec<Vec<f64>>,
    m_relations: Vec<Vec<f64>>,
    v_relations: Vec<Vec<f64>>,
    step: u64,
}

impl AdamState {
    /// Zero moments shaped like `store`.
    pub fn new(store: &EmbeddingStore) -> Self {
        let e = store.entity_shape().param_count();
        let r = store.relation_shape().param_count();
        Self {
            m_entities: vec![vec![0.0; e]; store.n_entities()],
            v_entities: vec![vec![0.0; e]; store.n_entities()],
            m_relations: vec![vec![0.0; r]; store.n_relations()],
            v_relations: vec![vec![0.0; r]; store.n_relations()],
            step: 0,
        }
    }

    /// Number of updates applied so far.
    pub fn step(&self) -> u64 {
        self.step
    }

    /// First moment for `coord`.
    pub fn first_moment(&self, coord: ParamCoord) -> f64 {
        match coord.table {
            ParamTable::Entity => self.m_entities[coord.id][coord.index],
            ParamTable::Relation => self.m_relations[coord.id][coord.index],
        }
    }

    /// Second moment for `coord`.
    pub fn second_moment(&self, coord: ParamCoord) -> f64 {
        match coord.table {
            ParamTable::Entity => self.v_entities[coord.id][coord.index],
            ParamTable::Relation => self.v_relations[coord.id][coord.index],
        }
    }
}

/// Mean-squared-error loss over paired scores and labels.
pub fn mse_loss(scores: &[f64], labels: &[f64]) -> Result<f64> {
    if scores.is_empty() || scores.len() != labels.len() {
        return Err(Error::InvalidConfig(format!(
            "mse_loss needs equal non-empty slices, got {} scores and {} labels",
            scores.len(),
            labels.len()
        )));
    }
    Ok(scores
        .iter()
        .zip(labels)
        .map(|(s, y)| (s - y).powi(2))
        .sum::<f64>()
        / scores.len() as f64)
}

/// Applies one Adam update for the coordinates present in `grad`.
///
/// Fails with a numerical error if the gradient, the new moments, or the
/// updated parameters are not finite.
pub fn adam_step(
    store: &mut EmbeddingStore,
    grad: &GradientVector,
    state: &mut AdamState,
    config: &TrainingConfig,
) -> Result<()> {
    if !grad.all_finite() {
        return Err(Error::Numerical("non-finite batch gradient".into()));
    }
    state.step += 1;
    let t = state.step as i32;
    let correction1 = 1.0 - config.adam_beta1.powi(t);
    let correction2 = 1.0 - config.adam_beta2.powi(t);
    for (coord, g) in grad.iter() {
        let (m, v, param): (&mut f64, &mut f64, &mut f64) = match coord.table {
            ParamTable::Entity => (
                &mut state.m_entities[coord.id][coord.index],
                &mut state.v_entities[coord.id][coord.index],
                &mut store.entity_mut(coord.id)?.values_mut()[coord.index],
            ),
            ParamTable::Relation => (
                &mut state.m_relations[coord.id][coord.index],
                &mut state.v_relations[coord.id][coord.index],
                &mut store.relation_mut(coord.id)?.values_mut()[coord.index],
            ),
        };
        *m = config.adam_beta1 * *m + (1.0 - config.adam_beta1) * g;
        *v = config.adam_beta2 * *v + (1.0 - config.adam_beta2) * g * g;
        let m_hat = *m / correction1;
        let v_hat = *v / correction2;
        *param -= config.learning_rate * m_hat / (v_hat.sqrt() + config.adam_epsilon);
        if !(m.is_finite() && v.is_finite() && param.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite optimizer state at {coord:?}"
            )));
        }
    }
    Ok(())
}

/// Per-epoch training statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    /// Zero-based epoch index.
    pub epoch: usize,
    /// Mean squared error over every example seen this epoch.
    pub loss: f64,
    /// Filtered tail MRR on the valid split, when enabled.
    pub validation_mrr: Option<f64>,
}

/// A finished run: the trained parameters and the loss history.
#[derive(Clone, Debug)]
pub struct TrainedModel {
    pub store: EmbeddingStore,
    pub history: Vec<EpochStats>,
}

/// Trains a fresh model on `kg.train()` under `config`.
///
/// Fully deterministic for a given `(dataset, config)` pair: initialization
/// and shuffles consume `config.seed`, negative draws are keyed by
/// `(negative.seed, epoch · n_train + triple_index)`, and batch gradients
/// are reduced in a fixed order, so results do not depend on thread count.
pub fn train(kg: &KnowledgeGraph, config: &TrainingConfig) -> Result<TrainedModel> {
    train_with_progress(kg, config, |_| {})
}

/// Like [`train`], invoking `on_epoch` with each epoch's statistics as soon
/// as the epoch finishes (progress reporting, streamed logging).
///
/// The callback cannot influence the run; results are identical to
/// [`train`].
pub fn train_with_progress(
    kg: &KnowledgeGraph,
    config: &TrainingConfig,
    mut on_epoch: impl FnMut(&EpochStats),
) -> Result<TrainedModel> {
    config.validate(kg)?;
    let entity_shape = AnsatzShape::new(config.n_qubits, config.entity_layers)?;
    let relation_shape = AnsatzShape::new(config.n_qubits, config.relation_layers)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut store = EmbeddingStore::random(
        kg.n_entities(),
        kg.n_relations(),
        entity_shape,
        relation_shape,
        &mut rng,
    )?;
    let mut adam = AdamState::new(&store);
    let n_train = kg.train().len();
    let mut history = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        let mut order: Vec<usize> = (0..n_train).collect();
        order.shuffle(&mut rng);

        let mut squared_error_sum = 0.0;
        let mut n_examples = 0usize;

        for chunk in order.chunks(config.batch_size) {
            debug_assert!(!chunk.is_empty());
            let mut batch: Vec<LabeledExample> = Vec::with_capacity(chunk.len() * 2);
            for &triple_index in chunk {
                let positive = &kg.train()[triple_index];
                batch.push(LabeledExample::positive(positive));
                let draw_index = epoch as u64 * n_train as u64 + triple_index as u64;
                let tails = negative_tails_for_draw(
                    kg.n_entities(),
                    positive,
                    &config.negative,
                    draw_index,
                )?;
                if config.separate_negatives {
                    for tail in tails {
                        batch.push(LabeledExample::negative(
                            positive.head,
                            positive.relation,
                            vec![tail],
                        ));
                    }
                } else {
                    batch.push(LabeledExample::negative(
                        positive.head,
                        positive.relation,
                        tails,
                    ));
                }
            }

            let per_example = batch_scores_and_gradients(&store, &batch)?;
            let d = batch.len() as f64;
            let mut grad = GradientVector::new();
            for (example, (score, example_grad)) in batch.iter().zip(&per_example) {
                let residual = score - example.label;
                squared_error_sum += residual * residual;
                grad.add_scaled(example_grad, 2.0 * residual / d);
            }
            n_examples += batch.len();
            adam_step(&mut store, &grad, &mut adam, config)?;
        }

        debug_assert_eq!(n_examples, count_epoch_examples(n_train, config));
        let loss = squared_error_sum / n_examples as f64;
        if !loss.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite training loss at epoch {epoch}"
            )));
        }
        let validation_mrr = if config.validation_mrr {
            Some(evaluate(&store, kg, crate::data::Split::Valid, EvalMode::TailOnly)?.mrr)
        } else {
            None
        };
        let stats = EpochStats {
            epoch,
            loss,
            validation_mrr,
        };
        on_epoch(&stats);
        history.push(stats);
    }

    Ok(TrainedModel { store, history })
}

/// Total labeled examples per epoch: every positive plus its negatives.
fn count_epoch_examples(n_train: usize, config: &TrainingConfig) -> usize {
    if config.separate_negatives {
        n_train * (1 + config.negative.k)
    } else {
        n_train * 2
    }
}
