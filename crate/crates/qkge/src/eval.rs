//! Filtered link-prediction evaluation: MRR, Hits@1, Hits@10.
//!
//! For each evaluation triple `(h, r, t)` the true tail competes against
//! every entity `t'` **except** those forming a triple `(h, r, t')` known in
//! any split (the *filtered* protocol; the true tail itself always stays
//! in). The rank uses the mean-rank tie convention:
//!
//! ```text
//! rank = 1 + #{strictly better candidates} + #{ties} / 2
//! ```
//!
//! so scoring collisions — common with coarse quantum fidelities — cannot
//! systematically favor either side. MRR averages `1/rank` without
//! rounding; Hits@N uses the half-up-rounded integer rank.
//!
//! `BothDirections` mode additionally ranks the true head against filtered
//! head corruptions of every triple and averages metrics over the combined
//! pool of `2 · |split|` ranks.

use std::collections::BTreeSet;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::apply_ansatz;
use crate::data::{KnowledgeGraph, Split, Triple};
use crate::model::EmbeddingStore;
use crate::simulator::StateVector;
use crate::{Error, Result};

/// Which ranking directions contribute to the metrics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    /// Corrupt tails only.
    TailOnly,
    /// Corrupt tails and heads; metrics average over both directions.
    BothDirections,
}

impl EvalMode {
    pub fn name(&self) -> &'static str {
        match self {
            EvalMode::TailOnly => "tail",
            EvalMode::BothDirections => "both",
        }
    }
}

/// Aggregated ranking metrics over one split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    /// Split the report was computed on (`"valid"` or `"test"`).
    pub split: String,
    /// Direction mode (`"tail"` or `"both"`).
    pub mode: String,
    /// Number of evaluation triples in the split.
    pub n_triples: usize,
    /// Number of ranks aggregated (`n_triples`, doubled in both-directions
    /// mode).
    pub n_ranks: usize,
    /// Mean reciprocal rank over unrounded tie-adjusted ranks.
    pub mrr: f64,
    /// Fraction of ranks at 1 after half-up rounding.
    pub hits1: f64,
    /// Fraction of ranks at 10 or better after half-up rounding.
    pub hits10: f64,
}

impl RankingReport {
    fn from_ranks(split: Split, mode: EvalMode, n_triples: usize, ranks: &[f64]) -> Self {
        let n = ranks.len() as f64;
        let mrr = ranks.iter().map(|r| 1.0 / r).sum::<f64>() / n;
        let rounded: Vec<f64> = ranks.iter().map(|r| round_half_up(*r)).collect();
        let hits1 = rounded.iter().filter(|&&r| r <= 1.0).count() as f64 / n;
        let hits10 = rounded.iter().filter(|&&r| r <= 10.0).count() as f64 / n;
        Self {
            split: split.name().to_string(),
            mode: mode.name().to_string(),
            n_triples,
            n_ranks: ranks.len(),
            mrr,
            hits1,
            hits10,
        }
    }
}

/// Rounds half-integer ranks upward (2.5 → 3), leaving integers alone.
fn round_half_up(rank: f64) -> f64 {
    (rank + 0.5).floor()
}

/// Tie-adjusted filtered rank from a score comparison sweep.
fn rank_from_counts(strictly_greater: usize, ties: usize) -> f64 {
    1.0 + strictly_greater as f64 + ties as f64 / 2.0
}

/// Precomputed states for one evaluation pass: one embedding per entity and
/// one evolved-table per relation that occurs in the split.
struct EvalCache {
    entity_states: Vec<StateVector>,
    /// `evolved[&r][e] = U(β_r)|e⟩` for each relation id `r` in the split.
    evolved: HashMap<usize, Vec<StateVector>>,
}

impl EvalCache {
    fn build(store: &EmbeddingStore, relations: &BTreeSet<usize>) -> Result<Self> {
        let entity_states: Vec<StateVector> = (0..store.n_entities())
            .into_par_iter()
            .map(|e| store.entity_state(e))
            .collect::<Result<_>>()?;
        let evolved = relations
            .par_iter()
            .map(|&r| {
                let relation = store.relation(r)?;
                let table: Vec<StateVector> = entity_states
                    .iter()
                    .map(|state| {
                        let mut s = state.clone();
                        apply_ansatz(&mut s, relation)?;
                        Ok(s)
                    })
                    .collect::<Result<_>>()?;
                Ok((r, table))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            entity_states,
            evolved,
        })
    }

    fn tail_rank(&self, kg: &KnowledgeGraph, triple: &Triple) -> f64 {
        let evolved_head = &self.evolved[&triple.relation][triple.head];
        let true_score = score_against(&self.entity_states[triple.tail], evolved_head);
        let mut strictly_greater = 0usize;
        let mut ties = 0usize;
        for (candidate, candidate_state) in self.entity_states.iter().enumerate() {
            if candidate == triple.tail
                || kg.is_known_tail(triple.head, triple.relation, candidate)
            {
                continue;
            }
            let s = score_against(candidate_state, evolved_head);
            if s > true_score {
                strictly_greater += 1;
            } else if s == true_score {
                ties += 1;
            }
        }
        rank_from_counts(strictly_greater, ties)
    }

    fn head_rank(&self, kg: &KnowledgeGraph, triple: &Triple) -> f64 {
        let evolved = &self.evolved[&triple.relation];
        let tail_state = &self.entity_states[triple.tail];
        let true_score = score_against(tail_state, &evolved[triple.head]);
        let mut strictly_greater = 0usize;
        let mut ties = 0usize;
        for (candidate, evolved_candidate) in evolved.iter().enumerate() {
            if candidate == triple.head
                || kg.is_known_head(candidate, triple.relation, triple.tail)
            {
                continue;
            }
            let s = score_against(tail_state, evolved_candidate);
            if s > true_score {
                strictly_greater += 1;
            } else if s == true_score {
                ties += 1;
            }
        }
        rank_from_counts(strictly_greater, ties)
    }
}

#[inline]
fn score_against(tail_state: &StateVector, evolved_head: &StateVector) -> f64 {
    tail_state
        .fidelity(evolved_head)
        .expect("cached states share one register width")
}

/// Filtered tail rank of a single triple (convenience entry point; builds
/// the needed states on the fly).
pub fn rank_tail(store: &EmbeddingStore, kg: &KnowledgeGraph, triple: &Triple) -> Result<f64> {
    check_compatible(store, kg)?;
    check_triple(kg, triple)?;
    let cache = EvalCache::build(store, &BTreeSet::from([triple.relation]))?;
    Ok(cache.tail_rank(kg, triple))
}

/// Filtered head rank of a single triple.
pub fn rank_head(store: &EmbeddingStore, kg: &KnowledgeGraph, triple: &Triple) -> Result<f64> {
    check_compatible(store, kg)?;
    check_triple(kg, triple)?;
    let cache = EvalCache::build(store, &BTreeSet::from([triple.relation]))?;
    Ok(cache.head_rank(kg, triple))
}

fn check_compatible(store: &EmbeddingStore, kg: &KnowledgeGraph) -> Result<()> {
    if store.n_entities() != kg.n_entities() || store.n_relations() != kg.n_relations() {
        return Err(Error::Integrity(format!(
            "model has {} entities / {} relations but the dataset has {} / {}",
            store.n_entities(),
            store.n_relations(),
            kg.n_entities(),
            kg.n_relations()
        )));
    }
    Ok(())
}

fn check_triple(kg: &KnowledgeGraph, triple: &Triple) -> Result<()> {
    if triple.head >= kg.n_entities() {
        return Err(Error::EntityIdOutOfRange {
            id: triple.head,
            n_entities: kg.n_entities(),
        });
    }
    if triple.tail >= kg.n_entities() {
        return Err(Error::EntityIdOutOfRange {
            id: triple.tail,
            n_entities: kg.n_entities(),
        });
    }
    if triple.relation >= kg.n_relations() {
        return Err(Error::RelationIdOutOfRange {
            id: triple.relation,
            n_relations: kg.n_relations(),
        });
    }
    Ok(())
}

/// Evaluates `store` on one split of `kg` under the filtered protocol.
///
/// Per-triple ranks are computed in parallel but collected in split order
/// and aggregated serially, so reports are identical across thread counts.
pub fn evaluate(
    store: &EmbeddingStore,
    kg: &KnowledgeGraph,
    split: Split,
    mode: EvalMode,
) -> Result<RankingReport> {
    check_compatible(store, kg)?;
    let triples = kg.split(split);
    if triples.is_empty() {
        return Err(Error::EmptySplit(split.name()));
    }
    for t in triples {
        check_triple(kg, t)?;
    }
    let relations: BTreeSet<usize> = triples.iter().map(|t| t.relation).collect();
    let cache = EvalCache::build(store, &relations)?;

    let mut ranks: Vec<f64> = triples
        .par_iter()
        .map(|t| cache.tail_rank(kg, t))
        .collect();
    if mode == EvalMode::BothDirections {
        let head_ranks: Vec<f64> = triples
            .par_iter()
            .map(|t| cache.head_rank(kg, t))
            .collect();
        ranks.extend(head_ranks);
    }
    Ok(RankingReport::from_ranks(split, mode, triples.len(), &ranks))
}
