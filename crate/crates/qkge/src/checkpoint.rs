//! Versioned JSON checkpoints.
//!
//! A checkpoint stores everything needed to resume scoring exactly: the
//! circuit shapes, the sorted vocabularies, every angle, the training
//! configuration, and the per-epoch loss history. Angles are serialized as
//! decimal strings with 17 significant digits, which round-trip `f64`
//! bit-for-bit — loading a checkpoint and evaluating yields byte-identical
//! reports to evaluating the in-memory model that produced it.
//!
//! Files are pretty-printed JSON, so checkpoints diff cleanly and can be
//! inspected by hand.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ansatz::{AnsatzShape, ParameterTensor};
use crate::data::Vocabulary;
use crate::model::EmbeddingStore;
use crate::training::{EpochStats, TrainingConfig};
use crate::{Error, Result};

/// Version written by this build; loads refuse anything else.
pub const FORMAT_VERSION: u32 = 1;

/// On-disk model representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    /// Configuration the model was trained with.
    pub config: TrainingConfig,
    pub entity_shape: AnsatzShape,
    pub relation_shape: AnsatzShape,
    /// Entity surface strings in id order (strictly sorted).
    pub entities: Vec<String>,
    /// Relation surface strings in id order (strictly sorted).
    pub relations: Vec<String>,
    /// Per-entity angles as 17-significant-digit decimal strings.
    pub entity_params: Vec<Vec<String>>,
    /// Per-relation angles in the same encoding.
    pub relation_params: Vec<Vec<String>>,
    /// Loss (and optional validation MRR) per epoch.
    pub history: Vec<EpochStats>,
}

/// Encodes one angle with 17 significant digits — enough for an exact
/// `f64` round trip.
fn format_angle(value: f64) -> String {
    format!("{value:.16e}")
}

fn parse_angle(s: &str, what: &str) -> Result<f64> {
    let value: f64 = s
        .parse()
        .map_err(|_| Error::Integrity(format!("{what}: unparseable angle {s:?}")))?;
    if !value.is_finite() {
        return Err(Error::Integrity(format!("{what}: non-finite angle {s:?}")));
    }
    Ok(value)
}

fn encode_tensors(tensors: usize, get: impl Fn(usize) -> Vec<f64>) -> Vec<Vec<String>> {
    (0..tensors)
        .map(|i| get(i).iter().map(|&v| format_angle(v)).collect())
        .collect()
}

impl Checkpoint {
    /// Captures a trained model together with its vocabulary and history.
    pub fn from_model(
        vocab: &Vocabulary,
        store: &EmbeddingStore,
        config: &TrainingConfig,
        history: &[EpochStats],
    ) -> Result<Self> {
        if vocab.n_entities() != store.n_entities() || vocab.n_relations() != store.n_relations() {
            return Err(Error::Integrity(format!(
                "vocabulary ({} entities, {} relations) does not match store ({}, {})",
                vocab.n_entities(),
                vocab.n_relations(),
                store.n_entities(),
                store.n_relations()
            )));
        }
        let entity_params = encode_tensors(store.n_entities(), |i| {
            store.entity(i).expect("index in range").values().to_vec()
        });
        let relation_params = encode_tensors(store.n_relations(), |i| {
            store.relation(i).expect("index in range").values().to_vec()
        });
        Ok(Self {
            format_version: FORMAT_VERSION,
            config: config.clone(),
            entity_shape: store.entity_shape(),
            relation_shape: store.relation_shape(),
            entities: vocab.entities().to_vec(),
            relations: vocab.relations().to_vec(),
            entity_params,
            relation_params,
            history: history.to_vec(),
        })
    }

    /// Writes pretty-printed JSON to `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).map_err(|e| Error::json(path, e))?;
        let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(json.as_bytes())
            .and_then(|_| file.write_all(b"\n"))
            .map_err(|e| Error::io(path, e))
    }

    /// Reads and structurally validates a checkpoint from `path`.
    pub fn load(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let checkpoint: Checkpoint =
            serde_json::from_str(&content).map_err(|e| Error::json(path, e))?;
        if checkpoint.format_version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion {
                found: checkpoint.format_version,
                supported: FORMAT_VERSION,
            });
        }
        checkpoint.validate()?;
        Ok(checkpoint)
    }

    fn validate(&self) -> Result<()> {
        // Vocabulary ordering is validated on reconstruction.
        self.vocabulary()?;
        for (what, rows, shape) in [
            ("entity_params", &self.entity_params, self.entity_shape),
            ("relation_params", &self.relation_params, self.relation_shape),
        ] {
            for (i, row) in rows.iter().enumerate() {
                if row.len() != shape.param_count() {
                    return Err(Error::Integrity(format!(
                        "{what}[{i}] has {} angles, shape requires {}",
                        row.len(),
                        shape.param_count()
                    )));
                }
            }
        }
        if self.entity_params.len() != self.entities.len() {
            return Err(Error::Integrity(format!(
                "{} entity names but {} entity parameter rows",
                self.entities.len(),
                self.entity_params.len()
            )));
        }
        if self.relation_params.len() != self.relations.len() {
            return Err(Error::Integrity(format!(
                "{} relation names but {} relation parameter rows",
                self.relations.len(),
                self.relation_params.len()
            )));
        }
        Ok(())
    }

    /// Rebuilds the vocabulary (validating strict lexicographic order).
    pub fn vocabulary(&self) -> Result<Vocabulary> {
        Vocabulary::from_lists(self.entities.clone(), self.relations.clone())
    }

    /// Decodes the angles back into an embedding store.
    pub fn to_store(&self) -> Result<EmbeddingStore> {
        let decode = |rows: &[Vec<String>], shape: AnsatzShape, what: &str| -> Result<Vec<ParameterTensor>> {
            rows.iter()
                .enumerate()
                .map(|(i, row)| {
                    let values: Vec<f64> = row
                        .iter()
                        .map(|s| parse_angle(s, &format!("{what}[{i}]")))
                        .collect::<Result<_>>()?;
                    ParameterTensor::from_values(shape, values)
                })
                .collect()
        };
        EmbeddingStore::from_tensors(
            self.entity_shape,
            self.relation_shape,
            decode(&self.entity_params, self.entity_shape, "entity_params")?,
            decode(&self.relation_params, self.relation_shape, "relation_params")?,
        )
    }

    /// Checks that this checkpoint belongs to the dataset `vocab` was
    /// built from (same entity and relation lists in the same order).
    pub fn check_matches(&self, vocab: &Vocabulary) -> Result<()> {
        if self.entities != vocab.entities() {
            return Err(Error::Integrity(
                "checkpoint entity vocabulary does not match the dataset".into(),
            ));
        }
        if self.relations != vocab.relations() {
            return Err(Error::Integrity(
                "checkpoint relation vocabulary does not match the dataset".into(),
            ));
        }
        Ok(())
    }
}
