//! Knowledge-graph embeddings from parameterized quantum circuits,
//! simulated classically.
//!
//! Entities and relations are not vectors but circuits: each entity `e`
//! owns the angles `α_e` of a layered ansatz preparing the state
//! `|e⟩ = U(α_e) · H^{⊗n}|0…0⟩`, and each relation `r` owns the angles
//! `β_r` of a unitary evolution `U(β_r)`. A triple `(h, r, t)` is scored by
//! the fidelity `δ = |⟨t| U(β_r) |h⟩|²`, trained with mean-squared error
//! against binary labels, differentiated exactly through the
//! parameter-shift rule, and optimized with Adam. Negative examples corrupt
//! tails uniformly; a `k`-tail negative is scored as the uniform mixture
//! `(1/k) Σ_i |⟨t_i| U(β_r) |h⟩|²`, the classical average equal to what a
//! superposed multi-tail register would measure.
//!
//! Everything runs on a dense statevector simulator
//! ([`simulator::StateVector`]) and is deterministic for a fixed seed,
//! independent of thread count.
//!
//! # Modules
//!
//! * [`simulator`] — dense state vectors and the gate set (H, RZ, RY, Rot,
//!   CNOT).
//! * [`ansatz`] — the layered entangling circuit, its parameters, and
//!   entity embedding.
//! * [`model`] — the entity/relation parameter store and fidelity scoring.
//! * [`sampling`] — deterministic uniform negative-tail draws.
//! * [`gradient`] — parameter-shift gradients of scores and of the MSE
//!   loss.
//! * [`training`] — Adam and the mini-batch training loop.
//! * [`data`] — triple files, vocabularies, and filter indexes.
//! * [`eval`] — filtered link-prediction ranking (MRR, Hits@1, Hits@10).
//! * [`checkpoint`] — versioned JSON model files with exact angle
//!   round-trips.
//!
//! # Example
//!
//! ```
//! use qkge::data::{KnowledgeGraph, Triple, Vocabulary};
//! use qkge::eval::{evaluate, EvalMode};
//! use qkge::sampling::NegativeSpec;
//! use qkge::training::{train, TrainingConfig};
//!
//! // Three entities in a cycle under one relation.
//! let vocab = Vocabulary::from_lists(
//!     vec!["a".into(), "b".into(), "c".into()],
//!     vec!["next".into()],
//! )
//! .unwrap();
//! let train_split = vec![
//!     Triple::new(0, 0, 1),
//!     Triple::new(1, 0, 2),
//!     Triple::new(2, 0, 0),
//! ];
//! let test_split = vec![Triple::new(0, 0, 1)];
//! let kg = KnowledgeGraph::from_parts(vocab, train_split, vec![], test_split);
//!
//! let config = TrainingConfig {
//!     epochs: 5,
//!     batch_size: 3,
//!     negative: NegativeSpec::new(1, 7),
//!     ..TrainingConfig::default()
//! };
//! let model = train(&kg, &config).unwrap();
//! let report = evaluate(&model.store, &kg, qkge::data::Split::Test, EvalMode::TailOnly).unwrap();
//! assert!(report.mrr > 0.0);
//! ```

pub mod ansatz;
pub mod checkpoint;
pub mod data;
pub mod error;
pub mod eval;
pub mod gradient;
pub mod model;
pub mod sampling;
pub mod simulator;
pub mod training;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
