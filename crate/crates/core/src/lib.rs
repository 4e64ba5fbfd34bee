//! Exact, enumeration-based laboratory for the learnability of
//! out-of-distribution (OOD) detection on finite domains.
//!
//! Every object lives on a finite feature space, so every infimum, supremum
//! and learnability condition is decided by enumeration rather than
//! approximated:
//!
//! - [`domain`]: feature spaces, ID/OOD distributions, domains and domain spaces
//! - [`loss`]: loss tables, risks, α-risks and their exact infima
//! - [`auc`]: AUC with the half-tie term, exact suprema and the Bayes ranker
//! - [`hypothesis`]: hypothesis spaces, projections, composition, VC/Natarajan dimension
//! - [`fcnn`]: ReLU networks, score functions and explicit network constructions
//! - [`conditions`]: condition checkers and the learnability verdict table
//! - [`learners`]: nearest-neighbour, ERM, constrained and MMD-dispatch learners
//! - [`counterexamples`]: impossibility constructions with recomputed certificates
//! - [`io`] and [`experiment`]: file formats and the experiment driver behind the CLI

pub mod auc;
pub mod conditions;
pub mod counterexamples;
pub mod domain;
pub mod error;
pub mod experiment;
pub mod fcnn;
pub mod hypothesis;
pub mod io;
pub mod learners;
pub mod loss;

pub use error::{LabError, Result};
