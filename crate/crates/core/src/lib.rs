//! Dynamic ensemble selection with a meta-learning recommender.
//!
//! The crate generates classifier pools with seven schemes, applies seven
//! dynamic-selection methods, evaluates the 7x7 grid per dataset and trains
//! meta-models that recommend a pool scheme, a selection method or both
//! from dataset meta-features. A leave-one-dataset-out harness scores the
//! recommendations against majority and average baselines.

pub mod config;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod learners;
pub mod metafeatures;
pub mod pool;
pub mod recommender;
pub mod registry;
pub mod rng;
pub mod selection;

pub use config::Config;
pub use error::{Error, Result};
