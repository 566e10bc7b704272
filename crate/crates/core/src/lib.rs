//! Spectral structural importance for nodes of weighted temporal networks.
//!
//! [`importance`] measures how strongly a node's strength steers the adjacency spectrum,
//! with community structure and benchmark centralities in [`netstats`]. On top of these
//! sits a presence-prediction pipeline over snapshot history ([`features`], [`model`],
//! [`pipeline`]).

pub mod cli;
pub mod cluster;
pub mod error;
pub mod features;
pub mod generate;
pub mod graph;
pub mod importance;
pub mod ingest;
pub mod model;
pub mod netstats;
pub mod pipeline;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{adjacency, strength, Edge, Snapshot, StrengthMode, TemporalNetwork, WeightedMatrix};
pub use importance::{node_importance, node_importance_directed, ImportanceVector, Scheme};
pub use spectral::{eig_sym, leading_singular, select_eigencomponent, ComponentSet, Spectrum};
