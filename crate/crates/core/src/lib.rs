//! Deterministic system-level simulator for multi-layer cellular networks
//! with upper mid-band carriers: hexagonal deployments, 3GPP-style channel
//! models, DFT beam codebooks, priority-based cell reselection, per-PRB SINR
//! and rate evaluation, and a component-level power model.

pub mod assoc;
pub mod beams;
pub mod catalog;
pub mod channel;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod link;
pub mod output;
pub mod power;
pub mod rng;
pub mod scenario;

pub use engine::{run, ResultSet};
pub use error::{Result, SimError};
pub use scenario::{expand_scenario, ScenarioConfig, SCENARIO_NAMES};
