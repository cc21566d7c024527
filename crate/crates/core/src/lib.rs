//! Search, verification, and cataloging of stable non-synchronized
//! phase-locked states of the identical-frequency Kuramoto model on cubic
//! graphs.

pub mod analytic;
pub mod continuation;
pub mod dynamics;
pub mod error;
pub mod graphs;
pub mod search;

pub use dynamics::PhaseState;
pub use error::{Error, Result};
pub use graphs::CubicGraph;
