//! Online unit clustering and unit covering under the L∞ norm: online
//! algorithms, adaptive adversaries, an exact offline oracle and a harness
//! that measures competitive ratios.

pub mod adversaries;
pub mod algorithms;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod oracle;

pub use error::{Error, Result};
