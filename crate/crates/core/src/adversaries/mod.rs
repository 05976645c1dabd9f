//! Adversaries and hard-instance generators.

mod clustering_game;
mod covering_game;
mod instances;

pub use clustering_game::{
    certified_expiry, classify_clusters, clustering_game_run, perturb_point, shift_covers_perturbed, ClusterClass,
    ClusterGameConfig, ClusterGameReport, ClusterGameState, GameMode, Perturbation, RoundRecord, Signature,
};
pub use covering_game::{
    covering_game_run, deeply_covered, x_sequence, CoveringGameReport, CubeGameState, CubeStep, MaliciousBob,
};
pub use instances::{
    barycentric_instance, diagonal_pairs_instance, gen_s1, pairs_are_isolated, random_lattice_instance,
    BarycentricInstance,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{binary_vectors, Point};

/// Translation in `{0,1}^d` of the odd-corner cube tiling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ShiftVector(Vec<u8>);

impl ShiftVector {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        if entries.iter().any(|&e| e > 1) {
            return Err(Error::InvalidParameter("shift entries must be 0 or 1".into()));
        }
        Ok(ShiftVector(entries))
    }

    pub fn zeros(d: usize) -> Self {
        ShiftVector(vec![0; d])
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// All `2^d` shift vectors, lexicographically.
    pub fn all(d: usize) -> impl Iterator<Item = ShiftVector> {
        binary_vectors(d).map(|v| ShiftVector(v.into_iter().map(|b| b as u8).collect()))
    }
}

/// One line of a duel's JSON-lines log.
#[derive(Clone, Debug, Serialize)]
pub struct LogRecord {
    pub game: &'static str,
    pub round: usize,
    pub step: Option<usize>,
    pub point: Option<Vec<String>>,
    pub cluster: Option<usize>,
    pub opened: Option<bool>,
    pub action: String,
    pub certificates: Vec<String>,
}

impl LogRecord {
    pub(crate) fn point(
        game: &'static str,
        round: usize,
        step: usize,
        p: &Point,
        cluster: usize,
        opened: bool,
    ) -> Self {
        LogRecord {
            game,
            round,
            step: Some(step),
            point: Some(p.coord_strings()),
            cluster: Some(cluster),
            opened: Some(opened),
            action: if opened { "open".into() } else { "join".into() },
            certificates: Vec::new(),
        }
    }

    pub(crate) fn certificates(game: &'static str, round: usize, certificates: Vec<String>, action: String) -> Self {
        LogRecord {
            game,
            round,
            step: None,
            point: None,
            cluster: None,
            opened: None,
            action,
            certificates,
        }
    }
}
