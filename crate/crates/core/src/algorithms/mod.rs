//! Online clustering and covering algorithms.
//!
//! Clustering algorithms keep mutable point groups whose bounding boxes may
//! grow up to extent 1; covering algorithms place closed unit cubes that never
//! move. Both obey the online rules: an assigned point never changes cluster
//! and clusters never merge.

mod centered;
mod greedy;
mod grid;
mod reweigh;
mod rng;

pub use centered::{Centered, FirstFitCover};
pub use greedy::{Greedy, TieBreak};
pub use grid::Grid;
pub use reweigh::{cubes_containing, sample_cube, Branch, ReweighOutcome, ReweighState, ReweighStats};
pub use rng::RngStream;

use std::collections::HashMap;
use std::fmt;

use crate::error::Result;
use crate::geometry::{Aabb, LatticePoint, Point};

/// Creation index of a cluster or cube. Dense, never reused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct ClusterId(pub usize);

impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub cluster: ClusterId,
    pub opened: bool,
}

#[derive(Clone, Debug)]
pub struct Cluster {
    id: ClusterId,
    members: Vec<Point>,
    bbox: Aabb,
}

impl Cluster {
    pub(crate) fn singleton(id: ClusterId, p: &Point) -> Self {
        Cluster {
            id,
            members: vec![p.clone()],
            bbox: Aabb::point(p),
        }
    }

    pub(crate) fn push(&mut self, p: &Point) -> Result<bool> {
        self.members.push(p.clone());
        self.bbox.extend_in_place(p)
    }

    pub fn id(&self) -> ClusterId {
        self.id
    }

    pub fn members(&self) -> &[Point] {
        &self.members
    }

    pub fn bbox(&self) -> &Aabb {
        &self.bbox
    }
}

/// A placed closed unit cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCube {
    pub id: ClusterId,
    pub cube: Aabb,
}

pub trait OnlineClustering {
    fn name(&self) -> &'static str;
    fn dim(&self) -> usize;
    fn insert(&mut self, p: &Point) -> Result<Assignment>;
    fn clusters(&self) -> &[Cluster];
}

pub trait OnlineCovering {
    fn name(&self) -> &'static str;
    fn dim(&self) -> usize;
    fn cover(&mut self, p: &Point) -> Result<Assignment>;
    fn cubes(&self) -> &[CoverCube];

    /// Adaptive coverers may look at the adversary's current target cube.
    fn observe_target(&mut self, _target: &Aabb) {}
}

/// Buckets ids by the grid cell of a reference corner so that neighbourhood
/// queries only touch `3^d` cells.
#[derive(Clone, Debug, Default)]
pub(crate) struct CornerIndex {
    cells: HashMap<LatticePoint, Vec<ClusterId>>,
}

impl CornerIndex {
    pub(crate) fn insert(&mut self, key: LatticePoint, id: ClusterId) {
        self.cells.entry(key).or_default().push(id);
    }

    pub(crate) fn remove(&mut self, key: &LatticePoint, id: ClusterId) {
        if let Some(ids) = self.cells.get_mut(key) {
            ids.retain(|&x| x != id);
            if ids.is_empty() {
                self.cells.remove(key);
            }
        }
    }

    /// Ids whose key lies in `center + {-1,0,1}^d`, sorted ascending.
    pub(crate) fn near(&self, center: &LatticePoint) -> Vec<ClusterId> {
        let d = center.dim();
        let mut out = Vec::new();
        let mut offset = vec![-1i64; d];
        loop {
            let key = LatticePoint(center.0.iter().zip(&offset).map(|(c, o)| c + o).collect());
            if let Some(ids) = self.cells.get(&key) {
                out.extend_from_slice(ids);
            }
            let mut j = 0;
            while j < d && offset[j] == 1 {
                offset[j] = -1;
                j += 1;
            }
            if j == d {
                break;
            }
            offset[j] += 1;
        }
        out.sort_unstable();
        out
    }
}

pub(crate) fn check_dim(expected: usize, p: &Point) -> Result<()> {
    if p.dim() == expected {
        Ok(())
    } else {
        Err(crate::error::Error::DimensionMismatch {
            expected,
            found: p.dim(),
        })
    }
}
