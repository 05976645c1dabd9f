use num_traits::One;

use super::{check_dim, Assignment, ClusterId, CornerIndex, CoverCube, OnlineCovering};
use crate::error::Result;
use crate::geometry::{rat, Aabb, Point, Rational};

/// Cubes placed so far plus a corner index for "oldest cube containing p".
#[derive(Clone, Debug)]
struct CubeSet {
    dim: usize,
    cubes: Vec<CoverCube>,
    index: CornerIndex,
}

impl CubeSet {
    fn new(dim: usize) -> Self {
        CubeSet {
            dim,
            cubes: Vec::new(),
            index: CornerIndex::default(),
        }
    }

    fn cover_with(&mut self, p: &Point, place: impl FnOnce(&Point) -> Aabb) -> Result<Assignment> {
        check_dim(self.dim, p)?;
        let hit = self
            .index
            .near(&p.cell())
            .into_iter()
            .find(|id| self.cubes[id.0].cube.contains_unchecked(p));
        if let Some(id) = hit {
            return Ok(Assignment {
                cluster: id,
                opened: false,
            });
        }
        let id = ClusterId(self.cubes.len());
        let cube = place(p);
        self.index.insert(cube.lo_point().cell(), id);
        self.cubes.push(CoverCube { id, cube });
        Ok(Assignment {
            cluster: id,
            opened: true,
        })
    }
}

/// Reuses the oldest cube containing the point, else opens the unit cube
/// centered at it.
#[derive(Clone, Debug)]
pub struct Centered(CubeSet);

impl Centered {
    pub fn new(dim: usize) -> Self {
        Centered(CubeSet::new(dim))
    }
}

impl OnlineCovering for Centered {
    fn name(&self) -> &'static str {
        "centered"
    }

    fn dim(&self) -> usize {
        self.0.dim
    }

    fn cover(&mut self, p: &Point) -> Result<Assignment> {
        let half = rat(1, 2);
        self.0.cover_with(p, |p| {
            let lo: Vec<Rational> = p.coords().iter().map(|c| c - &half).collect();
            Aabb::unit_cube(&Point::new(lo))
        })
    }

    fn cubes(&self) -> &[CoverCube] {
        &self.0.cubes
    }
}

/// Reuses the oldest cube containing the point, else opens the unit cube
/// whose lower corner is the point.
#[derive(Clone, Debug)]
pub struct FirstFitCover(CubeSet);

impl FirstFitCover {
    pub fn new(dim: usize) -> Self {
        FirstFitCover(CubeSet::new(dim))
    }
}

impl OnlineCovering for FirstFitCover {
    fn name(&self) -> &'static str {
        "firstfit"
    }

    fn dim(&self) -> usize {
        self.0.dim
    }

    fn cover(&mut self, p: &Point) -> Result<Assignment> {
        self.0.cover_with(p, |p| Aabb::cube(p, &Rational::one()))
    }

    fn cubes(&self) -> &[CoverCube] {
        &self.0.cubes
    }
}
