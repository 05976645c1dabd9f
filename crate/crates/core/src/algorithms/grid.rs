use std::collections::HashMap;

use super::{check_dim, Assignment, Cluster, ClusterId, CoverCube, OnlineClustering, OnlineCovering};
use crate::error::Result;
use crate::geometry::{LatticePoint, Point};

/// Assigns each point to its half-open grid cell `∏ [i_j, i_j + 1)`.
///
/// As a coverer it places the closed cell `∏ [i_j, i_j + 1]`.
#[derive(Clone, Debug)]
pub struct Grid {
    dim: usize,
    cells: HashMap<LatticePoint, ClusterId>,
    clusters: Vec<Cluster>,
    cubes: Vec<CoverCube>,
}

impl Grid {
    pub fn new(dim: usize) -> Self {
        Grid {
            dim,
            cells: HashMap::new(),
            clusters: Vec::new(),
            cubes: Vec::new(),
        }
    }

    /// Lower corner of the cell owned by `id`.
    pub fn cell_of(&self, id: ClusterId) -> Point {
        self.cubes[id.0].cube.lo_point()
    }

    fn place(&mut self, p: &Point) -> Result<Assignment> {
        check_dim(self.dim, p)?;
        let key = p.cell();
        if let Some(&id) = self.cells.get(&key) {
            self.clusters[id.0].push(p)?;
            return Ok(Assignment {
                cluster: id,
                opened: false,
            });
        }
        let id = ClusterId(self.clusters.len());
        self.cubes.push(CoverCube {
            id,
            cube: key.unit_cube(),
        });
        self.cells.insert(key, id);
        self.clusters.push(Cluster::singleton(id, p));
        Ok(Assignment {
            cluster: id,
            opened: true,
        })
    }
}

impl OnlineClustering for Grid {
    fn name(&self) -> &'static str {
        "grid"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn insert(&mut self, p: &Point) -> Result<Assignment> {
        self.place(p)
    }

    fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }
}

impl OnlineCovering for Grid {
    fn name(&self) -> &'static str {
        "grid"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn cover(&mut self, p: &Point) -> Result<Assignment> {
        self.place(p)
    }

    fn cubes(&self) -> &[CoverCube] {
        &self.cubes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    fn pt(c: &[(i64, i64)]) -> Point {
        Point::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn same_cell_reuses_cluster() {
        let mut g = Grid::new(2);
        let a = g.insert(&pt(&[(1, 2), (1, 2)])).unwrap();
        let b = g.insert(&pt(&[(9, 10), (1, 10)])).unwrap();
        assert!(a.opened);
        assert_eq!(
            b,
            Assignment {
                cluster: a.cluster,
                opened: false
            }
        );
        assert_eq!(g.cell_of(a.cluster), Point::from_ints(&[0, 0]));
    }

    #[test]
    fn cell_boundary_is_half_open() {
        let mut g = Grid::new(2);
        g.insert(&pt(&[(1, 2), (1, 2)])).unwrap();
        let b = g.insert(&Point::from_ints(&[1, 1])).unwrap();
        assert!(b.opened);
        assert_eq!(g.cell_of(b.cluster), Point::from_ints(&[1, 1]));
    }

    #[test]
    fn negative_coordinates_floor_downward() {
        let mut g = Grid::new(1);
        let a = g.insert(&pt(&[(-1, 4)])).unwrap();
        assert_eq!(g.cell_of(a.cluster), Point::from_ints(&[-1]));
    }

    #[test]
    fn tight_example_splits_one_unit_cube_into_2_pow_d_cells() {
        for d in 1..=4usize {
            let mut g = Grid::new(d);
            for bits in crate::geometry::binary_vectors(d) {
                let p = Point::new(bits.iter().map(|&b| rat(1 + b, 2)).collect());
                g.insert(&p).unwrap();
            }
            assert_eq!(g.clusters().len(), 1 << d);
            assert!(g.cubes().iter().all(|c| c.cube.is_unit_cube()));
        }
    }
}
