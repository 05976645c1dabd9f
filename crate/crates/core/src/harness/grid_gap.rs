//! Planar instance on which Grid opens 11 clusters against an optimum of 6.
//!
//! Found by random search over points with coordinates `k/4`, `0 <= k <= 12`:
//! plant six unit squares, keep a random subset of their corners, and accept
//! when Grid and the exact oracle give (11, 6). The shipped copy lives in
//! `tests/data/grid_gap.txt`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algorithms::{Grid, OnlineClustering};
use crate::error::Result;
use crate::geometry::{Instance, Point};
use crate::oracle;

pub const TARGET_GRID: u64 = 11;
pub const TARGET_OPT: u64 = 6;

/// Clusters Grid opens on `points` in order.
pub fn grid_count(points: &[Point]) -> Result<u64> {
    let d = points.first().map_or(2, Point::dim);
    let mut g = Grid::new(d);
    for p in points {
        g.insert(p)?;
    }
    Ok(g.clusters().len() as u64)
}

fn hits(points: &[Point]) -> Result<bool> {
    Ok(grid_count(points)? == TARGET_GRID && oracle::exact_opt(points)?.len() as u64 == TARGET_OPT)
}

/// Random search; `None` after `tries` misses. The result is pruned to a
/// point set where dropping any single point breaks the (11, 6) pair.
pub fn search(seed: u64, tries: usize) -> Result<Option<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tries {
        let mut pts = BTreeSet::new();
        for _ in 0..TARGET_OPT {
            let (x, y) = (rng.gen_range(0..=8i64), rng.gen_range(0..=8i64));
            for (dx, dy) in [(0, 0), (4, 0), (0, 4), (4, 4)] {
                if rng.gen_bool(0.75) {
                    pts.insert(Point::from_scaled(&[x + dx, y + dy], 4));
                }
            }
        }
        let mut pts: Vec<Point> = pts.into_iter().collect();
        if grid_count(&pts)? < TARGET_GRID || !hits(&pts)? {
            continue;
        }
        let mut i = 0;
        while i < pts.len() {
            let mut fewer = pts.clone();
            fewer.remove(i);
            if hits(&fewer)? {
                pts = fewer;
            } else {
                i += 1;
            }
        }
        return Ok(Some(Instance::new(2, pts)?));
    }
    Ok(None)
}
