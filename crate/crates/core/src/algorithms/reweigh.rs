//! Randomized iterative reweighing for unit covering over `Z^d`.
//!
//! Every integer unit cube `Q` (identified by its lower corner) carries a
//! weight `2^(e - (d+1))`, with `e = 0` for cubes never touched. A new point
//! `p` is handled by the first applicable branch:
//!
//! 1. `p` is already covered by a chosen cube: nothing happens.
//! 2. `p` lies in a bookkept cube of `B`: that cube joins `C1`.
//! 3. The weights of the `2^d` cubes containing `p` sum to at least 1: one of
//!    them joins `C2`.
//! 4. Otherwise `2d` cubes are drawn from those weights into `B`, the first
//!    draw joins `C1`, and every cube containing `p` doubles its weight.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;

use super::RngStream;
use crate::error::{invariant, Error, Result};
use crate::geometry::{binary_vectors, pow2, LatticePoint, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Covered = 1,
    FromBookkeeping = 2,
    HeavyWeight = 3,
    Sampled = 4,
}

impl Branch {
    pub fn number(self) -> u8 {
        self as u8
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReweighOutcome {
    /// Lower corner of the cube the point is assigned to.
    pub assigned: LatticePoint,
    pub branch: Branch,
    pub opened: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReweighStats {
    pub branch_counts: [u64; 4],
    pub samples_drawn: u64,
    pub max_exponent: u32,
}

impl ReweighStats {
    pub fn branch4(&self) -> u64 {
        self.branch_counts[3]
    }
}

/// The `2^d` integer unit cubes containing `p`, as lexicographically sorted
/// lower corners `p - β`, `β ∈ {0,1}^d`.
pub fn cubes_containing(p: &LatticePoint) -> Vec<LatticePoint> {
    let mut out: Vec<LatticePoint> = binary_vectors(p.dim()).map(|beta| p.offset(&beta, -1)).collect();
    out.sort();
    out
}

/// Draws one cube with probability `w(Q) / Σw`.
///
/// `weights` holds `(corner, exponent)` pairs in the order to enumerate; the
/// weights are scaled to the integers `2^exponent` so the draw is exact.
pub fn sample_cube(weights: &[(LatticePoint, u32)], rng: &mut RngStream) -> Result<LatticePoint> {
    let total: u64 = weights.iter().map(|(_, e)| 1u64 << e).sum();
    if total == 0 {
        return Err(Error::ZeroWeight);
    }
    let mut r = rng.below(total);
    for (corner, e) in weights {
        let w = 1u64 << e;
        if r < w {
            return Ok(corner.clone());
        }
        r -= w;
    }
    unreachable!("draw below the total weight")
}

#[derive(Clone, Debug)]
pub struct ReweighState {
    dim: usize,
    points: BTreeSet<LatticePoint>,
    c1: BTreeSet<LatticePoint>,
    c2: BTreeSet<LatticePoint>,
    b: BTreeSet<LatticePoint>,
    exponents: HashMap<LatticePoint, u32>,
    rng: RngStream,
    stats: ReweighStats,
}

impl ReweighState {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!((1..60).contains(&dim), "dimension out of range");
        ReweighState {
            dim,
            points: BTreeSet::new(),
            c1: BTreeSet::new(),
            c2: BTreeSet::new(),
            b: BTreeSet::new(),
            exponents: HashMap::new(),
            rng: RngStream::new(seed),
            stats: ReweighStats::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest exponent a weight may reach: weight 2.
    pub fn exponent_cap(&self) -> u32 {
        self.dim as u32 + 2
    }

    pub fn points(&self) -> &BTreeSet<LatticePoint> {
        &self.points
    }

    pub fn c1(&self) -> &BTreeSet<LatticePoint> {
        &self.c1
    }

    pub fn c2(&self) -> &BTreeSet<LatticePoint> {
        &self.c2
    }

    pub fn bookkept(&self) -> &BTreeSet<LatticePoint> {
        &self.b
    }

    pub fn stats(&self) -> &ReweighStats {
        &self.stats
    }

    /// `|C1 ∪ C2|`, the number of cubes the algorithm pays for.
    pub fn cube_count(&self) -> usize {
        self.c1.union(&self.c2).count()
    }

    pub fn exponent(&self, corner: &LatticePoint) -> u32 {
        self.exponents.get(corner).copied().unwrap_or(0)
    }

    pub fn weight(&self, corner: &LatticePoint) -> Rational {
        pow2(self.exponent(corner) as i64 - (self.dim as i64 + 1))
    }

    /// Exact total weight of the cubes containing `p`.
    pub fn weight_sum(&self, p: &LatticePoint) -> Result<Rational> {
        self.check(p)?;
        // Σ 2^e over a common denominator 2^(d+1).
        let num: u64 = cubes_containing(p).iter().map(|q| 1u64 << self.exponent(q)).sum();
        Ok(Rational::new(BigInt::from(num), BigInt::from(1u64 << (self.dim + 1))))
    }

    fn check(&self, p: &LatticePoint) -> Result<()> {
        if p.dim() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.dim(),
            })
        }
    }

    pub fn insert(&mut self, p: &LatticePoint) -> Result<ReweighOutcome> {
        self.check(p)?;
        self.points.insert(p.clone());
        let cubes = cubes_containing(p);

        if let Some(q) = cubes.iter().find(|q| self.c1.contains(*q) || self.c2.contains(*q)) {
            return Ok(self.finish(q.clone(), Branch::Covered, false));
        }
        if let Some(q) = cubes.iter().find(|q| self.b.contains(*q)) {
            self.c1.insert(q.clone());
            return Ok(self.finish(q.clone(), Branch::FromBookkeeping, true));
        }
        let heavy: u64 = cubes.iter().map(|q| 1u64 << self.exponent(q)).sum();
        if heavy >= 1u64 << (self.dim + 1) {
            let q = cubes[0].clone();
            self.c2.insert(q.clone());
            return Ok(self.finish(q, Branch::HeavyWeight, true));
        }

        let weights: Vec<(LatticePoint, u32)> = cubes.iter().map(|q| (q.clone(), self.exponent(q))).collect();
        let mut first = None;
        for _ in 0..2 * self.dim {
            let q = sample_cube(&weights, &mut self.rng)?;
            self.stats.samples_drawn += 1;
            self.b.insert(q.clone());
            first.get_or_insert(q);
        }
        let q = first.expect("at least two draws");
        self.c1.insert(q.clone());
        let cap = self.exponent_cap();
        for cube in &cubes {
            let e = self.exponents.entry(cube.clone()).or_insert(0);
            invariant(*e < cap, || format!("weight of cube {cube} would exceed 2"))?;
            *e += 1;
            self.stats.max_exponent = self.stats.max_exponent.max(*e);
        }
        Ok(self.finish(q, Branch::Sampled, true))
    }

    fn finish(&mut self, assigned: LatticePoint, branch: Branch, opened: bool) -> ReweighOutcome {
        self.stats.branch_counts[branch as usize - 1] += 1;
        ReweighOutcome {
            assigned,
            branch,
            opened,
        }
    }

    /// Structural invariants that need no knowledge of the optimum.
    pub fn audit(&self) -> Vec<(&'static str, bool)> {
        let covered = self.points.iter().all(|p| {
            cubes_containing(p)
                .iter()
                .any(|q| self.c1.contains(q) || self.c2.contains(q))
        });
        let cap = self.exponents.values().all(|&e| e <= self.exponent_cap());
        vec![
            ("weight_cap", cap),
            ("c1_subset_b", self.c1.is_subset(&self.b)),
            ("points_covered", covered),
        ]
    }

    /// Bounds that hold against an offline optimum of `opt` cubes.
    pub fn audit_against_opt(&self, opt: usize) -> Vec<(&'static str, bool)> {
        let d = self.dim as u64;
        let opt = opt as u64;
        let bound_b = 2 * d * (d + 2) * opt;
        vec![
            ("branch4_le_(d+2)opt", self.stats.branch4() <= (d + 2) * opt),
            ("b_le_2d(d+2)opt", self.b.len() as u64 <= bound_b),
            ("points_le_2^d_opt", self.points.len() as u64 <= (1u64 << d) * opt),
            (
                "cubes_le_b_bound_plus_c2",
                self.cube_count() as u64 <= bound_b + self.c2.len() as u64,
            ),
        ]
    }
}
