//! Adaptive adversary forcing `2^d` cubes out of any deterministic online
//! unit coverer, while every presented point stays inside one unit cube.
//!
//! Alice keeps a cube `Q_i` of side `x_i = 1 - 2·4^(-i)` and presents an
//! uncovered vertex of it. After Bob places `U_i`, at most one previously
//! uncovered vertex can be *deeply* covered (boundary distance above
//! `(1 - x_i)/2`); Alice grows `Q_i` into `Q_{i+1}` anchored at that vertex
//! (or at `p_i`) and every other uncovered vertex stays uncovered.

use num_traits::One;
use serde::Serialize;

use super::LogRecord;
use crate::algorithms::{Assignment, ClusterId, CornerIndex, CoverCube, OnlineCovering, RngStream};
use crate::error::{Error, Result};
use crate::geometry::{int, pow2, rat, Aabb, Point, Rational};
use crate::oracle;

/// `x_i = 1 - 2·2^(-2i)`.
pub fn x_sequence(i: u32) -> Rational {
    assert!(i >= 1, "sequence starts at 1");
    Rational::one() - pow2(1 - 2 * i as i64)
}

fn deep_margin(side: &Rational) -> Rational {
    (Rational::one() - side) / int(2)
}

/// `v ∈ U` and `dist(v, ∂U) > (1 - x_i)/2`.
pub fn deeply_covered(v: &Point, u: &Aabb, i: u32) -> Result<bool> {
    deeply_covered_with_margin(v, u, &deep_margin(&x_sequence(i)))
}

fn deeply_covered_with_margin(v: &Point, u: &Aabb, margin: &Rational) -> Result<bool> {
    if !u.contains(v)? {
        return Ok(false);
    }
    Ok(u.dist_to_boundary(v)? > *margin)
}

/// The cube of side `side` containing `q` that has `anchor` (a vertex of `q`)
/// as a vertex.
fn grow_at(q: &Aabb, anchor: &Point, side: &Rational) -> Aabb {
    let (lo, hi): (Vec<Rational>, Vec<Rational>) = (0..q.dim())
        .map(|j| {
            let a = anchor.coord(j);
            if *a == q.lo()[j] {
                (a.clone(), a + side)
            } else {
                (a - side, a.clone())
            }
        })
        .unzip();
    Aabb::new(lo, hi).expect("valid cube")
}

/// Vertex of `to` with the same lo/hi pattern as `v` has in `from`.
fn corresponding_vertex(from: &Aabb, to: &Aabb, v: &Point) -> Point {
    Point::new(
        (0..from.dim())
            .map(|j| {
                if *v.coord(j) == from.lo()[j] {
                    to.lo()[j].clone()
                } else {
                    to.hi()[j].clone()
                }
            })
            .collect(),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct CubeStep {
    pub step: u32,
    pub side: String,
    pub point: Vec<String>,
    pub bob_cube: String,
    pub opened: bool,
    pub uncovered_before: usize,
    pub deep: Option<Vec<String>>,
    /// Vertices of the next target that should have stayed uncovered but
    /// were already covered.
    pub remapped_covered: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringGameReport {
    pub d: usize,
    pub bob: String,
    pub alg: usize,
    pub opt: usize,
    pub points: Vec<Vec<String>>,
    pub steps: Vec<CubeStep>,
    pub max_deep: usize,
    pub checks: Vec<(String, bool)>,
    pub violations: Vec<String>,
}

impl CoveringGameReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// State of Alice's cube between steps.
#[derive(Clone, Debug)]
pub struct CubeGameState {
    pub d: usize,
    pub step: u32,
    pub target: Aabb,
    pub presented: Vec<Point>,
}

impl CubeGameState {
    pub fn new(d: usize) -> Self {
        CubeGameState {
            d,
            step: 1,
            target: Aabb::cube(&Point::new(vec![int(0); d]), &x_sequence(1)),
            presented: Vec::new(),
        }
    }

    pub fn uncovered_vertices(&self, cubes: &[CoverCube]) -> Vec<Point> {
        self.target
            .vertices()
            .into_iter()
            .filter(|v| !cubes.iter().any(|c| c.cube.contains_unchecked(v)))
            .collect()
    }
}

/// Plays `2^d` steps against `bob`.
pub fn covering_game_run(
    d: usize,
    bob: &mut dyn OnlineCovering,
    mut log: Option<&mut dyn FnMut(LogRecord)>,
) -> Result<CoveringGameReport> {
    if d == 0 || d > 16 {
        return Err(Error::InvalidParameter(format!(
            "covering game needs 1 <= d <= 16, got {d}"
        )));
    }
    if bob.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bob.dim(),
        });
    }
    let total = 1u32 << d;
    let mut state = CubeGameState::new(d);
    let mut steps = Vec::with_capacity(total as usize);
    let mut max_deep = 0usize;
    let mut gap_ok = true;
    let mut violations = Vec::new();

    for i in 1..=total {
        state.step = i;
        let uncovered = state.uncovered_vertices(bob.cubes());
        if (uncovered.len() as u32) < total - i + 1 {
            violations.push(format!(
                "uncovered count, step {i}: only {} uncovered vertices",
                uncovered.len()
            ));
        }
        // with no uncovered vertex left Alice still has to present something
        let p = uncovered.first().cloned().unwrap_or_else(|| state.target.lo_point());
        state.presented.push(p.clone());
        if !state.presented.iter().all(|q| state.target.contains_unchecked(q)) {
            violations.push(format!(
                "presented point, step {i}: presented point outside the target cube"
            ));
        }

        let before: Vec<CoverCube> = bob.cubes().to_vec();
        bob.observe_target(&state.target);
        let Assignment { cluster, opened } = bob.cover(&p)?;
        let cubes = bob.cubes();
        if cubes.len() < before.len() || cubes[..before.len()] != before[..] {
            return Err(Error::Protocol(format!("step {i}: a placed cube moved or vanished")));
        }
        let u = match cubes.get(cluster.0) {
            Some(c) if c.cube.contains_unchecked(&p) => c.cube.clone(),
            _ => return Err(Error::Protocol(format!("step {i}: point {p} left uncovered"))),
        };
        if !u.is_unit_cube() {
            return Err(Error::Protocol(format!("step {i}: cube {u} is not a unit cube")));
        }

        let deep: Vec<&Point> = uncovered
            .iter()
            .filter(|v| deeply_covered(v, &u, i).expect("same dimension"))
            .collect();
        max_deep = max_deep.max(deep.len());
        if deep.len() > 1 {
            violations.push(format!("deep cover, step {i}: {} vertices deeply covered", deep.len()));
        }

        let mut newly_covered = Vec::new();
        if i < total {
            let x_next = x_sequence(i + 1);
            let gap = &x_next - x_sequence(i);
            gap_ok &= gap == int(3) * pow2(-(2 * i as i64 + 1)) && gap > deep_margin(&x_sequence(i));
            let anchor = deep.first().map_or(p.clone(), |v| (*v).clone());
            let next = grow_at(&state.target, &anchor, &x_next);
            for v in uncovered.iter().filter(|v| **v != anchor && !deep.contains(v)) {
                let w = corresponding_vertex(&state.target, &next, v);
                if bob.cubes().iter().any(|c| c.cube.contains_unchecked(&w)) {
                    newly_covered.push(w.coord_strings());
                    violations.push(format!("vertex map, step {i}: {v} maps to covered vertex {w}"));
                }
            }
            state.target = next;
        }

        if let Some(log) = log.as_deref_mut() {
            let mut rec = LogRecord::point("covering", 1, (i - 1) as usize, &p, cluster.0, opened);
            rec.certificates = deep.iter().map(|v| format!("deep {v}")).collect();
            log(rec);
        }
        steps.push(CubeStep {
            step: i,
            side: x_sequence(i).to_string(),
            point: p.coord_strings(),
            bob_cube: u.to_string(),
            opened,
            uncovered_before: uncovered.len(),
            deep: deep.first().map(|v| v.coord_strings()),
            remapped_covered: newly_covered,
        });
    }

    let alg = bob.cubes().len();
    let opt = oracle::exact_opt(&state.presented)?.cubes.len();
    let unit_span = state.presented.iter().fold(Aabb::point(&state.presented[0]), |b, p| {
        b.extend(p).expect("same dimension")
    });
    let failed = |tag: &str| violations.iter().any(|v| v.starts_with(tag));
    let checks = vec![
        ("alg_equals_2^d".to_string(), alg == total as usize),
        ("opt_equals_1".to_string(), opt == 1),
        (
            "points_within_unit_cube".to_string(),
            unit_span.max_extent() < Rational::one(),
        ),
        ("presented_points_in_target".to_string(), !failed("presented point,")),
        ("enough_uncovered_vertices".to_string(), !failed("uncovered count,")),
        ("at_most_one_deep_vertex".to_string(), !failed("deep cover,")),
        ("uncovered_vertices_stay_uncovered".to_string(), !failed("vertex map,")),
        ("side_gap_exceeds_margin".to_string(), gap_ok),
    ];
    Ok(CoveringGameReport {
        d,
        bob: bob.name().to_string(),
        alg,
        opt,
        points: state.presented.iter().map(Point::coord_strings).collect(),
        steps,
        max_deep,
        checks,
        violations,
    })
}

/// A randomized coverer that tries to deeply cover as many of the target's
/// uncovered vertices as it can with each new cube.
#[derive(Clone, Debug)]
pub struct MaliciousBob {
    dim: usize,
    rng: RngStream,
    target: Option<Aabb>,
    cubes: Vec<CoverCube>,
    index: CornerIndex,
    random_candidates: usize,
}

impl MaliciousBob {
    pub fn new(dim: usize, seed: u64) -> Self {
        MaliciousBob {
            dim,
            rng: RngStream::new(seed),
            target: None,
            cubes: Vec::new(),
            index: CornerIndex::default(),
            random_candidates: 32,
        }
    }

    /// Uniform dyadic in `[0, 1]` with denominator `2^20`.
    fn unit_draw(&mut self) -> Rational {
        rat(self.rng.below((1 << 20) + 1) as i64, 1 << 20)
    }

    /// Lower corner of a cube containing `p` that deeply covers `v` when
    /// possible: coordinates where `v` and `p` agree are centered, the others
    /// shifted toward `v` by a random fraction of the margin.
    fn aim(&mut self, p: &Point, v: &Point, margin: &Rational) -> Point {
        let half = rat(1, 2);
        let lo = (0..self.dim)
            .map(|j| {
                let (pj, vj) = (p.coord(j), v.coord(j));
                let wiggle = margin * self.unit_draw();
                if vj == pj {
                    pj - &half
                } else if vj > pj {
                    pj - wiggle
                } else {
                    pj - Rational::one() + wiggle
                }
            })
            .collect();
        Point::new(lo)
    }

    fn score(&self, cube: &Aabb, margin: &Rational) -> usize {
        let Some(target) = &self.target else { return 0 };
        target
            .vertices()
            .iter()
            .filter(|v| !self.cubes.iter().any(|c| c.cube.contains_unchecked(v)))
            .filter(|v| deeply_covered_with_margin(v, cube, margin).unwrap_or(false))
            .count()
    }
}

impl OnlineCovering for MaliciousBob {
    fn name(&self) -> &'static str {
        "malicious"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn observe_target(&mut self, target: &Aabb) {
        self.target = Some(target.clone());
    }

    fn cover(&mut self, p: &Point) -> Result<Assignment> {
        crate::algorithms::check_dim(self.dim, p)?;
        if let Some(id) = self
            .index
            .near(&p.cell())
            .into_iter()
            .find(|id| self.cubes[id.0].cube.contains_unchecked(p))
        {
            return Ok(Assignment {
                cluster: id,
                opened: false,
            });
        }
        let margin = self
            .target
            .as_ref()
            .map_or_else(|| rat(1, 4), |t| deep_margin(&t.extent(0)));
        let mut candidates: Vec<Aabb> = Vec::new();
        if let Some(target) = self.target.clone() {
            for v in target.vertices() {
                let lo = self.aim(p, &v, &margin);
                candidates.push(Aabb::unit_cube(&lo));
            }
        }
        for _ in 0..self.random_candidates {
            let lo: Vec<Rational> = (0..self.dim).map(|j| p.coord(j) - self.unit_draw()).collect();
            candidates.push(Aabb::unit_cube(&Point::new(lo)));
        }
        let scores: Vec<usize> = candidates.iter().map(|c| self.score(c, &margin)).collect();
        let best = *scores.iter().max().expect("candidates exist");
        let top: Vec<usize> = (0..candidates.len()).filter(|&k| scores[k] == best).collect();
        let pick = top[self.rng.below(top.len() as u64) as usize];
        let cube = candidates.swap_remove(pick);
        debug_assert!(cube.contains_unchecked(p));
        let id = ClusterId(self.cubes.len());
        self.index.insert(cube.lo_point().cell(), id);
        self.cubes.push(CoverCube { id, cube });
        Ok(Assignment {
            cluster: id,
            opened: true,
        })
    }

    fn cubes(&self) -> &[CoverCube] {
        &self.cubes
    }
}
