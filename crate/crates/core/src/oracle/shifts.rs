//! Near-optimal solutions from the odd-corner unit-cube tiling and its
//! `{0,1}^d` translates.

use std::collections::{BTreeMap, BTreeSet};

use super::CoverSolution;
use crate::adversaries::ShiftVector;
use crate::geometry::{floor_i64, is_integer, Aabb, Point, Rational};

/// Odd integer `a` with `t - shift ∈ [a, a+1]`, if any, plus `shift`.
fn odd_corner(t: &Rational, shift: i64) -> Option<i64> {
    let f = floor_i64(t) - shift;
    let odd = f.rem_euclid(2) == 1;
    if is_integer(t) {
        Some(if odd { f } else { f - 1 } + shift)
    } else if odd {
        Some(f + shift)
    } else {
        None
    }
}

/// Groups `points` by the translated odd-corner cube `Q + τ` holding them;
/// `None` when some point lies in no such cube.
pub fn grid_shift_solution(points: &[Point], tau: &ShiftVector) -> Option<CoverSolution> {
    // odd-corner cubes meet only in faces with even coordinates, so each
    // point lies in exactly one cube when it lies in any
    let mut corner_of = Vec::with_capacity(points.len());
    for p in points {
        if p.dim() != tau.dim() {
            return None;
        }
        let corner = p
            .coords()
            .iter()
            .zip(tau.entries())
            .map(|(t, &s)| odd_corner(t, s as i64))
            .collect::<Option<Vec<_>>>()?;
        corner_of.push(corner);
    }
    let index: BTreeMap<&Vec<i64>, usize> = corner_of
        .iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(k, c)| (c, k))
        .collect();
    let assignment = corner_of.iter().map(|c| index[c]).collect();
    let cubes = index.keys().map(|c| Aabb::unit_cube(&Point::from_ints(c))).collect();
    Some(CoverSolution { cubes, assignment })
}

/// Smallest covering translate, or `None` if no translate covers.
pub fn opt_upper_via_shifts(points: &[Point]) -> Option<usize> {
    let d = points.first()?.dim();
    ShiftVector::all(d)
        .filter_map(|tau| grid_shift_solution(points, &tau).map(|s| s.len()))
        .min()
}
