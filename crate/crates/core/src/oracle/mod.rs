//! Exact offline optimum for unit covering, which under L∞ is also the
//! optimum for unit clustering: a set of diameter at most 1 fits in one
//! closed unit cube and vice versa.
//!
//! Points are split into connected components of the "distance ≤ 1" graph,
//! and each component is solved by branch-and-bound set cover over canonical
//! cubes (every lower face touches a point), stored as `u64` bitsets.

mod shifts;
mod structured;

pub use shifts::{grid_shift_solution, opt_upper_via_shifts};
pub use structured::{structured_opt, StructuredKind};

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::geometry::{binary_vectors, int, linf_dist, Aabb, LatticePoint, Point, Rational};

const WORD: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest connected component (after dedup) solved exactly; at most 64.
    pub max_points: usize,
    pub max_candidates: usize,
    pub max_nodes: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_points: 64,
            max_candidates: 200_000,
            max_nodes: 20_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSolution {
    pub cubes: Vec<Aabb>,
    /// Input point index to cube index.
    pub assignment: Vec<usize>,
}

impl CoverSolution {
    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    /// Sorts cubes and assigns every point to the first cube holding it.
    pub(crate) fn from_cubes(points: &[Point], mut cubes: Vec<Aabb>) -> Option<Self> {
        cubes.sort();
        cubes.dedup();
        let mut by_cell: HashMap<LatticePoint, Vec<usize>> = HashMap::new();
        for (k, c) in cubes.iter().enumerate() {
            by_cell.entry(c.lo_point().cell()).or_default().push(k);
        }
        let d = points.first().map_or(0, Point::dim);
        let assignment = points
            .iter()
            .map(|p| {
                // a unit cube holding p has its lower corner in cell(p) - {0,1}^d
                let cell = p.cell();
                binary_vectors(d)
                    .filter_map(|beta| by_cell.get(&cell.offset(&beta, -1)))
                    .flatten()
                    .copied()
                    .filter(|&k| cubes[k].contains_unchecked(p))
                    .min()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(CoverSolution { cubes, assignment })
    }

    /// Every point lies in its assigned cube and every cube is a unit cube.
    pub fn is_valid_for(&self, points: &[Point]) -> bool {
        self.assignment.len() == points.len()
            && self.cubes.iter().all(Aabb::is_unit_cube)
            && points
                .iter()
                .zip(&self.assignment)
                .all(|(p, &k)| self.cubes.get(k).is_some_and(|c| c.contains(p).unwrap_or(false)))
    }
}

pub fn exact_opt(points: &[Point]) -> Result<CoverSolution> {
    exact_opt_with(points, &OracleConfig::default())
}

pub fn exact_opt_with(points: &[Point], cfg: &OracleConfig) -> Result<CoverSolution> {
    if cfg.max_points > WORD {
        return Err(Error::InvalidParameter(format!("max_points must be at most {WORD}")));
    }
    let Some(d) = points.first().map(Point::dim) else {
        return Ok(CoverSolution {
            cubes: Vec::new(),
            assignment: Vec::new(),
        });
    };
    for p in points {
        crate::algorithms::check_dim(d, p)?;
    }
    let unique: Vec<Point> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut cubes = Vec::new();
    for comp in components(&unique, cfg.max_points)? {
        let pts: Vec<Point> = comp.iter().map(|&i| unique[i].clone()).collect();
        cubes.extend(solve_component(&pts, cfg)?);
    }
    Ok(CoverSolution::from_cubes(points, cubes).expect("components are covered"))
}

/// Connected components of the graph joining points at L∞ distance ≤ 1,
/// each sorted, in order of their smallest member. Stops with an error as
/// soon as a component grows past `limit`.
pub(crate) fn components(points: &[Point], limit: usize) -> Result<Vec<Vec<usize>>> {
    let mut cells: HashMap<LatticePoint, Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        cells.entry(p.cell()).or_default().push(i);
    }
    let d = points.first().map_or(0, Point::dim);
    let offsets: Vec<Vec<i64>> = neighbour_offsets(d).collect();
    let one = int(1);
    let mut seen = vec![false; points.len()];
    let mut out = Vec::new();
    for start in 0..points.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut head = 0;
        while head < comp.len() {
            let i = comp[head];
            head += 1;
            let c = points[i].cell();
            for delta in &offsets {
                let key = LatticePoint(c.0.iter().zip(delta).map(|(a, b)| a + b).collect());
                for &k in cells.get(&key).into_iter().flatten() {
                    if !seen[k] && linf_dist(&points[i], &points[k]).expect("same dimension") <= one {
                        seen[k] = true;
                        comp.push(k);
                    }
                }
            }
            if comp.len() > limit {
                return Err(Error::OracleLimit {
                    what: "component",
                    size: comp.len(),
                    limit,
                });
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    Ok(out)
}

fn neighbour_offsets(d: usize) -> impl Iterator<Item = Vec<i64>> {
    (0..3usize.pow(d as u32)).map(move |mut n| {
        (0..d)
            .map(|_| {
                let r = (n % 3) as i64 - 1;
                n /= 3;
                r
            })
            .collect()
    })
}

/// Canonical candidate cubes for a component: lower corners drawn coordinate
/// by coordinate from the points the partial cube still holds, deduplicated
/// by coverage and with dominated coverages removed. Sorted by corner.
#[derive(Clone, Debug)]
pub struct CanonicalCubeSet {
    pub corners: Vec<Point>,
    pub coverage: Vec<u64>,
}

impl CanonicalCubeSet {
    pub fn build(points: &[Point], max_candidates: usize) -> Result<Self> {
        assert!(points.len() <= WORD);
        let d = points.first().map_or(0, Point::dim);
        let full = mask_all(points.len());
        let mut raw: Vec<(u64, Vec<Rational>)> = Vec::new();
        let mut corner = Vec::with_capacity(d);
        expand(points, full, 0, &mut corner, &mut raw, max_candidates)?;

        // keep the smallest corner for each coverage, then drop dominated ones
        raw.sort();
        raw.dedup_by(|b, a| a.0 == b.0);
        raw.sort_by(|a, b| b.0.count_ones().cmp(&a.0.count_ones()).then_with(|| a.1.cmp(&b.1)));
        let mut kept: Vec<(u64, Vec<Rational>)> = Vec::new();
        for (m, c) in raw {
            if !kept.iter().any(|(k, _)| m & !k == 0) {
                kept.push((m, c));
            }
        }
        kept.sort_by(|a, b| a.1.cmp(&b.1));
        let (coverage, corners) = kept.into_iter().map(|(m, c)| (m, Point::new(c))).unzip();
        Ok(CanonicalCubeSet { corners, coverage })
    }

    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }
}

fn mask_all(n: usize) -> u64 {
    if n == WORD {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

fn expand(
    points: &[Point],
    mask: u64,
    j: usize,
    corner: &mut Vec<Rational>,
    out: &mut Vec<(u64, Vec<Rational>)>,
    limit: usize,
) -> Result<()> {
    let d = points[0].dim();
    if j == d {
        if out.len() >= limit {
            return Err(Error::OracleLimit {
                what: "candidate count",
                size: out.len() + 1,
                limit,
            });
        }
        out.push((mask, corner.clone()));
        return Ok(());
    }
    let values: BTreeSet<&Rational> = bits(mask).map(|i| points[i].coord(j)).collect();
    for a in values {
        let top = a + int(1);
        let sub = bits(mask)
            .filter(|&i| {
                let x = points[i].coord(j);
                a <= x && *x <= top
            })
            .fold(0u64, |m, i| m | 1 << i);
        corner.push(a.clone());
        expand(points, sub, j + 1, corner, out, limit)?;
        corner.pop();
    }
    Ok(())
}

struct Search<'a> {
    set: &'a CanonicalCubeSet,
    /// Candidates holding each point.
    holders: Vec<Vec<usize>>,
    /// Points sharing some candidate with each point (itself included).
    conflict: Vec<u64>,
    best: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
}

impl Search<'_> {
    /// Greedy independent set in the conflict graph: its points need
    /// pairwise distinct cubes.
    fn lower_bound(&self, mut rem: u64) -> usize {
        let mut count = 0;
        while rem != 0 {
            let i = bits(rem)
                .min_by_key(|&i| (self.conflict[i] & rem).count_ones())
                .expect("nonempty");
            rem &= !self.conflict[i];
            count += 1;
        }
        count
    }

    fn run(&mut self, uncovered: u64, chosen: &mut Vec<usize>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::OracleLimit {
                what: "search node count",
                size: self.nodes as usize,
                limit: self.max_nodes as usize,
            });
        }
        if uncovered == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return Ok(());
        }
        if chosen.len() + self.lower_bound(uncovered) >= self.best.len() {
            return Ok(());
        }
        let pivot = bits(uncovered)
            .min_by_key(|&i| self.holders[i].len())
            .expect("nonempty");
        let mut options = self.holders[pivot].clone();
        options.sort_by_key(|&c| std::cmp::Reverse((self.set.coverage[c] & uncovered).count_ones()));
        for c in options {
            chosen.push(c);
            self.run(uncovered & !self.set.coverage[c], chosen)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Largest-coverage-first cover; ties go to the smaller corner.
fn greedy_cover(set: &CanonicalCubeSet, full: u64) -> Vec<usize> {
    let mut uncovered = full;
    let mut out = Vec::new();
    while uncovered != 0 {
        let c = (0..set.len())
            .max_by_key(|&c| ((set.coverage[c] & uncovered).count_ones(), std::cmp::Reverse(c)))
            .expect("candidates cover every point");
        out.push(c);
        uncovered &= !set.coverage[c];
    }
    out
}

fn solve_component(points: &[Point], cfg: &OracleConfig) -> Result<Vec<Aabb>> {
    let set = CanonicalCubeSet::build(points, cfg.max_candidates)?;
    let n = points.len();
    let mut holders = vec![Vec::new(); n];
    let mut conflict = vec![0u64; n];
    for (c, &m) in set.coverage.iter().enumerate() {
        for i in bits(m) {
            holders[i].push(c);
            conflict[i] |= m;
        }
    }
    let full = mask_all(n);
    let mut search = Search {
        set: &set,
        holders,
        conflict,
        best: greedy_cover(&set, full),
        nodes: 0,
        max_nodes: cfg.max_nodes,
    };
    search.run(full, &mut Vec::new())?;
    Ok(search.best.iter().map(|&c| Aabb::unit_cube(&set.corners[c])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::{barycentric_instance, diagonal_pairs_instance, gen_s1};
    use crate::algorithms::RngStream;
    use crate::geometry::rat;
    use proptest::prelude::*;

    /// Minimum number of groups of L∞ diameter ≤ 1 over all set partitions.
    fn brute_force_partition(points: &[Point]) -> usize {
        fn go(points: &[Point], i: usize, groups: &mut Vec<Aabb>, best: &mut usize) {
            if groups.len() >= *best {
                return;
            }
            if i == points.len() {
                *best = groups.len();
                return;
            }
            for g in 0..groups.len() {
                let grown = groups[g].extend(&points[i]).unwrap();
                if grown.max_extent() <= int(1) {
                    let old = std::mem::replace(&mut groups[g], grown);
                    go(points, i + 1, groups, best);
                    groups[g] = old;
                }
            }
            groups.push(Aabb::point(&points[i]));
            go(points, i + 1, groups, best);
            groups.pop();
        }
        let mut best = points.len();
        go(points, 0, &mut Vec::new(), &mut best);
        best
    }

    /// Minimum over all subsets of product candidates (every lower corner
    /// built from any point's coordinate per dimension).
    fn brute_force_subsets(points: &[Point]) -> usize {
        let d = points[0].dim();
        let per_dim: Vec<BTreeSet<Rational>> = (0..d)
            .map(|j| points.iter().map(|p| p.coord(j).clone()).collect())
            .collect();
        let mut corners: Vec<Vec<Rational>> = vec![Vec::new()];
        for vals in &per_dim {
            corners = corners
                .into_iter()
                .flat_map(|c| vals.iter().map(move |v| [c.clone(), vec![v.clone()]].concat()))
                .collect();
        }
        let masks: BTreeSet<u64> = corners
            .iter()
            .map(|c| {
                let cube = Aabb::unit_cube(&Point::new(c.clone()));
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| cube.contains_unchecked(p))
                    .fold(0u64, |m, (i, _)| m | 1 << i)
            })
            .filter(|&m| m != 0)
            .collect();
        let masks: Vec<u64> = masks.into_iter().collect();
        let full = mask_all(points.len());
        (1..=points.len())
            .find(|&k| subsets_of_size(&masks, k, 0, 0, full))
            .expect("singletons cover")
    }

    fn subsets_of_size(masks: &[u64], k: usize, from: usize, acc: u64, full: u64) -> bool {
        if acc == full {
            return true;
        }
        if k == 0 {
            return false;
        }
        (from..masks.len()).any(|i| subsets_of_size(masks, k - 1, i + 1, acc | masks[i], full))
    }

    fn quarters(d: usize, n: usize, rng: &mut RngStream) -> Vec<Point> {
        (0..n)
            .map(|_| Point::new((0..d).map(|_| rat(rng.below(13) as i64, 4)).collect()))
            .collect()
    }

    #[test]
    fn single_point_and_empty() {
        let s = exact_opt(&[Point::from_ints(&[3, -2])]).unwrap();
        assert_eq!(s.cubes, vec![Aabb::unit_cube(&Point::from_ints(&[3, -2]))]);
        assert_eq!(exact_opt(&[]).unwrap().len(), 0);
    }

    #[test]
    fn duplicates_share_a_cube() {
        let p = Point::new(vec![rat(1, 3)]);
        let s = exact_opt(&[p.clone(), p.clone(), p]).unwrap();
        assert_eq!((s.len(), s.assignment.clone()), (1, vec![0, 0, 0]));
    }

    #[test]
    fn one_dimensional_line() {
        let pts: Vec<Point> = (0..7).map(|i| Point::new(vec![rat(i, 2)])).collect();
        assert_eq!(exact_opt(&pts).unwrap().len(), 3);
        assert_eq!(exact_opt(&pts[..5]).unwrap().len(), 2);
    }

    #[test]
    fn single_diagonal_pair_fits_one_cube() {
        assert_eq!(exact_opt(&diagonal_pairs_instance(1).unwrap()).unwrap().len(), 1);
    }

    #[test]
    fn diagonal_pairs_need_two() {
        for n in [2, 3, 5, 10, 20, 30] {
            let pts = diagonal_pairs_instance(n).unwrap();
            let s = exact_opt(&pts).unwrap();
            assert_eq!(s.len(), 2, "n={n}");
            assert!(s.is_valid_for(&pts));
        }
    }

    #[test]
    fn barycentric_plane_k8_is_thirteen() {
        let inst = barycentric_instance(2, 8).unwrap();
        let pts: Vec<Point> = inst.presentation_order().iter().map(LatticePoint::to_point).collect();
        assert_eq!(exact_opt(&pts).unwrap().len(), 13);
    }

    #[test]
    fn lattice_box_six_is_nine() {
        let pts: Vec<Point> = gen_s1(2, 6).unwrap().iter().map(LatticePoint::to_point).collect();
        assert_eq!(pts.len(), 36);
        assert_eq!(exact_opt(&pts).unwrap().len(), 9);
    }

    #[test]
    fn far_apart_components_add_up() {
        let mut pts = diagonal_pairs_instance(4).unwrap();
        pts.push(Point::from_ints(&[10, 10]));
        pts.push(Point::from_ints(&[11, 11]));
        pts.push(Point::from_ints(&[-10, 0]));
        assert_eq!(components(&pts, 64).unwrap().len(), 3);
        assert_eq!(exact_opt(&pts).unwrap().len(), 4);
    }

    #[test]
    fn component_limit_is_explicit() {
        let pts: Vec<Point> = (0..70).map(|i| Point::new(vec![rat(i, 2)])).collect();
        let err = exact_opt(&pts).unwrap_err();
        assert!(matches!(
            err,
            Error::OracleLimit {
                what: "component",
                limit: 64,
                ..
            }
        ));
        assert_eq!(err.exit_code(), 3);
        let cfg = OracleConfig {
            max_points: 10,
            ..OracleConfig::default()
        };
        let small: Vec<Point> = (0..11).map(|i| Point::new(vec![rat(i, 20)])).collect();
        assert!(exact_opt_with(&small, &cfg).is_err());
        assert!(exact_opt_with(&small[..10], &cfg).is_ok());
    }

    #[test]
    fn candidates_are_canonical_and_undominated() {
        let mut rng = RngStream::new(11);
        let pts = quarters(2, 8, &mut rng);
        let set = CanonicalCubeSet::build(&pts, 10_000).unwrap();
        for (k, corner) in set.corners.iter().enumerate() {
            for j in 0..2 {
                assert!(pts.iter().any(|p| p.coord(j) == corner.coord(j)));
            }
            for (l, &m) in set.coverage.iter().enumerate() {
                assert!(k == l || set.coverage[k] & !m != 0);
            }
        }
    }

    #[test]
    fn matches_partition_brute_force_on_random_tiny_instances() {
        let mut rng = RngStream::new(2024);
        for t in 0..100 {
            let d = 1 + t % 2;
            let n = 1 + rng.below(8) as usize;
            let pts = quarters(d, n, &mut rng);
            let s = exact_opt(&pts).unwrap();
            assert!(s.is_valid_for(&pts));
            assert_eq!(s.len(), brute_force_partition(&pts), "{pts:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_subset_brute_force(seed in any::<u64>(), n in 1usize..=7, d in 1usize..=2) {
            let pts = quarters(d, n, &mut RngStream::new(seed));
            let s = exact_opt(&pts).unwrap();
            prop_assert!(s.is_valid_for(&pts));
            prop_assert_eq!(s.len(), brute_force_subsets(&pts));
        }

        #[test]
        fn never_above_shift_bound(seed in any::<u64>(), n in 1usize..=10) {
            let pts = quarters(2, n, &mut RngStream::new(seed));
            let opt = exact_opt(&pts).unwrap().len();
            if let Some(up) = opt_upper_via_shifts(&pts) {
                prop_assert!(opt <= up);
            }
        }

        #[test]
        fn deterministic_output(seed in any::<u64>()) {
            let pts = quarters(2, 9, &mut RngStream::new(seed));
            prop_assert_eq!(exact_opt(&pts).unwrap(), exact_opt(&pts).unwrap());
        }
    }
}
