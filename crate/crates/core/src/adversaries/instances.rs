//! Hard-instance generators.

use crate::algorithms::RngStream;
use crate::error::{Error, Result};
use crate::geometry::{binary_vectors, linf_dist, rat, LatticePoint, Point};

/// All points of `{lo..=hi}^d` in lexicographic order.
pub(crate) fn lattice_box(d: usize, lo: i64, hi: i64, step: i64) -> Vec<LatticePoint> {
    let values: Vec<i64> = (lo..=hi).step_by(step as usize).collect();
    let mut out = Vec::with_capacity(values.len().pow(d as u32));
    let mut idx = vec![0usize; d];
    if values.is_empty() {
        return out;
    }
    loop {
        out.push(LatticePoint(idx.iter().map(|&i| values[i]).collect()));
        let mut j = d;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < values.len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// `[K]^d`, the unperturbed first round of the clustering game.
pub fn gen_s1(d: usize, k: i64) -> Result<Vec<LatticePoint>> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    if k < 2 || k % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "K must be even and at least 2, got {k}"
        )));
    }
    Ok(lattice_box(d, 1, k, 1))
}

/// Pairs `(1 + i/n, i/n), (i/n, 1 + i/n)` for `i = 0..n`, pair by pair.
pub fn diagonal_pairs_instance(n: i64) -> Result<Vec<Point>> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n must be positive, got {n}")));
    }
    let mut out = Vec::with_capacity(2 * n as usize);
    for i in 0..n {
        out.push(Point::new(vec![rat(n + i, n), rat(i, n)]));
        out.push(Point::new(vec![rat(i, n), rat(n + i, n)]));
    }
    Ok(out)
}

/// Lattice instance on which greedy wastes a factor `2^(d-1)`.
///
/// `A` holds the points of `[0, K]^d` with all coordinates `≡ 0 (mod 4)`,
/// `C` those `≡ 2 (mod 4)`; `B = A + {0,1}^d` and `D = C + {0,1}^d`. Every
/// `v = c + β ∈ D` has exactly one partner `u ∈ B` at L∞ distance 1.
#[derive(Clone, Debug)]
pub struct BarycentricInstance {
    pub d: usize,
    pub k: i64,
    pub a: Vec<LatticePoint>,
    pub b: Vec<LatticePoint>,
    pub c: Vec<LatticePoint>,
    pub dset: Vec<LatticePoint>,
    /// `(u, v)` with `u ∈ B`, `v ∈ D`, sorted by `v`.
    pub pairs: Vec<(LatticePoint, LatticePoint)>,
    /// `B` points in no pair, sorted.
    pub leftovers: Vec<LatticePoint>,
}

impl BarycentricInstance {
    /// Pairs first (`u` before `v`), then the leftovers.
    pub fn presentation_order(&self) -> Vec<LatticePoint> {
        let mut out = Vec::with_capacity(self.b.len() + self.dset.len());
        for (u, v) in &self.pairs {
            out.push(u.clone());
            out.push(v.clone());
        }
        out.extend(self.leftovers.iter().cloned());
        out
    }

    pub fn structured_opt(&self) -> usize {
        self.a.len() + self.c.len()
    }
}

fn plus_cube(base: &[LatticePoint]) -> Vec<LatticePoint> {
    let d = base.first().map_or(0, LatticePoint::dim);
    let mut out: Vec<LatticePoint> = base
        .iter()
        .flat_map(|p| binary_vectors(d).map(move |beta| p.offset(&beta, 1)))
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn barycentric_instance(d: usize, k: i64) -> Result<BarycentricInstance> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    if k <= 0 || k % 4 != 0 {
        return Err(Error::InvalidParameter(format!(
            "K must be a positive multiple of 4, got {k}"
        )));
    }
    let a = lattice_box(d, 0, k, 4);
    let c = lattice_box(d, 2, k - 2, 4);
    let b = plus_cube(&a);
    let dset = plus_cube(&c);

    let mut pairs = Vec::with_capacity(dset.len());
    for v in &dset {
        // coordinate ≡ 2 (mod 4) pairs with v_j - 1; ≡ 3 pairs with v_j + 1
        let u = LatticePoint(
            v.coords()
                .iter()
                .map(|&x| if x.rem_euclid(4) == 2 { x - 1 } else { x + 1 })
                .collect(),
        );
        pairs.push((u, v.clone()));
    }
    let matched: std::collections::BTreeSet<&LatticePoint> = pairs.iter().map(|(u, _)| u).collect();
    let leftovers = b.iter().filter(|u| !matched.contains(u)).cloned().collect();
    Ok(BarycentricInstance {
        d,
        k,
        a,
        b,
        c,
        dset,
        pairs,
        leftovers,
    })
}

/// `n` distinct lattice points drawn uniformly from `[0, side)^d`.
pub fn random_lattice_instance(d: usize, n: usize, side: i64, rng: &mut RngStream) -> Vec<LatticePoint> {
    assert!(
        (side as u128).pow(d as u32) >= n as u128,
        "box too small for {n} distinct points"
    );
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = LatticePoint((0..d).map(|_| rng.below(side as u64) as i64).collect());
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

/// Exhaustive check that every pair spans a unit cube holding no other
/// instance point, so greedy can never extend a pair cluster.
pub fn pairs_are_isolated(inst: &BarycentricInstance) -> bool {
    let all: Vec<Point> = inst.b.iter().chain(&inst.dset).map(LatticePoint::to_point).collect();
    inst.pairs.iter().all(|(u, v)| {
        let (u, v) = (u.to_point(), v.to_point());
        if linf_dist(&u, &v).map(|x| x != crate::geometry::int(1)).unwrap_or(true) {
            return false;
        }
        let span = crate::geometry::Aabb::point(&u).extend(&v).expect("same dimension");
        if !span.is_unit_cube() {
            return false;
        }
        all.iter().filter(|p| span.contains_unchecked(p)).count() == 2
    })
}
