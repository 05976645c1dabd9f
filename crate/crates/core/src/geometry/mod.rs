//! Exact coordinates, points, axis-aligned boxes and L∞ predicates.
//!
//! Every coordinate is an arbitrary-precision rational. Nothing in this crate
//! touches floating point except report formatting.

mod instance;

pub use instance::Instance;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number in canonical form.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^exp` for any signed exponent.
pub fn pow2(exp: i64) -> Rational {
    let mag = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

/// Parses `p`, `p/q` or `-p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Floor of a rational as `i64`.
pub fn floor_i64(r: &Rational) -> i64 {
    r.floor()
        .to_integer()
        .to_i64()
        .expect("coordinate floor does not fit in i64")
}

pub(crate) fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A point of `Q^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "points have dimension at least 1");
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| int(c)).collect())
    }

    /// Point with coordinates `coords[j] / den`.
    pub fn from_scaled(coords: &[i64], den: i64) -> Self {
        Point::new(coords.iter().map(|&c| rat(c, den)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn coord(&self, j: usize) -> &Rational {
        &self.0[j]
    }

    /// The containing half-open grid cell `∏ [floor(p_j), floor(p_j) + 1)`.
    pub fn cell(&self) -> LatticePoint {
        LatticePoint(self.0.iter().map(floor_i64).collect())
    }

    pub fn to_lattice(&self) -> Result<LatticePoint> {
        if self.0.iter().all(is_integer) {
            Ok(self.cell())
        } else {
            Err(Error::NotLattice(self.to_string()))
        }
    }

    pub fn coord_strings(&self) -> Vec<String> {
        self.0.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coord_strings().join(", "))
    }
}

/// `max_j |p_j - q_j|`.
pub fn linf_dist(p: &Point, q: &Point) -> Result<Rational> {
    check_dim(p.dim(), q.dim())?;
    Ok(p.0
        .iter()
        .zip(&q.0)
        .map(|(a, b)| (a - b).abs())
        .max()
        .unwrap_or_else(Rational::zero))
}

/// A point of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn to_point(&self) -> Point {
        Point::from_ints(&self.0)
    }

    /// Componentwise `self - delta`.
    pub fn offset(&self, delta: &[i64], sign: i64) -> LatticePoint {
        LatticePoint(self.0.iter().zip(delta).map(|(a, b)| a + sign * b).collect())
    }

    /// The closed unit cube with this lower corner.
    pub fn unit_cube(&self) -> Aabb {
        Aabb::unit_cube(&self.to_point())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// All vectors of `{0,1}^d` in lexicographic order.
pub fn binary_vectors(d: usize) -> impl Iterator<Item = Vec<i64>> {
    (0..1u64 << d).map(move |mask| (0..d).map(|j| ((mask >> (d - 1 - j)) & 1) as i64).collect())
}

/// Closed axis-aligned box `∏ [lo_j, hi_j]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Aabb {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

impl Aabb {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        if lo.is_empty() {
            return Err(Error::InvalidParameter("box of dimension 0".into()));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::InvalidParameter("box with lo > hi".into()));
        }
        Ok(Aabb { lo, hi })
    }

    /// The degenerate box holding a single point.
    pub fn point(p: &Point) -> Self {
        Aabb {
            lo: p.0.clone(),
            hi: p.0.clone(),
        }
    }

    pub fn unit_cube(lower: &Point) -> Self {
        Self::cube(lower, &Rational::one())
    }

    pub fn cube(lower: &Point, side: &Rational) -> Self {
        Aabb {
            lo: lower.0.clone(),
            hi: lower.0.iter().map(|c| c + side).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Rational] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rational] {
        &self.hi
    }

    pub fn lo_point(&self) -> Point {
        Point(self.lo.clone())
    }

    pub fn extent(&self, j: usize) -> Rational {
        &self.hi[j] - &self.lo[j]
    }

    pub fn max_extent(&self) -> Rational {
        (0..self.dim()).map(|j| self.extent(j)).max().expect("nonempty box")
    }

    /// True iff every extent is exactly 1.
    pub fn is_unit_cube(&self) -> bool {
        (0..self.dim()).all(|j| self.extent(j).is_one())
    }

    /// Smallest box containing `self` and `p`.
    pub fn extend(&self, p: &Point) -> Result<Aabb> {
        let mut out = self.clone();
        out.extend_in_place(p)?;
        Ok(out)
    }

    /// Returns whether the box changed.
    pub fn extend_in_place(&mut self, p: &Point) -> Result<bool> {
        check_dim(self.dim(), p.dim())?;
        let mut changed = false;
        for (j, c) in p.0.iter().enumerate() {
            if *c < self.lo[j] {
                self.lo[j] = c.clone();
                changed = true;
            }
            if *c > self.hi[j] {
                self.hi[j] = c.clone();
                changed = true;
            }
        }
        Ok(changed)
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        check_dim(self.dim(), p.dim())?;
        Ok(self.contains_unchecked(p))
    }

    pub(crate) fn contains_unchecked(&self, p: &Point) -> bool {
        p.0.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (l, h))| l <= c && c <= h)
    }

    /// `min_j min(p_j - lo_j, hi_j - p_j)`; errors if `p` is outside.
    pub fn dist_to_boundary(&self, p: &Point) -> Result<Rational> {
        if !self.contains(p)? {
            return Err(Error::PointOutsideBox);
        }
        Ok(p.0
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(c, (l, h))| std::cmp::min(c - l, h - c))
            .min()
            .expect("nonempty box"))
    }

    /// The `2^d` vertices, lexicographically ordered.
    pub fn vertices(&self) -> Vec<Point> {
        let d = self.dim();
        let mut out: Vec<Point> = binary_vectors(d)
            .map(|bits| {
                Point(
                    (0..d)
                        .map(|j| {
                            if bits[j] == 0 {
                                self.lo[j].clone()
                            } else {
                                self.hi[j].clone()
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Aabb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| format!("[{l}, {h}]"))
            .collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Least common multiple of the denominators of all coordinates.
pub fn common_denominator<'a>(points: impl IntoIterator<Item = &'a Point>) -> BigInt {
    points
        .into_iter()
        .flat_map(|p| p.0.iter())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}
