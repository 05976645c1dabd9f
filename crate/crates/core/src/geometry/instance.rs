//! Plain-text instance files.
//!
//! ```text
//! d n den
//! c_11 ... c_1d
//! ...
//! c_n1 ... c_nd
//! ```
//!
//! Coordinate `c_ij / den`. Whitespace separated, LF line endings.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::{common_denominator, LatticePoint, Point, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub dim: usize,
    pub points: Vec<Point>,
}

impl Instance {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        Ok(Instance { dim, points })
    }

    pub fn from_lattice(dim: usize, points: &[LatticePoint]) -> Result<Self> {
        Self::new(dim, points.iter().map(LatticePoint::to_point).collect())
    }

    /// True iff every coordinate is an integer.
    pub fn is_lattice(&self) -> bool {
        common_denominator(&self.points).is_one()
    }

    pub fn lattice_points(&self) -> Result<Vec<LatticePoint>> {
        self.points.iter().map(Point::to_lattice).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty instance".into(),
        })?;
        let head: Vec<i64> = parse_ints(header, 1)?;
        if head.len() != 3 || head.iter().any(|&v| v <= 0) {
            return Err(Error::Parse {
                line: 1,
                msg: "header must be three positive integers `d n den`".into(),
            });
        }
        let (d, n, den) = (head[0] as usize, head[1] as usize, head[2]);
        let mut points = Vec::with_capacity(n);
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let coords = parse_ints(line, idx + 1)?;
            if coords.len() != d {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected {d} coordinates, found {}", coords.len()),
                });
            }
            points.push(Point::from_scaled(&coords, den));
        }
        if points.len() != n {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: format!("header declares {n} points, found {}", points.len()),
            });
        }
        Instance::new(d, points)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Serializes with the smallest common denominator.
    pub fn to_text(&self) -> String {
        let den = common_denominator(&self.points);
        let mut out = format!("{} {} {}\n", self.dim, self.points.len(), den);
        let scale = Rational::from_integer(den);
        for p in &self.points {
            let row: Vec<String> = p
                .coords()
                .iter()
                .map(|c| {
                    let v: BigInt = (c * &scale).to_integer();
                    v.to_string()
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn denominator(&self) -> Option<i64> {
        common_denominator(&self.points).to_i64()
    }
}

fn parse_ints(line: &str, lineno: usize) -> Result<Vec<i64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<i64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("not an integer: {tok:?}"),
            })
        })
        .collect()
}
