//! Closed-form optima for the generated instance families.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructuredKind {
    /// `[K]^d`.
    S1,
    Barycentric,
    DiagonalPairs,
    CoveringGame,
}

impl FromStr for StructuredKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s1" => Ok(StructuredKind::S1),
            "barycentric" => Ok(StructuredKind::Barycentric),
            "diagonal" => Ok(StructuredKind::DiagonalPairs),
            "covering" => Ok(StructuredKind::CoveringGame),
            other => Err(Error::InvalidParameter(format!("unknown instance kind `{other}`"))),
        }
    }
}

impl fmt::Display for StructuredKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructuredKind::S1 => "s1",
            StructuredKind::Barycentric => "barycentric",
            StructuredKind::DiagonalPairs => "diagonal",
            StructuredKind::CoveringGame => "covering",
        })
    }
}

/// `param` is `K` for the lattice families and `n` for diagonal pairs; it is
/// ignored for the covering game.
pub fn structured_opt(kind: StructuredKind, d: usize, param: i64) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    let pow = |b: i64| -> Result<u64> {
        u64::try_from(b)
            .ok()
            .and_then(|b| b.checked_pow(d as u32))
            .ok_or_else(|| Error::InvalidParameter(format!("optimum overflows for base {b}, d={d}")))
    };
    match kind {
        StructuredKind::S1 if param >= 2 && param % 2 == 0 => pow(param / 2),
        StructuredKind::S1 => Err(Error::InvalidParameter(format!(
            "K must be even and at least 2, got {param}"
        ))),
        StructuredKind::Barycentric if param > 0 && param % 4 == 0 => Ok(pow(param / 4 + 1)? + pow(param / 4)?),
        StructuredKind::Barycentric => Err(Error::InvalidParameter(format!(
            "K must be a positive multiple of 4, got {param}"
        ))),
        // a single pair fits in one cube
        StructuredKind::DiagonalPairs if d == 2 && param == 1 => Ok(1),
        StructuredKind::DiagonalPairs if d == 2 && param >= 2 => Ok(2),
        StructuredKind::DiagonalPairs => Err(Error::InvalidParameter(
            "diagonal pairs live in the plane with n >= 1".into(),
        )),
        StructuredKind::CoveringGame => Ok(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(structured_opt(StructuredKind::S1, 2, 6).unwrap(), 9);
        assert_eq!(structured_opt(StructuredKind::Barycentric, 2, 12).unwrap(), 25);
        assert_eq!(structured_opt(StructuredKind::Barycentric, 2, 8).unwrap(), 13);
        assert_eq!(structured_opt(StructuredKind::DiagonalPairs, 2, 1).unwrap(), 1);
        for n in [2, 5, 30] {
            assert_eq!(structured_opt(StructuredKind::DiagonalPairs, 2, n).unwrap(), 2);
        }
        assert_eq!(structured_opt(StructuredKind::CoveringGame, 7, 0).unwrap(), 1);
    }

    #[test]
    fn parse_and_reject() {
        assert_eq!(
            "barycentric".parse::<StructuredKind>().unwrap(),
            StructuredKind::Barycentric
        );
        assert!("hexagonal".parse::<StructuredKind>().is_err());
        assert!(structured_opt(StructuredKind::S1, 2, 5).is_err());
        assert!(structured_opt(StructuredKind::Barycentric, 2, 6).is_err());
        assert!(structured_opt(StructuredKind::DiagonalPairs, 3, 4).is_err());
        for k in ["s1", "barycentric", "diagonal", "covering"] {
            assert_eq!(k.parse::<StructuredKind>().unwrap().to_string(), k);
        }
    }
}
