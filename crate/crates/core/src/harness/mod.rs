//! Simulations, duels and ratio reports.

mod duel;
pub mod grid_gap;
mod report;
mod simulate;

pub use duel::{duel, Adversary, DuelParams, DuelSummary};
pub use report::{parse_csv, render_report, series_by_d, summarize, CsvRow, SeriesPoint, SummaryRow};
pub use simulate::{simulate, Transcript};

use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::adversaries::{barycentric_instance, diagonal_pairs_instance, gen_s1};
use crate::error::{Error, Result};
use crate::geometry::{Instance, LatticePoint, Point, Rational};
use crate::oracle::{structured_opt, StructuredKind};

pub const CSV_HEADER: &str = "family,d,K_or_n,alg,seed,alg_count,opt,ratio_num,ratio_den";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgName {
    Grid,
    Greedy,
    Centered,
    FirstFit,
    Reweigh,
    /// Deep-coverage maximizing coverer; covering duels only.
    Malicious,
}

impl AlgName {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgName::Grid => "grid",
            AlgName::Greedy => "greedy",
            AlgName::Centered => "centered",
            AlgName::FirstFit => "firstfit",
            AlgName::Reweigh => "reweigh",
            AlgName::Malicious => "malicious",
        }
    }
}

impl fmt::Display for AlgName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "grid" => AlgName::Grid,
            "greedy" => AlgName::Greedy,
            "centered" => AlgName::Centered,
            "firstfit" | "first-fit" => AlgName::FirstFit,
            "reweigh" => AlgName::Reweigh,
            "malicious" => AlgName::Malicious,
            other => return Err(Error::InvalidParameter(format!("unknown algorithm `{other}`"))),
        })
    }
}

/// Where the denominator of a ratio came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OptSource {
    Formula,
    Oracle,
    /// Exact oracle out of reach; `opt` is the best translated-tiling cover,
    /// an upper bound, so the ratio understates the true one.
    ShiftUpperBound,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub family: String,
    pub d: usize,
    pub k_or_n: i64,
    pub alg: AlgName,
    pub seed: u64,
    pub alg_count: u64,
    pub opt: u64,
    pub opt_source: OptSource,
    pub stats: Vec<(String, String)>,
    pub checks: Vec<(String, bool)>,
}

impl RunReport {
    pub fn ratio(&self) -> Rational {
        if self.opt == 0 {
            Rational::zero()
        } else {
            Rational::new(self.alg_count.into(), self.opt.into())
        }
    }

    pub fn ratio_f64(&self) -> f64 {
        self.ratio().to_f64().unwrap_or(f64::NAN)
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    pub fn csv_row(&self) -> String {
        let r = self.ratio();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.family,
            self.d,
            self.k_or_n,
            self.alg,
            self.seed,
            self.alg_count,
            self.opt,
            r.numer(),
            r.denom()
        )
    }
}

/// Per-trial seed: the SplitMix64 output for counter `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A generated family and its parameter (`K`, or `n` for diagonal pairs).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Family {
    pub kind: StructuredKind,
    pub d: usize,
    pub param: i64,
}

impl Family {
    pub fn opt(&self) -> Result<u64> {
        structured_opt(self.kind, self.d, self.param)
    }

    /// Points in presentation order.
    pub fn generate(&self) -> Result<Vec<Point>> {
        let lattice = |v: Vec<LatticePoint>| v.iter().map(LatticePoint::to_point).collect();
        match self.kind {
            StructuredKind::S1 => Ok(lattice(gen_s1(self.d, self.param)?)),
            StructuredKind::Barycentric => Ok(lattice(barycentric_instance(self.d, self.param)?.presentation_order())),
            StructuredKind::DiagonalPairs if self.d == 2 => diagonal_pairs_instance(self.param),
            StructuredKind::DiagonalPairs => Err(Error::InvalidParameter("diagonal pairs are planar".into())),
            StructuredKind::CoveringGame => Err(Error::InvalidParameter(
                "covering-game points come from a duel, not a generator".into(),
            )),
        }
    }
}

/// Identifies an instance produced by one of the generators, comparing point
/// sets exactly.
pub fn recognize_family(inst: &Instance) -> Option<Family> {
    let n = inst.points.len() as i64;
    let d = inst.dim;
    let mut candidates = Vec::new();
    if d == 2 && n % 2 == 0 && n > 0 {
        candidates.push(Family {
            kind: StructuredKind::DiagonalPairs,
            d,
            param: n / 2,
        });
    }
    if inst.is_lattice() {
        // |[K]^d| = K^d and |B| + |D| grow with K, so small searches suffice
        let mut k = 2i64;
        while k.checked_pow(d as u32).is_some_and(|s| s <= n) {
            if k.pow(d as u32) == n {
                candidates.push(Family {
                    kind: StructuredKind::S1,
                    d,
                    param: k,
                });
            }
            k += 2;
        }
        let mut k = 4i64;
        loop {
            let q = k / 4;
            let size = ((q + 1).checked_pow(d as u32)?).checked_add(q.checked_pow(d as u32)?)? << d;
            if size > n {
                break;
            }
            if size == n {
                candidates.push(Family {
                    kind: StructuredKind::Barycentric,
                    d,
                    param: k,
                });
            }
            k += 4;
        }
    }
    let mut mine = inst.points.clone();
    mine.sort();
    candidates.into_iter().find(|f| {
        f.generate().is_ok_and(|mut pts| {
            pts.sort();
            pts == mine
        })
    })
}
