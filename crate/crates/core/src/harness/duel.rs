use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::{derive_seed, AlgName, OptSource, RunReport};
use crate::adversaries::{
    clustering_game_run, covering_game_run, ClusterGameConfig, GameMode, LogRecord, MaliciousBob,
};
use crate::algorithms::{Centered, FirstFitCover, Greedy, Grid, OnlineClustering, OnlineCovering};
use crate::error::{Error, Result};
use crate::geometry::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Adversary {
    Clustering,
    Covering,
}

impl FromStr for Adversary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clustering" => Ok(Adversary::Clustering),
            "covering" => Ok(Adversary::Covering),
            other => Err(Error::InvalidParameter(format!("unknown adversary `{other}`"))),
        }
    }
}

impl fmt::Display for Adversary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Adversary::Clustering => "clustering",
            Adversary::Covering => "covering",
        })
    }
}

#[derive(Clone, Debug)]
pub struct DuelParams {
    pub adversary: Adversary,
    pub alg: AlgName,
    pub d: usize,
    /// Side of the first lattice box; clustering game only.
    pub k: i64,
    pub rho: Option<Rational>,
    pub eps: Option<Rational>,
    pub mode: GameMode,
    pub seed: u64,
    pub trials: u64,
}

impl DuelParams {
    pub fn new(adversary: Adversary, alg: AlgName, d: usize) -> Self {
        DuelParams {
            adversary,
            alg,
            d,
            k: 4,
            rho: None,
            eps: None,
            mode: GameMode::Deterministic,
            seed: 0,
            trials: 1,
        }
    }

    /// Seed of trial `t`; a single trial uses the master seed itself.
    pub fn trial_seed(&self, t: u64) -> u64 {
        if self.trials == 1 {
            self.seed
        } else {
            derive_seed(self.seed, t)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DuelSummary {
    pub adversary: Adversary,
    pub alg: AlgName,
    pub d: usize,
    pub trials: Vec<RunReport>,
    pub min_ratio: f64,
    pub mean_ratio: f64,
    pub max_ratio: f64,
    /// Failed trials per named check.
    pub failures: BTreeMap<String, usize>,
    /// Invariant violations recorded during play, prefixed with the trial.
    pub violations: Vec<String>,
}

impl DuelSummary {
    pub fn all_checks_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn covering_opponent(alg: AlgName, d: usize, seed: u64) -> Result<Box<dyn OnlineCovering>> {
    Ok(match alg {
        AlgName::Grid => Box::new(Grid::new(d)),
        AlgName::Centered => Box::new(Centered::new(d)),
        AlgName::FirstFit => Box::new(FirstFitCover::new(d)),
        AlgName::Malicious => Box::new(MaliciousBob::new(d, seed)),
        AlgName::Greedy | AlgName::Reweigh => {
            return Err(Error::InvalidParameter(format!(
                "the covering adversary needs a covering algorithm with fixed cubes; `{alg}` does not qualify"
            )))
        }
    })
}

fn clustering_opponent(alg: AlgName, d: usize) -> Result<Box<dyn OnlineClustering>> {
    Ok(match alg {
        AlgName::Grid => Box::new(Grid::new(d)),
        AlgName::Greedy => Box::new(Greedy::new(d)),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "the clustering adversary needs a clustering algorithm on rational points; `{alg}` does not qualify"
            )))
        }
    })
}

/// Plays `params.trials` independent games and aggregates them in trial
/// order. `log` receives `(trial, record)` for every move.
pub fn duel(params: &DuelParams, mut log: Option<&mut dyn FnMut(u64, LogRecord)>) -> Result<DuelSummary> {
    if params.trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let d = params.d;
    let mut trials = Vec::with_capacity(params.trials as usize);
    let mut violations = Vec::new();
    for t in 0..params.trials {
        let seed = params.trial_seed(t);
        let mut sink = log.as_deref_mut().map(|f| move |rec: LogRecord| f(t, rec));
        let sink = sink.as_mut().map(|f| f as &mut dyn FnMut(LogRecord));
        let report = match params.adversary {
            Adversary::Covering => {
                let mut bob = covering_opponent(params.alg, d, seed)?;
                let r = covering_game_run(d, bob.as_mut(), sink)?;
                violations.extend(r.violations.iter().map(|v| format!("trial {t}: {v}")));
                RunReport {
                    family: "covering".into(),
                    d,
                    k_or_n: 1 << d,
                    alg: params.alg,
                    seed,
                    alg_count: r.alg as u64,
                    opt: r.opt as u64,
                    opt_source: OptSource::Oracle,
                    stats: vec![
                        ("max_deep".into(), r.max_deep.to_string()),
                        ("points".into(), r.points.len().to_string()),
                    ],
                    checks: r.checks,
                }
            }
            Adversary::Clustering => {
                let mut cfg = ClusterGameConfig::new(d, params.k, params.mode, seed);
                if let Some(rho) = &params.rho {
                    cfg.rho = rho.clone();
                }
                if let Some(eps) = &params.eps {
                    cfg.eps = eps.clone();
                }
                let mut alg = clustering_opponent(params.alg, d)?;
                let r = clustering_game_run(cfg, alg.as_mut(), sink)?;
                let opt_source = if r.opt_exact.is_some() {
                    OptSource::Oracle
                } else {
                    OptSource::ShiftUpperBound
                };
                let mut stats = vec![
                    ("rounds".to_string(), r.rounds.len().to_string()),
                    ("total_points".to_string(), r.total_points.to_string()),
                    ("total_expired".to_string(), r.total_expired.to_string()),
                    ("opt_lower".to_string(), r.opt_lower.to_string()),
                ];
                for rec in &r.rounds {
                    stats.push((
                        format!("round_{}", rec.round),
                        format!(
                            "sigma={} clusters={} small={} big={} certified={} expired={}",
                            rec.signature,
                            rec.opponent_clusters,
                            rec.small,
                            rec.big,
                            rec.certified.len(),
                            rec.expired
                        ),
                    ));
                }
                RunReport {
                    family: "clustering".into(),
                    d,
                    k_or_n: params.k,
                    alg: params.alg,
                    seed,
                    alg_count: r.alg as u64,
                    opt: r.opt() as u64,
                    opt_source,
                    stats,
                    checks: r.checks,
                }
            }
        };
        trials.push(report);
    }

    let ratios: Vec<f64> = trials.iter().map(|r| r.ratio().to_f64().unwrap_or(f64::NAN)).collect();
    let mut failures = BTreeMap::new();
    for r in &trials {
        for name in r.failed_checks() {
            *failures.entry(name.to_string()).or_insert(0) += 1;
        }
    }
    Ok(DuelSummary {
        adversary: params.adversary,
        alg: params.alg,
        d,
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max_ratio: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
        trials,
        failures,
        violations,
    })
}
