use super::{check_dim, Assignment, Cluster, ClusterId, CornerIndex, OnlineClustering, RngStream};
use crate::error::Result;
use crate::geometry::{Point, Rational};
use num_traits::One;

/// Which fitting cluster receives a point when several qualify.
#[derive(Clone, Debug)]
pub enum TieBreak {
    /// Lowest id.
    Oldest,
    /// Uniform among all fitting clusters.
    Random(Box<RngStream>),
}

/// Puts each point into an existing cluster it fits in (bounding box extent
/// stays ≤ 1 in every dimension), otherwise opens a singleton.
#[derive(Clone, Debug)]
pub struct Greedy {
    dim: usize,
    tie_break: TieBreak,
    clusters: Vec<Cluster>,
    index: CornerIndex,
}

impl Greedy {
    pub fn new(dim: usize) -> Self {
        Self::with_tie_break(dim, TieBreak::Oldest)
    }

    pub fn with_tie_break(dim: usize, tie_break: TieBreak) -> Self {
        Greedy {
            dim,
            tie_break,
            clusters: Vec::new(),
            index: CornerIndex::default(),
        }
    }

    fn fits(cluster: &Cluster, p: &Point) -> bool {
        let one = Rational::one();
        let b = cluster.bbox();
        p.coords()
            .iter()
            .zip(b.lo().iter().zip(b.hi()))
            .all(|(c, (lo, hi))| hi - &one <= *c && *c <= lo + &one)
    }
}

impl OnlineClustering for Greedy {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn insert(&mut self, p: &Point) -> Result<Assignment> {
        check_dim(self.dim, p)?;
        let fitting: Vec<ClusterId> = self
            .index
            .near(&p.cell())
            .into_iter()
            .filter(|id| Self::fits(&self.clusters[id.0], p))
            .collect();
        let chosen = match &mut self.tie_break {
            _ if fitting.is_empty() => None,
            TieBreak::Oldest => Some(fitting[0]),
            TieBreak::Random(rng) => Some(fitting[rng.below(fitting.len() as u64) as usize]),
        };
        match chosen {
            Some(id) => {
                let cluster = &mut self.clusters[id.0];
                let old_key = cluster.bbox().lo_point().cell();
                if cluster.push(p)? {
                    let new_key = cluster.bbox().lo_point().cell();
                    if new_key != old_key {
                        self.index.remove(&old_key, id);
                        self.index.insert(new_key, id);
                    }
                }
                Ok(Assignment {
                    cluster: id,
                    opened: false,
                })
            }
            None => {
                let id = ClusterId(self.clusters.len());
                self.clusters.push(Cluster::singleton(id, p));
                self.index.insert(p.cell(), id);
                Ok(Assignment {
                    cluster: id,
                    opened: true,
                })
            }
        }
    }

    fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }
}
