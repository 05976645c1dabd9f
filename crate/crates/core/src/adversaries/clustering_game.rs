//! Adaptive and oblivious adversaries against online unit clustering.
//!
//! The game runs `⌊d/2⌋` rounds. Round `i` presents a perturbation `S_i` of
//! the lattice box `[K]^d` whose signature `σ(i)` has `i - 1` nonzero
//! entries. Between rounds the adversary turns one zero entry of the
//! signature into `±1`; clusters whose extent in that coordinate is already a
//! full unit interval `[m, m+1]` on the wrong side can then never grow again.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{gen_s1, LogRecord, ShiftVector};
use crate::algorithms::{Cluster, ClusterId, OnlineClustering, RngStream};
use crate::error::{Error, Result};
use crate::geometry::{floor_i64, int, pow2, rat, Aabb, LatticePoint, Point, Rational};
use crate::oracle::{self, grid_shift_solution, opt_upper_via_shifts, OracleConfig};

/// Perturbation pattern in `{-1, 0, +1}^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature(Vec<i8>);

impl Signature {
    pub fn zeros(d: usize) -> Self {
        Signature(vec![0; d])
    }

    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.iter().any(|e| !(-1..=1).contains(e)) {
            return Err(Error::InvalidParameter("signature entries must be -1, 0 or 1".into()));
        }
        Ok(Signature(entries))
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn nonzeros(&self) -> usize {
        self.0.iter().filter(|&&e| e != 0).count()
    }

    pub fn zero_coords(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&j| self.0[j] == 0).collect()
    }

    pub fn with(&self, j: usize, sign: i8) -> Signature {
        let mut out = self.clone();
        out.0[j] = sign;
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Moves each coordinate by `±ε` according to its parity and the signature.
pub fn perturb_point(p: &LatticePoint, sigma: &Signature, eps: &Rational) -> Point {
    assert_eq!(p.dim(), sigma.dim(), "signature dimension");
    Point::new(
        p.coords()
            .iter()
            .zip(sigma.entries())
            .map(|(&c, &s)| {
                let odd = c.rem_euclid(2) == 1;
                let base = int(c);
                match (s, odd) {
                    (0, _) => base,
                    (-1, true) | (1, false) => base + eps,
                    _ => base - eps,
                }
            })
            .collect(),
    )
}

/// Whether the translated odd-corner tiling `C(S_i, τ)` covers a round with
/// signature `σ`.
pub fn shift_covers_perturbed(sigma: &Signature, tau: &ShiftVector) -> bool {
    assert_eq!(sigma.dim(), tau.dim(), "shift vector dimension");
    sigma
        .entries()
        .iter()
        .zip(tau.entries())
        .all(|(&s, &t)| s == 0 || (s == -1 && t == 0) || (s == 1 && t == 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClusterClass {
    Small,
    /// `s` counts unperturbed coordinates where the extent is exactly 1.
    Big {
        s: usize,
    },
}

/// Classifies every cluster that received points in the current round.
///
/// `round_members` maps each such cluster to its points of the current round;
/// its bounding box (all rounds) comes from `clusters`.
pub fn classify_clusters(
    clusters: &[Cluster],
    round_members: &BTreeMap<ClusterId, Vec<Point>>,
    sigma: &Signature,
    round: usize,
    rho: &Rational,
) -> BTreeMap<ClusterId, ClusterClass> {
    let d = sigma.dim();
    let free = sigma.zero_coords();
    let threshold = pow2(d as i64 - round as i64);
    round_members
        .iter()
        .filter(|(_, pts)| !pts.is_empty())
        .map(|(&id, pts)| {
            let projection: HashSet<Vec<&Rational>> =
                pts.iter().map(|p| free.iter().map(|&j| p.coord(j)).collect()).collect();
            let class = if int(projection.len() as i64) * rho <= threshold {
                ClusterClass::Small
            } else {
                let bbox = clusters[id.0].bbox();
                let s = free.iter().filter(|&&j| bbox.extent(j).is_one()).count();
                ClusterClass::Big { s }
            };
            (id, class)
        })
        .collect()
}

/// True iff the box's `j`-extent is exactly `[m, m+1]` for an integer `m`
/// and perturbing coordinate `j` with `sign` pushes both `m` and `m + 1`
/// outside it.
pub fn certified_expiry(bbox: &Aabb, j: usize, sign: i8) -> bool {
    let lo = &bbox.lo()[j];
    if !bbox.extent(j).is_one() || !lo.is_integer() {
        return false;
    }
    let m = floor_i64(lo);
    let needed = if m.rem_euclid(2) == 1 { 1 } else { -1 };
    sign == needed
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GameMode {
    /// Picks the perturbation that certifies the most big clusters.
    Deterministic,
    /// Picks the perturbation uniformly at random, blind to the opponent.
    Oblivious,
}

#[derive(Clone, Debug)]
pub struct ClusterGameConfig {
    pub d: usize,
    pub k: i64,
    pub rho: Rational,
    pub eps: Rational,
    pub mode: GameMode,
    pub seed: u64,
}

impl ClusterGameConfig {
    /// Defaults `ρ = d` and `ε = 1/4`.
    pub fn new(d: usize, k: i64, mode: GameMode, seed: u64) -> Self {
        ClusterGameConfig {
            d,
            k,
            rho: int(d as i64),
            eps: rat(1, 4),
            mode,
            seed,
        }
    }

    pub fn rounds(&self) -> usize {
        self.d / 2
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.d < 2 {
            return bad(format!("clustering game needs d >= 2, got {}", self.d));
        }
        if self.k < 4 || self.k % 2 != 0 {
            return bad(format!("K must be even and at least 4, got {}", self.k));
        }
        if self.eps <= Rational::zero() || self.eps >= rat(1, 2) {
            return bad(format!("epsilon must lie in (0, 1/2), got {}", self.eps));
        }
        if self.rho <= Rational::zero() || self.rho > int(self.d as i64) {
            return bad(format!("rho must lie in (0, d], got {}", self.rho));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Perturbation {
    pub coord: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub signature: Signature,
    pub points: usize,
    /// Opponent clusters in total after the round.
    pub opponent_clusters: usize,
    /// Clusters holding points of this round.
    pub touched: usize,
    pub small: usize,
    pub big: usize,
    pub next: Option<Perturbation>,
    pub certified: Vec<ClusterId>,
    /// Clusters holding points of this round and none later.
    pub expired: usize,
}

/// Adversary state between rounds.
#[derive(Clone, Debug)]
pub struct ClusterGameState {
    pub config: ClusterGameConfig,
    pub round: usize,
    pub sigma: Signature,
    rng: RngStream,
}

impl ClusterGameState {
    pub fn new(config: ClusterGameConfig) -> Result<Self> {
        config.validate()?;
        Ok(ClusterGameState {
            sigma: Signature::zeros(config.d),
            rng: RngStream::new(config.seed),
            round: 1,
            config,
        })
    }

    /// Points of the current round, lexicographic in the underlying lattice.
    pub fn round_points(&self) -> Vec<Point> {
        gen_s1(self.config.d, self.config.k)
            .expect("validated K")
            .iter()
            .map(|p| perturb_point(p, &self.sigma, &self.config.eps))
            .collect()
    }

    /// Chooses `σ(i+1)` and advances to the next round. Returns the chosen
    /// perturbation together with the big clusters it certifies as expired.
    pub fn step(
        &mut self,
        clusters: &[Cluster],
        classes: &BTreeMap<ClusterId, ClusterClass>,
    ) -> Result<(Perturbation, Vec<ClusterId>)> {
        if self.round >= self.config.rounds() {
            return Err(Error::InvalidParameter(format!(
                "no signature change after round {} of {}",
                self.round,
                self.config.rounds()
            )));
        }
        let zeros = self.sigma.zero_coords();
        if zeros.is_empty() {
            return Err(Error::Invariant("signature has no zero coordinate left".into()));
        }
        let big: Vec<ClusterId> = classes
            .iter()
            .filter(|(_, c)| matches!(c, ClusterClass::Big { .. }))
            .map(|(&id, _)| id)
            .collect();
        let certified_by = |j: usize, sign: i8| -> Vec<ClusterId> {
            big.iter()
                .copied()
                .filter(|id| certified_expiry(clusters[id.0].bbox(), j, sign))
                .collect()
        };
        let (coord, sign) = match self.config.mode {
            GameMode::Deterministic => {
                let mut best: Option<(usize, usize, i8)> = None;
                for &j in &zeros {
                    for sign in [-1i8, 1] {
                        let count = certified_by(j, sign).len();
                        if best.is_none_or(|(c, _, _)| count > c) {
                            best = Some((count, j, sign));
                        }
                    }
                }
                let (_, j, s) = best.expect("nonempty candidate set");
                (j, s)
            }
            GameMode::Oblivious => {
                let j = zeros[self.rng.below(zeros.len() as u64) as usize];
                (j, if self.rng.coin() { 1 } else { -1 })
            }
        };
        let certified = certified_by(coord, sign);
        self.sigma = self.sigma.with(coord, sign);
        self.round += 1;
        Ok((Perturbation { coord, sign }, certified))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterGameReport {
    pub d: usize,
    pub k: i64,
    pub rho: String,
    pub eps: String,
    pub mode: GameMode,
    pub seed: u64,
    pub opponent: String,
    pub rounds: Vec<RoundRecord>,
    pub total_points: usize,
    pub alg: usize,
    pub total_expired: usize,
    /// `K^d / 2^d`, the optimum of the first round and a lower bound on OPT.
    pub opt_lower: u64,
    /// Best translated odd-corner tiling of the final point set.
    pub opt_shift_upper: Option<usize>,
    pub opt_exact: Option<usize>,
    pub checks: Vec<(String, bool)>,
}

impl ClusterGameReport {
    /// The optimum used as denominator: exact if known, else the tiling
    /// upper bound (making the ratio a lower bound on the true one).
    pub fn opt(&self) -> usize {
        self.opt_exact
            .or(self.opt_shift_upper)
            .unwrap_or(self.opt_lower as usize)
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Plays the full game against `opponent`.
pub fn clustering_game_run(
    config: ClusterGameConfig,
    opponent: &mut dyn OnlineClustering,
    mut log: Option<&mut dyn FnMut(LogRecord)>,
) -> Result<ClusterGameReport> {
    let mut state = ClusterGameState::new(config.clone())?;
    if opponent.dim() != config.d {
        return Err(Error::DimensionMismatch {
            expected: config.d,
            found: opponent.dim(),
        });
    }
    let d = config.d;
    let rounds = config.rounds();
    let mut last_round: BTreeMap<ClusterId, usize> = BTreeMap::new();
    let mut assigned_count: Vec<usize> = Vec::new();
    let mut all_points: Vec<Point> = Vec::new();
    let mut records: Vec<RoundRecord> = Vec::new();
    let mut sig_ok = true;
    let mut obs_ok = true;
    let mut step = 0usize;

    for round in 1..=rounds {
        sig_ok &= state.sigma.nonzeros() == round - 1;
        let sigma = state.sigma.clone();
        let points = state.round_points();

        for tau in ShiftVector::all(d) {
            obs_ok &= shift_covers_perturbed(&sigma, &tau) == grid_shift_solution(&points, &tau).is_some();
        }

        let mut round_members: BTreeMap<ClusterId, Vec<Point>> = BTreeMap::new();
        for p in &points {
            let before = opponent.clusters().len();
            let a = opponent.insert(p)?;
            check_online_rules(opponent, before, a.cluster, a.opened, p, &mut assigned_count)?;
            last_round.insert(a.cluster, round);
            round_members.entry(a.cluster).or_default().push(p.clone());
            if let Some(log) = log.as_deref_mut() {
                log(LogRecord::point("clustering", round, step, p, a.cluster.0, a.opened));
            }
            step += 1;
        }
        all_points.extend(points.iter().cloned());

        let classes = classify_clusters(opponent.clusters(), &round_members, &sigma, round, &config.rho);
        let small = classes.values().filter(|c| **c == ClusterClass::Small).count();
        let mut record = RoundRecord {
            round,
            signature: sigma,
            points: points.len(),
            opponent_clusters: opponent.clusters().len(),
            touched: round_members.len(),
            small,
            big: classes.len() - small,
            next: None,
            certified: Vec::new(),
            expired: 0,
        };
        if round < rounds {
            let (next, certified) = state.step(opponent.clusters(), &classes)?;
            sig_ok &= state.sigma.nonzeros() == round;
            if let Some(log) = log.as_deref_mut() {
                log(LogRecord::certificates(
                    "clustering",
                    round,
                    certified.iter().map(|c| c.to_string()).collect(),
                    format!("perturb coord {} by {}", next.coord, next.sign),
                ));
            }
            record.next = Some(next);
            record.certified = certified;
        }
        records.push(record);
    }

    // Post-hoc expiry accounting.
    for rec in &mut records {
        rec.expired = last_round.values().filter(|&&r| r == rec.round).count();
    }
    let certified_ok = records
        .iter()
        .all(|rec| rec.certified.iter().all(|id| last_round.get(id) == Some(&rec.round)));
    let mut seen = BTreeSet::new();
    let unique_ok = records
        .iter()
        .all(|rec| rec.certified.iter().all(|id| seen.insert(*id)));
    let total_expired: usize = records.iter().map(|r| r.expired).sum();
    let alg = opponent.clusters().len();
    let final_cover = ShiftVector::all(d).any(|tau| grid_shift_solution(&all_points, &tau).is_some());
    let members_ok = opponent
        .clusters()
        .iter()
        .all(|c| c.members().len() == assigned_count[c.id().0]);

    let opt_exact = match oracle::exact_opt_with(&all_points, &OracleConfig::default()) {
        Ok(sol) => Some(sol.cubes.len()),
        Err(Error::OracleLimit { .. }) => None,
        Err(e) => return Err(e),
    };
    let opt_lower = (config.k as u64 / 2).pow(d as u32);
    let opt_shift_upper = opt_upper_via_shifts(&all_points);

    let checks = vec![
        ("signature_nonzeros_per_round".to_string(), sig_ok),
        ("shift_predicate_matches_tiling".to_string(), obs_ok),
        ("certified_clusters_receive_no_later_point".to_string(), certified_ok),
        ("certified_at_most_once".to_string(), unique_ok),
        ("final_set_covered_by_some_shift".to_string(), final_cover),
        ("created_ge_expired".to_string(), alg >= total_expired),
        ("assignments_unchanged".to_string(), members_ok),
    ];

    Ok(ClusterGameReport {
        d,
        k: config.k,
        rho: config.rho.to_string(),
        eps: config.eps.to_string(),
        mode: config.mode,
        seed: config.seed,
        opponent: opponent.name().to_string(),
        rounds: records,
        total_points: all_points.len(),
        alg,
        total_expired,
        opt_lower,
        opt_shift_upper,
        opt_exact,
        checks,
    })
}

fn check_online_rules(
    opponent: &dyn OnlineClustering,
    before: usize,
    id: ClusterId,
    opened: bool,
    p: &Point,
    assigned_count: &mut Vec<usize>,
) -> Result<()> {
    let clusters = opponent.clusters();
    let violation = |m: String| Err(Error::Protocol(m));
    if clusters.len() < before {
        return violation(format!("cluster count dropped from {before} to {}", clusters.len()));
    }
    let expected_len = before + usize::from(opened);
    if clusters.len() != expected_len || (opened && id.0 != before) {
        return violation(format!("cluster {id} reported opened={opened} inconsistently"));
    }
    let Some(cluster) = clusters.get(id.0) else {
        return violation(format!("unknown cluster {id}"));
    };
    if cluster.members().last() != Some(p) {
        return violation(format!("point {p} not recorded in cluster {id}"));
    }
    if cluster.bbox().max_extent() > Rational::one() {
        return violation(format!("cluster {id} exceeds unit extent"));
    }
    assigned_count.resize(clusters.len(), 0);
    assigned_count[id.0] += 1;
    if cluster.members().len() != assigned_count[id.0] {
        return violation(format!("cluster {id} lost or gained members"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{Greedy, Grid};

    fn sig(e: &[i8]) -> Signature {
        Signature::new(e.to_vec()).unwrap()
    }

    fn tau(e: &[u8]) -> ShiftVector {
        ShiftVector::new(e.to_vec()).unwrap()
    }

    #[test]
    fn perturbation_examples() {
        let eps = rat(1, 4);
        let p = LatticePoint(vec![3, 8]);
        assert_eq!(perturb_point(&p, &Signature::zeros(2), &eps), p.to_point());
        assert_eq!(
            perturb_point(&LatticePoint(vec![1, 2]), &sig(&[-1, 0]), &eps),
            Point::new(vec![rat(5, 4), int(2)])
        );
        assert_eq!(
            perturb_point(&LatticePoint(vec![2, 1]), &sig(&[1, 0]), &eps),
            Point::new(vec![rat(9, 4), int(1)])
        );
        assert_eq!(
            perturb_point(&LatticePoint(vec![1, 2]), &sig(&[1, 1]), &eps),
            Point::new(vec![rat(3, 4), rat(9, 4)])
        );
    }

    #[test]
    fn shift_predicate_examples() {
        for t in ShiftVector::all(3) {
            assert!(shift_covers_perturbed(&Signature::zeros(3), &t));
        }
        assert!(!shift_covers_perturbed(&sig(&[-1, 0]), &tau(&[1, 0])));
        assert!(shift_covers_perturbed(&sig(&[-1, 0]), &tau(&[0, 0])));
        assert!(shift_covers_perturbed(&sig(&[-1, 0]), &tau(&[0, 1])));
        assert!(shift_covers_perturbed(&sig(&[1, 0]), &tau(&[1, 1])));
    }

    /// All signatures of dimension `d` with at most two nonzero entries.
    fn small_signatures(d: usize) -> Vec<Signature> {
        let mut out = Vec::new();
        let total = 3usize.pow(d as u32);
        for mut code in 0..total {
            let mut e = Vec::with_capacity(d);
            for _ in 0..d {
                e.push((code % 3) as i8 - 1);
                code /= 3;
            }
            let s = Signature(e);
            if s.nonzeros() <= 2 {
                out.push(s);
            }
        }
        out
    }

    #[test]
    fn shift_predicate_agrees_with_brute_force_coverage() {
        for d in 1..=3usize {
            for k in [2i64, 4, 6] {
                let base = gen_s1(d, k).unwrap();
                for s in small_signatures(d) {
                    let pts: Vec<Point> = base.iter().map(|p| perturb_point(p, &s, &rat(1, 4))).collect();
                    for t in ShiftVector::all(d) {
                        // brute force: some odd-corner cube Q + τ near p contains it
                        let covered = pts.iter().all(|p| {
                            let cell = p.cell();
                            crate::geometry::binary_vectors(d).any(|off| {
                                let lo: Vec<i64> = (0..d).map(|j| cell.0[j] - off[j]).collect();
                                let odd = (0..d).all(|j| (lo[j] - t.entries()[j] as i64).rem_euclid(2) == 1);
                                odd && LatticePoint(lo).unit_cube().contains(p).unwrap()
                            })
                        });
                        assert_eq!(shift_covers_perturbed(&s, &t), covered, "d={d} K={k} σ={s} τ={t:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn certified_expiry_examples() {
        let b = |lo: Rational, hi: Rational| Aabb::new(vec![int(0), lo], vec![int(0), hi]).unwrap();
        assert!(certified_expiry(&b(int(1), int(2)), 1, 1));
        assert!(!certified_expiry(&b(int(1), int(2)), 1, -1));
        assert!(certified_expiry(&b(int(2), int(3)), 1, -1));
        assert!(!certified_expiry(&b(int(2), int(3)), 1, 1));
        assert!(!certified_expiry(&b(int(1), rat(3, 2)), 1, 1));
        assert!(!certified_expiry(&b(int(1), rat(3, 2)), 1, -1));
    }

    #[test]
    fn certified_expiry_matches_perturbation_rule() {
        // Both future j-coordinates of the lattice values m, m+1 leave [m, m+1].
        let eps = rat(1, 4);
        for m in -3i64..5 {
            for sign in [-1i8, 1] {
                let s = sig(&[sign]);
                let lo = perturb_point(&LatticePoint(vec![m]), &s, &eps);
                let hi = perturb_point(&LatticePoint(vec![m + 1]), &s, &eps);
                let bx = Aabb::new(vec![int(m)], vec![int(m + 1)]).unwrap();
                let escapes = !bx.contains(&lo).unwrap() && !bx.contains(&hi).unwrap();
                assert_eq!(certified_expiry(&bx, 0, sign), escapes, "m={m} sign={sign}");
            }
        }
    }

    #[test]
    fn grid_on_the_lattice_makes_small_singletons() {
        // Half-open cells hold exactly one integer point each.
        let d = 4;
        let mut g = Grid::new(d);
        let mut members: BTreeMap<ClusterId, Vec<Point>> = BTreeMap::new();
        for p in gen_s1(d, 8).unwrap() {
            let pt = p.to_point();
            let a = g.insert(&pt).unwrap();
            members.entry(a.cluster).or_default().push(pt);
        }
        assert_eq!(g.clusters().len(), 8usize.pow(4));
        let classes = classify_clusters(g.clusters(), &members, &Signature::zeros(d), 1, &int(4));
        assert!(classes.values().all(|c| *c == ClusterClass::Small));
        let mut state = ClusterGameState::new(ClusterGameConfig::new(d, 8, GameMode::Deterministic, 0)).unwrap();
        let (choice, certified) = state.step(g.clusters(), &classes).unwrap();
        assert!(certified.is_empty());
        assert_eq!((choice.coord, choice.sign), (0, -1));
    }

    #[test]
    fn classification_small_and_full_extent() {
        let d = 4;
        let p = Point::from_ints(&[1, 1, 1, 1]);
        let single = Cluster::singleton(ClusterId(0), &p);
        let members = BTreeMap::from([(ClusterId(0), vec![p.clone()])]);
        let classes = classify_clusters(&[single], &members, &Signature::zeros(d), 1, &int(4));
        assert_eq!(classes[&ClusterId(0)], ClusterClass::Small);

        let mut full = Cluster::singleton(ClusterId(0), &p);
        let mut pts = vec![p.clone()];
        for bits in crate::geometry::binary_vectors(d).skip(1) {
            let q = Point::from_ints(&bits.iter().map(|b| 1 + b).collect::<Vec<_>>());
            full.push(&q).unwrap();
            pts.push(q);
        }
        let members = BTreeMap::from([(ClusterId(0), pts)]);
        let classes = classify_clusters(&[full], &members, &Signature::zeros(d), 1, &int(4));
        assert_eq!(classes[&ClusterId(0)], ClusterClass::Big { s: 4 });
    }

    #[test]
    fn greedy_on_s1_produces_full_extent_big_clusters() {
        let d = 4;
        let mut g = Greedy::new(d);
        let mut members: BTreeMap<ClusterId, Vec<Point>> = BTreeMap::new();
        for p in gen_s1(d, 8).unwrap() {
            let pt = p.to_point();
            let a = g.insert(&pt).unwrap();
            members.entry(a.cluster).or_default().push(pt);
        }
        let classes = classify_clusters(g.clusters(), &members, &Signature::zeros(d), 1, &int(4));
        // greedy packs [K]^d into the optimal 2^d-point blocks
        assert_eq!(g.clusters().len(), 256);
        assert!(classes.values().all(|c| *c == ClusterClass::Big { s: 4 }));
        // Each (j, s) certifies exactly the blocks [m, m+1] with the right
        // parity; blocks start at odd m, so s = +1 certifies all of them.
        let mut state = ClusterGameState::new(ClusterGameConfig::new(d, 8, GameMode::Deterministic, 0)).unwrap();
        let (choice, certified) = state.step(g.clusters(), &classes).unwrap();
        assert_eq!((choice.coord, choice.sign), (0, 1));
        assert_eq!(certified.len(), 256);
    }

    #[test]
    fn oblivious_mode_is_reproducible() {
        let run = |seed| {
            let cfg = ClusterGameConfig::new(6, 4, GameMode::Oblivious, seed);
            let mut g = Grid::new(6);
            let report = clustering_game_run(cfg, &mut g, None).unwrap();
            report.rounds.iter().map(|r| r.signature.clone()).collect::<Vec<_>>()
        };
        assert_eq!(run(17), run(17));
    }

    #[test]
    fn step_only_changes_zero_coordinates() {
        let cfg = ClusterGameConfig::new(6, 4, GameMode::Deterministic, 0);
        let mut g = Greedy::new(6);
        let report = clustering_game_run(cfg, &mut g, None).unwrap();
        for w in report.rounds.windows(2) {
            let next = w[0].next.as_ref().unwrap();
            assert_eq!(w[0].signature.entries()[next.coord], 0);
            assert_eq!(w[1].signature.nonzeros(), w[0].signature.nonzeros() + 1);
        }
        assert!(report.all_checks_pass(), "{:?}", report.checks);
    }

    #[test]
    fn two_dimensional_game_has_one_round() {
        let cfg = ClusterGameConfig::new(2, 4, GameMode::Deterministic, 0);
        let mut g = Grid::new(2);
        let report = clustering_game_run(cfg, &mut g, None).unwrap();
        assert_eq!(report.rounds.len(), 1);
        assert!(report.rounds[0].next.is_none());
        // every cluster expires in the last round
        assert_eq!(report.total_expired, report.alg);
        assert_eq!(report.opt_exact, Some(4));
        assert!(report.all_checks_pass());
    }

    #[test]
    fn config_validation() {
        let bad = |d, k| ClusterGameState::new(ClusterGameConfig::new(d, k, GameMode::Deterministic, 0)).is_err();
        assert!(bad(1, 4));
        assert!(bad(4, 5));
        assert!(bad(4, 2));
        let mut cfg = ClusterGameConfig::new(4, 4, GameMode::Deterministic, 0);
        cfg.eps = rat(1, 2);
        assert!(ClusterGameState::new(cfg.clone()).is_err());
        cfg.eps = rat(1, 8);
        cfg.rho = int(5);
        assert!(ClusterGameState::new(cfg).is_err());
    }

    #[test]
    fn step_after_last_round_is_an_error() {
        let mut state = ClusterGameState::new(ClusterGameConfig::new(2, 4, GameMode::Deterministic, 0)).unwrap();
        assert!(state.step(&[], &BTreeMap::new()).is_err());
    }
}
