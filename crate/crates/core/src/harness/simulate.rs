use std::collections::HashMap;
use std::fmt::Write as _;

use super::{recognize_family, AlgName, OptSource, RunReport};
use crate::algorithms::{Centered, FirstFitCover, Greedy, Grid, OnlineClustering, OnlineCovering, ReweighState};
use crate::error::{Error, Result};
use crate::geometry::{int, pow2, rat, Instance, LatticePoint, Point, Rational};
use crate::oracle;

/// One line per insert: `i branch_or_alg cluster_id opened lo_corner...`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub lines: Vec<String>,
}

impl Transcript {
    fn push(&mut self, i: usize, tag: &str, cluster: usize, opened: bool, lo: &Point) {
        let mut line = format!("{i} {tag} {cluster} {}", u8::from(opened));
        for c in lo.coords() {
            let _ = write!(line, " {c}");
        }
        self.lines.push(line);
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# i branch_or_alg cluster_id opened lo_corner...\n");
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

fn run_clustering(alg: &mut dyn OnlineClustering, points: &[Point], tx: &mut Transcript) -> Result<(u64, bool)> {
    let mut unit = true;
    for (i, p) in points.iter().enumerate() {
        let a = alg.insert(p)?;
        let c = &alg.clusters()[a.cluster.0];
        unit &= c.bbox().max_extent() <= int(1);
        tx.push(i, alg.name(), a.cluster.0, a.opened, &c.bbox().lo_point());
    }
    unit &= alg.clusters().iter().all(|c| c.bbox().max_extent() <= int(1));
    Ok((alg.clusters().len() as u64, unit))
}

fn run_covering(alg: &mut dyn OnlineCovering, points: &[Point], tx: &mut Transcript) -> Result<u64> {
    for (i, p) in points.iter().enumerate() {
        let a = alg.cover(p)?;
        let cube = &alg.cubes()[a.cluster.0].cube;
        if !cube.contains(p)? {
            return Err(Error::Protocol(format!("point {p} left uncovered")));
        }
        tx.push(i, alg.name(), a.cluster.0, a.opened, &cube.lo_point());
    }
    Ok(alg.cubes().len() as u64)
}

/// Streams the instance through `alg` in file order and compares against
/// the optimum: the family formula when `opt_formula` is set (the instance
/// must then be a generated one), the exact oracle otherwise.
pub fn simulate(inst: &Instance, alg: AlgName, seed: u64, opt_formula: bool) -> Result<(RunReport, Transcript)> {
    let d = inst.dim;
    let family = recognize_family(inst);
    let (opt, opt_source) = if opt_formula {
        let fam = family
            .ok_or_else(|| Error::InvalidParameter("--opt-formula needs an instance produced by `gen`".into()))?;
        (fam.opt()?, OptSource::Formula)
    } else {
        (oracle::exact_opt(&inst.points)?.len() as u64, OptSource::Oracle)
    };

    let mut tx = Transcript::default();
    let mut stats = Vec::new();
    let mut checks = Vec::new();
    let alg_count = match alg {
        AlgName::Grid => {
            let (count, unit) = run_clustering(&mut Grid::new(d), &inst.points, &mut tx)?;
            checks.push(("clusters_within_unit_diameter".into(), unit));
            checks.push(("grid_le_2^d_opt".into(), count <= (1u64 << d) * opt));
            count
        }
        AlgName::Greedy => {
            let (count, unit) = run_clustering(&mut Greedy::new(d), &inst.points, &mut tx)?;
            checks.push(("clusters_within_unit_diameter".into(), unit));
            if d == 1 {
                checks.push(("greedy_le_2opt".into(), count <= 2 * opt));
            }
            if inst.is_lattice() {
                let cap = (pow2(d as i64 - 1) + rat(1, 2)) * int(opt as i64);
                checks.push((
                    "greedy_le_(2^(d-1)+1/2)opt".into(),
                    Rational::from_integer(count.into()) <= cap,
                ));
            }
            count
        }
        AlgName::Centered => run_covering(&mut Centered::new(d), &inst.points, &mut tx)?,
        AlgName::FirstFit => run_covering(&mut FirstFitCover::new(d), &inst.points, &mut tx)?,
        AlgName::Reweigh => {
            let lattice = inst
                .points
                .iter()
                .map(|p| p.to_lattice().map_err(|_| Error::NotLattice(p.to_string())))
                .collect::<Result<Vec<LatticePoint>>>()?;
            let mut state = ReweighState::new(d, seed);
            let mut ids: HashMap<LatticePoint, usize> = HashMap::new();
            for (i, p) in lattice.iter().enumerate() {
                let out = state.insert(p)?;
                let next = ids.len();
                let id = *ids.entry(out.assigned.clone()).or_insert(next);
                let tag = out.branch.number().to_string();
                tx.push(i, &tag, id, out.opened, &out.assigned.to_point());
            }
            let s = state.stats();
            stats.push(("branch_counts".into(), format!("{:?}", s.branch_counts)));
            stats.push(("samples_drawn".into(), s.samples_drawn.to_string()));
            stats.push(("max_exponent".into(), s.max_exponent.to_string()));
            stats.push(("c1".into(), state.c1().len().to_string()));
            stats.push(("c2".into(), state.c2().len().to_string()));
            stats.push(("b".into(), state.bookkept().len().to_string()));
            for (name, ok) in state.audit().into_iter().chain(state.audit_against_opt(opt as usize)) {
                checks.push((name.into(), ok));
            }
            state.cube_count() as u64
        }
        AlgName::Malicious => {
            return Err(Error::InvalidParameter("`malicious` only plays covering duels".into()));
        }
    };
    checks.push(("alg_ge_opt".into(), alg_count >= opt));

    let (family_name, k_or_n) = match family {
        Some(f) => (f.kind.to_string(), f.param),
        None => ("file".to_string(), inst.points.len() as i64),
    };
    Ok((
        RunReport {
            family: family_name,
            d,
            k_or_n,
            alg,
            seed,
            alg_count,
            opt,
            opt_source,
            stats,
            checks,
        },
        tx,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::diagonal_pairs_instance;

    fn diag(n: i64) -> Instance {
        Instance::new(2, diagonal_pairs_instance(n).unwrap()).unwrap()
    }

    #[test]
    fn greedy_on_diagonal_pairs() {
        let (r, tx) = simulate(&diag(5), AlgName::Greedy, 0, false).unwrap();
        assert_eq!((r.alg_count, r.opt, r.family.as_str(), r.k_or_n), (5, 2, "diagonal", 5));
        assert_eq!(r.ratio(), rat(5, 2));
        assert_eq!(r.csv_row(), "diagonal,2,5,greedy,0,5,2,5,2");
        assert!(r.all_checks_pass());
        assert_eq!(tx.lines.len(), 10);
        assert_eq!(tx.lines[0], "0 greedy 0 1 1 0");
        assert_eq!(tx.lines[1], "1 greedy 0 0 0 0");
        let (f, _) = simulate(&diag(5), AlgName::Greedy, 0, true).unwrap();
        assert_eq!((f.opt, f.opt_source), (2, OptSource::Formula));
    }

    #[test]
    fn reweigh_needs_lattice_points() {
        let err = simulate(&diag(3), AlgName::Reweigh, 0, false).unwrap_err();
        assert!(matches!(err, Error::NotLattice(_)));
    }

    #[test]
    fn reweigh_on_a_repeated_point() {
        let inst = Instance::from_lattice(2, &vec![LatticePoint(vec![3, 3]); 5]).unwrap();
        for seed in 0..10 {
            let (r, tx) = simulate(&inst, AlgName::Reweigh, seed, false).unwrap();
            assert_eq!(r.alg_count, 1);
            assert!(tx.lines[0].starts_with("0 4 0 1"));
            assert!(tx.lines[1..].iter().all(|l| l.split(' ').nth(1) == Some("1")));
            assert!(r.all_checks_pass(), "{:?}", r.checks);
        }
    }

    #[test]
    fn transcripts_are_deterministic() {
        let inst = Instance::from_lattice(2, &crate::adversaries::gen_s1(2, 6).unwrap()).unwrap();
        let a = simulate(&inst, AlgName::Reweigh, 9, false).unwrap();
        let b = simulate(&inst, AlgName::Reweigh, 9, false).unwrap();
        assert_eq!(a.1, b.1);
        assert_eq!(a.0.csv_row(), b.0.csv_row());
    }

    #[test]
    fn opt_formula_refuses_unknown_instances() {
        let inst = Instance::new(1, vec![Point::new(vec![rat(1, 3)])]).unwrap();
        assert!(simulate(&inst, AlgName::Grid, 0, true).is_err());
        let (r, _) = simulate(&inst, AlgName::Grid, 0, false).unwrap();
        assert_eq!((r.family.as_str(), r.alg_count, r.opt), ("file", 1, 1));
    }
}
