use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use unitlab::adversaries::{GameMode, LogRecord};
use unitlab::geometry::{parse_rational, Instance, Rational};
use unitlab::harness::{self, Adversary, AlgName, DuelParams, Family, CSV_HEADER};
use unitlab::oracle::{self, StructuredKind};
use unitlab::{Error, Result};

#[derive(Parser)]
#[command(
    name = "unitlab",
    version,
    about = "Online unit clustering and covering under L-infinity"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    S1,
    Barycentric,
    Diagonal,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Det,
    Oblivious,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated instance.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        d: usize,
        /// Box side (s1, barycentric).
        #[arg(long = "K")]
        k: Option<i64>,
        /// Number of pairs (diagonal).
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Stream an instance through an algorithm and print a CSV row.
    Simulate {
        #[arg(long)]
        alg: AlgName,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Take OPT from the family formula instead of the oracle.
        #[arg(long)]
        opt_formula: bool,
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Play an adversary against an algorithm.
    Duel {
        #[arg(long)]
        adversary: Adversary,
        #[arg(long)]
        alg: AlgName,
        #[arg(long)]
        d: usize,
        #[arg(long = "K", default_value_t = 4)]
        k: i64,
        #[arg(long, value_parser = parse_rational)]
        rho: Option<Rational>,
        #[arg(long, value_parser = parse_rational)]
        eps: Option<Rational>,
        #[arg(long, value_enum, default_value = "det")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// JSON-lines game log.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Exact offline optimum of an instance.
    Opt {
        #[arg(long)]
        instance: PathBuf,
        /// Also print the lower corner of every cube.
        #[arg(long)]
        corners: bool,
    },
    /// Summarize CSV rows from simulate and duel.
    Report { files: Vec<PathBuf> },
}

#[derive(Serialize)]
struct TrialRecord {
    trial: u64,
    #[serde(flatten)]
    record: LogRecord,
}

fn gen(family: FamilyArg, d: usize, k: Option<i64>, n: Option<i64>, out: PathBuf) -> Result<()> {
    let need =
        |v: Option<i64>, flag: &str| v.ok_or_else(|| Error::InvalidParameter(format!("this family needs {flag}")));
    let fam = match family {
        FamilyArg::S1 => Family {
            kind: StructuredKind::S1,
            d,
            param: need(k, "--K")?,
        },
        FamilyArg::Barycentric => Family {
            kind: StructuredKind::Barycentric,
            d,
            param: need(k, "--K")?,
        },
        FamilyArg::Diagonal => Family {
            kind: StructuredKind::DiagonalPairs,
            d,
            param: need(n, "--n")?,
        },
    };
    let inst = Instance::new(d, fam.generate()?)?;
    inst.write(&out)?;
    eprintln!("wrote {} points, OPT={}", inst.points.len(), fam.opt()?);
    Ok(())
}

fn violation(failed: &[&str]) -> Result<()> {
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Invariant(format!("failed checks: {}", failed.join(", "))))
    }
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Gen { family, d, k, n, out } => gen(family, d, k, n, out),
        Cmd::Simulate {
            alg,
            instance,
            seed,
            opt_formula,
            transcript,
        } => {
            let inst = Instance::read(&instance)?;
            let (report, tx) = harness::simulate(&inst, alg, seed, opt_formula)?;
            if let Some(path) = transcript {
                std::fs::write(path, tx.to_text())?;
            }
            println!("{CSV_HEADER}");
            println!("{}", report.csv_row());
            violation(&report.failed_checks())
        }
        Cmd::Duel {
            adversary,
            alg,
            d,
            k,
            rho,
            eps,
            mode,
            seed,
            trials,
            log,
        } => {
            let params = DuelParams {
                adversary,
                alg,
                d,
                k,
                rho,
                eps,
                mode: match mode {
                    ModeArg::Det => GameMode::Deterministic,
                    ModeArg::Oblivious => GameMode::Oblivious,
                },
                seed,
                trials,
            };
            let summary = match log {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    let mut io_err = None;
                    let mut sink = |trial: u64, record: LogRecord| {
                        if io_err.is_none() {
                            let line =
                                serde_json::to_string(&TrialRecord { trial, record }).expect("log record serializes");
                            if let Err(e) = writeln!(w, "{line}") {
                                io_err = Some(e);
                            }
                        }
                    };
                    let s = harness::duel(&params, Some(&mut sink))?;
                    if let Some(e) = io_err {
                        return Err(e.into());
                    }
                    w.flush()?;
                    s
                }
                None => harness::duel(&params, None)?,
            };
            println!("{CSV_HEADER}");
            for t in &summary.trials {
                println!("{}", t.csv_row());
            }
            println!(
                "# trials={} min={:.4} mean={:.4} max={:.4}",
                summary.trials.len(),
                summary.min_ratio,
                summary.mean_ratio,
                summary.max_ratio
            );
            if let Some(t) = summary.trials.first() {
                println!("# opt_source={:?}", t.opt_source);
                if summary.trials.len() == 1 {
                    for (k, v) in &t.stats {
                        println!("# {k}={v}");
                    }
                }
            }
            for (name, count) in &summary.failures {
                println!("# FAILED {name} in {count} trial(s)");
            }
            for v in &summary.violations {
                eprintln!("{v}");
            }
            let failed: Vec<&str> = summary.failures.keys().map(String::as_str).collect();
            violation(&failed)
        }
        Cmd::Opt { instance, corners } => {
            let inst = Instance::read(&instance)?;
            let sol = oracle::exact_opt(&inst.points)?;
            println!("OPT={}", sol.len());
            if corners {
                for c in &sol.cubes {
                    println!("{}", c.lo_point().coord_strings().join(" "));
                }
            }
            Ok(())
        }
        Cmd::Report { files } => {
            let mut rows = Vec::new();
            for f in files {
                let text = std::fs::read_to_string(&f)?;
                match harness::parse_csv(&text) {
                    Ok(r) => rows.extend(r),
                    Err(Error::Parse { line, msg }) => {
                        return Err(Error::Parse {
                            line,
                            msg: format!("{}: {msg}", f.display()),
                        });
                    }
                    Err(e) => return Err(e),
                }
            }
            print!("{}", harness::render_report(&rows));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
