//! Solving, stage dumps and CSV reports behind the `smc` binary.

use std::fmt::Write as _;
use std::time::Instant;

use smc_core::asymmetric::{approx_asymmetric_run, log43_ceil};
use smc_core::cover::validate_solution;
use smc_core::format::write_cover;
use smc_core::graph::EdgeSubgraph;
use smc_core::metric::{approx_metric_run, prior_sf4, JoinMode};
use smc_core::onetwo::{approx_onetwo_run, Piece, TieBreak, Variant};
use smc_core::oracle::{brute_force_smc, OracleBudget, ProbeReport};
use smc_core::{CycleCover, Error, Instance, Rational, WeightClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Algo {
    Metric3,
    Onetwo119,
    Onetwo76,
    AsymLog,
    PriorSf4,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Metric3 => "metric3",
            Algo::Onetwo119 => "onetwo119",
            Algo::Onetwo76 => "onetwo76",
            Algo::AsymLog => "asym-log",
            Algo::PriorSf4 => "prior-sf4",
        }
    }

    /// Proven ratio; for asym-log the iteration bound ⌈log_{4/3} n⌉ + 1.
    pub fn bound(self, n: usize) -> Rational {
        match self {
            Algo::Metric3 => Rational::from_integer(3),
            Algo::Onetwo119 => Rational::new(11, 9),
            Algo::Onetwo76 => Rational::new(7, 6),
            Algo::AsymLog => Rational::from_integer(log43_ceil(n) as i64 + 1),
            Algo::PriorSf4 => Rational::from_integer(4),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Tie {
    #[default]
    Lex,
    Adversarial,
}

impl From<Tie> for TieBreak {
    fn from(t: Tie) -> Self {
        match t {
            Tie::Lex => TieBreak::Lex,
            Tie::Adversarial => TieBreak::Adversarial,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solved {
    /// The directed algorithm runs on a directed copy of symmetric input.
    pub instance: Instance,
    pub cover: CycleCover,
    pub cost: Rational,
    pub iterations: Option<usize>,
    pub stats: String,
    /// (file name, contents) for `--dump-stages`.
    pub stages: Vec<(String, String)>,
}

fn edges_text(g: &EdgeSubgraph) -> String {
    g.edge_list().iter().map(|(u, v)| format!("{u} {v}\n")).collect()
}

fn ids_line(ids: &[usize]) -> String {
    let mut s = ids.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    s.push('\n');
    s
}

pub fn solve(inst: &Instance, algo: Algo, tie: Tie) -> Result<Solved, Error> {
    let mut stages = Vec::new();
    let (instance, cover, iterations, stats) = match algo {
        Algo::Metric3 => {
            let run = approx_metric_run(inst, JoinMode::TJoin, false)?;
            stages.push(("g_prime.txt".into(), edges_text(&run.g_prime)));
            stages.push(("t.txt".into(), ids_line(&run.odd)));
            stages.push(("j.txt".into(), edges_text(&run.join)));
            stages.push(("h.txt".into(), edges_text(&run.h)));
            let stats = format!(
                "snd_rounds={} w(G')={} |T|={} w(J)={} w(M)={}",
                run.snd.rounds.len(),
                run.w_g_prime,
                run.odd.len(),
                run.w_join,
                run.w_matching
            );
            (inst.clone(), run.cover, None, stats)
        }
        Algo::Onetwo119 | Algo::Onetwo76 => {
            let variant = if algo == Algo::Onetwo119 { Variant::Ratio119 } else { Variant::Ratio76 };
            let run = approx_onetwo_run(inst, variant, tie.into())?;
            stages.push(("f.txt".into(), write_cover(&run.factor.cover)));
            let m: String = run.matching.iter().map(|(c, v)| format!("{c} {v}\n")).collect();
            stages.push(("matching.txt".into(), m));
            let pieces: String = run
                .digraph
                .pieces
                .iter()
                .map(|p| match p {
                    Piece::Isolated(c) => format!("isolated {c}\n"),
                    Piece::Star { root, leaves } => format!("star {root} <- {}", ids_line(leaves)),
                    Piece::Path([a, b, c]) => format!("path {a} -> {b} -> {c}\n"),
                })
                .collect();
            stages.push(("d_prime.txt".into(), pieces));
            stages.push(("phase1.txt".into(), write_cover(&run.after_phase1)));
            let stats = format!(
                "w(F)={} cycles={} pieces={} c_p={} phase1=+{} phase2=+{}",
                run.factor.weight(inst),
                run.factor.cover.len(),
                run.digraph.pieces.len(),
                run.c_p,
                run.phase1.iter().map(|e| e.delta).sum::<Rational>(),
                run.phase2.iter().map(|e| e.delta).sum::<Rational>()
            );
            (inst.clone(), run.cover, None, stats)
        }
        Algo::AsymLog => {
            let directed = if inst.class() == WeightClass::AsymmetricMetric { inst.clone() } else { inst.as_asymmetric() };
            let run = approx_asymmetric_run(&directed)?;
            stages.push(("initial.txt".into(), write_cover(&run.initial)));
            let mut summary = String::from("round eta_before eta_after inner_weight strongly_eulerian weight_after\n");
            for (i, r) in run.rounds.iter().enumerate() {
                let k = i + 1;
                stages.push((format!("round{k}_r.txt"), ids_line(&r.reps.vertices)));
                stages.push((format!("round{k}_inner.txt"), write_cover(&r.inner)));
                let arcs: String = r.union.arcs.iter().map(|(u, v)| format!("{u} {v}\n")).collect();
                stages.push((format!("round{k}_union.txt"), arcs));
                let _ = writeln!(
                    summary,
                    "{k} {} {} {} {} {}",
                    r.eta_before, r.eta_after, r.inner_weight, r.strongly_eulerian, r.weight_after
                );
            }
            stages.push(("rounds.txt".into(), summary));
            let it = run.iterations();
            let stats = format!("iterations={it} bound={}", log43_ceil(directed.n()) + 1);
            (directed, run.cover, Some(it), stats)
        }
        Algo::PriorSf4 => (inst.clone(), prior_sf4(inst)?, None, String::new()),
    };
    let cost = cover.cycles.iter().map(|c| c.cost(&instance)).sum();
    stages.push(("cover.txt".into(), write_cover(&cover)));
    Ok(Solved { instance, cover, cost, iterations, stats, stages })
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Internal(_) | Error::RoundingStall | Error::NotEulerian(_) | Error::InvalidCover(_) => 1,
        _ => 2,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub instance: String,
    pub n: usize,
    pub group_sizes: Vec<usize>,
    pub algorithm: Algo,
    pub cost: Option<Rational>,
    pub feasible: bool,
    pub oracle: Option<Rational>,
    pub iterations: Option<usize>,
    pub wall_ms: f64,
    /// Solver error, if any.
    pub error: Option<String>,
    /// The algorithm does not apply to this instance.
    pub skipped: bool,
}

impl RatioRow {
    pub fn ratio(&self) -> Option<Rational> {
        Some(self.cost? / self.oracle?)
    }

    pub fn bound(&self) -> Rational {
        self.algorithm.bound(self.n)
    }

    /// Within the proven bound; for asym-log the bound is iterations · opt.
    pub fn passes(&self) -> Option<bool> {
        let ratio = self.ratio()?;
        let bound = match (self.algorithm, self.iterations) {
            (Algo::AsymLog, Some(it)) => Rational::from_integer(it as i64),
            _ => self.bound(),
        };
        Some(self.feasible && ratio <= bound)
    }

    pub fn ok(&self) -> bool {
        self.skipped || (self.error.is_none() && self.feasible && self.passes() != Some(false))
    }
}

pub const RATIO_HEADER: [&str; 13] = [
    "instance",
    "n",
    "groups",
    "algorithm",
    "cost",
    "feasible",
    "oracle_cost",
    "ratio",
    "bound",
    "pass",
    "iterations",
    "wall_ms",
    "error",
];

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn sizes(s: &[usize]) -> String {
    s.iter().map(usize::to_string).collect::<Vec<_>>().join("+")
}

pub fn group_sizes(inst: &Instance) -> Vec<usize> {
    inst.groups().iter().map(Vec::len).collect()
}

pub fn write_ratio_csv<W: std::io::Write>(out: W, rows: &[RatioRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RATIO_HEADER)?;
    for r in rows {
        w.write_record([
            r.instance.clone(),
            r.n.to_string(),
            sizes(&r.group_sizes),
            r.algorithm.name().to_string(),
            opt(r.cost),
            r.feasible.to_string(),
            opt(r.oracle),
            opt(r.ratio()),
            r.bound().to_string(),
            opt(r.passes()),
            opt(r.iterations),
            format!("{:.3}", r.wall_ms),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per algorithm on `inst`.
pub fn compare_instance(
    id: &str,
    inst: &Instance,
    algos: &[Algo],
    tie: Tie,
    oracle: Option<&OracleBudget>,
) -> Result<Vec<RatioRow>, Error> {
    let opt_cost = match oracle {
        Some(b) => Some(brute_force_smc(inst, b)?.0),
        None => None,
    };
    Ok(algos
        .iter()
        .map(|&algo| {
            let t = Instant::now();
            let res = solve(inst, algo, tie);
            let wall_ms = t.elapsed().as_secs_f64() * 1e3;
            let base = RatioRow {
                instance: id.to_string(),
                n: inst.n(),
                group_sizes: group_sizes(inst),
                algorithm: algo,
                cost: None,
                feasible: false,
                oracle: opt_cost,
                iterations: None,
                wall_ms,
                error: None,
                skipped: false,
            };
            match res {
                Ok(s) => RatioRow {
                    cost: Some(s.cost),
                    feasible: validate_solution(&s.instance, &s.cover).feasible(),
                    iterations: s.iterations,
                    ..base
                },
                Err(e) => RatioRow {
                    skipped: matches!(e, Error::Precondition(_)),
                    error: Some(e.to_string()),
                    ..base
                },
            }
        })
        .collect())
}

/// Mean ratio per algorithm over rows with an oracle cost.
pub fn mean_ratios(rows: &[RatioRow], algos: &[Algo]) -> Vec<(Algo, Option<f64>)> {
    algos
        .iter()
        .map(|&a| {
            let rs: Vec<f64> = rows
                .iter()
                .filter(|r| r.algorithm == a)
                .filter_map(RatioRow::ratio)
                .map(|q| *q.numer() as f64 / *q.denom() as f64)
                .collect();
            (a, (!rs.is_empty()).then(|| rs.iter().sum::<f64>() / rs.len() as f64))
        })
        .collect()
}

pub const PROBE_HEADER: [&str; 11] = [
    "seed", "n", "groups", "opt_smc", "w_m1", "w_m2", "ratio_m1", "ratio_m2", "w_m", "w_j", "half_w_g",
];

pub fn write_probe_csv<W: std::io::Write>(out: W, report: &ProbeReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PROBE_HEADER)?;
    for r in &report.rows {
        w.write_record([
            r.seed.to_string(),
            r.n.to_string(),
            sizes(&r.group_sizes),
            r.opt_smc.to_string(),
            r.w_m1.to_string(),
            r.w_m2.to_string(),
            r.ratio_m1().to_string(),
            r.ratio_m2().to_string(),
            r.w_m.to_string(),
            r.w_j.to_string(),
            r.half_w_g.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses rows written by [`write_probe_csv`].
pub fn read_probe_csv<R: std::io::Read>(input: R) -> Result<ProbeReport, String> {
    let mut rd = csv::Reader::from_reader(input);
    let headers = rd.headers().map_err(|e| e.to_string())?.clone();
    if headers.iter().ne(PROBE_HEADER.iter().copied()) {
        return Err("unexpected probe header".into());
    }
    let q = |s: &str| s.parse::<Rational>().map_err(|_| format!("bad rational `{s}`"));
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let group_sizes =
            rec[2].split('+').map(|x| x.parse::<usize>().map_err(|e| e.to_string())).collect::<Result<Vec<_>, _>>()?;
        rows.push(smc_core::oracle::ProbeRow {
            seed: rec[0].parse().map_err(|_| "bad seed")?,
            n: rec[1].parse().map_err(|_| "bad n")?,
            group_sizes,
            opt_smc: q(&rec[3])?,
            w_m1: q(&rec[4])?,
            w_m2: q(&rec[5])?,
            w_m: q(&rec[8])?,
            w_j: q(&rec[9])?,
            half_w_g: q(&rec[10])?,
        });
    }
    Ok(ProbeReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use smc_core::generate::{generate_random, GeneratorKind};
    use smc_core::oracle::matching_vs_opt_probe;
    use smc_core::RawInstance;

    fn pair() -> Instance {
        RawInstance::from_int_matrix(&[vec![0, 5], vec![5, 0]], true, WeightClass::GeneralMetric, vec![vec![0, 1]])
            .validate()
            .unwrap()
    }

    #[test]
    fn metric3_on_pair() {
        let s = solve(&pair(), Algo::Metric3, Tie::Lex).unwrap();
        assert_eq!(s.cost, Rational::from_integer(10));
        assert!(s.stages.iter().any(|(f, _)| f == "g_prime.txt"));
    }

    #[test]
    fn asym_log_accepts_symmetric_input() {
        let s = solve(&pair(), Algo::AsymLog, Tie::Lex).unwrap();
        assert_eq!(s.cost, Rational::from_integer(10));
        assert_eq!(s.iterations, Some(1));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::BudgetExceeded { solver: "x", n: 20, max: 12 }), 3);
        assert_eq!(exit_code(&Error::Precondition("p".into())), 2);
        assert_eq!(exit_code(&Error::Internal("i".into())), 1);
    }

    #[test]
    fn probe_csv_round_trips() {
        let report = matching_vs_opt_probe(3, 12, &OracleBudget::default()).unwrap();
        let mut buf = Vec::new();
        write_probe_csv(&mut buf, &report).unwrap();
        assert_eq!(read_probe_csv(&buf[..]).unwrap(), report);
    }

    #[test]
    fn onetwo_rows_pass() {
        let b = OracleBudget::default();
        for seed in 0..20 {
            let inst = generate_random(GeneratorKind::OneTwo, 9, 2, seed).unwrap();
            let rows = compare_instance("x", &inst, &[Algo::Onetwo119, Algo::Metric3], Tie::Lex, Some(&b)).unwrap();
            assert!(rows.iter().all(RatioRow::ok), "{rows:?}");
        }
    }
}
