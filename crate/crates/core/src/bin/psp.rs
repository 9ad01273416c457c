use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use psp_core::bench::{self, BenchConfig, Mode};
use psp_core::cycles::sourceless_instance;
use psp_core::{
    add_artificial_source, brute_min_mean_cycle, brute_min_ratio_cycle, certify_solution, check_balanced,
    min_balance, min_mean_cycle_karp, min_mean_cycle_parametric, min_mean_cycle_parametric_scc, min_ratio_cycle,
    random_graph, serialize_graph, solve, BalanceCheck, BigGraph, BigRational, CertReport, EdgeId, Extended,
    IntGraph,
};

#[derive(Parser)]
#[command(name = "psp", version, about = "Parametric shortest paths, minimum mean cycles and minimum balancing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random graph with all edges parameterized.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = bench::DEFAULT_COSTS.0, allow_hyphen_values = true)]
        cost_lo: i64,
        #[arg(long, default_value_t = bench::DEFAULT_COSTS.1, allow_hyphen_values = true)]
        cost_hi: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the breakpoints and lambda* of a parametric problem.
    Parametric {
        file: PathBuf,
        #[arg(long)]
        certify: bool,
        /// Also print every parent change.
        #[arg(long)]
        dump_log: bool,
    },
    /// Minimum mean (or ratio) cycle.
    Mmc {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Parametric)]
        algo: Algo,
        /// Divide by edge weights instead of edge counts.
        #[arg(long)]
        ratio: bool,
        /// Solve each strongly connected component separately.
        #[arg(long)]
        scc: bool,
        #[arg(long)]
        certify: bool,
    },
    /// Minimum-balancing potential of a strongly connected graph.
    Balance {
        file: PathBuf,
        /// Exhaustively verify the result (at most 20 vertices).
        #[arg(long)]
        check: bool,
    },
    /// Random-trial experiments, written as CSV.
    Bench {
        #[arg(long, value_enum)]
        mode: BenchMode,
        /// Comma-separated `n:m` pairs.
        #[arg(long)]
        points: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = bench::DEFAULT_COSTS.0, allow_hyphen_values = true)]
        cost_lo: i64,
        #[arg(long, default_value_t = bench::DEFAULT_COSTS.1, allow_hyphen_values = true)]
        cost_hi: i64,
        #[arg(long)]
        certify: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Parametric,
    Karp,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchMode {
    Mmc,
    Balance,
}

/// Failure of a certification or balance check: exit code 2.
#[derive(Debug)]
struct CheckFailed;

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("check failed")
    }
}

impl std::error::Error for CheckFailed {}

fn read_input(path: &PathBuf) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_graph(path: &PathBuf) -> anyhow::Result<IntGraph> {
    let text = read_input(path)?;
    text.parse::<IntGraph>().with_context(|| format!("{}", path.display()))
}

fn edge_list(edges: &[EdgeId]) -> String {
    edges.iter().map(|e| (e + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn report_failures(rep: &CertReport) -> anyhow::Result<()> {
    if rep.passed() {
        return Ok(());
    }
    for c in rep.failures() {
        eprintln!("FAIL {}: {}", c.name, c.detail);
    }
    Err(CheckFailed.into())
}

fn emit(output: &Option<PathBuf>, text: &[u8]) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => io::stdout().write_all(text).map_err(Into::into),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Gen {
            n,
            m,
            cost_lo,
            cost_hi,
            seed,
            output,
        } => {
            let g = random_graph(n, m, cost_lo, cost_hi, seed)?;
            emit(&output, serialize_graph(&g).as_bytes())?;
        }
        Command::Parametric {
            file,
            certify,
            dump_log,
        } => {
            let mut g = read_graph(&file)?;
            if g.source().is_none() {
                eprintln!("c no source given; using an artificial source {}", g.n() + 1);
                g = add_artificial_source(&g);
            }
            let sol = solve(&g)?;
            for (i, b) in sol.breakpoints.iter().enumerate() {
                writeln!(out, "{} {}", i + 1, b)?;
            }
            if dump_log {
                for (v, log) in sol.parent_log.iter().enumerate() {
                    for c in log {
                        let edge = c.edge.map_or("-".to_string(), |e| (e + 1).to_string());
                        writeln!(out, "v {} {} {}", v + 1, c.lambda, edge)?;
                    }
                }
            }
            if let Some(c) = sol.terminal_cycle.as_ref().or(sol.minus_inf_cycle.as_ref()) {
                writeln!(out, "cycle {}", edge_list(c))?;
            }
            writeln!(out, "lambda_star {}", sol.lambda_star)?;
            out.flush()?;
            if certify {
                report_failures(&certify_solution(&g, &sol))?;
            }
        }
        Command::Mmc {
            file,
            algo,
            ratio,
            scc,
            certify,
        } => {
            let g = read_graph(&file)?;
            let (value, cycle) = match algo {
                Algo::Parametric => {
                    let res = match (ratio, scc) {
                        (false, false) => min_mean_cycle_parametric(&g)?,
                        (false, true) => min_mean_cycle_parametric_scc(&g)?,
                        (true, false) => min_ratio_cycle(&g)?,
                        (true, true) => psp_core::cycles::min_ratio_cycle_scc(&g)?,
                    };
                    match res {
                        Some(r) => (Extended::Finite(r.mean), Some(r.cycle)),
                        None => (Extended::PlusInf, None),
                    }
                }
                Algo::Karp => {
                    if ratio {
                        bail!("--ratio is not supported with --algo karp");
                    }
                    (min_mean_cycle_karp(&g).map_or(Extended::PlusInf, Extended::Finite), None)
                }
                Algo::Brute => {
                    let res = if ratio {
                        brute_min_ratio_cycle(&g)?
                    } else {
                        brute_min_mean_cycle(&g)?
                    };
                    match res {
                        Some(b) => (Extended::Finite(b.value), Some(b.cycle)),
                        None => (Extended::PlusInf, None),
                    }
                }
            };
            writeln!(out, "lambda_star {value}")?;
            if let Some(c) = &cycle {
                writeln!(out, "cycle {}", edge_list(c))?;
            }
            out.flush()?;
            if certify {
                let h = sourceless_instance(&g, ratio);
                let sol = solve(&h)?;
                let mut rep = certify_solution(&h, &sol);
                if sol.lambda_star != value {
                    eprintln!("FAIL reported value {value} differs from certified lambda* {}", sol.lambda_star);
                    rep.checks.retain(|c| !c.passed);
                    return Err(CheckFailed.into());
                }
                report_failures(&rep)?;
            }
        }
        Command::Balance { file, check } => {
            let g = read_graph(&file)?;
            let big: BigGraph = g.map_costs(|&c| BigRational::from_integer(c.into()));
            let res = min_balance(&big)?;
            for (v, p) in res.potential.values().iter().enumerate() {
                writeln!(out, "pi {} {}", v + 1, p)?;
            }
            writeln!(out, "contractions {}", res.contraction_count)?;
            for c in &res.contraction_trace {
                writeln!(out, "cycle {} {}", c.lambda, edge_list(&c.cycle))?;
            }
            out.flush()?;
            if check {
                match check_balanced(&big, &res.potential)? {
                    BalanceCheck::Balanced => {}
                    BalanceCheck::Violation { subset, min_in, min_out } => {
                        let show = |x: Option<BigRational>| x.map_or("none".to_string(), |v| v.to_string());
                        eprintln!(
                            "FAIL subset {{{}}}: cheapest entering {} but cheapest leaving {}",
                            edge_list(&subset),
                            show(min_in),
                            show(min_out)
                        );
                        return Err(CheckFailed.into());
                    }
                }
            }
        }
        Command::Bench {
            mode,
            points,
            trials,
            seed,
            cost_lo,
            cost_hi,
            certify,
            output,
        } => {
            let points = parse_points(&points)?;
            let cfg = BenchConfig {
                points,
                trials,
                seed,
                cost_lo,
                cost_hi,
                mode: match mode {
                    BenchMode::Mmc => Mode::Mmc,
                    BenchMode::Balance => Mode::Balance,
                },
                certify,
            };
            eprintln!("c costs uniform integers in [{cost_lo}, {cost_hi}]");
            let records = bench::run_trials(&cfg)?;
            let mut buf = Vec::new();
            bench::emit_csv(&records, &mut buf)?;
            emit(&output, &buf)?;
            for s in bench::summarize(&records) {
                let mut line = format!(
                    "c n={} m={} trials={} path_changes/n={:.3}",
                    s.n, s.m, s.trials, s.mean_path_changes_per_vertex
                );
                if let Some(k) = s.mean_time_karp_ns {
                    line += &format!(" time_ratio={:.3}", s.mean_time_parametric_ns / k);
                }
                if let Some(c) = s.mean_contractions_per_vertex {
                    line += &format!(" contractions/n={c:.3}");
                }
                eprintln!("{line}");
                if s.mean_path_changes_per_vertex > 2.0 * (s.n as f64).ln() {
                    eprintln!("warning: path changes per vertex above 2 ln n at n={}", s.n);
                }
            }
        }
    }
    Ok(())
}

fn parse_points(s: &str) -> anyhow::Result<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (n, m) = p.trim().split_once(':').with_context(|| format!("bad point {p:?}, expected n:m"))?;
            Ok((n.parse()?, m.parse()?))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<CheckFailed>() => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
