use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use symmec::bench::{run_bench, write_csv, write_json, BenchConfig};
use symmec::explicit::{explicit_asw_parity, explicit_asw_reach, explicit_mec, ExplicitMdp};
use symmec::generate::{generate, Family, GenParams};
use symmec::io::{format_mdp, read_mdp};
use symmec::mec::{
    classical_mec, default_gamma, gamma_for_epsilon, symbolic_mec_stream, MecAlgorithm, MecDecomposition, MecEvent,
};
use symmec::objectives::{asw_parity, sym_as_reach, PriorityMap};
use symmec::report::{InstanceInfo, MetricsReport};
use symmec::symbolic::{Backend, SymbolicMdp, VertexId};
use symmec::Error;

const OUT_DIR_VAR: &str = "SYMMEC_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "symmec",
    version,
    about = "Symbolic MEC decomposition and qualitative MDP analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal end-component decomposition.
    Mec {
        #[command(flatten)]
        common: Common,
        /// Include the event log of the separator algorithm.
        #[arg(long)]
        events: bool,
    },
    /// Almost-sure reachability of a target set.
    Asreach {
        #[command(flatten)]
        common: Common,
        /// Comma-separated target vertex ids.
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<u32>,
    },
    /// Almost-sure winning set of the parity objective (needs priorities).
    Parity {
        #[command(flatten)]
        common: Common,
    },
    /// Write a seeded random MDP in the text format.
    Gen {
        #[arg(long, value_enum, default_value = "uniform")]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4.0)]
        avg_degree: f64,
        #[arg(long, default_value_t = 0.5)]
        random_fraction: f64,
        /// Draw priorities from 0..=2d.
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Operation-count sweep: separator algorithm and classical baseline.
    Bench {
        #[arg(long, value_enum, value_delimiter = ',', default_value = "uniform")]
        family: Vec<FamilyArg>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        epsilon: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seed: Vec<u64>,
        #[arg(long, default_value_t = 4.0)]
        avg_degree: f64,
        #[arg(long, default_value_t = 0.3)]
        random_fraction: f64,
        #[arg(long, value_enum, default_value = "bit-vector")]
        backend: BackendArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Add wall-clock time (makes the output non-reproducible).
        #[arg(long)]
        wall_time: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// MDP file in the text format.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "separator")]
    algo: Algo,
    /// Separator parameter; defaults to ⌈(2√n+2)·log2 n⌉ capped at n.
    #[arg(long, conflicts_with = "epsilon")]
    gamma: Option<usize>,
    /// Pick γ = ⌈n^(1−ε)·2·log2 n⌉ (clamped) instead.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum, default_value = "bit-vector")]
    backend: BackendArg,
    /// Recompute the result with the explicit oracle and fail on any difference.
    #[arg(long)]
    verify: bool,
    /// Add wall-clock time to the report (makes the output non-reproducible).
    #[arg(long)]
    wall_time: bool,
    /// Output file; relative paths are resolved against $SYMMEC_OUT_DIR when set.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Separator,
    Classical,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Uniform,
    Layered,
    CycleChain,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Uniform => Family::Uniform,
            FamilyArg::Layered => Family::Layered,
            FamilyArg::CycleChain => Family::CycleChain,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    BitVector,
    Sparse,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::BitVector => Backend::BitVector,
            BackendArg::Sparse => Backend::Sparse,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Validation(_) | Error::Io(_) | Error::VertexOutOfRange { .. } => 2,
        Error::Invariant(_) | Error::Contract(_) | Error::UniverseMismatch { .. } | Error::EmptyPick => 3,
    }
}

fn run(cmd: Command) -> symmec::Result<()> {
    match cmd {
        Command::Mec { common, events } => cmd_mec(&common, events),
        Command::Asreach { common, targets } => cmd_asreach(&common, &targets),
        Command::Parity { common } => cmd_parity(&common),
        Command::Gen {
            family,
            n,
            avg_degree,
            random_fraction,
            d,
            seed,
            out,
        } => {
            let params = GenParams {
                family: family.into(),
                n,
                avg_degree,
                random_fraction,
                d,
                seed,
            };
            emit(out.as_deref(), &format_mdp(&generate(&params)?))
        }
        Command::Bench {
            family,
            n,
            epsilon,
            seed,
            avg_degree,
            random_fraction,
            backend,
            format,
            wall_time,
            out,
        } => {
            let cfg = BenchConfig {
                families: family.into_iter().map(Family::from).collect(),
                sizes: n,
                epsilons: epsilon,
                seeds: seed,
                avg_degree,
                random_fraction,
                backend: backend.into(),
                wall_time,
            };
            let rows = run_bench(&cfg)?;
            let mut buf = Vec::new();
            match format {
                Format::Csv => write_csv(&rows, &mut buf)?,
                Format::Json => write_json(&rows, &mut buf)?,
            }
            emit(out.as_deref(), &String::from_utf8_lossy(&buf))
        }
    }
}

struct Loaded {
    g: ExplicitMdp,
    p: SymbolicMdp,
    gamma: usize,
    epsilon: Option<f64>,
}

fn load(c: &Common) -> symmec::Result<Loaded> {
    let g = read_mdp(&c.file)?;
    let n = g.n();
    let gamma = match (c.gamma, c.epsilon) {
        (Some(0), _) => return Err(Error::Validation("gamma must be positive".into())),
        (Some(g), _) => g,
        (None, Some(e)) if !(e > 0.0 && e <= 0.5) => {
            return Err(Error::Validation("epsilon must lie in (0, 0.5]".into()));
        }
        (None, Some(e)) => gamma_for_epsilon(n, e),
        (None, None) => default_gamma(n),
    };
    let p = SymbolicMdp::from_explicit(&g, c.backend.into())?;
    p.universe().meter_reset();
    Ok(Loaded {
        g,
        p,
        gamma,
        epsilon: c.epsilon,
    })
}

impl Loaded {
    fn algo(&self, c: &Common) -> MecAlgorithm {
        match c.algo {
            Algo::Separator => MecAlgorithm::Separator { gamma: self.gamma },
            Algo::Classical => MecAlgorithm::Classical,
        }
    }

    fn report(&self, c: &Common, command: &str, depth: usize, started: Instant) -> MetricsReport {
        let (algo, gamma) = match c.algo {
            Algo::Separator => ("separator", Some(self.gamma)),
            Algo::Classical => ("classical", None),
        };
        let instance = InstanceInfo {
            n: self.g.n(),
            m: self.g.m(),
            family: None,
            seed: None,
            gamma,
            epsilon: self.epsilon,
        };
        let mut r = MetricsReport::new(command, algo, instance, &self.p.universe().meter_snapshot(), depth);
        if c.wall_time {
            r.wall_time_ms = Some(started.elapsed().as_secs_f64() * 1e3);
        }
        r
    }
}

#[derive(Serialize)]
struct MecOutput<'a> {
    mecs: &'a [Vec<VertexId>],
    non_mec: &'a [VertexId],
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    metrics: MetricsReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    events: Vec<MecEvent>,
}

fn cmd_mec(c: &Common, with_events: bool) -> symmec::Result<()> {
    let l = load(c)?;
    let started = Instant::now();
    let (d, stats) = match c.algo {
        Algo::Separator => {
            let mut mecs = Vec::new();
            let stats = symbolic_mec_stream(&l.p, l.gamma, with_events, |m| {
                mecs.push(m.members());
                Ok(())
            })?;
            (MecDecomposition::from_mecs(l.g.n(), mecs), stats)
        }
        Algo::Classical => classical_mec(&l.p)?,
    };
    let metrics = l.report(c, "mec", stats.max_depth, started);
    let verified = if c.verify {
        let want = explicit_mec(&l.g);
        let got: Vec<Vec<usize>> = d.mecs.iter().map(|m| m.iter().map(|v| v.index()).collect()).collect();
        if got != want.mecs {
            return Err(Error::Invariant(
                "MEC decomposition differs from the explicit oracle".into(),
            ));
        }
        Some(true)
    } else {
        None
    };
    write_json_out(
        c.out.as_deref(),
        &MecOutput {
            mecs: &d.mecs,
            non_mec: &d.non_mec,
            verified,
            metrics,
            events: stats.events,
        },
    )
}

#[derive(Serialize)]
struct WinOutput<'a, O: Serialize> {
    #[serde(flatten)]
    objective: &'a O,
    winning: Vec<VertexId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    metrics: MetricsReport,
}

fn cmd_asreach(c: &Common, targets: &[u32]) -> symmec::Result<()> {
    let l = load(c)?;
    let n = l.g.n();
    if let Some(&bad) = targets.iter().find(|&&t| t as usize >= n) {
        return Err(Error::VertexOutOfRange { id: bad as usize, n });
    }
    let t = l.p.universe().from_ids(targets.iter().map(|&v| VertexId(v)))?;
    l.p.universe().meter_reset();
    let started = Instant::now();
    let region = sym_as_reach(&l.p, &t, l.algo(c))?;
    drop(t);
    let metrics = l.report(c, "asreach", 0, started);
    let winning = region.ids();
    let verified = c
        .verify
        .then(|| {
            let mut mask = vec![false; n];
            for &v in targets {
                mask[v as usize] = true;
            }
            check(&winning, &explicit_asw_reach(&l.g, &mask))
        })
        .transpose()?;
    write_json_out(
        c.out.as_deref(),
        &WinOutput {
            objective: &region.objective,
            winning,
            verified,
            metrics,
        },
    )
}

fn cmd_parity(c: &Common) -> symmec::Result<()> {
    let l = load(c)?;
    let Some(pr) = l.g.priorities() else {
        return Err(Error::Validation(
            "the parity command needs a priority on every vertex".into(),
        ));
    };
    let pm = PriorityMap::new(l.p.universe(), pr.to_vec())?;
    l.p.universe().meter_reset();
    let started = Instant::now();
    let (region, stats) = asw_parity(&pm, &l.p, l.algo(c))?;
    let metrics = l.report(c, "parity", stats.max_depth, started);
    let winning = region.ids();
    let verified = c
        .verify
        .then(|| check(&winning, &explicit_asw_parity(&l.g, pr)))
        .transpose()?;
    write_json_out(
        c.out.as_deref(),
        &WinOutput {
            objective: &region.objective,
            winning,
            verified,
            metrics,
        },
    )
}

fn check(got: &[VertexId], want: &[bool]) -> symmec::Result<bool> {
    let want: Vec<VertexId> = (0..want.len() as u32)
        .map(VertexId)
        .filter(|v| want[v.index()])
        .collect();
    if got != want {
        return Err(Error::Invariant("winning set differs from the explicit oracle".into()));
    }
    Ok(true)
}

fn write_json_out(out: Option<&Path>, value: &impl Serialize) -> symmec::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.into()))?;
    text.push('\n');
    emit(out, &text)
}

fn emit(out: Option<&Path>, text: &str) -> symmec::Result<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let path = match std::env::var_os(OUT_DIR_VAR) {
                Some(dir) if path.is_relative() => Path::new(&dir).join(path),
                _ => path.to_path_buf(),
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, text)?;
            Ok(())
        }
    }
}
