//! Experiment driver for the spectral-radius laboratory.
//!
//! Exit codes: 0 success, 1 usage/configuration error, 2 verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use specrad::dist::EntryDistribution;
use specrad::ensemble::{sample_matrix, MatrixSample, Storage};
use specrad::experiments::{self, ExperimentConfig, ExperimentKind, ExperimentResult};
use specrad::spectral;

#[derive(Parser)]
#[command(
    name = "specrad",
    version,
    about = "Spectral radius laboratory for i.i.d. random matrices"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Eigenvalue scatter with the reference circle (defaults to the
    /// heavy-tail pair alpha = 1.8 and alpha = 2.2 at n = 1000)
    Figure1(RunArgs),
    /// rho/sqrt(n) against n, with trace-moment and power-norm bound columns
    Convergence(RunArgs),
    /// Positive-radius frequency for the sparse toy ensemble around n^{-1-eps}
    ToyPhase(RunArgs),
    /// Exhaustive combinatorial verification suite with a traceability table
    Lemmas(RunArgs),
    /// Frequency of the cycle-statistics regularity event vs its 1 - 6/k floor
    AkFreq(RunArgs),
    /// Census of rooted even digraphs on [n] with 2k edges
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Full spectrum and radius bounds of one matrix (sampled or loaded)
    Spectrum {
        /// Load a saved matrix file instead of sampling
        #[arg(long, conflicts_with_all = ["n", "seed", "alpha", "q", "dist_json"])]
        matrix: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Pareto tail index for the sampled ensemble
        #[arg(long)]
        alpha: Option<f64>,
        /// Sparse-toy density for the sampled ensemble
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        /// Full JSON descriptor of the ensemble
        #[arg(long)]
        dist_json: Option<String>,
        /// Trace-moment orders
        #[arg(long = "k", default_values_t = vec![2u32, 3, 4])]
        ks: Vec<u32>,
        /// Power-norm orders
        #[arg(long = "m", default_values_t = vec![1u32, 2, 4, 8])]
        ms: Vec<u32>,
        /// Also save the sampled matrix in the binary format
        #[arg(long)]
        save: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON config document; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Matrix dimension(s); repeat for a grid
    #[arg(long = "n")]
    n: Vec<usize>,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Use the symmetric Pareto ensemble with this tail index
    #[arg(long)]
    alpha: Option<f64>,
    /// Use the sparse toy ensemble with this density
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long = "B")]
    b: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    k: Option<u32>,
    /// Step budget for exhaustive generating-path enumeration
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn build(&self, kind: ExperimentKind) -> specrad::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                ExperimentConfig::from_json(&text)?
            }
            None => ExperimentConfig::default_for(kind, PathBuf::from("out")),
        };
        cfg.experiment = kind;
        if !self.n.is_empty() {
            cfg.n_values = self.n.clone();
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(e) = self.eps {
            cfg.eps = e;
        }
        if let Some(b) = self.b {
            cfg.b = b;
        }
        if let Some(d) = self.delta {
            cfg.delta = d;
        }
        if let Some(k) = self.k {
            cfg.k_override = Some(k);
        }
        if let Some(b) = self.budget {
            cfg.path_budget = Some(b);
        }
        if let Some(alpha) = self.alpha {
            cfg.dist = EntryDistribution::ParetoSymmetric { alpha };
        }
        if let Some(q) = self.q {
            cfg.dist = EntryDistribution::SparseToy { q, eps: cfg.eps };
        }
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn report(name: &str, res: &ExperimentResult) {
    println!(
        "{name}: {} ({} ms) -> {}",
        if res.pass { "PASS" } else { "FAIL" },
        res.wall_time_ms,
        res.config.output_dir.display()
    );
    for d in &res.decisions {
        println!("  note: {d}");
    }
    for f in &res.files {
        println!("  wrote {f}");
    }
}

fn run(cli: Cli) -> specrad::Result<bool> {
    match cli.cmd {
        Cmd::Figure1(args) => {
            // without an explicit ensemble, reproduce both heavy-tail panels
            let default_pair = args.config.is_none() && args.alpha.is_none() && args.q.is_none();
            let base = args.build(ExperimentKind::Figure1)?;
            if default_pair {
                for alpha in [1.8, 2.2] {
                    let mut cfg = base.clone();
                    cfg.dist = EntryDistribution::ParetoSymmetric { alpha };
                    cfg.output_dir = base.output_dir.join(format!("alpha{alpha}"));
                    let res = experiments::run_figure1(&cfg)?;
                    report("figure1", &res);
                }
            } else {
                let res = experiments::run_figure1(&base)?;
                report("figure1", &res);
            }
            Ok(true)
        }
        Cmd::Convergence(args) => {
            let cfg = args.build(ExperimentKind::Convergence)?;
            let res = experiments::run_convergence(&cfg)?;
            report("convergence", &res);
            Ok(res.pass)
        }
        Cmd::ToyPhase(args) => {
            let cfg = args.build(ExperimentKind::ToyPhase)?;
            let res = experiments::run_toy_phase(&cfg)?;
            report("toy-phase", &res);
            Ok(res.pass)
        }
        Cmd::Lemmas(args) => {
            let cfg = args.build(ExperimentKind::LemmaSuite)?;
            let res = experiments::run_lemma_suite(&cfg)?;
            report("lemmas", &res);
            Ok(res.pass)
        }
        Cmd::AkFreq(args) => {
            let cfg = args.build(ExperimentKind::AkFrequency)?;
            let res = experiments::run_ak_frequency(&cfg)?;
            report("ak-freq", &res);
            Ok(res.pass)
        }
        Cmd::Enumerate { n, k, out } => {
            let path = experiments::run_enumerate(n, k, &out)?;
            println!("enumerate: wrote {}", path.display());
            Ok(true)
        }
        Cmd::Spectrum {
            matrix,
            n,
            seed,
            alpha,
            q,
            eps,
            dist_json,
            ks,
            ms,
            save,
            out,
        } => {
            let sample: MatrixSample = match matrix {
                Some(path) => MatrixSample::load(&path)?,
                None => {
                    let n = n.ok_or_else(|| {
                        specrad::Error::Config("--n is required when sampling".into())
                    })?;
                    let dist = if let Some(text) = dist_json {
                        EntryDistribution::from_json(&text)?
                    } else if let Some(alpha) = alpha {
                        EntryDistribution::ParetoSymmetric { alpha }
                    } else if let Some(q) = q {
                        EntryDistribution::SparseToy { q, eps }
                    } else {
                        EntryDistribution::GaussianReal
                    };
                    sample_matrix(&dist, n, seed, Storage::Dense)?
                }
            };
            if let Some(path) = &save {
                sample.save(path)?;
                println!("spectrum: saved matrix to {}", path.display());
            }
            let dense = sample.to_dense();
            let (csv, json) = experiments::write_spectrum_outputs(&dense, &ks, &ms, &out)?;
            let rho = spectral::spectral_radius(&dense)?;
            println!(
                "spectrum: n = {}, rho = {rho}, rho/sqrt(n) = {}",
                sample.n(),
                rho / (sample.n() as f64).sqrt()
            );
            println!("  wrote {}", csv.display());
            println!("  wrote {}", json.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failure");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
