use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fsband::bandit::BernoulliBandit;
use fsband::pfa::{document, materialize};
use fsband_cli::config::{parse_means, KeyValues};
use fsband_cli::error::CliError;
use fsband_cli::protocol::ProtocolSpec;
use fsband_cli::{demo, experiment, plot, states, sweep};

#[derive(Parser)]
#[command(
    name = "fsband",
    about = "Finite-state protocols for Bernoulli bandits: simulation and analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Protocol selection flags shared by several subcommands. Uppercase `--M`
/// and `--N` match the protocol parameter names.
#[derive(Args, Clone, Default)]
struct ProtocolFlags {
    /// aspiration | aspiration2 | elimination | ete | egreedy | thompson
    #[arg(long)]
    protocol: Option<String>,
    /// Number of arms K.
    #[arg(long)]
    arms: Option<String>,
    /// Aspiration ranks m.
    #[arg(long)]
    m: Option<String>,
    /// Aspiration win threshold M1.
    #[arg(long)]
    m1: Option<String>,
    /// Aspiration lose magnitude M2.
    #[arg(long)]
    m2: Option<String>,
    /// Two-phase coarse win threshold M1'.
    #[arg(long)]
    m1c: Option<String>,
    /// Two-phase coarse lose magnitude M2'.
    #[arg(long)]
    m2c: Option<String>,
    /// Elimination counter threshold M.
    #[arg(long = "M")]
    margin: Option<String>,
    /// Elimination stop scale / exploration plays per arm N.
    #[arg(long = "N")]
    scale: Option<String>,
    /// Epsilon for egreedy.
    #[arg(long)]
    epsilon: Option<String>,
}

impl ProtocolFlags {
    fn fill(&self, kv: &mut KeyValues) -> Result<(), CliError> {
        let pairs: [(&str, &Option<String>); 10] = [
            ("protocol", &self.protocol),
            ("arms", &self.arms),
            ("m", &self.m),
            ("m1", &self.m1),
            ("m2", &self.m2),
            ("m1c", &self.m1c),
            ("m2c", &self.m2c),
            ("M", &self.margin),
            ("N", &self.scale),
            ("epsilon", &self.epsilon),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                kv.set(key, v)?;
            }
        }
        Ok(())
    }

    fn spec(&self) -> Result<ProtocolSpec, CliError> {
        let mut kv = KeyValues::default();
        self.fill(&mut kv)?;
        let name = kv
            .get("protocol")
            .ok_or_else(|| CliError::Config("missing --protocol".into()))?
            .to_owned();
        let arms: usize = kv
            .get("arms")
            .ok_or_else(|| CliError::Config("missing --arms".into()))?
            .parse()
            .map_err(|_| CliError::Config("cannot parse --arms".into()))?;
        ProtocolSpec::from_keys(&name, arms, &kv)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write curve.csv and summary.csv.
    Simulate {
        /// key = value config file; flags override its entries.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        protocol: ProtocolFlags,
        #[arg(long)]
        horizon: Option<String>,
        #[arg(long)]
        reps: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        /// Fixed bandit means, comma-separated. Omit to sample a fresh
        /// instance per replication.
        #[arg(long)]
        means: Option<String>,
        /// Steps between curve samples.
        #[arg(long)]
        stride: Option<String>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a preset figure sweep.
    Sweep {
        /// m | thresholds | elimination | compare
        #[arg(long)]
        figure: String,
        #[arg(long)]
        out: PathBuf,
        /// Reduced scale: 20 replications, 10,000 steps.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Report formula vs compiled state counts.
    States {
        #[command(flatten)]
        protocol: ProtocolFlags,
    },
    /// Estimate worst-permutation average regret of a PFA on a bandit.
    DemoNonoptimal {
        /// PFA document file.
        #[arg(long)]
        pfa: PathBuf,
        /// Bandit means, comma-separated.
        #[arg(long)]
        means: String,
        /// Horizons, comma-separated, strictly increasing.
        #[arg(long)]
        horizons: String,
        #[arg(long, default_value_t = 100)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compile a finite-state protocol to a PFA document.
    Compile {
        #[command(flatten)]
        protocol: ProtocolFlags,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render curve CSVs as an SVG line chart.
    Plot {
        #[arg(long, num_args = 1..)]
        curves: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_horizons(raw: &str) -> Result<Vec<usize>, CliError> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Config(format!("cannot parse horizons `{raw}`")))
        })
        .collect()
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate {
            config,
            protocol,
            horizon,
            reps,
            seed,
            means,
            stride,
            out,
        } => {
            let mut kv = match config {
                Some(path) => KeyValues::parse(&fs::read_to_string(path)?)?,
                None => KeyValues::default(),
            };
            let mut flags = KeyValues::default();
            protocol.fill(&mut flags)?;
            let scalars: [(&str, Option<String>); 5] = [
                ("horizon", horizon),
                ("reps", reps),
                ("seed", seed),
                ("means", means),
                ("stride", stride),
            ];
            for (key, value) in scalars {
                if let Some(v) = value {
                    flags.set(key, &v)?;
                }
            }
            if let Some(path) = out {
                flags.set("out", &path.display().to_string())?;
            }
            kv.overlay(&flags);
            let config = kv.into_config()?;
            let result = experiment::run_experiment(&config)?;
            print!(
                "{}",
                experiment::summary_csv(std::slice::from_ref(&result.summary))
            );
            eprintln!("wrote {}", config.out.display());
        }
        Command::Sweep {
            figure,
            out,
            quick,
            seed,
        } => {
            let figure = sweep::Figure::from_name(&figure)?;
            let results = sweep::figure_sweep(figure, &out, quick, seed)?;
            for (name, result) in &results {
                println!(
                    "{name}: mean final gap {:.6} (stderr {:.6})",
                    result.summary.mean_final_gap, result.summary.gap_stderr
                );
            }
            eprintln!("wrote {}", out.display());
        }
        Command::States { protocol } => {
            let report = states::state_count_report(&protocol.spec()?)?;
            print!("{}", states::render(&report));
        }
        Command::DemoNonoptimal {
            pfa,
            means,
            horizons,
            reps,
            seed,
        } => {
            let pfa = document::deserialize::<f64>(&fs::read_to_string(pfa)?)?;
            let bandit = BernoulliBandit::new(parse_means(&means)?)?;
            let horizons = parse_horizons(&horizons)?;
            let report = demo::nonoptimality_demo(&pfa, &bandit, &horizons, reps, seed)?;
            print!("{}", demo::render(&report));
        }
        Command::Compile { protocol, out } => {
            let spec = protocol.spec()?;
            let machine = spec.machine()?.ok_or_else(|| {
                CliError::Config(format!("protocol `{}` cannot be compiled", spec.id()))
            })?;
            let explicit = materialize(machine.as_ref())?;
            experiment::write_file(&out, &document::serialize(&explicit)?)?;
            eprintln!("wrote {}", out.display());
        }
        Command::Plot { curves, out } => {
            plot::plot_curves(&curves, &out)?;
            eprintln!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
