//! `fcring`: fusion-closed set analysis from the command line.
//!
//! Exit status: 0 success, 1 parse or validation failure, 2 failed identity
//! check, 3 reconstruction failure, 4 unmet precondition or exhausted budget.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use fcring::fcsets::{enumerate_fcsets, is_fc, lattice_props, parse_labels, to_dot, FcSet};
use fcring::fusion::{validate, ModularData};
use fcring::galois::{galois_action, theta_sets};
use fcring::io::render::{self, Format};
use fcring::io::{catalog, load_model, write_model, ModelFile};
use fcring::local::deconstruct;
use fcring::partition::overlaps;
use fcring::report::Check;
use fcring::suite::{self, SetCheck};
use fcring::{Error, RunConfig};

#[derive(Parser)]
#[command(name = "fcring", version, about = "Fusion-closed sets of rational modular data")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Opts {
    /// Working precision in bits for numeric eigen-solves.
    #[arg(long, global = true, env = "FCRING_PRECISION", default_value_t = 192)]
    precision: u32,
    /// Precision ceiling for escalation.
    #[arg(long, global = true, env = "FCRING_MAX_PRECISION", default_value_t = 768)]
    max_precision: u32,
    /// Largest denominator accepted when reconstructing exact values.
    #[arg(long, global = true, env = "FCRING_DENOM_BOUND", default_value_t = 1_000_000)]
    denom_bound: u64,
    /// Cap on the number of FC sets enumerated.
    #[arg(long, global = true, env = "FCRING_BUDGET", default_value_t = 100_000)]
    budget: usize,
    /// Seed for randomized internals.
    #[arg(long, global = true, env = "FCRING_SEED", default_value_t = 0x5eed_f00d)]
    seed: u64,
    /// Also test the Arguesian law on small lattices.
    #[arg(long, global = true, env = "FCRING_ARGUESIAN")]
    arguesian: bool,
    /// Output format: text or records.
    #[arg(long, global = true, env = "FCRING_FORMAT", default_value = "text")]
    format: Format,
}

impl Opts {
    fn config(&self) -> Result<RunConfig, Error> {
        let cfg = RunConfig {
            precision: self.precision,
            max_precision: self.max_precision.max(self.precision),
            denom_bound: BigInt::from(self.denom_bound),
            budget: self.budget,
            seed: self.seed,
            arguesian: self.arguesian,
            ..RunConfig::default()
        };
        cfg.validate().map_err(Error::Validation)?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the fusion axioms and the Verlinde formula.
    Validate { model: String },
    /// Conductor, global dimension and per-primary data.
    Info { model: String },
    /// Enumerate FC sets and lattice properties.
    Fcsets {
        model: String,
        /// Write the Hasse diagram in Graphviz format.
        #[arg(long)]
        lattice_out: Option<PathBuf>,
    },
    /// Classes, blocks and overlaps of an FC set.
    Classes {
        model: String,
        /// Comma separated labels of the FC set.
        #[arg(long)]
        set: String,
    },
    /// Sector structure of a local FC set.
    Deconstruct {
        model: String,
        /// Comma separated labels of the local FC set.
        #[arg(long)]
        twister: String,
    },
    /// Galois permutations, signs and Θ sets.
    Galois {
        model: String,
        /// A single unit, taken modulo the conductor.
        #[arg(long, allow_negative_numbers = true)]
        ell: Option<i64>,
    },
    /// Run conjecture tests over every FC set.
    Conjectures {
        model: String,
        /// Comma separated suites among algint, spect, lagrange, charring.
        #[arg(long, value_delimiter = ',', default_values_t = suite::CONJECTURES.iter().map(|s| s.to_string()))]
        suite: Vec<String>,
    },
    /// List the bundled models, or write them as model files.
    Catalog {
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

/// Why a run ended without success.
enum Failure {
    Core(Error),
    Other(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn model_data(spec: &str, cfg: &RunConfig) -> Result<ModularData, Error> {
    load_model(spec, cfg)?.modular_data(cfg)
}

fn fc_set(md: &ModularData, labels: &str) -> Result<FcSet, Error> {
    let g = parse_labels(md, labels)?;
    if !is_fc(&g, md) {
        return Err(Error::Precondition(format!("{} is not fusion-closed", g.display(md))));
    }
    Ok(g)
}

fn failed_identity(checks: impl IntoIterator<Item = Check>) -> Result<(), Error> {
    let bad: Vec<String> = checks.into_iter().filter(|c| !c.passed).map(|c| c.name).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Identity(format!("failed: {}", bad.join(", "))))
    }
}

fn run(cli: Cli, out: &mut Vec<String>) -> Result<(), Failure> {
    let cfg = cli.opts.config()?;
    let fmt = cli.opts.format;
    match cli.cmd {
        Command::Validate { model } => {
            let m = load_model(&model, &cfg)?;
            let fd = m.to_fusion_data()?;
            let bad = validate(&fd);
            if !bad.is_empty() {
                let msgs: Vec<String> = bad.iter().map(ToString::to_string).collect();
                return Err(Error::Validation(msgs.join("; ")).into());
            }
            let md = m.modular_data(&cfg)?;
            let lat = enumerate_fcsets(&md, &cfg)?;
            let checks = suite::identity_suite(&md, &lat, &cfg);
            out.extend(render::checks(md.name(), &checks, fmt));
            failed_identity(checks.into_iter().map(|c| c.check))?;
        }
        Command::Info { model } => {
            let md = model_data(&model, &cfg)?;
            out.extend(render::info(&md, fmt));
        }
        Command::Fcsets { model, lattice_out } => {
            let md = model_data(&model, &cfg)?;
            let lat = enumerate_fcsets(&md, &cfg)?;
            let props = lattice_props(&lat, cfg.arguesian);
            out.extend(render::fcsets(&lat, &props, &md, fmt));
            if let Some(p) = lattice_out {
                fs::write(&p, to_dot(&lat, &md)).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        Command::Classes { model, set } => {
            let md = model_data(&model, &cfg)?;
            let g = fc_set(&md, &set)?;
            let tab = overlaps(&g, &md)?;
            out.extend(render::classes(&tab, &md, fmt));
        }
        Command::Deconstruct { model, twister } => {
            let md = model_data(&model, &cfg)?;
            let g = fc_set(&md, &twister)?;
            let rep = deconstruct(&g, &md)?;
            out.extend(render::deconstruction(&rep, &md, fmt));
            failed_identity(rep.checks)?;
        }
        Command::Galois { model, ell } => {
            let md = model_data(&model, &cfg)?;
            let ga = galois_action(&md)?;
            let units = match ell {
                Some(l) => vec![ga
                    .lift(l)
                    .ok_or_else(|| Error::Precondition(format!("{l} is not a unit mod {}", ga.conductor)))?],
                None => ga.units.clone(),
            };
            let thetas = units.iter().map(|&u| Ok((u, theta_sets(&md, &ga, u)?))).collect::<Result<Vec<_>, Error>>()?;
            out.extend(render::galois(&ga, &thetas, &md, fmt));
        }
        Command::Conjectures { model, suite: names } => {
            if let Some(bad) = names.iter().find(|n| !suite::CONJECTURES.contains(&n.as_str())) {
                return Err(Error::Validation(format!(
                    "unknown suite '{bad}'; known: {}",
                    suite::CONJECTURES.join(", ")
                ))
                .into());
            }
            let md = model_data(&model, &cfg)?;
            let lat = enumerate_fcsets(&md, &cfg)?;
            let ga = galois_action(&md)?;
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let checks: Vec<SetCheck> = suite::conjecture_suite(&md, &lat, &ga, &refs);
            out.extend(render::checks(md.name(), &checks, fmt));
        }
        Command::Catalog { emit } => {
            let models: Vec<ModelFile> = catalog::catalog(&cfg)?;
            if let Some(dir) = &emit {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            for m in &models {
                match fmt {
                    Format::Text => out.push(format!("{:<10}  rank {}", m.name, m.rank())),
                    Format::Records => out.push(format!("record=model name={} rank={}", m.name, m.rank())),
                }
                if let Some(dir) = &emit {
                    let p = dir.join(format!("{}.model", m.name));
                    fs::write(&p, write_model(m)).with_context(|| format!("writing {}", p.display()))?;
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Vec::new();
    let result = run(cli, &mut out);
    let mut stdout = std::io::stdout().lock();
    for line in &out {
        let _ = writeln!(stdout, "{line}");
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
