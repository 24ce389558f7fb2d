mod artifact;
mod commands;
mod error;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rcw_core::immunity::Property;
use rcw_core::machines::Budget;

use artifact::{emit, render, Report, RunManifest};
use commands::immunity::ImmunityArgs;
use commands::Ctx;
use error::CliError;

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_REFUTED: u8 = 2;

const INPUT_FORMS: &str = concat!(
    "Exit status: 0 success, 2 a check was refuted, 1 error.\n\n",
    "Input forms:\n",
    "  stream   zeros, ones, periodic:BITS, bits:BITS, random:SEED, squares:SEED, dyadic:A/2^E\n",
    "  set      evens:H, odds:H, ap:STEP,OFFSET:H, squares-1:H, column:I:H, random:SEED:H, inline JSON or file\n",
    "  name     ap:A,B, list:V,V,… or JSON\n",
    "  xs       periodic:BITS, list:0,1/2,3/4 or JSON\n",
    "  rate     shift:C, linear:A,B, pow2:C, dimgap:M\n",
    "  machine  reference, a registry id, or a machine JSON file"
);

#[derive(Parser)]
#[command(name = "rcw", version, about = "Exact pipelines over prefix-free machines, left-computable reals and strong Kurtz tests", after_help = INPUT_FORMS)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Largest program length scanned.
    #[arg(long, global = true, default_value_t = 16)]
    budget_l: usize,
    /// Step bound per program.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget_t: u64,
    /// Allow program lengths above the guard.
    #[arg(long, global = true)]
    unguarded: bool,
    #[arg(long, global = true, default_value_t = 1000)]
    stages: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    horizon: u64,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Machine registry JSON.
    #[arg(long, global = true, env = inputs::REGISTRY_ENV)]
    registry: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Machine(MachineCmd),
    #[command(subcommand)]
    Kc(KcCmd),
    #[command(subcommand)]
    Skt(SktCmd),
    #[command(subcommand)]
    Convert(ConvertCmd),
    /// K(x↾n) for n = 0..=nmax as CSV (or JSON).
    Profile {
        #[arg(long, default_value = "reference")]
        machine: String,
        #[arg(long)]
        stream: String,
        #[arg(long, default_value_t = 32)]
        nmax: u64,
        #[arg(long)]
        json: bool,
    },
    /// Extremes of K(x↾n)/n over a window.
    Dim {
        #[arg(long, default_value = "reference")]
        machine: String,
        #[arg(long)]
        stream: String,
        #[arg(long)]
        n0: u64,
        #[arg(long)]
        n1: u64,
    },
    /// Lower bound on the halting probability within the budget.
    Omega {
        #[arg(long, default_value = "reference")]
        machine: String,
    },
    /// Interval around the s-weighted halting sum within the budget.
    OmegaS {
        #[arg(long, default_value = "reference")]
        machine: String,
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 32)]
        precision: u64,
    },
    /// Falsify an immunity property of a set view up to the horizon.
    Immunity {
        property: PropertyArg,
        #[arg(long)]
        set: String,
        #[arg(long)]
        witness: Option<String>,
        #[arg(long)]
        complement_witness: Option<String>,
        /// Majorant rate for hyperimmune.
        #[arg(long)]
        bound: Option<String>,
        /// JSON file of disjoint finite blocks.
        #[arg(long)]
        blocks: Option<String>,
        /// Number of pairing columns for strongly-hyperhyperimmune.
        #[arg(long)]
        columns: Option<u64>,
        #[arg(long)]
        threshold: Option<u64>,
    },
    #[command(subcommand)]
    Construct(ConstructCmd),
}

#[derive(Subcommand)]
enum MachineCmd {
    /// Check a machine file: tables must be prefix-free.
    Validate { file: String },
    /// List the domain within the budget.
    Enumerate {
        #[arg(long, default_value = "reference")]
        machine: String,
    },
    /// Budgeted complexity of a string.
    K {
        #[arg(long, default_value = "reference")]
        machine: String,
        #[arg(long)]
        tau: String,
    },
}

#[derive(Subcommand)]
enum KcCmd {
    /// Allocate codewords for a JSON list of lengths.
    Alloc { file: String },
    /// Build a machine from JSON [length, output] requests.
    Build { file: String },
}

#[derive(Subcommand)]
enum SktCmd {
    /// Read a strong Kurtz family off a machine and a rate.
    FromRate {
        #[arg(long, default_value = "reference")]
        machine: String,
        #[arg(long)]
        rate: String,
        #[arg(long, default_value_t = 3)]
        nmax: u64,
    },
    Validate {
        file: String,
        #[arg(long, default_value_t = 3)]
        nmax: u64,
        #[arg(long)]
        stage: Option<usize>,
    },
    Covers {
        file: String,
        #[arg(long)]
        stream: String,
        #[arg(long)]
        level: u64,
        #[arg(long)]
        stage: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ConvertCmd {
    /// Staged interval enumeration from a name with a tail rate.
    RocToSkt {
        #[arg(long)]
        name: String,
        #[arg(long)]
        rate: String,
        #[arg(long, default_value_t = 3)]
        nmax: u64,
    },
    /// Block-by-block name from an increasing sequence.
    LcToRoc {
        #[arg(long)]
        xs: String,
        #[arg(long)]
        rate: String,
        #[arg(long, default_value = "reference")]
        machine: String,
        #[arg(long, default_value_t = 4)]
        blocks: u64,
        #[arg(long, default_value_t = 3)]
        nmax: u64,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Zeros at square positions, the source stream elsewhere.
    Interleave {
        #[arg(long)]
        stream: String,
        #[arg(long)]
        n: u64,
    },
    /// Characteristic sequence of the join of two sets.
    Join {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Pointwise sum of increasing sequences, stages 0..=--stages.
    Regular {
        #[arg(long = "part")]
        parts: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Immune,
    Hyperimmune,
    Hyperhyperimmune,
    StronglyHyperhyperimmune,
    Cohesive,
    BiImmune,
}

impl From<PropertyArg> for Property {
    fn from(p: PropertyArg) -> Self {
        match p {
            PropertyArg::Immune => Property::Immune,
            PropertyArg::Hyperimmune => Property::Hyperimmune,
            PropertyArg::Hyperhyperimmune => Property::Hyperhyperimmune,
            PropertyArg::StronglyHyperhyperimmune => Property::StronglyHyperhyperimmune,
            PropertyArg::Cohesive => Property::Cohesive,
            PropertyArg::BiImmune => Property::BiImmune,
        }
    }
}

/// The argument vector minus `--out`, so the output path never changes the
/// artifact.
fn recorded_command(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv.iter().skip(1) {
        if skip {
            skip = false;
        } else if a == "--out" {
            skip = true;
        } else if !a.starts_with("--out=") {
            out.push(a.clone());
        }
    }
    out
}

fn dispatch(ctx: &mut Ctx, command: Command) -> Result<Report, CliError> {
    use commands::*;
    match command {
        Command::Machine(c) => match c {
            MachineCmd::Validate { file } => machine::validate(ctx, &file),
            MachineCmd::Enumerate { machine } => machine::enumerate(ctx, &machine),
            MachineCmd::K { machine, tau } => machine::k(ctx, &machine, &tau),
        },
        Command::Kc(c) => match c {
            KcCmd::Alloc { file } => kc::alloc(ctx, &file),
            KcCmd::Build { file } => kc::build(ctx, &file),
        },
        Command::Skt(c) => match c {
            SktCmd::FromRate {
                machine,
                rate,
                nmax,
            } => skt::from_rate(ctx, &machine, &rate, nmax),
            SktCmd::Validate { file, nmax, stage } => skt::validate(ctx, &file, nmax, stage),
            SktCmd::Covers {
                file,
                stream,
                level,
                stage,
            } => skt::covers(ctx, &file, &stream, level, stage),
        },
        Command::Convert(c) => match c {
            ConvertCmd::RocToSkt { name, rate, nmax } => {
                convert::roc_to_skt(ctx, &name, &rate, nmax)
            }
            ConvertCmd::LcToRoc {
                xs,
                rate,
                machine,
                blocks,
                nmax,
            } => convert::lc_to_roc(ctx, &xs, &rate, &machine, blocks, nmax),
        },
        Command::Profile {
            machine,
            stream,
            nmax,
            json,
        } => spectra::profile(ctx, &machine, &stream, nmax, json),
        Command::Dim {
            machine,
            stream,
            n0,
            n1,
        } => spectra::dim(ctx, &machine, &stream, n0, n1),
        Command::Omega { machine } => spectra::omega(ctx, &machine),
        Command::OmegaS {
            machine,
            s,
            precision,
        } => spectra::omega_s(ctx, &machine, &s, precision),
        Command::Immunity {
            property,
            set,
            witness,
            complement_witness,
            bound,
            blocks,
            columns,
            threshold,
        } => {
            let args = ImmunityArgs {
                set,
                witness,
                complement_witness,
                bound,
                blocks,
                columns,
                threshold,
            };
            immunity::run(ctx, property.into(), &args)
        }
        Command::Construct(c) => match c {
            ConstructCmd::Interleave { stream, n } => construct::interleave(ctx, &stream, n),
            ConstructCmd::Join { left, right, n } => construct::join(ctx, &left, &right, n),
            ConstructCmd::Regular { parts } => construct::regular(ctx, &parts),
        },
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            if e.use_stderr() {
                eprintln!("\n{INPUT_FORMS}");
            }
            return ExitCode::from(code);
        }
    };
    let g = cli.global;
    let mut budget = Budget::new(g.budget_l, g.budget_t);
    if g.unguarded {
        budget = budget.unguarded();
    }
    let mut ctx = Ctx::new(
        RunManifest::new(recorded_command(&argv)),
        g.registry,
        budget,
        g.stages,
        g.horizon,
    );
    let result = dispatch(&mut ctx, cli.command)
        .and_then(|report| Ok((render(&report, &ctx.manifest)?, report.refuted)))
        .and_then(|(text, refuted)| {
            emit(&text, g.out.as_deref())?;
            Ok(refuted)
        });
    match result {
        Ok(false) => ExitCode::from(EXIT_OK),
        Ok(true) => ExitCode::from(EXIT_REFUTED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
