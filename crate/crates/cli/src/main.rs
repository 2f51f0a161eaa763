mod commands;
mod manifest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use doc_ergodic::gates::Family;
use doc_ergodic::linalg::Tolerances;

use commands::{Failure, Output};
use manifest::{Inputs, OutputDigest, RunManifest, ToleranceOverrides};

#[derive(Parser, Debug)]
#[command(name = "docergo", version, about = "Ergodicity of DOC channels and dual-unitary brickwork circuits")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Seed for every random choice; never drawn from entropy.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true)]
    tol_eig: Option<f64>,

    #[arg(long, global = true)]
    tol_peri: Option<f64>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write `<command>.<ext>` and a manifest sidecar here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    LduiDual,
    ProjectionDual,
    UnitaryLdoi,
    ShiftedLdui,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::LduiDual => Family::LduiDual,
            FamilyArg::ProjectionDual => Family::ProjectionDual,
            FamilyArg::UnitaryLdoi => Family::UnitaryLdoi,
            FamilyArg::ShiftedLdui => Family::ShiftedLdui,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Classify a column-stochastic matrix.
    ClassifyStochastic { matrix: PathBuf },
    /// Classify the DOC channel of an (A, B, C) triple.
    ClassifyDoc {
        triple: PathBuf,
        /// Fall back to the spectral route when the triple is not a channel.
        #[arg(long)]
        allow_map: bool,
    },
    /// Certificates of the LDOI gate assembled from a triple.
    CheckGate { triple: PathBuf },
    /// Edge channel and circuit verdict of an LDOI gate.
    Lambda {
        triple: PathBuf,
        /// Use the shifted gate (π ⊗ 𝟙)X.
        #[arg(long)]
        shift: bool,
    },
    /// Correlation table of a periodic brickwork chain.
    Simulate { config: PathBuf },
    /// Circuit verdict frequencies over consecutive seeds.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::ClassifyStochastic { .. } => "classify-stochastic",
            Cmd::ClassifyDoc { .. } => "classify-doc",
            Cmd::CheckGate { .. } => "check-gate",
            Cmd::Lambda { .. } => "lambda",
            Cmd::Simulate { .. } => "simulate",
            Cmd::Sweep { .. } => "sweep",
        }
    }
}

fn run(cli: &Cli, inputs: &mut Inputs, tol: &Tolerances) -> Result<Output, Failure> {
    let csv = match (cli.format, &cli.cmd) {
        (Some(Format::Csv), Cmd::Simulate { .. } | Cmd::Sweep { .. }) => true,
        (Some(Format::Csv), c) => return Err(Failure::Input(format!("{} has no csv output", c.name()))),
        (Some(Format::Json), _) => false,
        (None, c) => matches!(c, Cmd::Simulate { .. }),
    };
    match &cli.cmd {
        Cmd::ClassifyStochastic { matrix } => commands::classify_stochastic_cmd(inputs, matrix, tol),
        Cmd::ClassifyDoc { triple, allow_map } => commands::classify_doc_cmd(inputs, triple, *allow_map, tol),
        Cmd::CheckGate { triple } => commands::check_gate_cmd(inputs, triple),
        Cmd::Lambda { triple, shift } => commands::lambda_cmd(inputs, triple, *shift, tol),
        Cmd::Simulate { config } => commands::simulate_cmd(inputs, config, cli.seed, csv),
        Cmd::Sweep { family, seeds, d } => commands::sweep_cmd((*family).into(), *d, *seeds, cli.seed, tol, csv),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let mut tol = Tolerances::default();
    for (name, v) in [("--tol-eig", cli.tol_eig), ("--tol-peri", cli.tol_peri)] {
        if let Some(v) = v {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                eprintln!("error: {name} must lie in (0, 1), got {v}");
                return ExitCode::from(1);
            }
        }
    }
    tol.eig = cli.tol_eig.unwrap_or(tol.eig);
    tol.peri = cli.tol_peri.unwrap_or(tol.peri);

    let mut inputs = Inputs::default();
    let output = match run(&cli, &mut inputs, &tol) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let (ext, body) = match output {
        Output::Json(s) => ("json", s),
        Output::Csv(s) => ("csv", s),
    };

    match &cli.out {
        None => {
            let mut out = std::io::stdout().lock();
            if out.write_all(body.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
        }
        Some(dir) => {
            let manifest = RunManifest {
                command: cli.cmd.name().to_string(),
                args: std::env::args().skip(1).collect(),
                inputs: inputs.0,
                seed: cli.seed,
                tolerance_overrides: ToleranceOverrides { eig: cli.tol_eig, peri: cli.tol_peri },
                tolerances: tol,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                output: OutputDigest { file: String::new(), sha256: String::new() },
            };
            match manifest::write_artifacts(dir, manifest, ext, &body) {
                Ok(path) => eprintln!("wrote {}", path.display()),
                Err(e) => {
                    eprintln!("error: {}: {e}", dir.display());
                    return ExitCode::from(1);
                }
            }
        }
    }
    ExitCode::SUCCESS
}
