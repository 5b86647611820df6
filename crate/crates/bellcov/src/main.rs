//! Thin command-line front end over the library: generate covariance-matrix
//! documents, validate them, and apply detections, with an optional runtime
//! cross-check against the stepwise pipeline.
//!
//! Exit codes: 0 on success, 1 for domain failures (unphysical state,
//! invalid efficiency or transmissivity value, degenerate measured block,
//! trace mismatch), 2 for usage and parse errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bellcov::document::{trace_to_text, CmDocument};
use bellcov::mat::scaled_deviation;
use bellcov::oracle::AGREEMENT_RTOL;
use bellcov::{
    bell_like_stepwise, homodyne_stepwise, CovarianceMatrix, DetectionKind, DetectionSpec,
    Efficiency, Error, Quadrature,
};

#[derive(Parser)]
#[command(
    name = "bellcov",
    version,
    about = "Covariance matrices of Gaussian states under homodyne, bell-like, and heterodyne detections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a covariance-matrix document
    Gen {
        #[command(subcommand)]
        state: GenState,
    },
    /// Check a document against the uncertainty principle
    Validate {
        /// Input path, or - for stdin
        input: String,
    },
    /// Apply a detection to the trailing mode(s) of a state
    Detect {
        /// Input path, or - for stdin
        input: String,
        /// Which detection to apply
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Beam-splitter transmissivity in [0, 1]; bell only, default 0.5
        #[arg(long)]
        transmissivity: Option<f64>,
        /// Efficiency of the q (or single) detector, in (0, 1]; default 1
        #[arg(long)]
        eta: Option<f64>,
        /// Efficiency of the p detector, in (0, 1]; default 1
        #[arg(long)]
        eta_prime: Option<f64>,
        /// Write the stepwise reference trace to PATH (or stderr without a
        /// value) and fail if it disagrees with the closed form
        #[arg(long, value_name = "PATH", num_args = 0..=1, require_equals = true, default_missing_value = "-")]
        trace: Option<String>,
        /// Output path, or - for stdout
        #[arg(short, long, default_value = "-")]
        output: String,
        /// Perturb the result before the trace comparison; exists so the
        /// agreement gate itself can be exercised
        #[arg(long, hide = true)]
        corrupt_output: bool,
    },
}

#[derive(Subcommand)]
enum GenState {
    /// The n-mode vacuum
    Vacuum {
        /// Number of modes
        modes: usize,
        /// Output path, or - for stdout
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// A two-mode squeezed (EPR) state
    Epr {
        /// Quadrature variance, at least 1
        mu: f64,
        /// Output path, or - for stdout
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// A seeded pseudo-random physical state
    Random {
        /// Number of modes
        modes: usize,
        /// RNG seed; equal seeds give equal documents
        seed: u64,
        /// Output path, or - for stdout
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    /// q homodyne of the last mode
    HomodyneQ,
    /// p homodyne of the last mode
    HomodyneP,
    /// Beam splitter plus conjugate homodynes on the last two modes
    Bell,
    /// The balanced bell detection, through its reduced formula
    StandardBell,
    /// Coherent-state projection of the last mode
    Heterodyne,
}

impl From<KindArg> for DetectionKind {
    fn from(kind: KindArg) -> Self {
        match kind {
            KindArg::HomodyneQ => Self::HomodyneQ,
            KindArg::HomodyneP => Self::HomodyneP,
            KindArg::Bell => Self::BellLike,
            KindArg::StandardBell => Self::StandardBell,
            KindArg::Heterodyne => Self::Heterodyne,
        }
    }
}

enum Failure {
    /// Bad invocation or unreadable input: exit 2.
    Usage(String),
    /// The mathematics refused: exit 1.
    Domain(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Gen { state } => cmd_gen(state),
        Command::Validate { input } => cmd_validate(&input),
        Command::Detect {
            input,
            kind,
            transmissivity,
            eta,
            eta_prime,
            trace,
            output,
            corrupt_output,
        } => cmd_detect(DetectArgs {
            input,
            kind,
            transmissivity,
            eta,
            eta_prime,
            trace,
            output,
            corrupt_output,
        }),
    }
}

fn cmd_gen(state: GenState) -> Result<ExitCode, Failure> {
    // Bad generator parameters are invocation errors, so they map to usage.
    let (cm, descriptor, output) = match state {
        GenState::Vacuum { modes, output } => (
            CovarianceMatrix::vacuum(modes).map_err(usage)?,
            format!("vacuum {modes}"),
            output,
        ),
        GenState::Epr { mu, output } => (
            CovarianceMatrix::epr(mu).map_err(usage)?,
            format!("epr {mu}"),
            output,
        ),
        GenState::Random {
            modes,
            seed,
            output,
        } => (
            CovarianceMatrix::random(modes, seed).map_err(usage)?,
            format!("random {modes} {seed}"),
            output,
        ),
    };
    let mut doc = CmDocument::from_covariance(&cm);
    doc.set_meta("generator", descriptor);
    write_output(&output, &doc.to_text())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(input: &str) -> Result<ExitCode, Failure> {
    let doc = read_document(input)?;
    let report = bellcov::validate_matrix(doc.matrix()).map_err(domain)?;
    println!("modes: {}", doc.n_modes());
    println!("symmetry defect: {:.3e}", report.symmetry_defect);
    println!(
        "min uncertainty eigenvalue: {:.6e}",
        report.min_uncertainty_eigenvalue
    );
    println!(
        "bona fide: {}",
        if report.bona_fide { "yes" } else { "no" }
    );
    Ok(if report.bona_fide {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

struct DetectArgs {
    input: String,
    kind: KindArg,
    transmissivity: Option<f64>,
    eta: Option<f64>,
    eta_prime: Option<f64>,
    trace: Option<String>,
    output: String,
    corrupt_output: bool,
}

fn cmd_detect(args: DetectArgs) -> Result<ExitCode, Failure> {
    let doc = read_document(&args.input)?;
    let cm = doc.covariance().map_err(domain)?;

    if matches!(args.kind, KindArg::HomodyneQ | KindArg::HomodyneP) && args.eta_prime.is_some() {
        return Err(Failure::Usage(
            "--eta-prime applies only to detections with two detectors".into(),
        ));
    }
    let eta = Efficiency::new(args.eta.unwrap_or(1.0)).map_err(domain)?;
    let eta_prime = Efficiency::new(args.eta_prime.unwrap_or(1.0)).map_err(domain)?;
    let spec = DetectionSpec::new(args.kind.into(), args.transmissivity, eta, eta_prime).map_err(
        |e| match e {
            Error::TransmissivityNotApplicable => usage(e),
            other => domain(other),
        },
    )?;

    let result = spec.apply(&cm).map_err(domain)?;
    let mut result = result.into_matrix();
    if args.corrupt_output {
        result[(0, 0)] += 1e-3;
    }

    let mut out_doc = CmDocument::new(result.clone(), BTreeMap::new()).map_err(domain)?;
    out_doc.set_meta("detection", describe(&spec));
    if let Some(generator) = doc.metadata().get("generator") {
        out_doc.set_meta("source", generator.clone());
    }
    write_output(&args.output, &out_doc.to_text())?;

    if let Some(destination) = args.trace {
        let (reference, trace) = run_reference(&cm, &spec).map_err(domain)?;
        let text = trace_to_text(&trace);
        if destination == "-" {
            eprint!("{text}");
        } else {
            fs::write(&destination, text).map_err(usage)?;
        }
        let deviation = scaled_deviation(&result, reference.matrix());
        if deviation > AGREEMENT_RTOL {
            return Err(Failure::Domain(format!(
                "closed form and stepwise pipeline disagree: \
                 scaled deviation {deviation:.3e} exceeds {AGREEMENT_RTOL:.0e}"
            )));
        }
        eprintln!("trace agreement: scaled deviation {deviation:.3e}");
    }
    Ok(ExitCode::SUCCESS)
}

/// The stepwise route matching a detection request. Heterodyne has no
/// dedicated pipeline; it runs as a balanced bell-like detection with a
/// vacuum mode appended, which is the same measurement.
fn run_reference(
    cm: &CovarianceMatrix,
    spec: &DetectionSpec,
) -> bellcov::Result<(CovarianceMatrix, bellcov::StepTrace)> {
    match spec.kind() {
        DetectionKind::HomodyneQ => homodyne_stepwise(cm, Quadrature::Q, spec.eta()),
        DetectionKind::HomodyneP => homodyne_stepwise(cm, Quadrature::P, spec.eta()),
        DetectionKind::BellLike => bell_like_stepwise(
            cm,
            spec.transmissivity().expect("bell always carries one"),
            spec.eta(),
            spec.eta_prime(),
        ),
        DetectionKind::StandardBell => bell_like_stepwise(cm, 0.5, spec.eta(), spec.eta_prime()),
        DetectionKind::Heterodyne => {
            bell_like_stepwise(&cm.append_vacuum_mode(), 0.5, spec.eta(), spec.eta_prime())
        }
    }
}

fn describe(spec: &DetectionSpec) -> String {
    let kind = match spec.kind() {
        DetectionKind::HomodyneQ => "homodyne-q",
        DetectionKind::HomodyneP => "homodyne-p",
        DetectionKind::BellLike => "bell",
        DetectionKind::StandardBell => "standard-bell",
        DetectionKind::Heterodyne => "heterodyne",
    };
    let mut out = kind.to_string();
    if let Some(t) = spec.transmissivity() {
        out.push_str(&format!(" t={t}"));
    }
    out.push_str(&format!(" eta={}", spec.eta().value()));
    if !matches!(
        spec.kind(),
        DetectionKind::HomodyneQ | DetectionKind::HomodyneP
    ) {
        out.push_str(&format!(" eta-prime={}", spec.eta_prime().value()));
    }
    out
}

fn read_document(path: &str) -> Result<CmDocument, Failure> {
    let text = if path == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(usage)?;
        buffer
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?
    };
    CmDocument::parse(&text).map_err(usage)
}

fn write_output(path: &str, text: &str) -> Result<(), Failure> {
    if path == "-" {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text).map_err(|e| usage(format!("{path}: {e}")))
    }
}
