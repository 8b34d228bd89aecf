//! The `fibercomplex` command line.
//!
//! Exit codes: 0 when everything checked passes, 1 when a report contains
//! failures, 2 for usage, file and parse errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::catalog::{Catalog, DimPair, Variant};
use crate::invariants::{triviality_probe, Invariant, InvariantError};
use crate::morse::{
    check_coexistence, count_fibers, random_trace, validate_trace, CountVector, MorseError,
    MorseTrace,
};
use crate::universal::{
    coarsen_constraints, complex, constraint_basis, derive_constraints, morse_split_constraints,
    ComplexVariant, ExpectedFormulae, FormulaeError, ParityConstraint,
};
use crate::verify::{verify, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fibercomplex",
    version,
    about = "Universal complexes of singular fibers and cobordism invariants of Morse functions"
)]
pub struct Cli {
    /// Print `key=value` lines instead of tables.
    #[arg(long, global = true)]
    pub porcelain: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Query the fiber catalog.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Check the shape and delta-squared condition of the complexes.
    #[command(subcommand)]
    Complex(ComplexCommand),
    /// Dimension and canonical generators of a cohomology group.
    Cohomology {
        #[arg(long, default_value = "full")]
        variant: ComplexVariant,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
        degree: u8,
    },
    /// Recompute every claim about the complexes, laws and invariants.
    VerifyPaper(VerifyArgs),
    /// Parity laws read off the coboundary.
    #[command(subcommand)]
    Constraints(ConstraintsCommand),
    /// Check a count file against every parity law.
    Coexist { file: PathBuf },
    /// Work with Morse function traces.
    #[command(subcommand)]
    Morse(MorseCommand),
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    /// List classes with their flags.
    List {
        /// `32` for maps of 3-manifolds into surfaces, `21` for Morse functions.
        #[arg(long, default_value = "32")]
        dims: Dims,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
        codim: Option<u8>,
        #[arg(long, default_value = "full")]
        variant: ComplexVariant,
        /// List `_o` and `_e` refinements separately.
        #[arg(long)]
        refined: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dims {
    #[value(name = "32")]
    ThreeTwo,
    #[value(name = "21")]
    TwoOne,
}

#[derive(Debug, Subcommand)]
pub enum ComplexCommand {
    /// Shapes and delta-squared of each variant.
    Check {
        /// Check only this variant.
        #[arg(long)]
        variant: Option<ComplexVariant>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Transcribed formulae to compare against instead of the shipped copy.
    #[arg(long)]
    formulae: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 40)]
    budget: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Refined,
    Coarse,
    Basis,
}

#[derive(Debug, Subcommand)]
pub enum ConstraintsCommand {
    /// One law per generator, coarsened, or reduced to a basis.
    Derive {
        #[arg(long, value_enum, default_value = "refined")]
        level: Level,
        #[arg(long, default_value = "full")]
        variant: ComplexVariant,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
        degree: u8,
    },
}

#[derive(Debug, Subcommand)]
pub enum MorseCommand {
    /// Check every trace invariant.
    Validate { file: PathBuf },
    /// Occurrence counts of refined fiber classes.
    Counts { file: PathBuf },
    /// Value of an invariant on a trace.
    Invariant {
        file: PathBuf,
        /// `alpha`, `beta`, `gamma` or a degree-one cochain expression.
        #[arg(long)]
        class: String,
        #[arg(long, default_value = "admissible")]
        variant: ComplexVariant,
    },
    /// Print a random valid trace.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        budget: usize,
    },
    /// Evaluate an invariant on many random traces and report nonzero values.
    Probe {
        #[arg(long)]
        class: String,
        #[arg(long, default_value = "admissible")]
        variant: ComplexVariant,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 40)]
        budget: usize,
        /// Extra trace files evaluated before the random ones.
        #[arg(long = "with")]
        with: Vec<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Morse {
        path: PathBuf,
        #[source]
        source: MorseError,
    },
    #[error("{path}: {source}")]
    Formulae {
        path: PathBuf,
        #[source]
        source: FormulaeError,
    },
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_trace(path: &Path) -> Result<MorseTrace, CliError> {
    MorseTrace::parse(&read(path)?).map_err(|source| CliError::Morse {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURES,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs a parsed command. `Ok(false)` means the report contains failures.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    let p = cli.porcelain;
    match &cli.command {
        Command::Catalog(CatalogCommand::List {
            dims,
            codim,
            variant,
            refined,
        }) => catalog_list(out, p, *dims, *codim, *variant, *refined),
        Command::Complex(ComplexCommand::Check { variant }) => complex_check(out, p, *variant),
        Command::Cohomology { variant, degree } => cohomology(out, p, *variant, *degree),
        Command::VerifyPaper(args) => verify_paper(out, p, args),
        Command::Constraints(ConstraintsCommand::Derive {
            level,
            variant,
            degree,
        }) => constraints(out, p, *level, *variant, *degree),
        Command::Coexist { file } => coexist(out, p, file),
        Command::Morse(cmd) => morse(out, p, cmd),
    }
}

fn catalog_list(
    out: &mut dyn Write,
    p: bool,
    dims: Dims,
    codim: Option<u8>,
    variant: ComplexVariant,
    refined: bool,
) -> Result<bool, CliError> {
    let dim_pair = match dims {
        Dims::ThreeTwo => DimPair::ThreeTwo,
        Dims::TwoOne => DimPair::TwoOne,
    };
    let v = if variant == ComplexVariant::Admissible32 {
        Variant::Admissible
    } else {
        Variant::Full
    };
    let catalog = Catalog::standard();
    let codims: Vec<u8> = codim.map_or(vec![0, 1, 2], |c| vec![c]);
    if !p {
        writeln!(
            out,
            "{:<14} {:>5}  {:<10} {:<10} transition",
            "class", "codim", "orientable", "admissible"
        )?;
    }
    for k in codims {
        for c in catalog.list_classes(dim_pair, k, v, refined) {
            let transition = c
                .transition
                .as_ref()
                .map(|t| format!("{}|{}", t.sides.0, t.sides.1))
                .unwrap_or_else(|| "-".into());
            if p {
                writeln!(
                    out,
                    "class={} codim={} orientable_excluded={} admissible={} transition={transition}",
                    c.name,
                    c.codim,
                    u8::from(c.orientable_excluded),
                    u8::from(c.admissible)
                )?;
            } else {
                writeln!(
                    out,
                    "{:<14} {:>5}  {:<10} {:<10} {transition}",
                    c.name.to_string(),
                    c.codim,
                    if c.orientable_excluded { "no" } else { "yes" },
                    if c.admissible { "yes" } else { "no" },
                )?;
            }
        }
    }
    Ok(true)
}

fn complex_check(
    out: &mut dyn Write,
    p: bool,
    only: Option<ComplexVariant>,
) -> Result<bool, CliError> {
    let mut all_ok = true;
    for v in ComplexVariant::ALL {
        if only.is_some_and(|o| o != v) {
            continue;
        }
        let c = complex(v);
        let status = c.check();
        all_ok &= status.is_ok();
        let dims = format!("{}/{}/{}", c.dim(0), c.dim(1), c.dim(2));
        let text = match &status {
            Ok(()) => "ok".to_string(),
            Err(e) => e.to_string(),
        };
        if p {
            writeln!(
                out,
                "variant={v} dims={dims} status={}",
                if status.is_ok() { "ok" } else { "fail" }
            )?;
        } else {
            writeln!(out, "{v:<11} {dims:<10} {text}")?;
        }
    }
    Ok(all_ok)
}

fn cohomology(
    out: &mut dyn Write,
    p: bool,
    v: ComplexVariant,
    degree: u8,
) -> Result<bool, CliError> {
    let summary = complex(v).cohomology_basis(usize::from(degree));
    if p {
        writeln!(out, "variant={v}")?;
        writeln!(out, "degree={degree}")?;
        writeln!(out, "dimension={}", summary.dimension)?;
        for g in &summary.generators {
            writeln!(out, "generator={g}")?;
        }
    } else {
        writeln!(out, "H^{degree}({v}) has dimension {}", summary.dimension)?;
        for g in &summary.generators {
            writeln!(out, "  [{g}]")?;
        }
    }
    Ok(true)
}

fn verify_paper(out: &mut dyn Write, p: bool, args: &VerifyArgs) -> Result<bool, CliError> {
    let loaded;
    let formulae = match &args.formulae {
        Some(path) => {
            loaded =
                ExpectedFormulae::parse(&read(path)?).map_err(|source| CliError::Formulae {
                    path: path.clone(),
                    source,
                })?;
            &loaded
        }
        None => ExpectedFormulae::standard(),
    };
    let opts = VerifyOptions {
        seed: args.seed,
        trials: args.trials,
        budget: args.budget,
    };
    let report = verify(formulae, &opts);
    let passed = report.claims.iter().filter(|c| c.passed).count();
    for c in &report.claims {
        if p {
            writeln!(
                out,
                "claim.{}.{}={}",
                c.id,
                c.key,
                if c.passed { "pass" } else { "fail" }
            )?;
        } else {
            writeln!(out, "{c}")?;
        }
    }
    if p {
        writeln!(out, "passed={passed}")?;
        writeln!(out, "total={}", report.claims.len())?;
    } else {
        writeln!(out, "{passed}/{} claims pass", report.claims.len())?;
    }
    Ok(report.all_passed())
}

fn constraints(
    out: &mut dyn Write,
    p: bool,
    level: Level,
    v: ComplexVariant,
    degree: u8,
) -> Result<bool, CliError> {
    let derived = derive_constraints(complex(v), usize::from(degree));
    let list = match level {
        Level::Refined => derived,
        Level::Coarse => coarsen_constraints(&derived),
        Level::Basis => constraint_basis(&coarsen_constraints(&derived)),
    };
    for (i, c) in list.iter().enumerate() {
        let n = i + 1;
        let origin = c.origin.map(|o| o.to_string());
        if p {
            match origin {
                Some(o) => writeln!(out, "constraint.{n}={c} origin={o}")?,
                None => writeln!(out, "constraint.{n}={c}")?,
            }
        } else {
            match origin {
                Some(o) => writeln!(out, "({n:>2}) {o:<8} {c}")?,
                None => writeln!(out, "({n:>2}) {c}")?,
            }
        }
    }
    Ok(true)
}

/// Every parity law, labelled for reports.
fn all_laws() -> Vec<(String, ParityConstraint)> {
    let full = complex(ComplexVariant::Full32);
    let refined = derive_constraints(full, 1);
    let coarse = coarsen_constraints(&refined);
    let mut out = Vec::new();
    for (i, c) in refined.into_iter().enumerate() {
        out.push((format!("maps.refined.{}", i + 1), c));
    }
    for (i, c) in coarse.into_iter().enumerate() {
        out.push((format!("maps.coarse.{}", i + 1), c));
    }
    for c in derive_constraints(full, 0) {
        out.push(("morse.total".to_string(), c));
    }
    for (label, c) in ["morse.circles", "morse.arcs"]
        .into_iter()
        .zip(morse_split_constraints())
    {
        out.push((label.to_string(), c));
    }
    out
}

fn coexist(out: &mut dyn Write, p: bool, file: &Path) -> Result<bool, CliError> {
    let counts = CountVector::parse(&read(file)?).map_err(|source| CliError::Morse {
        path: file.to_path_buf(),
        source,
    })?;
    let (labels, laws): (Vec<String>, Vec<ParityConstraint>) = all_laws().into_iter().unzip();
    let report = check_coexistence(&counts, &laws).map_err(|source| CliError::Morse {
        path: file.to_path_buf(),
        source,
    })?;
    let mut violated = 0;
    for (label, check) in labels.iter().zip(&report.checks) {
        let ok = check.holds();
        violated += usize::from(!ok);
        let origin = check
            .constraint
            .origin
            .map(|o| format!(" ({o})"))
            .unwrap_or_default();
        if p {
            writeln!(
                out,
                "{label}={} sum={}",
                if ok { "even" } else { "odd" },
                check.sum
            )?;
        } else if !ok {
            writeln!(
                out,
                "VIOLATED {label}{origin}: {} sums to {}",
                check.constraint, check.sum
            )?;
        }
    }
    if p {
        writeln!(out, "violated={violated}")?;
    } else {
        writeln!(
            out,
            "{} laws checked, {violated} violated",
            report.checks.len()
        )?;
    }
    Ok(violated == 0)
}

fn morse(out: &mut dyn Write, p: bool, cmd: &MorseCommand) -> Result<bool, CliError> {
    match cmd {
        MorseCommand::Validate { file } => {
            let report = validate_trace(&read_trace(file)?);
            if p {
                writeln!(out, "valid={}", report.is_valid())?;
                for v in &report.violations {
                    let at = v.event.map_or("trace".to_string(), |e| e.to_string());
                    writeln!(out, "violation={} event={at}", v.rule)?;
                }
            } else {
                writeln!(out, "{report}")?;
            }
            Ok(report.is_valid())
        }
        MorseCommand::Counts { file } => match count_fibers(&read_trace(file)?) {
            Ok(counts) => {
                if p {
                    for (k, n) in counts.iter() {
                        writeln!(out, "{k}={n}")?;
                    }
                } else {
                    write!(out, "{}", counts.to_text())?;
                }
                Ok(true)
            }
            Err(MorseError::Invalid(report)) => {
                writeln!(out, "{report}")?;
                Ok(false)
            }
            Err(source) => Err(CliError::Morse {
                path: file.clone(),
                source,
            }),
        },
        MorseCommand::Invariant {
            file,
            class,
            variant,
        } => {
            let inv = Invariant::parse(*variant, class)?;
            let trace = read_trace(file)?;
            match inv.evaluate(&trace) {
                Ok(value) => {
                    if p {
                        writeln!(out, "value={value}")?;
                    } else {
                        writeln!(out, "{value}")?;
                    }
                    Ok(true)
                }
                Err(InvariantError::Morse(MorseError::Invalid(report))) => {
                    writeln!(out, "{report}")?;
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        MorseCommand::Random { seed, budget } => {
            write!(out, "{}", random_trace(*seed, *budget))?;
            Ok(true)
        }
        MorseCommand::Probe {
            class,
            variant,
            seed,
            trials,
            budget,
            with,
        } => {
            let inv = Invariant::parse(*variant, class)?;
            let supplied = with
                .iter()
                .map(|f| read_trace(f))
                .collect::<Result<Vec<_>, _>>()?;
            let report = triviality_probe(
                &inv,
                *seed..seed.saturating_add(*trials),
                *budget,
                &supplied,
            )?;
            let first = report.witnesses.first().map(|w| w.source.to_string());
            if p {
                writeln!(out, "traces={}", report.traces_checked)?;
                writeln!(out, "always_zero={}", report.always_zero)?;
                writeln!(out, "witnesses={}", report.witnesses.len())?;
                if let Some(f) = first {
                    writeln!(out, "first_witness={f}")?;
                }
            } else {
                writeln!(
                    out,
                    "{} traces, {} with value 1{}",
                    report.traces_checked,
                    report.witnesses.len(),
                    first.map(|f| format!(", first: {f}")).unwrap_or_default()
                )?;
                if report.always_zero {
                    writeln!(out, "always zero on this sample (empirical)")?;
                }
            }
            Ok(true)
        }
    }
}
