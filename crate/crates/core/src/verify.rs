//! The twelve checks behind `verify-paper`: every numerical statement about
//! the complexes, their cohomology, the parity laws and the invariants,
//! recomputed from scratch.

use std::fmt;

use crate::cochain::{Cochain, CochainComplex};
use crate::gf2::{echelon, BitMatrix, BitVector};
use crate::invariants::{Invariant, NamedClass};
use crate::morse::{check_coexistence, count_fibers, random_trace, validate_trace, MorseTrace};
use crate::universal::{
    coarsen_constraints, complex, constraint_rank, derive_constraints, diff_coboundaries,
    morse_split_constraints, same_span, suspension, ComplexVariant, ExpectedFormulae,
    ParityConstraint,
};

/// The checked-in trace of the height function on a disk.
pub const DISK_TRACE: &str = include_str!("../data/traces/disk.trace");

pub const CLAIM_COUNT: u8 = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// First seed of the random-trace sweep.
    pub seed: u64,
    /// Number of random traces.
    pub trials: u64,
    /// Maximum number of events per random trace.
    pub budget: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 1000,
            budget: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub id: u8,
    pub key: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>2}  {:<4}  {:<22}  {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.key,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub claims: Vec<Claim>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.passed)
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cochain(text: &str) -> Cochain {
    Cochain::parse(text).expect("fixed cochain text parses")
}

const KEYS: [&str; CLAIM_COUNT as usize] = [
    "basis-ranks",
    "delta-squared",
    "h0",
    "h1-full",
    "h1-admissible",
    "alpha-coboundary",
    "coexistence-maps",
    "coexistence-morse",
    "suspension",
    "random-traces",
    "disk-alpha",
    "double-entry",
];

/// Runs one claim, numbered 1 to 12.
///
/// # Panics
/// Panics if `id` is out of range.
pub fn run_claim(id: u8, formulae: &ExpectedFormulae, opts: &VerifyOptions) -> Claim {
    let outcome = match id {
        1 => basis_ranks(),
        2 => delta_squared(),
        3 => h0(),
        4 => h1_full(),
        5 => h1_admissible(),
        6 => alpha_coboundary(),
        7 => coexistence_maps(formulae),
        8 => coexistence_morse(formulae),
        9 => suspension_maps(),
        10 => random_traces(opts),
        11 => disk_alpha(),
        12 => double_entry(formulae),
        _ => panic!("claim {id} does not exist"),
    };
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Claim {
        id,
        key: KEYS[usize::from(id) - 1],
        passed,
        detail,
    }
}

pub fn verify(formulae: &ExpectedFormulae, opts: &VerifyOptions) -> VerifyReport {
    VerifyReport {
        claims: (1..=CLAIM_COUNT)
            .map(|i| run_claim(i, formulae, opts))
            .collect(),
    }
}

const THREE_TWO: [ComplexVariant; 2] = [ComplexVariant::Full32, ComplexVariant::Admissible32];

fn dims(c: &CochainComplex) -> [usize; 3] {
    [c.dim(0), c.dim(1), c.dim(2)]
}

fn basis_ranks() -> Outcome {
    let full = dims(complex(ComplexVariant::Full32));
    let adm = dims(complex(ComplexVariant::Admissible32));
    let msg = format!("full {full:?}, admissible {adm:?}");
    ensure(full == [2, 18, 160] && adm == [2, 18, 154], msg.clone())?;
    Ok(msg)
}

fn delta_squared() -> Outcome {
    for v in THREE_TWO {
        let c = complex(v);
        let composite = c
            .delta(1)
            .mul(&c.delta(0))
            .map_err(|e| format!("{v}: {e}"))?;
        ensure(
            composite.is_zero(),
            format!(
                "{v}: delta1 * delta0 has {} nonzero rows",
                (0..composite.rows())
                    .filter(|&r| !composite.row(r).is_zero())
                    .count()
            ),
        )?;
    }
    Ok("delta1 * delta0 = 0 in full and admissible".into())
}

fn h0() -> Outcome {
    let expected = cochain("b0_o + b0_e");
    for v in THREE_TWO {
        let c = complex(v);
        let kernel: Vec<Cochain> = c
            .delta(0)
            .kernel_basis()
            .iter()
            .map(|k| c.from_vector(0, k))
            .collect();
        ensure(
            c.betti(0) == 1,
            format!("{v}: H^0 has dimension {}", c.betti(0)),
        )?;
        ensure(
            kernel == [expected.clone()],
            format!("{v}: ker delta0 spanned by {kernel:?}"),
        )?;
    }
    Ok("H^0 = Z2 generated by b0_o + b0_e in both variants".into())
}

fn h1_full() -> Outcome {
    let c = complex(ComplexVariant::Full32);
    ensure(c.betti(1) == 2, format!("H^1 has dimension {}", c.betti(1)))?;
    let beta = NamedClass::Beta.representatives();
    let gamma = NamedClass::Gamma.representatives();
    for r in beta.iter().chain(&gamma) {
        let cocycle = c.is_cocycle(r).map_err(|e| e.to_string())?;
        ensure(cocycle, format!("{} is not a cocycle", r.compact()))?;
        let exact = c.is_coboundary(r).map_err(|e| e.to_string())?;
        ensure(!exact, format!("{} is zero in cohomology", r.compact()))?;
    }
    let coh = |a: &Cochain, b: &Cochain| c.cohomologous(a, b).map_err(|e| e.to_string());
    ensure(
        coh(&beta[0], &beta[1])?,
        "the two beta representatives differ",
    )?;
    ensure(
        coh(&gamma[0], &gamma[1])?,
        "the two gamma representatives differ",
    )?;
    for b in &beta {
        for g in &gamma {
            ensure(!coh(b, g)?, "beta and gamma are cohomologous")?;
        }
    }
    Ok("dim 2; beta, gamma nonzero and distinct; printed representatives agree".into())
}

fn h1_admissible() -> Outcome {
    let c = complex(ComplexVariant::Admissible32);
    ensure(c.betti(1) == 3, format!("H^1 has dimension {}", c.betti(1)))?;
    let coords: Vec<BitVector> = NamedClass::ALL
        .iter()
        .map(|n| {
            c.cohomology_coordinates(&n.representative())
                .map(BitVector::from_bits)
                .map_err(|e| format!("{n}: {e}"))
        })
        .collect::<Result<_, _>>()?;
    let rank = echelon(3, &coords).rank();
    ensure(
        rank == 3,
        format!("alpha, beta, gamma span a space of dimension {rank}"),
    )?;
    Ok("dim 3; alpha, beta, gamma independent".into())
}

fn alpha_coboundary() -> Outcome {
    let alpha = NamedClass::Alpha.representative();
    let image = complex(ComplexVariant::Full32)
        .coboundary(&alpha)
        .map_err(|e| e.to_string())?;
    let expected = cochain("bII^d + bII^e + bII^f");
    ensure(
        image == expected,
        format!("delta1(alpha) = {}", image.compact()),
    )?;
    let adm = complex(ComplexVariant::Admissible32)
        .is_cocycle(&alpha)
        .map_err(|e| e.to_string())?;
    ensure(adm, "alpha is not a cocycle in the admissible complex")?;
    Ok(format!("delta1(alpha) = {}", image.compact()))
}

fn same_terms(
    derived: &[ParityConstraint],
    listed: &[ParityConstraint],
    what: &str,
) -> Result<(), String> {
    ensure(
        derived.len() == listed.len(),
        format!("{what}: {} derived, {} listed", derived.len(), listed.len()),
    )?;
    for (i, (d, l)) in derived.iter().zip(listed).enumerate() {
        ensure(
            d.terms() == l.terms(),
            format!("{what} item {}: derived `{d}`, listed `{l}`", i + 1),
        )?;
    }
    Ok(())
}

fn coexistence_maps(formulae: &ExpectedFormulae) -> Outcome {
    let refined = derive_constraints(complex(ComplexVariant::Full32), 1);
    same_terms(
        &refined,
        formulae.parity_section("parity.refined"),
        "refined",
    )?;
    let coarse = coarsen_constraints(&refined);
    same_terms(&coarse, formulae.parity_section("parity.coarse"), "coarse")?;
    let rank = constraint_rank(&coarse);
    ensure(rank == 7, format!("coarse laws have rank {rank}"))?;
    let basis = formulae.parity_section("parity.basis");
    ensure(
        basis.len() == 7,
        format!("{} basis laws listed", basis.len()),
    )?;
    ensure(
        same_span(&coarse, basis),
        "coarse laws and basis laws span different spaces",
    )?;
    Ok("18 refined and 9 coarse laws match; rank 7; spans agree".into())
}

fn coexistence_morse(formulae: &ExpectedFormulae) -> Outcome {
    let derived = derive_constraints(complex(ComplexVariant::Full32), 0);
    same_terms(&derived, formulae.parity_section("parity.morse"), "morse")?;
    Ok(format!("single law {}", derived[0]))
}

fn suspension_maps() -> Outcome {
    for v in THREE_TWO {
        let s = suspension(v).map_err(|e| format!("{v}: {e}"))?;
        let (src, tgt) = (s.source(), s.target());
        for k in 0..2 {
            let left = tgt.delta(k).mul(&s.matrix(k)).map_err(|e| e.to_string())?;
            let right = s
                .matrix(k + 1)
                .mul(&src.delta(k))
                .map_err(|e| e.to_string())?;
            ensure(
                left == right,
                format!("{v}: s does not commute in degree {k}"),
            )?;
        }
        ensure(
            *s.matrix(0) == BitMatrix::identity(2),
            format!("{v}: s0 is not the identity"),
        )?;
        ensure(
            *s.matrix(1) == BitMatrix::identity(18),
            format!("{v}: s1 is not the identity"),
        )?;
        let names_match = |k: usize| src.basis(k) == tgt.basis(k);
        ensure(
            names_match(0) && names_match(1),
            format!("{v}: basis names differ"),
        )?;
        ensure(s.matrix(2).is_zero(), format!("{v}: s2 is nonzero"))?;
    }
    Ok("commutes; s0, s1 identity on names; s2 = 0".into())
}

fn random_traces(opts: &VerifyOptions) -> Outcome {
    let mut laws = derive_constraints(complex(ComplexVariant::Full32), 0);
    laws.extend(morse_split_constraints());
    let beta =
        Invariant::named(ComplexVariant::Full32, NamedClass::Beta).map_err(|e| e.to_string())?;
    let gamma =
        Invariant::named(ComplexVariant::Full32, NamedClass::Gamma).map_err(|e| e.to_string())?;
    let mut events = 0;
    let mut failures = Vec::new();
    for seed in opts.seed..opts.seed.saturating_add(opts.trials) {
        let t = random_trace(seed, opts.budget);
        events += t.events.len();
        let report = validate_trace(&t);
        if !report.is_valid() {
            failures.push(format!("seed {seed}: invalid trace"));
            continue;
        }
        let counts = count_fibers(&t).map_err(|e| e.to_string())?;
        let check = check_coexistence(&counts, &laws).map_err(|e| e.to_string())?;
        for (_, c) in check.violated() {
            failures.push(format!("seed {seed}: {} sums to {}", c.constraint, c.sum));
        }
        for (name, inv) in [("beta", &beta), ("gamma", &gamma)] {
            if inv.evaluate(&t).map_err(|e| e.to_string())?.0 {
                failures.push(format!("seed {seed}: {name} = 1"));
            }
        }
    }
    if let Some(first) = failures.first() {
        return Err(format!("{} violations, first: {first}", failures.len()));
    }
    Ok(format!(
        "{} traces from seed {} ({} events): laws even, beta = gamma = 0",
        opts.trials, opts.seed, events
    ))
}

/// Parses the checked-in disk trace.
pub fn disk_trace() -> MorseTrace {
    MorseTrace::parse(DISK_TRACE).expect("checked-in disk trace parses")
}

fn disk_alpha() -> Outcome {
    let t = disk_trace();
    let report = validate_trace(&t);
    ensure(report.is_valid(), format!("disk trace invalid: {report}"))?;
    let alpha = Invariant::named(ComplexVariant::Admissible32, NamedClass::Alpha)
        .map_err(|e| e.to_string())?;
    let value = alpha.evaluate(&t).map_err(|e| e.to_string())?;
    ensure(value.0, "alpha vanishes on the disk")?;
    Ok(format!(
        "disk trace valid, {} events, alpha = {value}",
        t.events.len()
    ))
}

fn double_entry(formulae: &ExpectedFormulae) -> Outcome {
    ensure(
        formulae.coboundaries.contains_key(&0) && formulae.coboundaries.contains_key(&1),
        "formulae lack a coboundary section",
    )?;
    for v in THREE_TWO {
        let diffs = diff_coboundaries(complex(v), formulae);
        if let Some(first) = diffs.first() {
            return Err(format!("{v}: {} differences, first: {first}", diffs.len()));
        }
    }
    let rows: usize = formulae.coboundaries.values().map(Vec::len).sum();
    Ok(format!(
        "{rows} transcribed rows equal the programmatic table"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_claim_passes_with_shipped_data() {
        let opts = VerifyOptions {
            trials: 50,
            ..VerifyOptions::default()
        };
        let report = verify(ExpectedFormulae::standard(), &opts);
        assert_eq!(report.claims.len(), 12);
        for c in &report.claims {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn empty_formulae_fail_the_table_claims() {
        let empty = ExpectedFormulae::default();
        let opts = VerifyOptions {
            trials: 5,
            ..VerifyOptions::default()
        };
        let report = verify(&empty, &opts);
        let failed: Vec<u8> = report.failed().map(|c| c.id).collect();
        assert_eq!(failed, [7, 8, 12]);
    }
}
