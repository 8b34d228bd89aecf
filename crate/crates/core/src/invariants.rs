//! Cobordism invariants of stable Morse functions induced by degree-one
//! cocycles of a (3,2) complex through suspension.
//!
//! The value on a trace is the parity of the number of singular fibers whose
//! class lies in the support of the suspended cocycle.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use thiserror::Error;

use crate::cochain::{Cochain, CochainError};
use crate::morse::{count_fibers, random_trace, MorseError, MorseTrace};
use crate::universal::{complex, suspension, ComplexVariant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error("invariants come from a (3,2) complex, not `{0}`")]
    NotSuspendable(ComplexVariant),
    #[error("expected a degree-one cochain, found degree {0}")]
    WrongDegree(usize),
}

/// An element of Z/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct InvariantValue(pub bool);

impl InvariantValue {
    pub fn as_u8(self) -> u8 {
        u8::from(self.0)
    }
}

// Addition in GF(2).
#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Add for InvariantValue {
    type Output = InvariantValue;

    fn add(self, rhs: Self) -> Self {
        InvariantValue(self.0 ^ rhs.0)
    }
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedClass {
    Alpha,
    Beta,
    Gamma,
}

impl NamedClass {
    pub const ALL: [NamedClass; 3] = [NamedClass::Alpha, NamedClass::Beta, NamedClass::Gamma];

    /// Every printed representative; the first is the default one.
    pub fn representatives(self) -> Vec<Cochain> {
        let texts: &[&str] = match self {
            NamedClass::Alpha => &["bI^2 + bI^3 + bI^4 + bI^5 + bI^9 + bI^10"],
            NamedClass::Beta => &["bI^6 + bI^7 + bI^8", "bI^2 + bI^3 + bI^4 + bI^7"],
            NamedClass::Gamma => &[
                "bI^2_o + bI^3_e + bI^4_e + bI^6_o + bI^8_e",
                "bI^2_e + bI^3_o + bI^4_o + bI^6_e + bI^8_o",
            ],
        };
        texts
            .iter()
            .map(|t| Cochain::parse(t).expect("representatives are well formed"))
            .collect()
    }

    pub fn representative(self) -> Cochain {
        self.representatives().swap_remove(0)
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedClass::Alpha => "alpha",
            NamedClass::Beta => "beta",
            NamedClass::Gamma => "gamma",
        }
    }
}

impl fmt::Display for NamedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NamedClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown class `{s}`"))
    }
}

/// A degree-one cocycle of a (3,2) complex, ready to evaluate on traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariant {
    variant: ComplexVariant,
    cochain: Cochain,
    suspended: Cochain,
}

impl Invariant {
    /// Fails unless `cochain` is a degree-one cocycle of `variant`.
    pub fn new(variant: ComplexVariant, cochain: Cochain) -> Result<Self, InvariantError> {
        if variant == ComplexVariant::Morse21 {
            return Err(InvariantError::NotSuspendable(variant));
        }
        if cochain.degree() != 1 {
            return Err(InvariantError::WrongDegree(cochain.degree()));
        }
        if !complex(variant).is_cocycle(&cochain)? {
            return Err(CochainError::NotCocycle { degree: 1 }.into());
        }
        let suspended = suspension(variant)?.apply(&cochain)?;
        Ok(Self {
            variant,
            cochain,
            suspended,
        })
    }

    pub fn named(variant: ComplexVariant, class: NamedClass) -> Result<Self, InvariantError> {
        Self::new(variant, class.representative())
    }

    /// `alpha`, `beta`, `gamma` or a cochain expression.
    pub fn parse(variant: ComplexVariant, text: &str) -> Result<Self, InvariantError> {
        match text.trim().parse::<NamedClass>() {
            Ok(c) => Self::named(variant, c),
            Err(_) => Self::new(variant, complex(variant).parse_cochain(text, 1)?),
        }
    }

    pub fn variant(&self) -> ComplexVariant {
        self.variant
    }

    pub fn cochain(&self) -> &Cochain {
        &self.cochain
    }

    /// The cochain after suspension to the Morse complex.
    pub fn suspended(&self) -> &Cochain {
        &self.suspended
    }

    pub fn evaluate(&self, t: &MorseTrace) -> Result<InvariantValue, InvariantError> {
        let counts = count_fibers(t)?;
        let total: u64 = self.suspended.support().iter().map(|n| counts.get(n)).sum();
        Ok(InvariantValue(total % 2 == 1))
    }
}

/// Evaluates a cochain of a (3,2) variant on a trace.
pub fn evaluate(
    variant: ComplexVariant,
    c: &Cochain,
    t: &MorseTrace,
) -> Result<InvariantValue, InvariantError> {
    Invariant::new(variant, c.clone())?.evaluate(t)
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessSource {
    Seed(u64),
    Supplied(usize),
}

impl fmt::Display for WitnessSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessSource::Seed(s) => write!(f, "seed {s}"),
            WitnessSource::Supplied(i) => write!(f, "supplied trace {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub source: WitnessSource,
    pub trace: MorseTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub seeds: Range<u64>,
    pub traces_checked: usize,
    pub always_zero: bool,
    pub witnesses: Vec<Witness>,
}

/// Evaluates the invariant on the supplied traces and on one random trace
/// per seed. Any trace with value 1 is kept as a witness.
pub fn triviality_probe(
    inv: &Invariant,
    seeds: Range<u64>,
    budget: usize,
    supplied: &[MorseTrace],
) -> Result<ProbeReport, InvariantError> {
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for (i, t) in supplied.iter().enumerate() {
        checked += 1;
        if inv.evaluate(t)?.0 {
            witnesses.push(Witness {
                source: WitnessSource::Supplied(i),
                trace: t.clone(),
            });
        }
    }
    for seed in seeds.clone() {
        let t = random_trace(seed, budget);
        checked += 1;
        if inv.evaluate(&t)?.0 {
            witnesses.push(Witness {
                source: WitnessSource::Seed(seed),
                trace: t,
            });
        }
    }
    Ok(ProbeReport {
        seeds,
        traces_checked: checked,
        always_zero: witnesses.is_empty(),
        witnesses,
    })
}
