//! The concrete universal complexes of singular fibers.
//!
//! Three complexes are built from the catalog:
//!
//! * `Full32`: proper stable maps of 3-manifolds with boundary into surfaces,
//!   fibers up to C^0 equivalence modulo two regular components. Bases of
//!   sizes 2, 18, 160.
//! * `Admissible32`: the same for maps that are submersions near the
//!   boundary; the three codimension-two classes through a point where the
//!   singular set meets the boundary drop out, leaving 2, 18, 154.
//! * `Morse21`: stable Morse functions on surfaces with boundary. Singular
//!   values are distinct, so there are no codimension-two fibers: 2, 18, 0.
//!
//! The coboundary out of degree one is encoded below as a table and checked
//! against the independent transcription in `data/expected_formulae.txt`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::catalog::{parse_class_name, Base, Catalog, ClassName, DimPair, Parity, Variant};
use crate::cochain::{Cochain, CochainComplex, CochainError, CochainMap};
use crate::gf2::{echelon, BitMatrix, BitVector};
use crate::morse::CountVector;

/// The shipped transcription of the coboundary formulae and parity laws.
pub const EXPECTED_FORMULAE_TEXT: &str = include_str!("../data/expected_formulae.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComplexVariant {
    Full32,
    Admissible32,
    Morse21,
}

impl ComplexVariant {
    pub const ALL: [ComplexVariant; 3] = [
        ComplexVariant::Full32,
        ComplexVariant::Admissible32,
        ComplexVariant::Morse21,
    ];

    pub fn dim_pair(self) -> DimPair {
        match self {
            ComplexVariant::Morse21 => DimPair::TwoOne,
            _ => DimPair::ThreeTwo,
        }
    }

    pub fn variant(self) -> Variant {
        match self {
            ComplexVariant::Admissible32 => Variant::Admissible,
            _ => Variant::Full,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ComplexVariant::Full32 => "full",
            ComplexVariant::Admissible32 => "admissible",
            ComplexVariant::Morse21 => "morse",
        }
    }
}

impl fmt::Display for ComplexVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ComplexVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" | "full_32" => Ok(ComplexVariant::Full32),
            "admissible" | "admissible_32" => Ok(ComplexVariant::Admissible32),
            "morse" | "morse_21" => Ok(ComplexVariant::Morse21),
            other => Err(format!(
                "unknown variant `{other}` (expected full, admissible or morse)"
            )),
        }
    }
}

/// One row pair of the degree-one coboundary: the image of `bI^source_o`
/// is `common` (both parities of each) plus `split` with the listed parity;
/// the image of `bI^source_e` swaps the parities in `split`.
struct CoboundaryRow {
    source: u8,
    common: &'static [Base],
    split: &'static [(Base, Parity)],
}

const fn p(i: u8, j: u8) -> Base {
    Base::BIIPair(i, j)
}
const fn n(k: u8) -> Base {
    Base::BII(k)
}
const fn l(c: char) -> Base {
    Base::BIILetter(c)
}
const O: Parity = Parity::Odd;
const E: Parity = Parity::Even;

/// Support of the degree-zero coboundary (the same for `b0_o` and `b0_e`).
const DELTA0_SUPPORT: [u8; 5] = [2, 3, 4, 6, 8];

#[rustfmt::skip]
const DELTA1: [CoboundaryRow; 9] = [
    CoboundaryRow { source: 2,
        common: &[p(2, 3), p(2, 4), p(2, 6), p(2, 8)],
        split: &[(l('a'), E), (l('b'), E), (l('d'), O)] },
    CoboundaryRow { source: 3,
        common: &[p(2, 3), p(3, 4), p(3, 6), p(3, 8)],
        split: &[(n(13), E), (n(22), O), (l('a'), O)] },
    CoboundaryRow { source: 4,
        common: &[p(2, 4), p(3, 4), p(4, 6), p(4, 8), n(24)],
        split: &[(n(13), E), (n(22), O), (n(23), O), (l('b'), O), (l('f'), O)] },
    CoboundaryRow { source: 5,
        common: &[p(2, 5), p(3, 5), p(4, 5), p(5, 6), p(5, 8), n(15), n(25)],
        split: &[(n(23), O), (n(30), O), (n(38), O), (l('e'), O)] },
    CoboundaryRow { source: 6,
        common: &[p(2, 6), p(3, 6), p(4, 6), p(6, 8)],
        split: &[(l('c'), E), (l('d'), O), (l('e'), E), (l('f'), E)] },
    CoboundaryRow { source: 7,
        common: &[p(2, 7), p(3, 7), p(4, 7), p(6, 7), p(7, 8), n(22)],
        split: &[(n(23), E), (l('d'), O), (l('f'), O)] },
    CoboundaryRow { source: 8,
        common: &[p(2, 8), p(3, 8), p(4, 8), p(6, 8), n(24)],
        split: &[(n(23), O), (l('c'), O), (l('e'), O)] },
    CoboundaryRow { source: 9,
        common: &[p(2, 9), p(3, 9), p(4, 9), p(6, 9), p(8, 9), n(27)],
        split: &[(n(35), E), (n(37), O)] },
    CoboundaryRow { source: 10,
        common: &[p(2, 10), p(3, 10), p(4, 10), p(6, 10), p(8, 10), n(32), n(33), n(39)],
        split: &[(n(30), E), (n(35), O), (n(37), O), (n(38), O)] },
];

/// Image of a refined codimension-one class under the full degree-one
/// coboundary, as refined names.
fn delta1_image(source: ClassName) -> BTreeSet<ClassName> {
    let parity = source.parity.expect("basis names are refined");
    let Base::BI(k) = source.base else {
        panic!("{source} is not a codimension-one class");
    };
    let row = DELTA1
        .iter()
        .find(|r| r.source == k)
        .unwrap_or_else(|| panic!("no coboundary row for {source}"));
    let mut out = BTreeSet::new();
    for &b in row.common {
        out.insert(b.refined(Parity::Odd));
        out.insert(b.refined(Parity::Even));
    }
    for &(b, q) in row.split {
        let q = if parity == Parity::Odd {
            q
        } else {
            q.flipped()
        };
        out.insert(b.refined(q));
    }
    out
}

fn column_for(basis: &[ClassName], image: &BTreeSet<ClassName>) -> BitVector {
    // Names outside the basis (the classes dropped by the admissible
    // variant) are deleted.
    BitVector::from_indices(
        basis.len(),
        basis
            .iter()
            .enumerate()
            .filter(|(_, n)| image.contains(n))
            .map(|(i, _)| i),
    )
}

/// Builds a complex from the catalog and the coboundary table.
pub fn build_complex_with(
    catalog: &Catalog,
    variant: ComplexVariant,
) -> Result<CochainComplex, CochainError> {
    let bases: Vec<Vec<ClassName>> = (0..3)
        .map(|k| catalog.basis(variant.dim_pair(), k, variant.variant()))
        .collect();

    let delta0_image: BTreeSet<ClassName> = DELTA0_SUPPORT
        .iter()
        .flat_map(|&k| Base::BI(k).unrefined().refinements())
        .collect();
    let d0_cols: Vec<BitVector> = bases[0]
        .iter()
        .map(|_| column_for(&bases[1], &delta0_image))
        .collect();
    let d0 = BitMatrix::from_columns(bases[1].len(), &d0_cols).expect("columns sized to basis");

    let d1_cols: Vec<BitVector> = bases[1]
        .iter()
        .map(|&g| {
            if bases[2].is_empty() {
                BitVector::zeros(0)
            } else {
                column_for(&bases[2], &delta1_image(g))
            }
        })
        .collect();
    let d1 = BitMatrix::from_columns(bases[2].len(), &d1_cols).expect("columns sized to basis");

    let complex = CochainComplex::from_parts(bases, vec![d0, d1]);
    complex.check()?;
    Ok(complex)
}

/// Builds one of the three complexes from the shipped catalog.
pub fn build_complex(variant: ComplexVariant) -> Result<CochainComplex, CochainError> {
    build_complex_with(Catalog::standard(), variant)
}

/// Cached complexes built from the shipped catalog.
pub fn complex(variant: ComplexVariant) -> &'static CochainComplex {
    static CACHE: OnceLock<[CochainComplex; 3]> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        ComplexVariant::ALL
            .map(|v| build_complex(v).expect("shipped coboundary data is consistent"))
    });
    &all[ComplexVariant::ALL
        .iter()
        .position(|&v| v == variant)
        .unwrap_or(0)]
}

/// The suspension cochain map from a (3,2) complex to the Morse complex:
/// identity on names in degrees 0 and 1, zero in degree 2.
pub fn suspension(variant: ComplexVariant) -> Result<CochainMap, CochainError> {
    let source = complex(variant);
    let target = complex(ComplexVariant::Morse21);
    CochainMap::by_names(source, target)
}

/// A set of classes whose occurrence counts always sum to an even number.
///
/// Stored as a GF(2) indicator over refined names; `X` and `X_o + X_e` are
/// the same constraint. `origin` records the class whose coboundary produced
/// it, when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParityConstraint {
    terms: BTreeSet<ClassName>,
    pub origin: Option<ClassName>,
}

impl ParityConstraint {
    pub fn from_names<I: IntoIterator<Item = ClassName>>(names: I) -> Self {
        let mut terms = BTreeSet::new();
        for name in names {
            for r in name.refinements() {
                if !terms.remove(&r) {
                    terms.insert(r);
                }
            }
        }
        Self {
            terms,
            origin: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, crate::catalog::ParseNameError> {
        let names = text
            .split('+')
            .map(|t| parse_class_name(t.trim()).map(|p| p.name))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_names(names))
    }

    fn with_origin(mut self, origin: ClassName) -> Self {
        self.origin = Some(origin);
        self
    }

    /// Refined names, in canonical order.
    pub fn terms(&self) -> &BTreeSet<ClassName> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Names with matching `_o`/`_e` pairs collapsed to the unrefined name.
    pub fn display_names(&self) -> Vec<ClassName> {
        let mut out: Vec<ClassName> = Vec::new();
        for t in &self.terms {
            let base = t.unrefined();
            if out.last() == Some(&base) {
                continue;
            }
            if base.refinements().iter().all(|r| self.terms.contains(r)) {
                out.push(base);
            } else {
                out.push(*t);
            }
        }
        out
    }

    /// Sum of the counts of the member classes.
    pub fn sum(&self, counts: &CountVector) -> u64 {
        self.terms.iter().map(|t| counts.get(t)).sum()
    }

    pub fn holds(&self, counts: &CountVector) -> bool {
        self.sum(counts).is_multiple_of(2)
    }
}

impl fmt::Display for ParityConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names: Vec<String> = self
            .display_names()
            .iter()
            .map(ToString::to_string)
            .collect();
        f.write_str(&names.join(" + "))
    }
}

/// One constraint per degree-`k` generator: the support of its coboundary.
/// Empty and repeated constraints are dropped.
pub fn derive_constraints(complex: &CochainComplex, degree: usize) -> Vec<ParityConstraint> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &g in complex.basis(degree) {
        let image = complex
            .coboundary(&Cochain::from_names(degree, [g]).expect("basis name has this degree"))
            .expect("basis name lies in the basis");
        let c = ParityConstraint::from_names(image.support().iter().copied()).with_origin(g);
        if c.is_empty() || !seen.insert(c.terms.clone()) {
            continue;
        }
        out.push(c);
    }
    out
}

/// Eliminates parity-refined terms: constraints coming from the two
/// refinements of one class are added together. Constraints without a
/// recorded origin pass through.
pub fn coarsen_constraints(cs: &[ParityConstraint]) -> Vec<ParityConstraint> {
    let mut groups: BTreeMap<ClassName, ParityConstraint> = BTreeMap::new();
    let mut order = Vec::new();
    let mut loose = Vec::new();
    for c in cs {
        match c.origin {
            Some(o) => {
                let key = o.unrefined();
                let entry = groups.entry(key).or_insert_with(|| {
                    order.push(key);
                    ParityConstraint::from_names([]).with_origin(key)
                });
                let summed =
                    ParityConstraint::from_names(entry.terms.iter().chain(c.terms.iter()).copied());
                entry.terms = summed.terms;
            }
            None => loose.push(c.clone()),
        }
    }
    order
        .into_iter()
        .filter_map(|k| groups.remove(&k))
        .chain(loose)
        .filter(|c| !c.is_empty())
        .collect()
}

fn universe(cs: &[&ParityConstraint]) -> Vec<ClassName> {
    cs.iter()
        .flat_map(|c| c.terms.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn indicator(universe: &[ClassName], c: &ParityConstraint) -> BitVector {
    BitVector::from_indices(
        universe.len(),
        universe
            .iter()
            .enumerate()
            .filter(|(_, n)| c.terms.contains(n))
            .map(|(i, _)| i),
    )
}

/// Reduced GF(2) basis of the span of the constraints.
pub fn constraint_basis(cs: &[ParityConstraint]) -> Vec<ParityConstraint> {
    let refs: Vec<&ParityConstraint> = cs.iter().collect();
    let uni = universe(&refs);
    let vectors: Vec<BitVector> = cs.iter().map(|c| indicator(&uni, c)).collect();
    echelon(uni.len(), &vectors)
        .rows
        .iter()
        .map(|v| ParityConstraint::from_names(v.ones().map(|i| uni[i])))
        .collect()
}

/// Rank of the span of the constraints.
pub fn constraint_rank(cs: &[ParityConstraint]) -> usize {
    constraint_basis(cs).len()
}

/// True if every constraint of `a` lies in the span of `b` and vice versa.
pub fn same_span(a: &[ParityConstraint], b: &[ParityConstraint]) -> bool {
    let refs: Vec<&ParityConstraint> = a.iter().chain(b).collect();
    let uni = universe(&refs);
    let span = |cs: &[ParityConstraint]| {
        echelon(
            uni.len(),
            &cs.iter().map(|c| indicator(&uni, c)).collect::<Vec<_>>(),
        )
    };
    let (sa, sb) = (span(a), span(b));
    a.iter().all(|c| sb.contains(&indicator(&uni, c)))
        && b.iter().all(|c| sa.contains(&indicator(&uni, c)))
}

/// The two finer parity laws for Morse functions, from the separate parities
/// of circle and arc components. They come from a finer complex that is not
/// built here, so they are stated directly.
pub fn morse_split_constraints() -> Vec<ParityConstraint> {
    [[2u8, 3, 4, 7].as_slice(), [6u8, 7, 8].as_slice()]
        .iter()
        .map(|ks| ParityConstraint::from_names(ks.iter().map(|&k| Base::BI(k).unrefined())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaeError {
    #[error("formulae line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("formulae line {line}: {source}")]
    Cochain {
        line: usize,
        #[source]
        source: CochainError,
    },
}

/// Parsed contents of an expected-formulae file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExpectedFormulae {
    /// `degree -> [(source, image)]` in file order.
    pub coboundaries: BTreeMap<usize, Vec<(ClassName, Cochain)>>,
    /// `section name -> constraints` for every `[parity.*]` section.
    pub parity: BTreeMap<String, Vec<ParityConstraint>>,
}

impl ExpectedFormulae {
    pub fn standard() -> &'static ExpectedFormulae {
        static PARSED: OnceLock<ExpectedFormulae> = OnceLock::new();
        PARSED.get_or_init(|| {
            ExpectedFormulae::parse(EXPECTED_FORMULAE_TEXT)
                .expect("shipped formulae file is well formed")
        })
    }

    pub fn parse(text: &str) -> Result<Self, FormulaeError> {
        let mut out = ExpectedFormulae::default();
        let mut section: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = Some(name.trim().to_string());
                continue;
            }
            let syntax = |message: String| FormulaeError::Syntax { line, message };
            let Some(sec) = section.as_deref() else {
                return Err(syntax("entry outside of a section".into()));
            };
            let wrap = |source: CochainError| FormulaeError::Cochain { line, source };
            if let Some(deg) = sec.strip_prefix("coboundary.") {
                let degree: usize = deg
                    .parse()
                    .map_err(|_| syntax(format!("bad section name `{sec}`")))?;
                let (lhs, rhs) = content
                    .split_once("->")
                    .ok_or_else(|| syntax("expected `<source> -> <image>`".into()))?;
                let source = parse_class_name(lhs.trim())
                    .map_err(|e| wrap(e.into()))?
                    .name;
                if usize::from(source.codim()) != degree {
                    return Err(syntax(format!("{source} does not have degree {degree}")));
                }
                let image = Cochain::parse_in_degree(rhs, degree + 1).map_err(wrap)?;
                out.coboundaries
                    .entry(degree)
                    .or_default()
                    .push((source, image));
            } else if sec.starts_with("parity") {
                let c = ParityConstraint::parse(content).map_err(|e| wrap(e.into()))?;
                out.parity.entry(sec.to_string()).or_default().push(c);
            } else {
                return Err(syntax(format!("unknown section `{sec}`")));
            }
        }
        Ok(out)
    }

    pub fn parity_section(&self, name: &str) -> &[ParityConstraint] {
        self.parity.get(name).map_or(&[], Vec::as_slice)
    }
}

/// Differences between a complex's coboundaries and the transcribed table.
/// Empty means every listed degree matches row for row and every basis
/// element of a listed degree has exactly one row.
pub fn diff_coboundaries(complex: &CochainComplex, expected: &ExpectedFormulae) -> Vec<String> {
    let mut diffs = Vec::new();
    for (&degree, rows) in &expected.coboundaries {
        let mut seen = BTreeSet::new();
        for (source, image) in rows {
            for r in source.refinements() {
                if !seen.insert(r) {
                    diffs.push(format!("degree {degree}: {r} listed twice"));
                    continue;
                }
                let generator = Cochain::from_names(degree, [r]).expect("degree checked on parse");
                match complex.coboundary(&generator) {
                    Ok(actual) => {
                        // Ignore target names the complex does not carry.
                        let filtered = Cochain::from_names(
                            degree + 1,
                            image
                                .support()
                                .iter()
                                .copied()
                                .filter(|n| complex.basis(degree + 1).contains(n)),
                        )
                        .expect("same degree");
                        if actual != filtered {
                            diffs.push(format!(
                                "degree {degree}: image of {r} is `{actual}` but the table lists `{filtered}`"
                            ));
                        }
                    }
                    Err(e) => diffs.push(format!("degree {degree}: {e}")),
                }
            }
        }
        for name in complex.basis(degree) {
            if !seen.contains(name) {
                diffs.push(format!("degree {degree}: no row for {name}"));
            }
        }
    }
    diffs
}
