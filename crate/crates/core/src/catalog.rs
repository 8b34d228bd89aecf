//! Registry of singular fiber classes.
//!
//! Class names follow the grammar
//!
//! ```text
//! name   := base parity?
//! base   := "b0" | "bI^" k | "bII^{" i "," j "}" | "bII^" m | "bII^" letter
//! parity := "_o" | "_e"
//! ```
//!
//! with `k` in 1..=10, `2 <= i <= j <= 10`, `m` in 11..=39 and `letter` in
//! `a..=f`. `bI^{k}` is accepted as an alias of `bI^k`. A name without a
//! parity suffix is *unrefined*; in cochain expressions it stands for the sum
//! of its two refinements.
//!
//! The catalog itself is a line-oriented data file (see `data/catalog.txt`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::cochain::Cochain;

/// The shipped catalog.
pub const CATALOG_TEXT: &str = include_str!("../data/catalog.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse class name `{input}`: {reason} (at `{token}`)")]
pub struct ParseNameError {
    pub input: String,
    pub token: String,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("catalog line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("catalog line {line}: {source}")]
    Name {
        line: usize,
        #[source]
        source: ParseNameError,
    },
    #[error("catalog line {line}: duplicate entry for {name}")]
    Duplicate { line: usize, name: ClassName },
    #[error("catalog line {line}: transition data inconsistent: {message}")]
    Inconsistent { line: usize, message: String },
}

/// Fiber type without the parity refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    B0,
    BI(u8),
    /// Disjoint union of `bI^i` and `bI^j`, stored with `i <= j`.
    BIIPair(u8, u8),
    BII(u8),
    BIILetter(char),
}

impl Base {
    pub fn codim(self) -> u8 {
        match self {
            Base::B0 => 0,
            Base::BI(_) => 1,
            Base::BIIPair(..) | Base::BII(_) | Base::BIILetter(_) => 2,
        }
    }

    pub fn refined(self, parity: Parity) -> ClassName {
        ClassName {
            base: self,
            parity: Some(parity),
        }
    }

    pub fn unrefined(self) -> ClassName {
        ClassName {
            base: self,
            parity: None,
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::B0 => write!(f, "b0"),
            Base::BI(k) => write!(f, "bI^{k}"),
            Base::BIIPair(i, j) => write!(f, "bII^{{{i},{j}}}"),
            Base::BII(k) => write!(f, "bII^{k}"),
            Base::BIILetter(c) => write!(f, "bII^{c}"),
        }
    }
}

/// Parity of the number of regular components accompanying a singular fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: u64) -> Parity {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn flipped(self) -> Parity {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Parity::Odd => "_o",
            Parity::Even => "_e",
        }
    }
}

/// A fiber class name, optionally refined by parity.
///
/// Ordering is the canonical one: codimension, then numeric names, then
/// letters, with `_o` before `_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassName {
    pub base: Base,
    pub parity: Option<Parity>,
}

impl ClassName {
    pub fn codim(&self) -> u8 {
        self.base.codim()
    }

    pub fn is_refined(&self) -> bool {
        self.parity.is_some()
    }

    pub fn unrefined(&self) -> ClassName {
        self.base.unrefined()
    }

    /// The refined names this name stands for: itself, or both parities.
    pub fn refinements(&self) -> Vec<ClassName> {
        match self.parity {
            Some(_) => vec![*self],
            None => vec![
                self.base.refined(Parity::Odd),
                self.base.refined(Parity::Even),
            ],
        }
    }
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        if let Some(p) = self.parity {
            f.write_str(p.suffix())?;
        }
        Ok(())
    }
}

/// Result of parsing a class name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParsedName {
    pub name: ClassName,
    /// Set when a pair `bII^{i,j}` was written with `i > j` and got sorted.
    pub reordered: bool,
}

/// Parses a class name, normalizing out-of-order pairs.
pub fn parse_class_name(s: &str) -> Result<ParsedName, ParseNameError> {
    let input = s.trim();
    let err = |token: &str, reason: &'static str| ParseNameError {
        input: input.to_string(),
        token: token.to_string(),
        reason,
    };

    let (body, parity) = if let Some(b) = input.strip_suffix("_o") {
        (b, Some(Parity::Odd))
    } else if let Some(b) = input.strip_suffix("_e") {
        (b, Some(Parity::Even))
    } else {
        (input, None)
    };

    let number = |tok: &str, lo: u8, hi: u8| -> Result<u8, ParseNameError> {
        if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) || tok.len() > 2 {
            return Err(err(tok, "expected a number"));
        }
        let n: u8 = tok.parse().map_err(|_| err(tok, "expected a number"))?;
        if n < lo || n > hi {
            return Err(err(tok, "index out of range"));
        }
        Ok(n)
    };

    let mut reordered = false;
    let base = if body == "b0" {
        Base::B0
    } else if let Some(rest) = body.strip_prefix("bII^") {
        if let Some(inner) = rest.strip_prefix('{') {
            let inner = inner
                .strip_suffix('}')
                .ok_or_else(|| err(rest, "unterminated brace"))?;
            match inner.split_once(',') {
                Some((a, b)) => {
                    let i = number(a.trim(), 2, 10)?;
                    let j = number(b.trim(), 2, 10)?;
                    if i > j {
                        reordered = true;
                        Base::BIIPair(j, i)
                    } else {
                        Base::BIIPair(i, j)
                    }
                }
                None => {
                    let k = number(inner.trim(), 11, 39)?;
                    Base::BII(k)
                }
            }
        } else if rest.len() == 1 && rest.as_bytes()[0].is_ascii_lowercase() {
            let c = rest.chars().next().unwrap_or_default();
            if !('a'..='f').contains(&c) {
                return Err(err(rest, "letter must be one of a-f"));
            }
            Base::BIILetter(c)
        } else {
            Base::BII(number(rest, 11, 39)?)
        }
    } else if let Some(rest) = body.strip_prefix("bI^") {
        let tok = rest
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .unwrap_or(rest);
        Base::BI(number(tok, 1, 10)?)
    } else {
        let token = body.split(['^', '_']).next().unwrap_or(body);
        return Err(err(token, "unknown fiber family"));
    };
    Ok(ParsedName {
        name: ClassName { base, parity },
        reordered,
    })
}

impl FromStr for ClassName {
    type Err = ParseNameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_class_name(s).map(|p| p.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DimPair {
    /// 3-manifolds with boundary into surfaces.
    ThreeTwo,
    /// Surfaces with boundary into the line or the circle.
    TwoOne,
}

impl fmt::Display for DimPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimPair::ThreeTwo => write!(f, "(3,2)"),
            DimPair::TwoOne => write!(f, "(2,1)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Full,
    /// Maps that are submersions near the boundary.
    Admissible,
}

/// Component counts `(circles, arcs)` of a regular level set, or a part of one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Components {
    pub circles: u64,
    pub arcs: u64,
}

impl Components {
    pub const EMPTY: Components = Components {
        circles: 0,
        arcs: 0,
    };

    pub fn new(circles: u64, arcs: u64) -> Self {
        Self { circles, arcs }
    }

    pub fn total(&self) -> u64 {
        self.circles + self.arcs
    }

    pub fn contains(&self, other: &Components) -> bool {
        self.circles >= other.circles && self.arcs >= other.arcs
    }

    pub fn checked_sub(&self, other: &Components) -> Option<Components> {
        Some(Components {
            circles: self.circles.checked_sub(other.circles)?,
            arcs: self.arcs.checked_sub(other.arcs)?,
        })
    }

    pub fn add(&self, other: &Components) -> Components {
        Components {
            circles: self.circles + other.circles,
            arcs: self.arcs + other.arcs,
        }
    }
}

impl fmt::Display for Components {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.circles, self.arcs)
    }
}

/// How a codimension-one fiber of a Morse function changes the regular level
/// set. The singular component absorbs `sides.0` components on one side of
/// the critical value and `sides.1` on the other; the remaining regular
/// components pass through unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRule {
    pub delta_circles: BTreeSet<i64>,
    pub delta_arcs: BTreeSet<i64>,
    pub flips_component_parity: bool,
    pub sides: (Components, Components),
}

impl TransitionRule {
    /// True if `(before, after)` is one of the two orientations of `sides`.
    pub fn matches_local(&self, before: Components, after: Components) -> bool {
        (before, after) == self.sides || (after, before) == self.sides
    }

    /// Both orientations of the local change, deduplicated.
    pub fn orientations(&self) -> Vec<(Components, Components)> {
        let (a, b) = self.sides;
        if a == b {
            vec![(a, b)]
        } else {
            vec![(a, b), (b, a)]
        }
    }
}

/// One catalog entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberClass {
    pub name: ClassName,
    pub dim_pair: DimPair,
    pub codim: u8,
    pub orientable_excluded: bool,
    pub admissible: bool,
    pub excluded_from_complex: bool,
    pub transition: Option<TransitionRule>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    entries: Vec<FiberClass>,
    index: BTreeMap<Base, usize>,
}

impl Catalog {
    /// The catalog shipped with the crate.
    pub fn standard() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| {
            Catalog::parse(CATALOG_TEXT).expect("shipped catalog data is well formed")
        })
    }

    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let mut entries: Vec<FiberClass> = Vec::new();
        let mut index = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let entry = parse_entry(line, content)?;
            if index.insert(entry.name.base, entries.len()).is_some() {
                return Err(CatalogError::Duplicate {
                    line,
                    name: entry.name,
                });
            }
            entries.push(entry);
        }
        entries.sort_by_key(|e| e.name);
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.name.base, i))
            .collect();
        Ok(Catalog { entries, index })
    }

    /// Every entry, including ones excluded from the complexes.
    pub fn entries(&self) -> &[FiberClass] {
        &self.entries
    }

    pub fn get(&self, base: Base) -> Option<&FiberClass> {
        self.index.get(&base).map(|&i| &self.entries[i])
    }

    /// Classes forming the basis of a complex, in canonical order.
    ///
    /// The (2,1) classes are the codimension 0 and 1 entries under the same
    /// names; there are no codimension-two fibers for stable Morse functions.
    pub fn list_classes(
        &self,
        dim_pair: DimPair,
        codim: u8,
        variant: Variant,
        refined: bool,
    ) -> Vec<FiberClass> {
        if dim_pair == DimPair::TwoOne && codim > 1 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for e in &self.entries {
            if e.codim != codim || e.excluded_from_complex {
                continue;
            }
            if variant == Variant::Admissible && !e.admissible {
                continue;
            }
            let names = if refined {
                e.name.refinements()
            } else {
                vec![e.name]
            };
            for name in names {
                out.push(FiberClass {
                    name,
                    dim_pair,
                    ..e.clone()
                });
            }
        }
        out
    }

    /// Names of a complex basis in one degree.
    pub fn basis(&self, dim_pair: DimPair, codim: u8, variant: Variant) -> Vec<ClassName> {
        self.list_classes(dim_pair, codim, variant, true)
            .into_iter()
            .map(|c| c.name)
            .collect()
    }

    /// Transition rule for a Morse-function fiber, if the class has one.
    pub fn transition(&self, base: Base) -> Option<&TransitionRule> {
        self.get(base).and_then(|e| e.transition.as_ref())
    }
}

fn parse_entry(line: usize, content: &str) -> Result<FiberClass, CatalogError> {
    let syntax = |message: String| CatalogError::Syntax { line, message };
    let mut tokens = content.split_whitespace();
    let name_tok = tokens.next().ok_or_else(|| syntax("empty entry".into()))?;
    let name = parse_class_name(name_tok)
        .map_err(|source| CatalogError::Name { line, source })?
        .name;
    if name.is_refined() {
        return Err(syntax(format!("catalog names are unrefined, got {name}")));
    }

    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| syntax(format!("expected key=value, got `{tok}`")))?;
        if fields.insert(k, v).is_some() {
            return Err(syntax(format!("repeated field `{k}`")));
        }
    }
    let mut take = |k: &str| fields.remove(k);

    let flag = |k: &str, v: Option<&str>, default: Option<bool>| -> Result<bool, CatalogError> {
        match (v, default) {
            (Some("0"), _) => Ok(false),
            (Some("1"), _) => Ok(true),
            (Some(other), _) => Err(syntax(format!("field `{k}` must be 0 or 1, got `{other}`"))),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(syntax(format!("missing field `{k}`"))),
        }
    };

    let codim: u8 = take("codim")
        .ok_or_else(|| syntax("missing field `codim`".into()))?
        .parse()
        .map_err(|_| syntax("field `codim` must be 0, 1 or 2".into()))?;
    if codim != name.codim() {
        return Err(syntax(format!(
            "{name} has codimension {}, not {codim}",
            name.codim()
        )));
    }
    let orientable_excluded = flag("orientable_excluded", take("orientable_excluded"), None)?;
    let admissible = flag("admissible", take("admissible"), None)?;
    let excluded_from_complex = flag("excluded", take("excluded"), Some(false))?;

    let dc = take("dc");
    let da = take("da");
    let flips = take("flips");
    let local = take("local");
    if let Some(k) = fields.keys().next() {
        return Err(syntax(format!("unknown field `{k}`")));
    }

    let transition = match (dc, da, flips, local) {
        (None, None, None, None) => None,
        (Some(dc), Some(da), Some(flips), Some(local)) => {
            let rule = TransitionRule {
                delta_circles: parse_set(dc).ok_or_else(|| syntax(format!("bad set `{dc}`")))?,
                delta_arcs: parse_set(da).ok_or_else(|| syntax(format!("bad set `{da}`")))?,
                flips_component_parity: flag("flips", Some(flips), None)?,
                sides: parse_sides(local)
                    .ok_or_else(|| syntax(format!("bad local change `{local}`")))?,
            };
            check_rule(line, &rule)?;
            Some(rule)
        }
        _ => {
            return Err(syntax(
                "transition fields dc, da, flips and local must appear together".into(),
            ))
        }
    };
    if transition.is_some() && codim != 1 {
        return Err(syntax(
            "only codimension-one classes carry transitions".into(),
        ));
    }

    Ok(FiberClass {
        name,
        dim_pair: DimPair::ThreeTwo,
        codim,
        orientable_excluded,
        admissible,
        excluded_from_complex,
        transition,
    })
}

fn parse_set(s: &str) -> Option<BTreeSet<i64>> {
    let inner = s.strip_prefix('{')?.strip_suffix('}')?;
    if inner.trim().is_empty() {
        return Some(BTreeSet::new());
    }
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}

fn parse_sides(s: &str) -> Option<(Components, Components)> {
    let pair = |t: &str| -> Option<Components> {
        let (c, a) = t.split_once(',')?;
        Some(Components::new(c.parse().ok()?, a.parse().ok()?))
    };
    let (a, b) = s.split_once('|')?;
    Some((pair(a)?, pair(b)?))
}

/// The redundant columns (dc, da, flips) must agree with the local change.
fn check_rule(line: usize, rule: &TransitionRule) -> Result<(), CatalogError> {
    let (a, b) = rule.sides;
    let dc = b.circles as i64 - a.circles as i64;
    let da = b.arcs as i64 - a.arcs as i64;
    let inconsistent = |message: String| CatalogError::Inconsistent { line, message };
    if rule.delta_circles != BTreeSet::from([dc, -dc]) {
        return Err(inconsistent(format!(
            "dc={:?} but the local change moves circles by {dc}",
            rule.delta_circles
        )));
    }
    if rule.delta_arcs != BTreeSet::from([da, -da]) {
        return Err(inconsistent(format!(
            "da={:?} but the local change moves arcs by {da}",
            rule.delta_arcs
        )));
    }
    if rule.flips_component_parity != ((dc + da).rem_euclid(2) == 1) {
        return Err(inconsistent(format!(
            "flips={} disagrees with a total change of {}",
            u8::from(rule.flips_component_parity),
            dc + da
        )));
    }
    Ok(())
}

/// Collapses a refined cochain to unrefined names: the coefficient of a base
/// is the sum of its `_o` and `_e` coefficients.
///
/// # Panics
/// Panics if the cochain contains unrefined names; cochains built by this
/// crate never do.
pub fn coarsen(c: &Cochain) -> BTreeSet<ClassName> {
    let mut out = BTreeSet::new();
    for name in c.support() {
        assert!(
            name.is_refined(),
            "coarsen expects refined names, got {name}"
        );
        let base = name.unrefined();
        if !out.remove(&base) {
            out.insert(base);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(s: &str) -> ClassName {
        s.parse().unwrap()
    }

    #[test]
    fn parses_grammar_cases() {
        assert_eq!(
            name("bI^7_o"),
            ClassName {
                base: Base::BI(7),
                parity: Some(Parity::Odd)
            }
        );
        assert_eq!(name("bII^{2,10}"), Base::BIIPair(2, 10).unrefined());
        assert_eq!(name("bII^27_e"), Base::BII(27).refined(Parity::Even));
        assert_eq!(name("bII^f"), Base::BIILetter('f').unrefined());
        assert_eq!(name("b0_e"), Base::B0.refined(Parity::Even));
        assert_eq!(name("bI^{10}"), Base::BI(10).unrefined());
    }

    #[test]
    fn rejects_bad_names() {
        for bad in [
            "bII^g",
            "bI^11",
            "bI^0",
            "bII^10",
            "bII^40",
            "bII^{1,3}",
            "bII^{2,11}",
            "b1",
            "bII^{2,3",
            "bI^",
            "bI^x",
            "b0_x",
            "",
            "bII^{}",
        ] {
            assert!(parse_class_name(bad).is_err(), "{bad} should not parse");
        }
        let e = parse_class_name("bII^g").unwrap_err();
        assert_eq!(e.token, "g");
    }

    #[test]
    fn out_of_order_pairs_are_normalized() {
        let p = parse_class_name("bII^{9,3}_o").unwrap();
        assert!(p.reordered);
        assert_eq!(p.name.to_string(), "bII^{3,9}_o");
        assert!(!parse_class_name("bII^{3,9}").unwrap().reordered);
    }

    #[test]
    fn basis_sizes() {
        let cat = Catalog::standard();
        let sizes = |dims, variant| -> Vec<usize> {
            (0..3)
                .map(|k| cat.list_classes(dims, k, variant, true).len())
                .collect()
        };
        assert_eq!(sizes(DimPair::ThreeTwo, Variant::Full), vec![2, 18, 160]);
        assert_eq!(
            sizes(DimPair::ThreeTwo, Variant::Admissible),
            vec![2, 18, 154]
        );
        assert_eq!(sizes(DimPair::TwoOne, Variant::Full), vec![2, 18, 0]);
        assert_eq!(
            cat.basis(DimPair::ThreeTwo, 0, Variant::Full),
            vec![name("b0_o"), name("b0_e")]
        );
        let codim1: Vec<String> = cat
            .basis(DimPair::ThreeTwo, 1, Variant::Full)
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(codim1[0], "bI^2_o");
        assert_eq!(codim1[1], "bI^2_e");
        assert_eq!(codim1[17], "bI^10_e");
    }

    #[test]
    fn admissible_excludes_exactly_def() {
        let cat = Catalog::standard();
        let excluded: Vec<String> = cat
            .entries()
            .iter()
            .filter(|e| !e.admissible)
            .map(|e| e.name.to_string())
            .collect();
        assert_eq!(excluded, ["bII^d", "bII^e", "bII^f"]);
    }

    #[test]
    fn orientable_exclusions() {
        let cat = Catalog::standard();
        let mut expected = vec!["bI^9".to_string(), "bI^10".to_string()];
        expected.extend((26..=39).map(|k| format!("bII^{k}")));
        let got: Vec<String> = cat
            .entries()
            .iter()
            .filter(|e| e.orientable_excluded)
            .map(|e| e.name.to_string())
            .collect();
        assert_eq!(got.len(), 16);
        assert_eq!(got, expected);
    }

    #[test]
    fn first_codim_one_entry_is_kept_but_excluded() {
        let cat = Catalog::standard();
        let e = cat.get(Base::BI(1)).unwrap();
        assert!(e.excluded_from_complex);
        assert!(e.transition.is_none());
        assert!(cat
            .list_classes(DimPair::ThreeTwo, 1, Variant::Full, false)
            .iter()
            .all(|c| c.name.base != Base::BI(1)));
    }

    #[test]
    fn print_then_parse_is_identity_on_every_refined_name() {
        let cat = Catalog::standard();
        let mut count = 0;
        for variant in [Variant::Full] {
            for k in 0..3 {
                for n in cat.basis(DimPair::ThreeTwo, k, variant) {
                    let text = n.to_string();
                    let back = parse_class_name(&text).unwrap();
                    assert_eq!(back.name, n);
                    assert!(!back.reordered);
                    assert_eq!(back.name.to_string(), text);
                    count += 1;
                }
            }
        }
        assert_eq!(count, 180);
    }

    #[test]
    fn canonical_order_numeric_then_letters() {
        let mut names = [
            name("bII^a_e"),
            name("bII^13_o"),
            name("bII^{2,3}_e"),
            name("bII^a_o"),
            name("bI^10_o"),
            name("bI^2_e"),
            name("b0_o"),
        ];
        names.sort();
        let text: Vec<String> = names.iter().map(ToString::to_string).collect();
        assert_eq!(
            text,
            [
                "b0_o",
                "bI^2_e",
                "bI^10_o",
                "bII^{2,3}_e",
                "bII^13_o",
                "bII^a_o",
                "bII^a_e"
            ]
        );
    }

    #[test]
    fn rejects_inconsistent_transition_rows() {
        let bad = "bI^2 codim=1 orientable_excluded=0 admissible=1 dc={-1,1} da={0} flips=0 local=0,0|1,0";
        assert!(matches!(
            Catalog::parse(bad),
            Err(CatalogError::Inconsistent { line: 1, .. })
        ));
        let partial = "bI^2 codim=1 orientable_excluded=0 admissible=1 dc={-1,1}";
        assert!(matches!(
            Catalog::parse(partial),
            Err(CatalogError::Syntax { .. })
        ));
        let wrong_codim = "bII^a codim=1 orientable_excluded=0 admissible=1";
        assert!(Catalog::parse(wrong_codim).is_err());
        let dup = "b0 codim=0 orientable_excluded=0 admissible=1\nb0 codim=0 orientable_excluded=0 admissible=1";
        assert!(matches!(
            Catalog::parse(dup),
            Err(CatalogError::Duplicate { line: 2, .. })
        ));
    }

    #[test]
    fn coarsen_sums_parities() {
        let c = Cochain::parse("bII^a_o + bII^a_e").unwrap();
        assert!(coarsen(&c).is_empty());
        let c = Cochain::parse("bII^a_o + bII^b_e + bII^{2,3}").unwrap();
        let got: Vec<String> = coarsen(&c).iter().map(ToString::to_string).collect();
        assert_eq!(got, ["bII^a", "bII^b"]);
        assert!(coarsen(&Cochain::zero(2)).is_empty());
    }
}
