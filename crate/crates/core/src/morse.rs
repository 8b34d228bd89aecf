//! Stable Morse functions on compact surfaces with boundary, encoded as
//! traces: the ordered singular-fiber events together with the regular
//! level-set composition between them.
//!
//! A regular level set is a disjoint union of circles and arcs (arcs end on
//! the boundary), so it is recorded as a [`Components`] pair. Each event
//! names the class of its singular fiber, the regular components that pass
//! through it unchanged, and the composition afterwards.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::catalog::{
    parse_class_name, Base, Catalog, ClassName, Components, Parity, ParseNameError,
};
use crate::universal::ParityConstraint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Line,
    Circle,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Line => "line",
            Target::Circle => "circle",
        })
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "line" => Ok(Target::Line),
            "circle" => Ok(Target::Circle),
            other => Err(format!(
                "unknown target `{other}` (expected line or circle)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEvent {
    pub value: f64,
    /// As written in the trace; a parity suffix, if present, is checked.
    pub class: ClassName,
    /// Regular components of the singular fiber.
    pub regular: Components,
    pub after: Components,
}

impl TraceEvent {
    /// The refined class this event is counted under.
    pub fn counted_class(&self) -> ClassName {
        self.class.base.refined(Parity::of(self.regular.total()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MorseTrace {
    pub target: Target,
    pub initial: Components,
    pub events: Vec<TraceEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Name {
        line: usize,
        #[source]
        source: ParseNameError,
    },
    #[error("invalid trace:\n{0}")]
    Invalid(ValidationReport),
    #[error("`{0}` is not a codimension one or two class of the complexes")]
    UnknownKey(ClassName),
    #[error("count key `{0}` must carry a parity suffix")]
    UnrefinedKey(ClassName),
    #[error("cannot join traces: {0}")]
    Join(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    ValueOrder,
    InitialState,
    Closure,
    NotMorseClass,
    RegularExceedsState,
    TransitionDelta,
    ParityFlip,
    LocalShape,
    ParityLabel,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::ValueOrder => "value-order",
            Rule::InitialState => "initial-state",
            Rule::Closure => "closure",
            Rule::NotMorseClass => "not-morse-class",
            Rule::RegularExceedsState => "regular-exceeds-state",
            Rule::TransitionDelta => "transition-delta",
            Rule::ParityFlip => "parity-flip",
            Rule::LocalShape => "local-shape",
            Rule::ParityLabel => "parity-label",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// 1-based event number, or `None` for whole-trace rules.
    pub event: Option<usize>,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.event {
            Some(i) => write!(f, "event {i}: [{}] {}", self.rule, self.message),
            None => write!(f, "trace: [{}] {}", self.rule, self.message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn signed(x: u64) -> i64 {
    i64::try_from(x).unwrap_or(i64::MAX)
}

pub fn validate_trace(t: &MorseTrace) -> ValidationReport {
    validate_trace_with(Catalog::standard(), t)
}

/// Checks every trace invariant and reports all violations.
pub fn validate_trace_with(catalog: &Catalog, t: &MorseTrace) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |event: Option<usize>, rule: Rule, message: String| {
        out.push(Violation {
            event,
            rule,
            message,
        })
    };

    if t.target == Target::Line && t.initial != Components::EMPTY {
        push(
            None,
            Rule::InitialState,
            format!("a line-target trace starts empty, not at {}", t.initial),
        );
    }

    let mut before = t.initial;
    let mut last_value: Option<f64> = None;
    for (i, e) in t.events.iter().enumerate() {
        let idx = Some(i + 1);
        if !e.value.is_finite() {
            push(
                idx,
                Rule::ValueOrder,
                format!("value {} is not finite", e.value),
            );
        } else if let Some(prev) = last_value {
            if e.value <= prev {
                push(
                    idx,
                    Rule::ValueOrder,
                    format!(
                        "value {} does not exceed the previous value {prev}",
                        e.value
                    ),
                );
            }
        }
        if e.value.is_finite() {
            last_value = Some(e.value);
        }

        let rule = match e.class.base {
            Base::BI(k) if (2..=10).contains(&k) => catalog.transition(e.class.base),
            _ => None,
        };
        let Some(rule) = rule else {
            push(
                idx,
                Rule::NotMorseClass,
                format!(
                    "{} is not a singular fiber of a stable Morse function",
                    e.class
                ),
            );
            before = e.after;
            continue;
        };

        if let Some(p) = e.class.parity {
            let expected = Parity::of(e.regular.total());
            if p != expected {
                push(
                    idx,
                    Rule::ParityLabel,
                    format!(
                        "{} carries {} regular components, so its suffix is {}",
                        e.class,
                        e.regular.total(),
                        expected.suffix()
                    ),
                );
            }
        }

        let dc = signed(e.after.circles) - signed(before.circles);
        let da = signed(e.after.arcs) - signed(before.arcs);
        if !rule.delta_circles.contains(&dc) || !rule.delta_arcs.contains(&da) {
            push(
                idx,
                Rule::TransitionDelta,
                format!(
                    "change ({dc},{da}) from {before} to {} is not allowed for {}",
                    e.after, e.class.base
                ),
            );
        }
        let flipped = before.total() % 2 != e.after.total() % 2;
        if flipped != rule.flips_component_parity {
            push(
                idx,
                Rule::ParityFlip,
                format!(
                    "component count parity {} across {} but must {}",
                    if flipped { "flips" } else { "is kept" },
                    e.class.base,
                    if rule.flips_component_parity {
                        "flip"
                    } else {
                        "be kept"
                    }
                ),
            );
        }

        match (
            before.checked_sub(&e.regular),
            e.after.checked_sub(&e.regular),
        ) {
            (Some(lo), Some(hi)) => {
                if !rule.matches_local(lo, hi) {
                    let (a, b) = rule.sides;
                    push(
                        idx,
                        Rule::LocalShape,
                        format!(
                            "the singular component joins {lo} to {hi}, but {} joins {a} to {b}",
                            e.class.base
                        ),
                    );
                }
            }
            _ => push(
                idx,
                Rule::RegularExceedsState,
                format!(
                    "{} regular components do not fit in the level sets {before} and {}",
                    e.regular, e.after
                ),
            ),
        }
        before = e.after;
    }

    let goal = match t.target {
        Target::Line => Components::EMPTY,
        Target::Circle => t.initial,
    };
    if before != goal {
        push(
            None,
            Rule::Closure,
            format!("trace ends at {before} instead of {goal}"),
        );
    }

    ValidationReport { violations: out }
}

impl MorseTrace {
    pub fn empty(target: Target) -> Self {
        Self {
            target,
            initial: Components::EMPTY,
            events: Vec::new(),
        }
    }

    pub fn final_state(&self) -> Components {
        self.events.last().map_or(self.initial, |e| e.after)
    }

    /// Parses the line-oriented trace format (see `docs/formats.md`).
    pub fn parse(text: &str) -> Result<Self, MorseError> {
        let mut target = None;
        let mut initial = None;
        let mut events = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| MorseError::Syntax { line, message };
            if let Some(rest) = content.strip_prefix("target:") {
                if target.is_some() {
                    return Err(syntax("`target:` given twice".into()));
                }
                target = Some(rest.trim().parse::<Target>().map_err(syntax)?);
            } else if let Some(rest) = content.strip_prefix("initial:") {
                if initial.is_some() {
                    return Err(syntax("`initial:` given twice".into()));
                }
                if !events.is_empty() {
                    return Err(syntax("`initial:` must come before the events".into()));
                }
                let fields = fields(rest, &["circles", "arcs"]).map_err(syntax)?;
                initial = Some(Components::new(
                    count(fields["circles"]).map_err(syntax)?,
                    count(fields["arcs"]).map_err(syntax)?,
                ));
            } else if let Some(rest) = content.strip_prefix("event") {
                if !rest.starts_with(char::is_whitespace) {
                    return Err(syntax(format!("unrecognised line `{content}`")));
                }
                let f = fields(rest, &["v", "class", "reg_circles", "reg_arcs", "after"])
                    .map_err(syntax)?;
                let value: f64 = f["v"]
                    .parse()
                    .map_err(|_| syntax(format!("`{}` is not a number", f["v"])))?;
                let class = parse_class_name(f["class"])
                    .map_err(|source| MorseError::Name { line, source })?
                    .name;
                let regular = Components::new(
                    count(f["reg_circles"]).map_err(syntax)?,
                    count(f["reg_arcs"]).map_err(syntax)?,
                );
                let after = pair(f["after"]).map_err(syntax)?;
                events.push(TraceEvent {
                    value,
                    class,
                    regular,
                    after,
                });
            } else {
                return Err(syntax(format!("unrecognised line `{content}`")));
            }
        }
        let target = target.ok_or(MorseError::Syntax {
            line: 1,
            message: "missing `target:` line".into(),
        })?;
        Ok(MorseTrace {
            target,
            initial: initial.unwrap_or(Components::EMPTY),
            events,
        })
    }

    /// Writes the trace in the format read by [`MorseTrace::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "target: {}\ninitial: circles={} arcs={}\n",
            self.target, self.initial.circles, self.initial.arcs
        );
        for e in &self.events {
            s.push_str(&format!(
                "event v={} class={} reg_circles={} reg_arcs={} after={}\n",
                e.value, e.class, e.regular.circles, e.regular.arcs, e.after
            ));
        }
        s
    }

    /// For a circle target: starts the cycle after the first event. The
    /// moved event is placed one unit after the last value.
    pub fn rotate(&self) -> MorseTrace {
        let mut events = self.events.clone();
        if events.is_empty() || self.target == Target::Line {
            return self.clone();
        }
        let mut first = events.remove(0);
        let last = events.last().map_or(first.value, |e| e.value);
        first.value = last + 1.0;
        let initial = first.after;
        events.push(first);
        MorseTrace {
            target: self.target,
            initial,
            events,
        }
    }

    /// Runs `self` then `other`. Values of `other` are shifted past those of
    /// `self`.
    pub fn concat(&self, other: &MorseTrace) -> Result<MorseTrace, MorseError> {
        if self.target != other.target {
            return Err(MorseError::Join("targets differ".into()));
        }
        if self.final_state() != other.initial {
            return Err(MorseError::Join(format!(
                "first trace ends at {} but the second starts at {}",
                self.final_state(),
                other.initial
            )));
        }
        let mut events = self.events.clone();
        let shift = match (self.events.last(), other.events.first()) {
            (Some(a), Some(b)) => a.value - b.value + 1.0,
            _ => 0.0,
        };
        events.extend(other.events.iter().map(|e| TraceEvent {
            value: e.value + shift,
            ..e.clone()
        }));
        Ok(MorseTrace {
            target: self.target,
            initial: self.initial,
            events,
        })
    }
}

impl fmt::Display for MorseTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn fields<'a>(text: &'a str, keys: &[&str]) -> Result<BTreeMap<&'a str, &'a str>, String> {
    let mut out = BTreeMap::new();
    for tok in text.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| format!("expected `key=value`, found `{tok}`"))?;
        if !keys.contains(&k) {
            return Err(format!("unknown field `{k}`"));
        }
        if out.insert(k, v).is_some() {
            return Err(format!("field `{k}` given twice"));
        }
    }
    if let Some(missing) = keys.iter().find(|k| !out.contains_key(*k)) {
        return Err(format!("missing field `{missing}`"));
    }
    Ok(out)
}

fn count(s: &str) -> Result<u64, String> {
    s.parse()
        .map_err(|_| format!("`{s}` is not a nonnegative integer"))
}

fn pair(s: &str) -> Result<Components, String> {
    let (c, a) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `<circles>,<arcs>`, found `{s}`"))?;
    Ok(Components::new(count(c)?, count(a)?))
}

/// Occurrence counts of refined fiber classes. Absent keys count zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountVector {
    counts: BTreeMap<ClassName, u64>,
}

impl CountVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &ClassName) -> u64 {
        self.counts.get(name).copied().unwrap_or(0)
    }

    /// Sum over both refinements of an unrefined name.
    pub fn get_unrefined(&self, name: &ClassName) -> u64 {
        name.refinements().iter().map(|r| self.get(r)).sum()
    }

    pub fn add(&mut self, name: ClassName, n: u64) {
        if n > 0 {
            *self.counts.entry(name).or_insert(0) += n;
        }
    }

    pub fn merge(&self, other: &CountVector) -> CountVector {
        let mut out = self.clone();
        for (&k, &n) in &other.counts {
            out.add(k, n);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.counts.values().all(|&n| n == 0)
    }

    /// Nonzero entries in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (ClassName, u64)> + '_ {
        self.counts
            .iter()
            .filter(|(_, &n)| n > 0)
            .map(|(&k, &n)| (k, n))
    }

    /// Parses `<name> = <count>` lines. Keys must be refined names of
    /// codimension one or two that belong to the complexes; repeated keys
    /// add up.
    pub fn parse(text: &str) -> Result<Self, MorseError> {
        let catalog = Catalog::standard();
        let mut out = CountVector::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| MorseError::Syntax { line, message };
            let (k, v) = content
                .split_once('=')
                .ok_or_else(|| syntax("expected `<class> = <count>`".into()))?;
            let name = parse_class_name(k.trim())
                .map_err(|source| MorseError::Name { line, source })?
                .name;
            check_key(catalog, name).map_err(|e| syntax(e.to_string()))?;
            out.add(name, count(v.trim()).map_err(syntax)?);
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        self.iter().map(|(k, n)| format!("{k} = {n}\n")).collect()
    }
}

fn check_key(catalog: &Catalog, name: ClassName) -> Result<(), MorseError> {
    if !name.is_refined() {
        return Err(MorseError::UnrefinedKey(name));
    }
    let known = catalog
        .get(name.base)
        .is_some_and(|e| !e.excluded_from_complex && (e.codim == 1 || e.codim == 2));
    if known {
        Ok(())
    } else {
        Err(MorseError::UnknownKey(name))
    }
}

/// One count per event, under the refined class given by the parity of the
/// event's regular components.
pub fn count_fibers(t: &MorseTrace) -> Result<CountVector, MorseError> {
    let report = validate_trace(t);
    if !report.is_valid() {
        return Err(MorseError::Invalid(report));
    }
    let mut out = CountVector::new();
    for e in &t.events {
        out.add(e.counted_class(), 1);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintCheck {
    pub constraint: ParityConstraint,
    pub sum: u64,
}

impl ConstraintCheck {
    pub fn holds(&self) -> bool {
        self.sum.is_multiple_of(2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoexistenceReport {
    pub checks: Vec<ConstraintCheck>,
}

impl CoexistenceReport {
    pub fn all_even(&self) -> bool {
        self.checks.iter().all(ConstraintCheck::holds)
    }

    pub fn violated(&self) -> impl Iterator<Item = (usize, &ConstraintCheck)> {
        self.checks.iter().enumerate().filter(|(_, c)| !c.holds())
    }
}

/// Evaluates each constraint on the counts. Keys and constraint terms must
/// be classes of the complexes.
pub fn check_coexistence(
    counts: &CountVector,
    cs: &[ParityConstraint],
) -> Result<CoexistenceReport, MorseError> {
    let catalog = Catalog::standard();
    for (k, _) in counts.iter() {
        check_key(catalog, k)?;
    }
    for c in cs {
        for &t in c.terms() {
            check_key(catalog, t)?;
        }
    }
    Ok(CoexistenceReport {
        checks: cs
            .iter()
            .map(|c| ConstraintCheck {
                constraint: c.clone(),
                sum: c.sum(counts),
            })
            .collect(),
    })
}

/// Events needed to reach `goal` by births and deaths alone.
fn distance(s: Components, goal: Components) -> u64 {
    s.circles.abs_diff(goal.circles) + s.arcs.abs_diff(goal.arcs)
}

/// Every event that can happen at level set `s`: class, regular
/// components, state after.
fn moves(catalog: &Catalog, s: Components) -> Vec<(Base, Components, Components)> {
    let mut out = Vec::new();
    for k in 2..=10 {
        let base = Base::BI(k);
        let Some(rule) = catalog.transition(base) else {
            continue;
        };
        for (from, to) in rule.orientations() {
            if let Some(reg) = s.checked_sub(&from) {
                out.push((base, reg, reg.add(&to)));
            }
        }
    }
    out
}

/// A valid trace with at most `budget` events, generated by a random walk
/// over the local transition rules. The walk never moves further from its
/// closing state than the remaining budget can undo, so it always closes.
/// The target is chosen from the seed; circle targets start from a small
/// random level set.
pub fn random_trace(seed: u64, budget: usize) -> MorseTrace {
    let catalog = Catalog::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = if rng.gen_bool(0.5) {
        Target::Line
    } else {
        Target::Circle
    };
    let initial = match target {
        Target::Line => Components::EMPTY,
        Target::Circle => Components::new(rng.gen_range(0..3), rng.gen_range(0..3)),
    };
    let mut state = initial;
    let mut events = Vec::new();
    let mut value = 0.0;
    for step in 0..budget {
        let remaining = (budget - step - 1) as u64;
        if state == initial && !events.is_empty() && rng.gen_bool(0.05) {
            break;
        }
        let options: Vec<_> = moves(catalog, state)
            .into_iter()
            .filter(|&(_, _, after)| distance(after, initial) <= remaining)
            .collect();
        let Some(&(base, regular, after)) = options.choose(&mut rng) else {
            break;
        };
        value += f64::from(rng.gen_range(1u8..=4)) * 0.25;
        let class = base.refined(Parity::of(regular.total()));
        events.push(TraceEvent {
            value,
            class,
            regular,
            after,
        });
        state = after;
    }
    MorseTrace {
        target,
        initial,
        events,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Base;

    fn ev(v: f64, class: &str, reg: (u64, u64), after: (u64, u64)) -> TraceEvent {
        TraceEvent {
            value: v,
            class: class.parse().unwrap(),
            regular: Components::new(reg.0, reg.1),
            after: Components::new(after.0, after.1),
        }
    }

    fn line(events: Vec<TraceEvent>) -> MorseTrace {
        MorseTrace {
            target: Target::Line,
            initial: Components::EMPTY,
            events,
        }
    }

    #[test]
    fn empty_line_trace_is_valid() {
        let t = line(vec![]);
        assert!(validate_trace(&t).is_valid());
        assert!(count_fibers(&t).unwrap().is_zero());
    }

    #[test]
    fn sphere_birth_and_death() {
        let t = line(vec![
            ev(0.0, "bI^2", (0, 0), (1, 0)),
            ev(1.0, "bI^2", (0, 0), (0, 0)),
        ]);
        assert!(validate_trace(&t).is_valid(), "{}", validate_trace(&t));
        let counts = count_fibers(&t).unwrap();
        assert_eq!(counts.get(&"bI^2_e".parse().unwrap()), 2);
        assert_eq!(counts.iter().count(), 1);
    }

    #[test]
    fn missing_parity_flip_is_reported() {
        let t = line(vec![ev(0.0, "bI^2", (0, 0), (0, 0))]);
        let r = validate_trace(&t);
        assert!(r.has(Rule::ParityFlip));
        assert!(r.violations.iter().any(|v| v.event == Some(1)));
        assert!(matches!(count_fibers(&t), Err(MorseError::Invalid(_))));
    }

    #[test]
    fn each_rule_can_fire() {
        let cases: Vec<(MorseTrace, Rule)> = vec![
            (
                line(vec![
                    ev(1.0, "bI^2", (0, 0), (1, 0)),
                    ev(1.0, "bI^2", (0, 0), (0, 0)),
                ]),
                Rule::ValueOrder,
            ),
            (
                MorseTrace {
                    target: Target::Line,
                    initial: Components::new(1, 0),
                    events: vec![ev(0.0, "bI^2", (0, 0), (0, 0))],
                },
                Rule::InitialState,
            ),
            (line(vec![ev(0.0, "bI^2", (0, 0), (1, 0))]), Rule::Closure),
            (
                line(vec![ev(0.0, "bII^a", (0, 0), (0, 0))]),
                Rule::NotMorseClass,
            ),
            (
                line(vec![ev(0.0, "bI^1", (0, 0), (0, 0))]),
                Rule::NotMorseClass,
            ),
            (
                line(vec![ev(0.0, "bI^2", (1, 0), (1, 0))]),
                Rule::RegularExceedsState,
            ),
            (
                line(vec![ev(0.0, "bI^6", (0, 0), (1, 0))]),
                Rule::TransitionDelta,
            ),
            (
                line(vec![
                    ev(0.0, "bI^2_o", (0, 0), (1, 0)),
                    ev(1.0, "bI^2", (0, 0), (0, 0)),
                ]),
                Rule::ParityLabel,
            ),
            (
                // Three circles merging: right counts, wrong shape.
                MorseTrace {
                    target: Target::Circle,
                    initial: Components::new(3, 0),
                    events: vec![
                        ev(0.0, "bI^3", (0, 0), (2, 0)),
                        ev(1.0, "bI^3", (0, 0), (3, 0)),
                    ],
                },
                Rule::LocalShape,
            ),
        ];
        for (t, rule) in cases {
            let r = validate_trace(&t);
            assert!(r.has(rule), "{rule}: {r}");
        }
    }

    #[test]
    fn parse_round_trip() {
        let text = "# comment\ntarget: line\ninitial: circles=0 arcs=0\n\
                    event v=0.5 class=bI^6 reg_circles=0 reg_arcs=0 after=0,1\n\
                    event v=1 class=bI^6_e reg_circles=0 reg_arcs=0 after=0,0  # arc dies\n";
        let t = MorseTrace::parse(text).unwrap();
        assert_eq!(t.events.len(), 2);
        assert!(validate_trace(&t).is_valid());
        assert_eq!(MorseTrace::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let bad = [
            ("initial: circles=0 arcs=0\n", 1),
            ("target: plane\n", 1),
            (
                "target: line\nevent v=0 class=bI^2 reg_circles=0 after=1,0\n",
                2,
            ),
            (
                "target: line\nevent v=0 class=bI^99 reg_circles=0 reg_arcs=0 after=1,0\n",
                2,
            ),
            (
                "target: line\nevent v=x class=bI^2 reg_circles=0 reg_arcs=0 after=1,0\n",
                2,
            ),
            (
                "target: line\n\nevent v=0 class=bI^2 reg_circles=0 reg_arcs=0 after=1\n",
                3,
            ),
            ("target: line\nstuff\n", 2),
        ];
        for (text, line) in bad {
            match MorseTrace::parse(text) {
                Err(MorseError::Syntax { line: l, .. }) | Err(MorseError::Name { line: l, .. }) => {
                    assert_eq!(l, line, "{text}")
                }
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn count_file_parsing() {
        let c = CountVector::parse("bII^{2,9}_o = 1\nbII^a_e=2\nbII^a_e = 1\n").unwrap();
        assert_eq!(c.get(&"bII^a_e".parse().unwrap()), 3);
        assert_eq!(c.to_text(), "bII^{2,9}_o = 1\nbII^a_e = 3\n");
        assert!(matches!(
            CountVector::parse("bII^a = 1"),
            Err(MorseError::Syntax { line: 1, .. })
        ));
        assert!(CountVector::parse("b0_o = 1").is_err());
        assert!(CountVector::parse("bI^1_o = 1").is_err());
        assert!(CountVector::parse("bII^a_o = -1").is_err());
    }

    #[test]
    fn coexistence_all_zero_is_even() {
        let cs = vec![ParityConstraint::parse("bII^a + bII^b").unwrap()];
        let r = check_coexistence(&CountVector::new(), &cs).unwrap();
        assert!(r.all_even());
        let mut counts = CountVector::new();
        counts.add(Base::BIILetter('a').refined(Parity::Odd), 1);
        assert!(!check_coexistence(&counts, &cs).unwrap().all_even());
        let mut bad = CountVector::new();
        bad.add(Base::B0.refined(Parity::Odd), 1);
        assert!(matches!(
            check_coexistence(&bad, &cs),
            Err(MorseError::UnknownKey(_))
        ));
    }

    #[test]
    fn generator_edge_cases() {
        assert!(random_trace(0, 0).events.is_empty());
        assert!(
            random_trace(0, 1).events.is_empty() || random_trace(0, 1).target == Target::Circle
        );
        assert_eq!(random_trace(7, 40), random_trace(7, 40));
        for seed in 0..200 {
            let t = random_trace(seed, 30);
            assert!(t.events.len() <= 30);
            assert!(
                validate_trace(&t).is_valid(),
                "seed {seed}: {}",
                validate_trace(&t)
            );
        }
    }

    #[test]
    fn rotation_and_concatenation() {
        let t = (0..100)
            .map(|s| random_trace(s, 20))
            .find(|t| t.target == Target::Circle && t.events.len() > 2)
            .unwrap();
        let r = t.rotate();
        assert!(validate_trace(&r).is_valid(), "{}", validate_trace(&r));
        assert_eq!(count_fibers(&r).unwrap(), count_fibers(&t).unwrap());
        let j = t.concat(&t).unwrap();
        assert!(validate_trace(&j).is_valid());
        let c = count_fibers(&t).unwrap();
        assert_eq!(count_fibers(&j).unwrap(), c.merge(&c));
        assert!(t.concat(&MorseTrace::empty(Target::Line)).is_err());
    }
}
