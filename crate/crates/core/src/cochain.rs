//! Finite cochain complexes over GF(2) with named bases.
//!
//! Cochain text syntax: `name (+ name)*`, where each name is a class name
//! with an optional `_o`/`_e` suffix. An unrefined name stands for the sum of
//! both refinements, and repeated terms cancel. The empty cochain is written
//! `0`.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::catalog::{parse_class_name, ClassName, ParseNameError};
use crate::gf2::{echelon, BitMatrix, BitVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainError {
    #[error(transparent)]
    Name(#[from] ParseNameError),
    #[error("cochain mixes degrees {0} and {1}")]
    MixedDegrees(usize, usize),
    #[error("the zero cochain needs an explicit degree")]
    MissingDegree,
    #[error("empty term in cochain expression `{0}`")]
    EmptyTerm(String),
    #[error("{name} is not a basis element in degree {degree}")]
    NotInBasis { name: ClassName, degree: usize },
    #[error("cochain of degree {found} used where degree {expected} is required")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("cochain in degree {degree} is not a cocycle")]
    NotCocycle { degree: usize },
    #[error("coboundary in degree {degree} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        degree: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("composite of coboundaries out of degree {degree} is nonzero")]
    NonzeroComposite { degree: usize },
    #[error("cochain map does not commute with coboundaries in degree {degree}")]
    NotCommuting { degree: usize },
}

/// A GF(2) formal sum of refined class names in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    support: BTreeSet<ClassName>,
}

impl Cochain {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            support: BTreeSet::new(),
        }
    }

    /// Builds a cochain from names; unrefined names expand, repeats cancel.
    pub fn from_names<I: IntoIterator<Item = ClassName>>(
        degree: usize,
        names: I,
    ) -> Result<Self, CochainError> {
        let mut c = Self::zero(degree);
        for n in names {
            if usize::from(n.codim()) != degree {
                return Err(CochainError::MixedDegrees(degree, n.codim().into()));
            }
            for r in n.refinements() {
                c.toggle(r);
            }
        }
        Ok(c)
    }

    /// Parses the cochain text syntax, inferring the degree from the names.
    pub fn parse(text: &str) -> Result<Self, CochainError> {
        Self::parse_terms(text, None)
    }

    /// Parses a cochain that must live in `degree`; accepts `0`.
    pub fn parse_in_degree(text: &str, degree: usize) -> Result<Self, CochainError> {
        let c = Self::parse_terms(text, Some(degree))?;
        if c.degree != degree {
            return Err(CochainError::DegreeMismatch {
                expected: degree,
                found: c.degree,
            });
        }
        Ok(c)
    }

    fn parse_terms(text: &str, degree: Option<usize>) -> Result<Self, CochainError> {
        let trimmed = text.trim();
        if trimmed == "0" {
            return degree.map(Self::zero).ok_or(CochainError::MissingDegree);
        }
        let mut names = Vec::new();
        for term in trimmed.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(CochainError::EmptyTerm(text.to_string()));
            }
            names.push(parse_class_name(term)?.name);
        }
        let first = usize::from(names[0].codim());
        Self::from_names(degree.unwrap_or(first), names)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Support as refined names in canonical order.
    pub fn support(&self) -> &BTreeSet<ClassName> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains(&self, name: &ClassName) -> bool {
        self.support.contains(name)
    }

    fn toggle(&mut self, name: ClassName) {
        if !self.support.remove(&name) {
            self.support.insert(name);
        }
    }

    /// Sum of two cochains of the same degree.
    pub fn add(&self, other: &Cochain) -> Result<Cochain, CochainError> {
        if self.degree != other.degree {
            return Err(CochainError::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(Cochain {
            degree: self.degree,
            support: self
                .support
                .symmetric_difference(&other.support)
                .copied()
                .collect(),
        })
    }

    /// Swaps `_o` and `_e` on every term.
    pub fn parity_swapped(&self) -> Cochain {
        Cochain {
            degree: self.degree,
            support: self
                .support
                .iter()
                .map(|n| ClassName {
                    base: n.base,
                    parity: n.parity.map(|p| p.flipped()),
                })
                .collect(),
        }
    }

    /// Text form with `_o`/`_e` pairs written as the unrefined name.
    pub fn compact(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<ClassName> = Vec::new();
        for n in &self.support {
            let pair = n.refinements();
            let base = n.unrefined();
            if terms.last() == Some(&base) {
                continue;
            }
            let full = base.refinements();
            if full.iter().all(|r| self.support.contains(r)) {
                terms.push(base);
            } else {
                terms.extend(pair);
            }
        }
        join_terms(&terms)
    }
}

fn join_terms(terms: &[ClassName]) -> String {
    terms
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" + ")
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<ClassName> = self.support.iter().copied().collect();
        f.write_str(&join_terms(&terms))
    }
}

/// Graded named bases with coboundary matrices; `deltas[k]` maps degree `k`
/// to degree `k + 1`. Degrees past the stored range are zero spaces, and the
/// coboundary out of the top stored degree is zero.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    bases: Vec<Vec<ClassName>>,
    deltas: Vec<BitMatrix>,
    index: Vec<BTreeMap<ClassName, usize>>,
}

/// Dimension and canonical generators of one cohomology group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologySummary {
    pub degree: usize,
    pub dimension: usize,
    pub generators: Vec<Cochain>,
}

impl CochainComplex {
    /// Assembles a complex without validating it; see [`CochainComplex::check`].
    pub fn from_parts(bases: Vec<Vec<ClassName>>, deltas: Vec<BitMatrix>) -> Self {
        let index = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, n)| (*n, i)).collect())
            .collect();
        Self {
            bases,
            deltas,
            index,
        }
    }

    pub fn top_degree(&self) -> usize {
        self.bases.len().saturating_sub(1)
    }

    pub fn basis(&self, degree: usize) -> &[ClassName] {
        self.bases.get(degree).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.basis(degree).len()
    }

    /// Coboundary out of `degree`, as a `dim(k+1) x dim(k)` matrix.
    pub fn delta(&self, degree: usize) -> Cow<'_, BitMatrix> {
        match self.deltas.get(degree) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(BitMatrix::zeros(self.dim(degree + 1), self.dim(degree))),
        }
    }

    /// Verifies matrix shapes and that consecutive coboundaries compose to zero.
    pub fn check(&self) -> Result<(), CochainError> {
        for (k, m) in self.deltas.iter().enumerate() {
            let (er, ec) = (self.dim(k + 1), self.dim(k));
            if m.rows() != er || m.cols() != ec {
                return Err(CochainError::ShapeMismatch {
                    degree: k,
                    rows: m.rows(),
                    cols: m.cols(),
                    expected_rows: er,
                    expected_cols: ec,
                });
            }
        }
        for k in 0..self.deltas.len().saturating_sub(1) {
            let composite = self.deltas[k + 1]
                .mul(&self.deltas[k])
                .expect("shapes were checked");
            if !composite.is_zero() {
                return Err(CochainError::NonzeroComposite { degree: k });
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    pub fn to_vector(&self, c: &Cochain) -> Result<BitVector, CochainError> {
        let idx = self.index.get(c.degree());
        let mut v = BitVector::zeros(self.dim(c.degree()));
        for name in c.support() {
            let i = idx
                .and_then(|m| m.get(name))
                .ok_or(CochainError::NotInBasis {
                    name: *name,
                    degree: c.degree(),
                })?;
            v.set(*i, true);
        }
        Ok(v)
    }

    /// # Panics
    /// Panics if `v` has the wrong length for `degree`.
    pub fn from_vector(&self, degree: usize, v: &BitVector) -> Cochain {
        assert_eq!(
            v.len(),
            self.dim(degree),
            "vector length does not match degree {degree}"
        );
        let basis = self.basis(degree);
        Cochain {
            degree,
            support: v.ones().map(|i| basis[i]).collect(),
        }
    }

    /// Parses cochain text against this complex, checking basis membership.
    pub fn parse_cochain(&self, text: &str, degree: usize) -> Result<Cochain, CochainError> {
        let c = Cochain::parse_in_degree(text, degree)?;
        self.to_vector(&c)?;
        Ok(c)
    }

    pub fn coboundary(&self, c: &Cochain) -> Result<Cochain, CochainError> {
        let v = self.to_vector(c)?;
        let image = self
            .delta(c.degree())
            .mul_vec(&v)
            .expect("vector built for this degree");
        Ok(self.from_vector(c.degree() + 1, &image))
    }

    pub fn is_cocycle(&self, c: &Cochain) -> Result<bool, CochainError> {
        Ok(self.coboundary(c)?.is_zero())
    }

    /// True if `c` is the coboundary of some cochain one degree down.
    pub fn is_coboundary(&self, c: &Cochain) -> Result<bool, CochainError> {
        let v = self.to_vector(c)?;
        if c.degree() == 0 {
            return Ok(v.is_zero());
        }
        Ok(self
            .delta(c.degree() - 1)
            .solve(&v)
            .expect("vector built for this degree")
            .is_some())
    }

    /// Whether two cocycles differ by a coboundary.
    pub fn cohomologous(&self, a: &Cochain, b: &Cochain) -> Result<bool, CochainError> {
        for c in [a, b] {
            if !self.is_cocycle(c)? {
                return Err(CochainError::NotCocycle { degree: c.degree() });
            }
        }
        self.is_coboundary(&a.add(b)?)
    }

    fn coboundary_echelon(&self, degree: usize) -> crate::gf2::Echelon {
        if degree == 0 {
            return echelon(self.dim(0), &[]);
        }
        echelon(self.dim(degree), &self.delta(degree - 1).image_basis())
    }

    /// `dim ker δ_k - rank δ_{k-1}`.
    pub fn betti(&self, degree: usize) -> usize {
        let kernel = self.delta(degree).kernel_basis().len();
        let boundary = if degree == 0 {
            0
        } else {
            self.delta(degree - 1).rank()
        };
        kernel - boundary
    }

    /// Canonical cocycle representatives of a basis of `H^k`.
    ///
    /// Each kernel vector is reduced against the echelon form of the
    /// coboundaries, and the reduced vectors are put in reduced row echelon
    /// form. The result depends only on the two subspaces and the basis order.
    pub fn cohomology_basis(&self, degree: usize) -> CohomologySummary {
        let boundaries = self.coboundary_echelon(degree);
        let reduced: Vec<BitVector> = self
            .delta(degree)
            .kernel_basis()
            .iter()
            .map(|z| boundaries.reduce(z))
            .collect();
        let generators: Vec<Cochain> = echelon(self.dim(degree), &reduced)
            .rows
            .iter()
            .map(|v| self.from_vector(degree, v))
            .collect();
        CohomologySummary {
            degree,
            dimension: generators.len(),
            generators,
        }
    }

    /// Expresses a cocycle in terms of the canonical cohomology generators.
    /// Returns the coefficient of each generator.
    pub fn cohomology_coordinates(&self, c: &Cochain) -> Result<Vec<bool>, CochainError> {
        if !self.is_cocycle(c)? {
            return Err(CochainError::NotCocycle { degree: c.degree() });
        }
        let degree = c.degree();
        let boundaries = self.coboundary_echelon(degree);
        let summary = self.cohomology_basis(degree);
        let gens: Vec<BitVector> = summary
            .generators
            .iter()
            .map(|g| self.to_vector(g).expect("generator lies in the basis"))
            .collect();
        // Generators are in echelon form with zeros on boundary pivots, so the
        // coefficients can be read off their own pivots.
        let target = boundaries.reduce(&self.to_vector(c)?);
        let gen_ech = echelon(self.dim(degree), &gens);
        let coords: Vec<bool> = gen_ech.pivots.iter().map(|&p| target.get(p)).collect();
        debug_assert!(gen_ech.reduce(&target).is_zero());
        Ok(coords)
    }
}

/// A degree-preserving linear map between two complexes that commutes with
/// their coboundaries. Degrees without a stored matrix map to zero.
#[derive(Debug, Clone)]
pub struct CochainMap {
    source: CochainComplex,
    target: CochainComplex,
    matrices: Vec<BitMatrix>,
}

impl CochainMap {
    pub fn new(
        source: &CochainComplex,
        target: &CochainComplex,
        matrices: Vec<BitMatrix>,
    ) -> Result<Self, CochainError> {
        let map = Self {
            source: source.clone(),
            target: target.clone(),
            matrices,
        };
        let top = source.top_degree().max(target.top_degree());
        for k in 0..=top {
            let m = map.matrix(k);
            let (er, ec) = (target.dim(k), source.dim(k));
            if m.rows() != er || m.cols() != ec {
                return Err(CochainError::ShapeMismatch {
                    degree: k,
                    rows: m.rows(),
                    cols: m.cols(),
                    expected_rows: er,
                    expected_cols: ec,
                });
            }
        }
        for k in 0..=top {
            let left = target.delta(k).mul(&map.matrix(k)).expect("shapes checked");
            let right = map
                .matrix(k + 1)
                .mul(&source.delta(k))
                .expect("shapes checked");
            if left != right {
                return Err(CochainError::NotCommuting { degree: k });
            }
        }
        Ok(map)
    }

    /// Map sending each basis name to the same name in the target, or to
    /// zero when the name is absent there.
    pub fn by_names(
        source: &CochainComplex,
        target: &CochainComplex,
    ) -> Result<Self, CochainError> {
        let top = source.top_degree().max(target.top_degree());
        let matrices = (0..=top)
            .map(|k| {
                let mut m = BitMatrix::zeros(target.dim(k), source.dim(k));
                for (j, name) in source.basis(k).iter().enumerate() {
                    if let Some(&i) = target.index.get(k).and_then(|idx| idx.get(name)) {
                        m.set(i, j, true);
                    }
                }
                m
            })
            .collect();
        Self::new(source, target, matrices)
    }

    pub fn source(&self) -> &CochainComplex {
        &self.source
    }

    pub fn target(&self) -> &CochainComplex {
        &self.target
    }

    pub fn matrix(&self, degree: usize) -> Cow<'_, BitMatrix> {
        match self.matrices.get(degree) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(BitMatrix::zeros(
                self.target.dim(degree),
                self.source.dim(degree),
            )),
        }
    }

    pub fn apply(&self, c: &Cochain) -> Result<Cochain, CochainError> {
        let v = self.source.to_vector(c)?;
        let image = self.matrix(c.degree()).mul_vec(&v).expect("shapes checked");
        Ok(self.target.from_vector(c.degree(), &image))
    }
}
