//! Dense linear algebra over the two-element field.
//!
//! Vectors are packed into `u64` words; matrices are stored as a list of
//! packed rows. Everything here is small (the largest matrix in this crate is
//! 160 x 18), so no sparse representation is used.
//!
//! Elimination always picks the first nonzero entry in row-major order as the
//! pivot, so every basis returned by this module is the reduced row echelon
//! form of the relevant subspace and is bit-for-bit reproducible.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    /// Builds a vector from explicit bits.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Builds a vector of length `len` with ones at `indices`.
    /// Repeated indices cancel.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// # Panics
    /// Panics if `i >= len`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// In-place addition.
    ///
    /// # Panics
    /// Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    fn with_extra_bit(&self, bit: bool) -> BitVector {
        let mut out = BitVector::zeros(self.len + 1);
        for i in self.ones() {
            out.set(i, true);
        }
        out.set(self.len, bit);
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

/// A `rows x cols` matrix over GF(2), acting on column vectors of length `cols`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    /// The nonzero rows, in pivot order.
    pub rows: Vec<BitVector>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the echelon rows, clearing every pivot position.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out.get(p) {
                out.xor_assign(row);
            }
        }
        out
    }

    /// True if `v` lies in the span of the rows.
    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Reduced row echelon form of the span of `vectors`, all of length `len`.
pub fn echelon(len: usize, vectors: &[BitVector]) -> Echelon {
    let mut rows: Vec<BitVector> = vectors.to_vec();
    for r in &rows {
        assert_eq!(r.len(), len, "echelon input of wrong length");
    }
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..len {
        let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, found);
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    Echelon { rows, pivots }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from its rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self, Gf2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Builds a matrix from its columns; every column must have length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Gf2Error::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bits((0..self.rows).map(|r| self.get(r, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix-vector product `Mv`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(BitVector::from_bits(self.data.iter().map(|row| row.dot(v))))
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if other.rows != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for k in row.ones() {
                out.data[r].xor_assign(&other.data[k]);
            }
        }
        Ok(out)
    }

    pub fn echelon(&self) -> Echelon {
        echelon(self.cols, &self.data)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of `{v : Mv = 0}`, one vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::unit(self.cols, f);
                for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                    if row.get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Reduced basis of the column space.
    pub fn image_basis(&self) -> Vec<BitVector> {
        self.transpose().echelon().rows
    }

    /// Finds `x` with `Mx = b`, or `None` when `b` is not in the image.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>, Gf2Error> {
        if b.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let augmented: Vec<BitVector> = self
            .data
            .iter()
            .enumerate()
            .map(|(r, row)| row.with_extra_bit(b.get(r)))
            .collect();
        let ech = echelon(self.cols + 1, &augmented);
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            if row.get(self.cols) {
                x.set(p, true);
            }
        }
        debug_assert_eq!(self.mul_vec(&x).ok().as_ref(), Some(b));
        Ok(Some(x))
    }

    /// Returns the matrix with the listed rows removed.
    pub fn without_rows(&self, drop: &[usize]) -> BitMatrix {
        let data: Vec<BitVector> = self
            .data
            .iter()
            .enumerate()
            .filter(|(r, _)| !drop.contains(r))
            .map(|(_, row)| row.clone())
            .collect();
        BitMatrix {
            rows: data.len(),
            cols: self.cols,
            data,
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            write!(f, "  ")?;
            for b in row.bits() {
                f.write_str(if b { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
