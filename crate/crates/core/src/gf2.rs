//! Exact linear algebra over the two-element field.
//!
//! Vectors are word-packed bitsets; matrices are stored as packed rows.
//! Every routine is deterministic: elimination always pivots on the
//! lowest-index column that still has a nonzero entry, and among candidate
//! rows picks the first one, so particular solutions and certificates are
//! stable across runs.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A vector over GF(2). Addition is XOR.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(WORD)], len }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in &mut v.words {
            *w = u64::MAX;
        }
        v.mask_tail();
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from 0/1 values; anything nonzero counts as 1.
    pub fn from_u8s(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// Indicator vector of `support`. Repeated indices cancel in pairs.
    pub fn from_support<I: IntoIterator<Item = usize>>(len: usize, support: I) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.flip(i);
        }
        v
    }

    /// Packs the low `len` bits of `bits` (bit `i` of the integer is coordinate `i`).
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = bits;
            v.mask_tail();
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Sum of all coordinates mod 2.
    pub fn parity(&self) -> bool {
        self.count_ones() % 2 == 1
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "length mismatch in and");
        BitVector { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(), len: self.len }
    }

    pub fn not(&self) -> BitVector {
        let mut out = BitVector { words: self.words.iter().map(|w| !w).collect(), len: self.len };
        out.mask_tail();
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    /// Indices of the set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn to_u8s(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Keeps coordinates where `mask` is set.
    pub fn masked(&self, mask: &BitVector) -> BitVector {
        self.and(mask)
    }

    /// Restricts to the listed coordinates, in order.
    pub fn select(&self, indices: &[usize]) -> BitVector {
        let mut out = BitVector::zeros(indices.len());
        for (k, &i) in indices.iter().enumerate() {
            if self.get(i) {
                out.set(k, true);
            }
        }
        out
    }

    fn mask_tail(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

/// Orders by length, then lexicographically from index 0.
impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len.cmp(&other.len).then_with(|| {
            match self.words.iter().zip(&other.words).find(|(a, b)| a != b) {
                None => std::cmp::Ordering::Equal,
                // the lowest differing bit decides; a set bit sorts later
                Some((a, b)) => {
                    let low = (a ^ b).trailing_zeros();
                    (a >> low & 1).cmp(&(b >> low & 1))
                }
            }
        })
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_u8s().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(d)?;
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(serde::de::Error::custom(format!("bit value {b} is not 0 or 1")));
        }
        Ok(BitVector::from_u8s(&bits))
    }
}

/// A dense matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows: vec![BitVector::zeros(cols); rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: (0..n).map(|i| BitVector::unit(n, i)).collect(), cols: n }
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
        }
        Ok(Self { rows, cols })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, got: c.len() });
            }
            for i in c.iter_ones() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    pub fn from_nested(bits: &[&[u8]]) -> Self {
        let cols = bits.first().map_or(0, |r| r.len());
        let rows = bits
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix literal");
                BitVector::from_u8s(r)
            })
            .collect();
        Self { rows, cols }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        self.rows[i].flip(j);
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut c = BitVector::zeros(self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn columns(&self) -> Vec<BitVector> {
        self.transpose().rows
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    /// Matrix-vector product: AND then XOR-fold, row by row.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let mut out = BitVector::zeros(self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `yᵀ M`.
    pub fn left_mul_vec(&self, y: &BitVector) -> Result<BitVector> {
        if y.len() != self.rows() {
            return Err(Error::DimensionMismatch { expected: self.rows(), got: y.len() });
        }
        let mut out = BitVector::zeros(self.cols);
        for i in y.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows() {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows() });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVector::zeros(other.cols);
                for k in r.iter_ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix { rows, cols: other.cols })
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.cols });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix { rows, cols: self.cols })
    }

    /// Keeps only the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        BitMatrix { rows: self.rows.iter().map(|r| r.select(cols)).collect(), cols: cols.len() }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with the row operations that produced it.
struct Reduction {
    rows: Vec<BitVector>,
    rhs: BitVector,
    /// `combos[i]` expresses reduced row `i` as a combination of original rows.
    combos: Vec<BitVector>,
    pivots: Vec<usize>,
}

fn reduce(m: &BitMatrix, b: Option<&BitVector>, track: bool) -> Reduction {
    let n = m.rows();
    let mut rows = m.rows.clone();
    let mut rhs = b.cloned().unwrap_or_else(|| BitVector::zeros(n));
    let mut combos: Vec<BitVector> = if track { (0..n).map(|i| BitVector::unit(n, i)).collect() } else { Vec::new() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(p, r);
        if track {
            combos.swap(p, r);
        }
        let (rp, rr) = (rhs.get(p), rhs.get(r));
        rhs.set(p, rr);
        rhs.set(r, rp);

        let pivot_row = rows[r].clone();
        let pivot_rhs = rhs.get(r);
        let pivot_combo = if track { Some(combos[r].clone()) } else { None };
        for i in 0..n {
            if i != r && rows[i].get(c) {
                rows[i].xor_assign(&pivot_row);
                if pivot_rhs {
                    rhs.flip(i);
                }
                if let Some(pc) = &pivot_combo {
                    combos[i].xor_assign(pc);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Reduction { rows, rhs, combos, pivots }
}

/// GF(2) rank.
pub fn rank(m: &BitMatrix) -> usize {
    reduce(m, None, false).pivots.len()
}

fn kernel_from(red: &Reduction, cols: usize) -> Vec<BitVector> {
    let mut is_pivot = vec![false; cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVector::unit(cols, f);
            for (t, &p) in red.pivots.iter().enumerate() {
                if red.rows[t].get(f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

/// Basis of `{v : Mv = 0}`, one vector per free column in ascending order.
pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    kernel_from(&reduce(m, None, false), m.cols())
}

/// Outcome of solving `Mx = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffineSolution {
    /// One particular solution (free variables set to zero) and a kernel basis.
    Solvable { particular: BitVector, kernel: Vec<BitVector> },
    /// A row combination `y` with `yᵀM = 0` and `yᵀb = 1`.
    Infeasible { certificate: BitVector },
}

impl AffineSolution {
    pub fn particular(&self) -> Option<&BitVector> {
        match self {
            AffineSolution::Solvable { particular, .. } => Some(particular),
            AffineSolution::Infeasible { .. } => None,
        }
    }

    pub fn is_solvable(&self) -> bool {
        matches!(self, AffineSolution::Solvable { .. })
    }
}

pub fn solve_affine(m: &BitMatrix, b: &BitVector) -> Result<AffineSolution> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch { expected: m.rows(), got: b.len() });
    }
    let red = reduce(m, Some(b), true);
    let r = red.pivots.len();
    if let Some(i) = (r..m.rows()).find(|&i| red.rhs.get(i)) {
        return Ok(AffineSolution::Infeasible { certificate: red.combos[i].clone() });
    }
    let mut x = BitVector::zeros(m.cols());
    for (t, &p) in red.pivots.iter().enumerate() {
        if red.rhs.get(t) {
            x.set(p, true);
        }
    }
    Ok(AffineSolution::Solvable { particular: x, kernel: kernel_from(&red, m.cols()) })
}

/// Incremental echelon basis keyed by lowest set bit.
#[derive(Debug, Clone)]
struct Echelon {
    by_pivot: Vec<Option<usize>>,
    rows: Vec<(BitVector, BitVector)>,
}

impl Echelon {
    fn new(len: usize) -> Self {
        Self { by_pivot: vec![None; len], rows: Vec::new() }
    }

    /// Reduces `v`, accumulating tags. Returns the residue and its tag.
    fn reduce(&self, mut v: BitVector, mut tag: BitVector) -> (BitVector, BitVector) {
        while let Some(p) = v.first_one() {
            match self.by_pivot[p] {
                Some(idx) => {
                    v.xor_assign(&self.rows[idx].0);
                    tag.xor_assign(&self.rows[idx].1);
                }
                None => break,
            }
        }
        (v, tag)
    }

    /// Inserts `v` with `tag`; returns true if it was independent.
    fn insert(&mut self, v: BitVector, tag: BitVector) -> bool {
        let (v, tag) = self.reduce(v, tag);
        match v.first_one() {
            Some(p) => {
                self.by_pivot[p] = Some(self.rows.len());
                self.rows.push((v, tag));
                true
            }
            None => false,
        }
    }

    fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v.clone(), BitVector::zeros(0)).0.is_zero()
    }
}

/// A basis of `span(Z)/span(B)` with a coordinate map.
#[derive(Debug, Clone)]
pub struct QuotientBasis {
    ambient: usize,
    echelon: Echelon,
    reps: Vec<BitVector>,
    /// Tag positions of the representatives.
    rep_tags: Vec<usize>,
}

impl QuotientBasis {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.ambient
    }

    pub fn representatives(&self) -> &[BitVector] {
        &self.reps
    }

    /// Coordinates of `v ∈ span(Z)` with respect to the representatives.
    pub fn coords(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: v.len() });
        }
        let tag_len = self.echelon.rows.first().map_or(0, |r| r.1.len());
        let (residue, tag) = self.echelon.reduce(v.clone(), BitVector::zeros(tag_len));
        if !residue.is_zero() {
            return Err(Error::NotInSpan);
        }
        let mut out = BitVector::zeros(self.reps.len());
        for (k, &t) in self.rep_tags.iter().enumerate() {
            if tag.get(t) {
                out.set(k, true);
            }
        }
        Ok(out)
    }

    /// Sum of representatives selected by `coords`.
    pub fn element(&self, coords: &BitVector) -> BitVector {
        let mut v = BitVector::zeros(self.ambient);
        for k in coords.iter_ones() {
            v.xor_assign(&self.reps[k]);
        }
        v
    }

    /// True iff `v` lies in `span(Z)`.
    pub fn contains(&self, v: &BitVector) -> bool {
        v.len() == self.ambient && self.echelon.contains(v)
    }
}

/// Basis of `span(Z)/span(B)`. Representatives are the first vectors of `Z`
/// (in order) that are independent modulo `span(B)` and the earlier picks.
pub fn quotient_basis(ambient: usize, z: &[BitVector], b: &[BitVector]) -> Result<QuotientBasis> {
    for v in z.iter().chain(b) {
        if v.len() != ambient {
            return Err(Error::DimensionMismatch { expected: ambient, got: v.len() });
        }
    }
    let mut z_span = Echelon::new(ambient);
    for v in z {
        z_span.insert(v.clone(), BitVector::zeros(0));
    }
    if b.iter().any(|v| !z_span.contains(v)) {
        return Err(Error::NotSubspace);
    }

    let tag_len = b.len() + z.len();
    let mut echelon = Echelon::new(ambient);
    for (i, v) in b.iter().enumerate() {
        echelon.insert(v.clone(), BitVector::unit(tag_len, i));
    }
    let mut reps = Vec::new();
    let mut rep_tags = Vec::new();
    for (j, v) in z.iter().enumerate() {
        let t = b.len() + j;
        if echelon.insert(v.clone(), BitVector::unit(tag_len, t)) {
            reps.push(v.clone());
            rep_tags.push(t);
        }
    }
    Ok(QuotientBasis { ambient, echelon, reps, rep_tags })
}

/// Linearly independent subset spanning the same space (first-come order).
pub fn span_basis(len: usize, vectors: &[BitVector]) -> Vec<BitVector> {
    let mut e = Echelon::new(len);
    vectors.iter().filter(|v| e.insert((*v).clone(), BitVector::zeros(0))).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_kernel_size(m: &BitMatrix) -> usize {
        (0u64..1 << m.cols()).filter(|&x| m.mul_vec(&BitVector::from_u64(m.cols(), x)).unwrap().is_zero()).count()
    }

    fn cycle_coboundary(n: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(n, n);
        for e in 0..n {
            m.set(e, e, true);
            m.set(e, (e + 1) % n, true);
        }
        m
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&BitMatrix::identity(3)), 3);
        assert_eq!(rank(&BitMatrix::from_nested(&[&[1, 1]])), 1);
        // path on 6 vertices, a tree
        let mut path = BitMatrix::zeros(5, 6);
        for e in 0..5 {
            path.set(e, e, true);
            path.set(e, e + 1, true);
        }
        assert_eq!(rank(&path), 5);
        assert_eq!(rank(&cycle_coboundary(7)), 6);
    }

    #[test]
    fn solve_examples() {
        let m = BitMatrix::from_nested(&[&[1, 1], &[0, 1]]);
        let s = solve_affine(&m, &BitVector::from_u8s(&[1, 1])).unwrap();
        assert_eq!(s, AffineSolution::Solvable { particular: BitVector::from_u8s(&[0, 1]), kernel: vec![] });

        let m = BitMatrix::from_nested(&[&[1, 1]]);
        let s = solve_affine(&m, &BitVector::from_u8s(&[1])).unwrap();
        assert_eq!(
            s,
            AffineSolution::Solvable {
                particular: BitVector::from_u8s(&[1, 0]),
                kernel: vec![BitVector::from_u8s(&[1, 1])]
            }
        );

        let m = cycle_coboundary(5);
        match solve_affine(&m, &BitVector::ones(5)).unwrap() {
            AffineSolution::Infeasible { certificate } => {
                assert_eq!(certificate, BitVector::ones(5));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn solve_rejects_bad_rhs() {
        let m = BitMatrix::identity(3);
        assert!(matches!(solve_affine(&m, &BitVector::zeros(2)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&BitMatrix::identity(2)).is_empty());
        assert_eq!(kernel_basis(&BitMatrix::zeros(2, 3)).len(), 3);
    }

    #[test]
    fn quotient_examples() {
        let z = [BitVector::from_u8s(&[1, 0]), BitVector::from_u8s(&[0, 1])];
        let b = [BitVector::from_u8s(&[1, 1])];
        let q = quotient_basis(2, &z, &b).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.coords(&BitVector::from_u8s(&[1, 1])).unwrap(), BitVector::zeros(1));
        assert_eq!(q.coords(&BitVector::from_u8s(&[0, 1])).unwrap(), BitVector::ones(1));

        let q = quotient_basis(2, &z, &z).unwrap();
        assert_eq!(q.dim(), 0);
        for x in 0..4 {
            assert!(q.coords(&BitVector::from_u64(2, x)).unwrap().is_empty());
        }

        let bad = quotient_basis(3, &[BitVector::from_u8s(&[1, 0, 0])], &[BitVector::from_u8s(&[0, 1, 0])]);
        assert_eq!(bad.unwrap_err(), Error::NotSubspace);
        let q = quotient_basis(3, &[BitVector::from_u8s(&[1, 0, 0])], &[]).unwrap();
        assert_eq!(q.coords(&BitVector::from_u8s(&[0, 0, 1])).unwrap_err(), Error::NotInSpan);
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r).prop_map(move |rows| {
                BitMatrix::from_rows(c, rows.iter().map(|b| BitVector::from_bools(b)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn rank_nullity_matches_enumeration(m in arb_matrix(16, 12)) {
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.cols());
            prop_assert_eq!(1usize << k.len(), brute_kernel_size(&m));
            for v in &k {
                prop_assert!(m.mul_vec(v).unwrap().is_zero());
            }
        }

        #[test]
        fn solve_is_exact_or_certified(m in arb_matrix(16, 12), seed in any::<u64>()) {
            let b = BitVector::from_u64(m.rows(), seed & ((1u64 << m.rows()) - 1));
            let brute = (0u64..1 << m.cols())
                .any(|x| m.mul_vec(&BitVector::from_u64(m.cols(), x)).unwrap() == b);
            match solve_affine(&m, &b).unwrap() {
                AffineSolution::Solvable { particular, kernel } => {
                    prop_assert!(brute);
                    prop_assert_eq!(m.mul_vec(&particular).unwrap(), b);
                    prop_assert_eq!(kernel.len(), m.cols() - rank(&m));
                }
                AffineSolution::Infeasible { certificate } => {
                    prop_assert!(!brute);
                    prop_assert!(m.left_mul_vec(&certificate).unwrap().is_zero());
                    prop_assert!(certificate.dot(&b));
                }
            }
        }

        #[test]
        fn quotient_coords_are_additive(m in arb_matrix(8, 10), a in any::<u64>(), c in any::<u64>()) {
            // Z = rows of m, B = first half of rows
            let z: Vec<_> = m.row_vectors().to_vec();
            let b: Vec<_> = z[..z.len() / 2].to_vec();
            let q = quotient_basis(m.cols(), &z, &b).unwrap();
            prop_assert_eq!(q.dim(), rank(&m) - span_basis(m.cols(), &b).len());
            let pick = |bits: u64| {
                let mut v = BitVector::zeros(m.cols());
                for (i, r) in z.iter().enumerate() {
                    if bits >> i & 1 == 1 { v.xor_assign(r); }
                }
                v
            };
            let (u, w) = (pick(a), pick(c));
            let lhs = q.coords(&u.xor(&w)).unwrap();
            let rhs = q.coords(&u).unwrap().xor(&q.coords(&w).unwrap());
            prop_assert_eq!(lhs, rhs);
            for v in &b {
                prop_assert!(q.coords(v).unwrap().is_zero());
            }
        }
    }
}
