//! Exact dense linear algebra over a prime field `F_p`.
//!
//! Matrices over `F_2` are stored as bit-packed `u64` rows and reduced with
//! word-wide XOR; every other prime uses one byte per residue. Both layouts
//! sit behind the same [`FpMatrix`] API, so callers never see the split.
//!
//! A [`Subspace`] is always kept as the reduced row echelon form of its
//! basis, which makes equality structural: two subspaces are equal exactly
//! when their RREF matrices agree entry by entry.
//!
//! Tensor spaces use one global basis order: `e_i ⊗ e_j` has flat index
//! `i * n + j`, and [`FpMatrix::kron`] follows the same convention.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime modulus below 256.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u8);

impl Prime {
    pub const TWO: Prime = Prime(2);

    pub fn new(p: u32) -> Result<Self> {
        if (2..256).contains(&p) && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            Ok(Prime(p as u8))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.0 as i64) as u8
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.0 as u16) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.0 as u16 - b as u16) % self.0 as u16) as u8
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.0 as u16) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u8) -> u8 {
        debug_assert!(a != 0 && a < self.0);
        // a^(p-2) by square and multiply
        let mut base = a;
        let mut exp = self.0 - 2;
        let mut acc = 1u8;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0 as u32
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Data {
    /// `F_2`: `stride` words per row, unused high bits kept zero.
    Bits { stride: usize, words: Vec<u64> },
    /// Odd `p`: row-major residues.
    Bytes(Vec<u8>),
}

/// Dense matrix over `F_p`, read as a linear map `F_p^cols -> F_p^rows`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Data,
}

/// Output of [`FpMatrix::rref`]: the nonzero rows of the reduced row echelon
/// form together with the rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

#[inline]
fn stride_for(cols: usize) -> usize {
    cols.div_ceil(64)
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        let data = if p.get() == 2 {
            let stride = stride_for(cols);
            Data::Bits {
                stride,
                words: vec![0; rows * stride],
            }
        } else {
            Data::Bytes(vec![0; rows * cols])
        };
        FpMatrix { p, rows, cols, data }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from explicit rows of residues. Every row must have
    /// `cols` entries, each already reduced below `p`.
    pub fn from_rows<R: AsRef<[u8]>>(p: Prime, cols: usize, rows: &[R]) -> Result<Self> {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row length",
                    expected: cols,
                    found: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|&&e| e >= p.get()) {
                return Err(Error::InvalidArgument(format!(
                    "entry {bad} is not a residue mod {p}"
                )));
            }
            m.set_row(i, row);
        }
        Ok(m)
    }

    /// Builds a matrix from row-major integers, reducing each mod `p`.
    pub fn from_integers(p: Prime, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "row-major entry count",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        let mut m = Self::zeros(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, p.reduce(entries[i * cols + j]));
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        debug_assert!(i < self.rows && j < self.cols);
        match &self.data {
            Data::Bits { stride, words } => ((words[i * stride + j / 64] >> (j % 64)) & 1) as u8,
            Data::Bytes(b) => b[i * self.cols + j],
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        debug_assert!(i < self.rows && j < self.cols && v < self.p.get());
        let cols = self.cols;
        match &mut self.data {
            Data::Bits { stride, words } => {
                let w = &mut words[i * *stride + j / 64];
                let bit = 1u64 << (j % 64);
                if v & 1 == 1 {
                    *w |= bit;
                } else {
                    *w &= !bit;
                }
            }
            Data::Bytes(b) => b[i * cols + j] = v,
        }
    }

    pub fn row(&self, i: usize) -> Vec<u8> {
        match &self.data {
            Data::Bytes(b) => b[i * self.cols..(i + 1) * self.cols].to_vec(),
            Data::Bits { .. } => (0..self.cols).map(|j| self.get(i, j)).collect(),
        }
    }

    pub fn set_row(&mut self, i: usize, v: &[u8]) {
        debug_assert_eq!(v.len(), self.cols);
        let cols = self.cols;
        match &mut self.data {
            Data::Bytes(b) => b[i * cols..(i + 1) * cols].copy_from_slice(v),
            Data::Bits { stride, words } => {
                let row = &mut words[i * *stride..(i + 1) * *stride];
                row.iter_mut().for_each(|w| *w = 0);
                for (j, &e) in v.iter().enumerate() {
                    if e & 1 == 1 {
                        row[j / 64] |= 1u64 << (j % 64);
                    }
                }
            }
        }
    }

    /// Nonzero entries of row `i` as `(column, value)` pairs.
    pub fn row_support(&self, i: usize) -> Vec<(usize, u8)> {
        match &self.data {
            Data::Bytes(b) => b[i * self.cols..(i + 1) * self.cols]
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(j, &e)| (j, e))
                .collect(),
            Data::Bits { stride, words } => {
                let mut out = Vec::new();
                for (k, &w) in words[i * stride..(i + 1) * stride].iter().enumerate() {
                    let mut w = w;
                    while w != 0 {
                        let b = w.trailing_zeros() as usize;
                        out.push((k * 64 + b, 1));
                        w &= w - 1;
                    }
                }
                out
            }
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Bits { words, .. } => words.iter().all(|&w| w == 0),
            Data::Bytes(b) => b.iter().all(|&e| e == 0),
        }
    }

    fn check_prime(&self, other: &FpMatrix) -> Result<()> {
        if self.p != other.p {
            Err(Error::ModulusMismatch(self.p.get(), other.p.get()))
        } else {
            Ok(())
        }
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for (j, v) in self.row_support(i) {
                t.set(j, i, v);
            }
        }
        t
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_prime(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = FpMatrix::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for (k, c) in self.row_support(i) {
                out.add_foreign_row(i, other, k, c);
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        let p = self.p;
        Ok((0..self.rows)
            .map(|i| {
                self.row_support(i)
                    .into_iter()
                    .fold(0u8, |acc, (j, e)| p.add(acc, p.mul(e, v[j])))
            })
            .collect())
    }

    /// Kronecker product: entry `((i1, i2), (j1, j2))` at flat position
    /// `(i1 * b.rows + i2, j1 * b.cols + j2)` equals `a[i1][j1] * b[i2][j2]`.
    pub fn kron(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_prime(other)?;
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows * other.rows, self.cols * other.cols);
        let b_rows: Vec<Vec<(usize, u8)>> = (0..other.rows).map(|i| other.row_support(i)).collect();
        for i1 in 0..self.rows {
            for (j1, a) in self.row_support(i1) {
                for (i2, brow) in b_rows.iter().enumerate() {
                    for &(j2, b) in brow {
                        out.set(i1 * other.rows + i2, j1 * other.cols + j2, p.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_prime(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "vertical stack",
                expected: self.cols,
                found: other.cols,
            });
        }
        let data = match (&self.data, &other.data) {
            (Data::Bits { stride, words: a }, Data::Bits { words: b, .. }) => Data::Bits {
                stride: *stride,
                words: a.iter().chain(b.iter()).copied().collect(),
            },
            (Data::Bytes(a), Data::Bytes(b)) => Data::Bytes(a.iter().chain(b.iter()).copied().collect()),
            _ => unreachable!("layout is determined by the prime"),
        };
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `self` and `other` side by side.
    pub fn hstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_prime(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                context: "horizontal stack",
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut out = FpMatrix::zeros(self.p, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for (j, v) in self.row_support(i) {
                out.set(i, j, v);
            }
            for (j, v) in other.row_support(i) {
                out.set(i, self.cols + j, v);
            }
        }
        Ok(out)
    }

    pub fn select_rows(&self, idx: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.p, idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            out.copy_row_from(k, self, i);
        }
        out
    }

    fn copy_row_from(&mut self, dst: usize, src: &FpMatrix, src_row: usize) {
        match (&mut self.data, &src.data) {
            (Data::Bits { stride, words }, Data::Bits { words: sw, .. }) => {
                let s = *stride;
                words[dst * s..(dst + 1) * s].copy_from_slice(&sw[src_row * s..(src_row + 1) * s]);
            }
            (Data::Bytes(b), Data::Bytes(sb)) => {
                let c = self.cols;
                b[dst * c..(dst + 1) * c].copy_from_slice(&sb[src_row * c..(src_row + 1) * c]);
            }
            _ => unreachable!("layout is determined by the prime"),
        }
    }

    /// `self[dst] += c * other[src]` where `other` has the same column count.
    fn add_foreign_row(&mut self, dst: usize, other: &FpMatrix, src: usize, c: u8) {
        let p = self.p;
        match (&mut self.data, &other.data) {
            (Data::Bits { stride, words }, Data::Bits { words: ow, .. }) => {
                let s = *stride;
                for (d, o) in words[dst * s..(dst + 1) * s]
                    .iter_mut()
                    .zip(&ow[src * s..(src + 1) * s])
                {
                    *d ^= *o;
                }
            }
            (Data::Bytes(b), Data::Bytes(ob)) => {
                let cols = self.cols;
                for (d, &o) in b[dst * cols..(dst + 1) * cols]
                    .iter_mut()
                    .zip(&ob[src * cols..(src + 1) * cols])
                {
                    if o != 0 {
                        *d = p.add(*d, p.mul(c, o));
                    }
                }
            }
            _ => unreachable!("layout is determined by the prime"),
        }
    }

    fn truncate_rows(&mut self, n: usize) {
        match &mut self.data {
            Data::Bits { stride, words } => words.truncate(n * *stride),
            Data::Bytes(b) => b.truncate(n * self.cols),
        }
        self.rows = n;
    }

    /// Reduces in place to RREF, drops zero rows and returns the pivots.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols, p) = (self.rows, self.cols, self.p);
        let pivots = match &mut self.data {
            Data::Bits { stride, words } => rref_bits(words, rows, cols, *stride),
            Data::Bytes(b) => rref_bytes(b, rows, cols, p),
        };
        self.truncate_rows(pivots.len());
        pivots
    }

    /// Reduced row echelon form. Only the `rank` nonzero rows are returned.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref {
            rank: pivots.len(),
            matrix: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// `{ v : self · v = 0 }` as a subspace of `F_p^cols`.
    pub fn kernel(&self) -> Subspace {
        let Rref { matrix, pivots, .. } = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        pivots.iter().for_each(|&c| is_pivot[c] = true);
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = FpMatrix::zeros(p, free.len(), self.cols);
        for (row, &f) in free.iter().enumerate() {
            k.set(row, f, 1);
            for (r, &c) in pivots.iter().enumerate() {
                let v = matrix.get(r, f);
                if v != 0 {
                    k.set(row, c, p.neg(v));
                }
            }
        }
        Subspace::from_rows(k)
    }

    /// Column space, as a subspace of `F_p^rows`.
    pub fn image(&self) -> Subspace {
        Subspace::from_rows(self.transpose())
    }

    /// `{ v : self · v ∈ s }`.
    pub fn preimage(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient_dim() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "preimage target",
                expected: self.rows,
                found: s.ambient_dim(),
            });
        }
        self.check_prime(&s.basis)?;
        // s = { w : N w = 0 } with the rows of N spanning the annihilator of s
        let ann = s.annihilator();
        Ok(ann.basis.mul(self)?.kernel())
    }
}

fn rref_bits(words: &mut [u64], rows: usize, cols: usize, stride: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (w, bit) = (c / 64, 1u64 << (c % 64));
        let Some(i) = (r..rows).find(|&i| words[i * stride + w] & bit != 0) else {
            continue;
        };
        if i != r {
            for k in 0..stride {
                words.swap(r * stride + k, i * stride + k);
            }
        }
        let pivot_row: Vec<u64> = words[r * stride..(r + 1) * stride].to_vec();
        for i in (0..rows).filter(|&i| i != r) {
            let row = &mut words[i * stride..(i + 1) * stride];
            if row[w] & bit != 0 {
                for k in w..stride {
                    row[k] ^= pivot_row[k];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn rref_bytes(b: &mut [u8], rows: usize, cols: usize, p: Prime) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| b[i * cols + c] != 0) else {
            continue;
        };
        if i != r {
            for k in 0..cols {
                b.swap(r * cols + k, i * cols + k);
            }
        }
        let lead = b[r * cols + c];
        if lead != 1 {
            let inv = p.inv(lead);
            for k in c..cols {
                b[r * cols + k] = p.mul(b[r * cols + k], inv);
            }
        }
        let pivot_row: Vec<u8> = b[r * cols..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = b[i * cols + c];
            if f != 0 {
                let nf = p.neg(f);
                for k in c..cols {
                    if pivot_row[k] != 0 {
                        b[i * cols + k] = p.add(b[i * cols + k], p.mul(nf, pivot_row[k]));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// A subspace of `F_p^ambient_dim`, stored as the RREF of a basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: Prime, ambient_dim: usize) -> Self {
        Subspace {
            basis: FpMatrix::zeros(p, 0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: Prime, ambient_dim: usize) -> Self {
        Subspace {
            basis: FpMatrix::identity(p, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Row space of `m`.
    pub fn from_rows(mut m: FpMatrix) -> Self {
        let pivots = m.rref_in_place();
        Subspace { basis: m, pivots }
    }

    /// Span of explicit vectors of length `ambient_dim`.
    pub fn span<R: AsRef<[u8]>>(p: Prime, ambient_dim: usize, vectors: &[R]) -> Result<Self> {
        Ok(Self::from_rows(FpMatrix::from_rows(p, ambient_dim, vectors)?))
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.basis.p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    /// RREF basis, one vector per row.
    #[inline]
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    #[inline]
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> Vec<Vec<u8>> {
        self.basis.to_rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        self.basis.check_prime(&other.basis)?;
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: "subspace ambient dimension",
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Residue of `v` after clearing every pivot coordinate.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let p = self.prime();
        let mut out = v.to_vec();
        for (r, &c) in self.pivots.iter().enumerate() {
            let f = out[c];
            if f != 0 {
                let nf = p.neg(f);
                for (j, e) in self.basis.row_support(r) {
                    out[j] = p.add(out[j], p.mul(nf, e));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        v.len() == self.ambient_dim() && self.reduce(v).iter().all(|&e| e == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.check_compatible(other).is_ok()
            && (other.dim() == 0 || self.reduce_rows(&other.basis).is_zero())
    }

    /// Reduces every row of `m` modulo this subspace.
    pub fn reduce_rows(&self, m: &FpMatrix) -> FpMatrix {
        let p = self.prime();
        let mut out = m.clone();
        for i in 0..out.rows {
            for (r, &c) in self.pivots.iter().enumerate() {
                let f = out.get(i, c);
                if f != 0 {
                    out.add_foreign_row(i, &self.basis, r, p.neg(f));
                }
            }
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(Subspace::from_rows(self.basis.vstack(&other.basis)?))
    }

    /// Intersection via the Zassenhaus sum-intersection lemma.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let n = self.ambient_dim();
        let top = self.basis.hstack(&self.basis)?;
        let bottom = other.basis.hstack(&FpMatrix::zeros(self.prime(), other.dim(), n))?;
        let Rref { matrix, .. } = top.vstack(&bottom)?.rref();
        let rows: Vec<usize> = (0..matrix.rows)
            .filter(|&i| (0..n).all(|j| matrix.get(i, j) == 0))
            .collect();
        let mut inter = FpMatrix::zeros(self.prime(), rows.len(), n);
        for (k, &i) in rows.iter().enumerate() {
            for (j, v) in matrix.row_support(i) {
                inter.set(k, j - n, v);
            }
        }
        Ok(Subspace::from_rows(inter))
    }

    /// Orthogonal complement under the standard pairing `Σ x_k y_k`.
    pub fn annihilator(&self) -> Subspace {
        self.basis.kernel()
    }

    /// Image of the subspace under `m`.
    pub fn map(&self, m: &FpMatrix) -> Result<Subspace> {
        if m.cols != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: "subspace image",
                expected: self.ambient_dim(),
                found: m.cols,
            });
        }
        Ok(Subspace::from_rows(self.basis.mul(&m.transpose())?))
    }

    /// Rows of an RREF basis for a complement of `self` inside `sup`.
    /// Requires `self ⊆ sup`.
    pub fn complement_in(&self, sup: &Subspace) -> Result<FpMatrix> {
        self.check_compatible(sup)?;
        let reduced = Subspace::from_rows(self.reduce_rows(&sup.basis));
        if reduced.dim() + self.dim() != sup.dim() {
            return Err(Error::Invariant(
                "complement requested for a subspace not contained in its superspace".into(),
            ));
        }
        Ok(reduced.basis)
    }
}
