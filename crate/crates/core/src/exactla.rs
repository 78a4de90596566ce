//! Exact linear algebra over prime fields `F_p`.
//!
//! Matrices carry their own modulus. Row reduction, kernels and every
//! subspace operation require the modulus to be prime; [`Matrix`] itself
//! also admits prime powers so that `Z/p^r` arithmetic can reuse the
//! container.
//!
//! Subspaces are stored by their reduced row-echelon basis, so two equal
//! subspaces are structurally equal (`==`, `Hash`).
//!
//! Over `F_2` with at most 64 columns, elimination runs on rows packed into
//! single `u64` words; every other case uses dense `u32` rows.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// Column limit of the packed `F_2` elimination kernel.
pub const MAX_PACKED_DIM: usize = 64;
/// Column limit of every elimination routine.
pub const MAX_DIM: usize = 512;

const MAX_MODULUS: u64 = (1 << 31) - 1;

/// Deterministic trial-division primality test, adequate for `n < 2^32`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// A prime `p` with `2 <= p <= 2^31 - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&p) {
            return Err(Error::InvalidModulus(p));
        }
        if !is_prime(p) {
            return Err(Error::ModulusNotPrime(p));
        }
        Ok(PrimeModulus(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_modulus(m: u64) -> Result<()> {
    if (2..=MAX_MODULUS).contains(&m) {
        Ok(())
    } else {
        Err(Error::InvalidModulus(m))
    }
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, m: u32) -> u32 {
    let s = a as u64 + b as u64;
    (if s >= m as u64 { s - m as u64 } else { s }) as u32
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, m: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + m as u64 - b as u64) as u32
    }
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, m: u32) -> u32 {
    ((a as u64 * b as u64) % m as u64) as u32
}

#[inline]
pub(crate) fn neg_mod(a: u32, m: u32) -> u32 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub(crate) fn inv_mod(a: u32, m: u32) -> Option<u32> {
    let (mut r0, mut r1) = (m as i64, (a % m) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i64) as u32)
}

/// A dense matrix over `Z/m` stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    modulus: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix(mod {}, {}x{})[", self.modulus, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting entries `>= modulus`.
    pub fn new(modulus: u32, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        check_modulus(modulus as u64)?;
        if rows == 0 || cols == 0 {
            return Err(Error::shape("matrix dimensions must be positive"));
        }
        if rows * cols != data.len() {
            return Err(Error::shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(x) = data.iter().find(|&&x| x >= modulus) {
            return Err(Error::shape(format!("entry {x} not reduced modulo {modulus}")));
        }
        Ok(Matrix {
            modulus,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(modulus: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::shape("ragged rows"));
        }
        Matrix::new(modulus, rows.len(), cols, rows.concat())
    }

    /// Builds a matrix from an entry function; values are reduced modulo `modulus`.
    pub fn from_fn(modulus: u32, rows: usize, cols: usize, f: impl Fn(usize, usize) -> u64) -> Self {
        debug_assert!(modulus >= 2);
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push((f(i, j) % modulus as u64) as u32);
            }
        }
        Matrix {
            modulus,
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(modulus: u32, rows: usize, cols: usize) -> Self {
        Matrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: u32, n: usize) -> Self {
        Matrix::from_fn(modulus, n, n, |i, j| (i == j) as u64)
    }

    /// The matrix unit `E_ij` (zero-based indices).
    pub fn unit(modulus: u32, n: usize, i: usize, j: usize) -> Self {
        Matrix::from_fn(modulus, n, n, |a, b| (a == i && b == j) as u64)
    }

    pub fn diagonal(modulus: u32, diag: &[u32]) -> Self {
        let n = diag.len();
        Matrix::from_fn(modulus, n, n, |i, j| if i == j { diag[i] as u64 } else { 0 })
    }

    /// Nilpotent Jordan block: ones on the superdiagonal, so `J e_1 = 0` and
    /// `J e_{i+1} = e_i`.
    pub fn nilpotent_jordan(modulus: u32, size: usize) -> Self {
        Matrix::from_fn(modulus, size, size, |i, j| (j == i + 1) as u64)
    }

    /// Block-diagonal sum; all blocks must share a modulus.
    pub fn block_diagonal(blocks: &[Matrix]) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::shape("block_diagonal needs at least one block"))?;
        let modulus = first.modulus;
        if blocks.iter().any(|b| b.modulus != modulus) {
            return Err(Error::shape("blocks have different moduli"));
        }
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(modulus, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.data[(r0 + i) * cols + c0 + j] = b.get(i, j);
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(out)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.data[i * self.cols + j] = (value % self.modulus as u64) as u32;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as u32))
    }

    /// Row-major flattening; the coordinates used for matrix algebras.
    pub fn vectorize(&self) -> Vec<u32> {
        self.data.clone()
    }

    pub fn from_vector(modulus: u32, rows: usize, cols: usize, v: &[u32]) -> Result<Self> {
        Matrix::new(modulus, rows, cols, v.to_vec())
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::shape(format!(
                "moduli differ: {} vs {}",
                self.modulus, other.modulus
            )));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.modulus != other.modulus {
            return Err(Error::shape("moduli differ"));
        }
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Matrix) -> Matrix {
        let m = self.modulus as u64;
        let (n, inner, cols) = (self.rows, self.cols, other.cols);
        let mut data = vec![0u32; n * cols];
        // With m < 2^16 an accumulated row of products cannot overflow u64.
        let lazy = m < (1 << 16);
        let mut acc = vec![0u64; cols];
        for i in 0..n {
            acc.iter_mut().for_each(|a| *a = 0);
            for t in 0..inner {
                let a = self.data[i * inner + t] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[t * cols..(t + 1) * cols];
                if lazy {
                    for (s, &b) in acc.iter_mut().zip(orow) {
                        *s += a * b as u64;
                    }
                } else {
                    for (s, &b) in acc.iter_mut().zip(orow) {
                        *s = (*s + a * b as u64) % m;
                    }
                }
            }
            for (d, s) in data[i * cols..(i + 1) * cols].iter_mut().zip(&acc) {
                *d = (s % m) as u32;
            }
        }
        Matrix {
            modulus: self.modulus,
            rows: n,
            cols,
            data,
        }
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let m = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| add_mod(a, b, m))
            .collect();
        Ok(self.with_data(data))
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let m = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| sub_mod(a, b, m))
            .collect();
        Ok(self.with_data(data))
    }

    fn with_data(&self, data: Vec<u32>) -> Matrix {
        Matrix {
            modulus: self.modulus,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let m = self.modulus;
        let c = c % m;
        Matrix {
            modulus: m,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| mul_mod(a, c, m)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.modulus, self.cols, self.rows, |i, j| self.get(j, i) as u64)
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::shape(format!(
                "vector of length {} applied to {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let m = self.modulus as u64;
        Ok((0..self.rows)
            .map(|i| {
                let s = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |s, (&a, &b)| (s + a as u64 * b as u64) % m);
                s as u32
            })
            .collect())
    }

    pub fn pow(&self, mut e: u64) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::shape("power of a non-square matrix"));
        }
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.modulus, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(acc)
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(rref(self)?.rank)
    }

    pub fn is_invertible(&self) -> Result<bool> {
        Ok(self.is_square() && self.rank()? == self.rows)
    }

    /// Inverse over a prime field via Gauss–Jordan on `[A | I]`.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::shape("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let p = require_prime(self.modulus)?;
        let mut rows: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| (i == j) as u32));
                r
            })
            .collect();
        let pivots = eliminate_dense(p, 2 * n, &mut rows);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible);
        }
        let data = rows.iter().take(n).flat_map(|r| r[n..].iter().copied()).collect();
        Ok(Matrix {
            modulus: self.modulus,
            rows: n,
            cols: n,
            data,
        })
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    /// Panics on mismatched shapes or moduli; use [`Matrix::checked_mul`] for
    /// untrusted inputs.
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert!(
            self.modulus == rhs.modulus && self.cols == rhs.rows,
            "matrix product shape mismatch"
        );
        self.mul_unchecked(rhs)
    }
}

fn require_prime(m: u32) -> Result<u32> {
    if is_prime(m as u64) {
        Ok(m)
    } else {
        Err(Error::ModulusNotPrime(m as u64))
    }
}

fn check_dim(cols: usize) -> Result<()> {
    if cols > MAX_DIM {
        Err(Error::DimensionTooLarge {
            dim: cols,
            max: MAX_DIM,
        })
    } else {
        Ok(())
    }
}

/// In-place reduced row-echelon form over `F_p`; returns pivot columns.
/// Nonzero rows end up first.
fn eliminate_dense(p: u32, cols: usize, rows: &mut [Vec<u32>]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = inv_mod(rows[rank][col], p).expect("nonzero element of a prime field");
        if inv != 1 {
            for x in rows[rank][col..].iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank {
                continue;
            }
            let f = row[col];
            if f == 0 {
                continue;
            }
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = sub_mod(*x, mul_mod(f, y, p), p);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

fn pack_row(row: &[u32]) -> u64 {
    row.iter()
        .enumerate()
        .fold(0u64, |w, (j, &x)| w | (((x & 1) as u64) << j))
}

fn unpack_row(word: u64, cols: usize) -> Vec<u32> {
    (0..cols).map(|j| ((word >> j) & 1) as u32).collect()
}

/// Word-parallel elimination over `F_2` for at most 64 columns.
fn eliminate_packed(cols: usize, rows: &mut [u64]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let bit = 1u64 << col;
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let pivot_row = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && *row & bit != 0 {
                *row ^= pivot_row;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

/// Reduces `rows` (each of length `cols`) to RREF over `F_p` and returns the
/// nonzero rows with their pivot columns.
pub(crate) fn echelon_rows(
    p: u32,
    cols: usize,
    mut rows: Vec<Vec<u32>>,
) -> Result<(Vec<Vec<u32>>, Vec<usize>)> {
    check_dim(cols)?;
    if p == 2 && cols <= MAX_PACKED_DIM {
        let mut packed: Vec<u64> = rows.iter().map(|r| pack_row(r)).collect();
        let pivots = eliminate_packed(cols, &mut packed);
        let out = packed[..pivots.len()]
            .iter()
            .map(|&w| unpack_row(w, cols))
            .collect();
        return Ok((out, pivots));
    }
    let pivots = eliminate_dense(p, cols, &mut rows);
    rows.truncate(pivots.len());
    Ok((rows, pivots))
}

/// Dense elimination regardless of the modulus; reference route for the
/// packed kernel.
#[doc(hidden)]
pub fn echelon_rows_dense(p: u32, cols: usize, mut rows: Vec<Vec<u32>>) -> (Vec<Vec<u32>>, Vec<usize>) {
    let pivots = eliminate_dense(p, cols, &mut rows);
    rows.truncate(pivots.len());
    (rows, pivots)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelon {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row-echelon form; zero rows are kept at the bottom so the shape
/// is unchanged.
pub fn rref(m: &Matrix) -> Result<RowEchelon> {
    let p = require_prime(m.modulus)?;
    let rows: Vec<Vec<u32>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let (reduced, pivots) = echelon_rows(p, m.cols, rows)?;
    let mut data: Vec<u32> = reduced.concat();
    data.resize(m.rows * m.cols, 0);
    Ok(RowEchelon {
        matrix: Matrix {
            modulus: m.modulus,
            rows: m.rows,
            cols: m.cols,
            data,
        },
        rank: pivots.len(),
        pivots,
    })
}

/// A subspace of `F_p^n`, stored as its RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    modulus: PrimeModulus,
    ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(F_{}^{}, dim {}){:?}",
            self.modulus, self.ambient, self.basis.len(), self.basis
        )
    }
}

impl Subspace {
    pub fn zero(p: PrimeModulus, n: usize) -> Self {
        Subspace {
            modulus: p,
            ambient: n,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: PrimeModulus, n: usize) -> Self {
        Subspace {
            modulus: p,
            ambient: n,
            basis: (0..n).map(|i| unit_vector(n, i)).collect(),
            pivots: (0..n).collect(),
        }
    }

    /// Span of arbitrary vectors; entries are reduced modulo `p`.
    pub fn span<I, V>(p: PrimeModulus, n: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u32]>,
    {
        let pm = p.get();
        let mut rows = Vec::new();
        for v in vectors {
            let v = v.as_ref();
            if v.len() != n {
                return Err(Error::shape(format!(
                    "vector of length {} in ambient dimension {n}",
                    v.len()
                )));
            }
            if v.iter().any(|&x| x != 0) {
                rows.push(v.iter().map(|&x| x % pm).collect());
            }
        }
        let (basis, pivots) = echelon_rows(pm, n, rows)?;
        Ok(Subspace {
            modulus: p,
            ambient: n,
            basis,
            pivots,
        })
    }

    pub fn row_space(m: &Matrix) -> Result<Self> {
        let p = PrimeModulus::new(m.modulus as u64)?;
        Subspace::span(p, m.cols, (0..m.rows).map(|i| m.row(i)))
    }

    /// Wraps rows that are already a reduced row-echelon basis.
    pub(crate) fn from_rref_unchecked(
        p: PrimeModulus,
        n: usize,
        basis: Vec<Vec<u32>>,
        pivots: Vec<usize>,
    ) -> Self {
        debug_assert_eq!(basis.len(), pivots.len());
        Subspace {
            modulus: p,
            ambient: n,
            basis,
            pivots,
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Remainder of `v` after clearing its pivot coordinates against the basis.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.modulus.get();
        let mut r: Vec<u32> = v.iter().map(|&x| x % p).collect();
        for (b, &c) in self.basis.iter().zip(&self.pivots) {
            let f = r[c];
            if f == 0 {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(b) {
                *x = sub_mod(*x, mul_mod(f, y, p), p);
            }
        }
        r
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.ambient && self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        let p = self.modulus.get();
        Some(self.pivots.iter().map(|&c| v[c] % p).collect())
    }

    /// The vector `sum_i c_i b_i`.
    pub fn combination(&self, coeffs: &[u32]) -> Vec<u32> {
        let p = self.modulus.get();
        let mut out = vec![0u32; self.ambient];
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (x, &y) in out.iter_mut().zip(b) {
                *x = add_mod(*x, mul_mod(c, y, p), p);
            }
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.modulus == other.modulus
            && self.ambient == other.ambient
            && self.basis.iter().all(|b| other.contains(b))
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        if self.modulus != other.modulus || self.ambient != other.ambient {
            return Err(Error::shape(format!(
                "subspaces of F_{}^{} and F_{}^{}",
                self.modulus, self.ambient, other.modulus, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        Subspace::span(
            self.modulus,
            self.ambient,
            self.basis.iter().chain(other.basis.iter()),
        )
    }

    /// Intersection by the Zassenhaus block elimination, falling back to
    /// annihilators when the doubled width exceeds [`MAX_DIM`].
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let n = self.ambient;
        if 2 * n > MAX_DIM {
            return self.intersect_via_annihilators(other);
        }
        let p = self.modulus.get();
        let rows: Vec<Vec<u32>> = self
            .basis
            .iter()
            .map(|a| a.iter().chain(a.iter()).copied().collect())
            .chain(
                other
                    .basis
                    .iter()
                    .map(|b| b.iter().copied().chain(std::iter::repeat_n(0, n)).collect()),
            )
            .collect();
        let (reduced, pivots) = echelon_rows(p, 2 * n, rows)?;
        let (basis, piv): (Vec<Vec<u32>>, Vec<usize>) = reduced
            .into_iter()
            .zip(pivots)
            .filter(|(_, c)| *c >= n)
            .map(|(r, c)| (r[n..].to_vec(), c - n))
            .unzip();
        // Rows with a pivot in the right half are already an RREF basis there.
        Ok(Subspace::from_rref_unchecked(self.modulus, n, basis, piv))
    }

    /// `A ∩ B = (ann A + ann B)^⊥`; an independent route to [`Subspace::intersect`].
    pub fn intersect_via_annihilators(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let ann = self.annihilator()?.sum(&other.annihilator()?)?;
        ann.annihilator()
    }

    /// `{u : u · w = 0 for all w in self}`.
    pub fn annihilator(&self) -> Result<Subspace> {
        if self.basis.is_empty() {
            return Ok(Subspace::full(self.modulus, self.ambient));
        }
        kernel_of_rows(self.modulus, self.ambient, &self.basis, &self.pivots)
    }

    /// All `p^dim` vectors of the subspace, refusing more than `limit`.
    pub fn elements(&self, limit: usize) -> Result<Vec<Vec<u32>>> {
        let p = self.modulus.get() as usize;
        let count = checked_power(p, self.dim())
            .filter(|&c| c <= limit)
            .ok_or_else(|| Error::TooLarge(format!("{p}^{} vectors", self.dim())))?;
        let mut out = Vec::with_capacity(count);
        let mut coeffs = vec![0u32; self.dim()];
        for _ in 0..count {
            out.push(self.combination(&coeffs));
            increment(&mut coeffs, self.modulus.get());
        }
        Ok(out)
    }
}

pub(crate) fn checked_power(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

/// Little-endian odometer step over `F_p^len`; returns false on wrap-around.
pub(crate) fn increment(v: &mut [u32], p: u32) -> bool {
    for x in v.iter_mut() {
        *x += 1;
        if *x < p {
            return true;
        }
        *x = 0;
    }
    false
}

pub fn unit_vector(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Null space of the matrix whose RREF rows are `rows` with pivots `pivots`.
fn kernel_of_rows(
    p: PrimeModulus,
    cols: usize,
    rows: &[Vec<u32>],
    pivots: &[usize],
) -> Result<Subspace> {
    let pm = p.get();
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let vectors: Vec<Vec<u32>> = (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0u32; cols];
            v[f] = 1;
            for (row, &c) in rows.iter().zip(pivots) {
                v[c] = neg_mod(row[f], pm);
            }
            v
        })
        .collect();
    Subspace::span(p, cols, vectors)
}

/// `{v : m v = 0}`.
pub fn kernel(m: &Matrix) -> Result<Subspace> {
    let p = PrimeModulus::new(m.modulus as u64)?;
    let rows: Vec<Vec<u32>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let (reduced, pivots) = echelon_rows(p.get(), m.cols, rows)?;
    kernel_of_rows(p, m.cols, &reduced, &pivots)
}

/// `dim(outer) - dim(inner)`, provided `inner ⊆ outer`.
pub fn codim(inner: &Subspace, outer: &Subspace) -> Result<usize> {
    if !inner.is_subspace_of(outer) {
        return Err(Error::NotASubspace);
    }
    Ok(outer.dim() - inner.dim())
}

/// `{v : m v ∈ w}`, computed as the kernel of `ann(w) · m`.
pub fn preimage(m: &Matrix, w: &Subspace) -> Result<Subspace> {
    if w.ambient_dim() != m.rows() {
        return Err(Error::shape(format!(
            "target subspace lives in dimension {}, matrix has {} rows",
            w.ambient_dim(),
            m.rows()
        )));
    }
    if w.modulus().get() != m.modulus() {
        return Err(Error::shape("moduli differ"));
    }
    let p = w.modulus();
    let ann = w.annihilator()?;
    if ann.is_zero() {
        return Ok(Subspace::full(p, m.cols()));
    }
    let pm = p.get();
    let rows: Vec<Vec<u32>> = ann
        .basis()
        .iter()
        .map(|u| {
            (0..m.cols())
                .map(|j| {
                    u.iter()
                        .enumerate()
                        .fold(0u32, |s, (i, &ui)| add_mod(s, mul_mod(ui, m.get(i, j), pm), pm))
                })
                .collect()
        })
        .collect();
    let (reduced, pivots) = echelon_rows(pm, m.cols(), rows)?;
    kernel_of_rows(p, m.cols(), &reduced, &pivots)
}

/// Every subspace of `F_p^n` (optionally only those of one dimension), in
/// canonical RREF order of pivot sets and free entries.
pub fn enumerate_subspaces(p: PrimeModulus, n: usize, dim: Option<usize>, limit: usize) -> Result<Vec<Subspace>> {
    let pm = p.get();
    let mut out = Vec::new();
    let dims: Vec<usize> = match dim {
        Some(d) if d <= n => vec![d],
        Some(_) => vec![],
        None => (0..=n).collect(),
    };
    for d in dims {
        for pivots in combinations(n, d) {
            // Free slots: row i, column j > pivot_i that is not itself a pivot.
            let slots: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| {
                    ((c + 1)..n)
                        .filter(|j| !pivots.contains(j))
                        .map(move |j| (i, j))
                })
                .collect();
            let mut fill = vec![0u32; slots.len()];
            loop {
                if out.len() >= limit {
                    return Err(Error::TooLarge(format!("more than {limit} subspaces")));
                }
                let mut basis: Vec<Vec<u32>> = pivots.iter().map(|&c| unit_vector(n, c)).collect();
                for (&(i, j), &x) in slots.iter().zip(&fill) {
                    basis[i][j] = x;
                }
                out.push(Subspace::from_rref_unchecked(p, n, basis, pivots.clone()));
                if !increment(&mut fill, pm) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
