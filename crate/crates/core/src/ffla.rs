//! Dense exact linear algebra over the prime field GF(p), p an odd prime.
//!
//! Everything downstream (degreewise bases, derivation matrices, the
//! symmetrizer oracle) reduces to row reduction here, so the elimination
//! kernel avoids hardware division: reductions go through a precomputed
//! Barrett constant and row updates run in parallel.

use std::fmt;

use rayon::prelude::*;

/// Errors from field construction and linear solving.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FflaError {
    /// Modulus was not an odd prime > 2.
    BadModulus(u64),
    /// Operands came from different fields.
    FieldMismatch,
    /// Matrix dimensions do not match the operation.
    Shape(String),
    /// `solve_in_span` was called with linearly dependent columns.
    DependentColumns,
}

impl fmt::Display for FflaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FflaError::BadModulus(p) => write!(f, "{p} is not an odd prime > 2"),
            FflaError::FieldMismatch => write!(f, "mixed elements of different prime fields"),
            FflaError::Shape(s) => write!(f, "dimension mismatch: {s}"),
            FflaError::DependentColumns => {
                write!(f, "solve_in_span requires linearly independent columns")
            }
        }
    }
}

impl std::error::Error for FflaError {}

/// The prime field GF(p). Elements are canonical representatives in `[0, p)`
/// stored as `u32`; p is validated once at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
    // floor(2^32 / p), for Barrett reduction of values < 2^32.
    barrett: u64,
    inv2: u32,
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    /// Builds GF(p). Primality is checked by trial division; inputs are tiny.
    /// p is capped below 2^16 so that a fused multiply-add of canonical
    /// representatives always fits in the 32-bit Barrett range.
    pub fn new(p: u64) -> Result<Self, FflaError> {
        if !is_odd_prime(p) || p > 65521 {
            return Err(FflaError::BadModulus(p));
        }
        let p = p as u32;
        let mut field = PrimeField {
            p,
            barrett: (1u64 << 32) / p as u64,
            inv2: 0,
        };
        field.inv2 = field.inv(2);
        Ok(field)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p as u64
    }

    /// Reduces any `u64` below `2^32` to its canonical representative.
    #[inline]
    pub fn reduce(&self, x: u64) -> u32 {
        debug_assert!(x < 1 << 32);
        let q = (x * self.barrett) >> 32;
        let mut r = (x - q * self.p as u64) as u32;
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    /// Canonical representative of a signed integer.
    #[inline]
    pub fn from_i64(&self, x: i64) -> u32 {
        let p = self.p as i64;
        let r = x.rem_euclid(p);
        r as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    /// Fused `a + b·c`, the row-update primitive.
    #[inline]
    pub fn mul_add(&self, a: u32, b: u32, c: u32) -> u32 {
        self.reduce(a as u64 + b as u64 * c as u64)
    }

    pub fn pow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse (a ≠ 0) via Fermat.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in GF({})", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// The element 1/2, which exists since p is odd.
    #[inline]
    pub fn half(&self) -> u32 {
        self.inv2
    }

    /// Multiplicative order of a nonzero element; divides p − 1.
    pub fn order(&self, a: u32) -> u64 {
        assert!(a % self.p != 0);
        let mut x = a % self.p;
        let mut n = 1u64;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Smallest element of exact multiplicative order `n`, if one exists
    /// (i.e. if n divides p − 1).
    pub fn element_of_order(&self, n: u64) -> Option<u32> {
        if n == 0 || (self.p as u64 - 1) % n != 0 {
            return None;
        }
        (1..self.p).find(|&a| self.order(a) == n)
    }
}

/// Dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of [`row_reduce`]: reduced row-echelon form plus pivot structure.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    pub rref: FpMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl FpMatrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from row-major entries; values are reduced mod p.
    pub fn from_rows(field: PrimeField, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        FpMatrix {
            field,
            rows,
            cols,
            data: entries.iter().map(|&x| field.from_i64(x)).collect(),
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Matrix–vector product. Since p < 2^16, the u64 accumulator cannot
    /// overflow for any realistic row length.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "matvec shape");
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                let acc: u64 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                f.reduce_u64(acc)
            })
            .collect()
    }

    /// Matrix product with delayed reduction: rows accumulate in u64 and
    /// are reduced once.
    pub fn matmul(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape");
        let f = self.field;
        let mut out = FpMatrix::zero(f, self.rows, rhs.cols);
        out.data
            .par_chunks_mut(rhs.cols.max(1))
            .enumerate()
            .for_each(|(i, orow)| {
                let mut acc = vec![0u64; rhs.cols];
                for k in 0..self.cols {
                    let a = self.get(i, k) as u64;
                    if a == 0 {
                        continue;
                    }
                    for (o, &b) in acc.iter_mut().zip(rhs.row(k)) {
                        *o += a * b as u64;
                    }
                }
                for (o, a) in orow.iter_mut().zip(acc) {
                    *o = f.reduce_u64(a);
                }
            });
        out
    }

    /// Copies the submatrix with the given row/column index lists.
    pub fn gather(&self, row_idx: &[usize], col_idx: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zero(self.field, row_idx.len(), col_idx.len());
        for (i, &r) in row_idx.iter().enumerate() {
            for (j, &c) in col_idx.iter().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

impl PrimeField {
    /// Reduction of an arbitrary `u64`. Not on the hot path; hardware
    /// division is fine here.
    #[inline]
    pub fn reduce_u64(&self, x: u64) -> u32 {
        if x < 1 << 32 {
            self.reduce(x)
        } else {
            (x % self.p as u64) as u32
        }
    }
}

/// Reduced row-echelon form with deterministic pivoting: leftmost nonzero
/// column, topmost available row. Empty matrices row-reduce to rank 0.
pub fn row_reduce(m: &FpMatrix) -> RowEchelon {
    let f = m.field;
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;

    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| a.get(r, col) != 0) else {
            continue;
        };
        if pr != rank {
            for c in 0..cols {
                let tmp = a.get(rank, c);
                a.set(rank, c, a.get(pr, c));
                a.set(pr, c, tmp);
            }
        }
        let inv = f.inv(a.get(rank, col));
        if inv != 1 {
            for c in col..cols {
                let v = f.mul(a.get(rank, c), inv);
                a.set(rank, c, v);
            }
        }
        // Eliminate the pivot column from every other row in parallel.
        let pivot_row: Vec<u32> = a.row(rank).to_vec();
        let stride = cols;
        a.data.par_chunks_mut(stride).enumerate().for_each(|(r, row)| {
            if r == rank {
                return;
            }
            let factor = row[col];
            if factor == 0 {
                return;
            }
            let neg = f.neg(factor);
            for (x, &pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = f.mul_add(*x, neg, pv);
            }
        });
        pivot_cols.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }

    RowEchelon {
        rref: a,
        rank,
        pivot_cols,
    }
}

/// Basis of the right null space `{v : m·v = 0}`.
///
/// One basis vector per free column, ordered by free-column index; the
/// free coordinate of each vector is 1.
pub fn kernel_basis(m: &FpMatrix) -> Vec<Vec<u32>> {
    let f = m.field;
    let ech = row_reduce(m);
    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; m.cols];
        for (r, &c) in ech.pivot_cols.iter().enumerate() {
            v[c] = Some(r);
        }
        v
    };
    let mut basis = Vec::with_capacity(m.cols - ech.rank);
    for free in 0..m.cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![0u32; m.cols];
        v[free] = 1;
        for (r, &c) in ech.pivot_cols.iter().enumerate() {
            v[c] = f.neg(ech.rref.get(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Outcome of [`solve_in_span`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanSolution {
    /// Unique coefficients expressing the target in the column span.
    InSpan(Vec<u32>),
    NotInSpan,
}

/// Expresses `target` in the span of the columns of `basis_images`.
///
/// The columns must be linearly independent; otherwise
/// [`FflaError::DependentColumns`] is returned.
pub fn solve_in_span(basis_images: &FpMatrix, target: &[u32]) -> Result<SpanSolution, FflaError> {
    if target.len() != basis_images.rows {
        return Err(FflaError::Shape(format!(
            "target length {} vs {} rows",
            target.len(),
            basis_images.rows
        )));
    }
    let f = basis_images.field;
    let n = basis_images.cols;
    let mut aug = FpMatrix::zero(f, basis_images.rows, n + 1);
    for r in 0..basis_images.rows {
        for c in 0..n {
            aug.set(r, c, basis_images.get(r, c));
        }
        aug.set(r, n, target[r] % f.p as u32);
    }
    let ech = row_reduce(&aug);
    let basis_rank = ech
        .pivot_cols
        .iter()
        .filter(|&&c| c < n)
        .count();
    if basis_rank < n {
        return Err(FflaError::DependentColumns);
    }
    if ech.pivot_cols.contains(&n) {
        return Ok(SpanSolution::NotInSpan);
    }
    let mut coeffs = vec![0u32; n];
    for (r, &c) in ech.pivot_cols.iter().enumerate() {
        coeffs[c] = ech.rref.get(r, n);
    }
    Ok(SpanSolution::InSpan(coeffs))
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        for p in [0u64, 1, 2, 4, 9, 15] {
            assert!(PrimeField::new(p).is_err(), "p = {p}");
        }
        assert!(PrimeField::new(3).is_ok());
        assert!(PrimeField::new(65521).is_ok());
    }

    #[test]
    fn barrett_matches_modulo() {
        for p in [3u64, 5, 7, 11, 101, 65521] {
            let f = gf(p);
            for x in (0..10_000u64).chain([u32::MAX as u64, u32::MAX as u64 - 1]) {
                assert_eq!(f.reduce(x) as u64, x % p);
            }
            assert_eq!(f.reduce_u64(u64::MAX) as u64, u64::MAX % p);
        }
    }

    #[test]
    fn field_arithmetic() {
        let f = gf(7);
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), 5);
        assert_eq!(f.mul(f.half(), 2), 1);
        assert_eq!(f.order(2), 3);
        assert_eq!(f.element_of_order(3), Some(2));
        assert_eq!(f.element_of_order(6), Some(3));
        assert_eq!(gf(5).element_of_order(3), None);
    }

    #[test]
    fn identity_has_full_rank() {
        let f = gf(5);
        let m = FpMatrix::identity(f, 3);
        let ech = row_reduce(&m);
        assert_eq!(ech.rank, 3);
        assert_eq!(ech.pivot_cols, vec![0, 1, 2]);
        assert_eq!(ech.rref, m);
        assert!(kernel_basis(&m).is_empty());
    }

    #[test]
    fn scalar_multiple_rows_have_rank_one() {
        let f = gf(3);
        let m = FpMatrix::from_rows(f, 2, 2, &[1, 2, 2, 1]);
        let ech = row_reduce(&m);
        assert_eq!(ech.rank, 1);
        let ker = kernel_basis(&m);
        assert_eq!(ker, vec![vec![1, 1]]);
    }

    // Hand row-reduction: [[1,1,1],[0,1,2]] is already in echelon form;
    // clearing row 0 gives [[1,0,-1],[0,1,2]] = [[1,0,2],[0,1,2]] over GF(3).
    #[test]
    fn rref_frozen_example() {
        let f = gf(3);
        let m = FpMatrix::from_rows(f, 2, 3, &[1, 1, 1, 0, 1, 2]);
        let ech = row_reduce(&m);
        assert_eq!(ech.rank, 2);
        assert_eq!(ech.pivot_cols, vec![0, 1]);
        assert_eq!(ech.rref, FpMatrix::from_rows(f, 2, 3, &[1, 0, 2, 0, 1, 2]));
    }

    #[test]
    fn kernel_single_relation() {
        let f = gf(5);
        let m = FpMatrix::from_rows(f, 1, 2, &[1, 1]);
        assert_eq!(kernel_basis(&m), vec![vec![4, 1]]);
    }

    // Brute force over GF(3)^2: kernel of [[1,2],[2,1]] is {(0,0),(1,1),(2,2)}.
    #[test]
    fn kernel_matches_brute_force() {
        let f = gf(3);
        let m = FpMatrix::from_rows(f, 2, 2, &[1, 2, 2, 1]);
        let mut brute = Vec::new();
        for x in 0..3u32 {
            for y in 0..3u32 {
                if m.apply(&[x, y]).iter().all(|&v| v == 0) && (x, y) != (0, 0) {
                    brute.push(vec![x, y]);
                }
            }
        }
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 1);
        assert!(brute.contains(&ker[0]));
    }

    #[test]
    fn solve_in_span_cases() {
        let f = gf(3);
        let id = FpMatrix::identity(f, 2);
        assert_eq!(
            solve_in_span(&id, &[2, 1]).unwrap(),
            SpanSolution::InSpan(vec![2, 1])
        );

        // 2·(1,2) = (2,4) = (2,1) mod 3.
        let basis = FpMatrix::from_rows(f, 2, 1, &[1, 2]);
        assert_eq!(
            solve_in_span(&basis, &[2, 1]).unwrap(),
            SpanSolution::InSpan(vec![2])
        );

        let basis = FpMatrix::from_rows(f, 2, 1, &[1, 0]);
        assert_eq!(solve_in_span(&basis, &[0, 1]).unwrap(), SpanSolution::NotInSpan);

        let dep = FpMatrix::from_rows(f, 2, 2, &[1, 2, 2, 1]);
        assert_eq!(
            solve_in_span(&dep, &[0, 0]).unwrap_err(),
            FflaError::DependentColumns
        );
    }

    #[test]
    fn empty_matrix_rank_zero() {
        let f = gf(5);
        let m = FpMatrix::zero(f, 0, 4);
        let ech = row_reduce(&m);
        assert_eq!(ech.rank, 0);
        assert_eq!(kernel_basis(&m).len(), 4);
    }
}
