//! Prime-field arithmetic and dense exact linear algebra.
//!
//! Elements of GF(p) are plain `u64` values in `0..p`. The modulus is kept
//! below 2^31 so that a product of two reduced elements fits in 62 bits and
//! row operations can accumulate several products before reducing.

use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u64 = 10007;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut k = 3;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut k = n.max(2);
    while !is_prime(k) {
        k += 1;
    }
    k
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 3 || p >= 1 << 31 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric lift to `(-p/2, p/2]`, handy for printing small results.
    pub fn to_i64(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in GF({})", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn is_square(&self, a: u64) -> bool {
        let a = a % self.p;
        a == 0 || self.pow(a, (self.p - 1) / 2) == 1
    }

    /// Square root by Tonelli–Shanks, with the direct exponentiation for
    /// p ≡ 3 (mod 4). Returns `None` for non-residues.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        let p = self.p;
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = 2;
        while self.is_square(z) {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// Dense row-major matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Echelon data of a matrix: pivot columns in increasing order, with the
/// reduced pivot rows stored densely.
struct Echelon {
    pivots: Vec<usize>,
    rows: Vec<u64>,
    cols: usize,
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major data; entries are reduced mod p.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, mut data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        for x in data.iter_mut() {
            *x %= field.p;
        }
        FieldMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|x| x % field.p));
        }
        FieldMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, len: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(field, len, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), len, "column length mismatch");
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x % field.p;
            }
        }
        m
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % field.p);
            }
        }
        FieldMatrix {
            field,
            rows,
            cols,
            data,
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
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.field.p;
        let max_pending = ((u64::MAX - p) / ((p - 1) * (p - 1))).max(1) as u32;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let acc = &mut out[i * other.cols..(i + 1) * other.cols];
            let mut pending = 0u32;
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = other.row(k);
                for (x, &b) in acc.iter_mut().zip(brow) {
                    *x += a * b;
                }
                pending += 1;
                if pending >= max_pending {
                    acc.iter_mut().for_each(|x| *x %= p);
                    pending = 0;
                }
            }
            acc.iter_mut().for_each(|x| *x %= p);
        }
        Ok(FieldMatrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            data: out,
        })
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let p = self.field.p;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a * (b % p)) % p)
            })
            .collect())
    }

    /// Concatenates columns of `self` and `other`.
    pub fn hstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(FieldMatrix {
            field: self.field,
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Stacks rows of `other` under `self`.
    pub fn vstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FieldMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> FieldMatrix {
        FieldMatrix::from_fn(self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> FieldMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        FieldMatrix {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Gaussian elimination with first-nonzero pivoting. With `full` the
    /// pivot rows are also cleared above each pivot (reduced echelon form).
    fn echelon(&self, full: bool) -> Echelon {
        let p = self.field.p;
        let cols = self.cols;
        // how many unreduced `+= a*b` updates a row may absorb before overflow
        let max_pending = ((u64::MAX - p) / ((p - 1) * (p - 1))).max(1) as u32;
        let mut work = self.data.clone();
        let mut pending = vec![0u32; self.rows];
        let mut live: Vec<usize> = (0..self.rows).collect();
        let mut pivots = Vec::new();
        let mut pivot_rows: Vec<u64> = Vec::new();
        let mut pivot_buf = vec![0u64; cols];

        for j in 0..cols {
            if live.is_empty() {
                break;
            }
            let mut found = None;
            for (pos, &r) in live.iter().enumerate() {
                let x = &mut work[r * cols + j];
                *x %= p;
                if *x != 0 && found.is_none() {
                    found = Some(pos);
                }
            }
            let Some(pos) = found else { continue };
            let r = live.swap_remove(pos);
            let row = &mut work[r * cols..(r + 1) * cols];
            let inv = self.field.inv(row[j] % p);
            for (k, x) in row.iter_mut().enumerate() {
                pivot_buf[k] = if k < j { 0 } else { (*x % p) * inv % p };
            }
            for &s in &live {
                let e = work[s * cols + j];
                if e == 0 {
                    continue;
                }
                let m = p - e;
                let target = &mut work[s * cols..(s + 1) * cols];
                for (x, &b) in target[j..].iter_mut().zip(&pivot_buf[j..]) {
                    *x += m * b;
                }
                target[j] = 0;
                pending[s] += 1;
                if pending[s] >= max_pending {
                    target.iter_mut().for_each(|x| *x %= p);
                    pending[s] = 0;
                }
            }
            pivots.push(j);
            pivot_rows.extend_from_slice(&pivot_buf);
        }

        if full {
            // Rows below b are already fully reduced, so row b's multipliers are
            // just its original entries in the later pivot columns.
            let rank = pivots.len();
            for b in (0..rank).rev() {
                let (head, tail) = pivot_rows.split_at_mut((b + 1) * cols);
                let row = &mut head[b * cols..];
                let mut count = 0u32;
                for a in 0..rank - b - 1 {
                    let pc = pivots[b + 1 + a];
                    let e = row[pc] % p;
                    if e == 0 {
                        continue;
                    }
                    let m = p - e;
                    let prow = &tail[a * cols..(a + 1) * cols];
                    for (x, &y) in row[pc..].iter_mut().zip(&prow[pc..]) {
                        *x += m * y;
                    }
                    row[pc] = 0;
                    count += 1;
                    if count >= max_pending {
                        row.iter_mut().for_each(|x| *x %= p);
                        count = 0;
                    }
                }
                row.iter_mut().for_each(|x| *x %= p);
            }
        }
        Echelon {
            pivots,
            rows: pivot_rows,
            cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon(false).pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right kernel, one vector per column.
    pub fn kernel_basis(&self) -> FieldMatrix {
        let ech = self.echelon(true);
        let p = self.field.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = FieldMatrix::zeros(self.field, self.cols, free.len());
        for (t, &f) in free.iter().enumerate() {
            k.data[f * k.cols + t] = 1;
            for (a, &pc) in ech.pivots.iter().enumerate() {
                let v = ech.rows[a * ech.cols + f];
                if v != 0 {
                    k.data[pc * k.cols + t] = p - v;
                }
            }
        }
        k
    }

    /// Some `x` with `self * x = b`.
    pub fn solve(&self, b: &[u64]) -> Result<Vec<u64>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let rhs = FieldMatrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        let aug = self.hstack(&rhs)?;
        let ech = aug.echelon(true);
        if ech.pivots.last() == Some(&self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = vec![0u64; self.cols];
        for (a, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.rows[a * ech.cols + self.cols];
        }
        Ok(x)
    }

    /// Solves `self * X = B` column by column.
    pub fn solve_matrix(&self, b: &FieldMatrix) -> Result<FieldMatrix> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side with {} rows for {} rows",
                b.rows, self.rows
            )));
        }
        let aug = self.hstack(b)?;
        let ech = aug.echelon(true);
        if ech.pivots.iter().any(|&c| c >= self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = FieldMatrix::zeros(self.field, self.cols, b.cols);
        for (a, &pc) in ech.pivots.iter().enumerate() {
            for t in 0..b.cols {
                x.data[pc * b.cols + t] = ech.rows[a * ech.cols + self.cols + t];
            }
        }
        Ok(x)
    }

    /// A basis of the column space, in reduced form (columns of the
    /// transposed reduced row echelon form).
    pub fn column_space_basis(&self) -> FieldMatrix {
        let ech = self.transpose().echelon(true);
        let rank = ech.pivots.len();
        FieldMatrix::from_fn(self.field, self.rows, rank, |i, j| ech.rows[j * ech.cols + i])
    }

    /// Reduced row echelon form, zero rows dropped.
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let ech = self.echelon(true);
        let r = ech.pivots.len();
        (
            FieldMatrix {
                field: self.field,
                rows: r,
                cols: self.cols,
                data: ech.rows,
            },
            ech.pivots,
        )
    }
}

/// Incrementally maintained subspace of GF(p)^len in reduced echelon form.
#[derive(Debug, Clone)]
pub struct Span {
    field: PrimeField,
    len: usize,
    pivots: Vec<usize>,
    basis: Vec<Vec<u64>>,
}

impl Span {
    pub fn new(field: PrimeField, len: usize) -> Self {
        Span {
            field,
            len,
            pivots: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    fn reduce(&self, v: &mut [u64]) {
        let p = self.field.p;
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let e = v[pc] % p;
            if e == 0 {
                continue;
            }
            let m = p - e;
            for (x, &y) in v.iter_mut().zip(b) {
                *x = (*x + m * y) % p;
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w: Vec<u64> = v.iter().map(|x| x % self.field.p).collect();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let p = self.field.p;
        let mut w: Vec<u64> = v.iter().map(|x| x % p).collect();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(w[pc]);
        w.iter_mut().for_each(|x| *x = *x * inv % p);
        for b in self.basis.iter_mut() {
            let e = b[pc];
            if e != 0 {
                let m = p - e;
                for (x, &y) in b.iter_mut().zip(&w) {
                    *x = (*x + m * y) % p;
                }
            }
        }
        self.basis.push(w);
        self.pivots.push(pc);
        true
    }

    /// Inserts every column of `m`; returns how many raised the dimension.
    pub fn insert_columns(&mut self, m: &FieldMatrix) -> usize {
        (0..m.cols()).filter(|&j| self.insert(&m.column(j))).count()
    }

    pub fn basis_matrix(&self) -> FieldMatrix {
        FieldMatrix::from_columns(self.field, self.len, &self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> FieldMatrix {
        let f = gf();
        let a = FieldMatrix::from_fn(f, rows, rank, |_, _| rng.gen_range(0..f.modulus()));
        let b = FieldMatrix::from_fn(f, rank, cols, |_, _| rng.gen_range(0..f.modulus()));
        a.mul(&b).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        for p in [0, 1, 2, 3, 9, 10005, 1 << 31] {
            assert!(PrimeField::new(p).is_err(), "{p}");
        }
        assert!(PrimeField::new(5).is_ok());
    }

    #[test]
    fn sqrt_both_branches() {
        // 10007 = 3 mod 4, 10009 = 1 mod 4 (Tonelli–Shanks loop)
        for p in [10007, 10009, 97, 17] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..p.min(2000) {
                match f.sqrt(a) {
                    Some(r) => assert_eq!(f.mul(r, r), a),
                    None => assert!(!f.is_square(a)),
                }
            }
        }
    }

    #[test]
    fn rank_trivial_cases() {
        let f = gf();
        assert_eq!(FieldMatrix::identity(f, 3).rank(), 3);
        assert_eq!(FieldMatrix::zeros(f, 4, 7).rank(), 0);
    }

    #[test]
    fn rank_of_twisted_cubic_matrix() {
        // [[x0, x1, x2], [x1, x2, x3]] at the point (1, 2, 5, 7) off the curve:
        // the leading 2x2 minor is 1*5 - 2*2 = 1, so the rank is 2.
        let f = gf();
        let m = FieldMatrix::from_rows(f, &[vec![1, 2, 5], vec![2, 5, 7]]);
        assert_eq!(m.rank(), 2);
        // at the curve point (s^3, s^2 t, s t^2, t^3) with (s, t) = (3, 5) it drops to 1
        let on_curve = FieldMatrix::from_rows(f, &[vec![27, 45, 75], vec![45, 75, 125]]);
        assert_eq!(on_curve.rank(), 1);
    }

    #[test]
    fn kernel_trivial_cases() {
        let f = gf();
        assert_eq!(FieldMatrix::identity(f, 3).kernel_basis().cols(), 0);
        let k = FieldMatrix::zeros(f, 2, 5).kernel_basis();
        assert_eq!(k.cols(), 5);
        assert_eq!(k.rank(), 5);
    }

    #[test]
    fn vandermonde_kernel_matches_interpolation() {
        // Evaluation of 1, x, ..., x^5 at 4 nodes: the kernel consists of the
        // degree <= 5 polynomials vanishing at the nodes, i.e. (x-a)(x-b)(x-c)(x-e)
        // times {1, x}.
        let f = gf();
        let nodes = [2u64, 7, 11, 100];
        let v = FieldMatrix::from_fn(f, 4, 6, |i, j| f.pow(nodes[i], j as u64));
        let k = v.kernel_basis();
        assert_eq!(k.cols(), 2);
        assert!(v.mul(&k).unwrap().is_zero());
        // oracle: coefficients of prod (x - node)
        let mut poly = vec![1u64];
        for &a in &nodes {
            let mut next = vec![0u64; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = f.add(next[i + 1], c);
                next[i] = f.sub(next[i], f.mul(c, a));
            }
            poly = next;
        }
        let mut shifted = vec![0u64];
        shifted.extend_from_slice(&poly);
        poly.push(0);
        let mut span = Span::new(f, 6);
        span.insert_columns(&k);
        assert!(span.contains(&poly));
        assert!(span.contains(&shifted));
    }

    #[test]
    fn solve_cases() {
        let f = gf();
        let b = vec![4, 5, 6];
        assert_eq!(FieldMatrix::identity(f, 3).solve(&b).unwrap(), b);
        assert_eq!(
            FieldMatrix::zeros(f, 2, 2).solve(&[1, 0]),
            Err(Error::NoSolution)
        );
        let nodes = [1u64, 2, 3];
        let m = FieldMatrix::from_fn(f, 3, 3, |i, j| f.pow(nodes[i], j as u64));
        let vals: Vec<u64> = nodes.iter().map(|&x| x * x + 1).collect();
        assert_eq!(m.solve(&vals).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn solve_matrix_and_column_space() {
        let f = gf();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_matrix(&mut rng, 9, 6, 4);
        let x = FieldMatrix::from_fn(f, 6, 3, |_, _| rng.gen_range(0..f.modulus()));
        let b = a.mul(&x).unwrap();
        let y = a.solve_matrix(&b).unwrap();
        assert_eq!(a.mul(&y).unwrap(), b);
        let cs = a.column_space_basis();
        assert_eq!(cs.cols(), 4);
        assert_eq!(cs.hstack(&a).unwrap().rank(), 4);
    }

    #[test]
    fn span_tracks_dimension() {
        let f = gf();
        let mut s = Span::new(f, 3);
        assert!(s.insert(&[1, 2, 3]));
        assert!(!s.insert(&[2, 4, 6]));
        assert!(s.insert(&[0, 1, 0]));
        assert!(s.contains(&[1, 0, 3]));
        assert!(!s.contains(&[0, 0, 1]));
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn large_prime_lazy_reduction() {
        // near 2^31 only one or two updates fit before reduction
        let f = PrimeField::new(2_147_483_629).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = FieldMatrix::from_fn(f, 30, 8, |_, _| rng.gen_range(0..f.modulus()));
        let b = FieldMatrix::from_fn(f, 8, 40, |_, _| rng.gen_range(0..f.modulus()));
        let m = a.mul(&b).unwrap();
        assert_eq!(m.rank(), 8);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 32);
        assert!(m.mul(&k).unwrap().is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rank_kernel_invariants(seed in any::<u64>(), rows in 1usize..14, cols in 1usize..14, r in 0usize..14) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols, r.min(rows).min(cols));
            let rank = m.rank();
            prop_assert_eq!(rank, m.transpose().rank());
            prop_assert!(rank <= r.min(rows).min(cols));
            let k = m.kernel_basis();
            prop_assert_eq!(k.cols() + rank, cols);
            prop_assert!(m.mul(&k).unwrap().is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn solve_returns_a_preimage(seed in any::<u64>(), rows in 1usize..10, cols in 1usize..10) {
            let f = gf();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols, rows.min(cols).saturating_sub(1).max(1));
            let x: Vec<u64> = (0..cols).map(|_| rng.gen_range(0..f.modulus())).collect();
            let b = m.mul_vec(&x).unwrap();
            let y = m.solve(&b).unwrap();
            prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
        }
    }
}
