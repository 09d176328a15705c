//! Graded pieces of the ideals of E, of the scrolls X_{|D|} and of the secant
//! varieties Sec_{d-1} E, as kernels of evaluation maps or spans of minors.

use std::collections::HashMap;

use rand::Rng;

use crate::ellcurve::{Divisor, EmbeddedCurve};
use crate::error::{Error, Result};
use crate::exactlin::{FieldMatrix, PrimeField};
use crate::formulas::binomial;

/// Degree-m monomials in n variables, ordered lexicographically by exponent
/// vector with x_0 largest (so x_0^m comes first).
#[derive(Debug, Clone)]
pub struct MonomialSet {
    nvars: usize,
    degree: usize,
    exps: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl MonomialSet {
    pub fn new(nvars: usize, degree: usize) -> Self {
        fn fill(rest: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if rest == 1 {
                cur.push(left as u8);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e as u8);
                fill(rest - 1, left - e, cur, out);
                cur.pop();
            }
        }
        assert!(nvars >= 1, "need at least one variable");
        let mut exps = Vec::new();
        fill(nvars, degree, &mut Vec::with_capacity(nvars), &mut exps);
        let index = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        MonomialSet {
            nvars,
            degree,
            exps,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn exponents(&self, k: usize) -> &[u8] {
        &self.exps[k]
    }

    pub fn index_of(&self, exps: &[u8]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// table[k][j] = index of x_j * m_k in `next`, which must be the set of
    /// degree + 1 in the same variables.
    pub fn times_variable_table(&self, next: &MonomialSet) -> Vec<Vec<usize>> {
        assert_eq!(next.degree, self.degree + 1);
        assert_eq!(next.nvars, self.nvars);
        self.exps
            .iter()
            .map(|e| {
                (0..self.nvars)
                    .map(|j| {
                        let mut f = e.clone();
                        f[j] += 1;
                        next.index[&f]
                    })
                    .collect()
            })
            .collect()
    }

    /// Values of all monomials at a point.
    pub fn evaluate(&self, field: &PrimeField, point: &[u64]) -> Vec<u64> {
        assert_eq!(point.len(), self.nvars);
        let powers: Vec<Vec<u64>> = point
            .iter()
            .map(|&x| {
                let mut p = Vec::with_capacity(self.degree + 1);
                let mut acc = 1;
                for _ in 0..=self.degree {
                    p.push(acc);
                    acc = field.mul(acc, x);
                }
                p
            })
            .collect();
        self.exps
            .iter()
            .map(|e| {
                e.iter()
                    .enumerate()
                    .fold(1, |acc, (j, &k)| field.mul(acc, powers[j][k as usize]))
            })
            .collect()
    }
}

/// A subspace of degree-m forms; columns are coefficient vectors over
/// `MonomialSet::new(nvars, degree)`.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    nvars: usize,
    degree: usize,
    basis: FieldMatrix,
}

impl GradedPiece {
    pub fn new(nvars: usize, degree: usize, basis: FieldMatrix) -> Result<Self> {
        let expected = MonomialSet::new(nvars, degree).len();
        if basis.rows() != expected {
            return Err(Error::DimensionMismatch(format!(
                "piece basis has {} rows, degree-{degree} forms in {nvars} variables need {expected}",
                basis.rows()
            )));
        }
        Ok(GradedPiece {
            nvars,
            degree,
            basis,
        })
    }

    pub fn zero(field: PrimeField, nvars: usize, degree: usize) -> Self {
        let rows = MonomialSet::new(nvars, degree).len();
        GradedPiece {
            nvars,
            degree,
            basis: FieldMatrix::zeros(field, rows, 0),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &FieldMatrix {
        &self.basis
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    pub fn monomials(&self) -> MonomialSet {
        MonomialSet::new(self.nvars, self.degree)
    }

    /// Values of each basis form at each point; one row per point.
    pub fn evaluate(&self, points: &[Vec<u64>]) -> Result<FieldMatrix> {
        let f = self.field();
        let mons = self.monomials();
        let rows: Vec<Vec<u64>> = points.iter().map(|p| mons.evaluate(&f, p)).collect();
        if rows.is_empty() {
            return Ok(FieldMatrix::zeros(f, 0, self.dim()));
        }
        FieldMatrix::from_rows(f, &rows).mul(&self.basis)
    }

    /// Coordinates of the columns of `other` in this basis; errors when some
    /// column is not in the span.
    pub fn coordinates_of(&self, other: &GradedPiece) -> Result<FieldMatrix> {
        if other.nvars != self.nvars || other.degree != self.degree {
            return Err(Error::DimensionMismatch("pieces of different shape".into()));
        }
        self.basis.solve_matrix(&other.basis)
    }
}

fn evaluation_matrix(field: PrimeField, mons: &MonomialSet, points: &[Vec<u64>]) -> FieldMatrix {
    let rows: Vec<Vec<u64>> = points.iter().map(|p| mons.evaluate(&field, p)).collect();
    FieldMatrix::from_rows(field, &rows)
}

/// Number of distinct curve points the curve piece of degree m samples.
pub fn curve_sample_count(n: usize, m: usize) -> usize {
    m * n + 16
}

/// Floor on p for the Monte-Carlo secant sampler: a false incidence at a
/// random point happens with probability about deg/p per sample.
pub const MIN_SAMPLING_PRIME: u64 = 1009;

/// Smallest prime supporting every sampler used on pieces up to degree
/// `max_degree` for the degree-n curve.
pub fn required_prime(n: usize, max_degree: usize) -> u64 {
    let bound = crate::ellcurve::estimate_prime_for_points(curve_sample_count(n, max_degree));
    crate::exactlin::next_prime(bound.max(MIN_SAMPLING_PRIME))
}

/// (I_E)_m: a degree-m form vanishing at more than mn points of E vanishes on
/// E, so the kernel of evaluation at mn + 16 distinct points is exact.
pub fn curve_ideal_piece<R: Rng + ?Sized>(
    ec: &EmbeddedCurve,
    m: usize,
    rng: &mut R,
) -> Result<GradedPiece> {
    if m == 0 {
        return Err(Error::OutOfRange("curve ideal piece needs m >= 1".into()));
    }
    let n = ec.degree();
    let pts = ec.sample_points(curve_sample_count(n, m), rng)?;
    let coords: Vec<Vec<u64>> = pts.iter().map(|p| ec.embed(p)).collect::<Result<_>>()?;
    let mons = MonomialSet::new(n, m);
    let basis = evaluation_matrix(ec.field(), &mons, &coords).kernel_basis();
    let expected = binomial((n + m - 1) as i64, m as i64) as usize - m * n;
    if basis.cols() != expected {
        return Err(Error::Inconsistent(format!(
            "(I_E)_{m} has dimension {} instead of {expected}",
            basis.cols()
        )));
    }
    GradedPiece::new(n, m, basis)
}

/// The (n-d) x d matrix of linear forms (u_i v_j) for u_i spanning
/// H^0(nA - D) and v_j spanning H^0(D).
#[derive(Debug, Clone)]
pub struct ScrollMatrix {
    field: PrimeField,
    n: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u64>>,
    divisor: Divisor,
}

impl ScrollMatrix {
    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Linear form in entry (i, j).
    pub fn entry(&self, i: usize, j: usize) -> &[u64] {
        &self.entries[i * self.cols + j]
    }

    pub fn evaluate_at(&self, point: &[u64]) -> FieldMatrix {
        let f = self.field;
        FieldMatrix::from_fn(f, self.rows, self.cols, |i, j| {
            self.entry(i, j)
                .iter()
                .zip(point)
                .fold(0, |acc, (&a, &x)| f.add(acc, f.mul(a, x)))
        })
    }
}

pub fn scroll_matrix<R: Rng + ?Sized>(
    ec: &EmbeddedCurve,
    d_div: &Divisor,
    rng: &mut R,
) -> Result<ScrollMatrix> {
    let n = ec.degree();
    let d = d_div.degree();
    let sections = ec.basis_of_l_d(d_div, rng)?;
    let twist = ec.basis_of_twist(d_div)?;
    let mut entries = Vec::with_capacity((n - d) * d);
    for i in 0..twist.cols() {
        entries.extend(sections.multiply_into(ec, &twist.column(i))?);
    }
    Ok(ScrollMatrix {
        field: ec.field(),
        n,
        rows: n - d,
        cols: d,
        entries,
        divisor: d_div.clone(),
    })
}

/// Dense polynomial of fixed degree over a `MonomialSet`.
fn times_linear(
    f: &PrimeField,
    poly: &[u64],
    lin: &[u64],
    table: &[Vec<usize>],
    out_len: usize,
) -> Vec<u64> {
    let mut out = vec![0u64; out_len];
    for (k, &c) in poly.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (j, &l) in lin.iter().enumerate() {
            if l != 0 {
                let t = table[k][j];
                out[t] = f.add(out[t], f.mul(c, l));
            }
        }
    }
    out
}

/// Determinant of the square submatrix on `rows` (all columns), by Laplace
/// expansion along the last column.
fn minor(
    sm: &ScrollMatrix,
    rows: &[usize],
    sets: &[MonomialSet],
    tables: &[Vec<Vec<usize>>],
) -> Vec<u64> {
    let f = sm.field;
    let k = rows.len();
    if k == 0 {
        return vec![1];
    }
    let col = k - 1;
    let mut out = vec![0u64; sets[k].len()];
    for (pos, &r) in rows.iter().enumerate() {
        let rest: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
        let sub = minor(sm, &rest, sets, tables);
        let term = times_linear(&f, &sub, sm.entry(r, col), &tables[k - 1], sets[k].len());
        let sign_neg = (pos + col) % 2 == 1;
        for (o, t) in out.iter_mut().zip(term) {
            *o = if sign_neg { f.sub(*o, t) } else { f.add(*o, t) };
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Degree-m piece of the ideal of maximal minors.
pub fn scroll_ideal_piece(sm: &ScrollMatrix, m: usize) -> Result<GradedPiece> {
    let (n, d) = (sm.n, sm.cols);
    let f = sm.field;
    if m < d {
        return Ok(GradedPiece::zero(f, n, m));
    }
    let sets: Vec<MonomialSet> = (0..=m).map(|k| MonomialSet::new(n, k)).collect();
    let tables: Vec<Vec<Vec<usize>>> = (0..m)
        .map(|k| sets[k].times_variable_table(&sets[k + 1]))
        .collect();
    let mut gens: Vec<Vec<u64>> = subsets(sm.rows, d)
        .iter()
        .map(|rows| minor(sm, rows, &sets, &tables))
        .collect();
    for k in d..m {
        gens = gens
            .iter()
            .flat_map(|g| {
                (0..n).map(|j| {
                    let mut e = vec![0u64; n];
                    e[j] = 1;
                    times_linear(&f, g, &e, &tables[k], sets[k + 1].len())
                })
            })
            .collect();
        let reduced = FieldMatrix::from_columns(f, sets[k + 1].len(), &gens).column_space_basis();
        gens = reduced.columns();
    }
    let basis = FieldMatrix::from_columns(f, sets[m].len(), &gens).column_space_basis();
    GradedPiece::new(n, m, basis)
}

/// A point on Sec_{d-1} E: a combination of d - 1 distinct curve points with
/// nonzero coefficients.
pub fn secant_point<R: Rng + ?Sized>(
    ec: &EmbeddedCurve,
    d: usize,
    rng: &mut R,
) -> Result<Vec<u64>> {
    let f = ec.field();
    let pts = ec.sample_points(d - 1, rng)?;
    let mut out = vec![0u64; ec.degree()];
    for p in &pts {
        let c = rng.gen_range(1..f.modulus());
        for (o, v) in out.iter_mut().zip(ec.embed(p)?) {
            *o = f.add(*o, f.mul(c, v));
        }
    }
    Ok(out)
}

/// Number of doublings the secant sampler may perform before giving up.
pub const MAX_DOUBLINGS: usize = 3;

/// (I_{Sec_{d-1}})_m by evaluation at random secant points. The sample count
/// starts at 2 C(n+m-1, m) + 32 and doubles until the kernel dimension has
/// not moved over two consecutive doublings.
///
/// Parameters up to d = n/2 + 1 are accepted so that the first piece of the
/// next secant variety can be probed as well.
pub fn secant_ideal_piece<R: Rng + ?Sized>(
    ec: &EmbeddedCurve,
    d: usize,
    m: usize,
    rng: &mut R,
) -> Result<GradedPiece> {
    let n = ec.degree();
    if d < 2 || d > n / 2 + 1 {
        return Err(Error::OutOfRange(format!(
            "secant parameter must satisfy 2 <= d <= n/2 + 1, got d = {d}, n = {n}"
        )));
    }
    let f = ec.field();
    let mons = MonomialSet::new(n, m);
    let batch = |count: usize, rng: &mut R| -> Result<FieldMatrix> {
        let pts = (0..count)
            .map(|_| secant_point(ec, d, rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(evaluation_matrix(f, &mons, &pts))
    };
    let start = 2 * mons.len() + 32;
    let mut kernel = batch(start, rng)?.kernel_basis();
    let mut total = start;
    let mut history = vec![kernel.cols()];
    for _ in 0..MAX_DOUBLINGS {
        if kernel.cols() == 0 {
            break;
        }
        // doubling the sample: restrict the current kernel to `total` fresh rows
        let restricted = batch(total, rng)?.mul(&kernel)?;
        kernel = kernel.mul(&restricted.kernel_basis())?;
        total *= 2;
        history.push(kernel.cols());
        let k = history.len();
        if k >= 3 && history[k - 1] == history[k - 2] && history[k - 2] == history[k - 3] {
            break;
        }
    }
    let k = history.len();
    let stable = history[k - 1] == 0
        || (k >= 3 && history[k - 1] == history[k - 2] && history[k - 2] == history[k - 3]);
    if !stable {
        return Err(Error::SamplingFailed(format!(
            "kernel dimensions {history:?} did not stabilise; increase p"
        )));
    }
    // canonical basis, independent of how the kernel was reached
    let basis = kernel.column_space_basis();
    GradedPiece::new(n, m, basis)
}

/// Rank of the Jacobian matrix of the piece's basis at a random point of
/// Sec_{d-1} E built from d - 1 distinct curve points.
pub fn jacobian_corank_check<R: Rng + ?Sized>(
    ec: &EmbeddedCurve,
    d: usize,
    piece: &GradedPiece,
    rng: &mut R,
) -> Result<usize> {
    if piece.dim() == 0 || piece.degree() == 0 {
        return Err(Error::OutOfRange("Jacobian check needs a nonzero piece".into()));
    }
    let f = ec.field();
    let n = ec.degree();
    let point = secant_point(ec, d, rng)?;
    let mons = piece.monomials();
    let lower = MonomialSet::new(n, piece.degree() - 1);
    let lower_vals = lower.evaluate(&f, &point);
    // partials[k][j] = d m_k / d x_j at the point
    let jac = FieldMatrix::from_fn(f, piece.dim(), n, |col, j| {
        let form = piece.basis().column(col);
        let mut acc = 0;
        for (k, &c) in form.iter().enumerate() {
            let e = mons.exponents(k);
            if c == 0 || e[j] == 0 {
                continue;
            }
            let mut g = e.to_vec();
            g[j] -= 1;
            let v = f.mul(e[j] as u64, lower_vals[lower.index_of(&g).expect("same variables")]);
            acc = f.add(acc, f.mul(c, v));
        }
        acc
    });
    Ok(jac.rank())
}
