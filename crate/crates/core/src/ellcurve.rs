//! Elliptic curves in short Weierstrass form over GF(p), the pole-order
//! bases of L(nA) with A the point at infinity, and the embedding
//! E -> P^{n-1} they define.

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactlin::{FieldMatrix, PrimeField};

/// y^2 = x^3 + a x + b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Curve {
    field: PrimeField,
    a: u64,
    b: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn coords(&self) -> Option<(u64, u64)> {
        match *self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, y } => Some((x, y)),
        }
    }
}

impl Curve {
    pub fn new(field: PrimeField, a: u64, b: u64) -> Result<Self> {
        let a = field.reduce(a);
        let b = field.reduce(b);
        let a3 = field.mul(field.mul(a, a), a);
        let disc = field.add(field.mul(4, a3), field.mul(27, field.mul(b, b)));
        if disc == 0 {
            return Err(Error::SingularCurve {
                a,
                b,
                p: field.modulus(),
            });
        }
        Ok(Curve { field, a, b })
    }

    /// The curve y^2 = x^3 + 2x + 3 used unless the caller overrides it.
    pub fn default_for(field: PrimeField) -> Result<Self> {
        Self::new(field, 2, 3)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// x^3 + a x + b
    pub fn rhs(&self, x: u64) -> u64 {
        let f = self.field;
        let x2 = f.mul(x, x);
        f.add(f.add(f.mul(x2, x), f.mul(self.a, x)), self.b)
    }

    pub fn contains(&self, pt: &CurvePoint) -> bool {
        match *pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                x < self.field.modulus()
                    && y < self.field.modulus()
                    && self.field.mul(y, y) == self.rhs(x)
            }
        }
    }

    pub fn point(&self, x: u64, y: u64) -> Result<CurvePoint> {
        let pt = CurvePoint::Affine {
            x: self.field.reduce(x),
            y: self.field.reduce(y),
        };
        if self.contains(&pt) {
            Ok(pt)
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn neg(&self, pt: &CurvePoint) -> CurvePoint {
        match *pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x,
                y: self.field.neg(y),
            },
        }
    }

    /// Chord-and-tangent addition with the point at infinity as identity.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let f = self.field;
        let (x1, y1, x2, y2) = match (*p, *q) {
            (CurvePoint::Infinity, _) => return *q,
            (_, CurvePoint::Infinity) => return *p,
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let slope = if x1 == x2 {
            if f.add(y1, y2) == 0 {
                return CurvePoint::Infinity;
            }
            let num = f.add(f.mul(3, f.mul(x1, x1)), self.a);
            f.mul(num, f.inv(f.mul(2, y1)))
        } else {
            f.mul(f.sub(y2, y1), f.inv(f.sub(x2, x1)))
        };
        let x3 = f.sub(f.sub(f.mul(slope, slope), x1), x2);
        let y3 = f.sub(f.mul(slope, f.sub(x1, x3)), y1);
        CurvePoint::Affine { x: x3, y: y3 }
    }

    /// k * pt by double-and-add.
    pub fn mul(&self, mut k: u64, pt: &CurvePoint) -> CurvePoint {
        let mut acc = CurvePoint::Infinity;
        let mut base = *pt;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn sum<'a>(&self, pts: impl IntoIterator<Item = &'a CurvePoint>) -> CurvePoint {
        pts.into_iter()
            .fold(CurvePoint::Infinity, |acc, q| self.add(&acc, q))
    }

    /// Affine point with x uniform among abscissas on the curve and a random
    /// choice of sign for y.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<CurvePoint> {
        let p = self.field.modulus();
        for _ in 0..10 * p {
            let x = rng.gen_range(0..p);
            if let Some(y) = self.field.sqrt(self.rhs(x)) {
                let y = if rng.gen::<bool>() { self.field.neg(y) } else { y };
                return Ok(CurvePoint::Affine { x, y });
            }
        }
        Err(Error::Inconsistent(format!(
            "no affine point found on y^2 = x^3 + {}x + {} over GF({p})",
            self.a, self.b
        )))
    }
}

/// A reduced effective divisor: distinct affine points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    points: Vec<CurvePoint>,
}

impl Divisor {
    pub fn new(curve: &Curve, points: Vec<CurvePoint>) -> Result<Self> {
        let mut seen = HashSet::new();
        for pt in &points {
            if pt.is_infinity() {
                return Err(Error::InvalidDivisor(
                    "the point at infinity is the origin and may not appear".into(),
                ));
            }
            if !curve.contains(pt) {
                return Err(Error::NotOnCurve);
            }
            if !seen.insert(*pt) {
                return Err(Error::InvalidDivisor("repeated point".into()));
            }
        }
        Ok(Divisor { points })
    }

    pub fn empty() -> Self {
        Divisor { points: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn contains(&self, pt: &CurvePoint) -> bool {
        self.points.contains(pt)
    }
}

/// Monomials x^i y^j (j <= 1) with pole order 2i + 3j <= n at infinity,
/// sorted by pole order. These span L(nA).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionBasis {
    n: usize,
    exponents: Vec<(u32, u32)>,
}

/// Position of the monomial of the given pole order in any `SectionBasis`.
fn pole_index(order: usize) -> usize {
    debug_assert!(order != 1);
    if order == 0 {
        0
    } else {
        order - 1
    }
}

pub fn rr_basis(n: usize) -> Result<SectionBasis> {
    if n < 2 {
        return Err(Error::OutOfRange(format!(
            "L(nA) basis needs n >= 2, got {n}"
        )));
    }
    let exponents = std::iter::once(0)
        .chain(2..=n)
        .map(|k| {
            let j = (k % 2) as u32;
            ((k as u32 - 3 * j) / 2, j)
        })
        .collect();
    Ok(SectionBasis { n, exponents })
}

impl SectionBasis {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.exponents
    }

    pub fn pole_orders(&self) -> Vec<u32> {
        self.exponents.iter().map(|&(i, j)| 2 * i + 3 * j).collect()
    }

    pub fn evaluate(&self, field: &PrimeField, x: u64, y: u64) -> Vec<u64> {
        self.exponents
            .iter()
            .map(|&(i, j)| {
                let v = field.pow(x, i as u64);
                if j == 1 {
                    field.mul(v, y)
                } else {
                    v
                }
            })
            .collect()
    }
}

/// Element e(x) + y o(x) of the affine coordinate ring GF(p)[x, y]/(y^2 - x^3 - ax - b).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElem {
    even: Vec<u64>,
    odd: Vec<u64>,
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn poly_add(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, x) in out.iter_mut().enumerate() {
        *x = f.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0));
    }
    out
}

impl RingElem {
    /// The function with coefficient vector `coeffs` in `basis`.
    pub fn from_coefficients(basis: &SectionBasis, coeffs: &[u64]) -> Self {
        assert_eq!(coeffs.len(), basis.len(), "coefficient vector length");
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (&(i, j), &c) in basis.exponents.iter().zip(coeffs) {
            let target = if j == 0 { &mut even } else { &mut odd };
            let i = i as usize;
            if target.len() <= i {
                target.resize(i + 1, 0);
            }
            target[i] = c;
        }
        let mut e = RingElem { even, odd };
        trim(&mut e.even);
        trim(&mut e.odd);
        e
    }

    pub fn mul(&self, other: &RingElem, curve: &Curve) -> RingElem {
        let f = curve.field;
        let cubic = vec![curve.b, curve.a, 0, 1];
        let oo = poly_mul(&f, &poly_mul(&f, &self.odd, &other.odd), &cubic);
        let mut even = poly_add(&f, &poly_mul(&f, &self.even, &other.even), &oo);
        let mut odd = poly_add(
            &f,
            &poly_mul(&f, &self.even, &other.odd),
            &poly_mul(&f, &self.odd, &other.even),
        );
        trim(&mut even);
        trim(&mut odd);
        RingElem { even, odd }
    }

    /// Pole order at infinity (0 for the zero function).
    pub fn pole_order(&self) -> usize {
        let e = self.even.len().checked_sub(1).map_or(0, |d| 2 * d);
        let o = self.odd.len().checked_sub(1).map_or(0, |d| 2 * d + 3);
        e.max(o)
    }

    /// Coefficients in the pole-order basis of L(mA).
    pub fn to_coefficients(&self, m: usize) -> Result<Vec<u64>> {
        let basis_len = rr_basis(m)?.len();
        if self.pole_order() > m {
            return Err(Error::OutOfRange(format!(
                "function with pole order {} is not in L({m}A)",
                self.pole_order()
            )));
        }
        let mut out = vec![0u64; basis_len];
        for (i, &c) in self.even.iter().enumerate() {
            if c != 0 {
                out[pole_index(2 * i)] = c;
            }
        }
        for (i, &c) in self.odd.iter().enumerate() {
            if c != 0 {
                out[pole_index(2 * i + 3)] = c;
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, f: &PrimeField, x: u64, y: u64) -> u64 {
        let horner = |p: &[u64]| p.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c));
        f.add(horner(&self.even), f.mul(y, horner(&self.odd)))
    }
}

/// E in P^{n-1} through the complete linear system |nA|.
#[derive(Debug, Clone)]
pub struct EmbeddedCurve {
    curve: Curve,
    n: usize,
    basis: SectionBasis,
    seed: u64,
}

impl EmbeddedCurve {
    pub fn new(curve: Curve, n: usize, seed: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::OutOfRange(format!(
                "embedding degree must be at least 3, got {n}"
            )));
        }
        Ok(EmbeddedCurve {
            curve,
            n,
            basis: rr_basis(n)?,
            seed,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn field(&self) -> PrimeField {
        self.curve.field
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &SectionBasis {
        &self.basis
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A generator seeded from the curve's sampler seed.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Homogeneous coordinates of the image of an affine point.
    pub fn embed(&self, pt: &CurvePoint) -> Result<Vec<u64>> {
        match *pt {
            CurvePoint::Infinity => Err(Error::InvalidDivisor(
                "the origin is not evaluated in affine coordinates".into(),
            )),
            CurvePoint::Affine { x, y } => Ok(self.basis.evaluate(&self.curve.field, x, y)),
        }
    }

    /// One row per point, one column per basis function.
    pub fn evaluate_basis(&self, pts: &[CurvePoint]) -> Result<FieldMatrix> {
        let mut seen = HashSet::new();
        let mut rows = Vec::with_capacity(pts.len());
        for pt in pts {
            if !seen.insert(*pt) {
                return Err(Error::InvalidDivisor("repeated point".into()));
            }
            rows.push(self.embed(pt)?);
        }
        if rows.is_empty() {
            return Ok(FieldMatrix::zeros(self.field(), 0, self.n));
        }
        Ok(FieldMatrix::from_rows(self.field(), &rows))
    }

    /// `count` distinct affine points.
    pub fn sample_points<R: Rng + ?Sized>(
        &self,
        count: usize,
        rng: &mut R,
    ) -> Result<Vec<CurvePoint>> {
        let p = self.field().modulus();
        // Hasse: at least p + 1 - 2 sqrt(p) points, one of them at infinity
        let available = (p as f64 - 2.0 * (p as f64).sqrt()).floor().max(0.0) as usize;
        if count > available / 2 {
            return Err(Error::PrimeTooSmall {
                required: crate::exactlin::next_prime(estimate_prime_for_points(count)),
                reason: format!("{count} distinct curve points needed"),
            });
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(count);
        let mut tries = 0usize;
        while out.len() < count {
            let pt = self.curve.random_point(rng)?;
            if seen.insert(pt) {
                out.push(pt);
            }
            tries += 1;
            if tries > 100 * count + 1000 {
                return Err(Error::PrimeTooSmall {
                    required: crate::exactlin::next_prime(estimate_prime_for_points(count)),
                    reason: format!("could not draw {count} distinct curve points"),
                });
            }
        }
        Ok(out)
    }

    pub fn random_divisor<R: Rng + ?Sized>(&self, degree: usize, rng: &mut R) -> Result<Divisor> {
        let pts = self.sample_points(degree, rng)?;
        Divisor::new(&self.curve, pts)
    }

    /// Columns: coefficient vectors of a basis of L(nA - D) inside L(nA).
    pub fn basis_of_twist(&self, d_div: &Divisor) -> Result<FieldMatrix> {
        if d_div.degree() >= self.n {
            return Err(Error::OutOfRange(format!(
                "divisor of degree {} is too large for L({}A - D)",
                d_div.degree(),
                self.n
            )));
        }
        if d_div.degree() == 0 {
            return Ok(FieldMatrix::identity(self.field(), self.n));
        }
        let k = self.evaluate_basis(d_div.points())?.kernel_basis();
        if k.cols() != self.n - d_div.degree() {
            return Err(Error::Inconsistent(format!(
                "L(nA - D) has dimension {} instead of {}",
                k.cols(),
                self.n - d_div.degree()
            )));
        }
        Ok(k)
    }

    /// Sections of O_E(D) for a reduced divisor D of degree d with 2 <= d <= n/2.
    pub fn basis_of_l_d<R: Rng + ?Sized>(
        &self,
        d_div: &Divisor,
        rng: &mut R,
    ) -> Result<DivisorSections> {
        let d = d_div.degree();
        if d < 2 || 2 * d > self.n {
            return Err(Error::OutOfRange(format!(
                "L(D) needs 2 <= deg D <= n/2, got deg D = {d}, n = {}",
                self.n
            )));
        }
        let curve = &self.curve;
        let target = curve.neg(&curve.sum(d_div.points()));
        let complement = 'search: {
            for _ in 0..200 {
                let mut pts = self.sample_points(self.n - d - 1, rng)?;
                let last = curve.add(&target, &curve.neg(&curve.sum(&pts)));
                pts.push(last);
                if last.is_infinity() || pts.iter().any(|q| d_div.contains(q)) {
                    continue;
                }
                if let Ok(div) = Divisor::new(curve, pts) {
                    break 'search div;
                }
            }
            return Err(Error::SamplingFailed(
                "no reduced complement divisor found".into(),
            ));
        };

        let mut all = d_div.points().to_vec();
        all.extend_from_slice(complement.points());
        let h = self.evaluate_basis(&all)?.kernel_basis();
        if h.cols() != 1 {
            return Err(Error::Inconsistent(format!(
                "D + D' should be a hyperplane section, found {} sections",
                h.cols()
            )));
        }
        let numerators = self.basis_of_twist(&complement)?;
        Ok(DivisorSections {
            divisor: d_div.clone(),
            complement,
            denominator: h.column(0),
            numerators,
        })
    }

    /// Rank of the embedded points of D; equals deg D for deg D <= n - 1.
    pub fn divisor_span_rank(&self, d_div: &Divisor) -> Result<usize> {
        if d_div.degree() > self.n - 1 {
            return Err(Error::OutOfRange(format!(
                "span lemma needs deg D <= n - 1 = {}, got {}",
                self.n - 1,
                d_div.degree()
            )));
        }
        Ok(self.evaluate_basis(d_div.points())?.rank())
    }
}

/// A bound on p beyond which `sample_points` can draw `count` distinct points.
pub fn estimate_prime_for_points(count: usize) -> u64 {
    // p - 2 sqrt(p) >= 2 count holds once p >= 2 count + 4 sqrt(count) + 8
    let c = count as f64;
    (2.0 * c + 4.0 * c.sqrt() + 8.0).ceil() as u64
}

/// L(D) realised as {g/h : g in L(nA - D')} where h cuts out D + D' with
/// D + D' ~ nA.
#[derive(Debug, Clone)]
pub struct DivisorSections {
    divisor: Divisor,
    complement: Divisor,
    denominator: Vec<u64>,
    numerators: FieldMatrix,
}

impl DivisorSections {
    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn complement(&self) -> &Divisor {
        &self.complement
    }

    pub fn dim(&self) -> usize {
        self.numerators.cols()
    }

    /// Coefficients of h in the basis of L(nA).
    pub fn denominator(&self) -> &[u64] {
        &self.denominator
    }

    /// Columns: coefficients of the numerators g_j in L(nA).
    pub fn numerators(&self) -> &FieldMatrix {
        &self.numerators
    }

    /// Values g_j(P)/h(P); one row per point. Points where h vanishes
    /// (the support of D and of D') are rejected.
    pub fn evaluate(&self, ec: &EmbeddedCurve, pts: &[CurvePoint]) -> Result<FieldMatrix> {
        let f = ec.field();
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(pts.len());
        for pt in pts {
            let coords = ec.embed(pt)?;
            let h = dot(&f, &coords, &self.denominator);
            if h == 0 {
                return Err(Error::Pole);
            }
            let hinv = f.inv(h);
            rows.push(
                (0..self.dim())
                    .map(|j| f.mul(dot(&f, &coords, &self.numerators.column(j)), hinv))
                    .collect(),
            );
        }
        Ok(FieldMatrix::from_fn(f, rows.len(), self.dim(), |i, j| {
            rows[i][j]
        }))
    }

    /// For `u` in L(nA - D) (coefficients in L(nA)), the coefficients in L(nA)
    /// of u * g_j / h for every j, by multiplying in the coordinate ring and
    /// dividing exactly by h.
    pub fn multiply_into(&self, ec: &EmbeddedCurve, u: &[u64]) -> Result<Vec<Vec<u64>>> {
        let n = ec.degree();
        let basis = ec.basis();
        let curve = ec.curve();
        let h = RingElem::from_coefficients(basis, &self.denominator);
        // columns: basis_k * h written in L(2nA)
        let cols: Vec<Vec<u64>> = (0..n)
            .map(|k| {
                let mut e = vec![0u64; n];
                e[k] = 1;
                RingElem::from_coefficients(basis, &e)
                    .mul(&h, curve)
                    .to_coefficients(2 * n)
            })
            .collect::<Result<_>>()?;
        let times_h = FieldMatrix::from_columns(ec.field(), 2 * n, &cols);
        let u_elem = RingElem::from_coefficients(basis, u);
        (0..self.dim())
            .map(|j| {
                let g = RingElem::from_coefficients(basis, &self.numerators.column(j));
                let prod = u_elem.mul(&g, curve).to_coefficients(2 * n)?;
                times_h.solve(&prod).map_err(|_| {
                    Error::Inconsistent("product u*g is not divisible by h in L(nA)".into())
                })
            })
            .collect()
    }
}

fn dot(f: &PrimeField, a: &[u64], b: &[u64]) -> u64 {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| (acc + x * y) % f.modulus())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::DEFAULT_PRIME;

    fn ec(n: usize, seed: u64) -> EmbeddedCurve {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        EmbeddedCurve::new(Curve::default_for(f).unwrap(), n, seed).unwrap()
    }

    #[test]
    fn singular_curve_rejected() {
        let f = PrimeField::new(97).unwrap();
        assert!(matches!(Curve::new(f, 0, 0), Err(Error::SingularCurve { .. })));
        // 4a^3 + 27b^2 = -108 + 108
        assert!(Curve::new(f, f.from_i64(-3), 2).is_err());
    }

    #[test]
    fn group_law_identity_inverse_and_doubling() {
        let f = PrimeField::new(97).unwrap();
        let c = Curve::new(f, 2, 3).unwrap();
        let p = c.point(3, 6).unwrap();
        assert_eq!(c.add(&p, &CurvePoint::Infinity), p);
        assert_eq!(c.add(&p, &c.neg(&p)), CurvePoint::Infinity);
        // tangent slope (3*9 + 2)/12 = 59, x = 59^2 - 6 = 80, y = 59(3 - 80) - 6 = 10
        assert_eq!(c.add(&p, &p), CurvePoint::Affine { x: 80, y: 10 });
    }

    #[test]
    fn group_law_axioms() {
        let e = ec(6, 0);
        let c = e.curve();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let p = c.random_point(&mut rng).unwrap();
            let q = c.random_point(&mut rng).unwrap();
            let r = c.random_point(&mut rng).unwrap();
            assert_eq!(c.add(&p, &q), c.add(&q, &p));
            assert_eq!(c.add(&c.add(&p, &q), &r), c.add(&p, &c.add(&q, &r)));
            assert!(c.contains(&c.add(&p, &q)));
        }
        let p = c.random_point(&mut rng).unwrap();
        let mut acc = CurvePoint::Infinity;
        for m in 0..=20u64 {
            assert_eq!(c.mul(m, &p), acc);
            acc = c.add(&acc, &p);
        }
    }

    #[test]
    fn random_points_are_deterministic_and_spread() {
        let e = ec(6, 0);
        let c = e.curve();
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(c.random_point(&mut a).unwrap(), c.random_point(&mut b).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut seen = HashSet::new();
        for _ in 0..1000 {
            let pt = c.random_point(&mut rng).unwrap();
            assert!(c.contains(&pt));
            seen.insert(pt);
        }
        // about 50 expected collisions among ~10^4 points
        assert!(seen.len() >= 900, "{}", seen.len());
    }

    #[test]
    fn rr_basis_small_cases() {
        assert!(rr_basis(1).is_err());
        assert_eq!(rr_basis(2).unwrap().exponents(), &[(0, 0), (1, 0)]);
        assert_eq!(rr_basis(3).unwrap().exponents(), &[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(
            rr_basis(6).unwrap().exponents(),
            &[(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0)]
        );
        assert_eq!(rr_basis(6).unwrap().pole_orders(), vec![0, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn evaluation_rank_is_min_of_points_and_n() {
        for n in [3, 6, 8] {
            for seed in 0..100 {
                let e = ec(n, seed);
                let mut rng = e.rng();
                let pts = e.sample_points(n + 1, &mut rng).unwrap();
                assert_eq!(e.evaluate_basis(&pts).unwrap().rank(), n);
                assert_eq!(e.evaluate_basis(&pts[..1]).unwrap().rank(), 1);
                let k = 1 + seed as usize % n;
                assert_eq!(e.evaluate_basis(&pts[..k]).unwrap().rank(), k);
            }
        }
        let e = ec(3, 1);
        let pts = e.sample_points(5, &mut e.rng()).unwrap();
        assert_eq!(e.evaluate_basis(&pts).unwrap().rank(), 3);
    }

    #[test]
    fn evaluation_rejects_bad_points() {
        let e = ec(5, 1);
        let pts = e.sample_points(2, &mut e.rng()).unwrap();
        assert!(e.evaluate_basis(&[pts[0], pts[0]]).is_err());
        assert!(e.evaluate_basis(&[pts[1], CurvePoint::Infinity]).is_err());
    }

    #[test]
    fn twist_dimensions() {
        let e = ec(6, 3);
        let mut rng = e.rng();
        assert_eq!(e.basis_of_twist(&Divisor::empty()).unwrap().cols(), 6);
        let d = e.random_divisor(2, &mut rng).unwrap();
        let t = e.basis_of_twist(&d).unwrap();
        assert_eq!(t.cols(), 4);
        assert!(e.evaluate_basis(d.points()).unwrap().mul(&t).unwrap().is_zero());
        let e7 = ec(7, 4);
        let d = e7.random_divisor(3, &mut e7.rng()).unwrap();
        assert_eq!(e7.basis_of_twist(&d).unwrap().cols(), 4);
        for n in 4..=9 {
            let e = ec(n, n as u64);
            let mut rng = e.rng();
            for d in 0..n {
                let div = e.random_divisor(d, &mut rng).unwrap();
                assert_eq!(e.basis_of_twist(&div).unwrap().cols(), n - d);
            }
        }
    }

    #[test]
    fn divisor_validation() {
        let e = ec(5, 2);
        let c = *e.curve();
        let pts = e.sample_points(2, &mut e.rng()).unwrap();
        assert!(Divisor::new(&c, vec![pts[0], pts[0]]).is_err());
        assert!(Divisor::new(&c, vec![CurvePoint::Infinity]).is_err());
        assert!(Divisor::new(&c, pts).is_ok());
    }

    #[test]
    fn l_d_has_dimension_d_and_rejects_poles() {
        let e = ec(6, 8);
        let mut rng = e.rng();
        let d = e.random_divisor(2, &mut rng).unwrap();
        let ld = e.basis_of_l_d(&d, &mut rng).unwrap();
        assert_eq!(ld.dim(), 2);
        let pts = e.sample_points(10, &mut rng).unwrap();
        assert_eq!(ld.evaluate(&e, &pts).unwrap().rank(), 2);
        assert_eq!(ld.evaluate(&e, &d.points()[..1]), Err(Error::Pole));
        assert_eq!(ld.evaluate(&e, &ld.complement().points()[..1]), Err(Error::Pole));
        let small = e.random_divisor(1, &mut rng).unwrap();
        assert!(e.basis_of_l_d(&small, &mut rng).is_err());
    }

    #[test]
    fn l_d_contains_constants() {
        // constants lie in L(D): appending a column of ones keeps the rank at d
        let e = ec(8, 21);
        let mut rng = e.rng();
        let d = e.random_divisor(3, &mut rng).unwrap();
        let ld = e.basis_of_l_d(&d, &mut rng).unwrap();
        let pts = e.sample_points(12, &mut rng).unwrap();
        let vals = ld.evaluate(&e, &pts).unwrap();
        let ones = FieldMatrix::from_fn(e.field(), 12, 1, |_, _| 1);
        assert_eq!(vals.hstack(&ones).unwrap().rank(), 3);
    }

    #[test]
    fn products_land_in_l_na() {
        // oracle: pointwise values of u * (g/h) are values of a function in L(nA)
        for (n, d, seed) in [(6, 2, 1u64), (6, 3, 2), (7, 3, 3), (8, 4, 4)] {
            let e = ec(n, seed);
            let mut rng = e.rng();
            let div = e.random_divisor(d, &mut rng).unwrap();
            let ld = e.basis_of_l_d(&div, &mut rng).unwrap();
            let twist = e.basis_of_twist(&div).unwrap();
            let pts = e.sample_points(2 * n + 4, &mut rng).unwrap();
            let eval = e.evaluate_basis(&pts).unwrap();
            let v = ld.evaluate(&e, &pts).unwrap();
            let u_vals = eval.mul(&twist).unwrap();
            let f = e.field();
            for i in 0..twist.cols() {
                let prods = ld.multiply_into(&e, &twist.column(i)).unwrap();
                for (j, coeffs) in prods.iter().enumerate() {
                    let vals: Vec<u64> = (0..pts.len())
                        .map(|r| f.mul(u_vals.get(r, i), v.get(r, j)))
                        .collect();
                    assert_eq!(eval.solve(&vals).unwrap(), *coeffs);
                }
            }
        }
    }

    #[test]
    fn span_lemma() {
        let e = ec(6, 0);
        let d1 = e.random_divisor(1, &mut e.rng()).unwrap();
        assert_eq!(e.divisor_span_rank(&d1).unwrap(), 1);
        let d6 = e.random_divisor(6, &mut e.rng()).unwrap();
        assert!(e.divisor_span_rank(&d6).is_err());
        for n in [6usize, 8] {
            for trial in 0..100u64 {
                let e = ec(n, trial);
                let div = e.random_divisor(n - 1, &mut e.rng()).unwrap();
                assert_eq!(e.divisor_span_rank(&div).unwrap(), n - 1);
            }
        }
    }

    #[test]
    fn ring_multiplication_matches_pointwise() {
        let e = ec(5, 9);
        let f = e.field();
        let mut rng = e.rng();
        let basis = e.basis();
        let a: Vec<u64> = (0..5).map(|_| rng.gen_range(0..f.modulus())).collect();
        let b: Vec<u64> = (0..5).map(|_| rng.gen_range(0..f.modulus())).collect();
        let prod = RingElem::from_coefficients(basis, &a).mul(&RingElem::from_coefficients(basis, &b), e.curve());
        let coeffs = prod.to_coefficients(10).unwrap();
        let big = rr_basis(10).unwrap();
        for pt in e.sample_points(20, &mut rng).unwrap() {
            let (x, y) = pt.coords().unwrap();
            let va = dot(&f, &basis.evaluate(&f, x, y), &a);
            let vb = dot(&f, &basis.evaluate(&f, x, y), &b);
            let vp = dot(&f, &big.evaluate(&f, x, y), &coeffs);
            assert_eq!(f.mul(va, vb), vp);
            assert_eq!(prod.evaluate(&f, x, y), vp);
        }
        assert!(prod.to_coefficients(9).is_err());
    }
}
