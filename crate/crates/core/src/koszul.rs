//! Linear strands via Koszul cohomology: the strand Betti number at twist i
//! is the homology of Λ^{a+1}V ⊗ I_{d-1} -> Λ^a V ⊗ I_d -> Λ^{a-1}V ⊗ S_{d+1}
//! with a = i - d. Also the scrollar-syzygy spanning experiment.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::diagrams::BettiDiagram;
use crate::ellcurve::{Divisor, EmbeddedCurve};
use crate::error::{Error, Result};
use crate::exactlin::{FieldMatrix, Span};
use crate::formulas::SecantSpec;
use crate::idealgen::{
    curve_ideal_piece, scroll_ideal_piece, scroll_matrix, secant_ideal_piece, GradedPiece,
    MonomialSet, ScrollMatrix,
};

/// Largest dense matrix (rows * cols) the engine will build.
pub const MAX_ENTRIES: usize = 20_000_000;

/// a-element subsets of {0, .., n-1} in lexicographic order, as bitmasks.
#[derive(Debug, Clone)]
pub struct WedgeBasis {
    n: usize,
    a: usize,
    subsets: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl WedgeBasis {
    pub fn new(n: usize, a: usize) -> Self {
        assert!(n <= 64, "at most 64 variables");
        let mut subsets = Vec::new();
        fn go(start: usize, n: usize, left: usize, mask: u64, out: &mut Vec<u64>) {
            if left == 0 {
                out.push(mask);
                return;
            }
            for i in start..n {
                go(i + 1, n, left - 1, mask | 1 << i, out);
            }
        }
        if a <= n {
            go(0, n, a, 0, &mut subsets);
        }
        let index = subsets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        WedgeBasis {
            n,
            a,
            subsets,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> usize {
        self.a
    }

    /// Elements of the k-th subset in increasing order.
    pub fn subset(&self, k: usize) -> Vec<usize> {
        let m = self.subsets[k];
        (0..self.n).filter(|&i| m >> i & 1 == 1).collect()
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }
}

fn guard(rows: usize, cols: usize) -> Result<()> {
    if rows.saturating_mul(cols) > MAX_ENTRIES {
        return Err(Error::TooLarge {
            rows,
            cols,
            limit: MAX_ENTRIES,
        });
    }
    Ok(())
}

/// Matrix of ω ⊗ f ↦ Σ_k (-1)^k x_{i_k} f ⊗ (ω without i_k), from
/// Λ^a V ⊗ piece (columns ordered subset-major) to Λ^{a-1} V ⊗ S_{m+1}
/// (rows ordered subset-major, monomials in `MonomialSet` order).
pub fn koszul_map(a: usize, piece: &GradedPiece) -> Result<FieldMatrix> {
    let n = piece.nvars();
    let f = piece.field();
    let src = WedgeBasis::new(n, a);
    let cols = src.len() * piece.dim();
    if a == 0 {
        return Ok(FieldMatrix::zeros(f, 0, cols));
    }
    let tgt = WedgeBasis::new(n, a - 1);
    let mons = piece.monomials();
    let next = MonomialSet::new(n, piece.degree() + 1);
    let rows = tgt.len() * next.len();
    guard(rows, cols)?;
    let table = mons.times_variable_table(&next);
    // sparse view of the basis forms
    let forms: Vec<Vec<(usize, u64)>> = (0..piece.dim())
        .map(|c| {
            piece
                .basis()
                .column(c)
                .into_iter()
                .enumerate()
                .filter(|&(_, v)| v != 0)
                .collect()
        })
        .collect();
    let mut out = FieldMatrix::zeros(f, rows, cols);
    for w in 0..src.len() {
        let omega = src.subset(w);
        let mask = src.subsets[w];
        for (pos, &var) in omega.iter().enumerate() {
            let sigma = tgt.index_of(mask & !(1 << var)).expect("subset of smaller size");
            let negate = pos % 2 == 1;
            for (fi, form) in forms.iter().enumerate() {
                let col = w * piece.dim() + fi;
                for &(k, c) in form {
                    let row = sigma * next.len() + table[k][var];
                    let v = if negate { f.neg(c) } else { c };
                    out.set(row, col, f.add(out.get(row, col), v));
                }
            }
        }
    }
    Ok(out)
}

/// The same map on all of S_m, i.e. the Koszul complex of the polynomial ring.
pub fn koszul_map_full(field: crate::exactlin::PrimeField, n: usize, a: usize, m: usize) -> Result<FieldMatrix> {
    let all = FieldMatrix::identity(field, MonomialSet::new(n, m).len());
    koszul_map(a, &GradedPiece::new(n, m, all)?)
}

/// Koszul cycles in Λ^a V ⊗ (I)_m, in the coordinates of `koszul_map`'s source.
#[derive(Debug, Clone)]
pub struct SyzygySpace {
    pub n: usize,
    pub a: usize,
    pub degree: usize,
    pub basis: FieldMatrix,
}

impl SyzygySpace {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }
}

pub fn koszul_kernel(a: usize, piece: &GradedPiece) -> Result<SyzygySpace> {
    let map = koszul_map(a, piece)?;
    let basis = if map.rows() == 0 {
        FieldMatrix::identity(piece.field(), map.cols())
    } else {
        map.kernel_basis()
    };
    Ok(SyzygySpace {
        n: piece.nvars(),
        a,
        degree: piece.degree(),
        basis,
    })
}

/// Betti number of the linear strand at twist i: dim of the Koszul kernel at
/// a = i - d minus the rank of the incoming map from Λ^{a+1} V ⊗ I_{d-1}.
pub fn strand_betti(prev: Option<&GradedPiece>, piece: &GradedPiece, i: usize) -> Result<usize> {
    let (n, d) = (piece.nvars(), piece.degree());
    if i < d || i - d > n.saturating_sub(1) {
        return Err(Error::OutOfRange(format!(
            "twist {i} outside d..=d+n-1 for d = {d}, n = {n}"
        )));
    }
    let a = i - d;
    if piece.dim() == 0 {
        return Ok(0);
    }
    let map = koszul_map(a, piece)?;
    let kernel = map.cols() - map.rank();
    let incoming = match prev {
        Some(p) if p.dim() > 0 => {
            if p.nvars() != n || p.degree() + 1 != d {
                return Err(Error::DimensionMismatch(
                    "previous piece must have the same variables and degree d - 1".into(),
                ));
            }
            koszul_map(a + 1, p)?.rank()
        }
        _ => 0,
    };
    Ok(kernel - incoming)
}

#[derive(Debug, Clone)]
pub enum Variety {
    Curve,
    Scroll(Divisor),
    Secant(usize),
}

/// Degree-d and degree-(d-1) ideal pieces for the variety, d its postulation.
pub fn ideal_pieces<R: Rng + ?Sized>(
    ec: &EmbeddedCurve,
    variety: &Variety,
    rng: &mut R,
) -> Result<(GradedPiece, GradedPiece)> {
    match variety {
        Variety::Curve => Ok((
            curve_ideal_piece(ec, 1, rng)?,
            curve_ideal_piece(ec, 2, rng)?,
        )),
        Variety::Scroll(div) => {
            let sm = scroll_matrix(ec, div, rng)?;
            let d = div.degree();
            Ok((scroll_ideal_piece(&sm, d - 1)?, scroll_ideal_piece(&sm, d)?))
        }
        Variety::Secant(d) => {
            if *d == 2 {
                return ideal_pieces(ec, &Variety::Curve, rng);
            }
            Ok((
                secant_ideal_piece(ec, *d, d - 1, rng)?,
                secant_ideal_piece(ec, *d, *d, rng)?,
            ))
        }
    }
}

/// Strand Betti numbers by twist, d..=n-d, computed from the ideal pieces.
pub fn strand_row<R: Rng + ?Sized>(
    ec: &EmbeddedCurve,
    variety: &Variety,
    rng: &mut R,
) -> Result<Vec<(usize, usize)>> {
    let (prev, piece) = ideal_pieces(ec, variety, rng)?;
    let n = ec.degree();
    let d = piece.degree();
    (d..=n.saturating_sub(d))
        .map(|i| Ok((i, strand_betti(Some(&prev), &piece, i)?)))
        .collect()
}

/// Betti diagram of the variety: the computed linear strand plus the unit at
/// (0,0) and, for Sec_{d-1} (including E), the Gorenstein endpoint (n-2d+2, n).
pub fn full_diagram_from_koszul<R: Rng + ?Sized>(
    ec: &EmbeddedCurve,
    variety: &Variety,
    rng: &mut R,
) -> Result<BettiDiagram> {
    let n = ec.degree();
    let d = match variety {
        Variety::Curve => 2,
        Variety::Scroll(div) => div.degree(),
        Variety::Secant(d) => *d,
    };
    let row = strand_row(ec, variety, rng)?;
    let mut entries = vec![((0, 0), 1u64)];
    entries.extend(row.into_iter().map(|(i, b)| ((i + 1 - d, i), b as u64)));
    if !matches!(variety, Variety::Scroll(_)) {
        let spec = SecantSpec::new(n, d)?;
        entries.push(((spec.codim(), n), 1));
    }
    Ok(BettiDiagram::from_entries(entries))
}

/// The scroll's strand cycles at twist i pushed into Λ^a V ⊗ (I_Sec)_d along
/// the inclusion of ideals, each image re-checked to be a secant cycle.
pub fn scroll_strand_inclusion(
    sm: &ScrollMatrix,
    i: usize,
    sec_piece: &GradedPiece,
    sec_map: Option<&FieldMatrix>,
) -> Result<SyzygySpace> {
    let d = sm.cols();
    if sec_piece.degree() != d || sec_piece.nvars() != sm.nvars() {
        return Err(Error::DimensionMismatch(
            "scroll and secant pieces must share n and d".into(),
        ));
    }
    if i < d {
        return Err(Error::OutOfRange(format!("twist {i} below d = {d}")));
    }
    let a = i - d;
    let scroll = scroll_ideal_piece(sm, d)?;
    let t = sec_piece
        .coordinates_of(&scroll)
        .map_err(|_| Error::Inconsistent("scroll minors are not in the secant piece".into()))?;
    let kernel = koszul_kernel(a, &scroll)?;
    let f = sec_piece.field();
    let blocks = WedgeBasis::new(sm.nvars(), a).len();
    let (ds, dx) = (sec_piece.dim(), scroll.dim());
    // (1 ⊗ T) applied block by block
    let image = FieldMatrix::from_fn(f, blocks * ds, kernel.dim(), |r, c| {
        let (w, k) = (r / ds, r % ds);
        (0..dx).fold(0, |acc, j| {
            f.add(acc, f.mul(t.get(k, j), kernel.basis.get(w * dx + j, c)))
        })
    });
    let owned;
    let map = match sec_map {
        Some(m) => m,
        None => {
            owned = koszul_map(a, sec_piece)?;
            &owned
        }
    };
    if map.rows() > 0 && !map.mul(&image)?.is_zero() {
        return Err(Error::Inconsistent(
            "included scroll syzygy is not a secant syzygy".into(),
        ));
    }
    Ok(SyzygySpace {
        n: sm.nvars(),
        a,
        degree: d,
        basis: image,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanReport {
    pub span_dim: usize,
    pub target_dim: usize,
    pub bundles_used: usize,
}

impl SpanReport {
    pub fn reached(&self) -> bool {
        self.span_dim == self.target_dim
    }
}

/// Samples divisor classes of degree d and accumulates the scrollar syzygies
/// of Sec_{d-1} E at twist i until they span the whole strand term or
/// `max_bundles` classes have been used.
pub fn scrollar_span_check<R: Rng + ?Sized>(
    ec: &EmbeddedCurve,
    d: usize,
    i: usize,
    max_bundles: usize,
    rng: &mut R,
) -> Result<SpanReport> {
    let n = ec.degree();
    if d < 2 || 2 * d > n || i < d || i > n - d {
        return Err(Error::OutOfRange(format!(
            "span check needs 2 <= d <= n/2 and d <= i <= n-d, got n={n} d={d} i={i}"
        )));
    }
    let (_, sec_piece) = ideal_pieces(ec, &Variety::Secant(d), rng)?;
    let a = i - d;
    let sec_map = koszul_map(a, &sec_piece)?;
    let target_dim = if sec_map.rows() == 0 {
        sec_map.cols()
    } else {
        sec_map.cols() - sec_map.rank()
    };
    let mut span = Span::new(ec.field(), sec_map.cols());
    let mut bundles_used = 0;
    while span.dim() < target_dim && bundles_used < max_bundles {
        let div = ec.random_divisor(d, rng)?;
        let sm = scroll_matrix(ec, &div, rng)?;
        let inc = scroll_strand_inclusion(&sm, i, &sec_piece, Some(&sec_map))?;
        span.insert_columns(&inc.basis);
        bundles_used += 1;
    }
    Ok(SpanReport {
        span_dim: span.dim(),
        target_dim,
        bundles_used,
    })
}
