//! Betti diagrams as finitely supported maps (step, twist) -> multiplicity,
//! with the algebra used to assemble resolutions and a tabular renderer.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{binomial, en_term_dim, rf_betti, secant_betti, SecantSpec};

/// Paper orientation lists the highest step leftmost and step 0 rightmost;
/// Macaulay orientation is its mirror image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Paper,
    Macaulay,
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Orientation::Paper),
            "macaulay" => Ok(Orientation::Macaulay),
            other => Err(Error::OutOfRange(format!("unknown orientation {other:?}"))),
        }
    }
}

pub const ORIENTATION_NOTE: &str = "row index is twist - step; paper orientation lists the \
highest step leftmost, macaulay orientation lists step 0 leftmost";

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BettiDiagram {
    entries: BTreeMap<(usize, usize), u64>,
}

impl BettiDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Zero multiplicities are dropped; repeated keys accumulate.
    pub fn from_entries(entries: impl IntoIterator<Item = ((usize, usize), u64)>) -> Self {
        let mut out = Self::new();
        for ((s, t), m) in entries {
            out.bump(s, t, m);
        }
        out
    }

    /// {(0,0): 1}, the unit for `tensor`.
    pub fn unit() -> Self {
        Self::from_entries([((0, 0), 1)])
    }

    fn bump(&mut self, s: usize, t: usize, m: u64) {
        if m > 0 {
            *self.entries.entry((s, t)).or_insert(0) += m;
        }
    }

    pub fn get(&self, step: usize, twist: usize) -> u64 {
        self.entries.get(&(step, twist)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.entries.iter().map(|(&k, &m)| (k, m))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_step(&self) -> Option<usize> {
        self.entries.keys().map(|&(s, _)| s).max()
    }

    pub fn max_twist(&self) -> Option<usize> {
        self.entries.keys().map(|&(_, t)| t).max()
    }

    /// Entries at a given step, by twist.
    pub fn column(&self, step: usize) -> Vec<(usize, u64)> {
        self.entries
            .iter()
            .filter(|(&(s, _), _)| s == step)
            .map(|(&(_, t), &m)| (t, m))
            .collect()
    }

    /// Entries with t - s = r, ordered by step.
    pub fn row(&self, r: i64) -> Vec<(usize, u64)> {
        self.entries
            .iter()
            .filter(|(&(s, t), _)| t as i64 - s as i64 == r)
            .map(|(&(s, _), &m)| (s, m))
            .collect()
    }

    pub fn total_rank(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn add(&self, other: &BettiDiagram) -> BettiDiagram {
        let mut out = self.clone();
        for ((s, t), m) in other.entries() {
            out.bump(s, t, m);
        }
        out
    }

    /// Reflection (s, t) -> (c - s, top - t).
    pub fn dual(&self, c: usize, top: usize) -> Result<BettiDiagram> {
        let mut out = BettiDiagram::new();
        for ((s, t), m) in self.entries() {
            if s > c || t > top {
                return Err(Error::OutOfRange(format!(
                    "entry ({s}, {t}) lies outside the box for c = {c}, top twist = {top}"
                )));
            }
            out.bump(c - s, top - t, m);
        }
        Ok(out)
    }

    /// Betti numbers of the total complex of a tensor product.
    pub fn tensor(&self, other: &BettiDiagram) -> BettiDiagram {
        let mut out = BettiDiagram::new();
        for ((s1, t1), m1) in self.entries() {
            for ((s2, t2), m2) in other.entries() {
                out.bump(s1 + s2, t1 + t2, m1 * m2);
            }
        }
        out
    }

    pub fn shift(&self, steps: usize, twists: usize) -> BettiDiagram {
        BettiDiagram::from_entries(self.entries().map(|((s, t), m)| ((s + steps, t + twists), m)))
    }

    /// Cancels min(a(s,t), a(s+1,t)) from both positions: the two summands of
    /// equal twist in adjacent steps connected by a unit.
    pub fn cancel_diagonal(&self, step: usize, twist: usize) -> Result<BettiDiagram> {
        let a = self.get(step, twist);
        let b = self.get(step + 1, twist);
        if a == 0 || b == 0 {
            return Err(Error::OutOfRange(format!(
                "nothing to cancel at ({step}, {twist}) / ({}, {twist})",
                step + 1
            )));
        }
        let k = a.min(b);
        let mut out = self.clone();
        for key in [(step, twist), (step + 1, twist)] {
            let m = out.entries.get_mut(&key).expect("present");
            *m -= k;
            if *m == 0 {
                out.entries.remove(&key);
            }
        }
        Ok(out)
    }

    /// Σ (-1)^s β_{s,t} z^t, coefficients by twist.
    pub fn k_polynomial(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.max_twist().map_or(0, |t| t + 1)];
        for ((s, t), m) in self.entries() {
            let m = m as i64;
            out[t] += if s % 2 == 0 { m } else { -m };
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.k_polynomial().iter().sum()
    }

    pub fn render(&self, orientation: Orientation) -> String {
        let Some(max_step) = self.max_step() else {
            return String::new();
        };
        let r_of = |s: usize, t: usize| t as i64 - s as i64;
        let r_min = self.entries.keys().map(|&(s, t)| r_of(s, t)).min().unwrap().min(0);
        let r_max = self.entries.keys().map(|&(s, t)| r_of(s, t)).max().unwrap();
        let steps: Vec<usize> = match orientation {
            Orientation::Paper => (0..=max_step).rev().collect(),
            Orientation::Macaulay => (0..=max_step).collect(),
        };
        let cell = |s: usize, r: i64| -> String {
            let t = r + s as i64;
            if t < 0 {
                return "-".into();
            }
            match self.get(s, t as usize) {
                0 => "-".into(),
                m => m.to_string(),
            }
        };
        let grid: Vec<Vec<String>> = (r_min..=r_max)
            .map(|r| steps.iter().map(|&s| cell(s, r)).collect())
            .collect();
        let widths: Vec<usize> = (0..steps.len())
            .map(|k| grid.iter().map(|row| row[k].len()).max().unwrap_or(1))
            .collect();
        let mut out = String::new();
        for row in grid {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Inverse of `render` for diagrams whose rows t - s are all >= 0: the
    /// first line is read as row 0.
    pub fn parse(text: &str, orientation: Orientation) -> Result<BettiDiagram> {
        let rows: Vec<Vec<&str>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split_whitespace().collect())
            .collect();
        let Some(width) = rows.first().map(Vec::len) else {
            return Ok(BettiDiagram::new());
        };
        let mut out = BettiDiagram::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} cells, expected {width}",
                    row.len()
                )));
            }
            for (k, cell) in row.iter().enumerate() {
                if *cell == "-" {
                    continue;
                }
                let m: u64 = cell
                    .parse()
                    .map_err(|_| Error::OutOfRange(format!("bad cell {cell:?} in row {r}")))?;
                if m == 0 {
                    return Err(Error::OutOfRange(format!("explicit zero in row {r}")));
                }
                let s = match orientation {
                    Orientation::Paper => width - 1 - k,
                    Orientation::Macaulay => k,
                };
                out.bump(s, r + s, m);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DiagramJson::from(self)).expect("plain data")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<BettiDiagram> {
        let j: DiagramJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::OutOfRange(format!("malformed diagram JSON: {e}")))?;
        Ok(BettiDiagram::from_entries(
            j.entries.into_iter().map(|e| ((e.step, e.twist), e.mult)),
        ))
    }
}

impl fmt::Display for BettiDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Orientation::Paper))
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    step: usize,
    twist: usize,
    mult: u64,
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    entries: Vec<EntryJson>,
    #[serde(rename = "orientation-note", default)]
    orientation_note: String,
}

impl From<&BettiDiagram> for DiagramJson {
    fn from(d: &BettiDiagram) -> Self {
        DiagramJson {
            entries: d
                .entries()
                .map(|((step, twist), mult)| EntryJson { step, twist, mult })
                .collect(),
            orientation_note: ORIENTATION_NOTE.into(),
        }
    }
}

fn nonneg(v: i64) -> u64 {
    u64::try_from(v).expect("Betti numbers are non-negative")
}

/// The Eagon–Northcott strand of the scroll for deg D = d, without the unit
/// at (0, 0): twist i sits at step i - d + 1.
pub fn en_diagram(spec: SecantSpec) -> BettiDiagram {
    let (n, d) = (spec.n, spec.d);
    BettiDiagram::from_entries(
        spec.strand_range()
            .map(|i| ((i + 1 - d, i), nonneg(en_term_dim(n, d, i)))),
    )
}

/// Structure sheaf of the scroll swept by |D|, deg D = d.
pub fn scroll_diagram(spec: SecantSpec) -> BettiDiagram {
    if spec.is_hypersurface() {
        return hypersurface(spec.n);
    }
    BettiDiagram::unit().add(&en_diagram(spec))
}

fn hypersurface(n: usize) -> BettiDiagram {
    BettiDiagram::from_entries([((0, 0), 1), ((1, n), 1)])
}

/// Sec_{d-1} E from the closed formula for its linear strand.
pub fn secant_diagram(spec: SecantSpec) -> BettiDiagram {
    let (n, d) = (spec.n, spec.d);
    if spec.is_hypersurface() {
        return hypersurface(n);
    }
    let strand = spec
        .strand_range()
        .map(|i| ((i + 1 - d, i), nonneg(secant_betti(n, d, i))));
    BettiDiagram::from_entries(
        std::iter::once(((0, 0), 1))
            .chain(strand)
            .chain(std::iter::once(((spec.codim(), n), 1))),
    )
}

/// Sec_{d-1} E assembled from the scroll strand, its dual and the two
/// endpoint terms O and O(-n).
pub fn mapping_cone(spec: SecantSpec) -> Result<BettiDiagram> {
    let en = en_diagram(spec);
    let c = spec.codim();
    let endpoints = BettiDiagram::from_entries([((0, 0), 1), ((c, spec.n), 1)]);
    Ok(en.add(&en.dual(c, spec.n)?).add(&endpoints))
}

/// The strand of the complex coming from the family of scroll strands:
/// twist i at step i - d + 1 with multiplicity rf_betti(n, d, i).
pub fn rf_diagram(spec: SecantSpec) -> Result<BettiDiagram> {
    let (n, d) = (spec.n, spec.d);
    if spec.is_hypersurface() {
        return Err(Error::OutOfRange(format!(
            "no strand family for the hypersurface case n={n} d={d}"
        )));
    }
    let entries = spec
        .strand_range()
        .map(|i| Ok(((i + 1 - d, i), nonneg(rf_betti(n, d, i)?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(BettiDiagram::from_entries(entries))
}

/// The same strand obtained as Sec_{d-1} plus Sec_d shifted one step, with
/// the two diagonal pairs of units cancelled.
pub fn rf_by_cancellation(spec: SecantSpec) -> Result<BettiDiagram> {
    let (n, d) = (spec.n, spec.d);
    let here = secant_diagram(spec);
    if 2 * d == n {
        // Sec_d fills P^{n-1}; only the endpoints disappear
        return Ok(strip_endpoints(&here, spec));
    }
    let next = secant_diagram(SecantSpec::new(n, d + 1)?);
    here.add(&next.shift(1, 0))
        .cancel_diagonal(0, 0)?
        .cancel_diagonal(spec.codim() - 1, n)
}

fn strip_endpoints(diag: &BettiDiagram, spec: SecantSpec) -> BettiDiagram {
    BettiDiagram::from_entries(
        diag.entries()
            .filter(|&(k, _)| k != (0, 0) && k != (spec.codim(), spec.n)),
    )
}

/// Rational normal curve of degree k in P^k: β_{s,s+1} = s C(k, s+1).
pub fn rational_normal_curve(k: usize) -> BettiDiagram {
    let strand = (1..k).map(|s| {
        let b = s as i128 * binomial(k as i64, s as i64 + 1);
        ((s, s + 1), u64::try_from(b).expect("fits"))
    });
    BettiDiagram::from_entries(std::iter::once(((0, 0), 1)).chain(strand))
}

/// A single quadric hypersurface.
pub fn quadric() -> BettiDiagram {
    BettiDiagram::from_entries([((0, 0), 1), ((1, 2), 1)])
}

/// Bielliptic canonical curve of genus g: a double cover of an elliptic
/// normal curve of degree g - 1, resolved as quadric ⊗ cone over E.
pub fn bielliptic(g: usize) -> Result<BettiDiagram> {
    if g < 5 {
        return Err(Error::OutOfRange(format!("bielliptic diagram needs g >= 5, got {g}")));
    }
    Ok(quadric().tensor(&secant_diagram(SecantSpec::new(g - 1, 2)?)))
}
