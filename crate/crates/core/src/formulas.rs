//! Closed-form Betti numbers, degrees and intersection numbers, in exact
//! integer arithmetic. These are the oracles the Koszul computations are
//! checked against.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binomial coefficient with C(a, b) = 0 whenever b < 0 or b > a.
pub fn binomial(a: i64, b: i64) -> i128 {
    if b < 0 || a < 0 || b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: i128 = 1;
    for k in 0..b {
        // exact at every step: acc = C(a, k) before the update
        acc = acc * (a - k) as i128 / (k + 1) as i128;
    }
    acc
}

fn narrow(v: i128) -> i64 {
    i64::try_from(v).expect("formula value exceeds i64")
}

fn c(a: usize, b: usize) -> i128 {
    binomial(a as i64, b as i64)
}

/// A curve degree n together with the secant parameter d: the variety
/// Sec_{d-1} E, the scroll swept by |D| for deg D = d, and the derived ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantSpec {
    pub n: usize,
    pub d: usize,
}

impl SecantSpec {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::OutOfRange(format!("need n >= 4, got n = {n}")));
        }
        if d < 2 || d > n.div_ceil(2) {
            return Err(Error::OutOfRange(format!(
                "need 2 <= d <= (n+1)/2 = {}, got d = {d}",
                n.div_ceil(2)
            )));
        }
        Ok(SecantSpec { n, d })
    }

    /// Sec_{d-1} is a hypersurface of degree n exactly when d = (n+1)/2.
    pub fn is_hypersurface(&self) -> bool {
        2 * self.d == self.n + 1
    }

    /// Rank of the bundle with fibres H^0(nA - D).
    pub fn g(&self) -> usize {
        self.n - self.d
    }

    /// Rank of the bundle with fibres H^0(D).
    pub fn h(&self) -> usize {
        self.d
    }

    /// Codimension of Sec_{d-1} E in P^{n-1}.
    pub fn codim(&self) -> usize {
        self.n + 2 - 2 * self.d
    }

    /// Steps of the linear strand, as twists i with d <= i <= n - d.
    pub fn strand_range(&self) -> std::ops::RangeInclusive<usize> {
        self.d..=self.n.saturating_sub(self.d)
    }
}

impl fmt::Display for SecantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} d={}", self.n, self.d)
    }
}

/// Rank of the Eagon–Northcott term Λ^i H^0(nA-D) ⊗ Λ^d H^0(D) ⊗ S_{i-d} H^0(D).
pub fn en_term_dim(n: usize, d: usize, i: usize) -> i64 {
    if i < d || i + d > n {
        return 0;
    }
    narrow(c(n - d, i) * c(i - 1, i - d))
}

/// β of Sec_{d-1} E at twist i (homological step i - d + 1).
pub fn secant_betti(n: usize, d: usize, i: usize) -> i64 {
    if i > n {
        return 0;
    }
    en_term_dim(n, d, i) + en_term_dim(n, d, n - i)
}

pub fn secant_degree(n: usize, d: usize) -> i64 {
    let (n, d) = (n as i64, d as i64);
    narrow(binomial(n - d, d - 2) + binomial(n - d + 1, d - 1))
}

/// Degree of the locus of rank < l of a generic k x l matrix of linear forms
/// (maximal minors, expected codimension).
pub fn det_degree(k: usize, l: usize) -> i64 {
    narrow(binomial(k as i64, l as i64 - 1))
}

/// The intersection number of H^{2d-i-2} with the class R^i on the scroll bundle.
pub fn intersection_number(n: usize, d: usize, i: usize) -> i64 {
    narrow(binomial(n as i64 - d as i64, d as i64 - i as i64 - 1))
}

/// Degree of the canonical class restricted to the curve classes, -dH + (n-2d)R.
pub fn kpe_degree(n: usize, d: usize) -> i64 {
    let (n, d) = (n as i64, d as i64);
    narrow(-binomial(n - d + 1, d - 1) - binomial(n - d, d - 2))
}

/// Degree of the family of i-th strand terms over the Jacobian:
/// -C(n-d, i) C(i, d) n / (n-d). Non-integrality is reported as an internal
/// inconsistency.
pub fn family_degree(n: usize, d: usize, i: usize) -> Result<i64> {
    if d >= n {
        return Err(Error::OutOfRange(format!("need d < n, got n = {n}, d = {d}")));
    }
    let num = c(n - d, i) * c(i, d) * n as i128;
    let den = (n - d) as i128;
    if num % den != 0 {
        return Err(Error::Inconsistent(format!(
            "family degree for n={n} d={d} i={i} is not an integer: {num}/{den}"
        )));
    }
    Ok(narrow(-num / den))
}

/// (h^0, h^1) of the family of strand terms on the elliptic Jacobian: h^0
/// vanishes and Riemann–Roch gives h^1 = -deg.
pub fn strand_h1(n: usize, d: usize, i: usize) -> Result<(i64, i64)> {
    Ok((0, -family_degree(n, d, i)?))
}

/// β at twist i of the complex obtained from the strand family; equals
/// secant_betti(n, d, i) + secant_betti(n, d+1, i).
pub fn rf_betti(n: usize, d: usize, i: usize) -> Result<i64> {
    Ok(strand_h1(n, d, i)?.1)
}

/// secant_betti(n, d, i), extended by zero past the hypersurface case.
pub fn secant_betti_or_zero(n: usize, d: usize, i: usize) -> i64 {
    if d > n.div_ceil(2) {
        0
    } else {
        secant_betti(n, d, i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BottPosition {
    H0,
    Hi,
    Hn,
    Zero,
}

impl fmt::Display for BottPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BottPosition::H0 => "H0",
            BottPosition::Hi => "Hi",
            BottPosition::Hn => "Hn",
            BottPosition::Zero => "zero",
        })
    }
}

/// Where the cohomology of Ω^i(j) on P^n is concentrated. Only the listed
/// cases are classified; everything between them reports `Zero`.
pub fn bott_position(i: usize, j: i64, n: usize) -> Result<BottPosition> {
    if n == 0 || i > n - 1 {
        return Err(Error::OutOfRange(format!("need 0 <= i <= n-1, got i = {i}, n = {n}")));
    }
    let (ii, nn) = (i as i64, n as i64);
    Ok(if j < -nn - 1 {
        BottPosition::Hn
    } else if j == -ii {
        BottPosition::Hi
    } else if j > 0 {
        BottPosition::H0
    } else {
        BottPosition::Zero
    })
}

/// dim H^i(Ω^i(-i)) = dim H^i(Ω^i) = 1.
pub fn bott_diagonal_dim(i: usize, n: usize) -> Result<i64> {
    bott_position(i, -(i as i64), n).map(|_| 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, -1), 0);
        assert_eq!(binomial(5, 6), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(-1, 0), 0);
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn spec_ranges() {
        assert!(SecantSpec::new(3, 2).is_err());
        assert!(SecantSpec::new(6, 1).is_err());
        assert!(SecantSpec::new(6, 4).is_err());
        let s = SecantSpec::new(7, 4).unwrap();
        assert!(s.is_hypersurface());
        assert_eq!(s.codim(), 1);
        let s = SecantSpec::new(6, 2).unwrap();
        assert_eq!((s.g(), s.h(), s.codim()), (4, 2, 4));
        assert!(!s.is_hypersurface());
    }

    #[test]
    fn en_dims() {
        let row: Vec<_> = (2..=4).map(|i| en_term_dim(6, 2, i)).collect();
        assert_eq!(row, [6, 8, 3]);
        assert_eq!(en_term_dim(6, 3, 3), 1);
        assert_eq!(en_term_dim(6, 2, 5), 0);
        assert_eq!(en_term_dim(6, 3, 2), 0);
        for n in 4..20 {
            for d in 2..=n / 2 {
                assert_eq!(en_term_dim(n, d, d) as i128, c(n - d, d));
            }
        }
    }

    #[test]
    fn secant_rows() {
        let row = |n, d| -> Vec<i64> { (d..=n - d).map(|i| secant_betti(n, d, i)).collect() };
        assert_eq!(row(6, 2), [9, 16, 9]);
        assert_eq!(row(7, 2), [14, 35, 35, 14]);
        assert_eq!(row(7, 3), [7, 7]);
        assert_eq!(row(6, 3), [2]);
        assert_eq!(secant_betti(6, 2, 1), 0);
    }

    #[test]
    fn degrees() {
        for n in 4..20 {
            assert_eq!(secant_degree(n, 2), n as i64);
        }
        assert_eq!(secant_degree(6, 3), 9);
        assert_eq!(secant_degree(8, 3), 20);
        assert_eq!(det_degree(3, 2), 3);
        assert_eq!(det_degree(7, 1), 1);
        assert_eq!(det_degree(4, 2), 4);
        assert_eq!(intersection_number(6, 2, 0), 4);
        assert_eq!(intersection_number(6, 2, 0), det_degree(4, 2));
        assert_eq!(intersection_number(7, 3, 1), 4);
        for n in 4..15 {
            for d in 2..=n / 2 {
                assert_eq!(intersection_number(n, d, d - 1), 1);
            }
        }
        assert_eq!(kpe_degree(6, 2), -6);
        assert_eq!(kpe_degree(6, 3), -9);
    }

    #[test]
    fn family_and_rf() {
        assert_eq!(family_degree(6, 2, 2).unwrap(), -9);
        assert_eq!(family_degree(6, 2, 3).unwrap(), -18);
        assert_eq!(family_degree(7, 2, 3).unwrap(), -42);
        assert_eq!(rf_betti(6, 2, 3).unwrap(), 16 + 2);
        assert_eq!(rf_betti(7, 2, 3).unwrap(), 35 + 7);
        let row: Vec<_> = (2..=5).map(|i| rf_betti(7, 2, i).unwrap()).collect();
        assert_eq!(row, [14, 42, 42, 14]);
        assert_eq!(strand_h1(6, 2, 4).unwrap(), (0, 9));
        assert!(family_degree(4, 4, 2).is_err());
    }

    #[test]
    fn bott_table() {
        use BottPosition::*;
        assert_eq!(bott_position(2, 1, 5).unwrap(), H0);
        assert_eq!(bott_position(2, -2, 5).unwrap(), Hi);
        assert_eq!(bott_diagonal_dim(3, 5).unwrap(), 1);
        assert_eq!(bott_position(1, 0, 5).unwrap(), Zero);
        // i = 0, j = 0 is the trivial bundle: j = -i wins
        assert_eq!(bott_position(0, 0, 5).unwrap(), Hi);
        assert_eq!(bott_position(2, -7, 5).unwrap(), Hn);
        assert_eq!(bott_position(2, -6, 5).unwrap(), Zero);
        assert!(bott_position(5, 0, 5).is_err());
    }

    // Identity suites over the stated parameter ranges.

    #[test]
    fn gorenstein_symmetry() {
        for n in 4..=20 {
            for d in 2..=(n + 1) / 2 {
                for i in 0..=n {
                    assert_eq!(secant_betti(n, d, i), secant_betti(n, d, n - i));
                }
            }
        }
    }

    #[test]
    fn rf_decomposes_into_two_secant_strands() {
        for n in 4..=20 {
            for d in 2..=n / 2 {
                for i in d..=n - d {
                    assert_eq!(
                        rf_betti(n, d, i).unwrap(),
                        secant_betti(n, d, i) + secant_betti_or_zero(n, d + 1, i),
                        "n={n} d={d} i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn anticanonical_degree() {
        for n in 4..=20 {
            for d in 2..=n / 2 {
                assert_eq!(-kpe_degree(n, d), secant_degree(n, d));
            }
        }
    }

    #[test]
    fn family_degree_integral() {
        for n in 4..=30 {
            for d in 2..=n / 2 {
                for i in d..=n - d {
                    family_degree(n, d, i).unwrap();
                }
            }
        }
    }

    #[test]
    fn binomial_product_symmetry() {
        for n in 4..=30 {
            for d in 2..=n / 2 {
                for i in d..=n - d {
                    assert_eq!(c(n - d, i) * c(i, d), c(n - d, n - i) * c(n - i, d));
                }
            }
        }
    }

    #[test]
    fn first_step_is_isomorphic() {
        for n in 4..=20 {
            for d in 2..=n / 2 {
                let en = en_term_dim(n, d, d) as i128 * n as i128;
                assert_eq!(en % (n - d) as i128, 0);
                assert_eq!(secant_betti(n, d, d) as i128, en / (n - d) as i128);
                assert_eq!(rf_betti(n, d, d).unwrap(), secant_betti(n, d, d));
            }
        }
    }

    proptest! {
        #[test]
        fn pascal(a in 1i64..60, b in 0i64..60) {
            prop_assert_eq!(binomial(a, b), binomial(a - 1, b - 1) + binomial(a - 1, b));
        }
    }
}
