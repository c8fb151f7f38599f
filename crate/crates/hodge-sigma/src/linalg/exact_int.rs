//! Exact integer linear algebra used to certify structure.
//!
//! Generated instances are integer matrices (integer blocks conjugated by
//! unimodular integer matrices), so rank and determinant questions about them
//! can be settled exactly instead of numerically: Bareiss fraction-free
//! elimination in `i128` for real determinants and unimodular inverses, and in
//! arbitrary-precision Gaussian integers for the per-candidate kernel
//! dimensions of the lattice-spectrum solver.

use super::RealMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Largest integer magnitude accepted when reading a float matrix as exact
/// integers; well inside the range where `f64` arithmetic on them is exact.
const MAX_EXACT_INT: f64 = 1e12;

/// Reads a real matrix as an exact integer matrix (row-major), if every entry
/// is integral and small enough for exact float representation.
pub fn as_integer_matrix(m: &RealMatrix) -> Option<Vec<i64>> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let x = m[(i, j)];
            if !x.is_finite() || x.fract() != 0.0 || x.abs() > MAX_EXACT_INT {
                return None;
            }
            out.push(x as i64);
        }
    }
    Some(out)
}

/// Exact determinant of an integer square matrix by Bareiss fraction-free
/// elimination in `i128`. `None` on arithmetic overflow.
pub fn integer_determinant(entries: &[i64], n: usize) -> Option<i128> {
    assert_eq!(entries.len(), n * n);
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<i128> = entries.iter().map(|&x| x as i128).collect();
    let mut sign = 1i128;
    let mut denom = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let swap = (k + 1..n).find(|&r| a[r * n + k] != 0);
            match swap {
                Some(r) => {
                    for j in 0..n {
                        a.swap(k * n + j, r * n + j);
                    }
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i * n + j]
                    .checked_mul(a[k * n + k])?
                    .checked_sub(a[i * n + k].checked_mul(a[k * n + j])?)?;
                a[i * n + j] = num / denom; // exact by the Bareiss identity
            }
            a[i * n + k] = 0;
        }
        denom = a[k * n + k];
    }
    Some(sign * a[n * n - 1])
}

fn minor(entries: &[i64], n: usize, skip_row: usize, skip_col: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity((n - 1) * (n - 1));
    for i in 0..n {
        if i == skip_row {
            continue;
        }
        for j in 0..n {
            if j == skip_col {
                continue;
            }
            out.push(entries[i * n + j]);
        }
    }
    out
}

/// Exact inverse of an integer matrix with determinant ±1, via cofactors.
///
/// Returns `None` when the matrix has non-integer entries, is too large for
/// the exact path, overflows `i128`, or is not unimodular — callers then fall
/// back to floating-point inversion.
pub fn exact_unimodular_inverse(m: &RealMatrix) -> Option<RealMatrix> {
    let n = m.nrows();
    if n != m.ncols() || n == 0 || n > 40 {
        return None;
    }
    let entries = as_integer_matrix(m)?;
    let det = integer_determinant(&entries, n)?;
    if det != 1 && det != -1 {
        return None;
    }
    let mut inv = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // adj[j][i] = (−1)^{i+j} · det(minor(i, j)); inverse = adj / det
            let cof = integer_determinant(&minor(&entries, n, i, j), n - 1)?;
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            let value = sign as i128 * cof * det; // ÷det = ×det for det = ±1
            if value.abs() > MAX_EXACT_INT as i128 {
                return None;
            }
            inv[(j, i)] = value as f64;
        }
    }
    Some(inv)
}

/// A Gaussian integer with arbitrary-precision components.
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: i64, im: i64) -> Self {
        Self {
            re: BigInt::from(re),
            im: BigInt::from(im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, other: &Self) -> Self {
        Self {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        Self {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    /// Exact quotient; panics if `self` is not divisible by `den`
    /// (never the case inside Bareiss elimination).
    fn exact_div(&self, den: &Self) -> Self {
        let norm = &den.re * &den.re + &den.im * &den.im;
        let conj = Self {
            re: den.re.clone(),
            im: -den.im.clone(),
        };
        let num = self.mul(&conj);
        debug_assert!((&num.re % &norm).is_zero() && (&num.im % &norm).is_zero());
        Self {
            re: num.re / &norm,
            im: num.im / norm,
        }
    }

    fn size(&self) -> u64 {
        self.re.abs().bits().max(self.im.abs().bits())
    }
}

/// Exact rank of a square Gaussian-integer matrix (row-major) by fraction-free
/// elimination. Exact arithmetic needs no pivot strategy for correctness; the
/// smallest nonzero pivot is preferred to slow coefficient growth.
pub(crate) fn gauss_int_rank(entries: &[GaussInt], n: usize) -> usize {
    let mut a: Vec<GaussInt> = entries.to_vec();
    let mut denom = GaussInt::new(1, 0);
    let mut rank = 0;
    for k in 0..n {
        let mut pivot: Option<(usize, usize, u64)> = None;
        for i in k..n {
            for j in k..n {
                let x = &a[i * n + j];
                if !x.is_zero() {
                    let s = x.size();
                    if pivot.is_none_or(|(_, _, best)| s < best) {
                        pivot = Some((i, j, s));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        for j in 0..n {
            a.swap(k * n + j, pi * n + j);
        }
        for i in 0..n {
            a.swap(i * n + k, i * n + pj);
        }
        rank += 1;
        let pk = a[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i * n + j].mul(&pk).sub(&a[i * n + k].mul(&a[k * n + j]));
                a[i * n + j] = num.exact_div(&denom);
            }
            a[i * n + k] = GaussInt::new(0, 0);
        }
        denom = pk;
    }
    rank
}
