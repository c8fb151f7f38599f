//! Matrix exponential by scaling and squaring, and sin/sinh built on it.
//!
//! `mat_exp` is the one carefully tested primitive: the argument is scaled by
//! a power of two until its Frobenius norm is at most 1/2, the power series is
//! summed to a term-size cutoff, and the result is squared back up. `mat_sin`
//! and `mat_sinh` are exponential differences on the complexification, with a
//! consistency check that the imaginary residue of the nominally real result
//! stays small.

use super::{complexify, imag_norm, real_part, ComplexMatrix, RealMatrix};
use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatFunError {
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("matrix is not square: {rows}×{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("imaginary residue {residue:.3e} exceeds 100·tol = {allowed:.3e}")]
    ImagResidue { residue: f64, allowed: f64 },
}

fn check_finite<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Result<(), MatFunError> {
    if m.nrows() != m.ncols() {
        return Err(MatFunError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.iter().all(|x| x.clone().modulus().is_finite()) {
        Ok(())
    } else {
        Err(MatFunError::NonFinite)
    }
}

/// `exp(M)` with absolute error at most `tol·exp(‖M‖)` in Frobenius norm;
/// the series itself is always run down to machine precision, so in practice
/// the accuracy is limited by rounding, not by `tol`.
///
/// Works for real and complex matrices alike.
pub fn mat_exp<T>(m: &DMatrix<T>, tol: f64) -> Result<DMatrix<T>, MatFunError>
where
    T: ComplexField<RealField = f64>,
{
    check_finite(m)?;
    let n = m.nrows();
    let norm = m.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / T::from_real(2f64.powi(squarings as i32));
    // series on the scaled matrix; ‖A‖ ≤ 1/2 makes the tail collapse fast.
    // The cutoff is capped at machine level regardless of `tol`, so the
    // truncation error never dominates the rounding error.
    let cutoff = (tol * 2f64.powi(-(squarings as i32)) * 1e-2).clamp(1e-300, 1e-17);
    let mut sum = DMatrix::<T>::identity(n, n);
    let mut term = DMatrix::<T>::identity(n, n);
    for k in 1..=40u32 {
        term = (&term * &scaled) / T::from_real(k as f64);
        sum += &term;
        if term.norm() <= cutoff {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// Shared body of `mat_sin`/`mat_sinh`: `(exp(A) − exp(B))/d` on the
/// complexification, with the imaginary-residue consistency check.
fn exp_difference(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    denom: Complex64,
    tol: f64,
) -> Result<RealMatrix, MatFunError> {
    let diff = (mat_exp(a, tol)? - mat_exp(b, tol)?) / denom;
    let residue = imag_norm(&diff);
    if residue > 100.0 * tol {
        return Err(MatFunError::ImagResidue {
            residue,
            allowed: 100.0 * tol,
        });
    }
    Ok(real_part(&diff))
}

/// `sin(M)` for real `M`, computed as `(exp(iM) − exp(−iM)) / 2i` on the
/// complexification. The imaginary residue must stay below `100·tol`.
pub fn mat_sin(m: &RealMatrix, tol: f64) -> Result<RealMatrix, MatFunError> {
    check_finite(m)?;
    let im = complexify(m) * Complex64::i();
    exp_difference(&im, &(-&im), Complex64::new(0.0, 2.0), tol)
}

/// `sinh(M)` for real `M`, computed as `(exp(M) − exp(−M)) / 2` on the
/// complexification.
pub fn mat_sinh(m: &RealMatrix, tol: f64) -> Result<RealMatrix, MatFunError> {
    check_finite(m)?;
    let c = complexify(m);
    exp_difference(&c, &(-&c), Complex64::new(2.0, 0.0), tol)
}
