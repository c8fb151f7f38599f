//! Dense real/complex matrix kernel.
//!
//! Provides complexification, numerical null spaces, matrix exp/sin/sinh,
//! commutators, and the lattice-spectrum solver that decides whether a real
//! matrix is diagonalizable with all eigenvalues in the parity lattice.
//!
//! The central engineering decision: eigen-solving is replaced by finite
//! candidate enumeration. Valid spectra lie in the lattice and are bounded by
//! any spectral-radius bound of the matrix, so candidate eigenvalues can be
//! listed exhaustively and tested one kernel at a time — no iterative
//! eigensolver, no convergence tuning. For integer matrices the kernel
//! dimension per candidate is certified in exact Gaussian-integer arithmetic,
//! which removes all tolerance risk from the verdict.

mod exact_int;
mod kernel;
mod matfun;
mod spectrum;

pub use exact_int::{as_integer_matrix, exact_unimodular_inverse, integer_determinant};
pub use kernel::{
    kernel_basis, kernel_basis_with_rank, kernel_basis_with_scale, rank_at_tolerance,
};
pub use matfun::{mat_exp, mat_sin, mat_sinh, MatFunError};
pub use spectrum::{
    gelfand_bound, lattice_spectrum, lattice_spectrum_with_candidates, SpectralData, SpectrumError,
    SpectrumWitness,
};

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dense square real matrix; the carrier of `E`, `T`, and `S`.
pub type RealMatrix = DMatrix<f64>;
/// Dense square complex matrix; the carrier of complexified operators.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Entrywise embedding of a real matrix into the complex scalars; exact.
pub fn complexify(m: &RealMatrix) -> ComplexMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Entrywise real part.
pub fn real_part(m: &ComplexMatrix) -> RealMatrix {
    m.map(|z| z.re)
}

/// Frobenius norm of the entrywise imaginary part.
pub fn imag_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.im * z.im).sum::<f64>().sqrt()
}

/// The commutator `AB − BA`, computed exactly as written in floating point.
///
/// Returns `None` on shape mismatch.
pub fn commutator<T>(a: &DMatrix<T>, b: &DMatrix<T>) -> Option<DMatrix<T>>
where
    T: nalgebra::ComplexField,
{
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() || a.nrows() != a.ncols() {
        return None;
    }
    Some(a * b - b * a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn complexify_round_trips() {
        let m = dmatrix![0.0, -1.0; 1.0, 0.0];
        let c = complexify(&m);
        assert_eq!(real_part(&c), m);
        assert_eq!(imag_norm(&c), 0.0);
        let id = RealMatrix::identity(3, 3);
        assert_eq!(real_part(&complexify(&id)), id);
    }

    #[test]
    fn commutator_examples() {
        let j = dmatrix![0.0, -1.0; 1.0, 0.0];
        let d = dmatrix![1.0, 0.0; 0.0, 2.0];
        let id = RealMatrix::identity(2, 2);
        assert_eq!(commutator(&id, &j).unwrap(), RealMatrix::zeros(2, 2));
        assert_eq!(commutator(&j, &j).unwrap(), RealMatrix::zeros(2, 2));
        // [diag(1,2), J] worked by hand: diag·J − J·diag
        assert_eq!(commutator(&d, &j).unwrap(), dmatrix![0.0, 1.0; 1.0, 0.0]);
        let bad = RealMatrix::zeros(3, 3);
        assert!(commutator(&d, &bad).is_none());
    }
}
