//! Eigenstructure of real matrices over the parity lattice.
//!
//! The solver does not run a general eigensolver. Every eigenvalue the rest of
//! the crate cares about is a lattice point, so the spectrum is found by
//! *candidate scanning*: enumerate every lattice point inside a disk that is
//! guaranteed to contain the spectrum (a power-iterated norm bound, see
//! [`gelfand_bound`]), and compute the kernel of `S − w·I` for each candidate
//! `w`. The matrix is certified diagonalizable with lattice spectrum exactly
//! when the kernel dimensions sum to `n`.
//!
//! For integer matrices the kernel dimensions are *certified*, not estimated:
//! a cheap floating-point rank check prescreens candidates, and every
//! rank-deficient candidate is then re-ranked exactly in Gaussian-integer
//! arithmetic. This removes threshold false positives on badly conditioned
//! inputs, where the numerical kernel test alone can misfire.
//!
//! When the dimensions do not sum to `n`, the failure is diagnosed: the
//! characteristic polynomial (Faddeev–LeVerrier) is deflated by every
//! eigenvalue already found, the remaining roots are located by Durand–Kerner
//! iteration, and each root becomes a witness — either an off-lattice
//! eigenvalue or a lattice eigenvalue with a geometric/algebraic gap.

use super::exact_int::{as_integer_matrix, gauss_int_rank, GaussInt};
use super::kernel::{kernel_basis_with_rank, kernel_basis_with_scale, rank_at_tolerance};
use super::{complexify, ComplexMatrix, RealMatrix};
use crate::gaussian_lattice::{self, LatticeError, LatticePoint};
use nalgebra::DVector;
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

/// Upper bound on the spectral radius: `min_k ‖M^k‖_F^{1/k}` over
/// `k ∈ {1, 2, 4, 8, 16}`.
///
/// Each term dominates the spectral radius, and higher powers tighten the
/// bound toward it, so the minimum is both safe and usually close. Powers are
/// abandoned once they overflow.
pub fn gelfand_bound<T>(m: &nalgebra::DMatrix<T>) -> f64
where
    T: nalgebra::ComplexField<RealField = f64>,
{
    if m.is_empty() {
        return 0.0;
    }
    let mut best = m.norm();
    let mut power = m.clone_owned();
    let mut k = 1.0;
    for _ in 0..4 {
        power = &power * &power;
        k *= 2.0;
        let norm = power.norm();
        if !norm.is_finite() {
            break;
        }
        best = best.min(norm.powf(1.0 / k));
    }
    best
}

/// A witness explaining why a matrix is not diagonalizable with lattice
/// spectrum.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumWitness {
    /// An eigenvalue that is not a lattice point.
    OffLattice { re: f64, im: f64 },
    /// A lattice eigenvalue whose eigenspace is smaller than its algebraic
    /// multiplicity.
    Defective {
        point: LatticePoint,
        geometric: usize,
        algebraic: usize,
    },
}

impl std::fmt::Display for SpectrumWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpectrumWitness::OffLattice { re, im } => {
                // round away root-finder noise so the text is stable
                let re = (re * 1e9).round() / 1e9;
                let im = (im * 1e9).round() / 1e9;
                if im == 0.0 {
                    write!(f, "lambda={re} off-lattice")
                } else if im > 0.0 {
                    write!(f, "lambda={re}+{im}i off-lattice")
                } else {
                    write!(f, "lambda={re}{im}i off-lattice")
                }
            }
            SpectrumWitness::Defective {
                point,
                geometric,
                algebraic,
            } => write!(
                f,
                "lambda={point} defective: eigenspace dimension {geometric} < multiplicity {algebraic}"
            ),
        }
    }
}

fn fmt_witnesses(witnesses: &[SpectrumWitness]) -> String {
    witnesses
        .iter()
        .map(|w| w.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error(
        "matrix is not diagonalizable with lattice spectrum: \
         eigenspaces cover {found_dim} of {n} dimensions ({})",
        fmt_witnesses(witnesses)
    )]
    OffLatticeOrDefective {
        found_dim: usize,
        n: usize,
        witnesses: Vec<SpectrumWitness>,
    },
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("matrix is not square: {rows}×{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("candidate enumeration failed: {0}")]
    Lattice(#[from] LatticeError),
}

/// The certified eigenstructure of a matrix with lattice spectrum.
///
/// `eigenpairs` lists `(w, orthonormal basis of ker(S − w·I))` sorted by
/// `(|w|, arg w)`; the basis dimensions sum to the matrix size.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenpairs: Vec<(LatticePoint, Vec<DVector<Complex64>>)>,
    /// Relative threshold the kernels were computed at.
    pub tau: f64,
}

impl SpectralData {
    /// Total dimension covered by the eigenspaces (the matrix size).
    pub fn dimension(&self) -> usize {
        self.eigenpairs.iter().map(|(_, basis)| basis.len()).sum()
    }

    /// Geometric multiplicity of a lattice point (0 when absent).
    pub fn multiplicity_of(&self, w: LatticePoint) -> usize {
        self.eigenpairs
            .iter()
            .find(|(p, _)| *p == w)
            .map_or(0, |(_, basis)| basis.len())
    }

    /// Eigenvalues expanded by multiplicity, in eigenpair order.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.eigenpairs
            .iter()
            .flat_map(|(w, basis)| std::iter::repeat_n(w.to_complex(), basis.len()))
            .collect()
    }

    /// Square matrix whose columns are the eigenvectors, in eigenpair order.
    pub fn eigenvector_matrix(&self) -> ComplexMatrix {
        let n = self.dimension();
        let mut b = ComplexMatrix::zeros(n, n);
        let mut col = 0;
        for (_, basis) in &self.eigenpairs {
            for v in basis {
                b.set_column(col, v);
                col += 1;
            }
        }
        b
    }

    /// Diagonal matrix of [`SpectralData::eigenvalues`].
    pub fn eigenvalue_diagonal(&self) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&DVector::from_vec(self.eigenvalues()))
    }
}

/// Finds the lattice eigenstructure of `s`, or explains why there is none.
///
/// Candidates are every lattice point within the spectral-radius bound of
/// [`gelfand_bound`]; kernels at relative threshold `tau` decide membership
/// (exactly certified for integer matrices). Succeeds iff the eigenspace
/// dimensions sum to `n`.
pub fn lattice_spectrum(s: &RealMatrix, tau: f64) -> Result<SpectralData, SpectrumError> {
    if s.nrows() != s.ncols() {
        return Err(SpectrumError::NotSquare {
            rows: s.nrows(),
            cols: s.ncols(),
        });
    }
    let radius = gelfand_bound(s) * (1.0 + 1e-9) + 1e-9;
    if !radius.is_finite() {
        return Err(SpectrumError::NonFinite);
    }
    let candidates = gaussian_lattice::enumerate(radius)?;
    lattice_spectrum_with_candidates(s, tau, &candidates)
}

/// [`lattice_spectrum`] with an explicit candidate list.
///
/// The result does not depend on the candidate order (duplicates are ignored
/// and eigenpairs are reported in canonical lattice order); the hook exists so
/// tests can randomize the scan and callers can restrict the search disk.
pub fn lattice_spectrum_with_candidates(
    s: &RealMatrix,
    tau: f64,
    candidates: &[LatticePoint],
) -> Result<SpectralData, SpectrumError> {
    let n = s.nrows();
    if n != s.ncols() {
        return Err(SpectrumError::NotSquare {
            rows: s.nrows(),
            cols: s.ncols(),
        });
    }
    if s.iter().any(|x| !x.is_finite()) {
        return Err(SpectrumError::NonFinite);
    }
    if n == 0 {
        return Ok(SpectralData {
            eigenpairs: Vec::new(),
            tau,
        });
    }

    let integer_entries = as_integer_matrix(s);
    let s_c = complexify(s);
    // Kernel thresholds for float matrices are anchored to the norm of the
    // unshifted operator: when a candidate nearly exhausts the matrix the
    // shifted residual is pure rounding noise, and a threshold relative to
    // that noise would miss the eigenspace.
    let scale = s.norm().max(1.0);
    let mut eigenpairs: Vec<(LatticePoint, Vec<DVector<Complex64>>)> = Vec::new();
    let mut seen: Vec<LatticePoint> = Vec::new();
    for &w in candidates {
        if seen.contains(&w) {
            continue;
        }
        seen.push(w);
        let mut shifted = s_c.clone_owned();
        for i in 0..n {
            shifted[(i, i)] -= w.to_complex();
        }
        let basis = match &integer_entries {
            Some(entries) => {
                // Float prescreen: an exactly singular integer matrix cannot
                // appear numerically full-rank, so full-rank candidates are
                // skipped without touching exact arithmetic.
                if rank_at_tolerance(&shifted, tau) == n {
                    continue;
                }
                let gauss: Vec<GaussInt> = (0..n * n)
                    .map(|idx| {
                        let (i, j) = (idx / n, idx % n);
                        if i == j {
                            GaussInt::new(entries[idx] - w.a(), -w.b())
                        } else {
                            GaussInt::new(entries[idx], 0)
                        }
                    })
                    .collect();
                let rank = gauss_int_rank(&gauss, n);
                if rank == n {
                    continue; // prescreen false positive, certified regular
                }
                kernel_basis_with_rank(&shifted, tau, rank)
            }
            None => kernel_basis_with_scale(&shifted, tau, scale),
        };
        if !basis.is_empty() {
            eigenpairs.push((w, basis));
        }
    }

    eigenpairs.sort_by(|(u, _), (v, _)| {
        u.norm_sqr()
            .cmp(&v.norm_sqr())
            .then_with(|| u.arg_key().partial_cmp(&v.arg_key()).unwrap())
    });
    let found_dim: usize = eigenpairs.iter().map(|(_, b)| b.len()).sum();
    if found_dim == n {
        return Ok(SpectralData { eigenpairs, tau });
    }
    let witnesses = if found_dim < n {
        diagnose(&s_c, &eigenpairs)
    } else {
        // Numerical kernels of distinct candidates overlapped (only possible
        // on the float path); there is no meaningful root set to report.
        Vec::new()
    };
    Err(SpectrumError::OffLatticeOrDefective {
        found_dim,
        n,
        witnesses,
    })
}

/// Monic characteristic polynomial coefficients, highest degree first, by the
/// Faddeev–LeVerrier recurrence.
fn char_poly(m: &ComplexMatrix) -> Vec<Complex64> {
    let n = m.nrows();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    let mut mk = m.clone_owned();
    for (k, slot) in coeffs.iter_mut().enumerate().skip(1) {
        let c = -mk.trace() / (k as f64);
        *slot = c;
        if k < n {
            mk = m * (&mk + ComplexMatrix::identity(n, n) * c);
        }
    }
    coeffs
}

/// Synthetic division of a monic polynomial by `(x − lambda)`; the remainder
/// (the value at `lambda`) is dropped.
fn deflate(coeffs: &[Complex64], lambda: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(coeffs.len() - 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in &coeffs[..coeffs.len() - 1] {
        acc = acc * lambda + c;
        out.push(acc);
    }
    out
}

fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// All roots of a monic polynomial by Durand–Kerner iteration.
///
/// Accuracy only needs to support witness classification (distances compared
/// at the 1e-3 scale), which simultaneous iteration delivers comfortably even
/// for clustered roots.
fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    // Fujiwara root bound for a monic polynomial: 2·max_k |c_k|^{1/k}.
    let mut radius = 0.0f64;
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        radius = radius.max(c.norm().powf(1.0 / k as f64));
    }
    let radius = 2.0 * radius + 1.0;
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|j| seed.powu(j as u32 + 1) * radius).collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() < 1e-290 {
                den = Complex64::new(1e-290, 0.0);
            }
            let step = horner(coeffs, z[i]) / den;
            z[i] -= step;
            if !z[i].is_finite() {
                z[i] = seed.powu(i as u32 + 3) * radius;
            }
            max_step = max_step.max(step.norm());
        }
        if max_step <= 1e-12 * (1.0 + radius) {
            break;
        }
    }
    z
}

/// Explains a dimension shortfall: roots of the characteristic polynomial not
/// already accounted for by found eigenspaces become witnesses.
fn diagnose(
    s_c: &ComplexMatrix,
    found: &[(LatticePoint, Vec<DVector<Complex64>>)],
) -> Vec<SpectrumWitness> {
    let mut coeffs = char_poly(s_c);
    for (w, basis) in found {
        for _ in 0..basis.len() {
            coeffs = deflate(&coeffs, w.to_complex());
        }
    }
    let roots = durand_kerner(&coeffs);

    let mut off: Vec<Complex64> = Vec::new();
    let mut defects: BTreeMap<LatticePoint, usize> = BTreeMap::new();
    for &root in &roots {
        let scale = root.norm().max(1.0);
        let (near, dist) = gaussian_lattice::nearest(root);
        if dist <= 1e-3 * scale {
            *defects.entry(near).or_insert(0) += 1;
        } else if !off.iter().any(|z| (z - root).norm() <= 1e-3 * scale) {
            off.push(root);
        }
    }

    off.sort_by(|u, v| {
        let key = |z: &Complex64| {
            let mut t = z.im.atan2(z.re);
            if t < 0.0 {
                t += std::f64::consts::TAU;
            }
            (z.norm(), t)
        };
        key(u).partial_cmp(&key(v)).unwrap()
    });
    let mut witnesses: Vec<SpectrumWitness> = off
        .into_iter()
        .map(|z| SpectrumWitness::OffLattice { re: z.re, im: z.im })
        .collect();

    let mut defect_list: Vec<(LatticePoint, usize)> = defects.into_iter().collect();
    defect_list.sort_by(|(u, _), (v, _)| {
        u.norm_sqr()
            .cmp(&v.norm_sqr())
            .then_with(|| u.arg_key().partial_cmp(&v.arg_key()).unwrap())
    });
    for (point, extra) in defect_list {
        let geometric = found
            .iter()
            .find(|(w, _)| *w == point)
            .map_or(0, |(_, b)| b.len());
        witnesses.push(SpectrumWitness::Defective {
            point,
            geometric,
            algebraic: geometric + extra,
        });
    }
    witnesses
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian_lattice::lambda_of_pq;
    use nalgebra::dmatrix;

    const TAU: f64 = 1e-8;

    fn eigen_summary(data: &SpectralData) -> Vec<(i64, i64, usize)> {
        data.eigenpairs
            .iter()
            .map(|(w, b)| (w.a(), w.b(), b.len()))
            .collect()
    }

    #[test]
    fn gelfand_bound_dominates_spectral_radius() {
        let rotation = dmatrix![0.0, -1.0; 1.0, 0.0];
        let b = gelfand_bound(&rotation);
        assert!((1.0..1.5).contains(&b), "got {b}");

        let diag = dmatrix![3.0, 0.0; 0.0, -1.0];
        let b = gelfand_bound(&diag);
        assert!((3.0..3.2).contains(&b), "got {b}");

        assert_eq!(gelfand_bound(&RealMatrix::zeros(3, 3)), 0.0);
    }

    #[test]
    fn conjugate_pair_block() {
        let s = dmatrix![1.0, -1.0; 1.0, 1.0];
        let data = lattice_spectrum(&s, TAU).unwrap();
        assert_eq!(eigen_summary(&data), vec![(1, 1, 1), (1, -1, 1)]);
        // eigenvector residual invariant
        let s_c = complexify(&s);
        let b = data.eigenvector_matrix();
        let residual = (&s_c * &b - &b * data.eigenvalue_diagonal()).norm();
        assert!(
            residual <= 10.0 * TAU * s.norm().max(1.0),
            "residual {residual}"
        );
    }

    #[test]
    fn repeated_eigenvalue_multiplicity() {
        let s = dmatrix![2.0, 0.0, 0.0; 0.0, 2.0, 0.0; 0.0, 0.0, 0.0];
        let data = lattice_spectrum(&s, TAU).unwrap();
        assert_eq!(eigen_summary(&data), vec![(0, 0, 1), (2, 0, 2)]);
        assert_eq!(data.multiplicity_of(lambda_of_pq(1, 1)), 2);
        assert_eq!(data.multiplicity_of(lambda_of_pq(3, 3)), 0);
    }

    #[test]
    fn nilpotent_block_is_defective() {
        let s = dmatrix![0.0, 1.0; 0.0, 0.0];
        let err = lattice_spectrum(&s, TAU).unwrap_err();
        match err {
            SpectrumError::OffLatticeOrDefective {
                found_dim,
                n,
                witnesses,
            } => {
                assert_eq!((found_dim, n), (1, 2));
                assert_eq!(
                    witnesses,
                    vec![SpectrumWitness::Defective {
                        point: lambda_of_pq(0, 0),
                        geometric: 1,
                        algebraic: 2,
                    }]
                );
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn scalar_off_lattice() {
        let err = lattice_spectrum(&dmatrix![1.0], TAU).unwrap_err();
        match err {
            SpectrumError::OffLatticeOrDefective {
                found_dim,
                n,
                witnesses,
            } => {
                assert_eq!((found_dim, n), (0, 1));
                assert_eq!(witnesses.len(), 1);
                match &witnesses[0] {
                    SpectrumWitness::OffLattice { re, im } => {
                        assert!((re - 1.0).abs() < 1e-9 && im.abs() < 1e-9);
                    }
                    other => panic!("unexpected witness {other:?}"),
                }
                assert_eq!(witnesses[0].to_string(), "lambda=1 off-lattice");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn float_entries_use_threshold_kernels() {
        // B·diag(2, 0)·B⁻¹ with non-integer B exercises the float path.
        let b = dmatrix![1.0, 0.5; 0.25, 1.0];
        let d = dmatrix![2.0, 0.0; 0.0, 0.0];
        let s = &b * d * b.try_inverse().unwrap();
        assert!(as_integer_matrix(&s).is_none());
        let data = lattice_spectrum(&s, TAU).unwrap();
        assert_eq!(eigen_summary(&data), vec![(0, 0, 1), (2, 0, 1)]);
    }

    #[test]
    fn conjugated_integer_instance_is_fully_resolved() {
        // blocks: rotation for 1±i, scalars 2 and 0; integer unimodular change
        // of basis keeps the entries integral.
        let s0 = dmatrix![
            1.0, -1.0, 0.0, 0.0;
            1.0, 1.0, 0.0, 0.0;
            0.0, 0.0, 2.0, 0.0;
            0.0, 0.0, 0.0, 0.0
        ];
        let p = dmatrix![
            1.0, 2.0, 0.0, -1.0;
            0.0, 1.0, 3.0, 0.0;
            0.0, 0.0, 1.0, 2.0;
            0.0, 0.0, 0.0, 1.0
        ];
        let p_inv = super::super::exact_int::exact_unimodular_inverse(&p).unwrap();
        let s = &p * s0 * p_inv;
        let data = lattice_spectrum(&s, TAU).unwrap();
        assert_eq!(
            eigen_summary(&data),
            vec![(0, 0, 1), (1, 1, 1), (1, -1, 1), (2, 0, 1)]
        );
        let s_c = complexify(&s);
        let bmat = data.eigenvector_matrix();
        let residual = (&s_c * &bmat - &bmat * data.eigenvalue_diagonal()).norm();
        assert!(
            residual <= 10.0 * TAU * s.norm().max(1.0),
            "residual {residual}"
        );
    }

    #[test]
    fn candidate_order_is_irrelevant() {
        let s = dmatrix![1.0, -1.0; 1.0, 1.0];
        let canonical = gaussian_lattice::enumerate(2.0).unwrap();
        let mut reversed = canonical.clone();
        reversed.reverse();
        let mut doubled = canonical.clone();
        doubled.extend_from_slice(&canonical);
        let base = lattice_spectrum_with_candidates(&s, TAU, &canonical).unwrap();
        for other in [reversed, doubled] {
            let data = lattice_spectrum_with_candidates(&s, TAU, &other).unwrap();
            assert_eq!(eigen_summary(&data), eigen_summary(&base));
            assert_eq!(data.eigenvector_matrix(), base.eigenvector_matrix());
        }
    }

    #[test]
    fn restricted_candidates_report_the_missing_eigenvalue() {
        let s = dmatrix![1.0, -1.0; 1.0, 1.0];
        let only = [lambda_of_pq(1, 0)]; // 1+i but not 1−i
        let err = lattice_spectrum_with_candidates(&s, TAU, &only).unwrap_err();
        match err {
            SpectrumError::OffLatticeOrDefective {
                found_dim,
                witnesses,
                ..
            } => {
                assert_eq!(found_dim, 1);
                assert_eq!(
                    witnesses,
                    vec![SpectrumWitness::Defective {
                        point: lambda_of_pq(0, 1),
                        geometric: 0,
                        algebraic: 1,
                    }]
                );
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            lattice_spectrum(&dmatrix![f64::NAN], TAU),
            Err(SpectrumError::NonFinite)
        ));
        assert!(matches!(
            lattice_spectrum(&RealMatrix::zeros(2, 3), TAU),
            Err(SpectrumError::NotSquare { .. })
        ));
    }
}
