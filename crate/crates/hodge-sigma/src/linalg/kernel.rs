//! Numerical null spaces by elimination with complete pivoting.
//!
//! Rank decisions use the pivot threshold `τ·‖M‖_∞` (max row sum). The
//! elimination keeps a column permutation so pivots are always the largest
//! remaining entry; back-substitution from the reduced form yields one kernel
//! vector per free column, and modified Gram–Schmidt orthonormalizes them.
//! Everything is deterministic for a fixed input: ties break toward the
//! smallest row/column index and free columns are emitted in ascending
//! original-column order.

use super::ComplexMatrix;
use nalgebra::DVector;
use num_complex::Complex64;

/// Max row-sum norm, the scale for pivot thresholds.
fn norm_inf(m: &ComplexMatrix) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Reduced row-echelon data: the reduced matrix, the column permutation
/// (`perm[k]` = original column holding the k-th pivot), and the rank.
struct Rref {
    a: ComplexMatrix,
    perm: Vec<usize>,
    rank: usize,
}

/// Eliminates with complete pivoting. When `forced_rank` is given the
/// elimination runs exactly that many steps (the pivots are still chosen by
/// magnitude); otherwise it stops when the best remaining pivot drops to the
/// absolute `threshold` or below.
fn reduce(m: &ComplexMatrix, threshold: f64, forced_rank: Option<usize>) -> Rref {
    let n = m.nrows();
    let ncols = m.ncols();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..ncols).collect();
    let steps = forced_rank.unwrap_or(ncols.min(n));
    let mut rank = 0;
    for k in 0..steps.min(n).min(ncols) {
        // largest remaining entry (complete pivoting), smallest indices on ties
        let mut best = (k, k, 0.0f64);
        for j in k..ncols {
            for i in k..n {
                let v = a[(i, perm[j])].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let (pi, pj, pv) = best;
        if forced_rank.is_none() && pv <= threshold {
            break;
        }
        if pv == 0.0 {
            break; // forced rank cannot exceed the true rank of exact zeros
        }
        perm.swap(k, pj);
        a.swap_rows(k, pi);
        let piv = a[(k, perm[k])];
        for j in 0..ncols {
            a[(k, j)] /= piv;
        }
        for i in 0..n {
            if i != k {
                let f = a[(i, perm[k])];
                if f != Complex64::ZERO {
                    for j in 0..ncols {
                        let sub = f * a[(k, j)];
                        a[(i, j)] -= sub;
                    }
                }
            }
        }
        rank += 1;
    }
    Rref { a, perm, rank }
}

/// Numerical rank at threshold `τ·‖M‖_∞`.
pub fn rank_at_tolerance(m: &ComplexMatrix, tau: f64) -> usize {
    reduce(m, tau * norm_inf(m), None).rank
}

fn kernel_from_rref(r: &Rref, ncols: usize) -> Vec<DVector<Complex64>> {
    // free columns in ascending original index for a deterministic basis order
    let mut free: Vec<usize> = r.perm[r.rank..].to_vec();
    free.sort_unstable();
    let pivot_cols: Vec<usize> = r.perm[..r.rank].to_vec();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = DVector::<Complex64>::zeros(ncols);
        v[f] = Complex64::ONE;
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -r.a[(row, f)];
        }
        basis.push(v);
    }
    // modified Gram–Schmidt; the inputs are independent by construction
    let mut ortho: Vec<DVector<Complex64>> = Vec::with_capacity(basis.len());
    for mut v in basis {
        for u in &ortho {
            let c = u.dotc(&v);
            v -= u * c;
        }
        let nrm = v.norm();
        v /= Complex64::new(nrm, 0.0);
        ortho.push(v);
    }
    ortho
}

/// Orthonormal basis of the numerical kernel of `M` at threshold `τ·‖M‖_∞`.
///
/// Each returned vector `b` satisfies `‖M·b‖ ≲ τ·max(1, ‖M‖)`, the basis size
/// is `ncols − rank`, and the output is deterministic for a fixed input.
pub fn kernel_basis(m: &ComplexMatrix, tau: f64) -> Vec<DVector<Complex64>> {
    let r = reduce(m, tau * norm_inf(m), None);
    kernel_from_rref(&r, m.ncols())
}

/// [`kernel_basis`] with the pivot threshold `τ·scale` for a caller-chosen
/// scale instead of the matrix's own norm.
///
/// Needed when `M` is a shifted form of a larger operator (e.g. `A − λI`
/// where `λ` nearly exhausts `A`): the residual's own norm is then mostly
/// rounding noise, and a threshold relative to it would declare the noise
/// significant and miss the kernel entirely.
pub fn kernel_basis_with_scale(m: &ComplexMatrix, tau: f64, scale: f64) -> Vec<DVector<Complex64>> {
    let r = reduce(m, tau * scale, None);
    kernel_from_rref(&r, m.ncols())
}

/// [`kernel_basis`] with the rank imposed externally (e.g. certified by exact
/// integer elimination) instead of decided by the pivot threshold.
pub fn kernel_basis_with_rank(m: &ComplexMatrix, tau: f64, rank: usize) -> Vec<DVector<Complex64>> {
    let r = reduce(m, tau * norm_inf(m), Some(rank));
    kernel_from_rref(&r, m.ncols())
}
