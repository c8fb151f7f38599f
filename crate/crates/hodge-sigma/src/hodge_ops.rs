//! Hodge-type data as commuting real operators, and back.
//!
//! A Hodge type is a finite multiset of integer pairs `(p, q)` with
//! multiplicities, stored on canonical representatives with `q ≤ p`. Each pair
//! with `p ≠ q` contributes a real 2-plane, each diagonal pair `(p, p)` a real
//! line, and the type is realized by a commuting pair of real operators:
//! `E` acts on the `(p, q)`-plane as `(p+q)·Id` and `T` as the rotation
//! generator `(p−q)·J` with `J = [[0, −1], [1, 0]]`. Their sum `S = E + T`
//! has eigenvalues `(p+q) + i(p−q)` — points of the parity lattice — so a
//! single real matrix determines the whole structure.
//!
//! This module builds `(E, T, S)` from a type ([`assemble`]), checks the
//! defining identities `[E, T] = 0`, `sin(πE) = 0`, `sinh(πT) = 0`,
//! `sin(π/2·(E² + T²)) = 0` ([`verify_pair`]) and the lattice-spectrum
//! condition ([`verify_sigma`]), and inverts the construction: [`split`]
//! recovers `(E, T)` from `S` alone, [`classify`] recovers the type,
//! [`hodge_decomposition`] produces the complex eigenplanes `V^{p,q}` and the
//! real weight spaces, [`build_filtration`] the decreasing filtration
//! `F^r = ⊕_{p ≥ r} V^{p,q}`, and [`rho_eval`] the two-parameter group
//! `exp(xE + yT)` the operators generate.
//!
//! All spectral decisions are delegated to
//! [`lattice_spectrum`](crate::linalg::lattice_spectrum), which certifies
//! eigenspace dimensions exactly for integer matrices; recovery functions
//! therefore return exact multiplicities whenever the input is exact.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian_lattice::LatticePoint;
use crate::linalg::{
    commutator, complexify, exact_unimodular_inverse, kernel_basis_with_scale, lattice_spectrum,
    lattice_spectrum_with_candidates, mat_exp, mat_sin, mat_sinh, rank_at_tolerance, real_part,
    ComplexMatrix, MatFunError, RealMatrix, SpectralData, SpectrumError,
};
use crate::weierstrass::sigma_matrix_informative;

/// Series cutoff passed to [`mat_exp`] when evaluating the operator group.
const RHO_EXP_TOL: f64 = 1e-13;

/// Everything that can go wrong while building or inverting an instance.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HodgeError {
    /// A summand was given on the wrong side of the diagonal.
    #[error("summand (p={p}, q={q}) must satisfy q ≤ p; list each pair on its representative with q ≤ p")]
    InvalidSummand {
        /// First index of the offending summand.
        p: i64,
        /// Second index of the offending summand.
        q: i64,
    },
    /// A summand with multiplicity zero carries no information.
    #[error("summand (p={p}, q={q}) has multiplicity 0")]
    ZeroMultiplicity {
        /// First index of the offending summand.
        p: i64,
        /// Second index of the offending summand.
        q: i64,
    },
    /// A type needs at least one summand.
    #[error("a Hodge type needs at least one summand")]
    EmptyType,
    /// The conjugator does not match the assembled dimension.
    #[error("conjugator is {rows}×{cols} but the assembled operators are {dim}×{dim}")]
    ConjugatorShape {
        /// Conjugator row count.
        rows: usize,
        /// Conjugator column count.
        cols: usize,
        /// Dimension demanded by the type.
        dim: usize,
    },
    /// The conjugator has no inverse.
    #[error("conjugator is singular")]
    SingularConjugator,
    /// Operators fed in together must be square and of equal size.
    #[error("operator shapes disagree or are not square")]
    ShapeMismatch,
    /// Tolerances must be positive finite numbers.
    #[error("tolerance must be a positive finite number, got {0}")]
    InvalidTolerance(f64),
    /// Group parameters must be finite.
    #[error("group parameters must be finite")]
    NonFiniteParameter,
    /// An eigenvalue and its complex conjugate disagree in multiplicity, so
    /// the matrix is not the realification of conjugate-symmetric data.
    #[error("eigenvalue {point} has multiplicity {mult} but its conjugate has {conj_mult}")]
    ConjugateMismatch {
        /// The eigenvalue whose conjugate partner is deficient.
        point: LatticePoint,
        /// Its geometric multiplicity.
        mult: usize,
        /// The multiplicity of its conjugate.
        conj_mult: usize,
    },
    /// The eigenspaces of `E` do not match the weights read off `S`.
    #[error("weight {weight} eigenspace of E has dimension {found}, expected {expected} from the spectrum of S")]
    WeightSpaceMismatch {
        /// The weight (eigenvalue of `E`) in question.
        weight: i64,
        /// Kernel dimension actually found.
        found: usize,
        /// Dimension demanded by the spectrum of `S`.
        expected: usize,
    },
    /// The complement identity only makes sense for a single weight.
    #[error("filtration complement check needs a pure weight; found weights {weights:?}")]
    MixedWeight {
        /// All weights present in the decomposition.
        weights: Vec<i64>,
    },
    /// The collected eigenvectors failed to invert (numerically degenerate).
    #[error("eigenvector matrix is numerically singular")]
    EigenbasisSingular,
    /// Spectral analysis failed; carries per-eigenvalue witnesses.
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    /// A matrix function could not be evaluated.
    #[error(transparent)]
    MatFun(#[from] MatFunError),
}

/// One `(p, q)` pair with its multiplicity. Canonical representatives have
/// `q ≤ p`; a summand with `q < p` stands for the conjugate-closed plane pair
/// `V^{p,q} ⊕ V^{q,p}` and contributes `2·mult` real dimensions, a diagonal
/// summand `(p, p)` contributes `mult`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summand {
    /// First Hodge index.
    pub p: i64,
    /// Second Hodge index; at most `p` on canonical representatives.
    pub q: i64,
    /// Multiplicity of the pair; always positive.
    pub mult: usize,
}

impl Summand {
    /// Plain constructor; validation happens in [`HodgeType::new`].
    pub fn new(p: i64, q: i64, mult: usize) -> Self {
        Summand { p, q, mult }
    }

    /// Real dimension contributed: `2·mult` off the diagonal, `mult` on it.
    pub fn dimension(&self) -> usize {
        if self.p == self.q {
            self.mult
        } else {
            2 * self.mult
        }
    }

    /// Sort key: weight first, then distance from the diagonal.
    fn key(&self) -> (i64, i64) {
        (self.p + self.q, self.p - self.q)
    }
}

impl From<(i64, i64, usize)> for Summand {
    fn from((p, q, mult): (i64, i64, usize)) -> Self {
        Summand::new(p, q, mult)
    }
}

/// A validated multiset of `(p, q)` summands in canonical form: every summand
/// has `q ≤ p` and positive multiplicity, duplicates are merged, and the list
/// is sorted by `(p+q, p−q)`.
///
/// Serializes as a plain array of summands; deserialization re-validates and
/// re-canonicalizes, so equal types always compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Summand>", into = "Vec<Summand>")]
pub struct HodgeType {
    summands: Vec<Summand>,
}

impl HodgeType {
    /// Validates, merges duplicates, and sorts into canonical order.
    pub fn new<I, S>(summands: I) -> Result<Self, HodgeError>
    where
        I: IntoIterator<Item = S>,
        S: Into<Summand>,
    {
        let mut merged: BTreeMap<(i64, i64), Summand> = BTreeMap::new();
        for raw in summands {
            let s: Summand = raw.into();
            if s.q > s.p {
                return Err(HodgeError::InvalidSummand { p: s.p, q: s.q });
            }
            if s.mult == 0 {
                return Err(HodgeError::ZeroMultiplicity { p: s.p, q: s.q });
            }
            merged
                .entry(s.key())
                .and_modify(|t| t.mult += s.mult)
                .or_insert(s);
        }
        if merged.is_empty() {
            return Err(HodgeError::EmptyType);
        }
        Ok(HodgeType {
            summands: merged.into_values().collect(),
        })
    }

    /// The summands in canonical order.
    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    /// Total real dimension of the realization.
    pub fn dimension(&self) -> usize {
        self.summands.iter().map(Summand::dimension).sum()
    }
}

impl TryFrom<Vec<Summand>> for HodgeType {
    type Error = HodgeError;

    fn try_from(v: Vec<Summand>) -> Result<Self, HodgeError> {
        HodgeType::new(v)
    }
}

impl From<HodgeType> for Vec<Summand> {
    fn from(ht: HodgeType) -> Self {
        ht.summands
    }
}

impl fmt::Display for HodgeType {
    /// Renders as `(p,q)xM` terms joined by `+`, e.g. `(1,0)x2+(1,1)x1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "({},{})x{}", s.p, s.q, s.mult)?;
        }
        Ok(())
    }
}

/// The realized operators. `s` is always the entrywise sum `e + t`; the
/// constructors enforce this, [`OperatorTriple::from_parts`] merely checks
/// shapes so that [`verify_triple`] can flag an inconsistent trio.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTriple {
    /// Weight operator: real, diagonalizable, integer spectrum.
    pub e: RealMatrix,
    /// Rotation generator: real, semisimple, purely imaginary spectrum.
    pub t: RealMatrix,
    /// The sum `e + t`, which alone determines the other two.
    pub s: RealMatrix,
}

impl OperatorTriple {
    /// Builds the triple from a commuting pair, computing `s = e + t`.
    pub fn new(e: RealMatrix, t: RealMatrix) -> Result<Self, HodgeError> {
        if e.nrows() != e.ncols() || e.shape() != t.shape() {
            return Err(HodgeError::ShapeMismatch);
        }
        let s = &e + &t;
        Ok(OperatorTriple { e, t, s })
    }

    /// Wraps three matrices read from elsewhere. Shapes must agree; the sum
    /// identity is *not* enforced here — [`verify_triple`] reports on it.
    pub fn from_parts(e: RealMatrix, t: RealMatrix, s: RealMatrix) -> Result<Self, HodgeError> {
        if e.nrows() != e.ncols() || e.shape() != t.shape() || e.shape() != s.shape() {
            return Err(HodgeError::ShapeMismatch);
        }
        Ok(OperatorTriple { e, t, s })
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.e.nrows()
    }
}

/// Outcome of a verification run. Each norm is `Some` when the corresponding
/// residual was evaluated; `verdict` is true only if every evaluated residual
/// is at most `threshold` and nothing failed to evaluate. `witnesses` lists
/// human-readable reasons for a false verdict (and is empty otherwise).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Frobenius norm of `[E, T]`.
    pub commutator_norm: Option<f64>,
    /// Frobenius norm of `sin(πE)`.
    #[serde(rename = "sin_E_norm")]
    pub sin_e_norm: Option<f64>,
    /// Frobenius norm of `sinh(πT)`.
    #[serde(rename = "sinh_T_norm")]
    pub sinh_t_norm: Option<f64>,
    /// Frobenius norm of `sin(π/2·(E² + T²))`.
    pub parity_norm: Option<f64>,
    /// Frobenius norm of the operator sigma value; corroborating evidence
    /// only — the sigma verdict itself is decided structurally.
    pub sigma_norm: Option<f64>,
    /// Scale-adjusted acceptance threshold the residuals were compared to.
    pub threshold: f64,
    /// True exactly when every check passed.
    pub verdict: bool,
    /// Reasons for failure, empty on success.
    pub witnesses: Vec<String>,
}

impl VerificationReport {
    fn empty(threshold: f64) -> Self {
        VerificationReport {
            commutator_norm: None,
            sin_e_norm: None,
            sinh_t_norm: None,
            parity_norm: None,
            sigma_norm: None,
            threshold,
            verdict: false,
            witnesses: Vec::new(),
        }
    }
}

/// The elementary building block for one summand, before any conjugation.
///
/// Inputs are normalized to the canonical representative, so `(p, q)` and
/// `(q, p)` produce the same block. Off the diagonal the block is the 2×2
/// pair `E = (p+q)·Id`, `T = (p−q)·J`; on the diagonal it is the 1×1 pair
/// `([2p], [0])`.
pub fn build_block(p: i64, q: i64) -> (RealMatrix, RealMatrix) {
    if p == q {
        return (
            RealMatrix::from_element(1, 1, (2 * p) as f64),
            RealMatrix::zeros(1, 1),
        );
    }
    let (hi, lo) = if p >= q { (p, q) } else { (q, p) };
    let a = (hi + lo) as f64;
    let b = (hi - lo) as f64;
    let e = RealMatrix::identity(2, 2) * a;
    let t = RealMatrix::from_row_slice(2, 2, &[0.0, -b, b, 0.0]);
    (e, t)
}

/// Realizes a type as an operator triple, optionally conjugated.
///
/// Blocks are laid out along the diagonal in canonical order, each repeated
/// by its multiplicity. With a conjugator `P` the result is
/// `(P·E₀·P⁻¹, P·T₀·P⁻¹)`; integer `P` with determinant `±1` is inverted
/// exactly, so integer types stay exactly integer. `S = E + T` is formed
/// entrywise after conjugation and is exact by construction.
pub fn assemble(
    ht: &HodgeType,
    conjugator: Option<&RealMatrix>,
) -> Result<OperatorTriple, HodgeError> {
    let n = ht.dimension();
    let mut e0 = RealMatrix::zeros(n, n);
    let mut t0 = RealMatrix::zeros(n, n);
    let mut at = 0;
    for s in ht.summands() {
        let (be, bt) = build_block(s.p, s.q);
        let k = be.nrows();
        for _ in 0..s.mult {
            e0.view_mut((at, at), (k, k)).copy_from(&be);
            t0.view_mut((at, at), (k, k)).copy_from(&bt);
            at += k;
        }
    }
    let (e, t) = match conjugator {
        None => (e0, t0),
        Some(pm) => {
            if pm.nrows() != n || pm.ncols() != n {
                return Err(HodgeError::ConjugatorShape {
                    rows: pm.nrows(),
                    cols: pm.ncols(),
                    dim: n,
                });
            }
            let inv = exact_unimodular_inverse(pm)
                .or_else(|| pm.clone().try_inverse())
                .ok_or(HodgeError::SingularConjugator)?;
            (pm * &e0 * &inv, pm * &t0 * &inv)
        }
    };
    let s = &e + &t;
    Ok(OperatorTriple { e, t, s })
}

/// Checks the four defining identities of a commuting pair.
///
/// Residuals are compared against `τ·max(1, ‖E‖ + ‖T‖)` (Frobenius norms).
/// Failures are reported in the verdict and witnesses, never thrown; a
/// residual that cannot be evaluated also yields a false verdict.
pub fn verify_pair(e: &RealMatrix, t: &RealMatrix, tau: f64) -> VerificationReport {
    if !(tau > 0.0 && tau.is_finite()) {
        let mut r = VerificationReport::empty(0.0);
        r.witnesses
            .push("tolerance must be a positive finite number".to_string());
        return r;
    }
    if e.nrows() != e.ncols() || e.shape() != t.shape() {
        let mut r = VerificationReport::empty(tau);
        r.witnesses
            .push("operator shapes disagree or are not square".to_string());
        return r;
    }
    let threshold = tau * (e.norm() + t.norm()).max(1.0);
    let mut witnesses = Vec::new();
    let mut take = |label: &str, res: Result<RealMatrix, MatFunError>| -> Option<f64> {
        match res {
            Ok(m) => {
                let v = m.norm();
                // Negated form so a NaN residual counts as a violation.
                #[allow(clippy::neg_cmp_op_on_partial_ord)]
                if !(v <= threshold) {
                    witnesses.push(format!(
                        "{label} residual {v:.3e} exceeds threshold {threshold:.3e}"
                    ));
                }
                Some(v)
            }
            Err(err) => {
                witnesses.push(format!("{label} evaluation failed: {err}"));
                None
            }
        }
    };
    let commutator_norm = take(
        "commutator",
        Ok(commutator(e, t).expect("shapes checked above")),
    );
    let sin_e_norm = take("sin(pi E)", mat_sin(&(e * PI), tau));
    let sinh_t_norm = take("sinh(pi T)", mat_sinh(&(t * PI), tau));
    let parity_arg = (e * e + t * t) * (PI / 2.0);
    let parity_norm = take("parity sin(pi/2 (E^2+T^2))", mat_sin(&parity_arg, tau));
    let verdict = [commutator_norm, sin_e_norm, sinh_t_norm, parity_norm]
        .iter()
        .all(|o| matches!(o, Some(v) if *v <= threshold));
    VerificationReport {
        commutator_norm,
        sin_e_norm,
        sinh_t_norm,
        parity_norm,
        sigma_norm: None,
        threshold,
        verdict,
        witnesses,
    }
}

/// Decides whether `S` is annihilated by the lattice sigma function.
///
/// The verdict is structural: it is true exactly when `S` is diagonalizable
/// with all eigenvalues in the parity lattice, which is the precise condition
/// for the operator sigma value to vanish. The numeric sigma norm is attached
/// as corroborating evidence when it is informative (`None` when the floating
/// evaluation would be rounding noise or is out of budget; see
/// [`crate::weierstrass::sigma_matrix_informative`]), but it never decides the
/// verdict — a float residual cannot certify a spectral property the way
/// exact rank counting can.
pub fn verify_sigma(s: &RealMatrix, tau: f64) -> VerificationReport {
    if !(tau > 0.0 && tau.is_finite()) {
        let mut r = VerificationReport::empty(0.0);
        r.witnesses
            .push("tolerance must be a positive finite number".to_string());
        return r;
    }
    let threshold = tau * s.norm().max(1.0);
    let mut witnesses = Vec::new();
    let verdict = match lattice_spectrum(s, tau) {
        Ok(_) => true,
        Err(SpectrumError::OffLatticeOrDefective {
            witnesses: found, ..
        }) => {
            witnesses.extend(found.iter().map(|w| w.to_string()));
            false
        }
        Err(err) => {
            witnesses.push(err.to_string());
            false
        }
    };
    let sigma_norm = sigma_matrix_informative(s, tau)
        .ok()
        .flatten()
        .map(|m| m.norm());
    VerificationReport {
        commutator_norm: None,
        sin_e_norm: None,
        sinh_t_norm: None,
        parity_norm: None,
        sigma_norm,
        threshold,
        verdict,
        witnesses,
    }
}

/// Full verification of a triple: the pair identities, the sigma condition,
/// and consistency of the stored sum `S` with `E + T`.
pub fn verify_triple(triple: &OperatorTriple, tau: f64) -> VerificationReport {
    let pair = verify_pair(&triple.e, &triple.t, tau);
    let sigma = verify_sigma(&triple.s, tau);
    let mut witnesses = pair.witnesses;
    witnesses.extend(sigma.witnesses);
    let mut verdict = pair.verdict && sigma.verdict;
    if triple.e.shape() == triple.t.shape() && triple.e.shape() == triple.s.shape() {
        let drift = (&triple.s - (&triple.e + &triple.t)).norm();
        let allowed = tau.max(0.0) * triple.s.norm().max(1.0);
        // Negated form so a NaN drift counts as a violation.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(drift <= allowed) {
            witnesses.push(format!("S differs from E + T by {drift:.3e}"));
            verdict = false;
        }
    } else {
        witnesses.push("operator shapes disagree or are not square".to_string());
        verdict = false;
    }
    VerificationReport {
        commutator_norm: pair.commutator_norm,
        sin_e_norm: pair.sin_e_norm,
        sinh_t_norm: pair.sinh_t_norm,
        parity_norm: pair.parity_norm,
        sigma_norm: sigma.sigma_norm,
        threshold: pair.threshold,
        verdict,
        witnesses,
    }
}

fn check_tau(tau: f64) -> Result<(), HodgeError> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(HodgeError::InvalidTolerance(tau))
    }
}

/// Shared inverse step: diagonalize on the certified eigenbasis and read off
/// the real/imaginary parts of the spectrum as commuting real operators.
fn operators_from_spectrum(data: &SpectralData) -> Result<(RealMatrix, RealMatrix), HodgeError> {
    let b = data.eigenvector_matrix();
    let binv = b
        .clone()
        .try_inverse()
        .ok_or(HodgeError::EigenbasisSingular)?;
    let mut re_diag = Vec::with_capacity(data.dimension());
    let mut im_diag = Vec::with_capacity(data.dimension());
    for (w, basis) in &data.eigenpairs {
        for _ in basis {
            re_diag.push(Complex64::new(w.a() as f64, 0.0));
            im_diag.push(Complex64::new(0.0, w.b() as f64));
        }
    }
    let d_re = ComplexMatrix::from_diagonal(&DVector::from_vec(re_diag));
    let d_im = ComplexMatrix::from_diagonal(&DVector::from_vec(im_diag));
    let e = real_part(&(&b * d_re * &binv));
    let t = real_part(&(&b * d_im * &binv));
    Ok((e, t))
}

/// Recovers the commuting pair `(E, T)` from the sum `S` alone.
///
/// `E` collects the real parts of the spectrum, `T` the imaginary parts, on
/// the shared eigenbasis; both results are real because lattice spectra of
/// real matrices are conjugate-symmetric. Spectral failures (off-lattice
/// eigenvalues, defective eigenvalues) are propagated as errors.
pub fn split(s: &RealMatrix, tau: f64) -> Result<(RealMatrix, RealMatrix), HodgeError> {
    check_tau(tau)?;
    let data = lattice_spectrum(s, tau)?;
    operators_from_spectrum(&data)
}

/// [`split`] with the candidate eigenvalue list supplied by the caller.
///
/// The result is independent of candidate order and duplication; callers can
/// use this to cross-check determinism of the recovery.
pub fn split_with_candidates(
    s: &RealMatrix,
    tau: f64,
    candidates: &[LatticePoint],
) -> Result<(RealMatrix, RealMatrix), HodgeError> {
    check_tau(tau)?;
    let data = lattice_spectrum_with_candidates(s, tau, candidates)?;
    operators_from_spectrum(&data)
}

/// Rejects spectra whose conjugate eigenvalues disagree in multiplicity.
fn check_conjugate_multiplicities(data: &SpectralData) -> Result<(), HodgeError> {
    for (w, basis) in &data.eigenpairs {
        if w.b() != 0 {
            let conj_mult = data.multiplicity_of(w.conj());
            if conj_mult != basis.len() {
                return Err(HodgeError::ConjugateMismatch {
                    point: *w,
                    mult: basis.len(),
                    conj_mult,
                });
            }
        }
    }
    Ok(())
}

/// Reads the Hodge type back off a single matrix.
///
/// Each eigenvalue `a + ib` with `b > 0` contributes the summand
/// `((a+b)/2, (a−b)/2)` with its geometric multiplicity; real eigenvalues
/// `2p` contribute `(p, p)`. Conjugate eigenvalues must carry equal
/// multiplicities — a mismatch means the matrix does not realify
/// conjugate-symmetric data and is reported as an error.
pub fn classify(s: &RealMatrix, tau: f64) -> Result<HodgeType, HodgeError> {
    check_tau(tau)?;
    let data = lattice_spectrum(s, tau)?;
    check_conjugate_multiplicities(&data)?;
    let mut summands = Vec::new();
    for (w, basis) in &data.eigenpairs {
        if w.b() >= 0 {
            let (p, q) = w.pq();
            summands.push(Summand::new(p, q, basis.len()));
        }
    }
    HodgeType::new(summands)
}

/// The recovered eigenstructure: complex eigenplanes indexed by `(p, q)` and
/// real weight spaces indexed by the eigenvalue of `E`.
#[derive(Debug, Clone)]
pub struct HodgeDecomposition {
    /// Orthonormal complex basis of each `V^{p,q}`, keyed by `(p, q)`; both
    /// members of every conjugate pair are present.
    pub components: BTreeMap<(i64, i64), Vec<DVector<Complex64>>>,
    /// Orthonormal real basis of each weight space, keyed by weight.
    pub weight_map: BTreeMap<i64, Vec<DVector<f64>>>,
}

impl HodgeDecomposition {
    /// Total complex dimension (equals the ambient real dimension).
    pub fn dimension(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }
}

/// Kernel of a real matrix with a real orthonormal basis, with the pivot
/// threshold anchored to an external scale (the norm of the operator the
/// matrix was shifted from — its own norm can be pure noise).
///
/// Elimination on the complexified matrix keeps every intermediate value
/// exactly real (all arithmetic stays on the real axis), so dropping the zero
/// imaginary parts is exact.
fn real_kernel_basis(m: &RealMatrix, tau: f64, scale: f64) -> Vec<DVector<f64>> {
    kernel_basis_with_scale(&complexify(m), tau, scale)
        .into_iter()
        .map(|v| v.map(|z| z.re))
        .collect()
}

/// Splits the complexified space into the eigenplanes `V^{p,q}` of `S` and
/// groups them into real weight spaces via the eigenvalues of `E`.
///
/// The weight spaces are computed directly as real kernels of `E − n·Id` and
/// cross-checked against the dimensions demanded by the spectrum of `S`; a
/// mismatch (possible only for an inconsistent triple) is an error, as is a
/// conjugate-multiplicity imbalance.
pub fn hodge_decomposition(
    triple: &OperatorTriple,
    tau: f64,
) -> Result<HodgeDecomposition, HodgeError> {
    check_tau(tau)?;
    if triple.e.nrows() != triple.e.ncols()
        || triple.e.shape() != triple.t.shape()
        || triple.e.shape() != triple.s.shape()
    {
        return Err(HodgeError::ShapeMismatch);
    }
    let data = lattice_spectrum(&triple.s, tau)?;
    check_conjugate_multiplicities(&data)?;
    let mut components = BTreeMap::new();
    let mut expected: BTreeMap<i64, usize> = BTreeMap::new();
    for (w, basis) in &data.eigenpairs {
        components.insert(w.pq(), basis.clone());
        *expected.entry(w.a()).or_default() += basis.len();
    }
    let n = triple.n();
    let mut weight_map = BTreeMap::new();
    let scale = triple.e.norm().max(1.0);
    for (&weight, &dim) in &expected {
        let shifted = &triple.e - RealMatrix::identity(n, n) * (weight as f64);
        let basis = real_kernel_basis(&shifted, tau, scale);
        if basis.len() != dim {
            return Err(HodgeError::WeightSpaceMismatch {
                weight,
                found: basis.len(),
                expected: dim,
            });
        }
        weight_map.insert(weight, basis);
    }
    Ok(HodgeDecomposition {
        components,
        weight_map,
    })
}

/// The decreasing filtration step `F^r = ⊕_{p ≥ r} V^{p,q}`.
///
/// Concatenates the stored component bases with first index at least `r`, in
/// ascending `(p, q)` order; the result is empty once `r` exceeds every `p`.
pub fn build_filtration(dec: &HodgeDecomposition, r: i64) -> Vec<DVector<Complex64>> {
    let mut out = Vec::new();
    for (&(p, _), basis) in &dec.components {
        if p >= r {
            out.extend(basis.iter().cloned());
        }
    }
    out
}

/// Outcome of the opposed-filtration check at one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiltrationComplement {
    /// The single weight of the decomposition.
    pub weight: i64,
    /// The step `r` the check was run at.
    pub step: i64,
    /// `dim F^r`.
    pub dim: usize,
    /// `dim F^{n−r+1}` for weight `n`.
    pub complement_dim: usize,
    /// Whether the two dimensions sum to the ambient dimension.
    pub dimensions_complementary: bool,
    /// Whether `F^r ∩ conj(F^{n−r+1})` is zero at the working tolerance.
    pub intersection_trivial: bool,
}

impl FiltrationComplement {
    /// True when the filtration is opposed to its conjugate at this step.
    pub fn holds(&self) -> bool {
        self.dimensions_complementary && self.intersection_trivial
    }
}

/// Checks that `F^r` and the conjugate of `F^{n−r+1}` are complementary.
///
/// Only meaningful on a pure weight `n`: mixed-weight decompositions are
/// rejected with [`HodgeError::MixedWeight`]. Triviality of the intersection
/// is decided by a rank computation on the stacked bases.
pub fn check_filtration_complement(
    dec: &HodgeDecomposition,
    r: i64,
    tau: f64,
) -> Result<FiltrationComplement, HodgeError> {
    check_tau(tau)?;
    let weights: Vec<i64> = dec.weight_map.keys().copied().collect();
    if weights.len() != 1 {
        return Err(HodgeError::MixedWeight { weights });
    }
    let weight = weights[0];
    let f = build_filtration(dec, r);
    let g = build_filtration(dec, weight - r + 1);
    let n = dec.dimension();
    let total = f.len() + g.len();
    let mut stacked = ComplexMatrix::zeros(n, total);
    for (j, v) in f.iter().enumerate() {
        stacked.set_column(j, v);
    }
    for (j, v) in g.iter().enumerate() {
        stacked.set_column(f.len() + j, &v.map(|z| z.conj()));
    }
    Ok(FiltrationComplement {
        weight,
        step: r,
        dim: f.len(),
        complement_dim: g.len(),
        dimensions_complementary: total == n,
        intersection_trivial: rank_at_tolerance(&stacked, tau) == total,
    })
}

/// Evaluates the two-parameter operator group `exp(xE + yT)`.
///
/// On each `(p, q)`-plane this is the scaling `e^{(p+q)x}` composed with the
/// rotation by angle `(p−q)y`; multiplicativity in `(x, y)` follows from
/// `[E, T] = 0`.
pub fn rho_eval(triple: &OperatorTriple, x: f64, y: f64) -> Result<RealMatrix, HodgeError> {
    if !(x.is_finite() && y.is_finite()) {
        return Err(HodgeError::NonFiniteParameter);
    }
    Ok(mat_exp(&(&triple.e * x + &triple.t * y), RHO_EXP_TOL)?)
}

/// The real weight-space decomposition: eigenspaces of `E`, keyed by their
/// integer eigenvalue. `rho_eval(triple, x, 0)` acts on the weight-`n` space
/// as multiplication by `e^{n·x}`.
pub fn weight_decomposition(
    triple: &OperatorTriple,
    tau: f64,
) -> Result<BTreeMap<i64, Vec<DVector<f64>>>, HodgeError> {
    hodge_decomposition(triple, tau).map(|dec| dec.weight_map)
}

/// Tests whether every eigenvalue of `S` lies in the allowed `(p, q)` set,
/// closed under swapping the two indices (a matrix cannot distinguish a pair
/// from its conjugate).
///
/// Spectral failures are propagated as errors rather than reported as
/// `false`: an off-lattice matrix is outside the domain of the question.
pub fn verify_restricted(
    s: &RealMatrix,
    allowed: &[(i64, i64)],
    tau: f64,
) -> Result<bool, HodgeError> {
    check_tau(tau)?;
    let data = lattice_spectrum(s, tau)?;
    Ok(data.eigenpairs.iter().all(|(w, _)| {
        let (p, q) = w.pq();
        allowed
            .iter()
            .any(|&(ap, aq)| (ap, aq) == (p, q) || (aq, ap) == (p, q))
    }))
}
