//! Realize real Hodge structures as linear operators.
//!
//! A real Hodge structure on a finite-dimensional real vector space `V` is
//! classified by a finite multiset of integer pairs `(p, q)`. This crate
//! builds the corresponding operator pair `(E, T)` and their sum `S = E + T`,
//! verifies the matrix equations that characterize such pairs
//! (`[E, T] = 0`, `sin(πE) = 0`, `sinh(πT) = 0`, `sin(π/2·(E² + T²)) = 0`,
//! and `σ(S) = 0` for the Weierstrass σ-function of the parity lattice
//! `L = Z(1−i) + Z(1+i)`), and recovers the full decomposition, filtration,
//! and torus representation from the single matrix `S`.
//!
//! Modules, bottom up:
//!
//! * [`gaussian_lattice`] — the lattice `L`, membership, enumeration, and the
//!   `(p, q) ↔ a + ib` eigenvalue dictionary;
//! * [`linalg`] — dense real/complex kernels: numerical null spaces, matrix
//!   exp/sin/sinh, and a lattice-spectrum solver that decides
//!   diagonalizability with spectrum in `L` by finite candidate enumeration;
//! * [`weierstrass`] — scalar and matrix σ evaluation by truncated products
//!   with controlled truncation error, plus the ζ-function;
//! * [`hodge_ops`] — building, verifying, splitting, classifying, and
//!   decomposing operator triples;
//! * [`instance_gen`] — seeded random Hodge types and unimodular conjugators
//!   for property tests and demos;
//! * [`cli`] — the `hodge-sigma` command-line surface with JSON/CSV I/O.

pub mod cli;
pub mod gaussian_lattice;
pub mod hodge_ops;
pub mod instance_gen;
pub mod linalg;
pub mod weierstrass;

/// Default tolerance used by verification and CLI entry points when none is
/// given explicitly (overridable per call or via `HODGE_SIGMA_TOL`).
pub const DEFAULT_TOL: f64 = 1e-8;
