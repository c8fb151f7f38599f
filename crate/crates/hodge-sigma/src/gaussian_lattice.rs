//! The parity lattice `L = Z·(1−i) + Z·(1+i)` inside the Gaussian integers.
//!
//! A Gaussian integer `a + ib` lies in `L` exactly when `a` and `b` have the
//! same parity. Writing `p = (a+b)/2` and `q = (a−b)/2` gives the inverse
//! dictionary `a = p + q`, `b = p − q`, which is how lattice points correspond
//! to the type labels `(p, q)` of Hodge summands: a summand of type `(p, q)`
//! contributes the eigenvalue `(p+q) + i(p−q)` to the operator `S`.

use num_complex::Complex64;
use thiserror::Error;

/// Default cap on the number of points [`enumerate`] will materialize.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// A point of the lattice `L`: a Gaussian integer `a + ib` with `a ≡ b (mod 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    a: i64,
    b: i64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("({a}, {b}) violates the parity constraint a ≡ b (mod 2)")]
    Parity { a: i64, b: i64 },
    #[error("radius must be a finite nonnegative number, got {0}")]
    InvalidRadius(f64),
    #[error("enumeration of radius {radius} needs about {needed} points, over the cap {cap}")]
    CapExceeded {
        radius: f64,
        needed: usize,
        cap: usize,
    },
}

impl LatticePoint {
    /// Builds a lattice point, rejecting coordinates of unequal parity.
    pub fn new(a: i64, b: i64) -> Result<Self, LatticeError> {
        if is_lattice_point(a, b) {
            Ok(Self { a, b })
        } else {
            Err(LatticeError::Parity { a, b })
        }
    }

    /// The lattice point `(p+q) + i(p−q)` of a type label `(p, q)`.
    /// Total: every `(p, q)` produces valid parity.
    pub fn from_pq(p: i64, q: i64) -> Self {
        Self { a: p + q, b: p - q }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// The type label `(p, q) = ((a+b)/2, (a−b)/2)`; exact inverse of
    /// [`LatticePoint::from_pq`].
    pub fn pq(&self) -> (i64, i64) {
        ((self.a + self.b) / 2, (self.a - self.b) / 2)
    }

    pub fn conj(&self) -> Self {
        Self {
            a: self.a,
            b: -self.b,
        }
    }

    pub fn norm_sqr(&self) -> i64 {
        self.a * self.a + self.b * self.b
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.a as f64, self.b as f64)
    }

    /// Argument mapped into `[0, 2π)`, the angle used by the enumeration order.
    pub(crate) fn arg_key(&self) -> f64 {
        let t = (self.b as f64).atan2(self.a as f64);
        if t < 0.0 {
            t + std::f64::consts::TAU
        } else {
            t
        }
    }
}

impl std::fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b >= 0 {
            write!(f, "{}+{}i", self.a, self.b)
        } else {
            write!(f, "{}{}i", self.a, self.b)
        }
    }
}

/// Membership test: `a + ib ∈ L` iff `a` and `b` have equal parity.
pub fn is_lattice_point(a: i64, b: i64) -> bool {
    (a ^ b) & 1 == 0
}

/// The type label of a lattice point (see [`LatticePoint::pq`]).
pub fn pq_of_lambda(lambda: LatticePoint) -> (i64, i64) {
    lambda.pq()
}

/// The lattice point of a type label (see [`LatticePoint::from_pq`]).
pub fn lambda_of_pq(p: i64, q: i64) -> LatticePoint {
    LatticePoint::from_pq(p, q)
}

/// All lattice points with `|w| ≤ radius`, sorted by `(|w|, arg w)` with the
/// argument taken in `[0, 2π)`. The order is deterministic; distinct points of
/// equal modulus always have distinct arguments, so the key is a total order.
///
/// Fails fast (before materializing anything) when the disk holds more than
/// `cap` points; see [`DEFAULT_ENUMERATION_CAP`] for the [`enumerate`] default.
pub fn enumerate_with_cap(radius: f64, cap: usize) -> Result<Vec<LatticePoint>, LatticeError> {
    if !radius.is_finite() || radius < 0.0 {
        return Err(LatticeError::InvalidRadius(radius));
    }
    // Point density is 1/2 per unit area, so ~ π r²/2 points; pad for slack.
    let estimate = (std::f64::consts::PI / 2.0 * radius * radius * 1.1) as usize + 9;
    if estimate > cap {
        return Err(LatticeError::CapExceeded {
            radius,
            needed: estimate,
            cap,
        });
    }
    let r_sq = radius * radius;
    let bound = radius.floor() as i64;
    let mut points = Vec::new();
    for b in -bound..=bound {
        for a in -bound..=bound {
            if is_lattice_point(a, b) && ((a * a + b * b) as f64) <= r_sq {
                points.push(LatticePoint { a, b });
                if points.len() > cap {
                    return Err(LatticeError::CapExceeded {
                        radius,
                        needed: points.len(),
                        cap,
                    });
                }
            }
        }
    }
    points.sort_by(|u, v| {
        u.norm_sqr()
            .cmp(&v.norm_sqr())
            .then_with(|| u.arg_key().partial_cmp(&v.arg_key()).unwrap())
    });
    Ok(points)
}

/// [`enumerate_with_cap`] with the default cap.
pub fn enumerate(radius: f64) -> Result<Vec<LatticePoint>, LatticeError> {
    enumerate_with_cap(radius, DEFAULT_ENUMERATION_CAP)
}

/// Streams one representative from each pair `{w, −w}` of nonzero lattice
/// points with `|w| ≤ radius`, keeping `w` with `b > 0`, or `b = 0 ∧ a > 0`.
///
/// Intended for the σ/ζ truncated products, which only need the pair set and
/// must not materialize hundreds of millions of points. Iteration is row-major
/// (`b` ascending, then `a` ascending) rather than sorted by modulus; callers
/// that need the modulus order should sort a materialized [`enumerate`] list.
pub fn pair_representatives(radius: f64) -> impl Iterator<Item = (i64, i64)> {
    let bound = if radius.is_finite() && radius >= 0.0 {
        radius.floor() as i64
    } else {
        -1
    };
    let r_sq = radius * radius;
    (0..=bound).flat_map(move |b| {
        let half_width = ((r_sq - (b * b) as f64).max(0.0)).sqrt().floor() as i64;
        let lo = if b == 0 { 1 } else { -half_width };
        (lo..=half_width)
            .filter(move |a| is_lattice_point(*a, b) && (a * a + b * b) as f64 <= r_sq)
            .map(move |a| (a, b))
    })
}

/// Number of points yielded by [`pair_representatives`] without iterating the
/// lattice (used for resource budgeting: half the disk count, origin excluded).
pub fn pair_count_estimate(radius: f64) -> f64 {
    (std::f64::consts::PI / 4.0 * radius * radius).max(0.0)
}

/// The lattice point nearest to `z`, with the Euclidean distance.
///
/// The generators `1−i` and `1+i` are orthogonal of equal length, so rounding
/// the coordinates of `z` in that basis yields an exact nearest point.
pub fn nearest(z: Complex64) -> (LatticePoint, f64) {
    let alpha = ((z.re - z.im) / 2.0).round(); // coefficient of 1−i
    let beta = ((z.re + z.im) / 2.0).round(); // coefficient of 1+i
    let point = LatticePoint {
        a: (alpha + beta) as i64,
        b: (beta - alpha) as i64,
    };
    let dist = (z - point.to_complex()).norm();
    (point, dist)
}
