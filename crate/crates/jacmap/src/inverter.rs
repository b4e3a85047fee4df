//! Exact polynomial inverses by truncated fixed-point iteration.
//!
//! Writing the map as `c + A(x,y) + H(x,y)` with `A` linear and `H` of
//! order > 1, a polynomial inverse of the constant-free part satisfies
//! `Psi = A^-1 (id - H(Psi))`. Iterating that equation truncated at degree
//! `N` stabilizes the coefficients one degree per pass, so the fixed point
//! is the degree-`N` truncation of the formal inverse series. A candidate
//! is accepted only after exact, untruncated composition with the original
//! map in both orders yields the identity; otherwise the truncation degree
//! doubles up to a cap.

use std::fmt;

use num_traits::Zero;

use crate::analyzer::{classify_jacobian, split_linear, PolyMap};
use crate::poly::{Poly2, Rational};

/// Default ceiling for the truncation degree.
pub const DEFAULT_TRUNCATION_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseResult {
    pub inverse: PolyMap,
    /// Truncation degree at which the fixed point verified.
    pub truncation_degree_used: u32,
    /// Exact two-sided composition check passed. Always true for a
    /// returned result; recorded so certificates can state it.
    pub verified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvertError {
    /// No truncation degree up to the cap produced a verified inverse.
    CapExceeded { cap: u32 },
    /// The jacobian determinant is not a nonzero constant, so no polynomial
    /// inverse can exist.
    NotJacobian,
}

impl fmt::Display for InvertError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvertError::CapExceeded { cap } => {
                write!(
                    f,
                    "no polynomial inverse found up to truncation degree {cap}"
                )
            }
            InvertError::NotJacobian => {
                write!(f, "jacobian determinant is not a nonzero constant")
            }
        }
    }
}

impl std::error::Error for InvertError {}

/// `m . candidate` and `candidate . m` are both exactly the identity.
pub fn verify_inverse(m: &PolyMap, candidate: &PolyMap) -> bool {
    m.compose(candidate).is_identity() && candidate.compose(m).is_identity()
}

/// Compute the polynomial inverse of `m`, trying truncation degrees from
/// the degree of `m` and doubling up to `cap`.
pub fn formal_inverse(m: &PolyMap, cap: u32) -> Result<InverseResult, InvertError> {
    if !classify_jacobian(m).is_jacobian {
        return Err(InvertError::NotJacobian);
    }
    let split = split_linear(m);
    // for a jacobian map the determinant at the origin equals the linear
    // determinant, so the linear part is invertible
    let inv = split
        .linear_matrix()
        .inverse()
        .expect("jacobian map has nonsingular linear part");

    let degree = split.translated().degree().finite().unwrap_or(1).max(1);
    let cap = cap.max(1);
    let mut n = degree.min(cap);
    loop {
        let psi = truncated_series_inverse(&split.p, &split.q, &inv, n);
        let candidate = shift_inputs(&psi, &split.constant_first, &split.constant_second);
        if verify_inverse(m, &candidate) {
            return Ok(InverseResult {
                inverse: candidate,
                truncation_degree_used: n,
                verified: true,
            });
        }
        if n >= cap {
            return Err(InvertError::CapExceeded { cap });
        }
        n = n.saturating_mul(2).min(cap);
    }
}

// Fixed point of psi -> trunc_n(A^-1 (id - H(psi))) for the constant-free
// map A + H. Coefficients of degree k stabilize after k passes, so at most
// n + 1 passes are needed; the outer verification guards the extra bound.
fn truncated_series_inverse(p: &Poly2, q: &Poly2, inv: &crate::poly::Mat2, n: u32) -> PolyMap {
    let apply_inv = |u: &Poly2, v: &Poly2| {
        PolyMap::new(
            &u.scale(&inv.a) + &v.scale(&inv.b),
            &u.scale(&inv.c) + &v.scale(&inv.d),
        )
    };
    let mut psi = apply_inv(&Poly2::x(), &Poly2::y());
    for _ in 0..=n {
        let hp = p.substitute_truncated(&psi.first, &psi.second, n);
        let hq = q.substitute_truncated(&psi.first, &psi.second, n);
        let rx = &Poly2::x() - &hp;
        let ry = &Poly2::y() - &hq;
        let next = apply_inv(&rx, &ry);
        if next == psi {
            break;
        }
        psi = next;
    }
    psi
}

// Inverse of (translation by c) . m0 is (inverse of m0) . (translation by -c).
fn shift_inputs(psi: &PolyMap, c1: &Rational, c2: &Rational) -> PolyMap {
    if c1.is_zero() && c2.is_zero() {
        return psi.clone();
    }
    let u = &Poly2::x() - &Poly2::constant(c1.clone());
    let v = &Poly2::y() - &Poly2::constant(c2.clone());
    PolyMap::new(psi.first.substitute(&u, &v), psi.second.substitute(&u, &v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::jacobian_det;
    use crate::parse::parse_map;
    use crate::poly::{rat, ratio};

    fn map(text: &str) -> PolyMap {
        parse_map(text).unwrap()
    }

    #[test]
    fn triangular_cubic_inverse() {
        let m = map("(x + y^3, y)");
        let result = formal_inverse(&m, DEFAULT_TRUNCATION_CAP).unwrap();
        assert_eq!(result.inverse, map("(x - y^3, y)"));
        assert_eq!(result.truncation_degree_used, 3);
        assert!(result.verified);
    }

    #[test]
    fn identity_inverse() {
        let result = formal_inverse(&PolyMap::identity(), DEFAULT_TRUNCATION_CAP).unwrap();
        assert!(result.inverse.is_identity());
        assert_eq!(result.truncation_degree_used, 1);
    }

    #[test]
    fn pure_linear_inverse() {
        let m = map("(2*x + y, x + y)");
        let result = formal_inverse(&m, DEFAULT_TRUNCATION_CAP).unwrap();
        assert_eq!(result.inverse, map("(x - y, 2*y - x)"));
    }

    #[test]
    fn quadratic_family_inverse() {
        let m = map("(x + (y - x)^2, y + (y - x)^2)");
        let result = formal_inverse(&m, DEFAULT_TRUNCATION_CAP).unwrap();
        // the difference of outputs equals the difference of inputs, so the
        // correction term can be read off the image point directly
        assert_eq!(result.inverse, map("(x - (y - x)^2, y - (y - x)^2)"));
        assert_eq!(result.truncation_degree_used, 2);
    }

    #[test]
    fn composed_shear_inverse() {
        let m = map("(x + y^2, y + (x + y^2)^2)");
        let result = formal_inverse(&m, DEFAULT_TRUNCATION_CAP).unwrap();
        assert_eq!(result.inverse, map("(x - (y - x^2)^2, y - x^2)"));
        assert!(result.verified);
    }

    #[test]
    fn constants_are_translated() {
        let m = map("(x + y^3 + 5, y - 2)");
        let result = formal_inverse(&m, DEFAULT_TRUNCATION_CAP).unwrap();
        assert_eq!(result.inverse, map("(x - 5 - (y + 2)^3, y + 2)"));
        let (x, y) = m.apply(&rat(7), &ratio(1, 3));
        let (back_x, back_y) = result.inverse.apply(&x, &y);
        assert_eq!((back_x, back_y), (rat(7), ratio(1, 3)));
    }

    #[test]
    fn inverse_determinant_is_reciprocal() {
        let m = map("(2*x - y + x^3 + x^2*y + (1/3)*x*y^2 + (1/27)*y^3, \
              3*x - 3*y + (12/5)*x^3 + (12/5)*x^2*y + (4/5)*x*y^2 + (4/45)*y^3)");
        let result = formal_inverse(&m, DEFAULT_TRUNCATION_CAP).unwrap();
        let det = jacobian_det(&result.inverse).as_constant().unwrap();
        assert_eq!(det, ratio(-1, 3));
    }

    #[test]
    fn rejects_non_jacobian_maps() {
        assert_eq!(
            formal_inverse(&map("(x^2, y)"), DEFAULT_TRUNCATION_CAP).unwrap_err(),
            InvertError::NotJacobian
        );
        assert_eq!(
            formal_inverse(&map("(x + y, x + y)"), DEFAULT_TRUNCATION_CAP).unwrap_err(),
            InvertError::NotJacobian
        );
    }

    #[test]
    fn cap_limits_search() {
        let err = formal_inverse(&map("(x + y^3, y)"), 2).unwrap_err();
        assert_eq!(err, InvertError::CapExceeded { cap: 2 });
    }
}
