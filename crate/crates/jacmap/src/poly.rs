//! Sparse bivariate polynomials over exact rational coefficients.
//!
//! `Poly2` is the carrier for every symbolic computation in this crate:
//! map components, their nonlinear parts, jacobian determinants and the
//! trace/determinant parts produced by normalization. Coefficients are
//! arbitrary-precision rationals, so equality checks, degree queries and
//! gap-set computations are exact.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar. Always stored reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rational from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// The two variables of the polynomial ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// A power product `x^ex * y^ey`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub ex: u32,
    pub ey: u32,
}

impl Monomial {
    pub fn new(ex: u32, ey: u32) -> Self {
        Monomial { ex, ey }
    }

    pub fn one() -> Self {
        Monomial { ex: 0, ey: 0 }
    }

    /// Total degree `ex + ey`.
    pub fn degree(&self) -> u32 {
        self.ex + self.ey
    }

    pub fn is_constant(&self) -> bool {
        self.ex == 0 && self.ey == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            ex: self.ex + other.ex,
            ey: self.ey + other.ey,
        }
    }
}

/// Graded order, x before y: lower total degree first, and within a degree
/// the higher power of x first. This is the canonical term order used for
/// printing and certificate output.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(other.ex.cmp(&self.ex))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree or order of a polynomial, with sentinels for the zero polynomial:
/// its degree is `NegInfinity` and its order is `PosInfinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DegreeValue {
    NegInfinity,
    Finite(u32),
    PosInfinity,
}

impl DegreeValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, DegreeValue::Finite(_))
    }

    pub fn finite(&self) -> Option<u32> {
        match self {
            DegreeValue::Finite(d) => Some(*d),
            _ => None,
        }
    }
}

impl fmt::Display for DegreeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeValue::NegInfinity => write!(f, "-inf"),
            DegreeValue::Finite(d) => write!(f, "{d}"),
            DegreeValue::PosInfinity => write!(f, "inf"),
        }
    }
}

/// Parity classification of a polynomial's monomials. Each flag is true iff
/// every stored monomial satisfies it, so the zero polynomial has all six
/// flags set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityFlags {
    /// All monomials have even total degree.
    pub even: bool,
    /// All monomials have odd total degree.
    pub odd: bool,
    /// All monomials have an even power of x.
    pub x_even: bool,
    /// All monomials have an odd power of x.
    pub x_odd: bool,
    /// All monomials have an even power of y.
    pub y_even: bool,
    /// All monomials have an odd power of y.
    pub y_odd: bool,
}

/// A 2x2 rational matrix, used for linear changes of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Mat2 {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(rat(1), rat(0), rat(0), rat(1))
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Inverse matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(Mat2::new(
            &self.d / &det,
            -(&self.b / &det),
            -(&self.c / &det),
            &self.a / &det,
        ))
    }
}

/// Sparse bivariate polynomial with exact rational coefficients.
///
/// Invariant: no stored coefficient is zero; the zero polynomial has an
/// empty term map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn one() -> Self {
        Poly2::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        Poly2::monomial(Monomial::one(), c)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly2::monomial(Monomial::new(1, 0), rat(1))
    }

    /// The polynomial `y`.
    pub fn y() -> Self {
        Poly2::monomial(Monomial::new(0, 1), rat(1))
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly2 { terms }
    }

    /// Build from an arbitrary term list; like terms are combined and zero
    /// coefficients dropped.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Poly2::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order (graded, x before y).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(Monomial::one())
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(rat(0)),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, coeff)| (*m, coeff * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly2 {
        let mut acc = Poly2::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `var`.
    pub fn partial(&self, var: Var) -> Poly2 {
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            match var {
                Var::X if m.ex > 0 => {
                    out.add_term(Monomial::new(m.ex - 1, m.ey), c * rat(m.ex as i64));
                }
                Var::Y if m.ey > 0 => {
                    out.add_term(Monomial::new(m.ex, m.ey - 1), c * rat(m.ey as i64));
                }
                _ => {}
            }
        }
        out
    }

    /// Maximum total degree of a monomial, `NegInfinity` for zero.
    pub fn degree(&self) -> DegreeValue {
        self.terms
            .keys()
            .map(|m| m.degree())
            .max()
            .map_or(DegreeValue::NegInfinity, DegreeValue::Finite)
    }

    /// Minimum total degree of a monomial, `PosInfinity` for zero.
    pub fn order(&self) -> DegreeValue {
        self.terms
            .keys()
            .map(|m| m.degree())
            .min()
            .map_or(DegreeValue::PosInfinity, DegreeValue::Finite)
    }

    pub fn degree_order(&self) -> (DegreeValue, DegreeValue) {
        (self.degree(), self.order())
    }

    /// Gap-set: absolute differences of total degrees over all pairs of
    /// distinct monomials. Empty for zero and single-monomial polynomials;
    /// contains 0 exactly when two distinct monomials share a degree.
    pub fn gap_set(&self) -> BTreeSet<u32> {
        let degrees: Vec<u32> = self.terms.keys().map(|m| m.degree()).collect();
        let mut gaps = BTreeSet::new();
        for (i, &di) in degrees.iter().enumerate() {
            for &dj in &degrees[i + 1..] {
                gaps.insert(di.abs_diff(dj));
            }
        }
        gaps
    }

    pub fn parity(&self) -> ParityFlags {
        let mut flags = ParityFlags {
            even: true,
            odd: true,
            x_even: true,
            x_odd: true,
            y_even: true,
            y_odd: true,
        };
        for m in self.terms.keys() {
            let deg_even = m.degree() % 2 == 0;
            flags.even &= deg_even;
            flags.odd &= !deg_even;
            flags.x_even &= m.ex % 2 == 0;
            flags.x_odd &= m.ex % 2 == 1;
            flags.y_even &= m.ey % 2 == 0;
            flags.y_odd &= m.ey % 2 == 1;
        }
        flags
    }

    /// Nonzero and all monomials share one total degree.
    pub fn is_homogeneous(&self) -> bool {
        !self.is_zero() && self.degree() == self.order()
    }

    /// The degree-`k` homogeneous component.
    pub fn homogeneous_part(&self, k: u32) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Drop every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, x: &Rational, y: &Rational) -> Rational {
        let (px, py) = self.point_powers(x, y);
        let mut acc = rat(0);
        for (m, c) in &self.terms {
            acc += c * &px[m.ex as usize] * &py[m.ey as usize];
        }
        acc
    }

    fn point_powers(&self, x: &Rational, y: &Rational) -> (Vec<Rational>, Vec<Rational>) {
        let max_ex = self.terms.keys().map(|m| m.ex).max().unwrap_or(0) as usize;
        let max_ey = self.terms.keys().map(|m| m.ey).max().unwrap_or(0) as usize;
        let mut px = Vec::with_capacity(max_ex + 1);
        let mut py = Vec::with_capacity(max_ey + 1);
        px.push(rat(1));
        py.push(rat(1));
        for i in 1..=max_ex {
            let next = &px[i - 1] * x;
            px.push(next);
        }
        for i in 1..=max_ey {
            let next = &py[i - 1] * y;
            py.push(next);
        }
        (px, py)
    }

    /// Floating-point evaluation, used by the dynamics oracle.
    pub fn evaluate_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                c.to_f64().unwrap_or(f64::NAN) * x.powi(m.ex as i32) * y.powi(m.ey as i32)
            })
            .sum()
    }

    /// Substitute `x := m.a*u + m.b*v`, `y := m.c*u + m.d*v`.
    pub fn compose_linear(&self, m: &Mat2) -> Poly2 {
        let u = Poly2::from_terms([
            (Monomial::new(1, 0), m.a.clone()),
            (Monomial::new(0, 1), m.b.clone()),
        ]);
        let v = Poly2::from_terms([
            (Monomial::new(1, 0), m.c.clone()),
            (Monomial::new(0, 1), m.d.clone()),
        ]);
        self.substitute(&u, &v)
    }

    /// Full composition `self(u, v)` for polynomial arguments.
    pub fn substitute(&self, u: &Poly2, v: &Poly2) -> Poly2 {
        self.substitute_impl(u, v, None)
    }

    /// Composition with every intermediate truncated above `max_degree`.
    /// Sound for computing the low-degree part of the composition: a term of
    /// total degree <= max_degree can only arise from factors of degree
    /// <= max_degree.
    pub fn substitute_truncated(&self, u: &Poly2, v: &Poly2, max_degree: u32) -> Poly2 {
        self.substitute_impl(u, v, Some(max_degree))
    }

    fn substitute_impl(&self, u: &Poly2, v: &Poly2, cap: Option<u32>) -> Poly2 {
        let clip = |p: Poly2| match cap {
            Some(n) => p.truncate(n),
            None => p,
        };
        let max_ex = self.terms.keys().map(|m| m.ex).max().unwrap_or(0) as usize;
        let max_ey = self.terms.keys().map(|m| m.ey).max().unwrap_or(0) as usize;
        let mut pu = Vec::with_capacity(max_ex + 1);
        let mut pv = Vec::with_capacity(max_ey + 1);
        pu.push(Poly2::one());
        pv.push(Poly2::one());
        for i in 1..=max_ex {
            let next = clip(&pu[i - 1] * u);
            pu.push(next);
        }
        for i in 1..=max_ey {
            let next = clip(&pv[i - 1] * v);
            pv.push(next);
        }
        let mut acc = Poly2::zero();
        for (m, c) in &self.terms {
            let prod = clip(&pu[m.ex as usize] * &pv[m.ey as usize]);
            acc = &acc + &prod.scale(c);
        }
        clip(acc)
    }
}

impl Zero for Poly2 {
    fn zero() -> Self {
        Poly2::zero()
    }

    fn is_zero(&self) -> bool {
        Poly2::is_zero(self)
    }
}

impl One for Poly2 {
    fn one() -> Self {
        Poly2::one()
    }
}

impl Add for &Poly2 {
    type Output = Poly2;

    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;

    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;

    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Poly2 {
            type Output = Poly2;
            fn $method(self, rhs: Poly2) -> Poly2 {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly2> for Poly2 {
            type Output = Poly2;
            fn $method(self, rhs: &Poly2) -> Poly2 {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly2> for &Poly2 {
            type Output = Poly2;
            fn $method(self, rhs: Poly2) -> Poly2 {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Poly2 {
    type Output = Poly2;

    fn neg(self) -> Poly2 {
        -&self
    }
}

/// Canonical textual form: terms in graded order (x before y within a
/// degree), integer coefficients bare, fractional coefficients
/// parenthesized, explicit `*` and `^`. Round-trips through the parser.
impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write_term(f, m, &c.abs())?;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, m: &Monomial, mag: &Rational) -> fmt::Result {
    if m.is_constant() {
        return write!(f, "{mag}");
    }
    if !mag.is_one() {
        if mag.is_integer() {
            write!(f, "{mag}*")?;
        } else {
            write!(f, "({mag})*")?;
        }
    }
    if m.ex > 0 {
        write!(f, "x")?;
        if m.ex > 1 {
            write!(f, "^{}", m.ex)?;
        }
        if m.ey > 0 {
            write!(f, "*")?;
        }
    }
    if m.ey > 0 {
        write!(f, "y")?;
        if m.ey > 1 {
            write!(f, "^{}", m.ey)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn p(text: &str) -> Poly2 {
        parse_poly(text).unwrap()
    }

    #[test]
    fn additive_identity() {
        let a = p("x + y");
        assert_eq!(&a + &Poly2::zero(), a);
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(p("x + y") * p("x - y"), p("x^2 - y^2"));
    }

    #[test]
    fn square_of_difference() {
        // hand expansion used by the quadratic family examples
        assert_eq!(p("y - x") * p("y - x"), p("x^2 - 2*x*y + y^2"));
    }

    #[test]
    fn partial_derivatives() {
        assert_eq!(
            p("x^3 + y^3 + x^2*y^2 + y^7").partial(Var::X),
            p("3*x^2 + 2*x*y^2")
        );
        assert_eq!(p("5").partial(Var::X), Poly2::zero());
        assert_eq!(p("y^3").partial(Var::Y), p("3*y^2"));
    }

    #[test]
    fn degree_and_order() {
        // term degrees {3, 3, 4, 7}
        let q = p("x^3 + y^3 + x^2*y^2 + y^7");
        assert_eq!(
            q.degree_order(),
            (DegreeValue::Finite(7), DegreeValue::Finite(3))
        );
        assert_eq!(
            Poly2::zero().degree_order(),
            (DegreeValue::NegInfinity, DegreeValue::PosInfinity)
        );
        assert_eq!(
            p("y^3").degree_order(),
            (DegreeValue::Finite(3), DegreeValue::Finite(3))
        );
    }

    #[test]
    fn degree_value_ordering() {
        assert!(DegreeValue::NegInfinity < DegreeValue::Finite(0));
        assert!(DegreeValue::Finite(7) < DegreeValue::PosInfinity);
        assert!(DegreeValue::Finite(3) < DegreeValue::Finite(4));
    }

    #[test]
    fn gap_sets() {
        let g: Vec<u32> = p("x^3 + y^3 + x^2*y^2 + y^7")
            .gap_set()
            .into_iter()
            .collect();
        assert_eq!(g, vec![0, 1, 3, 4]);
        assert_eq!(
            p("x + y^2").gap_set().into_iter().collect::<Vec<_>>(),
            vec![1]
        );
        assert_eq!(
            p("x^6 + y^2").gap_set().into_iter().collect::<Vec<_>>(),
            vec![4]
        );
        assert!(p("x^5").gap_set().is_empty());
        assert!(Poly2::zero().gap_set().is_empty());
    }

    #[test]
    fn parity_flags() {
        let f = p("x^2*y^2 + y^7").parity();
        assert!(!f.even && !f.odd);
        assert!(f.x_even && !f.x_odd);
        assert!(!f.y_even && !f.y_odd);

        let f = p("y^3").parity();
        assert!(f.odd && !f.even && f.x_even && f.y_odd);

        let f = Poly2::zero().parity();
        assert!(f.even && f.odd && f.x_even && f.x_odd && f.y_even && f.y_odd);
    }

    #[test]
    fn evaluate_points() {
        assert_eq!(p("x^2 - y^2").evaluate(&rat(3), &rat(2)), rat(5));
        let q = p("x^3 + 2*x - 7");
        assert_eq!(q.evaluate(&rat(0), &rat(0)), q.constant_term());
        let sq = p("y - x") * p("y - x");
        assert_eq!(sq.evaluate(&rat(1), &rat(1)), rat(0));
    }

    #[test]
    fn compose_identity_is_identity() {
        let q = p("x^3 + y^3 + x^2*y^2 + y^7");
        assert_eq!(q.compose_linear(&Mat2::identity()), q);
    }

    #[test]
    fn compose_linear_on_linear() {
        let m = Mat2::new(rat(2), rat(3), rat(5), rat(7));
        assert_eq!(Poly2::x().compose_linear(&m), p("2*x + 3*y"));
        assert_eq!(Poly2::y().compose_linear(&m), p("5*x + 7*y"));
    }

    #[test]
    fn compose_linear_binomial_expansion() {
        // (u - v)^5 + (u - v)^6 via the binomial theorem
        let m = Mat2::new(rat(1), rat(-1), rat(0), rat(1));
        let got = p("x^5 + x^6").compose_linear(&m);
        let mut expected = Poly2::zero();
        for n in [5u32, 6] {
            let mut binom = 1i64;
            for k in 0..=n {
                let coeff = if k % 2 == 0 { rat(binom) } else { rat(-binom) };
                expected = &expected + &Poly2::monomial(Monomial::new(n - k, k), coeff);
                binom = binom * (n - k) as i64 / (k + 1) as i64;
            }
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn substitute_truncated_matches_truncated_substitute() {
        let q = p("x^2 + x*y + y^3");
        let u = p("x + y^2");
        let v = p("y + x^2");
        let full = q.substitute(&u, &v);
        for cap in 0..=8 {
            assert_eq!(q.substitute_truncated(&u, &v, cap), full.truncate(cap));
        }
    }

    #[test]
    fn display_canonical_forms() {
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("x - y^3").to_string(), "x - y^3");
        assert_eq!(
            p("2*x - y + x^3 + x^2*y + (1/3)*x*y^2 + (1/27)*y^3").to_string(),
            "2*x - y + x^3 + x^2*y + (1/3)*x*y^2 + (1/27)*y^3"
        );
        assert_eq!(p("-x + 1/2").to_string(), "1/2 - x");
        assert_eq!(
            p("y^7 + x^3 + x^2*y^2 + y^3").to_string(),
            "x^3 + y^3 + x^2*y^2 + y^7"
        );
    }

    #[test]
    fn homogeneous_parts() {
        let q = p("x^3 + y^3 + x^2*y^2 + y^7");
        assert_eq!(q.homogeneous_part(3), p("x^3 + y^3"));
        assert!(q.homogeneous_part(5).is_zero());
        assert!(!q.is_homogeneous());
        assert!(p("x^2 + x*y").is_homogeneous());
    }
}
