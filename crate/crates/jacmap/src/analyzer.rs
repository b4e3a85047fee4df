//! Invertibility analysis for planar polynomial maps.
//!
//! A map `(P, Q)` is a *jacobian map* when its jacobian determinant is a
//! nonzero constant. After splitting off the linear part and composing with
//! its inverse, the map takes the shape `(u + p*(u,v), v + q*(u,v))` whose
//! determinant expands to `1 + T* + D*` with `T*` the trace part and `D*`
//! the determinant part of the nonlinear jacobian contribution. Since the
//! determinant is the constant 1, `T* + D*` vanishes identically, and each
//! sufficient condition checked here forces `T*` and `D*` to vanish
//! separately, which makes the associated vector field globally
//! asymptotically stable and the map globally invertible.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::poly::{rat, ratio, DegreeValue, Mat2, Monomial, Poly2, Rational, Var};

/// A polynomial map of the plane, `(x, y) -> (P(x,y), Q(x,y))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    pub first: Poly2,
    pub second: Poly2,
}

impl PolyMap {
    pub fn new(first: Poly2, second: Poly2) -> Self {
        PolyMap { first, second }
    }

    pub fn identity() -> Self {
        PolyMap::new(Poly2::x(), Poly2::y())
    }

    pub fn is_identity(&self) -> bool {
        self.first == Poly2::x() && self.second == Poly2::y()
    }

    /// Exact image of a rational point.
    pub fn apply(&self, x: &Rational, y: &Rational) -> (Rational, Rational) {
        (self.first.evaluate(x, y), self.second.evaluate(x, y))
    }

    /// Composition `self . inner` (apply `inner` first).
    pub fn compose(&self, inner: &PolyMap) -> PolyMap {
        PolyMap::new(
            self.first.substitute(&inner.first, &inner.second),
            self.second.substitute(&inner.first, &inner.second),
        )
    }

    /// Larger of the component degrees.
    pub fn degree(&self) -> DegreeValue {
        self.first.degree().max(self.second.degree())
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// Outcome of the jacobian-determinant test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianReport {
    pub det_poly: Poly2,
    pub is_jacobian: bool,
    /// The constant value of the determinant, present iff `is_jacobian`.
    pub det_value: Option<Rational>,
}

/// `P_x * Q_y - P_y * Q_x`, exactly.
pub fn jacobian_det(m: &PolyMap) -> Poly2 {
    let px = m.first.partial(Var::X);
    let py = m.first.partial(Var::Y);
    let qx = m.second.partial(Var::X);
    let qy = m.second.partial(Var::Y);
    &(&px * &qy) - &(&py * &qx)
}

pub fn classify_jacobian(m: &PolyMap) -> JacobianReport {
    let det_poly = jacobian_det(m);
    let det_value = det_poly.as_constant().filter(|c| !c.is_zero());
    JacobianReport {
        is_jacobian: det_value.is_some(),
        det_value,
        det_poly,
    }
}

/// Exact decomposition `P = const + a*x + b*y + p` with `p` holding only
/// terms of total degree >= 2, and likewise for the second component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSplit {
    pub constant_first: Rational,
    pub constant_second: Rational,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub p: Poly2,
    pub q: Poly2,
}

impl LinearSplit {
    pub fn linear_matrix(&self) -> Mat2 {
        Mat2::new(
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
        )
    }

    pub fn linear_det(&self) -> Rational {
        self.linear_matrix().det()
    }

    pub fn has_constant_term(&self) -> (bool, bool) {
        (
            !self.constant_first.is_zero(),
            !self.constant_second.is_zero(),
        )
    }

    /// Rebuild the original map exactly.
    pub fn reconstruct(&self) -> PolyMap {
        let mut m = self.translated();
        m.first = &m.first + &Poly2::constant(self.constant_first.clone());
        m.second = &m.second + &Poly2::constant(self.constant_second.clone());
        m
    }

    /// The map with its constant terms removed. Translation changes neither
    /// the jacobian matrix nor injectivity.
    pub fn translated(&self) -> PolyMap {
        let linear_first = Poly2::from_terms([
            (Monomial::new(1, 0), self.a.clone()),
            (Monomial::new(0, 1), self.b.clone()),
        ]);
        let linear_second = Poly2::from_terms([
            (Monomial::new(1, 0), self.c.clone()),
            (Monomial::new(0, 1), self.d.clone()),
        ]);
        PolyMap::new(&linear_first + &self.p, &linear_second + &self.q)
    }
}

pub fn split_linear(m: &PolyMap) -> LinearSplit {
    let nonlinear = |poly: &Poly2| {
        Poly2::from_terms(
            poly.terms()
                .filter(|(mono, _)| mono.degree() >= 2)
                .map(|(mono, c)| (*mono, c.clone())),
        )
    };
    LinearSplit {
        constant_first: m.first.constant_term(),
        constant_second: m.second.constant_term(),
        a: m.first.coefficient(Monomial::new(1, 0)),
        b: m.first.coefficient(Monomial::new(0, 1)),
        c: m.second.coefficient(Monomial::new(1, 0)),
        d: m.second.coefficient(Monomial::new(0, 1)),
        p: nonlinear(&m.first),
        q: nonlinear(&m.second),
    }
}

/// The map composed with the inverse of its linear part, so that its own
/// linear part is the identity: `(u + p*(u,v), v + q*(u,v))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedMap {
    pub pstar: Poly2,
    pub qstar: Poly2,
    /// Trace part `d(pstar)/du + d(qstar)/dv`.
    pub tstar: Poly2,
    /// Determinant part `p*_u q*_v - p*_v q*_u`.
    pub dstar: Poly2,
    pub det_linear: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizeError {
    /// The linear part has zero determinant; such a map is never jacobian.
    SingularLinearPart,
    /// Constant terms must be translated away before normalizing.
    ConstantTermPresent,
    /// A nonlinear part contains terms of degree <= 1.
    OrderTooLow,
}

impl fmt::Display for NormalizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizeError::SingularLinearPart => write!(f, "linear part is singular"),
            NormalizeError::ConstantTermPresent => {
                write!(f, "map has constant terms; translate them away first")
            }
            NormalizeError::OrderTooLow => {
                write!(f, "nonlinear part contains terms of degree <= 1")
            }
        }
    }
}

impl std::error::Error for NormalizeError {}

impl NormalizedMap {
    /// Build directly from nonlinear parts of order > 1 (the linear part is
    /// the identity by definition).
    pub fn from_nonlinear_parts(pstar: Poly2, qstar: Poly2) -> Result<Self, NormalizeError> {
        for part in [&pstar, &qstar] {
            if part.order() <= DegreeValue::Finite(1) {
                return Err(NormalizeError::OrderTooLow);
            }
        }
        Ok(Self::from_parts_unchecked(pstar, qstar, rat(1)))
    }

    fn from_parts_unchecked(pstar: Poly2, qstar: Poly2, det_linear: Rational) -> Self {
        let pu = pstar.partial(Var::X);
        let pv = pstar.partial(Var::Y);
        let qu = qstar.partial(Var::X);
        let qv = qstar.partial(Var::Y);
        let tstar = &pu + &qv;
        let dstar = &(&pu * &qv) - &(&pv * &qu);
        NormalizedMap {
            pstar,
            qstar,
            tstar,
            dstar,
            det_linear,
        }
    }

    /// The normalized map as a `PolyMap`, `(u + p*, v + q*)`.
    pub fn as_map(&self) -> PolyMap {
        PolyMap::new(&Poly2::x() + &self.pstar, &Poly2::y() + &self.qstar)
    }
}

pub fn normalize(m: &PolyMap) -> Result<NormalizedMap, NormalizeError> {
    let split = split_linear(m);
    if split.has_constant_term() != (false, false) {
        return Err(NormalizeError::ConstantTermPresent);
    }
    normalize_split(&split)
}

/// Normalize after translating any constant terms away; translation changes
/// neither the jacobian matrix nor injectivity, so the mechanism facts of
/// the result apply to the original map.
pub fn normalize_translated(m: &PolyMap) -> Result<NormalizedMap, NormalizeError> {
    normalize_split(&split_linear(m))
}

fn normalize_split(split: &LinearSplit) -> Result<NormalizedMap, NormalizeError> {
    let mat = split.linear_matrix();
    let inv = mat.inverse().ok_or(NormalizeError::SingularLinearPart)?;
    let translated = split.translated();
    // composing with the inverse of the linear part makes the linear part
    // of the result the identity, so subtracting u and v leaves parts of
    // order > 1
    let pstar = &translated.first.compose_linear(&inv) - &Poly2::x();
    let qstar = &translated.second.compose_linear(&inv) - &Poly2::y();
    debug_assert!(pstar.order() > DegreeValue::Finite(1));
    debug_assert!(qstar.order() > DegreeValue::Finite(1));
    Ok(NormalizedMap::from_parts_unchecked(pstar, qstar, mat.det()))
}

/// Gap condition on the ordered pair `(p, q)`: no monomial `M` of `p` has
/// `d(M) - 1` in the gap-set of `q`. Vacuously true when `p` is zero.
pub fn gap_condition(p: &Poly2, q: &Poly2) -> bool {
    let gaps = q.gap_set();
    p.terms()
        .all(|(mono, _)| match mono.degree().checked_sub(1) {
            Some(g) => !gaps.contains(&g),
            None => true,
        })
}

/// Structural conditions on the nonlinear parts, each sufficient for global
/// invertibility of a jacobian map, plus the exact mechanism facts they
/// imply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionFlags {
    /// `max{d(p), d(q)} < o(p) + o(q) - 1`.
    pub degree_bound: bool,
    /// Both nonlinear parts are even polynomials.
    pub both_even: bool,
    /// `p` odd, `q` even, and `(p, q)` satisfies the gap condition.
    pub odd_even_gap: bool,
    /// `(p, q)` satisfies the gap condition in both orders.
    pub symmetric_gap: bool,
    /// Both parts homogeneous of one common degree > 1; implies the degree
    /// bound.
    pub homogeneous_same_degree: bool,
    /// `p` x-even and `q` x-odd. Only computed when the map already has the
    /// shape `(x + p, y + q)`: a linear change of variables does not
    /// preserve per-variable parity.
    pub x_parity_split: Option<bool>,
    /// `p` y-odd and `q` y-even, same applicability rule.
    pub y_parity_split: Option<bool>,
    /// The trace part of the normalized map vanishes identically.
    pub trace_part_zero: bool,
    /// The determinant part of the normalized map vanishes identically.
    pub det_part_zero: bool,
}

impl ConditionFlags {
    /// Any structural condition (not the mechanism facts) holds.
    pub fn any_condition(&self) -> bool {
        self.degree_bound
            || self.both_even
            || self.odd_even_gap
            || self.symmetric_gap
            || self.homogeneous_same_degree
            || self.x_parity_split == Some(true)
            || self.y_parity_split == Some(true)
    }
}

// max{d(p), d(q)} < o(p) + o(q) - 1, with the zero polynomial contributing
// degree -inf and order +inf.
fn degree_bound_holds(p: &Poly2, q: &Poly2) -> bool {
    let max_degree = match p.degree().max(q.degree()).finite() {
        Some(d) => d as i64,
        None => return true,
    };
    match (p.order().finite(), q.order().finite()) {
        (Some(op), Some(oq)) => max_degree < op as i64 + oq as i64 - 1,
        _ => true,
    }
}

fn homogeneous_same_degree(p: &Poly2, q: &Poly2) -> bool {
    p.is_homogeneous()
        && q.is_homogeneous()
        && p.degree() == q.degree()
        && p.degree() > DegreeValue::Finite(1)
}

pub fn check_conditions(m: &PolyMap) -> ConditionFlags {
    condition_flags(&split_linear(m))
}

fn condition_flags(split: &LinearSplit) -> ConditionFlags {
    let p = &split.p;
    let q = &split.q;
    let p_parity = p.parity();
    let q_parity = q.parity();
    let gap_pq = gap_condition(p, q);
    let gap_qp = gap_condition(q, p);

    let identity_linear = split.a.is_one()
        && split.b.is_zero()
        && split.c.is_zero()
        && split.d.is_one()
        && split.has_constant_term() == (false, false);
    let (x_parity_split, y_parity_split) = if identity_linear {
        (
            Some(p_parity.x_even && q_parity.x_odd),
            Some(p_parity.y_odd && q_parity.y_even),
        )
    } else {
        (None, None)
    };

    let (trace_part_zero, det_part_zero) = match normalize_split(split) {
        Ok(n) => (n.tstar.is_zero(), n.dstar.is_zero()),
        Err(_) => (false, false),
    };

    ConditionFlags {
        degree_bound: degree_bound_holds(p, q),
        both_even: p_parity.even && q_parity.even,
        odd_even_gap: p_parity.odd && q_parity.even && gap_pq,
        symmetric_gap: gap_pq && gap_qp,
        homogeneous_same_degree: homogeneous_same_degree(p, q),
        x_parity_split,
        y_parity_split,
        trace_part_zero,
        det_part_zero,
    }
}

/// Exact and sampled evidence from a normalized map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MechanismReport {
    /// `T*` is identically zero (exact).
    pub trace_part_zero: bool,
    /// `D*` is identically zero (exact).
    pub det_part_zero: bool,
    /// `T* >= 0` at every point of a fixed 21x21 rational grid on
    /// `[-5, 5]^2`. Heuristic evidence only; never drives a verdict.
    pub trace_sample_ok: bool,
}

pub fn mechanism_check(n: &NormalizedMap) -> MechanismReport {
    let mut trace_sample_ok = true;
    'grid: for i in 0..21i64 {
        for j in 0..21i64 {
            let x = ratio(i - 10, 2);
            let y = ratio(j - 10, 2);
            if n.tstar.evaluate(&x, &y).is_negative() {
                trace_sample_ok = false;
                break 'grid;
            }
        }
    }
    MechanismReport {
        trace_part_zero: n.tstar.is_zero(),
        det_part_zero: n.dstar.is_zero(),
        trace_sample_ok,
    }
}

/// The sufficient conditions a certificate can cite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    /// The map is linear with nonsingular matrix.
    LinearNonsingular,
    DegreeBound,
    BothEven,
    OddEvenGap,
    SymmetricGap,
    HomogeneousSameDegree,
    XParitySplit,
    YParitySplit,
    /// `T*` and `D*` both vanish identically after normalization.
    TraceDetVanish,
}

impl Condition {
    pub fn label(&self) -> &'static str {
        match self {
            Condition::LinearNonsingular => "linear-nonsingular",
            Condition::DegreeBound => "degree-bound",
            Condition::BothEven => "both-even",
            Condition::OddEvenGap => "odd-even-gap",
            Condition::SymmetricGap => "symmetric-gap",
            Condition::HomogeneousSameDegree => "homogeneous-same-degree",
            Condition::XParitySplit => "x-parity-split",
            Condition::YParitySplit => "y-parity-split",
            Condition::TraceDetVanish => "trace-det-vanish",
        }
    }

    pub fn from_label(label: &str) -> Option<Condition> {
        use Condition::*;
        [
            LinearNonsingular,
            DegreeBound,
            BothEven,
            OddEvenGap,
            SymmetricGap,
            HomogeneousSameDegree,
            XParitySplit,
            YParitySplit,
            TraceDetVanish,
        ]
        .into_iter()
        .find(|cond| cond.label() == label)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Globally invertible, with the conditions that certify it.
    Invertible {
        via: Vec<Condition>,
    },
    /// Jacobian map, but none of the sufficient conditions applies. The
    /// conditions are sufficient, not necessary, so this is not a
    /// non-invertibility claim.
    JacobianButUndecided,
    NotJacobian,
    /// Reserved: a nonlinear part with a term of degree <= 1 cannot arise
    /// from `split_linear`.
    MalformedOrder,
}

impl Verdict {
    pub fn is_invertible(&self) -> bool {
        matches!(self, Verdict::Invertible { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Invertible { .. } => "invertible",
            Verdict::JacobianButUndecided => "jacobian-but-undecided",
            Verdict::NotJacobian => "not-jacobian",
            Verdict::MalformedOrder => "malformed-order",
        }
    }
}

/// Machine-checkable record of an invertibility analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub report: JacobianReport,
    /// Split of the analyzed map; records any constant terms that were
    /// translated away before normalization.
    pub split: LinearSplit,
    pub flags: ConditionFlags,
    pub verdict: Verdict,
}

/// Analyze a map end to end. Constant terms are translated away first
/// (recorded in the split); translation changes neither the jacobian
/// matrix nor injectivity.
pub fn certify(m: &PolyMap) -> Certificate {
    let report = classify_jacobian(m);
    let split = split_linear(m);
    let flags = condition_flags(&split);

    let verdict = if !report.is_jacobian {
        Verdict::NotJacobian
    } else if split.p.is_zero() && split.q.is_zero() {
        Verdict::Invertible {
            via: vec![Condition::LinearNonsingular],
        }
    } else {
        let mut via = Vec::new();
        if flags.degree_bound {
            via.push(Condition::DegreeBound);
        }
        if flags.both_even {
            via.push(Condition::BothEven);
        }
        if flags.odd_even_gap {
            via.push(Condition::OddEvenGap);
        }
        if flags.symmetric_gap {
            via.push(Condition::SymmetricGap);
        }
        if flags.homogeneous_same_degree {
            via.push(Condition::HomogeneousSameDegree);
        }
        if flags.x_parity_split == Some(true) {
            via.push(Condition::XParitySplit);
        }
        if flags.y_parity_split == Some(true) {
            via.push(Condition::YParitySplit);
        }
        if flags.trace_part_zero && flags.det_part_zero {
            via.push(Condition::TraceDetVanish);
        }
        if via.is_empty() {
            Verdict::JacobianButUndecided
        } else {
            Verdict::Invertible { via }
        }
    };

    Certificate {
        report,
        split,
        flags,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_map, parse_poly};

    fn map(text: &str) -> PolyMap {
        parse_map(text).unwrap()
    }

    fn poly(text: &str) -> Poly2 {
        parse_poly(text).unwrap()
    }

    const CUBIC_MAP: &str = "(2*x - y + x^3 + x^2*y + (1/3)*x*y^2 + (1/27)*y^3, \
                             3*x - 3*y + (12/5)*x^3 + (12/5)*x^2*y + (4/5)*x*y^2 + (4/45)*y^3)";

    #[test]
    fn jacobian_det_examples() {
        assert_eq!(jacobian_det(&map("(x + y^3, y)")), Poly2::one());
        assert_eq!(jacobian_det(&map("(x^2, y)")), poly("2*x"));
        assert_eq!(jacobian_det(&map(CUBIC_MAP)), poly("0 - 3"));
    }

    #[test]
    fn classify_examples() {
        let report = classify_jacobian(&map("(x + (y - x)^2, y + (y - x)^2)"));
        assert!(report.is_jacobian);
        assert_eq!(report.det_value, Some(rat(1)));

        let report = classify_jacobian(&map("(x^2, y)"));
        assert!(!report.is_jacobian);
        assert_eq!(report.det_value, None);

        let report = classify_jacobian(&map("(x + y + x^5 + x^6, y + x^5 + x^6)"));
        assert!(report.is_jacobian);
        assert_eq!(report.det_value, Some(rat(1)));
    }

    #[test]
    fn split_examples() {
        let s = split_linear(&map("(x + y^3, y)"));
        assert_eq!(
            (s.a.clone(), s.b.clone(), s.c.clone(), s.d.clone()),
            (rat(1), rat(0), rat(0), rat(1))
        );
        assert_eq!(s.p, poly("y^3"));
        assert!(s.q.is_zero());
        assert_eq!(s.has_constant_term(), (false, false));

        let s = split_linear(&map(CUBIC_MAP));
        assert_eq!(
            (s.a.clone(), s.b.clone(), s.c.clone(), s.d.clone()),
            (rat(2), rat(-1), rat(3), rat(-3))
        );
        assert!(s.p.is_homogeneous());
        assert!(s.q.is_homogeneous());
        assert_eq!(s.linear_det(), rat(-3));

        let s = split_linear(&PolyMap::identity());
        assert!(s.p.is_zero() && s.q.is_zero());
        assert_eq!(s.reconstruct(), PolyMap::identity());
    }

    #[test]
    fn split_records_constants() {
        let s = split_linear(&map("(x + y^3 + 5, y - 1/2)"));
        assert_eq!(s.constant_first, rat(5));
        assert_eq!(s.constant_second, ratio(-1, 2));
        assert_eq!(s.has_constant_term(), (true, true));
        assert_eq!(s.translated(), map("(x + y^3, y)"));
        assert_eq!(s.reconstruct(), map("(x + y^3 + 5, y - 1/2)"));
    }

    #[test]
    fn normalize_identity_linear_part() {
        let n = normalize(&map("(x + y^3, y)")).unwrap();
        assert_eq!(n.pstar, poly("y^3"));
        assert!(n.qstar.is_zero());
        assert!(n.tstar.is_zero());
        assert!(n.dstar.is_zero());
        assert_eq!(n.det_linear, rat(1));
    }

    #[test]
    fn normalize_shear_linear_part() {
        // linear part [[1,1],[0,1]], inverse [[1,-1],[0,1]]
        let n = normalize(&map("(x + y + x^5 + x^6, y + x^5 + x^6)")).unwrap();
        let expected = poly("(x - y)^5 + (x - y)^6");
        assert_eq!(n.pstar, expected);
        assert_eq!(n.qstar, expected);
        assert!(n.tstar.is_zero());
        assert!(n.dstar.is_zero());
    }

    #[test]
    fn normalize_quadratic_family_instance() {
        let n = normalize(&map("(x + (y - x)^2, y + (y - x)^2)")).unwrap();
        assert_eq!(n.pstar, poly("(y - x)^2"));
        assert_eq!(n.qstar, poly("(y - x)^2"));
        assert!(n.tstar.is_zero());
        assert!(n.dstar.is_zero());
    }

    #[test]
    fn normalize_errors() {
        assert_eq!(
            normalize(&map("(x + y, x + y + x^2)")).unwrap_err(),
            NormalizeError::SingularLinearPart
        );
        assert_eq!(
            normalize(&map("(x + 1, y)")).unwrap_err(),
            NormalizeError::ConstantTermPresent
        );
        assert_eq!(
            NormalizedMap::from_nonlinear_parts(poly("x"), Poly2::zero()).unwrap_err(),
            NormalizeError::OrderTooLow
        );
    }

    #[test]
    fn nonjacobian_map_keeps_nonzero_trace_parts() {
        // det J = 1 - 4xy is not constant; T* + D* = det - 1 stays nonzero.
        // Here p* = y^2 has no u-dependence and q* = x^2 no v-dependence, so
        // the defect sits entirely in D*.
        let n = normalize(&map("(x + y^2, y + x^2)")).unwrap();
        assert!(n.tstar.is_zero());
        assert!(!n.dstar.is_zero());
        let sum = &n.tstar + &n.dstar;
        assert_eq!(sum, poly("0 - 4*x*y"));
    }

    #[test]
    fn gap_condition_asymmetry() {
        let p = poly("x + y^2");
        let q = poly("x^6 + y^2");
        assert!(gap_condition(&p, &q));
        assert!(!gap_condition(&q, &p));
        assert!(gap_condition(&poly("y^3"), &Poly2::zero()));
    }

    #[test]
    fn conditions_for_triangular_cubic() {
        // p = y^3, q = 0: degree bound is 3 < 3 + inf - 1
        let flags = check_conditions(&map("(x + y^3, y)"));
        assert!(flags.degree_bound);
        assert!(!flags.both_even);
        assert!(flags.odd_even_gap);
        assert!(flags.symmetric_gap);
        assert!(!flags.homogeneous_same_degree);
        assert_eq!(flags.x_parity_split, Some(true));
        assert_eq!(flags.y_parity_split, Some(true));
        assert!(flags.trace_part_zero && flags.det_part_zero);
    }

    #[test]
    fn conditions_for_quadratic_family() {
        // d = o = 2 for both parts: 2 < 2 + 2 - 1
        let flags = check_conditions(&map("(x + (y - x)^2, y + (y - x)^2)"));
        assert!(flags.degree_bound);
        assert!(flags.both_even);
        assert!(flags.homogeneous_same_degree);
        assert!(flags.trace_part_zero && flags.det_part_zero);
    }

    #[test]
    fn conditions_for_linear_plus_cubic() {
        let flags = check_conditions(&map(CUBIC_MAP));
        assert!(flags.homogeneous_same_degree);
        assert!(flags.degree_bound);
        // not the identity linear part, so per-variable parity not computed
        assert_eq!(flags.x_parity_split, None);
        assert_eq!(flags.y_parity_split, None);
        assert!(flags.trace_part_zero && flags.det_part_zero);
    }

    #[test]
    fn homogeneous_implies_degree_bound() {
        let flags = check_conditions(&map(CUBIC_MAP));
        assert!(flags.homogeneous_same_degree && flags.degree_bound);
    }

    #[test]
    fn mixed_power_map_fails_even_condition() {
        // x^5 + x^6 mixes odd and even total degrees
        let flags = check_conditions(&map("(x + y + x^5 + x^6, y + x^5 + x^6)"));
        assert!(!flags.both_even);
        assert!(flags.degree_bound); // 6 < 5 + 5 - 1
        assert!(flags.trace_part_zero && flags.det_part_zero);
    }

    #[test]
    fn mechanism_report_examples() {
        let n = normalize(&map("(x + y^3, y)")).unwrap();
        let rep = mechanism_check(&n);
        assert!(rep.trace_part_zero && rep.det_part_zero && rep.trace_sample_ok);

        // T* = 2u changes sign
        let n = NormalizedMap::from_nonlinear_parts(poly("x^2"), Poly2::zero()).unwrap();
        let rep = mechanism_check(&n);
        assert!(!rep.trace_part_zero);
        assert!(rep.det_part_zero);
        assert!(!rep.trace_sample_ok);
    }

    #[test]
    fn certify_verdicts() {
        let cert = certify(&map("(x + y^3, y)"));
        match &cert.verdict {
            Verdict::Invertible { via } => {
                for needed in [
                    Condition::DegreeBound,
                    Condition::OddEvenGap,
                    Condition::SymmetricGap,
                ] {
                    assert!(via.contains(&needed), "missing {needed}");
                }
            }
            other => panic!("unexpected verdict {other:?}"),
        }

        assert_eq!(certify(&map("(x^2, y)")).verdict, Verdict::NotJacobian);

        let cert = certify(&PolyMap::identity());
        assert_eq!(
            cert.verdict,
            Verdict::Invertible {
                via: vec![Condition::LinearNonsingular]
            }
        );

        // elementary and invertible, but outside every sufficient condition
        let cert = certify(&map("(x + y^2, y + (x + y^2)^2)"));
        assert_eq!(cert.verdict, Verdict::JacobianButUndecided);
        assert!(!cert.flags.trace_part_zero);
    }

    #[test]
    fn certify_translates_constants() {
        let cert = certify(&map("(x + y^3 + 5, y - 2)"));
        assert!(cert.verdict.is_invertible());
        assert_eq!(cert.split.constant_first, rat(5));
        assert_eq!(cert.split.constant_second, rat(-2));
    }
}
