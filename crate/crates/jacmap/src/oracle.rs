//! Ground-truth generators and brute-force checks.
//!
//! Two constructions produce maps whose invertibility is known in advance:
//! a quadratic family built from a nonsingular linear map plus the square
//! of a line, and compositions of elementary steps (univariate shears and
//! nonsingular linear maps). Alongside them, an exact grid collision scan
//! refutes injectivity, and a small catalog of worked examples pins down
//! expected analysis results end to end.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::Rng;

use crate::analyzer::{certify, Condition, PolyMap, Verdict};
use crate::poly::{rat, DegreeValue, Monomial, Poly2, Rational, Var};

/// Exhaustive image comparison over an `n x n` exact rational grid on
/// `[lo, hi]^2`. A collision refutes injectivity outright; an empty report
/// is evidence only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionReport {
    pub points_tested: usize,
    /// Pairs of distinct grid points with equal images.
    pub collisions: Vec<((Rational, Rational), (Rational, Rational))>,
}

impl CollisionReport {
    pub fn is_injective_on_grid(&self) -> bool {
        self.collisions.is_empty()
    }
}

pub fn grid_injectivity(m: &PolyMap, lo: &Rational, hi: &Rational, n: usize) -> CollisionReport {
    let coord = |i: usize| -> Rational {
        if n <= 1 {
            (lo + hi) * crate::poly::ratio(1, 2)
        } else {
            lo + (hi - lo) * crate::poly::ratio(i as i64, n as i64 - 1)
        }
    };
    let mut seen: BTreeMap<(Rational, Rational), (Rational, Rational)> = BTreeMap::new();
    let mut collisions = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let x = coord(i);
            let y = coord(j);
            let image = m.apply(&x, &y);
            match seen.entry(image) {
                Entry::Occupied(first) => collisions.push((first.get().clone(), (x, y))),
                Entry::Vacant(slot) => {
                    slot.insert((x, y));
                }
            }
        }
    }
    CollisionReport {
        points_tested: n * n,
        collisions,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadraticFamilyError {
    /// A parameter constraint of the family was violated.
    ParameterViolation { message: String },
}

impl fmt::Display for QuadraticFamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadraticFamilyError::ParameterViolation { message } => {
                write!(f, "parameter violation: {message}")
            }
        }
    }
}

impl std::error::Error for QuadraticFamilyError {}

/// The quadratic family
/// `(a x + b y + mu (alpha a + beta b) w^2, c x + d y + mu (alpha c + beta d) w^2)`
/// with `w = alpha y - beta x`. Its jacobian determinant is exactly
/// `a d - b c` for every parameter choice, so each instance is a jacobian
/// map with nonlinear parts of one common degree.
pub fn gen_quadratic_family(
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
    mu: Rational,
    alpha: Rational,
    beta: Rational,
) -> Result<PolyMap, QuadraticFamilyError> {
    let violation = |message: &str| QuadraticFamilyError::ParameterViolation {
        message: message.to_string(),
    };
    if mu.is_zero() {
        return Err(violation("mu must be nonzero"));
    }
    if alpha.is_zero() && beta.is_zero() {
        return Err(violation("(alpha, beta) must be nonzero"));
    }
    let det = &a * &d - &b * &c;
    if det.is_zero() {
        return Err(violation(
            "linear part must be nonsingular (a d - b c != 0)",
        ));
    }

    let w = &Poly2::y().scale(&alpha) - &Poly2::x().scale(&beta);
    let w2 = &w * &w;
    let coeff_first = &mu * (&alpha * &a + &beta * &b);
    let coeff_second = &mu * (&alpha * &c + &beta * &d);
    let linear_first = &Poly2::x().scale(&a) + &Poly2::y().scale(&b);
    let linear_second = &Poly2::x().scale(&c) + &Poly2::y().scale(&d);
    Ok(PolyMap::new(
        &linear_first + &w2.scale(&coeff_first),
        &linear_second + &w2.scale(&coeff_second),
    ))
}

/// One composition step of an elementary map.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum ElementaryStep {
    /// `(x, y) -> (x + f(y), y)`; `f` must not involve `x`.
    AddToX(Poly2),
    /// `(x, y) -> (x, y + g(x))`; `g` must not involve `y`.
    AddToY(Poly2),
    /// `(x, y) -> (a x + b y, c x + d y)` with `a d - b c != 0`.
    Linear(Rational, Rational, Rational, Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementaryError {
    /// A `Linear` step has zero determinant.
    SingularLinear,
    /// A shear polynomial involves the variable it shears.
    ShearNotUnivariate { allowed: Var },
}

impl fmt::Display for ElementaryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryError::SingularLinear => write!(f, "linear step is singular"),
            ElementaryError::ShearNotUnivariate { allowed } => {
                write!(f, "shear polynomial may only involve {allowed:?}")
            }
        }
    }
}

impl std::error::Error for ElementaryError {}

impl fmt::Display for ElementaryStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryStep::AddToX(p) => write!(f, "add-to-x({p})"),
            ElementaryStep::AddToY(p) => write!(f, "add-to-y({p})"),
            ElementaryStep::Linear(a, b, c, d) => write!(f, "linear({a}, {b}, {c}, {d})"),
        }
    }
}

impl ElementaryStep {
    pub fn as_map(&self) -> Result<PolyMap, ElementaryError> {
        match self {
            ElementaryStep::AddToX(f) => {
                if f.terms().any(|(mono, _)| mono.ex != 0) {
                    return Err(ElementaryError::ShearNotUnivariate { allowed: Var::Y });
                }
                Ok(PolyMap::new(&Poly2::x() + f, Poly2::y()))
            }
            ElementaryStep::AddToY(g) => {
                if g.terms().any(|(mono, _)| mono.ey != 0) {
                    return Err(ElementaryError::ShearNotUnivariate { allowed: Var::X });
                }
                Ok(PolyMap::new(Poly2::x(), &Poly2::y() + g))
            }
            ElementaryStep::Linear(a, b, c, d) => {
                if (a * d - b * c).is_zero() {
                    return Err(ElementaryError::SingularLinear);
                }
                Ok(PolyMap::new(
                    &Poly2::x().scale(a) + &Poly2::y().scale(b),
                    &Poly2::x().scale(c) + &Poly2::y().scale(d),
                ))
            }
        }
    }
}

/// Compose elementary steps, earliest first. Every output is a jacobian
/// map by construction: shears have determinant 1 and linear steps a
/// nonzero constant, and determinants multiply under composition.
pub fn gen_elementary(steps: &[ElementaryStep]) -> Result<PolyMap, ElementaryError> {
    let mut composed = PolyMap::identity();
    for step in steps {
        composed = step.as_map()?.compose(&composed);
    }
    Ok(composed)
}

/// Bounds for the random elementary-map sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusOptions {
    pub max_steps: usize,
    pub max_shear_degree: u32,
    /// Integer coefficients are drawn from `[-max_height, max_height]`.
    pub max_height: i64,
    /// Resample when the composed map exceeds this total degree, keeping
    /// exact inversion and full-composition checks fast.
    pub max_composed_degree: u32,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            max_steps: 4,
            max_shear_degree: 6,
            max_height: 8,
            max_composed_degree: 12,
        }
    }
}

/// Draw a random composition of elementary steps within the given bounds.
/// Returns the composed map together with the steps that built it.
pub fn sample_corpus_map<R: Rng + ?Sized>(
    rng: &mut R,
    opts: &CorpusOptions,
) -> (PolyMap, Vec<ElementaryStep>) {
    loop {
        let count = rng.random_range(1..=opts.max_steps.max(1));
        let steps: Vec<ElementaryStep> = (0..count).map(|_| random_step(rng, opts)).collect();
        let composed = gen_elementary(&steps).expect("sampled steps are valid by construction");
        if composed.degree() <= DegreeValue::Finite(opts.max_composed_degree) {
            return (composed, steps);
        }
    }
}

fn random_step<R: Rng + ?Sized>(rng: &mut R, opts: &CorpusOptions) -> ElementaryStep {
    match rng.random_range(0..3u8) {
        0 => ElementaryStep::AddToX(random_univariate(rng, Var::Y, opts)),
        1 => ElementaryStep::AddToY(random_univariate(rng, Var::X, opts)),
        _ => loop {
            let h = opts.max_height.max(1);
            let a = rat(rng.random_range(-h..=h));
            let b = rat(rng.random_range(-h..=h));
            let c = rat(rng.random_range(-h..=h));
            let d = rat(rng.random_range(-h..=h));
            if !(&a * &d - &b * &c).is_zero() {
                break ElementaryStep::Linear(a, b, c, d);
            }
        },
    }
}

fn random_univariate<R: Rng + ?Sized>(rng: &mut R, var: Var, opts: &CorpusOptions) -> Poly2 {
    let h = opts.max_height.max(1);
    let degree = rng.random_range(1..=opts.max_shear_degree.max(1));
    let terms = rng.random_range(1..=3usize);
    let mut poly = Poly2::zero();
    for _ in 0..terms {
        let e = rng.random_range(0..=degree);
        let mut coeff = 0;
        while coeff == 0 {
            coeff = rng.random_range(-h..=h);
        }
        let mono = match var {
            Var::X => Monomial::new(e, 0),
            Var::Y => Monomial::new(0, e),
        };
        poly = &poly + &Poly2::monomial(mono, rat(coeff));
    }
    if poly.is_zero() {
        // cancellation between drawn terms: fall back to the plain variable
        poly = match var {
            Var::X => Poly2::x(),
            Var::Y => Poly2::y(),
        };
    }
    poly
}

/// A worked example with its expected analysis results.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub map: PolyMap,
    pub expect_jacobian: bool,
    pub expect_det: Option<Rational>,
    pub expect_invertible: bool,
    /// Conditions that must appear in an invertibility verdict.
    pub expect_conditions: Vec<Condition>,
    /// Conditions that must not appear.
    pub expect_absent_conditions: Vec<Condition>,
    /// Expected `(T* == 0, D* == 0)` when the map normalizes.
    pub expect_trace_det_zero: Option<(bool, bool)>,
    /// Expected gap-condition results on the raw components, forward and
    /// reversed.
    pub expect_component_gap: Option<(bool, bool)>,
    pub note: Option<&'static str>,
}

impl CatalogEntry {
    /// Run the analyzer against the stored expectations; returns one
    /// message per mismatch.
    pub fn check(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let cert = certify(&self.map);
        if cert.report.is_jacobian != self.expect_jacobian {
            problems.push(format!(
                "jacobian: expected {}, got {}",
                self.expect_jacobian, cert.report.is_jacobian
            ));
        }
        if cert.report.det_value != self.expect_det {
            problems.push(format!(
                "determinant: expected {:?}, got {:?}",
                self.expect_det, cert.report.det_value
            ));
        }
        if cert.verdict.is_invertible() != self.expect_invertible {
            problems.push(format!(
                "invertible: expected {}, verdict {}",
                self.expect_invertible,
                cert.verdict.label()
            ));
        }
        let via: &[Condition] = match &cert.verdict {
            Verdict::Invertible { via } => via,
            _ => &[],
        };
        for cond in &self.expect_conditions {
            if !via.contains(cond) {
                problems.push(format!("missing condition {cond}"));
            }
        }
        for cond in &self.expect_absent_conditions {
            if via.contains(cond) {
                problems.push(format!("unexpected condition {cond}"));
            }
        }
        if let Some((tzero, dzero)) = self.expect_trace_det_zero {
            if cert.flags.trace_part_zero != tzero {
                problems.push(format!(
                    "trace part zero: expected {tzero}, got {}",
                    cert.flags.trace_part_zero
                ));
            }
            if cert.flags.det_part_zero != dzero {
                problems.push(format!(
                    "det part zero: expected {dzero}, got {}",
                    cert.flags.det_part_zero
                ));
            }
        }
        if let Some((forward, reverse)) = self.expect_component_gap {
            let got_forward = crate::analyzer::gap_condition(&self.map.first, &self.map.second);
            let got_reverse = crate::analyzer::gap_condition(&self.map.second, &self.map.first);
            if got_forward != forward {
                problems.push(format!(
                    "component gap condition: expected {forward}, got {got_forward}"
                ));
            }
            if got_reverse != reverse {
                problems.push(format!(
                    "reversed component gap condition: expected {reverse}, got {got_reverse}"
                ));
            }
        }
        problems
    }
}

/// Built-in worked examples exercising every verdict and condition class.
pub fn catalog() -> Vec<CatalogEntry> {
    let parse = |text: &str| crate::parse::parse_map(text).expect("catalog maps parse");
    vec![
        CatalogEntry {
            name: "quadratic-symmetric",
            summary: "quadratic family instance: both components shifted by the same square",
            map: gen_quadratic_family(rat(1), rat(0), rat(0), rat(1), rat(1), rat(1), rat(1))
                .expect("valid parameters"),
            expect_jacobian: true,
            expect_det: Some(rat(1)),
            expect_invertible: true,
            expect_conditions: vec![
                Condition::DegreeBound,
                Condition::BothEven,
                Condition::HomogeneousSameDegree,
            ],
            expect_absent_conditions: vec![],
            expect_trace_det_zero: Some((true, true)),
            expect_component_gap: None,
            note: None,
        },
        CatalogEntry {
            name: "triangular-cubic",
            summary: "one-variable shear by a cube; inverse is the opposite shear",
            map: parse("(x + y^3, y)"),
            expect_jacobian: true,
            expect_det: Some(rat(1)),
            expect_invertible: true,
            expect_conditions: vec![
                Condition::DegreeBound,
                Condition::OddEvenGap,
                Condition::SymmetricGap,
            ],
            expect_absent_conditions: vec![Condition::BothEven],
            expect_trace_det_zero: Some((true, true)),
            expect_component_gap: None,
            note: None,
        },
        CatalogEntry {
            name: "linear-cubic",
            summary: "nonsingular linear part plus homogeneous cubic parts",
            map: parse(
                "(2*x - y + x^3 + x^2*y + (1/3)*x*y^2 + (1/27)*y^3, \
                  3*x - 3*y + (12/5)*x^3 + (12/5)*x^2*y + (4/5)*x*y^2 + (4/45)*y^3)",
            ),
            expect_jacobian: true,
            expect_det: Some(rat(-3)),
            expect_invertible: true,
            expect_conditions: vec![Condition::DegreeBound, Condition::HomogeneousSameDegree],
            expect_absent_conditions: vec![],
            expect_trace_det_zero: Some((true, true)),
            expect_component_gap: None,
            note: None,
        },
        CatalogEntry {
            name: "mixed-power",
            summary: "shear by x^5 + x^6 threaded through a unimodular linear map",
            map: parse("(x + y + x^5 + x^6, y + x^5 + x^6)"),
            expect_jacobian: true,
            expect_det: Some(rat(1)),
            expect_invertible: true,
            expect_conditions: vec![
                Condition::DegreeBound,
                Condition::SymmetricGap,
                Condition::TraceDetVanish,
            ],
            expect_absent_conditions: vec![Condition::BothEven],
            expect_trace_det_zero: Some((true, true)),
            expect_component_gap: None,
            note: Some(
                "x^5 + x^6 mixes odd and even total degrees, so the both-even \
                 condition cannot hold even though T* and D* vanish exactly and \
                 certify invertibility",
            ),
        },
        CatalogEntry {
            name: "gap-asymmetry",
            summary: "components satisfy the gap condition in one order only; not a jacobian map",
            map: parse("(x + y^2, x^6 + y^2)"),
            expect_jacobian: false,
            expect_det: None,
            expect_invertible: false,
            expect_conditions: vec![],
            expect_absent_conditions: vec![],
            expect_trace_det_zero: None,
            expect_component_gap: Some((true, false)),
            note: Some(
                "gap-set of the second component is {4}; first-component term \
                 degrees minus one are {0, 1}, so the forward order passes, \
                 while the reverse order trips on the gap 1",
            ),
        },
    ]
}
