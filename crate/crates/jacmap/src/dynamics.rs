//! Numeric evidence from the vector field attached to a normalized map.
//!
//! A normalized map `(u + p*, v + q*)` induces the autonomous system
//! `du/dt = -u - p*(u,v)`, `dv/dt = -v - q*(u,v)`. When `T*` and `D*`
//! vanish, the linearization at every point has trace `-2` and determinant
//! `1`, making the origin globally asymptotically stable; trajectories then
//! provide cheap numeric corroboration of an exact certificate. Integration
//! uses classical fourth-order Runge-Kutta with step-doubling error
//! control.

use num_traits::ToPrimitive;

use crate::analyzer::{split_linear, NormalizeError, NormalizedMap, PolyMap};
use crate::poly::{Poly2, Rational};

/// Hard floor for the step size; running into it is recorded, not fatal.
pub const MIN_STEP: f64 = 1e-12;
/// Largest step the growth heuristic may reach.
pub const MAX_STEP: f64 = 0.25;
/// A state norm beyond this counts as divergence.
pub const DIVERGENCE_NORM: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    /// Integration horizon.
    pub t_max: f64,
    /// Initial step size.
    pub h0: f64,
    /// Local error tolerance per step, and the state norm below which the
    /// trajectory counts as converged.
    pub tol: f64,
    /// Safety cap on accepted steps.
    pub max_steps: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            t_max: 50.0,
            h0: 1e-2,
            tol: 1e-6,
            max_steps: 200_000,
        }
    }
}

/// The field `(-u - p*, -v - q*)` with coefficients lowered to `f64` once.
///
/// The nonlinear parts are kept factored as `p ∘ A⁻¹`: the state is pulled
/// back through the inverse linear part and the sparse source polynomials
/// are evaluated there. Evaluating the expanded composition in monomial
/// form instead cancels catastrophically — for `p* = (u-v)^6` at
/// `u ≈ v ≈ 300` the expanded terms reach `1e15` while the value is
/// `O(1)` — and the resulting noise stalls the step controller.
#[derive(Debug, Clone)]
pub struct VectorField {
    p_terms: Vec<(i32, i32, f64)>,
    q_terms: Vec<(i32, i32, f64)>,
    /// Row-major inverse of the linear part, applied before evaluation.
    inv: [f64; 4],
}

impl VectorField {
    /// Field of the normalized system attached to `m`. Constant terms are
    /// dropped the same way normalization drops them.
    pub fn from_map(m: &PolyMap) -> Result<Self, NormalizeError> {
        let split = split_linear(m);
        let inv = split
            .linear_matrix()
            .inverse()
            .ok_or(NormalizeError::SingularLinearPart)?;
        Ok(VectorField {
            p_terms: lower(&split.p),
            q_terms: lower(&split.q),
            inv: [
                to_f64(&inv.a),
                to_f64(&inv.b),
                to_f64(&inv.c),
                to_f64(&inv.d),
            ],
        })
    }

    /// Field for a system already in the normalized shape `(u + p*, v + q*)`.
    pub fn from_normalized(n: &NormalizedMap) -> Self {
        VectorField {
            p_terms: lower(&n.pstar),
            q_terms: lower(&n.qstar),
            inv: [1.0, 0.0, 0.0, 1.0],
        }
    }

    pub fn eval(&self, u: f64, v: f64) -> (f64, f64) {
        let x = self.inv[0] * u + self.inv[1] * v;
        let y = self.inv[2] * u + self.inv[3] * v;
        let mut du = -u;
        for &(ex, ey, c) in &self.p_terms {
            du -= c * x.powi(ex) * y.powi(ey);
        }
        let mut dv = -v;
        for &(ex, ey, c) in &self.q_terms {
            dv -= c * x.powi(ex) * y.powi(ey);
        }
        (du, dv)
    }
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn lower(poly: &Poly2) -> Vec<(i32, i32, f64)> {
    poly.terms()
        .map(|(mono, c)| {
            (
                mono.ex as i32,
                mono.ey as i32,
                c.to_f64().unwrap_or(f64::NAN),
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Accepted states as `(t, u, v)`, starting with the initial state.
    pub samples: Vec<(f64, f64, f64)>,
    /// State norm dropped below the tolerance before the horizon.
    pub converged: bool,
    /// Euclidean norm of the last state.
    pub final_norm: f64,
    /// The error control wanted a step below `MIN_STEP`; such steps are
    /// taken at the floor and flagged.
    pub step_underflow: bool,
    /// State norm exceeded `DIVERGENCE_NORM` or stopped being finite.
    pub diverged: bool,
}

impl Trajectory {
    /// Plain-text dump, one `t u v` row per accepted sample.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (t, u, v) in &self.samples {
            out.push_str(&format!("{t:.6} {u:.9e} {v:.9e}\n"));
        }
        out
    }
}

fn rk4_step(field: &VectorField, u: f64, v: f64, h: f64) -> (f64, f64) {
    let (k1u, k1v) = field.eval(u, v);
    let (k2u, k2v) = field.eval(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    let (k3u, k3v) = field.eval(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    let (k4u, k4v) = field.eval(u + h * k3u, v + h * k3v);
    (
        u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )
}

/// Integrate from `(u0, v0)` until convergence, divergence, the horizon,
/// or the step cap.
pub fn integrate(field: &VectorField, u0: f64, v0: f64, opts: &IntegrateOptions) -> Trajectory {
    let mut t = 0.0;
    let mut u = u0;
    let mut v = v0;
    let mut h = opts.h0.clamp(MIN_STEP, MAX_STEP);
    let mut samples = vec![(t, u, v)];
    let mut converged = false;
    let mut diverged = false;
    let mut step_underflow = false;

    loop {
        let norm = u.hypot(v);
        if !norm.is_finite() || norm > DIVERGENCE_NORM {
            diverged = true;
            break;
        }
        if norm < opts.tol {
            converged = true;
            break;
        }
        if t >= opts.t_max || samples.len() > opts.max_steps {
            break;
        }

        h = h.min(opts.t_max - t).max(MIN_STEP);
        let full = rk4_step(field, u, v, h);
        let mid = rk4_step(field, u, v, 0.5 * h);
        let fine = rk4_step(field, mid.0, mid.1, 0.5 * h);
        let err = (full.0 - fine.0).abs().max((full.1 - fine.1).abs());

        if err > opts.tol || !err.is_finite() {
            if 0.5 * h >= MIN_STEP {
                h *= 0.5;
                continue;
            }
            // cannot halve further: accept at the floor and record it
            step_underflow = true;
        }

        u = fine.0;
        v = fine.1;
        t += h;
        samples.push((t, u, v));

        // doubling h scales the local error by about 2^5
        if err < opts.tol / 32.0 {
            h = (2.0 * h).min(MAX_STEP);
        }
    }

    Trajectory {
        samples,
        converged,
        final_norm: u.hypot(v),
        step_underflow,
        diverged,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinReport {
    pub lo: f64,
    pub hi: f64,
    pub points_per_axis: usize,
    pub total: usize,
    pub converged_count: usize,
    /// Starting points that failed to converge.
    pub failures: Vec<(f64, f64)>,
}

/// Integrate from every point of an evenly spaced `n x n` grid on
/// `[lo, hi]^2` and count trajectories reaching the origin.
pub fn basin_scan(
    field: &VectorField,
    lo: f64,
    hi: f64,
    n: usize,
    opts: &IntegrateOptions,
) -> BasinReport {
    let coord = |i: usize| {
        if n <= 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    let mut converged_count = 0;
    let mut failures = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (u0, v0) = (coord(i), coord(j));
            let traj = integrate(field, u0, v0, opts);
            if traj.converged {
                converged_count += 1;
            } else {
                failures.push((u0, v0));
            }
        }
    }
    BasinReport {
        lo,
        hi,
        points_per_axis: n,
        total: n * n,
        converged_count,
        failures,
    }
}

/// Extremes of the linearization over the fixed 21x21 rational grid on
/// `[-5, 5]^2`: trace is `-2 - T*`, determinant is `1 + T* + D*`. Stability
/// everywhere needs the max trace negative and the min determinant
/// positive; when `T*` and `D*` vanish these are exactly `-2` and `1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSampleReport {
    pub max_trace: f64,
    pub min_trace: f64,
    pub min_det: f64,
}

pub fn eigen_certificate_sample(n: &NormalizedMap) -> EigenSampleReport {
    use crate::poly::{rat, ratio};
    let mut max_trace: Option<crate::poly::Rational> = None;
    let mut min_trace: Option<crate::poly::Rational> = None;
    let mut min_det: Option<crate::poly::Rational> = None;
    for i in 0..21i64 {
        for j in 0..21i64 {
            let x = ratio(i - 10, 2);
            let y = ratio(j - 10, 2);
            let tstar = n.tstar.evaluate(&x, &y);
            let dstar = n.dstar.evaluate(&x, &y);
            let trace = rat(-2) - &tstar;
            let det = rat(1) + tstar + dstar;
            if max_trace.as_ref().is_none_or(|m| trace > *m) {
                max_trace = Some(trace.clone());
            }
            if min_trace.as_ref().is_none_or(|m| trace < *m) {
                min_trace = Some(trace);
            }
            if min_det.as_ref().is_none_or(|m| det < *m) {
                min_det = Some(det);
            }
        }
    }
    let lower = |r: Option<crate::poly::Rational>| r.unwrap().to_f64().unwrap_or(f64::NAN);
    EigenSampleReport {
        max_trace: lower(max_trace),
        min_trace: lower(min_trace),
        min_det: lower(min_det),
    }
}
