//! Plain-text certificate documents.
//!
//! A certificate records the full outcome of an analysis (map, determinant,
//! verdict, linear split, condition flags, and optionally a verified
//! inverse) in a line-oriented `key: value` format with a fixed key order,
//! so emission is byte-deterministic and documents can be parsed back
//! losslessly. `validate` re-runs the analysis and reports any stored fact
//! that no longer holds.

use std::fmt;
use std::fmt::Write as _;

use crate::analyzer::{certify, Certificate, Condition, ConditionFlags, PolyMap, Verdict};
use crate::inverter::{verify_inverse, InverseResult};
use crate::parse::{parse_map, parse_poly};
use crate::poly::{Poly2, Rational};

/// Schema tag on the first line of every document.
pub const SCHEMA: &str = "jacmap-cert/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateDocument {
    pub map: PolyMap,
    pub jacobian: bool,
    /// Constant determinant value; `None` when the map is not jacobian.
    pub det: Option<Rational>,
    pub det_poly: Poly2,
    pub verdict: Verdict,
    pub constant_first: Rational,
    pub constant_second: Rational,
    pub linear: [Rational; 4],
    pub nonlinear_first: Poly2,
    pub nonlinear_second: Poly2,
    pub flags: ConditionFlags,
    pub inverse: Option<PolyMap>,
    pub truncation_degree: Option<u32>,
}

impl CertificateDocument {
    pub fn from_certificate(cert: &Certificate, inverse: Option<&InverseResult>) -> Self {
        CertificateDocument {
            map: cert.split.reconstruct(),
            jacobian: cert.report.is_jacobian,
            det: cert.report.det_value.clone(),
            det_poly: cert.report.det_poly.clone(),
            verdict: cert.verdict.clone(),
            constant_first: cert.split.constant_first.clone(),
            constant_second: cert.split.constant_second.clone(),
            linear: [
                cert.split.a.clone(),
                cert.split.b.clone(),
                cert.split.c.clone(),
                cert.split.d.clone(),
            ],
            nonlinear_first: cert.split.p.clone(),
            nonlinear_second: cert.split.q.clone(),
            flags: cert.flags,
            inverse: inverse.map(|r| r.inverse.clone()),
            truncation_degree: inverse.map(|r| r.truncation_degree_used),
        }
    }

    /// Render the document; the output is byte-deterministic.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "schema: {SCHEMA}");
        let _ = writeln!(out, "map: {}", self.map);
        let _ = writeln!(out, "jacobian: {}", self.jacobian);
        match &self.det {
            Some(value) => {
                let _ = writeln!(out, "det: {value}");
            }
            None => {
                let _ = writeln!(out, "det: none");
            }
        }
        let _ = writeln!(out, "det-poly: {}", self.det_poly);
        let _ = writeln!(out, "verdict: {}", self.verdict.label());
        let _ = writeln!(out, "via:");
        if let Verdict::Invertible { via } = &self.verdict {
            for cond in via {
                let _ = writeln!(out, "- {}", cond.label());
            }
        }
        let _ = writeln!(
            out,
            "constant-shift: ({}, {})",
            self.constant_first, self.constant_second
        );
        let _ = writeln!(
            out,
            "linear-part: [{}, {}, {}, {}]",
            self.linear[0], self.linear[1], self.linear[2], self.linear[3]
        );
        let _ = writeln!(out, "nonlinear-first: {}", self.nonlinear_first);
        let _ = writeln!(out, "nonlinear-second: {}", self.nonlinear_second);
        let _ = writeln!(out, "flags:");
        let opt = |value: Option<bool>| match value {
            Some(true) => "true",
            Some(false) => "false",
            None => "n/a",
        };
        let f = &self.flags;
        let _ = writeln!(out, "  degree-bound: {}", f.degree_bound);
        let _ = writeln!(out, "  both-even: {}", f.both_even);
        let _ = writeln!(out, "  odd-even-gap: {}", f.odd_even_gap);
        let _ = writeln!(out, "  symmetric-gap: {}", f.symmetric_gap);
        let _ = writeln!(
            out,
            "  homogeneous-same-degree: {}",
            f.homogeneous_same_degree
        );
        let _ = writeln!(out, "  x-parity-split: {}", opt(f.x_parity_split));
        let _ = writeln!(out, "  y-parity-split: {}", opt(f.y_parity_split));
        let _ = writeln!(out, "  trace-part-zero: {}", f.trace_part_zero);
        let _ = writeln!(out, "  det-part-zero: {}", f.det_part_zero);
        if let Some(inverse) = &self.inverse {
            let _ = writeln!(out, "inverse: {inverse}");
        }
        if let Some(n) = self.truncation_degree {
            let _ = writeln!(out, "truncation-degree: {n}");
        }
        out
    }

    /// Re-run the analysis on the stored map and report every stored fact
    /// that disagrees with it; an empty result means the document checks.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let fresh = CertificateDocument::from_certificate(&certify(&self.map), None);
        if self.jacobian != fresh.jacobian {
            problems.push("jacobian flag does not match the map".to_string());
        }
        if self.det != fresh.det {
            problems.push("determinant value does not match the map".to_string());
        }
        if self.det_poly != fresh.det_poly {
            problems.push("determinant polynomial does not match the map".to_string());
        }
        if self.verdict != fresh.verdict {
            problems.push("verdict does not match the map".to_string());
        }
        if self.flags != fresh.flags {
            problems.push("condition flags do not match the map".to_string());
        }
        let split_matches = self.constant_first == fresh.constant_first
            && self.constant_second == fresh.constant_second
            && self.linear == fresh.linear
            && self.nonlinear_first == fresh.nonlinear_first
            && self.nonlinear_second == fresh.nonlinear_second;
        if !split_matches {
            problems.push("linear split does not match the map".to_string());
        }
        if let Some(inverse) = &self.inverse {
            if !verify_inverse(&self.map, inverse) {
                problems.push("stored inverse does not compose to the identity".to_string());
            }
        }
        problems
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for DocError {}

/// A consumed `key: value` line, remembering where it came from.
#[derive(Debug, Clone, Copy)]
struct Field<'a> {
    value: &'a str,
    line: usize,
}

impl<'a> Field<'a> {
    fn error(&self, message: impl Into<String>) -> DocError {
        DocError {
            line: self.line,
            message: message.into(),
        }
    }

    fn as_bool(&self) -> Result<bool, DocError> {
        match self.value {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(self.error(format!("expected `true` or `false`, found `{other}`"))),
        }
    }

    fn as_opt_bool(&self) -> Result<Option<bool>, DocError> {
        if self.value == "n/a" {
            Ok(None)
        } else {
            self.as_bool().map(Some)
        }
    }

    fn rational_from(&self, text: &str) -> Result<Rational, DocError> {
        parse_poly(text)
            .ok()
            .and_then(|p| p.as_constant())
            .ok_or_else(|| self.error(format!("expected a rational number, found `{text}`")))
    }

    fn as_poly(&self) -> Result<Poly2, DocError> {
        parse_poly(self.value)
            .map_err(|e| self.error(format!("bad polynomial `{}`: {e}", self.value)))
    }

    fn as_map(&self) -> Result<PolyMap, DocError> {
        parse_map(self.value).map_err(|e| self.error(format!("bad map `{}`: {e}", self.value)))
    }

    fn as_u32(&self) -> Result<u32, DocError> {
        self.value
            .parse::<u32>()
            .map_err(|_| self.error(format!("expected an integer, found `{}`", self.value)))
    }
}

struct DocLines<'a> {
    lines: Vec<&'a str>,
    idx: usize,
}

impl<'a> DocLines<'a> {
    fn new(text: &'a str) -> Self {
        DocLines {
            lines: text.lines().collect(),
            idx: 0,
        }
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.idx).copied()
    }

    fn here(&self, message: impl Into<String>) -> DocError {
        DocError {
            line: self.idx + 1,
            message: message.into(),
        }
    }

    /// Consume `key: value` (or a bare `key:` header) at the given
    /// indentation, returning the value with its line number.
    fn expect_value(&mut self, indent: &str, key: &str) -> Result<Field<'a>, DocError> {
        let line = self
            .peek()
            .ok_or_else(|| self.here(format!("expected `{key}:`, found end of document")))?;
        let field = Field {
            value: "",
            line: self.idx + 1,
        };
        let prefix = format!("{indent}{key}: ");
        if let Some(value) = line.strip_prefix(&prefix) {
            self.idx += 1;
            return Ok(Field { value, ..field });
        }
        if line == format!("{indent}{key}:") {
            self.idx += 1;
            return Ok(field);
        }
        Err(self.here(format!("expected `{key}:`, found `{line}`")))
    }

    /// Consume consecutive `- item` lines.
    fn take_list_items(&mut self) -> Vec<Field<'a>> {
        let mut items = Vec::new();
        while let Some(line) = self.peek() {
            match line.strip_prefix("- ") {
                Some(item) => {
                    items.push(Field {
                        value: item,
                        line: self.idx + 1,
                    });
                    self.idx += 1;
                }
                None => break,
            }
        }
        items
    }
}

/// Parse a document produced by [`CertificateDocument::emit`].
pub fn parse_document(text: &str) -> Result<CertificateDocument, DocError> {
    let mut lines = DocLines::new(text);

    let schema = lines.expect_value("", "schema")?;
    if schema.value != SCHEMA {
        return Err(schema.error(format!(
            "unsupported schema `{}`, expected `{SCHEMA}`",
            schema.value
        )));
    }
    let map = lines.expect_value("", "map")?.as_map()?;
    let jacobian = lines.expect_value("", "jacobian")?.as_bool()?;
    let det_field = lines.expect_value("", "det")?;
    let det = match det_field.value {
        "none" => None,
        value => Some(det_field.rational_from(value)?),
    };
    let det_poly = lines.expect_value("", "det-poly")?.as_poly()?;

    let verdict_field = lines.expect_value("", "verdict")?;
    lines.expect_value("", "via")?;
    let via_items = lines.take_list_items();
    let verdict = match verdict_field.value {
        "invertible" => {
            let mut via = Vec::new();
            for item in &via_items {
                via.push(
                    Condition::from_label(item.value)
                        .ok_or_else(|| item.error(format!("unknown condition `{}`", item.value)))?,
                );
            }
            Verdict::Invertible { via }
        }
        "jacobian-but-undecided" => Verdict::JacobianButUndecided,
        "not-jacobian" => Verdict::NotJacobian,
        "malformed-order" => Verdict::MalformedOrder,
        other => return Err(verdict_field.error(format!("unknown verdict `{other}`"))),
    };
    if !matches!(verdict, Verdict::Invertible { .. }) {
        if let Some(item) = via_items.first() {
            return Err(item.error("via list is only valid for an invertible verdict"));
        }
    }

    let shift = lines.expect_value("", "constant-shift")?;
    let (constant_first, constant_second) = {
        let inner = shift
            .value
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| shift.error(format!("expected `(c1, c2)`, found `{}`", shift.value)))?;
        let parts: Vec<&str> = inner.split(", ").collect();
        if parts.len() != 2 {
            return Err(shift.error(format!("expected 2 constants, found {}", parts.len())));
        }
        (
            shift.rational_from(parts[0])?,
            shift.rational_from(parts[1])?,
        )
    };

    let linear_field = lines.expect_value("", "linear-part")?;
    let linear = {
        let inner = linear_field
            .value
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| {
                linear_field.error(format!(
                    "expected `[a, b, c, d]`, found `{}`",
                    linear_field.value
                ))
            })?;
        let parts: Vec<&str> = inner.split(", ").collect();
        if parts.len() != 4 {
            return Err(linear_field.error(format!(
                "expected 4 linear coefficients, found {}",
                parts.len()
            )));
        }
        [
            linear_field.rational_from(parts[0])?,
            linear_field.rational_from(parts[1])?,
            linear_field.rational_from(parts[2])?,
            linear_field.rational_from(parts[3])?,
        ]
    };

    let nonlinear_first = lines.expect_value("", "nonlinear-first")?.as_poly()?;
    let nonlinear_second = lines.expect_value("", "nonlinear-second")?.as_poly()?;

    lines.expect_value("", "flags")?;
    let flags = ConditionFlags {
        degree_bound: lines.expect_value("  ", "degree-bound")?.as_bool()?,
        both_even: lines.expect_value("  ", "both-even")?.as_bool()?,
        odd_even_gap: lines.expect_value("  ", "odd-even-gap")?.as_bool()?,
        symmetric_gap: lines.expect_value("  ", "symmetric-gap")?.as_bool()?,
        homogeneous_same_degree: lines
            .expect_value("  ", "homogeneous-same-degree")?
            .as_bool()?,
        x_parity_split: lines.expect_value("  ", "x-parity-split")?.as_opt_bool()?,
        y_parity_split: lines.expect_value("  ", "y-parity-split")?.as_opt_bool()?,
        trace_part_zero: lines.expect_value("  ", "trace-part-zero")?.as_bool()?,
        det_part_zero: lines.expect_value("  ", "det-part-zero")?.as_bool()?,
    };

    let mut inverse = None;
    if lines.peek().is_some_and(|l| l.starts_with("inverse: ")) {
        inverse = Some(lines.expect_value("", "inverse")?.as_map()?);
    }
    let mut truncation_degree = None;
    if lines
        .peek()
        .is_some_and(|l| l.starts_with("truncation-degree: "))
    {
        truncation_degree = Some(lines.expect_value("", "truncation-degree")?.as_u32()?);
    }
    if let Some(extra) = lines.peek() {
        if !extra.trim().is_empty() {
            return Err(lines.here(format!("unexpected trailing line `{extra}`")));
        }
    }

    Ok(CertificateDocument {
        map,
        jacobian,
        det,
        det_poly,
        verdict,
        constant_first,
        constant_second,
        linear,
        nonlinear_first,
        nonlinear_second,
        flags,
        inverse,
        truncation_degree,
    })
}
