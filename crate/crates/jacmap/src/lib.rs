//! Exact analyzer for planar polynomial maps.
//!
//! Decides whether a map `(x, y) -> (P(x,y), Q(x,y))` has constant nonzero
//! jacobian determinant, checks a family of structural conditions sufficient
//! for global invertibility, emits machine-checkable certificates, computes
//! polynomial inverses by exact fixed-point iteration, and gathers numeric
//! evidence from the associated globally stable vector field.

pub mod analyzer;
pub mod certdoc;
pub mod cli;
pub mod dynamics;
pub mod inverter;
pub mod oracle;
pub mod parse;
pub mod poly;
