//! Gap sets and the gap condition, including the pair showing the
//! condition is sensitive to the order of its arguments.
//!
//! ```bash
//! cargo run --example gap_sets
//! ```

use jacmap::analyzer::gap_condition;
use jacmap::parse::{format_gap_set, parse_poly};

fn main() {
    // The gap set collects |d(M1) - d(M2)| over distinct monomials, so it
    // records which degree jumps occur inside a polynomial.
    for text in [
        "x^3 + y^3 + x^2*y^2 + y^7",
        "x + y^2",
        "x^6 + y^2",
        "x^5",
        "0",
    ] {
        let p = parse_poly(text).expect("example polynomials parse");
        println!("G({text}) = {}", format_gap_set(&p.gap_set()));
    }
    println!();

    // gap_condition(p, q) asks that no monomial M of p has d(M) - 1 inside
    // the gap set of q. It is not symmetric.
    let p = parse_poly("x + y^2").unwrap();
    let q = parse_poly("x^6 + y^2").unwrap();
    // Forward: the monomials of p give d - 1 = 0 and 1, and G(q) = {4}
    // contains neither. Reverse: y^2 in q gives d - 1 = 1, which lands
    // exactly in G(p) = {1}.
    println!("gap_condition(p, q) = {}", gap_condition(&p, &q));
    println!("gap_condition(q, p) = {}", gap_condition(&q, &p));
}
