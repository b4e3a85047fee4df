//! Emit an analysis certificate as text, parse it back, validate it, and
//! watch validation catch a tampered document.
//!
//! ```bash
//! cargo run --example certificates
//! ```

use jacmap::analyzer::certify;
use jacmap::certdoc::{parse_document, CertificateDocument};
use jacmap::inverter::{formal_inverse, DEFAULT_TRUNCATION_CAP};
use jacmap::parse::parse_map;

fn main() {
    let m = parse_map("(x + y^3, y)").unwrap();
    let cert = certify(&m);
    let inverse = formal_inverse(&m, DEFAULT_TRUNCATION_CAP).ok();
    let doc = CertificateDocument::from_certificate(&cert, inverse.as_ref());

    // The emitted form is line-oriented, fixed key order, byte-stable.
    let text = doc.emit();
    println!("{text}");

    // Round trip: parse back and re-check every stored fact.
    let parsed = parse_document(&text).expect("emitted documents parse");
    let problems = parsed.validate();
    println!("validation problems: {problems:?}");
    assert!(problems.is_empty());

    // Tampering with a stored fact is caught by validation.
    let tampered_text = text.replace("det: 1", "det: 2");
    let tampered = parse_document(&tampered_text).expect("still well-formed");
    for problem in tampered.validate() {
        println!("tampered doc: {problem}");
    }

    // Structurally broken documents fail at parse time with a line number.
    let broken = text.replace("jacobian: true", "jacobian: maybe");
    match parse_document(&broken) {
        Err(e) => println!("broken doc rejected: {e}"),
        Ok(_) => unreachable!("must not parse"),
    }
}
