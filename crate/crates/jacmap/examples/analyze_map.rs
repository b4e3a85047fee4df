//! Walk a few planar polynomial maps through the full analysis: jacobian
//! determinant, structural conditions, and the final verdict.
//!
//! ```bash
//! cargo run --example analyze_map
//! ```

use jacmap::analyzer::{certify, classify_jacobian, normalize_translated, Verdict};
use jacmap::parse::parse_map;

fn main() {
    let inputs = [
        "(x + y^3, y)",                   // triangular shear
        "(x + (y - x)^2, y + (y - x)^2)", // quadratic family member
        "(x^2, y)",                       // not a jacobian map
        "(x + y^2, y + (x + y^2)^2)",     // jacobian, no condition applies
        "(2*x + y + 1, x + y - 3)",       // affine
    ];

    for text in inputs {
        let m = parse_map(text).expect("example maps parse");
        let report = classify_jacobian(&m);
        println!("map: {m}");
        match &report.det_value {
            Some(det) => println!("  jacobian with det {det}"),
            None => println!("  not a jacobian map, det_J = {}", report.det_poly),
        }

        let cert = certify(&m);
        match &cert.verdict {
            Verdict::Invertible { via } => {
                let labels: Vec<&str> = via.iter().map(|c| c.label()).collect();
                println!("  invertible via {}", labels.join(", "));
            }
            other => println!("  verdict: {}", other.label()),
        }

        if report.is_jacobian {
            let n = normalize_translated(&m).expect("jacobian maps normalize");
            println!(
                "  normalized parts: p* = {}, q* = {}, T* + D* = {}",
                n.pstar,
                n.qstar,
                &n.tstar + &n.dstar
            );
        }
        println!();
    }
}
