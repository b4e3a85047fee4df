//! Compute polynomial inverses and verify them by exact composition.
//!
//! ```bash
//! cargo run --example invert_map
//! ```

use jacmap::inverter::{formal_inverse, InvertError, DEFAULT_TRUNCATION_CAP};
use jacmap::parse::parse_map;

fn main() {
    let inputs = [
        "(x + y^3, y)",
        "(x - (y - x^2)^2, y - x^2)", // two shears composed
        "(x + y^2 + 1, y - 2)",       // constant terms ride along
        "(2*x - y + x^3 + x^2*y + (1/3)*x*y^2 + (1/27)*y^3, \
          3*x - 3*y + (12/5)*x^3 + (12/5)*x^2*y + (4/5)*x*y^2 + (4/45)*y^3)",
    ];

    for text in inputs {
        let m = parse_map(text).expect("example maps parse");
        println!("map:     {m}");
        match formal_inverse(&m, DEFAULT_TRUNCATION_CAP) {
            Ok(result) => {
                println!("inverse: {}", result.inverse);
                println!(
                    "         truncation degree {}, verified: {}",
                    result.truncation_degree_used, result.verified
                );
            }
            Err(e) => println!("         no inverse: {e}"),
        }
        println!();
    }

    // Inversion refuses maps whose jacobian determinant is non-constant.
    let squash = parse_map("(x^2, y)").unwrap();
    match formal_inverse(&squash, DEFAULT_TRUNCATION_CAP) {
        Err(InvertError::NotJacobian) => println!("(x^2, y) rejected: not a jacobian map"),
        other => println!("unexpected: {other:?}"),
    }
}
