//! Generate invertible maps: the quadratic family with explicit
//! parameters, and random compositions of elementary steps.
//!
//! ```bash
//! cargo run --example generate_families
//! ```

use jacmap::analyzer::classify_jacobian;
use jacmap::oracle::{gen_quadratic_family, sample_corpus_map, CorpusOptions};
use jacmap::poly::rat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    // (a, b, c, d) is the linear part, mu scales the shared quadratic term
    // (alpha*y - beta*x)^2; the determinant is always ad - bc.
    for (a, b, c, d, mu, alpha, beta) in [(1, 0, 0, 1, 1, 1, 1), (2, 1, 1, 1, -3, 1, 2)] {
        let m = gen_quadratic_family(
            rat(a),
            rat(b),
            rat(c),
            rat(d),
            rat(mu),
            rat(alpha),
            rat(beta),
        )
        .expect("parameters are admissible");
        let det = classify_jacobian(&m).det_value.unwrap();
        println!("quadratic({a}, {b}, {c}, {d}; {mu}; {alpha}, {beta}) = {m}");
        println!("  det = {det}");
    }
    println!();

    // Random compositions of shears and invertible linear maps. The same
    // seed always yields the same maps.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let opts = CorpusOptions::default();
    for _ in 0..3 {
        let (m, steps) = sample_corpus_map(&mut rng, &opts);
        println!("composed: {m}");
        for step in &steps {
            println!("  step: {step}");
        }
    }
}
