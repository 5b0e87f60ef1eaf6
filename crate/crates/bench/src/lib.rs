//! Seeded inputs shared by the benchmarks in `benches/`.

use stardecomp::{generate, Family, GeneratorSpec, Graph, Method};

/// `count` in-hypothesis graphs of about `n` vertices for `family`.
pub fn instances(family: Family, n: usize, count: u64) -> Vec<Graph> {
    (0..count)
        .map(|seed| {
            let method = Method::ALL[seed as usize % Method::ALL.len()];
            generate(&GeneratorSpec::for_family(family, n, seed, method))
                .expect("generator meets its bounds")
                .graph
        })
        .collect()
}
