//! Property tests: every fast algorithm against its brute-force oracle, and
//! the structural invariants of the pipeline.

use proptest::prelude::*;
use stardecomp::decompose::DecomposeOptions;
use stardecomp::discharge::charge_identity;
use stardecomp::gen::{canonical_graph6, generate, random_forest};
use stardecomp::star::star_colorable;
use stardecomp::*;

/// Simple graph on `n <= max_n` vertices from a bitmask over vertex pairs.
fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

/// Sparse in-hypothesis instance for one of the three families.
fn sparse_instance() -> impl Strategy<Value = (Family, Graph)> {
    (0usize..3, 8usize..40, any::<u64>(), 0usize..3).prop_map(|(f, n, seed, m)| {
        let family = Family::ALL[f];
        let method = [Method::Subdivision, Method::Rejection, Method::ThreadGraft][m];
        let spec = GeneratorSpec::for_family(family, n, seed, method);
        (family, generate(&spec).unwrap().graph)
    })
}

/// Brute-force star check: every path on 4 vertices uses at least 3 colors
/// and adjacent vertices differ.
fn is_star_bruteforce(g: &Graph, c: &Coloring) -> bool {
    let col = |v| c.color(v).unwrap();
    for (u, v) in g.edges() {
        if col(u) == col(v) {
            return false;
        }
    }
    for b in g.vertices() {
        for &a in g.neighbors(b) {
            for &cc in g.neighbors(b) {
                if cc == a {
                    continue;
                }
                for &d in g.neighbors(cc) {
                    if d != a && d != b && col(a) == col(cc) && col(b) == col(d) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Every permutation of `0..n`, naively.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.order(), g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_the_least_relabeling(g in small_graph(6), k in any::<prop::sample::Index>()) {
        let perms = permutations(g.order());
        let least = perms.iter().map(|p| io::to_graph6(&relabel(&g, p))).min().unwrap();
        prop_assert_eq!(canonical_graph6(&g), least.clone());
        let other = relabel(&g, k.get(&perms));
        prop_assert_eq!(canonical_graph6(&other), least);
    }

    #[test]
    fn mad_matches_bruteforce(g in small_graph(10)) {
        let fast = mad_exact(&g).unwrap();
        let slow = mad_bruteforce(&g, 10).unwrap();
        prop_assert_eq!(fast.value, slow.value);
        let sub = g.induced(&fast.witness);
        let avg = Rational::new(2 * sub.num_edges() as i64, fast.witness.len().max(1) as i64);
        prop_assert_eq!(avg, fast.value);
    }

    #[test]
    fn mad_below_agrees_with_mad(g in small_graph(10), p in 1i64..40, q in 1i64..12) {
        let bound = Rational::new(p, q);
        prop_assert_eq!(mad_below(&g, bound), mad_exact(&g).unwrap().value < bound);
    }

    #[test]
    fn graph6_round_trip(g in small_graph(12)) {
        for format in [Format::Graph6, Format::Edgelist, Format::Dimacs] {
            let text = serialize_graph(&g, format);
            prop_assert_eq!(&parse_graph(&text, format).unwrap(), &g);
        }
    }

    #[test]
    fn star_verifier_matches_bruteforce(g in small_graph(8), seed in any::<u64>()) {
        let mut state = seed | 1;
        let colors = (0..g.order())
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                Some((state % 3) as usize)
            })
            .collect();
        let c = Coloring::new(colors, 3);
        prop_assert_eq!(verify_star(&g, &c).unwrap().ok, is_star_bruteforce(&g, &c));
    }

    #[test]
    fn exact_solver_is_optimal(g in small_graph(7)) {
        let k = exact_star_chromatic(&g, g.order()).unwrap().value().unwrap();
        let c = star_colorable(&g, k).unwrap();
        prop_assert!(verify_star(&g, &c).unwrap().ok);
        if k > 1 {
            prop_assert!(star_colorable(&g, k - 1).is_none());
        }
    }

    #[test]
    fn forests_take_three_colors(n in 1usize..300, seed in any::<u64>()) {
        let f = random_forest(n, seed);
        let c = star_color_forest(&f).unwrap();
        prop_assert!(c.palette_size <= 3);
        prop_assert!(verify_star(&f, &c).unwrap().ok);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_graphs_meet_their_spec((family, g) in sparse_instance()) {
        prop_assert!(mad_exact(&g).unwrap().value < family.mad_bound());
        if family.girth_min() > 3 {
            prop_assert!(girth(&g).is_none_or(|x| x >= family.girth_min()));
        }
    }

    #[test]
    fn detectors_fire_and_validate((family, g) in sparse_instance()) {
        let m = detect(&g, family).expect("in-hypothesis graph without a configuration");
        prop_assert_eq!(validate_match(&g, &m), Ok(()));
    }

    #[test]
    fn decomposition_is_valid_and_replays((family, g) in sparse_instance()) {
        let scheme = Scheme::for_family(family);
        let opts = DecomposeOptions { cross_check: true, ..DecomposeOptions::default() };
        let (p, trace) = decompose_with(&g, scheme, &opts).unwrap();
        prop_assert!(verify_partition(&g, &p).unwrap().ok);
        prop_assert_eq!(trace.replay(), g.clone());
        prop_assert!(trace.steps.iter().all(|s| s.search_agrees != Some(false)));
        let coloring = color_from_partition(&g, &p).unwrap();
        prop_assert!(coloring.palette_size <= scheme.colors());
        prop_assert!(is_star_bruteforce(&g, &coloring));
    }

    #[test]
    fn partition_text_round_trip((family, g) in sparse_instance()) {
        let (p, _) = decompose(&g, Scheme::for_family(family), true).unwrap();
        prop_assert_eq!(Partition::parse(&p.to_lines()).unwrap(), p);
    }

    #[test]
    fn charge_is_conserved((_, g) in sparse_instance()) {
        for f in Family::ALL {
            let ledger = apply_rules(&g, f);
            prop_assert!(charge_identity(&ledger));
            let degree_sum: i64 = g.vertices().map(|v| g.degree(v) as i64).sum();
            prop_assert_eq!(ledger.total_final() + ledger.bank, Rational::from_integer(degree_sum));
        }
    }
}
