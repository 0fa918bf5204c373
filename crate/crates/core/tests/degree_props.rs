mod common;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netdeg_core::degree::{
    algebraic_degree, cartesian_degree, component_ids, count_cycle_covers, permanent_naive,
    permanent_ryser, scc_decompose, tensor_degree, transfer_by_enumeration, transfer_by_matching,
    transfer_matrix,
};
use netdeg_core::game::{build_indifference_system, sample_generic_payoffs, topology_factory, Topology, UniformPayoffs};
use netdeg_core::polygraph::{build_poly_graph, graph_product, ProductKind};
use netdeg_core::{DirectedGraph, IntMatrix};

fn binary_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max).prop_flat_map(|d| {
        prop::collection::vec(prop::bool::weighted(0.5), d * d).prop_map(move |bits| {
            let rows: Vec<Vec<i64>> = bits.chunks(d).map(|r| r.iter().map(|&b| i64::from(b)).collect()).collect();
            IntMatrix::from_rows(&rows).unwrap()
        })
    })
}

/// Small gadget graph; loops allowed when `loops` is set.
fn gadget(max: usize, loops: bool) -> impl Strategy<Value = DirectedGraph> {
    (1..=max).prop_flat_map(move |m| {
        prop::collection::vec(prop::bool::weighted(0.45), m * m).prop_map(move |bits| {
            let edges = (0..m * m)
                .filter(|&i| bits[i] && (loops || i / m != i % m))
                .map(|i| (i / m, i % m));
            DirectedGraph::with_loops(m, edges).unwrap()
        })
    })
}

fn int(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn three_permanent_routes_agree(a in binary_matrix(8)) {
        let ryser = permanent_ryser(&a).unwrap();
        prop_assert_eq!(&ryser, &permanent_naive(&a).unwrap());
        prop_assert_eq!(BigInt::from(count_cycle_covers(&a).unwrap()), ryser);
    }

    #[test]
    fn zero_line_kills_permanent(a in binary_matrix(7), line in 0usize..7, column in any::<bool>()) {
        let d = a.dim();
        let line = line % d;
        let mut m = a.clone();
        for i in 0..d {
            if column { m.set(i, line, 0) } else { m.set(line, i, 0) }
        }
        prop_assert_eq!(permanent_ryser(&m).unwrap(), BigInt::from(0));
    }

    #[test]
    fn permanent_of_permutation_kron(h in gadget(3, true), n in 1usize..5, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.shuffle(&mut rng);
        let a_h = h.adjacency_matrix();
        let lifted = IntMatrix::permutation(&sigma).kron(&a_h);
        let base = permanent_ryser(&a_h).unwrap();
        prop_assert_eq!(permanent_ryser(&lifted).unwrap(), num_traits::pow(base, n));
    }

    #[test]
    fn transfer_routes_agree(h in gadget(4, true)) {
        prop_assert_eq!(transfer_by_enumeration(&h).unwrap(), transfer_by_matching(&h).unwrap());
    }

    #[test]
    fn transfer_row_sums_count_in_deficits(h in gadget(3, true)) {
        // independent count: edge sets with in-degree 1 - u_a, out-degree ≤ 1
        let t = transfer_matrix(&h).unwrap();
        let m = h.vertex_count();
        let edges: Vec<(usize, usize)> = h.edges().collect();
        for u in 0..(1usize << m) {
            let mut expected = 0u64;
            for f in 0u32..(1 << edges.len()) {
                let mut indeg = vec![0; m];
                let mut outdeg = vec![0; m];
                for (e, &(a, b)) in edges.iter().enumerate() {
                    if f >> e & 1 == 1 {
                        outdeg[a] += 1;
                        indeg[b] += 1;
                    }
                }
                let ok = (0..m).all(|a| indeg[a] == 1 - (u >> a & 1) && outdeg[a] <= 1);
                expected += u64::from(ok);
            }
            let row: u64 = (0..(1usize << m)).map(|v| t.get(u, v)).sum();
            prop_assert_eq!(row, expected);
        }
    }

    #[test]
    fn trace_counts_product_covers(h in gadget(3, true), n in 2usize..7) {
        let c = topology_factory(&Topology::Cycle(n)).unwrap();
        let product = graph_product(ProductKind::Cartesian, &c, &h).unwrap();
        let covers = count_cycle_covers(&product.adjacency_matrix()).unwrap();
        prop_assert_eq!(cartesian_degree(&h, n).unwrap(), covers);
    }

    #[test]
    fn single_layer_trace(h in gadget(4, false)) {
        // C_1 □ H: H plus one loop per vertex
        let mut a = h.adjacency_matrix();
        for i in 0..a.dim() {
            a.set(i, i, 1);
        }
        prop_assert_eq!(transfer_matrix(&h).unwrap().trace(), count_cycle_covers(&a).unwrap());
    }

    #[test]
    fn block_triangular_factorization(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, dims) = common::random_dag_of_cycles(&mut rng, 14);
        let game = common::random_game(&mut rng, &g, &dims);
        let pg = build_poly_graph(&build_indifference_system(&game));
        let comps = scc_decompose(&g);
        let ids = component_ids(&comps, g.vertex_count());
        // every edge runs into an earlier-listed (or the same) component
        for (a, b) in g.edges() {
            prop_assert!(ids[a] >= ids[b]);
        }
        let layout = pg.layout();
        let mut product = BigInt::from(1);
        for comp in &comps {
            let vars: Vec<usize> = comp.iter().flat_map(|&p| layout.block(p)).collect();
            product *= permanent_ryser(&pg.adjacency().principal_submatrix(&vars)).unwrap();
        }
        prop_assert_eq!(permanent_ryser(pg.adjacency()).unwrap(), product);
    }

    #[test]
    fn permanent_divisible_by_factorials(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, dims) = common::random_dag_of_cycles(&mut rng, 12);
        let game = common::random_game(&mut rng, &g, &dims);
        let pg = build_poly_graph(&build_indifference_system(&game));
        let perm = permanent_ryser(pg.adjacency()).unwrap();
        let fact: BigInt = dims.iter().map(|&k| if k == 2 { BigInt::from(2) } else { BigInt::from(1) }).product();
        prop_assert_eq!(perm % fact, BigInt::from(0));
    }

    #[test]
    fn unit_games_three_routes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, dims) = common::random_dag_of_cycles(&mut rng, 12);
        let dims = vec![1; dims.len()];
        let game = common::random_game(&mut rng, &g, &dims);
        let pg = build_poly_graph(&build_indifference_system(&game));
        let deg = algebraic_degree(&game).unwrap();
        let covers = BigInt::from(count_cycle_covers(pg.adjacency()).unwrap());
        prop_assert_eq!(&deg, &int(&covers));
        prop_assert_eq!(deg, int(&permanent_ryser(pg.adjacency()).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tensor_law_matches_permanent_pipeline(h in gadget(3, true), seed in any::<u64>()) {
        let c3 = topology_factory(&Topology::Cycle(3)).unwrap();
        let g = topology_factory(&Topology::Tensor { base: c3.clone(), gadget: h.clone() }).unwrap();
        let n = g.vertex_count();
        let game = sample_generic_payoffs(&g, &vec![1; n], UniformPayoffs::PAPER_RANGE, seed).unwrap();
        let expected = tensor_degree(&c3, &h).unwrap();
        match algebraic_degree(&game) {
            Ok(d) => prop_assert_eq!(d, BigRational::from_integer(BigInt::from(expected))),
            // an isolated gadget vertex leaves a player without neighbors
            Err(e) => prop_assert!(matches!(e, netdeg_core::Error::NonGeneric(_)) && expected == BigUint::from(0u32)),
        }
    }

    #[test]
    fn cartesian_law_matches_permanent_pipeline(h in gadget(3, false), n in 2usize..7, seed in any::<u64>()) {
        let g = topology_factory(&Topology::Cartesian { n, gadget: h.clone() }).unwrap();
        let players = g.vertex_count();
        let game = sample_generic_payoffs(&g, &vec![1; players], UniformPayoffs::PAPER_RANGE, seed).unwrap();
        let d = algebraic_degree(&game).unwrap();
        prop_assert_eq!(d, BigRational::from_integer(BigInt::from(cartesian_degree(&h, n).unwrap())));
    }
}

#[test]
fn tensor_law_rejects_non_cycle_base() {
    let path = DirectedGraph::new(2, [(0, 1)]).unwrap();
    assert!(tensor_degree(&path, &DirectedGraph::empty(1)).is_err());
}
