mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netdeg_core::game::{
    build_indifference_system, cyclic_matching_pennies, sample_generic_payoffs, topology_factory,
    GameFile, Monomial, Topology, UniformPayoffs,
};
use netdeg_core::polygraph::{build_poly_graph, kronecker_lift};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn equations_use_only_in_neighbors(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, dims) = common::random_dag_of_cycles(&mut rng, 14);
        let game = common::random_game(&mut rng, &g, &dims);
        let sys = build_indifference_system(&game);
        let layout = sys.layout();
        prop_assert!(sys.is_blockwise_multilinear());
        for e in 0..sys.dim() {
            let i = layout.player_of(e);
            let nbrs = g.in_neighbors(i);
            for v in sys.equation(e).variables() {
                prop_assert!(nbrs.contains(&layout.player_of(v)));
            }
        }
        // rows of one player block share their support
        let pg = build_poly_graph(&sys);
        for p in 0..layout.players() {
            let rows: Vec<&[i64]> = layout.block(p).map(|r| pg.adjacency().row(r)).collect();
            prop_assert!(rows.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn lift_equals_built_graph(n in 2usize..=5, k in 1usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = loop {
            let (g, _) = common::random_dag_of_cycles(&mut rng, 14);
            if g.vertex_count() <= n + 3 {
                break g;
            }
        };
        let dims = vec![k; g.vertex_count()];
        let game = sample_generic_payoffs(&g, &dims, UniformPayoffs::PAPER_RANGE, seed).unwrap();
        let built = build_poly_graph(&build_indifference_system(&game));
        prop_assert_eq!(built, kronecker_lift(&g.dependency_matrix(), k).unwrap());
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>(), k in 1usize..=2) {
        let g = topology_factory(&Topology::CrossPrism(3)).unwrap();
        let a = sample_generic_payoffs(&g, &[k; 6], UniformPayoffs::PAPER_RANGE, seed).unwrap();
        let b = sample_generic_payoffs(&g, &[k; 6], UniformPayoffs::PAPER_RANGE, seed).unwrap();
        prop_assert_eq!(GameFile::to_json(&a), GameFile::to_json(&b));
        let back = GameFile::parse(&GameFile::to_json(&a)).unwrap();
        prop_assert_eq!(build_indifference_system(&back), build_indifference_system(&a));
    }
}

#[test]
fn matching_pennies_equations_are_affine_with_root_half() {
    for n in 2..=6 {
        let sys = build_indifference_system(&cyclic_matching_pennies(n).unwrap());
        let layout = sys.layout();
        for e in 0..n {
            let prev = layout.var((e + n - 1) % n, 1);
            let p = sys.equation(e);
            assert_eq!(p.variables(), vec![prev]);
            let c0 = p.coefficient(&Monomial::one()).unwrap().clone();
            let c1 = p.coefficient(&Monomial::new(vec![prev])).unwrap().clone();
            let root = -c0 / c1;
            assert_eq!(root, BigRational::new(BigInt::from(1), BigInt::from(2)));
        }
    }
}

#[test]
fn cross_prism_node_has_four_monomials() {
    let g = topology_factory(&Topology::CrossPrism(3)).unwrap();
    let game = sample_generic_payoffs(&g, &[1; 6], UniformPayoffs::PAPER_RANGE, 99).unwrap();
    let sys = build_indifference_system(&game);
    for e in 0..6 {
        let p = sys.equation(e);
        assert_eq!(p.len(), 4);
        assert_eq!(p.variables().len(), 2);
        assert_eq!(p.degree(), 2);
    }
}

#[test]
fn sampled_entries_in_range_with_small_mean() {
    let g = topology_factory(&Topology::Cycle(3)).unwrap();
    let mut values = Vec::new();
    for seed in 0..84 {
        let game = sample_generic_payoffs(&g, &[1; 3], UniformPayoffs::PAPER_RANGE, seed).unwrap();
        for p in 0..3 {
            values.extend(game.payoff_table(p).values().iter().map(|v| {
                use num_traits::ToPrimitive;
                v.to_f64().unwrap()
            }));
        }
    }
    assert!(values.len() >= 1000);
    assert!(values.iter().all(|v| (-5.0..=5.0).contains(v)));
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    assert!(mean.abs() < 0.5, "mean {mean}");
}
