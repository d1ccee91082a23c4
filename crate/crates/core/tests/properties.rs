mod common;

use cycle_factors::cycles::enumerate_cycles;
use cycle_factors::generators::{min_degree_random, perturb, MinDegreeOptions, RoundSlice};
use cycle_factors::io::{read_graph, read_packing, write_graph, write_packing};
use cycle_factors::lab::wilson_interval;
use cycle_factors::layered::{layered_factor, FactorMode, LayeredError, LayeredInstance, LayeredOptions};
use cycle_factors::oracle::{max_disjoint_cycles_exact, OracleConfig};
use cycle_factors::packer::{max_cut_bipartition, sublinear_pack, PackerConfig};
use cycle_factors::stability::{check_partition, find_stable_partition, SearchMode, SearchOptions, StabilityParams};
use cycle_factors::{verify_packing, Graph, Rational};
use proptest::prelude::*;

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.55), n * (n - 1) / 2)
            .prop_map(move |bits| common::graph_from_bits(n, &bits))
    })
}

/// A graph together with a cycle length that fits in it.
fn graph_and_ell(max_n: usize, max_ell: usize) -> impl Strategy<Value = (Graph, usize)> {
    small_graph(max_n).prop_flat_map(move |g| {
        let top = g.n().min(max_ell);
        (Just(g), 3..=top)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complete_graph_cycle_counts((n, ell) in (3usize..=8).prop_flat_map(|n| (Just(n), 3..=n))) {
        let found = enumerate_cycles(&Graph::complete(n), ell, None).cycles.len();
        prop_assert_eq!(found, common::complete_graph_cycles(n, ell));
    }

    #[test]
    fn enumeration_matches_ordering_count((g, ell) in graph_and_ell(7, 6)) {
        let e = enumerate_cycles(&g, ell, None);
        prop_assert_eq!(e.cycles.len(), common::count_cycles(&g, ell));
        for c in &e.cycles {
            prop_assert!(c.is_cycle_of(&g));
            prop_assert_eq!(c.canonical(), c.clone());
        }
    }

    #[test]
    fn oracle_agrees_with_brute_force((g, ell) in graph_and_ell(7, 7)) {
        let res = max_disjoint_cycles_exact(&g, ell, None, &OracleConfig::default()).unwrap();
        prop_assert!(res.proven_optimal);
        prop_assert!(verify_packing(&g, &res.packing).is_valid());
        prop_assert_eq!(res.packing.len(), common::brute_max_packing(&g, ell));
    }

    #[test]
    fn oracle_is_monotone_under_edge_addition((g, ell) in graph_and_ell(8, 5), pick in any::<u64>()) {
        let n = g.n();
        let missing: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| !g.has_edge(u, v)).collect();
        prop_assume!(!missing.is_empty());
        let extra = missing[(pick % missing.len() as u64) as usize];
        let bigger = Graph::from_edges(n, g.edges().chain([extra])).unwrap();
        let cfg = OracleConfig::default();
        let before = max_disjoint_cycles_exact(&g, ell, None, &cfg).unwrap().packing.len();
        let after = max_disjoint_cycles_exact(&bigger, ell, None, &cfg).unwrap().packing.len();
        prop_assert!(after >= before);
        prop_assert!(after <= before + 1);
    }

    #[test]
    fn max_cut_keeps_half_of_every_degree(n in 10usize..80, m in 2usize..8, seed in any::<u64>()) {
        let g = min_degree_random(n, m, seed, &MinDegreeOptions::default()).unwrap();
        let cut = max_cut_bipartition(&g, seed);
        for v in 0..n {
            prop_assert!(cut.bipartite.degree(v) >= g.degree(v).div_ceil(2));
            for &w in cut.bipartite.neighbors(v) {
                prop_assert!(cut.in_a[v] != cut.in_a[w]);
                prop_assert!(g.has_edge(v, w));
            }
        }
    }

    #[test]
    fn perturbation_is_deterministic_and_sliced(n in 2usize..40, p in 0.0f64..1.0, seed in any::<u64>(), cut in 0.0f64..1.0) {
        let g = Graph::cycle(n.max(3));
        let a = perturb(&g, p, seed).unwrap();
        let b = perturb(&g, p, seed).unwrap();
        prop_assert_eq!(a.union(), b.union());
        prop_assert_eq!(a.random_part(), b.random_part());
        let mid = cut * p;
        let lo = RoundSlice { lo: 0.0, hi: mid };
        let hi = RoundSlice { lo: mid, hi: p };
        for (u, v) in a.random_part().edges() {
            prop_assert!(a.round_edge(u, v, lo) != a.round_edge(u, v, hi));
        }
        for (u, v) in g.edges() {
            prop_assert!(a.union().has_edge(u, v));
        }
    }

    #[test]
    fn nested_random_graphs_grow_with_p(n in 5usize..40, p in 0.0f64..0.5, extra in 0.0f64..0.5, seed in any::<u64>()) {
        let g = Graph::empty(n);
        let small = perturb(&g, p, seed).unwrap();
        let large = perturb(&g, p + extra, seed).unwrap();
        for (u, v) in small.random_part().edges() {
            prop_assert!(large.random_part().has_edge(u, v));
        }
    }

    #[test]
    fn packer_output_is_valid_and_never_beats_the_oracle(
        n in 8usize..14, m in 2usize..5, p in 0.0f64..0.6, seed in any::<u64>(), ell in 3usize..=4,
    ) {
        let g = min_degree_random(n, m, seed, &MinDegreeOptions::default()).unwrap();
        let pg = perturb(&g, p, seed ^ 1).unwrap();
        let cfg = PackerConfig { seed, ..PackerConfig::calibrated(ell) };
        let target = n / ell;
        let out = sublinear_pack(&pg, target, &cfg).unwrap();
        prop_assert!(verify_packing(pg.union(), &out.packing).is_valid());
        prop_assert!(out.achieved() <= target);
        let best = max_disjoint_cycles_exact(pg.union(), ell, None, &OracleConfig::default()).unwrap();
        prop_assert!(out.achieved() <= best.packing.len());
    }

    #[test]
    fn wilson_interval_contains_the_frequency(trials in 1usize..2000, frac in 0.0f64..=1.0) {
        let s = ((trials as f64) * frac).round() as usize;
        let (lo, hi) = wilson_interval(s, trials, 1.96);
        let f = s as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= f + 1e-12 && f <= hi + 1e-12 && hi <= 1.0);
        if s == 0 { prop_assert_eq!(lo, 0.0); }
        if s == trials { prop_assert_eq!(hi, 1.0); }
    }

    #[test]
    fn graph_text_round_trip(g in small_graph(12), ell in proptest::option::of(3usize..9)) {
        let text = write_graph(&g, ell, &["a comment".to_string()]);
        let (back, back_ell) = read_graph(&text).unwrap();
        prop_assert_eq!(back, g);
        prop_assert_eq!(back_ell, ell);
    }

    #[test]
    fn packing_text_round_trip((g, ell) in graph_and_ell(9, 4)) {
        let res = max_disjoint_cycles_exact(&g, ell, None, &OracleConfig::default()).unwrap();
        let text = write_packing(&res.packing, &[]);
        prop_assert_eq!(read_packing(&text, ell).unwrap(), res.packing);
    }

    #[test]
    fn layered_text_round_trip(seed in any::<u64>()) {
        let inst = common::random_layered(seed);
        let back = LayeredInstance::from_text(&inst.to_text(&["x".to_string()])).unwrap();
        prop_assert_eq!(back.sizes(), inst.sizes());
        prop_assert_eq!(back.ell(), inst.ell());
        prop_assert_eq!(back.graph(), inst.graph());
    }

    #[test]
    fn layered_answers_are_valid_factors(seed in any::<u64>()) {
        let inst = common::random_layered(seed);
        let truth = common::brute_has_factor(inst.graph(), inst.ell());
        let exact = layered_factor(&inst, FactorMode::Exact, &LayeredOptions::default());
        match &exact {
            Ok(f) => {
                prop_assert!(verify_packing(inst.graph(), &f.packing).is_valid());
                prop_assert_eq!(f.packing.len() * inst.ell(), inst.total());
            }
            Err(e) => prop_assert!(matches!(e, LayeredError::Infeasible { .. }), "{e}"),
        }
        prop_assert_eq!(exact.is_ok(), truth);
        let opts = LayeredOptions { seed, restarts: 5, ..LayeredOptions::default() };
        if let Ok(f) = layered_factor(&inst, FactorMode::Heuristic, &opts) {
            prop_assert!(truth);
            prop_assert!(verify_packing(inst.graph(), &f.packing).is_valid());
            prop_assert_eq!(f.packing.len() * inst.ell(), inst.total());
        }
    }

    #[test]
    fn stability_searches_are_sound(g in small_graph(10), beta_num in 1i64..6) {
        let params = StabilityParams::new(Rational::new(1, 3), Rational::new(beta_num, 40)).unwrap();
        let opts = SearchOptions::default();
        let ex = find_stable_partition(&g, &params, SearchMode::Exhaustive, &opts).unwrap();
        prop_assert!(ex.conclusive);
        let heur = find_stable_partition(&g, &params, SearchMode::Heuristic, &opts).unwrap();
        for found in [&ex.certificate, &heur.certificate].into_iter().flatten() {
            prop_assert!(found.passes());
            let again = check_partition(&g, &found.a, &params).unwrap();
            prop_assert!(again.passes());
        }
        if heur.certificate.is_some() {
            prop_assert!(ex.certificate.is_some());
        }
    }
}
