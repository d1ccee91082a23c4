mod common;

use cycle_factors::cycles::{enumerate_cycles, expected_cycle_count};
use cycle_factors::generators::{complete_multipartite, ConstructionSpec};
use cycle_factors::lab::degree_bound_feasibility;
use cycle_factors::oracle::{max_disjoint_cycles_exact, OracleConfig};
use cycle_factors::packer::{even_greedy_pack, split_high_degree, sublinear_pack, PackerConfig};
use cycle_factors::stability::{check_partition, find_stable_partition, Clause, SearchMode, SearchOptions, StabilityParams};
use cycle_factors::{perturb, verify_packing, Graph, Rational};

fn oracle_size(g: &Graph, ell: usize) -> usize {
    max_disjoint_cycles_exact(g, ell, None, &OracleConfig::default()).unwrap().packing.len()
}

#[test]
fn five_cycles_in_k5() {
    assert_eq!(enumerate_cycles(&Graph::complete(5), 5, None).cycles.len(), 12);
    assert_eq!(common::count_cycles(&Graph::complete(5), 5), 12);
}

#[test]
fn two_triangles_in_k6() {
    assert_eq!(oracle_size(&Graph::complete(6), 3), 2);
    assert_eq!(common::brute_max_packing(&Graph::complete(6), 3), 2);
}

#[test]
fn expected_four_cycles_in_g30() {
    let exact = 27405.0 * 3.0 * 1e-4;
    assert!((expected_cycle_count(30, 4, 0.1f64) - exact).abs() < 1e-9);
    assert!((exact - 8.2215f64).abs() < 1e-12);
}

#[test]
fn complete_graph_fails_the_edge_clause() {
    let params = StabilityParams::new(Rational::new(1, 3), Rational::new(1, 100)).unwrap();
    for n in (12..=30).step_by(3) {
        let a: Vec<usize> = (0..n / 3).collect();
        let cert = check_partition(&Graph::complete(n), &a, &params).unwrap();
        assert!(cert.failed().contains(&Clause::BEdges), "n = {n}");
        let b = 2 * n / 3;
        assert!((b * (b - 1) / 2) as f64 > 0.01 * (n * n) as f64);
    }
}

#[test]
fn stability_reference_cases() {
    let opts = SearchOptions::default();
    let k412 = complete_multipartite(&[4, 12]).unwrap();
    let params = StabilityParams::new(Rational::new(1, 4), Rational::new(1, 20)).unwrap();
    let found = find_stable_partition(&k412, &params, SearchMode::Exhaustive, &opts).unwrap();
    assert_eq!(found.certificate.unwrap().a, vec![0, 1, 2, 3]);

    let k16 = Graph::complete(16);
    let params = StabilityParams::new(Rational::new(1, 3), Rational::new(1, 100)).unwrap();
    let none = find_stable_partition(&k16, &params, SearchMode::Exhaustive, &opts).unwrap();
    assert!(none.certificate.is_none() && none.conclusive);

    let params = StabilityParams::new(Rational::new(1, 3), Rational::new(1, 20)).unwrap();
    let big = complete_multipartite(&[20, 40]).unwrap();
    let heur = find_stable_partition(&big, &params, SearchMode::Heuristic, &opts).unwrap();
    assert_eq!(heur.certificate.unwrap().a, (0..20).collect::<Vec<_>>());
    let scaled = complete_multipartite(&[5, 10]).unwrap();
    let ex = find_stable_partition(&scaled, &params, SearchMode::Exhaustive, &opts).unwrap();
    assert_eq!(ex.certificate.unwrap().a, (0..5).collect::<Vec<_>>());
}

#[test]
fn high_degree_split_of_k20_40() {
    let g = complete_multipartite(&[20, 40]).unwrap();
    let split = split_high_degree(&g, &PackerConfig::asymptotic(3));
    assert_eq!(split.threshold, 60.0 / 64.0);
    assert_eq!(split.high.len(), 60);
    assert!(split.rest.is_empty());
}

#[test]
fn even_greedy_on_complete_bipartite_hosts() {
    let k10 = complete_multipartite(&[10, 10]).unwrap();
    let out = even_greedy_pack(&k10, 4, 5, &PackerConfig::calibrated(4)).unwrap();
    assert_eq!(out.achieved(), 5);
    assert!(verify_packing(&k10, &out.packing).is_valid());
    assert_eq!(oracle_size(&k10, 4), 5);

    let small = complete_multipartite(&[4, 8]).unwrap();
    assert_eq!(oracle_size(&small, 4), 2);
    let big = complete_multipartite(&[20, 40]).unwrap();
    let out = even_greedy_pack(&big, 4, 10, &PackerConfig::calibrated(4)).unwrap();
    assert_eq!(out.achieved(), 10);
    assert!(verify_packing(&big, &out.packing).is_valid());
}

#[test]
fn complete_host_packs_at_any_probability() {
    let k12 = Graph::complete(12);
    assert_eq!(oracle_size(&k12, 3), 4);
    for (i, p) in [0.0, 0.3, 1.0].into_iter().enumerate() {
        let pg = perturb(&k12, p, i as u64).unwrap();
        let out = sublinear_pack(&pg, 4, &PackerConfig::calibrated(3)).unwrap();
        assert_eq!(out.achieved(), 4, "p = {p}");
        assert!(verify_packing(pg.union(), &out.packing).is_valid());
    }
}

#[test]
fn k6_triangle_factor_is_forced_by_degree() {
    let note = degree_bound_feasibility(&ConstructionSpec::Complete { n: 6 }, 3, 0).unwrap();
    assert_eq!(note.min_degree, 5);
    assert_eq!(note.degree_bound.to_f64(), 4.0);
    assert!(note.factor_guaranteed);
    assert_eq!(oracle_size(&Graph::complete(6), 3), 2);
}

#[test]
fn bipartite_hosts_have_no_odd_cycles() {
    let k24 = complete_multipartite(&[2, 4]).unwrap();
    assert!(enumerate_cycles(&k24, 3, None).cycles.is_empty());
    assert_eq!(oracle_size(&k24, 3), 0);
}
