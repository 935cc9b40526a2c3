use num_rational::Ratio;
use proptest::prelude::*;

use cascade_duel::cascade::{
    classify, propagate_influence_with, Forwarding, InfluenceField, Thresholds,
};
use cascade_duel::game::{best_response, margin_verdict, positions, Basis, ResponseSet};
use cascade_duel::graph::{
    compute_stats, gen_er, gen_regular, parse_edgelist, write_edgelist, Graph,
};
use cascade_duel::meanfield::{
    integrate, integrate_with, CompartmentState, IntegrateOptions, RateParams,
};
use cascade_duel::seeding::{
    degree_centrality, eigen_residual, eigenvector_centrality, rank_degree_sample,
    rayleigh_quotient, RankDegreeParams, Selection, EC_MAX_ITER, EC_TOLERANCE,
};
use cascade_duel::Player;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 1..(3 * n))
            .prop_map(move |edges| Graph::from_edges(n, edges).unwrap())
    })
}

/// Triangles and diameter by brute force.
fn naive_stats(g: &Graph) -> (u64, f64, usize) {
    let n = g.node_count();
    let mut tri = 0;
    let mut clustering = 0.0;
    for v in 0..n {
        let nb = g.neighbors(v);
        let mut links = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if g.has_edge(a, b) {
                    links += 1;
                }
            }
        }
        tri += links;
        let d = nb.len();
        if d >= 2 {
            clustering += 2.0 * links as f64 / (d * (d - 1)) as f64;
        }
    }
    let comp = g.largest_component();
    let inf = usize::MAX / 4;
    let mut dist = vec![vec![inf; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = 0;
        for &u in g.neighbors(v) {
            row[u] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if dist[i][k] + dist[k][j] < dist[i][j] {
                    dist[i][j] = dist[i][k] + dist[k][j];
                }
            }
        }
    }
    let diameter = comp
        .iter()
        .flat_map(|&a| comp.iter().map(move |&b| (a, b)))
        .map(|(a, b)| dist[a][b])
        .max()
        .unwrap_or(0);
    (tri / 3, clustering / n as f64, diameter)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stats_match_brute_force(g in arb_graph(25)) {
        let s = compute_stats(&g).unwrap();
        let (tri, clustering, diameter) = naive_stats(&g);
        prop_assert_eq!(s.triangles, tri);
        prop_assert!((s.avg_clustering - clustering).abs() < 1e-12);
        prop_assert_eq!(s.diameter, diameter);
    }

    #[test]
    fn edge_list_roundtrip(g in arb_graph(30)) {
        // an edge list cannot describe a graph without edges
        prop_assume!(g.edge_count() > 0);
        let mut buf = Vec::new();
        write_edgelist(&g, &mut buf).unwrap();
        let (back, _) = parse_edgelist(buf.as_slice(), false).unwrap();
        let edges = |h: &Graph| -> Vec<(u64, u64)> { h.edges().map(|(u, v)| (h.label(u), h.label(v))).collect() };
        prop_assert_eq!(edges(&back), edges(&g));
    }

    #[test]
    fn float_influence_tracks_exact(g in arb_graph(18), s1 in 0usize..18, s2 in 0usize..18) {
        let n = g.node_count();
        let (s1, s2) = (s1 % n, s2 % n);
        prop_assume!(s1 != s2);
        let exact: InfluenceField<Ratio<i128>> =
            propagate_influence_with(&g, &[s1], &[s2], Forwarding::All).unwrap();
        let float: InfluenceField<f64> = propagate_influence_with(&g, &[s1], &[s2], Forwarding::All).unwrap();
        for info in Player::BOTH {
            for v in 0..n {
                let e = exact.alpha(info, v);
                let want = *e.numer() as f64 / *e.denom() as f64;
                let got = *float.alpha(info, v);
                prop_assert!((got - want).abs() < 1e-12);
                prop_assert!((0.0..=1.0 + 1e-12).contains(&got));
            }
        }
    }

    #[test]
    fn classification_partitions_nodes(g in arb_graph(30), s1 in 0usize..30, s2 in 0usize..30, theta in 0.0..1.0f64, tie in any::<u64>()) {
        let n = g.node_count();
        let (s1, s2) = (s1 % n, s2 % n);
        prop_assume!(s1 != s2);
        let f: InfluenceField<f64> = propagate_influence_with(&g, &[s1], &[s2], Forwarding::All).unwrap();
        let out = classify(&f, &Thresholds::constant(n, theta).unwrap(), tie);
        let mut seen = vec![0u8; n];
        for v in out.supporters_of(Player::One).iter().chain(out.supporters_of(Player::Two)).chain(&out.uninformed) {
            seen[*v] += 1;
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        prop_assert!(out.supporters_of(Player::One).contains(&s1));
        prop_assert!(out.supporters_of(Player::Two).contains(&s2));
        let last = out.per_level.last().unwrap();
        for info in Player::BOTH {
            prop_assert_eq!(last.supporters[info.index()], out.supporter_fraction(info, n));
            prop_assert_eq!(last.influenced[info.index()], out.informed_fraction(info, n));
        }
        for pair in out.per_level.windows(2) {
            for i in 0..2 {
                prop_assert!(pair[0].influenced[i] <= pair[1].influenced[i]);
                prop_assert!(pair[0].supporters[i] <= pair[1].supporters[i]);
            }
        }
    }

    #[test]
    fn degree_centrality_leads_with_max_degree(g in arb_graph(40)) {
        let top = degree_centrality(&g).unwrap().top().unwrap();
        let max = g.degrees().into_iter().max().unwrap();
        prop_assert_eq!(g.degree(top), max);
        prop_assert!((0..top).all(|v| g.degree(v) < max));
    }

    #[test]
    fn rank_degree_respects_target(seed in any::<u64>(), frac in 0.05..1.0f64, rho in 0.1..1.0f64) {
        let g = gen_er(120, 5.0, 4).unwrap();
        let p = RankDegreeParams { initial_seeds: 2, selection: Selection::Fraction(rho), target_fraction: frac, rng_seed: seed };
        let s = rank_degree_sample(&g, &p).unwrap();
        prop_assert!(s.nodes.len() <= s.target);
        prop_assert_eq!(s.reached_target, s.nodes.len() == s.target);
        for &(a, b) in &s.edges {
            prop_assert!(g.has_edge(a, b));
        }
        prop_assert!(s.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn meanfield_stays_on_the_simplex(b1 in 0.0..20.0f64, b2 in 0.0..20.0f64, a0 in 0.0..0.4f64, b0 in 0.0..0.4f64) {
        let init = CompartmentState::seeded(a0, b0).unwrap();
        let opts = IntegrateOptions { t_end: 30.0, ..Default::default() };
        integrate_with(&init, &RateParams::new(b1, b2).unwrap(), &opts, |_, s| {
            assert!((s.total() - 1.0).abs() < 1e-9);
            assert!(s.to_array().iter().all(|&x| x >= 0.0));
        }).unwrap();
    }

    #[test]
    fn meanfield_mirror_is_exact(b1 in 0.0..20.0f64, b2 in 0.0..20.0f64, a0 in 0.0..0.01f64, b0 in 0.0..0.01f64) {
        let opts = IntegrateOptions { t_end: 20.0, stop_at_steady: false, ..Default::default() };
        let p = RateParams::new(b1, b2).unwrap();
        let fwd = integrate(&CompartmentState::seeded(a0, b0).unwrap(), &p, &opts).unwrap();
        let rev = integrate(&CompartmentState::seeded(b0, a0).unwrap(), &p.mirrored(), &opts).unwrap();
        for (x, y) in fwd.states.iter().zip(&rev.states) {
            prop_assert_eq!(x.mirrored(), *y);
        }
    }

    #[test]
    fn positions_mirror(f1 in 0.0..=1.0f64, f2 in 0.0..=1.0f64) {
        let p = positions(f1, f2, Basis::Informed).unwrap();
        let q = positions(f2, f1, Basis::Informed).unwrap();
        prop_assert!((p.position2 - (1.0 - q.position1)).abs() < 1e-15);
        prop_assert!(p.position1 <= 0.5 && 0.5 <= p.position2);
    }

    #[test]
    fn centre_is_always_a_best_response(x in 0.5..=1.0f64) {
        prop_assert!(best_response(Player::One, x).unwrap().response.contains(0.5));
        prop_assert!(best_response(Player::Two, 1.0 - x).unwrap().response.contains(0.5));
        let r = best_response(Player::One, x).unwrap().response;
        prop_assert!(!matches!(r, ResponseSet::Undefined));
    }

    #[test]
    fn margin_verdict_mirrors(r1 in 0.0..=1.0f64, r2 in 0.0..=1.0f64, m in 0.001..0.5f64) {
        let a = margin_verdict(r1, r2, m).unwrap().verdict;
        let b = margin_verdict(r2, r1, m).unwrap().verdict;
        prop_assert_eq!(a.mirrored(), b);
    }
}

#[test]
fn eigenvector_satisfies_eigen_equation() {
    for seed in 0..10 {
        let g = gen_er(150, 6.0, seed).unwrap();
        let g = g.induced(&g.largest_component()).unwrap();
        let ec = eigenvector_centrality(&g, EC_TOLERANCE, EC_MAX_ITER).unwrap();
        let lambda = rayleigh_quotient(&g, &ec.score_of);
        assert!(eigen_residual(&g, &ec.score_of, lambda) < 1e-6 * lambda.max(1.0));
    }
}

#[test]
fn eigenvector_handles_bipartite_graphs() {
    // even cycle and complete bipartite graph: plain power iteration oscillates
    let cycle = Graph::from_edges(8, (0..8).map(|v| (v, (v + 1) % 8))).unwrap();
    let ec = eigenvector_centrality(&cycle, EC_TOLERANCE, EC_MAX_ITER).unwrap();
    assert!(ec.score_of.iter().all(|&x| (x - 1.0).abs() < 1e-9));
    let kb = Graph::from_edges(7, (0..3).flat_map(|a| (3..7).map(move |b| (a, b)))).unwrap();
    let ec = eigenvector_centrality(&kb, EC_TOLERANCE, EC_MAX_ITER).unwrap();
    assert_eq!(ec.top(), Some(0));
    assert!((ec.score_of[3] - (3.0f64 / 4.0).sqrt()).abs() < 1e-6);
}

#[test]
fn regular_graphs_are_simple_and_regular() {
    for (n, d) in [(50, 4), (51, 6), (200, 13 * 2)] {
        let g = gen_regular(n, d, 1).unwrap();
        assert!(g.degrees().iter().all(|&x| x == d));
        assert_eq!(g.edge_count(), n * d / 2);
    }
}

#[test]
fn settles_before_the_horizon_away_from_criticality() {
    let init = CompartmentState::standard();
    let rates = [0.2, 0.5, 2.0, 5.0, 10.0, 15.0, 20.0];
    for &b1 in &rates {
        for &b2 in &rates {
            let tr = integrate(
                &init,
                &RateParams::new(b1, b2).unwrap(),
                &IntegrateOptions::default(),
            )
            .unwrap();
            assert!(tr.steady_state_reached, "({b1}, {b2})");
        }
    }
}

#[test]
fn near_critical_rates_settle_slowly() {
    // just below the spreading threshold the active compartments decay
    // very slowly; the default horizon is not enough
    let tr = integrate(
        &CompartmentState::standard(),
        &RateParams::new(1.0, 0.2).unwrap(),
        &IntegrateOptions::default(),
    )
    .unwrap();
    assert!(!tr.steady_state_reached);
    let longer = IntegrateOptions {
        t_end: 400.0,
        ..Default::default()
    };
    let tr = integrate(
        &CompartmentState::standard(),
        &RateParams::new(1.0, 0.2).unwrap(),
        &longer,
    )
    .unwrap();
    let t = tr.steady_time.unwrap();
    assert!(t > 200.0 && t < 300.0, "{t}");
}
