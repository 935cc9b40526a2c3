use std::fs;

use cascade_duel::cascade::{ThresholdMode, Verdict};
use cascade_duel::graph::{gen_er, parse_edgelist, save_edgelist, Graph};
use cascade_duel::runner::{
    derive_graph, run_experiment, run_on_graph, ExperimentConfig, GenKind, GraphSource,
    AGGREGATE_FILE, ALPHA_FILE, LEVELS_FILE, SUMMARY_FILE,
};
use cascade_duel::seeding::Method;
use cascade_duel::Player;

fn sample() -> Graph {
    let text = "1 2\n2 3\n2 4\n3 4\n3 7\n4 10\n7 10\n5 7\n5 6\n7 8\n7 9\n";
    parse_edgelist(text.as_bytes(), false).unwrap().0
}

#[test]
fn worked_example_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sample.txt");
    save_edgelist(&sample(), &path).unwrap();
    let cfg = ExperimentConfig {
        graph: GraphSource::file(&path),
        fixed_seeds: Some([2, 5]),
        replications: 1,
        out_dir: Some(dir.path().join("out")),
        ..Default::default()
    };
    let r = run_experiment(&cfg).unwrap();
    assert_eq!(r.replications[0].verdict, Verdict::Tie);
    assert_eq!(r.replications[0].supporters, [5, 5]);
    let alpha = fs::read_to_string(dir.path().join("out").join(ALPHA_FILE)).unwrap();
    assert!(alpha.lines().any(|l| l == "0,1,3,0.444444444444"));
    assert!(alpha.lines().any(|l| l == "0,2,4,0.0555555555556"));
}

fn er_config(seed: u64, out: &std::path::Path) -> ExperimentConfig {
    ExperimentConfig {
        graph: GraphSource::generated(GenKind::Er, 400, 6.0),
        methods: [Method::Rd, Method::Dc],
        theta: ThresholdMode::Uniform,
        replications: 5,
        rng_seed: seed,
        out_dir: Some(out.to_path_buf()),
        ..Default::default()
    }
}

#[test]
fn identical_configs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_experiment(&er_config(11, &a)).unwrap();
    run_experiment(&er_config(11, &b)).unwrap();
    for f in [LEVELS_FILE, SUMMARY_FILE, ALPHA_FILE, AGGREGATE_FILE] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    let c = dir.path().join("c");
    run_experiment(&er_config(12, &c)).unwrap();
    assert_ne!(
        fs::read(a.join(SUMMARY_FILE)).unwrap(),
        fs::read(c.join(SUMMARY_FILE)).unwrap()
    );
}

#[test]
fn aggregate_matches_naive_means() {
    let g = gen_er(300, 5.0, 2).unwrap();
    let cfg = ExperimentConfig {
        methods: [Method::Ec, Method::Rd],
        theta: ThresholdMode::Uniform,
        replications: 7,
        rng_seed: 5,
        ..Default::default()
    };
    let r = run_on_graph(&g, &cfg).unwrap();
    let depth = r.aggregate.iter().map(|a| a.level).max().unwrap();
    for row in &r.aggregate {
        let i = row.info.index();
        let values: Vec<f64> = r
            .replications
            .iter()
            .map(|rep| {
                let m = rep
                    .per_level
                    .get(row.level)
                    .unwrap_or_else(|| rep.per_level.last().unwrap());
                m.supporters[i]
            })
            .collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let var =
            values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
        assert!((row.supporters.mean - mean).abs() < 1e-12);
        assert!((row.supporters.var.unwrap() - var).abs() < 1e-12);
        assert!(row.supporters.var.unwrap() >= 0.0);
    }
    assert_eq!(r.aggregate.len(), 2 * (depth + 1));
    let csv = cascade_duel::runner::aggregate_rows(&cfg, 7, &r.aggregate);
    assert_eq!(csv.len(), r.aggregate.len());
}

#[test]
fn levels_csv_is_sorted() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&er_config(3, dir.path())).unwrap();
    let text = fs::read_to_string(dir.path().join(LEVELS_FILE)).unwrap();
    let keys: Vec<(usize, u8, usize)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
            )
        })
        .collect();
    assert!(!keys.is_empty());
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn budget_limits_seed_degree() {
    let g = gen_er(500, 8.0, 6).unwrap();
    let cfg = ExperimentConfig {
        enforce_budget: true,
        budget: 1.0,
        replications: 2,
        ..Default::default()
    };
    let r = run_on_graph(&g, &cfg).unwrap();
    let median = cascade_duel::seeding::median_degree(&g).unwrap();
    for rep in &r.replications {
        for info in Player::BOTH {
            let v = g.node_of(rep.seeds[info.index()][0]).unwrap();
            assert!(g.degree(v) as f64 <= median + 1e-9);
        }
    }
    let open = run_on_graph(
        &g,
        &ExperimentConfig {
            replications: 1,
            ..Default::default()
        },
    )
    .unwrap();
    let hub = g.node_of(open.replications[0].seeds[0][0]).unwrap();
    assert_eq!(g.degree(hub), g.degrees().into_iter().max().unwrap());
}

#[test]
fn zero_threshold_supports_every_reached_node() {
    // with θ ≡ 0 every node a connected graph reaches ends up supporting one
    // side, whatever the topology
    let g = gen_er(400, 8.0, 1).unwrap();
    let g = g.induced(&g.largest_component()).unwrap();
    let tree = derive_graph(Some(g.clone()), Some(GenKind::Tree), None, None, 1).unwrap();
    for graph in [&g, &tree] {
        let r = run_on_graph(
            graph,
            &ExperimentConfig {
                replications: 3,
                ..Default::default()
            },
        )
        .unwrap();
        for rep in &r.replications {
            assert_eq!(rep.supporters[0] + rep.supporters[1], graph.node_count());
        }
    }
}

#[test]
fn multi_seed_players_do_not_share() {
    let g = gen_er(300, 6.0, 8).unwrap();
    let cfg = ExperimentConfig {
        seeds_per_player: 3,
        replications: 2,
        ..Default::default()
    };
    let r = run_on_graph(&g, &cfg).unwrap();
    for rep in &r.replications {
        assert_eq!(rep.seeds[0].len(), 3);
        assert!(rep.seeds[0].iter().all(|s| !rep.seeds[1].contains(s)));
    }
}

#[test]
fn strict_forwarding_never_spreads_further() {
    let g = gen_er(300, 6.0, 8).unwrap();
    let base = ExperimentConfig {
        theta: ThresholdMode::Constant(0.05),
        replications: 2,
        ..Default::default()
    };
    let loose = run_on_graph(&g, &base).unwrap();
    let strict = run_on_graph(
        &g,
        &ExperimentConfig {
            strict_forwarding: true,
            ..base.clone()
        },
    )
    .unwrap();
    for (a, b) in loose.replications.iter().zip(&strict.replications) {
        assert!(b.informed[0] <= a.informed[0] && b.informed[1] <= a.informed[1]);
    }
}
