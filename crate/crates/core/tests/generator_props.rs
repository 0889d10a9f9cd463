use std::collections::BTreeSet;

use curvbridge::generators::{generate, ModelSpec};
use curvbridge::graph::Graph;

fn edge_set(g: &Graph) -> BTreeSet<(usize, usize)> {
    g.edges().map(|e| (e.u, e.v)).collect()
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

#[test]
fn deterministic_families_follow_their_rules() {
    for (lx, ly) in [(1, 1), (1, 5), (4, 3), (40, 40)] {
        let g = generate(&ModelSpec::Grid { lx, ly }, 0).unwrap();
        let mut want = BTreeSet::new();
        for x in 0..lx {
            for y in 0..ly {
                if x + 1 < lx {
                    want.insert(ordered(x * ly + y, (x + 1) * ly + y));
                }
                if y + 1 < ly {
                    want.insert(ordered(x * ly + y, x * ly + y + 1));
                }
            }
        }
        assert_eq!(g.vertex_count(), lx * ly);
        assert_eq!(edge_set(&g), want);
    }
    for (lx, ly) in [(3, 3), (3, 5), (32, 32)] {
        let g = generate(&ModelSpec::Torus { lx, ly }, 0).unwrap();
        let mut want = BTreeSet::new();
        for x in 0..lx {
            for y in 0..ly {
                want.insert(ordered(x * ly + y, ((x + 1) % lx) * ly + y));
                want.insert(ordered(x * ly + y, x * ly + (y + 1) % ly));
            }
        }
        assert_eq!(edge_set(&g), want);
        assert!((0..g.vertex_count()).all(|v| g.deg(v) == 4));
    }
    for n in [3, 4, 600] {
        let g = generate(&ModelSpec::Cycle { n }, 0).unwrap();
        let want: BTreeSet<_> = (0..n).map(|i| ordered(i, (i + 1) % n)).collect();
        assert_eq!(edge_set(&g), want);
    }
    for (d, h) in [(2, 1), (2, 4), (3, 3)] {
        let g = generate(&ModelSpec::DaryTree { d, h }, 0).unwrap();
        let size: usize = (0..=h).map(|k| d.pow(k as u32)).sum();
        let want: BTreeSet<_> = (1..size).map(|v| ((v - 1) / d, v)).collect();
        assert_eq!(g.vertex_count(), size);
        assert_eq!(edge_set(&g), want);
    }
    for n in [1, 2, 120] {
        let g = generate(&ModelSpec::Complete { n }, 0).unwrap();
        assert_eq!(g.edge_count(), n * (n - 1) / 2);
        assert!((0..n).all(|v| g.deg(v) == n - 1));
    }
}

#[test]
fn regular_graphs_have_uniform_degree() {
    for (n, d) in [(10, 3), (50, 4), (101, 6), (200, 10)] {
        for seed in 0..5 {
            let g = generate(&ModelSpec::Regular { n, d }, seed).unwrap();
            assert!((0..n).all(|v| g.deg(v) == d), "n={n} d={d} seed={seed}");
        }
    }
}

#[test]
fn erdos_renyi_mean_degree_is_within_five_standard_errors() {
    let (n, p) = (300usize, 0.02f64);
    let seeds = 30;
    let mean: f64 = (0..seeds)
        .map(|s| 2.0 * generate(&ModelSpec::ErdosRenyi { n, p }, s).unwrap().edge_count() as f64 / n as f64)
        .sum::<f64>()
        / seeds as f64;
    let pairs = (n * (n - 1) / 2) as f64;
    let var_one = 4.0 * pairs * p * (1.0 - p) / (n * n) as f64;
    let se = (var_one / seeds as f64).sqrt();
    let expected = (n - 1) as f64 * p;
    assert!((mean - expected).abs() <= 5.0 * se, "mean {mean}, expected {expected}, se {se}");
}

#[test]
fn barabasi_albert_edge_count_is_in_range() {
    for (n, m) in [(100, 1), (100, 2), (800, 2), (500, 5)] {
        for seed in 0..5 {
            let g = generate(&ModelSpec::BarabasiAlbert { n, m }, seed).unwrap();
            let lo = m * (n - m);
            let hi = lo + m * (m - 1) / 2;
            assert!((lo..=hi).contains(&g.edge_count()), "n={n} m={m}: {}", g.edge_count());
            assert!(g.is_connected());
        }
    }
}

#[test]
fn watts_strogatz_keeps_edge_count() {
    for beta in [0.0, 0.05, 0.5, 1.0] {
        let g = generate(&ModelSpec::WattsStrogatz { n: 800, k: 10, beta }, 3).unwrap();
        assert_eq!(g.edge_count(), 4000);
    }
    let lattice = generate(&ModelSpec::WattsStrogatz { n: 20, k: 4, beta: 0.0 }, 0).unwrap();
    assert!((0..20).all(|v| lattice.has_edge(v, (v + 1) % 20) && lattice.has_edge(v, (v + 2) % 20)));
}

#[test]
fn geometric_edge_count_matches_expectation() {
    // Positions are not exposed, so compare against the closed-form expected
    // edge count instead: p = pi r^2 - 8 r^3 / 3 + r^4 / 2 in the unit square.
    let (n, r) = (800usize, 0.056f64);
    let p = std::f64::consts::PI * r * r - 8.0 * r.powi(3) / 3.0 + r.powi(4) / 2.0;
    let expected = p * (n * (n - 1) / 2) as f64;
    let mean: f64 = (0..10)
        .map(|s| generate(&ModelSpec::Geometric { n, r, torus: false }, s).unwrap().edge_count() as f64)
        .sum::<f64>()
        / 10.0;
    assert!((mean - expected).abs() / expected < 0.05, "mean {mean}, expected {expected}");
}

#[test]
fn sbm_blocks_are_denser_inside() {
    let g = generate(&ModelSpec::StochasticBlock { sizes: vec![400, 400], p_in: 0.02, p_out: 0.002 }, 1).unwrap();
    let (inside, across): (Vec<_>, Vec<_>) = g.edges().partition(|e| (e.u < 400) == (e.v < 400));
    let e_in = 2.0 * 0.02 * (400.0 * 399.0 / 2.0);
    let e_out = 0.002 * 400.0 * 400.0;
    assert!((inside.len() as f64 - e_in).abs() < 5.0 * e_in.sqrt());
    assert!((across.len() as f64 - e_out).abs() < 5.0 * e_out.sqrt());
}

#[test]
fn invalid_parameters_are_rejected() {
    let bad = [
        ModelSpec::ErdosRenyi { n: 10, p: 1.5 },
        ModelSpec::BarabasiAlbert { n: 3, m: 3 },
        ModelSpec::WattsStrogatz { n: 10, k: 3, beta: 0.1 },
        ModelSpec::Regular { n: 5, d: 3 },
        ModelSpec::Torus { lx: 2, ly: 5 },
        ModelSpec::Cycle { n: 2 },
    ];
    for spec in bad {
        assert!(generate(&spec, 0).is_err(), "{spec:?}");
    }
}
