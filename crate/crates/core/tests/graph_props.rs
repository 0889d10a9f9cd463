use curvbridge::generators::{generate, ModelSpec};
use curvbridge::graph::{
    bfs_distances, load_edge_list, parse_edge_list, to_edge_list_string, truncated_distances, Graph, LoadOptions,
};
use proptest::prelude::*;

fn model() -> impl Strategy<Value = ModelSpec> {
    prop_oneof![
        (2usize..60, 0.0f64..0.4).prop_map(|(n, p)| ModelSpec::ErdosRenyi { n, p }),
        (3usize..60, 1usize..4).prop_map(|(n, m)| ModelSpec::BarabasiAlbert { n: n.max(m + 1), m }),
        (8usize..60, 1usize..3, 0.0f64..1.0).prop_map(|(n, h, beta)| ModelSpec::WattsStrogatz { n, k: 2 * h, beta }),
        (2usize..60, 0.0f64..0.5, any::<bool>()).prop_map(|(n, r, torus)| ModelSpec::Geometric { n, r, torus }),
        (5usize..40, 1usize..4).prop_map(|(n, d)| ModelSpec::Regular { n: n + (n * d) % 2, d }),
        (5usize..80, 0.6f64..1.5, 0.0f64..0.9).prop_map(|(n, alpha, t)| ModelSpec::Hyperbolic {
            n,
            radius: 2.0 * (n as f64).ln(),
            alpha,
            temperature: t,
        }),
        (1usize..20, 1usize..20, 0.0f64..1.0, 0.0f64..0.3)
            .prop_map(|(a, b, p_in, p_out)| ModelSpec::StochasticBlock { sizes: vec![a, b], p_in, p_out }),
        (3usize..30).prop_map(|n| ModelSpec::Cycle { n }),
        (1usize..8, 1usize..8).prop_map(|(lx, ly)| ModelSpec::Grid { lx, ly }),
        (3usize..8, 3usize..8).prop_map(|(lx, ly)| ModelSpec::Torus { lx, ly }),
        (2usize..4, 1usize..4).prop_map(|(d, h)| ModelSpec::DaryTree { d, h }),
        (1usize..12).prop_map(|n| ModelSpec::Complete { n }),
    ]
}

fn assert_simple(g: &Graph) {
    for u in 0..g.vertex_count() {
        let nb = g.neighbors(u);
        assert!(nb.windows(2).all(|w| w[0] < w[1]), "adjacency of {u} not strictly sorted");
        for &v in nb {
            assert_ne!(u, v);
            assert!(g.neighbors(v).binary_search(&u).is_ok(), "missing reverse of ({u}, {v})");
        }
    }
    assert_eq!((0..g.vertex_count()).map(|u| g.deg(u)).sum::<usize>(), 2 * g.edge_count());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_graphs_are_simple_and_round_trip(spec in model(), seed in any::<u64>()) {
        let g = generate(&spec, seed).unwrap();
        assert_simple(&g);
        let text = to_edge_list_string(&g);
        let back = parse_edge_list(&text).unwrap();
        prop_assert_eq!(&back, &g);
        let loaded = load_edge_list(text.as_bytes(), LoadOptions::default()).unwrap();
        prop_assert!(loaded.is_identity());
    }

    #[test]
    fn generation_is_deterministic(spec in model(), seed in any::<u64>()) {
        prop_assert_eq!(generate(&spec, seed).unwrap(), generate(&spec, seed).unwrap());
    }

    #[test]
    fn truncated_bfs_agrees_with_full_bfs(
        spec in model(),
        seed in any::<u64>(),
        depth in 0u32..5,
        picks in proptest::collection::vec(any::<usize>(), 1..6),
    ) {
        let g = generate(&spec, seed).unwrap();
        let n = g.vertex_count();
        let sources: Vec<usize> = picks.iter().map(|p| p % n).collect();
        let near = truncated_distances(&g, &sources, depth).unwrap();
        for &s in &sources {
            let full = bfs_distances(&g, s);
            for (v, dist) in full.iter().enumerate() {
                match *dist {
                    Some(d) if d <= depth => prop_assert_eq!(near.get(s, v), Some(d)),
                    _ => prop_assert_eq!(near.get(s, v), None),
                }
            }
        }
    }

    #[test]
    fn sparse_ids_are_remapped_in_order(edges in proptest::collection::btree_set((0u64..1000, 0u64..1000), 1..40)) {
        let edges: std::collections::BTreeSet<(u64, u64)> =
            edges.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
        prop_assume!(!edges.is_empty());
        let text: String = edges.iter().map(|(a, b)| format!("{b}\t{a}\n")).collect();
        let loaded = load_edge_list(text.as_bytes(), LoadOptions::default()).unwrap();
        let ids = &loaded.original_ids;
        prop_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(loaded.graph.edge_count(), edges.len());
        for e in loaded.graph.edges() {
            prop_assert!(edges.contains(&(ids[e.u], ids[e.v])));
        }
    }
}

#[test]
fn duplicate_handling_respects_dedup_flag() {
    let text = "0 1\n1 2\n2 1\n";
    assert!(load_edge_list(text.as_bytes(), LoadOptions::default()).is_err());
    let loaded = load_edge_list(text.as_bytes(), LoadOptions { dedup: true }).unwrap();
    assert_eq!(loaded.duplicates_dropped, 1);
    assert_eq!(loaded.graph.edge_count(), 2);
    // Self-loops stay fatal even when deduplicating.
    assert!(load_edge_list("3 3\n".as_bytes(), LoadOptions { dedup: true }).is_err());
}
