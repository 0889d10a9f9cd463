//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use curvbridge::graph::{bfs_distances, Graph};
use curvbridge::Vertex;
use itertools::Itertools;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

/// The five-vertex example graph: triangle 0-1-2 plus the square 0-1-4-3.
pub fn graph_h() -> Graph {
    Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 4), (3, 4)]).unwrap()
}

/// Every connected graph on `n` vertices, one per isomorphism class.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| pairs[k])
            .collect();
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        if !g.is_connected() {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                edges.iter().fold(0u32, |acc, &(a, b)| {
                    let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
                    acc | 1 << index[&(x, y)]
                })
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(g);
        }
    }
    out
}

/// A connected graph on `n` vertices: a random spanning tree plus extra
/// edges, each present with probability `p`.
pub fn random_connected(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut edges = std::collections::BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    for (a, b) in (0..n).tuple_combinations() {
        if rng.gen_bool(p) {
            edges.insert((a, b));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// All-pairs distances; `None` for disconnected pairs.
pub fn all_pairs(g: &Graph) -> Vec<Vec<Option<u32>>> {
    (0..g.vertex_count()).map(|s| bfs_distances(g, s)).collect()
}

/// A measure with rational masses `num / den`.
#[derive(Clone, Debug)]
pub struct Rational {
    pub atoms: Vec<(Vertex, u64)>,
    pub den: u64,
}

impl Rational {
    /// Uniform on the closed neighborhood of `u` (the default lazy measure).
    pub fn closed_neighborhood(g: &Graph, u: Vertex) -> Rational {
        let mut atoms: Vec<(Vertex, u64)> = g.neighbors(u).iter().map(|&v| (v, 1)).collect();
        atoms.push((u, 1));
        atoms.sort();
        Rational { den: atoms.len() as u64, atoms }
    }

    /// Uniform on the open neighborhood of `u`.
    pub fn neighborhood(g: &Graph, u: Vertex) -> Rational {
        let atoms: Vec<(Vertex, u64)> = g.neighbors(u).iter().map(|&v| (v, 1)).collect();
        Rational { den: atoms.len() as u64, atoms }
    }

    fn scaled(&self, n: u64) -> Vec<(Vertex, u64)> {
        self.atoms.iter().map(|&(v, a)| (v, a * (n / self.den))).collect()
    }
}

/// Exact W1 by splitting both measures into equal atoms of mass `1/N` and
/// minimizing over every atom-to-atom coupling. With equal atoms an optimal
/// coupling is a bijection, so the search over capacity assignments is exact.
pub fn w1_by_atom_coupling(mu: &Rational, nu: &Rational, dist: &[Vec<Option<u32>>]) -> f64 {
    let n = mu.den.lcm(&nu.den);
    let a = mu.scaled(n);
    let b = nu.scaled(n);
    let sources: Vec<Vertex> = a.iter().flat_map(|&(v, k)| std::iter::repeat_n(v, k as usize)).collect();
    let mut layer: HashMap<Vec<u64>, u64> = HashMap::new();
    layer.insert(b.iter().map(|&(_, k)| k).collect(), 0);
    for &x in &sources {
        let mut next: HashMap<Vec<u64>, u64> = HashMap::new();
        for (caps, cost) in &layer {
            for (t, &(y, _)) in b.iter().enumerate() {
                if caps[t] == 0 {
                    continue;
                }
                let Some(d) = dist[x][y] else { continue };
                let mut c = caps.clone();
                c[t] -= 1;
                let total = cost + d as u64;
                let slot = next.entry(c).or_insert(u64::MAX);
                *slot = (*slot).min(total);
            }
        }
        layer = next;
    }
    let best = layer.values().copied().min().expect("no feasible coupling");
    best as f64 / n as f64
}

/// Exact W1 as the largest `Σ f (mu - nu)` over integer potentials that are
/// 1-Lipschitz along every edge. Requires a connected graph.
pub fn w1_by_potentials(g: &Graph, mu: &Rational, nu: &Rational) -> f64 {
    let n = mu.den.lcm(&nu.den);
    let mut weight = vec![0i64; g.vertex_count()];
    for (v, k) in mu.scaled(n) {
        weight[v] += k as i64;
    }
    for (v, k) in nu.scaled(n) {
        weight[v] -= k as i64;
    }
    // Potentials are determined by their increments along a BFS tree.
    let order_dist = bfs_distances(g, 0);
    let mut order: Vec<Vertex> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| order_dist[v].expect("graph must be connected"));
    let parent: Vec<Vertex> = order
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .copied()
                .find(|&p| order_dist[p].unwrap() + 1 == order_dist[v].unwrap())
                .unwrap_or(v)
        })
        .collect();
    let rest = order.len() - 1;
    let mut best = i64::MIN;
    let mut f = vec![0i64; g.vertex_count()];
    for steps in (0..rest).map(|_| -1i64..=1).multi_cartesian_product() {
        for (k, &v) in order.iter().enumerate().skip(1) {
            f[v] = f[parent[k]] + steps[k - 1];
        }
        let lipschitz = g.edges().all(|e| (f[e.u] - f[e.v]).abs() <= 1);
        if lipschitz {
            best = best.max(weight.iter().zip(&f).map(|(w, x)| w * x).sum());
        }
    }
    if rest == 0 {
        best = 0;
    }
    best as f64 / n as f64
}

/// A mixed bag of random and deterministic graphs of moderate size.
pub fn test_graphs(seeds: std::ops::Range<u64>) -> Vec<(String, Graph)> {
    use curvbridge::generators::{generate, ModelSpec};
    let random = [
        ModelSpec::ErdosRenyi { n: 120, p: 0.06 },
        ModelSpec::WattsStrogatz { n: 120, k: 6, beta: 0.2 },
        ModelSpec::BarabasiAlbert { n: 120, m: 3 },
        ModelSpec::BarabasiAlbert { n: 80, m: 1 },
        ModelSpec::Geometric { n: 120, r: 0.15, torus: false },
        ModelSpec::StochasticBlock { sizes: vec![60, 60], p_in: 0.12, p_out: 0.02 },
        ModelSpec::Hyperbolic { n: 150, radius: 8.0, alpha: 0.75, temperature: 0.3 },
        ModelSpec::Regular { n: 60, d: 4 },
    ];
    let fixed = [
        ModelSpec::Grid { lx: 8, ly: 9 },
        ModelSpec::Torus { lx: 6, ly: 7 },
        ModelSpec::DaryTree { d: 3, h: 3 },
        ModelSpec::Complete { n: 7 },
        ModelSpec::Cycle { n: 9 },
    ];
    let mut out = vec![("H".to_string(), graph_h())];
    for spec in &fixed {
        out.push((spec.to_string(), generate(spec, 0).unwrap()));
    }
    for seed in seeds {
        for spec in &random {
            out.push((format!("{spec} seed {seed}"), generate(spec, seed).unwrap()));
        }
    }
    out
}
