//! Per-edge two-hop combinatorics, lazy-walk edge parameters, and the
//! comparison moduli built from them.
//!
//! For an edge `(i, j)` with `i < j` the neighborhoods split into the common
//! set `C = N(i) ∩ N(j)` and the unique sets `U_i = N(i) \ (N(j) ∪ {j})`,
//! `U_j = N(j) \ (N(i) ∪ {i})`. Cross edges join `U_i` to `U_j`.
//!
//! The box count of a neighbor `k` of `u` (other than `v`) is
//! `|N(k) ∩ U_v|`. Its maximum over both sides, `pi_max`, ranges over all of
//! `N(u) \ {v}`, common neighbors included.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, Graph, Vertex};
use crate::matching::{Bipartite, HopcroftKarp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodPartition {
    pub common: Vec<Vertex>,
    pub unique_i: Vec<Vertex>,
    pub unique_j: Vec<Vertex>,
}

/// Splits the neighborhoods of `e.u` and `e.v` by one sorted merge.
pub fn partition(g: &Graph, e: EdgeKey) -> Result<NeighborhoodPartition> {
    check_edge(g, e)?;
    let mut p = NeighborhoodPartition {
        common: Vec::new(),
        unique_i: Vec::new(),
        unique_j: Vec::new(),
    };
    split_into(g, e, &mut p);
    Ok(p)
}

fn check_edge(g: &Graph, e: EdgeKey) -> Result<()> {
    g.edge_key(e.u, e.v).map(|_| ())
}

fn split_into(g: &Graph, e: EdgeKey, p: &mut NeighborhoodPartition) {
    let (i, j) = (e.u, e.v);
    let (a, b) = (g.neighbors(i), g.neighbors(j));
    p.common.clear();
    p.unique_i.clear();
    p.unique_j.clear();
    let (mut x, mut y) = (0, 0);
    while x < a.len() || y < b.len() {
        let ax = a.get(x).copied().unwrap_or(usize::MAX);
        let by = b.get(y).copied().unwrap_or(usize::MAX);
        if ax == by {
            p.common.push(ax);
            x += 1;
            y += 1;
        } else if ax < by {
            if ax != j {
                p.unique_i.push(ax);
            }
            x += 1;
        } else {
            if by != i {
                p.unique_j.push(by);
            }
            y += 1;
        }
    }
}

/// Calls `f(ia, ib)` for every value present in both sorted slices.
/// Uses binary search from the shorter slice when the sizes are lopsided.
#[inline]
fn for_each_common(a: &[Vertex], b: &[Vertex], mut f: impl FnMut(usize, usize)) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    if a.len() * 8 < b.len() {
        search_each(a, b, &mut f);
    } else if b.len() * 8 < a.len() {
        search_each(b, a, |ib, ia| f(ia, ib));
    } else {
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    f(x, y);
                    x += 1;
                    y += 1;
                }
            }
        }
    }
}

/// Binary-searches each element of `small` in the unsearched tail of `large`.
#[inline]
fn search_each(small: &[Vertex], large: &[Vertex], mut f: impl FnMut(usize, usize)) {
    let mut lo = 0;
    for (is, x) in small.iter().enumerate() {
        match large[lo..].binary_search(x) {
            Ok(k) => {
                f(is, lo + k);
                lo += k + 1;
            }
            Err(k) => lo += k,
        }
        if lo >= large.len() {
            break;
        }
    }
}

fn count_common(a: &[Vertex], b: &[Vertex]) -> usize {
    let mut c = 0;
    for_each_common(a, b, |_, _| c += 1);
    c
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalStats {
    pub edge: EdgeKey,
    pub deg_i: usize,
    pub deg_j: usize,
    /// Triangle count `|C|`.
    pub tri: usize,
    /// Vertices of `U_i` with at least one cross edge.
    pub xi_i: Vec<Vertex>,
    pub xi_j: Vec<Vertex>,
    /// `|xi_i| + |xi_j|`.
    pub xi: usize,
    pub pi_max: usize,
    /// `pi_max * max(deg_i, deg_j)`.
    pub sho_max: usize,
    pub cross_edges: usize,
    /// Maximum matching size of the cross-edge bipartite graph.
    pub matching: usize,
    /// `xi / sho_max`, or 0 when `xi == 0`.
    pub c4_edge: f64,
}

impl LocalStats {
    pub fn deg_min(&self) -> usize {
        self.deg_i.min(self.deg_j)
    }

    pub fn deg_max(&self) -> usize {
        self.deg_i.max(self.deg_j)
    }

    /// `|U_i| = deg_i - 1 - tri`.
    pub fn unique_i(&self) -> usize {
        self.deg_i - 1 - self.tri
    }

    pub fn unique_j(&self) -> usize {
        self.deg_j - 1 - self.tri
    }
}

/// Reusable buffers for computing [`LocalStats`] over many edges.
#[derive(Clone, Debug, Default)]
pub struct LocalScratch {
    part: Option<NeighborhoodPartition>,
    cross: Bipartite,
    right_degree: Vec<usize>,
    matcher: HopcroftKarp,
}

impl LocalScratch {
    pub fn new() -> Self {
        Self::default()
    }
}

pub fn local_stats(g: &Graph, e: EdgeKey) -> Result<LocalStats> {
    local_stats_with(g, e, &mut LocalScratch::new())
}

pub fn local_stats_with(g: &Graph, e: EdgeKey, s: &mut LocalScratch) -> Result<LocalStats> {
    check_edge(g, e)?;
    let part = s.part.get_or_insert_with(|| NeighborhoodPartition {
        common: Vec::new(),
        unique_i: Vec::new(),
        unique_j: Vec::new(),
    });
    split_into(g, e, part);
    let (ui, uj) = (&part.unique_i, &part.unique_j);

    s.cross.clear(uj.len());
    s.right_degree.clear();
    s.right_degree.resize(uj.len(), 0);
    let mut pi_max = 0;
    let mut xi_i = Vec::new();
    for &k in ui.iter() {
        let before = s.cross.targets.len();
        let targets = &mut s.cross.targets;
        let right_degree = &mut s.right_degree;
        for_each_common(g.neighbors(k), uj, |_, b| {
            targets.push(b);
            right_degree[b] += 1;
        });
        let d = s.cross.targets.len() - before;
        s.cross.offsets.push(s.cross.targets.len());
        if d > 0 {
            xi_i.push(k);
        }
        pi_max = pi_max.max(d);
    }
    let xi_j: Vec<Vertex> = uj
        .iter()
        .zip(&s.right_degree)
        .filter(|(_, &d)| d > 0)
        .map(|(&w, _)| w)
        .collect();
    pi_max = pi_max.max(s.right_degree.iter().copied().max().unwrap_or(0));
    for &k in &part.common {
        if !uj.is_empty() {
            pi_max = pi_max.max(count_common(g.neighbors(k), uj));
        }
        if !ui.is_empty() {
            pi_max = pi_max.max(count_common(g.neighbors(k), ui));
        }
    }

    let cross_edges = s.cross.edge_count();
    let matching = if cross_edges == 0 {
        0
    } else {
        s.matcher.max_matching(&s.cross)
    };
    let (deg_i, deg_j) = (g.deg(e.u), g.deg(e.v));
    let sho_max = pi_max * deg_i.max(deg_j);
    let xi = xi_i.len() + xi_j.len();
    let c4_edge = if xi == 0 {
        0.0
    } else {
        xi as f64 / sho_max as f64
    };
    Ok(LocalStats {
        edge: e,
        deg_i,
        deg_j,
        tri: part.common.len(),
        xi_i,
        xi_j,
        xi,
        pi_max,
        sho_max,
        cross_edges,
        matching,
        c4_edge,
    })
}

/// Maximum of the edgewise 4-cycle coefficient over all edges.
pub fn c4_graph(g: &Graph) -> Result<f64> {
    if g.edge_count() == 0 {
        return Err(Error::Empty("graph has no edges".into()));
    }
    let mut s = LocalScratch::new();
    let mut best: f64 = 0.0;
    for e in g.edges() {
        best = best.max(local_stats_with(g, e, &mut s)?.c4_edge);
    }
    Ok(best)
}

/// Laziness schedule of the random-walk measure.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum AlphaProfile {
    /// `alpha_u = 1 / (deg(u) + 1)`: uniform on the closed neighborhood.
    #[default]
    Default,
    /// The same idleness at every vertex, in `[0, 1)`.
    Constant(f64),
}

impl AlphaProfile {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AlphaProfile::Default => Ok(()),
            AlphaProfile::Constant(a) if (0.0..1.0).contains(&a) => Ok(()),
            AlphaProfile::Constant(a) => Err(Error::Parameter(format!(
                "constant alpha must lie in [0, 1), got {a}"
            ))),
        }
    }

    pub fn alpha(&self, degree: usize) -> f64 {
        match *self {
            AlphaProfile::Default => 1.0 / (degree as f64 + 1.0),
            AlphaProfile::Constant(a) => a,
        }
    }

    /// Mass `(1 - alpha) / degree` placed on each neighbor. Under the default
    /// profile this is computed as `1 / (degree + 1)`, so that it equals
    /// `alpha` exactly.
    pub fn neighbor_mass(&self, degree: usize) -> f64 {
        match *self {
            AlphaProfile::Default => 1.0 / (degree as f64 + 1.0),
            AlphaProfile::Constant(a) => (1.0 - a) / degree as f64,
        }
    }

    /// Parses `default` or `const:<x>`.
    pub fn parse(text: &str) -> Result<AlphaProfile> {
        let profile = match text.trim() {
            "default" => AlphaProfile::Default,
            other => {
                let x = other
                    .strip_prefix("const:")
                    .ok_or_else(|| {
                        Error::Parameter(format!("alpha profile must be default or const:<x>, got {other:?}"))
                    })?
                    .parse::<f64>()
                    .map_err(|_| Error::Parameter(format!("bad alpha value in {other:?}")))?;
                AlphaProfile::Constant(x)
            }
        };
        profile.validate()?;
        Ok(profile)
    }
}

/// Laziness-derived quantities of one edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LazyParams {
    pub deg_i: usize,
    pub deg_j: usize,
    pub alpha_i: f64,
    pub alpha_j: f64,
    /// Per-neighbor mass `(1 - alpha_u) / deg_u`.
    pub w_i: f64,
    pub w_j: f64,
    pub w_meet: f64,
    /// `deg_i / (1 - alpha_i) + deg_j / (1 - alpha_j)`.
    pub sigma: f64,
    /// `min(alpha_i, w_j)`: mass of `m_i` at `i` absorbed by `m_j` at `i`.
    pub z_i: f64,
    pub z_j: f64,
    pub r_i: f64,
    pub rbar_i: f64,
    pub r_j: f64,
    pub rbar_j: f64,
    pub delta: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
}

impl LazyParams {
    pub fn from_degrees(deg_i: usize, deg_j: usize, profile: AlphaProfile) -> Result<LazyParams> {
        profile.validate()?;
        if deg_i == 0 || deg_j == 0 {
            return Err(Error::Domain("edge endpoints need positive degree".into()));
        }
        let (alpha_i, alpha_j) = (profile.alpha(deg_i), profile.alpha(deg_j));
        let (w_i, w_j) = (profile.neighbor_mass(deg_i), profile.neighbor_mass(deg_j));
        let z_i = alpha_i.min(w_j);
        let z_j = alpha_j.min(w_i);
        Ok(LazyParams {
            deg_i,
            deg_j,
            alpha_i,
            alpha_j,
            w_i,
            w_j,
            w_meet: w_i.min(w_j),
            sigma: deg_i as f64 / (1.0 - alpha_i) + deg_j as f64 / (1.0 - alpha_j),
            z_i,
            z_j,
            r_i: (alpha_i - w_j).max(0.0),
            rbar_i: (w_j - alpha_i).max(0.0),
            r_j: (alpha_j - w_i).max(0.0),
            rbar_j: (w_i - alpha_j).max(0.0),
            delta: (alpha_i - alpha_j).abs(),
            alpha_min: alpha_i.min(alpha_j),
            alpha_max: alpha_i.max(alpha_j),
        })
    }

    /// `r_i + rbar_i + r_j + rbar_j`.
    pub fn residual_sum(&self) -> f64 {
        self.r_i + self.rbar_i + self.r_j + self.rbar_j
    }
}

pub fn lazy_params(g: &Graph, e: EdgeKey, profile: AlphaProfile) -> Result<LazyParams> {
    check_edge(g, e)?;
    LazyParams::from_degrees(g.deg(e.u), g.deg(e.v), profile)
}

/// Degree and overlap moduli of one edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComparisonModuli {
    /// Degree shift `2/deg_i + 2/deg_j - 2`.
    pub s: f64,
    /// Triangle scaling `2/deg_max + 1/deg_min`.
    pub t: f64,
    /// Residual factor `1 - 1/deg_min - 1/deg_max`.
    pub k: f64,
    /// `tri / deg_max`.
    pub z_max: f64,
    /// `tri / deg_min`.
    pub z_min: f64,
    /// Normalized matching `matching / deg_max`.
    pub sq: f64,
}

pub fn comparison_moduli(ls: &LocalStats) -> ComparisonModuli {
    let (di, dj) = (ls.deg_i as f64, ls.deg_j as f64);
    let (dmin, dmax) = (di.min(dj), di.max(dj));
    let tri = ls.tri as f64;
    ComparisonModuli {
        s: 2.0 / di + 2.0 / dj - 2.0,
        t: 2.0 / dmax + 1.0 / dmin,
        k: 1.0 - 1.0 / dmin - 1.0 / dmax,
        z_max: tri / dmax,
        z_min: tri / dmin,
        sq: ls.matching as f64 / dmax,
    }
}

/// Everything the bounds and moduli need about one edge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeStats {
    pub local: LocalStats,
    pub lazy: LazyParams,
    pub moduli: ComparisonModuli,
}

impl EdgeStats {
    pub fn compute(g: &Graph, e: EdgeKey, profile: AlphaProfile) -> Result<EdgeStats> {
        Self::compute_with(g, e, profile, &mut LocalScratch::new())
    }

    pub fn compute_with(
        g: &Graph,
        e: EdgeKey,
        profile: AlphaProfile,
        scratch: &mut LocalScratch,
    ) -> Result<EdgeStats> {
        let local = local_stats_with(g, e, scratch)?;
        let lazy = LazyParams::from_degrees(local.deg_i, local.deg_j, profile)?;
        let moduli = comparison_moduli(&local);
        Ok(EdgeStats {
            local,
            lazy,
            moduli,
        })
    }

    pub fn deg_min(&self) -> usize {
        self.local.deg_min()
    }

    pub fn deg_max(&self) -> usize {
        self.local.deg_max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, ModelSpec};

    fn graph_h() -> Graph {
        Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 4), (3, 4)]).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn partition_examples() {
        let k5 = generate(&ModelSpec::Complete { n: 5 }, 0).unwrap();
        let p = partition(&k5, EdgeKey::new(0, 1)).unwrap();
        assert_eq!(p.common.len(), 3);
        assert!(p.unique_i.is_empty() && p.unique_j.is_empty());

        let c6 = generate(&ModelSpec::Cycle { n: 6 }, 0).unwrap();
        let p = partition(&c6, EdgeKey::new(0, 1)).unwrap();
        assert!(p.common.is_empty());
        assert_eq!((p.unique_i.len(), p.unique_j.len()), (1, 1));

        let p = partition(&graph_h(), EdgeKey::new(0, 1)).unwrap();
        assert_eq!(p.common, [2]);
        assert_eq!(p.unique_i, [3]);
        assert_eq!(p.unique_j, [4]);

        assert!(partition(&graph_h(), EdgeKey::new(0, 4)).is_err());
    }

    #[test]
    fn graph_h_stats() {
        let ls = local_stats(&graph_h(), EdgeKey::new(0, 1)).unwrap();
        assert_eq!(ls.tri, 1);
        assert_eq!(ls.xi, 2);
        assert_eq!(ls.pi_max, 1);
        assert_eq!(ls.sho_max, 3);
        assert!(close(ls.c4_edge, 2.0 / 3.0));
        assert_eq!(ls.matching, 1);
        assert_eq!(ls.cross_edges, 1);
    }

    #[test]
    fn torus_and_complete_stats() {
        let t = generate(&ModelSpec::Torus { lx: 32, ly: 32 }, 0).unwrap();
        for e in t.edges().take(50) {
            let ls = local_stats(&t, e).unwrap();
            assert_eq!((ls.tri, ls.xi, ls.pi_max, ls.sho_max), (0, 4, 1, 4));
            assert!(close(ls.c4_edge, 1.0));
        }
        assert!(close(c4_graph(&t).unwrap(), 1.0));

        let k = generate(&ModelSpec::Complete { n: 7 }, 0).unwrap();
        let ls = local_stats(&k, EdgeKey::new(2, 5)).unwrap();
        assert_eq!((ls.xi, ls.matching), (0, 0));
        assert_eq!(ls.c4_edge, 0.0);
        assert_eq!(c4_graph(&k).unwrap(), 0.0);

        let c6 = generate(&ModelSpec::Cycle { n: 6 }, 0).unwrap();
        assert_eq!(c4_graph(&c6).unwrap(), 0.0);
        assert!(c4_graph(&Graph::from_edges(3, []).unwrap()).is_err());
    }

    #[test]
    fn box_count_includes_common_neighbors() {
        // 0-1 edge, common neighbor 2, unique neighbor 3 of 1; 2 ~ 3 closes a box.
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let ls = local_stats(&g, EdgeKey::new(0, 1)).unwrap();
        assert_eq!(ls.pi_max, 1);
        assert_eq!(ls.xi, 0);
        assert_eq!(ls.c4_edge, 0.0);
        assert_eq!(ls.sho_max, 3);
    }

    #[test]
    fn lazy_params_examples() {
        let c = LazyParams::from_degrees(2, 2, AlphaProfile::Default).unwrap();
        for v in [c.alpha_i, c.alpha_j, c.w_i, c.w_j, c.z_i, c.z_j] {
            assert!(close(v, 1.0 / 3.0));
        }
        assert_eq!(c.residual_sum(), 0.0);
        assert!(close(c.sigma, 6.0));
        assert_eq!(c.delta, 0.0);

        let h = lazy_params(&graph_h(), EdgeKey::new(0, 1), AlphaProfile::Default).unwrap();
        for v in [h.alpha_i, h.alpha_j, h.w_i, h.w_j, h.z_i, h.z_j] {
            assert!(close(v, 0.25));
        }
        assert!(close(h.sigma, 8.0));
        assert_eq!(h.delta, 0.0);

        assert!(LazyParams::from_degrees(3, 3, AlphaProfile::Constant(1.0)).is_err());
    }

    #[test]
    fn lazy_params_identities() {
        for profile in [AlphaProfile::Default, AlphaProfile::Constant(0.0), AlphaProfile::Constant(0.6)] {
            for di in 1..12 {
                for dj in 1..12 {
                    let p = LazyParams::from_degrees(di, dj, profile).unwrap();
                    assert!(close(p.r_i + p.z_i, p.alpha_i));
                    assert!(close(p.rbar_i + p.z_i, p.w_j));
                    assert!(close(p.r_j + p.z_j, p.alpha_j));
                    assert!(close(p.rbar_j + p.z_j, p.w_i));
                    assert!(p.r_i == 0.0 || p.rbar_i == 0.0);
                    assert!(p.r_j == 0.0 || p.rbar_j == 0.0);
                    assert!((p.sigma - (1.0 / p.w_i + 1.0 / p.w_j)).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn alpha_profile_parsing() {
        assert_eq!(AlphaProfile::parse("default").unwrap(), AlphaProfile::Default);
        assert_eq!(AlphaProfile::parse("const:0.5").unwrap(), AlphaProfile::Constant(0.5));
        assert!(AlphaProfile::parse("const:1").is_err());
        assert!(AlphaProfile::parse("const:-0.1").is_err());
        assert!(AlphaProfile::parse("lazy").is_err());
    }

    #[test]
    fn moduli_examples() {
        let m = comparison_moduli(&local_stats(&graph_h(), EdgeKey::new(0, 1)).unwrap());
        assert!(close(m.s, -2.0 / 3.0));
        assert!(close(m.t, 1.0));
        assert!(close(m.k, 1.0 / 3.0));
        assert!(close(m.z_max, 1.0 / 3.0) && close(m.z_min, 1.0 / 3.0));
        assert!(close(m.sq, 1.0 / 3.0));

        let c = generate(&ModelSpec::Cycle { n: 9 }, 0).unwrap();
        let m = comparison_moduli(&local_stats(&c, EdgeKey::new(0, 1)).unwrap());
        assert!(close(m.s, 0.0) && close(m.t, 1.5) && close(m.k, 0.0));
        assert_eq!((m.z_max, m.z_min, m.sq), (0.0, 0.0, 0.0));

        let k = generate(&ModelSpec::Complete { n: 120 }, 0).unwrap();
        let m = comparison_moduli(&local_stats(&k, EdgeKey::new(0, 1)).unwrap());
        assert!(close(m.s, 4.0 / 119.0 - 2.0));
        assert!(close(m.t, 3.0 / 119.0));
        assert!(close(m.z_max, 118.0 / 119.0));
    }
}
