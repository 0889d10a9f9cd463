//! Exact Wasserstein-1 distances between finitely supported measures on a
//! graph, and the Ollivier–Ricci curvature built from them.
//!
//! The transportation problem is solved by the primal-dual (Hungarian)
//! method on integer path-length costs: dual potentials stay integral, each
//! phase pushes flow along zero-reduced-cost arcs by breadth-first
//! augmenting paths, and a dual step opens new arcs when no path remains.
//! The result is optimal up to the floating-point error of the masses.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, truncated_distances, EdgeKey, Graph, Vertex};
use crate::local::AlphaProfile;

/// Masses below this are treated as exhausted supply.
const MASS_EPS: f64 = 1e-13;
/// Allowed total-mass mismatch between the two measures.
const BALANCE_TOL: f64 = 1e-10;
/// Allowed deviation of a measure's total mass from one.
const NORMALIZATION_TOL: f64 = 1e-12;

static SOLVER_CALLS: AtomicU64 = AtomicU64::new(0);

/// Number of transportation solves performed by this process so far.
pub fn solver_invocations() -> u64 {
    SOLVER_CALLS.load(Ordering::Relaxed)
}

/// A probability measure with finite support.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseMeasure {
    support: Vec<(Vertex, f64)>,
}

impl SparseMeasure {
    /// Validates distinct vertices, positive masses, and unit total mass.
    pub fn new(mut support: Vec<(Vertex, f64)>) -> Result<SparseMeasure> {
        support.sort_by_key(|&(v, _)| v);
        if support.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Normalization("repeated support vertex".into()));
        }
        if let Some(&(v, m)) = support.iter().find(|&&(_, m)| !(m > 0.0 && m.is_finite())) {
            return Err(Error::Normalization(format!("mass {m} at vertex {v} is not positive")));
        }
        let total: f64 = support.iter().map(|&(_, m)| m).sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Normalization(format!("total mass {total}")));
        }
        Ok(SparseMeasure { support })
    }

    /// Uniform measure on the given vertices.
    pub fn uniform(vertices: &[Vertex]) -> Result<SparseMeasure> {
        if vertices.is_empty() {
            return Err(Error::Normalization("empty support".into()));
        }
        let m = 1.0 / vertices.len() as f64;
        SparseMeasure::new(vertices.iter().map(|&v| (v, m)).collect())
    }

    pub fn support(&self) -> &[(Vertex, f64)] {
        &self.support
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.support.iter().map(|&(v, _)| v)
    }

    pub fn mass(&self, v: Vertex) -> f64 {
        self.support
            .binary_search_by_key(&v, |&(x, _)| x)
            .map_or(0.0, |k| self.support[k].1)
    }
}

/// One-step lazy random-walk measure at `u`.
pub fn lazy_measure(g: &Graph, u: Vertex, profile: AlphaProfile) -> Result<SparseMeasure> {
    g.check_vertex(u)?;
    profile.validate()?;
    let deg = g.deg(u);
    if deg == 0 {
        return Err(Error::IsolatedVertex(u));
    }
    let alpha = profile.alpha(deg);
    let w = profile.neighbor_mass(deg);
    let mut support: Vec<(Vertex, f64)> = g.neighbors(u).iter().map(|&v| (v, w)).collect();
    if alpha > 0.0 {
        support.push((u, alpha));
    }
    SparseMeasure::new(support)
}

/// Uniform measure on the neighbors of `u`.
pub fn neighbor_measure(g: &Graph, u: Vertex) -> Result<SparseMeasure> {
    g.check_vertex(u)?;
    if g.deg(u) == 0 {
        return Err(Error::IsolatedVertex(u));
    }
    SparseMeasure::uniform(g.neighbors(u))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransportPlan {
    /// `(source, target, mass)` with positive mass.
    pub entries: Vec<(Vertex, Vertex, f64)>,
    pub objective: f64,
}

impl TransportPlan {
    /// Row and column sums of the plan, keyed by vertex.
    #[allow(clippy::type_complexity)]
    pub fn marginals(&self) -> (Vec<(Vertex, f64)>, Vec<(Vertex, f64)>) {
        use std::collections::BTreeMap;
        let mut a: BTreeMap<Vertex, f64> = BTreeMap::new();
        let mut b: BTreeMap<Vertex, f64> = BTreeMap::new();
        for &(x, y, m) in &self.entries {
            *a.entry(x).or_default() += m;
            *b.entry(y).or_default() += m;
        }
        (a.into_iter().collect(), b.into_iter().collect())
    }
}

/// Solution of a dense transportation problem.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSolution {
    /// Row-major flow matrix.
    pub flow: Vec<f64>,
    pub objective: f64,
}

/// Minimizes `Σ flow[r][c] * cost[r][c]` subject to row sums `supply` and
/// column sums `demand`. `None` cells are forbidden.
pub fn solve_dense(supply: &[f64], demand: &[f64], cost: &[Option<u32>]) -> Result<DenseSolution> {
    SOLVER_CALLS.fetch_add(1, Ordering::Relaxed);
    let (m, n) = (supply.len(), demand.len());
    assert_eq!(cost.len(), m * n, "cost matrix must be rows x columns");
    let sa: f64 = supply.iter().sum();
    let sb: f64 = demand.iter().sum();
    if (sa - sb).abs() > BALANCE_TOL {
        return Err(Error::Normalization(format!(
            "supply {sa} and demand {sb} differ"
        )));
    }
    PrimalDual::new(supply, demand, cost)?.run()
}

struct PrimalDual<'a> {
    m: usize,
    n: usize,
    cost: &'a [Option<u32>],
    u: Vec<i64>,
    v: Vec<i64>,
    flow: Vec<f64>,
    rs: Vec<f64>,
    rd: Vec<f64>,
    row_prev: Vec<usize>,
    col_prev: Vec<usize>,
    queue: Vec<usize>,
}

const UNSEEN: usize = usize::MAX;
const ROOT: usize = usize::MAX - 1;

impl<'a> PrimalDual<'a> {
    fn new(supply: &[f64], demand: &[f64], cost: &'a [Option<u32>]) -> Result<Self> {
        let (m, n) = (supply.len(), demand.len());
        let mut u = vec![0i64; m];
        for r in 0..m {
            match (0..n).filter_map(|c| cost[r * n + c]).min() {
                Some(x) => u[r] = x as i64,
                None if supply[r] > 0.0 => return Err(Error::Infeasible),
                None => {}
            }
        }
        let mut v = vec![0i64; n];
        for c in 0..n {
            match (0..m)
                .filter_map(|r| cost[r * n + c].map(|x| x as i64 - u[r]))
                .min()
            {
                Some(x) => v[c] = x,
                None if demand[c] > 0.0 => return Err(Error::Infeasible),
                None => {}
            }
        }
        Ok(PrimalDual {
            m,
            n,
            cost,
            u,
            v,
            flow: vec![0.0; m * n],
            rs: supply.to_vec(),
            rd: demand.to_vec(),
            row_prev: vec![UNSEEN; m],
            col_prev: vec![UNSEEN; n],
            queue: Vec::with_capacity(m),
        })
    }

    #[inline]
    fn tight(&self, r: usize, c: usize) -> bool {
        matches!(self.cost[r * self.n + c], Some(x) if x as i64 == self.u[r] + self.v[c])
    }

    fn run(mut self) -> Result<DenseSolution> {
        loop {
            if self.rs.iter().all(|&x| x <= MASS_EPS) {
                break;
            }
            match self.search() {
                Some(sink) => self.augment(sink),
                None => self.dual_step()?,
            }
        }
        let objective = self
            .flow
            .iter()
            .zip(self.cost)
            .map(|(&f, c)| if f > 0.0 { f * c.unwrap() as f64 } else { 0.0 })
            .sum();
        Ok(DenseSolution {
            flow: self.flow,
            objective,
        })
    }

    /// Breadth-first search over tight forward arcs and positive-flow
    /// backward arcs from every row with remaining supply. Returns a column
    /// with remaining demand if one is reachable.
    fn search(&mut self) -> Option<usize> {
        self.row_prev.fill(UNSEEN);
        self.col_prev.fill(UNSEEN);
        self.queue.clear();
        for r in 0..self.m {
            if self.rs[r] > MASS_EPS {
                self.row_prev[r] = ROOT;
                self.queue.push(r);
            }
        }
        let mut head = 0;
        while head < self.queue.len() {
            let r = self.queue[head];
            head += 1;
            for c in 0..self.n {
                if self.col_prev[c] != UNSEEN || !self.tight(r, c) {
                    continue;
                }
                self.col_prev[c] = r;
                if self.rd[c] > 0.0 {
                    return Some(c);
                }
                for r2 in 0..self.m {
                    if self.row_prev[r2] == UNSEEN && self.flow[r2 * self.n + c] > 0.0 {
                        self.row_prev[r2] = c;
                        self.queue.push(r2);
                    }
                }
            }
        }
        None
    }

    fn augment(&mut self, sink: usize) {
        let n = self.n;
        let mut amount = self.rd[sink];
        let mut c = sink;
        let root = loop {
            let r = self.col_prev[c];
            match self.row_prev[r] {
                ROOT => break r,
                prev_col => {
                    amount = amount.min(self.flow[r * n + prev_col]);
                    c = prev_col;
                }
            }
        };
        amount = amount.min(self.rs[root]);

        let mut c = sink;
        loop {
            let r = self.col_prev[c];
            self.flow[r * n + c] += amount;
            match self.row_prev[r] {
                ROOT => break,
                prev_col => {
                    let f = &mut self.flow[r * n + prev_col];
                    *f -= amount;
                    if *f < MASS_EPS * 1e-3 {
                        *f = 0.0;
                    }
                    c = prev_col;
                }
            }
        }
        self.rs[root] -= amount;
        self.rd[sink] -= amount;
        if self.rd[sink] < 0.0 {
            self.rd[sink] = 0.0;
        }
    }

    /// Raises the potentials of labeled rows and lowers those of labeled
    /// columns by the smallest reduced cost leaving the labeled set.
    fn dual_step(&mut self) -> Result<()> {
        let n = self.n;
        let mut step: Option<i64> = None;
        for r in (0..self.m).filter(|&r| self.row_prev[r] != UNSEEN) {
            for c in (0..n).filter(|&c| self.col_prev[c] == UNSEEN) {
                if let Some(x) = self.cost[r * n + c] {
                    let reduced = x as i64 - self.u[r] - self.v[c];
                    step = Some(step.map_or(reduced, |s| s.min(reduced)));
                }
            }
        }
        let step = step.ok_or(Error::Infeasible)?;
        debug_assert!(step > 0, "labeled set must have no tight exit arc");
        for r in 0..self.m {
            if self.row_prev[r] != UNSEEN {
                self.u[r] += step;
            }
        }
        for c in 0..n {
            if self.col_prev[c] != UNSEEN {
                self.v[c] -= step;
            }
        }
        Ok(())
    }
}

/// Exact W1 between `mu` and `nu` under the given pair distance.
/// `dist` returns `None` for pairs with no finite distance.
pub fn w1_exact<F>(mu: &SparseMeasure, nu: &SparseMeasure, mut dist: F) -> Result<TransportPlan>
where
    F: FnMut(Vertex, Vertex) -> Option<u32>,
{
    let (a, b) = (mu.support(), nu.support());
    let mut cost = Vec::with_capacity(a.len() * b.len());
    for &(x, _) in a {
        for &(y, _) in b {
            let d = dist(x, y).ok_or(Error::Connectivity(x, y))?;
            cost.push(Some(d));
        }
    }
    solve_with_support(a, b, &cost)
}

fn solve_with_support(
    a: &[(Vertex, f64)],
    b: &[(Vertex, f64)],
    cost: &[Option<u32>],
) -> Result<TransportPlan> {
    let supply: Vec<f64> = a.iter().map(|&(_, m)| m).collect();
    let demand: Vec<f64> = b.iter().map(|&(_, m)| m).collect();
    let sol = solve_dense(&supply, &demand, cost)?;
    let n = b.len();
    let entries = sol
        .flow
        .iter()
        .enumerate()
        .filter(|(_, &f)| f > 0.0)
        .map(|(k, &f)| (a[k / n].0, b[k % n].0, f))
        .collect();
    Ok(TransportPlan {
        entries,
        objective: sol.objective,
    })
}

/// Graph distances for all pairs in `xs × ys`, row-major. Uses breadth-first
/// search truncated at depth 3 from each source, falls back to a full search
/// for pairs beyond that horizon, and reports disconnected pairs.
pub fn support_distances(g: &Graph, xs: &[Vertex], ys: &[Vertex]) -> Result<Vec<u32>> {
    let near = truncated_distances(g, xs, 3)?;
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &x in xs {
        let mut full: Option<Vec<Option<u32>>> = None;
        for &y in ys {
            g.check_vertex(y)?;
            let d = match near.get(x, y) {
                Some(d) => d,
                None => full.get_or_insert_with(|| bfs_distances(g, x))[y]
                    .ok_or(Error::Connectivity(x, y))?,
            };
            out.push(d);
        }
    }
    Ok(out)
}

/// Reusable state for evaluating exact OR curvature edge by edge.
#[derive(Clone, Debug, Default)]
pub struct OrScratch {
    stamp: Vec<u32>,
    epoch: u32,
}

impl OrScratch {
    pub fn new() -> Self {
        Self::default()
    }

    fn next_epoch(&mut self, n: usize) -> u32 {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        self.epoch
    }
}

/// Distances between the closed neighborhoods of the endpoints of an edge.
///
/// Every such pair is within three hops (`x ~ i ~ j ~ y`), so a pair that is
/// neither equal, adjacent, nor joined by a common neighbor is at distance 3.
fn edge_support_distances(
    g: &Graph,
    xs: &[Vertex],
    ys: &[Vertex],
    scratch: &mut OrScratch,
) -> Vec<Option<u32>> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &x in xs {
        let epoch = scratch.next_epoch(g.vertex_count());
        for &z in g.neighbors(x) {
            scratch.stamp[z] = epoch;
        }
        let stamp = &scratch.stamp;
        for &y in ys {
            let d = if y == x {
                0
            } else if stamp[y] == epoch {
                1
            } else if g.neighbors(y).iter().any(|&z| stamp[z] == epoch) {
                2
            } else {
                3
            };
            out.push(Some(d));
        }
    }
    out
}

/// W1 between two measures supported on the closed neighborhoods of the
/// endpoints of `e`.
pub fn w1_on_edge(
    g: &Graph,
    e: EdgeKey,
    mu: &SparseMeasure,
    nu: &SparseMeasure,
    scratch: &mut OrScratch,
) -> Result<TransportPlan> {
    g.edge_key(e.u, e.v)?;
    let xs: Vec<Vertex> = mu.vertices().collect();
    let ys: Vec<Vertex> = nu.vertices().collect();
    debug_assert!(xs.iter().all(|&x| x == e.u || g.has_edge(x, e.u) || x == e.v || g.has_edge(x, e.v)));
    debug_assert!(ys.iter().all(|&y| y == e.u || g.has_edge(y, e.u) || y == e.v || g.has_edge(y, e.v)));
    let cost = edge_support_distances(g, &xs, &ys, scratch);
    solve_with_support(mu.support(), nu.support(), &cost)
}

/// `1 - W1(m_i, m_j)` for the lazy measures of the profile.
pub fn or_curvature(g: &Graph, e: EdgeKey, profile: AlphaProfile) -> Result<f64> {
    or_curvature_with(g, e, profile, &mut OrScratch::new())
}

pub fn or_curvature_with(
    g: &Graph,
    e: EdgeKey,
    profile: AlphaProfile,
    scratch: &mut OrScratch,
) -> Result<f64> {
    let mu = lazy_measure(g, e.u, profile)?;
    let nu = lazy_measure(g, e.v, profile)?;
    Ok(1.0 - w1_on_edge(g, e, &mu, &nu, scratch)?.objective)
}

/// `1 - W1(ν_i, ν_j)` for the neighbor-uniform measures.
pub fn or0_curvature(g: &Graph, e: EdgeKey) -> Result<f64> {
    or0_curvature_with(g, e, &mut OrScratch::new())
}

pub fn or0_curvature_with(g: &Graph, e: EdgeKey, scratch: &mut OrScratch) -> Result<f64> {
    let mu = neighbor_measure(g, e.u)?;
    let nu = neighbor_measure(g, e.v)?;
    Ok(1.0 - w1_on_edge(g, e, &mu, &nu, scratch)?.objective)
}
