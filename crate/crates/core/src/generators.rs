//! Seeded generators for the synthetic graph families.
//!
//! All randomness comes from one SplitMix64 stream per call, seeded directly
//! with the user seed, so a `(ModelSpec, seed)` pair always produces the same
//! graph. Draws happen in a fixed order documented on each variant.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::PI;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Maximum number of full restarts of the stub-matching regular generator.
pub const REGULAR_RESTARTS: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    /// Each pair `i < j` in lexicographic order draws one uniform.
    ErdosRenyi { n: usize, p: f64 },
    /// `K_m` seed clique, then each new vertex picks `m` distinct targets
    /// with probability proportional to degree, re-drawing repeats.
    BarabasiAlbert { n: usize, m: usize },
    /// Ring lattice with `k/2` neighbors per side, then each clockwise edge
    /// `(i, i+d)` (outer loop over `d`, inner over `i`) is rewired with
    /// probability `beta` to a uniform non-neighbor of `i`.
    WattsStrogatz { n: usize, k: usize, beta: f64 },
    /// Uniform points in the unit square joined at distance `<= r`;
    /// `torus` switches to the periodic metric.
    Geometric { n: usize, r: f64, torus: bool },
    /// Stub matching with full restarts.
    Regular { n: usize, d: usize },
    /// Hyperbolic disk of radius `radius`; `temperature == 0` is the hard
    /// threshold model.
    Hyperbolic {
        n: usize,
        radius: f64,
        alpha: f64,
        temperature: f64,
    },
    /// Contiguous blocks; pairs inside a block use `p_in`.
    StochasticBlock {
        sizes: Vec<usize>,
        p_in: f64,
        p_out: f64,
    },
    Cycle { n: usize },
    /// Vertex `(x, y)` has id `x * ly + y`.
    Grid { lx: usize, ly: usize },
    /// Periodic grid with the same numbering as [`ModelSpec::Grid`].
    Torus { lx: usize, ly: usize },
    /// Full tree in breadth-first numbering; children of `v` are
    /// `d*v + 1 ..= d*v + d`.
    DaryTree { d: usize, h: usize },
    Complete { n: usize },
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must lie in [0, 1], got {p}")))
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Parameter(msg()))
    }
}

impl ModelSpec {
    /// Short model name used on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::ErdosRenyi { .. } => "er",
            ModelSpec::BarabasiAlbert { .. } => "ba",
            ModelSpec::WattsStrogatz { .. } => "ws",
            ModelSpec::Geometric { .. } => "rgg",
            ModelSpec::Regular { .. } => "regular",
            ModelSpec::Hyperbolic { .. } => "hrg",
            ModelSpec::StochasticBlock { .. } => "sbm",
            ModelSpec::Cycle { .. } => "cycle",
            ModelSpec::Grid { .. } => "grid",
            ModelSpec::Torus { .. } => "torus",
            ModelSpec::DaryTree { .. } => "tree",
            ModelSpec::Complete { .. } => "complete",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::ErdosRenyi { p, .. } => check_prob("p", p),
            ModelSpec::BarabasiAlbert { n, m } => require(m >= 1 && m < n, || {
                format!("BA needs 1 <= m <= n-1, got n={n}, m={m}")
            }),
            ModelSpec::WattsStrogatz { n, k, beta } => {
                require(k % 2 == 0 && k >= 2 && k < n, || {
                    format!("WS needs even k with 2 <= k <= n-1, got n={n}, k={k}")
                })?;
                check_prob("beta", beta)
            }
            ModelSpec::Geometric { r, .. } => {
                require(r > 0.0 && r.is_finite(), || format!("RGG radius must be positive, got {r}"))
            }
            ModelSpec::Regular { n, d } => require(d < n && (n * d) % 2 == 0, || {
                format!("regular graph needs 0 <= d < n and n*d even, got n={n}, d={d}")
            }),
            ModelSpec::Hyperbolic {
                radius,
                alpha,
                temperature,
                ..
            } => require(
                radius > 0.0 && alpha > 0.0 && temperature >= 0.0 && (radius * alpha).is_finite(),
                || format!("HRG needs R > 0, alpha > 0, T >= 0, got R={radius}, alpha={alpha}, T={temperature}"),
            ),
            ModelSpec::StochasticBlock {
                ref sizes,
                p_in,
                p_out,
            } => {
                require(!sizes.is_empty(), || "SBM needs at least one block".into())?;
                check_prob("p_in", p_in)?;
                check_prob("p_out", p_out)
            }
            ModelSpec::Cycle { n } => require(n >= 3, || format!("cycle needs n >= 3, got {n}")),
            ModelSpec::Grid { lx, ly } => {
                require(lx >= 1 && ly >= 1, || format!("grid needs positive sides, got {lx}x{ly}"))
            }
            ModelSpec::Torus { lx, ly } => require(lx >= 3 && ly >= 3, || {
                format!("torus needs both sides >= 3 to stay simple, got {lx}x{ly}")
            }),
            ModelSpec::DaryTree { d, h } => {
                require(d >= 2 && h >= 1, || format!("tree needs d >= 2 and h >= 1, got d={d}, h={h}"))?;
                tree_size(d, h).map(|_| ())
            }
            ModelSpec::Complete { n } => require(n >= 1, || "complete graph needs n >= 1".into()),
        }
    }

    /// `k=v` pairs in the same syntax accepted by [`ModelSpec::parse`].
    pub fn params_string(&self) -> String {
        match self {
            ModelSpec::ErdosRenyi { n, p } => format!("n={n},p={p}"),
            ModelSpec::BarabasiAlbert { n, m } => format!("n={n},m={m}"),
            ModelSpec::WattsStrogatz { n, k, beta } => format!("n={n},k={k},beta={beta}"),
            ModelSpec::Geometric { n, r, .. } => format!("n={n},r={r}"),
            ModelSpec::Regular { n, d } => format!("n={n},d={d}"),
            ModelSpec::Hyperbolic {
                n,
                radius,
                alpha,
                temperature,
            } => format!("n={n},R={radius},alpha={alpha},T={temperature}"),
            ModelSpec::StochasticBlock { sizes, p_in, p_out } => {
                let s: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
                format!("sizes={},p_in={p_in},p_out={p_out}", s.join(":"))
            }
            ModelSpec::Cycle { n } | ModelSpec::Complete { n } => format!("n={n}"),
            ModelSpec::Grid { lx, ly } | ModelSpec::Torus { lx, ly } => format!("lx={lx},ly={ly}"),
            ModelSpec::DaryTree { d, h } => format!("d={d},h={h}"),
        }
    }

    /// Builds a spec from a model name and a `k=v,k=v` parameter string.
    ///
    /// SBM block sizes are separated by `:`, e.g. `sizes=400:400`. The HRG
    /// radius and temperature accept `R`/`radius` and `T`/`temperature`.
    pub fn parse(model: &str, params: &str, torus_metric: bool) -> Result<ModelSpec> {
        let mut kv = Params::parse(params)?;
        let spec = match model.to_ascii_lowercase().as_str() {
            "er" => ModelSpec::ErdosRenyi {
                n: kv.get(&["n"])?,
                p: kv.get(&["p"])?,
            },
            "ba" => ModelSpec::BarabasiAlbert {
                n: kv.get(&["n"])?,
                m: kv.get(&["m"])?,
            },
            "ws" => ModelSpec::WattsStrogatz {
                n: kv.get(&["n"])?,
                k: kv.get(&["k"])?,
                beta: kv.get(&["beta"])?,
            },
            "rgg" => ModelSpec::Geometric {
                n: kv.get(&["n"])?,
                r: kv.get(&["r"])?,
                torus: torus_metric,
            },
            "regular" => ModelSpec::Regular {
                n: kv.get(&["n"])?,
                d: kv.get(&["d"])?,
            },
            "hrg" => ModelSpec::Hyperbolic {
                n: kv.get(&["n"])?,
                radius: kv.get(&["R", "radius"])?,
                alpha: kv.get(&["alpha"])?,
                temperature: kv.get(&["T", "temperature"])?,
            },
            "sbm" => {
                let raw: String = kv.get(&["sizes"])?;
                let sizes = raw
                    .split(':')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parameter(format!("bad block size {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ModelSpec::StochasticBlock {
                    sizes,
                    p_in: kv.get(&["p_in"])?,
                    p_out: kv.get(&["p_out"])?,
                }
            }
            "cycle" => ModelSpec::Cycle { n: kv.get(&["n"])? },
            "grid" => ModelSpec::Grid {
                lx: kv.get(&["lx"])?,
                ly: kv.get(&["ly"])?,
            },
            "torus" => ModelSpec::Torus {
                lx: kv.get(&["lx"])?,
                ly: kv.get(&["ly"])?,
            },
            "tree" | "dary" => ModelSpec::DaryTree {
                d: kv.get(&["d"])?,
                h: kv.get(&["h"])?,
            },
            "complete" => ModelSpec::Complete { n: kv.get(&["n"])? },
            other => return Err(Error::Parameter(format!("unknown model {other:?}"))),
        };
        kv.finish()?;
        if torus_metric && !matches!(spec, ModelSpec::Geometric { .. }) {
            return Err(Error::Parameter("--torus-metric applies only to rgg".into()));
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.params_string())?;
        if let ModelSpec::Geometric { torus: true, .. } = self {
            write!(f, "[torus]")?;
        }
        Ok(())
    }
}

struct Params(BTreeMap<String, String>);

impl Params {
    fn parse(text: &str) -> Result<Params> {
        let mut map = BTreeMap::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("expected key=value, got {item:?}")))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Parameter(format!("parameter {k:?} given twice")));
            }
        }
        Ok(Params(map))
    }

    fn get<T: std::str::FromStr>(&mut self, names: &[&str]) -> Result<T> {
        for name in names {
            if let Some(raw) = self.0.remove(*name) {
                return raw.parse().map_err(|_| {
                    Error::Parameter(format!("cannot parse {name}={raw:?}"))
                });
            }
        }
        Err(Error::Parameter(format!("missing parameter {}", names[0])))
    }

    fn finish(self) -> Result<()> {
        match self.0.keys().next() {
            Some(k) => Err(Error::Parameter(format!("unknown parameter {k:?}"))),
            None => Ok(()),
        }
    }
}

fn tree_size(d: usize, h: usize) -> Result<usize> {
    let mut total: usize = 1;
    let mut level: usize = 1;
    for _ in 0..h {
        level = level
            .checked_mul(d)
            .ok_or_else(|| Error::Parameter("tree too large".into()))?;
        total = total
            .checked_add(level)
            .ok_or_else(|| Error::Parameter("tree too large".into()))?;
    }
    Ok(total)
}

/// Generates a graph from `spec` using the stream seeded by `seed`.
pub fn generate(spec: &ModelSpec, seed: u64) -> Result<Graph> {
    spec.validate()?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    match *spec {
        ModelSpec::ErdosRenyi { n, p } => {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen::<f64>() < p {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        ModelSpec::BarabasiAlbert { n, m } => barabasi_albert(n, m, &mut rng),
        ModelSpec::WattsStrogatz { n, k, beta } => watts_strogatz(n, k, beta, &mut rng),
        ModelSpec::Geometric { n, r, torus } => {
            let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
            let r2 = r * r;
            let gap = |a: f64, b: f64| {
                let d = (a - b).abs();
                if torus {
                    d.min(1.0 - d)
                } else {
                    d
                }
            };
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let dx = gap(pts[i].0, pts[j].0);
                    let dy = gap(pts[i].1, pts[j].1);
                    if dx * dx + dy * dy <= r2 {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        ModelSpec::Regular { n, d } => random_regular(n, d, &mut rng),
        ModelSpec::Hyperbolic {
            n,
            radius,
            alpha,
            temperature,
        } => hyperbolic(n, radius, alpha, temperature, &mut rng),
        ModelSpec::StochasticBlock {
            ref sizes,
            p_in,
            p_out,
        } => {
            let block: Vec<usize> = sizes
                .iter()
                .enumerate()
                .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
                .collect();
            let n = block.len();
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let p = if block[i] == block[j] { p_in } else { p_out };
                    if rng.gen::<f64>() < p {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        ModelSpec::Cycle { n } => Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))),
        ModelSpec::Grid { lx, ly } => {
            let id = |x: usize, y: usize| x * ly + y;
            let mut edges = Vec::new();
            for x in 0..lx {
                for y in 0..ly {
                    if x + 1 < lx {
                        edges.push((id(x, y), id(x + 1, y)));
                    }
                    if y + 1 < ly {
                        edges.push((id(x, y), id(x, y + 1)));
                    }
                }
            }
            Graph::from_edges(lx * ly, edges)
        }
        ModelSpec::Torus { lx, ly } => {
            let id = |x: usize, y: usize| x * ly + y;
            let mut edges = Vec::new();
            for x in 0..lx {
                for y in 0..ly {
                    edges.push((id(x, y), id((x + 1) % lx, y)));
                    edges.push((id(x, y), id(x, (y + 1) % ly)));
                }
            }
            Graph::from_edges(lx * ly, edges)
        }
        ModelSpec::DaryTree { d, h } => {
            let n = tree_size(d, h)?;
            Graph::from_edges(n, (1..n).map(|v| ((v - 1) / d, v)))
        }
        ModelSpec::Complete { n } => {
            Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
        }
    }
}

fn barabasi_albert(n: usize, m: usize, rng: &mut SplitMix64) -> Result<Graph> {
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m * (m - 1) / 2 + m * (n - m));
    // Each vertex appears once per incident edge end, so a uniform pick from
    // `ends` is a degree-proportional pick.
    let mut ends: Vec<usize> = Vec::with_capacity(2 * edges.capacity());
    for a in 0..m {
        for b in a + 1..m {
            edges.push((a, b));
            ends.push(a);
            ends.push(b);
        }
    }
    let redraw_limit = 10 * n;
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    for t in m..n {
        chosen.clear();
        for _ in 0..m {
            let mut redraws = 0;
            loop {
                // With m = 1 the seed K_1 has no edges; fall back to uniform.
                let u = if ends.is_empty() {
                    rng.gen_range(0..t)
                } else {
                    ends[rng.gen_range(0..ends.len())]
                };
                if !chosen.contains(&u) {
                    chosen.push(u);
                    break;
                }
                redraws += 1;
                if redraws > redraw_limit {
                    return Err(Error::Generation(format!(
                        "BA re-draw limit {redraw_limit} exceeded at vertex {t}"
                    )));
                }
            }
        }
        for &u in &chosen {
            edges.push((u, t));
            ends.push(u);
            ends.push(t);
        }
    }
    Graph::from_edges(n, edges)
}

fn watts_strogatz(n: usize, k: usize, beta: f64, rng: &mut SplitMix64) -> Result<Graph> {
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    for i in 0..n {
        for d in 1..=k / 2 {
            let j = (i + d) % n;
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }
    let mut candidates = Vec::with_capacity(n);
    for d in 1..=k / 2 {
        for i in 0..n {
            let j = (i + d) % n;
            if rng.gen::<f64>() >= beta {
                continue;
            }
            candidates.clear();
            candidates.extend((0..n).filter(|&w| w != i && !adj[i].contains(&w)));
            if candidates.is_empty() || !adj[i].contains(&j) {
                continue;
            }
            let w = candidates[rng.gen_range(0..candidates.len())];
            adj[i].remove(&j);
            adj[j].remove(&i);
            adj[i].insert(w);
            adj[w].insert(i);
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(a, nb)| nb.iter().filter(move |&&b| a < b).map(move |&b| (a, b)));
    Graph::from_edges(n, edges)
}

fn random_regular(n: usize, d: usize, rng: &mut SplitMix64) -> Result<Graph> {
    let mut edges: HashSet<(usize, usize)> = HashSet::with_capacity(n * d / 2);
    'restart: for _ in 0..=REGULAR_RESTARTS {
        edges.clear();
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        stubs.shuffle(rng);
        while let Some(u) = stubs.pop() {
            let partner = stubs
                .iter()
                .rposition(|&v| v != u && !edges.contains(&(u.min(v), u.max(v))));
            match partner {
                Some(pos) => {
                    let v = stubs.remove(pos);
                    edges.insert((u.min(v), u.max(v)));
                }
                None => continue 'restart,
            }
        }
        let mut list: Vec<_> = edges.iter().copied().collect();
        list.sort_unstable();
        return Graph::from_edges(n, list);
    }
    Err(Error::Generation(format!(
        "regular({n}, {d}) failed after {REGULAR_RESTARTS} restarts"
    )))
}

fn hyperbolic(
    n: usize,
    radius: f64,
    alpha: f64,
    temperature: f64,
    rng: &mut SplitMix64,
) -> Result<Graph> {
    let span = (alpha * radius).cosh() - 1.0;
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let theta = 2.0 * PI * rng.gen::<f64>();
            // Inverse of F(r) = (cosh(alpha r) - 1) / (cosh(alpha R) - 1).
            let r = (1.0 + rng.gen::<f64>() * span).acosh() / alpha;
            (theta, r.min(radius))
        })
        .collect();
    let hyp: Vec<(f64, f64)> = pts.iter().map(|&(_, r)| (r.cosh(), r.sinh())).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut dtheta = (pts[i].0 - pts[j].0).abs();
            if dtheta > PI {
                dtheta = 2.0 * PI - dtheta;
            }
            let arg = (hyp[i].0 * hyp[j].0 - hyp[i].1 * hyp[j].1 * dtheta.cos()).max(1.0);
            let dist = arg.acosh();
            let linked = if temperature == 0.0 {
                dist <= radius
            } else {
                let p = 1.0 / (1.0 + ((dist - radius) / (2.0 * temperature)).exp());
                rng.gen::<f64>() < p
            };
            if linked {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges)
}
