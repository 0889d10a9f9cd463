//! Immutable simple undirected graphs in compressed sparse row form.
//!
//! Every adjacency slice is strictly increasing, so neighborhood
//! intersections run as sorted merges. Vertex ids are dense and 0-based.

use std::collections::{HashMap, HashSet, VecDeque};
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// An edge in canonical orientation, `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeKey {
    pub u: Vertex,
    pub v: Vertex,
}

impl EdgeKey {
    /// Orders the endpoints. Panics on a self-loop.
    pub fn new(a: Vertex, b: Vertex) -> Self {
        assert!(a != b, "an edge needs two distinct endpoints");
        if a < b {
            EdgeKey { u: a, v: b }
        } else {
            EdgeKey { u: b, v: a }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Self-loops, duplicate edges (in either
    /// orientation) and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
        for (a, b) in edges {
            if a >= n {
                return Err(Error::VertexOutOfRange(a));
            }
            if b >= n {
                return Err(Error::VertexOutOfRange(b));
            }
            if a == b {
                return Err(Error::NotSimple(format!("self-loop at vertex {a}")));
            }
            pairs.push((a.min(b), a.max(b)));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::NotSimple(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }

        let mut degree = vec![0usize; n];
        for &(a, b) in &pairs {
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * pairs.len()];
        for &(a, b) in &pairs {
            targets[cursor[a]] = b;
            cursor[a] += 1;
            targets[cursor[b]] = a;
            cursor[b] += 1;
        }
        for u in 0..n {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Ok(Graph { offsets, targets })
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sorted neighbors of `u`. Panics if `u` is out of range.
    #[inline]
    pub fn neighbors(&self, u: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Degree of `u`. Panics if `u` is out of range.
    #[inline]
    pub fn deg(&self, u: Vertex) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Checked degree.
    pub fn degree(&self, u: Vertex) -> Result<usize> {
        self.check_vertex(u)?;
        Ok(self.deg(u))
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|u| self.deg(u)).max().unwrap_or(0)
    }

    pub fn check_vertex(&self, u: Vertex) -> Result<()> {
        if u < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(u))
        }
    }

    /// Adjacency test by binary search in the shorter list.
    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        if a >= self.vertex_count() || b >= self.vertex_count() {
            return false;
        }
        let (x, y) = if self.deg(a) <= self.deg(b) { (a, b) } else { (b, a) };
        self.neighbors(x).binary_search(&y).is_ok()
    }

    /// Canonical key for the edge `{a, b}`, or an error if it is absent.
    pub fn edge_key(&self, a: Vertex, b: Vertex) -> Result<EdgeKey> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a != b && self.has_edge(a, b) {
            Ok(EdgeKey::new(a, b))
        } else {
            Err(Error::NotAnEdge(a, b))
        }
    }

    /// All edges in canonical order: ascending `u`, then ascending `v`.
    pub fn edges(&self) -> impl Iterator<Item = EdgeKey> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            let nbrs = self.neighbors(u);
            let start = nbrs.partition_point(|&v| v <= u);
            nbrs[start..].iter().map(move |&v| EdgeKey { u, v })
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        bfs_distances(self, 0).iter().all(Option::is_some)
    }
}

/// Options for [`load_edge_list`].
#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Drop repeated edges with a warning instead of failing.
    pub dedup: bool,
}

/// A parsed edge list together with the id mapping used to densify it.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `original_ids[v]` is the id that vertex `v` carried in the input.
    pub original_ids: Vec<u64>,
    pub duplicates_dropped: usize,
}

impl LoadedGraph {
    /// True when the input ids were already `0..n`.
    pub fn is_identity(&self) -> bool {
        self.original_ids
            .iter()
            .enumerate()
            .all(|(i, &id)| id == i as u64)
    }
}

const VERTICES_DIRECTIVE: &str = "vertices:";

/// Reads a whitespace-separated edge list.
///
/// Lines starting with `#` are comments. A comment of the form
/// `# vertices: N` declares the vertex count; when every id is below `N` the
/// ids are kept as is, which preserves isolated vertices. Otherwise the
/// distinct ids are mapped to `0..n` in increasing order.
pub fn load_edge_list<R: BufRead>(reader: R, opts: LoadOptions) -> Result<LoadedGraph> {
    let mut declared: Option<u64> = None;
    let mut raw: Vec<(u64, u64)> = Vec::new();
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    let mut duplicates_dropped = 0;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(rest) = comment.trim().strip_prefix(VERTICES_DIRECTIVE) {
                declared = rest.trim().parse().ok();
            }
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next_id = || -> Result<u64> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "expected two vertex ids".into(),
            })?;
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("malformed vertex id {tok:?}"),
            })
        };
        let a = next_id()?;
        let b = next_id()?;
        if let Some(extra) = tokens.next() {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("unexpected token {extra:?}"),
            });
        }
        if a == b {
            return Err(Error::NotSimple(format!(
                "self-loop at vertex {a} on line {lineno}"
            )));
        }
        let key = (a.min(b), a.max(b));
        if !seen.insert(key) {
            if opts.dedup {
                log::warn!("line {lineno}: dropping duplicate edge ({a}, {b})");
                duplicates_dropped += 1;
                continue;
            }
            return Err(Error::NotSimple(format!(
                "duplicate edge ({a}, {b}) on line {lineno}"
            )));
        }
        raw.push(key);
    }

    let max_id = raw.iter().map(|&(_, b)| b).max();
    let (n, original_ids, edges): (usize, Vec<u64>, Vec<(usize, usize)>) =
        match (declared, max_id) {
            (Some(n), m) if m.is_none_or(|m| m < n) => (
                n as usize,
                (0..n).collect(),
                raw.iter().map(|&(a, b)| (a as usize, b as usize)).collect(),
            ),
            _ => {
                let mut ids: Vec<u64> = raw.iter().flat_map(|&(a, b)| [a, b]).collect();
                ids.sort_unstable();
                ids.dedup();
                let index: HashMap<u64, usize> =
                    ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
                let edges = raw.iter().map(|&(a, b)| (index[&a], index[&b])).collect();
                (ids.len(), ids, edges)
            }
        };

    Ok(LoadedGraph {
        graph: Graph::from_edges(n, edges)?,
        original_ids,
        duplicates_dropped,
    })
}

/// Parses edge-list text with default options.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    Ok(load_edge_list(text.as_bytes(), LoadOptions::default())?.graph)
}

/// Writes the edge list in canonical order, preceded by a `# vertices: N`
/// comment so that isolated vertices survive a reload.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# {VERTICES_DIRECTIVE} {}", g.vertex_count())?;
    for e in g.edges() {
        writeln!(out, "{} {}", e.u, e.v)?;
    }
    Ok(())
}

pub fn to_edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("edge lists are ASCII")
}

/// Breadth-first distances from `source`; `None` marks unreachable vertices.
pub fn bfs_distances(g: &Graph, source: Vertex) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].unwrap();
        for &y in g.neighbors(x) {
            if dist[y].is_none() {
                dist[y] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Depth-limited distances from a set of sources.
#[derive(Clone, Debug)]
pub struct TruncatedDistances {
    max_depth: u32,
    per_source: HashMap<Vertex, HashMap<Vertex, u32>>,
}

impl TruncatedDistances {
    /// Distance from `source` to `v` if it is at most the horizon.
    /// Panics if `source` was not one of the queried sources.
    pub fn get(&self, source: Vertex, v: Vertex) -> Option<u32> {
        self.per_source[&source].get(&v).copied()
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn sources(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.per_source.keys().copied()
    }
}

/// Breadth-first search from each source, stopping after `max_depth` hops.
pub fn truncated_distances(
    g: &Graph,
    sources: &[Vertex],
    max_depth: u32,
) -> Result<TruncatedDistances> {
    let mut per_source = HashMap::with_capacity(sources.len());
    for &s in sources {
        g.check_vertex(s)?;
        if per_source.contains_key(&s) {
            continue;
        }
        let mut dist: HashMap<Vertex, u32> = HashMap::new();
        dist.insert(s, 0);
        let mut frontier = vec![s];
        for depth in 1..=max_depth {
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in g.neighbors(x) {
                    if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(y) {
                        slot.insert(depth);
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        per_source.insert(s, dist);
    }
    Ok(TruncatedDistances {
        max_depth,
        per_source,
    })
}
