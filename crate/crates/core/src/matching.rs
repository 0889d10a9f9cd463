//! Hopcroft–Karp maximum-cardinality bipartite matching, O(E√V).
//!
//! The solver keeps its buffers between calls so that matching one small
//! bipartite graph per edge does not allocate.

const NIL: usize = usize::MAX;
const INF: u32 = u32::MAX;

/// Bipartite graph in CSR form: left vertex `a` is adjacent to right vertices
/// `targets[offsets[a]..offsets[a + 1]]`.
#[derive(Clone, Debug, Default)]
pub struct Bipartite {
    pub right: usize,
    pub offsets: Vec<usize>,
    pub targets: Vec<usize>,
}

impl Bipartite {
    pub fn new() -> Self {
        Bipartite {
            right: 0,
            offsets: vec![0],
            targets: Vec::new(),
        }
    }

    pub fn from_adjacency(right: usize, adj: &[Vec<usize>]) -> Self {
        let mut b = Bipartite::new();
        b.right = right;
        for row in adj {
            b.targets.extend_from_slice(row);
            b.offsets.push(b.targets.len());
        }
        b
    }

    pub fn clear(&mut self, right: usize) {
        self.right = right;
        self.offsets.clear();
        self.offsets.push(0);
        self.targets.clear();
    }

    pub fn left(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn row(&self, a: usize) -> &[usize] {
        &self.targets[self.offsets[a]..self.offsets[a + 1]]
    }
}

#[derive(Clone, Debug, Default)]
pub struct HopcroftKarp {
    mate_left: Vec<usize>,
    mate_right: Vec<usize>,
    layer: Vec<u32>,
    queue: Vec<usize>,
    cursor: Vec<usize>,
    stack: Vec<usize>,
}

impl HopcroftKarp {
    pub fn new() -> Self {
        Self::default()
    }

    /// Size of a maximum matching of `b`.
    pub fn max_matching(&mut self, b: &Bipartite) -> usize {
        let nl = b.left();
        self.mate_left.clear();
        self.mate_left.resize(nl, NIL);
        self.mate_right.clear();
        self.mate_right.resize(b.right, NIL);
        self.layer.resize(nl, INF);
        self.cursor.resize(nl, 0);

        let mut size = 0;
        while self.bfs(b) {
            for a in 0..nl {
                self.cursor[a] = b.offsets[a];
            }
            for a in 0..nl {
                if self.mate_left[a] == NIL && self.dfs(b, a) {
                    size += 1;
                }
            }
        }
        size
    }

    /// Matched right partner of every left vertex from the last call.
    pub fn mate_left(&self) -> impl Iterator<Item = Option<usize>> + '_ {
        self.mate_left.iter().map(|&m| (m != NIL).then_some(m))
    }

    fn bfs(&mut self, b: &Bipartite) -> bool {
        self.queue.clear();
        for a in 0..b.left() {
            if self.mate_left[a] == NIL {
                self.layer[a] = 0;
                self.queue.push(a);
            } else {
                self.layer[a] = INF;
            }
        }
        let mut found = false;
        let mut head = 0;
        while head < self.queue.len() {
            let a = self.queue[head];
            head += 1;
            for &r in b.row(a) {
                let next = self.mate_right[r];
                if next == NIL {
                    found = true;
                } else if self.layer[next] == INF {
                    self.layer[next] = self.layer[a] + 1;
                    self.queue.push(next);
                }
            }
        }
        found
    }

    /// Iterative layered DFS for an augmenting path from free left vertex `root`.
    fn dfs(&mut self, b: &Bipartite, root: usize) -> bool {
        self.stack.clear();
        self.stack.push(root);
        while let Some(&a) = self.stack.last() {
            let end = b.offsets[a + 1];
            let mut advanced = false;
            while self.cursor[a] < end {
                let r = b.targets[self.cursor[a]];
                let next = self.mate_right[r];
                if next == NIL {
                    // Flip the path held on the stack.
                    let mut right = r;
                    while let Some(x) = self.stack.pop() {
                        let prev = self.mate_left[x];
                        self.mate_left[x] = right;
                        self.mate_right[right] = x;
                        right = prev;
                    }
                    return true;
                }
                if self.layer[next] == self.layer[a] + 1 {
                    self.stack.push(next);
                    advanced = true;
                    break;
                }
                self.cursor[a] += 1;
            }
            if !advanced {
                self.layer[a] = INF;
                self.stack.pop();
                if let Some(&parent) = self.stack.last() {
                    self.cursor[parent] += 1;
                }
            }
        }
        false
    }
}

/// One-shot convenience wrapper.
pub fn max_matching(b: &Bipartite) -> usize {
    HopcroftKarp::new().max_matching(b)
}
