//! Digraphs of nonnegative matrices: communicating classes, periods,
//! canonical block-triangular order and the scrambling index.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Directed graph on `0..n`, loops allowed, no multi-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    adj: Vec<bool>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph { n, adj: vec![false; n * n] }
    }

    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Digraph::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidMatrix(format!("edge ({i},{j}) outside 0..{n}")));
            }
            g.adj[i * n + j] = true;
        }
        Ok(g)
    }

    /// Directed cycle `0 → 1 → … → n-1 → 0`.
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Digraph::new(n, &edges).expect("cycle edges are in range")
    }

    /// Every ordered pair, loops included.
    pub fn complete(n: usize) -> Self {
        Digraph { n, adj: vec![true; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        self.adj[i * self.n + j] = true;
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_edge(i, j))
            .collect()
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.has_edge(i, j))
    }
}

/// `G_A`: edge `(i, j)` iff `|A_ji| > tau_zero`.
pub fn digraph_of(a: &ComplexMatrix, tau_zero: f64) -> Digraph {
    let n = a.dim();
    let mut g = Digraph::empty(n);
    for i in 0..n {
        for j in 0..n {
            if a.get(j, i).norm() > tau_zero {
                g.add_edge(i, j);
            }
        }
    }
    g
}

#[derive(Serialize, Deserialize)]
struct DigraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// Wire format is 1-indexed.
impl Serialize for Digraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DigraphJson { n: self.n, edges: self.edges().into_iter().map(|(i, j)| [i + 1, j + 1]).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = DigraphJson::deserialize(d)?;
        let mut edges = Vec::with_capacity(j.edges.len());
        for [a, b] in j.edges {
            if a == 0 || b == 0 {
                return Err(D::Error::custom("digraph vertices are 1-indexed"));
            }
            edges.push((a - 1, b - 1));
        }
        Digraph::new(j.n, &edges).map_err(D::Error::custom)
    }
}

/// Communicating classes in canonical order: closed classes first, and an
/// edge between distinct classes always points to an earlier class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDecomposition {
    /// Each class lists its vertices in ascending order.
    pub classes: Vec<Vec<usize>>,
    pub closed: Vec<bool>,
    pub accessible: Vec<bool>,
    /// 0 for a single vertex without a loop.
    pub periods: Vec<usize>,
    /// Class of each vertex.
    pub class_of: Vec<usize>,
}

impl ClassDecomposition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn closed_count(&self) -> usize {
        self.closed.iter().filter(|&&c| c).count()
    }

    /// Indices of closed classes.
    pub fn closed_classes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.closed[k]).collect()
    }
}

/// Tarjan's algorithm, iterative. Returns a component id per vertex.
fn strongly_connected_components(g: &Digraph) -> (usize, Vec<usize>) {
    let n = g.n();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![UNSET; n];
    let mut next_index = 0;
    let mut ncomp = 0;

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        // Call stack of (vertex, next successor to try).
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if let Some(w) = (*next..n).find(|&w| g.has_edge(v, w)) {
                *next = w + 1;
                if index[w] == UNSET {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = ncomp;
                    if w == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }
    (ncomp, comp)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Period of the subgraph induced by `class` (assumed strongly connected):
/// gcd of `level(u) + 1 - level(v)` over its edges, from a BFS.
fn class_period(g: &Digraph, class: &[usize], in_class: &[bool]) -> usize {
    if class.len() == 1 {
        let v = class[0];
        return usize::from(g.has_edge(v, v));
    }
    let n = g.n();
    let mut level = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    level[class[0]] = 0;
    queue.push_back(class[0]);
    while let Some(u) = queue.pop_front() {
        for v in g.successors(u) {
            if in_class[v] && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut p = 0;
    for &u in class {
        for v in g.successors(u) {
            if in_class[v] {
                let diff = (level[u] as i64 + 1 - level[v] as i64).unsigned_abs() as usize;
                p = gcd(p, diff);
            }
        }
    }
    p
}

pub fn communicating_classes(g: &Digraph) -> ClassDecomposition {
    let n = g.n();
    let (ncomp, comp) = strongly_connected_components(g);

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for v in 0..n {
        members[comp[v]].push(v);
    }
    // Condensation edges between distinct components.
    let mut succ = vec![vec![false; ncomp]; ncomp];
    for (u, v) in g.edges() {
        if comp[u] != comp[v] {
            succ[comp[u]][comp[v]] = true;
        }
    }
    let closed_c: Vec<bool> = (0..ncomp).map(|c| !succ[c].iter().any(|&b| b)).collect();

    // Place a component once all its successors are placed; among the
    // ready ones prefer closed, then smallest vertex.
    let mut placed = vec![false; ncomp];
    let mut order = Vec::with_capacity(ncomp);
    while order.len() < ncomp {
        let next = (0..ncomp)
            .filter(|&c| !placed[c] && (0..ncomp).all(|s| !succ[c][s] || placed[s]))
            .min_by_key(|&c| (!closed_c[c], members[c][0]))
            .expect("condensation is acyclic");
        placed[next] = true;
        order.push(next);
    }

    let classes: Vec<Vec<usize>> = order.iter().map(|&c| members[c].clone()).collect();
    let mut class_of = vec![0; n];
    for (k, cl) in classes.iter().enumerate() {
        for &v in cl {
            class_of[v] = k;
        }
    }
    let closed: Vec<bool> = order.iter().map(|&c| closed_c[c]).collect();

    let reach = reachability(g);
    let mut in_class = vec![false; n];
    let mut periods = Vec::with_capacity(classes.len());
    let mut accessible = Vec::with_capacity(classes.len());
    for cl in &classes {
        for &v in cl {
            in_class[v] = true;
        }
        periods.push(class_period(g, cl, &in_class));
        accessible.push((0..n).all(|i| in_class[i] || cl.iter().any(|&j| reach[i * n + j])));
        for &v in cl {
            in_class[v] = false;
        }
    }
    ClassDecomposition { classes, closed, accessible, periods, class_of }
}

/// `reach[i*n + j]` iff there is a walk of length ≥ 1 from `i` to `j`.
fn reachability(g: &Digraph) -> Vec<bool> {
    let n = g.n();
    let mut r = g.adj.clone();
    for k in 0..n {
        for i in 0..n {
            if r[i * n + k] {
                for j in 0..n {
                    if r[k * n + j] {
                        r[i * n + j] = true;
                    }
                }
            }
        }
    }
    r
}

/// A single vertex counts only if it carries a loop.
pub fn is_strongly_connected(g: &Digraph) -> bool {
    let dec = communicating_classes(g);
    dec.len() == 1 && dec.periods[0] > 0
}

pub fn is_aperiodic(g: &Digraph) -> bool {
    let dec = communicating_classes(g);
    dec.len() == 1 && dec.periods[0] == 1
}

/// Period of a strongly connected digraph, `None` otherwise.
pub fn period(g: &Digraph) -> Option<usize> {
    let dec = communicating_classes(g);
    (dec.len() == 1 && dec.periods[0] > 0).then(|| dec.periods[0])
}

fn bool_product(a: &[bool], b: &[bool], n: usize) -> Vec<bool> {
    let mut out = vec![false; n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k] {
                for j in 0..n {
                    if b[k * n + j] {
                        out[i * n + j] = true;
                    }
                }
            }
        }
    }
    out
}

/// `(n - 1)^2 + 1`.
pub fn default_scrambling_cap(n: usize) -> usize {
    n.saturating_sub(1).pow(2) + 1
}

/// Smallest `m ≤ n_max` such that every pair of vertices (equal ones
/// included) reaches a common vertex in exactly `m` steps; 0 if none.
pub fn scrambling_index(g: &Digraph, n_max: usize) -> usize {
    let n = g.n();
    let mut power = g.adj.clone();
    for m in 1..=n_max {
        let scrambles = (0..n).all(|i| {
            (i..n).all(|j| (0..n).any(|k| power[i * n + k] && power[j * n + k]))
        });
        if scrambles {
            return m;
        }
        if m < n_max {
            power = bool_product(&power, &g.adj, n);
        }
    }
    0
}

/// `perm[r]` is the original index placed at position `r`, so that
/// `(P A Pᵀ)_{rc} = A[perm[r], perm[c]]` is block upper-triangular with the
/// communicating classes as diagonal blocks and closed classes first.
pub fn canonical_permutation(a: &ComplexMatrix, tau_zero: f64) -> Vec<usize> {
    communicating_classes(&digraph_of(a, tau_zero)).classes.concat()
}

pub fn permute(a: &ComplexMatrix, perm: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.dim(), |r, c| a.get(perm[r], perm[c]))
}
