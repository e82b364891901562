//! Finite simple graphs on dense vertex indices `0..n`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::density;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// An undirected simple graph. Adjacency lists are kept sorted so that edge
/// queries are binary searches and iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    name: Option<String>,
}

/// Graphs used as factors of a product. Connectivity is checked when the
/// factor is registered with a [`ProductSpace`](crate::product::ProductSpace).
pub type FactorGraph = Graph;

impl Graph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
            edge_count += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { adj, edge_count, name: None })
    }

    /// Builds a graph from an edge list that may contain repeats; duplicates
    /// are dropped. Loops are still rejected.
    pub fn from_edges_dedup<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let set: BTreeSet<(usize, usize)> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        Graph::new(n, set)
    }

    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], edge_count: 0, name: None }
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewVertices { needed: 3, found: n });
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("clique is simple")
    }

    /// The star `K_{1,leaves}` with the center at index 0.
    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (1..=leaves).map(|x| (0, x))).expect("star is simple")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Canonical edge list: pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edge_iter().collect()
    }

    pub fn edge_iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut n = self.adj[v].clone();
        let pos = n.binary_search(&v).unwrap_err();
        n.insert(pos, v);
        n
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> Vec<usize> {
        let (a, b) = (&self.adj[u], &self.adj[v]);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        self.component_of(0).len() == n
    }

    /// Vertices reachable from `start`, in BFS order.
    pub fn component_of(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.vertex_count()];
        let mut order = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                    queue.push_back(y);
                }
            }
        }
        order
    }

    /// Whether the given vertex set induces a connected subgraph.
    pub fn is_connected_subset(&self, vertices: &[usize]) -> bool {
        let Some(&start) = vertices.first() else { return true };
        let mut inside = vec![false; self.vertex_count()];
        for &v in vertices {
            inside[v] = true;
        }
        let mut seen = vec![false; self.vertex_count()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if inside[y] && !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == vertices.len()
    }

    /// Subgraph induced by `vertices`; vertex `vertices[k]` becomes `k`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (k, &v) in vertices.iter().enumerate() {
            index[v] = k;
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        let mut edge_count = 0;
        for (k, &v) in vertices.iter().enumerate() {
            for &y in &self.adj[v] {
                let j = index[y];
                if j != usize::MAX {
                    adj[k].push(j);
                    if j > k {
                        edge_count += 1;
                    }
                }
            }
            adj[k].sort_unstable();
        }
        Graph { adj, edge_count, name: None }
    }

    pub fn complement(&self) -> Graph {
        let n = self.vertex_count();
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges.filter(|&(u, v)| !self.has_edge(u, v))).expect("complement is simple")
    }

    /// Edges with both endpoints in the set (indicator by vertex).
    pub fn edges_within(&self, inside: &[bool]) -> usize {
        self.edge_iter().filter(|&(u, v)| inside[u] && inside[v]).count()
    }
}

/// What a vertex ordering certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingKind {
    Degeneracy,
    MinDismantling,
    PerfectElimination,
    Arbitrary,
}

/// A permutation of the vertex set together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexOrdering {
    order: Vec<usize>,
    #[serde(skip)]
    position: Vec<usize>,
    kind: OrderingKind,
}

impl VertexOrdering {
    pub fn new(order: Vec<usize>, kind: OrderingKind) -> Result<Self> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if position[v] != usize::MAX {
                return Err(Error::Parse(format!("vertex {v} repeated in ordering")));
            }
            position[v] = i;
        }
        Ok(VertexOrdering { order, position, kind })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn kind(&self) -> OrderingKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Neighbors of `v` placed after it in the ordering.
    pub fn later_neighbors<'g>(&'g self, g: &'g Graph, v: usize) -> impl Iterator<Item = usize> + 'g {
        let p = self.position[v];
        g.neighbors(v).iter().copied().filter(move |&y| self.position[y] > p)
    }

    /// Largest number of later neighbors over all vertices.
    pub fn max_later_degree(&self, g: &Graph) -> usize {
        (0..g.vertex_count()).map(|v| self.later_neighbors(g, v).count()).max().unwrap_or(0)
    }
}

pub fn degree_sequence(g: &Graph) -> Vec<usize> {
    (0..g.vertex_count()).map(|v| g.degree(v)).collect()
}

/// `2|E|/|V|` as an exact rational.
pub fn average_degree(g: &Graph) -> Result<Rational> {
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(rational::ratio(2 * g.edge_count(), g.vertex_count()))
}

/// Result of contracting one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub graph: Graph,
    /// `map[old]` is the vertex of the contracted graph that `old` became.
    pub map: Vec<usize>,
    /// Index of the merged vertex (the smaller of the two endpoints).
    pub merged: usize,
}

/// Contracts `uv` into a single vertex placed at index `min(u, v)`; vertices
/// above `max(u, v)` shift down by one. Parallel edges collapse.
pub fn contract_edge(g: &Graph, u: usize, v: usize) -> Result<Contraction> {
    if !g.has_edge(u, v) {
        return Err(Error::NotAnEdge(u, v));
    }
    let (keep, gone) = (u.min(v), u.max(v));
    let map: Vec<usize> = (0..g.vertex_count())
        .map(|x| match x.cmp(&gone) {
            std::cmp::Ordering::Less => x,
            std::cmp::Ordering::Equal => keep,
            std::cmp::Ordering::Greater => x - 1,
        })
        .collect();
    let edges = g.edge_iter().map(|(a, b)| (map[a], map[b])).filter(|(a, b)| a != b);
    let graph = Graph::from_edges_dedup(g.vertex_count() - 1, edges)?;
    Ok(Contraction { graph, map, merged: keep })
}

/// The star on an edge `uv`: center 0 stands for the edge itself, leaf `j`
/// (1-based) stands for the common neighbor `leaves[j - 1]` of `u` and `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStar {
    pub graph: Graph,
    pub leaves: Vec<usize>,
}

impl EdgeStar {
    pub const CENTER: usize = 0;

    /// Star vertex standing for original vertex `x`, if `x` is a leaf.
    pub fn leaf_of(&self, x: usize) -> Option<usize> {
        self.leaves.binary_search(&x).ok().map(|j| j + 1)
    }
}

pub fn star_of_edge(g: &Graph, u: usize, v: usize) -> Result<EdgeStar> {
    if !g.has_edge(u, v) {
        return Err(Error::NotAnEdge(u, v));
    }
    let leaves = g.common_neighbors(u, v);
    Ok(EdgeStar { graph: Graph::star(leaves.len()), leaves })
}

/// Repeated minimum-degree peeling (ties go to the smaller index). Returns
/// the peeling order and the degeneracy, i.e. the largest degree seen at
/// removal time.
pub fn degeneracy_ordering(g: &Graph) -> (VertexOrdering, usize) {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = degree_sequence(g);
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    while let Some((d, v)) = queue.pop_first() {
        degeneracy = degeneracy.max(d);
        removed[v] = true;
        order.push(v);
        for &y in g.neighbors(v) {
            if !removed[y] {
                queue.remove(&(deg[y], y));
                deg[y] -= 1;
                queue.insert((deg[y], y));
            }
        }
    }
    let ordering = VertexOrdering::new(order, OrderingKind::Degeneracy).expect("peeling visits every vertex once");
    (ordering, degeneracy)
}

pub fn degeneracy(g: &Graph) -> usize {
    degeneracy_ordering(g).1
}

/// Two distinct vertices of smallest degree (ties to the smaller index).
///
/// For a connected graph both have degree at most `ceil(mad(g))`; the same
/// holds for disconnected graphs, by applying the connected case to any
/// component with two or more vertices.
pub fn two_min_degree_vertices(g: &Graph) -> Result<(usize, usize)> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::TooFewVertices { needed: 2, found: n });
    }
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (g.degree(v), v));
    Ok((by_degree[0], by_degree[1]))
}

/// The bound `ceil(mad(g))` on the degree of the two vertices returned by
/// [`two_min_degree_vertices`].
pub fn two_vertex_degree_bound(g: &Graph) -> Result<usize> {
    Ok(rational::ceil(&density::mad(g)?) as usize)
}

/// Parses the edge-list text format: a header `n m`, then `m` lines `u v`.
/// Blank lines and `#` comments are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut tokens = text.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(str::split_whitespace);
    let mut next = |what: &str| -> Result<usize> {
        let tok = tokens.next().ok_or_else(|| Error::Parse(format!("missing {what}")))?;
        tok.parse().map_err(|_| Error::Parse(format!("bad {what}: {tok:?}")))
    };
    let n = next("vertex count")?;
    let m = next("edge count")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let u = next("edge endpoint")?;
        let v = next("edge endpoint")?;
        edges.push((u, v));
    }
    if tokens.next().is_some() {
        return Err(Error::Parse(format!("more than the declared {m} edges")));
    }
    Graph::new(n, edges)
}

/// Writes the canonical edge-list text (edges sorted, `u < v`).
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edge_iter() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}
