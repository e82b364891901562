//! Exact density, maximum average degree, arboricity, forest decompositions
//! and bounded-outdegree orientations.
//!
//! All optimisation is done with integer max-flow on a closure network:
//! source to every edge node with capacity `q`, edge node to both endpoints
//! with infinite capacity, vertex node to sink with capacity `p`. The best
//! closure maximises `q|E(S)| - p|S|`, so a positive value certifies a set
//! of density above `p/q`. Iterating on the certified set (Dinkelbach) ends
//! at the exact optimum because densities are rationals with denominator at
//! most `n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{FlowNetwork, INF};
use crate::graph::{degeneracy_ordering, Graph};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    #[serde(with = "rational::as_string")]
    pub density: Rational,
    pub witness: Vec<usize>,
    #[serde(with = "rational::as_string")]
    pub mad: Rational,
}

/// Maximises `q|E(S)| - p|S|` over vertex sets (nonempty and containing
/// `forced` when given; the empty set otherwise scores zero).
fn best_closure(g: &Graph, p: i64, q: i64, forced: Option<usize>) -> (i64, Vec<usize>) {
    let edges = g.edges();
    let m = edges.len();
    let (s, t) = (0, 1);
    let vnode = |v: usize| 2 + m + v;
    let mut net = FlowNetwork::new(2 + m + g.vertex_count());
    for (k, &(u, v)) in edges.iter().enumerate() {
        net.add_arc(s, 2 + k, q);
        net.add_arc(2 + k, vnode(u), INF);
        net.add_arc(2 + k, vnode(v), INF);
    }
    for v in 0..g.vertex_count() {
        net.add_arc(vnode(v), t, p);
    }
    if let Some(v) = forced {
        net.add_arc(s, vnode(v), INF);
    }
    let cut = net.max_flow(s, t);
    let side = net.source_side(s);
    let set: Vec<usize> = (0..g.vertex_count()).filter(|&v| side[vnode(v)]).collect();
    (q * m as i64 - cut, set)
}

fn edges_in(g: &Graph, set: &[usize]) -> usize {
    let mut inside = vec![false; g.vertex_count()];
    for &v in set {
        inside[v] = true;
    }
    g.edges_within(&inside)
}

/// Exact densest subgraph: the maximum of `|E(S)|/|S|` over nonempty `S`.
pub fn densest_subgraph(g: &Graph) -> Result<DensityReport> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut witness: Vec<usize> = (0..n).collect();
    let mut best = rational::ratio(g.edge_count(), n);
    loop {
        let (gain, set) = best_closure(g, *best.numer(), *best.denom(), None);
        if gain <= 0 || set.is_empty() {
            break;
        }
        let next = rational::ratio(edges_in(g, &set), set.len());
        debug_assert!(next > best);
        best = next;
        witness = set;
    }
    Ok(DensityReport { density: best, witness, mad: best * 2 })
}

pub fn density(g: &Graph) -> Result<Rational> {
    Ok(densest_subgraph(g)?.density)
}

pub fn mad(g: &Graph) -> Result<Rational> {
    Ok(densest_subgraph(g)?.mad)
}

/// `max |E(S)| / (|S| - 1)` over vertex sets with at least two vertices,
/// with a maximising set. `None` when the graph has fewer than two vertices.
pub fn nash_williams_ratio(g: &Graph) -> Option<(Rational, Vec<usize>)> {
    let n = g.vertex_count();
    if n < 2 {
        return None;
    }
    let mut witness: Vec<usize> = (0..n).collect();
    let mut best = rational::ratio(g.edge_count(), n - 1);
    loop {
        let (a, b) = (*best.numer(), *best.denom());
        // the singleton {v} scores exactly -a, so anything above that has
        // at least two vertices
        let improved = (0..n)
            .map(|v| best_closure(g, a, b, Some(v)))
            .filter(|(gain, _)| gain + a > 0)
            .map(|(_, set)| (rational::ratio(edges_in(g, &set), set.len() - 1), set))
            .max_by(|x, y| x.0.cmp(&y.0).then_with(|| y.1.cmp(&x.1)));
        match improved {
            Some((r, set)) if r > best => {
                best = r;
                witness = set;
            }
            _ => break,
        }
    }
    Some((best, witness))
}

/// Nash-Williams arboricity: the minimum `k` with `|E(S)| <= k(|S| - 1)` for
/// every vertex set `S`.
pub fn arboricity(g: &Graph) -> usize {
    nash_williams_ratio(g).map_or(0, |(r, _)| rational::ceil(&r) as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestDecomposition {
    pub k: usize,
    /// Canonical edge list of the decomposed graph.
    pub edges: Vec<(usize, usize)>,
    /// `assignment[j]` is the forest holding `edges[j]`.
    pub assignment: Vec<usize>,
}

impl ForestDecomposition {
    pub fn forest(&self, class: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().zip(&self.assignment).filter(move |(_, &c)| c == class).map(|(&e, _)| e)
    }

    /// Checks that the classes partition `E(g)` and that each is acyclic.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.edges != g.edges() {
            return Err(Error::InvalidDecomposition("edge list differs from the graph".into()));
        }
        if self.assignment.len() != self.edges.len() {
            return Err(Error::InvalidDecomposition("assignment length mismatch".into()));
        }
        if let Some(&c) = self.assignment.iter().find(|&&c| c >= self.k) {
            return Err(Error::InvalidDecomposition(format!("class {c} out of range")));
        }
        for class in 0..self.k {
            let mut uf = UnionFind::new(g.vertex_count());
            for (u, v) in self.forest(class) {
                if !uf.union(u, v) {
                    return Err(Error::InvalidDecomposition(format!("class {class} has a cycle through {u}-{v}")));
                }
            }
        }
        Ok(())
    }
}

/// Decomposes `E(g)` into `k` forests, `k` at least the degeneracy.
///
/// Edges are oriented along a degeneracy ordering and each vertex spreads
/// its forward edges over distinct classes. Inside one class every vertex
/// has at most one forward edge, so a cycle would need its earliest vertex
/// to have two.
pub fn forest_decomposition(g: &Graph, k: usize) -> Result<ForestDecomposition> {
    let (order, degeneracy) = degeneracy_ordering(g);
    if k < degeneracy {
        return Err(Error::InsufficientClasses { k, degeneracy });
    }
    let edges = g.edges();
    let mut assignment = vec![0; edges.len()];
    for v in 0..g.vertex_count() {
        for (slot, y) in order.later_neighbors(g, v).enumerate() {
            let e = (v.min(y), v.max(y));
            let j = edges.binary_search(&e).expect("edge of g");
            assignment[j] = slot;
        }
    }
    let fd = ForestDecomposition { k, edges, assignment };
    fd.validate(g)?;
    Ok(fd)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    /// `(tail, head)` per edge, aligned with the canonical edge list.
    pub arcs: Vec<(usize, usize)>,
    pub max_outdegree: usize,
}

impl Orientation {
    pub fn outdegrees(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for &(tail, _) in &self.arcs {
            out[tail] += 1;
        }
        out
    }
}

/// An orientation with every outdegree at most `d`. One exists exactly when
/// `d >= ceil(dens(g))`; it is read off an edge-to-vertex assignment flow.
pub fn bounded_outdegree_orientation(g: &Graph, d: usize) -> Result<Orientation> {
    let dens = if g.vertex_count() == 0 { Rational::from_integer(0) } else { density(g)? };
    if (d as i64) < rational::ceil(&dens) {
        return Err(Error::Infeasible { d, density: rational::format(&dens) });
    }
    let edges = g.edges();
    let m = edges.len();
    let (s, t) = (0, 1);
    let vnode = |v: usize| 2 + m + v;
    let mut net = FlowNetwork::new(2 + m + g.vertex_count());
    let mut choice = Vec::with_capacity(m);
    for (k, &(u, v)) in edges.iter().enumerate() {
        net.add_arc(s, 2 + k, 1);
        let to_u = net.add_arc(2 + k, vnode(u), 1);
        let to_v = net.add_arc(2 + k, vnode(v), 1);
        choice.push((to_u, to_v));
    }
    for v in 0..g.vertex_count() {
        net.add_arc(vnode(v), t, d as i64);
    }
    if net.max_flow(s, t) != m as i64 {
        return Err(Error::Infeasible { d, density: rational::format(&dens) });
    }
    let arcs: Vec<(usize, usize)> =
        edges.iter().zip(choice).map(|(&(u, v), (to_u, _))| if net.flow_on(to_u) == 1 { (u, v) } else { (v, u) }).collect();
    let mut orientation = Orientation { arcs, max_outdegree: 0 };
    orientation.max_outdegree = orientation.outdegrees(g.vertex_count()).into_iter().max().unwrap_or(0);
    Ok(orientation)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Merges the classes of `a` and `b`; false if they were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive oracle over vertex subsets.
    fn brute(g: &Graph) -> (Rational, Option<Rational>) {
        let n = g.vertex_count();
        let edges = g.edges();
        let mut dens = Rational::from_integer(0);
        let mut nw: Option<Rational> = None;
        for mask in 1u32..(1 << n) {
            let size = mask.count_ones() as usize;
            let e = edges.iter().filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1).count();
            dens = dens.max(rational::ratio(e, size));
            if size >= 2 {
                let r = rational::ratio(e, size - 1);
                nw = Some(nw.map_or(r, |x| x.max(r)));
            }
        }
        (dens, nw)
    }

    #[test]
    fn density_examples() {
        let r = densest_subgraph(&Graph::empty(1)).unwrap();
        assert_eq!(r.density, Rational::from_integer(0));
        let r = densest_subgraph(&Graph::complete(4)).unwrap();
        assert_eq!(r.density, Rational::new(3, 2));
        assert_eq!(r.witness, vec![0, 1, 2, 3]);
        assert_eq!(r.mad, Rational::from_integer(3));
        assert!(matches!(densest_subgraph(&Graph::empty(0)), Err(Error::EmptyGraph)));
        // K4 with a pendant path hanging off it
        let g = Graph::new(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)]).unwrap();
        let r = densest_subgraph(&g).unwrap();
        assert_eq!(r.density, Rational::new(3, 2));
        assert_eq!(r.witness, vec![0, 1, 2, 3]);
    }

    #[test]
    fn arboricity_examples() {
        let tree = Graph::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(arboricity(&tree), 1);
        assert_eq!(arboricity(&Graph::complete(4)), 2);
        assert_eq!(arboricity(&Graph::empty(1)), 0);
        assert_eq!(arboricity(&Graph::empty(3)), 0);
        let q3 = Graph::new(8, (0..8usize).flat_map(|x| (0..3).map(move |b| (x, x ^ (1 << b)))).filter(|&(x, y)| x < y)).unwrap();
        assert_eq!(arboricity(&q3), 2);
        assert_eq!(brute(&q3).1.map(|r| rational::ceil(&r)), Some(2));
    }

    #[test]
    fn forest_examples() {
        let c6 = Graph::cycle(6).unwrap();
        let fd = forest_decomposition(&c6, 2).unwrap();
        fd.validate(&c6).unwrap();
        assert!(matches!(forest_decomposition(&c6, 1), Err(Error::InsufficientClasses { .. })));
        let tree = Graph::path(5);
        let fd = forest_decomposition(&tree, 1).unwrap();
        assert!(fd.assignment.iter().all(|&c| c == 0));
        let k4 = Graph::complete(4);
        let fd = forest_decomposition(&k4, 3).unwrap();
        fd.validate(&k4).unwrap();
    }

    #[test]
    fn orientation_examples() {
        let tree = Graph::path(6);
        assert!(bounded_outdegree_orientation(&tree, 1).unwrap().max_outdegree <= 1);
        let k4 = Graph::complete(4);
        assert!(bounded_outdegree_orientation(&k4, 2).unwrap().max_outdegree <= 2);
        assert!(matches!(bounded_outdegree_orientation(&k4, 1), Err(Error::Infeasible { .. })));
        let c4 = Graph::cycle(4).unwrap();
        let o = bounded_outdegree_orientation(&c4, 1).unwrap();
        assert_eq!(o.outdegrees(4), vec![1, 1, 1, 1]);
    }

    #[test]
    fn flow_matches_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let p: f64 = rng.gen_range(0.1..0.9);
            let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
            let g = Graph::new(n, edges).unwrap();
            let (d, nw) = brute(&g);
            assert_eq!(density(&g).unwrap(), d);
            assert_eq!(nash_williams_ratio(&g).map(|x| x.0), nw);
        }
    }
}
