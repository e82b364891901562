//! Recognition of the special factor classes: dismantlable, chordal and
//! suboctahedral graphs, plus the orderings and clique numbers that go with
//! them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{self, Graph, OrderingKind, VertexOrdering};
use crate::product::{ProductSpace, ProductSubgraph};

/// A dismantling order with, per step, a vertex dominating the removed one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DismantlingCertificate {
    pub order: VertexOrdering,
    /// `dominator[k]` dominates `order[k]` in the graph left at step `k`;
    /// `None` for the last vertex.
    pub dominator: Vec<Option<usize>>,
    /// Largest degree of a vertex in the graph left when it is removed.
    pub dd: usize,
}

impl DismantlingCertificate {
    /// Replays the order on `g`.
    pub fn verify(&self, g: &Graph) -> bool {
        let n = g.vertex_count();
        if self.order.len() != n || self.dominator.len() != n {
            return false;
        }
        let mut alive = vec![true; n];
        for (k, &v) in self.order.order().iter().enumerate() {
            match self.dominator[k] {
                Some(w) => {
                    if w == v || !alive[w] || !dominates(g, &alive, w, v) {
                        return false;
                    }
                }
                None if k + 1 != n => return false,
                None => {}
            }
            alive[v] = false;
        }
        self.dd == self.order.max_later_degree(g)
    }
}

/// Whether `N[v] ⊆ N[w]` among alive vertices.
fn dominates(g: &Graph, alive: &[bool], w: usize, v: usize) -> bool {
    (v == w || g.has_edge(v, w)) && g.neighbors(v).iter().all(|&x| !alive[x] || x == w || g.has_edge(x, w))
}

/// Greedy removal of a dominated vertex of smallest remaining degree (ties
/// to the smallest index). Removing dominated vertices never turns a
/// dismantlable graph into a non-dismantlable one, so the greedy run fails
/// only on non-dismantlable graphs.
pub fn min_dismantling_order(g: &Graph) -> Result<DismantlingCertificate> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut alive = vec![true; n];
    let mut degree = graph::degree_sequence(g);
    let mut order = Vec::with_capacity(n);
    let mut dominator = Vec::with_capacity(n);
    for step in 0..n {
        if step + 1 == n {
            let last = (0..n).find(|&v| alive[v]).expect("one vertex left");
            order.push(last);
            dominator.push(None);
            break;
        }
        let mut pick: Option<(usize, usize, usize)> = None;
        for v in (0..n).filter(|&v| alive[v]) {
            if pick.is_some_and(|(d, _, _)| degree[v] >= d) {
                continue;
            }
            let w = g.neighbors(v).iter().copied().find(|&w| alive[w] && dominates(g, &alive, w, v));
            if let Some(w) = w {
                pick = Some((degree[v], v, w));
            }
        }
        let (_, v, w) = pick.ok_or(Error::NotDismantlable(step))?;
        alive[v] = false;
        for &x in g.neighbors(v) {
            degree[x] -= 1;
        }
        order.push(v);
        dominator.push(Some(w));
    }
    let order = VertexOrdering::new(order, OrderingKind::MinDismantling)?;
    let dd = order.max_later_degree(g);
    Ok(DismantlingCertificate { order, dominator, dd })
}

/// A product min-dismantling order of `G` and `DD(G)` along it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductDismantling {
    /// Order on the vertices of `G` (indices into `G.vertices()`).
    pub order: VertexOrdering,
    /// `dd(G_i)` per factor.
    pub factor_dd: Vec<usize>,
    /// `DD(G)`.
    pub dd: usize,
}

impl ProductDismantling {
    pub fn factor_dd_sum(&self) -> usize {
        self.factor_dd.iter().sum()
    }
}

/// Per-factor rank of every vertex in its min-dismantling order.
fn factor_ranks(space: &ProductSpace) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
    let mut ranks = Vec::new();
    let mut dds = Vec::new();
    for (i, f) in space.factors().iter().enumerate() {
        let cert = min_dismantling_order(f).map_err(|_| Error::NotDismantlable(i))?;
        ranks.push((0..f.vertex_count()).map(|v| cert.order.position(v)).collect());
        dds.push(cert.dd);
    }
    Ok((ranks, dds))
}

fn product_order(vertices: &[Vec<usize>], ranks: &[Vec<usize>]) -> Vec<usize> {
    let key = |x: &[usize]| -> (usize, Vec<usize>) {
        let r: Vec<usize> = x.iter().enumerate().map(|(i, &c)| ranks[i][c]).collect();
        (r.iter().sum(), r)
    };
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by_cached_key(|&k| key(&vertices[k]));
    order
}

/// Orders `V(G)` by the sum of factor ranks, then lexicographically by
/// ranks; this is a linear extension of the coordinatewise order.
pub fn product_min_dismantling_order(g: &ProductSubgraph) -> Result<ProductDismantling> {
    g.require_induced()?;
    let (ranks, factor_dd) = factor_ranks(g.space())?;
    let order = VertexOrdering::new(product_order(g.vertices(), &ranks), OrderingKind::MinDismantling)?;
    let dd = order.max_later_degree(&g.graph());
    Ok(ProductDismantling { order, factor_dd, dd })
}

/// `DD(Γ)` of the whole (materialized) product.
pub fn product_dd(space: &ProductSpace, cap: u128) -> Result<usize> {
    let full = ProductSubgraph::full(space.clone(), cap)?;
    Ok(product_min_dismantling_order(&full)?.dd)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChordalCertificate {
    pub peo: VertexOrdering,
    pub omega: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Chordality {
    Chordal(ChordalCertificate),
    /// A chordless cycle of length at least four.
    NotChordal {
        cycle: Vec<usize>,
    },
}

impl Chordality {
    pub fn certificate(&self) -> Option<&ChordalCertificate> {
        match self {
            Chordality::Chordal(c) => Some(c),
            Chordality::NotChordal { .. } => None,
        }
    }
}

/// Lexicographic breadth-first search by partition refinement.
fn lex_bfs(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut classes: Vec<Vec<usize>> = if n == 0 { Vec::new() } else { vec![(0..n).collect()] };
    let mut order = Vec::with_capacity(n);
    while let Some(first) = classes.first_mut() {
        let v = first.remove(0);
        if first.is_empty() {
            classes.remove(0);
        }
        order.push(v);
        let mut refined = Vec::with_capacity(classes.len() * 2);
        for class in classes {
            let (hit, miss): (Vec<usize>, Vec<usize>) = class.into_iter().partition(|&x| g.has_edge(v, x));
            if !hit.is_empty() {
                refined.push(hit);
            }
            if !miss.is_empty() {
                refined.push(miss);
            }
        }
        classes = refined;
    }
    order
}

/// A chordless cycle through `v`, `a` and `b` (with `a`, `b` nonadjacent
/// neighbors of `v`), if the rest of the graph links them outside `N[v]`.
fn chordless_cycle_through(g: &Graph, v: usize, a: usize, b: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut blocked = vec![false; n];
    blocked[v] = true;
    for &x in g.neighbors(v) {
        blocked[x] = x != a && x != b;
    }
    let mut parent = vec![usize::MAX; n];
    parent[a] = a;
    let mut queue = std::collections::VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        if x == b {
            break;
        }
        for &y in g.neighbors(x) {
            if !blocked[y] && parent[y] == usize::MAX && !(x == a && y == b) {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    if parent[b] == usize::MAX {
        return None;
    }
    let mut cycle = vec![v];
    let mut x = b;
    while x != a {
        cycle.push(x);
        x = parent[x];
    }
    cycle.push(a);
    Some(cycle)
}

fn find_chordless_cycle(g: &Graph) -> Option<Vec<usize>> {
    for v in 0..g.vertex_count() {
        let nb = g.neighbors(v);
        for (k, &a) in nb.iter().enumerate() {
            for &b in &nb[k + 1..] {
                if !g.has_edge(a, b) {
                    if let Some(c) = chordless_cycle_through(g, v, a, b) {
                        return Some(c);
                    }
                }
            }
        }
    }
    None
}

/// Perfect elimination ordering (reverse LexBFS) with `ω`, or a chordless
/// cycle.
pub fn chordal_certificate(g: &Graph) -> Chordality {
    let mut peo = lex_bfs(g);
    peo.reverse();
    let n = g.vertex_count();
    let mut pos = vec![0; n];
    for (k, &v) in peo.iter().enumerate() {
        pos[v] = k;
    }
    let mut omega = usize::from(n > 0);
    for &v in &peo {
        let later: Vec<usize> = g.neighbors(v).iter().copied().filter(|&x| pos[x] > pos[v]).collect();
        omega = omega.max(later.len() + 1);
        if let Some(&p) = later.iter().min_by_key(|&&x| pos[x]) {
            if later.iter().any(|&x| x != p && !g.has_edge(x, p)) {
                let cycle = find_chordless_cycle(g).expect("a graph without a perfect elimination order has a chordless cycle");
                return Chordality::NotChordal { cycle };
            }
        }
    }
    let peo = VertexOrdering::new(peo, OrderingKind::PerfectElimination).expect("LexBFS visits every vertex once");
    Chordality::Chordal(ChordalCertificate { peo, omega })
}

/// Opposite (nonadjacent) pairs of an induced subgraph of an octahedron.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuboctahedronStructure {
    pub pairs: Vec<(usize, usize)>,
    pub is_clique: bool,
}

impl SuboctahedronStructure {
    pub fn opposite_of(&self, e: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| match e {
            _ if e == a => Some(b),
            _ if e == b => Some(a),
            _ => None,
        })
    }
}

/// `Some` when the complement of `g` is a matching plus isolated vertices.
pub fn suboctahedron_structure(g: &Graph) -> Option<SuboctahedronStructure> {
    let co = g.complement();
    if (0..co.vertex_count()).any(|v| co.degree(v) > 1) {
        return None;
    }
    let pairs = co.edges();
    Some(SuboctahedronStructure { is_clique: pairs.is_empty(), pairs })
}

/// Largest clique size, by Bron–Kerbosch with pivoting.
pub fn clique_number(g: &Graph) -> usize {
    fn expand(g: &Graph, size: usize, p: Vec<usize>, mut x: Vec<usize>, best: &mut usize) {
        if p.is_empty() {
            *best = (*best).max(size);
            return;
        }
        if size + p.len() <= *best {
            return;
        }
        let pivot = p.iter().chain(&x).copied().max_by_key(|&u| p.iter().filter(|&&w| g.has_edge(u, w)).count()).expect("p nonempty");
        let mut p_rest = p.clone();
        for v in p.iter().copied().filter(|&v| !g.has_edge(pivot, v)) {
            let np = p_rest.iter().copied().filter(|&w| g.has_edge(v, w)).collect();
            let nx = x.iter().copied().filter(|&w| g.has_edge(v, w)).collect();
            expand(g, size + 1, np, nx, best);
            p_rest.retain(|&w| w != v);
            x.push(v);
        }
    }
    let mut best = 0;
    expand(g, 0, (0..g.vertex_count()).collect(), Vec::new(), &mut best);
    best
}

/// Summary used by the command-line `classify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub vertices: usize,
    pub edges: usize,
    pub connected: bool,
    pub chordal: bool,
    pub dismantlable: bool,
    pub suboctahedron: bool,
    pub dd: Option<usize>,
    pub omega: usize,
    pub degeneracy: usize,
}

pub fn classify(g: &Graph) -> Classification {
    let dismantling = if g.is_connected() { min_dismantling_order(g).ok() } else { None };
    Classification {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        connected: g.is_connected(),
        chordal: chordal_certificate(g).certificate().is_some(),
        dismantlable: dismantling.is_some(),
        suboctahedron: suboctahedron_structure(g).is_some(),
        dd: dismantling.map(|d| d.dd),
        omega: clique_number(g),
        degeneracy: graph::degeneracy(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::octahedron;

    /// Exhaustive search for any dismantling order.
    fn dismantlable_brute(g: &Graph) -> bool {
        fn rec(g: &Graph, alive: &mut Vec<bool>, left: usize) -> bool {
            if left <= 1 {
                return true;
            }
            for v in 0..g.vertex_count() {
                if alive[v] && g.neighbors(v).iter().any(|&w| alive[w] && dominates(g, alive, w, v)) {
                    alive[v] = false;
                    let ok = rec(g, alive, left - 1);
                    alive[v] = true;
                    if ok {
                        return true;
                    }
                }
            }
            false
        }
        rec(g, &mut vec![true; g.vertex_count()], g.vertex_count())
    }

    fn clique_brute(g: &Graph) -> usize {
        let n = g.vertex_count();
        (0u32..1 << n)
            .filter(|&s| (0..n).all(|a| (a + 1..n).all(|b| s >> a & 1 == 0 || s >> b & 1 == 0 || g.has_edge(a, b))))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn dismantling_examples() {
        let c = min_dismantling_order(&Graph::path(3)).unwrap();
        assert_eq!(c.dd, 1);
        assert!(c.verify(&Graph::path(3)));
        assert!(matches!(min_dismantling_order(&Graph::cycle(4).unwrap()), Err(Error::NotDismantlable(0))));
        let k4 = min_dismantling_order(&Graph::complete(4)).unwrap();
        assert_eq!(k4.dd, 3);
        assert_eq!(min_dismantling_order(&Graph::empty(1)).unwrap().dd, 0);
    }

    #[test]
    fn greedy_matches_exhaustive_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 300 {
            let n = rng.gen_range(2..=7);
            let p = rng.gen_range(0.3..0.9);
            let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(p)).collect();
            let g = Graph::new(n, edges).unwrap();
            if !g.is_connected() {
                continue;
            }
            checked += 1;
            let greedy = min_dismantling_order(&g);
            assert_eq!(greedy.is_ok(), dismantlable_brute(&g), "{:?}", g.edges());
            if let Ok(c) = &greedy {
                assert!(c.verify(&g));
            }
            assert_eq!(clique_number(&g), clique_brute(&g));
            let chordal = chordal_certificate(&g);
            if let Chordality::NotChordal { cycle } = &chordal {
                assert!(cycle.len() >= 4);
                for (k, &x) in cycle.iter().enumerate() {
                    for (j, &y) in cycle.iter().enumerate().skip(k + 1) {
                        let consecutive = j == k + 1 || (k == 0 && j == cycle.len() - 1);
                        assert_eq!(g.has_edge(x, y), consecutive);
                    }
                }
            } else {
                assert!(greedy.is_ok(), "chordal graphs are dismantlable");
                assert_eq!(chordal.certificate().unwrap().omega, clique_brute(&g));
            }
        }
    }

    #[test]
    fn chordal_examples() {
        assert_eq!(chordal_certificate(&Graph::complete(3)).certificate().unwrap().omega, 3);
        match chordal_certificate(&Graph::cycle(4).unwrap()) {
            Chordality::NotChordal { cycle } => assert_eq!(cycle.len(), 4),
            other => panic!("{other:?}"),
        }
        let tree = Graph::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(chordal_certificate(&tree).certificate().unwrap().omega, 2);
    }

    #[test]
    fn suboctahedra() {
        let s = suboctahedron_structure(&octahedron(3).unwrap()).unwrap();
        assert_eq!(s.pairs.len(), 3);
        assert!(!s.is_clique);
        assert_eq!(s.opposite_of(3), Some(2));
        let k4 = suboctahedron_structure(&Graph::complete(4)).unwrap();
        assert!(k4.is_clique && k4.pairs.is_empty());
        assert!(suboctahedron_structure(&Graph::path(4)).is_none());
    }

    #[test]
    fn product_dd_is_the_sum() {
        let space = ProductSpace::new(vec![Graph::path(3), Graph::path(3)]).unwrap();
        assert_eq!(product_dd(&space, 100).unwrap(), 2);
        let space = ProductSpace::new(vec![Graph::complete(3), Graph::path(4), Graph::star(3)]).unwrap();
        let full = ProductSubgraph::full(space.clone(), 1000).unwrap();
        let pd = product_min_dismantling_order(&full).unwrap();
        assert_eq!(pd.dd, pd.factor_dd_sum());
        let one = ProductSubgraph::induced(space, vec![vec![0, 0, 0]]).unwrap();
        assert_eq!(product_min_dismantling_order(&one).unwrap().dd, 0);
    }
}
