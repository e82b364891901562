//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use prodvc::product::ProductSubgraph;
use prodvc::{Graph, Rational};
use rand::Rng;

/// `max |E(S)| / |S|` over all nonempty vertex sets, by a subset DP.
pub fn brute_density(g: &Graph) -> Rational {
    let n = g.vertex_count();
    assert!((1..=20).contains(&n));
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    let mut edges = vec![0u16; 1 << n];
    let mut best = Rational::from_integer(0);
    for s in 1usize..1 << n {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        edges[s] = edges[rest] + (adj[v] & rest as u32).count_ones() as u16;
        let r = Rational::new(edges[s] as i64, s.count_ones() as i64);
        if r > best {
            best = r;
        }
    }
    best
}

/// Classical VC-dimension of the vertex set of a hypercube subgraph viewed
/// as a family of subsets of the coordinates.
pub fn set_system_vc(g: &ProductSubgraph) -> usize {
    let m = g.space().dimension();
    assert!(m <= 16);
    let sets: Vec<u32> = g.vertices().iter().map(|x| x.iter().enumerate().fold(0u32, |s, (i, &b)| s | (b as u32) << i)).collect();
    let mut best = 0;
    for y in 0u32..1 << m {
        let k = y.count_ones() as usize;
        if k <= best {
            continue;
        }
        let mut seen = std::collections::HashSet::new();
        for &s in &sets {
            seen.insert(s & y);
        }
        if seen.len() == 1 << k {
            best = k;
        }
    }
    best
}

/// Whether `g` admits some dismantling order, by search over all orders.
pub fn brute_dismantlable(g: &Graph) -> bool {
    fn go(g: &Graph, alive: u32) -> bool {
        if alive.count_ones() <= 1 {
            return true;
        }
        let closed = |v: usize| g.neighbors(v).iter().fold(1u32 << v, |m, &w| m | 1 << w) & alive;
        (0..g.vertex_count()).filter(|&v| alive >> v & 1 == 1).any(|v| {
            let nv = closed(v);
            let dominated = (0..g.vertex_count()).any(|u| u != v && alive >> u & 1 == 1 && nv & !closed(u) == 0);
            dominated && go(g, alive & !(1 << v))
        })
    }
    go(g, (1u32 << g.vertex_count()) - 1)
}

pub fn brute_clique_number(g: &Graph) -> usize {
    let n = g.vertex_count();
    (0u32..1 << n)
        .filter(|&s| {
            let vs: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
            vs.iter().enumerate().all(|(k, &a)| vs[k + 1..].iter().all(|&b| g.has_edge(a, b)))
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let kept: Vec<_> = edges.into_iter().filter(|_| rng.gen_bool(p)).collect();
    Graph::new(n, kept).unwrap()
}

pub fn random_connected_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) && !edges.contains(&(a, b)) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}
