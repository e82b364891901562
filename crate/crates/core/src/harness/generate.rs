//! Seeded random factors and product subgraphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::product::{self, ProductSpace, ProductSubgraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Path,
    Cycle,
    Tree,
    Chordal,
    /// `size` is the number of opposite pairs.
    Octahedron,
    Planar,
    Clique,
    /// Each factor drawn from one of the other families.
    Mixed,
}

impl Family {
    pub const ALL: [Family; 8] =
        [Family::Path, Family::Cycle, Family::Tree, Family::Chordal, Family::Octahedron, Family::Planar, Family::Clique, Family::Mixed];

    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Tree => "tree",
            Family::Chordal => "chordal",
            Family::Octahedron => "octahedron",
            Family::Planar => "planar",
            Family::Clique => "clique",
            Family::Mixed => "mixed",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::InvalidSpec(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    /// Factor sizes; a single entry is reused for every factor.
    pub sizes: Vec<usize>,
    pub m: usize,
    /// Probability of keeping each product vertex.
    pub vertex_fraction: f64,
    /// Upper limit on `|V(G)|`; extra vertices are dropped at random.
    pub max_vertices: usize,
    pub induced: bool,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, sizes: Vec<usize>, m: usize, seed: u64) -> Self {
        GeneratorSpec { family, sizes, m, vertex_fraction: 0.5, max_vertices: usize::MAX, induced: true, seed }
    }

    fn size(&self, i: usize) -> Result<usize> {
        match self.sizes.len() {
            1 => Ok(self.sizes[0]),
            len if len == self.m => Ok(self.sizes[i]),
            len => Err(Error::InvalidSpec(format!("{len} sizes for {} factors", self.m))),
        }
    }
}

/// A random factor of the family.
pub fn factor(family: Family, size: usize, rng: &mut impl Rng) -> Result<Graph> {
    if size == 0 {
        return Err(Error::InvalidSpec("factor size 0".into()));
    }
    let g = match family {
        Family::Path => Graph::path(size),
        Family::Cycle => Graph::cycle(size)?,
        Family::Tree => random_tree(size, rng),
        Family::Chordal => random_chordal(size, rng),
        Family::Octahedron => product::octahedron(size)?,
        Family::Planar => random_planar(size, rng),
        Family::Clique => Graph::complete(size),
        Family::Mixed => {
            let pick = [Family::Path, Family::Tree, Family::Chordal, Family::Planar, Family::Clique][rng.gen_range(0..5)];
            return factor(pick, size, rng);
        }
    };
    Ok(g.with_name(format!("{}({size})", family.name())))
}

pub fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    Graph::new(n, edges).expect("tree edges are simple")
}

/// Each new vertex is joined to a nonempty clique of the earlier ones, so
/// the reverse insertion order is a perfect elimination order.
pub fn random_chordal(n: usize, rng: &mut impl Rng) -> Graph {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for v in 1..n {
        let x = rng.gen_range(0..v);
        let mut clique = vec![x];
        let mut candidates = adj[x].clone();
        candidates.shuffle(rng);
        for y in candidates {
            if rng.gen_bool(0.5) && clique.iter().all(|&c| adj[c].contains(&y)) {
                clique.push(y);
            }
        }
        for &c in &clique {
            adj[c].push(v);
            adj[v].push(c);
            edges.push((c, v));
        }
    }
    Graph::new(n, edges).expect("chordal construction is simple")
}

/// Stacked triangulation with random edges removed, kept connected.
pub fn random_planar(n: usize, rng: &mut impl Rng) -> Graph {
    if n <= 3 {
        return Graph::complete(n);
    }
    let mut edges = vec![(0, 1), (0, 2), (1, 2)];
    let mut faces = vec![[0, 1, 2]];
    for v in 3..n {
        let k = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(k);
        edges.extend([(a, v), (b, v), (c, v)]);
        faces.extend([[a, b, v], [a, c, v], [b, c, v]]);
    }
    edges.shuffle(rng);
    let mut kept = edges.clone();
    for e in edges {
        if rng.gen_bool(0.3) {
            let trial: Vec<_> = kept.iter().copied().filter(|&f| f != e).collect();
            if Graph::new(n, trial.iter().copied()).expect("simple").is_connected() {
                kept = trial;
            }
        }
    }
    Graph::new(n, kept).expect("planar construction is simple")
}

/// Random subgraph of a random product, reproducible from the spec.
pub fn generate(spec: &GeneratorSpec) -> Result<ProductSubgraph> {
    if spec.m == 0 {
        return Err(Error::NoFactors);
    }
    if !(0.0..=1.0).contains(&spec.vertex_fraction) {
        return Err(Error::InvalidSpec("vertex_fraction outside [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let factors = (0..spec.m).map(|i| factor(spec.family, spec.size(i)?, &mut rng)).collect::<Result<Vec<_>>>()?;
    let space = ProductSpace::new(factors)?;
    subgraph_of(&space, spec.vertex_fraction, spec.max_vertices, spec.induced, &mut rng)
}

/// Random vertex subset (never empty) of a product, induced or with each
/// induced edge kept with probability 0.7.
pub fn subgraph_of(space: &ProductSpace, fraction: f64, max_vertices: usize, induced: bool, rng: &mut impl Rng) -> Result<ProductSubgraph> {
    let all = space.all_vertices(product::DEFAULT_MATERIALIZE_CAP)?;
    let mut chosen: Vec<Vec<usize>> = all.iter().filter(|_| rng.gen_bool(fraction)).cloned().collect();
    if chosen.is_empty() {
        chosen.push(all[rng.gen_range(0..all.len())].clone());
    }
    if chosen.len() > max_vertices.max(1) {
        chosen.shuffle(rng);
        chosen.truncate(max_vertices.max(1));
    }
    let g = ProductSubgraph::induced(space.clone(), chosen)?;
    if induced {
        return Ok(g);
    }
    let edges = g.edges().iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
    ProductSubgraph::with_edges(space.clone(), g.vertices().to_vec(), edges)
}
