//! Cartesian products of connected graphs, their subgraphs, subproducts,
//! fibers and projections.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{FactorGraph, Graph};
use crate::rational::{self, Rational};

/// Products above this many vertices are never materialized by default.
pub const DEFAULT_MATERIALIZE_CAP: u128 = 1_000_000;

/// A coordinate tuple, one factor vertex per factor.
pub type ProductVertex = Vec<usize>;

/// An ordered list of connected factor graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpace {
    factors: Vec<FactorGraph>,
}

impl ProductSpace {
    pub fn new(factors: Vec<FactorGraph>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::NoFactors);
        }
        for (i, f) in factors.iter().enumerate() {
            if f.vertex_count() == 0 {
                return Err(Error::EmptyGraph);
            }
            if !f.is_connected() {
                return Err(Error::DisconnectedFactor(i));
            }
        }
        Ok(ProductSpace { factors })
    }

    pub fn factors(&self) -> &[FactorGraph] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &FactorGraph {
        &self.factors[i]
    }

    pub fn dimension(&self) -> usize {
        self.factors.len()
    }

    /// `prod |V(G_i)|`, saturating at `u128::MAX`.
    pub fn vertex_count(&self) -> u128 {
        self.factors.iter().fold(1u128, |acc, f| acc.saturating_mul(f.vertex_count() as u128))
    }

    /// `sum_i |E(G_i)| * prod_{j != i} |V(G_j)|`.
    pub fn edge_count(&self) -> u128 {
        (0..self.dimension())
            .map(|i| {
                let others = self
                    .factors
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(1u128, |acc, (_, f)| acc.saturating_mul(f.vertex_count() as u128));
                others.saturating_mul(self.factors[i].edge_count() as u128)
            })
            .fold(0u128, u128::saturating_add)
    }

    /// Same factors except factor `i`.
    pub fn with_factor(&self, i: usize, factor: FactorGraph) -> Result<Self> {
        let mut factors = self.factors.clone();
        factors[i] = factor;
        ProductSpace::new(factors)
    }

    pub fn is_valid_vertex(&self, x: &[usize]) -> bool {
        x.len() == self.dimension() && x.iter().zip(&self.factors).all(|(&c, f)| c < f.vertex_count())
    }

    fn check_vertex(&self, x: &[usize]) -> Result<()> {
        if self.is_valid_vertex(x) {
            Ok(())
        } else {
            Err(Error::InvalidTuple(x.to_vec()))
        }
    }

    /// The factor along which `x` and `y` are adjacent, if they are.
    pub fn adjacency_factor(&self, x: &[usize], y: &[usize]) -> Option<usize> {
        let mut diff = x.iter().zip(y).enumerate().filter(|(_, (a, b))| a != b);
        let (i, (&a, &b)) = diff.next()?;
        if diff.next().is_some() {
            return None;
        }
        self.factors[i].has_edge(a, b).then_some(i)
    }

    /// Every vertex tuple in lexicographic order.
    pub fn all_vertices(&self, cap: u128) -> Result<Vec<ProductVertex>> {
        let size = self.vertex_count();
        if size > cap {
            return Err(Error::TooLarge { what: "product", size, cap });
        }
        let sizes: Vec<usize> = self.factors.iter().map(Graph::vertex_count).collect();
        Ok(all_tuples(&sizes))
    }

    /// The whole product as a plain graph; vertex `k` is `all_vertices()[k]`.
    pub fn materialize(&self, cap: u128) -> Result<(Vec<ProductVertex>, Graph)> {
        let vertices = self.all_vertices(cap)?;
        let edges = product_edges_of(self, &vertices)?;
        Ok((vertices, Graph::new(self.vertex_count() as usize, edges)?))
    }
}

/// All tuples of the mixed-radix system `sizes`, lexicographically.
pub(crate) fn all_tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out.into_iter().flat_map(|t| (0..s).map(move |c| [t.as_slice(), &[c]].concat())).collect();
    }
    out
}

/// Pairs of positions in `vertices` that are adjacent in the product.
pub fn product_edges_of(space: &ProductSpace, vertices: &[ProductVertex]) -> Result<Vec<(usize, usize)>> {
    for x in vertices {
        space.check_vertex(x)?;
    }
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]));
    let find = |t: &[usize]| order.binary_search_by(|&k| vertices[k].as_slice().cmp(t)).ok().map(|p| order[p]);
    let mut edges = Vec::new();
    let mut probe = Vec::new();
    for (a, x) in vertices.iter().enumerate() {
        for (i, f) in space.factors.iter().enumerate() {
            for &y in f.neighbors(x[i]) {
                if y < x[i] {
                    continue;
                }
                probe.clear();
                probe.extend_from_slice(x);
                probe[i] = y;
                if let Some(b) = find(&probe) {
                    edges.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(edges)
}

/// A subgraph of a product with explicit vertex tuples (kept sorted) and
/// edges given as index pairs into the vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSubgraph {
    space: ProductSpace,
    vertices: Vec<ProductVertex>,
    edges: Vec<(usize, usize)>,
    induced: bool,
}

impl ProductSubgraph {
    /// The subgraph induced by a vertex set (duplicates are dropped).
    pub fn induced(space: ProductSpace, mut vertices: Vec<ProductVertex>) -> Result<Self> {
        vertices.sort();
        vertices.dedup();
        let edges = product_edges_of(&space, &vertices)?;
        Ok(ProductSubgraph { space, vertices, edges, induced: true })
    }

    /// A (not necessarily induced) subgraph. `edges` index into `vertices`
    /// as given; every edge must be a product edge.
    pub fn with_edges(space: ProductSpace, vertices: Vec<ProductVertex>, edges: Vec<(usize, usize)>) -> Result<Self> {
        for x in &vertices {
            space.check_vertex(x)?;
        }
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        order.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]));
        let mut rank = vec![0; vertices.len()];
        for (r, &k) in order.iter().enumerate() {
            rank[k] = r;
        }
        if let Some(w) = order.windows(2).find(|w| vertices[w[0]] == vertices[w[1]]) {
            return Err(Error::InvalidTuple(vertices[w[0]].clone()));
        }
        let mut mapped = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= vertices.len() || b >= vertices.len() {
                return Err(Error::VertexOutOfRange { vertex: a.max(b), n: vertices.len() });
            }
            if space.adjacency_factor(&vertices[a], &vertices[b]).is_none() {
                return Err(Error::NotProductEdge(format!("{:?}-{:?}", vertices[a], vertices[b])));
            }
            let (x, y) = (rank[a], rank[b]);
            mapped.push((x.min(y), x.max(y)));
        }
        mapped.sort_unstable();
        if let Some(w) = mapped.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let sorted = order.iter().map(|&k| vertices[k].clone()).collect();
        Ok(ProductSubgraph { space, vertices: sorted, edges: mapped, induced: false })
    }

    /// The whole product as an induced subgraph of itself.
    pub fn full(space: ProductSpace, cap: u128) -> Result<Self> {
        let vertices = space.all_vertices(cap)?;
        ProductSubgraph::induced(space, vertices)
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn vertices(&self) -> &[ProductVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_induced(&self) -> bool {
        self.induced
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, x: &[usize]) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(x)).ok()
    }

    pub fn contains(&self, x: &[usize]) -> bool {
        self.index_of(x).is_some()
    }

    /// `|E| / |V|`.
    pub fn edge_ratio(&self) -> Result<Rational> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(rational::ratio(self.edges.len(), self.vertices.len()))
    }

    /// The abstract graph, vertex `k` standing for `vertices()[k]`.
    pub fn graph(&self) -> Graph {
        Graph::new(self.vertices.len(), self.edges.iter().copied()).expect("product subgraph is simple")
    }

    pub fn require_induced(&self) -> Result<()> {
        if self.induced {
            Ok(())
        } else {
            Err(Error::NotInduced)
        }
    }

    /// Factor-`i` vertices that occur as `i`th coordinates (the trace on
    /// factor `i`), as a membership mask.
    pub fn trace_mask(&self, i: usize) -> Vec<bool> {
        let mut mask = vec![false; self.space.factor(i).vertex_count()];
        for x in &self.vertices {
            mask[x[i]] = true;
        }
        mask
    }

    /// `pi_i(G)`: the subgraph of factor `i` induced by the trace. Returns
    /// the projected graph and, for each of its vertices, the factor vertex.
    pub fn projection_on_factor(&self, i: usize) -> (Graph, Vec<usize>) {
        let mask = self.trace_mask(i);
        let trace: Vec<usize> = (0..mask.len()).filter(|&v| mask[v]).collect();
        (self.space.factor(i).induced_subgraph(&trace), trace)
    }

    /// Induced subgraph on a subset of this subgraph's vertices (indices).
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let vertices = keep.iter().map(|&k| self.vertices[k].clone()).collect();
        if self.induced {
            ProductSubgraph::induced(self.space.clone(), vertices)
        } else {
            let mut index = vec![usize::MAX; self.vertices.len()];
            for (j, &k) in keep.iter().enumerate() {
                index[k] = j;
            }
            let edges = self
                .edges
                .iter()
                .filter(|&&(a, b)| index[a] != usize::MAX && index[b] != usize::MAX)
                .map(|&(a, b)| (index[a], index[b]))
                .collect();
            ProductSubgraph::with_edges(self.space.clone(), vertices, edges)
        }
    }
}

/// One selected factor of a subproduct: a connected subgraph of factor
/// `index` given by a vertex set and an edge set (in factor numbering).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubFactor {
    pub index: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl SubFactor {
    pub fn density(&self) -> Rational {
        rational::ratio(self.edges.len(), self.vertices.len())
    }

    pub fn graph(&self) -> Graph {
        let local = |x: usize| self.vertices.binary_search(&x).expect("edge endpoint in vertex set");
        Graph::new(self.vertices.len(), self.edges.iter().map(|&(a, b)| (local(a), local(b)))).expect("validated")
    }
}

/// A product of connected subgraphs of selected factors `i_1 < ... < i_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subproduct {
    factors: Vec<SubFactor>,
}

impl Subproduct {
    /// Validates a subproduct. Each selected subgraph must be connected and
    /// have at least two vertices unless `allow_trivial` is set.
    pub fn new(space: &ProductSpace, mut factors: Vec<SubFactor>, allow_trivial: bool) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptySubproduct);
        }
        for w in factors.windows(2) {
            if w[0].index >= w[1].index {
                return Err(Error::InvalidSubproduct("factor indices must increase".into()));
            }
        }
        for sf in &mut factors {
            if sf.index >= space.dimension() {
                return Err(Error::InvalidSubproduct(format!("no factor {}", sf.index)));
            }
            let g = space.factor(sf.index);
            sf.vertices.sort_unstable();
            sf.vertices.dedup();
            for e in &mut sf.edges {
                *e = (e.0.min(e.1), e.0.max(e.1));
            }
            sf.edges.sort_unstable();
            sf.edges.dedup();
            if let Some(&v) = sf.vertices.iter().find(|&&v| v >= g.vertex_count()) {
                return Err(Error::VertexOutOfRange { vertex: v, n: g.vertex_count() });
            }
            for &(a, b) in &sf.edges {
                if !g.has_edge(a, b) || sf.vertices.binary_search(&a).is_err() || sf.vertices.binary_search(&b).is_err() {
                    return Err(Error::InvalidSubproduct(format!(
                        "{a}-{b} is not an edge of the selected subgraph of factor {}",
                        sf.index
                    )));
                }
            }
            if sf.vertices.is_empty() || (sf.vertices.len() < 2 && !allow_trivial) {
                return Err(Error::InvalidSubproduct(format!("selected subgraph of factor {} is trivial", sf.index)));
            }
            if !sf.graph().is_connected() {
                return Err(Error::InvalidSubproduct(format!("selected subgraph of factor {} is disconnected", sf.index)));
            }
        }
        Ok(Subproduct { factors })
    }

    /// Subproduct whose factor subgraphs are induced by the given vertex sets.
    pub fn induced(space: &ProductSpace, selection: Vec<(usize, Vec<usize>)>) -> Result<Self> {
        let factors = selection
            .into_iter()
            .map(|(index, vertices)| {
                let g = space.factor(index.min(space.dimension() - 1));
                let edges = g.edge_iter().filter(|(a, b)| vertices.contains(a) && vertices.contains(b)).collect();
                SubFactor { index, vertices, edges }
            })
            .collect();
        Subproduct::new(space, factors, false)
    }

    /// Cube-subproduct: a single edge `(i, u, v)` per selected factor.
    pub fn cube(space: &ProductSpace, edges: &[(usize, usize, usize)]) -> Result<Self> {
        let factors = edges.iter().map(|&(index, u, v)| SubFactor { index, vertices: vec![u, v], edges: vec![(u, v)] }).collect();
        Subproduct::new(space, factors, false)
    }

    pub fn factors(&self) -> &[SubFactor] {
        &self.factors
    }

    pub fn selected(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.index).collect()
    }

    pub fn vertex_count(&self) -> u128 {
        self.factors.iter().fold(1u128, |acc, f| acc.saturating_mul(f.vertices.len() as u128))
    }

    /// `|E|/|V|` of the subproduct, i.e. the sum of the factor ratios.
    pub fn density(&self) -> Rational {
        self.factors.iter().map(SubFactor::density).sum()
    }

    pub fn is_valid_vertex(&self, v: &[usize]) -> bool {
        v.len() == self.factors.len() && v.iter().zip(&self.factors).all(|(x, f)| f.vertices.binary_search(x).is_ok())
    }

    /// All vertices of the subproduct, lexicographically.
    pub fn all_vertices(&self, cap: u128) -> Result<Vec<Vec<usize>>> {
        let size = self.vertex_count();
        if size > cap {
            return Err(Error::TooLarge { what: "subproduct", size, cap });
        }
        let sizes: Vec<usize> = self.factors.iter().map(|f| f.vertices.len()).collect();
        Ok(all_tuples(&sizes).into_iter().map(|t| t.iter().zip(&self.factors).map(|(&k, f)| f.vertices[k]).collect()).collect())
    }

    /// The subproduct as a graph on [`all_vertices`](Self::all_vertices).
    pub fn materialize(&self, cap: u128) -> Result<(Vec<Vec<usize>>, Graph)> {
        let vertices = self.all_vertices(cap)?;
        let edges = self.edges_among(&vertices);
        Ok((vertices.clone(), Graph::new(vertices.len(), edges)?))
    }

    /// Edges of the subproduct among a sorted list of its vertices.
    fn edges_among(&self, sorted: &[Vec<usize>]) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        let mut probe = Vec::new();
        for (a, x) in sorted.iter().enumerate() {
            for (j, f) in self.factors.iter().enumerate() {
                for &(p, q) in &f.edges {
                    if x[j] != p {
                        continue;
                    }
                    probe.clear();
                    probe.extend_from_slice(x);
                    probe[j] = q;
                    if let Ok(b) = sorted.binary_search(&probe) {
                        edges.push((a.min(b), a.max(b)));
                    }
                }
            }
        }
        edges.sort_unstable();
        edges
    }
}

/// The set of extensions of a subproduct vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    selected: Vec<usize>,
    values: Vec<usize>,
}

impl Fiber {
    pub fn contains(&self, x: &[usize]) -> bool {
        self.selected.iter().zip(&self.values).all(|(&i, &c)| x.get(i) == Some(&c))
    }

    /// All extensions, lexicographically.
    pub fn members(&self, space: &ProductSpace, cap: u128) -> Result<Vec<ProductVertex>> {
        let sizes: Vec<usize> =
            (0..space.dimension()).map(|i| if self.selected.contains(&i) { 1 } else { space.factor(i).vertex_count() }).collect();
        let size = sizes.iter().fold(1u128, |a, &s| a.saturating_mul(s as u128));
        if size > cap {
            return Err(Error::TooLarge { what: "fiber", size, cap });
        }
        Ok(all_tuples(&sizes)
            .into_iter()
            .map(|mut t| {
                for (&i, &c) in self.selected.iter().zip(&self.values) {
                    t[i] = c;
                }
                t
            })
            .collect())
    }
}

/// `F(v')`: product vertices agreeing with `v'` on the selected factors.
pub fn fiber(space: &ProductSpace, sub: &Subproduct, vprime: &[usize]) -> Result<Fiber> {
    if !sub.is_valid_vertex(vprime) {
        return Err(Error::InvalidTuple(vprime.to_vec()));
    }
    if sub.factors.last().is_some_and(|f| f.index >= space.dimension()) {
        return Err(Error::InvalidSubproduct("subproduct does not belong to this space".into()));
    }
    Ok(Fiber { selected: sub.selected(), values: vprime.to_vec() })
}

/// `pi_{Gamma'}(G)`: the trace of `V(G)` on a subproduct and the subgraph of
/// the subproduct it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub vertices: Vec<Vec<usize>>,
    pub graph: Graph,
}

pub fn projection(g: &ProductSubgraph, sub: &Subproduct) -> Projection {
    let mut trace: Vec<Vec<usize>> = g
        .vertices()
        .iter()
        .map(|x| sub.factors.iter().map(|f| x[f.index]).collect::<Vec<_>>())
        .filter(|t| sub.is_valid_vertex(t))
        .collect();
    trace.sort();
    trace.dedup();
    let edges = sub.edges_among(&trace);
    let graph = Graph::new(trace.len(), edges).expect("subproduct edges are simple");
    Projection { vertices: trace, graph }
}

/// `Q_m`, the product of `m` copies of `K_2`.
pub fn hypercube(m: usize) -> Result<ProductSpace> {
    if m == 0 {
        return Err(Error::NoFactors);
    }
    ProductSpace::new(vec![Graph::complete(2); m])
}

/// The Hamming graph `K_{s_1} x ... x K_{s_m}`.
pub fn hamming(sizes: &[usize]) -> Result<ProductSpace> {
    if let Some(&s) = sizes.iter().find(|&&s| s < 2) {
        return Err(Error::TooFewVertices { needed: 2, found: s });
    }
    ProductSpace::new(sizes.iter().map(|&s| Graph::complete(s)).collect())
}

/// `K_{2,...,2}` on `2d` vertices; `(2i, 2i + 1)` are the opposite pairs.
pub fn octahedron(d: usize) -> Result<FactorGraph> {
    if d == 0 {
        return Err(Error::TooFewVertices { needed: 2, found: 0 });
    }
    let n = 2 * d;
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| u / 2 != v / 2);
    Ok(Graph::new(n, edges)?.with_name(format!("octahedron({d})")))
}

/// Product of two plain graphs; vertex `(a, b)` has index `a * |V(h)| + b`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let nh = h.vertex_count();
    let mut edges = Vec::new();
    for a in 0..g.vertex_count() {
        for (b, c) in h.edge_iter() {
            edges.push((a * nh + b, a * nh + c));
        }
    }
    for (a, c) in g.edge_iter() {
        for b in 0..nh {
            edges.push((a * nh + b, c * nh + b));
        }
    }
    Graph::new(g.vertex_count() * nh, edges).expect("product is simple")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// The JSON interchange format for product subgraphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub factors: Vec<FactorJson>,
    pub vertices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub induced: Option<bool>,
}

impl FactorJson {
    pub fn from_graph(g: &Graph) -> Self {
        FactorJson { n: g.vertex_count(), edges: g.edge_iter().map(|(u, v)| [u, v]).collect(), name: g.name().map(str::to_owned) }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let g = Graph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))?;
        Ok(match &self.name {
            Some(name) => g.with_name(name.clone()),
            None => g,
        })
    }
}

impl InstanceFile {
    pub fn from_subgraph(g: &ProductSubgraph) -> Self {
        let factors = g.space().factors().iter().map(FactorJson::from_graph).collect();
        let (edges, induced) =
            if g.is_induced() { (None, Some(true)) } else { (Some(g.edges().iter().map(|&(a, b)| [a, b]).collect()), None) };
        InstanceFile { factors, vertices: g.vertices().to_vec(), edges, induced }
    }

    /// A missing `edges` field means the induced subgraph.
    pub fn to_subgraph(&self) -> Result<ProductSubgraph> {
        let factors = self.factors.iter().map(FactorJson::to_graph).collect::<Result<Vec<_>>>()?;
        let space = ProductSpace::new(factors)?;
        match (&self.edges, self.induced) {
            (Some(edges), induced) => {
                let g = ProductSubgraph::with_edges(space, self.vertices.clone(), edges.iter().map(|e| (e[0], e[1])).collect())?;
                if induced == Some(true) {
                    let full = ProductSubgraph::induced(g.space().clone(), g.vertices().to_vec())?;
                    if full.edges() != g.edges() {
                        return Err(Error::Parse("edges given for an induced instance are not the induced edges".into()));
                    }
                    return Ok(full);
                }
                Ok(g)
            }
            (None, Some(false)) => Err(Error::Parse("non-induced instance without an edge list".into())),
            (None, _) => ProductSubgraph::induced(space, self.vertices.clone()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }
}
