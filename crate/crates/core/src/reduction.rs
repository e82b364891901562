//! The induction operators on product subgraphs: merging the two ends of a
//! factor edge (or two opposite octahedron vertices) into `G_uv`, and the
//! star-shaped remainder `G^uv` with its central part `G^uv_c`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::classes;
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::product::{InstanceFile, ProductSpace, ProductSubgraph, ProductVertex};
use crate::rational::{self, Rational};
use crate::vc::{self, VcOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ReductionKind {
    /// Contraction of the factor edge `uv`.
    Edge { u: usize, v: usize },
    /// Identification of the opposite pair `e`, `opposite`.
    Octahedron { e: usize, opposite: usize },
}

/// How the edges of `G` fare under the merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EdgeGroups {
    /// Edges of type `uv`, contracted away.
    pub contracted: usize,
    /// Duplicates from triangles through a merged pair.
    pub triangles: usize,
    /// Duplicates from squares with two opposite merged sides.
    pub squares: usize,
    /// Edges of the merged graph that are not images of edges of `G`.
    pub created: usize,
}

#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub factor: usize,
    pub kind: ReductionKind,
    /// Common neighbors of the merged pair in factor `factor`.
    pub common_neighbors: Vec<usize>,
    /// `G_uv` (or `G_e`), induced in the space with factor `factor` merged.
    pub merged: ProductSubgraph,
    /// Factor vertex to vertex of the merged factor.
    pub factor_map: Vec<usize>,
    /// `G^uv`: central vertices, tip vertices, center-center edges and one
    /// star edge per tip.
    pub upper: ProductSubgraph,
    /// `G^uv_c`, induced by the central vertices.
    pub center: ProductSubgraph,
    /// Tip vertices `V_l(G^uv)`.
    pub tips: Vec<ProductVertex>,
    /// Vertex of `G` to vertex of `merged`.
    pub vertex_map: Vec<usize>,
    /// Central vertex to the two vertices of `G` it stands for.
    pub center_sources: Vec<(usize, usize)>,
    /// Tip vertex to the vertex of `G` it stands for.
    pub tip_sources: Vec<usize>,
    pub groups: EdgeGroups,
    source_vertices: usize,
    source_edges: usize,
}

/// Identifies `gone` with `keep` (which must not be adjacent or must be the
/// ends of an edge); `gone` disappears and higher indices shift down.
fn identify(g: &Graph, keep: usize, gone: usize) -> Result<(Graph, Vec<usize>)> {
    let map: Vec<usize> = (0..g.vertex_count())
        .map(|x| {
            let x = if x == gone { keep } else { x };
            if x > gone {
                x - 1
            } else {
                x
            }
        })
        .collect();
    let edges = g.edge_iter().map(|(a, b)| (map[a], map[b])).filter(|(a, b)| a != b);
    let graph = Graph::from_edges_dedup(g.vertex_count() - 1, edges)?;
    Ok((graph, map))
}

fn with_coordinate(x: &[usize], i: usize, c: usize) -> ProductVertex {
    let mut y = x.to_vec();
    y[i] = c;
    y
}

/// `G_uv`, `G^uv`, `G^uv_c` for the factor edge `uv` of factor `i`.
pub fn reduce(g: &ProductSubgraph, i: usize, u: usize, v: usize) -> Result<ReductionStep> {
    g.require_induced()?;
    if i >= g.space().dimension() {
        return Err(Error::InvalidSubproduct(format!("no factor {i}")));
    }
    let f = g.space().factor(i);
    if u >= f.vertex_count() || v >= f.vertex_count() {
        return Err(Error::VertexOutOfRange { vertex: u.max(v), n: f.vertex_count() });
    }
    let contraction = graph::contract_edge(f, u, v)?;
    let star = graph::star_of_edge(f, u, v)?;
    build(g, i, ReductionKind::Edge { u, v }, u, v, contraction.graph, contraction.map, star.graph, star.leaves)
}

/// `G_e`, `G^e`, `G^e_c` for the opposite pair `(e, ē)` of a suboctahedral
/// factor `i`. The merged factor is factor `i` without `ē`; the star is
/// centered at `ē` with the neighbors of `ē` as leaves.
pub fn reduce_octahedron(g: &ProductSubgraph, i: usize, e: usize) -> Result<ReductionStep> {
    g.require_induced()?;
    if i >= g.space().dimension() {
        return Err(Error::InvalidSubproduct(format!("no factor {i}")));
    }
    let f = g.space().factor(i);
    if e >= f.vertex_count() {
        return Err(Error::VertexOutOfRange { vertex: e, n: f.vertex_count() });
    }
    let structure = classes::suboctahedron_structure(f).ok_or(Error::NotSuboctahedron(i))?;
    if structure.is_clique {
        return Err(Error::CliqueFactor);
    }
    let opposite = structure.opposite_of(e).ok_or(Error::NoOpposite(e))?;
    let (merged, map) = identify(f, e, opposite)?;
    // in a suboctahedron e and its opposite see the same neighbors
    let leaves = f.neighbors(opposite).to_vec();
    let star = Graph::star(leaves.len());
    build(g, i, ReductionKind::Octahedron { e, opposite }, e, opposite, merged, map, star, leaves)
}

#[allow(clippy::too_many_arguments)]
fn build(
    g: &ProductSubgraph,
    i: usize,
    kind: ReductionKind,
    a: usize,
    b: usize,
    merged_factor: Graph,
    factor_map: Vec<usize>,
    star: Graph,
    leaves: Vec<usize>,
) -> Result<ReductionStep> {
    let space = g.space();
    let hat = space.with_factor(i, merged_factor)?;
    let tilde = space.with_factor(i, star)?;

    let images: Vec<ProductVertex> = g.vertices().iter().map(|x| with_coordinate(x, i, factor_map[x[i]])).collect();
    let merged = ProductSubgraph::induced(hat, images.clone())?;
    let vertex_map: Vec<usize> = images.iter().map(|y| merged.index_of(y).expect("image is a vertex")).collect();

    // central vertices: copies where both merged ends are present
    let mut centers = Vec::new();
    let mut center_sources = Vec::new();
    for (k, x) in g.vertices().iter().enumerate() {
        if x[i] != a {
            continue;
        }
        if let Some(kb) = g.index_of(&with_coordinate(x, i, b)) {
            centers.push(with_coordinate(x, i, 0));
            center_sources.push((k, kb));
        }
    }
    let center = ProductSubgraph::induced(tilde.clone(), centers.clone())?;
    // induced() sorts; centers were produced in sorted order of x, which is
    // also sorted order after fixing coordinate i
    debug_assert_eq!(center.vertices(), centers.as_slice());

    let mut tips = Vec::new();
    let mut tip_sources = Vec::new();
    let mut tip_center = Vec::new();
    for (c, &(ka, _)) in center_sources.iter().enumerate() {
        let x = &g.vertices()[ka];
        for (j, &y) in leaves.iter().enumerate() {
            if let Some(ky) = g.index_of(&with_coordinate(x, i, y)) {
                tips.push(with_coordinate(x, i, j + 1));
                tip_sources.push(ky);
                tip_center.push(c);
            }
        }
    }

    let mut upper_vertices = centers.clone();
    upper_vertices.extend(tips.iter().cloned());
    let mut upper_edges: Vec<(usize, usize)> = center.edges().to_vec();
    upper_edges.extend(tip_center.iter().enumerate().map(|(t, &c)| (c, centers.len() + t)));
    let upper = ProductSubgraph::with_edges(tilde, upper_vertices, upper_edges)?;

    let mut image_edges: Vec<(usize, usize)> =
        g.edges().iter().map(|&(p, q)| (vertex_map[p], vertex_map[q])).filter(|(p, q)| p != q).map(|(p, q)| (p.min(q), p.max(q))).collect();
    image_edges.sort_unstable();
    image_edges.dedup();
    let contracted = match kind {
        ReductionKind::Edge { .. } => center.vertex_count(),
        ReductionKind::Octahedron { .. } => 0,
    };
    let groups =
        EdgeGroups { contracted, triangles: tips.len(), squares: center.edge_count(), created: merged.edge_count() - image_edges.len() };
    let step = ReductionStep {
        factor: i,
        kind,
        common_neighbors: leaves,
        merged,
        factor_map,
        upper,
        center,
        tips,
        vertex_map,
        center_sources,
        tip_sources,
        groups,
        source_vertices: g.vertex_count(),
        source_edges: g.edge_count(),
    };
    step.check_counts(image_edges.len())?;
    Ok(step)
}

impl ReductionStep {
    fn check_counts(&self, image_edges: usize) -> Result<()> {
        let (nv, ne) = (self.source_vertices, self.source_edges);
        if nv != self.merged.vertex_count() + self.center.vertex_count() {
            return Err(Error::Invariant(format!(
                "|V(G)| = {nv} but |V(G_uv)| + |V(G^uv_c)| = {} + {}",
                self.merged.vertex_count(),
                self.center.vertex_count()
            )));
        }
        if self.upper.vertex_count() - self.tips.len() != self.center.vertex_count() {
            return Err(Error::Invariant("|V(G^uv)| - |V_l| differs from |V(G^uv_c)|".into()));
        }
        let g = &self.groups;
        if ne != image_edges + g.contracted + g.triangles + g.squares {
            return Err(Error::Invariant(format!(
                "edge groups do not add up: {ne} != {image_edges} + {} + {} + {}",
                g.contracted, g.triangles, g.squares
            )));
        }
        if !self.edge_inequality_holds() {
            return Err(Error::Invariant("edge counting inequality fails".into()));
        }
        Ok(())
    }

    /// `|E(G)| <= |E(G_uv)| + |E(G^uv)| + |V(G^uv_c)|` for edge steps and
    /// `|E(G)| <= |E(G_e)| + |E(G^e_c)| + |V_l(G^e)|` for octahedron steps.
    pub fn edge_inequality_holds(&self) -> bool {
        let rhs = match self.kind {
            ReductionKind::Edge { .. } => self.merged.edge_count() + self.upper.edge_count() + self.center.vertex_count(),
            ReductionKind::Octahedron { .. } => self.merged.edge_count() + self.center.edge_count() + self.tips.len(),
        };
        self.source_edges <= rhs
    }

    pub fn source_vertex_count(&self) -> usize {
        self.source_vertices
    }

    pub fn source_edge_count(&self) -> usize {
        self.source_edges
    }

    /// `|V(G^uv)| / |V(G^uv_c)|`, or `None` when there are no central vertices.
    pub fn upper_ratio(&self) -> Option<Rational> {
        (self.center.vertex_count() > 0).then(|| rational::ratio(self.upper.vertex_count(), self.center.vertex_count()))
    }

    pub fn to_json(&self) -> Value {
        let inst = |s: &ProductSubgraph| serde_json::to_value(InstanceFile::from_subgraph(s)).expect("instance serializes");
        json!({
            "factor": self.factor,
            "kind": self.kind,
            "common_neighbors": self.common_neighbors,
            "factor_map": self.factor_map,
            "merged": inst(&self.merged),
            "upper": inst(&self.upper),
            "center": inst(&self.center),
            "tips": self.tips,
            "vertex_map": self.vertex_map,
            "center_sources": self.center_sources,
            "tip_sources": self.tip_sources,
            "groups": self.groups,
            "counts": {
                "vertices": self.source_vertices,
                "edges": self.source_edges,
                "merged_vertices": self.merged.vertex_count(),
                "merged_edges": self.merged.edge_count(),
                "upper_vertices": self.upper.vertex_count(),
                "upper_edges": self.upper.edge_count(),
                "center_vertices": self.center.vertex_count(),
                "center_edges": self.center.edge_count(),
                "tip_vertices": self.tips.len(),
            },
        })
    }
}

/// One compared inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    /// False for checks that are reported but not expected to hold.
    pub binding: bool,
}

impl Inequality {
    fn new(name: &str, lhs: Rational, rhs: Rational, binding: bool) -> Self {
        Inequality { name: name.into(), lhs: rational::format(&lhs), rhs: rational::format(&rhs), holds: lhs <= rhs, binding }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub inequalities: Vec<Inequality>,
    /// Some VC quantity was only bounded, so nothing is concluded.
    pub inconclusive: bool,
}

impl MonotonicityReport {
    pub fn violations(&self) -> Vec<&Inequality> {
        if self.inconclusive {
            return Vec::new();
        }
        self.inequalities.iter().filter(|q| q.binding && !q.holds).collect()
    }
}

/// VC monotonicity across a step: `vcd*` and `vcdens*` do not grow in
/// `G_uv`, drop by one (and at least one half) in `G^uv_c`, and the central
/// vertices carry at most `|N| + 1` vertices of `G^uv` each. The literal
/// forms with a drop of one in `vcdens*` and a ratio bound of `|N|` are
/// listed as non-binding.
pub fn vc_monotonicity_check(g: &ProductSubgraph, step: &ReductionStep, opts: &VcOptions) -> Result<MonotonicityReport> {
    let whole_d = vc::vcd_minor(g, opts)?;
    let whole_r = vc::vcdens_minor(g, opts)?;
    let merged_d = vc::vcd_minor(&step.merged, opts)?;
    let merged_r = vc::vcdens_minor(&step.merged, opts)?;
    let mut inconclusive = !(whole_d.exact && whole_r.exact && merged_d.exact && merged_r.exact);
    let int = |x: usize| Rational::from_integer(x as i64);
    let mut inequalities = vec![
        Inequality::new("vcd*(G_uv) <= vcd*(G)", int(merged_d.value), int(whole_d.value), true),
        Inequality::new("vcdens*(G_uv) <= vcdens*(G)", merged_r.value, whole_r.value, true),
    ];
    if step.center.vertex_count() > 0 {
        let center_d = vc::vcd_minor(&step.center, opts)?;
        let center_r = vc::vcdens_minor(&step.center, opts)?;
        inconclusive |= !(center_d.exact && center_r.exact);
        let one = Rational::from_integer(1);
        let half = Rational::new(1, 2);
        inequalities.push(Inequality::new("vcd*(G^uv_c) <= vcd*(G) - 1", int(center_d.value), int(whole_d.value) - one, true));
        inequalities.push(Inequality::new("vcdens*(G^uv_c) <= vcdens*(G) - 1/2", center_r.value, whole_r.value - half, true));
        inequalities.push(Inequality::new("vcdens*(G^uv_c) <= vcdens*(G) - 1", center_r.value, whole_r.value - one, false));
        let ratio = step.upper_ratio().expect("centers exist");
        let n = step.common_neighbors.len();
        inequalities.push(Inequality::new("|V(G^uv)|/|V(G^uv_c)| <= |N| + 1", ratio, int(n + 1), true));
        inequalities.push(Inequality::new("|V(G^uv)|/|V(G^uv_c)| <= |N|", ratio, int(n), false));
    }
    Ok(MonotonicityReport { inequalities, inconclusive })
}

/// The edge bound obtained by reducing until no factor projection has an
/// edge: `B(G) = B(G_uv) + B(G^uv_c) + |V(G^uv)|`, zero for edgeless `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InductionBound {
    pub bound: usize,
    pub steps: usize,
    /// Largest `|N| + 1` over all steps, zero when there are none.
    pub star_factor: usize,
}

/// Runs the recursion. The edge is chosen in the first factor whose
/// projection has an edge: `v` of minimum degree in that factor (smallest
/// index on ties), `u` its smallest neighbor.
pub fn induction_edge_bound(g: &ProductSubgraph) -> Result<InductionBound> {
    g.require_induced()?;
    let mut acc = InductionBound { bound: 0, steps: 0, star_factor: 0 };
    recurse(g, &mut acc)?;
    Ok(acc)
}

fn recurse(g: &ProductSubgraph, acc: &mut InductionBound) -> Result<()> {
    if g.edge_count() == 0 {
        return Ok(());
    }
    let space: &ProductSpace = g.space();
    let i = (0..space.dimension()).find(|&i| g.projection_on_factor(i).0.edge_count() > 0).expect("an edge of G lies along some factor");
    let f = space.factor(i);
    let v = (0..f.vertex_count()).min_by_key(|&x| (f.degree(x), x)).expect("factor is nonempty");
    let u = f.neighbors(v)[0];
    let step = reduce(g, i, u, v)?;
    acc.steps += 1;
    acc.bound += step.upper.vertex_count();
    acc.star_factor = acc.star_factor.max(step.common_neighbors.len() + 1);
    recurse(&step.merged, acc)?;
    recurse(&step.center, acc)
}
