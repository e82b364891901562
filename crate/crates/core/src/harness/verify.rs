//! Per-instance claim checks. Each returns the records for one instance;
//! computation errors become inconclusive records, invariant failures
//! become violations.

use crate::classes::{self, Chordality};
use crate::density::{self, forest_decomposition};
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::labeling;
use crate::product::{ProductSpace, ProductSubgraph};
use crate::rational::{self, Rational};
use crate::reduction::{self, ReductionKind, ReductionStep};
use crate::vc::{self, VcOptions};

use super::generate::Family;
use super::report::{digest, Record, Side};

fn int(x: usize) -> Rational {
    Rational::from_integer(x as i64)
}

fn ceil_mad(g: &Graph) -> usize {
    if g.vertex_count() == 0 {
        return 0;
    }
    rational::ceil(&density::mad(g).expect("nonempty graph")) as usize
}

fn ceil_dens(g: &Graph) -> usize {
    if g.vertex_count() == 0 {
        return 0;
    }
    rational::ceil(&density::density(g).expect("nonempty graph")) as usize
}

/// `|E| / |V| <= beta0 * log2 n`, `beta0 <= beta`, the two-vertex degree
/// bound on a projection, and one splitting step of the induction.
pub fn check_theorem4(g: &ProductSubgraph) -> Vec<Record> {
    let d = digest(g);
    let n = g.vertex_count();
    let space = g.space();
    let projections: Vec<(Graph, Vec<usize>)> = (0..space.dimension()).map(|i| g.projection_on_factor(i)).collect();
    let beta0 = projections.iter().map(|(p, _)| ceil_mad(p)).max().unwrap_or(0);
    let beta = space.factors().iter().map(ceil_mad).max().unwrap_or(0);
    let ratio = rational::ratio(g.edge_count(), n);
    let beta0_dens = projections.iter().map(|(p, _)| ceil_dens(p)).max().unwrap_or(0);
    let dens_form = Record::at_most("Thm4", &d, ratio, Side::Log { coef: int(beta0_dens), n });
    let mut out = vec![
        Record::at_most("Thm4", &d, ratio, Side::Log { coef: int(beta0), n })
            .with_note(format!("dens-based form with {beta0_dens}*log2({n}): {:?}", dens_form.verdict)),
        Record::at_most("Thm4.beta", &d, Side::int(beta0), Side::int(beta)),
    ];
    if n < 2 {
        return out;
    }
    let i = projections.iter().position(|(p, _)| p.vertex_count() >= 2).expect("two vertices differ in some coordinate");
    let (p, trace) = &projections[i];
    let (a, b) = graph::two_min_degree_vertices(p).expect("projection has two vertices");
    out.push(Record::at_most("Lem1", &d, Side::int(p.degree(a).max(p.degree(b))), Side::int(ceil_mad(p))));
    let layer = |c: usize| -> Vec<bool> { g.vertices().iter().map(|x| x[i] == c).collect() };
    let (mut first, mut second) = (layer(trace[a]), layer(trace[b]));
    let size = |s: &[bool]| s.iter().filter(|&&x| x).count();
    let mut deg = p.degree(a);
    if size(&first) > size(&second) {
        std::mem::swap(&mut first, &mut second);
        deg = p.degree(b);
    }
    let a_size = size(&first);
    let cut = g.edges().iter().filter(|&&(x, y)| first[x] != first[y]).count();
    out.push(Record::at_most("Thm4.split.size", &d, Side::int(a_size), rational::ratio(n, 2)));
    out.push(
        Record::at_most("Thm4.split.cut", &d, Side::int(cut), Side::int(beta0 * a_size))
            .with_note(format!("layer degree {deg} in the projection on factor {i}")),
    );
    out
}

/// `|E| / |V| <= vcd(G)` for subgraphs of hypercubes, with the equalities
/// `vcd = vcd* = 2 vcdens = 2 vcdens*`.
pub fn check_theorem1(g: &ProductSubgraph, opts: &VcOptions) -> Vec<Record> {
    let d = digest(g);
    let vcd = match vc::vcd_induced(g) {
        Ok(x) => x,
        Err(e) => return vec![Record::skipped("Thm1", &d, e.to_string())],
    };
    let mut out = vec![Record::at_most("Thm1", &d, g.edge_ratio().expect("nonempty"), Side::int(vcd.value))];
    if let (Ok(star), Ok(dens), Ok(dens_star)) = (vc::vcd_minor(g, opts), vc::vcdens_induced(g, opts), vc::vcdens_minor(g, opts)) {
        out.push(Record::equal("Thm1.vcd*", &d, Side::int(star.value), Side::int(vcd.value)).exact_if(star.exact));
        out.push(Record::equal("Thm1.vcdens", &d, dens.value * 2, int(vcd.value)).exact_if(dens.exact));
        out.push(Record::equal("Thm1.vcdens*", &d, dens_star.value * 2, int(vcd.value)).exact_if(dens_star.exact));
    }
    out
}

/// How `mu` was chosen for an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct MuChoice {
    pub value: Rational,
    pub source: &'static str,
}

/// Preset average-degree bounds: trees and paths 2, cycles
/// (series-parallel) 4, planar 6, chordal the largest `ceil(mad)` of a
/// factor, since contractions keep chordal graphs chordal without growing
/// the clique number.
pub fn mu_preset(family: Family, space: &ProductSpace) -> Option<MuChoice> {
    let value = match family {
        Family::Path | Family::Tree => int(2),
        Family::Cycle => int(4),
        Family::Planar => int(6),
        Family::Chordal => int(space.factors().iter().map(ceil_mad).max().unwrap_or(0)),
        _ => return None,
    };
    Some(MuChoice { value, source: family.name() })
}

pub fn resolve_mu(family: Option<Family>, space: &ProductSpace, user: Option<Rational>) -> Result<MuChoice> {
    if let Some(value) = user {
        return Ok(MuChoice { value, source: "user" });
    }
    family.and_then(|f| mu_preset(f, space)).ok_or(Error::MissingMu)
}

/// Whether every minor of every factor has a vertex of degree at most `mu`,
/// i.e. the degeneracy of each minor is at most `mu`. Minors are enumerated
/// for factors of at most `f_max` vertices; larger factors are checked on
/// the factor alone.
pub fn validate_mu(space: &ProductSpace, mu: Rational, f_max: usize) -> (bool, bool) {
    let mut complete = true;
    for f in space.factors() {
        if int(graph::degeneracy(f)) > mu {
            return (false, true);
        }
        if f.vertex_count() > f_max {
            complete = false;
            continue;
        }
        for parts in vc::connected_partitions(f).expect("small factor") {
            let minor = vc::quotient_graph(f, &parts);
            if int(graph::degeneracy(&minor)) > mu {
                return (false, true);
            }
        }
    }
    (true, complete)
}

/// `|E| / |V| <= mu vcd*(G) <= mu log2 |V|`, the VC relations between the
/// four quantities, and the reduction recursion behind the first bound.
pub fn check_theorem5(g: &ProductSubgraph, mu: &MuChoice, opts: &VcOptions) -> Vec<Record> {
    let d = digest(g);
    let n = g.vertex_count();
    let report = match vc::vc_report(g, opts) {
        Ok(r) => r,
        Err(Error::Invariant(msg)) => return vec![Record::failed("Lem4", &d, msg)],
        Err(e) => return vec![Record::skipped("Thm5", &d, e.to_string())],
    };
    let (star, star_exact) = (report.vcd_star.value, report.vcd_star.exact);
    let (valid, complete) = validate_mu(g.space(), mu.value, opts.f_max);
    let ratio = g.edge_ratio().expect("nonempty");
    let mut thm5 = Record::at_most("Thm5", &d, ratio, mu.value * int(star)).exact_if(star_exact && valid).with_note(format!(
        "mu = {} ({})",
        rational::format(&mu.value),
        mu.source
    ));
    if !valid {
        thm5 = thm5.with_note(format!("mu = {} is below the degeneracy of a factor minor", rational::format(&mu.value)));
    } else if !complete {
        thm5 = thm5.with_note(format!("mu = {} ({}); minors of large factors unchecked", rational::format(&mu.value), mu.source));
    }
    let mut out = vec![
        thm5,
        Record::at_most("Lem8", &d, Side::int(star), Side::Log { coef: int(1), n }).exact_if(star_exact),
        Record::at_most("Lem4.vcd", &d, Side::int(report.vcd.value), Side::int(star)).exact_if(star_exact),
        Record::at_most("Lem4.vcdens", &d, report.vcdens.value, report.vcdens_star.value)
            .exact_if(report.vcdens.exact && report.vcdens_star.exact),
    ];
    if g.space().factors().iter().all(|f| f.vertex_count() <= opts.f_max.min(64)) {
        if let Ok(mm) = vc::minor_mad_bound(g.space()) {
            out.push(
                Record::at_most("Lem5", &d, report.vcdens_star.value, rational::ratio(mm, 2) * int(star))
                    .exact_if(star_exact && report.vcdens_star.exact)
                    .with_note(format!("mu = {mm}, the largest ceil(mad) of a factor minor")),
            );
        }
    }
    match reduction::induction_edge_bound(g) {
        Ok(b) => {
            out.push(Record::at_most("Thm5.induction", &d, Side::int(g.edge_count()), Side::int(b.bound)));
            out.push(
                Record::at_most("Thm5.induction.vcd*", &d, Side::int(b.bound), Side::int(b.star_factor * star * n))
                    .exact_if(star_exact)
                    .with_note(format!("{} steps, star factor {}", b.steps, b.star_factor)),
            );
            out.push(Record::at_most("Thm5.star", &d, Side::int(b.star_factor), mu.value).exact_if(valid));
        }
        Err(Error::Invariant(msg)) => out.push(Record::failed("Lem10", &d, msg)),
        Err(e) => out.push(Record::skipped("Thm5.induction", &d, e.to_string())),
    }
    out
}

/// `dens(prod G_i) = sum dens(G_i)`, attained by the product of densest
/// subgraphs of the factors.
pub fn check_lemma2(space: &ProductSpace, cap: u128) -> Vec<Record> {
    let full = match ProductSubgraph::full(space.clone(), cap) {
        Ok(g) => g,
        Err(e) => {
            let single = ProductSubgraph::induced(space.clone(), vec![vec![0; space.dimension()]]).expect("origin is a vertex");
            return vec![Record::skipped("Lem2", &digest(&single), e.to_string())];
        }
    };
    let d = digest(&full);
    let whole = density::densest_subgraph(&full.graph()).expect("nonempty");
    let mut sum = int(0);
    let mut witness_sets = Vec::new();
    for f in space.factors() {
        let r = density::densest_subgraph(f).expect("nonempty factor");
        sum += r.density;
        witness_sets.push(r.witness);
    }
    let members: Vec<usize> =
        (0..full.vertex_count()).filter(|&k| full.vertices()[k].iter().enumerate().all(|(i, c)| witness_sets[i].contains(c))).collect();
    let sub = full.restrict(&members).expect("members are vertices");
    vec![
        Record::equal("Lem2", &d, whole.density, sum),
        Record::equal("Lem2.witness", &d, sub.edge_ratio().expect("witnesses are nonempty"), sum),
    ]
}

fn counting_records(prefix: &str, d: &str, step: &ReductionStep) -> Vec<Record> {
    let image = step.merged.edge_count() - step.groups.created;
    let grp = &step.groups;
    let rhs = match step.kind {
        ReductionKind::Edge { .. } => step.merged.edge_count() + step.upper.edge_count() + step.center.vertex_count(),
        ReductionKind::Octahedron { .. } => step.merged.edge_count() + step.center.edge_count() + step.tips.len(),
    };
    vec![
        Record::equal(
            &format!("{prefix}.vertices"),
            d,
            Side::int(step.source_vertex_count()),
            Side::int(step.merged.vertex_count() + step.center.vertex_count()),
        ),
        Record::equal(
            &format!("{prefix}.edges"),
            d,
            Side::int(step.source_edge_count()),
            Side::int(image + grp.contracted + grp.triangles + grp.squares),
        ),
        Record::at_most(prefix, d, Side::int(step.source_edge_count()), Side::int(rhs)),
    ]
}

/// The counting relations of one contraction step and the VC monotonicity
/// checks across it.
pub fn check_reduction(g: &ProductSubgraph, i: usize, u: usize, v: usize, opts: &VcOptions) -> Vec<Record> {
    let d = digest(g);
    let step = match reduction::reduce(g, i, u, v) {
        Ok(s) => s,
        Err(Error::Invariant(msg)) => return vec![Record::failed("Lem10", &d, msg)],
        Err(e) => return vec![Record::skipped("Lem10", &d, e.to_string())],
    };
    let mut out = counting_records("Lem10", &d, &step);
    match reduction::vc_monotonicity_check(g, &step, opts) {
        Ok(report) => {
            for q in &report.inequalities {
                let claim = monotonicity_claim(&q.name);
                let lhs = rational::parse(&q.lhs).expect("rendered rational");
                let rhs = rational::parse(&q.rhs).expect("rendered rational");
                let mut r = Record::at_most(claim, &d, lhs, rhs).exact_if(!report.inconclusive).with_note(q.name.clone());
                if !q.binding {
                    r = r.unproved();
                }
                out.push(r);
            }
        }
        Err(e) => out.push(Record::skipped("Lem6", &d, e.to_string())),
    }
    out
}

fn monotonicity_claim(name: &str) -> &'static str {
    match name {
        "vcd*(G_uv) <= vcd*(G)" => "Lem6.vcd",
        "vcdens*(G_uv) <= vcdens*(G)" => "Lem6.vcdens",
        "vcd*(G^uv_c) <= vcd*(G) - 1" => "Lem7.vcd",
        "vcdens*(G^uv_c) <= vcdens*(G) - 1/2" => "Lem7.vcdens",
        "vcdens*(G^uv_c) <= vcdens*(G) - 1" => "Lem7.vcdens.literal",
        "|V(G^uv)|/|V(G^uv_c)| <= |N| + 1" => "Lem9",
        "|V(G^uv)|/|V(G^uv_c)| <= |N|" => "Lem9.literal",
        _ => "Lem6",
    }
}

/// The counting relations of one octahedron step.
pub fn check_octahedron_reduction(g: &ProductSubgraph, i: usize, e: usize) -> Vec<Record> {
    let d = digest(g);
    match reduction::reduce_octahedron(g, i, e) {
        Ok(step) => counting_records("Lem16", &d, &step),
        Err(Error::Invariant(msg)) => vec![Record::failed("Lem16", &d, msg)],
        Err(err) => vec![Record::skipped("Lem16", &d, err.to_string())],
    }
}

/// An orientation with outdegrees at most `ceil(dens)` exists and is
/// produced, and the arboricity lies between `ceil(|E| / (n - 1))` and the
/// degeneracy, with a valid decomposition into degeneracy-many forests.
pub fn check_density_claims(g: &ProductSubgraph) -> Vec<Record> {
    let d = digest(g);
    let h = g.graph();
    let bound = ceil_dens(&h);
    let mut out = Vec::new();
    match density::bounded_outdegree_orientation(&h, bound) {
        Ok(o) => {
            let realized = o.outdegrees(h.vertex_count()).into_iter().max().unwrap_or(0);
            let covers = o.arcs.len() == h.edge_count() && o.arcs.iter().all(|&(a, b)| h.has_edge(a, b));
            let r = Record::at_most("Cor6", &d, Side::int(realized), Side::int(bound));
            out.push(if covers { r } else { Record::failed("Cor6", &d, "orientation does not cover the edges") });
        }
        Err(e) => out.push(Record::failed("Cor6", &d, e.to_string())),
    }
    let n = h.vertex_count();
    if n >= 2 {
        let a = density::arboricity(&h);
        let k = graph::degeneracy(&h);
        out.push(Record::at_most("NW", &d, Side::int(a), Side::int(k)));
        out.push(Record::at_most("NW.lower", &d, int(h.edge_count().div_ceil(n - 1)), Side::int(a)));
        let nw_dens = density::density(&h).expect("nonempty") * rational::ratio(n, n - 1);
        out.push(Record::at_most("NW.dens", &d, Side::int(a), int(rational::ceil(&nw_dens) as usize)));
        match forest_decomposition(&h, k.max(1)).and_then(|fd| fd.validate(&h)) {
            Ok(()) => {}
            Err(e) => out.push(Record::failed("NW.forests", &d, e.to_string())),
        }
    }
    out
}

/// `|E| / |V| <= DD(G) vcd(G)` for dismantlable factors and
/// `|E| / |V| <= omega(G) vcd(G)` for chordal or suboctahedral factors, with
/// `DD(Γ) = sum dd(G_i)` on products of at most `cap` vertices.
pub fn check_classes(g: &ProductSubgraph, cap: u128) -> Vec<Record> {
    let d = digest(g);
    let space = g.space();
    let vcd = match vc::vcd_induced(g) {
        Ok(v) => v.value,
        Err(e) => return vec![Record::skipped("Prop13", &d, e.to_string())],
    };
    let ratio = g.edge_ratio().expect("nonempty");
    let mut out = Vec::new();
    let dismantlable = space.factors().iter().all(|f| classes::min_dismantling_order(f).is_ok());
    if dismantlable {
        let pd = classes::product_min_dismantling_order(g).expect("factors are dismantlable");
        out.push(Record::at_most("Prop13", &d, ratio, int(pd.dd * vcd)));
        if space.vertex_count() <= cap {
            let full = ProductSubgraph::full(space.clone(), cap).expect("within cap");
            let whole = classes::product_min_dismantling_order(&full).expect("factors are dismantlable");
            out.push(Record::equal("DD", &digest(&full), Side::int(whole.dd), Side::int(whole.factor_dd_sum())));
            out.push(Record::at_most("DD.sub", &d, Side::int(pd.dd), Side::int(whole.dd)));
        }
    }
    let chordal = space.factors().iter().all(|f| matches!(classes::chordal_certificate(f), Chordality::Chordal(_)));
    let octahedral = space.factors().iter().all(|f| classes::suboctahedron_structure(f).is_some());
    if chordal || octahedral {
        let omega = classes::clique_number(&g.graph());
        if chordal {
            out.push(Record::at_most("Cor14", &d, ratio, int(omega * vcd)));
        }
        if octahedral {
            out.push(Record::at_most("Prop15", &d, ratio, int(omega * vcd)));
        }
    }
    out
}

/// Labels from a degeneracy-many forest decomposition decide adjacency on
/// every ordered pair and have exactly `(k + 1) * ceil(log2(n + 1))` bits.
pub fn check_labeling(g: &ProductSubgraph) -> Vec<Record> {
    let d = digest(g);
    let h = g.graph();
    check_labeling_graph(&h, &d)
}

pub fn check_labeling_graph(h: &Graph, d: &str) -> Vec<Record> {
    let n = h.vertex_count();
    let k = graph::degeneracy(h).max(1);
    let scheme = match forest_decomposition(h, k).and_then(|fd| labeling::encode(h, &fd)) {
        Ok(s) => s,
        Err(e) => return vec![Record::failed("Label", d, e.to_string())],
    };
    let mut wrong = 0;
    for x in 0..n {
        for y in 0..n {
            if scheme.adjacent(x, y).map_or(true, |a| a != h.has_edge(x, y)) {
                wrong += 1;
            }
        }
    }
    let expected_bits = (k + 1) * labeling::field_width(n);
    let longest = scheme.labels.iter().map(|l| l.len()).max().unwrap_or(0);
    let shortest = scheme.labels.iter().map(|l| l.len()).min().unwrap_or(0);
    let mad_floor = if n == 0 { 0 } else { rational::floor(&density::mad(h).expect("nonempty")) as usize };
    let mut out = vec![
        Record::at_most("Label", d, Side::int(wrong), Side::int(0)).with_note(format!("{} ordered pairs", n * n)),
        Record::equal("Label.size", d, Side::int(longest), Side::int(expected_bits)),
        Record::equal("Label.size", d, Side::int(shortest), Side::int(expected_bits)),
        Record::at_most("Label.k", d, Side::int(graph::degeneracy(h)), Side::int(mad_floor)),
    ];
    if h.edge_count() > 0 {
        out.push(Record::at_most("Label.k", d, Side::int(k), Side::int(graph::degeneracy(h))));
    }
    out
}

/// `|E| / |V| <= vcdens*(G)`. Not proved; violations are discoveries.
/// `Conj3` uses `vcdens*` as defined, the largest `|E(M)| / |V(M)|`;
/// `Conj3.mad` the average-degree normalization `2 vcdens*`, under which
/// subgraphs of hypercubes satisfy it by the hypercube bound.
pub fn check_conjecture3(g: &ProductSubgraph, opts: &VcOptions) -> Vec<Record> {
    let d = digest(g);
    match vc::vcdens_minor(g, opts) {
        Ok(r) => {
            let ratio = g.edge_ratio().expect("nonempty");
            vec![
                Record::at_most("Conj3", &d, ratio, r.value).exact_if(r.exact).unproved(),
                Record::at_most("Conj3.mad", &d, ratio, r.value * 2).exact_if(r.exact).unproved(),
            ]
        }
        Err(e) => vec![Record::skipped("Conj3", &d, e.to_string()).unproved()],
    }
}
