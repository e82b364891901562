//! Shattering and the four VC quantities of a product subgraph: `vcd` and
//! `vcdens` over subproducts, `vcd*` and `vcdens*` over minor-subproducts.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::density::UnionFind;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::product::{self, ProductSpace, ProductSubgraph, SubFactor, Subproduct};
use crate::rational::{self, Rational};

const NONE: u32 = u32::MAX;

/// Search limits. Inside the caps (every factor at most `f_max` vertices,
/// at most `m_max` factors) the minor searches are exhaustive. Outside them
/// an exhaustive search runs until `budget` evaluations are spent, then a
/// randomized contraction search takes over and the result is a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcOptions {
    pub budget: u64,
    pub f_max: usize,
    pub m_max: usize,
    pub seed: u64,
    pub materialize_cap: u128,
}

impl Default for VcOptions {
    fn default() -> Self {
        VcOptions { budget: 1_000_000, f_max: 8, m_max: 6, seed: 0, materialize_cap: product::DEFAULT_MATERIALIZE_CAP }
    }
}

impl VcOptions {
    fn within_caps(&self, space: &ProductSpace) -> bool {
        space.dimension() <= self.m_max && space.factors().iter().all(|f| f.vertex_count() <= self.f_max)
    }
}

/// One partition per factor into connected parts. Parts are sorted and
/// listed by smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorPartition {
    parts: Vec<Vec<Vec<usize>>>,
}

impl MinorPartition {
    pub fn new(space: &ProductSpace, parts: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if parts.len() != space.dimension() {
            return Err(Error::InvalidPartition(format!("{} factor partitions for {} factors", parts.len(), space.dimension())));
        }
        let mut normalized = Vec::with_capacity(parts.len());
        for (i, (factor_parts, g)) in parts.into_iter().zip(space.factors()).enumerate() {
            let mut seen = vec![false; g.vertex_count()];
            let mut fp = Vec::with_capacity(factor_parts.len());
            for mut part in factor_parts {
                part.sort_unstable();
                if part.is_empty() {
                    return Err(Error::InvalidPartition(format!("empty part in factor {i}")));
                }
                for &v in &part {
                    if v >= g.vertex_count() || seen[v] {
                        return Err(Error::InvalidPartition(format!("vertex {v} of factor {i} out of range or repeated")));
                    }
                    seen[v] = true;
                }
                if !g.is_connected_subset(&part) {
                    return Err(Error::InvalidPartition(format!("part {part:?} of factor {i} is not connected")));
                }
                fp.push(part);
            }
            if seen.iter().any(|&s| !s) {
                return Err(Error::InvalidPartition(format!("parts of factor {i} do not cover its vertices")));
            }
            fp.sort();
            normalized.push(fp);
        }
        Ok(MinorPartition { parts: normalized })
    }

    /// Every factor split into singletons.
    pub fn singletons(space: &ProductSpace) -> Self {
        let parts = space.factors().iter().map(|g| (0..g.vertex_count()).map(|v| vec![v]).collect()).collect();
        MinorPartition { parts }
    }

    /// Every factor kept whole.
    pub fn trivial(space: &ProductSpace) -> Self {
        let parts = space.factors().iter().map(|g| vec![(0..g.vertex_count()).collect()]).collect();
        MinorPartition { parts }
    }

    pub fn parts(&self, i: usize) -> &[Vec<usize>] {
        &self.parts[i]
    }

    pub fn part_count(&self, i: usize) -> usize {
        self.parts[i].len()
    }

    /// Factor vertex to part index.
    pub fn labels(&self, i: usize) -> Vec<u32> {
        let n = self.parts[i].iter().map(Vec::len).sum();
        let mut labels = vec![NONE; n];
        for (k, part) in self.parts[i].iter().enumerate() {
            for &v in part {
                labels[v] = k as u32;
            }
        }
        labels
    }

    /// Number of factors split into two or more parts.
    pub fn dimension(&self) -> usize {
        self.parts.iter().filter(|p| p.len() >= 2).count()
    }

    /// `M_i`: factor `i` with each part contracted, simplified.
    pub fn minor(&self, space: &ProductSpace, i: usize) -> Graph {
        quotient_graph(space.factor(i), &self.parts[i])
    }

    /// `dens(M)`: the sum of the minors' edge-to-vertex ratios.
    pub fn density(&self, space: &ProductSpace) -> Rational {
        (0..self.parts.len()).map(|i| rational::ratio(self.minor(space, i).edge_count(), self.parts[i].len())).sum()
    }
}

/// Refines the cell codes of `rows` by one factor's labels. `Some` when
/// every one of the `total * t` cells is hit.
fn refine(
    rows: &[Vec<usize>],
    codes: &[u32],
    factor: usize,
    labels: &[u32],
    t: u32,
    total: usize,
    seen: &mut Vec<bool>,
) -> Option<Vec<u32>> {
    let new_total = total * t as usize;
    if new_total > rows.len() {
        return None;
    }
    seen.clear();
    seen.resize(new_total, false);
    let mut hit = 0;
    let out = rows
        .iter()
        .zip(codes)
        .map(|(x, &c)| {
            let l = labels[x[factor]];
            if c == NONE || l == NONE {
                return NONE;
            }
            let k = c * t + l;
            if !seen[k as usize] {
                seen[k as usize] = true;
                hit += 1;
            }
            k
        })
        .collect();
    (hit == new_total).then_some(out)
}

fn cells_all_hit(g: &ProductSubgraph, per_factor: &[(usize, Vec<u32>, u32)]) -> bool {
    let rows = g.vertices();
    let mut codes = vec![0u32; rows.len()];
    let mut total = 1;
    let mut seen = Vec::new();
    for (i, labels, t) in per_factor {
        match refine(rows, &codes, *i, labels, *t, total, &mut seen) {
            Some(c) => codes = c,
            None => return false,
        }
        total *= *t as usize;
    }
    total <= rows.len() && !rows.is_empty()
}

/// Whether `G` shatters the subproduct: every vertex of the subproduct has a
/// vertex of `G` in its fiber. The projection is compared against the
/// subproduct as a consistency check.
pub fn shatters_subproduct(g: &ProductSubgraph, sub: &Subproduct, cap: u128) -> Result<bool> {
    g.require_induced()?;
    let size = sub.vertex_count();
    if size > cap {
        return Err(Error::TooLarge { what: "subproduct", size, cap });
    }
    let per_factor: Vec<_> = sub
        .factors()
        .iter()
        .map(|f| {
            let mut labels = vec![NONE; g.space().factor(f.index).vertex_count()];
            for (k, &v) in f.vertices.iter().enumerate() {
                labels[v] = k as u32;
            }
            (f.index, labels, f.vertices.len() as u32)
        })
        .collect();
    let shattered = cells_all_hit(g, &per_factor);
    let proj = product::projection(g, sub);
    let (_, whole) = sub.materialize(cap)?;
    let same = proj.vertices.len() as u128 == size && proj.graph.edge_count() == whole.edge_count();
    if same != shattered {
        return Err(Error::Invariant("trace and projection disagree on shattering".into()));
    }
    Ok(shattered)
}

/// Whether every cell of the partition product contains a vertex of `G`.
pub fn shatters_minor(g: &ProductSubgraph, mp: &MinorPartition) -> Result<bool> {
    g.require_induced()?;
    let mp = MinorPartition::new(g.space(), mp.parts.clone())?;
    let per_factor: Vec<_> =
        (0..mp.parts.len()).filter(|&i| mp.part_count(i) >= 2).map(|i| (i, mp.labels(i), mp.part_count(i) as u32)).collect();
    Ok(cells_all_hit(g, &per_factor))
}

/// A candidate contribution of one factor.
#[derive(Debug, Clone)]
struct FactorOption {
    labels: Vec<u32>,
    t: u32,
    score: Rational,
    classes: Vec<Vec<usize>>,
}

struct Budget {
    used: u64,
    limit: Option<u64>,
}

impl Budget {
    fn new(limit: Option<u64>) -> Self {
        Budget { used: 0, limit }
    }

    /// Spends one unit; false once the limit is passed.
    fn spend(&mut self) -> bool {
        self.used += 1;
        self.limit.is_none_or(|l| self.used <= l)
    }

    fn exhausted(&self) -> bool {
        self.limit.is_some_and(|l| self.used > l)
    }
}

/// Branch and bound over "at most one option per factor", maximizing the
/// summed score among choices whose cells are all hit.
struct Maximizer<'a> {
    rows: &'a [Vec<usize>],
    options: &'a [Vec<FactorOption>],
    upper: Vec<Rational>,
    seen: Vec<bool>,
    choice: Vec<Option<usize>>,
    best: Rational,
    best_choice: Vec<Option<usize>>,
    budget: &'a mut Budget,
}

impl<'a> Maximizer<'a> {
    fn run(rows: &'a [Vec<usize>], options: &'a [Vec<FactorOption>], budget: &'a mut Budget) -> (Rational, Vec<Option<usize>>) {
        let m = options.len();
        let mut upper = vec![Rational::zero(); m + 1];
        for i in (0..m).rev() {
            let top = options[i].iter().map(|o| o.score).max().unwrap_or_else(Rational::zero);
            upper[i] = upper[i + 1] + top.max(Rational::zero());
        }
        let mut me = Maximizer {
            rows,
            options,
            upper,
            seen: Vec::new(),
            choice: vec![None; m],
            best: Rational::zero(),
            best_choice: vec![None; m],
            budget,
        };
        if !rows.is_empty() {
            let codes = vec![0u32; rows.len()];
            me.dfs(0, &codes, 1, Rational::zero());
        }
        (me.best, me.best_choice)
    }

    fn dfs(&mut self, i: usize, codes: &[u32], total: usize, cur: Rational) {
        if cur > self.best {
            self.best = cur;
            self.best_choice = self.choice.clone();
        }
        if i == self.options.len() || cur + self.upper[i] <= self.best || self.budget.exhausted() {
            return;
        }
        let options = self.options;
        for (k, o) in options[i].iter().enumerate() {
            if cur + o.score + self.upper[i + 1] <= self.best {
                continue;
            }
            if total * o.t as usize > self.rows.len() {
                continue;
            }
            if !self.budget.spend() {
                return;
            }
            if let Some(next) = refine(self.rows, codes, i, &o.labels, o.t, total, &mut self.seen) {
                self.choice[i] = Some(k);
                self.dfs(i + 1, &next, total * o.t as usize, cur + o.score);
                self.choice[i] = None;
            }
        }
        self.dfs(i + 1, codes, total, cur);
    }
}

fn adjacency_masks(g: &Graph) -> Option<Vec<u64>> {
    (g.vertex_count() <= 64).then(|| g_masks(g))
}

fn g_masks(g: &Graph) -> Vec<u64> {
    (0..g.vertex_count()).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect()
}

fn mask_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Connected vertex sets `S` with `seed = min S` and `S ⊆ allowed ∪ {seed}`,
/// each exactly once. Stops early when `visit` returns false.
fn connected_sets_from(adj: &[u64], seed: usize, allowed: u64, visit: &mut dyn FnMut(u64) -> bool) -> bool {
    fn rec(adj: &[u64], allowed: u64, s: u64, frontier: u64, mut ex: u64, visit: &mut dyn FnMut(u64) -> bool) -> bool {
        if !visit(s) {
            return false;
        }
        let mut f = frontier;
        while f != 0 {
            let w = f.trailing_zeros() as usize;
            let wb = 1u64 << w;
            f &= !wb;
            let next = (f | adj[w]) & allowed & !(s | wb) & !ex;
            if !rec(adj, allowed, s | wb, next, ex, visit) {
                return false;
            }
            ex |= wb;
        }
        true
    }
    let above = if seed == 63 { 0 } else { !0u64 << (seed + 1) };
    let allowed = allowed & above;
    rec(adj, allowed, 1 << seed, adj[seed] & allowed, 0, visit)
}

/// All connected vertex subsets of a graph with at most 64 vertices.
pub fn connected_subsets(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let adj = adjacency_masks(g).ok_or(Error::TooLarge { what: "factor", size: g.vertex_count() as u128, cap: 64 })?;
    let full = if g.vertex_count() == 64 { !0 } else { (1u64 << g.vertex_count()) - 1 };
    let mut out = Vec::new();
    for seed in 0..g.vertex_count() {
        connected_sets_from(&adj, seed, full, &mut |s| {
            out.push(mask_vertices(s));
            true
        });
    }
    Ok(out)
}

/// Partitions of `full` into connected parts, parts ordered by smallest
/// vertex. Returns false if the budget ran out.
fn partitions_rec(adj: &[u64], remaining: u64, parts: &mut Vec<u64>, budget: &mut Budget, visit: &mut dyn FnMut(&[u64])) -> bool {
    if remaining == 0 {
        if !budget.spend() {
            return false;
        }
        visit(parts);
        return true;
    }
    let seed = remaining.trailing_zeros() as usize;
    let mut candidates = Vec::new();
    connected_sets_from(adj, seed, remaining, &mut |s| {
        candidates.push(s);
        true
    });
    for s in candidates {
        parts.push(s);
        let ok = partitions_rec(adj, remaining & !s, parts, budget, visit);
        parts.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// All partitions of a graph (at most 64 vertices) into connected parts.
pub fn connected_partitions(g: &Graph) -> Result<Vec<Vec<Vec<usize>>>> {
    let adj = adjacency_masks(g).ok_or(Error::TooLarge { what: "factor", size: g.vertex_count() as u128, cap: 64 })?;
    let full = if g.vertex_count() == 64 { !0 } else { (1u64 << g.vertex_count()) - 1 };
    let mut out = Vec::new();
    let mut budget = Budget::new(None);
    partitions_rec(&adj, full, &mut Vec::new(), &mut budget, &mut |parts| out.push(parts.iter().map(|&p| mask_vertices(p)).collect()));
    Ok(out)
}

fn labels_from(n: usize, classes: &[Vec<usize>]) -> Vec<u32> {
    let mut labels = vec![NONE; n];
    for (k, c) in classes.iter().enumerate() {
        for &v in c {
            labels[v] = k as u32;
        }
    }
    labels
}

/// The graph obtained from `f` by contracting each part to a vertex; part
/// `k` becomes vertex `k`.
pub fn quotient_graph(f: &Graph, parts: &[Vec<usize>]) -> Graph {
    let labels = labels_from(f.vertex_count(), parts);
    let edges = f.edge_iter().filter_map(|(a, b)| {
        let (x, y) = (labels[a] as usize, labels[b] as usize);
        (x != y).then_some((x.min(y), x.max(y)))
    });
    Graph::from_edges_dedup(parts.len(), edges).expect("quotient is simple")
}

fn quotient_edges(adj: &[u64], parts: &[u64]) -> usize {
    let mut count = 0;
    for a in 0..parts.len() {
        let reach = mask_vertices(parts[a]).iter().fold(0u64, |m, &v| m | adj[v]);
        count += parts[a + 1..].iter().filter(|&&b| reach & b != 0).count();
    }
    count
}

fn sort_options(options: &mut [FactorOption]) {
    // stable: ties keep enumeration order, which keeps witnesses reproducible
    options.sort_by_key(|o| std::cmp::Reverse(o.score));
}

/// A maximized quantity with its witness and whether the search was
/// exhaustive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dimension<W> {
    pub value: usize,
    pub witness: Option<W>,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Density<W> {
    #[serde(with = "rational::as_string")]
    pub value: Rational,
    pub witness: Option<W>,
    pub exact: bool,
}

fn to_subproduct(g: &ProductSubgraph, options: &[Vec<FactorOption>], choice: &[Option<usize>]) -> Option<Subproduct> {
    let factors: Vec<SubFactor> = choice
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.map(|k| (i, &options[i][k])))
        .map(|(i, o)| {
            let vertices = o.classes.iter().flatten().copied().collect::<Vec<_>>();
            let f = g.space().factor(i);
            let edges = f.edge_iter().filter(|(a, b)| vertices.contains(a) && vertices.contains(b)).collect();
            SubFactor { index: i, vertices, edges }
        })
        .collect();
    if factors.is_empty() {
        return None;
    }
    Some(Subproduct::new(g.space(), factors, false).expect("search only yields valid subproducts"))
}

fn to_partition(g: &ProductSubgraph, options: &[Vec<FactorOption>], choice: &[Option<usize>]) -> Option<MinorPartition> {
    if choice.iter().all(Option::is_none) {
        return None;
    }
    let parts = choice
        .iter()
        .enumerate()
        .map(|(i, c)| match c {
            Some(k) => options[i][*k].classes.clone(),
            None => vec![(0..g.space().factor(i).vertex_count()).collect()],
        })
        .collect();
    Some(MinorPartition::new(g.space(), parts).expect("search only yields valid partitions"))
}

/// `vcd(G)`: the largest shattered cube-subproduct. Always exact.
pub fn vcd_induced(g: &ProductSubgraph) -> Result<Dimension<Subproduct>> {
    g.require_induced()?;
    let options: Vec<Vec<FactorOption>> = (0..g.space().dimension())
        .map(|i| {
            let f = g.space().factor(i);
            let trace = g.trace_mask(i);
            f.edge_iter()
                .filter(|&(a, b)| trace[a] && trace[b])
                .map(|(a, b)| FactorOption {
                    labels: labels_from(f.vertex_count(), &[vec![a], vec![b]]),
                    t: 2,
                    score: Rational::from_integer(1),
                    classes: vec![vec![a], vec![b]],
                })
                .collect()
        })
        .collect();
    let mut budget = Budget::new(None);
    let (best, choice) = Maximizer::run(g.vertices(), &options, &mut budget);
    Ok(Dimension { value: rational::floor(&best) as usize, witness: to_subproduct(g, &options, &choice), exact: true })
}

/// `vcdens(G)`: the largest density of a shattered subproduct.
pub fn vcdens_induced(g: &ProductSubgraph, opts: &VcOptions) -> Result<Density<Subproduct>> {
    g.require_induced()?;
    let mut budget = Budget::new((!opts.within_caps(g.space())).then_some(opts.budget));
    let mut options = Vec::new();
    let mut enumerable = true;
    for i in 0..g.space().dimension() {
        let f = g.space().factor(i);
        let trace = g.trace_mask(i);
        let mut list = Vec::new();
        match adjacency_masks(f) {
            Some(adj) => {
                let allowed = trace.iter().enumerate().fold(0u64, |m, (v, &t)| if t { m | 1 << v } else { m });
                for seed in (0..f.vertex_count()).filter(|&v| trace[v]) {
                    let complete = connected_sets_from(&adj, seed, allowed, &mut |s| {
                        if s.count_ones() >= 2 {
                            let vs = mask_vertices(s);
                            let inside: Vec<bool> = (0..f.vertex_count()).map(|v| s >> v & 1 == 1).collect();
                            list.push(FactorOption {
                                labels: Vec::new(),
                                t: vs.len() as u32,
                                score: rational::ratio(f.edges_within(&inside), vs.len()),
                                classes: vs.iter().map(|&v| vec![v]).collect(),
                            });
                        }
                        budget.spend()
                    });
                    if !complete {
                        enumerable = false;
                        break;
                    }
                }
            }
            None => enumerable = false,
        }
        for o in &mut list {
            o.labels = labels_from(f.vertex_count(), &o.classes);
        }
        sort_options(&mut list);
        options.push(list);
    }
    let (best, choice) = Maximizer::run(g.vertices(), &options, &mut budget);
    Ok(Density { value: best, witness: to_subproduct(g, &options, &choice), exact: enumerable && !budget.exhausted() })
}

/// What a minor search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MinorObjective {
    Dimension,
    Density,
}

/// Per-factor options for the minor searches. For the dimension only
/// bipartitions are needed: merging adjacent parts keeps every cell hit,
/// and any connected partition with two or more parts coarsens to a
/// connected bipartition.
fn minor_options(g: &ProductSubgraph, objective: MinorObjective, budget: &mut Budget) -> Option<Vec<Vec<FactorOption>>> {
    let mut options = Vec::new();
    for i in 0..g.space().dimension() {
        let f = g.space().factor(i);
        let n = f.vertex_count();
        let adj = adjacency_masks(f)?;
        let trace = g.trace_mask(i);
        let tmask = trace.iter().enumerate().fold(0u64, |m, (v, &t)| if t { m | 1 << v } else { m });
        let full = if n == 64 { !0 } else { (1u64 << n) - 1 };
        let mut list = Vec::new();
        let mut push = |parts: &[u64], score: Rational| {
            let classes: Vec<Vec<usize>> = parts.iter().map(|&p| mask_vertices(p)).collect();
            list.push(FactorOption { labels: labels_from(n, &classes), t: parts.len() as u32, score, classes });
        };
        match objective {
            MinorObjective::Dimension => {
                let mut ok = true;
                if n >= 2 {
                    ok = connected_sets_from(&adj, 0, full, &mut |s| {
                        let rest = full & !s;
                        if rest != 0 && s & tmask != 0 && rest & tmask != 0 && f.is_connected_subset(&mask_vertices(rest)) {
                            push(&[s, rest], Rational::from_integer(1));
                        }
                        budget.spend()
                    });
                }
                if !ok {
                    return None;
                }
            }
            MinorObjective::Density => {
                let ok = partitions_rec(&adj, full, &mut Vec::new(), budget, &mut |parts| {
                    if parts.len() >= 2 && parts.iter().all(|&p| p & tmask != 0) {
                        push(parts, rational::ratio(quotient_edges(&adj, parts), parts.len()));
                    }
                });
                if !ok {
                    return None;
                }
            }
        }
        sort_options(&mut list);
        options.push(list);
    }
    Some(options)
}

fn minor_search(g: &ProductSubgraph, opts: &VcOptions, objective: MinorObjective) -> (Rational, Option<MinorPartition>, bool) {
    let limit = (!opts.within_caps(g.space())).then_some(opts.budget);
    let mut budget = Budget::new(limit);
    if let Some(options) = minor_options(g, objective, &mut budget) {
        let (best, choice) = Maximizer::run(g.vertices(), &options, &mut budget);
        if !budget.exhausted() {
            return (best, to_partition(g, &options, &choice), true);
        }
    }
    let (best, witness) = contraction_search(g, objective, opts.budget, opts.seed);
    (best, witness, false)
}

fn minor_score(mp: &MinorPartition, space: &ProductSpace, objective: MinorObjective) -> Rational {
    match objective {
        MinorObjective::Dimension => Rational::from_integer(mp.dimension() as i64),
        MinorObjective::Density => mp.density(space),
    }
}

/// Randomized search: start from singleton parts and contract random
/// factor edges between distinct parts, scoring every partition on the way
/// whose cells are all hit.
fn contraction_search(g: &ProductSubgraph, objective: MinorObjective, budget: u64, seed: u64) -> (Rational, Option<MinorPartition>) {
    let space = g.space();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = Rational::zero();
    let mut witness = None;
    let mut spent = 0u64;
    let m = space.dimension();
    while spent < budget {
        let mut uf: Vec<UnionFind> = space.factors().iter().map(|f| UnionFind::new(f.vertex_count())).collect();
        let mut open: Vec<Vec<(usize, usize)>> = space.factors().iter().map(Graph::edges).collect();
        for e in &mut open {
            e.shuffle(&mut rng);
        }
        loop {
            spent += 1;
            let mp = partition_from(space, &mut uf);
            if shatters_minor(g, &mp).unwrap_or(false) {
                let score = minor_score(&mp, space, objective);
                if score > best {
                    best = score;
                    witness = Some(mp);
                }
            }
            let live: Vec<usize> = (0..m).filter(|&i| !open[i].is_empty()).collect();
            if live.is_empty() || spent >= budget {
                break;
            }
            let i = live[rng.gen_range(0..live.len())];
            while let Some((a, b)) = open[i].pop() {
                if uf[i].union(a, b) {
                    break;
                }
            }
        }
    }
    (best, witness)
}

fn partition_from(space: &ProductSpace, uf: &mut [UnionFind]) -> MinorPartition {
    let parts = space
        .factors()
        .iter()
        .zip(uf.iter_mut())
        .map(|(f, u)| {
            let mut groups: Vec<Vec<usize>> = Vec::new();
            let mut root_group = vec![usize::MAX; f.vertex_count()];
            for v in 0..f.vertex_count() {
                let r = u.find(v);
                if root_group[r] == usize::MAX {
                    root_group[r] = groups.len();
                    groups.push(Vec::new());
                }
                groups[root_group[r]].push(v);
            }
            groups
        })
        .collect();
    MinorPartition { parts }
}

/// `vcd*(G)`: the most nontrivial factors of a shattered minor-subproduct.
pub fn vcd_minor(g: &ProductSubgraph, opts: &VcOptions) -> Result<Dimension<MinorPartition>> {
    g.require_induced()?;
    let (best, witness, exact) = minor_search(g, opts, MinorObjective::Dimension);
    let induced = vcd_induced(g)?;
    let mut value = rational::floor(&best) as usize;
    let mut witness = witness;
    if induced.value > value {
        // the contraction search missed a cube-subproduct; lift it
        value = induced.value;
        witness = induced.witness.as_ref().map(|s| cube_to_partition(g.space(), s));
    }
    Ok(Dimension { value, witness, exact })
}

/// The bipartition-per-factor minor that a shattered subproduct lifts to.
fn cube_to_partition(space: &ProductSpace, sub: &Subproduct) -> MinorPartition {
    let mut parts: Vec<Vec<Vec<usize>>> = MinorPartition::trivial(space).parts;
    for sf in sub.factors() {
        let f = space.factor(sf.index);
        let (a, b) = sf.edges[0];
        // split the factor along the edge a-b of a BFS tree grown from a
        let side = grow_side(f, a, b);
        let rest: Vec<usize> = (0..f.vertex_count()).filter(|v| !side.contains(v)).collect();
        parts[sf.index] = vec![side, rest];
    }
    MinorPartition::new(space, parts).expect("both sides are connected")
}

/// A connected set containing `a`, not `b`, whose complement is connected.
fn grow_side(f: &Graph, a: usize, b: usize) -> Vec<usize> {
    // the complement of b's side in a spanning tree rooted at a, cut at the edge a-b
    let n = f.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![a];
    parent[a] = a;
    parent[b] = a;
    order.push(b);
    let mut k = 0;
    while k < order.len() {
        let x = order[k];
        k += 1;
        for &y in f.neighbors(x) {
            if parent[y] == usize::MAX {
                parent[y] = x;
                order.push(y);
            }
        }
    }
    let mut in_b = vec![false; n];
    in_b[b] = true;
    for &x in &order[2..] {
        in_b[x] = in_b[parent[x]];
    }
    (0..n).filter(|&v| !in_b[v]).collect()
}

/// `vcdens*(G)`: the largest density of a shattered minor-subproduct.
pub fn vcdens_minor(g: &ProductSubgraph, opts: &VcOptions) -> Result<Density<MinorPartition>> {
    g.require_induced()?;
    let (value, witness, exact) = minor_search(g, opts, MinorObjective::Density);
    Ok(Density { value, witness, exact })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VcReport {
    pub vertices: usize,
    pub edges: usize,
    pub vcd: Dimension<Subproduct>,
    pub vcdens: Density<Subproduct>,
    pub vcd_star: Dimension<MinorPartition>,
    pub vcdens_star: Density<MinorPartition>,
}

impl VcReport {
    /// `vcd <= vcd*`, `vcdens <= vcdens*` and `2^vcd* <= |V|` where exact.
    pub fn check(&self) -> Result<()> {
        if self.vcd_star.exact && self.vcd.value > self.vcd_star.value {
            return Err(Error::Invariant(format!("vcd {} > vcd* {}", self.vcd.value, self.vcd_star.value)));
        }
        if self.vcdens.exact && self.vcdens_star.exact && self.vcdens.value > self.vcdens_star.value {
            return Err(Error::Invariant("vcdens > vcdens*".into()));
        }
        if self.vcd_star.value > 0 && (self.vcd_star.value >= 64 || 1usize << self.vcd_star.value > self.vertices) {
            return Err(Error::Invariant("vcd* exceeds log2 |V|".into()));
        }
        Ok(())
    }
}

pub fn vc_report(g: &ProductSubgraph, opts: &VcOptions) -> Result<VcReport> {
    let report = VcReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        vcd: vcd_induced(g)?,
        vcdens: vcdens_induced(g, opts)?,
        vcd_star: vcd_minor(g, opts)?,
        vcdens_star: vcdens_minor(g, opts)?,
    };
    report.check()?;
    Ok(report)
}

/// Maximum over factors and over all connected partitions of that factor
/// of `ceil(mad(M_i))`. Needs factors with at most 64 vertices.
pub fn minor_mad_bound(space: &ProductSpace) -> Result<usize> {
    let mut mu = 0;
    for f in space.factors() {
        for parts in connected_partitions(f)? {
            let mad = crate::density::mad(&quotient_graph(f, &parts))?;
            mu = mu.max(rational::ceil(&mad) as usize);
        }
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::hypercube;

    fn bits(s: &str) -> Vec<usize> {
        s.bytes().map(|b| (b - b'0') as usize).collect()
    }

    fn cube_graph(m: usize, words: &[&str]) -> ProductSubgraph {
        ProductSubgraph::induced(hypercube(m).unwrap(), words.iter().map(|w| bits(w)).collect()).unwrap()
    }

    #[test]
    fn connected_subset_counts() {
        // P4 has 10 connected subsets, K4 has 15, C4 has 13
        assert_eq!(connected_subsets(&Graph::path(4)).unwrap().len(), 10);
        assert_eq!(connected_subsets(&Graph::complete(4)).unwrap().len(), 15);
        assert_eq!(connected_subsets(&Graph::cycle(4).unwrap()).unwrap().len(), 13);
    }

    #[test]
    fn connected_partition_counts() {
        // paths: 2^(n-1); complete graphs: Bell numbers
        assert_eq!(connected_partitions(&Graph::path(5)).unwrap().len(), 16);
        assert_eq!(connected_partitions(&Graph::complete(5)).unwrap().len(), 52);
        assert_eq!(connected_partitions(&Graph::star(3)).unwrap().len(), 1 + 3 + 3 + 1);
    }

    #[test]
    fn path_in_q4() {
        let g = cube_graph(4, &["0000", "1000", "1100", "1110", "1111"]);
        let e1 = Subproduct::cube(g.space(), &[(0, 0, 1)]).unwrap();
        assert!(shatters_subproduct(&g, &e1, 1 << 20).unwrap());
        let e12 = Subproduct::cube(g.space(), &[(0, 0, 1), (1, 0, 1)]).unwrap();
        assert!(!shatters_subproduct(&g, &e12, 1 << 20).unwrap());
        let opts = VcOptions::default();
        assert_eq!(vcd_induced(&g).unwrap().value, 1);
        assert_eq!(vcd_minor(&g, &opts).unwrap().value, 1);
        assert_eq!(vcdens_minor(&g, &opts).unwrap().value, Rational::new(1, 2));
    }

    #[test]
    fn path_in_q3() {
        let g = cube_graph(3, &["000", "001", "011", "111", "110"]);
        let d = vcd_induced(&g).unwrap();
        assert_eq!(d.value, 2);
        assert!(shatters_subproduct(&g, &d.witness.unwrap(), 64).unwrap());
        let last_two = Subproduct::cube(g.space(), &[(1, 0, 1), (2, 0, 1)]).unwrap();
        assert!(shatters_subproduct(&g, &last_two, 64).unwrap());
        assert_eq!(vcd_minor(&g, &VcOptions::default()).unwrap().value, 2);
    }

    #[test]
    fn whole_products_shatter_everything() {
        let space = ProductSpace::new(vec![Graph::path(3), Graph::complete(3)]).unwrap();
        let g = ProductSubgraph::full(space.clone(), 100).unwrap();
        let sub = Subproduct::induced(&space, vec![(0, vec![0, 1, 2]), (1, vec![0, 2])]).unwrap();
        assert!(shatters_subproduct(&g, &sub, 100).unwrap());
        assert!(shatters_minor(&g, &MinorPartition::singletons(&space)).unwrap());
        let r = vc_report(&g, &VcOptions::default()).unwrap();
        assert_eq!((r.vcd.value, r.vcd_star.value), (2, 2));
        // P3 gives 2/3, K3 gives 1
        assert_eq!(r.vcdens.value, Rational::new(5, 3));
        assert_eq!(r.vcdens_star.value, Rational::new(5, 3));
    }

    #[test]
    fn hypercube_itself() {
        for d in 1..=4 {
            let g = ProductSubgraph::full(hypercube(d).unwrap(), 100).unwrap();
            let r = vc_report(&g, &VcOptions::default()).unwrap();
            assert_eq!(r.vcd.value, d);
            assert_eq!(r.vcdens_star.value, Rational::new(d as i64, 2));
        }
    }

    #[test]
    fn single_vertex() {
        let g = cube_graph(3, &["010"]);
        let r = vc_report(&g, &VcOptions::default()).unwrap();
        assert_eq!((r.vcd.value, r.vcd_star.value), (0, 0));
        assert!(r.vcdens.value.is_zero() && r.vcdens_star.value.is_zero());
        assert!(r.vcd.witness.is_none());
    }

    #[test]
    fn minor_beats_subproduct_on_nonadjacent_trace() {
        let space = ProductSpace::new(vec![Graph::path(3), Graph::path(3)]).unwrap();
        let g = ProductSubgraph::induced(space, vec![vec![0, 0], vec![2, 2]]).unwrap();
        let opts = VcOptions::default();
        assert_eq!(vcd_induced(&g).unwrap().value, 0);
        let star = vcd_minor(&g, &opts).unwrap();
        assert_eq!(star.value, 1);
        assert!(shatters_minor(&g, star.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn invalid_partitions_rejected() {
        let space = ProductSpace::new(vec![Graph::path(3)]).unwrap();
        assert!(MinorPartition::new(&space, vec![vec![vec![0, 2], vec![1]]]).is_err());
        assert!(MinorPartition::new(&space, vec![vec![vec![0, 1]]]).is_err());
        let mp = MinorPartition::new(&space, vec![vec![vec![2, 1], vec![0]]]).unwrap();
        assert_eq!(mp.parts(0), &[vec![0], vec![1, 2]]);
        assert_eq!(mp.minor(&space, 0), Graph::path(2));
    }

    #[test]
    fn non_induced_rejected() {
        let q2 = hypercube(2).unwrap();
        let g = ProductSubgraph::with_edges(q2, vec![vec![0, 0], vec![0, 1]], vec![]).unwrap();
        assert!(matches!(vcd_induced(&g), Err(Error::NotInduced)));
    }

    #[test]
    fn contraction_search_agrees_on_small_cases() {
        let space = ProductSpace::new(vec![Graph::path(3), Graph::path(3)]).unwrap();
        let g = ProductSubgraph::induced(space, vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![2, 1], vec![2, 2], vec![1, 2]]).unwrap();
        let exact = vcd_minor(&g, &VcOptions::default()).unwrap();
        let (heur, w) = contraction_search(&g, MinorObjective::Dimension, 2000, 7);
        assert!(rational::floor(&heur) as usize <= exact.value);
        assert!(w.is_none_or(|w| shatters_minor(&g, &w).unwrap()));
    }

    #[test]
    fn grow_side_splits_connected() {
        let f = Graph::cycle(6).unwrap();
        let side = grow_side(&f, 0, 1);
        let rest: Vec<usize> = (0..6).filter(|v| !side.contains(v)).collect();
        assert!(side.contains(&0) && rest.contains(&1));
        assert!(f.is_connected_subset(&side) && f.is_connected_subset(&rest));
    }
}
