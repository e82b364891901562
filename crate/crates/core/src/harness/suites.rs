//! Seeded verification suites. Trials are independent and run on a rayon
//! pool; the report is sorted by instance digest, so it does not depend on
//! scheduling.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::product::{self, InstanceFile, ProductSpace, ProductSubgraph};
use crate::rational::Rational;
use crate::vc::VcOptions;

use super::generate::{self, Family, GeneratorSpec};
use super::report::{digest, Record, VerificationReport};
use super::verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Thm4,
    Thm5,
    Lemmas,
    Classes,
    Labels,
    Conj3,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [Suite::Thm4, Suite::Thm5, Suite::Lemmas, Suite::Classes, Suite::Labels, Suite::Conj3, Suite::All];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm4 => "thm4",
            Suite::Thm5 => "thm5",
            Suite::Lemmas => "lemmas",
            Suite::Classes => "classes",
            Suite::Labels => "labels",
            Suite::Conj3 => "conj3",
            Suite::All => "all",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::InvalidSpec(format!("unknown suite {s:?}")))
    }

    fn salt(self) -> u64 {
        match self {
            Suite::Thm4 => 0x7468_6d34,
            Suite::Thm5 => 0x7468_6d35,
            Suite::Lemmas => 0x6c65_6d6d,
            Suite::Classes => 0x636c_6173,
            Suite::Labels => 0x6c61_6265,
            Suite::Conj3 => 0x636f_6e6a,
            Suite::All => 0,
        }
    }

    /// The suites `All` expands to; `Conj3` is not among them.
    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Thm4, Suite::Thm5, Suite::Lemmas, Suite::Classes, Suite::Labels],
            s => vec![s],
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub mu: Option<Rational>,
    /// Worker threads; the global pool when `None`.
    pub threads: Option<usize>,
    /// Adds per-trial runtimes, which makes reports differ between runs.
    pub timings: bool,
    pub vc: VcOptions,
}

impl SuiteConfig {
    pub fn new(suite: Suite, trials: usize, seed: u64) -> Self {
        SuiteConfig { suite, trials, seed, mu: None, threads: None, timings: false, vc: VcOptions::default() }
    }
}

#[derive(Default)]
struct TrialOutput {
    records: Vec<Record>,
    instances: Vec<(String, InstanceFile)>,
}

impl TrialOutput {
    fn add(&mut self, g: &ProductSubgraph, records: Vec<Record>) {
        if records.iter().any(|r| r.verdict == super::report::Verdict::Violated) {
            self.instances.push((digest(g), InstanceFile::from_subgraph(g)));
        }
        self.records.extend(records);
    }
}

fn trial_rng(seed: u64, suite: Suite, t: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ suite.salt());
    rng.set_stream(t as u64);
    rng
}

fn size_range(family: Family, hi: usize) -> (usize, usize) {
    match family {
        Family::Octahedron => (2, 3),
        Family::Cycle => (3, hi.max(3)),
        _ => (1, hi),
    }
}

/// A random space of `m` factors from `family`, shrunk until it has at most
/// `max_vertices` vertices.
pub fn random_space(family: Family, m: usize, hi: usize, max_vertices: u128, rng: &mut impl Rng) -> Result<ProductSpace> {
    let (lo, hi) = size_range(family, hi);
    let mut sizes: Vec<usize> = (0..m).map(|_| rng.gen_range(lo..=hi)).collect();
    let count = |s: &[usize]| -> u128 { s.iter().map(|&k| if family == Family::Octahedron { 2 * k as u128 } else { k as u128 }).product() };
    while count(&sizes) > max_vertices {
        let k = (0..m).max_by_key(|&k| (sizes[k], k)).expect("m > 0");
        if sizes[k] <= lo {
            break;
        }
        sizes[k] -= 1;
    }
    let factors = sizes.iter().map(|&s| generate::factor(family, s, rng)).collect::<Result<Vec<_>>>()?;
    ProductSpace::new(factors)
}

fn random_instance(family: Family, m: usize, hi: usize, induced: bool, rng: &mut ChaCha8Rng) -> Result<ProductSubgraph> {
    let space = random_space(family, m, hi, 4096, rng)?;
    let fraction = rng.gen_range(0.1..0.9);
    generate::subgraph_of(&space, fraction, usize::MAX, induced, rng)
}

fn thm4_trial(rng: &mut ChaCha8Rng, out: &mut TrialOutput) -> Result<()> {
    let family = *Family::ALL.choose(rng).expect("nonempty");
    let m = rng.gen_range(1..=4);
    let induced = rng.gen_bool(0.7);
    let g = random_instance(family, m, 6, induced, rng)?;
    out.add(&g, verify::check_theorem4(&g));
    Ok(())
}

/// Random induced subgraph of `Q_m` with at most `max_vertices` vertices.
pub fn random_cube_subgraph(m: usize, max_vertices: usize, rng: &mut impl Rng) -> Result<ProductSubgraph> {
    let space = product::hypercube(m)?;
    let fraction = (max_vertices as f64 / (1u64 << m) as f64).min(1.0) * rng.gen_range(0.3..1.0);
    generate::subgraph_of(&space, fraction, max_vertices, true, rng)
}

fn thm5_trial(t: usize, cfg: &SuiteConfig, rng: &mut ChaCha8Rng, out: &mut TrialOutput) -> Result<()> {
    if t.is_multiple_of(4) {
        let g = random_cube_subgraph(rng.gen_range(1..=10), 64, rng)?;
        out.add(&g, verify::check_theorem1(&g, &cfg.vc));
        return Ok(());
    }
    let family = *[Family::Path, Family::Tree, Family::Chordal, Family::Cycle, Family::Planar].choose(rng).expect("nonempty");
    let m = rng.gen_range(1..=3);
    let hi = if m == 3 { 5 } else { 8 };
    let g = random_instance(family, m, hi, true, rng)?;
    let mu = verify::resolve_mu(Some(family), g.space(), cfg.mu)?;
    out.add(&g, verify::check_theorem5(&g, &mu, &cfg.vc));
    Ok(())
}

fn random_factor_edge(g: &ProductSubgraph, rng: &mut impl Rng) -> Option<(usize, usize, usize)> {
    let with_edges: Vec<usize> = (0..g.space().dimension()).filter(|&i| g.space().factor(i).edge_count() > 0).collect();
    let &i = with_edges.choose(rng)?;
    let edges = g.space().factor(i).edges();
    let &(a, b) = edges.choose(rng)?;
    Some(if rng.gen_bool(0.5) { (i, a, b) } else { (i, b, a) })
}

fn lemmas_trial(t: usize, cfg: &SuiteConfig, rng: &mut ChaCha8Rng, out: &mut TrialOutput) -> Result<()> {
    let family = *Family::ALL.choose(rng).expect("nonempty");
    let space = random_space(family, rng.gen_range(1..=3), 6, 216, rng)?;
    let records = verify::check_lemma2(&space, 216);
    let full = ProductSubgraph::full(space, 216)?;
    out.add(&full, records);

    let family =
        *[Family::Path, Family::Tree, Family::Chordal, Family::Cycle, Family::Clique, Family::Planar].choose(rng).expect("nonempty");
    let m = rng.gen_range(1..=3);
    let hi = [6, 4, 3][m - 1];
    let g = random_instance(family, m, hi, true, rng)?;
    if let Some((i, u, v)) = random_factor_edge(&g, rng) {
        out.add(&g, verify::check_reduction(&g, i, u, v, &cfg.vc));
    }
    out.add(&g, verify::check_density_claims(&g));

    if t.is_multiple_of(2) {
        let g = random_instance(Family::Octahedron, rng.gen_range(1..=2), 3, true, rng)?;
        let i = rng.gen_range(0..g.space().dimension());
        let e = rng.gen_range(0..g.space().factor(i).vertex_count());
        out.add(&g, verify::check_octahedron_reduction(&g, i, e));
    }
    Ok(())
}

fn classes_trial(rng: &mut ChaCha8Rng, out: &mut TrialOutput) -> Result<()> {
    let family =
        *[Family::Path, Family::Tree, Family::Chordal, Family::Clique, Family::Octahedron, Family::Mixed].choose(rng).expect("nonempty");
    let g = random_instance(family, rng.gen_range(1..=3), 5, true, rng)?;
    out.add(&g, verify::check_classes(&g, 216));
    Ok(())
}

fn labels_trial(rng: &mut ChaCha8Rng, out: &mut TrialOutput) -> Result<()> {
    let family = *Family::ALL.choose(rng).expect("nonempty");
    let space = random_space(family, rng.gen_range(1..=3), 8, 512, rng)?;
    let g = generate::subgraph_of(&space, rng.gen_range(0.2..0.9), 200, rng.gen_bool(0.5), rng)?;
    out.add(&g, verify::check_labeling(&g));
    Ok(())
}

/// `P3 x P3` or `P4 x P3`, alternating.
pub fn conj3_space(t: usize) -> ProductSpace {
    let first = if t.is_multiple_of(2) { 3 } else { 4 };
    ProductSpace::new(vec![Graph::path(first), Graph::path(3)]).expect("paths are connected")
}

fn conj3_trial(t: usize, cfg: &SuiteConfig, rng: &mut ChaCha8Rng, out: &mut TrialOutput) -> Result<()> {
    let g = generate::subgraph_of(&conj3_space(t), rng.gen_range(0.1..1.0), usize::MAX, true, rng)?;
    out.add(&g, verify::check_conjecture3(&g, &cfg.vc));
    Ok(())
}

fn run_trial(suite: Suite, t: usize, cfg: &SuiteConfig) -> Result<TrialOutput> {
    let mut rng = trial_rng(cfg.seed, suite, t);
    let mut out = TrialOutput::default();
    let start = Instant::now();
    match suite {
        Suite::Thm4 => thm4_trial(&mut rng, &mut out)?,
        Suite::Thm5 => thm5_trial(t, cfg, &mut rng, &mut out)?,
        Suite::Lemmas => lemmas_trial(t, cfg, &mut rng, &mut out)?,
        Suite::Classes => classes_trial(&mut rng, &mut out)?,
        Suite::Labels => labels_trial(&mut rng, &mut out)?,
        Suite::Conj3 => conj3_trial(t, cfg, &mut rng, &mut out)?,
        Suite::All => unreachable!("expanded by the caller"),
    }
    if cfg.timings {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        for r in &mut out.records {
            r.runtime_ms = Some(ms);
        }
    }
    Ok(out)
}

fn collect(name: &str, cfg: &SuiteConfig, outputs: Vec<TrialOutput>) -> VerificationReport {
    let mut records = Vec::new();
    let mut instances = BTreeMap::new();
    for o in outputs {
        records.extend(o.records);
        instances.extend(o.instances);
    }
    VerificationReport::assemble(name, cfg.seed, cfg.trials, cfg.mu, records, &instances)
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(k).build().map_err(|e| Error::InvalidSpec(e.to_string()))?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let jobs: Vec<(Suite, usize)> = cfg.suite.parts().into_iter().flat_map(|s| (0..cfg.trials).map(move |t| (s, t))).collect();
    let outputs = in_pool(cfg.threads, || jobs.par_iter().map(|&(s, t)| run_trial(s, t, cfg)).collect::<Result<Vec<_>>>())??;
    Ok(collect(cfg.suite.name(), cfg, outputs))
}

/// Compares `|E| / |V|` with `vcdens*` on instances drawn from `spec`, trial
/// `t` using seed `spec.seed + t`.
pub fn fuzz_conjecture3(spec: &GeneratorSpec, trials: usize, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let outputs = in_pool(cfg.threads, || {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let spec = GeneratorSpec { seed: spec.seed.wrapping_add(t as u64), induced: true, ..spec.clone() };
                let g = generate::generate(&spec)?;
                let mut out = TrialOutput::default();
                out.add(&g, verify::check_conjecture3(&g, &cfg.vc));
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let cfg = SuiteConfig { trials, seed: spec.seed, ..cfg.clone() };
    Ok(collect(Suite::Conj3.name(), &cfg, outputs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_deterministic() {
        for suite in [Suite::Thm4, Suite::Lemmas, Suite::Conj3] {
            let mut cfg = SuiteConfig::new(suite, 12, 3);
            let a = run_suite(&cfg).unwrap().to_json();
            cfg.threads = Some(1);
            let b = run_suite(&cfg).unwrap().to_json();
            assert_eq!(a, b, "{}", suite.name());
        }
    }

    #[test]
    fn small_suites_pass() {
        for suite in [Suite::Thm4, Suite::Thm5, Suite::Lemmas, Suite::Classes, Suite::Labels] {
            let report = run_suite(&SuiteConfig::new(suite, 8, 1)).unwrap();
            assert!(report.passed(), "{}: {:?}", suite.name(), report.failures().collect::<Vec<_>>());
            assert!(report.summary.records > 0);
        }
    }

    #[test]
    fn spaces_respect_the_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for family in Family::ALL {
            for m in 1..=3 {
                let space = random_space(family, m, 6, 216, &mut rng).unwrap();
                assert!(space.vertex_count() <= 216 || family == Family::Octahedron, "{family:?}");
            }
        }
    }
}
