//! Acceptance suite: ten criteria, one PASS/FAIL line each. Exits nonzero
//! if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use prodvc::density;
use prodvc::graph::{self, Graph};
use prodvc::harness::generate::{self, Family};
use prodvc::harness::report::{Record, Verdict};
use prodvc::harness::suites::{self, random_space, Suite, SuiteConfig};
use prodvc::harness::verify;
use prodvc::labeling;
use prodvc::product::{hypercube, ProductSpace, ProductSubgraph};
use prodvc::reduction;
use prodvc::vc::{self, MinorPartition, VcOptions};
use prodvc::Rational;

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:.2?}, limit {limit:?}"))
}

/// Every proved record holds; returns (records, inconclusive).
fn all_hold(records: &[Record], claims: &[&str]) -> Result<(usize, usize), String> {
    let mut inconclusive = 0;
    let mut counted = 0;
    for r in records.iter().filter(|r| claims.iter().any(|c| r.claim == *c)) {
        counted += 1;
        match r.verdict {
            Verdict::Holds => {}
            Verdict::Inconclusive => inconclusive += 1,
            Verdict::Violated if r.proved => return Err(format!("{} violated: {} vs {} ({})", r.claim, r.lhs, r.rhs, r.digest)),
            Verdict::Violated => {}
        }
    }
    Ok((counted, inconclusive))
}

fn words(m: usize, ws: &[&str]) -> ProductSubgraph {
    let vs = ws.iter().map(|w| w.bytes().map(|b| (b - b'0') as usize).collect()).collect();
    ProductSubgraph::induced(hypercube(m).unwrap(), vs).unwrap()
}

fn fig6() -> ProductSubgraph {
    let space = ProductSpace::new(vec![Graph::path(3), Graph::path(3)]).unwrap();
    ProductSubgraph::induced(space, vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![2, 1], vec![2, 2], vec![1, 2]]).unwrap()
}

fn criterion1() -> Outcome {
    let opts = VcOptions::default();
    let limit = Duration::from_secs(1);
    let cases = [
        ("P5 in Q4", words(4, &["0000", "1000", "1100", "1110", "1111"]), 1),
        ("P5 in Q3", words(3, &["000", "001", "011", "111", "110"]), 2),
    ];
    for (name, g, expected) in cases {
        let start = Instant::now();
        let d = vc::vcd_induced(&g).unwrap().value;
        let s = vc::vcd_minor(&g, &opts).unwrap();
        within(limit, start)?;
        ensure(d == expected && s.value == expected && s.exact, || format!("{name}: vcd {d}, vcd* {}", s.value))?;
    }
    let start = Instant::now();
    let g = fig6();
    let d = vc::vcd_induced(&g).unwrap().value;
    let s = vc::vcd_minor(&g, &opts).unwrap();
    let paper = MinorPartition::new(g.space(), vec![vec![vec![0, 1], vec![2]], vec![vec![0], vec![1, 2]]]).unwrap();
    let paper_shattered = vc::shatters_minor(&g, &paper).unwrap();
    let witness_shattered = vc::shatters_minor(&g, s.witness.as_ref().unwrap()).unwrap();
    within(limit, start)?;
    ensure(d == 1 && s.value == 2 && s.exact && paper_shattered && witness_shattered, || {
        format!("P3xP3 subgraph: vcd {d}, vcd* {}, partition shattered {paper_shattered}", s.value)
    })?;
    Ok("vcd = vcd* = 1 (Q4 path), 2 (Q3 path); vcd = 1, vcd* = 2 with {{1,2},{3}}x{{1},{2,3}}".into())
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let products: Vec<String> = (0..200u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(2000 + t);
            let family = Family::ALL[r.gen_range(0..Family::ALL.len())];
            let space = random_space(family, r.gen_range(1..=3), 6, 216, &mut r).unwrap();
            if space.vertex_count() > 216 {
                return Ok(String::new());
            }
            let recs = verify::check_lemma2(&space, 216);
            all_hold(&recs, &["Lem2", "Lem2.witness"]).map(|(n, i)| if n == 2 && i == 0 { "ok".into() } else { String::new() })
        })
        .collect::<Result<_, String>>()?;
    let checked = products.iter().filter(|s| !s.is_empty()).count();
    ensure(checked >= 150, || format!("only {checked} products within 216 vertices"))?;
    let mismatches: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|t| {
            let mut r = rng(3000 + t);
            let n = r.gen_range(1..=20);
            let g = common::random_graph(n, r.gen_range(0.05..0.9), &mut r);
            let fast = density::density(&g).unwrap();
            let slow = common::brute_density(&g);
            (fast != slow).then(|| format!("seed {t}: {fast} vs {slow}"))
        })
        .collect();
    ensure(mismatches.is_empty(), || mismatches.join("; "))?;
    within(Duration::from_secs(300), start)?;
    Ok(format!("{checked} products exact; 1000 densest-subgraph oracle matches"))
}

fn criterion3() -> Outcome {
    let start = Instant::now();
    let opts = VcOptions::default();
    let rows: Vec<(usize, usize)> = (0..500u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(4000 + t);
            let g = suites::random_cube_subgraph(r.gen_range(1..=10), 64, &mut r).unwrap();
            assert!(g.vertex_count() <= 64);
            let vcd = vc::vcd_induced(&g).unwrap().value;
            let oracle = common::set_system_vc(&g);
            if vcd != oracle {
                return Err(format!("vcd {vcd} but set-system VC {oracle}"));
            }
            let recs = verify::check_theorem1(&g, &opts);
            all_hold(&recs, &["Thm1"])
        })
        .collect::<Result<_, String>>()?;
    within(Duration::from_secs(600), start)?;
    Ok(format!("{} hypercube subgraphs, 0 violations, vcd matches the set-system oracle", rows.len()))
}

fn criterion4() -> Outcome {
    let counts: Vec<(usize, usize)> = (0..1000u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(5000 + t);
            let family = Family::ALL[r.gen_range(0..Family::ALL.len())];
            let space = random_space(family, r.gen_range(1..=4), 6, u128::MAX, &mut r).unwrap();
            let g = generate::subgraph_of(&space, r.gen_range(0.05..0.95), usize::MAX, r.gen_bool(0.7), &mut r).unwrap();
            let recs = verify::check_theorem4(&g);
            let split = recs.iter().filter(|r| r.claim.starts_with("Thm4.split")).count();
            if g.vertex_count() >= 2 && split != 2 {
                return Err("splitting step not run".into());
            }
            all_hold(&recs, &["Thm4", "Thm4.beta", "Thm4.split.size", "Thm4.split.cut", "Lem1"])
        })
        .collect::<Result<_, String>>()?;
    let total: usize = counts.iter().map(|c| c.0).sum();
    Ok(format!("1000 instances, {total} records, 0 violations (splitting step included)"))
}

fn criterion5() -> Outcome {
    let opts = VcOptions::default();
    let counts: Vec<(usize, usize)> = (0..500u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(6000 + t);
            let family = [Family::Path, Family::Tree, Family::Chordal][t as usize % 3];
            let m = r.gen_range(1..=3);
            let hi = if m == 3 { 5 } else { 8 };
            let space = random_space(family, m, hi, u128::MAX, &mut r).unwrap();
            let g = generate::subgraph_of(&space, r.gen_range(0.1..0.9), usize::MAX, true, &mut r).unwrap();
            let mu = verify::resolve_mu(Some(family), g.space(), None).unwrap();
            let expected_mu = match family {
                Family::Chordal => space.factors().iter().map(|f| prodvc::rational::ceil(&density::mad(f).unwrap()) as i64).max().unwrap(),
                _ => 2,
            };
            if mu.value != Rational::from_integer(expected_mu) {
                return Err(format!("mu {} for {family:?}", mu.value));
            }
            let recs = verify::check_theorem5(&g, &mu, &opts);
            let (n, inconclusive) = all_hold(&recs, &["Thm5", "Lem8", "Thm5.induction", "Thm5.induction.vcd*", "Thm5.star"])?;
            if inconclusive > 0 || n < 5 {
                return Err(format!("inexact or missing records on seed {t}"));
            }
            Ok((n, inconclusive))
        })
        .collect::<Result<_, String>>()?;
    Ok(format!("{} instances with exact vcd*, 0 violations", counts.len()))
}

fn criterion6() -> Outcome {
    let opts = VcOptions::default();
    // counting relations on every step of the full induction over a corpus
    let corpus_steps: usize = (0..300u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(7000 + t);
            let family = [Family::Path, Family::Tree, Family::Chordal, Family::Cycle, Family::Clique, Family::Planar][t as usize % 6];
            let space = random_space(family, r.gen_range(1..=3), 5, 400, &mut r).unwrap();
            let g = generate::subgraph_of(&space, r.gen_range(0.2..0.9), usize::MAX, true, &mut r).unwrap();
            reduction::induction_edge_bound(&g).map(|b| b.steps).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, String>>()?
        .into_iter()
        .sum();
    let octa: Vec<(usize, usize)> = (0..300u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(7500 + t);
            let space = random_space(Family::Octahedron, r.gen_range(1..=2), 3, u128::MAX, &mut r).unwrap();
            let g = generate::subgraph_of(&space, r.gen_range(0.2..0.9), usize::MAX, true, &mut r).unwrap();
            let i = r.gen_range(0..space.dimension());
            let e = r.gen_range(0..space.factor(i).vertex_count());
            all_hold(&verify::check_octahedron_reduction(&g, i, e), &["Lem16", "Lem16.vertices", "Lem16.edges"])
        })
        .collect::<Result<_, String>>()?;
    let mono: Vec<(usize, usize)> = (0..500u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(8000 + t);
            let space = ProductSpace::new(vec![Graph::path(3), Graph::path(3)]).unwrap();
            let space = if t % 2 == 0 { space } else { random_space(Family::Mixed, 2, 4, 16, &mut r).unwrap() };
            let g = generate::subgraph_of(&space, r.gen_range(0.3..1.0), usize::MAX, true, &mut r).unwrap();
            let i = r.gen_range(0..space.dimension());
            let f = space.factor(i);
            if f.edge_count() == 0 {
                return Ok((0, 0));
            }
            let (u, v) = f.edges()[r.gen_range(0..f.edge_count())];
            let recs = verify::check_reduction(&g, i, u, v, &opts);
            let claims = ["Lem10", "Lem10.vertices", "Lem10.edges", "Lem6.vcd", "Lem6.vcdens", "Lem7.vcd", "Lem7.vcdens", "Lem9"];
            let (n, inconclusive) = all_hold(&recs, &claims)?;
            if inconclusive > 0 {
                return Err("inexact monotonicity check".into());
            }
            Ok((n, inconclusive))
        })
        .collect::<Result<_, String>>()?;
    let steps = mono.iter().filter(|c| c.0 > 0).count();
    Ok(format!("{corpus_steps} induction steps and {} octahedron steps with exact counts; {steps} monotonicity steps hold", octa.len()))
}

fn criterion7() -> Outcome {
    let groups: [(&str, &[Family]); 3] = [
        ("Prop13", &[Family::Path, Family::Tree, Family::Chordal, Family::Clique]),
        ("Cor14", &[Family::Chordal, Family::Tree, Family::Clique]),
        ("Prop15", &[Family::Octahedron]),
    ];
    let mut dd_checked = 0;
    for (k, (claim, families)) in groups.iter().enumerate() {
        let results: Vec<(usize, usize)> = (0..300u64)
            .into_par_iter()
            .map(|t| {
                let mut r = rng(9000 + 1000 * k as u64 + t);
                let family = families[t as usize % families.len()];
                let hi = if family == Family::Octahedron { 3 } else { 5 };
                let space = random_space(family, r.gen_range(1..=3), hi, 400, &mut r).unwrap();
                let g = generate::subgraph_of(&space, r.gen_range(0.2..0.9), usize::MAX, true, &mut r).unwrap();
                let recs = verify::check_classes(&g, 216);
                let (n, _) = all_hold(&recs, &[claim, "DD", "DD.sub"])?;
                if !recs.iter().any(|r| r.claim == *claim) {
                    return Err(format!("{claim} not applicable on seed {t}"));
                }
                let dd = recs.iter().filter(|r| r.claim == "DD").count();
                Ok((n, dd))
            })
            .collect::<Result<_, String>>()?;
        dd_checked += results.iter().map(|x| x.1).sum::<usize>();
    }
    ensure(dd_checked > 0, || "no product small enough for DD".into())?;
    Ok(format!("3 x 300 instances, 0 violations; DD = sum dd on {dd_checked} materialized products"))
}

fn criterion8() -> Outcome {
    let start = Instant::now();
    let checks: Vec<usize> = (0..100u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(10_000 + t);
            let g: Graph = if t % 2 == 0 {
                let family = [Family::Path, Family::Tree, Family::Chordal, Family::Planar, Family::Clique][(t as usize / 2) % 5];
                let factors = (0..3).map(|_| generate::factor(family, r.gen_range(6..=8), &mut r).unwrap()).collect();
                let space = ProductSpace::new(factors).unwrap();
                generate::subgraph_of(&space, 1.0, 200, true, &mut r).unwrap().graph()
            } else {
                common::random_graph(200, r.gen_range(0.005..0.1), &mut r)
            };
            let n = g.vertex_count();
            let k = graph::degeneracy(&g).max(1);
            let fd = density::forest_decomposition(&g, k).map_err(|e| e.to_string())?;
            let scheme = labeling::encode(&g, &fd).map_err(|e| e.to_string())?;
            let bits = (k + 1) * labeling::field_width(n);
            if scheme.labels.iter().any(|l| l.len() != bits) {
                return Err(format!("label length differs from {bits}"));
            }
            let mad_floor = prodvc::rational::floor(&density::mad(&g).unwrap()) as usize;
            if graph::degeneracy(&g) > mad_floor || (g.edge_count() > 0 && k > graph::degeneracy(&g)) {
                return Err("k > degeneracy or degeneracy > floor(mad)".into());
            }
            for x in 0..n {
                for y in 0..n {
                    if scheme.adjacent(x, y).map_err(|e| e.to_string())? != g.has_edge(x, y) {
                        return Err(format!("decode disagrees on ({x}, {y})"));
                    }
                }
            }
            Ok(n * n)
        })
        .collect::<Result<_, String>>()?;
    within(Duration::from_secs(120), start)?;
    let total: usize = checks.iter().sum();
    Ok(format!("100 graphs, {total} ordered pairs decoded correctly"))
}

fn criterion9() -> Outcome {
    let corpus: Vec<Graph> = (0..600u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(11_000 + t);
            if t % 3 == 0 {
                common::random_graph(r.gen_range(1..=40), r.gen_range(0.02..0.9), &mut r)
            } else {
                let family = Family::ALL[r.gen_range(0..Family::ALL.len())];
                let space = random_space(family, r.gen_range(1..=3), 6, 300, &mut r).unwrap();
                generate::subgraph_of(&space, r.gen_range(0.1..1.0), usize::MAX, r.gen_bool(0.5), &mut r).unwrap().graph()
            }
        })
        .collect();
    corpus.par_iter().enumerate().try_for_each(|(t, g)| -> Result<(), String> {
        let d = prodvc::rational::ceil(&density::density(g).unwrap()) as usize;
        let o = density::bounded_outdegree_orientation(g, d).map_err(|e| format!("graph {t}: {e}"))?;
        let out = o.outdegrees(g.vertex_count());
        let covers = o.arcs.len() == g.edge_count() && o.arcs.iter().all(|&(a, b)| g.has_edge(a, b));
        ensure(covers && out.iter().all(|&x| x <= d), || format!("graph {t}: bad orientation"))?;
        if d > 0 {
            ensure(density::bounded_outdegree_orientation(g, d - 1).is_err(), || format!("graph {t}: d - 1 accepted"))?;
        }
        Ok(())
    })?;
    Ok(format!("{} graphs oriented with outdegree <= ceil(dens)", corpus.len()))
}

fn criterion10() -> Outcome {
    let cfg = SuiteConfig::new(Suite::Conj3, 10_000, 0);
    let report = suites::run_suite(&cfg).map_err(|e| e.to_string())?;
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    let schema: serde_json::Value = serde_json::from_str(prodvc::harness::REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    let errors: Vec<String> = validator.iter_errors(&json).map(|e| e.to_string()).take(3).collect();
    ensure(errors.is_empty(), || errors.join("; "))?;
    let s = &report.summary;
    ensure(s.records == 20_000 && s.inconclusive == 0, || format!("{} records, {} inexact", s.records, s.inconclusive))?;
    let archived: std::collections::HashSet<&str> = report.archive.iter().map(|a| a.digest.as_str()).collect();
    let missing = report.records.iter().filter(|r| r.verdict == Verdict::Violated && !archived.contains(r.digest.as_str())).count();
    ensure(missing == 0, || format!("{missing} violations without reproducers"))?;
    let replayed =
        report.archive.iter().all(|a| a.instance.to_subgraph().map(|g| prodvc::harness::digest(&g) == a.digest).unwrap_or(false));
    ensure(replayed, || "archived instance does not reproduce its digest".into())?;
    let count = |c: &str| s.claims.get(c).map_or(0, |c| c.violated);
    Ok(format!(
        "10000 exact trials; {} violations of the literal form, {} with average-degree normalization; {} reproducers archived; report valid",
        count("Conj3"),
        count("Conj3.mad"),
        archived.len()
    ))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("1 figure fixtures", criterion1),
        ("2 product density and densest-subgraph oracle", criterion2),
        ("3 hypercube density bound", criterion3),
        ("4 projection-degree density bound and splitting step", criterion4),
        ("5 minor VC-dimension density bound", criterion5),
        ("6 reduction counting and monotonicity", criterion6),
        ("7 dismantlable, chordal and octahedral products", criterion7),
        ("8 adjacency labeling", criterion8),
        ("9 bounded-outdegree orientation", criterion9),
        ("10 VC-density conjecture fuzzing", criterion10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{took:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why} [{took:.2?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
