//! Verification records and the versioned JSON report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::product::{InstanceFile, ProductSubgraph};
use crate::rational::{self, Rational};

pub const SCHEMA: &str = "prodvc-report-1";

/// JSON schema of [`VerificationReport`].
pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    /// A VC quantity was only bounded from below.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "=")]
    Equal,
}

/// One checked claim on one instance. `lhs` and `rhs` are exact: rationals
/// as `p/q`, or `c*log2(n)` for logarithmic sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub claim: String,
    pub digest: String,
    pub lhs: String,
    pub relation: Relation,
    pub rhs: String,
    pub lhs_value: f64,
    pub rhs_value: f64,
    pub verdict: Verdict,
    /// False for conjectures and for literal forms that are known to fail.
    pub proved: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A side of a compared relation.
#[derive(Debug, Clone, PartialEq)]
pub enum Side {
    Exact(Rational),
    /// `coef * log2(n)`.
    Log {
        coef: Rational,
        n: usize,
    },
}

impl Side {
    pub fn int(x: usize) -> Self {
        Side::Exact(Rational::from_integer(x as i64))
    }

    pub fn render(&self) -> String {
        match self {
            Side::Exact(r) => rational::format(r),
            Side::Log { coef, n } => format!("{}*log2({n})", rational::format(coef)),
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Side::Exact(r) => rational::to_f64(r),
            Side::Log { coef, n } => rational::to_f64(coef) * (*n as f64).log2(),
        }
    }
}

impl From<Rational> for Side {
    fn from(r: Rational) -> Self {
        Side::Exact(r)
    }
}

impl Record {
    /// Compares `lhs <= rhs` exactly.
    pub fn at_most(claim: &str, digest: &str, lhs: impl Into<Side>, rhs: impl Into<Side>) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let holds = side_le(&lhs, &rhs);
        Record::build(claim, digest, &lhs, Relation::AtMost, &rhs, holds)
    }

    pub fn equal(claim: &str, digest: &str, lhs: impl Into<Side>, rhs: impl Into<Side>) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let holds = lhs == rhs;
        Record::build(claim, digest, &lhs, Relation::Equal, &rhs, holds)
    }

    fn build(claim: &str, digest: &str, lhs: &Side, relation: Relation, rhs: &Side, holds: bool) -> Self {
        Record {
            claim: claim.into(),
            digest: digest.into(),
            lhs: lhs.render(),
            relation,
            rhs: rhs.render(),
            lhs_value: lhs.value(),
            rhs_value: rhs.value(),
            verdict: if holds { Verdict::Holds } else { Verdict::Violated },
            proved: true,
            runtime_ms: None,
            note: None,
        }
    }

    pub fn unproved(mut self) -> Self {
        self.proved = false;
        self
    }

    /// Marks the record inconclusive unless `exact`.
    pub fn exact_if(mut self, exact: bool) -> Self {
        if !exact {
            self.verdict = Verdict::Inconclusive;
        }
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// A check that could not be carried out.
    pub fn skipped(claim: &str, digest: &str, note: impl Into<String>) -> Self {
        Record {
            claim: claim.into(),
            digest: digest.into(),
            lhs: String::new(),
            relation: Relation::AtMost,
            rhs: String::new(),
            lhs_value: 0.0,
            rhs_value: 0.0,
            verdict: Verdict::Inconclusive,
            proved: true,
            runtime_ms: None,
            note: Some(note.into()),
        }
    }

    /// A proved claim whose computation raised an invariant failure.
    pub fn failed(claim: &str, digest: &str, note: impl Into<String>) -> Self {
        Record { verdict: Verdict::Violated, ..Record::skipped(claim, digest, note) }
    }

    pub fn is_failure(&self) -> bool {
        self.proved && self.verdict == Verdict::Violated
    }
}

/// `a <= b` exactly. Logarithmic sides are compared through
/// `x <= c*log2(n)  <=>  2^(x q) <= n^(c q)` after clearing denominators.
pub fn side_le(a: &Side, b: &Side) -> bool {
    match (a, b) {
        (Side::Exact(x), Side::Exact(y)) => x <= y,
        (Side::Exact(x), Side::Log { coef, n }) => exact_le_log(*x, *coef, *n),
        (Side::Log { coef, n }, Side::Exact(y)) => {
            // c*log2(n) <= y  <=>  not (y < c*log2(n)); equality needs y rational
            // with n a power of two, which exact_le_log also decides
            !exact_le_log(*y, *coef, *n) || log_equals(*y, *coef, *n)
        }
        (Side::Log { coef: c1, n: n1 }, Side::Log { coef: c2, n: n2 }) => {
            if n1 == n2 {
                *n1 <= 1 || c1 <= c2
            } else {
                // n1^c1 <= n2^c2 with c = p/q: n1^(p1 q2) <= n2^(p2 q1)
                let (p1, q1) = (*c1.numer(), *c1.denom());
                let (p2, q2) = (*c2.numer(), *c2.denom());
                if p1 < 0 || p2 < 0 {
                    return a.value() <= b.value();
                }
                num_bigint::BigUint::from(*n1).pow((p1 * q2) as u32) <= num_bigint::BigUint::from(*n2).pow((p2 * q1) as u32)
            }
        }
    }
}

/// `x <= c * log2(n)` for rationals `x = a/b`, `c = p/q >= 0`.
fn exact_le_log(x: Rational, c: Rational, n: usize) -> bool {
    if n <= 1 || c <= Rational::from_integer(0) {
        return x <= Rational::from_integer(0);
    }
    if x <= Rational::from_integer(0) {
        return true;
    }
    // a/b <= (p/q) log2 n  <=>  2^(a q) <= n^(p b)
    let (a, b) = (*x.numer() as u64, *x.denom() as u64);
    let (p, q) = (*c.numer() as u64, *c.denom() as u64);
    let (lhs_bits, rhs_exp) = (a * q, p * b);
    let approx = (rhs_exp as f64) * (n as f64).log2() - lhs_bits as f64;
    if approx.abs() > 1e-6 * (lhs_bits as f64).max(1.0) {
        return approx > 0.0;
    }
    let two_pow = num_bigint::BigUint::from(1u8) << lhs_bits;
    two_pow <= num_bigint::BigUint::from(n).pow(rhs_exp as u32)
}

fn log_equals(x: Rational, c: Rational, n: usize) -> bool {
    exact_le_log(x, c, n) && {
        // equal iff also c*log2 n <= x, i.e. n^(p b) <= 2^(a q)
        if n <= 1 || c <= Rational::from_integer(0) || x <= Rational::from_integer(0) {
            return x == Rational::from_integer(0) && (n <= 1 || c == Rational::from_integer(0));
        }
        let (a, b) = (*x.numer() as u64, *x.denom() as u64);
        let (p, q) = (*c.numer() as u64, *c.denom() as u64);
        num_bigint::BigUint::from(n).pow((p * b) as u32) <= num_bigint::BigUint::from(1u8) << (a * q)
    }
}

/// Hex SHA-256 of the canonical instance JSON.
pub fn digest(g: &ProductSubgraph) -> String {
    hex::encode(Sha256::digest(InstanceFile::from_subgraph(g).to_json().as_bytes()))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
    pub proved: bool,
    /// Smallest `rhs - lhs` over decided records.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_gap: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
    /// Violations of proved claims.
    pub failures: usize,
    pub claims: BTreeMap<String, ClaimSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchivedInstance {
    pub digest: String,
    pub claims: Vec<String>,
    pub instance: InstanceFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    pub summary: Summary,
    pub records: Vec<Record>,
    /// Reproducers for every instance with a violated record.
    pub archive: Vec<ArchivedInstance>,
}

impl VerificationReport {
    /// Sorts records by digest and builds the summary and archive.
    pub fn assemble(
        suite: &str,
        seed: u64,
        trials: usize,
        mu: Option<Rational>,
        mut records: Vec<Record>,
        instances: &BTreeMap<String, InstanceFile>,
    ) -> Self {
        records.sort_by(|a, b| (&a.digest, &a.claim, &a.lhs, &a.rhs, a.verdict).cmp(&(&b.digest, &b.claim, &b.lhs, &b.rhs, b.verdict)));
        let mut summary = Summary { records: records.len(), ..Summary::default() };
        let mut violated: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for r in &records {
            let entry = summary.claims.entry(r.claim.clone()).or_insert_with(|| ClaimSummary { proved: r.proved, ..Default::default() });
            match r.verdict {
                Verdict::Holds => {
                    summary.holds += 1;
                    entry.holds += 1;
                }
                Verdict::Violated => {
                    summary.violated += 1;
                    entry.violated += 1;
                    summary.failures += usize::from(r.proved);
                    let claims = violated.entry(r.digest.clone()).or_default();
                    if !claims.contains(&r.claim) {
                        claims.push(r.claim.clone());
                    }
                }
                Verdict::Inconclusive => {
                    summary.inconclusive += 1;
                    entry.inconclusive += 1;
                }
            }
            if r.verdict != Verdict::Inconclusive {
                let gap = r.rhs_value - r.lhs_value;
                entry.min_gap = Some(entry.min_gap.map_or(gap, |g| g.min(gap)));
            }
        }
        let archive = violated
            .into_iter()
            .filter_map(|(digest, claims)| {
                instances.get(&digest).map(|instance| ArchivedInstance { digest, claims, instance: instance.clone() })
            })
            .collect();
        VerificationReport {
            schema: SCHEMA.into(),
            suite: suite.into(),
            seed,
            trials,
            mu: mu.map(|m| rational::format(&m)),
            summary,
            records,
            archive,
        }
    }

    /// True when no proved claim is violated.
    pub fn passed(&self) -> bool {
        self.summary.failures == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.is_failure())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
