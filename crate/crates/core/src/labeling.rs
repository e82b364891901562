//! Adjacency labels from a forest decomposition: each vertex stores its id
//! and its parent in every forest, so two labels alone decide adjacency.

use std::fmt::Write as _;

use crate::density::ForestDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A bit string, packed most significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Label {
    bits: usize,
    bytes: Vec<u8>,
}

impl Label {
    fn with_len(bits: usize) -> Self {
        Label { bits, bytes: vec![0; bits.div_ceil(8)] }
    }

    pub fn len(&self) -> usize {
        self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    fn bit(&self, k: usize) -> bool {
        self.bytes[k / 8] >> (7 - k % 8) & 1 == 1
    }

    fn set(&mut self, k: usize) {
        self.bytes[k / 8] |= 1 << (7 - k % 8);
    }

    /// Writes `value` big-endian into the `w`-bit field number `field`.
    fn put(&mut self, field: usize, w: usize, value: usize) {
        for b in 0..w {
            if value >> (w - 1 - b) & 1 == 1 {
                self.set(field * w + b);
            }
        }
    }

    fn field(&self, field: usize, w: usize) -> usize {
        (0..w).fold(0, |acc, b| acc << 1 | usize::from(self.bit(field * w + b)))
    }

    /// Hex digits of the packed bytes; the tail of the last byte is zero.
    pub fn to_hex(&self) -> String {
        hex::encode(&self.bytes)
    }

    pub fn from_hex(s: &str, bits: usize) -> Result<Self> {
        let bytes = hex::decode(s.trim()).map_err(|e| Error::MalformedLabel(e.to_string()))?;
        if bytes.len() != bits.div_ceil(8) {
            return Err(Error::MalformedLabel(format!("{} hex digits for {bits} bits", s.trim().len())));
        }
        let label = Label { bits, bytes };
        if (bits..label.bytes.len() * 8).any(|k| label.bit(k)) {
            return Err(Error::MalformedLabel("nonzero padding".into()));
        }
        Ok(label)
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.bits).map(|k| if self.bit(k) { '1' } else { '0' }).collect()
    }
}

/// `ceil(log2(n + 1))`: bits for the ids `0..n` plus the sentinel `n`.
pub fn field_width(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelScheme {
    pub n: usize,
    pub k: usize,
    pub w: usize,
    pub labels: Vec<Label>,
}

impl LabelScheme {
    pub fn label_bits(&self) -> usize {
        (self.k + 1) * self.w
    }

    pub fn adjacent(&self, x: usize, y: usize) -> Result<bool> {
        decode(&self.labels[x], &self.labels[y], self.k, self.w)
    }

    /// Header `n k w`, then one line `id hex` per vertex.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.k, self.w);
        for (v, label) in self.labels.iter().enumerate() {
            writeln!(out, "{v} {}", label.to_hex()).expect("writing to a string");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [n, k, w] = nums[..] else {
            return Err(Error::Parse(format!("header needs n k w, got {header:?}")));
        };
        if w != field_width(n) {
            return Err(Error::MalformedLabel(format!("field width {w} does not fit n = {n}")));
        }
        let mut labels: Vec<Option<Label>> = vec![None; n];
        for line in lines {
            let (id, hex) = line.split_once(char::is_whitespace).ok_or_else(|| Error::Parse(format!("bad line {line:?}")))?;
            let id: usize = id.parse().map_err(|_| Error::Parse(format!("bad vertex id {id:?}")))?;
            if id >= n || labels[id].is_some() {
                return Err(Error::Parse(format!("vertex id {id} out of range or repeated")));
            }
            labels[id] = Some(Label::from_hex(hex, (k + 1) * w)?);
        }
        let labels = labels
            .into_iter()
            .enumerate()
            .map(|(v, l)| l.ok_or_else(|| Error::Parse(format!("no label for vertex {v}"))))
            .collect::<Result<_>>()?;
        Ok(LabelScheme { n, k, w, labels })
    }
}

/// Labels `[id | parent in forest 1 | ... | parent in forest k]`, each
/// field `ceil(log2(n + 1))` bits, `n` meaning "no parent". Each forest
/// component is rooted at its smallest vertex.
pub fn encode(g: &Graph, fd: &ForestDecomposition) -> Result<LabelScheme> {
    fd.validate(g)?;
    let n = g.vertex_count();
    let (k, w) = (fd.k, field_width(n));
    let mut labels: Vec<Label> = (0..n).map(|_| Label::with_len((k + 1) * w)).collect();
    for (v, label) in labels.iter_mut().enumerate() {
        label.put(0, w, v);
    }
    for class in 0..k {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in fd.forest(class) {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![usize::MAX; n];
        for root in 0..n {
            if parent[root] != usize::MAX {
                continue;
            }
            parent[root] = n;
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if parent[y] == usize::MAX {
                        parent[y] = x;
                        stack.push(y);
                    }
                }
            }
        }
        for (v, label) in labels.iter_mut().enumerate() {
            label.put(class + 1, w, parent[v]);
        }
    }
    Ok(LabelScheme { n, k, w, labels })
}

/// Adjacent iff one label names the other's id as a parent.
pub fn decode(x: &Label, y: &Label, k: usize, w: usize) -> Result<bool> {
    let bits = (k + 1) * w;
    for l in [x, y] {
        if l.len() != bits {
            return Err(Error::MalformedLabel(format!("label of {} bits, expected {bits}", l.len())));
        }
    }
    let (idx, idy) = (x.field(0, w), y.field(0, w));
    if idx == idy {
        return Ok(false);
    }
    Ok((1..=k).any(|f| x.field(f, w) == idy || y.field(f, w) == idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::forest_decomposition;
    use crate::graph::degeneracy;

    fn scheme(g: &Graph, k: usize) -> LabelScheme {
        encode(g, &forest_decomposition(g, k).unwrap()).unwrap()
    }

    fn check_all_pairs(g: &Graph, s: &LabelScheme) {
        for x in 0..g.vertex_count() {
            for y in 0..g.vertex_count() {
                assert_eq!(s.adjacent(x, y).unwrap(), g.has_edge(x, y), "{x} {y}");
            }
        }
    }

    #[test]
    fn widths() {
        assert_eq!(field_width(1), 1);
        assert_eq!(field_width(2), 2);
        assert_eq!(field_width(3), 2);
        assert_eq!(field_width(4), 3);
        assert_eq!(field_width(5), 3);
        assert_eq!(field_width(7), 3);
        assert_eq!(field_width(8), 4);
    }

    #[test]
    fn small_examples() {
        let k2 = Graph::complete(2);
        let s = scheme(&k2, 1);
        assert_eq!(s.labels[0].len(), 4);
        assert!(s.adjacent(0, 1).unwrap());

        let tree = Graph::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let s = scheme(&tree, 1);
        assert!(s.labels.iter().all(|l| l.len() == 6));
        check_all_pairs(&tree, &s);

        let k4 = Graph::complete(4);
        let s = scheme(&k4, 3);
        assert!(s.labels.iter().all(|l| l.len() == 12));
        check_all_pairs(&k4, &s);
    }

    #[test]
    fn random_graph_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 50;
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.1)).collect();
        let g = Graph::new(n, edges).unwrap();
        let s = scheme(&g, degeneracy(&g));
        check_all_pairs(&g, &s);
        let back = LabelScheme::parse(&s.to_text()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let a = scheme(&Graph::complete(2), 1);
        let b = scheme(&Graph::complete(5), 4);
        assert!(decode(&a.labels[0], &b.labels[1], 1, 2).is_err());
        assert!(Label::from_hex("ff", 4).is_err());
        assert!(LabelScheme::parse("2 1 3\n0 00\n1 00\n").is_err());
    }
}
