//! Undirected simple graphs with per-vertex bitset adjacency rows.
//!
//! The bitset layout keeps the hot operations of clique-complex walks cheap:
//! "how many vertices extend this clique" is a word-wise AND + popcount, and
//! "how many clique members is x adjacent to" is a handful of bit tests.

use crate::{Error, Result};

const WORD_BITS: usize = 64;

/// An undirected simple graph on vertices `0..n`. Adjacency is stored as one
/// bitset row per vertex; the diagonal is always zero (no self-loops).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>, // n rows of `words` words each, row-major
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        let words = n.div_ceil(WORD_BITS).max(1);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "vertex {v} out of range for {} vertices",
                self.n
            )))
        }
    }

    /// Inserts the edge {u, v}. Self-loops, out-of-range endpoints, and
    /// duplicate insertions are rejected.
    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::InvalidInput(format!("duplicate edge {u} {v}")));
        }
        let (u, v) = (u as usize, v as usize);
        self.rows[u * self.words + v / WORD_BITS] |= 1 << (v % WORD_BITS);
        self.rows[v * self.words + u / WORD_BITS] |= 1 << (u % WORD_BITS);
        Ok(())
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let (u, v) = (u as usize, v as usize);
        if u >= self.n || v >= self.n {
            return false;
        }
        self.rows[u * self.words + v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    /// The adjacency bitset row of `v`.
    pub(crate) fn row(&self, v: u32) -> &[u64] {
        let v = v as usize;
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.rows
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n as u32 {
            for v in iter_ones(self.row(u)) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Number of vertices adjacent to every vertex in `verts` (bitset AND +
    /// popcount). For a clique this is its count of one-vertex extensions.
    pub(crate) fn common_neighbor_count(&self, verts: &[u32]) -> usize {
        debug_assert!(!verts.is_empty());
        let mut count = 0usize;
        for w in 0..self.words {
            let mut acc = !0u64;
            for &v in verts {
                acc &= self.row(v)[w];
            }
            count += acc.count_ones() as usize;
        }
        count
    }

    /// How many of `verts` are adjacent to `x`.
    pub(crate) fn adjacency_count(&self, x: u32, verts: &[u32]) -> usize {
        verts.iter().filter(|&&v| self.has_edge(x, v)).count()
    }

    /// All cliques of the given size, each sorted ascending, in lexicographic
    /// order. Recursive extension: candidates for the next vertex are the
    /// common neighbors of the prefix above its maximum, intersected word by
    /// word so dead branches are pruned early.
    pub(crate) fn cliques_of_size(&self, size: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        if size == 0 || self.n == 0 {
            return out;
        }
        if size == 1 {
            return (0..self.n as u32).map(|v| vec![v]).collect();
        }
        let mut prefix = Vec::with_capacity(size);
        let mut cand = vec![0u64; self.words];
        for v in 0..self.n as u32 {
            prefix.push(v);
            // Candidates: neighbors of v strictly above v.
            cand.copy_from_slice(self.row(v));
            mask_above(&mut cand, v);
            self.extend_cliques(&mut prefix, &cand, size - 1, &mut out);
            prefix.pop();
        }
        out
    }

    fn extend_cliques(
        &self,
        prefix: &mut Vec<u32>,
        cand: &[u64],
        remaining: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        if popcount(cand) < remaining {
            return;
        }
        let mut next = vec![0u64; self.words];
        for u in iter_ones(cand) {
            for (w, (c, r)) in cand.iter().zip(self.row(u)).enumerate() {
                next[w] = c & r;
            }
            mask_above(&mut next, u);
            prefix.push(u);
            self.extend_cliques(prefix, &next, remaining - 1, out);
            prefix.pop();
        }
    }

    /// Parses the edge-list text format: first line is the vertex count,
    /// every following non-empty line is one edge `u v` (0-based endpoints).
    /// Duplicate edges, self-loops, and out-of-range endpoints are rejected.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            message: "empty file; expected vertex count on the first line".into(),
        })?;
        let n: usize = first.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            message: format!("expected vertex count, found {first:?}"),
        })?;
        let mut graph = Graph::new(n);
        for (idx, line) in lines {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let (u, v) = match (parts.next(), parts.next(), parts.next()) {
                (Some(u), Some(v), None) => (u, v),
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected `u v`, found {trimmed:?}"),
                    })
                }
            };
            let parse_endpoint = |s: &str| -> Result<u32> {
                s.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid vertex id {s:?}"),
                })
            };
            let (u, v) = (parse_endpoint(u)?, parse_endpoint(v)?);
            graph.add_edge(u, v).map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
        }
        Ok(graph)
    }

    /// Renders the edge-list format written by `gen`: vertex count, then one
    /// edge per line in lexicographic order. Parsing the result reproduces
    /// the adjacency exactly.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Clears all bits at positions ≤ v.
fn mask_above(words: &mut [u64], v: u32) {
    let v = v as usize;
    let word = v / WORD_BITS;
    for w in &mut words[..word] {
        *w = 0;
    }
    if word < words.len() {
        let keep_from = v % WORD_BITS + 1;
        words[word] &= if keep_from == WORD_BITS {
            0
        } else {
            !0u64 << keep_from
        };
    }
}

fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Iterates set bit positions in ascending order.
pub(crate) fn iter_ones(words: &[u64]) -> impl Iterator<Item = u32> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let bit = rest.trailing_zeros();
                rest &= rest - 1;
                Some((i * WORD_BITS) as u32 + bit)
            }
        })
    })
}
