//! Simplicial complexes: clique complexes of graphs and explicit
//! (downward-closed) complexes.
//!
//! A k-simplex is a set of k+1 vertices; the complexes here expose the
//! operations the walk and the exact oracles need: membership, enumeration of
//! all k-simplices in lexicographic order, up-degrees (number of (k+1)-simplex
//! cofaces), and adjacency in the simplex graph. Two k-simplices σ, τ are
//! simplex-graph neighbors when they share k vertices and their union is *not*
//! a simplex of the complex — exactly the pairs where the degree-k Laplacian
//! has a nonzero off-diagonal entry.

mod graph;

pub use graph::Graph;

use std::collections::BTreeSet;
use std::fmt;

use crate::{Error, Result};

/// A simplex: a nonempty, strictly increasing list of vertex ids. The derived
/// `Ord` is lexicographic on the vertex list, the canonical order used for
/// simplex enumeration and matrix indexing throughout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Builds a simplex from an already sorted, duplicate-free vertex list.
    pub fn new(vertices: Vec<u32>) -> Result<Simplex> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("empty simplex".into()));
        }
        if !vertices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "simplex vertices must be strictly increasing, got {vertices:?}"
            )));
        }
        Ok(Simplex(vertices))
    }

    /// Builds a simplex from vertices in any order; duplicates are rejected.
    pub fn from_unsorted(mut vertices: Vec<u32>) -> Result<Simplex> {
        vertices.sort_unstable();
        Simplex::new(vertices)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    /// Dimension: one less than the vertex count.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Position of `v` in the sorted vertex list, if present.
    pub fn position(&self, v: u32) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    /// The facet obtained by deleting the vertex at `pos`.
    pub fn facet(&self, pos: usize) -> Simplex {
        debug_assert!(self.0.len() > 1);
        let mut vs = self.0.clone();
        vs.remove(pos);
        Simplex(vs)
    }

    /// Replaces the vertex at `out_pos` with `added`, resorting; returns the
    /// new simplex and the position of `added` within it.
    fn swap_vertex(&self, out_pos: usize, added: u32) -> (Simplex, usize) {
        let mut vs = self.0.clone();
        vs.remove(out_pos);
        let in_pos = vs.partition_point(|&u| u < added);
        vs.insert(in_pos, added);
        (Simplex(vs), in_pos)
    }

    /// Sorted union with one extra vertex (which must not be a member).
    fn with_vertex(&self, added: u32) -> Simplex {
        let mut vs = self.0.clone();
        let pos = vs.partition_point(|&u| u < added);
        debug_assert!(vs.get(pos) != Some(&added));
        vs.insert(pos, added);
        Simplex(vs)
    }

    /// Size of the intersection with another simplex (merge scan).
    pub fn intersection_size(&self, other: &Simplex) -> usize {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j, mut common) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    common += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        common
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// All k-simplices of a complex, sorted lexicographically, with O(log)
/// position lookup. Matrix rows/columns are indexed by position in this list.
#[derive(Debug, Clone)]
pub struct SimplexIndex {
    k: usize,
    items: Vec<Simplex>,
}

impl SimplexIndex {
    fn new(k: usize, items: Vec<Simplex>) -> SimplexIndex {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]), "sorted, unique");
        debug_assert!(items.iter().all(|s| s.dim() == k));
        SimplexIndex { k, items }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, i: usize) -> &Simplex {
        &self.items[i]
    }

    pub fn position(&self, simplex: &Simplex) -> Option<usize> {
        self.items.binary_search(simplex).ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Simplex> {
        self.items.iter()
    }
}

/// One simplex-graph neighbor of σ: the neighbor τ itself, the position
/// (`out_pos`) within σ of the vertex σ loses, and the position (`in_pos`)
/// within τ of the vertex it gains. The parity of `out_pos + in_pos` fixes
/// the sign of the Laplacian entry linking σ and τ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbor {
    pub simplex: Simplex,
    pub out_pos: usize,
    pub in_pos: usize,
}

impl Neighbor {
    /// Sign of the Laplacian entry Δ[τ, σ]: (−1)^(out_pos + in_pos).
    pub fn laplacian_sign(&self) -> i8 {
        if (self.out_pos + self.in_pos).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Sign of the walk-matrix entry H[τ, σ] = −Δ[τ, σ]/n: the opposite.
    pub fn h_sign(&self) -> i8 {
        -self.laplacian_sign()
    }
}

/// Common interface of clique-backed and explicit complexes. Implementations
/// must be cheap to query per-simplex: the walk calls `up_degree` and
/// `simplex_graph_neighbors` on every step.
pub trait Complex: Sync {
    fn vertex_count(&self) -> usize;

    /// Whether this is the clique complex of a graph (tightens the estimator
    /// norm bound from n to 2).
    fn is_clique_complex(&self) -> bool;

    /// Membership test. Vertices out of `0..vertex_count()` are an error.
    fn contains(&self, simplex: &Simplex) -> Result<bool>;

    /// Number of (k+1)-simplices containing the k-simplex `simplex`.
    /// The simplex must be a member.
    fn up_degree(&self, simplex: &Simplex) -> Result<usize>;

    /// All simplex-graph neighbors of a member k-simplex, in deterministic
    /// order (ascending added vertex, then ascending removed position).
    fn simplex_graph_neighbors(&self, simplex: &Simplex) -> Result<Vec<Neighbor>>;

    /// All k-simplices in lexicographic order (empty index if there are none).
    fn enumerate_k_simplices(&self, k: usize) -> SimplexIndex;
}

fn check_simplex_range(simplex: &Simplex, n: usize) -> Result<()> {
    let max = *simplex.vertices().last().expect("simplices are nonempty");
    if (max as usize) < n {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "simplex {simplex} has vertex {max} out of range for {n} vertices"
        )))
    }
}

fn require_member<C: Complex + ?Sized>(cx: &C, simplex: &Simplex) -> Result<()> {
    if cx.contains(simplex)? {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "simplex {simplex} is not in the complex"
        )))
    }
}

/// The clique complex of a graph: simplices are exactly the cliques.
#[derive(Debug, Clone)]
pub struct CliqueComplex {
    graph: Graph,
}

impl CliqueComplex {
    pub fn new(graph: Graph) -> CliqueComplex {
        CliqueComplex { graph }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

impl Complex for CliqueComplex {
    fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn is_clique_complex(&self) -> bool {
        true
    }

    fn contains(&self, simplex: &Simplex) -> Result<bool> {
        check_simplex_range(simplex, self.vertex_count())?;
        let vs = simplex.vertices();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if !self.graph.has_edge(u, v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn up_degree(&self, simplex: &Simplex) -> Result<usize> {
        require_member(self, simplex)?;
        Ok(self.graph.common_neighbor_count(simplex.vertices()))
    }

    fn simplex_graph_neighbors(&self, simplex: &Simplex) -> Result<Vec<Neighbor>> {
        require_member(self, simplex)?;
        let k = simplex.dim();
        let vs = simplex.vertices();
        let mut out = Vec::new();
        // τ is a neighbor of σ exactly when τ = σ − v + x for an outside
        // vertex x adjacent to all of σ except the single vertex v: then τ is
        // a clique sharing k vertices with σ, and σ ∪ τ = σ ∪ {x} is not one.
        for x in 0..self.vertex_count() as u32 {
            if simplex.position(x).is_some() {
                continue;
            }
            if self.graph.adjacency_count(x, vs) != k {
                continue;
            }
            let out_pos = vs
                .iter()
                .position(|&v| !self.graph.has_edge(x, v))
                .expect("exactly one non-adjacent member");
            let (tau, in_pos) = simplex.swap_vertex(out_pos, x);
            out.push(Neighbor {
                simplex: tau,
                out_pos,
                in_pos,
            });
        }
        Ok(out)
    }

    fn enumerate_k_simplices(&self, k: usize) -> SimplexIndex {
        let items = self
            .graph
            .cliques_of_size(k + 1)
            .into_iter()
            .map(Simplex)
            .collect();
        SimplexIndex::new(k, items)
    }
}

/// Largest maximal simplex accepted by `ExplicitComplex::from_maximal`; the
/// downward closure of an m-vertex simplex has 2^m − 1 faces.
pub const MAX_EXPLICIT_SIMPLEX_VERTICES: usize = 20;

/// An explicit complex stored as the set of *all* its simplices. Construction
/// takes the maximal simplices and closes downward, so membership of every
/// face is a direct lookup.
#[derive(Debug, Clone)]
pub struct ExplicitComplex {
    n: usize,
    simplices: BTreeSet<Vec<u32>>,
}

impl ExplicitComplex {
    /// Builds the downward closure of the given simplices on vertices `0..n`.
    /// Inputs must be sorted and duplicate-free; they need not be maximal
    /// (redundant faces are absorbed).
    pub fn from_maximal<I>(n: usize, maximal: I) -> Result<ExplicitComplex>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut simplices = BTreeSet::new();
        for vs in maximal {
            let simplex = Simplex::new(vs)?;
            check_simplex_range(&simplex, n)?;
            let m = simplex.vertices().len();
            if m > MAX_EXPLICIT_SIMPLEX_VERTICES {
                return Err(Error::Resource {
                    what: "maximal simplex vertex count".into(),
                    requested: m as u128,
                    limit: MAX_EXPLICIT_SIMPLEX_VERTICES as u128,
                });
            }
            // Every nonempty subset is a face.
            for mask in 1u32..(1 << m) {
                let face: Vec<u32> = (0..m)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| simplex.vertices()[i])
                    .collect();
                simplices.insert(face);
            }
        }
        Ok(ExplicitComplex { n, simplices })
    }

    /// Parses the complex text format: first line is the vertex count, every
    /// following non-empty line lists one maximal simplex as space-separated,
    /// strictly increasing vertex ids.
    pub fn parse(text: &str) -> Result<ExplicitComplex> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            message: "empty file; expected vertex count on the first line".into(),
        })?;
        let n: usize = first.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            message: format!("expected vertex count, found {first:?}"),
        })?;
        let mut maximal = Vec::new();
        for (idx, line) in lines {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let mut vs = Vec::new();
            for tok in trimmed.split_whitespace() {
                vs.push(tok.parse::<u32>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid vertex id {tok:?}"),
                })?);
            }
            if !vs.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("vertices must be strictly increasing, got {trimmed:?}"),
                });
            }
            maximal.push(vs);
        }
        Self::from_maximal(n, maximal).map_err(|e| match e {
            Error::InvalidInput(msg) => Error::Parse {
                line: 2,
                message: msg,
            },
            other => other,
        })
    }

    /// Renders the parseable complex format, listing the maximal simplices
    /// (those with no proper coface) in lexicographic order.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for vs in &self.simplices {
            let is_maximal = !self
                .simplices
                .iter()
                .any(|other| other.len() > vs.len() && is_subset(vs, other));
            if is_maximal {
                let line: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
        out
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

impl Complex for ExplicitComplex {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn is_clique_complex(&self) -> bool {
        false
    }

    fn contains(&self, simplex: &Simplex) -> Result<bool> {
        check_simplex_range(simplex, self.n)?;
        Ok(self.simplices.contains(simplex.vertices()))
    }

    fn up_degree(&self, simplex: &Simplex) -> Result<usize> {
        require_member(self, simplex)?;
        let mut count = 0;
        for x in 0..self.n as u32 {
            if simplex.position(x).is_some() {
                continue;
            }
            if self.simplices.contains(simplex.with_vertex(x).vertices()) {
                count += 1;
            }
        }
        Ok(count)
    }

    fn simplex_graph_neighbors(&self, simplex: &Simplex) -> Result<Vec<Neighbor>> {
        require_member(self, simplex)?;
        let k = simplex.dim();
        let mut out = Vec::new();
        for x in 0..self.n as u32 {
            if simplex.position(x).is_some() {
                continue;
            }
            // If σ ∪ {x} is a simplex, no swap with x is a neighbor.
            if self.simplices.contains(simplex.with_vertex(x).vertices()) {
                continue;
            }
            for out_pos in 0..=k {
                let (tau, in_pos) = simplex.swap_vertex(out_pos, x);
                if self.simplices.contains(tau.vertices()) {
                    out.push(Neighbor {
                        simplex: tau,
                        out_pos,
                        in_pos,
                    });
                }
            }
        }
        Ok(out)
    }

    fn enumerate_k_simplices(&self, k: usize) -> SimplexIndex {
        let items = self
            .simplices
            .iter()
            .filter(|vs| vs.len() == k + 1)
            .cloned()
            .map(Simplex)
            .collect();
        SimplexIndex::new(k, items)
    }
}

/// Either complex kind behind one concrete type, for call sites (like the
/// CLI) that pick the kind at runtime.
#[derive(Debug, Clone)]
pub enum AnyComplex {
    Clique(CliqueComplex),
    Explicit(ExplicitComplex),
}

impl Complex for AnyComplex {
    fn vertex_count(&self) -> usize {
        match self {
            AnyComplex::Clique(c) => c.vertex_count(),
            AnyComplex::Explicit(c) => c.vertex_count(),
        }
    }

    fn is_clique_complex(&self) -> bool {
        match self {
            AnyComplex::Clique(c) => c.is_clique_complex(),
            AnyComplex::Explicit(c) => c.is_clique_complex(),
        }
    }

    fn contains(&self, simplex: &Simplex) -> Result<bool> {
        match self {
            AnyComplex::Clique(c) => c.contains(simplex),
            AnyComplex::Explicit(c) => c.contains(simplex),
        }
    }

    fn up_degree(&self, simplex: &Simplex) -> Result<usize> {
        match self {
            AnyComplex::Clique(c) => c.up_degree(simplex),
            AnyComplex::Explicit(c) => c.up_degree(simplex),
        }
    }

    fn simplex_graph_neighbors(&self, simplex: &Simplex) -> Result<Vec<Neighbor>> {
        match self {
            AnyComplex::Clique(c) => c.simplex_graph_neighbors(simplex),
            AnyComplex::Explicit(c) => c.simplex_graph_neighbors(simplex),
        }
    }

    fn enumerate_k_simplices(&self, k: usize) -> SimplexIndex {
        match self {
            AnyComplex::Clique(c) => c.enumerate_k_simplices(k),
            AnyComplex::Explicit(c) => c.enumerate_k_simplices(k),
        }
    }
}

/// The complete (k+1)-partite graph with parts of size m (part i holds
/// vertices i·m .. (i+1)·m − 1). Its clique complex is pure of dimension k:
/// the top simplices are the (k+1)-cliques picking one vertex per part.
pub fn generate_complete_partite(k: usize, m: usize) -> Result<CliqueComplex> {
    if m == 0 {
        return Err(Error::InvalidInput("part size m must be positive".into()));
    }
    let n = (k + 1) * m;
    let mut g = Graph::new(n);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if u as usize / m != v as usize / m {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(CliqueComplex::new(g))
}

/// m disjoint copies of the complete graph K_{k+1} (block i holds vertices
/// i·(k+1) .. (i+1)·(k+1) − 1). The clique complex is m disjoint k-simplices
/// with all their faces.
pub fn generate_disjoint_cliques(m: usize, k: usize) -> Result<CliqueComplex> {
    if m == 0 {
        return Err(Error::InvalidInput("copy count m must be positive".into()));
    }
    let size = k + 1;
    let n = m * size;
    let mut g = Graph::new(n);
    for block in 0..m {
        let base = (block * size) as u32;
        for i in 0..size as u32 {
            for j in i + 1..size as u32 {
                g.add_edge(base + i, base + j)?;
            }
        }
    }
    Ok(CliqueComplex::new(g))
}
