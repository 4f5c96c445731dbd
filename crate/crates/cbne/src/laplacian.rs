//! Combinatorial Laplacians of simplicial complexes, kept exact.
//!
//! For k ≥ 1 the degree-k Laplacian of a complex on n vertices is
//! Δ_k = ∂_kᵀ∂_k + ∂_{k+1}∂_{k+1}ᵀ, where ∂_k is the boundary map sending a
//! sorted k-simplex to the alternating sum of its facets with the sign
//! (−1)^(j+1) on the facet that drops the j-th vertex. Its entries are
//! integers with a closed combinatorial form:
//!
//! - diagonal: up-degree of σ plus k + 1;
//! - off-diagonal: ±1 exactly when σ and τ are simplex-graph neighbors, with
//!   sign (−1)^(out_pos + in_pos) from the positions of the two swapped
//!   vertices; 0 otherwise (including when σ ∪ τ is itself a simplex, where
//!   the upper and lower contributions cancel).
//!
//! The walk operates on H = I − Δ_k/n, whose entries are integers over the
//! single denominator n; everything here carries numerators exactly and
//! leaves floating point to the samplers.

use std::io::Write;

use crate::complex::{Complex, Simplex, SimplexIndex};
use crate::{fmt_f64, Error, Result};

/// Dense assembly refuses matrices larger than this unless the caller raises
/// the guard explicitly.
pub const DEFAULT_DENSE_GUARD: usize = 4096;

/// An exact fraction `num/den` with positive denominator. Values are not
/// reduced: within one complex every quantity shares the denominator n, so
/// equality of (num, den) pairs is the intended comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: i64,
    pub den: u64,
}

impl Ratio {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }
}

fn require_dimension_at_least_one(simplex: &Simplex) -> Result<usize> {
    let k = simplex.dim();
    if k == 0 {
        return Err(Error::InvalidInput(
            "Laplacian entry formulas require k ≥ 1".into(),
        ));
    }
    Ok(k)
}

/// Positions of the single differing vertex on each side, for two sorted
/// lists known to share all but one element.
fn swap_positions(sigma: &Simplex, tau: &Simplex) -> (usize, usize) {
    let a = sigma.vertices();
    let b = tau.vertices();
    debug_assert_eq!(a.len(), b.len());
    let out_pos = (0..a.len())
        .find(|&i| tau.position(a[i]).is_none())
        .expect("sigma has a vertex outside tau");
    let in_pos = (0..b.len())
        .find(|&j| sigma.position(b[j]).is_none())
        .expect("tau has a vertex outside sigma");
    (out_pos, in_pos)
}

fn sorted_union(sigma: &Simplex, tau: &Simplex) -> Simplex {
    let mut vs: Vec<u32> = sigma.vertices().to_vec();
    for &v in tau.vertices() {
        if sigma.position(v).is_none() {
            vs.push(v);
        }
    }
    Simplex::from_unsorted(vs).expect("union of simplices is a valid vertex set")
}

/// The integer entry Δ_k[σ, τ] straight from the combinatorial formula.
/// Both simplices must be member k-simplices of the same dimension k ≥ 1.
pub fn laplacian_entry<C: Complex + ?Sized>(cx: &C, sigma: &Simplex, tau: &Simplex) -> Result<i64> {
    let k = require_dimension_at_least_one(sigma)?;
    if tau.dim() != k {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: {sigma} is a {k}-simplex, {tau} is a {}-simplex",
            tau.dim()
        )));
    }
    if !cx.contains(sigma)? || !cx.contains(tau)? {
        return Err(Error::InvalidInput(format!(
            "{sigma} and {tau} must both be simplices of the complex"
        )));
    }
    if sigma == tau {
        return Ok(cx.up_degree(sigma)? as i64 + k as i64 + 1);
    }
    if sigma.intersection_size(tau) != k {
        return Ok(0);
    }
    if cx.contains(&sorted_union(sigma, tau))? {
        return Ok(0);
    }
    let (out_pos, in_pos) = swap_positions(sigma, tau);
    Ok(if (out_pos + in_pos) % 2 == 0 { 1 } else { -1 })
}

/// The exact entry H[σ, τ] of H = I − Δ_k/n, as a fraction over n.
pub fn h_entry<C: Complex + ?Sized>(cx: &C, sigma: &Simplex, tau: &Simplex) -> Result<Ratio> {
    let n = cx.vertex_count() as i64;
    let delta = laplacian_entry(cx, sigma, tau)?;
    let identity = if sigma == tau { n } else { 0 };
    Ok(Ratio {
        num: identity - delta,
        den: n as u64,
    })
}

/// The column 1-norm ‖H|σ⟩‖₁ = 1 + (deg(σ) − d_up(σ) − k − 1)/n, where
/// deg(σ) is the simplex-graph degree. Always a nonnegative fraction over n;
/// it is zero exactly when the walk column of σ vanishes.
pub fn column_one_norm<C: Complex + ?Sized>(cx: &C, sigma: &Simplex) -> Result<Ratio> {
    let k = require_dimension_at_least_one(sigma)?;
    let n = cx.vertex_count() as i64;
    let deg = cx.simplex_graph_neighbors(sigma)?.len() as i64;
    let d_up = cx.up_degree(sigma)? as i64;
    let num = n + deg - d_up - k as i64 - 1;
    debug_assert!(num >= 0, "column norms are nonnegative");
    Ok(Ratio { num, den: n as u64 })
}

/// The boundary map ∂_k in sparse column form: rows are the (k−1)-simplices,
/// columns the k-simplices, both in lexicographic order. Each column has
/// exactly k + 1 entries, the j-th facet carrying sign (−1)^(j+1).
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    pub k: usize,
    pub rows: SimplexIndex,
    pub cols: SimplexIndex,
    /// Per column: (row position, sign), ordered by ascending deleted position.
    pub columns: Vec<Vec<(u32, i8)>>,
}

impl BoundaryMatrix {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols.len()
    }
}

/// Builds ∂_k for k ≥ 1. Every facet of a member simplex is itself a member
/// (downward closure), so each column resolves to exactly k + 1 rows.
pub fn boundary_matrix<C: Complex + ?Sized>(cx: &C, k: usize) -> Result<BoundaryMatrix> {
    if k == 0 {
        return Err(Error::InvalidInput(
            "boundary matrices are defined for k ≥ 1".into(),
        ));
    }
    let rows = cx.enumerate_k_simplices(k - 1);
    let cols = cx.enumerate_k_simplices(k);
    let mut columns = Vec::with_capacity(cols.len());
    for sigma in cols.iter() {
        let mut entries = Vec::with_capacity(k + 1);
        for j in 0..=k {
            let facet = sigma.facet(j);
            let row = rows
                .position(&facet)
                .expect("complexes are downward closed, so every facet is indexed");
            let sign = if j % 2 == 0 { -1 } else { 1 };
            entries.push((row as u32, sign));
        }
        columns.push(entries);
    }
    Ok(BoundaryMatrix {
        k,
        rows,
        cols,
        columns,
    })
}

/// A dense integer Laplacian Δ_k, indexed by the lexicographic k-simplex
/// order of `index`.
#[derive(Debug, Clone)]
pub struct LaplacianDense {
    index: SimplexIndex,
    n: usize,
    data: Vec<i64>,
}

impl LaplacianDense {
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// Ambient vertex count (the denominator of H = I − Δ/n).
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> &SimplexIndex {
        &self.index
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.index.len() + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    pub fn trace(&self) -> i64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// Numerator (over n) of the H column 1-norm for each column:
    /// Σ_τ |n·δ[τ,σ] − Δ[τ,σ]|.
    pub fn column_norm_numerators(&self) -> Vec<i64> {
        let d = self.dim();
        let n = self.n as i64;
        (0..d)
            .map(|j| {
                (0..d)
                    .map(|i| {
                        let identity = if i == j { n } else { 0 };
                        (identity - self.get(i, j)).abs()
                    })
                    .sum()
            })
            .collect()
    }

    /// Writes the integer matrix as CSV, row-major. Integer entries are exact
    /// decimals already.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            let row: Vec<String> = (0..d).map(|j| self.get(i, j).to_string()).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Writes H = I − Δ/n as CSV with 17-significant-digit decimals. Every
    /// entry is the exact rational (n·δ_ij − Δ_ij)/n rounded once, so the
    /// values match `h_entry(..).to_f64()` bit for bit.
    pub fn write_h_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        let d = self.dim();
        let n = self.n as i64;
        for i in 0..d {
            let row: Vec<String> = (0..d)
                .map(|j| {
                    let identity = if i == j { n } else { 0 };
                    let num = identity - self.get(i, j);
                    fmt_f64(num as f64 / n as f64)
                })
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Assembles Δ_k = ∂_kᵀ∂_k + ∂_{k+1}∂_{k+1}ᵀ densely from the sparse boundary
/// maps, with the default size guard. For k = 0 the first term is zero (∂_0
/// is the zero map) and the result is the graph Laplacian of the 1-skeleton.
pub fn assemble_laplacian_dense<C: Complex + ?Sized>(cx: &C, k: usize) -> Result<LaplacianDense> {
    assemble_laplacian_dense_guarded(cx, k, DEFAULT_DENSE_GUARD)
}

/// Dense assembly with an explicit guard on |S_k|.
pub fn assemble_laplacian_dense_guarded<C: Complex + ?Sized>(
    cx: &C,
    k: usize,
    guard: usize,
) -> Result<LaplacianDense> {
    let index = cx.enumerate_k_simplices(k);
    let d = index.len();
    if d > guard {
        return Err(Error::Resource {
            what: format!("dense Laplacian dimension |S_{k}|"),
            requested: d as u128,
            limit: guard as u128,
        });
    }
    let mut data = vec![0i64; d * d];

    // Upper term ∂_kᵀ∂_k: every (k−1)-simplex row contributes the pairwise
    // products of its column entries.
    if k >= 1 && d > 0 {
        let bd = boundary_matrix(cx, k)?;
        let mut row_hits: Vec<Vec<(u32, i8)>> = vec![Vec::new(); bd.row_count()];
        for (col, entries) in bd.columns.iter().enumerate() {
            for &(row, sign) in entries {
                row_hits[row as usize].push((col as u32, sign));
            }
        }
        for hits in &row_hits {
            for &(a, sa) in hits {
                for &(b, sb) in hits {
                    data[a as usize * d + b as usize] += (sa * sb) as i64;
                }
            }
        }
    }

    // Lower term ∂_{k+1}∂_{k+1}ᵀ: every (k+1)-simplex column contributes the
    // pairwise products of its facet entries.
    if d > 0 {
        let bd_up = boundary_matrix(cx, k + 1)?;
        debug_assert_eq!(bd_up.row_count(), d);
        for entries in &bd_up.columns {
            for &(a, sa) in entries {
                for &(b, sb) in entries {
                    data[a as usize * d + b as usize] += (sa * sb) as i64;
                }
            }
        }
    }

    Ok(LaplacianDense {
        index,
        n: cx.vertex_count(),
        data,
    })
}
