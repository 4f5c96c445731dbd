//! Exact desk-scale ground truth the Monte Carlo estimators are validated
//! against:
//!
//! - Betti numbers from boundary-map ranks over the rationals, computed by
//!   fraction-free integer elimination (no floating point, no tolerance).
//! - The exact normalized trace tr(H^ℓ)/|S_k| via powers of the integer
//!   matrix n·I − Δ_k.
//! - The exact second moment of the path functional, E[f²] = tr(Q^ℓ)/|S_k|,
//!   where Q_τσ = ‖H|σ⟩‖₁·|H_τσ|. Derivation: squaring f and summing against
//!   the path density turns each step's (sign · ‖H|σ_i⟩‖₁)² × P_τσ into
//!   ‖H|σ_i⟩‖₁·|H_τσ|, and the closed-path indicator turns the sum over end
//!   states into a trace. Scaled by n² per step, Q̃ = n²Q is an integer
//!   matrix, so the trace is exact.
//! - Second-moment sandwich bounds from the column-norm sums, with shared
//!   integer numerators over the common denominator n^(2ℓ)·|S_k| so the
//!   comparisons are integer comparisons.
//! - The spectrum of Δ_k by cyclic Jacobi rotations; its nullity must equal
//!   the rank-based Betti number.
//!
//! Integer matrix powers run in i128 with checked arithmetic and fall back
//! to f64 when a product would overflow; the all-integer entry points
//! (`exact_moment_numerators`) report a numeric error instead of degrading.

use num_bigint::BigInt;
use num_traits::{pow, ToPrimitive, Zero};
use serde::Serialize;

use crate::complex::{Complex, SimplexIndex};
use crate::laplacian::{
    assemble_laplacian_dense_guarded, boundary_matrix, BoundaryMatrix, DEFAULT_DENSE_GUARD,
};
use crate::walk::transition_profile;
use crate::{Error, Result};

/// Eigenvalues below `NULLITY_TOLERANCE_FACTOR · n` count as zero when
/// reading the Betti number off the spectrum.
pub const NULLITY_TOLERANCE_FACTOR: f64 = 1e-8;

fn check_guard(what: &str, requested: usize, guard: usize) -> Result<()> {
    if requested > guard {
        return Err(Error::Resource {
            what: what.into(),
            requested: requested as u128,
            limit: guard as u128,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Exact rank and Betti numbers
// ---------------------------------------------------------------------------

/// Rank of an integer matrix over the rationals by Bareiss fraction-free
/// elimination: every intermediate entry is a minor of the input, and the
/// division by the previous pivot is exact, so no fractions ever appear.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut pivot_row = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, p);
        for r in pivot_row + 1..rows {
            for c in col + 1..cols {
                let num = &m[pivot_row][col] * &m[r][c] - &m[r][col] * &m[pivot_row][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[pivot_row][col].clone();
        rank += 1;
        pivot_row += 1;
    }
    rank
}

fn dense_boundary(b: &BoundaryMatrix) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); b.col_count()]; b.row_count()];
    for (j, column) in b.columns.iter().enumerate() {
        for &(i, sign) in column {
            m[i as usize][j] = BigInt::from(sign);
        }
    }
    m
}

/// Rank of ∂_k over the rationals.
pub fn boundary_rank(b: &BoundaryMatrix) -> usize {
    bareiss_rank(dense_boundary(b))
}

/// β_k = |S_k| − rank ∂_k − rank ∂_{k+1}, with ∂_0 the zero map (so β_0
/// counts connected components). Default dense guard.
pub fn exact_betti<C: Complex + ?Sized>(cx: &C, k: usize) -> Result<u64> {
    exact_betti_guarded(cx, k, DEFAULT_DENSE_GUARD)
}

/// `exact_betti` with an explicit size guard on the simplex counts involved.
pub fn exact_betti_guarded<C: Complex + ?Sized>(cx: &C, k: usize, guard: usize) -> Result<u64> {
    let s_k = cx.enumerate_k_simplices(k).len();
    if s_k == 0 {
        return Ok(0);
    }
    check_guard(&format!("rank computation size |S_{k}|"), s_k, guard)?;
    let s_up = cx.enumerate_k_simplices(k + 1).len();
    check_guard(&format!("rank computation size |S_{}|", k + 1), s_up, guard)?;
    let rank_down = if k == 0 {
        0
    } else {
        let b = boundary_matrix(cx, k)?;
        check_guard(
            &format!("rank computation size |S_{}|", k - 1),
            b.row_count(),
            guard,
        )?;
        boundary_rank(&b)
    };
    let rank_up = if s_up == 0 {
        0
    } else {
        boundary_rank(&boundary_matrix(cx, k + 1)?)
    };
    s_k.checked_sub(rank_down + rank_up)
        .map(|b| b as u64)
        .ok_or_else(|| {
            Error::Numeric(format!(
                "negative Betti number from ranks ({s_k} − {rank_down} − {rank_up})"
            ))
        })
}

// ---------------------------------------------------------------------------
// Scaled sparse matrices and their power traces
// ---------------------------------------------------------------------------

/// A square integer matrix in sparse column form, indexed by a SimplexIndex.
struct ScaledColumns {
    dim: usize,
    cols: Vec<Vec<(u32, i64)>>,
}

/// M = n·I − Δ_k (so H = M/n), one transition-profile scan per column.
fn scaled_h_columns<C: Complex + ?Sized>(cx: &C, index: &SimplexIndex) -> Result<ScaledColumns> {
    let mut cols = Vec::with_capacity(index.len());
    for (j, sigma) in index.iter().enumerate() {
        let prof = transition_profile(cx, sigma)?;
        let mut entries = Vec::with_capacity(prof.degree() + 1);
        if prof.stay_weight > 0 {
            entries.push((j as u32, prof.stay_weight as i64));
        }
        for (tau, sign) in &prof.neighbors {
            let r = index
                .position(tau)
                .expect("every simplex-graph neighbor is an indexed k-simplex");
            entries.push((r as u32, *sign as i64));
        }
        cols.push(entries);
    }
    Ok(ScaledColumns {
        dim: index.len(),
        cols,
    })
}

/// Q̃ = n²·Q with Q_τσ = ‖H|σ⟩‖₁·|H_τσ|: column σ carries its norm numerator
/// times the absolute entries of M's column.
fn transfer_columns<C: Complex + ?Sized>(cx: &C, index: &SimplexIndex) -> Result<ScaledColumns> {
    let mut cols = Vec::with_capacity(index.len());
    for (j, sigma) in index.iter().enumerate() {
        let prof = transition_profile(cx, sigma)?;
        let c_num = prof.total_weight as i64;
        let mut entries = Vec::with_capacity(prof.degree() + 1);
        let diag = c_num * prof.stay_weight as i64;
        if diag > 0 {
            entries.push((j as u32, diag));
        }
        if c_num > 0 {
            for (tau, _) in &prof.neighbors {
                let r = index
                    .position(tau)
                    .expect("every simplex-graph neighbor is an indexed k-simplex");
                entries.push((r as u32, c_num));
            }
        }
        cols.push(entries);
    }
    Ok(ScaledColumns {
        dim: index.len(),
        cols,
    })
}

/// Traces of M^1 … M^max_len with checked i128 accumulation (column-major
/// dense power, sparse multiplier). None signals overflow.
fn power_traces_exact(m: &ScaledColumns, max_len: usize) -> Option<Vec<i128>> {
    let d = m.dim;
    let mut p = vec![0i128; d * d];
    for i in 0..d {
        p[i * d + i] = 1;
    }
    let mut next = vec![0i128; d * d];
    let mut traces = Vec::with_capacity(max_len);
    for _ in 0..max_len {
        next.iter_mut().for_each(|x| *x = 0);
        for j in 0..d {
            for t in 0..d {
                let pv = p[j * d + t];
                if pv == 0 {
                    continue;
                }
                for &(i, v) in &m.cols[t] {
                    let slot = &mut next[j * d + i as usize];
                    *slot = slot.checked_add((v as i128).checked_mul(pv)?)?;
                }
            }
        }
        std::mem::swap(&mut p, &mut next);
        let mut tr = 0i128;
        for i in 0..d {
            tr = tr.checked_add(p[i * d + i])?;
        }
        traces.push(tr);
    }
    Some(traces)
}

/// Floating fallback: powers of M/scale (scale = n for H, n² for Q).
fn power_traces_float(m: &ScaledColumns, scale: f64, max_len: usize) -> Vec<f64> {
    let d = m.dim;
    let mut p = vec![0.0f64; d * d];
    for i in 0..d {
        p[i * d + i] = 1.0;
    }
    let mut next = vec![0.0f64; d * d];
    let mut traces = Vec::with_capacity(max_len);
    for _ in 0..max_len {
        next.iter_mut().for_each(|x| *x = 0.0);
        for j in 0..d {
            for t in 0..d {
                let pv = p[j * d + t];
                if pv == 0.0 {
                    continue;
                }
                for &(i, v) in &m.cols[t] {
                    next[j * d + i as usize] += (v as f64 / scale) * pv;
                }
            }
        }
        std::mem::swap(&mut p, &mut next);
        traces.push((0..d).map(|i| p[i * d + i]).sum());
    }
    traces
}

fn validate_lengths(lengths: &[usize]) -> Result<usize> {
    if lengths.contains(&0) {
        return Err(Error::InvalidInput("path lengths must be ≥ 1".into()));
    }
    Ok(lengths.iter().copied().max().unwrap_or(0))
}

fn checked_index<C: Complex + ?Sized>(cx: &C, k: usize, guard: usize) -> Result<SimplexIndex> {
    if k == 0 {
        return Err(Error::InvalidInput(
            "trace and moment oracles require k ≥ 1".into(),
        ));
    }
    let index = cx.enumerate_k_simplices(k);
    if index.is_empty() {
        return Err(Error::InvalidInput(format!("complex has no {k}-simplices")));
    }
    check_guard(
        &format!("dense oracle dimension |S_{k}|"),
        index.len(),
        guard,
    )?;
    Ok(index)
}

/// tr(H^ℓ)/|S_k| for each requested ℓ, exactly (integer matrix powers; f64
/// only in the final division, or throughout if the integers overflow i128).
pub fn exact_normalized_traces<C: Complex + ?Sized>(
    cx: &C,
    k: usize,
    lengths: &[usize],
    guard: usize,
) -> Result<Vec<f64>> {
    let max_len = validate_lengths(lengths)?;
    let index = checked_index(cx, k, guard)?;
    if lengths.is_empty() {
        return Ok(Vec::new());
    }
    let m = scaled_h_columns(cx, &index)?;
    let n = cx.vertex_count() as f64;
    let s = index.len() as f64;
    match power_traces_exact(&m, max_len) {
        Some(traces) => Ok(lengths
            .iter()
            .map(|&l| traces[l - 1] as f64 / (n.powi(l as i32) * s))
            .collect()),
        None => {
            let traces = power_traces_float(&m, n, max_len);
            Ok(lengths.iter().map(|&l| traces[l - 1] / s).collect())
        }
    }
}

/// Single-length convenience for [`exact_normalized_traces`], default guard.
pub fn exact_normalized_trace<C: Complex + ?Sized>(cx: &C, k: usize, l: usize) -> Result<f64> {
    Ok(exact_normalized_traces(cx, k, &[l], DEFAULT_DENSE_GUARD)?[0])
}

/// E[f²] = tr(Q^ℓ)/|S_k| for each requested ℓ.
pub fn exact_second_moments<C: Complex + ?Sized>(
    cx: &C,
    k: usize,
    lengths: &[usize],
    guard: usize,
) -> Result<Vec<f64>> {
    let max_len = validate_lengths(lengths)?;
    let index = checked_index(cx, k, guard)?;
    if lengths.is_empty() {
        return Ok(Vec::new());
    }
    let m = transfer_columns(cx, &index)?;
    let n = cx.vertex_count() as f64;
    let s = index.len() as f64;
    match power_traces_exact(&m, max_len) {
        Some(traces) => Ok(lengths
            .iter()
            .map(|&l| traces[l - 1] as f64 / (n.powi(2 * l as i32) * s))
            .collect()),
        None => {
            let traces = power_traces_float(&m, n * n, max_len);
            Ok(lengths.iter().map(|&l| traces[l - 1] / s).collect())
        }
    }
}

/// Single-length convenience for [`exact_second_moments`], default guard.
pub fn exact_second_moment<C: Complex + ?Sized>(cx: &C, k: usize, l: usize) -> Result<f64> {
    Ok(exact_second_moments(cx, k, &[l], DEFAULT_DENSE_GUARD)?[0])
}

// ---------------------------------------------------------------------------
// Second-moment sandwich bounds
// ---------------------------------------------------------------------------

/// Per-column quantities the bounds are built from.
struct ColumnAggregates {
    n: usize,
    c_nums: Vec<u64>,
    d_up_max: usize,
    deg_min: usize,
    deg_max: usize,
}

fn column_aggregates<C: Complex + ?Sized>(
    cx: &C,
    k: usize,
    index: &SimplexIndex,
) -> Result<ColumnAggregates> {
    let n = cx.vertex_count();
    let mut c_nums = Vec::with_capacity(index.len());
    let mut d_up_max = 0;
    let mut deg_min = usize::MAX;
    let mut deg_max = 0;
    for sigma in index.iter() {
        let prof = transition_profile(cx, sigma)?;
        let d_up = n - k - 1 - prof.stay_weight as usize;
        d_up_max = d_up_max.max(d_up);
        deg_min = deg_min.min(prof.degree());
        deg_max = deg_max.max(prof.degree());
        c_nums.push(prof.total_weight);
    }
    Ok(ColumnAggregates {
        n,
        c_nums,
        d_up_max,
        deg_min,
        deg_max,
    })
}

/// The exact second moment and its bounds as integer numerators over the
/// common denominator n^(2ℓ)·|S_k|, so that lower ≤ second ≤ upper can be
/// checked by integer comparison with no rounding anywhere.
#[derive(Debug, Clone)]
pub struct ExactMoments {
    pub path_len: usize,
    /// (n − max d_up − k − 1)^ℓ · Σ_σ c_num(σ)^ℓ
    pub lower_num: BigInt,
    /// tr(Q̃^ℓ)
    pub second_num: BigInt,
    /// Σ_σ c_num(σ)^(2ℓ)
    pub upper_num: BigInt,
    /// n^(2ℓ) · |S_k|
    pub denominator: BigInt,
}

impl ExactMoments {
    fn ratio(&self, num: &BigInt) -> f64 {
        num.to_f64().unwrap_or(f64::INFINITY) / self.denominator.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn lower(&self) -> f64 {
        self.ratio(&self.lower_num)
    }

    pub fn second(&self) -> f64 {
        self.ratio(&self.second_num)
    }

    pub fn upper(&self) -> f64 {
        self.ratio(&self.upper_num)
    }
}

/// All-integer route to the sandwich; errors (rather than degrading to
/// floats) if the transfer-matrix power overflows i128.
pub fn exact_moment_numerators<C: Complex + ?Sized>(
    cx: &C,
    k: usize,
    l: usize,
    guard: usize,
) -> Result<ExactMoments> {
    validate_lengths(&[l])?;
    let index = checked_index(cx, k, guard)?;
    let agg = column_aggregates(cx, k, &index)?;
    let q = transfer_columns(cx, &index)?;
    let traces = power_traces_exact(&q, l).ok_or_else(|| {
        Error::Numeric(format!(
            "transfer-matrix power overflows 128-bit integers at ℓ = {l}"
        ))
    })?;
    let stay_min = BigInt::from((agg.n - agg.d_up_max - k - 1) as u64);
    let lower_num: BigInt = pow(stay_min, l)
        * agg
            .c_nums
            .iter()
            .map(|&c| pow(BigInt::from(c), l))
            .sum::<BigInt>();
    let upper_num: BigInt = agg
        .c_nums
        .iter()
        .map(|&c| pow(BigInt::from(c), 2 * l))
        .sum();
    let denominator = pow(BigInt::from(agg.n as u64), 2 * l) * BigInt::from(index.len() as u64);
    Ok(ExactMoments {
        path_len: l,
        lower_num,
        second_num: BigInt::from(traces[l - 1]),
        upper_num,
        denominator,
    })
}

/// The second-moment sandwich plus the coarser caps, as floats for
/// reporting. `lower ≤ exact_second_moment ≤ upper` always (the three values
/// share a denominator, so the float conversions preserve the ordering).
#[derive(Debug, Clone, Serialize)]
pub struct MomentBounds {
    pub l: usize,
    pub lower: f64,
    pub upper: f64,
    pub exact_second_moment: f64,
    /// Dimension-only cap (k+2)^(2ℓ), valid for any complex.
    pub cap_general: f64,
    /// Clique-complex cap 4^ℓ(1 − (k+1)/n)^(2ℓ); absent otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap_clique: Option<f64>,
    /// Indicative large-n growth forms built from the simplex-graph degree
    /// range (not finite-n bounds): (1 + Δ(S_k)/n)^(2ℓ) and (1 + δ(S_k)/n)^ℓ.
    pub asymptotic_upper: f64,
    pub asymptotic_lower: f64,
    pub max_up_degree: usize,
    pub min_simplex_degree: usize,
    pub max_simplex_degree: usize,
}

/// Sandwich bounds with the default dense guard.
pub fn variance_bounds<C: Complex + ?Sized>(cx: &C, k: usize, l: usize) -> Result<MomentBounds> {
    variance_bounds_guarded(cx, k, l, DEFAULT_DENSE_GUARD)
}

/// Sandwich bounds with an explicit guard.
pub fn variance_bounds_guarded<C: Complex + ?Sized>(
    cx: &C,
    k: usize,
    l: usize,
    guard: usize,
) -> Result<MomentBounds> {
    let moments = exact_moment_numerators(cx, k, l, guard)?;
    let index = cx.enumerate_k_simplices(k);
    let agg = column_aggregates(cx, k, &index)?;
    Ok(bounds_from(cx, k, &agg, &moments))
}

fn bounds_from<C: Complex + ?Sized>(
    cx: &C,
    k: usize,
    agg: &ColumnAggregates,
    moments: &ExactMoments,
) -> MomentBounds {
    let l = moments.path_len;
    let n = agg.n as f64;
    let cap_clique = if cx.is_clique_complex() {
        Some((2.0 * (1.0 - (k as f64 + 1.0) / n)).powi(2 * l as i32))
    } else {
        None
    };
    MomentBounds {
        l,
        lower: moments.lower(),
        upper: moments.upper(),
        exact_second_moment: moments.second(),
        cap_general: ((k as f64) + 2.0).powi(2 * l as i32),
        cap_clique,
        asymptotic_upper: (1.0 + agg.deg_max as f64 / n).powi(2 * l as i32),
        asymptotic_lower: (1.0 + agg.deg_min as f64 / n).powi(l as i32),
        max_up_degree: agg.d_up_max,
        min_simplex_degree: agg.deg_min,
        max_simplex_degree: agg.deg_max,
    }
}

// ---------------------------------------------------------------------------
// Brute-force path enumeration (cross-check only)
// ---------------------------------------------------------------------------

const ENUM_MAX_STATES: usize = 6;
const ENUM_MAX_LEN: usize = 4;

/// (E[f], E[f²]) by enumerating every length-ℓ kernel path with its exact
/// probability — an independent cross-check of the trace and transfer-matrix
/// routes, deliberately limited to tiny instances.
pub fn enumerate_path_moments<C: Complex + ?Sized>(
    cx: &C,
    k: usize,
    path_len: usize,
) -> Result<(f64, f64)> {
    validate_lengths(&[path_len])?;
    let index = checked_index(cx, k, DEFAULT_DENSE_GUARD)?;
    check_guard("path enumeration state count", index.len(), ENUM_MAX_STATES)?;
    check_guard("path enumeration length", path_len, ENUM_MAX_LEN)?;

    // Per state: (stay_weight, total_weight, column norm, moves as
    // (target index, sign)).
    struct State {
        stay: u64,
        total: u64,
        norm: f64,
        moves: Vec<(usize, i8)>,
    }
    let mut states = Vec::with_capacity(index.len());
    for sigma in index.iter() {
        let prof = transition_profile(cx, sigma)?;
        let moves = prof
            .neighbors
            .iter()
            .map(|(tau, sign)| {
                (
                    index
                        .position(tau)
                        .expect("every simplex-graph neighbor is an indexed k-simplex"),
                    *sign,
                )
            })
            .collect();
        states.push(State {
            stay: prof.stay_weight,
            total: prof.total_weight,
            norm: prof.column_norm(),
            moves,
        });
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        states: &[State],
        start: usize,
        state: usize,
        depth: usize,
        path_len: usize,
        prob: f64,
        sign: f64,
        magnitude: f64,
        sums: &mut (f64, f64),
    ) {
        if depth == path_len {
            if state == start {
                let f = sign * magnitude;
                sums.0 += prob * f;
                sums.1 += prob * f * f;
            }
            return;
        }
        let st = &states[state];
        let magnitude = magnitude * st.norm;
        let total = st.total as f64;
        if st.stay > 0 {
            recurse(
                states,
                start,
                state,
                depth + 1,
                path_len,
                prob * st.stay as f64 / total,
                sign,
                magnitude,
                sums,
            );
        }
        for &(target, step_sign) in &st.moves {
            recurse(
                states,
                start,
                target,
                depth + 1,
                path_len,
                prob / total,
                sign * step_sign as f64,
                magnitude,
                sums,
            );
        }
    }

    let mut sums = (0.0, 0.0);
    for start in 0..states.len() {
        if states[start].total == 0 {
            continue; // degenerate start contributes f = 0
        }
        recurse(&states, start, start, 0, path_len, 1.0, 1.0, 1.0, &mut sums);
    }
    let s = states.len() as f64;
    Ok((sums.0 / s, sums.1 / s))
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

/// Eigenvalues of Δ_k (ascending), the count below tolerance (must equal the
/// Betti number), and the spectral gap above it.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    pub nullity: usize,
    /// Smallest eigenvalue above the zero tolerance; None when Δ_k = 0.
    pub gap: Option<f64>,
    pub tolerance: f64,
}

/// Full spectrum of Δ_k by cyclic Jacobi rotations (off-diagonal Frobenius
/// norm driven below 1e-10 relative), with the default dense guard.
pub fn spectral_summary<C: Complex + ?Sized>(cx: &C, k: usize) -> Result<SpectralSummary> {
    spectral_summary_guarded(cx, k, DEFAULT_DENSE_GUARD)
}

/// `spectral_summary` with an explicit guard.
pub fn spectral_summary_guarded<C: Complex + ?Sized>(
    cx: &C,
    k: usize,
    guard: usize,
) -> Result<SpectralSummary> {
    let dense = assemble_laplacian_dense_guarded(cx, k, guard)?;
    let d = dense.dim();
    let a: Vec<f64> = dense.entries().iter().map(|&x| x as f64).collect();
    let mut eigenvalues = jacobi_eigenvalues(a, d)?;
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    let tolerance = NULLITY_TOLERANCE_FACTOR * cx.vertex_count() as f64;
    let nullity = eigenvalues.iter().filter(|&&e| e < tolerance).count();
    let gap = eigenvalues.iter().copied().find(|&e| e >= tolerance);
    Ok(SpectralSummary {
        eigenvalues,
        nullity,
        gap,
        tolerance,
    })
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigenvalue iteration for a symmetric matrix in row-major
/// storage. Converges when the off-diagonal Frobenius norm falls below
/// 1e-10 relative to the input norm.
fn jacobi_eigenvalues(mut a: Vec<f64>, d: usize) -> Result<Vec<f64>> {
    if d == 0 {
        return Ok(Vec::new());
    }
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = 1e-10 * frob.max(1.0);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    off += a[i * d + j] * a[i * d + j];
                }
            }
        }
        if off.sqrt() <= target {
            return Ok((0..d).map(|i| a[i * d + i]).collect());
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[p * d + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * d + q] - a[p * d + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let app = a[p * d + p];
                let aqq = a[q * d + q];
                a[p * d + p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a[q * d + q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a[p * d + q] = 0.0;
                a[q * d + p] = 0.0;
                for i in 0..d {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[i * d + p];
                    let aiq = a[i * d + q];
                    a[i * d + p] = c * aip - s * aiq;
                    a[i * d + q] = s * aip + c * aiq;
                    a[p * d + i] = a[i * d + p];
                    a[q * d + i] = a[i * d + q];
                }
            }
        }
    }
    Err(Error::Numeric(format!(
        "Jacobi eigenvalue iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps"
    )))
}

// ---------------------------------------------------------------------------
// Combined report
// ---------------------------------------------------------------------------

/// One path length's worth of exact results.
#[derive(Debug, Clone, Serialize)]
pub struct MomentRow {
    pub l: usize,
    pub normalized_trace: f64,
    pub second_moment: f64,
    pub bounds: MomentBounds,
}

/// Everything the oracle knows about one (complex, k) pair.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub k: usize,
    pub s_k: usize,
    pub clique: bool,
    pub betti: u64,
    pub normalized_betti: f64,
    pub moments: Vec<MomentRow>,
    pub spectrum: SpectralSummary,
}

/// Runs every oracle on one instance: Betti number, spectrum, and per-ℓ
/// traces, second moments, and bounds.
pub fn oracle_report<C: Complex + ?Sized>(
    cx: &C,
    k: usize,
    lengths: &[usize],
    guard: usize,
) -> Result<OracleReport> {
    let index = checked_index(cx, k, guard)?;
    let s_k = index.len();
    let betti = exact_betti_guarded(cx, k, guard)?;
    let traces = exact_normalized_traces(cx, k, lengths, guard)?;
    let agg = column_aggregates(cx, k, &index)?;
    let mut moments = Vec::with_capacity(lengths.len());
    for (&l, &trace) in lengths.iter().zip(&traces) {
        let exact = exact_moment_numerators(cx, k, l, guard)?;
        let bounds = bounds_from(cx, k, &agg, &exact);
        moments.push(MomentRow {
            l,
            normalized_trace: trace,
            second_moment: bounds.exact_second_moment,
            bounds,
        });
    }
    let spectrum = spectral_summary_guarded(cx, k, guard)?;
    Ok(OracleReport {
        n: cx.vertex_count(),
        k,
        s_k,
        clique: cx.is_clique_complex(),
        betti,
        normalized_betti: betti as f64 / s_k as f64,
        moments,
        spectrum,
    })
}
