//! The simplex random walk and its path functional.
//!
//! From a k-simplex σ the walk either stays put or moves to a simplex-graph
//! neighbor. All transition probabilities share the denominator
//! D(σ) = n + deg(σ) − d_up(σ) − k − 1 (the numerator of the column norm
//! ‖H|σ⟩‖₁ over n): staying has weight n − d_up(σ) − k − 1 and each of the
//! deg(σ) neighbors has weight 1, which is exactly the column-normalized
//! magnitude |H[τ,σ]| / ‖H|σ⟩‖₁ of the walk matrix H = I − Δ_k/n.
//!
//! A length-ℓ path σ₀ → … → σ_ℓ scores
//!
//! f = [σ_ℓ = σ₀] · Π_{i=0}^{ℓ−1} sign(H[σ_{i+1}, σ_i]) · ‖H|σ_i⟩‖₁,
//!
//! whose expectation over a uniform start and the kernel above is
//! tr(H^ℓ)/|S_k|. Transition draws use integer dice over D(σ), so the kernel
//! probabilities are realized exactly, never through floating point.

use rand::Rng;

use crate::complex::{Complex, Simplex};
use crate::{Error, Result};

/// Parameters of one walk: simplex dimension, path length ℓ ≥ 1, and the
/// master seed callers derive their RNG streams from.
#[derive(Debug, Clone, Copy)]
pub struct WalkConfig {
    pub k: usize,
    pub path_len: usize,
    pub seed: u64,
}

impl WalkConfig {
    pub fn new(k: usize, path_len: usize) -> WalkConfig {
        WalkConfig {
            k,
            path_len,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidInput("walks require k ≥ 1".into()));
        }
        if self.path_len == 0 {
            return Err(Error::InvalidInput("path length ℓ must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// The exact one-step transition law out of a simplex. All probabilities are
/// integer weights over `total_weight`; they sum to 1 exactly by
/// construction (`stay_weight + neighbors.len() == total_weight`).
#[derive(Debug, Clone)]
pub struct TransitionProfile {
    /// Ambient vertex count n (denominator of the column norm).
    pub n: u64,
    /// Weight of staying put: n − d_up(σ) − k − 1.
    pub stay_weight: u64,
    /// Common denominator D(σ) = n + deg(σ) − d_up(σ) − k − 1; also the
    /// numerator of ‖H|σ⟩‖₁ over n.
    pub total_weight: u64,
    /// Move targets with the sign of their H entry, in neighbor-scan order.
    pub neighbors: Vec<(Simplex, i8)>,
}

impl TransitionProfile {
    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }

    /// A zero column: the walk cannot leave (or meaningfully stay); any path
    /// started here scores 0.
    pub fn is_degenerate(&self) -> bool {
        self.total_weight == 0
    }

    pub fn stay_prob(&self) -> f64 {
        if self.total_weight == 0 {
            0.0
        } else {
            self.stay_weight as f64 / self.total_weight as f64
        }
    }

    pub fn move_prob_each(&self) -> f64 {
        if self.total_weight == 0 {
            0.0
        } else {
            1.0 / self.total_weight as f64
        }
    }

    /// ‖H|σ⟩‖₁ = total_weight / n.
    pub fn column_norm(&self) -> f64 {
        self.total_weight as f64 / self.n as f64
    }
}

/// Computes the transition law out of a member k-simplex (k ≥ 1) by one local
/// scan: up-degree, simplex-graph neighbors, and the induced signs.
pub fn transition_profile<C: Complex + ?Sized>(
    cx: &C,
    sigma: &Simplex,
) -> Result<TransitionProfile> {
    let k = sigma.dim();
    if k == 0 {
        return Err(Error::InvalidInput("walks require k ≥ 1".into()));
    }
    let n = cx.vertex_count() as u64;
    let d_up = cx.up_degree(sigma)? as u64;
    let neighbors: Vec<(Simplex, i8)> = cx
        .simplex_graph_neighbors(sigma)?
        .into_iter()
        .map(|nb| {
            let sign = nb.h_sign();
            (nb.simplex, sign)
        })
        .collect();
    // d_up ≤ n − k − 1: every coface needs an outside vertex.
    let stay_weight = n - d_up - k as u64 - 1;
    let total_weight = stay_weight + neighbors.len() as u64;
    Ok(TransitionProfile {
        n,
        stay_weight,
        total_weight,
        neighbors,
    })
}

/// One sampled path and its functional value.
#[derive(Debug, Clone)]
pub struct PathSample {
    pub start: Simplex,
    pub end: Simplex,
    pub length: usize,
    pub f_value: f64,
    pub closed: bool,
}

/// One line of a path trace: the state before step `index`, the sign the
/// step contributed, and the column norm folded into |f|.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub index: usize,
    pub simplex: Simplex,
    pub sign: i8,
    pub column_norm: f64,
}

/// Samples one path of length `cfg.path_len` from `start`, consuming exactly
/// the transition dice from `rng`. A degenerate start (zero column norm)
/// returns f = 0 immediately without taking steps.
pub fn sample_path<C: Complex + ?Sized, R: Rng>(
    cx: &C,
    cfg: &WalkConfig,
    start: &Simplex,
    rng: &mut R,
) -> Result<PathSample> {
    sample_path_inner(cx, cfg, start, rng, None)
}

/// Like [`sample_path`], also appending one [`TraceStep`] per step taken.
pub fn sample_path_traced<C: Complex + ?Sized, R: Rng>(
    cx: &C,
    cfg: &WalkConfig,
    start: &Simplex,
    rng: &mut R,
    trace: &mut Vec<TraceStep>,
) -> Result<PathSample> {
    sample_path_inner(cx, cfg, start, rng, Some(trace))
}

fn sample_path_inner<C: Complex + ?Sized, R: Rng>(
    cx: &C,
    cfg: &WalkConfig,
    start: &Simplex,
    rng: &mut R,
    mut trace: Option<&mut Vec<TraceStep>>,
) -> Result<PathSample> {
    cfg.validate()?;
    if start.dim() != cfg.k {
        return Err(Error::InvalidInput(format!(
            "start {start} has dimension {}, expected k = {}",
            start.dim(),
            cfg.k
        )));
    }
    let mut profile = transition_profile(cx, start)?;
    if profile.is_degenerate() {
        return Ok(PathSample {
            start: start.clone(),
            end: start.clone(),
            length: 0,
            f_value: 0.0,
            closed: true,
        });
    }

    let mut current = start.clone();
    let mut magnitude = 1.0f64;
    let mut negative = false;
    for index in 0..cfg.path_len {
        // Column norms enter the product for states σ_0 .. σ_{ℓ−1} only.
        magnitude *= profile.column_norm();
        let roll = rng.random_range(0..profile.total_weight);
        let mut step_sign: i8 = 1; // H diagonal entries are nonnegative
        let mut target = None;
        if roll >= profile.stay_weight {
            let (tau, sign) = &profile.neighbors[(roll - profile.stay_weight) as usize];
            step_sign = *sign;
            target = Some(tau.clone());
        }
        if let Some(t) = trace.as_deref_mut() {
            // One line per step: the departure state σ_i and what the step
            // contributed to f.
            t.push(TraceStep {
                index,
                simplex: current.clone(),
                sign: step_sign,
                column_norm: profile.column_norm(),
            });
        }
        if let Some(tau) = target {
            if step_sign < 0 {
                negative = !negative;
            }
            current = tau;
            if index + 1 < cfg.path_len {
                profile = transition_profile(cx, &current)?;
                if profile.is_degenerate() {
                    // Unreachable for symmetric H: any state with an inbound
                    // transition has a nonzero column.
                    return Err(Error::Numeric(format!(
                        "walk moved into degenerate column at {current}"
                    )));
                }
            }
        }
    }

    let closed = current == *start;
    let f_value = if closed {
        if negative {
            -magnitude
        } else {
            magnitude
        }
    } else {
        0.0
    };
    Ok(PathSample {
        start: start.clone(),
        end: current,
        length: cfg.path_len,
        f_value,
        closed,
    })
}

/// Evaluates the path functional for an explicit state sequence and the signs
/// of its steps: [closed] · Π sign_i · ‖H|σ_i⟩‖₁ over i = 0..ℓ−1. States and
/// signs must satisfy `states.len() == signs.len() + 1`.
pub fn evaluate_f<C: Complex + ?Sized>(cx: &C, states: &[Simplex], signs: &[i8]) -> Result<f64> {
    if states.len() != signs.len() + 1 || signs.is_empty() {
        return Err(Error::InvalidInput(format!(
            "need ℓ+1 states for ℓ ≥ 1 signs, got {} states and {} signs",
            states.len(),
            signs.len()
        )));
    }
    let closed = states.first() == states.last();
    let mut value = 1.0f64;
    for (sigma, &sign) in states[..states.len() - 1].iter().zip(signs) {
        let norm = crate::laplacian::column_one_norm(cx, sigma)?;
        value *= sign as f64 * norm.to_f64();
    }
    Ok(if closed { value } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{
        generate_complete_partite, generate_disjoint_cliques, CliqueComplex, Graph, Simplex,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn simplex(vs: &[u32]) -> Simplex {
        Simplex::new(vs.to_vec()).unwrap()
    }

    fn k3() -> CliqueComplex {
        let mut g = Graph::new(3);
        for (u, v) in [(0, 1), (0, 2), (1, 2)] {
            g.add_edge(u, v).unwrap();
        }
        CliqueComplex::new(g)
    }

    /// K_{2,2} with parts {0,2} and {1,3}.
    fn c4() -> CliqueComplex {
        let mut g = Graph::new(4);
        for (u, v) in [(0, 1), (0, 3), (1, 2), (2, 3)] {
            g.add_edge(u, v).unwrap();
        }
        CliqueComplex::new(g)
    }

    #[test]
    fn profile_weights_sum_exactly() {
        let oct = generate_complete_partite(2, 2).unwrap();
        let p = transition_profile(&oct, &simplex(&[0, 2, 4])).unwrap();
        // n = 6, d_up = 0, k = 2, deg = 3: stay 3/6, move 1/6 each.
        assert_eq!((p.stay_weight, p.total_weight, p.degree()), (3, 6, 3));
        assert_eq!(p.stay_weight + p.degree() as u64, p.total_weight);
        assert_eq!(p.stay_prob() + 3.0 * p.move_prob_each(), 1.0);
        assert_eq!(p.column_norm(), 1.0);
    }

    #[test]
    fn degenerate_column_on_k3() {
        let p = transition_profile(&k3(), &simplex(&[0, 1])).unwrap();
        assert!(p.is_degenerate());
        assert_eq!(p.total_weight, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = sample_path(&k3(), &WalkConfig::new(1, 5), &simplex(&[0, 1]), &mut rng).unwrap();
        assert_eq!(s.f_value, 0.0);
        assert!(s.closed);
        assert_eq!(s.length, 0);
    }

    #[test]
    fn stay_only_walk_is_deterministic() {
        // Disjoint triangles: no neighbors, d_up = 0, so the walk never moves
        // and every path scores (1 − (k+1)/n)^ℓ exactly.
        let two = generate_disjoint_cliques(2, 2).unwrap();
        let cfg = WalkConfig::new(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..32 {
            let s = sample_path(&two, &cfg, &simplex(&[0, 1, 2]), &mut rng).unwrap();
            assert!(s.closed);
            assert_eq!(s.f_value, 0.125);
        }
    }

    #[test]
    fn c4_paths_score_plus_minus_powers_or_zero() {
        let c4 = c4();
        let cfg = WalkConfig::new(1, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen_closed = false;
        for _ in 0..200 {
            let s = sample_path(&c4, &cfg, &simplex(&[0, 1]), &mut rng).unwrap();
            if s.closed {
                seen_closed = true;
                // Column norms are all 1, so |f| = 1; two-step returns are
                // either two stays (+·+) or an out-and-back (−·−).
                assert_eq!(s.f_value, 1.0);
            } else {
                assert_eq!(s.f_value, 0.0);
            }
        }
        assert!(seen_closed);
    }

    #[test]
    fn evaluate_f_on_explicit_paths() {
        let c4 = c4();
        // Closed 2-step path {0,1} → {0,3} → {0,1}: both hops flip sign.
        let states = vec![simplex(&[0, 1]), simplex(&[0, 3]), simplex(&[0, 1])];
        let f = evaluate_f(&c4, &states, &[-1, -1]).unwrap();
        assert_eq!(f, 1.0);
        // Open path scores zero regardless of signs.
        let open = vec![simplex(&[0, 1]), simplex(&[0, 3]), simplex(&[2, 3])];
        assert_eq!(evaluate_f(&c4, &open, &[-1, -1]).unwrap(), 0.0);
        // Mismatched lengths are an input error.
        assert!(evaluate_f(&c4, &states, &[-1]).is_err());
    }

    #[test]
    fn trace_records_one_line_per_step() {
        let two = generate_disjoint_cliques(2, 2).unwrap();
        let cfg = WalkConfig::new(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut trace = Vec::new();
        let s = sample_path_traced(&two, &cfg, &simplex(&[0, 1, 2]), &mut rng, &mut trace).unwrap();
        assert_eq!(trace.len(), 4);
        assert!(trace.iter().all(|t| t.sign == 1 && t.column_norm == 0.5));
        assert_eq!(s.f_value, 0.0625);
    }

    #[test]
    fn rejects_bad_configs() {
        let c4 = c4();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_path(&c4, &WalkConfig::new(1, 0), &simplex(&[0, 1]), &mut rng).is_err());
        assert!(sample_path(&c4, &WalkConfig::new(2, 3), &simplex(&[0, 1]), &mut rng).is_err());
        assert!(transition_profile(&c4, &simplex(&[0])).is_err());
    }
}
