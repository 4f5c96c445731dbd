//! The two Monte Carlo estimators of the normalized Laplacian trace
//! tr(H^ℓ)/|S_k| (and thereby of the normalized Betti number β_k/|S_k|).
//!
//! Both draw uniform start simplices and average the walk functional f:
//!
//! - [`cbne`]: sizes the path count from the worst-case bound |f| ≤ C^ℓ, with
//!   C = 2 on clique complexes and C = n otherwise, taking
//!   N_p = ⌈ln(2/η) · ε⁻² · C^(2ℓ)⌉ paths for an additive-ε guarantee with
//!   failure probability η.
//! - [`cbne_var`]: first probes N_s = ⌈C^(4ℓ/3) · ε^(−4/3) · η^(−2/3)⌉ column
//!   norms to estimate the second-moment proxy V̂ = mean ‖H|σ⟩‖₁^(2ℓ), then
//!   takes N_p = ⌈(V̂ + C^(2ℓ)/√N_s) / (η ε²)⌉ paths. On easy instances the
//!   probe collapses the path budget by orders of magnitude while keeping the
//!   same (ε, η) contract.
//!
//! Determinism: every random draw flows from the master seed through
//! per-worker ChaCha substreams (stream id = phase << 32 | worker), and
//! worker accumulators merge in worker order, so results are bit-reproducible
//! for a fixed (seed, workers) pair.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::laplacian::column_one_norm;
use crate::stats::Welford;
use crate::walk::{sample_path, sample_path_traced, WalkConfig};
use crate::{Error, Result};

/// Runs abort (resource error) when a computed sample count exceeds this,
/// unless the caller overrides the budget.
pub const DEFAULT_SAMPLE_BUDGET: u64 = 1_000_000_000;

const PROBE_PHASE: u64 = 1;
const PATH_PHASE: u64 = 2;

/// Estimator parameters. `eps` is the additive accuracy target, `eta` the
/// allowed failure probability.
#[derive(Debug, Clone, Copy)]
pub struct EstimateConfig {
    pub k: usize,
    pub path_len: usize,
    pub eps: f64,
    pub eta: f64,
    pub seed: u64,
    pub workers: usize,
    pub budget: u64,
    /// Debug aid: worker 0 dumps the steps of its first `trace_paths` paths
    /// to stderr.
    pub trace_paths: usize,
}

impl EstimateConfig {
    pub fn new(k: usize, path_len: usize, eps: f64, eta: f64) -> EstimateConfig {
        EstimateConfig {
            k,
            path_len,
            eps,
            eta,
            seed: 0,
            workers: 1,
            budget: DEFAULT_SAMPLE_BUDGET,
            trace_paths: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidInput("estimators require k ≥ 1".into()));
        }
        if self.path_len == 0 {
            return Err(Error::InvalidInput("path length ℓ must be ≥ 1".into()));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "accuracy eps must be in (0, 1], got {}",
                self.eps
            )));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::InvalidInput(format!(
                "failure probability eta must be in (0, 1), got {}",
                self.eta
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidInput("workers must be ≥ 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "cbne")]
    Cbne,
    #[serde(rename = "cbne-var")]
    CbneVar,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Cbne => "cbne",
            Algorithm::CbneVar => "cbne-var",
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algorithm> {
        match s {
            "cbne" => Ok(Algorithm::Cbne),
            "cbne-var" => Ok(Algorithm::CbneVar),
            other => Err(Error::InvalidInput(format!(
                "unknown algorithm {other:?} (expected cbne or cbne-var)"
            ))),
        }
    }
}

/// Outcome of one estimator run. Serializes to the flat JSON object the CLI
/// prints; `elapsed_ms` is populated only when timing output is requested,
/// keeping default output byte-reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateResult {
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub eps: f64,
    pub eta: f64,
    pub c: u64,
    pub n_s: u64,
    pub n_p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_hat: Option<f64>,
    pub estimate: f64,
    pub empirical_variance: f64,
    pub seed: u64,
    pub workers: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// The worst-case bound C on the walk column norms: 2 for clique complexes
/// (their column norms never exceed 2), n in general.
pub fn norm_bound<C: Complex + ?Sized>(cx: &C) -> u64 {
    if cx.is_clique_complex() {
        2
    } else {
        cx.vertex_count() as u64
    }
}

/// Rounds a computed sample count up to an integer. Counts whose exact value
/// is an integer (like the C = 2, ε = η = 0.1 reference points) must not be
/// inflated by float noise, so values within 1e-9 relative of an integer snap
/// to it before the ceiling. Saturates at u128::MAX for astronomically large
/// requests, which the budget check then rejects.
fn ceil_count(x: f64) -> u128 {
    debug_assert!(x >= 0.0);
    let nearest = x.round();
    let snapped = if (x - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) {
        nearest
    } else {
        x.ceil()
    };
    snapped as u128
}

fn check_accuracy(eps: f64, eta: f64, path_len: usize, c: u64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) || !(eta > 0.0 && eta < 1.0) || path_len == 0 || c == 0 {
        return Err(Error::InvalidInput(format!(
            "need eps in (0,1], eta in (0,1), ℓ ≥ 1, C ≥ 1; got eps={eps}, eta={eta}, ℓ={path_len}, C={c}"
        )));
    }
    Ok(())
}

/// Path count of the baseline estimator: ⌈ln(2/η) · ε⁻² · C^(2ℓ)⌉.
pub fn sample_count_cbne(eps: f64, eta: f64, path_len: usize, c: u64) -> Result<u128> {
    check_accuracy(eps, eta, path_len, c)?;
    let c_pow = (c as f64).powi(2 * path_len as i32);
    Ok(ceil_count((2.0 / eta).ln() / (eps * eps) * c_pow))
}

/// Probe count of the variance-adaptive estimator:
/// ⌈C^(4ℓ/3) · ε^(−4/3) · η^(−2/3)⌉.
pub fn sample_count_probe(eps: f64, eta: f64, path_len: usize, c: u64) -> Result<u128> {
    check_accuracy(eps, eta, path_len, c)?;
    let x =
        (c as f64).powf(4.0 * path_len as f64 / 3.0) * eps.powf(-4.0 / 3.0) * eta.powf(-2.0 / 3.0);
    Ok(ceil_count(x))
}

/// Path count after the probe: ⌈(V̂ + C^(2ℓ)/√N_s) / (η ε²)⌉. The padding
/// term covers the probe's own estimation error.
pub fn sample_count_padded(
    eps: f64,
    eta: f64,
    path_len: usize,
    c: u64,
    v_hat: f64,
    n_s: u64,
) -> u128 {
    let pad = (c as f64).powi(2 * path_len as i32) / (n_s as f64).sqrt();
    ceil_count((v_hat + pad) / (eta * eps * eps))
}

/// One deterministic per-worker substream for path sampling.
pub fn path_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    worker_rng(seed, PATH_PHASE, worker)
}

/// One deterministic per-worker substream for the column-norm probe
/// (disjoint from the path streams).
pub fn probe_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    worker_rng(seed, PROBE_PHASE, worker)
}

fn worker_rng(seed: u64, phase: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(phase << 32 | worker as u64);
    rng
}

fn split_quota(total: u64, workers: usize) -> Vec<u64> {
    let w = workers as u64;
    let base = total / w;
    let rem = total % w;
    (0..workers)
        .map(|i| base + u64::from((i as u64) < rem))
        .collect()
}

/// Runs `job(worker, quota)` for each worker (threaded when workers > 1) and
/// returns the results in worker order.
fn run_workers<T, F>(workers: usize, total: u64, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, u64) -> Result<T> + Sync,
{
    if workers == 1 {
        return Ok(vec![job(0, total)?]);
    }
    let quotas = split_quota(total, workers);
    let results: Vec<Result<T>> = std::thread::scope(|scope| {
        let handles: Vec<_> = quotas
            .iter()
            .enumerate()
            .map(|(w, &quota)| {
                let job = &job;
                scope.spawn(move || job(w, quota))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("estimator worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}

fn check_budget(what: &str, requested: u128, budget: u64) -> Result<u64> {
    if requested > budget as u128 {
        return Err(Error::Resource {
            what: what.into(),
            requested,
            limit: budget as u128,
        });
    }
    Ok(requested as u64)
}

/// Draws `count` uniform starts from `index` and averages the path
/// functional, split over worker substreams.
fn run_paths<C: Complex + ?Sized>(
    cx: &C,
    cfg: &EstimateConfig,
    index: &crate::complex::SimplexIndex,
    count: u64,
) -> Result<Welford> {
    let walk_cfg = WalkConfig {
        k: cfg.k,
        path_len: cfg.path_len,
        seed: cfg.seed,
    };
    let len = index.len() as u64;
    let parts = run_workers(cfg.workers, count, |worker, quota| {
        let mut rng = path_rng(cfg.seed, worker);
        let mut acc = Welford::new();
        for i in 0..quota {
            let start = index.get(rng.random_range(0..len) as usize);
            let f = if worker == 0 && (i as usize) < cfg.trace_paths {
                let mut steps = Vec::new();
                let sample = sample_path_traced(cx, &walk_cfg, start, &mut rng, &mut steps)?;
                for s in &steps {
                    eprintln!(
                        "trace path={} step={} simplex={} sign={:+} column_norm={}",
                        i, s.index, s.simplex, s.sign, s.column_norm
                    );
                }
                eprintln!(
                    "trace path={} f={} closed={}",
                    i, sample.f_value, sample.closed
                );
                sample.f_value
            } else {
                sample_path(cx, &walk_cfg, start, &mut rng)?.f_value
            };
            acc.push(f);
        }
        Ok(acc)
    })?;
    let mut merged = Welford::new();
    for p in &parts {
        merged.merge(p);
    }
    Ok(merged)
}

/// Mean of ‖H|σ⟩‖₁^(2ℓ) over `n_s` uniform simplex draws from the caller's
/// RNG — the probe quantity V̂ of the variance-adaptive estimator.
pub fn estimate_variance_bound<C: Complex + ?Sized, R: Rng>(
    cx: &C,
    cfg: &EstimateConfig,
    n_s: u64,
    rng: &mut R,
) -> Result<f64> {
    cfg.validate()?;
    let index = cx.enumerate_k_simplices(cfg.k);
    if index.is_empty() {
        return Err(Error::InvalidInput(format!(
            "complex has no {}-simplices",
            cfg.k
        )));
    }
    let powered = powered_column_norms(cx, &index, cfg.path_len)?;
    let mut acc = Welford::new();
    let len = index.len() as u64;
    for _ in 0..n_s {
        acc.push(powered[rng.random_range(0..len) as usize]);
    }
    Ok(acc.mean())
}

/// Precomputes ‖H|σ⟩‖₁^(2ℓ) for every indexed simplex (the probe only ever
/// looks values up, so the scan runs once per simplex, not per draw).
fn powered_column_norms<C: Complex + ?Sized>(
    cx: &C,
    index: &crate::complex::SimplexIndex,
    path_len: usize,
) -> Result<Vec<f64>> {
    index
        .iter()
        .map(|sigma| {
            let norm = column_one_norm(cx, sigma)?;
            Ok(norm.to_f64().powi(2 * path_len as i32))
        })
        .collect()
}

/// The baseline estimator: worst-case path count, no probe.
pub fn cbne<C: Complex + ?Sized>(cx: &C, cfg: &EstimateConfig) -> Result<EstimateResult> {
    cfg.validate()?;
    let start = Instant::now();
    let index = cx.enumerate_k_simplices(cfg.k);
    if index.is_empty() {
        return Err(Error::InvalidInput(format!(
            "complex has no {}-simplices",
            cfg.k
        )));
    }
    let c = norm_bound(cx);
    let requested = sample_count_cbne(cfg.eps, cfg.eta, cfg.path_len, c)?;
    let n_p = check_budget("path sample count N_p", requested, cfg.budget)?;
    let acc = run_paths(cx, cfg, &index, n_p)?;
    Ok(result_from(
        cfg,
        cx.vertex_count(),
        Algorithm::Cbne,
        c,
        0,
        n_p,
        None,
        acc,
        start,
    ))
}

/// The variance-adaptive estimator: probe column norms, then walk.
pub fn cbne_var<C: Complex + ?Sized>(cx: &C, cfg: &EstimateConfig) -> Result<EstimateResult> {
    cfg.validate()?;
    let start = Instant::now();
    let index = cx.enumerate_k_simplices(cfg.k);
    if index.is_empty() {
        return Err(Error::InvalidInput(format!(
            "complex has no {}-simplices",
            cfg.k
        )));
    }
    let c = norm_bound(cx);
    let requested_probe = sample_count_probe(cfg.eps, cfg.eta, cfg.path_len, c)?;
    let n_s = check_budget("probe sample count N_s", requested_probe, cfg.budget)?;

    let powered = powered_column_norms(cx, &index, cfg.path_len)?;
    let len = index.len() as u64;
    let probe_parts = run_workers(cfg.workers, n_s, |worker, quota| {
        let mut rng = probe_rng(cfg.seed, worker);
        let mut acc = Welford::new();
        for _ in 0..quota {
            acc.push(powered[rng.random_range(0..len) as usize]);
        }
        Ok(acc)
    })?;
    let mut probe = Welford::new();
    for p in &probe_parts {
        probe.merge(p);
    }
    let v_hat = probe.mean();

    let requested_paths = sample_count_padded(cfg.eps, cfg.eta, cfg.path_len, c, v_hat, n_s);
    let n_p = check_budget("path sample count N_p", requested_paths, cfg.budget)?;
    let acc = run_paths(cx, cfg, &index, n_p)?;
    Ok(result_from(
        cfg,
        cx.vertex_count(),
        Algorithm::CbneVar,
        c,
        n_s,
        n_p,
        Some(v_hat),
        acc,
        start,
    ))
}

#[allow(clippy::too_many_arguments)]
fn result_from(
    cfg: &EstimateConfig,
    n: usize,
    algorithm: Algorithm,
    c: u64,
    n_s: u64,
    n_p: u64,
    v_hat: Option<f64>,
    acc: Welford,
    start: Instant,
) -> EstimateResult {
    EstimateResult {
        algorithm,
        n,
        k: cfg.k,
        l: cfg.path_len,
        eps: cfg.eps,
        eta: cfg.eta,
        c,
        n_s,
        n_p,
        v_hat,
        estimate: acc.mean(),
        empirical_variance: acc.sample_variance(),
        seed: cfg.seed,
        workers: cfg.workers,
        elapsed_ms: None,
        elapsed: start.elapsed(),
    }
}

/// Summary statistics of the raw path functional over `n_paths` draws, for
/// calibration tests: mean and variance of f and of f².
#[derive(Debug, Clone, Copy)]
pub struct PathStats {
    pub paths: u64,
    pub mean_f: f64,
    pub variance_f: f64,
    pub std_error_f: f64,
    pub mean_f_sq: f64,
    pub variance_f_sq: f64,
}

/// Samples `n_paths` paths (same substream layout as the estimators) and
/// reports moments of f and f².
pub fn path_statistics<C: Complex + ?Sized>(
    cx: &C,
    k: usize,
    path_len: usize,
    n_paths: u64,
    seed: u64,
    workers: usize,
) -> Result<PathStats> {
    let cfg = EstimateConfig {
        seed,
        workers,
        ..EstimateConfig::new(k, path_len, 1.0, 0.5)
    };
    cfg.validate()?;
    let index = cx.enumerate_k_simplices(k);
    if index.is_empty() {
        return Err(Error::InvalidInput(format!("complex has no {k}-simplices")));
    }
    let walk_cfg = WalkConfig { k, path_len, seed };
    let len = index.len() as u64;
    let parts = run_workers(workers, n_paths, |worker, quota| {
        let mut rng = path_rng(seed, worker);
        let mut acc_f = Welford::new();
        let mut acc_f2 = Welford::new();
        for _ in 0..quota {
            let start = index.get(rng.random_range(0..len) as usize);
            let f = sample_path(cx, &walk_cfg, start, &mut rng)?.f_value;
            acc_f.push(f);
            acc_f2.push(f * f);
        }
        Ok((acc_f, acc_f2))
    })?;
    let mut f = Welford::new();
    let mut f2 = Welford::new();
    for (a, b) in &parts {
        f.merge(a);
        f2.merge(b);
    }
    Ok(PathStats {
        paths: f.count(),
        mean_f: f.mean(),
        variance_f: f.sample_variance(),
        std_error_f: (f.sample_variance() / f.count().max(1) as f64).sqrt(),
        mean_f_sq: f2.mean(),
        variance_f_sq: f2.sample_variance(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{
        generate_complete_partite, generate_disjoint_cliques, CliqueComplex, ExplicitComplex, Graph,
    };

    fn k3() -> CliqueComplex {
        let mut g = Graph::new(3);
        for (u, v) in [(0, 1), (0, 2), (1, 2)] {
            g.add_edge(u, v).unwrap();
        }
        CliqueComplex::new(g)
    }

    fn c4() -> CliqueComplex {
        generate_complete_partite(1, 2).unwrap()
    }

    #[test]
    fn norm_bounds() {
        assert_eq!(norm_bound(&c4()), 2);
        let hollow =
            ExplicitComplex::from_maximal(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        assert_eq!(norm_bound(&hollow), 3);
    }

    #[test]
    fn sample_count_reference_points() {
        assert_eq!(sample_count_cbne(0.1, 0.1, 3, 2).unwrap(), 19173);
        assert_eq!(sample_count_cbne(0.1, 0.1, 1, 2).unwrap(), 1199);
        assert_eq!(sample_count_cbne(0.5, 0.5, 1, 3).unwrap(), 50);
        assert!(sample_count_cbne(0.0, 0.1, 1, 2).is_err());
        assert!(sample_count_cbne(0.1, 1.0, 1, 2).is_err());
    }

    #[test]
    fn probe_and_padded_counts() {
        assert_eq!(sample_count_probe(0.1, 0.1, 3, 2).unwrap(), 1600);
        // V̂ = 1 (all column norms 1 on C4): padding 64/40 = 1.6.
        assert_eq!(sample_count_padded(0.1, 0.1, 3, 2, 1.0, 1600), 2600);
        // Disjoint triangles at ℓ = 3: V̂ = (1/2)^6.
        assert_eq!(sample_count_padded(0.1, 0.1, 3, 2, 0.015625, 1600), 1616);
    }

    #[test]
    fn huge_requests_hit_the_budget() {
        // Explicit complex: C = n = 30 makes ℓ = 5 astronomically expensive.
        let maximal: Vec<Vec<u32>> = (0..10).map(|i| vec![3 * i, 3 * i + 1, 3 * i + 2]).collect();
        let cx = ExplicitComplex::from_maximal(30, maximal).unwrap();
        let cfg = EstimateConfig::new(1, 5, 0.1, 0.1);
        let err = cbne(&cx, &cfg).unwrap_err();
        match err {
            Error::Resource {
                requested, limit, ..
            } => {
                assert!(requested > limit);
                assert_eq!(limit, DEFAULT_SAMPLE_BUDGET as u128);
            }
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_complex_estimates_zero_exactly() {
        let cfg = EstimateConfig::new(1, 2, 0.25, 0.25);
        let r = cbne(&k3(), &cfg).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.empirical_variance, 0.0);
        assert_eq!(r.n_s, 0);
        assert!(r.v_hat.is_none());
    }

    #[test]
    fn stay_only_fixture_is_exact_with_zero_variance() {
        let two = generate_disjoint_cliques(2, 2).unwrap();
        let cfg = EstimateConfig::new(2, 3, 0.3, 0.3);
        for workers in [1, 4] {
            let r = cbne_var(&two, &EstimateConfig { workers, ..cfg }).unwrap();
            assert_eq!(r.estimate, 0.125, "workers={workers}");
            assert_eq!(r.empirical_variance, 0.0);
            assert_eq!(r.v_hat, Some(0.015625), "V̂ = (1/2)^(2ℓ) exactly");
        }
    }

    #[test]
    fn v_hat_is_one_on_c4() {
        let cfg = EstimateConfig::new(1, 3, 0.1, 0.1);
        let r = cbne_var(&c4(), &cfg).unwrap();
        assert_eq!(r.v_hat, Some(1.0));
        assert_eq!(r.n_s, 1600);
        assert_eq!(r.n_p, 2600);
    }

    #[test]
    fn same_seed_same_workers_reproduces_bitwise() {
        let cfg = EstimateConfig {
            seed: 42,
            workers: 4,
            ..EstimateConfig::new(1, 4, 0.2, 0.2)
        };
        let a = cbne(&c4(), &cfg).unwrap();
        let b = cbne(&c4(), &cfg).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(
            a.empirical_variance.to_bits(),
            b.empirical_variance.to_bits()
        );
        let va = cbne_var(&c4(), &cfg).unwrap();
        let vb = cbne_var(&c4(), &cfg).unwrap();
        assert_eq!(va.estimate.to_bits(), vb.estimate.to_bits());
        assert_eq!(va.v_hat.unwrap().to_bits(), vb.v_hat.unwrap().to_bits());
    }

    #[test]
    fn estimate_is_the_streaming_mean_of_sampled_paths() {
        // Reconstruct worker 0's stream by hand; with one worker the
        // estimator must produce exactly the same running mean.
        let c4 = c4();
        let cfg = EstimateConfig {
            seed: 9,
            ..EstimateConfig::new(1, 3, 0.4, 0.4)
        };
        let r = cbne(&c4, &cfg).unwrap();
        let index = c4.enumerate_k_simplices(1);
        let walk_cfg = WalkConfig {
            k: 1,
            path_len: 3,
            seed: 9,
        };
        let mut rng = path_rng(9, 0);
        let mut acc = Welford::new();
        for _ in 0..r.n_p {
            let start = index.get(rng.random_range(0..index.len() as u64) as usize);
            acc.push(
                sample_path(&c4, &walk_cfg, start, &mut rng)
                    .unwrap()
                    .f_value,
            );
        }
        assert_eq!(acc.mean().to_bits(), r.estimate.to_bits());
        assert_eq!(
            acc.sample_variance().to_bits(),
            r.empirical_variance.to_bits()
        );
    }

    #[test]
    fn variance_probe_matches_single_rng_helper() {
        let two = generate_disjoint_cliques(2, 2).unwrap();
        let cfg = EstimateConfig::new(2, 3, 0.1, 0.1);
        let mut rng = probe_rng(0, 0);
        let v = estimate_variance_bound(&two, &cfg, 500, &mut rng).unwrap();
        assert_eq!(v, 0.015625);
    }

    #[test]
    fn config_validation() {
        assert!(EstimateConfig::new(0, 1, 0.1, 0.1).validate().is_err());
        assert!(EstimateConfig::new(1, 0, 0.1, 0.1).validate().is_err());
        assert!(EstimateConfig::new(1, 1, 1.5, 0.1).validate().is_err());
        assert!(EstimateConfig::new(1, 1, 0.1, 0.0).validate().is_err());
        let mut ok = EstimateConfig::new(1, 1, 0.1, 0.1);
        ok.workers = 0;
        assert!(ok.validate().is_err());
    }

    #[test]
    fn empty_simplex_set_is_an_input_error() {
        let no_triangles = c4();
        let cfg = EstimateConfig::new(2, 2, 0.5, 0.5);
        assert!(matches!(
            cbne(&no_triangles, &cfg),
            Err(Error::InvalidInput(_))
        ));
    }
}
