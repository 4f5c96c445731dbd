//! Seeded random-graph ensembles and empirical degree diagnostics.
//!
//! Two generators: the uniform model where every vertex pair is an edge
//! independently with probability p, and the balanced (k+1)-partite variant
//! where only cross-part pairs may appear. Both are deterministic functions
//! of their config (including the seed).
//!
//! The diagnostics check the two distributional facts the sample-count
//! analysis leans on:
//!
//! - In the partite model, the simplex-graph degree of a (k+1)-clique is
//!   Binom(n−k−1, p^k): each outside vertex lies in exactly one part, can
//!   only swap for that part's member, and does so iff its k cross-part
//!   edges are all present.
//! - In the uniform model, deg(σ) − d_up(σ) is a sum over the n−k−1 outside
//!   vertices of i.i.d. steps: +1 when the vertex reaches exactly k of σ's
//!   members (one valid swap, no cofacet), −1 when it reaches all k+1
//!   (a cofacet that disqualifies every swap), 0 otherwise.
//!
//! Both facts are *per-clique marginals*: within one graph the degrees of
//! different cliques are dependent (they read overlapping edge sets), so the
//! diagnostics pool across independently drawn graphs. Two details keep the
//! pooled tests honest:
//!
//! - Pooling keeps each clique with the same constant probability across all
//!   graphs (Bernoulli thinning). Capping every graph at a fixed sample count
//!   would weight cliques by the reciprocal of their graph's clique count,
//!   which correlates with edge density and visibly biases the histogram.
//! - Test statistics use across-graph variance. Each graph is one independent
//!   cluster; the chi-square statistic is rescaled by the estimated design
//!   effect and the mean test uses a cluster standard error, since the
//!   plain multinomial/i.i.d. formulas understate the variance of dependent
//!   within-graph samples.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

use crate::complex::Graph;
use crate::{fmt_f64, Error, Result};

/// Stream tag for diagnostics sampling, disjoint from the estimator phases.
const DIAG_PHASE: u64 = 3;

fn diag_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(DIAG_PHASE << 32);
    rng
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidInput(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Parameters for the uniform ensemble: every pair is an edge with
/// probability p, drawn from the seeded stream in lexicographic pair order.
#[derive(Debug, Clone, Serialize)]
pub struct ErConfig {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl ErConfig {
    pub fn new(n: usize, p: f64) -> ErConfig {
        ErConfig { n, p, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("vertex count must be positive".into()));
        }
        check_probability(self.p)
    }
}

/// Parameters for the balanced (k+1)-partite ensemble: vertices split into
/// k+1 contiguous parts of equal size, cross-part pairs are edges with
/// probability p, same-part pairs never.
#[derive(Debug, Clone, Serialize)]
pub struct PartiteErConfig {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub seed: u64,
}

impl PartiteErConfig {
    pub fn new(n: usize, k: usize, p: f64) -> PartiteErConfig {
        PartiteErConfig { n, k, p, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("vertex count must be positive".into()));
        }
        if !self.n.is_multiple_of(self.k + 1) {
            return Err(Error::InvalidInput(format!(
                "part count {} must divide vertex count {}",
                self.k + 1,
                self.n
            )));
        }
        check_probability(self.p)
    }

    pub fn part_size(&self) -> usize {
        self.n / (self.k + 1)
    }
}

/// Draws one graph from the uniform ensemble.
pub fn gen_gnp(cfg: &ErConfig) -> Result<Graph> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut g = Graph::new(cfg.n);
    for u in 0..cfg.n as u32 {
        for v in u + 1..cfg.n as u32 {
            if rng.random_bool(cfg.p) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// Draws one graph from the partite ensemble. Same-part pairs consume no
/// randomness, so the cross-part stream matches lexicographic pair order.
pub fn gen_partite(cfg: &PartiteErConfig) -> Result<Graph> {
    cfg.validate()?;
    let m = cfg.part_size();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut g = Graph::new(cfg.n);
    for u in 0..cfg.n as u32 {
        for v in u + 1..cfg.n as u32 {
            if u as usize / m == v as usize / m {
                continue;
            }
            if rng.random_bool(cfg.p) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

// ---------------------------------------------------------------------------
// Reference distributions
// ---------------------------------------------------------------------------

/// What the observed histogram is compared against.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReferenceDistribution {
    /// Binom(trials, prob): partite clique degree with trials = n−k−1,
    /// prob = p^k.
    Binomial { trials: u64, prob: f64 },
    /// Sum of `steps` i.i.d. variables taking +1 with probability `plus`,
    /// −1 with probability `minus`, 0 otherwise: deg − d_up in the uniform
    /// model with steps = n−k−1, plus = (k+1)p^k(1−p), minus = p^(k+1).
    SignedSteps { steps: u64, plus: f64, minus: f64 },
}

impl ReferenceDistribution {
    pub fn mean(&self) -> f64 {
        match *self {
            ReferenceDistribution::Binomial { trials, prob } => trials as f64 * prob,
            ReferenceDistribution::SignedSteps { steps, plus, minus } => {
                steps as f64 * (plus - minus)
            }
        }
    }

    /// Support and probability mass, ascending by value.
    pub fn pmf_table(&self) -> Result<Vec<(i64, f64)>> {
        match *self {
            ReferenceDistribution::Binomial { trials, prob } => {
                let dist = Binomial::new(prob, trials)
                    .map_err(|e| Error::Numeric(format!("binomial reference: {e}")))?;
                Ok((0..=trials).map(|x| (x as i64, dist.pmf(x))).collect())
            }
            ReferenceDistribution::SignedSteps { steps, plus, minus } => {
                if plus < 0.0 || minus < 0.0 || plus + minus > 1.0 + 1e-12 {
                    return Err(Error::Numeric(format!(
                        "signed-step probabilities out of range (+1: {plus}, −1: {minus})"
                    )));
                }
                let zero = (1.0 - plus - minus).max(0.0);
                let steps = steps as usize;
                // Exact convolution over the support −steps ..= steps.
                let mut probs = vec![0.0f64; 2 * steps + 1];
                probs[steps] = 1.0;
                for _ in 0..steps {
                    let mut next = vec![0.0f64; probs.len()];
                    for (i, &q) in probs.iter().enumerate() {
                        if q == 0.0 {
                            continue;
                        }
                        if i + 1 < next.len() {
                            next[i + 1] += q * plus;
                        }
                        if i >= 1 {
                            next[i - 1] += q * minus;
                        }
                        next[i] += q * zero;
                    }
                    probs = next;
                }
                Ok(probs
                    .into_iter()
                    .enumerate()
                    .map(|(i, q)| (i as i64 - steps as i64, q))
                    .collect())
            }
        }
    }
}

fn binomial_reference(n: usize, k: usize, p: f64) -> ReferenceDistribution {
    ReferenceDistribution::Binomial {
        trials: (n - k - 1) as u64,
        prob: p.powi(k as i32),
    }
}

fn signed_step_reference(n: usize, k: usize, p: f64) -> ReferenceDistribution {
    let pk = p.powi(k as i32);
    ReferenceDistribution::SignedSteps {
        steps: (n - k - 1) as u64,
        plus: (k as f64 + 1.0) * pk * (1.0 - p),
        minus: pk * p,
    }
}

// ---------------------------------------------------------------------------
// Degree diagnostics
// ---------------------------------------------------------------------------

/// Chi-square comparison of an observed histogram with its reference, after
/// merging bins with expected count < 5 (standard validity condition).
///
/// When the diagnostics pool several graphs, `design_effect` holds the
/// estimated factor by which within-graph dependence inflates the plain
/// multinomial statistic (from the across-graph variance of per-bin counts),
/// and `p_value` comes from the rescaled statistic.
#[derive(Debug, Clone, Serialize)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub design_effect: Option<f64>,
}

/// Observed mean against the reference mean. `se` is the cluster standard
/// error (across-graph) when the diagnostics pool several graphs, otherwise
/// the i.i.d. standard error from the reference variance.
#[derive(Debug, Clone, Serialize)]
pub struct MeanReport {
    pub observed: f64,
    pub expected: f64,
    pub se: f64,
    pub z: f64,
}

/// Concentration window around the reference mean.
#[derive(Debug, Clone, Serialize)]
pub struct WindowReport {
    pub center: f64,
    pub halfwidth: f64,
    pub inside_fraction: f64,
}

/// An observed degree histogram with its reference distribution. Merge
/// several (one per independently drawn graph) before testing; each merged
/// object becomes one cluster, and the tests estimate variance across
/// clusters instead of trusting the i.i.d. formulas.
#[derive(Debug, Clone)]
pub struct DegreeDiagnostics {
    pub histogram: BTreeMap<i64, u64>,
    pub sample_count: u64,
    pub reference: ReferenceDistribution,
    window_halfwidth: Option<f64>,
    /// One histogram per pooled graph; empty for single-graph diagnostics.
    clusters: Vec<BTreeMap<i64, u64>>,
}

/// Serializable snapshot of everything a diagnostics object can say.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsSummary {
    pub sample_count: u64,
    pub clusters: usize,
    pub vacuous: bool,
    pub reference: ReferenceDistribution,
    pub reference_mean: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean: Option<MeanReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_observed: Option<i64>,
    /// Whether the pooled minimum degree reaches half the reference mean
    /// (clique-degree diagnostics only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_degree_event: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_square: Option<ChiSquareReport>,
}

impl DegreeDiagnostics {
    fn new(reference: ReferenceDistribution, window_halfwidth: Option<f64>) -> DegreeDiagnostics {
        DegreeDiagnostics {
            histogram: BTreeMap::new(),
            sample_count: 0,
            reference,
            window_halfwidth,
            clusters: Vec::new(),
        }
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len().max(1)
    }

    fn record(&mut self, value: i64) {
        *self.histogram.entry(value).or_insert(0) += 1;
        self.sample_count += 1;
    }

    /// No samples were recorded (empty S_k): every test is uninformative.
    pub fn is_vacuous(&self) -> bool {
        self.sample_count == 0
    }

    pub fn mean_observed(&self) -> Option<f64> {
        if self.is_vacuous() {
            return None;
        }
        let sum: i64 = self.histogram.iter().map(|(&v, &c)| v * c as i64).sum();
        Some(sum as f64 / self.sample_count as f64)
    }

    pub fn min_observed(&self) -> Option<i64> {
        self.histogram.keys().next().copied()
    }

    /// [min degree ≥ d/2] where d is the reference mean; only meaningful for
    /// the clique-degree (binomial) diagnostics.
    pub fn min_degree_event(&self) -> Option<bool> {
        match self.reference {
            ReferenceDistribution::Binomial { .. } => self
                .min_observed()
                .map(|min| min as f64 >= self.reference.mean() / 2.0),
            ReferenceDistribution::SignedSteps { .. } => None,
        }
    }

    /// Fraction of samples within ± halfwidth of the reference mean.
    pub fn window_fraction(&self) -> Option<WindowReport> {
        let halfwidth = self.window_halfwidth?;
        if self.is_vacuous() {
            return None;
        }
        let center = self.reference.mean();
        let inside: u64 = self
            .histogram
            .iter()
            .filter(|(&v, _)| (v as f64 - center).abs() <= halfwidth)
            .map(|(_, &c)| c)
            .sum();
        Some(WindowReport {
            center,
            halfwidth,
            inside_fraction: inside as f64 / self.sample_count as f64,
        })
    }

    /// Pools another diagnostics object drawn against the same reference.
    /// Each side's graphs stay distinguishable as clusters, so the pooled
    /// tests can estimate across-graph variance.
    pub fn merge(&mut self, other: &DegreeDiagnostics) -> Result<()> {
        if self.reference != other.reference || self.window_halfwidth != other.window_halfwidth {
            return Err(Error::InvalidInput(
                "cannot pool diagnostics with different references".into(),
            ));
        }
        if self.clusters.is_empty() {
            self.clusters.push(self.histogram.clone());
        }
        if other.clusters.is_empty() {
            self.clusters.push(other.histogram.clone());
        } else {
            self.clusters.extend(other.clusters.iter().cloned());
        }
        for (&v, &c) in &other.histogram {
            *self.histogram.entry(v).or_insert(0) += c;
        }
        self.sample_count += other.sample_count;
        Ok(())
    }

    /// Observed mean against the reference mean, with a standard error that
    /// respects the pooling structure: across-cluster variance of the
    /// per-graph sums when pooled, the reference variance otherwise.
    pub fn mean_report(&self) -> Result<MeanReport> {
        let observed = self
            .mean_observed()
            .ok_or_else(|| Error::InvalidInput("mean of a vacuous diagnostic".into()))?;
        let expected = self.reference.mean();
        let total = self.sample_count as f64;
        let variance = if self.clusters.len() >= 2 {
            // Var(Σ_g s_g / Σ_g n_g) by the delta method: residuals
            // r_g = s_g − mean·n_g are i.i.d. across graphs with mean ≈ 0.
            let g = self.clusters.len() as f64;
            let residuals: Vec<f64> = self
                .clusters
                .iter()
                .map(|hist| {
                    let s: i64 = hist.iter().map(|(&v, &c)| v * c as i64).sum();
                    let n: u64 = hist.values().sum();
                    s as f64 - observed * n as f64
                })
                .collect();
            let mean_r = residuals.iter().sum::<f64>() / g;
            let ss: f64 = residuals.iter().map(|r| (r - mean_r) * (r - mean_r)).sum();
            g / (g - 1.0) * ss / (total * total)
        } else {
            let table = self.reference.pmf_table()?;
            let var_ref: f64 = table
                .iter()
                .map(|&(v, q)| (v as f64 - expected) * (v as f64 - expected) * q)
                .sum();
            var_ref / total
        };
        let se = variance.sqrt();
        let z = if se > 0.0 {
            (observed - expected) / se
        } else if observed == expected {
            0.0
        } else {
            f64::INFINITY * (observed - expected).signum()
        };
        Ok(MeanReport {
            observed,
            expected,
            se,
            z,
        })
    }

    /// Chi-square against the reference. Bins are walked in value order and
    /// greedily merged until each holds expected mass ≥ 5; the trailing
    /// remainder joins the last bin.
    ///
    /// Pooled diagnostics rescale the statistic by the estimated design
    /// effect: the mean over bins of Var(count)/expected, with Var estimated
    /// from the independent per-graph counts. Without this the test rejects
    /// valid references, because within-graph samples are positively
    /// dependent and overdisperse the bin counts relative to a multinomial.
    pub fn chi_square(&self) -> Result<ChiSquareReport> {
        if self.is_vacuous() {
            return Err(Error::InvalidInput(
                "chi-square on a vacuous diagnostic".into(),
            ));
        }
        let table = self.reference.pmf_table()?;
        let total = self.sample_count as f64;
        let layout = BinLayout::build(&table, total)?;
        let expected: Vec<f64> = layout.mass.iter().map(|&q| q * total).collect();
        let observed = layout.counts(&self.histogram);
        let raw: f64 = expected
            .iter()
            .zip(&observed)
            .map(|(&e, &o)| (o - e) * (o - e) / e)
            .sum();
        let dof = layout.mass.len() - 1;
        let design_effect = if self.clusters.len() >= 2 {
            Some(self.design_effect(&layout, &expected))
        } else {
            None
        };
        let statistic = match design_effect {
            Some(d) if d.is_finite() && d > 0.0 => raw / d,
            _ => raw,
        };
        let dist = ChiSquared::new(dof as f64)
            .map_err(|e| Error::Numeric(format!("chi-square reference: {e}")))?;
        Ok(ChiSquareReport {
            statistic,
            dof,
            p_value: 1.0 - dist.cdf(statistic),
            bins: layout.mass.len(),
            design_effect,
        })
    }

    /// Mean over bins of Var̂(pooled count)/expected, where Var̂ sums the
    /// across-graph sample variance of per-graph residuals o_g − n_g·q_b.
    /// Equals 1 in expectation when the samples are truly i.i.d.
    fn design_effect(&self, layout: &BinLayout, expected: &[f64]) -> f64 {
        let g = self.clusters.len() as f64;
        let bins = layout.mass.len();
        let mut residuals = vec![Vec::with_capacity(self.clusters.len()); bins];
        for hist in &self.clusters {
            let n: u64 = hist.values().sum();
            let counts = layout.counts(hist);
            for (b, &o) in counts.iter().enumerate() {
                residuals[b].push(o - n as f64 * layout.mass[b]);
            }
        }
        let mut ratio_sum = 0.0;
        for (b, rs) in residuals.iter().enumerate() {
            let mean = rs.iter().sum::<f64>() / g;
            let ss: f64 = rs.iter().map(|r| (r - mean) * (r - mean)).sum();
            let var_pooled = g / (g - 1.0) * ss;
            ratio_sum += var_pooled / expected[b];
        }
        ratio_sum / (bins - 1) as f64
    }

    pub fn summary(&self) -> DiagnosticsSummary {
        DiagnosticsSummary {
            sample_count: self.sample_count,
            clusters: self.cluster_count(),
            vacuous: self.is_vacuous(),
            reference: self.reference.clone(),
            reference_mean: self.reference.mean(),
            mean: self.mean_report().ok(),
            min_observed: self.min_observed(),
            min_degree_event: self.min_degree_event(),
            window: self.window_fraction(),
            chi_square: self.chi_square().ok(),
        }
    }

    /// CSV rows `value,observed,expected` over the union of the reference
    /// support and the observed values.
    pub fn to_csv_string(&self) -> Result<String> {
        let table = self.reference.pmf_table()?;
        let expected: BTreeMap<i64, f64> = table.into_iter().collect();
        let total = self.sample_count as f64;
        let mut values: Vec<i64> = expected.keys().copied().collect();
        for &v in self.histogram.keys() {
            if !expected.contains_key(&v) {
                values.push(v);
            }
        }
        values.sort_unstable();
        let mut out = String::from("value,observed,expected\n");
        for v in values {
            let observed = self.histogram.get(&v).copied().unwrap_or(0);
            let exp = expected.get(&v).copied().unwrap_or(0.0) * total;
            writeln!(out, "{v},{observed},{}", fmt_f64(exp)).expect("string write");
        }
        Ok(out)
    }
}

/// Bins over the reference support, greedily merged in value order until
/// each holds expected mass ≥ 5 at the given sample total (the trailing
/// remainder joins the last bin). Shared between the pooled histogram and
/// the per-graph cluster histograms so their counts are comparable.
struct BinLayout {
    /// Reference probability mass per bin.
    mass: Vec<f64>,
    /// Bin index for every value in the reference support, ascending.
    assignment: BTreeMap<i64, usize>,
}

impl BinLayout {
    fn build(table: &[(i64, f64)], total: f64) -> Result<BinLayout> {
        let mut mass = Vec::new();
        let mut assignment = BTreeMap::new();
        let mut acc = 0.0;
        for &(value, prob) in table {
            assignment.insert(value, mass.len());
            acc += prob;
            if acc * total >= 5.0 {
                mass.push(acc);
                acc = 0.0;
            }
        }
        if mass.is_empty() {
            return Err(Error::Numeric(
                "reference distribution too concentrated for a chi-square test".into(),
            ));
        }
        // Trailing values whose mass never reached the threshold fold into
        // the last closed bin.
        let last = mass.len() - 1;
        if acc > 0.0 {
            *mass.last_mut().expect("nonempty") += acc;
        }
        for idx in assignment.values_mut() {
            if *idx > last {
                *idx = last;
            }
        }
        if mass.len() < 2 {
            return Err(Error::Numeric(
                "reference distribution too concentrated for a chi-square test".into(),
            ));
        }
        Ok(BinLayout { mass, assignment })
    }

    /// Histogram counts per bin; values outside the reference support clamp
    /// to the nearest end bin.
    fn counts(&self, histogram: &BTreeMap<i64, u64>) -> Vec<f64> {
        let mut out = vec![0.0; self.mass.len()];
        for (&value, &count) in histogram {
            let bin = match self.assignment.get(&value) {
                Some(&b) => b,
                None => {
                    let first = *self.assignment.keys().next().expect("nonempty");
                    if value < first {
                        0
                    } else {
                        self.mass.len() - 1
                    }
                }
            };
            out[bin] += count as f64;
        }
        out
    }
}

/// Up to `max_samples` (k+1)-cliques of the graph, in deterministic order
/// when everything fits, otherwise a seedable random subset.
fn sampled_cliques<R: Rng + ?Sized>(
    graph: &Graph,
    k: usize,
    max_samples: usize,
    rng: &mut R,
) -> Vec<Vec<u32>> {
    let cliques = graph.cliques_of_size(k + 1);
    if cliques.len() <= max_samples {
        return cliques;
    }
    let mut picks = rand::seq::index::sample(rng, cliques.len(), max_samples).into_vec();
    picks.sort_unstable();
    picks.into_iter().map(|i| cliques[i].clone()).collect()
}

fn check_diag_params(n: usize, k: usize, p: f64) -> Result<()> {
    check_probability(p)?;
    if k == 0 || n < k + 1 {
        return Err(Error::InvalidInput(format!(
            "degree diagnostics need k ≥ 1 and n ≥ k+1 (k = {k}, n = {n})"
        )));
    }
    Ok(())
}

/// Simplex-graph degree of a (k+1)-clique: outside vertices adjacent to
/// exactly k of its members (one valid swap, no disqualifying cofacet).
fn clique_simplex_degree(graph: &Graph, k: usize, clique: &[u32]) -> i64 {
    let mut deg = 0;
    for w in 0..graph.vertex_count() as u32 {
        if clique.contains(&w) {
            continue;
        }
        if graph.adjacency_count(w, clique) == k {
            deg += 1;
        }
    }
    deg
}

/// deg(σ) − d_up(σ): +1 per outside vertex adjacent to exactly k members,
/// −1 per outside vertex adjacent to all k+1 (a cofacet).
fn clique_degree_deficit(graph: &Graph, k: usize, clique: &[u32]) -> i64 {
    let mut value = 0;
    for w in 0..graph.vertex_count() as u32 {
        if clique.contains(&w) {
            continue;
        }
        match graph.adjacency_count(w, clique) {
            c if c == k + 1 => value -= 1,
            c if c == k => value += 1,
            _ => {}
        }
    }
    value
}

/// Records the simplex-graph degree of sampled (k+1)-cliques against
/// Binom(n−k−1, p^k). `p` must be the probability the graph was drawn with.
/// An empty S_k yields a vacuous diagnostic, not an error.
pub fn clique_degree_diagnostics<R: Rng + ?Sized>(
    graph: &Graph,
    k: usize,
    p: f64,
    max_samples: usize,
    rng: &mut R,
) -> Result<DegreeDiagnostics> {
    let n = graph.vertex_count();
    check_diag_params(n, k, p)?;
    let mut diag = DegreeDiagnostics::new(binomial_reference(n, k, p), None);
    for clique in sampled_cliques(graph, k, max_samples, rng) {
        diag.record(clique_simplex_degree(graph, k, &clique));
    }
    Ok(diag)
}

/// Default concentration window halfwidth, n/√(log n).
pub fn default_window_halfwidth(n: usize) -> f64 {
    n as f64 / (n.max(2) as f64).ln().sqrt()
}

/// Records deg(σ) − d_up(σ) of sampled (k+1)-cliques against the signed-step
/// sum with mean (n−k−1)p^k((k+1) − (k+2)p). The concentration window
/// defaults to n/√(log n) when not supplied.
pub fn deg_minus_updeg_diagnostics<R: Rng + ?Sized>(
    graph: &Graph,
    k: usize,
    p: f64,
    max_samples: usize,
    window_halfwidth: Option<f64>,
    rng: &mut R,
) -> Result<DegreeDiagnostics> {
    let n = graph.vertex_count();
    check_diag_params(n, k, p)?;
    let halfwidth = window_halfwidth.unwrap_or_else(|| default_window_halfwidth(n));
    let mut diag = DegreeDiagnostics::new(signed_step_reference(n, k, p), Some(halfwidth));
    for clique in sampled_cliques(graph, k, max_samples, rng) {
        diag.record(clique_degree_deficit(graph, k, &clique));
    }
    Ok(diag)
}

/// Expected number of (k+1)-cliques in the partite ensemble: one vertex per
/// part (m^(k+1) candidates), each realized iff its C(k+1,2) cross edges are.
fn expected_partite_cliques(n: usize, k: usize, p: f64) -> f64 {
    let m = (n / (k + 1)) as f64;
    m.powi(k as i32 + 1) * p.powi((k * (k + 1) / 2) as i32)
}

/// Expected number of (k+1)-cliques in the uniform ensemble.
fn expected_gnp_cliques(n: usize, k: usize, p: f64) -> f64 {
    let mut candidates = 1.0f64;
    for i in 0..=k {
        candidates *= (n - i) as f64 / (i + 1) as f64;
    }
    candidates * p.powi((k * (k + 1) / 2) as i32)
}

/// Keeps each clique independently with probability `q`, in enumeration
/// order. Constant inclusion probability keeps the pooled histogram an
/// unbiased draw from the per-clique marginal; capping at a fixed count per
/// graph would instead weight each clique by the reciprocal of its graph's
/// clique count, which correlates with degree.
fn thinned_cliques<R: Rng + ?Sized>(graph: &Graph, k: usize, q: f64, rng: &mut R) -> Vec<Vec<u32>> {
    graph
        .cliques_of_size(k + 1)
        .into_iter()
        .filter(|_| rng.random_bool(q))
        .collect()
}

fn thinning_probability(expected_cliques: f64, per_graph_target: usize) -> f64 {
    if expected_cliques <= 0.0 {
        return 1.0;
    }
    (per_graph_target as f64 / expected_cliques).clamp(0.0, 1.0)
}

/// Pools clique-degree diagnostics over `graph_count` fresh draws from the
/// partite ensemble (seeds cfg.seed, cfg.seed+1, …). Each graph keeps each
/// clique with the same probability, aiming at `per_graph_target` kept
/// cliques per graph in expectation (pass `usize::MAX` to keep everything);
/// each graph is one cluster in the pooled tests.
pub fn pooled_clique_degree_diagnostics(
    cfg: &PartiteErConfig,
    graph_count: usize,
    per_graph_target: usize,
) -> Result<DegreeDiagnostics> {
    cfg.validate()?;
    check_diag_params(cfg.n, cfg.k, cfg.p)?;
    let q = thinning_probability(
        expected_partite_cliques(cfg.n, cfg.k, cfg.p),
        per_graph_target,
    );
    let reference = binomial_reference(cfg.n, cfg.k, cfg.p);
    let mut pooled: Option<DegreeDiagnostics> = None;
    for i in 0..graph_count {
        let mut draw = cfg.clone();
        draw.seed = cfg.seed.wrapping_add(i as u64);
        let graph = gen_partite(&draw)?;
        let mut rng = diag_rng(draw.seed);
        let mut diag = DegreeDiagnostics::new(reference.clone(), None);
        for clique in thinned_cliques(&graph, cfg.k, q, &mut rng) {
            diag.record(clique_simplex_degree(&graph, cfg.k, &clique));
        }
        match &mut pooled {
            Some(acc) => acc.merge(&diag)?,
            None => pooled = Some(diag),
        }
    }
    pooled.ok_or_else(|| Error::InvalidInput("graph count must be positive".into()))
}

/// Pools deg − d_up diagnostics over `graph_count` fresh draws from the
/// uniform ensemble, with the same constant-probability thinning and
/// per-graph clustering as the clique-degree pooling.
pub fn pooled_deg_minus_updeg_diagnostics(
    cfg: &ErConfig,
    k: usize,
    graph_count: usize,
    per_graph_target: usize,
    window_halfwidth: Option<f64>,
) -> Result<DegreeDiagnostics> {
    cfg.validate()?;
    check_diag_params(cfg.n, k, cfg.p)?;
    let q = thinning_probability(expected_gnp_cliques(cfg.n, k, cfg.p), per_graph_target);
    let halfwidth = window_halfwidth.unwrap_or_else(|| default_window_halfwidth(cfg.n));
    let reference = signed_step_reference(cfg.n, k, cfg.p);
    let mut pooled: Option<DegreeDiagnostics> = None;
    for i in 0..graph_count {
        let mut draw = cfg.clone();
        draw.seed = cfg.seed.wrapping_add(i as u64);
        let graph = gen_gnp(&draw)?;
        let mut rng = diag_rng(draw.seed);
        let mut diag = DegreeDiagnostics::new(reference.clone(), Some(halfwidth));
        for clique in thinned_cliques(&graph, k, q, &mut rng) {
            diag.record(clique_degree_deficit(&graph, k, &clique));
        }
        match &mut pooled {
            Some(acc) => acc.merge(&diag)?,
            None => pooled = Some(diag),
        }
    }
    pooled.ok_or_else(|| Error::InvalidInput("graph count must be positive".into()))
}

// ---------------------------------------------------------------------------
// Regime report
// ---------------------------------------------------------------------------

/// Which sample-count story a parameter point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RegimeLabel {
    Easy,
    Hard,
    Neither,
}

impl std::fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegimeLabel::Easy => write!(f, "EASY"),
            RegimeLabel::Hard => write!(f, "HARD"),
            RegimeLabel::Neither => write!(f, "NEITHER"),
        }
    }
}

/// Classifies (n, k, p, ℓ): second-moment growth like (1+p^k)^ℓ makes path
/// sampling expensive (HARD), while a small swap load (k+1)p^k keeps the
/// second moment under the flat cap 2.5^ℓ (EASY).
#[derive(Debug, Clone, Serialize)]
pub struct RegimeReport {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub l: usize,
    pub p_pow_k: f64,
    /// (k+1)·p^k — expected swap load per outside vertex.
    pub growth_load: f64,
    pub k_below_n_over_log_n: bool,
    pub k_below_n_over_log_sq_n: bool,
    /// p < k^(−1/k), the threshold under which the flat cap argument runs.
    pub p_below_k_root: bool,
    /// (1 + p^k)^ℓ
    pub hard_reference: f64,
    /// 2.5^ℓ
    pub easy_cap: f64,
    pub label: RegimeLabel,
}

/// Finite-n thresholds standing in for the asymptotic regime conditions.
pub const HARD_P_POW_K_THRESHOLD: f64 = 0.25;
pub const EASY_GROWTH_LOAD_THRESHOLD: f64 = 0.1;

pub fn regime_report(n: usize, k: usize, p: f64, l: usize) -> RegimeReport {
    let kf = k as f64;
    let nf = n as f64;
    let p_pow_k = p.powi(k as i32);
    let growth_load = (kf + 1.0) * p_pow_k;
    let log_n = if n >= 2 { nf.ln() } else { f64::NAN };
    let k_below_n_over_log_n = n >= 2 && kf <= nf / log_n;
    let k_below_n_over_log_sq_n = n >= 2 && kf <= nf / (log_n * log_n);
    let p_below_k_root = if k == 0 { true } else { p < kf.powf(-1.0 / kf) };
    let label = if k_below_n_over_log_n && p_pow_k >= HARD_P_POW_K_THRESHOLD {
        RegimeLabel::Hard
    } else if k_below_n_over_log_sq_n && growth_load <= EASY_GROWTH_LOAD_THRESHOLD {
        RegimeLabel::Easy
    } else {
        RegimeLabel::Neither
    };
    RegimeReport {
        n,
        k,
        p,
        l,
        p_pow_k,
        growth_load,
        k_below_n_over_log_n,
        k_below_n_over_log_sq_n,
        p_below_k_root,
        hard_reference: (1.0 + p_pow_k).powi(l as i32),
        easy_cap: 2.5f64.powi(l as i32),
        label,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generate_complete_partite;

    #[test]
    fn gnp_extremes_and_determinism() {
        let empty = gen_gnp(&ErConfig::new(10, 0.0)).unwrap();
        assert_eq!(empty.edge_count(), 0);
        let full = gen_gnp(&ErConfig::new(10, 1.0)).unwrap();
        assert_eq!(full.edge_count(), 45);

        let a = gen_gnp(&ErConfig::new(30, 0.5)).unwrap();
        let b = gen_gnp(&ErConfig::new(30, 0.5)).unwrap();
        assert_eq!(a, b);
        let mut other = ErConfig::new(30, 0.5);
        other.seed = 1;
        assert_ne!(a, gen_gnp(&other).unwrap());
    }

    #[test]
    fn gnp_edge_counts_concentrate() {
        // Mean edge count over 50 seeds within 3·sd/√50 of C(30,2)/2.
        let pairs: f64 = 435.0;
        let mut total = 0usize;
        for seed in 0..50 {
            let mut cfg = ErConfig::new(30, 0.5);
            cfg.seed = seed;
            total += gen_gnp(&cfg).unwrap().edge_count();
        }
        let mean = total as f64 / 50.0;
        let tol = 3.0 * (pairs * 0.25).sqrt() / 50f64.sqrt();
        assert!(
            (mean - pairs / 2.0).abs() <= tol,
            "mean {mean} vs {} ± {tol}",
            pairs / 2.0
        );
    }

    #[test]
    fn partite_structural_zeros_and_extremes() {
        for seed in 0..10 {
            let mut cfg = PartiteErConfig::new(30, 2, 0.7);
            cfg.seed = seed;
            let g = gen_partite(&cfg).unwrap();
            let m = cfg.part_size();
            for u in 0..30u32 {
                for v in u + 1..30u32 {
                    if u as usize / m == v as usize / m {
                        assert!(!g.has_edge(u, v), "same-part edge {u} {v}");
                    }
                }
            }
        }
        let full = gen_partite(&PartiteErConfig::new(9, 2, 1.0)).unwrap();
        assert_eq!(
            full,
            generate_complete_partite(2, 3).unwrap().graph().clone()
        );
        let empty = gen_partite(&PartiteErConfig::new(9, 2, 0.0)).unwrap();
        assert_eq!(empty.edge_count(), 0);
        assert!(matches!(
            gen_partite(&PartiteErConfig::new(10, 2, 0.5)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn complete_partite_clique_degrees_are_constant() {
        let g = generate_complete_partite(2, 3).unwrap().graph().clone();
        let mut rng = diag_rng(0);
        let diag = clique_degree_diagnostics(&g, 2, 1.0, usize::MAX, &mut rng).unwrap();
        assert_eq!(diag.sample_count, 27, "m^(k+1) cliques");
        assert_eq!(diag.histogram.len(), 1);
        assert_eq!(diag.min_observed(), Some(6), "(m−1)(k+1)");
        assert_eq!(diag.reference.mean(), 6.0);
        assert_eq!(diag.min_degree_event(), Some(true));
    }

    #[test]
    fn signed_step_reference_matches_mean_formula() {
        let mut cfg = ErConfig::new(30, 0.3);
        cfg.seed = 7;
        let g = gen_gnp(&cfg).unwrap();
        let mut rng = diag_rng(7);
        let diag = deg_minus_updeg_diagnostics(&g, 2, 0.3, usize::MAX, None, &mut rng).unwrap();
        assert!((diag.reference.mean() - 4.374).abs() < 1e-12);
        let table = diag.reference.pmf_table().unwrap();
        let mass: f64 = table.iter().map(|&(_, q)| q).sum();
        assert!((mass - 1.0).abs() < 1e-12);
        let mean: f64 = table.iter().map(|&(v, q)| v as f64 * q).sum();
        assert!((mean - 4.374).abs() < 1e-9);
        let total: u64 = diag.histogram.values().sum();
        assert_eq!(total, diag.sample_count);
    }

    #[test]
    fn complete_graph_gives_deterministic_deficit() {
        let g = gen_gnp(&ErConfig::new(10, 1.0)).unwrap();
        let mut rng = diag_rng(0);
        let diag = deg_minus_updeg_diagnostics(&g, 2, 1.0, usize::MAX, None, &mut rng).unwrap();
        // Every outside vertex extends every triangle: deg − d_up = −(n−k−1).
        assert_eq!(diag.histogram.len(), 1);
        assert_eq!(diag.min_observed(), Some(-7));
        assert_eq!(diag.reference.mean(), -7.0);
        let w = diag.window_fraction().unwrap();
        assert_eq!(w.inside_fraction, 1.0);
    }

    #[test]
    fn pooled_chi_square_accepts_the_reference() {
        let cfg = PartiteErConfig::new(30, 2, 0.7);
        let pooled = pooled_clique_degree_diagnostics(&cfg, 200, 55).unwrap();
        assert!(pooled.sample_count > 10_000);
        assert_eq!(pooled.cluster_count(), 200);
        let report = pooled.chi_square().unwrap();
        assert!(report.dof >= 2);
        // Within-graph dependence overdisperses the bin counts; the
        // across-graph estimate should see that and the corrected test
        // should accept the true reference.
        let effect = report.design_effect.expect("pooled report is corrected");
        assert!(effect > 1.0, "design effect {effect}");
        assert!(report.p_value > 0.01, "p = {}", report.p_value);
        let mean = pooled.mean_report().unwrap();
        assert!(mean.z.abs() < 3.0, "mean z = {}", mean.z);
        let csv = pooled.to_csv_string().unwrap();
        assert!(csv.starts_with("value,observed,expected\n"));
        assert!(csv.lines().count() > 10);
    }

    #[test]
    fn pooled_mean_test_accepts_the_reference() {
        let cfg = ErConfig::new(30, 0.3);
        let pooled = pooled_deg_minus_updeg_diagnostics(&cfg, 2, 200, 55, None).unwrap();
        assert!(pooled.sample_count > 10_000);
        let mean = pooled.mean_report().unwrap();
        assert!((mean.expected - 4.374).abs() < 1e-12);
        assert!(mean.z.abs() < 3.0, "mean z = {}", mean.z);
        // The cluster standard error should not undercut the i.i.d. one by
        // much; dependence typically makes it larger.
        assert!(mean.se > 0.0);
        let w = pooled.window_fraction().unwrap();
        assert_eq!(w.inside_fraction, 1.0, "±n/√(log n) swallows the support");
    }

    #[test]
    fn pooling_is_deterministic() {
        let cfg = PartiteErConfig::new(30, 2, 0.7);
        let a = pooled_clique_degree_diagnostics(&cfg, 5, 40).unwrap();
        let b = pooled_clique_degree_diagnostics(&cfg, 5, 40).unwrap();
        assert_eq!(a.histogram, b.histogram);
        assert_eq!(a.sample_count, b.sample_count);
        assert_eq!(a.cluster_count(), 5);
    }

    #[test]
    fn merge_rejects_mismatched_references() {
        let g = gen_gnp(&ErConfig::new(12, 0.5)).unwrap();
        let mut rng = diag_rng(0);
        let mut a = clique_degree_diagnostics(&g, 1, 0.5, usize::MAX, &mut rng).unwrap();
        let b = clique_degree_diagnostics(&g, 2, 0.5, usize::MAX, &mut rng).unwrap();
        assert!(matches!(a.merge(&b), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn sampling_caps_the_histogram() {
        let g = gen_gnp(&ErConfig::new(20, 0.8)).unwrap();
        let mut rng = diag_rng(1);
        let diag = clique_degree_diagnostics(&g, 1, 0.8, 25, &mut rng).unwrap();
        assert_eq!(diag.sample_count, 25);
    }

    #[test]
    fn regime_labels_match_reference_points() {
        let hard = regime_report(24, 2, 0.8, 20);
        assert_eq!(hard.label, RegimeLabel::Hard);
        assert!((hard.p_pow_k - 0.64).abs() < 1e-12);
        assert!((hard.hard_reference - 1.64f64.powi(20)).abs() < 1e-6);

        let easy = regime_report(30, 2, 0.1, 3);
        assert_eq!(easy.label, RegimeLabel::Easy);
        assert!((easy.growth_load - 0.03).abs() < 1e-12);
        assert_eq!(easy.easy_cap, 15.625);
        assert!(easy.p_below_k_root);

        // p = 1 − 1/k keeps p^k ≥ 1/4 for every k ≥ 2 (rising toward 1/e):
        // a hard-case witness at any dimension.
        for k in 2..8 {
            let p = 1.0 - 1.0 / k as f64;
            let r = regime_report(60, k, p, 5);
            assert!(r.p_pow_k >= 0.25 - 1e-12, "k={k}: {}", r.p_pow_k);
            assert_eq!(r.label, RegimeLabel::Hard);
        }

        let neither = regime_report(30, 2, 0.4, 3);
        assert_eq!(neither.label, RegimeLabel::Neither, "p^k = 0.16, load 0.48");
    }
}
