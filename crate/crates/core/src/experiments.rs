//! Whole-network sweeps: per-tie entropy gain, positiveness and tie-strength CDFs.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::SequenceScratch;
use crate::error::{Error, Result};
use crate::generators::{generate, tune_clustering, GenParams, Model, TuneParams};
use crate::graph::{EdgeRef, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub edge: EdgeRef,
    pub c_ij: usize,
    /// Entropy the tie adds to its two endpoints (with minus without).
    pub delta_pair: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    pub c_ij: usize,
    pub count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAggregate {
    /// One bucket per observed `c_ij`, ascending.
    pub buckets: Vec<Bucket>,
}

impl SweepAggregate {
    pub fn total(&self) -> usize {
        self.buckets.iter().map(|b| b.count).sum()
    }

    /// Least-squares slope of the bucket means against `c_ij`.
    pub fn mean_slope(&self) -> Option<f64> {
        let xs: Vec<f64> = self.buckets.iter().map(|b| b.c_ij as f64).collect();
        let ys: Vec<f64> = self.buckets.iter().map(|b| b.mean).collect();
        least_squares_slope(&xs, &ys)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivenessReport {
    pub tau: f64,
    pub positive_count: usize,
    pub nonpositive_count: usize,
    pub clustering: f64,
}

impl PositivenessReport {
    pub fn total(&self) -> usize {
        self.positive_count + self.nonpositive_count
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrengthCdf {
    /// Distinct strengths with the fraction of ties at or below each.
    pub points: Vec<(f64, f64)>,
}

impl StrengthCdf {
    /// Fraction of ties with strength `<= w`.
    pub fn fraction_at(&self, w: f64) -> f64 {
        let idx = self.points.partition_point(|&(x, _)| x <= w);
        if idx == 0 {
            0.0
        } else {
            self.points[idx - 1].1
        }
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))
}

/// Entropy each node gains from each of its ties, aligned with `g.neighbors(v)`.
fn side_gains(g: &Graph, workers: usize) -> Result<Vec<Vec<f64>>> {
    let n = g.node_count();
    let chunk = 256;
    let compute = || {
        (0..n.div_ceil(chunk))
            .into_par_iter()
            .map_init(
                || SequenceScratch::new(n),
                |scratch, c| {
                    (c * chunk..((c + 1) * chunk).min(n))
                        .map(|i| {
                            scratch.load(g, i);
                            g.neighbors(i)
                                .iter()
                                .map(|&j| scratch.delta_remove(g, j))
                                .collect::<Vec<f64>>()
                        })
                        .collect::<Vec<_>>()
                },
            )
            .flatten()
            .collect()
    };
    Ok(pool(workers)?.install(compute))
}

/// Entropy gain of every tie, in canonical edge order.
///
/// Each worker reads the shared graph and evaluates the tie-deleted
/// counterfactual on private scratch space; the output does not depend on
/// the number of workers.
pub fn edge_sweep(g: &Graph, workers: usize) -> Result<Vec<SweepRecord>> {
    let gains = side_gains(g, workers)?;
    let mut records = Vec::with_capacity(g.edge_count());
    for i in 0..g.node_count() {
        let list = g.neighbors(i);
        let start = list.partition_point(|&j| j <= i);
        for (slot, &j) in list.iter().enumerate().skip(start) {
            let back = g.neighbors(j).binary_search(&i).expect("symmetric");
            records.push(SweepRecord {
                edge: EdgeRef { i, j },
                c_ij: g.common_count_unchecked(i, j),
                delta_pair: gains[i][slot] + gains[j][back],
            });
        }
    }
    Ok(records)
}

/// [`edge_sweep`] restricted to a seeded uniform sample of `fraction` of the ties.
pub fn edge_sweep_sampled(
    g: &Graph,
    workers: usize,
    fraction: f64,
    seed: u64,
) -> Result<Vec<SweepRecord>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::params(format!("sample fraction must be in (0,1], got {fraction}")));
    }
    if fraction == 1.0 {
        return edge_sweep(g, workers);
    }
    let edges: Vec<EdgeRef> = g.edges().collect();
    let amount = ((edges.len() as f64 * fraction).round() as usize).clamp(1.min(edges.len()), edges.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<EdgeRef> = sample(&mut rng, edges.len(), amount)
        .into_iter()
        .map(|k| edges[k])
        .collect();
    picked.sort_unstable();
    let compute = || {
        picked
            .par_iter()
            .map_init(
                || SequenceScratch::new(g.node_count()),
                |scratch, e| {
                    scratch.load(g, e.i);
                    let a = scratch.delta_remove(g, e.j);
                    scratch.load(g, e.j);
                    let b = scratch.delta_remove(g, e.i);
                    SweepRecord {
                        edge: *e,
                        c_ij: g.common_count_unchecked(e.i, e.j),
                        delta_pair: a + b,
                    }
                },
            )
            .collect()
    };
    Ok(pool(workers)?.install(compute))
}

/// Groups records by exact `c_ij`.
pub fn aggregate_sweep(records: &[SweepRecord]) -> Result<SweepAggregate> {
    if records.is_empty() {
        return Err(Error::EmptyInput("cannot aggregate an empty sweep".into()));
    }
    let mut groups: BTreeMap<usize, (usize, f64, f64, f64)> = BTreeMap::new();
    for r in records {
        let entry = groups
            .entry(r.c_ij)
            .or_insert((0, 0.0, f64::INFINITY, f64::NEG_INFINITY));
        entry.0 += 1;
        entry.1 += r.delta_pair;
        entry.2 = entry.2.min(r.delta_pair);
        entry.3 = entry.3.max(r.delta_pair);
    }
    let buckets = groups
        .into_iter()
        .map(|(c_ij, (count, sum, min, max))| Bucket {
            c_ij,
            count,
            min,
            mean: (sum / count as f64).clamp(min, max),
            max,
        })
        .collect();
    Ok(SweepAggregate { buckets })
}

/// τ from already-computed records; a tie is positive only if its gain is
/// strictly above zero.
pub fn positiveness_from_records(records: &[SweepRecord], clustering: f64) -> Result<PositivenessReport> {
    if records.is_empty() {
        return Err(Error::EmptyInput("positiveness needs at least one tie".into()));
    }
    let positive_count = records.iter().filter(|r| r.delta_pair > 0.0).count();
    Ok(PositivenessReport {
        tau: positive_count as f64 / records.len() as f64,
        positive_count,
        nonpositive_count: records.len() - positive_count,
        clustering,
    })
}

pub fn positiveness(g: &Graph, workers: usize) -> Result<PositivenessReport> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyInput("positiveness needs at least one tie".into()));
    }
    let records = edge_sweep(g, workers)?;
    positiveness_from_records(&records, g.avg_clustering())
}

pub fn strength_cdf(g: &Graph) -> Result<StrengthCdf> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyInput("strength CDF needs at least one tie".into()));
    }
    let mut ws: Vec<f64> = g.edges().map(|e| g.tie_strength_unchecked(e.i, e.j)).collect();
    ws.sort_by(f64::total_cmp);
    let total = ws.len() as f64;
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (k, &w) in ws.iter().enumerate() {
        let frac = (k + 1) as f64 / total;
        match points.last_mut() {
            Some(last) if last.0 == w => last.1 = frac,
            _ => points.push((w, frac)),
        }
    }
    Ok(StrengthCdf { points })
}

/// Which family of graphs a τ-versus-clustering curve walks through.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum CurveSpec {
    /// Small world graphs; knob values are rewiring probabilities.
    SmallWorld { n: usize, k: usize, seed: u64 },
    /// A BA graph tuned by degree-preserving swaps; knob values are target clusterings.
    TunedBa {
        n: usize,
        m: usize,
        seed: u64,
        max_swaps: usize,
        tolerance: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub knob: f64,
    pub clustering: f64,
    pub tau: f64,
}

/// One `(clustering, τ)` point per knob value, sorted by clustering.
pub fn tau_vs_clustering_curve(spec: &CurveSpec, knobs: &[f64], workers: usize) -> Result<Vec<CurvePoint>> {
    if knobs.is_empty() {
        return Err(Error::EmptyInput("curve needs at least one knob value".into()));
    }
    let base = match spec {
        CurveSpec::TunedBa { n, m, seed, .. } => Some(generate(&GenParams::ba(*n, *m, *seed))?),
        CurveSpec::SmallWorld { .. } => None,
    };
    let mut points = Vec::with_capacity(knobs.len());
    for &knob in knobs {
        let g = match (spec, &base) {
            (CurveSpec::SmallWorld { n, k, seed }, _) => generate(&GenParams {
                model: Model::Sw { n: *n, k: *k, p: knob },
                seed: *seed,
            })?,
            (CurveSpec::TunedBa { seed, max_swaps, tolerance, .. }, Some(base)) => {
                let params = TuneParams {
                    target_clustering: knob,
                    max_swaps: *max_swaps,
                    tolerance: *tolerance,
                };
                tune_clustering(base, &params, *seed)?.graph
            }
            (CurveSpec::TunedBa { .. }, None) => unreachable!(),
        };
        let report = positiveness(&g, workers)?;
        points.push(CurvePoint {
            knob,
            clustering: report.clustering,
            tau: report.tau,
        });
    }
    points.sort_by(|a, b| a.clustering.total_cmp(&b.clustering).then(a.knob.total_cmp(&b.knob)));
    Ok(points)
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && values[order[end + 1]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end) as f64 / 2.0 + 1.0;
        for &idx in &order[start..=end] {
            out[idx] = rank;
        }
        start = end + 1;
    }
    out
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    (vx > 0.0 && vy > 0.0).then(|| cov / (vx * vy).sqrt())
}
