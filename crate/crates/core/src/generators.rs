//! Seeded synthetic network generators and a degree-preserving clustering tuner.
//!
//! All randomness comes from a `ChaCha8Rng` seeded from the 64-bit seed, so a
//! given parameter set and seed always produce the same edge set.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    /// Preferential attachment: `n` nodes, `m` ties per new node.
    Ba { n: usize, m: usize },
    /// Ring lattice with `k` neighbors per side, each tie rewired with probability `p`.
    Sw { n: usize, k: usize, p: f64 },
    /// Nearest-neighbor growth with potential-edge conversion rate `u(1-r)`.
    Cnnr { n: usize, u: f64, r: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    #[serde(flatten)]
    pub model: Model,
    pub seed: u64,
}

impl GenParams {
    pub fn ba(n: usize, m: usize, seed: u64) -> Self {
        GenParams { model: Model::Ba { n, m }, seed }
    }

    pub fn sw(n: usize, k: usize, p: f64, seed: u64) -> Self {
        GenParams { model: Model::Sw { n, k, p }, seed }
    }

    pub fn cnnr(n: usize, u: f64, r: f64, seed: u64) -> Self {
        GenParams { model: Model::Cnnr { n, u, r }, seed }
    }

    pub fn validate(&self) -> Result<()> {
        match self.model {
            Model::Ba { n, m } => {
                if m == 0 {
                    return Err(Error::params("BA needs m >= 1"));
                }
                if n < m + 1 {
                    return Err(Error::params(format!("BA needs N >= m+1, got N={n}, m={m}")));
                }
            }
            Model::Sw { n, k, p } => {
                if k == 0 {
                    return Err(Error::params("SW needs K >= 1"));
                }
                if n <= 2 * k {
                    return Err(Error::params(format!("SW needs N > 2K, got N={n}, K={k}")));
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::params(format!("SW needs p in [0,1], got {p}")));
                }
            }
            Model::Cnnr { n, u, r } => {
                if !(u > 0.0 && u < 1.0) {
                    return Err(Error::params(format!("CNNR needs 0 < u < 1, got {u}")));
                }
                if !(0.0..=1.0).contains(&r) {
                    return Err(Error::params(format!("CNNR needs r in [0,1], got {r}")));
                }
                if n < 2 {
                    return Err(Error::params("CNNR needs N >= 2"));
                }
            }
        }
        Ok(())
    }
}

pub fn generate(params: &GenParams) -> Result<Graph> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    match params.model {
        Model::Ba { n, m } => Ok(ba(n, m, &mut rng)),
        Model::Sw { n, k, p } => Ok(sw(n, k, p, &mut rng)),
        Model::Cnnr { n, u, r } => Ok(cnnr(n, u, r, &mut rng)),
    }
}

pub fn gen_ba(n: usize, m: usize, seed: u64) -> Result<Graph> {
    generate(&GenParams::ba(n, m, seed))
}

pub fn gen_sw(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph> {
    generate(&GenParams::sw(n, k, p, seed))
}

pub fn gen_cnnr(n: usize, u: f64, r: f64, seed: u64) -> Result<Graph> {
    generate(&GenParams::cnnr(n, u, r, seed))
}

fn ba(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::with_capacity(m * (m - 1) / 2 + m * (n - m));
    // every edge endpoint once, so a uniform pick is degree-proportional
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * edges.capacity());
    for a in 0..m {
        for b in a + 1..m {
            edges.push((a, b));
            endpoints.extend([a, b]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for v in m..n {
        targets.clear();
        while targets.len() < m {
            let t = if endpoints.is_empty() {
                rng.gen_range(0..v)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    Graph::from_edges(n, edges).expect("BA construction is simple")
}

fn sw(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut adj: Vec<HashSet<NodeId>> = vec![HashSet::new(); n];
    for i in 0..n {
        for d in 1..=k {
            let j = (i + d) % n;
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }
    for d in 1..=k {
        for i in 0..n {
            if rng.gen::<f64>() >= p {
                continue;
            }
            let far = (i + d) % n;
            let target = (0..100)
                .map(|_| rng.gen_range(0..n))
                .find(|&w| w != i && !adj[i].contains(&w));
            if let Some(w) = target {
                adj[i].remove(&far);
                adj[far].remove(&i);
                adj[i].insert(w);
                adj[w].insert(i);
            }
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(i, set)| set.iter().filter(move |&&j| i < j).map(move |&j| (i, j)));
    Graph::from_edges(n, edges).expect("SW construction is simple")
}

/// Mutable edge set with O(1) uniform edge sampling, used while growing CNNR.
struct GrowingGraph {
    adj: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
    index: HashMap<(NodeId, NodeId), usize>,
}

impl GrowingGraph {
    fn key(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
        (a.min(b), a.max(b))
    }

    fn has(&self, a: NodeId, b: NodeId) -> bool {
        self.index.contains_key(&Self::key(a, b))
    }

    fn add_node(&mut self) -> NodeId {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    fn add(&mut self, a: NodeId, b: NodeId) {
        let key = Self::key(a, b);
        self.index.insert(key, self.edges.len());
        self.edges.push(key);
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    /// Moves the `b` end of edge number `idx` (canonical `(a, b)`) to `w`.
    fn move_end(&mut self, idx: usize, keep: NodeId, drop: NodeId, w: NodeId) {
        let old = Self::key(keep, drop);
        self.index.remove(&old);
        let new = Self::key(keep, w);
        self.index.insert(new, idx);
        self.edges[idx] = new;
        let pos = self.adj[keep].iter().position(|&x| x == drop).unwrap();
        self.adj[keep][pos] = w;
        let pos = self.adj[drop].iter().position(|&x| x == keep).unwrap();
        self.adj[drop].swap_remove(pos);
        self.adj[w].push(keep);
    }
}

/// Three-branch growth. Each step:
/// * with probability `u(1-r)`, a stored potential edge becomes a tie;
/// * with probability `u*r`, one end of a uniformly chosen tie moves to a
///   uniformly chosen node (edge count unchanged);
/// * otherwise a new node attaches to a uniformly chosen node `j`, and the
///   new node paired with each other friend of `j` is stored as a potential edge.
///
/// A conversion drawn while no usable potential edge exists becomes a node
/// addition, so the process always terminates.
fn cnnr(n: usize, u: f64, r: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = GrowingGraph {
        adj: vec![Vec::new(); 2],
        edges: Vec::new(),
        index: HashMap::new(),
    };
    g.add(0, 1);
    let mut potential: Vec<(NodeId, NodeId)> = Vec::new();
    let convert = u * (1.0 - r);
    while g.adj.len() < n {
        let x: f64 = rng.gen();
        if x < convert {
            let mut converted = false;
            while !potential.is_empty() {
                let idx = rng.gen_range(0..potential.len());
                let (a, b) = potential.swap_remove(idx);
                if !g.has(a, b) {
                    g.add(a, b);
                    converted = true;
                    break;
                }
            }
            if converted {
                continue;
            }
        } else if x < u {
            let idx = rng.gen_range(0..g.edges.len());
            let (a, b) = g.edges[idx];
            let (keep, drop) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            let nodes = g.adj.len();
            let target = (0..100)
                .map(|_| rng.gen_range(0..nodes))
                .find(|&w| w != keep && !g.has(keep, w));
            if let Some(w) = target {
                g.move_end(idx, keep, drop, w);
            }
            continue;
        }
        let anchor = rng.gen_range(0..g.adj.len());
        let v = g.add_node();
        for &l in &g.adj[anchor] {
            potential.push((v, l));
        }
        g.add(v, anchor);
    }
    let node_count = g.adj.len();
    Graph::from_edges(node_count, g.edges).expect("CNNR construction is simple")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuneParams {
    pub target_clustering: f64,
    /// Maximum number of proposed swaps.
    pub max_swaps: usize,
    pub tolerance: f64,
}

impl TuneParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.target_clustering) {
            return Err(Error::params(format!(
                "target clustering must lie in [0,1], got {}",
                self.target_clustering
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::params("tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TuneOutcome {
    pub graph: Graph,
    pub clustering: f64,
    pub accepted_swaps: usize,
    pub proposals: usize,
    /// True when the run stopped at `max_swaps` outside the tolerance band.
    pub best_effort: bool,
}

/// Triangle bookkeeping for the tuner: degrees never change, so average
/// clustering moves by `Σ Δt_v / C(k_v, 2) / N`.
struct Tuner {
    g: Graph,
    weight: Vec<f64>,
    edges: Vec<(NodeId, NodeId)>,
    index: HashMap<(NodeId, NodeId), usize>,
    shift: f64,
}

impl Tuner {
    fn new(g: Graph) -> Self {
        let n = g.node_count() as f64;
        let weight = g
            .degree_sequence()
            .into_iter()
            .map(|k| if k < 2 { 0.0 } else { 2.0 / (k * (k - 1)) as f64 / n })
            .collect();
        let edges: Vec<_> = g.edges().map(|e| (e.i, e.j)).collect();
        let index = edges.iter().enumerate().map(|(p, &e)| (e, p)).collect();
        Tuner { g, weight, edges, index, shift: 0.0 }
    }

    fn triangle_change(&mut self, a: NodeId, b: NodeId, sign: f64) {
        let mut change = 0.0;
        let weight = &self.weight;
        let common = self.g.common_neighbors(a, b).expect("valid pair");
        for &x in &common {
            change += weight[x];
        }
        change += common.len() as f64 * (weight[a] + weight[b]);
        self.shift += sign * change;
    }

    fn remove(&mut self, a: NodeId, b: NodeId) {
        self.g.remove_edge(a, b).expect("edge present");
        self.triangle_change(a, b, -1.0);
    }

    fn add(&mut self, a: NodeId, b: NodeId) {
        self.triangle_change(a, b, 1.0);
        self.g.add_edge(a, b).expect("edge absent");
    }

    /// Replaces `(a,b),(c,d)` with `(a,c),(b,d)` if the result stays simple.
    fn swap(&mut self, a: NodeId, b: NodeId, c: NodeId, d: NodeId) -> bool {
        let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
        if !distinct || self.g.has_edge(a, c) || self.g.has_edge(b, d) {
            return false;
        }
        self.remove(a, b);
        self.remove(c, d);
        self.add(a, c);
        self.add(b, d);
        true
    }

    fn commit(&mut self, a: NodeId, b: NodeId, c: NodeId, d: NodeId) {
        let key = |x: NodeId, y: NodeId| (x.min(y), x.max(y));
        let p = self.index.remove(&key(a, b)).unwrap();
        let q = self.index.remove(&key(c, d)).unwrap();
        self.edges[p] = key(a, c);
        self.edges[q] = key(b, d);
        self.index.insert(key(a, c), p);
        self.index.insert(key(b, d), q);
    }

    fn revert(&mut self, a: NodeId, b: NodeId, c: NodeId, d: NodeId) {
        self.remove(a, c);
        self.remove(b, d);
        self.add(a, b);
        self.add(c, d);
    }

    /// A swap that closes the open wedge `a - x - c`.
    fn closing_proposal(&self, rng: &mut ChaCha8Rng) -> Option<[NodeId; 4]> {
        let x = rng.gen_range(0..self.g.node_count());
        let nb = self.g.neighbors(x);
        if nb.len() < 2 {
            return None;
        }
        let pair: Vec<_> = nb.choose_multiple(rng, 2).copied().collect();
        let (a, c) = (pair[0], pair[1]);
        let b = *self.g.neighbors(a).choose(rng)?;
        let d = *self.g.neighbors(c).choose(rng)?;
        Some([a, b, c, d])
    }

    fn random_proposal(&self, rng: &mut ChaCha8Rng) -> Option<[NodeId; 4]> {
        if self.edges.len() < 2 {
            return None;
        }
        let (a, b) = self.edges[rng.gen_range(0..self.edges.len())];
        let (c, d) = self.edges[rng.gen_range(0..self.edges.len())];
        let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        Some([a, b, c, d])
    }
}

/// Degree-preserving double-edge swaps toward a target average clustering.
///
/// A swap `(a,b),(c,d) -> (a,c),(b,d)` is kept only if it leaves the graph
/// simple and strictly reduces `|clustering - target|`. While below target
/// half of the proposals are chosen to close an open wedge; the rest are
/// uniform pairs of edges.
pub fn tune_clustering(g: &Graph, params: &TuneParams, seed: u64) -> Result<TuneOutcome> {
    params.validate()?;
    let target = params.target_clustering;
    let start = g.avg_clustering();
    if (start - target).abs() <= params.tolerance {
        return Ok(TuneOutcome {
            graph: g.clone(),
            clustering: start,
            accepted_swaps: 0,
            proposals: 0,
            best_effort: false,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuner = Tuner::new(g.clone());
    let mut current = start;
    let mut accepted = 0;
    let mut proposals = 0;
    while proposals < params.max_swaps && (current - target).abs() > params.tolerance {
        proposals += 1;
        let proposal = if current < target && rng.gen_bool(0.5) {
            tuner.closing_proposal(&mut rng)
        } else {
            tuner.random_proposal(&mut rng)
        };
        let Some([a, b, c, d]) = proposal else { continue };
        tuner.shift = 0.0;
        if !tuner.swap(a, b, c, d) {
            continue;
        }
        let next = current + tuner.shift;
        if (next - target).abs() < (current - target).abs() {
            tuner.commit(a, b, c, d);
            current = next;
            accepted += 1;
        } else {
            tuner.revert(a, b, c, d);
        }
    }
    let graph = tuner.g;
    let clustering = graph.avg_clustering();
    Ok(TuneOutcome {
        best_effort: (clustering - target).abs() > params.tolerance,
        graph,
        clustering,
        accepted_swaps: accepted,
        proposals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::complete;

    #[test]
    fn validation() {
        assert!(gen_ba(10, 11, 0).is_err());
        assert!(gen_ba(10, 0, 0).is_err());
        assert!(gen_sw(20, 10, 0.1, 0).is_err());
        assert!(gen_sw(21, 10, 1.5, 0).is_err());
        assert!(gen_cnnr(100, 1.0, 0.1, 0).is_err());
        assert!(gen_cnnr(100, 0.5, -0.1, 0).is_err());
        let bad = TuneParams { target_clustering: 0.2, max_swaps: 10, tolerance: 0.0 };
        assert!(tune_clustering(&complete(4), &bad, 0).is_err());
    }

    #[test]
    fn ba_core_only_is_complete() {
        for m in 1..6 {
            assert_eq!(gen_ba(m + 1, m, 3).unwrap(), complete(m + 1));
        }
    }

    #[test]
    fn ba_edge_count_and_tail() {
        let g = gen_ba(1000, 4, 1).unwrap();
        assert_eq!(g.edge_count(), 6 + 4 * 996);
        g.validate().unwrap();
        for seed in 0..10 {
            let g = gen_ba(1000, 4, seed).unwrap();
            let mean = 2.0 * g.edge_count() as f64 / 1000.0;
            let max = *g.degree_sequence().iter().max().unwrap() as f64;
            assert!(max > 10.0 * mean, "seed {seed}: max {max}, mean {mean}");
        }
    }

    #[test]
    fn sw_edge_count_exact() {
        for p in [0.0, 0.1, 0.5, 1.0] {
            let g = gen_sw(200, 4, p, 9).unwrap();
            assert_eq!(g.edge_count(), 800);
            g.validate().unwrap();
        }
    }

    #[test]
    fn ring_lattice_clustering() {
        let g = gen_sw(50, 3, 0.0, 0).unwrap();
        let closed = 3.0 * 2.0 / (2.0 * 5.0);
        // brute-force triangle count per node
        let mut total = 0.0;
        for v in 0..50 {
            let nb = g.neighbors(v);
            let mut t = 0;
            for a in 0..nb.len() {
                for b in a + 1..nb.len() {
                    t += usize::from(g.has_edge(nb[a], nb[b]));
                }
            }
            total += t as f64 / 15.0;
        }
        assert!((total / 50.0 - closed).abs() < 1e-12);
        assert!((g.avg_clustering() - closed).abs() < 1e-12);
    }

    #[test]
    fn sw_full_rewire_low_clustering() {
        for seed in 0..10 {
            let c = gen_sw(2000, 5, 1.0, seed).unwrap().avg_clustering();
            assert!(c < 0.05, "seed {seed}: {c}");
        }
    }

    #[test]
    fn cnnr_mean_degree() {
        for seed in 0..10 {
            let g = gen_cnnr(5000, 0.9, 0.04, seed).unwrap();
            g.validate().unwrap();
            assert_eq!(g.node_count(), 5000);
            let mean = 2.0 * g.edge_count() as f64 / 5000.0;
            assert!((16.0..=22.0).contains(&mean), "seed {seed}: {mean}");
        }
    }

    #[test]
    fn cnnr_without_random_branch_stays_simple() {
        let g = gen_cnnr(300, 0.6, 0.0, 5).unwrap();
        g.validate().unwrap();
        assert_eq!(g.node_count(), 300);
        let g = gen_cnnr(2, 0.9, 0.0, 5).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn cnnr_mean_degree_grows_toward_limit() {
        let mean_over_seeds = |n: usize| {
            (0..10)
                .map(|s| 2.0 * gen_cnnr(n, 0.9, 0.04, s).unwrap().edge_count() as f64 / n as f64)
                .sum::<f64>()
                / 10.0
        };
        let means: Vec<f64> = [1000, 5000, 20000].iter().map(|&n| mean_over_seeds(n)).collect();
        let gaps: Vec<f64> = means.iter().map(|m| (20.0 - m).abs()).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{means:?}");
    }

    #[test]
    fn determinism() {
        for params in [
            GenParams::ba(500, 3, 42),
            GenParams::sw(500, 3, 0.2, 42),
            GenParams::cnnr(500, 0.8, 0.1, 42),
        ] {
            assert_eq!(generate(&params).unwrap(), generate(&params).unwrap());
        }
        assert_ne!(gen_sw(500, 3, 0.2, 1).unwrap(), gen_sw(500, 3, 0.2, 2).unwrap());
    }

    #[test]
    fn tune_noop_at_target() {
        let g = gen_ba(200, 3, 0).unwrap();
        let params = TuneParams { target_clustering: g.avg_clustering(), max_swaps: 1000, tolerance: 0.01 };
        let out = tune_clustering(&g, &params, 0).unwrap();
        assert_eq!(out.accepted_swaps, 0);
        assert_eq!(out.graph, g);
        assert!(!out.best_effort);
    }

    #[test]
    fn tune_k4_rejects_everything() {
        let k4 = complete(4);
        let params = TuneParams { target_clustering: 0.0, max_swaps: 500, tolerance: 0.01 };
        let out = tune_clustering(&k4, &params, 0).unwrap();
        assert_eq!(out.graph, k4);
        assert_eq!(out.accepted_swaps, 0);
        assert!(out.best_effort);
    }

    #[test]
    fn tune_preserves_degrees() {
        let g = gen_ba(300, 3, 4).unwrap();
        for target in [0.0, 0.25] {
            let params = TuneParams { target_clustering: target, max_swaps: 50_000, tolerance: 0.01 };
            let out = tune_clustering(&g, &params, 1).unwrap();
            out.graph.validate().unwrap();
            assert_eq!(out.graph.degree_sequence(), g.degree_sequence());
            assert!((out.clustering - out.graph.avg_clustering()).abs() < 1e-15);
            assert!(out.best_effort || (out.clustering - target).abs() <= 0.01);
        }
    }
}
