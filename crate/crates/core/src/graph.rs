//! Undirected simple graph with sorted adjacency lists.
//!
//! Every analysis in this crate reads a [`Graph`]: degrees, common neighbors,
//! tie strength and clustering are all computed from the per-node sorted
//! neighbor vectors, so the pairwise primitives are linear merges.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node index in `[0, node_count)`.
pub type NodeId = usize;

/// An undirected edge in canonical orientation (`i < j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRef {
    pub i: NodeId,
    pub j: NodeId,
}

impl EdgeRef {
    pub fn new(a: NodeId, b: NodeId) -> Result<Self> {
        match a.cmp(&b) {
            Ordering::Less => Ok(EdgeRef { i: a, j: b }),
            Ordering::Greater => Ok(EdgeRef { i: b, j: a }),
            Ordering::Equal => Err(Error::SelfLoop(a)),
        }
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `node_count` isolated nodes.
    pub fn new(node_count: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops and duplicates.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adjacency = vec![Vec::new(); node_count];
        let mut edge_count = 0;
        for (a, b) in edges {
            check_node(a, node_count)?;
            check_node(b, node_count)?;
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
            edge_count += 1;
        }
        for (v, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let e = EdgeRef::new(v, w[0])?;
                return Err(Error::DuplicateEdge(e.i, e.j));
            }
        }
        Ok(Graph {
            adjacency,
            edge_count,
        })
    }

    /// Builds a graph from an edge list, silently dropping self-loops and
    /// merging repeated or reciprocal pairs.
    pub fn from_edges_lossy<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adjacency = vec![Vec::new(); node_count];
        for (a, b) in edges {
            check_node(a, node_count)?;
            check_node(b, node_count)?;
            if a != b {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        let mut degree_sum = 0;
        for list in adjacency.iter_mut() {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: degree_sum / 2,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn degree(&self, i: NodeId) -> Result<usize> {
        self.check(i)?;
        Ok(self.adjacency[i].len())
    }

    /// Sorted neighbor list of `i`.
    ///
    /// Panics if `i` is out of range; use [`Graph::degree`] for a checked lookup.
    pub fn neighbors(&self, i: NodeId) -> &[NodeId] {
        &self.adjacency[i]
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        i < self.node_count() && self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Edges in canonical order: sorted by `i`, then `j`.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, list)| {
            let start = list.partition_point(|&j| j <= i);
            list[start..].iter().map(move |&j| EdgeRef { i, j })
        })
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// The set c(i, j) of common neighbors, sorted.
    pub fn common_neighbors(&self, i: NodeId, j: NodeId) -> Result<Vec<NodeId>> {
        self.check_pair(i, j)?;
        let mut out = Vec::new();
        merge_intersect(&self.adjacency[i], &self.adjacency[j], |v| out.push(v));
        Ok(out)
    }

    /// |c(i, j)| without allocating.
    pub fn common_count(&self, i: NodeId, j: NodeId) -> Result<usize> {
        self.check_pair(i, j)?;
        Ok(self.common_count_unchecked(i, j))
    }

    pub(crate) fn common_count_unchecked(&self, i: NodeId, j: NodeId) -> usize {
        let mut n = 0;
        merge_intersect(&self.adjacency[i], &self.adjacency[j], |_| n += 1);
        n
    }

    /// Neighborhood overlap `c_ij / (k_i - 1 + k_j - 1 - c_ij)` of an existing tie.
    ///
    /// A pendant pair (both endpoints of degree 1) has a zero denominator and
    /// is given strength 0.
    pub fn tie_strength(&self, i: NodeId, j: NodeId) -> Result<f64> {
        self.check_pair(i, j)?;
        if !self.has_edge(i, j) {
            let e = EdgeRef::new(i, j)?;
            return Err(Error::MissingEdge(e.i, e.j));
        }
        Ok(self.tie_strength_unchecked(i, j))
    }

    pub(crate) fn tie_strength_unchecked(&self, i: NodeId, j: NodeId) -> f64 {
        let c = self.common_count_unchecked(i, j);
        let denom = self.adjacency[i].len() + self.adjacency[j].len() - 2 - c;
        if denom == 0 {
            0.0
        } else {
            c as f64 / denom as f64
        }
    }

    /// Number of triangles through `i`.
    pub fn triangles(&self, i: NodeId) -> Result<usize> {
        self.check(i)?;
        Ok(self.triangles_unchecked(i))
    }

    fn triangles_unchecked(&self, i: NodeId) -> usize {
        let doubled: usize = self.adjacency[i]
            .iter()
            .map(|&j| self.common_count_unchecked(i, j))
            .sum();
        doubled / 2
    }

    /// Local clustering `t_i / C(k_i, 2)`, defined as 0 when `k_i < 2`.
    pub fn local_clustering(&self, i: NodeId) -> Result<f64> {
        self.check(i)?;
        Ok(self.local_clustering_unchecked(i))
    }

    fn local_clustering_unchecked(&self, i: NodeId) -> f64 {
        let k = self.adjacency[i].len();
        if k < 2 {
            return 0.0;
        }
        let pairs = (k * (k - 1) / 2) as f64;
        self.triangles_unchecked(i) as f64 / pairs
    }

    /// Mean local clustering over all nodes, degree-0/1 nodes counted as 0.
    pub fn avg_clustering(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let sum: f64 = (0..self.node_count())
            .into_par_iter()
            .map(|i| self.local_clustering_unchecked(i))
            .collect::<Vec<_>>()
            .iter()
            .sum();
        sum / self.node_count() as f64
    }

    /// Edge-sum form of clustering, `(1/|V|) Σ c_ij / C(k_i, 2)`, summed over
    /// both orientations of every edge.
    ///
    /// Over ordered pairs this is exactly twice [`Graph::avg_clustering`];
    /// it is kept as a diagnostic.
    pub fn edge_sum_clustering(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let mut sum = 0.0;
        for (i, list) in self.adjacency.iter().enumerate() {
            let k = list.len();
            if k < 2 {
                continue;
            }
            let pairs = (k * (k - 1) / 2) as f64;
            for &j in list {
                sum += self.common_count_unchecked(i, j) as f64 / pairs;
            }
        }
        sum / self.node_count() as f64
    }

    pub fn add_edge(&mut self, i: NodeId, j: NodeId) -> Result<()> {
        self.check_pair(i, j)?;
        let pos_i = match self.adjacency[i].binary_search(&j) {
            Ok(_) => {
                let e = EdgeRef::new(i, j)?;
                return Err(Error::DuplicateEdge(e.i, e.j));
            }
            Err(p) => p,
        };
        self.adjacency[i].insert(pos_i, j);
        let pos_j = self.adjacency[j].binary_search(&i).unwrap_err();
        self.adjacency[j].insert(pos_j, i);
        self.edge_count += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, i: NodeId, j: NodeId) -> Result<()> {
        self.check_pair(i, j)?;
        let pos_i = self.adjacency[i].binary_search(&j).map_err(|_| {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            Error::MissingEdge(a, b)
        })?;
        self.adjacency[i].remove(pos_i);
        let pos_j = self.adjacency[j]
            .binary_search(&i)
            .expect("adjacency is symmetric");
        self.adjacency[j].remove(pos_j);
        self.edge_count -= 1;
        Ok(())
    }

    /// Applies the node permutation `perm` (old id -> new id).
    pub fn relabel(&self, perm: &[NodeId]) -> Result<Graph> {
        if perm.len() != self.node_count() {
            return Err(Error::params(format!(
                "permutation has {} entries, graph has {} nodes",
                perm.len(),
                self.node_count()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::params("relabeling is not a permutation"));
            }
        }
        Graph::from_edges(
            self.node_count(),
            self.edges().map(|e| (perm[e.i], perm[e.j])),
        )
    }

    /// Checks symmetry, simplicity, sortedness and the cached edge count.
    pub fn validate(&self) -> Result<()> {
        let mut degree_sum = 0;
        for (i, list) in self.adjacency.iter().enumerate() {
            degree_sum += list.len();
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invariant(format!(
                    "adjacency of {i} unsorted or duplicated"
                )));
            }
            for &j in list {
                if j == i {
                    return Err(Error::Invariant(format!("self-loop on {i}")));
                }
                if !self.has_edge(j, i) {
                    return Err(Error::Invariant(format!("asymmetric edge ({i}, {j})")));
                }
            }
        }
        if degree_sum != 2 * self.edge_count {
            return Err(Error::Invariant(format!(
                "edge_count {} but degree sum {degree_sum}",
                self.edge_count
            )));
        }
        Ok(())
    }

    fn check(&self, i: NodeId) -> Result<()> {
        check_node(i, self.node_count())
    }

    fn check_pair(&self, i: NodeId, j: NodeId) -> Result<()> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        Ok(())
    }
}

fn check_node(i: NodeId, node_count: usize) -> Result<()> {
    if i < node_count {
        Ok(())
    } else {
        Err(Error::InvalidNode {
            node: i,
            node_count,
        })
    }
}

/// Linear merge over two sorted slices, calling `f` on every shared element.
pub(crate) fn merge_intersect(a: &[NodeId], b: &[NodeId], mut f: impl FnMut(NodeId)) {
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            Ordering::Less => x += 1,
            Ordering::Greater => y += 1,
            Ordering::Equal => {
                f(a[x]);
                x += 1;
                y += 1;
            }
        }
    }
}
