//! Finite windows of connected, locally finite weighted graphs.
//!
//! Vertices carry a strictly positive measure `mu(x)`, directed edge entries
//! carry a strictly positive weight `w_xy`. Adjacency is stored in compressed
//! sparse row form with every neighbor list sorted by vertex id, which fixes
//! the coordinate order of gradient vectors.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u64;

/// One undirected edge of an input edge list. `w` is the weight seen from
/// `u` (that is `w_uv`); `w_rev` is `w_vu` and defaults to `w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_rev: Option<f64>,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, w: f64) -> Self {
        Edge {
            u,
            v,
            w,
            w_rev: None,
        }
    }

    pub fn asymmetric(u: VertexId, v: VertexId, w: f64, w_rev: f64) -> Self {
        Edge {
            u,
            v,
            w,
            w_rev: Some(w_rev),
        }
    }
}

/// Vertices at hop distance strictly less than `radius` from `center`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: VertexId,
    pub radius: usize,
    pub members: BTreeSet<VertexId>,
}

/// An immutable, validated weighted graph.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    ids: Vec<VertexId>,
    measure: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    symmetric: bool,
    boundary: Vec<bool>,
    root: Option<usize>,
}

fn check_weight(u: VertexId, v: VertexId, w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveWeight(u, v, w))
    }
}

/// Validates an edge list and vertex measure and assembles the graph.
///
/// Every vertex named by an edge needs a measure, and every measured vertex
/// must be reachable. Self-loops and repeated edges (in either orientation)
/// are rejected.
pub fn build_graph<M>(edges: &[Edge], measure: M) -> Result<WeightedGraph>
where
    M: IntoIterator<Item = (VertexId, f64)>,
{
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut mu: BTreeMap<VertexId, f64> = BTreeMap::new();
    for (id, m) in measure {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::NonPositiveMeasure(id, m));
        }
        mu.insert(id, m);
    }

    let mut seen = BTreeSet::new();
    for e in edges {
        if e.u == e.v {
            return Err(Error::SelfLoop(e.u));
        }
        check_weight(e.u, e.v, e.w)?;
        if let Some(wr) = e.w_rev {
            check_weight(e.v, e.u, wr)?;
        }
        if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
            return Err(Error::DuplicateEdge(e.u, e.v));
        }
        for id in [e.u, e.v] {
            if !mu.contains_key(&id) {
                return Err(Error::MissingMeasure(id));
            }
        }
    }

    let ids: Vec<VertexId> = mu.keys().copied().collect();
    let measure: Vec<f64> = mu.values().copied().collect();
    let index = |id: VertexId| ids.binary_search(&id).expect("validated above");

    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); ids.len()];
    let mut symmetric = true;
    for e in edges {
        let (a, b) = (index(e.u), index(e.v));
        let back = e.w_rev.unwrap_or(e.w);
        symmetric &= back == e.w;
        adj[a].push((b, e.w));
        adj[b].push((a, back));
    }

    let mut offsets = Vec::with_capacity(ids.len() + 1);
    let mut targets = Vec::with_capacity(2 * edges.len());
    let mut weights = Vec::with_capacity(2 * edges.len());
    offsets.push(0);
    for list in &mut adj {
        list.sort_by_key(|&(t, _)| t);
        for &(t, w) in list.iter() {
            targets.push(t);
            weights.push(w);
        }
        offsets.push(targets.len());
    }

    let graph = WeightedGraph {
        boundary: vec![false; ids.len()],
        ids,
        measure,
        offsets,
        targets,
        weights,
        symmetric,
        root: None,
    };
    let dist = graph.bfs(0);
    if let Some(far) = dist.iter().position(|&d| d == usize::MAX) {
        return Err(Error::Disconnected(graph.ids[far], graph.ids[0]));
    }
    Ok(graph)
}

impl WeightedGraph {
    /// Marks a distinguished root vertex `O`.
    pub fn with_root(mut self, root: VertexId) -> Result<Self> {
        self.root = Some(self.index_of(root)?);
        Ok(self)
    }

    /// Marks vertices whose neighborhood was cut off when this finite window
    /// was taken from a larger graph.
    pub fn with_boundary<I: IntoIterator<Item = VertexId>>(mut self, ids: I) -> Result<Self> {
        for id in ids {
            let i = self.index_of(id)?;
            self.boundary[i] = true;
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> VertexId {
        self.ids[index]
    }

    pub fn index_of(&self, id: VertexId) -> Result<usize> {
        self.ids
            .binary_search(&id)
            .map_err(|_| Error::UnknownVertex(id))
    }

    pub fn contains(&self, id: VertexId) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    pub fn measure(&self, index: usize) -> f64 {
        self.measure[index]
    }

    pub fn measures(&self) -> &[f64] {
        &self.measure
    }

    /// Number of distinct neighbors `l_x`.
    pub fn degree(&self, index: usize) -> usize {
        self.offsets[index + 1] - self.offsets[index]
    }

    /// Neighbor indices of `index`, ascending.
    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.targets[self.offsets[index]..self.offsets[index + 1]]
    }

    /// `w_xy` for each neighbor `y` of `x`, aligned with [`Self::neighbors`].
    pub fn neighbor_weights(&self, index: usize) -> &[f64] {
        &self.weights[self.offsets[index]..self.offsets[index + 1]]
    }

    /// Offset of the first adjacency entry of `index`; vector fields use the
    /// same flat layout.
    pub fn offset(&self, index: usize) -> usize {
        self.offsets[index]
    }

    /// Total number of directed adjacency entries, i.e. `sum_x l_x`.
    pub fn entry_count(&self) -> usize {
        self.targets.len()
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<f64> {
        let nb = self.neighbors(from);
        nb.binary_search(&to)
            .ok()
            .map(|k| self.neighbor_weights(from)[k])
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn root(&self) -> Option<VertexId> {
        self.root.map(|i| self.ids[i])
    }

    pub fn is_boundary(&self, index: usize) -> bool {
        self.boundary[index]
    }

    pub fn boundary_ids(&self) -> Vec<VertexId> {
        (0..self.len())
            .filter(|&i| self.boundary[i])
            .map(|i| self.ids[i])
            .collect()
    }

    /// `mu_0 = min_x mu(x)`.
    pub fn min_measure(&self) -> f64 {
        self.measure.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `mu_1 = max_x mu(x)`.
    pub fn max_measure(&self) -> f64 {
        self.measure.iter().copied().fold(0.0, f64::max)
    }

    /// `w_0`, the smallest weight over all directed entries.
    pub fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `sum_{y ~ x} w_xy`.
    pub fn weighted_degree(&self, index: usize) -> f64 {
        self.neighbor_weights(index).iter().sum()
    }

    /// Hop distances from `source` to every vertex (`usize::MAX` if
    /// unreachable, which cannot happen on a validated graph).
    pub fn bfs(&self, source: usize) -> Vec<usize> {
        self.multi_source_bfs(std::iter::once(source))
    }

    /// Hop distance to the nearest of several sources.
    pub fn multi_source_bfs<I: IntoIterator<Item = usize>>(&self, sources: I) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &y in self.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Unweighted hop distance between two vertices.
    pub fn distance(&self, x: VertexId, y: VertexId) -> Result<usize> {
        let (xi, yi) = (self.index_of(x)?, self.index_of(y)?);
        Ok(self.bfs(xi)[yi])
    }

    /// `B_R(center) = {x : dist(center, x) < R}`.
    pub fn ball(&self, center: VertexId, radius: usize) -> Result<Ball> {
        let c = self.index_of(center)?;
        let members = self
            .bfs(c)
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d < radius)
            .map(|(i, _)| self.ids[i])
            .collect();
        Ok(Ball {
            center,
            radius,
            members,
        })
    }

    /// Minimal-hop path from `x` to `y`; ties are broken by taking the
    /// lexicographically smallest vertex-id sequence.
    pub fn shortest_path(&self, x: VertexId, y: VertexId) -> Result<Vec<VertexId>> {
        let (xi, yi) = (self.index_of(x)?, self.index_of(y)?);
        Ok(self
            .shortest_path_indices(xi, yi)
            .into_iter()
            .map(|i| self.ids[i])
            .collect())
    }

    pub(crate) fn shortest_path_indices(&self, from: usize, to: usize) -> Vec<usize> {
        let to_target = self.bfs(to);
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            // Neighbor lists are sorted by index, and index order is id order,
            // so the first neighbor one step closer is the smallest id.
            cur = *self
                .neighbors(cur)
                .iter()
                .find(|&&n| to_target[n] + 1 == to_target[cur])
                .expect("connected graph has a descending neighbor");
            path.push(cur);
        }
        path
    }

    /// Edge list in canonical order (`u < v`), with `w_rev` set only where
    /// the two directions differ.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.entry_count() / 2);
        for x in 0..self.len() {
            for (&y, &w) in self.neighbors(x).iter().zip(self.neighbor_weights(x)) {
                if x < y {
                    let back = self.weight(y, x).expect("adjacency is symmetric");
                    let mut e = Edge::new(self.ids[x], self.ids[y], w);
                    if back != w {
                        e.w_rev = Some(back);
                    }
                    out.push(e);
                }
            }
        }
        out
    }

    /// `(id, mu)` pairs in id order.
    pub fn measure_pairs(&self) -> Vec<(VertexId, f64)> {
        self.ids
            .iter()
            .copied()
            .zip(self.measure.iter().copied())
            .collect()
    }
}
