//! Seeded random graphs and fields for the randomized verification suites.
//!
//! Every trial draws from its own ChaCha stream selected by
//! `(seed, trial index)`, so results do not depend on evaluation order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fields::{ScalarField, VectorField};
use crate::graph::{build_graph, Edge, VertexId, WeightedGraph};

/// Degree cap for the random sparse graphs.
pub const MAX_RANDOM_DEGREE: usize = 8;

/// The RNG for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Path,
    BinaryTree,
    Grid,
    Sparse,
}

impl GraphKind {
    pub const ALL: [GraphKind; 4] = [
        GraphKind::Path,
        GraphKind::BinaryTree,
        GraphKind::Grid,
        GraphKind::Sparse,
    ];
}

#[derive(Debug, Clone)]
pub struct GraphSampler {
    pub kinds: Vec<GraphKind>,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub measure_range: (f64, f64),
    pub weight_range: (f64, f64),
    pub symmetric: bool,
}

impl Default for GraphSampler {
    fn default() -> Self {
        GraphSampler {
            kinds: GraphKind::ALL.to_vec(),
            min_vertices: 2,
            max_vertices: 60,
            measure_range: (0.1, 10.0),
            weight_range: (0.1, 10.0),
            symmetric: true,
        }
    }
}

fn topology<R: Rng + ?Sized>(rng: &mut R, kind: GraphKind, n: usize) -> Vec<(usize, usize)> {
    match kind {
        GraphKind::Path => (1..n).map(|i| (i - 1, i)).collect(),
        GraphKind::BinaryTree => (1..n).map(|i| ((i - 1) / 2, i)).collect(),
        GraphKind::Grid => {
            let cols = (n as f64).sqrt().ceil() as usize;
            let mut e = Vec::new();
            for i in 0..n {
                if i % cols + 1 < cols && i + 1 < n {
                    e.push((i, i + 1));
                }
                if i + cols < n {
                    e.push((i, i + cols));
                }
            }
            e
        }
        GraphKind::Sparse => {
            let mut deg = vec![0usize; n];
            let mut present = std::collections::HashSet::new();
            let mut e = Vec::new();
            for i in 1..n {
                // Spanning tree first so the sample is connected.
                let open: Vec<usize> = (0..i).filter(|&j| deg[j] < MAX_RANDOM_DEGREE).collect();
                let j = *open.choose(rng).expect("a tree always has a leaf");
                deg[i] += 1;
                deg[j] += 1;
                present.insert((j, i));
                e.push((j, i));
            }
            let extra = (n as f64 * rng.gen_range(0.0..1.5)) as usize;
            for _ in 0..extra {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                let key = (a.min(b), a.max(b));
                if a == b
                    || deg[a] >= MAX_RANDOM_DEGREE
                    || deg[b] >= MAX_RANDOM_DEGREE
                    || !present.insert(key)
                {
                    continue;
                }
                deg[a] += 1;
                deg[b] += 1;
                e.push(key);
            }
            e
        }
    }
}

/// A connected random graph with `n` vertices labelled `0..n`.
pub fn graph_of_kind<R: Rng + ?Sized>(
    rng: &mut R,
    kind: GraphKind,
    n: usize,
    sampler: &GraphSampler,
) -> WeightedGraph {
    let n = n.max(2);
    let (wl, wh) = sampler.weight_range;
    let (ml, mh) = sampler.measure_range;
    let edges: Vec<Edge> = topology(rng, kind, n)
        .into_iter()
        .map(|(a, b)| {
            let w = log_uniform(rng, wl, wh);
            if sampler.symmetric {
                Edge::new(a as VertexId, b as VertexId, w)
            } else {
                Edge::asymmetric(a as VertexId, b as VertexId, w, log_uniform(rng, wl, wh))
            }
        })
        .collect();
    let measure: Vec<(VertexId, f64)> = (0..n)
        .map(|i| (i as VertexId, log_uniform(rng, ml, mh)))
        .collect();
    build_graph(&edges, measure).expect("generated graphs are valid")
}

pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, sampler: &GraphSampler) -> WeightedGraph {
    let kind = *sampler.kinds.choose(rng).expect("at least one graph kind");
    let n = rng.gen_range(sampler.min_vertices..=sampler.max_vertices.max(sampler.min_vertices));
    graph_of_kind(rng, kind, n, sampler)
}

/// A log-uniform overall magnitude so suites exercise scale invariance.
pub fn random_magnitude<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    log_uniform(rng, 1e-3, 1e3)
}

/// Independent uniform values in `[-1, 1]` at every vertex, times a random
/// magnitude.
pub fn random_scalar<'g, R: Rng + ?Sized>(rng: &mut R, g: &'g WeightedGraph) -> ScalarField<'g> {
    let scale = random_magnitude(rng);
    let vals = (0..g.len())
        .map(|_| scale * rng.gen_range(-1.0..1.0))
        .collect();
    ScalarField::new(g, vals).expect("one value per vertex")
}

/// Random values on the ball `B_r(c)` for a random center and
/// `1 <= r <= max_radius`, zero elsewhere.
pub fn random_compact_scalar<'g, R: Rng + ?Sized>(
    rng: &mut R,
    g: &'g WeightedGraph,
    max_radius: usize,
) -> ScalarField<'g> {
    let center = rng.gen_range(0..g.len());
    let radius = rng.gen_range(1..=max_radius.max(1));
    let dist = g.bfs(center);
    let scale = random_magnitude(rng);
    let vals = dist
        .iter()
        .map(|&d| {
            if d < radius {
                scale * rng.gen_range(-1.0..1.0)
            } else {
                0.0
            }
        })
        .collect();
    ScalarField::new(g, vals).expect("one value per vertex")
}

/// Random coordinates everywhere, with roughly one vertex in ten carrying
/// the zero vector.
pub fn random_vector<'g, R: Rng + ?Sized>(rng: &mut R, g: &'g WeightedGraph) -> VectorField<'g> {
    let scale = random_magnitude(rng);
    let mut vals = Vec::with_capacity(g.entry_count());
    for x in 0..g.len() {
        let zero = rng.gen_bool(0.1);
        for _ in 0..g.degree(x) {
            vals.push(if zero {
                0.0
            } else {
                scale * rng.gen_range(-1.0..1.0)
            });
        }
    }
    VectorField::from_flat(g, vals).expect("layout matches graph")
}
