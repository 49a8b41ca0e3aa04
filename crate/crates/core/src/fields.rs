//! Vertex functions and variable-dimension vector fields.
//!
//! A [`ScalarField`] assigns a real number to every vertex of a window. A
//! [`VectorField`] assigns to each vertex `x` a vector in `R^{l_x}`, with one
//! coordinate per neighbor in the graph's canonical neighbor order; this is
//! the space the gradient lives in. Both are stored densely, aligned with the
//! graph's vertex indices (vector fields use the graph's flat adjacency
//! layout), and both borrow the graph they are defined on.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};
use crate::numeric::{pairwise_sum, sum_terms};

/// An integrability exponent in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Accepts `p >= 1`; `f64::INFINITY` maps to [`Exponent::Infinity`].
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p >= 1.0 && p.is_finite() {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::ExponentOutOfRange(p, "need 1 <= p <= inf"))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    /// Hölder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }
}

/// A single exponent `p`, or one exponent per derivative order
/// `(p_0, ..., p_m)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExponentSpec {
    Single(Exponent),
    Mixed(Vec<Exponent>),
}

impl ExponentSpec {
    pub fn single(p: f64) -> Result<Self> {
        Exponent::new(p).map(ExponentSpec::Single)
    }

    pub fn mixed(ps: &[f64]) -> Result<Self> {
        if ps.is_empty() {
            return Err(Error::InvalidVariant("mixed exponent list is empty".into()));
        }
        ps.iter()
            .map(|&p| Exponent::new(p))
            .collect::<Result<Vec<_>>>()
            .map(ExponentSpec::Mixed)
    }

    /// Exponent applied to the order-`j` derivative.
    pub fn at(&self, j: usize) -> Exponent {
        match self {
            ExponentSpec::Single(p) => *p,
            ExponentSpec::Mixed(ps) => ps[j],
        }
    }

    /// Highest order this spec covers, or `None` for a single exponent.
    pub fn order(&self) -> Option<usize> {
        match self {
            ExponentSpec::Single(_) => None,
            ExponentSpec::Mixed(ps) => Some(ps.len() - 1),
        }
    }
}

/// `(sum_x mu(x) a(x)^p)^(1/p)`, or `max a` for `p = inf`. Finite exponents
/// are evaluated after dividing by the maximum so large `p` cannot overflow.
pub(crate) fn weighted_norm(measure: &[f64], magnitudes: &[f64], p: Exponent) -> f64 {
    let max = magnitudes.iter().copied().fold(0.0, f64::max);
    match p {
        Exponent::Infinity => max,
        Exponent::Finite(_) if max == 0.0 => 0.0,
        Exponent::Finite(1.0) => sum_terms(measure.iter().zip(magnitudes).map(|(m, a)| m * a)),
        Exponent::Finite(2.0) => {
            sum_terms(measure.iter().zip(magnitudes).map(|(m, a)| m * a * a)).sqrt()
        }
        Exponent::Finite(p) => {
            let s = sum_terms(
                measure
                    .iter()
                    .zip(magnitudes)
                    .map(|(m, a)| m * (a / max).powf(p)),
            );
            max * s.powf(1.0 / p)
        }
    }
}

/// `sum_x mu(x) a(x)^p` for finite `p`.
pub(crate) fn weighted_power_sum(measure: &[f64], magnitudes: &[f64], p: f64) -> f64 {
    sum_terms(measure.iter().zip(magnitudes).map(|(m, a)| m * a.powf(p)))
}

fn same_graph(a: &WeightedGraph, b: &WeightedGraph) -> Result<()> {
    if std::ptr::eq(a, b) {
        Ok(())
    } else {
        Err(Error::GraphMismatch)
    }
}

/// A real-valued function on the vertices of a graph window.
#[derive(Debug, Clone)]
pub struct ScalarField<'g> {
    graph: &'g WeightedGraph,
    values: Vec<f64>,
}

impl<'g> ScalarField<'g> {
    /// Values indexed like the graph's vertices.
    pub fn new(graph: &'g WeightedGraph, values: Vec<f64>) -> Result<Self> {
        if values.len() != graph.len() {
            return Err(Error::LengthMismatch {
                expected: graph.len(),
                found: values.len(),
            });
        }
        Ok(ScalarField { graph, values })
    }

    pub fn zeros(graph: &'g WeightedGraph) -> Self {
        ScalarField {
            graph,
            values: vec![0.0; graph.len()],
        }
    }

    pub fn constant(graph: &'g WeightedGraph, c: f64) -> Self {
        ScalarField {
            graph,
            values: vec![c; graph.len()],
        }
    }

    /// Evaluates `f(id)` at every vertex.
    pub fn from_fn<F: FnMut(VertexId) -> f64>(graph: &'g WeightedGraph, mut f: F) -> Self {
        ScalarField {
            graph,
            values: graph.ids().iter().map(|&id| f(id)).collect(),
        }
    }

    /// Vertices not listed are zero.
    pub fn from_sparse<I>(graph: &'g WeightedGraph, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, f64)>,
    {
        let mut u = Self::zeros(graph);
        for (id, v) in entries {
            u.values[graph.index_of(id)?] = v;
        }
        Ok(u)
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn get(&self, id: VertexId) -> Result<f64> {
        Ok(self.values[self.graph.index_of(id)?])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `{x : u(x) != 0}`.
    pub fn support(&self) -> BTreeSet<VertexId> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, _)| self.graph.id(i))
            .collect()
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        ScalarField {
            graph: self.graph,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, other: &Self, f: F) -> Result<Self> {
        same_graph(self.graph, other.graph)?;
        Ok(ScalarField {
            graph: self.graph,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// `||u||_p`.
    pub fn norm(&self, p: Exponent) -> f64 {
        let abs: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        weighted_norm(self.graph.measures(), &abs, p)
    }

    /// `int |u|^p dmu` for finite `p`.
    pub fn power_integral(&self, p: f64) -> f64 {
        let abs: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        weighted_power_sum(self.graph.measures(), &abs, p)
    }

    /// `int u dmu`.
    pub fn integral(&self) -> f64 {
        sum_terms(
            self.values
                .iter()
                .zip(self.graph.measures())
                .map(|(v, m)| m * v),
        )
    }

    /// `int u v dmu`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        same_graph(self.graph, other.graph)?;
        let m = self.graph.measures();
        Ok(sum_terms(
            (0..m.len()).map(|i| m[i] * self.values[i] * other.values[i]),
        ))
    }
}

/// An element of the variable-dimension space: a vector in `R^{l_x}` at
/// every vertex `x`.
#[derive(Debug, Clone)]
pub struct VectorField<'g> {
    graph: &'g WeightedGraph,
    values: Vec<f64>,
}

impl<'g> VectorField<'g> {
    pub fn zeros(graph: &'g WeightedGraph) -> Self {
        VectorField {
            graph,
            values: vec![0.0; graph.entry_count()],
        }
    }

    /// Flat coordinates in the graph's adjacency layout.
    pub fn from_flat(graph: &'g WeightedGraph, values: Vec<f64>) -> Result<Self> {
        if values.len() != graph.entry_count() {
            return Err(Error::LengthMismatch {
                expected: graph.entry_count(),
                found: values.len(),
            });
        }
        Ok(VectorField { graph, values })
    }

    /// One vector per vertex, in vertex-index order. Each must have exactly
    /// `l_x` coordinates.
    pub fn from_vectors(graph: &'g WeightedGraph, vectors: &[Vec<f64>]) -> Result<Self> {
        if vectors.len() != graph.len() {
            return Err(Error::LengthMismatch {
                expected: graph.len(),
                found: vectors.len(),
            });
        }
        let mut values = Vec::with_capacity(graph.entry_count());
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != graph.degree(i) {
                return Err(Error::DimensionMismatch {
                    vertex: graph.id(i),
                    expected: graph.degree(i),
                    found: v.len(),
                });
            }
            values.extend_from_slice(v);
        }
        Ok(VectorField { graph, values })
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    pub fn flat(&self) -> &[f64] {
        &self.values
    }

    /// The vector at vertex index `index`.
    pub fn at(&self, index: usize) -> &[f64] {
        let start = self.graph.offset(index);
        &self.values[start..start + self.graph.degree(index)]
    }

    pub fn get(&self, id: VertexId) -> Result<&[f64]> {
        Ok(self.at(self.graph.index_of(id)?))
    }

    /// Euclidean length `|f(x)|` at every vertex.
    pub fn pointwise_norms(&self) -> Vec<f64> {
        (0..self.graph.len())
            .map(|i| {
                let v = self.at(i);
                let max = v.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
                if max == 0.0 {
                    0.0
                } else {
                    max * v.iter().map(|c| (c / max) * (c / max)).sum::<f64>().sqrt()
                }
            })
            .collect()
    }

    /// `{x : f(x) != 0}`.
    pub fn support(&self) -> BTreeSet<VertexId> {
        (0..self.graph.len())
            .filter(|&i| self.at(i).iter().any(|&c| c != 0.0))
            .map(|i| self.graph.id(i))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        VectorField {
            graph: self.graph,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, other: &Self, f: F) -> Result<Self> {
        same_graph(self.graph, other.graph)?;
        Ok(VectorField {
            graph: self.graph,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `||f||_p = (int |f|^p dmu)^(1/p)`.
    pub fn norm(&self, p: Exponent) -> f64 {
        weighted_norm(self.graph.measures(), &self.pointwise_norms(), p)
    }

    /// `int |f|^p dmu` for finite `p`.
    pub fn power_integral(&self, p: f64) -> f64 {
        weighted_power_sum(self.graph.measures(), &self.pointwise_norms(), p)
    }

    /// `int <f, g> dmu`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        same_graph(self.graph, other.graph)?;
        let g = self.graph;
        Ok(sum_terms((0..g.len()).map(|i| {
            let dot = pairwise_sum(
                &self
                    .at(i)
                    .iter()
                    .zip(other.at(i))
                    .map(|(a, b)| a * b)
                    .collect::<Vec<_>>(),
            );
            g.measure(i) * dot
        })))
    }
}

/// `||u||_p` for `p` in `[1, inf]`.
pub fn lp_norm(u: &ScalarField<'_>, p: f64) -> Result<f64> {
    Ok(u.norm(Exponent::new(p)?))
}

/// `||f||_p` on the variable-dimension space.
pub fn vp_norm(f: &VectorField<'_>, p: f64) -> Result<f64> {
    Ok(f.norm(Exponent::new(p)?))
}

/// `int <f, g> dmu`.
pub fn vp_inner(f: &VectorField<'_>, g: &VectorField<'_>) -> Result<f64> {
    f.inner(g)
}

/// Support of a scalar field.
pub fn support(u: &ScalarField<'_>) -> BTreeSet<VertexId> {
    u.support()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, Edge};

    fn two_vertex() -> WeightedGraph {
        build_graph(&[Edge::new(1, 2, 1.0)], vec![(1, 1.0), (2, 1.0)]).unwrap()
    }

    fn nstar_window(n: u64) -> WeightedGraph {
        let edges: Vec<_> = (1..n).map(|i| Edge::new(i, i + 1, 1.0)).collect();
        build_graph(&edges, (1..=n).map(|i| (i, 1.0 / (i * i) as f64))).unwrap()
    }

    #[test]
    fn exponent_validation_and_conjugates() {
        assert!(Exponent::new(0.5).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
        assert_eq!(Exponent::new(f64::INFINITY).unwrap(), Exponent::Infinity);
        assert_eq!(Exponent::Finite(1.0).conjugate(), Exponent::Infinity);
        assert_eq!(Exponent::Infinity.conjugate(), Exponent::Finite(1.0));
        assert_eq!(Exponent::Finite(3.0).conjugate(), Exponent::Finite(1.5));
        assert!(ExponentSpec::mixed(&[2.0, 0.9]).is_err());
        assert_eq!(
            ExponentSpec::mixed(&[2.0, 3.0, 4.0]).unwrap().order(),
            Some(2)
        );
    }

    #[test]
    fn zero_field_has_zero_norms() {
        let g = two_vertex();
        let u = ScalarField::zeros(&g);
        for p in [1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
            assert_eq!(lp_norm(&u, p).unwrap(), 0.0);
        }
        assert_eq!(vp_norm(&VectorField::zeros(&g), 2.0).unwrap(), 0.0);
        assert!(u.support().is_empty());
        assert_eq!(
            lp_norm(&u, 0.0),
            Err(Error::ExponentOutOfRange(0.0, "need 1 <= p <= inf"))
        );
    }

    #[test]
    fn single_vertex_norm() {
        let g = build_graph(&[Edge::new(0, 1, 1.0)], vec![(0, 4.0), (1, 1.0)]).unwrap();
        let u = ScalarField::from_sparse(&g, [(0, 3.0)]).unwrap();
        assert!((lp_norm(&u, 2.0).unwrap() - 6.0).abs() < 1e-15);
        assert_eq!(lp_norm(&u, f64::INFINITY).unwrap(), 3.0);
        assert_eq!(u.support(), BTreeSet::from([0]));
    }

    #[test]
    fn nstar_constant_norm_is_partial_zeta() {
        let g = nstar_window(1000);
        let u = ScalarField::constant(&g, 1.0);
        let expected: f64 = (1..=1000).map(|n| 1.0 / (n * n) as f64).sum();
        let got = lp_norm(&u, 2.0).unwrap().powi(2);
        assert!((got - expected).abs() / expected < 1e-14);
        assert!((got - std::f64::consts::PI.powi(2) / 6.0).abs() < 1.1e-3);
    }

    #[test]
    fn vector_norms_and_inner_products() {
        let g = two_vertex();
        let f = VectorField::from_vectors(&g, &[vec![1.0], vec![1.0]]).unwrap();
        assert!((vp_norm(&f, 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let f = VectorField::from_vectors(&g, &[vec![1.0], vec![2.0]]).unwrap();
        let h = VectorField::from_vectors(&g, &[vec![3.0], vec![4.0]]).unwrap();
        assert_eq!(vp_inner(&f, &h).unwrap(), 11.0);
        assert_eq!(vp_inner(&f, &VectorField::zeros(&g)).unwrap(), 0.0);
        let ff = vp_inner(&f, &f).unwrap();
        assert!((ff - vp_norm(&f, 2.0).unwrap().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn vector_dimension_checked() {
        let g = build_graph(
            &[Edge::new(1, 2, 1.0), Edge::new(2, 3, 1.0)],
            vec![(1, 1.0), (2, 1.0), (3, 1.0)],
        )
        .unwrap();
        let err = VectorField::from_vectors(&g, &[vec![1.0], vec![1.0], vec![1.0]]);
        assert_eq!(
            err.unwrap_err(),
            Error::DimensionMismatch {
                vertex: 2,
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn operands_must_share_a_graph() {
        let g = two_vertex();
        let h = two_vertex();
        let a = ScalarField::zeros(&g);
        let b = ScalarField::zeros(&h);
        assert_eq!(a.add(&b).unwrap_err(), Error::GraphMismatch);
        let fa = VectorField::zeros(&g);
        let fb = VectorField::zeros(&h);
        assert_eq!(vp_inner(&fa, &fb).unwrap_err(), Error::GraphMismatch);
    }

    #[test]
    fn large_exponent_does_not_overflow() {
        let g = two_vertex();
        let u = ScalarField::new(&g, vec![1e200, 1e200]).unwrap();
        let n = u.norm(Exponent::Finite(8.0));
        assert!((n / 1e200 - 2f64.powf(1.0 / 8.0)).abs() < 1e-14);
    }
}
