//! Discrete differential operators on a weighted graph window.
//!
//! Every operator reads only the in-window neighborhood of a vertex. On a
//! window cut from an infinite graph the values at boundary vertices are
//! therefore only exact when the input is locally constant there.

use crate::error::{Error, Result};
use crate::fields::{Exponent, ScalarField, VectorField};
use crate::numeric::{pairwise_sum, sum_terms};

/// `grad u(x)`: coordinate `i` is `sqrt(w_{x y_i} / (2 mu(x))) (u(y_i) - u(x))`
/// over the neighbors `y_i` in ascending id order.
pub fn gradient<'g>(u: &ScalarField<'g>) -> VectorField<'g> {
    let g = u.graph();
    let vals = u.values();
    let mut out = Vec::with_capacity(g.entry_count());
    for x in 0..g.len() {
        let two_mu = 2.0 * g.measure(x);
        for (&y, &w) in g.neighbors(x).iter().zip(g.neighbor_weights(x)) {
            out.push((w / two_mu).sqrt() * (vals[y] - vals[x]));
        }
    }
    VectorField::from_flat(g, out).expect("layout matches graph")
}

/// `|grad u|(x) = (1/(2 mu(x)) sum_{y~x} w_xy (u(y) - u(x))^2)^(1/2)`.
pub fn gradient_norm<'g>(u: &ScalarField<'g>) -> ScalarField<'g> {
    let g = u.graph();
    let vals = u.values();
    let out = (0..g.len())
        .map(|x| {
            let terms: Vec<f64> = g
                .neighbors(x)
                .iter()
                .zip(g.neighbor_weights(x))
                .map(|(&y, &w)| {
                    let d = vals[y] - vals[x];
                    w * d * d
                })
                .collect();
            (pairwise_sum(&terms) / (2.0 * g.measure(x))).sqrt()
        })
        .collect();
    ScalarField::new(g, out).expect("one value per vertex")
}

/// `Delta u(x) = (1/mu(x)) sum_{y~x} w_xy (u(y) - u(x))`.
pub fn laplacian<'g>(u: &ScalarField<'g>) -> ScalarField<'g> {
    let g = u.graph();
    let vals = u.values();
    let out = (0..g.len())
        .map(|x| {
            let terms: Vec<f64> = g
                .neighbors(x)
                .iter()
                .zip(g.neighbor_weights(x))
                .map(|(&y, &w)| w * (vals[y] - vals[x]))
                .collect();
            pairwise_sum(&terms) / g.measure(x)
        })
        .collect();
    ScalarField::new(g, out).expect("one value per vertex")
}

/// `Delta^k u`, with `Delta^0 u = u`.
pub fn laplacian_power<'g>(u: &ScalarField<'g>, k: usize) -> ScalarField<'g> {
    (0..k).fold(u.clone(), |acc, _| laplacian(&acc))
}

/// Either a scalar field (even order) or a vector field (odd order).
#[derive(Debug, Clone)]
pub enum NablaPayload<'g> {
    Scalar(ScalarField<'g>),
    Vector(VectorField<'g>),
}

/// `nabla^m u`: `Delta^{m/2} u` for even `m`, `grad Delta^{(m-1)/2} u` for odd.
#[derive(Debug, Clone)]
pub struct NablaResult<'g> {
    pub order: usize,
    pub payload: NablaPayload<'g>,
}

impl<'g> NablaResult<'g> {
    pub fn as_scalar(&self) -> Option<&ScalarField<'g>> {
        match &self.payload {
            NablaPayload::Scalar(s) => Some(s),
            NablaPayload::Vector(_) => None,
        }
    }

    pub fn as_vector(&self) -> Option<&VectorField<'g>> {
        match &self.payload {
            NablaPayload::Vector(v) => Some(v),
            NablaPayload::Scalar(_) => None,
        }
    }

    /// `|nabla^m u|(x)` at every vertex (absolute value or Euclidean length).
    pub fn magnitudes(&self) -> Vec<f64> {
        match &self.payload {
            NablaPayload::Scalar(s) => s.values().iter().map(|v| v.abs()).collect(),
            NablaPayload::Vector(v) => v.pointwise_norms(),
        }
    }

    /// `||nabla^m u||_p`.
    pub fn norm(&self, p: Exponent) -> f64 {
        match &self.payload {
            NablaPayload::Scalar(s) => s.norm(p),
            NablaPayload::Vector(v) => v.norm(p),
        }
    }

    /// `int |nabla^m u|^p dmu`.
    pub fn power_integral(&self, p: f64) -> f64 {
        match &self.payload {
            NablaPayload::Scalar(s) => s.power_integral(p),
            NablaPayload::Vector(v) => v.power_integral(p),
        }
    }
}

pub fn iterated_nabla<'g>(u: &ScalarField<'g>, m: usize) -> NablaResult<'g> {
    let base = laplacian_power(u, m / 2);
    let payload = if m.is_multiple_of(2) {
        NablaPayload::Scalar(base)
    } else {
        NablaPayload::Vector(gradient(&base))
    };
    NablaResult { order: m, payload }
}

/// All of `nabla^0 u, ..., nabla^m u`, sharing the Laplacian iterates.
pub fn nabla_sequence<'g>(u: &ScalarField<'g>, m: usize) -> Vec<NablaResult<'g>> {
    let mut out = Vec::with_capacity(m + 1);
    let mut lap = u.clone();
    for order in 0..=m {
        if order % 2 == 0 {
            if order > 0 {
                lap = laplacian(&lap);
            }
            out.push(NablaResult {
                order,
                payload: NablaPayload::Scalar(lap.clone()),
            });
        } else {
            out.push(NablaResult {
                order,
                payload: NablaPayload::Vector(gradient(&lap)),
            });
        }
    }
    out
}

/// The p-Laplacian
/// `Delta_p u(x) = 1/(2 mu(x)) sum_{y~x} w_xy (|grad u|^{p-2}(y) + |grad u|^{p-2}(x)) (u(y) - u(x))`.
///
/// `|grad u|^{p-2}` is taken as 0 where `|grad u| = 0` and `p < 2`. For
/// `p = 2` the factor is 1 everywhere and the result is [`laplacian`].
pub fn p_laplacian<'g>(u: &ScalarField<'g>, p: f64) -> Result<ScalarField<'g>> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::ExponentOutOfRange(p, "need 1 < p < inf"));
    }
    if p == 2.0 {
        return Ok(laplacian(u));
    }
    let g = u.graph();
    let vals = u.values();
    let factor: Vec<f64> = gradient_norm(u)
        .values()
        .iter()
        .map(|&n| if n == 0.0 { 0.0 } else { n.powf(p - 2.0) })
        .collect();
    let out = (0..g.len())
        .map(|x| {
            let terms: Vec<f64> = g
                .neighbors(x)
                .iter()
                .zip(g.neighbor_weights(x))
                .map(|(&y, &w)| w * (factor[y] + factor[x]) * (vals[y] - vals[x]))
                .collect();
            pairwise_sum(&terms) / (2.0 * g.measure(x))
        })
        .collect();
    ScalarField::new(g, out)
}

/// `(1/p) int |grad u|^p dmu`, the functional whose first variation is
/// `-Delta_p`.
pub fn p_energy(u: &ScalarField<'_>, p: f64) -> f64 {
    gradient_norm(u).power_integral(p) / p
}

/// `int phi Delta u dmu + int <grad phi, grad u> dmu`, which vanishes on
/// graphs with symmetric weights.
pub fn integration_by_parts_residual(phi: &ScalarField<'_>, u: &ScalarField<'_>) -> Result<f64> {
    if !std::ptr::eq(phi.graph(), u.graph()) {
        return Err(Error::GraphMismatch);
    }
    if !u.graph().is_symmetric() {
        return Err(Error::AsymmetricWeights);
    }
    let lhs = phi.inner(&laplacian(u))?;
    let rhs = gradient(phi).inner(&gradient(u))?;
    Ok(lhs + rhs)
}

/// `int phi Delta_p u dmu`, the pairing used by the variational identity.
pub fn p_laplacian_pairing(phi: &ScalarField<'_>, u: &ScalarField<'_>, p: f64) -> Result<f64> {
    let lp = p_laplacian(u, p)?;
    let m = u.graph().measures();
    Ok(sum_terms((0..m.len()).map(|i| m[i] * phi.at(i) * lp.at(i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, Edge, WeightedGraph};

    fn two_vertex() -> WeightedGraph {
        build_graph(&[Edge::new(1, 2, 1.0)], vec![(1, 1.0), (2, 1.0)]).unwrap()
    }

    fn unit_path(n: u64) -> WeightedGraph {
        let edges: Vec<_> = (1..n).map(|i| Edge::new(i, i + 1, 1.0)).collect();
        build_graph(&edges, (1..=n).map(|i| (i, 1.0))).unwrap()
    }

    #[test]
    fn constants_are_annihilated() {
        let g = unit_path(5);
        let u = ScalarField::constant(&g, 3.7);
        assert!(gradient(&u).is_zero());
        assert!(gradient_norm(&u).is_zero());
        assert!(laplacian(&u).is_zero());
        for p in [1.5, 2.0, 3.0] {
            assert!(p_laplacian(&u, p).unwrap().is_zero());
        }
    }

    #[test]
    fn two_vertex_hand_values() {
        let g = two_vertex();
        let u = ScalarField::new(&g, vec![0.0, 1.0]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let grad = gradient(&u);
        assert!((grad.at(0)[0] - h).abs() < 1e-16);
        assert!((grad.at(1)[0] + h).abs() < 1e-16);
        let gn = gradient_norm(&u);
        assert!((gn.at(0) - h).abs() < 1e-16 && (gn.at(1) - h).abs() < 1e-16);
        assert_eq!(laplacian(&u).values(), &[1.0, -1.0]);
    }

    #[test]
    fn quadratic_on_unit_path_has_laplacian_two() {
        let g = unit_path(9);
        let u = ScalarField::from_fn(&g, |n| (n * n) as f64);
        let lap = laplacian(&u);
        for n in 2..=8 {
            assert_eq!(lap.get(n).unwrap(), 2.0);
        }
    }

    #[test]
    fn iterated_nabla_orders() {
        let g = two_vertex();
        let u = ScalarField::new(&g, vec![0.0, 1.0]).unwrap();
        assert_eq!(
            iterated_nabla(&u, 0).as_scalar().unwrap().values(),
            u.values()
        );
        assert_eq!(
            iterated_nabla(&u, 1).as_vector().unwrap().flat(),
            gradient(&u).flat()
        );
        assert_eq!(
            iterated_nabla(&u, 2).as_scalar().unwrap().values(),
            &[1.0, -1.0]
        );
        // Delta(1, -1) at vertex 1 is -1 - 1, at vertex 2 is 1 + 1.
        assert_eq!(
            iterated_nabla(&u, 4).as_scalar().unwrap().values(),
            &[-2.0, 2.0]
        );
        let seq = nabla_sequence(&u, 4);
        for (m, r) in seq.iter().enumerate() {
            assert_eq!(r.order, m);
            assert_eq!(r.magnitudes(), iterated_nabla(&u, m).magnitudes());
        }
    }

    #[test]
    fn p_two_is_laplacian() {
        let g = unit_path(6);
        let u = ScalarField::from_fn(&g, |n| ((n * 7) % 5) as f64);
        assert_eq!(
            p_laplacian(&u, 2.0).unwrap().values(),
            laplacian(&u).values()
        );
        assert!(p_laplacian(&u, 1.0).is_err());
        assert!(p_laplacian(&u, f64::INFINITY).is_err());
    }

    #[test]
    fn p_laplacian_zero_factor_convention() {
        // u is flat around vertex 1, so |grad u|(1) = 0 and its factor drops.
        let g = unit_path(4);
        let u = ScalarField::new(&g, vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let gn = gradient_norm(&u);
        assert_eq!(gn.at(0), 0.0);
        let lp = p_laplacian(&u, 1.5).unwrap();
        assert!(lp.values().iter().all(|v| v.is_finite()));
        assert_eq!(lp.at(0), 0.0);
    }

    #[test]
    fn integration_by_parts_examples() {
        let g = two_vertex();
        let u = ScalarField::new(&g, vec![0.0, 1.0]).unwrap();
        assert_eq!(u.inner(&laplacian(&u)).unwrap(), -1.0);
        assert!((gradient(&u).inner(&gradient(&u)).unwrap() - 1.0).abs() < 1e-15);
        assert!(integration_by_parts_residual(&u, &u).unwrap().abs() < 1e-15);
        let zero = ScalarField::zeros(&g);
        assert_eq!(integration_by_parts_residual(&zero, &u).unwrap(), 0.0);

        let asym = build_graph(
            &[Edge::asymmetric(1, 2, 1.0, 2.0)],
            vec![(1, 1.0), (2, 1.0)],
        )
        .unwrap();
        let v = ScalarField::zeros(&asym);
        assert_eq!(
            integration_by_parts_residual(&v, &v),
            Err(Error::AsymmetricWeights)
        );
    }

    #[test]
    fn null_vertex_when_locally_constant() {
        let g = unit_path(7);
        let u = ScalarField::new(&g, vec![5.0, -1.0, 2.0, 2.0, 2.0, 9.0, 0.0]).unwrap();
        let x = g.index_of(4).unwrap();
        assert_eq!(laplacian(&u).at(x), 0.0);
        assert!(gradient(&u).at(x).iter().all(|&c| c == 0.0));
    }
}
