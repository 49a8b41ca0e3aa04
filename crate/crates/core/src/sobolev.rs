//! Sobolev norms `W^{m,p}` and `W^{m,P}`, the reduced `W_0^{m,2}` norm, and
//! the explicit norm-attaining dual elements.

use crate::error::{Error, Result};
use crate::fields::{Exponent, ExponentSpec, ScalarField, VectorField};
use crate::operators::{nabla_sequence, NablaResult};
use crate::report::InequalityReport;

/// Tolerance used for inequality margins after unit normalization.
pub const MARGIN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormVariant {
    /// `sum_j ||nabla^j u||_{p_j}`.
    Sum,
    /// `(sum_j ||nabla^j u||_p^p)^(1/p)`, single exponent with `1 < p < inf`.
    PowerSum,
    /// `(int u^2 + |nabla^m u|^2 dmu)^(1/2)`, equivalent on `W_0^{m,2}` for
    /// symmetric weights.
    Reduced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SobolevNorm {
    pub m: usize,
    pub exponents: ExponentSpec,
    pub variant: NormVariant,
}

impl SobolevNorm {
    /// `W^{m,p}` with the summed norm.
    pub fn sum(m: usize, p: f64) -> Result<Self> {
        Self::new(m, ExponentSpec::single(p)?, NormVariant::Sum)
    }

    /// `W^{m,P}` with `P = (p_0, ..., p_m)`.
    pub fn mixed(ps: &[f64]) -> Result<Self> {
        let spec = ExponentSpec::mixed(ps)?;
        Self::new(ps.len() - 1, spec, NormVariant::Sum)
    }

    pub fn power_sum(m: usize, p: f64) -> Result<Self> {
        Self::new(m, ExponentSpec::single(p)?, NormVariant::PowerSum)
    }

    pub fn reduced(m: usize) -> Self {
        SobolevNorm {
            m,
            exponents: ExponentSpec::Single(Exponent::Finite(2.0)),
            variant: NormVariant::Reduced,
        }
    }

    pub fn new(m: usize, exponents: ExponentSpec, variant: NormVariant) -> Result<Self> {
        let norm = SobolevNorm {
            m,
            exponents,
            variant,
        };
        norm.validate()?;
        Ok(norm)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(order) = self.exponents.order() {
            if order != self.m {
                return Err(Error::InvalidVariant(format!(
                    "{} exponents given for order {}",
                    order + 1,
                    self.m
                )));
            }
        }
        match (self.variant, &self.exponents) {
            (NormVariant::Sum, _) => Ok(()),
            (NormVariant::PowerSum, ExponentSpec::Single(Exponent::Finite(p))) if *p > 1.0 => {
                Ok(())
            }
            (NormVariant::PowerSum, _) => Err(Error::InvalidVariant(
                "power-sum norm needs a single exponent 1 < p < inf".into(),
            )),
            (NormVariant::Reduced, ExponentSpec::Single(Exponent::Finite(p))) if *p == 2.0 => {
                Ok(())
            }
            (NormVariant::Reduced, _) => Err(Error::InvalidVariant(
                "reduced norm is defined for p = 2".into(),
            )),
        }
    }
}

/// Evaluates `spec` on `u`.
///
/// On a window with marked boundary the support of `u` must stay `m` hops
/// away from it, otherwise higher derivatives would read missing neighbors.
pub fn sobolev_norm(u: &ScalarField<'_>, spec: &SobolevNorm) -> Result<f64> {
    spec.validate()?;
    if spec.variant == NormVariant::Reduced && !u.graph().is_symmetric() {
        return Err(Error::AsymmetricWeights);
    }
    check_margin(u, spec.m)?;
    let seq = nabla_sequence(u, spec.m);
    Ok(norm_from_sequence(&seq, spec))
}

pub(crate) fn norm_from_sequence(seq: &[NablaResult<'_>], spec: &SobolevNorm) -> f64 {
    match spec.variant {
        NormVariant::Sum => {
            let terms: Vec<f64> = seq
                .iter()
                .enumerate()
                .map(|(j, r)| r.norm(spec.exponents.at(j)))
                .collect();
            crate::numeric::pairwise_sum(&terms)
        }
        NormVariant::PowerSum => {
            let p = spec.exponents.at(0).value();
            let norms: Vec<f64> = seq.iter().map(|r| r.norm(Exponent::Finite(p))).collect();
            let max = norms.iter().copied().fold(0.0, f64::max);
            if max == 0.0 {
                return 0.0;
            }
            let s: f64 = norms.iter().map(|n| (n / max).powf(p)).sum();
            max * s.powf(1.0 / p)
        }
        NormVariant::Reduced => {
            let u2 = seq[0].power_integral(2.0);
            let top = if spec.m == 0 {
                u2
            } else {
                seq[spec.m].power_integral(2.0)
            };
            (u2 + top).sqrt()
        }
    }
}

/// Minimum hop distance from the support of `u` to the window boundary, or
/// `None` if the graph has no boundary or `u` vanishes.
pub fn support_margin(u: &ScalarField<'_>) -> Option<usize> {
    let g = u.graph();
    let boundary: Vec<usize> = (0..g.len()).filter(|&i| g.is_boundary(i)).collect();
    if boundary.is_empty() {
        return None;
    }
    let dist = g.multi_source_bfs(boundary);
    (0..g.len())
        .filter(|&i| u.at(i) != 0.0)
        .map(|i| dist[i])
        .min()
}

fn check_margin(u: &ScalarField<'_>, required: usize) -> Result<()> {
    match support_margin(u) {
        Some(found) if found < required => Err(Error::SupportTooClose { required, found }),
        _ => Ok(()),
    }
}

/// Every link of the chain
/// `int |nabla^j u|^2 <= 1/2 (int |nabla^{j-1} u|^2 + int |nabla^{j+1} u|^2)`
/// for `j = 1, ..., m-1`, each obtained by summation by parts.
pub fn reduced_norm_chain(u: &ScalarField<'_>, m: usize) -> Result<Vec<InequalityReport>> {
    if !u.graph().is_symmetric() {
        return Err(Error::AsymmetricWeights);
    }
    check_margin(u, m)?;
    let seq = nabla_sequence(u, m);
    let energies: Vec<f64> = seq.iter().map(|r| r.power_integral(2.0)).collect();
    let scale = norm_from_sequence(&seq, &SobolevNorm::sum(m, 2.0)?).powi(2);
    Ok((1..m)
        .map(|j| {
            InequalityReport::evaluate(
                format!("reduced_norm_gap[m={m};j={j}]"),
                energies[j],
                0.5 * (energies[j - 1] + energies[j + 1]),
                0.5,
                scale,
                MARGIN_TOLERANCE,
            )
        })
        .collect())
}

/// The link of [`reduced_norm_chain`] with the smallest normalized margin;
/// `pass` is true only when every link passes. For `m < 2` the chain is
/// empty and the report is the trivial `0 <= 0`.
pub fn reduced_norm_gap(u: &ScalarField<'_>, m: usize) -> Result<InequalityReport> {
    let chain = reduced_norm_chain(u, m)?;
    let all_pass = chain.iter().all(|r| r.pass);
    let worst = chain.into_iter().min_by(|a, b| {
        a.normalized_margin()
            .partial_cmp(&b.normalized_margin())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(match worst {
        Some(mut r) => {
            r.pass = all_pass;
            r
        }
        None => InequalityReport::evaluate(
            format!("reduced_norm_gap[m={m}]"),
            0.0,
            0.0,
            0.5,
            1.0,
            MARGIN_TOLERANCE,
        ),
    })
}

/// `f = |u|^{q-2} u / ||u||_q^{q-1}`, the unit vector of `L^p` that attains
/// `int u f dmu = ||u||_q`.
pub fn riesz_dual_scalar<'g>(u: &ScalarField<'g>, q: f64) -> Result<ScalarField<'g>> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::ExponentOutOfRange(q, "need 1 < q < inf"));
    }
    if u.is_zero() {
        return Err(Error::ZeroField);
    }
    let n = u.norm(Exponent::Finite(q));
    Ok(u.map(|v| {
        if v == 0.0 {
            0.0
        } else {
            v.signum() * (v.abs() / n).powf(q - 1.0)
        }
    }))
}

/// `g_0(x) = |f(x)|^{p-2} f(x)` where `f(x) != 0`, and `0` elsewhere.
pub fn riesz_dual_vector<'g>(f: &VectorField<'g>, p: f64) -> Result<VectorField<'g>> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::ExponentOutOfRange(p, "need 1 < p < inf"));
    }
    if f.is_zero() {
        return Err(Error::ZeroField);
    }
    let g = f.graph();
    let lengths = f.pointwise_norms();
    let mut out = Vec::with_capacity(g.entry_count());
    for (x, &len) in lengths.iter().enumerate() {
        let factor = if len == 0.0 { 0.0 } else { len.powf(p - 2.0) };
        out.extend(f.at(x).iter().map(|c| factor * c));
    }
    VectorField::from_flat(g, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::lp_norm;
    use crate::graph::{build_graph, Edge, WeightedGraph};

    fn two_vertex() -> WeightedGraph {
        build_graph(&[Edge::new(1, 2, 1.0)], vec![(1, 1.0), (2, 1.0)]).unwrap()
    }

    fn nstar_window(n: u64) -> WeightedGraph {
        let edges: Vec<_> = (1..n).map(|i| Edge::new(i, i + 1, 1.0)).collect();
        build_graph(&edges, (1..=n).map(|i| (i, 1.0 / (i * i) as f64))).unwrap()
    }

    #[test]
    fn variant_validation() {
        assert!(SobolevNorm::power_sum(2, 1.0).is_err());
        assert!(SobolevNorm::power_sum(2, f64::INFINITY).is_err());
        assert!(
            SobolevNorm::new(1, ExponentSpec::single(3.0).unwrap(), NormVariant::Reduced).is_err()
        );
        assert!(SobolevNorm::new(
            2,
            ExponentSpec::mixed(&[2.0, 2.0]).unwrap(),
            NormVariant::Sum
        )
        .is_err());
        assert_eq!(SobolevNorm::mixed(&[1.0, 2.0, f64::INFINITY]).unwrap().m, 2);
    }

    #[test]
    fn zero_field_has_zero_norm() {
        let g = two_vertex();
        let u = ScalarField::zeros(&g);
        for spec in [
            SobolevNorm::sum(2, 1.0).unwrap(),
            SobolevNorm::power_sum(3, 2.5).unwrap(),
            SobolevNorm::mixed(&[1.0, f64::INFINITY]).unwrap(),
            SobolevNorm::reduced(2),
        ] {
            assert_eq!(sobolev_norm(&u, &spec).unwrap(), 0.0);
        }
    }

    #[test]
    fn order_zero_is_lp() {
        let g = nstar_window(20);
        let u = ScalarField::from_fn(&g, |n| (n as f64).sin());
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_eq!(
                sobolev_norm(&u, &SobolevNorm::sum(0, p).unwrap()).unwrap(),
                lp_norm(&u, p).unwrap()
            );
        }
    }

    #[test]
    fn constant_on_nstar_window() {
        for n in [10u64, 100, 1000] {
            let g = nstar_window(n);
            let f = ScalarField::constant(&g, 1.0);
            let direct: f64 = (1..=n).map(|k| 1.0 / (k * k) as f64).sum::<f64>().sqrt();
            let got = sobolev_norm(&f, &SobolevNorm::sum(1, 2.0).unwrap()).unwrap();
            assert!((got - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn reduced_gap_examples() {
        let g = two_vertex();
        let u = ScalarField::new(&g, vec![0.0, 1.0]).unwrap();
        let r = reduced_norm_gap(&u, 2).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15);
        assert!((r.rhs - 1.5).abs() < 1e-15);
        assert!(r.pass);
        let z = reduced_norm_gap(&ScalarField::zeros(&g), 2).unwrap();
        assert_eq!((z.lhs, z.rhs), (0.0, 0.0));
        assert!(z.pass);
        assert_eq!(reduced_norm_chain(&u, 3).unwrap().len(), 2);
        assert!(reduced_norm_gap(&u, 1).unwrap().pass);
    }

    #[test]
    fn reduced_gap_requires_margin_and_symmetry() {
        let g = nstar_window(10).with_boundary([10]).unwrap();
        let u = ScalarField::from_sparse(&g, [(8, 1.0)]).unwrap();
        assert_eq!(
            reduced_norm_gap(&u, 3).unwrap_err(),
            Error::SupportTooClose {
                required: 3,
                found: 2
            }
        );
        assert!(reduced_norm_gap(&u, 2).is_ok());
        let asym = build_graph(
            &[Edge::asymmetric(1, 2, 1.0, 2.0)],
            vec![(1, 1.0), (2, 1.0)],
        )
        .unwrap();
        let v = ScalarField::zeros(&asym);
        assert_eq!(
            reduced_norm_gap(&v, 2).unwrap_err(),
            Error::AsymmetricWeights
        );
        assert_eq!(
            sobolev_norm(&v, &SobolevNorm::reduced(2)).unwrap_err(),
            Error::AsymmetricWeights
        );
    }

    #[test]
    fn riesz_scalar_examples() {
        let g = two_vertex();
        let u = ScalarField::from_sparse(&g, [(1, 2.0)]).unwrap();
        let f = riesz_dual_scalar(&u, 3.0).unwrap();
        assert!((f.get(1).unwrap() - 1.0).abs() < 1e-15);
        assert!((lp_norm(&f, 1.5).unwrap() - 1.0).abs() < 1e-15);

        // Unit q-norm: the denominator is one.
        let u =
            ScalarField::new(&g, vec![0.6f64.powf(1.0 / 3.0), -(0.4f64.powf(1.0 / 3.0))]).unwrap();
        let f = riesz_dual_scalar(&u, 3.0).unwrap();
        for i in 0..2 {
            let v = u.at(i);
            assert!((f.at(i) - v.abs() * v).abs() < 1e-15);
        }
        assert_eq!(
            riesz_dual_scalar(&ScalarField::zeros(&g), 2.0).unwrap_err(),
            Error::ZeroField
        );
        assert!(riesz_dual_scalar(&u, 1.0).is_err());
    }

    #[test]
    fn riesz_vector_examples() {
        let g = build_graph(
            &[Edge::new(1, 2, 1.0), Edge::new(2, 3, 1.0)],
            vec![(1, 1.0), (2, 2.0), (3, 0.5)],
        )
        .unwrap();
        let f = VectorField::from_vectors(&g, &[vec![0.0], vec![3.0, -4.0], vec![2.0]]).unwrap();
        let g2 = riesz_dual_vector(&f, 2.0).unwrap();
        assert_eq!(g2.flat(), f.flat());
        let g3 = riesz_dual_vector(&f, 3.0).unwrap();
        assert_eq!(g3.at(0), &[0.0]);
        assert_eq!(g3.at(1), &[15.0, -20.0]);
        assert!(riesz_dual_vector(&VectorField::zeros(&g), 3.0).is_err());
    }
}
