//! Checks for the functional inequalities on graphs: Hölder, Minkowski and
//! Clarkson on the variable-dimension space, the `W^{m,P}` embeddings into
//! `L^inf` and `L^q` with explicit constants, and the path-telescoping
//! bound for finitely supported functions.
//!
//! [`run_suite`] evaluates all of them on seeded random inputs.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{Exponent, ExponentSpec, ScalarField, VectorField};
use crate::generators::{self, GraphSampler};
use crate::graph::{VertexId, WeightedGraph};
use crate::io::{graph_to_json, scalar_field_to_json, vector_field_to_json};
use crate::numeric::fmt17;
use crate::operators::{gradient_norm, laplacian_power, nabla_sequence};
use crate::report::InequalityReport;
use crate::sobolev::{norm_from_sequence, reduced_norm_gap, SobolevNorm, MARGIN_TOLERANCE};

fn finite_open(p: f64, what: &'static str) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange(p, what))
    }
}

/// `int <f, g> dmu <= ||f||_p ||g||_q` with `1/p + 1/q = 1`.
pub fn check_holder(f: &VectorField<'_>, g: &VectorField<'_>, p: f64) -> Result<InequalityReport> {
    finite_open(p, "need 1 < p < inf")?;
    let q = Exponent::Finite(p).conjugate();
    let lhs = f.inner(g)?;
    let rhs = f.norm(Exponent::Finite(p)) * g.norm(q);
    Ok(InequalityReport::evaluate(
        "holder",
        lhs,
        rhs,
        1.0,
        rhs,
        MARGIN_TOLERANCE,
    ))
}

/// `||f + g||_p <= ||f||_p + ||g||_p`.
pub fn check_minkowski(
    f: &VectorField<'_>,
    g: &VectorField<'_>,
    p: Exponent,
) -> Result<InequalityReport> {
    let lhs = f.add(g)?.norm(p);
    let rhs = f.norm(p) + g.norm(p);
    Ok(InequalityReport::evaluate(
        "minkowski",
        lhs,
        rhs,
        1.0,
        rhs,
        MARGIN_TOLERANCE,
    ))
}

/// Scalar-field form of [`check_minkowski`].
pub fn check_minkowski_scalar(
    u: &ScalarField<'_>,
    v: &ScalarField<'_>,
    p: Exponent,
) -> Result<InequalityReport> {
    let lhs = u.add(v)?.norm(p);
    let rhs = u.norm(p) + v.norm(p);
    Ok(InequalityReport::evaluate(
        "minkowski_scalar",
        lhs,
        rhs,
        1.0,
        rhs,
        MARGIN_TOLERANCE,
    ))
}

/// `||(f+g)/2||_p^p + ||(f-g)/2||_p^p <= (||f||_p^p + ||g||_p^p) / 2` for
/// `p >= 2`.
pub fn check_clarkson(
    f: &VectorField<'_>,
    g: &VectorField<'_>,
    p: f64,
) -> Result<InequalityReport> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::ExponentOutOfRange(p, "need 2 <= p < inf"));
    }
    let half_sum = f.zip_with(g, |a, b| (a + b) / 2.0)?;
    let half_diff = f.zip_with(g, |a, b| (a - b) / 2.0)?;
    let ff = f.power_integral(p);
    let gg = g.power_integral(p);
    let lhs = half_sum.power_integral(p) + half_diff.power_integral(p);
    let rhs = 0.5 * (ff + gg);
    Ok(InequalityReport::evaluate(
        "clarkson",
        lhs,
        rhs,
        0.5,
        ff.max(gg),
        MARGIN_TOLERANCE,
    ))
}

fn mixed_exponents(spec: &ExponentSpec) -> Result<&[Exponent]> {
    match spec {
        ExponentSpec::Mixed(ps) => Ok(ps),
        ExponentSpec::Single(_) => Err(Error::InvalidVariant(
            "embedding checks need a mixed exponent vector (p_0, ..., p_m)".into(),
        )),
    }
}

/// Embedding constant for `||nabla^j u||_inf`: `mu_0^{-1/p_j}`, or 1 when
/// `p_j = inf`.
pub fn sup_embedding_constant(mu0: f64, pj: Exponent) -> f64 {
    match pj {
        Exponent::Infinity => 1.0,
        Exponent::Finite(p) => mu0.powf(-1.0 / p),
    }
}

/// Embedding constant for `||nabla^j u||_q`, `p_j <= q < inf`:
/// `mu_0^{-(1/p_j)(1 - p_j/q)}`, from interpolating between `L^{p_j}` and
/// `L^inf`.
pub fn lq_embedding_constant(mu0: f64, pj: f64, q: f64) -> f64 {
    mu0.powf(-(1.0 / pj) * (1.0 - pj / q))
}

/// `||nabla^j u||_inf <= C ||u||_{W^{m,P}}`.
pub fn check_embedding_sup(
    u: &ScalarField<'_>,
    exponents: &ExponentSpec,
    j: usize,
) -> Result<InequalityReport> {
    let ps = mixed_exponents(exponents)?;
    let m = ps.len() - 1;
    if j > m {
        return Err(Error::IndexOutOfRange { index: j, max: m });
    }
    let seq = nabla_sequence(u, m);
    let w = norm_from_sequence(
        &seq,
        &SobolevNorm::new(m, exponents.clone(), crate::sobolev::NormVariant::Sum)?,
    );
    let c = sup_embedding_constant(u.graph().min_measure(), ps[j]);
    let lhs = seq[j].norm(Exponent::Infinity);
    Ok(InequalityReport::evaluate(
        format!("embedding_sup[m={m};j={j}]"),
        lhs,
        c * w,
        c,
        w,
        MARGIN_TOLERANCE,
    ))
}

/// `||nabla^j u||_q <= C ||u||_{W^{m,P}}` for finite `p_j <= q < inf`.
pub fn check_embedding_lq(
    u: &ScalarField<'_>,
    exponents: &ExponentSpec,
    j: usize,
    q: f64,
) -> Result<InequalityReport> {
    let ps = mixed_exponents(exponents)?;
    let m = ps.len() - 1;
    if j > m {
        return Err(Error::IndexOutOfRange { index: j, max: m });
    }
    let pj = match ps[j] {
        Exponent::Finite(p) => p,
        Exponent::Infinity => {
            return Err(Error::ExponentOutOfRange(
                f64::INFINITY,
                "p_j must be finite",
            ))
        }
    };
    if !(q >= pj && q.is_finite()) {
        return Err(Error::ExponentOutOfRange(q, "need p_j <= q < inf"));
    }
    let seq = nabla_sequence(u, m);
    let w = norm_from_sequence(
        &seq,
        &SobolevNorm::new(m, exponents.clone(), crate::sobolev::NormVariant::Sum)?,
    );
    let c = lq_embedding_constant(u.graph().min_measure(), pj, q);
    let lhs = seq[j].norm(Exponent::Finite(q));
    Ok(InequalityReport::evaluate(
        format!("embedding_lq[m={m};j={j}]"),
        lhs,
        c * w,
        c,
        w,
        MARGIN_TOLERANCE,
    ))
}

/// `sqrt(2 mu_1 / (w_0 mu_0^2))` for the window.
pub fn path_bound_constant(g: &WeightedGraph) -> f64 {
    let mu0 = g.min_measure();
    (2.0 * g.max_measure() / (g.min_weight() * mu0 * mu0)).sqrt()
}

/// [`check_w0_path_bound`] result together with the telescoping path from
/// the maximizing vertex to the anchor `O`.
#[derive(Debug, Clone)]
pub struct PathBoundReport {
    pub report: InequalityReport,
    pub path: Vec<VertexId>,
    /// `C sum_i mu(x_i) |grad v|(x_i)` over the path vertices except `O`;
    /// sits between `lhs` and `rhs`.
    pub path_bound: f64,
}

/// `||Delta^j u||_inf <= C int |grad Delta^j u| dmu` with
/// `C = sqrt(2 mu_1 / (w_0 mu_0^2))`, anchored at a vertex where
/// `Delta^j u` vanishes.
pub fn check_w0_path_bound(u: &ScalarField<'_>, j: usize) -> Result<PathBoundReport> {
    let g = u.graph();
    let v = laplacian_power(u, j);
    let zeros: Vec<usize> = (0..g.len()).filter(|&i| v.at(i) == 0.0).collect();
    if zeros.is_empty() {
        return Err(Error::NoZeroVertex);
    }
    let (argmax, lhs) = v
        .values()
        .iter()
        .enumerate()
        .fold((0, 0.0_f64), |(bi, bv), (i, x)| {
            if x.abs() > bv {
                (i, x.abs())
            } else {
                (bi, bv)
            }
        });
    let dist = g.bfs(argmax);
    let anchor = *zeros
        .iter()
        .min_by_key(|&&z| (dist[z], z))
        .expect("zeros is non-empty");
    let path = g.shortest_path_indices(argmax, anchor);

    let c = path_bound_constant(g);
    let gn = gradient_norm(&v);
    let along: f64 = path[..path.len() - 1]
        .iter()
        .map(|&i| g.measure(i) * gn.at(i))
        .sum();
    let rhs = c * gn.power_integral(1.0);
    let scale = crate::sobolev::sobolev_norm(u, &SobolevNorm::sum(2 * j + 1, 1.0)?)?;
    Ok(PathBoundReport {
        report: InequalityReport::evaluate(
            format!("w0_path_bound[j={j}]"),
            lhs,
            rhs,
            c,
            scale,
            MARGIN_TOLERANCE,
        ),
        path: path.into_iter().map(|i| g.id(i)).collect(),
        path_bound: c * along,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Holder,
    Minkowski,
    Clarkson,
    EmbeddingSup,
    EmbeddingLq,
    PathBound,
    ReducedGap,
}

impl CheckKind {
    pub const ALL: [CheckKind; 7] = [
        CheckKind::Holder,
        CheckKind::Minkowski,
        CheckKind::Clarkson,
        CheckKind::EmbeddingSup,
        CheckKind::EmbeddingLq,
        CheckKind::PathBound,
        CheckKind::ReducedGap,
    ];

    fn tag(self) -> u64 {
        self as u64
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub trials: u64,
    pub seed: u64,
    pub checks: Vec<CheckKind>,
    pub sampler: GraphSampler,
    /// Largest derivative order `m` drawn for embedding checks.
    pub max_order: usize,
    /// Finite exponents are drawn from `[1, max_exponent]`.
    pub max_exponent: f64,
    /// Probability that an embedding exponent is `inf`.
    pub infinity_probability: f64,
    /// Replaces the random graphs when set.
    pub fixed_graph: Option<WeightedGraph>,
    /// Pass threshold on the normalized margin.
    pub tolerance: f64,
}

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x005E_ED0F_6EA9;

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 10_000,
            seed: DEFAULT_SEED,
            checks: CheckKind::ALL.to_vec(),
            sampler: GraphSampler::default(),
            max_order: 3,
            max_exponent: 10.0,
            infinity_probability: 0.15,
            fixed_graph: None,
            tolerance: MARGIN_TOLERANCE,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let s = &self.sampler;
        let range_ok = |(lo, hi): (f64, f64)| lo > 0.0 && lo <= hi && hi.is_finite();
        if s.kinds.is_empty() {
            return Err(Error::Config("no graph kinds selected".into()));
        }
        if s.min_vertices < 2 || s.min_vertices > s.max_vertices {
            return Err(Error::Config(format!(
                "vertex range {}..={} is invalid",
                s.min_vertices, s.max_vertices
            )));
        }
        if !range_ok(s.measure_range) || !range_ok(s.weight_range) {
            return Err(Error::Config(
                "measure and weight ranges must be positive".into(),
            ));
        }
        if !(self.max_exponent >= 2.0 && self.max_exponent.is_finite()) {
            return Err(Error::Config("max_exponent must be finite and >= 2".into()));
        }
        if !(0.0..1.0).contains(&self.infinity_probability) {
            return Err(Error::Config(
                "infinity_probability must be in [0, 1)".into(),
            ));
        }
        if self.max_order == 0 {
            return Err(Error::Config("max_order must be at least 1".into()));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(
                "tolerance must be finite and non-negative".into(),
            ));
        }
        if self.trials >= 1 << 40 {
            return Err(Error::Config("too many trials".into()));
        }
        Ok(())
    }
}

fn witness(
    check: CheckKind,
    g: &WeightedGraph,
    fields: &[(&str, String)],
    params: &[(&str, f64)],
) -> String {
    let mut s = format!(
        "{{\n\"check\": \"{check:?}\",\n\"graph\": {}",
        graph_to_json(g)
    );
    for (name, json) in fields {
        s.push_str(&format!(",\n\"{name}\": {json}"));
    }
    let ps: Vec<String> = params
        .iter()
        .map(|(k, v)| {
            format!(
                "\"{k}\": {}",
                if v.is_finite() {
                    fmt17(*v)
                } else {
                    "null".into()
                }
            )
        })
        .collect();
    s.push_str(&format!(",\n\"params\": {{{}}}\n}}\n", ps.join(", ")));
    s
}

fn draw_exponent<R: Rng + ?Sized>(rng: &mut R, cfg: &SuiteConfig) -> Exponent {
    if rng.gen_bool(cfg.infinity_probability) {
        Exponent::Infinity
    } else {
        Exponent::Finite(rng.gen_range(1.0..=cfg.max_exponent))
    }
}

fn draw_field<'g, R: Rng + ?Sized>(rng: &mut R, g: &'g WeightedGraph) -> ScalarField<'g> {
    if rng.gen_bool(0.5) {
        generators::random_scalar(rng, g)
    } else {
        generators::random_compact_scalar(rng, g, 3)
    }
}

fn exps_param(ps: &[Exponent]) -> Vec<f64> {
    ps.iter().map(|p| p.value()).collect()
}

fn run_trial(cfg: &SuiteConfig, check: CheckKind, trial: u64) -> Result<InequalityReport> {
    let mut rng = generators::trial_rng(cfg.seed, (check.tag() << 40) | trial);
    let rng = &mut rng;
    let owned;
    let sampler = if check == CheckKind::ReducedGap && !cfg.sampler.symmetric {
        GraphSampler {
            symmetric: true,
            ..cfg.sampler.clone()
        }
    } else {
        cfg.sampler.clone()
    };
    let g: &WeightedGraph = match &cfg.fixed_graph {
        Some(g) => g,
        None => {
            owned = generators::random_graph(rng, &sampler);
            &owned
        }
    };

    let report = match check {
        CheckKind::Holder | CheckKind::Minkowski | CheckKind::Clarkson => {
            let f = generators::random_vector(rng, g);
            let h = generators::random_vector(rng, g);
            let (r, p) = match check {
                CheckKind::Holder => {
                    let p = 1.0 + generators::log_uniform(rng, 0.01, cfg.max_exponent - 1.0);
                    (check_holder(&f, &h, p)?, p)
                }
                CheckKind::Minkowski => {
                    let p = draw_exponent(rng, cfg);
                    (check_minkowski(&f, &h, p)?, p.value())
                }
                _ => {
                    let p = *[2.0, 2.5, 3.0, 5.0].choose(rng).expect("non-empty");
                    (check_clarkson(&f, &h, p)?, p)
                }
            };
            let r = r.with_tolerance(cfg.tolerance);
            if r.pass {
                r
            } else {
                let w = witness(
                    check,
                    g,
                    &[
                        ("f", vector_field_to_json(&f)),
                        ("g", vector_field_to_json(&h)),
                    ],
                    &[("p", p)],
                );
                InequalityReport {
                    witness: Some(w),
                    ..r
                }
            }
        }
        CheckKind::EmbeddingSup | CheckKind::EmbeddingLq => {
            let m = rng.gen_range(1..=cfg.max_order);
            let mut ps: Vec<Exponent> = (0..=m).map(|_| draw_exponent(rng, cfg)).collect();
            let j = rng.gen_range(0..=m);
            let u = draw_field(rng, g);
            let (r, q) = if check == CheckKind::EmbeddingSup {
                let spec = ExponentSpec::Mixed(ps.clone());
                (check_embedding_sup(&u, &spec, j)?, f64::INFINITY)
            } else {
                if !ps[j].is_finite() {
                    ps[j] = Exponent::Finite(rng.gen_range(1.0..=cfg.max_exponent));
                }
                let pj = ps[j].value();
                let factor = match rng.gen_range(0..4) {
                    0 => 1.0,
                    1 => 2.0,
                    2 => 10.0,
                    _ => rng.gen_range(1.0..10.0),
                };
                let spec = ExponentSpec::Mixed(ps.clone());
                (check_embedding_lq(&u, &spec, j, pj * factor)?, pj * factor)
            };
            let r = r.with_tolerance(cfg.tolerance);
            if r.pass {
                r
            } else {
                let mut params = vec![("j", j as f64), ("q", q)];
                let exps = exps_param(&ps);
                let names = ["p0", "p1", "p2", "p3", "p4", "p5", "p6", "p7"];
                for (k, p) in exps.iter().enumerate().take(names.len()) {
                    params.push((names[k], *p));
                }
                let w = witness(check, g, &[("u", scalar_field_to_json(&u))], &params);
                InequalityReport {
                    witness: Some(w),
                    ..r
                }
            }
        }
        CheckKind::PathBound => {
            let j = rng.gen_range(0..=1usize);
            let mut attempt = 0;
            let (pr, u_json, g_json) = loop {
                attempt += 1;
                if attempt > 1000 {
                    return Err(Error::Config(
                        "could not draw a field whose iterated Laplacian vanishes somewhere".into(),
                    ));
                }
                let local;
                let gg: &WeightedGraph = if cfg.fixed_graph.is_some() || attempt == 1 {
                    g
                } else {
                    local = generators::random_graph(rng, &sampler);
                    &local
                };
                let u = generators::random_compact_scalar(rng, gg, 3);
                match check_w0_path_bound(&u, j) {
                    Ok(pr) => break (pr, scalar_field_to_json(&u), graph_to_json(gg)),
                    Err(Error::NoZeroVertex) => continue,
                    Err(e) => return Err(e),
                }
            };
            let r = pr.report;
            let r = r.with_tolerance(cfg.tolerance);
            if r.pass {
                r
            } else {
                let w = format!(
                    "{{\n\"check\": \"PathBound\",\n\"graph\": {g_json},\n\"u\": {u_json},\n\"params\": {{\"j\": {j}}}\n}}\n"
                );
                InequalityReport {
                    witness: Some(w),
                    ..r
                }
            }
        }
        CheckKind::ReducedGap => {
            if !g.is_symmetric() {
                return Err(Error::AsymmetricWeights);
            }
            let m = rng.gen_range(2..=3usize);
            let u = draw_field(rng, g);
            let r = reduced_norm_gap(&u, m)?;
            let r = r.with_tolerance(cfg.tolerance);
            if r.pass {
                r
            } else {
                let w = witness(
                    check,
                    g,
                    &[("u", scalar_field_to_json(&u))],
                    &[("m", m as f64)],
                );
                InequalityReport {
                    witness: Some(w),
                    ..r
                }
            }
        }
    };
    Ok(report.with_trial(trial))
}

/// Runs `config.trials` seeded trials of every selected check. Reports are
/// ordered by check, then by trial index, independent of scheduling.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<InequalityReport>> {
    config.validate()?;
    let mut out = Vec::with_capacity(config.trials as usize * config.checks.len());
    for &check in &config.checks {
        let batch: Result<Vec<InequalityReport>> = (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, check, t))
            .collect();
        out.extend(batch?);
    }
    Ok(out)
}

/// CSV with columns `name, trial, lhs, rhs, constant, margin, pass`.
pub fn write_reports_csv<W: Write>(out: W, reports: &[InequalityReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["name", "trial", "lhs", "rhs", "constant", "margin", "pass"])?;
    for r in reports {
        w.write_record([
            r.name.clone(),
            r.trial.to_string(),
            fmt17(r.lhs),
            fmt17(r.rhs),
            fmt17(r.constant),
            fmt17(r.margin),
            r.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
