use proptest::prelude::*;

use graph_sobolev::approximation::{convergence_slope, truncation_errors, ConvergenceSeries};
use graph_sobolev::generators::{self, graph_of_kind, trial_rng, GraphKind, GraphSampler};
use graph_sobolev::io::{graph_to_json, parse_graph};
use graph_sobolev::operators::{integration_by_parts_residual, p_laplacian};
use graph_sobolev::sobolev::reduced_norm_chain;
use graph_sobolev::{
    gradient, gradient_norm, laplacian, sobolev_norm, Exponent, ScalarField, SobolevNorm,
    WeightedGraph,
};

fn kind() -> impl Strategy<Value = GraphKind> {
    prop::sample::select(GraphKind::ALL.to_vec())
}

fn graph(seed: u64, kind: GraphKind, n: usize, symmetric: bool) -> WeightedGraph {
    let sampler = GraphSampler {
        symmetric,
        ..GraphSampler::default()
    };
    graph_of_kind(&mut trial_rng(seed, 0), kind, n, &sampler)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_a_metric(seed: u64, k in kind(), n in 2usize..40) {
        let g = graph(seed, k, n, true);
        let d: Vec<Vec<usize>> = (0..g.len()).map(|i| g.bfs(i)).collect();
        for x in 0..g.len() {
            prop_assert_eq!(d[x][x], 0);
            for y in 0..g.len() {
                prop_assert_eq!(d[x][y], d[y][x]);
                for z in 0..g.len() {
                    prop_assert!(d[x][z] <= d[x][y] + d[y][z]);
                }
            }
        }
    }

    #[test]
    fn balls_nest_and_paths_are_geodesics(seed: u64, k in kind(), n in 2usize..40) {
        let g = graph(seed, k, n, true);
        let c = g.id(seed as usize % g.len());
        let mut prev = 0;
        for r in 0..=n {
            let b = g.ball(c, r).unwrap();
            prop_assert!(b.members.len() >= prev);
            if r == 0 {
                prop_assert!(b.members.is_empty());
            }
            prev = b.members.len();
        }
        prop_assert_eq!(prev, n);
        let t = g.id((seed / 7) as usize % g.len());
        let path = g.shortest_path(c, t).unwrap();
        prop_assert_eq!(path.len(), g.distance(c, t).unwrap() + 1);
        for w in path.windows(2) {
            let (a, b) = (g.index_of(w[0]).unwrap(), g.index_of(w[1]).unwrap());
            prop_assert!(g.weight(a, b).is_some());
        }
    }

    #[test]
    fn graph_json_round_trips(seed: u64, k in kind(), n in 2usize..30, symmetric: bool) {
        let g = graph(seed, k, n, symmetric);
        let text = graph_to_json(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(graph_to_json(&back), text);
    }

    #[test]
    fn operators_are_linear(seed: u64, k in kind(), n in 2usize..30, a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let g = graph(seed, k, n, false);
        let mut rng = trial_rng(seed, 1);
        let u = generators::random_scalar(&mut rng, &g);
        let v = generators::random_scalar(&mut rng, &g);
        let w = u.scale(a).add(&v.scale(b)).unwrap();
        let lw = laplacian(&w);
        let (lu, lv) = (laplacian(&u), laplacian(&v));
        let scale = lu.norm(Exponent::Infinity) * a.abs() + lv.norm(Exponent::Infinity) * b.abs();
        for i in 0..g.len() {
            prop_assert!((lw.at(i) - (a * lu.at(i) + b * lv.at(i))).abs() <= 1e-12 * scale.max(1e-300));
        }
        let gw = gradient(&w);
        let (gu, gv) = (gradient(&u), gradient(&v));
        for ((x, y), z) in gw.flat().iter().zip(gu.flat()).zip(gv.flat()) {
            prop_assert!((x - (a * y + b * z)).abs() <= 1e-12 * (a * y).abs().max((b * z).abs()).max(1e-300) * 4.0);
        }
    }

    #[test]
    fn gradient_norm_is_the_euclidean_length(seed: u64, k in kind(), n in 2usize..30) {
        let g = graph(seed, k, n, false);
        let u = generators::random_scalar(&mut trial_rng(seed, 2), &g);
        let lengths = gradient(&u).pointwise_norms();
        let gn = gradient_norm(&u);
        for (i, &len) in lengths.iter().enumerate() {
            prop_assert!(close(len, gn.at(i), 1e-14));
        }
        let c = ScalarField::constant(&g, 2.5);
        prop_assert!(laplacian(&c).is_zero());
        prop_assert!(gradient_norm(&c).is_zero());
    }

    #[test]
    fn summation_by_parts_on_symmetric_graphs(seed: u64, k in kind(), n in 2usize..60) {
        let g = graph(seed, k, n, true);
        let mut rng = trial_rng(seed, 3);
        let u = generators::random_scalar(&mut rng, &g);
        let phi = generators::random_scalar(&mut rng, &g);
        let r = integration_by_parts_residual(&phi, &u).unwrap();
        let scale = gradient_norm(&phi).norm(Exponent::Finite(2.0)) * gradient_norm(&u).norm(Exponent::Finite(2.0));
        prop_assert!(r.abs() <= 1e-12 * scale);
    }

    #[test]
    fn lebesgue_norm_inequalities(seed: u64, k in kind(), n in 2usize..30, p in 1.0f64..12.0) {
        let g = graph(seed, k, n, false);
        let mut rng = trial_rng(seed, 4);
        let u = generators::random_scalar(&mut rng, &g);
        let v = generators::random_scalar(&mut rng, &g);
        let e = Exponent::Finite(p);
        let s = u.add(&v).unwrap().norm(e);
        prop_assert!(s <= (u.norm(e) + v.norm(e)) * (1.0 + 1e-12));
        let c = -3.25;
        prop_assert!(close(u.scale(c).norm(e), c.abs() * u.norm(e), 1e-13));
        if p > 1.0 {
            let q = e.conjugate();
            let uv = u.inner(&v).unwrap().abs();
            prop_assert!(uv <= u.norm(e) * v.norm(q) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn sobolev_norms_are_homogeneous(seed: u64, k in kind(), n in 2usize..30, m in 0usize..4, p in 1.0f64..6.0, c in -100.0f64..100.0) {
        let g = graph(seed, k, n, true);
        let u = generators::random_scalar(&mut trial_rng(seed, 5), &g);
        for spec in [SobolevNorm::sum(m, p).unwrap(), SobolevNorm::reduced(m)] {
            let a = sobolev_norm(&u.scale(c), &spec).unwrap();
            let b = c.abs() * sobolev_norm(&u, &spec).unwrap();
            prop_assert!(close(a, b, 1e-12));
        }
    }

    #[test]
    fn reduced_chain_holds(seed: u64, k in kind(), n in 2usize..40, m in 2usize..5) {
        let g = graph(seed, k, n, true);
        let u = generators::random_compact_scalar(&mut trial_rng(seed, 6), &g, 4);
        for r in reduced_norm_chain(&u, m).unwrap() {
            prop_assert!(r.pass, "{:?}", r);
        }
    }

    #[test]
    fn p_laplacian_is_homogeneous(seed: u64, k in kind(), n in 2usize..30, p in 1.1f64..6.0, c in 0.01f64..100.0) {
        let g = graph(seed, k, n, false);
        let u = generators::random_scalar(&mut trial_rng(seed, 7), &g);
        let a = p_laplacian(&u.scale(c), p).unwrap();
        let b = p_laplacian(&u, p).unwrap().scale(c.powf(p - 1.0));
        let scale = b.norm(Exponent::Infinity);
        for i in 0..g.len() {
            prop_assert!((a.at(i) - b.at(i)).abs() <= 1e-11 * scale);
        }
    }

    #[test]
    fn truncation_errors_decrease(seed: u64, k in kind(), n in 2usize..40, p in 1.0f64..5.0) {
        let g = graph(seed, k, n, false);
        let u = generators::random_scalar(&mut trial_rng(seed, 8), &g);
        let ks: Vec<usize> = (0..=n).collect();
        let e = truncation_errors(&u, g.id(0), &ks, Exponent::Finite(p)).unwrap();
        prop_assert!(e.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(close(e[0], u.norm(Exponent::Finite(p)), 1e-15));
        prop_assert_eq!(*e.last().unwrap(), 0.0);
    }

    #[test]
    fn slope_recovers_power_laws(a in -3.0f64..3.0, c in 1e-3f64..1e3) {
        let ks: Vec<u64> = (4..=12).map(|e| 1u64 << e).collect();
        let errs = ks.iter().map(|&k| c * (k as f64).powf(a)).collect();
        let s = convergence_slope(&ConvergenceSeries::new(ks, errs).unwrap()).unwrap();
        prop_assert!((s - a).abs() < 1e-10);
    }
}
