use hk_core::riemann::{
    bianchi_residuals, christoffel, curvature, geodesic, holonomy_sample, is_einstein, kahler_residuals,
    parallel_transport, LoopPath, Mat, Metric, MetricChart, Polynomial, Polyline,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn sphere(r: f64, h: f64) -> MetricChart {
    MetricChart::with_step(Metric::Sphere { dim: 2, radius: r }, h).unwrap()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn max_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn inner(g: &Mat, u: &[f64], v: &[f64]) -> f64 {
    (0..u.len()).map(|i| (0..v.len()).map(|j| u[i] * g[i][j] * v[j]).sum::<f64>()).sum()
}

// g = I + ε·P with P a random symmetric matrix of quadratic polynomials.
fn perturbed_flat(dim: usize, seed: u64) -> Metric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries: Vec<Vec<Polynomial>> = vec![vec![Polynomial::constant(0.0, dim); dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            let mut terms = Vec::new();
            if i == j {
                terms.push((1.0, vec![0; dim]));
            }
            for a in 0..dim {
                for b in a..dim {
                    let mut e = vec![0u32; dim];
                    e[a] += 1;
                    e[b] += 1;
                    terms.push((0.1 * rng.gen_range(-1.0..1.0), e));
                }
                let mut e = vec![0u32; dim];
                e[a] = 3;
                terms.push((0.05 * rng.gen_range(-1.0..1.0), e));
            }
            entries[i][j] = Polynomial::new(terms.clone());
            entries[j][i] = Polynomial::new(terms);
        }
    }
    Metric::Polynomial(entries)
}

#[test]
fn bianchi_residual_converges_at_second_order() {
    for seed in 0..4u64 {
        let metric = perturbed_flat(3, seed);
        let x = [0.3, -0.2, 0.25];
        let coarse = bianchi_residuals(&curvature(&MetricChart::with_step(metric.clone(), 1e-2).unwrap(), &x).unwrap());
        let fine = bianchi_residuals(&curvature(&MetricChart::with_step(metric, 5e-3).unwrap(), &x).unwrap());
        assert!(coarse.first > 1e-9, "seed {seed}: residual {} too small to measure", coarse.first);
        let ratio = coarse.first / fine.first;
        assert!((3.5..=4.5).contains(&ratio), "seed {seed}: ratio {ratio}");
        assert!(fine.first_mixed < 1e-10);
        // swapping the first pair also mixes the two index pairs
        let anti = coarse.antisymmetry / fine.antisymmetry;
        assert!((3.5..=4.5).contains(&anti), "seed {seed}: antisymmetry ratio {anti}");
    }
}

#[test]
fn curvature_symmetries_on_catalog_metrics() {
    let cases: Vec<(Metric, Vec<f64>)> = vec![
        (Metric::Sphere { dim: 3, radius: 1.5 }, vec![1.0, 1.2, 0.4]),
        (Metric::FubiniStudy { complex_dim: 2 }, vec![0.3, -0.1, 0.2, 0.4]),
        (
            Metric::Product(Box::new(Metric::Sphere { dim: 2, radius: 1.0 }), Box::new(Metric::FlatTorus { dim: 1, period: 1.0 })),
            vec![0.9, 0.1, 0.5],
        ),
        (Metric::Scaled(3.0, Box::new(Metric::FubiniStudy { complex_dim: 1 })), vec![0.2, 0.7]),
    ];
    for (metric, x) in cases {
        let cp = curvature(&MetricChart::with_step(metric.clone(), 1e-3).unwrap(), &x).unwrap();
        let res = bianchi_residuals(&cp);
        assert!(res.antisymmetry < 1e-4, "{metric:?}: {res:?}");
        assert!(res.pair_symmetry < 1e-4, "{metric:?}: {res:?}");
        assert!(res.first < 1e-4, "{metric:?}: {res:?}");
        let n = x.len();
        for i in 0..n {
            for j in 0..n {
                assert!((cp.ricci[i][j] - cp.ricci[j][i]).abs() < 1e-4);
                for k in 0..n {
                    assert_eq!(cp.christoffel[k][i][j], cp.christoffel[k][j][i]);
                }
            }
        }
    }
}

#[test]
fn sphere_christoffels_converge_to_closed_form() {
    let x = [1.1, 0.3];
    let err = |h: f64| {
        let gamma = christoffel(&sphere(1.0, h), &x).unwrap();
        let (s, c) = (x[0].sin(), x[0].cos());
        let a = (gamma[0][1][1] + s * c).abs();
        let b = (gamma[1][0][1] - c / s).abs();
        a.max(b)
    };
    let (coarse, fine) = (err(1e-2), err(5e-3));
    assert!(coarse < 1e-4);
    let ratio = coarse / fine;
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn sectional_curvature_of_spheres() {
    for (dim, r) in [(2, 1.0), (2, 2.0), (3, 0.5), (4, 3.0)] {
        let chart = MetricChart::new(Metric::Sphere { dim, radius: r }).unwrap();
        let x: Vec<f64> = (0..dim).map(|k| 0.7 + 0.2 * k as f64).collect();
        let cp = curvature(&chart, &x).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    assert!((cp.sectional(i, j) - 1.0 / (r * r)).abs() < 1e-5, "dim {dim} r {r}");
                }
            }
        }
        let points: Vec<Vec<f64>> = vec![x.clone(), x.iter().map(|v| v + 0.3).collect()];
        let fit = is_einstein(&chart, &points, 1e-4).unwrap();
        assert!(fit.einstein);
        assert!((fit.constant - (dim as f64 - 1.0) / (r * r)).abs() < 1e-4);
    }
}

#[test]
fn fubini_study_curvature_is_holomorphically_constant() {
    // Holomorphic sectional curvature 4 at the origin for this normalization,
    // and Einstein with constant 2(m+1).
    let chart = MetricChart::new(Metric::FubiniStudy { complex_dim: 2 }).unwrap();
    let cp = curvature(&chart, &[0.0, 0.0, 0.0, 0.0]).unwrap();
    assert!((cp.sectional(0, 1) - 4.0).abs() < 1e-5);
    assert!((cp.sectional(0, 2) - 1.0).abs() < 1e-5);
    let fit = is_einstein(&chart, &[vec![0.1, 0.2, -0.3, 0.1], vec![0.5, 0.0, 0.2, -0.4]], 1e-4).unwrap();
    assert!(fit.einstein);
    assert!((fit.constant - 6.0).abs() < 1e-4);
}

#[test]
fn kahler_residuals_of_fubini_study() {
    let points = vec![vec![0.3, -0.2], vec![0.8, 0.5], vec![-1.1, 0.4]];
    let cp1 = MetricChart::new(Metric::FubiniStudy { complex_dim: 1 }).unwrap();
    let j = cp1.metric().complex_structure().unwrap();
    let r = kahler_residuals(&cp1, &j, &points).unwrap();
    assert!(r.d_omega < 1e-5 && r.nabla_j < 1e-5, "{r:?}");

    let points2 = vec![vec![0.3, -0.2, 0.5, 0.1], vec![-0.6, 0.4, 0.2, 0.7]];
    let res = |h: f64| {
        let chart = MetricChart::with_step(Metric::FubiniStudy { complex_dim: 2 }, h).unwrap();
        let j = chart.metric().complex_structure().unwrap();
        kahler_residuals(&chart, &j, &points2).unwrap()
    };
    let (coarse, fine) = (res(1e-2), res(5e-3));
    for (name, a, b) in [("dω", coarse.d_omega, fine.d_omega), ("∇J", coarse.nabla_j, fine.nabla_j)] {
        assert!(a > 1e-10, "{name}: coarse residual {a} too small to measure");
        let ratio = a / b;
        assert!((3.5..=4.5).contains(&ratio), "{name}: ratio {ratio}");
    }
}

#[test]
fn non_kahler_structure_is_detected() {
    // J rotating (θ, φ) on the round sphere chart is not g-orthogonal, so ω is not closed-compatible.
    let chart = MetricChart::new(Metric::Sphere { dim: 2, radius: 1.0 }).unwrap();
    let j = vec![vec![0.0, -1.0], vec![1.0, 0.0]];
    let r = kahler_residuals(&chart, &j, &[vec![1.0, 0.5]]).unwrap();
    assert!(r.nabla_j > 1e-2);
    assert!(kahler_residuals(&chart, &vec![vec![1.0, 0.0], vec![0.0, 1.0]], &[vec![1.0, 0.5]]).is_err());
}

fn latitude(chart: &MetricChart, theta: f64) -> LoopPath {
    LoopPath::new(chart, Polyline::new(vec![vec![theta, 0.0], vec![theta, 2.0 * PI]]).unwrap()).unwrap()
}

fn quad_loop(chart: &MetricChart, theta: f64, dt: f64, dphi: f64) -> LoopPath {
    let v = vec![vec![theta, 0.0], vec![theta + dt, 0.0], vec![theta + dt, dphi], vec![theta, dphi], vec![theta, 0.0]];
    LoopPath::new(chart, Polyline::new(v).unwrap()).unwrap()
}

#[test]
fn holonomy_composition_and_inverse() {
    let chart = sphere(1.0, 1e-4);
    let theta = PI / 3.0;
    let a = latitude(&chart, theta);
    let b = quad_loop(&chart, theta, 0.4, 1.0);
    let loops = vec![a.clone(), b.clone(), a.concat(&b), a.reversed()];
    let mats = holonomy_sample(&chart, &[theta, 0.0], &loops, 2048).unwrap();
    for m in &mats {
        assert!(m.isometry_residual < 1e-8);
    }
    // traversing a then b transports by P_a first
    let product = mat_mul(&mats[1].matrix, &mats[0].matrix);
    assert!(max_diff(&product, &mats[2].matrix) < 1e-6);
    let id = mat_mul(&mats[3].matrix, &mats[0].matrix);
    assert!(max_diff(&id, &vec![vec![1.0, 0.0], vec![0.0, 1.0]]) < 1e-6);
}

#[test]
fn flat_torus_holonomy_is_trivial() {
    let chart = MetricChart::new(Metric::FlatTorus { dim: 3, period: 1.0 }).unwrap();
    let lp = LoopPath::new(
        &chart,
        Polyline::new(vec![vec![0.1, 0.2, 0.3], vec![1.1, 0.7, 0.3], vec![1.1, 1.2, 2.3]]).unwrap(),
    )
    .unwrap();
    let mats = holonomy_sample(&chart, &[0.1, 0.2, 0.3], &[lp], 64).unwrap();
    let id: Mat = (0..3).map(|i| (0..3).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    assert!(max_diff(&mats[0].matrix, &id) < 1e-8);
}

#[test]
fn transport_conserves_inner_products_on_random_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let chart = sphere(1.3, 1e-4);
    for _ in 0..10 {
        let mut vertices = vec![vec![rng.gen_range(0.6..2.5), rng.gen_range(0.0..6.0)]];
        for _ in 0..3 {
            vertices.push(vec![rng.gen_range(0.6..2.5), rng.gen_range(0.0..6.0)]);
        }
        let path = Polyline::new(vertices).unwrap();
        let s1: Vec<f64> = vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let s2: Vec<f64> = vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let g0 = chart.metric_at(path.start()).unwrap();
        let g1 = chart.metric_at(path.end()).unwrap();
        let t1 = parallel_transport(&chart, &path, &s1, 1024).unwrap();
        let t2 = parallel_transport(&chart, &path, &s2, 1024).unwrap();
        assert!((inner(&g0, &s1, &s2) - inner(&g1, &t1, &t2)).abs() < 1e-8);
        assert!((inner(&g0, &s1, &s1) - inner(&g1, &t1, &t1)).abs() < 1e-8);
    }
}

#[test]
fn geodesic_on_fubini_study_keeps_speed() {
    let chart = MetricChart::new(Metric::FubiniStudy { complex_dim: 1 }).unwrap();
    let geo = geodesic(&chart, &[0.2, 0.1], &[0.5, -0.3], 5.0, 5000).unwrap();
    assert!(!geo.exited);
    assert!(geo.speed_drift < 1e-8, "{}", geo.speed_drift);
}
