use super::*;
use alloc::vec;
use alloc::vec::Vec;
use approx::assert_relative_eq;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lm(cols: &[[f64; 2]], labels: &[usize]) -> LabeledMatrix {
    LabeledMatrix::new(Matrix::from_columns(cols).unwrap(), labels.to_vec()).unwrap()
}

fn random_dataset(rng: &mut ChaCha8Rng) -> LabeledMatrix {
    let k = rng.random_range(2..=4);
    let m = rng.random_range(2 * k..=50);
    let d = rng.random_range(1..=4);
    let mut labels: Vec<usize> = (0..m).map(|i| i % k).collect();
    for i in (1..m).rev() {
        labels.swap(i, rng.random_range(0..=i));
    }
    // Rounded coordinates produce plenty of distance ties.
    let x = Matrix::from_fn(d, m, |_, _| (rng.random::<f64>() * 6.0).round() / 2.0);
    LabeledMatrix::new(x, labels).unwrap()
}

fn dist(x: &Matrix, i: usize, j: usize) -> f64 {
    euclidean(x.col(i), x.col(j))
}

fn brute_ecdf(s: &[f64], t: f64) -> f64 {
    s.iter().filter(|&&v| v <= t).count() as f64 / s.len() as f64
}

fn brute_ks(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .chain(b)
        .map(|&t| (brute_ecdf(a, t) - brute_ecdf(b, t)).abs())
        .fold(0.0, f64::max)
}

fn brute_dsi(x: &LabeledMatrix) -> f64 {
    let (m, l) = (x.len(), x.labels());
    let mut sum = 0.0;
    for c in 0..x.classes() {
        let mut intra = Vec::new();
        let mut inter = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if l[i] == c && l[j] == c && i < j {
                    intra.push(dist(x.data(), i, j));
                } else if l[i] == c && l[j] != c {
                    inter.push(dist(x.data(), i, j));
                }
            }
        }
        sum += brute_ks(&intra, &inter);
    }
    1.0 - sum / x.classes() as f64
}

fn brute_nearest(x: &LabeledMatrix, i: usize, keep: impl Fn(usize) -> bool) -> f64 {
    (0..x.len())
        .filter(|&j| j != i && keep(j))
        .map(|j| dist(x.data(), i, j))
        .fold(f64::INFINITY, f64::min)
}

fn brute_n2(x: &LabeledMatrix, scope: NeighborScope) -> f64 {
    let l = x.labels();
    let (mut nn, mut ne) = (0.0, 0.0);
    for i in 0..x.len() {
        nn += match scope {
            NeighborScope::SameClass => brute_nearest(x, i, |j| l[j] == l[i]),
            NeighborScope::Any => brute_nearest(x, i, |_| true),
        };
        ne += brute_nearest(x, i, |j| l[j] != l[i]);
    }
    if ne == 0.0 {
        1.0
    } else {
        1.0 - 1.0 / (1.0 + nn / ne)
    }
}

fn brute_lsc(x: &LabeledMatrix) -> f64 {
    let (m, l) = (x.len(), x.labels());
    let mut total = 0usize;
    for i in 0..m {
        let r = brute_nearest(x, i, |j| l[j] != l[i]);
        total += (0..m).filter(|&j| j != i && dist(x.data(), i, j) < r).count();
    }
    1.0 - total as f64 / (m * m) as f64
}

fn brute_density(x: &Matrix, t: f64) -> f64 {
    let m = x.cols();
    let mut edges = 0usize;
    for i in 0..m {
        for j in 0..i {
            if dist(x, i, j) < t {
                edges += 1;
            }
        }
    }
    1.0 - 2.0 * edges as f64 / (m * (m - 1)) as f64
}

#[test]
fn ks_matches_brute_force_walk() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let a: Vec<f64> = (0..rng.random_range(1..20))
            .map(|_| rng.random_range(0..6) as f64)
            .collect();
        let b: Vec<f64> = (0..rng.random_range(1..20))
            .map(|_| rng.random_range(0..6) as f64)
            .collect();
        assert_eq!(ks_two_sample(&a, &b), brute_ks(&a, &b));
    }
}

#[test]
fn six_point_dsi_and_lsc_match_oracles() {
    let x = lm(
        &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [3.0, 3.0], [4.0, 3.0], [2.0, 1.0]],
        &[0, 0, 0, 1, 1, 1],
    );
    assert_eq!(dsi_measure(&x).unwrap(), brute_dsi(&x));
    assert_eq!(lsc_measure(&x).unwrap(), brute_lsc(&x));
}

#[test]
fn five_point_n2_matches_oracle() {
    let x = lm(
        &[[0.0, 0.0], [0.0, 2.0], [3.0, 0.0], [3.0, 1.0], [1.0, 1.0]],
        &[0, 0, 1, 1, 0],
    );
    for scope in [NeighborScope::SameClass, NeighborScope::Any] {
        assert_eq!(n2_measure(&x, scope).unwrap(), brute_n2(&x, scope));
    }
}

#[test]
fn random_datasets_match_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let x = random_dataset(&mut rng);
        assert_eq!(dsi_measure(&x).unwrap(), brute_dsi(&x));
        assert_eq!(
            n2_measure(&x, NeighborScope::SameClass).unwrap(),
            brute_n2(&x, NeighborScope::SameClass)
        );
        assert_eq!(lsc_measure(&x).unwrap(), brute_lsc(&x));
        for t in [0.3, 1.0, 2.5] {
            assert_eq!(
                density_measure(&x, t, DensityScaling::Raw).unwrap(),
                brute_density(x.data(), t)
            );
        }
    }
}

#[test]
fn duplicated_classes() {
    let base = [[0.0, 1.0], [2.0, -1.0], [0.5, 0.5], [3.0, 2.0]];
    let cols: Vec<[f64; 2]> = base.iter().chain(base.iter()).copied().collect();
    let x = lm(&cols, &[0, 0, 0, 0, 1, 1, 1, 1]);
    assert_relative_eq!(rs_measure(&x, &CodingConfig::default()).unwrap(), 1.0, epsilon = 1e-9);
    assert_eq!(n2_measure(&x, NeighborScope::SameClass).unwrap(), 1.0);
    assert_eq!(lsc_measure(&x).unwrap(), 1.0);
}

#[test]
fn density_extremes() {
    let x = lm(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]], &[0, 0, 1, 1]);
    assert_eq!(density_measure(&x, 10.0, DensityScaling::Raw).unwrap(), 0.0);
    assert_eq!(density_measure(&x, 0.5, DensityScaling::Raw).unwrap(), 1.0);
    assert!(density_measure(&x, 0.0, DensityScaling::Raw).is_err());
}

#[test]
fn min_max_density_uses_scaled_features() {
    let x = lm(&[[0.0, 0.0], [10.0, 0.0], [0.0, 100.0], [10.0, 100.0]], &[0, 0, 1, 1]);
    let scaled = min_max_scaled(x.data());
    assert_eq!(scaled.col(3), &[1.0, 1.0]);
    assert_eq!(
        density_measure(&x, 1.01, DensityScaling::MinMax).unwrap(),
        1.0 - 8.0 / 12.0
    );
}

#[test]
fn far_blobs_have_lsc_near_half() {
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for c in 0..2 {
        for i in 0..10 {
            cols.push([c as f64 * 100.0 + i as f64 * 0.1, 0.0]);
            labels.push(c);
        }
    }
    let x = lm(&cols, &labels);
    // Each local set is the other nine class members: 1 − 20·9/400.
    assert_relative_eq!(lsc_measure(&x).unwrap(), 0.55, epsilon = 1e-15);
}

#[test]
fn zero_data_has_undefined_rs() {
    let x = LabeledMatrix::new(Matrix::zeros(2, 4), vec![0, 0, 1, 1]).unwrap();
    assert_eq!(rs_measure(&x, &CodingConfig::default()), Err(Error::ZeroTotalRate));
}

#[test]
fn measure_all_routes_failures() {
    let x = lm(&[[0.0, 0.0], [1.0, 0.0], [5.0, 5.0]], &[0, 0, 1]);
    let r = measure_all("singleton", &x, &MeasureConfig::default(), MeasureSelection::ALL);
    assert!(r.rs.is_some() && r.lsc.is_some() && r.density.is_some());
    assert!(r.dsi.is_none() && r.n2.is_none());
    assert_eq!(r.failure(MeasureKind::Dsi).unwrap().error, "DegenerateClass");
    assert_eq!(r.failure(MeasureKind::N2).unwrap().error, "DegenerateClass");

    let empty = measure_all("none", &x, &MeasureConfig::default(), MeasureSelection::NONE);
    assert!(MeasureKind::ALL.iter().all(|&k| empty.get(k).is_none()));
    assert!(empty.failures.is_empty());
    assert_eq!(empty.epsilon, DEFAULT_EPSILON_ECHO);
}

const DEFAULT_EPSILON_ECHO: f64 = crate::coding::DEFAULT_EPSILON;

#[test]
fn streaming_mode_matches_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x = random_dataset(&mut rng);
    let dense = measure_all("x", &x, &MeasureConfig::default(), MeasureSelection::ALL);
    let cfg = MeasureConfig {
        distance_mode: DistanceMode::Streaming,
        ..MeasureConfig::default()
    };
    let stream = measure_all("x", &x, &cfg, MeasureSelection::ALL);
    assert_eq!(dense, stream);
}

#[test]
fn invariances() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let x = random_dataset(&mut rng);
        let base = measure_all("x", &x, &MeasureConfig::default(), MeasureSelection::ALL);

        let k = x.classes();
        let relabeled: Vec<usize> = x.labels().iter().map(|&l| (l + 1) % k).collect();
        let y = LabeledMatrix::new(x.data().clone(), relabeled).unwrap();
        let r = measure_all("x", &y, &MeasureConfig::default(), MeasureSelection::ALL);
        for kind in MeasureKind::ALL {
            match (base.get(kind), r.get(kind)) {
                (Some(a), Some(b)) => assert_relative_eq!(a, b, epsilon = 1e-12),
                (a, b) => assert_eq!(a, b),
            }
        }

        let m = x.len();
        let perm: Vec<usize> = (0..m).rev().collect();
        let y = LabeledMatrix::new(
            x.data().select_columns(&perm),
            perm.iter().map(|&j| x.labels()[j]).collect(),
        )
        .unwrap();
        let r = measure_all("x", &y, &MeasureConfig::default(), MeasureSelection::ALL);
        for kind in MeasureKind::ALL {
            match (base.get(kind), r.get(kind)) {
                (Some(a), Some(b)) => assert_relative_eq!(a, b, epsilon = 1e-12),
                (a, b) => assert_eq!(a, b),
            }
        }
    }
}

#[test]
fn values_stay_in_unit_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let x = random_dataset(&mut rng);
        let r = measure_all("x", &x, &MeasureConfig::default(), MeasureSelection::ALL);
        for kind in MeasureKind::ALL {
            if let Some(v) = r.get(kind) {
                if kind == MeasureKind::Rs {
                    assert!(v > 0.0, "{kind:?} = {v}");
                } else {
                    assert!((0.0..=1.0).contains(&v), "{kind:?} = {v}");
                }
            }
        }
    }
}
