mod common;

use std::collections::BTreeMap;

use common::{fixture_rows, p_b, symmetric_oracle};
use p3net::geometry::{segment, visibility_test, VisibilityStatus};
use p3net::manifold::{embed, normalized_score, objective, on_manifold, project, ManifoldParams, ProjectOptions};
use p3net::quantum::{behaviour_from_state, collapse, lhv_evaluate, qkd_scenario, LhvModel, ScenarioKind};
use p3net::strategy::{
    enumerate_strategies, hamming_histogram, vertex_from_strategy, BehaviourPoint, Representation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn hamming_histogram_matches_reference_table() {
    let generated: Vec<_> = enumerate_strategies().into_iter().map(vertex_from_strategy).collect();
    let mut from_fixture = BTreeMap::new();
    for row in fixture_rows(Representation::Full26) {
        *from_fixture.entry(row.iter().filter(|&&b| b == 1).count()).or_insert(0) += 1;
    }
    assert_eq!(hamming_histogram(&generated).unwrap(), from_fixture);
    let expected: BTreeMap<usize, usize> =
        [(0, 1), (1, 6), (2, 3), (3, 12), (5, 12), (7, 8), (8, 3), (11, 12), (17, 6), (26, 1)].into_iter().collect();
    assert_eq!(from_fixture, expected);
}

#[test]
fn symmetric_targets_agree_with_scalar_oracle() {
    let targets = [(0.5, 0.5, 0.25), (0.5, 0.25, 0.25), (0.3, 0.2, 0.05), (0.7, 0.6, 0.4), (0.5, 0.4, 0.1), (0.9, 0.85, 0.8)];
    for (s, u, v) in targets {
        let q = BehaviourPoint::reduced([s, s, s, s, u, v, v, u]).unwrap();
        let r = project(&q, &ProjectOptions::default()).unwrap();
        let (_, f) = symmetric_oracle(s, u, v);
        assert!((r.squared_distance - f).abs() < 1e-8, "({s},{u},{v}): {} vs {f}", r.squared_distance);
    }
}

#[test]
fn projection_beats_a_brute_force_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    for _ in 0..5 {
        let target: [f64; 8] = std::array::from_fn(|_| rng.random::<f64>());
        let r = project(&BehaviourPoint::reduced(target).unwrap(), &ProjectOptions::default()).unwrap();
        let mut best = f64::INFINITY;
        for &a0 in &grid {
            for &a1 in &grid {
                for &c0 in &grid {
                    for &c1 in &grid {
                        best = best.min(objective([a0, a1, c0, c1], &target));
                    }
                }
            }
        }
        assert!(r.squared_distance <= best + 1e-12, "{} > grid {best}", r.squared_distance);
        // grid spacing 0.05 bounds how far above the optimum the grid can sit
        assert!(best - r.squared_distance < 0.05);
    }
}

#[test]
fn embedding_always_lands_on_manifold() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..200 {
        let p = ManifoldParams::from_array(std::array::from_fn(|_| rng.random::<f64>())).unwrap();
        assert!(on_manifold(&embed(p), 1e-12).unwrap());
    }
}

#[test]
fn noisy_honest_score_is_between_zero_and_one() {
    let (rho, meas, shape) = qkd_scenario(ScenarioKind::Honest, 0.5).unwrap();
    let observed = collapse(&behaviour_from_state(&rho, &meas, shape).unwrap()).unwrap();
    let score = normalized_score(&observed, &p_b(), &ProjectOptions::default()).unwrap();
    assert!(score > 0.0 && score < 1.0, "{score}");
    let mut last = 1.0 + 1e-12;
    for noise in [0.0, 0.2, 0.4, 0.6, 0.8, 1.0] {
        let (rho, meas, shape) = qkd_scenario(ScenarioKind::Honest, noise).unwrap();
        let point = collapse(&behaviour_from_state(&rho, &meas, shape).unwrap()).unwrap();
        let s = normalized_score(&point, &p_b(), &ProjectOptions::default()).unwrap();
        assert!(s <= last, "score rose to {s} at noise {noise}");
        last = s;
    }
    assert!(last < 1e-8);
}

#[test]
fn classical_segments_between_visible_vertices() {
    let strategies = enumerate_strategies();
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..300 {
        let s1 = strategies[rng.random_range(0..64)];
        let s2 = strategies[rng.random_range(0..64)];
        let omega = rng.random::<f64>();
        let model = LhvModel::segment(s1, s2, omega);
        if visibility_test(s1, s2) == VisibilityStatus::Hidden {
            assert!(model.is_err());
            continue;
        }
        let point = collapse(&lhv_evaluate(&model.unwrap()).unwrap()).unwrap();
        let line = segment(&vertex_from_strategy(s1).to_point(), &vertex_from_strategy(s2).to_point(), omega).unwrap();
        assert!(point.approx_eq(&line, 1e-12), "{} -> {} at {omega}", s1.index(), s2.index());
    }
}
