#![allow(dead_code)]

use std::path::PathBuf;

use p3net::strategy::{BehaviourPoint, Representation};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

/// Reference vertex table, one 0/1 row per vertex, no header.
pub fn fixture_rows(rep: Representation) -> Vec<Vec<u8>> {
    let name = match rep {
        Representation::Full26 => "vertices_full.csv",
        Representation::Reduced8 => "vertices_reduced.csv",
    };
    std::fs::read_to_string(data_path(name))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|x| x.trim().parse::<u8>().unwrap()).collect())
        .collect()
}

pub fn p_b() -> BehaviourPoint {
    BehaviourPoint::reduced([0.5, 0.5, 0.5, 0.5, 0.5, 0.25, 0.25, 0.5]).unwrap()
}

pub fn p_u() -> BehaviourPoint {
    BehaviourPoint::reduced([0.5, 0.5, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25]).unwrap()
}

/// Minimizer and minimum of `||embed(t,t,t,t) - target||^2` for a target with
/// all singles `s` and composites `(u, v, v, u)`, by bisection on the
/// derivative.
pub fn symmetric_oracle(s: f64, u: f64, v: f64) -> (f64, f64) {
    // f(t) = 4(t-s)^2 + 2(t^2-u)^2 + 2(t^2-v)^2
    let f = |t: f64| 4.0 * (t - s).powi(2) + 2.0 * (t * t - u).powi(2) + 2.0 * (t * t - v).powi(2);
    let df = |t: f64| 8.0 * (t - s) + 8.0 * t * (t * t - u) + 8.0 * t * (t * t - v);
    // f is not always unimodal on [0,1]; bracket every sign change on a grid
    let mut best = (0.0, f(0.0));
    if f(1.0) < best.1 {
        best = (1.0, f(1.0));
    }
    let n = 1000;
    for k in 0..n {
        let (mut lo, mut hi) = (k as f64 / n as f64, (k + 1) as f64 / n as f64);
        if df(lo) <= 0.0 && df(hi) > 0.0 {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if df(mid) > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let t = 0.5 * (lo + hi);
            if f(t) < best.1 {
                best = (t, f(t));
            }
        }
    }
    best
}
