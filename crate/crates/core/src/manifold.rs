//! The uncorrelated manifold of the reduced behaviour space: points whose
//! composite probabilities factor into products of the singles,
//! `(a0, a1, c0, c1, a0 c0, a0 c1, a1 c0, a1 c1)`. It passes through all 16
//! reduced vertices. Distance from it measures how much correlation a
//! behaviour carries.

use serde::{Deserialize, Serialize};

use crate::strategy::{BehaviourPoint, Representation};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManifoldParams {
    pub a0: f64,
    pub a1: f64,
    pub c0: f64,
    pub c1: f64,
}

impl ManifoldParams {
    pub fn new(a0: f64, a1: f64, c0: f64, c1: f64) -> Result<Self> {
        Self::from_array([a0, a1, c0, c1])
    }

    pub fn from_array(p: [f64; 4]) -> Result<Self> {
        if let Some(x) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::OutOfRange(format!("manifold parameter {x} not in [0,1]")));
        }
        Ok(ManifoldParams { a0: p[0], a1: p[1], c0: p[2], c1: p[3] })
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a0, self.a1, self.c0, self.c1]
    }
}

fn embed_raw(p: [f64; 4]) -> [f64; 8] {
    let [a0, a1, c0, c1] = p;
    [a0, a1, c0, c1, a0 * c0, a0 * c1, a1 * c0, a1 * c1]
}

pub fn embed(p: ManifoldParams) -> BehaviourPoint {
    BehaviourPoint::new(Representation::Reduced8, embed_raw(p.to_array()).to_vec())
        .expect("products of probabilities are probabilities")
}

/// True iff every composite equals the product of its singles within `tol`.
pub fn on_manifold(q: &BehaviourPoint, tol: f64) -> Result<bool> {
    q.ensure_representation(Representation::Reduced8)?;
    let x = &q.coords;
    let expected = embed_raw([x[0], x[1], x[2], x[3]]);
    Ok(x[4..].iter().zip(&expected[4..]).all(|(a, b)| (a - b).abs() <= tol))
}

/// `||embed(p) - target||^2`
pub fn objective(p: [f64; 4], target: &[f64; 8]) -> f64 {
    embed_raw(p).iter().zip(target).map(|(e, q)| (e - q) * (e - q)).sum()
}

/// Index pairs of the singles multiplied in each composite coordinate.
const COMPOSITES: [(usize, usize); 4] = [(0, 2), (0, 3), (1, 2), (1, 3)];

/// `objective(to) - objective(from)`, built from coordinate differences so it
/// stays accurate when the two points are very close.
fn objective_change(from: [f64; 4], to: [f64; 4], target: &[f64; 8]) -> f64 {
    let (a, b) = (embed_raw(from), embed_raw(to));
    let step: [f64; 4] = std::array::from_fn(|i| to[i] - from[i]);
    let mut diff = [0.0; 8];
    diff[..4].copy_from_slice(&step);
    for (k, &(i, j)) in COMPOSITES.iter().enumerate() {
        diff[4 + k] = step[i] * to[j] + from[i] * step[j];
    }
    (0..8).map(|k| diff[k] * (b[k] + a[k] - 2.0 * target[k])).sum()
}

pub fn gradient(p: [f64; 4], target: &[f64; 8]) -> [f64; 4] {
    let [a0, a1, c0, c1] = p;
    let e = embed_raw(p);
    let r: Vec<f64> = e.iter().zip(target).map(|(e, q)| e - q).collect();
    [
        2.0 * (r[0] + r[4] * c0 + r[5] * c1),
        2.0 * (r[1] + r[6] * c0 + r[7] * c1),
        2.0 * (r[2] + r[4] * a0 + r[6] * a1),
        2.0 * (r[3] + r[5] * a0 + r[7] * a1),
    ]
}

/// Fixed starting points, tried in this order before the target's own singles.
pub const LATTICE_STARTS: [[f64; 4]; 9] = [
    [0.5, 0.5, 0.5, 0.5],
    [0.25, 0.25, 0.25, 0.25],
    [0.75, 0.75, 0.75, 0.75],
    [0.25, 0.75, 0.25, 0.75],
    [0.75, 0.25, 0.75, 0.25],
    [0.25, 0.25, 0.75, 0.75],
    [0.75, 0.75, 0.25, 0.25],
    [0.25, 0.75, 0.75, 0.25],
    [0.75, 0.25, 0.25, 0.75],
];

const ARMIJO_C: f64 = 1e-4;
const BACKTRACK_SHRINK: f64 = 0.5;
/// Objective values this close count as the same minimum.
const TIE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectOptions {
    /// Number of lattice starts to use (at most 9).
    pub starts: usize,
    pub max_iter: usize,
    /// Convergence threshold on the projected gradient norm.
    pub grad_tol: f64,
}

impl Default for ProjectOptions {
    fn default() -> Self {
        ProjectOptions { starts: 9, max_iter: 10_000, grad_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub params: ManifoldParams,
    pub point: BehaviourPoint,
    pub distance: f64,
    pub squared_distance: f64,
    pub iterations: usize,
    pub converged: bool,
}

struct Descent {
    params: [f64; 4],
    value: f64,
    iterations: usize,
    converged: bool,
}

fn clamp_box(p: [f64; 4]) -> [f64; 4] {
    p.map(|x| x.clamp(0.0, 1.0))
}

fn projected_gradient_norm(p: [f64; 4], g: [f64; 4]) -> f64 {
    let mut stepped = p;
    for i in 0..4 {
        stepped[i] -= g[i];
    }
    let stepped = clamp_box(stepped);
    (0..4).map(|i| (p[i] - stepped[i]).powi(2)).sum::<f64>().sqrt()
}

/// Box-constrained gradient descent with Armijo backtracking. Each line
/// search starts from the Barzilai-Borwein step of the previous iteration.
fn descend(start: [f64; 4], target: &[f64; 8], opts: &ProjectOptions) -> Descent {
    let mut x = clamp_box(start);
    let mut fx = objective(x, target);
    let mut g = gradient(x, target);
    let mut trial_step = 1.0;
    for iter in 0..opts.max_iter {
        if projected_gradient_norm(x, g) <= opts.grad_tol {
            return Descent { params: x, value: fx, iterations: iter, converged: true };
        }
        let mut step = trial_step;
        let (next, f_next) = loop {
            let mut trial = x;
            for i in 0..4 {
                trial[i] -= step * g[i];
            }
            let trial = clamp_box(trial);
            let decrease: f64 = (0..4).map(|i| g[i] * (trial[i] - x[i])).sum();
            if trial == x {
                break (x, fx);
            }
            let change = objective_change(x, trial, target);
            if change <= ARMIJO_C * decrease {
                break (trial, objective(trial, target));
            }
            step *= BACKTRACK_SHRINK;
        };
        if next == x {
            // step fell below the resolution of the parameters
            let converged = projected_gradient_norm(x, g) <= opts.grad_tol;
            return Descent { params: x, value: fx, iterations: iter + 1, converged };
        }
        let g_next = gradient(next, target);
        let (mut ss, mut sy) = (0.0, 0.0);
        for i in 0..4 {
            let s = next[i] - x[i];
            ss += s * s;
            sy += s * (g_next[i] - g[i]);
        }
        trial_step = if sy > 0.0 { (ss / sy).clamp(1e-6, 1e6) } else { 1.0 };
        x = next;
        fx = f_next;
        g = g_next;
    }
    let converged = projected_gradient_norm(x, g) <= opts.grad_tol;
    Descent { params: x, value: fx, iterations: opts.max_iter, converged }
}

/// Closest point of the manifold to `q` in Euclidean distance.
///
/// Runs [`descend`] from the first `opts.starts` lattice points and from
/// `q`'s singles; keeps the lowest objective. Among values equal up to
/// rounding a converged run wins, then the earliest start.
pub fn project(q: &BehaviourPoint, opts: &ProjectOptions) -> Result<ProjectionResult> {
    q.ensure_representation(Representation::Reduced8)?;
    q.validate()?;
    if opts.max_iter == 0 || opts.grad_tol.is_nan() || opts.grad_tol <= 0.0 {
        return Err(Error::InvalidArgument("max_iter and grad_tol must be positive".into()));
    }
    let target: [f64; 8] = q.coords[..].try_into().expect("validated length");
    let starts = LATTICE_STARTS
        .iter()
        .take(opts.starts.min(LATTICE_STARTS.len()))
        .copied()
        .chain(std::iter::once([target[0], target[1], target[2], target[3]]));

    let mut best: Option<Descent> = None;
    for start in starts {
        let run = descend(start, &target, opts);
        let better = match &best {
            None => true,
            Some(b) => {
                let tie = TIE_TOL * (1.0 + b.value);
                run.value < b.value - tie || (run.value <= b.value + tie && run.converged && !b.converged)
            }
        };
        if better {
            best = Some(run);
        }
    }
    let best = best.expect("at least the target start");
    let params = ManifoldParams::from_array(best.params)?;
    Ok(ProjectionResult {
        params,
        point: embed(params),
        distance: best.value.sqrt(),
        squared_distance: best.value,
        iterations: best.iterations,
        converged: best.converged,
    })
}

/// Distance of `observed` from the manifold as a fraction of the distance of
/// `reference`.
pub fn normalized_score(observed: &BehaviourPoint, reference: &BehaviourPoint, opts: &ProjectOptions) -> Result<f64> {
    observed.ensure_same_kind(reference)?;
    let denom = project(reference, opts)?.distance;
    if denom <= 1e-12 {
        return Err(Error::DegenerateReference(format!(
            "reference lies on the uncorrelated manifold (distance {denom:.3e})"
        )));
    }
    Ok(project(observed, opts)?.distance / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p_b() -> BehaviourPoint {
        BehaviourPoint::reduced([0.5, 0.5, 0.5, 0.5, 0.5, 0.25, 0.25, 0.5]).unwrap()
    }

    fn p_u() -> BehaviourPoint {
        BehaviourPoint::reduced([0.5, 0.5, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25]).unwrap()
    }

    /// Minimizer of the symmetric 1-D restriction
    /// `4(t-1/2)^2 + 2(t^2-1/2)^2 + 2(t^2-1/4)^2`, from its stationarity
    /// condition `2t^3 + t/4 - 1/2 = 0` solved by bisection.
    fn bisection_oracle() -> (f64, f64) {
        let h = |t: f64| 2.0 * t.powi(3) + t / 4.0 - 0.5;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        let f = 4.0 * (t - 0.5).powi(2) + 2.0 * (t * t - 0.5).powi(2) + 2.0 * (t * t - 0.25).powi(2);
        (t, f)
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed(ManifoldParams::new(0.5, 0.5, 0.5, 0.5).unwrap()), p_u());
        assert_eq!(embed(ManifoldParams::new(0.0, 0.0, 0.0, 0.0).unwrap()).coords, vec![0.0; 8]);
        assert_eq!(
            embed(ManifoldParams::new(1.0, 0.0, 0.0, 1.0).unwrap()).coords,
            vec![1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0]
        );
        assert!(ManifoldParams::new(1.1, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn manifold_membership() {
        assert!(on_manifold(&p_u(), 1e-9).unwrap());
        assert!(!on_manifold(&p_b(), 1e-9).unwrap());
        for v in crate::strategy::enumerate_reduced() {
            assert!(on_manifold(&v.to_point(), 0.0).unwrap());
        }
        let full = BehaviourPoint::new(Representation::Full26, vec![0.0; 26]).unwrap();
        assert!(on_manifold(&full, 1e-9).is_err());
    }

    #[test]
    fn projection_of_point_on_manifold() {
        let r = project(&p_u(), &ProjectOptions::default()).unwrap();
        assert!(r.distance < 1e-12);
        assert!(r.converged);
        assert_eq!(r.params.to_array(), [0.5; 4]);
    }

    #[test]
    fn projection_of_bell_point() {
        let (t, f) = bisection_oracle();
        assert!((f - 0.0918).abs() < 1e-4);
        let r = project(&p_b(), &ProjectOptions::default()).unwrap();
        assert!(r.converged);
        for x in r.params.to_array() {
            assert!((x - t).abs() < 1e-6, "{x} vs {t}");
            assert!((x - 0.564).abs() < 0.002);
        }
        assert!((r.squared_distance - f).abs() < 1e-8);
        assert!((r.distance * r.distance - r.squared_distance).abs() < 1e-12);
        assert_eq!(r.point, embed(r.params));
    }

    #[test]
    fn analytic_gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let h = 1e-6;
        for _ in 0..100 {
            let p: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.05..0.95));
            let target: [f64; 8] = std::array::from_fn(|_| rng.random::<f64>());
            let g = gradient(p, &target);
            for i in 0..4 {
                let (mut up, mut down) = (p, p);
                up[i] += h;
                down[i] -= h;
                let fd = (objective(up, &target) - objective(down, &target)) / (2.0 * h);
                let rel = (g[i] - fd).abs() / g[i].abs().max(1e-8);
                assert!(rel < 1e-5 || (g[i] - fd).abs() < 1e-9, "component {i}: {} vs {fd}", g[i]);
            }
        }
    }

    #[test]
    fn embedded_points_project_to_themselves() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let p = ManifoldParams::from_array(std::array::from_fn(|_| rng.random::<f64>())).unwrap();
            let r = project(&embed(p), &ProjectOptions::default()).unwrap();
            assert!(r.distance <= 1e-8, "{p:?} -> {}", r.distance);
        }
    }

    #[test]
    fn result_never_worse_than_any_start() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let coords: [f64; 8] = std::array::from_fn(|_| rng.random::<f64>());
            let q = BehaviourPoint::reduced(coords).unwrap();
            let r = project(&q, &ProjectOptions::default()).unwrap();
            for start in LATTICE_STARTS.iter().chain(std::iter::once(&[coords[0], coords[1], coords[2], coords[3]])) {
                assert!(r.squared_distance <= objective(*start, &coords) + 1e-15);
            }
        }
    }

    #[test]
    fn exhausted_iterations_are_reported() {
        let opts = ProjectOptions { starts: 1, max_iter: 1, grad_tol: 1e-14 };
        let r = project(&p_b(), &opts).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn normalized_scores() {
        let opts = ProjectOptions::default();
        assert!((normalized_score(&p_b(), &p_b(), &opts).unwrap() - 1.0).abs() < 1e-12);
        assert!(normalized_score(&p_u(), &p_b(), &opts).unwrap().abs() < 1e-10);
        assert!(matches!(normalized_score(&p_b(), &p_u(), &opts), Err(Error::DegenerateReference(_))));
    }
}
