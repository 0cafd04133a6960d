use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc;

use crate::strategy::BehaviourPoint;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub distance: f64,
    pub sigma_d: f64,
    pub z: f64,
    pub p_value: f64,
    pub overlap: f64,
    pub alpha: f64,
    pub reject: bool,
    pub alternative: String,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(())
}

/// Two-sided test of whether `p` and `q` differ, treating their Euclidean
/// distance as a normal variable with standard deviation `sigma_d`.
pub fn gaussian_separability(p: &BehaviourPoint, q: &BehaviourPoint, sigma_d: f64, alpha: f64) -> Result<TestReport> {
    if !sigma_d.is_finite() || sigma_d <= 0.0 {
        return Err(Error::InvalidArgument(format!("sigma_d must be positive, got {sigma_d}")));
    }
    check_alpha(alpha)?;
    let distance = p.distance(q)?;
    let z = distance / sigma_d;
    // 2 (1 - Phi(z)) and 2 Phi(-d / 2 sigma), written with erfc to keep the tails accurate
    let p_value = erfc(z / std::f64::consts::SQRT_2).clamp(0.0, 1.0);
    let overlap = erfc(distance / (2.0 * sigma_d * std::f64::consts::SQRT_2)).clamp(0.0, 1.0);
    Ok(TestReport {
        distance,
        sigma_d,
        z,
        p_value,
        overlap,
        alpha,
        reject: p_value < alpha,
        alternative: "two-sided".to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleResult {
    pub statistic: f64,
    pub p_value: f64,
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

fn check_finite(xs: &[f64], name: &str) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidSample(format!("{name} contains a non-finite value")));
    }
    Ok(())
}

/// Welch's unequal-variance t-test, two-sided.
pub fn two_sample_t(xs: &[f64], ys: &[f64]) -> Result<TwoSampleResult> {
    for (s, name) in [(xs, "first sample"), (ys, "second sample")] {
        if s.len() < 2 {
            return Err(Error::InvalidSample(format!("{name} needs at least 2 values, has {}", s.len())));
        }
        check_finite(s, name)?;
    }
    let (mx, vx) = mean_var(xs);
    let (my, vy) = mean_var(ys);
    if vx == 0.0 || vy == 0.0 {
        return Err(Error::InvalidSample("zero-variance sample".into()));
    }
    let (sx, sy) = (vx / xs.len() as f64, vy / ys.len() as f64);
    let se2 = sx + sy;
    let t = (mx - my) / se2.sqrt();
    let df = se2 * se2 / (sx * sx / (xs.len() as f64 - 1.0) + sy * sy / (ys.len() as f64 - 1.0));
    let p_value = beta_reg(df / 2.0, 0.5, df / (df + t * t)).clamp(0.0, 1.0);
    Ok(TwoSampleResult { statistic: t, p_value })
}

/// Largest gap between the two empirical CDFs. Tied values are stepped over
/// together.
fn ks_statistic(xs: &[f64], ys: &[f64]) -> f64 {
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Asymptotic Kolmogorov tail `2 sum (-1)^(j-1) exp(-2 j^2 lambda^2)`.
fn kolmogorov_q(lambda: f64) -> f64 {
    const EPS1: f64 = 1e-3;
    const EPS2: f64 = 1e-8;
    let a2 = -2.0 * lambda * lambda;
    let mut fac = 2.0;
    let mut sum = 0.0;
    let mut prev = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = fac * (a2 * jf * jf).exp();
        sum += term;
        if term.abs() <= EPS1 * prev || term.abs() <= EPS2 * sum {
            return sum.clamp(0.0, 1.0);
        }
        fac = -fac;
        prev = term.abs();
    }
    // only fails to settle for tiny lambda, where the tail is 1
    1.0
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
pub fn two_sample_ks(xs: &[f64], ys: &[f64]) -> Result<TwoSampleResult> {
    for (s, name) in [(xs, "first sample"), (ys, "second sample")] {
        if s.is_empty() {
            return Err(Error::InvalidSample(format!("{name} is empty")));
        }
        check_finite(s, name)?;
    }
    let d = ks_statistic(xs, ys);
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let ne = (n * m / (n + m)).sqrt();
    let lambda = (ne + 0.12 + 0.11 / ne) * d;
    Ok(TwoSampleResult { statistic: d, p_value: kolmogorov_q(lambda) })
}
