use super::behaviour::{digits, FullDistribution, NORMALIZATION_TOL};
use crate::strategy::{DeterministicStrategy, ScenarioShape};
use crate::{Error, Result};

/// Classical model of the line network: `lambda` is shared by the first and
/// middle party, `lambda_prime` by the middle and third party.
#[derive(Debug, Clone, PartialEq)]
pub struct LhvModel {
    pub lambda_weights: Vec<f64>,
    pub lambda_prime_weights: Vec<f64>,
    /// `first[lambda][s][x] = P(x | s, lambda)`
    pub first: Vec<Vec<Vec<f64>>>,
    /// `middle[lambda][lambda'][t][y] = P(y | t, lambda, lambda')`
    pub middle: Vec<Vec<Vec<Vec<f64>>>>,
    /// `third[lambda'][u][z] = P(z | u, lambda')`
    pub third: Vec<Vec<Vec<f64>>>,
}

impl LhvModel {
    /// Single-valued hidden variables reproducing one deterministic strategy:
    /// a wing emits the fixed outcome 0 at setting `s` iff its bit for `s` is 1.
    pub fn deterministic(strategy: DeterministicStrategy) -> Self {
        let response = |w: crate::strategy::WingStrategy| -> Vec<Vec<f64>> {
            (0..2)
                .map(|s| if w.out(s) == 1 { vec![1.0, 0.0] } else { vec![0.0, 1.0] })
                .collect()
        };
        LhvModel {
            lambda_weights: vec![1.0],
            lambda_prime_weights: vec![1.0],
            first: vec![response(strategy.alpha)],
            middle: vec![vec![response(strategy.beta)]],
            third: vec![response(strategy.gamma)],
        }
    }

    /// Shared-randomness model realising `omega * s1 + (1 - omega) * s2`.
    ///
    /// If the strategies share the first party's response, the source between
    /// the middle and third party picks which strategy the other two follow;
    /// if they share the third party's response, the other source does. Any
    /// other pair is hidden and has no such model.
    pub fn segment(s1: DeterministicStrategy, s2: DeterministicStrategy, omega: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&omega) {
            return Err(Error::OutOfRange(format!("mixture weight {omega} not in [0,1]")));
        }
        let (a, b) = (LhvModel::deterministic(s1), LhvModel::deterministic(s2));
        let (r1, r2) = (a.middle[0][0].clone(), b.middle[0][0].clone());
        if s1.alpha == s2.alpha {
            Ok(LhvModel {
                lambda_weights: vec![1.0],
                lambda_prime_weights: vec![omega, 1.0 - omega],
                first: a.first,
                middle: vec![vec![r1, r2]],
                third: vec![a.third[0].clone(), b.third[0].clone()],
            })
        } else if s1.gamma == s2.gamma {
            Ok(LhvModel {
                lambda_weights: vec![omega, 1.0 - omega],
                lambda_prime_weights: vec![1.0],
                first: vec![a.first[0].clone(), b.first[0].clone()],
                middle: vec![vec![r1], vec![r2]],
                third: a.third,
            })
        } else {
            Err(Error::InvalidArgument(
                "strategies share neither outer response; the segment leaves the local set".into(),
            ))
        }
    }

    fn shape(&self) -> Result<(usize, usize)> {
        let m = self.first.first().map(|r| r.len()).unwrap_or(0);
        let d = self.first.first().and_then(|r| r.first()).map(|r| r.len()).unwrap_or(0);
        if m == 0 || d == 0 {
            return Err(Error::MalformedDistribution("empty response table".into()));
        }
        Ok((m, d))
    }

    pub fn validate(&self) -> Result<()> {
        check_weights("lambda", &self.lambda_weights)?;
        check_weights("lambda'", &self.lambda_prime_weights)?;
        let (m, d) = self.shape()?;
        let (nl, nlp) = (self.lambda_weights.len(), self.lambda_prime_weights.len());
        if self.first.len() != nl || self.third.len() != nlp || self.middle.len() != nl {
            return Err(Error::MalformedDistribution(
                "response tables do not match hidden-variable alphabets".into(),
            ));
        }
        for (l, rows) in self.first.iter().enumerate() {
            check_rows(&format!("first party, lambda {l}"), rows, m, d)?;
        }
        for (l, rows) in self.third.iter().enumerate() {
            check_rows(&format!("third party, lambda' {l}"), rows, m, d)?;
        }
        for (l, per_lp) in self.middle.iter().enumerate() {
            if per_lp.len() != nlp {
                return Err(Error::MalformedDistribution(format!(
                    "middle party, lambda {l}: expected {nlp} lambda' entries"
                )));
            }
            for (lp, rows) in per_lp.iter().enumerate() {
                check_rows(&format!("middle party, lambda {l}, lambda' {lp}"), rows, m, d)?;
            }
        }
        Ok(())
    }
}

fn check_weights(name: &str, w: &[f64]) -> Result<()> {
    if w.is_empty() || w.iter().any(|&p| p.is_nan() || p < 0.0) {
        return Err(Error::MalformedDistribution(format!("{name} weights must be nonnegative")));
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::MalformedDistribution(format!("{name} weights sum to {total}")));
    }
    Ok(())
}

fn check_rows(what: &str, rows: &[Vec<f64>], m: usize, d: usize) -> Result<()> {
    if rows.len() != m {
        return Err(Error::MalformedDistribution(format!("{what}: expected {m} settings")));
    }
    for (s, row) in rows.iter().enumerate() {
        if row.len() != d {
            return Err(Error::MalformedDistribution(format!("{what}, setting {s}: expected {d} outcomes")));
        }
        check_weights(&format!("{what}, setting {s}"), row)?;
    }
    Ok(())
}

/// `P(xyz|stu) = sum_{l,l'} P(x|s,l) P(y|t,l,l') P(z|u,l') P(l) P(l')`.
pub fn lhv_evaluate(model: &LhvModel) -> Result<FullDistribution> {
    model.validate()?;
    let (m, d) = model.shape()?;
    let shape = ScenarioShape::new(3, m, d)?;
    let mut table = vec![vec![0.0; shape.outcome_tuples()]; shape.setting_tuples()];
    for (x, row) in table.iter_mut().enumerate() {
        let st = digits(x, m, 3);
        for (a, slot) in row.iter_mut().enumerate() {
            let o = digits(a, d, 3);
            let mut p = 0.0;
            for (l, wl) in model.lambda_weights.iter().enumerate() {
                let pa = model.first[l][st[0]][o[0]];
                if pa == 0.0 || *wl == 0.0 {
                    continue;
                }
                for (lp, wlp) in model.lambda_prime_weights.iter().enumerate() {
                    p += wl
                        * wlp
                        * pa
                        * model.middle[l][lp][st[1]][o[1]]
                        * model.third[lp][st[2]][o[2]];
                }
            }
            *slot = p;
        }
    }
    FullDistribution::new(shape, table)
}
