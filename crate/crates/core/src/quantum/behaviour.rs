use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::measurement::MeasurementSet;
use super::state::DensityMatrix;
use crate::strategy::{event_layout, BehaviourPoint, Representation, ScenarioShape};
use crate::{Error, Result};

/// Tolerance for per-setting normalization of a distribution table.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Conditional outcome distribution `p(outcomes | settings)`.
///
/// Setting and outcome tuples are flattened with party 0 as the most
/// significant digit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "DistributionJson", try_from = "DistributionJson")]
pub struct FullDistribution {
    shape: ScenarioShape,
    table: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DistributionJson {
    shape: ScenarioShape,
    table: Vec<SettingRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SettingRow {
    settings: Vec<usize>,
    probabilities: Vec<f64>,
}

impl From<FullDistribution> for DistributionJson {
    fn from(fd: FullDistribution) -> Self {
        let table = fd
            .table
            .iter()
            .enumerate()
            .map(|(x, row)| SettingRow {
                settings: digits(x, fd.shape.m, fd.shape.n),
                probabilities: row.clone(),
            })
            .collect();
        DistributionJson { shape: fd.shape, table }
    }
}

impl TryFrom<DistributionJson> for FullDistribution {
    type Error = Error;

    fn try_from(j: DistributionJson) -> Result<Self> {
        j.shape.validate()?;
        let mut table = vec![Vec::new(); j.shape.setting_tuples()];
        for row in j.table {
            if row.settings.len() != j.shape.n || row.settings.iter().any(|&s| s >= j.shape.m) {
                return Err(Error::MalformedDistribution(format!(
                    "invalid settings tuple {:?}",
                    row.settings
                )));
            }
            let x = undigits(&row.settings, j.shape.m);
            if !table[x].is_empty() {
                return Err(Error::MalformedDistribution(format!(
                    "duplicate settings tuple {:?}",
                    row.settings
                )));
            }
            table[x] = row.probabilities;
        }
        FullDistribution::new(j.shape, table)
    }
}

pub(crate) fn digits(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

pub(crate) fn undigits(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

impl FullDistribution {
    /// `table[settings_index][outcome_index]`; every row must be a probability
    /// vector within [`NORMALIZATION_TOL`].
    pub fn new(shape: ScenarioShape, table: Vec<Vec<f64>>) -> Result<Self> {
        shape.validate()?;
        if table.len() != shape.setting_tuples() {
            return Err(Error::MalformedDistribution(format!(
                "expected {} setting tuples, found {}",
                shape.setting_tuples(),
                table.len()
            )));
        }
        for (x, row) in table.iter().enumerate() {
            if row.len() != shape.outcome_tuples() {
                return Err(Error::MalformedDistribution(format!(
                    "settings {:?}: expected {} outcomes, found {}",
                    digits(x, shape.m, shape.n),
                    shape.outcome_tuples(),
                    row.len()
                )));
            }
            if let Some(p) = row.iter().find(|p| !p.is_finite() || **p < -NORMALIZATION_TOL) {
                return Err(Error::MalformedDistribution(format!(
                    "settings {:?}: invalid probability {p}",
                    digits(x, shape.m, shape.n)
                )));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::MalformedDistribution(format!(
                    "settings {:?}: probabilities sum to {total}",
                    digits(x, shape.m, shape.n)
                )));
            }
        }
        Ok(FullDistribution { shape, table })
    }

    pub fn shape(&self) -> ScenarioShape {
        self.shape
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }

    pub fn prob(&self, settings: &[usize], outcomes: &[usize]) -> f64 {
        self.table[undigits(settings, self.shape.m)][undigits(outcomes, self.shape.d)]
    }

    pub fn settings_tuple(&self, index: usize) -> Vec<usize> {
        digits(index, self.shape.m, self.shape.n)
    }

    pub fn outcome_tuple(&self, index: usize) -> Vec<usize> {
        digits(index, self.shape.d, self.shape.n)
    }
}

/// `p(a|x) = Tr(rho ⊗_i M_{a_i|x_i})`.
pub fn behaviour_from_state(
    rho: &DensityMatrix,
    meas: &MeasurementSet,
    shape: ScenarioShape,
) -> Result<FullDistribution> {
    shape.validate()?;
    if meas.parties() != shape.n || meas.settings() != shape.m || meas.outcomes() != shape.d {
        return Err(Error::DimensionMismatch(format!(
            "measurement set is ({},{},{}) but shape is {shape}",
            meas.parties(),
            meas.settings(),
            meas.outcomes()
        )));
    }
    let total: usize = meas.local_dims().iter().product();
    if total != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} differs from product of local dims {:?}",
            rho.dim(),
            meas.local_dims()
        )));
    }
    let mut table = Vec::with_capacity(shape.setting_tuples());
    for x in 0..shape.setting_tuples() {
        let settings = digits(x, shape.m, shape.n);
        let row = (0..shape.outcome_tuples())
            .map(|a| {
                let outcomes = digits(a, shape.d, shape.n);
                let op = settings
                    .iter()
                    .zip(&outcomes)
                    .enumerate()
                    .map(|(party, (&s, &o))| meas.projector(party, s, o).clone())
                    .reduce(|acc, p| acc.kron(&p))
                    .expect("at least one party");
                let p = (rho.matrix() * &op).trace().re;
                if p < 0.0 && p > -NORMALIZATION_TOL {
                    0.0
                } else {
                    p
                }
            })
            .collect();
        table.push(row);
    }
    FullDistribution::new(shape, table)
}

fn representation_for(shape: ScenarioShape) -> Result<Representation> {
    match shape {
        ScenarioShape::FULL => Ok(Representation::Full26),
        ScenarioShape::REDUCED => Ok(Representation::Reduced8),
        other => Err(Error::InvalidShape(format!(
            "collapse supports (3,2,2) and (2,2,2), found {other}"
        ))),
    }
}

/// Fixed-outcome-0 coordinates. Each coordinate is the probability that all
/// parties of its event report outcome 0 under the event's settings; parties
/// outside the event use setting 0 and are summed over.
pub fn collapse(fd: &FullDistribution) -> Result<BehaviourPoint> {
    let rep = representation_for(fd.shape)?;
    let n = fd.shape.n;
    let coords = event_layout(n)
        .into_iter()
        .map(|event| {
            let mut settings = vec![0; n];
            for &(party, s) in &event {
                settings[party] = s;
            }
            let row = &fd.table[undigits(&settings, fd.shape.m)];
            let p: f64 = row
                .iter()
                .enumerate()
                .filter(|(a, _)| {
                    let outcomes = digits(*a, fd.shape.d, n);
                    event.iter().all(|&(party, _)| outcomes[party] == 0)
                })
                .map(|(_, p)| p)
                .sum();
            p.clamp(0.0, 1.0)
        })
        .collect();
    BehaviourPoint::new(rep, coords)
}

/// Draws `shots` outcomes per setting tuple and returns the empirical table.
pub fn sample_distribution(fd: &FullDistribution, shots: usize, rng: &mut ChaCha8Rng) -> Result<FullDistribution> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let mut table = Vec::with_capacity(fd.table.len());
    for row in &fd.table {
        let weights: Vec<f64> = row.iter().map(|p| p.max(0.0)).collect();
        let dist = WeightedIndex::new(&weights)
            .map_err(|e| Error::MalformedDistribution(format!("cannot sample row: {e}")))?;
        let mut counts = vec![0usize; row.len()];
        for _ in 0..shots {
            counts[dist.sample(rng)] += 1;
        }
        table.push(counts.into_iter().map(|k| k as f64 / shots as f64).collect());
    }
    FullDistribution::new(fd.shape, table)
}

/// Empirical point from `shots` draws per setting tuple, with binomial
/// standard errors `sqrt(p(1-p)/shots)` per coordinate.
pub fn sample_point(fd: &FullDistribution, shots: usize, seed: u64) -> Result<(BehaviourPoint, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let empirical = sample_distribution(fd, shots, &mut rng)?;
    let point = collapse(&empirical)?;
    let errors = point
        .coords
        .iter()
        .map(|p| (p * (1.0 - p) / shots as f64).sqrt())
        .collect();
    Ok((point, errors))
}

pub fn sample_behaviour(
    rho: &DensityMatrix,
    meas: &MeasurementSet,
    shape: ScenarioShape,
    shots: usize,
    seed: u64,
) -> Result<(BehaviourPoint, Vec<f64>)> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    sample_point(&behaviour_from_state(rho, meas, shape)?, shots, seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignallingWitness {
    /// Party whose setting change moved the others' marginal.
    pub party: usize,
    pub settings: Vec<usize>,
    pub alternative_setting: usize,
    /// Outcomes of the other parties (this party's entry is unused).
    pub outcomes: Vec<usize>,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoSignallingReport {
    pub holds: bool,
    pub witness: Option<SignallingWitness>,
}

/// For every party, the marginal of the other parties (summed over this
/// party's outcomes) must not depend on this party's setting.
pub fn no_signalling_check(fd: &FullDistribution, tol: f64) -> NoSignallingReport {
    let ScenarioShape { n, m, d } = fd.shape;
    let mut worst: Option<SignallingWitness> = None;
    for party in 0..n {
        for x in 0..fd.shape.setting_tuples() {
            let settings = digits(x, m, n);
            if settings[party] != 0 {
                continue;
            }
            for alt in 1..m {
                let mut alt_settings = settings.clone();
                alt_settings[party] = alt;
                for a in 0..fd.shape.outcome_tuples() {
                    let outcomes = digits(a, d, n);
                    if outcomes[party] != 0 {
                        continue;
                    }
                    let marginal = |s: &[usize]| -> f64 {
                        (0..d)
                            .map(|o| {
                                let mut out = outcomes.clone();
                                out[party] = o;
                                fd.prob(s, &out)
                            })
                            .sum()
                    };
                    let deviation = (marginal(&settings) - marginal(&alt_settings)).abs();
                    if deviation > tol && worst.as_ref().is_none_or(|w| deviation > w.deviation) {
                        worst = Some(SignallingWitness {
                            party,
                            settings: settings.clone(),
                            alternative_setting: alt,
                            outcomes: outcomes.clone(),
                            deviation,
                        });
                    }
                }
            }
        }
    }
    NoSignallingReport { holds: worst.is_none(), witness: worst }
}
