use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::strategy::BehaviourPoint;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseMode {
    /// Standard deviation is `sigma` times the component value.
    #[default]
    Relative,
    /// Standard deviation is `sigma` for every component.
    Absolute,
}

impl std::str::FromStr for NoiseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relative" => Ok(NoiseMode::Relative),
            "absolute" => Ok(NoiseMode::Absolute),
            _ => Err(Error::Parse(format!("unknown noise mode {s:?} (expected relative or absolute)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub relative_sigma: f64,
    pub seed: u64,
    #[serde(default)]
    pub mode: NoiseMode,
}

impl NoiseSpec {
    pub fn new(relative_sigma: f64, seed: u64) -> Result<Self> {
        let spec = NoiseSpec { relative_sigma, seed, mode: NoiseMode::Relative };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_mode(mut self, mode: NoiseMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.relative_sigma.is_finite() || self.relative_sigma < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "noise sigma must be a finite non-negative number, got {}",
                self.relative_sigma
            )));
        }
        Ok(())
    }

    fn std_dev(&self, x: f64) -> f64 {
        match self.mode {
            NoiseMode::Relative => self.relative_sigma * x,
            NoiseMode::Absolute => self.relative_sigma,
        }
    }
}

/// Adds independent Gaussian noise to each component and clamps to [0,1].
///
/// One normal draw is consumed per component whatever its deviation, so the
/// stream stays aligned across inputs.
pub fn perturb(p: &BehaviourPoint, noise: &NoiseSpec) -> Result<BehaviourPoint> {
    p.validate()?;
    noise.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let coords = p
        .coords
        .iter()
        .map(|&x| {
            let z: f64 = StandardNormal.sample(&mut rng);
            (x + noise.std_dev(x) * z).clamp(0.0, 1.0)
        })
        .collect();
    BehaviourPoint::new(p.representation, coords)
}

/// Length of the shift obtained by moving every component by exactly its
/// relative deviation.
pub fn distance_sigma(p: &BehaviourPoint, relative_sigma: f64) -> f64 {
    distance_sigma_with(p, relative_sigma, NoiseMode::Relative)
}

pub fn distance_sigma_with(p: &BehaviourPoint, sigma: f64, mode: NoiseMode) -> f64 {
    let spec = NoiseSpec { relative_sigma: sigma, seed: 0, mode };
    p.coords.iter().map(|&x| spec.std_dev(x).powi(2)).sum::<f64>().sqrt()
}
