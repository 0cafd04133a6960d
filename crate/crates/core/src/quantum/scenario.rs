use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::measurement::MeasurementSet;
use super::state::{partial_trace_subsystems, DensityMatrix};
use crate::strategy::ScenarioShape;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    /// One Bell pair shared directly by the two outer parties.
    Honest,
    /// The middle party holds one half of a Bell pair with each outer party.
    Intercepted,
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioKind::Honest => "honest",
            ScenarioKind::Intercepted => "intercepted",
        })
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "honest" => Ok(ScenarioKind::Honest),
            "intercepted" => Ok(ScenarioKind::Intercepted),
            other => Err(Error::Parse(format!("unknown scenario kind '{other}'"))),
        }
    }
}

/// State, measurements and shape seen by the two outer parties.
///
/// Every Bell pair goes through a depolarizing channel with probability
/// `noise` before measurement. In the intercepted case the middle party's
/// two qubits are traced out, leaving the outer parties' view only.
pub fn qkd_scenario(kind: ScenarioKind, noise: f64) -> Result<(DensityMatrix, MeasurementSet, ScenarioShape)> {
    if !(0.0..=1.0).contains(&noise) || noise.is_nan() {
        return Err(Error::OutOfRange(format!("noise {noise} not in [0,1]")));
    }
    let pair = DensityMatrix::phi_plus().depolarize(noise)?;
    let rho = match kind {
        ScenarioKind::Honest => pair,
        ScenarioKind::Intercepted => {
            // qubit order: first party, middle (first half), middle (second half), third party
            let chain = pair.tensor(&pair);
            partial_trace_subsystems(&chain, &[2, 2, 2, 2], &[true, false, false, true])?
        }
    };
    Ok((rho, MeasurementSet::bb84(2), ScenarioShape::REDUCED))
}
