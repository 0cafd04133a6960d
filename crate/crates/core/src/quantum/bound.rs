use serde::{Deserialize, Serialize};

use super::behaviour::{behaviour_from_state, collapse};
use super::measurement::MeasurementSet;
use super::state::{partial_trace, trace_distance, DensityMatrix, Keep};
use crate::stats::norms;
use crate::strategy::ScenarioShape;
use crate::{Error, Result};

/// `||V||_2 <= ||V||_1 <= 2 (delta_A + delta_B + delta_AB)` for
/// `V = P(rho) - P(sigma)` in the reduced coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub v: Vec<f64>,
    pub l2: f64,
    pub l1: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    pub delta_ab: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn behaviour_bound_check(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    meas: &MeasurementSet,
    shape: ScenarioShape,
) -> Result<BoundReport> {
    if shape != ScenarioShape::REDUCED {
        return Err(Error::InvalidShape(format!("bound check needs shape (2,2,2), found {shape}")));
    }
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states have dims {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let p = collapse(&behaviour_from_state(rho, meas, shape)?)?;
    let q = collapse(&behaviour_from_state(sigma, meas, shape)?)?;
    let v = p.difference(&q)?;
    let n = norms(&v);

    let dims = (meas.local_dims()[0], meas.local_dims()[1]);
    let delta_a = trace_distance(&partial_trace(rho, dims, Keep::A)?, &partial_trace(sigma, dims, Keep::A)?)?;
    let delta_b = trace_distance(&partial_trace(rho, dims, Keep::B)?, &partial_trace(sigma, dims, Keep::B)?)?;
    let delta_ab = trace_distance(rho, sigma)?;
    let rhs = 2.0 * (delta_a + delta_b + delta_ab);
    Ok(BoundReport {
        holds: n.l2 <= n.l1 + 1e-12 && n.l1 <= rhs + 1e-10,
        v,
        l2: n.l2,
        l1: n.l1,
        delta_a,
        delta_b,
        delta_ab,
        rhs,
    })
}
