use super::matrix::{c, ComplexMatrix, MATRIX_TOL};
use crate::{Error, Result};

/// Projective measurements: `projectors[party][setting][outcome]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    local_dims: Vec<usize>,
    projectors: Vec<Vec<Vec<ComplexMatrix>>>,
}

impl MeasurementSet {
    /// Checks completeness and orthogonality of every projector family.
    /// All parties must share the same number of settings and outcomes.
    pub fn new(projectors: Vec<Vec<Vec<ComplexMatrix>>>) -> Result<Self> {
        let first = projectors
            .first()
            .and_then(|p| p.first())
            .ok_or_else(|| Error::InvalidMeasurement("no parties or settings".into()))?;
        let (m, d) = (projectors[0].len(), first.len());
        let mut local_dims = Vec::with_capacity(projectors.len());
        for (party, settings) in projectors.iter().enumerate() {
            if settings.len() != m {
                return Err(Error::InvalidMeasurement(format!(
                    "party {party} has {} settings, expected {m}",
                    settings.len()
                )));
            }
            let dim = settings[0].first().map(|p| p.rows()).unwrap_or(0);
            for (x, family) in settings.iter().enumerate() {
                if family.len() != d {
                    return Err(Error::InvalidMeasurement(format!(
                        "party {party} setting {x} has {} outcomes, expected {d}",
                        family.len()
                    )));
                }
                check_family(family, dim).map_err(|msg| {
                    Error::InvalidMeasurement(format!("party {party} setting {x}: {msg}"))
                })?;
            }
            local_dims.push(dim);
        }
        Ok(MeasurementSet { local_dims, projectors })
    }

    /// Standard basis for setting 0 and Hadamard basis for setting 1 on each
    /// of `parties` qubits. Outcome 0 is `|0>` or `|+>`.
    pub fn bb84(parties: usize) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = vec![
            ComplexMatrix::outer(&[c(1.0, 0.0), c(0.0, 0.0)]),
            ComplexMatrix::outer(&[c(0.0, 0.0), c(1.0, 0.0)]),
        ];
        let x = vec![
            ComplexMatrix::outer(&[c(h, 0.0), c(h, 0.0)]),
            ComplexMatrix::outer(&[c(h, 0.0), c(-h, 0.0)]),
        ];
        MeasurementSet::new(vec![vec![z, x]; parties]).expect("bb84 bases are projective")
    }

    pub fn parties(&self) -> usize {
        self.projectors.len()
    }

    pub fn settings(&self) -> usize {
        self.projectors[0].len()
    }

    pub fn outcomes(&self) -> usize {
        self.projectors[0][0].len()
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn projector(&self, party: usize, setting: usize, outcome: usize) -> &ComplexMatrix {
        &self.projectors[party][setting][outcome]
    }
}

fn check_family(family: &[ComplexMatrix], dim: usize) -> std::result::Result<(), String> {
    if dim == 0 {
        return Err("empty projector".into());
    }
    if family.iter().any(|p| p.rows() != dim || p.cols() != dim) {
        return Err(format!("projectors must all be {dim}x{dim}"));
    }
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for p in family {
        sum = &sum + p;
    }
    let residual = sum.max_abs_diff(&ComplexMatrix::identity(dim));
    if residual > MATRIX_TOL {
        return Err(format!("projectors do not sum to identity (residual {residual:.3e})"));
    }
    for (a, pa) in family.iter().enumerate() {
        for (b, pb) in family.iter().enumerate() {
            let prod = pa * pb;
            let expected = if a == b { pa.clone() } else { ComplexMatrix::zeros(dim, dim) };
            let residual = prod.max_abs_diff(&expected);
            if residual > MATRIX_TOL {
                return Err(format!(
                    "outcomes {a} and {b} violate M_a M_b = δ_ab M_a (residual {residual:.3e})"
                ));
            }
        }
    }
    Ok(())
}
