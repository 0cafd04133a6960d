use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::matrix::{c, ComplexMatrix, MATRIX_TOL};
use crate::{Error, Result};

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// (all within [`MATRIX_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

/// Which half of a bipartite system to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::InvalidState(format!(
                "matrix must be square and nonempty, found {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let residual = matrix.hermitian_residual();
        if residual > MATRIX_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (residual {residual:.3e})")));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > MATRIX_TOL || trace.im.abs() > MATRIX_TOL {
            return Err(Error::InvalidState(format!("trace ≠ 1 (trace = {:.12})", trace.re)));
        }
        let smallest = matrix.hermitian_eigenvalues()?[0];
        if smallest < -MATRIX_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {smallest:.3e}"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    /// `|psi><psi|` for a normalized state vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > MATRIX_TOL {
            return Err(Error::InvalidState(format!("state vector norm² = {norm}")));
        }
        DensityMatrix::new(ComplexMatrix::outer(psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// `(|00> + |11>) / sqrt(2)`.
    pub fn phi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).expect("normalized")
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let psi: Vec<Complex64> = (0..dim).map(|i| c(if i == index { 1.0 } else { 0.0 }, 0.0)).collect();
        DensityMatrix::pure(&psi).expect("basis vector")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { matrix: self.matrix.kron(&other.matrix) }
    }

    /// `(1 - p) rho + p I / dim`.
    pub fn depolarize(&self, p: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(format!("depolarizing probability {p} not in [0,1]")));
        }
        let mixed = ComplexMatrix::identity(self.dim()).scale(p / self.dim() as f64);
        Ok(DensityMatrix { matrix: &self.matrix.scale(1.0 - p) + &mixed })
    }

    /// `G G^dagger / Tr(G G^dagger)` with standard complex Gaussian `G`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
        let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
            c(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let w = &g * &g.adjoint();
        let tr = w.trace().re;
        let m = w.scale(1.0 / tr);
        // exact Hermitian symmetrization; products leave ~1e-17 residue
        let m = (&m + &m.adjoint()).scale(0.5);
        DensityMatrix { matrix: m }
    }

    pub fn to_json(&self) -> DensityMatrixJson {
        DensityMatrixJson {
            dim: self.dim(),
            re: self.matrix.re_parts(),
            im: self.matrix.im_parts(),
        }
    }
}

/// On-disk form: `{"dim": d, "re": [[...]], "im": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl TryFrom<DensityMatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: DensityMatrixJson) -> Result<Self> {
        let m = ComplexMatrix::from_parts(&j.re, &j.im)?;
        if m.rows() != j.dim || m.cols() != j.dim {
            return Err(Error::DimensionMismatch(format!(
                "declared dim {} but matrix is {}x{}",
                j.dim,
                m.rows(),
                m.cols()
            )));
        }
        DensityMatrix::new(m)
    }
}

/// Traces out every subsystem whose `keep` flag is false. Subsystem 0 is the
/// most significant tensor factor.
pub fn partial_trace_subsystems(rho: &DensityMatrix, dims: &[usize], keep: &[bool]) -> Result<DensityMatrix> {
    if dims.len() != keep.len() || dims.is_empty() {
        return Err(Error::DimensionMismatch("dims and keep flags must match".into()));
    }
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} multiply to {total}, state has dim {}",
            rho.dim()
        )));
    }
    let kept_dim: usize = dims.iter().zip(keep).filter(|(_, &k)| k).map(|(d, _)| d).product();
    let split = |mut index: usize| {
        let (mut kept, mut kept_scale, mut traced, mut traced_scale) = (0, 1, 0, 1);
        for (&d, &k) in dims.iter().zip(keep).rev() {
            let digit = index % d;
            index /= d;
            if k {
                kept += digit * kept_scale;
                kept_scale *= d;
            } else {
                traced += digit * traced_scale;
                traced_scale *= d;
            }
        }
        (kept, traced)
    };
    let parts: Vec<(usize, usize)> = (0..total).map(split).collect();
    let mut out = vec![c(0.0, 0.0); kept_dim * kept_dim];
    for (i, &(ki, ti)) in parts.iter().enumerate() {
        for (j, &(kj, tj)) in parts.iter().enumerate() {
            if ti == tj {
                out[ki * kept_dim + kj] += rho.matrix.get(i, j);
            }
        }
    }
    let m = ComplexMatrix::from_fn(kept_dim, kept_dim, |i, j| out[i * kept_dim + j]);
    Ok(DensityMatrix { matrix: m })
}

/// Bipartite partial trace over `dims = (dA, dB)`.
pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: Keep) -> Result<DensityMatrix> {
    partial_trace_subsystems(rho, &[dims.0, dims.1], &[keep == Keep::A, keep == Keep::B])
}

fn ensure_same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states have dims {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}

/// Half the sum of absolute eigenvalues of `rho - sigma`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    ensure_same_dim(rho, sigma)?;
    let diff = &rho.matrix - &sigma.matrix;
    let values = diff.hermitian_eigenvalues()?;
    Ok((0.5 * values.iter().map(|v| v.abs()).sum::<f64>()).clamp(0.0, 1.0))
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`, computed as the
/// squared nuclear norm of `sqrt(rho) sqrt(sigma)`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    ensure_same_dim(rho, sigma)?;
    let product = &rho.matrix.psd_sqrt()? * &sigma.matrix.psd_sqrt()?;
    let s: f64 = product.singular_values().iter().sum();
    Ok((s * s).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityBounds {
    pub fidelity: f64,
    pub trace_distance: f64,
    /// `1 - sqrt(F)`
    pub lower: f64,
    /// `sqrt(1 - F)`
    pub upper: f64,
    pub holds: bool,
}

/// Checks `1 - sqrt(F) <= T <= sqrt(1 - F)`.
pub fn fidelity_bounds_check(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<FidelityBounds> {
    let f = fidelity(rho, sigma)?;
    let t = trace_distance(rho, sigma)?;
    let lower = 1.0 - f.sqrt();
    let upper = (1.0 - f).max(0.0).sqrt();
    Ok(FidelityBounds {
        fidelity: f,
        trace_distance: t,
        lower,
        upper,
        holds: lower <= t + 1e-9 && t <= upper + 1e-9,
    })
}
