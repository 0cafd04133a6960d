use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Tolerance for Hermiticity, trace and positivity checks.
pub const MATRIX_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        ComplexMatrix(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from nested rows of real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let rows = re.len();
        if rows == 0 || im.len() != rows {
            return Err(Error::DimensionMismatch(format!(
                "real part has {rows} rows, imaginary part has {}",
                im.len()
            )));
        }
        let cols = re[0].len();
        if re.iter().chain(im).any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Self::from_fn(rows, cols, |i, j| c(re[i][j], im[i][j])))
    }

    /// `|psi><psi|`.
    pub fn outer(psi: &[Complex64]) -> Self {
        let n = psi.len();
        Self::from_fn(n, n, |i, j| psi[i] * psi[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn re_parts(&self) -> Vec<Vec<f64>> {
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.0[(i, j)].re).collect()).collect()
    }

    pub fn im_parts(&self) -> Vec<Vec<f64>> {
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.0[(i, j)].im).collect()).collect()
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, factor: f64) -> Self {
        ComplexMatrix(self.0.map(|z| z * factor))
    }

    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix(self.0.kronecker(&other.0))
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry-wise modulus of `self - self^dagger`.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    fn hermitian_part(&self) -> DMatrix<Complex64> {
        (&self.0 + self.0.adjoint()).map(|z| z * 0.5)
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.ensure_hermitian()?;
        let mut values: Vec<f64> = self.hermitian_part().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    /// Eigenvalues and eigenvectors (as columns) of a Hermitian matrix.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        self.ensure_hermitian()?;
        let eig = self.hermitian_part().symmetric_eigen();
        Ok((eig.eigenvalues.iter().copied().collect(), ComplexMatrix(eig.eigenvectors)))
    }

    /// Principal square root of a positive semidefinite matrix. Eigenvalues
    /// within rounding of zero are treated as zero, since the square root
    /// would otherwise blow them up to ~1e-8.
    pub fn psd_sqrt(&self) -> Result<ComplexMatrix> {
        let (values, vectors) = self.hermitian_eigen()?;
        let n = values.len();
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let cutoff = 16.0 * n as f64 * f64::EPSILON * scale;
        let roots = DMatrix::from_fn(n, n, |i, j| {
            if i == j && values[i] > cutoff {
                c(values[i].sqrt(), 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        Ok(ComplexMatrix(&vectors.0 * roots * vectors.0.adjoint()))
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.0.clone().singular_values().iter().copied().collect()
    }

    fn ensure_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "expected a square matrix, found {}x{}",
                self.rows(),
                self.cols()
            )));
        }
        let residual = self.hermitian_residual();
        if residual > MATRIX_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (residual {residual:.3e})"
            )));
        }
        Ok(())
    }
}

impl From<DMatrix<Complex64>> for ComplexMatrix {
    fn from(m: DMatrix<Complex64>) -> Self {
        ComplexMatrix(m)
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn eigenvalues_of_complex_hermitian() {
        // Pauli Y has eigenvalues -1, +1
        let y = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(0.0, 1.0),
            _ => c(0.0, 0.0),
        });
        let ev = y.hermitian_eigenvalues().unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(0.7, 0.0),
            (1, 1) => c(0.3, 0.0),
            (0, 1) => c(0.1, 0.2),
            _ => c(0.1, -0.2),
        });
        let r = m.psd_sqrt().unwrap();
        assert!((&r * &r).max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, 0.0));
        assert!(m.hermitian_eigenvalues().is_err());
        assert!(ComplexMatrix::zeros(2, 3).hermitian_eigenvalues().is_err());
    }

    #[test]
    fn from_parts_validates() {
        assert!(ComplexMatrix::from_parts(&[vec![1.0, 0.0]], &[vec![0.0]]).is_err());
        assert!(ComplexMatrix::from_parts(&[], &[]).is_err());
    }
}
