use super::{AlgebraShape, Element};
use crate::error::{Error, Result};
use crate::linalg::{min_eig_hermitian, CMat, CVec, C64};

/// A state `φ(a) = Σ_i Tr(ρ_i a_i)` given by its positive density.
#[derive(Clone, Debug)]
pub struct StateFunctional {
    density: Element,
}

impl StateFunctional {
    /// Validates positivity and normalization.
    pub fn new(density: Element, tol: f64) -> Result<Self> {
        let mut worst = f64::INFINITY;
        for b in density.blocks() {
            let herm = (b - b.adjoint()).norm();
            if herm > tol {
                return Err(Error::NotPositive(format!("density not Hermitian ({herm:e})")));
            }
            worst = worst.min(min_eig_hermitian(b));
        }
        if worst < -tol {
            return Err(Error::NotPositive(format!("density eigenvalue {worst:e}")));
        }
        let total: C64 = density.blocks().iter().map(|b| b.trace()).sum();
        if (total - C64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::NotPositive(format!("φ(1) = {total}")));
        }
        Ok(StateFunctional { density })
    }

    /// From the values `φ(e_α)` on the matrix units.
    pub fn from_values(shape: &AlgebraShape, values: &CVec, tol: f64) -> Result<Self> {
        if values.len() != shape.dim() {
            return Err(Error::ShapeMismatch("one value per matrix unit".into()));
        }
        let blocks = shape
            .blocks()
            .iter()
            .enumerate()
            .map(|(i, &n)| CMat::from_fn(n, n, |s, r| values[shape.index(i, r, s)]))
            .collect();
        Self::new(Element::from_blocks(shape, blocks)?, tol)
    }

    pub fn density(&self) -> &Element {
        &self.density
    }

    pub fn shape(&self) -> &AlgebraShape {
        self.density.shape()
    }

    pub fn eval(&self, a: &Element) -> Result<C64> {
        if a.shape() != self.shape() {
            return Err(Error::ShapeMismatch("state applied outside its algebra".into()));
        }
        Ok(self
            .density
            .blocks()
            .iter()
            .zip(a.blocks())
            .map(|(r, x)| (r * x).trace())
            .sum())
    }

    /// Values on the matrix units.
    pub fn as_functional(&self) -> CVec {
        let shape = self.shape();
        CVec::from_fn(shape.dim(), |alpha, _| {
            let (i, r, s) = shape.locate(alpha);
            self.density.block(i)[(s, r)]
        })
    }

    pub fn is_faithful(&self, tol: f64) -> bool {
        self.density
            .blocks()
            .iter()
            .all(|b| min_eig_hermitian(b) > tol)
    }

    /// Weights `w_i` with `ρ_i = w_i I`, when the state is tracial.
    pub fn trace_weights(&self, tol: f64) -> Option<Vec<f64>> {
        let mut w = Vec::new();
        for b in self.density.blocks() {
            let n = b.nrows();
            let x = b.trace().re / n as f64;
            if (b - CMat::identity(n, n) * C64::new(x, 0.0)).norm() > tol {
                return None;
            }
            w.push(x);
        }
        Some(w)
    }
}
