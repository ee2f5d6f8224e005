use super::{AlgebraShape, Element, LinearMap};
use crate::error::{Error, Result};
use crate::linalg::{combine_entries, cr, kron, nonzero_entries, CMat, CVec, C64};

/// A faithful *-representation given by the images of the matrix units.
///
/// The images are mutually Hilbert–Schmidt orthogonal, which makes
/// coordinates of represented operators a projection.
#[derive(Clone, Debug)]
pub struct Representation {
    shape: AlgebraShape,
    dim: usize,
    images: Vec<CMat>,
    norms2: Vec<f64>,
    /// Nonzero entries of each image, by column-major position.
    entries: Vec<Vec<(usize, C64)>>,
}

impl Representation {
    pub fn new(shape: &AlgebraShape, images: Vec<CMat>) -> Result<Self> {
        if images.len() != shape.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for {} matrix units",
                images.len(),
                shape.dim()
            )));
        }
        let dim = images[0].nrows();
        if images.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::ShapeMismatch("images of different sizes".into()));
        }
        let norms2: Vec<f64> = images.iter().map(|m| m.norm_squared()).collect();
        if norms2.iter().any(|&n| n < 1e-12) {
            return Err(Error::Numerical("representation is not faithful".into()));
        }
        let entries = nonzero_entries(&images);
        Ok(Representation {
            shape: shape.clone(),
            dim,
            images,
            norms2,
            entries,
        })
    }

    /// Block-diagonal representation on `C^{Σ n_i}`.
    pub fn defining(shape: &AlgebraShape) -> Self {
        let images = (0..shape.dim())
            .map(|a| Element::basis(shape, a).to_matrix())
            .collect();
        Self::new(shape, images).expect("matrix units")
    }

    pub fn tensor(&self, other: &Representation) -> Representation {
        let shape = self.shape.tensor(&other.shape);
        let images = (0..shape.dim())
            .map(|t| {
                let (a, b) = self.shape.tensor_split(&other.shape, t);
                kron(&self.images[a], &other.images[b])
            })
            .collect();
        Self::new(&shape, images).expect("tensor of faithful representations")
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[CMat] {
        &self.images
    }

    pub fn image(&self, alpha: usize) -> &CMat {
        &self.images[alpha]
    }

    pub fn apply_coords(&self, v: &CVec) -> CMat {
        combine_entries(&self.entries, v, self.dim, self.dim)
    }

    pub fn apply(&self, a: &Element) -> CMat {
        self.apply_coords(&a.coords())
    }

    /// Coordinates of the projection of `op` onto the represented algebra.
    pub fn coords(&self, op: &CMat) -> CVec {
        let flat = op.as_slice();
        CVec::from_fn(self.shape.dim(), |a, _| {
            let ip: C64 = self.entries[a].iter().map(|&(k, e)| e.conj() * flat[k]).sum();
            ip / cr(self.norms2[a])
        })
    }

    pub fn element(&self, op: &CMat) -> Element {
        Element::from_coords(&self.shape, &self.coords(op)).expect("dimension")
    }

    /// Frobenius distance of `op` from the represented algebra.
    pub fn residual(&self, op: &CMat) -> f64 {
        (op - self.apply_coords(&self.coords(op))).norm()
    }

    pub fn unit(&self) -> CMat {
        self.apply(&Element::identity(&self.shape))
    }

    /// Minimal central projection of block `i`.
    pub fn central_projection(&self, i: usize) -> CMat {
        let n = self.shape.blocks()[i];
        let mut p = CMat::zeros(self.dim, self.dim);
        for r in 0..n {
            p += &self.images[self.shape.index(i, r, r)];
        }
        p
    }

    /// The representation as a linear map into `M_dim(C)`.
    pub fn as_linear_map(&self) -> LinearMap {
        let cod = AlgebraShape::full(self.dim);
        let mut m = CMat::zeros(cod.dim(), self.shape.dim());
        for (a, img) in self.images.iter().enumerate() {
            for r in 0..self.dim {
                for s in 0..self.dim {
                    m[(cod.index(0, r, s), a)] = img[(r, s)];
                }
            }
        }
        LinearMap::new(&self.shape, &cod, m).expect("sizes agree")
    }
}

/// The defining representation as a linear map into operators on `C^{Σ n_i}`.
pub fn represent(shape: &AlgebraShape) -> LinearMap {
    Representation::defining(shape).as_linear_map()
}
