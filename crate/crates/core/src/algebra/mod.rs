//! Multimatrix algebras `⊕ M_{n_i}(C)`, their elements, linear maps between
//! them, states, faithful representations and complete positivity.
//!
//! The canonical basis is the list of matrix units `e^{(i)}_{rs}`, blocks in
//! declaration order and row-major inside a block.

mod choi;
mod concrete;
mod map;
mod rep;
mod state;

pub use choi::{choi_of_map, choi_of_operator_map, ChoiReport};
pub use concrete::{ConcreteAlgebra, Wedderburn};
pub use map::{LinearMap, MapProperties, Property, Tri};
pub use rep::{represent, Representation};
pub use state::StateFunctional;

use crate::error::{Error, Result};
use crate::linalg::{cr, CMat, CVec, C64};
use std::ops::{Add, Mul, Sub};

/// Block sizes of a multimatrix algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraShape {
    blocks: Vec<usize>,
    offsets: Vec<usize>,
    dim: usize,
}

impl AlgebraShape {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidShape("no blocks".into()));
        }
        if let Some(pos) = blocks.iter().position(|&n| n == 0) {
            return Err(Error::InvalidShape(format!("block {pos} has size 0")));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for &n in &blocks {
            offsets.push(dim);
            dim += n * n;
        }
        Ok(AlgebraShape {
            blocks,
            offsets,
            dim,
        })
    }

    /// `M_n(C)`.
    pub fn full(n: usize) -> Self {
        Self::new(vec![n]).expect("n > 0")
    }

    /// `C^k`.
    pub fn commutative(k: usize) -> Self {
        Self::new(vec![1; k]).expect("k > 0")
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the defining representation, `Σ n_i`.
    pub fn hilbert_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    /// Linear index of `e^{(i)}_{rs}`.
    pub fn index(&self, i: usize, r: usize, s: usize) -> usize {
        self.offsets[i] + r * self.blocks[i] + s
    }

    /// Inverse of [`AlgebraShape::index`].
    pub fn locate(&self, alpha: usize) -> (usize, usize, usize) {
        let i = match self.offsets.binary_search(&alpha) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let n = self.blocks[i];
        let local = alpha - self.offsets[i];
        (i, local / n, local % n)
    }

    /// Blocks `n_i m_j` in lexicographic `(i, j)` order.
    pub fn tensor(&self, other: &AlgebraShape) -> AlgebraShape {
        let mut blocks = Vec::with_capacity(self.blocks.len() * other.blocks.len());
        for &n in &self.blocks {
            for &m in &other.blocks {
                blocks.push(n * m);
            }
        }
        AlgebraShape::new(blocks).expect("nonempty")
    }

    /// Index of `e_α ⊗ e_β` in the tensor shape.
    pub fn tensor_index(&self, other: &AlgebraShape, alpha: usize, beta: usize) -> usize {
        let (i, r, s) = self.locate(alpha);
        let (j, r2, s2) = other.locate(beta);
        let m = other.blocks[j];
        let n = self.blocks[i] * m;
        let off = self.offsets[i] * other.dim + self.blocks[i] * self.blocks[i] * other.offsets[j];
        off + (r * m + r2) * n + (s * m + s2)
    }

    /// Inverse of [`AlgebraShape::tensor_index`].
    pub fn tensor_split(&self, other: &AlgebraShape, t: usize) -> (usize, usize) {
        let i = match self.offsets.binary_search_by(|o| (o * other.dim).cmp(&t)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let ni2 = self.blocks[i] * self.blocks[i];
        let rem = t - self.offsets[i] * other.dim;
        let (j, _, _) = other.locate(rem / ni2);
        let m = other.blocks[j];
        let n = self.blocks[i] * m;
        let local = rem - ni2 * other.offsets[j];
        let (row, col) = (local / n, local % n);
        let alpha = self.index(i, row / m, col / m);
        let beta = other.index(j, row % m, col % m);
        (alpha, beta)
    }
}

/// An element of a multimatrix algebra, stored blockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    shape: AlgebraShape,
    blocks: Vec<CMat>,
}

impl Element {
    pub fn from_blocks(shape: &AlgebraShape, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks supplied for {} declared",
                blocks.len(),
                shape.num_blocks()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(shape.blocks()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "block {i} is {}x{}, expected {n}x{n}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(Element {
            shape: shape.clone(),
            blocks,
        })
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        let blocks = shape.blocks().iter().map(|&n| CMat::zeros(n, n)).collect();
        Element {
            shape: shape.clone(),
            blocks,
        }
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        let blocks = shape.blocks().iter().map(|&n| CMat::identity(n, n)).collect();
        Element {
            shape: shape.clone(),
            blocks,
        }
    }

    /// The matrix unit with linear index `alpha`.
    pub fn basis(shape: &AlgebraShape, alpha: usize) -> Self {
        let mut e = Self::zero(shape);
        let (i, r, s) = shape.locate(alpha);
        e.blocks[i][(r, s)] = cr(1.0);
        e
    }

    pub fn from_coords(shape: &AlgebraShape, coords: &CVec) -> Result<Self> {
        if coords.len() != shape.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates for dimension {}",
                coords.len(),
                shape.dim()
            )));
        }
        let mut e = Self::zero(shape);
        for (alpha, v) in coords.iter().enumerate() {
            let (i, r, s) = shape.locate(alpha);
            e.blocks[i][(r, s)] = *v;
        }
        Ok(e)
    }

    pub fn coords(&self) -> CVec {
        let mut v = CVec::zeros(self.shape.dim());
        for (i, b) in self.blocks.iter().enumerate() {
            let n = b.nrows();
            for r in 0..n {
                for s in 0..n {
                    v[self.shape.index(i, r, s)] = b[(r, s)];
                }
            }
        }
        v
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMat {
        &self.blocks[i]
    }

    pub fn star(&self) -> Self {
        Element {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        Element {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(|b| b * z).collect(),
        }
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape.blocks(),
                other.shape.blocks()
            )));
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Element) -> Result<Self> {
        self.check_same(other)?;
        Ok(Element {
            shape: self.shape.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn checked_add(&self, other: &Element) -> Result<Self> {
        self.check_same(other)?;
        Ok(Element {
            shape: self.shape.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `a ⊗ b` in the tensor shape.
    pub fn tensor(&self, other: &Element) -> Element {
        let shape = self.shape.tensor(&other.shape);
        let mut blocks = Vec::with_capacity(shape.num_blocks());
        for a in &self.blocks {
            for b in &other.blocks {
                blocks.push(a.kronecker(b));
            }
        }
        Element { shape, blocks }
    }

    /// Largest block operator norm.
    pub fn op_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(crate::linalg::op_norm)
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of the coordinate vector.
    pub fn fro_norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum::<f64>().sqrt()
    }

    /// Block-diagonal matrix in the defining representation.
    pub fn to_matrix(&self) -> CMat {
        crate::linalg::direct_sum(&self.blocks)
    }
}

impl Add for &Element {
    type Output = Element;
    /// Panics on shape mismatch; use [`Element::checked_add`] to recover.
    fn add(self, rhs: &Element) -> Element {
        self.checked_add(rhs).expect("shape mismatch in Element addition")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.checked_add(&rhs.scale(cr(-1.0)))
            .expect("shape mismatch in Element subtraction")
    }
}

impl Mul for &Element {
    type Output = Element;
    /// Panics on shape mismatch; use [`Element::checked_mul`] to recover.
    fn mul(self, rhs: &Element) -> Element {
        self.checked_mul(rhs).expect("shape mismatch in Element product")
    }
}
