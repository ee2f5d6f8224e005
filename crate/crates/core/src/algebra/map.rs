use super::{choi_of_map, AlgebraShape, Element};
use crate::error::{Error, Result};
use crate::linalg::{cr, CMat, CVec, C64};

/// Tri-state declaration of a map property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Tri {
    Asserted,
    Refuted,
    #[default]
    Unchecked,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    HermitianPreserving,
    Unital,
    StarHomomorphic,
    CompletelyPositive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MapProperties {
    pub hermitian_preserving: Tri,
    pub unital: Tri,
    pub star_homomorphic: Tri,
    pub completely_positive: Tri,
}

impl MapProperties {
    pub fn get(&self, p: Property) -> Tri {
        match p {
            Property::HermitianPreserving => self.hermitian_preserving,
            Property::Unital => self.unital,
            Property::StarHomomorphic => self.star_homomorphic,
            Property::CompletelyPositive => self.completely_positive,
        }
    }

    fn set(&mut self, p: Property, t: Tri) {
        match p {
            Property::HermitianPreserving => self.hermitian_preserving = t,
            Property::Unital => self.unital = t,
            Property::StarHomomorphic => self.star_homomorphic = t,
            Property::CompletelyPositive => self.completely_positive = t,
        }
    }
}

/// A linear map between multimatrix algebras, stored as the
/// `dim(codomain) × dim(domain)` coefficient matrix in the canonical bases.
#[derive(Clone, Debug)]
pub struct LinearMap {
    domain: AlgebraShape,
    codomain: AlgebraShape,
    matrix: CMat,
    properties: MapProperties,
}

impl LinearMap {
    pub fn new(domain: &AlgebraShape, codomain: &AlgebraShape, matrix: CMat) -> Result<Self> {
        if matrix.nrows() != codomain.dim() || matrix.ncols() != domain.dim() {
            return Err(Error::ShapeMismatch(format!(
                "coefficient matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                codomain.dim(),
                domain.dim()
            )));
        }
        Ok(LinearMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix,
            properties: MapProperties::default(),
        })
    }

    /// Build from the images of the matrix units.
    pub fn from_fn<F>(domain: &AlgebraShape, codomain: &AlgebraShape, f: F) -> Result<Self>
    where
        F: Fn(&Element) -> Element,
    {
        let mut m = CMat::zeros(codomain.dim(), domain.dim());
        for alpha in 0..domain.dim() {
            let img = f(&Element::basis(domain, alpha));
            if img.shape() != codomain {
                return Err(Error::ShapeMismatch("image outside the codomain".into()));
            }
            m.set_column(alpha, &img.coords());
        }
        Self::new(domain, codomain, m)
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        Self::new(shape, shape, CMat::identity(shape.dim(), shape.dim())).expect("square")
    }

    /// Multiplication `A ⊗ A → A`.
    pub fn multiplication(shape: &AlgebraShape) -> Self {
        let t = shape.tensor(shape);
        let mut m = CMat::zeros(shape.dim(), t.dim());
        for k in 0..t.dim() {
            let (a, b) = shape.tensor_split(shape, k);
            let (i, r, s) = shape.locate(a);
            let (j, r2, s2) = shape.locate(b);
            if i == j && s == r2 {
                m[(shape.index(i, r, s2), k)] = cr(1.0);
            }
        }
        Self::new(&t, shape, m).expect("sizes agree")
    }

    /// The map `C → A`, `1 ↦ 1`.
    pub fn unit(shape: &AlgebraShape) -> Self {
        let one = AlgebraShape::full(1);
        Self::new(
            &one,
            shape,
            CMat::from_column_slice(shape.dim(), 1, Element::identity(shape).coords().as_slice()),
        )
        .expect("sizes agree")
    }

    pub fn domain(&self) -> &AlgebraShape {
        &self.domain
    }

    pub fn codomain(&self) -> &AlgebraShape {
        &self.codomain
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn properties(&self) -> &MapProperties {
        &self.properties
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.shape() != &self.domain {
            return Err(Error::ShapeMismatch("argument outside the domain".into()));
        }
        Element::from_coords(&self.codomain, &(&self.matrix * x.coords()))
    }

    pub fn apply_coords(&self, v: &CVec) -> CVec {
        &self.matrix * v
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if inner.codomain != self.domain {
            return Err(Error::ShapeMismatch("composition of incompatible maps".into()));
        }
        Self::new(&inner.domain, &self.codomain, &self.matrix * &inner.matrix)
    }

    /// `self ⊗ other` between tensor shapes.
    pub fn tensor(&self, other: &LinearMap) -> LinearMap {
        let dom = self.domain.tensor(&other.domain);
        let cod = self.codomain.tensor(&other.codomain);
        let mut m = CMat::zeros(cod.dim(), dom.dim());
        for a in 0..self.domain.dim() {
            for b in 0..other.domain.dim() {
                let col = self.domain.tensor_index(&other.domain, a, b);
                for g in 0..self.codomain.dim() {
                    let x = self.matrix[(g, a)];
                    if x == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for d in 0..other.codomain.dim() {
                        let y = other.matrix[(d, b)];
                        if y == C64::new(0.0, 0.0) {
                            continue;
                        }
                        m[(self.codomain.tensor_index(&other.codomain, g, d), col)] += x * y;
                    }
                }
            }
        }
        Self::new(&dom, &cod, m).expect("sizes agree")
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::ShapeMismatch("difference of incompatible maps".into()));
        }
        Self::new(&self.domain, &self.codomain, &self.matrix - &other.matrix)
    }

    /// Frobenius norm of the coefficient matrix.
    pub fn fro_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Residual certifying a property; zero when it holds exactly.
    pub fn property_residual(&self, p: Property) -> f64 {
        match p {
            Property::HermitianPreserving => self.hermitian_residual(),
            Property::Unital => self.unital_residual(),
            Property::StarHomomorphic => self
                .homomorphism_residual()
                .max(self.hermitian_residual())
                .max(self.unital_residual()),
            Property::CompletelyPositive => (-choi_of_map(self).min_eigenvalue).max(0.0),
        }
    }

    fn hermitian_residual(&self) -> f64 {
        (0..self.domain.dim())
            .map(|a| {
                let e = Element::basis(&self.domain, a);
                let lhs = self.apply(&e.star()).expect("domain");
                let rhs = self.apply(&e).expect("domain").star();
                (&lhs - &rhs).fro_norm()
            })
            .fold(0.0, f64::max)
    }

    fn unital_residual(&self) -> f64 {
        let one = self.apply(&Element::identity(&self.domain)).expect("domain");
        (&one - &Element::identity(&self.codomain)).fro_norm()
    }

    /// `max ‖L(e_a e_b) − L(e_a)L(e_b)‖` over matrix units.
    pub fn homomorphism_residual(&self) -> f64 {
        let images: Vec<Element> = (0..self.domain.dim())
            .map(|a| self.apply(&Element::basis(&self.domain, a)).expect("domain"))
            .collect();
        let mut worst = 0.0f64;
        for a in 0..self.domain.dim() {
            let ea = Element::basis(&self.domain, a);
            for b in 0..self.domain.dim() {
                let eb = Element::basis(&self.domain, b);
                let lhs = self.apply(&(&ea * &eb)).expect("domain");
                let rhs = &images[a] * &images[b];
                worst = worst.max((&lhs - &rhs).fro_norm());
            }
        }
        worst
    }

    /// Declare a property; it is certified immediately and the declaration
    /// fails if the certificate does not hold.
    pub fn assert_property(&mut self, p: Property, tol: f64) -> Result<()> {
        let r = self.property_residual(p);
        if r > tol {
            self.properties.set(p, Tri::Refuted);
            return Err(Error::Refuted(format!(
                "{p:?} asserted but residual is {r:e}"
            )));
        }
        self.properties.set(p, Tri::Asserted);
        Ok(())
    }

    /// Certify a property without failing; records the outcome.
    pub fn certify(&mut self, p: Property, tol: f64) -> bool {
        let ok = self.property_residual(p) <= tol;
        self.properties
            .set(p, if ok { Tri::Asserted } else { Tri::Refuted });
        ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix_unit;

    fn transpose_m2() -> LinearMap {
        let s = AlgebraShape::full(2);
        LinearMap::from_fn(&s, &s, |e| {
            Element::from_blocks(&s, vec![e.block(0).transpose()]).unwrap()
        })
        .unwrap()
    }

    #[test]
    fn transpose_is_positive_but_not_cp() {
        let mut t = transpose_m2();
        assert!(t.certify(Property::HermitianPreserving, 1e-12));
        assert!(t.certify(Property::Unital, 1e-12));
        assert!(!t.certify(Property::CompletelyPositive, 1e-9));
        assert_eq!(t.properties().completely_positive, Tri::Refuted);
        let mut t2 = transpose_m2();
        assert!(t2.assert_property(Property::CompletelyPositive, 1e-9).is_err());
    }

    #[test]
    fn multiplication_map_multiplies() {
        let s = AlgebraShape::new(vec![1, 2]).unwrap();
        let m = LinearMap::multiplication(&s);
        for a in 0..s.dim() {
            for b in 0..s.dim() {
                let ea = Element::basis(&s, a);
                let eb = Element::basis(&s, b);
                let lhs = m.apply(&ea.tensor(&eb)).unwrap();
                assert_eq!(lhs, &ea * &eb);
            }
        }
    }

    #[test]
    fn tensor_of_maps_acts_factorwise() {
        let s = AlgebraShape::full(2);
        let t = transpose_m2();
        let id = LinearMap::identity(&AlgebraShape::commutative(2));
        let tt = t.tensor(&id);
        let a = Element::from_blocks(&s, vec![matrix_unit(2, 0, 1)]).unwrap();
        let b = Element::basis(&AlgebraShape::commutative(2), 1);
        let lhs = tt.apply(&a.tensor(&b)).unwrap();
        let rhs = t.apply(&a).unwrap().tensor(&b);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn shape_mismatch_on_apply() {
        let t = transpose_m2();
        assert!(t.apply(&Element::identity(&AlgebraShape::full(3))).is_err());
    }
}
