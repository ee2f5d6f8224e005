use super::{AlgebraShape, Representation};
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, hs_inner, CMat, Span, RANK_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_a16e;

/// A *-algebra of operators on `C^K`, given by an orthonormal operator basis.
#[derive(Clone, Debug)]
pub struct ConcreteAlgebra {
    span: Span,
}

/// A faithful multimatrix model of a [`ConcreteAlgebra`]: the images of the
/// matrix units are matrix units inside the concrete algebra.
#[derive(Clone, Debug)]
pub struct Wedderburn {
    pub rep: Representation,
    /// Largest residual of the matrix-unit relations.
    pub relation_residual: f64,
    /// Largest distance of an image from the concrete algebra.
    pub membership_residual: f64,
}

impl ConcreteAlgebra {
    pub fn from_generators(gens: &[CMat]) -> Self {
        ConcreteAlgebra {
            span: Span::from_generators(gens, RANK_TOL),
        }
    }

    pub fn from_span(span: Span) -> Self {
        ConcreteAlgebra { span }
    }

    pub fn span(&self) -> &Span {
        &self.span
    }

    pub fn basis(&self) -> &[CMat] {
        &self.span.basis
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn hilbert_dim(&self) -> usize {
        self.span.rows
    }

    pub fn residual(&self, op: &CMat) -> f64 {
        self.span.residual(op)
    }

    pub fn project(&self, op: &CMat) -> CMat {
        self.span.project(op)
    }

    /// Largest distance of a product or adjoint of basis elements from the span.
    pub fn closure_residual(&self) -> f64 {
        let b = self.basis();
        let mut worst = 0.0f64;
        for x in b {
            worst = worst.max(self.residual(&x.adjoint()));
            for y in b {
                worst = worst.max(self.residual(&(x * y)));
            }
        }
        worst
    }

    pub fn distance(&self, other: &ConcreteAlgebra) -> f64 {
        self.span.distance(&other.span)
    }

    /// Largest distance of `x·g` (basis `x`, algebra generator `g`) or of an
    /// adjoint from the span. When the span contains `gens` and the unit
    /// this bounds closure under all products.
    pub fn closure_residual_with(&self, gens: &[CMat]) -> f64 {
        let b = self.basis();
        let mut worst = self.span.max_residual(gens);
        for x in b {
            let mut ops: Vec<CMat> = gens.iter().map(|g| x * g).collect();
            ops.push(x.adjoint());
            worst = worst.max(self.span.max_residual(&ops));
        }
        worst
    }

    /// Orthonormal basis of the center, as the elements commuting with a
    /// few seeded random elements (which generate the algebra generically).
    pub fn center(&self) -> Vec<CMat> {
        let b = self.basis();
        let n = b.len();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xce);
        let probes: Vec<CMat> = (0..3)
            .map(|_| {
                let mut r = CMat::zeros(self.span.rows, self.span.cols);
                for x in b {
                    r += x * c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                }
                r
            })
            .collect();
        let block = self.span.rows * self.span.cols;
        let mut m = CMat::zeros(probes.len() * block, n);
        for (j, x) in b.iter().enumerate() {
            for (i, r) in probes.iter().enumerate() {
                let comm = x * r - r * x;
                for (l, v) in comm.iter().enumerate() {
                    m[(i * block + l, j)] = *v;
                }
            }
        }
        let null = crate::linalg::nullspace_with(&m, RANK_TOL, 1e-9);
        (0..null.ncols())
            .map(|k| {
                let mut z = CMat::zeros(self.span.rows, self.span.cols);
                for j in 0..n {
                    z += &b[j] * null[(j, k)];
                }
                z
            })
            .collect()
    }

    /// Wedderburn decomposition into full matrix blocks.
    pub fn decompose(&self) -> Result<Wedderburn> {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let k = self.hilbert_dim();
        let basis = self.basis();
        // unit of the algebra: projection onto the joint range
        let mut s = CMat::zeros(k, k);
        for b in basis {
            s += b * b.adjoint();
        }
        let (vals, vecs) = eigh(&s);
        let top = vals.iter().cloned().fold(0.0, f64::max);
        let range: Vec<usize> = (0..k).filter(|&i| vals[i] > 1e-9 * top).collect();
        let unit = projector(&vecs, &range);

        let center = self.center();
        let mut projections = None;
        for _ in 0..8 {
            let mut z = CMat::zeros(k, k);
            for zc in &center {
                let t: f64 = rng.random_range(-1.0..1.0);
                let u: f64 = rng.random_range(-1.0..1.0);
                z += (zc + zc.adjoint()) * c(0.5 * t, 0.0);
                z += (zc - zc.adjoint()) * c(0.0, -0.5 * u);
            }
            let shift = crate::linalg::op_norm(&z) + 1.0;
            z += &unit * c(shift, 0.0);
            let ps: Vec<CMat> = clusters(&z)
                .into_iter()
                .filter(|p| (&unit * p).norm() > 0.5)
                .collect();
            if ps.len() == center.len() {
                projections = Some(ps);
                break;
            }
        }
        let projections = projections.ok_or_else(|| {
            Error::Numerical("central projections could not be separated".into())
        })?;

        let mut blocks: Vec<(usize, Vec<Vec<CMat>>)> = Vec::new();
        for p in &projections {
            blocks.push(self.matrix_units(p, &mut rng)?);
        }
        blocks.sort_by_key(|(d, _)| *d);
        let shape = AlgebraShape::new(blocks.iter().map(|(d, _)| *d).collect())?;
        let mut images = Vec::with_capacity(shape.dim());
        for (_, units) in &blocks {
            for row in units {
                images.extend(row.iter().cloned());
            }
        }
        let rep = Representation::new(&shape, images)?;

        let mut relation_residual = 0.0f64;
        let membership_residual = self.span.max_residual(rep.images());
        for a in 0..shape.dim() {
            let (i, r, s) = shape.locate(a);
            let ea = rep.image(a);
            relation_residual =
                relation_residual.max((ea.adjoint() - rep.image(shape.index(i, s, r))).norm());
            for b in 0..shape.dim() {
                let (j, r2, s2) = shape.locate(b);
                let prod = crate::linalg::mul(ea, rep.image(b));
                let expected = if i == j && s == r2 {
                    (&prod - rep.image(shape.index(i, r, s2))).norm()
                } else {
                    prod.norm()
                };
                relation_residual = relation_residual.max(expected);
            }
        }
        relation_residual = relation_residual.max((rep.unit() - &unit).norm());
        Ok(Wedderburn {
            rep,
            relation_residual,
            membership_residual,
        })
    }

    fn matrix_units(&self, p: &CMat, rng: &mut ChaCha8Rng) -> Result<(usize, Vec<Vec<CMat>>)> {
        let compressed: Vec<CMat> = self.basis().iter().map(|b| p * b * p).collect();
        let corner = Span::from_generators(&compressed, RANK_TOL);
        let d = (corner.dim() as f64).sqrt().round() as usize;
        if d * d != corner.dim() || d == 0 {
            return Err(Error::Numerical(format!(
                "corner of dimension {} is not a full matrix algebra",
                corner.dim()
            )));
        }
        let (pv, pvecs) = eigh(p);
        let range: Vec<usize> = (0..pv.len()).filter(|&i| pv[i] > 0.5).collect();
        let u = pvecs.select_columns(&range);
        let r = range.len();
        if r % d != 0 {
            return Err(Error::Numerical("multiplicity is not an integer".into()));
        }
        for _ in 0..8 {
            let mut h = CMat::zeros(p.nrows(), p.ncols());
            let mut y = CMat::zeros(p.nrows(), p.ncols());
            for b in &corner.basis {
                let t: f64 = rng.random_range(-1.0..1.0);
                h += (b + b.adjoint()) * c(t, 0.0);
                let (x1, x2): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                y += b * c(x1, x2);
            }
            let hr = u.adjoint() * &h * &u;
            let (hv, hvecs) = eigh(&hr);
            let groups = group_eigenvalues(&hv);
            if groups.len() != d || groups.iter().any(|g| g.len() != r / d) {
                continue;
            }
            let qs: Vec<CMat> = groups
                .iter()
                .map(|g| {
                    let v = &u * hvecs.select_columns(g);
                    &v * v.adjoint()
                })
                .collect();
            let mut col = Vec::with_capacity(d);
            let mut ok = true;
            for qa in &qs {
                let e = qa * &y * &qs[0];
                let scale = hs_inner(&e, &e).re / qs[0].trace().re;
                if scale < 1e-8 {
                    ok = false;
                    break;
                }
                col.push(e / c(scale.sqrt(), 0.0));
            }
            if !ok {
                continue;
            }
            let units: Vec<Vec<CMat>> = (0..d)
                .map(|a| (0..d).map(|b| &col[a] * col[b].adjoint()).collect())
                .collect();
            return Ok((d, units));
        }
        Err(Error::Numerical("matrix units could not be separated".into()))
    }
}

fn projector(vecs: &CMat, cols: &[usize]) -> CMat {
    let v = vecs.select_columns(cols);
    &v * v.adjoint()
}

fn group_eigenvalues(vals: &[f64]) -> Vec<Vec<usize>> {
    let spread = vals.iter().cloned().fold(0.0f64, |a, v| a.max(v.abs()));
    let gap = 1e-6 * (1.0 + spread);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (v - vals[*g.last().unwrap()]).abs() <= gap => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

/// Spectral projections of a Hermitian operator.
fn clusters(z: &CMat) -> Vec<CMat> {
    let (vals, vecs) = eigh(z);
    group_eigenvalues(&vals)
        .iter()
        .map(|g| projector(&vecs, g))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Element;
    use crate::linalg::{identity, kron};

    #[test]
    fn recovers_block_structure_with_multiplicity() {
        // M_2 ⊗ I_2 ⊕ C on C^5
        let shape = AlgebraShape::new(vec![2, 1]).unwrap();
        let rep = Representation::defining(&shape);
        let gens: Vec<CMat> = rep
            .images()
            .iter()
            .map(|m| {
                let big = kron(&m.view((0, 0), (2, 2)).into_owned(), &identity(2));
                let mut out = CMat::zeros(5, 5);
                out.view_mut((0, 0), (4, 4)).copy_from(&big);
                out[(4, 4)] = m[(2, 2)];
                out
            })
            .collect();
        let alg = ConcreteAlgebra::from_generators(&gens);
        assert_eq!(alg.dim(), 5);
        assert!(alg.closure_residual() < 1e-12);
        assert_eq!(alg.center().len(), 2);
        let w = alg.decompose().unwrap();
        assert_eq!(w.rep.shape().blocks(), &[1, 2]);
        assert!(w.relation_residual < 1e-9);
        assert!(w.membership_residual < 1e-9);
        let one = w.rep.apply(&Element::identity(w.rep.shape()));
        assert!((one - identity(5)).norm() < 1e-9);
    }

    #[test]
    fn non_unital_corner_is_handled() {
        let mut p = CMat::zeros(3, 3);
        p[(0, 0)] = c(1.0, 0.0);
        let alg = ConcreteAlgebra::from_generators(&[p.clone()]);
        let w = alg.decompose().unwrap();
        assert_eq!(w.rep.shape().blocks(), &[1]);
        assert!((w.rep.image(0) - p).norm() < 1e-12);
    }
}
