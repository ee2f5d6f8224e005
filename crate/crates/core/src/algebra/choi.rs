use super::{Element, LinearMap, Representation};
use crate::linalg::{min_eig_hermitian, op_norm, CMat, C64};

/// Blockwise Choi matrices `Σ_{rs} E_rs ⊗ L(e^{(i)}_{rs})` of a map out of a
/// multimatrix algebra. A map is completely positive iff all are positive.
#[derive(Clone, Debug)]
pub struct ChoiReport {
    pub blocks: Vec<CMat>,
    pub min_eigenvalue: f64,
    /// `‖L(1)‖`, which is the norm of `L` when `L` is CP.
    pub unit_image_norm: f64,
    /// `‖L(1) − 1‖` in Frobenius norm, when the codomain unit is known.
    pub unital_residual: f64,
}

impl ChoiReport {
    pub fn is_cp(&self, tol: f64) -> bool {
        self.min_eigenvalue >= -tol
    }

    pub fn is_contractive(&self, tol: f64) -> bool {
        self.unit_image_norm <= 1.0 + tol
    }
}

/// Choi certificate for a [`LinearMap`]; codomain blocks are split off too.
pub fn choi_of_map(map: &LinearMap) -> ChoiReport {
    let dom = map.domain();
    let cod = map.codomain();
    let mut blocks = Vec::new();
    for (i, &n) in dom.blocks().iter().enumerate() {
        for (j, &m) in cod.blocks().iter().enumerate() {
            let mut ch = CMat::zeros(n * m, n * m);
            for r in 0..n {
                for s in 0..n {
                    let img = map
                        .apply(&Element::basis(dom, dom.index(i, r, s)))
                        .expect("domain");
                    ch.view_mut((r * m, s * m), (m, m)).copy_from(img.block(j));
                }
            }
            blocks.push(ch);
        }
    }
    let one = map.apply(&Element::identity(dom)).expect("domain");
    finish(
        blocks,
        one.op_norm(),
        (&one - &Element::identity(cod)).fro_norm(),
    )
}

/// Choi certificate for an operator-level map defined on a represented
/// algebra. `codomain_unit` is used for the unitality residual.
pub fn choi_of_operator_map<F>(domain: &Representation, codomain_unit: &CMat, f: F) -> ChoiReport
where
    F: Fn(&CMat) -> CMat,
{
    let shape = domain.shape();
    let mut blocks = Vec::new();
    for (i, &n) in shape.blocks().iter().enumerate() {
        let imgs: Vec<CMat> = (0..n * n).map(|a| f(domain.image(shape.index(i, a / n, a % n)))).collect();
        // images that are jointly block diagonal give a block diagonal Choi matrix
        for comp in support_components(&imgs) {
            let m = comp.len();
            let mut ch = CMat::zeros(n * m, n * m);
            for r in 0..n {
                for s in 0..n {
                    let img = &imgs[r * n + s];
                    for (x, &p) in comp.iter().enumerate() {
                        for (y, &q) in comp.iter().enumerate() {
                            ch[(r * m + x, s * m + y)] = img[(p, q)];
                        }
                    }
                }
            }
            // and the Choi matrix may split further on its own pattern
            for sub in support_components(std::slice::from_ref(&ch)) {
                if sub.len() == ch.nrows() {
                    blocks.push(ch);
                    break;
                }
                blocks.push(ch.select_rows(&sub).select_columns(&sub));
            }
        }
    }
    let one = f(&domain.unit());
    let unital = if one.shape() == codomain_unit.shape() {
        (&one - codomain_unit).norm()
    } else {
        f64::INFINITY
    };
    finish(blocks, op_norm(&one), unital)
}

/// Index sets of the connected components of the joint nonzero pattern.
fn support_components(imgs: &[CMat]) -> Vec<Vec<usize>> {
    let m = imgs[0].nrows();
    let mut parent: Vec<usize> = (0..m).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for img in imgs {
        for q in 0..m {
            for p in 0..m {
                if img[(p, q)] != C64::new(0.0, 0.0) {
                    let (a, b) = (root(&mut parent, p), root(&mut parent, q));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; m];
    for p in 0..m {
        let r = root(&mut parent, p);
        if slot[r] == usize::MAX {
            slot[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[slot[r]].push(p);
    }
    comps
}

fn finish(blocks: Vec<CMat>, unit_image_norm: f64, unital_residual: f64) -> ChoiReport {
    let min_eigenvalue = blocks
        .iter()
        .map(min_eig_hermitian)
        .fold(f64::INFINITY, f64::min);
    ChoiReport {
        blocks,
        min_eigenvalue,
        unit_image_norm,
        unital_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraShape;
    use crate::linalg::{cr, flip, identity};

    #[test]
    fn transpose_choi_is_the_flip() {
        let s = AlgebraShape::full(2);
        let t = LinearMap::from_fn(&s, &s, |e| {
            Element::from_blocks(&s, vec![e.block(0).transpose()]).unwrap()
        })
        .unwrap();
        let ch = choi_of_map(&t);
        assert!((&ch.blocks[0] - flip(2)).norm() < 1e-15);
        assert!((ch.min_eigenvalue + 1.0).abs() < 1e-12);
        assert!(!ch.is_cp(1e-9));
    }

    #[test]
    fn conjugation_by_unitary_is_cp_unital() {
        let s = AlgebraShape::full(2);
        let rep = Representation::defining(&s);
        let u = CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
        let ch = choi_of_operator_map(&rep, &identity(2), |x| &u * x * u.adjoint());
        assert!(ch.is_cp(1e-12));
        assert!(ch.is_contractive(1e-12));
        assert!(ch.unital_residual < 1e-14);
    }

    /// Dense Choi blocks, one per domain block, without any splitting.
    fn dense_min_eig<F: Fn(&CMat) -> CMat>(domain: &Representation, f: F) -> f64 {
        let shape = domain.shape();
        let mut worst = f64::INFINITY;
        for (i, &n) in shape.blocks().iter().enumerate() {
            let m = f(domain.image(shape.index(i, 0, 0))).nrows();
            let mut ch = CMat::zeros(n * m, n * m);
            for r in 0..n {
                for s in 0..n {
                    ch.view_mut((r * m, s * m), (m, m))
                        .copy_from(&f(domain.image(shape.index(i, r, s))));
                }
            }
            worst = worst.min(min_eig_hermitian(&ch));
        }
        worst
    }

    #[test]
    fn split_choi_blocks_agree_with_dense_ones() {
        use crate::linalg::direct_sum;
        let shape = AlgebraShape::new(vec![1, 2]).unwrap();
        let rep = Representation::defining(&shape);
        let u = CMat::from_row_slice(3, 3, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0), cr(0.0), cr(1.0), cr(1.0), cr(0.0), cr(0.0)]);
        let maps: Vec<Box<dyn Fn(&CMat) -> CMat>> = vec![
            // block diagonal images: x ⊕ x^T ⊕ tr(x)
            Box::new(|x: &CMat| direct_sum(&[x.clone(), x.transpose(), CMat::from_element(1, 1, x.trace())])),
            // dense images
            Box::new(move |x: &CMat| &u * x * u.adjoint()),
            // a zero leg and a scaled copy
            Box::new(|x: &CMat| direct_sum(&[CMat::zeros(2, 2), x * cr(0.5)])),
        ];
        for f in &maps {
            let split = choi_of_operator_map(&rep, &identity(1), f);
            let dense = dense_min_eig(&rep, f);
            assert!((split.min_eigenvalue - dense).abs() < 1e-12, "{} vs {dense}", split.min_eigenvalue);
        }
        let t = choi_of_operator_map(&rep, &identity(1), &maps[0]);
        assert!((t.min_eigenvalue + 1.0).abs() < 1e-12);
    }

    #[test]
    fn components_of_a_pattern() {
        let mut a = CMat::zeros(4, 4);
        a[(0, 2)] = cr(1.0);
        let mut b = CMat::zeros(4, 4);
        b[(3, 3)] = cr(2.0);
        assert_eq!(support_components(&[a, b]), vec![vec![0, 2], vec![1], vec![3]]);
    }
}
