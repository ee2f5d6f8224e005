//! Dense complex linear algebra helpers shared by every module.
//!
//! Operators on tensor products use Kronecker order: leg 0 is the most
//! significant index, so `kron(a, b)` acts on `K_0 ⊗ K_1`.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Singular values below `RANK_TOL * largest` are treated as zero.
pub const RANK_TOL: f64 = 1e-8;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Hilbert–Schmidt inner product, conjugate-linear in the first argument.
pub fn hs_inner(a: &CMat, b: &CMat) -> C64 {
    a.dotc(b)
}

pub fn vec_of(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn mat_of(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v.as_slice())
}

/// Matrix whose columns are the vectorizations of `ops`.
pub fn stack_columns(ops: &[CMat], rows: usize) -> CMat {
    let mut out = CMat::zeros(rows, ops.len());
    for (j, op) in ops.iter().enumerate() {
        out.column_mut(j).copy_from_slice(op.as_slice());
    }
    out
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * cr(0.5)
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eig_hermitian(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let h = to_faer(&hermitian_part(m));
    h.self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("Hermitian eigenvalues")
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (vec![], CMat::zeros(0, 0));
    }
    let h = to_faer(&hermitian_part(m));
    let eig = h.self_adjoint_eigen(faer::Side::Lower).expect("Hermitian eigendecomposition");
    let s = eig.S().column_vector();
    let values = (0..n).map(|i| s[i].re).collect();
    (values, from_faer(eig.U()))
}

/// Nonzero entries of each operator in a list, by column-major position.
pub fn nonzero_entries(ops: &[CMat]) -> Vec<Vec<(usize, C64)>> {
    let zero = C64::new(0.0, 0.0);
    ops.iter()
        .map(|m| m.iter().enumerate().filter(|(_, v)| **v != zero).map(|(k, v)| (k, *v)).collect())
        .collect()
}

/// `Σ_k x_k ops[k]` from [`nonzero_entries`].
pub fn combine_entries(entries: &[Vec<(usize, C64)>], x: &CVec, rows: usize, cols: usize) -> CMat {
    let mut out = CMat::zeros(rows, cols);
    let flat = out.as_mut_slice();
    for (ent, c) in entries.iter().zip(x.iter()) {
        if *c != C64::new(0.0, 0.0) {
            for &(k, e) in ent {
                flat[k] += e * *c;
            }
        }
    }
    out
}

/// `a * b`, through faer once the product is large enough to matter.
pub fn mul(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.nrows(), "mul: inner dimensions");
    if a.nrows() * a.ncols() * b.ncols() < 1 << 15 {
        return a * b;
    }
    let fa = faer::MatRef::from_column_major_slice(a.as_slice(), a.nrows(), a.ncols());
    let fb = faer::MatRef::from_column_major_slice(b.as_slice(), b.nrows(), b.ncols());
    let p = fa * fb;
    from_faer(p.as_ref())
}

/// `a * b * c`.
pub fn mul3(a: &CMat, b: &CMat, c: &CMat) -> CMat {
    mul(&mul(a, b), c)
}

fn to_faer(m: &CMat) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Singular values, nonincreasing.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return vec![];
    }
    to_faer(m).singular_values().expect("singular values")
}

/// Thin SVD result with the right singular vectors completed to a full basis.
struct FullSvd {
    u: CMat,
    sigma: Vec<f64>,
    /// Columns are right singular vectors, `ncols × ncols`.
    v: CMat,
}

/// Full SVD; `u` keeps the first `min(rows, cols)` left vectors.
fn full_svd(m: &CMat) -> FullSvd {
    let (rows, cols) = m.shape();
    // V stays square either way; only U is thinned
    let fm = to_faer(m);
    let svd = if rows >= cols { fm.thin_svd() } else { fm.svd() }.expect("svd");
    let s = svd.S().column_vector();
    let k = rows.min(cols);
    let sigma: Vec<f64> = (0..k).map(|i| s[i].re).collect();
    let u = from_faer(svd.U()).columns(0, k).into_owned();
    FullSvd {
        u,
        sigma,
        v: from_faer(svd.V()),
    }
}

/// Minimum-norm least-squares solution of `m x = rhs`, singular values
/// below `rel_tol · σ_max` dropped.
pub fn lstsq(m: &CMat, rhs: &CVec, rel_tol: f64) -> CVec {
    let svd = full_svd(m);
    let r = numerical_rank(&svd.sigma, rel_tol, 0.0);
    let mut x = CVec::zeros(m.ncols());
    for k in 0..r {
        let c = svd.u.column(k).dotc(rhs) / C64::new(svd.sigma[k], 0.0);
        x += svd.v.column(k) * c;
    }
    x
}

/// Singular values at or below this are zero regardless of scale.
pub const ABS_TOL: f64 = 1e-12;

fn numerical_rank(sigma: &[f64], rel_tol: f64, abs_tol: f64) -> usize {
    let top = sigma.iter().cloned().fold(0.0, f64::max);
    sigma
        .iter()
        .filter(|&&s| s > (rel_tol * top).max(abs_tol))
        .count()
}

/// Orthonormal basis (columns) of the kernel of `m`.
pub fn nullspace(m: &CMat, rel_tol: f64) -> CMat {
    nullspace_with(m, rel_tol, ABS_TOL)
}

/// [`nullspace`] with an explicit absolute floor for singular values.
pub fn nullspace_with(m: &CMat, rel_tol: f64, abs_tol: f64) -> CMat {
    let cols = m.ncols();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return identity(cols);
    }
    let svd = full_svd(m);
    let rank = numerical_rank(&svd.sigma, rel_tol, abs_tol);
    svd.v.columns(rank, cols - rank).into_owned()
}

pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    numerical_rank(&singular_values(m), rel_tol, ABS_TOL)
}

/// The span of a list of operators, orthonormalized in the Hilbert–Schmidt
/// inner product, with provenance back to the generators.
#[derive(Clone, Debug)]
pub struct Span {
    pub rows: usize,
    pub cols: usize,
    /// Orthonormal basis, each an operator of size `rows × cols`.
    pub basis: Vec<CMat>,
    /// `basis[k] = Σ_j gens[j] * coeffs[(j, k)]`.
    pub coeffs: CMat,
    /// Columns are generator combinations that vanish.
    pub null: CMat,
    /// Basis vectorized as columns.
    pub q: CMat,
}

impl Span {
    pub fn from_generators(gens: &[CMat], rel_tol: f64) -> Span {
        assert!(!gens.is_empty(), "span of an empty generator list");
        let (rows, cols) = gens[0].shape();
        let m = stack_columns(gens, rows * cols);
        let svd = full_svd(&m);
        let r = numerical_rank(&svd.sigma, rel_tol, ABS_TOL);
        let q = svd.u.columns(0, r).into_owned();
        let mut coeffs = svd.v.columns(0, r).into_owned();
        for k in 0..r {
            let s = svd.sigma[k];
            coeffs.column_mut(k).scale_mut(1.0 / s);
        }
        let null = svd.v.columns(r, gens.len() - r).into_owned();
        let basis = (0..r)
            .map(|k| mat_of(&q.column(k).into_owned(), rows, cols))
            .collect();
        Span {
            rows,
            cols,
            basis,
            coeffs,
            null,
            q,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the orthogonal projection of `op` onto the span.
    pub fn coords(&self, op: &CMat) -> CVec {
        self.q.ad_mul(&vec_of(op))
    }

    /// `max_k residual(ops[k])`, batched.
    pub fn max_residual(&self, ops: &[CMat]) -> f64 {
        if ops.is_empty() {
            return 0.0;
        }
        let v = stack_columns(ops, self.rows * self.cols);
        let r = &v - mul(&self.q, &mul(&self.q.adjoint(), &v));
        r.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn project(&self, op: &CMat) -> CMat {
        mat_of(&(&self.q * self.coords(op)), self.rows, self.cols)
    }

    /// Frobenius distance from `op` to the span.
    pub fn residual(&self, op: &CMat) -> f64 {
        (op - self.project(op)).norm()
    }

    /// Largest residual of either span's basis in the other.
    pub fn distance(&self, other: &Span) -> f64 {
        let a = self
            .basis
            .iter()
            .map(|b| other.residual(b))
            .fold(0.0, f64::max);
        let b = other
            .basis
            .iter()
            .map(|b| self.residual(b))
            .fold(0.0, f64::max);
        a.max(b)
    }
}

/// Embed an operator acting on the legs `legs` (in that order) of
/// `K_0 ⊗ … ⊗ K_{n-1}` into the full space, identity on the other legs.
pub fn embed_legs(op: &CMat, dims: &[usize], legs: &[usize]) -> CMat {
    let n = dims.len();
    let total: usize = dims.iter().product();
    let sub: usize = legs.iter().map(|&l| dims[l]).product();
    assert_eq!(op.nrows(), sub, "operator size does not match legs");
    let rest: Vec<usize> = (0..n).filter(|l| !legs.contains(l)).collect();
    let rest_total: usize = rest.iter().map(|&l| dims[l]).product();
    let mut strides = vec![1usize; n];
    for l in (0..n.saturating_sub(1)).rev() {
        strides[l] = strides[l + 1] * dims[l + 1];
    }
    let index_of = |digits: &[(usize, usize)]| -> usize {
        digits.iter().map(|&(l, d)| d * strides[l]).sum()
    };
    let decompose = |mut x: usize, ls: &[usize]| -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0); ls.len()];
        for (k, &l) in ls.iter().enumerate().rev() {
            out[k] = (l, x % dims[l]);
            x /= dims[l];
        }
        out
    };
    let sub_offsets: Vec<usize> = (0..sub).map(|a| index_of(&decompose(a, legs))).collect();
    let mut full = CMat::zeros(total, total);
    for r in 0..rest_total {
        let base = index_of(&decompose(r, &rest));
        for a in 0..sub {
            for b in 0..sub {
                let v = op[(a, b)];
                if v != C64::new(0.0, 0.0) {
                    full[(base + sub_offsets[a], base + sub_offsets[b])] = v;
                }
            }
        }
    }
    full
}

/// Reorder tensor legs: leg `k` of the result is leg `perm[k]` of the input.
pub fn permute_legs(op: &CMat, dims: &[usize], perm: &[usize]) -> CMat {
    let total: usize = dims.iter().product();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let map = leg_permutation(dims, perm);
    let mut out = CMat::zeros(total, total);
    for i in 0..total {
        for j in 0..total {
            out[(map[i], map[j])] = op[(i, j)];
        }
    }
    debug_assert_eq!(new_dims.iter().product::<usize>(), total);
    out
}

/// Permute a vector's tensor legs the same way as [`permute_legs`].
pub fn permute_vector(v: &CVec, dims: &[usize], perm: &[usize]) -> CVec {
    let map = leg_permutation(dims, perm);
    let mut out = CVec::zeros(v.len());
    for i in 0..v.len() {
        out[map[i]] = v[i];
    }
    out
}

fn leg_permutation(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let total: usize = dims.iter().product();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut new_strides = vec![1usize; n];
    for l in (0..n.saturating_sub(1)).rev() {
        new_strides[l] = new_strides[l + 1] * new_dims[l + 1];
    }
    (0..total)
        .map(|i| {
            let mut digits = vec![0usize; n];
            let mut x = i;
            for l in (0..n).rev() {
                digits[l] = x % dims[l];
                x /= dims[l];
            }
            (0..n).map(|k| digits[perm[k]] * new_strides[k]).sum()
        })
        .collect()
}

/// Block `(p, q)` of an operator on `C^d1 ⊗ K`.
pub fn block(op: &CMat, d1: usize, p: usize, q: usize) -> CMat {
    let d2 = op.nrows() / d1;
    op.view((p * d2, q * d2), (d2, d2)).into_owned()
}

/// `Σ_{pq} E_pq ⊗ f(Y_pq)` for `Y` on `C^d1 ⊗ K`: the map `id ⊗ f`.
pub fn ampliate<F>(op: &CMat, d1: usize, f: F) -> CMat
where
    F: Fn(&CMat) -> CMat,
{
    let mut out: Option<CMat> = None;
    for p in 0..d1 {
        for q in 0..d1 {
            let img = f(&block(op, d1, p, q));
            let d = img.nrows();
            let o = out.get_or_insert_with(|| CMat::zeros(d1 * d, d1 * d));
            o.view_mut((p * d, q * d), (d, d)).copy_from(&img);
        }
    }
    out.unwrap_or_else(|| CMat::zeros(0, 0))
}

/// `(⟨ξ| ⊗ I) Y (|η⟩ ⊗ I)`, the slice `(ω_{ξ,η} ⊗ id)(Y)`.
pub fn slice_first(op: &CMat, xi: &CVec, eta: &CVec) -> CMat {
    let d1 = xi.len();
    let d2 = op.nrows() / d1;
    let mut out = CMat::zeros(d2, d2);
    for p in 0..d1 {
        let a = xi[p].conj();
        if a == C64::new(0.0, 0.0) {
            continue;
        }
        for q in 0..d1 {
            let w = a * eta[q];
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            out += op.view((p * d2, q * d2), (d2, d2)) * w;
        }
    }
    out
}

/// `(I ⊗ ⟨ξ|) Y (I ⊗ |η⟩)`, the slice `(id ⊗ ω_{ξ,η})(Y)`.
pub fn slice_second(op: &CMat, xi: &CVec, eta: &CVec) -> CMat {
    let d2 = xi.len();
    let d1 = op.nrows() / d2;
    let mut out = CMat::zeros(d1, d1);
    for p in 0..d1 {
        for q in 0..d1 {
            let mut acc = C64::new(0.0, 0.0);
            for r in 0..d2 {
                for s in 0..d2 {
                    acc += xi[r].conj() * op[(p * d2 + r, q * d2 + s)] * eta[s];
                }
            }
            out[(p, q)] = acc;
        }
    }
    out
}

/// Flip `Σ` on `K ⊗ K`.
pub fn flip(d: usize) -> CMat {
    let mut s = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = cr(1.0);
        }
    }
    s
}

pub fn unit_vector(n: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[i] = cr(1.0);
    v
}

pub fn matrix_unit(n: usize, r: usize, s: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(r, s)] = cr(1.0);
    m
}

/// Block-diagonal direct sum.
pub fn direct_sum(blocks: &[CMat]) -> CMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        out.view_mut((off, off), (k, k)).copy_from(b);
        off += k;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(a: [[f64; 2]; 2]) -> CMat {
        CMat::from_fn(2, 2, |i, j| cr(a[i][j]))
    }

    #[test]
    fn embed_matches_kron_on_adjacent_legs() {
        let a = m2([[1.0, 2.0], [3.0, 4.0]]);
        let dims = [2, 3];
        let e = embed_legs(&a, &dims, &[0]);
        assert!((e - kron(&a, &identity(3))).norm() < 1e-14);
        let e = embed_legs(&a, &[3, 2], &[1]);
        assert!((e - kron(&identity(3), &a)).norm() < 1e-14);
    }

    #[test]
    fn embed_reversed_legs_is_flip_conjugate() {
        let a = m2([[1.0, 2.0], [3.0, 4.0]]);
        let b = m2([[0.0, 1.0], [5.0, -1.0]]);
        let ab = kron(&a, &b);
        let e = embed_legs(&ab, &[2, 2], &[1, 0]);
        assert!((e - kron(&b, &a)).norm() < 1e-14);
    }

    #[test]
    fn permute_legs_swaps_kron_factors() {
        let a = m2([[1.0, 2.0], [3.0, 4.0]]);
        let b = CMat::from_fn(3, 3, |i, j| cr((i * 3 + j) as f64));
        let p = permute_legs(&kron(&a, &b), &[2, 3], &[1, 0]);
        assert!((p - kron(&b, &a)).norm() < 1e-13);
    }

    #[test]
    fn slices_recover_factors() {
        let a = m2([[1.0, 2.0], [3.0, 4.0]]);
        let b = m2([[0.0, 1.0], [5.0, -1.0]]);
        let xi = CVec::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let w = (xi.adjoint() * &a * &xi)[(0, 0)];
        let s = slice_first(&kron(&a, &b), &xi, &xi);
        assert!((s - &b * w).norm() < 1e-13);
        let w2 = (xi.adjoint() * &b * &xi)[(0, 0)];
        let s2 = slice_second(&kron(&a, &b), &xi, &xi);
        assert!((s2 - &a * w2).norm() < 1e-13);
    }

    #[test]
    fn span_tracks_null_combinations() {
        let a = m2([[1.0, 0.0], [0.0, 0.0]]);
        let b = m2([[0.0, 0.0], [0.0, 1.0]]);
        let sum = &a + &b;
        let span = Span::from_generators(&[a.clone(), b.clone(), sum.clone()], RANK_TOL);
        assert_eq!(span.dim(), 2);
        assert_eq!(span.null.ncols(), 1);
        let n = span.null.column(0);
        let combo = &a * n[0] + &b * n[1] + &sum * n[2];
        assert!(combo.norm() < 1e-12);
        // provenance reconstructs the basis
        for (k, q) in span.basis.iter().enumerate() {
            let rebuilt = &a * span.coeffs[(0, k)] + &b * span.coeffs[(1, k)] + &sum * span.coeffs[(2, k)];
            assert!((rebuilt - q).norm() < 1e-12);
        }
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let m = CMat::from_row_slice(1, 3, &[cr(1.0), cr(1.0), cr(0.0)]);
        let n = nullspace(&m, RANK_TOL);
        assert_eq!(n.ncols(), 2);
        assert!((&m * &n).norm() < 1e-12);
    }

    fn seeded(rows: usize, cols: usize, seed: u64) -> CMat {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        CMat::from_fn(rows, cols, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn nullspace_of_tall_matrix() {
        let a = seeded(10, 2, 1);
        let m = CMat::from_fn(10, 3, |i, j| if j < 2 { a[(i, j)] } else { a[(i, 0)] - a[(i, 1)] });
        let n = nullspace(&m, RANK_TOL);
        assert_eq!(n.ncols(), 1);
        assert!((&m * &n).norm() < 1e-12);
    }

    #[test]
    fn batched_span_residual_is_the_largest_single_one() {
        let gens: Vec<CMat> = (0..3).map(|k| seeded(4, 4, 10 + k)).collect();
        let span = Span::from_generators(&gens, RANK_TOL);
        let probes: Vec<CMat> = (0..5).map(|k| seeded(4, 4, 20 + k)).collect();
        let single = probes.iter().map(|p| span.residual(p)).fold(0.0, f64::max);
        assert!((span.max_residual(&probes) - single).abs() < 1e-12);
        assert!(span.max_residual(&gens) < 1e-12);
    }

    #[test]
    fn sparse_combination_matches_dense_sum() {
        let mut ops: Vec<CMat> = (0..3).map(|k| seeded(5, 5, 30 + k)).collect();
        ops[1].fill(c(0.0, 0.0));
        ops[1][(2, 4)] = c(0.5, -1.0);
        let x = CVec::from_vec(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 0.0)]);
        let dense = &ops[0] * x[0] + &ops[1] * x[1] + &ops[2] * x[2];
        let sparse = combine_entries(&nonzero_entries(&ops), &x, 5, 5);
        assert!((dense - sparse).norm() < 1e-14);
    }

    proptest::proptest! {
        #[test]
        fn mul_agrees_with_the_plain_product(r in 1usize..48, k in 1usize..48, s in 1usize..48, seed in 0u64..1000) {
            let a = seeded(r, k, seed);
            let b = seeded(k, s, seed + 1);
            let plain = &a * &b;
            let scale = a.norm() * b.norm();
            proptest::prop_assert!((mul(&a, &b) - &plain).norm() <= 1e-13 * scale);
            let cm = seeded(s, 3, seed + 2);
            proptest::prop_assert!((mul3(&a, &b, &cm) - plain * cm).norm() <= 1e-12 * scale * (1.0 + (s as f64)));
        }
    }
}
