//! Dense complex linear algebra shared by every other module.
//!
//! Conventions used throughout the crate:
//!
//! - scalars are `Complex64` (double precision pairs);
//! - in every tensor product the FIRST factor is the slow (outer) index,
//!   so `kron(A, B)[(i*p + k, j*q + l)] = A[(i,j)] * B[(k,l)]`;
//! - partial traces are taken over the first factor unless stated
//!   otherwise;
//! - vectorization is row-major: `vec(M)[i*cols + j] = M[(i,j)]`;
//! - the single numerical primitive is the eigendecomposition of a
//!   Hermitian matrix ([`eigh`]); PSD checks, Gram quotients, trace
//!   norms, ranks and Kraus extractions all reduce to it.
//!
//! All tolerances default to [`DEFAULT_TOL`] and are caller-overridable.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default tolerance for residual checks and kernel detection.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Shorthand for a complex scalar.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The `n`-dimensional identity.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Standard basis vector `e_k` in dimension `n`.
pub fn basis_vector(n: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[k] = Complex64::ONE;
    v
}

/// Matrix unit `E_{ij}` of size `n`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = Complex64::ONE;
    m
}

/// Rank-one operator `u ⊙ v`, acting as `w ↦ ⟨w,v⟩ u`.
///
/// As a matrix this is the outer product `u v†`.
pub fn rank_one(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

/// Kronecker product with the first factor as the slow index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entry magnitude, `‖M‖_max`.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hilbert–Schmidt inner product `⟨A,B⟩ = tr(B† A)`, linear in `A`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum()
}

pub fn hs_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Row-major vectorization.
pub fn vectorize(m: &CMatrix) -> CVector {
    let (rows, cols) = m.shape();
    CVector::from_fn(rows * cols, |idx, _| m[(idx / cols, idx % cols)])
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    assert_eq!(v.len(), rows * cols, "vector length mismatch");
    CMatrix::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// Returns an error if any entry is NaN or infinite.
pub fn check_finite(m: &CMatrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Partial trace over the first tensor factor.
///
/// `m` must be square of size `dim_k * dim_h`. The result `R` is the
/// `dim_h`-square matrix determined by `tr(A R) = tr((I ⊗ A) m)` for all
/// `A`.
pub fn partial_trace_first(m: &CMatrix, dim_k: usize, dim_h: usize) -> Result<CMatrix> {
    let n = dim_k * dim_h;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "partial_trace_first expects a {n}x{n} matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let mut out = CMatrix::zeros(dim_h, dim_h);
    for s in 0..dim_h {
        for t in 0..dim_h {
            let mut acc = Complex64::ZERO;
            for a in 0..dim_k {
                acc += m[(a * dim_h + s, a * dim_h + t)];
            }
            out[(s, t)] = acc;
        }
    }
    Ok(out)
}

/// Partial trace over the second tensor factor.
pub fn partial_trace_second(m: &CMatrix, dim_k: usize, dim_h: usize) -> Result<CMatrix> {
    let n = dim_k * dim_h;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "partial_trace_second expects a {n}x{n} matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let mut out = CMatrix::zeros(dim_k, dim_k);
    for a in 0..dim_k {
        for b in 0..dim_k {
            let mut acc = Complex64::ZERO;
            for s in 0..dim_h {
                acc += m[(a * dim_h + s, b * dim_h + s)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns `(eigenvalues, eigenvectors)` with real eigenvalues sorted
/// ascending and the corresponding orthonormal eigenvectors as columns.
/// The input is hermitized as `(M + M†)/2` before decomposing, so callers
/// may pass matrices that are Hermitian only up to roundoff.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    assert_eq!(m.nrows(), m.ncols(), "eigh expects a square matrix");
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let herm = (m + m.adjoint()).scale(0.5);
    let decomp = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| decomp.eigenvalues[i].total_cmp(&decomp.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| decomp.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| decomp.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Trace norm `‖M‖_T = Σ singular values`.
///
/// Uses the Hermitian dilation `[[0, M], [M†, 0]]`, whose spectrum is
/// `±σ_i`; summing the positive part keeps the error linear in machine
/// precision, unlike the square root of `eig(M†M)`.
pub fn trace_norm(m: &CMatrix) -> f64 {
    let (rows, cols) = m.shape();
    let n = rows + cols;
    let mut dil = CMatrix::zeros(n, n);
    dil.view_mut((0, rows), (rows, cols)).copy_from(m);
    let madj = m.adjoint();
    dil.view_mut((rows, 0), (cols, rows)).copy_from(&madj);
    let (vals, _) = eigh(&dil);
    vals.iter().map(|&v| v.max(0.0)).sum()
}

/// Hermiticity, positivity and trace-norm diagnostics of a square matrix.
#[derive(Debug, Clone)]
pub struct HermDiagnostics {
    pub is_hermitian: bool,
    /// `‖M − M†‖_max`.
    pub hermiticity_residual: f64,
    /// Smallest eigenvalue of the Hermitian part `(M + M†)/2`.
    pub min_eigenvalue: f64,
    pub trace_norm: f64,
}

/// Diagnostic report for a square matrix; never fails.
pub fn herm_diagnostics(m: &CMatrix, tol: f64) -> HermDiagnostics {
    assert_eq!(m.nrows(), m.ncols(), "herm_diagnostics expects square input");
    let residual = max_abs(&(m - m.adjoint()));
    let (vals, _) = eigh(m);
    HermDiagnostics {
        is_hermitian: residual <= tol,
        hermiticity_residual: residual,
        min_eigenvalue: vals.first().copied().unwrap_or(0.0),
        trace_norm: trace_norm(m),
    }
}

/// Full-rank factorization of a positive semidefinite Gram matrix.
///
/// `factor` has shape `quotient_dim × original_dim` and satisfies
/// `factor† · factor = Gram` up to roundoff; applying `factor` to a raw
/// coordinate vector realizes the quotient by the kernel of the form.
#[derive(Debug, Clone)]
pub struct GramQuotient {
    pub original_dim: usize,
    pub quotient_dim: usize,
    pub factor: CMatrix,
    /// Kept eigenvalues, ascending.
    pub kept_eigenvalues: Vec<f64>,
    /// Kept eigenvectors as columns (`original_dim × quotient_dim`).
    pub kept_eigenvectors: CMatrix,
}

impl GramQuotient {
    /// Maps a raw vector into quotient coordinates.
    pub fn project(&self, raw: &CVector) -> CVector {
        &self.factor * raw
    }

    /// Pseudo-inverse of the factor, mapping quotient coordinates to a
    /// raw representative: `factor · pseudo_inverse = I`.
    pub fn pseudo_inverse(&self) -> CMatrix {
        let mut out = self.kept_eigenvectors.clone();
        for (j, &lam) in self.kept_eigenvalues.iter().enumerate() {
            let s = Complex64::new(1.0 / lam.sqrt(), 0.0);
            out.column_mut(j).scale_mut(1.0);
            for i in 0..out.nrows() {
                out[(i, j)] *= s;
            }
        }
        out
    }

    /// Pushes a raw-space operator through the quotient.
    ///
    /// Valid only for operators that preserve the kernel of the form,
    /// which is the case for all operators descended in this crate.
    pub fn descend_operator(&self, raw_op: &CMatrix) -> CMatrix {
        &self.factor * raw_op * self.pseudo_inverse()
    }
}

/// Quotient of a Gram form by its kernel.
///
/// Eigenpairs with eigenvalue > `tol` are kept; eigenvalues below `-tol`
/// are rejected as a PSD violation.
pub fn gram_quotient(gram: &CMatrix, tol: f64) -> Result<GramQuotient> {
    if gram.nrows() != gram.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "gram_quotient expects a square matrix, got {}x{}",
            gram.nrows(),
            gram.ncols()
        )));
    }
    check_finite(gram)?;
    let n = gram.nrows();
    let herm_res = max_abs(&(gram - gram.adjoint()));
    if herm_res > tol.max(1e-12 * max_abs(gram)) {
        return Err(Error::InvalidArgument(format!(
            "gram matrix is not Hermitian: residual {herm_res:.3e}"
        )));
    }
    let (vals, vecs) = eigh(gram);
    if let Some(&lam) = vals.first() {
        if lam < -tol {
            return Err(Error::NotPositiveSemidefinite {
                eigenvalue: lam,
                tol,
            });
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&i| vals[i] > tol).collect();
    let q = kept.len();
    let kept_eigenvalues: Vec<f64> = kept.iter().map(|&i| vals[i]).collect();
    let kept_eigenvectors = CMatrix::from_fn(n, q, |i, j| vecs[(i, kept[j])]);
    // factor = diag(sqrt(lambda)) * V_kept†
    let mut factor = kept_eigenvectors.adjoint();
    for (row, &lam) in kept_eigenvalues.iter().enumerate() {
        let s = Complex64::new(lam.sqrt(), 0.0);
        for col in 0..n {
            factor[(row, col)] *= s;
        }
    }
    Ok(GramQuotient {
        original_dim: n,
        quotient_dim: q,
        factor,
        kept_eigenvalues,
        kept_eigenvectors,
    })
}

/// Numerical rank of a Gram matrix relative to its largest eigenvalue.
pub fn gram_rank(gram: &CMatrix, rel_tol: f64) -> usize {
    let (vals, _) = eigh(gram);
    let lmax = vals.last().copied().unwrap_or(0.0).max(0.0);
    if lmax == 0.0 {
        return 0;
    }
    vals.iter().filter(|&&v| v > rel_tol * lmax).count()
}

/// Inverse square root of a Hermitian positive definite matrix.
pub fn inv_sqrt_psd(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    let (vals, vecs) = eigh(m);
    let lmax = vals.last().copied().unwrap_or(0.0);
    if vals.iter().any(|&v| v <= tol * lmax.max(1.0)) {
        return Err(Error::NotPositiveSemidefinite {
            eigenvalue: vals.first().copied().unwrap_or(0.0),
            tol,
        });
    }
    let n = m.nrows();
    let diag = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(1.0 / vals[i].sqrt(), 0.0)
        } else {
            Complex64::ZERO
        }
    });
    Ok(&vecs * diag * vecs.adjoint())
}

// ---------------------------------------------------------------------------
// Seeded random sampling helpers. Every consumer passes its own RNG, so all
// randomized paths in the crate stay reproducible from an explicit seed.
// ---------------------------------------------------------------------------

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_gaussian<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

/// Haar-ish random unit vector.
pub fn random_unit_vector<R: Rng>(n: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        });
        let norm = v.norm();
        if norm > 1e-6 {
            return v.unscale(norm);
        }
    }
}

/// Random unitary as the polar part of a Gaussian matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    loop {
        let m = random_gaussian(n, n, rng);
        let gram = m.adjoint() * &m;
        if let Ok(isq) = inv_sqrt_psd(&gram, 1e-10) {
            return m * isq;
        }
    }
}

/// Random density matrix `MM†/tr(MM†)`.
pub fn random_density<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let m = random_gaussian(n, n, rng);
    let rho = &m * m.adjoint();
    let tr = rho.trace();
    rho.unscale(tr.re)
}

// ---------------------------------------------------------------------------
// Matrix wire format: nested arrays of [re, im] pairs, row-major.
// ---------------------------------------------------------------------------

/// Serializes a matrix as nested arrays of `[re, im]` pairs, row-major.
pub fn matrix_to_json(m: &CMatrix) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = (0..m.nrows())
        .map(|i| {
            let row: Vec<serde_json::Value> = (0..m.ncols())
                .map(|j| serde_json::json!([m[(i, j)].re, m[(i, j)].im]))
                .collect();
            serde_json::Value::Array(row)
        })
        .collect();
    serde_json::Value::Array(rows)
}

/// Parses the row-major `[re, im]` nested-array format.
pub fn matrix_from_json(v: &serde_json::Value) -> Result<CMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Config("matrix must be an array of rows".into()))?;
    if rows.is_empty() {
        return Err(Error::Config("matrix must have at least one row".into()));
    }
    let ncols = rows[0]
        .as_array()
        .ok_or_else(|| Error::Config("matrix row must be an array".into()))?
        .len();
    let nrows = rows.len();
    let mut out = CMatrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Config(format!("row {i} must be an array")))?;
        if row.len() != ncols {
            return Err(Error::Config(format!(
                "row {i} has {} entries, expected {ncols}",
                row.len()
            )));
        }
        for (j, entry) in row.iter().enumerate() {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Config(format!("entry ({i},{j}) must be [re, im]")))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::Config(format!("entry ({i},{j}) re must be a number")))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::Config(format!("entry ({i},{j}) im must be a number")))?;
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::NonFiniteEntry { row: i, col: j });
            }
            out[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn diag(entries: &[f64]) -> CMatrix {
        let n = entries.len();
        CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(entries[i], 0.0)
            } else {
                Complex64::ZERO
            }
        })
    }

    #[test]
    fn kron_identity_cases() {
        let i2 = identity(2);
        assert_eq!(kron(&i2, &i2), identity(4));
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0), c(0.5, 0.5)]);
        let one = identity(1);
        assert_eq!(kron(&a, &one), a);
        assert_eq!(kron(&one, &a), a);
    }

    #[test]
    fn kron_diagonal_expansion() {
        let got = kron(&diag(&[1.0, 2.0]), &diag(&[3.0, 4.0]));
        assert_eq!(got, diag(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let a = random_gaussian(3, 3, &mut rng);
        let b = random_gaussian(2, 2, &mut rng);
        let traced = partial_trace_first(&kron(&a, &b), 3, 2).unwrap();
        let expected = b.scale(1.0) * a.trace();
        assert!(max_abs(&(traced - expected)) < 1e-12);
    }

    #[test]
    fn partial_trace_of_identity() {
        let traced = partial_trace_first(&identity(6), 3, 2).unwrap();
        assert!(max_abs(&(traced - identity(2).scale(3.0))) < 1e-14);
    }

    #[test]
    fn partial_trace_of_rank_one() {
        // tr^K of (e1⊗e2)(e1⊗e2)† is e2 e2† for dimK = dimH = 2.
        let e1 = basis_vector(2, 0);
        let e2 = basis_vector(2, 1);
        let v = kron(&CMatrix::from_column_slice(2, 1, e1.as_slice()), &CMatrix::from_column_slice(2, 1, e2.as_slice()));
        let v = CVector::from_column_slice(v.as_slice());
        let traced = partial_trace_first(&rank_one(&v, &v), 2, 2).unwrap();
        assert!(max_abs(&(traced - rank_one(&e2, &e2))) < 1e-14);
    }

    #[test]
    fn partial_trace_rejects_bad_shape() {
        let err = partial_trace_first(&identity(5), 2, 2);
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn partial_trace_defining_condition() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = random_gaussian(6, 6, &mut rng);
            let a = random_gaussian(2, 2, &mut rng);
            let lhs = (a.clone() * partial_trace_first(&m, 3, 2).unwrap()).trace();
            let rhs = (kron(&identity(3), &a) * &m).trace();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn herm_diagnostics_examples() {
        let d = herm_diagnostics(&identity(2), 1e-9);
        assert!(d.is_hermitian);
        assert!((d.min_eigenvalue - 1.0).abs() < 1e-12);
        assert!((d.trace_norm - 2.0).abs() < 1e-12);

        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let v = random_unit_vector(3, &mut rng);
        let proj = rank_one(&v, &v);
        let d = herm_diagnostics(&proj, 1e-9);
        assert!(d.is_hermitian);
        assert!(d.min_eigenvalue.abs() < 1e-12);
        assert!((d.trace_norm - 1.0).abs() < 1e-12);

        let d = herm_diagnostics(&diag(&[1.0, -2.0]), 1e-9);
        assert!(d.is_hermitian);
        assert!((d.min_eigenvalue + 2.0).abs() < 1e-12);
        assert!((d.trace_norm - 3.0).abs() < 1e-12);
    }

    #[test]
    fn gram_quotient_identity_and_rank_one() {
        let gq = gram_quotient(&identity(4), 1e-9).unwrap();
        assert_eq!(gq.quotient_dim, 4);
        let prod = &gq.factor * gq.factor.adjoint();
        assert!(max_abs(&(prod - identity(4))) < 1e-10);

        let ones = CMatrix::from_element(2, 2, Complex64::ONE);
        let gq = gram_quotient(&ones, 1e-9).unwrap();
        assert_eq!(gq.quotient_dim, 1);

        let gq = gram_quotient(&CMatrix::zeros(3, 3), 1e-9).unwrap();
        assert_eq!(gq.quotient_dim, 0);
    }

    #[test]
    fn gram_quotient_rejects_negative() {
        let err = gram_quotient(&diag(&[1.0, -0.5]), 1e-9);
        match err {
            Err(Error::NotPositiveSemidefinite { eigenvalue, .. }) => {
                assert!((eigenvalue + 0.5).abs() < 1e-12)
            }
            other => panic!("expected PSD rejection, got {other:?}"),
        }
    }

    #[test]
    fn gram_quotient_reconstructs_random_psd() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for _ in 0..10 {
            let m = random_gaussian(6, 6, &mut rng);
            let gram = &m * m.adjoint();
            let tol = 1e-9;
            let gq = gram_quotient(&gram, tol).unwrap();
            let recon = gq.factor.adjoint() * &gq.factor;
            let err = max_abs(&(recon - &gram));
            assert!(err <= 10.0 * tol * max_abs(&gram).max(1.0), "err = {err:.3e}");
        }
    }

    #[test]
    fn trace_norm_is_a_norm() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..10 {
            let a = random_gaussian(4, 4, &mut rng);
            let b = random_gaussian(4, 4, &mut rng);
            let tri = trace_norm(&(&a + &b));
            assert!(tri <= trace_norm(&a) + trace_norm(&b) + 1e-10);
            let s = 2.75;
            assert!((trace_norm(&a.scale(s)) - s * trace_norm(&a)).abs() < 1e-10);
        }
    }

    #[test]
    fn eigh_reconstructs() {
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        let m = random_gaussian(5, 5, &mut rng);
        let h = &m + m.adjoint();
        let (vals, vecs) = eigh(&h);
        let lambda = CMatrix::from_fn(5, 5, |i, j| {
            if i == j {
                c(vals[i], 0.0)
            } else {
                Complex64::ZERO
            }
        });
        let recon = &vecs * lambda * vecs.adjoint();
        assert!(max_abs(&(recon - h)) < 1e-10);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn matrix_json_round_trip() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let m = random_gaussian(3, 4, &mut rng);
        let v = matrix_to_json(&m);
        let back = matrix_from_json(&v).unwrap();
        assert_eq!(m, back, "wire format must be bit-exact");
    }

    proptest! {
        #[test]
        fn kron_associative_on_integer_matrices(
            a in proptest::collection::vec(-4i8..5, 4),
            b in proptest::collection::vec(-4i8..5, 4),
            cc in proptest::collection::vec(-4i8..5, 4),
        ) {
            let to_mat = |v: &[i8]| CMatrix::from_fn(2, 2, |i, j| c(v[2 * i + j] as f64, 0.0));
            let (a, b, cc) = (to_mat(&a), to_mat(&b), to_mat(&cc));
            // Integer entries keep every float product exact, so the two
            // association orders must agree bitwise.
            prop_assert_eq!(kron(&kron(&a, &b), &cc), kron(&a, &kron(&b, &cc)));
        }

        #[test]
        fn kron_maps_products_of_basis_vectors(i in 0usize..2, k in 0usize..3, seed in 0u64..1000) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let a = random_gaussian(2, 2, &mut rng);
            let b = random_gaussian(3, 3, &mut rng);
            let u = basis_vector(2, i);
            let v = basis_vector(3, k);
            let uv = CVector::from_fn(6, |idx, _| u[idx / 3] * v[idx % 3]);
            let lhs = kron(&a, &b) * &uv;
            let au = &a * &u;
            let bv = &b * &v;
            let rhs = CVector::from_fn(6, |idx, _| au[idx / 3] * bv[idx % 3]);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
