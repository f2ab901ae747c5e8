//! Minimal covariant dilations of instruments, their uniqueness, and
//! measurement models with outcome sampling.
//!
//! A covariant instrument `I` for a representation `U` of `G` on `ℂ^d`
//! is realized as
//!
//! `I_x(T) = tr^K[ (P(x) ⊗ I) W T W† ]`
//!
//! with an auxiliary space `K`, a representation `D` of `G` on `K`, a
//! covariant PVM `P` (`D_g P(x) D_g† = P(g·x)`) and an isometry
//! `W : ℂ^d → K ⊗ ℂ^d` intertwining `U` with `D ⊗ U`. The construction
//! is the Gram-form quotient of the raw space spanned by triples
//! `(outcome point, matrix unit, basis vector)`:
//!
//! index `(x, E_ij, e_k)`, form
//! `⟨(x,E_ij,e_k), (y,E_lm,e_n)⟩ = δ_xy δ_il tr[E_mj I_x(e_k ⊙ e_n)]`.
//!
//! The quotient carries commuting actions of the PVM, the translation
//! operators and the algebra `π(M) : (x, A, v) ↦ (x, MA, v)`;
//! factorizing `π` as `I_K ⊗ M` via an anchor vector yields `K`. All of
//! this works verbatim for projective `U`: the raw translation action
//! `(x, A, v) ↦ (g·x, A U_g†, U_g v)` cancels multiplier phases between
//! its two slots, so `D` always comes out as an ordinary representation
//! (it equals the lifted construction on the central extension
//! evaluated at phase 1).
//!
//! Minimality (the family `(P(x) ⊗ A) W v` spans `K ⊗ ℂ^d`) holds by
//! construction and makes the triple unique up to a unitary on `K`,
//! computed by [`dilation_isomorphism`].

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::groups::FiniteGroup;
use crate::instruments::{check_state, instrument_statistics, Instrument};
use crate::numkernel::{
    basis_vector, eigh, gram_quotient, identity, kron, max_abs, partial_trace_first, CMatrix,
    CVector, GramQuotient,
};
use crate::reps::Representation;
use crate::{Error, Result};

/// The quadruple `(K, D, P, W)` dilating a covariant instrument.
#[derive(Debug, Clone)]
pub struct DilationSystem {
    pub dim_k: usize,
    /// Representation of `G` on `K`; ordinary even for projective input.
    pub d_rep: Representation,
    /// PVM on `K`, one projection per outcome point.
    pub projections: Vec<CMatrix>,
    /// Isometry `ℂ^d → K ⊗ ℂ^d`, shape `(dim_k · d) × d`.
    pub w: CMatrix,
}

#[inline]
fn raw_index(x: usize, i: usize, j: usize, k: usize, d: usize) -> usize {
    ((x * d + i) * d + j) * d + k
}

/// Gram matrix of the raw form; depends only on the instrument.
fn build_gram(instrument: &Instrument) -> CMatrix {
    let d = instrument.dim();
    let points = instrument.num_outcomes();
    let n = points * d * d * d;
    let mut gram = CMatrix::zeros(n, n);
    for x in 0..points {
        let choi = instrument.choi(x);
        // row (x,i1,j1,k1), col (x,i2,j2,k2) with i1 == i2:
        // value J_x[(k2,j2),(k1,j1)]
        for i in 0..d {
            for j1 in 0..d {
                for k1 in 0..d {
                    let row = raw_index(x, i, j1, k1, d);
                    for j2 in 0..d {
                        for k2 in 0..d {
                            let col = raw_index(x, i, j2, k2, d);
                            gram[(row, col)] = choi[(k2 * d + j2, k1 * d + j1)];
                        }
                    }
                }
            }
        }
    }
    gram
}

/// Raw translation operator `(x, A, v) ↦ (g·x, A U_g†, U_g v)`.
fn build_raw_translation(
    g: usize,
    rep: &Representation,
    instrument: &Instrument,
    n: usize,
) -> CMatrix {
    let d = instrument.dim();
    let u = rep.matrix(g);
    let mut out = CMatrix::zeros(n, n);
    for x in 0..instrument.num_outcomes() {
        let gx = instrument.outcomes().act(g, x);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let col = raw_index(x, i, j, k, d);
                    // E_ij U_g† = Σ_b conj(U[b,j]) E_ib ; U_g e_k = Σ_l U[l,k] e_l
                    for b in 0..d {
                        let coeff_b = u[(b, j)].conj();
                        for l in 0..d {
                            let row = raw_index(gx, i, b, l, d);
                            out[(row, col)] += coeff_b * u[(l, k)];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Raw algebra action `π(E_st) : (x, E_ij, e_k) ↦ δ_{ti} (x, E_sj, e_k)`.
fn build_raw_pi_unit(s: usize, t: usize, points: usize, d: usize) -> CMatrix {
    let n = points * d * d * d;
    let mut out = CMatrix::zeros(n, n);
    for x in 0..points {
        for j in 0..d {
            for k in 0..d {
                out[(raw_index(x, s, j, k, d), raw_index(x, t, j, k, d))] = Complex64::ONE;
            }
        }
    }
    out
}

/// Raw embedding `Ŵ e_k = Σ_x Σ_i (x, E_ii, e_k)`.
fn build_raw_w(points: usize, d: usize) -> CMatrix {
    let n = points * d * d * d;
    let mut out = CMatrix::zeros(n, d);
    for k in 0..d {
        for x in 0..points {
            for i in 0..d {
                out[(raw_index(x, i, i, k, d), k)] = Complex64::ONE;
            }
        }
    }
    out
}

fn quotient_of_instrument(instrument: &Instrument) -> Result<GramQuotient> {
    let gram = build_gram(instrument);
    let (vals, _) = eigh(&gram);
    let lmax = vals.last().copied().unwrap_or(0.0).max(f64::EPSILON);
    // eigenvalues below 1e-10·λ_max are the kernel of the form
    gram_quotient(&gram, 1e-10 * lmax)
}

/// Builds the minimal covariant dilation of a covariant instrument.
///
/// Fails with [`Error::NotCovariant`] when the translation action does
/// not descend isometrically to the quotient, which is exactly the
/// failure mode of non-covariant input.
pub fn build_dilation(
    group: &FiniteGroup,
    rep: &Representation,
    instrument: &Instrument,
    tol: f64,
) -> Result<DilationSystem> {
    let d = instrument.dim();
    if rep.dim() != d || rep.len() != group.order() {
        return Err(Error::DimensionMismatch(
            "representation does not match the instrument".into(),
        ));
    }
    if instrument.outcomes().group_order() != group.order() {
        return Err(Error::DimensionMismatch(
            "outcome space is not a space for this group".into(),
        ));
    }
    let points = instrument.num_outcomes();
    let n = points * d * d * d;
    let gq = quotient_of_instrument(instrument)?;
    let q = gq.quotient_dim;
    if q == 0 {
        return Err(Error::DilationFailed("instrument form is zero".into()));
    }
    if q % d != 0 {
        return Err(Error::DilationFailed(format!(
            "quotient dimension {q} is not a multiple of d = {d}"
        )));
    }
    let f_plus = gq.pseudo_inverse();

    // translations must descend to unitaries; a violation pins down the
    // group element witnessing non-covariance
    let mut d_quot = Vec::with_capacity(group.order());
    for g in group.elements() {
        let raw = build_raw_translation(g, rep, instrument, n);
        let desc = &gq.factor * &raw * &f_plus;
        let unit_res = max_abs(&(&desc * desc.adjoint() - identity(q)));
        if unit_res > tol.max(1e-12) * 1e3 {
            return Err(Error::NotCovariant {
                residual: unit_res,
                tol,
                detail: format!("; translation by element {g} is not isometric on the quotient"),
            });
        }
        d_quot.push(desc);
    }

    // factor π as I_K ⊗ M through the anchor projection π(E_00)
    let pi_quot: Vec<Vec<CMatrix>> = (0..d)
        .map(|s| {
            (0..d)
                .map(|t| &gq.factor * build_raw_pi_unit(s, t, points, d) * &f_plus)
                .collect()
        })
        .collect();
    let anchor = &pi_quot[0][0];
    let (avals, avecs) = eigh(anchor);
    let kept: Vec<usize> = (0..q).filter(|&i| avals[i] > 0.5).collect();
    let r = kept.len();
    if r * d != q {
        return Err(Error::DilationFailed(format!(
            "anchor projection has rank {r}, expected {}",
            q / d
        )));
    }
    let kappa = CMatrix::from_fn(q, r, |i, j| avecs[(i, kept[j])]);

    // unitary identification of the quotient with K ⊗ ℂ^d
    let mut iota = CMatrix::zeros(r * d, q);
    for j in 0..d {
        let block = kappa.adjoint() * &pi_quot[0][j];
        for alpha in 0..r {
            for col in 0..q {
                iota[(alpha * d + j, col)] = block[(alpha, col)];
            }
        }
    }
    let iota_res = max_abs(&(&iota * iota.adjoint() - identity(r * d)));
    if iota_res > tol.max(1e-12) * 1e3 {
        return Err(Error::DilationFailed(format!(
            "factorization map is not unitary: residual {iota_res:.3e}"
        )));
    }

    let w = &iota * (&gq.factor * build_raw_w(points, d));

    let mut projections = Vec::with_capacity(points);
    for x in 0..points {
        let mut raw = CMatrix::zeros(n, n);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let idx = raw_index(x, i, j, k, d);
                    raw[(idx, idx)] = Complex64::ONE;
                }
            }
        }
        let desc = &gq.factor * raw * &f_plus;
        projections.push(kappa.adjoint() * desc * &kappa);
    }
    let d_mats: Vec<CMatrix> = d_quot
        .iter()
        .map(|dq| kappa.adjoint() * dq * &kappa)
        .collect();
    let d_rep = Representation::new(d_mats, None)?;

    Ok(DilationSystem {
        dim_k: r,
        d_rep,
        projections,
        w,
    })
}

/// Residuals of every defining equation of a dilation system.
#[derive(Debug, Clone)]
pub struct DilationReport {
    pub dim_k: usize,
    /// Projections: Hermiticity, idempotence, mutual orthogonality and
    /// completeness, as one max residual.
    pub pvm_residual: f64,
    /// `max_{g,x} ‖D_g P(x) D_g† − P(g·x)‖_max`.
    pub pvm_covariance_residual: f64,
    /// `max_g ‖W U_g − (D_g ⊗ U_g) W‖_max`.
    pub intertwining_residual: f64,
    /// `‖W†W − I‖_max`.
    pub isometry_residual: f64,
    /// `max ‖I_x(E_kn) − tr^K[(P(x)⊗I) W E_kn W†]‖_max`.
    pub reconstruction_residual: f64,
    /// Rank of the spanning family `(P(x) ⊗ E_ij) W e_k`.
    pub minimality_rank: usize,
    /// Dimension of the system space, for the minimality comparison.
    pub dim_h: usize,
}

impl DilationReport {
    pub fn valid(&self, tol: f64) -> bool {
        self.pvm_residual <= tol
            && self.pvm_covariance_residual <= tol
            && self.intertwining_residual <= tol
            && self.isometry_residual <= tol
            && self.reconstruction_residual <= tol
            && self.minimal()
    }

    pub fn minimal(&self) -> bool {
        self.minimality_rank == self.dim_k * self.dim_h
    }
}

/// Spanning-family column `(P(x) ⊗ E_ij) W e_k`.
fn spanning_vector(
    system: &DilationSystem,
    d: usize,
    x: usize,
    i: usize,
    j: usize,
    k: usize,
) -> CVector {
    let r = system.dim_k;
    let w_col = system.w.column(k);
    // apply I ⊗ E_ij: keeps only H-component j, moves it to slot i
    let mut v = CVector::zeros(r * d);
    for alpha in 0..r {
        v[alpha * d + i] = w_col[alpha * d + j];
    }
    // apply P(x) ⊗ I
    let p = &system.projections[x];
    let mut out = CVector::zeros(r * d);
    for a in 0..r {
        for b in 0..r {
            let coeff = p[(a, b)];
            if coeff != Complex64::ZERO {
                for h in 0..d {
                    out[a * d + h] += coeff * v[b * d + h];
                }
            }
        }
    }
    out
}

/// Verifies all four defining properties plus minimality.
pub fn verify_dilation(
    group: &FiniteGroup,
    rep: &Representation,
    instrument: &Instrument,
    system: &DilationSystem,
    _tol: f64,
) -> Result<DilationReport> {
    let d = instrument.dim();
    let r = system.dim_k;
    if system.w.nrows() != r * d || system.w.ncols() != d {
        return Err(Error::DimensionMismatch("W has the wrong shape".into()));
    }
    if system.projections.len() != instrument.num_outcomes() {
        return Err(Error::DimensionMismatch(
            "PVM does not match the outcome space".into(),
        ));
    }

    let mut pvm = 0.0f64;
    let mut sum = CMatrix::zeros(r, r);
    for (x, p) in system.projections.iter().enumerate() {
        pvm = pvm.max(max_abs(&(p - p.adjoint())));
        pvm = pvm.max(max_abs(&(p * p - p)));
        sum += p;
        for (y, p2) in system.projections.iter().enumerate() {
            if x != y {
                pvm = pvm.max(max_abs(&(p * p2)));
            }
        }
    }
    pvm = pvm.max(max_abs(&(sum - identity(r))));

    let mut pvm_cov = 0.0f64;
    for g in group.elements() {
        let dg = system.d_rep.matrix(g);
        for (x, p) in system.projections.iter().enumerate() {
            let moved = dg * p * dg.adjoint();
            let target = &system.projections[instrument.outcomes().act(g, x)];
            pvm_cov = pvm_cov.max(max_abs(&(moved - target)));
        }
    }

    let mut intertwine = 0.0f64;
    for g in group.elements() {
        let lhs = &system.w * rep.matrix(g);
        let rhs = kron(system.d_rep.matrix(g), rep.matrix(g)) * &system.w;
        intertwine = intertwine.max(max_abs(&(lhs - rhs)));
    }

    let isometry = max_abs(&(system.w.adjoint() * &system.w - identity(d)));

    let mut reconstruction = 0.0f64;
    for x in 0..instrument.num_outcomes() {
        let p_ext = kron(&system.projections[x], &identity(d));
        for k in 0..d {
            for n_idx in 0..d {
                let wk = system.w.column(k).into_owned();
                let wn = system.w.column(n_idx).into_owned();
                let outer = &wk * wn.adjoint();
                let traced = partial_trace_first(&(&p_ext * outer), r, d)?;
                let direct = instrument.apply(x, &crate::reps::e_ij(d, k, n_idx));
                reconstruction = reconstruction.max(max_abs(&(traced - direct)));
            }
        }
    }

    // rank of the spanning family via the (r·d)-square accumulation of
    // outer products
    let mut acc = CMatrix::zeros(r * d, r * d);
    for x in 0..instrument.num_outcomes() {
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let v = spanning_vector(system, d, x, i, j, k);
                    acc += &v * v.adjoint();
                }
            }
        }
    }
    let rank = crate::numkernel::gram_rank(&acc, 1e-10);

    Ok(DilationReport {
        dim_k: r,
        pvm_residual: pvm,
        pvm_covariance_residual: pvm_cov,
        intertwining_residual: intertwine,
        isometry_residual: isometry,
        reconstruction_residual: reconstruction,
        minimality_rank: rank,
        dim_h: d,
    })
}

/// The connecting unitary between two minimal dilations of the same
/// instrument, with its intertwining residuals.
#[derive(Debug, Clone)]
pub struct DilationIsomorphism {
    /// Unitary `V : K₁ → K₂`.
    pub v: CMatrix,
    /// `‖V̂ − V ⊗ I‖_max` for the descended comparison map.
    pub factorization_residual: f64,
    /// `max_g ‖V D₁(g) − D₂(g) V‖_max`.
    pub d_residual: f64,
    /// `max_x ‖V P₁(x) − P₂(x) V‖_max`.
    pub p_residual: f64,
    /// `‖(V ⊗ I) W₁ − W₂‖_max`.
    pub w_residual: f64,
}

/// Builds the unitary connecting two minimal dilations of one
/// instrument.
///
/// The raw-space comparison map `(x, A, v) ↦ (P(x) ⊗ A) W v` of each
/// system descends through the instrument's Gram quotient to a unitary
/// onto `K_i ⊗ ℂ^d`; composing one with the adjoint of the other factors
/// as `V ⊗ I`.
pub fn dilation_isomorphism(
    group: &FiniteGroup,
    rep: &Representation,
    instrument: &Instrument,
    first: &DilationSystem,
    second: &DilationSystem,
    _tol: f64,
) -> Result<DilationIsomorphism> {
    let d = instrument.dim();
    if first.dim_k != second.dim_k {
        return Err(Error::DimensionMismatch(format!(
            "dilations have dim_k {} and {}; both must be minimal",
            first.dim_k, second.dim_k
        )));
    }
    let r = first.dim_k;
    let points = instrument.num_outcomes();
    let n = points * d * d * d;
    let gq = quotient_of_instrument(instrument)?;
    if gq.quotient_dim != r * d {
        return Err(Error::DimensionMismatch(format!(
            "quotient dimension {} does not match dim_k·d = {}; inputs are not minimal",
            gq.quotient_dim,
            r * d
        )));
    }
    let f_plus = gq.pseudo_inverse();

    let comparison = |sys: &DilationSystem| -> CMatrix {
        let mut psi = CMatrix::zeros(r * d, n);
        for x in 0..points {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let v = spanning_vector(sys, d, x, i, j, k);
                        psi.column_mut(raw_index(x, i, j, k, d)).copy_from(&v);
                    }
                }
            }
        }
        psi * &f_plus
    };
    let v1 = comparison(first);
    let v2 = comparison(second);
    let v_hat = &v2 * v1.adjoint();

    // extract V from V̂ = V ⊗ I
    let mut v = CMatrix::zeros(r, r);
    for alpha in 0..r {
        for beta in 0..r {
            let mut acc = Complex64::ZERO;
            for j in 0..d {
                acc += v_hat[(alpha * d + j, beta * d + j)];
            }
            v[(alpha, beta)] = acc / Complex64::new(d as f64, 0.0);
        }
    }
    let factorization_residual = max_abs(&(&v_hat - kron(&v, &identity(d))));

    let mut d_residual = 0.0f64;
    for g in group.elements() {
        let lhs = &v * first.d_rep.matrix(g);
        let rhs = second.d_rep.matrix(g) * &v;
        d_residual = d_residual.max(max_abs(&(lhs - rhs)));
    }
    let mut p_residual = 0.0f64;
    for x in 0..points {
        let lhs = &v * &first.projections[x];
        let rhs = &second.projections[x] * &v;
        p_residual = p_residual.max(max_abs(&(lhs - rhs)));
    }
    let w_residual = max_abs(&(kron(&v, &identity(d)) * &first.w - &second.w));
    let _ = rep;

    Ok(DilationIsomorphism {
        v,
        factorization_residual,
        d_residual,
        p_residual,
        w_residual,
    })
}

/// A measurement model `<H_A, Z, ξ, V>` with a covariant pointer.
///
/// The apparatus is `H_A = K ⊗ ℂ^d ⊗ K`, the pointer PVM is
/// `Z(x) = I ⊗ I ⊗ P(x)`, the pointer transforms under
/// `R_g = I ⊗ I ⊗ D_g`, and the coupling acts on `H_A ⊗ ℂ^d` by
/// `ξ ⊗ ψ ↦ ξ'' ⊗ Wψ` extended to a unitary.
#[derive(Debug, Clone)]
pub struct MeasurementModel {
    pub dim_apparatus: usize,
    pub dim_system: usize,
    /// Pointer PVM on the apparatus, one projection per outcome.
    pub pointer: Vec<CMatrix>,
    /// Initial apparatus state vector `ξ`.
    pub initial: CVector,
    /// Unitary coupling on `H_A ⊗ ℂ^d`.
    pub coupling: CMatrix,
    /// Representation `R = I ⊗ I ⊗ D` on the apparatus.
    pub pointer_rep: Representation,
}

/// Hard cap on the coupling size, matching the kernel's dense-matrix
/// scale.
const MAX_COUPLING_DIM: usize = 4096;

/// Builds a measurement model realizing the instrument from its
/// dilation.
pub fn measurement_model(
    group: &FiniteGroup,
    rep: &Representation,
    instrument: &Instrument,
    system: &DilationSystem,
    tol: f64,
) -> Result<MeasurementModel> {
    let report = verify_dilation(group, rep, instrument, system, tol)?;
    if !report.valid(tol.max(1e-12) * 1e3) {
        return Err(Error::DilationFailed(format!(
            "dilation fails verification: {report:?}"
        )));
    }
    let d = instrument.dim();
    let r = system.dim_k;
    let dim_apparatus = r * d * r;
    let n = dim_apparatus * d;
    if n > MAX_COUPLING_DIM {
        return Err(Error::InvalidArgument(format!(
            "coupling dimension {n} exceeds the supported {MAX_COUPLING_DIM}"
        )));
    }

    // The coupling acts as the identity outside the first K⊗H block of
    // the last two factors: complete the isometry W to a unitary there.
    let rd = r * d;
    let mut block = CMatrix::zeros(rd, rd);
    block.view_mut((0, 0), (rd, d)).copy_from(&system.w);
    let mut cols = d;
    for cand in 0..rd {
        if cols == rd {
            break;
        }
        let mut v = basis_vector(rd, cand);
        // two orthogonalization passes keep the completion stable
        for _ in 0..2 {
            for c in 0..cols {
                let col = block.column(c);
                let overlap: Complex64 = col.iter().zip(v.iter()).map(|(b, x)| b.conj() * x).sum();
                v -= CVector::from_column_slice(col.as_slice()) * overlap;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            block.column_mut(cols).copy_from(&v.unscale(norm));
            cols += 1;
        }
    }
    if cols != rd {
        return Err(Error::DilationFailed(
            "failed to complete the coupling isometry".into(),
        ));
    }
    let mut coupling = CMatrix::identity(n, n);
    coupling.view_mut((0, 0), (rd, rd)).copy_from(&block);

    let pointer: Vec<CMatrix> = system
        .projections
        .iter()
        .map(|p| kron(&identity(r * d), p))
        .collect();
    let pointer_rep = Representation::new(
        group
            .elements()
            .map(|g| kron(&identity(r * d), system.d_rep.matrix(g)))
            .collect(),
        None,
    )?;

    Ok(MeasurementModel {
        dim_apparatus,
        dim_system: d,
        pointer,
        initial: basis_vector(dim_apparatus, 0),
        coupling,
        pointer_rep,
    })
}

impl MeasurementModel {
    /// The vector `V(ξ ⊗ e_k)`; with `ξ` the first basis vector this is
    /// column `k` of the coupling.
    fn coupled_basis_vector(&self, k: usize) -> CVector {
        self.coupling.column(k).into_owned()
    }

    /// The reconstructed outcome map
    /// `T ↦ tr^{H_A}[ V (T_ξ ⊗ T) V† (Z(x) ⊗ I) ]`, evaluated through
    /// the rank-`d` support of `T_ξ ⊗ T`.
    pub fn outcome_map(&self, x: usize, t: &CMatrix) -> CMatrix {
        let d = self.dim_system;
        let z = &self.pointer[x];
        let y: Vec<CMatrix> = (0..d)
            .map(|k| {
                let col = self.coupled_basis_vector(k);
                // reshape to (dim_apparatus × d)
                CMatrix::from_fn(self.dim_apparatus, d, |a, h| col[a * d + h])
            })
            .collect();
        let zy: Vec<CMatrix> = y.iter().map(|m| z * m).collect();
        let mut out = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let coeff = t[(i, j)];
                if coeff == Complex64::ZERO {
                    continue;
                }
                // tr^{H_A}[ y_i ((Z⊗I) y_j)† ][s,t] = Σ_A Y_i[A,s] conj((Z Y_j)[A,t])
                for s in 0..d {
                    for tt in 0..d {
                        let mut acc = Complex64::ZERO;
                        for a in 0..self.dim_apparatus {
                            acc += y[i][(a, s)] * zy[j][(a, tt)].conj();
                        }
                        out[(s, tt)] += coeff * acc;
                    }
                }
            }
        }
        out
    }

    /// Pointer outcome distribution on an input state.
    pub fn pointer_statistics(&self, rho: &CMatrix, tol: f64) -> Result<Vec<f64>> {
        check_state(rho, self.dim_system, tol)?;
        Ok((0..self.pointer.len())
            .map(|x| self.outcome_map(x, rho).trace().re)
            .collect())
    }
}

/// Outcome counts from repeated independent measurements, kept next to
/// the exact distribution they were drawn from.
#[derive(Debug, Clone)]
pub struct SampleRecord {
    pub seed: u64,
    pub shots: u64,
    pub counts: Vec<u64>,
    pub probabilities: Vec<f64>,
}

/// Draws i.i.d. outcomes from the instrument's distribution on `rho`.
pub fn simulate(
    instrument: &Instrument,
    rho: &CMatrix,
    shots: u64,
    seed: u64,
    tol: f64,
) -> Result<SampleRecord> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let stats = instrument_statistics(instrument, rho, tol)?;
    let clamped: Vec<f64> = stats.probabilities.iter().map(|&p| p.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; clamped.len()];
    for _ in 0..shots {
        let u: f64 = rand::Rng::random::<f64>(&mut rng) * total;
        let mut acc = 0.0;
        let mut chosen = clamped.len() - 1;
        for (x, &p) in clamped.iter().enumerate() {
            acc += p;
            if u < acc {
                chosen = x;
                break;
            }
        }
        counts[chosen] += 1;
    }
    Ok(SampleRecord {
        seed,
        shots,
        counts,
        probabilities: stats.probabilities,
    })
}
