//! The instrument data model and its validation.
//!
//! An instrument on a finite outcome space `Ω` assigns one completely
//! positive map `I_x` to each point, with the total map trace
//! preserving; set functions are recovered by summation, so σ-additivity
//! is definitional here. Each `I_x` is stored as its Choi matrix
//!
//! `J_x = Σ_{ij} E_ij ⊗ I_x(E_ij)`,
//!
//! with the FIRST tensor factor the index pair `(i,j)`. Complete
//! positivity of `I_x` is positive semidefiniteness of `J_x`; trace
//! preservation is `Σ_x tr_out(J_x) = I`, with `tr_out` the partial
//! trace onto the input factor.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::groups::{CosetSpace, FiniteGroup};
use crate::numkernel::{
    self, check_finite, eigh, identity, kron, matrix_unit, max_abs, partial_trace_second,
    random_gaussian, trace_norm, CMatrix,
};
use crate::reps::Representation;
use crate::{Error, Result};

/// A quantum instrument over a finite coset space, one Choi matrix per
/// outcome point.
#[derive(Debug, Clone)]
pub struct Instrument {
    dim: usize,
    outcomes: CosetSpace,
    chois: Vec<CMatrix>,
}

impl Instrument {
    pub fn new(dim: usize, outcomes: CosetSpace, chois: Vec<CMatrix>) -> Result<Self> {
        if chois.len() != outcomes.num_points() {
            return Err(Error::InvalidInstrument(format!(
                "{} Choi matrices for {} outcome points",
                chois.len(),
                outcomes.num_points()
            )));
        }
        let d2 = dim * dim;
        for (x, j) in chois.iter().enumerate() {
            if j.nrows() != d2 || j.ncols() != d2 {
                return Err(Error::InvalidInstrument(format!(
                    "Choi matrix {x} has shape {}x{}, expected {d2}x{d2}",
                    j.nrows(),
                    j.ncols()
                )));
            }
            check_finite(j)?;
        }
        Ok(Self {
            dim,
            outcomes,
            chois,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> &CosetSpace {
        &self.outcomes
    }

    pub fn num_outcomes(&self) -> usize {
        self.chois.len()
    }

    pub fn choi(&self, x: usize) -> &CMatrix {
        &self.chois[x]
    }

    pub fn chois(&self) -> &[CMatrix] {
        &self.chois
    }

    /// Applies the outcome map `I_x` to `T`.
    pub fn apply(&self, x: usize, t: &CMatrix) -> CMatrix {
        apply_choi(&self.chois[x], t)
    }

    /// `(I T)(X) = Σ_{x∈X} I_x(T)` for an outcome subset.
    pub fn apply_to_set(&self, t: &CMatrix, subset: &[usize]) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for &x in subset {
            acc += self.apply(x, t);
        }
        acc
    }

    /// The total channel `(I ·)(Ω)` as a Choi matrix.
    pub fn total_choi(&self) -> CMatrix {
        let d2 = self.dim * self.dim;
        self.chois
            .iter()
            .fold(CMatrix::zeros(d2, d2), |acc, j| acc + j)
    }
}

/// Encodes a linear map given by its action on the matrix-unit basis.
///
/// A spot check on a fixed linear combination guards against callers
/// passing a non-linear action.
pub fn choi_of_map<F: Fn(&CMatrix) -> CMatrix>(dim: usize, action: F) -> Result<CMatrix> {
    let d2 = dim * dim;
    let mut j = CMatrix::zeros(d2, d2);
    let mut images = Vec::with_capacity(d2);
    for i in 0..dim {
        for jj in 0..dim {
            let img = action(&matrix_unit(dim, i, jj));
            if img.nrows() != dim || img.ncols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "map image has shape {}x{}, expected {dim}x{dim}",
                    img.nrows(),
                    img.ncols()
                )));
            }
            for a in 0..dim {
                for b in 0..dim {
                    j[(i * dim + a, jj * dim + b)] = img[(a, b)];
                }
            }
            images.push(img);
        }
    }
    // linearity spot check: action(Σ c_ij E_ij) must match Σ c_ij action(E_ij)
    let mut probe = CMatrix::zeros(dim, dim);
    let mut expected = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for jj in 0..dim {
            let coeff = Complex64::new(1.0 + (i * dim + jj) as f64, 0.5 - (jj as f64));
            probe[(i, jj)] = coeff;
            expected += images[i * dim + jj].clone() * coeff;
        }
    }
    if max_abs(&(action(&probe) - &expected)) > 1e-9 * max_abs(&expected).max(1.0) {
        return Err(Error::InvalidArgument(
            "supplied action is not linear in its input".into(),
        ));
    }
    Ok(j)
}

/// Applies a Choi-encoded map: `Φ(T) = Σ_ij T_ij · J[(i,·),(j,·)]`.
pub fn apply_choi(j: &CMatrix, t: &CMatrix) -> CMatrix {
    let d = t.nrows();
    debug_assert_eq!(j.nrows(), d * d);
    let mut out = CMatrix::zeros(d, d);
    for i in 0..d {
        for jj in 0..d {
            let coeff = t[(i, jj)];
            if coeff == Complex64::ZERO {
                continue;
            }
            for a in 0..d {
                for b in 0..d {
                    out[(a, b)] += coeff * j[(i * d + a, jj * d + b)];
                }
            }
        }
    }
    out
}

/// Choi matrix of the Heisenberg adjoint, `J(Φ†)[(i,a),(j,b)] = J(Φ)[(b,j),(a,i)]`.
///
/// This is the (swap ∘ transpose) re-indexing fixed by the crate's
/// tensor convention; applying it twice is the identity.
pub fn adjoint_choi(j: &CMatrix, dim: usize) -> CMatrix {
    let d2 = dim * dim;
    assert_eq!(j.nrows(), d2);
    CMatrix::from_fn(d2, d2, |row, col| {
        let (i, a) = (row / dim, row % dim);
        let (jj, b) = (col / dim, col % dim);
        j[(b * dim + jj, a * dim + i)]
    })
}

/// Choi matrix of `T ↦ outer · Φ(inner T inner†) · outer†`.
///
/// Equals `(innerᵀ ⊗ outer) · J(Φ) · (innerᵀ ⊗ outer)†`, which is the
/// workhorse behind covariance checks and twirling.
pub fn conjugated_choi(j: &CMatrix, inner: &CMatrix, outer: &CMatrix) -> CMatrix {
    let a = kron(&inner.transpose(), outer);
    &a * j * a.adjoint()
}

/// Validation report for an instrument; purely diagnostic.
#[derive(Debug, Clone)]
pub struct InstrumentReport {
    /// Smallest Choi eigenvalue per outcome.
    pub per_outcome_min_eig: Vec<f64>,
    /// Largest Hermiticity residual across outcome Chois.
    pub hermiticity_residual: f64,
    /// `‖Σ_x tr_out(J_x) − I‖_max`.
    pub trace_preservation_residual: f64,
}

impl InstrumentReport {
    pub fn valid(&self, tol: f64) -> bool {
        self.per_outcome_min_eig.iter().all(|&e| e >= -tol)
            && self.hermiticity_residual <= tol
            && self.trace_preservation_residual <= tol
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.per_outcome_min_eig
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Reports complete positivity per outcome and total trace preservation.
pub fn validate_instrument(instrument: &Instrument, _tol: f64) -> InstrumentReport {
    let d = instrument.dim();
    let mut herm = 0.0f64;
    let mut mins = Vec::with_capacity(instrument.num_outcomes());
    let mut total_in = CMatrix::zeros(d, d);
    for j in instrument.chois() {
        herm = herm.max(max_abs(&(j - j.adjoint())));
        let (vals, _) = eigh(j);
        mins.push(vals.first().copied().unwrap_or(0.0));
        total_in += partial_trace_second(j, d, d).expect("validated shape");
    }
    InstrumentReport {
        per_outcome_min_eig: mins,
        hermiticity_residual: herm,
        trace_preservation_residual: max_abs(&(total_in - identity(d))),
    }
}

/// Covariance residual report.
#[derive(Debug, Clone)]
pub struct CovarianceReport {
    /// Largest entry of `J_{g·x} − J(U_g I_x(U_g† · U_g) U_g†)` over all
    /// `g` and `x`; equals the max deviation on matrix-unit inputs.
    pub max_residual: f64,
}

impl CovarianceReport {
    pub fn covariant(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }
}

/// Checks `I_{g·x}(T) = U_g I_x(U_g† T U_g) U_g†` for all `g`, `x` and
/// basis `T`.
///
/// Projective `U` is allowed: conjugation cancels the multiplier phases,
/// and the verdict coincides with covariance under the lifted ordinary
/// representation of the central extension.
pub fn check_covariance(
    group: &FiniteGroup,
    instrument: &Instrument,
    rep: &Representation,
    _tol: f64,
) -> Result<CovarianceReport> {
    if rep.len() != group.order() {
        return Err(Error::DimensionMismatch(
            "representation does not match the group".into(),
        ));
    }
    if instrument.outcomes().group_order() != group.order() {
        return Err(Error::DimensionMismatch(
            "outcome space is not a space for this group".into(),
        ));
    }
    if rep.dim() != instrument.dim() {
        return Err(Error::DimensionMismatch(format!(
            "representation dim {} vs instrument dim {}",
            rep.dim(),
            instrument.dim()
        )));
    }
    let mut max_residual = 0.0f64;
    for g in group.elements() {
        let u = rep.matrix(g);
        let u_dag = u.adjoint();
        for x in 0..instrument.num_outcomes() {
            let transported = conjugated_choi(instrument.choi(x), &u_dag, u);
            let target = instrument.choi(instrument.outcomes().act(g, x));
            max_residual = max_residual.max(max_abs(&(transported - target)));
        }
    }
    Ok(CovarianceReport { max_residual })
}

/// Outcome probabilities and conditional post-measurement states.
#[derive(Debug, Clone)]
pub struct OutcomeStatistics {
    pub probabilities: Vec<f64>,
    /// `I_x(ρ)/p_x`; `None` when `p_x` is below the emission threshold.
    pub posteriors: Vec<Option<CMatrix>>,
}

/// Probability floor below which posteriors are not emitted.
pub const POSTERIOR_TOL: f64 = 1e-12;

pub(crate) fn check_state(rho: &CMatrix, dim: usize, tol: f64) -> Result<()> {
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::NotAState(format!(
            "state has shape {}x{}, expected {dim}x{dim}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    check_finite(rho)?;
    let herm = max_abs(&(rho - rho.adjoint()));
    if herm > tol {
        return Err(Error::NotAState(format!(
            "state is not Hermitian: residual {herm:.3e}"
        )));
    }
    let (vals, _) = eigh(rho);
    if let Some(&min) = vals.first() {
        if min < -tol {
            return Err(Error::NotAState(format!(
                "state has negative eigenvalue {min:.3e}"
            )));
        }
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol.max(1e-9) || tr.im.abs() > tol.max(1e-9) {
        return Err(Error::NotAState(format!("state trace is {tr}, expected 1")));
    }
    Ok(())
}

/// Outcome probabilities `p_x = tr I_x(ρ)` and posteriors `I_x(ρ)/p_x`.
pub fn instrument_statistics(
    instrument: &Instrument,
    rho: &CMatrix,
    tol: f64,
) -> Result<OutcomeStatistics> {
    check_state(rho, instrument.dim(), tol)?;
    let mut probabilities = Vec::with_capacity(instrument.num_outcomes());
    let mut posteriors = Vec::with_capacity(instrument.num_outcomes());
    for x in 0..instrument.num_outcomes() {
        let out = instrument.apply(x, rho);
        let p = out.trace().re;
        probabilities.push(p);
        if p > POSTERIOR_TOL {
            posteriors.push(Some(out.unscale(p)));
        } else {
            posteriors.push(None);
        }
    }
    Ok(OutcomeStatistics {
        probabilities,
        posteriors,
    })
}

/// Empirical probe of the instrument norm `‖I‖_∞ = sup ‖I T‖_M / ‖T‖_T`.
///
/// Draws seeded random trace-class inputs (raw complex Gaussian,
/// Hermitized and PSD) and returns the largest observed ratio, where
/// `‖I T‖_M = Σ_x ‖I_x(T)‖_T`.
pub fn norm_bound_probe(instrument: &Instrument, trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let d = instrument.dim();
    let mut max_ratio = 0.0f64;
    for trial in 0..trials {
        let raw = random_gaussian(d, d, &mut rng);
        let t = match trial % 3 {
            0 => raw,
            1 => (&raw + raw.adjoint()).scale(0.5),
            _ => &raw * raw.adjoint(),
        };
        let denom = trace_norm(&t);
        if denom < 1e-12 {
            continue;
        }
        let num: f64 = (0..instrument.num_outcomes())
            .map(|x| trace_norm(&instrument.apply(x, &t)))
            .sum();
        max_ratio = max_ratio.max(num / denom);
    }
    max_ratio
}

/// Group-averages an instrument into a covariant one:
/// `I_x(T) = (1/|G|) Σ_g U_g† I0_{g·x}(U_g T U_g†) U_g`.
///
/// The result is a valid covariant instrument, and twirling a covariant
/// instrument returns it unchanged.
pub fn twirl(
    group: &FiniteGroup,
    instrument: &Instrument,
    rep: &Representation,
) -> Result<Instrument> {
    if rep.len() != group.order() || rep.dim() != instrument.dim() {
        return Err(Error::DimensionMismatch(
            "twirl needs a representation matching the group and instrument".into(),
        ));
    }
    if instrument.outcomes().group_order() != group.order() {
        return Err(Error::DimensionMismatch(
            "outcome space is not a space for this group".into(),
        ));
    }
    let d2 = instrument.dim() * instrument.dim();
    let scale = Complex64::new(1.0 / group.order() as f64, 0.0);
    let mut chois = vec![CMatrix::zeros(d2, d2); instrument.num_outcomes()];
    for g in group.elements() {
        let u = rep.matrix(g);
        let u_dag = u.adjoint();
        for (x, acc) in chois.iter_mut().enumerate() {
            let moved =
                conjugated_choi(instrument.choi(instrument.outcomes().act(g, x)), u, &u_dag);
            *acc += moved * scale;
        }
    }
    Instrument::new(instrument.dim(), instrument.outcomes().clone(), chois)
}

/// Deterministic pseudo-random valid instrument, for tests and probes.
///
/// Per outcome, a random PSD Choi is drawn; the family is then rescaled
/// by the inverse square root of the total input marginal so trace
/// preservation holds exactly.
pub fn random_instrument<R: Rng>(
    dim: usize,
    outcomes: &CosetSpace,
    rng: &mut R,
) -> Result<Instrument> {
    let d2 = dim * dim;
    let mut chois: Vec<CMatrix> = (0..outcomes.num_points())
        .map(|_| {
            let m = random_gaussian(d2, d2, rng);
            &m * m.adjoint()
        })
        .collect();
    let mut marginal = CMatrix::zeros(dim, dim);
    for j in &chois {
        marginal += partial_trace_second(j, dim, dim)?;
    }
    let isq = numkernel::inv_sqrt_psd(&marginal, 1e-12)?;
    // tr_out((A ⊗ I) J (A ⊗ I)†) = A tr_out(J) A†
    let a = kron(&isq, &identity(dim));
    for j in chois.iter_mut() {
        *j = &a * j.clone() * a.adjoint();
    }
    Instrument::new(dim, outcomes.clone(), chois)
}
