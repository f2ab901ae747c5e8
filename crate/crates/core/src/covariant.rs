//! Covariant instruments for an irreducible representation: the
//! admissible intertwiner set, the instruments it generates, and the
//! bijection with normalized `H`-covariant CP maps.
//!
//! Fix an irreducible (ordinary or projective) representation `U` of `G`
//! on `ℂ^d`, a subgroup `H` with outcome space `Ω = G/H`, and the
//! reference representation `σ` of `H` on `V`. The admissible set is
//!
//! `C = { B : ℂ^d → V⊗ℂ^d  with  ‖B‖ = 1,  B U_h = (σ_h ⊗ U_h) B }`,
//!
//! and each `B ∈ C` generates a covariant instrument whose outcome map
//! at the coset of `g` is
//!
//! `I_x(T) = |H| · c² · tr^V[ K_g T K_g† ]`,  `K_g = (I_V ⊗ U_g) B U_g†`,
//!
//! with `c` the Duflo–Moore constant. `K_g` changes only by a unitary on
//! the traced factor when `g` moves within a coset, so the map is
//! representative independent, and multiplier phases cancel inside
//! `K_g T K_g†`, so projective `U` needs no special casing.
//!
//! In the Heisenberg picture the same data is a normalized CP map
//! `Φ_B(A) = B† (I_V ⊗ A) B`; instruments and such maps determine each
//! other by evaluating at the identity coset and transporting by `U`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::Distribution;

use crate::groups::{coset_space, CosetSpace, FiniteGroup};
use crate::instruments::{
    adjoint_choi, check_covariance, conjugated_choi, Instrument,
};
use crate::numkernel::{
    self, eigh, hs_norm, identity, kron, max_abs, unvectorize, vectorize, CMatrix,
};
use crate::reps::{duflo_moore, intertwiners, validate_rep, DufloMooreConstant, Representation};
use crate::{Error, Result};

/// Multiplicity with which the regular representation of `H` enters the
/// reference representation `σ = reg(H) ⊗ I_mult`, namely `d²`.
///
/// Any `σ'` arising from a minimal Stinespring dilation of a CP map on a
/// `d`-dimensional space has dimension at most `d²`, and the regular
/// representation with multiplicity `d²` contains every representation
/// of `H` of that dimension as a subrepresentation, so this truncation
/// loses nothing at this scale.
fn sigma_multiplicity(dim: usize) -> usize {
    dim * dim
}

/// The ambient data for covariant-instrument constructions: group,
/// irreducible representation, subgroup, outcome space, reference
/// representation `σ` and the Duflo–Moore constant.
#[derive(Debug, Clone)]
pub struct CovariantSystem {
    group: FiniteGroup,
    rep: Representation,
    subgroup: Vec<usize>,
    sub_group: FiniteGroup,
    embedding: Vec<usize>,
    sigma: Representation,
    outcomes: CosetSpace,
    dm: DufloMooreConstant,
}

impl CovariantSystem {
    /// Validates the inputs and assembles the system.
    ///
    /// `rep` must be a valid unitary (possibly projective) irreducible
    /// representation of `group`, `subgroup` a subgroup. `σ` is fixed to
    /// `reg(H) ⊗ I_{d²}`.
    pub fn new(
        group: FiniteGroup,
        rep: Representation,
        subgroup: Vec<usize>,
        tol: f64,
    ) -> Result<Self> {
        let report = validate_rep(&group, &rep, tol)?;
        if !report.valid(tol) {
            return Err(Error::InvalidRepresentation(format!(
                "unitarity residual {:.3e}, homomorphism residual {:.3e}",
                report.max_unitarity_residual, report.max_homomorphism_residual
            )));
        }
        let dm = duflo_moore(&group, &rep, tol)?;
        let (sub_group, embedding) = group.subgroup_group(&subgroup)?;
        let mult = sigma_multiplicity(rep.dim());
        let sigma = Representation::regular(&sub_group)
            .tensor(&Representation::identity_rep(sub_group.order(), mult))?;
        let outcomes = coset_space(&group, &subgroup)?;
        Ok(Self {
            group,
            rep,
            subgroup: embedding.clone(),
            sub_group,
            embedding,
            sigma,
            outcomes,
            dm,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn sigma(&self) -> &Representation {
        &self.sigma
    }

    pub fn outcomes(&self) -> &CosetSpace {
        &self.outcomes
    }

    pub fn duflo_moore_constant(&self) -> DufloMooreConstant {
        self.dm
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn dim_v(&self) -> usize {
        self.sigma.dim()
    }

    /// Weight carried by each outcome map: `|H| · c²`.
    pub fn outcome_weight(&self) -> f64 {
        self.outcomes.weight_per_point() * self.dm.formal_degree()
    }

    /// Restriction of `U` to the subgroup, in subgroup labels.
    pub fn rep_on_subgroup(&self) -> Representation {
        self.rep.restrict(&self.embedding)
    }

    /// Orthonormal basis of the linear space containing the admissible
    /// set; `C` is its unit sphere.
    pub fn admissible_b_basis(&self, tol: f64) -> Result<Vec<CMatrix>> {
        let u_h = self.rep_on_subgroup();
        let target = self.sigma.tensor(&u_h)?;
        intertwiners(&self.sub_group, &u_h, &target, tol)
    }

    /// Seeded random unit-norm element of the admissible space.
    pub fn random_admissible_b<R: Rng>(&self, basis: &[CMatrix], rng: &mut R) -> IntertwinerB {
        assert!(!basis.is_empty(), "admissible space is trivial");
        let rows = basis[0].nrows();
        let cols = basis[0].ncols();
        let mut b = CMatrix::zeros(rows, cols);
        for elem in basis {
            let re: f64 = rand_distr::StandardNormal.sample(rng);
            let im: f64 = rand_distr::StandardNormal.sample(rng);
            b += elem * Complex64::new(re, im);
        }
        let norm = hs_norm(&b);
        IntertwinerB {
            matrix: b.unscale(norm),
        }
    }

    /// Residuals of the defining properties of an admissible `B`.
    pub fn validate_b(&self, b: &IntertwinerB) -> BReport {
        let m = &b.matrix;
        let norm_residual = (hs_norm(m) - 1.0).abs();
        let mut intertwining_residual = 0.0f64;
        for (h_idx, &h) in self.embedding.iter().enumerate() {
            let u_h = self.rep.matrix(h);
            let lhs = m * u_h;
            let rhs = kron(self.sigma.matrix(h_idx), u_h) * m;
            intertwining_residual = intertwining_residual.max(max_abs(&(lhs - rhs)));
        }
        BReport {
            norm_residual,
            intertwining_residual,
        }
    }

    fn require_valid_b(&self, b: &IntertwinerB, tol: f64) -> Result<()> {
        let (dv, d) = (self.dim_v(), self.dim());
        if b.matrix.nrows() != dv * d || b.matrix.ncols() != d {
            return Err(Error::InvalidIntertwiner(format!(
                "B has shape {}x{}, expected {}x{}",
                b.matrix.nrows(),
                b.matrix.ncols(),
                dv * d,
                d
            )));
        }
        let report = self.validate_b(b);
        if report.norm_residual > tol {
            return Err(Error::InvalidIntertwiner(format!(
                "‖B‖ deviates from 1 by {:.3e}",
                report.norm_residual
            )));
        }
        if report.intertwining_residual > tol {
            return Err(Error::InvalidIntertwiner(format!(
                "intertwining residual {:.3e}",
                report.intertwining_residual
            )));
        }
        Ok(())
    }

    /// The Choi matrix of the outcome map built at an explicit coset
    /// representative `g`; exposed so representative independence can be
    /// checked directly.
    pub fn outcome_choi_with_representative(&self, b: &IntertwinerB, g: usize) -> CMatrix {
        let d = self.dim();
        let dv = self.dim_v();
        let u = self.rep.matrix(g);
        let u_dag = u.adjoint();
        let scale = Complex64::new(self.outcome_weight(), 0.0);
        let d2 = d * d;
        let mut choi = CMatrix::zeros(d2, d2);
        for j in 0..dv {
            // component block B_j, then Kraus K_j = U_g B_j U_g†
            let b_j = b.matrix.view((j * d, 0), (d, d)).into_owned();
            let k_j = u * b_j * &u_dag;
            let w = vectorize(&k_j.transpose());
            choi += numkernel::rank_one(&w, &w) * scale;
        }
        choi
    }

    /// Builds the covariant instrument generated by an admissible `B`,
    /// using the minimal-label representative of each coset.
    pub fn instrument_from_b(&self, b: &IntertwinerB, tol: f64) -> Result<Instrument> {
        self.require_valid_b(b, tol)?;
        let chois = (0..self.outcomes.num_points())
            .map(|x| self.outcome_choi_with_representative(b, self.outcomes.representative(x)))
            .collect();
        Instrument::new(self.dim(), self.outcomes.clone(), chois)
    }

    /// The Heisenberg-picture map `Φ_B(A) = B†(I_V ⊗ A)B = Σ_j B_j† A B_j`.
    pub fn phi_from_b(&self, b: &IntertwinerB, tol: f64) -> Result<NormalizedCPMap> {
        self.require_valid_b(b, tol)?;
        let d = self.dim();
        let dv = self.dim_v();
        let blocks: Vec<CMatrix> = (0..dv)
            .map(|j| b.matrix.view((j * d, 0), (d, d)).into_owned())
            .collect();
        let choi = crate::instruments::choi_of_map(d, |a| {
            let mut out = CMatrix::zeros(d, d);
            for blk in &blocks {
                out += blk.adjoint() * a * blk;
            }
            out
        })?;
        Ok(NormalizedCPMap { choi })
    }

    /// Recovers the normalized CP map of a covariant instrument by
    /// evaluating the Heisenberg adjoint of the identity-coset outcome:
    /// `Φ(A) = (|G| / (d·|H|)) · (I_ė)†(A)`.
    pub fn phi_from_instrument(&self, instrument: &Instrument, tol: f64) -> Result<NormalizedCPMap> {
        let report = check_covariance(&self.group, instrument, &self.rep, tol)?;
        if !report.covariant(tol) {
            return Err(Error::NotCovariant {
                residual: report.max_residual,
                tol,
                detail: String::new(),
            });
        }
        let d = self.dim();
        let e_point = self.outcomes.identity_point();
        let scale = self.group.order() as f64
            / (d as f64 * self.outcomes.weight_per_point());
        let choi = adjoint_choi(instrument.choi(e_point), d) * Complex64::new(scale, 0.0);
        Ok(NormalizedCPMap { choi })
    }

    /// Builds the covariant instrument of a normalized `H`-covariant CP
    /// map: `(I_x)†(A) = |H|·c² · U_g Φ(U_g† A U_g) U_g†` at the coset
    /// representative `g`, converted back to the Schrödinger picture.
    pub fn instrument_from_phi(&self, phi: &NormalizedCPMap, tol: f64) -> Result<Instrument> {
        phi.require_in_p(self, tol)?;
        let d = self.dim();
        let s = Complex64::new(self.outcome_weight(), 0.0);
        let chois = (0..self.outcomes.num_points())
            .map(|x| {
                let g = self.outcomes.representative(x);
                let u = self.rep.matrix(g);
                let heis = conjugated_choi(&phi.choi, &u.adjoint(), u) * s;
                adjoint_choi(&heis, d)
            })
            .collect();
        Instrument::new(d, self.outcomes.clone(), chois)
    }

    /// Reconstructs an admissible intertwiner from a map `Φ ∈ P`.
    ///
    /// Steps: (1) eigendecompose the Choi matrix of `Φ` into Kraus
    /// operators, giving the minimal Stinespring map `V = Σ_j e_j ⊗ B_j`;
    /// (2) solve `(σ'_h ⊗ U_h) V = V U_h` for the unique unitary `σ'` on
    /// the Stinespring space; (3) embed `σ'` into `σ` by the polar
    /// isometry of a random intertwiner combination; (4) `B = (J ⊗ I) V`.
    pub fn b_from_phi(&self, phi: &NormalizedCPMap, seed: u64, tol: f64) -> Result<IntertwinerB> {
        phi.require_in_p(self, tol)?;
        let d = self.dim();
        let (vals, vecs) = eigh(&phi.choi);
        let lmax = vals.last().copied().unwrap_or(0.0).max(f64::EPSILON);
        let kept: Vec<usize> = (0..vals.len())
            .filter(|&i| vals[i] > 1e-12 * lmax)
            .collect();
        if kept.is_empty() {
            return Err(Error::NotInCpSet("Choi matrix is numerically zero".into()));
        }
        // Kraus blocks: B_k[i,a] = sqrt(λ_k) conj(w_k[(i,a)])
        let blocks: Vec<CMatrix> = kept
            .iter()
            .map(|&idx| {
                let col = vecs.column(idx).into_owned();
                let m = unvectorize(&col, d, d);
                m.map(|z| z.conj()) * Complex64::new(vals[idx].sqrt(), 0.0)
            })
            .collect();
        let r0 = blocks.len();

        // σ'_h from (σ'_h ⊗ U_h) V = V U_h, via the row-orthogonality of
        // the Kraus family: stacking vec(U_h B_k) as rows gives a matrix
        // with Gram diag(λ_k).
        let mut sigma_prime_mats = Vec::with_capacity(self.sub_group.order());
        for (h_idx, &h) in self.embedding.iter().enumerate() {
            let u_h = self.rep.matrix(h);
            let m_rows: Vec<CMatrix> = blocks.iter().map(|b_k| u_h * b_k).collect();
            let n_rows: Vec<CMatrix> = blocks.iter().map(|b_k| b_k * u_h).collect();
            let mut x = CMatrix::zeros(r0, r0);
            for k in 0..r0 {
                for l in 0..r0 {
                    // ⟨N_k, M_l⟩ / λ_l
                    let ip = numkernel::hs_inner(&n_rows[k], &m_rows[l]);
                    x[(k, l)] = ip / Complex64::new(vals[kept[l]], 0.0);
                }
            }
            // polar cleanup keeps σ' exactly unitary
            let gram = x.adjoint() * &x;
            let isq = numkernel::inv_sqrt_psd(&gram, 1e-10).map_err(|_| {
                Error::NotInCpSet(format!(
                    "induced action on the Stinespring space is singular at subgroup element {h_idx}"
                ))
            })?;
            sigma_prime_mats.push(x * isq);
        }
        let sigma_prime = Representation::new(sigma_prime_mats, None)?;
        let sp_report = validate_rep(&self.sub_group, &sigma_prime, tol)?;
        if !sp_report.valid(tol.max(1e-12) * 1e3) {
            return Err(Error::NotInCpSet(format!(
                "induced Stinespring action is not a representation: homomorphism residual {:.3e}",
                sp_report.max_homomorphism_residual
            )));
        }

        // isometric intertwiner J : V0 -> V
        let basis = intertwiners(&self.sub_group, &sigma_prime, &self.sigma, tol)?;
        if basis.is_empty() {
            return Err(Error::NoInjectiveIntertwiner { retries: 0 });
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let retries = 8;
        let mut j_iso = None;
        for _ in 0..retries {
            let mut x0 = CMatrix::zeros(self.dim_v(), r0);
            for elem in &basis {
                let re: f64 = rand_distr::StandardNormal.sample(&mut rng);
                let im: f64 = rand_distr::StandardNormal.sample(&mut rng);
                x0 += elem * Complex64::new(re, im);
            }
            let gram = x0.adjoint() * &x0;
            let (gvals, _) = eigh(&gram);
            let gmax = gvals.last().copied().unwrap_or(0.0);
            if gvals.first().copied().unwrap_or(0.0) > 1e-10 * gmax.max(1e-12) {
                let isq = numkernel::inv_sqrt_psd(&gram, 1e-12)?;
                j_iso = Some(x0 * isq);
                break;
            }
        }
        let j_iso = j_iso.ok_or(Error::NoInjectiveIntertwiner { retries })?;

        // B = (J ⊗ I) V, assembled blockwise: V-block j of B is Σ_k J[j,k] B_k
        let dv = self.dim_v();
        let mut b = CMatrix::zeros(dv * d, d);
        for jv in 0..dv {
            let mut blk = CMatrix::zeros(d, d);
            for (k, b_k) in blocks.iter().enumerate() {
                blk += b_k * j_iso[(jv, k)];
            }
            b.view_mut((jv * d, 0), (d, d)).copy_from(&blk);
        }
        let b = IntertwinerB { matrix: b };
        self.require_valid_b(&b, tol.max(1e-12) * 1e3)?;
        Ok(b)
    }
}

/// A unit-norm operator `B : ℂ^d → V ⊗ ℂ^d` intertwining `U|_H` with
/// `σ ⊗ U|_H`.
#[derive(Debug, Clone)]
pub struct IntertwinerB {
    /// Shape `(dim V · d) × d`, with the `V` index slow.
    pub matrix: CMatrix,
}

impl IntertwinerB {
    pub fn new(matrix: CMatrix) -> Self {
        Self { matrix }
    }
}

/// Residuals of the two defining properties of an admissible `B`.
#[derive(Debug, Clone, Copy)]
pub struct BReport {
    pub norm_residual: f64,
    pub intertwining_residual: f64,
}

impl BReport {
    pub fn valid(&self, tol: f64) -> bool {
        self.norm_residual <= tol && self.intertwining_residual <= tol
    }
}

/// A normal completely positive map `Φ` on `L(ℂ^d)` with
/// `tr Φ(I) = 1`, commuting with conjugation by `U_h` for `h ∈ H`;
/// stored as its (Heisenberg-picture) Choi matrix.
#[derive(Debug, Clone)]
pub struct NormalizedCPMap {
    pub choi: CMatrix,
}

/// Validation residuals for membership in the convex set of normalized
/// `H`-covariant CP maps.
#[derive(Debug, Clone)]
pub struct CpMapReport {
    pub min_choi_eigenvalue: f64,
    pub hermiticity_residual: f64,
    /// `|tr Φ(I) − 1|`, evaluated as the Choi trace.
    pub normalization_residual: f64,
    /// `max_h ‖Φ − U_h† Φ(U_h · U_h†) U_h‖` as a Choi difference.
    pub covariance_residual: f64,
}

impl CpMapReport {
    pub fn valid(&self, tol: f64) -> bool {
        self.min_choi_eigenvalue >= -tol
            && self.hermiticity_residual <= tol
            && self.normalization_residual <= tol
            && self.covariance_residual <= tol
    }
}

impl NormalizedCPMap {
    pub fn dim(&self) -> usize {
        (self.choi.nrows() as f64).sqrt().round() as usize
    }

    /// Applies `Φ` to an operator `A` (Heisenberg picture).
    pub fn apply(&self, a: &CMatrix) -> CMatrix {
        crate::instruments::apply_choi(&self.choi, a)
    }

    /// Residual report against the three membership conditions.
    pub fn validate(&self, system: &CovariantSystem) -> CpMapReport {
        let (vals, _) = eigh(&self.choi);
        let herm = max_abs(&(&self.choi - self.choi.adjoint()));
        let tr = self.choi.trace();
        let mut cov = 0.0f64;
        for &h in system.subgroup() {
            let u_h = system.rep().matrix(h);
            let transported = conjugated_choi(&self.choi, u_h, &u_h.adjoint());
            cov = cov.max(max_abs(&(transported - &self.choi)));
        }
        CpMapReport {
            min_choi_eigenvalue: vals.first().copied().unwrap_or(0.0),
            hermiticity_residual: herm,
            normalization_residual: ((tr.re - 1.0).powi(2) + tr.im.powi(2)).sqrt(),
            covariance_residual: cov,
        }
    }

    fn require_in_p(&self, system: &CovariantSystem, tol: f64) -> Result<()> {
        let d = system.dim();
        if self.choi.nrows() != d * d || self.choi.ncols() != d * d {
            return Err(Error::NotInCpSet(format!(
                "Choi matrix has shape {}x{}, expected {}x{}",
                self.choi.nrows(),
                self.choi.ncols(),
                d * d,
                d * d
            )));
        }
        let report = self.validate(system);
        if report.hermiticity_residual > tol {
            return Err(Error::NotInCpSet(format!(
                "Choi matrix is not Hermitian: residual {:.3e}",
                report.hermiticity_residual
            )));
        }
        if report.min_choi_eigenvalue < -tol {
            return Err(Error::NotInCpSet(format!(
                "not completely positive: Choi eigenvalue {:.3e}",
                report.min_choi_eigenvalue
            )));
        }
        if report.normalization_residual > tol {
            return Err(Error::NotInCpSet(format!(
                "tr Φ(I) deviates from 1 by {:.3e}",
                report.normalization_residual
            )));
        }
        if report.covariance_residual > tol {
            return Err(Error::NotInCpSet(format!(
                "H-covariance residual {:.3e}",
                report.covariance_residual
            )));
        }
        Ok(())
    }
}

/// Convex mixture of instruments over the same outcome space.
pub fn mix_instruments(weights: &[f64], parts: &[&Instrument]) -> Result<Instrument> {
    if weights.len() != parts.len() || parts.is_empty() {
        return Err(Error::InvalidMixture(format!(
            "{} weights for {} instruments",
            weights.len(),
            parts.len()
        )));
    }
    if weights.iter().any(|&w| w < -1e-12) {
        return Err(Error::InvalidMixture("negative weight".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidMixture(format!("weights sum to {total}")));
    }
    let first = parts[0];
    for p in &parts[1..] {
        if p.dim() != first.dim() || p.outcomes() != first.outcomes() {
            return Err(Error::InvalidMixture(
                "instruments live on different spaces".into(),
            ));
        }
    }
    let d2 = first.dim() * first.dim();
    let chois = (0..first.num_outcomes())
        .map(|x| {
            let mut acc = CMatrix::zeros(d2, d2);
            for (&w, p) in weights.iter().zip(parts.iter()) {
                acc += p.choi(x) * Complex64::new(w, 0.0);
            }
            acc
        })
        .collect();
    Instrument::new(first.dim(), first.outcomes().clone(), chois)
}

/// Canonical admissible intertwiners shared by fixtures and tests.
///
/// Both use the `σ`-invariant unit vector `k = (uniform over H) ⊗ e_0`
/// in `V = ℂ^{|H|} ⊗ ℂ^{d²}`:
///
/// - `uniform`: `B = k ⊗ I/√d`, generating the uniform-randomization
///   instrument `I_x(T) = T/|Ω|`;
/// - `lueders`: `B = k ⊗ (e_0 ⊙ e_0)`, generating the Lüders-type
///   instrument of the orbit of `e_0 ⊙ e_0` (requires `e_0 ⊙ e_0` to
///   commute with `U|_H`, which holds when `U|_H` is scalar).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalB {
    Uniform,
    Lueders,
}

impl CovariantSystem {
    /// Builds one of the canonical admissible intertwiners.
    pub fn canonical_b(&self, kind: CanonicalB) -> IntertwinerB {
        let d = self.dim();
        let h_order = self.sub_group.order();
        let mult = sigma_multiplicity(d);
        let core = match kind {
            CanonicalB::Uniform => identity(d).unscale((d as f64).sqrt()),
            CanonicalB::Lueders => crate::reps::rank_one_unit(d, 0, 0),
        };
        // k[(h, mu)] = δ_{mu,0}/sqrt(|H|) in V = C^{|H|} ⊗ C^{d²}
        let dv = h_order * mult;
        let mut b = CMatrix::zeros(dv * d, d);
        let amp = Complex64::new(1.0 / (h_order as f64).sqrt(), 0.0);
        for h in 0..h_order {
            let jv = h * mult;
            let mut view = b.view_mut(((jv) * d, 0), (d, d));
            let mut blk = core.clone();
            blk *= amp;
            view.copy_from(&blk);
        }
        IntertwinerB { matrix: b }
    }
}
