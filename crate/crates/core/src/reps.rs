//! Unitary and projective representations of finite groups.
//!
//! A [`Representation`] stores one unitary matrix per group element and
//! an optional multiplier `m`. Without a multiplier the matrices satisfy
//! `U(g1 g2) = U(g1) U(g2)`; with one they satisfy the twisted law
//! `U(g1 g2) = m(g1,g2) U(g1) U(g2)`.
//!
//! Irreducibility is decided by the dimension of the self-intertwiner
//! space rather than by characters, so ordinary and projective
//! representations are handled uniformly.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::groups::{
    central_extension, coset_space, root_of_unity, CentralExtensionGroup, CosetSpace, FiniteGroup,
    Multiplier,
};
use crate::numkernel::{
    self, basis_vector, eigh, identity, kron, matrix_unit, max_abs, random_unit_vector, CMatrix,
};
use crate::{Error, Result};

/// Element-indexed unitary matrices, optionally multiplier-twisted.
#[derive(Debug, Clone)]
pub struct Representation {
    dim: usize,
    matrices: Vec<CMatrix>,
    multiplier: Option<Multiplier>,
}

impl Representation {
    pub fn new(matrices: Vec<CMatrix>, multiplier: Option<Multiplier>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::InvalidRepresentation("no matrices given".into()));
        }
        let dim = matrices[0].nrows();
        for (g, m) in matrices.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::InvalidRepresentation(format!(
                    "matrix {g} has shape {}x{}, expected {dim}x{dim}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            numkernel::check_finite(m)?;
        }
        if let Some(m) = &multiplier {
            if m.group_order() != matrices.len() {
                return Err(Error::InvalidRepresentation(format!(
                    "multiplier is for group order {}, got {} matrices",
                    m.group_order(),
                    matrices.len()
                )));
            }
        }
        Ok(Self {
            dim,
            matrices,
            multiplier,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of group elements covered.
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrix(&self, g: usize) -> &CMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn multiplier(&self) -> Option<&Multiplier> {
        self.multiplier.as_ref()
    }

    /// The trivial one-dimensional representation.
    pub fn trivial(group_order: usize) -> Self {
        Self::identity_rep(group_order, 1)
    }

    /// `g ↦ I_k` for every element.
    pub fn identity_rep(group_order: usize, k: usize) -> Self {
        Self {
            dim: k,
            matrices: (0..group_order).map(|_| identity(k)).collect(),
            multiplier: None,
        }
    }

    /// One-dimensional representation from a list of unimodular scalars.
    pub fn one_dim(values: Vec<Complex64>) -> Self {
        Self {
            dim: 1,
            matrices: values
                .into_iter()
                .map(|z| CMatrix::from_element(1, 1, z))
                .collect(),
            multiplier: None,
        }
    }

    /// Left regular representation by permutation matrices,
    /// `[L_g]_{a,b} = δ_{a, g∘b}`.
    pub fn regular(group: &FiniteGroup) -> Self {
        let n = group.order();
        let matrices = group
            .elements()
            .map(|g| {
                let mut m = CMatrix::zeros(n, n);
                for b in group.elements() {
                    m[(group.mul(g, b), b)] = Complex64::ONE;
                }
                m
            })
            .collect();
        Self {
            dim: n,
            matrices,
            multiplier: None,
        }
    }

    /// Elementwise tensor product; multipliers multiply.
    pub fn tensor(&self, other: &Representation) -> Result<Representation> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(
                "tensor product needs representations of the same group".into(),
            ));
        }
        let matrices = self
            .matrices
            .iter()
            .zip(other.matrices.iter())
            .map(|(a, b)| kron(a, b))
            .collect();
        let multiplier = match (&self.multiplier, &other.multiplier) {
            (None, None) => None,
            (Some(m), None) | (None, Some(m)) => Some(m.clone()),
            (Some(a), Some(b)) => Some(a.product(b)?),
        };
        Ok(Representation {
            dim: self.dim * other.dim,
            matrices,
            multiplier,
        })
    }

    /// Restriction to a subgroup, given the embedding of subgroup labels
    /// into parent labels produced by [`FiniteGroup::subgroup_group`].
    pub fn restrict(&self, embedding: &[usize]) -> Representation {
        Representation {
            dim: self.dim,
            matrices: embedding.iter().map(|&g| self.matrices[g].clone()).collect(),
            multiplier: self.multiplier.as_ref().map(|m| m.restrict(embedding)),
        }
    }
}

/// Residual report of [`validate_rep`].
#[derive(Debug, Clone)]
pub struct RepReport {
    /// `‖U(e) − I‖_max`.
    pub identity_residual: f64,
    /// `max_g ‖U(g)† U(g) − I‖_max`.
    pub max_unitarity_residual: f64,
    /// `max_{g1,g2} ‖U(g1 g2) − m(g1,g2) U(g1) U(g2)‖_max`
    /// (`m ≡ 1` for ordinary representations).
    pub max_homomorphism_residual: f64,
}

impl RepReport {
    pub fn valid(&self, tol: f64) -> bool {
        self.identity_residual <= tol
            && self.max_unitarity_residual <= tol
            && self.max_homomorphism_residual <= tol
    }
}

/// Checks unitarity and the (possibly twisted) homomorphism law.
pub fn validate_rep(group: &FiniteGroup, rep: &Representation, _tol: f64) -> Result<RepReport> {
    if rep.len() != group.order() {
        return Err(Error::DimensionMismatch(format!(
            "representation covers {} elements, group has order {}",
            rep.len(),
            group.order()
        )));
    }
    let d = rep.dim();
    let identity_residual = max_abs(&(rep.matrix(FiniteGroup::IDENTITY) - identity(d)));
    let mut unit = 0.0f64;
    for g in group.elements() {
        let u = rep.matrix(g);
        unit = unit.max(max_abs(&(u.adjoint() * u - identity(d))));
    }
    let mut hom = 0.0f64;
    for g1 in group.elements() {
        for g2 in group.elements() {
            let lhs = rep.matrix(group.mul(g1, g2));
            let mut rhs = rep.matrix(g1) * rep.matrix(g2);
            if let Some(m) = rep.multiplier() {
                rhs *= m.value(g1, g2);
            }
            hom = hom.max(max_abs(&(lhs - rhs)));
        }
    }
    Ok(RepReport {
        identity_residual,
        max_unitarity_residual: unit,
        max_homomorphism_residual: hom,
    })
}

fn same_multiplier_class(a: Option<&Multiplier>, b: Option<&Multiplier>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(m), None) | (None, Some(m)) => m.is_trivial(),
        (Some(m1), Some(m2)) => m1.same_values(m2),
    }
}

/// Orthonormal (Hilbert–Schmidt) basis of `{X : X·R1(g) = R2(g)·X ∀g}`.
///
/// The equation system is stacked over all elements and solved as the
/// null space of `Σ_g A_g† A_g` via one Hermitian eigendecomposition;
/// eigenvectors below `tol · max(1, λ_max)` form the basis. The result
/// may be empty.
pub fn intertwiners(
    group: &FiniteGroup,
    r1: &Representation,
    r2: &Representation,
    tol: f64,
) -> Result<Vec<CMatrix>> {
    if r1.len() != group.order() || r2.len() != group.order() {
        return Err(Error::DimensionMismatch(
            "intertwiners need two representations of the given group".into(),
        ));
    }
    if !same_multiplier_class(r1.multiplier(), r2.multiplier()) {
        return Err(Error::InvalidRepresentation(
            "intertwiners need matching multiplier classes".into(),
        ));
    }
    let (n1, n2) = (r1.dim(), r2.dim());
    let dim = n1 * n2;
    let mut m = CMatrix::zeros(dim, dim);
    for g in group.elements() {
        // row-major vec(X) with X of shape n2×n1:
        // vec(R2 X) = kron(R2, I) vec(X), vec(X R1) = kron(I, R1ᵀ) vec(X)
        let a = kron(r2.matrix(g), &identity(n1)) - kron(&identity(n2), &r1.matrix(g).transpose());
        m += a.adjoint() * a;
    }
    let (vals, vecs) = eigh(&m);
    let lmax = vals.last().copied().unwrap_or(0.0).max(1.0);
    let mut basis = Vec::new();
    for (i, &lam) in vals.iter().enumerate() {
        if lam <= tol * lmax {
            let col = vecs.column(i).into_owned();
            basis.push(numkernel::unvectorize(&col, n2, n1));
        }
    }
    Ok(basis)
}

/// True when the self-intertwiner space is one-dimensional.
pub fn is_irreducible(group: &FiniteGroup, rep: &Representation, tol: f64) -> Result<bool> {
    Ok(intertwiners(group, rep, rep, tol)?.len() == 1)
}

/// The scalar `c` with `C = c·I` normalizing the orthogonality relation
/// of a square integrable representation. Finite groups are unimodular,
/// so `C` is always scalar; `c² = dim(U)/|G|` is the formal degree with
/// respect to the counting measure.
#[derive(Debug, Clone, Copy)]
pub struct DufloMooreConstant {
    pub c: f64,
    /// Largest deviation of the orthogonality sum from 1 observed during
    /// the internal spot check.
    pub verification_residual: f64,
}

impl DufloMooreConstant {
    /// The formal degree `c²`.
    pub fn formal_degree(&self) -> f64 {
        self.c * self.c
    }
}

/// Computes the Duflo–Moore constant of an irreducible representation.
///
/// `c = sqrt(dim/|G|)` is verified by substituting `C = cI` into
/// `Σ_g |⟨Cv, U_g u⟩|² = ‖u‖²‖v‖²` for seeded random unit pairs; the
/// sum is phase-insensitive, so projective representations need no
/// special handling.
pub fn duflo_moore(
    group: &FiniteGroup,
    rep: &Representation,
    tol: f64,
) -> Result<DufloMooreConstant> {
    let commutant = intertwiners(group, rep, rep, tol)?;
    if commutant.len() != 1 {
        return Err(Error::ReducibleRepresentation {
            commutant_dim: commutant.len(),
        });
    }
    let d = rep.dim() as f64;
    let c = (d / group.order() as f64).sqrt();
    let mut rng = ChaCha12Rng::seed_from_u64(0xD0F1_0000);
    let mut residual = 0.0f64;
    for _ in 0..8 {
        let u = random_unit_vector(rep.dim(), &mut rng);
        let v = random_unit_vector(rep.dim(), &mut rng);
        let sum: f64 = group
            .elements()
            .map(|g| {
                let ug_u = rep.matrix(g) * &u;
                let inner: Complex64 = ug_u.iter().zip(v.iter()).map(|(x, y)| y.conj() * x).sum();
                inner.norm_sqr()
            })
            .sum();
        residual = residual.max((c * c * sum - 1.0).abs());
    }
    if residual > tol.max(1e-12) * 100.0 {
        return Err(Error::InvalidRepresentation(format!(
            "orthogonality relation fails: residual {residual:.3e}; representation data is inconsistent"
        )));
    }
    Ok(DufloMooreConstant {
        c,
        verification_residual: residual,
    })
}

/// The imprimitivity system induced by a representation `σ` of a
/// subgroup `H ≤ G`.
///
/// Lives on the function space `ℂ^{|G|} ⊗ V` with basis ordered
/// lexicographically (group element slow, `V`-basis fast). `projector`
/// is the averaging projection onto the equivariant subspace `H^σ`,
/// `basis` an orthonormal basis of its range, `rep` the restriction of
/// the translation representation and `projections` the restricted
/// position projections, one per point of `G/H`.
#[derive(Debug, Clone)]
pub struct InducedSystem {
    pub dim_v: usize,
    pub ambient_dim: usize,
    pub projector: CMatrix,
    pub basis: CMatrix,
    pub rep: Representation,
    pub projections: Vec<CMatrix>,
    pub outcomes: CosetSpace,
}

impl InducedSystem {
    pub fn induced_dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// Induces `σ` from `H` to `G`.
///
/// `sigma` must be an ordinary representation of the subgroup realized
/// as its own group in ascending-label order (see
/// [`FiniteGroup::subgroup_group`]).
pub fn induce(
    group: &FiniteGroup,
    subgroup: &[usize],
    sigma: &Representation,
) -> Result<InducedSystem> {
    let (h_group, embedding) = group.subgroup_group(subgroup)?;
    if sigma.len() != h_group.order() {
        return Err(Error::DimensionMismatch(format!(
            "sigma covers {} elements, subgroup has order {}",
            sigma.len(),
            h_group.order()
        )));
    }
    if sigma.multiplier().map(|m| !m.is_trivial()).unwrap_or(false) {
        return Err(Error::InvalidRepresentation(
            "induction is implemented for ordinary sigma only".into(),
        ));
    }
    let outcomes = coset_space(group, subgroup)?;
    let n_g = group.order();
    let dim_v = sigma.dim();
    let ambient = n_g * dim_v;
    let h_order = embedding.len() as f64;

    // [Π f](g) = (1/|H|) Σ_h σ_h f(gh):
    // Π[(g,α),(g',β)] = (1/|H|) [σ_{g⁻¹g'}]_{αβ} when g⁻¹g' ∈ H.
    let mut projector = CMatrix::zeros(ambient, ambient);
    for g in group.elements() {
        for (h_idx, &h_parent) in embedding.iter().enumerate() {
            let gp = group.mul(g, h_parent);
            let sig = sigma.matrix(h_idx);
            for alpha in 0..dim_v {
                for beta in 0..dim_v {
                    projector[(g * dim_v + alpha, gp * dim_v + beta)] +=
                        sig[(alpha, beta)] / h_order;
                }
            }
        }
    }

    let (vals, vecs) = eigh(&projector);
    let kept: Vec<usize> = (0..ambient).filter(|&i| vals[i] > 0.5).collect();
    let induced_dim = kept.len();
    if induced_dim != outcomes.num_points() * dim_v {
        return Err(Error::InvalidRepresentation(format!(
            "induced space has dimension {induced_dim}, expected {}",
            outcomes.num_points() * dim_v
        )));
    }
    let basis = CMatrix::from_fn(ambient, induced_dim, |i, j| vecs[(i, kept[j])]);

    // translation representation restricted to the range of Π
    let mut matrices = Vec::with_capacity(n_g);
    for g in group.elements() {
        let mut ambient_l = CMatrix::zeros(ambient, ambient);
        for b in group.elements() {
            let a = group.mul(g, b);
            for alpha in 0..dim_v {
                ambient_l[(a * dim_v + alpha, b * dim_v + alpha)] = Complex64::ONE;
            }
        }
        matrices.push(basis.adjoint() * ambient_l * &basis);
    }
    let rep = Representation::new(matrices, None)?;

    let mut projections = Vec::with_capacity(outcomes.num_points());
    for x in 0..outcomes.num_points() {
        let mut ambient_p = CMatrix::zeros(ambient, ambient);
        for g in group.elements() {
            if outcomes.point_of(g) == x {
                for alpha in 0..dim_v {
                    let idx = g * dim_v + alpha;
                    ambient_p[(idx, idx)] = Complex64::ONE;
                }
            }
        }
        projections.push(basis.adjoint() * ambient_p * &basis);
    }

    Ok(InducedSystem {
        dim_v,
        ambient_dim: ambient,
        projector,
        basis,
        rep,
        projections,
        outcomes,
    })
}

/// Lifts a projective representation to an ordinary one on the central
/// extension, `Ũ(g,z) = z⁻¹ U(g)`.
///
/// Ordinary input is treated as projective with the trivial multiplier,
/// producing the extension by `Z_1 ≅ {1}`.
pub fn lift_projective(
    group: &FiniteGroup,
    rep: &Representation,
) -> Result<(CentralExtensionGroup, Representation)> {
    if rep.len() != group.order() {
        return Err(Error::DimensionMismatch(
            "representation does not match the group".into(),
        ));
    }
    let multiplier = rep
        .multiplier()
        .cloned()
        .unwrap_or_else(|| Multiplier::trivial(group.order(), 1));
    let ext = central_extension(group, &multiplier)?;
    let n = ext.root_order;
    let matrices = ext
        .group
        .elements()
        .map(|x| {
            let g = ext.project(x);
            let z = ext.phase_exponent(x);
            rep.matrix(g) * root_of_unity(n, z).conj()
        })
        .collect();
    let lifted = Representation::new(matrices, None)?;
    Ok((ext, lifted))
}

/// Builds `e_i ⊙ e_j` as a `dim×dim` matrix unit (convenience shared by
/// tests and fixtures).
pub fn rank_one_unit(dim: usize, i: usize, j: usize) -> CMatrix {
    numkernel::rank_one(&basis_vector(dim, i), &basis_vector(dim, j))
}

/// Matrix unit accessor mirroring the `E_{ij}` notation.
pub fn e_ij(dim: usize, i: usize, j: usize) -> CMatrix {
    matrix_unit(dim, i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::weyl_multiplier;
    use crate::numkernel::c;

    fn pauli_rep() -> (FiniteGroup, Representation) {
        // (a,b) ↦ X^a Z^b on Z2×Z2 with the Weyl multiplier
        let group = FiniteGroup::product_of_cyclics(&[2, 2]);
        let x = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let z = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let mats = vec![
            identity(2),
            z.clone(),
            x.clone(),
            &x * &z,
        ];
        let rep = Representation::new(mats, Some(weyl_multiplier(2))).unwrap();
        (group, rep)
    }

    #[test]
    fn trivial_rep_validates() {
        let g = FiniteGroup::cyclic(5);
        let rep = Representation::trivial(5);
        let report = validate_rep(&g, &rep, 1e-9).unwrap();
        assert!(report.valid(1e-12));
    }

    #[test]
    fn regular_rep_validates() {
        for g in [FiniteGroup::dihedral(4), FiniteGroup::quaternion()] {
            let rep = Representation::regular(&g);
            let report = validate_rep(&g, &rep, 1e-9).unwrap();
            assert!(report.valid(1e-12));
        }
    }

    #[test]
    fn pauli_rep_is_projective_not_ordinary() {
        let (group, rep) = pauli_rep();
        let report = validate_rep(&group, &rep, 1e-9).unwrap();
        assert!(report.valid(1e-12), "projective law must hold exactly");

        let untwisted = Representation::new(rep.matrices().to_vec(), None).unwrap();
        let report = validate_rep(&group, &untwisted, 1e-9).unwrap();
        // XZ = -ZX forces the multiplier
        assert!(report.max_homomorphism_residual > 1.0);
    }

    #[test]
    fn schur_self_intertwiners_of_irreducible() {
        let (group, rep) = pauli_rep();
        let basis = intertwiners(&group, &rep, &rep, 1e-9).unwrap();
        assert_eq!(basis.len(), 1);
        // the single element is I/sqrt(d) up to phase
        let x = &basis[0];
        let off = max_abs(&(x - identity(2) * x[(0, 0)]));
        assert!(off < 1e-10);
        assert!((x[(0, 0)].norm() - 1.0 / 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn trivial_into_regular_has_one_intertwiner() {
        let g = FiniteGroup::cyclic(4);
        let basis = intertwiners(&g, &Representation::trivial(4), &Representation::regular(&g), 1e-9)
            .unwrap();
        assert_eq!(basis.len(), 1);
        // the invariant vector is the uniform one
        let col = &basis[0];
        let first = col[(0, 0)];
        assert!((0..4).all(|i| (col[(i, 0)] - first).norm() < 1e-10));
    }

    #[test]
    fn inequivalent_characters_have_no_intertwiners() {
        let g = FiniteGroup::cyclic(3);
        let omega = root_of_unity(3, 1);
        let chi1 = Representation::one_dim(vec![Complex64::ONE, omega, omega * omega]);
        let chi2 = Representation::one_dim(vec![Complex64::ONE, omega * omega, omega]);
        assert!(intertwiners(&g, &chi1, &chi2, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn commutant_of_abelian_regular_rep_has_group_dimension() {
        let g = FiniteGroup::product_of_cyclics(&[2, 2]);
        let reg = Representation::regular(&g);
        let basis = intertwiners(&g, &reg, &reg, 1e-9).unwrap();
        assert_eq!(basis.len(), g.order());
    }

    #[test]
    fn duflo_moore_trivial_group() {
        let g = FiniteGroup::trivial();
        let dm = duflo_moore(&g, &Representation::trivial(1), 1e-9).unwrap();
        assert!((dm.c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duflo_moore_pauli_is_inverse_sqrt_two() {
        let (group, rep) = pauli_rep();
        // brute-force oracle: Σ_g |⟨v, U_g u⟩|² = 2 for unit u, v
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..5 {
            let u = random_unit_vector(2, &mut rng);
            let v = random_unit_vector(2, &mut rng);
            let sum: f64 = group
                .elements()
                .map(|g| {
                    let ug_u = rep.matrix(g) * &u;
                    let inner: Complex64 =
                        ug_u.iter().zip(v.iter()).map(|(x, y)| y.conj() * x).sum();
                    inner.norm_sqr()
                })
                .sum();
            assert!((sum - 2.0).abs() < 1e-10, "oracle sum = {sum}");
        }
        let dm = duflo_moore(&group, &rep, 1e-9).unwrap();
        assert!((dm.c - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(dm.verification_residual < 1e-10);
    }

    #[test]
    fn duflo_moore_z3_character() {
        let g = FiniteGroup::cyclic(3);
        let omega = root_of_unity(3, 1);
        let chi = Representation::one_dim(vec![Complex64::ONE, omega, omega * omega]);
        // |⟨v, U_g u⟩|² is constant = |u|²|v|² for 1-dim reps
        let dm = duflo_moore(&g, &chi, 1e-9).unwrap();
        assert!((dm.c - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn duflo_moore_rejects_reducible() {
        let g = FiniteGroup::cyclic(2);
        let rep = Representation::identity_rep(2, 2);
        assert!(matches!(
            duflo_moore(&g, &rep, 1e-9),
            Err(Error::ReducibleRepresentation { commutant_dim: 4 })
        ));
    }

    #[test]
    fn induce_from_whole_group_trivial_sigma() {
        let g = FiniteGroup::cyclic(3);
        let all: Vec<usize> = g.elements().collect();
        let sys = induce(&g, &all, &Representation::trivial(3)).unwrap();
        assert_eq!(sys.induced_dim(), 1);
        assert_eq!(sys.projections.len(), 1);
        assert!(max_abs(&(&sys.projections[0] - identity(1))) < 1e-10);
    }

    #[test]
    fn induce_from_trivial_subgroup_is_regular() {
        let g = FiniteGroup::cyclic(4);
        let sys = induce(&g, &[0], &Representation::trivial(1)).unwrap();
        assert_eq!(sys.induced_dim(), 4);
        // Π = I, L^σ is the left regular representation, P^σ coordinate projectors
        assert!(max_abs(&(&sys.projector - identity(4))) < 1e-10);
        let reg = Representation::regular(&g);
        for g_el in g.elements() {
            // basis may permute/rephase coordinates; compare via conjugation
            let a = sys.basis.adjoint() * reg.matrix(g_el) * &sys.basis;
            assert!(max_abs(&(a - sys.rep.matrix(g_el))) < 1e-10);
        }
        let sum: CMatrix = sys
            .projections
            .iter()
            .fold(CMatrix::zeros(4, 4), |acc, p| acc + p);
        assert!(max_abs(&(sum - identity(4))) < 1e-10);
    }

    #[test]
    fn induce_sign_rep_of_z2_in_itself() {
        let g = FiniteGroup::cyclic(2);
        let all: Vec<usize> = g.elements().collect();
        let sign = Representation::one_dim(vec![Complex64::ONE, -Complex64::ONE]);
        let sys = induce(&g, &all, &sign).unwrap();
        // H^σ is the odd functions: one dimension
        assert_eq!(sys.induced_dim(), 1);
        let q = &sys.basis;
        // basis vector has components (t, -t)
        assert!((q[(0, 0)] + q[(1, 0)]).norm() < 1e-10);
    }

    #[test]
    fn induced_system_invariants() {
        // covariance L^σ_g P^σ(x) L^σ_g† = P^σ(g·x), exhaustively
        let g = FiniteGroup::dihedral(4);
        let (h_group, _emb) = g.subgroup_group(&[0, 2]).unwrap();
        let sign = Representation::one_dim(vec![Complex64::ONE, -Complex64::ONE]);
        assert_eq!(h_group.order(), 2);
        let sys = induce(&g, &[0, 2], &sign).unwrap();
        let pi = &sys.projector;
        assert!(max_abs(&(pi * pi - pi)) < 1e-12, "projector idempotence");
        assert!(max_abs(&(pi - pi.adjoint())) < 1e-12, "projector self-adjointness");
        assert_eq!(sys.induced_dim(), sys.outcomes.num_points() * sys.dim_v);
        let report = validate_rep(&g, &sys.rep, 1e-9).unwrap();
        assert!(report.valid(1e-9));
        let dim = sys.induced_dim();
        let sum: CMatrix = sys
            .projections
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, p| acc + p);
        assert!(max_abs(&(sum - identity(dim))) < 1e-9);
        for g_el in g.elements() {
            for x in 0..sys.outcomes.num_points() {
                let lhs = sys.rep.matrix(g_el) * &sys.projections[x] * sys.rep.matrix(g_el).adjoint();
                let rhs = &sys.projections[sys.outcomes.act(g_el, x)];
                assert!(max_abs(&(lhs - rhs)) < 1e-9);
            }
        }
    }

    #[test]
    fn induce_two_dimensional_sigma_from_rotations() {
        // H = rotation subgroup of the order-8 dihedral group, sigma the
        // direct sum of the i and -i characters of Z4
        let g = FiniteGroup::dihedral(4);
        let subgroup: Vec<usize> = (0..4).collect();
        let i4 = |k: u32| root_of_unity(4, k);
        let sigma = Representation::new(
            (0..4u32)
                .map(|k| {
                    CMatrix::from_fn(2, 2, |r, c| {
                        if r != c {
                            Complex64::ZERO
                        } else if r == 0 {
                            i4(k)
                        } else {
                            i4(4 - k % 4)
                        }
                    })
                })
                .collect(),
            None,
        )
        .unwrap();
        let sys = induce(&g, &subgroup, &sigma).unwrap();
        assert_eq!(sys.induced_dim(), 2 * 2, "|Ω| = 2 cosets, dim V = 2");
        let report = validate_rep(&g, &sys.rep, 1e-9).unwrap();
        assert!(report.valid(1e-9));
        for g_el in g.elements() {
            for x in 0..sys.outcomes.num_points() {
                let lhs =
                    sys.rep.matrix(g_el) * &sys.projections[x] * sys.rep.matrix(g_el).adjoint();
                let rhs = &sys.projections[sys.outcomes.act(g_el, x)];
                assert!(max_abs(&(lhs - rhs)) < 1e-9);
            }
        }
    }

    #[test]
    fn lift_projective_round_trip() {
        let (group, rep) = pauli_rep();
        let (ext, lifted) = lift_projective(&group, &rep).unwrap();
        let report = validate_rep(&ext.group, &lifted, 1e-9).unwrap();
        assert!(report.valid(1e-12), "lift must be an ordinary representation");
        // Ũ(g, 1) = U(g)
        for g in group.elements() {
            let x = ext.label(g, 0);
            assert!(max_abs(&(lifted.matrix(x) - rep.matrix(g))) < 1e-12);
        }
        // irreducibility transfers
        let basis = intertwiners(&ext.group, &lifted, &lifted, 1e-9).unwrap();
        assert_eq!(basis.len(), 1);
    }

    #[test]
    fn reducible_projective_rep_lifts_to_reducible_rep() {
        // two copies of the Weyl pair: commutant dimension 4 on both sides
        let (group, rep) = pauli_rep();
        let doubled = Representation::new(
            rep.matrices()
                .iter()
                .map(|u| {
                    let mut m = CMatrix::zeros(4, 4);
                    m.view_mut((0, 0), (2, 2)).copy_from(u);
                    m.view_mut((2, 2), (2, 2)).copy_from(u);
                    m
                })
                .collect(),
            rep.multiplier().cloned(),
        )
        .unwrap();
        let commutant = intertwiners(&group, &doubled, &doubled, 1e-9).unwrap();
        assert_eq!(commutant.len(), 4);
        let (ext, lifted) = lift_projective(&group, &doubled).unwrap();
        let lifted_commutant = intertwiners(&ext.group, &lifted, &lifted, 1e-9).unwrap();
        assert_eq!(lifted_commutant.len(), 4, "irreducibility transfers both ways");
    }

    #[test]
    fn lift_with_trivial_multiplier_is_a_direct_product_rep() {
        // m = 1 with root order 3: the lift lives on G x Z_3 and restricts
        // to U at phase 0
        let g = FiniteGroup::cyclic(2);
        let sign = Representation::new(
            vec![identity(1), CMatrix::from_element(1, 1, c(-1.0, 0.0))],
            Some(Multiplier::trivial(2, 3)),
        )
        .unwrap();
        let (ext, lifted) = lift_projective(&g, &sign).unwrap();
        assert_eq!(ext.group.order(), 6);
        let report = validate_rep(&ext.group, &lifted, 1e-9).unwrap();
        assert!(report.valid(1e-12));
        for g_el in g.elements() {
            assert!(max_abs(&(lifted.matrix(ext.label(g_el, 0)) - sign.matrix(g_el))) < 1e-12);
        }
    }

    #[test]
    fn lift_of_trivial_group_character() {
        let g = FiniteGroup::trivial();
        let m = Multiplier::trivial(1, 2);
        let rep = Representation::new(vec![identity(1)], Some(m)).unwrap();
        let (ext, lifted) = lift_projective(&g, &rep).unwrap();
        assert_eq!(ext.group.order(), 2);
        // Ũ(e, z) = z^{-1}: the faithful character of Z2
        assert!((lifted.matrix(1)[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-12);
    }
}
