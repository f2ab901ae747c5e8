//! Cross-module consistency checks that tie the construction, the
//! CP-map correspondence and the dilation together.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use covins_core::covariant::CanonicalB;
use covins_core::dilation::build_dilation;
use covins_core::fixtures;
use covins_core::groups::coset_space;
use covins_core::instruments::{
    instrument_statistics, random_instrument, twirl, validate_instrument, Instrument,
};
use covins_core::numkernel::{self, identity, max_abs, CMatrix};
use covins_core::reps::lift_projective;

/// For `H = {e}` and any unit `B`, the orbit Kraus family resolves the
/// identity: `Σ_g c² (U_g B U_g†)† (U_g B U_g†) = I`.
#[test]
fn orbit_kraus_families_resolve_the_identity() {
    for name in ["pauli", "weyl3", "z3-character"] {
        let f = fixtures::fixture(name).unwrap();
        let sys = f.system(1e-9).unwrap();
        let c2 = sys.duflo_moore_constant().formal_degree();
        let d = sys.dim();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let m = numkernel::random_gaussian(d, d, &mut rng);
        let b = m.clone().unscale(numkernel::hs_norm(&m));
        let mut sum = CMatrix::zeros(d, d);
        for g in f.group.elements() {
            let u = f.rep.matrix(g);
            let k = u * &b * u.adjoint();
            sum += k.adjoint() * k * Complex64::new(c2, 0.0);
        }
        assert!(
            max_abs(&(sum - identity(d))) < 1e-9,
            "fixture {name}: Kraus normalization"
        );
    }
}

/// Probabilities of a valid instrument sum to one and posteriors are
/// states, for random instruments and random input states.
#[test]
fn statistics_are_normalized_for_random_instruments() {
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    for name in ["pauli", "dihedral4-center"] {
        let f = fixtures::fixture(name).unwrap();
        let outcomes = coset_space(&f.group, &f.subgroup).unwrap();
        for _ in 0..5 {
            let inst = random_instrument(f.rep.dim(), &outcomes, &mut rng).unwrap();
            assert!(validate_instrument(&inst, 1e-9).valid(1e-9));
            let rho = numkernel::random_density(f.rep.dim(), &mut rng);
            let stats = instrument_statistics(&inst, &rho, 1e-9).unwrap();
            let total: f64 = stats.probabilities.iter().sum();
            assert!((total - 1.0).abs() < 1e-9, "fixture {name}: total {total}");
            for post in stats.posteriors.iter().flatten() {
                assert!((post.trace().re - 1.0).abs() < 1e-9);
                let (vals, _) = numkernel::eigh(post);
                assert!(vals.first().copied().unwrap_or(0.0) > -1e-9);
            }
        }
    }
}

/// The uniform-randomization instrument leaves every state untouched
/// and has flat outcome probabilities.
#[test]
fn uniform_randomization_statistics() {
    let (_, inst) = fixtures::fixture_instrument("pauli-uniform", 1e-9).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let rho = numkernel::random_density(2, &mut rng);
    let stats = instrument_statistics(&inst, &rho, 1e-9).unwrap();
    for (p, post) in stats.probabilities.iter().zip(stats.posteriors.iter()) {
        assert!((p - 0.25).abs() < 1e-12);
        assert!(max_abs(&(post.as_ref().unwrap() - &rho)) < 1e-12);
    }
}

/// The dilation of a projective instrument coincides with the dilation
/// of its lift to the central extension: the raw translation action
/// cancels the phases slotwise, so the two constructions produce the
/// same auxiliary representation.
#[test]
fn projective_dilation_equals_lifted_dilation() {
    for name in ["pauli", "weyl3"] {
        let f = fixtures::fixture(name).unwrap();
        let sys = f.system(1e-9).unwrap();
        let inst = sys
            .instrument_from_b(&sys.canonical_b(CanonicalB::Lueders), 1e-9)
            .unwrap();
        let native = build_dilation(&f.group, &f.rep, &inst, 1e-9).unwrap();

        let (ext, lifted_rep) = lift_projective(&f.group, &f.rep).unwrap();
        let n = ext.root_order as usize;
        let subgroup_m: Vec<usize> = f
            .subgroup
            .iter()
            .flat_map(|&h| (0..n).map(move |z| h * n + z))
            .collect();
        let lifted_outcomes = coset_space(&ext.group, &subgroup_m).unwrap();
        let chois = (0..lifted_outcomes.num_points())
            .map(|xt| {
                let base = inst
                    .outcomes()
                    .point_of(ext.project(lifted_outcomes.representative(xt)));
                inst.choi(base).clone()
            })
            .collect();
        let lifted_inst = Instrument::new(inst.dim(), lifted_outcomes, chois).unwrap();
        let lifted = build_dilation(&ext.group, &lifted_rep, &lifted_inst, 1e-9).unwrap();

        assert_eq!(native.dim_k, lifted.dim_k, "{name}");
        // D̃(g, z) must be independent of z and equal the native D(g)
        for g in f.group.elements() {
            for z in 0..n as u32 {
                let lab = ext.label(g, z);
                assert!(
                    max_abs(&(lifted.d_rep.matrix(lab) - native.d_rep.matrix(g))) < 1e-9,
                    "{name}: D differs at ({g},{z})"
                );
            }
        }
        for x in 0..inst.num_outcomes() {
            assert!(max_abs(&(&lifted.projections[x] - &native.projections[x])) < 1e-9);
        }
        assert!(max_abs(&(&lifted.w - &native.w)) < 1e-9);
    }
}

/// Twirling already-covariant instruments is the identity, including
/// the projective fixtures.
#[test]
fn twirl_fixes_covariant_instruments() {
    for name in fixtures::verification_names() {
        let (f, inst) = fixtures::fixture_instrument(&format!("{name}-uniform"), 1e-9).unwrap();
        let twirled = twirl(&f.group, &inst, &f.rep).unwrap();
        for x in 0..inst.num_outcomes() {
            assert!(
                max_abs(&(twirled.choi(x) - inst.choi(x))) < 1e-10,
                "fixture {name}, outcome {x}"
            );
        }
    }
}

/// Full chain on a twirled random instrument: decompose to Φ, rebuild
/// through B, dilate, and reconcile every route.
#[test]
fn full_pipeline_on_twirled_random_instruments() {
    for name in fixtures::verification_names() {
        let f = fixtures::fixture(name).unwrap();
        let sys = f.system(1e-9).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(0xCC);
        let raw = random_instrument(sys.dim(), sys.outcomes(), &mut rng).unwrap();
        let inst = twirl(&f.group, &raw, &f.rep).unwrap();

        let phi = sys.phi_from_instrument(&inst, 1e-8).unwrap();
        let b = sys.b_from_phi(&phi, 99, 1e-8).unwrap();
        let via_b = sys.instrument_from_b(&b, 1e-7).unwrap();
        let via_phi = sys.instrument_from_phi(&phi, 1e-8).unwrap();
        for x in 0..inst.num_outcomes() {
            assert!(
                max_abs(&(via_b.choi(x) - inst.choi(x))) < 1e-8,
                "fixture {name}: B route deviates at outcome {x}"
            );
            assert!(
                max_abs(&(via_phi.choi(x) - inst.choi(x))) < 1e-8,
                "fixture {name}: Φ route deviates at outcome {x}"
            );
        }

        let dil = build_dilation(&f.group, &f.rep, &inst, 1e-9).unwrap();
        let report =
            covins_core::dilation::verify_dilation(&f.group, &f.rep, &inst, &dil, 1e-9).unwrap();
        assert!(report.valid(1e-9), "fixture {name}: {report:?}");
    }
}

/// A stabilizer on which the representation is not scalar: the rotation
/// subgroup of the order-8 dihedral group, where the restriction splits
/// into two distinct characters. This drives the nontrivial branch of
/// the Stinespring-action solve and the isotypic embedding.
#[test]
fn pipeline_with_non_scalar_stabilizer_restriction() {
    let f = fixtures::fixture("dihedral4-center").unwrap();
    let rotations: Vec<usize> = (0..4).collect();
    let sys = covins_core::covariant::CovariantSystem::new(
        f.group.clone(),
        f.rep.clone(),
        rotations,
        1e-9,
    )
    .unwrap();
    assert_eq!(sys.outcomes().num_points(), 2);
    let basis = sys.admissible_b_basis(1e-9).unwrap();
    assert_eq!(basis.len(), 16, "8 + 8 copies of the two characters");

    let mut rng = ChaCha12Rng::seed_from_u64(0xD4);
    // forward: random admissible B give valid covariant instruments
    for _ in 0..10 {
        let b = sys.random_admissible_b(&basis, &mut rng);
        let inst = sys.instrument_from_b(&b, 1e-8).unwrap();
        assert!(validate_instrument(&inst, 1e-9).valid(1e-9));
        let cov =
            covins_core::instruments::check_covariance(sys.group(), &inst, sys.rep(), 1e-9)
                .unwrap();
        assert!(cov.max_residual <= 1e-9);
    }
    // converse: twirled random instruments round trip through Φ and B
    for trial in 0..5 {
        let raw = random_instrument(2, sys.outcomes(), &mut rng).unwrap();
        let inst = twirl(sys.group(), &raw, sys.rep()).unwrap();
        let phi = sys.phi_from_instrument(&inst, 1e-8).unwrap();
        let b = sys.b_from_phi(&phi, 500 + trial, 1e-8).unwrap();
        let rebuilt = sys.instrument_from_b(&b, 1e-7).unwrap();
        for x in 0..inst.num_outcomes() {
            assert!(
                max_abs(&(rebuilt.choi(x) - inst.choi(x))) < 1e-8,
                "trial {trial}, outcome {x}"
            );
        }
    }
    // and the dilation machinery accepts the same system
    let b = sys.random_admissible_b(&basis, &mut rng);
    let inst = sys.instrument_from_b(&b, 1e-8).unwrap();
    let dil = build_dilation(sys.group(), sys.rep(), &inst, 1e-9).unwrap();
    let report =
        covins_core::dilation::verify_dilation(sys.group(), sys.rep(), &inst, &dil, 1e-9)
            .unwrap();
    assert!(report.valid(1e-9), "{report:?}");
}

/// Choi spectra straddling the rank cutoff stay within the round-trip
/// tolerance.
#[test]
fn near_degenerate_cp_maps_round_trip() {
    for name in ["pauli", "weyl3"] {
        let sys = fixtures::fixture(name).unwrap().system(1e-9).unwrap();
        let d = sys.dim();
        let lueders = sys
            .phi_from_instrument(
                &sys.instrument_from_b(&sys.canonical_b(CanonicalB::Lueders), 1e-9)
                    .unwrap(),
                1e-9,
            )
            .unwrap();
        let uniform = sys
            .phi_from_instrument(
                &sys.instrument_from_b(&sys.canonical_b(CanonicalB::Uniform), 1e-9)
                    .unwrap(),
                1e-9,
            )
            .unwrap();
        for eps in [1e-4, 1e-6, 1e-8] {
            let phi = covins_core::covariant::NormalizedCPMap {
                choi: &lueders.choi * Complex64::new(1.0 - eps, 0.0)
                    + &uniform.choi * Complex64::new(eps, 0.0),
            };
            let b = sys.b_from_phi(&phi, 7, 1e-8).unwrap();
            let back = sys.phi_from_b(&b, 1e-7).unwrap();
            let err = max_abs(&(&back.choi - &phi.choi));
            assert!(err < 1e-9, "{name}, eps = {eps:.0e}: round trip {err:.2e}");
        }
        let _ = d;
    }
}

/// Non-minimal inputs to the uniqueness map are detected by dimension.
#[test]
fn isomorphism_rejects_non_minimal_dilations() {
    let (f, inst) = fixtures::fixture_instrument("pauli-uniform", 1e-9).unwrap();
    let sys = build_dilation(&f.group, &f.rep, &inst, 1e-9).unwrap();
    let r = sys.dim_k;
    let embed = |m: &CMatrix| {
        let mut out = CMatrix::zeros(r + 1, r + 1);
        out.view_mut((0, 0), (r, r)).copy_from(m);
        out
    };
    let mut projections: Vec<CMatrix> = sys.projections.iter().map(embed).collect();
    projections[0][(r, r)] = Complex64::ONE;
    let d_mats = f
        .group
        .elements()
        .map(|g| {
            let mut out = embed(sys.d_rep.matrix(g));
            out[(r, r)] = Complex64::ONE;
            out
        })
        .collect();
    let mut w = CMatrix::zeros((r + 1) * 2, 2);
    for alpha in 0..r {
        for h in 0..2 {
            for k in 0..2 {
                w[(alpha * 2 + h, k)] = sys.w[(alpha * 2 + h, k)];
            }
        }
    }
    let padded = covins_core::dilation::DilationSystem {
        dim_k: r + 1,
        d_rep: covins_core::reps::Representation::new(d_mats, None).unwrap(),
        projections,
        w,
    };
    let res = covins_core::dilation::dilation_isomorphism(
        &f.group, &f.rep, &inst, &sys, &padded, 1e-9,
    );
    assert!(
        matches!(res, Err(covins_core::Error::DimensionMismatch(_))),
        "{res:?}"
    );
}
