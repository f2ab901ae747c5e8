//! Builtin catalog of groups, representations and instruments.
//!
//! The catalog spans ordinary and projective representations, trivial
//! and nontrivial stabilizer subgroups, abelian and non-abelian groups:
//!
//! | name               | group        | dim U | H          |
//! |--------------------|--------------|-------|------------|
//! | `trivial`          | {e}          | 1     | {e}        |
//! | `z3-character`     | Z₃           | 1     | {e}        |
//! | `dihedral4-center` | D₄ (order 8) | 2     | center     |
//! | `quaternion-center`| Q₈           | 2     | {±1}       |
//! | `pauli`            | Z₂×Z₂ (proj) | 2     | {e}        |
//! | `weyl3`            | Z₃×Z₃ (proj) | 3     | {e}        |
//!
//! Instrument fixtures are named `<base>-uniform` and `<base>-lueders`
//! after the canonical intertwiners they are built from.

use num_complex::Complex64;

use crate::covariant::{CanonicalB, CovariantSystem};
use crate::groups::{root_of_unity, weyl_multiplier, FiniteGroup};
use crate::instruments::Instrument;
use crate::numkernel::{identity, CMatrix};
use crate::reps::Representation;
use crate::{Error, Result};

/// A named (group, representation, subgroup) triple from the catalog.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub group: FiniteGroup,
    pub rep: Representation,
    pub subgroup: Vec<usize>,
}

impl Fixture {
    /// Assembles the covariant system for this fixture.
    pub fn system(&self, tol: f64) -> Result<CovariantSystem> {
        CovariantSystem::new(self.group.clone(), self.rep.clone(), self.subgroup.clone(), tol)
    }
}

/// Names of the base fixtures, in catalog order.
pub fn base_names() -> &'static [&'static str] {
    &[
        "trivial",
        "z3-character",
        "dihedral4-center",
        "quaternion-center",
        "pauli",
        "weyl3",
    ]
}

/// The fixtures used by the full verification suites: every entry has a
/// nontrivial outcome space and spans the ordinary/projective and
/// H-trivial/nontrivial corners.
pub fn verification_names() -> &'static [&'static str] {
    &["dihedral4-center", "quaternion-center", "pauli", "weyl3"]
}

/// The discrete Weyl (shift/clock) projective representation of
/// `Z_d × Z_d`: `(a,b) ↦ X^a Z^b` with `X` the cyclic shift and
/// `Z = diag(1, ω, …, ω^{d-1})`.
pub fn weyl_system(d: usize) -> (FiniteGroup, Representation) {
    assert!(d >= 2);
    let group = FiniteGroup::product_of_cyclics(&[d, d]);
    let mut x = CMatrix::zeros(d, d);
    for k in 0..d {
        x[((k + 1) % d, k)] = Complex64::ONE;
    }
    let z = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            root_of_unity(d as u32, i as u32)
        } else {
            Complex64::ZERO
        }
    });
    let mats = (0..d * d)
        .map(|label| {
            let (a, b) = (label / d, label % d);
            let mut m = identity(d);
            for _ in 0..a {
                m = &x * m;
            }
            for _ in 0..b {
                m *= &z;
            }
            m
        })
        .collect();
    let rep = Representation::new(mats, Some(weyl_multiplier(d))).expect("weyl data is square");
    (group, rep)
}

/// The two-dimensional irreducible representation of the dihedral group
/// of order 8, with rotations diagonal.
pub fn dihedral4_rep() -> (FiniteGroup, Representation) {
    let group = FiniteGroup::dihedral(4);
    let i4 = |k: usize| root_of_unity(4, (k % 4) as u32);
    let mats = (0..8)
        .map(|g| {
            if g < 4 {
                CMatrix::from_fn(2, 2, |r, c| {
                    if r != c {
                        Complex64::ZERO
                    } else if r == 0 {
                        i4(g)
                    } else {
                        i4(4 - g % 4)
                    }
                })
            } else {
                let b = g - 4;
                let mut m = CMatrix::zeros(2, 2);
                m[(0, 1)] = i4(4 - b % 4);
                m[(1, 0)] = i4(b);
                m
            }
        })
        .collect();
    let rep = Representation::new(mats, None).expect("dihedral data is square");
    (group, rep)
}

/// The two-dimensional irreducible representation of the quaternion
/// group: `i ↦ iσ_z`, `j ↦ [[0,1],[-1,0]]`, `k ↦ iσ_x`.
pub fn quaternion_rep() -> (FiniteGroup, Representation) {
    let group = FiniteGroup::quaternion();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let units = [
        CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]),
        CMatrix::from_row_slice(2, 2, &[c(0., 1.), c(0., 0.), c(0., 0.), c(0., -1.)]),
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)]),
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., 1.), c(0., 1.), c(0., 0.)]),
    ];
    let mats = (0..8)
        .map(|g| {
            let base = units[g % 4].clone();
            if g >= 4 {
                -base
            } else {
                base
            }
        })
        .collect();
    let rep = Representation::new(mats, None).expect("quaternion data is square");
    (group, rep)
}

/// Looks up a base fixture by name.
pub fn fixture(name: &str) -> Result<Fixture> {
    let (group, rep, subgroup) = match name {
        "trivial" => {
            let g = FiniteGroup::trivial();
            (g, Representation::trivial(1), vec![0])
        }
        "z3-character" => {
            let g = FiniteGroup::cyclic(3);
            let omega = root_of_unity(3, 1);
            let rep = Representation::one_dim(vec![Complex64::ONE, omega, omega * omega]);
            (g, rep, vec![0])
        }
        "dihedral4-center" => {
            let (g, rep) = dihedral4_rep();
            let center = g.center();
            (g, rep, center)
        }
        "quaternion-center" => {
            let (g, rep) = quaternion_rep();
            let center = g.center();
            (g, rep, center)
        }
        "pauli" => {
            let (g, rep) = weyl_system(2);
            (g, rep, vec![0])
        }
        "weyl3" => {
            let (g, rep) = weyl_system(3);
            (g, rep, vec![0])
        }
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    Ok(Fixture {
        name: name.to_string(),
        group,
        rep,
        subgroup,
    })
}

/// Looks up an instrument fixture (`<base>-uniform` or `<base>-lueders`)
/// or falls back to `<base>` with the Lüders intertwiner.
pub fn fixture_instrument(name: &str, tol: f64) -> Result<(Fixture, Instrument)> {
    let (base, kind) = if let Some(base) = name.strip_suffix("-uniform") {
        (base, CanonicalB::Uniform)
    } else if let Some(base) = name.strip_suffix("-lueders") {
        (base, CanonicalB::Lueders)
    } else {
        (name, CanonicalB::Lueders)
    };
    let f = fixture(base)?;
    let sys = f.system(tol)?;
    let b = sys.canonical_b(kind);
    let inst = sys.instrument_from_b(&b, tol.max(1e-9))?;
    Ok((f, inst))
}

/// All instrument-fixture names (`<base>-uniform`, `<base>-lueders`).
pub fn instrument_names() -> Vec<String> {
    base_names()
        .iter()
        .flat_map(|b| [format!("{b}-uniform"), format!("{b}-lueders")])
        .collect()
}
