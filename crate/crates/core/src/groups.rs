//! Finite groups, coset spaces, multipliers and central extensions.
//!
//! Groups are stored as validated Cayley tables with element `0` as the
//! identity. The Haar measure is the counting measure (weight 1 per
//! element), every finite group is unimodular, and the invariant measure
//! on a left coset space `G/H` assigns weight `|H|` to each point so that
//! summing over the group factors through cosets exactly.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::{Error, Result};

/// A finite group presented by its Cayley table.
///
/// Element labels are `0..order`, with `0` the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    /// Flattened table, `cayley[a * order + b] = a∘b`.
    cayley: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub const IDENTITY: usize = 0;

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// The trivial one-element group.
    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs order >= 1");
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_cayley(table).expect("cyclic table is a group")
    }

    /// Dihedral group of order `2n`: labels `0..n` are rotations `r^a`,
    /// labels `n..2n` are reflections `s·r^a`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1, "dihedral group needs n >= 1");
        let order = 2 * n;
        let mut table = vec![vec![0usize; order]; order];
        for a in 0..n {
            for b in 0..n {
                // r^a r^b, r^a (s r^b) = s r^{b-a}, (s r^a) r^b, (s r^a)(s r^b) = r^{b-a}
                table[a][b] = (a + b) % n;
                table[a][n + b] = n + (b + n - a) % n;
                table[n + a][b] = n + (a + b) % n;
                table[n + a][n + b] = (b + n - a) % n;
            }
        }
        Self::from_cayley(table).expect("dihedral table is a group")
    }

    /// Quaternion group of order 8 with labels
    /// `0:1, 1:i, 2:j, 3:k, 4:-1, 5:-i, 6:-j, 7:-k`.
    pub fn quaternion() -> Self {
        // Unit quaternion product with sign tracked in label / 4.
        let base_mul = |a: usize, b: usize| -> (usize, bool) {
            // table over {1, i, j, k}: returns (unit, negate)
            match (a, b) {
                (0, x) => (x, false),
                (x, 0) => (x, false),
                (1, 1) => (0, true),
                (1, 2) => (3, false),
                (1, 3) => (2, true),
                (2, 1) => (3, true),
                (2, 2) => (0, true),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (3, 2) => (1, true),
                (3, 3) => (0, true),
                _ => unreachable!(),
            }
        };
        let mut table = vec![vec![0usize; 8]; 8];
        #[allow(clippy::needless_range_loop)]
        for a in 0..8 {
            for b in 0..8 {
                let (unit, neg) = base_mul(a % 4, b % 4);
                let sign = (a / 4 + b / 4) % 2 == 1;
                let neg = neg ^ sign;
                table[a][b] = unit + if neg { 4 } else { 0 };
            }
        }
        Self::from_cayley(table).expect("quaternion table is a group")
    }

    /// Direct product of cyclic groups `Z_{n_1} × … × Z_{n_k}`, labels in
    /// mixed radix with the first factor slow.
    pub fn product_of_cyclics(orders: &[usize]) -> Self {
        assert!(!orders.is_empty() && orders.iter().all(|&n| n >= 1));
        let total: usize = orders.iter().product();
        let decode = |mut x: usize| -> Vec<usize> {
            let mut digits = vec![0usize; orders.len()];
            for (slot, &n) in orders.iter().enumerate().rev() {
                digits[slot] = x % n;
                x /= n;
            }
            digits
        };
        let encode = |digits: &[usize]| -> usize {
            digits
                .iter()
                .zip(orders.iter())
                .fold(0usize, |acc, (&d, &n)| acc * n + d)
        };
        let table: Vec<Vec<usize>> = (0..total)
            .map(|a| {
                let da = decode(a);
                (0..total)
                    .map(|b| {
                        let db = decode(b);
                        let sum: Vec<usize> = da
                            .iter()
                            .zip(db.iter())
                            .zip(orders.iter())
                            .map(|((&x, &y), &n)| (x + y) % n)
                            .collect();
                        encode(&sum)
                    })
                    .collect()
            })
            .collect();
        Self::from_cayley(table).expect("product of cyclics is a group")
    }

    /// Builds and validates a group from an explicit Cayley table.
    pub fn from_cayley(table: Vec<Vec<usize>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::NotAGroup("empty Cayley table".into()));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (a, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::NotAGroup(format!(
                    "row {a} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for (b, &x) in row.iter().enumerate() {
                if x >= order {
                    return Err(Error::NotAGroup(format!(
                        "entry ({a},{b}) = {x} is out of range"
                    )));
                }
                flat.push(x);
            }
        }
        // identity laws for element 0
        for a in 0..order {
            if flat[a] != a || flat[a * order] != a {
                return Err(Error::NotAGroup(format!(
                    "element 0 is not a two-sided identity at element {a}"
                )));
            }
        }
        // inverses
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if flat[a * order + b] == 0 && flat[b * order + a] == 0 {
                    inverse[a] = b;
                    break;
                }
            }
            if inverse[a] == usize::MAX {
                return Err(Error::NotAGroup(format!("element {a} has no inverse")));
            }
        }
        // associativity
        for a in 0..order {
            for b in 0..order {
                let ab = flat[a * order + b];
                for c in 0..order {
                    let bc = flat[b * order + c];
                    if flat[ab * order + c] != flat[a * order + bc] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            order,
            cayley: flat,
            inverse,
        })
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != Self::IDENTITY {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements()
            .filter(|&a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }

    /// Multiset of element orders, an isomorphism invariant.
    pub fn order_statistics(&self) -> BTreeMap<usize, usize> {
        let mut stats = BTreeMap::new();
        for g in self.elements() {
            *stats.entry(self.element_order(g)).or_insert(0) += 1;
        }
        stats
    }

    /// Checks closure under product and inverse; `h` need not be sorted.
    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        if h.is_empty() || h.iter().any(|&x| x >= self.order) {
            return false;
        }
        let member = |x: usize| h.contains(&x);
        if !member(Self::IDENTITY) {
            return false;
        }
        h.iter()
            .all(|&a| member(self.inv(a)) && h.iter().all(|&b| member(self.mul(a, b))))
    }

    /// Realizes a subgroup as a standalone group.
    ///
    /// Returns the subgroup with its own labels `0..|H|` (ascending by
    /// parent label, so the identity stays at 0) plus the embedding into
    /// parent labels.
    pub fn subgroup_group(&self, h: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(h) {
            return Err(Error::NotASubgroup(format!("{h:?} is not a subgroup")));
        }
        let mut embedding: Vec<usize> = h.to_vec();
        embedding.sort_unstable();
        embedding.dedup();
        let index_of = |x: usize| embedding.binary_search(&x).expect("closed subgroup");
        let table: Vec<Vec<usize>> = embedding
            .iter()
            .map(|&a| {
                embedding
                    .iter()
                    .map(|&b| index_of(self.mul(a, b)))
                    .collect()
            })
            .collect();
        Ok((FiniteGroup::from_cayley(table)?, embedding))
    }
}

/// One left coset of `H` in `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coset {
    /// Minimal-label member; used as the canonical representative.
    pub representative: usize,
    /// Members sorted ascending.
    pub members: Vec<usize>,
}

/// The left coset space `Ω = G/H` with its `G`-action and invariant
/// weights.
///
/// Each point carries weight `|H|`, so for any `f : G → ℂ`
/// `Σ_{g∈G} f(g) = Σ_{x∈Ω} weight · (1/|H|) Σ_{h∈H} f(rep_x · h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetSpace {
    group_order: usize,
    subgroup: Vec<usize>,
    points: Vec<Coset>,
    /// Flattened `g * num_points + x -> g·x`.
    action: Vec<usize>,
    /// Element label -> index of its coset.
    point_of: Vec<usize>,
    weight_per_point: f64,
}

impl CosetSpace {
    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Coset] {
        &self.points
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn subgroup_order(&self) -> usize {
        self.subgroup.len()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn weight_per_point(&self) -> f64 {
        self.weight_per_point
    }

    pub fn representative(&self, x: usize) -> usize {
        self.points[x].representative
    }

    /// The point containing group element `g`.
    pub fn point_of(&self, g: usize) -> usize {
        self.point_of[g]
    }

    /// The coset of the identity element.
    pub fn identity_point(&self) -> usize {
        self.point_of[FiniteGroup::IDENTITY]
    }

    /// Action `g · x` on points.
    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.points.len() + x]
    }
}

/// Builds the left coset space `G/H`.
pub fn coset_space(group: &FiniteGroup, subgroup: &[usize]) -> Result<CosetSpace> {
    if !group.is_subgroup(subgroup) {
        return Err(Error::NotASubgroup(format!(
            "{subgroup:?} is not a subgroup of a group of order {}",
            group.order()
        )));
    }
    let mut sub: Vec<usize> = subgroup.to_vec();
    sub.sort_unstable();
    sub.dedup();

    let order = group.order();
    let mut point_of = vec![usize::MAX; order];
    let mut points: Vec<Coset> = Vec::new();
    for g in group.elements() {
        if point_of[g] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = sub.iter().map(|&h| group.mul(g, h)).collect();
        members.sort_unstable();
        let idx = points.len();
        for &m in &members {
            point_of[m] = idx;
        }
        points.push(Coset {
            representative: members[0],
            members,
        });
    }
    let num_points = points.len();
    let mut action = vec![0usize; order * num_points];
    for g in group.elements() {
        for (x, coset) in points.iter().enumerate() {
            action[g * num_points + x] = point_of[group.mul(g, coset.representative)];
        }
    }
    Ok(CosetSpace {
        group_order: order,
        subgroup: sub.clone(),
        points,
        action,
        point_of,
        weight_per_point: sub.len() as f64,
    })
}

/// A multiplier (2-cocycle) `m : G×G → 𝕋` with values in the `n`-th
/// roots of unity, stored as integer exponents mod `n`.
///
/// `m(g1,g2) = exp(2πi·expo(g1,g2)/n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplier {
    group_order: usize,
    root_order: u32,
    /// Flattened exponent table, `expo[g1 * order + g2]`.
    expo: Vec<u32>,
}

impl Multiplier {
    pub fn new(group_order: usize, root_order: u32, table: Vec<Vec<u32>>) -> Result<Self> {
        if root_order == 0 {
            return Err(Error::InvalidMultiplier("root order must be positive".into()));
        }
        if table.len() != group_order || table.iter().any(|r| r.len() != group_order) {
            return Err(Error::InvalidMultiplier(format!(
                "exponent table must be {group_order}x{group_order}"
            )));
        }
        let expo = table
            .into_iter()
            .flat_map(|row| row.into_iter().map(|k| k % root_order))
            .collect();
        Ok(Self {
            group_order,
            root_order,
            expo,
        })
    }

    /// The trivial multiplier `m ≡ 1` with the given root order.
    pub fn trivial(group_order: usize, root_order: u32) -> Self {
        Self {
            group_order,
            root_order: root_order.max(1),
            expo: vec![0; group_order * group_order],
        }
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn root_order(&self) -> u32 {
        self.root_order
    }

    #[inline]
    pub fn exponent(&self, g1: usize, g2: usize) -> u32 {
        self.expo[g1 * self.group_order + g2]
    }

    pub fn value(&self, g1: usize, g2: usize) -> Complex64 {
        root_of_unity(self.root_order, self.exponent(g1, g2))
    }

    pub fn is_trivial(&self) -> bool {
        self.expo.iter().all(|&k| k == 0)
    }

    /// Restriction to a subgroup given by its embedding into the parent.
    pub fn restrict(&self, embedding: &[usize]) -> Multiplier {
        let m = embedding.len();
        let expo = embedding
            .iter()
            .flat_map(|&a| embedding.iter().map(move |&b| self.exponent(a, b)))
            .collect();
        Multiplier {
            group_order: m,
            root_order: self.root_order,
            expo,
        }
    }

    /// Pointwise product of two multipliers on the same group, lifted to
    /// the least common root order.
    pub fn product(&self, other: &Multiplier) -> Result<Multiplier> {
        if self.group_order != other.group_order {
            return Err(Error::InvalidMultiplier(
                "multiplier product needs matching group orders".into(),
            ));
        }
        let n = lcm(self.root_order as u64, other.root_order as u64) as u32;
        let a_scale = n / self.root_order;
        let b_scale = n / other.root_order;
        let expo = self
            .expo
            .iter()
            .zip(other.expo.iter())
            .map(|(&a, &b)| (a * a_scale + b * b_scale) % n)
            .collect();
        Ok(Multiplier {
            group_order: self.group_order,
            root_order: n,
            expo,
        })
    }

    /// True when both tables define the same function into 𝕋.
    pub fn same_values(&self, other: &Multiplier) -> bool {
        if self.group_order != other.group_order {
            return false;
        }
        let n1 = self.root_order as u64;
        let n2 = other.root_order as u64;
        self.expo.iter().zip(other.expo.iter()).all(|(&k1, &k2)| {
            // exp(2πi k1/n1) == exp(2πi k2/n2) iff k1 n2 ≡ k2 n1 (mod n1 n2)
            (k1 as u64 * n2) % (n1 * n2) == (k2 as u64 * n1) % (n1 * n2)
        })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn root_of_unity(n: u32, k: u32) -> Complex64 {
    let theta = 2.0 * std::f64::consts::PI * f64::from(k % n) / f64::from(n);
    Complex64::new(theta.cos(), theta.sin())
}

/// The multiplier of the discrete Weyl (shift/clock) system on
/// `Z_d × Z_d`.
///
/// With `ω = exp(2πi/d)` and the projective representation
/// `U(a,b) = X^a Z^b`, the product rule `U(g1 g2) = m(g1,g2) U(g1) U(g2)`
/// forces `m((a,b),(a',b')) = ω^{-b a'}`; the exponent table stores
/// `(-b a') mod d`.
pub fn weyl_multiplier(d: usize) -> Multiplier {
    let order = d * d;
    let n = d as u32;
    let table: Vec<Vec<u32>> = (0..order)
        .map(|g1| {
            let b = (g1 % d) as u32;
            (0..order)
                .map(|g2| {
                    let ap = (g2 / d) as u32;
                    (n - (b * ap) % n) % n
                })
                .collect()
        })
        .collect();
    Multiplier::new(order, n, table).expect("weyl table is well formed")
}

/// Outcome of [`validate_multiplier`]; lists every violated identity.
#[derive(Debug, Clone)]
pub struct MultiplierReport {
    /// Elements `g` with `m(e,g) ≠ 1` or `m(g,e) ≠ 1`.
    pub normalization_violations: Vec<usize>,
    /// Triples `(g1,g2,g3)` violating the cocycle identity.
    pub cocycle_violations: Vec<(usize, usize, usize)>,
}

impl MultiplierReport {
    pub fn valid(&self) -> bool {
        self.normalization_violations.is_empty() && self.cocycle_violations.is_empty()
    }
}

/// Checks normalization `m(e,g) = m(g,e) = 1` and the cocycle identity
/// `m(g1,g2) m(g1g2,g3) = m(g2,g3) m(g1,g2g3)` over all triples.
///
/// Exponent arithmetic is integral, so the check is exact.
pub fn validate_multiplier(group: &FiniteGroup, m: &Multiplier) -> Result<MultiplierReport> {
    if m.group_order != group.order() {
        return Err(Error::InvalidMultiplier(format!(
            "table is for order {}, group has order {}",
            m.group_order,
            group.order()
        )));
    }
    let e = FiniteGroup::IDENTITY;
    let mut normalization_violations = Vec::new();
    for g in group.elements() {
        if m.exponent(e, g) != 0 || m.exponent(g, e) != 0 {
            normalization_violations.push(g);
        }
    }
    let n = m.root_order;
    let mut cocycle_violations = Vec::new();
    for g1 in group.elements() {
        for g2 in group.elements() {
            let g12 = group.mul(g1, g2);
            for g3 in group.elements() {
                let g23 = group.mul(g2, g3);
                let lhs = (m.exponent(g1, g2) + m.exponent(g12, g3)) % n;
                let rhs = (m.exponent(g2, g3) + m.exponent(g1, g23)) % n;
                if lhs != rhs {
                    cocycle_violations.push((g1, g2, g3));
                }
            }
        }
    }
    Ok(MultiplierReport {
        normalization_violations,
        cocycle_violations,
    })
}

/// The central extension `G_m` of `G` by the `n`-th roots of unity.
///
/// Elements are pairs `(g, z)` with `z ∈ Z_n`, labelled `g·n + z`, and
/// the product law `(g,z)(g',z') = (gg', z z' m(g,g'))`. The projection
/// `p(g,z) = g` is a homomorphism with central kernel `{e} × Z_n`.
#[derive(Debug, Clone)]
pub struct CentralExtensionGroup {
    pub base_order: usize,
    pub root_order: u32,
    pub group: FiniteGroup,
    pub multiplier: Multiplier,
}

impl CentralExtensionGroup {
    #[inline]
    pub fn label(&self, g: usize, z: u32) -> usize {
        g * self.root_order as usize + z as usize
    }

    #[inline]
    pub fn project(&self, x: usize) -> usize {
        x / self.root_order as usize
    }

    #[inline]
    pub fn phase_exponent(&self, x: usize) -> u32 {
        (x % self.root_order as usize) as u32
    }

    /// Kernel of the projection, `{(e, z)}`.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.root_order).map(|z| self.label(0, z)).collect()
    }
}

/// Builds the central extension of `G` by a validated multiplier.
pub fn central_extension(group: &FiniteGroup, m: &Multiplier) -> Result<CentralExtensionGroup> {
    let report = validate_multiplier(group, m)?;
    if !report.valid() {
        return Err(Error::InvalidMultiplier(format!(
            "multiplier fails validation: {} normalization, {} cocycle violations",
            report.normalization_violations.len(),
            report.cocycle_violations.len()
        )));
    }
    let n = m.root_order as usize;
    let order = group.order() * n;
    let table: Vec<Vec<usize>> = (0..order)
        .map(|x| {
            let (g, z) = (x / n, x % n);
            (0..order)
                .map(|y| {
                    let (g2, z2) = (y / n, y % n);
                    let phase = (z + z2 + m.exponent(g, g2) as usize) % n;
                    group.mul(g, g2) * n + phase
                })
                .collect()
        })
        .collect();
    let extension = FiniteGroup::from_cayley(table)?;
    // kernel centrality is structural: (e,z) commutes with (g,z') since
    // m(e,g) = m(g,e) = 1; assert it anyway while tables are small.
    debug_assert!({
        let ext = &extension;
        (0..n).all(|z| {
            let k = z;
            ext.elements().all(|x| ext.mul(k, x) == ext.mul(x, k))
        })
    });
    Ok(CentralExtensionGroup {
        base_order: group.order(),
        root_order: m.root_order,
        group: extension,
        multiplier: m.clone(),
    })
}
