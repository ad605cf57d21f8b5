//! 2-cocycles on finite abelian groups and their cohomological gadgets.
//!
//! A cocycle is stored as an explicit |G|×|G| table of phases. The slant
//! product `ι_g(h) = α(g,h)/α(h,g)` is the commutation character of the
//! twisted shift operators; its kernel K_α and image subgroup control which
//! undecorated loop operators survive in the twisted models.

use std::fmt;

use crate::group::{FiniteAbelianGroup, GroupElement, Irrep, Subgroup};
use crate::phase::Phase;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CocycleError {
    /// Table size does not match |G|².
    Dimension { expected: usize, got: usize },
    /// Normalization α(e,g) = α(g,e) = 1 fails.
    NotNormalized { g: GroupElement, h: GroupElement },
    /// The 2-cocycle identity fails on a triple.
    CocycleCondition {
        g: GroupElement,
        h: GroupElement,
        k: GroupElement,
    },
    /// An entry is not a root of unity of the group's phase modulus.
    BadPhase { g: GroupElement, h: GroupElement },
    /// A slant product failed to be multiplicative (corrupted table).
    SlantNotCharacter { g: GroupElement },
    /// The supplied duality map is not a group isomorphism.
    BadIsomorphism,
    /// A pairing matrix does not define a cocycle on this group.
    BadPairing { row: usize, col: usize },
}

impl fmt::Display for CocycleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleError::Dimension { expected, got } => {
                write!(f, "cocycle table has {got} entries, expected {expected}")
            }
            CocycleError::NotNormalized { g, h } => {
                write!(f, "cocycle not normalized at ({g:?},{h:?})")
            }
            CocycleError::CocycleCondition { g, h, k } => {
                write!(f, "2-cocycle condition fails at ({g:?},{h:?},{k:?})")
            }
            CocycleError::BadPhase { g, h } => {
                write!(f, "entry at ({g:?},{h:?}) exceeds the phase modulus")
            }
            CocycleError::SlantNotCharacter { g } => {
                write!(f, "slant product at {g:?} is not a character")
            }
            CocycleError::BadIsomorphism => write!(f, "duality map is not an isomorphism"),
            CocycleError::BadPairing { row, col } => {
                write!(f, "pairing matrix entry ({row},{col}) is not compatible with the factors")
            }
        }
    }
}

impl std::error::Error for CocycleError {}

/// An isomorphism Ĝ → G given by its value on every irrep index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualIso {
    map: Vec<GroupElement>,
}

impl DualIso {
    pub fn new(group: &FiniteAbelianGroup, map: Vec<GroupElement>) -> Result<DualIso, CocycleError> {
        if map.len() != group.order() {
            return Err(CocycleError::BadIsomorphism);
        }
        let mut seen = vec![false; group.order()];
        for &g in &map {
            if seen[g.0 as usize] {
                return Err(CocycleError::BadIsomorphism);
            }
            seen[g.0 as usize] = true;
        }
        if map[0] != group.identity() {
            return Err(CocycleError::BadIsomorphism);
        }
        for a in group.irreps() {
            for b in group.irreps() {
                let ab = group.irrep_mul(a, b);
                if group.mul(map[a.0 as usize], map[b.0 as usize]) != map[ab.0 as usize] {
                    return Err(CocycleError::BadIsomorphism);
                }
            }
        }
        Ok(DualIso { map })
    }

    /// The exponent-tuple identity map χ ↦ g with the same tuple.
    pub fn tuple_identity(group: &FiniteAbelianGroup) -> DualIso {
        DualIso {
            map: group.elements().collect(),
        }
    }

    pub fn apply(&self, chi: Irrep) -> GroupElement {
        self.map[chi.0 as usize]
    }

    pub fn inverse_of(&self, g: GroupElement) -> Irrep {
        Irrep(self.map.iter().position(|&x| x == g).unwrap() as u16)
    }
}

/// A normalized 2-cocycle α: G×G → U(1), as an explicit phase table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    group: FiniteAbelianGroup,
    table: Vec<Phase>,
}

impl Cocycle {
    pub fn from_table(group: FiniteAbelianGroup, table: Vec<Phase>) -> Result<Cocycle, CocycleError> {
        let n = group.order();
        if table.len() != n * n {
            return Err(CocycleError::Dimension {
                expected: n * n,
                got: table.len(),
            });
        }
        let c = Cocycle { group, table };
        c.validate()?;
        Ok(c)
    }

    pub fn trivial(group: FiniteAbelianGroup) -> Cocycle {
        let n = group.order();
        Cocycle {
            group,
            table: vec![Phase::ZERO; n * n],
        }
    }

    /// The order-four twist of Z₂×Z₂ whose twisted shifts anticommute:
    /// α(a,b) = i, α(b,a) = -i, α(a,ab) = -i, α(ab,a) = i, α(b,ab) = i,
    /// α(ab,b) = -i, all other entries 1.
    pub fn canonical_z2z2() -> Cocycle {
        let group = FiniteAbelianGroup::z2z2();
        // rows e, a, b, ab; entries in quarter turns
        let quarters: [[i64; 4]; 4] = [
            [0, 0, 0, 0],
            [0, 0, 1, 3],
            [0, 3, 0, 1],
            [0, 1, 3, 0],
        ];
        let mut table = Vec::with_capacity(16);
        for row in quarters {
            for q in row {
                table.push(Phase::new(q, 4));
            }
        }
        let c = Cocycle { group, table };
        debug_assert!(c.validate().is_ok());
        c
    }

    /// Bilinear cocycle from an integer pairing matrix:
    /// `α(g,h) = exp(2πi·Σ_{i<j} m[i][j]·g_i·h_j / n_j)`.
    ///
    /// Well-definedness requires `m[i][j]·n_i ≡ 0 mod n_j` for i < j; the
    /// constructor rejects matrices violating it.
    pub fn from_pairing_matrix(
        group: FiniteAbelianGroup,
        m: &[Vec<i64>],
    ) -> Result<Cocycle, CocycleError> {
        let k = group.rank();
        if m.len() != k || m.iter().any(|r| r.len() != k) {
            return Err(CocycleError::Dimension {
                expected: k * k,
                got: m.iter().map(|r| r.len()).sum(),
            });
        }
        let factors = group.factors().to_vec();
        for i in 0..k {
            for j in (i + 1)..k {
                let ni = factors[i] as i64;
                let nj = factors[j] as i64;
                if (m[i][j] * ni).rem_euclid(nj) != 0 {
                    return Err(CocycleError::BadPairing { row: i, col: j });
                }
            }
        }
        let n = group.order();
        let mut table = Vec::with_capacity(n * n);
        for g in group.elements() {
            for h in group.elements() {
                let gt = group.tuple(g).to_vec();
                let ht = group.tuple(h).to_vec();
                let mut p = Phase::ZERO;
                for i in 0..k {
                    for j in (i + 1)..k {
                        p = p.add(Phase::new(
                            m[i][j] * gt[i] as i64 * ht[j] as i64,
                            factors[j] as u64,
                        ));
                    }
                }
                table.push(p);
            }
        }
        Cocycle::from_table(group, table)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn value(&self, g: GroupElement, h: GroupElement) -> Phase {
        self.table[g.0 as usize * self.group.order() + h.0 as usize]
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(Phase::is_zero)
    }

    pub fn conj(&self) -> Cocycle {
        Cocycle {
            group: self.group.clone(),
            table: self.table.iter().map(Phase::neg).collect(),
        }
    }

    /// Checks normalization, the 2-cocycle identity on all |G|³ triples, and
    /// that every entry is a phase_modulus-th root of unity.
    pub fn validate(&self) -> Result<(), CocycleError> {
        let g0 = &self.group;
        let e = g0.identity();
        for g in g0.elements() {
            for h in g0.elements() {
                if !self.value(g, h).divides(g0.phase_modulus()) {
                    return Err(CocycleError::BadPhase { g, h });
                }
            }
            if !self.value(e, g).is_zero() {
                return Err(CocycleError::NotNormalized { g: e, h: g });
            }
            if !self.value(g, e).is_zero() {
                return Err(CocycleError::NotNormalized { g, h: e });
            }
        }
        for g in g0.elements() {
            for h in g0.elements() {
                for k in g0.elements() {
                    // α(gh,k)·α(g,h) = α(g,hk)·α(h,k)
                    let lhs = self.value(g0.mul(g, h), k).add(self.value(g, h));
                    let rhs = self.value(g, g0.mul(h, k)).add(self.value(h, k));
                    if lhs != rhs {
                        return Err(CocycleError::CocycleCondition { g, h, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// The slant product `ι_g(h) = α(g,h)/α(h,g)`, verified to be a character.
    pub fn slant(&self, g: GroupElement) -> Result<Irrep, CocycleError> {
        let values: Vec<Phase> = self
            .group
            .elements()
            .map(|h| self.value(g, h).sub(self.value(h, g)))
            .collect();
        self.group
            .irrep_from_values(&values)
            .ok_or(CocycleError::SlantNotCharacter { g })
    }

    /// K_α = { g | ι_g = 1 }, closed under multiplication by construction.
    pub fn kernel_subgroup(&self) -> Result<Subgroup, CocycleError> {
        let mut members = Vec::new();
        for g in self.group.elements() {
            if self.slant(g)? == self.group.trivial_irrep() {
                members.push(g);
            }
        }
        let sub = Subgroup::generated(&self.group, &members);
        debug_assert_eq!(sub.elements, members);
        Ok(sub)
    }

    /// Im(ι) = { ι_g : g ∈ G }; checked to equal the annihilator of K_α.
    pub fn image_subgroup(&self) -> Result<Vec<Irrep>, CocycleError> {
        let mut image: Vec<Irrep> = Vec::new();
        for g in self.group.elements() {
            let chi = self.slant(g)?;
            if !image.contains(&chi) {
                image.push(chi);
            }
        }
        image.sort();
        let ann = self.kernel_subgroup()?.annihilator(&self.group);
        if image != ann {
            return Err(CocycleError::SlantNotCharacter {
                g: self.group.identity(),
            });
        }
        Ok(image)
    }

    /// Pullback β(χ,χ') = α(φ(χ), φ(χ')) along a duality isomorphism,
    /// producing a cocycle of the dual group (same abstract factors).
    pub fn dual_cocycle(&self, iso: &DualIso) -> Result<Cocycle, CocycleError> {
        let n = self.group.order();
        let mut table = Vec::with_capacity(n * n);
        for a in self.group.irreps() {
            for b in self.group.irreps() {
                table.push(self.value(iso.apply(a), iso.apply(b)));
            }
        }
        Cocycle::from_table(self.group.clone(), table)
    }

    /// The duality χ ↦ g inverting the slant map g ↦ ι_g. Exists when K_α is
    /// trivial; for the canonical Z₂×Z₂ twist this is the labeling with
    /// ι_a = (0,1), ι_b = (1,0).
    pub fn hat_iso(&self) -> Result<DualIso, CocycleError> {
        let mut map = vec![None; self.group.order()];
        for g in self.group.elements() {
            let chi = self.slant(g)?;
            if map[chi.0 as usize].is_some() {
                return Err(CocycleError::BadIsomorphism);
            }
            map[chi.0 as usize] = Some(g);
        }
        let map: Vec<GroupElement> = map.into_iter().map(Option::unwrap).collect();
        DualIso::new(&self.group, map)
    }

    /// Hat character of a group element: ι_g, the decoration label used by
    /// the dyonic strings.
    pub fn hat(&self, g: GroupElement) -> Irrep {
        self.slant(g).expect("valid cocycle")
    }

    /// Gauge transform by a 1-cochain: α'(g,h) = α(g,h)·ε(g)ε(h)/ε(gh).
    pub fn coboundary_twist(&self, eps: &[Phase]) -> Result<Cocycle, CocycleError> {
        assert_eq!(eps.len(), self.group.order());
        let mut table = Vec::with_capacity(self.table.len());
        for g in self.group.elements() {
            for h in self.group.elements() {
                let gh = self.group.mul(g, h);
                // normalized cochains need ε(e)=1 to keep normalization; fold
                // it in by shifting.
                let e0 = eps[0];
                let v = self
                    .value(g, h)
                    .add(eps[g.0 as usize].sub(e0))
                    .add(eps[h.0 as usize].sub(e0))
                    .sub(eps[gh.0 as usize].sub(e0));
                table.push(v);
            }
        }
        Cocycle::from_table(self.group.clone(), table)
    }

    /// Restriction to a subgroup, as a table indexed by the subgroup's own
    /// element list.
    pub fn restriction_is_trivial(&self, sub: &Subgroup) -> bool {
        sub.elements
            .iter()
            .all(|&g| sub.elements.iter().all(|&h| self.value(g, h).is_zero()))
    }

    /// The table as a JSON array of arrays of "num/den" phase strings, rows
    /// and columns in element-index order.
    pub fn to_json_table(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.group
                .elements()
                .map(|g| {
                    serde_json::Value::Array(
                        self.group
                            .elements()
                            .map(|h| serde_json::Value::String(self.value(g, h).to_string()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// Parse a table in the `to_json_table` format.
    pub fn from_json_table(
        group: FiniteAbelianGroup,
        v: &serde_json::Value,
    ) -> Result<Cocycle, CocycleError> {
        let n = group.order();
        let rows = v.as_array().ok_or(CocycleError::Dimension {
            expected: n * n,
            got: 0,
        })?;
        let mut table = Vec::with_capacity(n * n);
        for row in rows {
            for cell in row.as_array().into_iter().flatten() {
                let s = cell.as_str().unwrap_or("");
                let (num, den) = s.split_once('/').ok_or(CocycleError::Dimension {
                    expected: n * n,
                    got: table.len(),
                })?;
                let (num, den) = (
                    num.parse::<i64>().map_err(|_| CocycleError::Dimension {
                        expected: n * n,
                        got: table.len(),
                    })?,
                    den.parse::<u64>().map_err(|_| CocycleError::Dimension {
                        expected: n * n,
                        got: table.len(),
                    })?,
                );
                table.push(Phase::new(num, den));
            }
        }
        Cocycle::from_table(group, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z22() -> (FiniteAbelianGroup, GroupElement, GroupElement, GroupElement) {
        let g = FiniteAbelianGroup::z2z2();
        let a = g.element(&[1, 0]);
        let b = g.element(&[0, 1]);
        let ab = g.element(&[1, 1]);
        (g, a, b, ab)
    }

    #[test]
    fn canonical_table_entries() {
        let c = Cocycle::canonical_z2z2();
        let (g, a, b, ab) = z22();
        assert_eq!(c.value(a, b), Phase::QUARTER);
        assert_eq!(c.value(g.identity(), ab), Phase::ZERO);
        assert_eq!(c.value(ab, ab), Phase::ZERO);
        assert_eq!(c.value(b, a), Phase::THREE_QUARTERS);
        assert_eq!(c.value(a, ab), Phase::THREE_QUARTERS);
        assert_eq!(c.value(ab, a), Phase::QUARTER);
        assert_eq!(c.value(b, ab), Phase::QUARTER);
        assert_eq!(c.value(ab, b), Phase::THREE_QUARTERS);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn trivial_cocycle_validates() {
        for factors in [vec![2, 2], vec![4], vec![2, 4], vec![3]] {
            let c = Cocycle::trivial(FiniteAbelianGroup::new(&factors));
            assert!(c.validate().is_ok());
        }
    }

    #[test]
    fn flipped_entry_fails_validation() {
        let c = Cocycle::canonical_z2z2();
        let (g, a, b, _) = z22();
        let mut table: Vec<Phase> = (0..16)
            .map(|i| {
                c.value(
                    GroupElement((i / 4) as u16),
                    GroupElement((i % 4) as u16),
                )
            })
            .collect();
        // flip α(a,b) from i to -i
        table[a.0 as usize * 4 + b.0 as usize] = Phase::THREE_QUARTERS;
        let broken = Cocycle {
            group: g.clone(),
            table,
        };
        // brute-force over all triples finds a violation; (a,a,b) is one
        let err = broken.validate().unwrap_err();
        assert!(matches!(err, CocycleError::CocycleCondition { .. }));
    }

    #[test]
    fn slant_products() {
        let c = Cocycle::canonical_z2z2();
        let (g, a, b, ab) = z22();
        // ι_a has values (1, 1, -1, -1): the irrep with tuple (0,1)
        assert_eq!(c.slant(a).unwrap(), g.irrep(&[0, 1]));
        assert_eq!(c.slant(b).unwrap(), g.irrep(&[1, 0]));
        assert_eq!(c.slant(ab).unwrap(), g.irrep(&[1, 1]));
        assert_eq!(c.slant(g.identity()).unwrap(), g.trivial_irrep());
        let t = Cocycle::trivial(g.clone());
        for x in g.elements() {
            assert_eq!(t.slant(x).unwrap(), g.trivial_irrep());
        }
        // multiplicativity over all pairs: ι_g·ι_h = ι_{gh}
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(
                    g.irrep_mul(c.slant(x).unwrap(), c.slant(y).unwrap()),
                    c.slant(g.mul(x, y)).unwrap()
                );
            }
        }
    }

    #[test]
    fn kernel_and_image() {
        let c = Cocycle::canonical_z2z2();
        let (g, ..) = z22();
        let k = c.kernel_subgroup().unwrap();
        assert_eq!(k.elements, vec![g.identity()]);
        assert_eq!(c.image_subgroup().unwrap().len(), 4);

        let t = Cocycle::trivial(g.clone());
        assert_eq!(t.kernel_subgroup().unwrap().order(), 4);
        assert_eq!(t.image_subgroup().unwrap(), vec![g.trivial_irrep()]);
    }

    #[test]
    fn z2z4_pairing_cocycle() {
        let g = FiniteAbelianGroup::new(&[2, 4]);
        // twist only between the two factors, strength 2 so the pairing is
        // well defined on the Z₂ factor
        let c = Cocycle::from_pairing_matrix(g.clone(), &[vec![0, 2], vec![0, 0]]).unwrap();
        let k = c.kernel_subgroup().unwrap();
        let even = g.element(&[0, 2]);
        assert_eq!(k.elements, vec![g.identity(), even]);
        let image = c.image_subgroup().unwrap();
        assert_eq!(image.len(), 4); // index-2 subgroup of the dual

        // strength-1 pairing is not a cocycle on Z₂×Z₄
        assert!(Cocycle::from_pairing_matrix(g, &[vec![0, 1], vec![0, 0]]).is_err());
    }

    #[test]
    fn dual_cocycle_pullback() {
        let c = Cocycle::canonical_z2z2();
        let (g, a, b, _) = z22();
        let phi = c.hat_iso().unwrap();
        // φ(hat(g)) = g
        assert_eq!(phi.apply(c.hat(a)), a);
        assert_eq!(phi.apply(c.hat(b)), b);
        let beta = c.dual_cocycle(&phi).unwrap();
        assert!(beta.validate().is_ok());
        // β(â, b̂) = α(a,b) = i with â = hat(a)
        let ahat = c.hat(a);
        let bhat = c.hat(b);
        assert_eq!(
            beta.value(GroupElement(ahat.0), GroupElement(bhat.0)),
            Phase::QUARTER
        );
        // trivial α pulls back to trivial β
        let t = Cocycle::trivial(g.clone());
        let beta_t = t.dual_cocycle(&DualIso::tuple_identity(&g)).unwrap();
        assert!(beta_t.is_trivial());
    }

    #[test]
    fn json_table_round_trip() {
        let c = Cocycle::canonical_z2z2();
        let v = c.to_json_table();
        assert_eq!(v[1][2], serde_json::json!("1/4"));
        let back = Cocycle::from_json_table(c.group().clone(), &v).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn slant_is_gauge_invariant() {
        let c = Cocycle::canonical_z2z2();
        let (g, ..) = z22();
        let eps = vec![
            Phase::ZERO,
            Phase::QUARTER,
            Phase::HALF,
            Phase::THREE_QUARTERS,
        ];
        let twisted = c.coboundary_twist(&eps).unwrap();
        assert!(twisted.validate().is_ok());
        for x in g.elements() {
            assert_eq!(twisted.slant(x).unwrap(), c.slant(x).unwrap());
        }
    }
}
