//! Multi-site operators: sparse edge → site-operator maps with one global
//! phase.
//!
//! Site operators on different edges are tensor factors and commute freely,
//! so canonical form keeps each site's scalar hoisted into the operator
//! global and drops identity sites. Equality of canonical forms is equality
//! of operators.

use std::collections::BTreeMap;

use crate::group::FiniteAbelianGroup;
use crate::lattice::EdgeId;
use crate::phase::Phase;
use crate::site::{CommutationResult, SiteOperator};

#[derive(Clone, PartialEq, Eq)]
pub struct LatticeOperator {
    support: BTreeMap<EdgeId, SiteOperator>,
    global: Phase,
}

impl std::fmt::Debug for LatticeOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LatticeOperator(global={:?}, support={{", self.global)?;
        for (e, s) in &self.support {
            write!(f, "{e}: {s:?}, ")?;
        }
        write!(f, "}})")
    }
}

impl LatticeOperator {
    pub fn identity() -> LatticeOperator {
        LatticeOperator {
            support: BTreeMap::new(),
            global: Phase::ZERO,
        }
    }

    pub fn from_sites(
        group: &FiniteAbelianGroup,
        sites: impl IntoIterator<Item = (EdgeId, SiteOperator)>,
    ) -> LatticeOperator {
        let mut op = LatticeOperator::identity();
        for (e, s) in sites {
            op.push(group, e, &s);
        }
        op
    }

    /// Multiply a site factor onto an edge (applied after what is there).
    pub fn push(&mut self, group: &FiniteAbelianGroup, edge: EdgeId, site: &SiteOperator) {
        let merged = match self.support.remove(&edge) {
            Some(existing) => site.compose(group, &existing),
            None => site.clone(),
        };
        self.global = self.global.add(merged.global());
        let normalized = merged.scaled(merged.global().neg());
        if !normalized.is_identity() {
            self.support.insert(edge, normalized);
        }
    }

    pub fn scaled(mut self, phase: Phase) -> LatticeOperator {
        self.global = self.global.add(phase);
        self
    }

    pub fn global(&self) -> Phase {
        self.global
    }

    pub fn support(&self) -> &BTreeMap<EdgeId, SiteOperator> {
        &self.support
    }

    pub fn site(&self, edge: EdgeId) -> Option<&SiteOperator> {
        self.support.get(&edge)
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.support.is_empty() && self.global.is_zero()
    }

    /// Exact product AB (apply `other` first).
    pub fn compose(&self, group: &FiniteAbelianGroup, other: &LatticeOperator) -> LatticeOperator {
        let mut out = other.clone();
        out.global = out.global.add(self.global);
        for (&e, s) in &self.support {
            out.push(group, e, s);
        }
        out
    }

    pub fn dagger(&self, group: &FiniteAbelianGroup) -> LatticeOperator {
        let mut out = LatticeOperator::identity();
        out.global = self.global.neg();
        for (&e, s) in &self.support {
            out.push(group, e, &s.dagger(group));
        }
        out
    }

    pub fn pow(&self, group: &FiniteAbelianGroup, k: i64) -> LatticeOperator {
        let base = if k >= 0 {
            self.clone()
        } else {
            self.dagger(group)
        };
        let mut acc = LatticeOperator::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(group, &base);
        }
        acc
    }

    /// Scalar relating AB to BA. Because sites on distinct edges commute,
    /// this reduces to the product of per-edge commutation scalars over the
    /// shared support; any non-scalar edge makes the whole pair non-scalar.
    pub fn commutation_phase(
        &self,
        group: &FiniteAbelianGroup,
        other: &LatticeOperator,
    ) -> CommutationResult {
        let mut total = Phase::ZERO;
        for (&e, a) in &self.support {
            if let Some(b) = other.support.get(&e) {
                match a.commutation_phase(group, b) {
                    CommutationResult::Scalar(p) => total = total.add(p),
                    CommutationResult::NonScalar => return CommutationResult::NonScalar,
                }
            }
        }
        CommutationResult::Scalar(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::Cocycle;
    use crate::phase::Phase;
    use crate::site::SiteOperator;

    #[test]
    fn canonical_form_hoists_phases() {
        let c = Cocycle::canonical_z2z2();
        let g = c.group().clone();
        let a = g.element(&[1, 0]);
        let b = g.element(&[0, 1]);
        let mut op = LatticeOperator::identity();
        op.push(&g, 0, &SiteOperator::x_alpha(&c, a));
        op.push(&g, 0, &SiteOperator::x_alpha(&c, b));
        // on one edge: X^α_b · X^α_a = α(b,a)·X^α_{ab}
        let mut expect = LatticeOperator::identity();
        expect.push(&g, 0, &SiteOperator::x_alpha(&c, g.mul(a, b)));
        assert_eq!(op, expect.scaled(c.value(b, a)));
        // squaring the twisted shift clears the edge entirely
        let mut sq = LatticeOperator::identity();
        sq.push(&g, 3, &SiteOperator::x_alpha(&c, a));
        sq.push(&g, 3, &SiteOperator::x_alpha(&c, a));
        assert!(sq.is_identity());
    }

    #[test]
    fn cross_edge_commutation_multiplies() {
        let c = Cocycle::canonical_z2z2();
        let g = c.group().clone();
        let a = g.element(&[1, 0]);
        // hat(b) evaluates to -1 on a
        let chi = c.hat(g.element(&[0, 1]));
        // Z on edges 0 and 1; X on edges 0, 1, 2: two crossings
        let z = LatticeOperator::from_sites(
            &g,
            [(0, SiteOperator::z(&g, chi)), (1, SiteOperator::z(&g, chi))],
        );
        let x = LatticeOperator::from_sites(
            &g,
            [
                (0, SiteOperator::x(&g, a)),
                (1, SiteOperator::x(&g, a)),
                (2, SiteOperator::x(&g, a)),
            ],
        );
        let r = z.commutation_phase(&g, &x);
        // χ(a)² = 1 even though each crossing alone is nontrivial
        assert_eq!(r, CommutationResult::Scalar(Phase::ZERO));
        let single = LatticeOperator::from_sites(&g, [(0, SiteOperator::x(&g, a))]);
        assert_eq!(
            z.commutation_phase(&g, &single),
            CommutationResult::Scalar(g.character(chi, a))
        );
    }

    #[test]
    fn dagger_involution() {
        let c = Cocycle::canonical_z2z2();
        let g = c.group().clone();
        let a = g.element(&[1, 0]);
        let op = LatticeOperator::from_sites(
            &g,
            [
                (0, SiteOperator::x_alpha(&c, a)),
                (5, SiteOperator::z(&g, c.hat(a))),
            ],
        )
        .scaled(Phase::QUARTER);
        assert_eq!(op.dagger(&g).dagger(&g), op);
        assert!(op.compose(&g, &op.dagger(&g)).is_identity());
    }
}
