//! Property tests: randomized algebraic invariants of the operator algebra,
//! the assignment homomorphism, and the syndrome maps.

use proptest::prelude::*;

use twistlab::analysis::syndrome;
use twistlab::cocycle::Cocycle;
use twistlab::engine::{evaluate, Evaluator};
use twistlab::group::{FiniteAbelianGroup, GroupElement, Irrep};
use twistlab::lattice::{Axis, Lattice};
use twistlab::model::{build_h_alpha, ModelInstance};
use twistlab::operator::LatticeOperator;
use twistlab::oracle::energy;
use twistlab::phase::Phase;
use twistlab::site::{SiteKind, SiteOperator};
use twistlab::strings::logical_x1;

fn group() -> FiniteAbelianGroup {
    FiniteAbelianGroup::z2z2()
}

fn alphabet(g: &FiniteAbelianGroup, alpha: &Cocycle, pick: u8, label: u8) -> SiteOperator {
    let el = GroupElement(label as u16 % g.order() as u16);
    let chi = Irrep(label as u16 % g.order() as u16);
    match pick % 7 {
        0 => SiteOperator::x(g, el),
        1 => SiteOperator::z(g, chi),
        2 => SiteOperator::x_alpha(alpha, el),
        3 => SiteOperator::x_alpha_bar(alpha, el),
        4 => SiteOperator::x_alpha_tilde(alpha, el),
        5 => SiteOperator::make(g, SiteKind::ZBeta, twistlab::site::OpLabel::Character(chi), Some(&beta()))
            .unwrap(),
        _ => SiteOperator::make(g, SiteKind::ZBetaBar, twistlab::site::OpLabel::Character(chi), Some(&beta()))
            .unwrap(),
    }
}

fn beta() -> Cocycle {
    let alpha = Cocycle::canonical_z2z2();
    let phi = alpha.hat_iso().unwrap();
    alpha.dual_cocycle(&phi).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_is_associative(picks in prop::array::uniform3(0u8..7), labels in prop::array::uniform3(0u8..4)) {
        let g = group();
        let alpha = Cocycle::canonical_z2z2();
        let a = alphabet(&g, &alpha, picks[0], labels[0]);
        let b = alphabet(&g, &alpha, picks[1], labels[1]);
        let c = alphabet(&g, &alpha, picks[2], labels[2]);
        let left = a.compose(&g, &b).compose(&g, &c);
        let right = a.compose(&g, &b.compose(&g, &c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn dagger_is_an_involution_and_inverse(pick in 0u8..7, label in 0u8..4, phase in 0i64..4) {
        let g = group();
        let alpha = Cocycle::canonical_z2z2();
        let a = alphabet(&g, &alpha, pick, label).scaled(Phase::new(phase, 4));
        prop_assert_eq!(a.dagger(&g).dagger(&g), a.clone());
        prop_assert!(a.compose(&g, &a.dagger(&g)).is_identity());
    }

    #[test]
    fn canonical_form_matches_dense(picks in prop::array::uniform2(0u8..7), labels in prop::array::uniform2(0u8..4)) {
        // equal dense matrices iff equal canonical forms
        let g = group();
        let alpha = Cocycle::canonical_z2z2();
        let a = alphabet(&g, &alpha, picks[0], labels[0]);
        let b = alphabet(&g, &alpha, picks[1], labels[1]);
        prop_assert_eq!(a == b, a.as_dense(&g) == b.as_dense(&g));
        let round = SiteOperator::from_dense(&g, &a.as_dense(&g)).unwrap();
        prop_assert_eq!(round, a);
    }

    #[test]
    fn coboundary_twists_preserve_slant(eps in prop::array::uniform4(0i64..4)) {
        let alpha = Cocycle::canonical_z2z2();
        let g = alpha.group().clone();
        let cochain: Vec<Phase> = eps.iter().map(|&e| Phase::new(e, 4)).collect();
        let twisted = alpha.coboundary_twist(&cochain).unwrap();
        prop_assert!(twisted.validate().is_ok());
        for x in g.elements() {
            prop_assert_eq!(twisted.slant(x).unwrap(), alpha.slant(x).unwrap());
        }
    }
}

fn small_model() -> ModelInstance {
    build_h_alpha(Lattice::torus_2d(2, 3), Cocycle::canonical_z2z2()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evaluate_is_a_homomorphism(xs in prop::collection::vec(0u32..2, 24), ys in prop::collection::vec(0u32..2, 24)) {
        let m = small_model();
        let g0 = m.group().clone();
        let ev = Evaluator::new(&m);
        let sum: Vec<u32> = xs.iter().zip(&ys).map(|(&a, &b)| (a + b) % 2).collect();
        let lhs = ev.evaluate(&xs).unwrap().compose(&g0, &ev.evaluate(&ys).unwrap());
        prop_assert_eq!(lhs, ev.evaluate(&sum).unwrap());
    }

    #[test]
    fn syndromes_are_additive_and_energy_is_coset_invariant(exps in prop::collection::vec(0u32..2, 24)) {
        let m = small_model();
        let g0 = m.group().clone();
        let a = GroupElement(1);
        // a deconfined string probe and a random stabilizer element
        let op = logical_x1(&m, a, 0);
        let stab = evaluate(&m, &exps).unwrap();
        let dressed = op.compose(&g0, &stab);
        prop_assert_eq!(energy(&m, &op).unwrap(), energy(&m, &dressed).unwrap());
        // additivity of syndrome phases cell-wise for two probes
        let e1 = m.lattice.edge([0, 1, 0], Axis::Y).unwrap();
        let e2 = m.lattice.edge([1, 2, 0], Axis::Y).unwrap();
        let chi = m.alpha().hat(a);
        let p1 = LatticeOperator::from_sites(&g0, [(e1, SiteOperator::z(&g0, chi))]);
        let p2 = LatticeOperator::from_sites(&g0, [(e2, SiteOperator::z(&g0, chi))]);
        let s1 = syndrome(&m, &p1).unwrap();
        let s2 = syndrome(&m, &p2).unwrap();
        let s12 = syndrome(&m, &p1.compose(&g0, &p2)).unwrap();
        use std::collections::BTreeMap;
        let mut combined: BTreeMap<_, Phase> = BTreeMap::new();
        for e in s1.entries.iter().chain(&s2.entries) {
            let slot = combined.entry((e.cell, e.generator)).or_insert(Phase::ZERO);
            *slot = slot.add(e.phase);
        }
        combined.retain(|_, p| !p.is_zero());
        let got: BTreeMap<_, Phase> = s12
            .entries
            .iter()
            .map(|e| ((e.cell, e.generator), e.phase))
            .collect();
        prop_assert_eq!(combined, got);
    }
}

#[test]
fn syndromes_translate_with_the_lattice() {
    let m = build_h_alpha(Lattice::torus_2d(3, 3), Cocycle::canonical_z2z2()).unwrap();
    let g0 = m.group().clone();
    let alpha = m.alpha().clone();
    let a = GroupElement(1);
    let e = m.lattice.edge([0, 0, 0], Axis::Y).unwrap();
    let base = syndrome(
        &m,
        &LatticeOperator::from_sites(&g0, [(e, SiteOperator::x_alpha(&alpha, a))]),
    )
    .unwrap();
    for delta in [[1, 0, 0], [0, 1, 0], [2, 2, 0]] {
        let te = m.lattice.translate_edge(e, delta).unwrap();
        let moved = syndrome(
            &m,
            &LatticeOperator::from_sites(&g0, [(te, SiteOperator::x_alpha(&alpha, a))]),
        )
        .unwrap();
        let mut expected: Vec<_> = base
            .violated_cells()
            .iter()
            .map(|c| {
                let mut w = [
                    (c.coords[0] + delta[0]).rem_euclid(3),
                    (c.coords[1] + delta[1]).rem_euclid(3),
                    0,
                ];
                w[2] = 0;
                twistlab::lattice::Cell { kind: c.kind, coords: w }
            })
            .collect();
        expected.sort();
        assert_eq!(moved.violated_cells(), expected);
    }
}

#[test]
fn row_hopping_is_an_exact_operator_identity() {
    // the product of one plaquette row equals the shift loops on its two
    // horizontal rows times the clock loop on its vertical row, exactly
    let m = build_h_alpha(Lattice::torus_2d(3, 4), Cocycle::canonical_z2z2()).unwrap();
    let g0 = m.group().clone();
    let a = GroupElement(1);
    let chi = m.alpha().hat(a);
    let mut row_product = LatticeOperator::identity();
    for (ci, cell) in m.cells.iter().enumerate() {
        if cell.cell.kind == twistlab::lattice::CellKind::Plaquette && cell.cell.coords[1] == 1 {
            row_product = row_product.compose(&g0, &m.cell_term(ci, &[1, 0]));
        }
    }
    let expect = logical_x1(&m, a, 1)
        .compose(&g0, &logical_x1(&m, a, 2))
        .compose(&g0, &twistlab::strings::logical_z2(&m, chi, 1));
    assert_eq!(row_product, expect);
}
