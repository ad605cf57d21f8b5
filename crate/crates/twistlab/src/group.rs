//! Finite abelian groups, their duals, and subgroups.
//!
//! A group is a product of cyclic factors Z_{n_1}×…×Z_{n_k}. Elements and
//! irreducible characters are both exponent tuples and share one index space
//! (first factor fastest, so Z₂×Z₂ enumerates as e, a, b, ab). Multiplication
//! tables are precomputed; elements are copyable indices into them.

use serde::{Deserialize, Serialize};

use crate::phase::{lcm, Phase};

/// An element of a [`FiniteAbelianGroup`], as an index into its element list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct GroupElement(pub u16);

/// An irreducible character, indexed like elements via its exponent tuple.
///
/// The character value is `χ(g) = exp(2πi·Σ_i χ_i g_i / n_i)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Irrep(pub u16);

#[derive(Clone, Debug)]
pub struct FiniteAbelianGroup {
    factors: Vec<u32>,
    strides: Vec<usize>,
    tuples: Vec<Vec<u32>>,
    mult: Vec<u16>,
    inv: Vec<u16>,
    exponent: u64,
    phase_modulus: u64,
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}
impl Eq for FiniteAbelianGroup {}

impl FiniteAbelianGroup {
    pub fn new(factors: &[u32]) -> FiniteAbelianGroup {
        assert!(!factors.is_empty(), "group needs at least one cyclic factor");
        assert!(factors.iter().all(|&n| n >= 1), "cyclic factors must be positive");
        let order: usize = factors.iter().map(|&n| n as usize).product();
        assert!(order <= u16::MAX as usize, "group too large");
        let mut strides = Vec::with_capacity(factors.len());
        let mut s = 1usize;
        for &n in factors {
            strides.push(s);
            s *= n as usize;
        }
        let tuples: Vec<Vec<u32>> = (0..order)
            .map(|idx| {
                factors
                    .iter()
                    .zip(&strides)
                    .map(|(&n, &st)| ((idx / st) % n as usize) as u32)
                    .collect()
            })
            .collect();
        let index_of = |t: &[u32]| -> usize {
            t.iter()
                .zip(&strides)
                .zip(factors)
                .map(|((&e, &st), &n)| (e % n) as usize * st)
                .sum()
        };
        let mut mult = vec![0u16; order * order];
        let mut inv = vec![0u16; order];
        for i in 0..order {
            for j in 0..order {
                let t: Vec<u32> = tuples[i]
                    .iter()
                    .zip(&tuples[j])
                    .zip(factors)
                    .map(|((&x, &y), &n)| (x + y) % n)
                    .collect();
                mult[i * order + j] = index_of(&t) as u16;
            }
            let t: Vec<u32> = tuples[i]
                .iter()
                .zip(factors)
                .map(|(&x, &n)| (n - x) % n)
                .collect();
            inv[i] = index_of(&t) as u16;
        }
        let exponent = factors.iter().fold(1u64, |acc, &n| lcm(acc, n as u64));
        let phase_modulus = lcm(exponent * exponent, 4);
        FiniteAbelianGroup {
            factors: factors.to_vec(),
            strides,
            tuples,
            mult,
            inv,
            exponent,
            phase_modulus,
        }
    }

    pub fn z2z2() -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(&[2, 2])
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.tuples.len()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Fixed phase denominator for everything built over this group:
    /// lcm(exponent², 4). Every scalar produced by the operator algebra is a
    /// root of unity of this order.
    pub fn phase_modulus(&self) -> u64 {
        self.phase_modulus
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(0)
    }

    pub fn trivial_irrep(&self) -> Irrep {
        Irrep(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.order() as u16).map(GroupElement)
    }

    pub fn irreps(&self) -> impl Iterator<Item = Irrep> {
        (0..self.order() as u16).map(Irrep)
    }

    pub fn element(&self, tuple: &[u32]) -> GroupElement {
        assert_eq!(tuple.len(), self.factors.len());
        let idx: usize = tuple
            .iter()
            .zip(&self.strides)
            .zip(&self.factors)
            .map(|((&e, &st), &n)| (e % n) as usize * st)
            .sum();
        GroupElement(idx as u16)
    }

    pub fn irrep(&self, tuple: &[u32]) -> Irrep {
        Irrep(self.element(tuple).0)
    }

    pub fn tuple(&self, g: GroupElement) -> &[u32] {
        &self.tuples[g.0 as usize]
    }

    pub fn irrep_tuple(&self, x: Irrep) -> &[u32] {
        &self.tuples[x.0 as usize]
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement(self.mult[a.0 as usize * self.order() + b.0 as usize])
    }

    pub fn inv(&self, a: GroupElement) -> GroupElement {
        GroupElement(self.inv[a.0 as usize])
    }

    pub fn pow(&self, a: GroupElement, k: i64) -> GroupElement {
        let mut r = self.identity();
        let b = if k >= 0 { a } else { self.inv(a) };
        for _ in 0..k.unsigned_abs() {
            r = self.mul(r, b);
        }
        r
    }

    pub fn element_order(&self, a: GroupElement) -> u32 {
        let mut r = a;
        let mut n = 1;
        while r != self.identity() {
            r = self.mul(r, a);
            n += 1;
        }
        n
    }

    pub fn irrep_mul(&self, a: Irrep, b: Irrep) -> Irrep {
        Irrep(self.mul(GroupElement(a.0), GroupElement(b.0)).0)
    }

    pub fn irrep_inv(&self, a: Irrep) -> Irrep {
        Irrep(self.inv(GroupElement(a.0)).0)
    }

    /// χ(g) as an exact phase.
    pub fn character(&self, chi: Irrep, g: GroupElement) -> Phase {
        let ct = &self.tuples[chi.0 as usize];
        let gt = &self.tuples[g.0 as usize];
        let mut p = Phase::ZERO;
        for ((&c, &e), &n) in ct.iter().zip(gt).zip(&self.factors) {
            p = p.add(Phase::new((c as i64) * (e as i64), n as u64));
        }
        p
    }

    /// The irrep with the given character values, if the map is one.
    pub fn irrep_from_values(&self, values: &[Phase]) -> Option<Irrep> {
        assert_eq!(values.len(), self.order());
        'cand: for chi in self.irreps() {
            for g in self.elements() {
                if self.character(chi, g) != values[g.0 as usize] {
                    continue 'cand;
                }
            }
            return Some(chi);
        }
        None
    }
}

/// A subgroup, stored as its element set plus an independent generating
/// basis (each basis element's order equals its order in the quotient by the
/// previously spanned part, which the builder enforces).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<GroupElement>,
    pub basis: Vec<(GroupElement, u32)>,
}

impl Subgroup {
    pub fn trivial(group: &FiniteAbelianGroup) -> Subgroup {
        Subgroup {
            elements: vec![group.identity()],
            basis: vec![],
        }
    }

    pub fn full(group: &FiniteAbelianGroup) -> Subgroup {
        Subgroup::generated(group, &group.elements().collect::<Vec<_>>())
    }

    pub fn generated(group: &FiniteAbelianGroup, gens: &[GroupElement]) -> Subgroup {
        let mut elems = vec![group.identity()];
        loop {
            let mut grew = false;
            let snapshot = elems.clone();
            for &g in gens {
                for &h in &snapshot {
                    let x = group.mul(g, h);
                    if !elems.contains(&x) {
                        elems.push(x);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        elems.sort();
        let basis = find_basis(group, &elems);
        Subgroup {
            elements: elems,
            basis,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    /// Irreps trivial on every element of this subgroup (the annihilator).
    pub fn annihilator(&self, group: &FiniteAbelianGroup) -> Vec<Irrep> {
        group
            .irreps()
            .filter(|&chi| {
                self.elements
                    .iter()
                    .all(|&h| group.character(chi, h).is_zero())
            })
            .collect()
    }
}

/// Elements on which every irrep of `dual_gens`' span is trivial.
pub fn joint_kernel(group: &FiniteAbelianGroup, dual: &[Irrep]) -> Vec<GroupElement> {
    group
        .elements()
        .filter(|&g| dual.iter().all(|&chi| group.character(chi, g).is_zero()))
        .collect()
}

fn spans(group: &FiniteAbelianGroup, cand: &[(GroupElement, u32)], elems: &[GroupElement]) -> bool {
    // The candidate basis must span exactly, with each element reached by a
    // unique exponent tuple (split presentation).
    let total: usize = cand.iter().map(|&(_, o)| o as usize).product();
    if total != elems.len() {
        return false;
    }
    let mut reached = Vec::with_capacity(total);
    let mut stack = vec![group.identity()];
    for &(g, o) in cand {
        if group.element_order(g) != o {
            return false;
        }
        let mut next = Vec::with_capacity(stack.len() * o as usize);
        for &base in &stack {
            let mut acc = base;
            for _ in 0..o {
                next.push(acc);
                acc = group.mul(acc, g);
            }
        }
        stack = next;
    }
    reached.extend(stack);
    reached.sort();
    reached.dedup();
    reached.len() == elems.len() && reached.iter().zip(elems).all(|(a, b)| a == b)
}

fn find_basis(group: &FiniteAbelianGroup, elems: &[GroupElement]) -> Vec<(GroupElement, u32)> {
    if elems.len() == 1 {
        return vec![];
    }
    // Deterministic search over short generator sequences; fine for the tiny
    // groups in scope.
    let with_order: Vec<(GroupElement, u32)> = elems
        .iter()
        .filter(|&&g| g != group.identity())
        .map(|&g| (g, group.element_order(g)))
        .collect();
    for len in 1..=3 {
        let mut idx = vec![0usize; len];
        loop {
            let cand: Vec<(GroupElement, u32)> = idx.iter().map(|&i| with_order[i]).collect();
            if spans(group, &cand, elems) {
                return cand;
            }
            // advance multi-index
            let mut pos = 0;
            loop {
                idx[pos] += 1;
                if idx[pos] < with_order.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
                if pos == len {
                    break;
                }
            }
            if pos == len {
                break;
            }
        }
    }
    panic!("no split basis found for subgroup of order {}", elems.len());
}
