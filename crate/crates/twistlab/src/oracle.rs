//! Independent brute-force oracles for the symbolic engine.
//!
//! `gsd_dense` sums the exact trace of every assignment product over the
//! full tensor space — no linear algebra at all, so it is a genuinely
//! independent ground truth on tiny instances. `gsd_trace` keeps the sum
//! exact but enumerates only the permutation-trivial assignment subgroup
//! (everything else has trace zero), which reaches the mid-size lattices.
//! Both divide by the assignment-group order and insist on a nonnegative
//! integer; anything else is an engine bug, not noise.

use crate::cyclo::{Cyc, CycRing};
use crate::engine::{AssignmentVector, StabilizerEngine};
use crate::lattice::Cell;
use crate::model::ModelInstance;
use crate::operator::LatticeOperator;
use crate::site::CommutationResult;
use crate::zmod::Span;

#[derive(Clone, Copy, Debug)]
pub struct TraceBudget {
    /// Cap on enumerable perm-trivial assignments for the trace oracle.
    pub max_trace_assignments: u128,
    /// Cap on the Hilbert-space dimension |G|^edges for the dense oracle.
    pub max_dense_dim: u128,
}

impl Default for TraceBudget {
    fn default() -> Self {
        TraceBudget {
            max_trace_assignments: 1 << 22,
            max_dense_dim: 1 << 16,
        }
    }
}

#[derive(Debug, Clone)]
pub enum OracleError {
    OverBudget { needed: u128, budget: u128 },
    /// The averaged trace failed to be a nonnegative integer.
    NonIntegerResult,
    /// An excitation fails to phase-commute with a term.
    MalformedExcitation { cell: Cell },
}

impl std::fmt::Display for OracleError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleError::OverBudget { needed, budget } => {
                write!(f, "oracle needs {needed}, budget {budget}")
            }
            OracleError::NonIntegerResult => {
                write!(f, "trace average is not a nonnegative integer")
            }
            OracleError::MalformedExcitation { cell } => {
                write!(f, "operator does not phase-commute with the term at {cell:?}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

fn coord_moduli(model: &ModelInstance) -> Vec<u64> {
    model
        .cells
        .iter()
        .flat_map(|c| c.gens.iter().map(|g| g.order as u64))
        .collect()
}

/// Allocation-free trace accumulator: folds cell terms into flat per-edge
/// (permutation, diagonal-exponent) buffers and accumulates each assignment's
/// full-space trace as a cyclic polynomial in the phase root. Exact integer
/// arithmetic throughout; one cyclotomic reduction at the very end.
struct TraceMachine {
    order: usize,
    modulus: usize,
    edge_count: usize,
    /// flattened cell term tables: per cell, per label key, the (edge, perm,
    /// diag exponents, global) data
    tables: Vec<Vec<CellTermData>>,
    radices: Vec<Vec<u32>>,
    /// group multiplication table
    mult: Vec<u16>,
    // scratch buffers
    perms: Vec<u16>,
    diags: Vec<u32>,
    touched: Vec<u32>,
    globals: u32,
    /// cyclic-polynomial accumulator for Σ traces, coefficients of ζ^k
    total: Vec<i128>,
}

struct CellTermData {
    sites: Vec<(u32, u16, Vec<u32>)>,
    global: u32,
}

impl TraceMachine {
    fn new(model: &ModelInstance) -> TraceMachine {
        let group = model.group();
        let order = group.order();
        let modulus = group.phase_modulus() as usize;
        let edge_count = model.lattice.edge_count();
        let mult: Vec<u16> = group
            .elements()
            .flat_map(|a| group.elements().map(move |b| (a, b)))
            .map(|(a, b)| group.mul(a, b).0)
            .collect();
        let mut tables = Vec::with_capacity(model.cells.len());
        let mut radices = Vec::with_capacity(model.cells.len());
        for (ci, cell) in model.cells.iter().enumerate() {
            let rad: Vec<u32> = cell.gens.iter().map(|g| g.order).collect();
            let mut table = Vec::new();
            for exps in crate::model::enumerate_tuples(&rad) {
                let term = model.cell_term(ci, &exps);
                let sites = term
                    .support()
                    .iter()
                    .map(|(&e, s)| {
                        (
                            e,
                            s.perm().0,
                            s.diag()
                                .iter()
                                .map(|p| p.exponent(modulus as u64) as u32)
                                .collect(),
                        )
                    })
                    .collect();
                table.push(CellTermData {
                    sites,
                    global: term.global().exponent(modulus as u64) as u32,
                });
            }
            tables.push(table);
            radices.push(rad);
        }
        TraceMachine {
            order,
            modulus,
            edge_count,
            tables,
            radices,
            mult,
            perms: vec![0; edge_count],
            diags: vec![0; edge_count * order],
            touched: Vec::new(),
            globals: 0,
            total: vec![0; modulus],
        }
    }

    /// Fold one assignment and add its full-space trace into the total.
    fn accumulate(&mut self, a: &[u32]) {
        // reset scratch from the previous run
        for &e in &self.touched {
            self.perms[e as usize] = 0;
            for d in &mut self.diags[e as usize * self.order..(e as usize + 1) * self.order] {
                *d = 0;
            }
        }
        self.touched.clear();
        self.globals = 0;
        let mut idx = 0;
        for (table, rad) in self.tables.iter().zip(&self.radices) {
            let exps = &a[idx..idx + rad.len()];
            idx += rad.len();
            let mut key = 0usize;
            for (&e, &r) in exps.iter().zip(rad) {
                key = key * r as usize + (e % r) as usize;
            }
            if key == 0 {
                continue;
            }
            let term = &table[key];
            self.globals = (self.globals + term.global) % self.modulus as u32;
            for (e, perm, diag) in &term.sites {
                let e = *e as usize;
                if !self.touched.contains(&(e as u32)) {
                    self.touched.push(e as u32);
                }
                // compose: new site applied after the accumulated one:
                // diag[k] += site.diag[current_perm·k]
                let p = self.perms[e] as usize;
                for k in 0..self.order {
                    let pk = self.mult[p * self.order + k] as usize;
                    self.diags[e * self.order + k] =
                        (self.diags[e * self.order + k] + diag[pk]) % self.modulus as u32;
                }
                self.perms[e] = self.mult[*perm as usize * self.order + p];
            }
        }
        // trace: zero if any touched edge has a nontrivial permutation;
        // else the product over edges of Σ_k ζ^diag, times ζ^global, times
        // |G| per untouched edge
        for &e in &self.touched {
            if self.perms[e as usize] != 0 {
                return;
            }
        }
        let m = self.modulus;
        let mut poly = vec![0i128; m];
        poly[self.globals as usize] = 1;
        for &e in &self.touched {
            let mut edge_poly = vec![0i128; m];
            for k in 0..self.order {
                edge_poly[self.diags[e as usize * self.order + k] as usize] += 1;
            }
            // cyclic convolution mod ζ^m = 1
            let mut next = vec![0i128; m];
            for (i, &ci) in poly.iter().enumerate() {
                if ci == 0 {
                    continue;
                }
                for (j, &cj) in edge_poly.iter().enumerate() {
                    if cj == 0 {
                        continue;
                    }
                    next[(i + j) % m] += ci * cj;
                }
            }
            poly = next;
        }
        let untouched = (self.edge_count - self.touched.len()) as u32;
        let scale = (self.order as i128).pow(untouched);
        for (t, &c) in self.total.iter_mut().zip(&poly) {
            *t += c * scale;
        }
    }

    /// Reduce the accumulated cyclic polynomial in the cyclotomic ring and
    /// divide by the assignment count.
    fn finish(&self, ring: &CycRing, denom: u128) -> Result<u128, OracleError> {
        let mut acc = ring.zero();
        for (k, &c) in self.total.iter().enumerate() {
            if c != 0 {
                acc = ring.add(&acc, &ring.scale(&ring.root(k as i64), c));
            }
        }
        finish(ring, acc, denom)
    }
}

fn assignment_count(moduli: &[u64]) -> Option<u128> {
    moduli
        .iter()
        .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128))
}

fn finish(ring: &CycRing, acc: Cyc, denom: u128) -> Result<u128, OracleError> {
    let total = ring.as_integer(&acc).ok_or(OracleError::NonIntegerResult)?;
    if total < 0 || !(total as u128).is_multiple_of(denom) {
        return Err(OracleError::NonIntegerResult);
    }
    Ok(total as u128 / denom)
}

/// Ground-space dimension by full enumeration of every term-power
/// assignment. No kernel structure is used anywhere.
pub fn gsd_dense(model: &ModelInstance, budget: &TraceBudget) -> Result<u128, OracleError> {
    let group = model.group();
    let dim = (group.order() as u128)
        .checked_pow(model.lattice.edge_count() as u32)
        .ok_or(OracleError::OverBudget {
            needed: u128::MAX,
            budget: budget.max_dense_dim,
        })?;
    if dim > budget.max_dense_dim {
        return Err(OracleError::OverBudget {
            needed: dim,
            budget: budget.max_dense_dim,
        });
    }
    let moduli = coord_moduli(model);
    let count = assignment_count(&moduli).ok_or(OracleError::OverBudget {
        needed: u128::MAX,
        budget: budget.max_trace_assignments,
    })?;
    let ring = CycRing::new(group.phase_modulus());
    let mut machine = TraceMachine::new(model);
    let mut a: AssignmentVector = vec![0; moduli.len()];
    loop {
        machine.accumulate(&a);
        // advance mixed-radix counter
        let mut pos = 0;
        loop {
            if pos == a.len() {
                return machine.finish(&ring, count);
            }
            a[pos] += 1;
            if (a[pos] as u64) < moduli[pos] {
                break;
            }
            a[pos] = 0;
            pos += 1;
        }
    }
}

/// Ground-space dimension summing only over the permutation-trivial
/// assignment subgroup (stage-1 kernel), where traces factorize edge-wise.
pub fn gsd_trace(model: &ModelInstance, budget: &TraceBudget) -> Result<u128, OracleError> {
    let group = model.group();
    let engine =
        StabilizerEngine::new_unchecked(model).map_err(|_| OracleError::NonIntegerResult)?;
    let moduli = coord_moduli(model);
    let count = assignment_count(&moduli).ok_or(OracleError::OverBudget {
        needed: u128::MAX,
        budget: budget.max_trace_assignments,
    })?;
    let modulus = group.phase_modulus();
    // embed the kernel subgroup into Z_L^n to enumerate it exactly once
    let scaled: Vec<Vec<u64>> = engine
        .perm_kernel()
        .iter()
        .map(|g| {
            g.iter()
                .zip(&moduli)
                .map(|(&x, &m)| (x as u64 % m) * (modulus / m))
                .collect()
        })
        .collect();
    let span = Span::from_generators(modulus, moduli.len(), &scaled);
    let subgroup_size = span.order().to_u128().ok_or(OracleError::OverBudget {
        needed: u128::MAX,
        budget: budget.max_trace_assignments,
    })?;
    if subgroup_size > budget.max_trace_assignments {
        return Err(OracleError::OverBudget {
            needed: subgroup_size,
            budget: budget.max_trace_assignments,
        });
    }
    let ring = CycRing::new(modulus);
    let mut machine = TraceMachine::new(model);
    let mut a: AssignmentVector = vec![0; moduli.len()];
    for v in span.enumerate() {
        for ((slot, &x), &m) in a.iter_mut().zip(&v).zip(&moduli) {
            *slot = (x / (modulus / m)) as u32;
        }
        machine.accumulate(&a);
    }
    machine.finish(&ring, count)
}

/// Number of violated cells when the operator acts on a ground state: cells
/// with any generator whose commutation scalar is not +1.
pub fn energy(model: &ModelInstance, op: &LatticeOperator) -> Result<usize, OracleError> {
    let group = model.group();
    let mut violated = 0;
    for cell in &model.cells {
        let mut hit = false;
        for gen in &cell.gens {
            match gen.op.commutation_phase(group, op) {
                CommutationResult::Scalar(p) if p.is_zero() => {}
                CommutationResult::Scalar(_) => hit = true,
                CommutationResult::NonScalar => {
                    return Err(OracleError::MalformedExcitation { cell: cell.cell })
                }
            }
        }
        if hit {
            violated += 1;
        }
    }
    Ok(violated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::Cocycle;
    use crate::group::FiniteAbelianGroup;
    use crate::lattice::{Axis, Lattice};
    use crate::model::build_h_alpha;
    use crate::phase::Phase;
    use crate::site::SiteOperator;

    #[test]
    fn dense_and_trace_agree_untwisted_2x2() {
        let g = FiniteAbelianGroup::z2z2();
        let m = build_h_alpha(Lattice::torus_2d(2, 2), Cocycle::trivial(g)).unwrap();
        let b = TraceBudget::default();
        assert_eq!(gsd_dense(&m, &b).unwrap(), 16);
        assert_eq!(gsd_trace(&m, &b).unwrap(), 16);
    }

    #[test]
    fn twisted_2x2_triple_agreement() {
        let m = build_h_alpha(Lattice::torus_2d(2, 2), Cocycle::canonical_z2z2()).unwrap();
        let b = TraceBudget::default();
        let dense = gsd_dense(&m, &b).unwrap();
        let trace = gsd_trace(&m, &b).unwrap();
        let engine = StabilizerEngine::new(&m).unwrap().analyze();
        assert_eq!(dense, trace);
        assert_eq!(trace, engine.gsd);
        assert_eq!(dense, 16);
    }

    #[test]
    fn twisted_odd_rows_trace_is_four() {
        let m = build_h_alpha(Lattice::torus_2d(2, 3), Cocycle::canonical_z2z2()).unwrap();
        let b = TraceBudget::default();
        assert_eq!(gsd_trace(&m, &b).unwrap(), 4);
    }

    #[test]
    fn frustrated_synthetic_model_traces_to_zero() {
        // flip the sign of one plaquette generator: its square enters the
        // kernel carrying -1, so the projector product annihilates everything
        let mut m = build_h_alpha(Lattice::torus_2d(2, 2), Cocycle::canonical_z2z2()).unwrap();
        let flipped = m.cells[0].gens[0].op.clone().scaled(Phase::HALF);
        m.cells[0].gens[0].op = flipped;
        let b = TraceBudget::default();
        assert_eq!(gsd_dense(&m, &b).unwrap(), 0);
    }

    #[test]
    fn energy_of_basic_excitations() {
        let alpha = Cocycle::canonical_z2z2();
        let m = build_h_alpha(Lattice::torus_2d(3, 3), alpha.clone()).unwrap();
        let g0 = m.group().clone();
        let a = g0.element(&[1, 0]);
        // identity costs nothing
        assert_eq!(energy(&m, &LatticeOperator::identity()).unwrap(), 0);
        // clock on a vertical edge: the two adjacent plaquettes
        let e = m.lattice.edge([1, 1, 0], Axis::Y).unwrap();
        let z = LatticeOperator::from_sites(&g0, [(e, SiteOperator::z(&g0, alpha.hat(a)))]);
        assert_eq!(energy(&m, &z).unwrap(), 2);
        // conjugate twisted shift on a vertical edge: both endpoint vertices
        // plus the right-adjacent plaquette
        let x = LatticeOperator::from_sites(&g0, [(e, SiteOperator::x_alpha_bar(&alpha, a))]);
        assert_eq!(energy(&m, &x).unwrap(), 3);
        // the plain twisted shift excites the left-adjacent plaquette instead
        let x = LatticeOperator::from_sites(&g0, [(e, SiteOperator::x_alpha(&alpha, a))]);
        assert_eq!(energy(&m, &x).unwrap(), 3);
    }

    #[test]
    fn over_budget_is_reported() {
        let m = build_h_alpha(Lattice::torus_2d(3, 3), Cocycle::canonical_z2z2()).unwrap();
        let tight = TraceBudget {
            max_trace_assignments: 2,
            max_dense_dim: 2,
        };
        assert!(matches!(
            gsd_dense(&m, &tight),
            Err(OracleError::OverBudget { .. })
        ));
        assert!(matches!(
            gsd_trace(&m, &tight),
            Err(OracleError::OverBudget { .. })
        ));
    }
}
