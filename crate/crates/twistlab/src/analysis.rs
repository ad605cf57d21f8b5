//! Physics-level studies: syndromes, confinement scans, braiding phases,
//! boundary condensation, and logical-operator relation tables.

use serde::Serialize;

use crate::engine::{Membership, StabilizerEngine};
use crate::group::{GroupElement, Irrep};
use crate::lattice::{Axis, BoundaryStyle, Cell, CellKind};
use crate::model::{BoundarySpec, ModelInstance};
use crate::operator::LatticeOperator;
use crate::phase::Phase;
use crate::site::{CommutationResult, SiteOperator};
use crate::strings::{make_string, Parity, Species, StringSpec};

#[derive(Clone, Debug, Serialize)]
pub struct SyndromeEntry {
    pub cell: Cell,
    pub generator: usize,
    pub phase: Phase,
}

/// Violated-term list of an excitation operator.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Syndrome {
    pub entries: Vec<SyndromeEntry>,
}

impl Syndrome {
    pub fn violated_cells(&self) -> Vec<Cell> {
        let mut cells: Vec<Cell> = self.entries.iter().map(|e| e.cell).collect();
        cells.sort();
        cells.dedup();
        cells
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone)]
pub enum AnalysisError {
    /// The operator fails to phase-commute with a term.
    Malformed { cell: Cell },
    /// Two operators are not mutually monomial-compatible.
    NonScalarBraid,
    /// The model does not carry the boundaries this probe requires.
    MissingBoundary,
    StringGeometry(String),
}

impl std::fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnalysisError::Malformed { cell } => {
                write!(f, "operator does not phase-commute with the term at {cell:?}")
            }
            AnalysisError::NonScalarBraid => write!(f, "braiding pair is not scalar-commuting"),
            AnalysisError::MissingBoundary => write!(f, "probe requires matching boundaries"),
            AnalysisError::StringGeometry(e) => write!(f, "string geometry: {e}"),
        }
    }
}

impl std::error::Error for AnalysisError {}

/// Exact violated-cell list with phases.
pub fn syndrome(m: &ModelInstance, op: &LatticeOperator) -> Result<Syndrome, AnalysisError> {
    let group = m.group();
    let mut out = Syndrome::default();
    for cell in &m.cells {
        for (gi, gen) in cell.gens.iter().enumerate() {
            match gen.op.commutation_phase(group, op) {
                CommutationResult::Scalar(p) if p.is_zero() => {}
                CommutationResult::Scalar(p) => out.entries.push(SyndromeEntry {
                    cell: cell.cell,
                    generator: gi,
                    phase: p,
                }),
                CommutationResult::NonScalar => {
                    return Err(AnalysisError::Malformed { cell: cell.cell })
                }
            }
        }
    }
    Ok(out)
}

/// Syndrome restricted to the boundary Hamiltonian cells.
pub fn boundary_syndrome(
    m: &ModelInstance,
    op: &LatticeOperator,
) -> Result<Syndrome, AnalysisError> {
    let group = m.group();
    let mut out = Syndrome::default();
    for &ci in &m.boundary_cell_indices {
        let cell = &m.cells[ci];
        for (gi, gen) in cell.gens.iter().enumerate() {
            match gen.op.commutation_phase(group, op) {
                CommutationResult::Scalar(p) if p.is_zero() => {}
                CommutationResult::Scalar(p) => out.entries.push(SyndromeEntry {
                    cell: cell.cell,
                    generator: gi,
                    phase: p,
                }),
                CommutationResult::NonScalar => {
                    return Err(AnalysisError::Malformed { cell: cell.cell })
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Confinement {
    Deconfined,
    Confined,
    Irregular,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfinementVerdict {
    pub lengths: Vec<usize>,
    pub energies: Vec<usize>,
    /// slope as an exact fraction (numerator, denominator)
    pub slope: (i64, i64),
    pub intercept: i64,
    pub classification: Confinement,
}

/// Exact affine fit of string energy against length; residuals must vanish.
pub fn confinement_scan(
    m: &ModelInstance,
    spec_for: impl Fn(usize) -> StringSpec,
    lengths: &[usize],
) -> Result<ConfinementVerdict, AnalysisError> {
    assert!(lengths.len() >= 3, "need at least three lengths");
    let mut energies = Vec::with_capacity(lengths.len());
    for &len in lengths {
        let spec = spec_for(len);
        let build = make_string(m, &spec).map_err(|e| AnalysisError::StringGeometry(e.to_string()))?;
        let e = crate::oracle::energy(m, &build.op)
            .map_err(|_| AnalysisError::NonScalarBraid)?;
        energies.push(e);
    }
    let l0 = lengths[0] as i64;
    let e0 = energies[0] as i64;
    let dl = lengths[1] as i64 - l0;
    let de = energies[1] as i64 - e0;
    // slope de/dl reduced
    let g = crate::phase::gcd(de.unsigned_abs(), dl.unsigned_abs()).max(1);
    let slope = (de / g as i64, dl / g as i64);
    let affine = lengths.iter().zip(&energies).all(|(&l, &e)| {
        // e == e0 + slope·(l - l0) exactly
        (e as i64 - e0) * slope.1 == slope.0 * (l as i64 - l0)
    });
    let classification = if !affine {
        Confinement::Irregular
    } else if slope.0 == 0 {
        Confinement::Deconfined
    } else {
        Confinement::Confined
    };
    let intercept = e0 - slope.0 * l0 / slope.1.max(1);
    Ok(ConfinementVerdict {
        lengths: lengths.to_vec(),
        energies,
        slope,
        intercept,
        classification,
    })
}

/// The scalar commutation phase between a closed loop and a crossing string.
pub fn braiding_phase(
    m: &ModelInstance,
    loop_op: &LatticeOperator,
    crossing: &LatticeOperator,
) -> Result<Phase, AnalysisError> {
    match loop_op.commutation_phase(m.group(), crossing) {
        CommutationResult::Scalar(p) => Ok(p),
        CommutationResult::NonScalar => Err(AnalysisError::NonScalarBraid),
    }
}

// ---- boundary condensation ----

#[derive(Clone, Debug, Serialize)]
pub struct CondensationRow {
    pub species: String,
    pub label: String,
    /// whole syndrome (bulk and boundary terms) empty
    pub condensed: bool,
    /// syndrome restricted to boundary terms empty
    pub boundary_clear: bool,
    /// some term pair was not even scalar-commuting
    pub malformed: bool,
}

fn probe_row(
    m: &ModelInstance,
    species: &str,
    label: String,
    op: &LatticeOperator,
) -> CondensationRow {
    let full = syndrome(m, op);
    let bdry = boundary_syndrome(m, op);
    match (full, bdry) {
        (Ok(f), Ok(b)) => CondensationRow {
            species: species.into(),
            label,
            condensed: f.is_empty(),
            boundary_clear: b.is_empty(),
            malformed: false,
        },
        _ => CondensationRow {
            species: species.into(),
            label,
            condensed: false,
            boundary_clear: false,
            malformed: true,
        },
    }
}

fn element_name(m: &ModelInstance, g: GroupElement) -> String {
    format!("{:?}", m.group().tuple(g))
}

fn irrep_name(m: &ModelInstance, chi: Irrep) -> String {
    format!("{:?}", m.group().irrep_tuple(chi))
}

/// Condensation table for a model with matching boundaries on both ends of
/// one open axis: strings of every relevant species span the open direction
/// and condense exactly when the whole syndrome is empty.
pub fn condensation_table(m: &ModelInstance) -> Result<Vec<CondensationRow>, AnalysisError> {
    let spec = m.boundaries.first().ok_or(AnalysisError::MissingBoundary)?;
    let axis = spec.side.axis();
    if !m
        .boundaries
        .iter()
        .any(|b| b.side != spec.side && b.side.axis() == axis)
    {
        return Err(AnalysisError::MissingBoundary);
    }
    let g0 = m.group().clone();
    let alpha = m.alpha().clone();
    let px = m.lattice.extent(Axis::X) as i32;
    let py = m.lattice.extent(Axis::Y) as i32;
    let mut rows = Vec::new();
    match (axis, spec.style) {
        (Axis::X, style) => {
            // charges travel horizontally on vertical edges; fluxes on
            // horizontal edges (danglers included when rough)
            for chi in g0.irreps().skip(1) {
                let mut op = LatticeOperator::identity();
                for i in 0..=px {
                    if let Some(e) = m.lattice.edge([i, 1, 0], Axis::Y) {
                        op.push(&g0, e, &SiteOperator::z(&g0, chi));
                    }
                }
                rows.push(probe_row(m, "charge", irrep_name(m, chi), &op));
            }
            for g in g0.elements().skip(1) {
                let mut op = LatticeOperator::identity();
                let range = if style == BoundaryStyle::Rough {
                    -1..=px
                } else {
                    0..=px - 1
                };
                for i in range {
                    if let Some(e) = m.lattice.edge([i, 1, 0], Axis::X) {
                        op.push(&g0, e, &SiteOperator::x(&g0, g));
                    }
                }
                rows.push(probe_row(m, "flux", element_name(m, g), &op));
            }
        }
        (Axis::Y, BoundaryStyle::Smooth) => {
            for chi in g0.irreps().skip(1) {
                // termination on the boundary horizontal edges
                let mut op = LatticeOperator::identity();
                for j in 0..=py {
                    if let Some(e) = m.lattice.edge([1, j, 0], Axis::X) {
                        op.push(&g0, e, &SiteOperator::z(&g0, chi));
                    }
                }
                rows.push(probe_row(m, "charge_h_term", irrep_name(m, chi), &op));
                // termination on the lowest/highest vertical edges instead
                let mut op = LatticeOperator::identity();
                for j in 1..py {
                    if let Some(e) = m.lattice.edge([1, j, 0], Axis::X) {
                        op.push(&g0, e, &SiteOperator::z(&g0, chi));
                    }
                }
                for j in [0, py - 1] {
                    if let Some(e) = m.lattice.edge([1, j, 0], Axis::Y) {
                        op.push(&g0, e, &SiteOperator::z(&g0, chi));
                    }
                }
                rows.push(probe_row(m, "charge_v_term", irrep_name(m, chi), &op));
            }
            for g in g0.elements().skip(1) {
                let build = make_string(
                    m,
                    &StringSpec {
                        species: Species::DecoratedDyon {
                            g,
                            conj: false,
                            sublattice: Parity::Odd,
                        },
                        base: [1, 0, 0],
                        extent: [py as usize, 0],
                    },
                )
                .map_err(|e| AnalysisError::StringGeometry(e.to_string()))?;
                rows.push(probe_row(m, "decorated_flux", element_name(m, g), &build.op));
            }
            for g in g0.elements().skip(1) {
                let build = make_string(
                    m,
                    &StringSpec {
                        species: Species::DipolePair { g },
                        base: [1, 0, 0],
                        extent: [py as usize, 0],
                    },
                )
                .map_err(|e| AnalysisError::StringGeometry(e.to_string()))?;
                rows.push(probe_row(m, "dipole", element_name(m, g), &build.op));
            }
        }
        (Axis::Z, _) => return Err(AnalysisError::MissingBoundary),
        (Axis::Y, BoundaryStyle::Rough) => {
            for chi in g0.irreps().skip(1) {
                let mut op = LatticeOperator::identity();
                for j in 0..=py {
                    if let Some(e) = m.lattice.edge([1, j, 0], Axis::X) {
                        op.push(&g0, e, &SiteOperator::z(&g0, chi));
                    }
                }
                rows.push(probe_row(m, "charge", irrep_name(m, chi), &op));
            }
            for g in g0.elements().skip(1) {
                // dipole extended onto the danglers at both ends
                let mut op = LatticeOperator::identity();
                for j in -1..=py {
                    if let (Some(e1), Some(e2)) = (
                        m.lattice.edge([1, j, 0], Axis::Y),
                        m.lattice.edge([2, j, 0], Axis::Y),
                    ) {
                        op.push(&g0, e1, &SiteOperator::x_alpha_bar(&alpha, g));
                        op.push(&g0, e2, &SiteOperator::x_alpha(&alpha, g));
                    }
                }
                rows.push(probe_row(m, "dipole", element_name(m, g), &op));
            }
            for g in g0.elements().skip(1) {
                // vertically decorated flux string including danglers
                let hat = alpha.hat(g);
                let mut op = LatticeOperator::identity();
                for j in -1..=py {
                    if let Some(e) = m.lattice.edge([1, j, 0], Axis::Y) {
                        op.push(&g0, e, &SiteOperator::x_alpha(&alpha, g));
                    }
                }
                for r in (0..=py).step_by(2) {
                    if let Some(e) = m.lattice.edge([0, r, 0], Axis::X) {
                        op.push(&g0, e, &SiteOperator::z(&g0, hat));
                    }
                }
                rows.push(probe_row(m, "decorated_flux", element_name(m, g), &op));
            }
        }
    }
    Ok(rows)
}

// ---- logical relation tables ----

#[derive(Clone, Debug, Serialize)]
pub struct RelationRow {
    pub name: String,
    pub in_stabilizer: bool,
    pub phase_only: Option<Phase>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairPhase {
    pub a: String,
    pub b: String,
    pub phase: Option<Phase>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationTable {
    pub pairwise: Vec<PairPhase>,
    pub relations: Vec<RelationRow>,
}

/// Pairwise commutation phases of named operators plus membership results
/// for stated product relations (lhs·rhs⁻¹ should sit in the stabilizer).
pub fn logical_relations(
    engine: &StabilizerEngine,
    named: &[(String, LatticeOperator)],
    relations: &[(String, Vec<usize>, Vec<usize>)],
) -> RelationTable {
    let group = engine.model().group().clone();
    let mut table = RelationTable::default();
    for i in 0..named.len() {
        for j in (i + 1)..named.len() {
            let phase = match named[i].1.commutation_phase(&group, &named[j].1) {
                CommutationResult::Scalar(p) => Some(p),
                CommutationResult::NonScalar => None,
            };
            table.pairwise.push(PairPhase {
                a: named[i].0.clone(),
                b: named[j].0.clone(),
                phase,
            });
        }
    }
    for (name, lhs, rhs) in relations {
        let mut op = LatticeOperator::identity();
        for &i in lhs {
            op = op.compose(&group, &named[i].1);
        }
        for &i in rhs {
            op = op.compose(&group, &named[i].1.dagger(&group));
        }
        let m = engine.is_member(&op);
        table.relations.push(RelationRow {
            name: name.clone(),
            in_stabilizer: m == Membership::InStabilizer,
            phase_only: match m {
                Membership::PhaseOnly(p) => Some(p),
                _ => None,
            },
        });
    }
    table
}

/// Count violated plaquette/vertex cells split by kind, a convenience for
/// matching excitation figures.
pub fn syndrome_census(s: &Syndrome) -> (usize, usize) {
    let cells = s.violated_cells();
    let p = cells
        .iter()
        .filter(|c| {
            matches!(
                c.kind,
                CellKind::Plaquette | CellKind::FaceXY | CellKind::FaceYZ | CellKind::FaceXZ | CellKind::Cube
            )
        })
        .count();
    let v = cells.iter().filter(|c| c.kind == CellKind::Vertex).count();
    (p, v)
}

/// Convenience: the boundary spec list as serializable labels.
pub fn boundary_labels(specs: &[BoundarySpec]) -> Vec<String> {
    specs
        .iter()
        .map(|b| {
            format!(
                "{:?}/{:?}/|H|={} twist={:?}",
                b.side,
                b.style,
                b.subgroup.len(),
                b.twist
            )
        })
        .collect()
}
