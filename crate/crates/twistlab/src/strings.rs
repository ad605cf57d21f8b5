//! Factories for excitation strings, membranes, planons, logical loops,
//! Wilson loops, and the Sierpinski-type fractal operators.
//!
//! Geometry conventions follow the lattice module: a twisted shift on a
//! vertical edge excites its left plaquette (plain twist) or right plaquette
//! (conjugate twist), so dyonic decorations go on the horizontal edges of
//! the violated column, and dipole rungs pair a conjugate column with a
//! plain column immediately to its right.

use crate::group::{GroupElement, Irrep};
use crate::lattice::{Axis, Cell, CellKind, EdgeId};
use crate::model::ModelInstance;
use crate::operator::LatticeOperator;
use crate::site::SiteOperator;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn matches(&self, row: i32) -> bool {
        (row.rem_euclid(2) == 1) == matches!(self, Parity::Odd)
    }

    pub fn flip(&self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Species {
    /// Z_χ along a dual path; `axis` is the direction the path travels.
    ChargeZ { chi: Irrep, axis: Axis },
    /// Plain shifts along a horizontal row of horizontal edges.
    FluxXHorizontal { g: GroupElement },
    /// Twisted shifts down a column of vertical edges; conj picks X^ᾱ.
    TwistedXVertical { g: GroupElement, conj: bool },
    /// Conjugate-plain rung pairs down two adjacent columns.
    DipolePair { g: GroupElement },
    /// Twisted vertical string with clock decorations on one sublattice.
    DecoratedDyon {
        g: GroupElement,
        conj: bool,
        sublattice: Parity,
    },
    /// 3D: plain-shift membrane on `axis`-oriented edges (patch ⊥ axis).
    MembraneX { g: GroupElement, axis: Axis },
    /// 3D: twisted membrane on z-oriented edges over an xy patch.
    MembraneXAlpha { g: GroupElement },
    /// 3D: conjugate layer below a plain layer; a loop of dipoles.
    MembraneDipole { g: GroupElement },
    /// 3D: twisted membrane tiled by decorated 1×2 blocks.
    DecoratedMembrane { g: GroupElement },
    /// X-cube: clocks on z-edges over an xy rectangle.
    PlanonZ { chi: Irrep },
    /// X-cube: dual-twisted clocks on y-edges over an xz rectangle.
    PlanonZBeta { chi: Irrep },
    /// X-cube: twisted/conjugate y-edge pairs over an xz rectangle.
    PlanonDipole { chi: Irrep },
    /// X-cube: plain-shift rectangle loop with corner y-edge decorations.
    DecoratedPlanon { g: GroupElement },
}

#[derive(Clone, Debug)]
pub struct StringSpec {
    pub species: Species,
    pub base: [i32; 3],
    /// length for strings; (m, n) extents for membranes and planons.
    pub extent: [usize; 2],
}

#[derive(Clone, Debug)]
pub struct StringBuild {
    pub op: LatticeOperator,
    /// Set when an odd decorated string leaves an endpoint plaquette
    /// excitation behind.
    pub leftover_endpoint: Option<Cell>,
}

#[derive(Debug, Clone)]
pub enum StringError {
    MissingEdge { base: [i32; 3], axis: Axis },
    NeedsDualTwist,
    GeometryOverflow,
}

impl std::fmt::Display for StringError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StringError::MissingEdge { base, axis } => {
                write!(f, "no edge at {base:?} along {axis:?}")
            }
            StringError::NeedsDualTwist => write!(f, "species needs the dual twisted clocks"),
            StringError::GeometryOverflow => write!(f, "operator does not fit the lattice"),
        }
    }
}

impl std::error::Error for StringError {}

fn need_edge(m: &ModelInstance, base: [i32; 3], axis: Axis) -> Result<EdgeId, StringError> {
    m.lattice
        .edge(base, axis)
        .ok_or(StringError::MissingEdge { base, axis })
}

pub fn make_string(m: &ModelInstance, spec: &StringSpec) -> Result<StringBuild, StringError> {
    let g0 = m.group().clone();
    let alpha = m.alpha().clone();
    let [bx, by, bz] = spec.base;
    let len = spec.extent[0] as i32;
    let mut op = LatticeOperator::identity();
    let mut leftover = None;
    match spec.species {
        Species::ChargeZ { chi, axis } => {
            for t in 0..len {
                let (base, eaxis) = match axis {
                    Axis::Y => ([bx, by + t, bz], Axis::X),
                    Axis::X => ([bx + t, by, bz], Axis::Y),
                    Axis::Z => ([bx, by, bz + t], Axis::Z),
                };
                let e = need_edge(m, base, eaxis)?;
                op.push(&g0, e, &SiteOperator::z(&g0, chi));
            }
        }
        Species::FluxXHorizontal { g } => {
            for t in 0..len {
                let e = need_edge(m, [bx + t, by, bz], Axis::X)?;
                op.push(&g0, e, &SiteOperator::x(&g0, g));
            }
        }
        Species::TwistedXVertical { g, conj } => {
            for t in 0..len {
                let e = need_edge(m, [bx, by + t, bz], Axis::Y)?;
                let site = if conj {
                    SiteOperator::x_alpha_bar(&alpha, g)
                } else {
                    SiteOperator::x_alpha(&alpha, g)
                };
                op.push(&g0, e, &site);
            }
        }
        Species::DipolePair { g } => {
            for t in 0..len {
                let e1 = need_edge(m, [bx, by + t, bz], Axis::Y)?;
                let e2 = need_edge(m, [bx + 1, by + t, bz], Axis::Y)?;
                op.push(&g0, e1, &SiteOperator::x_alpha_bar(&alpha, g));
                op.push(&g0, e2, &SiteOperator::x_alpha(&alpha, g));
            }
        }
        Species::DecoratedDyon { g, conj, sublattice } => {
            let hat = alpha.hat(g);
            // the violated plaquette column: right of the string for the
            // conjugate twist, left for the plain one
            let dec_col = if conj { bx } else { bx - 1 };
            for t in 0..len {
                let e = need_edge(m, [bx, by + t, bz], Axis::Y)?;
                let site = if conj {
                    SiteOperator::x_alpha_bar(&alpha, g)
                } else {
                    SiteOperator::x_alpha(&alpha, g)
                };
                op.push(&g0, e, &site);
            }
            // interior decoration rows by + 1 .. by + len - 1 on the chosen
            // sublattice; each clock cancels the plaquette pair around it
            let mut cancelled = vec![false; len as usize];
            for r in (by + 1)..(by + len) {
                if !sublattice.matches(r) {
                    continue;
                }
                let e = need_edge(m, [dec_col, r, bz], Axis::X)?;
                op.push(&g0, e, &SiteOperator::z(&g0, hat));
                for d in [r - 1, r] {
                    if d >= by && d < by + len {
                        cancelled[(d - by) as usize] = true;
                    }
                }
            }
            if let Some(i) = cancelled.iter().position(|&c| !c) {
                leftover = Some(Cell {
                    kind: CellKind::Plaquette,
                    coords: [dec_col, by + i as i32, bz],
                });
            }
        }
        Species::MembraneX { g, axis } => {
            let (m1, n1) = (spec.extent[0] as i32, spec.extent[1] as i32);
            for u in 0..m1 {
                for v in 0..n1 {
                    let base = match axis {
                        Axis::X => [bx, by + u, bz + v],
                        Axis::Y => [bx + u, by, bz + v],
                        Axis::Z => [bx + u, by + v, bz],
                    };
                    let e = need_edge(m, base, axis)?;
                    op.push(&g0, e, &SiteOperator::x(&g0, g));
                }
            }
        }
        Species::MembraneXAlpha { g } => {
            let (m1, n1) = (spec.extent[0] as i32, spec.extent[1] as i32);
            for u in 0..m1 {
                for v in 0..n1 {
                    let e = need_edge(m, [bx + u, by + v, bz], Axis::Z)?;
                    op.push(&g0, e, &SiteOperator::x_alpha(&alpha, g));
                }
            }
        }
        Species::MembraneDipole { g } => {
            let (m1, n1) = (spec.extent[0] as i32, spec.extent[1] as i32);
            for u in 0..m1 {
                for v in 0..n1 {
                    let lower = need_edge(m, [bx + u, by + v, bz], Axis::Z)?;
                    let upper = need_edge(m, [bx + u, by + v, bz + 1], Axis::Z)?;
                    op.push(&g0, lower, &SiteOperator::x_alpha_bar(&alpha, g));
                    op.push(&g0, upper, &SiteOperator::x_alpha(&alpha, g));
                }
            }
        }
        Species::DecoratedMembrane { g } => {
            // tile with 1×2 blocks along x: X^α on two adjacent z-edges plus
            // a clock on the x-edge between their bases
            let (m1, n1) = (spec.extent[0] as i32, spec.extent[1] as i32);
            if m1 % 2 != 0 {
                return Err(StringError::GeometryOverflow);
            }
            let hat = alpha.hat(g);
            for u in (0..m1).step_by(2) {
                for v in 0..n1 {
                    let e1 = need_edge(m, [bx + u, by + v, bz], Axis::Z)?;
                    let e2 = need_edge(m, [bx + u + 1, by + v, bz], Axis::Z)?;
                    let dec = need_edge(m, [bx + u, by + v, bz], Axis::X)?;
                    op.push(&g0, e1, &SiteOperator::x_alpha(&alpha, g));
                    op.push(&g0, e2, &SiteOperator::x_alpha(&alpha, g));
                    op.push(&g0, dec, &SiteOperator::z(&g0, hat));
                }
            }
        }
        Species::PlanonZ { chi } => {
            let (m1, n1) = (spec.extent[0] as i32, spec.extent[1] as i32);
            for u in 0..m1 {
                for v in 0..n1 {
                    let e = need_edge(m, [bx + u, by + v, bz], Axis::Z)?;
                    op.push(&g0, e, &SiteOperator::z(&g0, chi));
                }
            }
        }
        Species::PlanonZBeta { chi } => {
            let reps = m.dual_reps().ok_or(StringError::NeedsDualTwist)?;
            let (m1, n1) = (spec.extent[0] as i32, spec.extent[1] as i32);
            for u in 0..m1 {
                for v in 0..n1 {
                    let e = need_edge(m, [bx + u, by, bz + v], Axis::Y)?;
                    op.push(&g0, e, &reps.z_beta(chi));
                }
            }
        }
        Species::PlanonDipole { chi } => {
            let reps = m.dual_reps().ok_or(StringError::NeedsDualTwist)?;
            let (m1, n1) = (spec.extent[0] as i32, spec.extent[1] as i32);
            for u in 0..m1 {
                for v in 0..n1 {
                    let upper = need_edge(m, [bx + u, by, bz + v], Axis::Y)?;
                    let lower = need_edge(m, [bx + u, by - 1, bz + v], Axis::Y)?;
                    op.push(&g0, upper, &reps.z_beta(chi));
                    op.push(&g0, lower, &reps.z_beta_bar(chi));
                }
            }
        }
        Species::DecoratedPlanon { g } => {
            let reps = m.dual_reps().ok_or(StringError::NeedsDualTwist)?;
            let duality = m.duality().ok_or(StringError::NeedsDualTwist)?;
            let hat = duality.inverse_of(g);
            let (m1, n1) = (spec.extent[0] as i32, spec.extent[1] as i32);
            // rectangle loop of plain shifts in the xz-plane at fixed y
            for u in 0..m1 {
                for z in [bz, bz + n1] {
                    let e = need_edge(m, [bx + u, by, z], Axis::X)?;
                    op.push(&g0, e, &SiteOperator::x(&g0, g));
                }
            }
            for v in 0..n1 {
                for x in [bx, bx + m1] {
                    let e = need_edge(m, [x, by, bz + v], Axis::Z)?;
                    op.push(&g0, e, &SiteOperator::x(&g0, g));
                }
            }
            // corner decorations on the y-edges below the plane
            for x in [bx, bx + m1] {
                for z in [bz, bz + n1] {
                    let e = need_edge(m, [x, by - 1, z], Axis::Y)?;
                    op.push(&g0, e, &reps.z_beta_bar(hat));
                }
            }
        }
    }
    Ok(StringBuild {
        op,
        leftover_endpoint: leftover,
    })
}

// ---- logical loop factories (2D tori) ----

/// Horizontal loop of plain shifts on the horizontal edges of one row.
pub fn logical_x1(m: &ModelInstance, g: GroupElement, row: i32) -> LatticeOperator {
    let g0 = m.group().clone();
    let px = m.lattice.extent(Axis::X) as i32;
    LatticeOperator::from_sites(
        &g0,
        (0..px).map(|i| {
            (
                m.lattice.edge([i, row, 0], Axis::X).unwrap(),
                SiteOperator::x(&g0, g),
            )
        }),
    )
}

/// Vertical loop of clocks on the horizontal edges of one column.
pub fn logical_z1(m: &ModelInstance, chi: Irrep, col: i32) -> LatticeOperator {
    let g0 = m.group().clone();
    let py = m.lattice.extent(Axis::Y) as i32;
    LatticeOperator::from_sites(
        &g0,
        (0..py).map(|j| {
            (
                m.lattice.edge([col, j, 0], Axis::X).unwrap(),
                SiteOperator::z(&g0, chi),
            )
        }),
    )
}

/// Horizontal loop of clocks on the vertical edges of one row.
pub fn logical_z2(m: &ModelInstance, chi: Irrep, row: i32) -> LatticeOperator {
    let g0 = m.group().clone();
    let px = m.lattice.extent(Axis::X) as i32;
    LatticeOperator::from_sites(
        &g0,
        (0..px).map(|i| {
            (
                m.lattice.edge([i, row, 0], Axis::Y).unwrap(),
                SiteOperator::z(&g0, chi),
            )
        }),
    )
}

/// Vertical dyonic loop: a twisted-shift column with clock decorations on
/// one horizontal sublattice. Needs an even number of rows to close.
pub fn logical_y2(
    m: &ModelInstance,
    g: GroupElement,
    col: i32,
    sublattice: Parity,
    conj: bool,
) -> LatticeOperator {
    let g0 = m.group().clone();
    let alpha = m.alpha();
    let py = m.lattice.extent(Axis::Y) as i32;
    let hat = alpha.hat(g);
    let dec_col = if conj { col } else { col - 1 };
    let mut op = LatticeOperator::identity();
    for j in 0..py {
        let e = m.lattice.edge([col, j, 0], Axis::Y).unwrap();
        let site = if conj {
            SiteOperator::x_alpha_bar(alpha, g)
        } else {
            SiteOperator::x_alpha(alpha, g)
        };
        op.push(&g0, e, &site);
        if sublattice.matches(j) {
            let d = m.lattice.edge([dec_col, j, 0], Axis::X).unwrap();
            op.push(&g0, d, &SiteOperator::z(&g0, hat));
        }
    }
    op
}

/// Horizontal dyonic loop for the fully twisted model: twisted shifts along
/// a row of horizontal edges with decorations on one vertical sublattice.
pub fn logical_y2_horizontal(
    m: &ModelInstance,
    g: GroupElement,
    row: i32,
    sublattice: Parity,
    conj: bool,
) -> LatticeOperator {
    let g0 = m.group().clone();
    let alpha = m.alpha();
    let px = m.lattice.extent(Axis::X) as i32;
    let hat = alpha.hat(g);
    // a plain twisted shift on a horizontal edge excites the plaquette
    // below it; the conjugate one excites the plaquette above
    let dec_row = if conj { row } else { row - 1 };
    let mut op = LatticeOperator::identity();
    for i in 0..px {
        let e = m.lattice.edge([i, row, 0], Axis::X).unwrap();
        let site = if conj {
            SiteOperator::x_alpha_bar(alpha, g)
        } else {
            SiteOperator::x_alpha(alpha, g)
        };
        op.push(&g0, e, &site);
        if sublattice.matches(i) {
            let d = m.lattice.edge([i, dec_row, 0], Axis::Y).unwrap();
            op.push(&g0, d, &SiteOperator::z(&g0, hat));
        }
    }
    op
}

/// The doubled loop: conjugate twist on one column, plain twist on the next.
/// Equals the product of that plaquette column's terms.
pub fn doubled_loop(m: &ModelInstance, g: GroupElement, col: i32) -> LatticeOperator {
    let g0 = m.group().clone();
    let alpha = m.alpha();
    let py = m.lattice.extent(Axis::Y) as i32;
    let mut op = LatticeOperator::identity();
    for j in 0..py {
        let e1 = m.lattice.edge([col, j, 0], Axis::Y).unwrap();
        let e2 = m.lattice.edge([col + 1, j, 0], Axis::Y).unwrap();
        op.push(&g0, e1, &SiteOperator::x_alpha_bar(alpha, g));
        op.push(&g0, e2, &SiteOperator::x_alpha(alpha, g));
    }
    op
}

/// Bare vertical loop of plain shifts (not a symmetry of the twisted model).
pub fn bare_vertical_x_loop(m: &ModelInstance, g: GroupElement, col: i32) -> LatticeOperator {
    let g0 = m.group().clone();
    let py = m.lattice.extent(Axis::Y) as i32;
    LatticeOperator::from_sites(
        &g0,
        (0..py).map(|j| {
            (
                m.lattice.edge([col, j, 0], Axis::Y).unwrap(),
                SiteOperator::x(&g0, g),
            )
        }),
    )
}

// ---- Wilson loops ----

#[derive(Clone, Copy, Debug)]
pub struct Rect {
    pub x0: i32,
    pub y0: i32,
    pub w: i32,
    pub h: i32,
}

/// The decorated rectangular Wilson loop equal (modulo vertex terms) to the
/// product of plaquette terms over the rectangle. The even-height form only
/// needs clock decorations along the inside columns; the odd-height form
/// mixes in vertical decorations along the bottom row.
pub fn wilson_loop(m: &ModelInstance, g: GroupElement, rect: Rect) -> LatticeOperator {
    let g0 = m.group().clone();
    let alpha = m.alpha();
    let hat = alpha.hat(g);
    let Rect { x0, y0, w, h } = rect;
    let mut op = LatticeOperator::identity();
    for j in y0..y0 + h {
        let left = m.lattice.edge([x0, j, 0], Axis::Y).unwrap();
        let right = m.lattice.edge([x0 + w, j, 0], Axis::Y).unwrap();
        op.push(&g0, left, &SiteOperator::x_alpha_bar(alpha, g));
        op.push(&g0, right, &SiteOperator::x_alpha(alpha, g));
    }
    for i in x0..x0 + w {
        let bottom = m.lattice.edge([i, y0, 0], Axis::X).unwrap();
        let top = m.lattice.edge([i, y0 + h, 0], Axis::X).unwrap();
        op.push(&g0, bottom, &SiteOperator::x(&g0, g));
        op.push(&g0, top, &SiteOperator::x(&g0, g));
    }
    if h % 2 == 0 {
        for r in (y0 + 1..y0 + h).step_by(2) {
            for c in [x0, x0 + w - 1] {
                let e = m.lattice.edge([c, r, 0], Axis::X).unwrap();
                op.push(&g0, e, &SiteOperator::z(&g0, hat));
            }
        }
    } else {
        for r in (y0 + 2..y0 + h).step_by(2) {
            for c in [x0, x0 + w - 1] {
                let e = m.lattice.edge([c, r, 0], Axis::X).unwrap();
                op.push(&g0, e, &SiteOperator::z(&g0, hat));
            }
        }
        for c in x0 + 1..x0 + w {
            let e = m.lattice.edge([c, y0, 0], Axis::Y).unwrap();
            op.push(&g0, e, &SiteOperator::z(&g0, hat));
        }
    }
    op
}

/// The complement form: twists swapped and decorations outside, equal to
/// the product of plaquette terms over the complement of the rectangle on
/// an even×even torus.
pub fn wilson_complement(m: &ModelInstance, g: GroupElement, rect: Rect) -> LatticeOperator {
    let g0 = m.group().clone();
    let alpha = m.alpha();
    let hat = alpha.hat(g);
    let Rect { x0, y0, w, h } = rect;
    let mut op = LatticeOperator::identity();
    for j in y0..y0 + h {
        let left = m.lattice.edge([x0, j, 0], Axis::Y).unwrap();
        let right = m.lattice.edge([x0 + w, j, 0], Axis::Y).unwrap();
        op.push(&g0, left, &SiteOperator::x_alpha(alpha, g));
        op.push(&g0, right, &SiteOperator::x_alpha_bar(alpha, g));
    }
    for i in x0..x0 + w {
        let bottom = m.lattice.edge([i, y0, 0], Axis::X).unwrap();
        let top = m.lattice.edge([i, y0 + h, 0], Axis::X).unwrap();
        op.push(&g0, bottom, &SiteOperator::x(&g0, g));
        op.push(&g0, top, &SiteOperator::x(&g0, g));
    }
    for r in (y0 + 1..y0 + h).step_by(2) {
        for c in [x0 - 1, x0 + w] {
            let e = m.lattice.edge([c, r, 0], Axis::X).unwrap();
            op.push(&g0, e, &SiteOperator::z(&g0, hat));
        }
    }
    op
}

// ---- fractal operators ----

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FractalKind {
    /// Twisted shifts on vertical edges, dual clocks on horizontal pairs;
    /// corner excitations are plaquettes.
    PlaquetteType,
    /// Dual clocks on horizontal edges, twisted shifts on vertical pairs;
    /// corner excitations are vertices.
    VertexType,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Handedness {
    Right,
    Left,
}

/// One Sierpinski triangle of the given generation. The support follows the
/// rule-90 automaton column by column; on a vertically periodic lattice with
/// 2^n rows the automaton dies out and the triangle closes on itself.
pub fn fractal_triangle(
    m: &ModelInstance,
    kind: FractalKind,
    handed: Handedness,
    g: GroupElement,
    base: [i32; 2],
    generation: usize,
) -> Result<LatticeOperator, StringError> {
    let g0 = m.group().clone();
    let alpha = m.alpha().clone();
    let reps = m.dual_reps().ok_or(StringError::NeedsDualTwist)?.clone();
    let hat = alpha.hat(g);
    let step = match handed {
        Handedness::Right => 1,
        Handedness::Left => -1,
    };
    let conj = handed == Handedness::Left;
    let x_site = |_: ()| -> SiteOperator {
        if conj {
            SiteOperator::x_alpha_bar(&alpha, g)
        } else {
            SiteOperator::x_alpha(&alpha, g)
        }
    };
    let z_site = |_: ()| -> SiteOperator {
        if conj {
            reps.z_beta_bar(hat)
        } else {
            reps.z_beta(hat)
        }
    };
    let wrap = |y: i32| -> i32 {
        if m.lattice.is_periodic(Axis::Y) {
            y.rem_euclid(m.lattice.extent(Axis::Y) as i32)
        } else {
            y
        }
    };
    let mut op = LatticeOperator::identity();
    let mut rows: Vec<i32> = vec![wrap(base[1])];
    for k in 0..generation {
        if rows.is_empty() {
            break;
        }
        let x = base[0] + step * k as i32;
        for &y in &rows {
            match kind {
                FractalKind::PlaquetteType => {
                    // twisted shift on the vertical edge, dual clocks on the
                    // horizontal pair beside it
                    let e = need_edge(m, [x, y, 0], Axis::Y)?;
                    op.push(&g0, e, &x_site(()));
                    let dec_x = if conj { x - 1 } else { x };
                    for r in [y, y + 1] {
                        let e = need_edge(m, [dec_x, wrap(r), 0], Axis::X)?;
                        op.push(&g0, e, &z_site(()));
                    }
                }
                FractalKind::VertexType => {
                    // dual clock on the horizontal edge, twisted shifts on
                    // the vertical pair beside it
                    let e = need_edge(m, [x, y, 0], Axis::X)?;
                    op.push(&g0, e, &z_site(()));
                    let pair_x = if conj { x } else { x + 1 };
                    for r in [y - 1, y] {
                        let e = need_edge(m, [pair_x, wrap(r), 0], Axis::Y)?;
                        op.push(&g0, e, &x_site(()));
                    }
                }
            }
        }
        // rule 90: next column is the symmetric difference of the shifted
        // neighbor rows
        let mut next: Vec<i32> = Vec::new();
        for &y in &rows {
            for d in [-1i32, 1] {
                let r = wrap(y + d);
                if let Some(pos) = next.iter().position(|&q| q == r) {
                    next.remove(pos);
                } else {
                    next.push(r);
                }
            }
        }
        next.sort();
        rows = next;
    }
    Ok(op)
}

/// Bow-tie: the right triangle combined with its left-handed mirror grown
/// from the same center.
pub fn fractal_bowtie(
    m: &ModelInstance,
    kind: FractalKind,
    g: GroupElement,
    base: [i32; 2],
    generation: usize,
) -> Result<LatticeOperator, StringError> {
    let g0 = m.group().clone();
    let right = fractal_triangle(m, kind, Handedness::Right, g, base, generation)?;
    let left_base = match kind {
        FractalKind::PlaquetteType => [base[0] - 1, base[1]],
        FractalKind::VertexType => [base[0] - 1, base[1]],
    };
    let left = fractal_triangle(m, kind, Handedness::Left, g, left_base, generation)?;
    Ok(right.compose(&g0, &left))
}
