//! Square and cubic lattice geometry with periodic or open boundaries.
//!
//! Vertices sit at integer points. The horizontal edge h(i,j) runs from
//! vertex (i,j) to (i+1,j); the vertical edge v(i,j) from (i,j) to (i,j+1).
//! The plaquette p(i,j) has v(i,j) as its left edge, v(i+1,j) as its right,
//! h(i,j) bottom and h(i,j+1) top. Row parity (the odd/even sublattices used
//! by decorated strings) is the parity of an edge's base-vertex y coordinate,
//! with row 0 even.
//!
//! Open axes cut the lattice without dangling edges (smooth) or keep the
//! half-edges sticking out (rough); danglers are addressed by base
//! coordinates one step outside the vertex range.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryStyle {
    Rough,
    Smooth,
}

/// A lattice side: axis plus low/high end (Left = low x, Bottom = low y).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub fn axis(self) -> Axis {
        match self {
            Side::Left | Side::Right => Axis::X,
            Side::Bottom | Side::Top => Axis::Y,
        }
    }

    pub fn is_low(self) -> bool {
        matches!(self, Side::Left | Side::Bottom)
    }
}

pub type EdgeId = u32;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct Edge {
    pub base: [i32; 3],
    pub axis: Axis,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum CellKind {
    Vertex,
    Plaquette,
    FaceXY,
    FaceYZ,
    FaceXZ,
    Cube,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct Cell {
    pub kind: CellKind,
    pub coords: [i32; 3],
}

/// Side labels for the four edges of a plaquette and the four edges at a
/// vertex, in the orientation the twisted terms are written in.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum PSide {
    Left,
    Right,
    Top,
    Bottom,
}

/// Direction labels for the six edges at a 3D vertex.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dir {
    XPos,
    XNeg,
    YPos,
    YNeg,
    ZPos,
    ZNeg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    ExtentTooSmall(usize),
    OpenNotSupported,
    OutOfRange(Cell),
}

impl std::fmt::Display for LatticeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LatticeError::ExtentTooSmall(e) => write!(f, "extent {e} < 2"),
            LatticeError::OpenNotSupported => write!(f, "open boundaries are 2D only"),
            LatticeError::OutOfRange(c) => write!(f, "cell out of range: {c:?}"),
        }
    }
}

impl std::error::Error for LatticeError {}

#[derive(Clone, Debug)]
pub struct Lattice {
    dims: u8,
    extents: [usize; 3],
    periodic: [bool; 3],
    /// boundary[axis][0] = low side, [1] = high side; None on periodic axes.
    boundary: [[Option<BoundaryStyle>; 2]; 3],
    edges: Vec<Edge>,
    index: BTreeMap<(i32, i32, i32, u8), EdgeId>,
}

impl Lattice {
    pub fn torus_2d(px: usize, py: usize) -> Lattice {
        Lattice::new_2d(px, py, [true, true], [[None; 2]; 2]).unwrap()
    }

    pub fn torus_3d(px: usize, py: usize, pz: usize) -> Lattice {
        Lattice::build(3, [px, py, pz], [true, true, true], [[None; 2]; 3]).unwrap()
    }

    /// 2D lattice; open axes carry a boundary style per side.
    pub fn new_2d(
        px: usize,
        py: usize,
        periodic: [bool; 2],
        boundary: [[Option<BoundaryStyle>; 2]; 2],
    ) -> Result<Lattice, LatticeError> {
        let mut b3 = [[None; 2]; 3];
        for a in 0..2 {
            if !periodic[a] {
                for s in 0..2 {
                    b3[a][s] = Some(boundary[a][s].unwrap_or(BoundaryStyle::Smooth));
                }
            }
        }
        Lattice::build(2, [px, py, 1], [periodic[0], periodic[1], true], b3)
    }

    fn build(
        dims: u8,
        extents: [usize; 3],
        periodic: [bool; 3],
        boundary: [[Option<BoundaryStyle>; 2]; 3],
    ) -> Result<Lattice, LatticeError> {
        for a in 0..dims as usize {
            if extents[a] < 2 {
                return Err(LatticeError::ExtentTooSmall(extents[a]));
            }
        }
        let mut lat = Lattice {
            dims,
            extents,
            periodic,
            boundary,
            edges: Vec::new(),
            index: BTreeMap::new(),
        };
        // Deterministic edge order: axis-major, then z, y, x.
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            if dims == 2 && axis == Axis::Z {
                continue;
            }
            let a = axis.index();
            for z in lat.vertex_range(Axis::Z) {
                for y in lat.vertex_range(Axis::Y) {
                    for x in lat.vertex_range(Axis::X) {
                        let base = [x, y, z];
                        if lat.edge_exists_at(base, axis) {
                            let id = lat.edges.len() as EdgeId;
                            lat.edges.push(Edge { base, axis });
                            lat.index.insert((x, y, z, a as u8), id);
                        }
                    }
                }
            }
            // rough danglers one step outside the vertex range
            if !periodic[a] {
                let mut dangler_coords = Vec::new();
                if lat.boundary[a][0] == Some(BoundaryStyle::Rough) {
                    dangler_coords.push(-1i32);
                }
                if lat.boundary[a][1] == Some(BoundaryStyle::Rough) {
                    dangler_coords.push(extents[a] as i32);
                }
                for coord in dangler_coords {
                    for z in lat.vertex_range(Axis::Z) {
                        for y in lat.vertex_range(Axis::Y) {
                            for x in lat.vertex_range(Axis::X) {
                                let mut base = [x, y, z];
                                // transverse coordinates iterate the vertex
                                // range; the along-axis one is the dangler
                                if base[a] != 0 {
                                    continue;
                                }
                                base[a] = coord;
                                let id = lat.edges.len() as EdgeId;
                                lat.edges.push(Edge { base, axis });
                                lat.index.insert((base[0], base[1], base[2], a as u8), id);
                            }
                        }
                    }
                }
            }
        }
        Ok(lat)
    }

    pub fn dims(&self) -> u8 {
        self.dims
    }

    pub fn extents(&self) -> &[usize; 3] {
        &self.extents
    }

    pub fn extent(&self, axis: Axis) -> usize {
        self.extents[axis.index()]
    }

    pub fn is_periodic(&self, axis: Axis) -> bool {
        self.periodic[axis.index()]
    }

    pub fn boundary_style(&self, side: Side) -> Option<BoundaryStyle> {
        let a = side.axis().index();
        self.boundary[a][usize::from(!side.is_low())]
    }

    fn vertex_range(&self, axis: Axis) -> std::ops::Range<i32> {
        let a = axis.index();
        if self.dims == 2 && axis == Axis::Z {
            return 0..1;
        }
        if self.periodic[a] {
            0..self.extents[a] as i32
        } else {
            0..self.extents[a] as i32 + 1
        }
    }

    /// Does a bulk (non-dangler) edge with this base exist?
    fn edge_exists_at(&self, base: [i32; 3], axis: Axis) -> bool {
        if self.dims == 2 && axis == Axis::Z {
            return false;
        }
        let a = axis.index();
        for d in 0..3 {
            let v = base[d];
            if self.dims == 2 && d == 2 {
                if v != 0 {
                    return false;
                }
                continue;
            }
            let n = self.extents[d] as i32;
            if self.periodic[d] {
                if v < 0 || v >= n {
                    return false;
                }
            } else {
                // vertices run 0..=n; an edge along d needs base[d] < n,
                // transverse coordinates may touch n
                let max = if d == a { n - 1 } else { n };
                if v < 0 || v > max {
                    return false;
                }
            }
        }
        true
    }

    fn wrap(&self, mut c: [i32; 3]) -> [i32; 3] {
        for d in 0..3 {
            if self.periodic[d] && !(self.dims == 2 && d == 2) {
                let n = self.extents[d] as i32;
                c[d] = c[d].rem_euclid(n);
            }
        }
        c
    }

    /// Edge lookup with wrapping on periodic axes. Danglers resolve too.
    pub fn edge(&self, base: [i32; 3], axis: Axis) -> Option<EdgeId> {
        let b = self.wrap(base);
        self.index
            .get(&(b[0], b[1], b[2], axis.index() as u8))
            .copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_data(&self, id: EdgeId) -> &Edge {
        &self.edges[id as usize]
    }

    pub fn edge_row_parity(&self, id: EdgeId) -> u8 {
        (self.edges[id as usize].base[1].rem_euclid(2)) as u8
    }

    // ---- 2D cells ----

    pub fn plaquettes(&self) -> Vec<Cell> {
        assert_eq!(self.dims, 2);
        let mut out = Vec::new();
        for j in 0..self.extents[1] as i32 {
            for i in 0..self.extents[0] as i32 {
                out.push(Cell {
                    kind: CellKind::Plaquette,
                    coords: [i, j, 0],
                });
            }
        }
        out
    }

    pub fn vertices_2d(&self) -> Vec<Cell> {
        assert_eq!(self.dims, 2);
        let mut out = Vec::new();
        for j in self.vertex_range(Axis::Y) {
            for i in self.vertex_range(Axis::X) {
                out.push(Cell {
                    kind: CellKind::Vertex,
                    coords: [i, j, 0],
                });
            }
        }
        out
    }

    /// The four edges of a plaquette with their side labels.
    pub fn plaquette_edges(&self, p: Cell) -> Result<Vec<(EdgeId, PSide)>, LatticeError> {
        assert_eq!(p.kind, CellKind::Plaquette);
        let [i, j, _] = p.coords;
        let sides = [
            (self.edge([i, j, 0], Axis::Y), PSide::Left),
            (self.edge([i + 1, j, 0], Axis::Y), PSide::Right),
            (self.edge([i, j + 1, 0], Axis::X), PSide::Top),
            (self.edge([i, j, 0], Axis::X), PSide::Bottom),
        ];
        let out: Vec<(EdgeId, PSide)> = sides
            .into_iter()
            .filter_map(|(e, s)| e.map(|id| (id, s)))
            .collect();
        if out.len() != 4 {
            return Err(LatticeError::OutOfRange(p));
        }
        Ok(out)
    }

    /// Edges at a 2D vertex with side labels; rough danglers included,
    /// missing smooth-boundary edges skipped.
    pub fn vertex_edges(&self, v: Cell) -> Vec<(EdgeId, PSide)> {
        assert_eq!(v.kind, CellKind::Vertex);
        let [i, j, _] = v.coords;
        [
            (self.edge([i - 1, j, 0], Axis::X), PSide::Left),
            (self.edge([i, j, 0], Axis::X), PSide::Right),
            (self.edge([i, j, 0], Axis::Y), PSide::Top),
            (self.edge([i, j - 1, 0], Axis::Y), PSide::Bottom),
        ]
        .into_iter()
        .filter_map(|(e, s)| e.map(|id| (id, s)))
        .collect()
    }

    /// Cells incident to an edge (2D): plaquettes then vertices.
    pub fn cells_of_edge(&self, id: EdgeId) -> Vec<Cell> {
        assert_eq!(self.dims, 2);
        let e = self.edges[id as usize];
        let [i, j, _] = e.base;
        let mut out = Vec::new();
        let push_p = |c: [i32; 3], out: &mut Vec<Cell>| {
            let w = self.wrap(c);
            if w[0] >= 0
                && w[0] < self.extents[0] as i32
                && w[1] >= 0
                && w[1] < self.extents[1] as i32
            {
                out.push(Cell {
                    kind: CellKind::Plaquette,
                    coords: w,
                });
            }
        };
        match e.axis {
            Axis::X => {
                push_p([i, j, 0], &mut out);
                push_p([i, j - 1, 0], &mut out);
            }
            Axis::Y => {
                push_p([i - 1, j, 0], &mut out);
                push_p([i, j, 0], &mut out);
            }
            Axis::Z => unreachable!(),
        }
        for v in self.vertices_2d() {
            if self.vertex_edges(v).iter().any(|&(eid, _)| eid == id) {
                out.push(v);
            }
        }
        out
    }

    // ---- 3D cells ----

    pub fn vertices_3d(&self) -> Vec<Cell> {
        assert_eq!(self.dims, 3);
        let mut out = Vec::new();
        for k in self.vertex_range(Axis::Z) {
            for j in self.vertex_range(Axis::Y) {
                for i in self.vertex_range(Axis::X) {
                    out.push(Cell {
                        kind: CellKind::Vertex,
                        coords: [i, j, k],
                    });
                }
            }
        }
        out
    }

    pub fn faces(&self, kind: CellKind) -> Vec<Cell> {
        assert_eq!(self.dims, 3);
        assert!(matches!(
            kind,
            CellKind::FaceXY | CellKind::FaceYZ | CellKind::FaceXZ
        ));
        let mut out = Vec::new();
        for k in 0..self.extents[2] as i32 {
            for j in 0..self.extents[1] as i32 {
                for i in 0..self.extents[0] as i32 {
                    out.push(Cell {
                        kind,
                        coords: [i, j, k],
                    });
                }
            }
        }
        out
    }

    pub fn cubes(&self) -> Vec<Cell> {
        assert_eq!(self.dims, 3);
        let mut out = Vec::new();
        for k in 0..self.extents[2] as i32 {
            for j in 0..self.extents[1] as i32 {
                for i in 0..self.extents[0] as i32 {
                    out.push(Cell {
                        kind: CellKind::Cube,
                        coords: [i, j, k],
                    });
                }
            }
        }
        out
    }

    /// Six directed edges at a 3D vertex.
    pub fn vertex_star(&self, v: Cell) -> Vec<(EdgeId, Dir)> {
        assert_eq!(v.kind, CellKind::Vertex);
        let [i, j, k] = v.coords;
        [
            (self.edge([i, j, k], Axis::X), Dir::XPos),
            (self.edge([i - 1, j, k], Axis::X), Dir::XNeg),
            (self.edge([i, j, k], Axis::Y), Dir::YPos),
            (self.edge([i, j - 1, k], Axis::Y), Dir::YNeg),
            (self.edge([i, j, k], Axis::Z), Dir::ZPos),
            (self.edge([i, j, k - 1], Axis::Z), Dir::ZNeg),
        ]
        .into_iter()
        .filter_map(|(e, d)| e.map(|id| (id, d)))
        .collect()
    }

    /// Four edges of a 3D face.
    pub fn face_edges(&self, f: Cell) -> Vec<EdgeId> {
        let [i, j, k] = f.coords;
        let coords: [([i32; 3], Axis); 4] = match f.kind {
            CellKind::FaceXY => [
                ([i, j, k], Axis::X),
                ([i, j + 1, k], Axis::X),
                ([i, j, k], Axis::Y),
                ([i + 1, j, k], Axis::Y),
            ],
            CellKind::FaceYZ => [
                ([i, j, k], Axis::Y),
                ([i, j, k + 1], Axis::Y),
                ([i, j, k], Axis::Z),
                ([i, j + 1, k], Axis::Z),
            ],
            CellKind::FaceXZ => [
                ([i, j, k], Axis::X),
                ([i, j, k + 1], Axis::X),
                ([i, j, k], Axis::Z),
                ([i + 1, j, k], Axis::Z),
            ],
            _ => panic!("not a face"),
        };
        coords
            .into_iter()
            .map(|(c, a)| self.edge(c, a).expect("face edge"))
            .collect()
    }

    /// Twelve edges of a cube.
    pub fn cube_edges(&self, c: Cell) -> Vec<EdgeId> {
        assert_eq!(c.kind, CellKind::Cube);
        let [i, j, k] = c.coords;
        let mut out = Vec::with_capacity(12);
        for dy in 0..2 {
            for dz in 0..2 {
                out.push(self.edge([i, j + dy, k + dz], Axis::X).unwrap());
            }
        }
        for dx in 0..2 {
            for dz in 0..2 {
                out.push(self.edge([i + dx, j, k + dz], Axis::Y).unwrap());
            }
        }
        for dx in 0..2 {
            for dy in 0..2 {
                out.push(self.edge([i + dx, j + dy, k], Axis::Z).unwrap());
            }
        }
        out
    }

    /// Translate an edge by an integer vector (periodic axes wrap).
    pub fn translate_edge(&self, id: EdgeId, delta: [i32; 3]) -> Option<EdgeId> {
        let e = self.edges[id as usize];
        let base = [
            e.base[0] + delta[0],
            e.base[1] + delta[1],
            e.base[2] + delta[2],
        ];
        self.edge(base, e.axis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_counts() {
        let l = Lattice::torus_2d(2, 2);
        assert_eq!(l.edge_count(), 8);
        assert_eq!(l.plaquettes().len(), 4);
        assert_eq!(l.vertices_2d().len(), 4);
        let l = Lattice::torus_2d(3, 5);
        assert_eq!(l.edge_count(), 30);
        let l3 = Lattice::torus_3d(2, 2, 2);
        assert_eq!(l3.edge_count(), 24);
        assert_eq!(l3.cubes().len(), 8);
        assert_eq!(l3.faces(CellKind::FaceXY).len(), 8);
    }

    #[test]
    fn extent_one_rejected() {
        assert!(matches!(
            Lattice::new_2d(1, 2, [true, true], [[None; 2]; 2]),
            Err(LatticeError::ExtentTooSmall(1))
        ));
    }

    #[test]
    fn plaquette_sides_and_adjacency() {
        let l = Lattice::torus_2d(2, 2);
        let p00 = Cell {
            kind: CellKind::Plaquette,
            coords: [0, 0, 0],
        };
        let edges = l.plaquette_edges(p00).unwrap();
        assert_eq!(edges.len(), 4);
        let ids: Vec<EdgeId> = edges.iter().map(|&(e, _)| e).collect();
        let mut dedup = ids.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 4, "four distinct edges");
        // right edge of p(0,0) is the left edge of p(1,0)
        let right = edges.iter().find(|&&(_, s)| s == PSide::Right).unwrap().0;
        let p10 = Cell {
            kind: CellKind::Plaquette,
            coords: [1, 0, 0],
        };
        let left10 = l
            .plaquette_edges(p10)
            .unwrap()
            .into_iter()
            .find(|&(_, s)| s == PSide::Left)
            .unwrap()
            .0;
        assert_eq!(right, left10);
    }

    #[test]
    fn incidence_duality() {
        for l in [Lattice::torus_2d(2, 3), Lattice::torus_2d(3, 2)] {
            for p in l.plaquettes() {
                for (e, _) in l.plaquette_edges(p).unwrap() {
                    assert!(l.cells_of_edge(e).contains(&p));
                }
            }
            for v in l.vertices_2d() {
                for (e, _) in l.vertex_edges(v) {
                    assert!(l.cells_of_edge(e).contains(&v));
                }
            }
            // a vertical edge touches left/right plaquettes and top/bottom vertices
            let e = l.edge([0, 0, 0], Axis::Y).unwrap();
            let cells = l.cells_of_edge(e);
            let plaquettes = cells
                .iter()
                .filter(|c| c.kind == CellKind::Plaquette)
                .count();
            let vertices = cells.iter().filter(|c| c.kind == CellKind::Vertex).count();
            assert_eq!((plaquettes, vertices), (2, 2));
        }
    }

    #[test]
    fn rough_boundary_keeps_danglers() {
        let l = Lattice::new_2d(
            2,
            2,
            [false, true],
            [
                [Some(BoundaryStyle::Rough), Some(BoundaryStyle::Smooth)],
                [None, None],
            ],
        )
        .unwrap();
        // vertex columns 0..=2, rows 0..2 (periodic y)
        assert!(l.edge([-1, 0, 0], Axis::X).is_some(), "left dangler");
        assert!(l.edge([2, 0, 0], Axis::X).is_none(), "no right dangler");
        // boundary vertex keeps 4 edges via the dangler
        let v = Cell {
            kind: CellKind::Vertex,
            coords: [0, 0, 0],
        };
        assert_eq!(l.vertex_edges(v).len(), 4);
        // smooth right boundary vertex has only 3
        let v = Cell {
            kind: CellKind::Vertex,
            coords: [2, 0, 0],
        };
        assert_eq!(l.vertex_edges(v).len(), 3);
    }

    #[test]
    fn xcube_vertex_star() {
        let l = Lattice::torus_3d(2, 2, 2);
        let v = Cell {
            kind: CellKind::Vertex,
            coords: [0, 0, 0],
        };
        let star = l.vertex_star(v);
        assert_eq!(star.len(), 6);
        // yz cross at a vertex touches 2 z-oriented and 2 y-oriented edges
        let yz: Vec<EdgeId> = star
            .iter()
            .filter(|(_, d)| matches!(d, Dir::YPos | Dir::YNeg | Dir::ZPos | Dir::ZNeg))
            .map(|&(e, _)| e)
            .collect();
        assert_eq!(yz.len(), 4);
        let axes: Vec<Axis> = yz.iter().map(|&e| l.edge_data(e).axis).collect();
        assert_eq!(axes.iter().filter(|&&a| a == Axis::Y).count(), 2);
        assert_eq!(axes.iter().filter(|&&a| a == Axis::Z).count(), 2);
    }

    #[test]
    fn translations_commute_with_incidence() {
        let l = Lattice::torus_2d(3, 3);
        for p in l.plaquettes() {
            let shifted = Cell {
                kind: CellKind::Plaquette,
                coords: [(p.coords[0] + 1).rem_euclid(3), p.coords[1], 0],
            };
            let orig: Vec<EdgeId> = l
                .plaquette_edges(p)
                .unwrap()
                .iter()
                .map(|&(e, _)| l.translate_edge(e, [1, 0, 0]).unwrap())
                .collect();
            let moved: Vec<EdgeId> = l
                .plaquette_edges(shifted)
                .unwrap()
                .iter()
                .map(|&(e, _)| e)
                .collect();
            assert_eq!(orig, moved);
        }
    }
}
