//! Integer-lattice model of the combinatorial square: vertices, simplexes,
//! faces and their cofaces, rectangles, and oriented boundary walks.
//!
//! Everything here is exact integer geometry. The real embedding of a vertex
//! `(i, j)` is `(i/k, j/k)`, but floats never enter adjacency or equality
//! decisions; the lattice coordinates are the identity of every object.

use std::fmt;
use thiserror::Error;

/// Errors from grid construction and queries.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("resolution k must be at least 2, got {0}")]
    KTooSmall(u32),
    #[error("{0:?} and {1:?} do not span a lattice face")]
    NotAFace(GridPoint, GridPoint),
    #[error("face {0:?} lies outside the square")]
    FaceOutOfRange(Face),
    #[error("corners {0:?} and {1:?} share a coordinate")]
    DegenerateRectangle(GridPoint, GridPoint),
    #[error("{0:?} is not a corner of the rectangle, or the corners are not opposite")]
    NotACorner(GridPoint),
}

/// Lattice vertex `(i, j)`; the real position is `(i/k, j/k)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPoint {
    pub i: i32,
    pub j: i32,
}

impl GridPoint {
    pub const fn new(i: i32, j: i32) -> Self {
        GridPoint { i, j }
    }

    pub const fn shifted(self, di: i32, dj: i32) -> Self {
        GridPoint {
            i: self.i + di,
            j: self.j + dj,
        }
    }
}

impl fmt::Debug for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// The two basic lattice directions: e₀ = (1, 0) and e₁ = (0, 1).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Axis {
    Horizontal,
    Vertical,
}

impl Axis {
    pub const fn step(self) -> (i32, i32) {
        match self {
            Axis::Horizontal => (1, 0),
            Axis::Vertical => (0, 1),
        }
    }

    pub const fn other(self) -> Axis {
        match self {
            Axis::Horizontal => Axis::Vertical,
            Axis::Vertical => Axis::Horizontal,
        }
    }

    pub const fn index(self) -> u8 {
        match self {
            Axis::Horizontal => 0,
            Axis::Vertical => 1,
        }
    }

    pub const fn from_index(idx: u8) -> Option<Axis> {
        match idx {
            0 => Some(Axis::Horizontal),
            1 => Some(Axis::Vertical),
            _ => None,
        }
    }
}

/// One of the two triangles tiling a unit lattice cell.
///
/// Vertices are `[z₀, z₁, z₂]` with `z₁ = z₀ + e_orientation` and
/// `z₂ = z₁ + e_other`; both orientations share the cell's NE diagonal
/// `[z₀, z₀ + e₀ + e₁]`. The derived `Ord` (base, then orientation) is the
/// canonical enumeration order used everywhere.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    pub base: GridPoint,
    pub orientation: Axis,
}

impl Simplex {
    pub const fn new(base: GridPoint, orientation: Axis) -> Self {
        Simplex { base, orientation }
    }

    /// Vertices in the order `[z₀, z₁, z₂]`.
    pub fn vertices(self) -> [GridPoint; 3] {
        let (di, dj) = self.orientation.step();
        let z1 = self.base.shifted(di, dj);
        let z2 = z1.shifted(1 - di, 1 - dj);
        [self.base, z1, z2]
    }

    /// Faces in the order `[z₀,z₁]`, `[z₁,z₂]`, `[z₂,z₀]`.
    pub fn faces(self) -> [Face; 3] {
        let [z0, z1, z2] = self.vertices();
        [
            Face::from_ordered(z0, z1),
            Face::from_ordered(z1, z2),
            Face::from_ordered(z0, z2),
        ]
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = self.orientation.index();
        write!(f, "S({}, {}; {})", self.base.i, self.base.j, o)
    }
}

/// Direction class of a face.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FaceKind {
    Horizontal,
    Vertical,
    Diagonal,
}

/// A two-vertex edge of a simplex, stored with its lexicographically
/// smaller endpoint first.
///
/// Valid faces step by e₀, e₁, or e₀+e₁; anti-diagonal pairs are rejected.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    a: GridPoint,
    b: GridPoint,
}

impl Face {
    pub fn new(p: GridPoint, q: GridPoint) -> Result<Self, GridError> {
        let (a, b) = if p <= q { (p, q) } else { (q, p) };
        match (b.i - a.i, b.j - a.j) {
            (1, 0) | (0, 1) | (1, 1) => Ok(Face { a, b }),
            _ => Err(GridError::NotAFace(p, q)),
        }
    }

    // For endpoints already known to be in canonical step order.
    fn from_ordered(a: GridPoint, b: GridPoint) -> Self {
        debug_assert!(matches!((b.i - a.i, b.j - a.j), (1, 0) | (0, 1) | (1, 1)));
        Face { a, b }
    }

    pub const fn a(self) -> GridPoint {
        self.a
    }

    pub const fn b(self) -> GridPoint {
        self.b
    }

    pub const fn endpoints(self) -> (GridPoint, GridPoint) {
        (self.a, self.b)
    }

    pub fn kind(self) -> FaceKind {
        match (self.b.i - self.a.i, self.b.j - self.a.j) {
            (1, 0) => FaceKind::Horizontal,
            (0, 1) => FaceKind::Vertical,
            (1, 1) => FaceKind::Diagonal,
            _ => unreachable!("face invariant"),
        }
    }

    /// The two simplexes that would share this face on an unbounded lattice.
    /// Callers clip the pair to whatever region they trace in.
    pub fn coface_candidates(self) -> [Simplex; 2] {
        let GridPoint { i, j } = self.a;
        match self.kind() {
            FaceKind::Horizontal => [
                Simplex::new(GridPoint::new(i, j), Axis::Horizontal),
                Simplex::new(GridPoint::new(i, j - 1), Axis::Vertical),
            ],
            FaceKind::Vertical => [
                Simplex::new(GridPoint::new(i, j), Axis::Vertical),
                Simplex::new(GridPoint::new(i - 1, j), Axis::Horizontal),
            ],
            FaceKind::Diagonal => [
                Simplex::new(GridPoint::new(i, j), Axis::Horizontal),
                Simplex::new(GridPoint::new(i, j), Axis::Vertical),
            ],
        }
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}-{:?}]", self.a, self.b)
    }
}

/// The combinatorial square of resolution k: vertex set {0..k}² and the
/// 2k² triangles tiling it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CombinatorialSquare {
    k: u32,
}

impl CombinatorialSquare {
    pub fn new(k: u32) -> Result<Self, GridError> {
        if k < 2 {
            return Err(GridError::KTooSmall(k));
        }
        Ok(CombinatorialSquare { k })
    }

    pub const fn k(self) -> u32 {
        self.k
    }

    pub const fn vertex_count(self) -> usize {
        let n = self.k as usize + 1;
        n * n
    }

    pub const fn simplex_count(self) -> usize {
        2 * (self.k as usize) * (self.k as usize)
    }

    pub fn vertices(self) -> impl Iterator<Item = GridPoint> {
        let k = self.k as i32;
        (0..=k).flat_map(move |j| (0..=k).map(move |i| GridPoint::new(i, j)))
    }

    /// All simplexes in canonical order (base lex, horizontal before vertical).
    pub fn simplexes(self) -> impl Iterator<Item = Simplex> {
        let k = self.k as i32;
        (0..k).flat_map(move |i| {
            (0..k).flat_map(move |j| {
                let base = GridPoint::new(i, j);
                [
                    Simplex::new(base, Axis::Horizontal),
                    Simplex::new(base, Axis::Vertical),
                ]
            })
        })
    }

    /// All distinct faces: k(k+1) horizontal, k(k+1) vertical, k² diagonal.
    pub fn faces(self) -> impl Iterator<Item = Face> {
        let k = self.k as i32;
        let horiz = (0..=k).flat_map(move |j| {
            (0..k).map(move |i| Face::from_ordered(GridPoint::new(i, j), GridPoint::new(i + 1, j)))
        });
        let vert = (0..=k).flat_map(move |i| {
            (0..k).map(move |j| Face::from_ordered(GridPoint::new(i, j), GridPoint::new(i, j + 1)))
        });
        let diag = (0..k).flat_map(move |i| {
            (0..k).map(move |j| {
                Face::from_ordered(GridPoint::new(i, j), GridPoint::new(i + 1, j + 1))
            })
        });
        horiz.chain(vert).chain(diag)
    }

    pub fn contains_point(self, p: GridPoint) -> bool {
        let k = self.k as i32;
        0 <= p.i && p.i <= k && 0 <= p.j && p.j <= k
    }

    pub fn contains_simplex(self, s: Simplex) -> bool {
        let k = self.k as i32;
        0 <= s.base.i && s.base.i < k && 0 <= s.base.j && s.base.j < k
    }

    pub fn contains_face(self, f: Face) -> bool {
        self.contains_point(f.a()) && self.contains_point(f.b())
    }

    pub fn is_boundary_point(self, p: GridPoint) -> bool {
        let k = self.k as i32;
        p.i == 0 || p.i == k || p.j == 0 || p.j == k
    }

    /// A face lies on the boundary iff it runs along one of the four sides.
    pub fn is_boundary_face(self, f: Face) -> bool {
        self.full_rectangle().is_boundary_face(f)
    }

    /// The one or two simplexes having `f` as a face (one iff `f` is on the
    /// boundary; diagonals always have two).
    pub fn face_cofaces(self, f: Face) -> Result<Vec<Simplex>, GridError> {
        if !self.contains_face(f) {
            return Err(GridError::FaceOutOfRange(f));
        }
        let mut out: Vec<Simplex> = f
            .coface_candidates()
            .into_iter()
            .filter(|s| self.contains_simplex(*s))
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn full_rectangle(self) -> Rectangle {
        let k = self.k as i32;
        Rectangle {
            lo: GridPoint::new(0, 0),
            hi: GridPoint::new(k, k),
        }
    }
}

/// An axis-aligned lattice rectangle given by two strictly ordered corners.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Rectangle {
    lo: GridPoint,
    hi: GridPoint,
}

impl Rectangle {
    pub fn new(lo: GridPoint, hi: GridPoint) -> Result<Self, GridError> {
        if lo.i >= hi.i || lo.j >= hi.j {
            return Err(GridError::DegenerateRectangle(lo, hi));
        }
        Ok(Rectangle { lo, hi })
    }

    /// Build from any pair of opposite corners.
    pub fn from_corners(a: GridPoint, b: GridPoint) -> Result<Self, GridError> {
        if a.i == b.i || a.j == b.j {
            return Err(GridError::DegenerateRectangle(a, b));
        }
        Ok(Rectangle {
            lo: GridPoint::new(a.i.min(b.i), a.j.min(b.j)),
            hi: GridPoint::new(a.i.max(b.i), a.j.max(b.j)),
        })
    }

    pub const fn lo(self) -> GridPoint {
        self.lo
    }

    pub const fn hi(self) -> GridPoint {
        self.hi
    }

    /// Corners counterclockwise from `lo`.
    pub fn corners(self) -> [GridPoint; 4] {
        [
            self.lo,
            GridPoint::new(self.hi.i, self.lo.j),
            self.hi,
            GridPoint::new(self.lo.i, self.hi.j),
        ]
    }

    pub fn is_corner(self, p: GridPoint) -> bool {
        self.corners().contains(&p)
    }

    pub fn opposite_corner(self, p: GridPoint) -> Option<GridPoint> {
        let [c0, c1, c2, c3] = self.corners();
        match p {
            _ if p == c0 => Some(c2),
            _ if p == c1 => Some(c3),
            _ if p == c2 => Some(c0),
            _ if p == c3 => Some(c1),
            _ => None,
        }
    }

    pub fn contains_point(self, p: GridPoint) -> bool {
        self.lo.i <= p.i && p.i <= self.hi.i && self.lo.j <= p.j && p.j <= self.hi.j
    }

    /// A simplex belongs to the rectangle iff its whole cell does.
    pub fn contains_simplex(self, s: Simplex) -> bool {
        self.lo.i <= s.base.i && s.base.i < self.hi.i && self.lo.j <= s.base.j && s.base.j < self.hi.j
    }

    pub fn contains_face(self, f: Face) -> bool {
        self.contains_point(f.a()) && self.contains_point(f.b())
    }

    /// A face lies on ∂R iff it runs along one of the four sides.
    pub fn is_boundary_face(self, f: Face) -> bool {
        if !self.contains_face(f) {
            return false;
        }
        match f.kind() {
            FaceKind::Horizontal => f.a().j == self.lo.j || f.a().j == self.hi.j,
            FaceKind::Vertical => f.a().i == self.lo.i || f.a().i == self.hi.i,
            FaceKind::Diagonal => false,
        }
    }

    /// All simplexes of the rectangle's own triangulation, canonical order.
    pub fn simplexes(self) -> impl Iterator<Item = Simplex> {
        let (lo, hi) = (self.lo, self.hi);
        (lo.i..hi.i).flat_map(move |i| {
            (lo.j..hi.j).flat_map(move |j| {
                let base = GridPoint::new(i, j);
                [
                    Simplex::new(base, Axis::Horizontal),
                    Simplex::new(base, Axis::Vertical),
                ]
            })
        })
    }

    pub fn vertices(self) -> impl Iterator<Item = GridPoint> {
        let (lo, hi) = (self.lo, self.hi);
        (lo.j..=hi.j).flat_map(move |j| (lo.i..=hi.i).map(move |i| GridPoint::new(i, j)))
    }

    /// The full boundary cycle counterclockwise from `lo`, without repeating
    /// the start.
    pub fn boundary_cycle(self) -> Vec<GridPoint> {
        let (lo, hi) = (self.lo, self.hi);
        let mut cycle = Vec::with_capacity(2 * ((hi.i - lo.i) + (hi.j - lo.j)) as usize);
        for i in lo.i..hi.i {
            cycle.push(GridPoint::new(i, lo.j));
        }
        for j in lo.j..hi.j {
            cycle.push(GridPoint::new(hi.i, j));
        }
        for i in (lo.i + 1..=hi.i).rev() {
            cycle.push(GridPoint::new(i, hi.j));
        }
        for j in (lo.j + 1..=hi.j).rev() {
            cycle.push(GridPoint::new(lo.i, j));
        }
        cycle
    }
}

/// The boundary arc from corner `a` to corner `b`, walked counterclockwise
/// and inclusive of both ends. Calling with `(b, a)` yields the
/// complementary arc; the two arcs share exactly `{a, b}`.
pub fn boundary_path(r: &Rectangle, a: GridPoint, b: GridPoint) -> Result<Vec<GridPoint>, GridError> {
    if !r.is_corner(a) {
        return Err(GridError::NotACorner(a));
    }
    if !r.is_corner(b) || a == b {
        return Err(GridError::NotACorner(b));
    }
    if a.i == b.i || a.j == b.j {
        return Err(GridError::DegenerateRectangle(a, b));
    }
    let cycle = r.boundary_cycle();
    let start = cycle.iter().position(|&p| p == a).expect("a is on the boundary");
    let n = cycle.len();
    let mut path = Vec::new();
    for t in 0..n {
        let p = cycle[(start + t) % n];
        path.push(p);
        if p == b {
            break;
        }
    }
    Ok(path)
}
