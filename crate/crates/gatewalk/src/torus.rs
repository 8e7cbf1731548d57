//! Seam identification of the square into a torus: every face then has
//! exactly two cofaces, so every maximal chain closes into a cycle. Cycles
//! carry winding numbers counted from signed seam crossings.

use thiserror::Error;

use crate::chain::{exit_gate, Chain, ChainDoc, ChainError, Surface};
use crate::coloring::Coloring;
use crate::grid::{Axis, CombinatorialSquare, Face, FaceKind, GridPoint, Simplex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorusError {
    #[error("resolution k must be at least 2, got {0}")]
    KTooSmall(u32),
    #[error("coloring is not doubly periodic; the seam identification is ill-defined")]
    NotPeriodic,
    #[error("surface has k={0} but the coloring has k={1}")]
    ResolutionMismatch(u32, u32),
    #[error("face {0:?} is not a gate")]
    NotAGate(Face),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// The square with `(0, j) ~ (k, j)` and `(i, 0) ~ (i, k)`.
///
/// Canonical cells have bases in `[0, k)²`; faces are canonicalized by
/// reducing their free coordinate mod k.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TorusSurface {
    k: u32,
}

impl TorusSurface {
    pub fn new(k: u32) -> Result<Self, TorusError> {
        if k < 2 {
            return Err(TorusError::KTooSmall(k));
        }
        Ok(TorusSurface { k })
    }

    /// Surface for a coloring; fails unless the coloring agrees across the
    /// identified vertices.
    pub fn for_coloring(c: &Coloring) -> Result<Self, TorusError> {
        let t = TorusSurface::new(c.k())?;
        t.check_coloring(c)?;
        Ok(t)
    }

    pub const fn k(self) -> u32 {
        self.k
    }

    fn check_coloring(self, c: &Coloring) -> Result<(), TorusError> {
        if c.k() != self.k {
            return Err(TorusError::ResolutionMismatch(self.k, c.k()));
        }
        if !c.is_doubly_periodic() {
            return Err(TorusError::NotPeriodic);
        }
        Ok(())
    }

    /// Reduce a face to its torus representative.
    pub fn canonical_face(self, f: Face) -> Face {
        let k = self.k as i32;
        let a = f.a();
        let (i, j) = (a.i.rem_euclid(k), a.j.rem_euclid(k));
        let (di, dj) = match f.kind() {
            FaceKind::Horizontal => (1, 0),
            FaceKind::Vertical => (0, 1),
            FaceKind::Diagonal => (1, 1),
        };
        Face::new(GridPoint::new(i, j), GridPoint::new(i + di, j + dj))
            .expect("reduced endpoints still span a face")
    }

    pub fn canonical_simplex(self, s: Simplex) -> Simplex {
        let k = self.k as i32;
        Simplex::new(
            GridPoint::new(s.base.i.rem_euclid(k), s.base.j.rem_euclid(k)),
            s.orientation,
        )
    }

    /// The two canonical simplexes sharing a canonical face. Unlike the
    /// square, this never degenerates to one: boundary faces wrap.
    pub fn face_cofaces(self, f: Face) -> [Simplex; 2] {
        let k = self.k as i32;
        let GridPoint { i, j } = f.a();
        match f.kind() {
            FaceKind::Horizontal => [
                Simplex::new(GridPoint::new(i, j), Axis::Horizontal),
                Simplex::new(GridPoint::new(i, (j + k - 1) % k), Axis::Vertical),
            ],
            FaceKind::Vertical => [
                Simplex::new(GridPoint::new(i, j), Axis::Vertical),
                Simplex::new(GridPoint::new((i + k - 1) % k, j), Axis::Horizontal),
            ],
            FaceKind::Diagonal => [
                Simplex::new(GridPoint::new(i, j), Axis::Horizontal),
                Simplex::new(GridPoint::new(i, j), Axis::Vertical),
            ],
        }
    }
}

/// A closed chain on the torus together with its signed seam crossings:
/// `winding.0` counts crossings of the vertical seam (rightward positive),
/// `winding.1` crossings of the horizontal seam (upward positive).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusCycle {
    pub chain: Chain,
    pub winding: (i32, i32),
}

impl TorusCycle {
    pub fn len(&self) -> usize {
        self.chain.simplexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.simplexes.is_empty()
    }

    pub fn to_doc(&self) -> ChainDoc {
        ChainDoc::from_chain(&self.chain, Some(self.winding))
    }
}

// One trace step starting from (cur, entry) where entry is a face of cur in
// cur's own coordinates. Returns the canonical exit gate, the next simplex,
// the entry face in the next simplex's coordinates, and the seam-crossing
// contribution of the step.
fn step(
    t: TorusSurface,
    cur: Simplex,
    entry: Face,
    c: &Coloring,
) -> Result<(Face, Simplex, Face, (i32, i32)), TorusError> {
    let k = t.k() as i32;
    let exit_local = exit_gate(cur, entry, c)?;
    let exit = t.canonical_face(exit_local);
    let pair = t.face_cofaces(exit);
    debug_assert!(pair.contains(&cur), "current simplex must border its exit gate");
    let next = if pair[0] == cur { pair[1] } else { pair[0] };
    let entry_next = next
        .faces()
        .into_iter()
        .find(|f| t.canonical_face(*f) == exit)
        .expect("the neighbor sees the shared gate among its faces");
    // Seam bookkeeping: only the canonical faces hugging a seam can separate
    // the wrap columns/rows.
    let mut dw = (0, 0);
    match exit.kind() {
        FaceKind::Vertical if exit.a().i == 0 => {
            dw.0 = if cur.base.i == k - 1 { 1 } else { -1 };
        }
        FaceKind::Horizontal if exit.a().j == 0 => {
            dw.1 = if cur.base.j == k - 1 { 1 } else { -1 };
        }
        _ => {}
    }
    Ok((exit, next, entry_next, dw))
}

fn trace_from(
    t: TorusSurface,
    start_simplex: Simplex,
    start_entry: Face,
    c: &Coloring,
) -> Result<TorusCycle, TorusError> {
    let start_state = (start_simplex, t.canonical_face(start_entry));
    let mut cur = start_simplex;
    let mut entry = start_entry;
    let mut simplexes = Vec::new();
    let mut gates = Vec::new();
    let mut winding = (0, 0);
    let budget = 2 * t.k() as usize * t.k() as usize;
    for _ in 0..=budget {
        simplexes.push(cur);
        gates.push(t.canonical_face(entry));
        let (exit, next, entry_next, dw) = step(t, cur, entry, c)?;
        winding.0 += dw.0;
        winding.1 += dw.1;
        if (next, exit) == start_state {
            return Ok(TorusCycle {
                chain: Chain {
                    k: t.k(),
                    surface: Surface::Torus,
                    simplexes,
                    gates,
                    closed: true,
                },
                winding,
            });
        }
        cur = next;
        entry = entry_next;
    }
    unreachable!("deterministic invertible continuation recurs within the simplex budget")
}

/// Trace the closed cycle through `start`. The traversal enters the
/// lexicographically smaller coface first, which fixes the direction.
pub fn trace_torus_cycle(
    t: &TorusSurface,
    start: Face,
    c: &Coloring,
) -> Result<TorusCycle, TorusError> {
    t.check_coloring(c)?;
    let canon = t.canonical_face(start);
    if !c.is_gate(canon) {
        return Err(TorusError::NotAGate(start));
    }
    let mut pair = t.face_cofaces(canon);
    pair.sort();
    let s0 = pair[0];
    let entry = s0
        .faces()
        .into_iter()
        .find(|f| t.canonical_face(*f) == canon)
        .expect("a coface sees its face");
    trace_from(*t, s0, entry, c)
}

/// Every gated simplex lies on exactly one cycle; enumerate them all.
/// Cycles are reported in order of their least simplex and traced from that
/// simplex's least gate, so the output is deterministic.
pub fn all_torus_cycles(t: &TorusSurface, c: &Coloring) -> Result<Vec<TorusCycle>, TorusError> {
    t.check_coloring(c)?;
    let sq = CombinatorialSquare::new(t.k()).expect("torus resolution is at least 2");
    let mut visited = std::collections::HashSet::new();
    let mut cycles = Vec::new();
    for s in sq.simplexes() {
        if visited.contains(&s) {
            continue;
        }
        let gates = c.simplex_gates(s);
        if gates.is_empty() {
            continue;
        }
        let entry = gates
            .iter()
            .copied()
            .min_by_key(|g| t.canonical_face(*g))
            .expect("gated simplexes have two gates");
        let cycle = trace_from(*t, s, entry, c)?;
        visited.extend(cycle.chain.simplexes.iter().copied());
        cycles.push(cycle);
    }
    Ok(cycles)
}
