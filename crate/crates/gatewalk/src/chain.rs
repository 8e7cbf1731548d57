//! The chain machinery: deterministic gate-to-gate continuation, maximal
//! chain tracing, boundary gate enumeration, the ≈ and ≃ vertex partitions,
//! and the two-arc witness construction.
//!
//! A gated simplex has exactly two gates, so entering through one determines
//! the exit ("door in, door out"). Chains started at a boundary gate are
//! therefore simple paths that can only end back on the boundary; tracing is
//! reversible by reading the same rule from the other end.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::Coloring;
use crate::grid::{
    boundary_path, Axis, CombinatorialSquare, Face, GridError, GridPoint, Rectangle, Simplex,
};
use crate::util::UnionFind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("face {0:?} is not a gate here")]
    NotAGate(Face),
    #[error("face {0:?} is not on the region boundary")]
    NotOnBoundary(Face),
    #[error("face {0:?} is not a face of simplex {1:?}")]
    NotAFaceOfSimplex(Face, Simplex),
    #[error("corners {0:?} and {1:?} carry the same color")]
    SameColor(GridPoint, GridPoint),
    #[error("the ≃ relation needs a chain")]
    MissingChain,
    #[error("trace revisited simplex {0:?}; the door-in/door-out invariant is broken")]
    RevisitedSimplex(Simplex),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Which surface a chain was traced on.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    Square,
    Torus,
}

/// An ordered run of simplexes linked gate to gate.
///
/// `gates[t]` is the gate between `simplexes[t-1]` and `simplexes[t]`. On the
/// square, `gates` additionally starts with the entry boundary gate and ends
/// with the exit boundary gate, so `gates.len() == simplexes.len() + 1`. On
/// the torus every chain closes: `gates.len() == simplexes.len()` and
/// `gates[0]` is the gate through which the last simplex re-enters the first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chain {
    pub k: u32,
    pub surface: Surface,
    pub simplexes: Vec<Simplex>,
    pub gates: Vec<Face>,
    pub closed: bool,
}

impl Chain {
    pub fn first_gate(&self) -> Face {
        self.gates[0]
    }

    pub fn last_gate(&self) -> Face {
        *self.gates.last().expect("chains have at least one gate")
    }

    pub fn simplex_set(&self) -> HashSet<Simplex> {
        self.simplexes.iter().copied().collect()
    }

    /// Distinct vertices of all simplexes, sorted.
    pub fn vertex_set(&self) -> Vec<GridPoint> {
        let mut vs: Vec<GridPoint> = self
            .simplexes
            .iter()
            .flat_map(|s| s.vertices())
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

/// Where a continuation step leads.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Continuation {
    Interior(Simplex),
    BoundaryExit,
}

/// One continuation step: the forced exit gate and what lies across it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Step {
    pub exit_gate: Face,
    pub next: Continuation,
}

/// The unique other gate of `s` when entered through `entry`.
pub fn exit_gate(s: Simplex, entry: Face, c: &Coloring) -> Result<Face, ChainError> {
    let faces = s.faces();
    if !faces.contains(&entry) {
        return Err(ChainError::NotAFaceOfSimplex(entry, s));
    }
    if !c.is_gate(entry) {
        return Err(ChainError::NotAGate(entry));
    }
    // A simplex with mixed vertex colors has exactly two gates.
    Ok(faces
        .into_iter()
        .find(|f| *f != entry && c.is_gate(*f))
        .expect("a gated simplex has a second gate"))
}

/// Continuation step confined to `region`: cross the exit gate to the
/// neighboring simplex, or report a boundary exit when the gate lies on ∂R.
pub fn continue_within(
    region: &Rectangle,
    s: Simplex,
    entry: Face,
    c: &Coloring,
) -> Result<Step, ChainError> {
    let exit = exit_gate(s, entry, c)?;
    let next = exit
        .coface_candidates()
        .into_iter()
        .filter(|t| region.contains_simplex(*t))
        .find(|t| *t != s);
    Ok(Step {
        exit_gate: exit,
        next: match next {
            Some(t) => Continuation::Interior(t),
            None => Continuation::BoundaryExit,
        },
    })
}

/// Continuation on the full square `D²(k)`.
pub fn continue_through(s: Simplex, entry: Face, c: &Coloring) -> Result<Step, ChainError> {
    let sq = CombinatorialSquare::new(c.k())?;
    continue_within(&sq.full_rectangle(), s, entry, c)
}

/// Trace the maximal chain entering `region` through the boundary gate
/// `start` until it exits the boundary again.
pub fn trace_chain_within(
    region: &Rectangle,
    start: Face,
    c: &Coloring,
) -> Result<Chain, ChainError> {
    if !c.is_gate(start) {
        return Err(ChainError::NotAGate(start));
    }
    if !region.is_boundary_face(start) {
        return Err(ChainError::NotOnBoundary(start));
    }
    let mut cur = start
        .coface_candidates()
        .into_iter()
        .find(|t| region.contains_simplex(*t))
        .expect("a boundary face bounds exactly one cell of the region");
    let mut entry = start;
    let mut simplexes = Vec::new();
    let mut gates = vec![start];
    let mut visited = HashSet::new();
    loop {
        if !visited.insert(cur) {
            return Err(ChainError::RevisitedSimplex(cur));
        }
        simplexes.push(cur);
        let step = continue_within(region, cur, entry, c)?;
        gates.push(step.exit_gate);
        match step.next {
            Continuation::BoundaryExit => break,
            Continuation::Interior(t) => {
                entry = step.exit_gate;
                cur = t;
            }
        }
    }
    Ok(Chain {
        k: c.k(),
        surface: Surface::Square,
        simplexes,
        gates,
        closed: false,
    })
}

/// Trace the maximal chain from a boundary gate of the full square.
pub fn trace_maximal_chain(
    sq: &CombinatorialSquare,
    start: Face,
    c: &Coloring,
) -> Result<Chain, ChainError> {
    trace_chain_within(&sq.full_rectangle(), start, c)
}

/// All boundary gates of `r`, in counterclockwise order starting at `r.lo`.
pub fn boundary_gates(c: &Coloring, r: &Rectangle) -> Vec<Face> {
    let cycle = r.boundary_cycle();
    let n = cycle.len();
    (0..n)
        .map(|t| {
            Face::new(cycle[t], cycle[(t + 1) % n]).expect("boundary steps span faces")
        })
        .filter(|f| c.is_gate(*f))
        .collect()
}

/// Which vertex relation to partition by.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    /// Walks along faces whose endpoints carry equal colors.
    Approx,
    /// Walks along any face that is not a gate of a simplex of the given
    /// chain.
    Simeq,
}

/// Disjoint classes covering the rectangle's vertices; classes and their
/// members are sorted, so equal partitions compare equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComponentPartition {
    pub relation: Relation,
    classes: Vec<Vec<GridPoint>>,
    index: HashMap<GridPoint, usize>,
}

impl ComponentPartition {
    pub fn classes(&self) -> &[Vec<GridPoint>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, p: GridPoint) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn same_class(&self, p: GridPoint, q: GridPoint) -> bool {
        match (self.class_of(p), self.class_of(q)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

/// Partition the rectangle's vertices by ≈ (equal-color face steps) or by ≃
/// (face steps avoiding the gates of the chain's simplexes).
pub fn components(
    c: &Coloring,
    r: &Rectangle,
    relation: Relation,
    chain: Option<&Chain>,
) -> Result<ComponentPartition, ChainError> {
    let blocked: HashSet<Face> = match relation {
        Relation::Approx => HashSet::new(),
        Relation::Simeq => {
            let chain = chain.ok_or(ChainError::MissingChain)?;
            chain
                .simplexes
                .iter()
                .flat_map(|s| c.simplex_gates(*s))
                .collect()
        }
    };
    let (lo, hi) = (r.lo(), r.hi());
    let w = (hi.i - lo.i + 1) as usize;
    let h = (hi.j - lo.j + 1) as usize;
    let idx = |p: GridPoint| -> usize { ((p.j - lo.j) as usize) * w + (p.i - lo.i) as usize };
    let mut uf = UnionFind::new(w * h);
    for p in r.vertices() {
        for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
            let q = p.shifted(di, dj);
            if !r.contains_point(q) {
                continue;
            }
            let joined = match relation {
                Relation::Approx => c.value(p) == c.value(q),
                Relation::Simeq => {
                    let f = Face::new(p, q).expect("lattice step");
                    !blocked.contains(&f)
                }
            };
            if joined {
                uf.union(idx(p), idx(q));
            }
        }
    }
    let mut by_root: HashMap<usize, Vec<GridPoint>> = HashMap::new();
    for p in r.vertices() {
        by_root.entry(uf.find(idx(p))).or_default().push(p);
    }
    let mut classes: Vec<Vec<GridPoint>> = by_root.into_values().collect();
    for class in &mut classes {
        class.sort();
    }
    classes.sort();
    let index = classes
        .iter()
        .enumerate()
        .flat_map(|(t, class)| class.iter().map(move |p| (*p, t)))
        .collect();
    Ok(ComponentPartition { relation, classes, index })
}

/// Witness chain for opposite corners of different colors: find the ≈
/// component of `b`, walk the arc from `a` toward `b` until it enters that
/// component, trace the maximal chain through the gate found there. The
/// resulting chain starts on the arc ab and ends on the arc ba.
pub fn lemma_witness(
    c: &Coloring,
    r: &Rectangle,
    a: GridPoint,
    b: GridPoint,
) -> Result<Chain, ChainError> {
    let walk = boundary_path(r, a, b)?;
    if c.value(a) == c.value(b) {
        return Err(ChainError::SameColor(a, b));
    }
    let part = components(c, r, Relation::Approx, None)?;
    let class_b = part.class_of(b).expect("b lies in the rectangle");
    let t = walk
        .iter()
        .position(|v| part.class_of(*v) == Some(class_b))
        .expect("b itself is on the walk");
    // t > 0: a has the opposite color, and ≈ classes are color-homogeneous.
    assert!(t > 0, "corner a cannot lie in the component of b");
    let gate = Face::new(walk[t - 1], walk[t]).expect("consecutive walk vertices span a face");
    trace_chain_within(r, gate, c)
}

/// Check the witness postcondition: the chain's first gate lies on the arc
/// ab and its last gate on the arc ba.
pub fn witness_meets_arcs(
    chain: &Chain,
    r: &Rectangle,
    a: GridPoint,
    b: GridPoint,
) -> Result<bool, GridError> {
    let arc_ab = boundary_path(r, a, b)?;
    let arc_ba = boundary_path(r, b, a)?;
    Ok(gate_on_arc(&arc_ab, chain.first_gate()) && gate_on_arc(&arc_ba, chain.last_gate()))
}

/// A gate lies on an arc iff its endpoints are consecutive walk vertices.
pub fn gate_on_arc(arc: &[GridPoint], gate: Face) -> bool {
    arc.windows(2).any(|w| {
        (w[0] == gate.a() && w[1] == gate.b()) || (w[0] == gate.b() && w[1] == gate.a())
    })
}

/// Wire format for one simplex: base coordinates plus orientation bit.
#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplexDoc {
    pub i: i32,
    pub j: i32,
    pub orientation: u8,
}

/// Wire format for one face: its two endpoints as `[i, j]` pairs.
#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceDoc {
    pub a: [i32; 2],
    pub b: [i32; 2],
}

/// Wire format for chains and torus cycles.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ChainDoc {
    pub k: u32,
    pub surface: Surface,
    pub simplexes: Vec<SimplexDoc>,
    pub gates: Vec<FaceDoc>,
    pub closed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding: Option<[i32; 2]>,
}

impl ChainDoc {
    pub fn from_chain(chain: &Chain, winding: Option<(i32, i32)>) -> Self {
        ChainDoc {
            k: chain.k,
            surface: chain.surface,
            simplexes: chain
                .simplexes
                .iter()
                .map(|s| SimplexDoc {
                    i: s.base.i,
                    j: s.base.j,
                    orientation: s.orientation.index(),
                })
                .collect(),
            gates: chain
                .gates
                .iter()
                .map(|g| FaceDoc {
                    a: [g.a().i, g.a().j],
                    b: [g.b().i, g.b().j],
                })
                .collect(),
            closed: chain.closed,
            winding: winding.map(|(h, v)| [h, v]),
        }
    }

    /// Validate and rebuild the in-memory chain (winding survives on the doc).
    pub fn to_chain(&self) -> Result<Chain, ChainError> {
        let simplexes = self
            .simplexes
            .iter()
            .map(|s| {
                let orientation = Axis::from_index(s.orientation).ok_or_else(|| {
                    ChainError::Grid(GridError::NotAFace(
                        GridPoint::new(s.i, s.j),
                        GridPoint::new(s.i, s.j),
                    ))
                })?;
                Ok(Simplex::new(GridPoint::new(s.i, s.j), orientation))
            })
            .collect::<Result<Vec<_>, ChainError>>()?;
        let gates = self
            .gates
            .iter()
            .map(|g| {
                Face::new(
                    GridPoint::new(g.a[0], g.a[1]),
                    GridPoint::new(g.b[0], g.b[1]),
                )
                .map_err(ChainError::Grid)
            })
            .collect::<Result<Vec<_>, ChainError>>()?;
        Ok(Chain {
            k: self.k,
            surface: self.surface,
            simplexes,
            gates,
            closed: self.closed,
        })
    }
}

impl From<&Chain> for ChainDoc {
    fn from(chain: &Chain) -> Self {
        ChainDoc::from_chain(chain, None)
    }
}
