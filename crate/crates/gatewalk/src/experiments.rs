//! Candidate maps and the two falsification harnesses.
//!
//! A circle candidate stands in for a would-be symmetric mean on S¹ = ℝ/ℤ:
//! it maps (x, y) to one angle θ = p(r(x, y)). A disk candidate stands in
//! for a would-be retraction of the unit square onto its boundary. Each
//! harness hunts for a finite witness that the candidate cannot be what it
//! claims: a symmetry violation, a retraction-identity violation, or an
//! adjacent-vertex image jump (continuity gap) localized on a traced chain.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::chain::{boundary_gates, components, trace_maximal_chain, Chain, ChainError, Relation};
use crate::chain::ComponentPartition;
use crate::coloring::{sample_coloring, Coloring, ColoringError};
use crate::grid::{CombinatorialSquare, GridError, GridPoint};
use crate::limits::{connectivity_check, upper_limit_approx, LimitsError, LsApprox, Metric, PointSet};
use crate::torus::{all_torus_cycles, TorusError, TorusSurface};
use crate::util::sig12;

/// Numeric slack for "lies on the square boundary" checks.
pub const BOUNDARY_SNAP: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentsError {
    #[error("unknown candidate {0:?}")]
    UnknownCandidate(String),
    #[error("bad parameters for candidate {name:?}: {reason}")]
    BadParams { name: String, reason: String },
    #[error("the resolution list is empty")]
    EmptyKList,
    #[error("candidate undefined at sample point ({x}, {y}); a retraction must be total")]
    EvaluationFailure { x: f64, y: f64 },
    #[error("candidate output {fx}, {fy} at ({x}, {y}) is not on the square boundary")]
    NotBoundaryValued { x: f64, y: f64, fx: f64, fy: f64 },
    #[error("candidate does not induce the boundary-identity gate pattern: {reason}")]
    BoundaryNotIdentity { reason: String },
    #[error("no gates at any requested resolution; nothing to trace")]
    NoGates,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Limits(#[from] LimitsError),
}

/// Distance on the circle of circumference 1.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Midpoint of the shorter arc between two circle points; the antipodal tie
/// resolves through the smaller argument so the result is order-free.
fn shorter_arc_midpoint(x: f64, y: f64) -> f64 {
    let d = (y - x).rem_euclid(1.0);
    let mid = if d == 0.5 {
        x.min(y) + 0.25
    } else if d < 0.5 {
        x + d / 2.0
    } else {
        y + (1.0 - d) / 2.0
    };
    mid.rem_euclid(1.0)
}

/// Counterclockwise arc-length coordinate of a point on the square
/// boundary (perimeter 4): bottom 0..1, right 1..2, top 2..3, left 3..4.
/// `None` when the point is off the boundary by more than the snap slack.
pub fn boundary_arc_position(p: (f64, f64)) -> Option<f64> {
    let (x, y) = p;
    let on = |a: f64, b: f64| (a - b).abs() <= BOUNDARY_SNAP;
    let in_range = |a: f64| (-BOUNDARY_SNAP..=1.0 + BOUNDARY_SNAP).contains(&a);
    if !in_range(x) || !in_range(y) {
        return None;
    }
    if on(y, 0.0) {
        Some(x.clamp(0.0, 1.0))
    } else if on(x, 1.0) {
        Some(1.0 + y.clamp(0.0, 1.0))
    } else if on(y, 1.0) {
        Some(3.0 - x.clamp(0.0, 1.0))
    } else if on(x, 0.0) {
        Some((4.0 - y.clamp(0.0, 1.0)).rem_euclid(4.0))
    } else {
        None
    }
}

/// Distance along the square boundary, perimeter 4.
pub fn boundary_arc_distance(p: (f64, f64), q: (f64, f64)) -> Option<f64> {
    let (sp, sq) = (boundary_arc_position(p)?, boundary_arc_position(q)?);
    let d = (sp - sq).rem_euclid(4.0);
    Some(d.min(4.0 - d))
}

/// Declared properties of a circle candidate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CircleClaims {
    pub symmetric: bool,
    pub retraction: bool,
}

#[derive(Clone, Copy, Debug)]
enum CircleMapKind {
    ShorterArcMidpoint,
    LiftAverage,
    FirstProjection,
    Constant(f64),
    Custom(fn(f64, f64) -> Option<f64>),
}

/// An evaluable stand-in for a 2-mean on the circle: (x, y) ∈ [0,1)² ↦
/// θ ∈ [0,1).
#[derive(Clone, Debug)]
pub struct CircleMapCandidate {
    name: String,
    kind: CircleMapKind,
    pub claims: CircleClaims,
}

impl CircleMapCandidate {
    /// Midpoint of the shorter arc between x and y; antipodal ties resolve
    /// through the smaller argument so the map stays exactly symmetric.
    pub fn shorter_arc_midpoint() -> Self {
        CircleMapCandidate {
            name: "shorter-arc-midpoint".into(),
            kind: CircleMapKind::ShorterArcMidpoint,
            claims: CircleClaims { symmetric: true, retraction: true },
        }
    }

    /// Guarded lift average: points within an eighth of a turn average on
    /// their nearest lifts; wider pairs fall to fixed anchor angles (0 inside
    /// a quarter turn, 1/2 beyond). The far anchor colors a full annulus
    /// around the antipodal locus, so the induced gate cycles wrap the torus.
    pub fn lift_average() -> Self {
        CircleMapCandidate {
            name: "lift-average".into(),
            kind: CircleMapKind::LiftAverage,
            claims: CircleClaims { symmetric: true, retraction: true },
        }
    }

    pub fn first_projection() -> Self {
        CircleMapCandidate {
            name: "first-projection".into(),
            kind: CircleMapKind::FirstProjection,
            claims: CircleClaims { symmetric: false, retraction: true },
        }
    }

    pub fn constant(c: f64) -> Result<Self, ExperimentsError> {
        if !(0.0..1.0).contains(&c) {
            return Err(ExperimentsError::BadParams {
                name: "constant".into(),
                reason: format!("angle {c} outside [0, 1)"),
            });
        }
        Ok(CircleMapCandidate {
            name: format!("constant({c})"),
            kind: CircleMapKind::Constant(c),
            claims: CircleClaims { symmetric: true, retraction: false },
        })
    }

    pub fn custom(name: &str, eval: fn(f64, f64) -> Option<f64>, claims: CircleClaims) -> Self {
        CircleMapCandidate { name: name.into(), kind: CircleMapKind::Custom(eval), claims }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64, y: f64) -> Option<f64> {
        match self.kind {
            CircleMapKind::FirstProjection => Some(x),
            CircleMapKind::Constant(c) => Some(c),
            CircleMapKind::ShorterArcMidpoint => Some(shorter_arc_midpoint(x, y)),
            CircleMapKind::LiftAverage => {
                let sep = circle_distance(x, y);
                if sep <= 0.125 {
                    Some(shorter_arc_midpoint(x, y))
                } else if sep <= 0.25 {
                    Some(0.0)
                } else {
                    Some(0.5)
                }
            }
            CircleMapKind::Custom(f) => f(x, y),
        }
    }
}

/// Declared properties of a disk candidate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DiskClaims {
    pub boundary_identity: bool,
}

#[derive(Clone, Copy, Debug)]
enum DiskMapKind {
    Radial { cx: f64, cy: f64 },
    NearestBoundary,
    Custom(fn(f64, f64) -> Option<(f64, f64)>),
}

/// An evaluable stand-in for a disk-to-boundary retraction:
/// (x, y) ∈ [0,1]² ↦ point on ∂[0,1]².
#[derive(Clone, Debug)]
pub struct DiskMapCandidate {
    name: String,
    kind: DiskMapKind,
    pub claims: DiskClaims,
}

impl DiskMapCandidate {
    /// Project along the ray from `center` onto the boundary; undefined at
    /// the center itself. The hit side's coordinate is pinned exactly.
    pub fn radial(cx: f64, cy: f64) -> Result<Self, ExperimentsError> {
        if !(0.0 < cx && cx < 1.0 && 0.0 < cy && cy < 1.0) {
            return Err(ExperimentsError::BadParams {
                name: "radial".into(),
                reason: format!("center ({cx}, {cy}) not strictly inside the square"),
            });
        }
        Ok(DiskMapCandidate {
            name: format!("radial({cx}, {cy})"),
            kind: DiskMapKind::Radial { cx, cy },
            claims: DiskClaims { boundary_identity: true },
        })
    }

    /// Move each point to the nearest side (ties: bottom, right, top, left).
    pub fn nearest_boundary() -> Self {
        DiskMapCandidate {
            name: "nearest-boundary".into(),
            kind: DiskMapKind::NearestBoundary,
            claims: DiskClaims { boundary_identity: true },
        }
    }

    pub fn custom(
        name: &str,
        eval: fn(f64, f64) -> Option<(f64, f64)>,
        claims: DiskClaims,
    ) -> Self {
        DiskMapCandidate { name: name.into(), kind: DiskMapKind::Custom(eval), claims }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        match self.kind {
            DiskMapKind::Radial { cx, cy } => {
                let (dx, dy) = (x - cx, y - cy);
                if dx == 0.0 && dy == 0.0 {
                    return None;
                }
                let tx = if dx != 0.0 {
                    ((if dx > 0.0 { 1.0 } else { 0.0 }) - cx) / dx
                } else {
                    f64::INFINITY
                };
                let ty = if dy != 0.0 {
                    ((if dy > 0.0 { 1.0 } else { 0.0 }) - cy) / dy
                } else {
                    f64::INFINITY
                };
                let pin = |d: f64| if d > 0.0 { 1.0 } else { 0.0 };
                if tx < ty {
                    Some((pin(dx), (cy + tx * dy).clamp(0.0, 1.0)))
                } else if ty < tx {
                    Some(((cx + ty * dx).clamp(0.0, 1.0), pin(dy)))
                } else {
                    Some((pin(dx), pin(dy)))
                }
            }
            DiskMapKind::NearestBoundary => {
                let m = y.min(1.0 - x).min(1.0 - y).min(x);
                if y == m {
                    Some((x, 0.0))
                } else if 1.0 - x == m {
                    Some((1.0, y))
                } else if 1.0 - y == m {
                    Some((x, 1.0))
                } else {
                    Some((0.0, y))
                }
            }
            DiskMapKind::Custom(f) => f(x, y),
        }
    }
}

/// Either kind of registry candidate.
#[derive(Clone, Debug)]
pub enum BuiltinCandidate {
    Circle(CircleMapCandidate),
    Disk(DiskMapCandidate),
}

/// Look up a named candidate. Circle names: `shorter-arc-midpoint`,
/// `lift-average`, `first-projection`, `constant` (one parameter). Disk
/// names: `radial` (center, defaults to (0.5, 0.5)), `nearest-boundary`.
pub fn builtin_candidate(name: &str, params: &[f64]) -> Result<BuiltinCandidate, ExperimentsError> {
    let no_params = |cand: BuiltinCandidate| {
        if params.is_empty() {
            Ok(cand)
        } else {
            Err(ExperimentsError::BadParams {
                name: name.into(),
                reason: format!("takes no parameters, got {}", params.len()),
            })
        }
    };
    match name {
        "shorter-arc-midpoint" => no_params(BuiltinCandidate::Circle(
            CircleMapCandidate::shorter_arc_midpoint(),
        )),
        "lift-average" => no_params(BuiltinCandidate::Circle(CircleMapCandidate::lift_average())),
        "first-projection" => {
            no_params(BuiltinCandidate::Circle(CircleMapCandidate::first_projection()))
        }
        "constant" => match params {
            [c] => Ok(BuiltinCandidate::Circle(CircleMapCandidate::constant(*c)?)),
            _ => Err(ExperimentsError::BadParams {
                name: name.into(),
                reason: format!("takes exactly one angle parameter, got {}", params.len()),
            }),
        },
        "radial" => match params {
            [] => Ok(BuiltinCandidate::Disk(DiskMapCandidate::radial(0.5, 0.5)?)),
            [cx, cy] => Ok(BuiltinCandidate::Disk(DiskMapCandidate::radial(*cx, *cy)?)),
            _ => Err(ExperimentsError::BadParams {
                name: name.into(),
                reason: format!("takes zero or two center coordinates, got {}", params.len()),
            }),
        },
        "nearest-boundary" => no_params(BuiltinCandidate::Disk(DiskMapCandidate::nearest_boundary())),
        _ => Err(ExperimentsError::UnknownCandidate(name.into())),
    }
}

/// The finite witness a harness produced.
#[derive(Clone, PartialEq, Debug)]
pub enum CertificateVariant {
    /// Images of (x, y) and (y, x) are `deviation` apart on the circle.
    SymmetryViolation { x: f64, y: f64, deviation: f64 },
    /// Image of (x, x) is `deviation` away from x on the circle.
    RetractionViolation { x: f64, deviation: f64 },
    /// Adjacent lattice vertices `a`, `b` (face of a traced-chain simplex)
    /// whose images are `gap` apart — circle metric for mean candidates,
    /// boundary arc length (perimeter 4) for disk candidates.
    ContinuityGap { k: u32, a: GridPoint, b: GridPoint, gap: f64 },
}

/// Trace artifacts retained for one resolution.
#[derive(Clone, Debug)]
pub struct PerKTrace {
    pub k: u32,
    pub gap: f64,
    pub gap_face: Option<(GridPoint, GridPoint)>,
    pub coloring: Coloring,
    pub chains: Vec<Chain>,
    /// Seam windings parallel to `chains`; empty for square-surface traces.
    pub windings: Vec<(i32, i32)>,
    /// ε-component count of each chain's vertex set at ε = 2/k.
    pub chain_components: Vec<usize>,
    /// The ≈ partition of the full square, kept for inspection.
    pub partition: Option<ComponentPartition>,
}

/// Machine-checkable outcome of a harness run.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub candidate: String,
    pub variant: CertificateVariant,
    pub per_k: Vec<PerKTrace>,
    /// Upper-limit approximation of the traced point sets across the
    /// resolution sequence (mean harness only).
    pub ls: Option<LsApprox>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct PerKDoc {
    pub k: u32,
    pub gap: f64,
    pub cycles: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub winding: Vec<[i32; 2]>,
}

/// Wire format: `{"candidate", "variant", "witness", "per_k"}`.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ReportDoc {
    pub candidate: String,
    pub variant: String,
    pub witness: serde_json::Value,
    pub per_k: Vec<PerKDoc>,
}

impl CertificateReport {
    pub fn to_doc(&self) -> ReportDoc {
        let (variant, witness) = match &self.variant {
            CertificateVariant::SymmetryViolation { x, y, deviation } => (
                "symmetry-violation",
                json!({
                    "points": [[sig12(*x), sig12(*y)], [sig12(*y), sig12(*x)]],
                    "deviation": sig12(*deviation),
                }),
            ),
            CertificateVariant::RetractionViolation { x, deviation } => (
                "retraction-violation",
                json!({ "point": sig12(*x), "deviation": sig12(*deviation) }),
            ),
            CertificateVariant::ContinuityGap { k, a, b, gap } => (
                "continuity-gap",
                json!({
                    "k": k,
                    "a": [a.i, a.j],
                    "b": [b.i, b.j],
                    "gap": sig12(*gap),
                }),
            ),
        };
        ReportDoc {
            candidate: self.candidate.clone(),
            variant: variant.into(),
            witness,
            per_k: self
                .per_k
                .iter()
                .map(|t| PerKDoc {
                    k: t.k,
                    gap: sig12(t.gap),
                    cycles: t.chains.len(),
                    winding: t.windings.iter().map(|&(h, v)| [h, v]).collect(),
                })
                .collect(),
        }
    }
}

fn eval_circle_at(
    cand: &CircleMapCandidate,
    k: u32,
    p: GridPoint,
) -> Result<f64, ExperimentsError> {
    let kf = k as f64;
    let x = p.i.rem_euclid(k as i32) as f64 / kf;
    let y = p.j.rem_euclid(k as i32) as f64 / kf;
    cand.eval(x, y).ok_or(ExperimentsError::EvaluationFailure { x, y })
}

/// Mean-candidate harness.
///
/// Stage 1 scans every lattice pair for symmetry violations and the lattice
/// diagonal for retraction violations, reporting the maximal deviation if it
/// exceeds `tol`. Stage 2 samples the induced coloring at each k, traces all
/// torus cycles, measures the largest image jump across any face of a traced
/// simplex, and attaches per-k artifacts plus an upper-limit approximation
/// of the traced vertex sets. A jump bounded away from zero as k grows is
/// the finite-resolution shape of the impossibility.
pub fn certify_mean_candidate(
    cand: &CircleMapCandidate,
    k_list: &[u32],
    tol: f64,
) -> Result<CertificateReport, ExperimentsError> {
    if k_list.is_empty() {
        return Err(ExperimentsError::EmptyKList);
    }
    for &k in k_list {
        CombinatorialSquare::new(k)?;
    }

    // stage 1: direct grid scans
    let mut best_sym = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut best_ret = (f64::NEG_INFINITY, 0.0);
    for &k in k_list {
        let kf = k as f64;
        for i in 0..k {
            let x = i as f64 / kf;
            for j in 0..k {
                let y = j as f64 / kf;
                let fxy = cand.eval(x, y).ok_or(ExperimentsError::EvaluationFailure { x, y })?;
                let fyx = cand.eval(y, x).ok_or(ExperimentsError::EvaluationFailure { x: y, y: x })?;
                let dev = circle_distance(fxy, fyx);
                if dev > best_sym.0 {
                    best_sym = (dev, x, y);
                }
            }
            let fxx = cand.eval(x, x).ok_or(ExperimentsError::EvaluationFailure { x, y: x })?;
            let dev = circle_distance(fxx, x);
            if dev > best_ret.0 {
                best_ret = (dev, x);
            }
        }
    }
    if best_sym.0 > tol {
        return Ok(CertificateReport {
            candidate: cand.name().into(),
            variant: CertificateVariant::SymmetryViolation {
                x: best_sym.1,
                y: best_sym.2,
                deviation: best_sym.0,
            },
            per_k: Vec::new(),
            ls: None,
        });
    }
    if best_ret.0 > tol {
        return Ok(CertificateReport {
            candidate: cand.name().into(),
            variant: CertificateVariant::RetractionViolation {
                x: best_ret.1,
                deviation: best_ret.0,
            },
            per_k: Vec::new(),
            ls: None,
        });
    }

    // stage 2: torus tracing per resolution
    let mut per_k = Vec::new();
    let mut point_sets = Vec::new();
    let mut best_gap: Option<(f64, u32, GridPoint, GridPoint)> = None;
    for &k in k_list {
        let kf = k as f64;
        let coloring = sample_coloring(k, |x, y| cand.eval(x, y)).map_err(|e| match e {
            ColoringError::EvaluationFailure { i, j } => ExperimentsError::EvaluationFailure {
                x: i.rem_euclid(k as i32) as f64 / kf,
                y: j.rem_euclid(k as i32) as f64 / kf,
            },
            other => ExperimentsError::Coloring(other),
        })?;
        let torus = TorusSurface::for_coloring(&coloring)?;
        let cycles = all_torus_cycles(&torus, &coloring)?;

        let mut k_gap: Option<(f64, GridPoint, GridPoint)> = None;
        let mut chain_components = Vec::new();
        let mut union_pts: BTreeSet<(i32, i32)> = BTreeSet::new();
        for cycle in &cycles {
            for s in &cycle.chain.simplexes {
                for f in s.faces() {
                    let (u, v) = f.endpoints();
                    let g = circle_distance(
                        eval_circle_at(cand, k, u)?,
                        eval_circle_at(cand, k, v)?,
                    );
                    if k_gap.is_none_or(|(d, _, _)| g > d) {
                        k_gap = Some((g, u, v));
                    }
                }
            }
            let lattice: BTreeSet<(i32, i32)> = cycle
                .chain
                .simplexes
                .iter()
                .flat_map(|s| s.vertices())
                .map(|p| (p.i.rem_euclid(k as i32), p.j.rem_euclid(k as i32)))
                .collect();
            let pts: Vec<(f64, f64)> = lattice
                .iter()
                .map(|&(i, j)| (i as f64 / kf, j as f64 / kf))
                .collect();
            let set = PointSet::new(Metric::Torus, pts)?;
            chain_components.push(connectivity_check(&set, 2.0 / kf)?);
            union_pts.extend(lattice);
        }
        point_sets.push(PointSet::new(
            Metric::Torus,
            union_pts.iter().map(|&(i, j)| (i as f64 / kf, j as f64 / kf)).collect(),
        )?);

        let square = CombinatorialSquare::new(k)?;
        let partition = components(&coloring, &square.full_rectangle(), Relation::Approx, None)?;
        if let Some((g, a, b)) = k_gap {
            if best_gap.is_none_or(|(d, _, _, _)| g > d) {
                best_gap = Some((g, k, a, b));
            }
        }
        per_k.push(PerKTrace {
            k,
            gap: k_gap.map_or(0.0, |(g, _, _)| g),
            gap_face: k_gap.map(|(_, a, b)| (a, b)),
            coloring,
            chains: cycles.iter().map(|cy| cy.chain.clone()).collect(),
            windings: cycles.iter().map(|cy| cy.winding).collect(),
            chain_components,
            partition: Some(partition),
        });
    }
    let (gap, k, a, b) = best_gap.ok_or(ExperimentsError::NoGates)?;

    let k_min = *k_list.iter().min().expect("nonempty");
    let k_max = *k_list.iter().max().expect("nonempty");
    let ls = upper_limit_approx(&point_sets, 2.0 / k_min as f64, 4 * k_max, 0.5)?;

    Ok(CertificateReport {
        candidate: cand.name().into(),
        variant: CertificateVariant::ContinuityGap { k, a, b, gap },
        per_k,
        ls: Some(ls),
    })
}

/// Disk-candidate harness.
///
/// Colors each vertex by whether its image lands on the bottom∪left
/// (−1) or top∪right (+1) of the boundary; with the identity on the
/// boundary this yields exactly two boundary gates, joined by one chain.
/// The certificate is the largest image jump (boundary arc length) across
/// any face of that chain.
pub fn certify_retraction_candidate(
    cand: &DiskMapCandidate,
    k: u32,
    tol: f64,
) -> Result<CertificateReport, ExperimentsError> {
    let square = CombinatorialSquare::new(k)?;
    let kf = k as f64;
    let n = k as usize + 1;

    let mut outputs = vec![(0.0, 0.0); n * n];
    for j in 0..n {
        for i in 0..n {
            let x = i as f64 / kf;
            let y = j as f64 / kf;
            let out = cand
                .eval(x, y)
                .ok_or(ExperimentsError::EvaluationFailure { x, y })?;
            if boundary_arc_position(out).is_none() {
                return Err(ExperimentsError::NotBoundaryValued { x, y, fx: out.0, fy: out.1 });
            }
            outputs[j * n + i] = out;
        }
    }

    // the boundary must be fixed pointwise (within tol)
    for p in square.full_rectangle().boundary_cycle() {
        let (x, y) = (p.i as f64 / kf, p.j as f64 / kf);
        let (fx, fy) = outputs[p.j as usize * n + p.i as usize];
        let d = ((fx - x).powi(2) + (fy - y).powi(2)).sqrt();
        if d > tol {
            return Err(ExperimentsError::BoundaryNotIdentity {
                reason: format!("boundary vertex ({x}, {y}) maps {d} away to ({fx}, {fy})"),
            });
        }
    }

    let coloring = Coloring::from_fn(k, |i, j| {
        let (fx, fy) = outputs[j as usize * n + i as usize];
        if fx.abs() <= BOUNDARY_SNAP || fy.abs() <= BOUNDARY_SNAP {
            -1
        } else {
            1
        }
    })?;

    let rect = square.full_rectangle();
    let gates = boundary_gates(&coloring, &rect);
    if gates.len() != 2 {
        return Err(ExperimentsError::BoundaryNotIdentity {
            reason: format!("expected 2 boundary gates, found {}", gates.len()),
        });
    }
    let chain = trace_maximal_chain(&square, gates[0], &coloring)?;
    debug_assert_eq!(chain.last_gate(), gates[1], "the single chain joins the two gates");

    let mut best: Option<(f64, GridPoint, GridPoint)> = None;
    for s in &chain.simplexes {
        for f in s.faces() {
            let (u, v) = f.endpoints();
            let pu = outputs[u.j as usize * n + u.i as usize];
            let pv = outputs[v.j as usize * n + v.i as usize];
            let g = boundary_arc_distance(pu, pv).expect("outputs checked boundary-valued");
            if best.is_none_or(|(d, _, _)| g > d) {
                best = Some((g, u, v));
            }
        }
    }
    let (gap, a, b) = best.expect("a traced chain has at least one simplex");

    Ok(CertificateReport {
        candidate: cand.name().into(),
        variant: CertificateVariant::ContinuityGap { k, a, b, gap },
        per_k: vec![PerKTrace {
            k,
            gap,
            gap_face: Some((a, b)),
            coloring,
            chains: vec![chain],
            windings: Vec::new(),
            chain_components: Vec::new(),
            partition: None,
        }],
        ls: None,
    })
}
