//! Desk-scale stand-ins for set-sequence upper limits and connectivity:
//! a reference-grid approximation of the upper limit of a sequence of point
//! sets, and an ε-neighborhood component count.
//!
//! "Appears in infinitely many members" is approximated by "appears in at
//! least a `tail_fraction` of the second half of the sequence" — finite data
//! cannot witness infinitude, so the tail frequency is the documented proxy.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::util::UnionFind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LimitsError {
    #[error("the sequence of point sets is empty")]
    EmptySequence,
    #[error("the point set is empty")]
    EmptySet,
    #[error("epsilon must be positive and finite, got {0}")]
    BadEpsilon(f64),
    #[error("tail fraction must lie in (0, 1], got {0}")]
    BadTailFraction(f64),
    #[error("reference grid resolution must be at least 1")]
    BadResolution,
    #[error("all sets in a sequence must share one metric")]
    MetricMismatch,
    #[error("coordinate ({0}, {1}) outside the unit square")]
    CoordinateOutOfRange(f64, f64),
}

/// Distance convention on the unit square.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    /// Quotient metric of ℝ²/ℤ²: each axis difference is reduced to its
    /// nearest-image representative.
    Torus,
}

fn axis_gap(metric: Metric, d: f64) -> f64 {
    match metric {
        Metric::Euclidean => d.abs(),
        Metric::Torus => d.abs().min((d - 1.0).abs()).min((d + 1.0).abs()),
    }
}

fn dist2(metric: Metric, p: (f64, f64), q: (f64, f64)) -> f64 {
    let gx = axis_gap(metric, p.0 - q.0);
    let gy = axis_gap(metric, p.1 - q.1);
    gx * gx + gy * gy
}

/// The canonical closeness predicate; every decision in this module uses it,
/// so results are reproducible to the bit.
pub fn within(metric: Metric, p: (f64, f64), q: (f64, f64), epsilon: f64) -> bool {
    dist2(metric, p, q) <= epsilon * epsilon
}

pub fn distance(metric: Metric, p: (f64, f64), q: (f64, f64)) -> f64 {
    dist2(metric, p, q).sqrt()
}

/// A finite set of points in the unit square under a chosen metric.
#[derive(Clone, PartialEq, Debug)]
pub struct PointSet {
    metric: Metric,
    points: Vec<(f64, f64)>,
}

impl PointSet {
    pub fn new(metric: Metric, points: Vec<(f64, f64)>) -> Result<Self, LimitsError> {
        for &(x, y) in &points {
            if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
                return Err(LimitsError::CoordinateOutOfRange(x, y));
            }
        }
        Ok(PointSet { metric, points })
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Reference-grid approximation of the upper limit of a set sequence.
#[derive(Clone, PartialEq, Debug)]
pub struct LsApprox {
    pub epsilon: f64,
    pub tail_fraction: f64,
    pub k_ref: u32,
    /// Qualifying grid points, sorted by y then x.
    pub points: Vec<(f64, f64)>,
}

fn check_epsilon(epsilon: f64) -> Result<(), LimitsError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(LimitsError::BadEpsilon(epsilon));
    }
    Ok(())
}

/// Points of the (k_ref+1)² reference grid whose ε-ball meets at least a
/// `tail_fraction` of the sets in the second half of the sequence.
/// Enlarging ε never removes points.
pub fn upper_limit_approx(
    seq: &[PointSet],
    epsilon: f64,
    k_ref: u32,
    tail_fraction: f64,
) -> Result<LsApprox, LimitsError> {
    if seq.is_empty() {
        return Err(LimitsError::EmptySequence);
    }
    check_epsilon(epsilon)?;
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(LimitsError::BadTailFraction(tail_fraction));
    }
    if k_ref == 0 {
        return Err(LimitsError::BadResolution);
    }
    let metric = seq[0].metric();
    if seq.iter().any(|s| s.metric() != metric) {
        return Err(LimitsError::MetricMismatch);
    }

    // 1-based tail {⌈m/2⌉, …, m}
    let m = seq.len();
    let start = m.div_ceil(2);
    let tail = &seq[start - 1..];
    let need = tail_fraction * tail.len() as f64;

    let n = k_ref as usize + 1;
    let mut hits = vec![0u32; n * n];
    let mut mask = vec![false; n * n];
    for set in tail {
        mask.fill(false);
        stamp(set, epsilon, k_ref, &mut mask);
        for (h, &m) in hits.iter_mut().zip(&mask) {
            *h += m as u32;
        }
    }

    let kf = k_ref as f64;
    let mut points = Vec::new();
    for v in 0..n {
        for u in 0..n {
            if hits[v * n + u] as f64 >= need {
                points.push((u as f64 / kf, v as f64 / kf));
            }
        }
    }
    Ok(LsApprox {
        epsilon,
        tail_fraction,
        k_ref,
        points,
    })
}

// Mark every reference grid point within epsilon of the set. Interval spans
// come from disk geometry, but each interval endpoint is settled with the
// canonical `within` predicate so the mask is exact with respect to it.
fn stamp(set: &PointSet, epsilon: f64, k_ref: u32, mask: &mut [bool]) {
    let n = k_ref as i64 + 1;
    let kf = k_ref as f64;
    let metric = set.metric();
    let shifts: &[f64] = match metric {
        Metric::Euclidean => &[0.0],
        Metric::Torus => &[-1.0, 0.0, 1.0],
    };
    for &(px, py) in set.points() {
        for &sy in shifts {
            let cy = py + sy;
            let v_lo = (((cy - epsilon) * kf).ceil() as i64 - 1).max(0);
            let v_hi = (((cy + epsilon) * kf).floor() as i64 + 1).min(n - 1);
            for v in v_lo..=v_hi {
                let y = v as f64 / kf;
                let dy = y - cy;
                let half = (epsilon * epsilon - dy * dy).max(0.0).sqrt();
                for &sx in shifts {
                    let cx = px + sx;
                    let mut u_lo = (((cx - half) * kf).ceil() as i64 - 1).max(0);
                    let mut u_hi = (((cx + half) * kf).floor() as i64 + 1).min(n - 1);
                    let ok = |u: i64| {
                        within(metric, (u as f64 / kf, y), (px, py), epsilon)
                    };
                    while u_lo <= u_hi && !ok(u_lo) {
                        u_lo += 1;
                    }
                    while u_lo <= u_hi && !ok(u_hi) {
                        u_hi -= 1;
                    }
                    for u in u_lo..=u_hi {
                        mask[(v * n + u) as usize] = true;
                    }
                }
            }
        }
    }
}

/// Number of connected components of the graph joining points at distance
/// ≤ ε. One component means the set is ε-connected.
pub fn connectivity_check(set: &PointSet, epsilon: f64) -> Result<usize, LimitsError> {
    if set.is_empty() {
        return Err(LimitsError::EmptySet);
    }
    check_epsilon(epsilon)?;
    let metric = set.metric();
    let pts = set.points();
    let n = pts.len();

    // bucket grid with cell width ≥ ε so neighbors live in adjacent cells
    let cells = (1.0 / epsilon).floor().clamp(1.0, 4096.0) as i64;
    let cell_of = |x: f64| -> i64 { ((x * cells as f64).floor() as i64).clamp(0, cells - 1) };
    let mut buckets: std::collections::HashMap<(i64, i64), Vec<usize>> =
        std::collections::HashMap::new();
    for (t, &(x, y)) in pts.iter().enumerate() {
        buckets.entry((cell_of(x), cell_of(y))).or_default().push(t);
    }

    let mut uf = UnionFind::new(n);
    for (&(cx, cy), members) in &buckets {
        for dx in -1..=1i64 {
            for dy in -1..=1i64 {
                let (mut nx, mut ny) = (cx + dx, cy + dy);
                match metric {
                    Metric::Torus => {
                        nx = nx.rem_euclid(cells);
                        ny = ny.rem_euclid(cells);
                    }
                    Metric::Euclidean => {
                        if !(0..cells).contains(&nx) || !(0..cells).contains(&ny) {
                            continue;
                        }
                    }
                }
                let Some(others) = buckets.get(&(nx, ny)) else {
                    continue;
                };
                for &a in members {
                    for &b in others {
                        if a < b && within(metric, pts[a], pts[b], epsilon) {
                            uf.union(a, b);
                        }
                    }
                }
            }
        }
    }
    let mut roots = std::collections::HashSet::new();
    for t in 0..n {
        roots.insert(uf.find(t));
    }
    Ok(roots.len())
}

/// Wire format: `{"metric", "points"}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PointSetDoc {
    pub metric: Metric,
    pub points: Vec<[f64; 2]>,
}

impl From<&PointSet> for PointSetDoc {
    fn from(set: &PointSet) -> Self {
        PointSetDoc {
            metric: set.metric(),
            points: set.points().iter().map(|&(x, y)| [x, y]).collect(),
        }
    }
}

impl TryFrom<PointSetDoc> for PointSet {
    type Error = LimitsError;

    fn try_from(doc: PointSetDoc) -> Result<Self, Self::Error> {
        PointSet::new(doc.metric, doc.points.into_iter().map(|[x, y]| (x, y)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(metric: Metric, pts: &[(f64, f64)]) -> PointSet {
        PointSet::new(metric, pts.to_vec()).unwrap()
    }

    /// Direct oracle: all reference grid points within epsilon of the point.
    fn dilation(metric: Metric, p: (f64, f64), epsilon: f64, k_ref: u32) -> Vec<(f64, f64)> {
        let kf = k_ref as f64;
        let mut out = Vec::new();
        for v in 0..=k_ref {
            for u in 0..=k_ref {
                let q = (u as f64 / kf, v as f64 / kf);
                if within(metric, p, q, epsilon) {
                    out.push(q);
                }
            }
        }
        out
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            upper_limit_approx(&[], 0.1, 8, 0.5).unwrap_err(),
            LimitsError::EmptySequence
        );
        let s = set(Metric::Euclidean, &[(0.5, 0.5)]);
        assert_eq!(
            upper_limit_approx(std::slice::from_ref(&s), 0.0, 8, 0.5).unwrap_err(),
            LimitsError::BadEpsilon(0.0)
        );
        assert_eq!(
            upper_limit_approx(std::slice::from_ref(&s), 0.1, 8, 0.0).unwrap_err(),
            LimitsError::BadTailFraction(0.0)
        );
        let t = set(Metric::Torus, &[(0.5, 0.5)]);
        assert_eq!(
            upper_limit_approx(&[s.clone(), t], 0.1, 8, 0.5).unwrap_err(),
            LimitsError::MetricMismatch
        );
        let empty = PointSet::new(Metric::Euclidean, vec![]).unwrap();
        assert_eq!(connectivity_check(&empty, 0.1).unwrap_err(), LimitsError::EmptySet);
        assert!(PointSet::new(Metric::Euclidean, vec![(1.2, 0.0)]).is_err());
    }

    #[test]
    fn constant_sequence_equals_the_dilation_exactly() {
        let s = set(Metric::Euclidean, &[(0.5, 0.5)]);
        let seq = vec![s; 6];
        let ls = upper_limit_approx(&seq, 0.25, 8, 0.5).unwrap();
        assert_eq!(ls.points, dilation(Metric::Euclidean, (0.5, 0.5), 0.25, 8));
        // boundary-exact grid points are included: (0.25, 0.5) is at
        // distance exactly 0.25
        assert!(ls.points.contains(&(0.25, 0.5)));
    }

    #[test]
    fn alternating_sequence_keeps_both_sets() {
        let p = (0.2, 0.2);
        let q = (0.8, 0.8);
        let seq: Vec<PointSet> = (0..7)
            .map(|t| set(Metric::Euclidean, &[if t % 2 == 0 { p } else { q }]))
            .collect();
        // tail = indices 4..=7 (1-based), two hits for each point
        let ls = upper_limit_approx(&seq, 0.1, 10, 0.5).unwrap();
        let mut expected = dilation(Metric::Euclidean, p, 0.1, 10);
        expected.extend(dilation(Metric::Euclidean, q, 0.1, 10));
        expected.sort_by(|a, b| (a.1, a.0).partial_cmp(&(b.1, b.0)).unwrap());
        expected.dedup();
        assert_eq!(ls.points, expected);
    }

    #[test]
    fn convergent_sequence_concentrates_at_the_limit() {
        let seq: Vec<PointSet> = (1..=64)
            .map(|n| set(Metric::Euclidean, &[(1.0 / n as f64, 0.0)]))
            .collect();
        let ls = upper_limit_approx(&seq, 0.1, 16, 0.5).unwrap();
        assert!(ls.points.contains(&(0.0, 0.0)));
        for &p in &ls.points {
            // tail points live within 1/32 of the origin
            assert!(distance(Metric::Euclidean, p, (0.0, 0.0)) <= 0.1 + 1.0 / 32.0);
        }
    }

    #[test]
    fn torus_stamping_wraps() {
        let s = set(Metric::Torus, &[(0.0, 0.5)]);
        let ls = upper_limit_approx(&[s], 0.1, 10, 1.0).unwrap();
        // (1.0, 0.5) is the same torus point
        assert!(ls.points.contains(&(1.0, 0.5)));
        assert!(ls.points.contains(&(0.9, 0.5)));
        assert!(!ls.points.contains(&(0.5, 0.5)));
    }

    #[test]
    fn connectivity_examples() {
        let far = set(Metric::Euclidean, &[(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(connectivity_check(&far, 0.1).unwrap(), 2);
        let wrap = set(Metric::Torus, &[(0.05, 0.0), (0.95, 0.0)]);
        assert_eq!(connectivity_check(&wrap, 0.2).unwrap(), 1);
        let wrap_euclid = set(Metric::Euclidean, &[(0.05, 0.0), (0.95, 0.0)]);
        assert_eq!(connectivity_check(&wrap_euclid, 0.2).unwrap(), 2);
    }

    #[test]
    fn traced_chain_vertices_are_connected() {
        use crate::chain::{boundary_gates, trace_maximal_chain};
        use crate::coloring::Coloring;
        use crate::grid::CombinatorialSquare;
        let k = 16u32;
        let c = Coloring::from_fn(k, |i, _| if i == 0 { -1 } else { 1 }).unwrap();
        let sq = CombinatorialSquare::new(k).unwrap();
        let start = boundary_gates(&c, &sq.full_rectangle())[0];
        let chain = trace_maximal_chain(&sq, start, &c).unwrap();
        let pts: Vec<(f64, f64)> = chain
            .vertex_set()
            .into_iter()
            .map(|p| (p.i as f64 / k as f64, p.j as f64 / k as f64))
            .collect();
        let ps = PointSet::new(Metric::Euclidean, pts).unwrap();
        assert_eq!(connectivity_check(&ps, 2.0 / k as f64).unwrap(), 1);
    }

    #[test]
    fn json_shape() {
        let s = set(Metric::Torus, &[(0.25, 0.75)]);
        let json = serde_json::to_string(&PointSetDoc::from(&s)).unwrap();
        assert_eq!(json, "{\"metric\":\"torus\",\"points\":[[0.25,0.75]]}");
        let back: PointSetDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(PointSet::try_from(back).unwrap(), s);
    }

    proptest! {
        #[test]
        fn ls_monotone_in_epsilon(
            pts in proptest::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..8),
            e1 in 0.01f64..0.3,
            grow in 0.01f64..0.3,
        ) {
            let s = set(Metric::Euclidean, &pts);
            let seq = vec![s; 3];
            let small = upper_limit_approx(&seq, e1, 12, 0.5).unwrap();
            let large = upper_limit_approx(&seq, e1 + grow, 12, 0.5).unwrap();
            for p in &small.points {
                prop_assert!(large.points.contains(p));
            }
        }

        #[test]
        fn euclidean_components_dominate_torus_components(
            pts in proptest::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..12),
            eps in 0.05f64..0.5,
        ) {
            let e = connectivity_check(&set(Metric::Euclidean, &pts), eps).unwrap();
            let t = connectivity_check(&set(Metric::Torus, &pts), eps).unwrap();
            prop_assert!(e >= t);
        }

        #[test]
        fn components_monotone_in_epsilon(
            pts in proptest::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..12),
            e1 in 0.05f64..0.4,
            grow in 0.01f64..0.4,
        ) {
            let s = set(Metric::Euclidean, &pts);
            let c1 = connectivity_check(&s, e1).unwrap();
            let c2 = connectivity_check(&s, e1 + grow).unwrap();
            prop_assert!(c2 <= c1);
        }
    }
}
