//! Acceptance suite: one test per criterion, each printing a PASS line and
//! holding to its stated time budget. Derived expectations are checked
//! against independent oracles built inside this file (pairwise-intersection
//! adjacency, centroid-unwrap winding, direct dilation scans).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gatewalk::chain::{
    boundary_gates, components, continue_through, lemma_witness, trace_maximal_chain,
    witness_meets_arcs, Relation,
};
use gatewalk::coloring::{sample_coloring, Coloring};
use gatewalk::experiments::{
    certify_mean_candidate, certify_retraction_candidate, CertificateVariant, CircleMapCandidate,
    DiskMapCandidate,
};
use gatewalk::grid::{Axis, CombinatorialSquare, Face, GridPoint, Rectangle, Simplex};
use gatewalk::limits::{connectivity_check, upper_limit_approx, within, Metric, PointSet};
use gatewalk::torus::{all_torus_cycles, TorusCycle, TorusSurface};

fn gp(i: i32, j: i32) -> GridPoint {
    GridPoint::new(i, j)
}

fn random_coloring(rng: &mut ChaCha8Rng, k: u32) -> Coloring {
    Coloring::from_fn(k, |_, _| if rng.gen::<bool>() { 1 } else { -1 }).unwrap()
}

/// Criterion 1: over 2 orientations × all vertex colorings × both entry
/// gates (24 directed cases), continuation returns exactly one exit gate.
#[test]
fn criterion_1_continuation_case_analysis() {
    let start = Instant::now();
    let mut cases = 0;
    for orientation in [Axis::Horizontal, Axis::Vertical] {
        let s = Simplex::new(gp(0, 0), orientation);
        let vs = s.vertices();
        for mask in 0u8..8 {
            let color_of = |p: GridPoint| -> i8 {
                for (t, v) in vs.iter().enumerate() {
                    if *v == p {
                        return if mask >> t & 1 == 1 { 1 } else { -1 };
                    }
                }
                1
            };
            let c = Coloring::from_fn(2, |i, j| color_of(gp(i, j))).unwrap();
            let gates = c.simplex_gates(s);
            for entry in &gates {
                let step = continue_through(s, *entry, &c).expect("gated entry continues");
                // exactly one exit: it is a gate, differs from the entry, and
                // is the only other gate of the simplex
                assert!(c.is_gate(step.exit_gate));
                assert_ne!(step.exit_gate, *entry);
                let others: Vec<Face> = gates.iter().copied().filter(|g| g != entry).collect();
                assert_eq!(others, vec![step.exit_gate]);
                cases += 1;
            }
        }
    }
    assert_eq!(cases, 24, "12 undirected configurations, two flows each");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "budget 1 s, took {elapsed:?}");
    println!("PASS criterion 1: continuation case analysis, 24/24 directed cases ({elapsed:?})");
}

/// Criterion 2: k = 3, a = (0,0), b = (3,3); all 2^16 colorings; every one
/// of the 32768 with f(a) = -f(b) yields a witness chain meeting both arcs.
#[test]
fn criterion_2_combinatorial_lemma_exhaustive() {
    let start = Instant::now();
    let (a, b) = (gp(0, 0), gp(3, 3));
    let r = Rectangle::from_corners(a, b).unwrap();
    let mut attempted = 0u32;
    let mut succeeded = 0u32;
    for bits in 0u64..(1 << 16) {
        let c = Coloring::from_bits(3, bits).unwrap();
        if c.value(a) == c.value(b) {
            continue;
        }
        attempted += 1;
        let chain = lemma_witness(&c, &r, a, b).expect("witness exists");
        if witness_meets_arcs(&chain, &r, a, b).unwrap() {
            succeeded += 1;
        }
    }
    assert_eq!(attempted, 32768);
    assert_eq!(succeeded, 32768, "every admissible coloring has a two-arc witness");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "budget 60 s, took {elapsed:?}");
    println!("PASS criterion 2: combinatorial lemma exhaustive, {succeeded}/{attempted} witnesses ({elapsed:?})");
}

/// Criterion 3: 1000 random colorings at k = 25; boundary-started chains end
/// on the boundary without repeats and are pairwise disjoint or identical.
#[test]
fn criterion_3_boundary_chains_randomized() {
    let start = Instant::now();
    let k = 25u32;
    let sq = CombinatorialSquare::new(k).unwrap();
    let rect = sq.full_rectangle();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a7e_ca1c);
    for _ in 0..1000 {
        let c = random_coloring(&mut rng, k);
        let mut chains = Vec::new();
        for gate in boundary_gates(&c, &rect) {
            let chain = trace_maximal_chain(&sq, gate, &c).expect("boundary chains terminate");
            assert!(rect.is_boundary_face(chain.last_gate()), "chain must exit on the boundary");
            let set: HashSet<Simplex> = chain.simplexes.iter().copied().collect();
            assert_eq!(set.len(), chain.simplexes.len(), "no simplex repeats");
            chains.push(set);
        }
        for (t, a) in chains.iter().enumerate() {
            for b in &chains[t + 1..] {
                let disjoint = a.is_disjoint(b);
                let identical = a == b;
                assert!(disjoint || identical, "maximal chains are disjoint or identical");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "budget 30 s, took {elapsed:?}");
    println!("PASS criterion 3: 1000 random colorings at k=25, all boundary chains simple and disjoint-or-identical ({elapsed:?})");
}

/// Criterion 4: over the same colorings, every simplex has 0 or 2 gates.
#[test]
fn criterion_4_gate_parity_over_random_colorings() {
    let start = Instant::now();
    let k = 25u32;
    let sq = CombinatorialSquare::new(k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a7e_ca1c);
    for _ in 0..1000 {
        let c = random_coloring(&mut rng, k);
        for s in sq.simplexes() {
            let n = c.simplex_gates(s).len();
            assert!(n == 0 || n == 2, "simplex {s:?} has {n} gates");
        }
    }
    let elapsed = start.elapsed();
    println!("PASS criterion 4: gate count in {{0, 2}} for 1000 × 1250 simplexes ({elapsed:?})");
}

// Independent tracer: adjacency from pairwise vertex-set intersections on
// the torus (valid for k >= 3), cycles as graph components, winding from
// nearest-image centroid unwrapping.
mod oracle {
    use super::*;

    fn torus_vertices(k: u32, s: Simplex) -> BTreeSet<(i32, i32)> {
        s.vertices()
            .into_iter()
            .map(|p| (p.i.rem_euclid(k as i32), p.j.rem_euclid(k as i32)))
            .collect()
    }

    /// Gated-simplex adjacency: two simplexes are linked when they share
    /// exactly two torus vertices whose colors differ.
    pub fn cycle_partition(k: u32, c: &Coloring) -> Vec<BTreeSet<Simplex>> {
        let sq = CombinatorialSquare::new(k).unwrap();
        let gated: Vec<Simplex> = sq
            .simplexes()
            .filter(|s| !c.simplex_gates(*s).is_empty())
            .collect();
        let verts: Vec<BTreeSet<(i32, i32)>> =
            gated.iter().map(|s| torus_vertices(k, *s)).collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); gated.len()];
        for x in 0..gated.len() {
            for y in x + 1..gated.len() {
                let shared: Vec<(i32, i32)> = verts[x].intersection(&verts[y]).copied().collect();
                if shared.len() != 2 {
                    continue;
                }
                let color =
                    |(i, j): (i32, i32)| c.value(GridPoint::new(i, j));
                if color(shared[0]) != color(shared[1]) {
                    adj[x].push(y);
                    adj[y].push(x);
                }
            }
        }
        // every gated simplex has exactly two gate-neighbors on the torus
        for (t, n) in adj.iter().enumerate() {
            assert_eq!(n.len(), 2, "oracle degree of {:?}", gated[t]);
        }
        let mut seen = vec![false; gated.len()];
        let mut parts = Vec::new();
        for root in 0..gated.len() {
            if seen[root] {
                continue;
            }
            let mut stack = vec![root];
            let mut part = BTreeSet::new();
            while let Some(x) = stack.pop() {
                if std::mem::replace(&mut seen[x], true) {
                    continue;
                }
                part.insert(gated[x]);
                stack.extend(adj[x].iter().copied());
            }
            parts.push(part);
        }
        parts
    }

    /// Winding from summed nearest-image centroid displacements.
    pub fn unwrapped_winding(k: u32, cycle: &TorusCycle) -> (i32, i32) {
        let kf = k as f64;
        let centroid = |s: &Simplex| {
            let vs = s.vertices();
            (
                vs.iter().map(|p| p.i as f64).sum::<f64>() / 3.0 / kf,
                vs.iter().map(|p| p.j as f64).sum::<f64>() / 3.0 / kf,
            )
        };
        let wrap = |mut d: f64| {
            while d > 0.5 {
                d -= 1.0;
            }
            while d <= -0.5 {
                d += 1.0;
            }
            d
        };
        let n = cycle.chain.simplexes.len();
        let (mut dx, mut dy) = (0.0, 0.0);
        for t in 0..n {
            let a = centroid(&cycle.chain.simplexes[t]);
            let b = centroid(&cycle.chain.simplexes[(t + 1) % n]);
            dx += wrap(b.0 - a.0);
            dy += wrap(b.1 - a.1);
        }
        (dx.round() as i32, dy.round() as i32)
    }
}

/// Criterion 5: lift-average at k = 16 closes into cycles that partition the
/// gated simplexes, at least one winding nonzero, all verified against the
/// brute-force tracer.
#[test]
fn criterion_5_torus_cycle_closure() {
    let start = Instant::now();
    let k = 16u32;
    let cand = CircleMapCandidate::lift_average();
    let c = sample_coloring(k, |x, y| cand.eval(x, y)).unwrap();
    let t = TorusSurface::for_coloring(&c).unwrap();
    let cycles = all_torus_cycles(&t, &c).unwrap();
    assert!(!cycles.is_empty());

    // closure: the last gate leads back into the first simplex
    for cycle in &cycles {
        assert!(cycle.chain.closed);
        assert_eq!(cycle.chain.gates.len(), cycle.chain.simplexes.len());
        let pair = t.face_cofaces(cycle.chain.gates[0]);
        assert!(pair.contains(&cycle.chain.simplexes[0]));
        assert!(pair.contains(&t.canonical_simplex(*cycle.chain.simplexes.last().unwrap())));
    }

    // partition of the gated simplexes, checked against the oracle
    let sq = CombinatorialSquare::new(k).unwrap();
    let gated: usize = sq.simplexes().filter(|s| !c.simplex_gates(*s).is_empty()).count();
    assert_eq!(cycles.iter().map(|cy| cy.chain.simplexes.len()).sum::<usize>(), gated);
    let produced: BTreeSet<BTreeSet<Simplex>> = cycles
        .iter()
        .map(|cy| cy.chain.simplexes.iter().copied().collect())
        .collect();
    let expected: BTreeSet<BTreeSet<Simplex>> =
        oracle::cycle_partition(k, &c).into_iter().collect();
    assert_eq!(produced, expected, "cycle partition matches the brute-force tracer");

    // winding agrees with the unwrap oracle, and at least one cycle winds
    for cycle in &cycles {
        assert_eq!(oracle::unwrapped_winding(k, cycle), cycle.winding);
    }
    assert!(cycles.iter().any(|cy| cy.winding != (0, 0)));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "budget 5 s, took {elapsed:?}");
    println!(
        "PASS criterion 5: {} torus cycles at k=16, windings {:?}, oracle-matched ({elapsed:?})",
        cycles.len(),
        cycles.iter().map(|cy| cy.winding).collect::<Vec<_>>()
    );
}

/// Criterion 6: the three mean-certificate shapes at their stated strengths.
#[test]
fn criterion_6_mean_certificates() {
    let start = Instant::now();

    let report = certify_mean_candidate(&CircleMapCandidate::first_projection(), &[8], 1e-9)
        .unwrap();
    match report.variant {
        CertificateVariant::SymmetryViolation { x, y, deviation } => {
            assert!(deviation >= 0.25);
            assert_eq!((x, y, deviation), (0.0, 0.5, 0.5));
        }
        other => panic!("first-projection: expected a symmetry violation, got {other:?}"),
    }

    let report =
        certify_mean_candidate(&CircleMapCandidate::constant(0.0).unwrap(), &[8], 1e-9).unwrap();
    match report.variant {
        CertificateVariant::RetractionViolation { x, deviation } => {
            assert!((deviation - 0.5).abs() <= 1e-9);
            assert_eq!(x, 0.5);
        }
        other => panic!("constant(0): expected a retraction violation, got {other:?}"),
    }

    for cand in [
        CircleMapCandidate::shorter_arc_midpoint(),
        CircleMapCandidate::lift_average(),
    ] {
        let report = certify_mean_candidate(&cand, &[16, 64, 256], 1e-9).unwrap();
        assert!(
            matches!(report.variant, CertificateVariant::ContinuityGap { .. }),
            "{}: expected a continuity gap",
            cand.name()
        );
        assert_eq!(report.per_k.len(), 3);
        for per_k in &report.per_k {
            assert!(
                per_k.gap >= 0.4,
                "{} at k={} has gap {}",
                cand.name(),
                per_k.k,
                per_k.gap
            );
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "budget 60 s, took {elapsed:?}");
    println!("PASS criterion 6: symmetry 0.5, retraction 0.5, continuity gaps >= 0.4 at k in {{16, 64, 256}} ({elapsed:?})");
}

/// Criterion 7: radial(0.5, 0.5) at k = 33 gives exactly two boundary gates,
/// one connecting chain, and an arc-length gap of at least 1.
#[test]
fn criterion_7_borsuk_certificate() {
    let start = Instant::now();
    let k = 33u32;
    let cand = DiskMapCandidate::radial(0.5, 0.5).unwrap();
    let report = certify_retraction_candidate(&cand, k, 1e-9).unwrap();

    let per_k = &report.per_k[0];
    assert_eq!(per_k.chains.len(), 1, "a single connecting chain");
    let chain = &per_k.chains[0];
    let sq = CombinatorialSquare::new(k).unwrap();
    let gates = boundary_gates(&per_k.coloring, &sq.full_rectangle());
    assert_eq!(gates.len(), 2, "exactly two boundary gates");
    assert_eq!(gates[0], Face::new(gp(33, 0), gp(33, 1)).unwrap());
    assert_eq!(gates[1], Face::new(gp(0, 33), gp(1, 33)).unwrap());
    assert_eq!(chain.first_gate(), gates[0]);
    assert_eq!(chain.last_gate(), gates[1]);

    match report.variant {
        CertificateVariant::ContinuityGap { gap, .. } => {
            assert!(gap >= 1.0, "arc-length gap {gap}");
        }
        other => panic!("expected a continuity gap, got {other:?}"),
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "budget 5 s, took {elapsed:?}");
    println!("PASS criterion 7: two boundary gates, one chain, arc gap >= 1.0 at k=33 ({elapsed:?})");
}

/// Criterion 8: upper-limit approximations behave exactly on the reference
/// grid, and traced cycle vertex sets are ε-connected at ε = 2/k.
#[test]
fn criterion_8_upper_limit_and_connectivity() {
    let start = Instant::now();

    // constant sequence: exact equality with the ε-dilation
    let point = (0.5, 0.5);
    let constant = PointSet::new(Metric::Euclidean, vec![point]).unwrap();
    let ls = upper_limit_approx(&vec![constant; 6], 0.25, 8, 0.5).unwrap();
    let mut dilation = Vec::new();
    for v in 0..=8u32 {
        for u in 0..=8u32 {
            let q = (u as f64 / 8.0, v as f64 / 8.0);
            if within(Metric::Euclidean, point, q, 0.25) {
                dilation.push(q);
            }
        }
    }
    assert_eq!(ls.points, dilation, "constant sequence equals the dilation exactly");

    // alternating sequence keeps both neighborhoods
    let p = (0.2, 0.2);
    let q = (0.8, 0.8);
    let seq: Vec<PointSet> = (0..7)
        .map(|t| PointSet::new(Metric::Euclidean, vec![if t % 2 == 0 { p } else { q }]).unwrap())
        .collect();
    let ls = upper_limit_approx(&seq, 0.1, 10, 0.5).unwrap();
    assert!(ls.points.contains(&(0.2, 0.2)));
    assert!(ls.points.contains(&(0.8, 0.8)));

    // traced cycles are ε-connected at ε = 2/k
    let cand = CircleMapCandidate::lift_average();
    for k in [16u32, 32, 64] {
        let c = sample_coloring(k, |x, y| cand.eval(x, y)).unwrap();
        let t = TorusSurface::for_coloring(&c).unwrap();
        for cycle in all_torus_cycles(&t, &c).unwrap() {
            let kf = k as f64;
            let lattice: BTreeSet<(i32, i32)> = cycle
                .chain
                .simplexes
                .iter()
                .flat_map(|s| s.vertices())
                .map(|v| (v.i.rem_euclid(k as i32), v.j.rem_euclid(k as i32)))
                .collect();
            let set = PointSet::new(
                Metric::Torus,
                lattice.iter().map(|&(i, j)| (i as f64 / kf, j as f64 / kf)).collect(),
            )
            .unwrap();
            assert_eq!(connectivity_check(&set, 2.0 / kf).unwrap(), 1, "k={k}");
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "budget 10 s, took {elapsed:?}");
    println!("PASS criterion 8: exact dilation, alternating tails, cycles ε-connected at k in {{16, 32, 64}} ({elapsed:?})");
}

/// Supporting sweep: the witness postcondition holds on 10⁴ random
/// colorings at k = 12.
#[test]
fn supporting_witness_randomized_k12() {
    let k = 12u32;
    let (a, b) = (gp(0, 0), gp(k as i32, k as i32));
    let r = Rectangle::from_corners(a, b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd00c_0a7e);
    let mut checked = 0;
    for _ in 0..10_000 {
        let c = random_coloring(&mut rng, k);
        if c.value(a) == c.value(b) {
            continue;
        }
        let chain = lemma_witness(&c, &r, a, b).expect("witness exists");
        assert!(witness_meets_arcs(&chain, &r, a, b).unwrap());
        checked += 1;
    }
    assert!(checked > 4000, "roughly half the samples are admissible");
}

/// The ≈ partition attached to stage-2 reports is color-homogeneous and its
/// classes of differently-colored corners differ (supporting check).
#[test]
fn supporting_partition_sanity() {
    let cand = CircleMapCandidate::lift_average();
    let c = sample_coloring(8, |x, y| cand.eval(x, y)).unwrap();
    let sq = CombinatorialSquare::new(8).unwrap();
    let part = components(&c, &sq.full_rectangle(), Relation::Approx, None).unwrap();
    for class in part.classes() {
        let v = c.value(class[0]);
        assert!(class.iter().all(|p| c.value(*p) == v));
    }
    let mut index: HashMap<GridPoint, usize> = HashMap::new();
    for (t, class) in part.classes().iter().enumerate() {
        for p in class {
            index.insert(*p, t);
        }
    }
    assert_eq!(index.len(), sq.vertex_count());
}
