//! Canonical example spaces, built deterministically from parameters.
//!
//! Every recipe is a pure function of its parameters, so any fixture in
//! the corpus can be regenerated bit-for-bit from its name and parameter
//! string.  Surfaces (cylinders, tori, caps, tubes) are modeled as square
//! meshes with their 2-cells declared; circles are meshed into at least
//! six arcs by default so that ball-containment questions at the scales
//! of interest are resolved by the graph metric.
//!
//! Mesh artifacts.  A meshed surface's graph has one essential loop per
//! cell that the modeled surface fills.  Those loops contribute spectrum
//! values at the mesh scale which say nothing about the geometry.  The
//! honest filter recomputes the spectrum on the same space remeshed twice
//! as finely: a value that tracks the mesh halves, a value that tracks
//! the geometry stays put.  Refining squares the enumeration cost, so the
//! refined run uses a smaller cap, and [`flag_artifacts_below`] transfers
//! flags only for values that cap still decides — values above it keep an
//! unset flag, recorded as unchecked rather than silently cleared.

use crate::complex::resolve_faces;
use crate::family::{FamilyLevel, TruncationFamily};
use crate::graph::{EdgePath, MetricGraph, VertexId};
use crate::member::Budget;
use crate::rat::{rat, Rat};
use crate::graph::EnumerationOverflow;
use crate::spectrum::{covering_spectrum, DecreasingChain, SpectrumReport, ValueStatus};
use num::Zero;

/// Ring/position vertex ids pack as `ring * STRIDE + position`, so every
/// meshed recipe requires its circle mesh to stay below the stride.
pub const STRIDE: i64 = 100;

// ---------------------------------------------------------------------------
// Length rules
// ---------------------------------------------------------------------------

/// Circle-length schedules used by the nested-wedge and line recipes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthRule {
    /// 2/j: lengths shrinking to zero.
    Shrinking,
    /// 2 + 2/j: lengths decreasing to the limit 2 from above.
    ApproachingTwoFromAbove,
    /// 2 - 2/j: lengths increasing to the limit 2 from below (j = 1 gives
    /// a degenerate zero-length circle and is skipped by recipes).
    ApproachingTwoFromBelow,
}

impl LengthRule {
    /// The circle length at index `j >= 1`; None when degenerate.
    pub fn length(self, j: i64) -> Option<Rat> {
        assert!(j >= 1, "length rules index circles from 1");
        let l = match self {
            LengthRule::Shrinking => rat(2, j.into()),
            LengthRule::ApproachingTwoFromAbove => rat(2, 1) + rat(2, j.into()),
            LengthRule::ApproachingTwoFromBelow => rat(2, 1) - rat(2, j.into()),
        };
        if l > Rat::zero() {
            Some(l)
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Basic recipes
// ---------------------------------------------------------------------------

/// A single meshed circle: `segments` arcs of total length `total`,
/// vertex ids 0..segments, basepoint 0.
pub fn cycle_graph(segments: i64, total: Rat) -> MetricGraph {
    assert!(segments >= 3, "circle meshes need at least three arcs");
    assert!(total > Rat::zero(), "circle length must be positive");
    let arc = total / Rat::from_integer(segments.into());
    let verts: Vec<VertexId> = (0..segments).collect();
    let edges: Vec<(VertexId, VertexId, Rat)> =
        (0..segments).map(|i| (i, (i + 1) % segments, arc)).collect();
    MetricGraph::new(verts, edges, Some(0)).expect("cycle recipe is well formed")
}

/// A segment of the integer line: unit edges from `lo` to `hi`, ids the
/// integers themselves, basepoint `base`.
pub fn path_line(lo: i64, hi: i64, base: i64) -> MetricGraph {
    assert!(lo < hi && lo <= base && base <= hi);
    let verts: Vec<VertexId> = (lo..=hi).collect();
    let edges: Vec<(VertexId, VertexId, Rat)> = (lo..hi).map(|i| (i, i + 1, rat(1, 1))).collect();
    MetricGraph::new(verts, edges, Some(base)).expect("line recipe is well formed")
}

/// One point, no edges: the degenerate wedge.
pub fn point() -> MetricGraph {
    MetricGraph::new(vec![0], vec![], Some(0)).expect("a point is a graph")
}

/// A wedge of meshed circles sharing hub 0.  Circle `c` is split into
/// `circles[c].0` arcs of total length `circles[c].1`; its interior
/// vertices are `(c + 1) * STRIDE + i` for `i = 1..segments`.  An empty
/// list gives a single point.
pub fn wedge_of_circles(circles: &[(i64, Rat)]) -> MetricGraph {
    if circles.is_empty() {
        return point();
    }
    let mut verts: Vec<VertexId> = vec![0];
    let mut edges: Vec<(VertexId, VertexId, Rat)> = Vec::new();
    for (c, &(segments, total)) in circles.iter().enumerate() {
        assert!((3..STRIDE).contains(&segments), "circle mesh out of range");
        assert!(total > Rat::zero(), "circle length must be positive");
        let arc = total / Rat::from_integer(segments.into());
        let base = (c as i64 + 1) * STRIDE;
        let at = |i: i64| -> VertexId {
            if i % segments == 0 {
                0
            } else {
                base + (i % segments)
            }
        };
        for i in 1..segments {
            verts.push(base + i);
        }
        for i in 0..segments {
            edges.push((at(i), at(i + 1), arc));
        }
    }
    MetricGraph::new(verts, edges, Some(0)).expect("wedge recipe is well formed")
}

/// The first `n` circles of a nested wedge, lengths taken from `rule`
/// (degenerate lengths are skipped), each meshed into six arcs.  `n = 0`
/// gives a point.
pub fn nested_wedge_truncation(n: i64, rule: LengthRule) -> MetricGraph {
    let circles: Vec<(i64, Rat)> =
        (1..=n).filter_map(|j| rule.length(j).map(|l| (6, l))).collect();
    wedge_of_circles(&circles)
}

/// An `a` by `b` square-meshed torus with edge length `seg`.  Vertex
/// (i, j) has id `i * STRIDE + j`; both directions wrap.  Returns the
/// graph and all `a * b` square faces.
pub fn grid_torus(a: i64, b: i64, seg: Rat) -> (MetricGraph, Vec<Vec<VertexId>>) {
    assert!((3..STRIDE).contains(&a) && (3..STRIDE).contains(&b), "torus mesh out of range");
    assert!(seg > Rat::zero());
    let id = |i: i64, j: i64| -> VertexId { i.rem_euclid(a) * STRIDE + j.rem_euclid(b) };
    let mut verts = Vec::new();
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            verts.push(id(i, j));
            edges.push((id(i, j), id(i, j + 1), seg));
            edges.push((id(i, j), id(i + 1, j), seg));
        }
    }
    let g = MetricGraph::new(verts, edges, Some(0)).expect("torus recipe is well formed");
    let mut faces = Vec::new();
    for i in 0..a {
        for j in 0..b {
            faces.push(vec![id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j)]);
        }
    }
    (g, faces)
}

/// A meshed cylinder: circle of `m` arcs crossed with rings `lo..=hi`,
/// every edge of length `seg`.  Vertex (ring j, position k) has id
/// `j * STRIDE + k`; the basepoint sits at `(base_ring, 0)`.  Returns the
/// graph and its square faces.
pub fn cylinder(
    m: i64,
    lo: i64,
    hi: i64,
    seg: Rat,
    base_ring: i64,
) -> (MetricGraph, Vec<Vec<VertexId>>) {
    assert!((3..STRIDE).contains(&m), "circle mesh out of range");
    assert!(lo < hi && (lo..=hi).contains(&base_ring));
    assert!(seg > Rat::zero());
    let id = |j: i64, k: i64| -> VertexId { j * STRIDE + k.rem_euclid(m) };
    let mut verts = Vec::new();
    let mut edges = Vec::new();
    for j in lo..=hi {
        for k in 0..m {
            verts.push(id(j, k));
            edges.push((id(j, k), id(j, k + 1), seg));
            if j < hi {
                edges.push((id(j, k), id(j + 1, k), seg));
            }
        }
    }
    let g = MetricGraph::new(verts, edges, Some(base_ring * STRIDE))
        .expect("cylinder recipe is well formed");
    let mut faces = Vec::new();
    for j in lo..hi {
        for k in 0..m {
            faces.push(vec![id(j, k), id(j, k + 1), id(j + 1, k + 1), id(j + 1, k)]);
        }
    }
    (g, faces)
}

/// A cylinder with one end coned off: rings `0..=n` as in [`cylinder`],
/// plus apex `-1` joined to every ring-0 vertex by a spoke of length
/// `seg`.  The cap triangles are declared as faces along with the tube
/// squares, so the modeled space is a disk: every loop contracts.
pub fn capped_cylinder(m: i64, n: i64, seg: Rat) -> (MetricGraph, Vec<Vec<VertexId>>) {
    let (tube, mut faces) = cylinder(m, 0, n, seg, n);
    let apex: VertexId = -1;
    let mut verts: Vec<VertexId> = vec![apex];
    let mut edges: Vec<(VertexId, VertexId, Rat)> = Vec::new();
    for v in 0..tube.n_vertices() {
        verts.push(tube.id(v));
    }
    for e in tube.edges() {
        edges.push((tube.id(e.u), tube.id(e.v), e.len));
    }
    for k in 0..m {
        edges.push((apex, k, seg));
    }
    for k in 0..m {
        faces.push(vec![apex, k, (k + 1) % m]);
    }
    let g = MetricGraph::new(verts, edges, Some(n * STRIDE))
        .expect("capped cylinder recipe is well formed");
    (g, faces)
}

/// The integer line `-(depth+1)..=(depth+1)` with a circle of length
/// `2 + 2/|j|` attached at every vertex `j` with `1 <= |j| <= depth`,
/// each meshed into `mesh` arcs.  Interior vertices of the circle at `j`
/// are `10_000 + (j + 50) * STRIDE + i`.  Basepoint 0.
pub fn line_with_circles(depth: i64, mesh: i64) -> MetricGraph {
    assert!((1..=49).contains(&depth), "depth out of range");
    assert!((3..STRIDE).contains(&mesh), "circle mesh out of range");
    let line = path_line(-(depth + 1), depth + 1, 0);
    let mut verts: Vec<VertexId> = (-(depth + 1)..=(depth + 1)).collect();
    let mut edges: Vec<(VertexId, VertexId, Rat)> = Vec::new();
    for e in line.edges() {
        edges.push((line.id(e.u), line.id(e.v), e.len));
    }
    for j in -depth..=depth {
        if j == 0 {
            continue;
        }
        let total = LengthRule::ApproachingTwoFromAbove
            .length(j.abs())
            .expect("positive index has positive length");
        let arc = total / Rat::from_integer(mesh.into());
        let base = 10_000 + (j + 50) * STRIDE;
        let at = |i: i64| -> VertexId {
            if i % mesh == 0 {
                j
            } else {
                base + (i % mesh)
            }
        };
        for i in 1..mesh {
            verts.push(base + i);
        }
        for i in 0..mesh {
            edges.push((at(i), at(i + 1), arc));
        }
    }
    MetricGraph::new(verts, edges, Some(0)).expect("line-with-circles recipe is well formed")
}

/// Two meshed half-tubes sharing a single point: arm `0` and arm `1` are
/// cylinders over rings `0..=arm`, glued by identifying both copies of
/// (ring 0, position 0) to the single vertex 0.  Arm-`a` vertex (j, k)
/// has id `±(j * STRIDE + k + STRIDE)` (positive for arm 0, negative for
/// arm 1).  Basepoint is the shared vertex.  Returns the graph and the
/// square faces of both arms.
pub fn two_ended_tube(m: i64, arm: i64, seg: Rat) -> (MetricGraph, Vec<Vec<VertexId>>) {
    assert!((3..STRIDE).contains(&m), "circle mesh out of range");
    assert!(arm >= 1);
    assert!(seg > Rat::zero());
    let id = |a: i64, j: i64, k: i64| -> VertexId {
        let k = k.rem_euclid(m);
        if j == 0 && k == 0 {
            0
        } else {
            let raw = j * STRIDE + k + STRIDE;
            if a == 0 {
                raw
            } else {
                -raw
            }
        }
    };
    let mut verts: Vec<VertexId> = vec![0];
    let mut edges: Vec<(VertexId, VertexId, Rat)> = Vec::new();
    let mut faces: Vec<Vec<VertexId>> = Vec::new();
    for a in 0..2 {
        for j in 0..=arm {
            for k in 0..m {
                if !(j == 0 && k == 0) {
                    verts.push(id(a, j, k));
                }
                edges.push((id(a, j, k), id(a, j, k + 1), seg));
                if j < arm {
                    edges.push((id(a, j, k), id(a, j + 1, k), seg));
                }
            }
        }
        for j in 0..arm {
            for k in 0..m {
                faces.push(vec![id(a, j, k), id(a, j, k + 1), id(a, j + 1, k + 1), id(a, j + 1, k)]);
            }
        }
    }
    let g = MetricGraph::new(verts, edges, Some(0)).expect("two-ended recipe is well formed");
    (g, faces)
}

/// The Cartesian product with the path-sum metric: vertices are pairs
/// (id `a_id * 100_000 + b_id`), and each edge of one factor is copied
/// across every vertex of the other.  Both factors need basepoints and
/// ids in `0..100_000`.
pub fn product(a: &MetricGraph, b: &MetricGraph) -> MetricGraph {
    let pid = |ai: usize, bi: usize| -> VertexId {
        let x = a.id(ai);
        let y = b.id(bi);
        assert!((0..100_000).contains(&x) && (0..100_000).contains(&y), "factor ids out of range");
        x * 100_000 + y
    };
    let mut verts = Vec::new();
    for ai in 0..a.n_vertices() {
        for bi in 0..b.n_vertices() {
            verts.push(pid(ai, bi));
        }
    }
    let mut edges = Vec::new();
    for e in a.edges() {
        for bi in 0..b.n_vertices() {
            edges.push((pid(e.u, bi), pid(e.v, bi), e.len));
        }
    }
    for ai in 0..a.n_vertices() {
        for e in b.edges() {
            edges.push((pid(ai, e.u), pid(ai, e.v), e.len));
        }
    }
    let base = pid(a.basepoint(), b.basepoint());
    MetricGraph::new(verts, edges, Some(base)).expect("product of connected graphs is connected")
}

// ---------------------------------------------------------------------------
// Loop helpers tied to the id conventions above
// ---------------------------------------------------------------------------

/// The closed walk through the given vertex ids (wrapping back to the
/// first), resolved against the unique edges joining consecutive pairs.
pub fn loop_through(g: &MetricGraph, ids: &[VertexId]) -> EdgePath {
    let steps = resolve_faces(g, &[ids.to_vec()])
        .expect("loop vertices must be joined by unique edges")
        .remove(0);
    EdgePath { start: g.idx(ids[0]).expect("known vertex"), steps }
}

/// The ring circle at height `j` of a [`cylinder`]-convention graph.
pub fn cylinder_ring(g: &MetricGraph, m: i64, j: i64) -> EdgePath {
    let ids: Vec<VertexId> = (0..m).map(|k| j * STRIDE + k).collect();
    loop_through(g, &ids)
}

/// The ring circle at height `j` of arm `a` of a [`two_ended_tube`].
pub fn two_ended_ring(g: &MetricGraph, m: i64, a: i64, j: i64) -> EdgePath {
    let ids: Vec<VertexId> = (0..m)
        .map(|k| {
            if j == 0 && k == 0 {
                0
            } else {
                let raw = j * STRIDE + k + STRIDE;
                if a == 0 {
                    raw
                } else {
                    -raw
                }
            }
        })
        .collect();
    loop_through(g, &ids)
}

/// The circle attached at line vertex `j` of a [`line_with_circles`]
/// graph with the given mesh.
pub fn line_circle(g: &MetricGraph, mesh: i64, j: i64) -> EdgePath {
    assert!(j != 0);
    let base = 10_000 + (j + 50) * STRIDE;
    let ids: Vec<VertexId> =
        (0..mesh).map(|i| if i == 0 { j } else { base + i }).collect();
    loop_through(g, &ids)
}

// ---------------------------------------------------------------------------
// Families and sequences
// ---------------------------------------------------------------------------

/// Growing symmetric truncations of the doubly infinite tube: level `d`
/// covers rings `-half_lengths[d]..=half_lengths[d]` with scope equal to
/// the half-length.  Basepoint (0, 0), all faces declared.
pub fn cylinder_family(m: i64, half_lengths: &[i64], seg: Rat) -> TruncationFamily {
    assert!(!half_lengths.is_empty());
    let levels = half_lengths
        .iter()
        .map(|&n| {
            assert!(n >= 1);
            let (graph, faces) = cylinder(m, -n, n, seg, 0);
            FamilyLevel { graph, scope: Rat::from_integer(n.into()) * seg, faces }
        })
        .collect();
    TruncationFamily::new("tube", levels)
}

/// Growing truncations of the two-ended tube: level `d` has both arms of
/// length `arms[d]` and scope `arms[d] * seg`.
pub fn two_ended_family(m: i64, arms: &[i64], seg: Rat) -> TruncationFamily {
    assert!(!arms.is_empty());
    let levels = arms
        .iter()
        .map(|&n| {
            let (graph, faces) = two_ended_tube(m, n, seg);
            FamilyLevel { graph, scope: Rat::from_integer(n.into()) * seg, faces }
        })
        .collect();
    TruncationFamily::new("two-ended tube", levels)
}

/// Growing truncations of the line with circles of length `2 + 2/|j|`:
/// level `d` (from `depths`, strictly increasing) holds the circles with
/// `|j| <= d` and line `±(d + 1)`, with scope `d + 1/2`.  The declared
/// decreasing chain records the circle halves accumulating at 1, which
/// lower semiclosure adds to the family spectrum.
pub fn line_with_circles_family(depths: &[i64], mesh: i64) -> TruncationFamily {
    assert!(!depths.is_empty());
    let levels = depths
        .iter()
        .map(|&d| FamilyLevel {
            graph: line_with_circles(d, mesh),
            scope: Rat::from_integer(d.into()) + rat(1, 2),
            faces: Vec::new(),
        })
        .collect();
    let deepest = *depths.last().expect("nonempty");
    let chain = DecreasingChain {
        label: "circle halves".into(),
        values: (1..=deepest).map(|j| rat(1, 1) + rat(1, (2 * j).into())).collect(),
        infimum: rat(1, 1),
    };
    let mut fam = TruncationFamily::new("line with circles", levels);
    fam.chains.push(chain);
    fam
}

/// A tube pinching off at infinity: rings `0..=n` at unit spacing whose
/// girths are given by the strictly decreasing profile (one entry per
/// ring), each meshed into `mesh` arcs.  Level `d` of the family uses the
/// first `levels[d] + 1` rings with scope `levels[d]`.  The girth-half
/// chain with the declared infimum is attached for semiclosure.
pub fn pinched_tube_family(
    girths: &[Rat],
    infimum_girth: Rat,
    levels: &[i64],
    mesh: i64,
) -> TruncationFamily {
    assert!(!levels.is_empty());
    assert!(girths.windows(2).all(|w| w[1] < w[0]), "girth profile must strictly decrease");
    assert!(girths.iter().all(|&g| g > infimum_girth), "girths must stay above the infimum");
    let build = |rings: i64| -> (MetricGraph, Vec<Vec<VertexId>>) {
        assert!((rings as usize) < girths.len(), "profile too short for requested level");
        let id = |j: i64, k: i64| -> VertexId { j * STRIDE + k.rem_euclid(mesh) };
        let mut verts = Vec::new();
        let mut edges = Vec::new();
        for j in 0..=rings {
            let arc = girths[j as usize] / Rat::from_integer(mesh.into());
            for k in 0..mesh {
                verts.push(id(j, k));
                edges.push((id(j, k), id(j, k + 1), arc));
                if j < rings {
                    edges.push((id(j, k), id(j + 1, k), rat(1, 1)));
                }
            }
        }
        let g = MetricGraph::new(verts, edges, Some(0)).expect("pinched tube is well formed");
        let mut faces = Vec::new();
        for j in 0..rings {
            for k in 0..mesh {
                faces.push(vec![id(j, k), id(j, k + 1), id(j + 1, k + 1), id(j + 1, k)]);
            }
        }
        (g, faces)
    };
    let levels_built = levels
        .iter()
        .map(|&n| {
            assert!(n >= 1);
            let (graph, faces) = build(n);
            FamilyLevel { graph, scope: Rat::from_integer(n.into()), faces }
        })
        .collect();
    let deepest = *levels.last().expect("nonempty") as usize;
    let chain = DecreasingChain {
        label: "girth halves".into(),
        values: girths[..=deepest].iter().map(|&g| g / rat(2, 1)).collect(),
        infimum: infimum_girth / rat(2, 1),
    };
    let mut fam = TruncationFamily::new("pinched tube", levels_built);
    fam.chains.push(chain);
    fam
}

/// The capped tube seen from basepoints drifting toward the open end:
/// one graph per entry of `positions`, identical in shape (rings
/// `0..=n`, cap at ring 0), with the basepoint at (position, 0).  This is
/// a sequence of pointed spaces, not a truncation family: the drifting
/// basepoint breaks the shared-basepoint contract on purpose.
pub fn capped_cylinder_drift(
    m: i64,
    n: i64,
    seg: Rat,
    positions: &[i64],
) -> Vec<(MetricGraph, Vec<Vec<VertexId>>)> {
    positions
        .iter()
        .map(|&p| {
            assert!((0..=n).contains(&p));
            let (tube, faces) = capped_cylinder(m, n, seg);
            let mut verts = Vec::new();
            let mut edges = Vec::new();
            for v in 0..tube.n_vertices() {
                verts.push(tube.id(v));
            }
            for e in tube.edges() {
                edges.push((tube.id(e.u), tube.id(e.v), e.len));
            }
            let g = MetricGraph::new(verts, edges, Some(p * STRIDE))
                .expect("rebasing keeps the graph well formed");
            (g, faces)
        })
        .collect()
}

/// A tube with a short handle circle (length `handle_len`, six arcs)
/// attached at ring `h`, position 0; handle interior ids `50_000 + i`.
/// Basepoint (0, 0).  Returns the graph and the tube's square faces (the
/// handle is a genuine circle, not meshed surface, so it adds no faces).
pub fn handle_cylinder(
    m: i64,
    n: i64,
    seg: Rat,
    h: i64,
    handle_len: Rat,
) -> (MetricGraph, Vec<Vec<VertexId>>) {
    assert!((0..=n).contains(&h));
    assert!(handle_len > Rat::zero());
    let (tube, faces) = cylinder(m, 0, n, seg, 0);
    let mut verts = Vec::new();
    let mut edges = Vec::new();
    for v in 0..tube.n_vertices() {
        verts.push(tube.id(v));
    }
    for e in tube.edges() {
        edges.push((tube.id(e.u), tube.id(e.v), e.len));
    }
    let mesh: i64 = 6;
    let arc = handle_len / Rat::from_integer(mesh.into());
    let attach = h * STRIDE;
    let at = |i: i64| -> VertexId {
        if i % mesh == 0 {
            attach
        } else {
            50_000 + (i % mesh)
        }
    };
    for i in 1..mesh {
        verts.push(50_000 + i);
    }
    for i in 0..mesh {
        edges.push((at(i), at(i + 1), arc));
    }
    let g = MetricGraph::new(verts, edges, Some(0)).expect("handle recipe is well formed");
    (g, faces)
}

/// The handle sliding out: one [`handle_cylinder`] per entry of
/// `positions` (each a ring index, typically increasing), plus the plain
/// tube they converge to.  All terms share the basepoint end.
pub fn sliding_handle_sequence(
    m: i64,
    n: i64,
    seg: Rat,
    handle_len: Rat,
    positions: &[i64],
) -> (Vec<(MetricGraph, Vec<Vec<VertexId>>)>, (MetricGraph, Vec<Vec<VertexId>>)) {
    let terms = positions.iter().map(|&h| handle_cylinder(m, n, seg, h, handle_len)).collect();
    (terms, cylinder(m, 0, n, seg, 0))
}

/// Circles snapping open: one unit-arc circle per entry of `meshes`
/// (circumference = arc count, growing), and the line segment they
/// converge to around the basepoint.
pub fn snapping_circle_sequence(meshes: &[i64], line_half: i64) -> (Vec<MetricGraph>, MetricGraph) {
    let terms = meshes.iter().map(|&n| cycle_graph(n, Rat::from_integer(n.into()))).collect();
    (terms, path_line(-line_half, line_half, 0))
}

// ---------------------------------------------------------------------------
// Artifact filtering across mesh refinement
// ---------------------------------------------------------------------------

/// Transfers mesh-artifact flags onto `report` from a refined-mesh run
/// whose cap may be smaller: a present value the refined run decides
/// absent is an artifact of the discretization, a present refined value
/// is confirmed geometric, and values the refined cap does not reach
/// keep an unset flag (unchecked, not cleared).
pub fn flag_artifacts_below(report: &mut SpectrumReport, refined: &SpectrumReport) {
    assert!(refined.cap <= report.cap, "refined run may not exceed the base cap");
    for v in &mut report.values {
        if v.status != ValueStatus::Present || v.semiclosure {
            continue;
        }
        if v.value * rat(2, 1) > refined.cap {
            continue;
        }
        v.mesh_artifact = match refined.value_entry(v.value).map(|e| e.status) {
            Some(ValueStatus::Present) => Some(false),
            Some(ValueStatus::Undecided) => None,
            Some(ValueStatus::Absent) | None => Some(true),
        };
    }
}

// ---------------------------------------------------------------------------
// The standard catalog
// ---------------------------------------------------------------------------

/// A cataloged example: the graph, its declared faces, a twice-as-fine
/// remesh for artifact checking, the caps the annotations were computed
/// at, and the values the recipes are expected to produce — the filtered
/// spectrum and the flagged mesh artifacts.
pub struct ZooSpace {
    pub name: &'static str,
    pub params: &'static str,
    pub graph: MetricGraph,
    pub faces: Vec<Vec<VertexId>>,
    pub refined: MetricGraph,
    /// Enumeration cap for the base run; decides values up to `cap / 2`.
    pub cap: Rat,
    /// Enumeration cap for the refined run; artifact flags are only
    /// meaningful up to `artifact_cap / 2`.
    pub artifact_cap: Rat,
    /// Values expected to survive artifact filtering.
    pub expected_spectrum: Vec<Rat>,
    /// Values expected to be flagged as mesh artifacts.
    pub expected_artifacts: Vec<Rat>,
}

impl ZooSpace {
    /// Base-cap spectrum with artifact flags transferred from the
    /// refined run (see [`flag_artifacts_below`]).
    pub fn filtered_spectrum(
        &self,
        class_bound: usize,
        budget: Budget,
    ) -> Result<SpectrumReport, EnumerationOverflow> {
        let mut report = covering_spectrum(&self.graph, self.cap, class_bound, budget)?;
        let refined = covering_spectrum(&self.refined, self.artifact_cap, class_bound, budget)?;
        flag_artifacts_below(&mut report, &refined);
        Ok(report)
    }
}

/// The six compact catalog spaces used throughout the test corpus, every
/// one small enough for exhaustive cross-checks.
pub fn standard_zoo() -> Vec<ZooSpace> {
    let mut out = Vec::new();

    out.push(ZooSpace {
        name: "wedge-6-10",
        params: "circles 6 and 10, meshed into 6 and 10 unit arcs",
        graph: wedge_of_circles(&[(6, rat(6, 1)), (10, rat(10, 1))]),
        faces: Vec::new(),
        refined: wedge_of_circles(&[(12, rat(6, 1)), (20, rat(10, 1))]),
        cap: rat(21, 2),
        artifact_cap: rat(21, 2),
        expected_spectrum: vec![rat(3, 1), rat(5, 1)],
        expected_artifacts: vec![],
    });

    out.push(ZooSpace {
        name: "hexagon",
        params: "one circle of length 6 in 6 unit arcs",
        graph: cycle_graph(6, rat(6, 1)),
        faces: Vec::new(),
        refined: cycle_graph(12, rat(6, 1)),
        cap: rat(13, 2),
        artifact_cap: rat(13, 2),
        expected_spectrum: vec![rat(3, 1)],
        expected_artifacts: vec![],
    });

    {
        let (graph, faces) = grid_torus(6, 8, rat(1, 1));
        let (refined, _) = grid_torus(12, 16, rat(1, 2));
        out.push(ZooSpace {
            name: "torus-6-8",
            params: "6 by 8 unit square mesh, both directions wrapped",
            graph,
            faces,
            refined,
            cap: rat(17, 2),
            artifact_cap: rat(9, 2),
            expected_spectrum: vec![rat(3, 1), rat(4, 1)],
            expected_artifacts: vec![rat(2, 1)],
        });
    }

    {
        let (graph, faces) = cylinder(6, 0, 5, rat(1, 1), 0);
        let (refined, _) = cylinder(12, 0, 10, rat(1, 2), 0);
        out.push(ZooSpace {
            name: "cylinder-6-5",
            params: "girth-6 tube of 5 unit rungs, basepoint on the rim",
            graph,
            faces,
            refined,
            cap: rat(13, 2),
            artifact_cap: rat(17, 4),
            expected_spectrum: vec![rat(3, 1)],
            expected_artifacts: vec![rat(2, 1)],
        });
    }

    out.push(ZooSpace {
        name: "line-circles-3",
        params: "line ±4 with circles of length 2 + 2/|j| at |j| <= 3, 6 arcs each",
        graph: line_with_circles(3, 6),
        faces: Vec::new(),
        refined: line_with_circles(3, 12),
        cap: rat(9, 2),
        artifact_cap: rat(9, 2),
        expected_spectrum: vec![rat(4, 3), rat(3, 2), rat(2, 1)],
        expected_artifacts: vec![],
    });

    {
        let (graph, faces) = two_ended_tube(6, 3, rat(1, 1));
        let (refined, _) = two_ended_tube(12, 6, rat(1, 2));
        out.push(ZooSpace {
            name: "two-ended-6-3",
            params: "two girth-6 tubes of 3 unit rungs sharing one point",
            graph,
            faces,
            refined,
            cap: rat(13, 2),
            artifact_cap: rat(17, 4),
            expected_spectrum: vec![rat(3, 1)],
            expected_artifacts: vec![rat(2, 1)],
        });
    }

    out
}

/// Looks a catalog space up by name.
pub fn by_name(name: &str) -> Option<ZooSpace> {
    standard_zoo().into_iter().find(|z| z.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{cutoff_spectrum, loops_to_infinity, InfinityVerdict};
    use crate::spectrum::r_cutoff_spectrum;

    fn present_values(r: &SpectrumReport) -> Vec<Rat> {
        r.present()
    }

    fn geometric(r: &SpectrumReport) -> Vec<Rat> {
        r.present_geometric()
    }

    fn artifacts(r: &SpectrumReport) -> Vec<Rat> {
        r.values
            .iter()
            .filter(|v| v.status == ValueStatus::Present && v.mesh_artifact == Some(true))
            .map(|v| v.value)
            .collect()
    }

    #[test]
    fn wedge_halves_its_circle_lengths() {
        let z = by_name("wedge-6-10").unwrap();
        let rep = covering_spectrum(&z.graph, z.cap, 10_000, Budget::default()).unwrap();
        assert_eq!(present_values(&rep), vec![rat(3, 1), rat(5, 1)]);
        let fine = covering_spectrum(&z.refined, z.cap, 10_000, Budget::default()).unwrap();
        assert_eq!(present_values(&fine), vec![rat(3, 1), rat(5, 1)]);
        assert!(wedge_of_circles(&[]).rank() == 0);
    }

    #[test]
    fn nested_wedge_rules_give_their_class_lengths() {
        // Caps sit below the shortest doubled circle so the four (or
        // three) single-circle classes are exactly what comes back.
        let g = nested_wedge_truncation(4, LengthRule::ApproachingTwoFromAbove);
        let lengths: Vec<Rat> = g.enumerate_classes(rat(4, 1)).iter().map(|c| c.length).collect();
        assert_eq!(lengths, vec![rat(5, 2), rat(8, 3), rat(3, 1), rat(4, 1)]);

        let g = nested_wedge_truncation(4, LengthRule::ApproachingTwoFromBelow);
        let lengths: Vec<Rat> = g.enumerate_classes(rat(3, 2)).iter().map(|c| c.length).collect();
        // Index 1 is degenerate and skipped: three circles remain.
        assert_eq!(lengths, vec![rat(1, 1), rat(4, 3), rat(3, 2)]);

        let g = nested_wedge_truncation(3, LengthRule::Shrinking);
        let lengths: Vec<Rat> = g.enumerate_classes(rat(1, 1)).iter().map(|c| c.length).collect();
        assert_eq!(lengths, vec![rat(2, 3), rat(1, 1)]);

        assert_eq!(nested_wedge_truncation(0, LengthRule::Shrinking).n_vertices(), 1);
    }

    #[test]
    fn catalog_annotations_hold() {
        for z in standard_zoo() {
            let rep = z.filtered_spectrum(50_000, Budget::default()).unwrap();
            assert_eq!(
                geometric(&rep),
                z.expected_spectrum,
                "filtered spectrum of {} off",
                z.name
            );
            assert_eq!(artifacts(&rep), z.expected_artifacts, "artifact set of {} off", z.name);
            assert!(rep.undecided().is_empty(), "{} left undecided values", z.name);
        }
    }

    #[test]
    fn catalog_faces_resolve_and_sizes_fit() {
        for z in standard_zoo() {
            resolve_faces(&z.graph, &z.faces).expect("declared faces must resolve");
            assert!(z.graph.n_vertices() <= 60, "{} too large for exhaustive checks", z.name);
        }
    }

    #[test]
    fn tube_family_filters_to_empty_and_its_ring_escapes() {
        let fam = cylinder_family(6, &[3, 5], rat(1, 1));
        fam.validate().expect("tube family obeys the truncation contract");

        let rep = cutoff_spectrum(&fam, rat(13, 2), 50_000, Budget::default()).unwrap();
        let refined_fam = cylinder_family(12, &[6, 10], rat(1, 2));
        let refined = cutoff_spectrum(&refined_fam, rat(17, 4), 50_000, Budget::default()).unwrap();
        let mut union = rep.union;
        flag_artifacts_below(&mut union, &refined.union);
        assert_eq!(present_values(&union), vec![rat(2, 1)], "only the mesh value shows up");
        assert_eq!(geometric(&union), Vec::<Rat>::new(), "filtered tube spectrum is empty");

        let g = &fam.last().graph;
        let ring = cylinder_ring(g, 6, 0);
        let w = g.loop_to_word(&ring);
        match loops_to_infinity(&fam, &w).unwrap() {
            InfinityVerdict::EscapesAllTested { .. } => {}
            other => panic!("ring should escape, got {other:?}"),
        }
    }

    #[test]
    fn two_ended_tube_blocks_the_combined_ring() {
        let fam = two_ended_family(6, &[2, 4], rat(1, 1));
        fam.validate().expect("two-ended family obeys the truncation contract");
        let g = &fam.last().graph;

        let w0 = g.loop_to_word(&two_ended_ring(g, 6, 0, 0));
        let w1 = g.loop_to_word(&two_ended_ring(g, 6, 1, 0));
        assert!(matches!(
            loops_to_infinity(&fam, &w0).unwrap(),
            InfinityVerdict::EscapesAllTested { .. }
        ));
        assert!(matches!(
            loops_to_infinity(&fam, &w1).unwrap(),
            InfinityVerdict::EscapesAllTested { .. }
        ));
        let both = w0.concat(&w1);
        assert!(matches!(
            loops_to_infinity(&fam, &both).unwrap(),
            InfinityVerdict::Blocked { .. }
        ));
    }

    #[test]
    fn line_circle_family_semicloses_at_one() {
        // Three levels, so the ladder rows below the horizon reach out
        // to radius 5/2 and see the circles at distance up to 2.
        let fam = line_with_circles_family(&[1, 2, 3], 6);
        fam.validate().expect("line family obeys the truncation contract");
        let rep = cutoff_spectrum(&fam, rat(9, 2), 50_000, Budget::default()).unwrap();
        let union = rep.union;
        assert_eq!(present_values(&union), vec![rat(1, 1), rat(3, 2), rat(2, 1)]);
        let one = union.value_entry(rat(1, 1)).unwrap();
        assert!(one.semiclosure, "the accumulation value enters only by semiclosure");
        assert!(!union.value_entry(rat(3, 2)).unwrap().semiclosure);
    }

    #[test]
    fn capped_tube_contracts_above_the_mesh_scale() {
        let (g, _) = capped_cylinder(6, 4, rat(1, 1));
        let mut rep = covering_spectrum(&g, rat(13, 2), 50_000, Budget::default()).unwrap();
        let (fine, _) = capped_cylinder(12, 8, rat(1, 2));
        let fine_rep = covering_spectrum(&fine, rat(17, 4), 50_000, Budget::default()).unwrap();
        flag_artifacts_below(&mut rep, &fine_rep);
        assert_eq!(geometric(&rep), Vec::<Rat>::new(), "a capped tube has no surviving values");

        let drift = capped_cylinder_drift(6, 4, rat(1, 1), &[1, 3]);
        assert_eq!(drift[0].0.id(drift[0].0.basepoint()), STRIDE);
        assert_eq!(drift[1].0.id(drift[1].0.basepoint()), 3 * STRIDE);
    }

    #[test]
    fn handle_witness_radius_grows_as_it_slides() {
        let (terms, (limit, _)) =
            sliding_handle_sequence(6, 6, rat(1, 1), rat(2, 1), &[1, 4]);
        let mut min_radius = Vec::new();
        for (g, _) in &terms {
            let mut found = None;
            for r in 1..=7 {
                let rep = r_cutoff_spectrum(
                    g,
                    g.basepoint(),
                    rat(r, 1),
                    rat(9, 2),
                    50_000,
                    Budget::default(),
                )
                .unwrap();
                if rep.present().contains(&rat(1, 1)) {
                    found = Some(r);
                    break;
                }
            }
            min_radius.push(found.expect("a big enough ball sees the handle"));
        }
        assert!(min_radius[0] < min_radius[1], "the witnessing radius tracks the handle");
        let rep = covering_spectrum(&limit, rat(9, 2), 50_000, Budget::default()).unwrap();
        assert!(!rep.present().contains(&rat(1, 1)), "the limit tube has no handle value");
    }

    #[test]
    fn snapping_circles_outgrow_every_value() {
        let (terms, line) = snapping_circle_sequence(&[6, 12, 24], 5);
        for (g, n) in terms.iter().zip([6i128, 12, 24]) {
            let cap = rat(n, 1) + rat(1, 1);
            let rep = covering_spectrum(g, cap, 50_000, Budget::default()).unwrap();
            assert_eq!(rep.present(), vec![rat(n, 2)]);
        }
        let rep = covering_spectrum(&line, rat(13, 1), 50_000, Budget::default()).unwrap();
        assert!(rep.present().is_empty(), "a segment carries no loops");
    }

    #[test]
    fn pinched_tube_family_declares_its_girth_chain() {
        // A strictly decreasing three-ring profile above girth 3.
        let girths = vec![rat(4, 1), rat(7, 2), rat(13, 4)];
        let fam = pinched_tube_family(&girths, rat(3, 1), &[1, 2], 6);
        fam.validate().expect("pinched tube obeys the truncation contract");
        assert_eq!(fam.chains[0].values, vec![rat(2, 1), rat(7, 4), rat(13, 8)]);
        assert_eq!(fam.chains[0].infimum, rat(3, 2));
    }

    #[test]
    fn product_of_circles_matches_the_torus() {
        let p = product(&cycle_graph(6, rat(6, 1)), &cycle_graph(8, rat(8, 1)));
        let (t, _) = grid_torus(6, 8, rat(1, 1));
        assert_eq!(p.n_vertices(), t.n_vertices());
        assert_eq!(p.n_edges(), t.n_edges());
        assert_eq!(p.rank(), t.rank());
        let rp = covering_spectrum(&p, rat(17, 2), 50_000, Budget::default()).unwrap();
        let rt = covering_spectrum(&t, rat(17, 2), 50_000, Budget::default()).unwrap();
        assert_eq!(rp.present(), rt.present());
    }

    #[test]
    fn catalog_lookup_regenerates_by_name() {
        let z = by_name("torus-6-8").unwrap();
        let (again, _) = grid_torus(6, 8, rat(1, 1));
        assert_eq!(z.graph.n_vertices(), again.n_vertices());
        assert_eq!(z.graph.n_edges(), again.n_edges());
        assert!(by_name("nonesuch").is_none());
    }
}
