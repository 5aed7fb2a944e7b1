//! Hand-built fixture spaces with explicit vertex/edge layouts.

use covspec_core::rat::{rat, Rat};
use covspec_core::{EdgePath, MetricGraph, Step, VertexId};

/// Cycle with `n` vertices 0..n-1, each edge of length total/n, basepoint 0.
pub fn cycle(n: i64, total: Rat) -> MetricGraph {
    let verts: Vec<VertexId> = (0..n).collect();
    let len = total / rat(n as i128, 1);
    let edges: Vec<(VertexId, VertexId, Rat)> =
        (0..n).map(|i| (i, (i + 1) % n, len)).collect();
    MetricGraph::new(verts, edges, Some(0)).unwrap()
}

pub fn unit_cycle(n: i64) -> MetricGraph {
    cycle(n, rat(n as i128, 1))
}

/// Unit-edge path graph on ids lo..=hi, basepoint at `base`.
pub fn path_line(lo: i64, hi: i64, base: i64) -> MetricGraph {
    let verts: Vec<VertexId> = (lo..=hi).collect();
    let edges: Vec<(VertexId, VertexId, Rat)> =
        (lo..hi).map(|i| (i, i + 1, rat(1, 1))).collect();
    MetricGraph::new(verts, edges, Some(base)).unwrap()
}

/// Circles wedged at vertex 0.  Each circle is given as (mesh count,
/// circumference); circle j's interior vertices get consecutive ids after
/// the previous circles'.  Basepoint is the wedge point.
pub fn wedge_circles(circles: &[(i64, Rat)]) -> MetricGraph {
    let mut verts: Vec<VertexId> = vec![0];
    let mut edges = Vec::new();
    let mut next = 1;
    for &(mesh, circ) in circles {
        assert!(mesh >= 2);
        let len = circ / rat(mesh as i128, 1);
        let ring: Vec<VertexId> = std::iter::once(0)
            .chain((0..mesh - 1).map(|k| next + k))
            .collect();
        verts.extend_from_slice(&ring[1..]);
        for k in 0..mesh {
            edges.push((ring[k as usize], ring[((k + 1) % mesh) as usize], len));
        }
        next += mesh - 1;
    }
    MetricGraph::new(verts, edges, Some(0)).unwrap()
}

/// Two unit-edge circles of sizes a and b wedged at 0.
pub fn wedge_pair(a: i64, b: i64) -> MetricGraph {
    wedge_circles(&[(a, rat(a as i128, 1)), (b, rat(b as i128, 1))])
}

/// Directed step along the unique edge from `uid` to `vid`.
pub fn step_between(g: &MetricGraph, uid: VertexId, vid: VertexId) -> Step {
    let u = g.idx(uid).unwrap();
    let v = g.idx(vid).unwrap();
    for (e, edge) in g.edges().iter().enumerate() {
        if edge.u == u && edge.v == v {
            return Step { edge: e, forward: true };
        }
        if edge.v == u && edge.u == v {
            return Step { edge: e, forward: false };
        }
    }
    panic!("no edge {uid} -> {vid}");
}

/// Closed path through the given vertex ids (first repeated last implied).
pub fn face_path(g: &MetricGraph, ids: &[VertexId]) -> EdgePath {
    let mut steps = Vec::new();
    for w in 0..ids.len() {
        steps.push(step_between(g, ids[w], ids[(w + 1) % ids.len()]));
    }
    EdgePath { start: g.idx(ids[0]).unwrap(), steps }
}

/// a x b grid torus with unit edges; vertex (i,j) has id i*b + j.
/// Returns the graph and its square faces.
pub fn grid_torus(a: i64, b: i64) -> (MetricGraph, Vec<EdgePath>) {
    let id = |i: i64, j: i64| -> VertexId { i.rem_euclid(a) * b + j.rem_euclid(b) };
    let verts: Vec<VertexId> = (0..a * b).collect();
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            edges.push((id(i, j), id(i, j + 1), rat(1, 1)));
            edges.push((id(i, j), id(i + 1, j), rat(1, 1)));
        }
    }
    let g = MetricGraph::new(verts, edges, Some(0)).unwrap();
    let mut faces = Vec::new();
    for i in 0..a {
        for j in 0..b {
            faces.push(face_path(&g, &[id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j)]));
        }
    }
    (g, faces)
}

/// Cylinder: circle meshed into `c` arcs, crossed with a path of `l` unit
/// rungs (l+1 rings).  Vertex (ring j, position k) has id j*c + k; edges
/// have length `edge_len`.  Returns graph and square faces.
pub fn cylinder(c: i64, l: i64, edge_len: Rat, basepoint: VertexId) -> (MetricGraph, Vec<EdgePath>) {
    let id = |j: i64, k: i64| -> VertexId { j * c + k.rem_euclid(c) };
    let verts: Vec<VertexId> = (0..(l + 1) * c).collect();
    let mut edges = Vec::new();
    for j in 0..=l {
        for k in 0..c {
            edges.push((id(j, k), id(j, k + 1), edge_len));
        }
    }
    for j in 0..l {
        for k in 0..c {
            edges.push((id(j, k), id(j + 1, k), edge_len));
        }
    }
    let g = MetricGraph::new(verts, edges, Some(basepoint)).unwrap();
    let mut faces = Vec::new();
    for j in 0..l {
        for k in 0..c {
            faces.push(face_path(&g, &[id(j, k), id(j, k + 1), id(j + 1, k + 1), id(j + 1, k)]));
        }
    }
    (g, faces)
}

/// Unit-edge line -depth..depth with a circle of circumference 2 + 2/|j|
/// attached at every line vertex j != 0, meshed into 4 arcs.  Basepoint 0.
/// Circle interiors use ids 1000 + (j + depth)*10 + {0,1,2}.
pub fn line_with_circles(depth: i64) -> MetricGraph {
    let mut verts: Vec<VertexId> = (-depth..=depth).collect();
    let mut edges: Vec<(VertexId, VertexId, Rat)> =
        (-depth..depth).map(|i| (i, i + 1, rat(1, 1))).collect();
    for j in (-depth..=depth).filter(|&j| j != 0) {
        let circ = rat(2, 1) + rat(2, j.unsigned_abs() as i128);
        let len = circ / rat(4, 1);
        let a = 1000 + (j + depth) * 10;
        verts.extend_from_slice(&[a, a + 1, a + 2]);
        for (u, v) in [(j, a), (a, a + 1), (a + 1, a + 2), (a + 2, j)] {
            edges.push((u, v, len));
        }
    }
    MetricGraph::new(verts, edges, Some(0)).unwrap()
}

/// The ring loop of `cyl` at level j, based where it starts: id (j, 0).
pub fn cylinder_ring(g: &MetricGraph, c: i64, j: i64) -> EdgePath {
    let id = |k: i64| -> VertexId { j * c + k.rem_euclid(c) };
    let mut steps = Vec::new();
    for k in 0..c {
        steps.push(step_between(g, id(k), id(k + 1)));
    }
    EdgePath { start: g.idx(id(0)).unwrap(), steps }
}

/// Two cylinders (each c x l) wedged: ring 0 of both share vertex ids only
/// at a junction vertex.  Left cylinder vertices get ids j*c+k as usual;
/// the right cylinder's get an offset, except its (0,0) which is glued to
/// the left (0,0).  Faces of both sides are returned.
pub fn two_ended_figure(c: i64, l: i64) -> (MetricGraph, Vec<EdgePath>) {
    let idl = |j: i64, k: i64| -> VertexId { j * c + k.rem_euclid(c) };
    let off = (l + 1) * c;
    let idr = |j: i64, k: i64| -> VertexId {
        if j == 0 && k.rem_euclid(c) == 0 {
            idl(0, 0)
        } else {
            off + j * c + k.rem_euclid(c)
        }
    };
    let mut verts: Vec<VertexId> = (0..(l + 1) * c).collect();
    for j in 0..=l {
        for k in 0..c {
            if !(j == 0 && k == 0) {
                verts.push(off + j * c + k);
            }
        }
    }
    let mut edges = Vec::new();
    for (idf, side) in [(&idl as &dyn Fn(i64, i64) -> VertexId, 0), (&idr, 1)] {
        let _ = side;
        for j in 0..=l {
            for k in 0..c {
                edges.push((idf(j, k), idf(j, k + 1), rat(1, 1)));
            }
        }
        for j in 0..l {
            for k in 0..c {
                edges.push((idf(j, k), idf(j + 1, k), rat(1, 1)));
            }
        }
    }
    let g = MetricGraph::new(verts, edges, Some(0)).unwrap();
    let mut faces = Vec::new();
    for idf in [&idl as &dyn Fn(i64, i64) -> VertexId, &idr] {
        for j in 0..l {
            for k in 0..c {
                faces.push(face_path(
                    &g,
                    &[idf(j, k), idf(j, k + 1), idf(j + 1, k + 1), idf(j + 1, k)],
                ));
            }
        }
    }
    (g, faces)
}
