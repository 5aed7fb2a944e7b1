//! Declared 2-cells on a metric graph and the retraction that fills them.
//!
//! Recipes that model surfaces (cylinders, tubes, caps) mesh them into a
//! graph plus a list of square faces.  In the bare graph every mesh cell
//! is an essential loop of its own; filling the declared faces recovers
//! the modeled surface's homotopy type.  This module collapses the filled
//! complex combinatorially — repeatedly removing an edge that lies on
//! exactly one live face together with that face, then pruning hanging
//! trees — and turns the collapse into a word map onto the core graph's
//! fundamental group.  The kernel of that map is exactly the normal
//! closure of the declared face boundaries, so conjugacy questions about
//! the modeled surface reduce to exact free-group questions on the core.

use crate::graph::{MetricGraph, Step, VertexId};
use crate::word::Word;

/// Resolves vertex cycles into closed step sequences.  Each consecutive
/// pair (cyclically) must be joined by exactly one edge; ambiguity from
/// parallel edges or a missing edge is an error naming the pair.
pub fn resolve_faces(
    g: &MetricGraph,
    faces: &[Vec<VertexId>],
) -> Result<Vec<Vec<Step>>, String> {
    let mut out = Vec::with_capacity(faces.len());
    for (fi, cycle) in faces.iter().enumerate() {
        if cycle.len() < 2 {
            return Err(format!("face {fi}: fewer than two vertices"));
        }
        let mut steps = Vec::with_capacity(cycle.len());
        for (k, &aid) in cycle.iter().enumerate() {
            let bid = cycle[(k + 1) % cycle.len()];
            let a = g
                .idx(aid)
                .ok_or_else(|| format!("face {fi}: unknown vertex {aid}"))?;
            let b = g
                .idx(bid)
                .ok_or_else(|| format!("face {fi}: unknown vertex {bid}"))?;
            let mut found = None;
            for (ei, e) in g.edges().iter().enumerate() {
                if (e.u == a && e.v == b) || (e.u == b && e.v == a) {
                    if found.is_some() {
                        return Err(format!(
                            "face {fi}: parallel edges between {aid} and {bid}"
                        ));
                    }
                    found = Some(Step { edge: ei, forward: e.u == a });
                }
            }
            match found {
                Some(s) => steps.push(s),
                None => {
                    return Err(format!("face {fi}: no edge between {aid} and {bid}"))
                }
            }
        }
        out.push(steps);
    }
    Ok(out)
}

/// The collapse of a filled complex onto a core graph, with the word map
/// it induces on fundamental groups.
#[derive(Debug)]
pub struct Retraction {
    /// The core graph the complex deformation-retracts to.  Vertex ids
    /// are inherited, so core vertices can be matched back to the source.
    pub core: MetricGraph,
    /// Removal rewrites in removal order: source edge index, and the step
    /// sequence (over then-live source edges) replacing a forward
    /// traversal of it.
    rewrites: Vec<(usize, Vec<Step>)>,
    /// Source edge index -> core edge index, for surviving edges.
    edge_map: Vec<Option<usize>>,
    /// Source vertex index -> core vertex index, for surviving vertices.
    vertex_map: Vec<Option<usize>>,
}

/// Collapses the declared faces: while some live edge lies on exactly one
/// live face, remove that edge together with the face (the face boundary
/// becomes the rewrite for the removed edge); afterwards prune hanging
/// trees.  Fails if faces remain with no free edge (the complex does not
/// retract to a graph by free collapses — e.g. a closed surface mesh).
pub fn collapse_faces(
    g: &MetricGraph,
    faces: &[Vec<VertexId>],
) -> Result<Retraction, String> {
    let mut boundaries = resolve_faces(g, faces)?;
    let mut live_face = vec![true; boundaries.len()];
    let mut live_edge = vec![true; g.n_edges()];
    let mut rewrites: Vec<(usize, Vec<Step>)> = Vec::new();

    loop {
        let mut usage = vec![0usize; g.n_edges()];
        let mut face_of = vec![usize::MAX; g.n_edges()];
        for (fi, steps) in boundaries.iter().enumerate() {
            if !live_face[fi] {
                continue;
            }
            for s in steps {
                usage[s.edge] += 1;
                face_of[s.edge] = fi;
            }
        }
        let free = (0..g.n_edges()).find(|&e| live_edge[e] && usage[e] == 1);
        let Some(e) = free else { break };
        let fi = face_of[e];
        let steps = &boundaries[fi];
        let pos = steps.iter().position(|s| s.edge == e).expect("usage counted it");
        // Boundary reads s_pos s_{pos+1} ... s_{pos-1} ≃ 1, so the
        // traversal s_pos is homotopic to the rest reversed.
        let mut rest: Vec<Step> = Vec::with_capacity(steps.len() - 1);
        for k in 1..steps.len() {
            rest.push(steps[(pos + k) % steps.len()]);
        }
        let forward_replacement = if steps[pos].forward {
            rest.iter().rev().map(|s| s.reversed()).collect()
        } else {
            rest
        };
        rewrites.push((e, forward_replacement));
        live_edge[e] = false;
        live_face[fi] = false;
        boundaries[fi].clear();
    }
    if let Some(fi) = live_face.iter().position(|&alive| alive) {
        return Err(format!(
            "face {fi} survives collapse: no live edge of it lies on exactly one face"
        ));
    }

    // Prune hanging trees: repeatedly drop degree-one vertices with their
    // edge.  A cyclically reduced closed path never uses these.
    let mut degree = vec![0usize; g.n_vertices()];
    for (ei, e) in g.edges().iter().enumerate() {
        if live_edge[ei] {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
    }
    loop {
        let mut changed = false;
        for (ei, e) in g.edges().iter().enumerate() {
            if live_edge[ei] && (degree[e.u] == 1 || degree[e.v] == 1) {
                live_edge[ei] = false;
                degree[e.u] -= 1;
                degree[e.v] -= 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // Assemble the core graph from surviving edges (or a lone basepoint
    // when everything collapsed).
    let mut vertex_map = vec![None; g.n_vertices()];
    let mut core_ids: Vec<VertexId> = Vec::new();
    let keep = |v: usize, vertex_map: &mut Vec<Option<usize>>, ids: &mut Vec<VertexId>| {
        if vertex_map[v].is_none() {
            vertex_map[v] = Some(ids.len());
            ids.push(g.id(v));
        }
    };
    let mut core_edges: Vec<(VertexId, VertexId, crate::rat::Rat)> = Vec::new();
    let mut edge_map = vec![None; g.n_edges()];
    for (ei, e) in g.edges().iter().enumerate() {
        if live_edge[ei] {
            keep(e.u, &mut vertex_map, &mut core_ids);
            keep(e.v, &mut vertex_map, &mut core_ids);
            edge_map[ei] = Some(core_edges.len());
            core_edges.push((g.id(e.u), g.id(e.v), e.len));
        }
    }
    if core_ids.is_empty() {
        keep(g.basepoint(), &mut vertex_map, &mut core_ids);
    }
    let base_id = if vertex_map[g.basepoint()].is_some() {
        g.id(g.basepoint())
    } else {
        *core_ids.iter().min().expect("core has a vertex")
    };
    let core = MetricGraph::new(core_ids, core_edges, Some(base_id))
        .expect("surviving subgraph is a valid graph");
    Ok(Retraction { core, rewrites, edge_map, vertex_map })
}

impl Retraction {
    /// Built with no faces at all: the core is the pruned graph and the
    /// word map is plain cyclic reduction.
    pub fn identity(g: &MetricGraph) -> Retraction {
        collapse_faces(g, &[]).expect("no faces, nothing can fail to collapse")
    }

    /// The image of `w` (a based word on `g`) under the retraction's
    /// isomorphism-after-filling, as a based word on the core.  This is a
    /// genuine homomorphism with one fixed basing choice, so products and
    /// generated subgroups map coherently; the kernel is exactly the
    /// normal closure of the declared face boundaries, and an empty
    /// result means the class bounds in the filled complex.
    pub fn map_class(&self, g: &MetricGraph, w: &Word) -> Word {
        let path = g.word_to_loop(w);
        let mut steps = path.steps;
        for (removed, repl) in &self.rewrites {
            if !steps.iter().any(|s| s.edge == *removed) {
                continue;
            }
            let mut next = Vec::with_capacity(steps.len() + repl.len());
            for s in steps {
                if s.edge == *removed {
                    if s.forward {
                        next.extend(repl.iter().copied());
                    } else {
                        next.extend(repl.iter().rev().map(|r| r.reversed()));
                    }
                } else {
                    next.push(s);
                }
            }
            steps = next;
        }
        // Backtrack reduction.
        let mut reduced: Vec<Step> = Vec::with_capacity(steps.len());
        for s in steps {
            if reduced.last().is_some_and(|t| *t == s.reversed()) {
                reduced.pop();
            } else {
                reduced.push(s);
            }
        }
        // When the basepoint sits on a pruned branch, every surviving
        // loop is forced through the unique reduced path from the
        // basepoint into the core; strip exactly that conjugator (pruned
        // steps only — never live ones, which would change the based
        // class and debase generated subgroups).
        let mut start = path.start;
        while reduced.len() >= 2
            && self.edge_map[reduced[0].edge].is_none()
            && reduced[0] == reduced[reduced.len() - 1].reversed()
        {
            start = g.step_ends(reduced[0]).1;
            reduced.pop();
            reduced.remove(0);
        }
        if reduced.is_empty() {
            return Word::empty();
        }
        let core_start = self.vertex_map[start]
            .expect("stripped loops start on the core");
        let mut full = self.core.tree_path(self.core.basepoint(), core_start);
        for s in &reduced {
            let ce = self.edge_map[s.edge]
                .expect("reduced loops traverse only surviving edges");
            full.steps.push(Step { edge: ce, forward: s.forward });
        }
        let back = self.core.tree_path(core_start, self.core.basepoint());
        full.steps.extend(back.steps);
        debug_assert!(self.core.validate_path(&full).is_ok());
        self.core.loop_to_word(&full)
    }

    /// Maps a whole list, dropping classes that bound in the complex.
    pub fn map_classes(&self, g: &MetricGraph, words: &[Word]) -> Vec<Word> {
        words
            .iter()
            .map(|w| self.map_class(g, w))
            .filter(|w| !w.is_empty())
            .collect()
    }
}
