//! Finite connected graphs with positive rational edge lengths, modeling
//! compact length spaces: shortest-path metric, metric balls, complements,
//! a deterministic shortest-path spanning tree, loops as free-group words,
//! exact free-homotopy class lengths, and bounded class enumeration.

use crate::rat::{rat, Rat};
use crate::word::Word;
use num::Zero;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::sync::OnceLock;
use thiserror::Error;

/// External vertex name; stable across nested truncations of one family.
pub type VertexId = i64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("edge endpoint {0} is not a vertex")]
    UnknownEndpoint(VertexId),
    #[error("edge ({0}, {1}) has non-positive length")]
    NonPositiveLength(VertexId, VertexId),
    #[error("basepoint {0} is not a vertex")]
    UnknownBasepoint(VertexId),
    #[error("graph is not connected")]
    Disconnected,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("step {0} does not continue from the current vertex")]
    BrokenChain(usize),
    #[error("edge index {0} out of range")]
    BadEdge(usize),
    #[error("start vertex index out of range")]
    BadStart,
}

/// Class enumeration found more classes under the cap than the configured
/// bound allows.  Raised instead of silently truncating the list.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("more than {bound} free-homotopy classes of length <= {cap}; raise the bound or lower the cap")]
pub struct EnumerationOverflow {
    pub cap: Rat,
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: Rat,
}

/// Directed use of an edge: `forward` means u -> v.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

impl Step {
    pub fn reversed(self) -> Step {
        Step { edge: self.edge, forward: !self.forward }
    }
}

#[derive(Clone, Copy)]
struct Arc {
    edge: usize,
    to: usize,
    forward: bool,
}

/// Walk through the graph: a start vertex and consecutive directed edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePath {
    pub start: usize,
    pub steps: Vec<Step>,
}

impl EdgePath {
    pub fn trivial(start: usize) -> Self {
        EdgePath { start, steps: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Deterministic shortest-path spanning tree rooted at the basepoint.
/// Vertex v's parent edge is the least-indexed edge realizing
/// dist(root, v) = dist(root, u) + len(e); edge lengths are positive, so
/// parents are strictly closer to the root and the choice is a tree.
pub struct Tree {
    pub parent_vertex: Vec<Option<usize>>,
    /// Step from parent(v) to v.
    pub parent_step: Vec<Option<Step>>,
    /// Distance from the root (the tree realizes shortest paths).
    pub dist: Vec<Rat>,
    /// Edges outside the tree, ascending; their positions are the free
    /// letters of the fundamental group.
    pub cotree: Vec<usize>,
    /// edge index -> letter position, for co-tree edges.
    pub letter: Vec<Option<usize>>,
}

/// Metric ball around `center`: the set of vertices within `radius`.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: usize,
    pub radius: Rat,
    pub closed: bool,
    pub vertices: Vec<usize>,
    member: Vec<bool>,
}

impl Ball {
    pub fn contains_vertex(&self, v: usize) -> bool {
        self.member[v]
    }
}

/// One connected component of the complement of a closed ball.  Only
/// components containing at least one vertex can carry loops; open arcs
/// poking out of the ball from two interior-side endpoints are simply
/// connected and are ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementComponent {
    pub vertices: Vec<usize>,
    /// Edges with both endpoints outside the ball.  Such an edge lies
    /// entirely outside: every interior point is at distance
    /// min(d(u)+t, d(v)+len-t) >= min(d(u), d(v)) > R from the center.
    pub edges: Vec<usize>,
}

pub struct MetricGraph {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    edges: Vec<Edge>,
    adj: Vec<Vec<Arc>>,
    base: usize,
    apsp: OnceLock<Vec<Vec<Rat>>>,
    tree: OnceLock<Tree>,
}

impl std::fmt::Debug for MetricGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MetricGraph")
            .field("vertices", &self.ids.len())
            .field("edges", &self.edges.len())
            .field("basepoint", &self.ids[self.base])
            .finish()
    }
}

impl MetricGraph {
    pub fn new(
        vertices: Vec<VertexId>,
        edge_list: Vec<(VertexId, VertexId, Rat)>,
        basepoint: Option<VertexId>,
    ) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut index = HashMap::new();
        for (i, &id) in vertices.iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(GraphError::DuplicateVertex(id));
            }
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut adj = vec![Vec::new(); vertices.len()];
        for (uid, vid, len) in edge_list {
            let &u = index.get(&uid).ok_or(GraphError::UnknownEndpoint(uid))?;
            let &v = index.get(&vid).ok_or(GraphError::UnknownEndpoint(vid))?;
            if len <= Rat::zero() {
                return Err(GraphError::NonPositiveLength(uid, vid));
            }
            let e = edges.len();
            edges.push(Edge { u, v, len });
            adj[u].push(Arc { edge: e, to: v, forward: true });
            adj[v].push(Arc { edge: e, to: u, forward: false });
        }
        let base = match basepoint {
            Some(id) => *index.get(&id).ok_or(GraphError::UnknownBasepoint(id))?,
            None => {
                let min_id = vertices.iter().copied().min().unwrap();
                index[&min_id]
            }
        };
        let g = MetricGraph {
            ids: vertices,
            index,
            edges,
            adj,
            base,
            apsp: OnceLock::new(),
            tree: OnceLock::new(),
        };
        // Connectivity check.
        let mut seen = vec![false; g.n_vertices()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for a in &g.adj[u] {
                if !seen[a.to] {
                    seen[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.ids.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn id(&self, v: usize) -> VertexId {
        self.ids[v]
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn idx(&self, id: VertexId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn basepoint(&self) -> usize {
        self.base
    }

    /// The same graph with every edge length multiplied by `factor > 0`.
    /// All distances and class lengths scale by the same factor.
    pub fn rescaled(&self, factor: Rat) -> MetricGraph {
        assert!(factor > Rat::zero(), "scale factor must be positive");
        let edges = self
            .edges
            .iter()
            .map(|e| (self.ids[e.u], self.ids[e.v], e.len * factor))
            .collect();
        MetricGraph::new(self.ids.clone(), edges, Some(self.ids[self.base]))
            .expect("rescaling preserves validity")
    }

    /// Endpoints of `step`: (tail, head).
    pub fn step_ends(&self, s: Step) -> (usize, usize) {
        let e = &self.edges[s.edge];
        if s.forward { (e.u, e.v) } else { (e.v, e.u) }
    }

    pub fn distances_from(&self, source: usize) -> Vec<Rat> {
        let inf = self.infinity();
        let mut dist = vec![inf; self.n_vertices()];
        dist[source] = Rat::zero();
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((Rat::zero(), source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for a in &self.adj[u] {
                let nd = d + self.edges[a.edge].len;
                if nd < dist[a.to] {
                    dist[a.to] = nd;
                    heap.push(Reverse((nd, a.to)));
                }
            }
        }
        dist
    }

    /// A value strictly larger than any path length: total edge length + 1.
    fn infinity(&self) -> Rat {
        self.edges.iter().map(|e| e.len).fold(rat(1, 1), |a, b| a + b)
    }

    pub fn apsp(&self) -> &Vec<Vec<Rat>> {
        self.apsp
            .get_or_init(|| (0..self.n_vertices()).map(|v| self.distances_from(v)).collect())
    }

    pub fn dist(&self, u: usize, v: usize) -> Rat {
        self.apsp()[u][v]
    }

    pub fn diameter(&self) -> Rat {
        let apsp = self.apsp();
        let mut best = Rat::zero();
        for row in apsp {
            for &d in row {
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    /// Farthest point of edge `e` from `center` (middle of the edge as seen
    /// from both sides): (d(c,u) + d(c,v) + len) / 2.  Every interior point
    /// of the edge is within this bound, and it is attained.
    pub fn edge_far_dist(&self, center: usize, e: usize) -> Rat {
        let edge = &self.edges[e];
        (self.dist(center, edge.u) + self.dist(center, edge.v) + edge.len) / rat(2, 1)
    }

    /// Whole edge inside the ball of `radius` around `center`?
    pub fn edge_in_ball(&self, center: usize, radius: Rat, closed: bool, e: usize) -> bool {
        let far = self.edge_far_dist(center, e);
        if closed { far <= radius } else { far < radius }
    }

    /// Whole graph inside the ball?
    pub fn graph_in_ball(&self, center: usize, radius: Rat, closed: bool) -> bool {
        (0..self.n_edges()).all(|e| self.edge_in_ball(center, radius, closed, e))
            && (0..self.n_vertices()).all(|v| {
                let d = self.dist(center, v);
                if closed { d <= radius } else { d < radius }
            })
    }

    pub fn ball(&self, center: usize, radius: Rat, closed: bool) -> Ball {
        let mut vertices = Vec::new();
        let mut member = vec![false; self.n_vertices()];
        for v in 0..self.n_vertices() {
            let d = self.dist(center, v);
            let inside = if closed { d <= radius } else { d < radius };
            if inside {
                member[v] = true;
                vertices.push(v);
            }
        }
        Ball { center, radius, closed, vertices, member }
    }

    /// Components of the complement of the closed ball B̄(center, radius),
    /// ordered by their smallest vertex index.
    pub fn complement_components(&self, center: usize, radius: Rat) -> Vec<ComplementComponent> {
        let outside: Vec<bool> =
            (0..self.n_vertices()).map(|v| self.dist(center, v) > radius).collect();
        let mut comp = vec![usize::MAX; self.n_vertices()];
        let mut comps: Vec<ComplementComponent> = Vec::new();
        for s in 0..self.n_vertices() {
            if !outside[s] || comp[s] != usize::MAX {
                continue;
            }
            let c = comps.len();
            let mut verts = Vec::new();
            let mut stack = vec![s];
            comp[s] = c;
            while let Some(u) = stack.pop() {
                verts.push(u);
                for a in &self.adj[u] {
                    if outside[a.to] && comp[a.to] == usize::MAX {
                        comp[a.to] = c;
                        stack.push(a.to);
                    }
                }
            }
            verts.sort_unstable();
            comps.push(ComplementComponent { vertices: verts, edges: Vec::new() });
        }
        for (e, edge) in self.edges.iter().enumerate() {
            if outside[edge.u] && outside[edge.v] {
                comps[comp[edge.u]].edges.push(e);
            }
        }
        comps
    }

    pub fn validate_path(&self, p: &EdgePath) -> Result<(), PathError> {
        if p.start >= self.n_vertices() {
            return Err(PathError::BadStart);
        }
        let mut cur = p.start;
        for (i, s) in p.steps.iter().enumerate() {
            if s.edge >= self.n_edges() {
                return Err(PathError::BadEdge(s.edge));
            }
            let (tail, head) = self.step_ends(*s);
            if tail != cur {
                return Err(PathError::BrokenChain(i));
            }
            cur = head;
        }
        Ok(())
    }

    pub fn path_end(&self, p: &EdgePath) -> usize {
        p.steps.iter().fold(p.start, |_, s| self.step_ends(*s).1)
    }

    pub fn path_len(&self, p: &EdgePath) -> Rat {
        p.steps.iter().map(|s| self.edges[s.edge].len).fold(Rat::zero(), |a, b| a + b)
    }

    pub fn is_loop(&self, p: &EdgePath) -> bool {
        self.path_end(p) == p.start
    }

    /// Removes immediate backtracks (a step followed by its reverse) until
    /// none remain.  Homotopic rel endpoints to the input.
    pub fn path_reduce(&self, p: &EdgePath) -> EdgePath {
        let mut stack: Vec<Step> = Vec::with_capacity(p.steps.len());
        for &s in &p.steps {
            if let Some(&top) = stack.last() {
                if top.edge == s.edge && top.forward != s.forward {
                    stack.pop();
                    continue;
                }
            }
            stack.push(s);
        }
        EdgePath { start: p.start, steps: stack }
    }

    /// Every point swept by the path lies in the open ball of `radius`
    /// around `center`.  A trivial path is just its start vertex.
    pub fn path_in_open_ball(&self, p: &EdgePath, center: usize, radius: Rat) -> bool {
        if p.steps.is_empty() {
            return self.dist(center, p.start) < radius;
        }
        p.steps.iter().all(|s| self.edge_far_dist(center, s.edge) < radius)
    }

    pub fn tree(&self) -> &Tree {
        self.tree.get_or_init(|| {
            let dist = self.distances_from(self.base);
            let n = self.n_vertices();
            let mut parent_vertex = vec![None; n];
            let mut parent_step = vec![None; n];
            for v in 0..n {
                if v == self.base {
                    continue;
                }
                for (e, edge) in self.edges.iter().enumerate() {
                    let other = if edge.v == v {
                        Some((edge.u, Step { edge: e, forward: true }))
                    } else if edge.u == v {
                        Some((edge.v, Step { edge: e, forward: false }))
                    } else {
                        None
                    };
                    if let Some((u, step)) = other {
                        if dist[u] + edge.len == dist[v] {
                            parent_vertex[v] = Some(u);
                            parent_step[v] = Some(step);
                            break;
                        }
                    }
                }
                assert!(parent_vertex[v].is_some(), "no shortest-path parent");
            }
            let in_tree: HashSet<usize> =
                parent_step.iter().flatten().map(|s| s.edge).collect();
            let mut cotree = Vec::new();
            let mut letter = vec![None; self.n_edges()];
            for e in 0..self.n_edges() {
                if !in_tree.contains(&e) {
                    letter[e] = Some(cotree.len());
                    cotree.push(e);
                }
            }
            Tree { parent_vertex, parent_step, dist, cotree, letter }
        })
    }

    /// Number of free letters = rank of the fundamental group.
    pub fn rank(&self) -> usize {
        self.tree().cotree.len()
    }

    /// The unique reduced path from `a` to `b` inside the spanning tree.
    pub fn tree_path(&self, a: usize, b: usize) -> EdgePath {
        let tree = self.tree();
        let chain = |mut v: usize| {
            let mut out = vec![v];
            while let Some(p) = tree.parent_vertex[v] {
                out.push(p);
                v = p;
            }
            out
        };
        let ca = chain(a); // a .. root
        let cb = chain(b);
        let mut ia = ca.len();
        let mut ib = cb.len();
        while ia > 0 && ib > 0 && ca[ia - 1] == cb[ib - 1] {
            ia -= 1;
            ib -= 1;
        }
        // ca[..=ia] climbs from a to the meeting vertex; cb[..=ib] descends.
        let mut steps = Vec::new();
        for v in &ca[..ia] {
            steps.push(tree.parent_step[*v].unwrap().reversed());
        }
        for v in cb[..ib].iter().rev() {
            steps.push(tree.parent_step[*v].unwrap());
        }
        EdgePath { start: a, steps }
    }

    /// Reads the free-group word of a loop: co-tree letters in traversal
    /// order (tree edges vanish under the retraction), freely reduced.
    pub fn loop_to_word(&self, p: &EdgePath) -> Word {
        debug_assert!(self.is_loop(p));
        let tree = self.tree();
        let mut letters = Vec::new();
        for s in &p.steps {
            if let Some(l) = tree.letter[s.edge] {
                let signed = (l as i32) + 1;
                letters.push(if s.forward { signed } else { -signed });
            }
        }
        Word::new(letters)
    }

    /// A based loop whose word is exactly `w`: tree paths between the
    /// co-tree edges, not backtrack-reduced.
    pub fn word_to_loop(&self, w: &Word) -> EdgePath {
        let tree = self.tree();
        let mut steps = Vec::new();
        let mut cur = self.base;
        for &l in w.letters() {
            let e = tree.cotree[(l.unsigned_abs() as usize) - 1];
            let edge = &self.edges[e];
            let (tail, head, forward) =
                if l > 0 { (edge.u, edge.v, true) } else { (edge.v, edge.u, false) };
            steps.extend(self.tree_path(cur, tail).steps);
            steps.push(Step { edge: e, forward });
            cur = head;
        }
        steps.extend(self.tree_path(cur, self.base).steps);
        EdgePath { start: self.base, steps }
    }

    /// Length of the backtrack-reduced realization of `w`, i.e. the distance
    /// in the universal cover (a tree, where reduced paths are geodesics)
    /// from the base lift to its w-translate.
    fn lift_dist(&self, w: &Word) -> Rat {
        let path = self.word_to_loop(w);
        self.path_len(&self.path_reduce(&path))
    }

    /// Exact length of the free-homotopy class of `w`: the translation
    /// length of the deck transformation, d(x, w²x) - d(x, wx) on the
    /// universal-cover tree.  Deck actions of graph covers are free, so
    /// every nontrivial element is hyperbolic and the formula is exact;
    /// the identity gives 0.
    pub fn class_length(&self, w: &Word) -> Rat {
        let w2 = w.concat(w);
        self.lift_dist(&w2) - self.lift_dist(w)
    }

    /// All free-homotopy classes of length <= cap (nontrivial, one per
    /// unordered pair {class, inverse class}), as based-loop words with
    /// exact lengths, sorted by (length, word).  Classes correspond to
    /// reduced edge cycles up to rotation and reversal.
    pub fn enumerate_classes(&self, cap: Rat) -> Vec<ConjClass> {
        self.enumerate_classes_bounded(cap, usize::MAX)
            .expect("unbounded enumeration cannot overflow")
    }

    /// Like `enumerate_classes`, but errors out if more than `bound`
    /// classes fit under the cap instead of truncating the answer.
    pub fn enumerate_classes_bounded(
        &self,
        cap: Rat,
        bound: usize,
    ) -> Result<Vec<ConjClass>, EnumerationOverflow> {
        let mut seen: HashSet<Vec<(usize, bool)>> = HashSet::new();
        let mut out = Vec::new();
        let n = self.n_vertices();
        for s in 0..n {
            // Cycles whose minimum vertex is s.
            let mut stack_steps: Vec<Step> = Vec::new();
            if !self.cycle_dfs(s, s, Rat::zero(), cap, &mut stack_steps, &mut seen, &mut out, bound)
            {
                return Err(EnumerationOverflow { cap, bound });
            }
        }
        out.sort_by(|a, b| (a.length, a.word.letters()).cmp(&(b.length, b.word.letters())));
        Ok(out)
    }

    /// Returns false as soon as `out` would exceed `bound` entries.
    #[allow(clippy::too_many_arguments)]
    fn cycle_dfs(
        &self,
        anchor: usize,
        cur: usize,
        len: Rat,
        cap: Rat,
        steps: &mut Vec<Step>,
        seen: &mut HashSet<Vec<(usize, bool)>>,
        out: &mut Vec<ConjClass>,
        bound: usize,
    ) -> bool {
        for a in &self.adj[cur] {
            if a.to < anchor {
                continue;
            }
            if let Some(&last) = steps.last() {
                if last.edge == a.edge && last.forward != a.forward {
                    continue; // backtrack
                }
            }
            let nlen = len + self.edges[a.edge].len;
            if nlen + self.dist(a.to, anchor) > cap {
                continue;
            }
            let step = Step { edge: a.edge, forward: a.forward };
            if a.to == anchor {
                // Closing: cyclic reduction needs last step != reverse of first.
                let first = if steps.is_empty() { step } else { steps[0] };
                if !(step.edge == first.edge && step.forward != first.forward) {
                    steps.push(step);
                    let key = canonical_cycle(steps);
                    if seen.insert(key) {
                        if out.len() >= bound {
                            return false;
                        }
                        let based = self.based_loop_at(anchor, steps);
                        let word = self.loop_to_word(&based);
                        out.push(ConjClass { length: nlen, word });
                    }
                    steps.pop();
                }
                // The search continues below: a longer cycle may revisit
                // the anchor (e.g. both petals of a wedge).
            }
            if nlen < cap {
                steps.push(step);
                let ok =
                    self.cycle_dfs(anchor, a.to, nlen, cap, steps, seen, out, bound);
                steps.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn based_loop_at(&self, anchor: usize, cycle: &[Step]) -> EdgePath {
        let to = self.tree_path(self.base, anchor);
        let back = self.tree_path(anchor, self.base);
        let mut steps = to.steps;
        steps.extend_from_slice(cycle);
        steps.extend(back.steps);
        EdgePath { start: self.base, steps }
    }
}

/// One free-homotopy class: its exact length and a based representative word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjClass {
    pub length: Rat,
    pub word: Word,
}

/// Canonical form of an edge cycle under rotation and reversal.
fn canonical_cycle(steps: &[Step]) -> Vec<(usize, bool)> {
    let fwd: Vec<(usize, bool)> = steps.iter().map(|s| (s.edge, s.forward)).collect();
    let rev: Vec<(usize, bool)> =
        steps.iter().rev().map(|s| (s.edge, !s.forward)).collect();
    let mut best: Option<Vec<(usize, bool)>> = None;
    for seq in [&fwd, &rev] {
        for r in 0..seq.len() {
            let rot: Vec<(usize, bool)> =
                seq[r..].iter().chain(seq[..r].iter()).copied().collect();
            if best.as_ref().map_or(true, |b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn cycle(n: i64) -> MetricGraph {
        let verts: Vec<i64> = (0..n).collect();
        let edges: Vec<(i64, i64, Rat)> =
            (0..n).map(|i| (i, (i + 1) % n, rat(1, 1))).collect();
        MetricGraph::new(verts, edges, Some(0)).unwrap()
    }

    /// Two unit-edge cycles of sizes a and b sharing vertex 0.
    fn wedge(a: i64, b: i64) -> MetricGraph {
        let mut verts = vec![0i64];
        let mut edges = Vec::new();
        for i in 1..a {
            verts.push(i);
        }
        for i in 0..a {
            edges.push((i, (i + 1) % a, rat(1, 1)));
        }
        for i in 1..b {
            verts.push(a - 1 + i);
        }
        let second = |i: i64| if i == 0 { 0 } else { a - 1 + i };
        for i in 0..b {
            edges.push((second(i), second((i + 1) % b), rat(1, 1)));
        }
        MetricGraph::new(verts, edges, Some(0)).unwrap()
    }

    #[test]
    fn square_distances() {
        let g = cycle(4);
        let d = g.distances_from(0);
        assert_eq!(d, vec![rat(0, 1), rat(1, 1), rat(2, 1), rat(1, 1)]);
        assert_eq!(g.diameter(), rat(2, 1));
    }

    #[test]
    fn wedge_distance_across() {
        let g = wedge(6, 10);
        // Antipode of the wedge point on the 10-cycle: 5 along that circle,
        // plus checking no shortcut through the 6-circle exists.
        let far = g.idx(5 + 5).unwrap();
        assert_eq!(g.dist(0, far), rat(5, 1));
        // Hexagon antipode to decagon antipode: 3 + 5.
        let hex_far = g.idx(3).unwrap();
        assert_eq!(g.dist(hex_far, far), rat(8, 1));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            MetricGraph::new(vec![], vec![], None).unwrap_err(),
            GraphError::Empty
        );
        assert_eq!(
            MetricGraph::new(vec![1, 1], vec![], None).unwrap_err(),
            GraphError::DuplicateVertex(1)
        );
        assert_eq!(
            MetricGraph::new(vec![1, 2], vec![(1, 3, rat(1, 1))], None).unwrap_err(),
            GraphError::UnknownEndpoint(3)
        );
        assert_eq!(
            MetricGraph::new(vec![1, 2], vec![(1, 2, rat(0, 1))], None).unwrap_err(),
            GraphError::NonPositiveLength(1, 2)
        );
        assert_eq!(
            MetricGraph::new(vec![1, 2], vec![], None).unwrap_err(),
            GraphError::Disconnected
        );
        assert_eq!(
            MetricGraph::new(vec![1, 2], vec![(1, 2, rat(1, 1))], Some(9)).unwrap_err(),
            GraphError::UnknownBasepoint(9)
        );
    }

    #[test]
    fn open_and_closed_balls() {
        let g = cycle(8);
        let open = g.ball(0, rat(4, 1), false);
        assert_eq!(open.vertices.len(), 7); // antipode excluded
        let closed = g.ball(0, rat(4, 1), true);
        assert_eq!(closed.vertices.len(), 8);
    }

    #[test]
    fn line_complement_components() {
        // Path graph -5..5, unit edges, basepoint 0; closed ball R=2 leaves
        // {-5..-3} and {3..5}.
        let verts: Vec<i64> = (-5..=5).collect();
        let edges: Vec<(i64, i64, Rat)> =
            (-5..5).map(|i| (i, i + 1, rat(1, 1))).collect();
        let g = MetricGraph::new(verts, edges, Some(0)).unwrap();
        let comps = g.complement_components(g.idx(0).unwrap(), rat(2, 1));
        assert_eq!(comps.len(), 2);
        let ids = |c: &ComplementComponent| {
            let mut v: Vec<i64> = c.vertices.iter().map(|&i| g.id(i)).collect();
            v.sort();
            v
        };
        assert_eq!(ids(&comps[0]), vec![-5, -4, -3]);
        assert_eq!(ids(&comps[1]), vec![3, 4, 5]);
        assert_eq!(comps[0].edges.len(), 2);
    }

    #[test]
    fn edge_far_point() {
        let g = cycle(6);
        // Edge between the two vertices adjacent to the antipode of 0.
        let far = g.edge_far_dist(0, 2); // edge (2,3)
        assert_eq!(far, rat(3, 1)); // (2 + 3 + 1)/2
        assert!(g.graph_in_ball(0, rat(3, 1), true));
        assert!(!g.graph_in_ball(0, rat(3, 1), false));
    }

    #[test]
    fn tree_and_words() {
        let g = cycle(6);
        assert_eq!(g.rank(), 1);
        let tree = g.tree();
        assert_eq!(tree.cotree.len(), 1);
        // Full loop around the cycle.
        let steps: Vec<Step> =
            (0..6).map(|e| Step { edge: e, forward: true }).collect();
        let p = EdgePath { start: 0, steps };
        g.validate_path(&p).unwrap();
        assert!(g.is_loop(&p));
        let w = g.loop_to_word(&p);
        assert_eq!(w.letters().len(), 1);
        let back = g.word_to_loop(&w);
        assert_eq!(g.loop_to_word(&back), w);
    }

    #[test]
    fn path_reduce_cancels() {
        let g = cycle(6);
        let p = EdgePath {
            start: 0,
            steps: vec![
                Step { edge: 0, forward: true },
                Step { edge: 0, forward: false },
                Step { edge: 5, forward: false },
            ],
        };
        let r = g.path_reduce(&p);
        assert_eq!(r.steps.len(), 1);
        assert_eq!(g.path_len(&r), rat(1, 1));
    }

    #[test]
    fn class_length_on_cycles() {
        let g = cycle(6);
        let classes = g.enumerate_classes(rat(6, 1));
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].length, rat(6, 1));
        assert_eq!(g.class_length(&classes[0].word), rat(6, 1));
        let square = classes[0].word.concat(&classes[0].word);
        assert_eq!(g.class_length(&square), rat(12, 1));
        assert_eq!(g.class_length(&Word::new(vec![])), rat(0, 1));
    }

    #[test]
    fn wedge_class_lengths() {
        let g = wedge(6, 10);
        let classes = g.enumerate_classes(rat(16, 1));
        let lengths: Vec<Rat> = classes.iter().map(|c| c.length).collect();
        assert!(lengths.contains(&rat(6, 1)));
        assert!(lengths.contains(&rat(10, 1)));
        assert!(lengths.contains(&rat(16, 1)));
        for c in &classes {
            assert_eq!(g.class_length(&c.word), c.length);
        }
    }

    #[test]
    fn ball_and_path_membership() {
        let g = cycle(6);
        let p = EdgePath {
            start: 0,
            steps: vec![Step { edge: 0, forward: true }, Step { edge: 1, forward: true }],
        };
        assert!(g.path_in_open_ball(&p, 0, rat(5, 2)));
        assert!(!g.path_in_open_ball(&p, 3, rat(5, 2)));
        assert!(g.path_in_open_ball(&EdgePath::trivial(0), 0, rat(1, 10)));
    }
}
