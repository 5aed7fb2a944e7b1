//! Explicit finite balls of the covers attached to normal subgroups.
//!
//! The cover of `X` with fundamental group the normal closure `N` of a
//! generating set is realized as a derived graph: vertices are pairs
//! `(vertex of X, deck label)` where labels name elements of the deck
//! group `Q = F/N`, and an edge lift moves the label by the image of the
//! traversed co-tree letter (spanning-tree edges carry no letter).  The
//! ball is grown outward by Dijkstra to a *closed* radius, so only the
//! part of the cover within the radius is ever materialized.
//!
//! Deck labels must support exact equality, so three schemes are tried
//! in order:
//!
//! 1. **Free quotient** — every generator cyclically reduces to a single
//!    letter (vacuously so when there are no generators).  `Q` is the
//!    free group on the surviving letters and labels are reduced words.
//! 2. **Coset table** — the bounded coset enumeration completes, so `Q`
//!    is finite and labels are coset ids acted on exactly by the table.
//! 3. **Certified homology** — labels are canonical residues of letter
//!    exponent vectors modulo the lattice spanned by the generators.
//!    This names elements of the abelianization of `Q`, which conflates
//!    points whenever `Q` is not abelian; it is therefore only trusted
//!    after a certificate: every independent cycle of the *built* ball
//!    must project to a word inside `N`.  When that holds, the built
//!    ball is isometric to the true cover ball — the label map is a
//!    quotient of the true cover that the certificate proves injective
//!    on the ball (any two merged radius-`r` paths would differ by a
//!    ball cycle outside `N`).
//!
//! When no scheme applies, the builder reports an unresolved quotient
//! instead of guessing.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap, HashSet};

use num::Zero;
use thiserror::Error;

use crate::coset::{self, CosetTable, Enumeration};
use crate::graph::{EdgePath, MetricGraph, Step, VertexId};
use crate::lattice::{abelianize, Lattice};
use crate::member::{Budget, MembershipEngine, Verdict};
use crate::rat::Rat;
use crate::word::Word;

/// How deck-group elements were named during construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeckScheme {
    /// Labels are reduced words over the letters that survive killing
    /// the single-letter generators; exact.
    FreeQuotient,
    /// Labels are coset ids from a completed enumeration; exact.
    CosetTable,
    /// Labels are canonical residues of exponent vectors, certified
    /// after construction by membership of every ball cycle.
    HomologyCertified,
}

impl DeckScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            DeckScheme::FreeQuotient => "free-quotient",
            DeckScheme::CosetTable => "coset-table",
            DeckScheme::HomologyCertified => "homology-certified",
        }
    }
}

#[derive(Debug, Error)]
pub enum CoverBallError {
    /// No labeling scheme could name the deck group exactly within
    /// budget; building anyway could silently merge or split lifts.
    #[error("unresolved deck group: {0}")]
    UnresolvedQuotient(String),
    /// The ball exceeded the caller's vertex cap before reaching the
    /// requested radius.
    #[error("cover ball exceeded {bound} vertices before radius {radius}")]
    BallTooLarge { bound: usize, radius: Rat },
    /// An internal consistency check failed; the ball must not be used.
    #[error("cover ball self-check failed: {0}")]
    Inconsistent(String),
}

/// One lift of a base vertex.
#[derive(Clone, Debug)]
pub struct CoverVertex {
    /// Index of the underlying vertex in the base graph.
    pub base: usize,
    /// External id of that base vertex.
    pub base_id: VertexId,
    /// Rendered deck label (scheme-dependent, exact).
    pub label: String,
    /// Distance from the basepoint lift; at most the requested radius.
    pub dist: Rat,
}

/// One lift of a base edge; traversing `a -> b` projects to the base
/// edge in the stored orientation.
#[derive(Clone, Copy, Debug)]
pub struct CoverEdge {
    pub a: usize,
    pub b: usize,
    pub base_edge: usize,
    /// True when `a -> b` runs the base edge from its tail to its head.
    pub forward: bool,
    pub len: Rat,
}

/// The closed metric ball of the cover, as an explicit weighted graph
/// together with the covering projection (`base` / `base_edge` fields).
#[derive(Debug)]
pub struct CoverBall {
    pub scheme: DeckScheme,
    pub radius: Rat,
    pub vertices: Vec<CoverVertex>,
    pub edges: Vec<CoverEdge>,
    /// Index of the lift of the basepoint with the identity label.
    pub basepoint: usize,
}

impl CoverBall {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Independent cycles of the ball (it is connected by construction).
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.a == v) + usize::from(e.b == v))
            .sum()
    }

    /// Lifts of one base vertex, by cover-vertex index.
    pub fn lifts_of(&self, base: usize) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&i| self.vertices[i].base == base).collect()
    }

    /// Every lift present in the ball of every edge incident to the
    /// projection of `v` — i.e. the covering map is a bijection on the
    /// star of `v`, not just an injection.
    pub fn is_interior(&self, g: &MetricGraph, v: usize) -> bool {
        let base_degree = g
            .edges()
            .iter()
            .map(|e| usize::from(e.u == self.vertices[v].base) + usize::from(e.v == self.vertices[v].base))
            .sum::<usize>();
        self.degree(v) == base_degree
    }

    /// Checks that the projection is a local isometry wherever the ball
    /// can see it: every lift of every base edge whose endpoints are
    /// both materialized is present exactly once, lengths match the
    /// base, and every vertex strictly inside the radius is interior.
    pub fn verify_local_isometry(&self, g: &MetricGraph) -> Result<(), String> {
        let mut present: HashSet<(usize, usize, usize)> = HashSet::new();
        for ce in &self.edges {
            let key = (ce.a.min(ce.b), ce.a.max(ce.b), ce.base_edge);
            if !present.insert(key) {
                return Err(format!(
                    "duplicate lift of edge {} between cover vertices {} and {}",
                    ce.base_edge, ce.a, ce.b
                ));
            }
            if ce.len != g.edge(ce.base_edge).len {
                return Err(format!("lift of edge {} changed its length", ce.base_edge));
            }
            let (eu, ev) = (g.edge(ce.base_edge).u, g.edge(ce.base_edge).v);
            let (pa, pb) = if ce.forward { (eu, ev) } else { (ev, eu) };
            if self.vertices[ce.a].base != pa || self.vertices[ce.b].base != pb {
                return Err(format!(
                    "lift of edge {} does not project to its own endpoints",
                    ce.base_edge
                ));
            }
        }
        for (i, cv) in self.vertices.iter().enumerate() {
            let slack = self.radius - cv.dist;
            for (e, edge) in g.edges().iter().enumerate() {
                for fwd in [true, false] {
                    let tail = if fwd { edge.u } else { edge.v };
                    if tail != cv.base {
                        continue;
                    }
                    // A missing lift is only legitimate when the far
                    // endpoint cannot lie inside the closed ball.
                    let here = self
                        .edges
                        .iter()
                        .any(|ce| ce.base_edge == e && (ce.a == i || ce.b == i));
                    if !here && edge.len <= slack {
                        return Err(format!(
                            "vertex {i} at distance {} is missing the lift of edge {e} of \
                             length {} (radius {})",
                            cv.dist, edge.len, self.radius
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The ball as a standalone metric graph: vertex `i` keeps external
    /// id `i`, the basepoint lift is the basepoint.  The deck labels and
    /// the projection survive in the returned tables.
    pub fn to_graph(&self) -> (MetricGraph, Vec<String>, Vec<usize>) {
        let ids: Vec<VertexId> = (0..self.vertices.len() as VertexId).collect();
        let edges: Vec<(VertexId, VertexId, Rat)> = self
            .edges
            .iter()
            .map(|e| (e.a as VertexId, e.b as VertexId, e.len))
            .collect();
        let g = MetricGraph::new(ids, edges, Some(self.basepoint as VertexId))
            .expect("cover balls are valid graphs");
        let labels = self.vertices.iter().map(|v| v.label.clone()).collect();
        let projection = self.vertices.iter().map(|v| v.base).collect();
        (g, labels, projection)
    }
}

/// Deck-group element names with exact equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Label {
    /// Reduced word over surviving letters.
    Free(Vec<i32>),
    /// Live coset id.
    Coset(u32),
    /// Canonical residue of an exponent vector.
    Hom(Vec<i128>),
}

enum Deck {
    Free { killed: Vec<bool> },
    Cosets(CosetTable),
    Hom { lattice: Lattice, rank: usize },
}

impl Deck {
    fn identity(&self) -> Label {
        match self {
            Deck::Free { .. } => Label::Free(Vec::new()),
            Deck::Cosets(_) => Label::Coset(0),
            Deck::Hom { lattice, rank } => Label::Hom(lattice.reduce(&vec![0; *rank])),
        }
    }

    /// The label after traversing one co-tree letter (`letter` is the
    /// signed alphabet value, never zero).
    fn step(&self, l: &Label, letter: i32) -> Label {
        match (self, l) {
            (Deck::Free { killed }, Label::Free(w)) => {
                if killed[(letter.abs() as usize) - 1] {
                    return l.clone();
                }
                let mut w = w.clone();
                if w.last() == Some(&-letter) {
                    w.pop();
                } else {
                    w.push(letter);
                }
                Label::Free(w)
            }
            (Deck::Cosets(t), Label::Coset(c)) => Label::Coset(t.act(*c, letter)),
            (Deck::Hom { lattice, rank }, Label::Hom(v)) => {
                let mut v = v.clone();
                let i = (letter.abs() as usize) - 1;
                debug_assert!(i < *rank);
                v[i] += if letter > 0 { 1 } else { -1 };
                Label::Hom(lattice.reduce(&v))
            }
            _ => unreachable!("label kind always matches the scheme"),
        }
    }

    fn render(l: &Label) -> String {
        match l {
            Label::Free(w) if w.is_empty() => "e".to_string(),
            Label::Free(w) => {
                w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
            }
            Label::Coset(c) => format!("c{c}"),
            Label::Hom(v) => {
                let body = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                format!("h({body})")
            }
        }
    }

    fn scheme(&self) -> DeckScheme {
        match self {
            Deck::Free { .. } => DeckScheme::FreeQuotient,
            Deck::Cosets(_) => DeckScheme::CosetTable,
            Deck::Hom { .. } => DeckScheme::HomologyCertified,
        }
    }
}

/// Builds the closed `radius`-ball of the cover of `g` whose deck group
/// is `F/N`, `N` the normal closure of `gens` (words in the co-tree
/// letters of `g`).  `state_bound` caps the number of materialized cover
/// vertices; `budget` limits the labeling machinery.
pub fn build_cover_ball(
    g: &MetricGraph,
    gens: &[Word],
    radius: Rat,
    state_bound: usize,
    budget: Budget,
) -> Result<CoverBall, CoverBallError> {
    assert!(radius >= Rat::zero(), "radius must be nonnegative");
    let rank = g.rank();
    let engine = MembershipEngine::new(rank, gens, budget);

    // Scheme selection, most exact first.
    let deck = if let Some(kill) = engine.exact_kill_letters() {
        let mut killed = vec![false; rank];
        for &k in kill {
            killed[(k as usize) - 1] = true;
        }
        Deck::Free { killed }
    } else if let Enumeration::Complete(t) = coset::enumerate(rank, gens, budget.max_cosets) {
        Deck::Cosets(t)
    } else {
        Deck::Hom { lattice: Lattice::from_words(gens, rank), rank }
    };

    let ball = grow(g, &deck, radius, state_bound)?;
    if let Deck::Hom { .. } = deck {
        certify_abelian_labels(g, &engine, &ball)?;
    }
    ball.verify_local_isometry(g).map_err(CoverBallError::Inconsistent)?;
    Ok(ball)
}

/// Convenience wrapper: the cover whose deck group kills every class of
/// length `< 2 * delta` (the level of the covering-spectrum tower at
/// `delta`).  `class_bound` caps the class enumeration.
pub fn delta_cover_ball(
    g: &MetricGraph,
    delta: Rat,
    radius: Rat,
    state_bound: usize,
    class_bound: usize,
    budget: Budget,
) -> Result<CoverBall, CoverBallError> {
    let two_delta = delta + delta;
    let classes = g
        .enumerate_classes_bounded(two_delta, class_bound)
        .map_err(|e| CoverBallError::UnresolvedQuotient(format!(
            "class enumeration overflowed: more than {} classes below {}",
            e.cap, e.bound
        )))?;
    let gens: Vec<Word> =
        classes.into_iter().filter(|c| c.length < two_delta).map(|c| c.word).collect();
    build_cover_ball(g, &gens, radius, state_bound, budget)
}

/// Dijkstra over (base vertex, deck label) states out to the closed
/// radius.  Distances are exact: any shortest path to a state within the
/// radius stays within the radius, so pruning never cuts one off.
fn grow(
    g: &MetricGraph,
    deck: &Deck,
    radius: Rat,
    state_bound: usize,
) -> Result<CoverBall, CoverBallError> {
    let tree = g.tree();
    // (edge, forward) pairs leaving each base vertex.
    let mut out: Vec<Vec<(usize, bool)>> = vec![Vec::new(); g.n_vertices()];
    for (e, edge) in g.edges().iter().enumerate() {
        out[edge.u].push((e, true));
        out[edge.v].push((e, false));
    }

    let mut states: HashMap<(usize, Label), usize> = HashMap::new();
    let mut verts: Vec<(usize, Label)> = Vec::new();
    let mut dist: Vec<Rat> = Vec::new();
    let mut heap: BinaryHeap<Reverse<(Rat, usize)>> = BinaryHeap::new();
    let mut edges: HashMap<(usize, usize, usize), CoverEdge> = HashMap::new();

    let root = (g.basepoint(), deck.identity());
    states.insert(root.clone(), 0);
    verts.push(root);
    dist.push(Rat::zero());
    heap.push(Reverse((Rat::zero(), 0)));
    let mut settled = vec![false];

    while let Some(Reverse((d, s))) = heap.pop() {
        if settled[s] {
            continue;
        }
        settled[s] = true;
        debug_assert_eq!(d, dist[s]);
        let (v, label) = verts[s].clone();
        for &(e, fwd) in &out[v] {
            let edge = g.edge(e);
            let nl = match tree.letter[e] {
                Some(pos) => {
                    let signed = (pos as i32) + 1;
                    deck.step(&label, if fwd { signed } else { -signed })
                }
                None => label.clone(),
            };
            let head = if fwd { edge.v } else { edge.u };
            let nd = d + edge.len;
            let key = (head, nl);
            match states.entry(key) {
                Entry::Occupied(o) => {
                    let t = *o.get();
                    record_edge(&mut edges, g, s, t, e, fwd);
                    if nd < dist[t] {
                        dist[t] = nd;
                        heap.push(Reverse((nd, t)));
                    }
                }
                Entry::Vacant(va) => {
                    if nd > radius {
                        continue;
                    }
                    let t = verts.len();
                    if t >= state_bound {
                        return Err(CoverBallError::BallTooLarge { bound: state_bound, radius });
                    }
                    verts.push(va.key().clone());
                    va.insert(t);
                    dist.push(nd);
                    settled.push(false);
                    heap.push(Reverse((nd, t)));
                    record_edge(&mut edges, g, s, t, e, fwd);
                }
            }
        }
    }

    let vertices = verts
        .iter()
        .zip(&dist)
        .map(|((v, l), d)| CoverVertex {
            base: *v,
            base_id: g.id(*v),
            label: Deck::render(l),
            dist: *d,
        })
        .collect();
    let mut edge_list: Vec<CoverEdge> = edges.into_values().collect();
    edge_list.sort_by_key(|e| (e.a, e.b, e.base_edge));
    Ok(CoverBall { scheme: deck.scheme(), radius, vertices, edges: edge_list, basepoint: 0 })
}

fn record_edge(
    edges: &mut HashMap<(usize, usize, usize), CoverEdge>,
    g: &MetricGraph,
    s: usize,
    t: usize,
    e: usize,
    fwd: bool,
) {
    let key = (s.min(t), s.max(t), e);
    edges.entry(key).or_insert(CoverEdge {
        a: s,
        b: t,
        base_edge: e,
        forward: fwd,
        len: g.edge(e).len,
    });
}

/// The certificate that makes homology labels trustworthy: every
/// independent cycle of the built ball must project into the closure.
/// If one does not (or cannot be decided), distinct cover points may
/// have been merged, so the ball is rejected.
fn certify_abelian_labels(
    g: &MetricGraph,
    engine: &MembershipEngine,
    ball: &CoverBall,
) -> Result<(), CoverBallError> {
    let n = ball.vertices.len();
    // BFS spanning tree over the ball.
    let mut parent: Vec<Option<(usize, usize, bool)>> = vec![None; n]; // (vertex, edge idx, a->b?)
    let mut seen = vec![false; n];
    let mut order = vec![ball.basepoint];
    seen[ball.basepoint] = true;
    let mut qi = 0;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in ball.edges.iter().enumerate() {
        incident[e.a].push(i);
        incident[e.b].push(i);
    }
    while qi < order.len() {
        let v = order[qi];
        qi += 1;
        for &ei in &incident[v] {
            let e = &ball.edges[ei];
            let (to, along) = if e.a == v { (e.b, true) } else { (e.a, false) };
            if !seen[to] {
                seen[to] = true;
                parent[to] = Some((v, ei, along));
                order.push(to);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(CoverBallError::Inconsistent("cover ball is not connected".into()));
    }
    let in_tree: HashSet<usize> = parent.iter().flatten().map(|p| p.1).collect();

    // Base steps of the tree path root -> v.
    let path_to = |mut v: usize| -> Vec<Step> {
        let mut back = Vec::new();
        while let Some((p, ei, along)) = parent[v] {
            let e = &ball.edges[ei];
            let step = Step { edge: e.base_edge, forward: e.forward == along };
            back.push(step);
            v = p;
        }
        back.reverse();
        back
    };

    for (ei, e) in ball.edges.iter().enumerate() {
        if in_tree.contains(&ei) {
            continue;
        }
        let mut steps = path_to(e.a);
        steps.push(Step { edge: e.base_edge, forward: e.forward });
        let mut ret = path_to(e.b);
        ret.reverse();
        for s in &mut ret {
            *s = s.reversed();
        }
        steps.extend(ret);
        let path = EdgePath { start: g.basepoint(), steps };
        debug_assert!(g.is_loop(&path));
        let w = g.loop_to_word(&path);
        match engine.member(&w) {
            Verdict::Member(_) => {}
            Verdict::NotMember(_) => {
                return Err(CoverBallError::UnresolvedQuotient(
                    "homology labels merged distinct lifts: a ball cycle projects outside \
                     the closure (deck group is not abelian)"
                        .into(),
                ));
            }
            Verdict::Unknown => {
                return Err(CoverBallError::UnresolvedQuotient(
                    "homology labels could not be certified: a ball cycle's membership \
                     is undecided within budget"
                        .into(),
                ));
            }
        }
    }
    Ok(())
}

/// Exponent-vector image of a word (used by label schemes and tests).
pub fn label_vector(w: &Word, rank: usize) -> Vec<i128> {
    abelianize(w, rank)
}
