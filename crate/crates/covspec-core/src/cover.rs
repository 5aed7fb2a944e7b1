//! Presentations of delta-covers and their cut-off variants.
//!
//! A cover is described by the normal subgroup its deck group quotients
//! out: the closure of the listed generators.  Two generator origins
//! occur: free-homotopy classes short enough to fit in an open delta-ball
//! (length < 2*delta), and — for the cut-off variant — a free basis of the
//! cycle group of each component lying outside the closed ball around the
//! chosen center, conjugated into the based group along a fixed shortest
//! connecting path.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use crate::closure::{canonical_class_set, CoverRelation, CutoffOracle};
use crate::graph::{
    ComplementComponent, EdgePath, EnumerationOverflow, MetricGraph, Step,
};
use crate::member::{Budget, MembershipEngine, Verdict};
use crate::rat::{rat, Rat};
use crate::word::Word;

/// Where a normal-subgroup generator came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenOrigin {
    /// A class of length < 2*delta (fits in an open delta-ball).
    BallClass,
    /// A cycle of the complement component with the given index.
    OutsideLoop { component: usize },
}

/// One generator of the quotiented normal subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalGen {
    pub word: Word,
    /// Exact length of the generator's free-homotopy class.
    pub length: Rat,
    pub origin: GenOrigin,
}

/// Cut-off parameters: loops surviving only beyond the closed ball
/// B(center, radius) are also quotiented out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutoffParams {
    /// Internal vertex index of the ball center.
    pub center: usize,
    pub radius: Rat,
}

/// Generating data of the normal subgroup defining one cover.
#[derive(Clone, Debug)]
pub struct ClosurePresentation {
    /// Rank of the ambient free group.
    pub rank: usize,
    pub delta: Rat,
    pub cutoff: Option<CutoffParams>,
    pub gens: Vec<NormalGen>,
}

impl ClosurePresentation {
    pub fn ball_words(&self) -> Vec<Word> {
        self.gens
            .iter()
            .filter(|g| g.origin == GenOrigin::BallClass)
            .map(|g| g.word.clone())
            .collect()
    }

    pub fn outside_words(&self) -> Vec<Word> {
        self.gens
            .iter()
            .filter(|g| matches!(g.origin, GenOrigin::OutsideLoop { .. }))
            .map(|g| g.word.clone())
            .collect()
    }

    pub fn all_words(&self) -> Vec<Word> {
        self.gens.iter().map(|g| g.word.clone()).collect()
    }
}

/// Presentation of the delta-cover: generators are all classes of length
/// strictly below 2*delta, in (length, word) order.
pub fn delta_closure(
    g: &MetricGraph,
    delta: Rat,
    class_bound: usize,
) -> Result<ClosurePresentation, EnumerationOverflow> {
    let two_delta = rat(2, 1) * delta;
    let classes = g.enumerate_classes_bounded(two_delta, class_bound)?;
    let gens = classes
        .into_iter()
        .filter(|c| c.length < two_delta)
        .map(|c| NormalGen { word: c.word, length: c.length, origin: GenOrigin::BallClass })
        .collect();
    Ok(ClosurePresentation { rank: g.rank(), delta, cutoff: None, gens })
}

/// A free basis of the image of the component's cycle group in the based
/// fundamental group.  Each basis element is: the spanning-tree path from
/// the basepoint to the component's anchor (its least-external-id vertex
/// — a shortest connecting path, since the ambient tree is a shortest-path
/// tree), a path inside the component, one non-tree component edge, and
/// the same paths back.  The basis and its order are deterministic.
pub fn component_cycle_words(g: &MetricGraph, comp: &ComplementComponent) -> Vec<Word> {
    if comp.vertices.is_empty() {
        return Vec::new();
    }
    let anchor = *comp
        .vertices
        .iter()
        .min_by_key(|&&v| g.id(v))
        .expect("component has vertices");

    // Breadth-first spanning tree of the component, edges in ascending
    // index order.
    let mut edges_sorted = comp.edges.clone();
    edges_sorted.sort_unstable();
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for &e in &edges_sorted {
        let edge = g.edge(e);
        incident.entry(edge.u).or_default().push(e);
        if edge.v != edge.u {
            incident.entry(edge.v).or_default().push(e);
        }
    }
    let mut parent_step: HashMap<usize, Step> = HashMap::new();
    let mut visited: HashSet<usize> = HashSet::new();
    visited.insert(anchor);
    let mut tree_edges: HashSet<usize> = HashSet::new();
    let mut queue = VecDeque::new();
    queue.push_back(anchor);
    while let Some(v) = queue.pop_front() {
        for &e in incident.get(&v).into_iter().flatten() {
            let edge = g.edge(e);
            let (to, forward) = if edge.u == v { (edge.v, true) } else { (edge.u, false) };
            if visited.insert(to) {
                tree_edges.insert(e);
                parent_step.insert(to, Step { edge: e, forward });
                queue.push_back(to);
            }
        }
    }

    // Path anchor -> v through the component tree.
    let comp_path = |mut v: usize| -> Vec<Step> {
        let mut back = Vec::new();
        while v != anchor {
            let s = parent_step[&v];
            let (tail, _) = g.step_ends(s);
            back.push(s);
            v = tail;
        }
        back.reverse();
        back
    };

    let connect = g.tree_path(g.basepoint(), anchor);
    let mut words = Vec::new();
    for &e in &edges_sorted {
        if tree_edges.contains(&e) {
            continue;
        }
        let edge = g.edge(e);
        let mut steps = connect.steps.clone();
        steps.extend(comp_path(edge.u));
        steps.push(Step { edge: e, forward: true });
        let mut ret = comp_path(edge.v);
        ret.reverse();
        steps.extend(ret.iter().map(|s| s.reversed()));
        steps.extend(g.tree_path(anchor, g.basepoint()).steps);
        let path = EdgePath { start: g.basepoint(), steps };
        debug_assert!(g.validate_path(&path).is_ok());
        let w = g.loop_to_word(&path);
        debug_assert!(!w.is_empty(), "a non-tree component edge closes a cycle");
        words.push(w);
    }
    words
}

/// Presentation of the cut-off cover at (delta, center, radius): ball
/// classes plus a free basis of every outside component's cycle group.
pub fn cutoff_closure(
    g: &MetricGraph,
    delta: Rat,
    center: usize,
    radius: Rat,
    class_bound: usize,
) -> Result<ClosurePresentation, EnumerationOverflow> {
    let mut p = delta_closure(g, delta, class_bound)?;
    p.cutoff = Some(CutoffParams { center, radius });
    for (ci, comp) in g.complement_components(center, radius).iter().enumerate() {
        for w in component_cycle_words(g, comp) {
            let length = g.class_length(&w);
            p.gens.push(NormalGen { word: w, length, origin: GenOrigin::OutsideLoop { component: ci } });
        }
    }
    Ok(p)
}

/// Membership engine for the closure of a presentation.  Cut-off
/// presentations collapse the outside components first, which turns their
/// cycle groups into the kernel and keeps every query exact-friendly.
pub enum ClosureEngine {
    Plain(MembershipEngine),
    Cut(CutoffOracle),
}

impl ClosureEngine {
    pub fn new(g: &MetricGraph, p: &ClosurePresentation, budget: Budget) -> ClosureEngine {
        match p.cutoff {
            Some(c) => {
                let comps = g.complement_components(c.center, c.radius);
                ClosureEngine::Cut(CutoffOracle::new(g, &comps, &p.ball_words(), budget))
            }
            None => ClosureEngine::Plain(MembershipEngine::new(p.rank, &p.all_words(), budget)),
        }
    }

    pub fn member(&self, w: &Word) -> Verdict {
        match self {
            ClosureEngine::Plain(e) => e.member(w),
            ClosureEngine::Cut(o) => o.member(w),
        }
    }
}

/// Result of comparing two covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverComparison {
    pub relation: CoverRelation,
    /// Generators of the coarser side that needed an engine query.
    pub queried: usize,
    /// Generators skipped because they appear verbatim on the finer side.
    pub skipped: usize,
}

/// Compares the covers of two presentations with closure(fine) ⊆
/// closure(coarse) — e.g. same space with delta_fine <= delta_coarse, or
/// radius_fine >= radius_coarse.  `Equal` means the covers coincide;
/// `Differ(w)` exhibits a class quotiented by the coarse cover but alive
/// in the fine one.
pub fn compare_covers(
    g: &MetricGraph,
    fine: &ClosurePresentation,
    coarse: &ClosurePresentation,
    budget: Budget,
) -> CoverComparison {
    let fine_set = canonical_class_set(&fine.all_words());
    let engine = ClosureEngine::new(g, fine, budget);
    let mut queried = 0;
    let mut skipped = 0;
    let mut undecided = Vec::new();
    let mut seen = HashSet::new();
    for gen in &coarse.gens {
        let canon = gen.word.canonical_cyclic();
        if canon.is_empty() || fine_set.contains(&canon) || !seen.insert(canon) {
            skipped += 1;
            continue;
        }
        queried += 1;
        match engine.member(&gen.word) {
            Verdict::NotMember(_) => {
                return CoverComparison {
                    relation: CoverRelation::Differ(gen.word.clone()),
                    queried,
                    skipped,
                };
            }
            Verdict::Unknown => undecided.push(gen.word.clone()),
            Verdict::Member(_) => {}
        }
    }
    let relation = if undecided.is_empty() {
        CoverRelation::Equal
    } else {
        CoverRelation::Undecided(undecided)
    };
    CoverComparison { relation, queried, skipped }
}

/// Does the cut-off cover at (delta, center, radius) unroll the class of
/// `w`?  `Member` means no: the class is quotiented out (it either fits in
/// delta-balls or escapes past the radius), so the loop is trivial in the
/// cut-off cover.
pub fn is_cut_trivial(
    g: &MetricGraph,
    w: &Word,
    delta: Rat,
    center: usize,
    radius: Rat,
    budget: Budget,
    class_bound: usize,
) -> Result<Verdict, EnumerationOverflow> {
    let p = cutoff_closure(g, delta, center, radius, class_bound)?;
    let engine = ClosureEngine::new(g, &p, budget);
    Ok(engine.member(w))
}

/// One factor of a decomposition: conjugator * class_word^(±1) * conjugator⁻¹.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub conjugator: Word,
    pub class_word: Word,
    pub inverted: bool,
}

impl Factor {
    pub fn as_word(&self) -> Word {
        let core = if self.inverted { self.class_word.inverse() } else { self.class_word.clone() };
        self.conjugator.concat(&core).concat(&self.conjugator.inverse())
    }
}

/// A verified factorization into conjugates of short classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub factors: Vec<Factor>,
}

impl Decomposition {
    /// Product of the factors in order; equals the input word exactly.
    pub fn product(&self) -> Word {
        self.factors.iter().fold(Word::empty(), |acc, f| acc.concat(&f.as_word()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecomposeResult {
    Decomposed(Decomposition),
    /// No factorization found within the work budget.  Sound in one
    /// direction only: the word may still lie in the closure.
    NotFound { work_spent: usize },
}

/// A rotation of a class word or its inverse, with enough provenance to
/// rebuild the conjugation: word = prefix⁻¹ * class^(sign) * prefix.
struct FormInfo {
    word: Word,
    class_idx: usize,
    inverted: bool,
    prefix: Word,
}

/// Writes the class of `w` as an explicit product of conjugates of
/// classes of length < 2*delta.  The returned factor list multiplies out
/// to `w` exactly (not only up to conjugacy); `Decomposition::product`
/// re-verifies this.  Search is shortest-first over conjugacy classes
/// with cancellation-guided moves, so the certificate exists whenever the
/// search succeeds — a `NotFound` is a budget statement, not a proof of
/// non-membership.
pub fn ball_loop_decompose(
    g: &MetricGraph,
    delta: Rat,
    w: &Word,
    budget: Budget,
    class_bound: usize,
) -> Result<DecomposeResult, EnumerationOverflow> {
    let two_delta = rat(2, 1) * delta;
    let classes = g.enumerate_classes_bounded(two_delta, class_bound)?;
    let cores: Vec<Word> = classes
        .into_iter()
        .filter(|c| c.length < two_delta)
        .map(|c| c.word)
        .collect();
    Ok(decompose_words(w, &cores, budget))
}

/// Factorization of `w` over conjugates of the given cyclically reduced
/// generator words.
pub fn decompose_words(w: &Word, cores: &[Word], budget: Budget) -> DecomposeResult {
    for c in cores {
        debug_assert_eq!(
            c.cyclic_reduced().1.len(),
            c.len(),
            "decomposition generators must be cyclically reduced"
        );
    }
    // All rotations of every core and its inverse, with provenance.
    let mut forms: Vec<FormInfo> = Vec::new();
    let mut form_seen: HashSet<Vec<i32>> = HashSet::new();
    for (ci, core) in cores.iter().enumerate() {
        for inverted in [false, true] {
            let base = if inverted { core.inverse() } else { core.clone() };
            for k in 0..base.len() {
                let rotated: Vec<i32> = base.letters()[k..]
                    .iter()
                    .chain(base.letters()[..k].iter())
                    .copied()
                    .collect();
                if !form_seen.insert(rotated.clone()) {
                    continue;
                }
                forms.push(FormInfo {
                    word: Word::new(rotated),
                    class_idx: ci,
                    inverted,
                    prefix: Word::new(base.letters()[..k].to_vec()),
                });
            }
        }
    }
    let mut form_index: HashMap<i32, Vec<usize>> = HashMap::new();
    for (i, f) in forms.iter().enumerate() {
        if let Some(&first) = f.word.letters().first() {
            form_index.entry(first).or_default().push(i);
        }
    }

    struct Node {
        /// Cyclically reduced current word.
        word: Word,
        /// input = conj * word * conj⁻¹ * (product of factors up the chain).
        conj: Word,
        parent: Option<(usize, Factor)>,
    }

    let (c0, core0) = w.cyclic_reduced();
    if core0.is_empty() {
        return DecomposeResult::Decomposed(Decomposition { factors: Vec::new() });
    }
    let max_core = cores.iter().map(Word::len).max().unwrap_or(0);
    let max_len = core0.len().max(max_core) + budget.peel_growth;

    let mut nodes = vec![Node { word: core0.clone(), conj: c0, parent: None }];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();
    heap.push(Reverse((core0.len(), 0)));
    let mut visited: HashSet<Word> = HashSet::new();
    visited.insert(core0.canonical_cyclic());
    let mut work = 0usize;

    while let Some(Reverse((_, ni))) = heap.pop() {
        let state = nodes[ni].word.clone();
        let conj = nodes[ni].conj.clone();
        for r in 0..state.len() {
            let rotated: Vec<i32> = state.letters()[r..]
                .iter()
                .chain(state.letters()[..r].iter())
                .copied()
                .collect();
            let u = Word::new(rotated);
            let last = *u.letters().last().expect("state is nonempty");
            let sigma = Word::new(state.letters()[..r].to_vec());
            // conj * state * conj⁻¹ = (conj*sigma) * u * (conj*sigma)⁻¹.
            let c1 = conj.concat(&sigma);
            let Some(matching) = form_index.get(&-last) else { continue };
            for &fi in matching {
                work += 1;
                if work > budget.peel_work {
                    return DecomposeResult::NotFound { work_spent: work };
                }
                let f = &forms[fi];
                let t0 = u.concat(&f.word);
                if t0.len() > max_len {
                    continue;
                }
                let factor = Factor {
                    conjugator: c1.concat(&f.prefix.inverse()),
                    class_word: cores[f.class_idx].clone(),
                    // The move multiplies by the form, so the factor is
                    // its inverse.
                    inverted: !f.inverted,
                };
                let (ct, tcore) = t0.cyclic_reduced();
                if tcore.is_empty() {
                    // input = product of this factor then the chain's.
                    let mut factors = vec![factor];
                    let mut cur = ni;
                    while let Some((p, f)) = &nodes[cur].parent {
                        factors.push(f.clone());
                        cur = *p;
                    }
                    let d = Decomposition { factors };
                    assert_eq!(d.product(), *w, "factor bookkeeping must reproduce the input");
                    return DecomposeResult::Decomposed(d);
                }
                let key = tcore.canonical_cyclic();
                if !visited.insert(key) {
                    continue;
                }
                let c2 = c1.concat(&ct);
                nodes.push(Node { word: tcore.clone(), conj: c2, parent: Some((ni, factor)) });
                heap.push(Reverse((tcore.len(), nodes.len() - 1)));
            }
        }
    }
    DecomposeResult::NotFound { work_spent: work }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    /// Cycle graph C_n with unit edges.
    fn cycle(n: i64) -> MetricGraph {
        let verts: Vec<i64> = (0..n).collect();
        let edges: Vec<(i64, i64, Rat)> =
            (0..n).map(|i| (i, (i + 1) % n, rat(1, 1))).collect();
        MetricGraph::new(verts, edges, Some(0)).unwrap()
    }

    /// Wedge of circles with the given unit-edge circumferences, joined at 0.
    fn wedge(sizes: &[i64]) -> MetricGraph {
        let mut verts = vec![0i64];
        let mut edges = Vec::new();
        let mut next = 1i64;
        for &n in sizes {
            let mut prev = 0i64;
            for _ in 1..n {
                verts.push(next);
                edges.push((prev, next, rat(1, 1)));
                prev = next;
                next += 1;
            }
            edges.push((prev, 0, rat(1, 1)));
        }
        MetricGraph::new(verts, edges, Some(0)).unwrap()
    }

    #[test]
    fn delta_closure_lists_short_classes_in_order() {
        let g = wedge(&[6, 10]);
        // delta = 3.5: only the 6-circle (length 6 < 7) qualifies.
        let p = delta_closure(&g, rat(7, 2), 10_000).unwrap();
        assert_eq!(p.gens.len(), 1);
        assert_eq!(p.gens[0].length, rat(6, 1));
        assert_eq!(p.gens[0].origin, GenOrigin::BallClass);
        // delta = 3: nothing is strictly shorter than 6.
        let p = delta_closure(&g, rat(3, 1), 10_000).unwrap();
        assert!(p.gens.is_empty());
        // delta = 8.5: class lengths strictly below 17 are 6 (a), 10 (b),
        // 12 (a²), and twice 16 (ab and ab⁻¹ are distinct classes).
        let p = delta_closure(&g, rat(17, 2), 10_000).unwrap();
        let lengths: Vec<Rat> = p.gens.iter().map(|g| g.length).collect();
        assert_eq!(lengths, vec![rat(6, 1), rat(10, 1), rat(12, 1), rat(16, 1), rat(16, 1)]);
    }

    #[test]
    fn outside_basis_spans_component_cycles() {
        // C6 with basepoint 0; ball of radius 1 around 0 leaves vertices
        // {2,3,4} and edges 2-3, 3-4: a tree, no cycles.
        let g = cycle(6);
        let comps = g.complement_components(0, rat(1, 1));
        assert_eq!(comps.len(), 1);
        assert!(component_cycle_words(&g, &comps[0]).is_empty());
    }

    #[test]
    fn outside_basis_on_a_far_circle() {
        // Path 0-1-2 with a triangle 2-3-4-2 at the end; radius 1 around 0
        // leaves the triangle (and vertex 2) as one component with a cycle.
        let verts: Vec<i64> = vec![0, 1, 2, 3, 4];
        let edges: Vec<(i64, i64, Rat)> = vec![
            (0, 1, rat(1, 1)),
            (1, 2, rat(1, 1)),
            (2, 3, rat(1, 1)),
            (3, 4, rat(1, 1)),
            (4, 2, rat(1, 1)),
        ];
        let g = MetricGraph::new(verts, edges, Some(0)).unwrap();
        let comps = g.complement_components(0, rat(1, 1));
        assert_eq!(comps.len(), 1);
        let words = component_cycle_words(&g, &comps[0]);
        assert_eq!(words.len(), 1);
        // The only cycle class: the triangle; its class length is 3.
        assert_eq!(g.class_length(&words[0]), rat(3, 1));
        // The word generates the whole fundamental group here (rank 1).
        assert_eq!(g.rank(), 1);
        assert_eq!(words[0].len(), 1);
    }

    #[test]
    fn circle_complements_are_arcs_without_outside_loops() {
        // On a wedge every ball complement is a disjoint union of arcs, so
        // the cut-off closure never gains outside generators.
        let g = wedge(&[6, 10]);
        let p = cutoff_closure(&g, rat(1, 1), g.basepoint(), rat(2, 1), 10_000).unwrap();
        assert!(p.ball_words().is_empty());
        assert!(p.outside_words().is_empty());
    }

    #[test]
    fn cutoff_closure_collapse_kills_outside_generators() {
        use crate::closure::collapse_components;
        // Path 0-1-2 with a triangle 2-3-4-2: radius 1 leaves the triangle
        // outside, so its cycle shows up as an outside generator.
        let verts: Vec<i64> = vec![0, 1, 2, 3, 4];
        let edges: Vec<(i64, i64, Rat)> = vec![
            (0, 1, rat(1, 1)),
            (1, 2, rat(1, 1)),
            (2, 3, rat(1, 1)),
            (3, 4, rat(1, 1)),
            (4, 2, rat(1, 1)),
        ];
        let g = MetricGraph::new(verts, edges, Some(0)).unwrap();
        let radius = rat(1, 1);
        let p = cutoff_closure(&g, rat(1, 1), g.basepoint(), radius, 10_000).unwrap();
        assert!(p.ball_words().is_empty());
        let outside = p.outside_words();
        assert_eq!(outside.len(), 1);
        assert_eq!(
            p.gens[0].origin,
            GenOrigin::OutsideLoop { component: 0 },
        );
        assert_eq!(p.gens[0].length, rat(3, 1));
        let comps = g.complement_components(g.basepoint(), radius);
        let collapse = collapse_components(&g, &comps);
        for w in &outside {
            assert!(collapse.apply(w).is_empty(), "outside generators lie in the collapse kernel");
        }
    }

    #[test]
    fn compare_covers_across_radii() {
        // Path 0-1-2 with triangle at far end (see above): the triangle
        // class dies under a small radius but survives a large one.
        let verts: Vec<i64> = vec![0, 1, 2, 3, 4];
        let edges: Vec<(i64, i64, Rat)> = vec![
            (0, 1, rat(1, 1)),
            (1, 2, rat(1, 1)),
            (2, 3, rat(1, 1)),
            (3, 4, rat(1, 1)),
            (4, 2, rat(1, 1)),
        ];
        let g = MetricGraph::new(verts, edges, Some(0)).unwrap();
        let delta = rat(1, 1);
        // radius 10: complement empty; radius 1: triangle outside.
        let fine = cutoff_closure(&g, delta, 0, rat(10, 1), 10_000).unwrap();
        let coarse = cutoff_closure(&g, delta, 0, rat(1, 1), 10_000).unwrap();
        let cmp = compare_covers(&g, &fine, &coarse, Budget::default());
        match cmp.relation {
            CoverRelation::Differ(w) => assert_eq!(g.class_length(&w), rat(3, 1)),
            other => panic!("expected Differ, got {other:?}"),
        }
        // Same parameters on both sides: equal.
        let cmp = compare_covers(&g, &coarse, &coarse, Budget::default());
        assert_eq!(cmp.relation, CoverRelation::Equal);
        assert_eq!(cmp.queried, 0);
    }

    #[test]
    fn cut_triviality_of_a_mid_cylinder_circle() {
        // A long path with a triangle in the middle, basepoint at one end:
        // the triangle escapes no ball that contains it.  Contrast with a
        // triangle beyond the radius, which is cut away.
        let verts: Vec<i64> = vec![0, 1, 2, 3, 4, 5];
        let edges: Vec<(i64, i64, Rat)> = vec![
            (0, 1, rat(1, 1)),
            (1, 2, rat(1, 1)),
            (2, 3, rat(1, 1)),
            (3, 4, rat(1, 1)),
            (4, 2, rat(1, 1)),
            (4, 5, rat(1, 1)),
        ];
        let g = MetricGraph::new(verts, edges, Some(0)).unwrap();
        let tri = Word::new(vec![1]);
        // Small delta, radius 1: triangle is outside the ball, so cut off.
        let v = is_cut_trivial(&g, &tri, rat(1, 2), 0, rat(1, 1), Budget::default(), 10_000)
            .unwrap();
        assert!(v.is_member());
        // Radius 10: complement empty, delta small: the class survives.
        let v = is_cut_trivial(&g, &tri, rat(1, 2), 0, rat(10, 1), Budget::default(), 10_000)
            .unwrap();
        assert_eq!(v.decided(), Some(false));
    }

    #[test]
    fn decompose_short_class_is_single_factor() {
        let g = wedge(&[6, 10]);
        // Class of the 6-circle at delta 3.5.
        let w = Word::new(vec![1]);
        let r = ball_loop_decompose(&g, rat(7, 2), &w, Budget::default(), 10_000).unwrap();
        match r {
            DecomposeResult::Decomposed(d) => {
                assert_eq!(d.factors.len(), 1);
                assert_eq!(d.product(), w);
            }
            other => panic!("expected decomposition, got {other:?}"),
        }
    }

    #[test]
    fn decompose_product_of_conjugates() {
        let g = wedge(&[6, 10]);
        // w = (b a b⁻¹) a: in the closure of {a} (class length 6 < 7).
        let w = Word::new(vec![2, 1, -2, 1]);
        let r = ball_loop_decompose(&g, rat(7, 2), &w, Budget::default(), 10_000).unwrap();
        match r {
            DecomposeResult::Decomposed(d) => {
                assert_eq!(d.product(), w);
                for f in &d.factors {
                    assert_eq!(f.class_word, Word::new(vec![1]));
                    assert!(g.class_length(&f.class_word) < rat(7, 1));
                }
            }
            other => panic!("expected decomposition, got {other:?}"),
        }
    }

    #[test]
    fn decompose_rejects_outside_class_within_budget() {
        let g = wedge(&[6, 10]);
        // The 10-circle is not in the closure of the 6-circle.
        let w = Word::new(vec![2]);
        let r = ball_loop_decompose(&g, rat(7, 2), &w, Budget::default(), 10_000).unwrap();
        assert!(matches!(r, DecomposeResult::NotFound { .. }));
    }

    #[test]
    fn decompose_trivial_word() {
        let g = wedge(&[6, 10]);
        let r = ball_loop_decompose(&g, rat(1, 1), &Word::empty(), Budget::default(), 10_000)
            .unwrap();
        match r {
            DecomposeResult::Decomposed(d) => assert!(d.factors.is_empty()),
            other => panic!("expected empty decomposition, got {other:?}"),
        }
    }
}
