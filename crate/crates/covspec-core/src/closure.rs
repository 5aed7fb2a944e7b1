//! Collapsing far components and comparing normal closures of loop-class
//! sets.
//!
//! The central reduction: for a set of complement components (each a
//! connected induced subgraph), collapsing every component to a cone
//! point is a quotient by connected subcomplexes, so the induced map on
//! fundamental groups is surjective with kernel exactly the normal
//! closure of the components' own cycle groups.  Membership questions of
//! the form  w ∈ ⟨⟨S ∪ (component cycles)⟩⟩  therefore transfer exactly
//! to  φ(w) ∈ ⟨⟨φ(S)⟩⟩  on the collapsed graph, where plain normal-closure
//! machinery applies.

use std::collections::BTreeSet;

use crate::graph::{ComplementComponent, EdgePath, MetricGraph, Step};
use crate::member::{Budget, MembershipEngine, Verdict};
use crate::word::Word;

/// The quotient of a graph by a family of disjoint connected vertex sets,
/// together with the induced homomorphism on loop words.
pub struct Collapse {
    pub graph: MetricGraph,
    /// External id chosen for each cone point (the least id in its
    /// component).
    pub cone_ids: Vec<i64>,
    /// Original edge index -> quotient edge index; `None` for edges
    /// interior to a component.
    edge_image: Vec<Option<usize>>,
    /// Original internal vertex index -> quotient internal index.
    vertex_image: Vec<usize>,
    /// Image of each original co-tree letter (1-based) as a quotient word.
    phi: Vec<Word>,
}

pub fn collapse_components(g: &MetricGraph, comps: &[ComplementComponent]) -> Collapse {
    let n = g.n_vertices();
    let mut comp_of: Vec<Option<usize>> = vec![None; n];
    let mut cone_ids = Vec::with_capacity(comps.len());
    for (i, c) in comps.iter().enumerate() {
        for &v in &c.vertices {
            debug_assert!(comp_of[v].is_none(), "components must be disjoint");
            comp_of[v] = Some(i);
        }
        cone_ids.push(c.vertices.iter().map(|&v| g.id(v)).min().expect("component is nonempty"));
    }
    // Quotient vertex list: original order, each component contributing
    // its cone exactly once (at the first member encountered).
    let mut vertices: Vec<i64> = Vec::new();
    let mut cone_emitted = vec![false; comps.len()];
    for v in 0..n {
        match comp_of[v] {
            None => vertices.push(g.id(v)),
            Some(i) => {
                if !cone_emitted[i] {
                    cone_emitted[i] = true;
                    vertices.push(cone_ids[i]);
                }
            }
        }
    }
    let quotient_id = |v: usize| match comp_of[v] {
        None => g.id(v),
        Some(i) => cone_ids[i],
    };
    // Edges: drop component-interior ones.  An edge between two distinct
    // components cannot exist (its endpoints would be one component), so
    // no self-loops arise.
    let mut edge_image: Vec<Option<usize>> = vec![None; g.n_edges()];
    let mut edges = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        match (comp_of[edge.u], comp_of[edge.v]) {
            (Some(a), Some(b)) => {
                debug_assert_eq!(a, b, "cross-component edge contradicts connectivity");
            }
            _ => {
                edge_image[e] = Some(edges.len());
                edges.push((quotient_id(edge.u), quotient_id(edge.v), edge.len));
            }
        }
    }
    let base_id = quotient_id(g.basepoint());
    let graph = MetricGraph::new(vertices, edges, Some(base_id))
        .expect("quotient of a connected graph stays connected");
    let vertex_image: Vec<usize> =
        (0..n).map(|v| graph.idx(quotient_id(v)).expect("quotient vertex present")).collect();
    // Image of each letter: push its based loop through the quotient map
    // (interior edges vanish; their endpoints agree in the quotient) and
    // read the resulting word.
    let mut phi = Vec::with_capacity(g.rank());
    for l in 1..=g.rank() as i32 {
        let p = g.word_to_loop(&Word::new(vec![l]));
        let steps: Vec<Step> = p
            .steps
            .iter()
            .filter_map(|s| edge_image[s.edge].map(|e| Step { edge: e, forward: s.forward }))
            .collect();
        let mapped = EdgePath { start: vertex_image[p.start], steps };
        phi.push(graph.loop_to_word(&mapped));
    }
    Collapse { graph, cone_ids, edge_image, vertex_image, phi }
}

impl Collapse {
    /// Applies the induced homomorphism to a loop word.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::empty();
        for &l in w.letters() {
            let img = &self.phi[(l.unsigned_abs() as usize) - 1];
            out = if l > 0 { out.concat(img) } else { out.concat(&img.inverse()) };
        }
        out
    }

    pub fn letter_image(&self, l: usize) -> &Word {
        &self.phi[l - 1]
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertex_image[v]
    }

    pub fn edge_image(&self, e: usize) -> Option<usize> {
        self.edge_image[e]
    }
}

/// Decides membership in ⟨⟨gens ∪ (cycle groups of the given components)⟩⟩
/// by working on the collapsed graph, where the component cycles are
/// exactly the kernel.
pub struct CutoffOracle {
    collapse: Collapse,
    engine: MembershipEngine,
}

impl CutoffOracle {
    pub fn new(
        g: &MetricGraph,
        comps: &[ComplementComponent],
        gens: &[Word],
        budget: Budget,
    ) -> CutoffOracle {
        let collapse = collapse_components(g, comps);
        let mapped: Vec<Word> = gens.iter().map(|w| collapse.apply(w)).collect();
        let engine = MembershipEngine::new(collapse.graph.rank(), &mapped, budget);
        CutoffOracle { collapse, engine }
    }

    pub fn member(&self, w: &Word) -> Verdict {
        self.engine.member(&self.collapse.apply(w))
    }

    pub fn collapse(&self) -> &Collapse {
        &self.collapse
    }
}

/// Canonical conjugacy-class representatives of a word list, with trivial
/// classes dropped.
pub fn canonical_class_set(words: &[Word]) -> BTreeSet<Word> {
    words.iter().map(Word::canonical_cyclic).filter(|w| !w.is_empty()).collect()
}

/// Outcome of comparing ⟨⟨small⟩⟩ with ⟨⟨big⟩⟩ for small ⊆ big.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CoverRelation {
    Equal,
    /// The closures differ; the word is a member of the big set outside
    /// the small closure.
    Differ(Word),
    /// Some memberships could not be decided within budget (the listed
    /// words); no difference was certified.
    Undecided(Vec<Word>),
}

/// Compares the normal closures of two class sets with `small ⊆ big` (as
/// canonical classes).  Exact whenever every membership query resolves.
pub fn compare_closures(rank: usize, small: &[Word], big: &[Word], budget: Budget) -> CoverRelation {
    let small_set = canonical_class_set(small);
    let big_set = canonical_class_set(big);
    debug_assert!(small_set.is_subset(&big_set), "comparison requires nested class sets");
    let extras: Vec<&Word> = big_set.difference(&small_set).collect();
    if extras.is_empty() {
        return CoverRelation::Equal;
    }
    let small_vec: Vec<Word> = small_set.iter().cloned().collect();
    let engine = MembershipEngine::new(rank, &small_vec, budget);
    let mut undecided = Vec::new();
    for w in extras {
        match engine.member(w) {
            Verdict::NotMember(_) => return CoverRelation::Differ(w.clone()),
            Verdict::Unknown => undecided.push(w.clone()),
            Verdict::Member(_) => {}
        }
    }
    if undecided.is_empty() {
        CoverRelation::Equal
    } else {
        CoverRelation::Undecided(undecided)
    }
}
