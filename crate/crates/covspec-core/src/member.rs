//! Layered decision procedure for membership in a normal closure.
//!
//! Given generators S inside a free group, decides whether a word lies in
//! ⟨⟨S⟩⟩.  Every `Member`/`NotMember` verdict is certified by the method
//! that produced it: an exact combinatorial rule, a sound abelian
//! obstruction, an explicit product search, or a complete coset
//! enumeration.  `Unknown` is an honest outcome when every bounded layer
//! runs out, never a silent guess.

use std::cell::OnceCell;
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use crate::coset::{enumerate, CosetTable, Enumeration};
use crate::lattice::Lattice;
use crate::word::Word;

/// Which layer of the engine settled the query.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Method {
    /// Empty word, or empty generating set.
    Trivial,
    /// All generators are single letters; membership is exactly "erasing
    /// those letters leaves nothing" (kernel of the retraction that kills
    /// them).
    LetterRule,
    /// Image in the abelianization falls outside the generator lattice;
    /// certifies non-membership only.
    Homology,
    /// An explicit product of conjugates of generators reaching the word
    /// was found by search; certifies membership only.
    Peeling,
    /// Complete coset enumeration of the quotient; exact both ways.
    CosetEnumeration,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Member(Method),
    NotMember(Method),
    Unknown,
}

impl Verdict {
    /// `Some(true)`/`Some(false)` when decided, `None` when unknown.
    pub fn decided(self) -> Option<bool> {
        match self {
            Verdict::Member(_) => Some(true),
            Verdict::NotMember(_) => Some(false),
            Verdict::Unknown => None,
        }
    }

    pub fn is_member(self) -> bool {
        matches!(self, Verdict::Member(_))
    }
}

/// Resource limits for the bounded layers.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Maximum move evaluations performed by the product search (its
    /// total work, not just its stored states).
    pub peel_work: usize,
    /// How far beyond the longer of (word, generator) a search state may
    /// grow.
    pub peel_growth: usize,
    /// Coset cap for the enumeration layer.
    pub max_cosets: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { peel_work: 200_000, peel_growth: 12, max_cosets: 20_000 }
    }
}

/// Reusable decision engine for one generating set.  The abelian lattice
/// is built once; the coset table is attempted at most once and shared by
/// every query.
pub struct MembershipEngine {
    rank: usize,
    /// Cyclically reduced generators, deduplicated up to rotation and
    /// inversion (the normal closure is invariant under both).
    cores: Vec<Word>,
    /// When every core is a single letter: those letter indices.
    kill_set: Option<Vec<i32>>,
    lattice: Lattice,
    /// Every rotation of every core and of its inverse.
    gen_forms: Vec<Word>,
    /// Form indices grouped by first letter, for overlap-guided moves.
    form_index: HashMap<i32, Vec<usize>>,
    budget: Budget,
    table: OnceCell<Option<CosetTable>>,
}

impl MembershipEngine {
    pub fn new(rank: usize, gens: &[Word], budget: Budget) -> MembershipEngine {
        let mut seen = BTreeSet::new();
        let mut cores = Vec::new();
        for g in gens {
            let canon = g.canonical_cyclic();
            if canon.is_empty() {
                continue;
            }
            if seen.insert(canon.clone()) {
                cores.push(canon);
            }
        }
        let kill_set = if cores.iter().all(|c| c.len() == 1) {
            Some(cores.iter().map(|c| c.letters()[0].abs()).collect())
        } else {
            None
        };
        let lattice = Lattice::from_words(&cores, rank);
        let mut gen_forms = Vec::new();
        let mut form_seen = BTreeSet::new();
        for c in &cores {
            for r in c.cyclic_rotations_both() {
                if form_seen.insert(r.clone()) {
                    gen_forms.push(r);
                }
            }
        }
        let mut form_index: HashMap<i32, Vec<usize>> = HashMap::new();
        for (i, r) in gen_forms.iter().enumerate() {
            form_index.entry(r.letters()[0]).or_default().push(i);
        }
        MembershipEngine {
            rank,
            cores,
            kill_set,
            lattice,
            gen_forms,
            form_index,
            budget,
            table: OnceCell::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// When every generator cyclically reduces to a single letter, the
    /// absolute letter values killed; the quotient by the closure is then
    /// exactly the free group on the surviving letters.  `Some(empty)`
    /// when there are no generators at all (nothing is killed).
    pub fn exact_kill_letters(&self) -> Option<&[i32]> {
        self.kill_set.as_deref()
    }

    /// Is `w` in the normal closure of the generators?
    pub fn member(&self, w: &Word) -> Verdict {
        debug_assert!(w.max_letter() <= self.rank, "word outside engine alphabet");
        if w.is_empty() {
            return Verdict::Member(Method::Trivial);
        }
        if self.cores.is_empty() {
            return Verdict::NotMember(Method::Trivial);
        }
        if let Some(kills) = &self.kill_set {
            let residue: Vec<i32> =
                w.letters().iter().copied().filter(|l| !kills.contains(&l.abs())).collect();
            return if Word::new(residue).is_empty() {
                Verdict::Member(Method::LetterRule)
            } else {
                Verdict::NotMember(Method::LetterRule)
            };
        }
        if !self.lattice.contains_word(w) {
            return Verdict::NotMember(Method::Homology);
        }
        if self.peel(w) {
            return Verdict::Member(Method::Peeling);
        }
        match self.coset_table() {
            Some(t) => {
                if t.word_is_trivial(w) {
                    Verdict::Member(Method::CosetEnumeration)
                } else {
                    Verdict::NotMember(Method::CosetEnumeration)
                }
            }
            None => Verdict::Unknown,
        }
    }

    /// Cheap sound refusal: true when the word's abelian image already
    /// falls outside the generator lattice (then it is certainly not a
    /// member).  False concludes nothing.
    pub fn quick_nonmember(&self, w: &Word) -> bool {
        if w.is_empty() {
            return false;
        }
        if self.cores.is_empty() {
            return true;
        }
        if let Some(kills) = &self.kill_set {
            let residue: Vec<i32> =
                w.letters().iter().copied().filter(|l| !kills.contains(&l.abs())).collect();
            return !Word::new(residue).is_empty();
        }
        !self.lattice.contains_word(w)
    }

    fn coset_table(&self) -> Option<&CosetTable> {
        self.table
            .get_or_init(|| match enumerate(self.rank, &self.cores, self.budget.max_cosets) {
                Enumeration::Complete(t) => Some(t),
                Enumeration::OutOfBudget => None,
            })
            .as_ref()
    }

    /// Shortest-first search over conjugacy-class representatives.  A
    /// state stands for the pair of classes {[u], [u⁻¹]}; each move
    /// multiplies a rotation of the state by a rotation of a generator or
    /// its inverse — i.e. by a conjugate of a generator — and only at
    /// positions where at least one letter cancels (products with no
    /// overlap at all are not explored; the enumeration layer backstops
    /// them).  Reaching the empty word exhibits the start as a product of
    /// conjugates of generators: membership, certified.  Exhausting the
    /// budget proves nothing.
    fn peel(&self, w: &Word) -> bool {
        let start = w.canonical_cyclic();
        if start.is_empty() {
            return true;
        }
        let max_core = self.cores.iter().map(Word::len).max().unwrap_or(0);
        let max_len = start.len().max(max_core) + self.budget.peel_growth;
        let mut visited: BTreeSet<Word> = BTreeSet::new();
        let mut queue: BinaryHeap<Reverse<(usize, Word)>> = BinaryHeap::new();
        let mut work = 0usize;
        visited.insert(start.clone());
        queue.push(Reverse((start.len(), start)));
        while let Some(Reverse((_, state))) = queue.pop() {
            for u in state.cyclic_rotations_both() {
                let last = *u.letters().last().expect("states are nonempty");
                let Some(forms) = self.form_index.get(&-last) else { continue };
                for &i in forms {
                    work += 1;
                    if work > self.budget.peel_work {
                        return false;
                    }
                    let canon = u.concat(&self.gen_forms[i]).canonical_cyclic();
                    if canon.is_empty() {
                        return true;
                    }
                    if canon.len() <= max_len && visited.insert(canon.clone()) {
                        queue.push(Reverse((canon.len(), canon)));
                    }
                }
            }
        }
        false
    }
}

/// One-shot convenience wrapper.
pub fn decide(rank: usize, gens: &[Word], w: &Word, budget: Budget) -> Verdict {
    MembershipEngine::new(rank, gens, budget).member(w)
}
