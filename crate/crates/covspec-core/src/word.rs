//! Freely reduced words over the co-tree letters of a graph.  Letters are
//! nonzero signed integers: +k / -k are the two orientations of letter k
//! (1-based).  Every `Word` is kept reduced.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<i32>);

impl Word {
    /// Builds a word, freely reducing adjacent inverse pairs.
    pub fn new(letters: Vec<i32>) -> Word {
        let mut stack: Vec<i32> = Vec::with_capacity(letters.len());
        for l in letters {
            assert!(l != 0, "letter 0 is not valid");
            if stack.last() == Some(&-l) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word(stack)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word::new(letters)
    }

    /// Largest letter index used (0 for the empty word).
    pub fn max_letter(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Splits into conjugator and cyclically reduced core: self = c k c⁻¹.
    pub fn cyclic_reduced(&self) -> (Word, Word) {
        let mut i = 0;
        let mut j = self.0.len();
        while j > i + 1 && self.0[i] == -self.0[j - 1] {
            i += 1;
            j -= 1;
        }
        (Word(self.0[..i].to_vec()), Word(self.0[i..j].to_vec()))
    }

    /// Canonical representative for the pair of conjugacy classes
    /// {[self], [self⁻¹]}: the least rotation of the cyclically reduced
    /// core or of its inverse, ordering letters by index with positive
    /// before negative so representatives read naturally.
    pub fn canonical_cyclic(&self) -> Word {
        self.cyclic_rotations_both()
            .into_iter()
            .min_by_key(|w| {
                w.0.iter().map(|&l| (l.unsigned_abs(), l < 0)).collect::<Vec<_>>()
            })
            .unwrap_or_else(Word::empty)
    }

    /// All rotations of the cyclically reduced core and of its inverse.
    /// Conjugating by a prefix of the core rotates it, so every rotation is
    /// conjugate to `self`.
    pub fn cyclic_rotations_both(&self) -> Vec<Word> {
        let (_, core) = self.cyclic_reduced();
        let mut out = Vec::new();
        for base in [core.clone(), core.inverse()] {
            let n = base.0.len().max(1);
            for r in 0..n {
                let rot: Vec<i32> =
                    base.0[r..].iter().chain(base.0[..r].iter()).copied().collect();
                let w = Word(rot);
                if !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        out
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{:?}", self.0)
    }
}
