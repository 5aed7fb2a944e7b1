//! Bounded coset enumeration for quotients F/⟨⟨relators⟩⟩ of a free group.
//!
//! The enumeration completes exactly when the quotient is finite (within
//! the coset budget); a complete table decides the word problem for the
//! quotient by tracing.  Running out of budget proves nothing.

use crate::word::Word;

const UNDEF: u32 = u32::MAX;

pub enum Enumeration {
    /// Closed table over the live cosets; the quotient has this order.
    Complete(CosetTable),
    /// Budget exhausted; no conclusion.
    OutOfBudget,
}

pub struct CosetTable {
    rank: usize,
    /// next[coset * 2*rank + dir(letter)]: action of each directed letter.
    next: Vec<u32>,
    /// Map from raw coset numbers to dense live numbering.
    live: Vec<u32>,
    pub index: usize,
}

fn dir(letter: i32) -> usize {
    let i = (letter.unsigned_abs() as usize - 1) * 2;
    if letter > 0 { i } else { i + 1 }
}

struct Machine {
    rank: usize,
    next: Vec<u32>,
    rep: Vec<u32>, // union-find over cosets
    queue: Vec<(u32, u32)>,
    n_cosets: usize,
    max_cosets: usize,
}

impl Machine {
    fn new(rank: usize, max_cosets: usize) -> Machine {
        let mut m = Machine {
            rank,
            next: Vec::new(),
            rep: Vec::new(),
            queue: Vec::new(),
            n_cosets: 0,
            max_cosets,
        };
        m.new_coset();
        m
    }

    fn width(&self) -> usize {
        2 * self.rank
    }

    fn new_coset(&mut self) -> Option<u32> {
        if self.n_cosets >= self.max_cosets {
            return None;
        }
        let c = self.n_cosets as u32;
        self.n_cosets += 1;
        self.next.extend(std::iter::repeat(UNDEF).take(self.width()));
        self.rep.push(c);
        Some(c)
    }

    fn find(&mut self, mut c: u32) -> u32 {
        while self.rep[c as usize] != c {
            let up = self.rep[self.rep[c as usize] as usize];
            self.rep[c as usize] = up;
            c = up;
        }
        c
    }

    fn get(&self, c: u32, d: usize) -> u32 {
        self.next[c as usize * self.width() + d]
    }

    fn set(&mut self, c: u32, d: usize, t: u32) {
        let w = self.width();
        self.next[c as usize * w + d] = t;
    }

    fn inv(d: usize) -> usize {
        d ^ 1
    }

    /// Records c·d = t (and t·d⁻¹ = c), queueing a coincidence on clash.
    fn deduce(&mut self, c: u32, d: usize, t: u32) {
        let cur = self.get(c, d);
        if cur == UNDEF {
            self.set(c, d, t);
        } else if self.find(cur) != self.find(t) {
            self.queue.push((cur, t));
        }
        let cur_back = self.get(t, Self::inv(d));
        if cur_back == UNDEF {
            self.set(t, Self::inv(d), c);
        } else if self.find(cur_back) != self.find(c) {
            self.queue.push((cur_back, c));
        }
    }

    fn process_coincidences(&mut self) {
        while let Some((a, b)) = self.queue.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, drop) = if a < b { (a, b) } else { (b, a) };
            self.rep[drop as usize] = keep;
            for d in 0..self.width() {
                let t = self.get(drop, d);
                if t == UNDEF {
                    continue;
                }
                self.set(drop, d, UNDEF);
                let t = self.find(t);
                // Transfer drop·d = t onto keep.
                let k = self.find(keep);
                self.deduce(k, d, t);
            }
        }
    }

    /// Scans relator `r` at coset `c`, filling exactly one gap if needed.
    /// Returns false if a new coset was needed but the budget is spent.
    fn scan_and_fill(&mut self, c: u32, r: &[i32]) -> bool {
        loop {
            let c = self.find(c);
            // Forward pass.
            let mut f = c;
            let mut i = 0;
            while i < r.len() {
                let t = self.get(f, dir(r[i]));
                if t == UNDEF {
                    break;
                }
                f = self.find(t);
                i += 1;
            }
            if i == r.len() {
                if f != c {
                    self.queue.push((f, c));
                    self.process_coincidences();
                }
                return true;
            }
            // Backward pass from the far end.
            let mut b = c;
            let mut j = r.len();
            while j > i {
                let t = self.get(b, Self::inv(dir(r[j - 1])));
                if t == UNDEF {
                    break;
                }
                b = self.find(t);
                j -= 1;
            }
            if j == i {
                // Both passes consumed everything: f·r[i..] = c = b·r[i..]
                // forces f = b because word actions are injective.
                self.queue.push((f, b));
                self.process_coincidences();
                continue;
            }
            if j == i + 1 {
                // One-letter gap: close it with a deduction.
                self.deduce(f, dir(r[i]), b);
                self.process_coincidences();
                continue;
            }
            // Wider gap: define a new coset after f.
            let Some(n) = self.new_coset() else { return false };
            self.deduce(f, dir(r[i]), n);
            self.process_coincidences();
        }
    }
}

/// Enumerates cosets of the trivial subgroup in ⟨rank letters | relators⟩.
pub fn enumerate(rank: usize, relators: &[Word], max_cosets: usize) -> Enumeration {
    let rels: Vec<Vec<i32>> = relators
        .iter()
        .filter(|w| !w.is_empty())
        .map(|w| w.letters().to_vec())
        .collect();
    let mut m = Machine::new(rank, max_cosets);
    // Every letter with no relator still needs its row filled; scanning
    // relators alone never defines those images, so walk letters too.
    let mut alpha: u32 = 0;
    loop {
        if alpha as usize >= m.n_cosets {
            break;
        }
        if m.find(alpha) != alpha {
            alpha += 1;
            continue;
        }
        for r in &rels {
            if !m.scan_and_fill(alpha, r) {
                return Enumeration::OutOfBudget;
            }
            if m.find(alpha) != alpha {
                break;
            }
        }
        if m.find(alpha) == alpha {
            for d in 0..m.width() {
                if m.get(alpha, d) == UNDEF {
                    let Some(n) = m.new_coset() else {
                        return Enumeration::OutOfBudget;
                    };
                    m.deduce(alpha, d, n);
                    m.process_coincidences();
                }
            }
        }
        alpha += 1;
    }
    // Compact to live cosets.
    let mut live_map = vec![UNDEF; m.n_cosets];
    let mut count = 0u32;
    for c in 0..m.n_cosets as u32 {
        if m.find(c) == c {
            live_map[c as usize] = count;
            count += 1;
        }
    }
    let width = m.width();
    let mut next = vec![UNDEF; count as usize * width];
    for c in 0..m.n_cosets as u32 {
        if m.find(c) != c {
            continue;
        }
        for d in 0..width {
            let t = m.get(c, d);
            debug_assert!(t != UNDEF, "complete table has no gaps");
            let t = m.find(t);
            next[live_map[c as usize] as usize * width + d] = live_map[t as usize];
        }
    }
    Enumeration::Complete(CosetTable {
        rank,
        next,
        live: live_map,
        index: count as usize,
    })
}

impl CosetTable {
    /// Coset reached from the identity coset by `w`.
    pub fn trace(&self, w: &Word) -> u32 {
        let mut c = 0u32;
        for &l in w.letters() {
            c = self.next[c as usize * 2 * self.rank + dir(l)];
        }
        c
    }

    /// Does `w` lie in the normal closure of the relators?
    pub fn word_is_trivial(&self, w: &Word) -> bool {
        self.trace(w) == 0
    }

    /// Action of one letter on a live coset.
    pub fn act(&self, c: u32, letter: i32) -> u32 {
        self.next[c as usize * 2 * self.rank + dir(letter)]
    }

    pub fn live_of_raw(&self, raw: u32) -> u32 {
        self.live[raw as usize]
    }
}
