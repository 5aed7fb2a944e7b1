//! Reference computations, coded in the plainest way possible.

use covspec_core::rat::Rat;
use num::Zero;
use std::collections::BTreeSet;

/// Dense all-pairs shortest paths; `None` = unreachable.
pub fn floyd_warshall(n: usize, edges: &[(usize, usize, Rat)]) -> Vec<Vec<Option<Rat>>> {
    let mut d: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; n];
    for v in 0..n {
        d[v][v] = Some(Rat::zero());
    }
    for &(u, v, len) in edges {
        let better = d[u][v].map_or(true, |cur| len < cur);
        if better {
            d[u][v] = Some(len);
            d[v][u] = Some(len);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(ik), Some(kj)) = (d[i][k], d[k][j]) {
                    if d[i][j].map_or(true, |cur| ik + kj < cur) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

/// Lengths of all cyclically reduced closed walks of length <= cap:
/// exactly the free-homotopy class lengths occurring up to cap.
pub fn brute_class_length_set(
    n: usize,
    edges: &[(usize, usize, Rat)],
    cap: Rat,
) -> BTreeSet<Rat> {
    // Directed arcs: 2e = forward, 2e+1 = backward.
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v, _)) in edges.iter().enumerate() {
        out_arcs[u].push(2 * e);
        out_arcs[v].push(2 * e + 1);
    }
    let head = |arc: usize| {
        let (u, v, _) = edges[arc / 2];
        if arc % 2 == 0 { v } else { u }
    };
    let alen = |arc: usize| edges[arc / 2].2;
    let dist = floyd_warshall(n, edges);
    let mut found = BTreeSet::new();
    struct Dfs<'a> {
        out_arcs: &'a [Vec<usize>],
        edges: &'a [(usize, usize, Rat)],
        dist: &'a [Vec<Option<Rat>>],
        cap: Rat,
        found: &'a mut BTreeSet<Rat>,
    }
    impl Dfs<'_> {
        fn run(&mut self, start: usize, cur: usize, first_arc: usize, last_arc: usize, len: Rat) {
            for &arc in &self.out_arcs[cur] {
                if arc ^ 1 == last_arc {
                    continue;
                }
                let (u, v, l) = self.edges[arc / 2];
                let to = if arc % 2 == 0 { v } else { u };
                let nlen = len + l;
                match self.dist[to][start] {
                    Some(d) if nlen + d <= self.cap => {}
                    _ => continue,
                }
                if to == start && arc ^ 1 != first_arc {
                    self.found.insert(nlen);
                }
                if nlen < self.cap {
                    self.run(start, to, first_arc, arc, nlen);
                }
            }
        }
    }
    for s in 0..n {
        for &arc in &out_arcs[s] {
            let nlen = alen(arc);
            let to = head(arc);
            if let Some(d) = dist[to][s] {
                if nlen + d <= cap {
                    if to == s {
                        found.insert(nlen); // self-loop arc
                    }
                    let mut dfs = Dfs {
                        out_arcs: &out_arcs,
                        edges,
                        dist: &dist,
                        cap,
                        found: &mut found,
                    };
                    if nlen < cap {
                        dfs.run(s, to, arc, arc, nlen);
                    }
                }
            }
        }
    }
    found
}

/// Free reduction of a letter sequence.
pub fn reduce_word(letters: &[i32]) -> Vec<i32> {
    let mut stack: Vec<i32> = Vec::new();
    for &l in letters {
        if stack.last() == Some(&-l) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

/// Membership in the normal closure of a set of single letters: erase all
/// occurrences of the killed letters and check the rest cancels.
pub fn erase_member(word: &[i32], killed_letters: &[u32]) -> bool {
    let rest: Vec<i32> = word
        .iter()
        .copied()
        .filter(|l| !killed_letters.contains(&l.unsigned_abs()))
        .collect();
    reduce_word(&rest).is_empty()
}

/// Exponent vector of a word over `rank` letters.
pub fn abelianize(word: &[i32], rank: usize) -> Vec<i128> {
    let mut v = vec![0i128; rank];
    for &l in word {
        let i = (l.unsigned_abs() as usize) - 1;
        v[i] += if l > 0 { 1 } else { -1 };
    }
    v
}

/// Row Hermite-style reduction: returns (pivot rows, pivot column of each).
fn integer_row_reduce(mut rows: Vec<Vec<i128>>) -> Vec<(usize, Vec<i128>)> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots: Vec<(usize, Vec<i128>)> = Vec::new();
    for c in 0..cols {
        loop {
            let mut cands: Vec<usize> = (0..rows.len())
                .filter(|&r| rows[r][..c].iter().all(|&x| x == 0) && rows[r][c] != 0)
                .collect();
            if cands.is_empty() {
                break;
            }
            cands.sort_by_key(|&r| rows[r][c].abs());
            let best = cands[0];
            if cands.len() == 1 {
                let row = rows.swap_remove(best);
                pivots.push((c, row));
                break;
            }
            let (other, pivot_val) = (cands[1], rows[best][c]);
            let q = rows[other][c] / pivot_val;
            for k in 0..cols {
                let sub = q * rows[best][k];
                rows[other][k] -= sub;
            }
        }
    }
    pivots
}

/// Is `target` an integer combination of `gens`?
pub fn in_integer_span(gens: &[Vec<i128>], target: &[i128]) -> bool {
    let pivots = integer_row_reduce(gens.to_vec());
    let mut t = target.to_vec();
    for (c, row) in &pivots {
        if t[*c] % row[*c] != 0 {
            return false;
        }
        let q = t[*c] / row[*c];
        for k in 0..t.len() {
            t[k] -= q * row[k];
        }
    }
    t.iter().all(|&x| x == 0)
}

/// Do `gens` span all of Z^rank?
pub fn spans_full_lattice(gens: &[Vec<i128>], rank: usize) -> bool {
    (0..rank).all(|i| {
        let mut unit = vec![0i128; rank];
        unit[i] = 1;
        in_integer_span(gens, &unit)
    })
}

/// Bounded search: is `word` a product of at most `max_pieces` conjugates
/// u g^{±1} u^{-1} with |u| <= max_conj over letters 1..=alphabet?
/// Sound and complete only within the bounds; used on tiny cases.
pub fn brute_conjugate_member(
    word: &[i32],
    gens: &[Vec<i32>],
    alphabet: u32,
    max_pieces: usize,
    max_conj: usize,
    max_len: usize,
) -> bool {
    let target = reduce_word(word);
    let mut conjugators: Vec<Vec<i32>> = vec![vec![]];
    let mut frontier: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..max_conj {
        let mut next = Vec::new();
        for u in &frontier {
            for l in 1..=alphabet as i32 {
                for s in [l, -l] {
                    if u.last() == Some(&-s) {
                        continue;
                    }
                    let mut nu = u.clone();
                    nu.push(s);
                    next.push(nu);
                }
            }
        }
        conjugators.extend(next.iter().cloned());
        frontier = next;
    }
    let mut pieces: Vec<Vec<i32>> = Vec::new();
    for g in gens {
        for u in &conjugators {
            for inv in [false, true] {
                let core: Vec<i32> = if inv {
                    g.iter().rev().map(|x| -x).collect()
                } else {
                    g.clone()
                };
                let mut w = u.clone();
                w.extend_from_slice(&core);
                w.extend(u.iter().rev().map(|x| -x));
                let w = reduce_word(&w);
                if !w.is_empty() && !pieces.contains(&w) {
                    pieces.push(w);
                }
            }
        }
    }
    // BFS over products, shortest representatives first.
    let mut seen: BTreeSet<Vec<i32>> = BTreeSet::new();
    let mut layer: Vec<Vec<i32>> = vec![vec![]];
    seen.insert(vec![]);
    for _ in 0..max_pieces {
        let mut next = Vec::new();
        for w in &layer {
            for p in &pieces {
                let mut prod = w.clone();
                prod.extend_from_slice(p);
                let prod = reduce_word(&prod);
                if prod == target {
                    return true;
                }
                if prod.len() <= max_len && seen.insert(prod.clone()) {
                    next.push(prod);
                }
            }
        }
        layer = next;
    }
    target.is_empty()
}
