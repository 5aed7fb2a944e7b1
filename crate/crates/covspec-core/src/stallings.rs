//! Folded subgroup graphs for finitely generated subgroups of a free
//! group: exact membership and conjugate-into tests.
//!
//! A subgroup given by finitely many words is represented as a folded
//! labeled graph (the core of the corresponding immersion).  Reading a
//! reduced word from the base vertex decides membership; reading a cyclic
//! word around any vertex decides whether a class is conjugate into the
//! subgroup.

use std::collections::HashMap;

use crate::word::Word;

/// Folded labeled graph.  Vertex 0 is the base.  `next[v][l]` is the
/// endpoint of the edge labeled `l` leaving `v`; edges are stored in both
/// directions (`l` and `-l`).
pub struct FoldedGraph {
    next: Vec<HashMap<i32, usize>>,
}

impl FoldedGraph {
    /// Builds the folded graph of the subgroup generated by `gens`.
    pub fn fold(gens: &[Word]) -> FoldedGraph {
        // Wedge of loops at the base, then identify until no vertex has
        // two same-labeled outgoing edges.
        let mut next: Vec<HashMap<i32, usize>> = vec![HashMap::new()];
        let mut edges: Vec<(usize, i32, usize)> = Vec::new();
        for g in gens {
            let letters = g.letters();
            if letters.is_empty() {
                continue;
            }
            let mut cur = 0usize;
            for (i, &l) in letters.iter().enumerate() {
                let to = if i + 1 == letters.len() {
                    0
                } else {
                    next.push(HashMap::new());
                    next.len() - 1
                };
                edges.push((cur, l, to));
                cur = to;
            }
        }
        // Union-find over vertices.
        let mut rep: Vec<usize> = (0..next.len()).collect();
        fn find(rep: &mut Vec<usize>, mut v: usize) -> usize {
            while rep[v] != v {
                rep[v] = rep[rep[v]];
                v = rep[v];
            }
            v
        }
        // Repeatedly insert all edges; a clash of labels queues a merge.
        loop {
            for m in next.iter_mut() {
                m.clear();
            }
            let mut merge: Option<(usize, usize)> = None;
            'insert: for &(u, l, v) in &edges {
                let (u, v) = (find(&mut rep, u), find(&mut rep, v));
                for (a, l2, b) in [(u, l, v), (v, -l, u)] {
                    match next[a].get(&l2) {
                        Some(&b0) if b0 != b => {
                            merge = Some((b0, b));
                            break 'insert;
                        }
                        _ => {
                            next[a].insert(l2, b);
                        }
                    }
                }
            }
            match merge {
                Some((a, b)) => {
                    let (a, b) = (find(&mut rep, a), find(&mut rep, b));
                    let keep = a.min(b);
                    rep[a.max(b)] = keep;
                }
                None => break,
            }
        }
        // Compact to representative vertices, base first.
        let base = find(&mut rep, 0);
        let mut relabel: HashMap<usize, usize> = HashMap::new();
        relabel.insert(base, 0);
        for v in 0..next.len() {
            if find(&mut rep, v) == v && v != base {
                let n = relabel.len();
                relabel.insert(v, n);
            }
        }
        let mut compact: Vec<HashMap<i32, usize>> = vec![HashMap::new(); relabel.len()];
        for (old, id) in &relabel {
            for (&l, &t) in &next[*old] {
                let t = find(&mut rep, t);
                compact[*id].insert(l, relabel[&t]);
            }
        }
        FoldedGraph { next: compact }
    }

    pub fn n_vertices(&self) -> usize {
        self.next.len()
    }

    /// Reads `w` from `from`; the vertex reached, if every letter exists.
    fn read(&self, from: usize, w: &[i32]) -> Option<usize> {
        let mut cur = from;
        for l in w {
            cur = *self.next[cur].get(l)?;
        }
        Some(cur)
    }

    /// Is `w` an element of the subgroup?
    pub fn contains(&self, w: &Word) -> bool {
        self.read(0, w.letters()) == Some(0)
    }

    /// Is the class of `w` conjugate to an element of the subgroup?  True
    /// exactly when the cyclically reduced core of `w` reads as a closed
    /// path at some vertex of the folded graph.
    pub fn conjugate_into(&self, w: &Word) -> bool {
        let (_, core) = w.cyclic_reduced();
        if core.is_empty() {
            return true;
        }
        (0..self.next.len()).any(|v| self.read(v, core.letters()) == Some(v))
    }
}
