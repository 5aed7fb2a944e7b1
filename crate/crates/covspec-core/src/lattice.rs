//! Integer lattices of abelianized words: sound non-membership
//! certificates.  If the exponent vector of a word lies outside the
//! lattice spanned by the generators' exponent vectors, the word lies
//! outside their normal closure.

use crate::word::Word;

/// Row basis in echelon form: rows sorted by pivot column, pivots
/// positive, one row per pivot column.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<i128>>, // each row's first nonzero column is its pivot
}

pub fn abelianize(w: &Word, rank: usize) -> Vec<i128> {
    let mut v = vec![0i128; rank];
    for &l in w.letters() {
        let i = (l.unsigned_abs() as usize) - 1;
        assert!(i < rank, "letter beyond rank");
        v[i] += if l > 0 { 1 } else { -1 };
    }
    v
}

fn pivot_col(row: &[i128]) -> Option<usize> {
    row.iter().position(|&x| x != 0)
}

impl Lattice {
    pub fn new(dim: usize) -> Lattice {
        Lattice { dim, rows: Vec::new() }
    }

    pub fn from_words(gens: &[Word], rank: usize) -> Lattice {
        let mut l = Lattice::new(rank);
        for g in gens {
            l.insert(abelianize(g, rank));
        }
        l
    }

    pub fn from_vectors(vecs: &[Vec<i128>], dim: usize) -> Lattice {
        let mut l = Lattice::new(dim);
        for v in vecs {
            l.insert(v.clone());
        }
        l
    }

    /// Inserts a vector, restoring echelon form by Euclidean exchanges.
    pub fn insert(&mut self, mut v: Vec<i128>) {
        assert_eq!(v.len(), self.dim);
        let mut at = 0;
        loop {
            let Some(c) = pivot_col(&v) else { return };
            // Find the basis row with this pivot column, if any.
            while at < self.rows.len() {
                match pivot_col(&self.rows[at]) {
                    Some(pc) if pc < c => at += 1,
                    _ => break,
                }
            }
            if at < self.rows.len() && pivot_col(&self.rows[at]) == Some(c) {
                // Euclidean step: reduce v by the row; if a remainder is
                // left, swap roles so the smaller pivot wins.
                let p = self.rows[at][c];
                let q = v[c].div_euclid(p);
                for k in 0..self.dim {
                    let s = self.rows[at][k];
                    v[k] -= q * s;
                }
                if v[c] != 0 {
                    std::mem::swap(&mut self.rows[at], &mut v);
                }
                continue;
            }
            // New pivot column: normalize sign and insert.
            if v[c] < 0 {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
            self.rows.insert(at, v);
            return;
        }
    }

    /// Is `v` an integer combination of the basis?
    pub fn contains(&self, v: &[i128]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for row in &self.rows {
            let c = pivot_col(row).unwrap();
            if v[..c].iter().any(|&x| x != 0) {
                return false;
            }
            if v[c] != 0 {
                if v[c] % row[c] != 0 {
                    return false;
                }
                let q = v[c] / row[c];
                for k in 0..self.dim {
                    v[k] -= q * row[k];
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        self.contains(&abelianize(w, self.dim))
    }

    /// Canonical residue of `v` modulo the lattice: each pivot-column
    /// entry is brought into [0, pivot).  Rows are sorted by pivot column
    /// and every later row is zero in earlier pivot columns, so the
    /// result depends only on the residue class — two vectors reduce
    /// equal iff they differ by a lattice element.
    pub fn reduce(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for row in &self.rows {
            let c = pivot_col(row).unwrap();
            let q = v[c].div_euclid(row[c]);
            if q != 0 {
                for k in 0..self.dim {
                    v[k] -= q * row[k];
                }
            }
        }
        v
    }

    /// Does the lattice equal all of Z^dim?
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim && self.rows.iter().all(|r| {
            let c = pivot_col(r).unwrap();
            r[c] == 1
        })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}
