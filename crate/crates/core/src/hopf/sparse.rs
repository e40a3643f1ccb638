//! Compressed sparse tables: a map from a dense key range to sparse vectors.

use crate::field_linalg::{Elem, Field};

/// Sparse vector as (index, nonzero coefficient) pairs sorted by index.
pub type SparseVec = Vec<(u32, Elem)>;

/// Sparse vectors indexed by `0..len`, stored contiguously.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseTable {
    offsets: Vec<u32>,
    idx: Vec<u32>,
    val: Vec<Elem>,
}

impl SparseTable {
    pub fn from_rows<I>(rows: I) -> Self
    where
        I: IntoIterator<Item = SparseVec>,
    {
        let mut offsets = vec![0u32];
        let mut idx = Vec::new();
        let mut val = Vec::new();
        for row in rows {
            for (i, v) in row {
                if v != 0 {
                    idx.push(i);
                    val.push(v);
                }
            }
            offsets.push(idx.len() as u32);
        }
        SparseTable { offsets, idx, val }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nnz(&self) -> usize {
        self.idx.len()
    }

    #[inline]
    pub fn row(&self, key: usize) -> impl Iterator<Item = (usize, Elem)> + '_ {
        let (a, b) = (self.offsets[key] as usize, self.offsets[key + 1] as usize);
        self.idx[a..b]
            .iter()
            .zip(&self.val[a..b])
            .map(|(&i, &v)| (i as usize, v))
    }

    pub fn row_vec(&self, key: usize) -> SparseVec {
        let (a, b) = (self.offsets[key] as usize, self.offsets[key + 1] as usize);
        self.idx[a..b].iter().copied().zip(self.val[a..b].iter().copied()).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = SparseVec> + '_ {
        (0..self.len()).map(|k| self.row_vec(k))
    }

    /// Adds `coef * row(key)` into the dense vector `dst`.
    #[inline]
    pub fn add_row_into(&self, f: &Field, dst: &mut [Elem], key: usize, coef: Elem) {
        if coef == 0 {
            return;
        }
        for (i, v) in self.row(key) {
            dst[i] = f.add(dst[i], f.mul(coef, v));
        }
    }
}

/// Dense vector to sparse form.
pub fn sparsify(v: &[Elem]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| (i as u32, a))
        .collect()
}

pub fn densify(v: &SparseVec, len: usize) -> Vec<Elem> {
    let mut out = vec![0; len];
    for &(i, a) in v {
        out[i as usize] = a;
    }
    out
}

/// Sorts and merges duplicate indices, dropping zeros.
pub fn normalize(f: &Field, mut v: SparseVec) -> SparseVec {
    v.sort_unstable_by_key(|&(i, _)| i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, a) in v {
        match out.last_mut() {
            Some((j, b)) if *j == i => *b = f.add(*b, a),
            _ => out.push((i, a)),
        }
    }
    out.retain(|&(_, a)| a != 0);
    out
}

/// Nonzero entries of a dense vector.
pub fn nonzeros(v: &[Elem]) -> impl Iterator<Item = (usize, Elem)> + '_ {
    v.iter().enumerate().filter(|(_, &a)| a != 0).map(|(i, &a)| (i, a))
}

/// Rank of a list of sparse vectors by sparse elimination.
pub fn sparse_rank(f: &Field, vecs: impl IntoIterator<Item = SparseVec>) -> usize {
    use std::collections::{BTreeMap, HashMap};
    let mut pivots: HashMap<u32, BTreeMap<u32, Elem>> = HashMap::new();
    for v in vecs {
        let mut w: BTreeMap<u32, Elem> = v.into_iter().filter(|&(_, a)| a != 0).collect();
        while let Some((&lead, &a)) = w.iter().next() {
            let Some(p) = pivots.get(&lead) else {
                let inv = f.inv(a);
                let row = w.into_iter().map(|(i, x)| (i, f.mul(x, inv))).collect();
                pivots.insert(lead, row);
                break;
            };
            for (&i, &x) in p {
                let e = w.entry(i).or_insert(0);
                *e = f.sub(*e, f.mul(a, x));
                if *e == 0 {
                    w.remove(&i);
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trip() {
        let rows = vec![vec![(0, 1), (3, 2)], vec![], vec![(1, 4)]];
        let t = SparseTable::from_rows(rows.clone());
        assert_eq!(t.len(), 3);
        assert_eq!(t.rows().collect::<Vec<_>>(), rows);
        let f = Field::prime(5).unwrap();
        let mut d = vec![0; 4];
        t.add_row_into(&f, &mut d, 0, 3);
        assert_eq!(d, vec![3, 0, 0, 1]);
        assert_eq!(normalize(&f, vec![(2, 1), (0, 2), (2, 4)]), vec![(0, 2)]);
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let f = Field::prime(3).unwrap();
        let vecs = vec![vec![(0, 1), (2, 1)], vec![(1, 2)], vec![(0, 2), (1, 1), (2, 2)], vec![]];
        assert_eq!(sparse_rank(&f, vecs), 2);
    }
}
