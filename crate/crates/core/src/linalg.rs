//! Exact row reduction over the rationals on sparse vectors.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::Rational;

pub(crate) type SparseVec = BTreeMap<usize, Rational>;

/// A row space kept in reduced row echelon form: every row has pivot entry 1
/// and no other row has a nonzero entry in that column.
#[derive(Debug, Clone, Default)]
pub(crate) struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

fn axpy(v: &mut SparseVec, factor: &Rational, row: &SparseVec) {
    for (col, x) in row {
        let entry = v.entry(*col).or_insert_with(Rational::zero);
        *entry -= factor * x;
        if entry.is_zero() {
            v.remove(col);
        }
    }
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: SparseVec) -> SparseVec {
        for (pivot, row) in &self.rows {
            if let Some(f) = v.get(pivot).cloned() {
                axpy(&mut v, &f, row);
            }
        }
        v
    }

    pub(crate) fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub(crate) fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = self.reduce(v);
        let Some((&pivot, lead)) = v.iter().next() else {
            return false;
        };
        if !lead.is_one() {
            let lead = lead.clone();
            for x in v.values_mut() {
                *x /= &lead;
            }
        }
        for row in self.rows.values_mut() {
            if let Some(f) = row.get(&pivot).cloned() {
                axpy(row, &f, &v);
            }
        }
        self.rows.insert(pivot, v);
        true
    }

    /// Rows ordered by pivot column.
    pub(crate) fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(c, x)| (c, int(x))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(v(&[(0, 2), (1, 4)])));
        assert!(e.insert(v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(v(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&v(&[(0, 1), (1, 2)])));
        assert!(!e.contains(&v(&[(2, 1)])));
        assert!(e.contains(&SparseVec::new()));
    }

    #[test]
    fn rows_are_fully_reduced() {
        let mut e = Echelon::new();
        e.insert(v(&[(0, 1), (1, 1)]));
        e.insert(v(&[(1, 1)]));
        let rows: Vec<_> = e.rows().cloned().collect();
        assert_eq!(rows, vec![v(&[(0, 1)]), v(&[(1, 1)])]);
    }
}
