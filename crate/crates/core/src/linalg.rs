//! Exact sparse linear solves over Q.
//!
//! Equations are added one at a time and reduced against the pivots seen so
//! far; a particular solution (free variables zero) is read off by back
//! substitution.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

pub type SparseRow = BTreeMap<usize, BigRational>;

#[derive(Default)]
pub struct Solver {
    // (pivot column, reduced row with pivot coefficient 1, rhs)
    pivots: Vec<(usize, SparseRow, BigRational)>,
    pivot_of: BTreeMap<usize, usize>,
    inconsistent: bool,
}

impl Solver {
    pub fn new() -> Self {
        Solver::default()
    }

    /// Adds `Σ row[c] x_c = rhs`.
    pub fn add_equation(&mut self, mut row: SparseRow, mut rhs: BigRational) {
        row.retain(|_, v| !v.is_zero());
        // eliminate known pivots; new entries may only appear at non-pivot or
        // later-pivot columns, so one sweep in column order would not suffice
        loop {
            let hit = row.keys().find(|c| self.pivot_of.contains_key(c)).copied();
            let Some(c) = hit else { break };
            let f = row.remove(&c).unwrap();
            let (_, prow, prhs) = &self.pivots[self.pivot_of[&c]];
            for (k, v) in prow {
                if *k == c {
                    continue;
                }
                let e = row.entry(*k).or_insert_with(BigRational::zero);
                *e -= &f * v;
                if e.is_zero() {
                    row.remove(k);
                }
            }
            rhs -= &f * prhs;
        }
        match row.keys().next().copied() {
            None => {
                if !rhs.is_zero() {
                    self.inconsistent = true;
                }
            }
            Some(p) => {
                let inv = row[&p].recip();
                for v in row.values_mut() {
                    *v *= &inv;
                }
                rhs *= inv;
                self.pivot_of.insert(p, self.pivots.len());
                self.pivots.push((p, row, rhs));
            }
        }
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A particular solution over `n` variables, or `None` if inconsistent.
    pub fn solve(&self, n: usize) -> Option<Vec<BigRational>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![BigRational::zero(); n];
        for (p, row, rhs) in self.pivots.iter().rev() {
            let mut v = rhs.clone();
            for (c, a) in row {
                if c != p {
                    v -= a * &x[*c];
                }
            }
            x[*p] = v;
        }
        Some(x)
    }
}

/// Solves `Σ_j x_j cols[j] = target`; rows are arbitrary ordered keys.
pub fn solve_columns<K: Ord + Clone>(
    cols: &[BTreeMap<K, BigRational>],
    target: &BTreeMap<K, BigRational>,
) -> Option<Vec<BigRational>> {
    let mut rows: BTreeMap<K, SparseRow> = BTreeMap::new();
    for (j, col) in cols.iter().enumerate() {
        for (k, v) in col {
            if !v.is_zero() {
                rows.entry(k.clone()).or_default().insert(j, v.clone());
            }
        }
    }
    let mut s = Solver::new();
    for k in target.keys() {
        rows.entry(k.clone()).or_default();
    }
    for (k, row) in rows {
        let rhs = target.get(&k).cloned().unwrap_or_else(BigRational::zero);
        s.add_equation(row, rhs);
        if !s.is_consistent() {
            return None;
        }
    }
    s.solve(cols.len())
}
