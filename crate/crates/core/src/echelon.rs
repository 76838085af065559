//! Reduced row echelon forms of sparse row families.
//!
//! The exact path is fraction-free: every input row is scaled to a primitive
//! integer row, elimination forms `a·r − b·p` over big integers and divides by
//! the row content after each step, and only the finished echelon form is
//! normalised into rationals. The float path selects independent rows by
//! modified Gram–Schmidt and then runs Gauss–Jordan with partial pivoting on
//! the compacted columns.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Rational, Scalar, FLOAT_PIVOT_TOL};

/// Sparse row: `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow<S> = Vec<(u64, S)>;

#[derive(Clone, Debug, PartialEq)]
pub struct Echelon<S> {
    rows: Vec<SparseRow<S>>,
    pivots: Vec<u64>,
    independent: Vec<usize>,
}

impl<S: Scalar> Echelon<S> {
    pub fn new(rows: Vec<SparseRow<S>>) -> Self {
        S::echelon(rows)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Rows of the reduced echelon form; row `i` has a leading `1` at `pivots()[i]`.
    pub fn rows(&self) -> &[SparseRow<S>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<SparseRow<S>> {
        self.rows
    }

    pub fn pivots(&self) -> &[u64] {
        &self.pivots
    }

    /// Indices of input rows that raised the rank when scanned in input order.
    pub fn independent(&self) -> &[usize] {
        &self.independent
    }

    /// `v` minus its component in the row space along the pivot coordinates.
    pub fn reduce(&self, v: &[(u64, S)]) -> SparseRow<S> {
        let mut acc: BTreeMap<u64, S> = v.iter().cloned().collect();
        for (c, vc) in v {
            if let Ok(i) = self.pivots.binary_search(c) {
                for (col, val) in &self.rows[i] {
                    let slot = acc.entry(*col).or_insert_with(S::zero);
                    *slot = slot.clone() - vc.clone() * val.clone();
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Whether `v` lies in the row space. The tolerance is relative to the
    /// Euclidean norm of `v` and only consulted on the float path.
    pub fn contains(&self, v: &[(u64, S)], tol: f64) -> bool {
        let residual = self.reduce(v);
        if S::EXACT {
            return residual.is_empty();
        }
        let norm = l2(v.iter().map(|(_, x)| x.to_f64()));
        l2(residual.iter().map(|(_, x)| x.to_f64())) <= tol * norm
    }

    /// Basis of `{x : row·x = 0 for every row}` over columns `0..n_cols`, one
    /// vector per free column.
    pub fn null_space(&self, n_cols: u64) -> Vec<SparseRow<S>> {
        let mut by_free: BTreeMap<u64, Vec<(u64, S)>> = BTreeMap::new();
        for (row, &pivot) in self.rows.iter().zip(&self.pivots) {
            for (col, val) in row {
                if *col != pivot {
                    by_free.entry(*col).or_default().push((pivot, -val.clone()));
                }
            }
        }
        let mut out = Vec::with_capacity((n_cols as usize).saturating_sub(self.rank()));
        let mut next_pivot = 0;
        for free in 0..n_cols {
            if next_pivot < self.pivots.len() && self.pivots[next_pivot] == free {
                next_pivot += 1;
                continue;
            }
            let mut v: SparseRow<S> = by_free.remove(&free).unwrap_or_default();
            v.push((free, S::one()));
            v.sort_by_key(|(c, _)| *c);
            out.push(v);
        }
        out
    }
}

pub(crate) fn l2(values: impl Iterator<Item = f64>) -> f64 {
    values.map(|v| v * v).sum::<f64>().sqrt()
}

type IntRow = Vec<(u64, BigInt)>;

fn make_primitive(row: &mut IntRow) {
    let mut g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if g.is_zero() {
        return;
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

fn primitive_int_row(row: &[(u64, Rational)]) -> IntRow {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let mut out: IntRow = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect();
    out.sort_by_key(|(c, _)| *c);
    make_primitive(&mut out);
    out
}

/// `a·x − b·y` on sorted sparse integer rows.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub(crate) fn exact_echelon(rows: Vec<SparseRow<Rational>>) -> Echelon<Rational> {
    let mut basis: BTreeMap<u64, IntRow> = BTreeMap::new();
    let mut independent = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut work = primitive_int_row(row);
        let mut cursor = 0usize;
        // Eliminate pivot columns left to right; fill-in only lands to the
        // right of the column being cleared.
        while let Some(pos) = (cursor..work.len()).find(|&k| basis.contains_key(&work[k].0)) {
            let col = work[pos].0;
            let pivot_row = &basis[&col];
            let g = pivot_row[0].1.gcd(&work[pos].1);
            let a = &pivot_row[0].1 / &g;
            let b = &work[pos].1 / &g;
            work = combine(&a, &work, &b, pivot_row);
            make_primitive(&mut work);
            cursor = work.partition_point(|(c, _)| *c <= col);
        }
        if work.is_empty() {
            continue;
        }
        basis.insert(work[0].0, work);
        independent.push(idx);
    }

    let mut reduced: Vec<(u64, IntRow)> = basis.into_iter().collect();
    for i in (0..reduced.len()).rev() {
        let (head, tail) = reduced.split_at_mut(i);
        let (col, pivot_row) = (&tail[0].0, &tail[0].1);
        for (_, row) in head.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(col, |(c, _)| *c) {
                let g = pivot_row[0].1.gcd(&row[pos].1);
                let a = &pivot_row[0].1 / &g;
                let b = &row[pos].1 / &g;
                *row = combine(&a, row, &b, pivot_row);
                make_primitive(row);
            }
        }
    }

    let pivots = reduced.iter().map(|(c, _)| *c).collect();
    let rows = reduced
        .into_iter()
        .map(|(_, row)| {
            let lead = row[0].1.clone();
            row.into_iter()
                .map(|(c, v)| (c, Rational::new(v, lead.clone())))
                .collect()
        })
        .collect();
    Echelon {
        rows,
        pivots,
        independent,
    }
}

pub(crate) fn float_echelon(rows: Vec<SparseRow<f64>>) -> Echelon<f64> {
    let mut cols: Vec<u64> = rows
        .iter()
        .flat_map(|r| r.iter().map(|(c, _)| *c))
        .collect();
    cols.sort_unstable();
    cols.dedup();
    let width = cols.len();
    let dense: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let mut d = vec![0.0; width];
            for (c, v) in r {
                d[cols.binary_search(c).expect("column collected above")] += *v;
            }
            d
        })
        .collect();

    let mut ortho: Vec<Vec<f64>> = Vec::new();
    let mut independent = Vec::new();
    for (i, r) in dense.iter().enumerate() {
        let norm = l2(r.iter().copied());
        if norm == 0.0 {
            continue;
        }
        let mut w = r.clone();
        for _ in 0..2 {
            for q in &ortho {
                let d: f64 = q.iter().zip(&w).map(|(a, b)| a * b).sum();
                w.iter_mut().zip(q).for_each(|(x, qv)| *x -= d * qv);
            }
        }
        let rest = l2(w.iter().copied());
        if rest > FLOAT_PIVOT_TOL * norm {
            w.iter_mut().for_each(|x| *x /= rest);
            ortho.push(w);
            independent.push(i);
        }
    }

    // Rows are scaled to unit norm so that pivots are judged relative to
    // their own row rather than to the largest entry overall.
    let mut a: Vec<Vec<f64>> = independent
        .iter()
        .map(|&i| {
            let norm = l2(dense[i].iter().copied());
            dense[i].iter().map(|x| x / norm).collect()
        })
        .collect();
    let scale = 1.0;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == a.len() {
            break;
        }
        let best = (r..a.len())
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("non-empty range");
        if a[best][col].abs() <= FLOAT_PIVOT_TOL * scale {
            continue;
        }
        a.swap(r, best);
        let p = a[r][col];
        a[r].iter_mut().for_each(|x| *x /= p);
        a[r][col] = 1.0;
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[col] == 0.0 {
                continue;
            }
            let f = row[col];
            row.iter_mut()
                .zip(&pivot_row)
                .for_each(|(x, pv)| *x -= f * pv);
            row[col] = 0.0;
        }
        pivots.push(cols[col]);
        r += 1;
    }
    a.truncate(r);
    let rows = a
        .into_iter()
        .map(|row| {
            let peak = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            row.into_iter()
                .enumerate()
                .filter(|(_, v)| v.abs() > 1e-13 * peak)
                .map(|(k, v)| (cols[k], v))
                .collect()
        })
        .collect();
    Echelon {
        rows,
        pivots,
        independent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn row(entries: &[(u64, i64)]) -> SparseRow<Rational> {
        entries.iter().map(|&(c, v)| (c, q(v))).collect()
    }

    #[test]
    fn rref_of_dependent_rows() {
        let e = Echelon::new(vec![
            row(&[(0, 2), (1, 4)]),
            row(&[(0, 1), (1, 2)]),
            row(&[(1, 3), (2, 6)]),
        ]);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivots(), &[0, 1]);
        assert_eq!(e.independent(), &[0, 2]);
        assert_eq!(e.rows()[0], row(&[(0, 1), (2, -4)]));
        assert_eq!(e.rows()[1], row(&[(1, 1), (2, 2)]));
    }

    #[test]
    fn null_space_of_single_row() {
        let e = Echelon::new(vec![row(&[(0, 1), (1, 1)])]);
        let ns = e.null_space(3);
        assert_eq!(ns, vec![row(&[(0, -1), (1, 1)]), row(&[(2, 1)])]);
    }

    #[test]
    fn reduce_and_contains() {
        let e = Echelon::new(vec![row(&[(0, 1), (1, 1)])]);
        assert!(e.contains(&row(&[(0, 3), (1, 3)]), 0.0));
        assert!(!e.contains(&row(&[(0, 3)]), 0.0));
        assert_eq!(e.reduce(&row(&[(0, 3)])), row(&[(1, -3)]));
    }

    #[test]
    fn float_matches_exact_on_small_integers() {
        let int_rows = [
            vec![(0u64, 2i64), (2, 1)],
            vec![(1, 3), (2, -1)],
            vec![(0, 4), (1, 3), (2, 1)],
        ];
        let exact = Echelon::new(int_rows.iter().map(|r| row(r)).collect());
        let float = Echelon::new(
            int_rows
                .iter()
                .map(|r| r.iter().map(|&(c, v)| (c, v as f64)).collect())
                .collect(),
        );
        assert_eq!(exact.pivots(), float.pivots());
        assert_eq!(exact.independent(), float.independent());
        for (er, fr) in exact.rows().iter().zip(float.rows()) {
            for ((ec, ev), (fc, fv)) in er.iter().zip(fr) {
                assert_eq!(ec, fc);
                assert!((ev.to_f64() - fv).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn empty_input() {
        let e: Echelon<Rational> = Echelon::new(vec![]);
        assert_eq!(e.rank(), 0);
        assert_eq!(e.null_space(2).len(), 2);
    }
}
