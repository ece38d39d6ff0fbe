//! Smith reduction of sparse integer matrices with recorded transformations.
//!
//! The reduction finds unimodular `U`, `V` with `U·A·V` diagonal (up to a
//! permutation of rows and columns) and diagonal entries forming a divisor
//! chain. `U` and `V` are never materialized; the elementary operations are
//! logged and replayed on vectors.

use alloc::collections::{BTreeSet, BinaryHeap};
use core::cmp::Reverse;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::CohError;

/// Row-sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Per row, `(column, value)` sorted by column, no zeros.
    pub entries: Vec<Vec<(usize, i64)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            entries: vec![Vec::new(); rows],
        }
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add_entry(&mut self, r: usize, c: usize, v: i64) {
        let row = &mut self.entries[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => {
                row[i].1 += v;
                if row[i].1 == 0 {
                    row.remove(i);
                }
            }
            Err(i) => {
                if v != 0 {
                    row.insert(i, (c, v));
                }
            }
        }
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|&(c, v)| v * x[c]).sum())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    /// `line[target] += factor · line[source]`
    Add { target: usize, source: usize, factor: i64 },
    /// `line[target] *= -1`
    Neg { target: usize },
}

/// Outcome of the reduction: `D = U·A·V` has `pivots[i].2` at
/// `(pivots[i].0, pivots[i].1)` and zeros elsewhere.
#[derive(Clone, Debug)]
pub struct Smith {
    pub rows: usize,
    pub cols: usize,
    /// `(row, column, divisor)`, divisors positive and forming a chain.
    pub pivots: Vec<(usize, usize, i64)>,
    row_ops: Vec<Op>,
    col_ops: Vec<Op>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Divisors greater than one, in chain order.
    pub fn torsion(&self) -> Vec<i64> {
        self.pivots.iter().map(|p| p.2).filter(|&d| d > 1).collect()
    }

    /// `U·x` for a vector indexed by rows, in exact `i128` arithmetic.
    pub fn apply_u(&self, x: &mut [i128]) {
        for op in &self.row_ops {
            match *op {
                Op::Add { target, source, factor } => x[target] += factor as i128 * x[source],
                Op::Neg { target } => x[target] = -x[target],
            }
        }
    }

    /// `U⁻¹·x`.
    pub fn apply_u_inv(&self, x: &mut [i128]) {
        for op in self.row_ops.iter().rev() {
            match *op {
                Op::Add { target, source, factor } => x[target] -= factor as i128 * x[source],
                Op::Neg { target } => x[target] = -x[target],
            }
        }
    }

    /// `V·y` for a vector indexed by columns.
    pub fn apply_v(&self, y: &mut [i128]) {
        // V = E₁E₂…E_k, and E for "col_t += f·col_s" is I + f·e_s e_tᵀ.
        for op in self.col_ops.iter().rev() {
            match *op {
                Op::Add { target, source, factor } => y[source] += factor as i128 * y[target],
                Op::Neg { target } => y[target] = -y[target],
            }
        }
    }

    /// Solves `A·y ≡ b (mod m)`; `None` if no solution exists.
    pub fn solve_mod(&self, b: &[i128], m: i128) -> Option<Vec<i128>> {
        let mut ub: Vec<i128> = b.iter().map(|&v| v.rem_euclid(m)).collect();
        self.apply_u(&mut ub);
        let mut is_pivot_row = vec![false; self.rows];
        let mut y = vec![0i128; self.cols];
        for &(r, c, d) in &self.pivots {
            is_pivot_row[r] = true;
            let rhs = ub[r].rem_euclid(m);
            let g = gcd128(d as i128, m);
            if rhs % g != 0 {
                return None;
            }
            let m2 = m / g;
            let inv = mod_inverse((d as i128 / g).rem_euclid(m2), m2)?;
            y[c] = ((rhs / g) % m2 * inv).rem_euclid(m2);
        }
        if (0..self.rows).any(|r| !is_pivot_row[r] && ub[r].rem_euclid(m) != 0) {
            return None;
        }
        self.apply_v(&mut y);
        Some(y.into_iter().map(|v| v.rem_euclid(m)).collect())
    }

    /// Solves `A·y = b` over ℤ; `None` if no integral solution exists.
    pub fn solve_int(&self, b: &[i128]) -> Option<Vec<i128>> {
        let mut ub = b.to_vec();
        self.apply_u(&mut ub);
        let mut is_pivot_row = vec![false; self.rows];
        let mut y = vec![0i128; self.cols];
        for &(r, c, d) in &self.pivots {
            is_pivot_row[r] = true;
            if ub[r] % d as i128 != 0 {
                return None;
            }
            y[c] = ub[r] / d as i128;
        }
        if (0..self.rows).any(|r| !is_pivot_row[r] && ub[r] != 0) {
            return None;
        }
        self.apply_v(&mut y);
        Some(y)
    }
}

pub(crate) fn gcd128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m))
}

struct Work {
    rows: Vec<Vec<(usize, i64)>>,
    cols: Vec<BTreeSet<usize>>,
    row_ops: Vec<Op>,
    col_ops: Vec<Op>,
}

impl Work {
    fn get(&self, r: usize, c: usize) -> i64 {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0).map(|i| row[i].1).unwrap_or(0)
    }

    fn row_add(&mut self, target: usize, source: usize, factor: i64) -> Result<(), CohError> {
        if factor == 0 {
            return Ok(());
        }
        let src = self.rows[source].clone();
        let dst = core::mem::take(&mut self.rows[target]);
        let mut out = Vec::with_capacity(src.len() + dst.len());
        let (mut i, mut j) = (0, 0);
        while i < dst.len() || j < src.len() {
            let take_dst = j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0);
            let take_src = i >= dst.len() || (j < src.len() && src[j].0 < dst[i].0);
            if take_dst {
                out.push(dst[i]);
                i += 1;
            } else if take_src {
                let v = src[j].1.checked_mul(factor).ok_or(CohError::Overflow)?;
                out.push((src[j].0, v));
                self.cols[src[j].0].insert(target);
                j += 1;
            } else {
                let c = dst[i].0;
                let v = src[j]
                    .1
                    .checked_mul(factor)
                    .and_then(|p| p.checked_add(dst[i].1))
                    .ok_or(CohError::Overflow)?;
                if v != 0 {
                    out.push((c, v));
                } else {
                    self.cols[c].remove(&target);
                }
                i += 1;
                j += 1;
            }
        }
        self.rows[target] = out;
        self.row_ops.push(Op::Add { target, source, factor });
        Ok(())
    }

    fn col_add(&mut self, target: usize, source: usize, factor: i64) -> Result<(), CohError> {
        if factor == 0 {
            return Ok(());
        }
        let rows: Vec<usize> = self.cols[source].iter().copied().collect();
        for r in rows {
            let s = self.get(r, source);
            let delta = s.checked_mul(factor).ok_or(CohError::Overflow)?;
            let row = &mut self.rows[r];
            match row.binary_search_by_key(&target, |e| e.0) {
                Ok(i) => {
                    row[i].1 = row[i].1.checked_add(delta).ok_or(CohError::Overflow)?;
                    if row[i].1 == 0 {
                        row.remove(i);
                        self.cols[target].remove(&r);
                    }
                }
                Err(i) => {
                    row.insert(i, (target, delta));
                    self.cols[target].insert(r);
                }
            }
        }
        self.col_ops.push(Op::Add { target, source, factor });
        Ok(())
    }

    fn row_neg(&mut self, target: usize) {
        for e in self.rows[target].iter_mut() {
            e.1 = -e.1;
        }
        self.row_ops.push(Op::Neg { target });
    }

    /// Shortest row holding a unit entry in column `c`.
    fn unit_in_column(&self, c: usize) -> Option<usize> {
        self.cols[c]
            .iter()
            .copied()
            .filter(|&r| {
                let v = self.get(r, c);
                v == 1 || v == -1
            })
            .min_by_key(|&r| self.rows[r].len())
    }

    /// Unit pivot from a sparse column, using a lazily updated heap of
    /// column counts. The heap is rebuilt when it runs dry, so the search
    /// ends only when no unit entry is left anywhere.
    fn unit_pivot(&self, heap: &mut BinaryHeap<Reverse<(usize, usize)>>) -> Option<(usize, usize)> {
        for rebuilt in [false, true] {
            if rebuilt {
                heap.extend(
                    (0..self.cols.len())
                        .filter(|&c| !self.cols[c].is_empty())
                        .map(|c| Reverse((self.cols[c].len(), c))),
                );
            }
            while let Some(Reverse((count, c))) = heap.pop() {
                let now = self.cols[c].len();
                if now == 0 {
                    continue;
                }
                if now > count {
                    heap.push(Reverse((now, c)));
                    continue;
                }
                if let Some(r) = self.unit_in_column(c) {
                    return Some((r, c));
                }
            }
        }
        None
    }

    fn smallest_pivot(&self, live_cols: &BTreeSet<usize>) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, i64)> = None;
        for &c in live_cols {
            for &r in &self.cols[c] {
                let v = self.get(r, c).abs();
                if best.is_none_or(|b| v < b.2) {
                    best = Some((r, c, v));
                }
            }
        }
        best.map(|b| (b.0, b.1))
    }
}

/// Reduces `a` to Smith form.
pub fn smith(a: &SparseIntMatrix) -> Result<Smith, CohError> {
    let mut cols = vec![BTreeSet::new(); a.cols];
    for (r, row) in a.entries.iter().enumerate() {
        for &(c, _) in row {
            cols[c].insert(r);
        }
    }
    let mut w = Work {
        rows: a.entries.clone(),
        cols,
        row_ops: Vec::new(),
        col_ops: Vec::new(),
    };
    let mut live_cols = BTreeSet::new();
    let mut pivots = Vec::new();

    // Phase 1: unit pivots in any order; they divide everything.
    let mut heap = BinaryHeap::new();
    while let Some((p, j)) = w.unit_pivot(&mut heap) {
        eliminate(&mut w, p, j)?;
        if w.get(p, j) < 0 {
            w.row_neg(p);
        }
        retire(&mut w, p, j, &mut live_cols);
        pivots.push((p, j, 1i64));
    }
    live_cols.extend((0..a.cols).filter(|&c| !w.cols[c].is_empty()));

    // Phase 2: general Euclidean steps with the divisibility condition.
    loop {
        live_cols.retain(|&c| !w.cols[c].is_empty());
        let Some((mut p, mut j)) = w.smallest_pivot(&live_cols) else {
            break;
        };
        loop {
            let (np, nj) = reduce_cross(&mut w, p, j)?;
            if (np, nj) != (p, j) {
                p = np;
                j = nj;
                continue;
            }
            // Pivot row and column are clear; enforce d | every remaining entry.
            let d = w.get(p, j).abs();
            let offender = live_cols
                .iter()
                .filter(|&&c| c != j)
                .flat_map(|&c| w.cols[c].iter().map(move |&r| (r, c)))
                .find(|&(r, c)| r != p && w.get(r, c) % d != 0);
            match offender {
                Some((r, _)) => {
                    w.row_add(p, r, 1)?;
                }
                None => break,
            }
        }
        if w.get(p, j) < 0 {
            w.row_neg(p);
        }
        let d = w.get(p, j);
        retire(&mut w, p, j, &mut live_cols);
        pivots.push((p, j, d));
    }
    // Sort pivots into chain order (unit pivots first is already a chain).
    pivots.sort_by_key(|x| x.2);
    Ok(Smith {
        rows: a.rows,
        cols: a.cols,
        pivots,
        row_ops: w.row_ops,
        col_ops: w.col_ops,
    })
}

/// Clears column `j` below/above a unit pivot and row `p` beside it.
fn eliminate(w: &mut Work, p: usize, j: usize) -> Result<(), CohError> {
    let pv = w.get(p, j);
    debug_assert!(pv == 1 || pv == -1);
    let others: Vec<usize> = w.cols[j].iter().copied().filter(|&r| r != p).collect();
    for r in others {
        let v = w.get(r, j);
        w.row_add(r, p, -v * pv)?;
    }
    let row_cols: Vec<(usize, i64)> = w.rows[p].iter().copied().filter(|e| e.0 != j).collect();
    for (c, v) in row_cols {
        w.col_add(c, j, -v * pv)?;
    }
    Ok(())
}

/// One round of Euclidean clearing around `(p, j)`. Returns a new pivot
/// position if a smaller remainder appeared, else `(p, j)` with the cross clear.
fn reduce_cross(w: &mut Work, p: usize, j: usize) -> Result<(usize, usize), CohError> {
    let pv = w.get(p, j);
    let others: Vec<usize> = w.cols[j].iter().copied().filter(|&r| r != p).collect();
    for r in others {
        let q = w.get(r, j) / pv;
        w.row_add(r, p, -q)?;
    }
    if let Some(&r) = w.cols[j].iter().find(|&&r| r != p) {
        let best = w.cols[j]
            .iter()
            .copied()
            .filter(|&x| x != p)
            .min_by_key(|&x| w.get(x, j).abs())
            .unwrap_or(r);
        return Ok((best, j));
    }
    let row_cols: Vec<(usize, i64)> = w.rows[p].iter().copied().filter(|e| e.0 != j).collect();
    for (c, v) in row_cols {
        let q = v / pv;
        w.col_add(c, j, -q)?;
    }
    if let Some(&(c, _)) = w.rows[p].iter().filter(|e| e.0 != j).min_by_key(|e| e.1.abs()) {
        return Ok((p, c));
    }
    Ok((p, j))
}

fn retire(w: &mut Work, p: usize, j: usize, live_cols: &mut BTreeSet<usize>) {
    debug_assert_eq!(w.rows[p].len(), 1);
    debug_assert_eq!(w.cols[j].len(), 1);
    w.rows[p].clear();
    w.cols[j].clear();
    live_cols.remove(&j);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[i64]]) -> SparseIntMatrix {
        let mut m = SparseIntMatrix::zeros(rows.len(), rows[0].len());
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.add_entry(r, c, v);
            }
        }
        m
    }

    fn divisors(m: &SparseIntMatrix) -> Vec<i64> {
        smith(m).unwrap().pivots.iter().map(|p| p.2).collect()
    }

    /// Determinantal-divisor oracle for 2×2 matrices.
    fn dd2(a: i64, b: i64, c: i64, d: i64) -> Vec<i64> {
        let g1 = gcd128(gcd128(a as i128, b as i128), gcd128(c as i128, d as i128)) as i64;
        let det = (a * d - b * c).abs();
        match (g1, det) {
            (0, _) => vec![],
            (g, 0) => vec![g],
            (g, det) => vec![g, det / g],
        }
    }

    #[test]
    fn small_cases() {
        assert_eq!(divisors(&dense(&[&[2, 0], &[0, 3]])), vec![1, 6]);
        assert_eq!(divisors(&dense(&[&[2, 4], &[6, 8]])), vec![2, 4]);
        assert_eq!(divisors(&dense(&[&[0, 0], &[0, 0]])), Vec::<i64>::new());
        assert_eq!(divisors(&dense(&[&[1, 1, 1], &[1, 1, 1]])), vec![1]);
    }

    #[test]
    fn two_by_two_against_determinantal_divisors() {
        for a in -4..=4 {
            for b in -3..=3 {
                for c in -3..=3 {
                    for d in [-5, 0, 2, 6] {
                        let got = divisors(&dense(&[&[a, b], &[c, d]]));
                        assert_eq!(got, dd2(a, b, c, d), "{a} {b} {c} {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn transforms_are_consistent() {
        let m = dense(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&m).unwrap();
        assert_eq!(s.torsion(), vec![2, 6, 12]);
        // Columns of V mapped by A land on multiples of columns of U⁻¹.
        for &(r, c, d) in &s.pivots {
            let mut y = vec![0i128; 3];
            y[c] = 1;
            s.apply_v(&mut y);
            let ay: Vec<i128> = m
                .entries
                .iter()
                .map(|row| row.iter().map(|&(cc, v)| v as i128 * y[cc]).sum())
                .collect();
            let mut e = vec![0i128; 3];
            e[r] = d as i128;
            s.apply_u_inv(&mut e);
            assert_eq!(ay, e);
        }
    }

    #[test]
    fn modular_solve() {
        let m = dense(&[&[2, 0], &[0, 3]]);
        let s = smith(&m).unwrap();
        let y = s.solve_mod(&[4, 3], 6).unwrap();
        assert_eq!((2 * y[0]).rem_euclid(6), 4);
        assert_eq!((3 * y[1]).rem_euclid(6), 3);
        assert!(s.solve_mod(&[1, 0], 6).is_none());
        assert_eq!(s.solve_int(&[4, 9]), Some(vec![2, 3]));
        assert_eq!(s.solve_int(&[3, 9]), None);
    }
}
