//! Exact integer matrices with Smith and Hermite normal forms.
//!
//! Everything here runs over `BigInt`, so intermediate blowup during the
//! elimination never wraps. The rest of the crate keeps its vectors in
//! `i64` and only drops into this module for kernels, cosets and
//! saturation questions.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

pub type Int = BigInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMat::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = Int::from(*v);
            }
        }
        m
    }

    pub fn from_big(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMat::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn row(&self, i: usize) -> Vec<Int> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(i64::try_from(&self[(i, j)]).ok()?);
            }
            out.push(row);
        }
        Some(out)
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                if self[(i, l)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, l)] * &other[(l, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let c = self.cols;
            self.data.swap(a * c + j, b * c + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let c = self.cols;
            self.data.swap(i * c + a, i * c + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_row_mul(&mut self, a: usize, b: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = q * &self[(b, j)];
            self[(a, j)] += add;
        }
    }

    /// col[a] += q * col[b]
    fn add_col_mul(&mut self, a: usize, b: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = q * &self[(i, b)];
            self[(i, a)] += add;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }

}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form `u * a * v = d` with `u`, `v` unimodular and the
/// diagonal of `d` nonnegative with each entry dividing the next.
pub struct Smith {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
    pub rank: usize,
}

pub fn smith_normal_form(a: &IntMat) -> Smith {
    let mut d = a.clone();
    let mut u = IntMat::identity(a.rows);
    let mut v = IntMat::identity(a.cols);
    let dim = a.rows.min(a.cols);

    let mut t = 0;
    while t < dim {
        // pivot: smallest nonzero |entry| in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                if !d[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..d.rows {
                if !d[(i, t)].is_zero() {
                    let q = -d[(i, t)].div_floor(&d[(t, t)]);
                    d.add_row_mul(i, t, &q);
                    u.add_row_mul(i, t, &q);
                    if !d[(i, t)].is_zero() {
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..d.cols {
                if !d[(t, j)].is_zero() {
                    let q = -d[(t, j)].div_floor(&d[(t, t)]);
                    d.add_col_mul(j, t, &q);
                    v.add_col_mul(j, t, &q);
                    if !d[(t, j)].is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }

        // divisibility fix: fold any non-divisible entry into the pivot
        let mut redo = false;
        'outer: for i in t + 1..d.rows {
            for j in t + 1..d.cols {
                if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                    let one = Int::one();
                    d.add_row_mul(t, i, &one);
                    u.add_row_mul(t, i, &one);
                    redo = true;
                    break 'outer;
                }
            }
        }
        if !redo {
            t += 1;
        }
    }

    let rank = (0..dim).take_while(|&i| !d[(i, i)].is_zero()).count();
    Smith { u, d, v, rank }
}

/// Row-style Hermite normal form `h = u * a`: row echelon over ZZ with
/// positive pivots and the entries above each pivot reduced into
/// `[0, pivot)`.
pub struct Hermite {
    pub h: IntMat,
    pub u: IntMat,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

pub fn hermite_normal_form(a: &IntMat) -> Hermite {
    let mut h = a.clone();
    let mut u = IntMat::identity(a.rows);
    let mut pivot_cols = Vec::new();
    let mut r = 0;

    for col in 0..h.cols {
        if r == h.rows {
            break;
        }
        // euclid the column below r down to a single nonzero entry
        loop {
            let mut best: Option<usize> = None;
            for i in r..h.rows {
                if !h[(i, col)].is_zero()
                    && best.is_none_or(|b| h[(i, col)].abs() < h[(b, col)].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..h.rows {
                if !h[(i, col)].is_zero() {
                    let q = -h[(i, col)].div_floor(&h[(r, col)]);
                    h.add_row_mul(i, r, &q);
                    u.add_row_mul(i, r, &q);
                    if !h[(i, col)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[(r, col)].is_zero() {
            continue;
        }
        if h[(r, col)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, col)].div_floor(&h[(r, col)]);
            h.add_row_mul(i, r, &q);
            u.add_row_mul(i, r, &q);
        }
        pivot_cols.push(col);
        r += 1;
    }

    Hermite { h, u, rank: r, pivot_cols }
}

/// Basis of the integer kernel `{x : a * x = 0}`, returned as rows.
pub fn kernel_basis(a: &IntMat) -> IntMat {
    let s = smith_normal_form(a);
    let mut rows = Vec::new();
    for j in s.rank..a.cols {
        rows.push((0..a.cols).map(|i| s.v[(i, j)].clone()).collect::<Vec<_>>());
    }
    let raw = IntMat::from_big(rows);
    if raw.rows == 0 {
        return IntMat::zero(0, a.cols);
    }
    // HNF-reduce so the basis is canonical
    let h = hermite_normal_form(&raw);
    let mut out = Vec::new();
    for i in 0..h.rank {
        out.push(h.h.row(i));
    }
    IntMat::from_big(out)
}

/// One integer solution of `a * x = b`, if any.
pub fn solve(a: &IntMat, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(a.rows, b.len());
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![Int::zero(); a.cols];
    for (i, ubi) in ub.iter().enumerate() {
        if i < s.rank {
            let (q, r) = ubi.div_rem(&s.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMat) -> Int {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    if n == 0 {
        return Int::one();
    }
    let mut m = a.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for t in 0..n - 1 {
        if m[(t, t)].is_zero() {
            let Some(swap) = (t + 1..n).find(|&i| !m[(i, t)].is_zero()) else {
                return Int::zero();
            };
            m.swap_rows(t, swap);
            sign = -sign;
        }
        for i in t + 1..n {
            for j in t + 1..n {
                let num = &m[(t, t)] * &m[(i, j)] - &m[(i, t)] * &m[(t, j)];
                m[(i, j)] = num.div_floor(&prev);
            }
            m[(i, t)] = Int::zero();
        }
        prev = m[(t, t)].clone();
    }
    sign * m[(n - 1, n - 1)].clone()
}
