//! Dense exact linear algebra over the rationals.

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest rational with denominator 2^20; plenty for sampling points.
pub fn rat_approx(x: f64) -> Rat {
    let denom = 1i64 << 20;
    rat_frac((x * denom as f64).round() as i64, denom)
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = &*v / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let sub = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(mut m: Vec<Vec<Rat>>) -> usize {
    rref(&mut m).len()
}

/// Solve the square system `a x = b`; `None` when singular.
pub fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// Affine rank of a point set: rank of differences against the first point.
pub fn affine_rank(points: &[Vec<Rat>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(x, y)| x - y).collect())
        .collect();
    rank(diffs)
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn scale(v: &[Rat], f: &Rat) -> Vec<Rat> {
    v.iter().map(|x| x * f).collect()
}

pub fn rat_abs(x: &Rat) -> Rat {
    if x.is_negative() {
        -x.clone()
    } else {
        x.clone()
    }
}

pub fn one() -> Rat {
    Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_rank() {
        let m = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat(1)],
        ];
        assert_eq!(rank(m), 2);
    }

    #[test]
    fn solve_2x2() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(-1)]];
        let b = vec![rat(5), rat(1)];
        let x = solve_square(&a, &b).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        let sing = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        assert!(solve_square(&sing, &b).is_none());
    }

    #[test]
    fn affine_rank_of_triangle() {
        let pts = vec![
            vec![rat(0), rat(0)],
            vec![rat(1), rat(0)],
            vec![rat(0), rat(1)],
        ];
        assert_eq!(affine_rank(&pts), 2);
        let seg = vec![vec![rat(0), rat(0)], vec![rat(2), rat(2)]];
        assert_eq!(affine_rank(&seg), 1);
    }
}
