//! The torus embedding `T ⊂ D` and the lattices it induces.
//!
//! `rho` is the n×k integer matrix of cocharacters of the subtorus. From
//! it we derive the kernel lattice of `rho^T` (an (n−k)×n basis matrix),
//! the matroid of coordinate bases of the quotient, and the unimodularity
//! test that all smoothness statements downstream rely on.

use itertools::Itertools;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::intmat::{self, Int, IntMat};
use crate::linalg::{self, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("rho must have at least as many rows as columns (n >= k >= 0)")]
    BadShape,
    #[error("rho has rank {found} over the rationals, expected {expected}")]
    RankDeficient { found: usize, expected: usize },
    #[error("rho^T is not surjective onto ZZ^k (invariant factors {factors:?})")]
    NonSaturated { factors: Vec<String> },
}

/// A validated embedding together with the derived kernel lattice.
#[derive(Debug, Clone)]
pub struct TorusEmbedding {
    pub rho: IntMat,
    pub n: usize,
    pub k: usize,
    /// Rows form a ZZ-basis of `ker(rho^T)`, Hermite-reduced so the basis
    /// is canonical for a given rho.
    pub tperp_basis: IntMat,
}

impl TorusEmbedding {
    pub fn quotient_rank(&self) -> usize {
        self.n - self.k
    }

    /// `rho^T x` for an integer vector x of length n.
    pub fn project(&self, x: &[i64]) -> Vec<Int> {
        let xs: Vec<Int> = x.iter().map(|&v| Int::from(v)).collect();
        self.rho.transpose().mul_vec(&xs)
    }
}

pub fn validate_embedding(rho: IntMat) -> Result<TorusEmbedding, LatticeError> {
    let n = rho.rows;
    let k = rho.cols;
    if k > n {
        return Err(LatticeError::BadShape);
    }
    let rho_t = rho.transpose();
    let smith = intmat::smith_normal_form(&rho_t);
    if smith.rank < k {
        return Err(LatticeError::RankDeficient { found: smith.rank, expected: k });
    }
    let non_unit: Vec<String> = (0..k)
        .map(|i| smith.d[(i, i)].clone())
        .filter(|d| !d.is_one())
        .map(|d| d.to_string())
        .collect();
    if !non_unit.is_empty() {
        return Err(LatticeError::NonSaturated { factors: non_unit });
    }
    let tperp_basis = intmat::kernel_basis(&rho_t);
    debug_assert_eq!(tperp_basis.rows, n - k);
    Ok(TorusEmbedding { rho, n, k, tperp_basis })
}

/// All (n−k)-subsets of coordinates whose images form a basis of the
/// quotient `d_QQ / t_QQ`; equivalently the subsets where the kernel-basis
/// matrix has a nonsingular square block.
pub fn bases(emb: &TorusEmbedding) -> Vec<Vec<usize>> {
    let d = emb.quotient_rank();
    (0..emb.n)
        .combinations(d)
        .filter(|subset| !minor(&emb.tperp_basis, subset).is_zero())
        .collect()
}

/// True iff every nonzero maximal minor of the kernel-basis matrix is ±1.
pub fn is_unimodular(emb: &TorusEmbedding) -> bool {
    let d = emb.quotient_rank();
    (0..emb.n).combinations(d).all(|subset| {
        let m = minor(&emb.tperp_basis, &subset);
        m.is_zero() || m.abs().is_one()
    })
}

fn minor(mat: &IntMat, cols: &[usize]) -> Int {
    let d = mat.rows;
    assert_eq!(cols.len(), d);
    let mut sq = IntMat::zero(d, d);
    for i in 0..d {
        for (jj, &j) in cols.iter().enumerate() {
            sq[(i, jj)] = mat[(i, j)].clone();
        }
    }
    intmat::determinant(&sq)
}

/// Quotient data for a fixed parameter: the kernel lattice plus one
/// integral basepoint of the coset `{a : rho^T a = lambda}`.
#[derive(Debug, Clone)]
pub struct QuotientLattices {
    pub tperp_basis: IntMat,
    pub coset_basepoint: Vec<i64>,
}

pub fn coset_basepoint(emb: &TorusEmbedding, lambda: &[i64]) -> Option<Vec<i64>> {
    assert_eq!(lambda.len(), emb.k);
    let rhs: Vec<Int> = lambda.iter().map(|&v| Int::from(v)).collect();
    let sol = intmat::solve(&emb.rho.transpose(), &rhs)?;
    sol.into_iter().map(|v| i64::try_from(&v).ok()).collect()
}

/// Rational basepoint of the coset for a rational parameter.
pub fn coset_basepoint_rational(emb: &TorusEmbedding, lambda: &[Rat]) -> Vec<Rat> {
    assert_eq!(lambda.len(), emb.k);
    // solve rho^T a = lambda over QQ via rref of the augmented system
    let mut aug: Vec<Vec<Rat>> = (0..emb.k)
        .map(|r| {
            let mut row: Vec<Rat> = (0..emb.n)
                .map(|c| Rat::from(emb.rho[(c, r)].clone()))
                .collect();
            row.push(lambda[r].clone());
            row
        })
        .collect();
    let pivots = linalg::rref(&mut aug);
    let mut a = vec![linalg::rat(0); emb.n];
    for (r, &p) in pivots.iter().enumerate() {
        assert!(p < emb.n, "inconsistent coset system for a valid embedding");
        a[p] = aug[r][emb.n].clone();
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emb_from(rows: &[Vec<i64>]) -> TorusEmbedding {
        validate_embedding(IntMat::from_i64(rows)).unwrap()
    }

    #[test]
    fn scalar_torus_in_a3() {
        let emb = emb_from(&[vec![1], vec![1], vec![1]]);
        assert_eq!((emb.n, emb.k), (3, 1));
        assert_eq!(emb.tperp_basis.rows, 2);
        // rows annihilated by rho^T
        for i in 0..2 {
            let s: Int = emb.tperp_basis.row(i).into_iter().sum();
            assert!(s.is_zero());
        }
        assert!(is_unimodular(&emb));
        let b = bases(&emb);
        assert_eq!(b, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn trivial_subtorus() {
        let emb = validate_embedding(IntMat::zero(2, 0)).unwrap();
        assert_eq!(emb.quotient_rank(), 2);
        assert!(is_unimodular(&emb));
        assert_eq!(bases(&emb), vec![vec![0, 1]]);
    }

    #[test]
    fn index_two_sublattice_rejected() {
        let err = validate_embedding(IntMat::from_i64(&[vec![2]])).unwrap_err();
        assert_eq!(err, LatticeError::NonSaturated { factors: vec!["2".into()] });
    }

    #[test]
    fn rank_deficient_rejected() {
        let err = validate_embedding(IntMat::from_i64(&[vec![1, 1], vec![2, 2]])).unwrap_err();
        assert!(matches!(err, LatticeError::RankDeficient { found: 1, expected: 2 }));
    }

    #[test]
    fn non_unimodular_kernel() {
        let emb = emb_from(&[vec![1], vec![2]]);
        assert!(!is_unimodular(&emb));
        assert_eq!(bases(&emb).len(), 2);
    }

    #[test]
    fn bases_of_rank_two_subtorus() {
        let emb = emb_from(&[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(bases(&emb), vec![vec![0], vec![1], vec![2]]);
        assert!(is_unimodular(&emb));
    }

    #[test]
    fn bases_count_matches_nonzero_minors() {
        for rows in [
            vec![vec![1], vec![1], vec![1]],
            vec![vec![1], vec![2]],
            vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1]],
        ] {
            let emb = emb_from(&rows);
            let d = emb.quotient_rank();
            let nonzero = (0..emb.n)
                .combinations(d)
                .filter(|s| !minor(&emb.tperp_basis, s).is_zero())
                .count();
            assert_eq!(bases(&emb).len(), nonzero);
        }
    }

    #[test]
    fn coset_basepoint_exact() {
        let emb = emb_from(&[vec![1], vec![1], vec![1]]);
        let a0 = coset_basepoint(&emb, &[1]).unwrap();
        assert_eq!(a0.iter().sum::<i64>(), 1);
        let aq = coset_basepoint_rational(&emb, &[linalg::rat_frac(1, 3)]);
        let s: Rat = aq.iter().cloned().sum();
        assert_eq!(s, linalg::rat_frac(1, 3));
    }
}
