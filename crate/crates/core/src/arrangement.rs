//! The periodic arrangement attached to an embedding and a parameter.
//!
//! Chambers are indexed by integer vectors `x`; the chamber holds the
//! coset points `a` with `rho^T a = lambda` and `p*x_i <= a_i < p*x_i + p`.
//! Translating `x` by a kernel vector translates the chamber, so the
//! finite quotient by the kernel lattice carries all the structure:
//! classes, adjacency arrows, smoothness of the parameter, and the
//! intersection complex of chamber closures.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Mutex;

use itertools::Itertools;
use num::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::intmat::{self, Int, IntMat};
use crate::lattice::{self, TorusEmbedding};
use crate::linalg::{self, Rat};
use crate::polytope::{self, RationalPolytope, VertexEdgeGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("period p must be at least 2, got {0}")]
    BadPeriod(i64),
    #[error("lambda has length {found}, embedding needs {expected}")]
    BadParameterLength { found: usize, expected: usize },
    #[error("point does not lie in the coset rho^T a = lambda")]
    NotInCoset,
    #[error("kernel basis entries exceed i64 range")]
    KernelTooLarge,
    #[error("perturbation was boundary-tight {0} times in a row; re-seed")]
    DegeneratePerturbation(usize),
}

#[derive(Debug, Clone)]
pub struct Parameter {
    pub lambda: Vec<i64>,
    pub p: i64,
    pub prime_warning: bool,
}

impl Parameter {
    pub fn new(lambda: Vec<i64>, p: i64) -> Result<Self, ArrangementError> {
        if p < 2 {
            return Err(ArrangementError::BadPeriod(p));
        }
        let prime_warning = !is_prime(p);
        Ok(Parameter { lambda, p, prime_warning })
    }
}

fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub type Chamber = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub struct ClassInfo {
    pub key: Vec<i64>,
    pub representative: Chamber,
    pub witness: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub coordinate: usize,
    pub sign: i8,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub classes: Vec<ClassInfo>,
    pub arrows: Vec<Arrow>,
    pub index: BTreeMap<Vec<i64>, usize>,
}

impl Enumeration {
    /// Undirected adjacency orbits: one entry per translation class of
    /// wall, reported from the lower chamber.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        self.arrows
            .iter()
            .filter(|a| a.sign > 0)
            .map(|a| (a.from, a.to, a.coordinate))
            .collect()
    }

    pub fn arrows_from(&self, class: usize) -> impl Iterator<Item = &Arrow> {
        self.arrows.iter().filter(move |a| a.from == class)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SmoothReason {
    BasisCountMatch,
    PerturbationStable,
    PerturbationUnstable,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SmoothReport {
    pub smooth: bool,
    pub reason: SmoothReason,
    pub class_count: usize,
    pub bases_count: usize,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PairFace {
    /// the lift of the second class realizing this intersection
    pub lift: Chamber,
    pub dim: usize,
    pub taxicab: i64,
    /// dim == quotient_rank − taxicab distance, the generic expectation
    pub expected_codim: bool,
}

#[derive(Debug, Clone)]
pub struct CoreComplex {
    pub pairs: BTreeMap<(usize, usize), Vec<PairFace>>,
    pub degeneracies: usize,
}

pub struct Arrangement {
    pub emb: TorusEmbedding,
    pub param: Parameter,
    pub a0: Vec<i64>,
    /// rows of the kernel basis, i64 form (d × n)
    pub tperp: Vec<Vec<i64>>,
    /// Hermite form of the kernel basis with its pivot columns
    hnf_rows: Vec<Vec<i64>>,
    hnf_pivots: Vec<usize>,
    /// a coordinate subset where the kernel block is unimodular, with the
    /// integer inverse of that block; drives the fast lattice search
    pivot_cols: Option<Vec<usize>>,
    pivot_inv: Vec<Vec<i64>>,
    cache: Mutex<BTreeMap<Chamber, Option<Vec<i64>>>>,
}

impl Arrangement {
    pub fn new(emb: TorusEmbedding, param: Parameter) -> Result<Self, ArrangementError> {
        if param.lambda.len() != emb.k {
            return Err(ArrangementError::BadParameterLength {
                found: param.lambda.len(),
                expected: emb.k,
            });
        }
        let a0 = lattice::coset_basepoint(&emb, &param.lambda)
            .ok_or(ArrangementError::KernelTooLarge)?;
        let d = emb.quotient_rank();
        let mut tperp = Vec::with_capacity(d);
        for i in 0..d {
            let row: Option<Vec<i64>> = emb
                .tperp_basis
                .row(i)
                .iter()
                .map(|v| v.to_i64())
                .collect();
            tperp.push(row.ok_or(ArrangementError::KernelTooLarge)?);
        }
        let hnf = intmat::hermite_normal_form(&emb.tperp_basis);
        let mut hnf_rows = Vec::with_capacity(d);
        for i in 0..d {
            let row: Option<Vec<i64>> = hnf.h.row(i).iter().map(|v| v.to_i64()).collect();
            hnf_rows.push(row.ok_or(ArrangementError::KernelTooLarge)?);
        }
        let hnf_pivots = hnf.pivot_cols.clone();

        let (pivot_cols, pivot_inv) = find_unit_pivot(&emb, &tperp);
        Ok(Arrangement {
            emb,
            param,
            a0,
            tperp,
            hnf_rows,
            hnf_pivots,
            pivot_cols,
            pivot_inv,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.emb.n
    }

    pub fn quotient_rank(&self) -> usize {
        self.emb.quotient_rank()
    }

    pub fn class_key(&self, x: &[i64]) -> Vec<i64> {
        self.emb
            .project(x)
            .iter()
            .map(|v| v.to_i64().expect("class key fits i64"))
            .collect()
    }

    /// Canonical representative of the class of `x`: reduce against the
    /// Hermite rows of the kernel basis. Independent of the input lift.
    pub fn canonical_rep(&self, x: &[i64]) -> Chamber {
        let mut v = x.to_vec();
        for (row, &piv) in self.hnf_rows.iter().zip(&self.hnf_pivots) {
            let q = v[piv].div_euclid(row[piv]);
            if q != 0 {
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi -= q * ri;
                }
            }
        }
        v
    }

    pub fn weight_to_chamber(&self, a: &[i64]) -> Result<Chamber, ArrangementError> {
        let key: Vec<i64> = self
            .emb
            .project(a)
            .iter()
            .map(|v| v.to_i64().unwrap_or(i64::MAX))
            .collect();
        if key != self.param.lambda {
            return Err(ArrangementError::NotInCoset);
        }
        Ok(a.iter().map(|&ai| ai.div_euclid(self.param.p)).collect())
    }

    /// Per-coordinate count of walls crossed between two coset points.
    pub fn delta(&self, a: &[i64], a2: &[i64]) -> Result<Vec<i64>, ArrangementError> {
        let x = self.weight_to_chamber(a)?;
        let y = self.weight_to_chamber(a2)?;
        Ok(x.iter().zip(&y).map(|(u, v)| (u - v).abs()).collect())
    }

    pub fn eta(x: &[i64], y: &[i64], u: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(y)
            .zip(u)
            .map(|((&xi, &yi), &ui)| ((xi - yi).abs() + (yi - ui).abs() - (xi - ui).abs()) / 2)
            .collect()
    }

    pub fn taxicab(x: &[i64], y: &[i64]) -> i64 {
        x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()
    }

    pub fn is_nonempty_integral(&self, x: &[i64]) -> bool {
        self.integral_witness(x).is_some()
    }

    /// An integer coset point inside the chamber box, when one exists.
    pub fn integral_witness(&self, x: &[i64]) -> Option<Vec<i64>> {
        if let Some(hit) = self.cache.lock().unwrap().get(x) {
            return hit.clone();
        }
        let w = self.integral_witness_uncached(x);
        self.cache.lock().unwrap().insert(x.to_vec(), w.clone());
        w
    }

    fn integral_witness_uncached(&self, x: &[i64]) -> Option<Vec<i64>> {
        let n = self.n();
        let d = self.quotient_rank();
        let p = self.param.p;
        assert_eq!(x.len(), n);
        if d == 0 {
            let ok = (0..n).all(|i| self.a0[i].div_euclid(p) == x[i]);
            return ok.then(|| self.a0.clone());
        }
        if self.emb.k == 0 {
            return Some(x.iter().map(|&xi| p * xi).collect());
        }
        if let Some(pivots) = &self.pivot_cols {
            return self.pivot_search(x, pivots);
        }
        self.box_search(x)
    }

    /// Walk the p^d lattice points of the box on a unimodular coordinate
    /// subset; each determines the full coset point.
    fn pivot_search(&self, x: &[i64], pivots: &[usize]) -> Option<Vec<i64>> {
        let d = pivots.len();
        let p = self.param.p;
        let n = self.n();
        let mut offsets = vec![0i64; d];
        loop {
            // candidate values on the pivot coordinates
            let rhs: Vec<i64> = (0..d)
                .map(|j| p * x[pivots[j]] + offsets[j] - self.a0[pivots[j]])
                .collect();
            let z: Vec<i64> = (0..d)
                .map(|r| (0..d).map(|c| self.pivot_inv[r][c] * rhs[c]).sum())
                .collect();
            let mut ok = true;
            let mut a = vec![0i64; n];
            for i in 0..n {
                let ai = self.a0[i]
                    + (0..d).map(|r| self.tperp[r][i] * z[r]).sum::<i64>();
                if ai.div_euclid(p) != x[i] {
                    ok = false;
                    break;
                }
                a[i] = ai;
            }
            if ok {
                return Some(a);
            }
            // odometer over [0, p)^d
            let mut pos = 0;
            loop {
                if pos == d {
                    return None;
                }
                offsets[pos] += 1;
                if offsets[pos] < p {
                    break;
                }
                offsets[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Fallback for embeddings without a unimodular kernel block: bound
    /// the coset coordinates by the real polytope and scan.
    fn box_search(&self, x: &[i64]) -> Option<Vec<i64>> {
        let d = self.quotient_rank();
        let p = self.param.p;
        let n = self.n();
        let a0q: Vec<Rat> = self.a0.iter().map(|&v| linalg::rat(v)).collect();
        let poly = self.box_polytope(x, &a0q, &vec![linalg::rat(0); n], linalg::rat_frac(-1, 1));
        // closed integer box: lo = p x, hi = p x + p − 1
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            let nrow: Vec<Rat> = (0..d).map(|r| linalg::rat(self.tperp[r][i])).collect();
            rows.push(nrow.clone());
            rhs.push(linalg::rat(p * x[i] + p - 1 - self.a0[i]));
            rows.push(nrow.iter().map(|v| -v.clone()).collect());
            rhs.push(linalg::rat(-(p * x[i] - self.a0[i])));
        }
        let _ = poly;
        let poly = RationalPolytope::new(rows, rhs);
        let graph = polytope::vertices_and_edges(&poly);
        if graph.is_empty() {
            return None;
        }
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for v in &graph.vertices {
            for r in 0..d {
                lo[r] = lo[r].min(v.point[r].floor().to_integer().to_i64()?);
                hi[r] = hi[r].max(v.point[r].ceil().to_integer().to_i64()?);
            }
        }
        let mut z = lo.clone();
        loop {
            let mut ok = true;
            let mut a = vec![0i64; n];
            for i in 0..n {
                let ai = self.a0[i] + (0..d).map(|r| self.tperp[r][i] * z[r]).sum::<i64>();
                if ai.div_euclid(p) != x[i] {
                    ok = false;
                    break;
                }
                a[i] = ai;
            }
            if ok {
                return Some(a);
            }
            let mut pos = 0;
            loop {
                if pos == d {
                    return None;
                }
                z[pos] += 1;
                if z[pos] <= hi[pos] {
                    break;
                }
                z[pos] = lo[pos];
                pos += 1;
            }
        }
    }

    /// Constraint rows of the perturbed open box in coset coordinates,
    /// with a slack column appended: feasible with slack > 0 iff the open
    /// box meets the coset.
    fn box_polytope(&self, x: &[i64], a0q: &[Rat], eps: &[Rat], t_floor: Rat) -> RationalPolytope {
        let d = self.quotient_rank();
        let p = self.param.p;
        let n = self.n();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            let mut up: Vec<Rat> = (0..d).map(|r| linalg::rat(self.tperp[r][i])).collect();
            let mut lo: Vec<Rat> = up.iter().map(|v| -v.clone()).collect();
            up.push(linalg::rat(1));
            lo.push(linalg::rat(1));
            rows.push(up);
            rhs.push(linalg::rat(p * x[i] + p) - &eps[i] - &a0q[i]);
            rows.push(lo);
            rhs.push(&a0q[i] - linalg::rat(p * x[i]) + &eps[i]);
        }
        let mut tcap = vec![linalg::rat(0); d];
        tcap.push(linalg::rat(1));
        rows.push(tcap.clone());
        rhs.push(linalg::rat(1));
        let tfl: Vec<Rat> = tcap.iter().map(|v| -v.clone()).collect();
        rows.push(tfl);
        rhs.push(-t_floor);
        RationalPolytope::new(rows, rhs)
    }

    /// Open-box feasibility over the reals for a (possibly rational)
    /// basepoint, decided by maximizing an interior margin.
    pub fn is_nonempty_real_at(
        &self,
        x: &[i64],
        eps: &[Rat],
        a0q: &[Rat],
    ) -> Result<bool, ArrangementError> {
        let poly = self.box_polytope(x, a0q, eps, linalg::rat(-1));
        let graph = polytope::vertices_and_edges(&poly);
        if graph.is_empty() {
            return Ok(false);
        }
        let d = self.quotient_rank();
        let best = graph
            .vertices
            .iter()
            .map(|v| v.point[d].clone())
            .max()
            .unwrap();
        if best.is_zero() {
            return Err(ArrangementError::DegeneratePerturbation(1));
        }
        Ok(best.is_positive())
    }

    pub fn is_nonempty_real(&self, x: &[i64], eps: &[Rat]) -> Result<bool, ArrangementError> {
        let a0q: Vec<Rat> = self.a0.iter().map(|&v| linalg::rat(v)).collect();
        self.is_nonempty_real_at(x, eps, &a0q)
    }

    /// All class keys, each with a canonical representative and integral
    /// witness, plus the adjacency arrows between class representatives.
    ///
    /// The sweep over candidate keys is complete: a nonempty chamber
    /// forces `lambda − p·key` into the image of the box `[0, p−1]^n`,
    /// which bounds each key coordinate.
    pub fn enumerate_classes(&self) -> Enumeration {
        let mut classes = Vec::new();
        for key in self.candidate_keys(0, self.param.p - 1) {
            let Some(rep) = self.lift_key(&key) else { continue };
            let rep = self.canonical_rep(&rep);
            if let Some(witness) = self.integral_witness(&rep) {
                classes.push(ClassInfo { key, representative: rep, witness });
            }
        }
        classes.sort();
        let index: BTreeMap<Vec<i64>, usize> = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.key.clone(), i))
            .collect();

        let mut arrows = Vec::new();
        for (ci, c) in classes.iter().enumerate() {
            for i in 0..self.n() {
                for sign in [1i8, -1i8] {
                    let mut nb = c.representative.clone();
                    nb[i] += sign as i64;
                    if self.is_nonempty_integral(&nb) {
                        let to = *index
                            .get(&self.class_key(&nb))
                            .expect("neighbor class must be enumerated");
                        arrows.push(Arrow { from: ci, to, coordinate: i, sign });
                    }
                }
            }
        }
        arrows.sort();
        Enumeration { classes, arrows, index }
    }

    /// Class keys of the perturbed real arrangement at a rational
    /// parameter.
    pub fn real_class_keys(
        &self,
        lambda_q: &[Rat],
        eps: &[Rat],
    ) -> Result<BTreeSet<Vec<i64>>, ArrangementError> {
        let a0q = lattice::coset_basepoint_rational(&self.emb, lambda_q);
        let mut keys = BTreeSet::new();
        for key in self.candidate_keys(-1, self.param.p) {
            let Some(rep) = self.lift_key(&key) else { continue };
            if self.is_nonempty_real_at(&rep, eps, &a0q)? {
                keys.insert(key);
            }
        }
        Ok(keys)
    }

    /// Candidate key box: coordinate j of a nonempty key satisfies
    /// lambda_j − p·key_j ∈ rho_j^T([lo_t, hi_t]^n).
    fn candidate_keys(&self, lo_t: i64, hi_t: i64) -> Vec<Vec<i64>> {
        let k = self.emb.k;
        if k == 0 {
            return vec![vec![]];
        }
        let p = self.param.p;
        let mut ranges = Vec::with_capacity(k);
        for j in 0..k {
            let mut lo = 0i64;
            let mut hi = 0i64;
            for i in 0..self.n() {
                let e = self.emb.rho[(i, j)].to_i64().expect("rho entry fits i64");
                lo += (e * lo_t).min(e * hi_t);
                hi += (e * lo_t).max(e * hi_t);
            }
            let l = self.param.lambda[j];
            // l − p·key ∈ [lo, hi]
            let kmin = div_ceil(l - hi, p);
            let kmax = (l - lo).div_euclid(p);
            ranges.push((kmin, kmax));
        }
        let mut out = Vec::new();
        let mut cur = ranges.iter().map(|r| r.0).collect::<Vec<_>>();
        if ranges.iter().any(|r| r.0 > r.1) {
            return out;
        }
        loop {
            out.push(cur.clone());
            let mut pos = 0;
            loop {
                if pos == k {
                    return out;
                }
                cur[pos] += 1;
                if cur[pos] <= ranges[pos].1 {
                    break;
                }
                cur[pos] = ranges[pos].0;
                pos += 1;
            }
        }
    }

    /// Some integer chamber index with the given key.
    fn lift_key(&self, key: &[i64]) -> Option<Chamber> {
        let rhs: Vec<Int> = key.iter().map(|&v| Int::from(v)).collect();
        let sol = intmat::solve(&self.emb.rho.transpose(), &rhs)?;
        sol.into_iter().map(|v| v.to_i64()).collect()
    }

    /// BFS over chamber classes from an explicit seed; finds the
    /// connected component of the adjacency graph. Used to cross-check
    /// the sweep and for seed-invariance tests.
    pub fn classes_bfs(&self, seed: &Chamber) -> BTreeSet<Vec<i64>> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        let start = self.canonical_rep(seed);
        if !self.is_nonempty_integral(&start) {
            return seen;
        }
        seen.insert(self.class_key(&start));
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for i in 0..self.n() {
                for s in [1i64, -1] {
                    let mut nb = x.clone();
                    nb[i] += s;
                    if !self.is_nonempty_integral(&nb) {
                        continue;
                    }
                    let key = self.class_key(&nb);
                    if seen.insert(key) {
                        queue.push_back(self.canonical_rep(&nb));
                    }
                }
            }
        }
        seen
    }

    /// Smoothness of the parameter: basis-count criterion first, then
    /// stability of the chamber set under rational perturbation.
    pub fn is_smooth(&self, seed: u64) -> Result<SmoothReport, ArrangementError> {
        let classes = self.enumerate_classes();
        let bases_count = lattice::bases(&self.emb).len();
        let class_count = classes.classes.len();
        if class_count == bases_count {
            return Ok(SmoothReport {
                smooth: true,
                reason: SmoothReason::BasisCountMatch,
                class_count,
                bases_count,
            });
        }
        let integral_keys: BTreeSet<Vec<i64>> =
            classes.classes.iter().map(|c| c.key.clone()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x736d6f6f7468);
        let mut stable = true;
        for _ in 0..4 {
            let lambda_q: Vec<Rat> = self
                .param
                .lambda
                .iter()
                .map(|&l| linalg::rat(l) + random_small_rat(&mut rng))
                .collect();
            let keys = self.real_keys_with_retry(&lambda_q, &mut rng)?;
            if keys != integral_keys {
                stable = false;
                break;
            }
        }
        Ok(SmoothReport {
            smooth: stable,
            reason: if stable {
                SmoothReason::PerturbationStable
            } else {
                SmoothReason::PerturbationUnstable
            },
            class_count,
            bases_count,
        })
    }

    pub fn real_keys_with_retry(
        &self,
        lambda_q: &[Rat],
        rng: &mut ChaCha8Rng,
    ) -> Result<BTreeSet<Vec<i64>>, ArrangementError> {
        for _ in 0..8 {
            let eps: Vec<Rat> = (0..self.n()).map(|_| random_eps(rng)).collect();
            match self.real_class_keys(lambda_q, &eps) {
                Err(ArrangementError::DegeneratePerturbation(_)) => continue,
                other => return other,
            }
        }
        Err(ArrangementError::DegeneratePerturbation(8))
    }

    /// Closed-box polytope of one or two chamber closures, in coset
    /// coordinates. Boundaries sit on the half-integer walls.
    pub fn pair_polytope(&self, x: &[i64], y: &[i64]) -> RationalPolytope {
        let d = self.quotient_rank();
        let p = self.param.p;
        let n = self.n();
        let half = linalg::rat_frac(1, 2);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            let lo = p * x[i].max(y[i]);
            let hi = p * x[i].min(y[i]) + p;
            let nrow: Vec<Rat> = (0..d).map(|r| linalg::rat(self.tperp[r][i])).collect();
            rows.push(nrow.clone());
            rhs.push(linalg::rat(hi - self.a0[i]) - &half);
            rows.push(nrow.iter().map(|v| -v.clone()).collect());
            rhs.push(linalg::rat(self.a0[i] - lo) + &half);
        }
        RationalPolytope::new(rows, rhs)
    }

    pub fn chamber_polytope(&self, x: &[i64]) -> RationalPolytope {
        self.pair_polytope(x, x)
    }

    /// Lifts `w` of the class with the given key such that
    /// `|center − w|_1 <= radius` and the chamber is nonempty.
    pub fn lifts_within_l1(&self, center: &[i64], key: &[i64], radius: i64) -> Vec<Chamber> {
        let mut out = Vec::new();
        let mut u = vec![0i64; self.n()];
        self.l1_scan(center, key, radius, 0, &mut u, &mut out);
        out.sort();
        out
    }

    fn l1_scan(
        &self,
        center: &[i64],
        key: &[i64],
        budget: i64,
        pos: usize,
        u: &mut Vec<i64>,
        out: &mut Vec<Chamber>,
    ) {
        if pos == self.n() {
            let w: Vec<i64> = center.iter().zip(u.iter()).map(|(c, d)| c + d).collect();
            if self.class_key(&w) == key && self.is_nonempty_integral(&w) {
                out.push(w);
            }
            return;
        }
        for v in -budget..=budget {
            u[pos] = v;
            self.l1_scan(center, key, budget - v.abs(), pos + 1, u, out);
        }
        u[pos] = 0;
    }

    /// Lifts `w` of the class whose closed box can meet the closed box of
    /// `center` (coordinatewise distance at most 1), nonempty only.
    pub fn lifts_within_linf1(&self, center: &[i64], key: &[i64]) -> Vec<Chamber> {
        let n = self.n();
        let mut out = Vec::new();
        for signs in (0..n).map(|_| -1i64..=1).multi_cartesian_product() {
            let w: Vec<i64> = center.iter().zip(&signs).map(|(c, s)| c + s).collect();
            if self.class_key(&w) == key && self.is_nonempty_integral(&w) {
                out.push(w);
            }
        }
        out.sort();
        out
    }

    /// Intersection complex of chamber-closure pairs over relative lifts.
    pub fn core_complex(&self, enumeration: &Enumeration) -> CoreComplex {
        let mut pairs = BTreeMap::new();
        let mut degeneracies = 0;
        let d = self.quotient_rank();
        for (i, ci) in enumeration.classes.iter().enumerate() {
            for (j, cj) in enumeration.classes.iter().enumerate() {
                let mut faces = Vec::new();
                for w in self.lifts_within_linf1(&ci.representative, &cj.key) {
                    if i == j && w == ci.representative {
                        continue;
                    }
                    let poly = self.pair_polytope(&ci.representative, &w);
                    let graph = polytope::vertices_and_edges(&poly);
                    if graph.is_empty() {
                        continue;
                    }
                    let taxicab = Self::taxicab(&ci.representative, &w);
                    let expected_codim = graph.dim as i64 == d as i64 - taxicab;
                    if !expected_codim {
                        degeneracies += 1;
                    }
                    faces.push(PairFace { lift: w, dim: graph.dim, taxicab, expected_codim });
                }
                if !faces.is_empty() {
                    pairs.insert((i, j), faces);
                }
            }
        }
        CoreComplex { pairs, degeneracies }
    }

    pub fn vertex_graph(&self, x: &[i64], y: &[i64]) -> VertexEdgeGraph {
        polytope::vertices_and_edges(&self.pair_polytope(x, y))
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

fn random_small_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.gen_range(-32767i64..=32767);
    linalg::rat_frac(num, 1 << 16)
}

fn random_eps(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.gen_range(1i64..=65535);
    linalg::rat_frac(num, 1 << 16)
}

/// Find a coordinate subset where the kernel block has determinant ±1 and
/// return it with the integer inverse of the block (rows of N restricted
/// to the subset).
fn find_unit_pivot(emb: &TorusEmbedding, tperp: &[Vec<i64>]) -> (Option<Vec<usize>>, Vec<Vec<i64>>) {
    let d = emb.quotient_rank();
    if d == 0 {
        return (Some(Vec::new()), Vec::new());
    }
    for cols in (0..emb.n).combinations(d) {
        // block M[r][c] = N_{cols[r], c} = tperp[c][cols[r]]
        let mut block = IntMat::zero(d, d);
        for r in 0..d {
            for c in 0..d {
                block[(r, c)] = Int::from(tperp[c][cols[r]]);
            }
        }
        let det = intmat::determinant(&block);
        if det.clone().abs().is_one() {
            // integer inverse via rational solves of M x = e_i
            let bq: Vec<Vec<Rat>> = (0..d)
                .map(|r| (0..d).map(|c| Rat::from(block[(r, c)].clone())).collect())
                .collect();
            let mut inv = vec![vec![0i64; d]; d];
            for col in 0..d {
                let e: Vec<Rat> = (0..d)
                    .map(|r| if r == col { linalg::rat(1) } else { linalg::rat(0) })
                    .collect();
                let sol = linalg::solve_square(&bq, &e).expect("unit determinant block");
                for r in 0..d {
                    assert!(sol[r].is_integer());
                    inv[r][col] = sol[r].to_integer().to_i64().expect("small inverse entry");
                }
            }
            return (Some(cols), inv);
        }
    }
    (None, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::IntMat;
    use crate::lattice::validate_embedding;

    pub fn p2_arrangement(lambda: i64) -> Arrangement {
        let emb = validate_embedding(IntMat::from_i64(&[vec![1], vec![1], vec![1]])).unwrap();
        Arrangement::new(emb, Parameter::new(vec![lambda], 5).unwrap()).unwrap()
    }

    pub fn circle_arrangement(p: i64) -> Arrangement {
        let emb = validate_embedding(IntMat::zero(1, 0)).unwrap();
        Arrangement::new(emb, Parameter::new(vec![], p).unwrap()).unwrap()
    }

    #[test]
    fn p2_chambers_and_witnesses() {
        let arr = p2_arrangement(1);
        assert_eq!(arr.weight_to_chamber(&[0, 0, 1]).unwrap(), vec![0, 0, 0]);
        assert_eq!(arr.weight_to_chamber(&[4, 4, -7]).unwrap(), vec![0, 0, -2]);
        assert!(arr.weight_to_chamber(&[0, 0, 0]).is_err());

        assert!(arr.is_nonempty_integral(&[0, 0, 0]));
        assert!(arr.is_nonempty_integral(&[0, 0, -1]));
        assert!(arr.is_nonempty_integral(&[0, 0, -2]));
        assert!(!arr.is_nonempty_integral(&[0, 0, 1]));
        assert!(!arr.is_nonempty_integral(&[1, 0, 0]));

        let w = arr.integral_witness(&[0, 0, 0]).unwrap();
        assert_eq!(arr.weight_to_chamber(&w).unwrap(), vec![0, 0, 0]);
        assert_eq!(w.iter().sum::<i64>(), 1);
    }

    #[test]
    fn p2_three_classes_with_quiver() {
        let arr = p2_arrangement(1);
        let e = arr.enumerate_classes();
        assert_eq!(e.classes.len(), 3);
        let keys: Vec<Vec<i64>> = e.classes.iter().map(|c| c.key.clone()).collect();
        assert_eq!(keys, vec![vec![-2], vec![-1], vec![0]]);
        // 3 wall orbits between adjacent classes, none between the ends
        let mut counts = BTreeMap::new();
        for (f, t, _) in e.edges() {
            *counts.entry((f.min(t), f.max(t))).or_insert(0) += 1;
        }
        assert_eq!(counts.get(&(0, 1)), Some(&3));
        assert_eq!(counts.get(&(1, 2)), Some(&3));
        assert_eq!(counts.get(&(0, 2)), None);
        assert_eq!(e.arrows.len(), 12);
    }

    #[test]
    fn p2_nonsmooth_residues() {
        for lambda in [-1i64, -2] {
            let arr = p2_arrangement(lambda);
            let e = arr.enumerate_classes();
            assert_eq!(e.classes.len(), 2, "lambda={lambda}");
            let rep = arr.is_smooth(0).unwrap();
            assert!(!rep.smooth);
            assert_eq!(rep.bases_count, 3);
        }
        let rep = p2_arrangement(1).is_smooth(0).unwrap();
        assert!(rep.smooth);
        assert_eq!(rep.reason, SmoothReason::BasisCountMatch);
    }

    #[test]
    fn circle_single_class() {
        let arr = circle_arrangement(5);
        let e = arr.enumerate_classes();
        assert_eq!(e.classes.len(), 1);
        // two directed loops through the two facets of the interval
        assert_eq!(e.arrows.len(), 2);
        assert!(e.arrows.iter().all(|a| a.from == 0 && a.to == 0));
        let rep = arr.is_smooth(0).unwrap();
        assert!(rep.smooth);
    }

    #[test]
    fn delta_and_eta_examples() {
        let arr = p2_arrangement(1);
        assert_eq!(arr.delta(&[0, 0, 1], &[-1, -1, 3]).unwrap(), vec![1, 1, 0]);
        assert_eq!(arr.delta(&[0, 0, 1], &[0, 0, 1]).unwrap(), vec![0, 0, 0]);
        assert_eq!(Arrangement::eta(&[0], &[1], &[0]), vec![1]);
        assert_eq!(Arrangement::eta(&[0], &[1], &[2]), vec![0]);
        assert_eq!(Arrangement::eta(&[0, 0], &[0, 0], &[0, 0]), vec![0, 0]);
    }

    #[test]
    fn delta_matches_chamber_distance() {
        let arr = p2_arrangement(1);
        let a = arr.integral_witness(&[0, 0, 0]).unwrap();
        let b = arr.integral_witness(&[0, 0, -2]).unwrap();
        let d = arr.delta(&a, &b).unwrap();
        assert_eq!(d, vec![0, 0, 2]);
    }

    #[test]
    fn integral_implies_real() {
        let arr = p2_arrangement(1);
        let eps = vec![
            linalg::rat_frac(3, 16),
            linalg::rat_frac(5, 16),
            linalg::rat_frac(7, 16),
        ];
        for x in [vec![0, 0, 0], vec![0, 0, -1], vec![0, 0, -2]] {
            assert!(arr.is_nonempty_integral(&x));
            assert!(arr.is_nonempty_real(&x, &eps).unwrap());
        }
    }

    #[test]
    fn nonsmooth_parameter_has_extra_real_chamber() {
        let arr = p2_arrangement(-1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let lambda_q = vec![linalg::rat(-1) + linalg::rat_frac(1, 64)];
        let keys = arr.real_keys_with_retry(&lambda_q, &mut rng).unwrap();
        assert_eq!(keys.len(), 3);
        assert_eq!(arr.enumerate_classes().classes.len(), 2);
    }

    #[test]
    fn bfs_matches_sweep_and_is_seed_invariant() {
        let arr = p2_arrangement(1);
        let e = arr.enumerate_classes();
        let sweep: BTreeSet<Vec<i64>> = e.classes.iter().map(|c| c.key.clone()).collect();
        for seed in [vec![0, 0, 0], vec![0, 0, -1], vec![1, 0, -1], vec![-1, 0, 0]] {
            assert_eq!(arr.classes_bfs(&seed), sweep);
        }
    }

    #[test]
    fn class_reps_are_lift_independent() {
        let arr = p2_arrangement(1);
        let x = vec![0, 0, -1];
        for gamma in [vec![1, -1, 0], vec![2, 0, -2], vec![-1, 2, -1]] {
            let shifted: Vec<i64> = x.iter().zip(&gamma).map(|(a, b)| a + b).collect();
            assert_eq!(arr.canonical_rep(&x), arr.canonical_rep(&shifted));
            assert_eq!(
                arr.is_nonempty_integral(&x),
                arr.is_nonempty_integral(&shifted)
            );
        }
    }

    #[test]
    fn p2_core_complex() {
        let arr = p2_arrangement(1);
        let e = arr.enumerate_classes();
        let core = arr.core_complex(&e);
        // keys sorted: 0 = C (key -2), 1 = B (key -1), 2 = A (key 0)
        let ab = core.pairs.get(&(2, 1)).unwrap();
        assert_eq!(ab.len(), 3);
        assert!(ab.iter().all(|f| f.dim == 1 && f.expected_codim));
        let ac = core.pairs.get(&(2, 0)).unwrap();
        assert_eq!(ac.len(), 3);
        assert!(ac.iter().all(|f| f.dim == 0 && f.expected_codim));
        // distinct lifts of the same class never meet
        assert!(core.pairs.get(&(2, 2)).is_none());
        assert_eq!(core.degeneracies, 0);
    }

    #[test]
    fn p2_chamber_shapes() {
        let arr = p2_arrangement(1);
        let tri = arr.vertex_graph(&[0, 0, 0], &[0, 0, 0]);
        assert_eq!(tri.vertices.len(), 3);
        let hex = arr.vertex_graph(&[0, 0, -1], &[0, 0, -1]);
        assert_eq!(hex.vertices.len(), 6);
        let tri2 = arr.vertex_graph(&[0, 0, -2], &[0, 0, -2]);
        assert_eq!(tri2.vertices.len(), 3);
        let seg = arr.vertex_graph(&[0, 0, 0], &[0, 0, -1]);
        assert_eq!(seg.dim, 1);
        assert_eq!(seg.vertices.len(), 2);
    }

    #[test]
    fn parameter_translation_equivariance() {
        // shifting lambda by p * rho^T(gamma) translates every chamber
        let arr1 = p2_arrangement(1);
        let arr2 = p2_arrangement(1 + 5 * 3);
        let e1 = arr1.enumerate_classes();
        let e2 = arr2.enumerate_classes();
        assert_eq!(e1.classes.len(), e2.classes.len());
        let k1: Vec<i64> = e1.classes.iter().map(|c| c.key[0]).collect();
        let k2: Vec<i64> = e2.classes.iter().map(|c| c.key[0]).collect();
        let shifted: Vec<i64> = k1.iter().map(|v| v + 3).collect();
        assert_eq!(k2, shifted);
    }

    #[test]
    fn nonprime_period_flagged() {
        let p = Parameter::new(vec![1], 6).unwrap();
        assert!(p.prime_warning);
        assert!(!Parameter::new(vec![1], 5).unwrap().prime_warning);
        assert!(Parameter::new(vec![1], 1).is_err());
    }
}
