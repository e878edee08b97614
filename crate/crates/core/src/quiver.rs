//! The Koszul-dual pair of graded quiver algebras on the chamber-class
//! quiver.
//!
//! Both algebras are quadratic over a central polynomial base: degree-1
//! arrows cross single walls, and the degree-2 base symbols (one per
//! coordinate) satisfy the linear relations cut out by the embedding on
//! one side and by its kernel on the other. Graded dimensions are
//! computed three independent ways: a closed form from the free-module
//! structure of wall-crossing morphisms, a cohomological route through
//! the h-vectors of intersection polytopes, and a brute-force truncation
//! of the presented algebra by exact linear algebra.

use std::collections::BTreeMap;

use num::{ToPrimitive, Zero};
use thiserror::Error;

use crate::arrangement::{Arrangement, Chamber, Enumeration};
use crate::linalg::{self, Rat};
use crate::polytope;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuiverError {
    #[error("truncation workload {cells} exceeds the cap {cap}; lower Q or raise HTK_MAX_CELLS")]
    TruncationTooLarge { cells: usize, cap: usize },
    #[error("quadratic duality fails between classes {x} and {y}: dim R + dim R_perp = {sum}, path space has dim {total}, orthogonality {orthogonal}")]
    DualityFailure { x: usize, y: usize, sum: usize, total: usize, orthogonal: bool },
    #[error("Euler-form reciprocity fails at classes ({x},{y}) degree {q}: got {value}, expected {expected}")]
    ReciprocityFailure { x: usize, y: usize, q: usize, value: i64, expected: i64 },
    #[error("polytope degeneracy in the cohomological route: {0}")]
    Polytope(#[from] polytope::PolytopeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    Hom,
    ExtDual,
}

#[derive(Debug, Clone)]
pub struct PathTerm {
    pub coeff: Rat,
    pub arrows: [usize; 2],
    pub steps: [(usize, i8); 2],
}

#[derive(Debug, Clone)]
pub struct BaseTerm {
    pub coeff: Rat,
    pub symbol: usize,
}

/// One homogeneous degree-2 relation, anchored at a concrete periodic
/// chamber so the monomial substitution downstream can replay it.
#[derive(Debug, Clone)]
pub struct RelationInstance {
    pub start: usize,
    pub end: usize,
    pub anchor: Chamber,
    pub label: &'static str,
    pub path_terms: Vec<PathTerm>,
    pub base_terms: Vec<BaseTerm>,
}

#[derive(Debug, Clone)]
pub struct QuadraticPresentation {
    pub kind: AlgebraKind,
    /// rank of the central base after its linear relations
    pub base_dim: usize,
    /// expression of each of the n base symbols in the chosen basis
    pub base_expr: Vec<Vec<Rat>>,
    pub relations: Vec<RelationInstance>,
    pub nonsmooth_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct HilbertMatrix {
    pub truncation: usize,
    pub route: &'static str,
    /// entries[x][y][q]
    pub entries: Vec<Vec<Vec<i64>>>,
}

impl HilbertMatrix {
    fn zero(classes: usize, q: usize, route: &'static str) -> Self {
        HilbertMatrix {
            truncation: q,
            route,
            entries: vec![vec![vec![0; q + 1]; classes]; classes],
        }
    }
}

/// Shared context: the arrangement, its class enumeration, and an index
/// of arrows by (class, coordinate, sign).
pub struct Ctx<'a> {
    pub arr: &'a Arrangement,
    pub enm: &'a Enumeration,
    arrow_index: BTreeMap<(usize, usize, i8), usize>,
}

impl<'a> Ctx<'a> {
    pub fn new(arr: &'a Arrangement, enm: &'a Enumeration) -> Self {
        let arrow_index = enm
            .arrows
            .iter()
            .enumerate()
            .map(|(idx, a)| ((a.from, a.coordinate, a.sign), idx))
            .collect();
        Ctx { arr, enm, arrow_index }
    }

    pub fn class_of(&self, x: &[i64]) -> usize {
        *self
            .enm
            .index
            .get(&self.arr.class_key(x))
            .expect("chamber class must be enumerated")
    }

    fn arrow_id(&self, from_chamber: &[i64], coordinate: usize, sign: i8) -> usize {
        let from = self.class_of(from_chamber);
        *self
            .arrow_index
            .get(&(from, coordinate, sign))
            .expect("arrow must exist for a nonempty wall crossing")
    }

    fn nonempty(&self, x: &[i64]) -> bool {
        self.arr.is_nonempty_integral(x)
    }
}

fn step(x: &[i64], i: usize, sign: i8) -> Chamber {
    let mut y = x.to_vec();
    y[i] += sign as i64;
    y
}

/// Express each of n symbols modulo the row space of `rel_rows`
/// (k' × n, rational) in a basis of the quotient; returns (basis_dim,
/// expressions).
fn quotient_expressions(rel_rows: &[Vec<i64>], n: usize) -> (usize, Vec<Vec<Rat>>) {
    let mut m: Vec<Vec<Rat>> = rel_rows
        .iter()
        .map(|row| row.iter().map(|&v| linalg::rat(v)).collect())
        .collect();
    let pivots = linalg::rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let base_dim = free.len();
    let mut expr = vec![vec![linalg::rat(0); base_dim]; n];
    for (slot, &c) in free.iter().enumerate() {
        expr[c][slot] = linalg::rat(1);
    }
    for (r, &p) in pivots.iter().enumerate() {
        for (slot, &c) in free.iter().enumerate() {
            expr[p][slot] = -m[r][c].clone();
        }
    }
    (base_dim, expr)
}

fn two_path(ctx: &Ctx, r: &[i64], s1: (usize, i8), s2: (usize, i8), coeff: Rat) -> PathTerm {
    let mid = step(r, s1.0, s1.1);
    PathTerm {
        coeff,
        arrows: [ctx.arrow_id(r, s1.0, s1.1), ctx.arrow_id(&mid, s2.0, s2.1)],
        steps: [s1, s2],
    }
}

fn square_relations(ctx: &Ctx, ci: usize, r: &[i64], anti: bool) -> Vec<RelationInstance> {
    let n = ctx.arr.n();
    let second = if anti { linalg::rat(1) } else { linalg::rat(-1) };
    let mut out = Vec::new();
    let mut push = |s1: (usize, i8), s2: (usize, i8), label: &'static str| {
        let m1 = step(r, s1.0, s1.1);
        let m2 = step(r, s2.0, s2.1);
        let target = step(&m1, s2.0, s2.1);
        if ctx.nonempty(&m1) && ctx.nonempty(&m2) && ctx.nonempty(&target) {
            out.push(RelationInstance {
                start: ci,
                end: ctx.class_of(&target),
                anchor: r.to_vec(),
                label,
                path_terms: vec![
                    two_path(ctx, r, s1, s2, linalg::rat(1)),
                    two_path(ctx, r, s2, s1, second.clone()),
                ],
                base_terms: vec![],
            });
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            push((i, 1), (j, 1), "square-up");
            push((i, -1), (j, -1), "square-down");
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                push((i, 1), (j, -1), "square-mixed");
            }
        }
    }
    out
}

/// The wall-crossing algebra: arrows both ways through every wall, a
/// round trip through a wall equals the central symbol of its
/// coordinate, and all squares commute.
pub fn build_h(ctx: &Ctx, smooth: bool) -> QuadraticPresentation {
    let n = ctx.arr.n();
    let rho_rows: Vec<Vec<i64>> = (0..ctx.arr.emb.k)
        .map(|j| {
            (0..n)
                .map(|i| ctx.arr.emb.rho[(i, j)].to_i64().expect("rho entry fits i64"))
                .collect()
        })
        .collect();
    let (base_dim, base_expr) = quotient_expressions(&rho_rows, n);

    let mut relations = Vec::new();
    for (ci, c) in ctx.enm.classes.iter().enumerate() {
        let r = &c.representative;
        for i in 0..n {
            for sign in [1i8, -1] {
                let nb = step(r, i, sign);
                if ctx.nonempty(&nb) {
                    relations.push(RelationInstance {
                        start: ci,
                        end: ci,
                        anchor: r.clone(),
                        label: "round-trip",
                        path_terms: vec![two_path(ctx, r, (i, sign), (i, -sign), linalg::rat(1))],
                        base_terms: vec![BaseTerm { coeff: linalg::rat(-1), symbol: i }],
                    });
                }
            }
        }
        relations.extend(square_relations(ctx, ci, r, false));
    }
    QuadraticPresentation {
        kind: AlgebraKind::Hom,
        base_dim,
        base_expr,
        relations,
        nonsmooth_warning: !smooth,
    }
}

/// The quadratic dual: round trips through the walls of a coordinate sum
/// to that coordinate's central symbol, squares anticommute, and a
/// length-2 path with no companion path vanishes.
pub fn build_h_dual(ctx: &Ctx, smooth: bool) -> QuadraticPresentation {
    let n = ctx.arr.n();
    let tperp_rows = ctx.arr.tperp.clone();
    let (base_dim, base_expr) = quotient_expressions(&tperp_rows, n);

    let mut relations = Vec::new();
    for (ci, c) in ctx.enm.classes.iter().enumerate() {
        let r = &c.representative;
        for i in 0..n {
            let mut path_terms = Vec::new();
            for sign in [1i8, -1] {
                if ctx.nonempty(&step(r, i, sign)) {
                    path_terms.push(two_path(ctx, r, (i, sign), (i, -sign), linalg::rat(1)));
                }
            }
            relations.push(RelationInstance {
                start: ci,
                end: ci,
                anchor: r.clone(),
                label: "round-trip-sum",
                path_terms,
                base_terms: vec![BaseTerm { coeff: linalg::rat(-1), symbol: i }],
            });
        }
        relations.extend(square_relations(ctx, ci, r, true));

        // lone length-2 paths vanish
        let mut by_target: BTreeMap<Chamber, Vec<PathTerm>> = BTreeMap::new();
        for i in 0..n {
            for s1 in [1i8, -1] {
                let mid = step(r, i, s1);
                if !ctx.nonempty(&mid) {
                    continue;
                }
                for j in 0..n {
                    for s2 in [1i8, -1] {
                        let target = step(&mid, j, s2);
                        if target == *r || !ctx.nonempty(&target) {
                            continue;
                        }
                        by_target
                            .entry(target)
                            .or_default()
                            .push(two_path(ctx, r, (i, s1), (j, s2), linalg::rat(1)));
                    }
                }
            }
        }
        for (target, terms) in by_target {
            if terms.len() == 1 {
                relations.push(RelationInstance {
                    start: ci,
                    end: ctx.class_of(&target),
                    anchor: r.clone(),
                    label: "lone-path",
                    path_terms: terms,
                    base_terms: vec![],
                });
            }
        }
    }
    QuadraticPresentation {
        kind: AlgebraKind::ExtDual,
        base_dim,
        base_expr,
        relations,
        nonsmooth_warning: !smooth,
    }
}

fn binomial_i64(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out = 1i64;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// Number of degree-j monomials in g commuting variables.
fn monomial_count(j: i64, g: i64) -> i64 {
    if g == 0 {
        return if j == 0 { 1 } else { 0 };
    }
    binomial_i64(j + g - 1, g - 1)
}

/// Closed-form graded dimensions of the wall-crossing algebra: each lift
/// of the target class contributes a free rank-one module over the
/// central base, generated in the taxicab distance.
pub fn hom_dims_h(ctx: &Ctx, q: usize) -> HilbertMatrix {
    let classes = ctx.enm.classes.len();
    let g = ctx.arr.quotient_rank() as i64;
    let mut m = HilbertMatrix::zero(classes, q, "closed-form");
    for (xi, cx) in ctx.enm.classes.iter().enumerate() {
        for (yi, cy) in ctx.enm.classes.iter().enumerate() {
            for w in ctx
                .arr
                .lifts_within_l1(&cx.representative, &cy.key, q as i64)
            {
                let dist = Arrangement::taxicab(&cx.representative, &w) as usize;
                let mut deg = dist;
                while deg <= q {
                    m.entries[xi][yi][deg] += monomial_count(((deg - dist) / 2) as i64, g);
                    deg += 2;
                }
            }
        }
    }
    m
}

/// Cohomological graded dimensions of the dual: each relative lift whose
/// closed chamber boxes meet contributes the h-vector of the intersection
/// polytope, shifted by the taxicab distance.
pub fn ext_dims_from_toric(ctx: &Ctx, q: usize, seed: u64) -> Result<HilbertMatrix, QuiverError> {
    let classes = ctx.enm.classes.len();
    let mut m = HilbertMatrix::zero(classes, q, "toric");
    for (xi, cx) in ctx.enm.classes.iter().enumerate() {
        for (yi, cy) in ctx.enm.classes.iter().enumerate() {
            for w in ctx.arr.lifts_within_linf1(&cx.representative, &cy.key) {
                let graph = ctx.arr.vertex_graph(&cx.representative, &w);
                if graph.is_empty() {
                    continue;
                }
                let h = polytope::h_vector_auto(&graph, seed)?;
                let dist = Arrangement::taxicab(&cx.representative, &w) as usize;
                for (i, hi) in h.iter().enumerate() {
                    let deg = dist + 2 * i;
                    if deg <= q {
                        m.entries[xi][yi][deg] += hi;
                    }
                }
            }
        }
    }
    Ok(m)
}

/// All composable arrow sequences indexed by length and start class.
struct PathTable {
    /// [len][from] -> list of (arrow sequence, end class)
    by_len_from: Vec<Vec<Vec<(Vec<usize>, usize)>>>,
}

impl PathTable {
    fn build(ctx: &Ctx, max_len: usize, cap: usize) -> Result<PathTable, QuiverError> {
        let classes = ctx.enm.classes.len();
        let mut by_len_from = Vec::with_capacity(max_len + 1);
        by_len_from
            .push((0..classes).map(|c| vec![(Vec::new(), c)]).collect::<Vec<_>>());
        let mut total = classes;
        for len in 1..=max_len {
            let prev: &Vec<Vec<(Vec<usize>, usize)>> = &by_len_from[len - 1];
            let mut layer: Vec<Vec<(Vec<usize>, usize)>> = vec![Vec::new(); classes];
            for from in 0..classes {
                for (path, end) in &prev[from] {
                    for (aid, arrow) in ctx.enm.arrows.iter().enumerate() {
                        if arrow.from == *end {
                            let mut next = path.clone();
                            next.push(aid);
                            layer[from].push((next, arrow.to));
                            total += 1;
                            if total > cap {
                                return Err(QuiverError::TruncationTooLarge {
                                    cells: total,
                                    cap,
                                });
                            }
                        }
                    }
                }
            }
            by_len_from.push(layer);
        }
        Ok(PathTable { by_len_from })
    }

    fn paths(&self, len: usize, from: usize, to: usize) -> Vec<&Vec<usize>> {
        self.by_len_from[len][from]
            .iter()
            .filter(|(_, end)| *end == to)
            .map(|(p, _)| p)
            .collect()
    }
}

fn monomials(dim: usize, deg: usize) -> Vec<Vec<u32>> {
    if dim == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; dim];
    fill_monomials(dim, deg, 0, &mut cur, &mut out);
    out
}

fn fill_monomials(dim: usize, left: usize, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos == dim - 1 {
        cur[pos] = left as u32;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for v in 0..=left {
        cur[pos] = v as u32;
        fill_monomials(dim, left - v, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// Incremental row-echelon accumulator over the rationals.
struct Echelon {
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut v: Vec<Rat>) {
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    let sub = &f * r;
                    *x = &*x - &sub;
                }
            }
        }
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[pivot].clone();
            for x in v.iter_mut() {
                *x = &*x / &inv;
            }
            // keep earlier rows reduced against the new pivot
            for (_, row) in self.rows.iter_mut() {
                if !row[pivot].is_zero() {
                    let f = row[pivot].clone();
                    for (x, r) in row.iter_mut().zip(&v) {
                        let sub = &f * r;
                        *x = &*x - &sub;
                    }
                }
            }
            self.rows.push((pivot, v));
            self.rows.sort_by_key(|(p, _)| *p);
        }
    }
}

/// Brute-force graded dimensions of the presented algebra: spanning
/// monomial-path sets modulo the two-sided ideal of the relations,
/// degree by degree, by exact rational elimination.
pub fn truncated_dims_oracle(
    ctx: &Ctx,
    pres: &QuadraticPresentation,
    q: usize,
    cap: usize,
) -> Result<HilbertMatrix, QuiverError> {
    let classes = ctx.enm.classes.len();
    let table = PathTable::build(ctx, q, cap)?;
    let mut m = HilbertMatrix::zero(classes, q, "oracle");

    for x in 0..classes {
        for y in 0..classes {
            for deg in 0..=q {
                m.entries[x][y][deg] = component_dim(pres, &table, x, y, deg, cap)?;
            }
        }
    }
    Ok(m)
}

fn component_dim(
    pres: &QuadraticPresentation,
    table: &PathTable,
    x: usize,
    y: usize,
    deg: usize,
    cap: usize,
) -> Result<i64, QuiverError> {
    // spanning set: (monomial in the base, path of complementary length)
    let mut columns: BTreeMap<(Vec<u32>, Vec<usize>), usize> = BTreeMap::new();
    let mut len = deg as i64;
    while len >= 0 {
        let mdeg = ((deg as i64 - len) / 2) as usize;
        for mono in monomials(pres.base_dim, mdeg) {
            for path in table.paths(len as usize, x, y) {
                let idx = columns.len();
                columns.insert((mono.clone(), path.clone()), idx);
            }
        }
        len -= 2;
    }
    let ncols = columns.len();
    if ncols == 0 {
        return Ok(0);
    }

    let mut ech = Echelon::new();
    let mut cells = 0usize;
    for rel in &pres.relations {
        if deg < 2 {
            break;
        }
        for l_left in 0..=deg - 2 {
            for l_right in 0..=deg.saturating_sub(2 + l_left) {
                let rem = deg - 2 - l_left - l_right;
                if rem % 2 != 0 {
                    continue;
                }
                let mdeg = rem / 2;
                let lefts = table.paths(l_left, x, rel.start);
                let rights = table.paths(l_right, rel.end, y);
                for left in &lefts {
                    for right in &rights {
                        for mono in monomials(pres.base_dim, mdeg) {
                            let mut row = vec![linalg::rat(0); ncols];
                            let mut nonzero = false;
                            for t in &rel.path_terms {
                                let mut p: Vec<usize> = (*left).clone();
                                p.extend_from_slice(&t.arrows);
                                p.extend_from_slice(right);
                                let col = columns[&(mono.clone(), p)];
                                row[col] = &row[col] + &t.coeff;
                                nonzero = true;
                            }
                            for t in &rel.base_terms {
                                let mut p: Vec<usize> = (*left).clone();
                                p.extend_from_slice(right);
                                for (slot, e) in pres.base_expr[t.symbol].iter().enumerate() {
                                    if e.is_zero() {
                                        continue;
                                    }
                                    let mut mo = mono.clone();
                                    mo[slot] += 1;
                                    let col = columns[&(mo, p.clone())];
                                    let add = &t.coeff * e;
                                    row[col] = &row[col] + &add;
                                    nonzero = true;
                                }
                            }
                            if nonzero {
                                cells += ncols;
                                if cells > cap {
                                    return Err(QuiverError::TruncationTooLarge { cells, cap });
                                }
                                ech.insert(row);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((ncols - ech.rank()) as i64)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DualityPair {
    pub x: usize,
    pub y: usize,
    pub path_dim: usize,
    pub dim_h: usize,
    pub dim_dual: usize,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DualityReport {
    pub pairs: Vec<DualityPair>,
}

/// Degree-2 relation span of a presentation inside the pure length-2 path
/// space for a fixed class pair, with base symbols eliminated by exact
/// row reduction (base columns first).
fn relation_span_paths(
    pres: &QuadraticPresentation,
    pair_cols: &BTreeMap<[usize; 2], usize>,
    x: usize,
    y: usize,
) -> Vec<Vec<Rat>> {
    let base = pres.base_dim;
    let total = base + pair_cols.len();
    let mut rows = Vec::new();
    for rel in &pres.relations {
        if rel.start != x || rel.end != y {
            continue;
        }
        let mut row = vec![linalg::rat(0); total];
        for t in &rel.path_terms {
            let col = base + pair_cols[&t.arrows];
            row[col] = &row[col] + &t.coeff;
        }
        for t in &rel.base_terms {
            for (slot, e) in pres.base_expr[t.symbol].iter().enumerate() {
                let add = &t.coeff * e;
                row[slot] = &row[slot] + &add;
            }
        }
        rows.push(row);
    }
    let _ = linalg::rref(&mut rows);
    rows.retain(|r| r[..base].iter().all(|v| v.is_zero()) && !linalg::is_zero_vec(r));
    rows.iter().map(|r| r[base..].to_vec()).collect()
}

/// Check that the two relation spaces are orthogonal complements under
/// the arrow-pair pairing, for every class pair.
pub fn quadratic_duality_check(
    ctx: &Ctx,
    pres_h: &QuadraticPresentation,
    pres_dual: &QuadraticPresentation,
) -> Result<DualityReport, QuiverError> {
    let classes = ctx.enm.classes.len();
    let mut pairs = Vec::new();
    for x in 0..classes {
        for y in 0..classes {
            let mut pair_cols: BTreeMap<[usize; 2], usize> = BTreeMap::new();
            for (a1, arr1) in ctx.enm.arrows.iter().enumerate() {
                if arr1.from != x {
                    continue;
                }
                for (a2, arr2) in ctx.enm.arrows.iter().enumerate() {
                    if arr2.from == arr1.to && arr2.to == y {
                        let idx = pair_cols.len();
                        pair_cols.insert([a1, a2], idx);
                    }
                }
            }
            let rh = relation_span_paths(pres_h, &pair_cols, x, y);
            let rd = relation_span_paths(pres_dual, &pair_cols, x, y);
            let orthogonal = rh
                .iter()
                .all(|u| rd.iter().all(|v| linalg::dot(u, v).is_zero()));
            let total = pair_cols.len();
            let sum = rh.len() + rd.len();
            if !orthogonal || sum != total {
                return Err(QuiverError::DualityFailure { x, y, sum, total, orthogonal });
            }
            pairs.push(DualityPair { x, y, path_dim: total, dim_h: rh.len(), dim_dual: rd.len() });
        }
    }
    Ok(DualityReport { pairs })
}

/// Euler-form reciprocity of the Koszul pair: the alternating convolution
/// of the two Hilbert matrices is the identity.
pub fn koszulity_check(
    dual_dims: &HilbertMatrix,
    h_dims: &HilbertMatrix,
    q: usize,
) -> Result<(), QuiverError> {
    let classes = h_dims.entries.len();
    assert!(dual_dims.truncation >= q && h_dims.truncation >= q);
    for x in 0..classes {
        for y in 0..classes {
            for deg in 0..=q {
                let mut sum = 0i64;
                for z in 0..classes {
                    for j in 0..=deg {
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        sum += sign
                            * dual_dims.entries[x][z][j]
                            * h_dims.entries[z][y][deg - j];
                    }
                }
                let expected = if x == y && deg == 0 { 1 } else { 0 };
                if sum != expected {
                    return Err(QuiverError::ReciprocityFailure {
                        x,
                        y,
                        q: deg,
                        value: sum,
                        expected,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Zero below the minimal taxicab distance between the classes; sanity
/// property of any dimension route.
pub fn min_distance(ctx: &Ctx, x: usize, y: usize, horizon: i64) -> Option<i64> {
    let cx = &ctx.enm.classes[x];
    let cy = &ctx.enm.classes[y];
    ctx.arr
        .lifts_within_l1(&cx.representative, &cy.key, horizon)
        .iter()
        .map(|w| Arrangement::taxicab(&cx.representative, w))
        .min()
}

pub fn default_cell_cap() -> usize {
    std::env::var("HTK_MAX_CELLS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(40_000_000)
}
