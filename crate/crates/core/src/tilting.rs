//! The combinatorial tilting bundle: one line-bundle label per chamber
//! class, monomial sections between lifts, and a syntactic check that the
//! wall-crossing algebra acts as the endomorphism algebra of the bundle.
//!
//! Everything is exponent arithmetic in the commutative ring ZZ[z_1..z_n,
//! w_1..w_n]: a section for the displacement b picks up z_i^{b_i} when
//! b_i > 0 and w_i^{-b_i} when b_i < 0, arrows compose by adding
//! exponents, and the central symbol of coordinate i maps to z_i w_i.

use std::collections::BTreeMap;

use num::Zero;
use thiserror::Error;

use crate::arrangement::Chamber;
use crate::linalg::{self, Rat};
use crate::quiver::{Ctx, QuadraticPresentation, RelationInstance};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TiltingError {
    #[error("relation '{label}' anchored at {anchor:?} does not vanish under the monomial substitution")]
    RelationMismatch { label: &'static str, anchor: Chamber },
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LineBundleLabel {
    pub class_key: Vec<i64>,
    pub representative: Chamber,
}

/// A monomial in the z and w variables; exponents are disjointly
/// supported for a bare section and mix only under multiplication.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub struct MonomialSection {
    pub z: Vec<u32>,
    pub w: Vec<u32>,
}

impl MonomialSection {
    pub fn one(n: usize) -> Self {
        MonomialSection { z: vec![0; n], w: vec![0; n] }
    }

    pub fn degree(&self) -> u32 {
        self.z.iter().sum::<u32>() + self.w.iter().sum::<u32>()
    }

    pub fn mul(&self, other: &MonomialSection) -> MonomialSection {
        MonomialSection {
            z: self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect(),
            w: self.w.iter().zip(&other.w).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn to_string_pretty(&self) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.z.iter().enumerate() {
            if e > 0 {
                parts.push(format!("z{}^{}", i + 1, e));
            }
        }
        for (i, &e) in self.w.iter().enumerate() {
            if e > 0 {
                parts.push(format!("w{}^{}", i + 1, e));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// The section for the displacement `b = y - x`.
pub fn section(x: &[i64], y: &[i64]) -> MonomialSection {
    let n = x.len();
    let mut m = MonomialSection::one(n);
    for i in 0..n {
        let b = y[i] - x[i];
        if b > 0 {
            m.z[i] = b as u32;
        } else if b < 0 {
            m.w[i] = (-b) as u32;
        }
    }
    m
}

fn symbol_monomial(n: usize, i: usize) -> MonomialSection {
    let mut m = MonomialSection::one(n);
    m.z[i] = 1;
    m.w[i] = 1;
    m
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SummandReport {
    pub summands: Vec<LineBundleLabel>,
    pub is_generator: bool,
}

pub fn tilting_summands(ctx: &Ctx, smooth: bool) -> SummandReport {
    SummandReport {
        summands: ctx
            .enm
            .classes
            .iter()
            .map(|c| LineBundleLabel {
                class_key: c.key.clone(),
                representative: c.representative.clone(),
            })
            .collect(),
        is_generator: smooth,
    }
}

fn accumulate(
    poly: &mut BTreeMap<MonomialSection, Rat>,
    m: MonomialSection,
    coeff: &Rat,
) {
    let zero = {
        let entry = poly.entry(m.clone()).or_insert_with(|| linalg::rat(0));
        *entry = &*entry + coeff;
        entry.is_zero()
    };
    if zero {
        poly.remove(&m);
    }
}

fn relation_image(n: usize, rel: &RelationInstance) -> BTreeMap<MonomialSection, Rat> {
    let mut poly = BTreeMap::new();
    for t in &rel.path_terms {
        let mut pos = rel.anchor.clone();
        let mut m = MonomialSection::one(n);
        for &(i, sign) in &t.steps {
            let mut next = pos.clone();
            next[i] += sign as i64;
            m = m.mul(&section(&pos, &next));
            pos = next;
        }
        accumulate(&mut poly, m, &t.coeff);
    }
    for t in &rel.base_terms {
        accumulate(&mut poly, symbol_monomial(n, t.symbol), &t.coeff);
    }
    poly
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct EndIsoReport {
    pub relations_checked: usize,
    pub pass: bool,
}

/// Substitute every instantiated relation of the wall-crossing algebra
/// into the polynomial ring and check it vanishes identically.
pub fn verify_end_iso(
    ctx: &Ctx,
    pres: &QuadraticPresentation,
) -> Result<EndIsoReport, TiltingError> {
    let n = ctx.arr.n();
    for rel in &pres.relations {
        if !relation_image(n, rel).is_empty() {
            return Err(TiltingError::RelationMismatch {
                label: rel.label,
                anchor: rel.anchor.clone(),
            });
        }
    }
    Ok(EndIsoReport { relations_checked: pres.relations.len(), pass: true })
}

/// Composition defect of two consecutive sections: the concatenated
/// product exceeds the direct section by the overshoot of each
/// coordinate, one central factor z_i w_i per unit.
pub fn eta_exponents(x: &[i64], y: &[i64], u: &[i64]) -> Vec<i64> {
    (0..x.len())
        .map(|i| {
            let b = y[i] - x[i];
            let b2 = u[i] - y[i];
            b.max(0) + b2.max(0) - (b + b2).max(0)
        })
        .collect()
}

/// section(x,y)·section(y,u) = ∏ (z_i w_i)^{η_i} · section(x,u), checked
/// exactly on exponent vectors.
pub fn check_composition(x: &[i64], y: &[i64], u: &[i64]) -> bool {
    let n = x.len();
    let lhs = section(x, y).mul(&section(y, u));
    let mut rhs = section(x, u);
    for (i, &e) in eta_exponents(x, y, u).iter().enumerate() {
        debug_assert!(e >= 0);
        rhs.z[i] += e as u32;
        rhs.w[i] += e as u32;
    }
    let _ = n;
    lhs == rhs
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DegreeRow {
    pub from: usize,
    pub to: usize,
    pub degree: usize,
    pub algebra_dim: i64,
    pub monomial_count: i64,
}

/// Count monomial sections of each degree between two summands: one
/// generating section per lift, times an arbitrary monomial in the n
/// central products z_i w_i. Upper-bounds the algebra dimension; exact
/// when the subtorus is trivial.
pub fn monomial_degree_table(ctx: &Ctx, dims: &crate::quiver::HilbertMatrix) -> Vec<DegreeRow> {
    let n = ctx.arr.n() as i64;
    let q = dims.truncation;
    let classes = ctx.enm.classes.len();
    let mut rows = Vec::new();
    for x in 0..classes {
        for y in 0..classes {
            let mut counts = vec![0i64; q + 1];
            let rep = &ctx.enm.classes[x].representative;
            let key = &ctx.enm.classes[y].key;
            for w in ctx.arr.lifts_within_l1(rep, key, q as i64) {
                let dist = crate::arrangement::Arrangement::taxicab(rep, &w) as usize;
                let mut deg = dist;
                while deg <= q {
                    counts[deg] += compositions(((deg - dist) / 2) as i64, n);
                    deg += 2;
                }
            }
            for (deg, &c) in counts.iter().enumerate() {
                rows.push(DegreeRow {
                    from: x,
                    to: y,
                    degree: deg,
                    algebra_dim: dims.entries[x][y][deg],
                    monomial_count: c,
                });
            }
        }
    }
    rows
}

fn compositions(j: i64, vars: i64) -> i64 {
    if vars == 0 {
        return if j == 0 { 1 } else { 0 };
    }
    let mut out = 1i64;
    let n = j + vars - 1;
    let k = vars - 1;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}
