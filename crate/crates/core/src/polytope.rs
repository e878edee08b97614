//! Exact polytope machinery: vertex/edge enumeration for bounded rational
//! H-polytopes, the Morse-count h-vector of a simple polytope, and an
//! independent face-lattice route to the same numbers.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{self, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("polytope is empty")]
    EmptyIntersection,
    #[error("polytope is not simple: vertex {vertex} lies on {incident} edges in dimension {dim}")]
    NotSimple { vertex: usize, incident: usize, dim: usize },
    #[error("could not find a functional separating all edges after {attempts} attempts")]
    DegenerateFunctional { attempts: usize },
}

/// `{ z : a z <= b }` with exact rational data. All consumers assume the
/// feasible set is bounded.
#[derive(Debug, Clone)]
pub struct RationalPolytope {
    pub d: usize,
    pub a: Vec<Vec<Rat>>,
    pub b: Vec<Rat>,
}

impl RationalPolytope {
    pub fn new(a: Vec<Vec<Rat>>, b: Vec<Rat>) -> Self {
        let d = a.first().map_or(0, |r| r.len());
        assert_eq!(a.len(), b.len());
        RationalPolytope { d, a, b }
    }

    pub fn contains(&self, z: &[Rat]) -> bool {
        self.a
            .iter()
            .zip(&self.b)
            .all(|(row, rhs)| linalg::dot(row, z) <= *rhs)
    }
}

#[derive(Debug, Clone)]
pub struct Vertex {
    pub point: Vec<Rat>,
    /// indices of all constraints tight at this point
    pub tight: BTreeSet<usize>,
}

#[derive(Debug, Clone)]
pub struct VertexEdgeGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
    /// affine dimension of the feasible set
    pub dim: usize,
    pub simple: bool,
}

impl VertexEdgeGraph {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn incident_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.vertices.len()];
        for &(u, v) in &self.edges {
            counts[u] += 1;
            counts[v] += 1;
        }
        counts
    }
}

/// Enumerate all vertices by solving every d-subset of constraints, then
/// recover edges from common tight sets of rank d−1.
pub fn vertices_and_edges(p: &RationalPolytope) -> VertexEdgeGraph {
    let d = p.d;
    let m = p.a.len();

    let mut points: Vec<Vec<Rat>> = Vec::new();
    if d == 0 {
        if p.b.iter().all(|rhs| !rhs.is_negative()) {
            points.push(Vec::new());
        }
    } else {
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
        while let Some((start, chosen)) = stack.pop() {
            if chosen.len() == d {
                let sub_a: Vec<Vec<Rat>> = chosen.iter().map(|&i| p.a[i].clone()).collect();
                let sub_b: Vec<Rat> = chosen.iter().map(|&i| p.b[i].clone()).collect();
                if let Some(z) = linalg::solve_square(&sub_a, &sub_b) {
                    if p.contains(&z) && !points.contains(&z) {
                        points.push(z);
                    }
                }
                continue;
            }
            for i in start..m {
                let mut next = chosen.clone();
                next.push(i);
                stack.push((i + 1, next));
            }
        }
    }
    points.sort();

    let vertices: Vec<Vertex> = points
        .into_iter()
        .map(|point| {
            let tight = (0..m)
                .filter(|&i| linalg::dot(&p.a[i], &point) == p.b[i])
                .collect();
            Vertex { point, tight }
        })
        .collect();

    let dim = linalg::affine_rank(
        &vertices.iter().map(|v| v.point.clone()).collect::<Vec<_>>(),
    );

    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let common: Vec<Vec<Rat>> = vertices[i]
                .tight
                .intersection(&vertices[j].tight)
                .map(|&c| p.a[c].clone())
                .collect();
            if d >= 1 && linalg::rank(common) == d - 1 {
                edges.push((i, j));
            }
        }
    }

    let mut graph = VertexEdgeGraph { vertices, edges, dim, simple: true };
    let counts = graph.incident_counts();
    graph.simple = counts.iter().all(|&c| c == graph.dim) || graph.vertices.len() <= 1;
    graph
}

/// Morse-count h-vector of a simple polytope: `h_i` is the number of
/// vertices with exactly `i` strictly decreasing edge directions under
/// the functional `xi`.
pub fn h_vector(graph: &VertexEdgeGraph, xi: &[Rat]) -> Result<Vec<i64>, PolytopeError> {
    if graph.is_empty() {
        return Err(PolytopeError::EmptyIntersection);
    }
    if !graph.simple {
        let counts = graph.incident_counts();
        let bad = counts.iter().position(|&c| c != graph.dim).unwrap_or(0);
        return Err(PolytopeError::NotSimple {
            vertex: bad,
            incident: counts.get(bad).copied().unwrap_or(0),
            dim: graph.dim,
        });
    }
    let mut h = vec![0i64; graph.dim + 1];
    let mut down = vec![0usize; graph.vertices.len()];
    for &(u, v) in &graph.edges {
        let du: Vec<Rat> = graph.vertices[v]
            .point
            .iter()
            .zip(&graph.vertices[u].point)
            .map(|(a, b)| a - b)
            .collect();
        let val = linalg::dot(xi, &du);
        if val.is_zero() {
            return Err(PolytopeError::DegenerateFunctional { attempts: 1 });
        }
        if val.is_negative() {
            down[v] += 1;
        } else {
            down[u] += 1;
        }
    }
    for &c in &down {
        h[c] += 1;
    }
    Ok(h)
}

/// h-vector with deterministic re-sampling of the functional on ties.
pub fn h_vector_auto(graph: &VertexEdgeGraph, seed: u64) -> Result<Vec<i64>, PolytopeError> {
    let ambient = graph.vertices.first().map_or(0, |v| v.point.len());
    if ambient == 0 {
        return h_vector(graph, &[]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = 32;
    for _ in 0..attempts {
        let xi: Vec<Rat> = (0..ambient)
            .map(|_| linalg::rat(rng.gen_range(-(1 << 20)..(1 << 20))))
            .collect();
        match h_vector(graph, &xi) {
            Err(PolytopeError::DegenerateFunctional { .. }) => continue,
            other => return other,
        }
    }
    Err(PolytopeError::DegenerateFunctional { attempts })
}

/// Graded dimensions of the Stanley–Reisner quotient of the boundary of
/// the dual simplicial polytope: the f-to-h transform applied to face
/// counts read off the face lattice. Independent route to `h_vector`.
pub fn sr_dims(p: &RationalPolytope, graph: &VertexEdgeGraph) -> Result<Vec<i64>, PolytopeError> {
    if graph.is_empty() {
        return Err(PolytopeError::EmptyIntersection);
    }
    let dp = graph.dim;

    // closure of the vertex tight sets under intersection
    let mut sets: BTreeSet<BTreeSet<usize>> =
        graph.vertices.iter().map(|v| v.tight.clone()).collect();
    loop {
        let snapshot: Vec<BTreeSet<usize>> = sets.iter().cloned().collect();
        let before = sets.len();
        for i in 0..snapshot.len() {
            for j in i + 1..snapshot.len() {
                sets.insert(snapshot[i].intersection(&snapshot[j]).cloned().collect());
            }
        }
        if sets.len() == before {
            break;
        }
    }

    // each closed set spans the smallest face containing its vertices;
    // dedupe faces by vertex membership
    let mut faces: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for s in &sets {
        let members: Vec<usize> = graph
            .vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| s.is_subset(&v.tight))
            .map(|(i, _)| i)
            .collect();
        if members.is_empty() || members.len() == graph.vertices.len() {
            continue;
        }
        let pts: Vec<Vec<Rat>> = members
            .iter()
            .map(|&i| graph.vertices[i].point.clone())
            .collect();
        faces.insert(members, linalg::affine_rank(&pts));
    }

    let mut count_by_dim = vec![0i64; dp.max(1)];
    for (_, fdim) in faces {
        count_by_dim[fdim] += 1;
    }

    // f_{j-1} of the dual boundary complex counts faces of codimension j
    let mut h = vec![0i64; dp + 1];
    for i in 0..=dp {
        for j in 0..=i {
            let f = if j == 0 {
                1
            } else {
                count_by_dim[dp - j]
            };
            let sign = if (i - j) % 2 == 0 { 1 } else { -1 };
            h[i] += sign * binomial(dp - j, dp - i) * f;
        }
    }
    let _ = p;
    Ok(h)
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1i64;
    for i in 0..k {
        num = num * (n - i) as i64 / (i + 1) as i64;
    }
    num
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rat_frac};

    fn box2(lo: i64, hi: i64) -> RationalPolytope {
        RationalPolytope::new(
            vec![
                vec![rat(1), rat(0)],
                vec![rat(-1), rat(0)],
                vec![rat(0), rat(1)],
                vec![rat(0), rat(-1)],
            ],
            vec![rat(hi), rat(-lo), rat(hi), rat(-lo)],
        )
    }

    #[test]
    fn unit_square() {
        let g = vertices_and_edges(&box2(0, 1));
        assert_eq!(g.vertices.len(), 4);
        assert_eq!(g.edges.len(), 4);
        assert_eq!(g.dim, 2);
        assert!(g.simple);
        assert_eq!(h_vector_auto(&g, 7).unwrap(), vec![1, 2, 1]);
        assert_eq!(sr_dims(&box2(0, 1), &g).unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn triangle() {
        // x >= 0, y >= 0, x + y <= 1
        let p = RationalPolytope::new(
            vec![
                vec![rat(-1), rat(0)],
                vec![rat(0), rat(-1)],
                vec![rat(1), rat(1)],
            ],
            vec![rat(0), rat(0), rat(1)],
        );
        let g = vertices_and_edges(&p);
        assert_eq!(g.vertices.len(), 3);
        assert_eq!(g.edges.len(), 3);
        assert_eq!(h_vector_auto(&g, 1).unwrap(), vec![1, 1, 1]);
        assert_eq!(sr_dims(&p, &g).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn hexagon() {
        // |x| <= 2, |y| <= 2, |x + y| <= 3
        let p = RationalPolytope::new(
            vec![
                vec![rat(1), rat(0)],
                vec![rat(-1), rat(0)],
                vec![rat(0), rat(1)],
                vec![rat(0), rat(-1)],
                vec![rat(1), rat(1)],
                vec![rat(-1), rat(-1)],
            ],
            vec![rat(2), rat(2), rat(2), rat(2), rat(3), rat(3)],
        );
        let g = vertices_and_edges(&p);
        assert_eq!(g.vertices.len(), 6);
        assert_eq!(g.edges.len(), 6);
        assert_eq!(h_vector_auto(&g, 3).unwrap(), vec![1, 4, 1]);
        assert_eq!(sr_dims(&p, &g).unwrap(), vec![1, 4, 1]);
    }

    #[test]
    fn collapsed_segment() {
        // box with one direction pinched to a line
        let p = RationalPolytope::new(
            vec![
                vec![rat(1), rat(0)],
                vec![rat(-1), rat(0)],
                vec![rat(0), rat(1)],
                vec![rat(0), rat(-1)],
            ],
            vec![rat(3), rat(-1), rat_frac(1, 2), rat_frac(-1, 2)],
        );
        let g = vertices_and_edges(&p);
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.dim, 1);
        assert_eq!(h_vector_auto(&g, 5).unwrap(), vec![1, 1]);
        assert_eq!(sr_dims(&p, &g).unwrap(), vec![1, 1]);
    }

    #[test]
    fn single_point_and_empty() {
        let p = RationalPolytope::new(
            vec![vec![rat(1)], vec![rat(-1)]],
            vec![rat(2), rat(-2)],
        );
        let g = vertices_and_edges(&p);
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.dim, 0);
        assert_eq!(h_vector_auto(&g, 0).unwrap(), vec![1]);
        assert_eq!(sr_dims(&p, &g).unwrap(), vec![1]);

        let empty = RationalPolytope::new(
            vec![vec![rat(1)], vec![rat(-1)]],
            vec![rat(0), rat(-1)],
        );
        let ge = vertices_and_edges(&empty);
        assert!(ge.is_empty());
        assert_eq!(h_vector_auto(&ge, 0), Err(PolytopeError::EmptyIntersection));
    }

    #[test]
    fn h_vector_stable_across_functionals() {
        let g = vertices_and_edges(&box2(-1, 4));
        let mut seen = BTreeSet::new();
        for seed in 0..6u64 {
            seen.insert(h_vector_auto(&g, seed).unwrap());
        }
        assert_eq!(seen.len(), 1);
    }

    #[test]
    fn h_properties() {
        for p in [box2(0, 1), box2(-2, 5)] {
            let g = vertices_and_edges(&p);
            let h = h_vector_auto(&g, 11).unwrap();
            let total: i64 = h.iter().sum();
            assert_eq!(total as usize, g.vertices.len());
            let rev: Vec<i64> = h.iter().rev().cloned().collect();
            assert_eq!(h, rev);
            assert_eq!(h[0], 1);
        }
    }
}
