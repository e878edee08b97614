//! Plane pictures of rank-2 arrangements: the chamber polygons of every
//! class in coset coordinates, the wall lines supporting their edges,
//! and a class-key label per chamber. SVG for files, ASCII for terminals.

use std::collections::BTreeSet;

use num::ToPrimitive;
use thiserror::Error;

use crate::arrangement::{Arrangement, Enumeration};
use crate::linalg::{self, Rat};
use crate::polytope::{self, VertexEdgeGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("rendering needs a rank-2 quotient, this arrangement has rank {0}")]
    UnsupportedRank(usize),
    #[error("no chamber polygon has interior points to draw")]
    NothingToDraw,
}

struct Scene {
    /// per class: polygon vertices in counterclockwise order, centroid, key label
    polygons: Vec<(Vec<(f64, f64)>, (f64, f64), String)>,
    /// wall lines as (normal, offset), clipped later to the bounding box
    lines: Vec<(f64, f64, f64)>,
    bbox: (f64, f64, f64, f64),
}

fn to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

fn ordered_polygon(graph: &VertexEdgeGraph) -> (Vec<(f64, f64)>, (f64, f64)) {
    let pts: Vec<(f64, f64)> = graph
        .vertices
        .iter()
        .map(|v| (to_f64(&v.point[0]), to_f64(&v.point[1])))
        .collect();
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let mut ordered = pts;
    ordered.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    (ordered, (cx, cy))
}

fn build_scene(arr: &Arrangement, enm: &Enumeration) -> Result<Scene, RenderError> {
    let d = arr.quotient_rank();
    if d != 2 {
        return Err(RenderError::UnsupportedRank(d));
    }
    let mut polygons = Vec::new();
    let mut line_keys: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let mut lines = Vec::new();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);

    for class in &enm.classes {
        let poly = arr.chamber_polytope(&class.representative);
        let graph = polytope::vertices_and_edges(&poly);
        if graph.vertices.is_empty() {
            continue;
        }
        for v in &graph.vertices {
            let (x, y) = (to_f64(&v.point[0]), to_f64(&v.point[1]));
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        // every polygon edge lies on a wall line; collect each line once,
        // canonically scaled
        for &(i, j) in &graph.edges {
            for row in graph.vertices[i].tight.intersection(&graph.vertices[j].tight) {
                let mut key = poly.a[*row].clone();
                key.push(poly.b[*row].clone());
                if let Some(first) = key.iter().find(|v| !num::Zero::is_zero(*v)).cloned() {
                    for v in key.iter_mut() {
                        *v = &*v / &first;
                    }
                }
                if line_keys.insert(key.clone()) {
                    lines.push((to_f64(&key[0]), to_f64(&key[1]), to_f64(&key[2])));
                }
            }
        }
        let (ordered, centroid) = ordered_polygon(&graph);
        let label = format!("{:?}", class.key);
        polygons.push((ordered, centroid, label));
    }
    if polygons.is_empty() {
        return Err(RenderError::NothingToDraw);
    }
    let pad = 0.08 * ((xmax - xmin).max(ymax - ymin)).max(1.0);
    Ok(Scene {
        polygons,
        lines,
        bbox: (xmin - pad, xmax + pad, ymin - pad, ymax + pad),
    })
}

/// Intersect the line `ax + by = c` with a rectangle; returns the clipped
/// segment if it crosses.
fn clip_line(a: f64, b: f64, c: f64, bbox: (f64, f64, f64, f64)) -> Option<((f64, f64), (f64, f64))> {
    let (x0, x1, y0, y1) = bbox;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut push = |x: f64, y: f64| {
        if x >= x0 - 1e-9 && x <= x1 + 1e-9 && y >= y0 - 1e-9 && y <= y1 + 1e-9 {
            if !pts.iter().any(|p| (p.0 - x).abs() + (p.1 - y).abs() < 1e-9) {
                pts.push((x, y));
            }
        }
    };
    if b.abs() > 1e-12 {
        push(x0, (c - a * x0) / b);
        push(x1, (c - a * x1) / b);
    }
    if a.abs() > 1e-12 {
        push((c - b * y0) / a, y0);
        push((c - b * y1) / a, y1);
    }
    if pts.len() >= 2 {
        Some((pts[0], pts[1]))
    } else {
        None
    }
}

const PALETTE: [&str; 6] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2"];

pub fn render_svg(arr: &Arrangement, enm: &Enumeration) -> Result<String, RenderError> {
    let scene = build_scene(arr, enm)?;
    let (x0, x1, y0, y1) = scene.bbox;
    let size = 640.0;
    let scale = size / (x1 - x0).max(y1 - y0);
    let tx = |x: f64| (x - x0) * scale;
    // svg y grows downward
    let ty = |y: f64| (y1 - y) * scale;
    let w = (x1 - x0) * scale;
    let h = (y1 - y0) * scale;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n"
    ));
    out.push_str(&format!(
        "  <rect width=\"{w:.2}\" height=\"{h:.2}\" fill=\"white\"/>\n"
    ));
    for (idx, (poly, _, _)) in scene.polygons.iter().enumerate() {
        let pts: Vec<String> = poly
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", tx(*x), ty(*y)))
            .collect();
        out.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.35\" stroke=\"none\"/>\n",
            pts.join(" "),
            PALETTE[idx % PALETTE.len()]
        ));
    }
    for (a, b, c) in &scene.lines {
        if let Some(((ax, ay), (bx, by))) = clip_line(*a, *b, *c, scene.bbox) {
            out.push_str(&format!(
                "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333\" stroke-width=\"1.5\"/>\n",
                tx(ax), ty(ay), tx(bx), ty(by)
            ));
        }
    }
    for (_, (cx, cy), label) in &scene.polygons {
        out.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
            tx(*cx), ty(*cy), label
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render_ascii(arr: &Arrangement, enm: &Enumeration) -> Result<String, RenderError> {
    let d = arr.quotient_rank();
    if d != 2 {
        return Err(RenderError::UnsupportedRank(d));
    }
    let scene = build_scene(arr, enm)?;
    let (x0, x1, y0, y1) = scene.bbox;
    let cols = 72usize;
    let rows = 28usize;
    let polys: Vec<_> = enm
        .classes
        .iter()
        .map(|c| arr.chamber_polytope(&c.representative))
        .collect();
    let glyphs = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    let mut grid = String::new();
    for r in 0..rows {
        for c in 0..cols {
            // sample the cell center exactly
            let zx = linalg::rat_approx(x0 + (x1 - x0) * (c as f64 + 0.5) / cols as f64);
            let zy = linalg::rat_approx(y1 - (y1 - y0) * (r as f64 + 0.5) / rows as f64);
            let z = [zx, zy];
            let hit = polys.iter().position(|p| p.contains(&z));
            grid.push(match hit {
                Some(i) => glyphs[i % glyphs.len()] as char,
                None => '.',
            });
        }
        grid.push('\n');
    }
    let mut legend = String::new();
    for (i, c) in enm.classes.iter().enumerate() {
        legend.push_str(&format!(
            "{} = class {:?}\n",
            glyphs[i % glyphs.len()] as char,
            c.key
        ));
    }
    Ok(format!("{grid}{legend}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Parameter;
    use crate::intmat::IntMat;
    use crate::lattice::validate_embedding;

    fn p2() -> (Arrangement, Enumeration) {
        let emb = validate_embedding(IntMat::from_i64(&[vec![1], vec![1], vec![1]])).unwrap();
        let arr = Arrangement::new(emb, Parameter::new(vec![1], 5).unwrap()).unwrap();
        let e = arr.enumerate_classes();
        (arr, e)
    }

    #[test]
    fn p2_svg_has_six_lines_and_three_labels() {
        let (arr, e) = p2();
        let svg = render_svg(&arr, &e).unwrap();
        assert_eq!(svg.matches("<line ").count(), 6);
        assert_eq!(svg.matches("<text ").count(), 3);
        assert_eq!(svg.matches("<polygon ").count(), 3);
    }

    #[test]
    fn p2_ascii_shows_all_classes() {
        let (arr, e) = p2();
        let art = render_ascii(&arr, &e).unwrap();
        assert!(art.contains('A') && art.contains('B') && art.contains('C'));
        assert!(art.contains("= class [0]"));
    }

    #[test]
    fn rank_mismatch_rejected() {
        let emb = validate_embedding(IntMat::zero(1, 0)).unwrap();
        let arr = Arrangement::new(emb, Parameter::new(vec![], 3).unwrap()).unwrap();
        let e = arr.enumerate_classes();
        assert_eq!(render_svg(&arr, &e), Err(RenderError::UnsupportedRank(1)));
    }

    #[test]
    fn svg_deterministic() {
        let (arr, e) = p2();
        assert_eq!(render_svg(&arr, &e).unwrap(), render_svg(&arr, &e).unwrap());
    }
}
