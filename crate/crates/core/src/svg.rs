//! SVG drawings of an element: the two trees on the strip, the graph built
//! from them, and the resulting link diagram with its crossings.

use std::fmt::Write;

use crate::error::Result;
use crate::group::TreeDiagram;
use crate::links::{child_slot, jones_graph, Convention, JonesGraph, LinkDiagram, GAP, PARENT};
use crate::trees::{CaretSpan, Child};

const STEP: f64 = 40.0;
const LEVEL: f64 = 30.0;
const MARGIN: f64 = 60.0;
const GAP_RADIUS: f64 = 7.0;

type Point = (f64, f64);

struct Layout {
    /// Vertex positions relative to the leaf line at `y = 0`.
    vertices: Vec<Point>,
    leaves: Vec<Point>,
    /// Edges as `(dart, dart, polyline)`; the polyline runs between the darts' vertices.
    edges: Vec<(usize, usize, Vec<Point>)>,
    tree_edges: Vec<Vec<Point>>,
    height_plus: f64,
    height_minus: f64,
    width: f64,
}

fn heights(spans: &[CaretSpan]) -> Vec<usize> {
    let mut h = vec![1; spans.len()];
    for j in (0..spans.len()).rev() {
        for c in &spans[j].children {
            if let Child::Caret(c) = *c {
                h[j] = h[j].max(h[c] + 1);
            }
        }
    }
    h
}

fn gap_x(s: usize) -> f64 {
    MARGIN + STEP * (s as f64 - 0.5)
}

fn leaf_x(i: usize) -> f64 {
    MARGIN + STEP * i as f64
}

fn layout(g: &JonesGraph) -> Layout {
    let k = g.size();
    let hp = heights(&g.plus);
    let hm = heights(&g.minus);
    let mut vertices = Vec::with_capacity(2 * k);
    for (j, s) in g.plus.iter().enumerate() {
        vertices.push((gap_x(s.split()), -LEVEL * hp[j] as f64));
    }
    for (j, s) in g.minus.iter().enumerate() {
        vertices.push((gap_x(s.split()), LEVEL * hm[j] as f64));
    }
    let leaves: Vec<Point> = (0..=k).map(|i| (leaf_x(i), 0.0)).collect();
    let mut edges = Vec::new();
    let mut tree_edges = Vec::new();
    let mut leaf_ends = vec![[(0, (0.0, 0.0)); 2]; k + 1];
    for (t, spans) in [&g.plus, &g.minus].into_iter().enumerate() {
        let minus = t == 1;
        let base = if minus { k } else { 0 };
        for (j, span) in spans.iter().enumerate() {
            let v = base + j;
            for (side, child) in span.children.iter().enumerate() {
                let dart = 4 * v + child_slot(minus, side);
                match *child {
                    Child::Caret(c) => {
                        let line = vec![vertices[v], vertices[base + c]];
                        tree_edges.push(line.clone());
                        edges.push((dart, 4 * (base + c) + PARENT, line));
                    }
                    Child::Leaf(i) => {
                        tree_edges.push(vec![vertices[v], leaves[i]]);
                        leaf_ends[i][t] = (dart, vertices[v]);
                    }
                }
            }
        }
    }
    for (i, [(a, pa), (b, pb)]) in leaf_ends.into_iter().enumerate() {
        edges.push((a, b, vec![pa, leaves[i], pb]));
    }
    for (j, span) in g.plus.iter().enumerate() {
        if let Some(m) = g.minus.iter().position(|c| c.split() == span.split()) {
            edges.push((
                4 * j + GAP,
                4 * (k + m) + GAP,
                vec![vertices[j], vertices[k + m]],
            ));
        }
    }
    let height_plus = LEVEL * (hp.first().copied().unwrap_or(0) as f64 + 1.0);
    let height_minus = LEVEL * (hm.first().copied().unwrap_or(0) as f64 + 1.0);
    let left = MARGIN - STEP;
    edges.push((
        PARENT,
        4 * k + PARENT,
        vec![
            vertices[0],
            (vertices[0].0, -height_plus),
            (left, -height_plus),
            (left, height_minus),
            (vertices[k].0, height_minus),
            vertices[k],
        ],
    ));
    Layout {
        vertices,
        leaves,
        edges,
        tree_edges,
        height_plus,
        height_minus,
        width: leaf_x(k) + MARGIN,
    }
}

fn polyline(out: &mut String, pts: &[Point], dy: f64, style: &str) {
    let coords: Vec<String> = pts
        .iter()
        .map(|(x, y)| format!("{:.1},{:.1}", x, y + dy))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" {style}/>"#,
        coords.join(" ")
    );
}

fn label(out: &mut String, y: f64, text: &str) {
    let _ = writeln!(
        out,
        r#"<text x="8" y="{:.1}" font-family="sans-serif" font-size="12">{text}</text>"#,
        y
    );
}

fn unit(from: Point, to: Point) -> Point {
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    let n = (dx * dx + dy * dy).sqrt().max(f64::EPSILON);
    (dx / n, dy / n)
}

/// Renders an element as three stacked panels.
pub fn render(d: &TreeDiagram, convention: Convention, allow_nonreduced: bool) -> Result<String> {
    let g = jones_graph(d, allow_nonreduced)?;
    let link = g.link_diagram(convention);
    Ok(render_graph(&g, &link))
}

fn render_graph(g: &JonesGraph, link: &LinkDiagram) -> String {
    let lay = layout(g);
    let panel = lay.height_plus + lay.height_minus + 2.0 * LEVEL;
    let total = 3.0 * panel;
    let mut s = String::new();
    let _ = writeln!(s, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        s,
        "<!-- thomp-svg v1 carets={} crossings={} -->",
        g.size(),
        link.crossing_count()
    );
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        lay.width, total, lay.width, total
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let dy = LEVEL + lay.height_plus;
    label(&mut s, 16.0, "strip");
    let x_end = lay.leaves.last().map_or(MARGIN, |p| p.0);
    polyline(
        &mut s,
        &[(MARGIN - STEP / 2.0, 0.0), (x_end + STEP / 2.0, 0.0)],
        dy,
        r##"stroke="#999" stroke-dasharray="4 3""##,
    );
    for e in &lay.tree_edges {
        polyline(&mut s, e, dy, r#"stroke="black" stroke-width="1.5""#);
    }
    for (x, y) in &lay.leaves {
        let _ = writeln!(s, r#"<circle cx="{x:.1}" cy="{:.1}" r="2.5" fill="black"/>"#, y + dy);
    }

    let dy = panel + LEVEL + lay.height_plus;
    label(&mut s, panel + 16.0, "graph");
    for (_, _, e) in &lay.edges {
        polyline(&mut s, e, dy, r##"stroke="#225" stroke-width="1.5""##);
    }
    for (x, y) in &lay.vertices {
        let _ = writeln!(s, r##"<circle cx="{x:.1}" cy="{:.1}" r="3.5" fill="#c22"/>"##, y + dy);
    }

    let dy = 2.0 * panel + LEVEL + lay.height_plus;
    label(&mut s, 2.0 * panel + 16.0, "diagram");
    for (_, _, e) in &lay.edges {
        polyline(&mut s, e, dy, r#"stroke="black" stroke-width="2""#);
    }
    let mut toward = vec![(0.0, 0.0); 4 * lay.vertices.len()];
    for (a, b, e) in &lay.edges {
        toward[*a] = unit(e[0], e[1]);
        let n = e.len();
        toward[*b] = unit(e[n - 1], e[n - 2]);
    }
    for (v, &(x, y)) in lay.vertices.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.1}" cy="{:.1}" r="{GAP_RADIUS}" fill="white"/>"#,
            y + dy
        );
        let over: Vec<Point> = (0..4)
            .filter(|&i| link.is_over(4 * v + i))
            .map(|i| {
                let (ux, uy) = toward[4 * v + i];
                (x + GAP_RADIUS * ux, y + GAP_RADIUS * uy)
            })
            .collect();
        polyline(
            &mut s,
            &[over[0], (x, y), over[1]],
            dy,
            r#"stroke="black" stroke-width="2""#,
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}
