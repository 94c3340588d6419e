//! SVG drawings of a frame with faces shaded by Euler Entity.

use std::fmt::Write;

use crate::faces::FaceSet;
use crate::frame::{DirectedLink, Frame, LinkShape};
use crate::geometry::{BBox, Point2};
use crate::graph::{classify_vertex, GeometricGraph};
use crate::walk::FaceCircuit;
use crate::window::Window;

/// Drawing units per length unit.
pub const SCALE: f64 = 100.0;

/// Fill colour for a face with Euler Entity `chi`.
pub fn chi_color(chi: i64) -> &'static str {
    match chi {
        i64::MIN..=-2 => "#6a3d9a",
        -1 => "#1f78b4",
        0 => "#b2df8a",
        1 => "#fdbf6f",
        _ => "#e31a1c",
    }
}

fn xy(p: Point2) -> (f64, f64) {
    (p.x * SCALE, -p.y * SCALE)
}

/// Point at fraction `t` along a directed link.
fn along<F: Frame + ?Sized>(g: &F, d: DirectedLink, t: f64) -> Point2 {
    let t = if d.forward { t } else { 1.0 - t };
    match g.shape(d.link) {
        LinkShape::Segment => {
            let [a, b] = g.link_ends(d.link);
            g.node(a).lerp(g.node(b), t)
        }
        LinkShape::Arc { center, radius, start, sweep } => Point2::from_polar(center, radius, start + sweep * t),
    }
}

fn circuit_path<F: Frame + ?Sized>(g: &F, c: &FaceCircuit, out: &mut String) {
    let first = g.node(g.tail(c.steps[0]));
    let (x, y) = xy(first);
    let _ = write!(out, "M{x:.3},{y:.3}");
    for &d in &c.steps {
        let pieces = match g.shape(d.link) {
            LinkShape::Segment => 1,
            LinkShape::Arc { sweep, .. } => (sweep.abs() * 16.0).ceil().max(2.0) as usize,
        };
        for k in 1..=pieces {
            let (x, y) = xy(along(g, d, k as f64 / pieces as f64));
            let _ = write!(out, "L{x:.3},{y:.3}");
        }
    }
    out.push('Z');
}

/// Renders faces, links and vertices; double-π vertices get a hollow square marker since
/// they vanish in a plain drawing of the links.
pub fn render(g: &GeometricGraph, faces: &FaceSet, window: Option<&Window>) -> String {
    let mut bbox = g.bbox();
    if let Some(w) = window {
        let r = Point2::new(w.radius, w.radius);
        bbox.union(&BBox::of_points([w.center - r, w.center + r]));
    }
    if bbox.min.x > bbox.max.x {
        bbox = BBox::of_points([Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0)]);
    }
    let pad = 0.05 * bbox.width().max(bbox.height()).max(1.0);
    let (x0, y0) = (bbox.min.x - pad, bbox.max.y + pad);
    let (w, h) = (bbox.width() + 2.0 * pad, bbox.height() + 2.0 * pad);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3} {:.3} {:.3} {:.3}">"#,
        x0 * SCALE,
        -y0 * SCALE,
        w * SCALE,
        h * SCALE
    );
    s.push_str("<g stroke=\"none\" fill-rule=\"evenodd\">\n");
    for f in &faces.faces {
        let mut d = String::new();
        for c in f.circuits() {
            circuit_path(g, c, &mut d);
        }
        let _ = writeln!(s, r#"<path fill="{}" d="{d}"><title>chi={}</title></path>"#, chi_color(f.chi), f.chi);
    }
    s.push_str("</g>\n<g stroke=\"black\" stroke-width=\"1.5\" stroke-linecap=\"round\">\n");
    for &[a, b] in g.links() {
        let ((x1, y1), (x2, y2)) = (xy(g.nodes()[a]), xy(g.nodes()[b]));
        let _ = writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
    }
    s.push_str("</g>\n<g>\n");
    for v in 0..g.node_count() {
        let (x, y) = xy(g.nodes()[v]);
        if classify_vertex(g, v).is_double_pi {
            let _ = writeln!(
                s,
                r#"<rect class="double-pi" x="{:.3}" y="{:.3}" width="8" height="8" fill="white" stroke="red" stroke-width="1.5"/>"#,
                x - 4.0,
                y - 4.0
            );
        } else {
            let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="black"/>"#);
        }
    }
    s.push_str("</g>\n");
    if let Some(w) = window {
        let (cx, cy) = xy(w.center);
        let _ = writeln!(
            s,
            r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="none" stroke="gray" stroke-dasharray="6 4"/>"#,
            w.radius * SCALE
        );
    }
    s.push_str("</svg>\n");
    s
}
