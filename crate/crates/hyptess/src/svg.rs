//! Static SVG drawings in the Poincaré disk.
//!
//! Geodesics are arcs of circles orthogonal to the unit circle (or
//! diameters). The disk has radius 1 in model coordinates and is scaled to
//! the requested pixel size; `y` points up in the model and down on screen.

use std::fmt::Write as _;

use crate::hypgeo::HPoint;
use crate::tessellation::{CenteredDual, DelaunayComplex};

/// The circle carrying the geodesic through two distinct disk points, or
/// `None` when the geodesic is a diameter.
pub fn geodesic_circle(p: (f64, f64), q: (f64, f64)) -> Option<((f64, f64), f64)> {
    let cross = p.0 * q.1 - p.1 * q.0;
    let scale = (p.0.hypot(p.1) * q.0.hypot(q.1)).max(1e-300);
    if cross.abs() <= 1e-12 * scale {
        return None;
    }
    // Centre c with |c|² = ρ² + 1 passing through p and q:
    //   2 c·p = |p|² + 1,  2 c·q = |q|² + 1.
    let (a, b) = ((p.0 * p.0 + p.1 * p.1 + 1.0) / 2.0, (q.0 * q.0 + q.1 * q.1 + 1.0) / 2.0);
    let cx = (a * q.1 - b * p.1) / cross;
    let cy = (p.0 * b - q.0 * a) / cross;
    let rho = ((cx - p.0).powi(2) + (cy - p.1).powi(2)).sqrt();
    Some(((cx, cy), rho))
}

/// Stroke styles for edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stroke {
    Solid,
    Dashed,
    Highlight,
}

/// An SVG document under construction.
#[derive(Debug, Clone)]
pub struct Canvas {
    size: f64,
    body: String,
}

impl Canvas {
    /// A square canvas of `size` pixels showing the closed unit disk.
    pub fn new(size: f64) -> Self {
        Canvas { size, body: String::new() }
    }

    fn screen(&self, (u, v): (f64, f64)) -> (f64, f64) {
        let h = self.size / 2.0;
        (h + h * 0.96 * u, h - h * 0.96 * v)
    }

    fn px(&self, len: f64) -> f64 {
        self.size / 2.0 * 0.96 * len
    }

    /// Draws the geodesic segment between two points.
    pub fn geodesic(&mut self, p: &HPoint, q: &HPoint, stroke: Stroke) {
        let (pd, qd) = (p.to_poincare(), q.to_poincare());
        let (a, b) = (self.screen(pd), self.screen(qd));
        let style = match stroke {
            Stroke::Solid => r#"stroke="black" stroke-width="1""#,
            Stroke::Dashed => r#"stroke="steelblue" stroke-width="0.8" stroke-dasharray="4 3""#,
            Stroke::Highlight => r#"stroke="crimson" stroke-width="2""#,
        };
        let path = match geodesic_circle(pd, qd) {
            None => format!("M {:.3} {:.3} L {:.3} {:.3}", a.0, a.1, b.0, b.1),
            Some((c, rho)) => {
                // The in-disk part of an orthogonal circle is a minor arc; in
                // model coordinates it runs counter-clockwise iff the cross
                // product about the centre is positive, which the y flip turns
                // into SVG's positive sweep.
                let cross = (pd.0 - c.0) * (qd.1 - c.1) - (pd.1 - c.1) * (qd.0 - c.0);
                let sweep = u8::from(cross > 0.0);
                let r = self.px(rho);
                format!("M {:.3} {:.3} A {r:.3} {r:.3} 0 0 {sweep} {:.3} {:.3}", a.0, a.1, b.0, b.1)
            }
        };
        let _ = writeln!(self.body, r#"<path d="{path}" fill="none" {style}/>"#);
    }

    /// Draws a dot at a point.
    pub fn dot(&mut self, p: &HPoint, radius_px: f64, fill: &str) {
        let (x, y) = self.screen(p.to_poincare());
        let _ = writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{radius_px}" fill="{fill}"/>"#);
    }

    /// The finished document.
    pub fn finish(&self) -> String {
        let h = self.size / 2.0;
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
                "\n",
                r#"<circle cx="{h}" cy="{h}" r="{r}" fill="white" stroke="gray"/>"#,
                "\n{body}</svg>\n"
            ),
            s = self.size,
            h = h,
            r = self.px(1.0),
            body = self.body
        )
    }
}

/// Draws a tessellation: sites as dots, Voronoi edges solid, Delaunay edges
/// dashed and non-centered Delaunay edges highlighted. Sites farther than
/// `clip` from the basepoint, and edges touching them, are skipped.
pub fn render_complex(d: &DelaunayComplex, dual: Option<&CenteredDual>, clip: f64, size: f64) -> String {
    let v = &d.voronoi;
    let near = |p: &HPoint| crate::hypgeo::dist(p, &v.basepoint) <= clip;
    let mut canvas = Canvas::new(size);
    for e in &v.edges {
        let (a, b) = (&v.vertices[e.vertices.0].position, &v.vertices[e.vertices.1].position);
        if near(a) && near(b) {
            canvas.geodesic(a, b, Stroke::Solid);
        }
    }
    for e in &d.edges {
        let (p, q) = (&v.sites[e.sites.0], &v.sites[e.sites.1]);
        if near(p) && near(q) {
            canvas.geodesic(p, q, if e.centered { Stroke::Dashed } else { Stroke::Highlight });
        }
    }
    if let Some(dual) = dual {
        for cell in dual.cells.iter().filter(|c| c.tree.is_some()) {
            for &m in &cell.members {
                let p = &v.vertices[m].position;
                if near(p) {
                    canvas.dot(p, 2.0, "crimson");
                }
            }
        }
    }
    for s in v.sites.iter().filter(|s| near(s)) {
        canvas.dot(s, 3.0, "black");
    }
    canvas.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeo::midpoint;

    #[test]
    fn geodesic_circles_are_orthogonal_and_carry_the_midpoint() {
        let pts = [(0.3, 0.1), (-0.5, 0.4), (0.1, -0.7), (0.6, 0.6)];
        for &p in &pts {
            for &q in &pts {
                if p == q {
                    continue;
                }
                let (c, rho) = geodesic_circle(p, q).expect("not a diameter");
                assert!((c.0 * c.0 + c.1 * c.1 - rho * rho - 1.0).abs() < 1e-9);
                let hp = HPoint::from_poincare(p.0, p.1).unwrap();
                let hq = HPoint::from_poincare(q.0, q.1).unwrap();
                let m = midpoint(&hp, &hq).to_poincare();
                assert!(((m.0 - c.0).hypot(m.1 - c.1) - rho).abs() < 1e-9);
            }
        }
        assert!(geodesic_circle((0.2, 0.2), (-0.4, -0.4)).is_none());
    }

    #[test]
    fn canvas_emits_paths_and_dots() {
        let p = HPoint::from_poincare(0.2, 0.1).unwrap();
        let q = HPoint::from_poincare(-0.3, 0.5).unwrap();
        let mut c = Canvas::new(400.0);
        c.geodesic(&p, &q, Stroke::Dashed);
        c.dot(&p, 3.0, "black");
        let s = c.finish();
        assert!(s.starts_with("<svg"));
        assert_eq!(s.matches("<path").count(), 1);
        assert!(s.contains(" A "));
        assert!(s.contains("stroke-dasharray"));
        assert_eq!(s.matches("<circle").count(), 2);
    }
}
