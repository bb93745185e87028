//! SVG pictures of one face's plane: the cross-section, the face, emitted
//! sweeps or cut, and any witness point. Drawn in floating point; purely
//! for looking at.

use crate::geom::{to_f64, Point2};
use crate::halfplane_det::HalfPlaneCut;
use crate::raysweep2d::{BBox, LinearRaySweep};
use crate::xsection::CrossSection;
use std::fmt::Write as _;

/// What to draw besides the section itself.
#[derive(Default)]
pub struct Overlay<'a> {
    pub triangle: Option<&'a [Point2; 3]>,
    pub sweeps: &'a [LinearRaySweep],
    pub cut: Option<&'a HalfPlaneCut>,
    pub points: &'a [Point2],
    pub witness: Option<&'a Point2>,
    pub title: String,
}

const SIZE: f64 = 600.0;

struct View {
    x0: f64,
    y1: f64,
    scale: f64,
}

impl View {
    fn map(&self, p: &Point2) -> (f64, f64) {
        let [x, y] = p.to_f64();
        ((x - self.x0) * self.scale + 20.0, (self.y1 - y) * self.scale + 20.0)
    }

    fn poly(&self, pts: &[Point2]) -> String {
        pts.iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn render(section: &CrossSection, overlay: &Overlay<'_>) -> String {
    let mut pts: Vec<&Point2> = section.vertices.iter().chain(section.touch_points.iter()).collect();
    if let Some(t) = overlay.triangle {
        pts.extend(t.iter());
    }
    pts.extend(overlay.points.iter());
    let bbox = BBox::around(pts.iter().copied())
        .map(|b| b.inflated(2))
        .unwrap_or_else(|| BBox::around([Point2::from_i64(-1, -1), Point2::from_i64(1, 1)].iter()).unwrap());
    let [x0, y0] = bbox.min.to_f64();
    let [x1, y1] = bbox.max.to_f64();
    let scale = SIZE / (x1 - x0).max(y1 - y0).max(1e-300);
    let view = View { x0, y1, scale };
    let w = (x1 - x0) * scale + 40.0;
    let h = (y1 - y0) * scale + 40.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", overlay.title);
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    for s in overlay.sweeps {
        for piece in s.clipped_pieces(&bbox) {
            let _ = writeln!(
                out,
                r##"<polygon points="{}" fill="#3a7bd5" fill-opacity="0.12" stroke="#3a7bd5" stroke-opacity="0.4" stroke-width="0.5"/>"##,
                view.poly(&piece)
            );
        }
    }
    if let Some(c) = overlay.cut {
        // the cut side of its boundary, clipped to the view
        let mut poly = bbox.corners().to_vec();
        let d = if c.side == crate::geom::Sign::Positive {
            c.boundary.direction.clone()
        } else {
            c.boundary.direction.neg()
        };
        poly = clip_left(&poly, &c.boundary.point, &d);
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="#2ca02c" fill-opacity="0.15" stroke="#2ca02c"/>"##,
            view.poly(&poly)
        );
    }
    if let Some(t) = overlay.triangle {
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="#ffbf00" fill-opacity="0.5" stroke="#a07800" stroke-width="1.5"/>"##,
            view.poly(t)
        );
    }
    for (k, &(a, b)) in section.segments.iter().enumerate() {
        let (p, q) = (view.map(&section.vertices[a]), view.map(&section.vertices[b]));
        let color = if section.toggles[k] { "#000000" } else { "#d62728" };
        let _ = writeln!(
            out,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="2"/>"#,
            p.0, p.1, q.0, q.1
        );
    }
    for (a, b) in &section.inert_segments {
        let (p, q) = (view.map(a), view.map(b));
        let _ = writeln!(
            out,
            r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#888888" stroke-dasharray="4 3"/>"##,
            p.0, p.1, q.0, q.1
        );
    }
    for p in section.touch_points.iter().chain(overlay.points.iter()) {
        let (x, y) = view.map(p);
        let _ = writeln!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="#555555"/>"##);
    }
    if let Some(p) = overlay.witness {
        let (x, y) = view.map(p);
        let _ = writeln!(
            out,
            r##"<circle cx="{x:.3}" cy="{y:.3}" r="5" fill="none" stroke="#d62728" stroke-width="2"/>"##
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Float clip, good enough for drawing.
fn clip_left(poly: &[Point2], o: &Point2, d: &Point2) -> Vec<Point2> {
    let (ox, oy) = (to_f64(&o.x), to_f64(&o.y));
    let (dx, dy) = (to_f64(&d.x), to_f64(&d.y));
    let side = |p: &Point2| dx * (to_f64(&p.y) - oy) - dy * (to_f64(&p.x) - ox);
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let (p, q) = (&poly[i], &poly[(i + 1) % n]);
        let (sp, sq) = (side(p), side(q));
        if sp >= 0.0 {
            out.push(p.clone());
        }
        if (sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0) {
            let t = sp / (sp - sq);
            out.push(p.lerp(q, &crate::geom::Scalar::from_float(t).unwrap_or_default()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_a_ring() {
        let outer = [(0, 0), (6, 0), (6, 6), (0, 6)].map(|(x, y)| Point2::from_i64(x, y)).to_vec();
        let inner = [(2, 2), (2, 4), (4, 4), (4, 2)].map(|(x, y)| Point2::from_i64(x, y)).to_vec();
        let s = CrossSection::from_polygons(vec![outer, inner]);
        let tri = [Point2::from_i64(2, 2), Point2::from_i64(4, 2), Point2::from_i64(3, 4)];
        let bbox = crate::raysweep2d::sweep_bbox(&s, &tri);
        let sweeps = crate::raysweep2d::free_ray_sweeps(&s, &bbox).sweeps;
        let svg = render(
            &s,
            &Overlay {
                triangle: Some(&tri),
                sweeps: &sweeps,
                title: "ring".into(),
                ..Default::default()
            },
        );
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<line").count(), 8);
        assert!(svg.contains("<polygon"));
    }
}
