use std::fmt::Write;

use super::{HNPolygon, LatticePoint, Triangle};

/// Pixels per lattice unit.
const UNIT: i64 = 60;
const MARGIN: i64 = 40;

struct Frame {
    min_x: i64,
    max_y: i64,
}

impl Frame {
    fn px(&self, p: LatticePoint) -> (i64, i64) {
        (
            MARGIN + UNIT * (p.x - self.min_x),
            MARGIN + UNIT * (self.max_y - p.y),
        )
    }

    fn points(&self, pts: &[LatticePoint]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.px(p);
                format!("{x},{y}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Renders the polygon with the admissibility triangle drawn over it.
///
/// Coordinates are integers, so identical inputs give identical bytes.
pub fn render_svg(polygon: &HNPolygon, triangle: &Triangle) -> String {
    let corners = triangle.corners();
    let all = polygon.vertices().iter().chain(corners.iter());
    let min_x = all.clone().map(|p| p.x).min().unwrap_or(0);
    let max_x = all.clone().map(|p| p.x).max().unwrap_or(0);
    let min_y = all.clone().map(|p| p.y).min().unwrap_or(0);
    let max_y = all.map(|p| p.y).max().unwrap_or(0);
    let frame = Frame { min_x, max_y };
    let width = 2 * MARGIN + UNIT * (max_x - min_x);
    let height = 2 * MARGIN + UNIT * (max_y - min_y);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>"##
    );

    // lattice grid
    let _ = writeln!(out, r##"<g stroke="#eeeeee" stroke-width="1">"##);
    for x in min_x..=max_x {
        let (px, _) = frame.px(LatticePoint::new(x, 0));
        let _ = writeln!(
            out,
            r#"<line x1="{px}" y1="{MARGIN}" x2="{px}" y2="{}"/>"#,
            height - MARGIN
        );
    }
    for y in min_y..=max_y {
        let (_, py) = frame.px(LatticePoint::new(0, y));
        let _ = writeln!(
            out,
            r#"<line x1="{MARGIN}" y1="{py}" x2="{}" y2="{py}"/>"#,
            width - MARGIN
        );
    }
    let _ = writeln!(out, "</g>");

    let mut closed: Vec<LatticePoint> = polygon.vertices().to_vec();
    if closed.len() > 2 {
        closed.push(polygon.start());
    }
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="#cfe3ff" fill-opacity="0.7" stroke="#1f4e9c" stroke-width="3"/>"##,
        frame.points(&closed)
    );
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="none" stroke="#c0392b" stroke-width="2" stroke-dasharray="6,4"/>"##,
        frame.points(&corners)
    );

    for &v in polygon.vertices() {
        let (x, y) = frame.px(v);
        let _ = writeln!(out, r##"<circle cx="{x}" cy="{y}" r="4" fill="#1f4e9c"/>"##);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="14">{v}</text>"#,
            x + 6,
            y - 6
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly() -> HNPolygon {
        HNPolygon::from_vertices(vec![
            LatticePoint::new(0, 0),
            LatticePoint::new(1, 2),
            LatticePoint::new(2, 3),
        ])
        .unwrap()
    }

    #[test]
    fn svg_is_deterministic_and_labeled() {
        let t = Triangle::new(1, 3).unwrap();
        let a = render_svg(&poly(), &t);
        let b = render_svg(&poly(), &t);
        assert_eq!(a, b);
        for label in ["(0,0)", "(1,2)", "(2,3)"] {
            assert!(a.contains(&format!(">{label}</text>")), "missing {label}");
        }
        // 2 units wide, 3 units tall, plus margins
        assert!(a.contains(r#"viewBox="0 0 200 260""#));
    }

    #[test]
    fn svg_uses_sixty_pixels_per_unit() {
        let t = Triangle::new(1, 3).unwrap();
        let svg = render_svg(&poly(), &t);
        // (0,0) -> (40, 220); (1,2) -> (100, 100)
        assert!(svg.contains(r#"<circle cx="40" cy="220""#));
        assert!(svg.contains(r#"<circle cx="100" cy="100""#));
    }
}
