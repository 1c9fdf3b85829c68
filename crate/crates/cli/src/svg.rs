//! Plain-text SVG scenes. Coordinates are flipped so `y` points up.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use certkit::rectconcur::{ConcurrencyReport, Point, RectangleConfig};
use certkit::tripack::{self, ExactPoint, PackingInstance};

const CANVAS: f64 = 800.0;
const PAD: f64 = 20.0;

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
}

impl Frame {
    fn fit(points: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for (x, y) in points {
            lo_x = lo_x.min(x);
            hi_x = hi_x.max(x);
            lo_y = lo_y.min(y);
            hi_y = hi_y.max(y);
        }
        let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-12);
        Frame { min_x: lo_x, max_y: hi_y, scale: (CANVAS - 2.0 * PAD) / span }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (PAD + (x - self.min_x) * self.scale, PAD + (self.max_y - y) * self.scale)
    }

    fn points(&self, pts: &[(f64, f64)]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn header() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">\n"
    )
}

fn polygon(out: &mut String, frame: &Frame, pts: &[(f64, f64)], class: &str, style: &str) {
    let _ = writeln!(out, "  <polygon class=\"{class}\" points=\"{}\" {style}/>", frame.points(pts));
}

/// `Δ` in black, each inverted triangle in blue and its side-1/2 hexagon in green.
pub fn packing_scene(instance: &PackingInstance) -> String {
    let l = instance.side_len.to_f64().unwrap_or(f64::NAN);
    let delta = [(0.0, 0.0), (l, 0.0), (l / 2.0, l * 3f64.sqrt() / 2.0)];
    let frame = Frame::fit(delta);
    let half = certkit::kernel::ratio(1, 2);
    let mut out = header();
    polygon(&mut out, &frame, &delta, "delta", "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"");
    for anchor in &instance.anchors {
        let hex: Vec<(f64, f64)> = tripack::hexagon_vertices(anchor, &half).iter().map(ExactPoint::to_f64).collect();
        polygon(&mut out, &frame, &hex, "hexagon", "fill=\"none\" stroke=\"green\" stroke-width=\"0.6\"");
        let tri: Vec<(f64, f64)> = tripack::triangle_vertices(anchor).iter().map(ExactPoint::to_f64).collect();
        polygon(&mut out, &frame, &tri, "triangle", "fill=\"lightsteelblue\" stroke=\"navy\" stroke-width=\"0.6\"");
    }
    out.push_str("</svg>\n");
    out
}

fn xy(p: Point) -> (f64, f64) {
    (p.x, p.y)
}

/// Triangle, the three rectangles with their circumcircles, the three lines
/// `C₁A₂`, `A₁B₂`, `B₁C₂` and the common point.
pub fn concurrency_scene(config: &RectangleConfig, report: &ConcurrencyReport) -> String {
    let t = &config.triangle;
    let circles = config.circumcircles();
    let mut extent: Vec<(f64, f64)> = config.rectangles().iter().flatten().map(|&p| xy(p)).collect();
    for (c, r) in &circles {
        extent.extend([(c.x - r, c.y - r), (c.x + r, c.y + r)]);
    }
    let frame = Frame::fit(extent);
    let mut out = header();
    for rect in config.rectangles() {
        let pts: Vec<(f64, f64)> = rect.iter().map(|&p| xy(p)).collect();
        polygon(&mut out, &frame, &pts, "rectangle", "fill=\"wheat\" stroke=\"peru\" stroke-width=\"1\"");
    }
    let tri = [xy(t.a_pt), xy(t.b_pt), xy(t.c_pt)];
    polygon(&mut out, &frame, &tri, "triangle", "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"");
    for (c, r) in circles {
        let (cx, cy) = frame.map(xy(c));
        let _ = writeln!(
            out,
            "  <circle class=\"circumcircle\" cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>",
            r * frame.scale
        );
    }
    for (p, q) in [(config.c1, config.a2), (config.a1, config.b2), (config.b1, config.c2)] {
        let (x1, y1) = frame.map(xy(p));
        let (x2, y2) = frame.map(xy(q));
        let _ = writeln!(
            out,
            "  <line class=\"concurrent-line\" x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"crimson\" stroke-width=\"1\"/>"
        );
    }
    let (px, py) = frame.map(xy(report.p_point));
    let _ = writeln!(out, "  <circle class=\"common-point\" cx=\"{px:.3}\" cy=\"{py:.3}\" r=\"4\" fill=\"crimson\"/>");
    out.push_str("</svg>\n");
    out
}
