//! SVG snapshots of configurations.

use std::fmt::Write;

use turnfold::{Configuration, MoveStatus};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderSpec {
    /// Pixels per grid unit.
    pub scale: f64,
    pub show_states: bool,
    pub highlight_blocked: bool,
    /// Render every `frame_stride`-th configuration of a trajectory.
    pub frame_stride: usize,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            scale: 40.0,
            show_states: true,
            highlight_blocked: true,
            frame_stride: 1,
        }
    }
}

const BOND: &str = "#555555";
const BLOCKED: &str = "#d62728";
const MARGIN: f64 = 1.0;

struct Bounds {
    min_x: f64,
    max_x: f64,
    min_y: f64,
    max_y: f64,
}

fn bounds(c: &Configuration) -> Bounds {
    let mut b = Bounds {
        min_x: f64::INFINITY,
        max_x: f64::NEG_INFINITY,
        min_y: f64::INFINITY,
        max_y: f64::NEG_INFINITY,
    };
    for p in c.positions() {
        let (x, y) = p.embed();
        b.min_x = b.min_x.min(x);
        b.max_x = b.max_x.max(x);
        b.min_y = b.min_y.min(y);
        b.max_y = b.max_y.max(y);
    }
    b
}

/// Draws `c` into `out` with its top-left corner at `(ox, oy)`; returns the
/// drawn width and height in pixels.
fn draw(out: &mut String, c: &Configuration, spec: &RenderSpec, ox: f64, oy: f64) -> (f64, f64) {
    let b = bounds(c);
    let k = spec.scale;
    let px = |x: f64| ox + (x - b.min_x + MARGIN) * k;
    // flip y so +y points up
    let py = |y: f64| oy + (b.max_y - y + MARGIN) * k;
    let statuses = c.statuses();
    let pts: Vec<(f64, f64)> = c.positions().iter().map(|p| p.embed()).collect();
    for i in 0..pts.len().saturating_sub(1) {
        let blocked = spec.highlight_blocked && matches!(statuses[i], MoveStatus::Blocked { .. });
        let (colour, class) = if blocked {
            (BLOCKED, "bond blocked")
        } else {
            (BOND, "bond")
        };
        let _ = writeln!(
            out,
            r#"<line class="{class}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="{:.2}"/>"#,
            px(pts[i].0),
            py(pts[i].1),
            px(pts[i + 1].0),
            py(pts[i + 1].1),
            k * 0.12
        );
    }
    for (i, &(x, y)) in pts.iter().enumerate() {
        let fill = if c.states()[i] == 0 { "#ffffff" } else { "#c6dbef" };
        let _ = writeln!(
            out,
            r##"<circle class="monomer" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="{fill}" stroke="#222222"/>"##,
            px(x),
            py(y),
            k * 0.3
        );
        if spec.show_states {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="{:.2}" text-anchor="middle" dominant-baseline="central">{}</text>"#,
                px(x),
                py(y),
                k * 0.3,
                c.states()[i]
            );
        }
    }
    (
        (b.max_x - b.min_x + 2.0 * MARGIN) * k,
        (b.max_y - b.min_y + 2.0 * MARGIN) * k,
    )
}

fn document(width: f64, height: f64, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.2}\" height=\"{height:.2}\" viewBox=\"0 0 {width:.2} {height:.2}\">\n{body}</svg>\n"
    )
}

pub fn render_svg(c: &Configuration, spec: &RenderSpec) -> String {
    let mut body = String::new();
    let (w, h) = draw(&mut body, c, spec, 0.0, 0.0);
    document(w, h, &body)
}

/// Lays frames out left to right.
pub fn render_frames(frames: &[Configuration], spec: &RenderSpec) -> String {
    let mut body = String::new();
    let mut x = 0.0;
    let mut height: f64 = 0.0;
    for (k, c) in frames.iter().enumerate() {
        let _ = writeln!(body, r#"<g class="frame" id="frame-{k}">"#);
        let (w, h) = draw(&mut body, c, spec, x, 0.0);
        body.push_str("</g>\n");
        x += w;
        height = height.max(h);
    }
    document(x, height, &body)
}
