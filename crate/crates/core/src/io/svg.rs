//! Deterministic SVG rendering. Layout `y` grows upward on screen.

use std::fmt::Write;

use crate::geometry::bounding_box;
use crate::graph::Graph;
use crate::layout::Layout;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Pixels per layout unit.
    pub scale: f64,
    pub padding: f64,
    pub vertex_radius: f64,
    pub arrowheads: bool,
    pub labels: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            scale: 60.0,
            padding: 20.0,
            vertex_radius: 5.0,
            arrowheads: true,
            labels: false,
        }
    }
}

pub fn render_svg(layout: &Layout, g: &Graph, opts: &SvgOptions) -> String {
    let b = bounding_box(layout);
    let px = |c: [f64; 2]| ((c[0] - b.min_x) * opts.scale, (b.max_y - c[1]) * opts.scale);
    let pad = opts.padding + opts.vertex_radius;
    let width = b.width() * opts.scale + 2.0 * pad;
    let height = b.height() * opts.scale + 2.0 * pad;
    let arrows = opts.arrowheads && g.has_directed_edges();

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3} {:.3} {:.3} {:.3}" width="{:.0}" height="{:.0}">"#,
        -pad, -pad, width, height, width, height
    )
    .unwrap();
    if arrows {
        writeln!(
            s,
            r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="#444"/></marker></defs>"##
        )
        .unwrap();
    }
    writeln!(s, r##"<g stroke="#444" stroke-width="1.5">"##).unwrap();
    for e in g.edges() {
        let (x1, y1) = px(layout.coords[e.source]);
        let (mut x2, mut y2) = px(layout.coords[e.target]);
        let marker = if arrows && e.directed {
            // stop at the target circle's rim so the arrow stays visible
            let (dx, dy) = (x2 - x1, y2 - y1);
            let len = dx.hypot(dy);
            if len > opts.vertex_radius {
                x2 -= dx / len * opts.vertex_radius;
                y2 -= dy / len * opts.vertex_radius;
            }
            r#" marker-end="url(#arrow)""#
        } else {
            ""
        };
        writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"{marker}/>"#).unwrap();
    }
    writeln!(s, "</g>").unwrap();
    writeln!(s, r##"<g fill="#1f77b4" stroke="#fff" stroke-width="1">"##).unwrap();
    for c in &layout.coords {
        let (cx, cy) = px(*c);
        writeln!(s, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}"/>"#, opts.vertex_radius).unwrap();
    }
    writeln!(s, "</g>").unwrap();
    if opts.labels {
        writeln!(s, r#"<g font-family="sans-serif" font-size="10" text-anchor="middle">"#).unwrap();
        for (i, c) in layout.coords.iter().enumerate() {
            let (cx, cy) = px(*c);
            writeln!(s, r#"<text x="{cx:.3}" y="{:.3}">{i}</text>"#, cy - opts.vertex_radius - 2.0).unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    s.push_str("</svg>\n");
    s
}
