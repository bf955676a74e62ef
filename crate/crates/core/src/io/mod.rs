//! File formats: the plain-text graph format, JSON layouts, SVG output.

mod graph_file;
mod layout_file;
mod svg;

pub use graph_file::{parse_graph, write_graph};
pub use layout_file::{parse_layout, write_layout, LayoutFile};
pub use svg::{render_svg, SvgOptions};
