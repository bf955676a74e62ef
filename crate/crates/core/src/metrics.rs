//! Readability metrics for a straight-line drawing.

use serde::{Deserialize, Serialize};

use crate::geometry::{bounding_box, crossing_angle, segments_cross};
use crate::graph::{DistanceMatrix, Graph};
use crate::layout::Layout;
use crate::penalties::edge_segment;
use crate::stress::stress_value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub stress: f64,
    pub crossings: usize,
    pub min_crossing_angle_deg: f64,
    pub avg_crossing_angle_deg: f64,
    pub neighborhood_preservation: f64,
    pub drawing_width: f64,
    pub drawing_height: f64,
    pub drawing_area: f64,
    pub upward_fraction: f64,
}

/// Crossing angles in degrees over all properly crossing independent pairs.
fn crossing_angles_deg(layout: &Layout, g: &Graph) -> Vec<f64> {
    g.independent_edge_pairs()
        .into_iter()
        .filter_map(|(i, j)| {
            let a = edge_segment(layout, g, i);
            let b = edge_segment(layout, g, j);
            if segments_cross(&a, &b) {
                crossing_angle(&a, &b).ok().map(f64::to_degrees)
            } else {
                None
            }
        })
        .collect()
}

pub fn count_crossings(layout: &Layout, g: &Graph) -> usize {
    g.independent_edge_pairs()
        .into_iter()
        .filter(|&(i, j)| segments_cross(&edge_segment(layout, g, i), &edge_segment(layout, g, j)))
        .count()
}

/// Smallest crossing angle in degrees; 90 for a crossing-free drawing.
pub fn min_crossing_angle(layout: &Layout, g: &Graph) -> f64 {
    crossing_angles_deg(layout, g).into_iter().fold(90.0, f64::min)
}

/// Mean crossing angle in degrees; 90 for a crossing-free drawing.
pub fn avg_crossing_angle(layout: &Layout, g: &Graph) -> f64 {
    let angles = crossing_angles_deg(layout, g);
    if angles.is_empty() {
        90.0
    } else {
        angles.iter().sum::<f64>() / angles.len() as f64
    }
}

/// Mean over vertices of the Jaccard similarity between a vertex's graph
/// neighbors and its `deg(v)` nearest vertices in the drawing. Distance ties
/// are broken by vertex index.
pub fn neighborhood_preservation(layout: &Layout, g: &Graph) -> f64 {
    let n = g.n();
    if n < 2 {
        return 1.0;
    }
    let adj = g.adjacency();
    let mut total = 0.0;
    for v in 0..n {
        let k = adj[v].len();
        if k == 0 {
            total += 1.0;
            continue;
        }
        let mut others: Vec<(f64, usize)> =
            (0..n).filter(|&u| u != v).map(|u| (layout.dist(v, u), u)).collect();
        others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let nearest: Vec<usize> = others[..k].iter().map(|&(_, u)| u).collect();
        let common = nearest.iter().filter(|u| adj[v].binary_search(u).is_ok()).count();
        total += common as f64 / (2 * k - common) as f64;
    }
    total / n as f64
}

pub fn drawing_metrics(layout: &Layout) -> (f64, f64, f64) {
    let b = bounding_box(layout);
    (b.width(), b.height(), b.area())
}

/// Fraction of directed edges whose target lies strictly above the source.
/// 1.0 when the graph has no directed edges.
pub fn upward_fraction(layout: &Layout, g: &Graph) -> f64 {
    let (up, total) = g.directed_edges().fold((0usize, 0usize), |(up, total), e| {
        let rises = layout.coords[e.target][1] > layout.coords[e.source][1];
        (up + rises as usize, total + 1)
    });
    if total == 0 {
        1.0
    } else {
        up as f64 / total as f64
    }
}

pub fn report(layout: &Layout, g: &Graph, dm: &DistanceMatrix) -> MetricsReport {
    let angles = crossing_angles_deg(layout, g);
    let (min_angle, avg_angle) = if angles.is_empty() {
        (90.0, 90.0)
    } else {
        (
            angles.iter().copied().fold(90.0, f64::min),
            angles.iter().sum::<f64>() / angles.len() as f64,
        )
    };
    let (w, h, a) = drawing_metrics(layout);
    MetricsReport {
        stress: stress_value(layout, dm),
        crossings: angles.len(),
        min_crossing_angle_deg: min_angle,
        avg_crossing_angle_deg: avg_angle,
        neighborhood_preservation: neighborhood_preservation(layout, g),
        drawing_width: w,
        drawing_height: h,
        drawing_area: a,
        upward_fraction: upward_fraction(layout, g),
    }
}
