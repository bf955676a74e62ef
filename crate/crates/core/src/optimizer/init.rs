//! Initial layouts: random, stress majorization, Fruchterman-Reingold.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpxError};
use crate::graph::{DistanceMatrix, Graph};
use crate::layout::Layout;
use crate::rng::{derive_seed, rng_from_seed};
use crate::stress::{separate_coincident, stress_majorize, stress_majorize_x, MajorizeOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitMethod {
    #[serde(rename = "stress")]
    StressMajorization,
    #[serde(rename = "force")]
    ForceDirected,
    Random,
}

impl InitMethod {
    pub const ALL: [InitMethod; 3] = [
        InitMethod::StressMajorization,
        InitMethod::ForceDirected,
        InitMethod::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InitMethod::StressMajorization => "stress",
            InitMethod::ForceDirected => "force",
            InitMethod::Random => "random",
        }
    }

    pub fn parse(s: &str) -> Option<InitMethod> {
        match s.to_ascii_lowercase().as_str() {
            "stress" | "stress-majorization" | "sm" => Some(InitMethod::StressMajorization),
            "force" | "force-directed" | "fr" => Some(InitMethod::ForceDirected),
            "random" => Some(InitMethod::Random),
            _ => None,
        }
    }
}

pub const FORCE_DIRECTED_ITERS: usize = 500;

pub fn initial_layout(g: &Graph, dm: &DistanceMatrix, method: InitMethod, seed: u64) -> Result<Layout> {
    match method {
        InitMethod::Random => Ok(random_layout(g.n(), seed)),
        InitMethod::StressMajorization => {
            stress_majorize(g, dm, &random_layout(g.n(), seed), MajorizeOptions::default())
        }
        InitMethod::ForceDirected => Ok(fruchterman_reingold(g, dm, seed, FORCE_DIRECTED_ITERS)),
    }
}

/// Longest-path level of every vertex over the directed edges; sources sit
/// at level 0.
pub fn longest_path_levels(g: &Graph) -> Result<Vec<usize>> {
    let order = g.topological_order().ok_or(SpxError::NotADag)?;
    let mut succ = vec![Vec::new(); g.n()];
    for e in g.directed_edges() {
        succ[e.source].push(e.target);
    }
    let mut level = vec![0; g.n()];
    for v in order {
        for &t in &succ[v] {
            level[t] = level[t].max(level[v] + 1);
        }
    }
    Ok(level)
}

/// Starting point for upward runs: `y` becomes the longest-path level (one
/// unit per level, so every directed edge climbs by at least 1) and `x` is
/// re-fitted by majorizing stress over `x` alone, starting from `init`'s `x`.
pub fn upward_seed(g: &Graph, dm: &DistanceMatrix, init: &Layout) -> Result<Layout> {
    let level = longest_path_levels(g)?;
    let mut layout = Layout {
        coords: init
            .coords
            .iter()
            .zip(&level)
            .map(|(c, &l)| [c[0], l as f64])
            .collect(),
    };
    layout.center();
    stress_majorize_x(dm, &layout, MajorizeOptions::default())
}

/// Uniform in `[0, sqrt(n)]^2`.
pub fn random_layout(n: usize, seed: u64) -> Layout {
    let side = (n as f64).sqrt();
    let mut rng = rng_from_seed(seed);
    Layout {
        coords: (0..n)
            .map(|_| [rng.random_range(0.0..side), rng.random_range(0.0..side)])
            .collect(),
    }
}

/// Fruchterman-Reingold with ideal edge length 1 and linear cooling. The
/// result is centered and rescaled to the stress-optimal uniform scale, so
/// it lives in the same units as the hop distances.
pub fn fruchterman_reingold(g: &Graph, dm: &DistanceMatrix, seed: u64, iters: usize) -> Layout {
    let n = g.n();
    let mut layout = random_layout(n, seed);
    let k = 1.0;
    let t0 = (n as f64).sqrt() / 10.0;
    let mut disp = vec![[0.0f64; 2]; n];
    for it in 0..iters {
        separate_coincident(&mut layout, derive_seed(seed, &[it as u64]));
        disp.iter_mut().for_each(|d| *d = [0.0, 0.0]);
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = layout.coords[i][0] - layout.coords[j][0];
                let dy = layout.coords[i][1] - layout.coords[j][1];
                let dist = dx.hypot(dy).max(1e-9);
                let f = k * k / dist / dist;
                disp[i][0] += dx * f;
                disp[i][1] += dy * f;
                disp[j][0] -= dx * f;
                disp[j][1] -= dy * f;
            }
        }
        for e in g.edges() {
            let (i, j) = (e.source, e.target);
            let dx = layout.coords[i][0] - layout.coords[j][0];
            let dy = layout.coords[i][1] - layout.coords[j][1];
            let dist = dx.hypot(dy);
            let f = dist / k;
            disp[i][0] -= dx * f;
            disp[i][1] -= dy * f;
            disp[j][0] += dx * f;
            disp[j][1] += dy * f;
        }
        let temp = t0 * (1.0 - it as f64 / iters as f64);
        for (c, d) in layout.coords.iter_mut().zip(&disp) {
            let len = d[0].hypot(d[1]);
            if len > 0.0 {
                let step = len.min(temp);
                c[0] += d[0] / len * step;
                c[1] += d[1] / len * step;
            }
        }
    }
    layout.center();
    rescale_to_distances(&mut layout, dm);
    layout
}

/// Multiply all coordinates by the scale minimizing weighted stress:
/// `s = sum w d |x| / sum w |x|^2`.
pub fn rescale_to_distances(layout: &mut Layout, dm: &DistanceMatrix) {
    let n = layout.n();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let len = layout.dist(i, j);
            num += dm.w(i, j) * dm.d(i, j) * len;
            den += dm.w(i, j) * len * len;
        }
    }
    if den > 0.0 && num > 0.0 {
        let s = num / den;
        for c in &mut layout.coords {
            c[0] *= s;
            c[1] *= s;
        }
    }
}
