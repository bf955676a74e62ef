//! Independent oracles shared by the integration and acceptance tests.
//! Nothing here calls into the library's geometry or solver code.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spx::graph::generate_community_graph;
use spx::penalties::{
    frozen_penalty, penalty_gradient, refresh_pair_states, AngleGradient, PairState, PenaltyMode,
};
use spx::stress::{stress_gradient, stress_value};
use spx::{DistanceMatrix, Graph, Layout};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_coords(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> Layout {
    Layout::new((0..n).map(|_| [rng.random::<f64>() * scale, rng.random::<f64>() * scale]).collect()).unwrap()
}

/// Small connected graph with a mix of densities.
pub fn random_graph(n: usize, seed: u64) -> Graph {
    let blocks = if n >= 8 { 2 } else { 1 };
    generate_community_graph(n, blocks, 0.5, 0.15, seed).unwrap()
}

/// Floyd-Warshall hop distances; `None` where unreachable.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<u32>>> {
    let n = g.n();
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for e in g.edges() {
        d[e.source][e.target] = Some(1);
        d[e.target][e.source] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Proper interior crossing by solving `p + t r = q + s w` with Cramer's rule.
pub fn segments_intersect_param(p: [f64; 2], p2: [f64; 2], q: [f64; 2], q2: [f64; 2]) -> bool {
    let r = [p2[0] - p[0], p2[1] - p[1]];
    let w = [q2[0] - q[0], q2[1] - q[1]];
    let den = r[0] * w[1] - r[1] * w[0];
    if den.abs() < 1e-15 {
        return false;
    }
    let qp = [q[0] - p[0], q[1] - p[1]];
    let t = (qp[0] * w[1] - qp[1] * w[0]) / den;
    let s = (qp[0] * r[1] - qp[1] * r[0]) / den;
    t > 0.0 && t < 1.0 && s > 0.0 && s < 1.0
}

pub fn brute_crossings(layout: &Layout, g: &Graph) -> usize {
    let c = &layout.coords;
    let e = g.edges();
    let mut count = 0;
    for i in 0..e.len() {
        for j in (i + 1)..e.len() {
            let (a, b) = (e[i], e[j]);
            if a.source == b.source || a.source == b.target || a.target == b.source || a.target == b.target {
                continue;
            }
            if segments_intersect_param(c[a.source], c[a.target], c[b.source], c[b.target]) {
                count += 1;
            }
        }
    }
    count
}

/// Acute angle between two directions via atan2, in radians.
pub fn atan2_angle(da: [f64; 2], db: [f64; 2]) -> f64 {
    let a = (da[1].atan2(da[0]) - db[1].atan2(db[0])).abs() % std::f64::consts::PI;
    a.min(std::f64::consts::PI - a)
}

/// Hinge objective of a separator `(u, gamma)` for segments `a`, `b`.
pub fn hinge(a: [[f64; 2]; 2], b: [[f64; 2]; 2], u: [f64; 2], gamma: f64) -> f64 {
    let dot = |p: [f64; 2]| p[0] * u[0] + p[1] * u[1];
    a.iter().map(|&p| (-dot(p) - gamma).max(0.0)).sum::<f64>()
        + b.iter().map(|&p| (dot(p) + 1.0 + gamma).max(0.0)).sum::<f64>()
}

/// For a fixed unit direction `n`, the exact minimum over `u = r n` and
/// gamma. In `(r, gamma)` the objective is convex and piecewise linear with
/// four breakpoint lines, so it is minimized at one of their intersections.
fn best_along(a: [[f64; 2]; 2], b: [[f64; 2]; 2], n: [f64; 2]) -> f64 {
    let dot = |p: [f64; 2]| p[0] * n[0] + p[1] * n[1];
    // line k: c_r * r + c_g * gamma + c_0 = 0
    let lines = [
        (-dot(a[0]), -1.0, 0.0),
        (-dot(a[1]), -1.0, 0.0),
        (dot(b[0]), 1.0, 1.0),
        (dot(b[1]), 1.0, 1.0),
    ];
    let eval = |r: f64, g: f64| hinge(a, b, [r * n[0], r * n[1]], g);
    let mut best = eval(0.0, -0.5);
    for i in 0..4 {
        for j in (i + 1)..4 {
            let (p, q) = (lines[i], lines[j]);
            let det = p.0 * q.1 - p.1 * q.0;
            if det.abs() < 1e-14 {
                continue;
            }
            let r = (-p.2 * q.1 + p.1 * q.2) / det;
            let g = (-p.0 * q.2 + p.2 * q.0) / det;
            best = best.min(eval(r, g));
        }
    }
    best
}

/// Grid search over the direction of `u` (angles in `[0, pi)`; the sign is
/// absorbed by the magnitude), exact in magnitude and gamma. A uniform grid
/// is followed by coarse-to-fine refinement around the best angle.
pub fn grid_separator_oracle(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> f64 {
    let at = |phi: f64| best_along(a, b, [phi.cos(), phi.sin()]);
    let steps = 20_000;
    let mut step = std::f64::consts::PI / steps as f64;
    let (mut best, mut center) = (f64::INFINITY, 0.0);
    for k in 0..steps {
        let v = at(k as f64 * step);
        if v < best {
            best = v;
            center = k as f64 * step;
        }
    }
    for _ in 0..30 {
        let lo = center - step;
        step /= 10.0;
        for k in 0..=20 {
            let phi = lo + k as f64 * step;
            let v = at(phi);
            if v < best {
                best = v;
                center = phi;
            }
        }
    }
    best
}

/// Random layout with at least one crossing pair plus pair states frozen at
/// a nearby layout, with every hinge argument away from its kink. `None`
/// when the draw is unusable.
pub fn frozen_instance(n: usize, seed: u64, h: f64) -> Option<(Graph, DistanceMatrix, Layout, Vec<PairState>)> {
    let g = random_graph(n, seed);
    let dm = spx::graph::all_pairs_shortest_paths(&g).unwrap();
    let mut r = rng(seed ^ 0x5eed);
    let start = random_coords(n, (n as f64).sqrt() * 1.5, &mut r);
    let pairs = g.independent_edge_pairs();
    let states = refresh_pair_states(&start, &g, &pairs);
    if !states.iter().any(|s| s.rho) {
        return None;
    }
    // The LP optimum puts some hinge arguments exactly at zero, so the
    // check runs at a nearby layout with the separators held frozen.
    let layout = Layout::new(
        start
            .coords
            .iter()
            .map(|c| [c[0] + (r.random::<f64>() - 0.5) * 1e-2, c[1] + (r.random::<f64>() - 0.5) * 1e-2])
            .collect(),
    )
    .unwrap();
    // A hinge argument closer to zero than any +-h move could shift it
    // would put the finite difference across a kink.
    for s in states.iter().filter(|s| s.rho) {
        let (ea, eb) = (g.edges()[s.pair.0], g.edges()[s.pair.1]);
        let u = s.separator.u;
        let reach = 10.0 * h * (u[0].abs() + u[1].abs()) + 1e-9;
        let c = &layout.coords;
        let dot = |p: [f64; 2]| p[0] * u[0] + p[1] * u[1];
        let args = [
            -dot(c[ea.source]) - s.separator.gamma,
            -dot(c[ea.target]) - s.separator.gamma,
            dot(c[eb.source]) + 1.0 + s.separator.gamma,
            dot(c[eb.target]) + 1.0 + s.separator.gamma,
        ];
        if args.iter().any(|x| x.abs() < reach) {
            return None;
        }
    }
    Some((g, dm, layout, states))
}

/// `max |fd - analytic| / max(max |analytic|, 1)` over all coordinates.
pub fn relative_error(analytic: &[[f64; 2]], f: impl Fn(&Layout) -> f64, layout: &Layout, h: f64) -> f64 {
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for (i, g) in analytic.iter().enumerate() {
        for d in 0..2 {
            let mut plus = layout.clone();
            let mut minus = layout.clone();
            plus.coords[i][d] += h;
            minus.coords[i][d] -= h;
            let fd = (f(&plus) - f(&minus)) / (2.0 * h);
            worst = worst.max((fd - g[d]).abs());
            scale = scale.max(g[d].abs());
        }
    }
    worst / scale
}

pub fn stress_fd_error(g: &Graph, dm: &DistanceMatrix, layout: &Layout) -> f64 {
    let _ = g;
    let grad = stress_gradient(layout, dm).unwrap();
    relative_error(&grad, |l| stress_value(l, dm), layout, 1e-6)
}

pub fn penalty_fd_error(
    g: &Graph,
    layout: &Layout,
    states: &[PairState],
    mode: PenaltyMode,
    angle: AngleGradient,
) -> f64 {
    let grad = penalty_gradient(layout, g, states, mode, angle);
    relative_error(&grad, |l| frozen_penalty(l, g, states, mode, angle), layout, 1e-6)
}
