//! Crossing and crossing-angle penalties built on per-pair separating-line
//! certificates.
//!
//! Two segments with endpoint rows `a_k` and `b_k` are strictly separated
//! iff some `(u, gamma)` satisfies `a_k.u + gamma >= 0` and
//! `b_k.u + 1 + gamma <= 0` for both endpoints. The pair penalty is the
//! smallest total hinge violation of those four inequalities, found by a
//! small LP; it is zero exactly when the segments can be separated.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpxError};
use crate::geometry::{crossing_angle, crossing_cos, segments_cross, Point, Segment};
use crate::graph::{DistanceMatrix, Graph};
use crate::layout::Layout;
use crate::simplex::{self, LpError, StandardForm};
use crate::stress::{stress_value, Gradient};

pub const LP_PIVOT_BUDGET: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Separator {
    pub u: [f64; 2],
    pub gamma: f64,
}

impl Separator {
    /// Always feasible with hinge total 2, for any pair of segments.
    pub const TRIVIAL: Separator = Separator {
        u: [0.0, 0.0],
        gamma: -0.5,
    };

    fn dot(&self, p: Point) -> f64 {
        self.u[0] * p.x + self.u[1] * p.y
    }

    /// Hinge violation of the `A` side at endpoint `p`: `(-(p.u) - gamma)+`.
    pub fn a_violation(&self, p: Point) -> f64 {
        (-self.dot(p) - self.gamma).max(0.0)
    }

    /// Hinge violation of the `B` side at endpoint `p`: `(p.u + 1 + gamma)+`.
    pub fn b_violation(&self, p: Point) -> f64 {
        (self.dot(p) + 1.0 + self.gamma).max(0.0)
    }

    /// Total hinge violation for segments `a` and `b`.
    pub fn violation(&self, a: &Segment, b: &Segment) -> f64 {
        self.a_violation(a.p) + self.a_violation(a.q) + self.b_violation(b.p) + self.b_violation(b.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PenaltyMode {
    /// Sum of `(rho/2) * penalty`.
    #[serde(rename = "crossing")]
    CrossingOnly,
    /// Sum of `(rho/2) * cos^2(theta) * penalty`.
    #[serde(rename = "angle")]
    CrossingAngle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatorSolution {
    pub separator: Separator,
    pub penalty: f64,
    /// True when the simplex failed and a grid search produced the result.
    pub fallback: bool,
}

/// Solve the separator LP for segment `a` (the `A` side) and `b`.
///
/// The LP value is invariant under translation and uniform scaling, so the
/// endpoints are mapped into `[-1, 1]^2` before solving and the certificate
/// is mapped back afterwards. This keeps the tableau well conditioned.
pub fn solve_separator(a: &Segment, b: &Segment) -> Result<SeparatorSolution> {
    if a.is_degenerate() || b.is_degenerate() {
        return Err(SpxError::DegenerateSegment);
    }
    let cx = (a.p.x + a.q.x + b.p.x + b.q.x) / 4.0;
    let cy = (a.p.y + a.q.y + b.p.y + b.q.y) / 4.0;
    let scale = [a.p, a.q, b.p, b.q]
        .iter()
        .map(|p| (p.x - cx).abs().max((p.y - cy).abs()))
        .fold(0.0, f64::max);
    let local = |p: Point| Point::new((p.x - cx) / scale, (p.y - cy) / scale);
    let la = Segment::new(local(a.p), local(a.q));
    let lb = Segment::new(local(b.p), local(b.q));

    let (local_sep, fallback) = match solve_separator_lp(&la, &lb) {
        Ok(sep) => (sep, false),
        Err(err) => {
            log::debug!("separator LP failed ({err}); using grid search");
            (grid_search_separator(&la, &lb), true)
        }
    };
    // With p' = (p - c) / s:  p'.u' + g' = p.(u'/s) + g' - c.(u'/s)
    let u = [local_sep.u[0] / scale, local_sep.u[1] / scale];
    let separator = Separator {
        u,
        gamma: local_sep.gamma - (u[0] * cx + u[1] * cy),
    };
    let penalty = local_sep.violation(&la, &lb);
    Ok(SeparatorSolution {
        separator,
        penalty,
        fallback,
    })
}

// Column layout: u_x+, u_x-, u_y+, u_y-, gamma+, gamma-, s1, s2, t1, t2,
// e1, e2, f1, f2 (s/t hinge slacks, e/f surplus).
const LP_COLS: usize = 14;

fn solve_separator_lp(a: &Segment, b: &Segment) -> std::result::Result<Separator, LpError> {
    let mut lp = StandardForm {
        rows: 4,
        cols: LP_COLS,
        a: vec![0.0; 4 * LP_COLS],
        b: vec![0.0, 0.0, 1.0, 1.0],
        c: vec![0.0; LP_COLS],
        basis: vec![6, 7, 8, 9],
    };
    for j in 6..10 {
        lp.c[j] = 1.0;
    }
    // s_k + a_k.u + gamma - e_k = 0
    for (k, p) in [a.p, a.q].into_iter().enumerate() {
        let row = &mut lp.a[k * LP_COLS..(k + 1) * LP_COLS];
        row[..6].copy_from_slice(&[p.x, -p.x, p.y, -p.y, 1.0, -1.0]);
        row[6 + k] = 1.0;
        row[10 + k] = -1.0;
    }
    // t_k - b_k.u - gamma - f_k = 1
    for (k, p) in [b.p, b.q].into_iter().enumerate() {
        let r = 2 + k;
        let row = &mut lp.a[r * LP_COLS..(r + 1) * LP_COLS];
        row[..6].copy_from_slice(&[-p.x, p.x, -p.y, p.y, -1.0, 1.0]);
        row[8 + k] = 1.0;
        row[12 + k] = -1.0;
    }
    let sol = simplex::solve(&lp, LP_PIVOT_BUDGET)?;
    let x = &sol.x;
    Ok(Separator {
        u: [x[0] - x[1], x[2] - x[3]],
        gamma: x[4] - x[5],
    })
}

/// Coarse-to-fine search over `u`, with `gamma` minimized exactly at the
/// breakpoints of the piecewise-linear objective.
fn grid_search_separator(a: &Segment, b: &Segment) -> Separator {
    let best_gamma = |u: [f64; 2]| -> Separator {
        let dot = |p: Point| u[0] * p.x + u[1] * p.y;
        let candidates = [-dot(a.p), -dot(a.q), -1.0 - dot(b.p), -1.0 - dot(b.q)];
        candidates
            .into_iter()
            .map(|gamma| Separator { u, gamma })
            .min_by(|s, t| s.violation(a, b).total_cmp(&t.violation(a, b)))
            .unwrap()
    };
    let mut best = Separator::TRIVIAL;
    let mut center = [0.0, 0.0];
    let mut radius = 8.0;
    for _ in 0..12 {
        let steps = 16;
        let h = 2.0 * radius / steps as f64;
        for i in 0..=steps {
            for j in 0..=steps {
                let u = [center[0] - radius + i as f64 * h, center[1] - radius + j as f64 * h];
                let cand = best_gamma(u);
                if cand.violation(a, b) < best.violation(a, b) {
                    best = cand;
                }
            }
        }
        center = best.u;
        radius /= 4.0;
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairState {
    pub pair: (usize, usize),
    pub separator: Separator,
    pub rho: bool,
    /// Crossing angle in radians; only set when `rho` is true.
    pub theta: Option<f64>,
    /// Optimal LP value (hinge total) for this pair.
    pub penalty: f64,
    pub fallback: bool,
}

impl PairState {
    pub fn rho_value(&self) -> f64 {
        if self.rho {
            1.0
        } else {
            0.0
        }
    }
}

pub fn edge_segment(layout: &Layout, g: &Graph, edge: usize) -> Segment {
    let e = g.edges()[edge];
    Segment::from_coords(layout.coords[e.source], layout.coords[e.target])
}

/// Phase one: recompute `rho`, the separator and `theta` for every pair
/// from the current layout. Runs data-parallel; output order follows `pairs`.
pub fn refresh_pair_states(layout: &Layout, g: &Graph, pairs: &[(usize, usize)]) -> Vec<PairState> {
    pairs
        .par_iter()
        .map(|&(i, j)| refresh_pair(layout, g, (i, j)))
        .collect()
}

fn refresh_pair(layout: &Layout, g: &Graph, pair: (usize, usize)) -> PairState {
    let a = edge_segment(layout, g, pair.0);
    let b = edge_segment(layout, g, pair.1);
    let rho = segments_cross(&a, &b);
    match solve_separator(&a, &b) {
        Ok(sol) => PairState {
            pair,
            separator: sol.separator,
            rho,
            theta: if rho { crossing_angle(&a, &b).ok() } else { None },
            penalty: sol.penalty,
            fallback: sol.fallback,
        },
        Err(err) => {
            log::debug!("pair {pair:?} skipped: {err}");
            PairState {
                pair,
                separator: Separator::TRIVIAL,
                rho: false,
                theta: None,
                penalty: 0.0,
                fallback: false,
            }
        }
    }
}

/// Penalty sum from the states' stored LP values, summed in list order.
pub fn penalty_sum(states: &[PairState], mode: PenaltyMode) -> f64 {
    states
        .iter()
        .filter(|s| s.rho)
        .map(|s| {
            let weight = match mode {
                PenaltyMode::CrossingOnly => 0.5,
                PenaltyMode::CrossingAngle => 0.5 * s.theta.map_or(0.0, |t| t.cos().powi(2)),
            };
            weight * s.penalty
        })
        .sum()
}

/// How the angle factor is treated when differentiating in angle mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AngleGradient {
    /// Differentiate `cos^2(theta)` through the current edge directions.
    #[default]
    Full,
    /// Hold `cos^2(theta)` at the value stored in the pair state.
    Frozen,
}

/// `cos^2` of the angle between two direction vectors and its gradients
/// with respect to each direction.
fn cos2_with_grad(da: Point, db: Point) -> (f64, [f64; 2], [f64; 2]) {
    let p = da.dot(db);
    let na = da.dot(da);
    let nb = db.dot(db);
    let value = p * p / (na * nb);
    let k = 2.0 * p / (na * nb);
    let ga = [k * (db.x - p / na * da.x), k * (db.y - p / na * da.y)];
    let gb = [k * (da.x - p / nb * db.x), k * (da.y - p / nb * db.y)];
    (value, ga, gb)
}

/// Penalty at `layout` with every `(u, gamma, rho)` held from `states`.
/// Equal to [`penalty_sum`] when `states` were refreshed on `layout`.
pub fn frozen_penalty(
    layout: &Layout,
    g: &Graph,
    states: &[PairState],
    mode: PenaltyMode,
    angle: AngleGradient,
) -> f64 {
    let mut total = 0.0;
    for s in states.iter().filter(|s| s.rho) {
        let a = edge_segment(layout, g, s.pair.0);
        let b = edge_segment(layout, g, s.pair.1);
        let hinge = s.separator.violation(&a, &b);
        let factor = match (mode, angle) {
            (PenaltyMode::CrossingOnly, _) => 1.0,
            (PenaltyMode::CrossingAngle, AngleGradient::Frozen) => {
                s.theta.map_or(0.0, |t| t.cos().powi(2))
            }
            (PenaltyMode::CrossingAngle, AngleGradient::Full) => {
                crossing_cos(&a, &b).map_or(0.0, |c| c * c)
            }
        };
        total += 0.5 * factor * hinge;
    }
    total
}

/// Subgradient of [`frozen_penalty`] with respect to the coordinates.
/// Hinges at exactly zero contribute nothing.
pub fn penalty_gradient(
    layout: &Layout,
    g: &Graph,
    states: &[PairState],
    mode: PenaltyMode,
    angle: AngleGradient,
) -> Gradient {
    let mut grad = vec![[0.0; 2]; layout.n()];
    for s in states.iter().filter(|s| s.rho) {
        let ea = g.edges()[s.pair.0];
        let eb = g.edges()[s.pair.1];
        let a = edge_segment(layout, g, s.pair.0);
        let b = edge_segment(layout, g, s.pair.1);
        let sep = &s.separator;
        let u = sep.u;

        // d(hinge)/d(endpoint) for the four endpoints: a.p, a.q, b.p, b.q
        let mut hg = [[0.0; 2]; 4];
        if sep.a_violation(a.p) > 0.0 {
            hg[0] = [-u[0], -u[1]];
        }
        if sep.a_violation(a.q) > 0.0 {
            hg[1] = [-u[0], -u[1]];
        }
        if sep.b_violation(b.p) > 0.0 {
            hg[2] = u;
        }
        if sep.b_violation(b.q) > 0.0 {
            hg[3] = u;
        }

        let (factor, angle_grad) = match (mode, angle) {
            (PenaltyMode::CrossingOnly, _) => (1.0, None),
            (PenaltyMode::CrossingAngle, AngleGradient::Frozen) => {
                (s.theta.map_or(0.0, |t| t.cos().powi(2)), None)
            }
            (PenaltyMode::CrossingAngle, AngleGradient::Full) => {
                let (da, db) = (a.direction(), b.direction());
                if da.dot(da) == 0.0 || db.dot(db) == 0.0 {
                    (0.0, None)
                } else {
                    let (c2, ga, gb) = cos2_with_grad(da, db);
                    (c2, Some((ga, gb)))
                }
            }
        };

        let targets = [ea.source, ea.target, eb.source, eb.target];
        for (k, &v) in targets.iter().enumerate() {
            grad[v][0] += 0.5 * factor * hg[k][0];
            grad[v][1] += 0.5 * factor * hg[k][1];
        }
        if let Some((ga, gb)) = angle_grad {
            let hinge = sep.violation(&a, &b);
            let h = 0.5 * hinge;
            // direction = target - source
            grad[ea.target][0] += h * ga[0];
            grad[ea.target][1] += h * ga[1];
            grad[ea.source][0] -= h * ga[0];
            grad[ea.source][1] -= h * ga[1];
            grad[eb.target][0] += h * gb[0];
            grad[eb.target][1] += h * gb[1];
            grad[eb.source][0] -= h * gb[0];
            grad[eb.source][1] -= h * gb[1];
        }
    }
    grad
}

pub fn total_cost(
    layout: &Layout,
    dm: &DistanceMatrix,
    states: &[PairState],
    k: f64,
    mode: PenaltyMode,
) -> f64 {
    stress_value(layout, dm) + k * penalty_sum(states, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_pairs_shortest_paths, generate_binary_tree, Edge};
    use rand::Rng;

    fn seg(a: (f64, f64), b: (f64, f64)) -> Segment {
        Segment::new(Point::new(a.0, a.1), Point::new(b.0, b.1))
    }

    fn k4() -> Graph {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                edges.push(Edge::undirected(i, j));
            }
        }
        Graph::new(4, edges).unwrap()
    }

    #[test]
    fn parallel_segments_have_zero_penalty() {
        let a = seg((0., 0.), (1., 0.));
        let b = seg((0., 2.), (1., 2.));
        let sol = solve_separator(&a, &b).unwrap();
        assert!(sol.penalty < 1e-12);
        assert!(!sol.fallback);
        // the boundary certificate u=(0,-1/2), gamma=0 is feasible
        let boundary = Separator {
            u: [0.0, -0.5],
            gamma: 0.0,
        };
        assert_eq!(boundary.violation(&a, &b), 0.0);
    }

    #[test]
    fn symmetric_x_has_penalty_two() {
        // crossing at both midpoints: the bound 2 from u=0, gamma=-1/2 is tight
        let sol = solve_separator(&seg((0., 0.), (2., 2.)), &seg((0., 2.), (2., 0.))).unwrap();
        assert!((sol.penalty - 2.0).abs() < 1e-9, "{}", sol.penalty);
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert_eq!(
            solve_separator(&seg((0., 0.), (0., 0.)), &seg((0., 2.), (2., 0.))),
            Err(SpxError::DegenerateSegment)
        );
    }

    #[test]
    fn non_crossing_random_pairs_have_zero_penalty() {
        let mut rng = crate::rng::rng_from_seed(5);
        let mut checked = 0;
        while checked < 2000 {
            let mut c = || rng.random_range(-3.0..3.0);
            let a = seg((c(), c()), (c(), c()));
            let b = seg((c(), c()), (c(), c()));
            if segments_cross(&a, &b) {
                continue;
            }
            let sol = solve_separator(&a, &b).unwrap();
            assert!(sol.penalty < 1e-9, "{a:?} {b:?} {}", sol.penalty);
            checked += 1;
        }
    }

    #[test]
    fn grid_fallback_close_to_lp() {
        let a = seg((0., 0.), (3., 1.));
        let b = seg((1., -1.), (1.5, 2.));
        let lp = solve_separator_lp(&a, &b).unwrap().violation(&a, &b);
        let grid = grid_search_separator(&a, &b).violation(&a, &b);
        assert!(lp <= grid + 1e-12);
        assert!(grid - lp < 1e-3, "{grid} vs {lp}");
    }

    #[test]
    fn planar_tree_has_no_active_pairs() {
        let g = generate_binary_tree(2).unwrap();
        // leaves spread on a line below their parents
        let l = Layout::new(vec![
            [0., 2.],
            [-2., 1.],
            [2., 1.],
            [-3., 0.],
            [-1., 0.],
            [1., 0.],
            [3., 0.],
        ])
        .unwrap();
        let states = refresh_pair_states(&l, &g, &g.independent_edge_pairs());
        assert!(states.iter().all(|s| !s.rho && s.penalty < 1e-9));
        assert_eq!(penalty_sum(&states, PenaltyMode::CrossingOnly), 0.0);
    }

    #[test]
    fn k4_convex_has_one_crossing() {
        let g = k4();
        let l = Layout::new(vec![[0., 0.], [1., 0.], [1., 1.], [0., 1.]]).unwrap();
        let states = refresh_pair_states(&l, &g, &g.independent_edge_pairs());
        assert_eq!(states.iter().filter(|s| s.rho).count(), 1);
        // the diagonals are perpendicular
        assert!(penalty_sum(&states, PenaltyMode::CrossingAngle) < 1e-20);
        assert!(penalty_sum(&states, PenaltyMode::CrossingOnly) > 0.5);
    }

    #[test]
    fn total_cost_on_planar_zero_stress_layout() {
        let g = Graph::new(3, vec![Edge::undirected(0, 1), Edge::undirected(1, 2)]).unwrap();
        let dm = all_pairs_shortest_paths(&g).unwrap();
        let l = Layout::new(vec![[0., 0.], [1., 0.], [2., 0.]]).unwrap();
        let states = refresh_pair_states(&l, &g, &g.independent_edge_pairs());
        assert_eq!(total_cost(&l, &dm, &states, 4.0, PenaltyMode::CrossingOnly), 0.0);
    }

    #[test]
    fn zero_penalty_state_has_zero_gradient() {
        let g = k4();
        let l = Layout::new(vec![[0., 0.], [2., 0.], [1., 0.5], [1., 2.]]).unwrap();
        let states = refresh_pair_states(&l, &g, &g.independent_edge_pairs());
        assert!(states.iter().all(|s| !s.rho));
        let grad = penalty_gradient(&l, &g, &states, PenaltyMode::CrossingAngle, AngleGradient::Full);
        assert!(grad.iter().all(|v| *v == [0.0, 0.0]));
    }
}
