//! The two-phase layout loop.
//!
//! Every outer iteration refreshes the per-pair separators, crossing flags
//! and angles from the current geometry, then takes gradient steps on
//! `stress + K * penalties (+ upward hinge)` with those quantities frozen.

mod gd;
mod init;
mod sweep;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpxError};
use crate::graph::{DistanceMatrix, Graph};
use crate::layout::Layout;
use crate::penalties::{
    frozen_penalty, penalty_gradient, penalty_sum, refresh_pair_states, AngleGradient, PairState,
    PenaltyMode,
};
use crate::rng::derive_seed;
use crate::stress::{separate_coincident, stress_gradient, stress_value};

pub use gd::{gd_step, GdKind, GdState, GdVariant};
pub use init::{
    fruchterman_reingold, initial_layout, longest_path_levels, random_layout, rescale_to_distances,
    upward_seed, InitMethod,
};
pub use sweep::{default_k_grid, init_seed, sweep, SweepGrid, SweepOutcome};

/// A run whose stress grows past this multiple of its initial stress is
/// abandoned as diverged.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    #[serde(rename = "cost")]
    MinCost,
    #[serde(rename = "angle")]
    MaxMinAngle,
    #[serde(rename = "crossings")]
    MinCrossings,
}

impl Selection {
    pub fn parse(s: &str) -> Option<Selection> {
        match s.to_ascii_lowercase().as_str() {
            "cost" => Some(Selection::MinCost),
            "angle" => Some(Selection::MaxMinAngle),
            "crossings" => Some(Selection::MinCrossings),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub k: f64,
    pub variant: GdVariant,
    pub mode: PenaltyMode,
    pub init: InitMethod,
    pub seed: u64,
    pub outer_iters: usize,
    /// Gradient steps per outer iteration.
    pub inner_steps: usize,
    pub upward: bool,
    pub upward_eps: f64,
    pub upward_mu: f64,
    pub selection: Selection,
    pub angle_gradient: AngleGradient,
}

impl RunConfig {
    /// Defaults for a graph; the diameter sets the plain-GD learning rates.
    pub fn for_graph(dm: &DistanceMatrix) -> Self {
        RunConfig {
            k: 1.0,
            variant: GdVariant::with_defaults(GdKind::Adam, dm.diameter()),
            mode: PenaltyMode::CrossingOnly,
            init: InitMethod::StressMajorization,
            seed: 0,
            outer_iters: 100,
            inner_steps: 1,
            upward: false,
            upward_eps: 0.01,
            upward_mu: 10.0,
            selection: Selection::MinCost,
            angle_gradient: AngleGradient::Full,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(SpxError::InvalidArgument(format!("K must be > 0, got {}", self.k)));
        }
        if self.inner_steps == 0 {
            return Err(SpxError::InvalidArgument("inner_steps must be >= 1".into()));
        }
        if !(self.upward_eps.is_finite() && self.upward_eps > 0.0) {
            return Err(SpxError::InvalidArgument("upward_eps must be > 0".into()));
        }
        if !(self.upward_mu.is_finite() && self.upward_mu > 0.0) {
            return Err(SpxError::InvalidArgument("upward_mu must be > 0".into()));
        }
        self.variant.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iter: usize,
    pub crossings: usize,
    pub stress: f64,
    /// Degrees; 90 when nothing crosses.
    pub min_angle: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub lp_fallbacks: usize,
    pub jitters: usize,
    /// Set when a run was abandoned: non-finite step, coincident
    /// vertices that could not be separated, or divergence.
    pub aborted: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub layout: Layout,
    pub final_cost: f64,
    pub final_stress: f64,
    pub final_crossings: usize,
    pub final_min_angle: f64,
    pub trace: Vec<TraceRecord>,
    pub config: RunConfig,
    pub diagnostics: Diagnostics,
}

impl RunResult {
    pub fn is_valid(&self) -> bool {
        self.diagnostics.aborted.is_none() && self.final_cost.is_finite()
    }
}

/// `mu * sum over directed (u, v) of max(0, eps - (y_v - y_u))`.
pub fn upward_hinge(layout: &Layout, g: &Graph, eps: f64, mu: f64) -> f64 {
    g.directed_edges()
        .map(|e| (eps - (layout.coords[e.target][1] - layout.coords[e.source][1])).max(0.0))
        .sum::<f64>()
        * mu
}

fn add_upward_gradient(grad: &mut [[f64; 2]], layout: &Layout, g: &Graph, eps: f64, mu: f64) {
    for e in g.directed_edges() {
        if eps - (layout.coords[e.target][1] - layout.coords[e.source][1]) > 0.0 {
            grad[e.target][1] -= mu;
            grad[e.source][1] += mu;
        }
    }
}

/// Raise `y` coordinates in topological order until every directed edge
/// climbs by at least `eps`. `x` is untouched and no `y` ever decreases.
pub fn upward_repair(layout: &Layout, g: &Graph, eps: f64) -> Result<Layout> {
    let order = g.topological_order().ok_or(SpxError::NotADag)?;
    let mut preds = vec![Vec::new(); g.n()];
    for e in g.directed_edges() {
        preds[e.target].push(e.source);
    }
    let mut out = layout.clone();
    for v in order {
        for &u in &preds[v] {
            let floor = out.coords[u][1] + eps;
            if out.coords[v][1] < floor {
                out.coords[v][1] = floor;
            }
        }
    }
    Ok(out)
}

fn min_angle_deg(states: &[PairState]) -> f64 {
    states
        .iter()
        .filter_map(|s| s.theta)
        .map(f64::to_degrees)
        .fold(90.0, f64::min)
}

/// Run from a freshly computed initial layout. Upward runs start from the
/// layered [`upward_seed`] of that layout.
pub fn spx_optimize(g: &Graph, dm: &DistanceMatrix, cfg: &RunConfig) -> Result<RunResult> {
    cfg.validate()?;
    let init = starting_layout(g, dm, cfg.init, cfg.seed, cfg.upward)?;
    spx_optimize_from(g, dm, cfg, init)
}

pub(crate) fn starting_layout(
    g: &Graph,
    dm: &DistanceMatrix,
    method: InitMethod,
    seed: u64,
    upward: bool,
) -> Result<Layout> {
    let init = initial_layout(g, dm, method, seed)?;
    if upward {
        upward_seed(g, dm, &init)
    } else {
        Ok(init)
    }
}

/// Run from a caller-supplied initial layout.
pub fn spx_optimize_from(
    g: &Graph,
    dm: &DistanceMatrix,
    cfg: &RunConfig,
    init: Layout,
) -> Result<RunResult> {
    cfg.validate()?;
    if init.n() != g.n() || dm.n() != g.n() {
        return Err(SpxError::InvalidArgument(format!(
            "initial layout has {} rows for a graph with {} vertices",
            init.n(),
            g.n()
        )));
    }
    if cfg.upward && !g.is_dag() {
        return Err(SpxError::NotADag);
    }

    let pairs = g.independent_edge_pairs();
    let mut layout = init;
    let mut gd_state = GdState::new(g.n());
    let mut diagnostics = Diagnostics::default();
    let mut trace = Vec::with_capacity(cfg.outer_iters);
    let mut diverged_above = f64::INFINITY;
    let upward_term = |l: &Layout| {
        if cfg.upward {
            upward_hinge(l, g, cfg.upward_eps, cfg.upward_mu)
        } else {
            0.0
        }
    };

    'outer: for iter in 0..cfg.outer_iters {
        diagnostics.jitters += separate_coincident(&mut layout, derive_seed(cfg.seed, &[iter as u64]));
        let states = refresh_pair_states(&layout, g, &pairs);
        diagnostics.lp_fallbacks += states.iter().filter(|s| s.fallback).count();

        let stress = stress_value(&layout, dm);
        if iter > 0 && stress > diverged_above {
            diagnostics.aborted = Some(format!("diverged: stress {stress:e} at iteration {iter}"));
            break;
        }
        if iter == 0 {
            diverged_above = DIVERGENCE_FACTOR * stress.max(1.0);
        }
        trace.push(TraceRecord {
            iter,
            crossings: states.iter().filter(|s| s.rho).count(),
            stress,
            min_angle: min_angle_deg(&states),
            cost: stress + cfg.k * penalty_sum(&states, cfg.mode) + upward_term(&layout),
        });

        for step in 0..cfg.inner_steps {
            if step > 0 {
                diagnostics.jitters += separate_coincident(
                    &mut layout,
                    derive_seed(cfg.seed, &[iter as u64, step as u64]),
                );
            }
            let mut grad = match stress_gradient(&layout, dm) {
                Ok(grad) => grad,
                Err(err) => {
                    diagnostics.aborted = Some(err.to_string());
                    break 'outer;
                }
            };
            let pg = penalty_gradient(&layout, g, &states, cfg.mode, cfg.angle_gradient);
            for (gv, pv) in grad.iter_mut().zip(&pg) {
                gv[0] += cfg.k * pv[0];
                gv[1] += cfg.k * pv[1];
            }
            if cfg.upward {
                add_upward_gradient(&mut grad, &layout, g, cfg.upward_eps, cfg.upward_mu);
            }
            let before = layout.clone();
            if let Err(err) = gd_step(&mut layout, &grad, &mut gd_state, &cfg.variant) {
                diagnostics.aborted = Some(err.to_string());
                layout = before;
                break 'outer;
            }
        }
    }

    if cfg.upward {
        layout = upward_repair(&layout, g, cfg.upward_eps)?;
    }
    diagnostics.jitters += separate_coincident(&mut layout, derive_seed(cfg.seed, &[u64::MAX]));
    let states = refresh_pair_states(&layout, g, &pairs);
    let final_stress = stress_value(&layout, dm);
    let final_cost = if diagnostics.aborted.is_some() {
        f64::NAN
    } else {
        final_stress + cfg.k * penalty_sum(&states, cfg.mode) + upward_term(&layout)
    };
    Ok(RunResult {
        final_cost,
        final_stress,
        final_crossings: states.iter().filter(|s| s.rho).count(),
        final_min_angle: min_angle_deg(&states),
        layout,
        trace,
        config: cfg.clone(),
        diagnostics,
    })
}

/// Cost surrogate minimized in phase two, with `states` frozen.
pub fn frozen_cost(
    layout: &Layout,
    g: &Graph,
    dm: &DistanceMatrix,
    states: &[PairState],
    cfg: &RunConfig,
) -> f64 {
    let mut c = stress_value(layout, dm)
        + cfg.k * frozen_penalty(layout, g, states, cfg.mode, cfg.angle_gradient);
    if cfg.upward {
        c += upward_hinge(layout, g, cfg.upward_eps, cfg.upward_mu);
    }
    c
}
