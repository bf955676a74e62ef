//! Multi-start grid over K, GD variant and initializer.

use std::cmp::Ordering;

use rayon::prelude::*;

use super::{spx_optimize_from, starting_layout, GdKind, GdVariant, InitMethod, RunConfig, RunResult, Selection};
use crate::error::{Result, SpxError};
use crate::graph::{DistanceMatrix, Graph};
use crate::rng::derive_seed;

/// `2^-5, 2^-4, ..., 2^5`.
pub fn default_k_grid() -> Vec<f64> {
    (-5..=5).map(|e| 2f64.powi(e)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub k_values: Vec<f64>,
    pub variants: Vec<GdVariant>,
    pub inits: Vec<InitMethod>,
    pub restarts: usize,
}

impl SweepGrid {
    /// 11 K values, all six variants, all three initializers, 5 restarts.
    pub fn full(dm: &DistanceMatrix) -> Self {
        SweepGrid {
            k_values: default_k_grid(),
            variants: GdKind::ALL
                .iter()
                .map(|&k| GdVariant::with_defaults(k, dm.diameter()))
                .collect(),
            inits: InitMethod::ALL.to_vec(),
            restarts: 5,
        }
    }

    pub fn cells(&self) -> usize {
        self.k_values.len() * self.variants.len() * self.inits.len() * self.restarts
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub best: RunResult,
    /// Every run in grid order (K outermost, then variant, init, restart).
    pub runs: Vec<RunResult>,
    pub failed: usize,
}

/// Seed shared by every cell that starts from the same initializer and
/// restart, so those cells begin from the same layout.
pub fn init_seed(base: u64, init: InitMethod, restart: usize) -> u64 {
    let idx = InitMethod::ALL.iter().position(|&m| m == init).unwrap() as u64;
    derive_seed(base, &[idx, restart as u64])
}

pub fn sweep(g: &Graph, dm: &DistanceMatrix, grid: &SweepGrid, base: &RunConfig) -> Result<SweepOutcome> {
    if grid.cells() == 0 {
        return Err(SpxError::InvalidArgument("sweep grid is empty".into()));
    }

    let starts: Vec<(InitMethod, usize)> = grid
        .inits
        .iter()
        .flat_map(|&m| (0..grid.restarts).map(move |r| (m, r)))
        .collect();
    let layouts = starts
        .par_iter()
        .map(|&(m, r)| starting_layout(g, dm, m, init_seed(base.seed, m, r), base.upward))
        .collect::<Result<Vec<_>>>()?;

    let mut cells = Vec::with_capacity(grid.cells());
    for &k in &grid.k_values {
        for variant in &grid.variants {
            for (s, &(init, restart)) in starts.iter().enumerate() {
                let cfg = RunConfig {
                    k,
                    variant: *variant,
                    init,
                    seed: init_seed(base.seed, init, restart),
                    ..base.clone()
                };
                cells.push((cfg, s));
            }
        }
    }

    let outcomes: Vec<Result<RunResult>> = cells
        .par_iter()
        .map(|(cfg, s)| spx_optimize_from(g, dm, cfg, layouts[*s].clone()))
        .collect();

    let mut runs = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        runs.push(o?);
    }
    let failed = runs.iter().filter(|r| !r.is_valid()).count();
    let best = select_best(&runs, base.selection)
        .cloned()
        .ok_or_else(|| SpxError::InvalidArgument("every sweep run failed".into()))?;
    Ok(SweepOutcome { best, runs, failed })
}

/// Best valid run under `selection`; earlier runs win exact ties.
pub fn select_best(runs: &[RunResult], selection: Selection) -> Option<&RunResult> {
    let compare = |a: &RunResult, b: &RunResult| -> Ordering {
        let by_cost = a.final_cost.total_cmp(&b.final_cost);
        match selection {
            Selection::MinCost => by_cost,
            Selection::MaxMinAngle => b.final_min_angle.total_cmp(&a.final_min_angle).then(by_cost),
            Selection::MinCrossings => a.final_crossings.cmp(&b.final_crossings).then(by_cost),
        }
    };
    runs.iter()
        .filter(|r| r.is_valid())
        .fold(None, |best: Option<&RunResult>, r| match best {
            Some(b) if compare(r, b) != Ordering::Less => Some(b),
            _ => Some(r),
        })
}
