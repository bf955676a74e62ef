//! Stress, its analytic gradient, and stress majorization.
//!
//! Stress is the weighted-residual form
//! `sum_{i<j} w_ij (|C_i - C_j| - d_ij)^2` with `w_ij = d_ij^-2`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;

use crate::error::{Result, SpxError};
use crate::graph::{DistanceMatrix, Graph};
use crate::layout::Layout;
use crate::rng::{derive_seed, rng_from_seed};

pub type Gradient = Vec<[f64; 2]>;

pub const JITTER_MAGNITUDE: f64 = 1e-9;

pub fn stress_value(layout: &Layout, dm: &DistanceMatrix) -> f64 {
    let n = layout.n();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let r = layout.dist(i, j) - dm.d(i, j);
            total += dm.w(i, j) * r * r;
        }
    }
    total
}

/// Analytic gradient of [`stress_value`]. Undefined where two vertices
/// coincide; call [`separate_coincident`] first.
pub fn stress_gradient(layout: &Layout, dm: &DistanceMatrix) -> Result<Gradient> {
    let n = layout.n();
    let mut grad = vec![[0.0; 2]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (ci, cj) = (layout.coords[i], layout.coords[j]);
            let dx = ci[0] - cj[0];
            let dy = ci[1] - cj[1];
            let dist = dx.hypot(dy);
            if dist == 0.0 {
                return Err(SpxError::CoincidentVertices(i, j));
            }
            let f = 2.0 * dm.w(i, j) * (dist - dm.d(i, j)) / dist;
            grad[i][0] += f * dx;
            grad[i][1] += f * dy;
            grad[j][0] -= f * dx;
            grad[j][1] -= f * dy;
        }
    }
    Ok(grad)
}

/// Nudges the higher-indexed vertex of every coincident pair by a seeded
/// offset of length [`JITTER_MAGNITUDE`] (relative to the coordinate's
/// magnitude once that exceeds 1). Returns the number of nudges.
pub fn separate_coincident(layout: &mut Layout, seed: u64) -> usize {
    let n = layout.n();
    let mut moved = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if layout.coords[i] == layout.coords[j] {
                let mut rng = rng_from_seed(derive_seed(seed, &[i as u64, j as u64, moved as u64]));
                let angle = rng.random_range(0.0..std::f64::consts::TAU);
                // far from the origin 1e-9 can fall below one ulp
                let c = layout.coords[j];
                let mag = JITTER_MAGNITUDE * c[0].abs().max(c[1].abs()).max(1.0);
                layout.coords[j][0] += mag * angle.cos();
                layout.coords[j][1] += mag * angle.sin();
                moved += 1;
            }
        }
    }
    moved
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorizeOptions {
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for MajorizeOptions {
    fn default() -> Self {
        MajorizeOptions {
            max_iters: 300,
            tol: 1e-6,
        }
    }
}

/// Stress majorization (SMACOF with weights). Returns the final layout.
pub fn stress_majorize(
    g: &Graph,
    dm: &DistanceMatrix,
    init: &Layout,
    opts: MajorizeOptions,
) -> Result<Layout> {
    stress_majorize_traced(g, dm, init, opts).map(|(layout, _)| layout)
}

/// Like [`stress_majorize`] but also returns the stress after every
/// iteration, starting with the stress of the centered initial layout.
pub fn stress_majorize_traced(
    g: &Graph,
    dm: &DistanceMatrix,
    init: &Layout,
    opts: MajorizeOptions,
) -> Result<(Layout, Vec<f64>)> {
    let n = g.n();
    if init.n() != n || dm.n() != n {
        return Err(SpxError::InvalidArgument(format!(
            "layout has {} rows, distance matrix {}, graph {n}",
            init.n(),
            dm.n()
        )));
    }
    if !init.is_finite() {
        return Err(SpxError::InvalidArgument("initial layout is not finite".into()));
    }
    let mut z = init.clone();
    z.center();
    let mut history = vec![stress_value(&z, dm)];
    if n == 1 {
        return Ok((z, history));
    }

    let chol = shifted_laplacian(dm)?;

    let mut rhs_x = DVector::zeros(n);
    let mut rhs_y = DVector::zeros(n);
    for _ in 0..opts.max_iters {
        rhs_x.fill(0.0);
        rhs_y.fill(0.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let dist = z.dist(i, j);
                if dist == 0.0 {
                    continue;
                }
                let f = dm.w(i, j) * dm.d(i, j) / dist;
                let dx = f * (z.coords[i][0] - z.coords[j][0]);
                let dy = f * (z.coords[i][1] - z.coords[j][1]);
                rhs_x[i] += dx;
                rhs_y[i] += dy;
                rhs_x[j] -= dx;
                rhs_y[j] -= dy;
            }
        }
        let xs = chol.solve(&rhs_x);
        let ys = chol.solve(&rhs_y);
        let guttman = Layout {
            coords: (0..n).map(|i| [xs[i], ys[i]]).collect(),
        };
        if !guttman.is_finite() {
            return Err(SpxError::SingularSystem);
        }
        let (next, cur) = extrapolate(&z, guttman, dm);
        z = next;
        z.center();
        let prev = *history.last().unwrap();
        history.push(cur);
        if cur == 0.0 || (prev - cur) / prev < opts.tol {
            break;
        }
    }
    Ok((z, history))
}

/// Step-doubling search along the majorization step `guttman - from`.
/// A candidate is kept only if it lowers stress below the plain update, so
/// the majorization descent guarantee is preserved. This matters on flat
/// (quartic) directions such as straightening a bent path, where the plain
/// update converges sublinearly.
// Weighted Laplacian plus the rank-one term ones*ones'/n. The system matrix
// is then nonsingular, and since every right-hand side here sums to zero the
// solution is the centered solution of the plain Laplacian system.
fn shifted_laplacian(dm: &DistanceMatrix) -> Result<Cholesky<f64, Dyn>> {
    let n = dm.n();
    let mut lap = DMatrix::from_element(n, n, 1.0 / n as f64);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let w = dm.w(i, j);
                lap[(i, j)] -= w;
                lap[(i, i)] += w;
            }
        }
    }
    lap.cholesky().ok_or(SpxError::SingularSystem)
}

/// Majorization over the `x` column only, with every `y` held fixed.
/// Each iteration minimizes the same quadratic majorizer as full SMACOF
/// restricted to `x`, so stress never increases.
pub fn stress_majorize_x(dm: &DistanceMatrix, init: &Layout, opts: MajorizeOptions) -> Result<Layout> {
    let n = init.n();
    if dm.n() != n {
        return Err(SpxError::InvalidArgument(format!(
            "layout has {n} rows, distance matrix {}",
            dm.n()
        )));
    }
    let mut z = init.clone();
    if n < 2 {
        return Ok(z);
    }
    let chol = shifted_laplacian(dm)?;
    let mut prev = stress_value(&z, dm);
    let mut rhs = DVector::zeros(n);
    for _ in 0..opts.max_iters {
        rhs.fill(0.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let dist = z.dist(i, j);
                if dist == 0.0 {
                    continue;
                }
                let dx = dm.w(i, j) * dm.d(i, j) / dist * (z.coords[i][0] - z.coords[j][0]);
                rhs[i] += dx;
                rhs[j] -= dx;
            }
        }
        let xs = chol.solve(&rhs);
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(SpxError::SingularSystem);
        }
        for (c, x) in z.coords.iter_mut().zip(xs.iter()) {
            c[0] = *x;
        }
        let cur = stress_value(&z, dm);
        if cur == 0.0 || (prev - cur) / prev < opts.tol {
            break;
        }
        prev = cur;
    }
    Ok(z)
}

fn extrapolate(from: &Layout, guttman: Layout, dm: &DistanceMatrix) -> (Layout, f64) {
    let mut best_stress = stress_value(&guttman, dm);
    let mut best = guttman;
    let step: Vec<[f64; 2]> = best
        .coords
        .iter()
        .zip(&from.coords)
        .map(|(g, f)| [g[0] - f[0], g[1] - f[1]])
        .collect();
    let mut mult = 2.0;
    while mult <= MAX_EXTRAPOLATION {
        let cand = Layout {
            coords: from
                .coords
                .iter()
                .zip(&step)
                .map(|(f, s)| [f[0] + mult * s[0], f[1] + mult * s[1]])
                .collect(),
        };
        let s = stress_value(&cand, dm);
        if !(s < best_stress) {
            break;
        }
        best = cand;
        best_stress = s;
        mult *= 2.0;
    }
    (best, best_stress)
}

const MAX_EXTRAPOLATION: f64 = 1024.0;
