//! First-order update rules.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpxError};
use crate::layout::Layout;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GdKind {
    Vanilla,
    Momentum,
    Nesterov,
    Adagrad,
    RmsProp,
    Adam,
}

impl GdKind {
    pub const ALL: [GdKind; 6] = [
        GdKind::Vanilla,
        GdKind::Momentum,
        GdKind::Nesterov,
        GdKind::Adagrad,
        GdKind::RmsProp,
        GdKind::Adam,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GdKind::Vanilla => "vanilla",
            GdKind::Momentum => "momentum",
            GdKind::Nesterov => "nesterov",
            GdKind::Adagrad => "adagrad",
            GdKind::RmsProp => "rmsprop",
            GdKind::Adam => "adam",
        }
    }

    pub fn parse(s: &str) -> Option<GdKind> {
        GdKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GdVariant {
    Vanilla { lr: f64 },
    Momentum { lr: f64, beta: f64 },
    Nesterov { lr: f64, beta: f64 },
    Adagrad { lr: f64, eps: f64 },
    RmsProp { lr: f64, decay: f64, eps: f64 },
    Adam { lr: f64, beta1: f64, beta2: f64, eps: f64 },
}

impl GdVariant {
    /// Default hyperparameters. The non-adaptive rules scale their step with
    /// the graph diameter so steps stay small relative to the layout.
    pub fn with_defaults(kind: GdKind, diameter: f64) -> Self {
        let plain = 0.01 * diameter.max(1.0);
        match kind {
            GdKind::Vanilla => GdVariant::Vanilla { lr: plain },
            GdKind::Momentum => GdVariant::Momentum { lr: plain, beta: 0.9 },
            GdKind::Nesterov => GdVariant::Nesterov { lr: plain, beta: 0.9 },
            GdKind::Adagrad => GdVariant::Adagrad { lr: 0.05, eps: 1e-8 },
            GdKind::RmsProp => GdVariant::RmsProp {
                lr: 0.05,
                decay: 0.9,
                eps: 1e-8,
            },
            GdKind::Adam => GdVariant::Adam {
                lr: 0.05,
                beta1: 0.9,
                beta2: 0.999,
                eps: 1e-8,
            },
        }
    }

    pub fn kind(&self) -> GdKind {
        match self {
            GdVariant::Vanilla { .. } => GdKind::Vanilla,
            GdVariant::Momentum { .. } => GdKind::Momentum,
            GdVariant::Nesterov { .. } => GdKind::Nesterov,
            GdVariant::Adagrad { .. } => GdKind::Adagrad,
            GdVariant::RmsProp { .. } => GdKind::RmsProp,
            GdVariant::Adam { .. } => GdKind::Adam,
        }
    }

    pub fn learning_rate(&self) -> f64 {
        match *self {
            GdVariant::Vanilla { lr }
            | GdVariant::Momentum { lr, .. }
            | GdVariant::Nesterov { lr, .. }
            | GdVariant::Adagrad { lr, .. }
            | GdVariant::RmsProp { lr, .. }
            | GdVariant::Adam { lr, .. } => lr,
        }
    }

    /// Same variant and hyperparameters with the learning rate replaced.
    pub fn with_learning_rate(self, lr: f64) -> Self {
        match self {
            GdVariant::Vanilla { .. } => GdVariant::Vanilla { lr },
            GdVariant::Momentum { beta, .. } => GdVariant::Momentum { lr, beta },
            GdVariant::Nesterov { beta, .. } => GdVariant::Nesterov { lr, beta },
            GdVariant::Adagrad { eps, .. } => GdVariant::Adagrad { lr, eps },
            GdVariant::RmsProp { decay, eps, .. } => GdVariant::RmsProp { lr, decay, eps },
            GdVariant::Adam { beta1, beta2, eps, .. } => GdVariant::Adam { lr, beta1, beta2, eps },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lr = self.learning_rate();
        if !(lr.is_finite() && lr > 0.0) {
            return Err(SpxError::InvalidArgument(format!("learning rate must be > 0, got {lr}")));
        }
        let unit = |name: &str, v: f64| {
            if (0.0..1.0).contains(&v) {
                Ok(())
            } else {
                Err(SpxError::InvalidArgument(format!("{name} must be in [0, 1), got {v}")))
            }
        };
        match *self {
            GdVariant::Vanilla { .. } | GdVariant::Adagrad { .. } => Ok(()),
            GdVariant::Momentum { beta, .. } | GdVariant::Nesterov { beta, .. } => unit("beta", beta),
            GdVariant::RmsProp { decay, .. } => unit("decay", decay),
            GdVariant::Adam { beta1, beta2, .. } => {
                unit("beta1", beta1)?;
                unit("beta2", beta2)
            }
        }
    }
}

/// Optimizer accumulators, each shaped like the layout.
#[derive(Debug, Clone, PartialEq)]
pub struct GdState {
    /// Momentum velocity, or Adam's first moment.
    pub velocity: Vec<[f64; 2]>,
    /// Squared-gradient accumulator (Adagrad sum, RMSprop/Adam average).
    pub sq_accum: Vec<[f64; 2]>,
    pub step: u64,
}

impl GdState {
    pub fn new(n: usize) -> Self {
        GdState {
            velocity: vec![[0.0; 2]; n],
            sq_accum: vec![[0.0; 2]; n],
            step: 0,
        }
    }
}

/// Apply one update in place.
pub fn gd_step(
    layout: &mut Layout,
    grad: &[[f64; 2]],
    state: &mut GdState,
    variant: &GdVariant,
) -> Result<()> {
    debug_assert_eq!(grad.len(), layout.n());
    state.step += 1;
    let t = state.step as i32;
    for i in 0..layout.n() {
        for d in 0..2 {
            let g = grad[i][d];
            let v = &mut state.velocity[i][d];
            let s = &mut state.sq_accum[i][d];
            let delta = match *variant {
                GdVariant::Vanilla { lr } => lr * g,
                GdVariant::Momentum { lr, beta } => {
                    *v = beta * *v + g;
                    lr * *v
                }
                GdVariant::Nesterov { lr, beta } => {
                    // look-ahead form: step along g + beta * v_new
                    *v = beta * *v + g;
                    lr * (g + beta * *v)
                }
                GdVariant::Adagrad { lr, eps } => {
                    *s += g * g;
                    lr * g / (s.sqrt() + eps)
                }
                GdVariant::RmsProp { lr, decay, eps } => {
                    *s = decay * *s + (1.0 - decay) * g * g;
                    lr * g / (s.sqrt() + eps)
                }
                GdVariant::Adam {
                    lr,
                    beta1,
                    beta2,
                    eps,
                } => {
                    *v = beta1 * *v + (1.0 - beta1) * g;
                    *s = beta2 * *s + (1.0 - beta2) * g * g;
                    let m_hat = *v / (1.0 - beta1.powi(t));
                    let v_hat = *s / (1.0 - beta2.powi(t));
                    lr * m_hat / (v_hat.sqrt() + eps)
                }
            };
            layout.coords[i][d] -= delta;
        }
    }
    if layout.is_finite() {
        Ok(())
    } else {
        Err(SpxError::NonFiniteUpdate(state.step as usize))
    }
}
