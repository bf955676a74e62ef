use serde::{Deserialize, Serialize};

use crate::error::{Result, SpxError};

/// Per-vertex 2-D coordinates; row `i` is vertex `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub coords: Vec<[f64; 2]>,
}

impl Layout {
    pub fn new(coords: Vec<[f64; 2]>) -> Result<Self> {
        if let Some(i) = coords.iter().position(|c| !c[0].is_finite() || !c[1].is_finite()) {
            return Err(SpxError::InvalidArgument(format!("vertex {i} has a non-finite coordinate")));
        }
        Ok(Layout { coords })
    }

    pub fn zeros(n: usize) -> Self {
        Layout {
            coords: vec![[0.0; 2]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c[0].is_finite() && c[1].is_finite())
    }

    pub fn centroid(&self) -> [f64; 2] {
        let n = self.n().max(1) as f64;
        let (sx, sy) = self
            .coords
            .iter()
            .fold((0.0, 0.0), |(sx, sy), c| (sx + c[0], sy + c[1]));
        [sx / n, sy / n]
    }

    pub fn center(&mut self) {
        let [cx, cy] = self.centroid();
        for c in &mut self.coords {
            c[0] -= cx;
            c[1] -= cy;
        }
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.coords[i], self.coords[j]);
        (a[0] - b[0]).hypot(a[1] - b[1])
    }
}
