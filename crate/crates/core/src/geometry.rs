//! Planar primitives on double-precision coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpxError};
use crate::layout::Layout;

/// Orientation values with magnitude at or below this count as collinear.
pub const COLLINEAR_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from(c: [f64; 2]) -> Self {
        Point::new(c[0], c[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub p: Point,
    pub q: Point,
}

impl Segment {
    pub const fn new(p: Point, q: Point) -> Self {
        Segment { p, q }
    }

    pub fn from_coords(p: [f64; 2], q: [f64; 2]) -> Self {
        Segment::new(p.into(), q.into())
    }

    pub fn direction(&self) -> Point {
        self.q.sub(self.p)
    }

    pub fn is_degenerate(&self) -> bool {
        self.p == self.q
    }
}

/// Signed doubled area of triangle (a, b, c); positive when counter-clockwise.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    b.sub(a).cross(c.sub(a))
}

#[inline]
fn sign(v: f64) -> i8 {
    if v > COLLINEAR_EPS {
        1
    } else if v < -COLLINEAR_EPS {
        -1
    } else {
        0
    }
}

/// True iff the segments intersect at a single interior point of both.
/// Shared endpoints, T-junctions and collinear overlap are not crossings.
pub fn segments_cross(a: &Segment, b: &Segment) -> bool {
    let o1 = sign(orient(a.p, a.q, b.p));
    let o2 = sign(orient(a.p, a.q, b.q));
    let o3 = sign(orient(b.p, b.q, a.p));
    let o4 = sign(orient(b.p, b.q, a.q));
    o1 * o2 < 0 && o3 * o4 < 0
}

/// Cosine of the acute angle between the supporting lines.
pub fn crossing_cos(a: &Segment, b: &Segment) -> Result<f64> {
    let (da, db) = (a.direction(), b.direction());
    let (na, nb) = (da.norm(), db.norm());
    if na == 0.0 || nb == 0.0 {
        return Err(SpxError::DegenerateSegment);
    }
    Ok((da.dot(db).abs() / (na * nb)).min(1.0))
}

/// Acute (or right) angle between the two segments' lines, in radians.
pub fn crossing_angle(a: &Segment, b: &Segment) -> Result<f64> {
    crossing_cos(a, b).map(f64::acos)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BoundingBox {
    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
}

/// Axis-aligned extent of all vertex positions. Panics on an empty layout.
pub fn bounding_box(layout: &Layout) -> BoundingBox {
    assert!(layout.n() > 0, "bounding box of an empty layout");
    let first = layout.coords[0];
    layout.coords.iter().fold(
        BoundingBox {
            min_x: first[0],
            min_y: first[1],
            max_x: first[0],
            max_y: first[1],
        },
        |b, c| BoundingBox {
            min_x: b.min_x.min(c[0]),
            min_y: b.min_y.min(c[1]),
            max_x: b.max_x.max(c[0]),
            max_y: b.max_y.max(c[1]),
        },
    )
}
