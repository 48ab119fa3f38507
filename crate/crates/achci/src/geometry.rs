//! Planar primitives: orientation tests, segment intersection, convex hulls,
//! and the separator generator used to turn a Euclidean point cloud into a
//! non-Euclidean instance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tsplib::Instance;

/// Relative epsilon for orientation sign tests. The cross product magnitude is
/// compared against this fraction of the magnitudes of its two terms.
pub const ORIENT_EPS: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("degenerate segment: endpoints coincide at ({0}, {1})")]
    DegenerateSegment(f64, f64),
    #[error("all {0} points coincide; separator direction is undefined")]
    CoincidentPoints(usize),
    #[error("separator count must be representable: {0}")]
    BadSeparatorCount(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }

    /// Rotate about `center` by `angle` radians, counterclockwise.
    pub fn rotated_about(self, center: Point, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        let dx = self.x - center.x;
        let dy = self.y - center.y;
        Point {
            x: center.x + c * dx - s * dy,
            y: center.y + s * dx + c * dy,
        }
    }
}

/// Sign of the turn a→b→c: +1 left (counterclockwise), -1 right, 0 collinear
/// within [`ORIENT_EPS`] relative tolerance.
pub fn orient(a: Point, b: Point, c: Point) -> i8 {
    let t1 = (b.x - a.x) * (c.y - a.y);
    let t2 = (b.y - a.y) * (c.x - a.x);
    let det = t1 - t2;
    let scale = t1.abs().max(t2.abs());
    if det.abs() <= ORIENT_EPS * scale {
        0
    } else if det > 0.0 {
        1
    } else {
        -1
    }
}

/// An impassable open line segment (its two endpoints are passable).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeometryError> {
        if !(a.x.is_finite() && a.y.is_finite() && b.x.is_finite() && b.y.is_finite())
            || (a.x == b.x && a.y == b.y)
        {
            return Err(GeometryError::DegenerateSegment(a.x, a.y));
        }
        Ok(Segment { a, b })
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    fn bbox_disjoint(&self, other: &Segment) -> bool {
        let (ax0, ax1) = minmax(self.a.x, self.b.x);
        let (ay0, ay1) = minmax(self.a.y, self.b.y);
        let (bx0, bx1) = minmax(other.a.x, other.b.x);
        let (by0, by1) = minmax(other.a.y, other.b.y);
        ax1 < bx0 || bx1 < ax0 || ay1 < by0 || by1 < ay0
    }
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Scalar parameter of `p` along `a`→`b` (0 at `a`, 1 at `b`); caller ensures
/// near-collinearity.
fn param_along(p: Point, a: Point, b: Point) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    ((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy)
}

/// True when `p` lies on the open interior of segment `s` (collinear and
/// strictly between the endpoints).
pub fn on_open_segment(p: Point, s: &Segment) -> bool {
    if orient(s.a, s.b, p) != 0 {
        return false;
    }
    let u = param_along(p, s.a, s.b);
    u > ORIENT_EPS && u < 1.0 - ORIENT_EPS
}

/// True when the closed segment `path` meets the open interior of `sep`.
///
/// Grazing rules: touching a separator endpoint alone never blocks; a
/// collinear overlap of positive length always blocks.
fn crosses_interior(path: &Segment, sep: &Segment) -> bool {
    if path.bbox_disjoint(sep) {
        return false;
    }
    let o1 = orient(sep.a, sep.b, path.a);
    let o2 = orient(sep.a, sep.b, path.b);
    let o3 = orient(path.a, path.b, sep.a);
    let o4 = orient(path.a, path.b, sep.b);

    // Proper transversal crossing: intersection is interior to both segments.
    if o1 != 0 && o2 != 0 && o1 != o2 && o3 != 0 && o4 != 0 && o3 != o4 {
        return true;
    }

    // Collinear: blocked iff the 1D overlap has positive length.
    if o1 == 0 && o2 == 0 {
        let u1 = param_along(path.a, sep.a, sep.b);
        let u2 = param_along(path.b, sep.a, sep.b);
        let (lo, hi) = minmax(u1, u2);
        return hi.min(1.0) - lo.max(0.0) > ORIENT_EPS;
    }

    // A path endpoint resting on the separator interior counts as contact
    // with the wall.
    (o1 == 0 && on_open_segment(path.a, sep)) || (o2 == 0 && on_open_segment(path.b, sep))
}

/// The family of rotated impassable separators for one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatorSet {
    pub k: usize,
    pub segments: Vec<Segment>,
    pub source: SeparatorSource,
}

/// Provenance of a separator set: which instance it modifies and with how
/// many separators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatorSource {
    pub instance: String,
    pub k: usize,
}

impl SeparatorSet {
    pub fn empty(instance: &str) -> Self {
        SeparatorSet {
            k: 0,
            segments: Vec::new(),
            source: SeparatorSource {
                instance: instance.to_string(),
                k: 0,
            },
        }
    }
}

/// True iff `path` is blocked by any separator in the set. A zero-length
/// path cannot cross anything.
pub fn segments_block(path: &Segment, separators: &SeparatorSet) -> bool {
    if path.a == path.b {
        return false;
    }
    separators.segments.iter().any(|s| crosses_interior(path, s))
}

/// Blocking test for a raw point pair, tolerating coincident endpoints.
pub fn blocked_between(a: Point, b: Point, separators: &SeparatorSet) -> bool {
    if a == b {
        return false;
    }
    let path = Segment { a, b };
    segments_block(&path, separators)
}

/// Arithmetic mean of the instance coordinates.
pub fn centroid(inst: &Instance) -> Point {
    let n = inst.n() as f64;
    let (sx, sy) = inst
        .coords
        .iter()
        .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Point::new(sx / n, sy / n)
}

/// Build `k` equiangular separators: the base segment spans from 5% to 95%
/// of the centroid→farthest-point vector, and copies are rotated about the
/// centroid by multiples of 2π/k. Farthest-point ties resolve to the lowest
/// node index.
pub fn generate_separators(inst: &Instance, k: usize) -> Result<SeparatorSet, GeometryError> {
    if k == 0 {
        return Ok(SeparatorSet::empty(&inst.name));
    }
    let c = centroid(inst);
    let mut far_idx = 0usize;
    let mut far_d = -1.0f64;
    for (i, p) in inst.coords.iter().enumerate() {
        let d = p.dist(c);
        if d > far_d {
            far_d = d;
            far_idx = i;
        }
    }
    let f = inst.coords[far_idx];
    let scale = inst
        .coords
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(1.0f64, f64::max);
    if far_d <= 1e-12 * scale {
        return Err(GeometryError::CoincidentPoints(inst.n()));
    }

    let base_a = Point::new(c.x + 0.05 * (f.x - c.x), c.y + 0.05 * (f.y - c.y));
    let base_b = Point::new(c.x + 0.95 * (f.x - c.x), c.y + 0.95 * (f.y - c.y));
    let mut segments = Vec::with_capacity(k);
    for m in 0..k {
        let angle = 2.0 * std::f64::consts::PI * m as f64 / k as f64;
        segments.push(Segment {
            a: base_a.rotated_about(c, angle),
            b: base_b.rotated_about(c, angle),
        });
    }
    Ok(SeparatorSet {
        k,
        segments,
        source: SeparatorSource {
            instance: inst.name.clone(),
            k,
        },
    })
}

/// Indices of the convex hull vertices in counterclockwise order, starting
/// from the lexicographically smallest point. Points interior to hull edges
/// are excluded. All-collinear input yields the two extremes; a single point
/// yields itself.
pub fn convex_hull(points: &[Point]) -> Vec<usize> {
    assert!(!points.is_empty(), "convex hull of an empty set");
    if points.len() == 1 {
        return vec![0];
    }
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| {
        points[i]
            .x
            .total_cmp(&points[j].x)
            .then(points[i].y.total_cmp(&points[j].y))
            .then(i.cmp(&j))
    });

    // All points coincident: hull is the single lowest-index point.
    let first = points[idx[0]];
    if idx.iter().all(|&i| points[i] == first) {
        return vec![*idx.iter().min().unwrap()];
    }

    let mut hull: Vec<usize> = Vec::with_capacity(points.len() + 1);
    // Lower hull, then upper hull over the reversed order.
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && orient(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i])
                    <= 0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    if hull.len() < 2 {
        // Collinear input collapses both passes; recover the two extremes.
        return vec![idx[0], *idx.last().unwrap()];
    }
    hull
}
