//! Planar helpers shared by the region and partial-area code: implicit
//! lines, half-planes, convex clipping and the shoelace formula.

use alloc::vec::Vec;

use crate::roc::RocPoint;

/// Absolute tolerance used when comparing points and rates.
pub const RATE_TOL: f64 = 1e-12;

/// Line `a*x + b*y = c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Line {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// `a*x + b*y - c`; positive on one side of the line, negative on the other.
    pub fn eval(&self, p: RocPoint) -> f64 {
        self.a * p.fpr + self.b * p.tpr - self.c
    }

    /// Same as [`Line::eval`] but scaled so that the larger of `|a|`, `|b|` is 1.
    pub fn eval_scaled(&self, p: RocPoint) -> f64 {
        let scale = self.a.abs().max(self.b.abs());
        if scale == 0.0 {
            return -self.c;
        }
        self.eval(p) / scale
    }

    /// Slope `dy/dx`, infinite for vertical lines.
    pub fn slope(&self) -> f64 {
        if self.b == 0.0 {
            f64::INFINITY
        } else {
            -self.a / self.b
        }
    }

    /// Intersection by Cramer's rule; `None` for (near-)parallel lines.
    pub fn intersect(&self, other: &Line) -> Option<RocPoint> {
        let det = self.a * other.b - self.b * other.a;
        let scale = (self.a.abs() + self.b.abs()) * (other.a.abs() + other.b.abs());
        if scale == 0.0 || det.abs() <= 1e-15 * scale {
            return None;
        }
        Some(RocPoint {
            fpr: (self.c * other.b - self.b * other.c) / det,
            tpr: (self.a * other.c - self.c * other.a) / det,
        })
    }
}

/// Closed half-plane `a*x + b*y <= c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane(pub Line);

impl HalfPlane {
    pub fn contains(&self, p: RocPoint) -> bool {
        self.0.eval_scaled(p) <= RATE_TOL
    }

    /// The complementary closed half-plane `a*x + b*y >= c`.
    pub fn flipped(&self) -> Self {
        HalfPlane(Line::new(-self.0.a, -self.0.b, -self.0.c))
    }
}

pub fn unit_square() -> Vec<RocPoint> {
    alloc::vec![
        RocPoint { fpr: 0.0, tpr: 0.0 },
        RocPoint { fpr: 1.0, tpr: 0.0 },
        RocPoint { fpr: 1.0, tpr: 1.0 },
        RocPoint { fpr: 0.0, tpr: 1.0 },
    ]
}

/// Signed shoelace area; positive for counterclockwise vertex order.
pub fn signed_area(vertices: &[RocPoint]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..n {
        let p = vertices[i];
        let q = vertices[(i + 1) % n];
        twice += p.fpr * q.tpr - q.fpr * p.tpr;
    }
    twice / 2.0
}

pub fn polygon_area(vertices: &[RocPoint]) -> f64 {
    signed_area(vertices).abs()
}

/// One Sutherland-Hodgman step: the part of a convex polygon inside `plane`.
/// Vertex order is preserved, so a counterclockwise input stays counterclockwise.
pub fn clip(polygon: &[RocPoint], plane: &HalfPlane) -> Vec<RocPoint> {
    let n = polygon.len();
    let mut out = Vec::with_capacity(n + 1);
    if n == 0 {
        return out;
    }
    for i in 0..n {
        let cur = polygon[i];
        let next = polygon[(i + 1) % n];
        let dc = plane.0.eval_scaled(cur);
        let dn = plane.0.eval_scaled(next);
        let cur_in = dc <= RATE_TOL;
        let next_in = dn <= RATE_TOL;
        if cur_in {
            out.push(cur);
        }
        if cur_in != next_in && dc != dn {
            // strictly crossing edge
            if (dc < -RATE_TOL && dn > RATE_TOL) || (dc > RATE_TOL && dn < -RATE_TOL) {
                let s = dc / (dc - dn);
                out.push(RocPoint {
                    fpr: cur.fpr + s * (next.fpr - cur.fpr),
                    tpr: cur.tpr + s * (next.tpr - cur.tpr),
                });
            }
        }
    }
    dedup_ring(&mut out);
    out
}

/// Removes consecutive (cyclically) coincident vertices.
pub fn dedup_ring(ring: &mut Vec<RocPoint>) {
    ring.dedup_by(|b, a| close(*a, *b));
    while ring.len() > 1 && close(ring[0], ring[ring.len() - 1]) {
        ring.pop();
    }
}

pub fn close(a: RocPoint, b: RocPoint) -> bool {
    (a.fpr - b.fpr).abs() <= RATE_TOL && (a.tpr - b.tpr).abs() <= RATE_TOL
}

/// Rotates a ring so that it starts at the origin when the origin is a vertex.
pub fn start_at_origin(ring: &mut [RocPoint]) {
    if let Some(i) = ring.iter().position(|p| close(*p, RocPoint::ORIGIN)) {
        ring.rotate_left(i);
    }
}
