//! Vertical prisms (convex polygon × Z interval) and their algebra.
//!
//! Every solid in the engine is a yaw-only box, i.e. a special prism, so
//! distance and intersection volume decompose into a 2D polygon problem and
//! a 1D interval problem.

use super::hull::ConvexPolygon2D;
use super::{Point2, Point3, EPS_CROSS};

/// A convex solid of the form `base × [z_min, z_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPrism {
    base: ConvexPolygon2D,
    z_min: f64,
    z_max: f64,
}

impl ConvexPrism {
    pub fn new(base: ConvexPolygon2D, z_min: f64, z_max: f64) -> Self {
        debug_assert!(z_max >= z_min);
        ConvexPrism { base, z_min, z_max }
    }

    pub fn base(&self) -> &ConvexPolygon2D {
        &self.base
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    pub fn volume(&self) -> f64 {
        self.base.area() * (self.z_max - self.z_min)
    }

    /// Volume centroid: area centroid of the base at mid-height.
    pub fn centroid(&self) -> Point3 {
        let c = self.base.centroid();
        Point3::new(c.x, c.y, (self.z_min + self.z_max) / 2.0)
    }

    pub fn contains_point(&self, p: Point3, eps: f64) -> bool {
        p.z >= self.z_min - eps && p.z <= self.z_max + eps && self.base.contains(p.xy(), eps)
    }

    /// Uniform scaling about the volume centroid; `factor > 0`.
    pub fn scaled_about_centroid(&self, factor: f64) -> ConvexPrism {
        debug_assert!(factor > 0.0);
        let c = self.centroid();
        let base = self.base.scaled_about(c.xy(), factor);
        let half = (self.z_max - self.z_min) / 2.0 * factor;
        ConvexPrism::new(base, c.z - half, c.z + half)
    }

    /// Intersection solid of two prisms, `None` when the overlap has no
    /// volume. The result is again a prism: clipped base over the common
    /// Z interval.
    pub fn intersection(&self, other: &ConvexPrism) -> Option<ConvexPrism> {
        let z_min = self.z_min.max(other.z_min);
        let z_max = self.z_max.min(other.z_max);
        if z_max - z_min <= 0.0 {
            return None;
        }
        clip_convex(&self.base, &other.base).map(|poly| ConvexPrism::new(poly, z_min, z_max))
    }

    /// Exact intersection volume of two prisms: clipped base area times the
    /// Z-interval overlap.
    pub fn intersection_volume(&self, other: &ConvexPrism) -> f64 {
        self.intersection(other).map_or(0.0, |p| p.volume())
    }

    /// Minimum Euclidean distance between two prisms. Because both solids are
    /// Cartesian products `base × z-interval`, the XY and Z terms minimize
    /// independently.
    pub fn distance(&self, other: &ConvexPrism) -> f64 {
        let dz = if self.z_max < other.z_min {
            other.z_min - self.z_max
        } else if other.z_max < self.z_min {
            self.z_min - other.z_max
        } else {
            0.0
        };
        let dxy = polygon_distance(&self.base, &other.base);
        (dxy * dxy + dz * dz).sqrt()
    }
}

/// Sutherland-Hodgman clip of one convex polygon by another (both CCW).
/// Returns `None` when the intersection is empty or has negligible area.
pub(crate) fn clip_convex(
    subject: &ConvexPolygon2D,
    clip: &ConvexPolygon2D,
) -> Option<ConvexPolygon2D> {
    let mut current: Vec<Point2> = subject.vertices().to_vec();
    for (a, b) in clip.edges() {
        if current.is_empty() {
            return None;
        }
        let edge = b.sub(a);
        let inside = |p: Point2| edge.cross(p.sub(a)) >= 0.0;
        let mut next: Vec<Point2> = Vec::with_capacity(current.len() + 4);
        for i in 0..current.len() {
            let p = current[i];
            let q = current[(i + 1) % current.len()];
            let p_in = inside(p);
            let q_in = inside(q);
            if p_in {
                next.push(p);
            }
            if p_in != q_in {
                // Edge pq crosses the clipping line; add the intersection.
                let denom = edge.cross(q.sub(p));
                if denom.abs() > 1e-300 {
                    let t = edge.cross(a.sub(p)) / denom;
                    let t = t.clamp(0.0, 1.0);
                    next.push(p.add(q.sub(p).scale(t)));
                }
            }
        }
        current = next;
    }
    // Drop consecutive duplicates produced by vertices lying on clip edges.
    current.dedup_by(|a, b| a.dist(*b) <= EPS_CROSS);
    if current.len() >= 2 && current[0].dist(current[current.len() - 1]) <= EPS_CROSS {
        current.pop();
    }
    if current.len() < 3 {
        return None;
    }
    let poly = ConvexPolygon2D::from_ccw(current);
    if poly.area() <= 0.0 {
        None
    } else {
        Some(poly)
    }
}

/// Minimum distance between two convex polygons: 0 when they overlap (tested
/// with separating axes), else the minimum over all edge pairs.
pub(crate) fn polygon_distance(a: &ConvexPolygon2D, b: &ConvexPolygon2D) -> f64 {
    if !polygons_separated(a, b) {
        return 0.0;
    }
    let mut best = f64::MAX;
    for ea in a.edges() {
        for eb in b.edges() {
            best = best.min(segment_distance(ea.0, ea.1, eb.0, eb.1));
        }
    }
    best
}

/// True iff some edge normal of either polygon strictly separates them.
fn polygons_separated(a: &ConvexPolygon2D, b: &ConvexPolygon2D) -> bool {
    let axes = a
        .edges()
        .chain(b.edges())
        .map(|(p, q)| {
            let e = q.sub(p);
            Point2::new(-e.y, e.x)
        });
    for axis in axes {
        let (a_min, a_max) = project(a, axis);
        let (b_min, b_max) = project(b, axis);
        if a_max < b_min || b_max < a_min {
            return true;
        }
    }
    false
}

fn project(poly: &ConvexPolygon2D, axis: Point2) -> (f64, f64) {
    poly.vertices().iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| {
        let d = p.dot(axis);
        (lo.min(d), hi.max(d))
    })
}

/// Minimum distance between two 2D segments.
fn segment_distance(p1: Point2, q1: Point2, p2: Point2, q2: Point2) -> f64 {
    // Closest points of two segments via the standard clamped quadratic.
    let d1 = q1.sub(p1);
    let d2 = q2.sub(p2);
    let r = p1.sub(p2);
    let a = d1.dot(d1);
    let e = d2.dot(d2);
    let f = d2.dot(r);
    let (s, t);
    if a <= 1e-300 && e <= 1e-300 {
        return p1.dist(p2);
    }
    if a <= 1e-300 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(r);
        if e <= 1e-300 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut s_ = if denom.abs() > 1e-300 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let t_ = (b * s_ + f) / e;
            let t_clamped = t_.clamp(0.0, 1.0);
            if t_ != t_clamped {
                s_ = ((t_clamped * b - c) / a).clamp(0.0, 1.0);
            }
            s = s_;
            t = t_clamped;
        }
    }
    let c1 = p1.add(d1.scale(s));
    let c2 = p2.add(d2.scale(t));
    c1.dist(c2)
}

#[cfg(test)]
mod tests {
    use super::super::hull::convex_hull_2d;
    use super::*;

    fn square(cx: f64, cy: f64, half: f64) -> ConvexPolygon2D {
        convex_hull_2d(&[
            Point2::new(cx - half, cy - half),
            Point2::new(cx + half, cy - half),
            Point2::new(cx + half, cy + half),
            Point2::new(cx - half, cy + half),
        ])
        .unwrap()
    }

    #[test]
    fn clip_of_offset_squares() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(1.0, 1.0, 1.0);
        let clipped = clip_convex(&a, &b).unwrap();
        assert!((clipped.area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clip_with_self_preserves_area() {
        let a = square(0.3, -0.2, 0.7);
        let clipped = clip_convex(&a, &a).unwrap();
        assert!((clipped.area() - a.area()).abs() <= 1e-12);
    }

    #[test]
    fn clip_of_disjoint_squares_is_empty() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(5.0, 0.0, 1.0);
        assert!(clip_convex(&a, &b).is_none());
    }

    #[test]
    fn polygon_distance_of_separated_squares() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(4.0, 0.0, 1.0);
        assert!((polygon_distance(&a, &b) - 2.0).abs() < 1e-12);
        assert_eq!(polygon_distance(&a, &a), 0.0);
    }

    #[test]
    fn polygon_distance_corner_to_corner() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(3.0, 3.0, 1.0);
        // Nearest corners (1, 1) and (2, 2).
        let expect = std::f64::consts::SQRT_2;
        assert!((polygon_distance(&a, &b) - expect).abs() < 1e-12);
    }

    #[test]
    fn touching_squares_have_distance_zero() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(2.0, 0.0, 1.0);
        assert_eq!(polygon_distance(&a, &b), 0.0);
    }

    #[test]
    fn prism_volume_and_scaling() {
        let p = ConvexPrism::new(square(1.0, 2.0, 0.5), 0.0, 2.0);
        assert!((p.volume() - 2.0).abs() < 1e-12);
        let scaled = p.scaled_about_centroid(2.0);
        assert!((scaled.volume() - 16.0).abs() < 1e-12);
        let c = p.centroid();
        let cs = scaled.centroid();
        assert!(c.dist(cs) < 1e-12, "scaling must fix the centroid");
    }

    #[test]
    fn prism_distance_decomposes_xy_and_z() {
        let a = ConvexPrism::new(square(0.0, 0.0, 1.0), 0.0, 1.0);
        let b = ConvexPrism::new(square(5.0, 0.0, 1.0), 5.0, 6.0);
        let expect = (3.0f64 * 3.0 + 4.0 * 4.0).sqrt();
        assert!((a.distance(&b) - expect).abs() < 1e-12);
    }
}
