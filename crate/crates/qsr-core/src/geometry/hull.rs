//! 2D convex polygons, convex hulls, and minimum-area oriented rectangles.

use super::{GeometryError, Point2, EPS_CROSS};
use std::f64::consts::FRAC_PI_2;

/// A convex polygon with counterclockwise vertices.
///
/// Invariants: at least 3 vertices, CCW order, convex up to the collinearity
/// tolerance, no repeated vertices. Polygons coming out of clipping may carry
/// nearly-collinear vertices; hull output is vertex-minimal.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon2D {
    vertices: Vec<Point2>,
}

impl ConvexPolygon2D {
    /// Build from CCW vertices. Used internally by hull and clip code, which
    /// guarantee convexity; debug builds recheck.
    pub(crate) fn from_ccw(vertices: Vec<Point2>) -> Self {
        debug_assert!(vertices.len() >= 3);
        let poly = ConvexPolygon2D { vertices };
        debug_assert!(poly.is_convex_ccw(), "polygon not convex CCW: {poly:?}");
        poly
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    fn is_convex_ccw(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            b.sub(a).cross(c.sub(b)) >= -1e-9
        })
    }

    /// Signed area is positive for CCW polygons; returns the absolute value.
    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        let mut acc = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            acc += a.cross(b);
        }
        (acc / 2.0).max(0.0)
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len();
        let mut acc = 0.0;
        let mut cx = 0.0;
        let mut cy = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let w = a.cross(b);
            acc += w;
            cx += (a.x + b.x) * w;
            cy += (a.y + b.y) * w;
        }
        if acc.abs() < 1e-300 {
            // Degenerate area: fall back to the vertex mean.
            let m = self.vertices.len() as f64;
            let sx: f64 = self.vertices.iter().map(|p| p.x).sum();
            let sy: f64 = self.vertices.iter().map(|p| p.y).sum();
            return Point2::new(sx / m, sy / m);
        }
        Point2::new(cx / (3.0 * acc), cy / (3.0 * acc))
    }

    /// Point membership with a boundary tolerance band: `eps > 0` accepts
    /// points slightly outside, `eps = 0` accepts the closed polygon.
    pub fn contains(&self, p: Point2, eps: f64) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let edge = b.sub(a);
            // Scale the band by edge length so eps stays in meters.
            edge.cross(p.sub(a)) >= -eps * edge.norm() - EPS_CROSS
        })
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Scale every vertex about `center` by `factor` (> 0).
    pub fn scaled_about(&self, center: Point2, factor: f64) -> ConvexPolygon2D {
        let vertices = self
            .vertices
            .iter()
            .map(|p| center.add(p.sub(center).scale(factor)))
            .collect();
        ConvexPolygon2D { vertices }
    }
}

/// Convex hull of a 2D point set (Andrew's monotone chain), CCW, with
/// collinear midpoints dropped so the vertex set is minimal.
///
/// Errors with [`GeometryError::DegenerateInput`] when fewer than 3
/// non-collinear points remain; callers fall back to segment or point
/// inflation.
pub fn convex_hull_2d(points: &[Point2]) -> Result<ConvexPolygon2D, GeometryError> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).expect("finite coords"));
    pts.dedup_by(|a, b| a.dist(*b) <= EPS_CROSS);
    if pts.len() < 3 {
        return Err(GeometryError::DegenerateInput);
    }

    fn chain(points: impl Iterator<Item = Point2>) -> Vec<Point2> {
        let mut out: Vec<Point2> = Vec::new();
        for p in points {
            while out.len() >= 2 {
                let a = out[out.len() - 2];
                let b = out[out.len() - 1];
                // Keep only strict left turns; collinear points are dropped.
                if b.sub(a).cross(p.sub(a)) <= EPS_CROSS {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        out
    }

    let mut lower = chain(pts.iter().copied());
    let mut upper = chain(pts.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.append(&mut upper);
    if lower.len() < 3 {
        return Err(GeometryError::DegenerateInput);
    }
    Ok(ConvexPolygon2D::from_ccw(lower))
}

/// A rectangle with arbitrary yaw: the 2D analogue of an oriented box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedRect {
    pub center: Point2,
    /// Half-extents along the rectangle's local X and Y axes.
    pub half_extents: (f64, f64),
    /// Yaw in `[0, π/2)`; rectangles are symmetric under quarter turns with
    /// swapped extents, so this canonical range is unambiguous.
    pub yaw: f64,
}

impl OrientedRect {
    /// Canonicalize an equivalent (center, half-extents, yaw) description so
    /// yaw lands in `[0, π/2)`, swapping extents per quarter turn.
    pub(crate) fn canonical(center: Point2, half_extents: (f64, f64), yaw: f64) -> OrientedRect {
        let mut yaw = yaw.rem_euclid(std::f64::consts::PI);
        let mut half_extents = half_extents;
        if yaw >= FRAC_PI_2 {
            yaw -= FRAC_PI_2;
            half_extents = (half_extents.1, half_extents.0);
        }
        OrientedRect {
            center,
            half_extents,
            yaw,
        }
    }
}

/// Minimum-area oriented rectangle enclosing a convex polygon.
///
/// Rotating-calipers guarantee: some optimal rectangle shares an edge
/// direction with the hull, so it suffices to scan hull edge directions.
/// Ties in area are broken toward the smallest canonical yaw.
pub fn min_oriented_rect(poly: &ConvexPolygon2D) -> OrientedRect {
    let verts = poly.vertices();
    let mut best: Option<(f64, OrientedRect)> = None;
    for (a, b) in poly.edges() {
        let dir = b.sub(a);
        let phi = dir.y.atan2(dir.x);
        let (min_x, max_x, min_y, max_y) = verts.iter().fold(
            (f64::MAX, f64::MIN, f64::MAX, f64::MIN),
            |(lx, hx, ly, hy), p| {
                let q = p.rotated(-phi);
                (lx.min(q.x), hx.max(q.x), ly.min(q.y), hy.max(q.y))
            },
        );
        let half = ((max_x - min_x) / 2.0, (max_y - min_y) / 2.0);
        let local_center = Point2::new((min_x + max_x) / 2.0, (min_y + max_y) / 2.0);
        let rect = OrientedRect::canonical(local_center.rotated(phi), half, phi);
        let area = 4.0 * half.0 * half.1;
        let better = match &best {
            None => true,
            Some((best_area, best_rect)) => {
                let tol = 1e-12 * best_area.max(1e-300);
                area < best_area - tol || (area <= best_area + tol && rect.yaw < best_rect.yaw)
            }
        };
        if better {
            best = Some((area, rect));
        }
    }
    best.expect("polygon has at least 3 edges").1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    /// Independent hull check: every input point must lie inside or on every
    /// hull edge half-plane.
    fn assert_is_hull_of(hull: &ConvexPolygon2D, points: &[Point2]) {
        for pt in points {
            assert!(
                hull.contains(*pt, 1e-9),
                "input point {pt:?} outside hull {hull:?}"
            );
        }
        // Hull vertices must come from the input set.
        for v in hull.vertices() {
            assert!(points.iter().any(|q| q.dist(*v) < 1e-12));
        }
    }

    #[test]
    fn hull_drops_interior_point_of_square() {
        let pts = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0), p(0.5, 0.5)];
        let hull = convex_hull_2d(&pts).unwrap();
        assert_eq!(hull.vertices().len(), 4);
        assert_is_hull_of(&hull, &pts);
        assert!(!hull.vertices().iter().any(|v| v.dist(p(0.5, 0.5)) < 1e-9));
    }

    #[test]
    fn hull_excludes_nearly_collinear_bottom_point() {
        let pts = [p(0.0, 0.0), p(1.0, 0.0), p(0.5, 0.01), p(0.5, 1.0)];
        let hull = convex_hull_2d(&pts).unwrap();
        assert_is_hull_of(&hull, &pts);
        assert_eq!(hull.vertices().len(), 3);
        assert!(!hull.vertices().iter().any(|v| v.dist(p(0.5, 0.01)) < 1e-9));
    }

    #[test]
    fn hull_of_collinear_points_is_degenerate() {
        let pts = [p(0.0, 0.0), p(1.0, 1.0), p(2.0, 2.0)];
        assert_eq!(convex_hull_2d(&pts), Err(GeometryError::DegenerateInput));
    }

    #[test]
    fn hull_is_idempotent() {
        let pts = [
            p(0.0, 0.0),
            p(2.0, -0.3),
            p(3.0, 1.5),
            p(1.0, 2.5),
            p(-0.5, 1.0),
            p(1.2, 0.7),
        ];
        let hull = convex_hull_2d(&pts).unwrap();
        let again = convex_hull_2d(hull.vertices()).unwrap();
        assert_eq!(hull.vertices().len(), again.vertices().len());
        for (a, b) in hull.vertices().iter().zip(again.vertices()) {
            assert!(a.dist(*b) < 1e-12);
        }
    }

    #[test]
    fn min_rect_of_unit_square() {
        let hull = convex_hull_2d(&[p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]).unwrap();
        let rect = min_oriented_rect(&hull);
        assert!(rect.center.dist(p(0.5, 0.5)) < 1e-12);
        assert!((rect.half_extents.0 - 0.5).abs() < 1e-12);
        assert!((rect.half_extents.1 - 0.5).abs() < 1e-12);
        assert_eq!(rect.yaw, 0.0);
    }

    #[test]
    fn min_rect_is_rotation_equivariant() {
        let theta = 30f64.to_radians();
        let square: Vec<Point2> = [p(-0.5, -0.5), p(0.5, -0.5), p(0.5, 0.5), p(-0.5, 0.5)]
            .iter()
            .map(|q| q.rotated(theta))
            .collect();
        let rect = min_oriented_rect(&convex_hull_2d(&square).unwrap());
        assert!((rect.yaw - theta).abs() < 1e-9, "yaw {} vs {}", rect.yaw, theta);
        assert!((rect.half_extents.0 - 0.5).abs() < 1e-9);
        assert!((rect.half_extents.1 - 0.5).abs() < 1e-9);
        assert!(rect.center.norm() < 1e-9);
    }

    /// Brute-force sweep: the calipers answer must beat every rectangle from
    /// a 0.1°-stepped rotation sweep.
    #[test]
    fn min_rect_beats_rotation_sweep_on_random_20gon() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let pts: Vec<Point2> = (0..20)
            .map(|_| p(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        let hull = convex_hull_2d(&pts).unwrap();
        let rect = min_oriented_rect(&hull);
        let area = 4.0 * rect.half_extents.0 * rect.half_extents.1;

        let mut sweep_min = f64::MAX;
        let step = 0.1f64.to_radians();
        let mut phi = 0.0;
        while phi < FRAC_PI_2 {
            let (min_x, max_x, min_y, max_y) = hull.vertices().iter().fold(
                (f64::MAX, f64::MIN, f64::MAX, f64::MIN),
                |(lx, hx, ly, hy), q| {
                    let r = q.rotated(-phi);
                    (lx.min(r.x), hx.max(r.x), ly.min(r.y), hy.max(r.y))
                },
            );
            sweep_min = sweep_min.min((max_x - min_x) * (max_y - min_y));
            phi += step;
        }
        assert!(
            area <= sweep_min * (1.0 + 1e-6),
            "calipers area {area} exceeds sweep minimum {sweep_min}"
        );
    }

    #[test]
    fn min_rect_tie_breaks_to_smallest_yaw() {
        // A regular octagon has four optimal edge directions; the canonical
        // yaw must be deterministic and minimal.
        let pts: Vec<Point2> = (0..8)
            .map(|i| {
                let a = std::f64::consts::FRAC_PI_4 * i as f64 + std::f64::consts::FRAC_PI_8;
                p(a.cos(), a.sin())
            })
            .collect();
        let rect = min_oriented_rect(&convex_hull_2d(&pts).unwrap());
        assert!(rect.yaw >= 0.0 && rect.yaw < FRAC_PI_2);
        let again = min_oriented_rect(&convex_hull_2d(&pts).unwrap());
        assert_eq!(rect, again);
    }
}
