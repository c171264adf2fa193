//! Geometric primitives: points, 2D convex polygons and hulls, minimum-area
//! oriented rectangles, yaw-only oriented boxes, and vertical prisms.
//!
//! Conventions:
//! - All quantities are meters / radians / cubic meters.
//! - Boxes and prisms are "yaw-only": bases parallel to the global XY plane.
//! - No exact arithmetic; every predicate is tolerance-disciplined via the
//!   constants below.

mod hull;
mod obb;
mod prism;

pub use hull::{convex_hull_2d, min_oriented_rect, ConvexPolygon2D, OrientedRect};
pub use obb::{
    box_distance, box_intersection_volume, fit_min_oriented_box, rotate_box_about_axis,
    OrientedBox,
};
pub use prism::ConvexPrism;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Geometric identity tolerance (meters, or radians for angle alignment).
pub const EPS_GEOM: f64 = 1e-6;
/// Volumes at or below this are treated as zero (cubic meters).
pub const EPS_VOL: f64 = 1e-9;
/// Degenerate extents (points, segments, planar patches) are inflated to this
/// half-extent so every object owns a proper solid.
pub const DELTA_MIN: f64 = 1e-3;
/// Cross products with absolute value at or below this are treated as
/// collinear when building hulls and testing polygon membership.
pub(crate) const EPS_CROSS: f64 = 1e-12;

/// Errors from the geometric primitives.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    /// Fewer than 3 non-collinear points; caller falls back to
    /// segment/point inflation.
    #[error("degenerate input: fewer than 3 non-collinear points")]
    DegenerateInput,
}

/// A point (or displacement) in the XY plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn sub(self, other: Point2) -> Point2 {
        Point2::new(self.x - other.x, self.y - other.y)
    }

    pub fn add(self, other: Point2) -> Point2 {
        Point2::new(self.x + other.x, self.y + other.y)
    }

    pub fn scale(self, f: f64) -> Point2 {
        Point2::new(self.x * f, self.y * f)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Z component of the cross product `self × other`.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(self, other: Point2) -> f64 {
        self.sub(other).norm()
    }

    /// Rotate about the origin by `theta`.
    pub fn rotated(self, theta: f64) -> Point2 {
        let (s, c) = theta.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// A point in 3D space, interpreted in an explicit frame (global unless
/// stated otherwise). Coordinates must be finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn xy(self) -> Point2 {
        Point2::new(self.x, self.y)
    }

    pub fn sub(self, other: Point3) -> Point3 {
        Point3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn add(self, other: Point3) -> Point3 {
        Point3::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }

    pub fn dist(self, other: Point3) -> f64 {
        let d = self.sub(other);
        (d.x * d.x + d.y * d.y + d.z * d.z).sqrt()
    }

    /// Rotate about the vertical line through `origin` by `theta`.
    pub fn rotated_about_z(self, origin: Point3, theta: f64) -> Point3 {
        let r = self.xy().sub(origin.xy()).rotated(theta);
        Point3::new(origin.x + r.x, origin.y + r.y, self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Normalize an angle to `[0, 2π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(std::f64::consts::TAU);
    // rem_euclid can return exactly TAU after rounding; fold it back.
    if r >= std::f64::consts::TAU {
        0.0
    } else {
        r
    }
}

/// Normalize an angle to `(−π, π]`.
pub fn normalize_signed_angle(a: f64) -> f64 {
    let r = a.rem_euclid(std::f64::consts::TAU);
    if r > std::f64::consts::PI {
        r - std::f64::consts::TAU
    } else {
        r
    }
}
