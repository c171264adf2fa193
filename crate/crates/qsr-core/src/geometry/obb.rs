//! Yaw-only oriented boxes: fitting, containment, distance, intersection.

use super::hull::{convex_hull_2d, min_oriented_rect, ConvexPolygon2D, OrientedRect};
use super::prism::ConvexPrism;
use super::{normalize_angle, Point2, Point3, DELTA_MIN, EPS_GEOM};

/// A 3D box with arbitrary yaw about Z and base parallel to the global XY
/// plane. Represents fitted object boxes, CBBs, and halfspace regions.
///
/// Invariants: finite fields, strictly positive half-extents, yaw normalized
/// to `[0, 2π)`. Construction panics on violations; scene ingestion validates
/// user data before constructing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedBox {
    center: Point3,
    half_extents: [f64; 3],
    yaw: f64,
}

impl OrientedBox {
    pub fn new(center: Point3, half_extents: [f64; 3], yaw: f64) -> Self {
        assert!(center.is_finite(), "box center must be finite");
        assert!(
            half_extents.iter().all(|h| h.is_finite() && *h > 0.0),
            "half extents must be finite and positive: {half_extents:?}"
        );
        assert!(yaw.is_finite(), "box yaw must be finite");
        OrientedBox {
            center,
            half_extents,
            yaw: normalize_angle(yaw),
        }
    }

    pub fn center(&self) -> Point3 {
        self.center
    }

    pub fn half_extents(&self) -> [f64; 3] {
        self.half_extents
    }

    pub fn yaw(&self) -> f64 {
        self.yaw
    }

    pub fn z_min(&self) -> f64 {
        self.center.z - self.half_extents[2]
    }

    pub fn z_max(&self) -> f64 {
        self.center.z + self.half_extents[2]
    }

    pub fn volume(&self) -> f64 {
        8.0 * self.half_extents[0] * self.half_extents[1] * self.half_extents[2]
    }

    /// Diameter of the box (corner-to-corner diagonal length).
    pub fn diameter(&self) -> f64 {
        let [hx, hy, hz] = self.half_extents;
        2.0 * (hx * hx + hy * hy + hz * hz).sqrt()
    }

    /// Base corners in CCW order.
    pub fn corners_2d(&self) -> [Point2; 4] {
        let [hx, hy, _] = self.half_extents;
        let c = self.center.xy();
        [
            Point2::new(hx, hy),
            Point2::new(-hx, hy),
            Point2::new(-hx, -hy),
            Point2::new(hx, -hy),
        ]
        .map(|p| c.add(p.rotated(self.yaw)))
    }

    /// All 8 corners, bottom face first (same CCW order as `corners_2d`).
    pub fn corners(&self) -> [Point3; 8] {
        let base = self.corners_2d();
        let (z0, z1) = (self.z_min(), self.z_max());
        let mut out = [Point3::new(0.0, 0.0, 0.0); 8];
        for (i, b) in base.iter().enumerate() {
            out[i] = Point3::new(b.x, b.y, z0);
            out[i + 4] = Point3::new(b.x, b.y, z1);
        }
        out
    }

    /// Coordinates of `p` in the box frame (origin at center, axes along the
    /// box edges).
    pub fn local_coords(&self, p: Point3) -> Point3 {
        let d = p.xy().sub(self.center.xy()).rotated(-self.yaw);
        Point3::new(d.x, d.y, p.z - self.center.z)
    }

    pub fn from_local(&self, local: Point3) -> Point3 {
        let d = local.xy().rotated(self.yaw);
        Point3::new(
            self.center.x + d.x,
            self.center.y + d.y,
            self.center.z + local.z,
        )
    }

    /// Closed-solid membership with tolerance band `eps` (meters).
    pub fn contains_point(&self, p: Point3, eps: f64) -> bool {
        let l = self.local_coords(p);
        l.x.abs() <= self.half_extents[0] + eps
            && l.y.abs() <= self.half_extents[1] + eps
            && l.z.abs() <= self.half_extents[2] + eps
    }

    /// Nearest point of the solid to `p` (clamp in local coordinates).
    pub fn project_point(&self, p: Point3) -> Point3 {
        let l = self.local_coords(p);
        self.from_local(Point3::new(
            l.x.clamp(-self.half_extents[0], self.half_extents[0]),
            l.y.clamp(-self.half_extents[1], self.half_extents[1]),
            l.z.clamp(-self.half_extents[2], self.half_extents[2]),
        ))
    }

    pub fn distance_to_point(&self, p: Point3) -> f64 {
        self.project_point(p).dist(p)
    }

    pub fn to_prism(&self) -> ConvexPrism {
        let poly = ConvexPolygon2D::from_ccw(self.corners_2d().to_vec());
        ConvexPrism::new(poly, self.z_min(), self.z_max())
    }

    pub fn translated(&self, d: Point3) -> OrientedBox {
        OrientedBox::new(self.center.add(d), self.half_extents, self.yaw)
    }
}

/// Rigid rotation of a box about the vertical line through `origin`: the
/// center orbits, the yaw increments by `theta` (renormalized), the extents
/// are untouched.
pub fn rotate_box_about_axis(b: &OrientedBox, origin: Point3, theta: f64) -> OrientedBox {
    OrientedBox::new(
        b.center().rotated_about_z(origin, theta),
        b.half_extents(),
        b.yaw() + theta,
    )
}

/// Fit the minimum yaw-only oriented box around a point cloud: minimum-area
/// oriented rectangle of the XY projection, extruded over the Z range.
/// Degenerate clouds (single point, segment, planar patch) have their missing
/// extents inflated to [`DELTA_MIN`](super::DELTA_MIN) so the result is
/// always a proper solid.
///
/// Panics on an empty slice; scene validation guarantees non-empty clouds.
pub fn fit_min_oriented_box(points: &[Point3]) -> OrientedBox {
    assert!(!points.is_empty(), "cannot fit a box around zero points");
    let (z_min, z_max) = points
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.z), hi.max(p.z)));
    let xy: Vec<Point2> = points.iter().map(|p| p.xy()).collect();
    let rect = match convex_hull_2d(&xy) {
        Ok(hull) => min_oriented_rect(&hull),
        Err(_) => degenerate_rect(&xy),
    };
    OrientedBox::new(
        Point3::new(rect.center.x, rect.center.y, (z_min + z_max) / 2.0),
        [
            rect.half_extents.0.max(DELTA_MIN),
            rect.half_extents.1.max(DELTA_MIN),
            ((z_max - z_min) / 2.0).max(DELTA_MIN),
        ],
        rect.yaw,
    )
}

/// Enclosing rectangle for XY-degenerate clouds: a point collapses to a zero
/// rectangle, a segment aligns the rectangle with the segment direction.
fn degenerate_rect(xy: &[Point2]) -> OrientedRect {
    let a = *xy
        .iter()
        .min_by(|p, q| (p.x, p.y).partial_cmp(&(q.x, q.y)).expect("finite"))
        .expect("non-empty");
    let b = *xy
        .iter()
        .max_by(|p, q| {
            a.dist(**p)
                .partial_cmp(&a.dist(**q))
                .expect("finite")
        })
        .expect("non-empty");
    if a.dist(b) <= EPS_GEOM {
        let n = xy.len() as f64;
        let cx = xy.iter().map(|p| p.x).sum::<f64>() / n;
        let cy = xy.iter().map(|p| p.y).sum::<f64>() / n;
        return OrientedRect::canonical(Point2::new(cx, cy), (0.0, 0.0), 0.0);
    }
    let dir = b.sub(a);
    let phi = dir.y.atan2(dir.x);
    let (min_x, max_x, min_y, max_y) = xy.iter().fold(
        (f64::MAX, f64::MIN, f64::MAX, f64::MIN),
        |(lx, hx, ly, hy), p| {
            let q = p.rotated(-phi);
            (lx.min(q.x), hx.max(q.x), ly.min(q.y), hy.max(q.y))
        },
    );
    let local_center = Point2::new((min_x + max_x) / 2.0, (min_y + max_y) / 2.0);
    OrientedRect::canonical(
        local_center.rotated(phi),
        ((max_x - min_x) / 2.0, (max_y - min_y) / 2.0),
        phi,
    )
}

/// Minimum Euclidean distance between two box solids; 0 iff they intersect
/// or touch. Symmetric exactly: arguments are canonically ordered so both
/// call orders run the identical computation.
pub fn box_distance(a: &OrientedBox, b: &OrientedBox) -> f64 {
    let (p, q) = if box_order_key(a) <= box_order_key(b) {
        (a, b)
    } else {
        (b, a)
    };
    p.to_prism().distance(&q.to_prism())
}

fn box_order_key(b: &OrientedBox) -> [u64; 7] {
    let c = b.center();
    let h = b.half_extents();
    [
        c.x.to_bits(),
        c.y.to_bits(),
        c.z.to_bits(),
        h[0].to_bits(),
        h[1].to_bits(),
        h[2].to_bits(),
        b.yaw().to_bits(),
    ]
}

/// Volume of the intersection solid of two boxes: convex polygon clip in the
/// XY cross-section times the Z overlap (both boxes are yaw-only prisms).
/// Clamped into `[0, min(volume(a), volume(b))]`.
pub fn box_intersection_volume(a: &OrientedBox, b: &OrientedBox) -> f64 {
    a.to_prism()
        .intersection_volume(&b.to_prism())
        .min(a.volume())
        .min(b.volume())
        .max(0.0)
}
