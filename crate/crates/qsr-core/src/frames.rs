//! Frames of reference and the contextualised bounding box.
//!
//! Five frame families share one representation (origin + yaw about Z):
//! global, robot body, robot viewpoint (X axis aimed at a target object),
//! object-intrinsic (origin at the box center, X along the box), and
//! contextualised (origin at an object, yaw borrowed from the viewpoint).

use crate::geometry::{
    normalize_angle, normalize_signed_angle, rotate_box_about_axis, OrientedBox, Point2, Point3,
    EPS_GEOM,
};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameKind {
    Global,
    Robot,
    Viewpoint,
    Intrinsic,
    Contextualised,
}

/// A right-handed frame differing from the global one by a translation and a
/// yaw about Z. Z always stays vertical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameOfReference {
    origin: Point3,
    yaw: f64,
    kind: FrameKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    /// The target sits on the robot's vertical axis; no gaze direction
    /// exists. Callers fall back to the robot heading.
    #[error("degenerate viewpoint: target is within tolerance of the robot position in XY")]
    DegenerateViewpoint,
}

impl FrameOfReference {
    pub fn new(origin: Point3, yaw: f64, kind: FrameKind) -> Self {
        assert!(origin.is_finite() && yaw.is_finite());
        FrameOfReference {
            origin,
            yaw: normalize_angle(yaw),
            kind,
        }
    }

    pub fn global() -> Self {
        FrameOfReference::new(Point3::new(0.0, 0.0, 0.0), 0.0, FrameKind::Global)
    }

    pub fn robot(pose: &RobotPose) -> Self {
        FrameOfReference::new(pose.position(), pose.heading(), FrameKind::Robot)
    }

    /// Frame with origin at the box center and X along the box's long-lived
    /// yaw axis.
    pub fn intrinsic(b: &OrientedBox) -> Self {
        FrameOfReference::new(b.center(), b.yaw(), FrameKind::Intrinsic)
    }

    pub fn origin(&self) -> Point3 {
        self.origin
    }

    pub fn yaw(&self) -> f64 {
        self.yaw
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    /// Global coordinates -> frame coordinates.
    pub fn to_frame(&self, p: Point3) -> Point3 {
        let d = p.xy().sub(self.origin.xy()).rotated(-self.yaw);
        Point3::new(d.x, d.y, p.z - self.origin.z)
    }

    /// Frame coordinates -> global coordinates.
    pub fn from_frame(&self, local: Point3) -> Point3 {
        let d = local.xy().rotated(self.yaw);
        Point3::new(
            self.origin.x + d.x,
            self.origin.y + d.y,
            self.origin.z + local.z,
        )
    }

    /// Unit X axis of the frame, in global XY coordinates.
    pub fn x_axis(&self) -> Point2 {
        Point2::new(1.0, 0.0).rotated(self.yaw)
    }

    /// Unit Y axis of the frame, in global XY coordinates.
    pub fn y_axis(&self) -> Point2 {
        Point2::new(0.0, 1.0).rotated(self.yaw)
    }
}

/// Robot position and heading (yaw of the body X axis).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotPose {
    position: Point3,
    heading: f64,
}

impl RobotPose {
    pub fn new(position: Point3, heading: f64) -> Self {
        assert!(position.is_finite() && heading.is_finite());
        RobotPose {
            position,
            heading: normalize_angle(heading),
        }
    }

    pub fn position(&self) -> Point3 {
        self.position
    }

    pub fn heading(&self) -> f64 {
        self.heading
    }
}

/// Viewpoint frame: origin at the robot, X axis aimed at `target` in XY.
/// Errors when the target is vertically above or below the robot.
pub fn robot_viewpoint(pose: &RobotPose, target: Point3) -> Result<FrameOfReference, FrameError> {
    let d = target.xy().sub(pose.position().xy());
    if d.norm() < EPS_GEOM {
        return Err(FrameError::DegenerateViewpoint);
    }
    Ok(FrameOfReference::new(
        pose.position(),
        d.y.atan2(d.x),
        FrameKind::Viewpoint,
    ))
}

/// Viewpoint frame with a deterministic fallback: on a degenerate target the
/// robot heading is used and the second component reports `true`.
pub fn viewpoint_or_fallback(pose: &RobotPose, target: Point3) -> (FrameOfReference, bool) {
    match robot_viewpoint(pose, target) {
        Ok(f) => (f, false),
        Err(FrameError::DegenerateViewpoint) => (
            FrameOfReference::new(pose.position(), pose.heading(), FrameKind::Viewpoint),
            true,
        ),
    }
}

/// Contextualised frame of an object: origin at the object's centroid, yaw
/// copied from the viewpoint so the frame "looks" the way the robot does.
pub fn contextualised_frame(centroid: Point3, viewpoint: &FrameOfReference) -> FrameOfReference {
    FrameOfReference::new(centroid, viewpoint.yaw(), FrameKind::Contextualised)
}

/// Contextualised bounding box: the object's minimum box rotated about the
/// contextualised frame's vertical axis by the smallest angle that aligns
/// its edges with the frame's axes (mod π/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cbb {
    /// The aligned box. Same half-extents (hence volume) as the source box.
    pub bbox: OrientedBox,
    /// Applied rotation, in `[−π/4, π/4]`.
    pub theta: f64,
}

/// Align `min_box` with `fc` by the minimal rotation. The residual
/// `min_box.yaw − fc.yaw` is reduced mod π/2 to `r ∈ [0, π/2)` and undone by
/// `−r` or completed by `π/2 − r`, whichever is smaller in magnitude; the
/// exact tie `r = π/4` resolves to `+π/4`.
pub fn build_cbb(min_box: &OrientedBox, fc: &FrameOfReference) -> Cbb {
    let rel = normalize_signed_angle(min_box.yaw() - fc.yaw());
    let r = rel.rem_euclid(FRAC_PI_2);
    let theta = if r >= FRAC_PI_4 { FRAC_PI_2 - r } else { -r };
    Cbb {
        bbox: rotate_box_about_axis(min_box, fc.origin(), theta),
        theta,
    }
}
