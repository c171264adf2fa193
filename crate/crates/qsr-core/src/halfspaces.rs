//! Bounded directional regions ("halfspaces") flush against a box's faces.
//!
//! Each region is itself an oriented box: it shares one face with the source
//! box, copies the source's cross-section in the other two axes, and extends
//! away from that face by `s` times the source's full extent along the axis.

use crate::frames::{Cbb, FrameOfReference};
use crate::geometry::{OrientedBox, Point3, EPS_GEOM};
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

/// One of the six face directions of a box, named in frame coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemiAxis {
    XPos,
    XNeg,
    YPos,
    YNeg,
    ZPos,
    ZNeg,
}

impl SemiAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SemiAxis::XPos => "x+",
            SemiAxis::XNeg => "x-",
            SemiAxis::YPos => "y+",
            SemiAxis::YNeg => "y-",
            SemiAxis::ZPos => "z+",
            SemiAxis::ZNeg => "z-",
        }
    }

    pub fn is_lateral(self) -> bool {
        !matches!(self, SemiAxis::ZPos | SemiAxis::ZNeg)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HalfspaceError {
    /// Lateral regions need the box edges parallel to the frame axes
    /// (mod π/2); otherwise no flush axis-aligned face exists.
    #[error("box yaw misaligned with frame axes by {residual} rad (mod π/2)")]
    MisalignedBox { residual: f64 },
}

/// The directional regions of one source box in one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceSet {
    source: OrientedBox,
    frame: FrameOfReference,
    scale: f64,
    regions: Vec<(SemiAxis, OrientedBox)>,
}

impl HalfspaceSet {
    pub fn source(&self) -> &OrientedBox {
        &self.source
    }

    pub fn frame(&self) -> &FrameOfReference {
        &self.frame
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn region(&self, axis: SemiAxis) -> Option<&OrientedBox> {
        self.regions.iter().find(|(a, _)| *a == axis).map(|(_, b)| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = (SemiAxis, &OrientedBox)> {
        self.regions.iter().map(|(a, b)| (*a, b))
    }
}

/// Smallest angular residual between the box edges and the frame axes.
fn alignment_residual(box_yaw: f64, frame_yaw: f64) -> f64 {
    let r = (box_yaw - frame_yaw).rem_euclid(FRAC_PI_2);
    r.min(FRAC_PI_2 - r)
}

/// Axis-aligned bounds of the box in frame coordinates. Only meaningful when
/// the box is aligned with the frame; callers check the residual first.
fn local_bounds(source: &OrientedBox, frame: &FrameOfReference) -> (Point3, Point3) {
    let mut lo = Point3::new(f64::MAX, f64::MAX, f64::MAX);
    let mut hi = Point3::new(f64::MIN, f64::MIN, f64::MIN);
    for c in source.corners() {
        let l = frame.to_frame(c);
        lo = Point3::new(lo.x.min(l.x), lo.y.min(l.y), lo.z.min(l.z));
        hi = Point3::new(hi.x.max(l.x), hi.y.max(l.y), hi.z.max(l.z));
    }
    (lo, hi)
}

fn region_from_local(frame: &FrameOfReference, lo: Point3, hi: Point3) -> OrientedBox {
    let center_local = Point3::new(
        (lo.x + hi.x) / 2.0,
        (lo.y + hi.y) / 2.0,
        (lo.z + hi.z) / 2.0,
    );
    OrientedBox::new(
        frame.from_frame(center_local),
        [
            (hi.x - lo.x) / 2.0,
            (hi.y - lo.y) / 2.0,
            (hi.z - lo.z) / 2.0,
        ],
        frame.yaw(),
    )
}

fn lateral_from_bounds(
    frame: &FrameOfReference,
    lo: Point3,
    hi: Point3,
    s: f64,
) -> Vec<(SemiAxis, OrientedBox)> {
    let w = hi.x - lo.x;
    let d = hi.y - lo.y;
    vec![
        (
            SemiAxis::XPos,
            region_from_local(
                frame,
                Point3::new(hi.x, lo.y, lo.z),
                Point3::new(hi.x + s * w, hi.y, hi.z),
            ),
        ),
        (
            SemiAxis::XNeg,
            region_from_local(
                frame,
                Point3::new(lo.x - s * w, lo.y, lo.z),
                Point3::new(lo.x, hi.y, hi.z),
            ),
        ),
        (
            SemiAxis::YPos,
            region_from_local(
                frame,
                Point3::new(lo.x, hi.y, lo.z),
                Point3::new(hi.x, hi.y + s * d, hi.z),
            ),
        ),
        (
            SemiAxis::YNeg,
            region_from_local(
                frame,
                Point3::new(lo.x, lo.y - s * d, lo.z),
                Point3::new(hi.x, lo.y, hi.z),
            ),
        ),
    ]
}

/// All six directional regions of `source` expressed in `frame`.
///
/// Preconditions: `s` finite and positive (config validation enforces it);
/// the box edges parallel to the frame axes mod π/2 within
/// [`EPS_GEOM`](crate::geometry::EPS_GEOM), else
/// [`HalfspaceError::MisalignedBox`].
pub fn halfspaces_of(
    source: &OrientedBox,
    frame: &FrameOfReference,
    s: f64,
) -> Result<HalfspaceSet, HalfspaceError> {
    assert!(s.is_finite() && s > 0.0, "halfspace scale must be positive");
    let residual = alignment_residual(source.yaw(), frame.yaw());
    if residual >= EPS_GEOM {
        return Err(HalfspaceError::MisalignedBox { residual });
    }
    let (lo, hi) = local_bounds(source, frame);
    let mut regions = lateral_from_bounds(frame, lo, hi, s);
    let h = hi.z - lo.z;
    regions.push((
        SemiAxis::ZPos,
        region_from_local(
            frame,
            Point3::new(lo.x, lo.y, hi.z),
            Point3::new(hi.x, hi.y, hi.z + s * h),
        ),
    ));
    regions.push((
        SemiAxis::ZNeg,
        region_from_local(
            frame,
            Point3::new(lo.x, lo.y, lo.z - s * h),
            Point3::new(hi.x, hi.y, lo.z),
        ),
    ));
    Ok(HalfspaceSet {
        source: *source,
        frame: *frame,
        scale: s,
        regions,
    })
}

/// The four lateral regions of a contextualised bounding box. The CBB is
/// aligned with its frame by construction, so this cannot fail for a `Cbb`
/// built against the same frame.
pub fn lateral_halfspaces_of_cbb(
    cbb: &Cbb,
    fc: &FrameOfReference,
    s: f64,
) -> Result<HalfspaceSet, HalfspaceError> {
    assert!(s.is_finite() && s > 0.0, "halfspace scale must be positive");
    let residual = alignment_residual(cbb.bbox.yaw(), fc.yaw());
    if residual >= EPS_GEOM {
        return Err(HalfspaceError::MisalignedBox { residual });
    }
    let (lo, hi) = local_bounds(&cbb.bbox, fc);
    Ok(HalfspaceSet {
        source: cbb.bbox,
        frame: *fc,
        scale: s,
        regions: lateral_from_bounds(fc, lo, hi, s),
    })
}

/// Vertical regions grown from the box's own footprint, valid for any yaw:
/// the region copies the box cross-section and yaw, only the Z span moves.
pub fn vertical_halfspaces(source: &OrientedBox, s: f64) -> [(SemiAxis, OrientedBox); 2] {
    assert!(s.is_finite() && s > 0.0, "halfspace scale must be positive");
    let [hx, hy, hz] = source.half_extents();
    let c = source.center();
    let up = OrientedBox::new(
        Point3::new(c.x, c.y, source.z_max() + s * hz),
        [hx, hy, s * hz],
        source.yaw(),
    );
    let down = OrientedBox::new(
        Point3::new(c.x, c.y, source.z_min() - s * hz),
        [hx, hy, s * hz],
        source.yaw(),
    );
    [(SemiAxis::ZPos, up), (SemiAxis::ZNeg, down)]
}
