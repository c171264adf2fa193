//! Metric, topological, and directional relations between scene objects.
//!
//! Directional relations come in two families. The object-frame family tags
//! halfspaces of the reference's own box (East/West/North/South/Above/Below,
//! strict or relaxed). The contextualised family tags lateral halfspaces of
//! the reference's CBB, aligned with the robot's viewpoint (LeftOf/RightOf/
//! InFrontOf/Behind, relaxed only), plus viewpoint-invariant Above/Below
//! grown straight from the reference's own box.

use crate::frames::{build_cbb, Cbb, FrameOfReference};
use crate::geometry::{
    box_distance, box_intersection_volume, ConvexPrism, OrientedBox, EPS_VOL,
};
use crate::halfspaces::{
    halfspaces_of, lateral_halfspaces_of_cbb, vertical_halfspaces, HalfspaceSet, SemiAxis,
};
use crate::scene::SceneObject;
use thiserror::Error;

/// Thresholds governing relation evaluation. Lengths in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationConfig {
    /// Closeness threshold: objects within this distance are close/near.
    pub closeness_t: f64,
    /// Contact tolerance: distances up to this count as touching.
    pub touch_eps: f64,
    /// Halfspace extrusion depth as a multiple of the box's full extent.
    pub halfspace_scale_s: f64,
    /// Relative slack on complete containment.
    pub containment_tol: f64,
    /// Relative shell growth used by the partial-containment proxy.
    pub adjacency_delta: f64,
}

impl Default for RelationConfig {
    fn default() -> Self {
        RelationConfig {
            closeness_t: 0.5,
            touch_eps: 0.01,
            halfspace_scale_s: 2.0,
            containment_tol: 1e-3,
            adjacency_delta: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelationConfigError {
    #[error("{field} must be a finite positive number, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("closeness_T ({closeness_t}) must be at least touch_eps ({touch_eps})")]
    ClosenessBelowTouch { closeness_t: f64, touch_eps: f64 },
}

impl RelationConfig {
    pub fn validate(&self) -> Result<(), RelationConfigError> {
        let fields = [
            ("closeness_T", self.closeness_t),
            ("touch_eps", self.touch_eps),
            ("halfspace_scale_s", self.halfspace_scale_s),
            ("containment_tol", self.containment_tol),
            ("adjacency_delta", self.adjacency_delta),
        ];
        for (field, value) in fields {
            if !value.is_finite() || value <= 0.0 {
                return Err(RelationConfigError::NonPositive { field, value });
            }
        }
        if self.closeness_t < self.touch_eps {
            return Err(RelationConfigError::ClosenessBelowTouch {
                closeness_t: self.closeness_t,
                touch_eps: self.touch_eps,
            });
        }
        Ok(())
    }
}

/// Cardinal tags of the object-frame family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FoTag {
    East,
    West,
    North,
    South,
    Above,
    Below,
}

impl FoTag {
    pub const ALL: [FoTag; 6] = [
        FoTag::East,
        FoTag::West,
        FoTag::North,
        FoTag::South,
        FoTag::Above,
        FoTag::Below,
    ];

    pub fn semi_axis(self) -> SemiAxis {
        match self {
            FoTag::East => SemiAxis::XPos,
            FoTag::West => SemiAxis::XNeg,
            FoTag::North => SemiAxis::YPos,
            FoTag::South => SemiAxis::YNeg,
            FoTag::Above => SemiAxis::ZPos,
            FoTag::Below => SemiAxis::ZNeg,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FoTag::East => "East",
            FoTag::West => "West",
            FoTag::North => "North",
            FoTag::South => "South",
            FoTag::Above => "Above",
            FoTag::Below => "Below",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strictness {
    Strict,
    Relaxed,
}

/// Tags of the contextualised family. Lateral tags are viewpoint-dependent;
/// Above/Below are not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FcTag {
    Above,
    Below,
    LeftOf,
    RightOf,
    InFrontOf,
    Behind,
}

impl FcTag {
    pub const ALL: [FcTag; 6] = [
        FcTag::Above,
        FcTag::Below,
        FcTag::LeftOf,
        FcTag::RightOf,
        FcTag::InFrontOf,
        FcTag::Behind,
    ];

    /// Frame axis owning the tag: +X points from the robot toward the
    /// reference, so the near face is −X and the robot's left is +Y.
    pub fn semi_axis(self) -> SemiAxis {
        match self {
            FcTag::Above => SemiAxis::ZPos,
            FcTag::Below => SemiAxis::ZNeg,
            FcTag::LeftOf => SemiAxis::YPos,
            FcTag::RightOf => SemiAxis::YNeg,
            FcTag::InFrontOf => SemiAxis::XNeg,
            FcTag::Behind => SemiAxis::XPos,
        }
    }

    pub fn is_lateral(self) -> bool {
        self.semi_axis().is_lateral()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FcTag::Above => "Above",
            FcTag::Below => "Below",
            FcTag::LeftOf => "LeftOf",
            FcTag::RightOf => "RightOf",
            FcTag::InFrontOf => "InFrontOf",
            FcTag::Behind => "Behind",
        }
    }
}

/// Minimum distance between the two objects' fitted boxes; 0 iff they
/// intersect or touch.
pub fn object_distance(o1: &SceneObject, o2: &SceneObject) -> f64 {
    box_distance(o1.bbox(), o2.bbox())
}

/// Distance at most `closeness_T` (inclusive).
pub fn is_close(o1: &SceneObject, o2: &SceneObject, cfg: &RelationConfig) -> bool {
    object_distance(o1, o2) <= cfg.closeness_t
}

/// Distance at most `touch_eps`; intersecting boxes have distance 0 and
/// therefore touch.
pub fn touches(o1: &SceneObject, o2: &SceneObject, cfg: &RelationConfig) -> bool {
    object_distance(o1, o2) <= cfg.touch_eps
}

/// Shared volume above the noise floor.
pub fn intersects(o1: &SceneObject, o2: &SceneObject) -> bool {
    box_intersection_volume(o1.bbox(), o2.bbox()) > EPS_VOL
}

/// The common solid of the two boxes, `None` when there is no overlap with
/// positive volume.
pub fn intersection_region(o1: &SceneObject, o2: &SceneObject) -> Option<ConvexPrism> {
    let inter = o1.bbox().to_prism().intersection(&o2.bbox().to_prism())?;
    if inter.volume() > EPS_VOL {
        Some(inter)
    } else {
        None
    }
}

/// `o1` holds (almost) all of `o2`'s volume.
pub fn completely_contains(o1: &SceneObject, o2: &SceneObject, cfg: &RelationConfig) -> bool {
    region_completely_contains(o1.bbox(), o2.bbox(), cfg.containment_tol)
}

/// Relaxed region test: the figure overlaps the region with real volume.
pub fn region_intersects(figure: &OrientedBox, region: &OrientedBox) -> bool {
    box_intersection_volume(figure, region) > EPS_VOL
}

/// Strict region test: the region holds at least `(1 − tol)` of the figure's
/// volume. The positive-overlap conjunct keeps strict a subset of relaxed
/// even for degenerate figures.
pub fn region_completely_contains(region: &OrientedBox, figure: &OrientedBox, tol: f64) -> bool {
    let v = box_intersection_volume(region, figure);
    v >= (1.0 - tol) * figure.volume() && v > EPS_VOL
}

/// Cardinal relation of `o2` relative to `o1` in `o1`'s intrinsic frame.
///
/// Precondition: `frame` is `o1`'s intrinsic (min-box) frame; any frame the
/// reference box is axis-aligned with (mod π/2) is accepted, others panic.
pub fn directional_fo(
    o2: &SceneObject,
    o1: &SceneObject,
    frame: &FrameOfReference,
    tag: FoTag,
    strictness: Strictness,
    cfg: &RelationConfig,
) -> bool {
    let set = halfspaces_of(o1.bbox(), frame, cfg.halfspace_scale_s)
        .expect("frame must be aligned with the reference box (intrinsic frame)");
    let region = set.region(tag.semi_axis()).expect("full set has all six");
    match strictness {
        Strictness::Relaxed => region_intersects(o2.bbox(), region),
        Strictness::Strict => region_completely_contains(region, o2.bbox(), cfg.containment_tol),
    }
}

/// Viewpoint-contextualised relation of `o2` relative to `o1`.
///
/// Precondition: `fc` was built for `o1` under the current robot pose.
/// Lateral tags test the CBB's lateral halfspaces; Above/Below test regions
/// grown from `o1`'s own box and are therefore viewpoint-invariant.
pub fn directional_fc(
    o2: &SceneObject,
    o1: &SceneObject,
    fc: &FrameOfReference,
    tag: FcTag,
    cfg: &RelationConfig,
) -> bool {
    FcContext::new(o1.bbox(), fc, cfg).holds(o2.bbox(), tag)
}

/// Per-reference machinery for the contextualised family, built once and
/// reused across figures and tags.
#[derive(Debug, Clone)]
pub struct FcContext {
    fc: FrameOfReference,
    cbb: Cbb,
    lateral: HalfspaceSet,
    vertical_up: OrientedBox,
    vertical_down: OrientedBox,
}

impl FcContext {
    pub fn new(reference: &OrientedBox, fc: &FrameOfReference, cfg: &RelationConfig) -> FcContext {
        let cbb = build_cbb(reference, fc);
        let lateral = lateral_halfspaces_of_cbb(&cbb, fc, cfg.halfspace_scale_s)
            .expect("CBB is aligned with its frame by construction");
        let [(_, up), (_, down)] = vertical_halfspaces(reference, cfg.halfspace_scale_s);
        FcContext {
            fc: *fc,
            cbb,
            lateral,
            vertical_up: up,
            vertical_down: down,
        }
    }

    pub fn fc(&self) -> &FrameOfReference {
        &self.fc
    }

    pub fn cbb(&self) -> &Cbb {
        &self.cbb
    }

    pub fn region(&self, tag: FcTag) -> &OrientedBox {
        match tag {
            FcTag::Above => &self.vertical_up,
            FcTag::Below => &self.vertical_down,
            lateral => self
                .lateral
                .region(lateral.semi_axis())
                .expect("lateral set has all four"),
        }
    }

    pub fn holds(&self, figure: &OrientedBox, tag: FcTag) -> bool {
        region_intersects(figure, self.region(tag))
    }
}

/// Viewpoint-free Above: the figure overlaps the region grown upward from
/// the reference's box. Shared by both directional families.
pub fn relaxed_above(figure: &OrientedBox, reference: &OrientedBox, s: f64) -> bool {
    let [(_, up), _] = vertical_halfspaces(reference, s);
    region_intersects(figure, &up)
}

/// Viewpoint-free Below, mirror of [`relaxed_above`].
pub fn relaxed_below(figure: &OrientedBox, reference: &OrientedBox, s: f64) -> bool {
    let [_, (_, down)] = vertical_halfspaces(reference, s);
    region_intersects(figure, &down)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{robot_viewpoint, RobotPose};
    use crate::geometry::Point3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    fn solid(id: &str, cx: f64, cy: f64, cz: f64, half: [f64; 3], yaw: f64) -> SceneObject {
        SceneObject::solid(id, OrientedBox::new(Point3::new(cx, cy, cz), half, yaw))
    }

    fn cube(id: &str, cx: f64, cy: f64, cz: f64, h: f64) -> SceneObject {
        solid(id, cx, cy, cz, [h, h, h], 0.0)
    }

    #[test]
    fn distance_of_object_with_itself_is_zero() {
        let a = cube("a", 1.0, 2.0, 3.0, 0.5);
        assert_eq!(object_distance(&a, &a), 0.0);
    }

    #[test]
    fn unit_cubes_two_meters_apart() {
        let a = cube("a", 0.0, 0.0, 0.0, 0.5);
        let b = cube("b", 3.0, 0.0, 0.0, 0.5);
        assert!((object_distance(&a, &b) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn closeness_is_inclusive_at_the_threshold() {
        let cfg = RelationConfig::default();
        let a = cube("a", 0.0, 0.0, 0.0, 0.5);
        assert!(is_close(&a, &cube("b", 1.4, 0.0, 0.0, 0.5), &cfg)); // gap 0.4
        assert!(is_close(&a, &cube("b", 1.5, 0.0, 0.0, 0.5), &cfg)); // gap exactly T
        assert!(!is_close(&a, &cube("b", 1.502, 0.0, 0.0, 0.5), &cfg));
    }

    #[test]
    fn touching_flush_overlapping_and_gapped() {
        let cfg = RelationConfig::default();
        let a = cube("a", 0.0, 0.0, 0.0, 0.5);
        assert!(touches(&a, &cube("b", 1.0, 0.0, 0.0, 0.5), &cfg)); // face-flush
        assert!(touches(&a, &cube("b", 0.6, 0.0, 0.0, 0.5), &cfg)); // penetrating
        assert!(!touches(&a, &cube("b", 1.05, 0.0, 0.0, 0.5), &cfg)); // gap 0.05
    }

    #[test]
    fn intersection_of_offset_cubes() {
        let a = cube("a", 1.0, 1.0, 1.0, 1.0); // [0,2]^3
        let b = cube("b", 2.0, 2.0, 2.0, 1.0); // [1,3]^3
        assert!(intersects(&a, &b));
        let region = intersection_region(&a, &b).unwrap();
        assert!((region.volume() - 1.0).abs() < 1e-12);
        let far = cube("c", 9.0, 9.0, 9.0, 1.0);
        assert!(!intersects(&a, &far));
        assert!(intersection_region(&a, &far).is_none());
    }

    #[test]
    fn containment_nested_identical_and_partial() {
        let cfg = RelationConfig::default();
        let big = cube("big", 0.0, 0.0, 0.0, 1.0);
        let small = cube("small", 0.1, 0.0, 0.0, 0.3);
        assert!(completely_contains(&big, &small, &cfg));
        assert!(!completely_contains(&small, &big, &cfg));
        assert!(completely_contains(&big, &big, &cfg));
        let half = cube("half", 1.0, 0.0, 0.0, 1.0);
        assert!(!completely_contains(&big, &half, &cfg));
    }

    #[test]
    fn east_relaxed_and_strict() {
        let cfg = RelationConfig::default();
        let a = cube("a", 0.0, 0.0, 0.0, 0.5);
        let frame = FrameOfReference::intrinsic(a.bbox());
        // Fully inside the east region [0.5, 2.5].
        let b = cube("b", 1.5, 0.0, 0.0, 0.5);
        assert!(directional_fo(&b, &a, &frame, FoTag::East, Strictness::Relaxed, &cfg));
        assert!(directional_fo(&b, &a, &frame, FoTag::East, Strictness::Strict, &cfg));
        // Straddling the east face plane: relaxed only.
        let straddle = cube("s", 0.5, 0.0, 0.0, 0.5);
        assert!(directional_fo(&straddle, &a, &frame, FoTag::East, Strictness::Relaxed, &cfg));
        assert!(!directional_fo(&straddle, &a, &frame, FoTag::East, Strictness::Strict, &cfg));
        // Inside the west region [-2.5, -0.5], so west but never east.
        let west = cube("w", -1.5, 0.0, 0.0, 0.5);
        assert!(!directional_fo(&west, &a, &frame, FoTag::East, Strictness::Relaxed, &cfg));
        assert!(directional_fo(&west, &a, &frame, FoTag::West, Strictness::Relaxed, &cfg));
        // Beyond the region depth: no cardinal direction at all.
        let far = cube("f", -5.0, 0.0, 0.0, 0.5);
        assert!(!directional_fo(&far, &a, &frame, FoTag::East, Strictness::Relaxed, &cfg));
        assert!(!directional_fo(&far, &a, &frame, FoTag::West, Strictness::Relaxed, &cfg));
    }

    #[test]
    fn east_follows_the_intrinsic_axis() {
        let cfg = RelationConfig::default();
        let yaw = FRAC_PI_4;
        let a = solid("a", 0.0, 0.0, 0.0, [0.5, 0.5, 0.5], yaw);
        let frame = FrameOfReference::intrinsic(a.bbox());
        let along = solid(
            "b",
            1.5 * yaw.cos(),
            1.5 * yaw.sin(),
            0.0,
            [0.3, 0.3, 0.3],
            yaw,
        );
        assert!(directional_fo(&along, &a, &frame, FoTag::East, Strictness::Relaxed, &cfg));
        let opposite = solid(
            "c",
            -1.5 * yaw.cos(),
            -1.5 * yaw.sin(),
            0.0,
            [0.3, 0.3, 0.3],
            yaw,
        );
        assert!(!directional_fo(&opposite, &a, &frame, FoTag::East, Strictness::Relaxed, &cfg));
        assert!(directional_fo(&opposite, &a, &frame, FoTag::West, Strictness::Relaxed, &cfg));
    }

    #[test]
    fn book_on_desk_is_above_only() {
        let cfg = RelationConfig::default();
        let desk = solid("desk", 0.0, 0.0, 0.5, [1.0, 1.0, 0.5], 0.0);
        let book = solid("book", 0.0, 0.0, 1.25, [0.25, 0.25, 0.25], 0.0);
        let pose = RobotPose::new(Point3::new(-4.0, 0.0, 0.0), 0.0);
        let fc = crate::frames::contextualised_frame(
            desk.bbox().center(),
            &robot_viewpoint(&pose, desk.bbox().center()).unwrap(),
        );
        assert!(directional_fc(&book, &desk, &fc, FcTag::Above, &cfg));
        for tag in [FcTag::Below, FcTag::LeftOf, FcTag::RightOf, FcTag::InFrontOf, FcTag::Behind] {
            assert!(!directional_fc(&book, &desk, &fc, tag, &cfg), "{}", tag.as_str());
        }
    }

    #[test]
    fn left_right_swap_under_antipodal_viewpoints() {
        let cfg = RelationConfig::default();
        let reference = cube("ref", 0.0, 0.0, 0.5, 0.5);
        let side = cube("side", 1.2, 0.0, 0.5, 0.4);
        let south = RobotPose::new(Point3::new(0.0, -5.0, 0.0), 0.0);
        let north = RobotPose::new(Point3::new(0.0, 5.0, 0.0), 0.0);
        let fc_of = |pose: &RobotPose| {
            crate::frames::contextualised_frame(
                reference.bbox().center(),
                &robot_viewpoint(pose, reference.bbox().center()).unwrap(),
            )
        };
        let fc_s = fc_of(&south);
        let fc_n = fc_of(&north);
        // Seen from the south, the eastern object is on the robot's right.
        assert!(directional_fc(&side, &reference, &fc_s, FcTag::RightOf, &cfg));
        assert!(!directional_fc(&side, &reference, &fc_s, FcTag::LeftOf, &cfg));
        // Seen from the north it swaps.
        assert!(directional_fc(&side, &reference, &fc_n, FcTag::LeftOf, &cfg));
        assert!(!directional_fc(&side, &reference, &fc_n, FcTag::RightOf, &cfg));
        // Above/Below are indifferent to the viewpoint.
        for fc in [&fc_s, &fc_n] {
            assert!(!directional_fc(&side, &reference, fc, FcTag::Above, &cfg));
            assert!(!directional_fc(&side, &reference, fc, FcTag::Below, &cfg));
        }
    }

    #[test]
    fn in_front_is_the_robot_side() {
        let cfg = RelationConfig::default();
        let reference = cube("ref", 0.0, 0.0, 0.5, 0.5);
        let pose = RobotPose::new(Point3::new(-5.0, 0.0, 0.0), 0.0);
        let fc = crate::frames::contextualised_frame(
            reference.bbox().center(),
            &robot_viewpoint(&pose, reference.bbox().center()).unwrap(),
        );
        let near_side = cube("near", -1.2, 0.0, 0.5, 0.4);
        let far_side = cube("far", 1.2, 0.0, 0.5, 0.4);
        assert!(directional_fc(&near_side, &reference, &fc, FcTag::InFrontOf, &cfg));
        assert!(!directional_fc(&near_side, &reference, &fc, FcTag::Behind, &cfg));
        assert!(directional_fc(&far_side, &reference, &fc, FcTag::Behind, &cfg));
        assert!(!directional_fc(&far_side, &reference, &fc, FcTag::InFrontOf, &cfg));
    }

    #[test]
    fn vertical_helpers_match_fc_above_below() {
        let cfg = RelationConfig::default();
        let reference = solid("ref", 0.0, 0.0, 0.5, [0.6, 0.4, 0.5], 0.8);
        let figure = solid("fig", 0.2, 0.1, 1.3, [0.2, 0.2, 0.2], 0.1);
        let pose = RobotPose::new(Point3::new(-3.0, -3.0, 0.0), 0.0);
        let fc = crate::frames::contextualised_frame(
            reference.bbox().center(),
            &robot_viewpoint(&pose, reference.bbox().center()).unwrap(),
        );
        let ctx = FcContext::new(reference.bbox(), &fc, &cfg);
        assert_eq!(
            ctx.holds(figure.bbox(), FcTag::Above),
            relaxed_above(figure.bbox(), reference.bbox(), cfg.halfspace_scale_s)
        );
        assert_eq!(
            ctx.holds(figure.bbox(), FcTag::Below),
            relaxed_below(figure.bbox(), reference.bbox(), cfg.halfspace_scale_s)
        );
        assert!(relaxed_above(figure.bbox(), reference.bbox(), cfg.halfspace_scale_s));
    }

    #[test]
    fn config_validation() {
        assert!(RelationConfig::default().validate().is_ok());
        let bad = RelationConfig {
            touch_eps: 0.0,
            ..RelationConfig::default()
        };
        assert!(matches!(
            bad.validate(),
            Err(RelationConfigError::NonPositive { field: "touch_eps", .. })
        ));
        let inverted = RelationConfig {
            closeness_t: 0.005,
            ..RelationConfig::default()
        };
        assert!(matches!(
            inverted.validate(),
            Err(RelationConfigError::ClosenessBelowTouch { .. })
        ));
    }

    #[test]
    fn strict_implies_relaxed_on_random_pairs() {
        let cfg = RelationConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut strict_hits = 0;
        for i in 0..300 {
            let a = solid(
                "a",
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.2..1.0),
                [
                    rng.gen_range(0.1..0.6),
                    rng.gen_range(0.1..0.6),
                    rng.gen_range(0.1..0.6),
                ],
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let b = solid(
                "b",
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(0.0..2.0),
                [
                    rng.gen_range(0.05..0.4),
                    rng.gen_range(0.05..0.4),
                    rng.gen_range(0.05..0.4),
                ],
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let frame = FrameOfReference::intrinsic(a.bbox());
            for tag in FoTag::ALL {
                let strict = directional_fo(&b, &a, &frame, tag, Strictness::Strict, &cfg);
                let relaxed = directional_fo(&b, &a, &frame, tag, Strictness::Relaxed, &cfg);
                assert!(!strict || relaxed, "pair {i} tag {}", tag.as_str());
                strict_hits += strict as u32;
            }
            // Strict east and strict west cannot co-hold: regions disjoint.
            let es = directional_fo(&b, &a, &frame, FoTag::East, Strictness::Strict, &cfg);
            let ws = directional_fo(&b, &a, &frame, FoTag::West, Strictness::Strict, &cfg);
            assert!(!(es && ws));
        }
        assert!(strict_hits > 0, "generator never produced a strict case");
    }
}
