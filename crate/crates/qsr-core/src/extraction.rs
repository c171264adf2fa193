//! Scene-level pipeline: pick references, prune to nearby smaller figures,
//! evaluate every applicable relation, and emit sorted figure-reference
//! triples.

use crate::commonsense::{affixed_on, beside, inside, leans_on, near, on_top_of, part_in};
use crate::config::EngineConfig;
use crate::frames::{contextualised_frame, viewpoint_or_fallback, RobotPose};
use crate::relations::{
    intersects, object_distance, touches, FcContext, FcTag, RelationConfig,
};
use crate::scene::{Scene, SceneObject};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Every relation kind the pipeline can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationName {
    Touches,
    Near,
    Intersects,
    Above,
    Below,
    LeftOf,
    RightOf,
    InFrontOf,
    Behind,
    Beside,
    OnTopOf,
    LeansOn,
    AffixedOn,
    Inside,
    PartIn,
}

impl RelationName {
    pub const ALL: [RelationName; 15] = [
        RelationName::Touches,
        RelationName::Near,
        RelationName::Intersects,
        RelationName::Above,
        RelationName::Below,
        RelationName::LeftOf,
        RelationName::RightOf,
        RelationName::InFrontOf,
        RelationName::Behind,
        RelationName::Beside,
        RelationName::OnTopOf,
        RelationName::LeansOn,
        RelationName::AffixedOn,
        RelationName::Inside,
        RelationName::PartIn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationName::Touches => "Touches",
            RelationName::Near => "Near",
            RelationName::Intersects => "Intersects",
            RelationName::Above => "Above",
            RelationName::Below => "Below",
            RelationName::LeftOf => "LeftOf",
            RelationName::RightOf => "RightOf",
            RelationName::InFrontOf => "InFrontOf",
            RelationName::Behind => "Behind",
            RelationName::Beside => "Beside",
            RelationName::OnTopOf => "OnTopOf",
            RelationName::LeansOn => "LeansOn",
            RelationName::AffixedOn => "AffixedOn",
            RelationName::Inside => "Inside",
            RelationName::PartIn => "PartIn",
        }
    }
}

impl fmt::Display for RelationName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown relation name: {0}")]
pub struct UnknownRelation(pub String);

impl FromStr for RelationName {
    type Err = UnknownRelation;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationName::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| UnknownRelation(s.to_owned()))
    }
}

/// Which frame family produced a triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameNote {
    Contextualised,
    Intrinsic,
    Global,
    /// Contextualised, but the viewpoint fell back to the robot heading
    /// because the reference sits on the robot's vertical axis.
    DegenerateViewpoint,
}

impl FrameNote {
    pub fn as_str(self) -> &'static str {
        match self {
            FrameNote::Contextualised => "contextualised",
            FrameNote::Intrinsic => "intrinsic",
            FrameNote::Global => "global",
            FrameNote::DegenerateViewpoint => "degenerate-viewpoint",
        }
    }
}

impl fmt::Display for FrameNote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown frame note: {0}")]
pub struct UnknownFrameNote(pub String);

impl FromStr for FrameNote {
    type Err = UnknownFrameNote;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            FrameNote::Contextualised,
            FrameNote::Intrinsic,
            FrameNote::Global,
            FrameNote::DegenerateViewpoint,
        ]
        .into_iter()
        .find(|n| n.as_str() == s)
        .ok_or_else(|| UnknownFrameNote(s.to_owned()))
    }
}

/// One extracted statement: figure stands in `relation` to reference.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationTriple {
    pub figure_id: String,
    pub relation: RelationName,
    pub reference_id: String,
    pub frame_note: FrameNote,
    /// Base relations that justified a composed relation; empty for base
    /// relations themselves.
    pub audit: Vec<String>,
}

impl RelationTriple {
    fn new(
        figure: &SceneObject,
        relation: RelationName,
        reference: &SceneObject,
        frame_note: FrameNote,
        audit: Vec<String>,
    ) -> Self {
        RelationTriple {
            figure_id: figure.id().to_owned(),
            relation,
            reference_id: reference.id().to_owned(),
            frame_note,
            audit,
        }
    }
}

/// References in evaluation order: planes first (largest volume first), then
/// solids by descending volume; ties break by id.
pub fn select_references(scene: &Scene) -> Vec<&SceneObject> {
    let mut refs: Vec<&SceneObject> = scene.objects().iter().collect();
    refs.sort_by(|a, b| {
        b.is_plane()
            .cmp(&a.is_plane())
            .then_with(|| {
                b.volume()
                    .partial_cmp(&a.volume())
                    .expect("volumes are finite")
            })
            .then_with(|| a.id().cmp(b.id()))
    });
    refs
}

/// Whether `figure` may be described relative to `reference`: solids only,
/// and smaller than the reference unless the reference is a plane. Equal
/// volumes break one way by id so a pair is never emitted in both
/// directions.
fn qualifies(figure: &SceneObject, reference: &SceneObject) -> bool {
    if figure.id() == reference.id() || figure.is_plane() {
        return false;
    }
    if reference.is_plane() {
        return true;
    }
    match figure
        .volume()
        .partial_cmp(&reference.volume())
        .expect("volumes are finite")
    {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => figure.id() > reference.id(),
        std::cmp::Ordering::Greater => false,
    }
}

/// All (figure, reference) pairs the pipeline will evaluate: qualifying and
/// within the pruning radius. Exposed so pruning behavior is testable.
pub fn candidate_pairs<'s>(
    scene: &'s Scene,
    cfg: &EngineConfig,
) -> Vec<(&'s SceneObject, &'s SceneObject)> {
    let prune = cfg.prune_threshold();
    let mut pairs = Vec::new();
    for reference in select_references(scene) {
        for figure in scene.objects() {
            if qualifies(figure, reference) && object_distance(figure, reference) <= prune {
                pairs.push((figure, reference));
            }
        }
    }
    pairs
}

/// Run the full pipeline for one scene under one robot pose. An empty scene
/// yields an empty list. Output is sorted by (reference, figure, relation)
/// and is deterministic for identical inputs.
pub fn extract_qsr(
    scene: &Scene,
    robot_pose: &RobotPose,
    cfg: &EngineConfig,
) -> Vec<RelationTriple> {
    let rel_cfg = cfg.relation();
    let prune = cfg.prune_threshold();
    let mut triples = Vec::new();

    for reference in select_references(scene) {
        let figures: Vec<&SceneObject> = scene
            .objects()
            .iter()
            .filter(|f| qualifies(f, reference) && object_distance(f, reference) <= prune)
            .collect();
        if figures.is_empty() {
            continue;
        }
        let (viewpoint, degenerate) =
            viewpoint_or_fallback(robot_pose, reference.bbox().center());
        let fc = contextualised_frame(reference.bbox().center(), &viewpoint);
        let ctx = FcContext::new(reference.bbox(), &fc, &rel_cfg);
        let lateral_note = if degenerate {
            FrameNote::DegenerateViewpoint
        } else {
            FrameNote::Contextualised
        };

        for figure in figures {
            emit_pair(
                &mut triples,
                figure,
                reference,
                &ctx,
                lateral_note,
                scene,
                &rel_cfg,
            );
        }
    }

    triples.sort_by(|a, b| {
        (&a.reference_id, &a.figure_id, a.relation.as_str()).cmp(&(
            &b.reference_id,
            &b.figure_id,
            b.relation.as_str(),
        ))
    });
    triples
}

fn emit_pair(
    out: &mut Vec<RelationTriple>,
    figure: &SceneObject,
    reference: &SceneObject,
    ctx: &FcContext,
    lateral_note: FrameNote,
    scene: &Scene,
    cfg: &RelationConfig,
) {
    let fc = ctx.fc();
    let mut push = |relation, note, audit| {
        out.push(RelationTriple::new(figure, relation, reference, note, audit));
    };

    if touches(figure, reference, cfg) {
        push(RelationName::Touches, FrameNote::Global, Vec::new());
    }
    if intersects(figure, reference) {
        push(RelationName::Intersects, FrameNote::Global, Vec::new());
    }
    let near_res = near(figure, reference, cfg);
    if near_res.holds {
        push(RelationName::Near, FrameNote::Global, near_res.audit);
    }

    for tag in FcTag::ALL {
        if ctx.holds(figure.bbox(), tag) {
            let (relation, note) = match tag {
                FcTag::Above => (RelationName::Above, FrameNote::Intrinsic),
                FcTag::Below => (RelationName::Below, FrameNote::Intrinsic),
                FcTag::LeftOf => (RelationName::LeftOf, lateral_note),
                FcTag::RightOf => (RelationName::RightOf, lateral_note),
                FcTag::InFrontOf => (RelationName::InFrontOf, lateral_note),
                FcTag::Behind => (RelationName::Behind, lateral_note),
            };
            push(relation, note, Vec::new());
        }
    }

    let beside_res = beside(figure, reference, fc, cfg);
    if beside_res.holds {
        push(RelationName::Beside, lateral_note, beside_res.audit);
    }
    let on_top = on_top_of(figure, reference, fc, cfg);
    if on_top.holds {
        push(RelationName::OnTopOf, FrameNote::Intrinsic, on_top.audit);
    }
    let leaning = leans_on(figure, reference, fc, cfg, scene);
    if leaning.holds {
        push(RelationName::LeansOn, FrameNote::Intrinsic, leaning.audit);
    }
    let affixed = affixed_on(figure, reference, fc, cfg, scene);
    if affixed.holds {
        push(RelationName::AffixedOn, FrameNote::Intrinsic, affixed.audit);
    }
    let inside_res = inside(figure, reference, cfg);
    if inside_res.holds {
        push(RelationName::Inside, FrameNote::Global, inside_res.audit);
    }
    // Disjoint objects simply are not partially contained.
    if let Ok(part) = part_in(figure, reference, cfg) {
        if part.holds {
            push(RelationName::PartIn, FrameNote::Global, part.audit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{OrientedBox, Point3};
    use crate::scene::{Label, SurfaceKind};

    fn solid(id: &str, c: [f64; 3], h: [f64; 3]) -> SceneObject {
        SceneObject::solid(id, OrientedBox::new(Point3::new(c[0], c[1], c[2]), h, 0.0))
    }

    fn plane(id: &str, kind: SurfaceKind, c: [f64; 3], h: [f64; 3]) -> SceneObject {
        SceneObject::new(
            id,
            vec![Label {
                name: id.to_owned(),
                confidence: 1.0,
            }],
            kind,
            OrientedBox::new(Point3::new(c[0], c[1], c[2]), h, 0.0),
        )
    }

    fn pose() -> RobotPose {
        RobotPose::new(Point3::new(0.0, -3.0, 0.0), std::f64::consts::FRAC_PI_2)
    }

    #[test]
    fn empty_scene_yields_nothing() {
        let scene = Scene::new(pose(), Vec::new());
        assert!(extract_qsr(&scene, &pose(), &EngineConfig::default()).is_empty());
    }

    #[test]
    fn references_planes_first_then_volume_then_id() {
        let wall = plane("wall", SurfaceKind::Wall, [0.0, 3.0, 1.0], [2.0, 0.01, 1.0]);
        let desk = solid("desk", [0.0, 0.0, 0.4], [0.8, 0.4, 0.4]); // 1.024 m3
        let mug = solid("mug", [0.0, 0.0, 0.9], [0.05, 0.05, 0.06]);
        let scene = Scene::new(pose(), vec![mug.clone(), desk.clone(), wall.clone()]);
        let refs: Vec<&str> = select_references(&scene).iter().map(|o| o.id()).collect();
        assert_eq!(refs, ["wall", "desk", "mug"]);

        let twin_a = solid("a", [0.0, 0.0, 0.5], [0.3, 0.3, 0.3]);
        let twin_b = solid("b", [1.0, 0.0, 0.5], [0.3, 0.3, 0.3]);
        let twins = Scene::new(pose(), vec![twin_b.clone(), twin_a.clone()]);
        let refs: Vec<&str> = select_references(&twins).iter().map(|o| o.id()).collect();
        assert_eq!(refs, ["a", "b"]);
    }

    #[test]
    fn equal_volume_pair_is_emitted_one_way() {
        let a = solid("a", [0.0, 0.0, 0.5], [0.3, 0.3, 0.3]);
        let b = solid("b", [0.7, 0.0, 0.5], [0.3, 0.3, 0.3]);
        let scene = Scene::new(pose(), vec![a, b]);
        let pairs = candidate_pairs(&scene, &EngineConfig::default());
        assert_eq!(pairs.len(), 1);
        // The larger id is the figure.
        assert_eq!(pairs[0].0.id(), "b");
        assert_eq!(pairs[0].1.id(), "a");
    }

    #[test]
    fn distant_pairs_are_pruned() {
        let a = solid("a", [0.0, 0.0, 0.5], [0.3, 0.3, 0.3]);
        let b = solid("small", [5.0, 0.0, 0.5], [0.2, 0.2, 0.2]);
        let scene = Scene::new(pose(), vec![a, b]);
        assert!(candidate_pairs(&scene, &EngineConfig::default()).is_empty());
        assert!(extract_qsr(&scene, &pose(), &EngineConfig::default()).is_empty());
    }

    #[test]
    fn pruning_radius_is_configurable() {
        let a = solid("a", [0.0, 0.0, 0.5], [0.3, 0.3, 0.3]);
        let b = solid("small", [2.0, 0.0, 0.5], [0.2, 0.2, 0.2]); // gap 1.5
        let scene = Scene::new(pose(), vec![a, b]);
        let mut cfg = EngineConfig::default();
        assert!(candidate_pairs(&scene, &cfg).is_empty());
        cfg.prune_t = Some(2.0);
        assert_eq!(candidate_pairs(&scene, &cfg).len(), 1);
    }

    #[test]
    fn planes_are_never_figures() {
        let floor = plane("floor", SurfaceKind::Floor, [0.0, 0.0, -0.01], [5.0, 5.0, 0.01]);
        let wall = plane("wall", SurfaceKind::Wall, [0.0, 2.0, 1.25], [2.0, 0.01, 1.25]);
        let cup = solid("cup", [0.0, 1.8, 0.06], [0.05, 0.05, 0.06]);
        let scene = Scene::new(pose(), vec![floor, wall, cup]);
        let triples = extract_qsr(&scene, &pose(), &EngineConfig::default());
        assert!(!triples.is_empty());
        for t in &triples {
            assert_eq!(t.figure_id, "cup", "{t:?}");
        }
    }

    #[test]
    fn book_on_desk_triples() {
        let desk = solid("desk", [0.0, 0.0, 0.5], [1.0, 1.0, 0.5]);
        let book = solid("book", [0.0, 0.0, 1.1], [0.2, 0.3, 0.1]);
        let scene = Scene::new(pose(), vec![desk, book]);
        let triples = extract_qsr(&scene, &pose(), &EngineConfig::default());
        let names: Vec<(&str, RelationName, &str)> = triples
            .iter()
            .map(|t| (t.figure_id.as_str(), t.relation, t.reference_id.as_str()))
            .collect();
        for expected in [
            ("book", RelationName::Above, "desk"),
            ("book", RelationName::OnTopOf, "desk"),
            ("book", RelationName::Touches, "desk"),
            ("book", RelationName::Near, "desk"),
        ] {
            assert!(names.contains(&expected), "missing {expected:?} in {names:?}");
        }
        assert!(!names.contains(&("desk", RelationName::Below, "book")));
        let on_top = triples
            .iter()
            .find(|t| t.relation == RelationName::OnTopOf)
            .unwrap();
        assert_eq!(on_top.audit, ["Above", "Touches"]);
        assert_eq!(on_top.frame_note, FrameNote::Intrinsic);
    }

    #[test]
    fn output_is_sorted_and_deterministic() {
        let desk = solid("desk", [0.0, 0.0, 0.5], [1.0, 1.0, 0.5]);
        let book = solid("book", [0.0, 0.0, 1.1], [0.2, 0.3, 0.1]);
        let mug = solid("mug", [0.5, 0.5, 1.06], [0.05, 0.05, 0.06]);
        let scene = Scene::new(pose(), vec![desk, book, mug]);
        let a = extract_qsr(&scene, &pose(), &EngineConfig::default());
        let b = extract_qsr(&scene, &pose(), &EngineConfig::default());
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_by(|x, y| {
            (&x.reference_id, &x.figure_id, x.relation.as_str()).cmp(&(
                &y.reference_id,
                &y.figure_id,
                y.relation.as_str(),
            ))
        });
        assert_eq!(a, sorted);
    }

    #[test]
    fn degenerate_viewpoint_is_flagged() {
        let tower = solid("tower", [0.0, 0.0, 1.0], [0.4, 0.4, 1.0]);
        let block = solid("block", [0.9, 0.0, 0.3], [0.3, 0.3, 0.3]);
        let under_tower = RobotPose::new(Point3::new(0.0, 0.0, 0.0), 0.0);
        let scene = Scene::new(under_tower, vec![tower, block]);
        let triples = extract_qsr(&scene, &under_tower, &EngineConfig::default());
        let lateral: Vec<&RelationTriple> = triples
            .iter()
            .filter(|t| {
                matches!(
                    t.relation,
                    RelationName::LeftOf
                        | RelationName::RightOf
                        | RelationName::InFrontOf
                        | RelationName::Behind
                        | RelationName::Beside
                )
            })
            .collect();
        assert!(!lateral.is_empty());
        for t in lateral {
            assert_eq!(t.frame_note, FrameNote::DegenerateViewpoint, "{t:?}");
        }
    }

    #[test]
    fn relation_name_roundtrip() {
        for r in RelationName::ALL {
            assert_eq!(r.as_str().parse::<RelationName>().unwrap(), r);
        }
        assert!("Sideways".parse::<RelationName>().is_err());
        for n in [
            FrameNote::Contextualised,
            FrameNote::Intrinsic,
            FrameNote::Global,
            FrameNote::DegenerateViewpoint,
        ] {
            assert_eq!(n.as_str().parse::<FrameNote>().unwrap(), n);
        }
    }
}
