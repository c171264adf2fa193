//! Commonsense predicates composed from the basic relations: Beside,
//! OnTopOf, LeansOn, AffixedOn, Inside, PartIn, Near.
//!
//! Every positive answer carries an audit trail naming the base relations
//! that fired, so emitted triples stay explainable and recheckable.

use crate::frames::FrameOfReference;
use crate::geometry::EPS_VOL;
use crate::relations::{
    completely_contains, directional_fc, intersection_region, intersects, is_close, relaxed_below,
    touches, FcTag, RelationConfig,
};
use crate::scene::{Scene, SceneObject};
use thiserror::Error;

/// A predicate answer plus the names of the base relations justifying it.
/// The audit is empty whenever `holds` is false.
#[derive(Debug, Clone, PartialEq)]
pub struct Audited {
    pub holds: bool,
    pub audit: Vec<String>,
}

impl Audited {
    fn no() -> Audited {
        Audited {
            holds: false,
            audit: Vec::new(),
        }
    }

    fn yes(audit: Vec<&str>) -> Audited {
        Audited {
            holds: true,
            audit: audit.into_iter().map(str::to_owned).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommonsenseError {
    /// Partial containment is undefined for disjoint objects; callers treat
    /// this as a false answer.
    #[error("objects do not intersect; partial containment is undefined")]
    NoIntersection,
}

/// Left of or right of, under the contextualised frame of `o1`.
pub fn beside(
    o2: &SceneObject,
    o1: &SceneObject,
    fc: &FrameOfReference,
    cfg: &RelationConfig,
) -> Audited {
    let left = directional_fc(o2, o1, fc, FcTag::LeftOf, cfg);
    let right = directional_fc(o2, o1, fc, FcTag::RightOf, cfg);
    match (left, right) {
        (true, true) => Audited::yes(vec!["LeftOf", "RightOf"]),
        (true, false) => Audited::yes(vec!["LeftOf"]),
        (false, true) => Audited::yes(vec!["RightOf"]),
        (false, false) => Audited::no(),
    }
}

/// Above with contact.
pub fn on_top_of(
    o2: &SceneObject,
    o1: &SceneObject,
    fc: &FrameOfReference,
    cfg: &RelationConfig,
) -> Audited {
    if directional_fc(o2, o1, fc, FcTag::Above, cfg) && touches(o2, o1, cfg) {
        Audited::yes(vec!["Above", "Touches"])
    } else {
        Audited::no()
    }
}

/// Candidate third objects: everything in the scene except the pair itself.
fn third_parties<'s>(
    scene: &'s Scene,
    o1: &SceneObject,
    o2: &SceneObject,
) -> impl Iterator<Item = &'s SceneObject> {
    let (id1, id2) = (o1.id().to_owned(), o2.id().to_owned());
    scene
        .objects()
        .iter()
        .filter(move |o| o.id() != id1 && o.id() != id2)
}

/// Side contact with the reference while some third object carries the
/// figure from below (the ladder-against-wall configuration).
pub fn leans_on(
    o2: &SceneObject,
    o1: &SceneObject,
    fc: &FrameOfReference,
    cfg: &RelationConfig,
    scene: &Scene,
) -> Audited {
    if !touches(o2, o1, cfg)
        || directional_fc(o2, o1, fc, FcTag::Above, cfg)
        || directional_fc(o2, o1, fc, FcTag::Below, cfg)
    {
        return Audited::no();
    }
    // Deterministic supporter choice: smallest id among all candidates.
    let supporter = third_parties(scene, o1, o2)
        .filter(|o3| {
            touches(o2, o3, cfg)
                && relaxed_below(o3.bbox(), o2.bbox(), cfg.halfspace_scale_s)
        })
        .min_by(|a, b| a.id().cmp(b.id()));
    match supporter {
        Some(o3) => Audited {
            holds: true,
            audit: vec!["Touches".to_owned(), format!("SupportedBy({})", o3.id())],
        },
        None => Audited::no(),
    }
}

/// Side contact with the reference and no other contact at all: the
/// reference is the sole support. A sufficient condition only; a figure with
/// extra contacts may still be physically affixed but is not reported.
pub fn affixed_on(
    o2: &SceneObject,
    o1: &SceneObject,
    fc: &FrameOfReference,
    cfg: &RelationConfig,
    scene: &Scene,
) -> Audited {
    if !touches(o2, o1, cfg) || directional_fc(o2, o1, fc, FcTag::Above, cfg) {
        return Audited::no();
    }
    let other_contact = third_parties(scene, o1, o2).any(|o3| touches(o3, o2, cfg));
    if other_contact {
        Audited::no()
    } else {
        Audited::yes(vec!["Touches", "sole-contact", "one-way-rule"])
    }
}

/// `o2` sits (almost) completely inside `o1`.
pub fn inside(o2: &SceneObject, o1: &SceneObject, cfg: &RelationConfig) -> Audited {
    if completely_contains(o1, o2, cfg) {
        Audited::yes(vec!["ComplCont"])
    } else {
        Audited::no()
    }
}

/// Partial containment of `o1` in `o2`, decided by which object owns less of
/// a thin shell grown around their intersection: the more submerged object
/// contributes less fresh volume just outside the overlap.
///
/// Errors with [`CommonsenseError::NoIntersection`] when the objects do not
/// overlap; callers treat that as false.
pub fn part_in(
    o1: &SceneObject,
    o2: &SceneObject,
    cfg: &RelationConfig,
) -> Result<Audited, CommonsenseError> {
    if !intersects(o1, o2) {
        return Err(CommonsenseError::NoIntersection);
    }
    let inter = intersection_region(o1, o2).ok_or(CommonsenseError::NoIntersection)?;
    let shell = inter.scaled_about_centroid(1.0 + cfg.adjacency_delta);
    let proxy = |o: &SceneObject| {
        let p = o.bbox().to_prism();
        shell.intersection_volume(&p) - inter.intersection_volume(&p)
    };
    // Congruent overlaps tie; EPS_VOL keeps the tie stable under rounding.
    if proxy(o1) + EPS_VOL < proxy(o2) {
        Ok(Audited::yes(vec!["Intersects", "shell-asymmetry"]))
    } else {
        Ok(Audited::no())
    }
}

/// Alias of closeness.
pub fn near(o1: &SceneObject, o2: &SceneObject, cfg: &RelationConfig) -> Audited {
    if is_close(o1, o2, cfg) {
        Audited::yes(vec!["IsClose"])
    } else {
        Audited::no()
    }
}
