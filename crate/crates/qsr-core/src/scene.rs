//! Scene model: labeled objects with fitted boxes and the observing robot.

use crate::frames::RobotPose;
use crate::geometry::{rotate_box_about_axis, OrientedBox, Point3};

/// A class hypothesis for an object.
#[derive(Debug, Clone, PartialEq)]
pub struct Label {
    pub name: String,
    pub confidence: f64,
}

/// Whether an object is an ordinary solid or an inflated planar surface.
/// Surfaces always act as references and never as figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    Solid,
    Wall,
    Floor,
}

impl SurfaceKind {
    pub fn is_plane(self) -> bool {
        matches!(self, SurfaceKind::Wall | SurfaceKind::Floor)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SurfaceKind::Solid => "solid",
            SurfaceKind::Wall => "wall",
            SurfaceKind::Floor => "floor",
        }
    }
}

/// One object in the map: identifier, class hypotheses, and a fitted box.
/// Point-cloud and surface objects are reduced to boxes at load time; all
/// relation evaluation happens on the boxes.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneObject {
    id: String,
    labels: Vec<Label>,
    kind: SurfaceKind,
    bbox: OrientedBox,
}

impl SceneObject {
    pub fn new(
        id: impl Into<String>,
        labels: Vec<Label>,
        kind: SurfaceKind,
        bbox: OrientedBox,
    ) -> Self {
        SceneObject {
            id: id.into(),
            labels,
            kind,
            bbox,
        }
    }

    /// Convenience for tests and generated scenes: one label, full
    /// confidence, solid kind.
    pub fn solid(id: impl Into<String>, bbox: OrientedBox) -> Self {
        let id = id.into();
        let labels = vec![Label {
            name: id.clone(),
            confidence: 1.0,
        }];
        SceneObject::new(id, labels, SurfaceKind::Solid, bbox)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn bbox(&self) -> &OrientedBox {
        &self.bbox
    }

    pub fn volume(&self) -> f64 {
        self.bbox.volume()
    }

    pub fn is_plane(&self) -> bool {
        self.kind.is_plane()
    }

    /// Highest-confidence label, if any.
    pub fn primary_label(&self) -> Option<&Label> {
        self.labels.first()
    }

    pub fn with_bbox(&self, bbox: OrientedBox) -> SceneObject {
        SceneObject {
            bbox,
            ..self.clone()
        }
    }
}

/// An immutable scene snapshot: the robot pose plus all mapped objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    robot: RobotPose,
    objects: Vec<SceneObject>,
}

impl Scene {
    /// Ids must be unique; the loader validates user data, generators and
    /// tests construct directly.
    pub fn new(robot: RobotPose, objects: Vec<SceneObject>) -> Self {
        debug_assert!(
            {
                let mut ids: Vec<&str> = objects.iter().map(|o| o.id()).collect();
                ids.sort_unstable();
                ids.windows(2).all(|w| w[0] != w[1])
            },
            "duplicate object ids"
        );
        Scene { robot, objects }
    }

    pub fn robot(&self) -> &RobotPose {
        &self.robot
    }

    pub fn objects(&self) -> &[SceneObject] {
        &self.objects
    }

    pub fn object(&self, id: &str) -> Option<&SceneObject> {
        self.objects.iter().find(|o| o.id() == id)
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// The same scene observed after a rigid motion of the world: yaw about
    /// the global origin followed by a translation, applied to every object
    /// and to the robot. Relation answers are invariant under this map.
    pub fn apply_rigid_motion(&self, theta: f64, translation: Point3) -> Scene {
        let origin = Point3::new(0.0, 0.0, 0.0);
        let robot = RobotPose::new(
            self.robot
                .position()
                .rotated_about_z(origin, theta)
                .add(translation),
            self.robot.heading() + theta,
        );
        let objects = self
            .objects
            .iter()
            .map(|o| o.with_bbox(rotate_box_about_axis(o.bbox(), origin, theta).translated(translation)))
            .collect();
        Scene { robot, objects }
    }
}
