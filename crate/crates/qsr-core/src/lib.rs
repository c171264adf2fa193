//! Qualitative spatial relation (QSR) engine for 3D scenes.
//!
//! Given a scene of labeled objects (boxes or point clouds), planar surfaces
//! (walls/floors), and a robot pose, the engine computes viewpoint-aware
//! qualitative and commonsense spatial relations and emits them as
//! figure-reference triples such as `(fire_extinguisher2, LeftOf, radiator)`.
//!
//! Module map:
//! - [`geometry`]: points, convex hulls, minimum-area oriented rectangles,
//!   yaw-only oriented boxes, prisms, distance and intersection volume.
//! - [`frames`]: frames of reference (global, robot, viewpoint, intrinsic,
//!   contextualised) and the contextualised bounding box (CBB).
//! - [`halfspaces`]: finite prism halfspaces extruded from box faces.
//! - [`scene`]: scene domain types (objects, labels, surface kinds).
//! - [`relations`]: metric, topological, and directional relations.
//! - [`commonsense`]: composed predicates (Beside, OnTopOf, LeansOn, ...).
//! - [`extraction`]: scene-level pipeline producing sorted relation triples.
//! - [`config`]: engine thresholds and their file format.
//! - [`scene_io`]: scene file parsing/validation and triple serialization.
//! - [`oracle`]: independent sampling-based reference implementation used to
//!   cross-check the analytic engine.
//!
//! All geometry is "2.5D": boxes have arbitrary yaw about the global Z axis
//! and bases parallel to the XY plane. Coordinates are meters, angles radians.

pub mod commonsense;
pub mod config;
pub mod extraction;
pub mod frames;
pub mod geometry;
pub mod halfspaces;
pub mod oracle;
pub mod relations;
pub mod scene;
pub mod scene_io;

pub use config::EngineConfig;
pub use extraction::{extract_qsr, select_references, RelationName, RelationTriple};
pub use frames::{FrameOfReference, RobotPose};
pub use geometry::{OrientedBox, Point2, Point3};
pub use scene::{Scene, SceneObject, SurfaceKind};
