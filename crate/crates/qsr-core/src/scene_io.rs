//! Scene file ingestion and triple serialization.
//!
//! Scenes are versioned JSON documents. Each object carries exactly one
//! geometry: a raw point cloud (fitted to a box at load time), a declared
//! box, or a planar surface polygon (inflated to a thin box of thickness
//! `plane_thickness_tau`). Unknown fields are rejected everywhere.

use crate::config::EngineConfig;
use crate::extraction::RelationTriple;
use crate::frames::RobotPose;
use crate::geometry::{fit_min_oriented_box, OrientedBox, Point3, DELTA_MIN};
use crate::scene::{Label, Scene, SceneObject, SurfaceKind};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("cannot read scene: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse scene: {0}")]
    Parse(String),
    #[error("invalid scene: {0}")]
    Validation(String),
    #[error("non-finite value: {0}")]
    Unit(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFileRaw {
    schema_version: u32,
    robot: RobotRaw,
    objects: Vec<ObjectRaw>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RobotRaw {
    x: f64,
    y: f64,
    z: f64,
    heading: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectRaw {
    id: String,
    #[serde(default)]
    labels: Vec<(String, f64)>,
    /// Role of a box/points object: "solid" (default), "wall", or "floor".
    /// Surface objects carry their kind inside `surface` instead.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<[f64; 3]>>,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    bbox: Option<BoxRaw>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    surface: Option<SurfaceRaw>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxRaw {
    center: [f64; 3],
    half_extents: [f64; 3],
    yaw: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceRaw {
    kind: String,
    polygon: Vec<[f64; 3]>,
}

pub fn load_scene(path: &Path, cfg: &EngineConfig) -> Result<Scene, SceneError> {
    let text = std::fs::read_to_string(path)?;
    parse_scene(&text, cfg)
}

pub fn parse_scene(text: &str, cfg: &EngineConfig) -> Result<Scene, SceneError> {
    let raw: SceneFileRaw =
        serde_json::from_str(text).map_err(|e| SceneError::Parse(e.to_string()))?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(SceneError::Validation(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            raw.schema_version
        )));
    }
    let robot = validate_robot(&raw.robot)?;
    let mut seen = HashSet::new();
    let mut objects = Vec::with_capacity(raw.objects.len());
    for obj in &raw.objects {
        validate_id(&obj.id)?;
        if !seen.insert(obj.id.clone()) {
            return Err(SceneError::Validation(format!(
                "duplicate object id {:?}",
                obj.id
            )));
        }
        objects.push(build_object(obj, cfg)?);
    }
    Ok(Scene::new(robot, objects))
}

fn validate_robot(r: &RobotRaw) -> Result<RobotPose, SceneError> {
    for (name, v) in [("x", r.x), ("y", r.y), ("z", r.z), ("heading", r.heading)] {
        if !v.is_finite() {
            return Err(SceneError::Unit(format!("robot.{name} = {v}")));
        }
    }
    Ok(RobotPose::new(Point3::new(r.x, r.y, r.z), r.heading))
}

/// Ids must survive the tab-separated, comma-joined triple line format.
fn validate_id(id: &str) -> Result<(), SceneError> {
    if id.is_empty() {
        return Err(SceneError::Validation("empty object id".to_owned()));
    }
    if id.chars().any(|c| c.is_whitespace() || c == ',') {
        return Err(SceneError::Validation(format!(
            "object id {id:?} contains whitespace or a comma"
        )));
    }
    Ok(())
}

fn validate_labels(id: &str, labels: &[(String, f64)]) -> Result<Vec<Label>, SceneError> {
    if labels.len() > 5 {
        return Err(SceneError::Validation(format!(
            "object {id}: more than 5 labels"
        )));
    }
    let mut out = Vec::with_capacity(labels.len());
    let mut prev = f64::INFINITY;
    for (name, conf) in labels {
        if !conf.is_finite() {
            return Err(SceneError::Unit(format!(
                "object {id}: label {name:?} confidence {conf}"
            )));
        }
        if name.is_empty() {
            return Err(SceneError::Validation(format!("object {id}: empty label")));
        }
        if !(0.0..=1.0).contains(conf) {
            return Err(SceneError::Validation(format!(
                "object {id}: label {name:?} confidence {conf} outside [0, 1]"
            )));
        }
        if *conf > prev {
            return Err(SceneError::Validation(format!(
                "object {id}: label confidences must be non-increasing"
            )));
        }
        prev = *conf;
        out.push(Label {
            name: name.clone(),
            confidence: *conf,
        });
    }
    Ok(out)
}

fn parse_kind(id: &str, kind: &str) -> Result<SurfaceKind, SceneError> {
    match kind {
        "solid" => Ok(SurfaceKind::Solid),
        "wall" => Ok(SurfaceKind::Wall),
        "floor" => Ok(SurfaceKind::Floor),
        other => Err(SceneError::Validation(format!(
            "object {id}: unknown kind {other:?}"
        ))),
    }
}

fn build_object(obj: &ObjectRaw, cfg: &EngineConfig) -> Result<SceneObject, SceneError> {
    let id = &obj.id;
    let labels = validate_labels(id, &obj.labels)?;
    let declared = obj.points.is_some() as u8 + obj.bbox.is_some() as u8 + obj.surface.is_some() as u8;
    if declared != 1 {
        return Err(SceneError::Validation(format!(
            "object {id}: exactly one of points/box/surface required, found {declared}"
        )));
    }
    if obj.surface.is_some() && obj.kind.is_some() {
        return Err(SceneError::Validation(format!(
            "object {id}: kind belongs inside surface for surface objects"
        )));
    }

    let (kind, bbox) = if let Some(points) = &obj.points {
        let kind = match &obj.kind {
            Some(k) => parse_kind(id, k)?,
            None => SurfaceKind::Solid,
        };
        (kind, fit_points(id, points)?)
    } else if let Some(b) = &obj.bbox {
        let kind = match &obj.kind {
            Some(k) => parse_kind(id, k)?,
            None => SurfaceKind::Solid,
        };
        (kind, declared_box(id, b)?)
    } else {
        let s = obj.surface.as_ref().expect("exactly one geometry");
        build_surface(id, s, cfg)?
    };
    Ok(SceneObject::new(id.clone(), labels, kind, bbox))
}

fn finite_points(id: &str, pts: &[[f64; 3]]) -> Result<Vec<Point3>, SceneError> {
    pts.iter()
        .map(|p| {
            let pt = Point3::new(p[0], p[1], p[2]);
            if pt.is_finite() {
                Ok(pt)
            } else {
                Err(SceneError::Unit(format!("object {id}: point {p:?}")))
            }
        })
        .collect()
}

fn fit_points(id: &str, pts: &[[f64; 3]]) -> Result<OrientedBox, SceneError> {
    if pts.is_empty() {
        return Err(SceneError::Validation(format!(
            "object {id}: empty point cloud"
        )));
    }
    Ok(fit_min_oriented_box(&finite_points(id, pts)?))
}

fn declared_box(id: &str, b: &BoxRaw) -> Result<OrientedBox, SceneError> {
    let all = b.center.iter().chain(b.half_extents.iter()).chain([&b.yaw]);
    for v in all {
        if !v.is_finite() {
            return Err(SceneError::Unit(format!("object {id}: box field {v}")));
        }
    }
    if b.half_extents.iter().any(|h| *h < DELTA_MIN) {
        return Err(SceneError::Validation(format!(
            "object {id}: half extents must be at least {DELTA_MIN}"
        )));
    }
    Ok(OrientedBox::new(
        Point3::new(b.center[0], b.center[1], b.center[2]),
        b.half_extents,
        b.yaw,
    ))
}

/// Unit normal of the polygon (Newell's method) or an error for degenerate
/// rings.
fn polygon_normal(id: &str, pts: &[Point3]) -> Result<(f64, f64, f64), SceneError> {
    let (mut nx, mut ny, mut nz) = (0.0, 0.0, 0.0);
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        nx += (a.y - b.y) * (a.z + b.z);
        ny += (a.z - b.z) * (a.x + b.x);
        nz += (a.x - b.x) * (a.y + b.y);
    }
    let norm = (nx * nx + ny * ny + nz * nz).sqrt();
    if norm < 1e-12 {
        return Err(SceneError::Validation(format!(
            "object {id}: degenerate surface polygon"
        )));
    }
    Ok((nx / norm, ny / norm, nz / norm))
}

fn build_surface(
    id: &str,
    s: &SurfaceRaw,
    cfg: &EngineConfig,
) -> Result<(SurfaceKind, OrientedBox), SceneError> {
    let declared = match s.kind.as_str() {
        "wall" => SurfaceKind::Wall,
        "floor" => SurfaceKind::Floor,
        other => {
            return Err(SceneError::Validation(format!(
                "object {id}: surface kind must be wall or floor, got {other:?}"
            )))
        }
    };
    if s.polygon.len() < 3 {
        return Err(SceneError::Validation(format!(
            "object {id}: surface polygon needs at least 3 vertices"
        )));
    }
    let pts = finite_points(id, &s.polygon)?;
    let tau = cfg.plane_thickness_tau;

    let (nx, ny, nz) = polygon_normal(id, &pts)?;
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.y).sum::<f64>() / n;
    let cz = pts.iter().map(|p| p.z).sum::<f64>() / n;
    let deviation = pts
        .iter()
        .map(|p| ((p.x - cx) * nx + (p.y - cy) * ny + (p.z - cz) * nz).abs())
        .fold(0.0, f64::max);
    if deviation > tau {
        return Err(SceneError::Validation(format!(
            "object {id}: surface polygon is not planar (deviation {deviation:.4} > {tau})"
        )));
    }

    // Classification by normal direction, with a rejected band between.
    let tilt = nz.abs();
    let computed = if tilt > 15f64.to_radians().cos() {
        SurfaceKind::Floor
    } else if tilt < 15f64.to_radians().sin() {
        SurfaceKind::Wall
    } else {
        return Err(SceneError::Validation(format!(
            "object {id}: surface normal is neither vertical nor horizontal (|nz| = {tilt:.3})"
        )));
    };
    if computed != declared {
        return Err(SceneError::Validation(format!(
            "object {id}: declared {} but the normal says {}",
            declared.as_str(),
            computed.as_str()
        )));
    }

    // Inflate to thickness tau so the plane joins box arithmetic.
    let fitted = fit_min_oriented_box(&pts);
    let half = fitted.half_extents().map(|h| h.max(tau / 2.0));
    Ok((
        declared,
        OrientedBox::new(fitted.center(), half, fitted.yaw()),
    ))
}

/// Serialize a scene back to the file format: every object in fitted-box
/// form with its kind preserved.
pub fn scene_to_json(scene: &Scene) -> String {
    let raw = SceneFileRaw {
        schema_version: SCHEMA_VERSION,
        robot: RobotRaw {
            x: scene.robot().position().x,
            y: scene.robot().position().y,
            z: scene.robot().position().z,
            heading: scene.robot().heading(),
        },
        objects: scene
            .objects()
            .iter()
            .map(|o| ObjectRaw {
                id: o.id().to_owned(),
                labels: o
                    .labels()
                    .iter()
                    .map(|l| (l.name.clone(), l.confidence))
                    .collect(),
                kind: match o.kind() {
                    SurfaceKind::Solid => None,
                    k => Some(k.as_str().to_owned()),
                },
                points: None,
                bbox: Some(BoxRaw {
                    center: [
                        o.bbox().center().x,
                        o.bbox().center().y,
                        o.bbox().center().z,
                    ],
                    half_extents: o.bbox().half_extents(),
                    yaw: o.bbox().yaw(),
                }),
                surface: None,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("scene serialization cannot fail")
}

/// Output layout for triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleFormat {
    /// One tab-separated record per line; parses back losslessly.
    Lines,
    /// Aligned human-readable table with a header.
    Table,
}

impl FromStr for TripleFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lines" => Ok(TripleFormat::Lines),
            "table" => Ok(TripleFormat::Table),
            other => Err(format!("unknown format {other:?} (expected lines or table)")),
        }
    }
}

fn sorted(triples: &[RelationTriple]) -> Vec<&RelationTriple> {
    let mut v: Vec<&RelationTriple> = triples.iter().collect();
    v.sort_by(|a, b| {
        (&a.reference_id, &a.figure_id, a.relation.as_str()).cmp(&(
            &b.reference_id,
            &b.figure_id,
            b.relation.as_str(),
        ))
    });
    v
}

fn audit_field(audit: &[String]) -> String {
    if audit.is_empty() {
        "-".to_owned()
    } else {
        audit.join(",")
    }
}

/// Render triples in the chosen format, sorted by (reference, figure,
/// relation).
pub fn format_triples(triples: &[RelationTriple], format: TripleFormat) -> String {
    let rows = sorted(triples);
    match format {
        TripleFormat::Lines => {
            let mut out = String::new();
            for t in rows {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    t.figure_id,
                    t.relation,
                    t.reference_id,
                    t.frame_note,
                    audit_field(&t.audit)
                ));
            }
            out
        }
        TripleFormat::Table => {
            let header = ["FIGURE", "RELATION", "REFERENCE", "FRAME", "AUDIT"];
            let cells: Vec<[String; 5]> = rows
                .iter()
                .map(|t| {
                    [
                        t.figure_id.clone(),
                        t.relation.to_string(),
                        t.reference_id.clone(),
                        t.frame_note.to_string(),
                        audit_field(&t.audit),
                    ]
                })
                .collect();
            let mut widths = header.map(str::len);
            for row in &cells {
                for (w, cell) in widths.iter_mut().zip(row.iter()) {
                    *w = (*w).max(cell.len());
                }
            }
            let mut out = String::new();
            let render = |row: [&str; 5], out: &mut String| {
                for (i, (cell, w)) in row.iter().zip(widths.iter()).enumerate() {
                    if i > 0 {
                        out.push_str("  ");
                    }
                    out.push_str(cell);
                    if i < 4 {
                        for _ in cell.len()..*w {
                            out.push(' ');
                        }
                    }
                }
                out.push('\n');
            };
            render(header, &mut out);
            for row in &cells {
                render(
                    [&row[0], &row[1], &row[2], &row[3], &row[4]].map(String::as_str),
                    &mut out,
                );
            }
            out
        }
    }
}

/// Write triples to a file; see [`format_triples`].
pub fn write_triples(
    triples: &[RelationTriple],
    path: &Path,
    format: TripleFormat,
) -> Result<(), SceneError> {
    std::fs::write(path, format_triples(triples, format))?;
    Ok(())
}

/// Parse the `lines` format back into triples.
pub fn parse_triples(text: &str) -> Result<Vec<RelationTriple>, SceneError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(SceneError::Parse(format!(
                "line {}: expected 5 tab-separated fields, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        let relation = fields[1]
            .parse()
            .map_err(|e| SceneError::Parse(format!("line {}: {e}", lineno + 1)))?;
        let frame_note = fields[3]
            .parse()
            .map_err(|e| SceneError::Parse(format!("line {}: {e}", lineno + 1)))?;
        let audit = if fields[4] == "-" {
            Vec::new()
        } else {
            fields[4].split(',').map(str::to_owned).collect()
        };
        out.push(RelationTriple {
            figure_id: fields[0].to_owned(),
            relation,
            reference_id: fields[2].to_owned(),
            frame_note,
            audit,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extraction::{FrameNote, RelationName};
    use crate::geometry::EPS_GEOM;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    fn minimal(objects: &str) -> String {
        format!(
            r#"{{"schema_version": 1,
                "robot": {{"x": 0.0, "y": 0.0, "z": 0.0, "heading": 0.0}},
                "objects": [{objects}]}}"#
        )
    }

    const BOX_OBJ: &str = r#"{"id": "mug", "labels": [["mug", 0.9], ["cup", 0.1]],
        "box": {"center": [1.0, 2.0, 0.5], "half_extents": [0.05, 0.05, 0.06], "yaw": 0.3}}"#;

    #[test]
    fn minimal_box_scene_loads() {
        let scene = parse_scene(&minimal(BOX_OBJ), &cfg()).unwrap();
        assert_eq!(scene.objects().len(), 1);
        let mug = scene.object("mug").unwrap();
        assert_eq!(mug.kind(), SurfaceKind::Solid);
        assert_eq!(mug.labels().len(), 2);
        assert!((mug.bbox().yaw() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let text = minimal(&format!("{BOX_OBJ}, {BOX_OBJ}"));
        assert!(matches!(
            parse_scene(&text, &cfg()),
            Err(SceneError::Validation(_))
        ));
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = minimal(r#"{"id": "a", "bbox": {"center": [0,0,0]}}"#);
        assert!(matches!(parse_scene(&text, &cfg()), Err(SceneError::Parse(_))));
    }

    #[test]
    fn exactly_one_geometry_required() {
        let none = minimal(r#"{"id": "a", "labels": []}"#);
        assert!(matches!(
            parse_scene(&none, &cfg()),
            Err(SceneError::Validation(_))
        ));
        let both = minimal(
            r#"{"id": "a",
                "points": [[0,0,0]],
                "box": {"center": [0,0,0], "half_extents": [0.1,0.1,0.1], "yaw": 0}}"#,
        );
        assert!(matches!(
            parse_scene(&both, &cfg()),
            Err(SceneError::Validation(_))
        ));
    }

    #[test]
    fn corner_cloud_recovers_declared_box() {
        let b = OrientedBox::new(Point3::new(0.4, -0.2, 0.7), [0.3, 0.2, 0.25], 0.5);
        let pts: Vec<String> = b
            .corners()
            .iter()
            .map(|p| format!("[{}, {}, {}]", p.x, p.y, p.z))
            .collect();
        let text = minimal(&format!(
            r#"{{"id": "cloud", "points": [{}]}}"#,
            pts.join(", ")
        ));
        let scene = parse_scene(&text, &cfg()).unwrap();
        let fitted = scene.object("cloud").unwrap().bbox();
        for (p, q) in b.corners().iter().zip(fitted.corners().iter()) {
            // Same solid; corner order may differ, so match by distance.
            let ok = fitted.corners().iter().any(|r| p.dist(*r) < EPS_GEOM);
            assert!(ok, "corner {p:?} missing, got {q:?}");
        }
    }

    #[test]
    fn floor_surface_inflates_to_thin_box() {
        let text = minimal(
            r#"{"id": "floor", "labels": [["floor", 1.0]],
                "surface": {"kind": "floor",
                            "polygon": [[0,0,0],[6,0,0],[6,6,0],[0,6,0]]}}"#,
        );
        let scene = parse_scene(&text, &cfg()).unwrap();
        let floor = scene.object("floor").unwrap();
        assert_eq!(floor.kind(), SurfaceKind::Floor);
        let h = floor.bbox().half_extents();
        assert!((h[0] - 3.0).abs() < 1e-9);
        assert!((h[1] - 3.0).abs() < 1e-9);
        assert!((h[2] - 0.01).abs() < 1e-12); // tau / 2
        assert!(floor.bbox().center().z.abs() < 1e-12);
    }

    #[test]
    fn wall_surface_classified_by_normal() {
        let text = minimal(
            r#"{"id": "wall",
                "surface": {"kind": "wall",
                            "polygon": [[0,5,0],[6,5,0],[6,5,2.5],[0,5,2.5]]}}"#,
        );
        let scene = parse_scene(&text, &cfg()).unwrap();
        let wall = scene.object("wall").unwrap();
        assert_eq!(wall.kind(), SurfaceKind::Wall);
        let h = wall.bbox().half_extents();
        assert!((h[2] - 1.25).abs() < 1e-9);
        assert!(h.iter().any(|x| (x - 0.01).abs() < 1e-12));
    }

    #[test]
    fn slanted_or_mismatched_surfaces_rejected() {
        // 45-degree ramp: neither wall nor floor.
        let ramp = minimal(
            r#"{"id": "ramp",
                "surface": {"kind": "floor",
                            "polygon": [[0,0,0],[1,0,0],[1,1,1],[0,1,1]]}}"#,
        );
        assert!(matches!(
            parse_scene(&ramp, &cfg()),
            Err(SceneError::Validation(_))
        ));
        // Horizontal polygon declared as wall.
        let mismatch = minimal(
            r#"{"id": "notwall",
                "surface": {"kind": "wall",
                            "polygon": [[0,0,0],[1,0,0],[1,1,0],[0,1,0]]}}"#,
        );
        assert!(matches!(
            parse_scene(&mismatch, &cfg()),
            Err(SceneError::Validation(_))
        ));
        // Badly bent polygon.
        let bent = minimal(
            r#"{"id": "bent",
                "surface": {"kind": "floor",
                            "polygon": [[0,0,0],[2,0,0],[2,2,0.5],[0,2,0]]}}"#,
        );
        assert!(matches!(
            parse_scene(&bent, &cfg()),
            Err(SceneError::Validation(_))
        ));
    }

    #[test]
    fn label_invariants_enforced() {
        let too_many = minimal(
            r#"{"id": "a", "labels": [["a",0.9],["b",0.8],["c",0.7],["d",0.6],["e",0.5],["f",0.4]],
                "box": {"center": [0,0,0], "half_extents": [0.1,0.1,0.1], "yaw": 0}}"#,
        );
        assert!(parse_scene(&too_many, &cfg()).is_err());
        let out_of_range = minimal(
            r#"{"id": "a", "labels": [["a", 1.2]],
                "box": {"center": [0,0,0], "half_extents": [0.1,0.1,0.1], "yaw": 0}}"#,
        );
        assert!(parse_scene(&out_of_range, &cfg()).is_err());
        let increasing = minimal(
            r#"{"id": "a", "labels": [["a", 0.3], ["b", 0.9]],
                "box": {"center": [0,0,0], "half_extents": [0.1,0.1,0.1], "yaw": 0}}"#,
        );
        assert!(parse_scene(&increasing, &cfg()).is_err());
    }

    #[test]
    fn id_hygiene_enforced() {
        for bad in ["\"a b\"", "\"a,b\"", "\"\""] {
            let text = minimal(&format!(
                r#"{{"id": {bad}, "box": {{"center": [0,0,0], "half_extents": [0.1,0.1,0.1], "yaw": 0}}}}"#
            ));
            assert!(
                matches!(parse_scene(&text, &cfg()), Err(SceneError::Validation(_))),
                "{bad} accepted"
            );
        }
    }

    #[test]
    fn tiny_declared_boxes_rejected() {
        let text = minimal(
            r#"{"id": "a", "box": {"center": [0,0,0], "half_extents": [1e-9, 0.1, 0.1], "yaw": 0}}"#,
        );
        assert!(matches!(
            parse_scene(&text, &cfg()),
            Err(SceneError::Validation(_))
        ));
    }

    #[test]
    fn scene_roundtrips_through_json() {
        let text = minimal(&format!(
            "{BOX_OBJ}, {}",
            r#"{"id": "floor", "surface": {"kind": "floor",
                "polygon": [[0,0,0],[6,0,0],[6,6,0],[0,6,0]]}}"#
        ));
        let scene = parse_scene(&text, &cfg()).unwrap();
        let json = scene_to_json(&scene);
        let back = parse_scene(&json, &cfg()).unwrap();
        assert_eq!(scene.objects().len(), back.objects().len());
        for (a, b) in scene.objects().iter().zip(back.objects().iter()) {
            assert_eq!(a.id(), b.id());
            assert_eq!(a.kind(), b.kind());
            assert_eq!(a.bbox(), b.bbox());
        }
    }

    fn sample_triples() -> Vec<RelationTriple> {
        vec![
            RelationTriple {
                figure_id: "book".into(),
                relation: RelationName::OnTopOf,
                reference_id: "desk".into(),
                frame_note: FrameNote::Intrinsic,
                audit: vec!["Above".into(), "Touches".into()],
            },
            RelationTriple {
                figure_id: "mug".into(),
                relation: RelationName::LeftOf,
                reference_id: "book".into(),
                frame_note: FrameNote::Contextualised,
                audit: Vec::new(),
            },
        ]
    }

    #[test]
    fn lines_roundtrip_and_sorting() {
        let triples = sample_triples();
        let text = format_triples(&triples, TripleFormat::Lines);
        // Sorted by reference: book before desk.
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("mug\tLeftOf\tbook"));
        let parsed = parse_triples(&text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[1].audit, vec!["Above", "Touches"]);
        assert_eq!(parsed[0].audit, Vec::<String>::new());
        // Round-trip is stable.
        assert_eq!(format_triples(&parsed, TripleFormat::Lines), text);
    }

    #[test]
    fn empty_triples_serialize_to_empty() {
        assert_eq!(format_triples(&[], TripleFormat::Lines), "");
        assert!(parse_triples("").unwrap().is_empty());
    }

    #[test]
    fn table_format_has_header_and_alignment() {
        let text = format_triples(&sample_triples(), TripleFormat::Table);
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("FIGURE"));
        assert!(header.contains("RELATION"));
        for line in lines {
            assert!(!line.contains('\t'));
        }
    }

    #[test]
    fn malformed_triple_lines_are_rejected() {
        assert!(parse_triples("a\tTouches\tb\n").is_err());
        assert!(parse_triples("a\tSideways\tb\tglobal\t-\n").is_err());
        assert!(parse_triples("a\tTouches\tb\televen\t-\n").is_err());
    }
}
