//! Command-line surface of the QSR engine.
//!
//! Exit codes: 0 success, 1 validation or agreement failure, 2 internal
//! error (I/O, bad invocation). Identical invocations produce identical
//! output; every random path is seeded.

use clap::{Args, Parser, Subcommand};
use qsr_core::config::{load_config, ConfigError, EngineConfig};
use qsr_core::extraction::{extract_qsr, select_references, RelationName};
use qsr_core::frames::{contextualised_frame, viewpoint_or_fallback, FrameOfReference};
use qsr_core::halfspaces::halfspaces_of;
use qsr_core::oracle::agreement_check;
use qsr_core::relations::FcTag;
use qsr_core::relations::FcContext;
use qsr_core::scene::{Scene, SceneObject, SurfaceKind};
use qsr_core::scene_io::{format_triples, load_scene, scene_to_json, SceneError, TripleFormat};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qsr",
    version,
    about = "Qualitative spatial relations for 3D scenes",
    long_about = "Computes viewpoint-aware qualitative spatial relations between labeled \
                  objects in a 3D scene and emits figure-relation-reference triples.\n\
                  Every --flag can also be set through the QSR_* environment variable \
                  named after it (e.g. QSR_SCENE, QSR_SAMPLES)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SceneArgs {
    /// Scene file (JSON).
    #[arg(long, env = "QSR_SCENE")]
    scene: PathBuf,
    /// Engine configuration (TOML); defaults apply when omitted.
    #[arg(long, env = "QSR_CONFIG")]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, env = "QSR_OUT")]
    out: Option<PathBuf>,
    /// Override the halfspace depth scale s.
    #[arg(long = "s", env = "QSR_S")]
    scale: Option<f64>,
    /// Override the closeness threshold T.
    #[arg(long = "T", env = "QSR_T")]
    closeness: Option<f64>,
    /// Override the contact tolerance.
    #[arg(long = "touch-eps", env = "QSR_TOUCH_EPS")]
    touch_eps: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute relation triples for a scene.
    Extract {
        #[command(flatten)]
        scene: SceneArgs,
        /// Output layout.
        #[arg(long, env = "QSR_FORMAT", default_value = "lines")]
        format: TripleFormat,
        /// Comma-separated relation names to keep (default: all).
        #[arg(long, env = "QSR_RELATIONS", value_delimiter = ',')]
        relations: Vec<String>,
    },
    /// Parse and validate a scene file, reporting what it contains.
    Validate {
        #[command(flatten)]
        scene: SceneArgs,
    },
    /// Dump viewpoint, CBB, and halfspace geometry as a scene-format JSON
    /// document for external plotting.
    Frames {
        #[command(flatten)]
        scene: SceneArgs,
    },
    /// Cross-check the engine against the sampling oracle on random scenes.
    OracleCheck {
        /// Scene source; only seeded random scenes are supported.
        #[arg(long, default_value = "random")]
        scenes: String,
        /// Number of scenes.
        #[arg(long, default_value_t = 50)]
        n: usize,
        /// RNG seed.
        #[arg(long, env = "QSR_SEED", default_value_t = 42)]
        seed: u64,
        /// Oracle samples per box.
        #[arg(long, env = "QSR_SAMPLES", default_value_t = 10_000)]
        samples: usize,
        /// Engine configuration (TOML).
        #[arg(long, env = "QSR_CONFIG")]
        config: Option<PathBuf>,
        /// Write the agreement report here as well as stdout.
        #[arg(long, env = "QSR_OUT")]
        out: Option<PathBuf>,
    },
}

/// Failures that map onto exit codes.
enum CliError {
    /// Bad input data or config: exit 1.
    Validation(String),
    /// Environment problems (I/O and the like): exit 2.
    Internal(String),
}

impl From<SceneError> for CliError {
    fn from(e: SceneError) -> Self {
        match e {
            SceneError::Io(_) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io(_) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

fn load_engine_config(path: &Option<PathBuf>) -> Result<EngineConfig, CliError> {
    match path {
        Some(p) => Ok(load_config(p)?),
        None => Ok(EngineConfig::default()),
    }
}

fn apply_overrides(cfg: &mut EngineConfig, args: &SceneArgs) -> Result<(), CliError> {
    if let Some(s) = args.scale {
        cfg.halfspace_scale_s = s;
    }
    if let Some(t) = args.closeness {
        cfg.closeness_t = t;
    }
    if let Some(eps) = args.touch_eps {
        cfg.touch_eps = eps;
    }
    cfg.validate()?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Internal(e.to_string()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_relation_filter(names: &[String]) -> Result<Option<Vec<RelationName>>, CliError> {
    if names.is_empty() {
        return Ok(None);
    }
    names
        .iter()
        .map(|n| {
            n.trim()
                .parse::<RelationName>()
                .map_err(|e| CliError::Validation(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn cmd_extract(
    args: &SceneArgs,
    format: TripleFormat,
    relations: &[String],
) -> Result<(), CliError> {
    let mut cfg = load_engine_config(&args.config)?;
    apply_overrides(&mut cfg, args)?;
    let filter = parse_relation_filter(relations)?;
    let scene = load_scene(&args.scene, &cfg)?;
    let mut triples = extract_qsr(&scene, scene.robot(), &cfg);
    if let Some(keep) = filter {
        triples.retain(|t| keep.contains(&t.relation));
    }
    emit(&args.out, &format_triples(&triples, format))
}

fn cmd_validate(args: &SceneArgs) -> Result<(), CliError> {
    let mut cfg = load_engine_config(&args.config)?;
    apply_overrides(&mut cfg, args)?;
    let scene = load_scene(&args.scene, &cfg)?;
    let solids = scene
        .objects()
        .iter()
        .filter(|o| o.kind() == SurfaceKind::Solid)
        .count();
    let planes = scene.objects().len() - solids;
    let p = scene.robot().position();
    let summary = format!(
        "ok: {} objects ({} solids, {} planes), robot at ({}, {}, {}) heading {}\n",
        scene.objects().len(),
        solids,
        planes,
        p.x,
        p.y,
        p.z,
        scene.robot().heading()
    );
    emit(&args.out, &summary)
}

/// Marker boxes for every derived frame construct, expressed as an ordinary
/// scene so any plotter that reads scenes can draw them.
fn frames_markers(scene: &Scene, cfg: &EngineConfig) -> Scene {
    let rel_cfg = cfg.relation();
    let mut markers: Vec<SceneObject> = Vec::new();
    for reference in select_references(scene) {
        let id = reference.id();
        let bbox = reference.bbox();
        let (viewpoint, _) = viewpoint_or_fallback(scene.robot(), bbox.center());
        let fc = contextualised_frame(bbox.center(), &viewpoint);
        let ctx = FcContext::new(bbox, &fc, &rel_cfg);

        markers.push(SceneObject::solid(
            format!("{id}.viewpoint"),
            qsr_core::OrientedBox::new(
                viewpoint.origin(),
                [0.05, 0.05, 0.05],
                viewpoint.yaw(),
            ),
        ));
        markers.push(SceneObject::solid(
            format!("{id}.cbb"),
            ctx.cbb().bbox.clone(),
        ));
        for tag in FcTag::ALL {
            markers.push(SceneObject::solid(
                format!("{id}.fc.{}", tag.as_str()),
                ctx.region(tag).clone(),
            ));
        }
        let intrinsic = FrameOfReference::intrinsic(bbox);
        if let Ok(set) = halfspaces_of(bbox, &intrinsic, rel_cfg.halfspace_scale_s) {
            for (axis, region) in set.iter() {
                markers.push(SceneObject::solid(
                    format!("{id}.fo.{}", axis.as_str()),
                    region.clone(),
                ));
            }
        }
    }
    Scene::new(*scene.robot(), markers)
}

fn cmd_frames(args: &SceneArgs) -> Result<(), CliError> {
    let mut cfg = load_engine_config(&args.config)?;
    apply_overrides(&mut cfg, args)?;
    let scene = load_scene(&args.scene, &cfg)?;
    let markers = frames_markers(&scene, &cfg);
    emit(&args.out, &scene_to_json(&markers))
}

fn cmd_oracle_check(
    scenes: &str,
    n: usize,
    seed: u64,
    samples: usize,
    config: &Option<PathBuf>,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    if scenes != "random" {
        return Err(CliError::Validation(format!(
            "unsupported scene source {scenes:?}; only \"random\" is available"
        )));
    }
    let cfg = load_engine_config(config)?;
    cfg.validate()?;
    let report = agreement_check(n, samples, seed, &cfg.relation());
    let text = report.render();
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{} out-of-band disagreements",
            report.disagreements.len()
        )))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Extract {
            scene,
            format,
            relations,
        } => cmd_extract(scene, *format, relations),
        Command::Validate { scene } => cmd_validate(scene),
        Command::Frames { scene } => cmd_frames(scene),
        Command::OracleCheck {
            scenes,
            n,
            seed,
            samples,
            config,
            out,
        } => cmd_oracle_check(scenes, *n, *seed, *samples, config, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
