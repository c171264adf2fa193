//! Sampling-based reference implementations of every relation.
//!
//! The oracle re-derives each predicate by brute force: uniform point
//! samples inside each box, membership tests against independently
//! constructed regions, and alternating-projection distances. It shares
//! only the box data model and the tag enums with the analytic kernel, so
//! agreement between the two is real evidence.
//!
//! Every answer carries a margin: the distance from the decision threshold
//! in the relation's native measure (meters for geometric thresholds,
//! volume fractions for containment ones, with Monte Carlo noise already
//! discounted). Agreement harnesses skip answers whose margin does not
//! exceed the boundary band `max(touch_eps, 1e-3)` instead of flaking on
//! them.

use crate::commonsense;
use crate::frames::{contextualised_frame, viewpoint_or_fallback, FrameOfReference, RobotPose};
use crate::geometry::{normalize_signed_angle, OrientedBox, Point3};
use crate::relations::{self, FcTag, FoTag, RelationConfig, Strictness};
use crate::scene::{Scene, SceneObject};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 42;

/// Sample count and RNG seed for one oracle evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleParams {
    pub samples: usize,
    pub seed: u64,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

/// Oracle verdict plus its distance from the decision threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleAnswer {
    pub holds: bool,
    pub margin: f64,
}

/// Width of the boundary band: answers closer than this to a threshold are
/// logged, not failed.
pub fn boundary_band(cfg: &RelationConfig) -> f64 {
    cfg.touch_eps.max(1e-3)
}

/// Every relation the oracle can check. The first argument of
/// [`oracle_relation`] is always the figure, the second the reference,
/// matching triple order; symmetric relations ignore the distinction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckedRelation {
    IsClose,
    Touches,
    Intersects,
    /// Figure completely contains the reference.
    ComplCont,
    Fo(FoTag, Strictness),
    Fc(FcTag),
    Beside,
    OnTopOf,
    LeansOn,
    AffixedOn,
    /// Figure sits completely inside the reference.
    Inside,
    PartIn,
    Near,
}

impl CheckedRelation {
    pub fn all() -> Vec<CheckedRelation> {
        let mut v = vec![
            CheckedRelation::IsClose,
            CheckedRelation::Touches,
            CheckedRelation::Intersects,
            CheckedRelation::ComplCont,
        ];
        for tag in FoTag::ALL {
            v.push(CheckedRelation::Fo(tag, Strictness::Relaxed));
            v.push(CheckedRelation::Fo(tag, Strictness::Strict));
        }
        for tag in FcTag::ALL {
            v.push(CheckedRelation::Fc(tag));
        }
        v.extend([
            CheckedRelation::Beside,
            CheckedRelation::OnTopOf,
            CheckedRelation::LeansOn,
            CheckedRelation::AffixedOn,
            CheckedRelation::Inside,
            CheckedRelation::PartIn,
            CheckedRelation::Near,
        ]);
        v
    }
}

/// Box with pose trigonometry precomputed; membership tests are a rotation
/// and three comparisons.
struct LocalBox {
    center: Point3,
    sin: f64,
    cos: f64,
    h: [f64; 3],
}

impl LocalBox {
    fn of(b: &OrientedBox) -> LocalBox {
        let (sin, cos) = b.yaw().sin_cos();
        LocalBox {
            center: b.center(),
            sin,
            cos,
            h: b.half_extents(),
        }
    }

    fn local(&self, p: Point3) -> [f64; 3] {
        let dx = p.x - self.center.x;
        let dy = p.y - self.center.y;
        [
            self.cos * dx + self.sin * dy,
            -self.sin * dx + self.cos * dy,
            p.z - self.center.z,
        ]
    }

    fn global(&self, l: [f64; 3]) -> Point3 {
        Point3::new(
            self.center.x + self.cos * l[0] - self.sin * l[1],
            self.center.y + self.sin * l[0] + self.cos * l[1],
            self.center.z + l[2],
        )
    }

    fn contains(&self, p: Point3, eps: f64) -> bool {
        let l = self.local(p);
        l[0].abs() <= self.h[0] + eps && l[1].abs() <= self.h[1] + eps && l[2].abs() <= self.h[2] + eps
    }

    /// Min clearance to the boundary; positive inside, negative outside.
    fn depth(&self, p: Point3) -> f64 {
        let l = self.local(p);
        (self.h[0] - l[0].abs())
            .min(self.h[1] - l[1].abs())
            .min(self.h[2] - l[2].abs())
    }

    /// Exact Euclidean projection onto the box.
    fn clamp(&self, p: Point3) -> Point3 {
        let l = self.local(p);
        self.global([
            l[0].clamp(-self.h[0], self.h[0]),
            l[1].clamp(-self.h[1], self.h[1]),
            l[2].clamp(-self.h[2], self.h[2]),
        ])
    }

    fn corners(&self) -> [Point3; 8] {
        let mut out = [self.center; 8];
        let mut i = 0;
        for sz in [-1.0, 1.0] {
            for (sx, sy) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
                out[i] = self.global([sx * self.h[0], sy * self.h[1], sz * self.h[2]]);
                i += 1;
            }
        }
        out
    }
}

/// Minimum distance between two boxes by alternating exact projections,
/// with corner starts to cover vertex-dominated optima. Always an upper
/// bound on the true distance (the returned pair is feasible).
pub fn oracle_distance(a: &OrientedBox, b: &OrientedBox) -> f64 {
    let la = LocalBox::of(a);
    let lb = LocalBox::of(b);
    let mut best = f64::INFINITY;
    let mut run = |start: Point3, iters: usize| {
        let mut p = start;
        let mut q = lb.clamp(p);
        let mut d = p.dist(q);
        for _ in 0..iters {
            p = la.clamp(q);
            q = lb.clamp(p);
            let nd = p.dist(q);
            if d - nd < 1e-15 {
                d = nd;
                break;
            }
            d = nd;
        }
        if d < best {
            best = d;
        }
    };
    run(a.center(), 600);
    for c in la.corners() {
        run(c, 80);
    }
    for c in lb.corners() {
        run(la.clamp(c), 80);
    }
    best
}

/// Uniform interior samples of one box, generated once and reused across
/// every relation checked on it.
pub struct SampledBox {
    local: LocalBox,
    pts: Vec<Point3>,
}

impl SampledBox {
    pub fn new(b: &OrientedBox, n: usize, rng: &mut ChaCha8Rng) -> SampledBox {
        let local = LocalBox::of(b);
        let pts = (0..n)
            .map(|_| {
                local.global([
                    rng.gen_range(-local.h[0]..=local.h[0]),
                    rng.gen_range(-local.h[1]..=local.h[1]),
                    rng.gen_range(-local.h[2]..=local.h[2]),
                ])
            })
            .collect();
        SampledBox { local, pts }
    }

    fn bbox_approx(&self) -> OrientedBox {
        // Rebuild the box from the cached frame; yaw recovery is exact
        // because LocalBox stores the original sin/cos.
        OrientedBox::new(
            self.local.center,
            self.local.h,
            self.local.sin.atan2(self.local.cos),
        )
    }
}

fn and(a: OracleAnswer, b: OracleAnswer) -> OracleAnswer {
    if a.holds && b.holds {
        OracleAnswer {
            holds: true,
            margin: a.margin.min(b.margin),
        }
    } else {
        // Flipping a false conjunction needs every false conjunct to flip.
        let margin = [a, b]
            .iter()
            .filter(|x| !x.holds)
            .map(|x| x.margin)
            .fold(0.0, f64::max);
        OracleAnswer {
            holds: false,
            margin,
        }
    }
}

fn or(a: OracleAnswer, b: OracleAnswer) -> OracleAnswer {
    if a.holds || b.holds {
        let margin = [a, b]
            .iter()
            .filter(|x| x.holds)
            .map(|x| x.margin)
            .fold(0.0, f64::max);
        OracleAnswer {
            holds: true,
            margin,
        }
    } else {
        OracleAnswer {
            holds: false,
            margin: a.margin.min(b.margin),
        }
    }
}

fn not(a: OracleAnswer) -> OracleAnswer {
    OracleAnswer {
        holds: !a.holds,
        margin: a.margin,
    }
}

/// Build a region box in a frame: the span of `bounds` along `axis` is
/// extruded outward by `s` times its own extent, flush against the bound.
fn region_in_frame(
    origin: Point3,
    yaw: f64,
    lo: [f64; 3],
    hi: [f64; 3],
    axis: usize,
    positive: bool,
    s: f64,
) -> OrientedBox {
    let depth = s * (hi[axis] - lo[axis]);
    let (mut rlo, mut rhi) = (lo, hi);
    if positive {
        rlo[axis] = hi[axis];
        rhi[axis] = hi[axis] + depth;
    } else {
        rhi[axis] = lo[axis];
        rlo[axis] = lo[axis] - depth;
    }
    let center = [
        (rlo[0] + rhi[0]) / 2.0,
        (rlo[1] + rhi[1]) / 2.0,
        (rlo[2] + rhi[2]) / 2.0,
    ];
    let half = [
        (rhi[0] - rlo[0]) / 2.0,
        (rhi[1] - rlo[1]) / 2.0,
        (rhi[2] - rlo[2]) / 2.0,
    ];
    let frame = LocalBox {
        center: origin,
        sin: yaw.sin(),
        cos: yaw.cos(),
        h: [0.0; 3],
    };
    OrientedBox::new(frame.global(center), half, yaw)
}

fn fo_axis(tag: FoTag) -> (usize, bool) {
    match tag {
        FoTag::East => (0, true),
        FoTag::West => (0, false),
        FoTag::North => (1, true),
        FoTag::South => (1, false),
        FoTag::Above => (2, true),
        FoTag::Below => (2, false),
    }
}

fn fc_axis(tag: FcTag) -> (usize, bool) {
    match tag {
        FcTag::Behind => (0, true),
        FcTag::InFrontOf => (0, false),
        FcTag::LeftOf => (1, true),
        FcTag::RightOf => (1, false),
        FcTag::Above => (2, true),
        FcTag::Below => (2, false),
    }
}

/// Intrinsic-frame region of the reference box: frame at its center with
/// its yaw, bounds are the half extents themselves.
fn fo_region(reference: &OrientedBox, tag: FoTag, s: f64) -> OrientedBox {
    let h = reference.half_extents();
    let (axis, positive) = fo_axis(tag);
    region_in_frame(
        reference.center(),
        reference.yaw(),
        [-h[0], -h[1], -h[2]],
        h,
        axis,
        positive,
        s,
    )
}

/// Viewpoint yaw toward the reference, falling back to the robot heading
/// when the robot stands on the reference's vertical axis.
fn fc_yaw(robot: &RobotPose, target: Point3) -> f64 {
    let dx = target.x - robot.position().x;
    let dy = target.y - robot.position().y;
    if dx.hypot(dy) < 1e-6 {
        robot.heading()
    } else {
        dy.atan2(dx)
    }
}

/// Contextualised bounding box: smallest rotation of the reference about
/// the frame origin that aligns it with the frame, modulo quarter turns.
fn oracle_cbb(reference: &OrientedBox, origin: Point3, frame_yaw: f64) -> OrientedBox {
    let rel = normalize_signed_angle(reference.yaw() - frame_yaw);
    let r = rel.rem_euclid(FRAC_PI_2);
    let theta = if r >= FRAC_PI_4 { FRAC_PI_2 - r } else { -r };
    let (sin, cos) = theta.sin_cos();
    let d = reference.center().sub(origin);
    let center = Point3::new(
        origin.x + cos * d.x - sin * d.y,
        origin.y + sin * d.x + cos * d.y,
        reference.center().z,
    );
    OrientedBox::new(center, reference.half_extents(), reference.yaw() + theta)
}

/// Lateral contextualised region; bounds of the CBB are measured in frame
/// coordinates through its corners, so quarter-turn extent swaps fall out
/// automatically.
fn fc_lateral_region(
    reference: &OrientedBox,
    robot: &RobotPose,
    tag: FcTag,
    s: f64,
) -> OrientedBox {
    let origin = reference.center();
    let yaw = fc_yaw(robot, origin);
    let cbb = oracle_cbb(reference, origin, yaw);
    let frame = LocalBox {
        center: origin,
        sin: yaw.sin(),
        cos: yaw.cos(),
        h: [0.0; 3],
    };
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for c in LocalBox::of(&cbb).corners() {
        let l = frame.local(c);
        for i in 0..3 {
            lo[i] = lo[i].min(l[i]);
            hi[i] = hi[i].max(l[i]);
        }
    }
    let (axis, positive) = fc_axis(tag);
    region_in_frame(origin, yaw, lo, hi, axis, positive, s)
}

/// Vertical region grown from the reference's own footprint; independent of
/// the viewpoint by construction.
fn vertical_region(reference: &OrientedBox, up: bool, s: f64) -> OrientedBox {
    let h = reference.half_extents();
    let c = reference.center();
    let z = if up {
        c.z + h[2] + s * h[2]
    } else {
        c.z - h[2] - s * h[2]
    };
    OrientedBox::new(Point3::new(c.x, c.y, z), [h[0], h[1], s * h[2]], reference.yaw())
}

/// Witness-based overlap test of a sampled solid against a convex region:
/// a sample strictly inside both is a certificate with a ball margin, no
/// witness plus positive separation is a certificate the other way.
fn relaxed_answer(fig: &SampledBox, region: &OrientedBox) -> OracleAnswer {
    let reg = LocalBox::of(region);
    let mut pen = f64::NEG_INFINITY;
    for p in &fig.pts {
        let d = reg.depth(*p);
        if d > pen {
            pen = d.min(fig.local.depth(*p));
        }
    }
    if pen > 0.0 {
        OracleAnswer {
            holds: true,
            margin: pen,
        }
    } else {
        OracleAnswer {
            holds: false,
            margin: oracle_distance(&fig.bbox_approx(), region),
        }
    }
}

/// Containment of a sampled solid in a convex region at relative tolerance
/// `tol`. All eight corners inside is an exact certificate; otherwise the
/// sampled fraction decides and sampling noise is subtracted from the
/// margin.
fn containment_answer(fig: &SampledBox, region: &OrientedBox, tol: f64) -> OracleAnswer {
    let reg = LocalBox::of(region);
    let corner_depth = fig
        .local
        .corners()
        .iter()
        .map(|c| reg.depth(*c))
        .fold(f64::INFINITY, f64::min);
    if corner_depth >= 0.0 {
        return OracleAnswer {
            holds: true,
            margin: corner_depth,
        };
    }
    let n = fig.pts.len();
    let k = fig.pts.iter().filter(|p| reg.contains(**p, 0.0)).count();
    let frac = k as f64 / n as f64;
    let thr = 1.0 - tol;
    let sigma = (frac * (1.0 - frac) / n as f64).sqrt();
    OracleAnswer {
        holds: k > 0 && frac >= thr,
        margin: ((frac - thr).abs() - 3.0 * sigma).max(0.0),
    }
}

fn mutual_witness(a: &SampledBox, b: &SampledBox) -> f64 {
    let mut pen = f64::NEG_INFINITY;
    let other = |s: &SampledBox, o: &LocalBox, pen: &mut f64| {
        for p in &s.pts {
            let d = o.depth(*p);
            if d > *pen {
                *pen = d.min(s.local.depth(*p));
            }
        }
    };
    other(a, &b.local, &mut pen);
    other(b, &a.local, &mut pen);
    pen
}

/// Pair of sampled objects with everything cached; answers any
/// [`CheckedRelation`] with the first object as figure.
pub struct PairOracle<'a> {
    fig: &'a SceneObject,
    refr: &'a SceneObject,
    sfig: &'a SampledBox,
    sref: &'a SampledBox,
    robot: &'a RobotPose,
    cfg: &'a RelationConfig,
}

impl<'a> PairOracle<'a> {
    pub fn new(
        fig: &'a SceneObject,
        refr: &'a SceneObject,
        sfig: &'a SampledBox,
        sref: &'a SampledBox,
        robot: &'a RobotPose,
        cfg: &'a RelationConfig,
    ) -> Self {
        PairOracle {
            fig,
            refr,
            sfig,
            sref,
            robot,
            cfg,
        }
    }

    fn distance_answer(&self, threshold: f64) -> OracleAnswer {
        let d = oracle_distance(self.fig.bbox(), self.refr.bbox());
        OracleAnswer {
            holds: d <= threshold,
            margin: (d - threshold).abs(),
        }
    }

    fn intersects_answer(&self) -> OracleAnswer {
        let pen = mutual_witness(self.sfig, self.sref);
        if pen > 0.0 {
            OracleAnswer {
                holds: true,
                margin: pen,
            }
        } else {
            OracleAnswer {
                holds: false,
                margin: oracle_distance(self.fig.bbox(), self.refr.bbox()),
            }
        }
    }

    fn fc_answer(&self, tag: FcTag) -> OracleAnswer {
        let s = self.cfg.halfspace_scale_s;
        let region = match tag {
            FcTag::Above => vertical_region(self.refr.bbox(), true, s),
            FcTag::Below => vertical_region(self.refr.bbox(), false, s),
            lateral => fc_lateral_region(self.refr.bbox(), self.robot, lateral, s),
        };
        relaxed_answer(self.sfig, &region)
    }

    /// Shell asymmetry: uniform samples of the intersection are inflated
    /// about its sampled centroid; whichever object catches fewer inflated
    /// points owns less fresh volume around the overlap and is the more
    /// submerged one.
    fn part_in_answer(&self) -> OracleAnswer {
        let in_both: Vec<Point3> = self
            .sfig
            .pts
            .iter()
            .filter(|p| self.sref.local.contains(**p, 0.0))
            .chain(self.sref.pts.iter().filter(|p| self.sfig.local.contains(**p, 0.0)))
            .copied()
            .collect();
        if in_both.is_empty() {
            return OracleAnswer {
                holds: false,
                margin: oracle_distance(self.fig.bbox(), self.refr.bbox()),
            };
        }
        let m = in_both.len() as f64;
        let cx = in_both.iter().map(|p| p.x).sum::<f64>() / m;
        let cy = in_both.iter().map(|p| p.y).sum::<f64>() / m;
        let cz = in_both.iter().map(|p| p.z).sum::<f64>() / m;
        let grow = 1.0 + self.cfg.adjacency_delta;
        let (mut n_fig, mut n_ref) = (0usize, 0usize);
        for p in &in_both {
            let q = Point3::new(
                cx + (p.x - cx) * grow,
                cy + (p.y - cy) * grow,
                cz + (p.z - cz) * grow,
            );
            let in_fig = self.sfig.local.contains(q, 0.0);
            let in_ref = self.sref.local.contains(q, 0.0);
            if in_fig && in_ref {
                continue; // still in the intersection, not crust
            }
            if in_fig {
                n_fig += 1;
            } else if in_ref {
                n_ref += 1;
            }
        }
        let diff = n_ref as f64 - n_fig as f64;
        let noise = 8.0 * ((n_fig + n_ref + 1) as f64).sqrt();
        OracleAnswer {
            holds: n_fig < n_ref,
            margin: ((diff.abs() - noise) / m).max(0.0),
        }
    }

    pub fn answer(&self, rel: CheckedRelation) -> OracleAnswer {
        let cfg = self.cfg;
        match rel {
            CheckedRelation::IsClose | CheckedRelation::Near => {
                self.distance_answer(cfg.closeness_t)
            }
            CheckedRelation::Touches => self.distance_answer(cfg.touch_eps),
            CheckedRelation::Intersects => self.intersects_answer(),
            CheckedRelation::ComplCont => {
                containment_answer(self.sref, self.fig.bbox(), cfg.containment_tol)
            }
            CheckedRelation::Inside => {
                containment_answer(self.sfig, self.refr.bbox(), cfg.containment_tol)
            }
            CheckedRelation::Fo(tag, strictness) => {
                let region = fo_region(self.refr.bbox(), tag, cfg.halfspace_scale_s);
                match strictness {
                    Strictness::Relaxed => relaxed_answer(self.sfig, &region),
                    Strictness::Strict => {
                        containment_answer(self.sfig, &region, cfg.containment_tol)
                    }
                }
            }
            CheckedRelation::Fc(tag) => self.fc_answer(tag),
            CheckedRelation::Beside => or(
                self.fc_answer(FcTag::LeftOf),
                self.fc_answer(FcTag::RightOf),
            ),
            CheckedRelation::OnTopOf => and(
                self.fc_answer(FcTag::Above),
                self.distance_answer(cfg.touch_eps),
            ),
            // Needs a third object below the figure; impossible in the
            // two-object world the oracle checks.
            CheckedRelation::LeansOn => OracleAnswer {
                holds: false,
                margin: f64::INFINITY,
            },
            CheckedRelation::AffixedOn => and(
                self.distance_answer(cfg.touch_eps),
                not(self.fc_answer(FcTag::Above)),
            ),
            CheckedRelation::PartIn => self.part_in_answer(),
        }
    }
}

/// Brute-force answer for one relation; `o1` is the figure. Samples are
/// drawn fresh from `seed`, `n` per box.
pub fn oracle_relation(
    o1: &SceneObject,
    o2: &SceneObject,
    relation: CheckedRelation,
    robot_pose: &RobotPose,
    cfg: &RelationConfig,
    n: usize,
    seed: u64,
) -> OracleAnswer {
    assert!(n >= 10_000, "oracle needs at least 10000 samples, got {n}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sfig = SampledBox::new(o1.bbox(), n, &mut rng);
    let sref = SampledBox::new(o2.bbox(), n, &mut rng);
    PairOracle::new(o1, o2, &sfig, &sref, robot_pose, cfg).answer(relation)
}

/// Engine-side answer for the same relation, used by agreement harnesses.
pub fn analytic_relation(
    fig: &SceneObject,
    refr: &SceneObject,
    rel: CheckedRelation,
    robot: &RobotPose,
    cfg: &RelationConfig,
    scene: &Scene,
) -> bool {
    let fc_of = |r: &SceneObject| {
        let (vp, _) = viewpoint_or_fallback(robot, r.bbox().center());
        contextualised_frame(r.bbox().center(), &vp)
    };
    match rel {
        CheckedRelation::IsClose => relations::is_close(fig, refr, cfg),
        CheckedRelation::Touches => relations::touches(fig, refr, cfg),
        CheckedRelation::Intersects => relations::intersects(fig, refr),
        CheckedRelation::ComplCont => relations::completely_contains(fig, refr, cfg),
        CheckedRelation::Fo(tag, strictness) => {
            let frame = FrameOfReference::intrinsic(refr.bbox());
            relations::directional_fo(fig, refr, &frame, tag, strictness, cfg)
        }
        CheckedRelation::Fc(tag) => relations::directional_fc(fig, refr, &fc_of(refr), tag, cfg),
        CheckedRelation::Beside => commonsense::beside(fig, refr, &fc_of(refr), cfg).holds,
        CheckedRelation::OnTopOf => commonsense::on_top_of(fig, refr, &fc_of(refr), cfg).holds,
        CheckedRelation::LeansOn => {
            commonsense::leans_on(fig, refr, &fc_of(refr), cfg, scene).holds
        }
        CheckedRelation::AffixedOn => {
            commonsense::affixed_on(fig, refr, &fc_of(refr), cfg, scene).holds
        }
        CheckedRelation::Inside => commonsense::inside(fig, refr, cfg).holds,
        CheckedRelation::PartIn => commonsense::part_in(fig, refr, cfg)
            .map(|a| a.holds)
            .unwrap_or(false),
        CheckedRelation::Near => commonsense::near(fig, refr, cfg).holds,
    }
}

/// Placement pattern for generated two-object scenes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    Far,
    Near,
    Stacked,
    Nested,
    Mixed,
}

impl PairMode {
    pub const CYCLE: [PairMode; 5] = [
        PairMode::Far,
        PairMode::Near,
        PairMode::Stacked,
        PairMode::Nested,
        PairMode::Mixed,
    ];
}

pub fn random_box(rng: &mut ChaCha8Rng) -> OrientedBox {
    let h = [
        rng.gen_range(0.08..0.5),
        rng.gen_range(0.08..0.5),
        rng.gen_range(0.08..0.5),
    ];
    let c = Point3::new(
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
    );
    OrientedBox::new(c, h, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn unit_dir(rng: &mut ChaCha8Rng) -> Point3 {
    loop {
        let v = Point3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = (v.x * v.x + v.y * v.y + v.z * v.z).sqrt();
        if n > 0.1 && n <= 1.0 {
            return Point3::new(v.x / n, v.y / n, v.z / n);
        }
    }
}

/// Random two-object scene in the chosen placement mode, plus a robot pose
/// standing off to the side.
pub fn random_pair(rng: &mut ChaCha8Rng, mode: PairMode) -> (SceneObject, SceneObject, RobotPose) {
    let a = random_box(rng);
    let b = match mode {
        PairMode::Far => {
            let core = random_box(rng);
            let dir = unit_dir(rng);
            let off = a.diameter() / 2.0 + core.diameter() / 2.0 + rng.gen_range(0.6..2.0);
            core.translated(Point3::new(dir.x * off, dir.y * off, dir.z * off))
        }
        PairMode::Near => {
            let core = random_box(rng);
            let dir = unit_dir(rng);
            let gap = rng.gen_range(0.03..0.45);
            // Bisect the center offset until the surface gap hits the target.
            let mut t_lo = 0.0;
            let mut t_hi = a.diameter() / 2.0 + core.diameter() / 2.0 + gap;
            for _ in 0..40 {
                let t = (t_lo + t_hi) / 2.0;
                let cand =
                    core.translated(Point3::new(dir.x * t - core.center().x + a.center().x,
                                                dir.y * t - core.center().y + a.center().y,
                                                dir.z * t - core.center().z + a.center().z));
                if oracle_distance(&a, &cand) < gap {
                    t_lo = t;
                } else {
                    t_hi = t;
                }
            }
            let t = (t_lo + t_hi) / 2.0;
            core.translated(Point3::new(dir.x * t - core.center().x + a.center().x,
                                        dir.y * t - core.center().y + a.center().y,
                                        dir.z * t - core.center().z + a.center().z))
        }
        PairMode::Stacked => {
            let ha = a.half_extents();
            let hb = [
                rng.gen_range(0.05..ha[0] * 0.8),
                rng.gen_range(0.05..ha[1] * 0.8),
                rng.gen_range(0.05..0.3),
            ];
            let dz = [0.0, 0.08, -0.04][rng.gen_range(0..3)];
            let yaw = if rng.gen_bool(0.5) {
                a.yaw()
            } else {
                rng.gen_range(0.0..std::f64::consts::TAU)
            };
            let c = a.center();
            OrientedBox::new(
                Point3::new(
                    c.x + rng.gen_range(-0.02..0.02),
                    c.y + rng.gen_range(-0.02..0.02),
                    a.z_max() + dz + hb[2],
                ),
                hb,
                yaw,
            )
        }
        PairMode::Nested => {
            let ha = a.half_extents();
            let lim = (ha[0].min(ha[1]) * 0.6) / std::f64::consts::SQRT_2;
            let hb = [
                rng.gen_range(0.02..lim.max(0.021)),
                rng.gen_range(0.02..lim.max(0.021)),
                rng.gen_range(0.02..(ha[2] * 0.6).max(0.021)),
            ];
            let c = a.center();
            OrientedBox::new(
                Point3::new(
                    c.x + rng.gen_range(-0.1..0.1) * ha[0],
                    c.y + rng.gen_range(-0.1..0.1) * ha[1],
                    c.z + rng.gen_range(-0.2..0.2) * ha[2],
                ),
                hb,
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        }
        PairMode::Mixed => {
            let core = random_box(rng);
            core.translated(Point3::new(
                rng.gen_range(-0.9..0.9),
                rng.gen_range(-0.9..0.9),
                rng.gen_range(-0.9..0.9),
            ))
        }
    };
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = rng.gen_range(2.0..4.0);
    let robot = RobotPose::new(
        Point3::new(r * phi.cos(), r * phi.sin(), 0.0),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );
    (
        SceneObject::solid("a", a),
        SceneObject::solid("b", b),
        robot,
    )
}

/// One engine/oracle mismatch outside the boundary band.
#[derive(Debug, Clone)]
pub struct Disagreement {
    pub scene: usize,
    pub figure: String,
    pub reference: String,
    pub relation: String,
    pub analytic: bool,
    pub oracle: bool,
    pub margin: f64,
}

/// Tally of an agreement run; `passed` iff no out-of-band disagreement.
#[derive(Debug, Clone)]
pub struct AgreementReport {
    pub scenes: usize,
    pub samples: usize,
    pub checked: usize,
    pub in_band: usize,
    pub disagreements: Vec<Disagreement>,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "agreement: {} scenes, {} samples/box, {} checks ({} in band), {} disagreements\n",
            self.scenes,
            self.samples,
            self.checked,
            self.in_band,
            self.disagreements.len()
        );
        for d in &self.disagreements {
            out.push_str(&format!(
                "  scene {}: {}({}, {}) analytic={} oracle={} margin={:.4}\n",
                d.scene, d.relation, d.figure, d.reference, d.analytic, d.oracle, d.margin
            ));
        }
        out
    }
}

/// Run the full relation battery on seeded random two-object scenes and
/// compare engine and oracle everywhere the oracle is confident.
pub fn agreement_check(
    scenes: usize,
    samples: usize,
    seed: u64,
    cfg: &RelationConfig,
) -> AgreementReport {
    let band = boundary_band(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AgreementReport {
        scenes,
        samples,
        checked: 0,
        in_band: 0,
        disagreements: Vec::new(),
    };
    for idx in 0..scenes {
        let (a, b, robot) = random_pair(&mut rng, PairMode::CYCLE[idx % PairMode::CYCLE.len()]);
        let sa = SampledBox::new(a.bbox(), samples, &mut rng);
        let sb = SampledBox::new(b.bbox(), samples, &mut rng);
        let scene = Scene::new(robot, vec![a.clone(), b.clone()]);
        for (fig, refr, sfig, sref) in [(&a, &b, &sa, &sb), (&b, &a, &sb, &sa)] {
            let oracle = PairOracle::new(fig, refr, sfig, sref, &robot, cfg);
            for rel in CheckedRelation::all() {
                let ans = oracle.answer(rel);
                report.checked += 1;
                if ans.margin <= band {
                    report.in_band += 1;
                    continue;
                }
                let engine = analytic_relation(fig, refr, rel, &robot, cfg, &scene);
                if engine != ans.holds {
                    report.disagreements.push(Disagreement {
                        scene: idx,
                        figure: fig.id().to_owned(),
                        reference: refr.id().to_owned(),
                        relation: format!("{rel:?}"),
                        analytic: engine,
                        oracle: ans.holds,
                        margin: ans.margin,
                    });
                }
            }
        }
    }
    report
}
