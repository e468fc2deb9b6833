//! Minkowski geometry of the six measurement events (c = 1, signature +,-,-,-).
//!
//! A set of events is simultaneous in some inertial frame iff the affine span
//! of their differences is spacelike; the frame's time axis is then a future
//! timelike vector Minkowski-orthogonal to every difference.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpacetimeError {
    #[error("boost speed {0} is not below 1")]
    Superluminal(f64),
    #[error("events are not affinely independent")]
    Degenerate,
    #[error("unknown event label `{0}`")]
    UnknownLabel(String),
    #[error("event `{0}` has a non-finite coordinate")]
    NonFinite(String),
    #[error("geometry must contain exactly the events A, B, C, U, V, W: {0}")]
    BadLabels(String),
    #[error("separation pattern violated: {0}")]
    Separation(String),
}

/// A spacetime point `(t, x, y, z)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event4 {
    pub label: String,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Event4 {
    pub fn new(label: impl Into<String>, t: f64, x: f64, y: f64, z: f64) -> Result<Self, SpacetimeError> {
        let label = label.into();
        if ![t, x, y, z].iter().all(|c| c.is_finite()) {
            return Err(SpacetimeError::NonFinite(label));
        }
        Ok(Event4 { label, t, x, y, z })
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    fn with_coords(&self, c: [f64; 4]) -> Event4 {
        Event4 { label: self.label.clone(), t: c[0], x: c[1], y: c[2], z: c[3] }
    }
}

/// Velocity of a pure boost, `|v| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoostVelocity([f64; 3]);

impl BoostVelocity {
    pub fn new(v: [f64; 3]) -> Result<Self, SpacetimeError> {
        let speed = norm3(v);
        if !(speed < 1.0) {
            return Err(SpacetimeError::Superluminal(speed));
        }
        Ok(BoostVelocity(v))
    }

    pub fn zero() -> Self {
        BoostVelocity([0.0; 3])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn speed(&self) -> f64 {
        norm3(self.0)
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.speed().powi(2)).sqrt()
    }

    pub fn inverse(&self) -> BoostVelocity {
        BoostVelocity(self.0.map(|c| -c))
    }
}

impl fmt::Display for BoostVelocity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.0;
        write!(f, "({x:.12e}, {y:.12e}, {z:.12e})")
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `a0 b0 - a.b`.
pub fn minkowski(a: [f64; 4], b: [f64; 4]) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

fn diff(a: &Event4, b: &Event4) -> [f64; 4] {
    let (a, b) = (a.coords(), b.coords());
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// `s^2 = dt^2 - |dx|^2`.
pub fn interval(e1: &Event4, e2: &Event4) -> f64 {
    let d = diff(e2, e1);
    minkowski(d, d)
}

pub fn is_spacelike(e1: &Event4, e2: &Event4) -> bool {
    interval(e1, e2) < 0.0
}

pub fn is_timelike(e1: &Event4, e2: &Event4) -> bool {
    interval(e1, e2) > 0.0
}

/// Pure boost into the frame moving with velocity `v`.
pub fn boost(e: &Event4, v: &BoostVelocity) -> Event4 {
    let [vx, vy, vz] = v.0;
    let v2 = vx * vx + vy * vy + vz * vz;
    if v2 == 0.0 {
        return e.clone();
    }
    let g = v.gamma();
    let [t, x, y, z] = e.coords();
    let vdotx = vx * x + vy * y + vz * z;
    let k = (g - 1.0) * vdotx / v2 - g * t;
    e.with_coords([g * (t - vdotx), x + k * vx, y + k * vy, z + k * vz])
}

/// Why a triple has no simultaneity frame: the Minkowski Gram matrix of the
/// two difference vectors and a non-spacelike direction in their span.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramCertificate {
    pub gram: [[f64; 2]; 2],
    pub determinant: f64,
    /// Direction `c1 d1 + c2 d2` with `eta(w, w) >= 0`.
    pub witness: [f64; 4],
    pub witness_norm: f64,
}

/// Outcome of a frame search for a triple of events.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FrameVerdict {
    Frame {
        velocity: BoostVelocity,
        /// Largest spread of boosted times.
        residual: f64,
        gram: [[f64; 2]; 2],
    },
    NoFrame(GramCertificate),
}

impl FrameVerdict {
    pub fn velocity(&self) -> Option<BoostVelocity> {
        match self {
            FrameVerdict::Frame { velocity, .. } => Some(*velocity),
            FrameVerdict::NoFrame(_) => None,
        }
    }
}

fn gram(d1: [f64; 4], d2: [f64; 4]) -> [[f64; 2]; 2] {
    let g12 = minkowski(d1, d2);
    [[minkowski(d1, d1), g12], [g12, minkowski(d2, d2)]]
}

fn euclid_independent(d1: [f64; 4], d2: [f64; 4]) -> bool {
    let dot = |a: [f64; 4], b: [f64; 4]| a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>();
    let (a, b, c) = (dot(d1, d1), dot(d2, d2), dot(d1, d2));
    a * b - c * c > 1e-18 * (a * b).max(f64::MIN_POSITIVE)
}

fn combine(c1: f64, d1: [f64; 4], c2: f64, d2: [f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| c1 * d1[i] + c2 * d2[i])
}

/// Velocity of the frame whose time axis is the future timelike `n`.
fn velocity_from_normal(n: [f64; 4]) -> BoostVelocity {
    BoostVelocity([n[1] / n[0], n[2] / n[0], n[3] / n[0]])
}

fn time_spread(events: &[&Event4], v: &BoostVelocity) -> f64 {
    let ts: Vec<f64> = events.iter().map(|e| boost(e, v).t).collect();
    let max = ts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ts.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

/// Full analysis of a triple: the minimal-speed simultaneity frame, or the
/// Gram certificate showing none exists.
pub fn analyze_triple(e1: &Event4, e2: &Event4, e3: &Event4) -> Result<FrameVerdict, SpacetimeError> {
    let d1 = diff(e2, e1);
    let d2 = diff(e3, e1);
    if !euclid_independent(d1, d2) {
        return Err(SpacetimeError::Degenerate);
    }
    let g = gram(d1, d2);
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if g[0][0] < 0.0 && det > 0.0 {
        // Minkowski projection of e0 = (1,0,0,0) onto span{d1, d2}: solve G c = (eta(e0,d1), eta(e0,d2)).
        let (b1, b2) = (d1[0], d2[0]);
        let c1 = (b1 * g[1][1] - b2 * g[0][1]) / det;
        let c2 = (b2 * g[0][0] - b1 * g[1][0]) / det;
        let p = combine(c1, d1, c2, d2);
        let n = [1.0 - p[0], -p[1], -p[2], -p[3]];
        let velocity = velocity_from_normal(n);
        let residual = time_spread(&[e1, e2, e3], &velocity);
        return Ok(FrameVerdict::Frame { velocity, residual, gram: g });
    }
    // Largest eigenvector of the symmetric 2x2 Gram matrix spans a non-spacelike direction.
    let (c1, c2) = if g[0][0] >= 0.0 {
        (1.0, 0.0)
    } else if g[1][1] >= 0.0 {
        (0.0, 1.0)
    } else {
        let tr = g[0][0] + g[1][1];
        let lmax = 0.5 * (tr + (tr * tr - 4.0 * det).max(0.0).sqrt());
        if g[0][1].abs() > 0.0 {
            (g[0][1], lmax - g[0][0])
        } else {
            (1.0, 0.0)
        }
    };
    let witness = combine(c1, d1, c2, d2);
    Ok(FrameVerdict::NoFrame(GramCertificate {
        gram: g,
        determinant: det,
        witness,
        witness_norm: minkowski(witness, witness),
    }))
}

/// Boost under which the three events share one time coordinate, if any.
pub fn simultaneity_frame(e1: &Event4, e2: &Event4, e3: &Event4) -> Result<Option<BoostVelocity>, SpacetimeError> {
    Ok(analyze_triple(e1, e2, e3)?.velocity())
}

/// Minimal-speed frame in which the two events are simultaneous.
pub fn pair_simultaneity_frame(e1: &Event4, e2: &Event4) -> Option<BoostVelocity> {
    let d = diff(e2, e1);
    let dd = minkowski(d, d);
    if d.iter().all(|&c| c == 0.0) {
        return Some(BoostVelocity::zero());
    }
    if dd >= 0.0 {
        return None;
    }
    let c = d[0] / dd;
    let n = [1.0 - c * d[0], -c * d[1], -c * d[2], -c * d[3]];
    Some(velocity_from_normal(n))
}

/// Simultaneity frame for one to three events, reducing affinely dependent
/// triples to the pair or single-event case.
pub fn simultaneity_frame_for(events: &[&Event4]) -> Result<Option<BoostVelocity>, SpacetimeError> {
    match events {
        [] | [_] => Ok(Some(BoostVelocity::zero())),
        [a, b] => Ok(pair_simultaneity_frame(a, b)),
        [a, b, c] => match simultaneity_frame(a, b, c) {
            Err(SpacetimeError::Degenerate) => {
                // Collinear (or coincident): the frame for the farthest pair covers the third.
                let pairs = [(a, b), (a, c), (b, c)];
                let (p, q) = pairs
                    .into_iter()
                    .max_by(|x, y| {
                        let dx = diff(x.1, x.0);
                        let dy = diff(y.1, y.0);
                        let ex: f64 = dx.iter().map(|c| c * c).sum();
                        let ey: f64 = dy.iter().map(|c| c * c).sum();
                        ex.total_cmp(&ey)
                    })
                    .expect("three pairs");
                Ok(pair_simultaneity_frame(p, q))
            }
            other => other,
        },
        _ => Err(SpacetimeError::Degenerate),
    }
}

/// The six scenario events.
pub const EVENT_LABELS: [&str; 6] = ["A", "B", "C", "U", "V", "W"];

/// Events of the six measurements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Geometry {
    events: Vec<Event4>,
}

impl Geometry {
    /// Requires exactly the labels A, B, C, U, V, W (any order).
    pub fn new(events: Vec<Event4>) -> Result<Self, SpacetimeError> {
        let mut labels: Vec<&str> = events.iter().map(|e| e.label.as_str()).collect();
        labels.sort_unstable();
        if labels != EVENT_LABELS {
            return Err(SpacetimeError::BadLabels(labels.join(",")));
        }
        Ok(Geometry { events })
    }

    /// Friends at `t = 1`, Wigner agents at `t = 2`, lab `i` at `positions[i]`.
    pub fn from_lab_positions(positions: [[f64; 3]; 3]) -> Result<Self, SpacetimeError> {
        let mut events = Vec::with_capacity(6);
        for (t, labels) in [(1.0, ["A", "B", "C"]), (2.0, ["U", "V", "W"])] {
            for (label, p) in labels.iter().zip(positions) {
                events.push(Event4::new(*label, t, p[0], p[1], p[2])?);
            }
        }
        Geometry::new(events)
    }

    pub fn events(&self) -> &[Event4] {
        &self.events
    }

    pub fn event(&self, label: &str) -> Result<&Event4, SpacetimeError> {
        self.events
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| SpacetimeError::UnknownLabel(label.to_string()))
    }

    /// Checks that the friend events are pairwise spacelike, each Wigner event
    /// is spacelike to the other labs' events and to the other Wigner events,
    /// and that each Wigner event is in the future light cone of its friend's.
    pub fn check_separations(&self) -> Result<(), SpacetimeError> {
        for (p, q) in spacelike_pairs() {
            if !is_spacelike(self.event(p)?, self.event(q)?) {
                return Err(SpacetimeError::Separation(format!("{p}-{q} must be spacelike")));
            }
        }
        for (f, w) in [("A", "U"), ("B", "V"), ("C", "W")] {
            let (ef, ew) = (self.event(f)?, self.event(w)?);
            if !(is_timelike(ef, ew) && ew.t > ef.t) {
                return Err(SpacetimeError::Separation(format!("{w} must be in the future light cone of {f}")));
            }
        }
        Ok(())
    }
}

/// The twelve pairs required to be spacelike: all pairs except the three
/// same-lab (friend, Wigner) pairs.
pub fn spacelike_pairs() -> Vec<(&'static str, &'static str)> {
    let same_lab = [("A", "U"), ("B", "V"), ("C", "W")];
    let mut out = Vec::new();
    for (i, p) in EVENT_LABELS.iter().enumerate() {
        for q in &EVENT_LABELS[i + 1..] {
            if !same_lab.contains(&(*p, *q)) {
                out.push((*p, *q));
            }
        }
    }
    out
}

/// Labs at `(0,0,0)`, `(5,0,0)`, `(0,5,0)`.
pub fn default_geometry() -> Geometry {
    let g = Geometry::from_lab_positions([[0.0, 0.0, 0.0], [5.0, 0.0, 0.0], [0.0, 5.0, 0.0]])
        .expect("static coordinates are valid");
    g.check_separations().expect("default geometry satisfies the separation pattern");
    g
}

/// Labs on a line at `x = 0, 5, 10`. Admits no frame for `{U, B, C}`.
pub fn collinear_geometry() -> Geometry {
    let g = Geometry::from_lab_positions([[0.0, 0.0, 0.0], [5.0, 0.0, 0.0], [10.0, 0.0, 0.0]])
        .expect("static coordinates are valid");
    g.check_separations().expect("collinear geometry satisfies the separation pattern");
    g
}

/// Frame analysis of three named events of `geometry`.
pub fn frame_verdict(geometry: &Geometry, labels: [&str; 3]) -> Result<FrameVerdict, SpacetimeError> {
    let [a, b, c] = labels.map(|l| geometry.event(l));
    analyze_triple(a?, b?, c?)
}

/// Simultaneity frame for three named events of `geometry`.
pub fn frame_admissible(geometry: &Geometry, labels: [&str; 3]) -> Result<Option<BoostVelocity>, SpacetimeError> {
    let [a, b, c] = labels.map(|l| geometry.event(l));
    simultaneity_frame_for(&[a?, b?, c?])
}
