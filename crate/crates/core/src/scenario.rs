//! Scenario model, TOML scenario documents, and the built-in line and grid layouts.
//!
//! Room coordinates are centered on the floor: `x ∈ [-w/2, w/2]`,
//! `y ∈ [-d/2, d/2]`, `z ∈ [0, h]`. Luminaires face down, receivers face up.
//!
//! Document schema (SI units, unknown keys rejected):
//!
//! ```toml
//! name = "optional"
//! description = "optional"
//!
//! [room]
//! width_m = 2.0
//! depth_m = 2.0
//! height_m = 2.0
//!
//! [[luminaire]]
//! tag = "outer-left"
//! x_m = -0.16
//! y_m = 0.0
//! z_m = 2.0
//! power_w = 1.0
//! semi_angle_deg = 20.0
//! mod_index = 1.0        # optional
//! baseband_power = 0.5   # optional
//!
//! [detector]
//! area_m2 = 1e-4
//! fov_deg = 60.0
//! gain = 1.3
//! responsivity_a_per_w = 0.54  # optional
//! bandwidth_hz = 1e4           # optional
//!
//! [noise]                      # optional table, every key optional
//! background_current_a = 0.0
//! i2 = 0.56
//! thermal_a2 = 0.0
//! isi_a2 = 0.0
//! ```

use serde::Deserialize;

use crate::channel::{DetectorModel, EmitterModel, DEFAULT_BANDWIDTH_HZ, DEFAULT_RESPONSIVITY};
use crate::error::{Error, Result};
use crate::geometry::{Pose, Vec3};
use crate::link::ModulationParams;
use crate::noise::{NoiseParams, PIN_FET_BANDWIDTH_FACTOR};

/// Shipped document for the three-lamp line layout.
pub const L1_DOCUMENT: &str = include_str!("../scenarios/l1.toml");
/// Shipped document for the 3×3 grid layout.
pub const G1_DOCUMENT: &str = include_str!("../scenarios/g1.toml");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Room {
    width_m: f64,
    depth_m: f64,
    height_m: f64,
}

impl Room {
    pub fn new(width_m: f64, depth_m: f64, height_m: f64) -> Result<Self> {
        for (key, v) in [("width_m", width_m), ("depth_m", depth_m), ("height_m", height_m)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Validation {
                    key: format!("room.{key}"),
                    constraint: format!("must be positive and finite, got {v}"),
                });
            }
        }
        Ok(Room {
            width_m,
            depth_m,
            height_m,
        })
    }

    pub fn width_m(&self) -> f64 {
        self.width_m
    }

    pub fn depth_m(&self) -> f64 {
        self.depth_m
    }

    /// Ceiling height, which is also the luminaire plane.
    pub fn height_m(&self) -> f64 {
        self.height_m
    }

    pub fn x_range(&self) -> (f64, f64) {
        (-self.width_m / 2.0, self.width_m / 2.0)
    }

    pub fn y_range(&self) -> (f64, f64) {
        (-self.depth_m / 2.0, self.depth_m / 2.0)
    }

    /// First coordinate (`"x_m"`, `"y_m"` or `"z_m"`) that lies outside the room.
    fn outside_axis(&self, p: Vec3) -> Option<&'static str> {
        let (x0, x1) = self.x_range();
        let (y0, y1) = self.y_range();
        if !(x0..=x1).contains(&p.x) {
            Some("x_m")
        } else if !(y0..=y1).contains(&p.y) {
            Some("y_m")
        } else if !(0.0..=self.height_m).contains(&p.z) {
            Some("z_m")
        } else {
            None
        }
    }
}

/// A tag-broadcasting LED source.
#[derive(Debug, Clone, PartialEq)]
pub struct Luminaire {
    pub tag: String,
    pub pose: Pose,
    pub emitter: EmitterModel,
    pub modulation: ModulationParams,
}

impl Luminaire {
    /// Ceiling-style luminaire facing straight down.
    pub fn downlight(tag: impl Into<String>, position: Vec3, emitter: EmitterModel) -> Self {
        Luminaire {
            tag: tag.into(),
            pose: Pose::facing_down(position),
            emitter,
            modulation: ModulationParams::default(),
        }
    }
}

/// Detector placed at every evaluation point, with its facing direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverTemplate {
    pub detector: DetectorModel,
    pub axis: Vec3,
}

impl ReceiverTemplate {
    pub fn facing_up(detector: DetectorModel) -> Self {
        ReceiverTemplate {
            detector,
            axis: Vec3::UP,
        }
    }

    pub fn at(&self, position: Vec3) -> Pose {
        Pose::new(position, self.axis).expect("template axis is validated at construction")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    name: String,
    description: String,
    room: Room,
    luminaires: Vec<Luminaire>,
    receiver: ReceiverTemplate,
    noise: NoiseParams,
}

impl Scenario {
    pub fn new(room: Room, luminaires: Vec<Luminaire>, receiver: ReceiverTemplate, noise: NoiseParams) -> Result<Self> {
        if luminaires.is_empty() {
            return Err(Error::Validation {
                key: "luminaire".into(),
                constraint: "at least one luminaire is required".into(),
            });
        }
        for (i, lum) in luminaires.iter().enumerate() {
            if lum.tag.trim().is_empty() {
                return Err(Error::Validation {
                    key: format!("luminaire[{i}].tag"),
                    constraint: "tag must be a non-empty string".into(),
                });
            }
            if let Some(axis) = room.outside_axis(lum.pose.position()) {
                return Err(Error::Validation {
                    key: format!("luminaire[{i}].{axis}"),
                    constraint: "luminaire lies outside the room volume".into(),
                });
            }
        }
        if receiver.axis.normalized().is_none() || !receiver.axis.is_finite() {
            return Err(Error::Validation {
                key: "detector.axis".into(),
                constraint: "receiver axis must be finite and non-zero".into(),
            });
        }
        let receiver = ReceiverTemplate {
            axis: receiver.axis.normalized().unwrap(),
            ..receiver
        };
        noise.validate().map_err(|e| prefixed("noise", None, e))?;
        Ok(Scenario {
            name: String::new(),
            description: String::new(),
            room,
            luminaires,
            receiver,
            noise,
        })
    }

    pub fn with_metadata(mut self, name: impl Into<String>, description: impl Into<String>) -> Self {
        self.name = name.into();
        self.description = description.into();
        self
    }

    pub fn with_noise(self, noise: NoiseParams) -> Result<Self> {
        noise.validate().map_err(|e| prefixed("noise", None, e))?;
        Ok(Scenario { noise, ..self })
    }

    pub fn with_detector(self, detector: DetectorModel) -> Self {
        Scenario {
            receiver: ReceiverTemplate {
                detector,
                ..self.receiver
            },
            ..self
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn room(&self) -> &Room {
        &self.room
    }

    pub fn luminaires(&self) -> &[Luminaire] {
        &self.luminaires
    }

    pub fn receiver(&self) -> &ReceiverTemplate {
        &self.receiver
    }

    pub fn detector(&self) -> &DetectorModel {
        &self.receiver.detector
    }

    pub fn noise(&self) -> &NoiseParams {
        &self.noise
    }

    /// Distinct tag ids in first-appearance order.
    pub fn tags(&self) -> Vec<&str> {
        let mut tags: Vec<&str> = Vec::new();
        for lum in &self.luminaires {
            if !tags.contains(&lum.tag.as_str()) {
                tags.push(&lum.tag);
            }
        }
        tags
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.luminaires.iter().any(|l| l.tag == tag)
    }

    /// Luminaires carrying `tag`, or [`Error::UnknownTag`].
    pub fn luminaires_for(&self, tag: &str) -> Result<Vec<&Luminaire>> {
        let found: Vec<_> = self.luminaires.iter().filter(|l| l.tag == tag).collect();
        if found.is_empty() {
            Err(Error::UnknownTag(tag.to_string()))
        } else {
            Ok(found)
        }
    }

    /// Smallest distance between two luminaire positions, if there are at least two.
    pub fn min_luminaire_spacing(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, a) in self.luminaires.iter().enumerate() {
            for b in &self.luminaires[i + 1..] {
                let d = (a.pose.position() - b.pose.position()).norm();
                if d > 0.0 {
                    best = Some(best.map_or(d, |cur| cur.min(d)));
                }
            }
        }
        best
    }
}

fn prefixed(section: &str, index: Option<usize>, err: Error) -> Error {
    let base = match index {
        Some(i) => format!("{section}[{i}]"),
        None => section.to_string(),
    };
    match err {
        Error::InvalidParameter { name, reason } => Error::Validation {
            key: format!("{base}.{name}"),
            constraint: reason,
        },
        other => other,
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    #[serde(default)]
    name: String,
    #[serde(default)]
    description: String,
    room: RoomDoc,
    #[serde(default)]
    luminaire: Vec<LuminaireDoc>,
    detector: DetectorDoc,
    #[serde(default)]
    noise: NoiseDoc,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RoomDoc {
    width_m: f64,
    depth_m: f64,
    height_m: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LuminaireDoc {
    tag: String,
    x_m: f64,
    y_m: f64,
    z_m: f64,
    power_w: f64,
    semi_angle_deg: f64,
    mod_index: Option<f64>,
    baseband_power: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DetectorDoc {
    area_m2: f64,
    fov_deg: f64,
    gain: f64,
    responsivity_a_per_w: Option<f64>,
    bandwidth_hz: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseDoc {
    background_current_a: Option<f64>,
    i2: Option<f64>,
    thermal_a2: Option<f64>,
    isi_a2: Option<f64>,
}

/// Collects the keys that fell back to their defaults.
struct Defaults(Vec<String>);

impl Defaults {
    fn take(&mut self, value: Option<f64>, key: impl FnOnce() -> String, default: f64) -> f64 {
        value.unwrap_or_else(|| {
            self.0.push(key());
            default
        })
    }
}

fn doc_error(path: &serde_path_to_error::Path, err: &toml::de::Error) -> Error {
    let key = match path.to_string() {
        k if k.is_empty() || k == "." => "<document>".to_string(),
        k => k,
    };
    Error::Parse {
        key,
        message: err.message().trim().to_string(),
    }
}

/// Parses and validates a TOML scenario document, applying defaults for omitted optional keys.
pub fn load_scenario(document: &str) -> Result<Scenario> {
    load_scenario_with_defaults(document).map(|(s, _)| s)
}

/// Like [`load_scenario`], also returning the document keys that took their default value.
pub fn load_scenario_with_defaults(document: &str) -> Result<(Scenario, Vec<String>)> {
    let de = toml::de::Deserializer::parse(document).map_err(|e| Error::Parse {
        key: "<document>".into(),
        message: e.to_string().trim().to_string(),
    })?;
    let mut track = serde_path_to_error::Track::new();
    let doc = ScenarioDoc::deserialize(serde_path_to_error::Deserializer::new(de, &mut track))
        .map_err(|e| doc_error(&track.path(), &e))?;
    let mut defaults = Defaults(Vec::new());
    let modulation_default = ModulationParams::default();

    let room = Room::new(doc.room.width_m, doc.room.depth_m, doc.room.height_m)?;
    let mut luminaires = Vec::with_capacity(doc.luminaire.len());
    for (i, l) in doc.luminaire.iter().enumerate() {
        let emitter = EmitterModel::new(l.power_w, l.semi_angle_deg).map_err(|e| prefixed("luminaire", Some(i), e))?;
        let mod_index = defaults.take(
            l.mod_index,
            || format!("luminaire[{i}].mod_index"),
            modulation_default.modulation_index(),
        );
        let baseband_power = defaults.take(
            l.baseband_power,
            || format!("luminaire[{i}].baseband_power"),
            modulation_default.baseband_power(),
        );
        let modulation =
            ModulationParams::new(mod_index, baseband_power).map_err(|e| prefixed("luminaire", Some(i), e))?;
        let position = Vec3::new(l.x_m, l.y_m, l.z_m);
        if !position.is_finite() {
            return Err(Error::Validation {
                key: format!("luminaire[{i}].x_m"),
                constraint: "coordinates must be finite".into(),
            });
        }
        luminaires.push(Luminaire {
            tag: l.tag.clone(),
            pose: Pose::facing_down(position),
            emitter,
            modulation,
        });
    }

    let d = &doc.detector;
    let responsivity = defaults.take(
        d.responsivity_a_per_w,
        || "detector.responsivity_a_per_w".into(),
        DEFAULT_RESPONSIVITY,
    );
    let bandwidth = defaults.take(d.bandwidth_hz, || "detector.bandwidth_hz".into(), DEFAULT_BANDWIDTH_HZ);
    let detector = DetectorModel::new(d.area_m2, d.fov_deg, d.gain, responsivity, bandwidth)
        .map_err(|e| prefixed("detector", None, e))?;

    let n = &doc.noise;
    let noise = NoiseParams {
        background_current_a: defaults.take(n.background_current_a, || "noise.background_current_a".into(), 0.0),
        bandwidth_factor: defaults.take(n.i2, || "noise.i2".into(), PIN_FET_BANDWIDTH_FACTOR),
        thermal_variance: defaults.take(n.thermal_a2, || "noise.thermal_a2".into(), 0.0),
        isi_variance: defaults.take(n.isi_a2, || "noise.isi_a2".into(), 0.0),
    };
    let scenario = Scenario::new(room, luminaires, ReceiverTemplate::facing_up(detector), noise)?
        .with_metadata(doc.name, doc.description);
    Ok((scenario, defaults.0))
}

/// Luminaire pitch of the built-in layouts, m.
pub const BUILTIN_SPACING_M: f64 = 0.16;

fn table_room() -> Room {
    Room::new(2.0, 2.0, 2.0).expect("valid room")
}

fn table_emitter() -> EmitterModel {
    EmitterModel::new(1.0, 20.0).expect("valid emitter")
}

fn table_receiver() -> ReceiverTemplate {
    let detector =
        DetectorModel::new(1e-4, 60.0, 1.3, DEFAULT_RESPONSIVITY, DEFAULT_BANDWIDTH_HZ).expect("valid detector");
    ReceiverTemplate::facing_up(detector)
}

/// Three luminaires in a line along `x` (a shop-shelf arrangement).
///
/// Tags: `outer-left` at x = -0.16, `inner` at 0, `outer-right` at +0.16.
pub fn builtin_l1() -> Scenario {
    let room = table_room();
    let z = room.height_m();
    let s = BUILTIN_SPACING_M;
    let luminaires = [("outer-left", -s), ("inner", 0.0), ("outer-right", s)]
        .into_iter()
        .map(|(tag, x)| Luminaire::downlight(tag, Vec3::new(x, 0.0, z), table_emitter()))
        .collect();
    Scenario::new(room, luminaires, table_receiver(), NoiseParams::default())
        .expect("built-in scenario is valid")
        .with_metadata("L1", "three luminaires in a line, 16 cm spacing")
}

/// Nine luminaires on a 3×3 square grid (an exhibition-cabinet arrangement).
///
/// Tags are `r{row}c{col}`: row 0..2 runs along `y` from -0.16, column 0..2
/// along `x` from -0.16. The center luminaire is `r1c1`.
pub fn builtin_g1() -> Scenario {
    let room = table_room();
    let z = room.height_m();
    let s = BUILTIN_SPACING_M;
    let offsets = [-s, 0.0, s];
    let mut luminaires = Vec::with_capacity(9);
    for (row, &y) in offsets.iter().enumerate() {
        for (col, &x) in offsets.iter().enumerate() {
            luminaires.push(Luminaire::downlight(
                format!("r{row}c{col}"),
                Vec3::new(x, y, z),
                table_emitter(),
            ));
        }
    }
    Scenario::new(room, luminaires, table_receiver(), NoiseParams::default())
        .expect("built-in scenario is valid")
        .with_metadata("G1", "nine luminaires on a 3x3 grid, 16 cm pitch")
}
