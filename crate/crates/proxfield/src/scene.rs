//! Scene documents: JSON in, validated [`Scene`] out, and back.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "persons": [
//!     {"position": [0.0, 0.0], "orientation_deg": 90.0, "height_m": 1.75, "speed_mps": 1.0}
//!   ],
//!   "options": {"aggregation": "max", "elongation": "kirby-2v", "top_mf": "gaussian"}
//! }
//! ```
//!
//! Each person carries exactly one of `orientation_deg` / `orientation_rad`.
//! The canonical form written by [`serialize_scene`] always uses radians and
//! spells out every option.

use std::collections::BTreeMap;

use proxfield_core::{
    Aggregation, ElongationRule, Person, Region, RegionOverride, RegionOverrides, Scene,
    SceneOptions, TopMembership,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version_default() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDocument {
    #[serde(default = "schema_version_default")]
    pub schema_version: u32,
    pub persons: Vec<PersonDocument>,
    #[serde(default)]
    pub options: OptionsDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PersonDocument {
    pub position: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation_rad: Option<f64>,
    pub height_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed_mps: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AggregationName {
    #[default]
    Max,
    SumClamp,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElongationName {
    #[default]
    #[serde(rename = "kirby-2v")]
    Kirby2v,
    #[serde(rename = "none")]
    None,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopMfName {
    #[default]
    Gaussian,
    SShaped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionName {
    Legs,
    Hips,
    Torso,
    Head,
    Ground,
    Top,
}

impl From<RegionName> for Region {
    fn from(r: RegionName) -> Region {
        match r {
            RegionName::Legs => Region::Legs,
            RegionName::Hips => Region::Hips,
            RegionName::Torso => Region::Torso,
            RegionName::Head => Region::Head,
            RegionName::Ground => Region::Ground,
            RegionName::Top => Region::Top,
        }
    }
}

impl From<Region> for RegionName {
    fn from(r: Region) -> RegionName {
        match r {
            Region::Legs => RegionName::Legs,
            Region::Hips => RegionName::Hips,
            Region::Torso => RegionName::Torso,
            Region::Head => RegionName::Head,
            Region::Ground => RegionName::Ground,
            Region::Top => RegionName::Top,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discomfort: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_height: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDocument {
    #[serde(default)]
    pub aggregation: AggregationName,
    #[serde(default)]
    pub elongation: ElongationName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_above_m: Option<f64>,
    #[serde(default)]
    pub top_mf: TopMfName,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub region_overrides: BTreeMap<RegionName, OverrideDocument>,
}

/// Parses a document without building the scene.
pub fn parse_document(text: &str) -> Result<SceneDocument> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: SceneDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        match inner.classify() {
            serde_json::error::Category::Data => Error::Schema {
                path,
                message: strip_position(&inner),
            },
            _ => Error::Syntax {
                line: inner.line(),
                column: inner.column(),
                message: strip_position(&inner),
            },
        }
    })?;
    de.end().map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e),
    })?;
    Ok(doc)
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

/// Checks a parsed document and builds its scene.
pub fn document_to_scene(doc: &SceneDocument) -> Result<Scene> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(invalid(
            "schema_version",
            format!(
                "unsupported version {}, expected {SCHEMA_VERSION}",
                doc.schema_version
            ),
        ));
    }
    let mut persons = Vec::with_capacity(doc.persons.len());
    for (n, p) in doc.persons.iter().enumerate() {
        let at = |key: &str| format!("persons[{n}].{key}");
        let orientation = match (p.orientation_deg, p.orientation_rad) {
            (Some(deg), None) => deg.to_radians(),
            (None, Some(rad)) => rad,
            (Some(_), Some(_)) => {
                return Err(invalid(
                    format!("persons[{n}]"),
                    "give either orientation_deg or orientation_rad, not both",
                ))
            }
            (None, None) => {
                return Err(invalid(
                    format!("persons[{n}]"),
                    "missing orientation_deg or orientation_rad",
                ))
            }
        };
        if !(p.height_m > 0.0) {
            return Err(invalid(
                at("height_m"),
                format!("must be > 0, got {}", p.height_m),
            ));
        }
        let speed = p.speed_mps.unwrap_or(proxfield_core::agf::DEFAULT_SPEED);
        if !(speed >= 0.0) {
            return Err(invalid(
                at("speed_mps"),
                format!("must be >= 0, got {speed}"),
            ));
        }
        let person = Person::new(p.position, orientation, p.height_m)
            .and_then(|person| person.with_speed(speed))
            .map_err(|e| invalid(format!("persons[{n}]"), e.to_string()))?;
        persons.push(person);
    }

    let o = &doc.options;
    if let Some(z) = o.zero_above_m {
        if !(z >= 0.0) {
            return Err(invalid(
                "options.zero_above_m",
                format!("must be >= 0, got {z}"),
            ));
        }
    }
    let mut overrides = RegionOverrides::new();
    for (&name, ov) in &o.region_overrides {
        overrides.set(
            name.into(),
            RegionOverride {
                discomfort: ov.discomfort,
                sigma: ov.sigma_m,
                relative_height: ov.relative_height,
            },
        );
    }
    let options = SceneOptions {
        aggregation: match o.aggregation {
            AggregationName::Max => Aggregation::Max,
            AggregationName::SumClamp => Aggregation::SumClamp,
        },
        elongation: match o.elongation {
            ElongationName::Kirby2v => ElongationRule::Kirby2v,
            ElongationName::None => ElongationRule::None,
        },
        zero_above: o.zero_above_m,
        top: match o.top_mf {
            TopMfName::Gaussian => TopMembership::Gaussian,
            TopMfName::SShaped => TopMembership::SShaped,
        },
        region_overrides: overrides,
    };
    Scene::new(persons, options).map_err(|e| {
        let path = match &e {
            proxfield_core::Error::InvalidArgument { name, .. }
                if matches!(*name, "sigma" | "discomfort" | "relative_height") =>
            {
                "options.region_overrides"
            }
            _ => "options",
        };
        invalid(path, e.to_string())
    })
}

/// Parses and validates a scene document.
pub fn parse_scene(text: &str) -> Result<Scene> {
    document_to_scene(&parse_document(text)?)
}

/// Canonical document for `scene`.
pub fn scene_to_document(scene: &Scene) -> SceneDocument {
    let o = scene.options();
    SceneDocument {
        schema_version: SCHEMA_VERSION,
        persons: scene
            .persons()
            .map(|p| PersonDocument {
                position: p.position,
                orientation_deg: None,
                orientation_rad: Some(p.orientation),
                height_m: p.height,
                speed_mps: Some(p.speed),
            })
            .collect(),
        options: OptionsDocument {
            aggregation: match o.aggregation {
                Aggregation::Max => AggregationName::Max,
                Aggregation::SumClamp => AggregationName::SumClamp,
            },
            elongation: match o.elongation {
                ElongationRule::Kirby2v => ElongationName::Kirby2v,
                ElongationRule::None => ElongationName::None,
            },
            zero_above_m: o.zero_above,
            top_mf: match o.top {
                TopMembership::Gaussian => TopMfName::Gaussian,
                TopMembership::SShaped => TopMfName::SShaped,
            },
            region_overrides: o
                .region_overrides
                .iter()
                .map(|(r, ov)| {
                    (
                        r.into(),
                        OverrideDocument {
                            discomfort: ov.discomfort,
                            sigma_m: ov.sigma,
                            relative_height: ov.relative_height,
                        },
                    )
                })
                .collect(),
        },
    }
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn serialize_scene(scene: &Scene) -> String {
    let mut s = serde_json::to_string_pretty(&scene_to_document(scene))
        .expect("scene documents contain only finite numbers");
    s.push('\n');
    s
}
