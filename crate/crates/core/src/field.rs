//! The combined three-dimensional discomfort field.
//!
//! A person's field is the geometric mean of the planar Gaussian and the
//! height model, divided by `κ = sqrt(f*)` so that its supremum is one.
//! Scenes aggregate person fields pointwise.

use core::hash::Hasher;

use alloc::format;
use alloc::vec::Vec;

use crate::agf::{agf_eval, AgfParams, ElongationRule, DEFAULT_SPEED};
use crate::body::{build_region_table, RegionOverrides, RegionTable};
use crate::error::{Error, Result};
use crate::fuzzy::{max_z_discomfort, TopMembership, ZDiscomfortModel, ZModelOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Person {
    pub position: [f64; 2],
    /// Heading, radians.
    pub orientation: f64,
    pub height: f64,
    pub speed: f64,
}

impl Person {
    pub fn new(position: [f64; 2], orientation: f64, height: f64) -> Result<Self> {
        Person {
            position,
            orientation,
            height,
            speed: DEFAULT_SPEED,
        }
        .validated()
    }

    pub fn with_speed(mut self, speed: f64) -> Result<Self> {
        self.speed = speed;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        if !(self.height > 0.0) || !self.height.is_finite() {
            return Err(Error::invalid(
                "height",
                format!("must be positive, got {}", self.height),
            ));
        }
        if !(self.speed >= 0.0) || !self.speed.is_finite() {
            return Err(Error::invalid(
                "speed",
                format!("must be >= 0, got {}", self.speed),
            ));
        }
        if !self.position.iter().all(|p| p.is_finite()) || !self.orientation.is_finite() {
            return Err(Error::invalid(
                "position",
                "position and orientation must be finite",
            ));
        }
        Ok(self)
    }
}

/// How person fields combine in a scene.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Aggregation {
    #[default]
    Max,
    /// `min(1, Σ S_i)`.
    SumClamp,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SceneOptions {
    pub aggregation: Aggregation,
    pub elongation: ElongationRule,
    /// Absolute height above which the height model returns zero.
    pub zero_above: Option<f64>,
    pub top: TopMembership,
    pub region_overrides: RegionOverrides,
}

impl SceneOptions {
    fn z_options(&self) -> ZModelOptions {
        ZModelOptions {
            top: self.top,
            zero_above: self.zero_above,
            ..ZModelOptions::default()
        }
    }
}

/// A person with its resolved models and cached normalization constant.
#[derive(Debug, Clone, PartialEq)]
pub struct PersonField {
    person: Person,
    table: Option<RegionTable>,
    z_model: ZDiscomfortModel,
    agf: AgfParams,
    z_peak: f64,
    kappa: f64,
}

impl PersonField {
    pub fn new(person: Person, options: &SceneOptions) -> Result<Self> {
        let person = person.validated()?;
        let overrides = (!options.region_overrides.is_empty()).then_some(&options.region_overrides);
        let table = build_region_table(person.height, overrides)?;
        let z_model = ZDiscomfortModel::from_table(&table, &options.z_options())?;
        let agf = AgfParams::new(
            person.position,
            person.orientation,
            person.speed,
            options.elongation,
        )?;
        let mut field = Self::from_models(person, z_model, agf)?;
        field.table = Some(table);
        Ok(field)
    }

    /// Uses caller-supplied height and planar models. The planar model is
    /// taken as is; its center and heading should match `person`.
    pub fn from_models(person: Person, z_model: ZDiscomfortModel, agf: AgfParams) -> Result<Self> {
        let person = person.validated()?;
        let (z_peak, f_peak) = max_z_discomfort(&z_model);
        if !(f_peak > 0.0) {
            return Err(Error::invalid(
                "z_model",
                "height model is identically zero; the field cannot be normalized",
            ));
        }
        Ok(PersonField {
            person,
            table: None,
            z_model,
            agf,
            z_peak,
            kappa: libm::sqrt(f_peak),
        })
    }

    pub fn person(&self) -> &Person {
        &self.person
    }

    pub fn region_table(&self) -> Option<&RegionTable> {
        self.table.as_ref()
    }

    pub fn z_model(&self) -> &ZDiscomfortModel {
        &self.z_model
    }

    pub fn agf(&self) -> &AgfParams {
        &self.agf
    }

    /// κ = sqrt(f*).
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Height at which the field peaks above the person's position.
    pub fn peak_height(&self) -> f64 {
        self.z_peak
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, r: [f64; 3]) -> f64 {
        let a = agf_eval(&self.agf, r[0], r[1]);
        let f = self.z_model.eval_unchecked(r[2]);
        combine(a, f, self.kappa)
    }
}

/// `sqrt(a·f)/κ` clamped to [0, 1]; zero whenever either factor is.
#[inline]
pub fn combine(planar: f64, vertical: f64, kappa: f64) -> f64 {
    if planar == 0.0 || vertical == 0.0 {
        return 0.0;
    }
    (libm::sqrt(planar * vertical) / kappa).clamp(0.0, 1.0)
}

fn check_point(r: [f64; 3]) -> Result<()> {
    if !r.iter().all(|c| c.is_finite()) {
        return Err(Error::invalid("r", "coordinates must be finite"));
    }
    if r[2] < 0.0 {
        return Err(Error::invalid(
            "r",
            format!("height must be >= 0, got {}", r[2]),
        ));
    }
    Ok(())
}

/// Discomfort that the person of `field` feels with an object at `r`.
pub fn person_discomfort(field: &PersonField, r: [f64; 3]) -> Result<f64> {
    check_point(r)?;
    Ok(field.eval_unchecked(r))
}

/// κ for a height model: square root of its maximum. The planar factor peaks
/// at exactly one, at the person's position.
pub fn normalization_constant(z_model: &ZDiscomfortModel) -> f64 {
    libm::sqrt(max_z_discomfort(z_model).1)
}

/// Persons plus model options; immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    options: SceneOptions,
    fields: Vec<PersonField>,
}

impl Scene {
    pub fn new(persons: Vec<Person>, options: SceneOptions) -> Result<Self> {
        let fields = persons
            .into_iter()
            .map(|p| PersonField::new(p, &options))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scene { options, fields })
    }

    pub fn empty() -> Self {
        Scene {
            options: SceneOptions::default(),
            fields: Vec::new(),
        }
    }

    /// Scene from prebuilt person fields, e.g. with per-person model overrides.
    pub fn from_fields(fields: Vec<PersonField>, options: SceneOptions) -> Self {
        Scene { options, fields }
    }

    pub fn options(&self) -> &SceneOptions {
        &self.options
    }

    pub fn fields(&self) -> &[PersonField] {
        &self.fields
    }

    pub fn persons(&self) -> impl Iterator<Item = &Person> + '_ {
        self.fields.iter().map(PersonField::person)
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, r: [f64; 3]) -> f64 {
        match self.options.aggregation {
            Aggregation::Max => self
                .fields
                .iter()
                .map(|f| f.eval_unchecked(r))
                .fold(0.0, f64::max),
            Aggregation::SumClamp => self
                .fields
                .iter()
                .map(|f| f.eval_unchecked(r))
                .sum::<f64>()
                .min(1.0),
        }
    }

    /// Axis-aligned box covering every person: `margin` meters horizontally,
    /// from the ground to `top_margin` above the tallest person.
    pub fn default_bounds(&self, margin: f64, top_margin: f64) -> Option<[[f64; 2]; 3]> {
        let mut persons = self.persons();
        let first = persons.next()?;
        let mut b = [
            [first.position[0], first.position[0]],
            [first.position[1], first.position[1]],
            [0.0, first.height],
        ];
        for p in persons {
            b[0] = [b[0][0].min(p.position[0]), b[0][1].max(p.position[0])];
            b[1] = [b[1][0].min(p.position[1]), b[1][1].max(p.position[1])];
            b[2][1] = b[2][1].max(p.height);
        }
        Some([
            [b[0][0] - margin, b[0][1] + margin],
            [b[1][0] - margin, b[1][1] + margin],
            [0.0, b[2][1] + top_margin],
        ])
    }

    /// Stable 64-bit fingerprint of the persons and options.
    pub fn fingerprint(&self) -> u64 {
        let mut h = fnv::FnvHasher::default();
        let o = &self.options;
        h.write_u8(o.aggregation as u8);
        h.write_u8(o.elongation as u8);
        h.write_u8(o.top as u8);
        h.write_u64(o.zero_above.map_or(u64::MAX, f64::to_bits));
        for (region, ov) in o.region_overrides.iter() {
            h.write_u8(region as u8);
            for v in [ov.discomfort, ov.sigma, ov.relative_height] {
                h.write_u64(v.map_or(u64::MAX, f64::to_bits));
            }
        }
        for p in self.persons() {
            for v in [
                p.position[0],
                p.position[1],
                p.orientation,
                p.height,
                p.speed,
            ] {
                h.write_u64(v.to_bits());
            }
        }
        h.finish()
    }
}

/// Aggregated discomfort at `r`; zero for an empty scene.
pub fn scene_discomfort(scene: &Scene, r: [f64; 3]) -> Result<f64> {
    check_point(r)?;
    Ok(scene.eval_unchecked(r))
}
