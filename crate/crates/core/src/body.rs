//! Body-region segmentation and the pressure-limit derived discomfort table.
//!
//! Four body regions (legs, hips, torso, head) carry a maximum permissible
//! pressure and a landmark height expressed as a fraction of the person's
//! height. Two synthetic regions close the vertical range: `ground` at z = 0
//! and `top` a fixed offset above the head.

use core::fmt;
use core::str::FromStr;

use alloc::format;

use crate::error::{Error, Result};

/// Lowest permissible pressure among the body regions (head), N/cm².
pub const REFERENCE_MPP: f64 = 65.0;

/// Absolute offset of the `top` anchor above the person's height, meters.
pub const TOP_OFFSET: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    Legs,
    Hips,
    Torso,
    Head,
    Ground,
    Top,
}

impl Region {
    /// Rule order of the height model.
    pub const ALL: [Region; 6] = [
        Region::Legs,
        Region::Hips,
        Region::Torso,
        Region::Head,
        Region::Ground,
        Region::Top,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Region::Legs => "legs",
            Region::Hips => "hips",
            Region::Torso => "torso",
            Region::Head => "head",
            Region::Ground => "ground",
            Region::Top => "top",
        }
    }

    pub fn is_body(self) -> bool {
        matches!(
            self,
            Region::Legs | Region::Hips | Region::Torso | Region::Head
        )
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Region::ALL
            .into_iter()
            .find(|r| r.label() == s)
            .ok_or_else(|| Error::invalid("region", format!("unknown region label `{s}`")))
    }
}

/// Static description of one region before it is resolved for a height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSpec {
    pub region: Region,
    /// Maximum permissible pressure, N/cm². `None` for ground and top.
    pub mpp: Option<f64>,
    pub discomfort: f64,
    /// Landmark height as a fraction of the person's height. `None` for ground and top.
    pub relative_height: Option<f64>,
    /// Membership spread, meters.
    pub sigma: f64,
}

impl RegionSpec {
    /// Default parameters for `region`.
    ///
    /// Body-region discomfort is stored at three decimals (0.591, 0.464) rather
    /// than as the exact pressure quotient.
    pub const fn default_for(region: Region) -> RegionSpec {
        let (mpp, discomfort, relative_height, sigma) = match region {
            Region::Head => (Some(65.0), 1.000, Some(0.903), 0.25),
            Region::Torso => (Some(110.0), 0.591, Some(0.630), 0.3),
            Region::Hips => (Some(140.0), 0.464, Some(0.431), 0.3),
            Region::Legs => (Some(130.0), 0.500, Some(0.142), 0.3),
            Region::Ground => (None, 1.0, None, 0.1),
            Region::Top => (None, 0.0, None, 0.3),
        };
        RegionSpec {
            region,
            mpp,
            discomfort,
            relative_height,
            sigma,
        }
    }
}

/// Partial replacement of a region's parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RegionOverride {
    pub discomfort: Option<f64>,
    pub sigma: Option<f64>,
    /// Only meaningful for body regions.
    pub relative_height: Option<f64>,
}

impl RegionOverride {
    pub fn is_empty(&self) -> bool {
        self.discomfort.is_none() && self.sigma.is_none() && self.relative_height.is_none()
    }
}

/// Per-region overrides, at most one per region.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RegionOverrides {
    entries: [Option<RegionOverride>; 6],
}

impl RegionOverrides {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, region: Region, value: RegionOverride) -> &mut Self {
        self.entries[region.index()] = Some(value);
        self
    }

    pub fn with(mut self, region: Region, value: RegionOverride) -> Self {
        self.set(region, value);
        self
    }

    pub fn get(&self, region: Region) -> Option<&RegionOverride> {
        self.entries[region.index()].as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.iter().all(Option::is_none)
    }

    /// Overrides in rule order.
    pub fn iter(&self) -> impl Iterator<Item = (Region, &RegionOverride)> + '_ {
        Region::ALL
            .into_iter()
            .filter_map(move |r| self.get(r).map(|o| (r, o)))
    }
}

/// A region resolved for a concrete height: absolute anchor, spread and consequent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedRegion {
    pub region: Region,
    pub center: f64,
    pub sigma: f64,
    pub discomfort: f64,
}

/// The six regions instantiated for one person height.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionTable {
    height: f64,
    regions: [ResolvedRegion; 6],
}

impl RegionTable {
    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn get(&self, region: Region) -> &ResolvedRegion {
        &self.regions[region.index()]
    }

    /// Regions in rule order (legs, hips, torso, head, ground, top).
    pub fn regions(&self) -> &[ResolvedRegion; 6] {
        &self.regions
    }
}

/// Maps a permissible pressure to a discomfort value in [0, 1].
///
/// Pressures below the reference are accepted but logged, since the quotient
/// would exceed one before clamping.
pub fn discomfort_from_mpp(mpp: f64, reference_mpp: f64) -> Result<f64> {
    if !(mpp > 0.0) || !mpp.is_finite() {
        return Err(Error::invalid(
            "mpp",
            format!("must be positive, got {mpp}"),
        ));
    }
    if !(reference_mpp > 0.0) || !reference_mpp.is_finite() {
        return Err(Error::invalid(
            "reference_mpp",
            format!("must be positive, got {reference_mpp}"),
        ));
    }
    if reference_mpp > mpp {
        log::warn!(
            "reference pressure {reference_mpp} exceeds region pressure {mpp}; clamping to 1"
        );
    }
    Ok((reference_mpp / mpp).clamp(0.0, 1.0))
}

/// Absolute anchor height of `region` for a person of height `h`.
pub fn region_anchor_height(region: Region, h: f64) -> Result<f64> {
    check_height(h)?;
    let spec = RegionSpec::default_for(region);
    Ok(anchor(region, spec.relative_height, h))
}

fn anchor(region: Region, relative_height: Option<f64>, h: f64) -> f64 {
    match region {
        Region::Ground => 0.0,
        Region::Top => h + TOP_OFFSET,
        _ => relative_height.unwrap_or(0.0) * h,
    }
}

fn check_height(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "height",
            format!("must be positive, got {h}"),
        ))
    }
}

/// Builds the region table for height `h`, applying `overrides` on top of the defaults.
pub fn build_region_table(h: f64, overrides: Option<&RegionOverrides>) -> Result<RegionTable> {
    check_height(h)?;
    let mut regions = Region::ALL.map(|region| {
        let spec = RegionSpec::default_for(region);
        ResolvedRegion {
            region,
            center: anchor(region, spec.relative_height, h),
            sigma: spec.sigma,
            discomfort: spec.discomfort,
        }
    });

    if let Some(overrides) = overrides {
        for (region, ov) in overrides.iter() {
            let slot = &mut regions[region.index()];
            if let Some(c) = ov.discomfort {
                if !(0.0..=1.0).contains(&c) {
                    return Err(Error::invalid(
                        "discomfort",
                        format!("{region}: must lie in [0, 1], got {c}"),
                    ));
                }
                slot.discomfort = c;
            }
            if let Some(sigma) = ov.sigma {
                if !(sigma > 0.0) || !sigma.is_finite() {
                    return Err(Error::invalid(
                        "sigma",
                        format!("{region}: must be positive, got {sigma}"),
                    ));
                }
                slot.sigma = sigma;
            }
            if let Some(rh) = ov.relative_height {
                if !region.is_body() {
                    return Err(Error::invalid(
                        "relative_height",
                        format!("{region} has a fixed anchor"),
                    ));
                }
                if !(0.0..=1.0).contains(&rh) {
                    return Err(Error::invalid(
                        "relative_height",
                        format!("{region}: must lie in [0, 1], got {rh}"),
                    ));
                }
                slot.center = rh * h;
            }
        }
    }

    let ordered = [
        Region::Ground,
        Region::Legs,
        Region::Hips,
        Region::Torso,
        Region::Head,
        Region::Top,
    ];
    for pair in ordered.windows(2) {
        let (lo, hi) = (regions[pair[0].index()], regions[pair[1].index()]);
        if !(lo.center < hi.center) {
            return Err(Error::invalid(
                "relative_height",
                format!(
                    "anchors must increase: {} at {} is not below {} at {}",
                    lo.region, lo.center, hi.region, hi.center
                ),
            ));
        }
    }

    Ok(RegionTable { height: h, regions })
}
