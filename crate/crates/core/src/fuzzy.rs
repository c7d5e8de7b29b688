//! Zero-order Sugeno inference of discomfort along the vertical axis.
//!
//! Each region contributes one single-antecedent rule `if z is <region> then
//! discomfort is c`. Rule activations are the membership degrees and the
//! crisp output is their weighted average of consequents.

use alloc::format;
use alloc::vec::Vec;

use crate::body::{Region, RegionTable};
use crate::error::{Error, Result};

/// Default activation-sum threshold below which the weighted average is
/// treated as degenerate.
pub const DEFAULT_UNDERFLOW_EPSILON: f64 = 1e-12;

/// Step of the coarse scan that brackets the maximizer of f.
const SCAN_STEP: f64 = 1e-3;
/// Bracket width at which golden-section refinement stops.
const REFINE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipFunction {
    Gaussian {
        center: f64,
        sigma: f64,
    },
    /// Smoothstep rising from 0 at `foot` to 1 at `shoulder`.
    SShaped {
        foot: f64,
        shoulder: f64,
    },
}

impl MembershipFunction {
    pub fn gaussian(center: f64, sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(MembershipFunction::Gaussian { center, sigma })
    }

    pub fn s_shaped(foot: f64, shoulder: f64) -> Result<Self> {
        check_s_bounds(foot, shoulder)?;
        Ok(MembershipFunction::SShaped { foot, shoulder })
    }

    #[inline]
    pub fn eval(&self, z: f64) -> f64 {
        match *self {
            MembershipFunction::Gaussian { center, sigma } => gaussian(z, center, sigma),
            MembershipFunction::SShaped { foot, shoulder } => smoothstep(z, foot, shoulder),
        }
    }

    /// Spread-normalized distance from `z` to the set's core, used to pick
    /// the nearest rule when every activation has underflowed.
    fn core_distance(&self, z: f64) -> f64 {
        match *self {
            MembershipFunction::Gaussian { center, sigma } => libm::fabs(z - center) / sigma,
            MembershipFunction::SShaped { foot, shoulder } => {
                if z >= shoulder {
                    0.0
                } else {
                    (shoulder - z) / (shoulder - foot)
                }
            }
        }
    }

    /// Upper end of the height range where this set carries weight.
    fn reach(&self) -> f64 {
        match *self {
            MembershipFunction::Gaussian { center, sigma } => center + 4.0 * sigma,
            MembershipFunction::SShaped { shoulder, .. } => shoulder,
        }
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "sigma",
            format!("must be positive, got {sigma}"),
        ))
    }
}

fn check_s_bounds(a: f64, b: f64) -> Result<()> {
    if a < b && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "shoulder",
            format!("foot {a} must lie below shoulder {b}"),
        ))
    }
}

#[inline]
fn gaussian(z: f64, center: f64, sigma: f64) -> f64 {
    let d = z - center;
    libm::exp(-(d * d) / (2.0 * sigma * sigma))
}

#[inline]
fn smoothstep(z: f64, a: f64, b: f64) -> f64 {
    if z <= a {
        0.0
    } else if z >= b {
        1.0
    } else {
        let t = (z - a) / (b - a);
        t * t * (3.0 - 2.0 * t)
    }
}

/// Gaussian membership degree `exp(-(z-μ)²/(2σ²))`.
pub fn gaussian_mf(z: f64, center: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(gaussian(z, center, sigma))
}

/// Smoothstep membership: 0 up to `a`, 1 from `b`, C¹ cubic in between.
pub fn s_shaped_mf(z: f64, a: f64, b: f64) -> Result<f64> {
    check_s_bounds(a, b)?;
    Ok(smoothstep(z, a, b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzyRule {
    /// Region the rule was built from, if any.
    pub region: Option<Region>,
    pub antecedent: MembershipFunction,
    pub consequent: f64,
}

impl FuzzyRule {
    pub fn new(antecedent: MembershipFunction, consequent: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&consequent) {
            return Err(Error::invalid(
                "consequent",
                format!("must lie in [0, 1], got {consequent}"),
            ));
        }
        Ok(FuzzyRule {
            region: None,
            antecedent,
            consequent,
        })
    }
}

/// Shape of the `top` membership function.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TopMembership {
    #[default]
    Gaussian,
    /// Smoothstep from the head anchor up to the top anchor.
    SShaped,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZModelOptions {
    pub top: TopMembership,
    /// Heights strictly above this cutoff evaluate to zero.
    pub zero_above: Option<f64>,
    pub underflow_epsilon: f64,
}

impl Default for ZModelOptions {
    fn default() -> Self {
        ZModelOptions {
            top: TopMembership::Gaussian,
            zero_above: None,
            underflow_epsilon: DEFAULT_UNDERFLOW_EPSILON,
        }
    }
}

/// Discomfort as a function of height above ground.
#[derive(Debug, Clone, PartialEq)]
pub struct ZDiscomfortModel {
    rules: Vec<FuzzyRule>,
    underflow_epsilon: f64,
    zero_above: Option<f64>,
}

impl ZDiscomfortModel {
    /// One rule per region of `table`.
    pub fn from_table(table: &RegionTable, options: &ZModelOptions) -> Result<Self> {
        let head = table.get(Region::Head).center;
        let rules = table
            .regions()
            .iter()
            .map(|r| {
                let antecedent = match (r.region, options.top) {
                    (Region::Top, TopMembership::SShaped) => {
                        MembershipFunction::s_shaped(head, r.center)?
                    }
                    _ => MembershipFunction::gaussian(r.center, r.sigma)?,
                };
                Ok(FuzzyRule {
                    region: Some(r.region),
                    antecedent,
                    consequent: r.discomfort,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rules(rules, options)
    }

    /// Arbitrary nonempty rule base.
    pub fn from_rules(rules: Vec<FuzzyRule>, options: &ZModelOptions) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::invalid("rules", "at least one rule is required"));
        }
        for rule in &rules {
            if !(0.0..=1.0).contains(&rule.consequent) {
                return Err(Error::invalid(
                    "consequent",
                    format!("must lie in [0, 1], got {}", rule.consequent),
                ));
            }
        }
        if !(options.underflow_epsilon > 0.0) {
            return Err(Error::invalid(
                "underflow_epsilon",
                format!("must be positive, got {}", options.underflow_epsilon),
            ));
        }
        if let Some(cut) = options.zero_above {
            if !(cut >= 0.0) || !cut.is_finite() {
                return Err(Error::invalid(
                    "zero_above",
                    format!("must be a nonnegative height, got {cut}"),
                ));
            }
        }
        Ok(ZDiscomfortModel {
            rules,
            underflow_epsilon: options.underflow_epsilon,
            zero_above: options.zero_above,
        })
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    pub fn zero_above(&self) -> Option<f64> {
        self.zero_above
    }

    /// Upper end of the maximization interval.
    pub fn search_upper(&self) -> f64 {
        self.rules
            .iter()
            .map(|r| r.antecedent.reach())
            .fold(0.0, f64::max)
    }

    /// f(z); rejects negative or non-finite heights.
    pub fn eval(&self, z: f64) -> Result<f64> {
        if !(z >= 0.0) || !z.is_finite() {
            return Err(Error::invalid(
                "z",
                format!("height must be a finite value >= 0, got {z}"),
            ));
        }
        Ok(self.eval_unchecked(z))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, z: f64) -> f64 {
        if matches!(self.zero_above, Some(cut) if z > cut) {
            return 0.0;
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for rule in &self.rules {
            let w = rule.antecedent.eval(z);
            num += w * rule.consequent;
            den += w;
        }
        if den < self.underflow_epsilon {
            return self.nearest_consequent(z);
        }
        (num / den).clamp(0.0, 1.0)
    }

    fn nearest_consequent(&self, z: f64) -> f64 {
        let mut best = &self.rules[0];
        let mut best_d = best.antecedent.core_distance(z);
        for rule in &self.rules[1..] {
            let d = rule.antecedent.core_distance(z);
            if d < best_d {
                best = rule;
                best_d = d;
            }
        }
        best.consequent
    }
}

/// f(z) for `model`.
pub fn z_discomfort(model: &ZDiscomfortModel, z: f64) -> Result<f64> {
    model.eval(z)
}

/// Samples f at `z_min + k·step` for every k with the sample not exceeding `z_max`.
pub fn z_profile(
    model: &ZDiscomfortModel,
    z_min: f64,
    z_max: f64,
    step: f64,
) -> Result<Vec<(f64, f64)>> {
    if !(z_min >= 0.0) {
        return Err(Error::invalid(
            "z_min",
            format!("must be >= 0, got {z_min}"),
        ));
    }
    if !(z_min < z_max) || !z_max.is_finite() {
        return Err(Error::invalid(
            "z_max",
            format!("must exceed z_min {z_min}, got {z_max}"),
        ));
    }
    if !(step > 0.0) {
        return Err(Error::invalid(
            "step",
            format!("must be positive, got {step}"),
        ));
    }
    let count = sample_count(z_max - z_min, step);
    (0..count)
        .map(|k| {
            let z = z_min + k as f64 * step;
            model.eval(z).map(|f| (z, f))
        })
        .collect()
}

/// Number of uniform samples `0, step, 2·step, …` within `span`, inclusive.
/// A relative slack absorbs rounding when `span` is an exact multiple of `step`.
pub(crate) fn sample_count(span: f64, step: f64) -> usize {
    libm::floor(span / step * (1.0 + 1e-12) + 1e-9) as usize + 1
}

/// Maximizes a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Global maximizer `(z*, f*)` of f over `[0, search_upper]`.
///
/// f is multimodal across region anchors, so a 1 mm scan brackets the best
/// sample before golden-section refinement.
pub fn max_z_discomfort(model: &ZDiscomfortModel) -> (f64, f64) {
    let upper = model.search_upper();
    let n = libm::ceil(upper / SCAN_STEP) as usize;
    let mut best_z = 0.0;
    let mut best_f = model.eval_unchecked(0.0);
    for i in 1..=n {
        let z = (i as f64 * SCAN_STEP).min(upper);
        let f = model.eval_unchecked(z);
        if f > best_f {
            best_z = z;
            best_f = f;
        }
    }
    let lo = (best_z - SCAN_STEP).max(0.0);
    let hi = (best_z + SCAN_STEP).min(upper.max(best_z));
    if hi > lo {
        let (z, f) = golden_section_max(|z| model.eval_unchecked(z), lo, hi, REFINE_TOLERANCE);
        if f > best_f {
            return (z, f);
        }
    }
    (best_z, best_f)
}
