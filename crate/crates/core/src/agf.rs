//! Planar personal space as an asymmetric Gaussian around the person.
//!
//! The longitudinal spread switches between a front value (possibly
//! elongated by walking speed) and a rear value according to the bearing of
//! the query point relative to the person's heading; the lateral spread is
//! shared by both halves.

use core::f64::consts::{FRAC_PI_2, PI, TAU};

use alloc::format;

use crate::error::{Error, Result};

/// Base front spread for a stationary person, meters.
pub const DEFAULT_SIGMA_HEAD: f64 = 0.5;
/// Speed used to elongate the front spread even for standing persons, m/s.
pub const DEFAULT_SPEED: f64 = 1.0;

/// How the front spread grows with speed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ElongationRule {
    /// `max(2·v·σ_h, σ_h)`.
    #[default]
    Kirby2v,
    /// Front spread equals σ_h regardless of speed.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Quadratic {
    a: f64,
    b: f64,
    c: f64,
}

impl Quadratic {
    fn new(cos: f64, sin: f64, sin2: f64, longitudinal: f64, lateral: f64) -> Self {
        let l2 = longitudinal * longitudinal;
        let s2 = lateral * lateral;
        Quadratic {
            a: cos * cos / (2.0 * l2) + sin * sin / (2.0 * s2),
            b: sin2 / (4.0 * l2) - sin2 / (4.0 * s2),
            c: sin * sin / (2.0 * l2) + cos * cos / (2.0 * s2),
        }
    }

    #[inline]
    fn eval(&self, dx: f64, dy: f64) -> f64 {
        libm::exp(-(self.a * dx * dx + 2.0 * self.b * dx * dy + self.c * dy * dy))
    }
}

/// Asymmetric Gaussian coefficients for one person.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgfParams {
    center: [f64; 2],
    orientation: f64,
    sigma_head: f64,
    sigma_side: f64,
    sigma_rear: f64,
    speed: f64,
    elongation: ElongationRule,
    front: Quadratic,
    rear: Quadratic,
}

impl AgfParams {
    /// Default spreads: σ_h = 1/2, σ_s = 2/3·σ_h, σ_r = 1/2·σ_h.
    pub fn new(
        center: [f64; 2],
        orientation: f64,
        speed: f64,
        elongation: ElongationRule,
    ) -> Result<Self> {
        Self::with_spreads(
            center,
            orientation,
            DEFAULT_SIGMA_HEAD,
            DEFAULT_SIGMA_HEAD * 2.0 / 3.0,
            DEFAULT_SIGMA_HEAD / 2.0,
            speed,
            elongation,
        )
    }

    pub fn with_spreads(
        center: [f64; 2],
        orientation: f64,
        sigma_head: f64,
        sigma_side: f64,
        sigma_rear: f64,
        speed: f64,
        elongation: ElongationRule,
    ) -> Result<Self> {
        for (name, v) in [
            ("sigma_head", sigma_head),
            ("sigma_side", sigma_side),
            ("sigma_rear", sigma_rear),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if !(speed >= 0.0) || !speed.is_finite() {
            return Err(Error::invalid(
                "speed",
                format!("must be >= 0, got {speed}"),
            ));
        }
        if !center.iter().all(|c| c.is_finite()) || !orientation.is_finite() {
            return Err(Error::invalid(
                "center",
                "position and orientation must be finite",
            ));
        }
        let sigma_front = front_sigma(elongation, sigma_head, speed);
        if sigma_front < sigma_rear {
            return Err(Error::invalid(
                "sigma_rear",
                format!("front spread {sigma_front} must not be below rear spread {sigma_rear}"),
            ));
        }
        let (sin, cos) = libm::sincos(orientation);
        let sin2 = libm::sin(2.0 * orientation);
        Ok(AgfParams {
            center,
            orientation,
            sigma_head,
            sigma_side,
            sigma_rear,
            speed,
            elongation,
            front: Quadratic::new(cos, sin, sin2, sigma_front, sigma_side),
            rear: Quadratic::new(cos, sin, sin2, sigma_rear, sigma_side),
        })
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    pub fn sigma_head(&self) -> f64 {
        self.sigma_head
    }

    pub fn sigma_side(&self) -> f64 {
        self.sigma_side
    }

    pub fn sigma_rear(&self) -> f64 {
        self.sigma_rear
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn elongation(&self) -> ElongationRule {
        self.elongation
    }
}

fn front_sigma(rule: ElongationRule, sigma_head: f64, speed: f64) -> f64 {
    match rule {
        ElongationRule::Kirby2v => (2.0 * speed * sigma_head).max(sigma_head),
        ElongationRule::None => sigma_head,
    }
}

/// Front spread after applying the elongation rule.
pub fn effective_front_sigma(params: &AgfParams) -> f64 {
    front_sigma(params.elongation, params.sigma_head, params.speed)
}

/// Wraps an angle to (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a - TAU * libm::floor((a + PI) / TAU);
    if w <= -PI {
        w += TAU;
    }
    w
}

/// Planar discomfort at `(x, y)`, in (0, 1] and exactly 1 at the center.
pub fn agf_eval(params: &AgfParams, x: f64, y: f64) -> f64 {
    let dx = x - params.center[0];
    let dy = y - params.center[1];
    let bearing = wrap_angle(libm::atan2(dy, dx) - params.orientation);
    let q = if libm::fabs(bearing) <= FRAC_PI_2 {
        &params.front
    } else {
        &params.rear
    };
    q.eval(dx, dy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn person(theta: f64, speed: f64) -> AgfParams {
        AgfParams::new([0.0, 0.0], theta, speed, ElongationRule::Kirby2v).unwrap()
    }

    #[test]
    fn front_sigma_rule() {
        assert_eq!(effective_front_sigma(&person(0.0, 0.0)), 0.5);
        assert_eq!(effective_front_sigma(&person(0.0, 1.0)), 1.0);
        assert_eq!(effective_front_sigma(&person(0.0, 0.2)), 0.5);
        let still = AgfParams::new([0.0, 0.0], 0.0, 3.0, ElongationRule::None).unwrap();
        assert_eq!(effective_front_sigma(&still), 0.5);
    }

    #[test]
    fn analytic_values() {
        let p = person(0.0, 1.0);
        assert_eq!(agf_eval(&p, 0.0, 0.0), 1.0);
        let side = agf_eval(&p, 0.0, 1.0 / 3.0);
        assert!((side - libm::exp(-0.5)).abs() < 1e-12);
        assert!((agf_eval(&p, 1.0, 0.0) - libm::exp(-0.5)).abs() < 1e-12);
        assert!((agf_eval(&p, -1.0, 0.0) - libm::exp(-8.0)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_spreads() {
        let k = ElongationRule::Kirby2v;
        assert!(AgfParams::with_spreads([0.0; 2], 0.0, 0.0, 0.3, 0.2, 1.0, k).is_err());
        assert!(AgfParams::new([0.0; 2], 0.0, -1.0, k).is_err());
        // rear wider than front
        assert!(AgfParams::with_spreads([0.0; 2], 0.0, 0.5, 0.3, 0.8, 0.0, k).is_err());
    }

    #[test]
    fn wrap_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + FRAC_PI_2).abs() < 1e-15);
        assert!((wrap_angle(0.25 + 4.0 * TAU) - 0.25).abs() < 1e-12);
    }
}
