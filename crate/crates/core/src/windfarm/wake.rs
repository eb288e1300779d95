//! Jensen wake primitives.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Power of the `(1 + αx/r1)` term in the single-wake deficit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum WakeExponent {
    /// `(1 + αx/r1)^1`
    Linear,
    /// `(1 + αx/r1)^2`, the usual Jensen form.
    #[default]
    Squared,
}

impl WakeExponent {
    pub fn power(self) -> i32 {
        match self {
            WakeExponent::Linear => 1,
            WakeExponent::Squared => 2,
        }
    }
}

impl TryFrom<u8> for WakeExponent {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(WakeExponent::Linear),
            2 => Ok(WakeExponent::Squared),
            other => Err(Error::InvalidParameter(format!("wake exponent must be 1 or 2, got {other}"))),
        }
    }
}

impl From<WakeExponent> for u8 {
    fn from(e: WakeExponent) -> u8 {
        e.power() as u8
    }
}

/// `a = (1 − √(1 − C_T)) / 2`.
pub fn axial_induction(thrust_coefficient: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&thrust_coefficient) {
        return Err(Error::InvalidParameter(format!(
            "thrust coefficient must lie in [0, 1), got {thrust_coefficient}"
        )));
    }
    Ok((1.0 - (1.0 - thrust_coefficient).sqrt()) / 2.0)
}

/// `r1 = r · √((1 − a) / (1 − 2a))`.
pub fn downstream_rotor_radius(rotor_radius: f64, induction: f64) -> Result<f64> {
    if induction >= 0.5 {
        return Err(Error::InvalidParameter(format!(
            "axial induction must be below 0.5, got {induction}"
        )));
    }
    Ok(rotor_radius * ((1.0 - induction) / (1.0 - 2.0 * induction)).sqrt())
}

/// `α = 0.5 / ln(h / z0)`.
pub fn entrainment_constant(hub_height: f64, roughness: f64) -> Result<f64> {
    if !(roughness > 0.0 && hub_height > roughness) {
        return Err(Error::InvalidParameter(format!(
            "need hub height > roughness > 0, got h = {hub_height}, z0 = {roughness}"
        )));
    }
    Ok(0.5 / (hub_height / roughness).ln())
}

/// Radius of the conical wake `x` metres downstream.
pub fn wake_radius(entrainment: f64, downstream: f64, r1: f64) -> f64 {
    entrainment * downstream + r1
}

/// Log-law speed at hub height `hub_height` given `u_ref` at `ref_height`.
pub fn local_free_speed(u_ref: f64, hub_height: f64, ref_height: f64, roughness: f64) -> f64 {
    u_ref * (hub_height / roughness).ln() / (ref_height / roughness).ln()
}

/// Speed at a turbine `downstream` metres behind a single upstream rotor.
pub fn single_wake_speed(
    free_speed: f64,
    induction: f64,
    entrainment: f64,
    downstream: f64,
    r1: f64,
    exponent: WakeExponent,
) -> f64 {
    free_speed * (1.0 - velocity_deficit(induction, entrainment, downstream, r1, exponent))
}

/// Fractional deficit `2a / (1 + αx/r1)^e`.
#[inline]
pub fn velocity_deficit(induction: f64, entrainment: f64, downstream: f64, r1: f64, exponent: WakeExponent) -> f64 {
    2.0 * induction / (1.0 + entrainment * downstream / r1).powi(exponent.power())
}

/// Area of the rotor disc (radius `rotor`) covered by a wake disc (radius
/// `wake`) whose axis is `offset` metres away.
pub fn overlap_area(offset: f64, rotor: f64, wake: f64) -> Result<f64> {
    if rotor < 0.0 || wake < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "radii must be non-negative, got rotor = {rotor}, wake = {wake}"
        )));
    }
    if offset < 0.0 {
        return Err(Error::InvalidParameter(format!("offset must be non-negative, got {offset}")));
    }
    Ok(lens_area(offset, rotor, wake))
}

pub(crate) fn lens_area(d: f64, r1: f64, r2: f64) -> f64 {
    if d >= r1 + r2 {
        return 0.0;
    }
    if d + r1 <= r2 {
        return PI * r1 * r1;
    }
    if d + r2 <= r1 {
        return PI * r2 * r2;
    }
    let c1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0);
    let c2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0);
    let k = ((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)).max(0.0);
    r1 * r1 * c1.acos() + r2 * r2 * c2.acos() - 0.5 * k.sqrt()
}

/// One upstream wake acting on a turbine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WakeInfluence {
    /// Speed at the turbine under this wake alone.
    pub waked_speed: f64,
    /// Free speed at the upstream turbine.
    pub upstream_free_speed: f64,
    /// Rotor area covered by the wake.
    pub overlap: f64,
}

/// Root-sum-square superposition of partial wakes, clamped at zero.
pub fn combined_wake_speed(influences: &[WakeInfluence], free_speed: f64, rotor_radius: f64) -> f64 {
    let disc = PI * rotor_radius * rotor_radius;
    let sum: f64 = influences
        .iter()
        .map(|w| w.overlap / disc * (1.0 - w.waked_speed / w.upstream_free_speed).powi(2))
        .sum();
    free_speed * (1.0 - sum.sqrt()).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Hand/script evaluations of the closed forms, computed before the
    // implementation existed.
    const A_08: f64 = 0.27639320225002106;
    const R1: f64 = 50.88078598056276;
    const ALPHA: f64 = 0.09436958290887743;

    #[test]
    fn induction_values() {
        assert_relative_eq!(axial_induction(0.8).unwrap(), A_08, max_relative = 1e-14);
        assert_eq!(axial_induction(0.0).unwrap(), 0.0);
        assert_eq!(axial_induction(0.75).unwrap(), 0.25);
        assert!(axial_induction(1.0).is_err());
        assert!(axial_induction(1.2).is_err());
    }

    #[test]
    fn downstream_radius_values() {
        assert_relative_eq!(downstream_rotor_radius(40.0, A_08).unwrap(), R1, max_relative = 1e-14);
        assert_eq!(downstream_rotor_radius(40.0, 0.0).unwrap(), 40.0);
        assert_eq!(downstream_rotor_radius(0.0, A_08).unwrap(), 0.0);
        assert!(downstream_rotor_radius(40.0, 0.5).is_err());
    }

    #[test]
    fn entrainment_values() {
        assert_relative_eq!(entrainment_constant(60.0, 0.3).unwrap(), ALPHA, max_relative = 1e-14);
        assert_relative_eq!(entrainment_constant(0.3 * std::f64::consts::E, 0.3).unwrap(), 0.5, max_relative = 1e-14);
        assert!(entrainment_constant(78.0, 0.3).unwrap() < ALPHA);
        assert!(entrainment_constant(0.3, 0.3).is_err());
    }

    #[test]
    fn wake_radius_values() {
        assert_eq!(wake_radius(ALPHA, 0.0, R1), R1);
        assert_relative_eq!(wake_radius(ALPHA, 400.0, R1), 88.62861914411374, max_relative = 1e-12);
        let d = wake_radius(ALPHA, 800.0, R1) - wake_radius(ALPHA, 400.0, R1);
        assert_relative_eq!(d, ALPHA * 400.0, max_relative = 1e-12);
    }

    #[test]
    fn free_speed_values() {
        assert_eq!(local_free_speed(8.2, 60.0, 60.0, 0.3), 8.2);
        assert_relative_eq!(local_free_speed(8.2, 78.0, 60.0, 0.3), 8.60605098181106, max_relative = 1e-12);
        assert_eq!(local_free_speed(0.0, 78.0, 60.0, 0.3), 0.0);
    }

    #[test]
    fn single_wake_values() {
        let sq = single_wake_speed(8.2, A_08, ALPHA, 400.0, R1, WakeExponent::Squared);
        assert_relative_eq!(sq, 6.706067887485673, max_relative = 1e-12);
        let lin = single_wake_speed(8.2, A_08, ALPHA, 400.0, R1, WakeExponent::Linear);
        assert_relative_eq!(lin, 5.597737914705675, max_relative = 1e-12);
        let far = single_wake_speed(8.2, A_08, ALPHA, 1e12, R1, WakeExponent::Squared);
        assert_relative_eq!(far, 8.2, max_relative = 1e-9);
    }

    #[test]
    fn overlap_values() {
        let r = 40.0;
        assert_relative_eq!(overlap_area(0.0, r, 60.0).unwrap(), PI * r * r, max_relative = 1e-15);
        assert_relative_eq!(overlap_area(0.0, r, r).unwrap(), PI * r * r, max_relative = 1e-15);
        assert_eq!(overlap_area(100.0, r, 60.0).unwrap(), 0.0);
        assert_eq!(overlap_area(200.0, r, 60.0).unwrap(), 0.0);
        // equal discs one radius apart: half-angle π/3
        let lens = 2.0 * r * r * (PI / 3.0 - 3f64.sqrt() / 4.0);
        assert_relative_eq!(overlap_area(r, r, r).unwrap(), lens, max_relative = 1e-12);
        assert_relative_eq!(lens, 1965.3915177740107, max_relative = 1e-12);
        assert!(overlap_area(1.0, -1.0, 2.0).is_err());
        assert!(overlap_area(-1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn combined_speed_values() {
        assert_eq!(combined_wake_speed(&[], 8.2, 40.0), 8.2);
        let full = PI * 1600.0;
        let single = 6.706067887485673;
        let one = [WakeInfluence { waked_speed: single, upstream_free_speed: 8.2, overlap: full }];
        assert_relative_eq!(combined_wake_speed(&one, 8.2, 40.0), single, max_relative = 1e-12);
        let deficit = 1.0 - single / 8.2;
        let two = [one[0], one[0]];
        assert_relative_eq!(
            combined_wake_speed(&two, 8.2, 40.0),
            8.2 * (1.0 - deficit * 2f64.sqrt()),
            max_relative = 1e-12
        );
        let many = [one[0]; 100];
        assert_eq!(combined_wake_speed(&many, 8.2, 40.0), 0.0);
    }

    proptest! {
        #[test]
        fn overlap_is_bounded_and_non_increasing(
            d in 0.0f64..300.0,
            step in 0.0f64..50.0,
            ri in 0.1f64..100.0,
            rw in 0.1f64..200.0,
        ) {
            let a = overlap_area(d, ri, rw).unwrap();
            let b = overlap_area(d + step, ri, rw).unwrap();
            let cap = PI * ri.min(rw).powi(2);
            prop_assert!(a >= 0.0 && a <= cap * (1.0 + 1e-12));
            prop_assert!(b <= a + 1e-9 * cap);
        }

        #[test]
        fn overlap_is_continuous(d in 0.0f64..300.0, ri in 0.1f64..100.0, rw in 0.1f64..200.0) {
            let h = 1e-7;
            let a = overlap_area(d, ri, rw).unwrap();
            let b = overlap_area(d + h, ri, rw).unwrap();
            // |dA/dd| is bounded by twice the smaller diameter
            prop_assert!((a - b).abs() <= 4.0 * ri.min(rw) * h + 1e-9);
        }
    }
}
