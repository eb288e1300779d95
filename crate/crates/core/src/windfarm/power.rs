use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Turbine data. Defaults describe a 2 MW, 80 m rotor machine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TurbineSpec {
    /// kW
    pub rated_power: f64,
    /// m
    pub rotor_diameter: f64,
    pub thrust_coefficient: f64,
    /// m
    pub hub_height: f64,
    /// m/s
    pub cut_in: f64,
    /// m/s
    pub cut_out: f64,
}

impl Default for TurbineSpec {
    fn default() -> Self {
        Self {
            rated_power: 2000.0,
            rotor_diameter: 80.0,
            thrust_coefficient: 0.8,
            hub_height: 60.0,
            cut_in: 4.0,
            cut_out: 25.0,
        }
    }
}

/// Speed at which the curve reaches rated power.
pub const RATED_SPEED: f64 = 13.0;

impl TurbineSpec {
    pub fn rotor_radius(&self) -> f64 {
        self.rotor_diameter / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.thrust_coefficient > 0.0 && self.thrust_coefficient < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "thrust coefficient must lie in (0, 1), got {}",
                self.thrust_coefficient
            )));
        }
        if !(self.cut_in < self.cut_out) {
            return Err(Error::InvalidParameter("cut-in speed must be below cut-out".into()));
        }
        if !(self.rotor_diameter > 0.0 && self.rated_power > 0.0 && self.hub_height > 0.0) {
            return Err(Error::InvalidParameter(
                "rotor diameter, rated power and hub height must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Piecewise-linear power curve in kW.
    ///
    /// ```text
    /// 0                   u < u_c
    /// 60 (u − u_c)        u_c ≤ u ≤ u_c + 25/19
    /// 250 (u − u_c − 1)   u_c + 25/19 ≤ u ≤ 13
    /// 2000                13 ≤ u ≤ u_f
    /// 0                   u > u_f
    /// ```
    pub fn power(&self, u: f64) -> f64 {
        let knee = self.cut_in + 25.0 / 19.0;
        if u < self.cut_in || u > self.cut_out {
            0.0
        } else if u <= knee {
            60.0 * (u - self.cut_in)
        } else if u <= RATED_SPEED {
            250.0 * (u - self.cut_in - 1.0)
        } else {
            self.rated_power
        }
    }
}

/// Power in kW of the default turbine at wind speed `u`.
pub fn power(u: f64) -> f64 {
    TurbineSpec::default().power(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn curve_values() {
        assert_eq!(power(13.0), 2000.0);
        assert_eq!(power(3.0), 0.0);
        assert_eq!(power(4.0), 0.0);
        assert_eq!(power(25.0), 2000.0);
        assert_eq!(power(25.0001), 0.0);
        assert_relative_eq!(power(8.2), 800.0, max_relative = 1e-12);
    }

    #[test]
    fn branches_meet_at_the_knee() {
        let knee: f64 = 4.0 + 25.0 / 19.0;
        let lower = 60.0 * (knee - 4.0);
        let upper = 250.0 * (knee - 5.0);
        assert_relative_eq!(lower, 78.94736842105263, max_relative = 1e-12);
        assert!((lower - upper).abs() < 1e-9);
        assert!((power(knee) - lower).abs() < 1e-9);
        assert!((power(knee + 1e-12) - lower).abs() < 1e-9);
    }

    #[test]
    fn curve_is_continuous_below_cut_out() {
        let mut u: f64 = 0.0;
        let mut prev = power(0.0);
        while u < 25.0 {
            u += 1e-4;
            let p = power(u.min(25.0));
            assert!((p - prev).abs() < 0.026, "jump at {u}");
            prev = p;
        }
    }

    #[test]
    fn validation() {
        assert!(TurbineSpec::default().validate().is_ok());
        let bad = TurbineSpec {
            thrust_coefficient: 1.0,
            ..TurbineSpec::default()
        };
        assert!(bad.validate().is_err());
        let bad = TurbineSpec {
            cut_in: 30.0,
            ..TurbineSpec::default()
        };
        assert!(bad.validate().is_err());
    }
}
