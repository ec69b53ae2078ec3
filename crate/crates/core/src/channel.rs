//! Lambertian emission and the line-of-sight channel gain.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::geometry::{link_geometry, Pose};

/// Responsivity applied when a scenario does not give one, A/W.
pub const DEFAULT_RESPONSIVITY: f64 = 0.54;
/// Equivalent noise bandwidth applied when a scenario does not give one, Hz.
pub const DEFAULT_BANDWIDTH_HZ: f64 = 1e4;

/// Lambertian order `m = -ln 2 / ln cos(semi_angle)` for a half-power semi-angle in degrees.
pub fn lambertian_order(semi_angle_deg: f64) -> Result<f64> {
    if !(semi_angle_deg > 0.0 && semi_angle_deg < 90.0) {
        return Err(Error::invalid(
            "semi_angle_deg",
            format!("must lie in (0, 90) degrees, got {semi_angle_deg}"),
        ));
    }
    Ok(-std::f64::consts::LN_2 / semi_angle_deg.to_radians().cos().ln())
}

/// Optical model of one LED source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterModel {
    power_w: f64,
    semi_angle_deg: f64,
    order: f64,
}

impl EmitterModel {
    pub fn new(power_w: f64, semi_angle_deg: f64) -> Result<Self> {
        check_positive("power_w", power_w)?;
        let order = lambertian_order(semi_angle_deg)?;
        Ok(EmitterModel {
            power_w,
            semi_angle_deg,
            order,
        })
    }

    /// Builds an emitter from its Lambertian order; the semi-angle is derived.
    pub fn from_order(power_w: f64, order: f64) -> Result<Self> {
        check_positive("power_w", power_w)?;
        if !(order > 0.0 && order.is_finite()) {
            return Err(Error::invalid("lambertian_order", "must be positive and finite"));
        }
        let semi_angle_deg = 0.5f64.powf(1.0 / order).acos().to_degrees();
        Ok(EmitterModel {
            power_w,
            semi_angle_deg,
            order,
        })
    }

    pub fn power_w(&self) -> f64 {
        self.power_w
    }

    pub fn semi_angle_deg(&self) -> f64 {
        self.semi_angle_deg
    }

    pub fn lambertian_order(&self) -> f64 {
        self.order
    }
}

/// Non-imaging photodetector.
///
/// `gain` is the concentrator/filter gain, held constant over incidence angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel {
    area_m2: f64,
    fov_deg: f64,
    gain: f64,
    responsivity: f64,
    bandwidth_hz: f64,
}

impl DetectorModel {
    pub fn new(area_m2: f64, fov_deg: f64, gain: f64, responsivity: f64, bandwidth_hz: f64) -> Result<Self> {
        check_positive("area_m2", area_m2)?;
        if !(fov_deg > 0.0 && fov_deg <= 90.0) {
            return Err(Error::invalid(
                "fov_deg",
                format!("must lie in (0, 90] degrees, got {fov_deg}"),
            ));
        }
        check_positive("gain", gain)?;
        check_positive("responsivity_a_per_w", responsivity)?;
        check_positive("bandwidth_hz", bandwidth_hz)?;
        Ok(DetectorModel {
            area_m2,
            fov_deg,
            gain,
            responsivity,
            bandwidth_hz,
        })
    }

    pub fn area_m2(&self) -> f64 {
        self.area_m2
    }

    pub fn fov_deg(&self) -> f64 {
        self.fov_deg
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// Photodiode responsivity, A/W.
    pub fn responsivity(&self) -> f64 {
        self.responsivity
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    pub fn with_bandwidth(self, bandwidth_hz: f64) -> Result<Self> {
        check_positive("bandwidth_hz", bandwidth_hz)?;
        Ok(DetectorModel { bandwidth_hz, ..self })
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be positive and finite, got {value}"),
        ))
    }
}

/// Radiant intensity in W/sr at irradiance angle `theta` (rad). Zero behind the emitter.
pub fn radiant_intensity(theta: f64, emitter: &EmitterModel) -> f64 {
    let theta = theta.abs();
    if theta > FRAC_PI_2 {
        return 0.0;
    }
    let m = emitter.order;
    emitter.power_w * (m + 1.0) / (2.0 * PI) * theta.cos().max(0.0).powf(m)
}

/// Dimensionless LOS gain `h_d` from a luminaire to a detector.
///
/// The field-of-view cutoff is applied to the incidence angle. Links that
/// leave the back of the emitter or arrive at the back of the detector are
/// cut off as well.
pub fn channel_gain(tx: &Pose, emitter: &EmitterModel, rx: &Pose, detector: &DetectorModel) -> Result<f64> {
    let g = link_geometry(tx, rx)?;
    if g.incidence > detector.fov_deg.to_radians() || g.irradiance > FRAC_PI_2 || g.incidence > FRAC_PI_2 {
        return Ok(0.0);
    }
    let m = emitter.order;
    let h = (m + 1.0) * detector.area_m2 * g.cos_irradiance.powf(m) * g.cos_incidence * detector.gain
        / (2.0 * PI * g.distance * g.distance);
    Ok(h.max(0.0))
}
