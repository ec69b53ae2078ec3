//! Receiver noise variance.
//!
//! At LED-ID data rates (10² to 10⁴ bit/s) shot noise dominates. Thermal and
//! ISI variances are taken as constants supplied by the user.

use crate::channel::DetectorModel;
use crate::error::{Error, Result};

/// Elementary charge, C.
pub const ELECTRON_CHARGE: f64 = 1.602176634e-19;

/// Noise-bandwidth factor `I_2` of a p-i-n/FET front end.
pub const PIN_FET_BANDWIDTH_FACTOR: f64 = 0.56;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    /// Photocurrent induced by ambient light, A.
    pub background_current_a: f64,
    pub bandwidth_factor: f64,
    /// A².
    pub thermal_variance: f64,
    /// A².
    pub isi_variance: f64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        NoiseParams {
            background_current_a: 0.0,
            bandwidth_factor: PIN_FET_BANDWIDTH_FACTOR,
            thermal_variance: 0.0,
            isi_variance: 0.0,
        }
    }
}

impl NoiseParams {
    pub fn with_background_current(self, background_current_a: f64) -> Self {
        NoiseParams {
            background_current_a,
            ..self
        }
    }

    /// Checks every field is finite and non-negative. Errors name the document key.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("background_current_a", self.background_current_a),
            ("i2", self.bandwidth_factor),
            ("thermal_a2", self.thermal_variance),
            ("isi_a2", self.isi_variance),
        ];
        for (name, v) in fields {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Shot-noise variance `2qRPB + 2q·I_bg·I_2·B`, A².
///
/// `received_power` is the total optical power reaching the detector from all
/// luminaires, W.
pub fn shot_noise_variance(received_power: f64, detector: &DetectorModel, params: &NoiseParams) -> Result<f64> {
    if received_power.is_nan() || received_power < 0.0 {
        return Err(Error::invalid(
            "received_power",
            format!("must be >= 0, got {received_power}"),
        ));
    }
    let q = ELECTRON_CHARGE;
    let b = detector.bandwidth_hz();
    Ok(2.0 * q * detector.responsivity() * received_power * b
        + 2.0 * q * params.background_current_a * params.bandwidth_factor * b)
}

/// Shot noise plus the thermal and ISI constants, A².
pub fn total_noise_variance(received_power: f64, detector: &DetectorModel, params: &NoiseParams) -> Result<f64> {
    Ok(shot_noise_variance(received_power, detector, params)? + params.thermal_variance + params.isi_variance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn detector(bandwidth: f64) -> DetectorModel {
        DetectorModel::new(1e-4, 60.0, 1.3, 0.54, bandwidth).unwrap()
    }

    #[test]
    fn dark_quiet_receiver_has_no_shot_noise() {
        let v = shot_noise_variance(0.0, &detector(1e4), &NoiseParams::default()).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(
            total_noise_variance(0.0, &detector(1e4), &NoiseParams::default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn background_term() {
        let p = NoiseParams::default().with_background_current(200e-6);
        let v = shot_noise_variance(0.0, &detector(1e4), &p).unwrap();
        assert!((v - 3.5888756601600003e-19).abs() < 1e-30);
        assert!((v - 3.589e-19).abs() < 1e-22);
        let total = total_noise_variance(
            0.0,
            &detector(1e4),
            &NoiseParams {
                thermal_variance: 1e-19,
                ..p
            },
        )
        .unwrap();
        assert!((total - 4.589e-19).abs() < 1e-22);
    }

    #[test]
    fn constants_pass_through() {
        let p = NoiseParams {
            thermal_variance: 1e-20,
            ..NoiseParams::default()
        };
        assert_eq!(total_noise_variance(0.0, &detector(1e4), &p).unwrap(), 1e-20);
    }

    #[test]
    fn negative_power_rejected() {
        assert!(shot_noise_variance(-1e-3, &detector(1e4), &NoiseParams::default()).is_err());
        assert!(shot_noise_variance(f64::NAN, &detector(1e4), &NoiseParams::default()).is_err());
    }

    #[test]
    fn validate_names_key() {
        let p = NoiseParams {
            isi_variance: -1.0,
            ..NoiseParams::default()
        };
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { name: "isi_a2", .. })
        ));
    }

    proptest! {
        #[test]
        fn linear_in_bandwidth(power in 0.0..1e-2f64, ibg in 0.0..1e-3f64, b in 1e2..1e4f64) {
            let p = NoiseParams::default().with_background_current(ibg);
            let one = shot_noise_variance(power, &detector(b), &p).unwrap();
            let two = shot_noise_variance(power, &detector(2.0 * b), &p).unwrap();
            prop_assert!((two - 2.0 * one).abs() <= 1e-12 * two.max(1e-300));
        }

        #[test]
        fn monotone_in_every_input(
            power in 0.0..1e-2f64, ibg in 0.0..1e-3f64, th in 0.0..1e-18f64, isi in 0.0..1e-18f64,
            b in 1e2..1e4f64, bump in 1e-6..1.0f64,
        ) {
            let base = NoiseParams { background_current_a: ibg, thermal_variance: th, isi_variance: isi, ..NoiseParams::default() };
            let n = total_noise_variance(power, &detector(b), &base).unwrap();
            let shot = shot_noise_variance(power, &detector(b), &base).unwrap();
            prop_assert!(n >= shot);
            let bumped = [
                total_noise_variance(power * (1.0 + bump), &detector(b), &base).unwrap(),
                total_noise_variance(power, &detector(b * (1.0 + bump)), &base).unwrap(),
                total_noise_variance(power, &detector(b), &NoiseParams { background_current_a: ibg + bump * 1e-3, ..base }).unwrap(),
                total_noise_variance(power, &detector(b), &NoiseParams { thermal_variance: th + bump * 1e-18, ..base }).unwrap(),
                total_noise_variance(power, &detector(b), &NoiseParams { isi_variance: isi + bump * 1e-18, ..base }).unwrap(),
            ];
            for v in bumped {
                prop_assert!(v >= n);
            }
        }

        #[test]
        fn shot_noise_is_total_without_constants(power in 0.0..1e-2f64, ibg in 0.0..1e-3f64, b in 1e2..1e4f64) {
            let p = NoiseParams::default().with_background_current(ibg);
            prop_assert_eq!(
                total_noise_variance(power, &detector(b), &p).unwrap(),
                shot_noise_variance(power, &detector(b), &p).unwrap()
            );
        }
    }
}
