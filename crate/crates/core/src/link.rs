//! Signal composition, SNR and analytic BFSK bit error rate for one receiver position.
//!
//! Luminaires carrying the tag being read form the data set; all others are
//! interferers. Every luminaire transmits an independent baseband, so
//! contributions add in power: the mean-square photocurrent of a set is
//! `Σ (R·h·P·μ)²·E[x²]`.

use crate::channel::{channel_gain, DetectorModel, EmitterModel};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::noise::total_noise_variance;
use crate::scenario::Scenario;

/// Intensity-modulation parameters of one luminaire.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationParams {
    modulation_index: f64,
    baseband_power: f64,
}

impl Default for ModulationParams {
    /// Full-depth modulation of a unit-amplitude sinusoidal carrier.
    fn default() -> Self {
        ModulationParams {
            modulation_index: 1.0,
            baseband_power: 0.5,
        }
    }
}

impl ModulationParams {
    pub fn new(modulation_index: f64, baseband_power: f64) -> Result<Self> {
        if !(modulation_index > 0.0 && modulation_index <= 1.0) {
            return Err(Error::invalid(
                "mod_index",
                format!("must lie in (0, 1], got {modulation_index}"),
            ));
        }
        if !(baseband_power > 0.0 && baseband_power.is_finite()) {
            return Err(Error::invalid(
                "baseband_power",
                format!("must be positive and finite, got {baseband_power}"),
            ));
        }
        Ok(ModulationParams {
            modulation_index,
            baseband_power,
        })
    }

    pub fn modulation_index(&self) -> f64 {
        self.modulation_index
    }

    /// Mean square of the modulating signal.
    pub fn baseband_power(&self) -> f64 {
        self.baseband_power
    }
}

/// Mean-square photocurrent of one luminaire seen through gain `h`, A².
fn signal_term(h: f64, emitter: &EmitterModel, detector: &DetectorModel, m: &ModulationParams) -> f64 {
    let amplitude = detector.responsivity() * h * emitter.power_w() * m.modulation_index;
    amplitude * amplitude * m.baseband_power
}

/// Mean-square electrical signal of one luminaire set, A².
///
/// `gains` and `emitters` are parallel lists.
pub fn electrical_signal_ms(
    gains: &[f64],
    emitters: &[EmitterModel],
    detector: &DetectorModel,
    modulation: &ModulationParams,
) -> Result<f64> {
    if gains.len() != emitters.len() {
        return Err(Error::invalid(
            "gains",
            format!("{} gains for {} emitters", gains.len(), emitters.len()),
        ));
    }
    Ok(gains
        .iter()
        .zip(emitters)
        .map(|(&h, e)| signal_term(h, e, detector, modulation))
        .sum())
}

/// `signal / (noise + interference)`.
///
/// A zero denominator yields `f64::INFINITY` when there is signal and `0` when
/// there is none; neither is an error so dark grid cells never abort.
pub fn snr(signal_ms: f64, interference_ms: f64, noise_variance: f64) -> Result<f64> {
    for (name, v) in [
        ("signal_ms", signal_ms),
        ("interference_ms", interference_ms),
        ("noise_variance", noise_variance),
    ] {
        if v.is_nan() || v < 0.0 {
            return Err(Error::invalid(name, format!("must be >= 0, got {v}")));
        }
    }
    let denominator = noise_variance + interference_ms;
    if denominator == 0.0 {
        return Ok(if signal_ms > 0.0 { f64::INFINITY } else { 0.0 });
    }
    Ok(signal_ms / denominator)
}

/// Non-coherent BFSK bit error rate `½·exp(−snr/2)`. Infinite SNR maps to 0.
pub fn ber_bfsk(snr: f64) -> Result<f64> {
    if snr.is_nan() || snr < 0.0 {
        return Err(Error::invalid("snr", format!("must be >= 0, got {snr}")));
    }
    Ok(0.5 * (-snr / 2.0).exp())
}

/// Full link decomposition at one receiver position.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkBudget {
    /// Channel gain of every luminaire, in scenario order.
    pub per_luminaire_gain: Vec<(String, f64)>,
    /// Sum of the data-set gains.
    pub h_data: f64,
    /// Total optical power reaching the detector, W.
    pub received_power_w: f64,
    pub signal_ms: f64,
    pub interference_ms: f64,
    pub noise_variance: f64,
    pub snr: f64,
    pub ber: f64,
}

/// Evaluates the link for `data_tag` with the scenario's receiver template at `receiver_position`.
pub fn evaluate_link(scenario: &Scenario, receiver_position: Vec3, data_tag: &str) -> Result<LinkBudget> {
    if !scenario.has_tag(data_tag) {
        return Err(Error::UnknownTag(data_tag.to_string()));
    }
    let rx = scenario.receiver().at(receiver_position);
    let detector = scenario.detector();
    let mut per_luminaire_gain = Vec::with_capacity(scenario.luminaires().len());
    let (mut h_data, mut received_power_w, mut signal_ms, mut interference_ms) = (0.0, 0.0, 0.0, 0.0);
    for lum in scenario.luminaires() {
        let h = channel_gain(&lum.pose, &lum.emitter, &rx, detector)?;
        received_power_w += h * lum.emitter.power_w();
        let term = signal_term(h, &lum.emitter, detector, &lum.modulation);
        if lum.tag == data_tag {
            h_data += h;
            signal_ms += term;
        } else {
            interference_ms += term;
        }
        per_luminaire_gain.push((lum.tag.clone(), h));
    }
    let noise_variance = total_noise_variance(received_power_w, detector, scenario.noise())?;
    let snr = snr(signal_ms, interference_ms, noise_variance)?;
    Ok(LinkBudget {
        per_luminaire_gain,
        h_data,
        received_power_w,
        signal_ms,
        interference_ms,
        noise_variance,
        snr,
        ber: ber_bfsk(snr)?,
    })
}
