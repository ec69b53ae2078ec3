//! Monte Carlo check of the non-coherent BFSK error rate.
//!
//! Each trial draws four independent standard normal samples `g1..g4`
//! (noise variance 1 per quadrature component) and compares the energy of
//! the correct branch, `(a + g1)² + g2²` with `a = √(2·snr)`, against the
//! wrong branch, `g3² + g4²`. The wrong branch winning is a bit error.
//! A Rician envelope compared against a Rayleigh one gives an error
//! probability of exactly `½·exp(−a²/4) = ½·exp(−snr/2)`.
//!
//! Randomness is fully determined by the seed: a ChaCha20 stream
//! (`rand_chacha::ChaCha20Rng::seed_from_u64`) feeding Ziggurat normals
//! (`rand_distr::StandardNormal`), consumed sequentially in the order
//! g1, g2, g3, g4 per trial.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::link::ber_bfsk;

/// SNR points of the default agreement check.
pub const DEFAULT_SNRS: [f64; 7] = [0.0, 1.0, 2.0, 4.0, 8.0, 12.0, 16.0];
pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub snr: f64,
    pub trials: u64,
    pub seed: u64,
}

impl McConfig {
    pub fn new(snr: f64, trials: u64, seed: u64) -> Result<Self> {
        let config = McConfig { snr, trials, seed };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials", "must be at least 1"));
        }
        if !(self.snr >= 0.0 && self.snr.is_finite()) {
            return Err(Error::invalid(
                "snr",
                format!("must be finite and >= 0, got {}", self.snr),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub errors: u64,
    pub trials: u64,
    /// Fraction of trials in error.
    pub estimate: f64,
    /// Binomial standard error `√(p̂(1−p̂)/trials)`.
    pub std_error: f64,
}

/// Estimates the BFSK bit error rate at `config.snr` by direct simulation.
pub fn mc_ber_bfsk(config: &McConfig) -> Result<McEstimate> {
    config.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let amplitude = (2.0 * config.snr).sqrt();
    let mut errors = 0u64;
    for _ in 0..config.trials {
        let g1: f64 = StandardNormal.sample(&mut rng);
        let g2: f64 = StandardNormal.sample(&mut rng);
        let g3: f64 = StandardNormal.sample(&mut rng);
        let g4: f64 = StandardNormal.sample(&mut rng);
        let correct = (amplitude + g1).powi(2) + g2 * g2;
        let wrong = g3 * g3 + g4 * g4;
        if wrong > correct {
            errors += 1;
        }
    }
    let n = config.trials as f64;
    let p = errors as f64 / n;
    Ok(McEstimate {
        errors,
        trials: config.trials,
        estimate: p,
        std_error: (p * (1.0 - p) / n).sqrt(),
    })
}

/// One SNR point of an agreement check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgreementRow {
    pub snr: f64,
    pub analytic: f64,
    pub mc: McEstimate,
    /// `|estimate − analytic| ≤ 3·std_error`.
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    pub rows: Vec<AgreementRow>,
    /// Number of rows that must pass.
    pub required: usize,
}

impl AgreementReport {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.pass).count()
    }

    pub fn holds(&self) -> bool {
        self.passed() >= self.required
    }
}

/// Simulates every SNR with the same seed and compares against the closed form.
///
/// One miss is tolerated per seven points (6 of 7 for the default list).
pub fn verify_agreement(snrs: &[f64], trials: u64, seed: u64) -> Result<AgreementReport> {
    if snrs.is_empty() {
        return Err(Error::invalid("snr_list", "at least one SNR is required"));
    }
    let rows = snrs
        .iter()
        .map(|&snr| {
            let mc = mc_ber_bfsk(&McConfig::new(snr, trials, seed)?)?;
            let analytic = ber_bfsk(snr)?;
            Ok(AgreementRow {
                snr,
                analytic,
                mc,
                pass: (mc.estimate - analytic).abs() <= 3.0 * mc.std_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AgreementReport {
        required: snrs.len() - snrs.len() / 7,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Modified Bessel function I0 by its power series.
    fn bessel_i0(x: f64) -> f64 {
        let q = 0.25 * x * x;
        let (mut term, mut sum, mut k) = (1.0, 1.0, 1.0);
        while term > 1e-17 * sum {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        sum
    }

    /// P(Rayleigh² > Rician²) by quadrature over the Rician envelope:
    /// ∫ r·exp(−(r²+a²)/2)·I0(a·r) · exp(−r²/2) dr.
    fn rician_vs_rayleigh(a: f64) -> f64 {
        let (lo, hi, n) = (0.0, 25.0, 20_000);
        let h = (hi - lo) / n as f64;
        let f = |r: f64| r * (-(r * r + a * a) / 2.0).exp() * bessel_i0(a * r) * (-r * r / 2.0).exp();
        let mut s = f(lo) + f(hi);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(lo + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn construction_matches_closed_form() {
        for snr in [0.0f64, 0.5, 1.0, 2.0, 4.0, 8.0, 12.0, 16.0] {
            let a = (2.0 * snr).sqrt();
            let q = rician_vs_rayleigh(a);
            let closed = 0.5 * (-snr / 2.0).exp();
            assert!((q - closed).abs() <= 1e-9 * closed, "snr={snr}: {q} vs {closed}");
        }
    }

    #[test]
    fn zero_snr_is_a_coin_flip() {
        let e = mc_ber_bfsk(&McConfig::new(0.0, 200_000, 7).unwrap()).unwrap();
        assert!((e.estimate - 0.5).abs() <= 3.0 * e.std_error, "{e:?}");
    }

    #[test]
    fn threshold_snr_gives_one_percent() {
        let snr = 2.0 * 50f64.ln();
        let e = mc_ber_bfsk(&McConfig::new(snr, 1_000_000, 42).unwrap()).unwrap();
        assert!((e.estimate - 1e-2).abs() <= 3.0 * e.std_error, "{e:?}");
        assert!(e.std_error < 1.1e-4);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let c = McConfig::new(3.0, 50_000, 1234).unwrap();
        let a = mc_ber_bfsk(&c).unwrap();
        let b = mc_ber_bfsk(&c).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        let other = mc_ber_bfsk(&McConfig { seed: 1235, ..c }).unwrap();
        assert_ne!(a.errors, other.errors);
    }

    #[test]
    fn invalid_configs() {
        assert!(McConfig::new(1.0, 0, 1).is_err());
        assert!(McConfig::new(-1.0, 10, 1).is_err());
        let raw = McConfig {
            snr: 1.0,
            trials: 0,
            seed: 1,
        };
        assert!(mc_ber_bfsk(&raw).is_err());
        assert!(verify_agreement(&[], 10, 1).is_err());
    }

    #[test]
    fn estimates_fall_with_snr() {
        let report = verify_agreement(&[0.0, 1.0, 2.0, 4.0, 8.0], 1_000_000, DEFAULT_SEED).unwrap();
        for w in report.rows.windows(2) {
            assert!(w[1].mc.estimate < w[0].mc.estimate);
        }
    }

    #[test]
    fn required_passes() {
        let r = |n: usize| AgreementReport {
            rows: vec![],
            required: n - n / 7,
        };
        assert_eq!(r(7).required, 6);
        assert_eq!(r(3).required, 3);
        assert_eq!(r(14).required, 12);
    }
}
