//! Simulation and planning toolkit for dense multi-tag LED-ID (visible light
//! communication) installations.
//!
//! The model is line-of-sight only: each luminaire is a Lambertian emitter,
//! the reader is a non-imaging photodiode, and the per-tag figure of merit is
//! the bit error rate of non-coherently detected BFSK. Luminaires carrying the
//! tag being read contribute signal; every other luminaire is treated as an
//! uncorrelated interferer.
//!
//! Module map:
//!
//! - [`geometry`]: vectors, poses, link distance and angles
//! - [`channel`]: Lambertian emission and the LOS channel gain
//! - [`noise`]: shot noise plus user-supplied thermal/ISI variances
//! - [`link`]: signal composition, SNR and BER for one receiver position
//! - [`scenario`]: scenario documents, the built-in line/grid layouts
//! - [`grid`]: BER fields over a receiver plane
//! - [`oracle`]: Monte Carlo check of the BFSK error-rate formula
//! - [`analysis`]: cone overlap, resolvability and coverage reports
//! - [`export`]: CSV and PGM writers for grids

pub mod analysis;
pub mod channel;
mod error;
pub mod export;
pub mod geometry;
pub mod grid;
pub mod link;
pub mod noise;
pub mod oracle;
pub mod scenario;

pub use error::{Error, Result};

pub use analysis::{
    coverage, critical_overlap_distance, resolvability, CoverageOptions, CoverageReport, Reach, ResolvabilityReport,
    TagResolvability,
};
pub use channel::{channel_gain, lambertian_order, radiant_intensity, DetectorModel, EmitterModel};
pub use geometry::{link_geometry, LinkGeometry, Pose, Vec3};
pub use grid::{evaluate_grid, BerGrid, GridCell, GridSpec};
pub use link::{ber_bfsk, electrical_signal_ms, evaluate_link, snr, LinkBudget, ModulationParams};
pub use noise::{shot_noise_variance, total_noise_variance, NoiseParams, ELECTRON_CHARGE};
pub use oracle::{mc_ber_bfsk, McConfig, McEstimate};
pub use scenario::{
    builtin_g1, builtin_l1, load_scenario, load_scenario_with_defaults, Luminaire, ReceiverTemplate, Room, Scenario,
};
