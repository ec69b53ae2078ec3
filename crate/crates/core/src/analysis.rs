//! Placement planning on top of the link model.
//!
//! - [`critical_overlap_distance`]: plane distance at which neighbouring light
//!   cones reach each other's centers.
//! - [`resolvability`]: per-tag BER directly beneath its luminaire(s).
//! - [`coverage`]: maximum reliable on-axis read distance and off-axis angle.

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::link::evaluate_link;
use crate::scenario::{Luminaire, Scenario};

/// BER above which a tag read is considered unusable.
pub const DEFAULT_THRESHOLD_BER: f64 = 1e-2;

/// Plane distance `spacing / tan(semi_angle)` at which a luminaire's geometric
/// light-cone radius equals the center spacing of its neighbours.
pub fn critical_overlap_distance(spacing_m: f64, semi_angle_deg: f64) -> Result<f64> {
    if !(spacing_m > 0.0 && spacing_m.is_finite()) {
        return Err(Error::invalid("spacing", format!("must be positive, got {spacing_m}")));
    }
    if !(semi_angle_deg > 0.0 && semi_angle_deg < 90.0) {
        return Err(Error::invalid(
            "semi_angle_deg",
            format!("must lie in (0, 90) degrees, got {semi_angle_deg}"),
        ));
    }
    Ok(spacing_m / semi_angle_deg.to_radians().tan())
}

fn check_threshold(threshold: f64) -> Result<()> {
    if (0.0..=1.0).contains(&threshold) {
        Ok(())
    } else {
        Err(Error::invalid(
            "threshold",
            format!("must lie in [0, 1], got {threshold}"),
        ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TagResolvability {
    pub tag: String,
    /// Lowest BER over the perpendicular feet of the tag's luminaires.
    pub min_ber_under_lamp: f64,
    pub resolvable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvabilityReport {
    pub plane_distance_m: f64,
    pub threshold: f64,
    pub tags: Vec<TagResolvability>,
    /// From the closest luminaire pair and the widest semi-angle; `None` with a single luminaire.
    pub critical_distance_m: Option<f64>,
}

impl ResolvabilityReport {
    pub fn tag(&self, tag: &str) -> Option<&TagResolvability> {
        self.tags.iter().find(|t| t.tag == tag)
    }

    pub fn all_resolvable(&self) -> bool {
        self.tags.iter().all(|t| t.resolvable)
    }
}

/// Point on the receiver plane directly beneath a luminaire.
fn foot(scenario: &Scenario, lum: &Luminaire, plane_distance_m: f64) -> Vec3 {
    let p = lum.pose.position();
    Vec3::new(p.x, p.y, scenario.room().height_m() - plane_distance_m)
}

/// Checks every tag at the feet of its luminaires on the plane `plane_distance_m` below the ceiling.
pub fn resolvability(scenario: &Scenario, plane_distance_m: f64, threshold: f64) -> Result<ResolvabilityReport> {
    if !(plane_distance_m > 0.0 && plane_distance_m.is_finite()) {
        return Err(Error::invalid(
            "plane_distance",
            format!("must be positive and finite, got {plane_distance_m}"),
        ));
    }
    check_threshold(threshold)?;
    let tags = scenario
        .tags()
        .into_iter()
        .map(|tag| {
            let mut min_ber = f64::INFINITY;
            for lum in scenario.luminaires_for(tag)? {
                let b = evaluate_link(scenario, foot(scenario, lum, plane_distance_m), tag)?;
                min_ber = min_ber.min(b.ber);
            }
            Ok(TagResolvability {
                tag: tag.to_string(),
                min_ber_under_lamp: min_ber,
                resolvable: min_ber <= threshold,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let widest = scenario
        .luminaires()
        .iter()
        .map(|l| l.emitter.semi_angle_deg())
        .fold(0.0, f64::max);
    let critical_distance_m = scenario
        .min_luminaire_spacing()
        .map(|s| critical_overlap_distance(s, widest))
        .transpose()?;
    Ok(ResolvabilityReport {
        plane_distance_m,
        threshold,
        tags,
        critical_distance_m,
    })
}

/// Outcome of a distance search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reach {
    Bounded(f64),
    /// Reads stay reliable through the whole search range.
    Unbounded,
}

impl Reach {
    pub fn bounded(self) -> Option<f64> {
        match self {
            Reach::Bounded(d) => Some(d),
            Reach::Unbounded => None,
        }
    }
}

/// Search settings for [`coverage`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageOptions {
    /// Off-axis sweep depth as a fraction of the maximum reliable distance.
    pub angle_distance_fraction: f64,
    /// Exponential bracketing gives up beyond this distance, m.
    pub max_distance_m: f64,
    pub distance_tolerance_m: f64,
    pub angle_tolerance_deg: f64,
    /// Linear-scan step used when other luminaires are present, m.
    pub scan_step_m: f64,
    /// Linear-scan range used when other luminaires are present, m.
    pub scan_limit_m: f64,
    /// Direction of the off-axis sweep; projected perpendicular to the luminaire axis.
    pub lateral_direction: Vec3,
}

impl Default for CoverageOptions {
    fn default() -> Self {
        CoverageOptions {
            angle_distance_fraction: 0.5,
            max_distance_m: 1e6,
            distance_tolerance_m: 1e-3,
            angle_tolerance_deg: 0.1,
            scan_step_m: 0.01,
            scan_limit_m: 20.0,
            lateral_direction: Vec3::new(1.0, 0.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub tag: String,
    pub threshold_ber: f64,
    pub max_reliable_distance: Reach,
    /// Largest reliable off-axis angle, degrees; `None` when the distance is unbounded.
    pub max_reliable_angle_deg: Option<f64>,
}

/// Largest grazing angle considered by the off-axis search, degrees.
const MAX_SWEEP_ANGLE_DEG: f64 = 89.9;

/// Largest `x` in `[lo, hi]` such that `reliable(x)`, assuming `reliable(lo)` and
/// a single reliable→unreliable transition. Returns `lo` side within `tol`.
fn bisect(mut lo: f64, mut hi: f64, tol: f64, mut reliable: impl FnMut(f64) -> Result<bool>) -> Result<f64> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if reliable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Maximum reliable read distance along the tag's luminaire axis and maximum
/// off-axis angle at a fraction of that distance.
///
/// The first luminaire carrying `tag` defines the axis. With that luminaire
/// alone in the scenario BER rises monotonically with distance and angle, so
/// both searches bisect. With other luminaires present the field may be
/// non-monotone and both searches scan linearly (`scan_step_m`, then
/// `angle_tolerance_deg` steps), refining the last reliable distance step by
/// bisection.
pub fn coverage(scenario: &Scenario, tag: &str, threshold: f64, options: &CoverageOptions) -> Result<CoverageReport> {
    check_threshold(threshold)?;
    let lum = scenario.luminaires_for(tag)?[0];
    let origin = lum.pose.position();
    let axis = lum.pose.axis();
    let reliable_at = |p: Vec3| -> Result<bool> { Ok(evaluate_link(scenario, p, tag)?.ber <= threshold) };
    let on_axis = |d: f64| reliable_at(origin + axis * d);
    let monotone = scenario.luminaires().len() == 1;
    let tol = options.distance_tolerance_m;

    let reach = if monotone {
        let max = options.max_distance_m;
        let (mut lo, mut hi) = (0.0, 1.0f64.min(max));
        loop {
            if !on_axis(hi)? {
                break Reach::Bounded(bisect(lo, hi, tol, on_axis)?);
            }
            lo = hi;
            if hi >= max {
                break Reach::Unbounded;
            }
            hi = (hi * 2.0).min(max);
        }
    } else {
        let step = options.scan_step_m;
        let steps = (options.scan_limit_m / step).ceil() as usize;
        let mut last = None;
        for k in 1..=steps {
            if on_axis(k as f64 * step)? {
                last = Some(k);
            }
        }
        match last {
            None => Reach::Bounded(0.0),
            Some(k) if k == steps => Reach::Unbounded,
            Some(k) => {
                let d = k as f64 * step;
                Reach::Bounded(bisect(d, d + step, tol, on_axis)?)
            }
        }
    };

    let max_reliable_angle_deg = match reach {
        Reach::Unbounded => None,
        Reach::Bounded(d) if d <= 0.0 => Some(0.0),
        Reach::Bounded(d) => {
            let depth = d * options.angle_distance_fraction;
            let lateral = sweep_direction(axis, options.lateral_direction);
            let at_angle = |deg: f64| reliable_at(origin + axis * depth + lateral * (depth * deg.to_radians().tan()));
            let atol = options.angle_tolerance_deg;
            if monotone {
                if !at_angle(0.0)? {
                    Some(0.0)
                } else if at_angle(MAX_SWEEP_ANGLE_DEG)? {
                    Some(MAX_SWEEP_ANGLE_DEG)
                } else {
                    Some(bisect(0.0, MAX_SWEEP_ANGLE_DEG, atol, at_angle)?)
                }
            } else {
                let steps = (MAX_SWEEP_ANGLE_DEG / atol).floor() as usize;
                let mut best = 0.0;
                for k in 0..=steps {
                    let deg = k as f64 * atol;
                    if at_angle(deg)? {
                        best = deg;
                    }
                }
                Some(best)
            }
        }
    };

    Ok(CoverageReport {
        tag: tag.to_string(),
        threshold_ber: threshold,
        max_reliable_distance: reach,
        max_reliable_angle_deg,
    })
}

/// Unit vector perpendicular to `axis`, as close to `preferred` as possible.
fn sweep_direction(axis: Vec3, preferred: Vec3) -> Vec3 {
    let candidates = [preferred, Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)];
    candidates
        .into_iter()
        .filter_map(|c| (c - axis * axis.dot(c)).normalized())
        .find(|v| v.norm() > 0.5)
        .expect("x or y is never parallel to both")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{DetectorModel, EmitterModel};
    use crate::noise::{NoiseParams, ELECTRON_CHARGE};
    use crate::scenario::{builtin_g1, builtin_l1, Luminaire, ReceiverTemplate, Room};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn lone(noise: NoiseParams) -> Scenario {
        Scenario::new(
            Room::new(2.0, 2.0, 2.0).unwrap(),
            vec![Luminaire::downlight(
                "solo",
                Vec3::new(0.0, 0.0, 2.0),
                EmitterModel::new(1.0, 20.0).unwrap(),
            )],
            ReceiverTemplate::facing_up(DetectorModel::new(1e-4, 60.0, 1.3, 0.54, 1e4).unwrap()),
            noise,
        )
        .unwrap()
    }

    #[test]
    fn critical_distance_examples() {
        let d = critical_overlap_distance(0.16, 20.0).unwrap();
        assert!((d - 0.16 / 20f64.to_radians().tan()).abs() < 1e-15);
        assert!((d - 0.4396).abs() < 1e-4);
        assert!((critical_overlap_distance(0.16, 45.0).unwrap() - 0.16).abs() < 1e-12);
        assert!(critical_overlap_distance(0.16, 90.0).is_err());
        assert!(critical_overlap_distance(0.0, 20.0).is_err());
    }

    #[test]
    fn line_layout_resolvable_at_thirty_cm() {
        let r = resolvability(&builtin_l1(), 0.3, DEFAULT_THRESHOLD_BER).unwrap();
        assert!(r.all_resolvable());
        assert!(r.tag("outer-left").unwrap().min_ber_under_lamp < 1e-6);
        assert!((r.critical_distance_m.unwrap() - 0.4396).abs() < 1e-4);
    }

    #[test]
    fn line_layout_outer_tags_fail_at_fifty_cm() {
        let r = resolvability(&builtin_l1(), 0.5, DEFAULT_THRESHOLD_BER).unwrap();
        assert!(!r.tag("outer-left").unwrap().resolvable);
        assert!(!r.tag("outer-right").unwrap().resolvable);
        let l = r.tag("outer-left").unwrap().min_ber_under_lamp;
        let rr = r.tag("outer-right").unwrap().min_ber_under_lamp;
        assert!((l - rr).abs() <= 1e-12 * l);
    }

    #[test]
    fn lone_quiet_lamp_resolvable_everywhere_practical() {
        let s = lone(NoiseParams::default());
        for p in [0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0] {
            let r = resolvability(&s, p, DEFAULT_THRESHOLD_BER).unwrap();
            assert!(r.all_resolvable(), "plane {p}");
            assert_eq!(r.critical_distance_m, None);
        }
    }

    #[test]
    fn grid_layout_resolvable_at_thirty_cm() {
        let r = resolvability(&builtin_g1(), 0.3, DEFAULT_THRESHOLD_BER).unwrap();
        assert_eq!(r.tags.len(), 9);
        assert!(r.all_resolvable());
    }

    #[test]
    fn bad_resolvability_inputs() {
        assert!(resolvability(&builtin_l1(), 0.0, 1e-2).is_err());
        assert!(resolvability(&builtin_l1(), 0.3, 2.0).is_err());
    }

    #[test]
    fn coverage_shrinks_with_background_light() {
        let mut last = f64::INFINITY;
        for ibg in [0.0, 10e-6, 100e-6, 1e-3] {
            let s = lone(NoiseParams::default().with_background_current(ibg));
            let c = coverage(&s, "solo", DEFAULT_THRESHOLD_BER, &CoverageOptions::default()).unwrap();
            let d = c.max_reliable_distance.bounded().expect("finite reach");
            assert!(d < last, "I_bg={ibg}: {d} !< {last}");
            last = d;
            let angle = c.max_reliable_angle_deg.unwrap();
            assert!((0.0..=90.0).contains(&angle));
        }
    }

    #[test]
    fn quiet_lamp_beyond_search_range_is_unbounded() {
        let s = lone(NoiseParams::default());
        let opts = CoverageOptions {
            max_distance_m: 100.0,
            ..CoverageOptions::default()
        };
        let c = coverage(&s, "solo", DEFAULT_THRESHOLD_BER, &opts).unwrap();
        assert_eq!(c.max_reliable_distance, Reach::Unbounded);
        assert_eq!(c.max_reliable_angle_deg, None);
    }

    /// Background current that puts the on-axis 1e-2 crossing at `target` m,
    /// solved by hand from the gain, shot-noise and BER formulas.
    fn background_for_crossing(target: f64) -> f64 {
        let m = -(2f64.ln()) / 20f64.to_radians().cos().ln();
        let (r, b, q) = (0.54, 1e4, ELECTRON_CHARGE);
        let h = (m + 1.0) * 1e-4 * 1.3 / (2.0 * PI * target * target);
        let signal = 0.5 * (r * h).powi(2);
        let needed_noise = signal / (2.0 * 50f64.ln());
        (needed_noise - 2.0 * q * r * h * b) / (2.0 * q * 0.56 * b)
    }

    #[test]
    fn coverage_recovers_constructed_crossing() {
        let ibg = background_for_crossing(2.5);
        assert!(ibg > 0.0);
        let s = lone(NoiseParams::default().with_background_current(ibg));
        let c = coverage(&s, "solo", DEFAULT_THRESHOLD_BER, &CoverageOptions::default()).unwrap();
        let d = c.max_reliable_distance.bounded().unwrap();
        assert!((d - 2.5).abs() <= 1e-3, "{d}");
        // off-axis: BER grows as cos^(m+3) at fixed depth, check the reported angle brackets the crossing
        let depth = d / 2.0;
        let at = |deg: f64| {
            let x = depth * f64::to_radians(deg).tan();
            evaluate_link(&s, Vec3::new(x, 0.0, 2.0 - depth), "solo").unwrap().ber
        };
        let a = c.max_reliable_angle_deg.unwrap();
        assert!(at(a) <= 1e-2 && at(a + 0.2) > 1e-2, "{a}");
    }

    #[test]
    fn coverage_bracket_postcondition() {
        for ibg in [10e-6, 1e-3, 5.0] {
            let s = lone(NoiseParams::default().with_background_current(ibg));
            let c = coverage(&s, "solo", DEFAULT_THRESHOLD_BER, &CoverageOptions::default()).unwrap();
            let d = c.max_reliable_distance.bounded().unwrap();
            let ber = |d: f64| evaluate_link(&s, Vec3::new(0.0, 0.0, 2.0 - d), "solo").unwrap().ber;
            assert!(ber(d) <= 1e-2 && ber(d + 2e-3) > 1e-2, "I_bg={ibg}");
        }
    }

    #[test]
    fn multi_tag_coverage_matches_brute_force_scan() {
        let s = builtin_l1();
        let c = coverage(&s, "outer-left", DEFAULT_THRESHOLD_BER, &CoverageOptions::default()).unwrap();
        let d = c.max_reliable_distance.bounded().unwrap();
        let ber = |d: f64| {
            evaluate_link(&s, Vec3::new(-0.16, 0.0, 2.0 - d), "outer-left")
                .unwrap()
                .ber
        };
        // independent 0.1 mm scan for the last reliable distance below 2 m
        let mut brute = 0.0;
        for k in 1..=20_000 {
            let x = k as f64 * 1e-4;
            if ber(x) <= 1e-2 {
                brute = x;
            }
        }
        assert!((d - brute).abs() <= 1.1e-3, "{d} vs {brute}");
        assert!(d > 0.4 && d < 0.4396, "{d}");
        assert!(c.max_reliable_angle_deg.is_some());
    }

    #[test]
    fn coverage_errors() {
        assert!(matches!(
            coverage(&builtin_l1(), "x", 1e-2, &CoverageOptions::default()),
            Err(Error::UnknownTag(_))
        ));
        assert!(coverage(&builtin_l1(), "inner", -1.0, &CoverageOptions::default()).is_err());
    }

    proptest! {
        #[test]
        fn critical_distance_is_linear_in_spacing(s in 0.01..5.0f64, a in 1.0..89.0f64) {
            let one = critical_overlap_distance(s, a).unwrap();
            let two = critical_overlap_distance(2.0 * s, a).unwrap();
            prop_assert!((two - 2.0 * one).abs() <= 1e-12 * two);
        }

        #[test]
        fn raising_threshold_never_loses_tags(p in 0.05..1.0f64, t in 1e-8..0.4f64, bump in 0.0..0.1f64) {
            let s = builtin_l1();
            let lo = resolvability(&s, p, t).unwrap();
            let hi = resolvability(&s, p, t + bump).unwrap();
            for (a, b) in lo.tags.iter().zip(&hi.tags) {
                prop_assert!(!a.resolvable || b.resolvable);
            }
        }
    }
}
