//! Points, orientations and the distance/angle triple of a line-of-sight link.
//!
//! Convention: `z` is vertical. Luminaires hang at the ceiling facing `-z`,
//! receivers face `+z` unless a scenario says otherwise.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Tolerance on `|axis| = 1` for [`Pose`] axes.
pub const AXIS_NORM_TOLERANCE: f64 = 1e-9;

/// A point or direction in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const UP: Vec3 = Vec3::new(0.0, 0.0, 1.0);
    pub const DOWN: Vec3 = Vec3::new(0.0, 0.0, -1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Position plus unit boresight (emitter) or normal (detector).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    position: Vec3,
    axis: Vec3,
}

impl Pose {
    /// Builds a pose, normalizing `axis`. Fails on non-finite input or a zero axis.
    pub fn new(position: Vec3, axis: Vec3) -> Result<Self> {
        if !position.is_finite() {
            return Err(Error::invalid("position", "components must be finite"));
        }
        if !axis.is_finite() {
            return Err(Error::invalid("axis", "components must be finite"));
        }
        let axis = axis
            .normalized()
            .ok_or_else(|| Error::invalid("axis", "axis must be non-zero"))?;
        Ok(Pose { position, axis })
    }

    pub fn facing_down(position: Vec3) -> Self {
        Pose {
            position,
            axis: Vec3::DOWN,
        }
    }

    pub fn facing_up(position: Vec3) -> Self {
        Pose {
            position,
            axis: Vec3::UP,
        }
    }

    pub fn position(&self) -> Vec3 {
        self.position
    }

    pub fn axis(&self) -> Vec3 {
        self.axis
    }
}

/// Distance and angles of a transmitter → receiver link.
///
/// The cosines are kept alongside the angles so the channel gain can use them
/// without a round trip through `acos`/`cos`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    /// Transmitter-to-receiver distance, m.
    pub distance: f64,
    /// Irradiance angle between the emitter boresight and the tx→rx direction, rad.
    pub irradiance: f64,
    /// Incidence angle between the detector normal and the rx→tx direction, rad.
    pub incidence: f64,
    pub cos_irradiance: f64,
    pub cos_incidence: f64,
}

/// Distance, irradiance angle and incidence angle between two poses.
pub fn link_geometry(tx: &Pose, rx: &Pose) -> Result<LinkGeometry> {
    let delta = rx.position - tx.position;
    let distance = delta.norm();
    if distance == 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    let dir = delta * (1.0 / distance);
    // Clamp before acos: rounding can push |cos| slightly past 1.
    let cos_irradiance = tx.axis.dot(dir).clamp(-1.0, 1.0);
    let cos_incidence = rx.axis.dot(-dir).clamp(-1.0, 1.0);
    Ok(LinkGeometry {
        distance,
        irradiance: cos_irradiance.acos(),
        incidence: cos_incidence.acos(),
        cos_irradiance,
        cos_incidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tx_ceiling() -> Pose {
        Pose::facing_down(Vec3::new(0.0, 0.0, 2.0))
    }

    #[test]
    fn collinear_facing_link() {
        let rx = Pose::facing_up(Vec3::new(0.0, 0.0, 1.7));
        let g = link_geometry(&tx_ceiling(), &rx).unwrap();
        assert!((g.distance - 0.3).abs() < 1e-12);
        assert_eq!(g.irradiance, 0.0);
        assert_eq!(g.incidence, 0.0);
    }

    #[test]
    fn lateral_offset_matches_hand_trigonometry() {
        let rx = Pose::facing_up(Vec3::new(0.16, 0.0, 1.7));
        let g = link_geometry(&tx_ceiling(), &rx).unwrap();
        let d = (0.16f64 * 0.16 + 0.3 * 0.3).sqrt();
        let angle = (0.16f64 / 0.3).atan();
        assert!((g.distance - d).abs() < 1e-12);
        assert!((g.distance - 0.3400).abs() < 1e-4);
        assert!((g.irradiance - angle).abs() < 1e-12);
        assert!((g.incidence - angle).abs() < 1e-12);
        assert!((g.irradiance - 0.4900).abs() < 1e-4);
    }

    #[test]
    fn coincident_positions_are_degenerate() {
        let rx = Pose::facing_up(Vec3::new(0.0, 0.0, 2.0));
        assert_eq!(link_geometry(&tx_ceiling(), &rx), Err(Error::DegenerateGeometry));
    }

    #[test]
    fn pose_rejects_zero_axis_and_normalizes() {
        assert!(Pose::new(Vec3::default(), Vec3::default()).is_err());
        assert!(Pose::new(Vec3::new(f64::NAN, 0.0, 0.0), Vec3::UP).is_err());
        let p = Pose::new(Vec3::default(), Vec3::new(3.0, 0.0, 4.0)).unwrap();
        assert!((p.axis().norm() - 1.0).abs() < AXIS_NORM_TOLERANCE);
    }

    #[test]
    fn back_side_angles_exceed_right_angle() {
        // receiver above a downward-facing emitter
        let rx = Pose::facing_up(Vec3::new(0.0, 0.0, 2.5));
        let g = link_geometry(&tx_ceiling(), &rx).unwrap();
        assert!((g.irradiance - std::f64::consts::PI).abs() < 1e-12);
        assert!((g.incidence - std::f64::consts::PI).abs() < 1e-12);
    }

    fn coord() -> impl Strategy<Value = f64> {
        -10.0..10.0f64
    }

    fn vec3() -> impl Strategy<Value = Vec3> {
        (coord(), coord(), coord()).prop_map(|(x, y, z)| Vec3::new(x, y, z))
    }

    fn axis() -> impl Strategy<Value = Vec3> {
        vec3().prop_filter("non-zero axis", |v| v.norm() > 1e-3)
    }

    proptest! {
        #[test]
        fn distance_is_symmetric(a in vec3(), b in vec3(), ax in axis(), bx in axis()) {
            prop_assume!((a - b).norm() > 1e-6);
            let pa = Pose::new(a, ax).unwrap();
            let pb = Pose::new(b, bx).unwrap();
            let ab = link_geometry(&pa, &pb).unwrap();
            let ba = link_geometry(&pb, &pa).unwrap();
            prop_assert!((ab.distance - ba.distance).abs() <= 1e-12 * ab.distance.max(1.0));
            prop_assert!((0.0..=std::f64::consts::PI).contains(&ab.irradiance));
            prop_assert!((0.0..=std::f64::consts::PI).contains(&ab.incidence));
        }

        #[test]
        fn aimed_axes_give_zero_angles(a in vec3(), b in vec3()) {
            prop_assume!((a - b).norm() > 1e-3);
            let tx = Pose::new(a, b - a).unwrap();
            let rx = Pose::new(b, a - b).unwrap();
            let g = link_geometry(&tx, &rx).unwrap();
            prop_assert!(g.irradiance.abs() < 1e-6);
            prop_assert!(g.incidence.abs() < 1e-6);
            prop_assert!((1.0 - g.cos_irradiance).abs() < 1e-9);
        }

        #[test]
        fn angles_invariant_under_scaling(a in vec3(), b in vec3(), ax in axis(), bx in axis(), s in 0.01..100.0f64) {
            prop_assume!((a - b).norm() > 1e-3);
            let g = link_geometry(&Pose::new(a, ax).unwrap(), &Pose::new(b, bx).unwrap()).unwrap();
            let b_scaled = a + (b - a) * s;
            let gs = link_geometry(&Pose::new(a, ax).unwrap(), &Pose::new(b_scaled, bx).unwrap()).unwrap();
            prop_assert!((g.irradiance - gs.irradiance).abs() < 1e-6);
            prop_assert!((g.incidence - gs.incidence).abs() < 1e-6);
        }
    }
}
