//! BER fields over a receiver plane parallel to the ceiling.
//!
//! Cells are sampled at their centers. Center `i` of an `n`-cell axis is
//! `mid + half·(2i+1−n)/n`, so centers mirrored about `mid` are exact
//! negations of each other and the centers of an `n`-grid reappear bit for bit
//! in a `3n`-grid.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::link::evaluate_link;
use crate::scenario::{Room, Scenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Distance of the receiver plane below the luminaire (ceiling) plane, m.
    pub plane_distance_m: f64,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Cells per axis.
    pub resolution: usize,
}

impl GridSpec {
    pub fn new(plane_distance_m: f64, x_range: (f64, f64), y_range: (f64, f64), resolution: usize) -> Result<Self> {
        if !(plane_distance_m > 0.0 && plane_distance_m.is_finite()) {
            return Err(Error::invalid(
                "plane_distance",
                format!("must be positive and finite, got {plane_distance_m}"),
            ));
        }
        for (name, (lo, hi)) in [("x_range", x_range), ("y_range", y_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::invalid(name, format!("need finite lo < hi, got ({lo}, {hi})")));
            }
        }
        if resolution < 2 {
            return Err(Error::invalid("resolution", format!("must be >= 2, got {resolution}")));
        }
        Ok(GridSpec {
            plane_distance_m,
            x_range,
            y_range,
            resolution,
        })
    }

    /// Grid spanning the whole room footprint.
    pub fn covering_room(room: &Room, plane_distance_m: f64, resolution: usize) -> Result<Self> {
        GridSpec::new(plane_distance_m, room.x_range(), room.y_range(), resolution)
    }

    fn check_fits(&self, room: &Room) -> Result<()> {
        if self.plane_distance_m > room.height_m() {
            return Err(Error::invalid(
                "plane_distance",
                format!("{} m puts the plane below the floor", self.plane_distance_m),
            ));
        }
        let within = |(lo, hi): (f64, f64), (rlo, rhi): (f64, f64)| lo >= rlo && hi <= rhi;
        if !within(self.x_range, room.x_range()) {
            return Err(Error::invalid("x_range", "extends beyond the room footprint"));
        }
        if !within(self.y_range, room.y_range()) {
            return Err(Error::invalid("y_range", "extends beyond the room footprint"));
        }
        Ok(())
    }

    fn center(&self, (lo, hi): (f64, f64), i: usize) -> f64 {
        let n = self.resolution as f64;
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        mid + half * ((2.0 * i as f64 + 1.0 - n) / n)
    }

    pub fn x_center(&self, i: usize) -> f64 {
        self.center(self.x_range, i)
    }

    pub fn y_center(&self, j: usize) -> f64 {
        self.center(self.y_range, j)
    }

    pub fn cell_count(&self) -> usize {
        self.resolution * self.resolution
    }
}

/// Link summary at one cell center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub x: f64,
    pub y: f64,
    pub h_data: f64,
    pub signal_ms: f64,
    pub interference_ms: f64,
    pub noise_variance: f64,
    pub snr: f64,
    pub ber: f64,
}

/// BER field for one tag. Cells are row-major: `y` index outer, `x` index inner.
#[derive(Debug, Clone, PartialEq)]
pub struct BerGrid {
    pub spec: GridSpec,
    pub tag: String,
    /// Height of the receiver plane, m.
    pub plane_z: f64,
    pub cells: Vec<GridCell>,
}

impl BerGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> &GridCell {
        &self.cells[iy * self.spec.resolution + ix]
    }

    /// Row-major iterator over `(ix, iy, cell)`.
    pub fn indexed(&self) -> impl Iterator<Item = (usize, usize, &GridCell)> {
        let n = self.spec.resolution;
        self.cells.iter().enumerate().map(move |(k, c)| (k % n, k / n, c))
    }

    /// Cell with the lowest BER (first in row-major order on ties).
    pub fn min_ber_cell(&self) -> &GridCell {
        self.cells
            .iter()
            .reduce(|best, c| if c.ber < best.ber { c } else { best })
            .expect("grids have at least 4 cells")
    }
}

fn evaluate_cell(scenario: &Scenario, spec: &GridSpec, z: f64, tag: &str, k: usize) -> Result<GridCell> {
    let n = spec.resolution;
    let (x, y) = (spec.x_center(k % n), spec.y_center(k / n));
    let b = evaluate_link(scenario, Vec3::new(x, y, z), tag)?;
    Ok(GridCell {
        x,
        y,
        h_data: b.h_data,
        signal_ms: b.signal_ms,
        interference_ms: b.interference_ms,
        noise_variance: b.noise_variance,
        snr: b.snr,
        ber: b.ber,
    })
}

/// Evaluates the link for `tag` at every cell center of `spec`.
///
/// Each cell is an independent pure evaluation, so the result does not depend
/// on the number of worker threads.
pub fn evaluate_grid(scenario: &Scenario, spec: &GridSpec, tag: &str) -> Result<BerGrid> {
    if !scenario.has_tag(tag) {
        return Err(Error::UnknownTag(tag.to_string()));
    }
    spec.check_fits(scenario.room())?;
    let z = scenario.room().height_m() - spec.plane_distance_m;

    #[cfg(feature = "parallel")]
    let cells = (0..spec.cell_count())
        .into_par_iter()
        .map(|k| evaluate_cell(scenario, spec, z, tag, k))
        .collect::<Result<Vec<_>>>()?;
    #[cfg(not(feature = "parallel"))]
    let cells = (0..spec.cell_count())
        .map(|k| evaluate_cell(scenario, spec, z, tag, k))
        .collect::<Result<Vec<_>>>()?;

    Ok(BerGrid {
        spec: *spec,
        tag: tag.to_string(),
        plane_z: z,
        cells,
    })
}
