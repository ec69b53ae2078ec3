//! Browser bindings for the LED-ID simulator: a BER heatmap for one tag, a
//! link probe at a single receiver position, and a resolvability table.

use std::fmt::Write;

use ledid_core::export::log_ber_gray;
use ledid_core::{
    builtin_g1, builtin_l1, evaluate_grid, evaluate_link, load_scenario, resolvability, GridSpec, Scenario, Vec3,
};
use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct Demo {
    scenario: Scenario,
}

fn js(e: ledid_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

impl Demo {
    fn plane_z(&self, plane_cm: f64) -> f64 {
        self.scenario.room().height_m() - plane_cm / 100.0
    }
}

#[wasm_bindgen]
impl Demo {
    /// `source` is `"l1"`, `"g1"` or the text of a scenario TOML document.
    #[wasm_bindgen(constructor)]
    pub fn new(source: &str) -> Result<Demo, JsError> {
        let scenario = match source.trim() {
            "l1" => builtin_l1(),
            "g1" => builtin_g1(),
            text => load_scenario(text).map_err(js)?,
        };
        Ok(Demo { scenario })
    }

    pub fn name(&self) -> String {
        self.scenario.name().to_string()
    }

    pub fn tags(&self) -> Vec<String> {
        self.scenario.tags().into_iter().map(String::from).collect()
    }

    /// Room footprint as `[x_min, x_max, y_min, y_max]`, m.
    pub fn extent(&self) -> Vec<f64> {
        let room = self.scenario.room();
        let (x, y) = (room.x_range(), room.y_range());
        vec![x.0, x.1, y.0, y.1]
    }

    /// Gray levels of log10(BER) (0 = 1e-8 or better, 255 = 0.5), row-major
    /// with the first row at `y_min`.
    pub fn heatmap(&self, tag: &str, plane_cm: f64, resolution: usize) -> Result<Vec<u8>, JsError> {
        let spec = GridSpec::covering_room(self.scenario.room(), plane_cm / 100.0, resolution).map_err(js)?;
        let grid = evaluate_grid(&self.scenario, &spec, tag).map_err(js)?;
        Ok(grid.cells.iter().map(|c| log_ber_gray(c.ber)).collect())
    }

    /// Link budget for `tag` at `(x, y)` on the given plane, as `key=value` lines.
    pub fn probe(&self, tag: &str, x: f64, y: f64, plane_cm: f64) -> Result<String, JsError> {
        let budget = evaluate_link(&self.scenario, Vec3::new(x, y, self.plane_z(plane_cm)), tag).map_err(js)?;
        let mut out = String::new();
        let _ = writeln!(out, "position_m=({x:.3}, {y:.3})");
        for (t, h) in &budget.per_luminaire_gain {
            let _ = writeln!(out, "gain[{t}]={h:.4e}");
        }
        let _ = writeln!(out, "received_power_w={:.4e}", budget.received_power_w);
        let _ = writeln!(out, "signal_ms={:.4e}", budget.signal_ms);
        let _ = writeln!(out, "interference_ms={:.4e}", budget.interference_ms);
        let _ = writeln!(out, "noise_var={:.4e}", budget.noise_variance);
        let _ = writeln!(out, "snr={:.4e}", budget.snr);
        let _ = write!(out, "ber={:.4e}", budget.ber);
        Ok(out)
    }

    /// Per-tag BER under each tag's lamps and the cone-overlap distance.
    pub fn resolve(&self, plane_cm: f64, threshold: f64) -> Result<String, JsError> {
        let report = resolvability(&self.scenario, plane_cm / 100.0, threshold).map_err(js)?;
        let mut out = String::new();
        for t in &report.tags {
            let verdict = if t.resolvable { "resolvable" } else { "NOT resolvable" };
            let _ = writeln!(out, "{:<12} BER {:.3e}  {verdict}", t.tag, t.min_ber_under_lamp);
        }
        match report.critical_distance_m {
            Some(d) => {
                let _ = write!(out, "cones overlap beyond {:.1} cm", d * 100.0);
            }
            None => out.push_str("single luminaire, no overlap distance"),
        }
        Ok(out)
    }
}
