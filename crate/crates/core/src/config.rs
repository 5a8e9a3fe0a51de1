//! Scenario files: JSON documents with `panel`, `placement` and `radio`
//! sections. Angles are degrees and frequency is GHz in the file.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{Placement, RisPanel};
use crate::radiation::RadioConfig;
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelSection {
    pub rows: usize,
    pub cols: usize,
    /// Defaults to half a wavelength.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_dx_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_dy_m: Option<f64>,
    pub bits: u32,
    pub levels_deg: Vec<f64>,
    #[serde(default = "one")]
    pub reflection: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementSection {
    pub d1_m: f64,
    pub d2_m: f64,
    pub theta_t_deg: f64,
    pub phi_t_deg: f64,
    pub theta_r_deg: f64,
    pub phi_r_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    pub freq_ghz: f64,
    pub tx_power_dbm: f64,
    pub gain_tx_dbi: f64,
    pub gain_rx_dbi: f64,
    #[serde(default = "one")]
    pub cell_alpha: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub panel: PanelSection,
    pub placement: PlacementSection,
    pub radio: RadioSection,
}

const SECTIONS: [&str; 3] = ["panel", "placement", "radio"];

impl ScenarioFile {
    /// Parses a document, naming the offending key on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| Error::config("scenario", format!("not valid JSON: {e}")))?;
        let Value::Object(map) = doc else {
            return Err(Error::config("scenario", "top level must be an object"));
        };
        if let Some(k) = map.keys().find(|k| !SECTIONS.contains(&k.as_str())) {
            return Err(Error::config(k.clone(), "unknown section"));
        }
        let section = |name: &str| -> Result<Value> {
            map.get(name)
                .cloned()
                .ok_or_else(|| Error::config(name, "missing section"))
        };
        Ok(Self {
            panel: parse_section("panel", section("panel")?)?,
            placement: parse_section("placement", section("placement")?)?,
            radio: parse_section("radio", section("radio")?)?,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::config("scenario", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        let r = &self.radio;
        if !(r.freq_ghz > 0.0 && r.freq_ghz.is_finite()) {
            return Err(Error::config("radio.freq_ghz", "must be positive"));
        }
        let radio = RadioConfig::from_frequency_hz(
            r.freq_ghz * 1e9,
            r.tx_power_dbm,
            r.gain_tx_dbi,
            r.gain_rx_dbi,
            r.cell_alpha,
        )?;
        let p = &self.panel;
        let half = radio.wavelength / 2.0;
        let panel = RisPanel::new(
            p.rows,
            p.cols,
            p.cell_dx_m.unwrap_or(half),
            p.cell_dy_m.unwrap_or(half),
            p.bits,
            p.levels_deg.iter().map(|d| d.to_radians()).collect(),
            p.reflection,
        )?;
        let pl = &self.placement;
        let placement = Placement::new(
            pl.d1_m,
            pl.theta_t_deg.to_radians(),
            pl.phi_t_deg.to_radians(),
            pl.d2_m,
            pl.theta_r_deg.to_radians(),
            pl.phi_r_deg.to_radians(),
        )?;
        Scenario::new(panel, placement, radio)
    }
}

fn parse_section<T: for<'de> Deserialize<'de>>(name: &str, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| {
        let msg = e.to_string();
        // serde names the field in backticks; surface it as the key
        let key = msg
            .split('`')
            .nth(1)
            .map(|f| format!("{name}.{f}"))
            .unwrap_or_else(|| name.to_string());
        Error::config(key, msg)
    })
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    ScenarioFile::load(path)?.to_scenario()
}
