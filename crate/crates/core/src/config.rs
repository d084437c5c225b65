//! Scenario configuration files (TOML).
//!
//! ```toml
//! frequency_hz = 27e9
//! bs_position = [100.0, 0.0, 10.0]
//! e_field_amplitude = 1.0
//!
//! [facade]
//! first_barycenter_yz = [-2.25, 7.75]
//! tile_side_m = 0.5
//! ny = 10
//! nz = 6
//! # mask = "1111111111 ..."   optional, row-major, whitespace ignored
//!
//! [aoi]
//! center_xyz = [80.35, 95.75, 1.5]
//! length_m = 50.0
//! width_m = 10.0
//! azimuth_deg = 50.0
//! partition = [10, 6]
//! receiver_height_m = 1.5
//! receiver_density_per_m2 = 1.0
//!
//! [thresholds]
//! p_th_db = -70.0
//! p_bls_db = -100.0
//!
//! [field]                     # optional
//! sinc_arg_scale = 1.0
//! eta_norm_ohm = 376.730313668
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::geometry::Vec3;
use crate::scene::{AreaOfInterest, BaseStation, FacadeGrid, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub frequency_hz: f64,
    pub bs_position: [f64; 3],
    pub e_field_amplitude: f64,
    pub facade: FacadeSection,
    pub aoi: AoiSection,
    pub thresholds: ThresholdSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacadeSection {
    pub first_barycenter_yz: [f64; 2],
    pub tile_side_m: f64,
    pub ny: usize,
    pub nz: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AoiSection {
    pub center_xyz: [f64; 3],
    pub length_m: f64,
    pub width_m: f64,
    pub azimuth_deg: f64,
    pub partition: [usize; 2],
    pub receiver_height_m: f64,
    pub receiver_density_per_m2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSection {
    pub p_th_db: f64,
    pub p_bls_db: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub sinc_arg_scale: Option<f64>,
    pub eta_norm_ohm: Option<f64>,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            path: "<string>".into(),
            message: e.to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario config always serializes")
    }

    /// Parses the optional row-major mask string. `None` means all cells admissible.
    pub fn mask(&self) -> Result<Option<Vec<bool>>> {
        let Some(text) = &self.facade.mask else { return Ok(None) };
        text.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(Error::field("facade.mask", format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    /// Field-model settings, falling back to defaults for absent keys.
    pub fn field_config(&self) -> Result<FieldConfig> {
        let mut cfg = FieldConfig::default();
        if let Some(section) = &self.field {
            if let Some(s) = section.sinc_arg_scale {
                cfg = cfg.with_sinc_arg_scale(s).map_err(|_| {
                    Error::field("field.sinc_arg_scale", format!("{s} is not one of 1.0, 0.5"))
                })?;
            }
            if let Some(eta_norm) = section.eta_norm_ohm {
                if !(eta_norm > 0.0) || !eta_norm.is_finite() {
                    return Err(Error::field("field.eta_norm_ohm", "must be positive"));
                }
                cfg.eta_norm = eta_norm;
            }
        }
        Ok(cfg)
    }
}

/// Validates a configuration and resolves every tile's cached geometry.
pub fn build_scenario(config: &ScenarioConfig) -> Result<Scenario> {
    let bs = BaseStation::new(
        Vec3::from_array(config.bs_position),
        config.e_field_amplitude,
        config.frequency_hz,
    )?;
    let f = &config.facade;
    let facade = FacadeGrid::new(
        (f.first_barycenter_yz[0], f.first_barycenter_yz[1]),
        f.tile_side_m,
        f.ny,
        f.nz,
        config.mask()?,
    )?;
    let a = &config.aoi;
    let aoi = AreaOfInterest {
        center: Vec3::from_array(a.center_xyz),
        length_along_street: a.length_m,
        width: a.width_m,
        azimuth_deg: a.azimuth_deg,
        partition_grid: (a.partition[0], a.partition[1]),
        receiver_height: a.receiver_height_m,
        receiver_density: a.receiver_density_per_m2,
    };
    Scenario::new(bs, facade, aoi, config.thresholds.p_th_db, config.thresholds.p_bls_db)
}

/// Loads and builds a scenario together with its field settings.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<(Scenario, FieldConfig)> {
    let config = ScenarioConfig::load(path)?;
    Ok((build_scenario(&config)?, config.field_config()?))
}
