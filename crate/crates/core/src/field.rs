//! Closed-form far-field reflection of a single tile and the incoherent
//! power sum over an installed layout.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{SphericalDir, Vec3};
use crate::layout::Layout;
use crate::scene::{local_offset, BaseStation, Scenario, Tile};

/// Free-space wave impedance in ohms.
pub const FREE_SPACE_IMPEDANCE: f64 = 376.730_313_668;

/// dB value that stands in for zero power.
pub const POWER_FLOOR_DB: f64 = -400.0;

pub type ComplexField = Complex64;

/// Settings of the reflected-field model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    /// Free-space impedance `eta`.
    pub eta: f64,
    /// Normalizing impedance dividing `eta * E_inc`; the amplitude prefactor is `k * eta / eta_norm * E_inc`.
    pub eta_norm: f64,
    /// Modulation phase of the base-station signal, radians.
    pub phase_inc: f64,
    /// Engineered surface phase, radians.
    pub phase_eng: f64,
    /// Multiplier on the sinc argument, either 1.0 or 0.5.
    pub sinc_arg_scale: f64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            eta: FREE_SPACE_IMPEDANCE,
            eta_norm: FREE_SPACE_IMPEDANCE,
            phase_inc: 0.0,
            phase_eng: 0.0,
            sinc_arg_scale: 1.0,
        }
    }
}

impl FieldConfig {
    pub fn with_sinc_arg_scale(mut self, scale: f64) -> Result<Self> {
        if scale != 1.0 && scale != 0.5 {
            return Err(Error::field("sinc_arg_scale", format!("{scale} is not one of 1.0, 0.5")));
        }
        self.sinc_arg_scale = scale;
        Ok(self)
    }
}

pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

pub fn linear_to_db(p: f64) -> f64 {
    if p > 0.0 {
        (10.0 * p.log10()).max(POWER_FLOOR_DB)
    } else {
        POWER_FLOOR_DB
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Global point expressed in the tile's local frame (origin at the barycenter).
pub fn to_local(point: Vec3, tile: &Tile) -> Vec3 {
    local_offset(point, tile.barycenter)
}

/// Spherical angles of a local-frame point, polar axis along the facade normal.
pub fn local_angles(local_point: Vec3) -> Result<SphericalDir> {
    SphericalDir::from_vector(local_point)
        .ok_or_else(|| Error::Degenerate("observation point at the tile origin".into()))
}

/// Signed real amplitude of one tile's field at `obs`, before the phase terms.
///
/// Spreading uses the actual observation distance; the beam is pinned to
/// the tile's focal direction. Points on or behind the facade plane
/// receive no field.
pub fn field_amplitude(tile: &Tile, obs: Vec3, cfg: &FieldConfig, bs: &BaseStation) -> Result<f64> {
    let local = to_local(obs, tile);
    let d_obs = local.norm();
    if !(d_obs > 0.0) {
        return Err(Error::Degenerate(format!(
            "observation point coincides with the barycenter of tile {}",
            tile.index
        )));
    }
    let cos_inc = tile.cos_incidence;
    let cos_ref = tile.cos_steering();
    if local.z <= 0.0 || cos_inc < 0.0 || cos_ref < 0.0 {
        return Ok(0.0);
    }

    let k = bs.wavenumber();
    let side = tile.side;
    let u = local * (1.0 / d_obs);
    let s = tile.steering_unit;
    let arg = cfg.sinc_arg_scale * k * side;
    let pattern = sinc(arg * (u.x - s.x)) * sinc(arg * (u.y - s.y));

    Ok(k * cfg.eta / cfg.eta_norm * bs.field_amplitude * side * side * (cos_inc + cos_ref)
        / (4.0 * PI * tile.d_inc * d_obs)
        * pattern)
}

/// Complex field reflected by one tile toward `obs`.
pub fn reflected_field(tile: &Tile, obs: Vec3, cfg: &FieldConfig, bs: &BaseStation) -> Result<ComplexField> {
    let amplitude = field_amplitude(tile, obs, cfg, bs)?;
    let d_obs = to_local(obs, tile).norm();
    let k = bs.wavenumber();
    // -j * exp(-j k (d_inc + d_obs)) * exp(-j (phase_inc + phase_eng))
    let phase = -PI / 2.0 - k * (tile.d_inc + d_obs) - (cfg.phase_inc + cfg.phase_eng);
    Ok(Complex64::from_polar(amplitude, phase))
}

/// `|E|^2` of one tile at `obs`, zero for a degenerate observation point.
pub fn tile_power(tile: &Tile, obs: Vec3, cfg: &FieldConfig, bs: &BaseStation) -> f64 {
    field_amplitude(tile, obs, cfg, bs).map(|a| a * a).unwrap_or(0.0)
}

/// Incoherent sum of `|E|^2` over the installed tiles, in (V/m)^2.
pub fn received_power(layout: &Layout, obs: Vec3, scenario: &Scenario, cfg: &FieldConfig) -> Result<f64> {
    layout.check_len(scenario.tile_count())?;
    Ok(layout
        .installed()
        .map(|i| tile_power(&scenario.tiles[i], obs, cfg, &scenario.base_station))
        .sum())
}

/// Same as [`received_power`], in dB relative to 1 (V/m)^2.
pub fn received_power_db(layout: &Layout, obs: Vec3, scenario: &Scenario, cfg: &FieldConfig) -> Result<f64> {
    received_power(layout, obs, scenario, cfg).map(linear_to_db)
}

/// Horizontal sampling rectangle at a fixed height.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSpec {
    /// Horizontal center `(x, y)`.
    pub center: (f64, f64),
    /// Azimuth of the `u` axis, degrees from +x.
    pub azimuth_deg: f64,
    pub extent: (f64, f64),
    pub resolution: (usize, usize),
    pub height: f64,
}

impl RegionSpec {
    /// The `size x size` square around the area of interest at receiver height, one sample per meter.
    pub fn around_aoi(scenario: &Scenario, size: f64) -> Self {
        let c = scenario.aoi.center;
        let n = (size.round() as usize).max(1);
        Self {
            center: (c.x, c.y),
            azimuth_deg: 0.0,
            extent: (size, size),
            resolution: (n, n),
            height: scenario.aoi.receiver_height,
        }
    }

    /// The area of interest itself, sampled at the receiver pitch.
    pub fn aoi(scenario: &Scenario) -> Self {
        let a = &scenario.aoi;
        Self {
            center: (a.center.x, a.center.y),
            azimuth_deg: a.azimuth_deg,
            extent: (a.length_along_street, a.width),
            resolution: a.receiver_grid(),
            height: a.receiver_height,
        }
    }
}

/// Reflected power sampled on a rectangular lattice, in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerGrid {
    /// Corner of the region (`u = 0`, `v = 0`).
    pub origin: Vec3,
    pub axis_u: Vec3,
    pub axis_v: Vec3,
    pub extent_u: f64,
    pub extent_v: f64,
    pub resolution_u: usize,
    pub resolution_v: usize,
    pub height: f64,
    /// Row-major: `values[j * resolution_u + i]` is cell `(i, j)`.
    pub values: Vec<f64>,
}

impl PowerGrid {
    pub fn cell_center(&self, i: usize, j: usize) -> Vec3 {
        let du = self.extent_u / self.resolution_u as f64;
        let dv = self.extent_v / self.resolution_v as f64;
        let p = self.origin + self.axis_u * ((i as f64 + 0.5) * du) + self.axis_v * ((j as f64 + 0.5) * dv);
        Vec3::new(p.x, p.y, self.height)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.resolution_u + i]
    }

    pub fn max_db(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_db(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Samples the received power at the cell centers of `region`.
pub fn sample_power_grid(
    layout: &Layout,
    region: &RegionSpec,
    scenario: &Scenario,
    cfg: &FieldConfig,
) -> Result<PowerGrid> {
    use rayon::prelude::*;

    layout.check_len(scenario.tile_count())?;
    let (nu, nv) = region.resolution;
    if nu == 0 || nv == 0 {
        return Err(Error::field("region.resolution", "must be at least 1 per axis"));
    }
    if !(region.extent.0 > 0.0) || !(region.extent.1 > 0.0) {
        return Err(Error::field("region.extent", "must be positive"));
    }
    let (s, c) = region.azimuth_deg.to_radians().sin_cos();
    let axis_u = Vec3::new(c, s, 0.0);
    let axis_v = Vec3::new(-s, c, 0.0);
    let center = Vec3::new(region.center.0, region.center.1, region.height);
    let origin = center - axis_u * (region.extent.0 / 2.0) - axis_v * (region.extent.1 / 2.0);
    let mut grid = PowerGrid {
        origin,
        axis_u,
        axis_v,
        extent_u: region.extent.0,
        extent_v: region.extent.1,
        resolution_u: nu,
        resolution_v: nv,
        height: region.height,
        values: Vec::new(),
    };
    let installed: Vec<usize> = layout.installed().collect();
    grid.values = (0..nu * nv)
        .into_par_iter()
        .map(|idx| {
            let p = grid.cell_center(idx % nu, idx / nu);
            let lin: f64 = installed
                .iter()
                .map(|&i| tile_power(&scenario.tiles[i], p, cfg, &scenario.base_station))
                .sum();
            linear_to_db(lin)
        })
        .collect();
    Ok(grid)
}
