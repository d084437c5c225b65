//! Single-tile steering benchmark: one tile at the origin, illuminated at
//! normal incidence, sampled on a sphere around the tile.

use crate::error::{Error, Result};
use crate::field::{linear_to_db, tile_power, FieldConfig};
use crate::geometry::{SphericalDir, Vec3};
use crate::scene::{BaseStation, Tile};

#[derive(Debug, Clone, PartialEq)]
pub struct SingleTileBenchmark {
    pub frequency: f64,
    /// Tile side in wavelengths.
    pub side_wavelengths: f64,
    pub bs_distance: f64,
    pub field_amplitude: f64,
    /// Local-frame steering direction.
    pub steering: SphericalDir,
    pub sphere_radius: f64,
    /// Step of the coarse angular scan, degrees.
    pub scan_step_deg: f64,
    pub field: FieldConfig,
}

impl Default for SingleTileBenchmark {
    fn default() -> Self {
        Self {
            frequency: 27e9,
            side_wavelengths: 25.0,
            bs_distance: 100.0,
            field_amplitude: 1.0,
            steering: SphericalDir::new(40.0, -20.0),
            sphere_radius: 5.0,
            scan_step_deg: 0.25,
            field: FieldConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleTileReport {
    pub peak_dir: SphericalDir,
    pub peak_db: f64,
    /// Full -3 dB width of the cut through the peak at constant phi, degrees of theta.
    pub beamwidth_theta_deg: f64,
    /// Full -3 dB width of the cut through the peak at constant theta, degrees of phi.
    pub beamwidth_phi_deg: f64,
    /// Angle between the peak and the requested steering direction, degrees.
    pub pointing_error_deg: f64,
    pub side: f64,
}

/// Local tile frame to global: local (x, y, z) sits at global (z, x, y).
fn local_to_global(v: Vec3) -> Vec3 {
    Vec3::new(v.z, v.x, v.y)
}

impl SingleTileBenchmark {
    pub fn base_station(&self) -> Result<BaseStation> {
        BaseStation::new(Vec3::new(self.bs_distance, 0.0, 0.0), self.field_amplitude, self.frequency)
    }

    pub fn tile(&self) -> Result<Tile> {
        let bs = self.base_station()?;
        let side = self.side_wavelengths * bs.wavelength();
        if !(side > 0.0) {
            return Err(Error::field("side", "tile side must be positive"));
        }
        let focal = local_to_global(self.steering.unit_vector() * self.sphere_radius);
        Tile::new(1, Vec3::ZERO, side, focal, &bs, true)
    }

    /// `|E|^2` in the local direction `dir` on the sampling sphere.
    pub fn power(&self, tile: &Tile, bs: &BaseStation, dir: SphericalDir) -> f64 {
        let p = local_to_global(dir.unit_vector() * self.sphere_radius);
        tile_power(tile, p, &self.field, bs)
    }

    pub fn run(&self) -> Result<SingleTileReport> {
        if !(self.scan_step_deg > 0.0) || !(self.sphere_radius > 0.0) {
            return Err(Error::field("scan", "step and radius must be positive"));
        }
        let bs = self.base_station()?;
        let tile = self.tile()?;
        let eval = |theta: f64, phi: f64| self.power(&tile, &bs, SphericalDir::new(theta, phi));

        // coarse scan of the front hemisphere
        let step = self.scan_step_deg;
        let n_theta = (90.0 / step).floor() as usize;
        let n_phi = (360.0 / step).round() as usize;
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        for i in 0..=n_theta {
            let theta = i as f64 * step;
            for j in 0..n_phi {
                let phi = -180.0 + (j as f64 + 1.0) * step;
                let p = eval(theta, phi);
                if p > best.0 {
                    best = (p, theta, phi);
                }
            }
        }

        // successive local refinement
        let (mut p_best, mut t_best, mut f_best) = best;
        let mut h = step;
        while h > 1e-4 {
            let (t0, f0) = (t_best, f_best);
            for a in -4..=4 {
                for b in -4..=4 {
                    let theta = (t0 + a as f64 * h / 4.0).clamp(0.0, 90.0);
                    let phi = f0 + b as f64 * h / 4.0;
                    let p = eval(theta, phi);
                    if p > p_best {
                        p_best = p;
                        t_best = theta;
                        f_best = phi;
                    }
                }
            }
            h /= 4.0;
        }

        let half = p_best / 2.0;
        let width = |f: &dyn Fn(f64) -> f64| -> f64 {
            let edge = |dir: f64| -> f64 {
                let dx = 1e-3;
                let mut x = 0.0;
                let mut prev = p_best;
                while x < 90.0 {
                    let next = f(dir * (x + dx));
                    if next < half {
                        // linear interpolation between the bracketing samples
                        return x + dx * (prev - half) / (prev - next);
                    }
                    prev = next;
                    x += dx;
                }
                x
            };
            edge(1.0) + edge(-1.0)
        };
        let beamwidth_theta_deg = width(&|d| eval(t_best + d, f_best));
        let beamwidth_phi_deg = width(&|d| eval(t_best, f_best + d));

        let mut peak_dir = SphericalDir::new(t_best, f_best);
        if peak_dir.phi > 180.0 {
            peak_dir.phi -= 360.0;
        } else if peak_dir.phi <= -180.0 {
            peak_dir.phi += 360.0;
        }
        Ok(SingleTileReport {
            pointing_error_deg: peak_dir.angular_distance(self.steering),
            peak_dir,
            peak_db: linear_to_db(p_best),
            beamwidth_theta_deg,
            beamwidth_phi_deg,
            side: tile.side,
        })
    }
}
