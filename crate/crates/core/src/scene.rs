//! Problem geometry: base station, facade tile lattice, area of interest,
//! per-tile focal points and the receiver lattice.
//!
//! The facade lies in the plane `x = 0` and the base station sits in front
//! of it (`x > 0`). Tiles are enumerated in raster order from the top-left
//! corner of the facade: the index runs along +y first, then steps down in z.

use crate::error::{Error, Result};
use crate::geometry::{SphericalDir, Vec3};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BaseStation {
    pub position: Vec3,
    /// Incident field amplitude in V/m.
    pub field_amplitude: f64,
    /// Carrier frequency in Hz.
    pub frequency: f64,
}

impl BaseStation {
    pub fn new(position: Vec3, field_amplitude: f64, frequency: f64) -> Result<Self> {
        if !position.is_finite() {
            return Err(Error::field("bs_position", "components must be finite"));
        }
        if !(position.x > 0.0) {
            return Err(Error::field(
                "bs_position",
                format!("x = {} places the base station behind the facade plane x = 0", position.x),
            ));
        }
        if !(field_amplitude > 0.0) || !field_amplitude.is_finite() {
            return Err(Error::field("e_field_amplitude", "must be positive"));
        }
        if !(frequency > 0.0) || !frequency.is_finite() {
            return Err(Error::field("frequency_hz", "must be positive"));
        }
        Ok(Self { position, field_amplitude, frequency })
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength()
    }
}

/// Uniform square-tile lattice on the facade plane with an admissibility mask.
#[derive(Debug, Clone, PartialEq)]
pub struct FacadeGrid {
    /// `(y, z)` of tile 1, the top-left cell.
    pub first_barycenter: (f64, f64),
    pub tile_side: f64,
    pub ny: usize,
    pub nz: usize,
    /// Row-major, `true` where a tile may be installed.
    pub admissible_mask: Vec<bool>,
}

impl FacadeGrid {
    pub fn new(
        first_barycenter: (f64, f64),
        tile_side: f64,
        ny: usize,
        nz: usize,
        admissible_mask: Option<Vec<bool>>,
    ) -> Result<Self> {
        if !(tile_side > 0.0) || !tile_side.is_finite() {
            return Err(Error::field("facade.tile_side_m", "must be positive"));
        }
        if ny == 0 {
            return Err(Error::field("facade.ny", "must be at least 1"));
        }
        if nz == 0 {
            return Err(Error::field("facade.nz", "must be at least 1"));
        }
        if !first_barycenter.0.is_finite() || !first_barycenter.1.is_finite() {
            return Err(Error::field("facade.first_barycenter_yz", "must be finite"));
        }
        let n = ny * nz;
        let admissible_mask = admissible_mask.unwrap_or_else(|| vec![true; n]);
        if admissible_mask.len() != n {
            return Err(Error::field(
                "facade.mask",
                format!("has {} cells but ny*nz = {}", admissible_mask.len(), n),
            ));
        }
        if !admissible_mask.iter().any(|&b| b) {
            return Err(Error::NoAdmissibleTiles);
        }
        Ok(Self { first_barycenter, tile_side, ny, nz, admissible_mask })
    }

    /// Total number of lattice cells, `N`.
    pub fn len(&self) -> usize {
        self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn admissible_count(&self) -> usize {
        self.admissible_mask.iter().filter(|&&b| b).count()
    }

    /// Barycenter of tile `n` (1-based, raster order).
    pub fn barycenter(&self, n: usize) -> Result<Vec3> {
        tile_barycenter(self, n)
    }
}

/// Barycenter of the `n`-th tile (1-based) in raster order from the top-left corner.
pub fn tile_barycenter(grid: &FacadeGrid, n: usize) -> Result<Vec3> {
    if n == 0 || n > grid.len() {
        return Err(Error::IndexOutOfRange { index: n, count: grid.len() });
    }
    let row = (n - 1) / grid.ny;
    let col = n - 1 - row * grid.ny;
    let (y1, z1) = grid.first_barycenter;
    Ok(Vec3::new(
        0.0,
        y1 + col as f64 * grid.tile_side,
        z1 - row as f64 * grid.tile_side,
    ))
}

/// Direction of arrival at a tile, i.e. the direction from the tile toward the base station.
pub fn incident_direction(bs: &BaseStation, tile_barycenter: Vec3) -> Result<SphericalDir> {
    SphericalDir::from_vector(bs.position - tile_barycenter)
        .ok_or_else(|| Error::Degenerate("base station coincides with the tile barycenter".into()))
}

/// Rectangular ground region parallel to the x-y plane.
///
/// The long axis points along `azimuth_deg`; the short axis is the long axis
/// rotated by +90 degrees. Partition cells and receivers are both laid out
/// in raster order with the long-axis index running fastest, starting from
/// the corner at `-length/2` (long) and `-width/2` (short).
#[derive(Debug, Clone, PartialEq)]
pub struct AreaOfInterest {
    /// Center; its `z` is the plane height of the focal points.
    pub center: Vec3,
    pub length_along_street: f64,
    pub width: f64,
    pub azimuth_deg: f64,
    /// `(p_long, p_short)` focal cells.
    pub partition_grid: (usize, usize),
    pub receiver_height: f64,
    /// Receivers per square meter.
    pub receiver_density: f64,
}

impl AreaOfInterest {
    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() {
            return Err(Error::field("aoi.center_xyz", "components must be finite"));
        }
        if !(self.length_along_street > 0.0) || !self.length_along_street.is_finite() {
            return Err(Error::field("aoi.length_m", "must be positive"));
        }
        if !(self.width > 0.0) || !self.width.is_finite() {
            return Err(Error::field("aoi.width_m", "must be positive"));
        }
        if !self.azimuth_deg.is_finite() {
            return Err(Error::field("aoi.azimuth_deg", "must be finite"));
        }
        if self.partition_grid.0 == 0 || self.partition_grid.1 == 0 {
            return Err(Error::field("aoi.partition", "counts must be at least 1"));
        }
        if !(self.receiver_density > 0.0) || !self.receiver_density.is_finite() {
            return Err(Error::field("aoi.receiver_density_per_m2", "must be positive"));
        }
        if !self.receiver_height.is_finite() {
            return Err(Error::field("aoi.receiver_height_m", "must be finite"));
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        self.length_along_street * self.width
    }

    pub fn partition_count(&self) -> usize {
        self.partition_grid.0 * self.partition_grid.1
    }

    pub fn long_axis(&self) -> Vec3 {
        let (s, c) = self.azimuth_deg.to_radians().sin_cos();
        Vec3::new(c, s, 0.0)
    }

    pub fn short_axis(&self) -> Vec3 {
        let (s, c) = self.azimuth_deg.to_radians().sin_cos();
        Vec3::new(-s, c, 0.0)
    }

    /// Point at local coordinates `(along, across)` measured from the center, at height `z`.
    pub fn point_at(&self, along: f64, across: f64, z: f64) -> Vec3 {
        let p = self.center + self.long_axis() * along + self.short_axis() * across;
        Vec3::new(p.x, p.y, z)
    }

    /// Local `(along, across)` coordinates of a point's horizontal projection.
    pub fn local_coords(&self, p: Vec3) -> (f64, f64) {
        let d = Vec3::new(p.x - self.center.x, p.y - self.center.y, 0.0);
        (d.dot(self.long_axis()), d.dot(self.short_axis()))
    }

    /// True when the horizontal projection of `p` lies in the closed rectangle (with slack `tol`).
    pub fn contains(&self, p: Vec3, tol: f64) -> bool {
        let (a, c) = self.local_coords(p);
        a.abs() <= self.length_along_street / 2.0 + tol && c.abs() <= self.width / 2.0 + tol
    }

    /// Receiver lattice dimensions `(n_long, n_short)`.
    pub fn receiver_grid(&self) -> (usize, usize) {
        let pitch = 1.0 / self.receiver_density.sqrt();
        let n_long = ((self.length_along_street / pitch).round() as usize).max(1);
        let n_short = ((self.width / pitch).round() as usize).max(1);
        (n_long, n_short)
    }
}

/// Cell centers of the raster-ordered `p_long x p_short` partition of the area of interest.
///
/// Tile `n` is paired with partition `n`, so the grid must have exactly as
/// many cells as the facade.
pub fn assign_focal_points(grid: &FacadeGrid, aoi: &AreaOfInterest) -> Result<Vec<Vec3>> {
    let n = grid.len();
    if aoi.partition_count() != n {
        return Err(Error::field(
            "aoi.partition",
            format!(
                "{} x {} = {} cells, but the facade has N = {} tiles",
                aoi.partition_grid.0,
                aoi.partition_grid.1,
                aoi.partition_count(),
                n
            ),
        ));
    }
    let (p_long, p_short) = aoi.partition_grid;
    let cell_long = aoi.length_along_street / p_long as f64;
    let cell_short = aoi.width / p_short as f64;
    Ok((0..n)
        .map(|i| {
            let il = i % p_long;
            let is = i / p_long;
            let along = -aoi.length_along_street / 2.0 + (il as f64 + 0.5) * cell_long;
            let across = -aoi.width / 2.0 + (is as f64 + 0.5) * cell_short;
            aoi.point_at(along, across, aoi.center.z)
        })
        .collect())
}

/// Uniform receiver lattice over the area of interest at the receiver height.
pub fn place_receivers(aoi: &AreaOfInterest) -> Result<Vec<Vec3>> {
    if !(aoi.area() > 0.0) {
        return Err(Error::Degenerate("area of interest has zero area".into()));
    }
    if !(aoi.receiver_density > 0.0) {
        return Err(Error::field("aoi.receiver_density_per_m2", "must be positive"));
    }
    let (n_long, n_short) = aoi.receiver_grid();
    let step_long = aoi.length_along_street / n_long as f64;
    let step_short = aoi.width / n_short as f64;
    let mut out = Vec::with_capacity(n_long * n_short);
    for is in 0..n_short {
        let across = -aoi.width / 2.0 + (is as f64 + 0.5) * step_short;
        for il in 0..n_long {
            let along = -aoi.length_along_street / 2.0 + (il as f64 + 0.5) * step_long;
            out.push(aoi.point_at(along, across, aoi.receiver_height));
        }
    }
    Ok(out)
}

/// Maps a global point into the local frame centered on `barycenter`:
/// `x~` along +y, `y~` along +z and `z~` along the facade normal +x.
pub(crate) fn local_offset(point: Vec3, barycenter: Vec3) -> Vec3 {
    Vec3::new(point.y - barycenter.y, point.z - barycenter.z, point.x - barycenter.x)
}

/// One facade cell with its cached incidence and steering geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    /// 1-based raster index.
    pub index: usize,
    pub barycenter: Vec3,
    /// Side length `L` in meters.
    pub side: f64,
    pub focal_point: Vec3,
    /// Global direction from the tile toward the base station.
    pub incident_dir: SphericalDir,
    /// Local-frame direction from the tile toward its focal point.
    pub steering_dir_local: SphericalDir,
    pub d_inc: f64,
    pub d_focal: f64,
    pub admissible: bool,
    /// Cosine between the incoming direction and the facade normal.
    pub cos_incidence: f64,
    /// Local-frame unit vector toward the focal point.
    pub steering_unit: Vec3,
}

impl Tile {
    pub fn new(
        index: usize,
        barycenter: Vec3,
        side: f64,
        focal_point: Vec3,
        bs: &BaseStation,
        admissible: bool,
    ) -> Result<Self> {
        let incident_dir = incident_direction(bs, barycenter)?;
        let d_inc = bs.position.distance(barycenter);
        let cos_incidence = (bs.position.x - barycenter.x) / d_inc;

        let local_focal = local_offset(focal_point, barycenter);
        let d_focal = local_focal.norm();
        let steering_unit = local_focal.normalized().ok_or_else(|| {
            Error::Degenerate(format!("focal point of tile {index} coincides with its barycenter"))
        })?;
        if !(steering_unit.z > 0.0) {
            return Err(Error::field(
                "aoi.center_xyz",
                format!("focal point of tile {index} is not in front of the facade (x must be > 0)"),
            ));
        }
        let steering_dir_local = SphericalDir::from_vector(local_focal)
            .ok_or_else(|| Error::Degenerate("zero steering vector".into()))?;

        Ok(Self {
            index,
            barycenter,
            side,
            focal_point,
            incident_dir,
            steering_dir_local,
            d_inc,
            d_focal,
            admissible,
            cos_incidence,
            steering_unit,
        })
    }

    pub fn cos_steering(&self) -> f64 {
        self.steering_unit.z
    }
}

/// A fully-resolved problem instance. Immutable once built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub base_station: BaseStation,
    pub facade: FacadeGrid,
    pub aoi: AreaOfInterest,
    pub power_threshold_db: f64,
    pub blackout_threshold_db: f64,
    pub tiles: Vec<Tile>,
    pub receivers: Vec<Vec3>,
}

impl Scenario {
    pub fn new(
        base_station: BaseStation,
        facade: FacadeGrid,
        aoi: AreaOfInterest,
        power_threshold_db: f64,
        blackout_threshold_db: f64,
    ) -> Result<Self> {
        aoi.validate()?;
        if !power_threshold_db.is_finite() {
            return Err(Error::field("thresholds.p_th_db", "must be finite"));
        }
        if !blackout_threshold_db.is_finite() {
            return Err(Error::field("thresholds.p_bls_db", "must be finite"));
        }
        if power_threshold_db < blackout_threshold_db {
            return Err(Error::field(
                "thresholds",
                format!("p_th_db ({power_threshold_db}) must be >= p_bls_db ({blackout_threshold_db})"),
            ));
        }
        let focal = assign_focal_points(&facade, &aoi)?;
        let tiles = focal
            .into_iter()
            .enumerate()
            .map(|(i, fp)| {
                let bary = tile_barycenter(&facade, i + 1)?;
                Tile::new(i + 1, bary, facade.tile_side, fp, &base_station, facade.admissible_mask[i])
            })
            .collect::<Result<Vec<_>>>()?;
        let receivers = place_receivers(&aoi)?;
        Ok(Self {
            base_station,
            facade,
            aoi,
            power_threshold_db,
            blackout_threshold_db,
            tiles,
            receivers,
        })
    }

    /// Number of facade cells, `N`.
    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn receiver_count(&self) -> usize {
        self.receivers.len()
    }

    pub fn power_threshold_linear(&self) -> f64 {
        crate::field::db_to_linear(self.power_threshold_db)
    }

    pub fn blackout_threshold_linear(&self) -> f64 {
        crate::field::db_to_linear(self.blackout_threshold_db)
    }

    /// Center of the facade tile lattice.
    pub fn facade_center(&self) -> Vec3 {
        let g = &self.facade;
        let (y1, z1) = g.first_barycenter;
        Vec3::new(
            0.0,
            y1 + (g.ny as f64 - 1.0) * g.tile_side / 2.0,
            z1 - (g.nz as f64 - 1.0) * g.tile_side / 2.0,
        )
    }
}
