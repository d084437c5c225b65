//! Plain-text artifacts: power grids, fronts, layouts and coverage reports.
//!
//! Every number is written with six significant digits; Rust formatting
//! does not depend on the locale.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::field::{PowerGrid, POWER_FLOOR_DB};
use crate::geometry::Vec3;
use crate::layout::Layout;
use crate::objectives::{CoverageReport, ObjectiveVector, ReceiverClass};
use crate::optimizer::{Individual, ParetoFront};

pub const DB_REFERENCE: &str = "dB re 1 (V/m)^2";

/// Six significant digits. Written values parse back to a number that
/// formats to the same string.
pub fn fmt_sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{v:.5e}").parse().expect("formatted float parses");
    let exp = rounded.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(io_err(path))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn vec3_row(name: &str, v: Vec3) -> String {
    format!("{name},{},{},{}\n", fmt_sig6(v.x), fmt_sig6(v.y), fmt_sig6(v.z))
}

fn grid_header(grid: &PowerGrid, quantity: &str) -> String {
    let mut s = format!("# {quantity}\n");
    s += &vec3_row("origin", grid.origin);
    s += &vec3_row("axis_u", grid.axis_u);
    s += &vec3_row("axis_v", grid.axis_v);
    s += &format!("extent,{},{}\n", fmt_sig6(grid.extent_u), fmt_sig6(grid.extent_v));
    s += &format!("resolution,{},{}\n", grid.resolution_u, grid.resolution_v);
    s += &format!("height,{}\n", fmt_sig6(grid.height));
    s
}

/// Grid file: header lines, then one comma-separated row of dB values per `v` index.
pub fn power_grid_to_string(grid: &PowerGrid) -> String {
    let mut s = grid_header(grid, "power grid");
    s += &format!("reference,{DB_REFERENCE}\n");
    s += &format!("floor,{}\n", fmt_sig6(POWER_FLOOR_DB));
    s += "values\n";
    for j in 0..grid.resolution_v {
        let row: Vec<String> = (0..grid.resolution_u).map(|i| fmt_sig6(grid.get(i, j))).collect();
        s += &row.join(",");
        s.push('\n');
    }
    s
}

/// Connectivity classes of every grid cell (2 covered, 1 connected, 0 blackout).
pub fn class_grid_to_string(grid: &PowerGrid, p_th_db: f64, p_bls_db: f64) -> String {
    let mut s = grid_header(grid, "connectivity classes: 2 covered, 1 connected, 0 blackout");
    s += &format!("thresholds,{},{}\n", fmt_sig6(p_th_db), fmt_sig6(p_bls_db));
    s += "values\n";
    for j in 0..grid.resolution_v {
        let row: Vec<String> = (0..grid.resolution_u)
            .map(|i| {
                let db = grid.get(i, j);
                let class = if db >= p_th_db {
                    ReceiverClass::Covered
                } else if db >= p_bls_db {
                    ReceiverClass::Connected
                } else {
                    ReceiverClass::Blackout
                };
                class.code().to_string()
            })
            .collect();
        s += &row.join(",");
        s.push('\n');
    }
    s
}

pub fn write_power_grid(path: &Path, grid: &PowerGrid) -> Result<()> {
    write_text(path, &power_grid_to_string(grid))
}

fn parse_nums(path: &Path, fields: &[&str], want: usize) -> Result<Vec<f64>> {
    if fields.len() != want {
        return Err(Error::Parse { path: path.to_path_buf(), message: format!("expected {want} values in {fields:?}") });
    }
    fields
        .iter()
        .map(|f| {
            f.trim().parse::<f64>().map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                message: format!("bad number {f:?}: {e}"),
            })
        })
        .collect()
}

pub fn parse_power_grid(path: &Path, text: &str) -> Result<PowerGrid> {
    let bad = |message: String| Error::Parse { path: path.to_path_buf(), message };
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let mut origin = None;
    let mut axis_u = None;
    let mut axis_v = None;
    let mut extent = None;
    let mut resolution = None;
    let mut height = None;
    for line in lines.by_ref() {
        if line.trim() == "values" {
            break;
        }
        let mut parts = line.split(',');
        let key = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        match key {
            "origin" | "axis_u" | "axis_v" => {
                let v = parse_nums(path, &rest, 3)?;
                let v = Some(Vec3::new(v[0], v[1], v[2]));
                match key {
                    "origin" => origin = v,
                    "axis_u" => axis_u = v,
                    _ => axis_v = v,
                }
            }
            "extent" => extent = Some(parse_nums(path, &rest, 2)?),
            "resolution" => resolution = Some(parse_nums(path, &rest, 2)?),
            "height" => height = Some(parse_nums(path, &rest, 1)?[0]),
            "reference" | "floor" | "thresholds" => {}
            other => return Err(bad(format!("unknown header key {other:?}"))),
        }
    }
    let missing = |k: &str| bad(format!("missing header `{k}`"));
    let extent = extent.ok_or_else(|| missing("extent"))?;
    let resolution = resolution.ok_or_else(|| missing("resolution"))?;
    let (nu, nv) = (resolution[0] as usize, resolution[1] as usize);
    let mut values = Vec::with_capacity(nu * nv);
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<&str> = line.split(',').collect();
        values.extend(parse_nums(path, &row, nu)?);
    }
    if values.len() != nu * nv {
        return Err(bad(format!("expected {} values, found {}", nu * nv, values.len())));
    }
    Ok(PowerGrid {
        origin: origin.ok_or_else(|| missing("origin"))?,
        axis_u: axis_u.ok_or_else(|| missing("axis_u"))?,
        axis_v: axis_v.ok_or_else(|| missing("axis_v"))?,
        extent_u: extent[0],
        extent_v: extent[1],
        resolution_u: nu,
        resolution_v: nv,
        height: height.ok_or_else(|| missing("height"))?,
        values,
    })
}

pub fn read_power_grid(path: &Path) -> Result<PowerGrid> {
    parse_power_grid(path, &read_text(path)?)
}

pub const FRONT_HEADER: &str = "index,phi1,phi2,M,bits";

/// Front table, one row per solution in front order (index starts at 1).
pub fn front_to_string(solutions: &[Individual]) -> String {
    let mut s = String::from(FRONT_HEADER);
    s.push('\n');
    for (o, ind) in solutions.iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            o + 1,
            fmt_sig6(ind.objectives.phi1),
            fmt_sig6(ind.objectives.phi2),
            ind.layout.count_ones(),
            ind.layout
        );
    }
    s
}

pub fn write_front(path: &Path, front: &ParetoFront) -> Result<()> {
    write_text(path, &front_to_string(&front.solutions))
}

/// A row read back from a front table.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontRow {
    pub index: usize,
    pub phi1: String,
    pub phi2: String,
    pub tiles: usize,
    pub layout: Layout,
}

pub fn read_front(path: &Path) -> Result<Vec<FrontRow>> {
    let text = read_text(path)?;
    let bad = |message: String| Error::Parse { path: path.to_path_buf(), message };
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if line != FRONT_HEADER {
                return Err(bad(format!("unexpected header {line:?}")));
            }
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(bad(format!("line {}: expected 5 fields", i + 1)));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|e| bad(format!("line {}: {e}", i + 1)));
        rows.push(FrontRow {
            index: int(f[0])?,
            phi1: f[1].to_string(),
            phi2: f[2].to_string(),
            tiles: int(f[3])?,
            layout: Layout::parse_bits(f[4], f[4].len())?,
        });
    }
    Ok(rows)
}

pub fn layout_file_contents(layout: &Layout, objectives: Option<ObjectiveVector>, label: &str) -> String {
    let mut s = format!("# {label}\n");
    if let Some(o) = objectives {
        s += &format!("phi1 = {}\nphi2 = {}\n", fmt_sig6(o.phi1), fmt_sig6(o.phi2));
    }
    s += &format!("M = {}\nN = {}\n", layout.count_ones(), layout.len());
    let idx: Vec<String> = layout.indices().iter().map(|i| i.to_string()).collect();
    s += &format!("tiles = {{{}}}\n", idx.join(", "));
    s += &format!("bits = {layout}\n");
    s
}

pub fn write_layout_file(path: &Path, layout: &Layout, objectives: Option<ObjectiveVector>, label: &str) -> Result<()> {
    write_text(path, &layout_file_contents(layout, objectives, label))
}

/// Text report: statistics, class counts and the receiver class grid.
pub fn coverage_report_to_string(report: &CoverageReport, label: &str) -> String {
    let mut s = format!("# coverage report: {label}\n");
    let _ = writeln!(s, "reference = {DB_REFERENCE}");
    let _ = writeln!(s, "min_db = {}", fmt_sig6(report.min_db));
    let _ = writeln!(s, "max_db = {}", fmt_sig6(report.max_db));
    let _ = writeln!(s, "avg_db = {}", fmt_sig6(report.avg_db));
    let _ = writeln!(s, "phi1 = {}", fmt_sig6(report.phi1));
    let _ = writeln!(s, "phi2 = {}", fmt_sig6(report.phi2));
    let _ = writeln!(s, "M = {}", report.tiles);
    let _ = writeln!(s, "receivers = {}", report.classes.len());
    let _ = writeln!(s, "covered = {}", report.count(ReceiverClass::Covered));
    let _ = writeln!(s, "connected = {}", report.count(ReceiverClass::Connected));
    let _ = writeln!(s, "blackout = {}", report.count(ReceiverClass::Blackout));
    let (nl, ns) = report.grid;
    let _ = writeln!(s, "# class grid ({nl} along the street x {ns} across): 2 covered, 1 connected, 0 blackout");
    if nl * ns == report.classes.len() {
        for row in report.classes.chunks(nl.max(1)) {
            let line: Vec<String> = row.iter().map(|c| c.code().to_string()).collect();
            s += &line.join(",");
            s.push('\n');
        }
    }
    s
}

pub fn write_coverage_report(path: &Path, report: &CoverageReport, label: &str) -> Result<()> {
    write_text(path, &coverage_report_to_string(report, label))
}

/// Writes one front table per snapshot as `front_iter<i>.csv`; returns the paths.
pub fn write_snapshots(dir: &Path, snapshots: &[crate::optimizer::Snapshot]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut out = Vec::new();
    for snap in snapshots {
        let front: Vec<Individual> = snap.population.iter().filter(|i| i.rank == 0).cloned().collect();
        let front = crate::optimizer::extract_pareto(&front)?;
        let path = dir.join(format!("front_iter{}.csv", snap.iteration));
        write_front(&path, &front)?;
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formatting() {
        assert_eq!(fmt_sig6(-69.91234), "-69.9123");
        assert_eq!(fmt_sig6(0.2), "0.2");
        assert_eq!(fmt_sig6(1.0), "1");
        assert_eq!(fmt_sig6(0.0), "0");
        assert_eq!(fmt_sig6(-400.0), "-400");
        assert_eq!(fmt_sig6(1234567.0), "1234570");
        assert_eq!(fmt_sig6(1.234567e-9), "1.23457e-9");
        assert_eq!(fmt_sig6(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn sig6_round_trip_is_stable() {
        for v in [-69.91234, 3.3e-7, 12345.678, 0.000123456789, 7.0e20] {
            let s = fmt_sig6(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(fmt_sig6(back), s);
        }
    }

    fn grid() -> PowerGrid {
        PowerGrid {
            origin: Vec3::new(1.0, -2.0, 1.5),
            axis_u: Vec3::new(0.6, 0.8, 0.0),
            axis_v: Vec3::new(-0.8, 0.6, 0.0),
            extent_u: 3.0,
            extent_v: 2.0,
            resolution_u: 3,
            resolution_v: 2,
            height: 1.5,
            values: vec![-70.123456, -400.0, -65.5, -80.0, -90.25, -100.0],
        }
    }

    #[test]
    fn power_grid_round_trip() {
        let g = grid();
        let text = power_grid_to_string(&g);
        let back = parse_power_grid(Path::new("g.csv"), &text).unwrap();
        assert_eq!(back.resolution_u, 3);
        assert_eq!(back.values[0], -70.1235);
        assert_eq!(power_grid_to_string(&back), text);
        assert!(text.lines().any(|l| l == "-70.1235,-400,-65.5"));
    }

    #[test]
    fn class_grid_codes() {
        let text = class_grid_to_string(&grid(), -70.0, -90.0);
        let tail: Vec<&str> = text.lines().rev().take(2).collect();
        assert_eq!(tail, vec!["1,0,0", "1,0,2"]);
    }

    #[test]
    fn layout_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("layout_1.txt");
        let l = Layout::from_indices(&[3, 4, 12], 12).unwrap();
        write_layout_file(&path, &l, Some(ObjectiveVector::new(0.0, 0.25)), "solution 1").unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("tiles = {3, 4, 12}"));
        assert!(text.contains("phi2 = 0.25"));
        assert_eq!(Layout::read_file(&path, 12).unwrap(), l);
    }

    #[test]
    fn front_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pareto.csv");
        let a = Individual::new(Layout::parse_bits("0000", 4).unwrap(), ObjectiveVector::new(1.0, 0.0));
        let b = Individual::new(Layout::parse_bits("0110", 4).unwrap(), ObjectiveVector::new(0.0, 0.5));
        let front = ParetoFront { solutions: vec![a, b.clone()] };
        write_front(&path, &front).unwrap();
        let rows = read_front(&path).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].layout, b.layout);
        assert_eq!((rows[1].index, rows[1].tiles, rows[1].phi2.as_str()), (2, 2, "0.5"));
    }
}
