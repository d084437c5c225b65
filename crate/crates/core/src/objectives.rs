//! Coverage and complexity costs, receiver classification and the
//! statistics of the reflected power over the area of interest.

use rayon::prelude::*;

use crate::error::Result;
use crate::field::{self, linear_to_db, FieldConfig};
use crate::geometry::Vec3;
use crate::layout::Layout;
use crate::scene::Scenario;

/// Step function with `H(0) = 0`.
pub fn heaviside(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// `(phi1, phi2)` for one layout; both are minimized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveVector {
    pub phi1: f64,
    pub phi2: f64,
}

impl ObjectiveVector {
    pub fn new(phi1: f64, phi2: f64) -> Self {
        Self { phi1, phi2 }
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.phi1, self.phi2]
    }
}

/// Fraction of installed tiles, `M / N`.
pub fn phi2(layout: &Layout) -> f64 {
    if layout.is_empty() {
        return 0.0;
    }
    layout.count_ones() as f64 / layout.len() as f64
}

/// Mean normalized shortfall below the coverage threshold, from linear receiver powers.
pub fn phi1_from_powers(powers: &[f64], threshold_linear: f64) -> f64 {
    if powers.is_empty() {
        return 0.0;
    }
    let terms: Vec<f64> = powers
        .iter()
        .map(|&p| (p - threshold_linear).abs() / threshold_linear * heaviside(threshold_linear - p))
        .collect();
    pairwise_sum(&terms) / powers.len() as f64
}

/// Pairwise summation with a fixed split, so the result depends only on the input order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if values.len() <= BLOCK {
        return values.iter().fold(0.0, |a, &b| a + b);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Coverage cost evaluated directly from the field model at each receiver.
pub fn phi1(layout: &Layout, receivers: &[Vec3], scenario: &Scenario, cfg: &FieldConfig) -> Result<f64> {
    layout.validate(&scenario.facade.admissible_mask)?;
    let powers = receivers
        .iter()
        .map(|&r| field::received_power(layout, r, scenario, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(phi1_from_powers(&powers, scenario.power_threshold_linear()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReceiverClass {
    /// At or above the coverage threshold.
    Covered,
    /// Below coverage but at or above the blackout threshold.
    Connected,
    Blackout,
}

impl ReceiverClass {
    pub fn classify(power_linear: f64, threshold_linear: f64, blackout_linear: f64) -> Self {
        if power_linear >= threshold_linear {
            ReceiverClass::Covered
        } else if power_linear >= blackout_linear {
            ReceiverClass::Connected
        } else {
            ReceiverClass::Blackout
        }
    }

    pub fn code(self) -> u8 {
        match self {
            ReceiverClass::Covered => 2,
            ReceiverClass::Connected => 1,
            ReceiverClass::Blackout => 0,
        }
    }
}

/// Statistics of the reflected power over a set of receivers.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub min_db: f64,
    pub max_db: f64,
    /// Mean of the linear powers, converted to dB.
    pub avg_db: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub tiles: usize,
    pub powers_db: Vec<f64>,
    pub classes: Vec<ReceiverClass>,
    /// Receiver lattice `(n_long, n_short)`; `classes` is long-index fastest.
    pub grid: (usize, usize),
}

impl CoverageReport {
    pub fn from_powers(layout: &Layout, powers: &[f64], scenario: &Scenario, grid: (usize, usize)) -> Self {
        let th = scenario.power_threshold_linear();
        let bl = scenario.blackout_threshold_linear();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &p in powers {
            lo = lo.min(p);
            hi = hi.max(p);
        }
        let mean = if powers.is_empty() { 0.0 } else { pairwise_sum(powers) / powers.len() as f64 };
        Self {
            min_db: linear_to_db(lo),
            max_db: linear_to_db(hi),
            avg_db: linear_to_db(mean),
            phi1: phi1_from_powers(powers, th),
            phi2: phi2(layout),
            tiles: layout.count_ones(),
            powers_db: powers.iter().map(|&p| linear_to_db(p)).collect(),
            classes: powers.iter().map(|&p| ReceiverClass::classify(p, th, bl)).collect(),
            grid,
        }
    }

    pub fn count(&self, class: ReceiverClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    pub fn all_covered(&self) -> bool {
        self.classes.iter().all(|&c| c == ReceiverClass::Covered)
    }
}

/// Coverage statistics evaluated directly from the field model.
pub fn coverage_report(
    layout: &Layout,
    receivers: &[Vec3],
    scenario: &Scenario,
    cfg: &FieldConfig,
) -> Result<CoverageReport> {
    layout.validate(&scenario.facade.admissible_mask)?;
    let powers = receivers
        .iter()
        .map(|&r| field::received_power(layout, r, scenario, cfg))
        .collect::<Result<Vec<_>>>()?;
    let grid = if receivers.len() == scenario.receiver_count() {
        scenario.aoi.receiver_grid()
    } else {
        (receivers.len(), 1)
    };
    Ok(CoverageReport::from_powers(layout, &powers, scenario, grid))
}

/// Fast evaluator: caches `|E|^2` of every tile at every receiver of the scenario.
///
/// Results are bit-identical to the direct route because the per-receiver
/// sum visits installed tiles in the same ascending order.
#[derive(Debug, Clone)]
pub struct Evaluator {
    tiles: usize,
    receivers: usize,
    /// Row `n` holds tile `n`'s power at every receiver.
    table: Vec<f64>,
    threshold_linear: f64,
    mask: Vec<bool>,
}

impl Evaluator {
    pub fn new(scenario: &Scenario, cfg: &FieldConfig) -> Self {
        let u = scenario.receiver_count();
        let table: Vec<f64> = scenario
            .tiles
            .par_iter()
            .flat_map_iter(|tile| {
                scenario
                    .receivers
                    .iter()
                    .map(move |&r| field::tile_power(tile, r, cfg, &scenario.base_station))
            })
            .collect();
        debug_assert_eq!(table.len(), u * scenario.tile_count());
        Self {
            tiles: scenario.tile_count(),
            receivers: u,
            table,
            threshold_linear: scenario.power_threshold_linear(),
            mask: scenario.facade.admissible_mask.clone(),
        }
    }

    pub fn tile_count(&self) -> usize {
        self.tiles
    }

    pub fn receiver_count(&self) -> usize {
        self.receivers
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Power of tile `n` (0-based) at every receiver.
    pub fn tile_row(&self, n: usize) -> &[f64] {
        &self.table[n * self.receivers..(n + 1) * self.receivers]
    }

    /// Linear received power at each receiver. The layout must have the right length.
    pub fn receiver_powers(&self, layout: &Layout) -> Vec<f64> {
        let mut acc = vec![0.0; self.receivers];
        for n in layout.installed() {
            for (a, &p) in acc.iter_mut().zip(self.tile_row(n)) {
                *a += p;
            }
        }
        acc
    }

    /// Objectives without mask validation; used inside the optimizer.
    pub fn objectives_unchecked(&self, layout: &Layout) -> ObjectiveVector {
        let powers = self.receiver_powers(layout);
        ObjectiveVector::new(phi1_from_powers(&powers, self.threshold_linear), phi2(layout))
    }

    pub fn evaluate(&self, layout: &Layout) -> Result<ObjectiveVector> {
        layout.validate(&self.mask)?;
        Ok(self.objectives_unchecked(layout))
    }

    pub fn coverage_report(&self, layout: &Layout, scenario: &Scenario) -> Result<CoverageReport> {
        layout.validate(&self.mask)?;
        let powers = self.receiver_powers(layout);
        Ok(CoverageReport::from_powers(layout, &powers, scenario, scenario.aoi.receiver_grid()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heaviside_gate() {
        assert_eq!(heaviside(0.5), 1.0);
        assert_eq!(heaviside(0.0), 0.0);
        assert_eq!(heaviside(-1.0), 0.0);
    }

    #[test]
    fn phi1_edge_values() {
        let th = 1e-7;
        assert_eq!(phi1_from_powers(&[th; 10], th), 0.0);
        assert_eq!(phi1_from_powers(&[0.0; 10], th), 1.0);
        let half = phi1_from_powers(&[th / 2.0, th * 3.0], th);
        assert!((half - 0.25).abs() < 1e-15);
    }

    #[test]
    fn phi2_values() {
        assert_eq!(phi2(&Layout::parse_indices("1,2,3,4,5,6,7,8,9,10,11,12", 60).unwrap()), 0.2);
        assert_eq!(phi2(&Layout::zeros(60)), 0.0);
        assert_eq!(phi2(&Layout::full(&[true; 60])), 1.0);
    }

    #[test]
    fn pairwise_sum_matches_naive_for_small_exact_values() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 499_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn classification() {
        let (th, bl) = (1e-7, 1e-10);
        assert_eq!(ReceiverClass::classify(1e-7, th, bl), ReceiverClass::Covered);
        assert_eq!(ReceiverClass::classify(5e-8, th, bl), ReceiverClass::Connected);
        assert_eq!(ReceiverClass::classify(1e-10, th, bl), ReceiverClass::Connected);
        assert_eq!(ReceiverClass::classify(0.0, th, bl), ReceiverClass::Blackout);
    }
}
