//! Dispersion of repeated optimizations over several seeds.

use super::ParetoFront;

/// Outcome of one seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedOutcome {
    pub seed: u64,
    /// Fewest tiles among full-coverage members of the front, if any.
    pub full_coverage_tiles: Option<usize>,
    pub front_size: usize,
    pub min_phi1: f64,
}

impl SeedOutcome {
    pub fn from_front(seed: u64, front: &ParetoFront) -> Self {
        Self {
            seed,
            full_coverage_tiles: front.min_full_coverage_tiles(),
            front_size: front.len(),
            min_phi1: front.min_phi1(),
        }
    }
}

/// Minimum, median and maximum of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spread {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Spread {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
        Some(Self { min: v[0], median, max: v[n - 1] })
    }

    /// `(max - min) / median`, zero for a degenerate sample.
    pub fn relative(&self) -> f64 {
        if self.median == 0.0 {
            0.0
        } else {
            (self.max - self.min) / self.median
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub outcomes: Vec<SeedOutcome>,
    /// Spread of the minimal full-coverage tile count over seeds that reached full coverage.
    pub full_coverage_tiles: Option<Spread>,
    pub front_size: Spread,
}

impl BatchSummary {
    pub fn new(outcomes: Vec<SeedOutcome>) -> Option<Self> {
        let m: Vec<f64> = outcomes.iter().filter_map(|o| o.full_coverage_tiles).map(|m| m as f64).collect();
        let o: Vec<f64> = outcomes.iter().map(|o| o.front_size as f64).collect();
        Some(Self { full_coverage_tiles: Spread::of(&m), front_size: Spread::of(&o)?, outcomes })
    }

    pub fn runs(&self) -> usize {
        self.outcomes.len()
    }

    pub fn full_coverage_runs(&self) -> usize {
        self.outcomes.iter().filter(|o| o.full_coverage_tiles.is_some()).count()
    }
}
