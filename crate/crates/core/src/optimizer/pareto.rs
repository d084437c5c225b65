//! Final trade-off set and two-objective hypervolume.

use crate::error::{Error, Result};
use crate::objectives::ObjectiveVector;
use crate::optimizer::sorting::dominates;
use crate::optimizer::Individual;

/// Mutually non-dominated solutions sorted by ascending `phi2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoFront {
    pub solutions: Vec<Individual>,
}

impl ParetoFront {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.solutions.iter().map(|s| s.objectives).collect()
    }

    /// Fewest tiles among members with zero coverage cost.
    pub fn min_full_coverage_tiles(&self) -> Option<usize> {
        self.solutions
            .iter()
            .filter(|s| s.objectives.phi1 == 0.0)
            .map(|s| s.layout.count_ones())
            .min()
    }

    pub fn min_phi1(&self) -> f64 {
        self.solutions.iter().map(|s| s.objectives.phi1).fold(f64::INFINITY, f64::min)
    }
}

/// Non-dominated members of `population`, deduplicated by objective vector
/// (first occurrence kept) and ordered by `phi2`.
pub fn extract_pareto(population: &[Individual]) -> Result<ParetoFront> {
    if population.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let mut solutions: Vec<Individual> = Vec::new();
    for (i, cand) in population.iter().enumerate() {
        let dominated = population.iter().any(|o| dominates(&o.objectives, &cand.objectives));
        let duplicate = population[..i].iter().any(|o| o.objectives == cand.objectives);
        if !dominated && !duplicate {
            solutions.push(cand.clone());
        }
    }
    solutions.sort_by(|a, b| {
        a.objectives
            .phi2
            .total_cmp(&b.objectives.phi2)
            .then(a.objectives.phi1.total_cmp(&b.objectives.phi1))
    });
    Ok(ParetoFront { solutions })
}

/// Area dominated by `points` and bounded by `reference` (both objectives minimized).
pub fn hypervolume(points: &[ObjectiveVector], reference: ObjectiveVector) -> f64 {
    let mut pts: Vec<ObjectiveVector> = points
        .iter()
        .copied()
        .filter(|p| p.phi1 < reference.phi1 && p.phi2 < reference.phi2)
        .collect();
    pts.sort_by(|a, b| a.phi2.total_cmp(&b.phi2).then(a.phi1.total_cmp(&b.phi1)));
    let mut area = 0.0;
    let mut best_phi1 = reference.phi1;
    for (k, p) in pts.iter().enumerate() {
        if p.phi1 < best_phi1 {
            best_phi1 = p.phi1;
        }
        let next_phi2 = pts.get(k + 1).map_or(reference.phi2, |q| q.phi2);
        area += (next_phi2 - p.phi2) * (reference.phi1 - best_phi1);
    }
    area
}
