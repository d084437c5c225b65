//! Binary NSGA-II over tile layouts.
//!
//! Every generation draws from its own ChaCha stream of the master seed,
//! so results do not depend on how child evaluation is scheduled.

pub mod batch;
pub mod operators;
pub mod pareto;
pub mod sorting;

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::layout::Layout;
use crate::objectives::{Evaluator, ObjectiveVector};
use crate::scene::Scenario;

pub use operators::CrossoverKind;
pub use pareto::{extract_pareto, hypervolume, ParetoFront};
pub use sorting::{crowding_distance, dominates, fast_nondominated_sort};

/// Anything that scores a binary layout on the two design objectives.
pub trait LayoutProblem: Sync {
    fn tile_count(&self) -> usize;
    fn mask(&self) -> &[bool];
    fn objectives(&self, layout: &Layout) -> ObjectiveVector;
}

impl LayoutProblem for Evaluator {
    fn tile_count(&self) -> usize {
        Evaluator::tile_count(self)
    }

    fn mask(&self) -> &[bool] {
        Evaluator::mask(self)
    }

    fn objectives(&self, layout: &Layout) -> ObjectiveVector {
        self.objectives_unchecked(layout)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub max_iterations: usize,
    pub crossover_rate: f64,
    /// Per-bit flip probability.
    pub mutation_rate: f64,
    /// Carried for completeness; binary operators have no distribution index.
    pub dist_index_crossover: f64,
    /// Carried for completeness; binary operators have no distribution index.
    pub dist_index_mutation: f64,
    pub rng_seed: u64,
    pub crossover: CrossoverKind,
    /// Record a population snapshot every this many iterations (0 disables periodic snapshots).
    pub snapshot_every: usize,
    /// Extra iterations to snapshot.
    pub snapshot_at: Vec<usize>,
}

impl GaConfig {
    /// `P = 2N`, `I = 1000`, crossover rate 1, mutation rate `1/N`.
    pub fn for_tiles(n: usize) -> Self {
        let p = (2 * n).max(4);
        Self {
            population_size: p + p % 2,
            max_iterations: 1000,
            crossover_rate: 1.0,
            mutation_rate: 1.0 / n.max(1) as f64,
            dist_index_crossover: 15.0,
            dist_index_mutation: 20.0,
            rng_seed: 0,
            crossover: CrossoverKind::Uniform,
            snapshot_every: 0,
            snapshot_at: vec![100, 500],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 || self.population_size % 2 != 0 {
            return Err(Error::GaConfig(format!(
                "population size {} must be even and at least 4",
                self.population_size
            )));
        }
        for (name, r) in [("crossover", self.crossover_rate), ("mutation", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::GaConfig(format!("{name} rate {r} is outside [0, 1]")));
            }
        }
        Ok(())
    }

    fn wants_snapshot(&self, iteration: usize) -> bool {
        iteration == 0
            || iteration == self.max_iterations
            || (self.snapshot_every > 0 && iteration % self.snapshot_every == 0)
            || self.snapshot_at.contains(&iteration)
    }
}

/// An evaluated layout with its NSGA-II bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub layout: Layout,
    pub objectives: ObjectiveVector,
    /// Front index, 0 for the non-dominated front.
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    pub fn new(layout: Layout, objectives: ObjectiveVector) -> Self {
        Self { layout, objectives, rank: 0, crowding: 0.0 }
    }
}

/// Population state at one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub iteration: usize,
    pub population: Vec<Individual>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct History {
    pub snapshots: Vec<Snapshot>,
    /// Hypervolume of the first front after each iteration, starting with the initial population.
    pub hypervolume: Vec<f64>,
    pub reference: Option<ObjectiveVector>,
    /// Objective evaluations actually computed (cache misses).
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct EvolveResult {
    pub population: Vec<Individual>,
    pub front: ParetoFront,
    pub history: History,
}

const CACHE_LIMIT: usize = 200_000;

struct FitnessCache {
    map: HashMap<Layout, ObjectiveVector>,
    misses: usize,
}

impl FitnessCache {
    fn new() -> Self {
        Self { map: HashMap::new(), misses: 0 }
    }

    /// Evaluates a batch; values do not depend on cache state or scheduling.
    fn evaluate<P: LayoutProblem>(&mut self, problem: &P, layouts: &[Layout]) -> Vec<ObjectiveVector> {
        let mut todo: Vec<&Layout> = Vec::new();
        let mut seen: HashSet<&Layout> = HashSet::new();
        for l in layouts {
            if !self.map.contains_key(l) && seen.insert(l) {
                todo.push(l);
            }
        }
        let fresh: Vec<ObjectiveVector> = todo.par_iter().map(|l| problem.objectives(l)).collect();
        self.misses += fresh.len();
        let fresh: HashMap<&Layout, ObjectiveVector> = todo.into_iter().zip(fresh).collect();
        let out: Vec<ObjectiveVector> =
            layouts.iter().map(|l| fresh.get(l).copied().unwrap_or_else(|| self.map[l])).collect();
        if self.map.len() + fresh.len() > CACHE_LIMIT {
            self.map.clear();
        }
        for (l, v) in fresh {
            self.map.insert(l.clone(), v);
        }
        out
    }
}

/// Assigns rank and crowding to every individual; returns the fronts.
fn assign_rank_and_crowding(pop: &mut [Individual]) -> Vec<Vec<usize>> {
    let objs: Vec<ObjectiveVector> = pop.iter().map(|i| i.objectives).collect();
    let fronts = fast_nondominated_sort(&objs);
    for (rank, front) in fronts.iter().enumerate() {
        let cd = crowding_distance(&objs, front);
        for (&i, d) in front.iter().zip(cd) {
            pop[i].rank = rank;
            pop[i].crowding = d;
        }
    }
    fronts
}

/// Crowded-comparison: lower rank wins, then larger crowding distance.
fn crowded_cmp(a: &Individual, b: &Individual) -> Ordering {
    a.rank
        .cmp(&b.rank)
        .then_with(|| b.crowding.partial_cmp(&a.crowding).unwrap_or(Ordering::Equal))
}

/// Binary tournament between two distinct random members; ties go to the lower index.
fn tournament<'a, R: Rng>(pop: &'a [Individual], rng: &mut R) -> &'a Individual {
    let i = rng.gen_range(0..pop.len());
    let mut j = rng.gen_range(0..pop.len() - 1);
    if j >= i {
        j += 1;
    }
    let (first, second) = if i < j { (i, j) } else { (j, i) };
    match crowded_cmp(&pop[second], &pop[first]) {
        Ordering::Less => &pop[second],
        _ => &pop[first],
    }
}

/// Elitist truncation of `combined` down to `size` members.
fn environmental_selection(mut combined: Vec<Individual>, size: usize) -> Vec<Individual> {
    let fronts = assign_rank_and_crowding(&mut combined);
    let mut chosen: Vec<usize> = Vec::with_capacity(size);
    for front in fronts {
        if chosen.len() + front.len() <= size {
            chosen.extend(front);
            if chosen.len() == size {
                break;
            }
        } else {
            let mut last = front;
            last.sort_by(|&a, &b| {
                combined[b]
                    .crowding
                    .partial_cmp(&combined[a].crowding)
                    .unwrap_or(Ordering::Equal)
                    .then(a.cmp(&b))
            });
            chosen.extend(last.into_iter().take(size - chosen.len()));
            break;
        }
    }
    let mut slots: Vec<Option<Individual>> = combined.into_iter().map(Some).collect();
    chosen.into_iter().map(|i| slots[i].take().expect("index chosen once")).collect()
}

fn generation_rng(seed: u64, iteration: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration as u64);
    rng
}

/// Random initial population, evaluated.
pub fn initialize<P: LayoutProblem>(config: &GaConfig, problem: &P) -> Result<Vec<Individual>> {
    config.validate()?;
    let mut rng = generation_rng(config.rng_seed, 0);
    let layouts: Vec<Layout> = (0..config.population_size)
        .map(|_| operators::random_layout(problem.mask(), &mut rng))
        .collect();
    let objs: Vec<ObjectiveVector> = layouts.par_iter().map(|l| problem.objectives(l)).collect();
    let mut pop: Vec<Individual> = layouts.into_iter().zip(objs).map(|(l, o)| Individual::new(l, o)).collect();
    assign_rank_and_crowding(&mut pop);
    Ok(pop)
}

fn first_front_hypervolume(pop: &[Individual], reference: ObjectiveVector) -> f64 {
    let f1: Vec<ObjectiveVector> = pop.iter().filter(|i| i.rank == 0).map(|i| i.objectives).collect();
    hypervolume(&f1, reference)
}

/// Runs the full optimization loop on an arbitrary layout problem.
pub fn evolve_problem<P: LayoutProblem>(config: &GaConfig, problem: &P) -> Result<EvolveResult> {
    config.validate()?;
    let mask = problem.mask().to_vec();
    let mut cache = FitnessCache::new();
    let mut population = initialize(config, problem)?;
    cache.misses += population.len();
    for ind in &population {
        cache.map.insert(ind.layout.clone(), ind.objectives);
    }

    let max_phi1 = population.iter().map(|i| i.objectives.phi1).fold(0.0, f64::max);
    let reference = ObjectiveVector::new(max_phi1 + 1e-3, 1.0 + 1e-3);
    let mut history = History { reference: Some(reference), ..History::default() };
    history.hypervolume.push(first_front_hypervolume(&population, reference));
    if config.wants_snapshot(0) {
        history.snapshots.push(Snapshot { iteration: 0, population: population.clone() });
    }

    for iteration in 1..=config.max_iterations {
        let mut rng = generation_rng(config.rng_seed, iteration);
        let mut children: Vec<Layout> = Vec::with_capacity(config.population_size);
        while children.len() < config.population_size {
            let a = &tournament(&population, &mut rng).layout;
            let b = &tournament(&population, &mut rng).layout;
            let (mut c1, mut c2) = if rng.gen::<f64>() < config.crossover_rate {
                operators::crossover(config.crossover, a, b, &mut rng)
            } else {
                (a.clone(), b.clone())
            };
            operators::mutate(&mut c1, &mask, config.mutation_rate, &mut rng);
            operators::mutate(&mut c2, &mask, config.mutation_rate, &mut rng);
            children.push(c1);
            children.push(c2);
        }
        let objs = cache.evaluate(problem, &children);

        let mut combined = population;
        combined.extend(children.into_iter().zip(objs).map(|(l, o)| Individual::new(l, o)));
        population = environmental_selection(combined, config.population_size);

        history.hypervolume.push(first_front_hypervolume(&population, reference));
        if config.wants_snapshot(iteration) {
            history.snapshots.push(Snapshot { iteration, population: population.clone() });
        }
    }
    history.evaluations = cache.misses;

    let front = extract_pareto(&population)?;
    Ok(EvolveResult { population, front, history })
}

/// Optimizes tile layouts for a scenario.
pub fn evolve(config: &GaConfig, scenario: &Scenario, field: &FieldConfig) -> Result<EvolveResult> {
    let evaluator = Evaluator::new(scenario, field);
    evolve_problem(config, &evaluator)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Toy problem: phi1 is the fraction of "target" bits missing.
    struct Toy {
        mask: Vec<bool>,
        target: Vec<bool>,
    }

    impl LayoutProblem for Toy {
        fn tile_count(&self) -> usize {
            self.mask.len()
        }
        fn mask(&self) -> &[bool] {
            &self.mask
        }
        fn objectives(&self, l: &Layout) -> ObjectiveVector {
            let hit = self.target.iter().enumerate().filter(|(i, &t)| t && l.get(*i)).count();
            let want = self.target.iter().filter(|&&t| t).count();
            ObjectiveVector::new(1.0 - hit as f64 / want as f64, crate::objectives::phi2(l))
        }
    }

    fn toy() -> Toy {
        let mask = vec![true, true, false, true, true, true, false, true];
        let target = vec![true, false, false, true, false, true, false, false];
        Toy { mask, target }
    }

    #[test]
    fn config_validation() {
        let mut c = GaConfig::for_tiles(60);
        assert_eq!(c.population_size, 120);
        assert!(c.validate().is_ok());
        c.population_size = 7;
        assert!(c.validate().is_err());
        c.population_size = 2;
        assert!(c.validate().is_err());
        c.population_size = 8;
        c.mutation_rate = 1.5;
        assert!(c.validate().is_err());
    }

    #[test]
    fn initialization_is_seeded_and_masked() {
        let p = toy();
        let mut c = GaConfig::for_tiles(8);
        c.rng_seed = 11;
        let a = initialize(&c, &p).unwrap();
        let b = initialize(&c, &p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 16);
        assert!(a.iter().all(|i| i.layout.validate(&p.mask).is_ok()));
    }

    #[test]
    fn toy_front_is_exact() {
        let p = toy();
        let mut c = GaConfig::for_tiles(8);
        c.max_iterations = 60;
        let r = evolve_problem(&c, &p).unwrap();
        // one point per number of target bits hit
        let phi2: Vec<f64> = r.front.solutions.iter().map(|s| s.objectives.phi2).collect();
        assert_eq!(phi2, vec![0.0, 0.125, 0.25, 0.375]);
        assert_eq!(r.front.min_full_coverage_tiles(), Some(3));
        assert_eq!(r.population.len(), 16);
    }

    #[test]
    fn selection_only_closure() {
        let p = toy();
        let mut c = GaConfig::for_tiles(8);
        c.crossover_rate = 0.0;
        c.mutation_rate = 0.0;
        c.max_iterations = 20;
        c.snapshot_every = 1;
        let r = evolve_problem(&c, &p).unwrap();
        let initial: Vec<Layout> = r.history.snapshots[0].population.iter().map(|i| i.layout.clone()).collect();
        for snap in &r.history.snapshots {
            assert_eq!(snap.population.len(), 16);
            assert!(snap.population.iter().all(|i| initial.contains(&i.layout)));
        }
    }

    #[test]
    fn zero_iterations_returns_initial_front() {
        let p = toy();
        let mut c = GaConfig::for_tiles(8);
        c.max_iterations = 0;
        let r = evolve_problem(&c, &p).unwrap();
        let init = initialize(&c, &p).unwrap();
        assert_eq!(r.population, init);
        assert_eq!(r.front, extract_pareto(&init).unwrap());
        assert_eq!(r.history.snapshots.len(), 1);
    }

    #[test]
    fn tournament_prefers_rank_then_crowding() {
        let mk = |rank, crowding| Individual {
            layout: Layout::zeros(1),
            objectives: ObjectiveVector::new(0.0, 0.0),
            rank,
            crowding,
        };
        let a = mk(0, 1.0);
        let b = mk(1, f64::INFINITY);
        assert_eq!(crowded_cmp(&a, &b), Ordering::Less);
        let c = mk(0, 2.0);
        assert_eq!(crowded_cmp(&c, &a), Ordering::Less);
    }
}
