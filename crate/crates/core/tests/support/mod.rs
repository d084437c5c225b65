#![allow(dead_code)]

use std::path::PathBuf;

use emskin::field::{received_power, tile_power, FieldConfig};
use emskin::optimizer::{
    dominates, evolve_problem, extract_pareto, fast_nondominated_sort, GaConfig, Individual, LayoutProblem,
};
use emskin::{build_scenario, coverage_report, load_scenario, Evaluator, Layout, ObjectiveVector, Scenario, ScenarioConfig, Vec3};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const REFERENCE_LAYOUT: [usize; 12] = [3, 4, 5, 6, 8, 12, 30, 32, 43, 44, 45, 46];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn load_fixture(name: &str) -> (Scenario, FieldConfig) {
    load_scenario(fixture(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// 4 x 4 facade and a 10 x 5 m street area: 16 tiles, 50 receivers.
pub const REDUCED_TOML: &str = r#"
frequency_hz = 27e9
bs_position = [100.0, 0.0, 10.0]
e_field_amplitude = 1.0

[facade]
first_barycenter_yz = [-0.75, 7.25]
tile_side_m = 0.5
ny = 4
nz = 4

[aoi]
center_xyz = [80.35, 95.75, 1.5]
length_m = 10.0
width_m = 5.0
azimuth_deg = 50.0
partition = [4, 4]
receiver_height_m = 1.5
receiver_density_per_m2 = 1.0

[thresholds]
p_th_db = -70.0
p_bls_db = -100.0

[field]
sinc_arg_scale = 0.5
eta_norm_ohm = 1883.65
"#;

pub fn reduced_config() -> ScenarioConfig {
    ScenarioConfig::from_toml_str(REDUCED_TOML).unwrap()
}

pub fn reduced_scenario() -> (Scenario, FieldConfig) {
    reduced_scenario_at(-70.0)
}

/// The reduced instance with another coverage threshold; higher thresholds
/// give longer, harder fronts.
pub fn reduced_scenario_at(p_th_db: f64) -> (Scenario, FieldConfig) {
    let mut cfg = reduced_config();
    cfg.thresholds.p_th_db = p_th_db;
    (build_scenario(&cfg).unwrap(), cfg.field_config().unwrap())
}

/// Exhaustive Pareto set of a scenario with at most ~20 tiles, as
/// `(phi1, M)` pairs sorted by `M`. Written independently of the library's
/// objective code: plain sums over a per-tile power table.
pub fn brute_force_front(scenario: &Scenario, cfg: &FieldConfig) -> Vec<(f64, usize)> {
    let n = scenario.tile_count();
    assert!(n <= 20);
    let bs = &scenario.base_station;
    let table: Vec<Vec<f64>> = scenario
        .tiles
        .iter()
        .map(|t| scenario.receivers.iter().map(|&r| tile_power(t, r, cfg, bs)).collect())
        .collect();
    let th = 10f64.powf(scenario.power_threshold_db / 10.0);
    let u = scenario.receiver_count() as f64;
    let mask = &scenario.facade.admissible_mask;

    // best phi1 for every tile count
    let mut best = vec![f64::INFINITY; n + 1];
    for bits in 0u32..(1 << n) {
        if (0..n).any(|i| bits >> i & 1 == 1 && !mask[i]) {
            continue;
        }
        let m = bits.count_ones() as usize;
        let mut shortfall = 0.0;
        for r in 0..scenario.receiver_count() {
            let mut p = 0.0;
            for i in 0..n {
                if bits >> i & 1 == 1 {
                    p += table[i][r];
                }
            }
            if p < th {
                shortfall += (th - p) / th;
            }
        }
        best[m] = best[m].min(shortfall / u);
    }
    let mut front = Vec::new();
    let mut floor = f64::INFINITY;
    for (m, &b) in best.iter().enumerate() {
        if b < floor {
            front.push((b, m));
            floor = b;
        }
    }
    front
}

/// Front of the GA as `(phi1, M)` pairs.
pub fn ga_front(front: &emskin::ParetoFront) -> Vec<(f64, usize)> {
    front.solutions.iter().map(|s| (s.objectives.phi1, s.layout.count_ones())).collect()
}

pub fn same_front(a: &[(f64, usize)], b: &[(f64, usize)]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| x.1 == y.1 && (x.0 - y.0).abs() <= 1e-12 * (1.0 + y.0.abs()))
}

// ---- property checks shared by the proptest suite and the acceptance runner ----

pub fn layout_from(bits: &[bool], mask: &[bool]) -> Layout {
    Layout::from_bits(bits.iter().zip(mask).map(|(&b, &m)| b && m).collect())
}

/// Adding tiles never lowers the received power anywhere, nor raises phi1.
pub fn check_monotone(
    scenario: &Scenario,
    cfg: &FieldConfig,
    base: &[bool],
    extra: &[bool],
    points: &[Vec3],
) -> Result<(), TestCaseError> {
    let mask = &scenario.facade.admissible_mask;
    let t = layout_from(base, mask);
    let union: Vec<bool> = base.iter().zip(extra).map(|(a, b)| *a || *b).collect();
    let t2 = layout_from(&union, mask);
    for &p in points.iter().chain(scenario.receivers.iter().step_by(37)) {
        let a = received_power(&t, p, scenario, cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let b = received_power(&t2, p, scenario, cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(b >= a, "power dropped from {a} to {b} at {p:?}");
    }
    let ev = Evaluator::new(scenario, cfg);
    let (o1, o2) = (ev.objectives_unchecked(&t), ev.objectives_unchecked(&t2));
    prop_assert!(o2.phi1 <= o1.phi1);
    let added = t2.count_ones() - t.count_ones();
    prop_assert_eq!(o2.phi2, (t.count_ones() + added) as f64 / mask.len() as f64);
    Ok(())
}

/// Phases change the complex field but never the power.
pub fn check_phase_independence(
    scenario: &Scenario,
    cfg: &FieldConfig,
    bits: &[bool],
    phase_inc: f64,
    phase_eng: f64,
    point: Vec3,
) -> Result<(), TestCaseError> {
    let layout = layout_from(bits, &scenario.facade.admissible_mask);
    let shifted = FieldConfig { phase_inc, phase_eng, ..*cfg };
    let a = received_power(&layout, point, scenario, cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let b = received_power(&layout, point, scenario, &shifted).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(a, b);
    for tile in scenario.tiles.iter().filter(|t| layout.get(t.index - 1)) {
        let e = emskin::reflected_field(tile, point, &shifted, &scenario.base_station).unwrap();
        let p = tile_power(tile, point, cfg, &scenario.base_station);
        prop_assert!((e.norm_sqr() - p).abs() <= 1e-12 * p.max(1e-300));
    }
    Ok(())
}

/// phi1 is zero exactly when every receiver is covered.
pub fn check_phi1_coverage(scenario: &Scenario, cfg: &FieldConfig, bits: &[bool]) -> Result<(), TestCaseError> {
    let layout = layout_from(bits, &scenario.facade.admissible_mask);
    let report = coverage_report(&layout, &scenario.receivers, scenario, cfg).unwrap();
    let phi1 = emskin::phi1(&layout, &scenario.receivers, scenario, cfg).unwrap();
    prop_assert_eq!(phi1, report.phi1);
    prop_assert_eq!(phi1 == 0.0, report.all_covered());
    prop_assert!(report.min_db <= report.avg_db && report.avg_db <= report.max_db);
    Ok(())
}

/// Fronts are mutually non-dominated and cover the whole population.
pub fn check_front(points: &[(f64, u8)]) -> Result<(), TestCaseError> {
    let pop: Vec<Individual> = points
        .iter()
        .map(|&(a, m)| {
            let mut bits = vec![false; 16];
            for b in bits.iter_mut().take(m as usize) {
                *b = true;
            }
            Individual::new(Layout::from_bits(bits), ObjectiveVector::new(a, m as f64 / 16.0))
        })
        .collect();
    let front = extract_pareto(&pop).unwrap();
    let objs = front.objectives();
    for (i, a) in objs.iter().enumerate() {
        for (j, b) in objs.iter().enumerate() {
            if i != j {
                prop_assert!(!dominates(a, b));
                prop_assert!(a != b);
            }
        }
    }
    prop_assert!(objs.windows(2).all(|w| w[0].phi2 < w[1].phi2));
    for p in &pop {
        prop_assert!(objs.iter().any(|f| f == &p.objectives || dominates(f, &p.objectives)));
    }
    let all: Vec<ObjectiveVector> = pop.iter().map(|p| p.objectives).collect();
    let fronts = fast_nondominated_sort(&all);
    prop_assert_eq!(fronts.iter().map(Vec::len).sum::<usize>(), all.len());
    for (k, f) in fronts.iter().enumerate() {
        for &i in f {
            for &j in f {
                prop_assert!(!dominates(&all[i], &all[j]));
            }
            if k > 0 {
                prop_assert!(fronts[k - 1].iter().any(|&j| dominates(&all[j], &all[i])));
            }
        }
    }
    Ok(())
}

/// Same seed, same front; a cache or thread count must not matter.
pub fn check_determinism<P: LayoutProblem>(problem: &P, seed: u64, iterations: usize) -> Result<(), TestCaseError> {
    let mut c = GaConfig::for_tiles(problem.tile_count());
    c.rng_seed = seed;
    c.max_iterations = iterations;
    let a = evolve_problem(&c, problem).unwrap();
    let b = evolve_problem(&c, problem).unwrap();
    prop_assert_eq!(&a.front, &b.front);
    prop_assert_eq!(&a.population, &b.population);
    Ok(())
}

/// No individual ever carries a bit outside the admissible mask.
pub fn check_mask_respect(scenario: &Scenario, cfg: &FieldConfig, mask: &[bool], seed: u64) -> Result<(), TestCaseError> {
    let mut s = scenario.clone();
    s.facade.admissible_mask = mask.to_vec();
    for (t, &m) in s.tiles.iter_mut().zip(mask) {
        t.admissible = m;
    }
    let ev = Evaluator::new(&s, cfg);
    let mut c = GaConfig::for_tiles(s.tile_count());
    c.rng_seed = seed;
    c.max_iterations = 4;
    c.mutation_rate = 0.5;
    c.snapshot_every = 1;
    let r = evolve_problem(&c, &ev).unwrap();
    for snap in &r.history.snapshots {
        prop_assert_eq!(snap.population.len(), c.population_size);
        for ind in &snap.population {
            prop_assert!(ind.layout.validate(mask).is_ok());
        }
    }
    Ok(())
}
