use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};
use emskin::export::{self, fmt_sig6};
use emskin::field::RegionSpec;
use emskin::optimizer::batch::{BatchSummary, SeedOutcome};
use emskin::optimizer::{evolve_problem, GaConfig};
use emskin::{
    coverage_report, load_scenario, sample_power_grid, Evaluator, FieldConfig, Layout, Scenario,
    SingleTileBenchmark, SphericalDir,
};

use crate::args::{
    BatchArgs, EvaluateArgs, GaArgs, LayoutArgs, MapArgs, OptimizeArgs, RegionArgs, RegionKind, ScenarioArgs,
    SingleTileArgs,
};
use crate::manifest::Manifest;

/// Exit code 2 for bad user input, 3 for environment or I/O trouble.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Env(anyhow::Error),
}

type CmdResult<T = ()> = Result<T, Failure>;

trait Classify<T> {
    fn input(self) -> CmdResult<T>;
    fn env(self) -> CmdResult<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn input(self) -> CmdResult<T> {
        self.map_err(|e| Failure::Input(e.into()))
    }
    fn env(self) -> CmdResult<T> {
        self.map_err(|e| Failure::Env(e.into()))
    }
}

/// Library errors are the user's fault unless they are I/O.
fn lib<T>(r: emskin::Result<T>) -> CmdResult<T> {
    r.map_err(|e| if e.is_io() { Failure::Env(e.into()) } else { Failure::Input(e.into()) })
}

fn load(args: &ScenarioArgs) -> CmdResult<(Scenario, FieldConfig)> {
    let (scenario, mut field) = load_scenario(&args.scenario)
        .with_context(|| format!("cannot load scenario {}", args.scenario.display()))
        .input()?;
    if let Some(s) = args.sinc_arg_scale {
        field = lib(field.with_sinc_arg_scale(s))?;
    }
    Ok((scenario, field))
}

fn read_layout(args: &LayoutArgs, scenario: &Scenario) -> CmdResult<Layout> {
    let n = scenario.tile_count();
    let layout = if let Some(bits) = &args.layout {
        Layout::parse_bits(bits, n)
    } else if let Some(tiles) = &args.tiles {
        Layout::parse_indices(tiles, n)
    } else if let Some(path) = &args.layout_file {
        Layout::read_file(path, n).map_err(|e| match e {
            emskin::Error::Io { path, source } => emskin::Error::Parse { path, message: source.to_string() },
            other => other,
        })
    } else {
        return Err(Failure::Input(anyhow!("one of --layout, --tiles, --layout-file is required")));
    };
    let layout = lib(layout)?;
    lib(layout.validate(&scenario.facade.admissible_mask))?;
    Ok(layout)
}

fn ga_config(args: &GaArgs, n: usize, seed: u64) -> CmdResult<GaConfig> {
    let mut c = GaConfig::for_tiles(n);
    c.rng_seed = seed;
    if let Some(i) = args.iterations {
        c.max_iterations = i;
    }
    if let Some(p) = args.population {
        c.population_size = p;
    }
    if let Some(r) = args.crossover_rate {
        c.crossover_rate = r;
    }
    if let Some(r) = args.mutation_rate {
        c.mutation_rate = r;
    }
    c.crossover = args.crossover.into();
    c.snapshot_every = args.snapshot_every;
    lib(c.validate())?;
    Ok(c)
}

fn create_dir(dir: &Path) -> CmdResult {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display())).env()
}

/// Runs `body` with a manifest that is written before the run and again
/// afterwards, whatever the outcome.
fn with_manifest(
    out: &Path,
    command: &str,
    scenario: Option<&Path>,
    body: impl FnOnce(&mut Manifest) -> CmdResult,
) -> CmdResult {
    create_dir(out)?;
    let mut manifest = Manifest::new(out, command);
    if let Some(path) = scenario {
        manifest.scenario(path);
    }
    manifest.set("status", "running");
    manifest.write().context("cannot write manifest").env()?;
    let result = body(&mut manifest);
    let status = match &result {
        Ok(()) => "ok".to_string(),
        Err(Failure::Input(e)) | Err(Failure::Env(e)) => format!("failed: {e:#}"),
    };
    let written = manifest.finish(&status).context("cannot write manifest").env();
    result.and(written)
}

fn run_optimize(
    scenario: &Scenario,
    field: &FieldConfig,
    config: &GaConfig,
    out: &Path,
    snapshots: bool,
) -> CmdResult<emskin::optimizer::ParetoFront> {
    let evaluator = Evaluator::new(scenario, field);
    let result = lib(evolve_problem(config, &evaluator))?;
    create_dir(out)?;
    lib(export::write_front(&out.join("pareto.csv"), &result.front))?;
    for (o, sol) in result.front.solutions.iter().enumerate() {
        let label = format!("solution {} of {}", o + 1, result.front.len());
        let path = out.join(format!("layout_{}.txt", o + 1));
        lib(export::write_layout_file(&path, &sol.layout, Some(sol.objectives), &label))?;
    }
    if snapshots {
        lib(export::write_snapshots(&out.join("snapshots"), &result.history.snapshots))?;
    }
    Ok(result.front)
}

pub fn optimize(args: &OptimizeArgs) -> CmdResult {
    let seed = args.seed.unwrap_or_else(|| {
        eprintln!("no --seed given, using seed 0");
        0
    });
    with_manifest(&args.out, "optimize", Some(&args.scenario.scenario), |manifest| {
        manifest.set("seed", seed);
        let (scenario, field) = load(&args.scenario)?;
        manifest.set("sinc_arg_scale", field.sinc_arg_scale);
        let config = ga_config(&args.ga, scenario.tile_count(), seed)?;
        manifest.ga(&config);
        manifest.write().context("cannot write manifest").env()?;

        let front = run_optimize(&scenario, &field, &config, &args.out, true)?;
        manifest.set("front_size", front.len());
        match front.min_full_coverage_tiles() {
            Some(m) => manifest.set("min_full_coverage_tiles", m),
            None => manifest.set("min_full_coverage_tiles", "none"),
        }
        println!("front of {} solutions written to {}", front.len(), args.out.join("pareto.csv").display());
        println!("index,phi1,phi2,M");
        for (o, s) in front.solutions.iter().enumerate() {
            println!("{},{},{},{}", o + 1, fmt_sig6(s.objectives.phi1), fmt_sig6(s.objectives.phi2), s.layout.count_ones());
        }
        Ok(())
    })
}

pub fn evaluate(args: &EvaluateArgs) -> CmdResult {
    let (scenario, field) = load(&args.scenario)?;
    let layout = read_layout(&args.layout, &scenario)?;
    let report = lib(coverage_report(&layout, &scenario.receivers, &scenario, &field))?;
    let text = export::coverage_report_to_string(&report, &args.name);
    let summary: String = text.lines().take_while(|l| !l.starts_with("# class grid")).map(|l| format!("{l}\n")).collect();
    print!("{summary}");
    if let Some(out) = &args.out {
        create_dir(out)?;
        lib(export::write_text(&out.join(format!("coverage_{}.txt", args.name)), &text))?;
    }
    Ok(())
}

fn region_spec(args: &RegionArgs, scenario: &Scenario) -> RegionSpec {
    let mut r = match args.region {
        RegionKind::Around => RegionSpec::around_aoi(scenario, args.size),
        RegionKind::Aoi => RegionSpec::aoi(scenario),
    };
    if let Some(c) = args.center {
        r.center = c;
    }
    if let Some(a) = args.azimuth {
        r.azimuth_deg = a;
    }
    if let Some(e) = args.extent {
        r.extent = e;
        if args.cells.is_none() {
            r.resolution = ((e.0.round() as usize).max(1), (e.1.round() as usize).max(1));
        }
    }
    if let Some(c) = args.cells {
        r.resolution = c;
    }
    if let Some(h) = args.height {
        r.height = h;
    }
    r
}

pub fn map(args: &MapArgs) -> CmdResult {
    with_manifest(&args.out, "map", Some(&args.scenario.scenario), |manifest| {
        let (scenario, field) = load(&args.scenario)?;
        let layout = read_layout(&args.layout, &scenario)?;
        manifest.set("layout", &layout);
        let region = region_spec(&args.region, &scenario);
        manifest.set("region", format!("{region:?}"));
        let grid = lib(sample_power_grid(&layout, &region, &scenario, &field))?;
        let grid_path = args.out.join(format!("powergrid_{}.csv", args.name));
        lib(export::write_power_grid(&grid_path, &grid))?;
        let classes = export::class_grid_to_string(&grid, scenario.power_threshold_db, scenario.blackout_threshold_db);
        lib(export::write_text(&args.out.join(format!("connectivity_{}.csv", args.name)), &classes))?;
        println!(
            "{} x {} cells, max {} dB, min {} dB -> {}",
            grid.resolution_u,
            grid.resolution_v,
            fmt_sig6(grid.max_db()),
            fmt_sig6(grid.min_db()),
            grid_path.display()
        );
        Ok(())
    })
}

pub fn validate_single_tile(args: &SingleTileArgs) -> CmdResult {
    let bench = SingleTileBenchmark {
        frequency: args.frequency,
        side_wavelengths: args.side_wavelengths,
        bs_distance: args.distance,
        steering: SphericalDir::new(args.steer_theta, args.steer_phi),
        sphere_radius: args.radius,
        scan_step_deg: args.step,
        field: lib(FieldConfig::default().with_sinc_arg_scale(args.sinc_arg_scale))?,
        ..SingleTileBenchmark::default()
    };
    let r = lib(bench.run())?;
    let text = format!(
        "side_m = {}\nsteering_theta_deg = {}\nsteering_phi_deg = {}\npeak_theta_deg = {}\npeak_phi_deg = {}\n\
         peak_db = {}\npointing_error_deg = {}\nbeamwidth_theta_deg = {}\nbeamwidth_phi_deg = {}\n",
        fmt_sig6(r.side),
        fmt_sig6(args.steer_theta),
        fmt_sig6(args.steer_phi),
        fmt_sig6(r.peak_dir.theta),
        fmt_sig6(r.peak_dir.phi),
        fmt_sig6(r.peak_db),
        fmt_sig6(r.pointing_error_deg),
        fmt_sig6(r.beamwidth_theta_deg),
        fmt_sig6(r.beamwidth_phi_deg),
    );
    print!("{text}");
    if let Some(out) = &args.out {
        create_dir(out)?;
        lib(export::write_text(&out.join("validation.txt"), &text))?;
    }
    Ok(())
}

pub fn batch(args: &BatchArgs) -> CmdResult {
    let base = args.seed.ok_or_else(|| Failure::Input(anyhow!("batch mode requires --seed")))?;
    if args.seeds == 0 {
        return Err(Failure::Input(anyhow!("--seeds must be at least 1")));
    }
    with_manifest(&args.out, "batch", Some(&args.scenario.scenario), |manifest| {
        let (scenario, field) = load(&args.scenario)?;
        let seeds: Vec<u64> = (0..args.seeds as u64).map(|k| base.wrapping_add(k)).collect();
        manifest.set("seeds", format!("{}..={}", base, seeds[seeds.len() - 1]));
        manifest.set("sinc_arg_scale", field.sinc_arg_scale);
        let probe = ga_config(&args.ga, scenario.tile_count(), base)?;
        manifest.ga(&probe);
        manifest.write().context("cannot write manifest").env()?;

        let mut outcomes = Vec::new();
        for &seed in &seeds {
            let config = GaConfig { rng_seed: seed, ..probe.clone() };
            let dir = args.out.join(format!("seed_{seed}"));
            let front = run_optimize(&scenario, &field, &config, &dir, false)?;
            let outcome = SeedOutcome::from_front(seed, &front);
            eprintln!(
                "seed {seed}: O = {}, M at full coverage = {}",
                outcome.front_size,
                outcome.full_coverage_tiles.map_or("none".into(), |m| m.to_string())
            );
            outcomes.push(outcome);
        }
        let summary = BatchSummary::new(outcomes).expect("at least one seed");
        let text = batch_summary_text(&summary);
        print!("{text}");
        lib(export::write_text(&args.out.join("batch_summary.txt"), &text))?;
        Ok(())
    })
}

fn batch_summary_text(s: &BatchSummary) -> String {
    let mut t = format!("runs = {}\nfull_coverage_runs = {}\n", s.runs(), s.full_coverage_runs());
    match s.full_coverage_tiles {
        Some(m) => {
            t += &format!(
                "M_min = {}\nM_median = {}\nM_max = {}\nM_relative_spread = {}\n",
                fmt_sig6(m.min),
                fmt_sig6(m.median),
                fmt_sig6(m.max),
                fmt_sig6(m.relative())
            );
        }
        None => t += "M_min = none\n",
    }
    let o = s.front_size;
    t += &format!(
        "O_min = {}\nO_median = {}\nO_max = {}\nO_relative_spread = {}\n",
        fmt_sig6(o.min),
        fmt_sig6(o.median),
        fmt_sig6(o.max),
        fmt_sig6(o.relative())
    );
    t += "seed,O,M_full_coverage,min_phi1\n";
    for r in &s.outcomes {
        t += &format!(
            "{},{},{},{}\n",
            r.seed,
            r.front_size,
            r.full_coverage_tiles.map_or("none".into(), |m| m.to_string()),
            fmt_sig6(r.min_phi1)
        );
    }
    t
}
