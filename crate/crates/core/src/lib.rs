//! Design of modular reflecting electromagnetic skins for millimeter-wave
//! coverage: scenario geometry, closed-form tile field model, coverage and
//! complexity objectives, and a binary NSGA-II optimizer.

pub mod config;
pub mod error;
pub mod export;
pub mod field;
pub mod geometry;
pub mod layout;
pub mod objectives;
pub mod optimizer;
pub mod scene;
pub mod validation;

pub use config::{build_scenario, load_scenario, ScenarioConfig};
pub use error::{Error, Result};
pub use field::{received_power, reflected_field, sample_power_grid, FieldConfig, PowerGrid, RegionSpec};
pub use geometry::{SphericalDir, Vec3};
pub use layout::Layout;
pub use objectives::{coverage_report, phi1, phi2, CoverageReport, Evaluator, ObjectiveVector, ReceiverClass};
pub use optimizer::{evolve, evolve_problem, extract_pareto, EvolveResult, GaConfig, Individual, ParetoFront};
pub use scene::{AreaOfInterest, BaseStation, FacadeGrid, Scenario, Tile};
pub use validation::{SingleTileBenchmark, SingleTileReport};
