//! Run manifest: what was run, on which input, and how it ended.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use emskin::optimizer::GaConfig;
use sha2::{Digest, Sha256};

pub struct Manifest {
    path: PathBuf,
    entries: Vec<(String, String)>,
    started: Instant,
}

impl Manifest {
    pub fn new(out_dir: &Path, command: &str) -> Self {
        let mut m = Self { path: out_dir.join("manifest.txt"), entries: Vec::new(), started: Instant::now() };
        m.set("tool", concat!("emskin ", env!("CARGO_PKG_VERSION")));
        m.set("command", command);
        m
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    /// Records the scenario path and the SHA-256 of its bytes, if readable.
    pub fn scenario(&mut self, path: &Path) {
        self.set("scenario", path.display());
        match fs::read(path) {
            Ok(bytes) => {
                let digest = Sha256::digest(&bytes);
                let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
                self.set("scenario_sha256", hex);
            }
            Err(e) => self.set("scenario_sha256", format!("unreadable ({e})")),
        }
    }

    pub fn ga(&mut self, c: &GaConfig) {
        self.set("population_size", c.population_size);
        self.set("max_iterations", c.max_iterations);
        self.set("crossover_rate", c.crossover_rate);
        self.set("mutation_rate", c.mutation_rate);
        self.set("crossover", format!("{:?}", c.crossover).to_lowercase());
        self.set("dist_index_crossover", c.dist_index_crossover);
        self.set("dist_index_mutation", c.dist_index_mutation);
    }

    fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn write(&self) -> std::io::Result<()> {
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(&self.path, self.render())
    }

    /// Stamps status and duration, then writes.
    pub fn finish(&mut self, status: &str) -> std::io::Result<()> {
        self.set("duration_s", format!("{:.3}", self.started.elapsed().as_secs_f64()));
        self.set("status", status);
        self.write()
    }
}
