//! Variation operators on binary layouts.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::layout::Layout;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossoverKind {
    #[default]
    Uniform,
    OnePoint,
    TwoPoint,
}

impl std::str::FromStr for CrossoverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "one-point" => Ok(Self::OnePoint),
            "two-point" => Ok(Self::TwoPoint),
            other => Err(format!("unknown crossover {other:?} (uniform, one-point, two-point)")),
        }
    }
}

/// Random layout with each admissible bit set independently with probability 1/2.
pub fn random_layout<R: Rng>(mask: &[bool], rng: &mut R) -> Layout {
    Layout::from_bits(mask.iter().map(|&ok| ok && rng.gen::<bool>()).collect())
}

/// Recombines two parents into two children.
pub fn crossover<R: Rng>(kind: CrossoverKind, a: &Layout, b: &Layout, rng: &mut R) -> (Layout, Layout) {
    let n = a.len();
    let mut c1 = a.clone();
    let mut c2 = b.clone();
    let swap = |i: usize, c1: &mut Layout, c2: &mut Layout| {
        let t = c1.get(i);
        c1.set(i, c2.get(i));
        c2.set(i, t);
    };
    match kind {
        CrossoverKind::Uniform => {
            for i in 0..n {
                if rng.gen::<bool>() {
                    swap(i, &mut c1, &mut c2);
                }
            }
        }
        CrossoverKind::OnePoint => {
            if n > 1 {
                let cut = rng.gen_range(1..n);
                for i in cut..n {
                    swap(i, &mut c1, &mut c2);
                }
            }
        }
        CrossoverKind::TwoPoint => {
            if n > 1 {
                let mut p = rng.gen_range(0..n);
                let mut q = rng.gen_range(0..n);
                if p > q {
                    std::mem::swap(&mut p, &mut q);
                }
                for i in p..=q {
                    swap(i, &mut c1, &mut c2);
                }
            }
        }
    }
    (c1, c2)
}

/// Flips each admissible bit with probability `rate`.
pub fn mutate<R: Rng>(layout: &mut Layout, mask: &[bool], rate: f64, rng: &mut R) {
    if rate <= 0.0 {
        return;
    }
    for (i, &ok) in mask.iter().enumerate() {
        if ok && rng.gen::<f64>() < rate {
            layout.flip(i);
        }
    }
}
