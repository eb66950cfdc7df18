//! Timing tables over generated benchmark circuits.

use std::time::{Duration, Instant};

use crate::circuit::{gen_benchmark, BenchmarkFamily, NoisyCircuit};
use crate::engine::{backpropagate_with, BackpropConfig, PathStats};
use crate::error::{Error, Result};
use crate::pauli::{LocalPauli, LocalPauliNoise, PauliString};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub family: BenchmarkFamily,
    pub qubits: Vec<usize>,
    pub cutoffs: Vec<usize>,
    pub layers: usize,
    /// Circuits generated per `n`, seeded `seed, seed + 1, ...`.
    pub circuits: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub noise: LocalPauliNoise,
}

impl BenchSpec {
    pub fn new(family: BenchmarkFamily, qubits: Vec<usize>, cutoffs: Vec<usize>) -> Self {
        BenchSpec {
            family,
            qubits,
            cutoffs,
            layers: 6,
            circuits: 1,
            repetitions: 1,
            seed: 0,
            noise: LocalPauliNoise::noiseless(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub cutoff: usize,
    /// Explored paths summed over the generated circuits.
    pub paths: u64,
    pub surviving: u64,
    /// Median over repetitions of the time to run every circuit once.
    pub wall: Duration,
}

impl BenchRow {
    pub const HEADER: &'static str = "n\tm\tcutoff\tpaths\tsurviving\twall_s";

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{:.6e}",
            self.n,
            self.m,
            self.cutoff,
            self.paths,
            self.surviving,
            self.wall.as_secs_f64()
        )
    }
}

/// `Z` on the middle qubit.
pub fn bench_observable(n: usize) -> PauliString {
    PauliString::single(n, n / 2, LocalPauli::Z).expect("n >= 1")
}

/// Runs every `(n, cutoff)` pair single-threaded, after one untimed pass.
pub fn bench_table(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    if spec.repetitions == 0 || spec.circuits == 0 {
        return Err(Error::InvalidArgument("bench needs at least one repetition and circuit".into()));
    }
    let mut rows = Vec::new();
    for &n in &spec.qubits {
        let circuits = (0..spec.circuits as u64)
            .map(|i| gen_benchmark(spec.family, n, spec.layers, spec.seed.wrapping_add(i), spec.noise))
            .collect::<Result<Vec<NoisyCircuit>>>()?;
        let obs = bench_observable(n);
        for &cutoff in &spec.cutoffs {
            let cfg = BackpropConfig::new(cutoff);
            let mut times = Vec::with_capacity(spec.repetitions);
            let mut totals: Option<(u64, u64)> = None;
            // untimed warm-up pass
            for c in &circuits {
                backpropagate_with(c, &obs, &cfg)?;
            }
            for _ in 0..spec.repetitions {
                let start = Instant::now();
                let mut stats = Vec::with_capacity(circuits.len());
                for c in &circuits {
                    stats.push(backpropagate_with(c, &obs, &cfg)?.1);
                }
                times.push(start.elapsed());
                let t = sum_stats(&stats);
                debug_assert!(totals.is_none_or(|prev| prev == t));
                totals = Some(t);
            }
            times.sort();
            let (paths, surviving) = totals.expect("repetitions >= 1");
            rows.push(BenchRow {
                n,
                m: circuits[0].num_rotations(),
                cutoff,
                paths,
                surviving,
                wall: times[times.len() / 2],
            });
        }
    }
    Ok(rows)
}

fn sum_stats(stats: &[PathStats]) -> (u64, u64) {
    stats
        .iter()
        .fold((0, 0), |(p, s), st| (p + st.explored, s + st.surviving))
}
