//! Seeded benchmark circuit families.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CircuitBuilder, NoisyCircuit};
use crate::clifford::CliffordGate;
use crate::error::{Error, Result};
use crate::pauli::LocalPauliNoise;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchmarkFamily {
    /// Per layer and qubit: `H? Rz X? H?` (each coin p=1/2), then CX on every grid edge.
    Fig2,
    /// Per layer and qubit: `Rz Rx Rz` with `Rx = H Rz H`, then CX on each grid edge with p=1/2.
    Fig3,
}

impl FromStr for BenchmarkFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig2" => Ok(BenchmarkFamily::Fig2),
            "fig3" => Ok(BenchmarkFamily::Fig3),
            _ => Err(Error::InvalidArgument(format!("unknown family {s:?} (fig2|fig3)"))),
        }
    }
}

/// Nearest-neighbour edges of a row-major `rows x cols` grid with `rows` the
/// largest divisor of `n` not exceeding `sqrt(n)`. Prime `n` (and `n < 4`)
/// degenerate to a `1 x n` chain. Edges are `(lower, higher)`.
pub fn grid_edges(n: usize) -> Vec<(usize, usize)> {
    let rows = (1..=n).take_while(|r| r * r <= n).filter(|r| n.is_multiple_of(*r)).last().unwrap_or(1);
    let cols = n / rows.max(1);
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let q = r * cols + c;
            if c + 1 < cols {
                edges.push((q, q + 1));
            }
            if r + 1 < rows {
                edges.push((q, q + cols));
            }
        }
    }
    edges
}

/// Deterministic in `seed`. Every rotation gets its own slot and `noise`.
pub fn gen_benchmark(
    family: BenchmarkFamily,
    n: usize,
    layers: usize,
    seed: u64,
    noise: LocalPauliNoise,
) -> Result<NoisyCircuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("benchmark needs at least one qubit".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = grid_edges(n);
    let mut b = CircuitBuilder::new(n);
    for _ in 0..layers {
        match family {
            BenchmarkFamily::Fig2 => {
                for q in 0..n {
                    if rng.random_bool(0.5) {
                        b.gate(CliffordGate::h(q))?;
                    }
                    b.rz(q, noise)?;
                    if rng.random_bool(0.5) {
                        b.gate(CliffordGate::x(q))?;
                    }
                    if rng.random_bool(0.5) {
                        b.gate(CliffordGate::h(q))?;
                    }
                }
                for &(a, c) in &edges {
                    b.gate(CliffordGate::cx(a, c)?)?;
                }
            }
            BenchmarkFamily::Fig3 => {
                for q in 0..n {
                    b.rz(q, noise)?;
                    b.gate(CliffordGate::h(q))?;
                    b.rz(q, noise)?;
                    b.gate(CliffordGate::h(q))?;
                    b.rz(q, noise)?;
                }
                for &(a, c) in &edges {
                    if rng.random_bool(0.5) {
                        b.gate(CliffordGate::cx(a, c)?)?;
                    }
                }
            }
        }
    }
    b.build()
}
