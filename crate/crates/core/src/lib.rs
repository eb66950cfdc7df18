//! Low-weight Pauli back-propagation for noisy parameterized circuits.
//!
//! A circuit of Clifford layers and noisy `Rz` rotations is expanded into a
//! trigonometric series in its angles; only frequency vectors of Hamming
//! weight at most a cutoff are kept.
//!
//! ```
//! use lowesa::{backpropagate, CircuitBuilder, CliffordGate, LocalPauliNoise, PauliString};
//!
//! let mut b = CircuitBuilder::new(1);
//! b.gate(CliffordGate::h(0))?;
//! b.rz(0, LocalPauliNoise::dephasing(0.1)?)?;
//! b.gate(CliffordGate::h(0))?;
//! let circuit = b.build()?;
//! let series = backpropagate(&circuit, &"+Z".parse::<PauliString>()?, 1)?;
//! assert!((series.evaluate(&[0.0])? - 0.8).abs() < 1e-15);
//! # Ok::<(), lowesa::Error>(())
//! ```

pub mod bench;
pub mod circuit;
pub mod clifford;
pub mod engine;
pub mod error;
pub mod oracle;
pub mod pauli;
pub mod surrogate;

pub use circuit::{gen_benchmark, BenchmarkFamily, ChannelPosition, CircuitBuilder, NoisyCircuit, ParamRotation, Segment, Step};
pub use clifford::{CliffordGate, CliffordLayer, GateKind};
pub use engine::{backpropagate, backpropagate_with, path_stats, theoretical_path_count, BackpropConfig, FrequencyVector, PathCount, PathStats};
pub use error::{Error, Result};
pub use oracle::{dense_simulate, exact_series};
pub use pauli::{ChannelEigenvalueMap, ChannelFactor, LocalPauli, LocalPauliNoise, PauliString};
pub use surrogate::{chebyshev_tail, monte_carlo_distance, parseval_distance, theoretical_bound, ErrorBound, NoiseSummary, SeriesMeta, SurrogateSeries};
