//! Low-weight Pauli back-propagation.
//!
//! The observable is pushed backwards through the circuit. Every noisy
//! rotation splits into three process modes (constant, `cos`, `sin`), each of
//! which maps a single Pauli to at most one Pauli. Components `I`/`Z` on the
//! rotation qubit only survive the constant mode; `X`/`Y` survive exactly
//! the two trigonometric modes, so the traversal is a binary tree whose
//! depth in branchings is capped by the cutoff.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::circuit::{ChannelPosition, NoisyCircuit, Segment};
use crate::error::{Error, Result};
use crate::pauli::{LocalPauli, LocalPauliNoise, PauliString};
use crate::surrogate::{SeriesMeta, SurrogateSeries};

/// Sparse `omega` in `{0, +1, -1}^m`: ascending rotation indices with value
/// `+1` (cos) or `-1` (sin); zeros are implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FrequencyVector {
    entries: Vec<(u32, i8)>,
}

impl FrequencyVector {
    pub fn constant() -> Self {
        Self::default()
    }

    pub fn new(entries: Vec<(u32, i8)>) -> Result<Self> {
        if let Some(&(i, v)) = entries.iter().find(|(_, v)| *v != 1 && *v != -1) {
            return Err(Error::InvalidArgument(format!("frequency entry {i}:{v} must be +1 or -1")));
        }
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument("frequency indices must be strictly increasing".into()));
        }
        Ok(FrequencyVector { entries })
    }

    pub(crate) fn from_sorted_unchecked(entries: Vec<(u32, i8)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        FrequencyVector { entries }
    }

    pub fn entries(&self) -> &[(u32, i8)] {
        &self.entries
    }

    /// `|omega|`, the number of non-zero entries.
    pub fn weight(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: u32) -> i8 {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .map(|k| self.entries[k].1)
            .unwrap_or(0)
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.last().map(|e| e.0)
    }

    pub fn has_sin(&self) -> bool {
        self.entries.iter().any(|e| e.1 == -1)
    }
}

impl fmt::Display for FrequencyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("-");
        }
        for (k, (i, v)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}:{}", if *v > 0 { "+1" } else { "-1" })?;
        }
        Ok(())
    }
}

impl FromStr for FrequencyVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" {
            return Ok(Self::constant());
        }
        let entries = s
            .split_whitespace()
            .map(|tok| {
                let bad = || Error::parse(0, format!("invalid frequency entry {tok:?}"));
                let (i, v) = tok.split_once(':').ok_or_else(bad)?;
                let i: u32 = i.parse().map_err(|_| bad())?;
                let v = match v {
                    "+1" | "1" => 1,
                    "-1" => -1,
                    _ => return Err(bad()),
                };
                Ok((i, v))
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.is_empty() {
            return Err(Error::parse(0, "empty frequency vector (use \"-\" for the constant term)"));
        }
        FrequencyVector::new(entries).map_err(|e| Error::parse(0, e.to_string()))
    }
}

/// Heisenberg-picture action of the mode `omega_i` of a noisy `Rz` on a
/// local Pauli. `None` means the mode annihilates it.
///
/// ```text
///  0: I -> I,        Z -> q_z Z
/// +1: X -> q_x X,    Y -> q_y Y
/// -1: X -> -q_x Y,   Y -> q_y X
/// ```
pub fn mode_action(omega_i: i8, local: LocalPauli, noise: &LocalPauliNoise) -> Option<(f64, LocalPauli)> {
    let (qx, qy, qz) = noise.eigenvalues();
    use LocalPauli::*;
    match (omega_i, local) {
        (0, I) => Some((1.0, I)),
        (0, Z) => Some((qz, Z)),
        (1, X) => Some((qx, X)),
        (1, Y) => Some((qy, Y)),
        (-1, X) => Some((-qx, Y)),
        (-1, Y) => Some((qy, X)),
        _ => None,
    }
}

/// Total number of frequency vectors of weight at most the cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathCount {
    Exact(u128),
    /// Did not fit in 128 bits.
    Saturated,
}

impl fmt::Display for PathCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathCount::Exact(v) => write!(f, "{v}"),
            PathCount::Saturated => f.write_str("saturated"),
        }
    }
}

/// `sum_{i <= cutoff} C(m, i) 2^i` in exact integer arithmetic.
pub fn theoretical_path_count(m: usize, cutoff: usize) -> PathCount {
    let count = || -> Option<u128> {
        let mut total: u128 = 0;
        let mut binom: u128 = 1;
        for i in 0..=cutoff.min(m) {
            if i > 0 {
                // C(m, i) = C(m, i-1) * (m - i + 1) / i, exact at every step
                binom = binom.checked_mul((m - i + 1) as u128)? / i as u128;
            }
            let term = binom.checked_mul(1u128.checked_shl(i as u32).filter(|_| i < 128)?)?;
            total = total.checked_add(term)?;
        }
        Some(total)
    };
    count().map_or(PathCount::Saturated, PathCount::Exact)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathStats {
    /// Leaves of the traversal tree: completed, annihilated or truncated.
    pub explored: u64,
    /// Paths ending in a non-zero coefficient.
    pub surviving: u64,
    pub theoretical: PathCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackpropConfig {
    pub cutoff: usize,
    pub workers: usize,
    /// Maximum number of explored paths before giving up.
    pub path_budget: Option<u64>,
}

impl BackpropConfig {
    pub fn new(cutoff: usize) -> Self {
        BackpropConfig {
            cutoff,
            workers: 1,
            path_budget: None,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn path_budget(mut self, budget: u64) -> Self {
        self.path_budget = Some(budget);
        self
    }
}

/// All non-zero coefficients `d_omega` with `|omega| <= cutoff`.
pub fn backpropagate(circuit: &NoisyCircuit, obs: &PauliString, cutoff: usize) -> Result<SurrogateSeries> {
    backpropagate_with(circuit, obs, &BackpropConfig::new(cutoff)).map(|(s, _)| s)
}

pub fn path_stats(circuit: &NoisyCircuit, obs: &PauliString, cutoff: usize) -> Result<PathStats> {
    backpropagate_with(circuit, obs, &BackpropConfig::new(cutoff)).map(|(_, st)| st)
}

pub fn backpropagate_with(
    circuit: &NoisyCircuit,
    obs: &PauliString,
    config: &BackpropConfig,
) -> Result<(SurrogateSeries, PathStats)> {
    if obs.num_qubits() != circuit.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.num_qubits(),
            got: obs.num_qubits(),
        });
    }
    if config.workers == 0 {
        return Err(Error::InvalidArgument("worker count must be at least 1".into()));
    }
    let walker = Walker {
        circuit,
        cutoff: config.cutoff,
        budget: config.path_budget,
        explored: AtomicU64::new(0),
    };
    let root = TraversalState {
        pauli: obs.clone(),
        factor: 1.0,
        omega: Vec::new(),
        next_step: circuit.num_rotations(),
    };

    let mut sink = Sink::default();
    if config.workers == 1 {
        walker.run_subtree(root, &mut sink)?;
    } else {
        let frontier = walker.expand_frontier(root, 16 * config.workers, &mut sink)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
        let parts: Vec<Sink> = pool.install(|| {
            frontier
                .into_par_iter()
                .map(|state| {
                    let mut local = Sink::default();
                    walker.run_subtree(state, &mut local).map(|_| local)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        for p in parts {
            sink.merge(p);
        }
    }

    let meta = SeriesMeta {
        n: circuit.num_qubits(),
        m: circuit.num_rotations(),
        cutoff: config.cutoff,
        num_params: circuit.num_params(),
        observable: obs.to_string(),
        slots: circuit.slot_map(),
    };
    let stats = PathStats {
        explored: sink.explored,
        surviving: sink.terms.len() as u64,
        theoretical: theoretical_path_count(circuit.num_rotations(), config.cutoff),
    };
    Ok((SurrogateSeries::from_parts_unchecked(meta, sink.terms), stats))
}

/// Node of the traversal tree: the frame still has to pass through the
/// segment of step `next_step - 1` (or the prologue when zero).
#[derive(Debug, Clone)]
struct TraversalState {
    pauli: PauliString,
    factor: f64,
    /// Branch choices, most recent (lowest rotation index) last.
    omega: Vec<(u32, i8)>,
    next_step: usize,
}

enum Advance {
    Leaf(Option<(FrequencyVector, f64)>),
    Branch(TraversalState, TraversalState),
}

#[derive(Default)]
struct Sink {
    explored: u64,
    terms: BTreeMap<FrequencyVector, f64>,
}

impl Sink {
    fn merge(&mut self, other: Sink) {
        self.explored += other.explored;
        for (k, v) in other.terms {
            let prev = self.terms.insert(k, v);
            debug_assert!(prev.is_none(), "two paths produced the same frequency vector");
        }
    }
}

struct Walker<'a> {
    circuit: &'a NoisyCircuit,
    cutoff: usize,
    budget: Option<u64>,
    explored: AtomicU64,
}

#[inline]
fn pass_segment(seg: &Segment, state: &mut TraversalState) {
    let attenuate = |state: &mut TraversalState| {
        if let Some(ch) = &seg.channel {
            state.factor *= ch.attenuation(&state.pauli);
        }
    };
    match seg.position {
        ChannelPosition::After => {
            attenuate(state);
            seg.layer.conjugate_adjoint(&mut state.pauli);
        }
        ChannelPosition::Before => {
            seg.layer.conjugate_adjoint(&mut state.pauli);
            attenuate(state);
        }
    }
}

impl Walker<'_> {
    /// Moves the frame back to the next branching point or to a leaf.
    fn advance(&self, mut state: TraversalState) -> Advance {
        let steps = self.circuit.steps();
        loop {
            if state.factor == 0.0 {
                return Advance::Leaf(None);
            }
            if state.next_step == 0 {
                pass_segment(self.circuit.prologue(), &mut state);
                let d = state.factor * state.pauli.zero_state_expectation();
                if d == 0.0 {
                    return Advance::Leaf(None);
                }
                state.omega.reverse();
                return Advance::Leaf(Some((FrequencyVector::from_sorted_unchecked(state.omega), d)));
            }
            let index = state.next_step - 1;
            let step = &steps[index];
            pass_segment(&step.segment, &mut state);
            if state.factor == 0.0 {
                return Advance::Leaf(None);
            }
            let q = step.rotation.qubit;
            let noise = &step.rotation.noise;
            let local = state.pauli.get(q);
            state.next_step = index;
            match local {
                LocalPauli::I | LocalPauli::Z => {
                    let (f, _) = mode_action(0, local, noise).expect("constant mode keeps I and Z");
                    state.factor *= f;
                }
                LocalPauli::X | LocalPauli::Y => {
                    if state.omega.len() >= self.cutoff {
                        return Advance::Leaf(None);
                    }
                    let mut sin = state.clone();
                    let (fc, pc) = mode_action(1, local, noise).expect("cos mode keeps X and Y");
                    let (fs, psn) = mode_action(-1, local, noise).expect("sin mode keeps X and Y");
                    state.factor *= fc;
                    state.pauli.set(q, pc);
                    state.omega.push((index as u32, 1));
                    sin.factor *= fs;
                    sin.pauli.set(q, psn);
                    sin.omega.push((index as u32, -1));
                    return Advance::Branch(state, sin);
                }
            }
        }
    }

    fn record(&self, leaf: Option<(FrequencyVector, f64)>, sink: &mut Sink) -> Result<()> {
        sink.explored += 1;
        if let Some(budget) = self.budget {
            if self.explored.fetch_add(1, Ordering::Relaxed) >= budget {
                return Err(Error::BudgetExceeded { budget });
            }
        }
        if let Some((omega, d)) = leaf {
            debug_assert!(d.abs() <= 1.0 + 1e-12);
            let prev = sink.terms.insert(omega, d);
            debug_assert!(prev.is_none(), "two paths produced the same frequency vector");
        }
        Ok(())
    }

    /// Depth-first, cos branch before sin branch.
    fn run_subtree(&self, root: TraversalState, sink: &mut Sink) -> Result<()> {
        let mut stack = vec![root];
        while let Some(mut state) = stack.pop() {
            loop {
                match self.advance(state) {
                    Advance::Leaf(leaf) => {
                        self.record(leaf, sink)?;
                        break;
                    }
                    Advance::Branch(cos, sin) => {
                        stack.push(sin);
                        state = cos;
                    }
                }
            }
        }
        Ok(())
    }

    /// Breadth-first expansion until at least `target` independent subtrees
    /// exist (or the tree is exhausted).
    fn expand_frontier(&self, root: TraversalState, target: usize, sink: &mut Sink) -> Result<Vec<TraversalState>> {
        let mut frontier = vec![root];
        while !frontier.is_empty() && frontier.len() < target {
            let mut next = Vec::with_capacity(2 * frontier.len());
            for state in frontier {
                match self.advance(state) {
                    Advance::Leaf(leaf) => self.record(leaf, sink)?,
                    Advance::Branch(cos, sin) => {
                        next.push(cos);
                        next.push(sin);
                    }
                }
            }
            frontier = next;
        }
        Ok(frontier)
    }
}
