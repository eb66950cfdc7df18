//! Noisy parameterized circuits: Clifford segments interleaved with noisy
//! single-qubit z-rotations.
//!
//! In time order a circuit is `segment_0, rz_1, segment_1, ..., rz_m, segment_m`
//! where `segment_0` is the prologue and each segment is a Clifford layer
//! with an optional Pauli channel acting just before or just after it.

mod format;
mod generate;

pub use generate::{gen_benchmark, grid_edges, BenchmarkFamily};

use crate::clifford::{CliffordGate, CliffordLayer};
use crate::error::{Error, Result};
use crate::pauli::{ChannelEigenvalueMap, LocalPauliNoise};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelPosition {
    Before,
    #[default]
    After,
}

/// Clifford layer with its attached channel.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Segment {
    pub layer: CliffordLayer,
    pub channel: Option<ChannelEigenvalueMap>,
    pub position: ChannelPosition,
}

impl Segment {
    pub fn is_empty(&self) -> bool {
        self.layer.is_empty() && self.channel.is_none()
    }

    fn max_qubit(&self) -> Option<usize> {
        let ch = self.channel.as_ref().and_then(ChannelEigenvalueMap::max_qubit);
        self.layer.max_qubit().max(ch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRotation {
    pub qubit: usize,
    pub slot: usize,
    pub noise: LocalPauliNoise,
}

/// A noisy `Rz` followed by the segment that comes after it in time.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub rotation: ParamRotation,
    pub segment: Segment,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoisyCircuit {
    n: usize,
    prologue: Segment,
    steps: Vec<Step>,
    num_params: usize,
    slot_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub injective: bool,
    pub warnings: Vec<String>,
}

impl NoisyCircuit {
    /// Builds and validates. Slot names default to `theta<k>`.
    pub fn new(n: usize, prologue: Segment, steps: Vec<Step>) -> Result<Self> {
        let num_params = steps.iter().map(|s| s.rotation.slot + 1).max().unwrap_or(0);
        let c = NoisyCircuit {
            n,
            prologue,
            steps,
            num_params,
            slot_names: (0..num_params).map(|k| format!("theta{k}")).collect(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Number of rotations `m`.
    pub fn num_rotations(&self) -> usize {
        self.steps.len()
    }

    /// Parameter dimension; equals `m` iff the slot map is injective.
    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn prologue(&self) -> &Segment {
        &self.prologue
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn slot_names(&self) -> &[String] {
        &self.slot_names
    }

    /// Rotation index -> parameter slot.
    pub fn slot_map(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.rotation.slot).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.num_params == self.steps.len()
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("circuit needs at least one qubit".into()));
        }
        let segments = std::iter::once(&self.prologue).chain(self.steps.iter().map(|s| &s.segment));
        for seg in segments {
            if let Some(q) = seg.max_qubit().filter(|&q| q >= self.n) {
                return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
            }
        }
        let mut used = vec![false; self.num_params];
        for s in &self.steps {
            let r = &s.rotation;
            if r.qubit >= self.n {
                return Err(Error::QubitOutOfRange { qubit: r.qubit, n: self.n });
            }
            if r.slot >= self.num_params {
                return Err(Error::SlotOutOfRange { slot: r.slot, dim: self.num_params });
            }
            used[r.slot] = true;
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(Error::NonContiguousSlots { missing, dim: self.num_params });
        }
        let injective = self.is_injective();
        let mut warnings = Vec::new();
        if !injective {
            warnings.push(format!(
                "non-injective parameter map: {} rotations share {} slots",
                self.steps.len(),
                self.num_params
            ));
        }
        Ok(ValidationReport { injective, warnings })
    }

    /// Replaces every rotation's noise.
    pub fn with_rotation_noise(mut self, noise: LocalPauliNoise) -> Self {
        for s in &mut self.steps {
            s.rotation.noise = noise;
        }
        self
    }
}

/// Assembles a circuit from time-ordered operations.
///
/// Gates before the first rotation form the prologue; gates after rotation
/// `i` form segment `i`. A channel added before any gate of the current
/// segment sits `Before` it, otherwise `After`.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    n: usize,
    prologue: Segment,
    steps: Vec<Step>,
    slot_names: Vec<String>,
}

impl CircuitBuilder {
    pub fn new(n: usize) -> Self {
        CircuitBuilder {
            n,
            prologue: Segment::default(),
            steps: Vec::new(),
            slot_names: Vec::new(),
        }
    }

    fn current(&mut self) -> &mut Segment {
        match self.steps.last_mut() {
            Some(s) => &mut s.segment,
            None => &mut self.prologue,
        }
    }

    pub fn gate(&mut self, gate: CliffordGate) -> Result<&mut Self> {
        if gate.max_qubit() >= self.n {
            return Err(Error::QubitOutOfRange { qubit: gate.max_qubit(), n: self.n });
        }
        let seg = self.current();
        if seg.channel.is_some() && seg.position == ChannelPosition::After {
            return Err(Error::InvalidArgument(
                "gate follows a channel that already closes this Clifford layer".into(),
            ));
        }
        seg.layer.push(gate);
        Ok(self)
    }

    pub fn channel(&mut self, map: ChannelEigenvalueMap) -> Result<&mut Self> {
        map.check_range(self.n)?;
        let seg = self.current();
        let position = if seg.layer.is_empty() {
            ChannelPosition::Before
        } else {
            ChannelPosition::After
        };
        match &mut seg.channel {
            Some(existing) if seg.position == position => existing.extend(map),
            Some(_) => {
                return Err(Error::InvalidArgument(
                    "a layer may carry a channel on one side only".into(),
                ))
            }
            None => {
                seg.channel = Some(map);
                seg.position = position;
            }
        }
        Ok(self)
    }

    /// Rotation bound to a named slot; names map to slots in first-use order.
    pub fn rz_named(&mut self, qubit: usize, name: &str, noise: LocalPauliNoise) -> Result<&mut Self> {
        let slot = match self.slot_names.iter().position(|s| s == name) {
            Some(k) => k,
            None => {
                self.slot_names.push(name.to_string());
                self.slot_names.len() - 1
            }
        };
        self.push_rotation(ParamRotation { qubit, slot, noise })
    }

    /// Rotation with a fresh slot of its own.
    pub fn rz(&mut self, qubit: usize, noise: LocalPauliNoise) -> Result<&mut Self> {
        let name = format!("theta{}", self.slot_names.len());
        self.rz_named(qubit, &name, noise)
    }

    fn push_rotation(&mut self, rotation: ParamRotation) -> Result<&mut Self> {
        if rotation.qubit >= self.n {
            return Err(Error::QubitOutOfRange { qubit: rotation.qubit, n: self.n });
        }
        self.steps.push(Step {
            rotation,
            segment: Segment::default(),
        });
        Ok(self)
    }

    pub fn build(self) -> Result<NoisyCircuit> {
        let mut c = NoisyCircuit::new(self.n, self.prologue, self.steps)?;
        c.slot_names = self.slot_names;
        Ok(c)
    }
}
