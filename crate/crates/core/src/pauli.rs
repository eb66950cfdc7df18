//! Signed Pauli strings in binary symplectic form, local Pauli noise and
//! Pauli-channel eigenvalue tables.
//!
//! Paulis are kept unnormalized throughout: the expectation of `P` in
//! `|0...0>` is `sign` when every component is `I` or `Z` and zero otherwise.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Single-qubit Pauli. The discriminant is the base-4 label used by lookup
/// tables and by the dense oracle (`I=0, X=1, Y=2, Z=3`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum LocalPauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl LocalPauli {
    pub const ALL: [LocalPauli; 4] = [LocalPauli::I, LocalPauli::X, LocalPauli::Y, LocalPauli::Z];

    #[inline]
    pub fn code(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_code(code: usize) -> LocalPauli {
        Self::ALL[code & 3]
    }

    /// `(x, z)` symplectic bits.
    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            LocalPauli::I => (false, false),
            LocalPauli::X => (true, false),
            LocalPauli::Y => (true, true),
            LocalPauli::Z => (false, true),
        }
    }

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> LocalPauli {
        match (x, z) {
            (false, false) => LocalPauli::I,
            (true, false) => LocalPauli::X,
            (true, true) => LocalPauli::Y,
            (false, true) => LocalPauli::Z,
        }
    }

    pub fn as_char(self) -> char {
        ['I', 'X', 'Y', 'Z'][self.code()]
    }

    pub fn from_char(c: char) -> Option<LocalPauli> {
        match c {
            'I' => Some(LocalPauli::I),
            'X' => Some(LocalPauli::X),
            'Y' => Some(LocalPauli::Y),
            'Z' => Some(LocalPauli::Z),
            _ => None,
        }
    }
}

/// Hermitian n-qubit Pauli with a ±1 sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    negative: bool,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let words = n.div_ceil(64);
        PauliString {
            n,
            x: vec![0; words],
            z: vec![0; words],
            negative: false,
        }
    }

    pub fn from_locals(locals: &[LocalPauli], negative: bool) -> Self {
        let mut p = Self::identity(locals.len());
        for (q, &l) in locals.iter().enumerate() {
            p.set(q, l);
        }
        p.negative = negative;
        p
    }

    /// Single non-identity component `local` on qubit `q`.
    pub fn single(n: usize, q: usize, local: LocalPauli) -> Result<Self> {
        if q >= n {
            return Err(Error::QubitOutOfRange { qubit: q, n });
        }
        let mut p = Self::identity(n);
        p.set(q, local);
        Ok(p)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_negative(&self) -> bool {
        self.negative
    }

    #[inline]
    pub fn sign(&self) -> f64 {
        if self.negative {
            -1.0
        } else {
            1.0
        }
    }

    #[inline]
    pub fn flip_sign(&mut self) {
        self.negative = !self.negative;
    }

    pub fn set_negative(&mut self, negative: bool) {
        self.negative = negative;
    }

    /// Component on qubit `q`, checked.
    pub fn component_at(&self, q: usize) -> Result<LocalPauli> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
        }
        Ok(self.get(q))
    }

    #[inline]
    pub(crate) fn get(&self, q: usize) -> LocalPauli {
        debug_assert!(q < self.n);
        let (w, b) = (q / 64, q % 64);
        LocalPauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    #[inline]
    pub(crate) fn set(&mut self, q: usize, local: LocalPauli) {
        debug_assert!(q < self.n);
        let (w, b) = (q / 64, q % 64);
        let (x, z) = local.bits();
        let mask = 1u64 << b;
        self.x[w] = (self.x[w] & !mask) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !mask) | ((z as u64) << b);
    }

    pub fn locals(&self) -> impl Iterator<Item = LocalPauli> + '_ {
        (0..self.n).map(|q| self.get(q))
    }

    /// Number of non-identity components.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// No `X`/`Y` component anywhere.
    #[inline]
    pub fn is_diagonal(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    /// `tr(P |0...0><0...0|)` for the unnormalized signed Pauli.
    #[inline]
    pub fn zero_state_expectation(&self) -> f64 {
        if self.is_diagonal() {
            self.sign()
        } else {
            0.0
        }
    }

    /// Base-4 index with qubit `q` as digit `q`, the dense oracle's layout.
    pub fn dense_index(&self) -> usize {
        self.locals()
            .enumerate()
            .map(|(q, l)| l.code() << (2 * q))
            .sum()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for l in self.locals() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        if body.is_empty() {
            return Err(Error::parse(0, format!("empty Pauli string {s:?}")));
        }
        let locals = body
            .chars()
            .map(|c| {
                LocalPauli::from_char(c)
                    .ok_or_else(|| Error::parse(0, format!("invalid Pauli character {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_locals(&locals, negative))
    }
}

/// Single-qubit Pauli channel `(1-px-py-pz) rho + px X rho X + py Y rho Y + pz Z rho Z`,
/// stored together with its PTM eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalPauliNoise {
    px: f64,
    py: f64,
    pz: f64,
    qx: f64,
    qy: f64,
    qz: f64,
}

impl Default for LocalPauliNoise {
    fn default() -> Self {
        Self::noiseless()
    }
}

impl LocalPauliNoise {
    pub fn new(px: f64, py: f64, pz: f64) -> Result<Self> {
        let ok = [px, py, pz].iter().all(|p| p.is_finite() && *p >= 0.0) && px + py + pz <= 1.0 + 1e-12;
        if !ok {
            return Err(Error::InvalidProbability { px, py, pz });
        }
        Ok(LocalPauliNoise {
            px,
            py,
            pz,
            qx: 1.0 - 2.0 * (pz + py),
            qy: 1.0 - 2.0 * (pz + px),
            qz: 1.0 - 2.0 * (px + py),
        })
    }

    pub fn noiseless() -> Self {
        LocalPauliNoise {
            px: 0.0,
            py: 0.0,
            pz: 0.0,
            qx: 1.0,
            qy: 1.0,
            qz: 1.0,
        }
    }

    pub fn dephasing(p: f64) -> Result<Self> {
        Self::new(0.0, 0.0, p)
    }

    /// `px = py = pz = p`.
    pub fn symmetric(p: f64) -> Result<Self> {
        Self::new(p, p, p)
    }

    pub fn probabilities(&self) -> (f64, f64, f64) {
        (self.px, self.py, self.pz)
    }

    pub fn eigenvalues(&self) -> (f64, f64, f64) {
        (self.qx, self.qy, self.qz)
    }

    #[inline]
    pub fn eigenvalue(&self, local: LocalPauli) -> f64 {
        match local {
            LocalPauli::I => 1.0,
            LocalPauli::X => self.qx,
            LocalPauli::Y => self.qy,
            LocalPauli::Z => self.qz,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.px == 0.0 && self.py == 0.0 && self.pz == 0.0
    }
}

/// One local factor of a product Pauli channel.
///
/// Two-qubit tables are indexed by `4 * code(first) + code(second)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelFactor {
    Single { qubit: usize, eig: [f64; 4] },
    Pair { qubits: (usize, usize), eig: [f64; 16] },
}

impl ChannelFactor {
    pub fn single(qubit: usize, eig: [f64; 4]) -> Result<Self> {
        check_table(&eig)?;
        Ok(ChannelFactor::Single { qubit, eig })
    }

    pub fn pair(a: usize, b: usize, eig: [f64; 16]) -> Result<Self> {
        if a == b {
            return Err(Error::RepeatedQubit(a));
        }
        check_table(&eig)?;
        Ok(ChannelFactor::Pair { qubits: (a, b), eig })
    }

    pub fn max_qubit(&self) -> usize {
        match self {
            ChannelFactor::Single { qubit, .. } => *qubit,
            ChannelFactor::Pair { qubits, .. } => qubits.0.max(qubits.1),
        }
    }

    #[inline]
    fn eigenvalue(&self, p: &PauliString) -> f64 {
        match self {
            ChannelFactor::Single { qubit, eig } => eig[p.get(*qubit).code()],
            ChannelFactor::Pair { qubits: (a, b), eig } => {
                eig[4 * p.get(*a).code() + p.get(*b).code()]
            }
        }
    }
}

fn check_table(eig: &[f64]) -> Result<()> {
    if eig[0] != 1.0 {
        return Err(Error::InvalidEigenvalue(format!(
            "identity eigenvalue must be exactly 1, got {}",
            eig[0]
        )));
    }
    if let Some(bad) = eig.iter().find(|v| !(v.is_finite() && (-1.0..=1.0).contains(*v))) {
        return Err(Error::InvalidEigenvalue(format!("eigenvalue {bad} outside [-1, 1]")));
    }
    Ok(())
}

/// Pauli channel as a product of at most two-qubit local channels; diagonal
/// in the Pauli basis.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChannelEigenvalueMap {
    factors: Vec<ChannelFactor>,
}

impl ChannelEigenvalueMap {
    pub fn new(factors: Vec<ChannelFactor>) -> Self {
        ChannelEigenvalueMap { factors }
    }

    pub fn factors(&self) -> &[ChannelFactor] {
        &self.factors
    }

    pub fn push(&mut self, factor: ChannelFactor) {
        self.factors.push(factor);
    }

    pub fn extend(&mut self, other: ChannelEigenvalueMap) {
        self.factors.extend(other.factors);
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Single-qubit Pauli channel given by its probabilities.
    pub fn local_noise(qubit: usize, noise: &LocalPauliNoise) -> Self {
        let (qx, qy, qz) = noise.eigenvalues();
        Self::new(vec![ChannelFactor::Single {
            qubit,
            eig: [1.0, qx, qy, qz],
        }])
    }

    pub fn dephasing(qubit: usize, p: f64) -> Result<Self> {
        Ok(Self::local_noise(qubit, &LocalPauliNoise::dephasing(p)?))
    }

    /// Depolarizing factor with eigenvalue `1 - eta` on `X`, `Y` and `Z`.
    pub fn depolarizing(qubit: usize, eta: f64) -> Result<Self> {
        if !(0.0..=4.0 / 3.0).contains(&eta) {
            return Err(Error::InvalidEigenvalue(format!("depolarizing rate {eta} outside [0, 4/3]")));
        }
        let q = 1.0 - eta;
        Ok(Self::new(vec![ChannelFactor::single(qubit, [1.0, q, q, q])?]))
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.iter().map(ChannelFactor::max_qubit).max()
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.max_qubit() {
            Some(q) if q >= n => Err(Error::QubitOutOfRange { qubit: q, n }),
            _ => Ok(()),
        }
    }

    /// Eigenvalue of the channel on `p` (the adjoint maps `p` to this
    /// multiple of itself).
    pub fn channel_attenuation(&self, p: &PauliString) -> Result<f64> {
        self.check_range(p.num_qubits())?;
        Ok(self.attenuation(p))
    }

    #[inline]
    pub(crate) fn attenuation(&self, p: &PauliString) -> f64 {
        self.factors.iter().map(|f| f.eigenvalue(p)).product()
    }
}
