//! Brute-force references: dense Pauli-transfer-matrix simulation in the
//! real Pauli basis, exhaustive back-propagation, and numeric Fourier
//! projection on a uniform grid.

use std::f64::consts::TAU;

use crate::circuit::{ChannelPosition, NoisyCircuit, Segment};
use crate::clifford::tables;
use crate::engine::{backpropagate_with, BackpropConfig, FrequencyVector};
use crate::error::{Error, Result};
use crate::pauli::{ChannelEigenvalueMap, LocalPauli, PauliString};
use crate::surrogate::SurrogateSeries;

pub const MAX_DENSE_QUBITS: usize = 10;

/// Default explored-path budget for [`exact_series`].
pub const DEFAULT_PATH_BUDGET: u64 = 1 << 26;

/// State in the Pauli basis: component `k` is `tr(rho P_k)` with `P_k` the
/// Pauli whose base-4 digit `q` is its component on qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliVector {
    n: usize,
    coeffs: Vec<f64>,
}

impl PauliVector {
    /// `|0...0><0...0|`.
    pub fn zero_state(n: usize) -> Result<Self> {
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { n, max: MAX_DENSE_QUBITS });
        }
        let mut coeffs = vec![0.0; 1 << (2 * n)];
        // all labels built from I (0) and Z (3) digits
        for mask in 0usize..(1 << n) {
            let idx: usize = (0..n).filter(|q| mask >> q & 1 == 1).map(|q| 3 << (2 * q)).sum();
            coeffs[idx] = 1.0;
        }
        Ok(PauliVector { n, coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn identity_component(&self) -> f64 {
        self.coeffs[0]
    }

    #[inline]
    fn digit(idx: usize, q: usize) -> usize {
        (idx >> (2 * q)) & 3
    }

    #[inline]
    fn with_digit(idx: usize, q: usize, d: usize) -> usize {
        (idx & !(3 << (2 * q))) | (d << (2 * q))
    }

    fn apply_layer(&mut self, seg: &Segment) {
        let t = tables();
        for g in seg.layer.gates() {
            let table = t.forward_table(g.kind());
            let mut next = vec![0.0; self.coeffs.len()];
            for (idx, &v) in self.coeffs.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                let (img, neg) = match *g.qubits() {
                    [q] => {
                        let (img, neg) = table[Self::digit(idx, q)];
                        (Self::with_digit(idx, q, img as usize), neg)
                    }
                    [a, b] => {
                        let (img, neg) = table[4 * Self::digit(idx, a) + Self::digit(idx, b)];
                        let i = Self::with_digit(idx, a, (img >> 2) as usize);
                        (Self::with_digit(i, b, (img & 3) as usize), neg)
                    }
                    _ => unreachable!("gates act on one or two qubits"),
                };
                next[img] = if neg { -v } else { v };
            }
            self.coeffs = next;
        }
    }

    fn apply_channel(&mut self, map: &ChannelEigenvalueMap) {
        let mut p = PauliString::identity(self.n);
        for (idx, v) in self.coeffs.iter_mut().enumerate() {
            if *v == 0.0 {
                continue;
            }
            for q in 0..self.n {
                p.set(q, LocalPauli::from_code(Self::digit(idx, q)));
            }
            *v *= map.attenuation(&p);
        }
    }

    fn apply_segment(&mut self, seg: &Segment) {
        match (&seg.channel, seg.position) {
            (Some(ch), ChannelPosition::Before) => {
                self.apply_channel(ch);
                self.apply_layer(seg);
            }
            (Some(ch), ChannelPosition::After) => {
                self.apply_layer(seg);
                self.apply_channel(ch);
            }
            (None, _) => self.apply_layer(seg),
        }
    }

    /// Noisy `Rz(theta)`: rotation in the `(X, Y)` plane of qubit `q`, then
    /// the diagonal `(1, q_x, q_y, q_z)`.
    fn apply_rotation(&mut self, q: usize, theta: f64, eig: (f64, f64, f64)) {
        let (s, c) = theta.sin_cos();
        let (qx, qy, qz) = eig;
        let stride = 1usize << (2 * q);
        for idx in 0..self.coeffs.len() {
            match Self::digit(idx, q) {
                1 => {
                    let iy = idx + stride;
                    let (x, y) = (self.coeffs[idx], self.coeffs[iy]);
                    self.coeffs[idx] = qx * (c * x - s * y);
                    self.coeffs[iy] = qy * (s * x + c * y);
                }
                3 => self.coeffs[idx] *= qz,
                _ => {}
            }
        }
    }
}

/// `tr(obs U[|0><0|])` for the noisy circuit at `theta` (one angle per slot).
pub fn dense_simulate(c: &NoisyCircuit, theta: &[f64], obs: &PauliString) -> Result<f64> {
    if theta.len() != c.num_params() {
        return Err(Error::DimensionMismatch { expected: c.num_params(), got: theta.len() });
    }
    if obs.num_qubits() != c.num_qubits() {
        return Err(Error::DimensionMismatch { expected: c.num_qubits(), got: obs.num_qubits() });
    }
    let mut state = PauliVector::zero_state(c.num_qubits())?;
    state.apply_segment(c.prologue());
    for step in c.steps() {
        let r = &step.rotation;
        state.apply_rotation(r.qubit, theta[r.slot], r.noise.eigenvalues());
        state.apply_segment(&step.segment);
    }
    Ok(obs.sign() * state.coeffs[obs.dense_index()])
}

/// Untruncated series (cutoff `m`); fails rather than returning a partial
/// series when more than `budget` paths would be explored.
pub fn exact_series(c: &NoisyCircuit, obs: &PauliString, budget: u64) -> Result<SurrogateSeries> {
    let cfg = BackpropConfig::new(c.num_rotations()).path_budget(budget);
    backpropagate_with(c, obs, &cfg).map(|(s, _)| s)
}

/// Samples of a landscape on the uniform grid `{2 pi k / g}^dims`.
#[derive(Debug, Clone)]
pub struct FourierGrid {
    dims: usize,
    size: usize,
    values: Vec<f64>,
}

impl FourierGrid {
    /// Evaluates `f` at all `size^dims` grid points. Points are enumerated
    /// with dimension 0 varying fastest.
    pub fn sample<F: Fn(&[f64]) -> f64>(f: F, dims: usize, size: usize) -> Result<Self> {
        if size < 4 {
            return Err(Error::InvalidArgument(format!("grid size {size} below 4")));
        }
        let total = size
            .checked_pow(dims as u32)
            .filter(|&t| t <= 1 << 26)
            .ok_or_else(|| Error::InvalidArgument(format!("grid {size}^{dims} too large")))?;
        let step = TAU / size as f64;
        let mut theta = vec![0.0; dims];
        let values = (0..total)
            .map(|mut k| {
                for t in theta.iter_mut() {
                    *t = (k % size) as f64 * step;
                    k /= size;
                }
                f(&theta)
            })
            .collect();
        Ok(FourierGrid { dims, size, values })
    }

    /// `2^|omega|` times the grid mean of `f * Phi_omega`.
    pub fn project(&self, omega: &FrequencyVector) -> Result<f64> {
        if let Some(i) = omega.max_index().filter(|&i| i as usize >= self.dims) {
            return Err(Error::InvalidArgument(format!("frequency index {i} beyond {} dims", self.dims)));
        }
        let step = TAU / self.size as f64;
        let trig: Vec<(f64, f64)> = (0..self.size).map(|k| (k as f64 * step).sin_cos()).collect();
        let mut acc = 0.0;
        for (mut k, v) in self.values.iter().enumerate() {
            let mut basis = 1.0;
            let mut coords = [0usize; 64];
            for c in coords.iter_mut().take(self.dims) {
                *c = k % self.size;
                k /= self.size;
            }
            for &(i, w) in omega.entries() {
                let (s, c) = trig[coords[i as usize]];
                basis *= if w > 0 { c } else { s };
            }
            acc += v * basis;
        }
        Ok(acc / self.values.len() as f64 * 2f64.powi(omega.weight() as i32))
    }
}

/// Numeric Fourier coefficient of `f` over `dims` independent angles.
///
/// Exact for functions of degree at most one in each angle once `size >= 4`.
pub fn fourier_project<F: Fn(&[f64]) -> f64>(f: F, omega: &FrequencyVector, dims: usize, size: usize) -> Result<f64> {
    if dims > 64 {
        return Err(Error::InvalidArgument("at most 64 grid dimensions".into()));
    }
    FourierGrid::sample(f, dims, size)?.project(omega)
}

/// Dense-oracle landscape of a circuit with independent parameters.
pub fn circuit_projection(c: &NoisyCircuit, obs: &PauliString, omega: &FrequencyVector, size: usize) -> Result<f64> {
    if !c.is_injective() {
        return Err(Error::NonInjective("Fourier projection"));
    }
    let grid = FourierGrid::sample(
        |t| dense_simulate(c, t, obs).expect("dimensions checked"),
        c.num_params(),
        size,
    )?;
    grid.project(omega)
}
