#![allow(dead_code)]

use lowesa::{
    ChannelEigenvalueMap, ChannelFactor, CircuitBuilder, CliffordGate, GateKind, LocalPauli, LocalPauliNoise,
    NoisyCircuit, PauliString,
};
use rand::seq::IndexedRandom;
use rand::Rng;
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy)]
pub struct RandomSpec {
    pub n: usize,
    pub m: usize,
    /// Upper end of each rotation's `p_x, p_y, p_z`.
    pub p_max: f64,
    pub channels: bool,
    /// Probability that a rotation reuses an earlier slot.
    pub share: f64,
}

fn random_gate<R: Rng>(rng: &mut R, n: usize) -> CliffordGate {
    let kinds: Vec<GateKind> = GateKind::ALL.into_iter().filter(|k| k.arity() <= n).collect();
    let kind = *kinds.choose(rng).unwrap();
    if kind.arity() == 1 {
        CliffordGate::single(kind, rng.random_range(0..n)).unwrap()
    } else {
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        CliffordGate::two(kind, a, b).unwrap()
    }
}

fn random_channel<R: Rng>(rng: &mut R, n: usize) -> ChannelEigenvalueMap {
    let q = rng.random_range(0..n);
    if n >= 2 && rng.random_bool(0.3) {
        let b = (q + rng.random_range(1..n)) % n;
        let mut eig = [1.0; 16];
        for e in eig.iter_mut().skip(1) {
            *e = rng.random_range(-1.0..=1.0);
        }
        ChannelEigenvalueMap::new(vec![ChannelFactor::pair(q, b, eig).unwrap()])
    } else {
        ChannelEigenvalueMap::depolarizing(q, rng.random_range(0.0..0.2)).unwrap()
    }
}

fn random_layer<R: Rng>(rng: &mut R, b: &mut CircuitBuilder, spec: &RandomSpec, hadamards: bool) {
    let channel = spec.channels && rng.random_bool(0.3);
    let before = rng.random_bool(0.5);
    if channel && before {
        b.channel(random_channel(rng, spec.n)).unwrap();
    }
    if hadamards {
        for q in 0..spec.n {
            b.gate(CliffordGate::h(q)).unwrap();
        }
    }
    for _ in 0..rng.random_range(0..=3) {
        b.gate(random_gate(rng, spec.n)).unwrap();
    }
    if channel && !before {
        b.channel(random_channel(rng, spec.n)).unwrap();
    }
}

pub fn random_noise<R: Rng>(rng: &mut R, p_max: f64) -> LocalPauliNoise {
    let mut p = || if p_max > 0.0 { rng.random_range(0.0..=p_max) } else { 0.0 };
    LocalPauliNoise::new(p(), p(), p()).unwrap()
}

pub fn random_circuit<R: Rng>(rng: &mut R, spec: &RandomSpec) -> NoisyCircuit {
    let mut b = CircuitBuilder::new(spec.n);
    // H on every qubit first so the rotations act on something
    random_layer(rng, &mut b, spec, true);
    let mut names = 0usize;
    for _ in 0..spec.m {
        let q = rng.random_range(0..spec.n);
        let noise = random_noise(rng, spec.p_max);
        let name = if names > 0 && rng.random_bool(spec.share) {
            format!("s{}", rng.random_range(0..names))
        } else {
            names += 1;
            format!("s{}", names - 1)
        };
        b.rz_named(q, &name, noise).unwrap();
        random_layer(rng, &mut b, spec, false);
    }
    b.build().unwrap()
}

pub fn random_observable<R: Rng>(rng: &mut R, n: usize) -> PauliString {
    loop {
        let locals: Vec<LocalPauli> = (0..n).map(|_| LocalPauli::from_code(rng.random_range(0..4))).collect();
        if locals.iter().any(|&l| l != LocalPauli::I) {
            return PauliString::from_locals(&locals, rng.random_bool(0.5));
        }
    }
}

pub fn random_theta<R: Rng>(rng: &mut R, dims: usize) -> Vec<f64> {
    (0..dims).map(|_| rng.random_range(0.0..TAU)).collect()
}
