use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::TAU;

use super::SurrogateSeries;
use crate::error::{Error, Result};

/// L2 distance over the parameter torus from coefficients alone:
/// `sqrt(sum_omega 2^-|omega| (a_omega - b_omega)^2)`.
///
/// Only valid when the monomials are orthogonal, i.e. for injective
/// parameter maps; refuses otherwise.
pub fn parseval_distance(a: &SurrogateSeries, b: &SurrogateSeries) -> Result<f64> {
    if !a.meta().is_injective() || !b.meta().is_injective() {
        return Err(Error::NonInjective("Parseval distance"));
    }
    if a.meta().m != b.meta().m || a.meta().slots != b.meta().slots {
        return Err(Error::DimensionMismatch {
            expected: a.meta().m,
            got: b.meta().m,
        });
    }
    let weighted = |w: usize, d: f64| d * d * 0.5f64.powi(w as i32);
    let mut sum = Neumaier::default();
    for (k, va) in a.iter() {
        sum.add(weighted(k.weight(), va - b.get(k).unwrap_or(0.0)));
    }
    for (k, vb) in b.iter() {
        if a.get(k).is_none() {
            sum.add(weighted(k.weight(), vb));
        }
    }
    Ok(sum.total().max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    /// Jackknife standard error of `estimate`.
    pub std_error: f64,
}

/// Monte-Carlo estimate of the L2 distance between two landscapes with
/// `theta` uniform on `[0, 2 pi)^dims`.
///
/// Sample `k` is drawn from a ChaCha stream keyed by `(seed, k)`, so the
/// result does not depend on how samples are scheduled across threads.
pub fn monte_carlo_distance<F, G>(f: F, g: G, dims: usize, samples: usize, seed: u64) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64]) -> f64 + Sync,
{
    if samples < 2 {
        return Err(Error::InvalidArgument("Monte-Carlo distance needs at least 2 samples".into()));
    }
    let sq: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let theta = sample_point(seed, k, dims);
            let diff = f(&theta) - g(&theta);
            diff * diff
        })
        .collect();

    let mut total = Neumaier::default();
    for &x in &sq {
        total.add(x);
    }
    let total = total.total();
    let n = samples as f64;
    let estimate = (total / n).max(0.0).sqrt();

    // leave-one-out replicates of sqrt(mean)
    let loo: Vec<f64> = sq.iter().map(|x| ((total - x) / (n - 1.0)).max(0.0).sqrt()).collect();
    let mut mean = Neumaier::default();
    loo.iter().for_each(|&v| mean.add(v));
    let mean = mean.total() / n;
    let mut ss = Neumaier::default();
    loo.iter().for_each(|&v| ss.add((v - mean) * (v - mean)));
    let std_error = ((n - 1.0) / n * ss.total()).sqrt();
    Ok(McEstimate { estimate, std_error })
}

pub(crate) fn sample_point(seed: u64, index: u64, dims: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..dims).map(|_| rng.random::<f64>() * TAU).collect()
}

/// Compensated summation.
#[derive(Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}
