//! Truncated trigonometric series `g(theta) = sum_omega d_omega Phi_omega(theta)`
//! where `Phi_omega` multiplies `cos` (+1) or `sin` (-1) of each active
//! rotation's angle.

mod bounds;
mod distance;
mod format;

pub use bounds::{chebyshev_tail, theoretical_bound, ErrorBound, NoiseSummary};
pub use distance::{monte_carlo_distance, parseval_distance, McEstimate};

use std::collections::BTreeMap;

use crate::engine::FrequencyVector;
use crate::error::{Error, Result};

/// Coefficients with magnitude below this after merging are dropped.
pub const DUST: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMeta {
    pub n: usize,
    /// Number of rotations indexed by frequency vectors.
    pub m: usize,
    pub cutoff: usize,
    pub num_params: usize,
    pub observable: String,
    /// Rotation index -> parameter slot.
    pub slots: Vec<usize>,
}

impl SeriesMeta {
    pub fn is_injective(&self) -> bool {
        self.num_params == self.m
    }

    fn check(&self) -> Result<()> {
        if self.slots.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: self.slots.len(),
            });
        }
        let mut used = vec![false; self.num_params];
        for &s in &self.slots {
            if s >= self.num_params {
                return Err(Error::SlotOutOfRange { slot: s, dim: self.num_params });
            }
            used[s] = true;
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(Error::NonContiguousSlots { missing, dim: self.num_params });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateSeries {
    meta: SeriesMeta,
    terms: BTreeMap<FrequencyVector, f64>,
}

impl SurrogateSeries {
    /// Checks slot map, weights against the cutoff, indices against `m`
    /// and that every coefficient is finite and non-zero.
    pub fn new(meta: SeriesMeta, terms: BTreeMap<FrequencyVector, f64>) -> Result<Self> {
        meta.check()?;
        for (omega, d) in &terms {
            if omega.weight() > meta.cutoff {
                return Err(Error::InvalidArgument(format!(
                    "term {omega} has weight {} above cutoff {}",
                    omega.weight(),
                    meta.cutoff
                )));
            }
            if let Some(i) = omega.max_index().filter(|&i| i as usize >= meta.m) {
                return Err(Error::InvalidArgument(format!("term index {i} out of range for {} rotations", meta.m)));
            }
            if !d.is_finite() || *d == 0.0 {
                return Err(Error::InvalidArgument(format!("term {omega} has invalid coefficient {d}")));
            }
        }
        Ok(SurrogateSeries { meta, terms })
    }

    pub(crate) fn from_parts_unchecked(meta: SeriesMeta, terms: BTreeMap<FrequencyVector, f64>) -> Self {
        SurrogateSeries { meta, terms }
    }

    pub fn empty(meta: SeriesMeta) -> Result<Self> {
        Self::new(meta, BTreeMap::new())
    }

    pub fn meta(&self) -> &SeriesMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, omega: &FrequencyVector) -> Option<f64> {
        self.terms.get(omega).copied()
    }

    pub fn terms(&self) -> &BTreeMap<FrequencyVector, f64> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FrequencyVector, f64)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    /// Evaluates at one point; `theta` has one angle per parameter slot.
    pub fn evaluate(&self, theta: &[f64]) -> Result<f64> {
        if theta.len() != self.meta.num_params {
            return Err(Error::DimensionMismatch {
                expected: self.meta.num_params,
                got: theta.len(),
            });
        }
        let trig: Vec<(f64, f64)> = theta.iter().map(|t| t.sin_cos()).collect();
        Ok(self.evaluate_with(&trig))
    }

    fn evaluate_with(&self, trig: &[(f64, f64)]) -> f64 {
        let slots = &self.meta.slots;
        self.terms
            .iter()
            .map(|(omega, d)| {
                omega.entries().iter().fold(*d, |acc, &(i, v)| {
                    let (s, c) = trig[slots[i as usize]];
                    acc * if v > 0 { c } else { s }
                })
            })
            .sum()
    }

    /// Sub-series with `|omega| <= cutoff`.
    pub fn truncate(&self, cutoff: usize) -> SurrogateSeries {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.weight() <= cutoff)
            .map(|(k, v)| (k.clone(), *v))
            .collect();
        let meta = SeriesMeta {
            cutoff: cutoff.min(self.meta.cutoff),
            ..self.meta.clone()
        };
        SurrogateSeries { meta, terms }
    }

    /// `self += weight * other`, for observables given as weighted Pauli sums.
    pub fn add_scaled(&mut self, other: &SurrogateSeries, weight: f64) -> Result<()> {
        if other.meta.m != self.meta.m || other.meta.slots != self.meta.slots {
            return Err(Error::InvalidArgument("series belong to different circuits".into()));
        }
        self.meta.cutoff = self.meta.cutoff.max(other.meta.cutoff);
        for (k, v) in &other.terms {
            *self.terms.entry(k.clone()).or_insert(0.0) += weight * v;
        }
        self.terms.retain(|_, v| v.abs() >= DUST);
        Ok(())
    }

    /// Same coefficients under a different rotation-to-slot map.
    pub fn with_slot_map(&self, slots: Vec<usize>) -> Result<SurrogateSeries> {
        let meta = SeriesMeta {
            num_params: slots.iter().max().map_or(0, |&s| s + 1),
            slots,
            ..self.meta.clone()
        };
        meta.check()?;
        Ok(SurrogateSeries { meta, terms: self.terms.clone() })
    }

    pub fn set_observable(&mut self, description: impl Into<String>) {
        self.meta.observable = description.into();
    }

    /// Folds fixed angles into the coefficients.
    ///
    /// `fixed` lists `(slot, angle)` pairs. The result only indexes the
    /// remaining rotations and slots, both renumbered in order.
    pub fn bind_fixed(&self, fixed: &[(usize, f64)]) -> Result<SurrogateSeries> {
        let dim = self.meta.num_params;
        let mut bound: Vec<Option<(f64, f64)>> = vec![None; dim];
        for &(slot, angle) in fixed {
            if slot >= dim {
                return Err(Error::SlotOutOfRange { slot, dim });
            }
            bound[slot] = Some(angle.sin_cos());
        }
        let mut new_slot = vec![usize::MAX; dim];
        let mut next = 0;
        for (s, b) in bound.iter().enumerate() {
            if b.is_none() {
                new_slot[s] = next;
                next += 1;
            }
        }
        let mut new_index = vec![u32::MAX; self.meta.m];
        let mut slots = Vec::new();
        for (i, &s) in self.meta.slots.iter().enumerate() {
            if bound[s].is_none() {
                new_index[i] = slots.len() as u32;
                slots.push(new_slot[s]);
            }
        }

        let mut terms: BTreeMap<FrequencyVector, f64> = BTreeMap::new();
        for (omega, d) in &self.terms {
            let mut coeff = *d;
            let mut rest = Vec::with_capacity(omega.weight());
            for &(i, v) in omega.entries() {
                match bound[self.meta.slots[i as usize]] {
                    Some((s, c)) => coeff *= if v > 0 { c } else { s },
                    None => rest.push((new_index[i as usize], v)),
                }
            }
            *terms.entry(FrequencyVector::from_sorted_unchecked(rest)).or_insert(0.0) += coeff;
        }
        terms.retain(|_, v| v.abs() >= DUST);

        let meta = SeriesMeta {
            m: slots.len(),
            num_params: next,
            slots,
            ..self.meta.clone()
        };
        Ok(SurrogateSeries { meta, terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    pub(crate) fn meta(m: usize) -> SeriesMeta {
        SeriesMeta {
            n: 1,
            m,
            cutoff: m,
            num_params: m,
            observable: "+Z".into(),
            slots: (0..m).collect(),
        }
    }

    pub(crate) fn series(m: usize, terms: &[(&[(u32, i8)], f64)]) -> SurrogateSeries {
        let map = terms
            .iter()
            .map(|(e, d)| (FrequencyVector::new(e.to_vec()).unwrap(), *d))
            .collect();
        SurrogateSeries::new(meta(m), map).unwrap()
    }

    #[test]
    fn evaluate_basics() {
        let empty = SurrogateSeries::empty(meta(2)).unwrap();
        assert_eq!(empty.evaluate(&[0.3, 0.4]).unwrap(), 0.0);
        let s = series(1, &[(&[(0, 1)], 0.8)]);
        assert!((s.evaluate(&[PI / 3.0]).unwrap() - 0.4).abs() < 1e-15);
        let (a, b) = (0.3, -0.7);
        let s = series(1, &[(&[(0, 1)], a), (&[(0, -1)], b)]);
        for t in [0.0, 1.0, 4.0] {
            assert!((s.evaluate(&[t]).unwrap() - (a * f64::cos(t) + b * f64::sin(t))).abs() < 1e-15);
        }
        assert_eq!(
            s.evaluate(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        );
    }

    #[test]
    fn shared_slots_evaluate_through_map() {
        let mut m = meta(2);
        m.num_params = 1;
        m.slots = vec![0, 0];
        let terms = [(FrequencyVector::new(vec![(0, 1), (1, 1)]).unwrap(), 1.0)].into_iter().collect();
        let s = SurrogateSeries::new(m, terms).unwrap();
        let t: f64 = 0.9;
        assert!((s.evaluate(&[t]).unwrap() - t.cos().powi(2)).abs() < 1e-15);

        let free = series(2, &[(&[(0, 1), (1, 1)], 1.0)]);
        assert_eq!(free.with_slot_map(vec![0, 0]).unwrap(), s);
        assert!(free.with_slot_map(vec![0, 2]).is_err());
        assert!(free.with_slot_map(vec![0]).is_err());
    }

    #[test]
    fn construction_checks() {
        let mut m = meta(2);
        m.cutoff = 1;
        let heavy = [(FrequencyVector::new(vec![(0, 1), (1, 1)]).unwrap(), 0.5)].into_iter().collect();
        assert!(SurrogateSeries::new(m.clone(), heavy).is_err());
        let zero = [(FrequencyVector::constant(), 0.0)].into_iter().collect();
        assert!(SurrogateSeries::new(m.clone(), zero).is_err());
        let far = [(FrequencyVector::new(vec![(5, 1)]).unwrap(), 0.5)].into_iter().collect();
        assert!(SurrogateSeries::new(m.clone(), far).is_err());
        m.slots = vec![0, 2];
        assert!(SurrogateSeries::empty(m).is_err());
    }

    #[test]
    fn bind_examples() {
        let s = series(2, &[(&[(0, 1), (1, 1)], 0.5)]);
        let b = s.bind_fixed(&[(1, 0.0)]).unwrap();
        assert_eq!(b.meta().num_params, 1);
        assert_eq!(b.len(), 1);
        assert_eq!(b.get(&FrequencyVector::new(vec![(0, 1)]).unwrap()), Some(0.5));

        let s = series(2, &[(&[(1, -1)], 0.25)]);
        assert!(s.bind_fixed(&[(1, 0.0)]).unwrap().is_empty());

        // cos and sin terms on the bound slot merge into one constant-on-slot term
        let s = series(2, &[(&[(0, 1), (1, 1)], 0.5), (&[(0, 1), (1, -1)], 0.25)]);
        let phi = 0.6;
        let b = s.bind_fixed(&[(1, phi)]).unwrap();
        assert_eq!(b.len(), 1);
        for t in [0.0, 1.3, 2.9] {
            let want = s.evaluate(&[t, phi]).unwrap();
            assert!((b.evaluate(&[t]).unwrap() - want).abs() < 1e-15);
        }
        assert!(s.bind_fixed(&[(2, 0.0)]).is_err());
    }

    #[test]
    fn truncate_and_add() {
        let s = series(2, &[(&[], 0.1), (&[(0, 1)], 0.2), (&[(0, 1), (1, -1)], 0.3)]);
        let t = s.truncate(1);
        assert_eq!(t.len(), 2);
        assert_eq!(t.meta().cutoff, 1);
        let mut acc = s.clone();
        acc.add_scaled(&s, -1.0).unwrap();
        assert!(acc.is_empty());
        acc.add_scaled(&t, 2.0).unwrap();
        assert!((acc.evaluate(&[0.0, 0.0]).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn single_term_at_origin() {
        let cos = series(2, &[(&[(0, 1), (1, 1)], 0.7)]);
        let sin = series(2, &[(&[(0, 1), (1, -1)], 0.7)]);
        assert_eq!(cos.evaluate(&[0.0, 0.0]).unwrap(), 0.7);
        assert_eq!(sin.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
    }
}
