use crate::circuit::NoisyCircuit;
use crate::error::{Error, Result};

/// Worst-case rotation noise of a circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSummary {
    /// `min_i min(p_x^i, p_y^i)`
    pub p: f64,
    /// `min_i p_z^i`
    pub pz: f64,
    /// Depolarizing rate per primitive Clifford gate, 0 when unknown.
    pub eta: f64,
}

impl NoiseSummary {
    pub fn new(p: f64, pz: f64) -> Self {
        NoiseSummary { p, pz, eta: 0.0 }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    /// Minimum over all rotations; a rotation-free circuit yields zeros.
    pub fn from_circuit(c: &NoisyCircuit) -> Self {
        let mut it = c.steps().iter().map(|s| s.rotation.noise.probabilities()).peekable();
        if it.peek().is_none() {
            return NoiseSummary::new(0.0, 0.0);
        }
        let (p, pz) = it.fold((f64::INFINITY, f64::INFINITY), |(p, pz), (x, y, z)| {
            (p.min(x.min(y)), pz.min(z))
        });
        NoiseSummary::new(p, pz)
    }

    fn check(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !(ok(self.p) && ok(self.pz) && ok(self.eta)) {
            return Err(Error::InvalidArgument(format!("invalid noise summary {self:?}")));
        }
        if self.p == 0.0 && self.pz == 0.0 {
            return Err(Error::BoundVacuous);
        }
        Ok(())
    }

    /// `max(|q_x|, |q_y|)` for the worst rotation, `|1 - 2p - 2p_z|`.
    pub fn contraction(&self) -> f64 {
        (1.0 - 2.0 * self.p - 2.0 * self.pz).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBound {
    /// `|1 - 2p - 2p_z|^(l+1) (1 - eta)^(l+1)`
    pub tight: f64,
    /// `exp(-2 (p + p_z) l)`
    pub exponential: f64,
}

/// Upper bounds on the L2 truncation error at cutoff `cutoff`.
pub fn theoretical_bound(cutoff: usize, noise: &NoiseSummary) -> Result<ErrorBound> {
    noise.check()?;
    let k = cutoff as i32 + 1;
    Ok(ErrorBound {
        tight: noise.contraction().powi(k) * (1.0 - noise.eta).abs().powi(k),
        exponential: (-2.0 * (noise.p + noise.pz) * cutoff as f64).exp(),
    })
}

/// `(threshold, probability)`: with fixed angles drawn uniformly, the error
/// reaches `threshold = (1 + k) exp(-2 (p + p_z) l)` with probability at most `1/k^2`.
pub fn chebyshev_tail(k: f64, cutoff: usize, noise: &NoiseSummary) -> Result<(f64, f64)> {
    if k.is_nan() || k < 1.0 {
        return Err(Error::InvalidArgument(format!("Chebyshev factor k = {k} must be >= 1")));
    }
    let threshold = (1.0 + k) * (-2.0 * (noise.p + noise.pz) * cutoff as f64).exp();
    Ok((threshold, 1.0 / (k * k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closed_forms() {
        let b = theoretical_bound(0, &NoiseSummary::new(0.25, 0.25)).unwrap();
        assert_eq!(b.tight, 0.0);
        let b = theoretical_bound(10, &NoiseSummary::new(0.05, 0.0)).unwrap();
        assert!((b.tight - 0.9f64.powi(11)).abs() < 1e-15);
        assert!((b.tight - 0.31381).abs() < 1e-5);
        assert!((b.exponential - (-1.0f64).exp()).abs() < 1e-15);
        let b = theoretical_bound(3, &NoiseSummary::new(0.05, 0.0).with_eta(0.1)).unwrap();
        assert!((b.tight - 0.81f64.powi(4)).abs() < 1e-15);
    }

    #[test]
    fn vacuous_bound_is_refused() {
        assert_eq!(theoretical_bound(3, &NoiseSummary::new(0.0, 0.0)), Err(Error::BoundVacuous));
    }

    #[test]
    fn chebyshev_examples() {
        let noise = NoiseSummary::new(0.0, 0.1);
        assert_eq!(chebyshev_tail(2.0, 4, &noise).unwrap().1, 0.25);
        assert!((chebyshev_tail(10.0, 4, &noise).unwrap().1 - 0.01).abs() < 1e-15);
        assert_eq!(chebyshev_tail(1.0, 0, &noise).unwrap(), (2.0, 1.0));
        assert!(chebyshev_tail(0.5, 0, &noise).is_err());
    }

    #[test]
    fn high_noise_uses_magnitude() {
        // symmetric p = 0.3: q = 1 - 4p = -0.2
        let b = theoretical_bound(2, &NoiseSummary::new(0.3, 0.3)).unwrap();
        assert!((b.tight - 0.2f64.powi(3)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn tight_below_exponential(p in 0.0f64..0.5, frac in 0.0f64..1.0, cutoff in 0usize..200) {
            // (1 - x) <= e^-x termwise needs 1 - 2p - 2p_z >= 0
            let pz = frac * (0.5 - p);
            prop_assume!(p > 0.0 || pz > 0.0);
            let b = theoretical_bound(cutoff, &NoiseSummary::new(p, pz)).unwrap();
            prop_assert!(b.tight <= b.exponential * (1.0 + 1e-12));
        }
    }
}
