//! Fluorescence state-readout statistics: photon-count histograms,
//! threshold assignment errors and detection fidelity.
//!
//! "Bright" is assigned when the count exceeds the threshold, so
//! xi_up = P(n <= n_th | up-prepared) and xi_down = P(n > n_th | down).

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Photon-number occurrence table for one prepared state.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DetectionHistogram {
    counts: BTreeMap<u32, u64>,
}

impl DetectionHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts<I: IntoIterator<Item = (u32, u64)>>(counts: I) -> Self {
        let mut h = Self::new();
        for (n, c) in counts {
            h.add(n, c);
        }
        h
    }

    /// Expected-count histogram of a Poisson distribution with the given
    /// mean, scaled to `total` events (for synthetic threshold studies).
    pub fn from_poisson(mean: f64, total: u64) -> Result<Self> {
        if !(mean >= 0.0) {
            return Err(Error::invalid("poisson mean must be >= 0"));
        }
        let mut h = Self::new();
        let mut remaining = total;
        let mut pmf = (-mean).exp();
        let mut cum = 0.0;
        let mut n = 0u32;
        loop {
            cum += pmf;
            let c = if cum >= 1.0 - 1e-15 {
                remaining
            } else {
                ((total as f64) * pmf).round() as u64
            };
            let c = c.min(remaining);
            if c > 0 {
                h.add(n, c);
                remaining -= c;
            }
            if remaining == 0 || (n as f64) > mean + 12.0 * mean.sqrt().max(3.0) {
                break;
            }
            n += 1;
            pmf *= mean / n as f64;
        }
        if remaining > 0 {
            h.add(n + 1, remaining);
        }
        Ok(h)
    }

    pub fn add(&mut self, n: u32, count: u64) {
        if count > 0 {
            *self.counts.entry(n).or_insert(0) += count;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn max_n(&self) -> Option<u32> {
        self.counts.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts.iter().map(|(&n, &c)| (n, c))
    }

    /// P(n <= n_th).
    pub fn cumulative_at_or_below(&self, n_th: u32) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        let below: u64 = self.counts.range(..=n_th).map(|(_, &c)| c).sum();
        below as f64 / total as f64
    }
}

/// Assignment error probabilities (xi_up, xi_down) at threshold `n_th`.
pub fn assignment_errors(
    h_up: &DetectionHistogram,
    h_down: &DetectionHistogram,
    n_th: u32,
) -> Result<(f64, f64)> {
    if h_up.total() == 0 || h_down.total() == 0 {
        return Err(Error::invalid("assignment_errors: histograms must be non-empty"));
    }
    let xi_up = h_up.cumulative_at_or_below(n_th);
    let xi_down = 1.0 - h_down.cumulative_at_or_below(n_th);
    Ok((xi_up, xi_down))
}

/// Detection fidelity F = 1 - (xi_up + xi_down)/2.
pub fn fidelity(xi_up: f64, xi_down: f64) -> f64 {
    1.0 - 0.5 * (xi_up + xi_down)
}

/// Exhaustive threshold scan; ties break toward the smaller threshold.
pub fn optimal_threshold(
    h_up: &DetectionHistogram,
    h_down: &DetectionHistogram,
) -> Result<(u32, f64)> {
    if h_up.total() == 0 || h_down.total() == 0 {
        return Err(Error::invalid("optimal_threshold: histograms must be non-empty"));
    }
    let n_max = h_up.max_n().unwrap_or(0).max(h_down.max_n().unwrap_or(0));
    let mut best = (0u32, f64::NEG_INFINITY);
    for n_th in 0..=n_max {
        let (xu, xd) = assignment_errors(h_up, h_down, n_th)?;
        let f = fidelity(xu, xd);
        if f > best.1 {
            best = (n_th, f);
        }
    }
    Ok(best)
}
