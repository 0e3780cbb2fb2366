//! Dynamical-decoupling pulse timing patterns.
//!
//! A sequence is a list of pi-pulse positions expressed as fractions
//! delta_j of the total free evolution time tau, strictly increasing and
//! inside (0, 1). Pulses are instantaneous; only their timing matters for
//! the pure-dephasing filter.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Named timing families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    /// Bare free evolution between the two pi/2-pulses (N = 0).
    Ramsey,
    /// Single refocusing pulse at tau/2.
    Echo,
    /// Uniform partition: delta_j = j/(N+1).
    Pdd,
    /// Uhrig timing: delta_j = sin^2(pi j / (2N+2)).
    Udd,
    /// Carr-Purcell-Meiboom-Gill: delta_j = (2j-1)/(2N), half-length
    /// first and last intervals.
    Cpmg,
    /// Mirror-symmetric five-pulse family parameterized by interval
    /// fractions (tau0, tau1, tau2).
    Symmetric5,
    /// Explicit fraction list.
    Custom,
}

impl std::fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SequenceKind::Ramsey => "ramsey",
            SequenceKind::Echo => "echo",
            SequenceKind::Pdd => "pdd",
            SequenceKind::Udd => "udd",
            SequenceKind::Cpmg => "cpmg",
            SequenceKind::Symmetric5 => "symmetric5",
            SequenceKind::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Pi-pulse positions as fractions of the free evolution window.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "SequenceRecord")]
pub struct PulseSequence {
    kind: SequenceKind,
    fractions: Vec<f64>,
}

/// Serialized form of a [`PulseSequence`]: `{type, n, fractions}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceRecord {
    #[serde(rename = "type")]
    pub kind: SequenceKind,
    pub n: usize,
    pub fractions: Vec<f64>,
}

impl From<PulseSequence> for SequenceRecord {
    fn from(seq: PulseSequence) -> Self {
        SequenceRecord {
            kind: seq.kind,
            n: seq.fractions.len(),
            fractions: seq.fractions,
        }
    }
}

impl TryFrom<SequenceRecord> for PulseSequence {
    type Error = Error;
    fn try_from(rec: SequenceRecord) -> Result<Self> {
        if rec.n != rec.fractions.len() {
            return Err(Error::invalid(format!(
                "sequence record: n = {} but {} fractions given",
                rec.n,
                rec.fractions.len()
            )));
        }
        validate_fractions(&rec.fractions)?;
        Ok(PulseSequence { kind: rec.kind, fractions: rec.fractions })
    }
}

impl<'de> Deserialize<'de> for PulseSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = SequenceRecord::deserialize(d)?;
        PulseSequence::try_from(rec).map_err(serde::de::Error::custom)
    }
}

fn validate_fractions(fractions: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for (j, &d) in fractions.iter().enumerate() {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::invalid(format!(
                "pulse fraction delta_{} = {d} outside (0, 1)",
                j + 1
            )));
        }
        if d <= prev {
            return Err(Error::invalid(format!(
                "pulse fractions not strictly increasing at delta_{}",
                j + 1
            )));
        }
        prev = d;
    }
    Ok(())
}

impl PulseSequence {
    /// Bare Ramsey free evolution: no refocusing pulses.
    pub fn ramsey() -> Self {
        PulseSequence { kind: SequenceKind::Ramsey, fractions: Vec::new() }
    }

    /// Spin echo: one pulse at tau/2.
    pub fn echo() -> Self {
        PulseSequence { kind: SequenceKind::Echo, fractions: vec![0.5] }
    }

    /// Uhrig sequence, delta_j = sin^2(pi j / (2n+2)).
    ///
    /// The upper half is built by mirroring the lower half so that
    /// delta_j + delta_{n+1-j} = 1 holds exactly in floating point
    /// (mathematically it already does: sin^2 x + cos^2 x = 1).
    pub fn udd(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("udd requires n >= 1 (use ramsey for n = 0)"));
        }
        let mut fractions = vec![0.0; n];
        for j in 1..=n.div_ceil(2) {
            let d = if 2 * j == n + 1 {
                0.5
            } else {
                let s = (std::f64::consts::PI * j as f64 / (2 * n + 2) as f64).sin();
                s * s
            };
            fractions[j - 1] = d;
            fractions[n - j] = 1.0 - d;
        }
        Ok(PulseSequence { kind: SequenceKind::Udd, fractions })
    }

    /// Periodic sequence, delta_j = j/(n+1): n+1 equal free-evolution
    /// intervals.
    pub fn pdd(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("pdd requires n >= 1 (use ramsey for n = 0)"));
        }
        let fractions = (1..=n).map(|j| j as f64 / (n + 1) as f64).collect();
        Ok(PulseSequence { kind: SequenceKind::Pdd, fractions })
    }

    /// CPMG sequence, delta_j = (2j-1)/(2n).
    pub fn cpmg(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cpmg requires n >= 1 (use ramsey for n = 0)"));
        }
        let fractions = (1..=n).map(|j| (2 * j - 1) as f64 / (2 * n) as f64).collect();
        Ok(PulseSequence { kind: SequenceKind::Cpmg, fractions })
    }

    /// Mirror-symmetric five-pulse sequence from interval fractions.
    pub fn symmetric5(t: SymmetricFiveTiming) -> Result<Self> {
        let SymmetricFiveTiming { tau0_frac: t0, tau1_frac: t1, tau2_frac: t2 } = t;
        let fractions = vec![t0, t0 + t1, t0 + t1 + t2, 1.0 - t0 - t1, 1.0 - t0];
        validate_fractions(&fractions)?;
        Ok(PulseSequence { kind: SequenceKind::Symmetric5, fractions })
    }

    /// Sequence from an explicit fraction list.
    pub fn custom(fractions: Vec<f64>) -> Result<Self> {
        validate_fractions(&fractions)?;
        let kind = if fractions.is_empty() { SequenceKind::Ramsey } else { SequenceKind::Custom };
        Ok(PulseSequence { kind, fractions })
    }

    /// Build a named family member; `Ramsey` ignores `n`.
    pub fn build(kind: SequenceKind, n: usize) -> Result<Self> {
        match kind {
            SequenceKind::Ramsey => Ok(Self::ramsey()),
            SequenceKind::Echo => Ok(Self::echo()),
            SequenceKind::Pdd => Self::pdd(n),
            SequenceKind::Udd => Self::udd(n),
            SequenceKind::Cpmg => Self::cpmg(n),
            SequenceKind::Symmetric5 | SequenceKind::Custom => Err(Error::invalid(
                "symmetric5/custom sequences need explicit timings, not (kind, n)",
            )),
        }
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn n_pulses(&self) -> usize {
        self.fractions.len()
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    /// The n+1 free-evolution gaps [d1, d2-d1, ..., 1-dn]; they sum to 1.
    pub fn intervals(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.fractions.len() + 1);
        let mut prev = 0.0;
        for &d in &self.fractions {
            out.push(d - prev);
            prev = d;
        }
        out.push(1.0 - prev);
        out
    }

    /// delta_j + delta_{n+1-j} = 1 within `tol` for all j.
    pub fn is_mirror_symmetric(&self, tol: f64) -> bool {
        let n = self.fractions.len();
        (0..n).all(|j| (self.fractions[j] + self.fractions[n - 1 - j] - 1.0).abs() <= tol)
    }

    /// Positions reversed in time: delta_j -> 1 - delta_{n+1-j}.
    pub fn reversed(&self) -> Self {
        let fractions: Vec<f64> = self.fractions.iter().rev().map(|d| 1.0 - d).collect();
        PulseSequence { kind: SequenceKind::Custom, fractions }
    }

    pub fn to_record(&self) -> SequenceRecord {
        self.clone().into()
    }
}

/// Interval fractions (tau0, tau1, tau2) of the symmetric five-pulse
/// family; tau0 + tau1 + tau2 = tau/2 by reflection symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricFiveTiming {
    pub tau0_frac: f64,
    pub tau1_frac: f64,
    pub tau2_frac: f64,
}

impl SymmetricFiveTiming {
    pub const SUM_TOL: f64 = 1e-12;

    pub fn new(tau0_frac: f64, tau1_frac: f64, tau2_frac: f64) -> Result<Self> {
        if tau0_frac <= 0.0 || tau1_frac <= 0.0 || tau2_frac <= 0.0 {
            return Err(Error::invalid(format!(
                "symmetric5 interval fractions must be positive, got ({tau0_frac}, {tau1_frac}, {tau2_frac})"
            )));
        }
        let sum = tau0_frac + tau1_frac + tau2_frac;
        if (sum - 0.5).abs() > Self::SUM_TOL {
            return Err(Error::invalid(format!(
                "symmetric5 interval fractions must sum to 0.5, got {sum}"
            )));
        }
        Ok(SymmetricFiveTiming { tau0_frac, tau1_frac, tau2_frac })
    }

    /// Construct from the two free parameters, tau0 = 0.5 - tau1 - tau2.
    pub fn from_tau12(tau1_frac: f64, tau2_frac: f64) -> Result<Self> {
        Self::new(0.5 - tau1_frac - tau2_frac, tau1_frac, tau2_frac)
    }
}
