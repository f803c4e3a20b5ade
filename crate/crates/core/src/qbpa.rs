//! Quantum basic probability assignments.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::amplitude::QuantumAmplitude;
use crate::error::{Error, Result, Violation};
use crate::frame::{Frame, Proposition};

/// Tolerance for QBPAs produced by this crate.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Tolerance for hand-transcribed inputs printed to four decimals.
pub const TRANSCRIBED_TOLERANCE: f64 = 1e-2;

/// A quantum mass function: complex amplitudes on the propositions of a
/// frame, with `Σ ψ² = 1` once validated. Missing propositions carry zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Qbpa {
    frame: Frame,
    masses: BTreeMap<Proposition, QuantumAmplitude>,
}

impl Qbpa {
    pub fn empty(frame: Frame) -> Self {
        Self {
            frame,
            masses: BTreeMap::new(),
        }
    }

    pub fn from_entries<I>(frame: Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Proposition, QuantumAmplitude)>,
    {
        let mut q = Self::empty(frame);
        for (p, a) in entries {
            q.insert(p, a)?;
        }
        Ok(q)
    }

    /// Total ignorance: unit real amplitude on the universal set.
    pub fn vacuous(frame: Frame) -> Self {
        let mut masses = BTreeMap::new();
        masses.insert(frame.universe(), QuantumAmplitude::ONE);
        Self { frame, masses }
    }

    /// Sets the amplitude of `p`, replacing any previous value.
    pub fn insert(&mut self, p: Proposition, a: QuantumAmplitude) -> Result<()> {
        self.frame.check(p)?;
        self.masses.insert(p, a);
        Ok(())
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn get(&self, p: Proposition) -> QuantumAmplitude {
        self.masses.get(&p).copied().unwrap_or(QuantumAmplitude::ZERO)
    }

    /// Stored entries in increasing mask order, explicit zeros included.
    pub fn iter(&self) -> impl Iterator<Item = (Proposition, QuantumAmplitude)> + '_ {
        self.masses.iter().map(|(&p, &a)| (p, a))
    }

    /// Entries with nonzero amplitude.
    pub fn focal(&self) -> impl Iterator<Item = (Proposition, QuantumAmplitude)> + '_ {
        self.iter().filter(|(_, a)| !a.is_zero())
    }

    pub fn modulus_sum(&self) -> f64 {
        self.masses.values().map(|a| a.modulus()).sum()
    }

    pub fn validate(&self, tol: f64) -> std::result::Result<(), Violation> {
        let modulus_sum = self.modulus_sum();
        let offending: Vec<Proposition> = self
            .iter()
            .filter(|(p, a)| !a.is_finite() || (p.is_empty() && !a.is_zero()))
            .map(|(p, _)| p)
            .collect();
        if offending.is_empty() && (modulus_sum - 1.0).abs() <= tol {
            Ok(())
        } else {
            Err(Violation {
                modulus_sum,
                tolerance: tol,
                offending,
            })
        }
    }

    /// ψ² of every stored nonempty proposition.
    pub fn modulus_distribution(&self) -> BTreeMap<Proposition, f64> {
        self.iter()
            .filter(|(p, _)| !p.is_empty())
            .map(|(p, a)| (p, a.modulus()))
            .collect()
    }

    /// Rescales every amplitude by the one real factor `√(1 / Σψ²)`, so the
    /// moduli sum to one and every phase is untouched.
    pub fn normalize_moduli(&self) -> Result<Self> {
        let total = self.modulus_sum();
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::ZeroMass);
        }
        let factor = total.sqrt().recip();
        Ok(self.map_amplitudes(|a| a.scale_real(factor)))
    }

    pub fn map_amplitudes(&self, f: impl Fn(QuantumAmplitude) -> QuantumAmplitude) -> Self {
        Self {
            frame: self.frame.clone(),
            masses: self.masses.iter().map(|(&p, &a)| (p, f(a))).collect(),
        }
    }

    pub fn ensure_same_frame(&self, other: &Qbpa) -> Result<()> {
        if self.frame == other.frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    /// Largest componentwise difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &Qbpa) -> f64 {
        self.masses
            .keys()
            .chain(other.masses.keys())
            .map(|&p| self.get(p).abs_diff(other.get(p)))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Qbpa, tol: f64) -> bool {
        self.frame == other.frame && self.max_abs_diff(other) <= tol
    }
}

/// Explicit zero entries do not count.
impl PartialEq for Qbpa {
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame
            && self
                .masses
                .keys()
                .chain(other.masses.keys())
                .all(|&p| self.get(p) == other.get(p))
    }
}

/// Reliability judgement over `[Y, N]`. `{Y}` backs the first-dimension
/// evidence, `{N}` rejects it, `{Y, N}` is undecided.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Qbpa", into = "Qbpa")]
pub struct ReliabilityQbpa(Qbpa);

impl ReliabilityQbpa {
    pub const YES: Proposition = Proposition::from_mask(0b01);
    pub const NO: Proposition = Proposition::from_mask(0b10);
    pub const UNDECIDED: Proposition = Proposition::from_mask(0b11);

    pub fn frame() -> Frame {
        Frame::new(["Y", "N"]).expect("static frame")
    }

    pub fn new(yes: QuantumAmplitude, no: QuantumAmplitude, undecided: QuantumAmplitude) -> Self {
        let mut masses = BTreeMap::new();
        masses.insert(Self::YES, yes);
        masses.insert(Self::NO, no);
        masses.insert(Self::UNDECIDED, undecided);
        ReliabilityQbpa(Qbpa {
            frame: Self::frame(),
            masses,
        })
    }

    /// Fully trusted: `{Y} ↦ 1`.
    pub fn trusted() -> Self {
        Self::new(
            QuantumAmplitude::ONE,
            QuantumAmplitude::ZERO,
            QuantumAmplitude::ZERO,
        )
    }

    pub fn yes(&self) -> QuantumAmplitude {
        self.0.get(Self::YES)
    }

    pub fn no(&self) -> QuantumAmplitude {
        self.0.get(Self::NO)
    }

    pub fn undecided(&self) -> QuantumAmplitude {
        self.0.get(Self::UNDECIDED)
    }

    pub fn as_qbpa(&self) -> &Qbpa {
        &self.0
    }
}

impl TryFrom<Qbpa> for ReliabilityQbpa {
    type Error = Error;

    fn try_from(q: Qbpa) -> Result<Self> {
        if q.frame != Self::frame() {
            return Err(Error::NotReliabilityFrame(q.frame.labels().to_vec()));
        }
        Ok(ReliabilityQbpa(q))
    }
}

impl From<ReliabilityQbpa> for Qbpa {
    fn from(r: ReliabilityQbpa) -> Self {
        r.0
    }
}
