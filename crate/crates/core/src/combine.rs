//! Quantum Dempster combination.
//!
//! Two QBPAs are combined by summing the complex products `Q₁(B)·Q₂(C)` of
//! every focal pair into `B ∩ C`. Pairs with an empty intersection sum to the
//! conflict coefficient `K`; the rest are divided by the real scalar
//! `1 − |K|` (with `|K|` the squared magnitude) and renormalized so the
//! moduli sum to one. Sequences are combined as a strict left fold; the rule
//! is commutative but not associative.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::amplitude::QuantumAmplitude;
use crate::error::{Error, Result};
use crate::frame::Proposition;
use crate::qbpa::Qbpa;

pub const DEFAULT_CONFLICT_EPSILON: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConflictReport {
    /// Complex sum over disjoint focal pairs.
    pub k: QuantumAmplitude,
    /// `|K|` as ψ², the value used in the denominator.
    pub k_modulus: f64,
    /// Euclidean `|K|`, recorded for comparison only.
    pub k_magnitude: f64,
    /// `1 − k_modulus`. May be negative: ψ² of a complex sum is not bounded
    /// by one.
    pub denominator: f64,
}

impl ConflictReport {
    fn from_k(k: QuantumAmplitude) -> Self {
        let k_modulus = k.modulus();
        Self {
            k,
            k_modulus,
            k_magnitude: k.psi(),
            denominator: 1.0 - k_modulus,
        }
    }
}

/// Result of a pairwise combination together with its conflict.
#[derive(Clone, Debug)]
pub struct Combined {
    pub result: Qbpa,
    pub conflict: ConflictReport,
}

/// Result of folding a sequence; `steps[i]` is the conflict met when adding
/// evidence `i + 1`.
#[derive(Clone, Debug)]
pub struct FoldOutcome {
    pub result: Qbpa,
    pub steps: Vec<ConflictReport>,
}

#[derive(Clone, Copy, Debug)]
pub struct Combiner {
    pub epsilon: f64,
}

impl Default for Combiner {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_CONFLICT_EPSILON,
        }
    }
}

/// Products over focal pairs, split into intersections and conflict.
/// Summation runs in increasing mask order of `q1`, then of `q2`.
fn pair_products(q1: &Qbpa, q2: &Qbpa) -> (BTreeMap<Proposition, QuantumAmplitude>, QuantumAmplitude) {
    let mut joint: BTreeMap<Proposition, QuantumAmplitude> = BTreeMap::new();
    let mut k = QuantumAmplitude::ZERO;
    for (b, qb) in q1.focal().filter(|(p, _)| !p.is_empty()) {
        for (c, qc) in q2.focal().filter(|(p, _)| !p.is_empty()) {
            let product = qb * qc;
            let a = b.intersection(c);
            if a.is_empty() {
                k += product;
            } else {
                *joint.entry(a).or_insert(QuantumAmplitude::ZERO) += product;
            }
        }
    }
    (joint, k)
}

pub fn conflict_coefficient(q1: &Qbpa, q2: &Qbpa) -> Result<ConflictReport> {
    q1.ensure_same_frame(q2)?;
    Ok(ConflictReport::from_k(pair_products(q1, q2).1))
}

impl Combiner {
    pub fn new(epsilon: f64) -> Self {
        Self { epsilon }
    }

    fn pair_at(&self, q1: &Qbpa, q2: &Qbpa, step: usize) -> Result<Combined> {
        q1.ensure_same_frame(q2)?;
        let (joint, k) = pair_products(q1, q2);
        let conflict = ConflictReport::from_k(k);
        if conflict.denominator.is_nan() || conflict.denominator.abs() < self.epsilon {
            return Err(Error::TotalConflict {
                step,
                denominator: conflict.denominator,
            });
        }
        let scale = conflict.denominator.recip();
        let raw = Qbpa::from_entries(
            q1.frame().clone(),
            joint.into_iter().map(|(a, amp)| (a, amp.scale_real(scale))),
        )?;
        let result = raw.normalize_moduli().map_err(|_| Error::TotalConflict {
            step,
            denominator: conflict.denominator,
        })?;
        Ok(Combined { result, conflict })
    }

    pub fn pair(&self, q1: &Qbpa, q2: &Qbpa) -> Result<Combined> {
        self.pair_at(q1, q2, 1)
    }

    pub fn fold(&self, qs: &[Qbpa]) -> Result<FoldOutcome> {
        let (first, rest) = qs.split_first().ok_or(Error::NoEvidence)?;
        let mut acc = first.clone();
        let mut steps = Vec::with_capacity(rest.len());
        for (i, q) in rest.iter().enumerate() {
            let Combined { result, conflict } = self.pair_at(&acc, q, i + 1)?;
            acc = result;
            steps.push(conflict);
        }
        Ok(FoldOutcome { result: acc, steps })
    }
}

pub fn combine_pair(q1: &Qbpa, q2: &Qbpa) -> Result<Qbpa> {
    Combiner::default().pair(q1, q2).map(|c| c.result)
}

pub fn combine_sequence(qs: &[Qbpa]) -> Result<Qbpa> {
    Combiner::default().fold(qs).map(|f| f.result)
}
