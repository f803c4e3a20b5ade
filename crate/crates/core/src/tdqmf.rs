//! Two-dimensional quantum mass functions and the reliability-weighted
//! modification rule.
//!
//! A [`Tdqmf`] pairs domain evidence `Q₁` with a reliability judgement `Q₂`
//! over `{Y, N}`. [`Tdqmf::modify`] folds the judgement into `Q₁`:
//!
//! * singleton `xᵢ`: `(Q₁(xᵢ) + Σ_{X ∋ xᵢ, |X| ≥ 2} Q₁(X)/|X|)·Q₂(Y) + Σ_{A ∌ xᵢ} Q₁(A)·Q₂(N)`
//! * composite `X` with `2 ≤ |X| < n`: `(|X|² − |X|)/|X|² · Q₁(X)·Q₂(Y)`
//! * universal set `Θ`: `(n² − n)/n² · Q₁(Θ) + Q₂(YN)`
//!
//! where `n` is the frame size. The universal set is a composite like any
//! other for the singleton shares, so it hands `1/n` of itself to each
//! singleton. The output is not normalized.

use serde::{Deserialize, Serialize};

use crate::amplitude::QuantumAmplitude;
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::qbpa::{Qbpa, ReliabilityQbpa};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tdqmf {
    /// Domain evidence.
    pub original: Qbpa,
    /// Reliability of `original`.
    pub indicative: ReliabilityQbpa,
}

/// `(k² − k)/k²`, the share of a composite of size `k` it keeps.
fn retention(k: usize) -> f64 {
    let k = k as f64;
    (k * k - k) / (k * k)
}

impl Tdqmf {
    pub fn new(original: Qbpa, indicative: ReliabilityQbpa) -> Self {
        Self { original, indicative }
    }

    pub fn frame(&self) -> &Frame {
        self.original.frame()
    }

    pub fn modify(&self) -> Qbpa {
        let frame = self.frame();
        let q1 = &self.original;
        let yes = self.indicative.yes();
        let no = self.indicative.no();
        let n = frame.len();
        let mut out = Qbpa::empty(frame.clone());

        let focal: Vec<_> = q1.focal().filter(|(p, _)| !p.is_empty()).collect();

        for x in frame.singletons() {
            let mut support = q1.get(x);
            let mut against = QuantumAmplitude::ZERO;
            for &(a, amp) in &focal {
                if a.intersection(x).is_empty() {
                    against += amp;
                } else if a.cardinality() >= 2 {
                    support += amp.scale_real((a.cardinality() as f64).recip());
                }
            }
            insert(&mut out, x, support * yes + against * no);
        }

        // A one-singleton frame has no composites; its only proposition was
        // handled above as a singleton.
        if n >= 2 {
            for &(a, amp) in &focal {
                let k = a.cardinality();
                if k >= 2 && !frame.is_universe(a) {
                    insert(&mut out, a, (amp * yes).scale_real(retention(k)));
                }
            }
            let theta = frame.universe();
            let kept = q1.get(theta).scale_real(retention(n));
            insert(&mut out, theta, kept + self.indicative.undecided());
        }
        out
    }
}

fn insert(q: &mut Qbpa, p: crate::frame::Proposition, a: QuantumAmplitude) {
    q.insert(p, a).expect("proposition drawn from the same frame");
}

/// Modifies every evidence and normalizes each result.
pub fn modify_all(ts: &[Tdqmf]) -> Result<Vec<Qbpa>> {
    if let Some(first) = ts.first() {
        if ts.iter().any(|t| t.frame() != first.frame()) {
            return Err(Error::FrameMismatch);
        }
    }
    ts.iter().map(|t| t.modify().normalize_moduli()).collect()
}
