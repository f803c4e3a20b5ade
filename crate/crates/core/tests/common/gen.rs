//! proptest strategies for random frames, QBPAs and reliability judgements.

#![allow(dead_code)]

use std::f64::consts::PI;

use proptest::prelude::*;
use tdqmf_core::{Frame, Proposition, Qbpa, QuantumAmplitude, ReliabilityQbpa};

use super::{polar, Dense, Rel, ZERO};

pub fn frame(n: usize) -> Frame {
    Frame::new((0..n).map(|i| format!("h{i}"))).unwrap()
}

/// Polar entries for every nonempty subset of an `n`-frame; `None` leaves the
/// subset out. At least one subset is focal.
#[derive(Clone, Debug)]
pub struct RawQbpa {
    pub n: usize,
    pub entries: Vec<Option<(f64, f64)>>,
}

impl RawQbpa {
    pub fn build(&self) -> Qbpa {
        let entries = self.entries.iter().enumerate().filter_map(|(i, e)| {
            e.map(|(psi, theta)| {
                (
                    Proposition::from_mask(i as u32 + 1),
                    QuantumAmplitude::from_polar(psi, theta).unwrap(),
                )
            })
        });
        Qbpa::from_entries(frame(self.n), entries).unwrap()
    }

    pub fn dense(&self) -> Dense {
        let mut d = Dense::zero(self.n);
        for (i, e) in self.entries.iter().enumerate() {
            d.v[i + 1] = e.map_or(ZERO, |(psi, theta)| polar(psi, theta));
        }
        d
    }

    pub fn normalized(mut self) -> Self {
        let total: f64 = self.entries.iter().flatten().map(|(psi, _)| psi * psi).sum();
        let f = total.sqrt().recip();
        for e in self.entries.iter_mut().flatten() {
            e.0 *= f;
        }
        self
    }
}

fn entry(psi: std::ops::Range<f64>, zero_phase: bool) -> impl Strategy<Value = (f64, f64)> {
    let theta = if zero_phase {
        Just(0.0).boxed()
    } else {
        (-PI..PI).boxed()
    };
    (psi, theta)
}

/// A random body of evidence; `psi` bounds the magnitudes before any
/// normalization.
pub fn raw_qbpa(n: usize, psi: std::ops::Range<f64>, zero_phase: bool) -> impl Strategy<Value = RawQbpa> {
    let size = (1 << n) - 1;
    proptest::collection::vec(proptest::option::of(entry(psi, zero_phase)), size)
        .prop_filter("needs a focal element", |v| v.iter().any(Option::is_some))
        .prop_map(move |entries| RawQbpa { n, entries })
}

/// A normalized body of evidence on a frame of 2 to 4 hypotheses.
pub fn qbpa() -> impl Strategy<Value = RawQbpa> {
    (2usize..=4).prop_flat_map(|n| raw_qbpa(n, 0.05..1.0, false).prop_map(RawQbpa::normalized))
}

/// Two normalized bodies on the same frame.
pub fn qbpa_pair() -> impl Strategy<Value = (RawQbpa, RawQbpa)> {
    (2usize..=4).prop_flat_map(|n| {
        (
            raw_qbpa(n, 0.05..1.0, false).prop_map(RawQbpa::normalized),
            raw_qbpa(n, 0.05..1.0, false).prop_map(RawQbpa::normalized),
        )
    })
}

/// A normalized reliability judgement `(Y, N, YN)` in polar form.
pub fn reliability() -> impl Strategy<Value = [(f64, f64); 3]> {
    [
        entry(0.05..1.0, false),
        entry(0.05..1.0, false),
        entry(0.05..1.0, false),
    ]
    .prop_map(|mut r| {
        let total: f64 = r.iter().map(|(psi, _)| psi * psi).sum();
        for e in &mut r {
            e.0 /= total.sqrt();
        }
        r
    })
}

pub fn build_reliability(r: &[(f64, f64); 3]) -> ReliabilityQbpa {
    let [y, n, yn] = r.map(|(psi, theta)| QuantumAmplitude::from_polar(psi, theta).unwrap());
    ReliabilityQbpa::new(y, n, yn)
}

pub fn dense_reliability(r: &[(f64, f64); 3]) -> Rel {
    (
        polar(r[0].0, r[0].1),
        polar(r[1].0, r[1].1),
        polar(r[2].0, r[2].1),
    )
}
