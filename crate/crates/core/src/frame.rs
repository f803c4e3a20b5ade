//! Frames of discernment and the subset algebra over them.
//!
//! A [`Frame`] is an ordered list of singleton labels. A [`Proposition`] is a
//! subset of a frame, stored as a bitmask where bit `i` stands for the
//! `i`-th label. The universal set is an ordinary proposition with every bit
//! of the frame set.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_FRAME_SIZE: usize = 32;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Frame {
    labels: Arc<[String]>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if labels.len() > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge(labels.len()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if label.is_empty() {
                return Err(Error::BlankLabel);
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self {
            labels: labels.into(),
        })
    }

    /// Number of singletons.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full_mask(&self) -> u32 {
        mask_of_len(self.len())
    }

    pub fn universe(&self) -> Proposition {
        Proposition(self.full_mask())
    }

    pub fn singleton(&self, index: usize) -> Option<Proposition> {
        (index < self.len()).then(|| Proposition(1 << index))
    }

    pub fn singletons(&self) -> impl Iterator<Item = Proposition> + '_ {
        (0..self.len()).map(|i| Proposition(1 << i))
    }

    /// Builds a proposition from label names. Order does not matter and
    /// repeated names collapse.
    pub fn proposition<S: AsRef<str>>(&self, names: &[S]) -> Result<Proposition> {
        let mut mask = 0u32;
        for name in names {
            let name = name.as_ref();
            let i = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
            mask |= 1 << i;
        }
        Ok(Proposition(mask))
    }

    /// Checks that `p` only uses singletons of this frame.
    pub fn contains(&self, p: Proposition) -> bool {
        p.0 & !self.full_mask() == 0
    }

    pub fn check(&self, p: Proposition) -> Result<Proposition> {
        if self.contains(p) {
            Ok(p)
        } else {
            Err(Error::OutsideFrame(p.0))
        }
    }

    /// Every nonempty proposition, in increasing mask order.
    pub fn nonempty_propositions(&self) -> impl Iterator<Item = Proposition> {
        (1..=self.full_mask()).map(Proposition)
    }

    pub fn is_universe(&self, p: Proposition) -> bool {
        p.0 == self.full_mask()
    }

    pub fn label_names(&self, p: Proposition) -> Vec<&str> {
        p.members()
            .filter_map(|i| self.labels.get(i).map(String::as_str))
            .collect()
    }

    /// Human name for a proposition: the label itself for singletons,
    /// `{a, b}` for composites.
    pub fn display(&self, p: Proposition) -> String {
        let names = self.label_names(p);
        match names.as_slice() {
            [one] => (*one).to_string(),
            _ => format!("{{{}}}", names.join(", ")),
        }
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

impl TryFrom<Vec<String>> for Frame {
    type Error = Error;

    fn try_from(labels: Vec<String>) -> Result<Self> {
        Frame::new(labels)
    }
}

impl From<Frame> for Vec<String> {
    fn from(frame: Frame) -> Self {
        frame.labels.to_vec()
    }
}

fn mask_of_len(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A subset of a frame's singletons.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Proposition(u32);

impl Proposition {
    pub const EMPTY: Proposition = Proposition(0);

    pub const fn from_mask(mask: u32) -> Self {
        Proposition(mask)
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub const fn cardinality(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains_index(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub const fn intersection(self, other: Proposition) -> Proposition {
        Proposition(self.0 & other.0)
    }

    pub const fn union(self, other: Proposition) -> Proposition {
        Proposition(self.0 | other.0)
    }

    pub const fn is_subset_of(self, other: Proposition) -> bool {
        self.0 & !other.0 == 0
    }

    /// Indices of member singletons in increasing order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.0 & (1 << i) != 0)
    }
}

impl fmt::Debug for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Proposition({:#b})", self.0)
    }
}
