//! Ranking, selection and the end-to-end pipeline.

use serde::{Deserialize, Serialize};

use crate::combine::{Combiner, ConflictReport};
use crate::error::{Error, Result};
use crate::frame::Proposition;
use crate::qbpa::Qbpa;
use crate::tdqmf::{modify_all, Tdqmf};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Among equal moduli, the proposition with the smallest bitmask wins.
    #[default]
    SmallestMask,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DecisionPolicy {
    pub threshold: Option<f64>,
    #[serde(default)]
    pub tie_break: TieBreak,
}

impl DecisionPolicy {
    pub fn argmax() -> Self {
        Self::default()
    }

    pub fn with_threshold(threshold: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::InvalidThreshold(threshold));
        }
        Ok(Self {
            threshold: Some(threshold),
            tie_break: TieBreak::SmallestMask,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionOutcome {
    /// Descending by modulus.
    pub ranking: Vec<(Proposition, f64)>,
    /// `None` when a threshold is set and the top modulus falls below it.
    pub selected: Option<Proposition>,
    /// Modulus of the top-ranked proposition, whether or not it was selected.
    pub selected_modulus: f64,
    /// Other propositions sharing the top modulus exactly.
    pub ties: Vec<Proposition>,
    pub policy: DecisionPolicy,
}

/// Nonempty propositions by descending modulus; ties by smallest mask.
pub fn rank(q: &Qbpa) -> Vec<(Proposition, f64)> {
    sort_ranking(q.modulus_distribution().into_iter().collect())
}

fn sort_ranking(mut ranking: Vec<(Proposition, f64)>) -> Vec<(Proposition, f64)> {
    ranking.sort_by(|(pa, ma), (pb, mb)| mb.total_cmp(ma).then(pa.cmp(pb)));
    ranking
}

pub fn decide(q: &Qbpa, policy: DecisionPolicy) -> DecisionOutcome {
    decide_ranking(rank(q), policy)
}

/// Selection on precomputed moduli. The ranking is re-sorted, so any order
/// is accepted.
pub fn decide_ranking(ranking: Vec<(Proposition, f64)>, policy: DecisionPolicy) -> DecisionOutcome {
    let ranking = sort_ranking(ranking);
    let (top, top_modulus) = match ranking.first() {
        Some(&(p, m)) => (Some(p), m),
        None => (None, 0.0),
    };
    let ties = ranking
        .iter()
        .skip(1)
        .take_while(|(_, m)| *m == top_modulus)
        .map(|(p, _)| *p)
        .collect();
    let selected = match policy.threshold {
        Some(t) if top_modulus < t => None,
        _ => top,
    };
    DecisionOutcome {
        ranking,
        selected,
        selected_modulus: top_modulus,
        ties,
        policy,
    }
}

/// Every stage of one run of the algorithm.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    /// Modified evidence before normalization, one per input.
    pub modified: Vec<Qbpa>,
    pub normalized: Vec<Qbpa>,
    pub combined: Qbpa,
    /// Conflict met at each of the `len − 1` combination steps.
    pub conflicts: Vec<ConflictReport>,
    pub outcome: DecisionOutcome,
}

pub fn pipeline(ts: &[Tdqmf], policy: DecisionPolicy) -> Result<PipelineRun> {
    pipeline_with(ts, policy, Combiner::default())
}

pub fn pipeline_with(ts: &[Tdqmf], policy: DecisionPolicy, combiner: Combiner) -> Result<PipelineRun> {
    if ts.is_empty() {
        return Err(Error::NoEvidence);
    }
    let normalized = modify_all(ts)?;
    let modified = ts.iter().map(Tdqmf::modify).collect();
    let fold = combiner.fold(&normalized)?;
    let outcome = decide(&fold.result, policy);
    Ok(PipelineRun {
        modified,
        normalized,
        combined: fold.result,
        conflicts: fold.steps,
        outcome,
    })
}
