//! Evidence files and run reports.
//!
//! An evidence file is one JSON document:
//!
//! ```json
//! {
//!   "name": "stock decision",
//!   "frame": ["P", "S", "D"],
//!   "universal": "PSD",
//!   "tolerance": 0.01,
//!   "evidences": [
//!     {
//!       "q1": [{ "prop": ["P"], "psi": 0.7810, "theta": 0.8760 },
//!              { "prop": ["PSD"], "re": 0.2, "im": 0.1669 }],
//!       "q2": [{ "prop": ["Y"], "mass": 0.69 },
//!              { "prop": ["N"], "mass": 0.29 },
//!              { "prop": ["YN"], "mass": 0.02 }]
//!     }
//!   ]
//! }
//! ```
//!
//! Each entry carries exactly one amplitude form: polar (`psi`, `theta` in
//! radians), rectangular (`re`, `im`) or a real `mass` embedded at phase π/4.
//! `universal` optionally names an alias for the whole frame; `YN` is always
//! accepted for `{Y, N}` in reliability bodies.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::amplitude::QuantumAmplitude;
use crate::combine::ConflictReport;
use crate::decision::{DecisionPolicy, PipelineRun};
use crate::error::{Error, Violation};
use crate::frame::{Frame, Proposition};
use crate::qbpa::{Qbpa, ReliabilityQbpa, TRANSCRIBED_TOLERANCE};
use crate::tdqmf::Tdqmf;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed evidence file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Entry { field: String, source: Error },
    #[error("{field}: {message}")]
    Schema { field: String, message: String },
    #[error("evidence {index} {body}: {violation}")]
    Invalid {
        index: usize,
        body: &'static str,
        violation: Violation,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub frame: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub evidences: Vec<EvidenceRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceRecord {
    pub q1: Vec<MassEntry>,
    pub q2: Vec<MassEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassEntry {
    pub prop: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
}

impl MassEntry {
    pub fn polar(prop: &[&str], psi: f64, theta: f64) -> Self {
        Self {
            prop: prop.iter().map(|s| s.to_string()).collect(),
            psi: Some(psi),
            theta: Some(theta),
            re: None,
            im: None,
            mass: None,
        }
    }

    fn amplitude(&self) -> std::result::Result<QuantumAmplitude, String> {
        let forms = ((self.psi, self.theta), (self.re, self.im), self.mass);
        match forms {
            ((Some(psi), Some(theta)), (None, None), None) => {
                QuantumAmplitude::from_polar(psi, theta).map_err(|e| e.to_string())
            }
            ((None, None), (Some(re), Some(im)), None) => {
                QuantumAmplitude::try_new(re, im).map_err(|e| e.to_string())
            }
            ((None, None), (None, None), Some(m)) => {
                QuantumAmplitude::embed_real(m).map_err(|e| e.to_string())
            }
            ((None, None), (None, None), None) => Err("no amplitude given".into()),
            _ => Err("give exactly one of {psi, theta}, {re, im} or {mass}".into()),
        }
    }
}

/// A validated evidence file.
#[derive(Clone, Debug)]
pub struct Evidence {
    pub name: Option<String>,
    pub frame: Frame,
    /// Declared alias for the universal set, if any.
    pub universal: Option<String>,
    pub tdqmfs: Vec<Tdqmf>,
    pub tolerance: f64,
    /// SHA-256 of the source bytes, hex.
    pub digest: String,
}

impl Evidence {
    /// Display name of a proposition, using the universal-set alias.
    pub fn name_of(&self, p: Proposition) -> String {
        match &self.universal {
            Some(alias) if self.frame.is_universe(p) => alias.clone(),
            _ => self.frame.display(p),
        }
    }
}

pub fn load_evidence(path: impl AsRef<Path>) -> Result<Evidence, LoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_evidence(&text)
}

pub fn parse_evidence(text: &str) -> Result<Evidence, LoadError> {
    let file: EvidenceFile = serde_json::from_str(text)?;
    let mut evidence = file.resolve()?;
    evidence.digest = digest(text.as_bytes());
    Ok(evidence)
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl EvidenceFile {
    pub fn resolve(&self) -> Result<Evidence, LoadError> {
        let frame = Frame::new(self.frame.iter().cloned()).map_err(|source| LoadError::Entry {
            field: "frame".into(),
            source,
        })?;
        let tolerance = self.tolerance.unwrap_or(TRANSCRIBED_TOLERANCE);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(LoadError::Schema {
                field: "tolerance".into(),
                message: format!("must be a positive number, got {tolerance}"),
            });
        }
        if let Some(alias) = &self.universal {
            if frame.index_of(alias).is_some() {
                return Err(LoadError::Schema {
                    field: "universal".into(),
                    message: format!("alias {alias:?} collides with a frame label"),
                });
            }
        }
        if self.evidences.is_empty() {
            return Err(LoadError::Schema {
                field: "evidences".into(),
                message: "at least one evidence is required".into(),
            });
        }
        let reliability_frame = ReliabilityQbpa::frame();
        let mut tdqmfs = Vec::with_capacity(self.evidences.len());
        for (i, record) in self.evidences.iter().enumerate() {
            let base = format!("evidences[{i}]");
            let q1 = build_body(
                &frame,
                self.universal.as_deref(),
                &record.q1,
                &format!("{base}.q1"),
            )?;
            let q2 = build_body(&reliability_frame, Some("YN"), &record.q2, &format!("{base}.q2"))?;
            q1.validate(tolerance).map_err(|violation| LoadError::Invalid {
                index: i,
                body: "q1",
                violation,
            })?;
            q2.validate(tolerance).map_err(|violation| LoadError::Invalid {
                index: i,
                body: "q2",
                violation,
            })?;
            let q2 = ReliabilityQbpa::try_from(q2).map_err(|source| LoadError::Entry {
                field: format!("{base}.q2"),
                source,
            })?;
            tdqmfs.push(Tdqmf::new(q1, q2));
        }
        Ok(Evidence {
            name: self.name.clone(),
            frame,
            universal: self.universal.clone(),
            tdqmfs,
            tolerance,
            digest: String::new(),
        })
    }
}

fn build_body(
    frame: &Frame,
    alias: Option<&str>,
    entries: &[MassEntry],
    field: &str,
) -> Result<Qbpa, LoadError> {
    let mut q = Qbpa::empty(frame.clone());
    let mut seen = BTreeSet::new();
    for (j, entry) in entries.iter().enumerate() {
        let field = format!("{field}[{j}]");
        let prop = resolve_prop(frame, alias, &entry.prop).map_err(|source| LoadError::Entry {
            field: format!("{field}.prop"),
            source,
        })?;
        if !seen.insert(prop) {
            return Err(LoadError::Schema {
                field,
                message: format!("proposition {} listed twice", frame.display(prop)),
            });
        }
        let amp = entry.amplitude().map_err(|message| LoadError::Schema {
            field: field.clone(),
            message,
        })?;
        q.insert(prop, amp)
            .map_err(|source| LoadError::Entry { field, source })?;
    }
    Ok(q)
}

fn resolve_prop(frame: &Frame, alias: Option<&str>, names: &[String]) -> Result<Proposition, Error> {
    if names.is_empty() {
        return Ok(Proposition::EMPTY);
    }
    let mut mask = 0;
    for name in names {
        let p = match alias {
            Some(a) if a == name => frame.universe(),
            _ => frame.proposition(std::slice::from_ref(name))?,
        };
        mask |= p.mask();
    }
    Ok(Proposition::from_mask(mask))
}

/// One proposition's amplitude, with derived polar views.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRow {
    pub proposition: String,
    pub members: Vec<String>,
    pub re: f64,
    pub im: f64,
    pub psi: f64,
    pub theta: f64,
    pub modulus: f64,
}

pub type StageTable = Vec<AmplitudeRow>;

pub fn stage_table(q: &Qbpa) -> StageTable {
    stage_table_named(q, |p| q.frame().display(p))
}

pub fn stage_table_named(q: &Qbpa, name: impl Fn(Proposition) -> String) -> StageTable {
    let frame = q.frame();
    q.iter()
        .filter(|(p, _)| !p.is_empty())
        .map(|(p, a)| AmplitudeRow {
            proposition: name(p),
            members: frame.label_names(p).into_iter().map(String::from).collect(),
            re: a.re(),
            im: a.im(),
            psi: a.psi(),
            theta: a.theta(),
            modulus: a.modulus(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedRow {
    pub proposition: String,
    pub modulus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionSummary {
    pub selected: Option<String>,
    pub selected_modulus: f64,
    pub ties: Vec<String>,
    pub policy: DecisionPolicy,
    pub ranking: Vec<RankedRow>,
}

/// Everything one pipeline run produced, stage by stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub input_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub frame: Vec<String>,
    pub modified: Vec<StageTable>,
    pub normalized: Vec<StageTable>,
    pub combined: StageTable,
    pub conflicts: Vec<ConflictReport>,
    pub decision: DecisionSummary,
}

impl RunReport {
    pub fn new(evidence: &Evidence, run: &PipelineRun) -> Self {
        let frame = &evidence.frame;
        let outcome = &run.outcome;
        let table = |q: &Qbpa| stage_table_named(q, |p| evidence.name_of(p));
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: evidence.digest.clone(),
            name: evidence.name.clone(),
            frame: frame.labels().to_vec(),
            modified: run.modified.iter().map(table).collect(),
            normalized: run.normalized.iter().map(table).collect(),
            combined: table(&run.combined),
            conflicts: run.conflicts.clone(),
            decision: DecisionSummary {
                selected: outcome.selected.map(|p| evidence.name_of(p)),
                selected_modulus: outcome.selected_modulus,
                ties: outcome.ties.iter().map(|&p| evidence.name_of(p)).collect(),
                policy: outcome.policy,
                ranking: outcome
                    .ranking
                    .iter()
                    .map(|&(p, m)| RankedRow {
                        proposition: evidence.name_of(p),
                        modulus: m,
                    })
                    .collect(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
