//! Two-dimensional quantum mass functions.
//!
//! Evidence is carried as complex amplitudes on the subsets of a frame of
//! discernment ([`Qbpa`]). A [`Tdqmf`] pairs such evidence with a second
//! assignment over `{Y, N}` grading how far it can be trusted; the
//! modification rule folds that grading in, and the modified bodies are then
//! combined with the quantum Dempster rule and ranked by modulus.
//!
//! ```
//! use tdqmf_core::{datasets::App, decision::{pipeline, DecisionPolicy}};
//!
//! let evidence = App::StockDecision.evidence();
//! let run = pipeline(&evidence.tdqmfs, DecisionPolicy::argmax()).unwrap();
//! let chosen = run.outcome.selected.unwrap();
//! assert_eq!(evidence.frame.display(chosen), "P");
//! ```

pub mod amplitude;
pub mod combine;
pub mod datasets;
pub mod decision;
pub mod error;
pub mod frame;
pub mod io;
pub mod qbpa;
pub mod tdqmf;

pub use amplitude::QuantumAmplitude;
pub use combine::{combine_pair, combine_sequence, conflict_coefficient, Combiner, ConflictReport};
pub use decision::{decide, pipeline, rank, DecisionOutcome, DecisionPolicy, PipelineRun};
pub use error::{Error, Result, Violation};
pub use frame::{Frame, Proposition};
pub use qbpa::{Qbpa, ReliabilityQbpa};
pub use tdqmf::{modify_all, Tdqmf};
