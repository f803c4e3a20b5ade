//! Python bindings. Propositions cross the boundary as a label string (one
//! hypothesis) or any iterable of labels, and come back as tuples of labels
//! in frame order. Amplitudes are accepted as `Amplitude`, `complex` or a
//! real number.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict, PyTuple};

use tdqmf_core::datasets::App;
use tdqmf_core::io::{self, Evidence, RunReport};
use tdqmf_core::qbpa::DEFAULT_TOLERANCE;
use tdqmf_core::{
    combine_pair, combine_sequence, conflict_coefficient, decide as core_decide, pipeline, ConflictReport,
    DecisionOutcome, DecisionPolicy, Error, Frame, PipelineRun, Proposition, Qbpa, QuantumAmplitude,
    ReliabilityQbpa, Tdqmf,
};

create_exception!(tdqmf, TdqmfError, PyValueError, "Invalid evidence or operation.");
create_exception!(
    tdqmf,
    TotalConflictError,
    TdqmfError,
    "The combination is undefined: total conflict."
);

fn err(e: Error) -> PyErr {
    match e {
        Error::TotalConflict { .. } => TotalConflictError::new_err(e.to_string()),
        _ => TdqmfError::new_err(e.to_string()),
    }
}

fn load_err(e: io::LoadError) -> PyErr {
    TdqmfError::new_err(e.to_string())
}

fn policy(threshold: Option<f64>) -> PyResult<DecisionPolicy> {
    threshold.map_or(Ok(DecisionPolicy::argmax()), |t| {
        DecisionPolicy::with_threshold(t).map_err(err)
    })
}

fn proposition(frame: &Frame, obj: &Bound<'_, PyAny>) -> PyResult<Proposition> {
    let names: Vec<String> = if let Ok(s) = obj.extract::<String>() {
        vec![s]
    } else {
        obj.try_iter()?
            .map(|item| item?.extract::<String>())
            .collect::<PyResult<_>>()?
    };
    frame.proposition(&names).map_err(err)
}

fn labels<'py>(py: Python<'py>, frame: &Frame, p: Proposition) -> PyResult<Bound<'py, PyTuple>> {
    PyTuple::new(py, frame.label_names(p))
}

fn amplitude(obj: &Bound<'_, PyAny>) -> PyResult<QuantumAmplitude> {
    if let Ok(a) = obj.extract::<Amplitude>() {
        return Ok(a.0);
    }
    let (re, im) = match obj.cast::<PyComplex>() {
        Ok(c) => (c.real(), c.imag()),
        Err(_) => (obj.extract::<f64>()?, 0.0),
    };
    QuantumAmplitude::try_new(re, im).map_err(err)
}

/// A frame of discernment: the mutually exclusive hypotheses.
#[pyclass(name = "Frame", module = "tdqmf", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyFrame(Frame);

#[pymethods]
impl PyFrame {
    #[new]
    fn new(labels: Vec<String>) -> PyResult<Self> {
        Frame::new(labels).map(PyFrame).map_err(err)
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    /// Every nonempty subset, in increasing bitmask order.
    fn propositions<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyTuple>>> {
        self.0
            .nonempty_propositions()
            .map(|p| labels(py, &self.0, p))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Frame({:?})", self.0.labels())
    }
}

/// A complex amplitude ψe^{θj}; `modulus` is ψ².
#[pyclass(module = "tdqmf", frozen, eq, from_py_object)]
#[derive(Clone, Copy, PartialEq)]
struct Amplitude(QuantumAmplitude);

#[pymethods]
impl Amplitude {
    #[new]
    #[pyo3(signature = (re = 0.0, im = 0.0))]
    fn new(re: f64, im: f64) -> PyResult<Self> {
        QuantumAmplitude::try_new(re, im).map(Amplitude).map_err(err)
    }

    #[staticmethod]
    fn from_polar(psi: f64, theta: f64) -> PyResult<Self> {
        QuantumAmplitude::from_polar(psi, theta)
            .map(Amplitude)
            .map_err(err)
    }

    /// Lifts a classical mass `m` to `√m · e^{jπ/4}`.
    #[staticmethod]
    fn embed_real(mass: f64) -> PyResult<Self> {
        QuantumAmplitude::embed_real(mass).map(Amplitude).map_err(err)
    }

    #[getter]
    fn re(&self) -> f64 {
        self.0.re()
    }

    #[getter]
    fn im(&self) -> f64 {
        self.0.im()
    }

    #[getter]
    fn psi(&self) -> f64 {
        self.0.psi()
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta()
    }

    #[getter]
    fn modulus(&self) -> f64 {
        self.0.modulus()
    }

    fn __add__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Amplitude(self.0 + amplitude(other)?))
    }

    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Amplitude(self.0 * amplitude(other)?))
    }

    fn __neg__(&self) -> Self {
        Amplitude(-self.0)
    }

    fn __complex__<'py>(&self, py: Python<'py>) -> Bound<'py, PyComplex> {
        PyComplex::from_doubles(py, self.0.re(), self.0.im())
    }

    fn __repr__(&self) -> String {
        format!("Amplitude({})", self.0)
    }
}

/// A quantum basic probability assignment over a frame.
#[pyclass(name = "Qbpa", module = "tdqmf", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyQbpa(Qbpa);

#[pymethods]
impl PyQbpa {
    /// `masses` maps propositions to amplitudes.
    #[new]
    #[pyo3(signature = (frame, masses = None))]
    fn new(frame: &PyFrame, masses: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut q = Qbpa::empty(frame.0.clone());
        for (k, v) in masses.into_iter().flat_map(|d| d.iter()) {
            q.insert(proposition(&frame.0, &k)?, amplitude(&v)?)
                .map_err(err)?;
        }
        Ok(PyQbpa(q))
    }

    /// Total ignorance: unit amplitude on the whole frame.
    #[staticmethod]
    fn vacuous(frame: &PyFrame) -> Self {
        PyQbpa(Qbpa::vacuous(frame.0.clone()))
    }

    #[getter]
    fn frame(&self) -> PyFrame {
        PyFrame(self.0.frame().clone())
    }

    fn get(&self, prop: &Bound<'_, PyAny>) -> PyResult<Amplitude> {
        Ok(Amplitude(self.0.get(proposition(self.0.frame(), prop)?)))
    }

    fn __getitem__(&self, prop: &Bound<'_, PyAny>) -> PyResult<Amplitude> {
        self.get(prop)
    }

    /// Focal elements as `(labels, Amplitude)` pairs.
    fn items<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Bound<'py, PyTuple>, Amplitude)>> {
        self.0
            .focal()
            .map(|(p, a)| Ok((labels(py, self.0.frame(), p)?, Amplitude(a))))
            .collect()
    }

    /// Modulus ψ² of every focal element.
    fn moduli<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (p, m) in self.0.modulus_distribution() {
            d.set_item(labels(py, self.0.frame(), p)?, m)?;
        }
        Ok(d)
    }

    fn modulus_sum(&self) -> f64 {
        self.0.modulus_sum()
    }

    /// Raises `TdqmfError` unless the moduli sum to one within `tolerance`.
    #[pyo3(signature = (tolerance = DEFAULT_TOLERANCE))]
    fn validate(&self, tolerance: f64) -> PyResult<()> {
        self.0.validate(tolerance).map_err(|v| err(v.into()))
    }

    fn normalized(&self) -> PyResult<Self> {
        self.0.normalize_moduli().map(PyQbpa).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.focal().count()
    }

    fn __repr__(&self) -> String {
        let body: Vec<String> = self
            .0
            .focal()
            .map(|(p, a)| format!("{}: {a}", self.0.frame().display(p)))
            .collect();
        format!("Qbpa({{{}}})", body.join(", "))
    }
}

/// How far a body of evidence can be trusted: amplitudes on Y, N and YN.
#[pyclass(name = "Reliability", module = "tdqmf", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyReliability(ReliabilityQbpa);

#[pymethods]
impl PyReliability {
    #[new]
    fn new(yes: &Bound<'_, PyAny>, no: &Bound<'_, PyAny>, undecided: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyReliability(ReliabilityQbpa::new(
            amplitude(yes)?,
            amplitude(no)?,
            amplitude(undecided)?,
        )))
    }

    #[staticmethod]
    fn trusted() -> Self {
        PyReliability(ReliabilityQbpa::trusted())
    }

    #[getter]
    fn yes(&self) -> Amplitude {
        Amplitude(self.0.yes())
    }

    #[getter]
    fn no(&self) -> Amplitude {
        Amplitude(self.0.no())
    }

    #[getter]
    fn undecided(&self) -> Amplitude {
        Amplitude(self.0.undecided())
    }

    fn __repr__(&self) -> String {
        format!(
            "Reliability(Y={}, N={}, YN={})",
            self.0.yes(),
            self.0.no(),
            self.0.undecided()
        )
    }
}

/// Domain evidence paired with its reliability.
#[pyclass(name = "Tdqmf", module = "tdqmf", frozen, from_py_object)]
#[derive(Clone)]
struct PyTdqmf(Tdqmf);

#[pymethods]
impl PyTdqmf {
    #[new]
    fn new(original: &PyQbpa, indicative: &PyReliability) -> Self {
        PyTdqmf(Tdqmf::new(original.0.clone(), indicative.0.clone()))
    }

    #[getter]
    fn original(&self) -> PyQbpa {
        PyQbpa(self.0.original.clone())
    }

    #[getter]
    fn indicative(&self) -> PyReliability {
        PyReliability(self.0.indicative.clone())
    }

    /// The modified body, before normalization.
    fn modify(&self) -> PyQbpa {
        PyQbpa(self.0.modify())
    }
}

fn conflict_dict<'py>(py: Python<'py>, c: &ConflictReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("k", Amplitude(c.k))?;
    d.set_item("k_modulus", c.k_modulus)?;
    d.set_item("k_magnitude", c.k_magnitude)?;
    d.set_item("denominator", c.denominator)?;
    Ok(d)
}

fn outcome_dict<'py>(py: Python<'py>, frame: &Frame, o: &DecisionOutcome) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let selected = o.selected.map(|p| labels(py, frame, p)).transpose()?;
    d.set_item("selected", selected)?;
    d.set_item("modulus", o.selected_modulus)?;
    let ranking = o
        .ranking
        .iter()
        .map(|&(p, m)| Ok((labels(py, frame, p)?, m)))
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("ranking", ranking)?;
    let ties = o
        .ties
        .iter()
        .map(|&p| labels(py, frame, p))
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("ties", ties)?;
    Ok(d)
}

/// Every stage of one pipeline run.
#[pyclass(name = "Run", module = "tdqmf", frozen)]
struct PyRun(PipelineRun);

#[pymethods]
impl PyRun {
    #[getter]
    fn modified(&self) -> Vec<PyQbpa> {
        self.0.modified.iter().cloned().map(PyQbpa).collect()
    }

    #[getter]
    fn normalized(&self) -> Vec<PyQbpa> {
        self.0.normalized.iter().cloned().map(PyQbpa).collect()
    }

    #[getter]
    fn combined(&self) -> PyQbpa {
        PyQbpa(self.0.combined.clone())
    }

    #[getter]
    fn conflicts<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.0.conflicts.iter().map(|c| conflict_dict(py, c)).collect()
    }

    /// `selected`, `modulus`, `ranking` and `ties`.
    #[getter]
    fn decision<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        outcome_dict(py, self.0.combined.frame(), &self.0.outcome)
    }

    #[getter]
    fn selected<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyTuple>>> {
        self.0
            .outcome
            .selected
            .map(|p| labels(py, self.0.combined.frame(), p))
            .transpose()
    }
}

/// A loaded evidence file.
#[pyclass(name = "Evidence", module = "tdqmf", frozen)]
struct PyEvidence(Evidence);

#[pymethods]
impl PyEvidence {
    #[getter]
    fn name(&self) -> Option<String> {
        self.0.name.clone()
    }

    #[getter]
    fn frame(&self) -> PyFrame {
        PyFrame(self.0.frame.clone())
    }

    #[getter]
    fn tdqmfs(&self) -> Vec<PyTdqmf> {
        self.0.tdqmfs.iter().cloned().map(PyTdqmf).collect()
    }

    /// SHA-256 of the source text.
    #[getter]
    fn digest(&self) -> String {
        self.0.digest.clone()
    }

    /// Display name of a proposition, honouring the universal-set alias.
    fn name_of(&self, prop: &Bound<'_, PyAny>) -> PyResult<String> {
        Ok(self.0.name_of(proposition(&self.0.frame, prop)?))
    }

    #[pyo3(signature = (threshold = None))]
    fn run(&self, threshold: Option<f64>) -> PyResult<PyRun> {
        pipeline(&self.0.tdqmfs, policy(threshold)?)
            .map(PyRun)
            .map_err(err)
    }

    /// The full run as the JSON report the command-line tool prints.
    #[pyo3(signature = (threshold = None))]
    fn report(&self, threshold: Option<f64>) -> PyResult<String> {
        let run = pipeline(&self.0.tdqmfs, policy(threshold)?).map_err(err)?;
        Ok(RunReport::new(&self.0, &run).to_json())
    }
}

#[pyfunction]
fn combine(a: &PyQbpa, b: &PyQbpa) -> PyResult<PyQbpa> {
    combine_pair(&a.0, &b.0).map(PyQbpa).map_err(err)
}

/// Left fold of `combine` over a non-empty list.
#[pyfunction]
fn combine_all(qs: Vec<PyQbpa>) -> PyResult<PyQbpa> {
    let qs: Vec<Qbpa> = qs.into_iter().map(|q| q.0).collect();
    combine_sequence(&qs).map(PyQbpa).map_err(err)
}

#[pyfunction]
fn conflict<'py>(py: Python<'py>, a: &PyQbpa, b: &PyQbpa) -> PyResult<Bound<'py, PyDict>> {
    conflict_dict(py, &conflict_coefficient(&a.0, &b.0).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (q, threshold = None))]
fn decide<'py>(py: Python<'py>, q: &PyQbpa, threshold: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
    outcome_dict(py, q.0.frame(), &core_decide(&q.0, policy(threshold)?))
}

/// Modify, normalize, combine and decide.
#[pyfunction]
#[pyo3(signature = (tdqmfs, threshold = None))]
fn run(tdqmfs: Vec<PyTdqmf>, threshold: Option<f64>) -> PyResult<PyRun> {
    let ts: Vec<Tdqmf> = tdqmfs.into_iter().map(|t| t.0).collect();
    pipeline(&ts, policy(threshold)?).map(PyRun).map_err(err)
}

#[pyfunction]
fn load_evidence(path: std::path::PathBuf) -> PyResult<PyEvidence> {
    io::load_evidence(path).map(PyEvidence).map_err(load_err)
}

#[pyfunction]
fn parse_evidence(text: &str) -> PyResult<PyEvidence> {
    io::parse_evidence(text).map(PyEvidence).map_err(load_err)
}

/// One of the four bundled case studies, numbered 1 to 4.
#[pyfunction]
fn bundled(app: u8) -> PyResult<PyEvidence> {
    App::from_number(app)
        .map(|a| PyEvidence(a.evidence()))
        .ok_or_else(|| PyValueError::new_err(format!("no bundled case study {app}; expected 1 to 4")))
}

#[pymodule]
fn tdqmf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("TdqmfError", m.py().get_type::<TdqmfError>())?;
    m.add("TotalConflictError", m.py().get_type::<TotalConflictError>())?;
    m.add_class::<PyFrame>()?;
    m.add_class::<Amplitude>()?;
    m.add_class::<PyQbpa>()?;
    m.add_class::<PyReliability>()?;
    m.add_class::<PyTdqmf>()?;
    m.add_class::<PyRun>()?;
    m.add_class::<PyEvidence>()?;
    m.add_function(wrap_pyfunction!(combine, m)?)?;
    m.add_function(wrap_pyfunction!(combine_all, m)?)?;
    m.add_function(wrap_pyfunction!(conflict, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(load_evidence, m)?)?;
    m.add_function(wrap_pyfunction!(parse_evidence, m)?)?;
    m.add_function(wrap_pyfunction!(bundled, m)?)?;
    Ok(())
}
