//! Python bindings: `import burniat_py`.

use burniat::config::{BurniatConfig, Variant};
use burniat::degeneration::{self, CollectionVariant};
use burniat::effective::{Engine as CoreEngine, FiberKind};
use burniat::lattice::GroupIndex;
use burniat::picard::{self, Combo, GeneratorTable};
use burniat::verify::{Suite, VerifyOptions};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: burniat::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn index(i: GroupIndex) -> Option<u128> {
    match i {
        GroupIndex::Finite(n) => Some(n),
        GroupIndex::Infinite => None,
    }
}

/// A divisor class `(d; r tt; r tt; r tt)` on the `K^2 = 6` surface.
#[pyclass(name = "XClass", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyXClass(picard::XClass);

#[pymethods]
impl PyXClass {
    #[new]
    fn new(literal: &str) -> PyResult<Self> {
        literal.parse().map(PyXClass).map_err(err)
    }

    #[getter]
    fn d(&self) -> i64 {
        self.0.d
    }

    /// `[(r, "tt"), ...]` for `A, B, C`.
    #[getter]
    fn blocks(&self) -> Vec<(i64, String)> {
        self.0.blocks.iter().map(|b| (b.r, b.t.to_string())).collect()
    }

    #[getter]
    fn torsion(&self) -> String {
        self.0.torsion_vec().to_string()
    }

    fn is_torsion(&self) -> bool {
        self.0.is_torsion()
    }

    fn __add__(&self, o: &PyXClass) -> PyXClass {
        PyXClass(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &PyXClass) -> PyXClass {
        PyXClass(&self.0 - &o.0)
    }

    fn __neg__(&self) -> PyXClass {
        PyXClass(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("XClass('{}')", self.0)
    }
}

/// One of the six standard branch configurations.
#[pyclass(name = "Config", frozen)]
struct PyConfig(BurniatConfig);

#[pymethods]
impl PyConfig {
    #[new]
    #[pyo3(signature = (ksq, variant = "plain"))]
    fn new(ksq: i64, variant: &str) -> PyResult<Self> {
        let v: Variant = variant.parse().map_err(err)?;
        BurniatConfig::standard(ksq, v).map(PyConfig).map_err(err)
    }

    #[staticmethod]
    fn all() -> Vec<PyConfig> {
        BurniatConfig::all_standard().into_iter().map(PyConfig).collect()
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name()
    }

    #[getter]
    fn ksq(&self) -> i64 {
        self.0.ksq
    }

    fn torsion_basis(&self) -> Vec<String> {
        picard::torsion_subgroup(&self.0).iter().map(|v| v.to_string()).collect()
    }

    /// `None` when infinite.
    fn image_index(&self) -> PyResult<Option<u128>> {
        Ok(index(GeneratorTable::build(&self.0).map_err(err)?.image_index()))
    }

    fn ramification_span_index(&self) -> PyResult<Option<u128>> {
        Ok(index(self.0.ramification_span_index().map_err(err)?))
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

/// Verdict as `(tag, evidence)`.
#[pyclass(name = "Engine", frozen)]
struct PyEngine(CoreEngine);

#[pymethods]
impl PyEngine {
    #[new]
    #[pyo3(signature = (fiber = "smooth"))]
    fn new(py: Python<'_>, fiber: &str) -> PyResult<Self> {
        let kind: FiberKind = fiber.parse().map_err(err)?;
        py.detach(|| CoreEngine::new(kind)).map(PyEngine).map_err(err)
    }

    fn canonical(&self) -> PyXClass {
        PyXClass(self.0.canonical())
    }

    /// `phi` of a combination such as `"A1 - A2"`.
    fn phi(&self, combo: &str) -> PyResult<PyXClass> {
        let c = Combo::parse(combo, 0).map_err(err)?;
        Ok(PyXClass(self.0.table().phi(&c)))
    }

    fn chi(&self, x: &PyXClass) -> PyResult<i64> {
        self.0.chi(&x.0).map_err(err)
    }

    fn intersect(&self, x: &PyXClass, y: &PyXClass) -> PyResult<i64> {
        self.0.table().intersect_x(&x.0, &y.0).map_err(err)
    }

    fn classify(&self, py: Python<'_>, x: &PyXClass) -> PyResult<(String, String)> {
        let v = py.detach(|| self.0.classify(&x.0)).map_err(err)?;
        Ok((v.tag().to_string(), v.evidence()))
    }

    /// `(reduced class, trace)`.
    fn minimal_form(&self, x: &PyXClass) -> PyResult<(PyXClass, String)> {
        let (r, t) = self.0.minimal_form(&x.0).map_err(err)?;
        Ok((PyXClass(r), t.to_string()))
    }

    /// Structured report text.
    fn scan(&self, py: Python<'_>, max_degree: i64) -> PyResult<String> {
        py.detach(|| self.0.scan(max_degree)).map(|r| r.to_structured()).map_err(err)
    }

    /// `(passed, table text)`.
    #[pyo3(signature = (collection = "original"))]
    fn exceptional_collection(&self, py: Python<'_>, collection: &str) -> PyResult<(bool, String)> {
        let v: CollectionVariant = collection.parse().map_err(err)?;
        let r = py
            .detach(|| degeneration::exceptional_collection_check_with(&self.0, v))
            .map_err(err)?;
        Ok((r.passed(), r.to_string()))
    }
}

/// `[(id, passed, line), ...]` for the chosen criteria (all when empty).
#[pyfunction]
#[pyo3(signature = (only = Vec::new()))]
fn verify_all(py: Python<'_>, only: Vec<u8>) -> PyResult<Vec<(u8, bool, String)>> {
    py.detach(|| {
        let suite = Suite::new(&VerifyOptions::new())?;
        Ok(suite
            .run_all(&only)
            .into_iter()
            .map(|r| (r.id, r.passed, r.to_string()))
            .collect())
    })
    .map_err(err)
}

#[pymodule]
fn burniat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyXClass>()?;
    m.add_class::<PyConfig>()?;
    m.add_class::<PyEngine>()?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
