//! Python bindings: fields, trace codes, constant composition subcodes and
//! the verification reports.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::tracecc::ccc::{self, Construction, ExtractOptions, DEFAULT_PAIRWISE_CAP};
use ::tracecc::codes;
use ::tracecc::gfpm::{self, FieldElement};
use ::tracecc::report::{build_report, BuildRequest};
use ::tracecc::verify;
use ::tracecc::Error;

fn py_err(e: impl Into<Error>) -> PyErr {
    let e = e.into();
    PyValueError::new_err(format!("{}: {e}", e.kind()))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report serializes")
}

fn construction(name: &str) -> PyResult<Construction> {
    name.parse().map_err(PyValueError::new_err)
}

/// The field F_{p^m} in a polynomial basis.
#[pyclass(name = "Field", frozen)]
struct PyField {
    inner: gfpm::Field,
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, m, modulus=None))]
    fn new(p: u32, m: usize, modulus: Option<Vec<u32>>) -> PyResult<Self> {
        let inner = gfpm::make_field(p, m, modulus.as_deref()).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    /// Coefficient vectors of all elements in canonical order.
    #[pyo3(signature = (nonzero_only=false))]
    fn elements(&self, nonzero_only: bool) -> Vec<Vec<u32>> {
        gfpm::enumerate_field(&self.inner, nonzero_only)
            .map(|e| e.coeffs().to_vec())
            .collect()
    }

    fn mul(&self, a: Vec<u32>, b: Vec<u32>) -> Vec<u32> {
        let a = FieldElement::from_coeffs(&self.inner, &a);
        let b = FieldElement::from_coeffs(&self.inner, &b);
        (&a * &b).coeffs().to_vec()
    }

    fn inv(&self, a: Vec<u32>) -> PyResult<Vec<u32>> {
        let a = FieldElement::from_coeffs(&self.inner, &a);
        Ok(a.inv().map_err(py_err)?.coeffs().to_vec())
    }

    fn trace(&self, a: Vec<u32>) -> u32 {
        FieldElement::from_coeffs(&self.inner, &a).trace()
    }

    fn quadratic_character(&self, a: Vec<u32>) -> i8 {
        FieldElement::from_coeffs(&self.inner, &a).quadratic_character()
    }

    fn __repr__(&self) -> String {
        format!(
            "Field(p={}, m={}, modulus={:?})",
            self.inner.p(),
            self.inner.m(),
            self.inner.modulus()
        )
    }
}

/// A trace code over D(alpha) or E with all codewords materialized.
#[pyclass(name = "TraceCode", frozen)]
struct PyTraceCode {
    inner: Arc<codes::TraceCode>,
}

#[pymethods]
impl PyTraceCode {
    /// Code defined by `D(alpha) = {d != 0 : Tr(d) = alpha}`.
    #[staticmethod]
    fn from_trace_set(field: &PyField, alpha: u32) -> PyResult<Self> {
        let ds = codes::build_defining_set_d(&field.inner, alpha).map_err(py_err)?;
        let code = codes::build_trace_code(ds).map_err(py_err)?;
        Ok(Self {
            inner: Arc::new(code),
        })
    }

    /// Code defined by `E = {d != 0 : Tr(d^2) = 0}`; needs even m.
    #[staticmethod]
    fn from_square_trace_set(field: &PyField) -> PyResult<Self> {
        let ds = codes::build_defining_set_e(&field.inner).map_err(py_err)?;
        let code = codes::build_trace_code(ds).map_err(py_err)?;
        Ok(Self {
            inner: Arc::new(code),
        })
    }

    #[getter]
    fn length(&self) -> usize {
        self.inner.length()
    }

    #[getter]
    fn dimension(&self) -> u32 {
        self.inner.dimension()
    }

    fn codeword(&self, rank: u64) -> PyResult<Vec<u8>> {
        if rank >= self.inner.index_count() {
            return Err(PyValueError::new_err("rank out of range"));
        }
        Ok(self.inner.word(rank).to_vec())
    }

    fn weight_distribution(&self) -> Vec<(usize, u64)> {
        codes::weight_distribution(&self.inner).pairs
    }

    fn minimum_distance(&self) -> PyResult<usize> {
        codes::minimum_distance(&self.inner).map_err(py_err)
    }

    /// Extracts a constant composition subcode: `first` for a D(alpha) code,
    /// `second-S` or `second-complement` for an E code.
    #[pyo3(signature = (construction_name, pairwise_cap=DEFAULT_PAIRWISE_CAP))]
    fn subcode(&self, construction_name: &str, pairwise_cap: usize) -> PyResult<PyCccCode> {
        let options = ExtractOptions { pairwise_cap };
        let inner = match construction(construction_name)? {
            Construction::First => ccc::extract_subcode_first(&self.inner, options),
            which => ccc::extract_subcode_second(&self.inner, which, options),
        }
        .map_err(py_err)?;
        Ok(PyCccCode { inner })
    }
}

/// A constant composition subcode.
#[pyclass(name = "CccCode", frozen)]
struct PyCccCode {
    inner: ccc::CccCode,
}

#[pymethods]
impl PyCccCode {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter(M)]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn omega(&self) -> Vec<u64> {
        self.inner.composition().omega.clone()
    }

    #[getter]
    fn pairwise_distance(&self) -> Option<usize> {
        self.inner.pairwise_distance()
    }

    #[getter]
    fn ambient_distance(&self) -> usize {
        self.inner.ambient_distance()
    }

    fn words(&self) -> Vec<Vec<u8>> {
        self.inner.words().map(<[u8]>::to_vec).collect()
    }

    /// LFVC report as a JSON string.
    fn lfvc(&self) -> PyResult<String> {
        let p = self.inner.parameters();
        let r = ccc::lfvc_evaluate(p.n, p.size, p.d, &p.omega).map_err(py_err)?;
        Ok(to_json(&r))
    }
}

/// Closed-form `(n, M, d, omega)` for the first construction.
#[pyfunction]
fn predicted_ccc_first(p: u32, m: usize, alpha: u32) -> PyResult<(u64, u64, u64, Vec<u64>)> {
    let r = ccc::predicted_ccc_first(p, m, alpha).map_err(py_err)?;
    Ok((r.n, r.size, r.d, r.omega.omega))
}

/// Closed-form `(n, M, d, omega)` for `second-S` or `second-complement`.
#[pyfunction]
fn predicted_ccc_second(p: u32, m: usize, which: &str) -> PyResult<(u64, u64, u64, Vec<u64>)> {
    let r = ccc::predicted_ccc_second(p, m, construction(which)?).map_err(py_err)?;
    Ok((r.n, r.size, r.d, r.omega.omega))
}

/// LFVC evaluation as a JSON string.
#[pyfunction]
fn lfvc_evaluate(n: u64, size: u64, d: u64, omega: Vec<u64>) -> PyResult<String> {
    let r = ccc::lfvc_evaluate(n, size, d, &ccc::CompositionVector { omega }).map_err(py_err)?;
    Ok(to_json(&r))
}

/// The `build` command's JSON report.
#[pyfunction]
#[pyo3(signature = (p, m, construction_name, alpha=None, emit_codewords=false))]
fn build(
    p: u32,
    m: usize,
    construction_name: &str,
    alpha: Option<u32>,
    emit_codewords: bool,
) -> PyResult<String> {
    let mut req = BuildRequest::new(p, m, construction(construction_name)?);
    req.alpha = alpha;
    req.emit_codewords = emit_codewords;
    Ok(to_json(&build_report(&req).map_err(py_err)?))
}

#[pyfunction]
fn gauss_check(p: u32, m: usize) -> PyResult<String> {
    Ok(to_json(&verify::gauss_check(p, m, None).map_err(py_err)?))
}

#[pyfunction]
fn fibers(p: u32, m: usize) -> PyResult<String> {
    Ok(to_json(&verify::fibers(p, m, None).map_err(py_err)?))
}

/// Runs a verification sweep and returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (primes, m_min, m_max, q_cap=verify::DEFAULT_Q_CAP))]
fn verify_sweep(primes: Vec<u32>, m_min: usize, m_max: usize, q_cap: u64) -> PyResult<String> {
    let spec = verify::SweepSpec {
        primes,
        m_min,
        m_max,
        q_cap,
        ..verify::SweepSpec::default()
    };
    verify::validate_spec(&spec).map_err(py_err)?;
    Ok(to_json(&verify::run_sweep(&spec)))
}

#[pymodule]
#[pyo3(name = "tracecc")]
fn tracecc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyTraceCode>()?;
    m.add_class::<PyCccCode>()?;
    m.add_function(wrap_pyfunction!(predicted_ccc_first, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_ccc_second, m)?)?;
    m.add_function(wrap_pyfunction!(lfvc_evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_check, m)?)?;
    m.add_function(wrap_pyfunction!(fibers, m)?)?;
    m.add_function(wrap_pyfunction!(verify_sweep, m)?)?;
    Ok(())
}
