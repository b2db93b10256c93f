//! Python bindings for `starter-forge`.
//!
//! Field elements cross the boundary as their integer encodings
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use starter_forge::starter::beta_pair_conditions;
use starter_forge::{
    self as sf, CosetSystem, FieldElement, Pair, Provenance, StarterRecord, VerificationReport,
};

fn err(e: sf::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pairs_of(field: &sf::Field, pairs: Vec<(u64, u64)>) -> PyResult<Vec<Pair>> {
    pairs
        .into_iter()
        .map(|(x, y)| Ok(Pair::new(field.element(x).map_err(err)?, field.element(y).map_err(err)?)))
        .collect()
}

fn encodings(v: &[FieldElement]) -> Vec<u64> {
    v.iter().map(|x| x.encoding()).collect()
}

/// The finite field `F_q`.
#[pyclass(frozen, name = "Field")]
struct PyField {
    inner: sf::Field,
}

impl PyField {
    fn el(&self, v: u64) -> PyResult<FieldElement> {
        self.inner.element(v).map_err(err)
    }
}

#[pymethods]
impl PyField {
    #[new]
    fn new(q: u64) -> PyResult<Self> {
        Ok(PyField { inner: sf::Field::with_order(q).map_err(err)? })
    }

    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    #[getter]
    fn characteristic(&self) -> u64 {
        self.inner.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    /// Modulus coefficients, constant term first.
    #[getter]
    fn modulus(&self) -> Vec<u64> {
        self.inner.modulus().to_vec()
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.inner.add(self.el(a)?, self.el(b)?).encoding())
    }

    fn sub(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.inner.sub(self.el(a)?, self.el(b)?).encoding())
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.inner.mul(self.el(a)?, self.el(b)?).encoding())
    }

    fn div(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.inner.div(self.el(a)?, self.el(b)?).map_err(err)?.encoding())
    }

    fn neg(&self, a: u64) -> PyResult<u64> {
        Ok(self.inner.neg(self.el(a)?).encoding())
    }

    fn inv(&self, a: u64) -> PyResult<u64> {
        Ok(self.inner.inv(self.el(a)?).map_err(err)?.encoding())
    }

    fn pow(&self, a: u64, e: u64) -> PyResult<u64> {
        Ok(self.inner.pow(self.el(a)?, e).encoding())
    }

    fn coefficients(&self, a: u64) -> PyResult<Vec<u64>> {
        Ok(self.inner.coefficients(self.el(a)?))
    }

    fn is_quadratic_residue(&self, a: u64) -> PyResult<bool> {
        self.inner.is_quadratic_residue(self.el(a)?).map_err(err)
    }

    fn least_primitive_element(&self) -> u64 {
        self.inner.least_primitive_element().encoding()
    }

    /// `(residues, non_residues)`, each sorted.
    fn residue_sets(&self) -> (Vec<u64>, Vec<u64>) {
        let (qr, nqr) = self.inner.residue_sets();
        (encodings(&qr), encodings(&nqr))
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.inner.order())
    }
}

/// A set of pairs over `F_q` together with how it was built.
#[pyclass(frozen, name = "Starter")]
struct PyStarter {
    inner: sf::Starter,
}

#[pymethods]
impl PyStarter {
    #[getter]
    fn q(&self) -> u64 {
        self.inner.field().order()
    }

    #[getter]
    fn pairs(&self) -> Vec<(u64, u64)> {
        self.inner
            .pairs()
            .iter()
            .map(|p| (p.lo().encoding(), p.hi().encoding()))
            .collect()
    }

    /// `"dinitz"`, `"two_quotient"` or `"external"`.
    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.provenance() {
            Provenance::Dinitz { .. } => "dinitz",
            Provenance::TwoQuotient { .. } => "two_quotient",
            Provenance::External => "external",
        }
    }

    #[getter]
    fn betas(&self) -> Vec<u64> {
        match self.inner.provenance() {
            Provenance::Dinitz { beta } => vec![beta.encoding()],
            Provenance::TwoQuotient { beta1, beta2 } => vec![beta1.encoding(), beta2.encoding()],
            Provenance::External => vec![],
        }
    }

    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        report_dict(py, &self.inner.verify())
    }

    /// Canonical JSON record with content hash.
    #[pyo3(signature = (pretty=false))]
    fn to_json(&self, pretty: bool) -> String {
        let rec = StarterRecord::from_starter(&self.inner);
        if pretty {
            rec.pretty()
        } else {
            rec.canonical_json()
        }
    }

    fn __len__(&self) -> usize {
        self.inner.pairs().len()
    }

    fn __repr__(&self) -> String {
        format!("Starter(q={}, kind={}, pairs={})", self.q(), self.kind(), self.inner.pairs().len())
    }
}

fn report_dict<'py>(py: Python<'py>, r: &VerificationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("is_starter", r.is_starter)?;
    d.set_item("is_strong", r.is_strong)?;
    d.set_item("sum_count", r.sum_count)?;
    d.set_item("nonzero_sums", r.nonzero_sums)?;
    d.set_item("min_quotient", r.quotient_profile.min_quotient.as_str())?;
    d.set_item("quotient_set", encodings(&r.quotient_profile.quotient_set))?;
    let failures: Vec<String> = r
        .failures
        .iter()
        .map(|f| format!("{}: {f}", f.axiom()))
        .collect();
    d.set_item("failures", failures)?;
    Ok(d)
}

/// `(k, t)` with `q - 1 = 2^k t`, if `q` admits the two-quotient construction.
#[pyfunction]
fn decompose(q: u64) -> PyResult<(u32, u64)> {
    let d = sf::decompose(q).map_err(err)?;
    Ok((d.k, d.t))
}

/// All valid `(beta1, beta2)`, sorted.
#[pyfunction]
fn search(q: u64) -> PyResult<Vec<(u64, u64)>> {
    let field = sf::Field::with_order(q).map_err(err)?;
    let sys = CosetSystem::new(&field).map_err(err)?;
    Ok(sf::search_beta_pairs(&sys)
        .map_err(err)?
        .iter()
        .map(|bp| (bp.beta1.encoding(), bp.beta2.encoding()))
        .collect())
}

#[pyfunction]
fn two_quotient(q: u64, beta1: u64, beta2: u64) -> PyResult<PyStarter> {
    let field = sf::Field::with_order(q).map_err(err)?;
    let sys = CosetSystem::new(&field).map_err(err)?;
    let bp = beta_pair_conditions(&sys, field.element(beta1).map_err(err)?, field.element(beta2).map_err(err)?)
        .map_err(err)?;
    let inner = sf::two_quotient_starter(&sys, &bp).map_err(err)?;
    Ok(PyStarter { inner })
}

#[pyfunction]
fn dinitz(q: u64, beta: u64) -> PyResult<PyStarter> {
    let field = sf::Field::with_order(q).map_err(err)?;
    let beta = field.element(beta).map_err(err)?;
    let inner = sf::dinitz_starter(&field, beta).map_err(err)?;
    Ok(PyStarter { inner })
}

/// Checks an arbitrary list of pairs over `F_q`.
#[pyfunction]
fn verify<'py>(py: Python<'py>, q: u64, pairs: Vec<(u64, u64)>) -> PyResult<Bound<'py, PyDict>> {
    let field = sf::Field::with_order(q).map_err(err)?;
    let pairs = pairs_of(&field, pairs)?;
    report_dict(py, &sf::verify_starter(&field, &pairs))
}

/// Parses a JSON record. Raises if the hash does not match.
#[pyfunction]
fn from_json(text: &str) -> PyResult<PyStarter> {
    let rec = StarterRecord::parse(text).map_err(err)?;
    if !rec.hash_matches() {
        return Err(PyValueError::new_err("record hash mismatch"));
    }
    Ok(PyStarter { inner: rec.starter().map_err(err)? })
}

#[pymodule]
fn starter_forge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyStarter>()?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(two_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(dinitz, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(from_json, m)?)?;
    Ok(())
}
