//! Python bindings for `dmbetti`.
//!
//! Rationals cross the boundary as `fractions.Fraction` (inputs may also be
//! ints or `"p/q"` strings); Betti vectors are `dict[int, Fraction]`.

use dmbetti::betti::{flatten as flatten_table, BettiTable, BettiVector};
use dmbetti::dm::{self, FreeDM as CoreDM};
use dmbetti::kt::{self, Barcode};
use dmbetti::pure::{enumerate_pure_vectors, pure_vectors_supported_in};
use dmbetti::random::{random_kt_batch, RandomKtParams};
use dmbetti::rational::{self, Rational};
use dmbetti::sheaf::{self, SheafSpec};
use dmbetti::{pairing, polyhedra, ConeV, Error, Poly, Ring};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(pydmbetti, DmbettiError, PyException, "A domain error raised by dmbetti.");

fn err(e: Error) -> PyErr {
    DmbettiError::new_err(format!("{}: {e}", e.kind()))
}

fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    rational::parse(&obj.str()?.to_cow()?).map_err(err)
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.numer().clone(), q.denom().clone()))
}

fn to_vector(d: &Bound<'_, PyDict>) -> PyResult<BettiVector> {
    let mut entries = Vec::with_capacity(d.len());
    for (k, v) in d.iter() {
        entries.push((k.extract::<i64>()?, to_rational(&v)?));
    }
    Ok(BettiVector::from_entries(entries))
}

fn from_vector<'py>(py: Python<'py>, v: &BettiVector) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (j, x) in v.iter() {
        d.set_item(j, fraction(py, x)?)?;
    }
    Ok(d)
}

fn to_dense(xs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    xs.iter().map(to_rational).collect()
}

fn fractions<'py>(py: Python<'py>, xs: &[Rational]) -> PyResult<Bound<'py, PyList>> {
    let items = xs.iter().map(|x| fraction(py, x)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

/// Serializes through JSON for nested report types.
fn via_json<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| DmbettiError::new_err(e.to_string()))?;
    py.import("json")?.getattr("loads")?.call1((text,))
}

fn bars(b: &Barcode) -> Vec<(i64, u32, u64)> {
    b.iter().collect()
}

fn ring(nvars: Option<usize>) -> Ring {
    match nvars {
        Some(n) => Ring::Multivariate(n),
        None => Ring::Univariate,
    }
}

/// A free graded differential module `⊕ R(−gens[i])` with its differential.
#[pyclass(name = "FreeDM", module = "pydmbetti", frozen, from_py_object)]
#[derive(Clone)]
struct PyFreeDM {
    inner: CoreDM,
}

#[pymethods]
impl PyFreeDM {
    /// `nvars=None` means the univariate ring `k[t]`, written in `t`;
    /// otherwise the variables are `x1, …, xn`.
    #[new]
    #[pyo3(signature = (gens, matrix, a=0, nvars=None))]
    fn new(gens: Vec<i64>, matrix: Vec<Vec<String>>, a: i64, nvars: Option<usize>) -> PyResult<Self> {
        let r = ring(nvars);
        let entries = matrix
            .iter()
            .map(|row| row.iter().map(|s| Poly::parse(r, s)).collect::<dmbetti::Result<Vec<_>>>())
            .collect::<dmbetti::Result<Vec<_>>>()
            .map_err(err)?;
        let inner = CoreDM::new(r, a, gens, entries).map_err(err)?;
        Ok(PyFreeDM { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| DmbettiError::new_err(e.to_string()))?;
        Ok(PyFreeDM { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("modules serialize")
    }

    #[getter]
    fn gens(&self) -> Vec<i64> {
        self.inner.gens().to_vec()
    }

    #[getter]
    fn degree(&self) -> i64 {
        self.inner.degree()
    }

    fn __len__(&self) -> usize {
        self.inner.rank()
    }

    fn matrix(&self) -> Vec<Vec<String>> {
        let n = self.inner.rank();
        (0..n).map(|r| (0..n).map(|c| self.inner.entry(r, c).to_string()).collect()).collect()
    }

    /// Raises unless the matrix is homogeneous and squares to zero.
    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(err)
    }

    fn is_minimal(&self) -> bool {
        self.inner.is_minimal()
    }

    fn minimalize(&self) -> PyResult<Self> {
        Ok(PyFreeDM { inner: dm::minimalize(&self.inner).map_err(err)? })
    }

    /// Betti vector of the minimalized module.
    fn betti<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        from_vector(py, &dm::minimal_betti_vector(&self.inner).map_err(err)?)
    }

    /// Homology bars `(p, q, multiplicity)` of a degree-zero module over `k[t]`.
    fn barcode(&self) -> PyResult<Vec<(i64, u32, u64)>> {
        Ok(bars(&kt::barcode(&self.inner).map_err(err)?))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("FreeDM(gens={:?}, a={})", self.inner.gens(), self.inner.degree())
    }
}

/// A line bundle or supernatural bundle on projective space.
#[pyclass(name = "Sheaf", module = "pydmbetti", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySheaf {
    inner: SheafSpec,
}

#[pymethods]
impl PySheaf {
    #[staticmethod]
    fn line_bundle(m: u32, d: i64) -> Self {
        PySheaf { inner: SheafSpec::line_bundle(m, d) }
    }

    /// Roots must be strictly decreasing.
    #[staticmethod]
    fn supernatural(roots: Vec<i64>) -> PyResult<Self> {
        Ok(PySheaf { inner: SheafSpec::supernatural(roots).map_err(err)? })
    }

    #[getter]
    fn roots(&self) -> Vec<i64> {
        self.inner.roots()
    }

    fn gamma<'py>(&self, py: Python<'py>, j: i64) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &sheaf::gamma(&self.inner, j))
    }

    fn __repr__(&self) -> String {
        match &self.inner {
            SheafSpec::LineBundle { m, d } => format!("Sheaf.line_bundle({m}, {d})"),
            SheafSpec::Supernatural { roots } => format!("Sheaf.supernatural({roots:?})"),
        }
    }
}

/// Fold of the Koszul complex on `x1^e1, …, xn^en` in degree `a`.
#[pyfunction]
#[pyo3(signature = (exponents, a=0))]
fn fold_koszul(exponents: Vec<u32>, a: i64) -> PyResult<PyFreeDM> {
    let k = dm::koszul(Ring::Multivariate(exponents.len()), &exponents).map_err(err)?;
    Ok(PyFreeDM { inner: dm::fold(&k, a).map_err(err)? })
}

/// Flattens `{(i, j): value}` in degree `a`.
#[pyfunction]
fn flatten<'py>(py: Python<'py>, table: &Bound<'py, PyDict>, a: i64) -> PyResult<Bound<'py, PyDict>> {
    let mut entries = Vec::with_capacity(table.len());
    for (key, v) in table.iter() {
        let (i, j): (u32, i64) = key.extract()?;
        entries.push((i, j, to_rational(&v)?));
    }
    from_vector(py, &flatten_table(&BettiTable::from_entries(entries), a))
}

/// `[(degree_sequence, vector), …]` for the pure vectors of a window.
#[pyfunction]
#[pyo3(signature = (n, window, a=0, supported_in=false))]
fn pure_vectors<'py>(
    py: Python<'py>,
    n: usize,
    window: (i64, i64),
    a: i64,
    supported_in: bool,
) -> PyResult<Vec<(Vec<i64>, Bound<'py, PyDict>)>> {
    let list = if supported_in { pure_vectors_supported_in(n, a, window) } else { enumerate_pure_vectors(n, a, window) }
        .map_err(err)?;
    list.iter().map(|p| Ok((p.degseq.degrees().to_vec(), from_vector(py, &p.vector)?))).collect()
}

/// Chain decomposition `[(coeff, k, l), …]` with `Σ coeff (e_k + e_l) = vector`.
#[pyfunction]
fn decompose<'py>(py: Python<'py>, vector: &Bound<'py, PyDict>) -> PyResult<Vec<(Bound<'py, PyAny>, i64, i64)>> {
    let pairs = kt::decompose(&to_vector(vector)?).map_err(err)?;
    pairs.iter().map(|p| Ok((fraction(py, &p.coeff)?, p.k, p.l))).collect()
}

#[pyfunction]
fn in_cone_t(vector: &Bound<'_, PyDict>) -> PyResult<bool> {
    Ok(kt::in_cone_t(&to_vector(vector)?))
}

/// `j ↦ β_j · γ_{−j}(sheaf)`.
#[pyfunction]
fn phi<'py>(py: Python<'py>, betti: &Bound<'py, PyDict>, sheaf: &PySheaf) -> PyResult<Bound<'py, PyDict>> {
    from_vector(py, &pairing::phi_vector(&to_vector(betti)?, &sheaf.inner))
}

fn cone(window: (i64, i64), generators: &[Vec<Bound<'_, PyAny>>]) -> PyResult<ConeV> {
    let gens = generators.iter().map(|g| to_dense(g)).collect::<PyResult<Vec<_>>>()?;
    ConeV::new(window, gens).map_err(err)
}

/// `{"inequalities": [[int]], "equations": [[int]]}` for the cone.
#[pyfunction]
fn cone_facets<'py>(
    py: Python<'py>,
    window: (i64, i64),
    generators: Vec<Vec<Bound<'py, PyAny>>>,
) -> PyResult<Bound<'py, PyDict>> {
    let h = polyhedra::v_to_h(&cone(window, &generators)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("inequalities", h.inequalities)?;
    d.set_item("equations", h.equations)?;
    Ok(d)
}

/// `(True, coefficients)` or `(False, separating_functional)`.
#[pyfunction]
fn cone_member<'py>(
    py: Python<'py>,
    vector: Vec<Bound<'py, PyAny>>,
    window: (i64, i64),
    generators: Vec<Vec<Bound<'py, PyAny>>>,
) -> PyResult<(bool, Bound<'py, PyList>)> {
    let m = polyhedra::membership(&to_dense(&vector)?, &cone(window, &generators)?).map_err(err)?;
    match &m {
        polyhedra::Membership::Inside { coefficients } => Ok((true, fractions(py, coefficients)?)),
        polyhedra::Membership::Outside { functional } => Ok((false, fractions(py, functional)?)),
    }
}

/// Facet audit of the `n`-variable pure cone, as a plain dict.
#[pyfunction]
#[pyo3(signature = (n, window, radius=8))]
fn audit<'py>(py: Python<'py>, n: usize, window: (i64, i64), radius: i64) -> PyResult<Bound<'py, PyAny>> {
    via_json(py, &pairing::audit_conjecture(n, window, radius).map_err(err)?)
}

/// Seeded random modules over `k[t]` paired with their known bars.
#[pyfunction]
#[pyo3(signature = (seed, count=1))]
fn random_kt(seed: u64, count: usize) -> PyResult<Vec<(PyFreeDM, Vec<(i64, u32, u64)>)>> {
    let samples = random_kt_batch(seed, count, &RandomKtParams::default()).map_err(err)?;
    Ok(samples.into_iter().map(|s| (PyFreeDM { inner: s.dm }, bars(&s.barcode))).collect())
}

/// Betti vector of a barcode given as `[(p, q, multiplicity)]`.
#[pyfunction]
fn betti_from_bars<'py>(py: Python<'py>, bars: Vec<(i64, u32, u64)>) -> PyResult<Bound<'py, PyDict>> {
    from_vector(py, &kt::betti_from_barcode(&Barcode::from_bars(&bars)))
}

#[pymodule]
fn pydmbetti(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DmbettiError", m.py().get_type::<DmbettiError>())?;
    m.add_class::<PyFreeDM>()?;
    m.add_class::<PySheaf>()?;
    m.add_function(wrap_pyfunction!(fold_koszul, m)?)?;
    m.add_function(wrap_pyfunction!(flatten, m)?)?;
    m.add_function(wrap_pyfunction!(pure_vectors, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(in_cone_t, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(cone_facets, m)?)?;
    m.add_function(wrap_pyfunction!(cone_member, m)?)?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    m.add_function(wrap_pyfunction!(random_kt, m)?)?;
    m.add_function(wrap_pyfunction!(betti_from_bars, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
