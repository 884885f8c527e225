//! Python bindings. Queries take element expressions and return certificates
//! as plain dicts, or `None` when the search is Unknown at the given fuel.

use apartdomain::cli::{self, Domain, Reply};
use apartdomain::finite::FinitePoset;
use apartdomain::{Error, Fuel};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

const DEFAULT_FUEL: usize = 64;

create_exception!(apartdomain_py, ApartdomainError, PyValueError);
create_exception!(apartdomain_py, ReplayError, ApartdomainError);

fn err(e: Error) -> PyErr {
    match e {
        Error::ReplayFailed(_) => ReplayError::new_err(e.to_string()),
        _ => ApartdomainError::new_err(e.to_string()),
    }
}

fn domain(name: &str) -> PyResult<Domain> {
    name.parse().map_err(err)
}

fn fuel(n: usize) -> PyResult<Fuel> {
    if n == 0 {
        return Err(ApartdomainError::new_err("fuel must be at least 1"));
    }
    Ok(Fuel::new(n))
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn from_py(py: Python<'_>, obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = if let Ok(s) = obj.extract::<String>() {
        s
    } else {
        py.import("json")?.call_method1("dumps", (obj,))?.extract()?
    };
    serde_json::from_str(&text).map_err(|e| ApartdomainError::new_err(format!("certificate is not JSON: {e}")))
}

fn answer<'py>(py: Python<'py>, r: Reply) -> PyResult<Option<Bound<'py, PyAny>>> {
    if r.unknown {
        return Ok(None);
    }
    to_py(py, &r.json).map(Some)
}

/// An element of one of the concrete domains, given by its expression.
#[pyclass(frozen, module = "apartdomain_py")]
struct Element {
    domain: Domain,
    #[pyo3(get)]
    expr: String,
}

#[pymethods]
impl Element {
    #[new]
    fn new(domain_name: &str, expr: &str) -> PyResult<Self> {
        let d = domain(domain_name)?;
        cli::check_element(d, expr).map_err(err)?;
        Ok(Element { domain: d, expr: expr.to_string() })
    }

    #[getter]
    fn domain(&self) -> String {
        format!("{:?}", self.domain).to_lowercase()
    }

    #[pyo3(signature = (other, fuel = DEFAULT_FUEL))]
    fn apart<'py>(&self, py: Python<'py>, other: &Element, fuel: usize) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.same_domain(other)?;
        answer(py, cli::apart_query(self.domain, &self.expr, &other.expr, crate::fuel(fuel)?, None).map_err(err)?)
    }

    #[pyo3(signature = (other, fuel = DEFAULT_FUEL))]
    fn hausdorff<'py>(&self, py: Python<'py>, other: &Element, fuel: usize) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.same_domain(other)?;
        answer(py, cli::hausdorff_query(self.domain, &self.expr, &other.expr, crate::fuel(fuel)?, None).map_err(err)?)
    }

    /// Whether the basis code is way below this element.
    #[pyo3(signature = (code, fuel = DEFAULT_FUEL))]
    fn way_below<'py>(&self, py: Python<'py>, code: &str, fuel: usize) -> PyResult<Option<Bound<'py, PyAny>>> {
        answer(py, cli::waybelow_query(self.domain, &self.expr, code, crate::fuel(fuel)?, None).map_err(err)?)
    }

    fn sharp<'py>(&self, py: Python<'py>, a: &str, b: &str) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cli::sharp_oracle_query(self.domain, &self.expr, [a, b], None).map_err(err)?.json)
    }

    fn strongmax<'py>(&self, py: Python<'py>, u: &str, v: &str) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cli::strongmax_oracle_query(self.domain, &self.expr, [u, v], None).map_err(err)?.json)
    }

    fn __repr__(&self) -> String {
        format!("Element({:?}, {:?})", self.domain(), self.expr)
    }
}

impl Element {
    fn same_domain(&self, other: &Element) -> PyResult<()> {
        if self.domain != other.domain {
            return Err(ApartdomainError::new_err(format!(
                "elements live in different domains ({} vs {})",
                self.domain(),
                other.domain()
            )));
        }
        Ok(())
    }
}

/// A finite poset: a builtin name (`sierpinski`, `P`, `chain:3`, ...) or a JSON file path.
#[pyclass(frozen, module = "apartdomain_py")]
struct Poset {
    spec: String,
    inner: FinitePoset,
}

#[pymethods]
impl Poset {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Poset { spec: spec.to_string(), inner: FinitePoset::load(spec).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Poset { spec: "<json>".into(), inner: FinitePoset::from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn leq(&self, a: usize, b: usize) -> PyResult<bool> {
        let n = self.inner.size();
        if a >= n || b >= n {
            return Err(ApartdomainError::new_err(format!("index out of range for a poset of size {n}")));
        }
        Ok(self.inner.leq(a, b))
    }

    fn __repr__(&self) -> String {
        format!("Poset({:?}, size={})", self.spec, self.inner.size())
    }
}

#[pyfunction]
#[pyo3(signature = (domain, x, y, fuel = DEFAULT_FUEL))]
fn apart<'py>(py: Python<'py>, domain: &str, x: &str, y: &str, fuel: usize) -> PyResult<Option<Bound<'py, PyAny>>> {
    answer(py, cli::apart_query(crate::domain(domain)?, x, y, crate::fuel(fuel)?, None).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (domain, x, y, fuel = DEFAULT_FUEL))]
fn hausdorff<'py>(py: Python<'py>, domain: &str, x: &str, y: &str, fuel: usize) -> PyResult<Option<Bound<'py, PyAny>>> {
    answer(py, cli::hausdorff_query(crate::domain(domain)?, x, y, crate::fuel(fuel)?, None).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (domain, x, code, fuel = DEFAULT_FUEL))]
fn way_below<'py>(py: Python<'py>, domain: &str, x: &str, code: &str, fuel: usize) -> PyResult<Option<Bound<'py, PyAny>>> {
    answer(py, cli::waybelow_query(crate::domain(domain)?, x, code, crate::fuel(fuel)?, None).map_err(err)?)
}

#[pyfunction]
fn sharp_query<'py>(py: Python<'py>, domain: &str, x: &str, a: &str, b: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &cli::sharp_oracle_query(crate::domain(domain)?, x, [a, b], None).map_err(err)?.json)
}

#[pyfunction]
fn strongmax_query<'py>(py: Python<'py>, domain: &str, x: &str, u: &str, v: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &cli::strongmax_oracle_query(crate::domain(domain)?, x, [u, v], None).map_err(err)?.json)
}

/// Locatedness of a lower real at rationals `p < q`.
#[pyfunction]
fn located<'py>(py: Python<'py>, x: &str, p: &str, q: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &cli::located_query(x, [p, q], None).map_err(err)?.json)
}

/// Checks `certificate` against the query it claims to answer. `query` names a
/// subcommand (`apart`, `hausdorff`, `waybelow`, `sharp-query`,
/// `strongmax-query`, `located`) and `args` are its positional arguments.
/// Raises `ReplayError` when the certificate does not check out.
#[pyfunction]
fn replay(py: Python<'_>, query: &str, domain: &str, args: Vec<String>, certificate: &Bound<'_, PyAny>) -> PyResult<bool> {
    let d = crate::domain(domain)?;
    let cert = Some(from_py(py, certificate)?);
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(ApartdomainError::new_err(format!("`{query}` takes {n} arguments, got {}", args.len())))
        }
    };
    // replay never searches, so the fuel only has to be valid
    let f = Fuel::new(1);
    let run = match query {
        "apart" => arity(2).map(|_| cli::apart_query(d, &args[0], &args[1], f, cert)),
        "hausdorff" => arity(2).map(|_| cli::hausdorff_query(d, &args[0], &args[1], f, cert)),
        "waybelow" => arity(2).map(|_| cli::waybelow_query(d, &args[0], &args[1], f, cert)),
        "sharp-query" => arity(3).map(|_| cli::sharp_oracle_query(d, &args[0], [&args[1], &args[2]], cert)),
        "strongmax-query" => arity(3).map(|_| cli::strongmax_oracle_query(d, &args[0], [&args[1], &args[2]], cert)),
        "located" => arity(3).map(|_| cli::located_query(&args[0], [&args[1], &args[2]], cert)),
        other => Err(ApartdomainError::new_err(format!("unknown query `{other}`"))),
    }?;
    run.map_err(err)?;
    Ok(true)
}

#[pyfunction]
#[pyo3(signature = (dom, cod, bound = None))]
fn exp_basis<'py>(py: Python<'py>, dom: &str, cod: &str, bound: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &cli::exp_basis(dom, cod, bound).map_err(err)?.json)
}

/// The exhaustive theorem suite on a finite poset; the report has `all_passed`.
#[pyfunction]
#[pyo3(signature = (poset, max_size = apartdomain::finite::DEFAULT_SIZE_CAP))]
fn finite_check<'py>(py: Python<'py>, poset: &str, max_size: usize) -> PyResult<Bound<'py, PyAny>> {
    let (reply, _) = cli::finite_check(poset, max_size).map_err(err)?;
    to_py(py, &reply.json)
}

#[pymodule]
fn apartdomain_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("ApartdomainError", py.get_type::<ApartdomainError>())?;
    m.add("ReplayError", py.get_type::<ReplayError>())?;
    m.add("DEFAULT_FUEL", DEFAULT_FUEL)?;
    m.add_class::<Element>()?;
    m.add_class::<Poset>()?;
    m.add_function(wrap_pyfunction!(apart, m)?)?;
    m.add_function(wrap_pyfunction!(hausdorff, m)?)?;
    m.add_function(wrap_pyfunction!(way_below, m)?)?;
    m.add_function(wrap_pyfunction!(sharp_query, m)?)?;
    m.add_function(wrap_pyfunction!(strongmax_query, m)?)?;
    m.add_function(wrap_pyfunction!(located, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(exp_basis, m)?)?;
    m.add_function(wrap_pyfunction!(finite_check, m)?)?;
    Ok(())
}
