//! Python bindings: fields, spaces and property reports.

use polarium::forms::CanonicalSpaceSpec;
use polarium::gf::{self, Elem};
use polarium::props::{self, CheckOptions, Property};
use polarium::space::{self, BuildOptions, PolarSpace};
use polarium::{cli, hyperbolic, Error};
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

fn err(e: Error) -> PyErr {
    match e {
        Error::ForeignPoint(_) => PyIndexError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_u64() {
            Some(u) => u.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or_default().into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => PyList::new(py, a.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?)?.into_any(),
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

/// A Galois field GF(q); elements are integers in `0..q`.
#[pyclass(frozen, module = "polarium_py")]
struct Field(gf::Field);

impl Field {
    fn check(&self, a: usize) -> PyResult<Elem> {
        if a >= self.0.order() {
            return Err(PyValueError::new_err(format!("{a} is not an element of GF({})", self.0.order())));
        }
        Ok(a as Elem)
    }
}

#[pymethods]
impl Field {
    #[new]
    fn new(q: u64) -> PyResult<Self> {
        gf::Field::of_order(q).map(Field).map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.0.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    fn add(&self, a: usize, b: usize) -> PyResult<Elem> {
        Ok(self.0.add(self.check(a)?, self.check(b)?))
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<Elem> {
        Ok(self.0.mul(self.check(a)?, self.check(b)?))
    }

    fn inv(&self, a: usize) -> PyResult<Elem> {
        self.0.inv(self.check(a)?).map_err(err)
    }

    fn conj(&self, a: usize) -> PyResult<Elem> {
        self.0.conj(self.check(a)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.0.order())
    }
}

/// A finite polar space built from a spec string such as `"W(3,2)"` or `"dual(H(4,4))"`.
#[pyclass(frozen, module = "polarium_py")]
struct Space(PolarSpace);

impl Space {
    fn point(&self, p: usize) -> PyResult<usize> {
        if p >= self.0.num_points() {
            return Err(PyIndexError::new_err(format!("no point {p}")));
        }
        Ok(p)
    }
}

#[pymethods]
impl Space {
    #[new]
    #[pyo3(signature = (spec, max_points = space::DEFAULT_POINT_BOUND))]
    fn new(spec: &str, max_points: usize) -> PyResult<Self> {
        let parsed: CanonicalSpaceSpec = spec.parse().map_err(err)?;
        let opts = BuildOptions { max_points, ..BuildOptions::default() };
        space::build_space(&parsed, &opts).map(Space).map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    fn num_points(&self) -> usize {
        self.0.num_points()
    }

    #[getter]
    fn num_lines(&self) -> usize {
        self.0.num_lines()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn order(&self) -> Option<(usize, usize)> {
        self.0.order()
    }

    fn lines(&self) -> Vec<Vec<u32>> {
        self.0.lines().to_vec()
    }

    fn label<'py>(&self, py: Python<'py>, p: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, self.0.label(self.point(p)?))
    }

    fn collinear(&self, a: usize, b: usize) -> PyResult<bool> {
        Ok(self.0.collinear(self.point(a)?, self.point(b)?))
    }

    fn perp(&self, points: Vec<usize>) -> PyResult<Vec<usize>> {
        Ok(self.0.perp(&points).map_err(err)?.ones().collect())
    }

    fn hyperbolic_line(&self, a: usize, b: usize) -> PyResult<Vec<u32>> {
        hyperbolic::hyperbolic_line(&self.0, self.point(a)?, self.point(b)?).map(|h| h.points).map_err(err)
    }

    fn generators(&self) -> Vec<Vec<u32>> {
        self.0.generators().iter().map(|g| g.points.clone()).collect()
    }

    /// Run the property suite; returns the report as a dict.
    #[pyo3(signature = (props = None, seed = 0))]
    fn check<'py>(&self, py: Python<'py>, props: Option<Vec<String>>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let props: Vec<Property> = match props {
            None => Property::ALL.to_vec(),
            Some(names) => names
                .iter()
                .map(|n| n.parse().map_err(|_| PyValueError::new_err(format!("unknown property {n:?}"))))
                .collect::<PyResult<_>>()?,
        };
        let opts = CheckOptions { seed, ..CheckOptions::default() };
        let report = py.detach(|| props::run_report(&self.0, &props, opts)).map_err(err)?;
        to_py(py, &cli::report_to_json(&self.0, &report))
    }

    fn __len__(&self) -> usize {
        self.0.num_points()
    }

    fn __repr__(&self) -> String {
        format!("Space({:?})", self.0.name())
    }
}

#[pymodule]
fn polarium_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Space>()?;
    Ok(())
}
