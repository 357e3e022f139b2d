//! Python module `sysmap`.
//!
//! Matrices are wrapped; structured results (spectral enclosures, bound
//! reports) come back as plain dicts.

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use sysmap_core::bounds::{self, TableFamily};
use sysmap_core::matrix::TransitionMatrix;
use sysmap_core::surfaces::{self, CollarFamily, RationalRay, RayPoint, Surface};
use sysmap_core::{mixing, spectral, twist, Error};

create_exception!(sysmap, PreconditionError, PyValueError);
create_exception!(sysmap, FalsificationError, PyException);

fn err(e: Error) -> PyErr {
    if e.is_falsification() {
        FalsificationError::new_err(e.to_string())
    } else {
        PreconditionError::new_err(e.to_string())
    }
}

/// Round-trip through `json.loads` so nested results arrive as dicts.
fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn ray(p: u64, q: u64) -> PyResult<RationalRay> {
    RationalRay::new(p, q).map_err(err)
}

#[pyclass(name = "Matrix", module = "sysmap", frozen)]
struct PyMatrix {
    inner: TransitionMatrix,
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(rows: Vec<Vec<BigUint>>) -> PyResult<Self> {
        Ok(Self {
            inner: TransitionMatrix::from_rows(&rows).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: TransitionMatrix::from_json(text).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn provenance(&self) -> &str {
        self.inner.provenance()
    }

    fn rows(&self) -> Vec<Vec<BigUint>> {
        self.inner.rows().map(<[BigUint]>::to_vec).collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn column_sums(&self) -> Vec<BigUint> {
        self.inner.column_sums()
    }

    fn row_sums(&self) -> Vec<BigUint> {
        self.inner.row_sums()
    }

    fn __pow__(&self, exp: u32, _modulo: Option<u32>) -> Self {
        Self {
            inner: self.inner.pow(exp),
        }
    }

    fn __matmul__(&self, other: &PyMatrix) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.mul(&other.inner).map_err(err)?,
        })
    }

    fn __eq__(&self, other: &PyMatrix) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Matrix(dim={}, provenance={:?})",
            self.inner.dim(),
            self.inner.provenance()
        )
    }
}

/// `(genus, punctures)` of `S_{p,q+2}`.
#[pyfunction]
fn base_surface(p: u64, q: u64) -> PyResult<(u64, u64)> {
    let s = surfaces::base_surface(&ray(p, q)?).map_err(err)?;
    Ok((s.genus(), s.punctures()))
}

/// `(genus, punctures)` of the degree-`i` cyclic cover.
#[pyfunction]
fn cover_invariants(p: u64, q: u64, i: u64) -> PyResult<(u64, u64)> {
    let s = surfaces::cover_invariants(&RayPoint::new(ray(p, q)?, i).map_err(err)?);
    Ok((s.genus(), s.punctures()))
}

#[pyfunction]
fn euler_characteristic(genus: u64, punctures: u64) -> PyResult<i64> {
    Ok(Surface::new(genus, punctures)
        .map_err(err)?
        .euler_characteristic())
}

#[pyfunction]
fn systole_upper_bound(genus: u64, punctures: u64) -> PyResult<f64> {
    surfaces::systole_upper_bound(&Surface::new(genus, punctures).map_err(err)?).map_err(err)
}

#[pyfunction]
fn collar_width(length: f64) -> PyResult<f64> {
    surfaces::collar_width(length).map_err(err)
}

/// Collar constant `N` along a ray (`ray=(p, q)`) or for a fixed genus.
#[pyfunction]
#[pyo3(signature = (*, ray=None, genus=None))]
fn collar_constant(ray: Option<(u64, u64)>, genus: Option<u64>) -> PyResult<f64> {
    let family = match (ray, genus) {
        (Some((p, q)), None) => CollarFamily::Ray(self::ray(p, q)?),
        (None, Some(g)) => CollarFamily::FixedGenus(g),
        _ => return Err(PyValueError::new_err("give exactly one of ray, genus")),
    };
    surfaces::ray_collar_constant(&family).map_err(err)
}

#[pyfunction]
fn transition_matrix_base(p: u64, q: u64, i: u64) -> PyResult<PyMatrix> {
    Ok(PyMatrix {
        inner: twist::transition_matrix_base(&ray(p, q)?, i).map_err(err)?,
    })
}

#[pyfunction]
fn lifted_root_matrix(p: u64, q: u64, i: u64) -> PyResult<PyMatrix> {
    Ok(PyMatrix {
        inner: twist::lifted_root_matrix(&ray(p, q)?, i).map_err(err)?,
    })
}

/// Certified enclosure `{lower, upper, iterations, power, converged}`.
#[pyfunction]
#[pyo3(signature = (m, tol=spectral::DEFAULT_TOLERANCE))]
fn spectral_radius<'py>(py: Python<'py>, m: &PyMatrix, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    let r = py
        .detach(|| spectral::spectral_radius(&m.inner, tol))
        .map_err(err)?;
    to_py(py, &r)
}

/// Closed-form and computed root-map log-dilatation; raises
/// `FalsificationError` if the computed value exceeds the closed form.
#[pyfunction]
fn root_dilatation_bound<'py>(
    py: Python<'py>,
    p: u64,
    q: u64,
    i: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = ray(p, q)?;
    let d = py
        .detach(|| spectral::root_dilatation_bound(&r, i))
        .map_err(err)?;
    to_py(py, &d)
}

/// Least `r <= cap` with `m^r` positive, or `None`.
#[pyfunction]
fn mixing_number(py: Python<'_>, m: &PyMatrix, cap: usize) -> PyResult<Option<usize>> {
    Ok(py
        .detach(|| mixing::mixing_number(&m.inner, cap))
        .map_err(err)?
        .mixing_number)
}

#[pyfunction]
fn k_upper_bound(genus: u64, punctures: u64, n: f64) -> PyResult<f64> {
    bounds::k_upper_bound(&Surface::new(genus, punctures).map_err(err)?, n).map_err(err)
}

#[pyfunction]
fn k_lower_bound_ray<'py>(py: Python<'py>, p: u64, q: u64, i: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = ray(p, q)?;
    let lb = py
        .detach(|| bounds::k_lower_bound_ray(&r, i))
        .map_err(err)?;
    to_py(py, &lb)
}

#[pyfunction]
fn k_lower_bound_fixed_genus(g: u64, n: u64, c1: f64, c2: f64) -> PyResult<f64> {
    bounds::k_lower_bound_fixed_genus(g, n, c1, c2).map_err(err)
}

#[pyfunction]
fn wolpert_distance_lower_bound(l_x: f64, l_y: f64) -> PyResult<f64> {
    bounds::wolpert_distance_lower_bound(l_x, l_y).map_err(err)
}

fn family(ray: Option<(u64, u64)>, genus: Option<u64>, c1: f64, c2: f64) -> PyResult<TableFamily> {
    match (ray, genus) {
        (Some((p, q)), None) => Ok(TableFamily::Ray(self::ray(p, q)?)),
        (None, Some(genus)) => Ok(TableFamily::FixedGenus { genus, c1, c2 }),
        _ => Err(PyValueError::new_err("give exactly one of ray, genus")),
    }
}

/// Bound reports for each index, as a list of dicts.
#[pyfunction]
#[pyo3(signature = (indices, *, ray=None, genus=None, n_override=None, c1=1.0, c2=1.0))]
fn sandwich_table<'py>(
    py: Python<'py>,
    indices: Vec<u64>,
    ray: Option<(u64, u64)>,
    genus: Option<u64>,
    n_override: Option<f64>,
    c1: f64,
    c2: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let fam = family(ray, genus, c1, c2)?;
    let rows = py
        .detach(|| bounds::sandwich_table(&fam, &indices, n_override))
        .map_err(err)?;
    to_py(py, &rows)
}

/// The same table rendered as CSV.
#[pyfunction]
#[pyo3(signature = (indices, *, ray=None, genus=None, n_override=None, c1=1.0, c2=1.0))]
fn sandwich_table_csv(
    py: Python<'_>,
    indices: Vec<u64>,
    ray: Option<(u64, u64)>,
    genus: Option<u64>,
    n_override: Option<f64>,
    c1: f64,
    c2: f64,
) -> PyResult<String> {
    let fam = family(ray, genus, c1, c2)?;
    let rows = py
        .detach(|| bounds::sandwich_table(&fam, &indices, n_override))
        .map_err(err)?;
    Ok(bounds::to_csv(&rows))
}

/// Populate a module object; used by the extension entry point and tests.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("PreconditionError", py.get_type::<PreconditionError>())?;
    m.add("FalsificationError", py.get_type::<FalsificationError>())?;
    m.add_class::<PyMatrix>()?;
    m.add_function(wrap_pyfunction!(base_surface, m)?)?;
    m.add_function(wrap_pyfunction!(cover_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(euler_characteristic, m)?)?;
    m.add_function(wrap_pyfunction!(systole_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(collar_width, m)?)?;
    m.add_function(wrap_pyfunction!(collar_constant, m)?)?;
    m.add_function(wrap_pyfunction!(transition_matrix_base, m)?)?;
    m.add_function(wrap_pyfunction!(lifted_root_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_radius, m)?)?;
    m.add_function(wrap_pyfunction!(root_dilatation_bound, m)?)?;
    m.add_function(wrap_pyfunction!(mixing_number, m)?)?;
    m.add_function(wrap_pyfunction!(k_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(k_lower_bound_ray, m)?)?;
    m.add_function(wrap_pyfunction!(k_lower_bound_fixed_genus, m)?)?;
    m.add_function(wrap_pyfunction!(wolpert_distance_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(sandwich_table, m)?)?;
    m.add_function(wrap_pyfunction!(sandwich_table_csv, m)?)?;
    m.add("CSV_HEADER", bounds::CSV_HEADER.to_vec())?;
    Ok(())
}

#[pymodule]
fn sysmap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
