use mkdv5_core::asymptotics::{AsymptoticPrediction, RayData};
use mkdv5_core::evolution::{evolve as evolve_field, EvolveOptions, Startup, WaveField};
use mkdv5_core::harness::{verify as run_verify, Suite};
use mkdv5_core::model_rhp::{wronskian_report, BetaBranch, ParabolicCylinder};
use mkdv5_core::scattering::{scatter as scatter_potential, Potential, ReflectionFunction};
use mkdv5_core::{phase, Complex64, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Numerical(m) => PyRuntimeError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Periodic field samples on `[x0, x0 + length)`.
#[pyclass(name = "WaveField")]
#[derive(Clone)]
struct PyWaveField {
    inner: WaveField,
}

#[pymethods]
impl PyWaveField {
    #[new]
    #[pyo3(signature = (samples, length, x0=None, time=0.0))]
    fn new(samples: Vec<f64>, length: f64, x0: Option<f64>, time: f64) -> PyResult<Self> {
        let inner = WaveField::new(x0.unwrap_or(-length / 2.0), length, time, samples).map_err(to_py)?;
        Ok(PyWaveField { inner })
    }

    /// Samples a named potential (`gaussian:A,w`, `box:h,w`, `sech:A`) on `n` points.
    #[staticmethod]
    fn from_potential(potential: &str, n: usize, length: f64) -> PyResult<Self> {
        let p = Potential::parse(potential).map_err(to_py)?;
        let inner = WaveField::from_fn(n, length, |x| p.eval(x)).map_err(to_py)?;
        Ok(PyWaveField { inner })
    }

    #[getter]
    fn samples(&self) -> Vec<f64> {
        self.inner.samples.clone()
    }

    #[getter]
    fn x(&self) -> Vec<f64> {
        self.inner.xs()
    }

    #[getter]
    fn time(&self) -> f64 {
        self.inner.time
    }

    fn mass(&self) -> f64 {
        self.inner.mass()
    }

    fn l2(&self) -> f64 {
        self.inner.l2()
    }

    fn interpolate(&self, x: f64) -> f64 {
        self.inner.interpolate(x)
    }

    /// Integrates to `t_final` with the ETDRK4 scheme.
    #[pyo3(signature = (t_final, dt=0.005, startup=None))]
    fn evolve(&self, t_final: f64, dt: f64, startup: Option<(f64, f64)>) -> PyResult<Self> {
        let opts = EvolveOptions {
            dt,
            startup: startup.map(|(until, dt)| Startup { until, dt }),
            ..Default::default()
        };
        let ev = evolve_field(&self.inner, &[t_final], &opts).map_err(to_py)?;
        Ok(PyWaveField { inner: ev.final_field().clone() })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// `theta(z; z0) = 16 z^5 - 80 z0^4 z`.
#[pyfunction]
fn theta(z: Complex64, z0: f64) -> PyResult<Complex64> {
    phase::theta(z, z0).map_err(to_py)
}

/// Scattering data `(z, a, b, r)` for a potential spec on the given grid.
#[pyfunction]
fn scatter(potential: &str, z: Vec<f64>) -> PyResult<(Vec<f64>, Vec<Complex64>, Vec<Complex64>, Vec<Complex64>)> {
    let p = Potential::parse(potential).map_err(to_py)?;
    let d = scatter_potential(&p, &z).map_err(to_py)?;
    Ok((d.z, d.a, d.b, d.r))
}

/// Scattering data of a sampled field.
#[pyfunction]
fn scatter_field(field: &PyWaveField, z: Vec<f64>) -> PyResult<(Vec<f64>, Vec<Complex64>)> {
    let p = Potential::Sampled(field.inner.to_potential().map_err(to_py)?);
    let d = scatter_potential(&p, &z).map_err(to_py)?;
    Ok((d.z, d.r))
}

fn prediction_dict<'py>(py: Python<'py>, p: &AsymptoticPrediction) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("x", p.x)?;
    d.set_item("t", p.t)?;
    d.set_item("z0", p.z0)?;
    d.set_item("nu", p.nu)?;
    d.set_item("envelope", p.envelope)?;
    d.set_item("cos_arg", p.cos_arg)?;
    d.set_item("value", p.value)?;
    d.set_item("error_scale", p.error_scale)?;
    Ok(d)
}

/// Closed-form and assembled predictions at time `t` on the ray through `z0`.
#[pyfunction]
#[pyo3(signature = (potential, z0, t, branch="normalized", zmax=1.5, nz=301))]
fn asymptote<'py>(
    py: Python<'py>,
    potential: &str,
    z0: f64,
    t: f64,
    branch: &str,
    zmax: f64,
    nz: usize,
) -> PyResult<(Bound<'py, PyDict>, Bound<'py, PyDict>)> {
    let branch: BetaBranch = branch.parse().map_err(to_py)?;
    let p = Potential::parse(potential).map_err(to_py)?;
    let zs = mkdv5_core::scattering::linspace(-zmax, zmax, nz);
    let d = scatter_potential(&p, &zs).map_err(to_py)?;
    let refl = ReflectionFunction::from_data(&d).map_err(to_py)?;
    let ray = RayData::new(&refl, z0).map_err(to_py)?;
    let x = -80.0 * z0.powi(4) * t;
    let c = ray.closed_form(x, t).map_err(to_py)?;
    let a = ray.assembled(x, t, branch).map_err(to_py)?;
    Ok((prediction_dict(py, &c)?, prediction_dict(py, &a)?))
}

/// `(U(a, z), U'(a, z))`.
#[pyfunction]
fn pcf_u(a: Complex64, z: Complex64) -> PyResult<(Complex64, Complex64)> {
    ParabolicCylinder::new(a).and_then(|p| p.eval(z)).map_err(to_py)
}

/// `(spread, max relative error)` of the numerical Wronskian at `a = -i nu - 1/2`.
#[pyfunction]
fn wronskian_check(nu: f64) -> PyResult<(f64, f64)> {
    let r = wronskian_report(nu, &[1.0, 2.0, 4.0]).map_err(to_py)?;
    Ok((r.spread, r.max_error))
}

/// Runs a verification suite; returns `(name, value, tolerance, passed)` rows.
#[pyfunction]
#[pyo3(signature = (suite="all"))]
fn verify(suite: &str) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let s: Suite = suite.parse().map_err(to_py)?;
    let r = run_verify(s).map_err(to_py)?;
    Ok(r.checks.into_iter().map(|c| (c.name, c.value, c.tolerance, c.passed)).collect())
}

#[pymodule]
fn mkdv5(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWaveField>()?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(scatter, m)?)?;
    m.add_function(wrap_pyfunction!(scatter_field, m)?)?;
    m.add_function(wrap_pyfunction!(asymptote, m)?)?;
    m.add_function(wrap_pyfunction!(pcf_u, m)?)?;
    m.add_function(wrap_pyfunction!(wronskian_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
