//! Python bindings. Exact values cross the boundary as `fractions.Fraction`;
//! nested reports (profiles, bound metadata) come back as plain dicts with
//! rationals rendered as "p/q" strings.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyTuple};

use srr_core::bounds::{self, BoundReport, BOUND_NAMES};
use srr_core::polyhedra::{self, dantzig_max, knapsack_volume};
use srr_core::rational::{self, Rational};
use srr_core::recovery::{self, RecoverySet};
use srr_core::region::{self, DemandVector, Membership, VolumeKind};
use srr_core::{code, io, Error};

create_exception!(srr, GuardError, PyException, "An enumeration guard or projection cap was exceeded.");

fn err(e: Error) -> PyErr {
    match e {
        Error::TooLarge { .. } | Error::Explosion { .. } => GuardError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Accepts int, Fraction, or anything whose str() parses as a rational.
fn to_q(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    rational::parse(&text).map_err(err)
}

fn to_qs(obj: &Bound<'_, PyAny>) -> PyResult<Vec<Rational>> {
    obj.try_iter()?.map(|x| to_q(&x?)).collect()
}

fn fraction<'py>(py: Python<'py>, v: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((rational::fmt(v),))
}

fn fractions<'py>(py: Python<'py>, v: &[Rational]) -> PyResult<Bound<'py, PyTuple>> {
    let items = v.iter().map(|x| fraction(py, x)).collect::<PyResult<Vec<_>>>()?;
    PyTuple::new(py, items)
}

fn points<'py>(py: Python<'py>, pts: &[Vec<Rational>]) -> PyResult<Bound<'py, PyList>> {
    let items = pts.iter().map(|p| fractions(py, p)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn json<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((v.to_string(),))
}

/// A k x n generator matrix over a finite field.
#[pyclass(name = "GeneratorMatrix", module = "srr", frozen)]
struct PyGenerator(srr_core::GeneratorMatrix);

#[pymethods]
impl PyGenerator {
    /// Matrix over the prime field F_q from a list of rows.
    #[new]
    fn new(rows: Vec<Vec<u32>>, q: u64) -> PyResult<Self> {
        srr_core::GeneratorMatrix::over_prime(q, &rows).map(Self).map_err(err)
    }

    /// Parses the plain-text matrix file format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        io::parse_matrix(text).map(Self).map_err(err)
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.field().order()
    }

    fn rows(&self) -> Vec<Vec<u32>> {
        self.0.matrix().to_rows()
    }

    fn to_text(&self) -> String {
        io::format_matrix(&self.0)
    }

    fn profile<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let p = code::code_profile(&self.0).map_err(err)?;
        json(py, &serde_json::to_value(p).expect("serializable"))
    }

    fn min_distance(&self) -> PyResult<usize> {
        code::min_distance(&self.0).map_err(err)
    }

    fn dual_min_distance(&self) -> PyResult<usize> {
        code::dual_min_distance(&self.0).map_err(err)
    }

    fn is_mds(&self) -> PyResult<bool> {
        code::is_mds(&self.0).map_err(err)
    }

    /// `R^min(G)`.
    fn recovery_system(&self) -> PyResult<PyRecovery> {
        recovery::minimal_recovery_system(&self.0).map(PyRecovery).map_err(err)
    }

    /// Named outer bound: one of dual, sysnode, hybrid, uniform.
    fn bound(&self, name: &str) -> PyResult<PyBound> {
        let r = match name {
            "dual" => bounds::dual_distance_bound(&self.0),
            "sysnode" => bounds::systematic_node_bound(&self.0),
            "hybrid" => bounds::hybrid_bound(&self.0),
            "uniform" => bounds::uniform_size_bound(&self.0),
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown bound {other:?}; valid names: {}",
                    BOUND_NAMES[..4].join(", ")
                )))
            }
        };
        r.map(PyBound).map_err(err)
    }

    /// `sum_{i in objects} λ_i <= rhs`, objects 1-based.
    fn hyperplane_bound(&self, objects: Vec<usize>) -> PyResult<PyBound> {
        let zero_based = objects
            .iter()
            .map(|&i| i.checked_sub(1).ok_or_else(|| PyValueError::new_err("objects are 1-based")))
            .collect::<PyResult<Vec<_>>>()?;
        bounds::hyperplane_bound(&self.0, &zero_based).map(PyBound).map_err(err)
    }

    /// Exact volume of Λ(G): closed form when one applies, else triangulation.
    #[pyo3(signature = (method = "auto"))]
    fn volume<'py>(&self, py: Python<'py>, method: &str) -> PyResult<Bound<'py, PyAny>> {
        let kind = region::detect_volume_kind(&self.0).map_err(err)?;
        let v = match (method, kind) {
            ("auto" | "closed-form", Some(kind)) => region::closed_form_volume(&kind).map_err(err)?,
            ("closed-form", None) => return Err(err(Error::RegimeViolation("no closed form applies".into()))),
            ("auto" | "triangulate", _) => {
                let sys = recovery::minimal_recovery_system(&self.0).map_err(err)?;
                let r = region::region_polytope(&sys, &Rational::from_integer(1.into())).map_err(err)?;
                polyhedra::volume(&r.v).map_err(err)?.volume
            }
            (other, _) => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
        };
        fraction(py, &v)
    }

    fn __repr__(&self) -> String {
        format!("GeneratorMatrix(k={}, n={}, q={})", self.0.k(), self.0.n(), self.0.field().order())
    }
}

/// One collection of recovery sets per object.
#[pyclass(name = "RecoverySystem", module = "srr", frozen)]
struct PyRecovery(srr_core::RecoverySystem);

#[pymethods]
impl PyRecovery {
    /// From 1-based server labels, one list of sets per object.
    #[new]
    fn new(n: usize, sets: Vec<Vec<Vec<usize>>>) -> PyResult<Self> {
        let sets = sets
            .iter()
            .map(|obj| obj.iter().map(|s| RecoverySet::from_labels(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        srr_core::RecoverySystem::new(n, sets).map(Self).map_err(err)
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    /// 1-based labels, in (size, lexicographic) order.
    fn sets(&self) -> Vec<Vec<Vec<usize>>> {
        self.0
            .objects()
            .iter()
            .map(|obj| obj.iter().map(RecoverySet::labels).collect())
            .collect()
    }

    /// `None` when outside, otherwise a dict with the certificate.
    #[pyo3(signature = (lam, mu = None, integerize = false))]
    fn member<'py>(
        &self,
        py: Python<'py>,
        lam: &Bound<'py, PyAny>,
        mu: Option<&Bound<'py, PyAny>>,
        integerize: bool,
    ) -> PyResult<Option<Bound<'py, PyDict>>> {
        let lam = DemandVector::new(to_qs(lam)?).map_err(err)?;
        let mu = mu.map(to_q).transpose()?.unwrap_or_else(|| Rational::from_integer(1.into()));
        let Membership::Inside(a) = region::srr_membership(&self.0, &mu, &lam).map_err(err)? else {
            return Ok(None);
        };
        let out = PyDict::new(py);
        let alloc = PyList::empty(py);
        for ((i, set), v) in a.index.entries().iter().zip(&a.values) {
            alloc.append((i + 1, set.labels(), fraction(py, v)?))?;
        }
        out.set_item("allocation", alloc)?;
        out.set_item("rates", fractions(py, &a.rates())?)?;
        out.set_item("loads", fractions(py, &a.loads())?)?;
        if integerize {
            let (s, ia) = region::to_integer_allocation(&a).map_err(err)?;
            out.set_item("s", s.to_string().parse::<u64>().ok())?;
            out.set_item("integer", json(py, &ia.to_json())?)?;
        }
        Ok(Some(out))
    }

    #[pyo3(signature = (mu = None))]
    fn region(&self, mu: Option<&Bound<'_, PyAny>>) -> PyResult<PyRegion> {
        let mu = mu.map(to_q).transpose()?.unwrap_or_else(|| Rational::from_integer(1.into()));
        region::region_polytope(&self.0, &mu).map(PyRegion).map_err(err)
    }

    /// λ, λ_i*, λ*, h, δ and λ^r for each requested r.
    #[pyo3(signature = (rs = Vec::new()))]
    fn params<'py>(&self, py: Python<'py>, rs: Vec<u32>) -> PyResult<Bound<'py, PyDict>> {
        let p = region::region_params(&self.0, &rs).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("max_sum", fraction(py, &p.max_sum)?)?;
        out.set_item("axis_maxima", fractions(py, &p.axis_maxima)?)?;
        out.set_item("lambda_star", fraction(py, &p.lambda_star)?)?;
        out.set_item("h", fraction(py, &p.h)?)?;
        out.set_item("delta", fraction(py, &p.delta)?)?;
        let powers = PyDict::new(py);
        for (r, v) in &p.r_max_sums {
            powers.set_item(r, fraction(py, v)?)?;
        }
        out.set_item("r_max_sums", powers)?;
        Ok(out)
    }

    /// `b·λ <= rhs` from the relaxed knapsack over the allocation polytope.
    fn clip_bound(&self, b: &Bound<'_, PyAny>) -> PyResult<PyBound> {
        bounds::clip_srr_bound(&self.0, &to_qs(b)?).map(PyBound).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("RecoverySystem(k={}, n={}, sets={})", self.0.k(), self.0.n(), self.0.allocation_len())
    }
}

/// A region with matched H- and V-representations.
#[pyclass(name = "Region", module = "srr", frozen)]
struct PyRegion(region::Region);

#[pymethods]
impl PyRegion {
    #[getter]
    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        points(py, self.0.v.vertices())
    }

    /// `(a, b)` pairs for the inequalities `a·x <= b`.
    #[getter]
    fn facets<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let items = self
            .0
            .h
            .a()
            .iter()
            .zip(self.0.h.b())
            .map(|(a, b)| Ok((fractions(py, a)?, fraction(py, b)?)))
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, items)
    }

    fn contains(&self, x: &Bound<'_, PyAny>) -> PyResult<bool> {
        let x = to_qs(x)?;
        if x.len() != self.0.h.dim() {
            return Err(err(Error::LengthMismatch {
                expected: self.0.h.dim(),
                got: x.len(),
            }));
        }
        Ok(self.0.h.contains(&x))
    }

    fn volume<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &polyhedra::volume(&self.0.v).map_err(err)?.volume)
    }

    fn to_csv(&self) -> String {
        self.0.v.to_csv()
    }

    fn __len__(&self) -> usize {
        self.0.v.vertices().len()
    }
}

/// An outer bound on the region.
#[pyclass(name = "Bound", module = "srr", frozen)]
struct PyBound(BoundReport);

#[pymethods]
impl PyBound {
    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    #[getter]
    fn family(&self) -> String {
        self.0.family.clone()
    }

    /// `(lhs, rhs, satisfied)` at a demand vector.
    fn evaluate<'py>(&self, py: Python<'py>, lam: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyTuple>> {
        let lam = DemandVector::new(to_qs(lam)?).map_err(err)?;
        let e = self.0.evaluate(&lam).map_err(err)?;
        PyTuple::new(
            py,
            [fraction(py, &e.lhs)?, fraction(py, &e.rhs)?, e.satisfied.into_pyobject(py)?.to_owned().into_any()],
        )
    }

    /// Vertices of the bound polytope, or `None` when it is unbounded.
    fn polygon<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyList>>> {
        match polyhedra::enumerate_vertices(&self.0.polytope().map_err(err)?) {
            Ok(v) => Ok(Some(points(py, v.vertices())?)),
            Err(Error::Unbounded) => Ok(None),
            Err(e) => Err(err(e)),
        }
    }

    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json(py, &serde_json::to_value(&self.0).expect("serializable"))
    }

    fn __repr__(&self) -> String {
        format!("Bound({})", self.0.name)
    }
}

/// Closed-form volume: kind is "mds2", "mds3" (with n) or "replication" (with s).
#[pyfunction]
#[pyo3(signature = (kind, n = None, s = None))]
fn closed_form_volume<'py>(
    py: Python<'py>,
    kind: &str,
    n: Option<usize>,
    s: Option<Vec<usize>>,
) -> PyResult<Bound<'py, PyAny>> {
    let need_n = || n.ok_or_else(|| PyValueError::new_err("n is required"));
    let kind = match kind {
        "mds2" => VolumeKind::Mds2 { n: need_n()? },
        "mds3" => VolumeKind::Mds3 { n: need_n()? },
        "replication" => VolumeKind::Replication {
            s: s.ok_or_else(|| PyValueError::new_err("s is required"))?,
        },
        other => return Err(PyValueError::new_err(format!("unknown kind {other:?}"))),
    };
    fraction(py, &region::closed_form_volume(&kind).map_err(err)?)
}

/// Volume of `{x in [0,1]^m : y·x <= cap}`.
#[pyfunction]
fn knapsack<'py>(py: Python<'py>, y: &Bound<'py, PyAny>, cap: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &knapsack_volume(&to_qs(y)?, &to_q(cap)?).map_err(err)?)
}

/// Greedy optimum of `max c·x` over the relaxed knapsack: `(value, point)`.
#[pyfunction]
fn dantzig<'py>(
    py: Python<'py>,
    c: &Bound<'py, PyAny>,
    y: &Bound<'py, PyAny>,
    cap: &Bound<'py, PyAny>,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyTuple>)> {
    let sol = dantzig_max(&to_qs(c)?, &to_qs(y)?, &to_q(cap)?).map_err(err)?;
    Ok((fraction(py, &sol.value)?, fractions(py, &sol.point)?))
}

/// Reed–Solomon style a x b Vandermonde matrix over F_q.
#[pyfunction]
fn rs_matrix(a: usize, b: usize, q: u64, alpha: u32) -> PyResult<PyGenerator> {
    code::rs_matrix(a, b, q, alpha).map(PyGenerator).map_err(err)
}

#[pymodule]
fn srr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGenerator>()?;
    m.add_class::<PyRecovery>()?;
    m.add_class::<PyRegion>()?;
    m.add_class::<PyBound>()?;
    m.add_function(wrap_pyfunction!(closed_form_volume, m)?)?;
    m.add_function(wrap_pyfunction!(knapsack, m)?)?;
    m.add_function(wrap_pyfunction!(dantzig, m)?)?;
    m.add_function(wrap_pyfunction!(rs_matrix, m)?)?;
    m.add("GuardError", m.py().get_type::<GuardError>())?;
    Ok(())
}
