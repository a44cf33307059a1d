//! Python bindings for the core crate.
//!
//! The module mirrors the Rust surface: `Point` and `Element` wrap the domain
//! and group types, the two config classes carry tolerances and quadrature
//! budgets, and free functions cover every evaluator. Complex numbers cross
//! the boundary as Python `complex`; rejected inputs raise `ValueError` and
//! convergence failures raise `RuntimeError`.

use std::collections::BTreeMap;

use bzeta_core::applications as apps;
use bzeta_core::contour;
use bzeta_core::domain::{self, DomainPoint, Subset};
use bzeta_core::error::Error as CoreError;
use bzeta_core::evaluator::{self, Method, StructuredSetup};
use bzeta_core::group::{self, CaseTag, GroupElement, Perm, WRule};
use bzeta_core::precision::PrecisionConfig as CorePrecision;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py_err(e: CoreError) -> PyErr {
    let msg = e.to_string();
    match e {
        CoreError::Precondition(_) => PyValueError::new_err(msg),
        CoreError::NonConvergence(_) => PyRuntimeError::new_err(msg),
    }
}

fn ok<T>(r: bzeta_core::error::Result<T>) -> PyResult<T> {
    r.map_err(to_py_err)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Series => "series",
        Method::Laurent => "laurent",
        Method::Hankel => "hankel",
        Method::ResidueSeries => "residue-series",
        Method::ClosedForm => "closed-form",
    }
}

fn prec(cfg: Option<PrecisionConfig>) -> CorePrecision {
    cfg.map(|c| c.inner).unwrap_or_default()
}

fn quad(q: Option<QuadratureConfig>) -> contour::QuadratureConfig {
    q.map(|c| c.inner).unwrap_or_default()
}

fn subset_from(indices: &[usize], n: usize) -> PyResult<Subset> {
    for &i in indices {
        if i >= n {
            return Err(PyValueError::new_err(format!(
                "sign-flip index {i} exceeds dimension {n}"
            )));
        }
    }
    Ok(Subset::from_indices(indices))
}

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

/// Working tolerances shared by every evaluator.
#[pyclass(module = "bzeta", from_py_object)]
#[derive(Clone, Copy)]
struct PrecisionConfig {
    inner: CorePrecision,
}

#[pymethods]
impl PrecisionConfig {
    #[new]
    #[pyo3(signature = (working_digits=None, abs_tol=None, rel_tol=None))]
    fn new(
        working_digits: Option<u32>,
        abs_tol: Option<f64>,
        rel_tol: Option<f64>,
    ) -> PyResult<Self> {
        let d = CorePrecision::default();
        let inner = CorePrecision {
            working_digits: working_digits.unwrap_or(d.working_digits),
            abs_tol: abs_tol.unwrap_or(d.abs_tol),
            rel_tol: rel_tol.unwrap_or(d.rel_tol),
        };
        ok(inner.validate())?;
        Ok(PrecisionConfig { inner })
    }

    #[getter]
    fn working_digits(&self) -> u32 {
        self.inner.working_digits
    }

    #[getter]
    fn abs_tol(&self) -> f64 {
        self.inner.abs_tol
    }

    #[getter]
    fn rel_tol(&self) -> f64 {
        self.inner.rel_tol
    }

    fn __repr__(&self) -> String {
        format!(
            "PrecisionConfig(working_digits={}, abs_tol={:e}, rel_tol={:e})",
            self.inner.working_digits, self.inner.abs_tol, self.inner.rel_tol
        )
    }
}

/// Node and panel budgets for the contour quadrature.
#[pyclass(module = "bzeta", from_py_object)]
#[derive(Clone, Copy)]
struct QuadratureConfig {
    inner: contour::QuadratureConfig,
}

#[pymethods]
impl QuadratureConfig {
    #[new]
    #[pyo3(signature = (circle_nodes=None, line_panels=None, cutoff_t=None, target_tol=None))]
    fn new(
        circle_nodes: Option<u32>,
        line_panels: Option<u32>,
        cutoff_t: Option<f64>,
        target_tol: Option<f64>,
    ) -> PyResult<Self> {
        let d = contour::QuadratureConfig::default();
        let inner = contour::QuadratureConfig {
            circle_nodes: circle_nodes.unwrap_or(d.circle_nodes),
            line_panels: line_panels.unwrap_or(d.line_panels),
            cutoff_t: cutoff_t.unwrap_or(d.cutoff_t),
            target_tol: target_tol.unwrap_or(d.target_tol),
        };
        ok(inner.validate())?;
        Ok(QuadratureConfig { inner })
    }

    #[getter]
    fn circle_nodes(&self) -> u32 {
        self.inner.circle_nodes
    }

    #[getter]
    fn line_panels(&self) -> u32 {
        self.inner.line_panels
    }

    #[getter]
    fn cutoff_t(&self) -> f64 {
        self.inner.cutoff_t
    }

    #[getter]
    fn target_tol(&self) -> f64 {
        self.inner.target_tol
    }

    fn __repr__(&self) -> String {
        format!(
            "QuadratureConfig(circle_nodes={}, line_panels={}, cutoff_t={}, target_tol={:e})",
            self.inner.circle_nodes,
            self.inner.line_panels,
            self.inner.cutoff_t,
            self.inner.target_tol
        )
    }
}

// ---------------------------------------------------------------------------
// results
// ---------------------------------------------------------------------------

/// A value, an honest error estimate, the route that produced it, and the
/// bookkeeping recorded along the way.
#[pyclass(module = "bzeta", get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct EvalResult {
    value: Complex64,
    abs_error_estimate: f64,
    method: String,
    meta: BTreeMap<String, String>,
}

#[pymethods]
impl EvalResult {
    fn __repr__(&self) -> String {
        format!(
            "EvalResult(value={}, abs_error_estimate={:e}, method='{}')",
            self.value, self.abs_error_estimate, self.method
        )
    }

    fn __complex__(&self) -> Complex64 {
        self.value
    }
}

impl From<evaluator::EvalResult> for EvalResult {
    fn from(r: evaluator::EvalResult) -> Self {
        EvalResult {
            value: r.value,
            abs_error_estimate: r.abs_error_estimate,
            method: method_name(r.method).to_string(),
            meta: r.meta,
        }
    }
}

/// Both sides of a verified identity and their difference.
#[pyclass(module = "bzeta", get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct ResidualReport {
    lhs: Complex64,
    rhs: Complex64,
    abs_residual: f64,
    rel_residual: f64,
    details: BTreeMap<String, String>,
}

#[pymethods]
impl ResidualReport {
    fn __repr__(&self) -> String {
        format!(
            "ResidualReport(lhs={}, rhs={}, abs_residual={:e})",
            self.lhs, self.rhs, self.abs_residual
        )
    }
}

impl From<contour::ResidualReport> for ResidualReport {
    fn from(r: contour::ResidualReport) -> Self {
        ResidualReport {
            lhs: r.lhs,
            rhs: r.rhs,
            abs_residual: r.abs_residual,
            rel_residual: r.rel_residual,
            details: r.details,
        }
    }
}

/// Outcome of the lattice search for a nearby element of the span of the
/// basis over the rationals. Truthy exactly when the search succeeded.
#[pyclass(module = "bzeta", get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct RationalityVerdict {
    is_near_rational: bool,
    numerator: i64,
    denominator: u64,
    residual: f64,
    coefficients: Vec<(i64, u64)>,
}

#[pymethods]
impl RationalityVerdict {
    fn __bool__(&self) -> bool {
        self.is_near_rational
    }

    fn __repr__(&self) -> String {
        if self.is_near_rational {
            let parts: Vec<String> = self
                .coefficients
                .iter()
                .map(|(p, q)| format!("{p}/{q}"))
                .collect();
            format!(
                "RationalityVerdict([{}], residual={:e})",
                parts.join(", "),
                self.residual
            )
        } else {
            "RationalityVerdict(not rational within bounds)".to_string()
        }
    }
}

impl From<apps::RationalityVerdict> for RationalityVerdict {
    fn from(v: apps::RationalityVerdict) -> Self {
        RationalityVerdict {
            is_near_rational: v.is_near_rational,
            numerator: v.numerator,
            denominator: v.denominator,
            residual: v.residual,
            coefficients: v.coefficients,
        }
    }
}

// ---------------------------------------------------------------------------
// domain points
// ---------------------------------------------------------------------------

/// A point (w, a, theta) of the evaluation domain.
#[pyclass(module = "bzeta", from_py_object)]
#[derive(Clone)]
struct Point {
    inner: DomainPoint,
}

#[pymethods]
impl Point {
    #[new]
    #[pyo3(signature = (w, a, theta=None, cfg=None))]
    fn new(
        w: Complex64,
        a: Vec<Complex64>,
        theta: Option<Vec<f64>>,
        cfg: Option<PrecisionConfig>,
    ) -> PyResult<Self> {
        let theta = theta.unwrap_or_else(|| vec![0.0; a.len()]);
        let inner = ok(DomainPoint::new(w, a, theta, &prec(cfg)))?;
        Ok(Point { inner })
    }

    #[getter]
    fn w(&self) -> Complex64 {
        self.inner.w()
    }

    #[getter]
    fn a(&self) -> Vec<Complex64> {
        self.inner.a().to_vec()
    }

    #[getter]
    fn theta(&self) -> Vec<f64> {
        self.inner.theta().to_vec()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Membership report for the nested evaluation domains.
    #[pyo3(signature = (cfg=None))]
    fn classify<'py>(
        &self,
        py: Python<'py>,
        cfg: Option<PrecisionConfig>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let report = domain::classify(&self.inner, &prec(cfg));
        let d = PyDict::new(py);
        d.set_item("in_t_plus", report.in_t_plus)?;
        d.set_item("in_d_n", report.in_d_n)?;
        d.set_item("in_d_tilde", report.in_d_tilde)?;
        d.set_item("in_d_tilde_cstar", report.in_d_tilde_cstar)?;
        d.set_item(
            "component_lambda",
            report.component_lambda.map(|s| s.indices()),
        )?;
        d.set_item("pi", report.pi_value)?;
        Ok(d)
    }

    fn approx_eq(&self, other: Point, tol: f64) -> bool {
        self.inner.approx_eq(&other.inner, tol)
    }

    fn __repr__(&self) -> String {
        format!(
            "Point(w={}, a={:?}, theta={:?})",
            self.inner.w(),
            self.inner.a(),
            self.inner.theta()
        )
    }
}

// ---------------------------------------------------------------------------
// group elements
// ---------------------------------------------------------------------------

/// An element T_lambda R_sigma M_alpha of the symmetry group: sign flips on
/// the index set `lambda_`, the permutation with image list `sigma`, and the
/// nonzero scalar `alpha`.
#[pyclass(module = "bzeta", from_py_object)]
#[derive(Clone)]
struct Element {
    inner: GroupElement,
}

impl Element {
    fn wrap(inner: GroupElement) -> Self {
        Element { inner }
    }
}

#[pymethods]
impl Element {
    #[new]
    #[pyo3(signature = (lambda_=None, sigma=None, alpha=None, n=None))]
    fn new(
        lambda_: Option<Vec<usize>>,
        sigma: Option<Vec<usize>>,
        alpha: Option<Complex64>,
        n: Option<usize>,
    ) -> PyResult<Self> {
        let dim = match (&sigma, n) {
            (Some(images), Some(n)) if images.len() != n => {
                return Err(PyValueError::new_err(format!(
                    "sigma has {} images but n={n}",
                    images.len()
                )));
            }
            (Some(images), _) => images.len(),
            (None, Some(n)) => n,
            (None, None) => {
                return Err(PyValueError::new_err(
                    "supply sigma or n to fix the dimension",
                ))
            }
        };
        if dim == 0 || dim > 32 {
            return Err(PyValueError::new_err("dimension must lie in 1..=32"));
        }
        let perm = match sigma {
            Some(images) => ok(Perm::from_images(images))?,
            None => Perm::identity(dim),
        };
        let lambda = subset_from(&lambda_.unwrap_or_default(), dim)?;
        let inner = ok(GroupElement::new(
            lambda,
            perm,
            alpha.unwrap_or(Complex64::ONE),
        ))?;
        Ok(Element { inner })
    }

    /// The neutral element in dimension n.
    #[staticmethod]
    fn identity(n: usize) -> Element {
        Element::wrap(GroupElement::identity(n))
    }

    /// Pure scalar rotation M_alpha.
    #[staticmethod]
    fn rotation(alpha: Complex64, n: usize) -> PyResult<Element> {
        Ok(Element::wrap(ok(GroupElement::m_alpha(alpha, n))?))
    }

    /// Pure sign flip T_lambda on the given indices.
    #[staticmethod]
    fn sign_flip(indices: Vec<usize>, n: usize) -> PyResult<Element> {
        Ok(Element::wrap(GroupElement::t_lambda(
            subset_from(&indices, n)?,
            n,
        )))
    }

    /// Pure permutation R_sigma from its image list.
    #[staticmethod]
    fn permutation(images: Vec<usize>) -> PyResult<Element> {
        Ok(Element::wrap(GroupElement::r_sigma(ok(
            Perm::from_images(images),
        )?)))
    }

    #[getter]
    fn lambda_(&self) -> Vec<usize> {
        self.inner.lambda().indices()
    }

    #[getter]
    fn sigma(&self) -> Vec<usize> {
        self.inner.sigma().images().to_vec()
    }

    #[getter]
    fn alpha(&self) -> Complex64 {
        self.inner.alpha()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Twist angle of the element, normalized to (-pi, pi].
    #[getter]
    fn psi(&self) -> f64 {
        group::psi_angle(&self.inner)
    }

    fn compose(&self, other: Element) -> PyResult<Element> {
        Ok(Element::wrap(ok(group::compose(
            &self.inner,
            &other.inner,
        ))?))
    }

    fn __matmul__(&self, other: Element) -> PyResult<Element> {
        self.compose(other)
    }

    fn inverse(&self) -> Element {
        Element::wrap(group::inverse(&self.inner))
    }

    /// The image of a domain point under this element.
    fn act(&self, point: Point) -> PyResult<Point> {
        Ok(Point {
            inner: ok(group::act(&self.inner, &point.inner))?,
        })
    }

    /// Automorphy factor J_g(s, theta).
    fn j(&self, s: Complex64, theta: Vec<f64>) -> PyResult<Complex64> {
        ok(group::j_factor(&self.inner, s, &theta))
    }

    /// Whether this element fixes the given point.
    #[pyo3(signature = (point, cfg=None))]
    fn fixes(&self, point: Point, cfg: Option<PrecisionConfig>) -> PyResult<bool> {
        ok(group::is_fixed(&self.inner, &point.inner, &prec(cfg)))
    }

    /// Basis description of the full solution space of g.p = p.
    #[pyo3(signature = (cfg=None))]
    fn fixed_space(&self, cfg: Option<PrecisionConfig>) -> FixedPointSpace {
        FixedPointSpace {
            inner: group::fixed_point_space(&self.inner, &prec(cfg)),
        }
    }

    fn approx_eq(&self, other: Element, tol: f64) -> bool {
        self.inner.approx_eq(&other.inner, tol)
    }

    fn __repr__(&self) -> String {
        format!(
            "Element(lambda_={:?}, sigma={:?}, alpha={})",
            self.inner.lambda().indices(),
            self.inner.sigma().images(),
            self.inner.alpha()
        )
    }
}

/// Solution space of g.p = p, described by bases for the admissible a and
/// theta directions together with the rule constraining w.
#[pyclass(module = "bzeta", skip_from_py_object)]
#[derive(Clone)]
struct FixedPointSpace {
    inner: group::FixedPointSpace,
}

#[pymethods]
impl FixedPointSpace {
    #[getter]
    fn case(&self) -> &'static str {
        match self.inner.case_tag {
            CaseTag::AlphaEqualsOne => "alpha-equals-one",
            CaseTag::AlphaNotOne => "alpha-not-one",
            CaseTag::Empty => "empty",
        }
    }

    #[getter]
    fn w_rule(&self) -> &'static str {
        match self.inner.w_rule {
            WRule::Free => "free",
            WRule::HalfTrace => "half-trace",
        }
    }

    #[getter]
    fn a_basis(&self) -> Vec<Vec<Complex64>> {
        self.inner.a_basis.clone()
    }

    #[getter]
    fn theta_basis(&self) -> Vec<Vec<f64>> {
        self.inner.theta_basis.clone()
    }

    /// Whether the point lies in this space.
    #[pyo3(signature = (point, cfg=None))]
    fn contains(&self, point: Point, cfg: Option<PrecisionConfig>) -> bool {
        self.inner.contains(&point.inner, &prec(cfg))
    }

    fn __contains__(&self, point: Point) -> bool {
        self.inner.contains(&point.inner, &CorePrecision::default())
    }

    /// Assemble a concrete fixed point from basis coefficients. `w` is taken
    /// as given under the free rule and recomputed under the half-trace rule.
    #[pyo3(signature = (w, a_coeffs, theta_coeffs, cfg=None))]
    fn make_point(
        &self,
        w: Complex64,
        a_coeffs: Vec<Complex64>,
        theta_coeffs: Vec<f64>,
        cfg: Option<PrecisionConfig>,
    ) -> PyResult<Point> {
        Ok(Point {
            inner: ok(self
                .inner
                .make_point(w, &a_coeffs, &theta_coeffs, &prec(cfg)))?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "FixedPointSpace(case='{}', w_rule='{}', a_dim={}, theta_dim={})",
            self.case(),
            self.w_rule(),
            self.inner.a_basis.len(),
            self.inner.theta_basis.len()
        )
    }
}

// ---------------------------------------------------------------------------
// evaluators
// ---------------------------------------------------------------------------

/// Defining series, valid for Re s > dim; certified against its tail bound.
#[pyfunction]
#[pyo3(signature = (s, point, max_index=100_000, cfg=None))]
fn zeta_series(
    s: Complex64,
    point: Point,
    max_index: u32,
    cfg: Option<PrecisionConfig>,
) -> PyResult<EvalResult> {
    Ok(ok(evaluator::zeta_series(
        s,
        &point.inner,
        max_index,
        &prec(cfg),
    ))?
    .into())
}

/// Analytic continuation via the contour route; defined away from 1..=dim.
#[pyfunction]
#[pyo3(signature = (s, point, q=None, cfg=None))]
fn evaluate(
    s: Complex64,
    point: Point,
    q: Option<QuadratureConfig>,
    cfg: Option<PrecisionConfig>,
) -> PyResult<EvalResult> {
    Ok(ok(contour::l_extended(s, &point.inner, &quad(q), &prec(cfg)))?.into())
}

/// Exact special value at s = -k from the coefficient route.
#[pyfunction]
#[pyo3(signature = (point, k, cfg=None))]
fn special_value(point: Point, k: u32, cfg: Option<PrecisionConfig>) -> PyResult<Complex64> {
    ok(evaluator::special_value(&point.inner, k, &prec(cfg)))
}

/// Residue at the (at most simple) pole s = k, for k in 1..=dim.
#[pyfunction]
#[pyo3(signature = (point, k, cfg=None))]
fn residue_at(point: Point, k: u32, cfg: Option<PrecisionConfig>) -> PyResult<Complex64> {
    ok(evaluator::residue_at_integer(&point.inner, k, &prec(cfg)))
}

/// Residue series over the poles swept by rotating the argument by psi.
#[pyfunction]
#[pyo3(signature = (s, point, psi, r_max=120.0, cfg=None))]
fn rho(
    s: Complex64,
    point: Point,
    psi: f64,
    r_max: f64,
    cfg: Option<PrecisionConfig>,
) -> PyResult<EvalResult> {
    Ok(ok(contour::rho(s, &point.inner, psi, r_max, &prec(cfg)))?.into())
}

/// Check the transformation formula for g at one point and exponent.
#[pyfunction]
#[pyo3(signature = (g, point, s, r_max=120.0, q=None, cfg=None))]
fn verify_transform(
    g: Element,
    point: Point,
    s: Complex64,
    r_max: f64,
    q: Option<QuadratureConfig>,
    cfg: Option<PrecisionConfig>,
) -> PyResult<ResidualReport> {
    Ok(ok(contour::verify_transform(
        &g.inner,
        &point.inner,
        s,
        &quad(q),
        r_max,
        &prec(cfg),
    ))?
    .into())
}

/// Structured fixed point of the odd-cycle family: w = 0, a the n-th roots
/// of unity, theta constant equal to c.
#[pyfunction]
#[pyo3(signature = (n, c=0.0, cfg=None))]
fn example_one(n: usize, c: f64, cfg: Option<PrecisionConfig>) -> PyResult<Point> {
    let setup = StructuredSetup::ExampleOne { n, c };
    ok(setup.validate())?;
    Ok(Point {
        inner: ok(setup.point(&prec(cfg)))?,
    })
}

/// Structured fixed point of the half-twist family built on eta = e(1/2n).
#[pyfunction]
#[pyo3(signature = (n, cfg=None))]
fn example_two(n: usize, cfg: Option<PrecisionConfig>) -> PyResult<Point> {
    let setup = StructuredSetup::ExampleTwo { n };
    ok(setup.validate())?;
    Ok(Point {
        inner: ok(setup.point(&prec(cfg)))?,
    })
}

/// Twisted Lambert-type sum attached to the odd-cycle family.
#[pyfunction]
#[pyo3(signature = (n, c, k, m_trunc=64, cfg=None))]
fn lambert_ex1(
    n: usize,
    c: f64,
    k: i32,
    m_trunc: u32,
    cfg: Option<PrecisionConfig>,
) -> PyResult<EvalResult> {
    Ok(ok(apps::lambert_ex1(n, c, k, m_trunc, &prec(cfg)))?.into())
}

/// Lambert-type sum attached to the half-twist family; `two_sided` selects
/// the symmetrized variant available for odd n.
#[pyfunction]
#[pyo3(signature = (n, k, m_trunc=64, two_sided=false, cfg=None))]
fn lambert_ex2(
    n: usize,
    k: i32,
    m_trunc: u32,
    two_sided: bool,
    cfg: Option<PrecisionConfig>,
) -> PyResult<EvalResult> {
    let r = if two_sided {
        apps::lambert_ex2_twosided(n, k, m_trunc, &prec(cfg))
    } else {
        apps::lambert_ex2(n, k, m_trunc, &prec(cfg))
    };
    Ok(ok(r)?.into())
}

/// Product of multiple-gamma values matching exp of the derivative at 0.
#[pyfunction]
#[pyo3(signature = (n, trunc=40, cfg=None))]
fn gamma_product(n: usize, trunc: u32, cfg: Option<PrecisionConfig>) -> PyResult<EvalResult> {
    Ok(ok(apps::gamma_product(n, trunc, &prec(cfg)))?.into())
}

/// Limit-formula prediction for the residue series at a fixed point of g.
#[pyfunction]
#[pyo3(signature = (g, point, k, q=None, cfg=None))]
fn kronecker_limit(
    g: Element,
    point: Point,
    k: i32,
    q: Option<QuadratureConfig>,
    cfg: Option<PrecisionConfig>,
) -> PyResult<EvalResult> {
    Ok(ok(apps::kronecker_limit(
        &g.inner,
        &point.inner,
        k,
        &quad(q),
        &prec(cfg),
    ))?
    .into())
}

/// Search for a representation of z in the rational span of the basis with
/// denominator at most `denom_bound`.
#[pyfunction]
#[pyo3(signature = (z, denom_bound=10_000, basis=None, cfg=None))]
fn detect_rational(
    z: Complex64,
    denom_bound: u64,
    basis: Option<Vec<Complex64>>,
    cfg: Option<PrecisionConfig>,
) -> RationalityVerdict {
    let basis = basis.unwrap_or_else(|| vec![Complex64::ONE]);
    apps::detect_rational(z, denom_bound, &basis, &prec(cfg)).into()
}

#[pymodule]
fn bzeta(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PrecisionConfig>()?;
    m.add_class::<QuadratureConfig>()?;
    m.add_class::<EvalResult>()?;
    m.add_class::<ResidualReport>()?;
    m.add_class::<RationalityVerdict>()?;
    m.add_class::<Point>()?;
    m.add_class::<Element>()?;
    m.add_class::<FixedPointSpace>()?;
    m.add_function(wrap_pyfunction!(zeta_series, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(special_value, m)?)?;
    m.add_function(wrap_pyfunction!(residue_at, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(verify_transform, m)?)?;
    m.add_function(wrap_pyfunction!(example_one, m)?)?;
    m.add_function(wrap_pyfunction!(example_two, m)?)?;
    m.add_function(wrap_pyfunction!(lambert_ex1, m)?)?;
    m.add_function(wrap_pyfunction!(lambert_ex2, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_product, m)?)?;
    m.add_function(wrap_pyfunction!(kronecker_limit, m)?)?;
    m.add_function(wrap_pyfunction!(detect_rational, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
