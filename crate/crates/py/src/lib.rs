//! Python bindings for `duplex_em`.
//!
//! Vectors are passed as lists of floats and complex numbers as `(re, im)`
//! tuples. Library errors surface as `ValueError`.

use duplex_em::algebra::{quaternion_mul, Complex, Quaternion};
use duplex_em::cavity::{CavityModel, Convention, Grid, ModeState};
use duplex_em::cli::verify;
use duplex_em::constants::PhysicalConstants;
use duplex_em::currents::{self, ClosedFormCurrent};
use duplex_em::dualsym::{self, ComplexVec3, FieldPair};
use duplex_em::fockquant;
use duplex_em::resonance::{self, DispersionPoint};
use duplex_em::sshliquid::{self, elliptic, GapForm, GapOptions, Method, Occupation, SshParams};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: duplex_em::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pair(e: [f64; 3], h: [f64; 3]) -> FieldPair {
    FieldPair::new(ComplexVec3::real(e[0], e[1], e[2]), ComplexVec3::real(h[0], h[1], h[2]))
}

type CVec = Vec<(f64, f64)>;

fn cvec(v: &ComplexVec3) -> CVec {
    v.0.iter().map(|c| (c.re, c.im)).collect()
}

fn complexes(v: &[(f64, f64)]) -> Vec<Complex> {
    v.iter().map(|&(re, im)| Complex::new(re, im)).collect()
}

/// Dual rotation of real fields by θ; returns complex `(E, H)`.
#[pyfunction]
fn dual_rotate(e: [f64; 3], h: [f64; 3], theta: f64) -> (CVec, CVec) {
    let f = dualsym::dual_rotate(&pair(e, h), theta);
    (cvec(&f.e), cvec(&f.h))
}

/// Hyperbolic dual transformation with rapidity ϑ.
#[pyfunction]
fn hyperbolic_dual(e: [f64; 3], h: [f64; 3], vartheta: f64) -> (CVec, CVec) {
    let f = dualsym::hyperbolic_dual(&pair(e, h), vartheta);
    (cvec(&f.e), cvec(&f.h))
}

/// `(|E″|, |H″|)` of the hyperbolic dual read along the original axes.
#[pyfunction]
fn orthogonal_axes_magnitudes(e: [f64; 3], h: [f64; 3], vartheta: f64) -> PyResult<(f64, f64)> {
    let f = pair(e, h);
    dualsym::orthogonal_axes_magnitudes(&f, &dualsym::hyperbolic_dual(&f, vartheta)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (e, h, theta=0.0, vartheta=0.0))]
fn invariants<'py>(py: Python<'py>, e: [f64; 3], h: [f64; 3], theta: f64, vartheta: f64) -> PyResult<Bound<'py, PyDict>> {
    let s = dualsym::invariants(&pair(e, h), theta, vartheta);
    let d = PyDict::new(py);
    d.set_item("i1p", s.i1p)?;
    d.set_item("i2p", s.i2p)?;
    d.set_item("k", s.k_inv)?;
    d.set_item("i1h", s.i1h)?;
    d.set_item("i2h", s.i2h)?;
    d.set_item("w", s.w)?;
    Ok(d)
}

/// Product of real quaternions given as `[a1, a2, a3, a4]`.
#[pyfunction]
fn quaternion_product(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    let q = |x: [f64; 4]| Quaternion::from_components(x[0], x[1], x[2], x[3]);
    quaternion_mul(q(a), q(b)).components()
}

fn single_mode(omega: f64) -> PyResult<CavityModel> {
    if !(omega > 0.0) {
        return Err(PyValueError::new_err("omega must be positive"));
    }
    CavityModel::new(std::f64::consts::PI / omega, 1.0, vec![1.0], PhysicalConstants::natural()).map_err(err)
}

/// Eigenvalues of the truncated oscillator Hamiltonian (ħ = 1).
#[pyfunction]
#[pyo3(signature = (dim, omega=1.0))]
fn fock_spectrum(dim: usize, omega: f64) -> PyResult<Vec<f64>> {
    let m = single_mode(omega)?;
    let h = fockquant::hamiltonian_from_canonical(&m, 1, dim).map_err(err)?;
    Ok(fockquant::hermitian_spectrum(&h.entries))
}

/// Max deviation of `[a, a†]` from the identity on the safe block.
#[pyfunction]
fn commutator_defect(dim: usize) -> PyResult<f64> {
    let (a, ad) = fockquant::make_ladder(dim).map_err(err)?;
    let c = fockquant::commutator(&a.entries, &ad.entries);
    Ok(fockquant::deviation_from_scalar(&c, Complex::new(1.0, 0.0), &fockquant::safe_indices(dim)))
}

/// Max classical continuity residual of the closed-form currents of a
/// natural-unit cavity with mode coefficients `c1`, `c2`.
#[pyfunction]
#[pyo3(signature = (c1, c2, nz=32, nt=32))]
fn continuity_residual(c1: Vec<(f64, f64)>, c2: Vec<(f64, f64)>, nz: usize, nt: usize) -> PyResult<f64> {
    let st = ModeState::new(complexes(&c1), complexes(&c2)).map_err(err)?;
    let m = CavityModel::uniform(1.0, 1.0, st.len(), 1.0, PhysicalConstants::natural()).map_err(err)?;
    let grid = Grid::for_model(&m, nz, nt);
    let cf = ClosedFormCurrent::new(m, st).map_err(err)?;
    currents::continuity_residual(&cf, &grid).map_err(err)
}

/// Noether charge `(Q₁, Q₂)` of the Maxwellian field functions at time t.
#[pyfunction]
#[pyo3(signature = (c1, c2, t=0.0))]
fn noether_charge(c1: Vec<(f64, f64)>, c2: Vec<(f64, f64)>, t: f64) -> PyResult<(f64, f64)> {
    let st = ModeState::new(complexes(&c1), complexes(&c2)).map_err(err)?;
    let m = CavityModel::uniform(1.0, 1.0, st.len(), 1.0, PhysicalConstants::natural()).map_err(err)?;
    let set = currents::FieldFunctionSet::maxwellian(m, &st, currents::PmSign::Plus, Convention::SecularFree)
        .map_err(err)?;
    let q = currents::noether_charge(&set, t).map_err(err)?;
    Ok((q.q1, q.q2))
}

#[pyfunction]
fn charge_ratio(j_e: f64, j_h: f64) -> PyResult<f64> {
    currents::charge_ratio_estimate(j_e, j_h).map_err(err)
}

#[pyfunction]
fn elliptic_k(k: f64) -> PyResult<f64> {
    elliptic::elliptic_k(k).map_err(err)
}

#[pyfunction]
fn elliptic_e(k: f64) -> PyResult<f64> {
    elliptic::elliptic_e(k).map_err(err)
}

fn occupation(name: &str) -> PyResult<Occupation> {
    match name {
        "ground" => Ok(Occupation::Ground),
        "inverted" => Ok(Occupation::Inverted),
        o => Err(PyValueError::new_err(format!("unknown occupation {o:?}"))),
    }
}

/// Self-consistent enhancement factor; returns a dict with `q`, `roots`,
/// `rho` and `regime`.
#[pyfunction]
#[pyo3(signature = (t0, alpha1, alpha2, u, n_sites, occupation="ground", method="elliptic", strong_coupling=false))]
#[allow(clippy::too_many_arguments)]
fn solve_gap<'py>(
    py: Python<'py>,
    t0: f64,
    alpha1: f64,
    alpha2: f64,
    u: f64,
    n_sites: usize,
    occupation: &str,
    method: &str,
    strong_coupling: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let p = SshParams::new(t0, alpha1, alpha2, u, n_sites).map_err(err)?;
    let method = match method {
        "elliptic" => Method::Elliptic,
        "quadrature" => Method::QuadratureRoot,
        m => return Err(PyValueError::new_err(format!("unknown method {m:?}"))),
    };
    let opts = GapOptions {
        method,
        form: if strong_coupling { GapForm::StrongCoupling } else { GapForm::Full },
        ..GapOptions::default()
    };
    let sol = sshliquid::solve_gap(&p, &self::occupation(occupation)?, &opts).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("q", sol.q)?;
    d.set_item("roots", sol.roots)?;
    d.set_item("rho", sol.rho)?;
    d.set_item("regime", format!("{:?}", sol.regime).to_lowercase())?;
    Ok(d)
}

/// Ground-state energy `E₀(u)` at fixed enhancement factor `q`.
#[pyfunction]
#[pyo3(signature = (t0, alpha1, u, n_sites, k_spring=0.0, q=1.0))]
fn ground_energy(t0: f64, alpha1: f64, u: f64, n_sites: usize, k_spring: f64, q: f64) -> PyResult<f64> {
    let p = SshParams::new(t0, alpha1, 0.0, u, n_sites).map_err(err)?.with_spring(k_spring);
    sshliquid::ground_energy_elliptic(&p, q).map_err(err)
}

/// Least-squares `(ν₀, 𝔄)` for `ν = ν₀ − 𝔄n²`.
#[pyfunction]
fn fit_dispersion(n: Vec<f64>, nu: Vec<f64>) -> PyResult<(f64, f64)> {
    if n.len() != nu.len() {
        return Err(PyValueError::new_err("n and nu must have equal length"));
    }
    let data: Vec<DispersionPoint> = n.into_iter().zip(nu).map(|(n, nu_n)| DispersionPoint { n, nu_n }).collect();
    let f = resonance::fit_dispersion(&data).map_err(err)?;
    Ok((f.nu0, f.a_param))
}

/// The invariant suite as a list of dicts.
#[pyfunction]
#[pyo3(signature = (seed=42))]
fn verify_all<'py>(py: Python<'py>, seed: u64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    verify::verify_all(seed, 1.0)
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("id", r.id)?;
            d.set_item("module", r.module)?;
            d.set_item("name", r.name)?;
            d.set_item("value", r.value)?;
            d.set_item("bound", r.bound)?;
            d.set_item("pass", r.pass)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn duplex_em_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(dual_rotate, m)?)?;
    m.add_function(wrap_pyfunction!(hyperbolic_dual, m)?)?;
    m.add_function(wrap_pyfunction!(orthogonal_axes_magnitudes, m)?)?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(quaternion_product, m)?)?;
    m.add_function(wrap_pyfunction!(fock_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(commutator_defect, m)?)?;
    m.add_function(wrap_pyfunction!(continuity_residual, m)?)?;
    m.add_function(wrap_pyfunction!(noether_charge, m)?)?;
    m.add_function(wrap_pyfunction!(charge_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(elliptic_k, m)?)?;
    m.add_function(wrap_pyfunction!(elliptic_e, m)?)?;
    m.add_function(wrap_pyfunction!(solve_gap, m)?)?;
    m.add_function(wrap_pyfunction!(ground_energy, m)?)?;
    m.add_function(wrap_pyfunction!(fit_dispersion, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
