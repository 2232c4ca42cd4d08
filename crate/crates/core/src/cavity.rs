//! Classical fields in a 1D perfect cavity `0 ≤ z ≤ L` with `E ∥ x̂`, `H ∥ ŷ`.
//!
//! Mode α has `ω_α = απc/L`, `k_α = απ/L`, amplitudes
//! `A^E_α = √(2ω_α² m_α/(Vε₀))`, `A^H_α = √(2ω_α² m_α/(Vμ₀))`, and
//! `q_α(t) = C₁ e^{iω_α t} + C₂ e^{−iω_α t}`.
//!
//! Field values are in the unit system of the model's [`PhysicalConstants`]
//! (H in A/m for SI). [`DualRotated`] converts to symmetric units internally.

use crate::algebra::Complex;
use crate::constants::PhysicalConstants;
use crate::dualsym::{ComplexVec3, FieldPair};
use crate::error::{invalid, Error, Result};
use crate::quad::integrate_converged;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavityModel {
    pub length: f64,
    pub volume: f64,
    /// Per-mode mass-like parameter `m_α`; its length is the mode count.
    pub masses: Vec<f64>,
    pub constants: PhysicalConstants,
}

impl CavityModel {
    pub fn new(length: f64, volume: f64, masses: Vec<f64>, constants: PhysicalConstants) -> Result<Self> {
        if !(length > 0.0) || !(volume > 0.0) {
            return Err(invalid("cavity length and volume must be positive"));
        }
        if masses.is_empty() || masses.iter().any(|m| !(*m > 0.0)) {
            return Err(invalid("at least one mode with positive mass is required"));
        }
        Ok(Self {
            length,
            volume,
            masses,
            constants,
        })
    }

    pub fn uniform(length: f64, volume: f64, n_modes: usize, mass: f64, constants: PhysicalConstants) -> Result<Self> {
        Self::new(length, volume, vec![mass; n_modes], constants)
    }

    pub fn n_modes(&self) -> usize {
        self.masses.len()
    }

    /// `T = L/c`.
    pub fn period(&self) -> f64 {
        self.length / self.constants.c
    }

    /// Mode indices are 1-based.
    pub fn omega(&self, alpha: usize) -> f64 {
        alpha as f64 * PI * self.constants.c / self.length
    }

    pub fn wavenumber(&self, alpha: usize) -> f64 {
        alpha as f64 * PI / self.length
    }

    pub fn mass(&self, alpha: usize) -> f64 {
        self.masses[alpha - 1]
    }

    pub fn amp_e(&self, alpha: usize) -> f64 {
        let w = self.omega(alpha);
        (2.0 * w * w * self.mass(alpha) / (self.volume * self.constants.eps0)).sqrt()
    }

    pub fn amp_h(&self, alpha: usize) -> f64 {
        let w = self.omega(alpha);
        (2.0 * w * w * self.mass(alpha) / (self.volume * self.constants.mu0)).sqrt()
    }

    pub fn modes(&self) -> impl Iterator<Item = usize> {
        1..=self.n_modes()
    }

    pub fn check_z(&self, z: f64) -> Result<()> {
        if (0.0..=self.length).contains(&z) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                name: "z",
                value: z,
                lo: 0.0,
                hi: self.length,
            })
        }
    }
}

/// Integration-constant convention for `q′ = ω∫q dt` and `q″ = ω∫q′ dt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Constants dropped: `q′ = −iC₁e^{iωt} + iC₂e^{−iωt}`, `q″ = −q`.
    #[default]
    SecularFree,
    /// Integrals taken from t = 0, so `q′(0) = q″(0) = 0`; `q″` then carries
    /// a secular term `−ωt·q′_sf(0)`.
    FromZero,
}

/// Mode coefficients `C₁α`, `C₂α` (index α−1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeState {
    pub c1: Vec<Complex>,
    pub c2: Vec<Complex>,
}

impl ModeState {
    pub fn new(c1: Vec<Complex>, c2: Vec<Complex>) -> Result<Self> {
        if c1.len() != c2.len() {
            return Err(invalid("C1 and C2 must have the same length"));
        }
        Ok(Self { c1, c2 })
    }

    /// Real form `q_α = B_α cos(ω_α t + φ_α)`.
    pub fn real(b: &[f64], phi: &[f64]) -> Result<Self> {
        if b.len() != phi.len() {
            return Err(invalid("B and phi must have the same length"));
        }
        let c1: Vec<Complex> = b.iter().zip(phi).map(|(b, p)| Complex::from_polar(0.5 * b, *p)).collect();
        let c2 = c1.iter().map(|c| c.conj()).collect();
        Ok(Self { c1, c2 })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            c1: vec![Complex::default(); n],
            c2: vec![Complex::default(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.c1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c1.is_empty()
    }

    fn parts(&self, model: &CavityModel, alpha: usize, t: f64) -> (Complex, Complex, f64) {
        let w = model.omega(alpha);
        let ph = Complex::from_polar(1.0, w * t);
        (self.c1[alpha - 1] * ph, self.c2[alpha - 1] * ph.conj(), w)
    }

    pub fn q(&self, model: &CavityModel, alpha: usize, t: f64) -> Complex {
        let (a, b, _) = self.parts(model, alpha, t);
        a + b
    }

    pub fn q_dot(&self, model: &CavityModel, alpha: usize, t: f64) -> Complex {
        let (a, b, w) = self.parts(model, alpha, t);
        Complex::new(0.0, w) * (a - b)
    }

    pub fn q_ddot(&self, model: &CavityModel, alpha: usize, t: f64) -> Complex {
        let (a, b, w) = self.parts(model, alpha, t);
        -(a + b) * (w * w)
    }

    fn q_prime_sf(&self, model: &CavityModel, alpha: usize, t: f64) -> Complex {
        let (a, b, _) = self.parts(model, alpha, t);
        Complex::new(0.0, -1.0) * (a - b)
    }

    pub fn q_prime(&self, model: &CavityModel, alpha: usize, t: f64, conv: Convention) -> Complex {
        match conv {
            Convention::SecularFree => self.q_prime_sf(model, alpha, t),
            Convention::FromZero => self.q_prime_sf(model, alpha, t) - self.q_prime_sf(model, alpha, 0.0),
        }
    }

    pub fn q_dprime(&self, model: &CavityModel, alpha: usize, t: f64, conv: Convention) -> Complex {
        let sf = -self.q(model, alpha, t);
        match conv {
            Convention::SecularFree => sf,
            Convention::FromZero => {
                let w = model.omega(alpha);
                sf + self.q(model, alpha, 0.0) - self.q_prime_sf(model, alpha, 0.0) * (w * t)
            }
        }
    }

    /// Modes whose `q″` grows linearly in t under `conv`.
    pub fn secular_modes(&self, model: &CavityModel, conv: Convention) -> Vec<usize> {
        match conv {
            Convention::SecularFree => Vec::new(),
            Convention::FromZero => (1..=self.len())
                .filter(|&a| self.q_prime_sf(model, a, 0.0).norm() > 0.0)
                .collect(),
        }
    }

    /// Residual of `q̈ + ω²q = 0` relative to `ω²|q|`.
    pub fn oscillator_residual(&self, model: &CavityModel, alpha: usize, t: f64) -> f64 {
        let w2 = model.omega(alpha).powi(2);
        let q = self.q(model, alpha, t);
        let r = (self.q_ddot(model, alpha, t) + q * w2).norm();
        let scale = w2 * q.norm();
        if scale == 0.0 {
            r
        } else {
            r / scale
        }
    }
}

/// Field value and its first partial derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldSample {
    pub value: FieldPair,
    pub dz: FieldPair,
    pub dt: FieldPair,
}

impl FieldSample {
    pub fn scale(&self, s: Complex) -> Self {
        Self {
            value: self.value * s,
            dz: self.dz * s,
            dt: self.dt * s,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            value: self.value + o.value,
            dz: self.dz + o.dz,
            dt: self.dt + o.dt,
        }
    }
}

/// A field of `(z, t)` with analytic first derivatives.
pub trait AnalyticField: Send + Sync {
    fn sample(&self, z: f64, t: f64) -> FieldSample;
    /// Length of the spatial domain `[0, L]`.
    fn length(&self) -> f64;
    /// Largest wavenumber present (0 for static fields).
    fn max_wavenumber(&self) -> f64;
    /// Largest angular frequency present.
    fn max_frequency(&self) -> f64;
}

fn ex(v: Complex) -> ComplexVec3 {
    ComplexVec3([v, Complex::default(), Complex::default()])
}

fn hy(v: Complex) -> ComplexVec3 {
    ComplexVec3([Complex::default(), v, Complex::default()])
}

/// First solution: `E_x = Σ A^E q sin kz`, `H_y = Σ A^E (ε₀/k) q̇ cos kz`.
#[derive(Debug, Clone)]
pub struct FirstSolution {
    pub model: CavityModel,
    pub state: ModeState,
}

impl FirstSolution {
    pub fn new(model: CavityModel, state: ModeState) -> Result<Self> {
        if state.len() != model.n_modes() {
            return Err(invalid("mode state length must match the mode count"));
        }
        Ok(Self { model, state })
    }
}

impl AnalyticField for FirstSolution {
    fn sample(&self, z: f64, t: f64) -> FieldSample {
        let m = &self.model;
        let eps0 = m.constants.eps0;
        let (mut e, mut e_z, mut e_t) = (Complex::default(), Complex::default(), Complex::default());
        let (mut h, mut h_z, mut h_t) = (Complex::default(), Complex::default(), Complex::default());
        for a in m.modes() {
            let (ae, k) = (m.amp_e(a), m.wavenumber(a));
            let (s, c) = (k * z).sin_cos();
            let q = self.state.q(m, a, t);
            let qd = self.state.q_dot(m, a, t);
            let qdd = self.state.q_ddot(m, a, t);
            e += q * (ae * s);
            e_z += q * (ae * k * c);
            e_t += qd * (ae * s);
            let hk = ae * eps0 / k;
            h += qd * (hk * c);
            h_z += qd * (-hk * k * s);
            h_t += qdd * (hk * c);
        }
        FieldSample {
            value: FieldPair::new(ex(e), hy(h)),
            dz: FieldPair::new(ex(e_z), hy(h_z)),
            dt: FieldPair::new(ex(e_t), hy(h_t)),
        }
    }

    fn length(&self) -> f64 {
        self.model.length
    }

    fn max_wavenumber(&self) -> f64 {
        self.model.wavenumber(self.model.n_modes())
    }

    fn max_frequency(&self) -> f64 {
        self.model.omega(self.model.n_modes())
    }
}

/// Second solution: `E_x = Σ A^E q″ sin kz`, `H_y = Σ A^H q′ cos kz`.
///
/// The `+` sign on H is the one for which both curl equations hold; with the
/// opposite sign the pair is `(−E₁, +H₁)` and Faraday's law fails. Faraday's
/// law additionally needs `q″ = −q`, i.e. [`Convention::SecularFree`].
#[derive(Debug, Clone)]
pub struct SecondSolution {
    pub model: CavityModel,
    pub state: ModeState,
    pub convention: Convention,
}

impl SecondSolution {
    pub fn new(model: CavityModel, state: ModeState, convention: Convention) -> Result<Self> {
        if state.len() != model.n_modes() {
            return Err(invalid("mode state length must match the mode count"));
        }
        Ok(Self {
            model,
            state,
            convention,
        })
    }

    /// Human-readable warnings, one per mode with a secular term.
    pub fn warnings(&self) -> Vec<String> {
        self.state
            .secular_modes(&self.model, self.convention)
            .into_iter()
            .map(|a| format!("mode {a}: q'' contains a secular term linear in t"))
            .collect()
    }
}

impl AnalyticField for SecondSolution {
    fn sample(&self, z: f64, t: f64) -> FieldSample {
        let m = &self.model;
        let conv = self.convention;
        let (mut e, mut e_z, mut e_t) = (Complex::default(), Complex::default(), Complex::default());
        let (mut h, mut h_z, mut h_t) = (Complex::default(), Complex::default(), Complex::default());
        for a in m.modes() {
            let (ae, ah, k, w) = (m.amp_e(a), m.amp_h(a), m.wavenumber(a), m.omega(a));
            let (s, c) = (k * z).sin_cos();
            let qp = self.state.q_prime(m, a, t, conv);
            let qpp = self.state.q_dprime(m, a, t, conv);
            let q = self.state.q(m, a, t);
            e += qpp * (ae * s);
            e_z += qpp * (ae * k * c);
            e_t += qp * (ae * w * s);
            h += qp * (ah * c);
            h_z += qp * (-ah * k * s);
            h_t += q * (ah * w * c);
        }
        FieldSample {
            value: FieldPair::new(ex(e), hy(h)),
            dz: FieldPair::new(ex(e_z), hy(h_z)),
            dt: FieldPair::new(ex(e_t), hy(h_t)),
        }
    }

    fn length(&self) -> f64 {
        self.model.length
    }

    fn max_wavenumber(&self) -> f64 {
        self.model.wavenumber(self.model.n_modes())
    }

    fn max_frequency(&self) -> f64 {
        self.model.omega(self.model.n_modes())
    }
}

pub fn field_first_solution(model: &CavityModel, state: &ModeState, z: f64, t: f64) -> Result<FieldPair> {
    model.check_z(z)?;
    Ok(FirstSolution::new(model.clone(), state.clone())?.sample(z, t).value)
}

pub fn field_second_solution(
    model: &CavityModel,
    state: &ModeState,
    conv: Convention,
    z: f64,
    t: f64,
) -> Result<FieldPair> {
    model.check_z(z)?;
    Ok(SecondSolution::new(model.clone(), state.clone(), conv)?.sample(z, t).value)
}

/// `E = a_E cos(kz − ωt) x̂`, `H = a_H cos(kz − ωt) ŷ`.
#[derive(Debug, Clone, Copy)]
pub struct PlaneWave {
    pub amp_e: f64,
    pub amp_h: f64,
    pub k: f64,
    pub omega: f64,
    pub length: f64,
}

impl AnalyticField for PlaneWave {
    fn sample(&self, z: f64, t: f64) -> FieldSample {
        let (s, c) = (self.k * z - self.omega * t).sin_cos();
        let r = |x: f64| Complex::new(x, 0.0);
        FieldSample {
            value: FieldPair::new(ex(r(self.amp_e * c)), hy(r(self.amp_h * c))),
            dz: FieldPair::new(ex(r(-self.amp_e * self.k * s)), hy(r(-self.amp_h * self.k * s))),
            dt: FieldPair::new(ex(r(self.amp_e * self.omega * s)), hy(r(self.amp_h * self.omega * s))),
        }
    }

    fn length(&self) -> f64 {
        self.length
    }

    fn max_wavenumber(&self) -> f64 {
        self.k
    }

    fn max_frequency(&self) -> f64 {
        self.omega
    }
}

/// Spatially uniform field with a prescribed linear time dependence
/// `F(t) = F₀ + t·Ḟ`.
#[derive(Debug, Clone, Copy)]
pub struct UniformField {
    pub value: FieldPair,
    pub rate: FieldPair,
    pub length: f64,
}

impl AnalyticField for UniformField {
    fn sample(&self, _z: f64, t: f64) -> FieldSample {
        FieldSample {
            value: self.value + self.rate * t,
            dz: FieldPair::default(),
            dt: self.rate,
        }
    }

    fn length(&self) -> f64 {
        self.length
    }

    fn max_wavenumber(&self) -> f64 {
        0.0
    }

    fn max_frequency(&self) -> f64 {
        0.0
    }
}

/// Identically zero field.
#[derive(Debug, Clone, Copy)]
pub struct ZeroField {
    pub length: f64,
}

impl AnalyticField for ZeroField {
    fn sample(&self, _z: f64, _t: f64) -> FieldSample {
        FieldSample::default()
    }

    fn length(&self) -> f64 {
        self.length
    }

    fn max_wavenumber(&self) -> f64 {
        0.0
    }

    fn max_frequency(&self) -> f64 {
        0.0
    }
}

/// Independent scaling of the E and H parts of a field.
#[derive(Clone)]
pub struct Scaled {
    pub inner: Arc<dyn AnalyticField>,
    pub e_scale: Complex,
    pub h_scale: Complex,
}

impl AnalyticField for Scaled {
    fn sample(&self, z: f64, t: f64) -> FieldSample {
        let s = self.inner.sample(z, t);
        let f = |p: FieldPair| FieldPair::new(p.e * self.e_scale, p.h * self.h_scale);
        FieldSample {
            value: f(s.value),
            dz: f(s.dz),
            dt: f(s.dt),
        }
    }

    fn length(&self) -> f64 {
        self.inner.length()
    }

    fn max_wavenumber(&self) -> f64 {
        self.inner.max_wavenumber()
    }

    fn max_frequency(&self) -> f64 {
        self.inner.max_frequency()
    }
}

/// Dual rotation by θ applied to a field given in a unit system with
/// impedance `z0`: `E′ = E cosθ + Z₀H sinθ`, `H′ = H cosθ − (E/Z₀) sinθ`.
#[derive(Clone)]
pub struct DualRotated {
    pub inner: Arc<dyn AnalyticField>,
    pub theta: f64,
    pub z0: f64,
}

impl DualRotated {
    fn rotate(&self, p: FieldPair) -> FieldPair {
        let sym = FieldPair::from_si(p.e, p.h, self.z0);
        let r = crate::dualsym::dual_rotate(&sym, self.theta);
        let (e, h) = r.to_si(self.z0);
        FieldPair::new(e, h)
    }
}

impl AnalyticField for DualRotated {
    fn sample(&self, z: f64, t: f64) -> FieldSample {
        let s = self.inner.sample(z, t);
        FieldSample {
            value: self.rotate(s.value),
            dz: self.rotate(s.dz),
            dt: self.rotate(s.dt),
        }
    }

    fn length(&self) -> f64 {
        self.inner.length()
    }

    fn max_wavenumber(&self) -> f64 {
        self.inner.max_wavenumber()
    }

    fn max_frequency(&self) -> f64 {
        self.inner.max_frequency()
    }
}

/// Uniform `(z, t)` sample grid including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nz: usize,
    pub nt: usize,
    pub z_max: f64,
    pub t_max: f64,
}

impl Grid {
    pub fn new(nz: usize, nt: usize, z_max: f64, t_max: f64) -> Self {
        Self { nz, nt, z_max, t_max }
    }

    /// Grid over one cavity and one period `T = L/c`.
    pub fn for_model(model: &CavityModel, nz: usize, nt: usize) -> Self {
        Self::new(nz, nt, model.length, model.period())
    }

    pub fn z(&self, i: usize) -> f64 {
        if self.nz < 2 {
            0.0
        } else {
            self.z_max * i as f64 / (self.nz - 1) as f64
        }
    }

    pub fn t(&self, j: usize) -> f64 {
        if self.nt < 2 {
            0.0
        } else {
            self.t_max * j as f64 / (self.nt - 1) as f64
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.nz).flat_map(move |i| (0..self.nt).map(move |j| (self.z(i), self.t(j))))
    }

    /// Fewest samples per shortest wavelength / period along either axis.
    pub fn points_per_wavelength(&self, k_max: f64, w_max: f64) -> f64 {
        let mut ppw = f64::INFINITY;
        if k_max > 0.0 && self.nz >= 2 {
            ppw = ppw.min((2.0 * PI / k_max) / (self.z_max / (self.nz - 1) as f64));
        }
        if w_max > 0.0 && self.nt >= 2 {
            ppw = ppw.min((2.0 * PI / w_max) / (self.t_max / (self.nt - 1) as f64));
        }
        if (k_max > 0.0 && self.nz < 2) || (w_max > 0.0 && self.nt < 2) {
            ppw = 0.0;
        }
        ppw
    }

    pub fn validate(&self, k_max: f64, w_max: f64) -> Result<()> {
        let ppw = self.points_per_wavelength(k_max, w_max);
        if ppw < 4.0 {
            Err(Error::GridTooCoarse(ppw))
        } else {
            Ok(())
        }
    }
}

/// Parity under a label: even (+) or odd (−).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Space-inversion (P) and time-reversal (t) parity of a sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parity {
    pub p: Sign,
    pub t: Sign,
}

/// Sector order used throughout: `(P−,t+)`, `(P−,t−)`, `(P+,t+)`, `(P+,t−)`.
pub const SECTOR_PARITIES: [Parity; 4] = [
    Parity { p: Sign::Minus, t: Sign::Plus },
    Parity { p: Sign::Minus, t: Sign::Minus },
    Parity { p: Sign::Plus, t: Sign::Plus },
    Parity { p: Sign::Plus, t: Sign::Minus },
];

/// Quaternion value `(X₁ − iX₂) + (X₃ − iX₄) j` of one vector quantity.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuaternionVec3 {
    pub e_part: ComplexVec3,
    pub j_part: ComplexVec3,
}

/// Four parity sectors of a field, kept separate. Sector sums are formed
/// only through the quaternion packing, never with real coefficients.
#[derive(Clone)]
pub struct QuaternionField {
    pub sectors: [Arc<dyn AnalyticField>; 4],
    pub parities: [Parity; 4],
}

/// Pack four sector fields in the order of [`SECTOR_PARITIES`].
pub fn assemble_quaternion_field(components: [Arc<dyn AnalyticField>; 4]) -> Result<QuaternionField> {
    let l = components[0].length();
    for (i, c) in components.iter().enumerate() {
        if (c.length() - l).abs() > 1e-12 * l.abs().max(1.0) {
            return Err(Error::DomainMismatch(format!(
                "sector {} has length {} but sector 1 has {}",
                i + 1,
                c.length(),
                l
            )));
        }
    }
    Ok(QuaternionField {
        sectors: components,
        parities: SECTOR_PARITIES,
    })
}

impl QuaternionField {
    /// Single classical field in sector 1, other sectors zero.
    pub fn single(field: Arc<dyn AnalyticField>) -> Self {
        let z: Arc<dyn AnalyticField> = Arc::new(ZeroField { length: field.length() });
        Self {
            sectors: [field, z.clone(), z.clone(), z],
            parities: SECTOR_PARITIES,
        }
    }

    /// Split of a dual rotation by θ: sector `(P−,t+)` holds the `cosθ` part
    /// (E cosθ, H cosθ), sector `(P+,t+)` the `sinθ` part (Z₀H sinθ, −E sinθ/Z₀).
    /// Their sum is the rotated field.
    pub fn from_dual_rotation(field: Arc<dyn AnalyticField>, theta: f64, z0: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let zero: Arc<dyn AnalyticField> = Arc::new(ZeroField { length: field.length() });
        let cos_part: Arc<dyn AnalyticField> = Arc::new(Scaled {
            inner: field.clone(),
            e_scale: Complex::new(c, 0.0),
            h_scale: Complex::new(c, 0.0),
        });
        let quarter: Arc<dyn AnalyticField> = Arc::new(DualRotated {
            inner: field,
            theta: std::f64::consts::FRAC_PI_2,
            z0,
        });
        let sin_part: Arc<dyn AnalyticField> = Arc::new(Scaled {
            inner: quarter,
            e_scale: Complex::new(s, 0.0),
            h_scale: Complex::new(s, 0.0),
        });
        Self {
            sectors: [cos_part, zero.clone(), sin_part, zero],
            parities: SECTOR_PARITIES,
        }
    }

    pub fn length(&self) -> f64 {
        self.sectors[0].length()
    }

    /// `𝔈 = (E₁ − iE₂) + (E₃ − iE₄) j` and the same packing for H.
    pub fn eval(&self, z: f64, t: f64) -> (QuaternionVec3, QuaternionVec3) {
        let s: Vec<FieldPair> = self.sectors.iter().map(|f| f.sample(z, t).value).collect();
        let mi = Complex::new(0.0, -1.0);
        let pack = |a: ComplexVec3, b: ComplexVec3| a + b * mi;
        (
            QuaternionVec3 {
                e_part: pack(s[0].e, s[1].e),
                j_part: pack(s[2].e, s[3].e),
            },
            QuaternionVec3 {
                e_part: pack(s[0].h, s[1].h),
                j_part: pack(s[2].h, s[3].h),
            },
        )
    }

    /// Sector-wise values at the reflected point `−z` (reflection in the
    /// wall plane z = 0, with modes continued analytically).
    pub fn reflected(&self, z: f64, t: f64) -> [FieldPair; 4] {
        std::array::from_fn(|i| self.sectors[i].sample(-z, t).value)
    }

    /// Per sector, max over the grid of `|E(−z) − P·E(z)|`; zero when every
    /// sector's E has the spatial parity of its label.
    pub fn parity_violation(&self, grid: &Grid) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (z, t) in grid.points() {
            let r = self.reflected(z, t);
            for i in 0..4 {
                let v = self.sectors[i].sample(z, t).value.e * self.parities[i].p.value();
                out[i] = f64::max(out[i], (r[i].e - v).max_abs());
            }
        }
        out
    }

    pub fn max_wavenumber(&self) -> f64 {
        self.sectors.iter().map(|s| s.max_wavenumber()).fold(0.0, f64::max)
    }

    pub fn max_frequency(&self) -> f64 {
        self.sectors.iter().map(|s| s.max_frequency()).fold(0.0, f64::max)
    }
}

/// Sources of the generalized equations in one sector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SourceSample {
    pub j_e: ComplexVec3,
    pub j_g: ComplexVec3,
    pub rho_e: Complex,
    pub rho_g: Complex,
}

pub trait SourceField: Send + Sync {
    fn sample(&self, z: f64, t: f64) -> SourceSample;
}

/// Residuals of the four generalized equations:
/// `∇×E + μ₀∂ₜH + j_g`, `∇×H − ε₀∂ₜE − j_e`, `∇·E − ρ_e`, `∇·H − ρ_g`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MaxwellResidual {
    pub curl_e: f64,
    pub curl_h: f64,
    pub div_e: f64,
    pub div_h: f64,
}

impl MaxwellResidual {
    pub fn max(&self) -> f64 {
        self.curl_e.max(self.curl_h).max(self.div_e).max(self.div_h)
    }

    fn merge(&mut self, o: &Self) {
        self.curl_e = self.curl_e.max(o.curl_e);
        self.curl_h = self.curl_h.max(o.curl_h);
        self.div_e = self.div_e.max(o.div_e);
        self.div_h = self.div_h.max(o.div_h);
    }
}

/// Absolute and scale-normalized residuals.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Max over the grid of the residual norm.
    pub absolute: MaxwellResidual,
    /// Absolute residual divided by the largest single-term magnitude on the
    /// grid (0 when every term vanishes).
    pub relative: MaxwellResidual,
}

fn curl_z(d: &ComplexVec3) -> ComplexVec3 {
    ComplexVec3([-d.0[1], d.0[0], Complex::default()])
}

fn div_z(d: &ComplexVec3) -> Complex {
    d.0[2]
}

#[derive(Default)]
struct Acc {
    res: f64,
    scale: f64,
}

impl Acc {
    fn push(&mut self, res: f64, terms: &[f64]) {
        self.res = self.res.max(res);
        for t in terms {
            self.scale = self.scale.max(*t);
        }
    }

    fn rel(&self) -> f64 {
        if self.scale == 0.0 {
            self.res
        } else {
            self.res / self.scale
        }
    }
}

fn sector_residual(
    field: &dyn AnalyticField,
    sources: Option<&dyn SourceField>,
    grid: &Grid,
    k: &PhysicalConstants,
) -> ResidualReport {
    let mut acc: [Acc; 4] = Default::default();
    for (z, t) in grid.points() {
        let s = field.sample(z, t);
        let src = sources.map(|f| f.sample(z, t)).unwrap_or_default();
        let ce = curl_z(&s.dz.e);
        let ch = curl_z(&s.dz.h);
        let mdh = s.dt.h * k.mu0;
        let edt = s.dt.e * k.eps0;
        let r1 = ce + mdh + src.j_g;
        let r2 = ch - edt - src.j_e;
        let de = div_z(&s.dz.e);
        let dh = div_z(&s.dz.h);
        acc[0].push(r1.max_abs(), &[ce.max_abs(), mdh.max_abs(), src.j_g.max_abs()]);
        acc[1].push(r2.max_abs(), &[ch.max_abs(), edt.max_abs(), src.j_e.max_abs()]);
        acc[2].push((de - src.rho_e).norm(), &[de.norm(), src.rho_e.norm()]);
        acc[3].push((dh - src.rho_g).norm(), &[dh.norm(), src.rho_g.norm()]);
    }
    ResidualReport {
        absolute: MaxwellResidual {
            curl_e: acc[0].res,
            curl_h: acc[1].res,
            div_e: acc[2].res,
            div_h: acc[3].res,
        },
        relative: MaxwellResidual {
            curl_e: acc[0].rel(),
            curl_h: acc[1].rel(),
            div_e: acc[2].rel(),
            div_h: acc[3].rel(),
        },
    }
}

/// Residuals of the generalized Maxwell equations, evaluated sector by sector
/// and maximized over sectors. `sources` are per sector; `None` means zero.
pub fn maxwell_residual(
    q: &QuaternionField,
    sources: Option<&[Arc<dyn SourceField>; 4]>,
    grid: &Grid,
    constants: &PhysicalConstants,
) -> Result<ResidualReport> {
    grid.validate(q.max_wavenumber(), q.max_frequency())?;
    let mut out = ResidualReport::default();
    for (i, f) in q.sectors.iter().enumerate() {
        let src = sources.map(|s| s[i].as_ref());
        let r = sector_residual(f.as_ref(), src, grid, constants);
        out.absolute.merge(&r.absolute);
        out.relative.merge(&r.relative);
    }
    Ok(out)
}

/// Residual of the Cauchy–Riemann (analyticity) condition for
/// `F = √μ₀ H − i√ε₀ E`: max over the grid of `|∇×F − (i/c)∂ₜF|`.
/// Free fields propagating toward +z give zero.
pub fn cauchy_riemann_residual(field: &dyn AnalyticField, grid: &Grid, constants: &PhysicalConstants) -> f64 {
    let a = constants.mu0.sqrt();
    let b = Complex::new(0.0, -constants.eps0.sqrt());
    let ic = Complex::new(0.0, 1.0 / constants.c);
    let mut worst: f64 = 0.0;
    for (z, t) in grid.points() {
        let s = field.sample(z, t);
        let f_z = s.dz.h * a + s.dz.e * b;
        let f_t = s.dt.h * a + s.dt.e * b;
        let r = curl_z(&f_z) - f_t * ic;
        worst = worst.max(r.max_abs());
    }
    worst
}

/// Field energy `(V/L)∫₀^L (ε₀|E|² + μ₀|H|²)/2 dz` at time t.
pub fn field_energy(field: &dyn AnalyticField, model: &CavityModel, t: f64) -> f64 {
    let k = &model.constants;
    let dens = |z: f64| {
        let v = field.sample(z, t).value;
        0.5 * (k.eps0 * v.e.cdot(&v.e).re + k.mu0 * v.h.cdot(&v.h).re)
    };
    model.volume / model.length * integrate_converged(dens, 0.0, model.length, 1e-14)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: usize) -> CavityModel {
        CavityModel::uniform(1.0, 1.0, n, 1.0, PhysicalConstants::natural()).unwrap()
    }

    #[test]
    fn boundary_and_initial_values() {
        let m = model(1);
        let st = ModeState::new(vec![Complex::new(0.5, 0.0)], vec![Complex::new(0.5, 0.0)]).unwrap();
        for t in [0.0, 0.3, 0.9] {
            let f = field_first_solution(&m, &st, 0.0, t).unwrap();
            assert_eq!(f.e.0[0], Complex::default());
        }
        let f = field_first_solution(&m, &st, 0.37, 0.0).unwrap();
        assert!(f.h.0[1].norm() < 1e-16);
        assert!(field_first_solution(&m, &st, 1.5, 0.0).is_err());
    }

    #[test]
    fn from_zero_integrals_of_a_single_exponential() {
        let m = model(1);
        let w = m.omega(1);
        let st = ModeState::new(vec![Complex::default()], vec![Complex::new(1.0, 0.0)]).unwrap();
        for t in [0.0, 0.21, 0.77, 1.9] {
            let e = Complex::from_polar(1.0, -w * t);
            let i = Complex::new(0.0, 1.0);
            let qp = i * (e - 1.0);
            let qpp = -e + 1.0 - i * (w * t);
            assert!((st.q_prime(&m, 1, t, Convention::FromZero) - qp).norm() < 1e-14);
            assert!((st.q_dprime(&m, 1, t, Convention::FromZero) - qpp).norm() < 1e-13);
            assert!((st.q_dprime(&m, 1, t, Convention::SecularFree) + st.q(&m, 1, t)).norm() < 1e-15);
        }
        assert_eq!(st.secular_modes(&m, Convention::FromZero), vec![1]);
        assert!(st.secular_modes(&m, Convention::SecularFree).is_empty());
    }

    #[test]
    fn second_solution_is_the_negated_first() {
        let m = model(3);
        let st = ModeState::new(
            vec![Complex::new(0.2, 0.1), Complex::new(-0.3, 0.0), Complex::new(0.0, 0.4)],
            vec![Complex::new(0.5, -0.2), Complex::new(0.1, 0.1), Complex::new(0.3, 0.0)],
        )
        .unwrap();
        let f1 = FirstSolution::new(m.clone(), st.clone()).unwrap();
        let f2 = SecondSolution::new(m, st, Convention::SecularFree).unwrap();
        for (z, t) in [(0.1, 0.2), (0.5, 0.9), (0.93, 0.4)] {
            let a = f1.sample(z, t).value;
            let b = f2.sample(z, t).value;
            assert!((a + b).e.max_abs() < 1e-14 && (a + b).h.max_abs() < 1e-14);
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let m = model(8);
        let f = FirstSolution::new(m.clone(), ModeState::real(&[1.0; 8], &[0.0; 8]).unwrap()).unwrap();
        let q = QuaternionField::single(Arc::new(f));
        let g = Grid::for_model(&m, 10, 10);
        assert!(matches!(maxwell_residual(&q, None, &g, &m.constants), Err(Error::GridTooCoarse(_))));
    }
}
