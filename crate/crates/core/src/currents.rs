//! Complex 4-currents, Noether charges and spirality of the cavity field.
//!
//! Field functions per mode α (sign ±, `x₄ = ict`, `∂₄ = −(i/c)∂_t`):
//!
//! - `u¹ = √ε₀ A^E sin(kz) [q ± i q″]`
//! - `u² = √μ₀ A^H cos(kz) [−q′ ± (i/ω) q̇]`
//!
//! With `L = Σ ∂_μu ∂_μu* − K u u*` the two currents are
//! `j¹_μ = (ie/ħc) Σ (u* ∂_μu − u ∂_μu*)` and
//! `j²_μ = −(ie/ħc) Σ (u* ∂_μu + u ∂_μu*)`; the full current is `j¹ + i j²`.
//! The charge unit `e` is a parameter (default 1).

use crate::algebra::Complex;
use crate::cavity::{CavityModel, Convention, Grid, ModeState};
use crate::error::{invalid, Error, Result};
use crate::fockquant::{commutator, make_ladder, max_abs, restrict, safe_indices, CMat};
use crate::quad::integrate_converged;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

const I: Complex = Complex::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PmSign {
    Plus,
    Minus,
}

impl PmSign {
    pub fn value(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

/// Time dependence of one mode: `q`, its derivatives and the iterated
/// integrals `q′ = ω∫q`, `q″ = ω∫q′`.
pub trait ModeFunction: Send + Sync {
    fn omega(&self) -> f64;
    fn q(&self, t: f64) -> Complex;
    fn q_dot(&self, t: f64) -> Complex;
    fn q_ddot(&self, t: f64) -> Complex;
    fn q_dddot(&self, t: f64) -> Complex;
    fn q_prime(&self, t: f64) -> Complex;
    fn q_dprime(&self, t: f64) -> Complex;
}

/// `q = C₁e^{iωt} + C₂e^{−iωt}`.
#[derive(Debug, Clone)]
pub struct MaxwellianMode {
    pub omega: f64,
    pub convention: Convention,
    state: ModeState,
    // Single-mode model whose first mode has frequency ω.
    model: CavityModel,
}

impl MaxwellianMode {
    pub fn new(c1: Complex, c2: Complex, omega: f64, convention: Convention) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(invalid(format!("mode frequency must be positive, got {omega}")));
        }
        let model = CavityModel::new(
            std::f64::consts::PI / omega,
            1.0,
            vec![1.0],
            crate::constants::PhysicalConstants::natural(),
        )?;
        let state = ModeState {
            c1: vec![c1],
            c2: vec![c2],
        };
        Ok(Self {
            omega,
            convention,
            state,
            model,
        })
    }

    pub fn c1(&self) -> Complex {
        self.state.c1[0]
    }

    pub fn c2(&self) -> Complex {
        self.state.c2[0]
    }
}

impl ModeFunction for MaxwellianMode {
    fn omega(&self) -> f64 {
        self.omega
    }
    fn q(&self, t: f64) -> Complex {
        self.state.q(&self.model, 1, t)
    }
    fn q_dot(&self, t: f64) -> Complex {
        self.state.q_dot(&self.model, 1, t)
    }
    fn q_ddot(&self, t: f64) -> Complex {
        self.state.q_ddot(&self.model, 1, t)
    }
    fn q_dddot(&self, t: f64) -> Complex {
        -self.q_dot(t) * self.omega.powi(2)
    }
    fn q_prime(&self, t: f64) -> Complex {
        self.state.q_prime(&self.model, 1, t, self.convention)
    }
    fn q_dprime(&self, t: f64) -> Complex {
        self.state.q_dprime(&self.model, 1, t, self.convention)
    }
}

/// `q = P(t) e^{iνt}` with complex polynomial `P`; a generic smooth mode
/// that does not solve the oscillator equation.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyTrigMode {
    pub poly: Vec<Complex>,
    pub nu: f64,
    pub omega: f64,
}

impl PolyTrigMode {
    fn p(&self, t: f64, d: usize) -> Complex {
        let mut s = Complex::default();
        for (j, c) in self.poly.iter().enumerate().skip(d) {
            let f: f64 = ((j - d + 1)..=j).map(|x| x as f64).product();
            s += c * f * t.powi((j - d) as i32);
        }
        s
    }

    fn deriv(&self, t: f64, n: usize) -> Complex {
        // Leibniz rule for P(t)·e^{iνt}.
        let e = Complex::from_polar(1.0, self.nu * t);
        let mut s = Complex::default();
        let mut binom = 1.0;
        for j in 0..=n {
            s += self.p(t, j) * (I * self.nu).powu((n - j) as u32) * binom;
            binom = binom * (n - j) as f64 / (j + 1) as f64;
        }
        s * e
    }
}

impl ModeFunction for PolyTrigMode {
    fn omega(&self) -> f64 {
        self.omega
    }
    fn q(&self, t: f64) -> Complex {
        self.deriv(t, 0)
    }
    fn q_dot(&self, t: f64) -> Complex {
        self.deriv(t, 1)
    }
    fn q_ddot(&self, t: f64) -> Complex {
        self.deriv(t, 2)
    }
    fn q_dddot(&self, t: f64) -> Complex {
        self.deriv(t, 3)
    }
    fn q_prime(&self, t: f64) -> Complex {
        integrate_converged(|s| self.q(s), 0.0, t, 1e-14) * self.omega
    }
    fn q_dprime(&self, t: f64) -> Complex {
        integrate_converged(|s| self.q(s) * (t - s), 0.0, t, 1e-14) * self.omega.powi(2)
    }
}

/// Derivatives of a field function at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub u: Complex,
    pub uz: Complex,
    pub uzz: Complex,
    pub ut: Complex,
    pub utt: Complex,
}

impl Jet {
    fn scale(self, s: Complex) -> Self {
        Self {
            u: self.u * s,
            uz: self.uz * s,
            uzz: self.uzz * s,
            ut: self.ut * s,
            utt: self.utt * s,
        }
    }

    fn add(self, o: Self) -> Self {
        Self {
            u: self.u + o.u,
            uz: self.uz + o.uz,
            uzz: self.uzz + o.uzz,
            ut: self.ut + o.ut,
            utt: self.utt + o.utt,
        }
    }
}

/// Mode functions `u^{s,±}_α` with an optional gauge factor `βe^{iα}` and a
/// dual rotation by θ of each `(u¹_α, u²_α)` pair.
#[derive(Clone)]
pub struct FieldFunctionSet {
    pub model: CavityModel,
    pub modes: Vec<Arc<dyn ModeFunction>>,
    pub sign: PmSign,
    /// `(α, β)` of the gauge factor `βe^{iα}`.
    pub gauge: (f64, f64),
    pub dual_theta: f64,
    pub charge: f64,
}

impl FieldFunctionSet {
    pub fn new(model: CavityModel, modes: Vec<Arc<dyn ModeFunction>>, sign: PmSign) -> Result<Self> {
        if modes.len() != model.n_modes() {
            return Err(invalid(format!(
                "{} mode functions for a {}-mode cavity",
                modes.len(),
                model.n_modes()
            )));
        }
        Ok(Self {
            model,
            modes,
            sign,
            gauge: (0.0, 1.0),
            dual_theta: 0.0,
            charge: 1.0,
        })
    }

    /// Maxwellian set from mode coefficients.
    pub fn maxwellian(model: CavityModel, state: &ModeState, sign: PmSign, convention: Convention) -> Result<Self> {
        if state.len() != model.n_modes() {
            return Err(invalid("mode state length does not match the cavity"));
        }
        let modes = model
            .modes()
            .map(|a| {
                MaxwellianMode::new(state.c1[a - 1], state.c2[a - 1], model.omega(a), convention)
                    .map(|m| Arc::new(m) as Arc<dyn ModeFunction>)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(model, modes, sign)
    }

    pub fn with_gauge(mut self, alpha: f64, beta: f64) -> Self {
        self.gauge = (alpha, beta);
        self
    }

    pub fn with_dual_rotation(mut self, theta: f64) -> Self {
        self.dual_theta = theta;
        self
    }

    pub fn with_charge(mut self, e: f64) -> Self {
        self.charge = e;
        self
    }

    /// `(u¹_α, u²_α)` jets at `(z, t)` for mode α (1-based).
    pub fn jets(&self, alpha: usize, z: f64, t: f64) -> [Jet; 2] {
        let m = &self.model;
        let k = m.wavenumber(alpha);
        let f = &self.modes[alpha - 1];
        let w = f.omega();
        let s = self.sign.value();
        let (sn, cs) = ((k * z).sin(), (k * z).cos());
        let a1 = m.constants.eps0.sqrt() * m.amp_e(alpha);
        let a2 = m.constants.mu0.sqrt() * m.amp_h(alpha);

        let f1 = f.q(t) + I * s * f.q_dprime(t);
        let f1t = f.q_dot(t) + I * s * w * f.q_prime(t);
        let f1tt = f.q_ddot(t) + I * s * w * w * f.q(t);
        let f2 = -f.q_prime(t) + I * s / w * f.q_dot(t);
        let f2t = -f.q(t) * w + I * s / w * f.q_ddot(t);
        let f2tt = -f.q_dot(t) * w + I * s / w * f.q_dddot(t);

        let u1 = Jet {
            u: f1 * (a1 * sn),
            uz: f1 * (a1 * k * cs),
            uzz: f1 * (-a1 * k * k * sn),
            ut: f1t * (a1 * sn),
            utt: f1tt * (a1 * sn),
        };
        let u2 = Jet {
            u: f2 * (a2 * cs),
            uz: f2 * (-a2 * k * sn),
            uzz: f2 * (-a2 * k * k * cs),
            ut: f2t * (a2 * cs),
            utt: f2tt * (a2 * cs),
        };
        let g = Complex::from_polar(self.gauge.1, self.gauge.0);
        let (c, sth) = (self.dual_theta.cos(), self.dual_theta.sin());
        let r1 = u1.scale(Complex::new(c, 0.0)).add(u2.scale(Complex::new(sth, 0.0)));
        let r2 = u1.scale(Complex::new(-sth, 0.0)).add(u2.scale(Complex::new(c, 0.0)));
        [r1.scale(g), r2.scale(g)]
    }

    fn all_jets(&self, z: f64, t: f64) -> Vec<Jet> {
        self.model.modes().flat_map(|a| self.jets(a, z, t)).collect()
    }
}

/// `j_μ = j¹_μ + i j²_μ` at one point, for μ = 3 (z) and μ = 4 (`x₄ = ict`).
/// `j¹` and `j²` are complex because of the `x₄ = ict` convention.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FourCurrent {
    pub j3_1: Complex,
    pub j3_2: Complex,
    pub j4_1: Complex,
    pub j4_2: Complex,
}

/// Current with the analytic divergence `∂₃j₃ + ∂₄j₄` of both parts.
pub trait CurrentField: Send + Sync {
    fn current(&self, z: f64, t: f64) -> FourCurrent;
    /// `[∂_μ j¹_μ, ∂_μ j²_μ]`.
    fn divergence(&self, z: f64, t: f64) -> [Complex; 2];
    fn model(&self) -> &CavityModel;
}

fn d4(c: f64, ut: Complex) -> Complex {
    -I / c * ut
}

impl CurrentField for FieldFunctionSet {
    fn current(&self, z: f64, t: f64) -> FourCurrent {
        let k = &self.model.constants;
        let pre = self.charge / (k.hbar * k.c);
        let mut out = FourCurrent::default();
        for j in self.all_jets(z, t) {
            let (u, uc) = (j.u, j.u.conj());
            let (d3u, d3uc) = (j.uz, j.uz.conj());
            let (d4u, d4uc) = (d4(k.c, j.ut), d4(k.c, j.ut.conj()));
            out.j3_1 += I * pre * (uc * d3u - u * d3uc);
            out.j3_2 += -I * pre * (uc * d3u + u * d3uc);
            out.j4_1 += I * pre * (uc * d4u - u * d4uc);
            out.j4_2 += -I * pre * (uc * d4u + u * d4uc);
        }
        out
    }

    fn divergence(&self, z: f64, t: f64) -> [Complex; 2] {
        let k = &self.model.constants;
        let pre = self.charge / (k.hbar * k.c);
        let c2 = k.c * k.c;
        let mut d1 = Complex::default();
        let mut d2 = Complex::default();
        for j in self.all_jets(z, t) {
            let box_u = j.uzz - j.utt / c2;
            let box_uc = j.uzz.conj() - j.utt.conj() / c2;
            let grad2 = j.uz.conj() * j.uz - j.ut.conj() * j.ut / c2;
            d1 += I * pre * (j.u.conj() * box_u - j.u * box_uc);
            d2 += -I * pre * (grad2 * 2.0 + j.u.conj() * box_u + j.u * box_uc);
        }
        [d1, d2]
    }

    fn model(&self) -> &CavityModel {
        &self.model
    }
}

/// Closed forms for Maxwellian mode coefficients:
///
/// - `j₃¹ = 0`
/// - `j₃² = −(8ie/ħc²V) Σ mω³ sin 2kz [C₁C₂* e^{2iωt} + c.c.]`
/// - `j₄¹ = (8ie/ħc²V) Σ mω³ (|C₁|² − |C₂|²)`
/// - `j₄² = (8ie/ħc²V) Σ mω³ cos 2kz [C₁C₂* e^{2iωt} − c.c.]`
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormCurrent {
    pub model: CavityModel,
    pub state: ModeState,
    pub charge: f64,
}

impl ClosedFormCurrent {
    pub fn new(model: CavityModel, state: ModeState) -> Result<Self> {
        if state.len() != model.n_modes() {
            return Err(invalid("mode state length does not match the cavity"));
        }
        Ok(Self {
            model,
            state,
            charge: 1.0,
        })
    }

    fn terms(&self, alpha: usize, t: f64) -> (f64, Complex, f64) {
        let k = &self.model.constants;
        let w = self.model.omega(alpha);
        let pre = 8.0 * self.charge / (k.hbar * k.c * k.c * self.model.volume) * self.model.mass(alpha) * w.powi(3);
        let (c1, c2) = (self.state.c1[alpha - 1], self.state.c2[alpha - 1]);
        let x = c1 * c2.conj() * Complex::from_polar(1.0, 2.0 * w * t);
        (pre, x, c1.norm_sqr() - c2.norm_sqr())
    }
}

impl CurrentField for ClosedFormCurrent {
    fn current(&self, z: f64, t: f64) -> FourCurrent {
        let mut out = FourCurrent::default();
        for a in self.model.modes() {
            let (pre, x, d) = self.terms(a, t);
            let kz2 = 2.0 * self.model.wavenumber(a) * z;
            out.j3_2 += -I * pre * kz2.sin() * (x + x.conj());
            out.j4_1 += I * pre * d;
            out.j4_2 += I * pre * kz2.cos() * (x - x.conj());
        }
        out
    }

    fn divergence(&self, z: f64, t: f64) -> [Complex; 2] {
        let c = self.model.constants.c;
        let mut d2 = Complex::default();
        for a in self.model.modes() {
            let (pre, x, _) = self.terms(a, t);
            let k = self.model.wavenumber(a);
            let w = self.model.omega(a);
            let kz2 = 2.0 * k * z;
            let dz_j3 = -I * pre * 2.0 * k * kz2.cos() * (x + x.conj());
            let dt_j4 = I * pre * kz2.cos() * (2.0 * I * w) * (x + x.conj());
            d2 += dz_j3 + d4(c, dt_j4);
        }
        [Complex::default(), d2]
    }

    fn model(&self) -> &CavityModel {
        &self.model
    }
}

/// Adds `rate·t` to `j₄¹`, so `∂₄j₄¹` gains `−(i/c)·rate`.
pub struct Perturbed<C: CurrentField> {
    pub inner: C,
    pub rate: f64,
}

impl<C: CurrentField> CurrentField for Perturbed<C> {
    fn current(&self, z: f64, t: f64) -> FourCurrent {
        let mut j = self.inner.current(z, t);
        j.j4_1 += Complex::new(self.rate * t, 0.0);
        j
    }

    fn divergence(&self, z: f64, t: f64) -> [Complex; 2] {
        let [a, b] = self.inner.divergence(z, t);
        [a + d4(self.inner.model().constants.c, Complex::new(self.rate, 0.0)), b]
    }

    fn model(&self) -> &CavityModel {
        self.inner.model()
    }
}

/// Closed-form current at `(z, t)`; both signs give the same closed forms.
pub fn classical_current(model: &CavityModel, state: &ModeState, _sign: PmSign, z: f64, t: f64) -> Result<FourCurrent> {
    model.check_z(z)?;
    Ok(ClosedFormCurrent::new(model.clone(), state.clone())?.current(z, t))
}

/// `max |∂₃j₃ + ∂₄j₄|` over the grid, both parts.
pub fn continuity_residual(current: &dyn CurrentField, grid: &Grid) -> Result<f64> {
    let m = current.model();
    let n = m.n_modes();
    grid.validate(2.0 * m.wavenumber(n), 2.0 * m.omega(n))?;
    Ok(grid
        .points()
        .map(|(z, t)| {
            let [a, b] = current.divergence(z, t);
            a.norm().max(b.norm())
        })
        .fold(0.0, f64::max))
}

/// Per-mode operator blocks of the quantized current, time-local scheme
/// with `â″ = −â` (the secular-free Maxwellian relation).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedCurrent {
    pub dim: usize,
    /// `Re ĵ₃`, identically zero.
    pub j3_1: Vec<CMat>,
    /// `Im ĵ₃ = −(2ie/cV) Σ kω sin 2kz {â² + â†² + â″² + â″†²}`.
    pub j3_2: Vec<CMat>,
    /// `Re ĵ₄ = (2e/c²V) Σ ω² [{â″, â†} − {â, â″†}]`, zero for Maxwellian operators.
    pub j4_1: Vec<CMat>,
    /// `Im ĵ₄ = (2ie/c²V) Σ [ω² {â†² − â² + â″†² − â″²} cos 2kz − 2ω² 1]`.
    pub j4_2: Vec<CMat>,
}

fn ladders_at(model: &CavityModel, alpha: usize, dim: usize, t: f64) -> Result<(CMat, CMat)> {
    let (a, ad) = make_ladder(dim)?;
    let ph = Complex::from_polar(1.0, -model.omega(alpha) * t);
    Ok((a.entries * ph, ad.entries * ph.conj()))
}

pub fn quantized_current(model: &CavityModel, dim: usize, z: f64, t: f64, charge: f64) -> Result<QuantizedCurrent> {
    if dim < 3 {
        return Err(invalid(format!("quantized current needs dim >= 3, got {dim}")));
    }
    model.check_z(z)?;
    let k = &model.constants;
    let v = model.volume;
    let mut out = QuantizedCurrent {
        dim,
        j3_1: Vec::new(),
        j3_2: Vec::new(),
        j4_1: Vec::new(),
        j4_2: Vec::new(),
    };
    for alpha in model.modes() {
        let (a, ad) = ladders_at(model, alpha, dim, t)?;
        let (a2, ad2) = (-&a, -&ad);
        let w = model.omega(alpha);
        let kk = model.wavenumber(alpha);
        let one = CMat::identity(dim, dim);
        let sq = |m: &CMat| m * m;
        let s = sq(&a) + sq(&ad) + sq(&a2) + sq(&ad2);
        out.j3_1.push(CMat::zeros(dim, dim));
        out.j3_2
            .push(s * (-I * 2.0 * charge / (k.c * v) * kk * w * (2.0 * kk * z).sin()));
        let anti = |x: &CMat, y: &CMat| x * y + y * x;
        out.j4_1
            .push((anti(&a2, &ad) - anti(&a, &ad2)) * Complex::new(2.0 * charge / (k.c * k.c * v) * w * w, 0.0));
        let d = sq(&ad) - sq(&a) + sq(&ad2) - sq(&a2);
        let j42 = (d * Complex::new(w * w * (2.0 * kk * z).cos(), 0.0) - one * Complex::new(2.0 * w * w, 0.0))
            * (I * 2.0 * charge / (k.c * k.c * v));
        out.j4_2.push(j42);
    }
    Ok(out)
}

/// Operator continuity on the safe block: `∂_z` analytic, `∂_t X = (1/iħ)[X, ℋ]`
/// with `ℋ = ħω(â†â + ½)` per mode. Returns the larger of the two parts.
pub fn quantized_continuity_residual(model: &CavityModel, dim: usize, z: f64, t: f64, charge: f64) -> Result<f64> {
    let cur = quantized_current(model, dim, z, t, charge)?;
    let k = &model.constants;
    let idx = safe_indices(dim);
    let mut worst: f64 = 0.0;
    for (i, alpha) in model.modes().enumerate() {
        let w = model.omega(alpha);
        let kk = model.wavenumber(alpha);
        let (a, ad) = make_ladder(dim)?;
        let h = (&ad.entries * &a.entries + CMat::identity(dim, dim) * Complex::new(0.5, 0.0)) * Complex::new(k.hbar * w, 0.0);
        let dt = |x: &CMat| commutator(x, &h) / (I * k.hbar);
        // z enters Im ĵ₃ only through sin 2kz.
        let s = (2.0 * kk * z).sin();
        let dz_j3 = if s == 0.0 {
            let (a, ad) = ladders_at(model, alpha, dim, t)?;
            let sum = (&a * &a + &ad * &ad) * Complex::new(2.0, 0.0);
            sum * (-I * 2.0 * charge / (k.c * model.volume) * kk * w * 2.0 * kk * (2.0 * kk * z).cos())
        } else {
            &cur.j3_2[i] * Complex::new(2.0 * kk * (2.0 * kk * z).cos() / s, 0.0)
        };
        let im = dz_j3 + dt(&cur.j4_2[i]) * (-I / k.c);
        let re = dt(&cur.j4_1[i]) * (-I / k.c);
        let r = max_abs(&restrict(&im, &idx)).max(max_abs(&restrict(&re, &idx)));
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Complex Noether charge `Q = Q₁ + iQ₂` with `d³x = (V/L) dz`:
///
/// - `Q₁ = (2/c) ∫ Σ Im(u* u̇) d³x`
/// - `Q₂ = (1/c) ∫ Σ ∂_t|u|² d³x`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoetherCharge {
    pub q1: f64,
    pub q2: f64,
    pub gauge_params: (f64, f64),
    /// `(2/c) ∫ Σ |u||u̇| d³x`, a magnitude for relative comparisons.
    pub scale: f64,
}

impl NoetherCharge {
    pub fn q(&self) -> Complex {
        Complex::new(self.q1, self.q2)
    }
}

pub fn noether_charge(set: &FieldFunctionSet, t: f64) -> Result<NoetherCharge> {
    let m = &set.model;
    let c = m.constants.c;
    let area = m.volume / m.length;
    let dens = |z: f64| {
        let mut q1 = 0.0;
        let mut q2 = 0.0;
        for j in set.all_jets(z, t) {
            let p = j.u.conj() * j.ut;
            q1 += p.im;
            q2 += 2.0 * p.re;
        }
        Complex::new(q1, q2)
    };
    let scale_dens = |z: f64| set.all_jets(z, t).iter().map(|j| j.u.norm() * j.ut.norm()).sum::<f64>();
    let v = integrate_converged(dens, 0.0, m.length, 1e-14);
    let s = integrate_converged(scale_dens, 0.0, m.length, 1e-14);
    if !(v.re.is_finite() && v.im.is_finite() && s.is_finite()) {
        return Err(Error::Divergent("Noether charge integrand"));
    }
    Ok(NoetherCharge {
        q1: 2.0 / c * area * v.re,
        q2: area / c * v.im,
        gauge_params: set.gauge,
        scale: 2.0 / c * area * s,
    })
}

/// `(vℰ/ħc) ∫ Σ [∂L/∂(∂₄u) u + ∂L/∂(∂₄u*) u*] d³x`, the charge obtained from
/// analyticity; with `∂L/∂(∂₄u) = ∂₄u*` the bracket is `−(i/c) ∂_t|u|²`, so its
/// magnitude is `vℰ/(ħc)` times `|Q₂|`.
pub fn q2_from_analyticity(set: &FieldFunctionSet, t: f64, v: f64, energy: f64) -> Result<Complex> {
    let m = &set.model;
    let k = &m.constants;
    let area = m.volume / m.length;
    let dens = |z: f64| {
        set.all_jets(z, t)
            .iter()
            .map(|j| d4(k.c, j.ut.conj()) * j.u + d4(k.c, j.ut) * j.u.conj())
            .sum::<Complex>()
    };
    let val = integrate_converged(dens, 0.0, m.length, 1e-14) * (area * v * energy / (k.hbar * k.c));
    if !(val.re.is_finite() && val.im.is_finite()) {
        return Err(Error::Divergent("analyticity charge integrand"));
    }
    Ok(val)
}

/// Largest relative change of `Q` over `samples` times spanning one period
/// of the lowest mode.
pub fn noether_drift(set: &FieldFunctionSet, samples: usize) -> Result<f64> {
    let period = 2.0 * std::f64::consts::PI / set.model.omega(1);
    let q0 = noether_charge(set, 0.0)?;
    let scale = q0.q().norm().max(q0.scale).max(f64::MIN_POSITIVE);
    let n = samples.max(2);
    let mut worst: f64 = 0.0;
    for i in 1..n {
        let t = period * i as f64 / (n - 1) as f64;
        worst = worst.max((noether_charge(set, t)?.q() - q0.q()).norm() / scale);
    }
    Ok(worst)
}

/// `|□u + Ku|` summed over sectors and modes with `K = 0`, the free-field
/// Lagrange equation.
pub fn lagrange_residual(set: &FieldFunctionSet, z: f64, t: f64) -> f64 {
    let c2 = set.model.constants.c.powi(2);
    set.all_jets(z, t).iter().map(|j| (j.uzz - j.utt / c2).norm()).sum()
}

/// Spin density and spirality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinDensity {
    /// `∫ S⁴₁₂ d³x` of each mode over the range.
    pub s4_12: Vec<f64>,
    /// Spirality `S⁴₃ = ε₃₁₂ S⁴₁₂`, the sum over modes.
    pub s4_3: f64,
}

/// `S⁴₁₂` density of mode α: `2 Re[∂₄u¹* u² − ∂₄u²* u¹]`.
pub fn spin_density(set: &FieldFunctionSet, alpha: usize, z: f64, t: f64) -> f64 {
    let c = set.model.constants.c;
    let [u1, u2] = set.jets(alpha, z, t);
    let v = d4(c, u1.ut.conj()) * u2.u - d4(c, u2.ut.conj()) * u1.u;
    2.0 * v.re
}

/// Spirality over `z ∈ [z0, z1]` (default the whole cavity).
pub fn spirality(set: &FieldFunctionSet, t: f64, range: Option<(f64, f64)>) -> Result<SpinDensity> {
    let m = &set.model;
    let (z0, z1) = range.unwrap_or((0.0, m.length));
    m.check_z(z0)?;
    m.check_z(z1)?;
    let area = m.volume / m.length;
    let s4_12: Vec<f64> = m
        .modes()
        .map(|a| area * integrate_converged(|z| spin_density(set, a, z, t), z0, z1, 1e-14))
        .collect();
    let s4_3 = s4_12.iter().sum();
    Ok(SpinDensity { s4_12, s4_3 })
}

/// `g/e ≈ √(J_E/J_H)`.
pub fn charge_ratio_estimate(j_e: f64, j_h: f64) -> Result<f64> {
    if !(j_e > 0.0 && j_h > 0.0) || !j_e.is_finite() || !j_h.is_finite() {
        return Err(invalid(format!("J_E and J_H must be positive, got {j_e}, {j_h}")));
    }
    Ok((j_e / j_h).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;

    fn model(n: usize) -> CavityModel {
        CavityModel::uniform(1.0, 2.0, n, 1.0, PhysicalConstants::natural()).unwrap()
    }

    fn state() -> ModeState {
        ModeState::new(
            vec![Complex::new(0.7, 0.2), Complex::new(-0.3, 0.5)],
            vec![Complex::new(0.1, -0.4), Complex::new(0.6, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn general_route_matches_closed_forms() {
        let m = model(2);
        let st = state();
        let cf = ClosedFormCurrent::new(m.clone(), st.clone()).unwrap();
        for sign in [PmSign::Plus, PmSign::Minus] {
            let set = FieldFunctionSet::maxwellian(m.clone(), &st, sign, Convention::SecularFree).unwrap();
            for &(z, t) in &[(0.1, 0.0), (0.37, 0.8), (0.9, 2.3)] {
                let a = set.current(z, t);
                let b = cf.current(z, t);
                for (x, y) in [(a.j3_1, b.j3_1), (a.j3_2, b.j3_2), (a.j4_1, b.j4_1), (a.j4_2, b.j4_2)] {
                    assert!((x - y).norm() < 1e-10 * (1.0 + y.norm()), "{x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn charge_ratio() {
        assert!((charge_ratio_estimate(1.44e4, 1.0).unwrap() - 120.0).abs() < 1e-12);
        assert_eq!(charge_ratio_estimate(4.0, 1.0).unwrap(), 2.0);
        assert!(charge_ratio_estimate(0.0, 1.0).is_err());
    }

    #[test]
    fn quantized_continuity() {
        let m = model(2);
        for &z in &[0.0, 0.25, 0.4] {
            let r = quantized_continuity_residual(&m, 6, z, 0.3, 1.0).unwrap();
            assert!(r < 1e-10, "{r}");
        }
    }
}
