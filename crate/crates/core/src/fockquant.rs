//! Quantization of cavity modes on a truncated number basis.
//!
//! Three schemes:
//! - time-local: `â(t) = â e^{−iωt}` with Planck constant ħ,
//! - space-local: `â″(z) = â e^{−ikz}` with the spatial constant λ₀,
//! - space-time-local: `q̂(z,t) = q̂(z)⊗q̂(t)`, `p̂(z,t) = p̂(z)⊗p̂(t)` on a
//!   product of a z-factor and a t-factor space, with `g = −ħλ₀`.
//!
//! A truncation to `d` number states breaks `[â, â†] = 1` in the top state,
//! so identities are checked on the safe block: states `|0⟩..|d−2⟩` of a
//! single factor, and pairs of such states for a product space.
//! Multi-mode operators are kept per mode, never as one tensor product.

use crate::algebra::Complex;
use crate::cavity::CavityModel;
use crate::error::{invalid, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub type CMat = DMatrix<Complex>;

const I: Complex = Complex::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpLabel {
    Annihilate,
    Create,
    Hamiltonian,
    GFactor,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub dim: usize,
    pub entries: CMat,
    pub label: OpLabel,
}

impl FockOperator {
    pub fn new(entries: CMat, label: OpLabel) -> Self {
        Self {
            dim: entries.nrows(),
            entries,
            label,
        }
    }

    pub fn adjoint(&self) -> Self {
        let label = match self.label {
            OpLabel::Annihilate => OpLabel::Create,
            OpLabel::Create => OpLabel::Annihilate,
            l => l,
        };
        Self::new(self.entries.adjoint(), label)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        hermiticity_defect(&self.entries) <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    TimeLocal,
    SpaceLocal,
    SpacetimeLocal,
}

/// Scheme with its quantization constant: ħ, λ₀, or `g = −ħλ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationScheme {
    pub kind: SchemeKind,
    pub constant: f64,
}

impl QuantizationScheme {
    pub fn for_model(kind: SchemeKind, model: &CavityModel) -> Self {
        let k = &model.constants;
        let constant = match kind {
            SchemeKind::TimeLocal => k.hbar,
            SchemeKind::SpaceLocal => k.lambda0,
            SchemeKind::SpacetimeLocal => -k.hbar * k.lambda0,
        };
        Self { kind, constant }
    }
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_defect(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// States `|0⟩..|d−2⟩`.
pub fn safe_indices(dim: usize) -> Vec<usize> {
    (0..dim.saturating_sub(1)).collect()
}

/// Product states `|i⟩⊗|j⟩` with `i, j ≤ d−2`, as indices `i·d + j`.
pub fn tensor_safe_indices(dim: usize) -> Vec<usize> {
    let s = safe_indices(dim);
    s.iter().flat_map(|i| s.iter().map(move |j| i * dim + j)).collect()
}

pub fn restrict(m: &CMat, idx: &[usize]) -> CMat {
    CMat::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// Max entrywise deviation of `m` from `c·1` on the index set.
pub fn deviation_from_scalar(m: &CMat, c: Complex, idx: &[usize]) -> f64 {
    let r = restrict(m, idx);
    let n = r.nrows();
    max_abs(&(r - CMat::identity(n, n) * c))
}

/// `(â, â†)` with `â|n⟩ = √n|n−1⟩`.
pub fn make_ladder(dim: usize) -> Result<(FockOperator, FockOperator)> {
    if dim < 2 {
        return Err(invalid(format!("Fock dimension must be at least 2, got {dim}")));
    }
    let mut a = CMat::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex::new((n as f64).sqrt(), 0.0);
    }
    let ad = a.adjoint();
    Ok((FockOperator::new(a, OpLabel::Annihilate), FockOperator::new(ad, OpLabel::Create)))
}

pub fn number_operator(dim: usize) -> Result<CMat> {
    let (a, ad) = make_ladder(dim)?;
    Ok(&ad.entries * &a.entries)
}

fn phased(dim: usize, phase: f64) -> Result<(FockOperator, FockOperator)> {
    let (a, ad) = make_ladder(dim)?;
    let p = Complex::from_polar(1.0, -phase);
    Ok((
        FockOperator::new(a.entries * p, OpLabel::Annihilate),
        FockOperator::new(ad.entries * p.conj(), OpLabel::Create),
    ))
}

/// Per mode: `â_α(t) = â e^{−iω_α t}`, `â†_α(t) = â† e^{iω_α t}`.
pub fn time_local_operators(model: &CavityModel, dim: usize, t: f64) -> Result<Vec<(FockOperator, FockOperator)>> {
    model.modes().map(|a| phased(dim, model.omega(a) * t)).collect()
}

/// Per mode: `â″_α(z) = â e^{−ik_α z}`, `â″†_α(z) = â† e^{ik_α z}`.
pub fn space_local_operators(model: &CavityModel, dim: usize, z: f64) -> Result<Vec<(FockOperator, FockOperator)>> {
    model.check_z(z)?;
    model.modes().map(|a| phased(dim, model.wavenumber(a) * z)).collect()
}

/// `ℋ_α = ħω_α(â†â + ½)`.
pub fn time_local_hamiltonian(model: &CavityModel, alpha: usize, dim: usize) -> Result<FockOperator> {
    let hw = model.constants.hbar * model.omega(alpha);
    let n = number_operator(dim)?;
    Ok(FockOperator::new(
        (n + CMat::identity(dim, dim) * Complex::new(0.5, 0.0)) * Complex::new(hw, 0.0),
        OpLabel::Hamiltonian,
    ))
}

/// `Ĝ_α = λ₀ω_α(â″†â″ + ½)`.
pub fn space_local_hamiltonian(model: &CavityModel, alpha: usize, dim: usize) -> Result<FockOperator> {
    let lw = model.constants.lambda0 * model.omega(alpha);
    let n = number_operator(dim)?;
    Ok(FockOperator::new(
        (n + CMat::identity(dim, dim) * Complex::new(0.5, 0.0)) * Complex::new(lw, 0.0),
        OpLabel::Hamiltonian,
    ))
}

/// Canonical pair `q̂ = √(κ/2mω)(â† + â)`, `p̂ = i√(κmω/2)(â† − â)` for
/// ladder operators `(a, a†)` and constant κ (ħ or λ₀).
pub fn canonical_pair(a: &CMat, ad: &CMat, kappa: f64, m: f64, w: f64) -> (CMat, CMat) {
    let q = (ad + a) * Complex::new((kappa / (2.0 * m * w)).sqrt(), 0.0);
    let p = (ad - a) * (I * (kappa * m * w / 2.0).sqrt());
    (q, p)
}

/// `p̂²/2m + mω²q̂²/2` built from the canonical pair at t = 0.
pub fn hamiltonian_from_canonical(model: &CavityModel, alpha: usize, dim: usize) -> Result<FockOperator> {
    let (a, ad) = make_ladder(dim)?;
    let (m, w) = (model.mass(alpha), model.omega(alpha));
    let (q, p) = canonical_pair(&a.entries, &ad.entries, model.constants.hbar, m, w);
    let h = &p * &p * Complex::new(0.5 / m, 0.0) + &q * &q * Complex::new(0.5 * m * w * w, 0.0);
    Ok(FockOperator::new(h, OpLabel::Hamiltonian))
}

/// Ascending eigenvalues of a Hermitian operator.
pub fn hermitian_spectrum(m: &CMat) -> Vec<f64> {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Relative deviation, on the safe block, between the central finite
/// difference of `â(t) = â e^{−iωt}` and `(1/iħ)[â(t), ℋ]`.
pub fn heisenberg_check(model: &CavityModel, alpha: usize, dim: usize, t: f64) -> Result<f64> {
    let w = model.omega(alpha);
    let h = 1e-4 / w;
    let hbar = model.constants.hbar;
    let at = |s: f64| phased(dim, w * s).map(|p| p.0.entries);
    let fd = (at(t + h)? - at(t - h)?) * Complex::new(0.5 / h, 0.0);
    let ham = time_local_hamiltonian(model, alpha, dim)?;
    let heis = commutator(&at(t)?, &ham.entries) * (Complex::new(1.0, 0.0) / (I * hbar));
    let idx = safe_indices(dim);
    let diff = max_abs(&restrict(&(fd - &heis), &idx));
    let scale = max_abs(&restrict(&heis, &idx));
    Ok(if scale == 0.0 { diff } else { diff / scale })
}

/// Outcome of testing the real trigonometric ansatz `â(t) = â cos ωt`
/// against the exponential one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigAnsatzReport {
    /// Max over sample times of `‖d/dt(â†+â) − iω(â†−â)‖` with `â e^{−iωt}`.
    pub exponential_residual: f64,
    /// The same with `â cos ωt`.
    pub trigonometric_residual: f64,
    /// `(â†−â)⁻¹(â†+â)` is constant in t while `tan ωt` is not: spread of
    /// `tan ωt` over the sample times.
    pub tan_spread: f64,
    /// Entrywise spread of `(â†−â)⁻¹(â†+â)` over the sample times (0 when
    /// the inverse exists; `None` for odd `dim`, where `â†−â` is singular).
    pub lhs_spread: Option<f64>,
    pub rejected: bool,
}

/// Both field operators are fixed by Maxwell's equations only if
/// `d/dt(â† + â) = iω(â† − â)`; the exponential form satisfies it, the
/// trigonometric form does not.
pub fn trig_ansatz_report(dim: usize, omega: f64, times: &[f64]) -> Result<TrigAnsatzReport> {
    let (a, ad) = make_ladder(dim)?;
    let (a, ad) = (a.entries, ad.entries);
    let mut exp_res: f64 = 0.0;
    let mut trig_res: f64 = 0.0;
    let mut tans = Vec::new();
    let mut lhs: Vec<CMat> = Vec::new();
    for &t in times {
        let ph = Complex::from_polar(1.0, -omega * t);
        let (ae, ade) = (&a * ph, &ad * ph.conj());
        let dae = &a * (ph * (-I * omega));
        let dade = &ad * (ph.conj() * (I * omega));
        let r = (&dade + &dae) - (&ade - &ae) * (I * omega);
        exp_res = exp_res.max(max_abs(&r));
        let (c, s) = ((omega * t).cos(), (omega * t).sin());
        let (at, adt) = (&a * Complex::new(c, 0.0), &ad * Complex::new(c, 0.0));
        let d = (&ad + &a) * Complex::new(-omega * s, 0.0);
        let r = d - (&adt - &at) * (I * omega);
        trig_res = trig_res.max(max_abs(&r));
        tans.push((omega * t).tan());
        if let Some(inv) = (&ad - &a).try_inverse() {
            lhs.push(inv * (&ad + &a));
        }
    }
    let spread = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let lhs_spread = if lhs.len() == times.len() && !lhs.is_empty() {
        Some(lhs.iter().map(|m| max_abs(&(m - &lhs[0]))).fold(0.0, f64::max))
    } else {
        None
    };
    let tan_spread = spread(&tans);
    Ok(TrigAnsatzReport {
        exponential_residual: exp_res,
        trigonometric_residual: trig_res,
        tan_spread,
        lhs_spread,
        rejected: trig_res > 1e-8 && exp_res <= 1e-8 && tan_spread > 0.0,
    })
}

/// Per-mode operator-valued field: the total field is `Σ_α X_α`, each
/// `X_α` acting on mode α's factor space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorField {
    pub scheme: SchemeKind,
    pub mode_terms: Vec<CMat>,
}

impl OperatorField {
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.mode_terms.iter().all(|m| hermiticity_defect(m) <= tol)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.mode_terms.iter().map(hermiticity_defect).fold(0.0, f64::max)
    }

    /// `⟨0|X|0⟩` summed over modes.
    pub fn vacuum_expectation(&self) -> Complex {
        self.mode_terms.iter().map(|m| m[(0, 0)]).sum()
    }

    /// `⟨0|X²|0⟩` of the mode sum, including cross terms
    /// `⟨X_α⟩⟨X_β⟩` for α ≠ β.
    pub fn vacuum_second_moment(&self) -> Complex {
        let means: Vec<Complex> = self.mode_terms.iter().map(|m| m[(0, 0)]).collect();
        let mut s: Complex = self.mode_terms.iter().map(|m| (m * m)[(0, 0)]).sum();
        for (i, a) in means.iter().enumerate() {
            for (j, b) in means.iter().enumerate() {
                if i != j {
                    s += a * b;
                }
            }
        }
        s
    }
}

/// Time-local fields:
/// `Ê = Σ √(ħω/(Vε₀)) (â†+â) sin kz`, `Ĥ = i Σ √(ħω/(Vμ₀)) (â†−â) cos kz`.
pub fn time_local_fields(model: &CavityModel, dim: usize, z: f64, t: f64) -> Result<(OperatorField, OperatorField)> {
    model.check_z(z)?;
    let k = &model.constants;
    let ops = time_local_operators(model, dim, t)?;
    let mut e = Vec::new();
    let mut h = Vec::new();
    for (alpha, (a, ad)) in model.modes().zip(ops) {
        let w = model.omega(alpha);
        let kz = model.wavenumber(alpha) * z;
        let ce = (k.hbar * w / (model.volume * k.eps0)).sqrt() * kz.sin();
        let ch = (k.hbar * w / (model.volume * k.mu0)).sqrt() * kz.cos();
        e.push((&ad.entries + &a.entries) * Complex::new(ce, 0.0));
        h.push((&ad.entries - &a.entries) * (I * ch));
    }
    Ok((
        OperatorField {
            scheme: SchemeKind::TimeLocal,
            mode_terms: e,
        },
        OperatorField {
            scheme: SchemeKind::TimeLocal,
            mode_terms: h,
        },
    ))
}

/// Space-local fields with `T = L/c`:
/// `Ê = i Σ √(λ₀ω/(Tε₀)) sin ωt (â″†−â″)`, `Ĥ = −Σ √(λ₀ω/(Tμ₀)) cos ωt (â″†+â″)`.
pub fn space_local_fields(model: &CavityModel, dim: usize, z: f64, t: f64) -> Result<(OperatorField, OperatorField)> {
    let k = &model.constants;
    let tp = model.period();
    let ops = space_local_operators(model, dim, z)?;
    let mut e = Vec::new();
    let mut h = Vec::new();
    for (alpha, (a, ad)) in model.modes().zip(ops) {
        let w = model.omega(alpha);
        let ce = (k.lambda0 * w / (tp * k.eps0)).sqrt() * (w * t).sin();
        let ch = (k.lambda0 * w / (tp * k.mu0)).sqrt() * (w * t).cos();
        e.push((&ad.entries - &a.entries) * (I * ce));
        h.push((&ad.entries + &a.entries) * Complex::new(-ch, 0.0));
    }
    Ok((
        OperatorField {
            scheme: SchemeKind::SpaceLocal,
            mode_terms: e,
        },
        OperatorField {
            scheme: SchemeKind::SpaceLocal,
            mode_terms: h,
        },
    ))
}

/// Canonical operators of one mode in the space-time scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeMode {
    pub q_z: CMat,
    pub p_z: CMat,
    pub q_t: CMat,
    pub p_t: CMat,
    /// `Q = q(z)⊗q(t)`.
    pub q: CMat,
    /// `P = p(z)⊗p(t)`.
    pub p: CMat,
    /// `â(z,t) = (mωQ + iP)/√(2ħλ₀mω)`.
    pub a: CMat,
    pub ad: CMat,
}

fn spacetime_mode(model: &CavityModel, alpha: usize, dim: usize, z: f64, t: f64) -> Result<SpacetimeMode> {
    let k = &model.constants;
    let (m, w) = (model.mass(alpha), model.omega(alpha));
    let (az, adz) = phased(dim, model.wavenumber(alpha) * z)?;
    let (at, adt) = phased(dim, w * t)?;
    let (q_z, p_z) = canonical_pair(&az.entries, &adz.entries, k.lambda0, m, w);
    let (q_t, p_t) = canonical_pair(&at.entries, &adt.entries, k.hbar, m, w);
    let q = kron(&q_z, &q_t);
    let p = kron(&p_z, &p_t);
    let norm = 1.0 / (2.0 * k.hbar * k.lambda0 * m * w).sqrt();
    let a = (&q * Complex::new(m * w, 0.0) + &p * I) * Complex::new(norm, 0.0);
    let ad = a.adjoint();
    Ok(SpacetimeMode {
        q_z,
        p_z,
        q_t,
        p_t,
        q,
        p,
        a,
        ad,
    })
}

/// The four orderings `ĝ⁽ʲ⁾` for modes α, β (operators on the product space):
///
/// - `ĝ⁽¹⁾ = [p_α(z), q_β(z)] ⊗ [p_α(t), q_β(t)]`
/// - `ĝ⁽²⁾ = −[p_α(z), q_β(z)] ⊗ [q_β(t), p_α(t)]`
/// - `ĝ⁽³⁾ = [p_β(z), q_α(z)] ⊗ [p_β(t), q_α(t)]`
/// - `ĝ⁽⁴⁾ = −[q_α(z), p_β(z)] ⊗ [p_β(t), q_α(t)]`
///
/// Operators of different modes commute, so all four vanish for α ≠ β.
pub fn g_orderings(alpha_mode: &SpacetimeMode, beta_mode: Option<&SpacetimeMode>) -> [CMat; 4] {
    let a = alpha_mode;
    let n = a.q.nrows();
    let Some(b) = beta_mode else {
        return std::array::from_fn(|_| CMat::zeros(n, n));
    };
    let neg = Complex::new(-1.0, 0.0);
    [
        kron(&commutator(&a.p_z, &b.q_z), &commutator(&a.p_t, &b.q_t)),
        kron(&commutator(&a.p_z, &b.q_z), &commutator(&b.q_t, &a.p_t)) * neg,
        kron(&commutator(&b.p_z, &a.q_z), &commutator(&b.p_t, &a.q_t)),
        kron(&commutator(&a.q_z, &b.p_z), &commutator(&b.p_t, &a.q_t)) * neg,
    ]
}

/// Checks of the space-time scheme for one mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GReport {
    pub mode: usize,
    pub dim: usize,
    /// Safe block is 1×1 (dim = 2): every check is vacuous.
    pub degenerate: bool,
    /// Relative deviation of each `ĝ⁽ʲ⁾` from `−ħλ₀·1` on the safe block.
    pub g_deviation: [f64; 4],
    /// Relative deviation of `¼Σĝ⁽ʲ⁾` from `−ħλ₀·1` on the safe block.
    pub g_sym_deviation: f64,
    /// `[â, â†]` evaluated with the symmetrized `ĝ` in place of `[P, Q]`,
    /// i.e. `iĝ/(ħλ₀)`: deviation from `−i·1` (the stated value).
    pub commutator_stated_deviation: f64,
    /// Deviation of the same quantity from the conventional `+1`.
    pub commutator_conventional_deviation: f64,
    /// Deviation of the raw matrix commutator `[â, â†]` from `−i·1`; nonzero
    /// because `[P, Q]` of the tensor-product operators is not a scalar.
    pub commutator_raw_deviation: f64,
}

/// Per-mode `(â(z,t), â†(z,t))` of the space-time scheme plus the ĝ report.
pub fn spacetime_local_operators(
    model: &CavityModel,
    dim: usize,
    z: f64,
    t: f64,
) -> Result<(Vec<SpacetimeMode>, Vec<GReport>)> {
    if dim < 2 {
        return Err(invalid(format!("space-time factor dimension must be at least 2, got {dim}")));
    }
    model.check_z(z)?;
    let k = &model.constants;
    let g = -k.hbar * k.lambda0;
    let idx = tensor_safe_indices(dim);
    let mut modes = Vec::new();
    let mut reports = Vec::new();
    for alpha in model.modes() {
        let md = spacetime_mode(model, alpha, dim, z, t)?;
        let gs = g_orderings(&md, Some(&md));
        let dev: [f64; 4] = std::array::from_fn(|j| deviation_from_scalar(&gs[j], Complex::new(g, 0.0), &idx) / g.abs());
        let gsym = (&gs[0] + &gs[1] + &gs[2] + &gs[3]) * Complex::new(0.25, 0.0);
        let gsym_dev = deviation_from_scalar(&gsym, Complex::new(g, 0.0), &idx) / g.abs();
        let stated = &gsym * (I / (k.hbar * k.lambda0));
        let raw = commutator(&md.a, &md.ad);
        reports.push(GReport {
            mode: alpha,
            dim,
            degenerate: dim == 2,
            g_deviation: dev,
            g_sym_deviation: gsym_dev,
            commutator_stated_deviation: deviation_from_scalar(&stated, -I, &idx),
            commutator_conventional_deviation: deviation_from_scalar(&stated, Complex::new(1.0, 0.0), &idx),
            commutator_raw_deviation: deviation_from_scalar(&raw, -I, &idx),
        });
        modes.push(md);
    }
    Ok((modes, reports))
}

/// Space-time fields: `Ê = Σ A″_E Q`, `Ĥ = Σ (A″_H/(mω)) P` with
/// `A″_E = √(2ω²m/(ε₀VT))`, `A″_H = √(2ω²m/(μ₀VT))`.
pub fn spacetime_local_fields(model: &CavityModel, dim: usize, z: f64, t: f64) -> Result<(OperatorField, OperatorField)> {
    let (modes, _) = spacetime_local_operators(model, dim, z, t)?;
    let k = &model.constants;
    let tp = model.period();
    let mut e = Vec::new();
    let mut h = Vec::new();
    for (alpha, md) in model.modes().zip(modes) {
        let (m, w) = (model.mass(alpha), model.omega(alpha));
        let ae = (2.0 * w * w * m / (k.eps0 * model.volume * tp)).sqrt();
        let ah = (2.0 * w * w * m / (k.mu0 * model.volume * tp)).sqrt();
        e.push(&md.q * Complex::new(ae, 0.0));
        h.push(&md.p * Complex::new(ah / (m * w), 0.0));
    }
    Ok((
        OperatorField {
            scheme: SchemeKind::SpacetimeLocal,
            mode_terms: e,
        },
        OperatorField {
            scheme: SchemeKind::SpacetimeLocal,
            mode_terms: h,
        },
    ))
}

/// Field operators `(Ê, Ĥ)` of a scheme at `(z, t)`.
pub fn assemble_field_operators(
    model: &CavityModel,
    scheme: SchemeKind,
    dim: usize,
    z: f64,
    t: f64,
) -> Result<(OperatorField, OperatorField)> {
    match scheme {
        SchemeKind::TimeLocal => time_local_fields(model, dim, z, t),
        SchemeKind::SpaceLocal => space_local_fields(model, dim, z, t),
        SchemeKind::SpacetimeLocal => spacetime_local_fields(model, dim, z, t),
    }
}

/// JSON-serializable operator dump with row-major `[re, im]` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDump {
    pub dim: usize,
    pub scheme: SchemeKind,
    pub mode: usize,
    pub label: String,
    pub entries: Vec<[f64; 2]>,
}

impl OperatorDump {
    pub fn new(m: &CMat, scheme: SchemeKind, mode: usize, label: &str) -> Self {
        let mut entries = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let v = m[(r, c)];
                entries.push([v.re, v.im]);
            }
        }
        Self {
            dim: m.nrows(),
            scheme,
            mode,
            label: label.to_string(),
            entries,
        }
    }

    pub fn to_matrix(&self) -> CMat {
        CMat::from_fn(self.dim, self.dim, |r, c| {
            let [re, im] = self.entries[r * self.dim + c];
            Complex::new(re, im)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;

    fn model(n: usize) -> CavityModel {
        CavityModel::uniform(1.0, 1.0, n, 1.0, PhysicalConstants::natural()).unwrap()
    }

    #[test]
    fn two_level_ladder() {
        let (a, ad) = make_ladder(2).unwrap();
        assert_eq!(a.entries, CMat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0].map(|x| Complex::new(x, 0.0))));
        assert_eq!(ad.label, OpLabel::Create);
        assert!(make_ladder(1).is_err());
    }

    #[test]
    fn truncated_commutator_corner() {
        let (a, ad) = make_ladder(8).unwrap();
        let c = commutator(&a.entries, &ad.entries);
        for n in 0..7 {
            assert!((c[(n, n)] - Complex::new(1.0, 0.0)).norm() < 1e-14);
        }
        assert!((c[(7, 7)] - Complex::new(-7.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn vacuum_moments_of_time_local_field() {
        let m = model(3);
        let z = 0.31;
        let (e, h) = time_local_fields(&m, 6, z, 0.4).unwrap();
        assert!(e.vacuum_expectation().norm() < 1e-15);
        assert!(e.is_hermitian(1e-14) && h.is_hermitian(1e-14));
        let expected: f64 = m
            .modes()
            .map(|a| m.omega(a) / m.volume * (m.wavenumber(a) * z).sin().powi(2))
            .sum();
        assert!((e.vacuum_second_moment().re - expected).abs() < 1e-13);
    }

    #[test]
    fn dump_round_trip() {
        let (a, _) = make_ladder(4).unwrap();
        let d = OperatorDump::new(&a.entries, SchemeKind::TimeLocal, 1, "a");
        assert_eq!(d.entries[1], [1.0, 0.0]);
        assert_eq!(d.to_matrix(), a.entries);
    }
}
