//! Fermi-liquid extension of the SSH chain.
//!
//! The hopping `t₀`, the one-particle coupling `α₁` and a pairwise coupling
//! `α₂` enter through
//!
//! - `ε_k = 2t₀ cos ka`, `Δ_k = 4α₁u sin ka`, `R_k = √(ε_k² + 𝒬²Δ_k²)`,
//! - the occupation difference `σ_k = n_c − n_v` (−1 in the ground state),
//! - `ρ = 2α₁u𝒬/t₀` and the elliptic parameter `m = 1 − ρ²`.
//!
//! The self-consistency condition for the enhancement factor 𝒬 is
//! `𝒬 = 1 + Σ_{k,s} σ_k 2α₂u𝒬 sin²(ka)/R_k`, with `Σ_kΣ_s → (2Na/π)∫₀^{π/2a} dk`.
//! In the continuum it reads `𝒬 = 1 + σ(2Nα₂u𝒬/(πt₀))·J(m)` where
//! `J = (K − E)/m`. Dropping the leading 1 (strong coupling) leaves
//! `σ(2Nα₂u/(πt₀))·J(m) = 1`, which depends on 𝒬 only through ρ², so its
//! roots come in ± pairs; at `ρ = 1` it gives `𝒬 = σα₂N/(4α₁)`.
//!
//! The lattice constant `a` cancels from every continuum quantity.

pub mod elliptic;

use crate::error::{invalid, Error, Result};
use crate::quad::integrate_adaptive;
use elliptic::{cos2_integral, elliptic_e_param, elliptic_k_param, kme_over_m};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

fn default_one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SshParams {
    pub t0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    #[serde(default)]
    pub u: f64,
    #[serde(default, alias = "K_spring")]
    pub k_spring: f64,
    #[serde(alias = "N")]
    pub n_sites: usize,
    #[serde(default = "default_one", alias = "a")]
    pub a_lattice: f64,
    #[serde(default = "default_one", alias = "M_eff")]
    pub m_eff: f64,
}

impl SshParams {
    pub fn new(t0: f64, alpha1: f64, alpha2: f64, u: f64, n_sites: usize) -> Result<Self> {
        let p = Self {
            t0,
            alpha1,
            alpha2,
            u,
            k_spring: 0.0,
            n_sites,
            a_lattice: 1.0,
            m_eff: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_u(mut self, u: f64) -> Self {
        self.u = u;
        self
    }

    pub fn with_spring(mut self, k: f64) -> Self {
        self.k_spring = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.t0, self.alpha1, self.alpha2, self.u, self.k_spring, self.a_lattice, self.m_eff]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(invalid("SSH parameters must be finite"));
        }
        if self.t0 <= 0.0 {
            return Err(invalid(format!("t0 must be positive, got {}", self.t0)));
        }
        if self.a_lattice <= 0.0 {
            return Err(invalid(format!("a must be positive, got {}", self.a_lattice)));
        }
        if self.n_sites < 2 || self.n_sites % 2 != 0 {
            return Err(invalid(format!("N must be even and at least 2, got {}", self.n_sites)));
        }
        Ok(())
    }

    fn n(&self) -> f64 {
        self.n_sites as f64
    }

    pub fn epsilon(&self, k: f64) -> f64 {
        2.0 * self.t0 * (k * self.a_lattice).cos()
    }

    pub fn delta(&self, k: f64) -> f64 {
        4.0 * self.alpha1 * self.u * (k * self.a_lattice).sin()
    }

    /// `ρ = 2α₁u𝒬/t₀`.
    pub fn rho(&self, q: f64) -> f64 {
        2.0 * self.alpha1 * self.u * q / self.t0
    }

    /// Upper end of the reduced zone, `π/(2a)`.
    pub fn k_max(&self) -> f64 {
        FRAC_PI_2 / self.a_lattice
    }

    /// Uniform `n`-point grid on `[0, π/(2a)]`.
    pub fn k_grid(&self, n: usize) -> Vec<f64> {
        let h = self.k_max() / (n.max(2) - 1) as f64;
        (0..n.max(2)).map(|i| i as f64 * h).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Occupation {
    /// `n_v = 1`, `n_c = 0`.
    Ground,
    /// `n_v = 0`, `n_c = 1`.
    Inverted,
    Uniform { n_c: f64, n_v: f64 },
    /// Per-point occupations on the `k` grid.
    Explicit { n_c: Vec<f64>, n_v: Vec<f64> },
}

impl Occupation {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| (0.0..=1.0).contains(&x);
        match self {
            Self::Ground | Self::Inverted => Ok(()),
            Self::Uniform { n_c, n_v } if ok(*n_c) && ok(*n_v) => Ok(()),
            Self::Explicit { n_c, n_v } if n_c.len() == n_v.len() && n_c.len() >= 2 => {
                if n_c.iter().chain(n_v).all(|&x| ok(x)) {
                    Ok(())
                } else {
                    Err(invalid("occupations must lie in [0, 1]"))
                }
            }
            Self::Explicit { .. } => Err(invalid("explicit n_c and n_v need equal length of at least 2")),
            _ => Err(invalid("occupations must lie in [0, 1]")),
        }
    }

    /// `σ = n_c − n_v` when it does not depend on k.
    pub fn uniform_sigma(&self) -> Option<f64> {
        match self {
            Self::Ground => Some(-1.0),
            Self::Inverted => Some(1.0),
            Self::Uniform { n_c, n_v } => Some(n_c - n_v),
            Self::Explicit { .. } => None,
        }
    }

    /// `σ` at grid index `i`.
    pub fn sigma(&self, i: usize) -> f64 {
        match self {
            Self::Explicit { n_c, n_v } => n_c[i] - n_v[i],
            o => o.uniform_sigma().unwrap_or(0.0),
        }
    }

    pub fn explicit_len(&self) -> Option<usize> {
        match self {
            Self::Explicit { n_c, .. } => Some(n_c.len()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchSign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovCoeffs {
    pub alpha: f64,
    pub beta: f64,
    /// `αβ = ½𝒬Δ/R`.
    pub product: f64,
    /// `ε = 𝒬Δ = 0`: no mixing defined, `(α, β) = (1, 0)` by convention.
    pub degenerate: bool,
}

/// `β² = ½(1 ± ε/R)`, `α² = ½(1 ∓ ε/R)`, `αβ = ½𝒬Δ/R`.
///
/// When `𝒬Δ = 0` identically (u = 0 or 𝒬 = 0) the coefficients are
/// `(1, 0)`; the point `ε = 𝒬Δ = 0` is additionally flagged degenerate.
pub fn bogoliubov_coeffs(p: &SshParams, q: f64, k: f64, sign: BranchSign) -> BogoliubovCoeffs {
    let eps = p.epsilon(k);
    let qd = q * p.delta(k);
    let r = eps.hypot(qd);
    if p.u == 0.0 || q == 0.0 || r == 0.0 {
        return BogoliubovCoeffs {
            alpha: 1.0,
            beta: 0.0,
            product: 0.0,
            degenerate: r == 0.0,
        };
    }
    let s = match sign {
        BranchSign::Plus => 1.0,
        BranchSign::Minus => -1.0,
    };
    let b2 = 0.5 * (1.0 + s * eps / r);
    let a2 = 0.5 * (1.0 - s * eps / r);
    let product = 0.5 * qd / r;
    BogoliubovCoeffs {
        alpha: a2.sqrt(),
        beta: b2.sqrt() * product.signum(),
        product,
        degenerate: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Method {
    /// Adaptive quadrature of the k integral.
    QuadratureRoot,
    /// Closed form through `J = (K − E)/m`.
    Elliptic,
    /// Trapezoid sum over `n_k` points of `[0, π/2a]`.
    Discrete { n_k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapForm {
    /// `𝒬 = 1 + σ(…)𝒬J`.
    Full,
    /// `σ(…)J = 1`, the leading 1 dropped.
    StrongCoupling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `E_c = (𝒬²Δ² − ε²)/R`.
    NearEquilibrium,
    /// `E_c = R`.
    SshLike,
}

/// Which side of `|ρ| = 1` the solution lies on: a real elliptic modulus
/// `√(1 − ρ²)` inside, an imaginary one outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Inside,
    Exact,
    Outside,
}

impl Regime {
    pub fn of(rho: f64) -> Self {
        let d = rho.abs() - 1.0;
        if d.abs() <= 1e-12 {
            Self::Exact
        } else if d < 0.0 {
            Self::Inside
        } else {
            Self::Outside
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapOptions {
    pub method: Method,
    pub form: GapForm,
    pub branch: Branch,
    /// Scan range for 𝒬; default `±10·max(α₂N/|α₁|, 1)`.
    pub q_range: Option<(f64, f64)>,
    pub scan_points: usize,
    /// Points of the output k grid.
    pub n_k: usize,
    pub root_tol: f64,
}

impl Default for GapOptions {
    fn default() -> Self {
        Self {
            method: Method::Elliptic,
            form: GapForm::Full,
            branch: Branch::NearEquilibrium,
            q_range: None,
            scan_points: 2001,
            n_k: 65,
            root_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityFlags {
    pub cond1: bool,
    pub cond2: bool,
    pub cond3: bool,
}

impl StabilityFlags {
    pub fn stable(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSolution {
    pub q: f64,
    /// Every root found in the scan, ascending.
    pub roots: Vec<f64>,
    pub multiple_roots: bool,
    pub method: Method,
    pub form: GapForm,
    pub branch: Branch,
    /// `|F(𝒬)|` of the solved form.
    pub residual: f64,
    /// `|𝒬 − RHS(𝒬)|` of the full self-consistency condition.
    pub self_consistency: f64,
    pub rho: f64,
    /// `ρ²`.
    pub z_sq: f64,
    pub regime: Regime,
    pub k: Vec<f64>,
    pub coeffs: Vec<BogoliubovCoeffs>,
    pub e_c: Vec<f64>,
    pub e_v: Vec<f64>,
    pub stability: Vec<StabilityFlags>,
}

/// `(2N/π)∫₀^{π/2} 2α₂u𝒬 sin²x / R dx` by adaptive quadrature (σ excluded).
pub fn gap_integral_quadrature(p: &SshParams, q: f64) -> f64 {
    if q == 0.0 || p.u == 0.0 {
        return 0.0;
    }
    let rho2 = p.rho(q).powi(2);
    let f = |x: f64| {
        let s2 = x.sin().powi(2);
        let r = 2.0 * p.t0 * (x.cos().powi(2) + rho2 * s2).sqrt();
        2.0 * p.alpha2 * p.u * q * s2 / r
    };
    2.0 * p.n() / PI * integrate_adaptive(f, 0.0, FRAC_PI_2, 1e-15, 1e-14)
}

/// The same integral in closed form, `(2Nα₂u𝒬/(πt₀))·J(1 − ρ²)`.
pub fn gap_integral_elliptic(p: &SshParams, q: f64) -> f64 {
    if q == 0.0 || p.u == 0.0 {
        return 0.0;
    }
    let m = 1.0 - p.rho(q).powi(2);
    let j = kme_over_m(m).unwrap_or(f64::INFINITY);
    2.0 * p.n() * p.alpha2 * p.u * q / (PI * p.t0) * j
}

/// σ-weighted trapezoid sum over `n_k` points, the discrete counterpart.
pub fn gap_sum_discrete(p: &SshParams, occ: &Occupation, q: f64, n_k: usize) -> f64 {
    if q == 0.0 || p.u == 0.0 {
        return 0.0;
    }
    let ks = p.k_grid(n_k);
    let h = ks[1] - ks[0];
    let last = ks.len() - 1;
    let sum: f64 = ks
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let w = if i == 0 || i == last { 0.5 } else { 1.0 };
            let s2 = (k * p.a_lattice).sin().powi(2);
            let r = p.epsilon(k).hypot(q * p.delta(k));
            if r == 0.0 {
                return 0.0;
            }
            w * occ.sigma(i) * 2.0 * p.alpha2 * p.u * q * s2 / r
        })
        .sum();
    2.0 * p.n() * p.a_lattice / PI * h * sum
}

/// σ-weighted gap sum `Σ_{k,s} σ_k 2α₂u𝒬 sin²(ka)/R_k` by the given method.
pub fn gap_sum(p: &SshParams, occ: &Occupation, q: f64, method: Method) -> Result<f64> {
    match method {
        Method::Discrete { n_k } => {
            if n_k < 2 {
                return Err(invalid("discrete gap sum needs at least 2 k points"));
            }
            if let Some(len) = occ.explicit_len() {
                if len != n_k {
                    return Err(invalid(format!("explicit occupation has {len} points, method uses {n_k}")));
                }
            }
            Ok(gap_sum_discrete(p, occ, q, n_k))
        }
        m => {
            let sigma = occ
                .uniform_sigma()
                .ok_or_else(|| invalid("explicit occupations need the discrete method"))?;
            let s = if m == Method::Elliptic {
                gap_integral_elliptic(p, q)
            } else {
                gap_integral_quadrature(p, q)
            };
            Ok(sigma * s)
        }
    }
}

/// Right-hand side of the full condition, `1 + Σ_{k,s}(…)`.
pub fn gap_rhs(p: &SshParams, occ: &Occupation, q: f64, method: Method) -> Result<f64> {
    Ok(1.0 + gap_sum(p, occ, q, method)?)
}

/// Residual `F(𝒬)` of the chosen form; `NaN` where undefined (𝒬 = 0 in the
/// strong-coupling form).
pub fn gap_residual(p: &SshParams, occ: &Occupation, q: f64, method: Method, form: GapForm) -> Result<f64> {
    let s = gap_sum(p, occ, q, method)?;
    Ok(match form {
        GapForm::Full => q - 1.0 - s,
        GapForm::StrongCoupling if q == 0.0 => f64::NAN,
        GapForm::StrongCoupling => s / q - 1.0,
    })
}

fn default_range(p: &SshParams) -> (f64, f64) {
    let s = if p.alpha1 == 0.0 {
        1.0
    } else {
        (p.alpha2 * p.n() / p.alpha1).abs().max(1.0)
    };
    (-10.0 * s, 10.0 * s)
}

/// `(𝒬, F(𝒬))` over the scan grid, for diagnosing a missing root.
pub fn gap_residual_curve(p: &SshParams, occ: &Occupation, opts: &GapOptions) -> Result<Vec<(f64, f64)>> {
    p.validate()?;
    occ.validate()?;
    let (lo, hi) = opts.q_range.unwrap_or_else(|| default_range(p));
    if !(lo < hi) || opts.scan_points < 2 {
        return Err(invalid("scan range must satisfy lo < hi with at least 2 points"));
    }
    let n = opts.scan_points;
    (0..n)
        .map(|i| {
            let q = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            gap_residual(p, occ, q, opts.method, opts.form).map(|f| (q, f))
        })
        .collect()
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= tol * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All roots of the gap condition in the scan range, ascending.
pub fn gap_roots(p: &SshParams, occ: &Occupation, opts: &GapOptions) -> Result<Vec<f64>> {
    let curve = gap_residual_curve(p, occ, opts)?;
    let f = |q: f64| gap_residual(p, occ, q, opts.method, opts.form).unwrap_or(f64::NAN);
    let mut roots = Vec::new();
    for w in curve.windows(2) {
        let ((q0, f0), (q1, f1)) = (w[0], w[1]);
        if f0 == 0.0 {
            roots.push(q0);
            continue;
        }
        if !f0.is_finite() || !f1.is_finite() || (f0 < 0.0) == (f1 < 0.0) || f1 == 0.0 {
            continue;
        }
        let r = bisect(&f, q0, q1, f0, opts.root_tol);
        // A sign change across a pole is not a root.
        if f(r).abs() <= 1e-6 {
            roots.push(r);
        }
    }
    if let Some(&(q, f)) = curve.last() {
        if f == 0.0 {
            roots.push(q);
        }
    }
    Ok(roots)
}

/// Solve the gap condition, pick the root nearest 𝒬 = 1 and evaluate
/// coefficients, bands and stability on the k grid.
pub fn solve_gap(p: &SshParams, occ: &Occupation, opts: &GapOptions) -> Result<GapSolution> {
    let roots = gap_roots(p, occ, opts)?;
    let (lo, hi) = opts.q_range.unwrap_or_else(|| default_range(p));
    let q = *roots
        .iter()
        .min_by(|a, b| (*a - 1.0).abs().total_cmp(&(*b - 1.0).abs()))
        .ok_or(Error::NoRoot { lo, hi })?;
    let residual = gap_residual(p, occ, q, opts.method, opts.form)?.abs();
    let self_consistency = (q - gap_rhs(p, occ, q, opts.method)?).abs();
    let n_k = occ.explicit_len().unwrap_or(opts.n_k);
    let k = p.k_grid(n_k);
    let sign = match opts.branch {
        Branch::SshLike => BranchSign::Plus,
        Branch::NearEquilibrium => BranchSign::Minus,
    };
    let coeffs = k.iter().map(|&kk| bogoliubov_coeffs(p, q, kk, sign)).collect();
    let (e_c, e_v) = k.iter().map(|&kk| band_energies(p, q, kk, opts.branch)).unzip();
    let stability = k
        .iter()
        .enumerate()
        .map(|(i, &kk)| stability_classify(p, q, kk, opts.branch, occ.sigma(i)))
        .collect();
    let rho = p.rho(q);
    Ok(GapSolution {
        q,
        multiple_roots: roots.len() > 1,
        roots,
        method: opts.method,
        form: opts.form,
        branch: opts.branch,
        residual,
        self_consistency,
        rho,
        z_sq: rho * rho,
        regime: Regime::of(rho),
        k,
        coeffs,
        e_c,
        e_v,
        stability,
    })
}

/// `(E_c, E_v)` at k; `E_v = −E_c`.
pub fn band_energies(p: &SshParams, q: f64, k: f64, branch: Branch) -> (f64, f64) {
    let eps = p.epsilon(k);
    let qd = q * p.delta(k);
    let r = eps.hypot(qd);
    let ec = match branch {
        Branch::SshLike => r,
        Branch::NearEquilibrium if r == 0.0 => 0.0,
        Branch::NearEquilibrium => (qd * qd - eps * eps) / r,
    };
    (ec, -ec)
}

/// The three sufficient conditions for an energy minimum at k, given
/// `σ = n_c − n_v`:
///
/// - cond1: `ε(1 ∓ ε/R)` compared with `(𝒬Δ)²/R`, `−` for the SSH-like and
///   `+` for the near-equilibrium branch; `<` required when σ < 0, `>` when σ > 0.
/// - cond2 (both branches): `(ε²/R − 2(𝒬Δ)²/R)² − ε² + ¼(𝒬Δ)² > 0`.
/// - cond3: `σ(3(𝒬Δ)²/R ± 4ε²/R) > 0`, `+` for SSH-like, `−` for near-equilibrium.
pub fn stability_classify(p: &SshParams, q: f64, k: f64, branch: Branch, sigma: f64) -> StabilityFlags {
    let eps = p.epsilon(k);
    let qd = q * p.delta(k);
    let r = eps.hypot(qd);
    if r == 0.0 || sigma == 0.0 {
        return StabilityFlags {
            cond1: false,
            cond2: false,
            cond3: false,
        };
    }
    let s = match branch {
        Branch::SshLike => 1.0,
        Branch::NearEquilibrium => -1.0,
    };
    let lhs1 = eps * (1.0 - s * eps / r);
    let rhs1 = qd * qd / r;
    let cond1 = if sigma < 0.0 { lhs1 < rhs1 } else { lhs1 > rhs1 };
    let cond2 = (eps * eps / r - 2.0 * qd * qd / r).powi(2) - eps * eps + 0.25 * qd * qd > 0.0;
    let cond3 = sigma * (3.0 * qd * qd / r + s * 4.0 * eps * eps / r) > 0.0;
    StabilityFlags { cond1, cond2, cond3 }
}

/// Closed-form approximants of the strong-coupling condition around the
/// exact point `|ρ| = 1`, with σ folded into `α₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapApproximations {
    /// `(t₀/6u)√(25 − 32t₀α₁/(Nuα₂))`; `None` for a negative radicand.
    pub q_small: Option<f64>,
    /// `(1/3)√(25 − 32t₀α₁/(Nuα₂)) < 1`.
    pub small_valid: bool,
    /// `−(3α₂N/16)(1 ± √(1 + 80α₁t₀/(9Nuα₂)))`.
    pub q_large: Option<[f64; 2]>,
    /// Some large root has `2u|𝒬|/t₀ > 1`.
    pub large_valid: bool,
}

pub fn gap_approximations(p: &SshParams, sigma: f64) -> Result<GapApproximations> {
    p.validate()?;
    let a2 = sigma * p.alpha2;
    let n = p.n();
    if p.u == 0.0 || a2 == 0.0 {
        return Err(Error::Inapplicable("u and σα₂ must be nonzero".into()));
    }
    let rad = 25.0 - 32.0 * p.t0 * p.alpha1 / (n * p.u * a2);
    let q_small = (rad >= 0.0).then(|| p.t0 / (6.0 * p.u) * rad.sqrt());
    let small_valid = rad >= 0.0 && rad.sqrt() / 3.0 < 1.0;
    let rad2 = 1.0 + 80.0 * p.alpha1 * p.t0 / (9.0 * n * p.u * a2);
    let q_large = (rad2 >= 0.0).then(|| {
        let r = rad2.sqrt();
        let c = -3.0 * a2 * n / 16.0;
        [c * (1.0 + r), c * (1.0 - r)]
    });
    let large_valid = q_large.is_some_and(|qs| qs.iter().any(|q| 2.0 * p.u * q.abs() / p.t0 > 1.0));
    Ok(GapApproximations {
        q_small,
        small_valid,
        q_large,
        large_valid,
    })
}

/// `E₀(u)` by quadrature: `−(2Na/π)∫₀^{π/2a}(𝒬²Δ² − ε²)/R dk + 2NKu²`.
pub fn ground_energy_quadrature(p: &SshParams, q: f64) -> f64 {
    let rho2 = p.rho(q).powi(2);
    let f = |x: f64| {
        let (s2, c2) = (x.sin().powi(2), x.cos().powi(2));
        let d = (c2 + rho2 * s2).sqrt();
        if d == 0.0 {
            return 0.0;
        }
        2.0 * p.t0 * (rho2 * s2 - c2) / d
    };
    let n = p.n();
    -2.0 * n / PI * integrate_adaptive(f, 0.0, FRAC_PI_2, 1e-15, 1e-14) + 2.0 * n * p.k_spring * p.u * p.u
}

/// `E₀(u)` in closed form: `−(4Nt₀/π)[E(m) − 2B(m)] + 2NKu²`, `m = 1 − ρ²`,
/// `B = K − J`.
pub fn ground_energy_elliptic(p: &SshParams, q: f64) -> Result<f64> {
    let m = 1.0 - p.rho(q).powi(2);
    let e = elliptic_e_param(m)?;
    let b = cos2_integral(m)?;
    let n = p.n();
    Ok(-4.0 * n * p.t0 / PI * (e - 2.0 * b) + 2.0 * n * p.k_spring * p.u * p.u)
}

/// Small-ρ expansion:
/// `N[4t₀/π − (6/π)t₀ρ² ln(4/|ρ|) + 7t₀ρ²/π] + 2NKu²`.
pub fn ground_energy_small_z(p: &SshParams, q: f64) -> f64 {
    let rho = p.rho(q).abs();
    let log = if rho == 0.0 { 0.0 } else { rho * rho * (4.0 / rho).ln() };
    let n = p.n();
    n * (4.0 * p.t0 / PI - 6.0 / PI * p.t0 * log + 7.0 * p.t0 * rho * rho / PI) + 2.0 * n * p.k_spring * p.u * p.u
}

/// Elliptic form expressed through `K` and `E` of the modulus `√(1 − ρ²)`;
/// used as a cross-check of [`ground_energy_elliptic`] for `ρ² < 1`.
pub fn ground_energy_from_k_e(p: &SshParams, q: f64) -> Result<f64> {
    let rho2 = p.rho(q).powi(2);
    if rho2 >= 1.0 || rho2 == 0.0 {
        return ground_energy_elliptic(p, q);
    }
    let m = 1.0 - rho2;
    let (k, e) = (elliptic_k_param(m)?, elliptic_e_param(m)?);
    let n = p.n();
    let bracket = e * (1.0 + rho2) / (1.0 - rho2) - 2.0 * rho2 * k / (1.0 - rho2);
    Ok(4.0 * n * p.t0 / PI * bracket + 2.0 * n * p.k_spring * p.u * p.u)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateCurve {
    pub q: f64,
    pub u_grid: Vec<f64>,
    pub e0: Vec<f64>,
    pub e0_quadrature: Vec<f64>,
    pub e0_small_z: Vec<f64>,
    pub u0: f64,
    pub well_depth: f64,
    /// Interior minimum below `E₀(0)` found; otherwise `u0 = 0`.
    pub double_well: bool,
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..300 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `E₀` over a grid symmetric about 0 at fixed 𝒬, by all three routes,
/// with the minimum `u₀ > 0` refined by golden-section search.
pub fn ground_state_energy(p: &SshParams, q: f64, u_grid: &[f64]) -> Result<GroundStateCurve> {
    p.validate()?;
    let scale = u_grid.iter().fold(0.0_f64, |m, u| m.max(u.abs()));
    let n = u_grid.len();
    if n < 3 || (0..n).any(|i| (u_grid[i] + u_grid[n - 1 - i]).abs() > 1e-12 * scale.max(1.0)) {
        return Err(invalid("u grid must be symmetric about 0 with at least 3 points"));
    }
    let at = |u: f64| p.with_u(u);
    let e0 = u_grid
        .iter()
        .map(|&u| ground_energy_elliptic(&at(u), q))
        .collect::<Result<Vec<_>>>()?;
    let e0_quadrature = u_grid.iter().map(|&u| ground_energy_quadrature(&at(u), q)).collect();
    let e0_small_z = u_grid.iter().map(|&u| ground_energy_small_z(&at(u), q)).collect();

    let f = |u: f64| ground_energy_elliptic(&at(u), q).unwrap_or(f64::INFINITY);
    let e_zero = f(0.0);
    let pos: Vec<(f64, f64)> = u_grid.iter().zip(&e0).filter(|(u, _)| **u > 0.0).map(|(u, e)| (*u, *e)).collect();
    let mut u0 = 0.0;
    let mut double_well = false;
    if let Some(i) = (0..pos.len()).min_by(|&a, &b| pos[a].1.total_cmp(&pos[b].1)) {
        if i + 1 < pos.len() && pos[i].1 < e_zero {
            let lo = if i == 0 { 0.0 } else { pos[i - 1].0 };
            let u = golden_section(f, lo, pos[i + 1].0, 1e-12 * scale);
            if f(u) < e_zero {
                u0 = u;
                double_well = true;
            }
        }
    }
    Ok(GroundStateCurve {
        q,
        u_grid: u_grid.to_vec(),
        e0,
        e0_quadrature,
        e0_small_z,
        u0,
        well_depth: e_zero - f(u0),
        double_well,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SshParams {
        SshParams::new(1.0, 1.0, 0.5, 1.0, 2).unwrap()
    }

    #[test]
    fn no_pairing_gives_unit_factor() {
        let p = SshParams::new(1.0, 0.7, 0.0, 0.3, 4).unwrap();
        let s = solve_gap(&p, &Occupation::Ground, &GapOptions::default()).unwrap();
        assert!((s.q - 1.0).abs() < 1e-12);
        assert_eq!(s.roots.len(), 1);
    }

    #[test]
    fn exact_point_strong_coupling() {
        // 2α₁u𝒬/t₀ = 1 at u = 1 and 𝒬 = α₂N/(4α₁) = 0.25.
        let p = SshParams::new(1.0, 2.0, 0.5, 1.0, 2).unwrap();
        let p = p.with_u(1.0 / (2.0 * p.alpha1 * 0.25));
        let p = SshParams { alpha2: 2.0 * p.t0 / (p.n() * p.u), ..p };
        let opts = GapOptions {
            form: GapForm::StrongCoupling,
            ..Default::default()
        };
        let s = solve_gap(&p, &Occupation::Inverted, &opts).unwrap();
        let target = p.alpha2 * p.n() / (4.0 * p.alpha1);
        assert!(s.roots.iter().all(|r| (r.abs() - target).abs() < 1e-10), "{:?}", s.roots);
        assert_eq!(s.regime, Regime::Exact);
    }

    #[test]
    fn methods_agree() {
        let p = base().with_u(0.4);
        for form in [GapForm::Full, GapForm::StrongCoupling] {
            for occ in [Occupation::Ground, Occupation::Inverted] {
                let o = |method| GapOptions {
                    method,
                    form,
                    ..Default::default()
                };
                let a = gap_roots(&p, &occ, &o(Method::Elliptic)).unwrap();
                let b = gap_roots(&p, &occ, &o(Method::QuadratureRoot)).unwrap();
                assert_eq!(a.len(), b.len());
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn band_edges() {
        let p = base();
        assert_eq!(band_energies(&p, 1.3, 0.0, Branch::SshLike), (2.0, -2.0));
        assert_eq!(band_energies(&p, 1.3, 0.0, Branch::NearEquilibrium), (-2.0, 2.0));
    }

    #[test]
    fn energy_routes_agree_at_zero() {
        let p = base().with_u(0.0);
        let e = 4.0 * 2.0 / PI;
        assert!((ground_energy_elliptic(&p, 1.0).unwrap() - e).abs() < 1e-14);
        assert!((ground_energy_quadrature(&p, 1.0) - e).abs() < 1e-12);
        let p = base().with_u(0.2);
        let a = ground_energy_elliptic(&p, 0.8).unwrap();
        assert!((a - ground_energy_quadrature(&p, 0.8)).abs() < 1e-10);
        assert!((a - ground_energy_from_k_e(&p, 0.8).unwrap()).abs() < 1e-10);
    }
}
