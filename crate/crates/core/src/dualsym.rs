//! Dual (Rainich) and hyperbolic-dual transformations of `(E, H)` pairs and
//! their invariants.
//!
//! Field pairs are stored in symmetric units (Z₀ = 1), so E and H carry the
//! same unit and rotations can mix them directly. [`FieldPair::from_si`] and
//! [`FieldPair::to_si`] convert H ↔ Z₀H.
//!
//! All invariants derive from the unconjugated bilinear
//! `Z = E·E − H·H + 2i E·H`. A dual rotation by θ maps `Z ↦ Z e^{−2iθ}`,
//! a hyperbolic dual by ϑ maps `Z ↦ Z e^{2ϑ}`; K = |Z|² and
//! W = Re Z / Im Z follow.
//!
//! At θ = 45° the rotated invariants are `(I₁′, I₂′) = (2E·H, −(E²−H²))`
//! and at θ = 90° they are `(−I₁, −I₂)`: sign flips and swaps of the
//! θ = 0 pair, not the same values.

use crate::algebra::Complex;
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexVec3(pub [Complex; 3]);

impl ComplexVec3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn real(x: f64, y: f64, z: f64) -> Self {
        Self([Complex::new(x, 0.0), Complex::new(y, 0.0), Complex::new(z, 0.0)])
    }

    /// Unconjugated bilinear product Σ aₖbₖ.
    pub fn dot(&self, other: &Self) -> Complex {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    /// Hermitian product Σ āₖbₖ.
    pub fn cdot(&self, other: &Self) -> Complex {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.cdot(self).re.sqrt()
    }

    pub fn cross(&self, o: &Self) -> Self {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        Self([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self(self.0.map(|x| x * s))
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self(self.0.map(|x| x * s))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }
}

impl Add for ComplexVec3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for ComplexVec3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for ComplexVec3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl Mul<f64> for ComplexVec3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale_re(s)
    }
}

impl Mul<Complex> for ComplexVec3 {
    type Output = Self;
    fn mul(self, s: Complex) -> Self {
        self.scale(s)
    }
}

/// Ordered field pair `(E, H)` in symmetric units.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FieldPair {
    pub e: ComplexVec3,
    pub h: ComplexVec3,
}

impl FieldPair {
    pub fn new(e: ComplexVec3, h: ComplexVec3) -> Self {
        Self { e, h }
    }

    /// From SI fields (E in V/m, H in A/m) given Z₀.
    pub fn from_si(e: ComplexVec3, h_si: ComplexVec3, z0: f64) -> Self {
        Self { e, h: h_si * z0 }
    }

    /// Back to SI: returns `(E, H)` with H in A/m.
    pub fn to_si(&self, z0: f64) -> (ComplexVec3, ComplexVec3) {
        (self.e, self.h * (1.0 / z0))
    }

    /// `Z = E·E − H·H + 2i E·H` (unconjugated).
    pub fn bilinear_z(&self) -> Complex {
        self.e.dot(&self.e) - self.h.dot(&self.h) + Complex::new(0.0, 2.0) * self.e.dot(&self.h)
    }

    /// Norm of the combined 6-vector.
    pub fn norm6(&self) -> f64 {
        (self.e.cdot(&self.e).re + self.h.cdot(&self.h).re).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.e.is_finite() && self.h.is_finite()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.e - other.e).max_abs() <= tol && (self.h - other.h).max_abs() <= tol
    }
}

impl Add for FieldPair {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.e + o.e, self.h + o.h)
    }
}

impl Sub for FieldPair {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.e - o.e, self.h - o.h)
    }
}

impl Neg for FieldPair {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.e, -self.h)
    }
}

impl Mul<f64> for FieldPair {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.e * s, self.h * s)
    }
}

impl Mul<Complex> for FieldPair {
    type Output = Self;
    fn mul(self, s: Complex) -> Self {
        Self::new(self.e * s, self.h * s)
    }
}

/// Circular angle θ (reduced mod 2π) and hyperbolic rapidity ϑ.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DualAngle {
    pub theta: f64,
    pub vartheta: f64,
}

impl DualAngle {
    pub fn new(theta: f64, vartheta: f64) -> Self {
        Self {
            theta: theta.rem_euclid(TAU),
            vartheta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantSet {
    pub i1p: f64,
    pub i2p: f64,
    pub k_inv: f64,
    pub i1h: f64,
    pub i2h: f64,
    /// `None` when I₂″ = 0.
    pub w: Option<f64>,
}

/// `(E cosθ + H sinθ, H cosθ − E sinθ)`.
pub fn dual_rotate(f: &FieldPair, theta: f64) -> FieldPair {
    let (s, c) = theta.sin_cos();
    FieldPair::new(f.e * c + f.h * s, f.h * c - f.e * s)
}

/// `(E coshϑ + iH sinhϑ, −iE sinhϑ + H coshϑ)`.
pub fn hyperbolic_dual(f: &FieldPair, vartheta: f64) -> FieldPair {
    let ch = vartheta.cosh();
    let ish = Complex::new(0.0, vartheta.sinh());
    FieldPair::new(f.e * ch + f.h * ish, f.e * (-ish) + f.h * ch)
}

/// Invariants of `f` at dual angle θ and rapidity ϑ.
///
/// `I₁′ + iI₂′ = Z e^{−2iθ}`, `I₁″ + iI₂″ = Z e^{2ϑ}`, `K = |Z|²`,
/// `W = I₁″/I₂″`. For real fields `Re Z = E² − H²` and `Im Z = 2E·H`.
pub fn invariants(f: &FieldPair, theta: f64, vartheta: f64) -> InvariantSet {
    let z = f.bilinear_z();
    let zr = z * Complex::from_polar(1.0, -2.0 * theta);
    let zh = z * (2.0 * vartheta).exp();
    InvariantSet {
        i1p: zr.re,
        i2p: zr.im,
        k_inv: z.norm_sqr(),
        i1h: zh.re,
        i2h: zh.im,
        w: if zh.im == 0.0 { None } else { Some(zh.re / zh.im) },
    }
}

/// Magnitudes of a transformed pair read along the original orthogonal axes:
/// `|E″| = Re(E″·ê) + Im(E″·ĥ)` and `|H″| = Re(H″·ĥ) + Im(H″·ê)`, with
/// `ê`, `ĥ` the unit directions of the original real E and H.
pub fn orthogonal_axes_magnitudes(original: &FieldPair, transformed: &FieldPair) -> Result<(f64, f64)> {
    let ne = original.e.norm();
    let nh = original.h.norm();
    if ne == 0.0 || nh == 0.0 {
        return Err(invalid("orthogonal-axes reading needs nonzero E and H"));
    }
    let ehat = original.e * (1.0 / ne);
    let hhat = original.h * (1.0 / nh);
    let me = transformed.e.dot(&ehat).re + transformed.e.dot(&hhat).im;
    let mh = transformed.h.dot(&hhat).re + transformed.h.dot(&ehat).im;
    Ok((me, mh))
}

/// Field transformation under a boost with velocity `beta·c` along `dir`:
/// `E″ = γ(E + H×V/c)`, `H″ = γ(H − E×V/c)` for the components
/// perpendicular to V; parallel components are unchanged.
pub fn lorentz_boost_along(f: &FieldPair, beta: f64, dir: [f64; 3]) -> Result<FieldPair> {
    if !(beta.abs() < 1.0) {
        return Err(invalid(format!("|beta| must be < 1, got {beta}")));
    }
    let n = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
    if n == 0.0 {
        return Err(invalid("boost direction must be nonzero"));
    }
    let u = ComplexVec3::real(dir[0] / n, dir[1] / n, dir[2] / n);
    let v = u * beta;
    let gamma = 1.0 / (1.0 - beta * beta).sqrt();
    let split = |x: ComplexVec3| {
        let par = u * x.dot(&u);
        (par, x - par)
    };
    let (e_par, e_perp) = split(f.e);
    let (h_par, h_perp) = split(f.h);
    let e2 = e_par + (e_perp + f.h.cross(&v)) * gamma;
    let h2 = h_par + (h_perp - f.e.cross(&v)) * gamma;
    Ok(FieldPair::new(e2, h2))
}

/// Boost along ẑ.
pub fn lorentz_boost_fields(f: &FieldPair, beta: f64) -> Result<FieldPair> {
    lorentz_boost_along(f, beta, [0.0, 0.0, 1.0])
}

/// Rapidity of the relativistic sum of two collinear velocities.
pub fn rapidity_sum(beta1: f64, beta2: f64) -> f64 {
    beta1.atanh() + beta2.atanh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn sample() -> FieldPair {
        FieldPair::new(ComplexVec3::real(0.3, -1.2, 0.7), ComplexVec3::real(1.1, 0.4, -0.5))
    }

    #[test]
    fn quarter_turn_swaps_fields() {
        let f = sample();
        let r = dual_rotate(&f, FRAC_PI_2);
        assert!(r.approx_eq(&FieldPair::new(f.h, -f.e), 1e-15));
        assert!(dual_rotate(&f, PI).approx_eq(&-f, 1e-15));
        assert_eq!(dual_rotate(&f, 0.0), f);
    }

    #[test]
    fn invariants_at_zero_angle_are_the_classical_pair() {
        let f = sample();
        let inv = invariants(&f, 0.0, 0.0);
        let e2 = f.e.dot(&f.e).re;
        let h2 = f.h.dot(&f.h).re;
        let eh = f.e.dot(&f.h).re;
        assert!((inv.i1p - (e2 - h2)).abs() < 1e-14);
        assert!((inv.i2p - 2.0 * eh).abs() < 1e-14);
        assert!((inv.k_inv - ((e2 - h2).powi(2) + 4.0 * eh * eh)).abs() < 1e-13);
    }

    #[test]
    fn invariants_at_45_and_90_degrees_flip_and_swap() {
        let f = sample();
        let base = invariants(&f, 0.0, 0.0);
        let q = invariants(&f, FRAC_PI_4, 0.0);
        assert!((q.i1p - base.i2p).abs() < 1e-14);
        assert!((q.i2p + base.i1p).abs() < 1e-14);
        let h = invariants(&f, FRAC_PI_2, 0.0);
        assert!((h.i1p + base.i1p).abs() < 1e-14);
        assert!((h.i2p + base.i2p).abs() < 1e-14);
    }

    #[test]
    fn null_field_has_vanishing_invariants() {
        let f = FieldPair::new(ComplexVec3::real(1.0, 0.0, 0.0), ComplexVec3::real(0.0, 1.0, 0.0));
        for th in [0.0, 0.3, 1.7, 4.0] {
            let inv = invariants(&f, th, 0.0);
            assert!(inv.i1p.abs() < 1e-15 && inv.i2p.abs() < 1e-15 && inv.k_inv < 1e-15);
        }
    }

    #[test]
    fn boost_of_orthogonal_pair() {
        let f = FieldPair::new(ComplexVec3::real(1.0, 0.0, 0.0), ComplexVec3::real(0.0, 1.0, 0.0));
        let g = 1.0 / 0.75f64.sqrt();
        let b = lorentz_boost_fields(&f, 0.5).unwrap();
        // The cross-product form gives equal magnitudes 1.5γ for this null pair.
        assert!((b.e.norm() - 1.5 * g).abs() < 1e-14);
        assert!((b.h.norm() - 1.5 * g).abs() < 1e-14);
        // The hyperbolic dual read along the original axes gives (1.5γ, 0.5γ).
        let hd = hyperbolic_dual(&f, 0.5f64.atanh());
        let (me, mh) = orthogonal_axes_magnitudes(&f, &hd).unwrap();
        assert!((me - 1.5 * g).abs() < 1e-14);
        assert!((mh - 0.5 * g).abs() < 1e-14);
        assert!(lorentz_boost_fields(&f, 1.0).is_err());
        assert_eq!(lorentz_boost_fields(&f, 0.0).unwrap(), f);
    }

    #[test]
    fn si_round_trip() {
        let z0 = 376.730313668;
        let e = ComplexVec3::real(1.0, 2.0, 3.0);
        let h = ComplexVec3::real(0.01, 0.02, -0.03);
        let f = FieldPair::from_si(e, h, z0);
        let (e2, h2) = f.to_si(z0);
        assert!((e2 - e).max_abs() < 1e-15 && (h2 - h).max_abs() < 1e-15);
    }
}
