//! Complete elliptic integrals by the arithmetic-geometric mean.
//!
//! The public `elliptic_k`/`elliptic_e` take the modulus `k`; the `_param`
//! variants take the parameter `m = k²` and also accept `m < 0`.
//!
//! - `K(m) = ∫₀^{π/2} dx / √(1 − m sin²x)`
//! - `E(m) = ∫₀^{π/2} √(1 − m sin²x) dx`
//! - `J(m) = ∫₀^{π/2} sin²x / √(1 − m sin²x) dx = (K − E)/m`

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

struct Agm {
    k: f64,
    /// `J/K`, accumulated without the `K − E` cancellation.
    j_over_k: f64,
}

fn agm(m: f64) -> Agm {
    let b0 = (1.0 - m).sqrt();
    // a₁, b₁ and c₁ = (a₀ − b₀)/2 written to avoid cancellation;
    // d_n = c_n² / m.
    let mut a = 0.5 * (1.0 + b0);
    let mut b = b0.sqrt();
    let mut c = m / (2.0 * (1.0 + b0));
    let mut d = m / (4.0 * (1.0 + b0) * (1.0 + b0));
    let mut sum = 0.0;
    let mut pow = 1.0;
    for _ in 0..64 {
        sum += pow * d;
        if c.abs() <= f64::EPSILON * a * 1e-3 {
            break;
        }
        let a_next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = a_next;
        d *= c * c / (16.0 * a * a);
        c = c * c / (4.0 * a);
        pow *= 2.0;
    }
    Agm {
        k: FRAC_PI_2 / a,
        j_over_k: 0.5 + sum,
    }
}

fn check_param(m: f64, allow_one: bool) -> Result<()> {
    if !m.is_finite() || m > 1.0 || (m == 1.0 && !allow_one) {
        return Err(Error::OutOfDomain {
            name: "m",
            value: m,
            lo: f64::NEG_INFINITY,
            hi: 1.0,
        });
    }
    Ok(())
}

fn check_modulus(k: f64, allow_one: bool) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) || (k == 1.0 && !allow_one) {
        return Err(Error::OutOfDomain {
            name: "k",
            value: k,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(k * k)
}

/// `K(m)` for `m < 1`.
pub fn elliptic_k_param(m: f64) -> Result<f64> {
    check_param(m, false)?;
    Ok(agm(m).k)
}

/// `E(m)` for `m ≤ 1`.
pub fn elliptic_e_param(m: f64) -> Result<f64> {
    check_param(m, true)?;
    if m == 1.0 {
        return Ok(1.0);
    }
    let g = agm(m);
    Ok(g.k * (1.0 - m * g.j_over_k))
}

/// `J(m) = (K − E)/m`, finite at `m = 0` where it equals π/4.
pub fn kme_over_m(m: f64) -> Result<f64> {
    check_param(m, false)?;
    let g = agm(m);
    Ok(g.k * g.j_over_k)
}

/// `B(m) = ∫₀^{π/2} cos²x / √(1 − m sin²x) dx = K − J`, with `B(1) = 1`.
pub fn cos2_integral(m: f64) -> Result<f64> {
    check_param(m, true)?;
    if m == 1.0 {
        return Ok(1.0);
    }
    let g = agm(m);
    Ok(g.k * (1.0 - g.j_over_k))
}

/// `K` of modulus `k ∈ [0, 1)`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    elliptic_k_param(check_modulus(k, false)?)
}

/// `E` of modulus `k ∈ [0, 1]`.
pub fn elliptic_e(k: f64) -> Result<f64> {
    elliptic_e_param(check_modulus(k, true)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trapz(f: impl Fn(f64) -> f64) -> f64 {
        // Even periodic integrand on [0, π/2]: the trapezoid rule is spectral.
        let n = 4000;
        let h = FRAC_PI_2 / n as f64;
        (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * f(i as f64 * h)
            })
            .sum::<f64>()
            * h
    }

    #[test]
    fn against_trapezoid() {
        for &m in &[-3.0, -0.5, 0.0, 0.1, 0.5, 0.9, 0.99] {
            let k = trapz(|x| 1.0 / (1.0 - m * x.sin().powi(2)).sqrt());
            let e = trapz(|x| (1.0 - m * x.sin().powi(2)).sqrt());
            let j = trapz(|x| x.sin().powi(2) / (1.0 - m * x.sin().powi(2)).sqrt());
            assert!((elliptic_k_param(m).unwrap() - k).abs() < 1e-13 * k, "K {m}");
            assert!((elliptic_e_param(m).unwrap() - e).abs() < 1e-13 * e, "E {m}");
            assert!((kme_over_m(m).unwrap() - j).abs() < 1e-13 * j, "J {m}");
            assert!((cos2_integral(m).unwrap() - (k - j)).abs() < 1e-12, "B {m}");
        }
    }

    #[test]
    fn domain() {
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
        assert_eq!(elliptic_e(1.0).unwrap(), 1.0);
        assert!((kme_over_m(0.0).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-16);
    }
}
