//! Spin-wave resonance in a ferroelectric chain: mode amplitudes and the
//! quadratic dispersion `ν_n = ν₀ − 𝔄n²`.
//!
//! Amplitudes are in arbitrary units; only ratios and line shapes carry meaning.

use crate::algebra::Complex;
use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{Read, Write};

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceParams {
    pub gamma_E: f64,
    pub S: f64,
    pub tau: f64,
    pub E1: f64,
    pub nu0: f64,
    /// Splitting parameter 𝔄 in Hz.
    pub A_param: f64,
    pub L_chain: f64,
    pub a_lattice: f64,
    pub J_E: f64,
}

impl ResonanceParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.A_param > 0.0) {
            return Err(invalid(format!("splitting parameter must be positive, got {}", self.A_param)));
        }
        if !(self.tau > 0.0) {
            return Err(invalid(format!("tau must be positive, got {}", self.tau)));
        }
        Ok(())
    }

    /// `2πa²S|J_E|/(ħ²L²)`.
    pub fn a_from_exchange(&self, hbar: f64) -> f64 {
        2.0 * PI * self.a_lattice.powi(2) * self.S * self.J_E.abs() / (hbar * hbar * self.L_chain.powi(2))
    }

    /// Relative mismatch between `A_param` and the exchange expression.
    pub fn consistency(&self, hbar: f64) -> f64 {
        let a = self.a_from_exchange(hbar);
        (self.A_param - a).abs() / self.A_param.abs().max(a.abs())
    }

    /// `ω_n = 2πν_n`.
    pub fn omega_n(&self, n: u32) -> f64 {
        2.0 * PI * dispersion(self, n)
    }
}

/// `a_n = −iγ_E S τ² E₁/(πn) · [(ω_n−ω) − i/τ] / [1 + (ω_n−ω)²τ²]` for odd n,
/// zero for even n.
pub fn mode_amplitude(p: &ResonanceParams, n: u32, omega: f64) -> Result<Complex> {
    if n < 1 {
        return Err(invalid("mode index must be >= 1"));
    }
    if n % 2 == 0 {
        return Ok(Complex::default());
    }
    let dw = p.omega_n(n) - omega;
    let pre = Complex::new(0.0, -p.gamma_E * p.S * p.tau * p.tau * p.E1 / (PI * n as f64));
    Ok(pre * Complex::new(dw, -1.0 / p.tau) / (1.0 + dw * dw * p.tau * p.tau))
}

pub fn dispersion(p: &ResonanceParams, n: u32) -> f64 {
    p.nu0 - p.A_param * (n as f64).powi(2)
}

/// Ratio of two fitted splitting parameters, e.g. Raman over infrared.
pub fn a_ratio(a_num: f64, a_den: f64) -> Result<f64> {
    if a_den == 0.0 || !a_den.is_finite() || !a_num.is_finite() {
        return Err(invalid("splitting parameters must be finite with a non-zero denominator"));
    }
    Ok(a_num / a_den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionPoint {
    pub n: f64,
    pub nu_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionFit {
    pub nu0: f64,
    pub a_param: f64,
    pub residuals: Vec<f64>,
    pub rms: f64,
}

/// Least-squares fit of `ν = ν₀ − 𝔄n²`.
pub fn fit_dispersion(data: &[DispersionPoint]) -> Result<DispersionFit> {
    if data.len() < 2 {
        return Err(invalid("need at least two points to fit"));
    }
    let m = data.len() as f64;
    let xs: Vec<f64> = data.iter().map(|d| d.n * d.n).collect();
    let xm = xs.iter().sum::<f64>() / m;
    let ym = data.iter().map(|d| d.nu_n).sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("all points share the same |n|"));
    }
    let sxy: f64 = xs.iter().zip(data).map(|(x, d)| (x - xm) * (d.nu_n - ym)).sum();
    let slope = sxy / sxx;
    let nu0 = ym - slope * xm;
    let residuals: Vec<f64> = xs.iter().zip(data).map(|(x, d)| d.nu_n - (nu0 + slope * x)).collect();
    let rms = (residuals.iter().map(|r| r * r).sum::<f64>() / m).sqrt();
    Ok(DispersionFit {
        nu0,
        a_param: -slope,
        residuals,
        rms,
    })
}

/// Reads `n,nu_n` rows with a header.
pub fn read_dispersion_csv<R: Read>(r: R) -> Result<Vec<DispersionPoint>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        let p: DispersionPoint = rec.map_err(|e| Error::InvalidArgument(format!("dispersion csv: {e}")))?;
        out.push(p);
    }
    Ok(out)
}

/// Writes one row per input point: `n,nu_n,residual,nu0,A_param`.
pub fn write_fit_csv<W: Write>(w: W, data: &[DispersionPoint], fit: &DispersionFit) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv write: {e}"));
    wtr.write_record(["n", "nu_n", "residual", "nu0", "A_param"]).map_err(io)?;
    for (d, r) in data.iter().zip(&fit.residuals) {
        wtr.write_record([
            format!("{}", d.n),
            format!("{:.17e}", d.nu_n),
            format!("{:.17e}", r),
            format!("{:.17e}", fit.nu0),
            format!("{:.17e}", fit.a_param),
        ])
        .map_err(io)?;
    }
    wtr.flush().map_err(|e| Error::InvalidArgument(format!("csv write: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ResonanceParams {
        ResonanceParams {
            gamma_E: 1.3,
            S: 0.5,
            tau: 2.0,
            E1: 0.7,
            nu0: 100.0,
            A_param: 0.25,
            L_chain: 1.0,
            a_lattice: 0.1,
            J_E: 1.0,
        }
    }

    #[test]
    fn amplitude_at_resonance() {
        let p = params();
        for n in [1, 3, 5] {
            let a = mode_amplitude(&p, n, p.omega_n(n)).unwrap();
            let want = -p.gamma_E * p.S * p.tau * p.E1 / (PI * n as f64);
            assert!((a.re - want).abs() < 1e-14 && a.im.abs() < 1e-14);
        }
        assert_eq!(mode_amplitude(&p, 4, 3.0).unwrap(), Complex::default());
        assert!(mode_amplitude(&p, 0, 1.0).is_err());
    }

    #[test]
    fn fit_recovers() {
        let p = params();
        let d: Vec<_> = (0..8)
            .map(|n| DispersionPoint {
                n: n as f64,
                nu_n: dispersion(&p, n),
            })
            .collect();
        let f = fit_dispersion(&d).unwrap();
        assert!((f.nu0 - 100.0).abs() < 1e-10 && (f.a_param - 0.25).abs() < 1e-10);
        let mut buf = Vec::new();
        write_fit_csv(&mut buf, &d, &f).unwrap();
        let back = read_dispersion_csv("n,nu_n\n1,99.75\n2,99\n".as_bytes()).unwrap();
        assert_eq!(back.len(), 2);
    }
}
