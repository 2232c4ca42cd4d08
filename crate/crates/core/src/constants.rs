use serde::{Deserialize, Serialize};

/// Physical constants used by the cavity, quantization and current modules.
///
/// `lambda0` is the space-quantization constant (same dimension as ħ). It
/// defaults to ħ but is kept independent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub c: f64,
    pub eps0: f64,
    pub mu0: f64,
    pub hbar: f64,
    pub lambda0: f64,
}

impl PhysicalConstants {
    /// SI values with μ₀ = 4π·10⁻⁷ H/m, so Z₀ ≈ 120π Ω.
    pub fn si() -> Self {
        let c = 299_792_458.0;
        let mu0 = 4.0e-7 * std::f64::consts::PI;
        let hbar = 1.054_571_817e-34;
        Self {
            c,
            eps0: 1.0 / (mu0 * c * c),
            mu0,
            hbar,
            lambda0: hbar,
        }
    }

    /// c = ε₀ = μ₀ = ħ = λ₀ = 1.
    pub fn natural() -> Self {
        Self {
            c: 1.0,
            eps0: 1.0,
            mu0: 1.0,
            hbar: 1.0,
            lambda0: 1.0,
        }
    }

    pub fn with_lambda0(mut self, lambda0: f64) -> Self {
        self.lambda0 = lambda0;
        self
    }

    /// Characteristic vacuum impedance √(μ₀/ε₀).
    pub fn z0(&self) -> f64 {
        (self.mu0 / self.eps0).sqrt()
    }

    /// Vacuum admittance 1/Z₀.
    pub fn lambda_v(&self) -> f64 {
        1.0 / self.z0()
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::natural()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_impedance_is_close_to_120_pi() {
        let k = PhysicalConstants::si();
        assert!((k.z0() - 120.0 * std::f64::consts::PI).abs() / k.z0() < 1e-3);
        assert!((k.c * k.c * k.eps0 * k.mu0 - 1.0).abs() < 1e-15);
        assert!((k.z0() * k.lambda_v() - 1.0).abs() < 1e-15);
    }
}
