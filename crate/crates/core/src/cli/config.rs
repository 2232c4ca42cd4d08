//! JSON run configuration. Every section is optional; unknown keys are rejected.

use crate::algebra::Complex;
use crate::cavity::{CavityModel, Convention, ModeState};
use crate::constants::PhysicalConstants;
use crate::currents::PmSign;
use crate::fockquant::SchemeKind;
use crate::resonance::ResonanceParams;
use crate::sshliquid::{GapOptions, Occupation, SshParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub constants: ConstantsConfig,
    pub cavity: CavityConfig,
    pub modes: ModesConfig,
    pub grid: GridConfig,
    pub dual: DualConfig,
    pub quantize: QuantizeConfig,
    pub currents: CurrentsConfig,
    pub resonance: ResonanceConfig,
    pub ssh: SshConfig,
    pub sweep: SweepConfig,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitSystem {
    #[default]
    Natural,
    Si,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstantsConfig {
    pub units: UnitSystem,
    pub lambda0: Option<f64>,
}

impl ConstantsConfig {
    pub fn build(&self) -> PhysicalConstants {
        let k = match self.units {
            UnitSystem::Natural => PhysicalConstants::natural(),
            UnitSystem::Si => PhysicalConstants::si(),
        };
        match self.lambda0 {
            Some(l) => k.with_lambda0(l),
            None => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CavityConfig {
    pub length: f64,
    pub volume: f64,
    pub n_modes: usize,
    pub mass: f64,
    /// Per-mode masses; overrides `n_modes` and `mass`.
    pub masses: Option<Vec<f64>>,
}

impl Default for CavityConfig {
    fn default() -> Self {
        Self {
            length: 1.0,
            volume: 1.0,
            n_modes: 4,
            mass: 1.0,
            masses: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModesConfig {
    /// `[re, im]` per mode; random (from the seed) when absent.
    pub c1: Option<Vec<[f64; 2]>>,
    pub c2: Option<Vec<[f64; 2]>>,
    pub convention: Convention,
    /// Cavity solution used by `cavity-field`.
    pub solution: SolutionKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub nz: usize,
    pub nt: usize,
    /// Time span in periods `L/c`.
    pub periods: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            nz: 64,
            nt: 64,
            periods: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DualConfig {
    pub e: [f64; 3],
    pub h: [f64; 3],
    pub theta: f64,
    pub vartheta: f64,
}

impl Default for DualConfig {
    fn default() -> Self {
        Self {
            e: [1.0, 0.0, 0.0],
            h: [0.0, 0.6, 0.0],
            theta: 0.0,
            vartheta: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionKind {
    #[default]
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantizeConfig {
    pub dim: usize,
    pub scheme: SchemeKind,
    pub z: f64,
    pub t: f64,
    pub dump_operators: bool,
}

impl Default for QuantizeConfig {
    fn default() -> Self {
        Self {
            dim: 8,
            scheme: SchemeKind::TimeLocal,
            z: 0.25,
            t: 0.0,
            dump_operators: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CurrentsConfig {
    pub sign: PmSign,
    pub e_over_hbar: f64,
    pub quantized_dim: usize,
    pub j_e: Option<f64>,
    pub j_h: Option<f64>,
}

impl Default for CurrentsConfig {
    fn default() -> Self {
        Self {
            sign: PmSign::Plus,
            e_over_hbar: 1.0,
            quantized_dim: 6,
            j_e: None,
            j_h: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResonanceConfig {
    pub params: ResonanceParams,
    /// CSV with columns `n,nu_n`; synthesized from `params` when absent.
    pub data_csv: Option<PathBuf>,
    pub n_max: u32,
}

impl Default for ResonanceConfig {
    fn default() -> Self {
        Self {
            params: ResonanceParams {
                gamma_E: 1.0,
                S: 0.5,
                tau: 1.0,
                E1: 1.0,
                nu0: 100.0,
                A_param: 0.25,
                L_chain: 1.0,
                a_lattice: 1.0,
                J_E: 1.0,
            },
            data_csv: None,
            n_max: 9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub n: usize,
}

impl RangeSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.start];
        }
        (0..self.n)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SshConfig {
    pub params: SshParams,
    pub occupation: Occupation,
    pub options: GapOptions,
    /// `u` grid for the ground-state curve; must be symmetric about 0.
    pub u_grid: RangeSpec,
}

impl Default for SshConfig {
    fn default() -> Self {
        Self {
            params: SshParams {
                t0: 1.0,
                alpha1: 1.0,
                alpha2: 0.2,
                u: 0.05,
                k_spring: 10.0,
                n_sites: 2,
                a_lattice: 1.0,
                m_eff: 1.0,
            },
            occupation: Occupation::Ground,
            options: GapOptions::default(),
            u_grid: RangeSpec {
                start: -0.1,
                stop: 0.1,
                n: 201,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    #[default]
    U,
    Alpha1,
    Alpha2,
    T0,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub values: RangeSpec,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            parameter: SweepParameter::U,
            values: RangeSpec {
                start: 0.01,
                stop: 0.4,
                n: 40,
            },
        }
    }
}

fn positive(name: &str, x: f64) -> Result<(), ConfigError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(bad(format!("{name} must be positive and finite, got {x}")))
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let cfg: Config = match path {
            None => Config::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Read {
                    path: p.to_path_buf(),
                    source,
                })?;
                serde_json::from_str(&text)?
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let c = &self.cavity;
        positive("cavity.length", c.length)?;
        positive("cavity.volume", c.volume)?;
        positive("cavity.mass", c.mass)?;
        if c.masses.is_none() && c.n_modes == 0 {
            return Err(bad("cavity.n_modes must be at least 1"));
        }
        if let Some(m) = &c.masses {
            if m.is_empty() {
                return Err(bad("cavity.masses must not be empty"));
            }
            for &x in m {
                positive("cavity.masses[]", x)?;
            }
        }
        let n = self.n_modes();
        for (name, v) in [("modes.c1", &self.modes.c1), ("modes.c2", &self.modes.c2)] {
            if let Some(v) = v {
                if v.len() != n {
                    return Err(bad(format!("{name} has {} entries for {n} modes", v.len())));
                }
            }
        }
        if self.modes.c1.is_some() != self.modes.c2.is_some() {
            return Err(bad("modes.c1 and modes.c2 must be given together"));
        }
        if self.grid.nz < 2 || self.grid.nt < 2 {
            return Err(bad("grid.nz and grid.nt must be at least 2"));
        }
        positive("grid.periods", self.grid.periods)?;
        if let Some(l) = self.constants.lambda0 {
            positive("constants.lambda0", l)?;
        }
        if self.quantize.dim < 2 {
            return Err(bad("quantize.dim must be at least 2"));
        }
        if self.currents.quantized_dim < 3 {
            return Err(bad("currents.quantized_dim must be at least 3"));
        }
        let r = &self.resonance.params;
        positive("resonance.params.A_param", r.A_param)?;
        positive("resonance.params.tau", r.tau)?;
        if self.resonance.n_max < 1 {
            return Err(bad("resonance.n_max must be at least 1"));
        }
        self.ssh
            .params
            .validate()
            .map_err(|e| bad(format!("ssh.params: {e}")))?;
        self.ssh
            .occupation
            .validate()
            .map_err(|e| bad(format!("ssh.occupation: {e}")))?;
        if self.ssh.u_grid.n < 3 {
            return Err(bad("ssh.u_grid.n must be at least 3"));
        }
        if self.sweep.values.n == 0 {
            return Err(bad("sweep.values.n must be at least 1"));
        }
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.cavity.masses.as_ref().map_or(self.cavity.n_modes, Vec::len)
    }

    pub fn model(&self) -> crate::Result<CavityModel> {
        let c = &self.cavity;
        let masses = c.masses.clone().unwrap_or_else(|| vec![c.mass; c.n_modes]);
        CavityModel::new(c.length, c.volume, masses, self.constants.build())
    }

    /// Configured mode coefficients, or seeded random ones in `[-1, 1]²`.
    pub fn mode_state(&self, seed: u64) -> crate::Result<ModeState> {
        let to_c = |v: &Vec<[f64; 2]>| v.iter().map(|[a, b]| Complex::new(*a, *b)).collect::<Vec<_>>();
        match (&self.modes.c1, &self.modes.c2) {
            (Some(a), Some(b)) => ModeState::new(to_c(a), to_c(b)),
            _ => {
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                let n = self.n_modes();
                let mut draw = || {
                    (0..n)
                        .map(|_| Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
                        .collect::<Vec<_>>()
                };
                let c1 = draw();
                let c2 = draw();
                ModeState::new(c1, c2)
            }
        }
    }
}
