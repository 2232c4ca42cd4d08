//! `duplex-em` command-line driver.
//!
//! Exit codes: 0 success, 1 a computed check failed, 2 bad arguments,
//! configuration or output directory.

pub mod config;
pub mod verify;

use crate::cavity::{
    field_energy, maxwell_residual, AnalyticField, FirstSolution, Grid, QuaternionField, SecondSolution,
};
use crate::currents::{
    charge_ratio_estimate, continuity_residual, noether_charge, noether_drift, quantized_continuity_residual, spirality,
    CurrentField, FieldFunctionSet,
};
use crate::dualsym::{dual_rotate, hyperbolic_dual, invariants, ComplexVec3, FieldPair};
use crate::fockquant::{
    assemble_field_operators, commutator, deviation_from_scalar, hamiltonian_from_canonical, heisenberg_check,
    hermitian_spectrum, make_ladder, safe_indices, spacetime_local_operators, trig_ansatz_report, OperatorDump,
};
use crate::resonance::{
    dispersion, fit_dispersion, mode_amplitude, read_dispersion_csv, write_fit_csv, DispersionPoint,
};
use crate::sshliquid::{ground_energy_elliptic, ground_state_energy, solve_gap, SshParams};
use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use config::{Config, SolutionKind, SweepParameter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::f64::consts::TAU;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "duplex-em", version, about = "Dual-symmetric cavity electrodynamics and SSH gap toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON configuration file (see docs/config.md).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Pass/fail tolerance; for `verify-all` a factor on every bound.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dual-rotation invariants of one configured pair or of random pairs.
    DualInvariants {
        /// Number of seeded random (E, H, θ, ϑ) samples.
        #[arg(long, value_name = "N")]
        random: Option<usize>,
    },
    /// Cavity field on the grid with Maxwell residuals.
    CavityField,
    /// Fock-space checks of a quantization scheme.
    Quantize,
    /// Classical 4-currents on the grid, continuity, Noether charge.
    Currents,
    /// Fit of the quadratic mode dispersion.
    ResonanceFit,
    /// Gap equation and ground-state curve.
    SshSolve,
    /// Gap equation over a parameter range.
    SshSweep,
    /// Full invariant suite with a pass/fail table.
    VerifyAll,
}

enum Failure {
    Config(anyhow::Error),
    Validation(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.into())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `argv` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("DUPLEX_EM_LOG", "warn")).try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(Failure::Validation(msg)) => {
            eprintln!("validation failed: {msg}");
            1
        }
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn execute(cli: &Cli) -> Outcome {
    let cfg = Config::load(cli.config.as_deref())?;
    let ctx = Ctx::new(cli, cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .context("building worker pool")?;
    pool.install(|| match &cli.command {
        Command::DualInvariants { random } => ctx.dual_invariants(*random),
        Command::CavityField => ctx.cavity_field(),
        Command::Quantize => ctx.quantize(),
        Command::Currents => ctx.currents(),
        Command::ResonanceFit => ctx.resonance_fit(),
        Command::SshSolve => ctx.ssh_solve(),
        Command::SshSweep => ctx.ssh_sweep(),
        Command::VerifyAll => ctx.verify_all(),
    })
}

/// Fixed 17-significant-digit rendering.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone)]
enum Cell {
    Bool(bool),
    Int(i64),
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.into())
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

fn num_json(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Quantity with the formula it evaluates.
fn q(value: Value, formula: &str) -> Value {
    json!({ "value": value, "formula": formula })
}

struct Ctx {
    cfg: Config,
    out: PathBuf,
    out_explicit: bool,
    seed: u64,
    format: Format,
    tol: Option<f64>,
}

impl Ctx {
    fn new(cli: &Cli, cfg: Config) -> std::result::Result<Self, Failure> {
        let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("duplex-em-out"));
        if let Some(t) = cli.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Failure::Config(anyhow::anyhow!("--tol must be positive, got {t}")));
            }
        }
        Ok(Self {
            cfg,
            out,
            out_explicit: cli.out.is_some(),
            seed: cli.seed,
            format: cli.format,
            tol: cli.tol,
        })
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn ensure_out(&self) -> anyhow::Result<&Path> {
        std::fs::create_dir_all(&self.out).with_context(|| format!("creating output directory {}", self.out.display()))?;
        Ok(&self.out)
    }

    fn write_table(&self, stem: &str, t: &Table) -> anyhow::Result<PathBuf> {
        let dir = self.ensure_out()?;
        match self.format {
            Format::Csv => {
                let path = dir.join(format!("{stem}.csv"));
                let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
                w.write_record(&t.headers)?;
                for r in &t.rows {
                    w.write_record(r.iter().map(|c| match c {
                        Cell::Bool(b) => b.to_string(),
                        Cell::Int(i) => i.to_string(),
                        Cell::Num(x) => fmt_f64(*x),
                        Cell::Text(s) => s.clone(),
                    }))?;
                }
                w.flush()?;
                Ok(path)
            }
            Format::Json => {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| {
                        let mut m = Map::new();
                        for (h, c) in t.headers.iter().zip(r) {
                            m.insert(
                                (*h).into(),
                                match c {
                                    Cell::Bool(b) => Value::Bool(*b),
                                    Cell::Int(i) => Value::from(*i),
                                    Cell::Num(x) => num_json(*x),
                                    Cell::Text(s) => Value::String(s.clone()),
                                },
                            );
                        }
                        Value::Object(m)
                    })
                    .collect();
                let path = dir.join(format!("{stem}.json"));
                write_json(&path, &Value::Array(rows))?;
                Ok(path)
            }
        }
    }

    fn write_summary(&self, v: &Value) -> anyhow::Result<PathBuf> {
        let path = self.ensure_out()?.join("summary.json");
        write_json(&path, v)?;
        Ok(path)
    }

    fn field_pair(&self) -> FieldPair {
        let d = &self.cfg.dual;
        FieldPair::new(ComplexVec3::real(d.e[0], d.e[1], d.e[2]), ComplexVec3::real(d.h[0], d.h[1], d.h[2]))
    }

    fn dual_invariants(&self, random: Option<usize>) -> Outcome {
        let tol = self.tol(1e-12);
        let samples: Vec<(FieldPair, f64, f64)> = match random {
            Some(n) => {
                let mut r = ChaCha8Rng::seed_from_u64(self.seed);
                (0..n)
                    .map(|_| {
                        let mut v = || ComplexVec3::real(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
                        let f = FieldPair::new(v(), v());
                        (f, r.gen_range(0.0..TAU), r.gen_range(-2.0..2.0))
                    })
                    .collect()
            }
            None => vec![(self.field_pair(), self.cfg.dual.theta, self.cfg.dual.vartheta)],
        };
        let rows: Vec<(Vec<Cell>, f64)> = samples
            .par_iter()
            .enumerate()
            .map(|(i, (f, th, vt))| {
                let k0 = invariants(f, 0.0, 0.0).k_inv;
                let k1 = invariants(&dual_rotate(f, *th), 0.0, 0.0).k_inv;
                let drift = if k0 == 0.0 { k1.abs() } else { (k1 - k0).abs() / k0 };
                let inv = invariants(f, *th, *vt);
                let hd = hyperbolic_dual(f, *vt);
                let row = vec![
                    i.into(),
                    (*th).into(),
                    (*vt).into(),
                    k0.into(),
                    k1.into(),
                    drift.into(),
                    inv.i1p.into(),
                    inv.i2p.into(),
                    inv.w.unwrap_or(f64::NAN).into(),
                    hd.norm6().into(),
                ];
                (row, drift)
            })
            .collect();
        let max_drift = rows.iter().map(|r| r.1).fold(0.0, f64::max);
        let table = Table {
            headers: vec!["index", "theta", "vartheta", "k_before", "k_after", "k_drift", "i1", "i2", "w", "hyperbolic_norm"],
            rows: rows.into_iter().map(|r| r.0).collect(),
        };
        self.write_table("dual_invariants", &table)?;
        self.write_summary(&json!({
            "samples": table.rows.len(),
            "seed": self.seed,
            "max_k_drift": q(num_json(max_drift), "|K(rotated) - K| / K, K = |E.E - H.H + 2iE.H|^2"),
            "tolerance": tol,
        }))?;
        if max_drift > tol {
            return Err(Failure::Validation(format!("max K drift {max_drift:e} exceeds {tol:e}")));
        }
        Ok(())
    }

    fn cavity_field(&self) -> Outcome {
        let m = self.cfg.model()?;
        let st = self.cfg.mode_state(self.seed)?;
        let field: Arc<dyn AnalyticField> = match self.cfg.modes.solution {
            SolutionKind::First => Arc::new(FirstSolution::new(m.clone(), st)?),
            SolutionKind::Second => Arc::new(SecondSolution::new(m.clone(), st, self.cfg.modes.convention)?),
        };
        let g = &self.cfg.grid;
        let grid = Grid::new(g.nz, g.nt, m.length, m.period() * g.periods);
        let res = maxwell_residual(&QuaternionField::single(field.clone()), None, &grid, &m.constants)?;
        let rows = grid
            .points()
            .map(|(z, t)| {
                let s = field.sample(z, t).value;
                vec![z.into(), t.into(), s.e.0[0].re.into(), s.e.0[0].im.into(), s.h.0[1].re.into(), s.h.0[1].im.into()]
            })
            .collect();
        self.write_table(
            "cavity_field",
            &Table {
                headers: vec!["z", "t", "ex_re", "ex_im", "hy_re", "hy_im"],
                rows,
            },
        )?;
        let tol = self.tol(1e-10);
        let r = res.relative.max();
        self.write_summary(&json!({
            "solution": format!("{:?}", self.cfg.modes.solution).to_lowercase(),
            "residual_relative": q(num_json(r), "max over grid of |curl E + mu0 dH/dt|, |curl H - eps0 dE/dt|, |div E|, |div H| over largest term"),
            "residual_absolute": q(num_json(res.absolute.max()), "max over grid of the same residuals"),
            "energy_t0": q(num_json(field_energy(field.as_ref(), &m, 0.0)), "(V/L) int (eps0|E|^2 + mu0|H|^2)/2 dz"),
            "tolerance": tol,
        }))?;
        if r > tol {
            return Err(Failure::Validation(format!("Maxwell residual {r:e} exceeds {tol:e}")));
        }
        Ok(())
    }

    fn quantize(&self) -> Outcome {
        let qc = &self.cfg.quantize;
        let m = self.cfg.model()?;
        let dim = qc.dim;
        let (a, ad) = make_ladder(dim)?;
        let comm = deviation_from_scalar(
            &commutator(&a.entries, &ad.entries),
            crate::algebra::Complex::new(1.0, 0.0),
            &safe_indices(dim),
        );
        let mut rows = Vec::new();
        let mut spec_dev: f64 = 0.0;
        let mut heis: f64 = 0.0;
        for alpha in m.modes() {
            let hw = m.constants.hbar * m.omega(alpha);
            let spec = hermitian_spectrum(&hamiltonian_from_canonical(&m, alpha, dim)?.entries);
            for n in 0..dim - 1 {
                let target = n as f64 + 0.5;
                let near = spec.iter().map(|e| e / hw).min_by(|x, y| (x - target).abs().total_cmp(&(y - target).abs()));
                let near = near.unwrap_or(f64::NAN);
                spec_dev = spec_dev.max((near - target).abs());
                rows.push(vec![alpha.into(), n.into(), near.into(), target.into()]);
            }
            heis = heis.max(heisenberg_check(&m, alpha, dim, qc.t)?);
        }
        self.write_table(
            "spectrum",
            &Table {
                headers: vec!["mode", "n", "eigenvalue_over_hbar_omega", "expected"],
                rows,
            },
        )?;
        let (e, h) = assemble_field_operators(&m, qc.scheme, dim, qc.z, qc.t)?;
        let g_reports = spacetime_local_operators(&m, dim, qc.z, qc.t)?.1;
        let trig = trig_ansatz_report(dim, m.omega(1), &[0.05, 0.1, 0.2, 0.3].map(|x| x * m.period()))?;
        if qc.dump_operators {
            let mut dumps = vec![
                OperatorDump::new(&a.entries, qc.scheme, 0, "a"),
                OperatorDump::new(&ad.entries, qc.scheme, 0, "a_dagger"),
            ];
            for (i, (me, mh)) in e.mode_terms.iter().zip(&h.mode_terms).enumerate() {
                dumps.push(OperatorDump::new(me, qc.scheme, i + 1, "E"));
                dumps.push(OperatorDump::new(mh, qc.scheme, i + 1, "H"));
            }
            write_json(&self.ensure_out()?.join("operators.json"), &serde_json::to_value(&dumps)?)?;
        }
        let tol = self.tol(1e-12);
        self.write_summary(&json!({
            "dim": dim,
            "scheme": serde_json::to_value(qc.scheme)?,
            "commutator_deviation": q(num_json(comm), "max |[a, a+] - 1| on the safe block"),
            "spectrum_deviation": q(num_json(spec_dev), "max |lambda_n/(hbar omega) - (n + 1/2)|, n < dim - 1"),
            "heisenberg_deviation": q(num_json(heis), "relative |da/dt - [a, H]/(i hbar)| on the safe block"),
            "field_hermiticity_defect": q(num_json(e.hermiticity_defect().max(h.hermiticity_defect())), "max |X - X+| of the field operators"),
            "g_reports": serde_json::to_value(&g_reports)?,
            "trig_ansatz": serde_json::to_value(&trig)?,
            "tolerance": tol,
        }))?;
        if comm > tol || spec_dev > tol {
            return Err(Failure::Validation(format!(
                "commutator deviation {comm:e} or spectrum deviation {spec_dev:e} exceeds {tol:e}"
            )));
        }
        Ok(())
    }

    fn currents(&self) -> Outcome {
        let cc = &self.cfg.currents;
        let m = self.cfg.model()?;
        let st = self.cfg.mode_state(self.seed)?;
        let set = FieldFunctionSet::maxwellian(m.clone(), &st, cc.sign, self.cfg.modes.convention)?
            .with_charge(cc.e_over_hbar * m.constants.hbar);
        let g = &self.cfg.grid;
        let grid = Grid::new(g.nz, g.nt, m.length, m.period() * g.periods);
        let cont = continuity_residual(&set, &grid)?;
        let pts: Vec<(f64, f64)> = grid.points().collect();
        let currents: Vec<_> = pts.par_iter().map(|&(z, t)| set.current(z, t)).collect();
        let scale = currents
            .iter()
            .flat_map(|j| [j.j3_1, j.j3_2, j.j4_1, j.j4_2])
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let cont_rel = if scale > 0.0 { cont / scale } else { cont };
        // Charges and spirality depend on t only.
        let per_t = (0..grid.nt)
            .into_par_iter()
            .map(|j| {
                let t = grid.t(j);
                Ok((noether_charge(&set, t)?, spirality(&set, t, None)?.s4_3))
            })
            .collect::<crate::Result<Vec<_>>>()?;
        let rows = pts
            .iter()
            .zip(&currents)
            .enumerate()
            .map(|(i, (&(z, t), j))| {
                let mut r: Vec<Cell> = vec![z.into(), t.into()];
                for c in [j.j3_1, j.j3_2, j.j4_1, j.j4_2] {
                    r.push(c.re.into());
                    r.push(c.im.into());
                }
                let (qc, sp) = &per_t[i % grid.nt];
                r.extend([qc.q1.into(), qc.q2.into(), (*sp).into()]);
                r
            })
            .collect();
        self.write_table(
            "currents",
            &Table {
                headers: vec![
                    "z", "t", "j3_1_re", "j3_1_im", "j3_2_re", "j3_2_im", "j4_1_re", "j4_1_im", "j4_2_re", "j4_2_im", "q1",
                    "q2", "spirality",
                ],
                rows,
            },
        )?;
        let charge = noether_charge(&set, 0.0)?;
        let drift = noether_drift(&set, 32)?;
        let e_q = cc.e_over_hbar * m.constants.hbar;
        let qcont = [0.0, 0.25 * m.length, 0.5 * m.length]
            .iter()
            .map(|&z| quantized_continuity_residual(&m, cc.quantized_dim, z, 0.0, e_q))
            .collect::<crate::Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let ratio = match (cc.j_e, cc.j_h) {
            (Some(je), Some(jh)) => Some(charge_ratio_estimate(je, jh)?),
            _ => None,
        };
        let tol = self.tol(1e-10);
        self.write_summary(&json!({
            "continuity_residual": q(num_json(cont), "max |d3 j3 + d4 j4| over the grid, both parts"),
            "continuity_residual_relative": q(num_json(cont_rel), "continuity residual over max |j| on the grid"),
            "noether_q1": q(num_json(charge.q1), "(2/c) int sum Im(u* du/dt) d3x"),
            "noether_q2": q(num_json(charge.q2), "(1/c) int sum d|u|^2/dt d3x"),
            "noether_drift": q(num_json(drift), "max |Q(t) - Q(0)| / scale over one period"),
            "quantized_continuity_residual": q(num_json(qcont), "max |dz Im j3 + d4 Im j4| and |d4 Re j4| on the safe block"),
            "charge_ratio": q(ratio.map_or(Value::Null, num_json), "g/e = sqrt(J_E/J_H)"),
            "tolerance": tol,
        }))?;
        if cont_rel > tol || qcont > tol {
            return Err(Failure::Validation(format!("continuity residual {:e} exceeds {tol:e}", cont_rel.max(qcont))));
        }
        Ok(())
    }

    fn resonance_fit(&self) -> Outcome {
        let rc = &self.cfg.resonance;
        let p = &rc.params;
        let data: Vec<DispersionPoint> = match &rc.data_csv {
            Some(path) => {
                let f = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
                read_dispersion_csv(f)?
            }
            None => (0..=rc.n_max)
                .map(|n| DispersionPoint {
                    n: n as f64,
                    nu_n: dispersion(p, n),
                })
                .collect(),
        };
        let fit = fit_dispersion(&data)?;
        match self.format {
            Format::Csv => {
                let path = self.ensure_out()?.join("fit.csv");
                let f = std::fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
                write_fit_csv(f, &data, &fit)?;
            }
            Format::Json => write_json(&self.ensure_out()?.join("fit.json"), &serde_json::to_value(&fit)?)?,
        }
        let rows = (1..=rc.n_max)
            .map(|n| {
                let a = mode_amplitude(p, n, p.omega_n(n))?;
                Ok(vec![(n as usize).into(), p.omega_n(n).into(), a.re.into(), a.im.into()])
            })
            .collect::<crate::Result<Vec<Vec<Cell>>>>()?;
        self.write_table(
            "amplitudes",
            &Table {
                headers: vec!["n", "omega_n", "a_re", "a_im"],
                rows,
            },
        )?;
        self.write_summary(&json!({
            "points": data.len(),
            "nu0": q(num_json(fit.nu0), "intercept of nu_n = nu0 - A n^2"),
            "A_param": q(num_json(fit.a_param), "minus slope of nu_n against n^2"),
            "rms": q(num_json(fit.rms), "root mean square residual"),
        }))?;
        Ok(())
    }

    fn ssh_solve(&self) -> Outcome {
        let sc = &self.cfg.ssh;
        let sol = solve_gap(&sc.params, &sc.occupation, &sc.options)?;
        let rows = (0..sol.k.len())
            .map(|i| {
                let c = &sol.coeffs[i];
                vec![
                    sol.k[i].into(),
                    c.alpha.into(),
                    c.beta.into(),
                    sol.e_c[i].into(),
                    sol.e_v[i].into(),
                    sol.stability[i].stable().into(),
                ]
            })
            .collect();
        self.write_table(
            "gap_solution",
            &Table {
                headers: vec!["k", "alpha", "beta", "e_c", "e_v", "stable"],
                rows,
            },
        )?;
        let grid = sc.u_grid.values();
        let curve = ground_state_energy(&sc.params, sol.q, &grid)?;
        let rows = (0..grid.len())
            .map(|i| vec![grid[i].into(), curve.e0[i].into(), curve.e0_quadrature[i].into(), curve.e0_small_z[i].into()])
            .collect();
        self.write_table(
            "ground_state",
            &Table {
                headers: vec!["u", "e0", "e0_quadrature", "e0_small_z"],
                rows,
            },
        )?;
        let tol = self.tol(1e-10);
        self.write_summary(&json!({
            "Q": q(num_json(sol.q), "root of the gap condition nearest 1"),
            "roots": sol.roots.iter().map(|r| num_json(*r)).collect::<Vec<_>>(),
            "residual": q(num_json(sol.residual), "|F(Q)| of the solved form"),
            "rho": q(num_json(sol.rho), "2 alpha1 u Q / t0"),
            "regime": serde_json::to_value(sol.regime)?,
            "u0": q(num_json(curve.u0), "minimizer u > 0 of E0(u) at fixed Q"),
            "double_well": curve.double_well,
            "well_depth": q(num_json(curve.well_depth), "E0(0) - E0(u0)"),
            "tolerance": tol,
        }))?;
        if sol.residual > tol {
            return Err(Failure::Validation(format!("gap residual {:e} exceeds {tol:e}", sol.residual)));
        }
        Ok(())
    }

    fn ssh_sweep(&self) -> Outcome {
        let sc = &self.cfg.ssh;
        let sw = &self.cfg.sweep;
        let values = sw.values.values();
        let base = sc.params;
        let set = |v: f64| -> SshParams {
            let mut p = base;
            match sw.parameter {
                SweepParameter::U => p.u = v,
                SweepParameter::Alpha1 => p.alpha1 = v,
                SweepParameter::Alpha2 => p.alpha2 = v,
                SweepParameter::T0 => p.t0 = v,
            }
            p
        };
        let rows: Vec<Vec<Cell>> = values
            .par_iter()
            .map(|&v| {
                let p = set(v);
                match solve_gap(&p, &sc.occupation, &sc.options) {
                    Ok(s) => {
                        let e0 = ground_energy_elliptic(&p, s.q).unwrap_or(f64::NAN);
                        vec![
                            v.into(),
                            s.q.into(),
                            s.rho.into(),
                            format!("{:?}", s.regime).to_lowercase().into(),
                            s.residual.into(),
                            s.roots.len().into(),
                            e0.into(),
                            "".into(),
                        ]
                    }
                    Err(e) => {
                        log::warn!("sweep point {v}: {e}");
                        let nan = f64::NAN;
                        vec![v.into(), nan.into(), nan.into(), "".into(), nan.into(), 0usize.into(), nan.into(), e.to_string().into()]
                    }
                }
            })
            .collect();
        let failures = rows.iter().filter(|r| matches!(&r[7], Cell::Text(s) if !s.is_empty())).count();
        self.write_table(
            "ssh_sweep",
            &Table {
                headers: vec!["value", "Q", "rho", "regime", "residual", "n_roots", "e0", "error"],
                rows,
            },
        )?;
        self.write_summary(&json!({
            "parameter": serde_json::to_value(sw.parameter)?,
            "points": values.len(),
            "failed_points": failures,
        }))?;
        if failures > 0 {
            return Err(Failure::Validation(format!("{failures} sweep points had no solution")));
        }
        Ok(())
    }

    fn verify_all(&self) -> Outcome {
        let rows = verify::verify_all(self.seed, self.tol.unwrap_or(1.0));
        let table = verify::render_table(&rows);
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(table.as_bytes())?;
        stdout.flush()?;
        if self.out_explicit {
            let t = Table {
                headers: vec!["id", "module", "check", "value", "bound", "pass"],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.id.clone().into(),
                            r.module.into(),
                            r.name.clone().into(),
                            r.value.into(),
                            r.bound.into(),
                            r.pass.into(),
                        ]
                    })
                    .collect(),
            };
            self.write_table("verify", &t)?;
        }
        let failed = rows.iter().filter(|r| !r.pass).count();
        if failed > 0 {
            return Err(Failure::Validation(format!("{failed} checks failed")));
        }
        Ok(())
    }
}

fn write_json(path: &Path, v: &Value) -> anyhow::Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    std::fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}
