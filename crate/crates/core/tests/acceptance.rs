//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Reference values come from oracles written here (explicit formulas,
//! composite Simpson quadrature, hand-built matrices) rather than from the
//! library routes under test.

use duplex_em::algebra::Complex;
use duplex_em::cavity::{
    maxwell_residual, AnalyticField, CavityModel, Convention, FirstSolution, Grid, ModeState, QuaternionField,
    SecondSolution,
};
use duplex_em::constants::PhysicalConstants;
use duplex_em::currents::{
    charge_ratio_estimate, continuity_residual, noether_charge, quantized_continuity_residual, ClosedFormCurrent,
    CurrentField, FieldFunctionSet, PmSign,
};
use duplex_em::dualsym::{dual_rotate, hyperbolic_dual, invariants, orthogonal_axes_magnitudes, ComplexVec3, FieldPair};
use duplex_em::fockquant::{
    commutator, hamiltonian_from_canonical, hermitian_spectrum, make_ladder, spacetime_local_operators,
    trig_ansatz_report, CMat,
};
use duplex_em::resonance::{dispersion, fit_dispersion, mode_amplitude, DispersionPoint, ResonanceParams};
use duplex_em::sshliquid::elliptic::{elliptic_e, elliptic_k};
use duplex_em::sshliquid::{
    gap_approximations, ground_energy_elliptic, ground_energy_small_z, ground_state_energy, solve_gap, GapForm,
    GapOptions, Method, Occupation, SshParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};
use std::process::Command;
use std::sync::Arc;

type Outcome = Result<String, String>;

fn within(label: &str, value: f64, bound: f64) -> Outcome {
    let msg = format!("{label} = {value:.3e} (bound {bound:.1e})");
    if value.is_finite() && value <= bound {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let ok = parts.iter().all(|p| p.is_ok());
    let text = parts
        .into_iter()
        .map(|p| match p {
            Ok(s) => s,
            Err(s) => format!("[fail] {s}"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

/// Composite Simpson rule with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(20240611);
    r.set_stream(stream);
    r
}

fn real_pair(e: [f64; 3], h: [f64; 3]) -> FieldPair {
    FieldPair::new(ComplexVec3::real(e[0], e[1], e[2]), ComplexVec3::real(h[0], h[1], h[2]))
}

fn re3(v: &ComplexVec3) -> [f64; 3] {
    [v.0[0].re, v.0[1].re, v.0[2].re]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `K = (E² − H²)² + 4(E·H)²` for real fields.
fn k_oracle(f: &FieldPair) -> f64 {
    let (e, h) = (re3(&f.e), re3(&f.h));
    (dot(e, e) - dot(h, h)).powi(2) + 4.0 * dot(e, h).powi(2)
}

fn natural_model(n: usize) -> CavityModel {
    CavityModel::uniform(1.0, 1.0, n, 1.0, PhysicalConstants::natural()).unwrap()
}

fn random_state(r: &mut ChaCha8Rng, n: usize) -> ModeState {
    let mut c = || {
        (0..n)
            .map(|_| Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
            .collect::<Vec<_>>()
    };
    let c1 = c();
    let c2 = c();
    ModeState::new(c1, c2).unwrap()
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let mut drift: f64 = 0.0;
    let mut larmor: f64 = 0.0;
    for _ in 0..1000 {
        let mut v = || [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)];
        let f = real_pair(v(), v());
        let th = r.gen_range(0.0..TAU);
        let k0 = k_oracle(&f);
        let rotated = dual_rotate(&f, th);
        let k_lib = invariants(&rotated, 0.0, 0.0).k_inv;
        let norm4 = (dot(re3(&f.e), re3(&f.e)) + dot(re3(&f.h), re3(&f.h))).powi(2);
        drift = drift.max((k_lib - k0).abs() / k0.max(norm4));
        let q = dual_rotate(&f, FRAC_PI_2);
        larmor = larmor.max((q.e - f.h).max_abs()).max((q.h + f.e).max_abs());
    }
    all(vec![
        within("K drift", drift, 1e-12),
        within("quarter-turn deviation from (H, -E)", larmor, 1e-15),
    ])
}

fn criterion_2() -> Outcome {
    let (e0, h0) = (1.0, 0.6);
    let f = real_pair([e0, 0.0, 0.0], [0.0, h0, 0.0]);
    let mut dev: f64 = 0.0;
    for beta in [0.1f64, 0.5, 0.9] {
        // Boost along z: E_x' = γ(E_x + βH_y), H_y' = γ(H_y − βE_x).
        let g = 1.0 / (1.0 - beta * beta).sqrt();
        let (want_e, want_h) = (g * (e0 + beta * h0), g * (h0 - beta * e0));
        let (me, mh) = match orthogonal_axes_magnitudes(&f, &hyperbolic_dual(&f, beta.atanh())) {
            Ok(x) => x,
            Err(e) => return Err(e.to_string()),
        };
        dev = dev.max((me - want_e).abs()).max((mh - want_h).abs());
    }
    let mut r = rng(2);
    let mut w_drift: f64 = 0.0;
    for _ in 0..100 {
        let mut v = || [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)];
        let f = real_pair(v(), v());
        let vt = r.gen_range(-3.0..3.0);
        // W = (E² − H²)/(2E·H) for real fields, independent of ϑ.
        let (e, h) = (re3(&f.e), re3(&f.h));
        let w0 = (dot(e, e) - dot(h, h)) / (2.0 * dot(e, h));
        if let Some(w1) = invariants(&f, 0.0, vt).w {
            w_drift = w_drift.max((w1 - w0).abs() / w0.abs().max(1.0));
        }
    }
    all(vec![
        within("boost magnitude deviation", dev, 1e-12),
        within("W drift", w_drift, 1e-12),
    ])
}

/// Max relative gap between analytic derivatives and central differences.
fn fd_derivative_check(f: &dyn AnalyticField, pts: &[(f64, f64)]) -> f64 {
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for &(z, t) in pts {
        let s = f.sample(z, t);
        let dz = (f.sample(z + h, t).value - f.sample(z - h, t).value) * (0.5 / h);
        let dt = (f.sample(z, t + h).value - f.sample(z, t - h).value) * (0.5 / h);
        let scale = s.dz.norm6().max(s.dt.norm6()).max(1.0);
        worst = worst.max((dz - s.dz).norm6() / scale).max((dt - s.dt).norm6() / scale);
    }
    worst
}

fn criterion_3() -> Outcome {
    let m = natural_model(8);
    let mut r = rng(3);
    let st = random_state(&mut r, 8);
    let theta = r.gen_range(0.0..TAU);
    let grid = Grid::for_model(&m, 64, 64);
    let z0 = m.constants.z0();
    let f1 = Arc::new(FirstSolution::new(m.clone(), st.clone()).map_err(|e| e.to_string())?);
    let f2 = Arc::new(SecondSolution::new(m.clone(), st, Convention::SecularFree).map_err(|e| e.to_string())?);
    let mut parts = Vec::new();
    let cases: [(&str, QuaternionField); 4] = [
        ("first", QuaternionField::single(f1.clone())),
        ("second", QuaternionField::single(f2.clone())),
        ("first rotated", QuaternionField::from_dual_rotation(f1.clone(), theta, z0)),
        ("second rotated", QuaternionField::from_dual_rotation(f2.clone(), theta, z0)),
    ];
    for (name, q) in cases {
        let v = maxwell_residual(&q, None, &grid, &m.constants).map_err(|e| e.to_string())?;
        parts.push(within(&format!("{name} residual"), v.relative.max(), 1e-10));
    }
    let pts: Vec<(f64, f64)> = (0..7).map(|i| (0.05 + 0.13 * i as f64, 0.3 * i as f64)).collect();
    let fd = fd_derivative_check(f1.as_ref(), &pts).max(fd_derivative_check(f2.as_ref(), &pts));
    parts.push(within("analytic vs finite-difference derivatives", fd, 1e-6));
    all(parts)
}

fn criterion_4() -> Outcome {
    let dim = 8;
    let m = natural_model(2);
    // Hand-built ladder: a[n-1, n] = √n.
    let mut a = CMat::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex::new((n as f64).sqrt(), 0.0);
    }
    let (la, lad) = make_ladder(dim).map_err(|e| e.to_string())?;
    let same = (&la.entries - &a).iter().map(|x| x.norm()).fold(0.0, f64::max);
    let c = commutator(&la.entries, &lad.entries);
    let mut comm: f64 = 0.0;
    for i in 0..dim - 1 {
        for j in 0..dim - 1 {
            let want = if i == j { 1.0 } else { 0.0 };
            comm = comm.max((c[(i, j)] - Complex::new(want, 0.0)).norm());
        }
    }
    let h = hamiltonian_from_canonical(&m, 1, dim).map_err(|e| e.to_string())?;
    let hw = m.constants.hbar * m.omega(1);
    let spec = hermitian_spectrum(&h.entries);
    let spec_dev = (0..7)
        .map(|n| {
            let want = hw * (n as f64 + 0.5);
            spec.iter().map(|e| (e - want).abs()).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let (_, reps) = spacetime_local_operators(&m, dim, 0.3, 0.2).map_err(|e| e.to_string())?;
    let g = reps.iter().map(|r| r.g_sym_deviation).fold(0.0, f64::max);
    let trig = trig_ansatz_report(dim, m.omega(1), &[0.05, 0.1, 0.2, 0.3]).map_err(|e| e.to_string())?;
    all(vec![
        within("ladder vs hand-built", same, 0.0),
        within("commutator on safe block", comm, 1e-14),
        within("spectrum deviation", spec_dev, 1e-12),
        within("symmetrized g deviation", g, 1e-12),
        if trig.rejected {
            Ok("trigonometric ansatz rejected".into())
        } else {
            Err("trigonometric ansatz not rejected".into())
        },
    ])
}

/// Central-difference divergence `∂_z j₃ + ∂₄ j₄`, `∂₄ = −(i/c)∂_t`.
fn fd_divergence(c: &dyn CurrentField, z: f64, t: f64, cl: f64) -> f64 {
    let h = 1e-5;
    let dz1 = (c.current(z + h, t).j3_1 - c.current(z - h, t).j3_1) / (2.0 * h);
    let dz2 = (c.current(z + h, t).j3_2 - c.current(z - h, t).j3_2) / (2.0 * h);
    let dt1 = (c.current(z, t + h).j4_1 - c.current(z, t - h).j4_1) / (2.0 * h);
    let dt2 = (c.current(z, t + h).j4_2 - c.current(z, t - h).j4_2) / (2.0 * h);
    let d4 = Complex::new(0.0, -1.0 / cl);
    (dz1 + d4 * dt1).norm().max((dz2 + d4 * dt2).norm())
}

fn max_current(c: &dyn CurrentField, grid: &Grid) -> f64 {
    grid.points()
        .map(|(z, t)| {
            let j = c.current(z, t);
            [j.j3_1, j.j3_2, j.j4_1, j.j4_2].iter().map(|x| x.norm()).fold(0.0, f64::max)
        })
        .fold(1.0, f64::max)
}

/// `Q₁(t) = (2/c)(V/L)∫Σ Im(u*u̇) dz` by Simpson over the jets.
fn q1_oracle(set: &FieldFunctionSet, t: f64) -> f64 {
    let m = &set.model;
    let dens = |z: f64| {
        m.modes()
            .flat_map(|a| set.jets(a, z, t))
            .map(|j| (j.u.conj() * j.ut).im)
            .sum::<f64>()
    };
    2.0 / m.constants.c * m.volume / m.length * simpson(dens, 0.0, m.length, 2000)
}

fn criterion_5() -> Outcome {
    let m = natural_model(4);
    let mut r = rng(5);
    let st = random_state(&mut r, 4);
    let grid = Grid::for_model(&m, 48, 48);
    let err = |e: duplex_em::Error| e.to_string();
    let cf = ClosedFormCurrent::new(m.clone(), st.clone()).map_err(err)?;
    let set = FieldFunctionSet::maxwellian(m.clone(), &st, PmSign::Plus, Convention::SecularFree).map_err(err)?;
    let scale = max_current(&cf, &grid);
    let cont = continuity_residual(&cf, &grid).map_err(err)?.max(continuity_residual(&set, &grid).map_err(err)?) / scale;
    let cl = m.constants.c;
    let fd = [(0.1, 0.2), (0.37, 1.1), (0.8, 2.5)]
        .iter()
        .map(|&(z, t)| fd_divergence(&cf, z, t, cl))
        .fold(0.0, f64::max)
        / scale;

    // Balanced amplitudes |C₁| = |C₂|.
    let phases: Vec<f64> = (0..4).map(|_| r.gen_range(0.0..TAU)).collect();
    let amps = [0.3, 0.5, 0.7, 0.9];
    let balanced = ModeState::new(
        amps.iter().zip(&phases).map(|(a, p)| Complex::from_polar(*a, *p)).collect(),
        amps.iter().zip(&phases).map(|(a, p)| Complex::from_polar(*a, -2.0 * p)).collect(),
    )
    .map_err(err)?;
    let bset = FieldFunctionSet::maxwellian(m.clone(), &balanced, PmSign::Minus, Convention::SecularFree).map_err(err)?;
    let re4 = grid.points().map(|(z, t)| bset.current(z, t).j4_1.norm()).fold(0.0, f64::max) / max_current(&bset, &grid);

    let qc = [0.0, 0.17, 0.5]
        .iter()
        .map(|&z| quantized_continuity_residual(&m, 6, z, 0.3, 1.0))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?
        .into_iter()
        .fold(0.0, f64::max);

    let period = TAU / m.omega(1);
    let q0 = q1_oracle(&set, 0.0);
    let lib0 = noether_charge(&set, 0.0).map_err(err)?;
    let mut drift: f64 = 0.0;
    for i in 1..=8 {
        let q = q1_oracle(&set, period * i as f64 / 8.0);
        drift = drift.max((q - q0).abs() / lib0.scale.max(q0.abs()));
    }
    let agree = (lib0.q1 - q0).abs() / lib0.scale.max(1.0);
    all(vec![
        within("relative continuity", cont, 1e-10),
        within("finite-difference continuity", fd, 1e-6),
        within("Re j4 balanced", re4, 1e-12),
        within("operator continuity", qc, 1e-10),
        within("Q1 drift (Simpson oracle)", drift, 1e-8),
        within("Q1 library vs oracle", agree, 1e-8),
    ])
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    for (ratio, nearest) in [(1.2e4, 110.0), (1.6e4, 126.0)] {
        let g = charge_ratio_estimate(ratio, 1.0).map_err(|e| e.to_string())?;
        let oracle = f64::sqrt(ratio);
        parts.push(within(&format!("g/e({ratio:e}) vs sqrt"), (g - oracle).abs(), 1e-12));
        // 109.54 is quoted as 110; 126.49 as 126.
        let quoted = if nearest == 110.0 { (g / 10.0).round() * 10.0 } else { g.round() };
        parts.push(within(&format!("quoted g/e({ratio:e}) vs {nearest}"), (quoted - nearest).abs(), 0.0));
        parts.push(if (110.0..=130.0).contains(&quoted) {
            Ok(format!("{quoted} in band"))
        } else {
            Err(format!("{quoted} outside band"))
        });
    }
    all(parts)
}

fn criterion_7() -> Outcome {
    let p = ResonanceParams {
        gamma_E: 1.3,
        S: 0.5,
        tau: 2.5,
        E1: 0.4,
        nu0: 97.0,
        A_param: 0.31,
        L_chain: 1.0,
        a_lattice: 1.0,
        J_E: 1.0,
    };
    let err = |e: duplex_em::Error| e.to_string();
    let mut even: f64 = 0.0;
    for n in [2, 4, 6, 8] {
        for w in [0.0, 10.0, p.omega_n(n)] {
            even = even.max(mode_amplitude(&p, n, w).map_err(err)?.norm());
        }
    }
    // At resonance a_n = −γSτE₁/(πn).
    let oracle = |n: u32| p.gamma_E * p.S * p.tau * p.E1 / (PI * n as f64);
    let a1 = mode_amplitude(&p, 1, p.omega_n(1)).map_err(err)?.norm();
    let a3 = mode_amplitude(&p, 3, p.omega_n(3)).map_err(err)?.norm();
    let amp_dev = (a1 - oracle(1)).abs().max((a3 - oracle(3)).abs());
    let data: Vec<DispersionPoint> = (0..12)
        .map(|n| DispersionPoint {
            n: n as f64,
            nu_n: p.nu0 - p.A_param * (n * n) as f64,
        })
        .collect();
    let fit = fit_dispersion(&data).map_err(err)?;
    let fit_dev = ((fit.nu0 - p.nu0) / p.nu0).abs().max(((fit.a_param - p.A_param) / p.A_param).abs());
    let disp = (dispersion(&p, 5) - (p.nu0 - 25.0 * p.A_param)).abs();
    all(vec![
        within("even amplitudes", even, 0.0),
        within("|a1|/|a3| - 3", (a1 / a3 - 3.0).abs(), 1e-12),
        within("resonance amplitude vs formula", amp_dev, 1e-14),
        within("dispersion fit relative error", fit_dev, 1e-10),
        within("dispersion formula", disp, 1e-12),
    ])
}

/// `(2N/π)∫₀^{π/2} 2α₂u𝒬 sin²x / (2t₀√(cos²x + ρ²sin²x)) dx` by Simpson.
fn gap_sum_oracle(p: &SshParams, q: f64) -> f64 {
    let rho2 = p.rho(q).powi(2);
    let f = |x: f64| {
        let s2 = x.sin().powi(2);
        2.0 * p.alpha2 * p.u * q * s2 / (2.0 * p.t0 * (x.cos().powi(2) + rho2 * s2).sqrt())
    };
    2.0 * p.n_sites as f64 / PI * simpson(f, 0.0, FRAC_PI_2, 4000)
}

fn criterion_8() -> Outcome {
    let err = |e: duplex_em::Error| e.to_string();
    let free = SshParams::new(1.0, 0.8, 0.0, 0.3, 4).map_err(err)?;
    let q_free = solve_gap(&free, &Occupation::Ground, &GapOptions::default()).map_err(err)?.q;

    let mut r = rng(8);
    let mut agree: f64 = 0.0;
    let mut oracle_res: f64 = 0.0;
    for _ in 0..20 {
        let p = SshParams::new(
            r.gen_range(0.8..1.5),
            r.gen_range(0.5..1.5),
            r.gen_range(0.0..0.5),
            r.gen_range(0.05..0.4),
            2 * r.gen_range(1..4),
        )
        .map_err(err)?;
        let opts = |method| GapOptions {
            method,
            ..GapOptions::default()
        };
        let a = solve_gap(&p, &Occupation::Ground, &opts(Method::QuadratureRoot)).map_err(err)?.q;
        let b = solve_gap(&p, &Occupation::Ground, &opts(Method::Elliptic)).map_err(err)?.q;
        agree = agree.max((a - b).abs());
        // The ground state has σ = n_c − n_v = −1, so the root satisfies 𝒬 = 1 − Σ.
        oracle_res = oracle_res.max((b - 1.0 + gap_sum_oracle(&p, b)).abs());
    }

    // Exact point: α₁ = 1, t₀ = 1, u = 1/2, N = 8, α₂ = 1/2 gives ρ = 1 at 𝒬 = 1.
    let exact = SshParams::new(1.0, 1.0, 0.5, 0.5, 8).map_err(err)?;
    let strong = GapOptions {
        form: GapForm::StrongCoupling,
        ..GapOptions::default()
    };
    let sol = solve_gap(&exact, &Occupation::Inverted, &strong).map_err(err)?;
    let want = exact.alpha2 * 8.0 / (4.0 * exact.alpha1);
    let exact_dev = sol.roots.iter().map(|q| (q.abs() - want).abs()).fold(f64::INFINITY, f64::min);
    let oracle_exact = (gap_sum_oracle(&exact, want) / want - 1.0).abs();

    let mut approx: f64 = 0.0;
    for u in [2.02, 2.05, 2.1] {
        let p = SshParams::new(1.0, 1.0, 0.5, u, 2).map_err(err)?;
        let full = solve_gap(&p, &Occupation::Inverted, &strong).map_err(err)?;
        let qs = gap_approximations(&p, 1.0).map_err(err)?.q_small.unwrap_or(f64::NAN);
        let best = full
            .roots
            .iter()
            .map(|q| q.abs())
            .min_by(|a, b| (a - qs).abs().total_cmp(&(b - qs).abs()))
            .unwrap_or(f64::NAN);
        approx = approx.max((qs - best).abs() / best);
    }
    all(vec![
        within("alpha2 = 0 gives |Q - 1|", (q_free - 1.0).abs(), 1e-10),
        within("quadrature vs elliptic root", agree, 1e-8),
        within("root residual under Simpson oracle", oracle_res, 1e-8),
        within("exact case |Q| deviation", exact_dev, 1e-10),
        within("exact case oracle residual", oracle_exact, 1e-10),
        within("approximation relative error", approx, 0.1),
    ])
}

/// `E₀ = −(2N/π)∫₀^{π/2} 2t₀(ρ²sin²x − cos²x)/√(cos²x + ρ²sin²x) dx + 2NKu²`.
fn ground_energy_oracle(p: &SshParams, q: f64) -> f64 {
    let rho2 = p.rho(q).powi(2);
    let f = |x: f64| {
        let (s2, c2) = (x.sin().powi(2), x.cos().powi(2));
        2.0 * p.t0 * (rho2 * s2 - c2) / (c2 + rho2 * s2).sqrt()
    };
    let n = p.n_sites as f64;
    -2.0 * n / PI * simpson(f, 0.0, FRAC_PI_2, 20000) + 2.0 * n * p.k_spring * p.u * p.u
}

fn criterion_9() -> Outcome {
    let err = |e: duplex_em::Error| e.to_string();
    let p = SshParams::new(1.0, 1.0, 0.2, 0.0, 2).map_err(err)?.with_spring(10.0);
    let q = 1.0;
    let mut r = rng(9);
    let mut sym: f64 = 0.0;
    let mut routes: f64 = 0.0;
    for _ in 0..20 {
        // ρ = 2u here; keep ρ in [0.2, 0.98].
        let u = r.gen_range(0.1..0.49);
        let a = ground_energy_elliptic(&p.with_u(u), q).map_err(err)?;
        let b = ground_energy_elliptic(&p.with_u(-u), q).map_err(err)?;
        sym = sym.max((a - b).abs());
        routes = routes.max((a - ground_energy_oracle(&p.with_u(u), q)).abs() / a.abs().max(1.0));
    }
    let grid: Vec<f64> = (0..=200).map(|i| -0.1 + 0.001 * i as f64).collect();
    let curve = ground_state_energy(&p, q, &grid).map_err(err)?;
    // Independent minimum: scan the oracle energy on a fine positive grid.
    let (u_scan, _) = (1..=1000)
        .map(|i| 1e-4 * i as f64)
        .map(|u| (u, ground_energy_oracle(&p.with_u(u), q)))
        .fold((0.0, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best });
    let at = p.with_u(0.05);
    let full = ground_energy_elliptic(&at, q).map_err(err)?;
    let small = ground_energy_small_z(&at, q);
    all(vec![
        within("E0(u) - E0(-u)", sym, 1e-12),
        within("elliptic vs Simpson energy", routes, 1e-8),
        if curve.double_well && curve.u0 > 0.0 {
            Ok(format!("double well at u0 = {:.6}", curve.u0))
        } else {
            Err("no double well".into())
        },
        within("u0 vs scanned oracle minimum", (curve.u0 - u_scan).abs(), 2e-4),
        within("small-z relative error at z = 0.1", ((small - full) / full).abs(), 0.01),
    ])
}

fn criterion_10() -> Outcome {
    let err = |e: duplex_em::Error| e.to_string();
    // K(1/√2) = Γ(1/4)²/(4√π).
    let oracle = 1.854_074_677_301_371_9;
    all(vec![
        within("|K(0) - pi/2|", (elliptic_k(0.0).map_err(err)? - FRAC_PI_2).abs(), 1e-15),
        within("|E(0) - pi/2|", (elliptic_e(0.0).map_err(err)? - FRAC_PI_2).abs(), 1e-15),
        within("|E(1) - 1|", (elliptic_e(1.0).map_err(err)? - 1.0).abs(), 1e-15),
        within("|K(1/sqrt 2) - oracle|", (elliptic_k(FRAC_1_SQRT_2).map_err(err)? - oracle).abs(), 1e-13),
    ])
}

fn criterion_11() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_duplex-em"))
            .args(["verify-all", "--seed", "42"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() || !b.status.success() {
        return Err(format!("exit status {:?} / {:?}", a.status.code(), b.status.code()));
    }
    if a.stdout == b.stdout && !a.stdout.is_empty() {
        Ok(format!("{} identical bytes", a.stdout.len()))
    } else {
        Err("outputs differ".into())
    }
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("dual-invariant conservation", criterion_1),
        ("hyperbolic dual vs Lorentz boost", criterion_2),
        ("Maxwell residuals", criterion_3),
        ("quantization", criterion_4),
        ("currents", criterion_5),
        ("charge ratio", criterion_6),
        ("resonance", criterion_7),
        ("SSH gap solver", criterion_8),
        ("ground state", criterion_9),
        ("elliptic functions", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = f();
        let (tag, detail) = match &outcome {
            Ok(s) => ("PASS", s),
            Err(s) => ("FAIL", s),
        };
        println!("criterion {:>2} {tag} {name}: {detail}", i + 1);
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
