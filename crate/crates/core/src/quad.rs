//! Quadrature rules: composite Gauss–Legendre and adaptive Gauss–Kronrod (7/15).

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

/// Values that can be integrated: real or complex.
pub trait Integrand: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Composite rule with `panels` equal sub-intervals of [a, b].
    pub fn integrate<T: Integrand>(&self, f: impl Fn(f64) -> T, a: f64, b: f64, panels: usize) -> T {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut acc = T::default();
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            let mut s = T::default();
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s = s + f(mid + 0.5 * h * x) * *w;
            }
            acc = acc + s * (0.5 * h);
        }
        acc
    }
}

impl GaussLegendre {
    fn integrate_with_abs<T: Integrand>(&self, f: impl Fn(f64) -> (T, f64), a: f64, b: f64, panels: usize) -> (T, f64) {
        let h = (b - a) / panels as f64;
        let mut acc = T::default();
        let mut abs = 0.0;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                let (v, m) = f(mid + 0.5 * h * x);
                acc = acc + v * (0.5 * h * w);
                abs += m * 0.5 * h.abs() * w;
            }
        }
        (acc, abs)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre, doubling the panel count until one more
/// refinement changes the result by less than `tol` relative to the
/// integral of `|f|`, so cancelling integrands terminate.
pub fn integrate_converged<T: Integrand>(f: impl Fn(f64) -> T, a: f64, b: f64, tol: f64) -> T {
    let rule = GaussLegendre::new(16);
    let g = |x: f64| {
        let v = f(x);
        (v, v.magnitude())
    };
    let mut panels = 1;
    let (mut prev, mut scale) = rule.integrate_with_abs(&g, a, b, panels);
    for _ in 0..14 {
        panels *= 2;
        let (next, abs) = rule.integrate_with_abs(&g, a, b, panels);
        scale = scale.max(abs).max(next.magnitude());
        if (next - prev).magnitude() <= tol * scale.max(f64::MIN_POSITIVE) {
            return next;
        }
        prev = next;
    }
    prev
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod 7/15 quadrature of a real function.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    let mut intervals: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v, e) = gk15(&f, a, b);
    intervals.push((a, b, v, e));
    for _ in 0..2000 {
        let total: f64 = intervals.iter().map(|iv| iv.2).sum();
        let err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty interval list");
        let (lo, hi, _, _) = intervals.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            intervals.push((lo, hi, gk15(&f, lo, hi).0, 0.0));
            continue;
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    // Sum in a fixed order so results do not depend on the refinement history.
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    intervals.iter().map(|iv| iv.2).sum()
}
