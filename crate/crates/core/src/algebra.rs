//! Complex numbers, quaternions in Cayley–Dickson form, and the matrix
//! representations of complex numbers built from `[0,1]` units.
//!
//! A quaternion is stored as `x = c_e·e + c_j·j` with `c_e = a₁ + i a₂`,
//! `c_j = a₃ + i a₄`, where `i` is the quaternion unit and `k = ij`.
//!
//! The 4×4 representations use four permutation matrices `[e₁]..[e₄]` with
//! `[e₂]ⁿ = [e_{n+1}]`, so `[e₂]` plays the role of `i`, `[e₃]` of `−1` and
//! `[e₄]` of `−i`.

use crate::error::{invalid, Result};
use nalgebra::{DMatrix, Matrix4};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

pub use num_complex::Complex64 as Complex;

/// Default absolute tolerance for approximate comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

pub fn approx_eq_complex(a: Complex, b: Complex, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub c_e: Complex,
    pub c_j: Complex,
}

impl Quaternion {
    pub const fn new(c_e: Complex, c_j: Complex) -> Self {
        Self { c_e, c_j }
    }

    /// `a₁ + a₂ i + a₃ j + a₄ k`.
    pub const fn from_components(a1: f64, a2: f64, a3: f64, a4: f64) -> Self {
        Self {
            c_e: Complex::new(a1, a2),
            c_j: Complex::new(a3, a4),
        }
    }

    pub fn components(&self) -> [f64; 4] {
        [self.c_e.re, self.c_e.im, self.c_j.re, self.c_j.im]
    }

    pub fn one() -> Self {
        Self::from_components(1.0, 0.0, 0.0, 0.0)
    }

    pub fn unit_i() -> Self {
        Self::from_components(0.0, 1.0, 0.0, 0.0)
    }

    pub fn unit_j() -> Self {
        Self::from_components(0.0, 0.0, 1.0, 0.0)
    }

    pub fn unit_k() -> Self {
        Self::from_components(0.0, 0.0, 0.0, 1.0)
    }

    pub fn conj(&self) -> Self {
        Self {
            c_e: self.c_e.conj(),
            c_j: -self.c_j,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c_e.norm_sqr() + self.c_j.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            c_e: self.c_e * s,
            c_j: self.c_j * s,
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.components()
            .iter()
            .zip(other.components())
            .all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// Hamilton product. With `j w = w̄ j` for `w` in the complex subalgebra,
/// `(z₁ + z₂ j)(w₁ + w₂ j) = (z₁w₁ − z₂w̄₂) + (z₁w₂ + z₂w̄₁) j`.
pub fn quaternion_mul(x: Quaternion, y: Quaternion) -> Quaternion {
    Quaternion {
        c_e: x.c_e * y.c_e - x.c_j * y.c_j.conj(),
        c_j: x.c_e * y.c_j + x.c_j * y.c_e.conj(),
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Self) -> Self {
        quaternion_mul(self, rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Self) -> Self {
        Self {
            c_e: self.c_e + rhs.c_e,
            c_j: self.c_j + rhs.c_j,
        }
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Self) -> Self {
        Self {
            c_e: self.c_e - rhs.c_e,
            c_j: self.c_j - rhs.c_j,
        }
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Self {
        Self {
            c_e: -self.c_e,
            c_j: -self.c_j,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    TwoByTwo,
    FourByFourE,
    FourByFourEprime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRep {
    pub kind: MatrixKind,
    pub entries: DMatrix<f64>,
}

/// A cyclic basis `[e₁]..[e₄]` of 4×4 `[0,1]` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicBasis {
    pub kind: MatrixKind,
    pub units: [Matrix4<f64>; 4],
}

fn perm_matrix(cols: [usize; 4]) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    for (r, c) in cols.iter().enumerate() {
        m[(r, *c)] = 1.0;
    }
    m
}

impl CyclicBasis {
    /// First basis: `[e₂]` is the cyclic shift with ones on the superdiagonal.
    pub fn e_basis() -> Self {
        Self {
            kind: MatrixKind::FourByFourE,
            units: [
                Matrix4::identity(),
                perm_matrix([1, 2, 3, 0]),
                perm_matrix([2, 3, 0, 1]),
                perm_matrix([3, 0, 1, 2]),
            ],
        }
    }

    /// Second basis `[e′₁]..[e′₄]`.
    pub fn eprime_basis() -> Self {
        Self {
            kind: MatrixKind::FourByFourEprime,
            units: [
                Matrix4::identity(),
                perm_matrix([2, 3, 1, 0]),
                perm_matrix([1, 0, 3, 2]),
                perm_matrix([3, 2, 0, 1]),
            ],
        }
    }

    pub fn for_kind(kind: MatrixKind) -> Result<Self> {
        match kind {
            MatrixKind::FourByFourE => Ok(Self::e_basis()),
            MatrixKind::FourByFourEprime => Ok(Self::eprime_basis()),
            MatrixKind::TwoByTwo => Err(invalid("the 2x2 representation has no cyclic [0,1] basis")),
        }
    }

    /// Coefficients `c` with `m = Σ cₙ[eₙ]`. The four units have disjoint
    /// supports, so each coefficient is read from row 0.
    pub fn decompose(&self, m: &Matrix4<f64>) -> [f64; 4] {
        let mut c = [0.0; 4];
        for (n, u) in self.units.iter().enumerate() {
            let col = (0..4).find(|&j| u[(0, j)] == 1.0).expect("permutation matrix");
            c[n] = m[(0, col)];
        }
        c
    }
}

/// Matrix image of a complex number.
///
/// The 2×2 map is `a + ib ↦ [[a, −b], [b, a]]`. The 4×4 maps use nonnegative
/// coefficients on the cyclic units: `a⁺[e₁] + b⁺[e₂] + a⁻[e₃] + b⁻[e₄]`, where
/// `x⁺ = max(x, 0)` and `x⁻ = max(−x, 0)`. Products of 4×4 images agree with
/// the image of the product after reduction by `[e₁] + [e₃] = 0`,
/// `[e₂] + [e₄] = 0`; see [`matrix_to_complex`].
pub fn complex_to_matrix(z: Complex, kind: MatrixKind) -> MatrixRep {
    let entries = match kind {
        MatrixKind::TwoByTwo => DMatrix::from_row_slice(2, 2, &[z.re, -z.im, z.im, z.re]),
        MatrixKind::FourByFourE | MatrixKind::FourByFourEprime => {
            let b = CyclicBasis::for_kind(kind).expect("4x4 kind");
            let m = b.units[0] * z.re.max(0.0)
                + b.units[1] * z.im.max(0.0)
                + b.units[2] * (-z.re).max(0.0)
                + b.units[3] * (-z.im).max(0.0);
            DMatrix::from_iterator(4, 4, m.iter().copied())
        }
    };
    MatrixRep { kind, entries }
}

/// Inverse of [`complex_to_matrix`], also valid for products of images.
pub fn matrix_to_complex(rep: &MatrixRep) -> Result<Complex> {
    match rep.kind {
        MatrixKind::TwoByTwo => {
            if rep.entries.shape() != (2, 2) {
                return Err(invalid("2x2 representation needs a 2x2 matrix"));
            }
            Ok(Complex::new(rep.entries[(0, 0)], rep.entries[(1, 0)]))
        }
        kind => {
            if rep.entries.shape() != (4, 4) {
                return Err(invalid("4x4 representation needs a 4x4 matrix"));
            }
            let b = CyclicBasis::for_kind(kind)?;
            let m = Matrix4::from_iterator(rep.entries.iter().copied());
            let c = b.decompose(&m);
            Ok(Complex::new(c[0] - c[2], c[1] - c[3]))
        }
    }
}

/// Matrix product of two representations of the same kind.
pub fn rep_mul(x: &MatrixRep, y: &MatrixRep) -> Result<MatrixRep> {
    if x.kind != y.kind {
        return Err(invalid("cannot multiply representations of different kinds"));
    }
    Ok(MatrixRep {
        kind: x.kind,
        entries: &x.entries * &y.entries,
    })
}

/// True iff `[e₂]² = [e₃]`, `[e₂]³ = [e₄]` and `[e₂]⁴ = [e₁]` hold exactly.
pub fn verify_cyclic_recurrence(basis: &CyclicBasis) -> Result<bool> {
    if basis.kind == MatrixKind::TwoByTwo {
        return Err(invalid("cyclic recurrence is defined for the 4x4 bases only"));
    }
    let e = &basis.units;
    let p2 = e[1] * e[1];
    let p3 = p2 * e[1];
    let p4 = p3 * e[1];
    Ok(p2 == e[2] && p3 == e[3] && p4 == e[0])
}

/// Search the 24 permutation matrices for `P` with `P·[eₙ]·Pᵀ = [e′ₙ]` for all n.
pub fn find_basis_isomorphism(from: &CyclicBasis, to: &CyclicBasis) -> Option<Matrix4<f64>> {
    let mut perms = Vec::with_capacity(24);
    permutations(&mut [0, 1, 2, 3], 0, &mut perms);
    perms.into_iter().map(perm_matrix).find(|p| {
        from.units
            .iter()
            .zip(&to.units)
            .all(|(a, b)| p * a * p.transpose() == *b)
    })
}

fn permutations(v: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
    if k == v.len() {
        out.push(*v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}
