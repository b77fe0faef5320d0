use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tensor::eig::eig_sym3;
use crate::tensor::mat3::Mat3;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Symmetric 3x3 tensor. The six independent entries are stored in the
/// orthonormal (Mandel) scaling — off-diagonals carry a factor sqrt2 — in
/// the component order (11, 22, 33, 12, 23, 31). This makes the 6-vector
/// encoding a plain copy and the Frobenius inner product a plain dot
/// product; the unscaled component view is available through `voigt`,
/// `get` and `to_mat`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym3 {
    e: [f64; 6],
}

impl Sym3 {
    pub fn from_entries(e11: f64, e22: f64, e33: f64, e12: f64, e23: f64, e31: f64) -> Self {
        Sym3 {
            e: [e11, e22, e33, SQRT_2 * e12, SQRT_2 * e23, SQRT_2 * e31],
        }
    }

    /// From plain (unscaled) components in the order (11, 22, 33, 12, 23, 31).
    pub fn from_voigt(e: [f64; 6]) -> Self {
        Sym3::from_entries(e[0], e[1], e[2], e[3], e[4], e[5])
    }

    /// Plain (unscaled) components in the order (11, 22, 33, 12, 23, 31).
    pub fn voigt(&self) -> [f64; 6] {
        [
            self.e[0],
            self.e[1],
            self.e[2],
            self.e[3] / SQRT_2,
            self.e[4] / SQRT_2,
            self.e[5] / SQRT_2,
        ]
    }

    pub(crate) fn from_mandel(e: [f64; 6]) -> Self {
        Sym3 { e }
    }

    pub(crate) fn mandel(&self) -> [f64; 6] {
        self.e
    }

    pub fn zero() -> Self {
        Sym3 { e: [0.0; 6] }
    }

    pub fn identity() -> Self {
        Sym3::diag(1.0, 1.0, 1.0)
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        Sym3 {
            e: [a, b, c, 0.0, 0.0, 0.0],
        }
    }

    /// Symmetric part of an arbitrary matrix.
    pub fn sym_part(m: &Mat3) -> Self {
        let a = &m.m;
        Sym3::from_entries(
            a[0][0],
            a[1][1],
            a[2][2],
            0.5 * (a[0][1] + a[1][0]),
            0.5 * (a[1][2] + a[2][1]),
            0.5 * (a[2][0] + a[0][2]),
        )
    }

    /// Reinterprets a matrix that is symmetric up to roundoff.
    pub fn from_mat_symmetric(m: &Mat3) -> Self {
        Sym3::sym_part(m)
    }

    pub fn to_mat(&self) -> Mat3 {
        let [a, b, c] = [self.e[0], self.e[1], self.e[2]];
        let d = self.e[3] / SQRT_2;
        let e = self.e[4] / SQRT_2;
        let f = self.e[5] / SQRT_2;
        Mat3::new([[a, d, f], [d, b, e], [f, e, c]])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (0, 0) => self.e[0],
            (1, 1) => self.e[1],
            (2, 2) => self.e[2],
            (0, 1) | (1, 0) => self.e[3] / SQRT_2,
            (1, 2) | (2, 1) => self.e[4] / SQRT_2,
            (2, 0) | (0, 2) => self.e[5] / SQRT_2,
            _ => panic!("index out of range"),
        }
    }

    pub fn trace(&self) -> f64 {
        self.e[0] + self.e[1] + self.e[2]
    }

    /// Frobenius inner product; equals the full nine-entry sum.
    pub fn inner(&self, other: &Sym3) -> f64 {
        self.e.iter().zip(other.e.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn det(&self) -> f64 {
        self.to_mat().det()
    }

    pub fn dev(&self) -> Sym3 {
        let p = self.trace() / 3.0;
        let mut e = self.e;
        e[0] -= p;
        e[1] -= p;
        e[2] -= p;
        Sym3 { e }
    }

    pub fn scaled(&self, s: f64) -> Sym3 {
        let mut e = self.e;
        for v in e.iter_mut() {
            *v *= s;
        }
        Sym3 { e }
    }

    pub fn is_finite(&self) -> bool {
        self.e.iter().all(|v| v.is_finite())
    }

    /// A B + B A, symmetric for symmetric arguments.
    pub fn anticommutator(a: &Sym3, b: &Sym3) -> Sym3 {
        let ab = a.to_mat() * b.to_mat();
        let m = ab + ab.transpose();
        Sym3::sym_part(&m)
    }

    /// V D V for symmetric V, D.
    pub fn sandwich(v: &Sym3, d: &Sym3) -> Sym3 {
        let m = v.to_mat() * d.to_mat() * v.to_mat();
        Sym3::sym_part(&m)
    }

    /// Omega S - S Omega; symmetric for skew Omega and symmetric S.
    pub fn spin_bracket(omega: &Skew3, s: &Sym3) -> Sym3 {
        let w = omega.to_mat();
        let m = w * s.to_mat() - s.to_mat() * w;
        Sym3::sym_part(&m)
    }
}

impl Add for Sym3 {
    type Output = Sym3;
    fn add(self, rhs: Sym3) -> Sym3 {
        let mut e = self.e;
        for (a, b) in e.iter_mut().zip(rhs.e.iter()) {
            *a += b;
        }
        Sym3 { e }
    }
}

impl Sub for Sym3 {
    type Output = Sym3;
    fn sub(self, rhs: Sym3) -> Sym3 {
        let mut e = self.e;
        for (a, b) in e.iter_mut().zip(rhs.e.iter()) {
            *a -= b;
        }
        Sym3 { e }
    }
}

impl Mul<Sym3> for f64 {
    type Output = Sym3;
    fn mul(self, rhs: Sym3) -> Sym3 {
        rhs.scaled(self)
    }
}

impl Neg for Sym3 {
    type Output = Sym3;
    fn neg(self) -> Sym3 {
        self.scaled(-1.0)
    }
}

// serialized as the plain component array (11, 22, 33, 12, 23, 31)
impl Serialize for Sym3 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.voigt().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Sym3 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let e = <[f64; 6]>::deserialize(deserializer)?;
        if e.iter().any(|v| !v.is_finite()) {
            return Err(D::Error::custom("non-finite tensor entry"));
        }
        Ok(Sym3::from_voigt(e))
    }
}

/// Skew-symmetric 3x3 tensor stored by its three independent entries
/// (12, 23, 31); spins carry units of inverse time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Skew3 {
    // (w12, w23, w31) with full matrix [[0, w12, -w31], [-w12, 0, w23], [w31, -w23, 0]]
    w: [f64; 3],
}

impl Skew3 {
    pub fn from_entries(w12: f64, w23: f64, w31: f64) -> Self {
        Skew3 { w: [w12, w23, w31] }
    }

    pub fn zero() -> Self {
        Skew3 { w: [0.0; 3] }
    }

    /// Skew part of an arbitrary matrix.
    pub fn skew_part(m: &Mat3) -> Self {
        let a = &m.m;
        Skew3::from_entries(
            0.5 * (a[0][1] - a[1][0]),
            0.5 * (a[1][2] - a[2][1]),
            0.5 * (a[2][0] - a[0][2]),
        )
    }

    pub fn to_mat(&self) -> Mat3 {
        let [w12, w23, w31] = self.w;
        Mat3::new([[0.0, w12, -w31], [-w12, 0.0, w23], [w31, -w23, 0.0]])
    }

    pub fn norm(&self) -> f64 {
        (2.0 * (self.w[0] * self.w[0] + self.w[1] * self.w[1] + self.w[2] * self.w[2])).sqrt()
    }

    pub fn scaled(&self, s: f64) -> Skew3 {
        Skew3 {
            w: [self.w[0] * s, self.w[1] * s, self.w[2] * s],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.w.iter().all(|v| v.is_finite())
    }
}

impl Add for Skew3 {
    type Output = Skew3;
    fn add(self, rhs: Skew3) -> Skew3 {
        Skew3 {
            w: [
                self.w[0] + rhs.w[0],
                self.w[1] + rhs.w[1],
                self.w[2] + rhs.w[2],
            ],
        }
    }
}

impl Sub for Skew3 {
    type Output = Skew3;
    fn sub(self, rhs: Skew3) -> Skew3 {
        Skew3 {
            w: [
                self.w[0] - rhs.w[0],
                self.w[1] - rhs.w[1],
                self.w[2] - rhs.w[2],
            ],
        }
    }
}

impl Mul<Skew3> for f64 {
    type Output = Skew3;
    fn mul(self, rhs: Skew3) -> Skew3 {
        rhs.scaled(self)
    }
}

/// Relative eigenvalue floor below which a symmetric tensor is rejected
/// as not positive definite.
pub const SPD_EIG_FLOOR: f64 = 1e-14;

/// Symmetric positive-definite 3x3 tensor with its eigendecomposition
/// cached at construction. Eigenvalues are sorted descending and `q`
/// satisfies `q diag(eigvals) q^T = s` to roundoff.
#[derive(Debug, Clone)]
pub struct SymPd3 {
    s: Sym3,
    eigvals: [f64; 3],
    q: Mat3,
}

impl SymPd3 {
    pub fn new(s: Sym3) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::NonFinite);
        }
        let (eigvals, q) = eig_sym3(&s)?;
        let lambda_max = eigvals[0];
        let lambda_min = eigvals[2];
        let floor = SPD_EIG_FLOOR * lambda_max.max(0.0);
        if lambda_min.is_nan() || lambda_min <= floor || lambda_max <= 0.0 {
            return Err(Error::NotPositiveDefinite {
                lambda_min,
                lambda_max,
            });
        }
        Ok(SymPd3 { s, eigvals, q })
    }

    pub fn from_diag(a: f64, b: f64, c: f64) -> Result<Self> {
        SymPd3::new(Sym3::diag(a, b, c))
    }

    pub fn identity() -> Self {
        SymPd3::new(Sym3::identity()).expect("identity is SPD")
    }

    pub fn sym(&self) -> &Sym3 {
        &self.s
    }

    pub fn to_mat(&self) -> Mat3 {
        self.s.to_mat()
    }

    /// Eigenvalues sorted descending.
    pub fn eigvals(&self) -> [f64; 3] {
        self.eigvals
    }

    /// Orthonormal eigenvector matrix (columns follow `eigvals`).
    pub fn q(&self) -> &Mat3 {
        &self.q
    }

    /// Eigenprojection q_i q_i^T onto the i-th eigdirection.
    pub fn eigenprojection(&self, i: usize) -> Mat3 {
        let v = [self.q.m[0][i], self.q.m[1][i], self.q.m[2][i]];
        Mat3::outer(v, v)
    }

    /// Inverse through the cached spectrum.
    pub fn inverse(&self) -> Sym3 {
        self.map_eigenvalues(|l| 1.0 / l)
    }

    /// Principal invariants (tr B, tr Cof B, det B).
    pub fn invariants(&self) -> (f64, f64, f64) {
        let [a, b, c] = self.eigvals;
        (a + b + c, a * b + b * c + c * a, a * b * c)
    }

    pub fn det(&self) -> f64 {
        let [a, b, c] = self.eigvals;
        a * b * c
    }

    /// Q diag(f(lambda_i)) Q^T.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> Sym3 {
        let d = Mat3::diag(f(self.eigvals[0]), f(self.eigvals[1]), f(self.eigvals[2]));
        Sym3::sym_part(&(self.q * d * self.q.transpose()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_product_matches_full_sum() {
        let a = Sym3::from_entries(1.0, -2.0, 0.5, 0.3, -0.7, 0.2);
        let b = Sym3::from_entries(0.4, 1.1, -0.6, -0.2, 0.9, 0.5);
        let full = a.to_mat().inner(&b.to_mat());
        assert!((a.inner(&b) - full).abs() < 1e-15);
    }

    #[test]
    fn skew_is_negative_transpose() {
        let w = Skew3::from_entries(0.3, -1.2, 0.7);
        let m = w.to_mat();
        assert!((m + m.transpose()).norm() == 0.0);
    }

    #[test]
    fn spd_constructor_rejects_indefinite() {
        assert!(SymPd3::new(Sym3::diag(1.0, 1.0, -0.1)).is_err());
        assert!(SymPd3::new(Sym3::diag(1.0, 1.0, 0.0)).is_err());
        assert!(SymPd3::new(Sym3::diag(3.0, 2.0, 1.0)).is_ok());
    }

    #[test]
    fn spd_reconstruction() {
        let s = Sym3::from_entries(2.0, 1.5, 1.0, 0.2, -0.1, 0.3);
        let b = SymPd3::new(s).unwrap();
        let d = Mat3::diag(b.eigvals()[0], b.eigvals()[1], b.eigvals()[2]);
        let rec = *b.q() * d * b.q().transpose();
        assert!((rec - s.to_mat()).norm() < 1e-12 * s.norm());
        let qqt = *b.q() * b.q().transpose();
        assert!((qqt - Mat3::identity()).norm() < 1e-12);
    }

    #[test]
    fn inverse_via_spectrum() {
        let b = SymPd3::new(Sym3::from_entries(2.0, 1.0, 3.0, 0.4, 0.1, -0.2)).unwrap();
        let prod = b.to_mat() * b.inverse().to_mat();
        assert!((prod - Mat3::identity()).norm() < 1e-12);
    }
}
