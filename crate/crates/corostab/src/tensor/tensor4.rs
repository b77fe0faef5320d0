//! Fourth-order operators on symmetric tensors in an orthonormal
//! six-dimensional representation.
//!
//! Internally every operator is a 6x6 matrix acting on Mandel-encoded
//! symmetric tensors: v = (S11, S22, S33, sqrt2 S12, sqrt2 S23, sqrt2 S31).
//! The sqrt2 weights make the encoding an isometry, so eigenvalues of the
//! (symmetrized) matrix are exactly the extrema of the quadratic form
//! <T.H, H> over unit H. Plain Voigt components (no weights) appear only
//! at I/O boundaries.

use crate::error::{Error, Result};
use crate::tensor::eig::jacobi_eig;
use crate::tensor::sym::Sym3;

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Isometric 6-vector encoding of a symmetric tensor. The components are
/// stored in this scaling internally, so the encoding is a copy and the
/// round trip through [`mandel_decode`] is exact.
pub fn mandel_encode(s: &Sym3) -> [f64; 6] {
    s.mandel()
}

/// Inverse of [`mandel_encode`]; exact for all inputs.
pub fn mandel_decode(v: &[f64; 6]) -> Sym3 {
    Sym3::from_mandel(*v)
}

/// The k-th orthonormal basis tensor of the encoding.
pub fn mandel_basis(k: usize) -> Sym3 {
    let mut v = [0.0; 6];
    v[k] = 1.0;
    mandel_decode(&v)
}

/// Provenance of an assembled operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorSource {
    Analytic,
    FiniteDifference,
}

/// Linear operator Sym(3) -> Sym(3) as a 6x6 matrix in the Mandel basis.
#[derive(Debug, Clone, Copy)]
pub struct Tensor4 {
    pub m: [[f64; 6]; 6],
    pub source: OperatorSource,
}

impl Tensor4 {
    pub fn zero() -> Self {
        Tensor4 {
            m: [[0.0; 6]; 6],
            source: OperatorSource::Analytic,
        }
    }

    pub fn identity() -> Self {
        let mut m = [[0.0; 6]; 6];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Tensor4 {
            m,
            source: OperatorSource::Analytic,
        }
    }

    /// Assembles the matrix of a linear action by applying it to the six
    /// orthonormal basis tensors.
    pub fn from_action(action: impl Fn(&Sym3) -> Sym3) -> Self {
        let mut m = [[0.0; 6]; 6];
        for k in 0..6 {
            let col = mandel_encode(&action(&mandel_basis(k)));
            for (i, row) in m.iter_mut().enumerate() {
                row[k] = col[i];
            }
        }
        Tensor4 {
            m,
            source: OperatorSource::Analytic,
        }
    }

    pub fn with_source(mut self, source: OperatorSource) -> Self {
        self.source = source;
        self
    }

    pub fn apply(&self, h: &Sym3) -> Sym3 {
        let v = mandel_encode(h);
        let mut out = [0.0; 6];
        for (i, row) in self.m.iter().enumerate() {
            out[i] = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        }
        mandel_decode(&out)
    }

    /// Composition self . other (apply `other` first).
    pub fn compose(&self, other: &Tensor4) -> Tensor4 {
        let mut m = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                let mut s = 0.0;
                for (k, other_row) in other.m.iter().enumerate() {
                    s += self.m[i][k] * other_row[j];
                }
                m[i][j] = s;
            }
        }
        let source = if self.source == OperatorSource::Analytic
            && other.source == OperatorSource::Analytic
        {
            OperatorSource::Analytic
        } else {
            OperatorSource::FiniteDifference
        };
        Tensor4 { m, source }
    }

    pub fn add(&self, other: &Tensor4) -> Tensor4 {
        let mut m = self.m;
        for i in 0..6 {
            for j in 0..6 {
                m[i][j] += other.m[i][j];
            }
        }
        Tensor4 {
            m,
            source: self.source,
        }
    }

    pub fn sub(&self, other: &Tensor4) -> Tensor4 {
        let mut m = self.m;
        for i in 0..6 {
            for j in 0..6 {
                m[i][j] -= other.m[i][j];
            }
        }
        Tensor4 {
            m,
            source: self.source,
        }
    }

    pub fn scaled(&self, s: f64) -> Tensor4 {
        let mut m = self.m;
        for row in &mut m {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        Tensor4 {
            m,
            source: self.source,
        }
    }

    pub fn transpose(&self) -> Tensor4 {
        let mut m = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                m[i][j] = self.m[j][i];
            }
        }
        Tensor4 {
            m,
            source: self.source,
        }
    }

    pub fn sym_part(&self) -> Tensor4 {
        let mut m = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                m[i][j] = 0.5 * (self.m[i][j] + self.m[j][i]);
            }
        }
        Tensor4 {
            m,
            source: self.source,
        }
    }

    /// Frobenius norm of the 6x6 matrix.
    pub fn norm(&self) -> f64 {
        self.m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Major-symmetry defect ||T - T^T||.
    pub fn asymmetry(&self) -> f64 {
        self.sub(&self.transpose()).norm()
    }

    /// Minimum eigenvalue of the symmetric part; positive iff the operator
    /// is positive definite as a quadratic form on Sym(3).
    pub fn sym_min_eig(&self) -> f64 {
        let s = self.sym_part();
        let (vals, _) = jacobi_eig::<6>(&s.m).expect("finite symmetric 6x6");
        vals.into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn det(&self) -> f64 {
        lu_decompose(&self.m).map_or(0.0, |(lu, _, sign)| {
            let mut d = sign;
            for (i, row) in lu.iter().enumerate() {
                d *= row[i];
            }
            d
        })
    }

    /// Inverse as a 6x6 matrix. Declared singular when the smallest LU
    /// pivot falls below 1e-12 of the largest, i.e. when |det| drops below
    /// 1e-12 of the scale the remaining pivots set; the error carries the
    /// determinant.
    pub fn invert(&self) -> Result<Tensor4> {
        let det = self.det();
        let (lu, perm, _) = lu_decompose(&self.m).ok_or(Error::SingularOperator { det })?;
        let mut pmin = f64::INFINITY;
        let mut pmax = 0.0f64;
        for (i, row) in lu.iter().enumerate() {
            pmin = pmin.min(row[i].abs());
            pmax = pmax.max(row[i].abs());
        }
        if pmax == 0.0 || pmin <= 1e-12 * pmax {
            return Err(Error::SingularOperator { det });
        }
        let mut inv = [[0.0; 6]; 6];
        for col in 0..6 {
            let mut e = [0.0; 6];
            e[col] = 1.0;
            let x = lu_solve(&lu, &perm, &e);
            for (i, row) in inv.iter_mut().enumerate() {
                row[col] = x[i];
            }
        }
        Ok(Tensor4 {
            m: inv,
            source: self.source,
        })
    }
}

/// LU with partial pivoting; returns combined LU factors, the permutation
/// and the pivot sign, or None on exact breakdown.
fn lu_decompose(a: &[[f64; 6]; 6]) -> Option<([[f64; 6]; 6], [usize; 6], f64)> {
    let mut lu = *a;
    let mut perm = [0usize; 6];
    for (i, p) in perm.iter_mut().enumerate() {
        *p = i;
    }
    let mut sign = 1.0;
    for k in 0..6 {
        let mut pivot = k;
        for i in (k + 1)..6 {
            if lu[i][k].abs() > lu[pivot][k].abs() {
                pivot = i;
            }
        }
        if lu[pivot][k] == 0.0 {
            // singular to working precision; keep going so det comes out 0
            continue;
        }
        if pivot != k {
            lu.swap(pivot, k);
            perm.swap(pivot, k);
            sign = -sign;
        }
        for i in (k + 1)..6 {
            lu[i][k] /= lu[k][k];
            for j in (k + 1)..6 {
                lu[i][j] -= lu[i][k] * lu[k][j];
            }
        }
    }
    Some((lu, perm, sign))
}

fn lu_solve(lu: &[[f64; 6]; 6], perm: &[usize; 6], b: &[f64; 6]) -> [f64; 6] {
    let mut x = [0.0; 6];
    for i in 0..6 {
        x[i] = b[perm[i]];
        for j in 0..i {
            x[i] -= lu[i][j] * x[j];
        }
    }
    for i in (0..6).rev() {
        for j in (i + 1)..6 {
            x[i] -= lu[i][j] * x[j];
        }
        x[i] /= lu[i][i];
    }
    x
}
