use crate::error::{Error, Result};
use crate::tensor::mat3::Mat3;
use crate::tensor::sym::Sym3;

/// Sweep cap for the cyclic Jacobi iteration. Convergence is quadratic;
/// 3x3 and 6x6 symmetric matrices settle in well under ten sweeps.
pub const MAX_JACOBI_SWEEPS: usize = 64;

/// Cyclic Jacobi eigensolver for small dense symmetric matrices.
///
/// Returns unsorted eigenvalues and the accumulated rotation `V` with
/// `A = V diag(vals) V^T`.
pub fn jacobi_eig<const N: usize>(a: &[[f64; N]; N]) -> Result<([f64; N], [[f64; N]; N])> {
    if a.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut a = *a;
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let frob: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 {
        return Ok(([0.0; N], v));
    }
    let tol = 1e-15 * frob;

    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..N {
            for q in (p + 1)..N {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() <= tol {
            let mut vals = [0.0; N];
            for (i, row) in a.iter().enumerate() {
                vals[i] = row[i];
            }
            return Ok((vals, v));
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                // classical Jacobi rotation angle
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::EigNoConvergence {
        sweeps: MAX_JACOBI_SWEEPS,
    })
}

/// Eigendecomposition of a symmetric 3x3 tensor.
///
/// Eigenvalues come back sorted descending. Each eigenvector is normalized
/// with a deterministic sign: its largest-magnitude component is positive
/// (first such component on ties).
pub fn eig_sym3(s: &Sym3) -> Result<([f64; 3], Mat3)> {
    let full = s.to_mat().m;
    let (vals, vecs) = jacobi_eig::<3>(&full)?;

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());

    let mut sorted_vals = [0.0; 3];
    let mut q = [[0.0; 3]; 3];
    for (col, &idx) in order.iter().enumerate() {
        sorted_vals[col] = vals[idx];
        let mut vec = [vecs[0][idx], vecs[1][idx], vecs[2][idx]];
        let mut imax = 0;
        for k in 1..3 {
            if vec[k].abs() > vec[imax].abs() {
                imax = k;
            }
        }
        if vec[imax] < 0.0 {
            for v in vec.iter_mut() {
                *v = -*v;
            }
        }
        for k in 0..3 {
            q[k][col] = vec[k];
        }
    }
    Ok((sorted_vals, Mat3::new(q)))
}
