use crate::error::{Error, Result};
use crate::tensor::eig::eig_sym3;
use crate::tensor::mat3::Mat3;
use crate::tensor::scale::ScaleFunction;
use crate::tensor::sym::{Skew3, Sym3, SymPd3};

/// Relative spectral gap below which divided differences are replaced by
/// the midpoint derivative; the quotient loses all digits as the
/// eigenvalues coalesce.
pub const REPEATED_EIG_REL_TOL: f64 = 1e-8;

/// Primary matrix function: Q diag(f(lambda_i)) Q^T.
pub fn apply_primary(s: &SymPd3, f: ScaleFunction) -> Result<Sym3> {
    for l in s.eigvals() {
        if !f.defined_at(l) {
            return Err(Error::ScaleDomain {
                name: f.name(),
                lambda: l,
            });
        }
    }
    Ok(s.map_eigenvalues(|l| f.eval(l)))
}

/// Same spectral evaluation for a general symmetric argument, as long as
/// `f` is defined on its spectrum (e.g. exp of an indefinite tensor).
pub fn apply_primary_sym(s: &Sym3, f: ScaleFunction) -> Result<Sym3> {
    let (vals, q) = eig_sym3(s)?;
    for l in vals {
        if !f.defined_at(l) {
            return Err(Error::ScaleDomain {
                name: f.name(),
                lambda: l,
            });
        }
    }
    let d = Mat3::diag(f.eval(vals[0]), f.eval(vals[1]), f.eval(vals[2]));
    Ok(Sym3::sym_part(&(q * d * q.transpose())))
}

fn loewner_matrix(vals: [f64; 3], f: ScaleFunction) -> Result<[[f64; 3]; 3]> {
    for l in vals {
        if !f.defined_at(l) {
            return Err(Error::ScaleDomain {
                name: f.name(),
                lambda: l,
            });
        }
    }
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                m[i][j] = f.deriv(vals[i]);
            } else {
                let (li, lj) = (vals[i], vals[j]);
                let scale = 1.0f64.max(li.abs()).max(lj.abs());
                if (li - lj).abs() <= REPEATED_EIG_REL_TOL * scale {
                    m[i][j] = f.deriv(0.5 * (li + lj));
                } else {
                    m[i][j] = (f.eval(li) - f.eval(lj)) / (li - lj);
                }
            }
        }
    }
    Ok(m)
}

/// Fréchet derivative of the primary matrix function `f` at `s` applied to
/// the increment `h`, via the divided-difference (Loewner) matrix acting
/// as a Schur multiplier in the eigenbasis.
pub fn frechet_primary(s: &SymPd3, f: ScaleFunction, h: &Sym3) -> Result<Sym3> {
    let dd = loewner_matrix(s.eigvals(), f)?;
    let q = s.q();
    let ht = q.transpose() * h.to_mat() * *q;
    let mut schur = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            schur[i][j] = dd[i][j] * ht.m[i][j];
        }
    }
    let m = *q * Mat3::new(schur) * q.transpose();
    Ok(Sym3::sym_part(&m))
}

/// Entrywise minimum of L = X F + F X over the spectrum of `b`, where F is
/// the divided-difference matrix of log and X = diag of eigenvalues. This
/// is the coercivity constant in
/// <D_B log B . [B D + D B], D> >= c+ ||D||^2.
pub fn log_coercivity_constant(b: &SymPd3) -> f64 {
    let vals = b.eigvals();
    let mut cmin = f64::INFINITY;
    for i in 0..3 {
        for j in 0..3 {
            let (li, lj) = (vals[i], vals[j]);
            let fij = if i == j {
                1.0 / li
            } else if (li - lj).abs() <= REPEATED_EIG_REL_TOL * li.max(lj) {
                2.0 / (li + lj)
            } else {
                (li.ln() - lj.ln()) / (li - lj)
            };
            cmin = cmin.min((li + lj) * fij);
        }
    }
    cmin
}

/// Matrix exponential of a skew-symmetric tensor (Rodrigues formula);
/// returns a proper rotation.
pub fn exp_skew(w: &Skew3) -> Mat3 {
    let m = w.to_mat();
    // axis amplitude: |w| with w the axial vector
    let theta = (0.5 * m.inner(&m)).sqrt();
    if theta < 1e-300 {
        return Mat3::identity();
    }
    let k = m.scale(1.0 / theta);
    let k2 = k * k;
    Mat3::identity() + k.scale(theta.sin()) + k2.scale(1.0 - theta.cos())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spd(e: [f64; 6]) -> SymPd3 {
        SymPd3::new(Sym3::from_voigt(e)).unwrap()
    }

    #[test]
    fn log_of_diagonal() {
        let s = SymPd3::from_diag(std::f64::consts::E, 1.0, 1.0).unwrap();
        let l = apply_primary(&s, ScaleFunction::Log).unwrap();
        assert!((l - Sym3::diag(1.0, 0.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn exp_log_roundtrip() {
        let b = spd([2.3, 1.1, 0.7, 0.3, -0.2, 0.1]);
        let l = apply_primary(&b, ScaleFunction::Log).unwrap();
        let back = apply_primary_sym(&l, ScaleFunction::Exp).unwrap();
        assert!((back - *b.sym()).norm() < 1e-10 * b.sym().norm());
    }

    #[test]
    fn sqrt_squares_back() {
        let b = spd([2.0, 1.0, 1.0, 1.0, 0.0, 0.0]);
        let v = apply_primary(&b, ScaleFunction::Sqrt).unwrap();
        let v2 = Sym3::sym_part(&(v.to_mat() * v.to_mat()));
        assert!((v2 - *b.sym()).norm() < 1e-12);
    }

    #[test]
    fn log_undefined_on_spectrum() {
        // apply_primary_sym with log on an indefinite tensor must refuse
        let s = Sym3::diag(1.0, -1.0, 2.0);
        assert!(apply_primary_sym(&s, ScaleFunction::Log).is_err());
    }

    #[test]
    fn isotropy_of_primary_functions() {
        let b = spd([1.8, 1.2, 0.9, 0.25, -0.15, 0.05]);
        let q = {
            // some rotation
            let w = Skew3::from_entries(0.3, -0.8, 0.45);
            exp_skew(&w)
        };
        let rot = Sym3::sym_part(&(q * b.to_mat() * q.transpose()));
        let lhs = apply_primary(&SymPd3::new(rot).unwrap(), ScaleFunction::Log).unwrap();
        let inner = apply_primary(&b, ScaleFunction::Log).unwrap();
        let rhs = Sym3::sym_part(&(q * inner.to_mat() * q.transpose()));
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn frechet_log_hand_table() {
        // f = log, S = diag(1, 4, c), H = exchange in the (1,2) block:
        // divided difference (log 4 - log 1)/(4 - 1) = ln4 / 3
        let s = SymPd3::from_diag(1.0, 4.0, 2.0).unwrap();
        let h = Sym3::from_entries(0.0, 0.0, 0.0, 1.0, 0.0, 0.0);
        let g = frechet_primary(&s, ScaleFunction::Log, &h).unwrap();
        let expect = 4.0f64.ln() / 3.0;
        assert!((g.get(0, 1) - expect).abs() < 1e-14);
        assert!(g.get(0, 0).abs() < 1e-14 && g.get(2, 2).abs() < 1e-14);
    }

    #[test]
    fn frechet_log_commuting_is_binv_h() {
        let b = spd([3.0, 2.0, 0.5, 0.0, 0.0, 0.0]);
        // H diagonal commutes with diagonal B
        let h = Sym3::diag(0.4, -0.9, 1.3);
        let g = frechet_primary(&b, ScaleFunction::Log, &h).unwrap();
        let binv_h = Sym3::sym_part(&(b.inverse().to_mat() * h.to_mat()));
        assert!((g - binv_h).norm() < 1e-13);
    }

    #[test]
    fn frechet_zero_increment() {
        let b = spd([1.5, 1.0, 0.8, 0.1, 0.2, -0.05]);
        let g = frechet_primary(&b, ScaleFunction::Exp, &Sym3::zero()).unwrap();
        assert_eq!(g.norm(), 0.0);
    }

    #[test]
    fn frechet_near_repeated_eigenvalues_stays_finite() {
        let b = SymPd3::from_diag(2.0, 2.0 + 1e-12, 5.0).unwrap();
        let h = Sym3::from_entries(0.1, -0.2, 0.3, 0.5, 0.6, 0.7);
        let g = frechet_primary(&b, ScaleFunction::Log, &h).unwrap();
        assert!(g.is_finite());
        // FD cross-check
        let step = 1e-6;
        let plus = apply_primary(
            &SymPd3::new(*b.sym() + step * h).unwrap(),
            ScaleFunction::Log,
        )
        .unwrap();
        let minus = apply_primary(
            &SymPd3::new(*b.sym() - step * h).unwrap(),
            ScaleFunction::Log,
        )
        .unwrap();
        let fd = (1.0 / (2.0 * step)) * (plus - minus);
        assert!((g - fd).norm() < 1e-6 * g.norm().max(1.0));
    }

    #[test]
    fn rodrigues_rotation_about_z() {
        let w = Skew3::from_entries(-0.5, 0.0, 0.0); // generator of z-rotation
        let r = exp_skew(&w);
        let expect = Mat3::rotation_z(0.5);
        assert!((r - expect).norm() < 1e-14);
    }
}
