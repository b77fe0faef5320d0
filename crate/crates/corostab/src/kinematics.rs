//! Deformation-gradient bookkeeping along time-parametrized paths:
//! B = F F^T, the left stretch V, the polar rotation R, velocity gradient,
//! stretching and vorticity, and the spin tensors of the named
//! corotational rates.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{
    apply_primary, Mat3, ScaleFunction, Skew3, Sym3, SymPd3, REPEATED_EIG_REL_TOL,
};

type MatFn = Arc<dyn Fn(f64) -> Mat3 + Send + Sync>;

/// Time-parametrized deformation gradient with analytic time derivative.
#[derive(Clone)]
pub struct DeformationPath {
    name: String,
    f: MatFn,
    fdot: MatFn,
}

impl DeformationPath {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64) -> Mat3 + Send + Sync + 'static,
        fdot: impl Fn(f64) -> Mat3 + Send + Sync + 'static,
    ) -> Self {
        DeformationPath {
            name: name.into(),
            f: Arc::new(f),
            fdot: Arc::new(fdot),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn f(&self, t: f64) -> Mat3 {
        (self.f)(t)
    }

    pub fn fdot(&self, t: f64) -> Mat3 {
        (self.fdot)(t)
    }

    /// Simple shear with rate gamma: F = 1 + gamma t e1 (x) e2.
    pub fn shear(gamma: f64) -> Self {
        DeformationPath::new(
            format!("shear(gamma={gamma})"),
            move |t| Mat3::new([[1.0, gamma * t, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
            move |_| Mat3::new([[0.0, gamma, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
        )
    }

    /// Uniaxial stretch lambda(t) = 1 + a t along the first axis.
    pub fn uniaxial(a: f64) -> Self {
        DeformationPath::new(
            format!("uniaxial(a={a})"),
            move |t| Mat3::diag(1.0 + a * t, 1.0, 1.0),
            move |_| Mat3::new([[a, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
        )
    }

    /// Triaxial stretch diag(1 + a_i t).
    pub fn triaxial(a: [f64; 3]) -> Self {
        DeformationPath::new(
            format!("triaxial(a={a:?})"),
            move |t| Mat3::diag(1.0 + a[0] * t, 1.0 + a[1] * t, 1.0 + a[2] * t),
            move |_| Mat3::diag(a[0], a[1], a[2]),
        )
    }

    /// Rigid rotation about the z-axis with angular rate omega.
    pub fn rotation_z(omega: f64) -> Self {
        DeformationPath::new(
            format!("rotation(omega={omega})"),
            move |t| Mat3::rotation_z(omega * t),
            move |t| {
                let (s, c) = (omega * t).sin_cos();
                Mat3::new([
                    [-omega * s, -omega * c, 0.0],
                    [omega * c, -omega * s, 0.0],
                    [0.0, 0.0, 0.0],
                ])
            },
        )
    }

    /// Rotation composed with simple shear: F(t) = Q(omega t) F_shear(t).
    pub fn rotated_shear(omega: f64, gamma: f64) -> Self {
        let shear = DeformationPath::shear(gamma);
        let rot = DeformationPath::rotation_z(omega);
        DeformationPath::new(
            format!("rotshear(omega={omega},gamma={gamma})"),
            {
                let (shear, rot) = (shear.clone(), rot.clone());
                move |t| rot.f(t) * shear.f(t)
            },
            move |t| rot.fdot(t) * shear.f(t) + rot.f(t) * shear.fdot(t),
        )
    }

    /// Static path F = 1.
    pub fn static_identity() -> Self {
        DeformationPath::new("static", |_| Mat3::identity(), |_| Mat3::zero())
    }

    /// The same motion watched by an observer rotated by a constant Q0.
    pub fn rotated_by(&self, q0: Mat3) -> Self {
        let base = self.clone();
        let base2 = self.clone();
        DeformationPath::new(
            format!("{}*const-rotation", self.name),
            move |t| q0 * base.f(t),
            move |t| q0 * base2.fdot(t),
        )
    }
}

/// Serializable path selector for configs and the CLI.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PathSpec {
    Shear { gamma: f64 },
    Uniaxial { a: f64 },
    Triaxial { a: [f64; 3] },
    Rotation { omega: f64 },
    Rotshear { omega: f64, gamma: f64 },
    Static,
}

impl PathSpec {
    pub fn build(&self) -> DeformationPath {
        match self {
            PathSpec::Shear { gamma } => DeformationPath::shear(*gamma),
            PathSpec::Uniaxial { a } => DeformationPath::uniaxial(*a),
            PathSpec::Triaxial { a } => DeformationPath::triaxial(*a),
            PathSpec::Rotation { omega } => DeformationPath::rotation_z(*omega),
            PathSpec::Rotshear { omega, gamma } => DeformationPath::rotated_shear(*omega, *gamma),
            PathSpec::Static => DeformationPath::static_identity(),
        }
    }
}

/// Kinematic quantities of a deformation state at one instant.
#[derive(Debug, Clone)]
pub struct KinematicState {
    pub f: Mat3,
    pub b: SymPd3,
    pub v: SymPd3,
    pub r: Mat3,
    pub l: Mat3,
    pub d: Sym3,
    pub w: Skew3,
}

/// Evaluates F, B = F F^T, V = sqrt(B), R = V^{-1} F, L = Fdot F^{-1},
/// D = sym L and W = skew L at time `t`.
pub fn state_at(path: &DeformationPath, t: f64) -> Result<KinematicState> {
    let f = path.f(t);
    if !f.is_finite() {
        return Err(Error::NonFinite);
    }
    let det = f.det();
    if det <= 1e-12 {
        return Err(Error::SingularDeformation { det });
    }
    let b = SymPd3::new(Sym3::sym_part(&(f * f.transpose())))?;
    let v = SymPd3::new(apply_primary(&b, ScaleFunction::Sqrt)?)?;
    let v_inv = v.inverse();
    let r = v_inv.to_mat() * f;
    let f_inv = f.try_inverse().ok_or(Error::SingularDeformation { det })?;
    let l = path.fdot(t) * f_inv;
    Ok(KinematicState {
        f,
        b,
        v,
        r,
        l,
        d: Sym3::sym_part(&l),
        w: Skew3::skew_part(&l),
    })
}

/// Central-difference approximation of the polar spin Rdot R^T, explicitly
/// skew-symmetrized. `dt` defaults to 1e-5 (1 + |t|).
pub fn polar_spin_fd(path: &DeformationPath, t: f64, dt: Option<f64>) -> Result<Skew3> {
    let dt = dt.unwrap_or(1e-5 * (1.0 + t.abs()));
    let r_plus = state_at(path, t + dt)?.r;
    let r_minus = state_at(path, t - dt)?.r;
    let r = state_at(path, t)?.r;
    let rdot = (r_plus - r_minus).scale(1.0 / (2.0 * dt));
    Ok(Skew3::skew_part(&(rdot * r.transpose())))
}

/// Spin of the logarithmic rate,
/// Omega_log = W + sum_{i != j} ((1 + r)/(1 - r) + 2/ln r) P_i D P_j with
/// r = lambda_i/lambda_j over the eigenprojections P_i of B. Terms with
/// eigenvalue ratio within 1e-8 of one are skipped (the coefficient
/// vanishes in that limit).
pub fn log_spin(b: &SymPd3, d: &Sym3, w: &Skew3) -> Skew3 {
    let vals = b.eigvals();
    let mut acc = Mat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let r = vals[i] / vals[j];
            if (r - 1.0).abs() < REPEATED_EIG_REL_TOL {
                continue;
            }
            let eps = r - 1.0;
            // the closed form cancels catastrophically as r -> 1; switch
            // to its expansion -eps/6 + eps^2/12 + O(eps^3) in that band
            let coeff = if eps.abs() < 1e-4 {
                eps * (eps / 12.0 - 1.0 / 6.0)
            } else {
                (1.0 + r) / (1.0 - r) + 2.0 / r.ln()
            };
            let term = b.eigenprojection(i) * d.to_mat() * b.eigenprojection(j);
            acc = acc + term.scale(coeff);
        }
    }
    *w + Skew3::skew_part(&acc)
}

/// || L B + B L^T - (Omega B - B Omega) - 2 V D V ||, the defect of the
/// polar-decomposition identity; vanishes when Omega is the polar spin.
pub fn dienes_residual(state: &KinematicState, omega: &Skew3) -> f64 {
    let b = state.b.to_mat();
    let lhs = state.l * b + b * state.l.transpose();
    let om = omega.to_mat();
    let spin_term = om * b - b * om;
    let vdv = Sym3::sandwich(state.v.sym(), &state.d).to_mat();
    (lhs - spin_term - vdv.scale(2.0)).norm()
}
