//! Corotational rate evaluation, the kinematic operators A(B) with
//! D°/Dt\[B\] = A(B).D, and the induced tangent stiffness tensors
//! H(sigma).D = D°/Dt\[sigma\] for the Zaremba-Jaumann, Green-Naghdi,
//! logarithmic and material-spin rates, plus the non-corotational
//! Oldroyd/Truesdell controls.

use std::fmt;
use std::sync::Arc;

use crate::constitutive::ConstitutiveLaw;
use crate::error::{Error, Result};
use crate::kinematics::{log_spin, polar_spin_fd, state_at, DeformationPath, KinematicState};
use crate::tensor::{frechet_primary, Mat3, ScaleFunction, Skew3, Sym3, SymPd3, Tensor4};

type InvariantFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Coefficients nu_k(I1, I2, I3) of the material-spin family
/// Omega = W + nu1 skew(B D) + nu2 skew(B^2 D) + nu3 skew(B^2 D B).
#[derive(Clone)]
pub struct SpinFamilyCoeffs {
    nu1: InvariantFn,
    nu2: InvariantFn,
    nu3: InvariantFn,
    label: String,
}

impl SpinFamilyCoeffs {
    pub fn new(
        label: impl Into<String>,
        nu1: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        nu2: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        nu3: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SpinFamilyCoeffs {
            nu1: Arc::new(nu1),
            nu2: Arc::new(nu2),
            nu3: Arc::new(nu3),
            label: label.into(),
        }
    }

    pub fn constant(nu1: f64, nu2: f64, nu3: f64) -> Self {
        SpinFamilyCoeffs::new(
            format!("spin:{nu1},{nu2},{nu3}"),
            move |_, _, _| nu1,
            move |_, _, _| nu2,
            move |_, _, _| nu3,
        )
    }

    pub fn eval(&self, b: &SymPd3) -> (f64, f64, f64) {
        let (i1, i2, i3) = b.invariants();
        (
            (self.nu1)(i1, i2, i3),
            (self.nu2)(i1, i2, i3),
            (self.nu3)(i1, i2, i3),
        )
    }
}

impl fmt::Debug for SpinFamilyCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// Objective stress-rate selector.
#[derive(Debug, Clone)]
pub enum RateKind {
    /// Zaremba-Jaumann (vorticity spin W).
    Zj,
    /// Green-Naghdi (polar spin Rdot R^T).
    Gn,
    /// Logarithmic rate (D is the rate of log V).
    Log,
    /// Material-spin family with invariant coefficients.
    MaterialSpin(SpinFamilyCoeffs),
    /// Non-corotational contravariant Oldroyd control.
    Oldroyd,
    /// Non-corotational Truesdell control.
    Truesdell,
}

impl RateKind {
    pub fn is_corotational(&self) -> bool {
        !matches!(self, RateKind::Oldroyd | RateKind::Truesdell)
    }

    pub fn label(&self) -> String {
        match self {
            RateKind::Zj => "zj".into(),
            RateKind::Gn => "gn".into(),
            RateKind::Log => "log".into(),
            RateKind::MaterialSpin(c) => c.label.clone(),
            RateKind::Oldroyd => "oldroyd".into(),
            RateKind::Truesdell => "truesdell".into(),
        }
    }

    /// Parses "zj" | "gn" | "log" | "spin:nu1,nu2,nu3" | "oldroyd" |
    /// "truesdell".
    pub fn parse(s: &str) -> Result<RateKind> {
        match s {
            "zj" => Ok(RateKind::Zj),
            "gn" => Ok(RateKind::Gn),
            "log" => Ok(RateKind::Log),
            "oldroyd" => Ok(RateKind::Oldroyd),
            "truesdell" => Ok(RateKind::Truesdell),
            other => {
                if let Some(rest) = other.strip_prefix("spin:") {
                    let parts: Vec<&str> = rest.split(',').collect();
                    if parts.len() != 3 {
                        return Err(Error::InvalidConfig(format!(
                            "spin rate needs three coefficients, got `{other}`"
                        )));
                    }
                    let mut nu = [0.0f64; 3];
                    for (slot, p) in nu.iter_mut().zip(parts.iter()) {
                        *slot = p.trim().parse().map_err(|_| {
                            Error::InvalidConfig(format!("bad spin coefficient `{p}`"))
                        })?;
                    }
                    Ok(RateKind::MaterialSpin(SpinFamilyCoeffs::constant(
                        nu[0], nu[1], nu[2],
                    )))
                } else {
                    Err(Error::InvalidConfig(format!("unknown rate `{other}`")))
                }
            }
        }
    }
}

/// Spin tensor of a corotational rate at the given kinematic state; the
/// Green-Naghdi spin is obtained by finite differencing the polar
/// rotation along the path.
pub fn spin_of(
    kind: &RateKind,
    state: &KinematicState,
    path: &DeformationPath,
    t: f64,
) -> Result<Skew3> {
    match kind {
        RateKind::Zj => Ok(state.w),
        RateKind::Gn => polar_spin_fd(path, t, None),
        RateKind::Log => Ok(log_spin(&state.b, &state.d, &state.w)),
        RateKind::MaterialSpin(coeffs) => {
            let (nu1, nu2, nu3) = coeffs.eval(&state.b);
            let b = state.b.to_mat();
            let d = state.d.to_mat();
            let b2 = b * b;
            let ups = Skew3::skew_part(&(b * d)).scaled(nu1)
                + Skew3::skew_part(&(b2 * d)).scaled(nu2)
                + Skew3::skew_part(&(b2 * d * b)).scaled(nu3);
            Ok(state.w + ups)
        }
        RateKind::Oldroyd | RateKind::Truesdell => Err(Error::UnsupportedRate {
            rate: kind.label(),
            what: "not corotational: no spin tensor",
        }),
    }
}

/// Corotational rate of a matrix-valued signal,
/// D°/Dt\[S\] = Sdot - Omega S + S Omega, with Sdot by central differences.
pub fn corotational_rate_mat(
    signal: impl Fn(f64) -> Mat3,
    omega: impl Fn(f64) -> Skew3,
    t: f64,
    dt: Option<f64>,
) -> Mat3 {
    let dt = dt.unwrap_or(1e-6);
    let sdot = (signal(t + dt) - signal(t - dt)).scale(1.0 / (2.0 * dt));
    let s = signal(t);
    let om = omega(t).to_mat();
    sdot - om * s + s * om
}

/// Corotational rate of a symmetric signal.
pub fn corotational_rate(
    signal: impl Fn(f64) -> Sym3,
    omega: impl Fn(f64) -> Skew3,
    t: f64,
    dt: Option<f64>,
) -> Sym3 {
    let m = corotational_rate_mat(|tt| signal(tt).to_mat(), omega, t, dt);
    Sym3::sym_part(&m)
}

/// The kinematic operator A(B) with D°/Dt\[B\] = A(B).D.
///
/// ZJ: D -> B D + D B. GN: D -> 2 V D V. Log: 2 (D_B log B)^{-1}.
/// Material spin: B D + D B plus the three skew-commutator terms.
pub fn a_operator(b: &SymPd3, kind: &RateKind) -> Result<Tensor4> {
    match kind {
        RateKind::Zj => Ok(Tensor4::from_action(|d| Sym3::anticommutator(b.sym(), d))),
        RateKind::Gn => {
            let v = SymPd3::new(b.map_eigenvalues(f64::sqrt))?;
            Ok(Tensor4::from_action(|d| {
                Sym3::sandwich(v.sym(), d).scaled(2.0)
            }))
        }
        RateKind::Log => {
            let dlog = Tensor4::from_action(|h| {
                frechet_primary(b, ScaleFunction::Log, h).expect("B is SPD")
            });
            Ok(dlog.invert()?.scaled(2.0))
        }
        RateKind::MaterialSpin(coeffs) => {
            let (nu1, nu2, nu3) = coeffs.eval(b);
            let bm = b.to_mat();
            let b2 = bm * bm;
            Ok(Tensor4::from_action(move |d| {
                let dm = d.to_mat();
                let mut acc = Sym3::anticommutator(b.sym(), d).to_mat();
                for (nu, skew) in [
                    (nu1, Skew3::skew_part(&(bm * dm))),
                    (nu2, Skew3::skew_part(&(b2 * dm))),
                    (nu3, Skew3::skew_part(&(b2 * dm * bm))),
                ] {
                    if nu != 0.0 {
                        let s = skew.to_mat();
                        acc = acc + (bm * s - s * bm).scale(nu);
                    }
                }
                Sym3::sym_part(&acc)
            }))
        }
        RateKind::Oldroyd | RateKind::Truesdell => Err(Error::UnsupportedRate {
            rate: kind.label(),
            what: "no material-spin A operator",
        }),
    }
}

/// Induced tangent stiffness H(sigma) with H.D = D°/Dt\[sigma\], assembled
/// as D_B sigma(B) o A(B) for corotational kinds. The Oldroyd control is
/// H_ZJ.D - (D sigma + sigma D) and Truesdell adds sigma tr(D).
pub fn induced_stiffness(law: &ConstitutiveLaw, b: &SymPd3, kind: &RateKind) -> Result<Tensor4> {
    match kind {
        RateKind::Oldroyd | RateKind::Truesdell => {
            let zj = induced_stiffness(law, b, &RateKind::Zj)?;
            let sigma = law.sigma(b);
            let correction = Tensor4::from_action(|d| {
                let mut out = -Sym3::anticommutator(&sigma, d);
                if matches!(kind, RateKind::Truesdell) {
                    out = out + d.trace() * sigma;
                }
                out
            });
            Ok(zj.add(&correction))
        }
        _ => {
            let dsig = law.dsigma_op(b)?;
            let a = a_operator(b, kind)?;
            Ok(dsig.compose(&a))
        }
    }
}

/// || Omega sigma(B) - sigma(B) Omega - D_B sigma(B).[Omega B - B Omega] ||,
/// the defect of the spin identity valid for any isotropic tensor function.
pub fn noll_spin_identity_residual(
    law: &ConstitutiveLaw,
    b: &SymPd3,
    omega: &Skew3,
) -> Result<f64> {
    let sigma = law.sigma(b);
    let lhs = Sym3::spin_bracket(omega, &sigma);
    let increment = Sym3::spin_bracket(omega, b.sym());
    let rhs = law.dsigma_apply(b, &increment)?;
    Ok((lhs - rhs).norm())
}

fn truesdell_rate_mat(signal: &impl Fn(f64) -> Mat3, state: &KinematicState, t: f64) -> Mat3 {
    let dt = 1e-6;
    let sdot = (signal(t + dt) - signal(t - dt)).scale(1.0 / (2.0 * dt));
    let s = signal(t);
    let l = state.l;
    sdot - l * s - s * l.transpose() + s.scale(state.d.trace())
}

/// Chain-rule defect along a path:
/// || D°[sigma(B(t))] - D_{log B} sigma_hat . D°[log B(t)] || for
/// corotational kinds, and the analogous
/// || D#\[sigma(B)\] - D_B sigma . D#\[B\] || for the Truesdell control.
pub fn chain_rule_residual(
    law: &ConstitutiveLaw,
    path: &DeformationPath,
    t: f64,
    kind: &RateKind,
) -> Result<f64> {
    let state = state_at(path, t)?;
    match kind {
        RateKind::Oldroyd | RateKind::Truesdell => {
            if matches!(kind, RateKind::Oldroyd) {
                return Err(Error::UnsupportedRate {
                    rate: kind.label(),
                    what: "chain-rule control implemented for truesdell only",
                });
            }
            let sig = |tt: f64| {
                let st = state_at(path, tt).unwrap();
                law.sigma(&st.b).to_mat()
            };
            let bsig = |tt: f64| state_at(path, tt).unwrap().b.to_mat();
            let lhs = truesdell_rate_mat(&sig, &state, t);
            let db_rate = truesdell_rate_mat(&bsig, &state, t);
            let rhs = law.dsigma_apply(&state.b, &Sym3::from_mat_symmetric(&db_rate))?;
            Ok((lhs - rhs.to_mat()).norm())
        }
        _ => {
            let omega = spin_of(kind, &state, path, t)?;
            let om = move |_tt: f64| omega;
            let sig = |tt: f64| {
                let st = state_at(path, tt).unwrap();
                law.sigma(&st.b)
            };
            let logb = |tt: f64| {
                let st = state_at(path, tt).unwrap();
                st.b.map_eigenvalues(f64::ln)
            };
            let lhs = corotational_rate(sig, om, t, None);
            let log_rate = corotational_rate(logb, om, t, None);
            let jac = crate::constitutive::sigma_hat_jacobian(law, &state.b)?;
            Ok((lhs - jac.apply(&log_rate)).norm())
        }
    }
}

/// Product-rule defect matrix
/// D°\[sigma1 sigma2\] - D°\[sigma1\] sigma2 - sigma1 D°\[sigma2\]
/// evaluated by finite differences along the path. Vanishes for
/// corotational rates; for the Truesdell control it equals
/// sigma1 (2D - tr(D) 1) sigma2.
pub fn product_rule_defect(
    law1: &ConstitutiveLaw,
    law2: &ConstitutiveLaw,
    path: &DeformationPath,
    t: f64,
    kind: &RateKind,
) -> Result<Mat3> {
    let state = state_at(path, t)?;
    let s1 = |tt: f64| {
        let st = state_at(path, tt).unwrap();
        law1.sigma(&st.b).to_mat()
    };
    let s2 = |tt: f64| {
        let st = state_at(path, tt).unwrap();
        law2.sigma(&st.b).to_mat()
    };
    let prod = |tt: f64| s1(tt) * s2(tt);

    let (r_prod, r1, r2) = match kind {
        RateKind::Truesdell => (
            truesdell_rate_mat(&prod, &state, t),
            truesdell_rate_mat(&s1, &state, t),
            truesdell_rate_mat(&s2, &state, t),
        ),
        RateKind::Oldroyd => {
            return Err(Error::UnsupportedRate {
                rate: kind.label(),
                what: "product-rule control implemented for truesdell only",
            })
        }
        _ => {
            let omega = spin_of(kind, &state, path, t)?;
            let om = move |_tt: f64| omega;
            (
                corotational_rate_mat(prod, om, t, None),
                corotational_rate_mat(s1, om, t, None),
                corotational_rate_mat(s2, om, t, None),
            )
        }
    };
    Ok(r_prod - r1 * s2(t) - s1(t) * r2)
}

/// Norm of [`product_rule_defect`].
pub fn product_rule_residual(
    law1: &ConstitutiveLaw,
    law2: &ConstitutiveLaw,
    path: &DeformationPath,
    t: f64,
    kind: &RateKind,
) -> Result<f64> {
    Ok(product_rule_defect(law1, law2, path, t, kind)?.norm())
}
