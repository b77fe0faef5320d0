//! Registry of isotropic Cauchy-elastic laws B -> sigma(B), each with an
//! analytic Fréchet derivative where one is known, plus a central-difference
//! derivative oracle.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tensor::{
    frechet_primary, mandel_basis, OperatorSource, ScaleFunction, Sym3, SymPd3, Tensor4,
};

type SigmaFn = Arc<dyn Fn(&SymPd3) -> Sym3 + Send + Sync>;
type DSigmaFn = Arc<dyn Fn(&SymPd3, &Sym3) -> Sym3 + Send + Sync>;

/// Named isotropic constitutive law with parameter record.
#[derive(Clone)]
pub struct ConstitutiveLaw {
    name: String,
    params: BTreeMap<String, f64>,
    sigma: SigmaFn,
    dsigma: Option<DSigmaFn>,
    claims_invertible: bool,
}

impl ConstitutiveLaw {
    pub fn new(
        name: impl Into<String>,
        params: BTreeMap<String, f64>,
        sigma: impl Fn(&SymPd3) -> Sym3 + Send + Sync + 'static,
        dsigma: Option<DSigmaFn>,
        claims_invertible: bool,
    ) -> Self {
        ConstitutiveLaw {
            name: name.into(),
            params,
            sigma: Arc::new(sigma),
            dsigma,
            claims_invertible,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn claims_invertible(&self) -> bool {
        self.claims_invertible
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.dsigma.is_some()
    }

    pub fn sigma(&self, b: &SymPd3) -> Sym3 {
        (self.sigma)(b)
    }

    /// Directional derivative D_B sigma(B).H, analytic when registered and
    /// otherwise by central differences with an SPD-preserving step.
    pub fn dsigma_apply(&self, b: &SymPd3, h: &Sym3) -> Result<Sym3> {
        match &self.dsigma {
            Some(d) => Ok(d(b, h)),
            None => directional_fd(self, b, h),
        }
    }

    /// D_B sigma(B) assembled in the Mandel basis.
    pub fn dsigma_op(&self, b: &SymPd3) -> Result<Tensor4> {
        let mut t = Tensor4::zero();
        for k in 0..6 {
            let col = self.dsigma_apply(b, &mandel_basis(k))?;
            let enc = crate::tensor::mandel_encode(&col);
            for (i, row) in t.m.iter_mut().enumerate() {
                row[k] = enc[i];
            }
        }
        t.source = if self.dsigma.is_some() {
            OperatorSource::Analytic
        } else {
            OperatorSource::FiniteDifference
        };
        Ok(t)
    }
}

impl std::fmt::Debug for ConstitutiveLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConstitutiveLaw")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("analytic", &self.dsigma.is_some())
            .field("claims_invertible", &self.claims_invertible)
            .finish()
    }
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn get(p: &BTreeMap<String, f64>, key: &str) -> f64 {
    p[key]
}

/// mu (B - 1); physically linear, strictly monotone in B, not invertible
/// as a map onto Sym(3).
pub fn linear_finger(mu: f64) -> ConstitutiveLaw {
    ConstitutiveLaw::new(
        "linear-finger",
        params(&[("mu", mu)]),
        move |b| mu * (*b.sym() - Sym3::identity()),
        Some(Arc::new(move |_b, h| mu * *h)),
        false,
    )
}

/// mu/2 (B - B^{-1}) + lambda/2 tr(log B) 1; invertible and stable.
pub fn mu_b_binv(mu: f64, lambda: f64) -> ConstitutiveLaw {
    ConstitutiveLaw::new(
        "mu-b-binv",
        params(&[("mu", mu), ("lambda", lambda)]),
        move |b| {
            let binv = b.inverse();
            let tr_log = b.det().ln();
            0.5 * mu * (*b.sym() - binv) + (0.5 * lambda * tr_log) * Sym3::identity()
        },
        Some(Arc::new(move |b, h| {
            let binv = b.inverse();
            let bhb = Sym3::sandwich(&binv, h);
            0.5 * mu * (*h + bhb) + (0.5 * lambda * binv.inner(h)) * Sym3::identity()
        })),
        true,
    )
}

/// Hencky law 2 mu log V + lambda tr(log V) 1, written in B as
/// mu log B + lambda/2 tr(log B) 1.
pub fn hencky(mu: f64, lambda: f64) -> ConstitutiveLaw {
    ConstitutiveLaw::new(
        "hencky",
        params(&[("mu", mu), ("lambda", lambda)]),
        move |b| {
            let log_b = b.map_eigenvalues(f64::ln);
            mu * log_b + (0.5 * lambda * b.det().ln()) * Sym3::identity()
        },
        Some(Arc::new(move |b, h| {
            let dlog = frechet_primary(b, ScaleFunction::Log, h).expect("B is SPD");
            mu * dlog + (0.5 * lambda * b.inverse().inner(h)) * Sym3::identity()
        })),
        true,
    )
}

/// Exponentiated Hencky stress
/// sigma = 2 mu e^{k ||X||^2 - tr X} X + lambda e^{khat (tr X)^2 - tr X} tr(X) 1
/// with X = log V. Satisfies strong log-monotonicity for k > 3/8,
/// khat >= 1/8.
pub fn exp_hencky(mu: f64, lambda: f64, k: f64, khat: f64) -> ConstitutiveLaw {
    let sigma_hat = move |x: &Sym3| -> Sym3 {
        let tr = x.trace();
        let dev_factor = 2.0 * mu * (k * x.inner(x) - tr).exp();
        let vol_factor = lambda * (khat * tr * tr - tr).exp() * tr;
        dev_factor * *x + vol_factor * Sym3::identity()
    };
    let dsigma_hat = move |x: &Sym3, hx: &Sym3| -> Sym3 {
        let tr = x.trace();
        let trh = hx.trace();
        let xh = x.inner(hx);
        let e_dev = (k * x.inner(x) - tr).exp();
        let e_vol = (khat * tr * tr - tr).exp();
        let dev = 2.0 * mu * e_dev * ((2.0 * k * xh - trh) * *x + *hx);
        let vol = lambda * e_vol * (2.0 * khat * tr * tr - tr + 1.0) * trh;
        dev + vol * Sym3::identity()
    };
    ConstitutiveLaw::new(
        "exp-hencky",
        params(&[("mu", mu), ("lambda", lambda), ("k", k), ("khat", khat)]),
        move |b| {
            let x = 0.5 * b.map_eigenvalues(f64::ln);
            sigma_hat(&x)
        },
        Some(Arc::new(move |b, h| {
            let x = 0.5 * b.map_eigenvalues(f64::ln);
            let hx = 0.5 * frechet_primary(b, ScaleFunction::Log, h).expect("B is SPD");
            dsigma_hat(&x, &hx)
        })),
        true,
    )
}

/// Polyconvex slightly compressible Neo-Hooke type solid,
/// sigma = mu (det B)^{-5/6} dev B + kappa (det B)^{-1/2} log(det B)
///         e^{ (log det B)^2 / 4 } 1.
/// Invertible, yet its Zaremba-Jaumann stiffness loses positive
/// definiteness for extreme stretch ratios.
pub fn neo_hooke(mu: f64, kappa: f64) -> ConstitutiveLaw {
    // volumetric profile g(t) = t exp(t^2/4 - t/2) in t = log det B
    let g = |t: f64| t * (0.25 * t * t - 0.5 * t).exp();
    let dg = |t: f64| (0.25 * t * t - 0.5 * t).exp() * (1.0 + 0.5 * t * t - 0.5 * t);
    ConstitutiveLaw::new(
        "neo-hooke",
        params(&[("mu", mu), ("kappa", kappa)]),
        move |b| {
            let j = b.det();
            let t = j.ln();
            mu * j.powf(-5.0 / 6.0) * b.sym().dev() + (kappa * g(t)) * Sym3::identity()
        },
        Some(Arc::new(move |b, h| {
            let j = b.det();
            let t = j.ln();
            let binv_h = b.inverse().inner(h);
            let dev_part =
                mu * j.powf(-5.0 / 6.0) * (h.dev() - (5.0 / 6.0 * binv_h) * b.sym().dev());
            dev_part + (kappa * dg(t) * binv_h) * Sym3::identity()
        })),
        true,
    )
}

/// Perfect elastic fluid sigma = h'(sqrt(det B)) 1 for a volumetric
/// stored-energy profile `h`.
pub fn perfect_fluid(vol: ScalarVolLaw) -> ConstitutiveLaw {
    let name = if vol.convex {
        "fluid".to_string()
    } else {
        "fluid-nonconvex".to_string()
    };
    let v2 = vol.clone();
    ConstitutiveLaw::new(
        name,
        BTreeMap::new(),
        move |b| (vol.dh)(b.det().sqrt()) * Sym3::identity(),
        Some(Arc::new(move |b, h| {
            let s = b.det().sqrt();
            let coeff = 0.5 * (v2.ddh)(s) * s * b.inverse().inner(h);
            coeff * Sym3::identity()
        })),
        false,
    )
}

/// Richter-type law 2 mu { (V - 1) + tr(V - 1) 1 } with V = sqrt(B);
/// monotone in V but not in log V.
pub fn richter(mu: f64) -> ConstitutiveLaw {
    ConstitutiveLaw::new(
        "richter",
        params(&[("mu", mu)]),
        move |b| {
            let v = b.map_eigenvalues(f64::sqrt);
            let vm1 = v - Sym3::identity();
            2.0 * mu * (vm1 + vm1.trace() * Sym3::identity())
        },
        Some(Arc::new(move |b, h| {
            let s = frechet_primary(b, ScaleFunction::Sqrt, h).expect("B is SPD");
            2.0 * mu * (s + s.trace() * Sym3::identity())
        })),
        true,
    )
}

/// Volumetric stored-energy profile h(det F) with first and second
/// derivatives.
#[derive(Clone)]
pub struct ScalarVolLaw {
    pub name: &'static str,
    pub h: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub dh: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub ddh: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub convex: bool,
}

impl ScalarVolLaw {
    /// h(x) = x^2 - 2x, convex; stress-free at x = 1.
    pub fn convex_default() -> Self {
        ScalarVolLaw {
            name: "x2-2x",
            h: Arc::new(|x| x * x - 2.0 * x),
            dh: Arc::new(|x| 2.0 * x - 2.0),
            ddh: Arc::new(|_| 2.0),
            convex: true,
        }
    }

    /// h(x) = -x^2, concave control.
    pub fn concave_control() -> Self {
        ScalarVolLaw {
            name: "neg-x2",
            h: Arc::new(|x| -x * x),
            dh: Arc::new(|x| -2.0 * x),
            ddh: Arc::new(|_| -2.0),
            convex: false,
        }
    }

    /// h(x) = (log x)^2; h'' changes sign at x = e.
    pub fn log_squared() -> Self {
        ScalarVolLaw {
            name: "log-squared",
            h: Arc::new(|x: f64| x.ln().powi(2)),
            dh: Arc::new(|x: f64| 2.0 * x.ln() / x),
            ddh: Arc::new(|x: f64| (2.0 - 2.0 * x.ln()) / (x * x)),
            convex: false,
        }
    }
}

impl std::fmt::Debug for ScalarVolLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ScalarVolLaw({})", self.name)
    }
}

/// All registered laws with their default parameters.
pub fn law_catalog() -> Vec<ConstitutiveLaw> {
    vec![
        linear_finger(1.0),
        mu_b_binv(1.0, 1.0),
        hencky(1.0, 1.0),
        exp_hencky(1.0, 1.0, 1.0, 1.0),
        neo_hooke(1.0, 1.0),
        perfect_fluid(ScalarVolLaw::convex_default()),
        perfect_fluid(ScalarVolLaw::concave_control()),
        richter(0.5),
    ]
}

/// Builds a catalog law by name with parameter overrides; unknown law
/// names and unknown parameters are rejected.
pub fn law_by_name(name: &str, overrides: &BTreeMap<String, f64>) -> Result<ConstitutiveLaw> {
    let allowed: &[&str] = match name {
        "linear-finger" | "richter" => &["mu"],
        "mu-b-binv" | "hencky" => &["mu", "lambda"],
        "exp-hencky" => &["mu", "lambda", "k", "khat"],
        "neo-hooke" => &["mu", "kappa"],
        "fluid" | "fluid-nonconvex" => &[],
        _ => return Err(Error::UnknownLaw(name.to_string())),
    };
    for key in overrides.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::UnknownParameter {
                law: name.to_string(),
                param: key.clone(),
            });
        }
    }
    let defaults = law_catalog()
        .into_iter()
        .find(|l| l.name() == name)
        .expect("name validated above");
    let mut p = defaults.params().clone();
    for (k, v) in overrides {
        p.insert(k.clone(), *v);
    }
    Ok(match name {
        "linear-finger" => linear_finger(get(&p, "mu")),
        "mu-b-binv" => mu_b_binv(get(&p, "mu"), get(&p, "lambda")),
        "hencky" => hencky(get(&p, "mu"), get(&p, "lambda")),
        "exp-hencky" => exp_hencky(
            get(&p, "mu"),
            get(&p, "lambda"),
            get(&p, "k"),
            get(&p, "khat"),
        ),
        "neo-hooke" => neo_hooke(get(&p, "mu"), get(&p, "kappa")),
        "fluid" => perfect_fluid(ScalarVolLaw::convex_default()),
        "fluid-nonconvex" => perfect_fluid(ScalarVolLaw::concave_control()),
        "richter" => richter(get(&p, "mu")),
        _ => unreachable!(),
    })
}

fn directional_fd(law: &ConstitutiveLaw, b: &SymPd3, h: &Sym3) -> Result<Sym3> {
    let hn = h.norm();
    if hn == 0.0 {
        return Ok(Sym3::zero());
    }
    let mut step = 1e-6 * (1.0 + b.sym().norm()) / hn;
    loop {
        let plus = SymPd3::new(*b.sym() + step * *h);
        let minus = SymPd3::new(*b.sym() - step * *h);
        match (plus, minus) {
            (Ok(p), Ok(m)) => {
                return Ok((1.0 / (2.0 * step)) * (law.sigma(&p) - law.sigma(&m)));
            }
            _ => {
                step *= 0.5;
                if step * hn < 1e-12 {
                    return Err(Error::FdStepExhausted { min_step: 1e-12 });
                }
            }
        }
    }
}

/// Central-difference assembly of D_B sigma(B) along the six Mandel basis
/// directions; the oracle for analytic derivatives.
pub fn dsigma_fd(law: &ConstitutiveLaw, b: &SymPd3) -> Result<Tensor4> {
    let mut t = Tensor4::zero();
    for k in 0..6 {
        let col = directional_fd(law, b, &mandel_basis(k))?;
        let enc = crate::tensor::mandel_encode(&col);
        for (i, row) in t.m.iter_mut().enumerate() {
            row[k] = enc[i];
        }
    }
    t.source = OperatorSource::FiniteDifference;
    Ok(t)
}

/// The operator D_{log B} sigma_hat(log B) = D_B sigma(B) o (D_B log B)^{-1}
/// in Mandel form.
pub fn sigma_hat_jacobian(law: &ConstitutiveLaw, b: &SymPd3) -> Result<Tensor4> {
    let dsig = law.dsigma_op(b)?;
    let dlog =
        Tensor4::from_action(|h| frechet_primary(b, ScaleFunction::Log, h).expect("B is SPD"));
    let dlog_inv = dlog.invert()?;
    Ok(dsig.compose(&dlog_inv))
}

/// Principal Cauchy stresses of sigma(diag(l1^2, l2^2, l3^2)) paired to
/// the coordinate axes.
pub fn principal_stresses(law: &ConstitutiveLaw, stretches: [f64; 3]) -> Result<[f64; 3]> {
    for l in stretches {
        if l.is_nan() || l <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "principal stretches must be positive, got {l}"
            )));
        }
    }
    let b = SymPd3::new(Sym3::diag(
        stretches[0] * stretches[0],
        stretches[1] * stretches[1],
        stretches[2] * stretches[2],
    ))?;
    let s = law.sigma(&b);
    Ok([s.get(0, 0), s.get(1, 1), s.get(2, 2)])
}
