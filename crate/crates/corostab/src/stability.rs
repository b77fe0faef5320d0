//! Constitutive verdicts: positive definiteness of the induced stiffness
//! (the corotational stability condition), strong monotonicity of the
//! stress in logarithmic strain, invertibility correspondence,
//! principal-axes Jacobians, volumetric ellipticity and counterexample
//! search.

use rand::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constitutive::{sigma_hat_jacobian, ConstitutiveLaw, ScalarVolLaw};
use crate::error::{Error, Result};
use crate::rates::{induced_stiffness, RateKind};
use crate::tensor::{exp_skew, Mat3, Skew3, Sym3, SymPd3};

/// Relative dead band around zero for eigenvalue verdicts: samples whose
/// extremal eigenvalue is below this fraction of the operator scale are
/// indeterminate rather than positive/negative.
pub const VERDICT_DEAD_BAND: f64 = 1e-8;

/// Relative dead band for determinant zero/nonzero status; determinants
/// are compared against the sixth power of the operator RMS scale.
pub const DET_DEAD_BAND: f64 = 1e-10;

/// Eigenvalue box and sampling budget for SPD scans.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SampleRegion {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub seed: u64,
}

impl SampleRegion {
    pub fn new(lo: f64, hi: f64, n: usize, seed: u64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidConfig(format!(
                "eigenvalue region must satisfy 0 < lo < hi, got [{lo}, {hi}]"
            )));
        }
        if n < 1 {
            return Err(Error::InvalidConfig("sample count must be >= 1".into()));
        }
        Ok(SampleRegion { lo, hi, n, seed })
    }

    /// Deterministic SPD samples: eigenvalues log-uniform in [lo, hi],
    /// random orthogonal frames. The whole batch is drawn from one seeded
    /// stream, so jobs/parallelism cannot change it.
    pub fn draw(&self) -> Vec<SymPd3> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.n)
            .map(|_| random_spd_log_uniform(&mut rng, self.lo, self.hi))
            .collect()
    }
}

pub(crate) fn random_spd_log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> SymPd3 {
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut ev = [0.0; 3];
    for v in ev.iter_mut() {
        *v = rng.random_range(llo..lhi).exp();
    }
    let q = random_rotation(rng);
    let d = Mat3::diag(ev[0], ev[1], ev[2]);
    SymPd3::new(Sym3::sym_part(&(q * d * q.transpose()))).expect("constructed SPD")
}

pub(crate) fn random_rotation(rng: &mut ChaCha8Rng) -> Mat3 {
    let w = Skew3::from_entries(
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
    );
    exp_skew(&w)
}

/// Random unit symmetric tensor, for quadratic-form sampling.
pub fn random_unit_sym(rng: &mut ChaCha8Rng) -> Sym3 {
    loop {
        let s = Sym3::from_entries(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = s.norm();
        if n > 1e-3 {
            return s.scaled(1.0 / n);
        }
    }
}

/// Minimum eigenvalue of sym H(sigma) for the given corotational rate;
/// positive iff <D°/Dt\[sigma\], D> > 0 for all nonzero D.
pub fn csp_min_eig(law: &ConstitutiveLaw, b: &SymPd3, kind: &RateKind) -> Result<f64> {
    Ok(induced_stiffness(law, b, kind)?.sym_min_eig())
}

/// Minimum eigenvalue of sym D_{log B} sigma_hat(log B); positive iff the
/// law is strongly monotone in logarithmic strain.
pub fn tsts_min_eig(law: &ConstitutiveLaw, b: &SymPd3) -> Result<f64> {
    Ok(sigma_hat_jacobian(law, b)?.sym_min_eig())
}

/// Pairwise monotonicity gap in logarithmic strain,
/// <sigma(B1) - sigma(B2), log B1 - log B2>.
pub fn tsts_pair(law: &ConstitutiveLaw, b1: &SymPd3, b2: &SymPd3) -> f64 {
    let ds = law.sigma(b1) - law.sigma(b2);
    let dlog = b1.map_eigenvalues(f64::ln) - b2.map_eigenvalues(f64::ln);
    ds.inner(&dlog)
}

/// Pairwise monotonicity gap in the stretch itself,
/// <sigma(V1^2) - sigma(V2^2), V1 - V2>; distinguishes monotonicity in V
/// from monotonicity in log V.
pub fn mono_in_v_pair(law: &ConstitutiveLaw, v1: &SymPd3, v2: &SymPd3) -> f64 {
    let b1 = SymPd3::new(Sym3::sym_part(&(v1.to_mat() * v1.to_mat()))).expect("V^2 is SPD");
    let b2 = SymPd3::new(Sym3::sym_part(&(v2.to_mat() * v2.to_mat()))).expect("V^2 is SPD");
    let ds = law.sigma(&b1) - law.sigma(&b2);
    ds.inner(&(*v1.sym() - *v2.sym()))
}

/// Symmetrized Jacobian of principal Cauchy stresses with respect to the
/// logarithmic stretches, assembled through D_B sigma at B = diag(l_i^2).
/// Requires pairwise distinct stretches; the full 6x6 operator is the
/// authoritative check near coalescence.
pub fn principal_jacobian(law: &ConstitutiveLaw, stretches: [f64; 3]) -> Result<[[f64; 3]; 3]> {
    for l in stretches {
        if l.is_nan() || l <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "principal stretches must be positive, got {l}"
            )));
        }
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            let gap = (stretches[i] - stretches[j]).abs();
            if gap < 1e-6 * stretches[i].max(stretches[j]).max(1.0) {
                return Err(Error::NearRepeatedStretches { gap });
            }
        }
    }
    let b = SymPd3::new(Sym3::diag(
        stretches[0] * stretches[0],
        stretches[1] * stretches[1],
        stretches[2] * stretches[2],
    ))?;
    let mut raw = [[0.0; 3]; 3];
    for j in 0..3 {
        // dB/d(log lambda_j) = 2 lambda_j^2 E_jj
        let mut basis = [0.0; 3];
        basis[j] = 2.0 * stretches[j] * stretches[j];
        let h = Sym3::diag(basis[0], basis[1], basis[2]);
        let col = law.dsigma_apply(&b, &h)?;
        for (i, row) in raw.iter_mut().enumerate() {
            row[j] = col.get(i, i);
        }
    }
    let mut sym = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            sym[i][j] = 0.5 * (raw[i][j] + raw[j][i]);
        }
    }
    Ok(sym)
}

/// Sign verdict of an eigenvalue against the operator scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Positive,
    Negative,
    Indeterminate,
}

pub fn classify(value: f64, scale: f64) -> Verdict {
    if value.abs() <= VERDICT_DEAD_BAND * scale.max(f64::MIN_POSITIVE) {
        Verdict::Indeterminate
    } else if value > 0.0 {
        Verdict::Positive
    } else {
        Verdict::Negative
    }
}

/// Per-sample record of a stability scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    /// Voigt entries (11, 22, 33, 12, 23, 31) of the sampled B.
    pub b: [f64; 6],
    pub csp_min_eig: f64,
    pub tsts_min_eig: f64,
    pub csp_verdict: Verdict,
    pub tsts_verdict: Verdict,
    pub det_h: f64,
    pub det_dsigma: f64,
    pub det_jacobian: f64,
}

/// Aggregated scan outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityReport {
    pub law: String,
    pub rate: String,
    pub region: SampleRegion,
    pub samples: Vec<SampleRecord>,
    pub n_csp_positive: usize,
    pub n_csp_negative: usize,
    pub n_tsts_positive: usize,
    pub n_tsts_negative: usize,
    pub n_indeterminate: usize,
    /// Samples (outside the dead band on both sides) where the two
    /// verdicts disagree.
    pub disagreements: Vec<usize>,
    pub agreement_fraction: f64,
    pub worst_csp: f64,
    pub worst_csp_b: [f64; 6],
    pub worst_tsts: f64,
    pub worst_tsts_b: [f64; 6],
    /// Samples where the zero/nonzero status of det H, det D_B sigma and
    /// det D_{log B} sigma_hat do not all agree.
    pub det_status_mismatches: Vec<usize>,
}

impl StabilityReport {
    pub fn sign_agreement_is_total(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn det_scale(t: &crate::tensor::Tensor4) -> f64 {
    let rms = t.norm() / 6.0f64.sqrt();
    rms.powi(6).max(f64::MIN_POSITIVE)
}

fn det_status(value: f64, scale: f64) -> bool {
    value.abs() > DET_DEAD_BAND * scale
}

fn evaluate_sample(
    law: &ConstitutiveLaw,
    kind: &RateKind,
    index: usize,
    b: &SymPd3,
) -> Result<(SampleRecord, bool)> {
    let h = induced_stiffness(law, b, kind)?;
    let dsig = law.dsigma_op(b)?;
    let jac = sigma_hat_jacobian(law, b)?;
    let csp = h.sym_min_eig();
    let tsts = jac.sym_min_eig();
    let record = SampleRecord {
        index,
        b: b.sym().voigt(),
        csp_min_eig: csp,
        tsts_min_eig: tsts,
        csp_verdict: classify(csp, h.sym_part().norm()),
        tsts_verdict: classify(tsts, jac.sym_part().norm()),
        det_h: h.det(),
        det_dsigma: dsig.det(),
        det_jacobian: jac.det(),
    };
    let s1 = det_status(record.det_h, det_scale(&h));
    let s2 = det_status(record.det_dsigma, det_scale(&dsig));
    let s3 = det_status(record.det_jacobian, det_scale(&jac));
    let det_agree = s1 == s2 && s2 == s3;
    Ok((record, det_agree))
}

/// Scans the region and records, per sample, the sign of the extremal
/// eigenvalue of sym H versus sym D_{log B} sigma_hat. Sample evaluation
/// is data-parallel; the report order is by sample index.
pub fn equivalence_scan(
    law: &ConstitutiveLaw,
    kind: &RateKind,
    region: &SampleRegion,
) -> Result<StabilityReport> {
    if !kind.is_corotational() {
        return Err(Error::UnsupportedRate {
            rate: kind.label(),
            what: "stability scans are defined for corotational rates",
        });
    }
    let samples = region.draw();
    let records: Result<Vec<(SampleRecord, bool)>> = samples
        .par_iter()
        .enumerate()
        .map(|(i, b)| evaluate_sample(law, kind, i, b))
        .collect();
    let records = records?;

    let mut report = StabilityReport {
        law: law.name().to_string(),
        rate: kind.label(),
        region: *region,
        samples: Vec::new(),
        n_csp_positive: 0,
        n_csp_negative: 0,
        n_tsts_positive: 0,
        n_tsts_negative: 0,
        n_indeterminate: 0,
        disagreements: Vec::new(),
        agreement_fraction: 0.0,
        worst_csp: f64::INFINITY,
        worst_csp_b: [0.0; 6],
        worst_tsts: f64::INFINITY,
        worst_tsts_b: [0.0; 6],
        det_status_mismatches: Vec::new(),
    };

    let mut n_determinate = 0usize;
    let mut n_agree = 0usize;
    for (r, det_agree) in &records {
        if !det_agree {
            report.det_status_mismatches.push(r.index);
        }
        match r.csp_verdict {
            Verdict::Positive => report.n_csp_positive += 1,
            Verdict::Negative => report.n_csp_negative += 1,
            Verdict::Indeterminate => {}
        }
        match r.tsts_verdict {
            Verdict::Positive => report.n_tsts_positive += 1,
            Verdict::Negative => report.n_tsts_negative += 1,
            Verdict::Indeterminate => {}
        }
        if r.csp_verdict == Verdict::Indeterminate || r.tsts_verdict == Verdict::Indeterminate {
            report.n_indeterminate += 1;
        } else {
            n_determinate += 1;
            if r.csp_verdict == r.tsts_verdict {
                n_agree += 1;
            } else {
                report.disagreements.push(r.index);
            }
        }
        if r.csp_min_eig < report.worst_csp {
            report.worst_csp = r.csp_min_eig;
            report.worst_csp_b = r.b;
        }
        if r.tsts_min_eig < report.worst_tsts {
            report.worst_tsts = r.tsts_min_eig;
            report.worst_tsts_b = r.b;
        }
    }
    report.agreement_fraction = if n_determinate == 0 {
        1.0
    } else {
        n_agree as f64 / n_determinate as f64
    };
    report.samples = records.into_iter().map(|(r, _)| r).collect();
    Ok(report)
}

/// Per-sample zero/nonzero correspondence of det H, det D_B sigma and
/// det D_{log B} sigma_hat; `det_status_mismatches` lists the samples
/// where the three statuses do not agree.
pub fn invertibility_scan(
    law: &ConstitutiveLaw,
    kind: &RateKind,
    region: &SampleRegion,
) -> Result<StabilityReport> {
    equivalence_scan(law, kind, region)
}

/// D^2(h(det F)).(xi (x) eta, xi (x) eta) = h''(det F) <Cof F, xi (x) eta>^2.
/// Nonnegative for all rank-one directions iff h is convex at det F.
pub fn volumetric_ellipticity(vol: &ScalarVolLaw, f: &Mat3, xi: [f64; 3], eta: [f64; 3]) -> f64 {
    let cof = f.cofactor();
    let proj = cof.inner(&Mat3::outer(xi, eta));
    (vol.ddh)(f.det()) * proj * proj
}

/// Witness of a negative quadratic form of the induced stiffness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    /// Voigt entries of B.
    pub b: [f64; 6],
    /// Voigt entries of the unit direction D.
    pub d: [f64; 6],
    /// <H(sigma).D, D> at the witness.
    pub value: f64,
    pub probes_used: usize,
}

/// Random search for <H.D, D> < -1e-10. 80% of the probe budget goes to
/// region-uniform SPD samples, 20% to axis-aligned diag(alpha, beta, 1)
/// probes with alpha at the low and beta at the high end of the region;
/// a short coordinate-descent refinement of the eigenvalues follows each
/// new best candidate. Returns the first witness found.
pub fn counterexample_search(
    law: &ConstitutiveLaw,
    kind: &RateKind,
    region: &SampleRegion,
    budget: usize,
) -> Result<Option<Witness>> {
    if budget < 1 {
        return Err(Error::InvalidConfig("search budget must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(region.seed);
    let threshold = -1e-10;

    let eval = |b: &SymPd3| -> Result<(f64, Sym3)> {
        let h = induced_stiffness(law, b, kind)?;
        let sym = h.sym_part();
        let (vals, vecs) = crate::tensor::jacobi_eig::<6>(&sym.m)?;
        let mut imin = 0;
        for k in 1..6 {
            if vals[k] < vals[imin] {
                imin = k;
            }
        }
        let mut col = [0.0; 6];
        for (r, row) in vecs.iter().enumerate() {
            col[r] = row[imin];
        }
        Ok((vals[imin], crate::tensor::mandel_decode(&col)))
    };

    let mut probes = 0usize;
    let mut best: Option<(f64, SymPd3, Sym3)> = None;

    let (llo, lhi) = (region.lo.ln(), region.hi.ln());
    let alpha_hi = lhi.min(0.0).max(llo + 1e-9);
    let beta_lo = llo.max(0.0).min(lhi - 1e-9);
    let one = region.lo.max(1.0).min(region.hi);

    while probes < budget {
        probes += 1;
        let b = if probes.is_multiple_of(5) {
            // axis-aligned probe mirroring extreme stretch ratios
            let alpha = rng.random_range(llo..alpha_hi.max(llo + 1e-9)).exp();
            let beta = rng.random_range(beta_lo.min(lhi - 1e-9)..lhi).exp();
            SymPd3::from_diag(alpha, beta, one)?
        } else {
            random_spd_log_uniform(&mut rng, region.lo, region.hi)
        };
        let (val, dir) = eval(&b)?;
        let improved = best.as_ref().is_none_or(|(v, _, _)| val < *v);
        if improved {
            // coordinate descent on the log-eigenvalues within the region
            let mut cur_b = b.clone();
            let mut cur_val = val;
            let mut cur_dir = dir;
            let mut step = 0.5f64;
            while step > 1e-2 && probes < budget {
                let mut moved = false;
                let evals = cur_b.eigvals();
                let q = *cur_b.q();
                for axis in 0..3 {
                    for sgn in [1.0, -1.0] {
                        if probes >= budget {
                            break;
                        }
                        let mut ev = evals;
                        ev[axis] = (ev[axis].ln() + sgn * step)
                            .clamp(region.lo.ln(), region.hi.ln())
                            .exp();
                        let cand = SymPd3::new(Sym3::sym_part(
                            &(q * Mat3::diag(ev[0], ev[1], ev[2]) * q.transpose()),
                        ))?;
                        probes += 1;
                        let (v, dir2) = eval(&cand)?;
                        if v < cur_val {
                            cur_val = v;
                            cur_b = cand;
                            cur_dir = dir2;
                            moved = true;
                        }
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
            best = Some((cur_val, cur_b, cur_dir));
        }
        if let Some((v, b, d)) = &best {
            if *v < threshold {
                return Ok(Some(Witness {
                    b: b.sym().voigt(),
                    d: d.voigt(),
                    value: *v,
                    probes_used: probes,
                }));
            }
        }
    }
    Ok(None)
}
