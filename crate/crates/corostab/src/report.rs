//! Report assembly and serialization: JSON documents with a versioned
//! schema, per-sample CSV tables, trajectory exports and expectation
//! evaluation. Timestamps live in a single metadata field so reports from
//! identical configurations compare byte-for-byte after normalizing it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pathsim::Trajectory;
use crate::stability::{StabilityReport, Verdict, Witness};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportMeta {
    pub schema_version: u32,
    pub command: String,
    /// Wall-clock stamp; the only field that may differ between reruns.
    pub generated_at_unix: u64,
}

impl ReportMeta {
    pub fn new(command: &str) -> Self {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        ReportMeta {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            generated_at_unix: now,
        }
    }
}

/// Declarable verdict expectations for the check command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    CspPositive,
    CspNegative,
    TstsPositive,
    TstsNegative,
    Agreement,
    DetCorrespondence,
}

impl Expectation {
    pub fn label(&self) -> &'static str {
        match self {
            Expectation::CspPositive => "csp-positive",
            Expectation::CspNegative => "csp-negative",
            Expectation::TstsPositive => "tsts-positive",
            Expectation::TstsNegative => "tsts-negative",
            Expectation::Agreement => "agreement",
            Expectation::DetCorrespondence => "det-correspondence",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csp-positive" => Ok(Expectation::CspPositive),
            "csp-negative" => Ok(Expectation::CspNegative),
            "tsts-positive" => Ok(Expectation::TstsPositive),
            "tsts-negative" => Ok(Expectation::TstsNegative),
            "agreement" => Ok(Expectation::Agreement),
            "det-correspondence" => Ok(Expectation::DetCorrespondence),
            other => Err(Error::InvalidConfig(format!(
                "unknown expectation `{other}`"
            ))),
        }
    }

    pub fn evaluate(&self, scan: &StabilityReport) -> ExpectationResult {
        let (satisfied, detail) = match self {
            Expectation::CspPositive => (
                scan.n_csp_negative == 0,
                format!("{} negative CSP samples", scan.n_csp_negative),
            ),
            Expectation::CspNegative => (
                scan.n_csp_negative > 0,
                format!("{} negative CSP samples", scan.n_csp_negative),
            ),
            Expectation::TstsPositive => (
                scan.n_tsts_negative == 0,
                format!("{} negative monotonicity samples", scan.n_tsts_negative),
            ),
            Expectation::TstsNegative => (
                scan.n_tsts_negative > 0,
                format!("{} negative monotonicity samples", scan.n_tsts_negative),
            ),
            Expectation::Agreement => (
                scan.disagreements.is_empty(),
                format!("{} sign disagreements", scan.disagreements.len()),
            ),
            Expectation::DetCorrespondence => (
                scan.det_status_mismatches.is_empty(),
                format!(
                    "{} determinant status mismatches",
                    scan.det_status_mismatches.len()
                ),
            ),
        };
        ExpectationResult {
            expectation: *self,
            satisfied,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectationResult {
    pub expectation: Expectation,
    pub satisfied: bool,
    pub detail: String,
}

/// Full JSON document of a stability check run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub meta: ReportMeta,
    pub law: String,
    pub law_params: std::collections::BTreeMap<String, f64>,
    pub rate: String,
    pub scan: StabilityReport,
    pub expectations: Vec<ExpectationResult>,
}

impl CheckReport {
    pub fn all_expectations_met(&self) -> bool {
        self.expectations.iter().all(|e| e.satisfied)
    }
}

/// Outcome document of a counterexample search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub meta: ReportMeta,
    pub law: String,
    pub law_params: std::collections::BTreeMap<String, f64>,
    pub rate: String,
    pub budget: usize,
    pub found: bool,
    pub witness: Option<Witness>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

/// Rewrites `generated_at_unix` to zero so reports from identical runs can
/// be compared byte-for-byte.
pub fn normalize_timestamp(json: &str) -> String {
    let mut value: serde_json::Value = match serde_json::from_str(json) {
        Ok(v) => v,
        Err(_) => return json.to_string(),
    };
    if let Some(meta) = value.get_mut("meta") {
        if let Some(ts) = meta.get_mut("generated_at_unix") {
            *ts = serde_json::Value::from(0u64);
        }
    }
    serde_json::to_string_pretty(&value).expect("normalized report serializes")
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Positive => "positive",
        Verdict::Negative => "negative",
        Verdict::Indeterminate => "indeterminate",
    }
}

/// Per-sample CSV table of a scan: the six B entries in the component
/// order (11, 22, 33, 12, 23, 31), the verdict eigenvalues and the three
/// determinants.
pub fn scan_csv(scan: &StabilityReport) -> String {
    let mut out = String::from(
        "index,b11,b22,b33,b12,b23,b31,csp_min_eig,tsts_min_eig,det_h,det_dsigma,det_jacobian,csp_verdict,tsts_verdict\n",
    );
    for r in &scan.samples {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.index,
            r.b[0],
            r.b[1],
            r.b[2],
            r.b[3],
            r.b[4],
            r.b[5],
            r.csp_min_eig,
            r.tsts_min_eig,
            r.det_h,
            r.det_dsigma,
            r.det_jacobian,
            verdict_str(r.csp_verdict),
            verdict_str(r.tsts_verdict),
        ));
    }
    out
}

/// Metadata header written next to a trajectory CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub meta: ReportMeta,
    pub stiffness: String,
    pub rate: String,
    pub path: String,
    pub dt: f64,
    pub t_end: f64,
    pub columns: Vec<String>,
    pub max_sym_residual: f64,
}

/// Trajectory CSV: time, the Cauchy stress in the component order
/// (11, 22, 33, 12, 23, 31), the same entries of B, the isotropic
/// invariants and the symmetry residual; an analytic overlay column is
/// appended when a closed form is registered.
pub fn trajectory_csv(traj: &Trajectory, overlay: Option<&dyn Fn(f64) -> f64>) -> String {
    let mut header = String::from(
        "t,sig11,sig22,sig33,sig12,sig23,sig31,b11,b22,b33,b12,b23,b31,trace,norm,det,sym_residual",
    );
    if overlay.is_some() {
        header.push_str(",overlay_sig12");
    }
    header.push('\n');
    let mut out = header;
    for i in 0..traj.len() {
        let t = traj.times[i];
        let s = traj.sigma[i].voigt();
        let b = traj.b[i].voigt();
        let d = &traj.diagnostics[i];
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            t,
            s[0],
            s[1],
            s[2],
            s[3],
            s[4],
            s[5],
            b[0],
            b[1],
            b[2],
            b[3],
            b[4],
            b[5],
            d.trace,
            d.norm,
            d.det,
            d.sym_residual,
        ));
        if let Some(f) = overlay {
            out.push_str(&format!(",{}", f(t)));
        }
        out.push('\n');
    }
    out
}

pub fn trajectory_columns(with_overlay: bool) -> Vec<String> {
    let mut cols: Vec<String> = [
        "t",
        "sig11",
        "sig22",
        "sig33",
        "sig12",
        "sig23",
        "sig31",
        "b11",
        "b22",
        "b33",
        "b12",
        "b23",
        "b31",
        "trace",
        "norm",
        "det",
        "sym_residual",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    if with_overlay {
        cols.push("overlay_sig12".to_string());
    }
    cols
}
