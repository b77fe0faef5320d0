//! Run configuration: JSON config file plus command-line overrides.
//! Flags take precedence over file fields; unknown file keys are rejected.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use corostab::kinematics::PathSpec;
use corostab::rates::RateKind;
use corostab::report::Expectation;
use corostab::stability::SampleRegion;

use crate::CliError;

/// On-disk configuration; every field is optional and can be supplied or
/// overridden by a flag.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub law: Option<String>,
    pub params: Option<BTreeMap<String, f64>>,
    pub rate: Option<String>,
    /// "lo:hi" eigenvalue bounds for B.
    pub region: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub path: Option<String>,
    pub gamma: Option<f64>,
    pub omega: Option<f64>,
    /// Triaxial stretch rates.
    pub a: Option<[f64; 3]>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub stiffness: Option<String>,
    pub expect: Option<Vec<String>>,
    pub budget: Option<usize>,
    pub out: Option<String>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &PathBuf) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::usage(format!(
                "bad config {} (line {}, column {}): {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })
    }
}

/// Fully resolved configuration after merging file and flags.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub law: Option<String>,
    pub params: BTreeMap<String, f64>,
    pub rate: Option<String>,
    pub region: Option<(f64, f64)>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub path: Option<String>,
    pub gamma: f64,
    pub omega: f64,
    pub a: [f64; 3],
    pub dt: f64,
    pub t_end: f64,
    pub stiffness: Option<String>,
    pub expect: Vec<String>,
    pub budget: usize,
    pub out: Option<String>,
    pub jobs: Option<usize>,
}

pub fn parse_region(s: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(CliError::usage(format!(
            "region must be `lo:hi`, got `{s}`"
        )));
    }
    let lo: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad region bound `{}`", parts[0])))?;
    let hi: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad region bound `{}`", parts[1])))?;
    Ok((lo, hi))
}

pub fn parse_params(items: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for item in items {
        for piece in item.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let (k, v) = piece.split_once('=').ok_or_else(|| {
                CliError::usage(format!("parameter must be `key=value`, got `{piece}`"))
            })?;
            let value: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("bad numeric value in `{piece}`")))?;
            out.insert(k.trim().to_string(), value);
        }
    }
    Ok(out)
}

impl Resolved {
    pub fn rate_kind(&self) -> Result<RateKind, CliError> {
        let name = self
            .rate
            .as_deref()
            .ok_or_else(|| CliError::usage("missing --rate".to_string()))?;
        RateKind::parse(name).map_err(CliError::exec)
    }

    /// Seed from flag/config or the COROSTAB_SEED environment fallback;
    /// scans refuse to run without one.
    pub fn require_seed(&self) -> Result<u64, CliError> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        if let Ok(env) = std::env::var("COROSTAB_SEED") {
            return env
                .parse()
                .map_err(|_| CliError::usage(format!("bad COROSTAB_SEED `{env}`")));
        }
        Err(CliError::usage(
            "scans need a seed: pass --seed or set COROSTAB_SEED".to_string(),
        ))
    }

    pub fn sample_region(&self) -> Result<SampleRegion, CliError> {
        let (lo, hi) = self.region.unwrap_or((0.2, 5.0));
        let n = self.samples.unwrap_or(1000);
        let seed = self.require_seed()?;
        SampleRegion::new(lo, hi, n, seed).map_err(CliError::exec)
    }

    pub fn law(&self) -> Result<corostab::constitutive::ConstitutiveLaw, CliError> {
        let name = self
            .law
            .as_deref()
            .ok_or_else(|| CliError::usage("missing --law".to_string()))?;
        corostab::constitutive::law_by_name(name, &self.params).map_err(CliError::exec)
    }

    pub fn path_spec(&self) -> Result<PathSpec, CliError> {
        let name = self.path.as_deref().unwrap_or("shear");
        Ok(match name {
            "shear" => PathSpec::Shear { gamma: self.gamma },
            "uniaxial" => PathSpec::Uniaxial { a: self.a[0] },
            "triaxial" => PathSpec::Triaxial { a: self.a },
            "rotation" => PathSpec::Rotation { omega: self.omega },
            "rotshear" => PathSpec::Rotshear {
                omega: self.omega,
                gamma: self.gamma,
            },
            "static" => PathSpec::Static,
            other => {
                return Err(CliError::usage(format!(
                    "unknown path `{other}` (shear|uniaxial|triaxial|rotation|rotshear|static)"
                )))
            }
        })
    }

    pub fn expectations(&self) -> Result<Vec<Expectation>, CliError> {
        self.expect
            .iter()
            .map(|s| Expectation::parse(s).map_err(CliError::exec))
            .collect()
    }

    pub fn out_prefix(&self, command: &str) -> String {
        self.out
            .clone()
            .unwrap_or_else(|| format!("corostab-{command}"))
    }
}
