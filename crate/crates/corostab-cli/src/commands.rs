use std::path::Path;

use corostab::constitutive::law_catalog;
use corostab::pathsim::{analytic_shear_overlay, integrate, StiffnessSource};
use corostab::report::{
    scan_csv, to_json, trajectory_columns, trajectory_csv, CheckReport, ReportMeta, SearchReport,
    TrajectoryMeta,
};
use corostab::stability::{counterexample_search, equivalence_scan};
use corostab::tensor::Sym3;

use crate::config::Resolved;
use crate::CliError;

fn write_file(path: &str, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = Path::new(path).parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::exec(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| CliError::exec(format!("cannot write {path}: {e}")))
}

/// Stability/invertibility scan with verdict expectations.
/// Exit 0 when all expectations hold, 2 on a verdict mismatch.
pub fn cmd_check(cfg: &Resolved) -> Result<i32, CliError> {
    let law = cfg.law()?;
    let kind = cfg.rate_kind()?;
    let region = cfg.sample_region()?;
    let expectations = cfg.expectations()?;

    let scan = equivalence_scan(&law, &kind, &region).map_err(CliError::exec)?;
    let results: Vec<_> = expectations.iter().map(|e| e.evaluate(&scan)).collect();
    let report = CheckReport {
        meta: ReportMeta::new("check"),
        law: law.name().to_string(),
        law_params: law.params().clone(),
        rate: kind.label(),
        scan,
        expectations: results,
    };

    let prefix = cfg.out_prefix("check");
    write_file(&format!("{prefix}.json"), &to_json(&report))?;
    write_file(&format!("{prefix}.csv"), &scan_csv(&report.scan))?;

    println!(
        "check: law={} rate={} samples={} agreement={:.4} csp(+/-)={}/{} tsts(+/-)={}/{}",
        report.law,
        report.rate,
        report.scan.samples.len(),
        report.scan.agreement_fraction,
        report.scan.n_csp_positive,
        report.scan.n_csp_negative,
        report.scan.n_tsts_positive,
        report.scan.n_tsts_negative,
    );
    for e in &report.expectations {
        println!(
            "expect {}: {} ({})",
            e.expectation.label(),
            if e.satisfied { "ok" } else { "MISMATCH" },
            e.detail
        );
    }
    Ok(if report.all_expectations_met() { 0 } else { 2 })
}

/// Hypo-elastic trajectory integration with CSV + metadata export.
pub fn cmd_simulate(cfg: &Resolved) -> Result<i32, CliError> {
    let kind = cfg.rate_kind()?;
    let stiffness = match cfg.stiffness.as_deref().unwrap_or("induced") {
        "zero-grade" => {
            for key in cfg.params.keys() {
                if key != "mu" && key != "lambda" {
                    return Err(CliError::usage(format!(
                        "zero-grade stiffness only takes mu and lambda, got `{key}`"
                    )));
                }
            }
            let mu = cfg.params.get("mu").copied().unwrap_or(1.0);
            let lambda = cfg.params.get("lambda").copied().unwrap_or(1.0);
            StiffnessSource::ZeroGrade { mu, lambda }
        }
        "induced" => StiffnessSource::Induced(cfg.law()?),
        "zero" => StiffnessSource::Zero,
        other => {
            return Err(CliError::usage(format!(
                "unknown stiffness `{other}` (zero-grade|induced|zero)"
            )))
        }
    };
    stiffness.validate().map_err(CliError::usage_from)?;
    let path_spec = cfg.path_spec()?;
    let path = path_spec.build();

    // sigma0 = sigma(B(0)) for induced sources, zero otherwise
    let sigma0 = match &stiffness {
        StiffnessSource::Induced(law) => {
            let b0 = corostab::kinematics::state_at(&path, 0.0)
                .map_err(CliError::exec)?
                .b;
            law.sigma(&b0)
        }
        _ => Sym3::zero(),
    };

    let traj = match integrate(&stiffness, &kind, &path, cfg.t_end, cfg.dt, sigma0) {
        Ok(t) => t,
        Err(corostab::Error::Divergence {
            t,
            last_step,
            last_sigma,
        }) => {
            eprintln!(
                "error: integration diverged at t = {t} (last valid step {last_step}, sigma = {last_sigma:?})"
            );
            return Ok(1);
        }
        Err(e) => return Err(CliError::exec(e)),
    };

    let overlay: Option<Box<dyn Fn(f64) -> f64>> = match cfg.path_spec()? {
        corostab::kinematics::PathSpec::Shear { gamma }
            if analytic_shear_overlay(&stiffness, &kind, gamma, 0.0).is_some() =>
        {
            let src = stiffness.clone();
            let k = kind.clone();
            Some(Box::new(move |t: f64| {
                analytic_shear_overlay(&src, &k, gamma, t).unwrap_or(f64::NAN)
            }))
        }
        _ => None,
    };

    let csv = trajectory_csv(&traj, overlay.as_deref());
    let meta = TrajectoryMeta {
        meta: ReportMeta::new("simulate"),
        stiffness: match &stiffness {
            StiffnessSource::ZeroGrade { .. } => "zero-grade".to_string(),
            StiffnessSource::Induced(law) => format!("induced({})", law.name()),
            StiffnessSource::Zero => "zero".to_string(),
        },
        rate: kind.label(),
        path: path.name().to_string(),
        dt: cfg.dt,
        t_end: cfg.t_end,
        columns: trajectory_columns(overlay.is_some()),
        max_sym_residual: traj.max_sym_residual(),
    };

    let prefix = cfg.out_prefix("simulate");
    write_file(&format!("{prefix}.csv"), &csv)?;
    write_file(&format!("{prefix}.json"), &to_json(&meta))?;
    println!(
        "simulate: path={} rate={} steps={} final_t={}",
        meta.path,
        meta.rate,
        traj.len() - 1,
        traj.times.last().copied().unwrap_or(0.0)
    );
    Ok(0)
}

/// Counterexample search; writes the witness or a none-found record.
pub fn cmd_search(cfg: &Resolved) -> Result<i32, CliError> {
    let law = cfg.law()?;
    let kind = cfg.rate_kind()?;
    let mut region = cfg.sample_region()?;
    region.n = region.n.max(1);
    if cfg.budget < 1 {
        return Err(CliError::usage("search budget must be >= 1".to_string()));
    }

    let witness =
        counterexample_search(&law, &kind, &region, cfg.budget).map_err(CliError::exec)?;
    let report = SearchReport {
        meta: ReportMeta::new("search"),
        law: law.name().to_string(),
        law_params: law.params().clone(),
        rate: kind.label(),
        budget: cfg.budget,
        found: witness.is_some(),
        witness,
    };

    let prefix = cfg.out_prefix("search");
    write_file(&format!("{prefix}.json"), &to_json(&report))?;
    match &report.witness {
        Some(w) => println!(
            "search: witness found after {} probes, value = {:.6e}",
            w.probes_used, w.value
        ),
        None => println!("search: none found within budget {}", report.budget),
    }
    Ok(0)
}

/// Lists registered laws and rate selectors.
pub fn cmd_catalog() -> Result<i32, CliError> {
    println!("laws:");
    for law in law_catalog() {
        let params: Vec<String> = law
            .params()
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        println!(
            "  {:16} params: {:40} analytic-derivative: {:5} claims-invertible: {}",
            law.name(),
            if params.is_empty() {
                "-".to_string()
            } else {
                params.join(", ")
            },
            law.has_analytic_derivative(),
            law.claims_invertible(),
        );
    }
    println!("rates: zj | gn | log | spin:nu1,nu2,nu3 | oldroyd | truesdell");
    println!("paths: shear | uniaxial | triaxial | rotation | rotshear | static");
    Ok(0)
}
