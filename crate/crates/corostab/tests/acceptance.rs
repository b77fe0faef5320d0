//! Acceptance suite: every release criterion runs at its stated tolerance
//! and prints one pass/fail line (run with `--nocapture` to see them all).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use corostab::constitutive::{
    dsigma_fd, exp_hencky, hencky, law_catalog, linear_finger, mu_b_binv, neo_hooke, perfect_fluid,
    richter, sigma_hat_jacobian, ConstitutiveLaw, ScalarVolLaw,
};
use corostab::kinematics::{state_at, DeformationPath};
use corostab::pathsim::{integrate, StiffnessSource};
use corostab::rates::{
    a_operator, chain_rule_residual, induced_stiffness, noll_spin_identity_residual,
    product_rule_defect, product_rule_residual, RateKind, SpinFamilyCoeffs,
};
use corostab::report::{normalize_timestamp, to_json, CheckReport, Expectation, ReportMeta};
use corostab::stability::{
    counterexample_search, equivalence_scan, mono_in_v_pair, principal_jacobian, tsts_min_eig,
    tsts_pair, volumetric_ellipticity, SampleRegion,
};
use corostab::tensor::{
    apply_primary, eig_sym3, exp_skew, frechet_primary, mandel_encode, Mat3, ScaleFunction, Skew3,
    Sym3, SymPd3, Tensor4,
};

fn criterion(id: u32, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("acceptance {id:02} {name}: {verdict} ({detail})");
    assert!(ok, "criterion {id:02} {name} failed: {detail}");
}

fn random_rotation(rng: &mut ChaCha8Rng) -> Mat3 {
    exp_skew(&Skew3::from_entries(
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
    ))
}

fn random_spd(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> SymPd3 {
    let q = random_rotation(rng);
    let d = Mat3::diag(
        rng.random_range(lo..hi),
        rng.random_range(lo..hi),
        rng.random_range(lo..hi),
    );
    SymPd3::new(Sym3::sym_part(&(q * d * q.transpose()))).unwrap()
}

fn random_sym(rng: &mut ChaCha8Rng, amp: f64) -> Sym3 {
    Sym3::from_entries(
        rng.random_range(-amp..amp),
        rng.random_range(-amp..amp),
        rng.random_range(-amp..amp),
        rng.random_range(-amp..amp),
        rng.random_range(-amp..amp),
        rng.random_range(-amp..amp),
    )
}

/// Smooth random path F(t) = F0 + (t - t0) G with F(t0) = F0 well inside
/// GL+(3).
fn random_linear_path(rng: &mut ChaCha8Rng) -> (DeformationPath, f64) {
    let t0 = 0.5;
    loop {
        let mut f0 = Mat3::identity();
        let mut g = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                f0.m[i][j] += rng.random_range(-0.3..0.3);
                g.m[i][j] = rng.random_range(-0.5..0.5);
            }
        }
        if f0.det() < 0.5 {
            continue;
        }
        let path = DeformationPath::new("random-linear", move |t| f0 + (t - t0) * g, move |_| g);
        return (path, t0);
    }
}

#[test]
fn criterion_01_simple_shear_linear_response() {
    let gamma = 1.0;
    let path = DeformationPath::shear(gamma);
    let mut worst: f64 = 0.0;
    for law in [linear_finger(1.0), mu_b_binv(1.0, 1.0)] {
        let mu = law.params()["mu"];
        let traj = integrate(
            &StiffnessSource::Induced(law),
            &RateKind::Zj,
            &path,
            3.0,
            1e-3,
            Sym3::zero(),
        )
        .unwrap();
        for (t, s) in traj.times.iter().zip(traj.sigma.iter()) {
            let expect = mu * gamma * t;
            worst = worst.max((s.get(0, 1) - expect).abs() / expect.abs().max(1.0));
        }
    }
    criterion(
        1,
        "simple-shear-linear-response",
        worst < 1e-6,
        &format!("max rel error {worst:.3e} (tol 1e-6)"),
    );
}

#[test]
fn criterion_02_zero_grade_shear_oscillation() {
    let (mu, gamma) = (1.0, 1.0);
    let t_end = 4.0 * std::f64::consts::PI;
    let traj = integrate(
        &StiffnessSource::ZeroGrade { mu, lambda: 1.0 },
        &RateKind::Zj,
        &DeformationPath::shear(gamma),
        t_end,
        1e-3,
        Sym3::zero(),
    )
    .unwrap();
    let mut worst: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    let mut crossings = Vec::new();
    for i in 0..traj.len() {
        let t = traj.times[i];
        let s12 = traj.sigma[i].get(0, 1);
        worst = worst.max((s12 - mu * (gamma * t).sin()).abs());
        worst_trace = worst_trace.max((traj.sigma[i].get(0, 0) + traj.sigma[i].get(1, 1)).abs());
        if i > 0 {
            let prev = traj.sigma[i - 1].get(0, 1);
            if prev.signum() != s12.signum() && prev != 0.0 {
                // linear interpolation of the crossing
                let tp = traj.times[i - 1];
                let crossing = tp + (t - tp) * prev.abs() / (prev.abs() + s12.abs());
                crossings.push(crossing);
            }
        }
    }
    let mut crossing_err: f64 = 0.0;
    for (k, c) in crossings.iter().enumerate() {
        let expect = (k + 1) as f64 * std::f64::consts::PI / gamma;
        crossing_err = crossing_err.max((c - expect).abs());
    }
    let ok = worst < 1e-4 && worst_trace < 1e-10 && crossing_err < 1e-4 && !crossings.is_empty();
    criterion(
        2,
        "zero-grade-shear-oscillation",
        ok,
        &format!(
            "max |sig12 - mu sin| {worst:.3e} (tol 1e-4), plane-trace drift {worst_trace:.3e} (tol 1e-10), crossing error {crossing_err:.3e}"
        ),
    );
}

#[test]
fn criterion_03_equivalence_scan_across_rates() {
    let laws = [
        linear_finger(1.0),
        mu_b_binv(1.0, 1.0),
        hencky(1.0, 1.0),
        exp_hencky(1.0, 1.0, 1.0, 1.0),
    ];
    let kinds = [RateKind::Zj, RateKind::Gn, RateKind::Log];
    let mut all_ok = true;
    let mut detail = String::new();
    for (li, law) in laws.iter().enumerate() {
        for (ki, kind) in kinds.iter().enumerate() {
            let region = SampleRegion::new(0.2, 5.0, 1000, 9000 + (li * 3 + ki) as u64).unwrap();
            let report = equivalence_scan(law, kind, &region).unwrap();
            let ok = report.sign_agreement_is_total() && report.agreement_fraction == 1.0;
            if !ok {
                all_ok = false;
                detail.push_str(&format!(
                    "{}x{}: {} disagreements; ",
                    law.name(),
                    kind.label(),
                    report.disagreements.len()
                ));
            }
        }
    }
    if detail.is_empty() {
        detail = "12 scans x 1000 samples, 100% sign agreement (GN as conjecture evidence)".into();
    }
    criterion(3, "csp-tsts-equivalence-scan", all_ok, &detail);
}

#[test]
fn criterion_04_neo_hooke_counterexample() {
    let law = neo_hooke(1.0, 1.0);
    let region = SampleRegion::new(0.02, 200.0, 1, 7).unwrap();
    let witness = counterexample_search(&law, &RateKind::Zj, &region, 100_000).unwrap();
    match witness {
        Some(w) => {
            let b = SymPd3::new(Sym3::from_voigt(w.b)).unwrap();
            let jac = sigma_hat_jacobian(&law, &b).unwrap();
            let invertible = jac.invert().is_ok();
            criterion(
                4,
                "neo-hooke-counterexample",
                w.value < -1e-10 && invertible,
                &format!(
                    "witness value {:.3e} after {} probes, det jacobian {:.3e} (nonzero: {invertible})",
                    w.value, w.probes_used, jac.det()
                ),
            );
        }
        None => criterion(4, "neo-hooke-counterexample", false, "no witness in budget"),
    }
}

#[test]
fn criterion_05_richter_principal_minor() {
    // sym Jacobian of principal stresses in log stretches at
    // (x, y) = (log 20, 0): leading 2x2 minor is 80 - (1 + 40 + 400)/4
    let law = richter(0.5);
    let jac = principal_jacobian(&law, [20.0, 1.0, 3.0]).unwrap();
    let minor = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    let expect = 80.0 - (1.0 + 40.0 + 400.0) / 4.0;
    let err = (minor - expect).abs();
    criterion(
        5,
        "richter-principal-minor",
        err < 1e-9,
        &format!("minor {minor:.12} vs {expect} (err {err:.3e}, tol 1e-9)"),
    );
}

#[test]
fn criterion_06_hencky_monotonicity_witness_pair() {
    let (mu, lambda) = (0.01, 1.0);
    let law = hencky(mu, lambda);
    let v1 = SymPd3::from_diag(3.0, 1.0 / 3.0, 1.0).unwrap();
    let v2 = SymPd3::from_diag(1.0, 2.0, 1.0).unwrap();
    let value = mono_in_v_pair(&law, &v1, &v2);
    let expect = 2.0 * mu * (2.0 * 18.0f64.ln() - 6.0f64.ln() / 3.0) - lambda * 2.0f64.ln() / 3.0;
    let b1 = SymPd3::new(Sym3::sym_part(&(v1.to_mat() * v1.to_mat()))).unwrap();
    let b2 = SymPd3::new(Sym3::sym_part(&(v2.to_mat() * v2.to_mat()))).unwrap();
    let log_gap = tsts_pair(&law, &b1, &b2);
    let ok = (value - expect).abs() < 1e-10 && value < 0.0 && log_gap > 0.0;
    criterion(
        6,
        "hencky-v-vs-log-monotonicity",
        ok,
        &format!(
            "<dsigma, dV> = {value:.12} (expect {expect:.12}, negative), <dsigma, dlogB> = {log_gap:.6} (positive)"
        ),
    );
}

#[test]
fn criterion_07_exp_hencky_thresholds() {
    // k = 1 > 3/8: strong log-monotonicity everywhere on the region
    let stable = exp_hencky(1.0, 1.0, 1.0, 1.0);
    let region = SampleRegion::new(0.2, 5.0, 1000, 1234).unwrap();
    let mut min_tsts = f64::INFINITY;
    for b in region.draw() {
        min_tsts = min_tsts.min(tsts_min_eig(&stable, &b).unwrap());
    }

    // k = 0.2 < 3/8 control (volumetric part off, matching the threshold
    // statement for the deviatoric energy): search for a negative sample
    let control = exp_hencky(1.0, 0.0, 0.2, 1.0);
    let search_region = SampleRegion::new(0.2, 5.0, 1, 555).unwrap();
    let witness = counterexample_search(&control, &RateKind::Zj, &search_region, 20_000).unwrap();
    let control_detail = match &witness {
        Some(w) => {
            let b = SymPd3::new(Sym3::from_voigt(w.b)).unwrap();
            let t = tsts_min_eig(&control, &b).unwrap();
            format!(
                "k=0.2 witness value {:.3e}, tsts min eig {:.3e}",
                w.value, t
            )
        }
        // the 3/8 threshold is sufficient only; absence of a witness is
        // recorded as evidence, not failed
        None => "k=0.2: no witness found within budget (recorded, not failed)".to_string(),
    };
    let control_ok = match &witness {
        Some(w) => {
            let b = SymPd3::new(Sym3::from_voigt(w.b)).unwrap();
            w.value < -1e-10 && tsts_min_eig(&control, &b).unwrap() < 0.0
        }
        None => true,
    };
    criterion(
        7,
        "exp-hencky-thresholds",
        min_tsts > 0.0 && control_ok,
        &format!("k=1 min tsts eig {min_tsts:.3e} over 1000 samples; {control_detail}"),
    );
}

#[test]
fn criterion_08_identity_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut failures = Vec::new();

    // Noll spin identity for laws with analytic derivatives
    let mut worst_noll: f64 = 0.0;
    for _ in 0..100 {
        let b = random_spd(&mut rng, 0.3, 3.0);
        let omega = Skew3::from_entries(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        for law in [mu_b_binv(1.0, 1.0), hencky(1.0, 1.0), neo_hooke(1.0, 1.0)] {
            worst_noll = worst_noll.max(noll_spin_identity_residual(&law, &b, &omega).unwrap());
        }
    }
    if worst_noll >= 1e-10 {
        failures.push(format!("noll {worst_noll:.3e}"));
    }

    // universal chain rule along random paths (FD-limited)
    let mut worst_chain: f64 = 0.0;
    for i in 0..100 {
        let (path, t0) = random_linear_path(&mut rng);
        let law = if i % 2 == 0 {
            hencky(1.0, 1.0)
        } else {
            mu_b_binv(1.0, 1.0)
        };
        let kind = match i % 4 {
            0 => RateKind::Zj,
            1 => RateKind::Gn,
            2 => RateKind::Log,
            _ => RateKind::MaterialSpin(SpinFamilyCoeffs::constant(0.4, 0.1, -0.2)),
        };
        worst_chain = worst_chain.max(chain_rule_residual(&law, &path, t0, &kind).unwrap());
    }
    if worst_chain >= 1e-6 {
        failures.push(format!("chain-rule {worst_chain:.3e}"));
    }

    // product rule for the Zaremba-Jaumann rate on (B, B^-1)
    let law_b = ConstitutiveLaw::new(
        "b",
        std::collections::BTreeMap::new(),
        |b: &SymPd3| *b.sym(),
        None,
        false,
    );
    let law_binv = ConstitutiveLaw::new(
        "b-inv",
        std::collections::BTreeMap::new(),
        |b: &SymPd3| b.inverse(),
        None,
        false,
    );
    let mut worst_product: f64 = 0.0;
    for _ in 0..100 {
        let (path, t0) = random_linear_path(&mut rng);
        worst_product = worst_product
            .max(product_rule_residual(&law_b, &law_binv, &path, t0, &RateKind::Zj).unwrap());
    }
    if worst_product >= 1e-6 {
        failures.push(format!("zj-product-rule {worst_product:.3e}"));
    }

    // Truesdell product-rule defect equals sigma1 (2D - tr(D) 1) sigma2
    let mut worst_tr: f64 = 0.0;
    for _ in 0..100 {
        let (path, t0) = random_linear_path(&mut rng);
        let st = state_at(&path, t0).unwrap();
        let defect =
            product_rule_defect(&law_b, &law_binv, &path, t0, &RateKind::Truesdell).unwrap();
        let s1 = st.b.to_mat();
        let s2 = st.b.inverse().to_mat();
        let middle = st.d.to_mat().scale(2.0) - Mat3::identity().scale(st.d.trace());
        let expect = s1 * middle * s2;
        worst_tr = worst_tr.max((defect - expect).norm() / expect.norm().max(1.0));
    }
    if worst_tr >= 1e-6 {
        failures.push(format!("truesdell-defect {worst_tr:.3e}"));
    }

    // trace identity tr(D_B log B.[B D + D B]) = 2 tr D
    let mut worst_trace: f64 = 0.0;
    for _ in 0..100 {
        let b = random_spd(&mut rng, 0.3, 3.0);
        let d = random_sym(&mut rng, 1.0);
        let h = Sym3::anticommutator(b.sym(), &d);
        let g = frechet_primary(&b, ScaleFunction::Log, &h).unwrap();
        worst_trace = worst_trace.max((g.trace() - 2.0 * d.trace()).abs());
    }
    if worst_trace >= 1e-11 {
        failures.push(format!("trace-identity {worst_trace:.3e}"));
    }

    // Vallee: D_B [W(log B)] = D_{log B} W . B^{-1} for scalar potentials
    let mut worst_vallee: f64 = 0.0;
    let mu = 0.7;
    for _ in 0..100 {
        let b = random_spd(&mut rng, 0.4, 2.5);
        let log_b = b.map_eigenvalues(f64::ln);
        let expect = Sym3::sym_part(&(log_b.to_mat() * b.inverse().to_mat())).scaled(2.0 * mu);
        let psi = |s: &Sym3| {
            let bb = SymPd3::new(*s).unwrap();
            let l = bb.map_eigenvalues(f64::ln);
            mu * l.inner(&l)
        };
        let step = 1e-6 * (1.0 + b.sym().norm());
        let mut grad = Sym3::zero();
        for k in 0..6 {
            let e = corostab::tensor::mandel_basis(k);
            let p = psi(&(*b.sym() + step * e));
            let m = psi(&(*b.sym() - step * e));
            grad = grad + ((p - m) / (2.0 * step)) * e;
        }
        worst_vallee = worst_vallee.max((grad - expect).norm() / expect.norm().max(1.0));
    }
    if worst_vallee >= 1e-8 {
        failures.push(format!("vallee {worst_vallee:.3e}"));
    }

    // Golden-Thompson with no violations
    let mut gt_violations = 0;
    for _ in 0..200 {
        let b = random_sym(&mut rng, 1.5);
        let d = random_sym(&mut rng, 1.5);
        let lhs = corostab::tensor::apply_primary_sym(&(b + d), ScaleFunction::Exp)
            .unwrap()
            .trace();
        let rhs = (corostab::tensor::apply_primary_sym(&b, ScaleFunction::Exp)
            .unwrap()
            .to_mat()
            * corostab::tensor::apply_primary_sym(&d, ScaleFunction::Exp)
                .unwrap()
                .to_mat())
        .trace();
        if lhs > rhs * (1.0 + 1e-12) + 1e-12 {
            gt_violations += 1;
        }
    }
    if gt_violations > 0 {
        failures.push(format!("golden-thompson {gt_violations} violations"));
    }

    // perfect-fluid rate universality: identical induced stiffness for
    // ZJ, GN and Log, equal to the volumetric closed form
    let fluid = perfect_fluid(ScalarVolLaw::convex_default());
    let mut worst_fluid: f64 = 0.0;
    for _ in 0..100 {
        let b = random_spd(&mut rng, 0.3, 3.0);
        let h_zj = induced_stiffness(&fluid, &b, &RateKind::Zj).unwrap();
        let h_gn = induced_stiffness(&fluid, &b, &RateKind::Gn).unwrap();
        let h_log = induced_stiffness(&fluid, &b, &RateKind::Log).unwrap();
        let s = b.det().sqrt();
        let closed = Tensor4::from_action(|d| {
            // h(x) = x^2 - 2 x has h'' = 2
            (2.0 * s * d.trace()) * Sym3::identity()
        });
        let scale = closed.norm().max(1.0);
        worst_fluid = worst_fluid
            .max(h_zj.sub(&h_gn).norm() / scale)
            .max(h_zj.sub(&h_log).norm() / scale)
            .max(h_zj.sub(&closed).norm() / scale);
    }
    if worst_fluid >= 1e-10 {
        failures.push(format!("fluid-universality {worst_fluid:.3e}"));
    }

    // major symmetry of the kinematic A operators
    let spins = [
        SpinFamilyCoeffs::constant(0.5, 0.0, 0.0),
        SpinFamilyCoeffs::constant(0.0, 0.3, 0.1),
        SpinFamilyCoeffs::new(
            "spin:invariant",
            |i1, _, _| 1.0 / (1.0 + i1),
            |_, i2, _| 0.1 / (1.0 + i2),
            |_, _, i3| -0.2 / (1.0 + i3),
        ),
    ];
    let mut worst_asym: f64 = 0.0;
    for _ in 0..100 {
        let b = random_spd(&mut rng, 0.3, 3.0);
        let mut kinds = vec![RateKind::Zj, RateKind::Gn, RateKind::Log];
        for s in &spins {
            kinds.push(RateKind::MaterialSpin(s.clone()));
        }
        for kind in kinds {
            let a = a_operator(&b, &kind).unwrap();
            worst_asym = worst_asym.max(a.asymmetry() / a.norm().max(1.0));
        }
    }
    if worst_asym >= 1e-10 {
        failures.push(format!("a-operator-symmetry {worst_asym:.3e}"));
    }

    criterion(
        8,
        "identity-suite",
        failures.is_empty(),
        &if failures.is_empty() {
            format!(
                "noll {worst_noll:.1e}, chain {worst_chain:.1e}, product {worst_product:.1e}, truesdell-defect {worst_tr:.1e}, trace {worst_trace:.1e}, vallee {worst_vallee:.1e}, golden-thompson 0 violations, fluid {worst_fluid:.1e}, A-symmetry {worst_asym:.1e}"
            )
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_09_invertibility_correspondence() {
    let laws = [linear_finger(1.0), mu_b_binv(1.0, 1.0), hencky(1.0, 1.0)];
    let kinds = [RateKind::Zj, RateKind::Gn, RateKind::Log];
    let mut mismatches = 0usize;
    for (li, law) in laws.iter().enumerate() {
        let region = SampleRegion::new(0.2, 5.0, 1000, 4000 + li as u64).unwrap();
        for b in region.draw() {
            let mut statuses = Vec::new();
            for kind in &kinds {
                let h = induced_stiffness(law, &b, kind).unwrap();
                statuses.push(h.invert().is_ok());
            }
            statuses.push(law.dsigma_op(&b).unwrap().invert().is_ok());
            statuses.push(sigma_hat_jacobian(law, &b).unwrap().invert().is_ok());
            if !statuses.iter().all(|&s| s == statuses[0]) {
                mismatches += 1;
            }
        }
    }
    criterion(
        9,
        "invertibility-correspondence",
        mismatches == 0,
        &format!("{mismatches} status mismatches over 3 laws x 1000 samples x 5 determinants"),
    );
}

#[test]
fn criterion_10_numerics_base() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst_dk: f64 = 0.0;
    for _ in 0..100 {
        let b = random_spd(&mut rng, 0.1, 10.0); // condition <= 1e4 by construction
        let h = {
            let s = random_sym(&mut rng, 1.0);
            s.scaled(1.0 / s.norm())
        };
        for f in [ScaleFunction::Log, ScaleFunction::Sqrt, ScaleFunction::Exp] {
            let analytic = frechet_primary(&b, f, &h).unwrap();
            let step = 1e-6 * b.sym().norm();
            let (plus, minus) = (
                SymPd3::new(*b.sym() + step * h),
                SymPd3::new(*b.sym() - step * h),
            );
            if let (Ok(p), Ok(m)) = (plus, minus) {
                let fd = (1.0 / (2.0 * step))
                    * (apply_primary(&p, f).unwrap() - apply_primary(&m, f).unwrap());
                worst_dk = worst_dk.max((analytic - fd).norm() / analytic.norm().max(1e-12));
            }
        }
    }

    let mut worst_roundtrip: f64 = 0.0;
    for _ in 0..100 {
        let b = random_spd(&mut rng, 0.2, 5.0);
        // eig reconstruction
        let (vals, q) = eig_sym3(b.sym()).unwrap();
        let rec = q * Mat3::diag(vals[0], vals[1], vals[2]) * q.transpose();
        worst_roundtrip = worst_roundtrip.max((rec - b.to_mat()).norm() / b.sym().norm().max(1.0));
        // exp(log B) = B
        let back = corostab::tensor::apply_primary_sym(
            &apply_primary(&b, ScaleFunction::Log).unwrap(),
            ScaleFunction::Exp,
        )
        .unwrap();
        worst_roundtrip = worst_roundtrip.max((back - *b.sym()).norm() / b.sym().norm());
    }

    let mut worst_isometry: f64 = 0.0;
    for _ in 0..1000 {
        let a = random_sym(&mut rng, 3.0);
        let b = random_sym(&mut rng, 3.0);
        let va = mandel_encode(&a);
        let vb = mandel_encode(&b);
        let dot: f64 = va.iter().zip(vb.iter()).map(|(x, y)| x * y).sum();
        worst_isometry =
            worst_isometry.max((dot - a.inner(&b)).abs() / (a.norm() * b.norm()).max(1.0));
    }

    let ok = worst_dk < 1e-6 && worst_roundtrip < 1e-10 && worst_isometry < 1e-13;
    criterion(
        10,
        "numerics-base",
        ok,
        &format!(
            "frechet-vs-fd {worst_dk:.3e} (tol 1e-6), roundtrips {worst_roundtrip:.3e} (tol 1e-10), isometry {worst_isometry:.3e} (tol 1e-13)"
        ),
    );
}

#[test]
fn criterion_11_volumetric_ellipticity_criterion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let profiles = [
        ScalarVolLaw::convex_default(),
        ScalarVolLaw::concave_control(),
        ScalarVolLaw::log_squared(),
    ];
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for i in 0..500 {
        let vol = &profiles[i % profiles.len()];
        let mut f = Mat3::identity();
        for r in 0..3 {
            for c in 0..3 {
                f.m[r][c] += rng.random_range(-0.4..0.4);
            }
        }
        if f.det() < 0.2 {
            continue;
        }
        let xi = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let eta = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let proj = f.cofactor().inner(&Mat3::outer(xi, eta));
        let hpp = (vol.ddh)(f.det());
        if proj.abs() < 1e-6 || hpp.abs() < 1e-12 {
            continue; // degenerate draw, sign undefined
        }
        checked += 1;
        let value = volumetric_ellipticity(vol, &f, xi, eta);
        if value.signum() != hpp.signum() {
            mismatches += 1;
        }
    }
    criterion(
        11,
        "volumetric-ellipticity",
        mismatches == 0 && checked > 400,
        &format!("{checked} non-degenerate draws, {mismatches} sign mismatches"),
    );
}

#[test]
fn criterion_12_deterministic_reports() {
    let make = || {
        let law = mu_b_binv(1.0, 1.0);
        let region = SampleRegion::new(0.2, 5.0, 100, 777).unwrap();
        let scan = equivalence_scan(&law, &RateKind::Zj, &region).unwrap();
        let expectations = vec![
            Expectation::CspPositive.evaluate(&scan),
            Expectation::Agreement.evaluate(&scan),
        ];
        to_json(&CheckReport {
            meta: ReportMeta::new("check"),
            law: law.name().to_string(),
            law_params: law.params().clone(),
            rate: "zj".to_string(),
            scan,
            expectations,
        })
    };
    let a = make();
    std::thread::sleep(std::time::Duration::from_millis(3));
    let b = make();
    let identical = normalize_timestamp(&a) == normalize_timestamp(&b);
    criterion(
        12,
        "deterministic-reports",
        identical,
        "two runs with the same seed agree byte-for-byte modulo the timestamp field",
    );
}

#[test]
fn catalog_laws_are_well_formed() {
    // supplementary sanity: every registered law keeps isotropy and its
    // analytic derivative matches the FD oracle at a generic point
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for law in law_catalog() {
        let b = random_spd(&mut rng, 0.4, 2.5);
        let analytic = law.dsigma_op(&b).unwrap();
        let fd = dsigma_fd(&law, &b).unwrap();
        assert!(
            analytic.sub(&fd).norm() <= 1e-6 * analytic.norm().max(1.0),
            "{}",
            law.name()
        );
    }
}
