use weakf_core::catalog::{self, product_pack, sasakian_s3};
use weakf_core::classifiers::{classify, frame_residuals, killing_residual, theorem_check};
use weakf_core::{
    run_suite, ClassTag, ExampleSpec, GeometryError, ResidualReport, Role, Suite, SuiteConfig,
    Theorem, Tolerances, Verdict,
};

const TOL: f64 = 1e-9;

fn report(spec: ExampleSpec, suites: &[Suite]) -> ResidualReport {
    run_suite(&SuiteConfig::new(spec).with_suites(suites)).unwrap()
}

fn assert_pass(r: &ResidualReport, suite: Suite, id: &str, tol: f64) {
    let e = r
        .entry(suite, id)
        .unwrap_or_else(|| panic!("no entry {}/{id}", suite.as_str()));
    assert_eq!(e.verdict, Verdict::Pass, "{id}: {:?}", e.verdict);
    assert!(e.max <= tol, "{id}: max {}", e.max);
    assert_eq!(e.points, 50);
}

#[test]
fn product_pack_reeb_fields_are_parallel_and_killing() {
    let r = report(ExampleSpec::new("product_pack"), &[Suite::Theorems, Suite::Frames]);
    assert_pass(&r, Suite::Theorems, "prop1.nabla_xi_xi", TOL);
    assert_pass(&r, Suite::Theorems, "prop1.nabla_xi_eta", TOL);
    assert_pass(&r, Suite::Theorems, "prop1.killing", TOL);
    let s = 2;
    for i in 1..=s {
        let e = r.entry(Suite::Frames, &format!("killing[{i}]")).unwrap();
        assert!(e.max <= TOL, "killing[{i}] = {}", e.max);
    }
}

#[test]
fn prop1_direct_on_sampled_points() {
    let pack = product_pack(2, 2, 1.5);
    let tol = Tolerances::default();
    for k in 0..20 {
        let p = pack.chart().sample_point(7, k);
        let lp = pack.local(&p, 7, k as u64).unwrap();
        let entries = theorem_check(&lp, Theorem::Prop1, &tol).unwrap();
        for e in entries {
            assert!(e.residual <= TOL, "{}: {}", e.id, e.residual);
        }
        for i in 0..pack.s() {
            assert!(killing_residual(&lp, i) <= TOL);
        }
        let fr = frame_residuals(&lp);
        assert!(fr.max() <= TOL);
    }
}

#[test]
fn product_pack_constructive_weak_c() {
    let r = report(ExampleSpec::new("product_pack"), &[Suite::Theorems]);
    for id in ["nabla_xi_zero", "nabla_xi_xi", "E-c-01b", "d_eta_on_D", "D_totally_geodesic"] {
        assert_pass(&r, Suite::Theorems, &format!("thm41.{id}"), TOL);
    }
}

#[test]
fn sasakian_nearly_s_theorems() {
    let r = report(ExampleSpec::new("sasakian_s3"), &[Suite::Theorems]);
    for id in [
        "thm01_i.d_eta_eq_Phi_Q",
        "thm01_i.eta_N1_expansion",
        "thm01_i.eta_N1_chain",
        "thm01_ii.N1_eq_2Phi_Qtilde",
        "thm01_ii.dPhi_expansion",
        "thm01_ii.S_nabla_f",
        "fk_contact_nabla.nabla_xi_plus_f",
        "corollary_rigidity.S_nabla_f",
    ] {
        assert_pass(&r, Suite::Theorems, id, TOL);
    }
    // weak nearly C fails on S³, so its theorem is skipped as a whole
    let e = r.entry(Suite::Theorems, "thm41").unwrap();
    assert!(matches!(e.verdict, Verdict::Skipped(_)));
}

#[test]
fn sasakian_rigidity_classes() {
    let r = report(ExampleSpec::new("sasakian_s3"), &[Suite::Classes]);
    for id in ["normal", "weak_nearly_S", "S_structure", "weak_S", "f_K_contact"] {
        assert_pass(&r, Suite::Classes, id, TOL);
        assert_eq!(r.entry(Suite::Classes, id).unwrap().role, Role::Check);
    }
    assert!(r.overall);
}

#[test]
fn gates_reject_unsatisfied_hypotheses() {
    let pack = catalog::flat_pack(1, 1, 2.0);
    let lp = pack.local(&pack.chart().center(), 1, 0).unwrap();
    let tol = Tolerances::default();
    // flat λ = 2 is not nearly S
    let err = theorem_check(&lp, Theorem::Thm01I, &tol).unwrap_err();
    assert!(matches!(err, GeometryError::HypothesisNotSatisfied { .. }), "{err}");
    // perturbed packs fail the axiom gate before anything else
    let bad = pack.with_f_scaled(1.1);
    let lp = bad.local(&bad.chart().center(), 1, 0).unwrap();
    let err = theorem_check(&lp, Theorem::Prop1, &tol).unwrap_err();
    assert!(matches!(err, GeometryError::HypothesisNotSatisfied { .. }), "{err}");
}

#[test]
fn killing_detects_rescaled_reeb_field() {
    use weakf_core::{Jet, SmoothField};
    let pack = sasakian_s3();
    // ξ ↦ (1 + a)ξ keeps the direction but breaks the Killing property
    let xi = SmoothField::vector(3, |x| {
        let w = &x[0] + 1.0;
        vec![Jet::constant(0.0, x[0].nvars()), w.clone(), w]
    });
    let bad = pack.with_xi(0, xi);
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let p = bad.chart().sample_point(3, k);
        let lp = bad.local(&p, 3, k as u64).unwrap();
        worst = worst.max(killing_residual(&lp, 0));
    }
    assert!(worst > 0.1, "{worst}");
}

#[test]
fn weak_nearly_c_classifier_on_product() {
    let pack = product_pack(1, 2, 2.0);
    let v = classify(&pack, ClassTag::WeakNearlyC, 20, 42, TOL).unwrap();
    assert!(v.holds, "{}", v.max_residual);
    let v = classify(&pack, ClassTag::WeakAlmostS, 20, 42, TOL).unwrap();
    assert!(!v.holds && v.max_residual >= 0.5, "{}", v.max_residual);
}
