use weakf_core::catalog::{flat_pack, product_pack, sasakian_s3, EXAMPLE_NAMES};
use weakf_core::classifiers::{class_residual, class_residual_unchecked, classify};
use weakf_core::fstructure::axioms_residual;
use weakf_core::ClassTag::{self, *};
use weakf_core::{make_example, run_suite, ExampleSpec, GeometryError, StructurePack, Suite, SuiteConfig};

const SAMPLES: usize = 20;
const SEED: u64 = 42;
const TOL: f64 = 1e-9;

/// Which classes hold on each catalog example, written out independently of
/// the catalog's own claims.
fn expected(spec: &ExampleSpec) -> Vec<ClassTag> {
    let flat = vec![WeakMetricF, WeakAlmostK, WeakAlmostC, Normal, WeakK, WeakC, WeakNearlyC];
    let sasakian = vec![
        WeakMetricF, WeakAlmostK, WeakAlmostS, Normal, WeakK, WeakS, WeakNearlyS, SStructure, FKContact,
    ];
    match spec.name.as_str() {
        "sasakian_s3" => sasakian,
        "hypersphere" if spec.params.is_empty() => sasakian,
        "hypersphere" => vec![WeakMetricF, WeakAlmostK, Normal, WeakK],
        _ => flat,
    }
}

fn specs() -> Vec<ExampleSpec> {
    let mut v: Vec<ExampleSpec> = EXAMPLE_NAMES.iter().map(|n| ExampleSpec::new(*n)).collect();
    v.push(ExampleSpec::new("hypersphere").with("radius", 2));
    v.push(ExampleSpec::new("hypersphere").with("orientation", "outward"));
    v.push(ExampleSpec::new("rotated_pack").with("n", 3).with("rotation", "quaternion"));
    v.push(ExampleSpec::new("product_pack").with("n", 2).with("s", 1));
    v
}

/// Per-class verdicts on the first `SAMPLES` points, evaluating each local
/// pack once.
fn class_table(pack: &StructurePack) -> Vec<(ClassTag, bool, f64)> {
    let locals: Vec<_> = (0..SAMPLES)
        .map(|k| pack.local(&pack.chart().sample_point(SEED, k), SEED, k as u64).unwrap())
        .collect();
    ClassTag::ALL
        .iter()
        .map(|&class| {
            let mut worst: f64 = 0.0;
            let mut gated = false;
            for lp in &locals {
                match class_residual(lp, class, TOL) {
                    Ok(map) => worst = map.values().fold(worst, |a, v| a.max(*v)),
                    Err(_) => gated = true,
                }
            }
            (class, !gated && worst <= TOL, worst)
        })
        .collect()
}

#[test]
fn class_table_and_implications_hold() {
    for spec in specs() {
        let ex = make_example(&spec).unwrap();
        let pack = ex.pack().unwrap();
        let want = expected(&spec);
        let table = class_table(&pack);
        for &(class, holds, residual) in &table {
            assert_eq!(holds, want.contains(&class), "{spec}: {} residual {residual}", class.as_str());
            assert_eq!(ex.claims_class(class), want.contains(&class), "{spec}: claim {}", class.as_str());
            // classes that fail, fail clearly
            if !holds {
                assert!(residual >= 1e-3, "{spec}: {} = {residual}", class.as_str());
            }
        }
        // the public classifier agrees with the per-point evaluation
        let v = classify(&pack, WeakNearlyS, SAMPLES, SEED, TOL).unwrap();
        assert_eq!(v.holds, want.contains(&WeakNearlyS), "{spec}");

        let holds = |c: ClassTag| table.iter().any(|(k, h, _)| *k == c && *h);
        for (premise, conclusions) in IMPLICATIONS {
            if holds(*premise) {
                for c in *conclusions {
                    assert!(holds(*c), "{spec}: {} without {}", premise.as_str(), c.as_str());
                }
            }
        }
    }
}

/// Definitional implications between classes.
const IMPLICATIONS: &[(ClassTag, &[ClassTag])] = &[
    (WeakK, &[WeakAlmostK, Normal]),
    (WeakC, &[WeakAlmostC, WeakAlmostK, Normal, WeakK]),
    (WeakS, &[WeakAlmostS, Normal]),
    (WeakAlmostC, &[WeakAlmostK]),
    (FKContact, &[WeakAlmostS]),
    (SStructure, &[WeakNearlyS]),
];

/// Largest residual of each class on `pack`, with the structure axioms
/// counted: every class presupposes a weak metric f-structure.
fn classifier_residuals(pack: &StructurePack) -> Vec<(ClassTag, f64)> {
    let locals: Vec<_> = (0..SAMPLES)
        .map(|k| pack.local(&pack.chart().sample_point(SEED, k), SEED, k as u64).unwrap())
        .collect();
    let axioms = locals.iter().fold(0.0_f64, |a, lp| a.max(axioms_residual(lp).unwrap().max()));
    ClassTag::ALL
        .iter()
        .map(|&class| {
            let own = locals.iter().fold(0.0_f64, |a, lp| {
                class_residual_unchecked(lp, class).unwrap().values().fold(a, |a, v| a.max(*v))
            });
            (class, axioms.max(own))
        })
        .collect()
}

#[test]
fn every_classifier_fails_on_perturbed_packs() {
    let weak = flat_pack(1, 1, 2.0);
    let cases: Vec<(&str, StructurePack)> = vec![
        ("sasakian f*1.1", sasakian_s3().with_f_scaled(1.1)),
        ("sasakian eta*1.05", sasakian_s3().with_eta_scaled(1.05)),
        ("flat f*1.1", weak.with_f_scaled(1.1)),
        ("flat eta*1.05", weak.with_eta_scaled(1.05)),
        ("flat Q=id", weak.with_q_identity()),
        ("product Q=id", product_pack(1, 2, 2.0).with_q_identity()),
    ];
    for (name, pack) in &cases {
        for (class, r) in classifier_residuals(pack) {
            assert!(r >= 0.1, "{name}: {} = {r}", class.as_str());
        }
        for class in ClassTag::ALL {
            let v = classify(pack, class, 1, SEED, TOL);
            match (class, v) {
                (WeakMetricF, Ok(v)) => assert!(!v.holds && v.max_residual >= 0.1),
                (_, Err(GeometryError::NotWeakMetricF { residual, .. })) => assert!(residual >= 0.1),
                (_, other) => panic!("{name}: {} accepted a perturbed pack: {other:?}", class.as_str()),
            }
        }
    }
}

#[test]
fn perturbations_reach_the_class_identities() {
    // beyond the axiom gate: scaling f breaks normality and the nearly-S
    // identity on S³ by a clear margin
    let bad = sasakian_s3().with_f_scaled(1.1);
    let p = bad.chart().sample_point(SEED, 0);
    let lp = bad.local(&p, SEED, 0).unwrap();
    for class in [Normal, WeakS, WeakNearlyS, SStructure] {
        let r = class_residual_unchecked(&lp, class).unwrap().values().fold(0.0_f64, |a, v| a.max(*v));
        assert!(r >= 0.1, "{} = {r}", class.as_str());
    }
    // the axiom residuals match the closed forms 1.1² − 1 and 1.05² − 1
    let ax = axioms_residual(&lp).unwrap();
    assert!((ax.entries["f2_structure"] - 0.21).abs() <= 1e-9, "{:?}", ax.entries);
    let bad = flat_pack(1, 1, 2.0).with_eta_scaled(1.05);
    let lp = bad.local(&bad.chart().center(), SEED, 0).unwrap();
    let ax = axioms_residual(&lp).unwrap();
    assert!((ax.max() - 0.1025).abs() <= 1e-9, "{:?}", ax.entries);
}

#[test]
fn reports_are_deterministic() {
    let config = SuiteConfig::new(ExampleSpec::new("sasakian_s3"));
    let a = run_suite(&config).unwrap().to_json_string();
    let b = run_suite(&config).unwrap().to_json_string();
    assert_eq!(a, b);
    // thread count must not leak into results
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let c = pool.install(|| run_suite(&config).unwrap().to_json_string());
    assert_eq!(a, c);
    let other = run_suite(&SuiteConfig { seed: 7, ..config.clone() }).unwrap().to_json_string();
    assert_ne!(a, other);
}

#[test]
fn example_params_are_validated() {
    for spec in [
        ExampleSpec::new("no_such_example"),
        ExampleSpec::new("flat_pack").with("bogus", 1),
        ExampleSpec::new("flat_pack").with("n", 0),
        ExampleSpec::new("flat_pack").with("n", 9),
        ExampleSpec::new("flat_pack").with("lambda", "abc"),
        ExampleSpec::new("hypersphere").with("orientation", "sideways"),
        ExampleSpec::new("rotated_pack").with("rotation", "spin"),
    ] {
        assert!(make_example(&spec).is_err(), "{spec} accepted");
    }
    let mut spec = ExampleSpec::new("flat_pack");
    assert!(spec.push_assignment("n").is_err());
    spec.push_assignment("n=2").unwrap();
    assert!(make_example(&spec).is_ok());
}

#[test]
fn embedded_examples_run_the_submanifold_suite() {
    for name in ["hypersphere", "hypercylinder", "linear_subspace"] {
        let config = SuiteConfig::new(ExampleSpec::new(name)).with_suites(&[Suite::Submanifold]);
        let r = run_suite(&config).unwrap();
        assert!(r.overall, "{name}");
        assert!(r.suite(Suite::Submanifold).unwrap().not_applicable.is_none());
    }
}
