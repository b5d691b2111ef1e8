mod common;

use std::f64::consts::FRAC_PI_4;

use common::{g_inner, metric_at, tensor_at, vector_at};
use nalgebra::DMatrix;
use weakf_core::catalog::{self, Rotation};
use weakf_core::classifiers::classify;
use weakf_core::fstructure::{axioms_residual, AXIOM_KEYS};
use weakf_core::{make_example, ClassTag, ExampleSpec, GeometryError, StructurePack};

const SAMPLES: usize = 50;
const SEED: u64 = 42;

fn packs() -> Vec<StructurePack> {
    vec![
        catalog::flat_pack(1, 1, 2.0),
        catalog::flat_pack(2, 2, 0.5),
        catalog::rotated_pack(2, 1, 0.1, Rotation::Givens(0.3)).unwrap(),
        catalog::product_pack(1, 2, 2.0),
        catalog::product_pack(2, 1, 1.5),
        catalog::sasakian_s3(),
        catalog::hypersphere(1, 1.0, 1.0, true).unwrap().induce_structure().unwrap(),
    ]
}

#[test]
fn catalog_packs_satisfy_every_axiom() {
    for pack in packs() {
        let v = classify(&pack, ClassTag::WeakMetricF, SAMPLES, SEED, 1e-9).unwrap();
        assert_eq!(v.breakdown.len(), AXIOM_KEYS.len());
        assert!(v.holds, "{}: {:?}", pack.name(), v.breakdown);
        assert!(v.max_residual <= 1e-9, "{}: {}", pack.name(), v.max_residual);
    }
}

#[test]
fn axiom_breakdown_is_complete() {
    let pack = catalog::sasakian_s3();
    let lp = pack.local(&pack.chart().center(), SEED, 0).unwrap();
    let r = axioms_residual(&lp).unwrap();
    for key in AXIOM_KEYS {
        assert!(r.entries.contains_key(key), "missing {key}");
    }
}

// `f₁ = J₀`, `f₂ = R f₁ Rᵀ` for a Givens rotation in the (e₁, e₃) plane,
// written out by hand.
fn givens_structures(angle: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut f1 = DMatrix::zeros(4, 4);
    f1[(1, 0)] = 1.0;
    f1[(0, 1)] = -1.0;
    f1[(3, 2)] = 1.0;
    f1[(2, 3)] = -1.0;
    let (s, c) = angle.sin_cos();
    let r = DMatrix::from_row_slice(4, 4, &[
        c, 0.0, -s, 0.0,
        0.0, 1.0, 0.0, 0.0,
        s, 0.0, c, 0.0,
        0.0, 0.0, 0.0, 1.0,
    ]);
    let f2 = &r * &f1 * r.transpose();
    (f1, f2)
}

#[test]
fn rotated_pack_matches_combination_identity() {
    let angle = 0.3;
    for t in [0.05, 0.1, 0.2] {
        let pack = catalog::rotated_pack(2, 1, t, Rotation::Givens(angle)).unwrap();
        let (f1, f2) = givens_structures(angle);
        let psi = &f1 * &f2 + &f2 * &f1;
        let (s, c) = t.sin_cos();
        let f_oracle = &f1 * c + &f2 * s;
        let q_oracle = DMatrix::identity(4, 4) - &psi * (s * c);
        for k in 0..SAMPLES {
            let p = pack.chart().sample_point(SEED, k);
            let f = tensor_at(pack.f(), &p);
            let q = tensor_at(pack.q(), &p);
            let xi = vector_at(pack.xi(0), &p);
            let eta = vector_at(pack.eta(0), &p);
            assert!((f.view((0, 0), (4, 4)) - &f_oracle).amax() <= 1e-12);
            assert!((q.view((0, 0), (4, 4)) - &q_oracle).amax() <= 1e-12);
            // f² = −(id − sin t cos t·ψ) + η⊗ξ on all of R⁵
            let rhs = -&q + &xi * eta.transpose();
            assert!((&f * &f - rhs).amax() <= 1e-12, "t = {t}");
            let g = metric_at(pack.g(), &p);
            assert!((g_inner(&g, &xi, &xi) - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn rotated_pack_rejects_singular_q() {
    // Reflection: ψ = 2·id on the first block, so Q = 1 − sin 2t there.
    let err = catalog::rotated_pack(1, 1, FRAC_PI_4, Rotation::Reflect).unwrap_err();
    assert!(matches!(err, GeometryError::RotationNotPositive { .. }), "{err}");
    let err = catalog::rotated_pack(1, 1, FRAC_PI_4 + std::f64::consts::PI, Rotation::Reflect).unwrap_err();
    assert!(matches!(err, GeometryError::RotationNotPositive { .. }), "{err}");
    for k in 0..40 {
        let t = -1.5 + 0.077 * k as f64;
        let accepted = catalog::rotated_pack(1, 1, t, Rotation::Reflect).is_ok();
        assert_eq!(accepted, 1.0 - (2.0 * t).sin() > 1e-12, "t = {t}");
    }
}

#[test]
fn rotated_pack_rejects_degenerate_rotation() {
    let err = catalog::rotated_pack(2, 1, 0.1, Rotation::Quaternion).unwrap_err();
    assert!(matches!(err, GeometryError::DegenerateRotation { .. }), "{err}");
    assert!(catalog::rotated_pack(3, 1, 0.1, Rotation::Quaternion).is_ok());
    assert!(catalog::rotated_pack(1, 1, 0.1, Rotation::Givens(0.3)).is_err());
}

#[test]
fn rotated_pack_is_genuinely_weak() {
    let pack = catalog::rotated_pack(2, 1, 0.2, Rotation::Givens(0.3)).unwrap();
    let q = tensor_at(pack.q(), &pack.chart().center());
    assert!((q - DMatrix::identity(5, 5)).amax() > 1e-2);
}

#[test]
fn example_builder_validates_rotation_params() {
    let spec = ExampleSpec::new("rotated_pack")
        .with("n", 1)
        .with("rotation", "reflect")
        .with("t", FRAC_PI_4);
    assert!(make_example(&spec).is_err());
    let spec = ExampleSpec::new("rotated_pack").with("t", 0.1);
    let ex = make_example(&spec).unwrap();
    assert!(ex.claims_class(ClassTag::WeakMetricF));
}
