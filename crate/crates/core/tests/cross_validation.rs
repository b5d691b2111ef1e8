mod common;

use common::{central_difference, christoffel_fd, g_inner, metric_at, random_field, rng, vector_at};
use nalgebra::DVector;
use rand::Rng;
use weakf_core::calculus::{nijenhuis_bracket, LocalGeometry};
use weakf_core::catalog::{flat_pack, hypersphere, product_pack, rotated_pack, sasakian_s3, Rotation};
use weakf_core::{FieldKind, LocalTensor, LocalVector, SmoothField, StructurePack};

fn catalog_packs() -> Vec<StructurePack> {
    vec![
        flat_pack(1, 1, 2.0),
        rotated_pack(2, 1, 0.1, Rotation::Givens(0.3)).unwrap(),
        product_pack(1, 2, 2.0),
        sasakian_s3(),
    ]
}

/// `f + R` for a random smooth (1,1)-field `R`, so the torsion is nonzero.
fn perturbed(f: &SmoothField, r: &SmoothField) -> SmoothField {
    let (f, r) = (f.clone(), r.clone());
    SmoothField::tensor11(f.dim(), move |x| {
        f.eval_jets(x).iter().zip(r.eval_jets(x)).map(|(a, b)| a + &b).collect()
    })
}

#[test]
fn nijenhuis_bracket_and_connection_forms_agree() {
    for pack in catalog_packs() {
        let m = pack.dim();
        let mut r = rng(0x4E4E ^ m as u64);
        let mut largest: f64 = 0.0;
        for draw in 0..100 {
            let p = pack.chart().sample_point(99, draw);
            let geo = LocalGeometry::at(pack.g(), &p).unwrap();
            let nv = geo.nvars();
            let s_field = if draw % 2 == 0 {
                pack.f().clone()
            } else {
                perturbed(pack.f(), &random_field(FieldKind::Tensor11, m, 0.5, &mut r))
            };
            let s: LocalTensor = s_field.local_tensor(&p);
            let x = LocalVector::constant(&DVector::from_fn(m, |_, _| r.random_range(-1.0..1.0)), nv);
            let y = LocalVector::constant(&DVector::from_fn(m, |_, _| r.random_range(-1.0..1.0)), nv);
            let a = nijenhuis_bracket(&s, &x, &y).value();
            let b = geo.nijenhuis_nabla(&s, &x, &y).value();
            let scale = 1.0_f64.max(a.amax());
            assert!((&a - &b).amax() <= 1e-9 * scale, "{} draw {draw}: {a} vs {b}", pack.name());
            largest = largest.max(a.amax());
        }
        // the comparison is not between two zeros
        assert!(largest > 1e-2, "{}: {largest}", pack.name());
    }
}

fn check_gradients(name: &str, field: &SmoothField, p: &weakf_core::ChartPoint) {
    let jets = field.jets_at(p);
    for k in 0..field.dim() {
        let fd = central_difference(field, p, k, common::FD_STEP);
        for (c, (jet, fd)) in jets.iter().zip(&fd).enumerate() {
            let ad = jet.gradient()[k];
            let rel = (ad - fd).abs() / ad.abs().max(1.0);
            assert!(rel <= 1e-6, "{name} comp {c} d/dx{k}: ad {ad} fd {fd}");
        }
    }
}

#[test]
fn automatic_and_finite_difference_derivatives_agree() {
    let mut packs = catalog_packs();
    packs.push(hypersphere(1, 1.0, 1.0, true).unwrap().induce_structure().unwrap());
    for pack in packs {
        for k in 0..20 {
            let p = pack.chart().sample_point(17, k);
            check_gradients("g", pack.g(), &p);
            check_gradients("f", pack.f(), &p);
            check_gradients("Q", pack.q(), &p);
            check_gradients("Phi", &pack.phi_field(), &p);
            for i in 0..pack.s() {
                check_gradients("xi", pack.xi(i), &p);
                check_gradients("eta", pack.eta(i), &p);
            }
        }
    }
}

#[test]
fn christoffel_symbols_match_metric_differences() {
    for pack in catalog_packs() {
        let m = pack.dim();
        for k in 0..10 {
            let p = pack.chart().sample_point(5, k);
            let gamma = LocalGeometry::at(pack.g(), &p).unwrap().christoffel();
            let oracle = christoffel_fd(pack.g(), &p);
            for a in 0..m {
                for i in 0..m {
                    for j in 0..m {
                        let o = oracle[(a * m + i) * m + j];
                        let e = gamma.get(a, i, j);
                        assert!((e - o).abs() <= 1e-6 * o.abs().max(1.0), "{}: {e} vs {o}", pack.name());
                    }
                }
            }
        }
    }
}

#[test]
fn sasakian_xi_sectional_curvature_is_one() {
    let pack = sasakian_s3();
    let mut r = rng(2024);
    for k in 0..20 {
        let p = pack.chart().sample_point(42, k);
        let geo = LocalGeometry::at(pack.g(), &p).unwrap();
        let g = metric_at(pack.g(), &p);
        let xi = vector_at(pack.xi(0), &p);
        assert!((g_inner(&g, &xi, &xi) - 1.0).abs() <= 1e-12);
        // random unit X ⊥ ξ
        let v = DVector::from_fn(3, |_, _| r.random_range(-1.0..1.0));
        let x = &v - &xi * g_inner(&g, &v, &xi);
        let x = &x / g_inner(&g, &x, &x).sqrt();
        let kx = geo.sectional(&xi, &x).unwrap();
        assert!((kx - 1.0).abs() <= 1e-6, "K(xi, X) = {kx}");
    }
}
