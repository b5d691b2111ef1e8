mod common;

use common::{random_field, random_metric, random_point, rng};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::Rng;
use weakf_core::calculus::{d_twoform, exterior_derivative, lie_bracket, LocalGeometry};
use weakf_core::{FieldKind, LocalVector};

const DIM: usize = 3;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn vec_close(a: &DVector<f64>, b: &DVector<f64>, tol: f64) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| close(*x, *y, tol))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn levi_civita_is_torsion_free(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_metric(DIM, &mut r);
        let x = random_field(FieldKind::Vector, DIM, 1.0, &mut r);
        let y = random_field(FieldKind::Vector, DIM, 1.0, &mut r);
        let p = random_point(DIM, &mut r);
        let geo = LocalGeometry::at(&g, &p).unwrap();
        let (xv, yv) = (x.local_vector(&p), y.local_vector(&p));
        let lhs = geo.nabla_vector(&xv, &yv).sub(&geo.nabla_vector(&yv, &xv)).value();
        let rhs = lie_bracket(&xv, &yv).value();
        prop_assert!(vec_close(&lhs, &rhs, 1e-10), "{lhs} vs {rhs}");
    }

    #[test]
    fn levi_civita_is_metric_compatible(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_metric(DIM, &mut r);
        let fields: Vec<_> = (0..3).map(|_| random_field(FieldKind::Vector, DIM, 1.0, &mut r)).collect();
        let p = random_point(DIM, &mut r);
        let geo = LocalGeometry::at(&g, &p).unwrap();
        let [x, y, z]: [LocalVector; 3] = std::array::from_fn(|k| fields[k].local_vector(&p));
        let lhs = geo.inner_jet(&y, &z).derivative_along(x.comps()).value();
        let rhs = geo.inner_jet(&geo.nabla_vector(&x, &y), &z).value()
            + geo.inner_jet(&y, &geo.nabla_vector(&x, &z)).value();
        prop_assert!(close(lhs, rhs, 1e-10), "{lhs} vs {rhs}");
    }

    #[test]
    fn bracket_satisfies_jacobi(seed in any::<u64>()) {
        let mut r = rng(seed);
        let fields: Vec<_> = (0..3).map(|_| random_field(FieldKind::Vector, DIM, 1.0, &mut r)).collect();
        let p = random_point(DIM, &mut r);
        let [x, y, z]: [LocalVector; 3] = std::array::from_fn(|k| fields[k].local_vector(&p));
        let cyc = lie_bracket(&x, &lie_bracket(&y, &z))
            .add(&lie_bracket(&y, &lie_bracket(&z, &x)))
            .add(&lie_bracket(&z, &lie_bracket(&x, &y)))
            .value();
        prop_assert!(cyc.amax() <= 1e-9, "{cyc}");
    }

    #[test]
    fn exterior_derivative_squares_to_zero(seed in any::<u64>()) {
        let mut r = rng(seed);
        let w = random_field(FieldKind::OneForm, DIM, 1.0, &mut r);
        let p = random_point(DIM, &mut r);
        let dw = exterior_derivative(&w.local_covector(&p));
        let vs: Vec<LocalVector> = (0..3)
            .map(|_| random_field(FieldKind::Vector, DIM, 1.0, &mut r).local_vector(&p))
            .collect();
        let ddw = d_twoform(&dw, &vs[0], &vs[1], &vs[2]).value();
        prop_assert!(ddw.abs() <= 1e-9, "{ddw}");
    }

    #[test]
    fn curvature_has_riemann_symmetries(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_metric(DIM, &mut r);
        let p = random_point(DIM, &mut r);
        let geo = LocalGeometry::at(&g, &p).unwrap();
        let riem = geo.riemann().unwrap();
        let v: Vec<DVector<f64>> = (0..4)
            .map(|_| DVector::from_fn(DIM, |_, _| r.random_range(-1.0..1.0)))
            .collect();
        let (x, y, z, w) = (&v[0], &v[1], &v[2], &v[3]);
        // first Bianchi identity
        let b = riem.apply(x, y, z) + riem.apply(y, z, x) + riem.apply(z, x, y);
        prop_assert!(b.amax() <= 1e-9, "{b}");
        // g(R(X,Y)Z, W) = −g(R(X,Y)W, Z)
        let a = geo.inner(&riem.apply(x, y, z), w);
        let c = geo.inner(&riem.apply(x, y, w), z);
        prop_assert!(close(a, -c, 1e-9), "{a} vs {c}");
    }
}
