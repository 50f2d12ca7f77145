use proptest::prelude::*;
use relspin::entanglement::{concurrence_of, Entropy};
use relspin::kinematics::{boost_momentum, wigner_matrix};
use relspin::qmath::{hermitian_eigenvalues, kron2x2, ComplexMat2, ComplexMat4, ComplexVec4, C64};
use relspin::{boosted_spin, BellState, FourMomentum, Rapidity};
use std::f64::consts::PI;

fn c64() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| C64::new(a, b))
}

fn mat2() -> impl Strategy<Value = ComplexMat2> {
    prop::array::uniform2(prop::array::uniform2(c64())).prop_map(ComplexMat2::new)
}

fn mat4() -> impl Strategy<Value = ComplexMat4> {
    prop::array::uniform4(prop::array::uniform4(c64())).prop_map(ComplexMat4::new)
}

fn unitary2() -> impl Strategy<Value = ComplexMat2> {
    (0.0..2.0 * PI, 0.0..2.0 * PI, 0.0..PI, 0.0..2.0 * PI).prop_map(|(a, b, c, d)| {
        let g = C64::from_polar(1.0, a);
        ComplexMat2::new([
            [g * C64::from_polar(c.cos(), b), g * C64::from_polar(c.sin(), d)],
            [-g * C64::from_polar(c.sin(), -d), g * C64::from_polar(c.cos(), -b)],
        ])
    })
}

fn cnot() -> ComplexMat4 {
    let mut m = ComplexMat4::zeros();
    for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m.0[i][j] = C64::new(1.0, 0.0);
    }
    m
}

/// Entangling two-qubit unitary.
fn unitary4() -> impl Strategy<Value = ComplexMat4> {
    (unitary2(), unitary2(), unitary2(), unitary2()).prop_map(|(a, b, c, d)| kron2x2(&a, &b) * cnot() * kron2x2(&c, &d))
}

fn density4() -> impl Strategy<Value = ComplexMat4> {
    mat4().prop_filter_map("nonzero", |g| {
        let rho = g * g.adjoint();
        let tr = rho.trace().re;
        (tr > 1e-3).then(|| rho.scale(C64::new(1.0 / tr, 0.0)))
    })
}

fn momentum() -> impl Strategy<Value = FourMomentum> {
    (0.0f64..50.0, 0.0..PI, 0.0..2.0 * PI).prop_map(|(p, t, f)| FourMomentum::new(p, t, f).unwrap())
}

fn rapidity() -> impl Strategy<Value = Rapidity> {
    (-12.0f64..12.0).prop_map(|x| Rapidity::along_z(x).unwrap())
}

proptest! {
    #[test]
    fn kron_mixed_product(a in mat2(), b in mat2(), c in mat2(), d in mat2()) {
        let lhs = kron2x2(&a, &b) * kron2x2(&c, &d);
        let rhs = kron2x2(&(a * c), &(b * d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn kron_adjoint_and_trace(a in mat2(), b in mat2()) {
        let k = kron2x2(&a, &b);
        prop_assert!(k.adjoint().max_abs_diff(&kron2x2(&a.adjoint(), &b.adjoint())) < 1e-15);
        prop_assert!((k.trace() - a.trace() * b.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_traces_invert_kron(a in mat2(), b in mat2()) {
        let k = kron2x2(&a, &b);
        prop_assert!(k.partial_trace_second().max_abs_diff(&a.scale(b.trace())) < 1e-12);
        prop_assert!(k.partial_trace_first().max_abs_diff(&b.scale(a.trace())) < 1e-12);
    }

    #[test]
    fn spectrum_is_unitarily_invariant(g in mat4(), u in unitary4()) {
        let h = g + g.adjoint();
        let a = hermitian_eigenvalues(&h).unwrap();
        let b = hermitian_eigenvalues(&(u * h * u.adjoint())).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn wigner_rotation_is_unitary(p in momentum(), xi in rapidity()) {
        let w = wigner_matrix(&p, xi);
        prop_assert!(w.unitarity_defect() < 1e-12);
    }

    #[test]
    fn boost_preserves_mass_shell(p in momentum(), xi in rapidity()) {
        let b = boost_momentum(&p, xi);
        let m2 = b.energy() * b.energy() - b.magnitude() * b.magnitude();
        prop_assert!((m2 - 1.0).abs() <= 1e-10 * b.energy() * b.energy());
    }

    #[test]
    fn singlet_with_equal_momenta_is_invariant(p in momentum(), xi in rapidity()) {
        let s = BellState::PsiMinus.vector();
        prop_assert!(boosted_spin(&s, &p, &p, xi).max_abs_diff(&s) <= 1e-12);
    }

    #[test]
    fn boosted_spin_keeps_norm(p in momentum(), q in momentum(), xi in rapidity(), v in prop::array::uniform4(c64())) {
        let v = ComplexVec4::new(v);
        prop_assume!(v.norm() > 1e-3);
        let v = v.normalized();
        prop_assert!((boosted_spin(&v, &p, &q, xi).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(rho in density4(), u in unitary2(), v in unitary2()) {
        let w = kron2x2(&u, &v);
        let a = concurrence_of(&rho, 0.0).unwrap().value;
        let b = concurrence_of(&(w * rho * w.adjoint()), 0.0).unwrap().value;
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn product_states_are_separable(a in prop::array::uniform2(c64()), b in prop::array::uniform2(c64())) {
        let v = ComplexVec4::new([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]);
        prop_assume!(v.norm() > 1e-3);
        let c = concurrence_of(&v.normalized().projector(), 0.0).unwrap().value;
        prop_assert!(c < 1e-10, "{c:e}");
    }

    #[test]
    fn entropy_bounds(rho in density4()) {
        let s = rho.von_neumann_entropy().unwrap();
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&s));
        let purity = (rho * rho).trace().re;
        prop_assert!(s > 1e-9 || (purity - 1.0).abs() < 1e-6);
    }

    #[test]
    fn concurrence_in_unit_interval(rho in density4()) {
        let c = concurrence_of(&rho, 0.0).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c.value));
        prop_assert!(c.lambda.windows(2).all(|w| w[0] >= w[1]));
    }
}
