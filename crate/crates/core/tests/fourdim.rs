use approx::assert_abs_diff_eq;
use bicontact::examples::{example_4d, Kind4};
use bicontact::prolong4d::*;

const PT: [f64; 4] = [0.1, 0.9, 0.5, 0.3];

fn kinds() -> Vec<Kind4> {
    vec![
        Kind4::Ezero { eps: -1, c3: "1".into() },
        Kind4::Ezero { eps: 1, c3: "1+z^2".into() },
        Kind4::Enonzero,
    ]
}

#[test]
fn examples_satisfy_structure_equations() {
    for kind in kinds() {
        let ex = example_4d(&kind).unwrap();
        let f = ex.at(&PT, 3).unwrap();
        let s = analyze_4d(&f).unwrap();
        for (k, v) in &s.residuals {
            assert!(*v < 1e-9, "{kind:?} {k} = {v}");
        }
        assert_abs_diff_eq!(s.c.value(), ex.expected("C", &PT).unwrap().unwrap(), epsilon = 1e-10);
        assert_abs_diff_eq!(s.e.value(), ex.expected("E", &PT).unwrap().unwrap(), epsilon = 1e-10);
    }
}

#[test]
fn symplectic_quadratic_identities() {
    for kind in kinds() {
        let f = example_4d(&kind).unwrap().at(&PT, 2).unwrap();
        let r = symplectic_quadratic_check(&f, &[(0.3, 0.7), (1.0, -2.0), (-1.5, 0.2)]).unwrap();
        for (k, v) in &r {
            assert!(*v < 1e-9, "{kind:?} {k} = {v}");
        }
    }
}

#[test]
fn curvature_closed_forms() {
    for kind in kinds() {
        let f = example_4d(&kind).unwrap().at(&PT, 3).unwrap();
        let c = curvature4(&f).unwrap();
        assert_abs_diff_eq!(c.scalar, c.scalar_predicted, epsilon = 1e-9);
        assert_abs_diff_eq!(c.pfaffian, c.pfaffian_predicted, epsilon = 1e-9);
        assert!(c.theta34 < 1e-9);
        assert!(c.leaf_trace.abs() < 1e-9);
        assert!(c.connection_residual < 1e-9, "{kind:?}");
    }
}

fn tan_ode(eps: i8) -> QOde {
    QOde::canonical("tan(z)", eps, 0.0).unwrap()
}

#[test]
fn tan_potential_has_closed_form_solutions() {
    // ε = 1: Q'' = 2sec²z·Q is solved by tan z and 1 + z·tan z
    let ode = QOde::new("tan(z)", 1, 0.0, [(0.0, 1.0), (1.0, 0.0)]).unwrap();
    for z in [0.2, 0.6, 1.0] {
        let q = ode.solve_at(z).unwrap();
        assert_abs_diff_eq!(q[0], z.tan(), epsilon = 1e-8);
        assert_abs_diff_eq!(q[2], 1.0 + z * z.tan(), epsilon = 1e-8);
    }
}

#[test]
fn wronskian_is_conserved() {
    for eps in [-1, 1] {
        assert!(tan_ode(eps).wronskian_drift(0.0, 1.0, 11).unwrap() <= 1e-8);
    }
}

#[test]
fn normal_form_identity_h() {
    let h = parse_h([["1", "0"], ["0", "1"]]).unwrap();
    for eps in [-1, 1] {
        let pt = [0.3, 0.4, 0.6, 1.7];
        let nf = normal_form_4d(&tan_ode(eps), &h, pt, 3).unwrap();
        let s = analyze_4d(&nf.coframe).unwrap();
        assert_eq!(s.eps, eps);
        assert_abs_diff_eq!(s.c.value(), 0.6f64.tan(), epsilon = 1e-8);
        for (k, v) in &s.residuals {
            assert!(*v < 1e-6, "{k} = {v}");
        }
        // constant h makes ω⁴ − dw/2w closed
        assert!(s.e.value().abs() < 1e-8);
    }
}

#[test]
fn normal_form_recovers_e_equals_w() {
    let h = parse_h([["1", "0"], ["x^2/2", "1"]]).unwrap();
    for eps in [-1, 1] {
        for pt in [[0.3, 0.4, 0.6, 1.7], [-0.2, 1.1, 0.1, 0.4]] {
            let nf = normal_form_4d(&tan_ode(eps), &h, pt, 3).unwrap();
            assert_abs_diff_eq!(nf.w0, -1.0);
            let s = analyze_4d(&nf.coframe).unwrap();
            for (k, v) in &s.residuals {
                assert!(*v < 1e-6, "{k} = {v}");
            }
            assert_abs_diff_eq!(s.e.value(), pt[3], epsilon = 1e-6);
        }
    }
}

#[test]
fn e_scales_inversely_with_wronskian() {
    let h = parse_h([["1", "0"], ["x^2/2", "1"]]).unwrap();
    let ode = QOde::new("sin(z)", -1, 0.2, [(0.5, 1.0), (2.0, -1.0)]).unwrap();
    let pt = [0.3, 0.4, 0.6, 1.7];
    let nf = normal_form_4d(&ode, &h, pt, 2).unwrap();
    let e = analyze_4d(&nf.coframe).unwrap().e.value();
    assert_abs_diff_eq!(e, -pt[3] / nf.w0, epsilon = 1e-8);
}

#[test]
fn normal_form_rejects_bad_input() {
    let ode = tan_ode(1);
    let id = parse_h([["1", "0"], ["0", "1"]]).unwrap();
    assert!(matches!(
        normal_form_4d(&ode, &id, [0.1, 0.1, 0.1, -1.0], 2),
        Err(bicontact::Error::Domain { .. })
    ));
    let singular = parse_h([["x", "y"], ["x", "y"]]).unwrap();
    assert!(matches!(
        normal_form_4d(&ode, &singular, [0.1, 0.2, 0.1, 1.0], 2),
        Err(bicontact::Error::DegenerateH(_))
    ));
}
