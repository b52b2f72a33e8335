use std::collections::BTreeMap;
use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use bicontact::examples::*;
use bicontact::forms::top_ratio;
use bicontact::invariants::{
    analyze_point, cartan_structure_check, classify, compute_c, one_adapt, Class, Tolerances,
};
use bicontact::prolong4d::{analyze_4d, curvature4};
use bicontact::report::{run, Command, RunConfig, Source};
use bicontact::{Coframe, Error, PForm};

fn adapted(ex: &Example, p: &[f64], order: usize) -> Coframe {
    let one = one_adapt(&ex.at(p, order).unwrap()).unwrap();
    one.coframe
}

#[test]
fn hyp_c_equals_z() {
    let ex = example_hyp_c3(-1, "1").unwrap();
    let f = adapted(&ex, &[0.2, 0.4, 0.7], 3);
    assert_abs_diff_eq!(compute_c(&f).unwrap().value(), 0.7, epsilon = 1e-12);
    // ω¹∧dω² + ω²∧dω¹ = 2zΩ
    for eps in [-1, 1] {
        let ex = example_hyp_c3(eps, "1+z^2").unwrap();
        for p in [[0.1, -0.3, 0.4], [-0.8, 0.5, -0.2]] {
            let f = ex.at(&p, 2).unwrap();
            let s = &f.forms[0].wedge(&f.d(1).unwrap()).unwrap() + &f.forms[1].wedge(&f.d(0).unwrap()).unwrap();
            let r = top_ratio(&s, &f.volume().unwrap()).unwrap().value();
            assert_abs_diff_eq!(r, 2.0 * p[2], epsilon = 1e-9);
        }
    }
}

#[test]
fn hyp_classes_split_at_unit_z() {
    let ex = example_hyp_c3(-1, "1").unwrap();
    let class = |z: f64| {
        let f = adapted(&ex, &[0.1, 0.2, z], 2);
        classify(compute_c(&f).unwrap().value(), f.eps(), 1e-9).class
    };
    for z in [-0.9, 0.0, 0.6] {
        assert_eq!(class(z), Class::Elliptic);
    }
    for z in [-1.5, 1.2, 3.0] {
        assert_eq!(class(z), Class::Hyperbolic);
    }
    assert_eq!(class(1.0), Class::Linear);
}

#[test]
fn hyp_rejects_vanishing_c3() {
    let ex = example_hyp_c3(-1, "z").unwrap();
    assert!(matches!(ex.at(&[0.1, 0.2, 0.0], 2), Err(Error::Domain { .. })));
}

#[test]
fn t2xr_has_constant_c() {
    for (psi, eps) in [(0.0, 1), (0.3, 1), (-0.4, 1)] {
        let ex = example_t2xr(psi, "z").unwrap();
        let mut cs = Vec::new();
        for p in [[0.1, 0.2, 0.3], [2.0, 5.0, -0.7], [4.0, 1.0, 0.9]] {
            let one = one_adapt(&ex.at(&p, 2).unwrap()).unwrap();
            assert_eq!(one.coframe.eps(), eps);
            assert_abs_diff_eq!(one.scale2, 1.0, epsilon = 1e-12);
            cs.push(compute_c(&one.coframe).unwrap().value());
        }
        for c in cs {
            assert_abs_diff_eq!(c, (2.0 * psi as f64).sinh(), epsilon = 1e-10);
        }
    }
}

#[test]
fn t2xr_volume_coefficient() {
    let ex = example_t2xr(0.3, "z^3+z").unwrap();
    let p = [0.5, 0.6, 0.4];
    let f = ex.at(&p, 2).unwrap();
    let want = ex.expected("volume", &p).unwrap().unwrap();
    assert_abs_diff_eq!(f.volume().unwrap().top().value(), want, epsilon = 1e-12);
    assert_abs_diff_eq!(want, -(3.0 * 0.16 + 1.0) / (0.6f64).cosh(), epsilon = 1e-12);
}

#[test]
fn t2xr_rejects_a_constant_psi() {
    let ex = example_t2xr(0.3, "1").unwrap();
    assert!(ex.at(&[0.1, 0.2, 0.3], 2).and_then(|f| one_adapt(&f)).is_err());
}

#[test]
fn normal_form_c_values() {
    let ex = normal_form_3d(1, "0", "0").unwrap();
    let f = adapted(&ex, &[PI / 8.0, 1.0, 0.0], 3);
    assert_abs_diff_eq!(compute_c(&f).unwrap().value(), 1.0, epsilon = 1e-10);
    let ex = normal_form_3d(-1, "0", "0").unwrap();
    let f = adapted(&ex, &[PI / 12.0, 1.0, 0.0], 3);
    assert_abs_diff_eq!(compute_c(&f).unwrap().value(), -2.0, epsilon = 1e-10);
}

#[test]
fn normal_form_with_arbitrary_data() {
    let ex = normal_form_3d(1, "sin(x)", "exp(x)").unwrap();
    for p in [[0.3, 1.2, 0.4], [0.5, 0.6, -0.9], [0.2, 1.9, 0.0]] {
        let a = analyze_point(&ex.at(&p, 6).unwrap(), &Tolerances::default()).unwrap();
        let r = &a.record;
        for (k, v) in &r.residuals {
            if k.starts_with("struct2.") {
                assert!(*v < 1e-7, "{p:?} {k} = {v}");
            }
        }
        let [a1, a2, _] = r.a.unwrap();
        assert!(a1.abs() < 1e-7 && a2.abs() < 1e-7);
    }
}

#[test]
fn normal_form_domain() {
    let ex = normal_form_3d(1, "0", "0").unwrap();
    for p in [[0.9, 1.0, 0.0], [0.3, -1.0, 0.0], [0.0, 1.0, 0.0]] {
        assert!(matches!(ex.at(&p, 2), Err(Error::Domain { .. })), "{p:?}");
    }
    assert!(normal_form_3d(2, "0", "0").is_err());
}

#[test]
fn four_dim_examples() {
    let ez = example_4d(&Kind4::Ezero { eps: -1, c3: "1".into() }).unwrap();
    let p = [0.2, -0.3, 0.5, 0.1];
    let s = analyze_4d(&ez.at(&p, 3).unwrap()).unwrap();
    assert!(s.e.value().abs() <= 1e-10);
    for v in s.residuals.values() {
        assert!(*v <= 1e-8);
    }
    // S = −(E²/2 + 2C² + 7 + ε) at z = 0.5
    let c = curvature4(&ez.at(&p, 3).unwrap()).unwrap();
    assert_abs_diff_eq!(c.scalar, -6.5, epsilon = 1e-9);

    let en = example_4d(&Kind4::Enonzero).unwrap();
    let p = [0.3, 0.8, -0.4, 0.2];
    let f = en.at(&p, 3).unwrap();
    let s = analyze_4d(&f).unwrap();
    let want = (2.0 * p[3] - p[1] * (p[0] + p[2])).exp() / p[1];
    assert_abs_diff_eq!(s.e.value(), want, epsilon = 1e-9);
    // dω⁴ = −dy∧(dx+dz)
    let like = f.forms[0].coeffs()[0].clone();
    let dx = PForm::coordinate(4, 0, &like);
    let dy = PForm::coordinate(4, 1, &like);
    let dz = PForm::coordinate(4, 2, &like);
    let want = dy.wedge(&(&dx + &dz)).unwrap().scale_by(-1.0);
    let got = f.d(3).unwrap();
    for (a, b) in got.values().iter().zip(want.values()) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-10);
    }
    assert!(matches!(en.at(&[0.0, 1.0, 1.6, 0.0], 2), Err(Error::Domain { .. })));
}

#[test]
fn sphere_is_cartan() {
    let ex = sphere_frame().unwrap();
    for p in [[0.4, 0.0, 1.0], [2.5, 3.0, 5.0]] {
        let f = adapted(&ex, &p, 4);
        assert_abs_diff_eq!(compute_c(&f).unwrap().value(), 0.0, epsilon = 1e-12);
        let cs = cartan_structure_check(&f, 1e-9).unwrap().unwrap();
        assert_abs_diff_eq!(cs.curvature(), 1.0, epsilon = 1e-8);
        assert!(cs.dk_residual <= 1e-10);
    }
    assert!(matches!(ex.at(&[0.0, 1.0, 1.0], 2), Err(Error::Domain { .. })));
}

#[test]
fn generation_is_deterministic() {
    for name in NAMES {
        let a = by_name(name, &BTreeMap::new()).unwrap();
        let b = by_name(name, &BTreeMap::new()).unwrap();
        assert_eq!(a, b);
        let p: Vec<f64> = a.sample_box.iter().map(|(lo, hi)| 0.5 * (lo + hi) + 0.01).collect();
        let fa = a.at(&p, 3).unwrap();
        let fb = b.at(&p, 3).unwrap();
        for (x, y) in fa.forms.iter().zip(&fb.forms) {
            assert_eq!(x.values(), y.values());
        }
    }
    assert!(by_name("nope", &BTreeMap::new()).is_err());
}

#[test]
fn every_example_matches_its_table() {
    for name in NAMES {
        let src = Source::Example {
            name: name.to_string(),
            params: BTreeMap::new(),
        };
        let report = run(&RunConfig::new(src, Command::Example)).unwrap();
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).map(|c| &c.name).collect();
        assert!(report.passed, "{name}: failed {failed:?}, errors {:?}", report.errors);
    }
}
