use approx::assert_abs_diff_eq;
use bicontact::examples::{eta_frame, example_hyp_c3, example_t2xr, normal_form_3d, sphere_frame};
use bicontact::invariants::*;
use bicontact::{Chart, CoframeSpec, Error};

const HYP_PT: [f64; 3] = [0.3, -0.2, 0.5];

fn adapted(ex: &bicontact::examples::Example, p: &[f64], order: usize) -> bicontact::Coframe {
    one_adapt(&ex.at(p, order).unwrap()).unwrap().coframe
}

#[test]
fn hyp_is_already_adapted() {
    for eps in [-1, 1] {
        let ex = example_hyp_c3(eps, "1").unwrap();
        let one = one_adapt(&ex.at(&HYP_PT, 3).unwrap()).unwrap();
        assert_eq!(one.coframe.eps(), eps);
        assert_abs_diff_eq!(one.scale2, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(one.scale3, 1.0, epsilon = 1e-12);
        let (r1, r2) = structure_residuals(&one.coframe).unwrap();
        assert!(r1 < 1e-12 && r2 < 1e-12);
    }
}

#[test]
fn rescaled_first_form_is_normalized() {
    // (2ω¹, ω², ω³) of hyp: ω² picks up the factor 2 and C is unchanged
    let chart = Chart::new(&["x", "y", "z"], &[]).unwrap();
    let spec = CoframeSpec::parse(
        chart,
        &[
            &["2", "2", "-2*((x+y)*z-(x-y))"],
            &["1", "-1", "(-(x+y)+(x-y)*z)"],
            &["0", "0", "1"],
        ],
    )
    .unwrap();
    let one = one_adapt(&spec.at(&HYP_PT, 3).unwrap()).unwrap();
    assert_eq!(one.coframe.eps(), -1);
    assert_abs_diff_eq!(one.scale2, 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(one.scale3, 1.0, epsilon = 1e-12);
    let (r1, r2) = structure_residuals(&one.coframe).unwrap();
    assert!(r1 < 1e-12 && r2 < 1e-12);
    let c = compute_c(&one.coframe).unwrap().value();
    assert_abs_diff_eq!(c, 0.5, epsilon = 1e-12);
}

#[test]
fn closed_form_is_not_contact() {
    let chart = Chart::new(&["x", "y", "z"], &[]).unwrap();
    let spec = CoframeSpec::parse(chart, &[&["1", "0", "0"], &["0", "1", "x"], &["0", "0", "1"]]).unwrap();
    let err = one_adapt(&spec.at(&[0.1, 0.2, 0.3], 2).unwrap()).unwrap_err();
    assert!(matches!(err, Error::ContactFailure { ref form, .. } if form == "omega1"), "{err}");
}

#[test]
fn c_on_the_examples() {
    let hyp = example_hyp_c3(-1, "1").unwrap();
    let c = compute_c(&adapted(&hyp, &HYP_PT, 3)).unwrap().value();
    assert_abs_diff_eq!(c, 0.5, epsilon = 1e-12);

    let t = example_t2xr(0.3, "z").unwrap();
    let c = compute_c(&adapted(&t, &[0.4, 1.1, 0.2], 3)).unwrap().value();
    assert_abs_diff_eq!(c, (0.6f64).sinh(), epsilon = 1e-12);

    let eta = eta_frame("0", "0").unwrap();
    let pi4 = std::f64::consts::FRAC_PI_4;
    let c = compute_c(&adapted(&eta, &[pi4, 2.0, 0.1], 3)).unwrap().value();
    assert_abs_diff_eq!(c, 0.5, epsilon = 1e-10);
}

#[test]
fn derivatives_of_c() {
    let ex = example_hyp_c3(-1, "1+z^2").unwrap();
    let f = adapted(&ex, &HYP_PT, 4);
    let c = compute_c(&f).unwrap();
    let cs = compute_c3(&f, &c).unwrap();
    assert_abs_diff_eq!(cs[0].value(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(cs[1].value(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(cs[2].value(), 1.25, epsilon = 1e-12);

    let t = example_t2xr(0.3, "z").unwrap();
    let f = adapted(&t, &[0.4, 1.1, 0.2], 4);
    let c = compute_c(&f).unwrap();
    for v in compute_c3(&f, &c).unwrap() {
        assert!(v.value().abs() < 1e-12);
    }
}

#[test]
fn classification_table() {
    assert_eq!(classify(0.5, -1, 1e-9).class, Class::Elliptic);
    assert_eq!(classify(0.5, -1, 1e-9).witness, Witness::Circle);
    assert_eq!(classify(2.0, -1, 1e-9).witness, Witness::Hyperbola { r: 1 });
    assert_eq!(classify(-2.0, -1, 1e-9).witness, Witness::Hyperbola { r: -1 });
    assert_eq!(classify(1.0 + 1e-12, -1, 1e-9).class, Class::Linear);
    assert_eq!(classify(-1.0, -1, 1e-9).class, Class::Linear);
    for c in [-3.0, 0.0, 0.7] {
        assert_eq!(classify(c, 1, 1e-9).class, Class::Hyperbolic);
    }
}

#[test]
fn quadratic_form_values() {
    assert_abs_diff_eq!(quadratic_form(0.5, -1, 1.0, 1.0), 3.0);
    assert_abs_diff_eq!(quadratic_form(0.5, 1, 1.0, 1.0), 1.0);
    assert_abs_diff_eq!(quadratic_form(0.0, -1, 0.6, 0.8), 1.0);
    let q = classify(0.25, -1, 1e-9);
    assert_abs_diff_eq!(q.eval(0.3, -0.7), quadratic_form(0.25, -1, 0.3, -0.7), epsilon = 1e-15);
}

#[test]
fn quadratic_form_is_the_contact_volume() {
    // ω_a∧dω_a = 𝒫_C(a)·Ω for constant a
    for eps in [-1, 1] {
        let ex = example_hyp_c3(eps, "1+z^2").unwrap();
        let f = adapted(&ex, &HYP_PT, 3);
        let c = compute_c(&f).unwrap().value();
        let vol = f.volume().unwrap();
        for (a1, a2) in [(1.0, 0.0), (0.3, 0.7), (-1.2, 0.4)] {
            let wa = &f.forms[0].scale_by(a1) + &f.forms[1].scale_by(a2);
            let r = bicontact::forms::top_ratio(&wa.wedge(&wa.d().unwrap()).unwrap(), &vol).unwrap();
            assert_abs_diff_eq!(r.value(), quadratic_form(c, eps, a1, a2), epsilon = 1e-12);
        }
    }
}

#[test]
fn taut_circle_matches_prediction() {
    for c3 in ["1", "1+z^2"] {
        let ex = example_hyp_c3(-1, c3).unwrap();
        for z in [-0.8, -0.3, 0.0, 0.4, 0.85] {
            let p = [0.2, -0.1, z];
            let f = adapted(&ex, &p, 4);
            let c = compute_c(&f).unwrap();
            let c3v = compute_c3(&f, &c).unwrap()[2].value();
            let t = taut_circle_transform(&f, &c, c3v).unwrap();
            assert_eq!(t.branch, (1, 1));
            assert_abs_diff_eq!(t.volume_match().unwrap(), 1.0, epsilon = 1e-12);
            for k in 0..8 {
                let (a2, a1) = (k as f64 * 0.785).sin_cos();
                let got = t.volume_ratio(a1, a2).unwrap();
                assert_abs_diff_eq!(got, t.predicted(a1, a2), epsilon = 1e-10);
                let want = 1.0 + a1 * a2 * c3v / (1.0 - z * z).powf(1.5);
                assert_abs_diff_eq!(got, want, epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn taut_circle_without_the_cross_factor_fails_off_the_diagonal() {
    // 1 + C₃/(1−C²)^{3/2} misses the ratio by (1 − a₁a₂)C₃/(1−C²)^{3/2}
    let ex = example_hyp_c3(-1, "1+z^2").unwrap();
    let z = 0.4;
    let f = adapted(&ex, &[0.2, -0.1, z], 4);
    let c = compute_c(&f).unwrap();
    let c3v = compute_c3(&f, &c).unwrap()[2].value();
    let t = taut_circle_transform(&f, &c, c3v).unwrap();
    let k = c3v / (1.0 - z * z).powf(1.5);
    for th in [0.0, 0.3, 1.2, 2.5] {
        let (a2, a1) = f64::sin_cos(th);
        let defect = (1.0 + k) - t.volume_ratio(a1, a2).unwrap();
        assert_abs_diff_eq!(defect, (1.0 - a1 * a2) * k, epsilon = 1e-10);
    }
    assert!(((1.0 + k) - t.volume_ratio(1.0, 0.0).unwrap()).abs() > 0.5);
}

#[test]
fn taut_circle_hyperbola_branch() {
    // |C| > 1: on a₁² − a₂² = 1 the ratio is s₊ − a₁a₂C₃/(C²−1)^{3/2}
    let ex = example_hyp_c3(-1, "1").unwrap();
    for z in [1.5, -2.0] {
        let f = adapted(&ex, &[0.1, 0.2, z], 4);
        let c = compute_c(&f).unwrap();
        let t = taut_circle_transform(&f, &c, 1.0).unwrap();
        assert_eq!(t.branch.0, -t.branch.1);
        for s in [-0.5f64, 0.0, 0.8] {
            let (a1, a2) = (s.cosh(), s.sinh());
            let got = t.volume_ratio(a1, a2).unwrap();
            let want = t.branch.0 as f64 - a1 * a2 / (z * z - 1.0).powf(1.5);
            assert_abs_diff_eq!(got, want, epsilon = 1e-10);
            assert_abs_diff_eq!(got, t.predicted(a1, a2), epsilon = 1e-10);
        }
    }
}

#[test]
fn taut_circle_rejects_the_linear_locus() {
    let ex = example_hyp_c3(-1, "1").unwrap();
    let f = adapted(&ex, &[0.1, 0.2, 1.0], 3);
    let c = compute_c(&f).unwrap();
    assert_eq!(taut_circle_transform(&f, &c, 1.0).unwrap_err(), Error::Branch);
    let g = adapted(&example_hyp_c3(1, "1").unwrap(), &[0.1, 0.2, 0.3], 3);
    let c = compute_c(&g).unwrap();
    assert!(matches!(taut_circle_transform(&g, &c, 1.0), Err(Error::Invalid(_))));
}

#[test]
fn taut_hyperbola_identities() {
    let ex = example_hyp_c3(1, "1+z^2").unwrap();
    for p in [[0.1, 0.2, 0.3], [-0.5, 0.7, -0.6], [0.9, -0.9, 0.0]] {
        let f = adapted(&ex, &p, 4);
        let c = compute_c(&f).unwrap();
        let h = taut_hyperbola_transform(&f, &c).unwrap();
        for r in h.residuals().unwrap() {
            assert!(r.abs() < 1e-10, "{p:?}: {r}");
        }
    }
    // constant C = 0: η¹ and η² are ω¹ and ω², the cross term vanishes
    let t = example_t2xr(0.0, "z").unwrap();
    let f = adapted(&t, &[0.3, 0.4, 0.1], 4);
    let c = compute_c(&f).unwrap();
    let h = taut_hyperbola_transform(&f, &c).unwrap();
    assert_abs_diff_eq!(h.theta.value(), 0.0, epsilon = 1e-14);
    assert!(h.cross_term().unwrap().abs() < 1e-12);
    for s in [0.0f64, 0.4, -1.1] {
        assert!(h.volume_defect(s.cosh(), s.sinh()).unwrap().abs() < 1e-12);
    }
}

#[test]
fn variable_coefficient_defect_values() {
    let ex = example_hyp_c3(-1, "1+z^2").unwrap();
    let f = adapted(&ex, &HYP_PT, 3);
    let vars = ex.spec.chart.seed(&HYP_PT, 3).unwrap();
    let one = vars[0].lift(1.0);
    // constant coefficients
    let d = variable_coefficient_defect(&f, &one, &vars[0].lift(0.3)).unwrap();
    assert_abs_diff_eq!(d.value(), 0.0, epsilon = 1e-14);
    // proportional coefficients
    let d = variable_coefficient_defect(&f, &vars[2], &(&vars[2] * 2.0)).unwrap();
    assert_abs_diff_eq!(d.value(), 0.0, epsilon = 1e-12);
    // a = (1, z): e₃(z) = C₃(z)
    let d = variable_coefficient_defect(&f, &one, &vars[2]).unwrap();
    assert_abs_diff_eq!(d.value(), 1.25, epsilon = 1e-12);
}

#[test]
fn eta_frame_classes_and_volume() {
    let eta = eta_frame("sin(x)", "exp(x)").unwrap();
    let pi4 = std::f64::consts::FRAC_PI_4;
    for (y, c, class) in [(2.0, 0.5, Class::Elliptic), (0.5, 2.0, Class::Hyperbolic)] {
        let f = adapted(&eta, &[pi4, y, 0.1], 3);
        let got = compute_c(&f).unwrap().value();
        assert_abs_diff_eq!(got, c, epsilon = 1e-10);
        assert_eq!(classify(got, f.eps(), 1e-9).class, class);
    }
    // η_a∧dη_a = (a₁² + a₂² + 2a₁a₂·csc(2x)/y)Ω
    let p = [0.5, 1.3, 0.2];
    let f = adapted(&eta, &p, 3);
    let c = (1.0f64).sin().recip() / 1.3;
    let vol = f.volume().unwrap();
    for (a1, a2) in [(1.0, 1.0), (0.3, -0.7)] {
        let wa = &f.forms[0].scale_by(a1) + &f.forms[1].scale_by(a2);
        let r = bicontact::forms::top_ratio(&wa.wedge(&wa.d().unwrap()).unwrap(), &vol).unwrap();
        assert_abs_diff_eq!(r.value(), a1 * a1 + a2 * a2 + 2.0 * a1 * a2 * c, epsilon = 1e-8);
    }
}

#[test]
fn case_detection_on_the_examples() {
    let tol = Tolerances::default();
    let t = example_t2xr(0.3, "z").unwrap();
    assert_eq!(case_detect(&adapted(&t, &[0.4, 1.1, 0.2], 4), &tol).unwrap().tag, CaseTag::ConstantC);
    for c3 in ["1", "1+z^2"] {
        let ex = example_hyp_c3(-1, c3).unwrap();
        let probe = case_detect(&adapted(&ex, &HYP_PT, 4), &tol).unwrap();
        assert_eq!(probe.tag, CaseTag::Case3);
        assert!(probe.b_sq.unwrap() < 1e-20);
    }
    let eta = eta_frame("sin(x)", "exp(x)").unwrap();
    assert_eq!(case_detect(&adapted(&eta, &[0.4, 1.2, 0.3], 4), &tol).unwrap().tag, CaseTag::Case2);
    let nf = normal_form_3d(1, "0", "0").unwrap();
    assert_eq!(case_detect(&adapted(&nf, &[0.4, 1.2, 0.3], 4), &tol).unwrap().tag, CaseTag::Case2);
}

#[test]
fn case2_structure_equations() {
    let tol = Tolerances::default();
    for eps in [-1, 1] {
        for (fs, gs) in [("0", "0"), ("sin(x)", "exp(x)")] {
            let ex = normal_form_3d(eps, fs, gs).unwrap();
            for p in [[0.3, 1.2, 0.4], [0.6, 0.7, -0.5]] {
                let c2 = case2_adapt(&adapted(&ex, &p, 6), &tol).unwrap();
                for (k, v) in &c2.record.residuals {
                    assert!(*v < 1e-8, "eps={eps} f={fs} {k} = {v}");
                }
                let a = c2.record.a.unwrap();
                assert_abs_diff_eq!(a[0], 0.0, epsilon = 1e-8);
                assert_abs_diff_eq!(a[1], 0.0, epsilon = 1e-8);
                assert_abs_diff_eq!(a[2], ex.expected("A3", &p).unwrap().unwrap(), epsilon = 1e-8);
                assert_abs_diff_eq!(c2.record.c.unwrap(), ex.expected("C", &p).unwrap().unwrap(), epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn case2_rejects_case3() {
    let ex = example_hyp_c3(-1, "1").unwrap();
    let err = case2_adapt(&adapted(&ex, &HYP_PT, 4), &Tolerances::default()).unwrap_err();
    assert!(matches!(err, Error::DegenerateB(_)), "{err}");
}

#[test]
fn invariant_coordinates() {
    let tol = Tolerances::default();
    let eta = eta_frame("sin(x)", "exp(x)").unwrap();
    for p in [[0.3, 1.2, 0.4], [0.5, 0.8, -0.2], [0.2, 1.7, 0.9]] {
        let c2 = case2_adapt(&adapted(&eta, &p, 8), &tol).unwrap();
        let ic = invariant_coords(&c2).unwrap();
        assert!(ic.residual() < 1e-6, "{p:?}: {} vs {}", ic.omega_c, ic.predicted);
        assert!(ic.dc_dc3_residual < 1e-8, "{p:?}: {}", ic.dc_dc3_residual);
    }
    let nf = normal_form_3d(-1, "sin(x)", "exp(x)").unwrap();
    let c2 = case2_adapt(&adapted(&nf, &[0.3, 1.2, 0.4], 8), &tol).unwrap();
    let ic = invariant_coords(&c2).unwrap();
    assert!(ic.residual() < 1e-6 * (1.0 + ic.omega_c.abs()), "{ic:?}");
}

#[test]
fn case1_needs_a_nonconstant_c() {
    let t = example_t2xr(0.3, "z").unwrap();
    let err = case1_adapt(&adapted(&t, &[0.4, 1.1, 0.2], 4), &Tolerances::default()).unwrap_err();
    assert!(matches!(err, Error::CriticalPoint(_)), "{err}");
    let ex = example_hyp_c3(-1, "1").unwrap();
    let err = case1_adapt(&adapted(&ex, &HYP_PT, 4), &Tolerances::default()).unwrap_err();
    assert!(matches!(err, Error::Invalid(_)), "{err}");
}

#[test]
fn cartan_sphere_has_unit_curvature() {
    let ex = sphere_frame().unwrap();
    for p in [[0.5, 1.0, 2.0], [1.3, 4.0, 0.2]] {
        let f = adapted(&ex, &p, 4);
        let cs = cartan_structure_check(&f, 1e-9).unwrap().expect("Cartan structure");
        assert_abs_diff_eq!(cs.curvature(), 1.0, epsilon = 1e-10);
        assert!(cs.max_residual() < 1e-9);
    }
    let hyp = example_hyp_c3(-1, "1").unwrap();
    assert!(cartan_structure_check(&adapted(&hyp, &HYP_PT, 4), 1e-9).unwrap().is_none());
}

#[test]
fn cartan_curvature_scales_with_the_frame() {
    // (aω¹, aω², ω³) is again Cartan with K = 1/a²
    let ex = sphere_frame().unwrap();
    let p = [0.7, 2.0, 1.0];
    let raw = ex.at(&p, 4).unwrap();
    for a in [0.5, 2.0, 3.0] {
        let scaled = raw.with_forms(vec![raw.forms[0].scale_by(a), raw.forms[1].scale_by(a), raw.forms[2].clone()]);
        let f = one_adapt(&scaled).unwrap().coframe;
        let cs = cartan_structure_check(&f, 1e-9).unwrap().expect("Cartan structure");
        assert_abs_diff_eq!(cs.curvature(), 1.0 / (a * a), epsilon = 1e-10);
    }
}

#[test]
fn pipeline_records() {
    let tol = Tolerances::default();
    let sphere = analyze_point(&sphere_frame().unwrap().at(&[0.5, 1.0, 2.0], 6).unwrap(), &tol).unwrap();
    assert_eq!(sphere.record.case, Some(CaseTag::ConstantC));
    assert_abs_diff_eq!(sphere.record.k.unwrap(), 1.0, epsilon = 1e-10);
    assert_eq!(sphere.record.class, Some(Class::Elliptic));

    let hyp = analyze_point(&example_hyp_c3(-1, "1").unwrap().at(&[0.1, 0.2, 1.5], 6).unwrap(), &tol).unwrap();
    assert_eq!(hyp.record.case, Some(CaseTag::Case3));
    assert_eq!(hyp.record.class, Some(Class::Hyperbolic));
    assert!(hyp.case2.is_none());

    let nf = analyze_point(&normal_form_3d(-1, "0", "0").unwrap().at(&[0.3, 1.0, 0.0], 6).unwrap(), &tol).unwrap();
    assert_eq!(nf.record.case, Some(CaseTag::Case2));
    assert!(nf.case2.is_some());
    assert!(nf.record.max_residual() < 1e-6, "{:?}", nf.record.residuals);
}
