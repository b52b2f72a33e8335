use approx::assert_abs_diff_eq;
use bicontact::examples::example_hyp_c3;
use bicontact::expr::parse;
use bicontact::invariants::{compute_c, one_adapt};
use bicontact::{Frame, Jet, PForm};
use proptest::prelude::*;

const DIM: usize = 3;
const ORDER: usize = 3;
// number of graded-lex coefficients for (DIM, ORDER)
const LEN: usize = 20;

fn jet() -> impl Strategy<Value = Jet> {
    prop::collection::vec(-2.0..2.0f64, LEN).prop_map(|c| Jet::from_coeffs(DIM, ORDER, c).unwrap())
}

fn one_form() -> impl Strategy<Value = PForm> {
    prop::collection::vec(jet(), DIM).prop_map(|c| PForm::one_form(c).unwrap())
}

fn close(a: &Jet, b: &Jet, tol: f64) -> bool {
    a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

fn forms_close(a: &PForm, b: &PForm, tol: f64) -> bool {
    a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| {
        let o = x.order().min(y.order());
        close(&x.truncate(o), &y.truncate(o), tol)
    })
}

/// Smooth expressions in x, y, z built from the grammar's operators.
fn expr_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("z".to_string()),
        (1u32..40).prop_map(|n| format!("{}", n as f64 / 8.0)),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}+{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}-{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*{b}")),
            inner.clone().prop_map(|a| format!("-{a}")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("({a})^2")),
            inner.prop_map(|a| format!("exp(sin({a}))")),
        ]
    })
}

fn coords() -> Vec<String> {
    vec!["x".into(), "y".into(), "z".into()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in jet(), b in jet(), c in jet()) {
        prop_assert!(close(&(&a + &b), &(&b + &a), 1e-14));
        prop_assert!(close(&(&a * &b), &(&b * &a), 1e-13));
        prop_assert!(close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-12));
        prop_assert!(close(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)), 1e-12));
        prop_assert!(close(&(&a * &a.lift(1.0)), &a, 0.0));
        prop_assert!(close(&(&a - &a), &a.lift(0.0), 0.0));
    }

    #[test]
    fn truncation_commutes_with_products(a in jet(), b in jet(), k in 0usize..=ORDER) {
        let lhs = (&a * &b).truncate(k);
        let rhs = &a.truncate(k) * &b.truncate(k);
        prop_assert!(close(&lhs, &rhs, 1e-13));
    }

    #[test]
    fn jet_derivatives_match_finite_differences(
        text in expr_text(),
        p in prop::array::uniform3(-1.0..1.0f64),
    ) {
        let e = parse(&text, &coords(), &[]).unwrap();
        let params = Default::default();
        let j = e.eval_jet(&p, 2, &params).unwrap();
        let h = 1e-5;
        for i in 0..3 {
            let mut hi = p;
            let mut lo = p;
            hi[i] += h;
            lo[i] -= h;
            let fd = (e.eval(&hi, &params).unwrap() - e.eval(&lo, &params).unwrap()) / (2.0 * h);
            let mut alpha = [0u8; 3];
            alpha[i] = 1;
            let got = j.derivative(&alpha);
            prop_assert!((got - fd).abs() <= 1e-6 * (1.0 + got.abs()), "{text}: {got} vs {fd}");
        }
    }

    #[test]
    fn parse_print_round_trip(text in expr_text()) {
        let e = parse(&text, &coords(), &[]).unwrap();
        let again = parse(&e.to_string(), &coords(), &[]).unwrap();
        prop_assert_eq!(e, again);
    }

    #[test]
    fn d_squared_vanishes(a in one_form(), f in jet()) {
        let dda = a.d().unwrap().d().unwrap();
        prop_assert!(dda.max_abs_value() < 1e-12);
        let ddf = PForm::scalar(f).d().unwrap().d().unwrap();
        prop_assert!(ddf.max_abs_value() < 1e-12);
    }

    #[test]
    fn leibniz_rule(a in one_form(), b in one_form(), f in jet()) {
        // d(α∧β) = dα∧β − α∧dβ
        let lhs = a.wedge(&b).unwrap().d().unwrap();
        let rhs = &a.d().unwrap().wedge(&b).unwrap() - &a.wedge(&b.d().unwrap()).unwrap();
        prop_assert!(forms_close(&lhs, &rhs, 1e-12));
        // d(fα) = df∧α + f dα
        let lhs = a.scale(&f).d().unwrap();
        let rhs = &PForm::scalar(f.clone()).d().unwrap().wedge(&a).unwrap() + &a.d().unwrap().scale(&f);
        prop_assert!(forms_close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn frame_components_reconstruct(
        forms in prop::collection::vec(one_form(), 3),
        beta in one_form(),
        gamma in one_form(),
    ) {
        // keep the coframe well conditioned: add 4·dxᵢ to ωⁱ
        let forms: Vec<PForm> = forms
            .iter()
            .enumerate()
            .map(|(i, w)| w + &PForm::coordinate(DIM, i, &w.coeffs()[0]).scale_by(4.0))
            .collect();
        let frame = Frame::new(&forms).unwrap();
        for p in [1, 2] {
            let b = if p == 1 { beta.clone() } else { beta.wedge(&gamma).unwrap() };
            let back = frame.reconstruct(&frame.components(&b), p).unwrap();
            let (x, y) = (back.values(), b.values());
            for (u, v) in x.iter().zip(&y) {
                prop_assert!((u - v).abs() < 1e-9 * (1.0 + v.abs()));
            }
        }
    }

    #[test]
    fn c_is_invariant_under_constant_rescaling(
        s in prop::array::uniform3(0.2..5.0f64),
        p in prop::array::uniform3(-0.8..0.8f64),
        eps in prop::sample::select(vec![-1i8, 1]),
    ) {
        let ex = example_hyp_c3(eps, "1+z^2").unwrap();
        let raw = ex.at(&p, 2).unwrap();
        let scaled = raw.with_forms((0..3).map(|i| raw.forms[i].scale_by(s[i])).collect());
        let one = one_adapt(&scaled).unwrap();
        prop_assert_eq!(one.coframe.eps(), eps);
        let c = compute_c(&one.coframe).unwrap().value();
        assert_abs_diff_eq!(c, p[2], epsilon = 1e-10);
    }
}
