//! Browser bindings for the demo page in `www/`.

use bicontact::examples::{example_hyp_c3, normal_form_3d};
use bicontact::invariants::{
    analyze_point, classify, compute_c, compute_c3, one_adapt, taut_circle_transform, Class,
    Tolerances,
};
use bicontact::Result;
use wasm_bindgen::prelude::*;

fn js(e: bicontact::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn class_code(c: Class) -> f64 {
    match c {
        Class::Elliptic => 0.0,
        Class::Linear => 1.0,
        Class::Hyperbolic => 2.0,
    }
}

/// C and its class over an `nx × nz` grid of the plane `y = y0`.
pub fn c_field(eps: i8, c3: &str, x: (f64, f64), z: (f64, f64), y0: f64, n: (usize, usize), band: f64) -> Result<Vec<f64>> {
    let ex = example_hyp_c3(eps, c3)?;
    let (nx, nz) = n;
    let mut out = Vec::with_capacity(2 * nx * nz);
    for j in 0..nz {
        let zj = z.0 + (z.1 - z.0) * (j as f64 + 0.5) / nz as f64;
        for i in 0..nx {
            let xi = x.0 + (x.1 - x.0) * (i as f64 + 0.5) / nx as f64;
            match ex.at(&[xi, y0, zj], 2).and_then(|f| one_adapt(&f)) {
                Ok(one) => {
                    let c = compute_c(&one.coframe)?.value();
                    out.push(c);
                    out.push(class_code(classify(c, one.coframe.eps(), band).class));
                }
                Err(_) => {
                    out.push(f64::NAN);
                    out.push(-1.0);
                }
            }
        }
    }
    Ok(out)
}

/// `[ratio, predicted]` pairs of `η_a∧dη_a/Ω` for `n` angles of `a`.
pub fn taut(c3: &str, point: [f64; 3], n: usize) -> Result<Vec<f64>> {
    let ex = example_hyp_c3(-1, c3)?;
    let one = one_adapt(&ex.at(&point, 4)?)?.coframe;
    let c = compute_c(&one)?;
    let c3v = compute_c3(&one, &c)?[2].value();
    let t = taut_circle_transform(&one, &c, c3v)?;
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        let th = std::f64::consts::TAU * k as f64 / n as f64;
        let (a2, a1) = th.sin_cos();
        out.push(t.volume_ratio(a1, a2)?);
        out.push(t.predicted(a1, a2));
    }
    Ok(out)
}

/// `[C, expected C, A₁, A₂, A₃, largest residual]` for the 3D normal form.
pub fn normal_form(eps: i8, f: &str, g: &str, point: [f64; 3]) -> Result<Vec<f64>> {
    let ex = normal_form_3d(eps, f, g)?;
    let a = analyze_point(&ex.at(&point, 6)?, &Tolerances::default())?;
    let r = &a.record;
    let want = ex.expected("C", &point).expect("C is tabulated")?;
    let arr = r.a.unwrap_or([f64::NAN; 3]);
    Ok(vec![r.c.unwrap_or(f64::NAN), want, arr[0], arr[1], arr[2], r.max_residual()])
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn c_field_map(
    eps: i8,
    c3: &str,
    x_min: f64,
    x_max: f64,
    z_min: f64,
    z_max: f64,
    y0: f64,
    nx: usize,
    nz: usize,
    band: f64,
) -> std::result::Result<Vec<f64>, JsError> {
    c_field(eps, c3, (x_min, x_max), (z_min, z_max), y0, (nx, nz), band).map_err(js)
}

#[wasm_bindgen]
pub fn taut_ratios(c3: &str, x: f64, y: f64, z: f64, n: usize) -> std::result::Result<Vec<f64>, JsError> {
    taut(c3, [x, y, z], n).map_err(js)
}

#[wasm_bindgen]
pub fn normal_form_check(eps: i8, f: &str, g: &str, x: f64, y: f64, z: f64) -> std::result::Result<Vec<f64>, JsError> {
    normal_form(eps, f, g, [x, y, z]).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_straddles_the_unit_band() {
        let v = c_field(-1, "1", (-0.5, 0.5), (-1.5, 1.5), 0.1, (4, 6), 1e-9).unwrap();
        assert_eq!(v.len(), 48);
        let classes: Vec<f64> = v.iter().skip(1).step_by(2).cloned().collect();
        assert!(classes.contains(&0.0) && classes.contains(&2.0));
        // C = z on this example
        assert!((v[0] - (-1.25)).abs() < 1e-9);
    }

    #[test]
    fn taut_prediction_matches() {
        let v = taut("1+z^2", [0.1, 0.2, 0.3], 12).unwrap();
        for p in v.chunks(2) {
            assert!((p[0] - p[1]).abs() < 1e-8);
        }
    }

    #[test]
    fn normal_form_c() {
        let v = normal_form(1, "sin(x)", "exp(x)", [std::f64::consts::PI / 8.0, 1.0, 0.2]).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-8 && (v[1] - 1.0).abs() < 1e-12);
        assert!(v[2].abs() < 1e-7 && v[3].abs() < 1e-7);
    }
}
