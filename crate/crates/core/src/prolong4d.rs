//! Case-3 structures on four-dimensional charts.
//!
//! A coframe `(ω¹, ω², ω³, ω⁴)` here satisfies
//!
//! ```text
//! dω¹ = ω¹∧ω⁴ − Cω¹∧ω³ + ω²∧ω³
//! dω² = ω²∧ω⁴ + Cω²∧ω³ + εω¹∧ω³
//! dω³ = 0
//! dω⁴ = Eω¹∧ω²
//! ```
//!
//! and `θⁱ = dωⁱ` (i = 1, 2) are a pair of symplectic forms.

use std::collections::BTreeMap;

use crate::coframe::{check_volume, Coframe};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr, Params};
use crate::forms::{top_ratio, PForm};
use crate::invariants::quadratic_form;
use crate::jet::Jet;
use crate::ode::{dopri45, OdeTolerances};
use crate::riemannian::{curvature, levi_civita, scalar_curvature, pfaffian, Connection, Curvature};

fn check4(f: &Coframe) -> Result<()> {
    if f.dim() != 4 {
        return Err(Error::Structure(format!("expected a 4D coframe, got dimension {}", f.dim())));
    }
    Ok(())
}

fn max_frame_component(f: &Coframe, beta: &PForm) -> Result<f64> {
    let frame = f.frame()?;
    Ok(frame
        .components(beta)
        .iter()
        .fold(0.0, |m, v| m.max(v.value().abs())))
}

/// `E = (dω⁴∧ω³∧ω⁴)/Ω₄` and the residual of `dE = E₁ω¹ + E₂ω² + 2Eω⁴`.
pub fn compute_e(f: &Coframe) -> Result<(Jet, f64)> {
    check4(f)?;
    let vol = check_volume(f)?;
    let d4 = f.d(3).map_err(|e| e.at_stage("compute_E"))?;
    let e = top_ratio(&d4.wedge(&f.forms[2])?.wedge(&f.forms[3])?, &vol)?;
    let frame = f.frame()?;
    let e3 = frame.deriv(&e, 2).map_err(|e| e.at_stage("compute_E"))?;
    let e4 = frame.deriv(&e, 3).map_err(|e| e.at_stage("compute_E"))?;
    let residual = e3.value().abs().max((e4.value() - 2.0 * e.value()).abs());
    Ok((e, residual))
}

/// Invariants and structure-equation residuals of a 4D coframe.
#[derive(Debug, Clone)]
pub struct Symp4 {
    pub eps: i8,
    /// `C = (θ¹∧θ²)/(2Ω₄)`.
    pub c: Jet,
    pub e: Jet,
    pub residuals: BTreeMap<String, f64>,
}

pub fn analyze_4d(f: &Coframe) -> Result<Symp4> {
    check4(f)?;
    let vol = check_volume(f)?;
    let stage = |e: Error| e.at_stage("analyze_4d");
    let t1 = f.d(0).map_err(stage)?;
    let t2 = f.d(1).map_err(stage)?;
    let r22 = top_ratio(&t2.wedge(&t2)?, &vol)?;
    let eps: i8 = if r22.value() > 0.0 { -1 } else { 1 };
    let c = &top_ratio(&t1.wedge(&t2)?, &vol)? * 0.5;
    let (e, de_res) = compute_e(f).map_err(stage)?;
    let w = &f.forms;
    let epsf = eps as f64;
    let want1 = &(&w[0].wedge(&w[3])? - &w[0].wedge(&w[2])?.scale(&c)) + &w[1].wedge(&w[2])?;
    let want2 = &(&w[1].wedge(&w[3])? + &w[1].wedge(&w[2])?.scale(&c)) + &w[0].wedge(&w[2])?.scale_by(epsf);
    let want4 = w[0].wedge(&w[1])?.scale(&e);
    let d3 = f.d(2).map_err(stage)?;
    let d4 = f.d(3).map_err(stage)?;
    let mut residuals = BTreeMap::new();
    residuals.insert("symp.dw1".into(), max_frame_component(f, &(&t1 - &want1))?);
    residuals.insert("symp.dw2".into(), max_frame_component(f, &(&t2 - &want2))?);
    residuals.insert("symp.dw3".into(), max_frame_component(f, &d3)?);
    residuals.insert("symp.dw4".into(), max_frame_component(f, &(&d4 - &want4))?);
    residuals.insert("symp.dE".into(), de_res);
    Ok(Symp4 {
        eps,
        c,
        e,
        residuals,
    })
}

/// Residuals of the symplectic-quadratic identities, plus `θ_a∧θ_a/Ω₄ − 2𝒫_C(a)` over `samples`.
pub fn symplectic_quadratic_check(f: &Coframe, samples: &[(f64, f64)]) -> Result<BTreeMap<String, f64>> {
    let s = analyze_4d(f)?;
    let vol = check_volume(f)?;
    let t1 = f.d(0)?;
    let t2 = f.d(1)?;
    let ratio = |a: &PForm, b: &PForm| -> Result<f64> { Ok(top_ratio(&a.wedge(b)?, &vol)?.value()) };
    let eps = s.eps as f64;
    let c = s.c.value();
    let mut out = BTreeMap::new();
    out.insert("dtheta1".into(), max_frame_component(f, &t1.d()?)?);
    out.insert("dtheta2".into(), max_frame_component(f, &t2.d()?)?);
    out.insert("theta1^theta1".into(), (ratio(&t1, &t1)? - 2.0).abs());
    out.insert("theta2^theta2".into(), (ratio(&t2, &t2)? + 2.0 * eps).abs());
    out.insert("theta1^theta2".into(), (ratio(&t1, &t2)? - 2.0 * c).abs());
    let mut worst = 0.0f64;
    for &(a1, a2) in samples {
        let ta = &t1.scale_by(a1) + &t2.scale_by(a2);
        let r = ratio(&ta, &ta)? - 2.0 * quadratic_form(c, s.eps, a1, a2);
        worst = worst.max(r.abs());
    }
    out.insert("theta_a^theta_a".into(), worst);
    Ok(out)
}

/// Riemannian data of `g₄ = Σ(ωⁱ)²` compared with the closed forms.
#[derive(Debug, Clone)]
pub struct Curvature4 {
    pub connection: Connection,
    pub curvature: Curvature,
    pub eps: i8,
    pub c: f64,
    pub e: f64,
    pub scalar: f64,
    /// `−(E²/2 + 2C² + 7 + ε)`.
    pub scalar_predicted: f64,
    pub pfaffian: f64,
    /// `2((1+ε) + 2C²)`.
    pub pfaffian_predicted: f64,
    /// Largest component of `Θ³₄`.
    pub theta34: f64,
    /// Trace of the shape operator of the leaves of ω³.
    pub leaf_trace: f64,
    /// Largest deviation from the closed-form connection entries.
    pub connection_residual: f64,
}

pub fn curvature4(f: &Coframe) -> Result<Curvature4> {
    let s = analyze_4d(f)?;
    let conn = levi_civita(f)?;
    let curv = curvature(&conn)?;
    let (c, e) = (s.c.value(), s.e.value());
    let eps = s.eps as f64;
    let h = 0.5 * (1.0 + eps);
    // ωⁱⱼ coefficients on (ω¹, ω², ω³, ω⁴)
    let table: [((usize, usize), [f64; 4]); 6] = [
        ((0, 1), [0.0, 0.0, 0.5 * (1.0 - eps), -0.5 * e]),
        ((2, 0), [-c, h, 0.0, 0.0]),
        ((2, 1), [h, c, 0.0, 0.0]),
        ((3, 0), [1.0, 0.5 * e, 0.0, 0.0]),
        ((3, 1), [-0.5 * e, 1.0, 0.0, 0.0]),
        ((3, 2), [0.0; 4]),
    ];
    let mut connection_residual = 0.0f64;
    for ((i, j), want) in table {
        for (k, w) in want.iter().enumerate() {
            connection_residual = connection_residual.max((conn.gamma(i, j, k) - w).abs());
        }
    }
    let theta34 = curv.comps[2][3]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.value().abs()));
    let leaf_trace = conn.gamma(2, 0, 0) + conn.gamma(2, 1, 1) + conn.gamma(2, 3, 3);
    Ok(Curvature4 {
        scalar: scalar_curvature(&curv),
        scalar_predicted: -(e * e / 2.0 + 2.0 * c * c + 7.0 + eps),
        pfaffian: pfaffian(&curv)?,
        pfaffian_predicted: 2.0 * ((1.0 + eps) + 2.0 * c * c),
        theta34,
        leaf_trace,
        connection_residual,
        eps: s.eps,
        c,
        e,
        connection: conn,
        curvature: curv,
    })
}

/// `Q'' = (C² + ε + C')Q` with two sets of initial data at `z0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QOde {
    pub c: Expr,
    pub dc: Expr,
    pub eps: i8,
    pub z0: f64,
    /// `[(Q₁, Q₁'), (Q₂, Q₂')]` at `z0`.
    pub init: [(f64, f64); 2],
    pub tol: OdeTolerances,
}

impl QOde {
    /// `c` is an expression in `z`.
    pub fn new(c: &str, eps: i8, z0: f64, init: [(f64, f64); 2]) -> Result<QOde> {
        if eps != 1 && eps != -1 {
            return Err(Error::Invalid(format!("ε must be ±1, got {eps}")));
        }
        let c = parse(c, &["z".to_string()], &[])?;
        let ode = QOde {
            dc: c.diff(0),
            c,
            eps,
            z0,
            init,
            tol: OdeTolerances::default(),
        };
        if ode.wronskian0() == 0.0 {
            return Err(Error::Invalid("initial data are linearly dependent (W₀ = 0)".into()));
        }
        Ok(ode)
    }

    /// Canonical data `Q₁ = (0, 1)`, `Q₂ = (1, 0)` at `z0`, so `W₀ = −1`.
    pub fn canonical(c: &str, eps: i8, z0: f64) -> Result<QOde> {
        QOde::new(c, eps, z0, [(0.0, 1.0), (1.0, 0.0)])
    }

    pub fn wronskian0(&self) -> f64 {
        let [(q1, p1), (q2, p2)] = self.init;
        q1 * p2 - p1 * q2
    }

    /// `C² + ε + C'` at `z`.
    pub fn potential(&self, z: f64) -> Result<f64> {
        let p = Params::new();
        let c = self.c.eval(&[z], &p)?;
        Ok(c * c + self.eps as f64 + self.dc.eval(&[z], &p)?)
    }

    /// `[Q₁, Q₁', Q₂, Q₂']` at `z`.
    pub fn solve_at(&self, z: f64) -> Result<[f64; 4]> {
        let [(q1, p1), (q2, p2)] = self.init;
        let y = dopri45(
            |t, y| {
                let p = self.potential(t)?;
                Ok(vec![y[1], p * y[0], y[3], p * y[2]])
            },
            self.z0,
            &[q1, p1, q2, p2],
            z,
            self.tol,
        )?;
        Ok([y[0], y[1], y[2], y[3]])
    }

    /// Largest `|W(z) − W₀|` over `n` evenly spaced points of `[a, b]`.
    pub fn wronskian_drift(&self, a: f64, b: f64, n: usize) -> Result<f64> {
        let w0 = self.wronskian0();
        let mut worst = 0.0f64;
        for i in 0..n {
            let z = a + (b - a) * i as f64 / (n.max(2) - 1) as f64;
            let q = self.solve_at(z)?;
            worst = worst.max((q[0] * q[3] - q[1] * q[2] - w0).abs());
        }
        Ok(worst)
    }

    /// Taylor coefficients of `Q₁`, `Q₂` about `z` up to `order`, from the
    /// ODE state at `z` and the recurrence `(n+2)(n+1)q_{n+2} = Σ p_k q_{n−k}`.
    pub fn series_at(&self, z: f64, order: usize) -> Result<[Vec<f64>; 2]> {
        let state = self.solve_at(z)?;
        let pj = {
            let c = self.c.eval_jet(&[z], order, &Params::new())?;
            let dc = self.dc.eval_jet(&[z], order, &Params::new())?;
            &(&(&c * &c) + &dc) + self.eps as f64
        };
        let p: Vec<f64> = (0..=order).map(|k| pj.coeff(&[k as u8])).collect();
        let one = |q0: f64, q1: f64| {
            let mut q = vec![0.0; order + 1];
            q[0] = q0;
            if order >= 1 {
                q[1] = q1;
            }
            for n in 0..order.saturating_sub(1) {
                let s: f64 = (0..=n).map(|k| p[k] * q[n - k]).sum();
                q[n + 2] = s / ((n + 1) * (n + 2)) as f64;
            }
            q
        };
        Ok([one(state[0], state[1]), one(state[2], state[3])])
    }
}

/// Output of the 4D normal-form construction at one point.
#[derive(Debug, Clone)]
pub struct NormalForm4 {
    pub coframe: Coframe,
    pub w0: f64,
    pub det_h: f64,
    /// `[Q₁, Q₁', Q₂, Q₂']` at the point.
    pub q: [f64; 4],
}

/// `h` entries are expressions in `x`, `y`.
pub fn parse_h(h: [[&str; 2]; 2]) -> Result<[[Expr; 2]; 2]> {
    let coords: Vec<String> = ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect();
    let one = |i: usize, j: usize| -> Result<Expr> {
        let e = parse(h[i][j], &coords, &[])?;
        if !e.diff(2).is_zero() || !e.diff(3).is_zero() {
            return Err(Error::Invalid(format!("h{}{} must depend on x, y only", i + 1, j + 1)));
        }
        Ok(e)
    };
    let out = [[one(0, 0)?, one(0, 1)?], [one(1, 0)?, one(1, 1)?]];
    Ok(out)
}

/// The coframe of the 4D normal-form theorem at `(x, y, z, w)`, truncated at `order`.
pub fn normal_form_4d(ode: &QOde, h: &[[Expr; 2]; 2], point: [f64; 4], order: usize) -> Result<NormalForm4> {
    let [_, _, z, w] = point;
    if w <= 0.0 {
        return Err(Error::Domain {
            func: "normal_form_4d (w must be positive)".into(),
            value: w,
        });
    }
    let n = order + 2;
    let vars: Vec<Jet> = (0..4).map(|i| Jet::variable(4, n, i, point[i])).collect();
    let params = Params::new();
    let hj = |i: usize, j: usize| h[i][j].jet_with(&vars, &params);
    let (h11, h12, h21, h22) = (hj(0, 0)?, hj(0, 1)?, hj(1, 0)?, hj(1, 1)?);
    let det_h = &(&h11 * &h22) - &(&h12 * &h21);
    if det_h.value().abs() < 1e-12 {
        return Err(Error::DegenerateH(point.to_vec()));
    }
    let q = ode.solve_at(z)?;
    let [s1, s2] = ode.series_at(z, n)?;
    let q1 = vars[2].compose_series(&s1);
    let q2 = vars[2].compose_series(&s2);
    let c = ode.c.jet_with(&vars[2..3], &params)?;
    let inv_sqrt_w = vars[3].sqrt()?.recip()?;
    let k = &(&(&h11 * &q1) + &(&h12 * &q2)) * &inv_sqrt_w;
    let l = &(&(&h21 * &q1) + &(&h22 * &q2)) * &inv_sqrt_w;
    let kz = k.partial(2)?;
    let lz = l.partial(2)?;
    let w0 = ode.wronskian0();
    let scale = vars[3].checked_div(&(&det_h * w0))?;
    let f = &scale * &(&l.partial(0)? - &k.partial(1)?);
    let zero = vars[0].lift(0.0);
    let one = vars[0].lift(1.0);
    let w1 = PForm::one_form(vec![k.clone(), l.clone(), zero.clone(), zero.clone()])?;
    let dz_part = PForm::one_form(vec![kz, lz, zero.clone(), zero.clone()])?;
    let w2 = &w1.scale(&c) - &dz_part;
    let w3 = PForm::one_form(vec![zero.clone(), zero.clone(), one, zero.clone()])?;
    let a = &(&k * &k) * &f.checked_div(&k)?.partial(2)?;
    let b = &(&l * &l) * &f.checked_div(&l)?.partial(2)?;
    let half_inv_w = &vars[3].recip()? * 0.5;
    let w4 = PForm::one_form(vec![-&a, -&b, zero, half_inv_w])?;
    let forms = [w1, w2, w3, w4].iter().map(|p| p.truncate(order)).collect();
    let mut coframe = Coframe::raw(forms, point.to_vec());
    coframe.eps = Some(ode.eps);
    Ok(NormalForm4 {
        coframe,
        w0,
        det_h: det_h.value(),
        q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_c_solutions_are_trigonometric() {
        let ode = QOde::canonical("0", -1, 0.0).unwrap();
        for z in [0.25, 0.5, 1.0] {
            let q = ode.solve_at(z).unwrap();
            assert_relative_eq!(q[0], z.sin(), epsilon = 1e-8);
            assert_relative_eq!(q[2], z.cos(), epsilon = 1e-8);
        }
        let ode = QOde::canonical("0", 1, 0.0).unwrap();
        let q = ode.solve_at(0.8).unwrap();
        assert_relative_eq!(q[0], 0.8f64.sinh(), epsilon = 1e-8);
        assert_relative_eq!(q[2], 0.8f64.cosh(), epsilon = 1e-8);
    }

    #[test]
    fn series_matches_closed_form() {
        let ode = QOde::canonical("0", -1, 0.0).unwrap();
        let [s1, _] = ode.series_at(0.3, 6).unwrap();
        // sin(0.3 + t) = Σ sin⁽ⁿ⁾(0.3) tⁿ/n!
        let derivs = [0.3f64.sin(), 0.3f64.cos(), -0.3f64.sin(), -0.3f64.cos()];
        let mut fact = 1.0;
        for (n, c) in s1.iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            assert_relative_eq!(*c, derivs[n % 4] / fact, epsilon = 1e-9);
        }
    }

    #[test]
    fn dependent_initial_data_rejected() {
        assert!(QOde::new("z", 1, 0.0, [(1.0, 2.0), (2.0, 4.0)]).is_err());
    }

    #[test]
    fn h_must_not_depend_on_z() {
        assert!(parse_h([["1", "z"], ["0", "1"]]).is_err());
        assert!(parse_h([["1", "x*y"], ["0", "exp(x)"]]).is_ok());
    }
}
