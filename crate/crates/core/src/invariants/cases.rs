use crate::coframe::{coeffs_in_coframe, Coframe, Stage};
use crate::error::{Error, Result};
use crate::forms::{top_ratio, PForm};
use crate::jet::Jet;

use super::adapt::{compute_c, compute_c3, structure_residuals};
use super::{CaseTag, InvariantRecord, Tolerances};

/// Pointwise case decision and the quantities it was based on.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseProbe {
    pub tag: CaseTag,
    pub c: f64,
    pub c123: [f64; 3],
    /// `B₁² + B₂²` of the frame with `ω³ = dC/C₃`, when computed.
    pub b_sq: Option<f64>,
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Replace ω³ by `dC/C₃`.
fn third_from_dc(f: &Coframe, c: &Jet, c3: &Jet) -> Result<Coframe> {
    let dc = PForm::scalar(c.clone()).d()?;
    let w3 = dc.scale(&c3.recip()?);
    Ok(f.with_forms(vec![f.forms[0].clone(), f.forms[1].clone(), w3]))
}

pub fn case_detect(f: &Coframe, tol: &Tolerances) -> Result<CaseProbe> {
    let c = compute_c(f)?;
    let cs = compute_c3(f, &c)?;
    let c123 = [cs[0].value(), cs[1].value(), cs[2].value()];
    let dnorm = norm3(&c123);
    let mut probe = CaseProbe {
        tag: CaseTag::ConstantC,
        c: c.value(),
        c123,
        b_sq: None,
    };
    if dnorm <= tol.constant_band {
        return Ok(probe);
    }
    if c123[2].abs() <= tol.c3_band * (1.0 + dnorm) {
        probe.tag = CaseTag::Case1;
        return Ok(probe);
    }
    let g = third_from_dc(f, &c, &cs[2]).map_err(|e| e.at_stage("case_detect"))?;
    let [b1, b2, _] = coeffs_in_coframe(&g.d(2).map_err(|e| e.at_stage("case_detect"))?, &g)?;
    let bsq = b1.value().powi(2) + b2.value().powi(2);
    probe.b_sq = Some(bsq);
    probe.tag = if bsq <= tol.case3_band {
        CaseTag::Case3
    } else {
        CaseTag::Case2
    };
    Ok(probe)
}

/// Fully adapted Case-2 frame with its invariants as jets.
#[derive(Debug, Clone)]
pub struct Case2 {
    pub coframe: Coframe,
    pub record: InvariantRecord,
    pub c: Jet,
    pub c3: Jet,
    pub zeta: Jet,
    /// `(A₁, A₂, A₃)`.
    pub a: [Jet; 3],
    /// `(B₁, B₂, B₃)`.
    pub b: [Jet; 3],
}

pub fn case2_adapt(f: &Coframe, tol: &Tolerances) -> Result<Case2> {
    let stage = |e: Error| e.at_stage("case2_adapt");
    let eps = f.eps() as f64;
    let c = compute_c(f).map_err(stage)?;
    let cs = compute_c3(f, &c).map_err(stage)?;
    let dnorm = norm3(&[cs[0].value(), cs[1].value(), cs[2].value()]);
    if cs[2].value().abs() <= tol.c3_band * (1.0 + dnorm) {
        return Err(Error::CriticalPoint(format!("C₃ = {:e}", cs[2].value())));
    }
    let c3 = cs[2].clone();
    let g = third_from_dc(f, &c, &c3).map_err(stage)?;
    let dw3 = g.d(2).map_err(stage)?;
    let [b1, b2, _] = coeffs_in_coframe(&dw3, &g)?;
    let s = (&(&b1 * &b1) + &(&b2 * &b2)).sqrt().map_err(stage)?;
    if s.value().powi(2) <= tol.case3_band {
        return Err(Error::DegenerateB(s.value().powi(2)));
    }
    let mut h = g.with_forms(vec![g.forms[0].scale(&s), g.forms[1].scale(&s), g.forms[2].clone()]);
    h.stage = Stage::Case2Adapted;
    h.delta = 1;

    let b = coeffs_in_coframe(&dw3, &h)?;
    let zeta = b[1].atan2(&b[0])?;
    let d1 = h.d(0).map_err(stage)?;
    let d2 = h.d(1).map_err(stage)?;
    let [p23, p13, p12] = coeffs_in_coframe(&d1, &h)?;
    let [q23, q13, q12] = coeffs_in_coframe(&d2, &h)?;
    let a2 = p12;
    let a1 = -&q12;
    let a3 = &p13 + &c;

    let mut rec = InvariantRecord::at(&f.point);
    rec.eps = f.eps;
    rec.delta = 1;
    rec.c = Some(c.value());
    rec.residual("struct2.dw1_23", p23.value() - 1.0);
    rec.residual("struct2.dw2_13", q13.value() - eps);
    rec.residual("struct2.A3_consistency", q23.value() - c.value() - a3.value());
    rec.residual("struct2.B3", b[2].value());
    rec.residual(
        "struct2.B_unit",
        b[0].value().powi(2) + b[1].value().powi(2) - 1.0,
    );
    rec.residual(
        "struct2.zeta",
        (b[1].value() - zeta.value().sin()).hypot(b[0].value() - zeta.value().cos()),
    );

    let frame = h.frame()?;
    let c1 = frame.deriv(&c, 0).map_err(stage)?.value();
    let c2 = frame.deriv(&c, 1).map_err(stage)?.value();
    let vol = h.volume()?;
    let dc = PForm::scalar(c.clone()).d().map_err(stage)?;
    let c3h = top_ratio(&dc.wedge(&h.forms[0])?.wedge(&h.forms[1])?, &vol)?;
    rec.residual("struct2.C1", c1);
    rec.residual("struct2.C2", c2);
    rec.residual("struct2.dC_eq_C3w3", c3h.value() - c3.value());
    let (r1, r2) = structure_residuals(&h).map_err(stage)?;
    rec.residual("adapt.w1dw1", r1);
    rec.residual("adapt.w2dw2", r2);
    let c_again = compute_c(&h).map_err(stage)?;
    rec.residual("struct2.C_invariant", c_again.value() - c.value());

    // dζ = (W cos ζ + δA₂)ω¹ − (δW sin ζ + δA₁)ω² + ζ₃ω³
    let z1 = frame.deriv(&zeta, 0).map_err(stage)?.value();
    let z2 = frame.deriv(&zeta, 1).map_err(stage)?.value();
    let z3 = frame.deriv(&zeta, 2).map_err(stage)?.value();
    let (sz, cz) = zeta.value().sin_cos();
    let w = cz * (z1 - a2.value()) - sz * (z2 + a1.value());
    let fit = (z1 - a2.value() - w * cz).hypot(z2 + a1.value() + w * sz);
    rec.residual("der.zeta_fit", fit);

    rec.c1 = Some(c1);
    rec.c2 = Some(c2);
    rec.c3 = Some(c3.value());
    rec.a = Some([a1.value(), a2.value(), a3.value()]);
    rec.b = Some([b[0].value(), b[1].value(), b[2].value()]);
    rec.zeta = Some(zeta.value());
    rec.zeta3 = Some(z3);
    rec.w = Some(w);
    rec.case = Some(CaseTag::Case2);

    Ok(Case2 {
        coframe: h,
        record: rec,
        c,
        c3,
        zeta,
        a: [a1, a2, a3],
        b,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantCoords {
    pub c: f64,
    pub c3: f64,
    pub c33: f64,
    pub c333: f64,
    /// `dC∧dC₃∧dC₃₃ / Ω`.
    pub omega_c: f64,
    /// `−C₃³(1 − (1+ε)cos²ζ + 2δC sin ζ cos ζ + δζ₃)`.
    pub predicted: f64,
    /// Largest deviation of `dC∧dC₃` from `C₃²(sin ζ ω¹∧ω³ + δ cos ζ ω²∧ω³)`.
    pub dc_dc3_residual: f64,
}

impl InvariantCoords {
    pub fn residual(&self) -> f64 {
        (self.omega_c - self.predicted).abs()
    }
}

pub fn invariant_coords(case2: &Case2) -> Result<InvariantCoords> {
    let stage = |e: Error| e.at_stage("invariant_coords");
    let h = &case2.coframe;
    let frame = h.frame()?;
    let c33 = frame.deriv(&case2.c3, 2).map_err(stage)?;
    let c333 = frame.deriv(&c33, 2).map_err(stage)?;
    let dc = PForm::scalar(case2.c.clone()).d().map_err(stage)?;
    let dc3 = PForm::scalar(case2.c3.clone()).d().map_err(stage)?;
    let dc33 = PForm::scalar(c33.clone()).d().map_err(stage)?;
    let vol = h.volume()?;
    let omega_c = top_ratio(&dc.wedge(&dc3)?.wedge(&dc33)?, &vol)?.value();
    let zeta3 = frame.deriv(&case2.zeta, 2).map_err(stage)?.value();
    let (sz, cz) = case2.zeta.value().sin_cos();
    let (c, c3) = (case2.c.value(), case2.c3.value());
    let eps = h.eps() as f64;
    let delta = h.delta as f64;
    let predicted =
        -c3.powi(3) * (1.0 - (1.0 + eps) * cz * cz + 2.0 * delta * c * sz * cz + delta * zeta3);
    let comps = frame.components(&dc.wedge(&dc3)?);
    // frame 2-form order: (12), (13), (23)
    let want = [0.0, c3 * c3 * sz, delta * c3 * c3 * cz];
    let dc_dc3_residual = comps
        .iter()
        .zip(want)
        .fold(0.0f64, |m, (g, w)| m.max((g.value() - w).abs()));
    Ok(InvariantCoords {
        c,
        c3,
        c33: c33.value(),
        c333: c333.value(),
        omega_c,
        predicted,
        dc_dc3_residual,
    })
}

/// `ω³ → ω³ + b₁ω¹ + b₂ω²`.
pub fn translate_third(f: &Coframe, b1: &Jet, b2: &Jet) -> Coframe {
    let w3 = &(&f.forms[2] + &f.forms[0].scale(b1)) + &f.forms[1].scale(b2);
    f.with_forms(vec![f.forms[0].clone(), f.forms[1].clone(), w3])
}

/// `(A₁, A₂) = (−(dω²)₁₂, (dω¹)₁₂)` in the frame `f`.
fn a12(f: &Coframe, d1: &PForm, d2: &PForm) -> Result<[Jet; 2]> {
    let [_, _, p12] = coeffs_in_coframe(d1, f)?;
    let [_, _, q12] = coeffs_in_coframe(d2, f)?;
    Ok([-&q12, p12])
}

/// Translation `(b₁, b₂)` killing `A₁`, `A₂`, found by affine probing.
/// Returns `(b₁, b₂, det)` where `det` is the determinant of the probed map.
pub(super) fn kill_a12(f: &Coframe, d1: &PForm, d2: &PForm) -> Result<(Jet, Jet, f64)> {
    let like = f.forms[0].coeffs()[0].truncate(d1.order());
    let zero = like.lift(0.0);
    let one = like.lift(1.0);
    let a0 = a12(f, d1, d2)?;
    let ae1 = a12(&translate_third(f, &one, &zero), d1, d2)?;
    let ae2 = a12(&translate_third(f, &zero, &one), d1, d2)?;
    let m00 = &ae1[0] - &a0[0];
    let m10 = &ae1[1] - &a0[1];
    let m01 = &ae2[0] - &a0[0];
    let m11 = &ae2[1] - &a0[1];
    let det = &(&m00 * &m11) - &(&m01 * &m10);
    if det.value().abs() <= 1e-8 {
        return Err(Error::DegenerateTranslation(det.value()));
    }
    let inv = det.recip()?;
    // b = −M⁻¹ A(0)
    let b1 = -&(&(&(&m11 * &a0[0]) - &(&m01 * &a0[1])) * &inv);
    let b2 = -&(&(&(&m00 * &a0[1]) - &(&m10 * &a0[0])) * &inv);
    Ok((b1, b2, det.value()))
}

#[derive(Debug, Clone)]
pub struct Case1 {
    pub coframe: Coframe,
    pub record: InvariantRecord,
    pub c: Jet,
    pub xi: Jet,
    pub a3: Jet,
    pub b: [Jet; 3],
    /// Determinant of the probed translation map.
    pub probe_det: f64,
}

pub fn case1_adapt(f: &Coframe, tol: &Tolerances) -> Result<Case1> {
    let stage = |e: Error| e.at_stage("case1_adapt");
    let eps = f.eps() as f64;
    let c = compute_c(f).map_err(stage)?;
    let cs = compute_c3(f, &c).map_err(stage)?;
    let dnorm = norm3(&[cs[0].value(), cs[1].value(), cs[2].value()]);
    if dnorm <= tol.constant_band {
        return Err(Error::CriticalPoint(format!("|dC| = {dnorm:e}")));
    }
    if cs[2].value().abs() > tol.c3_band * (1.0 + dnorm) {
        return Err(Error::Invalid(format!(
            "C₃ = {:e} is nonzero; not a case-1 point",
            cs[2].value()
        )));
    }
    let s = (&(&cs[0] * &cs[0]) + &(&cs[1] * &cs[1])).sqrt().map_err(stage)?;
    let g = f.with_forms(vec![f.forms[0].scale(&s), f.forms[1].scale(&s), f.forms[2].clone()]);
    let frame_g = g.frame()?;
    let gc1 = frame_g.deriv(&c, 0).map_err(stage)?;
    let gc2 = frame_g.deriv(&c, 1).map_err(stage)?;
    let xi = gc2.atan2(&gc1)?;

    let d1 = g.d(0).map_err(stage)?;
    let d2 = g.d(1).map_err(stage)?;
    let (b1, b2, det) = kill_a12(&g, &d1, &d2)?;
    let mut h = translate_third(&g, &b1, &b2);
    h.stage = Stage::Case1Adapted;
    h.delta = 1;

    let [p23, p13, p12] = coeffs_in_coframe(&d1, &h)?;
    let [q23, q13, q12] = coeffs_in_coframe(&d2, &h)?;
    let a3 = &p13 + &c;
    let dw3 = h.d(2).map_err(stage)?;
    let b = coeffs_in_coframe(&dw3, &h)?;

    let mut rec = InvariantRecord::at(&f.point);
    rec.eps = f.eps;
    rec.c = Some(c.value());
    rec.residual("struct1.A1", q12.value());
    rec.residual("struct1.A2", p12.value());
    rec.residual("struct1.dw1_23", p23.value() - 1.0);
    rec.residual("struct1.dw2_13", q13.value() - eps);
    rec.residual("struct1.A3_consistency", q23.value() - c.value() - a3.value());
    let det_pred = a3.value().powi(2) - c.value().powi(2) - eps;
    rec.residual("struct1.probe_det", det.abs() - det_pred.abs());

    let frame = h.frame()?;
    let c1 = frame.deriv(&c, 0).map_err(stage)?.value();
    let c2 = frame.deriv(&c, 1).map_err(stage)?.value();
    let c3 = frame.deriv(&c, 2).map_err(stage)?.value();
    rec.residual("struct1.C_unit", c1 * c1 + c2 * c2 - 1.0);
    rec.residual("struct1.C3", c3);
    let (r1, r2) = structure_residuals(&h).map_err(stage)?;
    rec.residual("adapt.w1dw1", r1);
    rec.residual("adapt.w2dw2", r2);

    // dξ = −ρ sin ξ ω¹ + ρ cos ξ ω² + ξ₃ω³
    let x1 = frame.deriv(&xi, 0).map_err(stage)?.value();
    let x2 = frame.deriv(&xi, 1).map_err(stage)?.value();
    let x3 = frame.deriv(&xi, 2).map_err(stage)?.value();
    let (sx, cx) = xi.value().sin_cos();
    let rho = -sx * x1 + cx * x2;
    rec.residual("der.xi_fit", cx * x1 + sx * x2);
    if b[2].value().abs() <= tol.deep {
        let (s2, c2x) = (2.0 * xi.value()).sin_cos();
        let cv = c.value();
        let xi3 = 0.5 * (eps + 1.0) * c2x + cv * s2 + 0.5 * (1.0 - eps);
        rec.residual("der.xi3", x3 - xi3);
        rec.residual("der.A3", a3.value() - (cv * c2x - 0.5 * (1.0 + eps) * s2));
        rec.residual("der.rho", rho - s2 / (x3 + eps - 1.0));
    }
    rec.c1 = Some(c1);
    rec.c2 = Some(c2);
    rec.c3 = Some(c3);
    rec.a = Some([q12.value(), p12.value(), a3.value()]);
    rec.b = Some([b[0].value(), b[1].value(), b[2].value()]);
    rec.xi = Some(xi.value());
    rec.rho = Some(rho);
    rec.case = Some(CaseTag::Case1);
    Ok(Case1 {
        coframe: h,
        record: rec,
        c,
        xi,
        a3,
        b,
        probe_det: det,
    })
}
