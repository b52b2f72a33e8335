use crate::coframe::{check_volume, Coframe, Stage};
use crate::error::{Error, Result};
use crate::forms::{top_ratio, PForm};
use crate::jet::Jet;

/// Contact forms must satisfy `|ω∧dω / vol| > CONTACT_FLOOR`.
const CONTACT_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct OneAdapted {
    pub coframe: Coframe,
    /// `(ω²∧dω²)/(ω¹∧dω¹)` of the input.
    pub ratio: f64,
    /// Factor applied to ω².
    pub scale2: f64,
    /// Factor applied to ω³.
    pub scale3: f64,
}

/// Normalize the torsion so that `ω¹∧dω¹ = Ω = −ε ω²∧dω²`.
pub fn one_adapt(raw: &Coframe) -> Result<OneAdapted> {
    if raw.dim() != 3 {
        return Err(Error::Structure("one_adapt works on 3D coframes".into()));
    }
    let vol = check_volume(raw)?;
    let [w1, w2, w3] = [&raw.forms[0], &raw.forms[1], &raw.forms[2]];
    let t1 = w1.wedge(&w1.d().map_err(|e| e.at_stage("one_adapt"))?)?;
    let t2 = w2.wedge(&w2.d().map_err(|e| e.at_stage("one_adapt"))?)?;
    for (name, t) in [("omega1", &t1), ("omega2", &t2)] {
        if top_ratio(t, &vol)?.value().abs() <= CONTACT_FLOOR {
            return Err(Error::ContactFailure {
                form: name.into(),
                point: raw.point.clone(),
            });
        }
    }
    let r = top_ratio(&t2, &t1)?;
    let eps: i8 = if r.value() > 0.0 { -1 } else { 1 };
    let abs_r = if r.value() > 0.0 { r.clone() } else { -&r };
    let inv_sqrt = abs_r.sqrt()?.recip()?;
    let w2h = w2.scale(&inv_sqrt);
    let lam = top_ratio(&w1.wedge(&w2h)?.wedge(w3)?, &t1)?;
    let w3h = w3.scale(&lam.recip()?);
    let mut coframe = raw.with_forms(vec![w1.clone(), w2h, w3h]);
    coframe.eps = Some(eps);
    coframe.stage = Stage::OneAdapted;
    Ok(OneAdapted {
        coframe,
        ratio: r.value(),
        scale2: inv_sqrt.value(),
        scale3: 1.0 / lam.value(),
    })
}

/// `C = (ω¹∧dω² + ω²∧dω¹)/(2Ω)`.
pub fn compute_c(f: &Coframe) -> Result<Jet> {
    let vol = check_volume(f)?;
    let d1 = f.d(0).map_err(|e| e.at_stage("compute_C"))?;
    let d2 = f.d(1).map_err(|e| e.at_stage("compute_C"))?;
    let num = &f.forms[0].wedge(&d2)? + &f.forms[1].wedge(&d1)?;
    Ok(&top_ratio(&num, &vol)? * 0.5)
}

/// `(C₁, C₂, C₃)`: `C₃` from `dC∧ω¹∧ω² = C₃Ω`, `C₁`, `C₂` from the dual frame.
pub fn compute_c3(f: &Coframe, c: &Jet) -> Result<[Jet; 3]> {
    let vol = check_volume(f)?;
    let dc = PForm::scalar(c.clone())
        .d()
        .map_err(|e| e.at_stage("compute_C3"))?;
    let c3 = top_ratio(&dc.wedge(&f.forms[0])?.wedge(&f.forms[1])?, &vol)?;
    let frame = f.frame()?;
    let c1 = frame.deriv(c, 0)?;
    let c2 = frame.deriv(c, 1)?;
    Ok([c1, c2, c3])
}

/// Relative residuals of `ω¹∧dω¹ = Ω` and `ω²∧dω² = −εΩ`.
pub fn structure_residuals(f: &Coframe) -> Result<(f64, f64)> {
    let vol = check_volume(f)?;
    let r1 = top_ratio(&f.forms[0].wedge(&f.d(0)?)?, &vol)?.value() - 1.0;
    let r2 = top_ratio(&f.forms[1].wedge(&f.d(1)?)?, &vol)?.value() + f.eps() as f64;
    Ok((r1, r2))
}
