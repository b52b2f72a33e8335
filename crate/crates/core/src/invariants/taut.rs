use crate::coframe::{check_volume, Coframe, Stage};
use crate::error::{Error, Result};
use crate::forms::{top_ratio, PForm};
use crate::jet::{Elementary, Jet};

/// Output of the circle transform `η¹ = (ω¹+ω²)/√(2|1+C|)`, `η² = (ω¹−ω²)/√(2|1−C|)`.
#[derive(Debug, Clone)]
pub struct TautCircle {
    pub eta: Coframe,
    /// Volume `ω¹∧ω²∧ω³` of the input frame.
    pub omega_volume: PForm,
    /// `sgn(1+C)`, `sgn(1−C)`.
    pub branch: (i8, i8),
    pub c: f64,
    pub c3: f64,
}

impl TautCircle {
    /// `η_a∧dη_a / Ω` for constant `a`.
    pub fn volume_ratio(&self, a1: f64, a2: f64) -> Result<f64> {
        let ea = &self.eta.forms[0].scale_by(a1) + &self.eta.forms[1].scale_by(a2);
        Ok(top_ratio(&ea.wedge(&ea.d()?)?, &self.omega_volume)?.value())
    }

    /// `η¹∧η²∧η³ / Ω`, which the transform makes equal to 1.
    pub fn volume_match(&self) -> Result<f64> {
        Ok(top_ratio(&self.eta.volume()?, &self.omega_volume)?.value())
    }

    pub fn predicted(&self, a1: f64, a2: f64) -> f64 {
        taut_circle_prediction(self.c, self.c3, self.branch, a1, a2)
    }
}

/// `η_a∧dη_a / Ω` implied by the circle transform.
///
/// With `s± = sgn(1±C)` this is
/// `s₊a₁² + s₋a₂² + a₁a₂·C₃·(s₋|1+C| + s₊|1−C|) / (2|1−C²|^{3/2})`,
/// i.e. `1 + a₁a₂C₃/(1−C²)^{3/2}` on the unit circle when `|C| < 1` and
/// `1 − a₁a₂C₃/(C²−1)^{3/2}` on the hyperbola branch when `|C| > 1`.
pub fn taut_circle_prediction(c: f64, c3: f64, branch: (i8, i8), a1: f64, a2: f64) -> f64 {
    let (sp, sm) = (branch.0 as f64, branch.1 as f64);
    let cross = (sm * (1.0 + c).abs() + sp * (1.0 - c).abs()) / (2.0 * (1.0 - c * c).abs().powf(1.5));
    sp * a1 * a1 + sm * a2 * a2 + a1 * a2 * c3 * cross
}

/// Circle/hyperbola transform for ε = −1.
pub fn taut_circle_transform(f: &Coframe, c: &Jet, c3: f64) -> Result<TautCircle> {
    if f.eps != Some(-1) {
        return Err(Error::Invalid("the circle transform requires ε = −1".into()));
    }
    let c0 = c.value();
    if (1.0 + c0).abs() < 1e-12 || (1.0 - c0).abs() < 1e-12 {
        return Err(Error::Branch);
    }
    let sp: i8 = if 1.0 + c0 > 0.0 { 1 } else { -1 };
    let sm: i8 = if 1.0 - c0 > 0.0 { 1 } else { -1 };
    let one_plus = &(c + 1.0) * sp as f64;
    let one_minus = &(&(-c) + 1.0) * sm as f64;
    let k1 = (&one_plus * 2.0).sqrt()?.recip()?;
    let k2 = (&one_minus * 2.0).sqrt()?.recip()?;
    let [w1, w2, w3] = [&f.forms[0], &f.forms[1], &f.forms[2]];
    let eta1 = (w1 + w2).scale(&k1);
    let eta2 = (w1 - w2).scale(&k2);
    let k3 = -(&one_plus * &one_minus).sqrt()?;
    let eta3 = w3.scale(&k3);
    let mut eta = f.with_forms(vec![eta1, eta2, eta3]);
    eta.stage = Stage::Raw;
    Ok(TautCircle {
        eta,
        omega_volume: check_volume(f)?,
        branch: (sp, sm),
        c: c0,
        c3,
    })
}

/// The cosh/sinh transform for ε = +1 with `C = sinh θ`.
#[derive(Debug, Clone)]
pub struct TautHyperbola {
    pub eta: Coframe,
    pub theta: Jet,
    omega: Coframe,
}

impl TautHyperbola {
    /// Residuals of `η¹∧dη¹ = Ω − ω¹∧ω²∧dθ/(2cosh²θ)` and
    /// `η²∧dη² = −Ω − ω¹∧ω²∧dθ/(2cosh²θ)`, relative to Ω.
    pub fn residuals(&self) -> Result<[f64; 2]> {
        let vol = check_volume(&self.omega)?;
        let dtheta = PForm::scalar(self.theta.clone()).d()?;
        let corr = top_ratio(
            &self.omega.forms[0].wedge(&self.omega.forms[1])?.wedge(&dtheta)?,
            &vol,
        )?
        .value();
        let ch = self.theta.value().cosh();
        let corr = corr / (2.0 * ch * ch);
        let e = &self.eta.forms;
        let r1 = top_ratio(&e[0].wedge(&e[0].d()?)?, &vol)?.value() - (1.0 - corr);
        let r2 = top_ratio(&e[1].wedge(&e[1].d()?)?, &vol)?.value() - (-1.0 - corr);
        Ok([r1, r2])
    }

    /// `(η¹∧dη² + η²∧dη¹)/Ω`.
    pub fn cross_term(&self) -> Result<f64> {
        let vol = check_volume(&self.omega)?;
        let e = &self.eta.forms;
        let s = &e[0].wedge(&e[1].d()?)? + &e[1].wedge(&e[0].d()?)?;
        Ok(top_ratio(&s, &vol)?.value())
    }

    /// `η_a∧dη_a/Ω − 1` for `a` on `a₁² − a₂² = 1`.
    pub fn volume_defect(&self, a1: f64, a2: f64) -> Result<f64> {
        let vol = check_volume(&self.omega)?;
        let e = &self.eta.forms;
        let ea = &e[0].scale_by(a1) + &e[1].scale_by(a2);
        Ok(top_ratio(&ea.wedge(&ea.d()?)?, &vol)?.value() - (a1 * a1 - a2 * a2))
    }
}

pub fn taut_hyperbola_transform(f: &Coframe, c: &Jet) -> Result<TautHyperbola> {
    if f.eps != Some(1) {
        return Err(Error::Invalid("the hyperbola transform requires ε = +1".into()));
    }
    let theta = c.apply(Elementary::Asinh)?;
    let half = &theta * 0.5;
    let (ch, sh) = (
        half.apply(Elementary::Cosh)?,
        half.apply(Elementary::Sinh)?,
    );
    let sech = theta.apply(Elementary::Sech)?;
    let cosh = theta.apply(Elementary::Cosh)?;
    let [w1, w2, w3] = [&f.forms[0], &f.forms[1], &f.forms[2]];
    let eta1 = (&w1.scale(&ch) + &w2.scale(&sh)).scale(&sech);
    let eta2 = (&w2.scale(&ch) - &w1.scale(&sh)).scale(&sech);
    let eta3 = w3.scale(&cosh);
    let mut eta = f.with_forms(vec![eta1, eta2, eta3]);
    eta.stage = Stage::Raw;
    Ok(TautHyperbola {
        eta,
        theta,
        omega: f.clone(),
    })
}

/// `a₁·e₃(a₂) − a₂·e₃(a₁)`.
pub fn variable_coefficient_defect(f: &Coframe, a1: &Jet, a2: &Jet) -> Result<Jet> {
    let frame = f.frame()?;
    let d1 = frame
        .deriv(a1, 2)
        .map_err(|e| e.at_stage("variable_coefficient_defect"))?;
    let d2 = frame
        .deriv(a2, 2)
        .map_err(|e| e.at_stage("variable_coefficient_defect"))?;
    Ok(&(a1 * &d2) - &(a2 * &d1))
}
