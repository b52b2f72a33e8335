use crate::coframe::Coframe;
use crate::error::Result;

use super::adapt::{compute_c, compute_c3, one_adapt, structure_residuals};
use super::cartan::cartan_structure_check;
use super::cases::{case1_adapt, case2_adapt, case_detect, invariant_coords, Case2};
use super::classify::classify;
use super::{CaseTag, InvariantRecord, Tolerances};

/// Everything the pointwise pipeline produced.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub record: InvariantRecord,
    /// The most adapted frame reached.
    pub coframe: Coframe,
    pub case2: Option<Case2>,
}

/// One-adapt, compute C and its derivatives, classify, detect the case and
/// run the matching adaptation.
pub fn analyze_point(raw: &Coframe, tol: &Tolerances) -> Result<Analysis> {
    let one = one_adapt(raw)?;
    let f = one.coframe;
    let c = compute_c(&f)?;
    let cs = compute_c3(&f, &c)?;
    let eps = f.eps();
    let probe = case_detect(&f, tol)?;

    let mut rec = InvariantRecord::at(&f.point);
    rec.eps = Some(eps);
    rec.c = Some(c.value());
    rec.c1 = Some(cs[0].value());
    rec.c2 = Some(cs[1].value());
    rec.c3 = Some(cs[2].value());
    let (r1, r2) = structure_residuals(&f)?;
    rec.residual("adapt.w1dw1", r1);
    rec.residual("adapt.w2dw2", r2);

    let mut coframe = f.clone();
    let mut case2 = None;
    match probe.tag {
        CaseTag::Case2 => {
            let c2 = case2_adapt(&f, tol)?;
            let coords = invariant_coords(&c2)?;
            let mut r = c2.record.clone();
            r.residual("der.C_coords", coords.residual());
            r.c33 = Some(coords.c33);
            r.c333 = Some(coords.c333);
            coframe = c2.coframe.clone();
            case2 = Some(c2);
            rec = merge(rec, r);
        }
        CaseTag::Case1 => {
            let c1 = case1_adapt(&f, tol)?;
            coframe = c1.coframe.clone();
            rec = merge(rec, c1.record);
        }
        CaseTag::ConstantC => {
            if let Some(cartan) = cartan_structure_check(&f, tol.shallow)? {
                rec.k = Some(cartan.curvature());
                rec.residual("cartan.dK", cartan.dk_residual);
                for (k, v) in &cartan.residuals {
                    rec.residual(&format!("cartan.{k}"), *v);
                }
                coframe = cartan.coframe;
            }
        }
        CaseTag::Case3 => {}
    }
    rec.case = Some(probe.tag);
    rec.class = Some(classify(c.value(), eps, tol.linear_band).class);
    Ok(Analysis {
        record: rec,
        coframe,
        case2,
    })
}

/// Values from `adapted` win; residual tables are joined.
fn merge(base: InvariantRecord, adapted: InvariantRecord) -> InvariantRecord {
    let mut out = adapted;
    for (k, v) in base.residuals {
        out.residuals.entry(k).or_insert(v);
    }
    out.c1 = out.c1.or(base.c1);
    out.c2 = out.c2.or(base.c2);
    out.c3 = out.c3.or(base.c3);
    out
}
