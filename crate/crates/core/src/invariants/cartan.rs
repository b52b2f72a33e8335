use std::collections::BTreeMap;

use crate::coframe::{check_volume, coeffs_in_coframe, Coframe};
use crate::error::{Error, Result};
use crate::forms::{top_ratio, PForm};
use crate::jet::Jet;

use super::cases::{kill_a12, translate_third};

/// A (−ε)-Cartan structure reduced to `dω¹ = ω²∧ω³`, `dω² = εω¹∧ω³`, `dω³ = Kω¹∧ω²`.
#[derive(Debug, Clone)]
pub struct CartanStructure {
    pub coframe: Coframe,
    pub k: Jet,
    /// `|dK∧ω¹∧ω²/Ω|`.
    pub dk_residual: f64,
    pub residuals: BTreeMap<String, f64>,
}

impl CartanStructure {
    pub fn curvature(&self) -> f64 {
        self.k.value()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().fold(self.dk_residual, |m, v| m.max(*v))
    }
}

/// Returns `None` unless `ω¹∧dω²` and `ω²∧dω¹` both vanish to `tol`.
pub fn cartan_structure_check(f: &Coframe, tol: f64) -> Result<Option<CartanStructure>> {
    let stage = |e: Error| e.at_stage("cartan_structure_check");
    let vol = check_volume(f)?;
    let d1 = f.d(0).map_err(stage)?;
    let d2 = f.d(1).map_err(stage)?;
    let x = top_ratio(&f.forms[0].wedge(&d2)?, &vol)?.value();
    let y = top_ratio(&f.forms[1].wedge(&d1)?, &vol)?.value();
    if x.abs() > tol || y.abs() > tol {
        return Ok(None);
    }
    let (b1, b2, _) = kill_a12(f, &d1, &d2)?;
    let h = translate_third(f, &b1, &b2);
    let eps = h.eps() as f64;
    let p = coeffs_in_coframe(&d1, &h)?;
    let q = coeffs_in_coframe(&d2, &h)?;
    let dw3 = h.d(2).map_err(stage)?;
    let [k23, k13, k] = coeffs_in_coframe(&dw3, &h)?;
    let mut residuals = BTreeMap::new();
    let mut put = |name: &str, v: f64| {
        residuals.insert(name.to_string(), v.abs());
    };
    // p, q are (β₂₃, β₁₃, β₁₂)
    put("dw1_23", p[0].value() - 1.0);
    put("dw1_13", p[1].value());
    put("dw1_12", p[2].value());
    put("dw2_23", q[0].value());
    put("dw2_13", q[1].value() - eps);
    put("dw2_12", q[2].value());
    put("dw3_23", k23.value());
    put("dw3_13", k13.value());
    let dk = PForm::scalar(k.clone()).d().map_err(stage)?;
    let dk_residual = top_ratio(&dk.wedge(&h.forms[0])?.wedge(&h.forms[1])?, &h.volume()?)?
        .value()
        .abs();
    Ok(Some(CartanStructure {
        coframe: h,
        k,
        dk_residual,
        residuals,
    }))
}
