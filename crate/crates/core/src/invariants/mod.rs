//! The bi-contact equivalence pipeline, evaluated pointwise on jets.
//!
//! Every function here works at a single sample point. Region-level
//! consistency (a constant ε, a single case tag, a fixed branch of √|1±C|)
//! is enforced by [`region`].

mod adapt;
mod cartan;
mod cases;
mod classify;
mod pipeline;
pub mod region;
mod taut;

use std::collections::BTreeMap;

use serde::Serialize;

pub use adapt::{compute_c, compute_c3, one_adapt, structure_residuals, OneAdapted};
pub use cartan::{cartan_structure_check, CartanStructure};
pub use cases::{
    case1_adapt, case2_adapt, case_detect, invariant_coords, translate_third, Case1, Case2,
    CaseProbe, InvariantCoords,
};
pub use classify::{classify, quadratic_form, Class, QuadraticClassification, Witness};
pub use pipeline::{analyze_point, Analysis};
pub use taut::{
    taut_circle_prediction, taut_circle_transform, taut_hyperbola_transform,
    variable_coefficient_defect, TautCircle, TautHyperbola,
};

/// Numeric bands used to decide the exact trichotomies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Identities involving at most two derivative levels.
    pub shallow: f64,
    /// Deeper derivative chains.
    pub deep: f64,
    /// `|C₃| ≤ c3_band·(1+|dC|)` declares `C₃ = 0`.
    pub c3_band: f64,
    /// `B₁²+B₂² ≤ case3_band` declares case 3.
    pub case3_band: f64,
    /// Width of the linear class band around `|C| = 1`.
    pub linear_band: f64,
    /// `|dC| ≤ constant_band` declares C constant.
    pub constant_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            shallow: 1e-9,
            deep: 1e-6,
            c3_band: 1e-7,
            case3_band: 1e-10,
            linear_band: 1e-9,
            constant_band: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CaseTag {
    ConstantC,
    Case1,
    Case2,
    Case3,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::ConstantC => "constantC",
            CaseTag::Case1 => "case1",
            CaseTag::Case2 => "case2",
            CaseTag::Case3 => "case3",
        }
    }
}

/// Pointwise invariant values. Fields that a stage does not compute stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct InvariantRecord {
    pub point: Vec<f64>,
    pub eps: Option<i8>,
    pub delta: i8,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[serde(rename = "C1")]
    pub c1: Option<f64>,
    #[serde(rename = "C2")]
    pub c2: Option<f64>,
    #[serde(rename = "C3")]
    pub c3: Option<f64>,
    #[serde(rename = "C33")]
    pub c33: Option<f64>,
    #[serde(rename = "C333")]
    pub c333: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<[f64; 3]>,
    #[serde(rename = "B")]
    pub b: Option<[f64; 3]>,
    pub xi: Option<f64>,
    pub zeta: Option<f64>,
    pub zeta3: Option<f64>,
    pub rho: Option<f64>,
    #[serde(rename = "W")]
    pub w: Option<f64>,
    #[serde(rename = "E")]
    pub e: Option<f64>,
    /// Curvature of a Cartan structure.
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub case: Option<CaseTag>,
    pub class: Option<Class>,
    pub residuals: BTreeMap<String, f64>,
}

impl InvariantRecord {
    pub fn at(point: &[f64]) -> InvariantRecord {
        InvariantRecord {
            point: point.to_vec(),
            delta: 1,
            ..Default::default()
        }
    }

    pub fn residual(&mut self, name: &str, value: f64) {
        self.residuals.insert(name.to_string(), value.abs());
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().fold(0.0, |m, v| m.max(*v))
    }
}
