//! Charts, symbolic coframes and their pointwise jet realizations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr, Params};
use crate::forms::{subsets, top_ratio, PForm, VOLUME_FLOOR};
use crate::jet::Jet;

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub coords: Vec<String>,
    pub params: Params,
}

impl Chart {
    pub fn new(coords: &[&str], params: &[(&str, f64)]) -> Result<Chart> {
        let coords: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(Error::Invalid(format!("coordinate `{c}` listed twice")));
            }
        }
        if !(3..=4).contains(&coords.len()) {
            return Err(Error::Invalid(format!(
                "charts have 3 or 4 coordinates, got {}",
                coords.len()
            )));
        }
        Ok(Chart {
            coords,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn param_names(&self) -> Vec<String> {
        self.params.keys().cloned().collect()
    }

    pub fn parse(&self, text: &str) -> Result<Expr> {
        parse(text, &self.coords, &self.param_names())
    }

    /// Coordinate jets seeded at `point`.
    pub fn seed(&self, point: &[f64], order: usize) -> Result<Vec<Jet>> {
        if point.len() != self.dim() {
            return Err(Error::Structure(format!(
                "point has {} entries, chart has {} coordinates",
                point.len(),
                self.dim()
            )));
        }
        Ok((0..self.dim())
            .map(|i| Jet::variable(self.dim(), order, i, point[i]))
            .collect())
    }
}

/// A coframe given by coefficient expressions: `forms[a][i]` multiplies `dx_i` in `ω^{a+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoframeSpec {
    pub chart: Chart,
    pub forms: Vec<Vec<Expr>>,
}

impl CoframeSpec {
    pub fn new(chart: Chart, forms: Vec<Vec<Expr>>) -> Result<CoframeSpec> {
        let n = chart.dim();
        if forms.len() != n {
            return Err(Error::Arity(format!("expected {n} one-forms, got {}", forms.len())));
        }
        for (a, f) in forms.iter().enumerate() {
            if f.len() != n {
                return Err(Error::Arity(format!(
                    "omega{} has {} coefficients, chart has {n} coordinates",
                    a + 1,
                    f.len()
                )));
            }
        }
        Ok(CoframeSpec { chart, forms })
    }

    /// Build from coefficient strings.
    pub fn parse(chart: Chart, forms: &[&[&str]]) -> Result<CoframeSpec> {
        let parsed = forms
            .iter()
            .map(|row| row.iter().map(|t| chart.parse(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        CoframeSpec::new(chart, parsed)
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn with_param(&self, name: &str, value: f64) -> CoframeSpec {
        let mut out = self.clone();
        out.chart.params.insert(name.to_string(), value);
        out
    }

    /// Jet realization at `point` with truncation order `order`.
    pub fn at(&self, point: &[f64], order: usize) -> Result<Coframe> {
        let vars = self.chart.seed(point, order)?;
        let forms = self
            .forms
            .iter()
            .map(|row| {
                let c = row
                    .iter()
                    .map(|e| e.jet_with(&vars, &self.chart.params))
                    .collect::<Result<Vec<_>>>()?;
                PForm::one_form(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Coframe::raw(forms, point.to_vec()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Raw,
    OneAdapted,
    Case1Adapted,
    Case2Adapted,
    Case3Prolonged,
}

/// Ordered 1-forms at a point, with adaptation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Coframe {
    pub forms: Vec<PForm>,
    pub point: Vec<f64>,
    pub eps: Option<i8>,
    pub delta: i8,
    pub stage: Stage,
}

impl Coframe {
    pub fn raw(forms: Vec<PForm>, point: Vec<f64>) -> Coframe {
        Coframe {
            forms,
            point,
            eps: None,
            delta: 1,
            stage: Stage::Raw,
        }
    }

    pub fn dim(&self) -> usize {
        self.forms[0].dim()
    }

    pub fn order(&self) -> usize {
        self.forms.iter().map(PForm::order).min().unwrap_or(0)
    }

    pub fn eps(&self) -> i8 {
        self.eps.expect("ε is fixed by one-adaptation")
    }

    /// `ω¹∧…∧ωⁿ`.
    pub fn volume(&self) -> Result<PForm> {
        let mut v = self.forms[0].clone();
        for f in &self.forms[1..] {
            v = v.wedge(f)?;
        }
        Ok(v)
    }

    /// `dω^{a+1}`.
    pub fn d(&self, a: usize) -> Result<PForm> {
        self.forms[a].d()
    }

    pub fn frame(&self) -> Result<Frame> {
        Frame::new(&self.forms)
    }

    pub fn with_forms(&self, forms: Vec<PForm>) -> Coframe {
        Coframe {
            forms,
            ..self.clone()
        }
    }
}

/// A coframe together with its dual frame `e_a` (`ω^b(e_a) = δ^b_a`).
#[derive(Debug, Clone)]
pub struct Frame {
    forms: Vec<PForm>,
    // dual[a][i] = i-th coordinate component of e_a
    dual: Vec<Vec<Jet>>,
}

impl Frame {
    pub fn new(forms: &[PForm]) -> Result<Frame> {
        let n = forms.len();
        let m: Vec<Vec<Jet>> = forms.iter().map(|f| f.coeffs().to_vec()).collect();
        let inv = invert(m).ok_or_else(|| Error::SingularVolume {
            context: "coframe matrix is singular".into(),
        })?;
        // inv = M⁻¹ has inv[i][a] = e_a^i
        let dual = (0..n).map(|a| (0..n).map(|i| inv[i][a].clone()).collect()).collect();
        Ok(Frame {
            forms: forms.to_vec(),
            dual,
        })
    }

    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[PForm] {
        &self.forms
    }

    /// Coordinate components of `e_a`.
    pub fn vector(&self, a: usize) -> &[Jet] {
        &self.dual[a]
    }

    /// Directional derivative `e_a(f)`; spends one order level.
    pub fn deriv(&self, f: &Jet, a: usize) -> Result<Jet> {
        let mut acc: Option<Jet> = None;
        for (i, ei) in self.dual[a].iter().enumerate() {
            let t = ei * &f.partial(i)?;
            acc = Some(match acc {
                None => t,
                Some(s) => &s + &t,
            });
        }
        Ok(acc.unwrap())
    }

    /// Components `β(e_{a₁},…,e_{a_p})` over increasing frame tuples.
    pub fn components(&self, beta: &PForm) -> Vec<Jet> {
        let n = self.dim();
        let p = beta.degree();
        let coord_sets = subsets(n, p);
        subsets(n, p)
            .iter()
            .map(|fa| {
                let mut acc = beta.coeffs()[0].lift(0.0);
                for (k, ci) in coord_sets.iter().enumerate() {
                    if beta.coeffs()[k].max_abs() == 0.0 {
                        continue;
                    }
                    let minor: Vec<Vec<Jet>> = ci
                        .iter()
                        .map(|&i| fa.iter().map(|&a| self.dual[a][i].clone()).collect())
                        .collect();
                    acc = &acc + &(&beta.coeffs()[k] * &det(&minor));
                }
                acc
            })
            .collect()
    }

    /// The component of `β` on `ω^{a₁}∧…∧ω^{a_p}` (0-based increasing indices).
    pub fn component(&self, beta: &PForm, idx: &[usize]) -> Jet {
        let pos = subsets(self.dim(), idx.len())
            .iter()
            .position(|s| s == idx)
            .expect("increasing frame indices");
        self.components(beta).swap_remove(pos)
    }

    /// `ω^{a₁}∧…∧ω^{a_p}`.
    pub fn basis(&self, idx: &[usize]) -> Result<PForm> {
        let mut f = self.forms[idx[0]].clone();
        for &a in &idx[1..] {
            f = f.wedge(&self.forms[a])?;
        }
        Ok(f)
    }

    /// Rebuild a p-form from its frame components.
    pub fn reconstruct(&self, comps: &[Jet], p: usize) -> Result<PForm> {
        let sets = subsets(self.dim(), p);
        if comps.len() != sets.len() {
            return Err(Error::Arity(format!(
                "{} components for a {p}-form, expected {}",
                comps.len(),
                sets.len()
            )));
        }
        let mut out: Option<PForm> = None;
        for (c, s) in comps.iter().zip(&sets) {
            let term = self.basis(s)?.scale(c);
            out = Some(match out {
                None => term,
                Some(o) => &o + &term,
            });
        }
        Ok(out.unwrap())
    }

    /// Expand a scalar-coefficient combination `Σ c_a ω^a`.
    pub fn combine(&self, c: &[Jet]) -> PForm {
        let mut out = self.forms[0].scale(&c[0]);
        for (a, ca) in c.iter().enumerate().skip(1) {
            out = &out + &self.forms[a].scale(ca);
        }
        out
    }
}

fn det(m: &[Vec<Jet>]) -> Jet {
    match m.len() {
        0 => unreachable!("empty minor"),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        n => {
            let mut acc = m[0][0].lift(0.0);
            for j in 0..n {
                let sub: Vec<Vec<Jet>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let t = &m[0][j] * &det(&sub);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

/// Gauss–Jordan inverse of a jet matrix, pivoting on values.
fn invert(mut m: Vec<Vec<Jet>>) -> Option<Vec<Vec<Jet>>> {
    let n = m.len();
    let like = m[0][0].clone();
    let mut inv: Vec<Vec<Jet>> = (0..n)
        .map(|i| (0..n).map(|j| like.lift(if i == j { 1.0 } else { 0.0 })).collect())
        .collect();
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |s, v| s.max(v.value().abs()))
        .max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| {
            m[a][col]
                .value()
                .abs()
                .total_cmp(&m[b][col].value().abs())
        })?;
        if m[piv][col].value().abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let r = m[col][col].recip().ok()?;
        for j in 0..n {
            m[col][j] = &m[col][j] * &r;
            inv[col][j] = &inv[col][j] * &r;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = m[row][col].clone();
            if f.max_abs() == 0.0 {
                continue;
            }
            for j in 0..n {
                m[row][j] = &m[row][j] - &(&f * &m[col][j]);
                inv[row][j] = &inv[row][j] - &(&f * &inv[col][j]);
            }
        }
    }
    Some(inv)
}

/// Coefficients `(β₂₃, β₁₃, β₁₂)` of a 2-form in a 3D coframe, via volume ratios.
pub fn coeffs_in_coframe(beta: &PForm, f: &Coframe) -> Result<[Jet; 3]> {
    if f.dim() != 3 || beta.degree() != 2 {
        return Err(Error::Structure("coeffs_in_coframe needs a 2-form on a 3D chart".into()));
    }
    let vol = f.volume()?;
    let b23 = top_ratio(&beta.wedge(&f.forms[0])?, &vol)?;
    let b13 = -top_ratio(&beta.wedge(&f.forms[1])?, &vol)?;
    let b12 = top_ratio(&beta.wedge(&f.forms[2])?, &vol)?;
    Ok([b23, b13, b12])
}

/// `(a∧da)/Ω` for the coframe volume Ω.
pub fn frobenius_defect(a: &PForm, f: &Coframe) -> Result<Jet> {
    if f.dim() != 3 {
        return Err(Error::Structure("frobenius_defect is defined on 3D charts".into()));
    }
    top_ratio(&a.wedge(&a.d()?)?, &f.volume()?)
}

/// Fail unless the coframe volume is nonzero at the base point.
pub fn check_volume(f: &Coframe) -> Result<PForm> {
    let v = f.volume()?;
    if v.top().value().abs() <= VOLUME_FLOOR {
        return Err(Error::SingularVolume {
            context: format!("ω¹∧…∧ωⁿ vanishes at {:?}", f.point),
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hyp(eps: f64) -> CoframeSpec {
        let chart = Chart::new(&["x", "y", "z"], &[("eps", eps)]).unwrap();
        CoframeSpec::parse(
            chart,
            &[
                &["1", "1", "-((x+y)*z-(x-y))/(1+z^2)"],
                &["1", "-1", "(eps*(x+y)+(x-y)*z)/(1+z^2)"],
                &["0", "0", "1/(1+z^2)"],
            ],
        )
        .unwrap()
    }

    #[test]
    fn hyp_example_wedges() {
        let f = hyp(-1.0).at(&[0.3, -0.2, 0.5], 4).unwrap();
        let w12 = f.forms[0].wedge(&f.forms[1]).unwrap();
        assert_relative_eq!(w12.coeff(&[0, 1]).value(), -2.0);
        let vol = f.volume().unwrap();
        let r1 = top_ratio(&f.forms[0].wedge(&f.d(0).unwrap()).unwrap(), &vol).unwrap();
        let r2 = top_ratio(&f.forms[1].wedge(&f.d(1).unwrap()).unwrap(), &vol).unwrap();
        assert_relative_eq!(r1.value(), 1.0, epsilon = 1e-13);
        assert_relative_eq!(r2.value(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn dual_frame_and_coefficients() {
        let f = hyp(-1.0).at(&[0.3, -0.2, 0.5], 3).unwrap();
        let fr = f.frame().unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let mut s = 0.0;
                for i in 0..3 {
                    s += f.forms[b].coeffs()[i].value() * fr.vector(a)[i].value();
                }
                assert_relative_eq!(s, if a == b { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
        // e₃ = C₃(z)∂z
        assert_relative_eq!(fr.vector(2)[2].value(), 1.25, epsilon = 1e-14);
        let beta = fr.basis(&[1, 2]).unwrap();
        let [b23, b13, b12] = coeffs_in_coframe(&beta, &f).unwrap();
        assert_relative_eq!(b23.value(), 1.0, epsilon = 1e-14);
        assert!(b13.value().abs() < 1e-14 && b12.value().abs() < 1e-14);
    }

    #[test]
    fn frobenius_of_dz_vanishes() {
        let f = hyp(1.0).at(&[0.1, 0.2, 0.3], 3).unwrap();
        let dz = PForm::coordinate(3, 2, &f.forms[0].coeffs()[0]);
        assert_eq!(frobenius_defect(&dz, &f).unwrap().value(), 0.0);
        assert!(frobenius_defect(&f.forms[0], &f).unwrap().value().abs() > 0.5);
    }
}
