//! Differential forms at a point, with jet-valued coordinate coefficients.
//!
//! A p-form on an n-dimensional chart stores one [`Jet`] per strictly
//! increasing index tuple `i₁ < … < i_p`, listed in lexicographic order.
//! The order budget of a form is the smallest order among its coefficients;
//! every exterior derivative spends one level of it.

use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::jet::Jet;

/// Strictly increasing index tuples of length `p` in `0..dim`, lexicographic.
pub fn subsets(dim: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i + 1, dim, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, dim, p, &mut Vec::new(), &mut out);
    out
}

fn mask(idx: &[usize]) -> u8 {
    idx.iter().fold(0u8, |m, &i| m | (1 << i))
}

fn position(dim: usize, p: usize, idx: &[usize]) -> usize {
    subsets(dim, p)
        .iter()
        .position(|s| s == idx)
        .expect("index tuple is increasing and in range")
}

/// Sign of the permutation sorting the concatenation `a ++ b` (disjoint, each sorted).
fn merge_sign(a: &[usize], b: &[usize]) -> f64 {
    let inversions = a
        .iter()
        .map(|&i| b.iter().filter(|&&j| j < i).count())
        .sum::<usize>();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn union_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u
}

#[derive(Debug, Clone, PartialEq)]
pub struct PForm {
    dim: usize,
    degree: usize,
    coeffs: Vec<Jet>,
}

impl PForm {
    pub fn new(dim: usize, degree: usize, coeffs: Vec<Jet>) -> Result<PForm> {
        let want = subsets(dim, degree).len();
        if degree > dim || coeffs.len() != want {
            return Err(Error::Arity(format!(
                "a {degree}-form on a {dim}-dimensional chart has {want} coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| c.dim() != dim) {
            return Err(Error::Structure("coefficient jet dimension differs from chart".into()));
        }
        Ok(PForm {
            dim,
            degree,
            coeffs,
        })
    }

    pub fn zero(dim: usize, degree: usize, like: &Jet) -> PForm {
        let n = subsets(dim, degree).len();
        PForm {
            dim,
            degree,
            coeffs: vec![like.lift(0.0); n],
        }
    }

    pub fn scalar(f: Jet) -> PForm {
        PForm {
            dim: f.dim(),
            degree: 0,
            coeffs: vec![f],
        }
    }

    pub fn one_form(coeffs: Vec<Jet>) -> Result<PForm> {
        let dim = coeffs.len();
        PForm::new(dim, 1, coeffs)
    }

    /// The coordinate differential `dx_i`.
    pub fn coordinate(dim: usize, i: usize, like: &Jet) -> PForm {
        let mut f = PForm::zero(dim, 1, like);
        f.coeffs[i] = like.lift(1.0);
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Jet] {
        &self.coeffs
    }

    /// Coefficient of `dx_{i₁}∧…∧dx_{i_p}` for increasing `idx`.
    pub fn coeff(&self, idx: &[usize]) -> &Jet {
        &self.coeffs[position(self.dim, self.degree, idx)]
    }

    /// Remaining order budget.
    pub fn order(&self) -> usize {
        self.coeffs.iter().map(Jet::order).min().unwrap_or(0)
    }

    pub fn values(&self) -> Vec<f64> {
        self.coeffs.iter().map(Jet::value).collect()
    }

    pub fn max_abs_value(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.value().abs()))
    }

    /// The single coefficient of a top-degree form.
    pub fn top(&self) -> &Jet {
        assert_eq!(self.degree, self.dim, "not a top-degree form");
        &self.coeffs[0]
    }

    pub fn scale(&self, f: &Jet) -> PForm {
        PForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
        }
    }

    pub fn scale_by(&self, s: f64) -> PForm {
        PForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn truncate(&self, order: usize) -> PForm {
        PForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c.truncate(order)).collect(),
        }
    }

    fn check_pair(&self, other: &PForm) {
        assert_eq!(self.dim, other.dim, "forms live on different charts");
    }

    pub fn wedge(&self, other: &PForm) -> Result<PForm> {
        self.check_pair(other);
        let p = self.degree + other.degree;
        if p > self.dim {
            return Err(Error::Structure(format!(
                "degree overflow: {} + {} > {}",
                self.degree, other.degree, self.dim
            )));
        }
        let like = &self.coeffs[0];
        let mut out = PForm::zero(self.dim, p, like);
        let target = subsets(self.dim, p);
        let sa = subsets(self.dim, self.degree);
        let sb = subsets(self.dim, other.degree);
        for (ia, a) in sa.iter().enumerate() {
            if self.coeffs[ia].max_abs() == 0.0 {
                continue;
            }
            for (ib, b) in sb.iter().enumerate() {
                if mask(a) & mask(b) != 0 || other.coeffs[ib].max_abs() == 0.0 {
                    continue;
                }
                let u = union_sorted(a, b);
                let k = target.iter().position(|s| *s == u).unwrap();
                let term = &self.coeffs[ia] * &other.coeffs[ib];
                out.coeffs[k] = if merge_sign(a, b) > 0.0 {
                    &out.coeffs[k] + &term
                } else {
                    &out.coeffs[k] - &term
                };
            }
        }
        Ok(out)
    }

    /// Exterior derivative; spends one order level.
    pub fn d(&self) -> Result<PForm> {
        if self.order() == 0 {
            return Err(Error::Budget {
                stage: "exterior derivative".into(),
            });
        }
        let p = self.degree + 1;
        if p > self.dim {
            return Err(Error::Structure("exterior derivative of a top-degree form".into()));
        }
        let like = self.coeffs[0].truncate(self.order() - 1);
        let mut out = PForm::zero(self.dim, p, &like);
        let target = subsets(self.dim, p);
        for (ia, a) in subsets(self.dim, self.degree).iter().enumerate() {
            for i in 0..self.dim {
                if a.contains(&i) {
                    continue;
                }
                let di = self.coeffs[ia].partial(i)?;
                let u = union_sorted(&[i], a);
                let k = target.iter().position(|s| *s == u).unwrap();
                out.coeffs[k] = if merge_sign(&[i], a) > 0.0 {
                    &out.coeffs[k] + &di
                } else {
                    &out.coeffs[k] - &di
                };
            }
        }
        Ok(out)
    }
}

impl Add for &PForm {
    type Output = PForm;
    fn add(self, rhs: &PForm) -> PForm {
        self.check_pair(rhs);
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        PForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &PForm {
    type Output = PForm;
    fn sub(self, rhs: &PForm) -> PForm {
        self.check_pair(rhs);
        assert_eq!(self.degree, rhs.degree, "subtracting forms of different degree");
        PForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &PForm {
    type Output = PForm;
    fn neg(self) -> PForm {
        self.scale_by(-1.0)
    }
}

/// Smallest |volume| accepted as nonvanishing.
pub const VOLUME_FLOOR: f64 = 1e-13;

/// The scalar λ with `a = λ b` for top-degree forms `a`, `b`.
pub fn top_ratio(a: &PForm, b: &PForm) -> Result<Jet> {
    if a.degree != a.dim || b.degree != b.dim {
        return Err(Error::Structure("top_ratio needs top-degree forms".into()));
    }
    let bv = b.top();
    if bv.value().abs() <= VOLUME_FLOOR || !bv.value().is_finite() {
        return Err(Error::SingularVolume {
            context: format!("reference volume {:e}", bv.value()),
        });
    }
    a.top().checked_div(bv)
}
