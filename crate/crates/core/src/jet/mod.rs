//! Truncated multivariate Taylor jets.
//!
//! A [`Jet`] of order `K` in `n` variables stores the Taylor coefficients
//! `∂^α f / α!` for every multi-index `|α| ≤ K`, laid out in graded
//! lexicographic order. Because the ordering is graded, the coefficients of a
//! lower-order jet are a prefix of the higher-order ones, so truncation is a
//! slice and mixed-order arithmetic simply works on the common prefix.

mod layout;
mod series;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub use layout::Layout;

use crate::error::{Error, Result};

/// Elementary functions that can be composed with a jet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elementary {
    Sin,
    Cos,
    Tan,
    Sec,
    Csc,
    Cot,
    Exp,
    Ln,
    Sinh,
    Cosh,
    Tanh,
    Sech,
    Csch,
    Coth,
    Sqrt,
    Asin,
    Acos,
    Atan,
    Asinh,
}

impl Elementary {
    pub const ALL: [Elementary; 19] = [
        Elementary::Sin,
        Elementary::Cos,
        Elementary::Tan,
        Elementary::Sec,
        Elementary::Csc,
        Elementary::Cot,
        Elementary::Exp,
        Elementary::Ln,
        Elementary::Sinh,
        Elementary::Cosh,
        Elementary::Tanh,
        Elementary::Sech,
        Elementary::Csch,
        Elementary::Coth,
        Elementary::Sqrt,
        Elementary::Asin,
        Elementary::Acos,
        Elementary::Atan,
        Elementary::Asinh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Tan => "tan",
            Elementary::Sec => "sec",
            Elementary::Csc => "csc",
            Elementary::Cot => "cot",
            Elementary::Exp => "exp",
            Elementary::Ln => "ln",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
            Elementary::Tanh => "tanh",
            Elementary::Sech => "sech",
            Elementary::Csch => "csch",
            Elementary::Coth => "coth",
            Elementary::Sqrt => "sqrt",
            Elementary::Asin => "asin",
            Elementary::Acos => "acos",
            Elementary::Atan => "atan",
            Elementary::Asinh => "asinh",
        }
    }

    pub fn from_name(name: &str) -> Option<Elementary> {
        if name == "log" {
            return Some(Elementary::Ln);
        }
        Elementary::ALL.iter().copied().find(|f| f.name() == name)
    }

    /// Plain evaluation on a real number.
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Elementary::Sin => x.sin(),
            Elementary::Cos => x.cos(),
            Elementary::Tan => x.tan(),
            Elementary::Sec => 1.0 / x.cos(),
            Elementary::Csc => 1.0 / x.sin(),
            Elementary::Cot => x.cos() / x.sin(),
            Elementary::Exp => x.exp(),
            Elementary::Ln => x.ln(),
            Elementary::Sinh => x.sinh(),
            Elementary::Cosh => x.cosh(),
            Elementary::Tanh => x.tanh(),
            Elementary::Sech => 1.0 / x.cosh(),
            Elementary::Csch => 1.0 / x.sinh(),
            Elementary::Coth => x.cosh() / x.sinh(),
            Elementary::Sqrt => x.sqrt(),
            Elementary::Asin => x.asin(),
            Elementary::Acos => x.acos(),
            Elementary::Atan => x.atan(),
            Elementary::Asinh => x.asinh(),
        }
    }
}

/// Truncated Taylor expansion of a scalar at a point.
#[derive(Clone, PartialEq)]
pub struct Jet {
    layout: Arc<Layout>,
    c: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("dim", &self.dim())
            .field("order", &self.order())
            .field("coeffs", &self.c)
            .finish()
    }
}

impl Jet {
    pub fn constant(dim: usize, order: usize, v: f64) -> Jet {
        let layout = Layout::get(dim, order);
        let mut c = vec![0.0; layout.len()];
        c[0] = v;
        Jet { layout, c }
    }

    pub fn zero(dim: usize, order: usize) -> Jet {
        Jet::constant(dim, order, 0.0)
    }

    /// The coordinate function `x_i` expanded at `x_i = v`.
    pub fn variable(dim: usize, order: usize, i: usize, v: f64) -> Jet {
        assert!(i < dim, "variable index {i} out of range for dim {dim}");
        let mut j = Jet::constant(dim, order, v);
        if order > 0 {
            j.c[1 + i] = 1.0;
        }
        j
    }

    /// Build from raw graded-lex coefficients.
    pub fn from_coeffs(dim: usize, order: usize, coeffs: Vec<f64>) -> Result<Jet> {
        let layout = Layout::get(dim, order);
        if coeffs.len() != layout.len() {
            return Err(Error::Structure(format!(
                "expected {} coefficients for dim {dim}, order {order}, got {}",
                layout.len(),
                coeffs.len()
            )));
        }
        Ok(Jet { layout, c: coeffs })
    }

    /// Constant jet with the same shape as `self`.
    pub fn lift(&self, v: f64) -> Jet {
        let mut c = vec![0.0; self.c.len()];
        c[0] = v;
        Jet {
            layout: self.layout.clone(),
            c,
        }
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn order(&self) -> usize {
        self.layout.order()
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Taylor coefficient for multi-index `alpha`, zero if `|alpha| > order`.
    pub fn coeff(&self, alpha: &[u8]) -> f64 {
        self.layout.index_of(alpha).map_or(0.0, |i| self.c[i])
    }

    /// The partial derivative `∂^α f` at the base point.
    pub fn derivative(&self, alpha: &[u8]) -> f64 {
        let fact: f64 = alpha.iter().map(|&a| factorial(a as usize)).product();
        self.coeff(alpha) * fact
    }

    /// Gradient at the base point (requires order ≥ 1).
    pub fn gradient(&self) -> Vec<f64> {
        if self.order() == 0 {
            return vec![0.0; self.dim()];
        }
        self.c[1..=self.dim()].to_vec()
    }

    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order() {
            return self.clone();
        }
        let layout = Layout::get(self.dim(), order);
        let c = self.c[..layout.len()].to_vec();
        Jet { layout, c }
    }

    /// True if every non-constant coefficient vanishes.
    pub fn is_constant(&self) -> bool {
        self.c[1..].iter().all(|&v| v == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `∂f/∂x_v`, one order lower.
    pub fn partial(&self, v: usize) -> Result<Jet> {
        if self.order() == 0 {
            return Err(Error::Budget {
                stage: "partial derivative".into(),
            });
        }
        let lower = self.layout.lower();
        let mut c = vec![0.0; lower.len()];
        for &(src, dst, factor) in self.layout.derivative_table(v) {
            c[dst as usize] = self.c[src as usize] * factor;
        }
        Ok(Jet { layout: lower, c })
    }

    fn check_dim(&self, other: &Jet) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Structure(format!(
                "jet dimensions differ ({} vs {})",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    fn check_shape(&self, other: &Jet) -> Result<()> {
        self.check_dim(other)?;
        if self.order() != other.order() {
            return Err(Error::Structure(format!(
                "jet orders differ ({} vs {})",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    /// Sum of two jets of identical dimension and order.
    pub fn jet_add(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        Ok(self + other)
    }

    /// Truncated Cauchy product of two jets of identical dimension and order.
    pub fn jet_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        Ok(self * other)
    }

    pub fn jet_scale(&self, s: f64) -> Jet {
        self * s
    }

    fn common(&self, other: &Jet) -> Arc<Layout> {
        assert_eq!(
            self.dim(),
            other.dim(),
            "jet dimensions differ ({} vs {})",
            self.dim(),
            other.dim()
        );
        if self.order() <= other.order() {
            self.layout.clone()
        } else {
            other.layout.clone()
        }
    }

    fn zip(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        let layout = self.common(other);
        let c = (0..layout.len()).map(|i| f(self.c[i], other.c[i])).collect();
        Jet { layout, c }
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Jet {
        Jet {
            layout: self.layout.clone(),
            c: self.c.iter().map(|&v| f(v)).collect(),
        }
    }

    fn mul_impl(&self, other: &Jet) -> Jet {
        let layout = self.common(other);
        let mut c = vec![0.0; layout.len()];
        for &(i, j, k) in layout.mul_table() {
            c[k as usize] += self.c[i as usize] * other.c[j as usize];
        }
        Jet { layout, c }
    }

    /// Multiplicative inverse; fails when the value is exactly zero.
    pub fn recip(&self) -> Result<Jet> {
        let a0 = self.value();
        if a0 == 0.0 || !a0.is_finite() {
            return Err(Error::Domain {
                func: "division".into(),
                value: a0,
            });
        }
        let k = self.order();
        let mut s = vec![0.0; k + 1];
        s[0] = 1.0 / a0;
        for n in 1..=k {
            s[n] = -s[n - 1] / a0;
        }
        Ok(self.compose_series(&s))
    }

    pub fn checked_div(&self, other: &Jet) -> Result<Jet> {
        self.check_dim(other)?;
        Ok(self * &other.recip()?)
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: i32) -> Result<Jet> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.lift(1.0);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Real power `self^p` with a constant exponent.
    pub fn powf(&self, p: f64) -> Result<Jet> {
        if p.fract() == 0.0 && p.abs() <= 64.0 {
            return self.powi(p as i32);
        }
        let a0 = self.value();
        if !(a0 > 0.0) {
            return Err(Error::Domain {
                func: "pow".into(),
                value: a0,
            });
        }
        Ok(self.compose_series(&series::power(a0, p, self.order())))
    }

    /// `self^other` for jet-valued exponents.
    pub fn pow(&self, other: &Jet) -> Result<Jet> {
        self.check_dim(other)?;
        if other.is_constant() {
            return self.powf(other.value());
        }
        let a0 = self.value();
        if !(a0 > 0.0) {
            return Err(Error::Domain {
                func: "pow".into(),
                value: a0,
            });
        }
        (other * &self.apply(Elementary::Ln)?).apply(Elementary::Exp)
    }

    pub fn apply(&self, f: Elementary) -> Result<Jet> {
        let s = series::elementary(f, self.value(), self.order())?;
        Ok(self.compose_series(&s))
    }

    pub fn sin(&self) -> Jet {
        self.apply(Elementary::Sin).expect("sin is entire")
    }

    pub fn cos(&self) -> Jet {
        self.apply(Elementary::Cos).expect("cos is entire")
    }

    pub fn exp(&self) -> Jet {
        self.apply(Elementary::Exp).expect("exp is entire")
    }

    pub fn sqrt(&self) -> Result<Jet> {
        self.apply(Elementary::Sqrt)
    }

    /// Two-argument arctangent `atan2(self, x)`, smooth away from the origin.
    pub fn atan2(&self, x: &Jet) -> Result<Jet> {
        self.check_dim(x)?;
        let (y0, x0) = (self.value(), x.value());
        if y0 == 0.0 && x0 == 0.0 {
            return Err(Error::Domain {
                func: "atan2".into(),
                value: 0.0,
            });
        }
        let num = &(self * x0) - &(x * y0);
        let den = &(x * x0) + &(self * y0);
        let t = num.checked_div(&den)?.apply(Elementary::Atan)?;
        Ok(&t + y0.atan2(x0))
    }

    /// Evaluate `Σ s_k (self − a₀)^k` by Horner's rule.
    pub fn compose_series(&self, s: &[f64]) -> Jet {
        let mut h = self.clone();
        h.c[0] = 0.0;
        let mut acc = self.lift(s[s.len() - 1]);
        for &sk in s[..s.len() - 1].iter().rev() {
            acc = &acc * &h;
            acc.c[0] += sk;
        }
        acc
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl<'a> Add<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn add(self, rhs: &'a Jet) -> Jet {
        self.zip(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn sub(self, rhs: &'a Jet) -> Jet {
        self.zip(rhs, |a, b| a - b)
    }
}

impl<'a> Mul<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn mul(self, rhs: &'a Jet) -> Jet {
        self.mul_impl(rhs)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        &self * &rhs
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map(|v| -v)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

impl Add<f64> for &Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut j = self.clone();
        j.c[0] += rhs;
        j
    }
}

impl Sub<f64> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self + (-rhs)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.map(|v| v * rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        &self * rhs
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        &self + rhs
    }
}
