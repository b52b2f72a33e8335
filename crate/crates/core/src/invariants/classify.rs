use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Elliptic,
    Hyperbolic,
    Linear,
}

impl Class {
    pub fn name(self) -> &'static str {
        match self {
            Class::Elliptic => "elliptic",
            Class::Hyperbolic => "hyperbolic",
            Class::Linear => "linear",
        }
    }
}

/// Which taut family witnesses the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Circle,
    /// Hyperbola `a₁² − a₂² = r`.
    Hyperbola { r: i8 },
    Line,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticClassification {
    /// Coefficients of `a₁²`, `a₂²`, `a₁a₂` in `𝒫_C(a)`.
    pub coeffs: [f64; 3],
    pub class: Class,
    pub witness: Witness,
}

impl QuadraticClassification {
    pub fn eval(&self, a1: f64, a2: f64) -> f64 {
        self.coeffs[0] * a1 * a1 + self.coeffs[1] * a2 * a2 + self.coeffs[2] * a1 * a2
    }
}

/// `𝒫_C(a) = a₁² − εa₂² + 2Ca₁a₂`.
pub fn quadratic_form(c: f64, eps: i8, a1: f64, a2: f64) -> f64 {
    a1 * a1 - eps as f64 * a2 * a2 + 2.0 * c * a1 * a2
}

pub fn classify(c: f64, eps: i8, band: f64) -> QuadraticClassification {
    let coeffs = [1.0, -(eps as f64), 2.0 * c];
    let (class, witness) = if eps == -1 {
        if (c.abs() - 1.0).abs() <= band {
            (Class::Linear, Witness::Line)
        } else if c.abs() < 1.0 {
            (Class::Elliptic, Witness::Circle)
        } else {
            let r = if c > 0.0 { 1 } else { -1 };
            (Class::Hyperbolic, Witness::Hyperbola { r })
        }
    } else {
        (Class::Hyperbolic, Witness::Hyperbola { r: 1 })
    };
    QuadraticClassification {
        coeffs,
        class,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trichotomy() {
        assert_eq!(classify(0.5, -1, 1e-9).class, Class::Elliptic);
        assert_eq!(classify(0.0, 1, 1e-9).class, Class::Hyperbolic);
        assert_eq!(classify(1.0, -1, 1e-9).class, Class::Linear);
        assert_eq!(classify(-3.0, -1, 1e-9).class, Class::Hyperbolic);
    }

    #[test]
    fn quadratic_values() {
        assert_eq!(quadratic_form(0.0, -1, 3.0, 4.0), 25.0);
        assert_eq!(quadratic_form(0.5, 1, 1.0, 1.0), 1.0);
        let q = classify(0.3, -1, 1e-9);
        assert_eq!(q.eval(1.0, 2.0), quadratic_form(0.3, -1, 1.0, 2.0));
    }
}
