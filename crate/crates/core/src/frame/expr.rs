//! Polynomial and rational coefficient expressions used by JSON frame specs.

use serde::{Deserialize, Serialize};

/// Coefficients in ascending powers: `[c0, c1, c2]` is `c0 + c1·τ + c2·τ²`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }
}

/// A polynomial or a ratio of polynomials in `τ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expr {
    Poly(Poly),
    Rational(Ratio),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ratio {
    pub num: Poly,
    pub den: Poly,
}

impl Default for Expr {
    fn default() -> Self {
        Expr::Poly(Poly(vec![]))
    }
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        Expr::Poly(Poly(vec![c]))
    }
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Poly(p) => p.eval(x),
            Expr::Rational(Ratio { num, den }) => num.eval(x) / den.eval(x),
        }
    }
    /// Exact derivative (quotient rule for rational expressions).
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Expr::Poly(p) => p.derivative().eval(x),
            Expr::Rational(Ratio { num, den }) => {
                let (u, v) = (num.eval(x), den.eval(x));
                (num.derivative().eval(x) * v - u * den.derivative().eval(x)) / (v * v)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_differentiate() {
        let p: Expr = serde_json::from_str("[1, 2, 3]").unwrap();
        assert_eq!(p.eval(2.0), 17.0);
        assert_eq!(p.derivative(2.0), 14.0);
        let r: Expr = serde_json::from_str(r#"{"num":[0,1],"den":[1,0,1]}"#).unwrap();
        assert!((r.eval(1.0) - 0.5).abs() < 1e-15);
        assert!(r.derivative(1.0).abs() < 1e-15);
        assert!(serde_json::from_str::<Expr>(r#"{"num":[1],"den":[1],"x":1}"#).is_err());
    }
}
