//! Closed-form weight expressions in the noise parameter `p`.
//!
//! Channel weights are kept as small ASTs rather than opaque closures so
//! that (a) derivatives can be taken symbolically, and (b) two Kraus terms
//! can be tested for *structurally identical* weight functions, which is
//! how equal-weight groups are formed for the commutativity criterion.
//! The grammar is rational functions of `p` plus `sqrt`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;

use crate::math::sqrt;

#[derive(Clone, Debug, PartialEq)]
pub enum WeightExpr {
    Const(f64),
    /// The noise parameter `p`.
    Param,
    Add(Box<WeightExpr>, Box<WeightExpr>),
    Sub(Box<WeightExpr>, Box<WeightExpr>),
    Mul(Box<WeightExpr>, Box<WeightExpr>),
    Div(Box<WeightExpr>, Box<WeightExpr>),
    Sqrt(Box<WeightExpr>),
}

impl WeightExpr {
    pub fn constant(v: f64) -> Self {
        WeightExpr::Const(v)
    }

    pub fn param() -> Self {
        WeightExpr::Param
    }

    pub fn add(self, rhs: WeightExpr) -> Self {
        WeightExpr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: WeightExpr) -> Self {
        WeightExpr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: WeightExpr) -> Self {
        WeightExpr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn div(self, rhs: WeightExpr) -> Self {
        WeightExpr::Div(Box::new(self), Box::new(rhs))
    }

    pub fn sqrt_of(self) -> Self {
        WeightExpr::Sqrt(Box::new(self))
    }

    /// `1 - p`.
    pub fn one_minus_p() -> Self {
        WeightExpr::constant(1.0).sub(WeightExpr::Param)
    }

    /// `p / k`.
    pub fn p_over(k: f64) -> Self {
        WeightExpr::Param.div(WeightExpr::constant(k))
    }

    pub fn eval(&self, p: f64) -> f64 {
        match self {
            WeightExpr::Const(v) => *v,
            WeightExpr::Param => p,
            WeightExpr::Add(a, b) => a.eval(p) + b.eval(p),
            WeightExpr::Sub(a, b) => a.eval(p) - b.eval(p),
            WeightExpr::Mul(a, b) => a.eval(p) * b.eval(p),
            WeightExpr::Div(a, b) => a.eval(p) / b.eval(p),
            WeightExpr::Sqrt(a) => sqrt(a.eval(p)),
        }
    }

    /// Symbolic derivative d/dp, expressed in the same grammar.
    pub fn derivative(&self) -> WeightExpr {
        match self {
            WeightExpr::Const(_) => WeightExpr::Const(0.0),
            WeightExpr::Param => WeightExpr::Const(1.0),
            WeightExpr::Add(a, b) => a.derivative().add(b.derivative()),
            WeightExpr::Sub(a, b) => a.derivative().sub(b.derivative()),
            WeightExpr::Mul(a, b) => {
                let left = a.derivative().mul((**b).clone());
                let right = (**a).clone().mul(b.derivative());
                left.add(right)
            }
            WeightExpr::Div(a, b) => {
                let num = a
                    .derivative()
                    .mul((**b).clone())
                    .sub((**a).clone().mul(b.derivative()));
                let den = (**b).clone().mul((**b).clone());
                num.div(den)
            }
            WeightExpr::Sqrt(a) => {
                let den = WeightExpr::constant(2.0).mul(self.clone());
                a.derivative().div(den)
            }
        }
    }
}

impl core::fmt::Display for WeightExpr {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            WeightExpr::Const(v) => write!(f, "{}", format_const(*v)),
            WeightExpr::Param => write!(f, "p"),
            WeightExpr::Add(a, b) => write!(f, "({a} + {b})"),
            WeightExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            WeightExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            WeightExpr::Div(a, b) => write!(f, "({a} / {b})"),
            WeightExpr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

fn format_const(v: f64) -> String {
    // Shortest representation that round-trips through parse.
    let s = format!("{v}");
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{v}.0")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivative_agree_with_finite_difference() {
        // f(p) = (1 - p) * sqrt(p / 3)
        let f = WeightExpr::one_minus_p().mul(WeightExpr::p_over(3.0).sqrt_of());
        let df = f.derivative();
        let h = 1e-6;
        for &p in &[0.1, 0.3, 0.6, 0.9] {
            let fd = (f.eval(p + h) - f.eval(p - h)) / (2.0 * h);
            assert!((df.eval(p) - fd).abs() < 1e-8, "p = {p}");
        }
    }

    #[test]
    fn structural_equality_groups_identical_weights() {
        let a = WeightExpr::p_over(3.0);
        let b = WeightExpr::p_over(3.0);
        let c = WeightExpr::p_over(8.0);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn display_is_parenthesized_infix() {
        let f = WeightExpr::one_minus_p().mul(WeightExpr::p_over(3.0));
        assert_eq!(format!("{f}"), "((1.0 - p) * (p / 3.0))");
    }
}
