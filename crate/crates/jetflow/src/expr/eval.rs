//! Numeric evaluation of expressions.
//!
//! Evaluation is exact over ℚ as long as every input is rational and no
//! transcendental node lies on the evaluation path; any opaque function
//! application (or float input) switches the computation to f64.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, ToPrimitive, Zero};

use super::poly::{Atom, Poly};
use super::{Expr, ExprError, Func, Var};

/// A number that is either an exact rational or a float.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Rational(BigRational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Value::Float(f) => *f,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Rational(r) => r.is_zero(),
            Value::Float(f) => *f == 0.0,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Value::Rational(r) => Some(r),
            Value::Float(_) => None,
        }
    }

    fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a + b),
            _ => Value::Float(self.to_f64() + other.to_f64()),
        }
    }

    fn mul(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a * b),
            _ => Value::Float(self.to_f64() * other.to_f64()),
        }
    }

    fn pow(&self, k: u32) -> Value {
        match self {
            Value::Rational(r) => {
                Value::Rational(num::pow::pow(r.clone(), usize::try_from(k).unwrap()))
            }
            Value::Float(f) => Value::Float(f.powi(k as i32)),
        }
    }

    fn div(&self, other: &Value) -> Result<Value, ExprError> {
        if other.is_zero() {
            return Err(ExprError::DivisionByZero(
                "denominator evaluated to zero".into(),
            ));
        }
        Ok(match (self, other) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a / b),
            _ => Value::Float(self.to_f64() / other.to_f64()),
        })
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rational(r) => write!(f, "{r}"),
            Value::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Assignment of values to variables.
#[derive(Debug, Clone, Default)]
pub struct Valuation {
    map: BTreeMap<Var, Value>,
}

impl Valuation {
    pub fn new() -> Self {
        Valuation::default()
    }

    pub fn set(&mut self, v: Var, value: Value) -> &mut Self {
        self.map.insert(v, value);
        self
    }

    pub fn set_rational(&mut self, v: Var, r: BigRational) -> &mut Self {
        self.set(v, Value::Rational(r))
    }

    pub fn set_int(&mut self, v: Var, k: i64) -> &mut Self {
        self.set(v, Value::Rational(BigRational::from(num::BigInt::from(k))))
    }

    pub fn set_f64(&mut self, v: Var, f: f64) -> &mut Self {
        self.set(v, Value::Float(f))
    }

    pub fn get(&self, v: &Var) -> Option<&Value> {
        self.map.get(v)
    }
}

impl Expr {
    /// Evaluate at the valuation; every free variable must be bound.
    pub fn eval(&self, val: &Valuation) -> Result<Value, ExprError> {
        let rp = self.rp();
        let num = eval_poly(&rp.num, val)?;
        let den = eval_poly(&rp.den, val)?;
        let out = num.div(&den)?;
        if let Value::Float(f) = out {
            if !f.is_finite() {
                return Err(ExprError::Domain("non-finite result".into()));
            }
        }
        Ok(out)
    }

    /// Float shortcut for [`Expr::eval`].
    pub fn eval_f64(&self, val: &Valuation) -> Result<f64, ExprError> {
        Ok(self.eval(val)?.to_f64())
    }
}

fn eval_poly(p: &Poly, val: &Valuation) -> Result<Value, ExprError> {
    let mut acc = Value::Rational(BigRational::zero());
    for (mono, coeff) in p.terms() {
        let mut term = Value::Rational(coeff.clone());
        for (atom, exp) in mono.factors() {
            let base = eval_atom(atom, val)?;
            term = term.mul(&base.pow(*exp));
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

fn eval_atom(atom: &Atom, val: &Valuation) -> Result<Value, ExprError> {
    match atom {
        Atom::V(v) => val
            .get(v)
            .cloned()
            .ok_or_else(|| ExprError::UnboundVariable(v.to_string())),
        Atom::F(f, arg) => {
            let a = arg.eval(val)?.to_f64();
            let out = match f {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Exp => a.exp(),
                Func::Ln => a.ln(),
                Func::Sqrt => a.sqrt(),
            };
            if !out.is_finite() {
                return Err(ExprError::Domain(format!(
                    "{}({a}) is not finite",
                    f.name()
                )));
            }
            Ok(Value::Float(out))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Signature;

    #[test]
    fn exact_rational_eval() {
        let sig = Signature::new(1, 1);
        let e = Expr::parse("x1 + u1[1]", &sig).unwrap();
        let mut val = Valuation::new();
        val.set_int(Var::Base(1), 1);
        val.set_int(Var::jet1(1, 1), 2);
        let v = e.eval(&val).unwrap();
        assert_eq!(v.as_rational().unwrap(), &BigRational::from(num::BigInt::from(3)));
    }

    #[test]
    fn transcendental_path_goes_float() {
        let e = Expr::sin(Expr::base(1));
        let mut val = Valuation::new();
        val.set_int(Var::Base(1), 0);
        match e.eval(&val).unwrap() {
            Value::Float(f) => assert!(f.abs() < 1e-15),
            v => panic!("expected float, got {v:?}"),
        }
    }

    #[test]
    fn division_by_zero_at_point() {
        let sig = Signature::new(1, 2);
        let e = Expr::parse("u2[1]/u1[1]", &sig).unwrap();
        let mut val = Valuation::new();
        val.set_int(Var::jet1(1, 1), 0);
        val.set_int(Var::jet1(2, 1), 1);
        assert!(matches!(e.eval(&val), Err(ExprError::DivisionByZero(_))));
    }

    #[test]
    fn unbound_variable_is_reported() {
        let e = Expr::base(1);
        assert!(matches!(
            e.eval(&Valuation::new()),
            Err(ExprError::UnboundVariable(_))
        ));
    }
}
