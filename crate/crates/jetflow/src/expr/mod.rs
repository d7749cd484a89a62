//! Self-contained symbolic expression engine.
//!
//! Expressions are immutable and always held in a canonical normal form
//! (see [`poly`]): exact rational constants, flattened/sorted sums and
//! products, combined like terms, absorbed zeros and ones, and a single
//! quotient of polynomials for rational expressions. Transcendental
//! functions are carried opaquely; no identities beyond the derivative rules
//! are ever applied, which keeps normalization terminating.
//!
//! Zero-testing is deliberately tri-state ([`Tri`]): canonical normalization
//! decides rational expressions exactly, while expressions involving opaque
//! functions fall back to seeded sampling and report [`Tri::Unknown`] when no
//! nonzero value is found.

mod eval;
mod parse;
mod poly;
mod print;
mod zero;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One};
use thiserror::Error;

use crate::jet::MultiIndex;

pub use eval::{Valuation, Value};
pub use poly::{Atom, Mono, Poly, RatPoly};
pub use zero::Tri;
pub(crate) use zero::sample_valuation;

/// Dimensions of the jet space J(ℝⁿ, ℝᵐ) an expression lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub n: usize,
    pub m: usize,
}

impl Signature {
    pub fn new(n: usize, m: usize) -> Self {
        Signature { n, m }
    }
}

/// Auxiliary scalar parameters that may appear in flow components and
/// foliation data. They are not part of the jet-space signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    /// Flow time, printed `t`.
    T,
    /// Second flow time used in group-law composition, printed `s`.
    S,
    /// Foliation leaf parameter, printed `l`.
    Lambda,
}

/// A scalar indeterminate: base variable x_i, jet coordinate y^α_L, or
/// parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Var {
    Base(usize),
    Jet { comp: usize, idx: MultiIndex },
    Param(Param),
}

impl Var {
    pub fn jet(comp: usize, idx: MultiIndex) -> Var {
        Var::Jet { comp, idx }
    }

    /// Jet variable y^(k)_L for n = 1.
    pub fn jet1(comp: usize, k: usize) -> Var {
        Var::Jet {
            comp,
            idx: MultiIndex::scalar(k),
        }
    }

    pub fn jet_order(&self) -> Option<usize> {
        match self {
            Var::Jet { idx, .. } => Some(idx.order()),
            _ => None,
        }
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Base variables first, then jets graded by (|α|, α, L), then parameters.
impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        use Var::*;
        match (self, other) {
            (Base(a), Base(b)) => a.cmp(b),
            (Base(_), _) => Ordering::Less,
            (_, Base(_)) => Ordering::Greater,
            (Jet { comp: c1, idx: i1 }, Jet { comp: c2, idx: i2 }) => {
                i1.cmp(i2).then_with(|| c1.cmp(c2))
            }
            (Jet { .. }, _) => Ordering::Less,
            (_, Jet { .. }) => Ordering::Greater,
            (Param(a), Param(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Base(i) => write!(f, "x{i}"),
            Var::Jet { comp, idx } => {
                write!(f, "u{comp}[")?;
                for (k, a) in idx.components().iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, "]")
            }
            Var::Param(Param::T) => write!(f, "t"),
            Var::Param(Param::S) => write!(f, "s"),
            Var::Param(Param::Lambda) => write!(f, "l"),
        }
    }
}

/// Opaque elementary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at offset {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("jet coordinate out of signature at offset {pos}: {msg}")]
    JetOutOfSignature { pos: usize, msg: String },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("division by zero{}", if .0.is_empty() { String::new() } else { format!(": {}", .0) })]
    DivisionByZero(String),
    #[error("numeric domain error: {0}")]
    Domain(String),
}

/// An immutable symbolic expression in canonical normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    rp: Arc<RatPoly>,
}

/// Structural view of a canonical expression tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Rational(BigRational),
    Var(Var),
    Func(Func, Expr),
    /// Integer power of an atom, exponent ≥ 2.
    Pow(Expr, u32),
    /// ≥ 2 factors; a leading rational coefficient when not 1.
    Product(Vec<Expr>),
    /// ≥ 2 terms.
    Sum(Vec<Expr>),
    Quotient(Expr, Expr),
}

impl Expr {
    fn from_rp(rp: RatPoly) -> Expr {
        Expr { rp: Arc::new(rp) }
    }

    pub(crate) fn rp(&self) -> &RatPoly {
        &self.rp
    }

    pub fn rational(c: BigRational) -> Expr {
        Expr::from_rp(RatPoly::constant(c))
    }

    pub fn int(k: i64) -> Expr {
        Expr::rational(BigRational::from(BigInt::from(k)))
    }

    /// The exact rational p/q.
    pub fn ratio(p: i64, q: i64) -> Expr {
        Expr::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn var(v: Var) -> Expr {
        Expr::from_rp(RatPoly::from_poly(Poly::atom(Atom::V(v))))
    }

    pub fn base(i: usize) -> Expr {
        Expr::var(Var::Base(i))
    }

    pub fn jet(comp: usize, idx: MultiIndex) -> Expr {
        Expr::var(Var::jet(comp, idx))
    }

    /// Jet coordinate y^(k)_L for n = 1.
    pub fn jet1(comp: usize, k: usize) -> Expr {
        Expr::var(Var::jet1(comp, k))
    }

    pub fn param(p: Param) -> Expr {
        Expr::var(Var::Param(p))
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        Expr::from_rp(RatPoly::from_poly(Poly::atom(Atom::F(f, arg))))
    }

    pub fn sin(arg: Expr) -> Expr {
        Expr::func(Func::Sin, arg)
    }

    pub fn cos(arg: Expr) -> Expr {
        Expr::func(Func::Cos, arg)
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr::func(Func::Exp, arg)
    }

    pub fn ln(arg: Expr) -> Expr {
        Expr::func(Func::Ln, arg)
    }

    pub fn sqrt(arg: Expr) -> Expr {
        Expr::func(Func::Sqrt, arg)
    }

    /// Integer power; negative exponents build the reciprocal and panic on a
    /// canonically zero base.
    pub fn powi(&self, k: i64) -> Expr {
        if k == 1 {
            return self.clone();
        }
        Expr::from_rp(self.rp.powi(k))
    }

    /// Division that reports a canonically zero denominator as an error
    /// instead of panicking.
    pub fn checked_div(&self, rhs: &Expr) -> Result<Expr, ExprError> {
        if rhs.rp.is_zero() {
            return Err(ExprError::DivisionByZero(String::new()));
        }
        Ok(Expr::from_rp(self.rp.div(&rhs.rp)))
    }

    /// True when the canonical form is the zero node. See
    /// [`Expr::is_zero`] for the sampling-backed tri-state test.
    pub fn is_zero_node(&self) -> bool {
        self.rp.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.rp.as_constant()
    }

    /// Exact partial derivative; jet coordinates are independent
    /// indeterminates.
    pub fn diff(&self, v: &Var) -> Expr {
        Expr::from_rp(self.rp.derivative(v))
    }

    /// All variables occurring in the expression, including inside opaque
    /// function arguments.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        collect_vars(&self.rp, &mut out);
        out
    }

    /// Jet variables occurring in the expression.
    pub fn jet_vars(&self) -> Vec<(usize, MultiIndex)> {
        self.free_vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Jet { comp, idx } => Some((comp, idx)),
                _ => None,
            })
            .collect()
    }

    /// Highest jet order mentioned, if any jet occurs.
    pub fn max_jet_order(&self) -> Option<usize> {
        self.free_vars()
            .iter()
            .filter_map(Var::jet_order)
            .max()
    }

    /// Rough size measure used by growth budgets.
    pub fn node_count(&self) -> usize {
        rp_node_count(&self.rp)
    }

    /// Substitute variables by expressions and renormalize. Fails when a
    /// substitution makes a denominator canonically zero.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Expr>) -> Result<Expr, ExprError> {
        let num = subst_poly(&self.rp.num, bindings)?;
        let den = subst_poly(&self.rp.den, bindings)?;
        if den.is_zero_node() {
            return Err(ExprError::DivisionByZero(
                "denominator vanished under substitution".into(),
            ));
        }
        num.checked_div(&den)
    }

    /// Structural view of the canonical tree.
    pub fn kind(&self) -> ExprKind {
        print::kind_of(self)
    }
}

fn collect_vars(rp: &RatPoly, out: &mut BTreeSet<Var>) {
    for poly in [&rp.num, &rp.den] {
        for (mono, _) in poly.terms() {
            for (atom, _) in mono.factors() {
                match atom {
                    Atom::V(v) => {
                        out.insert(v.clone());
                    }
                    Atom::F(_, arg) => collect_vars(&arg.rp, out),
                }
            }
        }
    }
}

fn rp_node_count(rp: &RatPoly) -> usize {
    let mut n = 1;
    for poly in [&rp.num, &rp.den] {
        for (mono, _) in poly.terms() {
            n += 1;
            for (atom, _) in mono.factors() {
                n += match atom {
                    Atom::V(_) => 1,
                    Atom::F(_, arg) => 1 + rp_node_count(&arg.rp),
                };
            }
        }
    }
    n
}

fn subst_poly(p: &Poly, bindings: &BTreeMap<Var, Expr>) -> Result<Expr, ExprError> {
    let mut acc = Expr::zero();
    for (mono, coeff) in p.terms() {
        let mut term = Expr::rational(coeff.clone());
        for (atom, exp) in mono.factors() {
            let replaced = match atom {
                Atom::V(v) => match bindings.get(v) {
                    Some(e) => e.clone(),
                    None => Expr::var(v.clone()),
                },
                Atom::F(f, arg) => Expr::func(*f, arg.substitute(bindings)?),
            };
            term = term * replaced.powi(i64::from(*exp));
        }
        acc = acc + term;
    }
    Ok(acc)
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $rpop:ident) => {
        impl std::ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::from_rp(self.rp.$rpop(&rhs.rp))
            }
        }
        impl std::ops::$trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::from_rp(self.rp.$rpop(&rhs.rp))
            }
        }
        impl std::ops::$trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::from_rp(self.rp.$rpop(&rhs.rp))
            }
        }
        impl std::ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::from_rp(self.rp.$rpop(&rhs.rp))
            }
        }
    };
}

impl_binop!(Add, add, add);
impl_binop!(Sub, sub, sub);
impl_binop!(Mul, mul, mul);
// Division panics on a canonically zero denominator; algorithmic call sites
// check first (or use checked_div).
impl_binop!(Div, div, div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::from_rp(self.rp.neg())
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::from_rp(self.rp.neg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Config;

    fn sig11() -> Signature {
        Signature::new(1, 1)
    }

    #[test]
    fn sum_normalization_is_canonical() {
        let a = Expr::base(1) + Expr::jet1(1, 1);
        let b = Expr::jet1(1, 1) + Expr::base(1);
        assert_eq!(a, b);
        assert!((a - b).is_zero_node());
    }

    #[test]
    fn like_terms_combine() {
        let x = Expr::base(1);
        let e = &x + &x + Expr::int(3) * &x;
        assert_eq!(e, Expr::int(5) * &x);
    }

    #[test]
    fn zero_and_one_absorb() {
        let x = Expr::base(1);
        assert_eq!(&x + Expr::zero(), x);
        assert_eq!(&x * Expr::one(), x);
        assert!((&x * Expr::zero()).is_zero_node());
    }

    #[test]
    fn diff_power_rule() {
        let y = Expr::jet1(1, 1);
        let d = y.powi(2).diff(&Var::jet1(1, 1));
        assert_eq!(d, Expr::int(2) * &y);
    }

    #[test]
    fn diff_chain_free_sin() {
        let e = Expr::sin(Expr::base(1));
        let d = e.diff(&Var::Base(1));
        assert_eq!(d, Expr::cos(Expr::base(1)));
    }

    #[test]
    fn diff_coordinates_independent() {
        let d = Expr::base(1).diff(&Var::jet1(1, 0));
        assert!(d.is_zero_node());
    }

    #[test]
    fn diff_quotient_rule() {
        // d/dy1 (y2/y1) = -y2/y1^2 over n=1, m=2
        let q = Expr::jet1(2, 1).checked_div(&Expr::jet1(1, 1)).unwrap();
        let d = q.diff(&Var::jet1(1, 1));
        let expected = -Expr::jet1(2, 1) / Expr::jet1(1, 1).powi(2);
        assert_eq!(d, expected);
    }

    #[test]
    fn diff_is_linear_and_leibniz() {
        let cfg = Config::default();
        let v = Var::jet1(1, 1);
        let e1 = Expr::jet1(1, 1).powi(2) + Expr::base(1);
        let e2 = Expr::jet1(1, 2) * Expr::jet1(1, 1);
        let lhs = (&e1 * &e2).diff(&v);
        let rhs = e1.diff(&v) * &e2 + &e1 * e2.diff(&v);
        assert!((lhs - rhs).is_zero(&cfg).is_zero());
    }

    #[test]
    fn substitute_renormalizes() {
        // y2/y1 with y1 -> 1 + t
        let q = Expr::jet1(2, 1).checked_div(&Expr::jet1(1, 1)).unwrap();
        let mut b = BTreeMap::new();
        b.insert(Var::jet1(1, 1), Expr::one() + Expr::param(Param::T));
        let s = q.substitute(&b).unwrap();
        let expected = Expr::jet1(2, 1)
            .checked_div(&(Expr::one() + Expr::param(Param::T)))
            .unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn substitute_into_vanishing_denominator_errors() {
        let q = Expr::one().checked_div(&Expr::jet1(1, 1)).unwrap();
        let mut b = BTreeMap::new();
        b.insert(Var::jet1(1, 1), Expr::zero());
        assert!(matches!(
            q.substitute(&b),
            Err(ExprError::DivisionByZero(_))
        ));
    }

    #[test]
    fn checked_div_by_zero() {
        let z = Expr::base(1) - Expr::base(1);
        assert!(Expr::one().checked_div(&z).is_err());
    }

    #[test]
    fn max_jet_order_scans_function_arguments() {
        let e = Expr::sin(Expr::jet1(1, 3)) + Expr::base(1);
        assert_eq!(e.max_jet_order(), Some(3));
        let _ = sig11();
    }
}
