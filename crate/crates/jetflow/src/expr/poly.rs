//! Canonical polynomial / rational-function representation backing `Expr`.
//!
//! Every expression is stored as a quotient `num/den` of multivariate
//! polynomials over ℚ whose indeterminates are base variables, jet
//! coordinates, flow parameters and opaque transcendental atoms
//! (`sin(e)`, `ln(e)`, …, with `e` itself canonical). The quotient is kept
//! canonical: `den` is monic under the global monomial order, `num` and `den`
//! share no common monomial factor, and the zero expression is `0/1`. Sums
//! and products therefore flatten, sort and combine automatically, which
//! makes equality of rational expressions decidable by subtraction.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};

use super::{Expr, Func, Var};

/// A polynomial indeterminate: a variable or an opaque function application.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    V(Var),
    F(Func, Expr),
}

/// A monomial: sorted `(atom, exponent)` factors with exponents ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono(Vec<(Atom, u32)>);

impl Mono {
    pub fn empty() -> Self {
        Mono(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Mono(vec![(a, 1)])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| u64::from(*e)).sum()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut out: Vec<(Atom, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Mono(out)
    }

    /// Exact division; caller must guarantee `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, e) in &self.0 {
            let mut e = *e;
            if j < other.0.len() && other.0[j].0 == *a {
                assert!(other.0[j].1 <= e, "monomial division underflow");
                e -= other.0[j].1;
                j += 1;
            }
            if e > 0 {
                out.push((a.clone(), e));
            }
        }
        assert_eq!(j, other.0.len(), "monomial division underflow");
        Mono(out)
    }

    /// Componentwise minimum of exponents (the gcd of two monomials).
    pub fn gcd(&self, other: &Mono) -> Mono {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1.min(other.0[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Mono(out)
    }

    /// The monomial with `atom`'s exponent lowered by one.
    pub fn decrement(&self, atom: &Atom) -> Mono {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, e) in &self.0 {
            if a == atom {
                if *e > 1 {
                    out.push((a.clone(), e - 1));
                }
            } else {
                out.push((a.clone(), *e));
            }
        }
        Mono(out)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded order: total degree first, then the factor list.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Polynomial over ℚ: terms sorted descending by monomial, no zero
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, BigRational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Mono::empty(), c)],
            }
        }
    }

    pub fn atom(a: Atom) -> Self {
        Poly {
            terms: vec![(Mono::atom(a), BigRational::one())],
        }
    }

    pub fn term(m: Mono, c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    fn from_map(map: BTreeMap<Mono, BigRational>) -> Self {
        let mut terms: Vec<(Mono, BigRational)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.reverse();
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// Some(c) when the polynomial is the constant c (including 0).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 if self.terms[0].0.is_empty() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> &[(Mono, BigRational)] {
        &self.terms
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut map = BTreeMap::new();
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            let entry = map.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry += c;
        }
        Poly::from_map(map)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut map = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let entry = map.entry(m).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        Poly::from_map(map)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// gcd of all monomials (empty when the polynomial is zero).
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let mut content = match it.next() {
            Some((m, _)) => m.clone(),
            None => return Mono::empty(),
        };
        for (m, _) in it {
            if content.is_empty() {
                break;
            }
            content = content.gcd(m);
        }
        content
    }

    pub fn div_mono(&self, m: &Mono) -> Poly {
        if m.is_empty() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mo, c)| (mo.div(m), c.clone()))
                .collect(),
        }
    }

    /// ∂p/∂v with the chain rule through opaque function atoms; the result is
    /// rational because d(ln u) and d(√u) introduce quotients.
    pub fn derivative(&self, v: &Var) -> RatPoly {
        let mut out = RatPoly::zero();
        for (mono, coeff) in &self.terms {
            for (atom, exp) in mono.factors() {
                let datom = atom_derivative(atom, v);
                if datom.is_zero() {
                    continue;
                }
                let rest = mono.decrement(atom);
                let factor = Poly::term(rest, coeff * BigRational::from(BigInt::from(*exp)));
                out = out.add(&RatPoly::from_poly(factor).mul(&datom));
            }
        }
        out
    }
}

fn atom_derivative(atom: &Atom, v: &Var) -> RatPoly {
    match atom {
        Atom::V(w) => {
            if w == v {
                RatPoly::one()
            } else {
                RatPoly::zero()
            }
        }
        Atom::F(f, arg) => {
            let darg = arg.rp().derivative(v);
            if darg.is_zero() {
                return RatPoly::zero();
            }
            let outer = match f {
                Func::Sin => RatPoly::from_poly(Poly::atom(Atom::F(Func::Cos, arg.clone()))),
                Func::Cos => {
                    RatPoly::from_poly(Poly::atom(Atom::F(Func::Sin, arg.clone())).neg())
                }
                Func::Exp => RatPoly::from_poly(Poly::atom(Atom::F(Func::Exp, arg.clone()))),
                Func::Ln => RatPoly::new(Poly::one(), arg.rp().num.clone())
                    .mul(&RatPoly::new(arg.rp().den.clone(), Poly::one())),
                Func::Sqrt => {
                    let two_sqrt = Poly::atom(Atom::F(Func::Sqrt, arg.clone()))
                        .scale(&BigRational::from(BigInt::from(2)));
                    RatPoly::new(Poly::one(), two_sqrt)
                }
            };
            outer.mul(&darg)
        }
    }
}

/// Canonical quotient of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatPoly {
    pub num: Poly,
    pub den: Poly,
}

impl RatPoly {
    /// Canonicalize `num/den`. Panics when `den` is the zero polynomial;
    /// callers that divide by arbitrary expressions must check first.
    pub fn new(num: Poly, den: Poly) -> RatPoly {
        assert!(!den.is_zero(), "division by the zero expression");
        if num.is_zero() {
            return RatPoly {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        // cancel the common monomial factor
        let content = num.monomial_content().gcd(&den.monomial_content());
        let (mut num, mut den) = if content.is_empty() {
            (num, den)
        } else {
            (num.div_mono(&content), den.div_mono(&content))
        };
        // make the denominator monic
        let lead = den.leading_coeff();
        if !lead.is_one() {
            let inv = BigRational::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatPoly { num, den }
    }

    pub fn from_poly(p: Poly) -> RatPoly {
        RatPoly {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> RatPoly {
        RatPoly::from_poly(Poly::zero())
    }

    pub fn one() -> RatPoly {
        RatPoly::from_poly(Poly::one())
    }

    pub fn constant(c: BigRational) -> RatPoly {
        RatPoly::from_poly(Poly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        if self.den == other.den {
            return RatPoly::new(self.num.add(&other.num), self.den.clone());
        }
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        RatPoly::new(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        RatPoly::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// Reciprocal; panics on the zero expression.
    pub fn inv(&self) -> RatPoly {
        RatPoly::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatPoly) -> RatPoly {
        self.mul(&other.inv())
    }

    pub fn powi(&self, k: i64) -> RatPoly {
        let abs = u32::try_from(k.unsigned_abs()).expect("exponent too large");
        let p = RatPoly::new(self.num.pow(abs), self.den.pow(abs));
        if k < 0 {
            p.inv()
        } else {
            p
        }
    }

    pub fn derivative(&self, v: &Var) -> RatPoly {
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() && self.den.is_one() {
            return dn;
        }
        // (n' d - n d') / d^2
        let lhs = dn.mul(&RatPoly::from_poly(self.den.clone()));
        let rhs = RatPoly::from_poly(self.num.clone()).mul(&dd);
        lhs.sub(&rhs)
            .div(&RatPoly::from_poly(self.den.pow(2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::atom(Atom::V(Var::Base(1)))
    }

    #[test]
    fn monomial_content_cancels() {
        // (x^2 + x) / x  ->  (x + 1) / 1
        let num = x().mul(&x()).add(&x());
        let r = RatPoly::new(num, x());
        assert!(r.den.is_one());
        assert_eq!(r.num, x().add(&Poly::one()));
    }

    #[test]
    fn monic_denominator() {
        // 1 / (2x)  ->  (1/2) / x
        let two_x = x().scale(&BigRational::from(BigInt::from(2)));
        let r = RatPoly::new(Poly::one(), two_x);
        assert_eq!(r.den, x());
        assert_eq!(
            r.num.as_constant().unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
    }

    #[test]
    fn add_cancels_to_zero() {
        let a = RatPoly::new(Poly::one(), x());
        let b = a.neg();
        assert!(a.add(&b).is_zero());
    }
}
