//! Canonical-tree view and text rendering.
//!
//! The printed text re-parses to the same canonical expression. Quotients are
//! rendered with jointly integer, primitive numerator and denominator so that
//! `(u2[1]/u1[1])^2/2` comes back as `u2[1]^2/(2*u1[1]^2)`.

use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use super::poly::{Atom, Mono, Poly};
use super::{Expr, ExprKind, Func};

pub(super) fn kind_of(e: &Expr) -> ExprKind {
    let rp = e.rp();
    if rp.den.is_one() {
        poly_kind(&rp.num)
    } else {
        let (num, den) = integer_normalized(&rp.num, &rp.den);
        ExprKind::Quotient(poly_expr(&num), poly_expr(&den))
    }
}

fn poly_expr(p: &Poly) -> Expr {
    let mut acc = Expr::zero();
    for (mono, coeff) in p.terms() {
        let mut t = Expr::rational(coeff.clone());
        for (atom, exp) in mono.factors() {
            t = t * atom_expr(atom).powi(i64::from(*exp));
        }
        acc = acc + t;
    }
    acc
}

fn atom_expr(atom: &Atom) -> Expr {
    match atom {
        Atom::V(v) => Expr::var(v.clone()),
        Atom::F(f, arg) => Expr::func(*f, arg.clone()),
    }
}

fn poly_kind(p: &Poly) -> ExprKind {
    match p.terms().len() {
        0 => ExprKind::Rational(BigRational::zero()),
        1 => {
            let (mono, coeff) = &p.terms()[0];
            term_kind(mono, coeff)
        }
        _ => ExprKind::Sum(
            p.terms()
                .iter()
                .map(|(m, c)| {
                    let mut t = Expr::rational(c.clone());
                    for (atom, exp) in m.factors() {
                        t = t * atom_expr(atom).powi(i64::from(*exp));
                    }
                    t
                })
                .collect(),
        ),
    }
}

fn term_kind(mono: &Mono, coeff: &BigRational) -> ExprKind {
    if mono.is_empty() {
        return ExprKind::Rational(coeff.clone());
    }
    if coeff.is_one() && mono.factors().len() == 1 {
        let (atom, exp) = &mono.factors()[0];
        return if *exp == 1 {
            match atom {
                Atom::V(v) => ExprKind::Var(v.clone()),
                Atom::F(f, arg) => ExprKind::Func(*f, arg.clone()),
            }
        } else {
            ExprKind::Pow(atom_expr(atom), *exp)
        };
    }
    let mut factors: Vec<Expr> = Vec::new();
    if !coeff.is_one() {
        factors.push(Expr::rational(coeff.clone()));
    }
    for (atom, exp) in mono.factors() {
        factors.push(atom_expr(atom).powi(i64::from(*exp)));
    }
    ExprKind::Product(factors)
}

/// Scale `num/den` to jointly primitive integer coefficients with a positive
/// leading denominator coefficient.
fn integer_normalized(num: &Poly, den: &Poly) -> (Poly, Poly) {
    let mut lcm = BigInt::one();
    for (_, c) in num.terms().iter().chain(den.terms()) {
        lcm = lcm.lcm(c.denom());
    }
    let scale = BigRational::from(lcm);
    let num = num.scale(&scale);
    let den = den.scale(&scale);
    let mut gcd = BigInt::zero();
    for (_, c) in num.terms().iter().chain(den.terms()) {
        gcd = gcd.gcd(c.numer());
    }
    if gcd.is_zero() {
        gcd = BigInt::one();
    }
    let mut inv = BigRational::from(gcd).recip();
    if den.leading_coeff().is_negative() {
        inv = -inv;
    }
    (num.scale(&inv), den.scale(&inv))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rp = self.rp();
        if rp.den.is_one() {
            write!(f, "{}", fmt_poly(&rp.num))
        } else {
            let (num, den) = integer_normalized(&rp.num, &rp.den);
            let num_s = if num.terms().len() > 1 {
                format!("({})", fmt_poly(&num))
            } else {
                fmt_poly(&num)
            };
            write!(f, "{}/{}", num_s, fmt_den(&den))
        }
    }
}

fn fmt_den(p: &Poly) -> String {
    if p.terms().len() > 1 {
        return format!("({})", fmt_poly(p));
    }
    let (mono, coeff) = &p.terms()[0];
    // a lone atom or power needs no parentheses after '/'
    let simple = (mono.factors().len() == 1 && coeff.is_one() && coeff.denom().is_one())
        || (mono.is_empty() && coeff.denom().is_one());
    if simple {
        fmt_poly(p)
    } else {
        format!("({})", fmt_poly(p))
    }
}

fn fmt_poly(p: &Poly) -> String {
    if p.terms().is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (mono, coeff)) in p.terms().iter().enumerate() {
        let neg = coeff.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&fmt_term(mono, &coeff.abs()));
    }
    out
}

fn fmt_term(mono: &Mono, coeff: &BigRational) -> String {
    let mut parts: Vec<String> = Vec::new();
    if mono.is_empty() || !coeff.numer().is_one() {
        parts.push(coeff.numer().to_string());
    }
    for (atom, exp) in mono.factors() {
        let base = fmt_atom(atom);
        if *exp == 1 {
            parts.push(base);
        } else {
            parts.push(format!("{base}^{exp}"));
        }
    }
    let mut s = parts.join("*");
    if !coeff.denom().is_one() {
        s.push('/');
        s.push_str(&coeff.denom().to_string());
    }
    s
}

fn fmt_atom(atom: &Atom) -> String {
    match atom {
        Atom::V(v) => v.to_string(),
        Atom::F(f, arg) => format!("{}({})", name_of(*f), arg),
    }
}

fn name_of(f: Func) -> &'static str {
    f.name()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Signature, Var};

    fn roundtrip(s: &str, n: usize, m: usize) -> String {
        let sig = Signature::new(n, m);
        let e = Expr::parse(s, &sig).unwrap();
        let printed = e.to_string();
        let back = Expr::parse(&printed, &sig).unwrap();
        assert_eq!(e, back, "round trip failed for {s} -> {printed}");
        printed
    }

    #[test]
    fn print_parse_roundtrips() {
        roundtrip("x1 + u1[1]^2", 1, 1);
        roundtrip("u2[1]/u1[1]", 1, 2);
        roundtrip("(u2[1]/u1[1])^2/2", 1, 2);
        roundtrip("sin(x1)*cos(x1) - 1/3", 1, 1);
        roundtrip("1/(1 + u1[1])", 1, 1);
        roundtrip("(x1 - u1[0])^3", 1, 1);
    }

    #[test]
    fn quotient_prints_integer_normalized() {
        let sig = Signature::new(1, 2);
        let e = Expr::parse("(u2[1]/u1[1])^2/2", &sig).unwrap();
        assert_eq!(e.to_string(), "u2[1]^2/(2*u1[1]^2)");
    }

    #[test]
    fn var_kind_is_var() {
        let e = Expr::jet1(1, 2);
        match e.kind() {
            ExprKind::Var(Var::Jet { comp, idx }) => {
                assert_eq!(comp, 1);
                assert_eq!(idx.order(), 2);
            }
            k => panic!("unexpected kind {k:?}"),
        }
    }

    #[test]
    fn sum_kind_has_children() {
        let e = Expr::base(1) + Expr::jet1(1, 1).powi(2);
        match e.kind() {
            ExprKind::Sum(terms) => assert_eq!(terms.len(), 2),
            k => panic!("unexpected kind {k:?}"),
        }
    }
}
