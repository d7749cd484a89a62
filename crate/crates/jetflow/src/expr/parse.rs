//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := '-'? term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' int)?
//! atom   := rational | 'x' int | 'u' int '[' int (',' int)* ']'
//!         | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | exp | ln | sqrt
//! ```
//!
//! `u L [α₁,…,αₙ]` denotes the jet coordinate y^α_L; for n = 1, `u1[2]` is
//! y²₁. The leading `-` is accepted so printed normal forms re-parse.

use num::BigInt;

use super::{Expr, ExprError, Func, Param, Signature, Var};
use crate::jet::MultiIndex;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token with its starting offset; None at end of input.
    fn next(&mut self) -> Result<Option<(Tok, usize)>, ExprError> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        if c.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let n: BigInt = text.parse().unwrap();
            return Ok(Some((Tok::Int(n), start)));
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return Ok(Some((Tok::Ident(text.to_string()), start)));
        }
        if b"+-*/^()[],".contains(&c) {
            self.pos += 1;
            return Ok(Some((Tok::Sym(c as char), start)));
        }
        Err(ExprError::Syntax {
            pos: start,
            msg: format!("unexpected character `{}`", c as char),
        })
    }
}

/// What identifiers resolve to: a jet-space signature, or a single
/// free parameter (used for foliation profile functions of λ).
#[derive(Clone, Copy)]
enum Ctx {
    Jet(Signature),
    Lambda,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    cursor: usize,
    end: usize,
    ctx: Ctx,
}

impl Expr {
    /// Parse an expression over the jet-space signature.
    pub fn parse(text: &str, sig: &Signature) -> Result<Expr, ExprError> {
        Parser::run(text, Ctx::Jet(*sig))
    }

    /// Parse a profile function of the single indeterminate `l`.
    pub fn parse_lambda(text: &str) -> Result<Expr, ExprError> {
        Parser::run(text, Ctx::Lambda)
    }
}

impl Parser {
    fn run(text: &str, ctx: Ctx) -> Result<Expr, ExprError> {
        let mut lx = Lexer::new(text);
        let mut toks = Vec::new();
        while let Some(t) = lx.next()? {
            toks.push(t);
        }
        let mut p = Parser {
            toks,
            cursor: 0,
            end: text.len(),
            ctx,
        };
        let e = p.expr()?;
        if let Some((_, pos)) = p.peek() {
            return Err(ExprError::Syntax {
                pos,
                msg: "trailing input".into(),
            });
        }
        Ok(e)
    }

    fn peek(&self) -> Option<(Tok, usize)> {
        self.toks.get(self.cursor).cloned()
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<usize, ExprError> {
        match self.bump() {
            Some((Tok::Sym(s), pos)) if s == c => Ok(pos),
            Some((_, pos)) => Err(ExprError::Syntax {
                pos,
                msg: format!("expected `{c}`"),
            }),
            None => Err(ExprError::Syntax {
                pos: self.end,
                msg: format!("expected `{c}`"),
            }),
        }
    }

    fn expect_usize(&mut self, what: &str) -> Result<(usize, usize), ExprError> {
        match self.bump() {
            Some((Tok::Int(n), pos)) => {
                let v = usize::try_from(&n).map_err(|_| ExprError::Syntax {
                    pos,
                    msg: format!("{what} too large"),
                })?;
                Ok((v, pos))
            }
            Some((_, pos)) => Err(ExprError::Syntax {
                pos,
                msg: format!("expected {what}"),
            }),
            None => Err(ExprError::Syntax {
                pos: self.end,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut negate = false;
        if let Some((Tok::Sym('-'), _)) = self.peek() {
            self.bump();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        while let Some((Tok::Sym(op), _)) = self.peek() {
            if op == '+' || op == '-' {
                self.bump();
                let rhs = self.term()?;
                acc = if op == '+' { acc + rhs } else { acc - rhs };
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.factor()?;
        while let Some((Tok::Sym(op), pos)) = self.peek() {
            if op == '*' || op == '/' {
                self.bump();
                let rhs = self.factor()?;
                if op == '*' {
                    acc = acc * rhs;
                } else {
                    acc = acc.checked_div(&rhs).map_err(|_| ExprError::Syntax {
                        pos,
                        msg: "division by an expression that normalizes to zero".into(),
                    })?;
                }
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if let Some((Tok::Sym('^'), _)) = self.peek() {
            self.bump();
            let (exp, pos) = self.expect_usize("integer exponent")?;
            let exp = i64::try_from(exp).map_err(|_| ExprError::Syntax {
                pos,
                msg: "exponent too large".into(),
            })?;
            return Ok(base.powi(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.bump() {
            Some((Tok::Int(n), _)) => Ok(Expr::rational(num::BigRational::from(n))),
            Some((Tok::Sym('('), _)) => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Some((Tok::Ident(name), pos)) => self.ident_atom(&name, pos),
            Some((_, pos)) => Err(ExprError::Syntax {
                pos,
                msg: "expected an atom".into(),
            }),
            None => Err(ExprError::Syntax {
                pos: self.end,
                msg: "expected an atom".into(),
            }),
        }
    }

    fn ident_atom(&mut self, name: &str, pos: usize) -> Result<Expr, ExprError> {
        if let Some(func) = match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        } {
            self.expect_sym('(')?;
            let arg = self.expr()?;
            self.expect_sym(')')?;
            return Ok(Expr::func(func, arg));
        }
        match (self.ctx, name) {
            (Ctx::Lambda, "l") => Ok(Expr::param(Param::Lambda)),
            (Ctx::Jet(sig), "x") => {
                let (i, ipos) = self.expect_usize("base-variable index")?;
                if i < 1 || i > sig.n {
                    return Err(ExprError::JetOutOfSignature {
                        pos: ipos,
                        msg: format!("base variable x{i} outside 1..={}", sig.n),
                    });
                }
                Ok(Expr::base(i))
            }
            (Ctx::Jet(sig), "u") => {
                let (l, lpos) = self.expect_usize("component label")?;
                if l < 1 || l > sig.m {
                    return Err(ExprError::JetOutOfSignature {
                        pos: lpos,
                        msg: format!("component label u{l} outside 1..={}", sig.m),
                    });
                }
                self.expect_sym('[')?;
                let mut idx = Vec::new();
                let (a0, _) = self.expect_usize("integer")?;
                idx.push(a0);
                while let Some((Tok::Sym(','), _)) = self.peek() {
                    self.bump();
                    let (a, _) = self.expect_usize("integer")?;
                    idx.push(a);
                }
                let close = self.expect_sym(']')?;
                if idx.len() != sig.n {
                    return Err(ExprError::JetOutOfSignature {
                        pos: close,
                        msg: format!(
                            "multiindex has {} entries, signature has n = {}",
                            idx.len(),
                            sig.n
                        ),
                    });
                }
                Ok(Expr::var(Var::jet(l, MultiIndex::from_vec(idx))))
            }
            _ => Err(ExprError::UnknownIdentifier {
                pos,
                name: name.to_string(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(n: usize, m: usize) -> Signature {
        Signature::new(n, m)
    }

    #[test]
    fn parses_grammar_cases() {
        let e = Expr::parse("x1 + u1[1]^2", &sig(1, 1)).unwrap();
        assert_eq!(e, Expr::base(1) + Expr::jet1(1, 1).powi(2));

        let e = Expr::parse("u2[2]", &sig(1, 2)).unwrap();
        assert_eq!(e, Expr::jet1(2, 2));
    }

    #[test]
    fn malformed_input_reports_offset() {
        let err = Expr::parse("u1[", &sig(1, 1)).unwrap_err();
        match err {
            ExprError::Syntax { pos, .. } => assert_eq!(pos, 3),
            e => panic!("unexpected error {e:?}"),
        }
    }

    #[test]
    fn unknown_identifier() {
        let err = Expr::parse("y1 + 2", &sig(1, 1)).unwrap_err();
        assert!(matches!(err, ExprError::UnknownIdentifier { pos: 0, .. }));
    }

    #[test]
    fn jet_out_of_signature() {
        assert!(matches!(
            Expr::parse("u3[1]", &sig(1, 2)),
            Err(ExprError::JetOutOfSignature { .. })
        ));
        assert!(matches!(
            Expr::parse("u1[1,2]", &sig(1, 2)),
            Err(ExprError::JetOutOfSignature { .. })
        ));
        assert!(matches!(
            Expr::parse("x2", &sig(1, 2)),
            Err(ExprError::JetOutOfSignature { .. })
        ));
    }

    #[test]
    fn rational_literals_normalize() {
        let e = Expr::parse("3/6", &sig(1, 1)).unwrap();
        assert_eq!(e, Expr::ratio(1, 2));
    }

    #[test]
    fn lambda_context() {
        let e = Expr::parse_lambda("l^2/2").unwrap();
        assert_eq!(e, Expr::param(Param::Lambda).powi(2) * Expr::ratio(1, 2));
        assert!(Expr::parse_lambda("x1").is_err());
    }

    #[test]
    fn division_by_zero_literal() {
        assert!(Expr::parse("1/(x1 - x1)", &sig(1, 1)).is_err());
    }

    #[test]
    fn leading_minus_accepted() {
        let e = Expr::parse("-u1[2]", &sig(1, 1)).unwrap();
        assert_eq!(e, -Expr::jet1(1, 2));
    }
}
