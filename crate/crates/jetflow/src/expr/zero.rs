//! Tri-state zero testing.
//!
//! An expression is provably zero exactly when rational-function
//! normalization yields the zero node. Otherwise it is evaluated at seeded
//! random rational points: any nonzero value is a witness of nonzeroness,
//! while a full round of (near-)zero samples leaves the answer `Unknown`
//! (this is where `sin²+cos²−1` lands, since trig identities are never
//! applied). Downstream condition checks consume the tri-state and report
//! `unknown` rather than guessing.

use num::{BigInt, BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Expr, Valuation, Value, Var};
use crate::Config;

/// Outcome of a zero test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    Zero,
    NonZero,
    Unknown,
}

impl Tri {
    pub fn is_zero(self) -> bool {
        self == Tri::Zero
    }

    pub fn is_nonzero(self) -> bool {
        self == Tri::NonZero
    }

    pub fn label(self) -> &'static str {
        match self {
            Tri::Zero => "zero",
            Tri::NonZero => "nonzero",
            Tri::Unknown => "unknown",
        }
    }
}

/// Float magnitudes below this count as a zero sample.
const FLOAT_ZERO_EPS: f64 = 1e-12;

impl Expr {
    /// Tri-state zero test (see module docs). Deterministic for a fixed
    /// `cfg.seed`: sample points depend only on the seed, the variable and
    /// the sampling round, never on call order.
    pub fn is_zero(&self, cfg: &Config) -> Tri {
        if self.is_zero_node() {
            return Tri::Zero;
        }
        let vars: Vec<Var> = self.free_vars().into_iter().collect();
        let mut completed = 0usize;
        for round in 0..cfg.zero_samples {
            let mut done = false;
            for retry in 0..=cfg.zero_retries {
                let val = sample_valuation(&vars, cfg.seed, round, retry);
                match self.eval(&val) {
                    Ok(Value::Rational(r)) => {
                        if !r.is_zero() {
                            return Tri::NonZero;
                        }
                        done = true;
                    }
                    Ok(Value::Float(f)) => {
                        if f.abs() >= FLOAT_ZERO_EPS {
                            return Tri::NonZero;
                        }
                        done = true;
                    }
                    Err(_) => continue, // singular sample; retry elsewhere
                }
                break;
            }
            if done {
                completed += 1;
            }
        }
        // Every completed sample was zero (or nothing evaluated at all):
        // no witness either way.
        let _ = completed;
        Tri::Unknown
    }

    /// Tri-state equality through subtraction.
    pub fn tri_eq(&self, other: &Expr, cfg: &Config) -> Tri {
        (self - other).is_zero(cfg)
    }
}

pub(crate) fn sample_valuation(vars: &[Var], seed: u64, round: usize, retry: usize) -> Valuation {
    let mut val = Valuation::new();
    for v in vars {
        val.set_rational(v.clone(), sample_rational(v, seed, round, retry));
    }
    val
}

/// Rational sample for one variable: numerators in [-999, 999]\{0},
/// denominators in [1, 999], derived only from (seed, var, round, retry).
fn sample_rational(v: &Var, seed: u64, round: usize, retry: usize) -> BigRational {
    let mut h = fnv1a(&format!("{v:?}"));
    h ^= (round as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    h ^= (retry as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h);
    let mut numer: i64 = rng.gen_range(-999..=999);
    if numer == 0 {
        numer = 1;
    }
    let denom: i64 = rng.gen_range(1..=999);
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Signature;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn normalization_proves_zero() {
        let sig = Signature::new(1, 1);
        let a = Expr::parse("x1 + u1[0]", &sig).unwrap();
        let b = Expr::parse("u1[0] + x1", &sig).unwrap();
        assert_eq!((a - b).is_zero(&cfg()), Tri::Zero);
    }

    #[test]
    fn sampling_proves_nonzero() {
        assert_eq!(Expr::jet1(1, 1).is_zero(&cfg()), Tri::NonZero);
    }

    #[test]
    fn trig_identity_stays_unknown() {
        let x = Expr::base(1);
        let e = Expr::sin(x.clone()).powi(2) + Expr::cos(x).powi(2) - Expr::one();
        assert_eq!(e.is_zero(&cfg()), Tri::Unknown);
    }

    #[test]
    fn singular_samples_are_retried() {
        // 1/y - 1/y is the zero node, so perturb: y/y normalizes to 1 -> NonZero.
        let y = Expr::jet1(1, 1);
        let e = y.clone().checked_div(&y).unwrap();
        assert_eq!(e.is_zero(&cfg()), Tri::NonZero);
    }
}
