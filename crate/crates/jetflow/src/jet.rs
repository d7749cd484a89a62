//! Multiindex and multipair bookkeeping, and the total-derivative operators
//! acting on expressions.
//!
//! A multiindex `(α₁,…,αₙ)` records derivative orders per base direction; a
//! multipair `(L, α)` pairs a target component `L ∈ 1..=m` with a multiindex.
//! The total derivative `D^i` acts on an expression by
//! `∂/∂x_i + Σ y_L^{α+i} ∂/∂y_L^α`, the sum running over the jet coordinates
//! that actually occur (always finitely many), so the operator is total and
//! exact.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::expr::{Expr, Var};

/// Derivative-order bookkeeping: an n-tuple of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// The zero multiindex in n directions.
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit multiindex with a single 1 in direction `i` (1-based).
    pub fn unit(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n, "direction {i} out of 1..={n}");
        let mut v = vec![0; n];
        v[i - 1] = 1;
        MultiIndex(v)
    }

    pub fn from_vec(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }

    /// Convenience for n = 1: the multiindex `(k)`.
    pub fn scalar(k: usize) -> Self {
        MultiIndex(vec![k])
    }

    /// Number of directions n.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// |α| = Σ αᵢ.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }

    /// Componentwise sum α + β.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.len(), other.len());
        MultiIndex(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// α + i for a unit direction i (1-based).
    pub fn add_unit(&self, i: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[i - 1] += 1;
        MultiIndex(v)
    }

    /// α − i when αᵢ ≥ 1, else None.
    pub fn sub_unit(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i - 1] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i - 1] -= 1;
        Some(MultiIndex(v))
    }

    /// Smallest direction with a nonzero entry (1-based), if any.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&a| a > 0).map(|p| p + 1)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic: first |α|, then the component tuple.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "(")?;
            for (k, a) in self.0.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")
        }
    }
}

/// A component label `L ∈ 1..=m` together with a multiindex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPair {
    pub comp: usize,
    pub idx: MultiIndex,
}

impl MultiPair {
    pub fn new(comp: usize, idx: MultiIndex) -> Self {
        assert!(comp >= 1, "component labels are 1-based");
        MultiPair { comp, idx }
    }

    /// Convenience for n = 1: the pair (L, (k)).
    pub fn scalar(comp: usize, k: usize) -> Self {
        MultiPair::new(comp, MultiIndex::scalar(k))
    }

    pub fn order(&self) -> usize {
        self.idx.order()
    }
}

impl PartialOrd for MultiPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiPair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.idx
            .cmp(&other.idx)
            .then_with(|| self.comp.cmp(&other.comp))
    }
}

impl fmt::Display for MultiPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(L={}, a={})", self.comp, self.idx)
    }
}

/// A finite set of multipairs. Always contains `(L, 0)` for every `L ∈ 1..=m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPairSet {
    n: usize,
    m: usize,
    set: BTreeSet<MultiPair>,
}

impl MultiPairSet {
    /// The minimal set over the signature: `{(L, 0) : L = 1..m}`.
    pub fn minimal(n: usize, m: usize) -> Self {
        let mut set = BTreeSet::new();
        for l in 1..=m {
            set.insert(MultiPair::new(l, MultiIndex::zero(n)));
        }
        MultiPairSet { n, m, set }
    }

    pub fn insert(&mut self, p: MultiPair) {
        assert_eq!(p.idx.len(), self.n, "multiindex arity mismatch");
        assert!(p.comp <= self.m, "component label out of signature");
        self.set.insert(p);
    }

    pub fn contains(&self, p: &MultiPair) -> bool {
        self.set.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &MultiPair> {
        self.set.iter()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// |A| = sup |α| over the set.
    pub fn order(&self) -> usize {
        self.set.iter().map(MultiPair::order).max().unwrap_or(0)
    }

    /// One closure round: A′ = A ∪ {(L, α+i)} over all elements and directions.
    pub fn prolonged_once(&self) -> MultiPairSet {
        let mut out = self.clone();
        for p in &self.set {
            for i in 1..=self.n {
                out.set.insert(MultiPair::new(p.comp, p.idx.add_unit(i)));
            }
        }
        out
    }

    /// A^[ℓ]: the set closed under ℓ rounds of α ↦ α + i.
    pub fn prolonged(&self, rounds: usize) -> MultiPairSet {
        let mut out = self.clone();
        for _ in 0..rounds {
            out = out.prolonged_once();
        }
        out
    }
}

/// All multiindices with `n` entries of total order exactly `r`, in
/// ascending graded-lex order.
pub fn multiindices(n: usize, r: usize) -> Vec<MultiIndex> {
    fn rec(n: usize, r: usize, prefix: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if n == 1 {
            prefix.push(r);
            out.push(MultiIndex::from_vec(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in 0..=r {
            prefix.push(a);
            rec(n - 1, r - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, r, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Total derivative D^i e = ∂e/∂x_i + Σ y_L^{α+i} ∂e/∂y_L^α over the jet
/// coordinates occurring in `e`. The result may mention jets one order higher.
pub fn total_derivative(e: &Expr, i: usize) -> Expr {
    let mut out = e.diff(&Var::Base(i));
    for v in e.free_vars() {
        if let Var::Jet { comp, idx } = &v {
            let up = Var::Jet {
                comp: *comp,
                idx: idx.add_unit(i),
            };
            out = out + Expr::var(up) * e.diff(&v);
        }
    }
    out
}

/// D^α = (D¹)^{α₁} ··· (Dⁿ)^{αₙ} applied to `e`.
pub fn total_derivative_multi(e: &Expr, alpha: &MultiIndex) -> Expr {
    let mut out = e.clone();
    for i in 1..=alpha.len() {
        for _ in 0..alpha.components()[i - 1] {
            out = total_derivative(&out, i);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Signature;
    use crate::Config;

    fn e(s: &str, n: usize, m: usize) -> Expr {
        Expr::parse(s, &Signature { n, m }).unwrap()
    }

    #[test]
    fn total_derivative_of_jet_raises_order() {
        // D(y^0_1) = y^1_1
        let d = total_derivative(&e("u1[0]", 1, 1), 1);
        assert_eq!(d, e("u1[1]", 1, 1));
    }

    #[test]
    fn total_derivative_of_base_is_one() {
        let d = total_derivative(&e("x1", 1, 1), 1);
        assert_eq!(d, Expr::one());
    }

    #[test]
    fn total_derivative_product_rule() {
        // D(y¹·y¹₂) = y²y¹₂ + y¹y²₂ for n=1, m=2
        let d = total_derivative(&e("u1[1]*u2[1]", 1, 2), 1);
        assert_eq!(d, e("u1[2]*u2[1] + u1[1]*u2[2]", 1, 2));
    }

    #[test]
    fn iterated_multiindex_derivative() {
        let d = total_derivative_multi(&e("u1[0]", 1, 1), &MultiIndex::scalar(2));
        assert_eq!(d, e("u1[2]", 1, 1));
    }

    #[test]
    fn multi_direction_derivative() {
        // D^(1,1) y^(0,0) = y^(1,1) for n=2
        let sig = Signature { n: 2, m: 1 };
        let y00 = Expr::jet(1, MultiIndex::from_vec(vec![0, 0]));
        let d = total_derivative_multi(&y00, &MultiIndex::from_vec(vec![1, 1]));
        let _ = sig;
        assert_eq!(d, Expr::jet(1, MultiIndex::from_vec(vec![1, 1])));
    }

    #[test]
    fn total_derivatives_commute() {
        let cfg = Config::default();
        // [D^1, D^2] = 0 on a sample polynomial expression, n=2, m=2
        let y = |l: usize, a: Vec<usize>| Expr::jet(l, MultiIndex::from_vec(a));
        let f = y(1, vec![1, 0]).powi(2) * y(2, vec![0, 1]) + Expr::base(1) * y(1, vec![0, 0]);
        let d12 = total_derivative(&total_derivative(&f, 1), 2);
        let d21 = total_derivative(&total_derivative(&f, 2), 1);
        assert!((d12 - d21).is_zero(&cfg).is_zero());
    }

    #[test]
    fn prolong_set_examples() {
        // {(1,0)} with ℓ=1, n=1 → {(1,0),(1,1)}
        let a = MultiPairSet::minimal(1, 1);
        let p1 = a.prolonged(1);
        assert_eq!(p1.len(), 2);
        assert!(p1.contains(&MultiPair::scalar(1, 1)));

        // {(1,0)} with ℓ=2, n=2 → six elements, order 2
        let b = MultiPairSet::minimal(2, 1);
        let p2 = b.prolonged(2);
        assert_eq!(p2.len(), 6);
        assert_eq!(p2.order(), 2);
        assert!(p2.contains(&MultiPair::new(1, MultiIndex::from_vec(vec![1, 1]))));

        // ℓ = 0 is the identity
        assert_eq!(b.prolonged(0), b);
    }

    #[test]
    fn prolonged_order_grows_by_rounds() {
        let mut a = MultiPairSet::minimal(1, 2);
        a.insert(MultiPair::scalar(2, 3));
        for rounds in 0..4 {
            assert_eq!(a.prolonged(rounds).order(), 3 + rounds);
        }
    }

    #[test]
    fn graded_lex_ordering() {
        let a = MultiIndex::from_vec(vec![0, 2]);
        let b = MultiIndex::from_vec(vec![1, 0]);
        // |b| < |a| so b < a despite lex order
        assert!(b < a);
        let c = MultiIndex::from_vec(vec![1, 1]);
        let d = MultiIndex::from_vec(vec![2, 0]);
        assert!(c < d);
    }
}
