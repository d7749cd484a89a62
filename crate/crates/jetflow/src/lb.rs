//! Lie-Bäcklund fields given by principal components, and their
//! prolongation.
//!
//! A field is determined by ξ_i and η⁰_L. Higher components follow from the
//! recursion
//!
//! ```text
//! η^{α+i}_L = D^i η^α_L − Σ_j y^{α+j}_L D^i ξ_j
//! ```
//!
//! and the ε-components ε^α_L = η^α_L − Σ_j y^{α+j}_L ξ_j measure the change
//! of jet values at a fixed base point. Prolongation is driven by the
//! η-recursion with ε derived from it; the identity ε^{α+i} = D^i ε^α is then
//! verified as an independent cross-check, so a transcription error in either
//! formula shows up as a failing report rather than silently propagating.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::expr::{Expr, Signature, Var};
use crate::jet::{total_derivative, total_derivative_multi, MultiIndex, MultiPair};
use crate::report::{CheckEntry, CheckReport};
use crate::Config;

#[derive(Debug, Error)]
pub enum LbError {
    #[error("expected {expected} components for {what}, got {got}")]
    ComponentCount {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("component mentions a variable outside the signature: {0}")]
    OutOfSignature(String),
    #[error("prolonged order {order} too low: {msg}")]
    OrderTooLow { order: usize, msg: String },
}

/// An LB field on J^∞(ℝⁿ, ℝᵐ), stored by its principal components.
#[derive(Debug, Clone)]
pub struct LBField {
    sig: Signature,
    xi: Vec<Expr>,
    eta0: Vec<Expr>,
    /// Max jet order occurring in the principal components (recomputed, not
    /// declared).
    principal_order: usize,
}

impl LBField {
    pub fn new(sig: Signature, xi: Vec<Expr>, eta0: Vec<Expr>) -> Result<LBField, LbError> {
        if xi.len() != sig.n {
            return Err(LbError::ComponentCount {
                what: "xi",
                expected: sig.n,
                got: xi.len(),
            });
        }
        if eta0.len() != sig.m {
            return Err(LbError::ComponentCount {
                what: "eta0",
                expected: sig.m,
                got: eta0.len(),
            });
        }
        let mut order = 0;
        for e in xi.iter().chain(eta0.iter()) {
            for v in e.free_vars() {
                match &v {
                    Var::Base(i) if *i >= 1 && *i <= sig.n => {}
                    Var::Jet { comp, idx }
                        if *comp >= 1 && *comp <= sig.m && idx.len() == sig.n =>
                    {
                        order = order.max(idx.order());
                    }
                    _ => return Err(LbError::OutOfSignature(v.to_string())),
                }
            }
        }
        Ok(LBField {
            sig,
            xi,
            eta0,
            principal_order: order,
        })
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn xi(&self) -> &[Expr] {
        &self.xi
    }

    /// ξ_i, 1-based.
    pub fn xi_i(&self, i: usize) -> &Expr {
        &self.xi[i - 1]
    }

    pub fn eta0(&self) -> &[Expr] {
        &self.eta0
    }

    /// η⁰_L, 1-based.
    pub fn eta0_l(&self, l: usize) -> &Expr {
        &self.eta0[l - 1]
    }

    pub fn principal_order(&self) -> usize {
        self.principal_order
    }

    /// ε⁰_L = η⁰_L − Σ_i y^i_L ξ_i.
    pub fn epsilon0(&self) -> Vec<Expr> {
        (1..=self.sig.m)
            .map(|l| {
                let mut e = self.eta0[l - 1].clone();
                for i in 1..=self.sig.n {
                    e = e - Expr::var(Var::jet(l, MultiIndex::unit(self.sig.n, i))) * &self.xi[i - 1];
                }
                e
            })
            .collect()
    }

    /// Apply the field to an expression through its ε-form
    /// X = Σ ξ_i D^i + Σ D^α(ε⁰_L) ∂/∂y^α_L; total because the jet support of
    /// `e` is finite.
    pub fn apply(&self, e: &Expr) -> Expr {
        let eps0 = self.epsilon0();
        let mut out = Expr::zero();
        for i in 1..=self.sig.n {
            out = out + &self.xi[i - 1] * total_derivative(e, i);
        }
        for (comp, idx) in e.jet_vars() {
            let de = e.diff(&Var::jet(comp, idx.clone()));
            if de.is_zero_node() {
                continue;
            }
            out = out + total_derivative_multi(&eps0[comp - 1], &idx) * de;
        }
        out
    }

    /// All components (η^α_L, ε^α_L) for |α| ≤ k.
    pub fn prolong(&self, k: usize) -> ProlongedField {
        let n = self.sig.n;
        let mut comps: BTreeMap<MultiPair, Components> = BTreeMap::new();
        for l in 1..=self.sig.m {
            let eta = self.eta0[l - 1].clone();
            let eps = epsilon_of(self, l, &MultiIndex::zero(n), &eta);
            comps.insert(
                MultiPair::new(l, MultiIndex::zero(n)),
                Components { eta, eps },
            );
        }
        for order in 1..=k {
            for idx in crate::jet::multiindices(n, order) {
                // derive along the first nonzero direction; path
                // independence is a verified invariant
                let i = idx.first_nonzero().expect("positive order");
                let below = idx.sub_unit(i).expect("positive entry");
                for l in 1..=self.sig.m {
                    let prev = comps
                        .get(&MultiPair::new(l, below.clone()))
                        .expect("lower order present")
                        .eta
                        .clone();
                    let mut eta = total_derivative(&prev, i);
                    for j in 1..=n {
                        eta = eta
                            - Expr::var(Var::jet(l, below.add_unit(j)))
                                * total_derivative(&self.xi[j - 1], i);
                    }
                    let eps = epsilon_of(self, l, &idx, &eta);
                    comps.insert(MultiPair::new(l, idx.clone()), Components { eta, eps });
                }
            }
        }
        ProlongedField {
            field: self.clone(),
            order: k,
            comps,
        }
    }
}

fn epsilon_of(f: &LBField, l: usize, idx: &MultiIndex, eta: &Expr) -> Expr {
    let mut eps = eta.clone();
    for j in 1..=f.sig.n {
        eps = eps - Expr::var(Var::jet(l, idx.add_unit(j))) * &f.xi[j - 1];
    }
    eps
}

/// One prolonged slot.
#[derive(Debug, Clone)]
pub struct Components {
    pub eta: Expr,
    pub eps: Expr,
}

/// An LB field prolonged to all multipairs of order ≤ k.
#[derive(Debug, Clone)]
pub struct ProlongedField {
    field: LBField,
    order: usize,
    comps: BTreeMap<MultiPair, Components>,
}

impl ProlongedField {
    pub fn field(&self) -> &LBField {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn components(&self) -> impl Iterator<Item = (&MultiPair, &Components)> {
        self.comps.iter()
    }

    pub fn get(&self, p: &MultiPair) -> Option<&Components> {
        self.comps.get(p)
    }

    pub fn eta(&self, p: &MultiPair) -> &Expr {
        &self.comps.get(p).expect("multipair within order").eta
    }

    pub fn eps(&self, p: &MultiPair) -> &Expr {
        &self.comps.get(p).expect("multipair within order").eps
    }

    /// Replace one ε entry, for defect-injection tests.
    pub fn with_eps_perturbed(mut self, p: &MultiPair, delta: Expr) -> Self {
        if let Some(c) = self.comps.get_mut(p) {
            c.eps = c.eps.clone() + delta;
        }
        self
    }

    /// Apply the field through its prolonged η-components:
    /// X(e) = Σ ξ_i ∂e/∂x_i + Σ η^α_L ∂e/∂y^α_L. Errors when `e` mentions a
    /// jet beyond the prolonged order.
    pub fn apply(&self, e: &Expr) -> Result<Expr, LbError> {
        let mut out = Expr::zero();
        for i in 1..=self.field.sig.n {
            out = out + &self.field.xi[i - 1] * e.diff(&Var::Base(i));
        }
        for (comp, idx) in e.jet_vars() {
            let de = e.diff(&Var::jet(comp, idx.clone()));
            if de.is_zero_node() {
                continue;
            }
            let p = MultiPair::new(comp, idx);
            let c = self.comps.get(&p).ok_or(LbError::OrderTooLow {
                order: self.order,
                msg: format!("expression mentions {p}"),
            })?;
            out = out + &c.eta * de;
        }
        Ok(out)
    }

    /// Verify ε^{α+i}_L = D^i ε^α_L for all |α| < k, exhibiting ε as the
    /// fixed-point change of jet values.
    pub fn verify_lb_identity(&self, cfg: &Config) -> CheckReport {
        let mut report = CheckReport::new();
        for (p, c) in &self.comps {
            if p.order() + 1 > self.order {
                continue;
            }
            for i in 1..=self.field.sig.n {
                let up = MultiPair::new(p.comp, p.idx.add_unit(i));
                let lhs = &self.comps.get(&up).expect("within order").eps;
                let diff = lhs.clone() - total_derivative(&c.eps, i);
                report.push(CheckEntry::zero_residual(
                    format!("eps_identity L={} a={} i={}", p.comp, p.idx, i),
                    &diff,
                    cfg,
                ));
            }
        }
        report
    }
}

/// Defect of [D^i, X] = Σ_j (D^i ξ_j) D^j applied to every coordinate
/// function of order < prolonged order. All entries are provably zero for a
/// genuine LB field.
pub fn commutator_defect(p: &ProlongedField, i: usize) -> Result<Vec<(Var, Expr)>, LbError> {
    let sig = p.field().signature();
    let mut coords: Vec<Var> = (1..=sig.n).map(Var::Base).collect();
    for (mp, _) in p.components() {
        if mp.order() + 1 <= p.order() {
            coords.push(Var::jet(mp.comp, mp.idx.clone()));
        }
    }
    let mut out = Vec::new();
    for g in coords {
        let ge = Expr::var(g.clone());
        let lhs = total_derivative(&p.apply(&ge)?, i) - p.apply(&total_derivative(&ge, i))?;
        let mut rhs = Expr::zero();
        for j in 1..=sig.n {
            rhs = rhs + total_derivative(p.field().xi_i(j), i) * total_derivative(&ge, j);
        }
        out.push((g, lhs - rhs));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config::default()
    }

    fn field(n: usize, m: usize, xi: &[&str], eta0: &[&str]) -> LBField {
        let sig = Signature::new(n, m);
        let xi = xi.iter().map(|s| Expr::parse(s, &sig).unwrap()).collect();
        let eta0 = eta0.iter().map(|s| Expr::parse(s, &sig).unwrap()).collect();
        LBField::new(sig, xi, eta0).unwrap()
    }

    /// Translation field ξ=1, η⁰=0 on J^∞(ℝ, ℝ).
    fn translation() -> LBField {
        field(1, 1, &["1"], &["0"])
    }

    /// The symmetric-pair field: ξ=0, η⁰₁ = η⁰₂ = (y²₁ − y²₂)/2.
    pub(crate) fn symmetric_pair() -> LBField {
        field(
            1,
            2,
            &["0"],
            &["(u1[2] - u2[2])/2", "(u1[2] - u2[2])/2"],
        )
    }

    #[test]
    fn translation_prolongs_to_minus_y2() {
        let p = translation().prolong(1);
        assert!(p.eta(&MultiPair::scalar(1, 1)).is_zero_node());
        assert_eq!(*p.eps(&MultiPair::scalar(1, 1)), -Expr::jet1(1, 2));
        // ε⁰ = −y¹
        assert_eq!(*p.eps(&MultiPair::scalar(1, 0)), -Expr::jet1(1, 1));
    }

    #[test]
    fn pure_eta_field_prolongs_by_total_derivatives() {
        // ξ=0, η⁰=y²: η^k = ε^k = y^{k+2}
        let f = field(1, 1, &["0"], &["u1[2]"]);
        let p = f.prolong(3);
        for k in 0..=3 {
            let mp = MultiPair::scalar(1, k);
            assert_eq!(*p.eta(&mp), Expr::jet1(1, k + 2));
            assert_eq!(*p.eps(&mp), Expr::jet1(1, k + 2));
        }
    }

    #[test]
    fn symmetric_pair_eps_components() {
        let p = symmetric_pair().prolong(3);
        for k in 0..=3 {
            for l in 1..=2 {
                let expected =
                    (Expr::jet1(1, k + 2) - Expr::jet1(2, k + 2)) * Expr::ratio(1, 2);
                assert_eq!(*p.eps(&MultiPair::scalar(l, k)), expected);
            }
        }
    }

    #[test]
    fn epsilon0_examples() {
        assert_eq!(translation().epsilon0()[0], -Expr::jet1(1, 1));
        let f = field(1, 1, &["0"], &["u1[1]"]);
        assert_eq!(f.epsilon0()[0], Expr::jet1(1, 1));
        // ξ = y¹₁, η⁰₁ = y¹₂ over m=2: ε⁰₁ = y¹₂ − y¹₁·y¹₁
        let f = field(1, 2, &["u1[1]"], &["u2[1]", "0"]);
        let e = f.epsilon0();
        assert_eq!(e[0], Expr::jet1(2, 1) - Expr::jet1(1, 1).powi(2));
        assert_eq!(e[1], -Expr::jet1(2, 1) * Expr::jet1(1, 1));
    }

    #[test]
    fn lb_identity_holds_by_construction() {
        let p = symmetric_pair().prolong(3);
        assert!(p.verify_lb_identity(&cfg()).all_pass());
        let p = field(1, 1, &["u1[1]"], &["u1[0]*u1[1]"]).prolong(3);
        assert!(p.verify_lb_identity(&cfg()).all_pass());
    }

    #[test]
    fn lb_identity_catches_injected_defect() {
        let p = translation()
            .prolong(2)
            .with_eps_perturbed(&MultiPair::scalar(1, 1), Expr::one());
        let report = p.verify_lb_identity(&cfg());
        assert!(!report.all_pass());
        let failing: Vec<_> = report.failures().map(|e| e.name.clone()).collect();
        assert!(failing.iter().any(|n| n.contains("a=0 i=1")));
        assert!(failing.iter().any(|n| n.contains("a=1 i=1")));
    }

    #[test]
    fn prolongation_is_path_independent() {
        // n=2: reach α=(1,1) via D¹ then D² and via D² then D¹
        let sig = Signature::new(2, 1);
        let y = |a: Vec<usize>| Expr::jet(1, MultiIndex::from_vec(a));
        let xi = vec![y(vec![1, 0]).clone(), Expr::zero()];
        let eta0 = vec![y(vec![0, 1]) * y(vec![1, 0])];
        let f = LBField::new(sig, xi, eta0).unwrap();
        let p = f.prolong(2);

        let eta10 = p.eta(&MultiPair::new(1, MultiIndex::from_vec(vec![1, 0])));
        let eta01 = p.eta(&MultiPair::new(1, MultiIndex::from_vec(vec![0, 1])));
        // via D² of η^{(1,0)}
        let mut via2 = total_derivative(eta10, 2);
        via2 = via2
            - Expr::jet(1, MultiIndex::from_vec(vec![1, 1])) * total_derivative(f.xi_i(1), 2)
            - Expr::jet(1, MultiIndex::from_vec(vec![0, 2])) * total_derivative(f.xi_i(2), 2);
        // via D¹ of η^{(0,1)}
        let mut via1 = total_derivative(eta01, 1);
        via1 = via1
            - Expr::jet(1, MultiIndex::from_vec(vec![2, 0])) * total_derivative(f.xi_i(1), 1)
            - Expr::jet(1, MultiIndex::from_vec(vec![1, 1])) * total_derivative(f.xi_i(2), 1);
        assert!((via2.clone() - via1).is_zero(&cfg()).is_zero());
        let stored = p.eta(&MultiPair::new(1, MultiIndex::from_vec(vec![1, 1])));
        assert!((stored.clone() - via2).is_zero(&cfg()).is_zero());
    }

    #[test]
    fn eps_equals_eps0_derivative_when_xi_vanishes() {
        let f = field(1, 1, &["0"], &["u1[1]^2"]);
        let p = f.prolong(3);
        let eps0 = f.epsilon0().remove(0);
        for k in 0..=3 {
            let direct = total_derivative_multi(&eps0, &MultiIndex::scalar(k));
            let stored = p.eps(&MultiPair::scalar(1, k));
            assert!((stored.clone() - direct).is_zero_node());
        }
    }

    #[test]
    fn commutator_defect_vanishes() {
        let c = cfg();
        for f in [
            translation(),
            field(1, 1, &["0"], &["u1[1]"]),
            field(1, 2, &["u1[1]"], &["u2[0]*u1[1]", "u1[0]"]),
        ] {
            let p = f.prolong(3);
            for (g, defect) in commutator_defect(&p, 1).unwrap() {
                assert!(
                    defect.is_zero(&c).is_zero(),
                    "defect at {g} not zero: {defect}"
                );
            }
        }
    }

    #[test]
    fn eps_form_and_eta_form_application_agree() {
        let c = cfg();
        let f = field(1, 2, &["u1[1]"], &["u2[1]^2", "u1[0]"]);
        let p = f.prolong(3);
        let sig = f.signature();
        let test = Expr::parse("x1*u1[1] + u2[2]^2", &sig).unwrap();
        let via_eps = f.apply(&test);
        let via_eta = p.apply(&test).unwrap();
        assert!((via_eps - via_eta).is_zero(&c).is_zero());
    }

    #[test]
    fn out_of_signature_component_rejected() {
        let sig = Signature::new(1, 1);
        let bad = Expr::jet1(2, 0); // component 2 in an m=1 signature
        assert!(LBField::new(sig, vec![Expr::zero()], vec![bad]).is_err());
    }
}
