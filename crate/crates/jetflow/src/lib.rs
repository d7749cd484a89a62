//! jetflow: symbolic-numeric toolkit for Lie-Bäcklund vector fields on jet
//! bundles J(ℝⁿ, ℝᵐ).
//!
//! The crate represents fields by their principal components (ξ_i, η⁰_L),
//! prolongs them exactly, tests algebraic exponentiability conditions, builds
//! closed-form flows for the families where that is possible, and verifies
//! flow laws both symbolically and numerically.
//!
//! Module map:
//!
//! - [`expr`] — symbolic expression engine (parse, print, diff, normalize,
//!   tri-state zero test, evaluation).
//! - [`jet`] — multiindices, multipairs and total derivatives.
//! - [`lb`] — Lie-Bäcklund fields, prolongation, ε-components.
//! - [`truncation`] — polynomial splits in high-order jets, the truncated
//!   fields X^(k) and the monomial-coefficient fields Y^(k)_ℓ, Lie brackets.
//! - [`classifier`] — dependency graphs on ε⁰, cycle condition, ξ-recovery,
//!   candidate admissibility, bounded footprint probes.
//! - [`expo2`] — first-order exponentiability checker on J^∞(ℝ, ℝ²):
//!   structure matrices, contraction conditions, nilpotency, 2×2
//!   factorization and module closure.
//! - [`flow`] — closed-form and numeric flows, lifting, group-law and
//!   chain-identity verification, germ flows.
//! - [`foliation`] — exponentiable fields built from line foliations of the
//!   (y¹₁, y¹₂) plane.
//! - [`specfile`], [`report`], [`cli`] — the field-spec file format, JSON
//!   report documents, and the command-line surface.
//!
//! Start with the runnable examples (`cargo run --example prolong`, …); each
//! one exercises a major capability end to end.

pub mod classifier;
pub mod cli;
pub mod expo2;
pub mod expr;
pub mod flow;
pub mod foliation;
pub mod jet;
pub mod lb;
pub mod report;
pub mod specfile;
pub mod truncation;

/// Tunables shared across checks. Every sampling decision in the crate is a
/// pure function of this configuration, which makes reports reproducible.
#[derive(Debug, Clone)]
pub struct Config {
    /// RNG seed for all sampling.
    pub seed: u64,
    /// Sample count for numeric residual checks.
    pub samples: usize,
    /// Tolerance for numeric residuals.
    pub tol: f64,
    /// Valuations tried per tri-state zero test.
    pub zero_samples: usize,
    /// Resampling bound when a valuation hits a singularity.
    pub zero_retries: usize,
    /// Node budget for symbolic growth in iterated probes.
    pub node_budget: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 42,
            samples: 100,
            tol: 1e-9,
            zero_samples: 20,
            zero_retries: 8,
            node_budget: 20_000,
        }
    }
}

impl Config {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
