//! Declarative description of a model problem.

use crate::error::{Error, Result};
use crate::mmgf::BasisSpec;
use serde::{Deserialize, Serialize};

/// One operator term ρ_j (-Δ)^{α_j/2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub alpha: f64,
    pub rho: f64,
}

/// Source terms the experiments use; closed-form transforms are attached
/// where the frequency-space pipeline needs them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceSpec {
    /// exp(-x²/2)(1+x)
    GaussSkew,
    /// (1+x²)^{-2}
    Alg2,
    /// (1+x²)^{-1.2}
    Alg12,
    /// (1+x²)^{-1.8}
    Alg18,
    /// exp(-|x|) in 1D, exp(-‖x‖) in d dimensions
    ExpRadial,
    /// Zero source (degenerate checks)
    Zero,
}

impl SourceSpec {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SourceSpec::GaussSkew => (-0.5 * x * x).exp() * (1.0 + x),
            SourceSpec::Alg2 => (1.0 + x * x).powf(-2.0),
            SourceSpec::Alg12 => (1.0 + x * x).powf(-1.2),
            SourceSpec::Alg18 => (1.0 + x * x).powf(-1.8),
            SourceSpec::ExpRadial => (-x.abs()).exp(),
            SourceSpec::Zero => 0.0,
        }
    }

    /// Value at a point of R^d (radial sources use the Euclidean norm,
    /// the 1D-specific shapes apply to the first coordinate only and are
    /// rejected for d > 1 at config validation).
    pub fn eval_nd(&self, x: &[f64]) -> f64 {
        match self {
            SourceSpec::ExpRadial => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                (-r).exp()
            }
            SourceSpec::Zero => 0.0,
            _ => self.eval(x[0]),
        }
    }

    /// Closed-form d-dimensional Fourier transform, when known.
    /// `exp(-‖x‖)` has `ℱf(ξ) = c_d (1+|ξ|²)^{-(d+1)/2}` with c_d the
    /// convention constant (c_1 = √(2/π), c_2 = 1).
    pub fn transform_nd(&self, d: usize, xi: &[f64]) -> Option<f64> {
        match self {
            SourceSpec::ExpRadial => {
                let q: f64 = 1.0 + xi.iter().map(|v| v * v).sum::<f64>();
                let c = match d {
                    1 => (2.0 / std::f64::consts::PI).sqrt(),
                    2 => 1.0,
                    _ => return None,
                };
                Some(c * q.powf(-((d as f64 + 1.0) / 2.0)))
            }
            SourceSpec::Zero => Some(0.0),
            _ => None,
        }
    }

    pub fn is_radial(&self) -> bool {
        matches!(self, SourceSpec::ExpRadial | SourceSpec::Zero)
    }
}

/// Reaction coefficient r(x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReactionSpec {
    Constant(f64),
    /// 1 + exp(-x²)
    OnePlusGaussian,
}

impl ReactionSpec {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ReactionSpec::Constant(c) => *c,
            ReactionSpec::OnePlusGaussian => 1.0 + (-x * x).exp(),
        }
    }
}

/// A model problem: Σ_j ρ_j (-Δ)^{α_j/2} u + r(x) u = f on R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub dimension: usize,
    pub terms: Vec<Term>,
    pub reaction: Option<ReactionSpec>,
    pub source: SourceSpec,
    pub basis: BasisSpec,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        if !self.terms.iter().any(|t| t.rho > 0.0) {
            return Err(Error::Config(
                "at least one term needs a positive coefficient".into(),
            ));
        }
        for t in &self.terms {
            if !(0.0..=2.0).contains(&t.alpha) {
                return Err(Error::Config(format!(
                    "term order alpha must lie in [0, 2], got {}",
                    t.alpha
                )));
            }
            if t.rho < 0.0 {
                return Err(Error::Config(format!(
                    "term coefficient must be nonnegative, got {}",
                    t.rho
                )));
            }
        }
        if self.dimension > 1 && !self.source.is_radial() {
            return Err(Error::Config(format!(
                "source {:?} is one-dimensional; use a radial source for d > 1",
                self.source
            )));
        }
        Ok(())
    }

    /// The single-term model `(-Δ)^{α/2} u + ρ u = f`.
    pub fn single_term(alpha: f64, rho: f64, source: SourceSpec, basis: BasisSpec) -> Self {
        ProblemSpec {
            dimension: 1,
            terms: vec![Term { alpha, rho: 1.0 }],
            reaction: Some(ReactionSpec::Constant(rho)),
            source,
            basis,
        }
    }
}
