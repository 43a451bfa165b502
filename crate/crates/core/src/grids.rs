//! Gauss–Gegenbauer quadrature, the mapped real-line grid, and the MMGF
//! interpolation operator.
//!
//! The mapped weight is `ω_j = μ (1-t_j²)^{-(λ+1)} ρ_j`, which is what the
//! change-of-variables chain actually yields (using 1+x² = 1/(1-t²)); it
//! makes `∫ u v dx = Σ u(x_j) v(x_j) ω_j` exact whenever `u·v ∈ V_{2N+1}^λ`
//! and is validated against basis orthonormality in the acceptance suite.

use crate::error::{Error, Result};
use crate::linalg::eig_sym_tridiag;
use crate::mmgf::{mmgf_eval_all, norm_gamma, BasisSpec, SpectralField};
use crate::specfun::ln_gamma;

/// Collocation nodes and weights on the real line for a basis family.
#[derive(Debug, Clone)]
pub struct MappedGrid {
    basis: BasisSpec,
    t_nodes: Vec<f64>,
    x_nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl MappedGrid {
    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn t_nodes(&self) -> &[f64] {
        &self.t_nodes
    }

    pub fn x_nodes(&self) -> &[f64] {
        &self.x_nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.x_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_nodes.is_empty()
    }
}

/// Gauss–Gegenbauer nodes and weights: N+1 points exact for polynomial
/// degree 2N+1 against the weight (1-t²)^{λ-1/2}.
///
/// Golub–Welsch: nodes are eigenvalues of the Jacobi matrix of the
/// normalized three-term recurrence, weights come from first eigenvector
/// components scaled by the total mass √π Γ(λ+1/2)/Γ(λ+1).
pub fn gauss_gegenbauer(n: usize, lambda: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(lambda > -0.5) {
        return Err(Error::domain(format!(
            "gauss_gegenbauer requires lambda > -1/2, got {lambda}"
        )));
    }
    let count = n + 1;
    let diag = vec![0.0; count];
    let mut off = Vec::with_capacity(count.saturating_sub(1));
    for j in 1..count {
        let jf = j as f64;
        let b = if j == 1 {
            1.0 / (2.0 * (1.0 + lambda))
        } else {
            jf * (jf + 2.0 * lambda - 1.0) / (4.0 * (jf + lambda) * (jf + lambda - 1.0))
        };
        off.push(b.sqrt());
    }
    let (mut nodes, firsts) = eig_sym_tridiag(&diag, &off)?;
    let mass = (std::f64::consts::PI.sqrt().ln() + ln_gamma(lambda + 0.5)? - ln_gamma(lambda + 1.0)?)
        .exp();
    let mut weights: Vec<f64> = firsts.iter().map(|z| mass * z * z).collect();
    // The spectrum is symmetric; enforce t_j = -t_{N-j}, ω_j = ω_{N-j}
    // exactly rather than to rounding.
    for j in 0..count / 2 {
        let k = count - 1 - j;
        let t = 0.5 * (nodes[k] - nodes[j]);
        nodes[j] = -t;
        nodes[k] = t;
        let w = 0.5 * (weights[j] + weights[k]);
        weights[j] = w;
        weights[k] = w;
    }
    if count % 2 == 1 {
        nodes[count / 2] = 0.0;
    }
    Ok((nodes, weights))
}

/// The mapped grid: x_j = μ t_j/√(1-t_j²), ω_j = μ (1-t_j²)^{-(λ+1)} ρ_j.
pub fn mapped_grid(spec: &BasisSpec) -> Result<MappedGrid> {
    let (t_nodes, rho) = gauss_gegenbauer(spec.n_max(), spec.lambda())?;
    let mu = spec.scale();
    let lambda = spec.lambda();
    let x_nodes: Vec<f64> = t_nodes
        .iter()
        .map(|&t| mu * t / (1.0 - t * t).sqrt())
        .collect();
    let weights: Vec<f64> = t_nodes
        .iter()
        .zip(rho.iter())
        .map(|(&t, &r)| mu * (1.0 - t * t).powf(-(lambda + 1.0)) * r)
        .collect();
    Ok(MappedGrid {
        basis: *spec,
        t_nodes,
        x_nodes,
        weights,
    })
}

/// Interpolation matrix A with `A[n][j] = R_n(x_j) ω_j / γ_n`, so that
/// coefficients are `A · samples`.
pub(crate) fn interpolation_matrix(grid: &MappedGrid) -> Result<crate::linalg::DenseMatrix> {
    let spec = grid.basis();
    let n = spec.n_max() + 1;
    let mut a = crate::linalg::DenseMatrix::zeros(n, n);
    let gammas: Vec<f64> = (0..n)
        .map(|k| norm_gamma(k, spec.lambda()))
        .collect::<Result<_>>()?;
    for (j, (&x, &w)) in grid.x_nodes().iter().zip(grid.weights().iter()).enumerate() {
        let vals = mmgf_eval_all(spec, x);
        for k in 0..n {
            a[(k, j)] = vals[k] * w / gammas[k];
        }
    }
    Ok(a)
}

/// Interpolation operator: samples at the grid nodes to a coefficient
/// field, `ũ_n = (1/γ_n) Σ_j u(x_j) R_n(x_j) ω_j`.
pub fn interpolate(spec: &BasisSpec, samples: &[f64]) -> Result<SpectralField> {
    if samples.len() != spec.n_max() + 1 {
        return Err(Error::domain(format!(
            "interpolate: {} samples for n_max {}",
            samples.len(),
            spec.n_max()
        )));
    }
    let grid = mapped_grid(spec)?;
    let a = interpolation_matrix(&grid)?;
    SpectralField::new(*spec, a.mul_vec(samples))
}

/// Discrete inner product Σ u_j v_j ω_j over the grid.
pub fn integrate(grid: &MappedGrid, values_u: &[f64], values_v: &[f64]) -> f64 {
    assert_eq!(values_u.len(), grid.len());
    assert_eq!(values_v.len(), grid.len());
    let mut acc = 0.0;
    for ((u, v), w) in values_u
        .iter()
        .zip(values_v.iter())
        .zip(grid.weights().iter())
    {
        acc += u * v * w;
    }
    acc
}
