//! Frequency-space collocation in d dimensions.
//!
//! Pipeline: tensor-interpolate f on the mapped physical grid; evaluate
//! the interpolant's Fourier transform at the tensor frequency grid from
//! products of 1D basis transforms; divide pointwise by `|ξ|^α + ρ`;
//! tensor-interpolate the û samples in the frequency basis; evaluate u in
//! physical space from products of inverse transforms.
//!
//! The frequency grid is the same mapped Gegenbauer construction with its
//! own scale (default 1/μ). For λ = 0 the basis transforms genuinely
//! diverge at ξ = 0, so zero-containing grids (odd node counts, i.e. even
//! N) are rejected for that family; λ > 0 uses the finite analytic limits.

use crate::error::{Error, Result};
use crate::fracops::fourier_profiles_unscaled;
use crate::grids::{interpolation_matrix, mapped_grid};
use crate::mmgf::BasisSpec;
use crate::mp;
use crate::solvers::problem::{ProblemSpec, ReactionSpec};
use num_complex::Complex64;

/// Dense row-major tensor with per-axis lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T> {
    dims: Vec<usize>,
    data: Vec<T>,
}

impl<T: Copy + Default> Tensor<T> {
    pub fn zeros(dims: &[usize]) -> Self {
        let len = dims.iter().product();
        Tensor {
            dims: dims.to_vec(),
            data: vec![T::default(); len],
        }
    }

    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> T) -> Self {
        let mut t = Self::zeros(dims);
        let mut idx = vec![0usize; dims.len()];
        for flat in 0..t.data.len() {
            t.unflatten(flat, &mut idx);
            t.data[flat] = f(&idx);
        }
        t
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, idx: &[usize]) -> T {
        self.data[self.flatten(idx)]
    }

    fn flatten(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut flat = 0;
        for (i, &d) in idx.iter().zip(self.dims.iter()) {
            debug_assert!(*i < d);
            flat = flat * d + i;
        }
        flat
    }

    fn unflatten(&self, mut flat: usize, idx: &mut [usize]) {
        for ax in (0..self.dims.len()).rev() {
            idx[ax] = flat % self.dims[ax];
            flat /= self.dims[ax];
        }
    }
}

impl Tensor<Complex64> {
    /// out[..., i, ...] = Σ_j m[i*cols+j] · self[..., j, ...] along `axis`.
    fn contract_axis(&self, m: &[Complex64], rows: usize, axis: usize) -> Tensor<Complex64> {
        let cols = self.dims[axis];
        debug_assert_eq!(m.len(), rows * cols);
        let inner: usize = self.dims[axis + 1..].iter().product();
        let outer: usize = self.dims[..axis].iter().product();
        let mut dims = self.dims.clone();
        dims[axis] = rows;
        let mut out = Tensor::zeros(&dims);
        for o in 0..outer {
            for i in 0..rows {
                let row = &m[i * cols..(i + 1) * cols];
                for inn in 0..inner {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, &mij) in row.iter().enumerate() {
                        acc += mij * self.data[(o * cols + j) * inner + inn];
                    }
                    out.data[(o * rows + i) * inner + inn] = acc;
                }
            }
        }
        out
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn to_real(&self) -> Tensor<f64> {
        Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|z| z.re).collect(),
        }
    }
}

/// Everything the frequency pipeline produces.
#[derive(Debug, Clone)]
pub struct NdSolution {
    pub x_nodes: Vec<f64>,
    pub xi_nodes: Vec<f64>,
    /// ℱ[I_N f] at the tensor frequency nodes.
    pub f_hat: Tensor<Complex64>,
    /// û = f̂ / (|ξ|^α + ρ) at the tensor frequency nodes.
    pub u_hat: Tensor<Complex64>,
    /// Coefficients of û in the frequency basis.
    pub u_coeffs: Tensor<Complex64>,
    /// u at the tensor physical nodes (real part; imaginary residue in
    /// `max_imag`).
    pub u_phys: Tensor<f64>,
    pub max_imag: f64,
}

/// Transform matrix `T[q][n] = ℱ[R_{n,μ}](ξ_q)` for a symmetric node set.
fn transform_matrix(basis: &BasisSpec, nodes: &[f64]) -> Result<Vec<Complex64>> {
    let mu = basis.scale();
    let lambda = basis.lambda();
    let n_count = basis.n_max() + 1;
    let front = mu.sqrt();
    // Profiles at the distinct positive scaled arguments.
    let pos: Vec<f64> = nodes
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| mu * v)
        .collect();
    let table = fourier_profiles_unscaled(lambda, basis.n_max(), &pos);
    // Zero-frequency column when present.
    let zero_col: Option<Vec<Complex64>> = if nodes.iter().any(|&v| v == 0.0) {
        if lambda <= 0.0 {
            return Err(Error::Excluded(
                "frequency grid contains ξ=0 and the λ ≤ 0 transforms diverge there; \
                 use an even node count (odd N)"
                    .into(),
            ));
        }
        let mut col = vec![Complex64::new(0.0, 0.0); n_count];
        for (n, c) in col.iter_mut().enumerate() {
            if n % 2 == 0 {
                *c = Complex64::new(front * mp::fourier_profile_zero_limit_even(lambda, n), 0.0);
            }
        }
        Some(col)
    } else {
        None
    };
    let mut t = vec![Complex64::new(0.0, 0.0); nodes.len() * n_count];
    let mut pos_iter = 0usize;
    for (q, &xi) in nodes.iter().enumerate() {
        if xi == 0.0 {
            let col = zero_col.as_ref().expect("zero column prepared");
            t[q * n_count..(q + 1) * n_count].copy_from_slice(col);
            continue;
        }
        // Mirror negative frequencies through parity.
        let (row_idx, sign) = if xi > 0.0 {
            let r = pos_iter;
            pos_iter += 1;
            (r, 1.0)
        } else {
            // nodes are symmetric: -ξ appears among the positive ones
            let r = pos
                .iter()
                .position(|&p| (p - mu * (-xi)).abs() <= 1e-14 * p.abs())
                .expect("symmetric node set");
            (r, -1.0)
        };
        for n in 0..n_count {
            let p = table[row_idx][n];
            t[q * n_count + n] = if n % 2 == 0 {
                Complex64::new(front * p, 0.0)
            } else {
                Complex64::new(0.0, -sign * front * p)
            };
        }
    }
    Ok(t)
}

/// Frequency-space collocation solve of `(-Δ)^{α/2} u + ρ u = f` on R^d.
///
/// `xi_scale` overrides the frequency-grid scale (default 1/μ).
pub fn nd_colloc_solve(problem: &ProblemSpec, xi_scale: Option<f64>) -> Result<NdSolution> {
    problem.validate()?;
    let d = problem.dimension;
    let fractional: Vec<_> = problem.terms.iter().filter(|t| t.alpha > 0.0).collect();
    if fractional.len() != 1 {
        return Err(Error::Config(
            "nd_colloc_solve needs exactly one fractional term".into(),
        ));
    }
    let alpha = fractional[0].alpha;
    let rho_frac = fractional[0].rho;
    let mut rho: f64 = problem
        .terms
        .iter()
        .filter(|t| t.alpha == 0.0)
        .map(|t| t.rho)
        .sum();
    match problem.reaction {
        Some(ReactionSpec::Constant(c)) => rho += c,
        None => {}
        Some(ReactionSpec::OnePlusGaussian) => {
            return Err(Error::Config(
                "nd_colloc_solve needs a constant reaction coefficient".into(),
            ))
        }
    }
    if !(rho > 0.0) {
        return Err(Error::Config(format!(
            "nd_colloc_solve needs rho > 0, got {rho}"
        )));
    }
    let basis = problem.basis;
    let n_count = basis.n_max() + 1;
    let grid_x = mapped_grid(&basis)?;
    let xi_basis = BasisSpec::new(
        basis.lambda(),
        xi_scale.unwrap_or(1.0 / basis.scale()),
        basis.n_max(),
    )?;
    let grid_xi = mapped_grid(&xi_basis)?;

    // (1) interpolate f on the tensor physical grid.
    let dims: Vec<usize> = vec![n_count; d];
    let x_nodes = grid_x.x_nodes().to_vec();
    let f_samples = Tensor::from_fn(&dims, |idx| {
        let coords: Vec<f64> = idx.iter().map(|&i| x_nodes[i]).collect();
        Complex64::new(problem.source.eval_nd(&coords), 0.0)
    });
    let a_x = interpolation_matrix(&grid_x)?;
    let a_x_c: Vec<Complex64> = a_x.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut f_coeffs = f_samples;
    for ax in 0..d {
        f_coeffs = f_coeffs.contract_axis(&a_x_c, n_count, ax);
    }

    // (2) transform the interpolant to the tensor frequency nodes.
    let t_fwd = transform_matrix(&basis, grid_xi.x_nodes())?;
    let mut f_hat = f_coeffs;
    for ax in 0..d {
        f_hat = f_hat.contract_axis(&t_fwd, n_count, ax);
    }

    // (3) pointwise division by ρ_frac |ξ|^α + ρ.
    let xi_nodes = grid_xi.x_nodes().to_vec();
    let mut u_hat = f_hat.clone();
    {
        let mut idx = vec![0usize; d];
        for flat in 0..u_hat.data.len() {
            u_hat.unflatten(flat, &mut idx);
            let r2: f64 = idx.iter().map(|&i| xi_nodes[i] * xi_nodes[i]).sum();
            let denom = rho_frac * r2.sqrt().powf(alpha) + rho;
            u_hat.data[flat] /= denom;
        }
    }

    // (4) interpolate û in the frequency basis, then evaluate u in
    // physical space through inverse transforms of that basis.
    let a_xi = interpolation_matrix(&grid_xi)?;
    let a_xi_c: Vec<Complex64> = a_xi.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut u_coeffs = u_hat.clone();
    for ax in 0..d {
        u_coeffs = u_coeffs.contract_axis(&a_xi_c, n_count, ax);
    }
    // ℱ⁻¹[R_{n,ν}](x) = conj(ℱ[R_{n,ν}](x)).
    let t_inv: Vec<Complex64> = transform_matrix(&xi_basis, &x_nodes)?
        .iter()
        .map(|z| z.conj())
        .collect();
    let mut u_phys_c = u_coeffs.clone();
    for ax in 0..d {
        u_phys_c = u_phys_c.contract_axis(&t_inv, n_count, ax);
    }
    let max_imag = u_phys_c.max_imag();
    Ok(NdSolution {
        x_nodes,
        xi_nodes,
        f_hat,
        u_hat,
        u_coeffs,
        u_phys: u_phys_c.to_real(),
        max_imag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::problem::SourceSpec;

    fn radial_problem(lambda: f64, mu: f64, n_max: usize, d: usize) -> ProblemSpec {
        let basis = BasisSpec::new(lambda, mu, n_max).unwrap();
        let mut p = ProblemSpec::single_term(1.0, 1.0, SourceSpec::ExpRadial, basis);
        p.dimension = d;
        p
    }

    #[test]
    fn zero_source_gives_zero_tensors() {
        let mut p = radial_problem(0.5, 1.0, 8, 2);
        p.source = SourceSpec::Zero;
        let sol = nd_colloc_solve(&p, None).unwrap();
        assert!(sol.f_hat.data().iter().all(|z| z.norm() == 0.0));
        assert!(sol.u_phys.data().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn radial_source_solution_is_swap_symmetric() {
        let p = radial_problem(0.5, 1.0, 12, 2);
        let sol = nd_colloc_solve(&p, None).unwrap();
        let n = 13;
        for i in 0..n {
            for j in 0..n {
                let a = sol.u_phys.get(&[i, j]);
                let b = sol.u_phys.get(&[j, i]);
                assert!((a - b).abs() < 1e-10, "swap symmetry at ({i},{j})");
            }
        }
        assert!(sol.max_imag < 1e-10, "imaginary residue {}", sol.max_imag);
    }

    #[test]
    fn fhat_matches_closed_form_coarse() {
        // Small check; the acceptance suite runs the N=48 version.
        let p = radial_problem(0.5, 1.5, 16, 2);
        let sol = nd_colloc_solve(&p, None).unwrap();
        let mut worst = 0.0f64;
        for (qi, &xi) in sol.xi_nodes.iter().enumerate() {
            for (qj, &eta) in sol.xi_nodes.iter().enumerate() {
                let want = SourceSpec::ExpRadial.transform_nd(2, &[xi, eta]).unwrap();
                let got = sol.f_hat.get(&[qi, qj]);
                worst = worst.max((got.re - want).abs().max(got.im.abs()));
            }
        }
        assert!(worst < 2e-2, "coarse f̂ deviation {worst}");
    }

    #[test]
    fn lambda_zero_with_zero_node_is_rejected() {
        // N even -> odd node count -> ξ=0 on the grid -> excluded for λ=0.
        let p = radial_problem(0.0, 1.0, 8, 2);
        assert!(matches!(nd_colloc_solve(&p, None), Err(Error::Excluded(_))));
        // Odd N avoids the zero node and works.
        let p = radial_problem(0.0, 1.0, 9, 2);
        assert!(nd_colloc_solve(&p, None).is_ok());
    }
}
