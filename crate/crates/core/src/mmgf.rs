//! The modified mapped Gegenbauer basis on the real line.
//!
//! `R_n^λ(x) = (1+x²)^{-(λ+1)/2} C_n^λ(x/√(1+x²))`, with the scaled family
//! `R_{n,μ}^λ(x) = μ^{-1/2} R_n^λ(x/μ)`. The λ = 0 family uses the
//! Chebyshev-limit normalization (T_n in place of C_n^0), with norms π and
//! π/2. Basis evaluation always goes through the three-term recurrence;
//! the explicit `(1+x²)^{-γ}` sums (available from [`block_expansion`])
//! cancel catastrophically at large degree and exist for the closed-form
//! operator formulas, not for evaluation.

use crate::error::{Error, Result};
use crate::specfun::{gegenbauer_all, ln_gamma, pochhammer};
use serde::{Deserialize, Serialize};

/// Parameters identifying an MMGF family: Gegenbauer index λ > -1/2,
/// scaling factor μ > 0, truncation N (so N+1 basis functions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    lambda: f64,
    scale: f64,
    n_max: usize,
}

impl BasisSpec {
    pub fn new(lambda: f64, scale: f64, n_max: usize) -> Result<Self> {
        if !(lambda > -0.5) {
            return Err(Error::domain(format!(
                "BasisSpec: lambda must exceed -1/2, got {lambda}"
            )));
        }
        if !(scale > 0.0) {
            return Err(Error::domain(format!(
                "BasisSpec: scale must be positive, got {scale}"
            )));
        }
        Ok(BasisSpec {
            lambda,
            scale,
            n_max,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Same family, different truncation.
    pub fn with_n_max(&self, n_max: usize) -> Self {
        BasisSpec { n_max, ..*self }
    }
}

/// Coefficient vector in an MMGF basis; the primary solution representation.
///
/// Serializes as `{"lambda": .., "scale": .., "coeffs": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub struct SpectralField {
    basis: BasisSpec,
    coeffs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    lambda: f64,
    scale: f64,
    coeffs: Vec<f64>,
}

impl From<SpectralField> for FieldRepr {
    fn from(f: SpectralField) -> Self {
        FieldRepr {
            lambda: f.basis.lambda,
            scale: f.basis.scale,
            coeffs: f.coeffs,
        }
    }
}

impl TryFrom<FieldRepr> for SpectralField {
    type Error = Error;
    fn try_from(r: FieldRepr) -> Result<Self> {
        if r.coeffs.is_empty() {
            return Err(Error::domain("SpectralField: empty coefficient vector"));
        }
        let basis = BasisSpec::new(r.lambda, r.scale, r.coeffs.len() - 1)?;
        Ok(SpectralField {
            basis,
            coeffs: r.coeffs,
        })
    }
}

impl SpectralField {
    /// Coefficient length must be `basis.n_max() + 1`.
    pub fn new(basis: BasisSpec, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != basis.n_max() + 1 {
            return Err(Error::domain(format!(
                "SpectralField: {} coefficients for n_max {}",
                coeffs.len(),
                basis.n_max()
            )));
        }
        Ok(SpectralField { basis, coeffs })
    }

    pub fn zero(basis: BasisSpec) -> Self {
        let n = basis.n_max() + 1;
        SpectralField {
            basis,
            coeffs: vec![0.0; n],
        }
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }
}

/// The algebraic map t ↦ x = t/√(1-t²) from (-1,1) onto the real line.
pub fn map_t_to_x(t: f64) -> Result<f64> {
    if !(t.abs() < 1.0) {
        return Err(Error::domain(format!("map_t_to_x needs |t| < 1, got {t}")));
    }
    Ok(t / (1.0 - t * t).sqrt())
}

/// The inverse map x ↦ t = x/√(1+x²) ∈ (-1,1).
pub fn map_x_to_t(x: f64) -> f64 {
    x / (1.0 + x * x).sqrt()
}

/// Values R_{0,μ}^λ(x) ... R_{N,μ}^λ(x) of the scaled basis.
pub fn mmgf_eval_all(spec: &BasisSpec, x: f64) -> Vec<f64> {
    let mut vals = mmgf_eval_all_unscaled(spec.lambda, spec.n_max, x / spec.scale);
    let factor = spec.scale.sqrt().recip();
    for v in &mut vals {
        *v *= factor;
    }
    vals
}

/// Unscaled basis values by the three-term recurrence.
pub(crate) fn mmgf_eval_all_unscaled(lambda: f64, n_max: usize, x: f64) -> Vec<f64> {
    let t = map_x_to_t(x);
    let s = (1.0 + x * x).powf(-(lambda + 1.0) / 2.0);
    let mut vals = gegenbauer_all(n_max, lambda, t).expect("validated lambda");
    for v in &mut vals {
        *v *= s;
    }
    vals
}

/// Unscaled basis values with first and second derivatives, by
/// differentiating the recurrence twice. Used by the integer-order
/// (α = 2) operator path, where `(-Δ)R_n = -R_n''`.
pub(crate) fn mmgf_eval_derivs_unscaled(
    lambda: f64,
    n_max: usize,
    x: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let one_px2 = 1.0 + x * x;
    let t = map_x_to_t(x);
    let dt = one_px2.powf(-1.5);
    let ddt = -3.0 * x * one_px2.powf(-2.5);

    let n = n_max + 1;
    let mut r = vec![0.0; n];
    let mut r1 = vec![0.0; n];
    let mut r2 = vec![0.0; n];

    // Seeds: R_0 = (1+x²)^{-p} with p=(λ+1)/2, R_1 = q0·x(1+x²)^{-q} with
    // q=(λ+2)/2 and q0 = 2λ (or 1 in the Chebyshev limit).
    let p = (lambda + 1.0) / 2.0;
    r[0] = one_px2.powf(-p);
    r1[0] = -2.0 * p * x * one_px2.powf(-p - 1.0);
    r2[0] = -2.0 * p * one_px2.powf(-p - 1.0) + 4.0 * p * (p + 1.0) * x * x * one_px2.powf(-p - 2.0);
    if n_max == 0 {
        return (r, r1, r2);
    }
    let q = (lambda + 2.0) / 2.0;
    let q0 = if lambda == 0.0 { 1.0 } else { 2.0 * lambda };
    r[1] = q0 * x * one_px2.powf(-q);
    r1[1] = q0 * (one_px2.powf(-q) - 2.0 * q * x * x * one_px2.powf(-q - 1.0));
    r2[1] = q0
        * (-6.0 * q * x * one_px2.powf(-q - 1.0) + 4.0 * q * (q + 1.0) * x * x * x * one_px2.powf(-q - 2.0));

    for k in 2..=n_max {
        let kf = k as f64;
        let (c1, c2) = if lambda == 0.0 {
            (2.0, 1.0)
        } else {
            (2.0 * (kf + lambda - 1.0) / kf, (kf + 2.0 * lambda - 2.0) / kf)
        };
        r[k] = c1 * t * r[k - 1] - c2 * r[k - 2];
        r1[k] = c1 * (dt * r[k - 1] + t * r1[k - 1]) - c2 * r1[k - 2];
        r2[k] = c1 * (ddt * r[k - 1] + 2.0 * dt * r1[k - 1] + t * r2[k - 1]) - c2 * r2[k - 2];
    }
    (r, r1, r2)
}

/// L² norm constant γ_n^λ = π 2^{1-2λ} Γ(n+2λ) / (n! (n+λ) Γ(λ)²).
///
/// The scaled basis has the same norms (the μ^{-1/2} prefactor cancels the
/// dx scaling). λ = 0 returns the Chebyshev-limit norms π and π/2.
pub fn norm_gamma(n: usize, lambda: f64) -> Result<f64> {
    if !(lambda > -0.5) {
        return Err(Error::domain(format!(
            "norm_gamma requires lambda > -1/2, got {lambda}"
        )));
    }
    if lambda == 0.0 {
        return Ok(if n == 0 {
            std::f64::consts::PI
        } else {
            std::f64::consts::FRAC_PI_2
        });
    }
    let pi = std::f64::consts::PI;
    if n == 0 {
        // Pole-free rewrite: π 2^{1-2λ} Γ(2λ+1) / (2 Γ(λ+1)²).
        let ln = (1.0 - 2.0 * lambda) * std::f64::consts::LN_2 + ln_gamma(2.0 * lambda + 1.0)?
            - 2.0 * ln_gamma(lambda + 1.0)?;
        return Ok(pi * ln.exp() / 2.0);
    }
    // Γ(λ)² = Γ(λ+1)²/λ² keeps log-gamma arguments positive for λ < 0.
    let nf = n as f64;
    let ln = (1.0 - 2.0 * lambda) * std::f64::consts::LN_2 + ln_gamma(nf + 2.0 * lambda)?
        - ln_gamma(nf + 1.0)?
        - 2.0 * ln_gamma(lambda + 1.0)?;
    Ok(pi * lambda * lambda * ln.exp() / (nf + lambda))
}

/// Σ coeffs[n] R_{n,μ}^λ(x).
pub fn eval_field(field: &SpectralField, x: f64) -> f64 {
    let vals = mmgf_eval_all(field.basis(), x);
    field
        .coeffs()
        .iter()
        .zip(vals.iter())
        .map(|(c, r)| c * r)
        .sum()
}

/// Parity of a basis index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Expansion of R_n^λ over the rational building blocks:
/// even n: R_{2m} = pref Σ_k c_k (1+x²)^{-γ_k}, γ_k = k+(λ+1)/2;
/// odd n:  R_{2m+1} = pref Σ_k c_k · x (1+x²)^{-γ_k}, γ_k = k+λ/2+1.
#[derive(Debug, Clone)]
pub(crate) struct BlockExpansion {
    pub parity: Parity,
    pub pref: f64,
    /// c_0 .. c_m (alternating sign, binomially large for big m).
    pub coeffs: Vec<f64>,
    /// γ_0; successive blocks step by one.
    pub gamma0: f64,
}

/// Block-coefficient expansion of R_n^λ (λ = 0 uses the Chebyshev-limit
/// coefficients). The coefficients grow binomially with n; callers are
/// responsible for the precision implications.
pub(crate) fn block_expansion(n: usize, lambda: f64) -> BlockExpansion {
    let parity = Parity::of(n);
    let m = n / 2; // half-degree for both parities
    let mf = m as f64;
    let (pref, second_param, gamma0) = match parity {
        Parity::Even => {
            let pref = if lambda == 0.0 {
                1.0
            } else {
                pochhammer(lambda, m) * pochhammer(lambda + 0.5, m)
                    / (pochhammer(1.0, m) * pochhammer(0.5, m))
            };
            (pref, mf + lambda, (lambda + 1.0) / 2.0)
        }
        Parity::Odd => {
            let pref = if lambda == 0.0 {
                1.0
            } else {
                2.0 * lambda * pochhammer(lambda + 1.0, m) * pochhammer(lambda + 0.5, m)
                    / (pochhammer(1.0, m) * pochhammer(1.5, m))
            };
            (pref, mf + lambda + 1.0, lambda / 2.0 + 1.0)
        }
    };
    let mut coeffs = Vec::with_capacity(m + 1);
    let mut c = 1.0;
    coeffs.push(c);
    for k in 0..m {
        let kf = k as f64;
        c *= (-mf + kf) * (second_param + kf) / ((lambda + 0.5 + kf) * (kf + 1.0));
        coeffs.push(c);
    }
    BlockExpansion {
        parity,
        pref,
        coeffs,
        gamma0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn map_examples() {
        assert_eq!(map_t_to_x(0.0).unwrap(), 0.0);
        let x = map_t_to_x(1.0 / 3.0f64.sqrt()).unwrap();
        assert!((x - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);
        assert!(map_t_to_x(1.0).is_err());
        assert!(map_t_to_x(-1.2).is_err());
        assert_eq!(map_x_to_t(0.0), 0.0);
        assert!((map_x_to_t(1.0) - 1.0 / 2.0f64.sqrt()).abs() < 1e-16);
        assert!(map_x_to_t(1e300) < 1.0);
        // Round trip.
        let t = 0.9;
        assert!((map_x_to_t(map_t_to_x(t).unwrap()) - t).abs() < 1e-15);
    }

    #[test]
    fn seeds_at_origin() {
        let spec = BasisSpec::new(0.5, 1.0, 3).unwrap();
        let v = mmgf_eval_all(&spec, 0.0);
        assert_eq!(v[0], 1.0);
        assert_eq!(v[1], 0.0);
    }

    #[test]
    fn farfield_limit() {
        // (1+x²)^{(λ+1)/2} R_n^λ(x) → (2λ)_n / n! as x → ∞; λ=1, n=3 gives 4.
        let x = 1e6;
        let vals = mmgf_eval_all_unscaled(1.0, 3, x);
        let lifted = (1.0 + x * x).powf(1.0) * vals[3];
        assert!((lifted - 4.0).abs() < 1e-4, "got {lifted}");
    }

    #[test]
    fn scaled_relation() {
        let spec = BasisSpec::new(0.5, 5.0, 6).unwrap();
        let x = 2.3;
        let scaled = mmgf_eval_all(&spec, x);
        let unscaled = mmgf_eval_all_unscaled(0.5, 6, x / 5.0);
        for (a, b) in scaled.iter().zip(unscaled.iter()) {
            assert!((a - b / 5.0f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn norm_gamma_examples() {
        assert!((norm_gamma(0, 0.5).unwrap() - 2.0).abs() < 1e-14);
        assert!((norm_gamma(1, 0.5).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        assert!((norm_gamma(2, 0.5).unwrap() - 0.4).abs() < 1e-14);
        assert_eq!(norm_gamma(0, 0.0).unwrap(), std::f64::consts::PI);
        assert_eq!(norm_gamma(5, 0.0).unwrap(), std::f64::consts::FRAC_PI_2);
        // λ in (-1/2, 0) stays finite and positive.
        let g = norm_gamma(0, -0.25).unwrap();
        assert!(g.is_finite() && g > 0.0);
    }

    #[test]
    fn eval_field_matches_naive() {
        let basis = BasisSpec::new(0.5, 2.0, 8).unwrap();
        let coeffs: Vec<f64> = (0..9).map(|i| ((i * 7 + 3) % 5) as f64 - 2.0).collect();
        let field = SpectralField::new(basis, coeffs.clone()).unwrap();
        for &x in &[0.0, 0.7, -3.3, 14.0] {
            let naive: f64 = (0..9)
                .map(|n| coeffs[n] * mmgf_eval_all(&basis, x)[n])
                .sum();
            assert!((eval_field(&field, x) - naive).abs() <= 1e-14 * naive.abs().max(1.0));
        }
        // One-hot and zero cases.
        let mut one_hot = SpectralField::zero(basis);
        one_hot.coeffs_mut()[0] = 1.0;
        assert_eq!(eval_field(&one_hot, 1.1), mmgf_eval_all(&basis, 1.1)[0]);
        assert_eq!(eval_field(&SpectralField::zero(basis), 2.2), 0.0);
    }

    #[test]
    fn block_expansion_matches_recurrence() {
        // Hypergeometric-sum representations agree with recurrence values.
        for &lam in &[0.0, 0.5, 1.0, 1.7] {
            for n in 0..=15usize {
                let be = block_expansion(n, lam);
                for &x in &[0.0f64, 0.4, -1.3, 3.7] {
                    let one_px2 = 1.0 + x * x;
                    let mut sum = 0.0;
                    for (k, c) in be.coeffs.iter().enumerate() {
                        let g = be.gamma0 + k as f64;
                        sum += c * one_px2.powf(-g);
                    }
                    sum *= be.pref;
                    if be.parity == Parity::Odd {
                        sum *= x;
                    }
                    let rec = mmgf_eval_all_unscaled(lam, n, x)[n];
                    assert!(
                        (sum - rec).abs() <= 1e-9 * rec.abs().max(1.0),
                        "block sum mismatch n={n} lam={lam} x={x}: {sum} vs {rec}"
                    );
                }
            }
        }
    }

    #[test]
    fn derivative_recurrence_against_finite_differences() {
        let h = 1e-5;
        for &lam in &[0.0, 0.5, 1.5] {
            for &x in &[0.0, 0.6, -2.4] {
                let (r, r1, r2) = mmgf_eval_derivs_unscaled(lam, 10, x);
                let rp = mmgf_eval_all_unscaled(lam, 10, x + h);
                let rm = mmgf_eval_all_unscaled(lam, 10, x - h);
                for n in 0..=10 {
                    let fd1 = (rp[n] - rm[n]) / (2.0 * h);
                    let fd2 = (rp[n] - 2.0 * r[n] + rm[n]) / (h * h);
                    assert!(
                        (r1[n] - fd1).abs() < 1e-6 * fd1.abs().max(1.0),
                        "R' n={n} lam={lam} x={x}: {} vs {}",
                        r1[n],
                        fd1
                    );
                    assert!(
                        (r2[n] - fd2).abs() < 2e-4 * fd2.abs().max(1.0),
                        "R'' n={n} lam={lam} x={x}: {} vs {}",
                        r2[n],
                        fd2
                    );
                }
            }
        }
    }

    #[test]
    fn growth_stays_bounded() {
        // Coarse forward-stability smoke test.
        for &lam in &[0.0, 0.5, 1.5] {
            let n_max = 40;
            let bound = (2.0 * lam + n_max as f64).powi(2);
            for i in 0..=100 {
                let x = -50.0 + i as f64;
                let vals = mmgf_eval_all_unscaled(lam, n_max, x);
                let cap = vals[0].abs().max(vals.get(1).map_or(0.0, |v| v.abs())).max(1.0) * bound;
                for v in &vals {
                    assert!(v.abs() <= cap, "runaway value {v} at x={x}, lam={lam}");
                }
            }
        }
    }

    #[test]
    fn serde_round_trip_and_shape() {
        let basis = BasisSpec::new(0.5, 3.0, 2).unwrap();
        let field = SpectralField::new(basis, vec![1.0, -0.5, 0.25]).unwrap();
        let json = serde_json::to_string(&field).unwrap();
        assert_eq!(
            json,
            r#"{"lambda":0.5,"scale":3.0,"coeffs":[1.0,-0.5,0.25]}"#
        );
        let back: SpectralField = serde_json::from_str(&json).unwrap();
        assert_eq!(back, field);
        // Invalid lambda must be rejected on the way in.
        let bad = r#"{"lambda":-0.7,"scale":1.0,"coeffs":[1.0]}"#;
        assert!(serde_json::from_str::<SpectralField>(bad).is_err());
    }

    #[test]
    fn spec_construction_rejects_bad_parameters() {
        assert!(BasisSpec::new(-0.5, 1.0, 4).is_err());
        assert!(BasisSpec::new(0.5, 0.0, 4).is_err());
        assert!(SpectralField::new(BasisSpec::new(0.5, 1.0, 4).unwrap(), vec![0.0; 3]).is_err());
    }

    proptest! {
        /// R_{2n} even, R_{2n+1} odd.
        #[test]
        fn parity_of_basis(lam in prop_oneof![Just(0.0), 0.1f64..2.0], x in -20.0f64..20.0, n_max in 1usize..22) {
            let plus = mmgf_eval_all_unscaled(lam, n_max, x);
            let minus = mmgf_eval_all_unscaled(lam, n_max, -x);
            for n in 0..=n_max {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                prop_assert!((plus[n] - sign * minus[n]).abs() <= 1e-12 * plus[n].abs().max(1e-3));
            }
        }

        /// Map pair inverts on (-1, 1).
        #[test]
        fn map_round_trip(t in -0.999f64..0.999) {
            let x = map_t_to_x(t).unwrap();
            prop_assert!((map_x_to_t(x) - t).abs() < 1e-13);
        }
    }
}
