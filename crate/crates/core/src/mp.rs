//! Extended-precision (MPFR) evaluation of the closed-form operator sums.
//!
//! The Bessel/hypergeometric expansions of the basis transforms and
//! fractional Laplacians have alternating coefficients that grow
//! binomially with the degree: in double precision roughly 0.6 decimal
//! digits per unit of half-degree are lost to cancellation, which is fatal
//! well below the truncations the solvers need. This module evaluates the
//! same formulas in software floats with a precision budget tied to the
//! degree, then rounds the final values to f64.
//!
//! Discipline: f64 arguments are treated as exact inputs; every derived
//! quantity (parameter sums, reciprocals, harmonic numbers) is computed in
//! working precision. An f64-rounded intermediate anywhere caps term
//! accuracy at ~1e-16, which the deep cancellation amplifies into the
//! final digits.
//!
//! Everything here is crate-internal; `fracops` routes to it above its
//! double-precision degree threshold.

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::mmgf::Parity;

/// Working precision for a sum whose half-degree is `m`.
pub(crate) fn sum_prec(m: usize) -> u32 {
    96 + (4 * m) as u32
}

fn f(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// v + k in working precision (k exact).
fn addk(v: &Float, k: usize) -> Float {
    Float::with_val(v.prec(), v + k as u32)
}

fn recip_of(prec: u32, k: f64) -> Float {
    f(prec, k).recip()
}

// ---------------------------------------------------------------------------
// Scaled Bessel ladder: g_ν(ξ) = ξ^ν K_ν(ξ)
// ---------------------------------------------------------------------------

/// g_ν for ν = nu0 + j, j = 0..count, by the upward ladder
/// `g_{ν+1} = ξ² g_{ν-1} + 2ν g_ν` from two series seeds.
///
/// The ladder has positive coefficients, so seed accuracy is inherited
/// without amplification; the cancellation lives in the seeds, whose
/// working precision is inflated by the e^{2ξ} budget of the I-series
/// difference.
pub(crate) fn scaled_k_ladder(nu0: &Float, count: usize, xi: f64, prec: u32) -> Vec<Float> {
    debug_assert!(xi > 0.0);
    let seed_prec = prec + (2.0 * xi / std::f64::consts::LN_2) as u32 + 64;
    let nu0_hi = Float::with_val(seed_prec, nu0);
    let g0 = scaled_k_seed(&nu0_hi, xi, seed_prec);
    let g1 = scaled_k_seed(&addk(&nu0_hi, 1), xi, seed_prec);
    let mut out = Vec::with_capacity(count);
    let xi2 = f(prec, xi).square();
    let mut prev = Float::with_val(prec, &g0);
    let mut curr = Float::with_val(prec, &g1);
    out.push(prev.clone());
    if count > 1 {
        out.push(curr.clone());
    }
    for j in 1..count.saturating_sub(1) {
        let two_nu = Float::with_val(prec, 2u32 * &addk(&Float::with_val(prec, nu0), j));
        let next = Float::with_val(prec, &xi2 * &prev) + Float::with_val(prec, &curr * &two_nu);
        prev = curr;
        curr = next;
        out.push(curr.clone());
    }
    out
}

/// One seed g_ν(ξ) = ξ^ν K_ν(ξ) at the precision of `nu`.
fn scaled_k_seed(nu: &Float, xi: f64, prec: u32) -> Float {
    let nu64 = nu.to_f64();
    if nu64 == nu64.floor() && nu.clone() - f(prec, nu64) == 0.0 {
        return scaled_k_integer(nu64 as i64, xi, prec);
    }
    if (2.0 * nu64).fract() == 0.0 && (nu.clone() * 2u32 - f(prec, 2.0 * nu64)) == 0.0 {
        return scaled_k_half_integer(nu64, xi, prec);
    }
    // Non-integer: π/(2 sin νπ) [2^ν S_-(ν) - 2^{-ν} ξ^{2ν} S_+(ν)],
    // with S_±(ν) = Σ_m (ξ²/4)^m / (m! Γ(m+1±ν)).
    let q = f(prec, xi).square() / 4u32;
    let neg_nu = -nu.clone();
    let s_minus = bessel_i_aux(&neg_nu, &q, prec);
    let s_plus = bessel_i_aux(nu, &q, prec);
    let two_pow = f(prec, 2.0).pow(nu.clone());
    let xi_2nu = f(prec, xi).pow(Float::with_val(prec, nu * 2u32));
    let bracket = Float::with_val(prec, &two_pow * &s_minus)
        - Float::with_val(prec, &s_plus * &xi_2nu) / two_pow;
    let ang = pi(prec) * nu;
    let factor = pi(prec) / (2u32 * ang.sin());
    factor * bracket
}

/// Σ_m q^m / (m! Γ(m+1+ν)).
fn bessel_i_aux(nu: &Float, q: &Float, prec: u32) -> Float {
    let mut term = Float::with_val(prec, nu + 1u32);
    term.gamma_mut();
    term.recip_mut();
    let mut sum = term.clone();
    for m in 1..200_000u64 {
        let m_mp = f(prec, m as f64);
        term *= q;
        term /= Float::with_val(prec, &m_mp * &Float::with_val(prec, nu + &m_mp));
        sum += &term;
        if term.is_zero()
            || term.clone().abs() < Float::with_val(prec, sum.clone().abs() >> (prec + 8))
        {
            break;
        }
    }
    sum
}

fn scaled_k_half_integer(nu: f64, xi: f64, prec: u32) -> Float {
    // g_{1/2} = √(π/2) e^{-ξ}; climb with the g-ladder.
    let half_pi = pi(prec) / 2u32;
    let e = (-f(prec, xi)).exp();
    let base = half_pi.sqrt() * e;
    let xi_mp = f(prec, xi);
    let xi2 = xi_mp.clone().square();
    let mut g_lo = base.clone() / &xi_mp; // g_{-1/2}
    let mut g_hi = base;
    let mut nu_hi = 0.5;
    if nu == -0.5 {
        return g_lo;
    }
    while nu_hi < nu {
        let next = Float::with_val(prec, &xi2 * &g_lo) + f(prec, 2.0 * nu_hi) * &g_hi;
        g_lo = g_hi;
        g_hi = next;
        nu_hi += 1.0;
    }
    g_hi
}

/// Integer order seeds via the logarithmic series, then the ladder.
fn scaled_k_integer(n: i64, xi: f64, prec: u32) -> Float {
    let n = n.unsigned_abs() as usize;
    let x = f(prec, xi);
    let q = x.clone().square() / 4u32; // ξ²/4
    let half_ln = (x.clone() / 2u32).ln(); // ln(ξ/2)
    let euler = Float::with_val(prec, Constant::Euler);

    // I_0 and I_1.
    let mut i0 = f(prec, 1.0);
    let mut i1 = f(prec, 0.5) * &x;
    {
        let mut t0 = f(prec, 1.0);
        let mut t1 = i1.clone();
        for m in 1..200_000u64 {
            let mf = m as f64;
            t0 *= &q;
            t0 /= f(prec, mf * mf); // exact integer product
            i0 += &t0;
            t1 *= &q;
            t1 /= f(prec, mf * (mf + 1.0));
            i1 += &t1;
            if t0.clone().abs() < Float::with_val(prec, i0.clone().abs() >> (prec + 8)) {
                break;
            }
        }
    }
    // K_0 = -(ln(ξ/2)+γ) I_0 + Σ_{m≥1} (ξ²/4)^m H_m/(m!)².
    let mut k0 = -(half_ln.clone() + &euler) * &i0;
    {
        let mut term = f(prec, 1.0);
        let mut h = f(prec, 0.0);
        for m in 1..200_000u64 {
            let mf = m as f64;
            term *= &q;
            term /= f(prec, mf * mf);
            h += recip_of(prec, mf);
            let piece = Float::with_val(prec, &term * &h);
            k0 += &piece;
            if piece.abs() < Float::with_val(prec, k0.clone().abs() >> (prec + 8)) {
                break;
            }
        }
    }
    // K_1 = 1/ξ + ln(ξ/2) I_1 - (ξ/4) Σ_k [ψ(k+1)+ψ(k+2)] (ξ²/4)^k/(k!(k+1)!).
    let mut k1 = x.clone().recip() + Float::with_val(prec, &half_ln * &i1);
    {
        let mut term = f(prec, 1.0);
        let mut psi_a = -euler.clone(); // ψ(1)
        let mut psi_b = Float::with_val(prec, 1u32) - &euler; // ψ(2)
        let mut sum = Float::with_val(prec, &psi_a + &psi_b);
        for k in 1..200_000u64 {
            let kf = k as f64;
            term *= &q;
            term /= f(prec, kf * (kf + 1.0));
            psi_a += recip_of(prec, kf);
            psi_b += recip_of(prec, kf + 1.0);
            let piece = Float::with_val(prec, &term * Float::with_val(prec, &psi_a + &psi_b));
            sum += &piece;
            if piece.clone().abs() < Float::with_val(prec, sum.clone().abs() >> (prec + 8)) {
                break;
            }
        }
        k1 -= x.clone() / 4u32 * sum;
    }
    // Ladder on g: g_0 = K_0, g_1 = ξ K_1.
    let g0 = k0;
    let g1 = Float::with_val(prec, &x * &k1);
    if n == 0 {
        return g0;
    }
    let xi2 = x.clone().square();
    let mut prev = g0;
    let mut curr = g1;
    for j in 1..n {
        let next = Float::with_val(prec, &xi2 * &prev) + f(prec, 2.0 * j as f64) * &curr;
        prev = curr;
        curr = next;
    }
    curr
}

// ---------------------------------------------------------------------------
// Block coefficients in extended precision
// ---------------------------------------------------------------------------

struct MpBlocks {
    pref: Float,
    coeffs: Vec<Float>,
}

/// Extended-precision mirror of `mmgf::block_expansion`. γ_k values are
/// derived from `lambda` in working precision by the caller.
fn mp_block_expansion(n: usize, lambda: f64, prec: u32) -> MpBlocks {
    let parity = Parity::of(n);
    let m = n / 2;
    let lam = f(prec, lambda);
    let half = f(prec, 0.5);
    // second-parameter base: m+λ (even) or m+λ+1 (odd).
    let second = match parity {
        Parity::Even => Float::with_val(prec, &lam + m as u32),
        Parity::Odd => Float::with_val(prec, &lam + (m + 1) as u32),
    };
    let mut pref = f(prec, 1.0);
    if lambda != 0.0 {
        match parity {
            Parity::Even => {
                // (λ)_m (λ+1/2)_m / ((1)_m (1/2)_m)
                for i in 0..m {
                    pref *= Float::with_val(prec, &addk(&lam, i) * &addk(&(lam.clone() + &half), i));
                    pref /= Float::with_val(
                        prec,
                        &f(prec, (1 + i) as f64) * &addk(&half, i),
                    );
                }
            }
            Parity::Odd => {
                pref *= Float::with_val(prec, 2u32 * &lam);
                for i in 0..m {
                    pref *= Float::with_val(
                        prec,
                        &addk(&lam, i + 1) * &addk(&(lam.clone() + &half), i),
                    );
                    pref /= Float::with_val(
                        prec,
                        &f(prec, (1 + i) as f64) * &addk(&f(prec, 1.5), i),
                    );
                }
            }
        }
    }
    let mut coeffs = Vec::with_capacity(m + 1);
    let mut c = f(prec, 1.0);
    coeffs.push(c.clone());
    let lam_half = lam.clone() + &half;
    for k in 0..m {
        // c_{k+1} = c_k (k-m)(second+k) / ((λ+1/2+k)(k+1))
        c *= Float::with_val(prec, &f(prec, k as f64 - m as f64) * &addk(&second, k));
        c /= Float::with_val(prec, &addk(&lam_half, k) * &f(prec, (k + 1) as f64));
        coeffs.push(c.clone());
    }
    MpBlocks { pref, coeffs }
}

// ---------------------------------------------------------------------------
// Fourier profiles
// ---------------------------------------------------------------------------

/// Real transform profiles Φ_n(ξ) for all n ≤ n_max at each ξ > 0
/// (unscaled basis). Even n: ℱ[R_n](ξ) itself. Odd n: the profile P with
/// ℱ[R_n](ξ) = -i sign(ξ) P(|ξ|).
///
/// Output indexed `[q][n]`. Runs in parallel over the ξ nodes.
pub(crate) fn fourier_profile_table(lambda: f64, n_max: usize, xis: &[f64]) -> Vec<Vec<f64>> {
    let m_max = n_max / 2;
    let prec = sum_prec(m_max);
    let blocks: Vec<MpBlocks> = (0..=n_max)
        .map(|n| mp_block_expansion(n, lambda, prec))
        .collect();
    let lam = f(prec, lambda);
    // γ_0 for the two families and the Bessel orders ν_0 = γ_0 - 1/2.
    let gamma0_even = Float::with_val(prec, (lam.clone() + 1u32) / 2u32);
    let gamma0_odd = Float::with_val(prec, lam.clone() / 2u32 + 1u32);
    let d_even = bessel_factor_chain(&gamma0_even, m_max + 1, prec);
    let d_odd = bessel_factor_chain(&gamma0_odd, m_max + 1, prec);
    let nu0_even = Float::with_val(prec, &gamma0_even - &f(prec, 0.5));
    let nu0_odd = Float::with_val(prec, &gamma0_odd - &f(prec, 1.5));
    xis.par_iter()
        .map(|&xi| {
            debug_assert!(xi > 0.0, "profile table needs positive frequencies");
            let g_even = scaled_k_ladder(&nu0_even, m_max + 1, xi, prec);
            let g_odd = scaled_k_ladder(&nu0_odd, m_max + 1, xi, prec);
            let xi_mp = f(prec, xi);
            (0..=n_max)
                .map(|n| {
                    let b = &blocks[n];
                    let mut acc = f(prec, 0.0);
                    match Parity::of(n) {
                        Parity::Even => {
                            for (k, c) in b.coeffs.iter().enumerate() {
                                acc += Float::with_val(
                                    prec,
                                    c * &Float::with_val(prec, &d_even[k] * &g_even[k]),
                                );
                            }
                        }
                        Parity::Odd => {
                            for (k, c) in b.coeffs.iter().enumerate() {
                                acc += Float::with_val(
                                    prec,
                                    c * &Float::with_val(prec, &d_odd[k] * &g_odd[k]),
                                );
                            }
                            acc *= &xi_mp;
                        }
                    }
                    acc *= &b.pref;
                    acc.to_f64()
                })
                .collect()
        })
        .collect()
}

/// D_k = 2^{1-γ_k}/Γ(γ_k) with γ_k = γ_0 + k, via D_{k+1} = D_k/(2γ_k).
fn bessel_factor_chain(gamma0: &Float, count: usize, prec: u32) -> Vec<Float> {
    let mut d = gamma0.clone();
    d.gamma_mut();
    d.recip_mut();
    d *= f(prec, 2.0).pow(Float::with_val(prec, 1u32 - gamma0));
    let mut out = Vec::with_capacity(count);
    out.push(d.clone());
    for k in 0..count.saturating_sub(1) {
        d /= Float::with_val(prec, 2u32 * &addk(gamma0, k));
        out.push(d.clone());
    }
    out
}

/// ξ → 0 limits of the even-n profiles via z^ν K_ν(z) → 2^{ν-1} Γ(ν)
/// (finite only when λ > 0). Odd-n profiles vanish at ξ = 0 for λ > 0.
pub(crate) fn fourier_profile_zero_limit_even(lambda: f64, n: usize) -> f64 {
    debug_assert!(lambda > 0.0 && n % 2 == 0);
    let m = n / 2;
    let prec = sum_prec(m);
    let b = mp_block_expansion(n, lambda, prec);
    let lam = f(prec, lambda);
    let gamma0 = Float::with_val(prec, (lam.clone() + 1u32) / 2u32);
    let d = bessel_factor_chain(&gamma0, m + 1, prec);
    let nu0 = Float::with_val(prec, lam / 2u32);
    let mut acc = f(prec, 0.0);
    for (k, c) in b.coeffs.iter().enumerate() {
        let nu = addk(&nu0, k);
        let mut lim = nu.clone();
        lim.gamma_mut();
        lim *= f(prec, 2.0).pow(Float::with_val(prec, &nu - &f(prec, 1.0)));
        acc += Float::with_val(prec, c * &Float::with_val(prec, &d[k] * &lim));
    }
    acc *= &b.pref;
    acc.to_f64()
}

// ---------------------------------------------------------------------------
// Fractional Laplacian
// ---------------------------------------------------------------------------

/// (-Δ)^s R_n(x) for every n ≤ n_max at each point (unscaled basis),
/// indexed `[i][n]`. Runs in parallel over the points.
pub(crate) fn frac_lap_table(lambda: f64, s: f64, n_max: usize, xs: &[f64]) -> Vec<Vec<f64>> {
    let m_max = n_max / 2;
    let prec = sum_prec(m_max);
    let blocks: Vec<MpBlocks> = (0..=n_max)
        .map(|n| mp_block_expansion(n, lambda, prec))
        .collect();
    let lam = f(prec, lambda);
    let gamma0_even = Float::with_val(prec, (lam.clone() + 1u32) / 2u32);
    let gamma0_odd = Float::with_val(prec, lam.clone() / 2u32 + 1u32);
    xs.par_iter()
        .map(|&x| {
            let even = frac_block_values(s, &gamma0_even, 0.5, m_max + 1, x, prec);
            let odd = frac_block_values(s, &gamma0_odd, 1.5, m_max + 1, x, prec);
            let x_mp = f(prec, x);
            let odd_front = Float::with_val(prec, 2u32 * &f(prec, s)) + 1u32;
            (0..=n_max)
                .map(|n| {
                    let b = &blocks[n];
                    let mut acc = f(prec, 0.0);
                    match Parity::of(n) {
                        Parity::Even => {
                            for (k, c) in b.coeffs.iter().enumerate() {
                                acc += Float::with_val(prec, c * &even[k]);
                            }
                        }
                        Parity::Odd => {
                            for (k, c) in b.coeffs.iter().enumerate() {
                                acc += Float::with_val(prec, c * &odd[k]);
                            }
                            acc *= &odd_front;
                            acc *= &x_mp;
                        }
                    }
                    acc *= &b.pref;
                    acc.to_f64()
                })
                .collect()
        })
        .collect()
}

/// Single-point, single-degree variants (used above the f64 degree cap by
/// the public ops).
pub(crate) fn frac_lap_point(lambda: f64, s: f64, n: usize, x: f64) -> f64 {
    frac_lap_table(lambda, s, n, &[x])[0][n]
}

pub(crate) fn fourier_profile_point(lambda: f64, n: usize, xi: f64) -> f64 {
    fourier_profile_table(lambda, n, &[xi])[0][n]
}

/// Block values B_k = A_s^{γ_k} ₂F₁(s+γ_k, s+σ; σ; -x²) for k = 0..count,
/// where σ = 1/2 for the even family (γ_0 = (λ+1)/2) and σ = 3/2 for the
/// odd one (γ_0 = λ/2+1). The odd (2s+1)·x front factor is applied by the
/// caller.
fn frac_block_values(s: f64, gamma0: &Float, sigma: f64, count: usize, x: f64, prec: u32) -> Vec<Float> {
    let s_mp = f(prec, s);
    let one_px2 = Float::with_val(prec, f(prec, x).square() + 1u32);
    let w = Float::with_val(prec, f(prec, x).square() / &one_px2);
    let w64 = w.to_f64();
    // A_s^{γ_0} = 2^{2s} Γ(s+γ_0) Γ(s+1/2) / (√π Γ(γ_0)).
    let mut a = f(prec, 2.0).pow(Float::with_val(prec, 2u32 * &s_mp));
    let mut g1 = Float::with_val(prec, &s_mp + gamma0);
    g1.gamma_mut();
    let mut g2 = Float::with_val(prec, &s_mp + &f(prec, 0.5));
    g2.gamma_mut();
    let mut g3 = gamma0.clone();
    g3.gamma_mut();
    a *= Float::with_val(prec, &g1 * &g2);
    a /= Float::with_val(prec, pi(prec).sqrt() * &g3);

    let sigma_mp = f(prec, sigma);
    let b_param = Float::with_val(prec, &s_mp + &sigma_mp);
    let mut out = Vec::with_capacity(count);
    if w64 <= 0.75 {
        // Contiguous chain in the first parameter, seeded with two series
        // evaluations of the corollary form pulled back through Pfaff:
        // F_k = (1+x²)^{-(s+γ_k)} ₂F₁(-s, s+γ_k; σ; w).
        let neg_s = -s_mp.clone();
        let mut fs: Vec<Float> = Vec::with_capacity(count.max(2));
        for k in 0..2.min(count + 1) {
            let sg = Float::with_val(prec, &s_mp + &addk(gamma0, k));
            let g = mp_hyp2f1_series(&neg_s, &sg, &sigma_mp, &w, prec);
            let decay = one_px2.clone().pow(-sg);
            fs.push(g * decay);
        }
        let x2 = f(prec, x).square();
        for k in 1..count.saturating_sub(1) {
            // F_{k+1} = [((2a-σ) + (a-b)x²) F_k + (σ-a) F_{k-1}] / (a(1+x²))
            // with a = s+γ_k.
            let ak = Float::with_val(prec, &s_mp + &addk(gamma0, k));
            let bracket = Float::with_val(prec, 2u32 * &ak) - &sigma_mp
                + Float::with_val(prec, Float::with_val(prec, &ak - &b_param) * &x2);
            let num = Float::with_val(prec, &bracket * &fs[k])
                + Float::with_val(prec, &Float::with_val(prec, &sigma_mp - &ak) * &fs[k - 1]);
            let den = Float::with_val(prec, &ak * &one_px2);
            fs.push(num / den);
        }
        let mut a_k = a;
        for (k, fk) in fs.iter().take(count).enumerate() {
            out.push(Float::with_val(prec, &a_k * fk));
            // A_{k+1} = A_k (s+γ_k)/γ_k.
            a_k *= Float::with_val(prec, &s_mp + &addk(gamma0, k));
            a_k /= addk(gamma0, k);
        }
    } else {
        // Near-unit argument: per-k connection evaluation (the chain's
        // second solution dominates here, so it cannot be used forward).
        let mut a_k = a;
        for k in 0..count {
            let gk = addk(gamma0, k);
            let sg = Float::with_val(prec, &s_mp + &gk);
            let g = mp_hyp2f1_near_unit(&(-s_mp.clone()), &sg, sigma, &w, prec);
            let decay = one_px2.clone().pow(-sg.clone());
            out.push(Float::with_val(prec, &a_k * &g) * decay);
            a_k *= &sg;
            a_k /= &gk;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Extended-precision ₂F₁
// ---------------------------------------------------------------------------

/// Plain series; caller guarantees |z| bounded away from 1 (or a
/// polynomial case).
fn mp_hyp2f1_series(a: &Float, b: &Float, c: &Float, z: &Float, prec: u32) -> Float {
    let mut term = f(prec, 1.0);
    let mut sum = f(prec, 1.0);
    for k in 0..2_000_000u32 {
        let num = Float::with_val(prec, a + k) * Float::with_val(prec, b + k);
        let den = Float::with_val(prec, c + k) * f(prec, (k + 1) as f64);
        term *= num;
        term /= den;
        term *= z;
        sum += &term;
        if term.is_zero()
            || term.clone().abs() < Float::with_val(prec, sum.clone().abs() >> (prec + 8))
        {
            break;
        }
    }
    sum
}

/// ₂F₁(a,b;c;w) for w ∈ [0,1) with exact-f64 σ = c; stable as w → 1⁻.
fn mp_hyp2f1_near_unit(a: &Float, b: &Float, c: f64, w: &Float, prec: u32) -> Float {
    let w64 = w.to_f64();
    let a64 = a.to_f64();
    let b64 = b.to_f64();
    let nonpos_int = |v: f64| v <= 0.0 && v == v.floor();
    if w64 < 0.75 || nonpos_int(a64) || nonpos_int(b64) {
        return mp_hyp2f1_series(a, b, &f(prec, c), w, prec);
    }
    let u = Float::with_val(prec, 1u32 - w);
    let d = Float::with_val(prec, f(prec, c) - Float::with_val(prec, a + b));
    let d64 = d.to_f64();
    let m = d64.round();
    if (d64 - m).abs() < 1e-8 {
        if m >= 0.0 {
            mp_connection_log_pos(a, b, m as usize, &u, prec)
        } else {
            mp_connection_log_neg(a, b, (-m) as usize, &u, prec)
        }
    } else {
        mp_connection_generic(a, b, c, &d, &u, prec)
    }
}

fn mp_gamma(v: Float) -> Float {
    let mut g = v;
    g.gamma_mut();
    g
}

fn mp_digamma(v: Float) -> Float {
    let mut g = v;
    g.digamma_mut();
    g
}

fn mp_connection_generic(a: &Float, b: &Float, c: f64, d: &Float, u: &Float, prec: u32) -> Float {
    let c_mp = f(prec, c);
    let c1 = mp_gamma(c_mp.clone()) * mp_gamma(d.clone())
        / (mp_gamma(Float::with_val(prec, &c_mp - a)) * mp_gamma(Float::with_val(prec, &c_mp - b)));
    let c2 = mp_gamma(c_mp.clone()) * mp_gamma(-d.clone())
        / (mp_gamma(a.clone()) * mp_gamma(b.clone()));
    let f1 = mp_hyp2f1_series(a, b, &Float::with_val(prec, 1u32 - d), u, prec);
    let f2 = mp_hyp2f1_series(
        &Float::with_val(prec, &c_mp - a),
        &Float::with_val(prec, &c_mp - b),
        &Float::with_val(prec, 1u32 + d),
        u,
        prec,
    );
    let u_pow = u.clone().pow(d.clone());
    c1 * f1 + u_pow * c2 * f2
}

/// Log case c = a+b+m, m ≥ 0 (A&S 15.3.10 / 15.3.11) in working precision.
fn mp_connection_log_pos(a: &Float, b: &Float, m: usize, u: &Float, prec: u32) -> Float {
    let cc = Float::with_val(prec, Float::with_val(prec, a + b) + m as u32);
    let ln_u = u.clone().ln();
    let mut finite = f(prec, 0.0);
    if m >= 1 {
        let coeff = mp_gamma(f(prec, m as f64)) * mp_gamma(cc.clone())
            / (mp_gamma(addk(a, m)) * mp_gamma(addk(b, m)));
        let mut term = f(prec, 1.0);
        let mut sum = f(prec, 0.0);
        for n in 0..m {
            if n > 0 {
                let nm1 = (n - 1) as u32;
                term *= Float::with_val(prec, a + nm1) * Float::with_val(prec, b + nm1);
                term /= f(prec, n as f64) * f(prec, n as f64 - m as f64);
                term *= u;
            }
            sum += &term;
        }
        finite = coeff * sum;
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let coeff = mp_gamma(cc) / (mp_gamma(a.clone()) * mp_gamma(b.clone())) * f(prec, sign);
    let mut term = mp_gamma(f(prec, (m + 1) as f64)).recip(); // 1/m!
    let mut psi_1 = mp_digamma(f(prec, 1.0));
    let mut psi_2 = mp_digamma(f(prec, (m + 1) as f64));
    let mut psi_3 = mp_digamma(addk(a, m));
    let mut psi_4 = mp_digamma(addk(b, m));
    let mut sum = f(prec, 0.0);
    for n in 0..1_000_000usize {
        if n > 0 {
            let shift = (n + m - 1) as u32;
            term *= Float::with_val(prec, a + shift) * Float::with_val(prec, b + shift);
            term /= f(prec, n as f64) * f(prec, (n + m) as f64);
            term *= u;
            psi_1 += recip_of(prec, n as f64);
            psi_2 += recip_of(prec, (n + m) as f64);
            psi_3 += Float::with_val(prec, a + shift).recip();
            psi_4 += Float::with_val(prec, b + shift).recip();
        }
        let bracket = Float::with_val(prec, &ln_u - &psi_1) - &psi_2 + &psi_3 + &psi_4;
        let piece = Float::with_val(prec, &term * &bracket);
        sum += &piece;
        if n > 2 && piece.abs() < Float::with_val(prec, sum.clone().abs() >> (prec / 2 + 30)) {
            break;
        }
    }
    let u_m = u.clone().pow(f(prec, m as f64));
    finite - coeff * u_m * sum
}

/// Log case c = a+b-m, m ≥ 1 (A&S 15.3.12) in working precision.
fn mp_connection_log_neg(a: &Float, b: &Float, m: usize, u: &Float, prec: u32) -> Float {
    let cc = Float::with_val(prec, Float::with_val(prec, a + b) - m as u32);
    let ln_u = u.clone().ln();
    let coeff = mp_gamma(f(prec, m as f64)) * mp_gamma(cc.clone())
        / (mp_gamma(a.clone()) * mp_gamma(b.clone()));
    let mut term = f(prec, 1.0);
    let mut finite = f(prec, 0.0);
    for n in 0..m {
        if n > 0 {
            let off = (n - 1) as i64 - m as i64;
            term *= Float::with_val(prec, a + off) * Float::with_val(prec, b + off);
            term /= f(prec, n as f64) * f(prec, n as f64 - m as f64);
            term *= u;
        }
        finite += &term;
    }
    finite *= coeff;
    finite *= u.clone().pow(f(prec, -(m as f64)));
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let coeff2 = mp_gamma(cc)
        / (mp_gamma(Float::with_val(prec, a - m as u32)) * mp_gamma(Float::with_val(prec, b - m as u32)))
        * f(prec, sign);
    let mut term = mp_gamma(f(prec, (m + 1) as f64)).recip();
    let mut psi_1 = mp_digamma(f(prec, 1.0));
    let mut psi_2 = mp_digamma(f(prec, (m + 1) as f64));
    let mut psi_3 = mp_digamma(a.clone());
    let mut psi_4 = mp_digamma(b.clone());
    let mut sum = f(prec, 0.0);
    for n in 0..1_000_000usize {
        if n > 0 {
            let shift = (n - 1) as u32;
            term *= Float::with_val(prec, a + shift) * Float::with_val(prec, b + shift);
            term /= f(prec, n as f64) * f(prec, (n + m) as f64);
            term *= u;
            psi_1 += recip_of(prec, n as f64);
            psi_2 += recip_of(prec, (n + m) as f64);
            psi_3 += Float::with_val(prec, a + shift).recip();
            psi_4 += Float::with_val(prec, b + shift).recip();
        }
        let bracket = Float::with_val(prec, &ln_u - &psi_1) - &psi_2 + &psi_3 + &psi_4;
        let piece = Float::with_val(prec, &term * &bracket);
        sum += &piece;
        if n > 2 && piece.abs() < Float::with_val(prec, sum.clone().abs() >> (prec / 2 + 30)) {
            break;
        }
    }
    finite - coeff2 * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(got: f64, want: f64, tol: f64, label: &str) {
        assert!(
            (got - want).abs() <= tol * want.abs().max(1e-300),
            "{label}: got {got:e}, want {want:e}"
        );
    }

    #[test]
    fn precision_scaling_probe() {
        // The value must be stable under precision doubling; if it moves,
        // the budget in sum_prec is wrong.
        let base = sum_prec(60);
        let at = |prec: u32| -> f64 {
            let blocks = mp_block_expansion(120, 0.0, prec);
            let gamma0 = f(prec, 0.5);
            let nu0 = f(prec, 0.0);
            let d_even = bessel_factor_chain(&gamma0, 61, prec);
            let g_even = scaled_k_ladder(&nu0, 61, 2.0, prec);
            let mut acc = f(prec, 0.0);
            for (k, c) in blocks.coeffs.iter().enumerate() {
                acc += Float::with_val(prec, c * &Float::with_val(prec, &d_even[k] * &g_even[k]));
            }
            acc *= &blocks.pref;
            acc.to_f64()
        };
        let v1 = at(base);
        let v2 = at(2 * base);
        assert!((v1 - v2).abs() <= 1e-13 * v2.abs(), "{v1:e} vs {v2:e}");
    }

    #[test]
    fn scaled_ladder_matches_direct_k() {
        // g_ν = ξ^ν K_ν(ξ) against the f64 Bessel at small orders.
        let xi = 2.5;
        let g = scaled_k_ladder(&f(160, 0.25), 6, xi, 160);
        for (j, gv) in g.iter().enumerate() {
            let nu = 0.25 + j as f64;
            let want = crate::specfun::bessel_k(nu, xi).unwrap() * xi.powf(nu);
            close(gv.to_f64(), want, 1e-11, &format!("g ladder nu={nu}"));
        }
    }

    #[test]
    fn integer_ladder_matches_direct_k() {
        let xi = 1.7;
        let g = scaled_k_ladder(&f(160, 0.0), 5, xi, 160);
        for (j, gv) in g.iter().enumerate() {
            let nu = j as f64;
            let want = crate::specfun::bessel_k(nu, xi).unwrap() * xi.powf(nu);
            close(gv.to_f64(), want, 1e-11, &format!("int ladder nu={nu}"));
        }
    }

    #[test]
    fn half_integer_ladder() {
        let xi = 0.8;
        let g = scaled_k_ladder(&f(160, -0.5), 4, xi, 160);
        for (j, gv) in g.iter().enumerate() {
            let nu: f64 = -0.5 + j as f64;
            let want = crate::specfun::bessel_k(nu.abs(), xi).unwrap() * xi.powf(nu);
            close(gv.to_f64(), want, 1e-12, &format!("half ladder nu={nu}"));
        }
    }

    #[test]
    fn high_order_ladder_matches_mpmath() {
        // g_30(2) = 2^{30} K_30(2), mpmath reference (55 digits).
        let g = scaled_k_ladder(&f(336, 0.0), 31, 2.0, 336);
        let want = 4.586086358586482554089203908705733593909207434041271746e39;
        close(g[30].to_f64(), want, 1e-14, "g_30(2)");
    }

    #[test]
    fn large_argument_seed() {
        // Precision inflation must survive ξ = 120 (cancellation e^{2ξ}).
        let xi = 120.0;
        let g = scaled_k_ladder(&f(160, 0.25), 2, xi, 160);
        let want = crate::specfun::bessel_k(0.25, xi).unwrap() * xi.powf(0.25);
        close(g[0].to_f64(), want, 1e-10, "seed at xi=120");
    }

    // mpmath references at 250 digits, frozen.
    #[test]
    fn big_degree_transform_profiles() {
        let cases: [(usize, f64, f64, f64); 6] = [
            (120, 0.0, 2.0, 0.17418398563174450444),
            (121, 0.0, 0.8, 0.22574570302765935098),
            (80, 0.5, 5.0, -0.0059065274534064788728),
            (33, 0.5, 1.3, 0.01899224773698851185),
            (240, 0.0, 1.0, 0.17025147733604144942),
            (47, 1.5, 3.0, -0.38078546404956690463),
        ];
        for &(n, lam, xi, want) in &cases {
            let got = fourier_profile_point(lam, n, xi);
            close(got, want, 1e-12, &format!("profile n={n} lam={lam}"));
        }
    }

    #[test]
    fn big_degree_frac_lap() {
        let cases: [(usize, f64, f64, f64, f64); 6] = [
            (40, 0.5, 0.3, 1.7, -0.078762124603953922566),
            (37, 0.0, 0.8, 0.4, 236.48839109359218162),
            (24, 0.0, 0.5, 12.0, 0.00085472964104541880277),
            (12, 0.5, 0.2, 0.0, 0.6195120593507693221),
            (60, 0.5, 0.5, 250.0, -1.0610710059969802418e-6),
            (31, 0.0, 0.9, 1000.0, -6.1523970126719341197e-9),
        ];
        for &(n, lam, s, x, want) in &cases {
            let got = frac_lap_point(lam, s, n, x);
            close(got, want, 1e-11, &format!("frac lap n={n} lam={lam} x={x}"));
        }
    }

    #[test]
    fn zero_limit_even_profile() {
        // λ=1, n=0: ℱ[(1+x²)^{-1}](0) = √(π/2).
        let got = fourier_profile_zero_limit_even(1.0, 0);
        close(got, (std::f64::consts::PI / 2.0).sqrt(), 1e-14, "zero limit");
    }
}
