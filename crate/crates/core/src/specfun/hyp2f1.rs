//! Gauss hypergeometric function ₂F₁ on the real line.
//!
//! Evaluation routes: exact finite sums for polynomial cases, the power
//! series with compensated summation for |x| < 1, and the Pfaff map
//! `₂F₁(a,b;c;x) = (1-x)^{-a} ₂F₁(a,c-b;c;x/(x-1))` for x ≤ -1, which moves
//! the argument into [0,1). A separate near-unit path (connection formulas
//! in 1-x, including the logarithmic cases at integer c-a-b) serves callers
//! that evaluate far into the tails, where the plain series would hit its
//! term cap.

use crate::error::{Error, Result};
use crate::specfun::gamma::{digamma, ln_gamma_signed, pochhammer, rgamma};

/// Series termination: a term below this, relative to the partial sum,
/// ends the summation.
const SERIES_TOL: f64 = 1e-17;

/// Hard cap on series terms; hitting it is an error, not a truncation.
const SERIES_CAP: usize = 10_000;

/// Arguments of ₂F₁(a,b;c;x), validated at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Args {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub x: f64,
}

impl Hyp2F1Args {
    /// Rejects c = 0, -1, -2, ... where the series is undefined.
    pub fn new(a: f64, b: f64, c: f64, x: f64) -> Result<Self> {
        if is_nonpos_int(c) {
            return Err(Error::domain(format!(
                "hyp2f1: c must not be zero or a negative integer, got c = {c}"
            )));
        }
        Ok(Hyp2F1Args { a, b, c, x })
    }
}

/// True when `v` is 0, -1, -2, ... exactly.
pub(crate) fn is_nonpos_int(v: f64) -> bool {
    v <= 0.0 && v == v.floor() && v.is_finite()
}

/// ₂F₁(a,b;c;x) for real arguments.
pub fn hyp2f1(args: Hyp2F1Args) -> Result<f64> {
    let Hyp2F1Args { a, b, c, x } = args;
    hyp2f1_raw(a, b, c, x)
}

/// Same as [`hyp2f1`] without the argument struct; shared by internal callers.
pub(crate) fn hyp2f1_raw(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if is_nonpos_int(c) {
        return Err(Error::domain(format!(
            "hyp2f1: invalid c = {c} (zero or negative integer)"
        )));
    }
    // Polynomial cases are exact for any x.
    if is_nonpos_int(a) || is_nonpos_int(b) {
        return Ok(polynomial(a, b, c, x));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x >= 1.0 {
        let d = c - a - b;
        if x == 1.0 && d > 0.0 {
            // Gauss summation theorem.
            let (lc, sc) = ln_gamma_signed(c);
            let (ld, sd) = ln_gamma_signed(d);
            let (lca, sca) = ln_gamma_signed(c - a);
            let (lcb, scb) = ln_gamma_signed(c - b);
            return Ok(sc * sd * sca * scb * (lc + ld - lca - lcb).exp());
        }
        return Err(Error::domain(format!(
            "hyp2f1 diverges or is complex at x = {x} (c-a-b = {d})"
        )));
    }
    if x <= -1.0 {
        // Pfaff: argument x/(x-1) lands in [1/2, 1).
        let y = x / (x - 1.0);
        let f = series(a, c - b, c, y)?;
        return Ok((1.0 - x).powf(-a) * f);
    }
    series(a, b, c, x)
}

/// Exact finite sum when a or b is a non-positive integer.
///
/// Arguments past 1/2 are routed through the Pfaff linear transformation
/// `₂F₁(-n,b;c;x) = (c-b)_n/(c)_n ₂F₁(-n,b;b-c-n+1;1-x)`, which keeps the
/// alternating sum well conditioned near x = 1.
fn polynomial(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let (p, q) = if is_nonpos_int(a) && is_nonpos_int(b) {
        if -a <= -b {
            (a, b)
        } else {
            (b, a)
        }
    } else if is_nonpos_int(a) {
        (a, b)
    } else {
        (b, a)
    };
    let n = (-p) as usize;
    if x > 0.5 {
        let cp = q - c - n as f64 + 1.0;
        let degenerate = is_nonpos_int(cp) && ((-cp) as usize) < n;
        if !degenerate {
            let ratio = pochhammer(c - q, n) / pochhammer(c, n);
            return ratio * polynomial_sum(p, q, cp, 1.0 - x, n);
        }
    }
    polynomial_sum(p, q, c, x, n)
}

fn polynomial_sum(p: f64, q: f64, c: f64, x: f64, n: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    for k in 0..n {
        let kf = k as f64;
        term *= (p + kf) * (q + kf) / ((c + kf) * (kf + 1.0)) * x;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Power series with Kahan compensation; |x| < 1.
fn series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut term = 1.0f64;
    for k in 0..SERIES_CAP {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() <= SERIES_TOL * sum.abs().max(f64::MIN_POSITIVE) && k > 2 {
            return Ok(sum);
        }
    }
    Err(Error::SeriesCap { terms: SERIES_CAP })
}

/// ₂F₁(a+1,b;c;x) from the contiguous-in-a recurrence, given
/// F_prev = ₂F₁(a-1,b;c;x) and F_curr = ₂F₁(a,b;c;x).
///
/// Rearranges `(2a-c-ax+bx)F(a) + (c-a)F(a-1) + a(x-1)F(a+1) = 0`.
pub fn hyp2f1_shift_a(
    a: f64,
    b: f64,
    c: f64,
    x: f64,
    f_prev: f64,
    f_curr: f64,
) -> Result<f64> {
    let denom = a * (x - 1.0);
    if denom == 0.0 {
        return Err(Error::domain(format!(
            "hyp2f1_shift_a: a(x-1) = 0 (a = {a}, x = {x})"
        )));
    }
    Ok(-((2.0 * a - c - a * x + b * x) * f_curr + (c - a) * f_prev) / denom)
}

/// ₂F₁(a,b;c;w) for w ∈ [0,1), stable as w → 1⁻.
///
/// Below `0.75` this is the plain series. Above, the function is continued
/// in u = 1-w: the two-term connection formula when c-a-b is not an
/// integer, and the logarithmic forms when it is. Polynomial cases bypass
/// the split entirely.
pub(crate) fn hyp2f1_near_unit(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    debug_assert!((0.0..1.0).contains(&w));
    if is_nonpos_int(a) || is_nonpos_int(b) {
        return Ok(polynomial(a, b, c, w));
    }
    if w < 0.75 {
        return series(a, b, c, w);
    }
    let u = 1.0 - w;
    let d = c - a - b;
    let m = d.round();
    if (d - m).abs() < 1e-8 {
        if m >= 0.0 {
            connection_log_pos(a, b, m as usize, u)
        } else {
            connection_log_neg(a, b, (-m) as usize, u)
        }
    } else {
        connection_generic(a, b, c, u)
    }
}

/// Two-series connection in u = 1-w, c-a-b not an integer.
fn connection_generic(a: f64, b: f64, c: f64, u: f64) -> Result<f64> {
    let d = c - a - b;
    // C1 = Γ(c)Γ(d) / (Γ(c-a)Γ(c-b)); zero if c-a or c-b is a pole.
    let c1 = gamma_ratio(&[c, d], &[c - a, c - b]);
    let c2 = gamma_ratio(&[c, -d], &[a, b]);
    let f1 = if c1 == 0.0 {
        0.0
    } else {
        series(a, b, 1.0 - d, u)?
    };
    let f2 = if c2 == 0.0 {
        0.0
    } else {
        series(c - a, c - b, 1.0 + d, u)?
    };
    Ok(c1 * f1 + u.powf(d) * c2 * f2)
}

/// Product of Γ over `num` divided by Γ over `den`, in log space, with signs.
/// Returns 0 when a denominator argument is a Γ pole.
fn gamma_ratio(num: &[f64], den: &[f64]) -> f64 {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for &v in num {
        if is_nonpos_int(v) {
            return f64::INFINITY; // numerator pole: caller's case split is wrong
        }
        let (l, s) = ln_gamma_signed(v);
        ln += l;
        sign *= s;
    }
    for &v in den {
        if is_nonpos_int(v) {
            return 0.0;
        }
        let (l, s) = ln_gamma_signed(v);
        ln -= l;
        sign *= s;
    }
    sign * ln.exp()
}

/// Logarithmic connection for c = a+b+m, m ≥ 0 (A&S 15.3.10 / 15.3.11).
fn connection_log_pos(a: f64, b: f64, m: usize, u: f64) -> Result<f64> {
    let mf = m as f64;
    let c = a + b + mf;
    let ln_u = u.ln();
    // Finite part (empty when m = 0).
    let mut finite = 0.0;
    if m >= 1 {
        let coeff = gamma_ratio(&[mf, c], &[a + mf, b + mf]);
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 0..m {
            if n > 0 {
                let nf = (n - 1) as f64;
                term *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * u;
            }
            sum += term;
        }
        finite = coeff * sum;
    }
    // Log series.
    let coeff = gamma_ratio(&[c], &[a, b]) * if m % 2 == 0 { 1.0 } else { -1.0 };
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        if n > 0 {
            term *= (a + mf + nf - 1.0) * (b + mf + nf - 1.0) / (nf * (nf + mf)) * u;
        } else {
            term = 1.0 / factorial(m);
        }
        let bracket = ln_u - digamma(nf + 1.0) - digamma(nf + mf + 1.0)
            + digamma(a + nf + mf)
            + digamma(b + nf + mf);
        let piece = term * bracket;
        sum += piece;
        if piece.abs() <= SERIES_TOL * sum.abs().max(1e-300) && n > 2 {
            break;
        }
        if n + 1 == SERIES_CAP {
            return Err(Error::SeriesCap { terms: SERIES_CAP });
        }
    }
    Ok(finite - coeff * u.powi(m as i32) * sum)
}

/// Logarithmic connection for c = a+b-m, m ≥ 1 (A&S 15.3.12).
fn connection_log_neg(a: f64, b: f64, m: usize, u: f64) -> Result<f64> {
    let mf = m as f64;
    let c = a + b - mf;
    let ln_u = u.ln();
    // Finite part, m terms, factor u^{-m}.
    let coeff = gamma_ratio(&[mf, c], &[a, b]);
    let mut term = 1.0;
    let mut finite = 0.0;
    for n in 0..m {
        if n > 0 {
            let nf = (n - 1) as f64;
            term *= (a - mf + nf) * (b - mf + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * u;
        }
        finite += term;
    }
    finite *= coeff * u.powi(-(m as i32));
    // Log series.
    let coeff2 = gamma_ratio(&[c], &[a - mf, b - mf]) * if m % 2 == 0 { 1.0 } else { -1.0 };
    let mut term = 1.0 / factorial(m);
    let mut sum = 0.0;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        if n > 0 {
            term *= (a + nf - 1.0) * (b + nf - 1.0) / (nf * (nf + mf)) * u;
        }
        let bracket =
            ln_u - digamma(nf + 1.0) - digamma(nf + mf + 1.0) + digamma(a + nf) + digamma(b + nf);
        let piece = term * bracket;
        sum += piece;
        if piece.abs() <= SERIES_TOL * sum.abs().max(1e-300) && n > 2 {
            break;
        }
        if n + 1 == SERIES_CAP {
            return Err(Error::SeriesCap { terms: SERIES_CAP });
        }
    }
    Ok(finite - coeff2 * sum)
}

fn factorial(m: usize) -> f64 {
    let mut f = 1.0;
    for i in 2..=m {
        f *= i as f64;
    }
    f
}
