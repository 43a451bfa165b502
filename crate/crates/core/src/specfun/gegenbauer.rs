//! Gegenbauer (ultraspherical) polynomials by forward recurrence.

use crate::error::{Error, Result};

/// Values C_0^λ(t) ... C_N^λ(t) by the three-term recurrence
/// `n C_n = 2t(n+λ-1) C_{n-1} - (n+2λ-2) C_{n-2}`, seeds 1 and 2λt.
///
/// λ = 0 is the Chebyshev limit: returns T_0(t) ... T_N(t).
pub fn gegenbauer_all(n_max: usize, lambda: f64, t: f64) -> Result<Vec<f64>> {
    if !(lambda > -0.5) {
        return Err(Error::domain(format!(
            "gegenbauer_all requires lambda > -1/2, got {lambda}"
        )));
    }
    let mut out = Vec::with_capacity(n_max + 1);
    if lambda == 0.0 {
        out.push(1.0);
        if n_max >= 1 {
            out.push(t);
        }
        for n in 2..=n_max {
            let v = 2.0 * t * out[n - 1] - out[n - 2];
            out.push(v);
        }
        return Ok(out);
    }
    out.push(1.0);
    if n_max >= 1 {
        out.push(2.0 * lambda * t);
    }
    for n in 2..=n_max {
        let nf = n as f64;
        let v = (2.0 * t * (nf + lambda - 1.0) * out[n - 1] - (nf + 2.0 * lambda - 2.0) * out[n - 2])
            / nf;
        out.push(v);
    }
    Ok(out)
}
