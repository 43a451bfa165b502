//! Crate-internal Gauss–Legendre panel quadrature.
//!
//! Nodes come from Newton iteration on the Legendre recurrence, so this
//! layer has no dependency on the eigensolver-based Gauss rules in `grids`.

use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on [-1, 1].
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                let jf = j as f64;
                p0 = ((2.0 * jf + 1.0) * z * p1 - jf * p2) / (jf + 1.0);
            }
            pp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

pub(crate) fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    CACHE.get_or_init(|| gauss_legendre(32))
}

pub(crate) fn gl64() -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    CACHE.get_or_init(|| gauss_legendre(64))
}

/// ∫_a^b f with one Gauss–Legendre rule.
pub(crate) fn integrate_rule<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rule: &(Vec<f64>, Vec<f64>),
) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for (t, w) in rule.0.iter().zip(rule.1.iter()) {
        sum += w * f(mid + half * t);
    }
    half * sum
}

/// Composite integration over consecutive panels given by `breaks`.
pub(crate) fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    rule: &(Vec<f64>, Vec<f64>),
) -> f64 {
    let mut total = 0.0;
    for pair in breaks.windows(2) {
        total += integrate_rule(&mut f, pair[0], pair[1], rule);
    }
    total
}

/// Panel breakpoints graded geometrically from `a` toward 0, then uniform
/// up to `b`. Used for integrands with endpoint singularities at 0 and
/// oscillation that slows away from the origin.
pub(crate) fn graded_breaks(a: f64, b: f64, uniform_width: f64) -> Vec<f64> {
    assert!(a > 0.0 && b > a);
    let mut breaks = vec![0.0, a];
    let mut t = a;
    while t < 1.0 && t * 2.0 < b {
        t *= 2.0;
        breaks.push(t);
    }
    while t < b {
        t = (t + uniform_width).min(b);
        breaks.push(t);
    }
    if *breaks.last().unwrap() < b {
        breaks.push(b);
    }
    breaks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_reproduce_polynomial_integrals() {
        let rule = gauss_legendre(12);
        // exact for degree <= 23: ∫_{-1}^{1} t^k dt
        for k in 0..=23usize {
            let got = integrate_rule(|t| t.powi(k as i32), -1.0, 1.0, &rule);
            let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "k={k}: {got} vs {want}");
        }
    }

    #[test]
    fn panels_integrate_exponential() {
        let breaks = graded_breaks(1e-4, 30.0, 2.0);
        let got = integrate_panels(|t| (-t).exp(), &breaks, gl32());
        assert!((got - 1.0).abs() < 1e-13);
    }

    #[test]
    fn legendre_two_point() {
        let (n, w) = gauss_legendre(2);
        assert!((n[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
    }
}
