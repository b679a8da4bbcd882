//! Quadrature primitives: Gauss-Legendre rules, adaptive integration, and
//! the power-log cell integrals `∫ s^c log^d(2/s) ds` that every norm
//! evaluator reduces to.

use std::sync::OnceLock;

/// Default relative tolerance for kernel quadrature.
pub const EPS_QUAD: f64 = 1e-10;

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            // Evaluate P_n(x) and P_n'(x) by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        // Recompute derivative at the converged node for the weight.
        let mut p0 = 1.0;
        let mut p1 = x;
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl8() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(8))
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(16))
}

/// Fixed-order Gauss-Legendre on [a, b].
pub fn gl_integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, order: usize) -> f64 {
    let (nodes, weights) = match order {
        8 => gl8(),
        _ => gl16(),
    };
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        sum += w * f(mid + half * x);
    }
    sum * half
}

/// Adaptive bisection driven by the GL8/GL16 discrepancy.
pub fn integrate_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn go(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
        let coarse = gl_integrate(f, a, b, 8);
        let fine = gl_integrate(f, a, b, 16);
        if (fine - coarse).abs() <= tol * fine.abs().max(1e-300) || depth >= 40 {
            fine
        } else {
            let mid = 0.5 * (a + b);
            go(f, a, mid, tol, depth + 1) + go(f, mid, b, tol, depth + 1)
        }
    }
    if a >= b {
        return 0.0;
    }
    go(f, a, b, rel_tol, 0)
}

/// Integrates `f` over (0, b] for integrands with at most a logarithmic
/// singularity at 0, by geometric subdivision toward the origin.
pub fn integrate_to_zero(f: &dyn Fn(f64) -> f64, b: f64, rel_tol: f64) -> f64 {
    let mut total = 0.0;
    let mut hi = b;
    for _ in 0..4000 {
        let lo = hi * 0.5;
        let piece = integrate_adaptive(f, lo, hi, rel_tol);
        total += piece;
        if piece.abs() <= rel_tol * total.abs().max(1e-300) && hi < b {
            break;
        }
        hi = lo;
        if hi < 1e-300 {
            break;
        }
    }
    total
}

/// Integrates `f` over [a, ∞) for decaying integrands, by geometric
/// subdivision toward infinity.
pub fn integrate_to_inf(f: &dyn Fn(f64) -> f64, a: f64, rel_tol: f64) -> f64 {
    let mut total = 0.0;
    let mut lo = a;
    let mut width = a.abs().max(1.0);
    for _ in 0..2000 {
        let hi = lo + width;
        let piece = integrate_adaptive(f, lo, hi, rel_tol);
        total += piece;
        if piece.abs() <= rel_tol * total.abs().max(1e-300) && lo > a {
            break;
        }
        lo = hi;
        width *= 2.0;
    }
    total
}

/// Exact-to-tolerance value of `∫_a^b s^c log^d(2/s) ds` with 0 ≤ a < b ≤ 1.
///
/// Returns `f64::INFINITY` when a = 0 and the integral diverges
/// (c ≤ -1, except c = -1 with d < -1). Everything is computed after the
/// substitution u = log(2/s), which maps the integrand onto
/// `2^(c+1) e^{-(c+1)u} u^d` on u ≥ log 2, where it is smooth.
pub fn power_log_integral(a: f64, b: f64, c: f64, d: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    assert!(a >= 0.0 && a < b && b <= 1.0 + 1e-12);
    let k = c + 1.0;
    let u_b = (2.0 / b).ln();
    let g = move |u: f64| (-k * u).exp() * u.powf(d);
    let scale = 2.0f64.powf(k);
    if a == 0.0 {
        if k < 0.0 {
            return f64::INFINITY;
        }
        if k == 0.0 {
            // ∫_{u_b}^∞ u^d du
            if d < -1.0 {
                return scale * (-u_b.powf(d + 1.0)) / (d + 1.0);
            }
            return f64::INFINITY;
        }
        return scale * integrate_to_inf(&g, u_b, EPS_QUAD * 1e-2);
    }
    let u_a = (2.0 / a).ln();
    if k == 0.0 {
        if (d + 1.0).abs() < 1e-14 {
            return scale * (u_a.ln() - u_b.ln());
        }
        return scale * (u_a.powf(d + 1.0) - u_b.powf(d + 1.0)) / (d + 1.0);
    }
    scale * integrate_adaptive(&g, u_b, u_a, EPS_QUAD * 1e-2)
}

/// `∫_a^b s^c log^d(2/s) loglog^e ds` with loglog(s) = log(1 + log(2/s)),
/// the cell integral underlying generalized Lorentz-Zygmund norms.
/// Divergence at a = 0 is detected and reported as ∞.
pub fn power_log_loglog_integral(a: f64, b: f64, c: f64, d: f64, e: f64) -> f64 {
    if e == 0.0 {
        return power_log_integral(a, b, c, d);
    }
    if a == b {
        return 0.0;
    }
    assert!(a >= 0.0 && a < b && b <= 1.0 + 1e-12);
    let k = c + 1.0;
    let u_b = (2.0 / b).ln();
    let g = move |u: f64| (-k * u).exp() * u.powf(d) * (1.0 + u).ln().powf(e);
    let scale = 2.0f64.powf(k);
    if a == 0.0 {
        if k < 0.0 {
            return f64::INFINITY;
        }
        if k == 0.0 {
            if d < -1.0 || (d == -1.0 && e < -1.0) {
                return scale * integrate_to_inf(&g, u_b, EPS_QUAD * 1e-2);
            }
            return f64::INFINITY;
        }
        return scale * integrate_to_inf(&g, u_b, EPS_QUAD * 1e-2);
    }
    let u_a = (2.0 / a).ln();
    scale * integrate_adaptive(&g, u_b, u_a, EPS_QUAD * 1e-2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_nodes_integrate_polynomials_exactly() {
        // GL8 must be exact for degree ≤ 15.
        let v = gl_integrate(&|x: f64| x.powi(14), -1.0, 1.0, 8);
        assert!((v - 2.0 / 15.0).abs() < 1e-13);
    }

    #[test]
    fn log_kernel_integral() {
        // ∫_t^1 ds/s = log(1/t), via the generic cell machinery
        let t: f64 = 2.0f64.powi(-20);
        let v = power_log_integral(t, 1.0, -1.0, 0.0);
        assert!((v - (1.0 / t).ln()).abs() < 1e-9 * (1.0 / t).ln());
    }

    #[test]
    fn divergent_cases() {
        assert!(power_log_integral(0.0, 1.0, -1.0, 0.0).is_infinite());
        assert!(power_log_integral(0.0, 1.0, -1.5, 0.0).is_infinite());
        // c = -1, d = -2 converges: ∫_0^1 log^{-2}(2/s)/s ds = 1/log 2
        let v = power_log_integral(0.0, 1.0, -1.0, -2.0);
        assert!((v - 1.0 / 2.0f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn power_integral_closed_form() {
        // ∫_0^{1/4} s^{-1/2} ds = 2 * (1/4)^{1/2} = 1
        let v = power_log_integral(0.0, 0.25, -0.5, 0.0);
        assert!((v - 1.0).abs() < 1e-9);
    }
}
