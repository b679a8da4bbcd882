//! The reduction operators: H_I, R_I, their m-fold iterates via kernel
//! formulas, the right-running supremum operator with its level
//! decomposition, and the product-measure operator P^m_Φ.
//!
//! Everything is built on the signed antiderivative P of 1/I, since the
//! iterated kernel is (∫_t^s dr/I)^{m-1} = (P(s) - P(t))^{m-1} and the
//! H-side integrals are then exact: d/ds (P(s) - P(t))^m / m = kernel / I.

use crate::error::{Result, RskError};
use crate::grid::{Grid, GridFn};
use crate::profiles::{PhiFunction, Profile};
use crate::quad::{integrate_adaptive, integrate_to_zero};

pub fn factorial(m: u32) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

fn binom(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Exact evaluator for H_I^m f with piecewise-constant f:
/// H^m f(t) = (1/m!) Σ_i v_i [(P(b_i) - P(t))^m - (P(a_i ∨ t) - P(t))^m].
/// Suffix sums of P-powers make each evaluation O(m²).
pub struct HmEval {
    profile: Profile,
    m: u32,
    f: GridFn,
    /// suffix[l][k] = Σ_{i ≥ k} v_i (P(b_i)^l - P(a_i)^l), cells 1.. only
    /// (the sentinel cell is handled directly; its P(0) may be -∞).
    suffix: Vec<Vec<f64>>,
    pb: Vec<f64>, // P at breakpoints
}

impl HmEval {
    pub fn new(profile: &Profile, m: u32, f: &GridFn) -> HmEval {
        assert!(m >= 1);
        let n = f.grid.n_cells();
        let pb: Vec<f64> = f.grid.points.iter().map(|&x| profile.antideriv(x)).collect();
        let mut suffix = vec![vec![0.0; n + 1]; m as usize + 1];
        for l in 0..=m as usize {
            for i in (1..n).rev() {
                let term = f.values[i] * (pb[i + 1].powi(l as i32) - pb[i].powi(l as i32));
                suffix[l][i] = suffix[l][i + 1] + term;
            }
        }
        HmEval {
            profile: profile.clone(),
            m,
            f: f.clone(),
            suffix,
            pb,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t >= 1.0 {
            return 0.0;
        }
        if t <= 0.0 {
            // limit at 0: infinite iff ∫_0 dr/I diverges and f has mass
            if self.pb[0].is_infinite() {
                return if self.f.integral() > 0.0 { f64::INFINITY } else { 0.0 };
            }
            // P(0) finite: the formula extends continuously
            return self.eval_inner(0.0, self.pb[0]);
        }
        self.eval_inner(t, self.profile.antideriv(t))
    }

    fn eval_inner(&self, t: f64, pt: f64) -> f64 {
        let m = self.m;
        let c = if t == 0.0 { 0 } else { self.f.grid.locate(t) };
        // partial contribution of the cell containing t
        let mut total = self.f.values[c] * (self.pb[c + 1] - pt).powi(m as i32);
        // full cells to the right via binomial suffix sums
        for l in 0..=m {
            let sign = if (m - l) % 2 == 0 { 1.0 } else { -1.0 };
            total += binom(m, l) * sign * pt.powi((m - l) as i32) * self.suffix[l as usize][c + 1];
        }
        total / factorial(m)
    }
}

/// Exact-to-quadrature evaluator for R_I^m f:
/// R^m f(t) = (1/(m-1)!) (1/I(t)) ∫_0^t f(s) (P(t) - P(s))^{m-1} ds,
/// expanded binomially with prefix moments M_j(x) = ∫_0^x f P^j ds.
pub struct RmEval {
    profile: Profile,
    m: u32,
    f: GridFn,
    /// prefix[j][k] = ∫_0^{p_k} f(s) P(s)^j ds
    prefix: Vec<Vec<f64>>,
}

impl RmEval {
    pub fn new(profile: &Profile, m: u32, f: &GridFn) -> RmEval {
        assert!(m >= 1);
        let n = f.grid.n_cells();
        let mut prefix = vec![vec![0.0; n + 1]; m as usize];
        for j in 0..m as usize {
            for i in 0..n {
                let (a, b) = f.grid.cell(i);
                let v = f.values[i];
                let cell = if v == 0.0 {
                    0.0
                } else if j == 0 {
                    v * (b - a)
                } else {
                    let g = |s: f64| v * profile.antideriv(s).powi(j as i32);
                    if a == 0.0 {
                        integrate_to_zero(&g, b, 1e-12)
                    } else {
                        integrate_adaptive(&g, a, b, 1e-12)
                    }
                };
                prefix[j][i + 1] = prefix[j][i] + cell;
            }
        }
        RmEval {
            profile: profile.clone(),
            m,
            f: f.clone(),
            prefix,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let t = t.min(1.0);
        let m = self.m;
        let c = self.f.grid.locate(t);
        let (a, _) = self.f.grid.cell(c);
        let v = self.f.values[c];
        let it = self.profile.eval(t);
        if it == 0.0 {
            return 0.0;
        }
        let pt = self.profile.antideriv(t);
        let mut total = 0.0;
        for j in 0..m {
            let moment = self.prefix[j as usize][c]
                + if v == 0.0 || t == a {
                    0.0
                } else if j == 0 {
                    v * (t - a)
                } else {
                    let g = |s: f64| v * self.profile.antideriv(s).powi(j as i32);
                    if a == 0.0 {
                        integrate_to_zero(&g, t, 1e-12)
                    } else {
                        integrate_adaptive(&g, a, t, 1e-12)
                    }
                };
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += binom(m - 1, j) * sign * pt.powi((m - 1 - j) as i32) * moment;
        }
        total / (factorial(m - 1) * it)
    }
}

/// ∫_0^1 e(t) g(t) dt for a smooth evaluator e against a piecewise-constant
/// g, by per-cell adaptive quadrature (geometric subdivision on the
/// sentinel cell, where e may have an integrable singularity).
pub fn pairing_eval(e: &dyn Fn(f64) -> f64, g: &GridFn) -> f64 {
    let mut total = 0.0;
    for i in 0..g.values.len() {
        let v = g.values[i];
        if v == 0.0 {
            continue;
        }
        let (a, b) = g.grid.cell(i);
        let piece = if a == 0.0 {
            integrate_to_zero(&|t| e(t), b, 1e-11)
        } else {
            integrate_adaptive(&|t| e(t), a, b, 1e-11)
        };
        total += v * piece;
    }
    total
}

/// m-fold composition of H_I as a numeric oracle: each level integrates the
/// previous evaluator with per-cell quadrature and suffix sums. Valid for
/// t ≥ the first positive breakpoint (the sentinel cell is never entered
/// when evaluating at grid points).
pub fn compose_h(profile: &Profile, m: u32, f: &GridFn) -> Box<dyn Fn(f64) -> f64> {
    assert!(m >= 1);
    let base = HmEval::new(profile, 1, f);
    let mut level: Box<dyn Fn(f64) -> f64> = Box::new(move |t| base.eval(t));
    for _ in 1..m {
        level = chain_h(profile, &f.grid, level);
    }
    level
}

fn chain_h(profile: &Profile, grid: &Grid, inner: Box<dyn Fn(f64) -> f64>) -> Box<dyn Fn(f64) -> f64> {
    let n = grid.n_cells();
    let profile = profile.clone();
    let grid = grid.clone();
    // suffix[k] = ∫_{p_k}^1 inner/I, cells 1..n
    let mut suffix = vec![0.0; n + 1];
    for i in (1..n).rev() {
        let (a, b) = grid.cell(i);
        let cell = integrate_adaptive(&|s| inner(s) / profile.eval(s), a, b, 1e-11);
        suffix[i] = suffix[i + 1] + cell;
    }
    Box::new(move |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let t = t.max(grid.points[1] * 1e-9);
        let c = grid.locate(t);
        let b_c = grid.points[c + 1];
        let partial = if t < b_c {
            integrate_adaptive(&|s| inner(s) / profile.eval(s), t, b_c, 1e-11)
        } else {
            0.0
        };
        partial + suffix[c + 1]
    })
}

/// H_I f as a grid function (values at cell left endpoints; the sentinel
/// value is the limit at 0, possibly ∞).
pub fn apply_h(profile: &Profile, f: &GridFn) -> GridFn {
    apply_h_m(profile, 1, f)
}

pub fn apply_h_m(profile: &Profile, m: u32, f: &GridFn) -> GridFn {
    let e = HmEval::new(profile, m, f);
    let values = (0..f.grid.n_cells())
        .map(|i| e.eval(f.grid.points[i]))
        .collect();
    GridFn {
        grid: f.grid.clone(),
        values,
    }
}

/// R_I f as a grid function. Values are taken at cell left endpoints; the
/// sentinel cell uses its right endpoint (I vanishes at 0 and the limit of
/// the quotient is profile-dependent, so the representative stays inside
/// the cell's closure).
pub fn apply_r(profile: &Profile, f: &GridFn) -> GridFn {
    apply_r_m(profile, 1, f)
}

pub fn apply_r_m(profile: &Profile, m: u32, f: &GridFn) -> GridFn {
    let e = RmEval::new(profile, m, f);
    let values = (0..f.grid.n_cells())
        .map(|i| {
            let t = if i == 0 { f.grid.points[1] } else { f.grid.points[i] };
            e.eval(t)
        })
        .collect();
    GridFn {
        grid: f.grid.clone(),
        values,
    }
}

/// Open set where the running maximum strictly exceeds the pointwise value,
/// with the plateau levels attained at the right endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelDecomposition {
    pub intervals: Vec<(f64, f64)>,
    pub plateaus: Vec<f64>,
}

/// G^m_I f(t) = sup_{t ≤ s ≤ 1} R^m_I f*(s): right-running maximum of the
/// kernel operator applied to the rearrangement, exact on grid points (the
/// sup is taken over breakpoints; see module notes on refinement
/// stability).
pub fn apply_g_m(profile: &Profile, m: u32, f: &GridFn) -> (GridFn, LevelDecomposition) {
    // keep the original grid resolution: rearrangement can merge cells and
    // the sup is only taken over grid points
    let fine = f.grid.refine_with(&f.rearrange().grid);
    let star = f.rearrange().on_refinement(&fine);
    let e = RmEval::new(profile, m, &star);
    let pts = &star.grid.points;
    let n = star.grid.n_cells();
    // pointwise values at representatives: left endpoints, sentinel at its
    // right endpoint, plus the final point 1
    let mut reps = Vec::with_capacity(n + 1);
    reps.push(pts[1]);
    for i in 1..n {
        reps.push(pts[i]);
    }
    reps.push(1.0);
    let vals: Vec<f64> = reps.iter().map(|&t| e.eval(t)).collect();
    // running max from the right over representatives
    let mut runmax = vec![0.0; vals.len()];
    let mut acc = f64::NEG_INFINITY;
    for i in (0..vals.len()).rev() {
        acc = acc.max(vals[i]);
        runmax[i] = acc;
    }
    let g = GridFn {
        grid: star.grid.clone(),
        values: runmax[..n].to_vec(),
    };
    // level decomposition: maximal runs where the running max exceeds the
    // pointwise value
    let tol = 1e-12;
    let mut intervals = Vec::new();
    let mut plateaus = Vec::new();
    let mut i = 0;
    while i < n {
        if runmax[i] > vals[i] * (1.0 + tol) + tol {
            let start = if i == 0 { 0.0 } else { pts[i] };
            let level = runmax[i];
            let mut j = i;
            while j < n && runmax[j] > vals[j] * (1.0 + tol) + tol && runmax[j] == level {
                j += 1;
            }
            let end = if j < n { pts[j] } else { 1.0 };
            intervals.push((start, end));
            plateaus.push(level);
            i = j;
        } else {
            i += 1;
        }
    }
    (g, LevelDecomposition { intervals, plateaus })
}

/// P^m_Φ f(t) = (Φ⁻¹(log(2/t))/log(2/t))^m ∫_t^1 (f/s) log^{m-1}(s/t) ds.
/// The integral is exactly (m-1)! times the linear-profile H^m, so the
/// exact kernel machinery is reused.
pub struct PmPhiEval {
    phi: PhiFunction,
    m: u32,
    inner: HmEval,
}

impl PmPhiEval {
    pub fn new(phi: &PhiFunction, m: u32, f: &GridFn) -> PmPhiEval {
        let lin = Profile::Power { alpha: 1.0 };
        PmPhiEval {
            phi: phi.clone(),
            m,
            inner: HmEval::new(&lin, m, f),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 || t >= 1.0 {
            return if t >= 1.0 { 0.0 } else { f64::INFINITY };
        }
        let u = (2.0 / t).ln();
        let pref = self.phi.phi_inv(u) / u;
        pref.powi(self.m as i32) * factorial(self.m - 1) * self.inner.eval(t)
    }
}

pub fn apply_p_phi(phi: &PhiFunction, m: u32, f: &GridFn) -> GridFn {
    let e = PmPhiEval::new(phi, m, f);
    let values = (0..f.grid.n_cells())
        .map(|i| {
            let t = if i == 0 { f.grid.points[1] } else { f.grid.points[i] };
            e.eval(t)
        })
        .collect();
    GridFn {
        grid: f.grid.clone(),
        values,
    }
}

/// Closed form H^m_{L_Φ}(χ_(0,b))(t) = (1/m!)(Φ⁻¹(log(2/t)) - Φ⁻¹(log(2/b)))^m
/// for t < b, used as a reference oracle for the kernel evaluator.
pub fn h_m_indicator_closed_form(phi: &PhiFunction, m: u32, b: f64, t: f64) -> Result<f64> {
    if !(b > 0.0 && b <= 1.0 && t > 0.0) {
        return Err(RskError::Parameter("need 0 < t, 0 < b <= 1".into()));
    }
    if t >= b {
        return Ok(0.0);
    }
    let d = phi.phi_inv((2.0 / t).ln()) - phi.phi_inv((2.0 / b).ln());
    Ok(d.powi(m as i32) / factorial(m))
}
