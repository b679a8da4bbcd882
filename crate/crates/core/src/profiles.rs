//! Isoperimetric profiles on (0, 1) and the product-measure auxiliaries:
//! the tail function H, the density-along-quantiles F_Φ, and the profile
//! L_Φ(s) = s Φ'(Φ⁻¹(log(2/s))).

use crate::error::{Result, RskError};
use crate::quad::{integrate_adaptive, integrate_to_inf};
use serde_json::Value;

/// Strictly increasing convex Φ on [0, ∞) with Φ(0) = 0 and √Φ concave,
/// defining the product measure with density c_Φ e^{-Φ(|x|)}.
#[derive(Clone, Debug, PartialEq)]
pub enum PhiFunction {
    /// Φ(t) = t²/2 (Gauss measure).
    Gauss,
    /// Φ(t) = t^β / β, 1 ≤ β. β = 1 is exactly Φ(t) = t.
    Boltzmann { beta: f64 },
}

impl PhiFunction {
    pub fn boltzmann(beta: f64) -> Result<PhiFunction> {
        if !(beta >= 1.0) {
            return Err(RskError::Parameter(format!(
                "boltzmann exponent must be >= 1, got {beta}"
            )));
        }
        Ok(PhiFunction::Boltzmann { beta })
    }

    pub fn phi(&self, t: f64) -> f64 {
        match self {
            PhiFunction::Gauss => 0.5 * t * t,
            PhiFunction::Boltzmann { beta } => t.powf(*beta) / beta,
        }
    }

    /// Φ', with Φ'(0) taken as the right limit.
    pub fn dphi(&self, t: f64) -> f64 {
        match self {
            PhiFunction::Gauss => t,
            PhiFunction::Boltzmann { beta } => {
                if *beta == 1.0 {
                    1.0
                } else {
                    t.powf(beta - 1.0)
                }
            }
        }
    }

    pub fn phi_inv(&self, y: f64) -> f64 {
        match self {
            PhiFunction::Gauss => (2.0 * y).sqrt(),
            PhiFunction::Boltzmann { beta } => (beta * y).powf(1.0 / beta),
        }
    }

    /// Normalizing constant making c_Φ e^{-Φ(|x|)} a probability density.
    pub fn c_phi(&self) -> f64 {
        let half = integrate_to_inf(&|r: f64| (-self.phi(r)).exp(), 0.0, 1e-13);
        1.0 / (2.0 * half)
    }

    /// Checks convexity of Φ and concavity of √Φ by second differences on
    /// a sample grid; used to validate user-supplied parameters.
    pub fn validate(&self) -> Result<()> {
        let n = 200;
        for i in 1..n {
            let t = 0.05 + 10.0 * i as f64 / n as f64;
            let h = 1e-3;
            let d2 = self.phi(t + h) - 2.0 * self.phi(t) + self.phi(t - h);
            if d2 < -1e-9 {
                return Err(RskError::Parameter("phi not convex".into()));
            }
            let sq = |x: f64| self.phi(x).sqrt();
            let s2 = sq(t + h) - 2.0 * sq(t) + sq(t - h);
            if s2 > 1e-9 {
                return Err(RskError::Parameter("sqrt(phi) not concave".into()));
            }
        }
        Ok(())
    }
}

fn tail_with(phi: &PhiFunction, c: f64, t: f64) -> f64 {
    if t < 0.0 {
        return 1.0 - tail_with(phi, c, -t);
    }
    c * integrate_to_inf(&|r: f64| (-phi.phi(r)).exp(), t, 1e-13)
}

fn h_inverse_with(phi: &PhiFunction, c: f64, s: f64) -> f64 {
    assert!(s > 0.0 && s < 1.0);
    let mut hi = 1.0;
    while tail_with(phi, c, hi) > s {
        hi *= 2.0;
        if hi > 1e6 {
            break;
        }
    }
    let mut lo = -hi;
    while tail_with(phi, c, lo) < s {
        lo *= 2.0;
        if lo < -1e6 {
            break;
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if tail_with(phi, c, mid) > s {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * (1.0 + hi.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// H(t) = ∫_t^∞ c_Φ e^{-Φ(|r|)} dr, the upper tail of the measure.
pub fn h_function(phi: &PhiFunction, t: f64) -> f64 {
    tail_with(phi, phi.c_phi(), t)
}

/// Inverse of H by monotone bisection, tolerance 1e-12 in s.
pub fn h_inverse(phi: &PhiFunction, s: f64) -> f64 {
    h_inverse_with(phi, phi.c_phi(), s)
}

/// F_Φ(s) = c_Φ e^{-Φ(|H⁻¹(s)|)}: the density seen along the quantile
/// parametrization; vanishes at s = 0 and s = 1.
pub fn f_phi(phi: &PhiFunction, s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        return 0.0;
    }
    let c = phi.c_phi();
    let x = h_inverse_with(phi, c, s);
    c * (-phi.phi(x.abs())).exp()
}

/// Model-domain width M_α: (1 - (1-α)r)^{1/(1-α)} for α < 1, e^{-r} for
/// α = 1. Satisfies -M' = M^α.
pub fn model_domain_m(alpha: f64, r: f64) -> Result<f64> {
    if alpha < 0.0 || alpha > 1.0 {
        return Err(RskError::Parameter(format!("alpha out of [0,1]: {alpha}")));
    }
    if alpha == 1.0 {
        if r < 0.0 {
            return Err(RskError::Parameter("r must be nonnegative".into()));
        }
        return Ok((-r).exp());
    }
    let r_max = 1.0 / (1.0 - alpha);
    if r < 0.0 || r > r_max + 1e-12 {
        return Err(RskError::Parameter(format!("r out of [0, {r_max}]")));
    }
    Ok((1.0 - (1.0 - alpha) * r).max(0.0).powf(1.0 / (1.0 - alpha)))
}

/// Isoperimetric profile abstraction: evaluator for I(s) and for the
/// antiderivative J(a,b) = ∫_a^b dr/I(r), closed-form wherever possible.
#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    /// I(s) = s^α, 0 ≤ α ≤ 1. α = 1 is the linear profile.
    Power { alpha: f64 },
    /// I = L_Φ for a product measure.
    LPhi { phi: PhiFunction },
    /// Left-continuous step profile: value `values[i]` on (points[i], points[i+1]].
    Table { points: Vec<f64>, values: Vec<f64> },
}

pub fn power_profile(alpha: f64) -> Result<Profile> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(RskError::Parameter(format!("alpha out of [0,1]: {alpha}")));
    }
    Ok(Profile::Power { alpha })
}

pub fn john_profile(n: u32) -> Result<Profile> {
    if n < 2 {
        return Err(RskError::Parameter("john dimension must be >= 2".into()));
    }
    power_profile(1.0 - 1.0 / n as f64)
}

pub fn linear_profile() -> Profile {
    Profile::Power { alpha: 1.0 }
}

pub fn l_phi_profile(phi: PhiFunction) -> Profile {
    Profile::LPhi { phi }
}

impl Profile {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Profile::Power { alpha } => {
                if s <= 0.0 {
                    0.0
                } else {
                    s.powf(*alpha)
                }
            }
            Profile::LPhi { phi } => {
                if s <= 0.0 {
                    0.0
                } else {
                    s * phi.dphi(phi.phi_inv((2.0 / s).ln()))
                }
            }
            Profile::Table { points, values } => {
                if s <= points[0] {
                    return values[0];
                }
                for i in 0..values.len() {
                    if s <= points[i + 1] {
                        return values[i];
                    }
                }
                *values.last().unwrap()
            }
        }
    }

    /// J(a, b) = ∫_a^b dr / I(r), 0 ≤ a < b ≤ 1. Closed form for power
    /// profiles and for L_Φ (where the integrand is the exact derivative
    /// of -Φ⁻¹(log(2/r))); exact cell sums for tables.
    pub fn j(&self, a: f64, b: f64) -> f64 {
        debug_assert!(a >= 0.0 && a <= b && b <= 1.0 + 1e-12);
        if a >= b {
            return 0.0;
        }
        match self {
            Profile::Power { alpha } => {
                if *alpha == 1.0 {
                    if a == 0.0 {
                        f64::INFINITY
                    } else {
                        (b / a).ln()
                    }
                } else {
                    let e = 1.0 - alpha;
                    (b.powf(e) - a.powf(e)) / e
                }
            }
            Profile::LPhi { phi } => {
                if a == 0.0 {
                    f64::INFINITY
                } else {
                    phi.phi_inv((2.0 / a).ln()) - phi.phi_inv((2.0 / b).ln())
                }
            }
            Profile::Table { points, values } => {
                let mut total = 0.0;
                let mut lo = a;
                for i in 0..values.len() {
                    let seg_hi = points[i + 1].min(b);
                    if seg_hi <= lo {
                        continue;
                    }
                    let seg_lo = lo.max(points[i]).max(if i == 0 { 0.0 } else { points[i] });
                    if values[i] <= 0.0 {
                        return f64::INFINITY;
                    }
                    total += (seg_hi - seg_lo) / values[i];
                    lo = seg_hi;
                    if lo >= b {
                        break;
                    }
                }
                total
            }
        }
    }

    /// Signed antiderivative P of 1/I with J(a, b) = P(b) - P(a), so kernel
    /// powers (∫_t^s dr/I)^k expand binomially in P. Returns -∞ at 0 when
    /// ∫_0 dr/I diverges.
    pub fn antideriv(&self, x: f64) -> f64 {
        match self {
            Profile::Power { alpha } => {
                if *alpha == 1.0 {
                    if x == 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        x.ln()
                    }
                } else {
                    let e = 1.0 - alpha;
                    x.powf(e) / e
                }
            }
            Profile::LPhi { phi } => {
                if x == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    -phi.phi_inv((2.0 / x).ln())
                }
            }
            Profile::Table { .. } => self.j(0.0, x),
        }
    }

    /// Whether J(0, s) ≍ s / I(s) (ratio exactly bounded by 1/(1-α) for
    /// power profiles with α < 1; fails at α = 1 and for L_Φ).
    pub fn is_doubling(&self) -> bool {
        matches!(self, Profile::Power { alpha } if *alpha < 1.0)
    }

    /// inf I(t)/t over a sample of (0,1); must be positive for a valid
    /// profile.
    pub fn lower_bound_constant(&self) -> f64 {
        let mut inf = f64::INFINITY;
        for i in 1..=400 {
            let t = 2.0f64.powf(-40.0 * i as f64 / 400.0);
            inf = inf.min(self.eval(t) / t);
        }
        inf.min(self.eval(1.0))
    }

    pub fn from_json(v: &Value) -> Result<Profile> {
        let kind = v["type"]
            .as_str()
            .ok_or_else(|| RskError::Parameter("profile missing type".into()))?;
        match kind {
            "power" => power_profile(
                v["alpha"]
                    .as_f64()
                    .ok_or_else(|| RskError::Parameter("power profile needs alpha".into()))?,
            ),
            "linear" => Ok(linear_profile()),
            "john" => john_profile(
                v["n"]
                    .as_u64()
                    .ok_or_else(|| RskError::Parameter("john profile needs n".into()))?
                    as u32,
            ),
            "gauss" => Ok(l_phi_profile(PhiFunction::Gauss)),
            "boltzmann" => {
                let beta = v["beta"]
                    .as_f64()
                    .ok_or_else(|| RskError::Parameter("boltzmann needs beta".into()))?;
                Ok(l_phi_profile(PhiFunction::boltzmann(beta)?))
            }
            "table" => {
                let pts = v["points"]
                    .as_array()
                    .ok_or_else(|| RskError::Parameter("table needs points".into()))?;
                let mut points = vec![0.0];
                let mut values = Vec::new();
                for p in pts {
                    let pair = p
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| RskError::Parameter("table point must be [s, I]".into()))?;
                    let s = pair[0].as_f64().unwrap_or(f64::NAN);
                    let i_val = pair[1].as_f64().unwrap_or(f64::NAN);
                    if !s.is_finite() || !i_val.is_finite() || i_val < 0.0 {
                        return Err(RskError::Parameter("bad table entry".into()));
                    }
                    points.push(s);
                    values.push(i_val);
                }
                if *points.last().unwrap() < 1.0 {
                    points.push(1.0);
                    values.push(*values.last().unwrap());
                }
                for w in points.windows(2) {
                    if !(w[1] > w[0]) {
                        return Err(RskError::Parameter("table points must increase".into()));
                    }
                }
                for w in values.windows(2) {
                    if w[1] < w[0] {
                        return Err(RskError::Parameter("table profile must be nondecreasing".into()));
                    }
                }
                Ok(Profile::Table { points, values })
            }
            other => Err(RskError::Parameter(format!("unknown profile type {other}"))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Profile::Power { alpha } if *alpha == 1.0 => "linear".into(),
            Profile::Power { alpha } => format!("power:{alpha}"),
            Profile::LPhi { phi } => match phi {
                PhiFunction::Gauss => "gauss".into(),
                PhiFunction::Boltzmann { beta } => format!("boltzmann:{beta}"),
            },
            Profile::Table { .. } => "table".into(),
        }
    }
}

/// Mean of the L_Φ quadrature cross-check: ∫_a^b dr/L_Φ numerically, used
/// only in tests against the closed form.
pub fn j_lphi_quadrature(phi: &PhiFunction, a: f64, b: f64) -> f64 {
    let p = l_phi_profile(phi.clone());
    integrate_adaptive(&|r| 1.0 / p.eval(r), a, b, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_profile_j_closed_forms() {
        let p = power_profile(0.5).unwrap();
        assert!((p.j(0.25, 1.0) - 1.0).abs() < 1e-14);
        let lin = linear_profile();
        assert!((lin.j((-1.0f64).exp(), 1.0) - 1.0).abs() < 1e-14);
        let john = john_profile(4).unwrap();
        assert_eq!(john, power_profile(0.75).unwrap());
    }

    #[test]
    fn gauss_tail_matches_normal_table() {
        let phi = PhiFunction::Gauss;
        assert!((h_function(&phi, 0.0) - 0.5).abs() < 1e-10);
        assert!((h_function(&phi, 1.0) - 0.158655).abs() < 1e-6);
        assert!(h_function(&phi, 0.5) > h_function(&phi, 1.5));
        // c_phi = 1/sqrt(2 pi)
        assert!((phi.c_phi() - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn f_phi_density_values() {
        let phi = PhiFunction::Gauss;
        // at the median the density is c_phi
        assert!((f_phi(&phi, 0.5) - phi.c_phi()).abs() < 1e-9);
        // at s = H(1.0) the density is the normal density at 1.0
        let target = (-0.5f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((f_phi(&phi, 0.158655) - 0.241971).abs() < 1e-5);
        assert!((f_phi(&phi, h_function(&phi, 1.0)) - target).abs() < 1e-9);
    }

    #[test]
    fn l_phi_gauss_value() {
        let p = l_phi_profile(PhiFunction::Gauss);
        let expect = 0.5 * (2.0 * 4.0f64.ln()).sqrt();
        assert!((p.eval(0.5) - expect).abs() < 1e-12);
        assert!((expect - 0.83255).abs() < 1e-5);
        // boltzmann beta=1 is exactly linear
        let lin = l_phi_profile(PhiFunction::boltzmann(1.0).unwrap());
        for s in [0.01, 0.3, 0.9] {
            assert!((lin.eval(s) - s).abs() < 1e-14);
        }
    }

    #[test]
    fn l_phi_j_closed_form_vs_quadrature() {
        for phi in [
            PhiFunction::Gauss,
            PhiFunction::boltzmann(1.5).unwrap(),
            PhiFunction::boltzmann(2.0).unwrap(),
        ] {
            let p = l_phi_profile(phi.clone());
            for (a, b) in [(1e-6, 0.5), (0.01, 1.0), (0.2, 0.4)] {
                let exact = p.j(a, b);
                let quad = j_lphi_quadrature(&phi, a, b);
                assert!(
                    (exact - quad).abs() < 1e-8 * exact.abs().max(1.0),
                    "{} vs {}",
                    exact,
                    quad
                );
            }
            assert!(p.j(0.0, 0.5).is_infinite());
        }
    }

    #[test]
    fn delta2_sandwich_and_chain() {
        for phi in [
            PhiFunction::Gauss,
            PhiFunction::boltzmann(1.0).unwrap(),
            PhiFunction::boltzmann(1.5).unwrap(),
            PhiFunction::boltzmann(2.0).unwrap(),
        ] {
            let p = l_phi_profile(phi.clone());
            // nondecreasing and sandwiched on (0, 1/2]
            let mut prev = 0.0;
            for i in 1..=1000 {
                let s = 0.5 * i as f64 / 1000.0;
                let v = p.eval(s);
                assert!(v + 1e-12 >= prev, "L_phi not nondecreasing at {s}");
                prev = v;
                let base = s * phi.dphi(phi.phi_inv((1.0 / s).ln().max(0.0)));
                if s <= 0.5 && s < 1.0 {
                    assert!(v >= base - 1e-12);
                    assert!(v <= 2.0 * base + 1e-12);
                }
            }
            // chain inequality at sampled 0 <= t < s
            for k in 1..=30 {
                let s = 0.3 * k as f64;
                for j in 0..k {
                    let t = 0.3 * j as f64;
                    let is = phi.phi_inv(s);
                    let it = phi.phi_inv(t);
                    let mid = 1.0 / phi.dphi(is);
                    assert!(is / (2.0 * s) <= mid + 1e-12);
                    assert!(mid <= (is - it) / (s - t) + 1e-12);
                    assert!((is - it) / (s - t) <= is / s + 1e-12);
                }
            }
        }
    }

    #[test]
    fn model_domain_properties() {
        assert!((model_domain_m(1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        // -M' = M^alpha at alpha = 1/2, by finite differences
        let alpha = 0.5;
        for r in [0.1, 0.5, 1.0, 1.5] {
            let h = 1e-6;
            let d = (model_domain_m(alpha, r + h).unwrap() - model_domain_m(alpha, r - h).unwrap())
                / (2.0 * h);
            let m = model_domain_m(alpha, r).unwrap();
            assert!((-d - m.powf(alpha)).abs() < 1e-6);
        }
        assert!(model_domain_m(0.5, 3.0).is_err());
    }

    #[test]
    fn profiles_nondecreasing_with_lower_bound() {
        let profiles = [
            power_profile(0.5).unwrap(),
            power_profile(0.75).unwrap(),
            linear_profile(),
            l_phi_profile(PhiFunction::Gauss),
            l_phi_profile(PhiFunction::boltzmann(1.5).unwrap()),
        ];
        for p in profiles {
            let mut prev = 0.0;
            for i in 1..=10_000 {
                let s = i as f64 / 10_000.0;
                let v = p.eval(s);
                assert!(v + 1e-12 >= prev, "{} decreasing at {s}", p.label());
                prev = v;
            }
            assert!(p.lower_bound_constant() > 0.0);
        }
    }

    #[test]
    fn json_specs() {
        let p = Profile::from_json(&serde_json::json!({"type":"john","n":4})).unwrap();
        assert_eq!(p, power_profile(0.75).unwrap());
        let p = Profile::from_json(&serde_json::json!({"type":"boltzmann","beta":1.5})).unwrap();
        assert_eq!(p.label(), "boltzmann:1.5");
        let p = Profile::from_json(
            &serde_json::json!({"type":"table","points":[[0.5, 0.3],[1.0, 0.9]]}),
        )
        .unwrap();
        assert!((p.j(0.0, 1.0) - (0.5 / 0.3 + 0.5 / 0.9)).abs() < 1e-12);
        assert!(PhiFunction::Gauss.validate().is_ok());
        assert!(PhiFunction::boltzmann(1.5).unwrap().validate().is_ok());
    }
}
