//! Optimal-target norm constructions over a kernel profile, evaluated
//! through their associate formulas, plus a symbolic resolver reproducing
//! the closed-form target tables for the standard space families.

use serde_json::{json, Value};

use crate::error::{Result, RskError};
use crate::grid::GridFn;
use crate::norms::{
    canonical_noninc_family, conj, eval_norm, young_exp, young_exp_exp, young_power,
    young_power_log, young_table, NormSpec, YoungFunction,
};
use crate::operators::{apply_r, apply_r_m, factorial};
use crate::profiles::{linear_profile, PhiFunction, Profile};
use crate::quad::integrate_adaptive;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Defined through its associate: (m-1)! ‖R^m f*‖_{X'}.
    Full,
    /// The kernel-simplified form t^{m-1}/I(t)^m ∫_0^t f*.
    Sharp,
    /// m-fold iteration of the order-one construction.
    Iterated,
    /// Product-measure form: log-weight against the tilde construction.
    Phi,
    /// The linear-profile construction.
    Tilde,
}

impl Variant {
    pub fn from_str(s: &str) -> Result<Variant> {
        match s {
            "full" => Ok(Variant::Full),
            "sharp" => Ok(Variant::Sharp),
            "iterated" => Ok(Variant::Iterated),
            "phi" => Ok(Variant::Phi),
            "tilde" => Ok(Variant::Tilde),
            other => Err(RskError::Parameter(format!("unknown variant {other}"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::Sharp => "sharp",
            Variant::Iterated => "iterated",
            Variant::Phi => "phi",
            Variant::Tilde => "tilde",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TargetNorm {
    pub base: NormSpec,
    pub profile: Profile,
    pub m: u32,
    pub variant: Variant,
    /// Extra orders stacked on top by iteration (0 = plain construction).
    pub outer: u32,
}

impl TargetNorm {
    pub fn new(base: NormSpec, profile: Profile, m: u32, variant: Variant) -> TargetNorm {
        TargetNorm {
            base,
            profile,
            m,
            variant,
            outer: 0,
        }
    }

    pub fn from_json(v: &Value) -> Result<TargetNorm> {
        let base = NormSpec::from_json(&v["base"])?;
        let profile = Profile::from_json(&v["profile"])?;
        let m = v["m"]
            .as_u64()
            .ok_or_else(|| RskError::Parameter("target needs integer m".into()))?
            as u32;
        let variant = Variant::from_str(v["variant"].as_str().unwrap_or("full"))?;
        Ok(TargetNorm::new(base, profile, m, variant))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.to_json(),
            "profile": self.profile.label(),
            "m": self.m,
            "variant": self.variant.label(),
            "outer": self.outer,
        })
    }

    pub fn label(&self) -> String {
        format!(
            "({})_{{{},{}}}[{}]",
            self.base.label(),
            self.m,
            self.profile.label(),
            self.variant.label()
        )
    }
}

/// The order-h construction with an existing target as base; evaluated via
/// the stacked associate formula. h = 0 is the identity.
pub fn iterate_target(t: &TargetNorm, h: u32) -> TargetNorm {
    let mut out = t.clone();
    out.outer += h;
    out
}

/// The associate norm of the target, by its defining formula. Input is
/// rearranged first, so the value depends only on f*.
pub fn target_assoc_eval(t: &TargetNorm, f: &GridFn) -> Result<f64> {
    let star = f.rearrange_fine();
    if t.outer > 0 {
        let inner = apply_r_m(&t.profile, t.outer, &star);
        let mut flat = t.clone();
        flat.outer = 0;
        return Ok(factorial(t.outer - 1) * target_assoc_eval(&flat, &inner)?);
    }
    let assoc = t.base.associate()?;
    if t.m == 0 {
        return Ok(eval_norm(&assoc, &star));
    }
    match t.variant {
        Variant::Full => {
            let r = apply_r_m(&t.profile, t.m, &star);
            Ok(factorial(t.m - 1) * eval_norm(&assoc, &r))
        }
        Variant::Tilde => {
            let r = apply_r_m(&linear_profile(), t.m, &star);
            Ok(factorial(t.m - 1) * eval_norm(&assoc, &r))
        }
        Variant::Sharp => {
            let m = t.m;
            let profile = t.profile.clone();
            let kernel = GridFn::sample(&star.grid, &|s: f64| {
                let i = profile.eval(s);
                if i == 0.0 {
                    return f64::INFINITY;
                }
                s.powi(m as i32 - 1) / i.powi(m as i32) * star.running_integral(s)
            });
            Ok(eval_norm(&assoc, &kernel))
        }
        Variant::Iterated => {
            let mut g = star;
            for _ in 0..t.m {
                g = apply_r(&t.profile, &g).rearrange();
            }
            Ok(eval_norm(&assoc, &g))
        }
        Variant::Phi => {
            let phi = match &t.profile {
                Profile::LPhi { phi } => phi.clone(),
                _ => {
                    return Err(RskError::Parameter(
                        "phi variant needs a product-measure profile".into(),
                    ))
                }
            };
            let m = t.m;
            let weighted = GridFn::sample(&star.grid, &|s: f64| {
                let l = (2.0 / s).ln();
                star.eval(s) * (phi.phi_inv(l) / l).powi(m as i32)
            });
            let tilde = TargetNorm::new(t.base.clone(), linear_profile(), t.m, Variant::Tilde);
            target_assoc_eval(&tilde, &weighted)
        }
    }
}

/// Both available estimates of ‖f‖ in the target space: a certified lower
/// bound from duality against the canonical test family, and the exact norm
/// of the resolver's closed-form space when one applies.
#[derive(Clone, Debug)]
pub struct TargetValue {
    pub dual_lower: f64,
    pub resolved: Option<SymbolicTarget>,
    pub resolved_value: Option<f64>,
}

pub fn target_norm_eval(t: &TargetNorm, f: &GridFn) -> Result<TargetValue> {
    t.base.associate()?;
    let star = f.rearrange();
    let fine = f.grid.refine_with(&star.grid);
    let mut family = canonical_noninc_family(&fine);
    family.push(star.on_refinement(&fine));
    let fstar = star.on_refinement(&fine);
    let mut sup = 0.0f64;
    for g in &family {
        let denom = target_assoc_eval(t, g)?;
        if !denom.is_finite() || denom <= 0.0 {
            continue;
        }
        let num = fstar.pairing(g);
        if num.is_finite() {
            sup = sup.max(num / denom);
        } else {
            sup = f64::INFINITY;
        }
    }
    let (resolved, resolved_value) = if t.outer == 0 {
        match resolve_target(&t.base, &t.profile, t.m) {
            Ok(sym) => {
                let val = match &sym.verdict {
                    Verdict::Space(spec) => Some(eval_norm(spec, f)),
                    Verdict::LInfinity => Some(eval_norm(
                        &NormSpec::Lebesgue { p: f64::INFINITY },
                        f,
                    )),
                    Verdict::NoTable => None,
                };
                (Some(sym), val)
            }
            Err(_) => (None, None),
        }
    } else {
        (None, None)
    };
    Ok(TargetValue {
        dual_lower: sup,
        resolved,
        resolved_value,
    })
}

/// Resolver outcome: a concrete space, the essentially-bounded verdict, or
/// an honest refusal when the input sits outside the tabulated families.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Space(NormSpec),
    LInfinity,
    NoTable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicTarget {
    pub verdict: Verdict,
    /// Which table row produced the answer. Optimality of the tabulated
    /// targets is class-wise over all domains sharing the profile bound,
    /// not per-domain; the tag records only the rule applied.
    pub rule: String,
}

impl SymbolicTarget {
    fn space(spec: NormSpec, rule: &str) -> Result<SymbolicTarget> {
        spec.validate()?;
        Ok(SymbolicTarget {
            verdict: Verdict::Space(spec),
            rule: rule.into(),
        })
    }

    fn linf(rule: &str) -> SymbolicTarget {
        SymbolicTarget {
            verdict: Verdict::LInfinity,
            rule: rule.into(),
        }
    }

    fn none(rule: &str) -> SymbolicTarget {
        SymbolicTarget {
            verdict: Verdict::NoTable,
            rule: rule.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        let target = match &self.verdict {
            Verdict::Space(s) => s.to_json(),
            Verdict::LInfinity => json!("Linf"),
            Verdict::NoTable => json!("no-table"),
        };
        json!({ "target": target, "rule": self.rule })
    }

    pub fn label(&self) -> String {
        match &self.verdict {
            Verdict::Space(s) => format!("{} [{}]", s.label(), self.rule),
            Verdict::LInfinity => format!("L^inf [{}]", self.rule),
            Verdict::NoTable => format!("no-table [{}]", self.rule),
        }
    }
}

/// Pure lookup of the closed-form target tables. Never extrapolates: inputs
/// outside the tabulated hypotheses come back as a no-table verdict.
pub fn resolve_target(base: &NormSpec, profile: &Profile, m: u32) -> Result<SymbolicTarget> {
    if m == 0 {
        return SymbolicTarget::space(base.clone(), "order-zero-identity");
    }
    match profile {
        Profile::Power { alpha } if *alpha < 1.0 => resolve_power(base, *alpha, m),
        Profile::Power { .. } => resolve_linear(base, m),
        Profile::LPhi { phi } => {
            let beta = match phi {
                PhiFunction::Gauss => 2.0,
                PhiFunction::Boltzmann { beta } => *beta,
            };
            resolve_boltzmann(base, beta, m)
        }
        Profile::Table { .. } => Ok(SymbolicTarget::none("profile-not-tabulated")),
    }
}

/// Snaps a computed exponent to the nearest 1e-9 grid point so that exact
/// rational outcomes of the arithmetic print cleanly.
fn snap(x: f64) -> f64 {
    if !x.is_finite() || x.abs() > 1e9 {
        return x;
    }
    let r = (x * 1e9).round() / 1e9;
    if (r - x).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

fn resolve_power(base: &NormSpec, alpha: f64, m: u32) -> Result<SymbolicTarget> {
    let mu = m as f64 * (1.0 - alpha);
    match base {
        NormSpec::Lebesgue { p } => {
            if mu >= 1.0 {
                return Ok(SymbolicTarget::linf("power-supercritical-order"));
            }
            let e = mu * p;
            if e < 1.0 {
                SymbolicTarget::space(
                    NormSpec::Lebesgue { p: snap(p / (1.0 - e)) },
                    "power-lebesgue-subcritical",
                )
            } else if (e - 1.0).abs() < 1e-12 {
                // borderline exponent: the r.i.-optimal space on this row
                SymbolicTarget::space(
                    NormSpec::LorentzZygmund {
                        p: f64::INFINITY,
                        q: *p,
                        alpha: -1.0,
                    },
                    "power-lebesgue-critical",
                )
            } else {
                Ok(SymbolicTarget::linf("power-lebesgue-supercritical"))
            }
        }
        NormSpec::Lorentz { p, q } => {
            if mu >= 1.0 || p.is_infinite() {
                return Ok(SymbolicTarget::linf("power-lorentz-supercritical"));
            }
            let e = mu * p;
            if e < 1.0 {
                SymbolicTarget::space(
                    NormSpec::Lorentz {
                        p: snap(p / (1.0 - e)),
                        q: *q,
                    },
                    "power-lorentz-subcritical",
                )
            } else if (e - 1.0).abs() < 1e-12 {
                if *q > 1.0 {
                    SymbolicTarget::space(
                        NormSpec::LorentzZygmund {
                            p: f64::INFINITY,
                            q: *q,
                            alpha: -1.0,
                        },
                        "power-lorentz-critical",
                    )
                } else {
                    Ok(SymbolicTarget::linf("power-lorentz-critical-q1"))
                }
            } else {
                Ok(SymbolicTarget::linf("power-lorentz-supercritical"))
            }
        }
        NormSpec::LorentzZygmund { p, q, alpha: a } => {
            if *a == 0.0 {
                return resolve_power(&NormSpec::Lorentz { p: *p, q: *q }, alpha, m);
            }
            if p != q || p.is_infinite() {
                return Ok(SymbolicTarget::none("power-lz-offscale"));
            }
            if mu >= 1.0 {
                return Ok(SymbolicTarget::linf("power-supercritical-order"));
            }
            let e = mu * p;
            let beta = a * p;
            if e < 1.0 {
                SymbolicTarget::space(
                    NormSpec::LorentzZygmund {
                        p: snap(p / (1.0 - e)),
                        q: *p,
                        alpha: *a,
                    },
                    "power-logscale-subcritical",
                )
            } else if (e - 1.0).abs() < 1e-12 {
                let crit = (1.0 - mu) / mu;
                if beta < crit - 1e-12 {
                    SymbolicTarget::space(
                        NormSpec::LorentzZygmund {
                            p: f64::INFINITY,
                            q: snap(1.0 / mu),
                            alpha: mu * beta - 1.0,
                        },
                        "power-logscale-critical",
                    )
                } else if beta > crit + 1e-12 {
                    Ok(SymbolicTarget::linf("power-logscale-overcritical"))
                } else {
                    SymbolicTarget::space(
                        NormSpec::Glz {
                            p: f64::INFINITY,
                            q: snap(1.0 / mu),
                            alpha: -mu,
                            beta: -1.0,
                        },
                        "power-logscale-borderline",
                    )
                }
            } else {
                Ok(SymbolicTarget::linf("power-logscale-supercritical"))
            }
        }
        NormSpec::Orlicz { young } => {
            if mu >= 1.0 {
                return Ok(SymbolicTarget::linf("power-supercritical-order"));
            }
            let (p, beta) = match young {
                YoungFunction::Power { p } => (*p, 0.0),
                YoungFunction::PowerLog { p, beta } => (*p, *beta),
                YoungFunction::Exp { .. } | YoungFunction::ExpExp { .. } => {
                    return Ok(SymbolicTarget::linf("power-orlicz-exponential"));
                }
                YoungFunction::Table { .. } => {
                    return Ok(SymbolicTarget::none("power-orlicz-table"));
                }
            };
            let e = mu * p;
            if e < 1.0 {
                let spec = if beta == 0.0 {
                    NormSpec::Orlicz {
                        young: young_power(snap(p / (1.0 - e)))?,
                    }
                } else {
                    NormSpec::Orlicz {
                        young: young_power_log(snap(p / (1.0 - e)), snap(beta / (1.0 - e)))?,
                    }
                };
                SymbolicTarget::space(spec, "power-orlicz-subcritical")
            } else if (e - 1.0).abs() < 1e-12 {
                let crit = (1.0 - mu) / mu;
                if beta < crit - 1e-12 {
                    SymbolicTarget::space(
                        NormSpec::Orlicz {
                            young: young_exp(1.0 / (1.0 - (1.0 + beta) * mu))?,
                        },
                        "power-orlicz-critical",
                    )
                } else if beta > crit + 1e-12 {
                    Ok(SymbolicTarget::linf("power-orlicz-overcritical"))
                } else {
                    SymbolicTarget::space(
                        NormSpec::Orlicz {
                            young: young_exp_exp(1.0 / (1.0 - mu))?,
                        },
                        "power-orlicz-borderline",
                    )
                }
            } else {
                Ok(SymbolicTarget::linf("power-orlicz-supercritical"))
            }
        }
        _ => Ok(SymbolicTarget::none("base-family-not-tabulated")),
    }
}

fn resolve_linear(base: &NormSpec, m: u32) -> Result<SymbolicTarget> {
    match base {
        NormSpec::Lebesgue { p } if p.is_finite() => {
            SymbolicTarget::space(base.clone(), "linear-lebesgue")
        }
        NormSpec::Lebesgue { .. } => SymbolicTarget::space(
            NormSpec::Orlicz {
                young: young_exp(1.0 / m as f64)?,
            },
            "linear-sup-exponential",
        ),
        NormSpec::Lorentz { p, .. } if p.is_finite() => {
            SymbolicTarget::space(base.clone(), "linear-lorentz")
        }
        NormSpec::Lorentz { .. } => SymbolicTarget::space(
            NormSpec::Orlicz {
                young: young_exp(1.0 / m as f64)?,
            },
            "linear-sup-exponential",
        ),
        NormSpec::LorentzZygmund { p, q, alpha } if *alpha == 0.0 => {
            resolve_linear(&NormSpec::Lorentz { p: *p, q: *q }, m)
        }
        NormSpec::Orlicz { young } => match young {
            YoungFunction::Power { p } => {
                SymbolicTarget::space(NormSpec::Lebesgue { p: *p }, "linear-lebesgue")
            }
            _ => Ok(SymbolicTarget::none("linear-orlicz-offscale")),
        },
        _ => Ok(SymbolicTarget::none("base-family-not-tabulated")),
    }
}

fn resolve_boltzmann(base: &NormSpec, beta: f64, m: u32) -> Result<SymbolicTarget> {
    let mf = m as f64;
    let shift_finite = mf * (beta - 1.0) / beta;
    let shift_inf = -mf / beta;
    let lz = |p: f64, q: f64, a: f64| -> (f64, f64, f64) {
        if p.is_finite() {
            (p, q, a + shift_finite)
        } else {
            (p, q, a + shift_inf)
        }
    };
    let shifted = |p: f64, q: f64, a: f64, rule: &str| -> Result<SymbolicTarget> {
        let (p2, q2, a2) = lz(p, q, a);
        if a2 == 0.0 {
            SymbolicTarget::space(NormSpec::Lorentz { p: p2, q: q2 }, rule)
        } else {
            SymbolicTarget::space(
                NormSpec::LorentzZygmund {
                    p: p2,
                    q: q2,
                    alpha: a2,
                },
                rule,
            )
        }
    };
    match base {
        NormSpec::Lebesgue { p } => shifted(*p, *p, 0.0, "measure-logshift-lebesgue"),
        NormSpec::Lorentz { p, q } => shifted(*p, *q, 0.0, "measure-logshift-lorentz"),
        NormSpec::LorentzZygmund { p, q, alpha } => {
            shifted(*p, *q, *alpha, "measure-logshift-lz")
        }
        NormSpec::Orlicz { young } => match young {
            YoungFunction::Power { p } => SymbolicTarget::space(
                NormSpec::LorentzZygmund {
                    p: *p,
                    q: *p,
                    alpha: shift_finite,
                },
                "measure-logshift-lebesgue",
            ),
            YoungFunction::Exp { gamma, .. } => SymbolicTarget::space(
                NormSpec::Orlicz {
                    young: young_exp(beta * gamma / (beta + mf * gamma))?,
                },
                "measure-logshift-exponential",
            ),
            _ => Ok(SymbolicTarget::none("measure-orlicz-offscale")),
        },
        _ => Ok(SymbolicTarget::none("base-family-not-tabulated")),
    }
}

/// Verdict of the boundedness-into-L^∞ test, with the evidence.
#[derive(Clone, Debug)]
pub struct LinfCertificate {
    pub finite: bool,
    /// Numeric norm of the kernel when finite (grid-truncated).
    pub value: Option<f64>,
    pub diagnosis: String,
}

/// Decides whether the order-m construction lands in L^∞ by measuring the
/// associate norm of the kernel s ↦ J(0,s)^{m-1}/I(s).
pub fn linf_criterion(base: &NormSpec, profile: &Profile, m: u32) -> Result<LinfCertificate> {
    let assoc = base.associate()?;
    match profile {
        Profile::Power { alpha } if *alpha < 1.0 => {
            // J(0,s) = s^{1-α}/(1-α), so the kernel is a pure power of s.
            let e = m as f64 * (1.0 - alpha) - 1.0;
            let finite = power_in_space(e, &assoc);
            let value = if finite {
                let scale = (1.0 - alpha).powi(-(m as i32 - 1)) / factorial(m - 1);
                let grid = crate::grid::Grid::geometric(16, 2f64.powi(-40));
                let kernel = GridFn::sample(&grid, &|s: f64| scale * s.powf(e));
                Some(eval_norm(&assoc, &kernel))
            } else {
                None
            };
            Ok(LinfCertificate {
                finite,
                value,
                diagnosis: format!("kernel ~ s^{e:.6} against {}", assoc.label()),
            })
        }
        _ => {
            // J(0,s) diverges for the linear and product-measure profiles,
            // and even at m = 1 the kernel 1/I fails local integrability
            // at 0, so no r.i. norm of it is finite.
            Ok(LinfCertificate {
                finite: false,
                value: None,
                diagnosis: "cumulative kernel integral diverges at 0".into(),
            })
        }
    }
}

/// Whether ‖s^e‖ is finite in the given space, by exponent analysis of the
/// defining weight (boundary cases decided by the log index).
fn power_in_space(e: f64, spec: &NormSpec) -> bool {
    let inv = |p: f64| if p.is_infinite() { 0.0 } else { 1.0 / p };
    match spec {
        NormSpec::Lebesgue { p } => {
            if p.is_infinite() {
                e >= 0.0
            } else {
                e * p > -1.0
            }
        }
        NormSpec::Lorentz { p, q } => power_in_lz(e, inv(*p), *q, 0.0),
        NormSpec::LorentzZygmund { p, q, alpha } => power_in_lz(e, inv(*p), *q, *alpha),
        NormSpec::LzStar { q, alpha, .. } => {
            // the averaged profile of s^e is finite only for e > -1, and is
            // again a power there
            e > -1.0 && power_in_lz(e, 1.0, *q, *alpha)
        }
        NormSpec::Glz { p, q, alpha, .. } => {
            // the iterated log factor never decides finiteness strictly
            // inside or outside the boundary; on the boundary fall back to
            // the log index alone (β only refines ties we do not tabulate)
            power_in_lz(e, inv(*p), *q, *alpha)
        }
        NormSpec::Orlicz { young } => match young.lz_equivalent() {
            Some(eq) => power_in_space(e, &eq),
            None => false,
        },
        NormSpec::OrliczLorentz { .. } => false,
    }
}

fn power_in_lz(e: f64, c: f64, q: f64, alpha: f64) -> bool {
    // ‖ s^{c - 1/q + e} log^α(2/s) ‖_q over (0,1)
    let total = c + e;
    if q.is_finite() {
        if total > 1e-14 {
            true
        } else if total < -1e-14 {
            false
        } else {
            q * alpha < -1.0
        }
    } else if total > 1e-14 {
        true
    } else if total < -1e-14 {
        false
    } else {
        alpha <= 0.0
    }
}

/// Outcome of the Young-function pushforward: a concrete target gauge, or
/// the essentially-bounded verdict when the tail integral converges.
#[derive(Clone, Debug)]
pub enum OrliczVerdict {
    Target(YoungFunction),
    LInfinity,
}

/// Transforms a Young function A into the target gauge of the order-m
/// power-profile construction: A_t = A ∘ H^{-1} with
/// H(s) = (∫_0^s (t/A(t))^ρ dt)^{1-μ}, μ = m(1-α), ρ = μ/(1-μ).
/// A is treated as linear below a small threshold (an equivalent-norm
/// modification that makes the integral converge at 0).
pub fn orlicz_transform(a: &YoungFunction, alpha: f64, m: u32) -> Result<OrliczVerdict> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(RskError::Parameter(format!(
            "power exponent out of [0,1): {alpha}"
        )));
    }
    let mu = m as f64 * (1.0 - alpha);
    if mu >= 1.0 {
        return Ok(OrliczVerdict::LInfinity);
    }
    let rho = mu / (1.0 - mu);
    if tail_integral_converges(a, rho) {
        return Ok(OrliczVerdict::LInfinity);
    }
    // geometric t-grid; below t0 the integrand is frozen at its t0 value
    // (linear modification of A near 0)
    let t0 = 1e-6f64;
    let g = |t: f64| -> f64 {
        let t = t.max(t0);
        let v = a.eval(t);
        if v <= 0.0 {
            return 0.0;
        }
        (t / v).powf(rho)
    };
    let mut ts = vec![0.0];
    let mut hs = vec![0.0];
    let mut cum = t0 * g(t0);
    let mut t = t0;
    let steps_per_octave = 8;
    let ratio = 2f64.powf(1.0 / steps_per_octave as f64);
    while t < 2f64.powi(62) {
        let next = t * ratio;
        cum += integrate_adaptive(&g, t, next, 1e-10);
        ts.push(next);
        hs.push(cum.powf(1.0 - mu));
        t = next;
    }
    // sample A_t(u) = A(H^{-1}(u)) on a geometric u-grid inside the range
    // of H, inverting by linear interpolation in log-log scale
    let h_lo = hs[1];
    let h_hi = hs[hs.len() - 1] / 2.0;
    let mut us = vec![0.0];
    let mut vals = vec![0.0];
    let n_samples = 600;
    let lr = (h_hi / h_lo).ln() / (n_samples - 1) as f64;
    let mut prev_slope = 0.0;
    let mut prev = (0.0, 0.0);
    for k in 0..n_samples {
        let u = h_lo * (lr * k as f64).exp();
        let i = hs.partition_point(|&h| h < u).min(hs.len() - 1).max(2);
        let (h0, h1) = (hs[i - 1], hs[i]);
        let (x0, x1) = (ts[i - 1], ts[i]);
        let w = if h1 > h0 { (u - h0) / (h1 - h0) } else { 0.0 };
        let tinv = x0 + w * (x1 - x0);
        let v = a.eval(tinv);
        // enforce convexity of the tabulated gauge by slope clamping
        let slope = (v - prev.1) / (u - prev.0);
        let v = if slope < prev_slope {
            prev.1 + prev_slope * (u - prev.0)
        } else {
            prev_slope = slope;
            v
        };
        us.push(u);
        vals.push(v.max(prev.1));
        prev = (u, *vals.last().unwrap());
    }
    Ok(OrliczVerdict::Target(young_table(us, vals)?))
}

/// Whether ∫^∞ (t/A(t))^ρ dt converges. Preset gauges are decided in
/// closed form; tabulated gauges use their terminal (linear) extension,
/// for which the integrand is asymptotically constant, hence divergent.
fn tail_integral_converges(a: &YoungFunction, rho: f64) -> bool {
    match a {
        YoungFunction::Power { p } => (p - 1.0) * rho > 1.0,
        YoungFunction::PowerLog { p, beta } => {
            let e = (p - 1.0) * rho;
            if e > 1.0 + 1e-12 {
                true
            } else if e < 1.0 - 1e-12 {
                false
            } else {
                beta * rho > 1.0
            }
        }
        YoungFunction::Exp { .. } | YoungFunction::ExpExp { .. } => true,
        YoungFunction::Table { .. } => false,
    }
}

/// Dual inequality behind the boundedness of the kernel operator: the
/// associate norm of R^m g never exceeds the target associate of g divided
/// by (m-1)!.
pub fn dual_inequality_gap(t: &TargetNorm, g: &GridFn) -> Result<f64> {
    let assoc = t.base.associate()?;
    let lhs = eval_norm(&assoc, &apply_r_m(&t.profile, t.m, g));
    let rhs = target_assoc_eval(t, g)? / factorial(t.m - 1);
    Ok(lhs - rhs * (1.0 + 1e-9))
}

/// Exponent of the conjugate weight, exposed for the classification tests.
pub fn conjugate_exponent(p: f64) -> f64 {
    conj(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::norms::{young_exp, NormSpec};
    use crate::profiles::{l_phi_profile, power_profile, PhiFunction};

    fn grid() -> Grid {
        Grid::geometric(8, 2f64.powi(-30))
    }

    #[test]
    fn full_m1_linear_l2_indicator() {
        let b = 0.25;
        let f = GridFn::indicator(&grid(), b);
        let t = TargetNorm::new(
            NormSpec::lebesgue(2.0).unwrap(),
            linear_profile(),
            1,
            Variant::Full,
        );
        let got = target_assoc_eval(&t, &f).unwrap();
        // ‖f**‖_2 with f** = 1 on (0,b), b/s after: b + b²(1/b - 1) = 2b - b².
        // Left-endpoint discretization biases the tail upward by O(cell width).
        let want = (2.0 * b - b * b).sqrt();
        assert!((got - want).abs() < 0.03 * want, "{got} vs {want}");
    }

    #[test]
    fn full_equals_iterated_at_order_one() {
        let f = GridFn::sample(&grid(), &|s: f64| s.powf(-0.3));
        for spec in [NormSpec::lebesgue(2.0).unwrap(), NormSpec::lorentz(2.0, 1.0).unwrap()] {
            let full = TargetNorm::new(spec.clone(), power_profile(0.5).unwrap(), 1, Variant::Full);
            let iter = TargetNorm::new(spec, power_profile(0.5).unwrap(), 1, Variant::Iterated);
            let a = target_assoc_eval(&full, &f).unwrap();
            let b = target_assoc_eval(&iter, &f).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn phi_variant_reduces_to_tilde_for_linear_weight() {
        // Φ(t) = t makes the log weight identically one
        let phi = PhiFunction::boltzmann(1.0).unwrap();
        let f = GridFn::indicator(&grid(), 0.3);
        for m in [1u32, 2] {
            let p = TargetNorm::new(
                NormSpec::lebesgue(2.0).unwrap(),
                l_phi_profile(phi.clone()),
                m,
                Variant::Phi,
            );
            let t = TargetNorm::new(
                NormSpec::lebesgue(2.0).unwrap(),
                linear_profile(),
                m,
                Variant::Tilde,
            );
            let a = target_assoc_eval(&p, &f).unwrap();
            let b = target_assoc_eval(&t, &f).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.max(1.0), "m={m}: {a} vs {b}");
        }
    }

    #[test]
    fn full_vs_sharp_band_for_power_profile() {
        let f = GridFn::sample(&grid(), &|s: f64| s.powf(-0.25));
        for alpha in [0.5, 0.75] {
            for m in [1u32, 2] {
                let full = TargetNorm::new(
                    NormSpec::lebesgue(2.0).unwrap(),
                    power_profile(alpha).unwrap(),
                    m,
                    Variant::Full,
                );
                let sharp = TargetNorm::new(
                    NormSpec::lebesgue(2.0).unwrap(),
                    power_profile(alpha).unwrap(),
                    m,
                    Variant::Sharp,
                );
                let a = target_assoc_eval(&full, &f).unwrap();
                let b = target_assoc_eval(&sharp, &f).unwrap();
                let r = a / b;
                assert!(r > 1.0 / 64.0 && r < 64.0, "alpha={alpha} m={m} ratio {r}");
            }
        }
    }

    #[test]
    fn resolver_lorentz_subcritical_row() {
        let got = resolve_target(
            &NormSpec::lorentz(4.0 / 3.0, 1.0).unwrap(),
            &power_profile(0.75).unwrap(),
            2,
        )
        .unwrap();
        match got.verdict {
            Verdict::Space(NormSpec::Lorentz { p, q }) => {
                assert!((p - 4.0).abs() < 1e-12 && q == 1.0, "p={p} q={q}");
            }
            other => panic!("wrong verdict {other:?}"),
        }
    }

    #[test]
    fn resolver_linear_sup_row() {
        for m in 1u32..=3 {
            let got = resolve_target(
                &NormSpec::lebesgue(f64::INFINITY).unwrap(),
                &linear_profile(),
                m,
            )
            .unwrap();
            match got.verdict {
                Verdict::Space(NormSpec::Orlicz { ref young }) => match young {
                    YoungFunction::Exp { gamma, .. } => {
                        assert!((gamma - 1.0 / m as f64).abs() < 1e-12)
                    }
                    other => panic!("wrong gauge {other:?}"),
                },
                other => panic!("wrong verdict {other:?}"),
            }
        }
    }

    #[test]
    fn resolver_gauss_rows() {
        let gauss = l_phi_profile(PhiFunction::Gauss);
        // L^p picks up a log of index m/2 on its own scale
        let got = resolve_target(&NormSpec::lebesgue(2.0).unwrap(), &gauss, 2).unwrap();
        assert_eq!(
            got.verdict,
            Verdict::Space(NormSpec::LorentzZygmund {
                p: 2.0,
                q: 2.0,
                alpha: 1.0
            })
        );
        // exponential gauge shifts as γ ↦ 2γ/(2+mγ)
        let got = resolve_target(
            &NormSpec::Orlicz {
                young: young_exp(2.0).unwrap(),
            },
            &gauss,
            1,
        )
        .unwrap();
        match got.verdict {
            Verdict::Space(NormSpec::Orlicz { ref young }) => match young {
                YoungFunction::Exp { gamma, .. } => assert!((gamma - 1.0).abs() < 1e-12),
                other => panic!("wrong gauge {other:?}"),
            },
            other => panic!("wrong verdict {other:?}"),
        }
        // the sup norm lands on the exponential of index 2/m
        let got = resolve_target(&NormSpec::lebesgue(f64::INFINITY).unwrap(), &gauss, 4).unwrap();
        match got.verdict {
            Verdict::Space(NormSpec::LorentzZygmund { p, alpha, .. }) => {
                assert!(p.is_infinite());
                assert!((alpha + 2.0).abs() < 1e-12);
            }
            other => panic!("wrong verdict {other:?}"),
        }
    }

    #[test]
    fn resolver_critical_q1_is_sup() {
        // exponent exactly critical with first-index one
        let got = resolve_target(
            &NormSpec::lorentz(2.0, 1.0).unwrap(),
            &power_profile(0.75).unwrap(),
            2,
        )
        .unwrap();
        assert_eq!(got.verdict, Verdict::LInfinity);
    }

    #[test]
    fn resolver_refuses_offscale_input() {
        let got = resolve_target(
            &NormSpec::lorentz_zygmund(2.0, 3.0, 1.0).unwrap(),
            &power_profile(0.5).unwrap(),
            1,
        )
        .unwrap();
        assert_eq!(got.verdict, Verdict::NoTable);
    }

    #[test]
    fn linf_classification_power_profile() {
        // bounded kernel: order large enough for the profile
        let c = linf_criterion(
            &NormSpec::lebesgue(1.0).unwrap(),
            &power_profile(0.5).unwrap(),
            3,
        )
        .unwrap();
        assert!(c.finite, "{}", c.diagnosis);
        // linear profile never reaches the sup norm from a finite exponent
        let c = linf_criterion(&NormSpec::lebesgue(2.0).unwrap(), &linear_profile(), 2).unwrap();
        assert!(!c.finite);
        // subcritical exponent with a large first index clears the bar
        let c = linf_criterion(
            &NormSpec::lorentz(8.0, 2.0).unwrap(),
            &power_profile(0.75).unwrap(),
            1,
        )
        .unwrap();
        assert!(c.finite, "{}", c.diagnosis);
        // and the strictly subcritical one does not
        let c = linf_criterion(
            &NormSpec::lebesgue(2.0).unwrap(),
            &power_profile(0.75).unwrap(),
            1,
        )
        .unwrap();
        assert!(!c.finite);
    }

    #[test]
    fn orlicz_transform_power_slope() {
        // quadratic gauge, μ = 1/4: target slope p/(1-pμ) = 4
        let a = young_power(2.0).unwrap();
        match orlicz_transform(&a, 0.75, 1).unwrap() {
            OrliczVerdict::Target(b) => {
                let (t1, t2) = (2f64.powi(20), 2f64.powi(26));
                let slope = (b.eval(t2).ln() - b.eval(t1).ln()) / (t2.ln() - t1.ln());
                assert!((slope - 4.0).abs() < 0.2, "slope {slope}");
            }
            OrliczVerdict::LInfinity => panic!("expected a target gauge"),
        }
    }

    #[test]
    fn orlicz_transform_convergent_tail_is_sup() {
        // p μ > 1 forces the essentially-bounded verdict
        let a = young_power(3.0).unwrap();
        match orlicz_transform(&a, 0.5, 1).unwrap() {
            OrliczVerdict::LInfinity => {}
            OrliczVerdict::Target(_) => panic!("expected sup verdict"),
        }
    }

    #[test]
    fn iteration_matches_direct_construction() {
        let f = GridFn::indicator(&grid(), 0.2);
        let base = TargetNorm::new(
            NormSpec::lebesgue(1.0).unwrap(),
            power_profile(0.5).unwrap(),
            1,
            Variant::Full,
        );
        let stacked = iterate_target(&base, 1);
        let direct = TargetNorm::new(
            NormSpec::lebesgue(1.0).unwrap(),
            power_profile(0.5).unwrap(),
            2,
            Variant::Full,
        );
        let a = target_assoc_eval(&stacked, &f).unwrap();
        let b = target_assoc_eval(&direct, &f).unwrap();
        let r = a / b;
        assert!(r > 1.0 / 64.0 && r < 64.0, "ratio {r}");
        // zero extra orders is the identity
        let same = iterate_target(&base, 0);
        let c = target_assoc_eval(&same, &f).unwrap();
        let d = target_assoc_eval(&base, &f).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn norm_eval_monotone_and_finite_on_constants() {
        let t = TargetNorm::new(
            NormSpec::lebesgue(2.0).unwrap(),
            power_profile(0.5).unwrap(),
            1,
            Variant::Full,
        );
        let one = GridFn::constant(grid(), 1.0);
        let half = GridFn::constant(grid(), 0.5);
        let v1 = target_norm_eval(&t, &one).unwrap();
        let v2 = target_norm_eval(&t, &half).unwrap();
        assert!(v1.dual_lower.is_finite() && v1.dual_lower > 0.0);
        assert!(v2.dual_lower <= v1.dual_lower * (1.0 + 1e-12));
        assert!(v1.resolved.is_some());
        assert!(v1.resolved_value.unwrap().is_finite());
    }

    #[test]
    fn dual_inequality_holds_on_samples() {
        let t = TargetNorm::new(
            NormSpec::lebesgue(2.0).unwrap(),
            power_profile(0.5).unwrap(),
            2,
            Variant::Full,
        );
        for g in [
            GridFn::indicator(&grid(), 0.4),
            GridFn::sample(&grid(), &|s: f64| s.powf(-0.2)),
        ] {
            let gap = dual_inequality_gap(&t, &g).unwrap();
            assert!(gap <= 1e-7, "gap {gap}");
        }
    }
}
