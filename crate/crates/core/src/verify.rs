//! Verification harness: seeded test families, operator-norm lower bounds
//! by duality, an equivalence-ratio engine with a refinement-stability
//! protocol, and a registry of named checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, RskError};
use crate::grid::{Grid, GridFn};
use crate::norms::{
    canonical_noninc_family, down_dual_norm, eval_norm, young_exp, young_power_log, NormSpec,
};
use crate::operators::{
    apply_g_m, apply_h_m, apply_r, apply_r_m, compose_h, factorial, h_m_indicator_closed_form,
    pairing_eval, HmEval, PmPhiEval, RmEval,
};
use crate::profiles::{f_phi, l_phi_profile, linear_profile, power_profile, PhiFunction, Profile};
use crate::quad::integrate_adaptive;
use crate::targets::{
    iterate_target, linf_criterion, resolve_target, target_assoc_eval, TargetNorm, Variant,
    Verdict,
};

#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub id: String,
    pub f: GridFn,
    pub noninc: bool,
}

/// Deterministic test family: octave indicators, integrable power and
/// log-power singularities, random nonincreasing staircases, and random
/// oscillating step functions, all reproducible from the seed.
#[derive(Clone, Debug)]
pub struct TestFamily {
    pub seed: u64,
    pub members: Vec<FamilyMember>,
}

impl TestFamily {
    pub fn generate(grid: &Grid, seed: u64, size: usize) -> TestFamily {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut members: Vec<FamilyMember> = Vec::new();
        let push = |id: String, f: GridFn, noninc: bool, members: &mut Vec<FamilyMember>| {
            if members.len() < size {
                members.push(FamilyMember { id, f, noninc });
            }
        };
        let mut k = 1;
        while 2f64.powi(-k) >= grid.points[1] && members.len() < size / 4 {
            push(
                format!("ind-2^-{k}"),
                GridFn::indicator(grid, 2f64.powi(-k)),
                true,
                &mut members,
            );
            k += 2;
        }
        for theta in [0.1, 0.25, 0.4, 0.6, 0.75, 0.9] {
            push(
                format!("pow-{theta}"),
                GridFn::sample(grid, &|s| s.powf(-theta)),
                true,
                &mut members,
            );
        }
        for (theta, gamma) in [(0.0, 1.0), (0.0, 3.0), (0.3, 1.5), (0.5, 0.5)] {
            push(
                format!("logpow-{theta}-{gamma}"),
                GridFn::sample(grid, &|s| s.powf(-theta) * (2.0 / s).ln().powf(gamma)),
                true,
                &mut members,
            );
        }
        push(
            "const".into(),
            GridFn::constant(grid.clone(), 1.0),
            true,
            &mut members,
        );
        let n = grid.n_cells();
        let mut i = 0;
        while members.len() < size {
            let mut vals: Vec<f64> = (0..n)
                .map(|_| -(rng.gen::<f64>().max(1e-12)).ln())
                .collect();
            if i % 3 != 2 {
                // descending sorted exponentials: nonincreasing staircase
                vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
                push(
                    format!("step-{i}"),
                    GridFn::new(grid.clone(), vals).unwrap(),
                    true,
                    &mut members,
                );
            } else {
                push(
                    format!("osc-{i}"),
                    GridFn::new(grid.clone(), vals).unwrap(),
                    false,
                    &mut members,
                );
            }
            i += 1;
        }
        TestFamily { seed, members }
    }

    pub fn nonincreasing(&self) -> Vec<&FamilyMember> {
        self.members.iter().filter(|m| m.noninc).collect()
    }
}

/// Members tuned to the divergence threshold of the space: powers just
/// inside the first index and critical powers with log corrections just
/// inside the secondary index. Deeper levels press closer to the threshold.
pub fn near_extremal_family(spec: &NormSpec, grid: &Grid, levels: u32) -> Vec<FamilyMember> {
    let (p, q) = match spec {
        NormSpec::Lebesgue { p } => (*p, *p),
        NormSpec::Lorentz { p, q } => (*p, *q),
        NormSpec::LorentzZygmund { p, q, .. } => (*p, *q),
        _ => return Vec::new(),
    };
    if !p.is_finite() {
        return Vec::new();
    }
    let mut fam = Vec::new();
    for k in 1..=levels {
        let eps = 2f64.powi(-(k as i32));
        let theta = 1.0 / p - eps;
        if theta > 0.0 {
            fam.push(FamilyMember {
                id: format!("edge-pow-{k}"),
                f: GridFn::sample(grid, &|s| s.powf(-theta)),
                noninc: true,
            });
        }
        if q.is_finite() {
            let gamma = 1.0 / q + eps;
            fam.push(FamilyMember {
                id: format!("edge-logpow-{k}"),
                f: GridFn::sample(grid, &|s| s.powf(-1.0 / p) * (2.0 / s).ln().powf(-gamma)),
                noninc: true,
            });
        }
    }
    fam
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    H,
    R,
}

#[derive(Clone, Debug)]
pub struct KernelOp {
    pub kind: KernelKind,
    pub profile: Profile,
    pub m: u32,
}

impl KernelOp {
    pub fn h(profile: Profile, m: u32) -> KernelOp {
        KernelOp {
            kind: KernelKind::H,
            profile,
            m,
        }
    }

    pub fn apply(&self, f: &GridFn) -> GridFn {
        let g = match self.kind {
            KernelKind::H => apply_h_m(&self.profile, self.m, f),
            KernelKind::R => apply_r_m(&self.profile, self.m, f),
        };
        clip_leading_inf(g)
    }
}

/// Zeroes any non-finite leading samples (the image can blow up at the
/// origin while still belonging to the norm; truncating below the first
/// finite sample only lowers the norm, so lower-bound estimates stay valid).
fn clip_leading_inf(mut g: GridFn) -> GridFn {
    for v in g.values.iter_mut() {
        if v.is_finite() {
            break;
        }
        *v = 0.0;
    }
    g
}

/// max over the family of ‖Tf‖_Y / ‖f‖_X: a certified lower bound for the
/// operator norm, with the witness id.
pub fn op_norm_lower(
    op: &KernelOp,
    x: &NormSpec,
    y: &NormSpec,
    members: &[FamilyMember],
) -> Result<(f64, String)> {
    if members.is_empty() {
        return Err(RskError::Parameter("empty test family".into()));
    }
    let mut best = 0.0f64;
    let mut arg = String::new();
    for mem in members {
        let denom = eval_norm(x, &mem.f);
        if !denom.is_finite() || denom == 0.0 {
            continue;
        }
        let num = eval_norm(y, &op.apply(&mem.f));
        let r = num / denom;
        if r > best {
            best = r;
            arg = mem.id.clone();
        }
    }
    Ok((best, arg))
}

/// Second lower bound on the same operator norm, through the associate
/// operator: max over the family of ‖R^m g*‖_{X'} / ‖g‖_{Y'}.
pub fn op_norm_dual(
    op: &KernelOp,
    x: &NormSpec,
    y: &NormSpec,
    members: &[FamilyMember],
) -> Result<(f64, String)> {
    if members.is_empty() {
        return Err(RskError::Parameter("empty test family".into()));
    }
    let xp = x.associate()?;
    let yp = y.associate()?;
    let mut best = 0.0f64;
    let mut arg = String::new();
    for mem in members {
        let denom = eval_norm(&yp, &mem.f);
        if !denom.is_finite() || denom == 0.0 {
            continue;
        }
        let num = eval_norm(
            &xp,
            &clip_leading_inf(apply_r_m(&op.profile, op.m, &mem.f.rearrange_fine())),
        );
        let r = num / denom;
        if r > best {
            best = r;
            arg = mem.id.clone();
        }
    }
    Ok((best, arg))
}

/// Ratio of the operator-norm bound over the full family to the bound over
/// its nonincreasing subfamily; the restriction theorem says the two
/// operator norms are comparable.
pub fn nonincreasing_reduction_check(
    profile: &Profile,
    m: u32,
    x: &NormSpec,
    y: &NormSpec,
    fam: &TestFamily,
    cfg: &SuiteConfig,
) -> Result<RatioReport> {
    let op = KernelOp::h(profile.clone(), m);
    let (all, arg_all) = op_norm_lower(&op, x, y, &fam.members)?;
    let noninc: Vec<FamilyMember> = fam.nonincreasing().into_iter().cloned().collect();
    let (dec, arg_dec) = op_norm_lower(&op, x, y, &noninc)?;
    let r = if dec > 0.0 { all / dec } else { f64::INFINITY };
    let set = RatioSet {
        entries: vec![(format!("{arg_all}/{arg_dec}"), r)],
    };
    Ok(simple_report(
        &format!("noninc-reduction-{}-m{}", profile.label(), m),
        (cfg.band_lo, cfg.band_hi),
        &set,
        fam.members[0].f.grid.n_cells(),
    ))
}

/// One named check outcome; fully determined by (seed, grid, config).
#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub name: String,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub argmin: String,
    pub argmax: String,
    pub grid_n: usize,
    pub band_lo: f64,
    pub band_hi: f64,
    pub drift: f64,
    pub verdict: String,
}

fn fmt_f(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.9e}")
    }
}

impl RatioReport {
    pub fn csv_header() -> &'static str {
        "name,min_ratio,max_ratio,argmin,argmax,grid_n,band_lo,band_hi,drift,verdict"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.name,
            fmt_f(self.min_ratio),
            fmt_f(self.max_ratio),
            self.argmin,
            self.argmax,
            self.grid_n,
            fmt_f(self.band_lo),
            fmt_f(self.band_hi),
            fmt_f(self.drift),
            self.verdict
        )
    }

    pub fn json_line(&self) -> String {
        format!(
            "{{\"name\":\"{}\",\"min_ratio\":\"{}\",\"max_ratio\":\"{}\",\"argmin\":\"{}\",\"argmax\":\"{}\",\"grid_n\":{},\"band_lo\":\"{}\",\"band_hi\":\"{}\",\"drift\":\"{}\",\"verdict\":\"{}\"}}",
            self.name,
            fmt_f(self.min_ratio),
            fmt_f(self.max_ratio),
            self.argmin,
            self.argmax,
            self.grid_n,
            fmt_f(self.band_lo),
            fmt_f(self.band_hi),
            fmt_f(self.drift),
            self.verdict
        )
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

/// Labelled ratios collected by one check at one grid resolution.
#[derive(Clone, Debug, Default)]
pub struct RatioSet {
    pub entries: Vec<(String, f64)>,
}

impl RatioSet {
    pub fn push(&mut self, id: String, r: f64) {
        self.entries.push((id, r));
    }

    fn summary(&self) -> Option<(f64, f64, String, String)> {
        let mut mn = f64::INFINITY;
        let mut mx = f64::NEG_INFINITY;
        let mut amn = String::new();
        let mut amx = String::new();
        for (id, r) in &self.entries {
            if r.is_nan() {
                continue;
            }
            if *r < mn {
                mn = *r;
                amn = id.clone();
            }
            if *r > mx {
                mx = *r;
                amx = id.clone();
            }
        }
        if amx.is_empty() {
            None
        } else {
            Some((mn, mx, amn, amx))
        }
    }
}

fn rel_change(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if !a.is_finite() || !b.is_finite() {
        return f64::INFINITY;
    }
    (b - a).abs() / a.abs().max(1e-300)
}

/// Report for a check run at resolution N and 2N; verdict "unstable" when
/// the band endpoints drift by 5% or more under the refinement.
pub fn stability_report(
    name: &str,
    band: (f64, f64),
    coarse: &RatioSet,
    fine: &RatioSet,
    grid_n: usize,
) -> RatioReport {
    let base = simple_report(name, band, coarse, grid_n);
    let (Some((mn1, mx1, _, _)), Some((mn2, mx2, _, _))) = (coarse.summary(), fine.summary())
    else {
        return RatioReport {
            verdict: "fail".into(),
            ..base
        };
    };
    let drift = rel_change(mn1, mn2).max(rel_change(mx1, mx2));
    let verdict = if base.verdict == "fail" {
        "fail".into()
    } else if drift >= 0.05 {
        "unstable".into()
    } else {
        "pass".into()
    };
    RatioReport {
        drift,
        verdict,
        ..base
    }
}

/// Single-resolution report (drift 0): for exact identities where the
/// tolerance, not refinement stability, is the acceptance gate.
pub fn simple_report(name: &str, band: (f64, f64), set: &RatioSet, grid_n: usize) -> RatioReport {
    let Some((mn, mx, amn, amx)) = set.summary() else {
        return RatioReport {
            name: name.into(),
            min_ratio: f64::NAN,
            max_ratio: f64::NAN,
            argmin: String::new(),
            argmax: String::new(),
            grid_n,
            band_lo: band.0,
            band_hi: band.1,
            drift: 0.0,
            verdict: "fail".into(),
        };
    };
    let ok = mn >= band.0 && mx <= band.1;
    RatioReport {
        name: name.into(),
        min_ratio: mn,
        max_ratio: mx,
        argmin: amn,
        argmax: amx,
        grid_n,
        band_lo: band.0,
        band_hi: band.1,
        drift: 0.0,
        verdict: if ok { "pass".into() } else { "fail".into() },
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub grid_k: u32,
    pub t_min: f64,
    pub seed: u64,
    pub band_lo: f64,
    pub band_hi: f64,
    pub family_size: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            grid_k: 16,
            t_min: 2f64.powi(-40),
            seed: 17,
            band_lo: 1.0 / 64.0,
            band_hi: 64.0,
            family_size: 64,
        }
    }
}

impl SuiteConfig {
    pub fn grid(&self) -> Grid {
        Grid::geometric(self.grid_k, self.t_min)
    }

    pub fn fine_grid(&self) -> Grid {
        Grid::geometric(self.grid_k * 2, self.t_min)
    }

    pub fn band(&self) -> (f64, f64) {
        (self.band_lo, self.band_hi)
    }
}

fn kernel_profiles() -> Vec<Profile> {
    vec![
        power_profile(0.5).unwrap(),
        power_profile(0.75).unwrap(),
        linear_profile(),
        l_phi_profile(PhiFunction::Gauss),
    ]
}

/// Exact kernel evaluator against the m-fold composition oracle, on a
/// thinned set of grid points.
pub fn check_kernel_consistency(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let grid = cfg.grid();
    let fam = TestFamily::generate(&grid, cfg.seed, 20);
    let mut reports = Vec::new();
    for profile in kernel_profiles() {
        for m in 1u32..=3 {
            let mut set = RatioSet::default();
            for mem in &fam.members {
                let exact = HmEval::new(&profile, m, &mem.f);
                let oracle = compose_h(&profile, m, &mem.f);
                for (i, &t) in grid.points.iter().enumerate() {
                    if i == 0 || i % 7 != 0 || t >= 1.0 {
                        continue;
                    }
                    let e = exact.eval(t);
                    if !(e.is_finite() && e > 1e-12) {
                        continue;
                    }
                    set.push(format!("{}@{t:.3e}", mem.id), oracle(t) / e);
                }
            }
            reports.push(simple_report(
                &format!("kernel-consistency-{}-m{}", profile.label(), m),
                (1.0 - 1e-6, 1.0 + 1e-6),
                &set,
                grid.n_cells(),
            ));
        }
    }
    reports
}

/// ∫ (H^m f) g = ∫ f (R^m g): the two kernel evaluators are exact adjoints
/// under their shared normalization.
pub fn check_kernel_associativity(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let grid = cfg.grid();
    let fam = TestFamily::generate(&grid, cfg.seed, 9);
    let mut reports = Vec::new();
    for profile in kernel_profiles() {
        for m in 1u32..=3 {
            let mut set = RatioSet::default();
            for (i, fm) in fam.members.iter().enumerate() {
                for gm in fam.members.iter().skip(i + 1).take(2) {
                    let h = HmEval::new(&profile, m, &fm.f);
                    let r = RmEval::new(&profile, m, &gm.f);
                    let lhs = pairing_eval(&|t| h.eval(t), &gm.f);
                    let rhs = pairing_eval(&|t| r.eval(t), &fm.f);
                    if rhs.is_finite() && rhs > 1e-12 {
                        set.push(format!("{}|{}", fm.id, gm.id), lhs / rhs);
                    }
                }
            }
            reports.push(simple_report(
                &format!("kernel-associativity-{}-m{}", profile.label(), m),
                (1.0 - 1e-9, 1.0 + 1e-9),
                &set,
                grid.n_cells(),
            ));
        }
    }
    reports
}

/// Product-measure kernel on indicators against the closed form.
pub fn check_indicator_closed_form(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let grid = cfg.grid();
    let mut reports = Vec::new();
    for phi in [
        PhiFunction::Gauss,
        PhiFunction::boltzmann(1.5).unwrap(),
        PhiFunction::boltzmann(2.0).unwrap(),
    ] {
        let profile = l_phi_profile(phi.clone());
        let mut set = RatioSet::default();
        for m in 1u32..=3 {
            for b in [0.1, 0.5, 0.9] {
                let f = GridFn::indicator(&grid, b);
                let e = HmEval::new(&profile, m, &f);
                for (i, &t) in f.grid.points.iter().enumerate() {
                    if i == 0 || i % 9 != 0 || t >= b {
                        continue;
                    }
                    let want = h_m_indicator_closed_form(&phi, m, b, t).unwrap();
                    if want > 1e-12 {
                        set.push(format!("m{m}-b{b}@{t:.3e}"), e.eval(t) / want);
                    }
                }
            }
        }
        reports.push(simple_report(
            &format!("indicator-closed-form-{}", profile.label()),
            (1.0 - 1e-6, 1.0 + 1e-6),
            &set,
            grid.n_cells(),
        ));
    }
    reports
}

/// Pointwise sandwich between the product-measure kernel and the weighted
/// linear kernel, with the exact order-dependent constants.
pub fn check_kernel_sandwich(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let grid = cfg.grid();
    let fam = TestFamily::generate(&grid, cfg.seed, 75);
    let noninc: Vec<&FamilyMember> = fam.nonincreasing().into_iter().take(50).collect();
    let mut reports = Vec::new();
    for phi in [
        PhiFunction::Gauss,
        PhiFunction::boltzmann(1.0).unwrap(),
        PhiFunction::boltzmann(1.5).unwrap(),
        PhiFunction::boltzmann(2.0).unwrap(),
    ] {
        let profile = l_phi_profile(phi.clone());
        for m in 1u32..=3 {
            let lo = 1.0 / (2.0f64.powi(m as i32) * factorial(m - 1));
            let hi = 1.0 / factorial(m - 1);
            let mut set = RatioSet::default();
            for mem in &noninc {
                let star = mem.f.rearrange_fine();
                let p = PmPhiEval::new(&phi, m, &star);
                let h = HmEval::new(&profile, m, &star);
                for (i, &t) in star.grid.points.iter().enumerate() {
                    if i == 0 || i % 11 != 0 || t >= 1.0 {
                        continue;
                    }
                    let pv = p.eval(t);
                    if !(pv.is_finite() && pv > 1e-12) {
                        continue;
                    }
                    set.push(format!("{}@{t:.3e}", mem.id), h.eval(t) / pv);
                }
            }
            reports.push(simple_report(
                &format!("kernel-sandwich-{}-m{}", profile.label(), m),
                (lo * (1.0 - 1e-7), hi * (1.0 + 1e-7)),
                &set,
                grid.n_cells(),
            ));
        }
    }
    reports
}

/// R^m f*(t) ≤ 2^m R^m f*(s) whenever t/2 ≤ s ≤ t: the kernel average over
/// a halved argument controls the original, with zero violations.
pub fn check_kernel_doubling(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let grid = cfg.grid();
    let fam = TestFamily::generate(&grid, cfg.seed, 12);
    let mut reports = Vec::new();
    for profile in kernel_profiles() {
        for m in 1u32..=3 {
            let cap = 2.0f64.powi(m as i32);
            let mut set = RatioSet::default();
            for mem in &fam.members {
                let star = mem.f.rearrange_fine();
                let e = RmEval::new(&profile, m, &star);
                let pts = &star.grid.points;
                for (i, &t) in pts.iter().enumerate() {
                    if i == 0 || i % 13 != 0 || t >= 1.0 || t / 2.0 < pts[1] {
                        continue;
                    }
                    let rt = e.eval(t);
                    if !(rt.is_finite() && rt > 1e-12) {
                        continue;
                    }
                    for j in 0..4 {
                        let s = t / 2.0 * (1.0 + j as f64 / 4.0);
                        set.push(format!("{}@{t:.3e}/{j}", mem.id), cap * e.eval(s) / rt);
                    }
                }
            }
            reports.push(simple_report(
                &format!("kernel-doubling-{}-m{}", profile.label(), m),
                (1.0 - 1e-9, f64::INFINITY),
                &set,
                grid.n_cells(),
            ));
        }
    }
    reports
}

fn four_way_spaces() -> Vec<NormSpec> {
    vec![
        NormSpec::lebesgue(1.0).unwrap(),
        NormSpec::lebesgue(2.0).unwrap(),
        NormSpec::lorentz(2.0, 1.0).unwrap(),
        NormSpec::lorentz_zygmund(f64::INFINITY, 2.0, -1.0).unwrap(),
    ]
}

fn four_way_ratios(grid: &Grid, cfg: &SuiteConfig, profile: &Profile, x: &NormSpec, m: u32) -> RatioSet {
    let fam = TestFamily::generate(grid, cfg.seed, 5);
    let xp = x.associate().unwrap();
    let mut set = RatioSet::default();
    for mem in &fam.members {
        let star = mem.f.rearrange_fine();
        let r_top = apply_r_m(profile, m + 1, &star);
        let a = eval_norm(&xp, &r_top);
        if !(a.is_finite() && a > 1e-12) {
            continue;
        }
        let rf = apply_r(profile, &star);
        let b = if m == 0 {
            eval_norm(&xp, &rf)
        } else {
            eval_norm(&xp, &apply_r_m(profile, m, &rf.rearrange_fine()))
        };
        let (g, _) = apply_g_m(profile, m + 1, &mem.f);
        let c = eval_norm(&xp, &g);
        let d = down_dual_norm(x, &r_top);
        set.push(format!("{}:mid", mem.id), b / a);
        set.push(format!("{}:sup", mem.id), c / a);
        set.push(format!("{}:down", mem.id), d / a);
    }
    set
}

/// The four equivalent functionals of the down-dual equivalence theorem,
/// all measured against the first.
pub fn check_four_way_equivalence(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let coarse = cfg.grid();
    let fine = cfg.fine_grid();
    let mut reports = Vec::new();
    for profile in [
        power_profile(0.5).unwrap(),
        linear_profile(),
        l_phi_profile(PhiFunction::Gauss),
    ] {
        for x in four_way_spaces() {
            for m in 0u32..=2 {
                let c = four_way_ratios(&coarse, cfg, &profile, &x, m);
                let f = four_way_ratios(&fine, cfg, &profile, &x, m);
                reports.push(stability_report(
                    &format!("four-way-{}-{}-m{}", profile.label(), x.label(), m),
                    cfg.band(),
                    &c,
                    &f,
                    coarse.n_cells(),
                ));
            }
        }
    }
    reports
}

fn target_table_rows() -> Vec<(Profile, NormSpec, u32)> {
    let gauss = l_phi_profile(PhiFunction::Gauss);
    vec![
        (power_profile(0.75).unwrap(), NormSpec::lorentz(4.0 / 3.0, 1.0).unwrap(), 2),
        (power_profile(0.75).unwrap(), NormSpec::lorentz(3.0, 2.0).unwrap(), 1),
        (power_profile(0.75).unwrap(), NormSpec::lorentz(2.0, 2.0).unwrap(), 2),
        (linear_profile(), NormSpec::lebesgue(2.0).unwrap(), 1),
        (linear_profile(), NormSpec::lorentz(2.0, 1.0).unwrap(), 2),
        (linear_profile(), NormSpec::lebesgue(f64::INFINITY).unwrap(), 1),
        (power_profile(0.75).unwrap(), NormSpec::lebesgue(4.0 / 3.0).unwrap(), 2),
        (power_profile(0.5).unwrap(), NormSpec::lebesgue(1.5).unwrap(), 1),
        (gauss.clone(), NormSpec::lebesgue(2.0).unwrap(), 1),
        (gauss.clone(), NormSpec::Orlicz { young: young_exp(2.0).unwrap() }, 1),
        (gauss.clone(), NormSpec::lebesgue(f64::INFINITY).unwrap(), 2),
        (gauss, NormSpec::lebesgue(f64::INFINITY).unwrap(), 1),
    ]
}

fn target_table_ratios(grid: &Grid, profile: &Profile, x: &NormSpec, m: u32, y: &NormSpec) -> RatioSet {
    let t = TargetNorm::new(x.clone(), profile.clone(), m, Variant::Full);
    let fam = canonical_noninc_family(grid);
    // precompute the target-associate values of the dual family once
    let assocs: Vec<f64> = fam
        .iter()
        .map(|g| target_assoc_eval(&t, g).unwrap_or(f64::INFINITY))
        .collect();
    let mut set = RatioSet::default();
    for (i, f) in fam.iter().enumerate() {
        let denom = eval_norm(y, f);
        if !(denom.is_finite() && denom > 1e-12) {
            continue;
        }
        let mut sup = 0.0f64;
        for (g, a) in fam.iter().zip(&assocs) {
            if a.is_finite() && *a > 0.0 {
                sup = sup.max(f.pairing(g) / a);
            }
        }
        set.push(format!("fam-{i}"), sup / denom);
    }
    set
}

/// Band check for one table row: the numeric target norm (duality lower
/// bound) against the resolver's closed-form space.
pub fn target_row_report(profile: &Profile, x: &NormSpec, m: u32, cfg: &SuiteConfig) -> Result<RatioReport> {
    let coarse = cfg.grid();
    let fine = cfg.fine_grid();
    let sym = resolve_target(x, profile, m)?;
    let y = match &sym.verdict {
        Verdict::Space(spec) => spec.clone(),
        Verdict::LInfinity => {
            // essential boundedness has no dual-family band; report the
            // agreement of the two independent classifiers instead
            let cert = linf_criterion(x, profile, m)?;
            let mut set = RatioSet::default();
            set.push("classifiers-agree".into(), if cert.finite { 1.0 } else { 0.0 });
            return Ok(simple_report(
                &format!("target-row-{}-{}-m{}-vs-L^inf", profile.label(), x.label(), m),
                (0.5, 1.5),
                &set,
                coarse.n_cells(),
            ));
        }
        Verdict::NoTable => {
            return Err(RskError::Parameter(format!(
                "no tabulated target for {} under {} at order {m}",
                x.label(),
                profile.label()
            )));
        }
    };
    let c = target_table_ratios(&coarse, profile, x, m, &y);
    let f = target_table_ratios(&fine, profile, x, m, &y);
    Ok(stability_report(
        &format!("target-row-{}-{}-m{}-vs-{}", profile.label(), x.label(), m, y.label()),
        cfg.band(),
        &c,
        &f,
        coarse.n_cells(),
    ))
}

/// Numeric target norm (duality lower bound) against the resolver's
/// closed-form space, on every tabulated row.
pub fn check_target_tables(cfg: &SuiteConfig) -> Vec<RatioReport> {
    target_table_rows()
        .into_iter()
        .map(|(profile, x, m)| target_row_report(&profile, &x, m, cfg).unwrap())
        .collect()
}

fn sup_membership_rows() -> Vec<(NormSpec, Profile, u32, bool)> {
    vec![
        (NormSpec::lebesgue(1.0).unwrap(), power_profile(0.5).unwrap(), 3, true),
        (NormSpec::lebesgue(2.0).unwrap(), linear_profile(), 2, false),
        (NormSpec::lebesgue(8.0).unwrap(), power_profile(0.75).unwrap(), 1, true),
        (NormSpec::lebesgue(2.0).unwrap(), power_profile(0.75).unwrap(), 1, false),
        (NormSpec::lebesgue(4.0).unwrap(), power_profile(0.75).unwrap(), 1, false),
        (NormSpec::lorentz(2.0, 1.0).unwrap(), power_profile(0.75).unwrap(), 2, true),
        (
            NormSpec::Orlicz { young: young_power_log(2.0, 2.0).unwrap() },
            power_profile(0.5).unwrap(),
            1,
            true,
        ),
        (
            NormSpec::Orlicz { young: young_power_log(2.0, 0.5).unwrap() },
            power_profile(0.5).unwrap(),
            1,
            false,
        ),
        (
            NormSpec::lebesgue(f64::INFINITY).unwrap(),
            power_profile(0.75).unwrap(),
            2,
            true,
        ),
    ]
}

/// The essential-boundedness criterion agrees with the table verdict on
/// every sampled row, including both boundary classes of the log scale.
pub fn check_sup_membership(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let mut set = RatioSet::default();
    for (i, (x, profile, m, want)) in sup_membership_rows().into_iter().enumerate() {
        let cert = linf_criterion(&x, &profile, m).unwrap();
        let sym = resolve_target(&x, &profile, m).unwrap();
        let table_says_sup = sym.verdict == Verdict::LInfinity;
        let ok = cert.finite == want && table_says_sup == want;
        set.push(
            format!("row{i}-{}-{}-m{m}", x.label(), profile.label()),
            if ok { 1.0 } else { 0.0 },
        );
    }
    vec![simple_report(
        "sup-membership",
        (0.5, 1.5),
        &set,
        cfg.grid().n_cells(),
    )]
}

fn iteration_ratios(grid: &Grid, cfg: &SuiteConfig, profile: &Profile, x: &NormSpec, k: u32, h: u32) -> RatioSet {
    let fam = TestFamily::generate(grid, cfg.seed, 6);
    let base = TargetNorm::new(x.clone(), profile.clone(), k, Variant::Full);
    let stacked = iterate_target(&base, h);
    let direct = TargetNorm::new(x.clone(), profile.clone(), k + h, Variant::Full);
    let mut set = RatioSet::default();
    for mem in &fam.members {
        let a = target_assoc_eval(&stacked, &mem.f).unwrap_or(f64::INFINITY);
        let b = target_assoc_eval(&direct, &mem.f).unwrap_or(f64::INFINITY);
        if a.is_finite() && b.is_finite() && b > 1e-12 {
            set.push(mem.id.clone(), a / b);
        }
    }
    set
}

/// Stacked order-(k)+(h) construction against the direct order-(k+h) one.
pub fn check_iteration(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let coarse = cfg.grid();
    let fine = cfg.fine_grid();
    let mut reports = Vec::new();
    for profile in [power_profile(0.75).unwrap(), l_phi_profile(PhiFunction::Gauss)] {
        for x in [NormSpec::lebesgue(1.0).unwrap(), NormSpec::lebesgue(2.0).unwrap()] {
            for (k, h) in [(1u32, 1u32), (1, 2)] {
                let c = iteration_ratios(&coarse, cfg, &profile, &x, k, h);
                let f = iteration_ratios(&fine, cfg, &profile, &x, k, h);
                reports.push(stability_report(
                    &format!("iteration-{}-{}-k{}h{}", profile.label(), x.label(), k, h),
                    cfg.band(),
                    &c,
                    &f,
                    coarse.n_cells(),
                ));
            }
        }
    }
    reports
}

fn negative_control_rows() -> Vec<(NormSpec, Profile, u32, NormSpec, NormSpec)> {
    vec![
        (
            NormSpec::lebesgue(2.0).unwrap(),
            power_profile(0.75).unwrap(),
            1,
            NormSpec::lorentz(4.0, 2.0).unwrap(),
            NormSpec::lorentz(4.0, 1.0).unwrap(),
        ),
        (
            NormSpec::lorentz(3.0, 2.0).unwrap(),
            power_profile(0.75).unwrap(),
            1,
            NormSpec::lorentz(12.0, 2.0).unwrap(),
            NormSpec::lorentz(12.0, 1.0).unwrap(),
        ),
        (
            NormSpec::lebesgue(2.0).unwrap(),
            power_profile(2.0 / 3.0).unwrap(),
            1,
            NormSpec::lorentz(6.0, 2.0).unwrap(),
            NormSpec::lorentz_zygmund(6.0, 2.0, 0.5).unwrap(),
        ),
        (
            NormSpec::lebesgue(2.0).unwrap(),
            l_phi_profile(PhiFunction::Gauss),
            1,
            NormSpec::lorentz_zygmund(2.0, 2.0, 0.5).unwrap(),
            NormSpec::lorentz_zygmund(2.0, 2.0, 1.0).unwrap(),
        ),
    ]
}

/// Strengthening the tabulated target by one secondary-index step breaks
/// boundedness: the lower bound over the near-extremal family must exceed
/// ten times the passing row's bound. The separation from a one-step
/// strengthening grows only like sqrt(log(1/t_min)), so this check runs on
/// a grid deep enough to push that factor past ten.
pub fn check_negative_controls(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let grid = Grid::geometric(cfg.grid_k, cfg.t_min.min(2f64.powi(-520)));
    let mut reports = Vec::new();
    for (i, (x, profile, m, y_ok, y_strong)) in negative_control_rows().into_iter().enumerate() {
        let fam = near_extremal_family(&x, &grid, 11);
        let op = KernelOp::h(profile.clone(), m);
        let mut set = RatioSet::default();
        let (ok, _) = op_norm_lower(&op, &x, &y_ok, &fam).unwrap();
        let (strong, arg) = op_norm_lower(&op, &x, &y_strong, &fam).unwrap();
        set.push(arg, strong / ok);
        reports.push(simple_report(
            &format!("negative-control-{i}-{}-{}", profile.label(), x.label()),
            (10.0, f64::INFINITY),
            &set,
            grid.n_cells(),
        ));
    }
    reports
}

/// Density-to-profile ratio over the sampled range, plus the doubling
/// sandwich and the chain inequalities for the measure transform.
pub fn check_profile_facts(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let mut reports = Vec::new();
    for phi in [PhiFunction::Gauss, PhiFunction::boltzmann(1.5).unwrap()] {
        let p = l_phi_profile(phi.clone());
        let mut ratio = RatioSet::default();
        let lo: f64 = 2f64.powi(-30);
        for i in 0..1000 {
            let s = lo * (0.5f64 / lo).powf(i as f64 / 999.0);
            let l = p.eval(s);
            if l > 0.0 {
                ratio.push(format!("s={s:.3e}"), f_phi(&phi, s) / l);
            }
        }
        reports.push(simple_report(
            &format!("profile-density-ratio-{}", p.label()),
            cfg.band(),
            &ratio,
            1000,
        ));

        let mut margins = RatioSet::default();
        let mut prev = 0.0;
        for i in 1..=1000 {
            let s = 0.5 * i as f64 / 1000.0;
            let v = p.eval(s);
            margins.push(format!("monotone@{s}"), if v + 1e-12 >= prev { 1.0 } else { 0.0 });
            prev = v;
            let base = s * phi.dphi(phi.phi_inv((1.0 / s).ln().max(0.0)));
            let ok = v >= base - 1e-12 && v <= 2.0 * base + 1e-12;
            margins.push(format!("sandwich@{s}"), if ok { 1.0 } else { 0.0 });
        }
        for k in 1..=30 {
            let s = 0.3 * k as f64;
            for j in 0..k {
                let t = 0.3 * j as f64;
                let is = phi.phi_inv(s);
                let it = phi.phi_inv(t);
                let mid = 1.0 / phi.dphi(is);
                let ok = is / (2.0 * s) <= mid + 1e-12
                    && mid <= (is - it) / (s - t) + 1e-12
                    && (is - it) / (s - t) <= is / s + 1e-12;
                margins.push(format!("chain@{s}/{t}"), if ok { 1.0 } else { 0.0 });
            }
        }
        reports.push(simple_report(
            &format!("profile-inequalities-{}", p.label()),
            (0.5, 1.5),
            &margins,
            1000,
        ));
    }
    reports
}

fn doubling_simplify_ratios(grid: &Grid, cfg: &SuiteConfig, profile: &Profile, m: u32, x: &NormSpec) -> RatioSet {
    let fam = TestFamily::generate(grid, cfg.seed, 6);
    let mut set = RatioSet::default();
    for mem in &fam.members {
        let lhs = eval_norm(x, &apply_h_m(profile, m, &mem.f).scale(factorial(m - 1)));
        // cell integrals of f(s) s^{m-1} / I(s)^m, then suffix sums, give
        // t -> ∫_t^1 sampled at the left endpoints in one pass
        let pts = &mem.f.grid.points;
        let cell: Vec<f64> = (0..mem.f.values.len())
            .map(|i| {
                mem.f.values[i]
                    * integrate_adaptive(
                        &|s| s.powi(m as i32 - 1) / profile.eval(s).powi(m as i32),
                        pts[i],
                        pts[i + 1],
                        1e-12,
                    )
            })
            .collect();
        let mut vals = vec![0.0; cell.len()];
        let mut acc = 0.0;
        for i in (0..cell.len()).rev() {
            acc += cell[i];
            vals[i] = acc;
        }
        let rhs_fn = GridFn::new(mem.f.grid.clone(), vals).unwrap();
        let rhs = eval_norm(x, &rhs_fn);
        if rhs.is_finite() && rhs > 1e-12 && lhs.is_finite() {
            set.push(mem.id.clone(), lhs / rhs);
        }
    }
    set
}

/// Under the doubling condition the iterated kernel weight simplifies to
/// the power weight s^{m-1}/I(s)^m, in every r.i. norm simultaneously.
pub fn check_doubling_simplify(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let coarse = cfg.grid();
    let fine = cfg.fine_grid();
    let profile = power_profile(0.5).unwrap();
    let mut reports = Vec::new();
    for x in [NormSpec::lebesgue(1.0).unwrap(), NormSpec::lebesgue(f64::INFINITY).unwrap()] {
        let c = doubling_simplify_ratios(&coarse, cfg, &profile, 2, &x);
        let f = doubling_simplify_ratios(&fine, cfg, &profile, 2, &x);
        reports.push(stability_report(
            &format!("doubling-simplify-{}", x.label()),
            cfg.band(),
            &c,
            &f,
            coarse.n_cells(),
        ));
    }
    reports
}

/// The nested m-fold integral with the power kernel collapses, by Fubini,
/// to the one-dimensional kernel form; checked numerically at m = 2, 3.
pub fn check_nested_integral(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let grid = cfg.grid();
    let fam = TestFamily::generate(&grid, cfg.seed, 6);
    let mut reports = Vec::new();
    for alpha in [0.5, 1.0] {
        let profile = power_profile(alpha).unwrap();
        for m in [2u32, 3] {
            let mut set = RatioSet::default();
            for mem in &fam.members {
                let exact = HmEval::new(&profile, m, &mem.f);
                let nested = compose_h(&profile, m, &mem.f);
                for (i, &t) in grid.points.iter().enumerate() {
                    if i == 0 || i % 17 != 0 || t >= 1.0 {
                        continue;
                    }
                    let e = exact.eval(t);
                    if e.is_finite() && e > 1e-12 {
                        set.push(format!("{}@{t:.3e}", mem.id), nested(t) / e);
                    }
                }
            }
            reports.push(simple_report(
                &format!("nested-integral-a{alpha}-m{m}"),
                (1.0 - 1e-6, 1.0 + 1e-6),
                &set,
                grid.n_cells(),
            ));
        }
    }
    reports
}

/// Operator norm over the whole family against the nonincreasing subfamily.
pub fn check_noninc_reduction(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let grid = cfg.grid();
    let fam = TestFamily::generate(&grid, cfg.seed, cfg.family_size.min(24));
    let mut reports = Vec::new();
    for (profile, m, x, y) in [
        (
            power_profile(0.75).unwrap(),
            1u32,
            NormSpec::lebesgue(2.0).unwrap(),
            NormSpec::lorentz(4.0, 2.0).unwrap(),
        ),
        (
            power_profile(0.5).unwrap(),
            2,
            NormSpec::lebesgue(2.0).unwrap(),
            NormSpec::lebesgue(f64::INFINITY).unwrap(),
        ),
    ] {
        reports.push(nonincreasing_reduction_check(&profile, m, &x, &y, &fam, cfg).unwrap());
    }
    reports
}

/// The two operator-norm estimators (direct and through the associate
/// kernel) agree within a factor of two on the sampled matrix.
pub fn check_dual_estimators(cfg: &SuiteConfig) -> Vec<RatioReport> {
    let grid = cfg.grid();
    let fam = TestFamily::generate(&grid, cfg.seed, cfg.family_size.min(24));
    let mut set = RatioSet::default();
    for (profile, m, x, y) in [
        (
            power_profile(0.75).unwrap(),
            1u32,
            NormSpec::lebesgue(2.0).unwrap(),
            NormSpec::lorentz(4.0, 2.0).unwrap(),
        ),
        (
            power_profile(0.75).unwrap(),
            1,
            NormSpec::lorentz(3.0, 2.0).unwrap(),
            NormSpec::lorentz(12.0, 2.0).unwrap(),
        ),
        (
            power_profile(0.5).unwrap(),
            1,
            NormSpec::lebesgue(1.0).unwrap(),
            NormSpec::lorentz(2.0, 1.0).unwrap(),
        ),
        (
            l_phi_profile(PhiFunction::Gauss),
            1,
            NormSpec::lebesgue(2.0).unwrap(),
            NormSpec::lorentz_zygmund(2.0, 2.0, 0.5).unwrap(),
        ),
    ] {
        let op = KernelOp::h(profile.clone(), m);
        let (direct, _) = op_norm_lower(&op, &x, &y, &fam.members).unwrap();
        let (dual, _) = op_norm_dual(&op, &x, &y, &fam.members).unwrap();
        if dual > 0.0 {
            set.push(format!("{}-{}-m{m}", profile.label(), x.label()), direct / dual);
        }
    }
    vec![simple_report(
        "dual-estimators",
        (0.5, 2.0),
        &set,
        grid.n_cells(),
    )]
}

pub fn suite_names() -> Vec<&'static str> {
    vec![
        "kernel-consistency",
        "kernel-associativity",
        "indicator-closed-form",
        "kernel-sandwich",
        "kernel-doubling",
        "four-way-equivalence",
        "target-tables",
        "sup-membership",
        "iteration",
        "negative-controls",
        "profile-facts",
        "doubling-simplify",
        "nested-integral",
        "noninc-reduction",
        "dual-estimators",
    ]
}

/// Runs one named check; "all" runs the whole registry in parallel (the
/// entries are independent and pure) and merges reports in registry order.
pub fn theorem_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<RatioReport>> {
    if name == "all" {
        let names = suite_names();
        let mut out: Vec<Option<Vec<RatioReport>>> = (0..names.len()).map(|_| None).collect();
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for n in &names {
                let cfg = cfg.clone();
                handles.push(scope.spawn(move || theorem_suite(n, &cfg)));
            }
            for (slot, h) in out.iter_mut().zip(handles) {
                *slot = Some(h.join().expect("suite worker panicked").unwrap_or_default());
            }
        });
        return Ok(out.into_iter().flatten().flatten().collect());
    }
    match name {
        "kernel-consistency" => Ok(check_kernel_consistency(cfg)),
        "kernel-associativity" => Ok(check_kernel_associativity(cfg)),
        "indicator-closed-form" => Ok(check_indicator_closed_form(cfg)),
        "kernel-sandwich" => Ok(check_kernel_sandwich(cfg)),
        "kernel-doubling" => Ok(check_kernel_doubling(cfg)),
        "four-way-equivalence" => Ok(check_four_way_equivalence(cfg)),
        "target-tables" => Ok(check_target_tables(cfg)),
        "sup-membership" => Ok(check_sup_membership(cfg)),
        "iteration" => Ok(check_iteration(cfg)),
        "negative-controls" => Ok(check_negative_controls(cfg)),
        "profile-facts" => Ok(check_profile_facts(cfg)),
        "doubling-simplify" => Ok(check_doubling_simplify(cfg)),
        "nested-integral" => Ok(check_nested_integral(cfg)),
        "noninc-reduction" => Ok(check_noninc_reduction(cfg)),
        "dual-estimators" => Ok(check_dual_estimators(cfg)),
        other => Err(RskError::UnknownTheorem(other.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> SuiteConfig {
        SuiteConfig {
            grid_k: 4,
            t_min: 2f64.powi(-16),
            seed: 7,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn family_is_deterministic() {
        let g = small_cfg().grid();
        let a = TestFamily::generate(&g, 7, 20);
        let b = TestFamily::generate(&g, 7, 20);
        assert_eq!(a.members.len(), 20);
        for (x, y) in a.members.iter().zip(&b.members) {
            assert_eq!(x.id, y.id);
            assert_eq!(x.f.values, y.f.values);
        }
        assert!(a.nonincreasing().len() >= 12);
    }

    #[test]
    fn empty_family_is_an_error() {
        let op = KernelOp::h(linear_profile(), 1);
        let x = NormSpec::lebesgue(2.0).unwrap();
        assert!(op_norm_lower(&op, &x, &x, &[]).is_err());
    }

    #[test]
    fn averaging_bound_at_least_one_on_constants() {
        let cfg = small_cfg();
        let g = cfg.grid();
        let fam = TestFamily::generate(&g, 3, 10);
        let op = KernelOp {
            kind: KernelKind::R,
            profile: linear_profile(),
            m: 1,
        };
        let x = NormSpec::lebesgue(2.0).unwrap();
        let (lo, _) = op_norm_lower(&op, &x, &x, &fam.members).unwrap();
        assert!(lo >= 1.0 - 1e-9, "{lo}");
    }

    #[test]
    fn verdict_logic() {
        let mut set = RatioSet::default();
        set.push("a".into(), 1.0);
        set.push("b".into(), 2.0);
        let r = simple_report("t", (0.5, 4.0), &set, 10);
        assert_eq!(r.verdict, "pass");
        let r = simple_report("t", (1.5, 4.0), &set, 10);
        assert_eq!(r.verdict, "fail");
        let mut fine = RatioSet::default();
        fine.push("a".into(), 1.2);
        fine.push("b".into(), 2.0);
        let r = stability_report("t", (0.5, 4.0), &set, &fine, 10);
        assert_eq!(r.verdict, "unstable");
        let mut close = RatioSet::default();
        close.push("a".into(), 1.01);
        close.push("b".into(), 2.01);
        let r = stability_report("t", (0.5, 4.0), &set, &close, 10);
        assert_eq!(r.verdict, "pass");
        assert!(r.drift > 0.0 && r.drift < 0.05);
    }

    #[test]
    fn reduction_ratio_is_one_for_rearranged_family() {
        let cfg = small_cfg();
        let g = cfg.grid();
        let mut fam = TestFamily::generate(&g, 5, 8);
        // close the family under rearrangement
        let extra: Vec<FamilyMember> = fam
            .members
            .iter()
            .map(|m| FamilyMember {
                id: format!("{}*", m.id),
                f: m.f.rearrange_fine(),
                noninc: true,
            })
            .collect();
        fam.members.extend(extra);
        let r = nonincreasing_reduction_check(
            &power_profile(0.5).unwrap(),
            1,
            &NormSpec::lebesgue(2.0).unwrap(),
            &NormSpec::lebesgue(4.0).unwrap(),
            &fam,
            &cfg,
        )
        .unwrap();
        // H is a positive kernel operator, so rearranging can only help;
        // with the family closed under rearrangement the ratio is exactly 1
        assert!((r.min_ratio - 1.0).abs() < 1e-9, "{}", r.min_ratio);
    }

    #[test]
    fn report_rows_are_stable_text() {
        let mut set = RatioSet::default();
        set.push("a".into(), 1.0);
        let r = simple_report("t", (0.5, f64::INFINITY), &set, 3);
        assert_eq!(
            r.csv_row(),
            "t,1.000000000e0,1.000000000e0,a,a,3,5.000000000e-1,inf,0.000000000e0,pass"
        );
        assert!(r.json_line().contains("\"verdict\":\"pass\""));
    }

    #[test]
    fn unknown_suite_name_is_an_error() {
        assert!(theorem_suite("nope", &small_cfg()).is_err());
    }

    #[test]
    fn sup_membership_rows_all_agree() {
        let reports = check_sup_membership(&small_cfg());
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].verdict, "pass", "{:?}", reports[0]);
    }

    #[test]
    fn four_way_single_combo_band() {
        let cfg = small_cfg();
        let set = four_way_ratios(
            &cfg.grid(),
            &cfg,
            &power_profile(0.5).unwrap(),
            &NormSpec::lebesgue(2.0).unwrap(),
            1,
        );
        let r = simple_report("t", cfg.band(), &set, cfg.grid().n_cells());
        assert_eq!(r.verdict, "pass", "{r:?}");
    }
}
