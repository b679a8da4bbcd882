//! End-to-end acceptance gate: runs the whole verification registry at the
//! default configuration and prints one pass/fail line per criterion group.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use rsk_core::verify::{theorem_suite, RatioReport, SuiteConfig};

fn group<'a>(reports: &'a [RatioReport], prefix: &str) -> Vec<&'a RatioReport> {
    reports
        .iter()
        .filter(|r| r.name.starts_with(prefix))
        .collect()
}

fn judge(label: &str, members: &[&RatioReport]) -> bool {
    assert!(!members.is_empty(), "no reports matched {label}");
    let ok = members.iter().all(|r| r.passed());
    let worst = members
        .iter()
        .min_by(|a, b| {
            let ka = (a.passed() as u8, a.min_ratio / a.band_lo.max(1e-300));
            let kb = (b.passed() as u8, b.min_ratio / b.band_lo.max(1e-300));
            ka.partial_cmp(&kb).unwrap()
        })
        .unwrap();
    println!(
        "{}: {label} ({} checks, worst {} min={:.3e} max={:.3e} drift={:.2e})",
        if ok { "PASS" } else { "FAIL" },
        members.len(),
        worst.name,
        worst.min_ratio,
        worst.max_ratio,
        worst.drift
    );
    ok
}

#[test]
fn acceptance_gate() {
    let cfg = SuiteConfig::default();
    let reports = theorem_suite("all", &cfg).unwrap();

    let criteria: [(&str, &str); 11] = [
        ("exact kernel vs m-fold composition < 1e-6", "kernel-consistency-"),
        ("adjoint pairing identity <= 1e-9", "kernel-associativity-"),
        ("indicator closed form < 1e-6", "indicator-closed-form-"),
        ("two-sided kernel sandwich, exact constants", "kernel-sandwich-"),
        ("doubling bound, zero violations", "kernel-doubling-"),
        ("four-way equivalence band, drift < 5%", "four-way-"),
        ("target-table bands, drift < 5%", "target-row-"),
        ("essential-boundedness classification, 9 rows", "sup-membership"),
        ("iterated vs direct higher-order target band", "iteration-"),
        ("negative controls exceed 10x", "negative-control-"),
        ("profile facts and measure-transform inequalities", "profile-"),
    ];
    let mut all_ok = true;
    for (label, prefix) in criteria {
        all_ok &= judge(label, &group(&reports, prefix));
    }
    for prefix in ["doubling-simplify-", "nested-integral-", "noninc-reduction-", "dual-estimators"] {
        all_ok &= judge(prefix, &group(&reports, prefix));
    }

    let covered: usize = criteria
        .iter()
        .map(|(_, p)| group(&reports, p).len())
        .sum::<usize>()
        + ["doubling-simplify-", "nested-integral-", "noninc-reduction-", "dual-estimators"]
            .iter()
            .map(|p| group(&reports, p).len())
            .sum::<usize>();
    assert_eq!(covered, reports.len(), "every report must belong to a criterion");

    assert!(all_ok, "acceptance gate failed; see lines above");
}
