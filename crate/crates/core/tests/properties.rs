//! Randomized invariants of the rearrangement layer: equimeasurability,
//! the Hardy-Littlewood pairing bound, subadditivity of the double star,
//! and norm monotonicity under dilation.

use proptest::collection::vec;
use proptest::prelude::*;

use rsk_core::grid::{Grid, GridFn};
use rsk_core::norms::{eval_norm, NormSpec};

fn grid() -> Grid {
    Grid::geometric(4, 2f64.powi(-12))
}

fn grid_fn() -> impl Strategy<Value = GridFn> {
    let g = grid();
    let n = g.n_cells();
    vec(0.0f64..8.0, n).prop_map(move |vals| GridFn::new(g.clone(), vals).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rearrangement_is_nonincreasing_and_equimeasurable(f in grid_fn()) {
        let star = f.rearrange();
        for w in star.values.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        for lambda in [0.0, 0.5, 1.0, 3.0, 7.9] {
            let d = f.distribution(lambda);
            let ds = star.distribution(lambda);
            prop_assert!((d - ds).abs() <= 1e-12 * d.max(1.0), "{d} vs {ds}");
        }
        prop_assert!((f.integral() - star.integral()).abs() <= 1e-12 * f.integral().max(1.0));
    }

    #[test]
    fn norms_are_rearrangement_invariant(f in grid_fn()) {
        let star = f.rearrange_fine();
        for spec in [
            NormSpec::lebesgue(1.0).unwrap(),
            NormSpec::lebesgue(2.0).unwrap(),
            NormSpec::lorentz(2.0, 1.0).unwrap(),
        ] {
            let a = eval_norm(&spec, &f);
            let b = eval_norm(&spec, &star);
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-12), "{} {a} vs {b}", spec.label());
        }
    }

    #[test]
    fn pairing_bounded_by_rearranged_pairing(f in grid_fn(), g in grid_fn()) {
        let plain = f.pairing(&g);
        let sorted = f.rearrange_fine().pairing(&g.rearrange_fine());
        prop_assert!(plain <= sorted + 1e-9 * sorted.max(1.0), "{plain} vs {sorted}");
    }

    #[test]
    fn double_star_is_subadditive(f in grid_fn(), g in grid_fn()) {
        let sum = f.add(&g);
        let sum_star = sum.rearrange();
        let f_star = f.rearrange();
        let g_star = g.rearrange();
        for &t in &[0.01, 0.1, 0.3, 0.7] {
            let lhs = sum.double_star_at(&sum_star, t);
            let rhs = f.double_star_at(&f_star, t) + g.double_star_at(&g_star, t);
            prop_assert!(lhs <= rhs + 1e-9 * rhs.max(1.0), "t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn dilation_norm_bound(f in grid_fn(), lam in 0.1f64..4.0) {
        let spec = NormSpec::lorentz(2.0, 1.0).unwrap();
        let base = eval_norm(&spec, &f);
        let dilated = eval_norm(&spec, &f.dilate(lam).unwrap());
        prop_assert!(dilated <= lam.max(1.0) * base + 1e-9 * base.max(1.0));
    }
}
