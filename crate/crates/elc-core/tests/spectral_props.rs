//! Property tests of the spectral field invariants over random grids,
//! bands and seeds.

use elc_core::spectral::{
    band_limited_noise, dealias_scalar, divergence, forward, inner, inverse, leray_project,
    norm_l2, ScalarField, TorusGrid, VectorField,
};
use proptest::prelude::*;

fn arb_grid() -> impl Strategy<Value = TorusGrid> {
    prop_oneof![
        (Just(2usize), prop_oneof![Just(8usize), Just(16), Just(32)]),
        (Just(3usize), Just(8usize)),
    ]
    .prop_map(|(dim, n)| TorusGrid::new(dim, n).unwrap())
}

fn noise_vector(grid: TorusGrid, band: i64, seed: u64) -> VectorField {
    let comps: Vec<ScalarField> =
        (0..grid.dim()).map(|i| band_limited_noise(grid, band, seed + 1000 * i as u64)).collect();
    VectorField::from_components(comps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_round_trip(grid in arb_grid(), seed in 0u64..1_000_000) {
        let f = band_limited_noise(grid, grid.n() as i64 / 2 - 1, seed);
        let back = inverse(&forward(&f));
        let scale = f.max_abs().max(1e-12);
        for (a, b) in back.data().iter().zip(f.data()) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn leray_idempotent_and_divergence_free(grid in arb_grid(), seed in 0u64..1_000_000) {
        let v = noise_vector(grid, grid.n() as i64 / 3, seed);
        let p1 = leray_project(&v).unwrap();
        let p2 = leray_project(&p1).unwrap();
        let scale = p1.max_abs().max(1e-12);
        for axis in 0..grid.dim() {
            for (a, b) in p2.comp(axis).data().iter().zip(p1.comp(axis).data()) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
        }
        let vnorm: f64 = v.components().iter().map(|c| norm_l2(c).powi(2)).sum::<f64>().sqrt();
        let div = divergence(&p1).unwrap();
        prop_assert!(norm_l2(&div) <= 1e-12 * vnorm.max(1.0));
    }

    #[test]
    fn dealias_is_a_projection(grid in arb_grid(), seed in 0u64..1_000_000) {
        let f = band_limited_noise(grid, grid.n() as i64 / 2, seed);
        let once = dealias_scalar(&f);
        let twice = dealias_scalar(&once);
        let scale = f.max_abs().max(1e-12);
        for (a, b) in twice.data().iter().zip(once.data()) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
        // Within the kept band it is the identity.
        let low = band_limited_noise(grid, grid.n() as i64 / 3, seed ^ 0xabcd);
        let kept = dealias_scalar(&low);
        let scale = low.max_abs().max(1e-12);
        for (a, b) in kept.data().iter().zip(low.data()) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn parseval_holds(grid in arb_grid(), seed in 0u64..1_000_000) {
        let f = band_limited_noise(grid, grid.n() as i64 / 2 - 1, seed);
        let spec = forward(&f);
        let total = grid.len() as f64;
        let spectral: f64 =
            spec.coef().iter().map(|z| z.norm_sqr()).sum::<f64>() / (total * total);
        let direct = inner(&f, &f).unwrap();
        prop_assert!((spectral - direct).abs() <= 1e-12 * direct.max(1.0));
    }
}
