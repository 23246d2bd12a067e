use mfzoo::haar::GridFunction;
use mfzoo::poisson::*;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

/// Exact Fourier coefficients of a piecewise-constant grid, `|n| <= n_max`.
fn grid_modes(g: &GridFunction, n_max: i64) -> Vec<Complex64> {
    let cells = g.values().len() as f64;
    (-n_max..=n_max)
        .map(|n| {
            g.values()
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let (a, b) = (i as f64 / cells, (i + 1) as f64 / cells);
                    if n == 0 {
                        Complex64::new(v * (b - a), 0.0)
                    } else {
                        let w = -2.0 * PI * n as f64;
                        let e = |t: f64| Complex64::from_polar(1.0, w * t);
                        v * (e(b) - e(a)) / Complex64::new(0.0, w)
                    }
                })
                .sum()
        })
        .collect()
}

#[test]
fn half_indicator_matches_mode_expansion() {
    let g = GridFunction::indicator(1, 0.0, 0.5).unwrap();
    let grid = CircleFunction::from_grid(g.clone());
    let modes = CircleFunction::from_modes(grid_modes(&g, 512), true).unwrap();
    let a = poisson_extend(&grid, 0.9, 0.25).unwrap();
    let b = poisson_extend(&modes, 0.9, 0.25).unwrap();
    assert!(a > 0.5 && a < 1.0, "{a}");
    assert!((a - b).abs() < 1e-6, "{a} vs {b}");
}

#[test]
fn grid_and_modes_agree_on_band_limited_refinement() {
    // A deep grid of a trigonometric polynomial against its own grid modes.
    let g = GridFunction::from_fn(10, |x| 1.0 + (2.0 * PI * x).cos() * 0.5).unwrap();
    let grid = CircleFunction::from_grid(g.clone());
    let modes = CircleFunction::from_modes(grid_modes(&g, 2048), true).unwrap();
    for &(r, t) in &[(0.3, 0.1), (0.8, 0.77), (0.95, 0.5)] {
        let a = poisson_extend(&grid, r, t).unwrap();
        let b = poisson_extend(&modes, r, t).unwrap();
        assert!((a - b).abs() < 1e-8, "r = {r}: {a} vs {b}");
    }
}

#[test]
fn field_modes_and_grid_agree() {
    let c = Complex64::new(0.25, 0.0);
    let modes =
        CircleFunction::from_modes(vec![c, Complex64::new(1.0, 0.0), c], true).unwrap();
    let g = GridFunction::from_fn(12, |x| {
        let (a, b) = (x, x + (-12f64).exp2());
        // cell average of 1 + cos(2πx)/2
        1.0 + ((2.0 * PI * b).sin() - (2.0 * PI * a).sin()) / (4.0 * PI * (b - a))
    })
    .unwrap();
    let pm = poisson_field(&modes, 8).unwrap();
    let pg = poisson_field(&CircleFunction::from_grid(g), 8).unwrap();
    for j in 0..=8 {
        for (a, b) in pm.field.level(j).iter().zip(pg.field.level(j)) {
            // the grid carries cell averages, so agreement is to O(h²)
            assert!((a - b).abs() < 1e-6 * (-(j as f64)).exp2());
        }
    }
}

#[test]
fn bump_harnack_constant_is_finite() {
    let mut values = vec![0.0; 1 << 10];
    values[300] = 1024.0;
    let f = CircleFunction::from_grid(GridFunction::new(10, values).unwrap());
    let h = harnack_check(&f, 6, 200).unwrap();
    assert!(h.min_ratio > 0.0 && h.max_ratio.is_finite());
    println!("bump harnack constant at j = 6: {:.3}", h.constant());
    assert!(h.constant() < 50.0);
}

#[test]
fn smooth_harnack_ratios_are_bracketed() {
    let c = Complex64::new(0.5, 0.0);
    let f = CircleFunction::from_modes(vec![c, Complex64::new(1.0, 0.0), c], true).unwrap();
    let h = harnack_check(&f, 4, 100).unwrap();
    assert_eq!(h.evaluated, 100);
    assert!(h.min_ratio >= 1.0 / 50.0 && h.max_ratio <= 50.0, "{h:?}");
}

#[test]
fn gf2_constants_are_stable() {
    let cs: Vec<f64> = (1..=10).map(|j| gf2_poisson_constant(j).unwrap()).collect();
    println!("gf2 constants: {cs:?}");
    let lo = cs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = cs.iter().copied().fold(0.0, f64::max);
    assert!(lo > 0.0 && hi / lo < 2.0);
}

#[test]
fn spike_ladder_recovers_slope() {
    let depth = 14;
    let beta0 = 0.3;
    let x0 = 0.3141;
    let leaf = (x0 * (1 << depth) as f64) as usize;
    // value 2^{β₀ k} where k is the number of leading digits shared with x₀
    let g = GridFunction::new(
        depth,
        (0..1usize << depth)
            .map(|i| {
                let shared = (i ^ leaf).leading_zeros() as usize - (usize::BITS as usize - depth);
                (beta0 * shared as f64).exp2()
            })
            .collect(),
    )
    .unwrap();
    let ri = radial_divergence_index(&CircleFunction::from_grid(g), x0, depth).unwrap();
    println!("spike ladder: {ri:?}");
    assert!((ri.beta_plus - beta0).abs() <= 0.1);
    assert!((ri.beta_minus - beta0).abs() <= 0.1);
}

fn grid_strategy() -> impl Strategy<Value = GridFunction> {
    (2usize..7).prop_flat_map(|d| {
        prop::collection::vec(0.0f64..4.0, 1 << d)
            .prop_map(move |v| GridFunction::new(d, v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn kernel_has_unit_mass(r in 0.0f64..(1.0 - (-12f64).exp2()), t in 0.0f64..1.0) {
        let m = kernel_mass_midpoint(r, t, quadrature_resolution(4, r));
        prop_assert!((m - 1.0).abs() < 1e-8);
    }

    #[test]
    fn nonnegative_data_gives_nonnegative_field(g in grid_strategy()) {
        let f = CircleFunction::from_grid(g.clone());
        let pf = poisson_field(&f, 7).unwrap();
        prop_assert!(!pf.signed_source);
        let l1 = g.norm_l1();
        let mut prev = f64::INFINITY;
        for j in 0..=7 {
            let s: f64 = pf.field.level(j).iter().sum();
            prop_assert!(s <= l1 + 1e-8);
            prop_assert!(s <= prev + 1e-6);
            prev = s;
        }
    }

    #[test]
    fn extension_is_dominated_by_absolute_value(
        v in prop::collection::vec(-3.0f64..3.0, 16),
        r in 0.0f64..0.999,
        t in 0.0f64..1.0,
    ) {
        let g = GridFunction::new(4, v).unwrap();
        let f = CircleFunction::from_grid(g);
        let a = f.abs(4).unwrap();
        let pf = poisson_extend(&f, r, t).unwrap();
        let pa = poisson_extend(&a, r, t).unwrap();
        prop_assert!(pf.abs() <= pa + 1e-10);
    }

    #[test]
    fn cone_sum_dominates_parts(g1 in grid_strategy(), g2 in grid_strategy()) {
        let depth = g1.depth().max(g2.depth());
        let refine = |g: &GridFunction| {
            let s = depth - g.depth();
            GridFunction::new(depth, (0..1usize << depth).map(|i| g.values()[i >> s]).collect()).unwrap()
        };
        let (a, b) = (refine(&g1), refine(&g2));
        let sum = a.add(&b).unwrap();
        let fa = poisson_field(&CircleFunction::from_grid(a), 5).unwrap();
        let fb = poisson_field(&CircleFunction::from_grid(b), 5).unwrap();
        let fs = poisson_field(&CircleFunction::from_grid(sum), 5).unwrap();
        for j in 0..=5 {
            for k in 0..1usize << j {
                let m = fa.field.level(j)[k].max(fb.field.level(j)[k]);
                prop_assert!(fs.field.level(j)[k] >= m - 1e-12);
            }
        }
    }

    #[test]
    fn lower_index_never_exceeds_upper(g in grid_strategy(), x in 0.0f64..1.0) {
        let ri = radial_divergence_index(&CircleFunction::from_grid(g), x, 8).unwrap();
        prop_assert!(ri.beta_plus <= ri.beta_minus);
    }
}
