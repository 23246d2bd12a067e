use mfzoo::fourier::*;
use mfzoo::sets::{sample_point, KMeasureRule, SampleRule, SparseSchedule, K_PHASE};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

fn k_points(count: usize, seed: u64) -> Vec<f64> {
    let rule = SampleRule::KMeasure(KMeasureRule::new(SparseSchedule::squares(), 0.5).unwrap());
    (0..count)
        .map(|i| sample_point(&rule, 60, seed + i as u64).unwrap().value_f64())
        .collect()
}

/// One component at α = 0.5 with blocks k = 1..=3, shared across tests.
fn component() -> &'static Component {
    static C: OnceLock<Component> = OnceLock::new();
    C.get_or_init(|| {
        let config = MultifractalConfig {
            alphas: vec![0.5],
            ..MultifractalConfig::default()
        };
        build_component(0.5, 1.0, 0, &SparseSchedule::squares(), &config).unwrap()
    })
}

#[test]
fn chi_l1_norm_matches_quadrature() {
    let chi = build_chi(&CoverSpec::new(3, vec![0], 1, 0.0).unwrap()).unwrap();
    let n = 1 << 16;
    // χ is piecewise affine with kinks on the grid, so the midpoint rule is exact.
    let q: f64 = (0..n).map(|i| chi.eval((i as f64 + 0.5) / n as f64)).sum::<f64>() / n as f64;
    assert!((q - 0.25).abs() < 1e-10);
    assert!((chi.norm_pp(1.0) - 0.25).abs() < 1e-15);
}

#[test]
fn fejer_of_bump_is_positive_and_large_on_centres() {
    let cover = CoverSpec::new(5, vec![3, 4, 17], 3, 0.5).unwrap();
    let chi = build_chi(&cover).unwrap();
    let n = 1 << 5;
    let p = fejer_approx(&chi.sample(8 * n), n).unwrap();
    let dense = p.dense_values(1 << 12).unwrap();
    assert!(dense.iter().all(|v| v.re >= -1e-9));
    for &i in &cover.intervals {
        let centre = (i as f64 + 0.5) / n as f64;
        assert!(p.eval(centre).re >= 0.25);
    }
}

#[test]
fn fejer_contracts_lp_norms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let samples: Vec<f64> = (0..256).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = fejer_approx(&samples, 32).unwrap();
        let out = p.dense_values(256).unwrap();
        let g: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        for pp in [1.0, 2.0] {
            assert!(grid_lp_norm(&out, pp) <= grid_lp_norm(&g, pp) * (1.0 + 1e-3));
        }
    }
}

#[test]
fn modulated_bump_dominates_on_k() {
    let cover = CoverSpec::new(3, vec![1, 2], 2, 0.5).unwrap();
    let chi = build_chi(&cover).unwrap();
    let p = fejer_approx(&chi.sample(64), 8).unwrap();
    let q = build_q(&p, 4, K_PHASE).unwrap();
    for x in k_points(1000, 11) {
        let (pv, qv) = (p.eval(x).re, q.eval(x).re);
        assert!(qv >= FRAC_1_SQRT_2 * pv - 1e-9, "x = {x}: {qv} < {pv}");
    }
}

#[test]
fn single_block_band() {
    let cover = CoverSpec::new(8, vec![77], 1, 0.5).unwrap();
    let config = BlockConfig {
        s: 0.5,
        p: 2.0,
        phase: K_PHASE,
    };
    let (f, report) =
        build_block_function(&[(2, cover)], &SparseSchedule::squares(), &config, &[]).unwrap();
    assert_eq!(f.blocks.len(), 1);
    assert_eq!(f.blocks[0].channel, Channel::Real);
    let (lo, hi) = f.blocks[0].q.support_extent().unwrap();
    assert!(lo >= 256 && hi <= 768);
    assert_eq!((f.blocks[0].band_low(), f.blocks[0].band_high()), (256, 768));
    assert_eq!(report.blocks[0].covered_points, 0);
    assert!(report.blocks[0].lower_constant.is_none());
}

#[test]
fn stage_errors_name_the_stage() {
    let config = BlockConfig {
        s: 0.5,
        p: 2.0,
        phase: 0.0,
    };
    let wrong_level = CoverSpec::new(5, vec![1], 1, 0.5).unwrap();
    let err = build_block_function(&[(2, wrong_level)], &SparseSchedule::squares(), &config, &[])
        .unwrap_err();
    assert!(err.to_string().contains("cover") && err.to_string().contains("k = 2"));
    let empty = CoverSpec::new(8, vec![], 1, 0.5).unwrap();
    let err =
        build_block_function(&[(2, empty)], &SparseSchedule::squares(), &config, &[]).unwrap_err();
    assert!(err.to_string().contains("chi"));
}

#[test]
fn component_structure() {
    let c = component();
    let f = &c.function;
    f.check_spectra().unwrap();
    assert_eq!(f.band_schedule(), vec![24, 768, 98304]);
    let x = c.fully_covered()[0];
    assert_eq!(f.partial_sum(7, x), Complex64::new(0.0, 0.0));
    assert_eq!(f.partial_sum(98304, x), f.eval(x));
    assert_eq!(f.partial_sum(1 << 40, x), f.eval(x));
    for b in &c.report.blocks {
        assert!(b.fejer_min >= -1e-9);
        assert!(b.lower_constant.unwrap() >= 0.25, "{b:?}");
    }
}

#[test]
fn component_is_large_on_g() {
    let c = component();
    let f = &c.function;
    for &x in c.fully_covered().iter().take(50) {
        let s2 = f.partial_sum(768, x).re;
        let bound = FRAC_1_SQRT_2 * 0.25 * (8.0f64 * (1.0 - 0.55) / 2.0).exp2();
        assert!(s2 >= bound, "x = {x}: {s2} < {bound}");
    }
}

#[test]
fn plateau_per_channel() {
    let f = &component().function;
    for x in k_points(20, 5) {
        let re: Vec<f64> = [768u64, 1000, 16384, 40000, 98304, 1 << 20]
            .iter()
            .map(|&n| f.partial_sum(n, x).re)
            .collect();
        assert!(re.iter().all(|v| (v - re[0]).abs() <= 1e-12));
        let im: Vec<f64> = [24u64, 100, 255, 256, 4000, 16383]
            .iter()
            .map(|&n| f.partial_sum(n, x).im)
            .collect();
        assert!(im.iter().all(|v| (v - im[0]).abs() <= 1e-12));
    }
}

#[test]
fn positivity_on_k() {
    let f = &component().function;
    for x in k_points(1000, 99) {
        for (n, channel) in [(24u64, 1), (768, 0), (98304, 1)] {
            let s = f.partial_sum(n, x);
            let v = if channel == 0 { s.re } else { s.im };
            assert!(v >= -1e-9, "x = {x}, n = {n}: {v}");
        }
    }
}

#[test]
fn parseval_on_a_block_function() {
    let f = &component().function;
    let trig = f.to_trig();
    let dense = trig.dense_values(1 << 18).unwrap();
    let quad = grid_lp_norm(&dense, 2.0).powi(2);
    let coeff = f.norm_l2().powi(2);
    assert!((quad - coeff).abs() <= 1e-12 * coeff, "{quad} vs {coeff}");
    assert!((trig.energy() - coeff).abs() <= 1e-12 * coeff);
}

#[test]
fn single_coefficient_has_zero_index() {
    let mut f = BlockFunction::empty(SparseSchedule::squares());
    f.constant = Complex64::new(1.0, 0.0);
    let d = fs_divergence_index(&f, 0.3, &[24, 768, 98304]).unwrap();
    assert_eq!((d.beta_minus, d.beta_plus), (0.0, 0.0));
    assert!(fs_divergence_index(&f, 0.3, &[24, 768]).is_err());
}

fn random_trig(rng: &mut ChaCha8Rng, degree: i64) -> TrigPolynomial {
    let half: Vec<Complex64> = (0..=degree)
        .map(|n| {
            let decay = 1.0 / (1.0 + n as f64).sqrt();
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * decay
        })
        .collect();
    TrigPolynomial::new(0, half).unwrap()
}

#[test]
fn localization_is_stable_across_levels() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let polys: Vec<TrigPolynomial> = (0..10).map(|_| random_trig(&mut rng, 4096)).collect();
    let xs: Vec<f64> = (0..64).map(|i| (i as f64 + 0.37) / 64.0).collect();
    let deltas: Vec<f64> = (6..=12)
        .map(|j| {
            polys
                .iter()
                .filter_map(|p| localization_check(p, j, 2.0, &xs).unwrap().delta)
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let lo = deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = deltas.iter().copied().fold(0.0, f64::max);
    assert!(lo > 0.0 && hi / lo < 10.0, "{deltas:?}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn fejer_keeps_positivity(v in prop::collection::vec(0.0f64..5.0, 64), n in 1usize..16) {
        let p = fejer_approx(&v, n).unwrap();
        prop_assert!(p.dense_values(256).unwrap().iter().all(|z| z.re >= -1e-9));
        prop_assert!(p.is_real());
    }

    #[test]
    fn modulation_lands_in_band(
        half in prop::collection::vec(-1.0f64..1.0, 1..9),
        m in 4usize..8,
        phase in -3.2f64..3.2,
    ) {
        let coeffs: Vec<Complex64> = half.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        let p = TrigPolynomial::from_nonnegative_half(&coeffs).unwrap();
        let q = build_q(&p, m, phase).unwrap();
        if let Some((lo, hi)) = q.support_extent() {
            prop_assert!(lo >= 1 << (m - 1) && hi <= 3 << (m - 1));
        }
        let x = 0.318;
        let t = ((1u64 << m) as f64 * x).fract();
        let direct = (std::f64::consts::TAU * t + phase).sin() * p.eval(x).re;
        prop_assert!((q.eval(x).re - direct).abs() < 1e-12);
    }

    #[test]
    fn bands_are_disjoint(k_max in 1usize..5) {
        let s = SparseSchedule::squares();
        let bands: Vec<(u64, u64)> = (1..=k_max)
            .map(|k| {
                let m = s.m(k).unwrap();
                (1u64 << (m - 1), 3u64 << (m - 1))
            })
            .collect();
        for w in bands.windows(2) {
            prop_assert!(w[0].1 < w[1].0);
        }
    }

    #[test]
    fn truncation_matches_partial_sum(seed in 0u64..1000, n in 0u64..40, x in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_trig(&mut rng, 32);
        let a = p.partial_sum(n, x);
        let b = p.truncated(n).eval(x);
        prop_assert!((a - b).norm() < 1e-12);
    }
}
