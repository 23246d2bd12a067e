use crate::commands::Instantiation;
use crate::error::{CliError, Result};
use clap::Args;
use mfzoo::dirichlet::{
    ds_to_fi, dstofi_scan, embedding_check, fi_to_ds, fitods_scan, fs_to_fi, DirichletSeries,
};
use mfzoo::dyadic::level_lp_norm;
use mfzoo::fourier::{build_component, MultifractalConfig};
use mfzoo::haar::{gf2_build_haar, haar_field, haar_partial_sum, saturating_haar, GridFunction, SaturatingConfig};
use mfzoo::poisson::{gf2_poisson_constant, harnack_check, kernel_mass_midpoint, CircleFunction};
use mfzoo::sets::{
    alpha_of_delta, delta_of_alpha, empirical_frequency, sample_point, KMeasureRule, SampleRule,
    SparseSchedule,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::f64::consts::TAU;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub instantiation: Instantiation,
    /// Suite name; each instantiation has one default suite.
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Relative tolerance for identities.
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Check {
    name: String,
    value: f64,
    limit: f64,
    pass: bool,
}

fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Check {
    Check {
        name: name.into(),
        value,
        limit,
        pass: value <= limit,
    }
}

fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Check {
    Check {
        name: name.into(),
        value,
        limit,
        pass: value >= limit,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn default_suite(i: Instantiation) -> &'static str {
    match i {
        Instantiation::Haar => "gf",
        Instantiation::Poisson => "kernel",
        Instantiation::Fourier => "structure",
        Instantiation::Dirichlet => "bridges",
        Instantiation::Sets => "besicovitch",
    }
}

/// Runs the suite and returns its report; failing checks surface as a
/// verification error after the report is written.
pub fn verify(args: &VerifyArgs) -> Result<(Value, bool)> {
    let suite = args.suite.as_deref().unwrap_or(default_suite(args.instantiation));
    if suite != default_suite(args.instantiation) {
        return Err(CliError::Config(format!(
            "unknown suite `{suite}` for this instantiation (available: {})",
            default_suite(args.instantiation)
        )));
    }
    let stochastic = matches!(
        args.instantiation,
        Instantiation::Fourier | Instantiation::Dirichlet | Instantiation::Sets
    );
    let seed = match (args.seed, stochastic) {
        (Some(s), _) => s,
        (None, false) => 0,
        (None, true) => return Err(CliError::Config("this suite is stochastic: --seed is required".into())),
    };
    if !(args.tolerance > 0.0) {
        return Err(CliError::Config("--tolerance must be positive".into()));
    }
    let checks = match args.instantiation {
        Instantiation::Haar => haar_suite(args.depth.unwrap_or(12), seed, args.tolerance)?,
        Instantiation::Poisson => poisson_suite(args.depth.unwrap_or(8))?,
        Instantiation::Fourier => fourier_suite(seed)?,
        Instantiation::Dirichlet => dirichlet_suite(seed, args.tolerance)?,
        Instantiation::Sets => sets_suite(seed, args.depth.unwrap_or(1024))?,
    };
    let pass = checks.iter().all(|c| c.pass);
    let report = json!({
        "suite": suite,
        "seed": seed,
        "pass": pass,
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "value": c.value,
            "limit": c.limit,
            "pass": c.pass,
        })).collect::<Vec<_>>(),
    });
    Ok((report, pass))
}

fn haar_suite(depth: usize, seed: u64, tol: f64) -> Result<Vec<Check>> {
    if !(2..=20).contains(&depth) {
        return Err(CliError::Config(format!("haar suite depth {depth} outside 2..=20")));
    }
    let f = saturating_haar(&[0.1, 0.2, 0.3, 0.4, 0.5], depth, &SaturatingConfig::finite_depth())?;
    let field = haar_field(&f);
    let total = f.norm_l2().powi(2);
    let mut worst_identity: f64 = 0.0;
    let mut worst_excess: f64 = 0.0;
    for j in 0..=depth {
        let level = level_lp_norm(field.level(j), 2.0).powi(2);
        let tj = haar_partial_sum(&f, j)?.norm_l2().powi(2);
        worst_identity = worst_identity.max(rel(level, tj));
        worst_excess = worst_excess.max((level - total) / total);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let j = depth / 2;
    let a: Vec<f64> = (0..1usize << j).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let g: GridFunction = gf2_build_haar(&a, depth)?;
    let gf = haar_field(&g);
    let coeff_err = gf
        .level(j)
        .iter()
        .zip(&a)
        .map(|(e, v)| rel(*e, v.abs()))
        .fold(0.0, f64::max);
    let energy: f64 = a.iter().map(|v| v * v).sum();
    Ok(vec![
        at_most("gf1 level energy equals ‖T_j f‖² (rel)", worst_identity, tol),
        at_most("gf1 level energy below ‖f‖² (rel excess)", worst_excess, tol),
        at_most("gf2 coefficients reproduced (rel)", coeff_err, tol),
        at_most("gf2 energy identity (rel)", rel(g.norm_l2().powi(2), energy), tol),
    ])
}

fn poisson_suite(depth: usize) -> Result<Vec<Check>> {
    if !(4..=12).contains(&depth) {
        return Err(CliError::Config(format!("poisson suite depth {depth} outside 4..=12")));
    }
    let mut mass_err: f64 = 0.0;
    for r in [0.0, 0.5, 0.9, 0.99] {
        for theta in [0.0, 0.1, 0.37, 0.5] {
            let res = mfzoo::poisson::quadrature_resolution(depth, r);
            mass_err = mass_err.max((kernel_mass_midpoint(r, theta, res) - 1.0).abs());
        }
    }
    let bump = CircleFunction::from_grid(GridFunction::from_fn(10, |x| {
        1.0 + 0.5 * (TAU * x).cos()
    })?);
    let mut harnack: f64 = 0.0;
    for j in 4..=depth {
        harnack = harnack.max(harnack_check(&bump, j, 256)?.constant());
    }
    let gf2 = (1..=depth)
        .map(gf2_poisson_constant)
        .collect::<mfzoo::Result<Vec<f64>>>()?;
    let (lo, hi) = gf2
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    Ok(vec![
        at_most("kernel unit mass error", mass_err, 1e-8),
        at_most("harnack constant", harnack, 50.0),
        at_least("gf2 lower constant", lo, f64::MIN_POSITIVE),
        at_most("gf2 constant spread (max/min)", hi / lo, 2.0),
    ])
}

fn k_points(count: usize, seed: u64) -> Result<Vec<f64>> {
    let rule = SampleRule::KMeasure(KMeasureRule::new(SparseSchedule::squares(), 0.5)?);
    (0..count as u64)
        .map(|i| Ok(sample_point(&rule, 60, seed.wrapping_add(i))?.value_f64()))
        .collect()
}

fn fourier_suite(seed: u64) -> Result<Vec<Check>> {
    let config = MultifractalConfig {
        alphas: vec![0.5],
        k_max: 2,
        samples_per_alpha: 300,
        seed,
        ..MultifractalConfig::default()
    };
    let comp = build_component(0.5, 1.0, 0, &SparseSchedule::squares(), &config)?;
    let f = &comp.function;
    let confined = f.check_spectra().is_ok();
    let mut worst_neg: f64 = 0.0;
    let mut plateau: f64 = 0.0;
    for x in k_points(500, seed)? {
        worst_neg = worst_neg.min(f.partial_sum(24, x).im).min(f.partial_sum(768, x).re);
        plateau = plateau.max((f.partial_sum(1000, x).re - f.partial_sum(768, x).re).abs());
    }
    Ok(vec![
        at_least("spectra confined to bands", confined as u8 as f64, 1.0),
        at_least("channel partial sums on K", worst_neg, -1e-9),
        at_most("plateau deviation", plateau, 1e-12),
    ])
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn dirichlet_suite(seed: u64, tol: f64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DirichletSeries::new(random_coeffs(&mut rng, 10_000))?;
    let big_g = ds_to_fi(&g)?;
    let a = random_coeffs(&mut rng, 200);
    let big_f = fs_to_fi(&a)?;
    let a_norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let (_, bessel) = fi_to_ds(&big_g, None)?;
    let (_, bessel_f) = fi_to_ds(&big_f, Some(100_000))?;
    let ts: Vec<f64> = (0..=10).map(|i| -10.0 + 2.0 * i as f64).collect();
    let ns = [1usize, 10, 100, 1000, 10_000];
    let ds_c = dstofi_scan(&g, &ns, &ts)?.constant;
    let fi_c = fitods_scan(&fs_to_fi(&random_coeffs(&mut rng, 10))?, &ns, &ts)?.constant;
    let mut embed: f64 = 0.0;
    for _ in 0..10 {
        let p = DirichletSeries::new(random_coeffs(&mut rng, 100))?;
        embed = embed.max(embedding_check(&p, 1024)?);
    }
    Ok(vec![
        at_most("‖ds_to_fi(g)‖ = ‖g‖ (rel)", rel(big_g.norm_l2(), g.h2_norm()), tol),
        at_most("‖fs_to_fi(a)‖ = ‖a‖ (rel)", rel(big_f.norm_l2(), a_norm), tol),
        at_least("bessel bound (log grid)", bessel.holds() as u8 as f64, 1.0),
        at_least("bessel bound (unit grid)", bessel_f.holds() as u8 as f64, 1.0),
        at_most("series-to-integral bridge constant", ds_c, 10.0),
        at_most("integral-to-series bridge constant", fi_c, 10.0),
        at_most("embedding ratio", embed, 10.0),
    ])
}

fn sets_suite(seed: u64, depth: usize) -> Result<Vec<Check>> {
    if !(64..=8192).contains(&depth) {
        return Err(CliError::Config(format!("sets suite depth {depth} outside 64..=8192")));
    }
    let mut roundtrip: f64 = 0.0;
    for i in 1..=20 {
        let alpha = i as f64 / 21.0;
        roundtrip = roundtrip.max((alpha_of_delta(delta_of_alpha(alpha)?)? - alpha).abs());
    }
    let schedule = SparseSchedule::squares();
    let rule = SampleRule::Intersection {
        alpha: 0.5,
        schedule: schedule.clone(),
    };
    let delta = delta_of_alpha(0.5)?;
    let n = 200;
    let mut close = 0;
    for i in 0..n {
        let word = sample_point(&rule, depth, seed.wrapping_add(i))?;
        if (empirical_frequency(&word, &schedule).restricted - delta).abs() <= 0.05 {
            close += 1;
        }
    }
    Ok(vec![
        at_most("entropy inverse roundtrip", roundtrip, 1e-10),
        at_least("samples with frequency within 0.05 of δ", close as f64 / n as f64, 0.95),
    ])
}
