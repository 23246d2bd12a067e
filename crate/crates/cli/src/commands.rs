use crate::error::{CliError, Result};
use crate::range::{parse_range, parse_window};
use crate::svg::spectrum_svg;
use clap::{Args, ValueEnum};
use mfzoo::dirichlet::compose_multifractal_ds;
use mfzoo::dyadic::{coarse_spectrum, estimate_exponents, CoefficientField, LevelSetMode};
use mfzoo::fourier::{multifractal_fourier, MultifractalConfig};
use mfzoo::haar::{haar_field, saturating_haar, SaturatingConfig};
use mfzoo::io;
use mfzoo::poisson::{poisson_field, CircleFunction};
use mfzoo::sets::{batch_to_csv, sample_batch, KMeasureRule, SampleRule, SparseSchedule};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Instantiation {
    Haar,
    Poisson,
    Fourier,
    Dirichlet,
    Sets,
}

/// Files written so far; removed again if the command fails.
#[derive(Default)]
pub struct Outputs {
    written: Vec<PathBuf>,
}

impl Outputs {
    pub fn record(&mut self, path: &Path) {
        self.written.push(path.to_path_buf());
    }

    pub fn rollback(&self) {
        for p in &self.written {
            let _ = std::fs::remove_file(p);
        }
    }

    pub fn paths(&self) -> Vec<String> {
        self.written.iter().map(|p| p.display().to_string()).collect()
    }
}

fn load<T>(path: &Path, read: fn(&Path) -> mfzoo::Result<T>) -> Result<T> {
    read(path).map_err(|e| match CliError::from(e) {
        CliError::Io(m) => CliError::Io(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn sidecar(path: &Path) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{name}.bin"))
}

fn write_field(path: &Path, field: &CoefficientField, json_variant: bool, out: &mut Outputs) -> Result<()> {
    if json_variant {
        io::write_field_json(path, field)?;
        out.record(path);
    } else {
        io::write_field(path, field)?;
        out.record(&sidecar(path));
        out.record(path);
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub instantiation: Instantiation,
    /// Target exponents, `start:stop:step` or a list.
    #[arg(long)]
    pub alpha_grid: Option<String>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
    /// Sample count (fourier covers, sets batches).
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Digit frequency for `sets` (K-measure rule).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Target exponent for `sets` (points of F_α ∩ K).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Input grid for `poisson`.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Also write the generated grid function (haar).
    #[arg(long)]
    pub grid_out: Option<PathBuf>,
    /// Write coefficient fields in the nested-array JSON variant.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: PathBuf,
}

fn need_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| CliError::Config(format!("{what} is stochastic: --seed is required")))
}

fn fourier_config(args: &GenerateArgs, seed: u64) -> Result<MultifractalConfig> {
    let mut config = MultifractalConfig {
        k_max: args.k_max,
        samples_per_alpha: args.samples,
        seed,
        ..MultifractalConfig::default()
    };
    if let Some(grid) = &args.alpha_grid {
        config.alphas = parse_range(grid)?;
    }
    if config.samples_per_alpha == 0 {
        return Err(CliError::Config("--samples must be positive".into()));
    }
    Ok(config)
}

pub fn generate(args: &GenerateArgs, out: &mut Outputs) -> Result<Value> {
    match args.instantiation {
        Instantiation::Haar => {
            let alphas = parse_range(
                args.alpha_grid
                    .as_deref()
                    .ok_or_else(|| CliError::Config("haar needs --alpha-grid".into()))?,
            )?;
            let depth = args.depth.unwrap_or(16);
            if depth > 24 {
                return Err(CliError::Config(format!("depth {depth} exceeds 24")));
            }
            let f = saturating_haar(&alphas, depth, &SaturatingConfig::finite_depth())?;
            let mut field = haar_field(&f)
                .set_meta("generator", "haar")
                .set_meta("alphas", alphas.clone());
            if let Some(seed) = args.seed {
                field = field.set_meta("seed", seed);
            }
            write_field(&args.out, &field, args.json, out)?;
            if let Some(g) = &args.grid_out {
                io::write_grid(g, &f)?;
                out.record(g);
            }
            Ok(json!({ "norm_l2": f.norm_l2(), "depth": depth }))
        }
        Instantiation::Poisson => {
            let input = args
                .input
                .as_deref()
                .ok_or_else(|| CliError::Config("poisson needs --in <grid file>".into()))?;
            let grid = load(input, io::read_grid)?;
            let depth = args.depth.unwrap_or(10);
            let pf = poisson_field(&CircleFunction::from_grid(grid), depth)?;
            write_field(&args.out, &pf.field, args.json, out)?;
            Ok(json!({ "depth": depth, "resolution": pf.resolution }))
        }
        Instantiation::Fourier => {
            let seed = need_seed(args.seed, "fourier")?;
            let mf = multifractal_fourier(&fourier_config(args, seed)?)?;
            io::write_blocks(&args.out, &mf.function)?;
            for b in &mf.function.blocks {
                out.record(&block_path(&args.out, b.k, "p"));
                out.record(&block_path(&args.out, b.k, "q"));
            }
            out.record(&args.out);
            Ok(json!({
                "norm_l2": mf.function.norm_l2(),
                "components": mf.components.iter().map(|c| json!({
                    "alpha": c.alpha,
                    "weight": c.weight,
                    "blocks": c.report.blocks,
                })).collect::<Vec<_>>(),
            }))
        }
        Instantiation::Dirichlet => {
            let seed = need_seed(args.seed, "dirichlet")?;
            let mf = multifractal_fourier(&fourier_config(args, seed)?)?;
            let (g, bessel) = compose_multifractal_ds(&mf.function)?;
            io::write_ds(&args.out, &g)?;
            out.record(&args.out);
            Ok(json!({ "n_max": g.n_max(), "h2_norm": g.h2_norm(), "bessel": bessel }))
        }
        Instantiation::Sets => {
            let seed = need_seed(args.seed, "sets")?;
            let schedule = SparseSchedule::squares();
            let rule = match (args.alpha, args.delta) {
                (Some(alpha), None) => SampleRule::Intersection {
                    alpha,
                    schedule: schedule.clone(),
                },
                (None, Some(delta)) => SampleRule::KMeasure(KMeasureRule::new(schedule.clone(), delta)?),
                _ => return Err(CliError::Config("sets needs exactly one of --alpha, --delta".into())),
            };
            let depth = args.depth.unwrap_or(256);
            let batch = sample_batch(&rule, depth, seed, args.samples, &schedule)?;
            io::write_text(&args.out, &batch_to_csv(&batch))?;
            out.record(&args.out);
            Ok(json!({ "samples": batch.len(), "depth": depth }))
        }
    }
}

fn block_path(path: &Path, k: usize, part: &str) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{name}.k{k}.{part}.trig"))
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Points of [0, 1) to estimate exponents at.
    #[arg(long)]
    pub points: String,
    /// Level window `start:end` (defaults to `1:J`).
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn analyze(args: &AnalyzeArgs, out: &mut Outputs) -> Result<Value> {
    let field = load(&args.input, io::read_field)?;
    let xs = parse_range(&args.points)?;
    let window = match &args.window {
        Some(w) => parse_window(w)?,
        None => (1, field.max_depth().max(1)),
    };
    let points = xs
        .iter()
        .map(|&x| {
            let e = estimate_exponents(&field, x, window)?;
            Ok(json!({
                "x": x,
                "lower": e.lower,
                "upper": e.upper,
                "tail": e.tail,
                "all_zero_tail": e.all_zero_tail,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let energy: Vec<f64> = field
        .levels()
        .iter()
        .map(|l| l.iter().map(|v| v * v).sum())
        .collect();
    let report = json!({
        "max_depth": field.max_depth(),
        "window": window,
        "level_energy": energy,
        "points": points,
    });
    if let Some(path) = &args.out {
        io::write_text(path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
        out.record(path);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Use the generator recorded in the field metadata.
    Auto,
    /// `dim = 2α` for `α <= 1/2`.
    Haar,
    None,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub abscissae: String,
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long, default_value = "upper")]
    pub mode: String,
    #[arg(long, value_enum, default_value_t = Model::Auto)]
    pub model: Model,
    /// CSV output; the plot goes next to it with an `.svg` extension.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn spectrum(args: &SpectrumArgs, out: &mut Outputs) -> Result<Value> {
    let field = load(&args.input, io::read_field)?;
    let abscissae = parse_range(&args.abscissae)?;
    let mode: LevelSetMode = args.mode.parse()?;
    let model = match args.model {
        Model::Auto => match field.meta().get("generator").and_then(Value::as_str) {
            Some("haar") => Model::Haar,
            _ => Model::None,
        },
        m => m,
    };
    let mut report = coarse_spectrum(&field, &abscissae, args.eps, mode)?;
    if model == Model::Haar {
        report = report.with_model(|a| (a <= 0.5).then_some(2.0 * a));
    }
    io::write_text(&args.out, &report.to_csv())?;
    out.record(&args.out);
    let svg = args.out.with_extension("svg");
    io::write_text(&svg, &spectrum_svg(&report))?;
    out.record(&svg);
    Ok(json!({ "rows": report.rows.len(), "csv": args.out, "svg": svg }))
}
