use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use ehrenfest_core::ehrenfest::simulate_paths;
use ehrenfest_core::experiments::{
    self, run_convergence_with, run_lowrate_study_with, write_atomic, Scenario, DEFAULT_NS,
    LOWRATE_SEED, LOWRATE_TRUNCATION,
};
use ehrenfest_core::pricing::{
    price_fk_oracle, price_general, price_mc_oracle, price_symmetric, price_vasicek,
    simulate_vasicek_euler, Truncation,
};
use ehrenfest_core::{Error, ShortRateModel};

use crate::config::{ConfigError, Format, Model, RunConfig};
use crate::{Cli, Command, ConvergeArgs, GlobalArgs, Oracle, PriceArgs, SimulateArgs};

const DEFAULT_MC_PATHS: u64 = 100_000;
const EULER_STEPS_PER_YEAR: f64 = 365.0;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        CliError {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> Self {
        CliError::usage(err.0)
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::OffGrid { .. } => 3,
            Error::Io(_) => 4,
            Error::Numerical(_) => 1,
            _ => 2,
        };
        let mut message = err.to_string();
        if code == 3 {
            message.push_str("; pass --snap to use the nearest grid rate");
        }
        CliError { code, message }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<()> {
    let config = match &cli.global.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match &cli.command {
        Command::Price(args) => cmd_price(&cli.global, &config, args),
        Command::Simulate(args) => cmd_simulate(&cli.global, &config, args),
        Command::Converge(args) => cmd_converge(&cli.global, &config, args),
        Command::Lowrate => cmd_lowrate(&cli.global, &config),
    }
}

fn truncation(global: &GlobalArgs, config: &RunConfig, default: Truncation) -> Truncation {
    Truncation::new(
        global
            .outer
            .or(config.pricing.outer)
            .unwrap_or(default.outer),
        global
            .hyper
            .or(config.pricing.hyper)
            .unwrap_or(default.hyper),
    )
}

fn format(global: &GlobalArgs, config: &RunConfig, default: Format) -> Format {
    global.format.or(config.output.format).unwrap_or(default)
}

fn out_path(global: &GlobalArgs, config: &RunConfig) -> Option<PathBuf> {
    global.out.clone().or_else(|| config.output.path.clone())
}

fn seed(global: &GlobalArgs, config: &RunConfig) -> u64 {
    global.seed.or(config.simulation.seed).unwrap_or(0)
}

/// Writes to `path` atomically, or to standard output.
fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(path) => write_atomic(path, bytes)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::io(format!("cannot write to stdout: {e}"))),
    }
}

fn io_context(path: &Path) -> impl Fn(Error) -> CliError + '_ {
    move |e| match e {
        Error::Io(msg) => CliError::io(format!("cannot write {}: {msg}", path.display())),
        other => other.into(),
    }
}

/// Grid state for `r`, snapping when requested.
fn grid_rate(model: &ShortRateModel, r: f64, snap: bool) -> CliResult<(u32, f64)> {
    if snap {
        Ok(model.snap_to_grid(r)?)
    } else {
        Ok((model.rate_to_state(r)?, r))
    }
}

#[derive(Debug, Serialize)]
struct PriceOutput {
    price: f64,
    error_estimate: f64,
    #[serde(rename = "M")]
    outer: u32,
    #[serde(rename = "H")]
    hyper: u32,
    wall_time_s: f64,
    method: &'static str,
    r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_price: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_gap: Option<f64>,
}

fn cmd_price(global: &GlobalArgs, config: &RunConfig, args: &PriceArgs) -> CliResult<()> {
    let model = config.model()?;
    let t = args.t.or(config.pricing.t).unwrap_or(0.0);
    let maturity = args
        .maturity
        .or(config.pricing.maturity)
        .ok_or_else(|| CliError::usage("pricing.T: maturity is required ([pricing] T or --T)"))?;
    let trunc = truncation(global, config, Truncation::default());

    let mut out = match model {
        Model::Vasicek(params) => {
            if global.oracle != Oracle::None {
                return Err(CliError::usage("--oracle needs an Ehrenfest model"));
            }
            let r = args.r.or(config.pricing.r).unwrap_or(params.r0);
            let start = std::time::Instant::now();
            let price = price_vasicek(&params, t, maturity, r)?;
            PriceOutput {
                price,
                error_estimate: 0.0,
                outer: trunc.outer,
                hyper: trunc.hyper,
                wall_time_s: start.elapsed().as_secs_f64(),
                method: "vasicek",
                r,
                oracle: None,
                oracle_price: None,
                oracle_std_error: None,
                relative_gap: None,
            }
        }
        Model::Ehrenfest(model) => {
            let r = args.r.or(config.pricing.r).ok_or_else(|| {
                CliError::usage("pricing.r: rate is required ([pricing] r or --r)")
            })?;
            let (_, r) = grid_rate(&model, r, global.snap)?;
            let (result, method) = if model.ehrenfest().is_symmetric() {
                (price_symmetric(&model, t, maturity, r, trunc)?, "symmetric")
            } else {
                (price_general(&model, t, maturity, r, trunc)?, "general")
            };
            let mut out = PriceOutput {
                price: result.price,
                error_estimate: result.error_estimate,
                outer: trunc.outer,
                hyper: trunc.hyper,
                wall_time_s: result.wall_time_s,
                method,
                r,
                oracle: None,
                oracle_price: None,
                oracle_std_error: None,
                relative_gap: None,
            };
            match global.oracle {
                Oracle::None => {}
                Oracle::Fk => {
                    let fk = price_fk_oracle(&model, t, maturity, r)?;
                    out.oracle = Some("fk");
                    out.oracle_price = Some(fk);
                    out.relative_gap = Some((result.price - fk).abs() / fk);
                }
                Oracle::Mc => {
                    let paths = args
                        .paths
                        .or(config.simulation.paths)
                        .unwrap_or(DEFAULT_MC_PATHS);
                    let mc = price_mc_oracle(&model, t, maturity, r, paths, seed(global, config))?;
                    out.oracle = Some("mc");
                    out.oracle_price = Some(mc.estimate);
                    out.oracle_std_error = Some(mc.std_error);
                    out.relative_gap = Some((result.price - mc.estimate).abs() / mc.estimate);
                }
            }
            out
        }
    };
    if global.no_timing {
        out.wall_time_s = 0.0;
    }

    let bytes = match format(global, config, Format::Json) {
        Format::Json => {
            let mut s = serde_json::to_string(&out).expect("serializable output");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut header = String::from("price,error_estimate,M,H,wall_time_s");
            let mut row = format!(
                "{},{},{},{},{}",
                out.price, out.error_estimate, out.outer, out.hyper, out.wall_time_s
            );
            if let Some(p) = out.oracle_price {
                header.push_str(",oracle_price,relative_gap");
                row.push_str(&format!(",{p},{}", out.relative_gap.unwrap_or(f64::NAN)));
            }
            format!("{header}\n{row}\n").into_bytes()
        }
    };
    emit(out_path(global, config).as_deref(), &bytes)
}

#[derive(Debug, Serialize)]
struct PathOutput {
    path: u64,
    times: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    states: Option<Vec<u32>>,
    rates: Vec<f64>,
}

/// `dir/stem_<i>.ext` for path `i` of a batch.
fn numbered(path: &Path, i: u64) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{i}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{i}"),
    };
    path.with_file_name(name)
}

fn cmd_simulate(global: &GlobalArgs, config: &RunConfig, args: &SimulateArgs) -> CliResult<()> {
    let model = config.model()?;
    let horizon = args.horizon.or(config.simulation.horizon).ok_or_else(|| {
        CliError::usage(
            "simulation.horizon: horizon is required ([simulation] horizon or --horizon)",
        )
    })?;
    let paths = args.paths.or(config.simulation.paths).unwrap_or(1);
    if paths == 0 {
        return Err(CliError::usage("simulation.paths: must be at least 1"));
    }
    let seed = seed(global, config);
    let fmt = format(global, config, Format::Csv);
    let out = out_path(global, config);
    if fmt == Format::Csv && paths > 1 && out.is_none() {
        return Err(CliError::usage(
            "--out is required for more than one CSV path",
        ));
    }

    let outputs: Vec<PathOutput> = match model {
        Model::Ehrenfest(model) => {
            let r0 = args
                .r0
                .or(config.simulation.r0)
                .or(config.pricing.r)
                .ok_or_else(|| {
                    CliError::usage(
                        "simulation.r0: starting rate is required ([simulation] r0 or --r0)",
                    )
                })?;
            let (k, _) = grid_rate(&model, r0, global.snap)?;
            simulate_paths(k, horizon, model.ehrenfest(), seed, paths)?
                .into_iter()
                .zip(0..)
                .map(|(sample, i)| PathOutput {
                    path: i,
                    rates: sample.states.iter().map(|&s| model.rate(s)).collect(),
                    times: sample.times,
                    states: Some(sample.states),
                })
                .collect()
        }
        Model::Vasicek(params) => {
            let r0 = args.r0.or(config.simulation.r0).unwrap_or(params.r0);
            let params = ehrenfest_core::pricing::VasicekParams { r0, ..params };
            let steps = (horizon * EULER_STEPS_PER_YEAR).ceil().max(1.0) as usize;
            (0..paths)
                .map(|i| {
                    let points =
                        simulate_vasicek_euler(&params, horizon, steps, seed.wrapping_add(i))?;
                    Ok(PathOutput {
                        path: i,
                        times: points.iter().map(|p| p.0).collect(),
                        states: None,
                        rates: points.iter().map(|p| p.1).collect(),
                    })
                })
                .collect::<Result<_, Error>>()?
        }
    };

    match fmt {
        Format::Json => {
            let mut s = serde_json::to_string(&outputs).expect("serializable output");
            s.push('\n');
            emit(out.as_deref(), s.as_bytes())
        }
        Format::Csv => {
            for p in &outputs {
                let mut text = String::new();
                match &p.states {
                    Some(states) => {
                        text.push_str("time,state\n");
                        for (t, s) in p.times.iter().zip(states) {
                            text.push_str(&format!("{t},{s}\n"));
                        }
                    }
                    None => {
                        text.push_str("time,rate\n");
                        for (t, r) in p.times.iter().zip(&p.rates) {
                            text.push_str(&format!("{t},{r}\n"));
                        }
                    }
                }
                let target = match (&out, paths) {
                    (Some(path), 1) => Some(path.clone()),
                    (Some(path), _) => Some(numbered(path, p.path)),
                    (None, _) => None,
                };
                emit(target.as_deref(), text.as_bytes())?;
            }
            Ok(())
        }
    }
}

fn cmd_converge(global: &GlobalArgs, config: &RunConfig, args: &ConvergeArgs) -> CliResult<()> {
    let scenario = Scenario::from(args.scenario);
    let ns = args.ns.clone().unwrap_or_else(|| DEFAULT_NS.to_vec());
    let trunc = truncation(global, config, Truncation::default());
    let mut rows = run_convergence_with(scenario, &ns, trunc, global.intensity.into())?;
    if global.no_timing {
        for row in &mut rows {
            row.wall_time_s = 0.0;
        }
    }
    let fmt = format(global, config, Format::Csv);
    let path = out_path(global, config)
        .unwrap_or_else(|| PathBuf::from(format!("convergence_{scenario}.{fmt}")));
    match fmt {
        Format::Csv => {
            experiments::write_convergence_csv(&path, &rows).map_err(io_context(&path))?
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("serializable rows");
            s.push('\n');
            emit(Some(&path), s.as_bytes())?;
        }
    }
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(())
}

#[derive(Debug, Serialize)]
struct LowRateJson<'a> {
    vasicek: &'a experiments::ScenarioCurve,
    ehrenfest: &'a experiments::ScenarioCurve,
    vasicek_paths: &'a [Vec<(f64, f64)>],
    ehrenfest_path: Vec<(f64, f64)>,
}

fn cmd_lowrate(global: &GlobalArgs, config: &RunConfig) -> CliResult<()> {
    let trunc = truncation(global, config, LOWRATE_TRUNCATION);
    let seed = global
        .seed
        .or(config.simulation.seed)
        .unwrap_or(LOWRATE_SEED);
    let dir = out_path(global, config).unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;

    let study = run_lowrate_study_with(trunc, seed)?;
    let mut written = Vec::new();
    match format(global, config, Format::Csv) {
        Format::Csv => {
            let files = [
                ("lowrate_vasicek.csv", &study.vasicek),
                ("lowrate_ehrenfest.csv", &study.ehrenfest),
            ];
            for (name, curve) in files {
                let path = dir.join(name);
                experiments::write_curve_csv(&path, curve).map_err(io_context(&path))?;
                written.push(path);
            }
            for (i, points) in study.vasicek_paths.iter().enumerate() {
                let path = dir.join(format!("paths_vasicek_{}.csv", i + 1));
                experiments::write_rate_path_csv(&path, points).map_err(io_context(&path))?;
                written.push(path);
            }
            let path = dir.join("paths_ehrenfest.csv");
            experiments::write_rate_path_csv(&path, &study.ehrenfest_rates())
                .map_err(io_context(&path))?;
            written.push(path);
        }
        Format::Json => {
            let doc = LowRateJson {
                vasicek: &study.vasicek,
                ehrenfest: &study.ehrenfest,
                vasicek_paths: &study.vasicek_paths,
                ehrenfest_path: study.ehrenfest_rates(),
            };
            let mut s = serde_json::to_string(&doc).expect("serializable study");
            s.push('\n');
            let path = dir.join("lowrate.json");
            emit(Some(&path), s.as_bytes())?;
            written.push(path);
        }
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
