//! Numerical studies: convergence of the mapped chain to Vasicek, and the
//! low-rate comparison where Vasicek bond prices exceed one.
//!
//! CSV output is UTF-8 with LF line endings and floats in shortest
//! round-trip form. Files are written to a temporary sibling and renamed.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::ehrenfest::{simulate_path, EhrenfestParams, PathSample};
use crate::error::{Error, Result};
use crate::pricing::{
    price_general, price_symmetric, price_vasicek, simulate_vasicek_euler,
    vasicek_to_ehrenfest_with, IntensityConvention, Truncation, VasicekParams,
};
use crate::shortrate::ShortRateModel;

/// Default sweep over the number of balls.
pub const DEFAULT_NS: [u32; 7] = [4, 8, 16, 32, 64, 128, 200];

/// The two Vasicek parameter sets of the convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// `k = 0.2, sigma = 0.05, T = 1, theta = 0.08, r0 = 0.05`.
    Favourable,
    /// `k = 0.2, sigma = 0.2, T = 10, theta = 0.08, r0 = 0.05`.
    Unfavourable,
}

impl Scenario {
    pub fn vasicek(self) -> VasicekParams {
        let sigma = match self {
            Scenario::Favourable => 0.05,
            Scenario::Unfavourable => 0.2,
        };
        VasicekParams {
            k: 0.2,
            theta: 0.08,
            sigma,
            r0: 0.05,
        }
    }

    pub fn maturity(self) -> f64 {
        match self {
            Scenario::Favourable => 1.0,
            Scenario::Unfavourable => 10.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Favourable => "favourable",
            Scenario::Unfavourable => "unfavourable",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "favourable" | "favorable" => Ok(Scenario::Favourable),
            "unfavourable" | "unfavorable" => Ok(Scenario::Unfavourable),
            other => Err(Error::param(
                "scenario",
                format!("`{other}` is not one of favourable, unfavourable"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub n: u32,
    /// Grid rate the initial rate was snapped to; both prices start here.
    pub r0_snapped: f64,
    pub price_ehrenfest: f64,
    pub price_vasicek: f64,
    pub rel_error: f64,
    pub wall_time_s: f64,
}

/// Prices the scenario bond in the mapped chain for every `N` and compares
/// with the Vasicek closed form. Rows come back sorted by `N`.
pub fn run_convergence(
    scenario: Scenario,
    ns: &[u32],
    trunc: Truncation,
) -> Result<Vec<ConvergenceRow>> {
    run_convergence_with(scenario, ns, trunc, IntensityConvention::default())
}

pub fn run_convergence_with(
    scenario: Scenario,
    ns: &[u32],
    trunc: Truncation,
    convention: IntensityConvention,
) -> Result<Vec<ConvergenceRow>> {
    if ns.is_empty() {
        return Err(Error::EmptyInput("list of N values"));
    }
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();

    let vasicek = scenario.vasicek();
    let maturity = scenario.maturity();
    ns.into_iter()
        .map(|n| {
            let model = vasicek_to_ehrenfest_with(&vasicek, n, convention)?;
            let (_, r0) = model.snap_to_grid(vasicek.r0)?;
            let ehrenfest = price_symmetric(&model, 0.0, maturity, r0, trunc)?;
            let reference = price_vasicek(&vasicek, 0.0, maturity, r0)?;
            Ok(ConvergenceRow {
                n,
                r0_snapped: r0,
                price_ehrenfest: ehrenfest.price,
                price_vasicek: reference,
                rel_error: (ehrenfest.price - reference).abs() / reference,
                wall_time_s: ehrenfest.wall_time_s,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelTag {
    Vasicek,
    Ehrenfest,
}

/// Bond prices `P(0, T)` against maturity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioCurve {
    pub model: ModelTag,
    pub maturities: Vec<f64>,
    pub prices: Vec<f64>,
}

/// Low-rate parameter sets: Vasicek `theta = 0.04, sigma = 0.05, k = 0.1,
/// r0 = 0.01` against the chain `alpha = 0.1, beta = 0.3, lambda = 1,
/// r_m = 0, r_M = 0.16, N = 160, R_0 = 0.01`. Both revert to four percent.
pub fn lowrate_vasicek() -> VasicekParams {
    VasicekParams {
        k: 0.1,
        theta: 0.04,
        sigma: 0.05,
        r0: 0.01,
    }
}

pub fn lowrate_ehrenfest() -> ShortRateModel {
    let params = EhrenfestParams::new(160, 1.0, 0.1, 0.3).expect("valid constants");
    ShortRateModel::new(params, 0.0, 0.16).expect("valid constants")
}

pub const LOWRATE_R0: f64 = 0.01;
pub const LOWRATE_HORIZON_YEARS: u32 = 30;
/// The 1F1 arguments reach -12 at thirty years, beyond what `H = 30` resolves.
pub const LOWRATE_TRUNCATION: Truncation = Truncation::new(10, 120);
pub const LOWRATE_SEED: u64 = 2024;
pub const VASICEK_PATHS: usize = 3;
/// Euler steps per year for the Vasicek sample paths.
pub const EULER_STEPS_PER_YEAR: usize = 365;

#[derive(Debug, Clone, PartialEq)]
pub struct LowRateStudy {
    pub vasicek: ScenarioCurve,
    pub ehrenfest: ScenarioCurve,
    /// Euler paths of the Vasicek rate as `(time, rate)`.
    pub vasicek_paths: Vec<Vec<(f64, f64)>>,
    /// Chain path; rates follow from [`LowRateStudy::ehrenfest_rates`].
    pub ehrenfest_path: PathSample,
    pub ehrenfest_model: ShortRateModel,
}

impl LowRateStudy {
    /// The chain path as `(jump time, rate)` pairs.
    pub fn ehrenfest_rates(&self) -> Vec<(f64, f64)> {
        let model = &self.ehrenfest_model;
        self.ehrenfest_path
            .times
            .iter()
            .zip(&self.ehrenfest_path.states)
            .map(|(&t, &k)| (t, model.rate(k)))
            .collect()
    }
}

pub fn run_lowrate_study() -> Result<LowRateStudy> {
    run_lowrate_study_with(LOWRATE_TRUNCATION, LOWRATE_SEED)
}

/// Vasicek path `i` uses seed `seed + i`; the chain path uses `seed`.
pub fn run_lowrate_study_with(trunc: Truncation, seed: u64) -> Result<LowRateStudy> {
    let vasicek = lowrate_vasicek();
    let model = lowrate_ehrenfest();
    let maturities: Vec<f64> = (1..=LOWRATE_HORIZON_YEARS).map(f64::from).collect();

    let vasicek_prices = maturities
        .iter()
        .map(|&t| price_vasicek(&vasicek, 0.0, t, vasicek.r0))
        .collect::<Result<Vec<_>>>()?;
    let ehrenfest_prices = maturities
        .iter()
        .map(|&t| price_general(&model, 0.0, t, LOWRATE_R0, trunc).map(|p| p.price))
        .collect::<Result<Vec<_>>>()?;

    let horizon = f64::from(LOWRATE_HORIZON_YEARS);
    let steps = EULER_STEPS_PER_YEAR * LOWRATE_HORIZON_YEARS as usize;
    let vasicek_paths = (0..VASICEK_PATHS as u64)
        .map(|i| simulate_vasicek_euler(&vasicek, horizon, steps, seed.wrapping_add(i)))
        .collect::<Result<Vec<_>>>()?;
    let k0 = model.rate_to_state(LOWRATE_R0)?;
    let ehrenfest_path = simulate_path(k0, horizon, model.ehrenfest(), seed)?;

    Ok(LowRateStudy {
        vasicek: ScenarioCurve {
            model: ModelTag::Vasicek,
            maturities: maturities.clone(),
            prices: vasicek_prices,
        },
        ehrenfest: ScenarioCurve {
            model: ModelTag::Ehrenfest,
            maturities,
            prices: ehrenfest_prices,
        },
        vasicek_paths,
        ehrenfest_path,
        ehrenfest_model: model,
    })
}

/// Writes `N,price_ehrenfest,price_vasicek,rel_error,wall_time_s`.
pub fn write_convergence_csv(path: &Path, rows: &[ConvergenceRow]) -> Result<()> {
    write_csv(
        path,
        &[
            "N",
            "price_ehrenfest",
            "price_vasicek",
            "rel_error",
            "wall_time_s",
        ],
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.price_ehrenfest.to_string(),
                r.price_vasicek.to_string(),
                r.rel_error.to_string(),
                r.wall_time_s.to_string(),
            ]
        }),
    )
}

/// Writes `T_years,price`.
pub fn write_curve_csv(path: &Path, curve: &ScenarioCurve) -> Result<()> {
    write_csv(
        path,
        &["T_years", "price"],
        curve
            .maturities
            .iter()
            .zip(&curve.prices)
            .map(|(t, p)| vec![t.to_string(), p.to_string()]),
    )
}

/// Writes `time,rate`.
pub fn write_rate_path_csv(path: &Path, points: &[(f64, f64)]) -> Result<()> {
    write_csv(
        path,
        &["time", "rate"],
        points
            .iter()
            .map(|(t, r)| vec![t.to_string(), r.to_string()]),
    )
}

/// Writes `time,state`.
pub fn write_state_path_csv(path: &Path, sample: &PathSample) -> Result<()> {
    write_csv(
        path,
        &["time", "state"],
        sample
            .times
            .iter()
            .zip(&sample.states)
            .map(|(t, s)| vec![t.to_string(), s.to_string()]),
    )
}

fn write_csv(
    path: &Path,
    header: &[&str],
    records: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut buf = Vec::new();
    {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut buf);
        writer.write_record(header)?;
        for record in records {
            writer.write_record(&record)?;
        }
        writer.flush()?;
    }
    write_atomic(path, &buf)
}

/// Writes `bytes` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}
