//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any failed.

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ehrenfest_core::ehrenfest::{
    conditional_mean, conditional_variance, simulate_path, stationary_pmf, transition_matrix,
    BirthDeathRates, EhrenfestParams,
};
use ehrenfest_core::experiments::{run_convergence, run_lowrate_study, Scenario};
use ehrenfest_core::pricing::{
    price_fk_oracle, price_general, price_mc_oracle, price_symmetric, Truncation,
};
use ehrenfest_core::shortrate::ShortRateModel;
use ehrenfest_core::specfun::{
    hyp1f1_matrix, hyp1f1_scalar, pochhammer, KrawtchoukContext, MatrixArg,
};

type Outcome = Result<String, String>;

fn check(ok: bool, pass: String, fail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(pass)
    } else {
        Err(fail())
    }
}

const GRID_N: [u32; 5] = [1, 2, 4, 8, 16];
const GRID_AB: [(f64, f64); 3] = [(1.0, 1.0), (0.4, 0.7), (0.1, 0.3)];
const GRID_LAMBDA: [f64; 2] = [0.5, 1.0];
const GRID_TAU: [f64; 3] = [0.25, 1.0, 5.0];

fn grid_model(n: u32, lambda: f64, alpha: f64, beta: f64) -> ShortRateModel {
    let e = EhrenfestParams::new(n, lambda, alpha, beta).unwrap();
    ShortRateModel::new(e, 0.01, 0.09).unwrap()
}

fn criterion_1() -> Outcome {
    let trunc = Truncation::new(14, 40);
    let start = Instant::now();
    let (mut worst_general, mut worst_symmetric, mut count) = (0.0f64, 0.0f64, 0);
    let mut failure = None;
    for &n in &GRID_N {
        for &(alpha, beta) in &GRID_AB {
            for &lambda in &GRID_LAMBDA {
                let model = grid_model(n, lambda, alpha, beta);
                for &tau in &GRID_TAU {
                    for k in 0..=n {
                        let r = model.rate(k);
                        let fk = price_fk_oracle(&model, 0.0, tau, r).unwrap();
                        let g = price_general(&model, 0.0, tau, r, trunc).unwrap().price;
                        let rel = ((g - fk) / fk).abs();
                        worst_general = worst_general.max(rel);
                        count += 1;
                        if rel > 1e-4 && failure.is_none() {
                            failure = Some(format!("general N={n} a={alpha} b={beta} l={lambda} tau={tau} k={k}: rel {rel:e}"));
                        }
                        if model.ehrenfest().is_symmetric() {
                            let s = price_symmetric(&model, 0.0, tau, r, trunc).unwrap().price;
                            let rel = ((s - fk) / fk).abs();
                            worst_symmetric = worst_symmetric.max(rel);
                            count += 1;
                            if rel > 1e-4 && failure.is_none() {
                                failure = Some(format!(
                                    "symmetric N={n} l={lambda} tau={tau} k={k}: rel {rel:e}"
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 300.0 && failure.is_none() {
        failure = Some(format!("runtime {secs:.1}s exceeds 5 minutes"));
    }
    match failure {
        None => Ok(format!(
            "{count} prices vs Feynman-Kac, max rel error general {worst_general:.2e}, symmetric {worst_symmetric:.2e} ({secs:.1}s)"
        )),
        Some(f) => Err(f),
    }
}

fn criterion_2() -> Outcome {
    let trunc = Truncation::new(14, 40);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &n in &GRID_N {
        for &lambda in &GRID_LAMBDA {
            let model = grid_model(n, lambda, 1.0, 1.0);
            for &tau in &GRID_TAU {
                for k in 0..=n {
                    let r = model.rate(k);
                    let g = price_general(&model, 0.0, tau, r, trunc).unwrap().price;
                    let s = price_symmetric(&model, 0.0, tau, r, trunc).unwrap().price;
                    worst = worst.max(((g - s) / s).abs());
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst <= 1e-5 && secs < 60.0,
        format!("max rel gap general vs symmetric {worst:.2e} ({secs:.1}s)"),
        || format!("max rel gap {worst:e}, runtime {secs:.1}s"),
    )
}

/// Sum of absolute summands of the binomial-sum form of `K_l(x)`.
fn summand_scale(ctx: &KrawtchoukContext, l: u32, x: u32) -> f64 {
    let n = ctx.n();
    let ratio = ctx.q() / ctx.p();
    let lo = l.saturating_sub(n - x);
    (lo..=l.min(x))
        .map(|k| ctx.binomial(n - x, l - k) * ctx.binomial(x, k) * ratio.powi(k as i32))
        .sum::<f64>()
        / ctx.binomial(n, l)
}

fn criterion_3() -> Outcome {
    let mut worst = [0.0f64; 5];
    for n in 1..=30u32 {
        for &p in &[0.2, 0.5, 0.8] {
            let ctx = KrawtchoukContext::new(n, p).unwrap();
            let kv: Vec<Vec<f64>> = (0..=n)
                .map(|l| (0..=n).map(|x| ctx.krawtchouk(l, x).unwrap()).collect())
                .collect();
            let scale: Vec<Vec<f64>> = (0..=n)
                .map(|l| {
                    (0..=n)
                        .map(|x| summand_scale(&ctx, l, x).max(1.0))
                        .collect()
                })
                .collect();
            let (nn, q) = (n as f64, ctx.q());
            // orthonormal vectors u_l(x) = sqrt(pi_l omega(x)) K_l(x)
            let u: Vec<Vec<f64>> = (0..=n as usize)
                .map(|l| {
                    (0..=n as usize)
                        .map(|x| (ctx.pi(l as u32) * ctx.omega(x as u32)).sqrt() * kv[l][x])
                        .collect()
                })
                .collect();
            for l in 0..=n as usize {
                for m in 0..=n as usize {
                    let dot: f64 = (0..=n as usize).map(|x| u[l][x] * u[m][x]).sum();
                    let delta = if l == m { 1.0 } else { 0.0 };
                    worst[0] = worst[0].max((dot - delta).abs());
                }
                for x in 0..=n as usize {
                    let sym = (kv[l][x] - kv[x][l]).abs() / scale[l][x];
                    worst[1] = worst[1].max(sym);

                    let lf = l as f64;
                    let up = if l < n as usize {
                        (nn - lf) * p * kv[l + 1][x]
                    } else {
                        0.0
                    };
                    let down = if l > 0 { lf * q * kv[l - 1][x] } else { 0.0 };
                    let mid = ((nn - lf) * p + lf * q) * kv[l][x];
                    let residual = -(x as f64) * kv[l][x] - (up - mid + down);
                    let mag = (nn - lf) * p * scale.get(l + 1).map_or(0.0, |row| row[x])
                        + ((nn - lf) * p + lf * q + x as f64) * scale[l][x]
                        + if l > 0 { lf * q * scale[l - 1][x] } else { 0.0 };
                    worst[2] = worst[2].max(residual.abs() / mag.max(1.0));
                }
            }
            for i in 0..=n {
                for &s in &[-0.7, 0.3, 1.1] {
                    let lhs = (1.0 - q / p * s).powi(i as i32) * (1.0 + s).powi((n - i) as i32);
                    let (mut rhs, mut mag) = (0.0, 0.0);
                    for l in 0..=n {
                        let w = ctx.binomial(n, l) * s.powi(l as i32);
                        rhs += w * kv[l as usize][i as usize];
                        mag += w.abs() * scale[l as usize][i as usize];
                    }
                    worst[3] = worst[3].max((lhs - rhs).abs() / mag.max(1.0));
                }
            }
            for m in 0..=n {
                for l in 0..=n {
                    let brute: f64 = (0..=n as usize)
                        .map(|x| x as f64 * u[l as usize][x] * u[m as usize][x])
                        .sum::<f64>();
                    let closed = ctx.krawtchouk_b(m, l).unwrap() * (ctx.pi(l) * ctx.pi(m)).sqrt();
                    worst[4] = worst[4].max((brute - closed).abs());
                }
            }
        }
    }
    let limits = [1e-9, 1e-10, 1e-9, 1e-9, 1e-9];
    let names = [
        "orthogonality",
        "symmetry",
        "recurrence",
        "generating function",
        "B closed form",
    ];
    let summary = names
        .iter()
        .zip(&worst)
        .map(|(n, w)| format!("{n} {w:.1e}"))
        .collect::<Vec<_>>()
        .join(", ");
    check(
        worst.iter().zip(&limits).all(|(w, l)| w <= l),
        format!("N<=30, p in {{0.2,0.5,0.8}}: {summary}"),
        || summary.clone(),
    )
}

fn expm(a: &[Vec<f64>], t: f64) -> DMatrix<f64> {
    let n = a.len();
    DMatrix::from_fn(n, n, |i, j| a[i][j] * t).exp()
}

fn criterion_4() -> Outcome {
    let mut worst = [0.0f64; 5];
    let param_sets = [
        (1.0, 0.4, 0.7),
        (0.5, 1.0, 1.0),
        (2.0, 0.1, 0.3),
        (1.3, 0.9, 0.2),
    ];
    let times = [0.1, 0.5, 1.3, 4.0];
    for n in 1..=10u32 {
        for &(lambda, alpha, beta) in &param_sets {
            let e = EhrenfestParams::new(n, lambda, alpha, beta).unwrap();
            let size = n as usize + 1;
            let id = transition_matrix(0.0, &e).unwrap();
            for (i, row) in id.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let d = if i == j { 1.0 } else { 0.0 };
                    worst[1] = worst[1].max((v - d).abs());
                }
            }
            let q = BirthDeathRates::new(&e).generator();
            for &s in &times {
                let ps = transition_matrix(s, &e).unwrap();
                for row in &ps {
                    worst[0] = worst[0].max((row.iter().sum::<f64>() - 1.0).abs());
                }
                let dense = expm(&q, s);
                for i in 0..size {
                    for j in 0..size {
                        worst[3] = worst[3].max((ps[i][j] - dense[(i, j)]).abs());
                    }
                }
                for &t in &times {
                    let pt = transition_matrix(t, &e).unwrap();
                    let pst = transition_matrix(s + t, &e).unwrap();
                    for i in 0..size {
                        for j in 0..size {
                            let ck: f64 = (0..size).map(|k| ps[i][k] * pt[k][j]).sum();
                            worst[2] = worst[2].max((ck - pst[i][j]).abs());
                        }
                    }
                }
            }
            let pmf = stationary_pmf(&e);
            let far = transition_matrix(50.0 / e.speed(), &e).unwrap();
            for row in &far {
                let tv: f64 = row
                    .iter()
                    .zip(&pmf)
                    .map(|(a, b)| (a - b).abs())
                    .sum::<f64>()
                    / 2.0;
                worst[4] = worst[4].max(tv);
            }
        }
    }
    let limits = [1e-9, 1e-12, 1e-8, 1e-8, 1e-8];
    let names = [
        "row sums",
        "identity at 0",
        "Chapman-Kolmogorov",
        "vs expm(tQ)",
        "TV to binomial",
    ];
    let summary = names
        .iter()
        .zip(&worst)
        .map(|(n, w)| format!("{n} {w:.1e}"))
        .collect::<Vec<_>>()
        .join(", ");
    check(
        worst.iter().zip(&limits).all(|(w, l)| w <= l),
        format!("N<=10: {summary}"),
        || summary.clone(),
    )
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0f64;
    let param_sets = [
        (1.0, 0.5, 0.5),
        (0.7, 0.4, 0.7),
        (1.0, 0.1, 0.3),
        (2.0, 1.0, 0.25),
    ];
    for n in 1..=12u32 {
        for &(lambda, alpha, beta) in &param_sets {
            let e = EhrenfestParams::new(n, lambda, alpha, beta).unwrap();
            let model = ShortRateModel::new(e, 0.01, 0.07).unwrap();
            let h = model.step();
            for &t in &[0.0, 0.2, 0.7, 3.0] {
                let pm = transition_matrix(t, &e).unwrap();
                for i in 0..=n {
                    let row = &pm[i as usize];
                    let m1: f64 = row.iter().enumerate().map(|(j, p)| j as f64 * p).sum();
                    let m2: f64 = row
                        .iter()
                        .enumerate()
                        .map(|(j, p)| (j * j) as f64 * p)
                        .sum();
                    let mean = conditional_mean(i, t, &e).unwrap();
                    let var = conditional_variance(i, t, &e).unwrap();
                    worst = worst.max((m1 - mean).abs()).max((m2 - m1 * m1 - var).abs());

                    let r0 = model.rate(i);
                    let rm: f64 = row
                        .iter()
                        .enumerate()
                        .map(|(j, p)| model.rate(j as u32) * p)
                        .sum();
                    let rv: f64 = row
                        .iter()
                        .enumerate()
                        .map(|(j, p)| (model.rate(j as u32) - rm).powi(2) * p)
                        .sum();
                    worst = worst
                        .max((model.rate_mean(r0, t).unwrap() - rm).abs())
                        .max((model.rate_variance(r0, t).unwrap() - rv).abs());
                    worst = worst
                        .max((model.rate_mean(r0, t).unwrap() - (h * mean + model.r_min())).abs());
                }
            }
            // long-run limits
            let r0 = model.rate(0);
            let far = 60.0 / e.speed();
            worst = worst
                .max((model.rate_mean(r0, far).unwrap() - model.mean_reversion_level()).abs())
                .max(
                    (model.rate_variance(r0, far).unwrap() - model.stationary_rate_variance())
                        .abs(),
                );
        }
    }
    let lowrate =
        ShortRateModel::new(EhrenfestParams::new(160, 1.0, 0.1, 0.3).unwrap(), 0.0, 0.16).unwrap();
    let level = lowrate.mean_reversion_level();
    check(
        worst <= 1e-8 && (level - 0.04).abs() < 1e-12,
        format!("moments vs direct sums max gap {worst:.1e}, low-rate level {level}"),
        || format!("max gap {worst:e}, low-rate level {level}"),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for scenario in [Scenario::Favourable, Scenario::Unfavourable] {
        let rows = run_convergence(scenario, &[8, 128], Truncation::new(10, 30))
            .map_err(|e| e.to_string())?;
        let (e8, e128) = (rows[0].rel_error, rows[1].rel_error);
        ok &= e128 < e8;
        if scenario == Scenario::Favourable {
            ok &= e128 < 1e-2;
        }
        parts.push(format!(
            "{scenario}: rel_error N=8 {e8:.2e}, N=128 {e128:.2e}"
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 120.0;
    let summary = format!("{} ({secs:.1}s)", parts.join("; "));
    check(ok, summary.clone(), || summary)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let study = run_lowrate_study().map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let v = &study.vasicek.prices;
    let e = &study.ehrenfest.prices;
    let v_max = v.iter().cloned().fold(f64::MIN, f64::max);
    let v_nonmono = v.windows(2).any(|w| w[1] > w[0]) && v.windows(2).any(|w| w[1] < w[0]);
    let e_decreasing = e.windows(2).all(|w| w[1] < w[0]);
    let e_bounded = e.iter().all(|&p| p > 0.0 && p <= 1.0);
    let model = &study.ehrenfest_model;
    let path_ok = study
        .ehrenfest_rates()
        .iter()
        .all(|&(_, r)| (model.r_min()..=model.r_max()).contains(&r));
    let per_point = secs / 30.0;
    let summary = format!(
        "Vasicek max {v_max:.4} non-monotone {v_nonmono}; Ehrenfest P(0,1)={:.4} .. P(0,30)={:.4} strictly decreasing {e_decreasing}, path in bounds {path_ok} ({per_point:.2}s per point)",
        e[0], e[29]
    );
    check(
        v_max > 1.0 && v_nonmono && e_decreasing && e_bounded && path_ok && per_point <= 30.0,
        summary.clone(),
        || summary,
    )
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut parts = Vec::new();
    let mut ok = true;
    for case in 0..5u64 {
        let n = rng.random_range(1..=6u32);
        let lambda = rng.random_range(0.3..1.5);
        let alpha = rng.random_range(0.05..=1.0);
        let beta = rng.random_range(0.05..=1.0);
        let r_min = rng.random_range(0.0..0.05);
        let r_max = r_min + rng.random_range(0.02..0.15);
        let tau = rng.random_range(0.5..3.0);
        let k = rng.random_range(0..=n);
        let e = EhrenfestParams::new(n, lambda, alpha, beta).unwrap();
        let model = ShortRateModel::new(e, r_min, r_max).unwrap();
        let r = model.rate(k);
        let fk = price_fk_oracle(&model, 0.0, tau, r).unwrap();
        let mc = price_mc_oracle(&model, 0.0, tau, r, 100_000, 1000 + case).unwrap();
        let z = (mc.estimate - fk).abs() / mc.std_error;
        ok &= z <= 3.0;
        parts.push(format!("{z:.2}"));

        for seed in 0..20 {
            let path = simulate_path(k, 10.0, &e, seed).unwrap();
            ok &= path.states.iter().all(|&s| {
                let rate = model.rate(s);
                rate >= model.r_min() && rate <= model.r_max()
            });
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 120.0;
    let summary = format!(
        "|MC - FK| / stderr on 5 models: [{}], paths within bounds ({secs:.1}s)",
        parts.join(", ")
    );
    check(ok, summary.clone(), || summary)
}

/// Gauss-Legendre nodes and weights on [0, 1].
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            ((1.0 - x) / 2.0, 1.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `(a)_n int_simplex (1 - sum x)^(a-1) exp(z . x) dx` by stick-breaking
/// `x_j = u_j prod_{i<j} (1 - u_i)` and tensor Gauss-Legendre.
fn simplex_integral(a: f64, z: &[f64], nodes: &[(f64, f64)]) -> f64 {
    fn recurse(
        a: f64,
        z: &[f64],
        nodes: &[(f64, f64)],
        depth: usize,
        remaining: f64,
        dot: f64,
    ) -> f64 {
        let n = z.len();
        if depth == n {
            return remaining.powf(a - 1.0) * dot.exp();
        }
        nodes
            .iter()
            .map(|&(u, w)| {
                let x = remaining * u;
                // Jacobian factor of this coordinate is `remaining`
                w * remaining * recurse(a, z, nodes, depth + 1, remaining - x, dot + z[depth] * x)
            })
            .sum()
    }
    pochhammer(a, z.len() as u32) * recurse(a, z, nodes, 0, 1.0, 0.0)
}

fn criterion_9() -> Outcome {
    let mut worst = [0.0f64; 3];
    for &(a, b) in &[(1.0, 2.0), (0.5, 1.5), (2.3, 4.1), (-1.5, 0.7)] {
        for &x in &[-4.0, -0.7, 0.0, 0.9, 2.5] {
            let m = hyp1f1_matrix(a, b, &MatrixArg::new(vec![x]), 60)
                .unwrap()
                .value;
            let s = hyp1f1_scalar(a, b, x, 60);
            worst[0] = worst[0].max((m - s).abs() / s.abs().max(1.0));
        }
    }
    let nodes = gauss_legendre(24);
    for &a in &[1.0, 2.0, 2.5] {
        for z in [
            vec![-1.3],
            vec![0.8, -0.4],
            vec![-2.0, 0.5, 1.0],
            vec![-1.0, -0.3, 0.2, 0.6],
            vec![0.7, 0.7, -0.5, -0.5],
        ] {
            let n = z.len() as f64;
            let series = hyp1f1_matrix(1.0, a + n, &MatrixArg::new(z.clone()), 60)
                .unwrap()
                .value;
            let quad = simplex_integral(a, &z, &nodes);
            worst[1] = worst[1].max((series - quad).abs());
        }
    }
    let delta = 1e-7;
    for &(a, b) in &[(0.7, 3.3), (1.0, 4.0), (2.5, 5.2)] {
        for (rep, pert) in [
            (vec![0.6, 0.6, -1.1], vec![0.6, 0.6 + delta, -1.1]),
            (
                vec![-0.8, -0.8, -0.8],
                vec![-0.8, -0.8 + delta, -0.8 - delta],
            ),
            (vec![1.2, 1.2, 0.0, 0.0], vec![1.2 + delta, 1.2, delta, 0.0]),
        ] {
            let r = hyp1f1_matrix(a, b, &MatrixArg::new(rep), 40).unwrap().value;
            let p = hyp1f1_matrix(a, b, &MatrixArg::new(pert), 40)
                .unwrap()
                .value;
            worst[2] = worst[2].max((r - p).abs());
        }
    }
    let summary = format!(
        "scalar reduction {:.1e}, simplex integral {:.1e}, repeated vs perturbed {:.1e}",
        worst[0], worst[1], worst[2]
    );
    check(
        worst[0] <= 1e-12 && worst[1] <= 1e-6 && worst[2] <= 1e-6,
        summary.clone(),
        || summary,
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", criterion_1),
        ("series cross-check", criterion_2),
        ("Krawtchouk identities", criterion_3),
        ("semigroup", criterion_4),
        ("moment formulas", criterion_5),
        ("Vasicek convergence", criterion_6),
        ("low-rate pathology", criterion_7),
        ("Monte Carlo consistency", criterion_8),
        ("1F1 kernel", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} [{name}]: PASS - {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL - {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
