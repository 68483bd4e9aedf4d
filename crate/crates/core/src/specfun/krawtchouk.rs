//! Krawtchouk polynomials `K_l(x; N, p)`, orthogonal with respect to the
//! binomial weight `omega(x) = C(N,x) p^x q^(N-x)` on `{0, ..., N}`.

use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};

/// Above this `N` binomial coefficients are evaluated in log space.
const EXACT_BINOMIAL_MAX_N: u32 = 60;

/// Binomial coefficients `C(n, k)` for `0 <= k <= n <= N`.
#[derive(Debug, Clone)]
enum Binomials {
    Table(Vec<Vec<f64>>),
    Log,
}

impl Binomials {
    fn new(n: u32) -> Self {
        if n > EXACT_BINOMIAL_MAX_N {
            return Binomials::Log;
        }
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n as usize + 1);
        for i in 0..=n as usize {
            let mut row = vec![1.0; i + 1];
            for k in 1..i {
                row[k] = rows[i - 1][k - 1] + rows[i - 1][k];
            }
            rows.push(row);
        }
        Binomials::Table(rows)
    }

    fn ln(&self, n: u32, k: u32) -> f64 {
        match self {
            Binomials::Table(rows) => rows[n as usize][k as usize].ln(),
            Binomials::Log => ln_binomial(n as u64, k as u64),
        }
    }

    fn get(&self, n: u32, k: u32) -> f64 {
        if k > n {
            return 0.0;
        }
        match self {
            Binomials::Table(rows) => rows[n as usize][k as usize],
            Binomials::Log => ln_binomial(n as u64, k as u64).exp(),
        }
    }
}

/// Precomputed weights for Krawtchouk evaluation at fixed `(N, p)`.
#[derive(Debug, Clone)]
pub struct KrawtchoukContext {
    n: u32,
    p: f64,
    q: f64,
    omega: Vec<f64>,
    pi: Vec<f64>,
    binomials: Binomials,
}

impl KrawtchoukContext {
    pub fn new(n: u32, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("N", "must be at least 1"));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::param("p", format!("{p} is not in (0,1)")));
        }
        let q = 1.0 - p;
        let binomials = Binomials::new(n);
        let (ln_p, ln_q) = (p.ln(), q.ln());
        let omega = (0..=n)
            .map(|x| (binomials.ln(n, x) + x as f64 * ln_p + (n - x) as f64 * ln_q).exp())
            .collect();
        let pi = (0..=n)
            .map(|l| (binomials.ln(n, l) + l as f64 * (ln_p - ln_q)).exp())
            .collect();
        Ok(KrawtchoukContext {
            n,
            p,
            q,
            omega,
            pi,
            binomials,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Binomial probability mass `omega(x)`.
    pub fn omega(&self, x: u32) -> f64 {
        self.omega[x as usize]
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omega
    }

    /// `pi_l = C(N,l) (p/q)^l`, the inverse squared norm of `K_l`.
    pub fn pi(&self, l: u32) -> f64 {
        self.pi[l as usize]
    }

    pub fn binomial(&self, n: u32, k: u32) -> f64 {
        self.binomials.get(n, k)
    }

    fn check(&self, name: &str, v: u32) -> Result<()> {
        if v > self.n {
            Err(Error::Domain(format!(
                "{name} = {v} outside 0..={}",
                self.n
            )))
        } else {
            Ok(())
        }
    }

    /// `K_l(x)` from the finite binomial sum
    /// `C(N,l)^-1 sum_k (-1)^k C(N-x, l-k) C(x, k) (q/p)^k`.
    pub fn krawtchouk(&self, l: u32, x: u32) -> Result<f64> {
        self.check("l", l)?;
        self.check("x", x)?;
        Ok(self.eval_binomial_sum(l, x))
    }

    /// `K_l(x)` from the terminating Gauss series `2F1(-l, -x; -N; 1/p)`.
    /// Used as a cross-check of [`Self::krawtchouk`].
    pub fn krawtchouk_hypergeometric(&self, l: u32, x: u32) -> Result<f64> {
        self.check("l", l)?;
        self.check("x", x)?;
        let n = self.n as f64;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..l.min(x) {
            let k = k as f64;
            term *= (k - l as f64) * (k - x as f64) / ((k - n) * (k + 1.0) * self.p);
            sum += term;
        }
        Ok(sum)
    }

    pub(crate) fn eval_binomial_sum(&self, l: u32, x: u32) -> f64 {
        let n = self.n;
        let ratio = self.q / self.p;
        let k_min = l.saturating_sub(n - x);
        let k_max = l.min(x);
        let mut sum = 0.0;
        match &self.binomials {
            Binomials::Table(_) => {
                for k in k_min..=k_max {
                    let term = self.binomials.get(n - x, l - k)
                        * self.binomials.get(x, k)
                        * ratio.powi(k as i32);
                    sum += if k % 2 == 0 { term } else { -term };
                }
                sum / self.binomials.get(n, l)
            }
            Binomials::Log => {
                let ln_norm = self.binomials.ln(n, l);
                let ln_ratio = ratio.ln();
                for k in k_min..=k_max {
                    let term = (self.binomials.ln(n - x, l - k)
                        + self.binomials.ln(x, k)
                        + k as f64 * ln_ratio
                        - ln_norm)
                        .exp();
                    sum += if k % 2 == 0 { term } else { -term };
                }
                sum
            }
        }
    }

    /// `B_{m,l} = sum_x x K_l(x) K_m(x) omega(x)` in closed form:
    /// zero when `|m - l| >= 2`, `-l q / pi_{l-1}` when `m = l - 1`, and
    /// `((N-l) p + l q) / pi_l` when `m = l`; symmetric in `(m, l)`.
    pub fn krawtchouk_b(&self, m: u32, l: u32) -> Result<f64> {
        self.check("m", m)?;
        self.check("l", l)?;
        let (lo, hi) = if m <= l { (m, l) } else { (l, m) };
        let n = self.n as f64;
        Ok(if hi - lo >= 2 {
            0.0
        } else if hi == lo + 1 {
            -(hi as f64) * self.q / self.pi(lo)
        } else {
            ((n - hi as f64) * self.p + hi as f64 * self.q) / self.pi(hi)
        })
    }
}
