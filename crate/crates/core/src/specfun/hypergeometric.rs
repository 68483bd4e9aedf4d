use crate::error::{Error, Result};

use super::partition::{Partition, Partitions};
use super::schur::{MatrixArg, SchurEvaluator};

/// Value of a truncated series together with the size of its last block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// `|sum_{|m| = H} ...|`, the contribution of the highest retained weight.
    pub last_term: f64,
}

/// Checks that `[b]_m` cannot vanish for a partition with at most `n` parts:
/// none of `j - 1 - b`, `j = 1..n`, may be a non-negative integer.
pub fn check_lower_parameter(b: f64, n: usize) -> Result<()> {
    if !b.is_finite() {
        return Err(Error::param("b", format!("{b} is not finite")));
    }
    for j in 1..=n {
        let v = j as f64 - 1.0 - b;
        if v >= 0.0 && v.fract() == 0.0 {
            return Err(Error::param(
                "b",
                format!("{b} makes [b]_m vanish in row {j} (matrix dimension {n})"),
            ));
        }
    }
    Ok(())
}

/// Truncated confluent hypergeometric function of matrix argument,
/// `sum_{j=0}^{H} 1/j! sum_{|m|=j} [a]_m/[b]_m Z_m(z)`.
///
/// Partitions run over at most `dim(z)` parts. When `a` is a positive integer
/// the range shrinks further to at most `a` parts, since `[a]_m` vanishes
/// for longer partitions; for `a = 1` only single rows survive and the cost
/// is linear in `H`.
pub fn hyp1f1_matrix(a: f64, b: f64, z: &MatrixArg, order: u32) -> Result<SeriesSum> {
    if !a.is_finite() {
        return Err(Error::param("a", format!("{a} is not finite")));
    }
    if let Some(bad) = z.eigenvalues().iter().find(|v| !v.is_finite()) {
        return Err(Error::param("z", format!("eigenvalue {bad} is not finite")));
    }
    check_lower_parameter(b, z.dim())?;

    if z.dim() == 0 || z.is_zero() {
        return Ok(SeriesSum {
            value: 1.0,
            last_term: if order == 0 { 1.0 } else { 0.0 },
        });
    }

    let mut max_parts = z.dim();
    if a > 0.0 && a.fract() == 0.0 {
        max_parts = max_parts.min(a as usize);
    }

    if max_parts == 1 {
        return Ok(single_row_series(a, b, z.eigenvalues(), order));
    }

    let mut schur = SchurEvaluator::new(z);
    let mut value = 0.0;
    let mut last_term = 0.0;
    for weight in 0..=order {
        let block: f64 = Partitions::new(weight, max_parts)
            .map(|m| coefficient(a, b, &m) * schur.schur(&m))
            .sum();
        value += block;
        last_term = block.abs();
    }
    Ok(SeriesSum { value, last_term })
}

/// Only single-row partitions: `sum_j (a)_j / ((b)_j j!) h_j(z)` with the complete
/// homogeneous polynomials built variable by variable,
/// `h_j(z_1..z_m) = h_j(z_1..z_{m-1}) + z_m h_{j-1}(z_1..z_m)`.
fn single_row_series(a: f64, b: f64, z: &[f64], order: u32) -> SeriesSum {
    let order = order as usize;
    let mut h = vec![0.0; order + 1];
    h[0] = 1.0;
    for &x in z.iter().filter(|&&x| x != 0.0) {
        for j in 1..=order {
            h[j] += x * h[j - 1];
        }
    }
    let mut coef = 1.0;
    let mut value = 1.0;
    let mut last_term = 1.0;
    for (j, &hj) in h.iter().enumerate().skip(1) {
        let c = (j - 1) as f64;
        coef *= (a + c) / ((b + c) * (c + 1.0));
        last_term = coef * hj;
        value += last_term;
    }
    SeriesSum {
        value,
        last_term: last_term.abs(),
    }
}

/// `[a]_m / ([b]_m |m|!) * f^m`, built cell by cell so nothing overflows:
/// the cell `(r, c)` contributes `(a - r + c) / ((b - r + c) hook(r, c))`.
fn coefficient(a: f64, b: f64, m: &Partition) -> f64 {
    m.cells()
        .map(|(r, c)| {
            let shift = c as f64 - r as f64;
            (a + shift) / ((b + shift) * m.hook(r, c) as f64)
        })
        .product()
}

/// Classical scalar partial sum `sum_{j<=H} (a)_j / ((b)_j j!) x^j`.
pub fn hyp1f1_scalar(a: f64, b: f64, x: f64, order: u32) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..order {
        let j = j as f64;
        term *= (a + j) / ((b + j) * (j + 1.0)) * x;
        sum += term;
    }
    sum
}
