use std::collections::HashMap;

use super::partition::Partition;

/// Eigenvalue vector `z = (z_1, ..., z_n)` of a symmetric matrix argument.
///
/// Repeated entries are allowed; nothing here divides by `z_i - z_j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatrixArg {
    eigenvalues: Vec<f64>,
}

impl MatrixArg {
    pub fn new(eigenvalues: impl Into<Vec<f64>>) -> Self {
        MatrixArg {
            eigenvalues: eigenvalues.into(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        MatrixArg::new(vec![0.0; n])
    }

    /// `n` eigenvalues of which `count` equal `value` and the rest are zero.
    pub fn two_level(n: usize, count: usize, value: f64) -> Self {
        assert!(count <= n, "count {count} exceeds dimension {n}");
        let mut z = vec![value; count];
        z.resize(n, 0.0);
        MatrixArg::new(z)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn is_zero(&self) -> bool {
        self.eigenvalues.iter().all(|&z| z == 0.0)
    }
}

/// Evaluates Schur polynomials `s_m(z)` at a fixed point by the branching
/// rule `s_m(z_1..z_n) = sum_{m/mu horizontal strip} z_n^{|m|-|mu|} s_mu(z_1..z_{n-1})`.
///
/// Intermediate values are cached, so evaluating every partition up to a
/// given weight costs little more than evaluating the largest one.
#[derive(Debug, Clone)]
pub struct SchurEvaluator {
    z: Vec<f64>,
    memo: HashMap<(Vec<u32>, usize), f64>,
}

impl SchurEvaluator {
    pub fn new(z: &MatrixArg) -> Self {
        // Zeros peel off first: a zero variable only admits the empty strip.
        let mut values = z.eigenvalues().to_vec();
        values.sort_by_key(|&v| v == 0.0);
        SchurEvaluator {
            z: values,
            memo: HashMap::new(),
        }
    }

    /// `s_m(z)`, zero when `m` has more parts than `z` has entries.
    pub fn schur(&mut self, m: &Partition) -> f64 {
        let n = self.z.len();
        self.eval(m.parts(), n)
    }

    fn eval(&mut self, lambda: &[u32], nvars: usize) -> f64 {
        if lambda.is_empty() {
            return 1.0;
        }
        if lambda.len() > nvars {
            return 0.0;
        }
        let x = self.z[nvars - 1];
        if x == 0.0 {
            return self.eval(lambda, nvars - 1);
        }
        if let Some(&v) = self.memo.get(&(lambda.to_vec(), nvars)) {
            return v;
        }

        let len = lambda.len();
        let lower = |i: usize| if i + 1 < len { lambda[i + 1] } else { 0 };
        // slots at index >= nvars - 1 must be empty in s_mu(z_1..z_{n-1})
        let upper = |i: usize| if i + 1 >= nvars { 0 } else { lambda[i] };
        if (0..len).any(|i| lower(i) > upper(i)) {
            self.memo.insert((lambda.to_vec(), nvars), 0.0);
            return 0.0;
        }

        let total: u32 = lambda.iter().sum();
        let mut mu: Vec<u32> = (0..len).map(upper).collect();
        let mut sum = 0.0;
        loop {
            let mu_weight: u32 = mu.iter().sum();
            let trimmed: Vec<u32> = mu.iter().copied().take_while(|&m| m > 0).collect();
            let sub = self.eval(&trimmed, nvars - 1);
            if sub != 0.0 {
                sum += x.powi((total - mu_weight) as i32) * sub;
            }
            // odometer step, decreasing from the last slot
            let mut i = len;
            loop {
                if i == 0 {
                    self.memo.insert((lambda.to_vec(), nvars), sum);
                    return sum;
                }
                i -= 1;
                if mu[i] > lower(i) {
                    mu[i] -= 1;
                    for (j, slot) in mu.iter_mut().enumerate().skip(i + 1) {
                        *slot = upper(j);
                    }
                    break;
                }
            }
        }
    }
}

/// Number of standard Young tableaux of shape `m`, `|m|! / prod hooks`.
///
/// This is the factor turning `s_m` into the normalized Schur function
/// `Z_m`, chosen so that `sum_{|m|=j} Z_m(z) = (z_1 + ... + z_n)^j`.
pub fn standard_tableaux(m: &Partition) -> f64 {
    let mut value = 1.0;
    let mut k = 0.0;
    for (r, c) in m.cells() {
        k += 1.0;
        value *= k / m.hook(r, c) as f64;
    }
    value
}

/// Normalized Schur function `Z_m(z)`; zero when `m` has more parts than `z`.
pub fn schur_normalized(m: &Partition, z: &MatrixArg) -> f64 {
    if m.len() > z.dim() {
        return 0.0;
    }
    standard_tableaux(m) * SchurEvaluator::new(z).schur(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::partition::Partitions;

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn single_variable_is_monomial() {
        for j in 0..8 {
            let z = MatrixArg::new(vec![1.7]);
            let v = schur_normalized(&Partition::row(j), &z);
            assert!((v - 1.7f64.powi(j as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_argument() {
        let z = MatrixArg::zeros(3);
        assert_eq!(schur_normalized(&part(&[2, 1]), &z), 0.0);
        assert_eq!(schur_normalized(&Partition::empty(), &z), 1.0);
    }

    #[test]
    fn too_many_parts_is_zero() {
        let z = MatrixArg::new(vec![1.0, 2.0]);
        assert_eq!(schur_normalized(&part(&[1, 1, 1]), &z), 0.0);
    }

    #[test]
    fn known_small_polynomials() {
        let (a, b, c) = (0.3, -1.2, 2.5);
        let z = MatrixArg::new(vec![a, b, c]);
        let mut ev = SchurEvaluator::new(&z);
        // s_(1,1) = e_2, s_(2) = h_2, s_(2,1) = (a+b)(a+c)(b+c)
        let e2 = a * b + a * c + b * c;
        let h2 = a * a + b * b + c * c + e2;
        assert!((ev.schur(&part(&[1, 1])) - e2).abs() < 1e-12);
        assert!((ev.schur(&part(&[2])) - h2).abs() < 1e-12);
        let s21 = (a + b) * (a + c) * (b + c);
        assert!((ev.schur(&part(&[2, 1])) - s21).abs() < 1e-12);
        assert!((ev.schur(&part(&[1, 1, 1])) - a * b * c).abs() < 1e-12);
    }

    #[test]
    fn normalization_sums_to_power_of_trace() {
        let z = MatrixArg::new(vec![0.4, -0.9, 1.3, 0.0]);
        let trace: f64 = z.eigenvalues().iter().sum();
        for j in 0..7u32 {
            let total: f64 = Partitions::new(j, z.dim())
                .map(|m| schur_normalized(&m, &z))
                .sum();
            assert!((total - trace.powi(j as i32)).abs() < 1e-10, "j={j}");
        }
    }

    #[test]
    fn standard_tableaux_counts() {
        assert_eq!(standard_tableaux(&part(&[2, 1])), 2.0);
        assert_eq!(standard_tableaux(&part(&[3, 2])), 5.0);
        assert!((standard_tableaux(&part(&[3, 2, 1])) - 16.0).abs() < 1e-12);
        assert_eq!(standard_tableaux(&Partition::row(9)), 1.0);
    }

    #[test]
    fn repeated_and_zero_entries_in_any_order() {
        let m = part(&[3, 1]);
        let a = schur_normalized(&m, &MatrixArg::new(vec![0.0, 2.0, 0.0, 2.0]));
        let b = schur_normalized(&m, &MatrixArg::new(vec![2.0, 2.0, 0.0, 0.0]));
        assert!((a - b).abs() < 1e-12);
        // s_(3,1)(2,2) = 2^4 s_(3,1)(1,1) = 16 * 3
        assert!((b - standard_tableaux(&m) * 48.0).abs() < 1e-10);
    }
}
