use std::fmt;

use crate::error::{Error, Result};

/// An integer partition `m_1 >= m_2 >= ... >= m_n >= 0`.
///
/// Stored in canonical form with trailing zeros stripped, so `(2, 1, 0)` and
/// `(2, 1)` compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::param(
                "partition",
                format!("parts {parts:?} are not non-increasing"),
            ));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    /// The empty partition of weight zero.
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Single-row partition `(j)`.
    pub fn row(j: u32) -> Self {
        if j == 0 {
            Partition::empty()
        } else {
            Partition(vec![j])
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of non-zero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|m|`, the sum of the parts.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Hook length of the cell in row `r`, column `c` (both zero-based).
    pub(crate) fn hook(&self, r: usize, c: usize) -> u32 {
        let arm = self.0[r] - c as u32 - 1;
        let leg = self.0[r + 1..]
            .iter()
            .take_while(|&&m| m as usize > c)
            .count() as u32;
        arm + leg + 1
    }

    /// Iterates `(row, column)` over the cells of the Young diagram.
    pub(crate) fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(r, &m)| (0..m as usize).map(move |c| (r, c)))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// Partitions of a fixed weight into at most `max_parts` parts, in reverse
/// lexicographic order: `(4), (3,1), (2,2), (2,1,1), (1,1,1,1)`.
#[derive(Debug, Clone)]
pub struct Partitions {
    current: Option<Vec<u32>>,
    max_parts: usize,
}

impl Partitions {
    pub fn new(weight: u32, max_parts: usize) -> Self {
        let current = if weight == 0 {
            Some(Vec::new())
        } else if max_parts == 0 {
            None
        } else {
            Some(vec![weight])
        };
        Partitions { current, max_parts }
    }

    fn advance(&self, parts: &[u32]) -> Option<Vec<u32>> {
        // Keep the longest prefix possible, lower the part at `i` by one and
        // refill greedily; the refill must fit in the remaining slots.
        let mut tail: u32 = 0;
        for i in (0..parts.len()).rev() {
            let part = parts[i];
            if part > 1 {
                let v = part - 1;
                let rem = tail + 1;
                let slots = self.max_parts - i - 1;
                if (rem as u64) <= (v as u64) * (slots as u64) {
                    let mut next = parts[..i].to_vec();
                    next.push(v);
                    let mut left = rem;
                    while left > 0 {
                        let take = left.min(v);
                        next.push(take);
                        left -= take;
                    }
                    return Some(next);
                }
            }
            tail += part;
        }
        None
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let parts = self.current.take()?;
        self.current = self.advance(&parts);
        Some(Partition(parts))
    }
}

/// Classical rising factorial `(x)_k = x (x+1) ... (x+k-1)`, `(x)_0 = 1`.
pub fn pochhammer(x: f64, k: u32) -> f64 {
    (0..k).map(|i| x + i as f64).product()
}

/// Generalized Pochhammer symbol `[a]_m = prod_j (a - j + 1)_{m_j}`.
pub fn gen_pochhammer(a: f64, m: &Partition) -> f64 {
    m.parts()
        .iter()
        .enumerate()
        .map(|(j, &mj)| pochhammer(a - j as f64, mj))
        .product()
}
