//! Jordan types of p-nilpotent operators.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// A weakly decreasing list of positive block sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// `count` blocks of size `size`.
    pub fn uniform(size: usize, count: usize) -> Self {
        Self::new(vec![size; count])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Dominance order on partitions of the same integer; `None` when the
    /// totals differ or the two are incomparable.
    pub fn dominance_cmp(&self, other: &Partition) -> Option<Ordering> {
        if self.total() != other.total() {
            return None;
        }
        let n = self.parts.len().max(other.parts.len());
        let (mut sa, mut sb) = (0usize, 0usize);
        let (mut ge, mut le) = (true, true);
        for i in 0..n {
            sa += self.parts.get(i).copied().unwrap_or(0);
            sb += other.parts.get(i).copied().unwrap_or(0);
            ge &= sa >= sb;
            le &= sa <= sb;
        }
        match (ge, le) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Greater),
            (false, true) => Some(Ordering::Less),
            (false, false) => None,
        }
    }

    pub fn dominates(&self, other: &Partition) -> bool {
        matches!(
            self.dominance_cmp(other),
            Some(Ordering::Greater | Ordering::Equal)
        )
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// Jordan type of `n`, which must satisfy `n^p = 0`.
///
/// The number of blocks of size at least j is rank(n^{j-1}) - rank(n^j).
pub fn jordan_type(n: &Matrix, p: u32) -> Result<Partition> {
    if !n.is_square() {
        return Err(Error::Shape("Jordan type of a non-square matrix".into()));
    }
    let d = n.rows();
    let mut ranks = vec![d];
    let mut power = Matrix::identity(n.field(), d);
    for _ in 0..p {
        power = power.mul(n)?;
        ranks.push(power.rank());
    }
    if ranks[p as usize] != 0 {
        return Err(Error::NotNilpotent { p });
    }
    let at_least: Vec<usize> = (1..=p as usize).map(|j| ranks[j - 1] - ranks[j]).collect();
    let mut parts = Vec::with_capacity(at_least[0]);
    for j in 1..=p as usize {
        let next = at_least.get(j).copied().unwrap_or(0);
        parts.extend(std::iter::repeat(j).take(at_least[j - 1] - next));
    }
    Ok(Partition::new(parts))
}

/// Whether `n` makes its space a free K[t]/t^p-module.
pub fn is_free_over_truncated_line(n: &Matrix, p: u32) -> Result<bool> {
    let jt = jordan_type(n, p)?;
    Ok(jt.parts().iter().all(|&b| b == p as usize))
}

/// Freeness test for an operator already known to satisfy `n^p = 0`: the
/// space is free iff p divides its dimension and n has the rank of a sum of
/// full blocks.
pub fn is_free_nilpotent(n: &Matrix, p: u32) -> bool {
    let d = n.rows();
    let p = p as usize;
    d % p == 0 && n.rank() == d - d / p
}
