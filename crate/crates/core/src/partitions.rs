//! Partitions, hook numbers and the exact combinatorial counts.

use std::fmt;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest `n` that [`enumerate_partitions`] accepts unless overridden.
pub const DEFAULT_ENUMERATION_CAP: usize = 60;

/// A partition: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput(
                "partition parts must be positive".into(),
            ));
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "partition parts must be weakly decreasing".into(),
            ));
        }
        Ok(Partition { parts })
    }

    /// The unique partition of 0.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Transpose of the Ferrers diagram.
    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (0..width)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

/// Streams the partitions of `n` in reverse lexicographic order, starting
/// from `(n)` and ending at `(1, …, 1)`.
#[derive(Debug)]
pub struct Partitions {
    current: Option<Vec<usize>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let out = self.current.take()?;
        self.current = next_reverse_lex(&out);
        Some(Partition { parts: out })
    }
}

fn next_reverse_lex(parts: &[usize]) -> Option<Vec<usize>> {
    // Rightmost part larger than one gets decremented, and the remainder is
    // refilled greedily with parts no larger than the new value.
    let pos = parts.iter().rposition(|&p| p > 1)?;
    let mut next = parts[..pos].to_vec();
    let v = parts[pos] - 1;
    let mut rest = parts[pos..].iter().sum::<usize>();
    while rest > 0 {
        let take = v.min(rest);
        next.push(take);
        rest -= take;
    }
    Some(next)
}

/// All partitions of `n`, rejecting `n > cap`.
pub fn enumerate_partitions(n: usize, cap: usize) -> Result<Partitions> {
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    let first = if n == 0 { Vec::new() } else { vec![n] };
    Ok(Partitions {
        current: Some(first),
    })
}

/// Hook numbers of a partition, one row per part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookGrid {
    rows: Vec<Vec<usize>>,
}

impl HookGrid {
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().flatten().copied()
    }
}

/// Hook numbers via the conjugate: `H(i,j) = λ_i − j + λ'_j − i − 1` with
/// zero-based `i, j`.
pub fn hook_grid(lambda: &Partition) -> HookGrid {
    let conj = lambda.conjugate();
    let rows = lambda
        .parts
        .iter()
        .enumerate()
        .map(|(i, &len)| (0..len).map(|j| len - j + conj.parts[j] - i - 1).collect())
        .collect();
    HookGrid { rows }
}

/// `#H_t(λ)`: how many hook numbers are multiples of `t`.
pub fn count_t_hooks(lambda: &Partition, t: usize) -> usize {
    assert!(t >= 2, "t must be at least 2");
    hook_grid(lambda).cells().filter(|h| h % t == 0).count()
}

/// Counts of partitions with an even and odd number of `t`-hooks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParitySplit {
    pub even_count: u64,
    pub odd_count: u64,
}

impl ParitySplit {
    pub fn total(&self) -> u64 {
        self.even_count + self.odd_count
    }

    /// `p_t^e(n) − p_t^o(n)`.
    pub fn difference(&self) -> i64 {
        self.even_count as i64 - self.odd_count as i64
    }
}

/// Splits the partitions of `n` by the parity of `#H_t(λ)`, by enumeration.
pub fn parity_split_bruteforce(n: usize, t: usize, cap: usize) -> Result<ParitySplit> {
    if t < 2 {
        return Err(Error::InvalidInput(format!(
            "t must be at least 2, got {t}"
        )));
    }
    let mut split = ParitySplit {
        even_count: 0,
        odd_count: 0,
    };
    for lambda in enumerate_partitions(n, cap)? {
        if count_t_hooks(&lambda, t) % 2 == 0 {
            split.even_count += 1;
        } else {
            split.odd_count += 1;
        }
    }
    Ok(split)
}

static PARTITION_TABLE: RwLock<Vec<BigInt>> = RwLock::new(Vec::new());

/// `p(n)` from Euler's pentagonal recurrence, memoized for the process.
pub fn partition_count(n: usize) -> BigInt {
    if let Some(v) = PARTITION_TABLE.read().expect("partition table lock").get(n) {
        return v.clone();
    }
    let mut table = PARTITION_TABLE.write().expect("partition table lock");
    if table.is_empty() {
        table.push(BigInt::one());
    }
    while table.len() <= n {
        let m = table.len();
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let mut term = table[m - g1].clone();
            if g2 <= m {
                term += &table[m - g2];
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        table.push(acc);
    }
    table[n].clone()
}

/// `p(0), …, p(n)`.
pub fn partition_counts_upto(n: usize) -> Vec<BigInt> {
    partition_count(n);
    PARTITION_TABLE.read().expect("partition table lock")[..=n].to_vec()
}

/// Number of standard Young tableaux of shape `λ` (hook length formula).
pub fn ftr_degree(lambda: &Partition) -> Result<BigUint> {
    let n = lambda.n();
    let factorial: BigUint = (1..=n).fold(BigUint::one(), |acc, i| acc * i);
    let hooks: BigUint = hook_grid(lambda)
        .cells()
        .fold(BigUint::one(), |acc, h| acc * h);
    let (q, r) = factorial.div_rem(&hooks);
    if !r.is_zero() {
        return Err(Error::InexactDivision(lambda.to_string()));
    }
    Ok(q)
}
