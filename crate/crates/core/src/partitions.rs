//! Compositions, Young diagrams, symmetric-group characters and symmetric
//! functions evaluated at the contents of a diagram.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{factorial, rat_int};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("sizes differ: {0} vs {1}")]
    SizeMismatch(u32, u32),
    #[error("invalid composition: parts must be positive and non-empty")]
    InvalidComposition,
    #[error("invalid partition: parts must be positive and weakly decreasing")]
    InvalidPartition,
}

/// Ordered tuple of positive integers: a labelled ramification profile.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(PartitionError::InvalidComposition);
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn to_partition(&self) -> YoungPartition {
        let mut p = self.parts.clone();
        p.sort_unstable_by(|a, b| b.cmp(a));
        YoungPartition { parts: p }
    }

    /// Multiplicity of each part length.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// `∏_ℓ m_ℓ!`, the number of labellings of the parts compatible with the lengths.
    pub fn label_factor(&self) -> BigInt {
        self.multiplicities().values().map(|&k| factorial(k)).product()
    }

    /// Sub-tuple at the given (0-based) indices.
    pub fn select(&self, idx: &[usize]) -> Option<Composition> {
        Composition::new(idx.iter().map(|&i| self.parts[i]).collect()).ok()
    }
}

impl TryFrom<Vec<u32>> for Composition {
    type Error = PartitionError;
    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        Composition::new(v)
    }
}

impl From<Composition> for Vec<u32> {
    fn from(c: Composition) -> Self {
        c.parts
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Weakly decreasing tuple of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungPartition {
    parts: Vec<u32>,
}

impl YoungPartition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::InvalidPartition);
        }
        Ok(YoungPartition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn as_composition(&self) -> Composition {
        Composition { parts: self.parts.clone() }
    }
}

/// All partitions of `n` in reverse lexicographic order, `(n)` first.
pub fn partitions_of(n: u32) -> Vec<YoungPartition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<YoungPartition>) {
        if n == 0 {
            out.push(YoungPartition { parts: cur.clone() });
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All compositions of `d` in lexicographic order.
pub fn compositions_of(d: u32) -> Vec<Composition> {
    fn rec(d: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if d == 0 {
            out.push(Composition { parts: cur.clone() });
            return;
        }
        for k in 1..=d {
            cur.push(k);
            rec(d - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(d, &mut Vec::new(), &mut out);
    }
    out
}

/// Contents `j − i` of the boxes `(i, j)`, row by row.
pub fn contents(lambda: &YoungPartition) -> Vec<i64> {
    let mut out = Vec::with_capacity(lambda.size() as usize);
    for (i, &row) in lambda.parts.iter().enumerate() {
        for j in 0..row as i64 {
            out.push(j - i as i64);
        }
    }
    out
}

/// Irreducible character `χ^λ` at cycle type `μ` (Murnaghan–Nakayama).
pub fn character(lambda: &YoungPartition, mu: &Composition) -> Result<BigInt, PartitionError> {
    if lambda.size() != mu.size() {
        return Err(PartitionError::SizeMismatch(lambda.size(), mu.size()));
    }
    let mut cycles = mu.to_partition().parts;
    cycles.reverse();
    let mut memo = HashMap::new();
    Ok(mn_rec(&lambda.parts, &cycles, &mut memo))
}

/// Remove rim hooks of the lengths in `cycles` (consumed from the back).
fn mn_rec(shape: &[u32], cycles: &[u32], memo: &mut HashMap<(Vec<u32>, usize), BigInt>) -> BigInt {
    let Some((&k, rest)) = cycles.split_last() else {
        return if shape.is_empty() { BigInt::one() } else { BigInt::zero() };
    };
    let key = (shape.to_vec(), cycles.len());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    // beta set: b_i = λ_i + (ℓ − 1 − i), distinct, decreasing
    let l = shape.len();
    let beta: Vec<i64> = shape.iter().enumerate().map(|(i, &p)| p as i64 + (l - 1 - i) as i64).collect();
    let mut total = BigInt::zero();
    for (i, &b) in beta.iter().enumerate() {
        let nb = b - k as i64;
        if nb < 0 || beta.contains(&nb) {
            continue;
        }
        let crossed = beta.iter().filter(|&&x| x > nb && x < b).count();
        let mut nbeta = beta.clone();
        nbeta[i] = nb;
        nbeta.sort_unstable_by(|a, b| b.cmp(a));
        let nl = nbeta.len();
        let new_shape: Vec<u32> =
            nbeta.iter().enumerate().map(|(j, &x)| (x - (nl - 1 - j) as i64) as u32).filter(|&p| p > 0).collect();
        let v = mn_rec(&new_shape, rest, memo);
        if crossed % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    memo.insert(key, total.clone());
    total
}

/// `z_μ = ∏_ℓ ℓ^{m_ℓ} m_ℓ!`.
pub fn centralizer_size(mu: &Composition) -> BigInt {
    mu.multiplicities().iter().map(|(&l, &m)| BigInt::from(l).pow(m) * factorial(m)).product()
}

/// Eigenvalue of `𝓕₂` on `v_λ`: the sum of contents.
pub fn f2_eigenvalue(lambda: &YoungPartition) -> Rational {
    rat_int(contents(lambda).iter().sum::<i64>())
}

/// `h_v` evaluated at the contents of `λ`.
pub fn complete_homogeneous_at_contents(lambda: &YoungPartition, v: u32) -> Rational {
    // dp[k] = h_k of the contents processed so far
    let mut dp = vec![BigInt::zero(); v as usize + 1];
    dp[0] = BigInt::one();
    for c in contents(lambda) {
        let c = BigInt::from(c);
        for k in 1..=v as usize {
            let add = &c * &dp[k - 1];
            dp[k] += add;
        }
    }
    rat_int(dp[v as usize].clone())
}

/// `e_v` evaluated at the contents of `λ`.
pub fn elementary_at_contents(lambda: &YoungPartition, v: u32) -> Rational {
    let mut dp = vec![BigInt::zero(); v as usize + 1];
    dp[0] = BigInt::one();
    for c in contents(lambda) {
        let c = BigInt::from(c);
        for k in (1..=v as usize).rev() {
            let add = &c * &dp[k - 1];
            dp[k] += add;
        }
    }
    rat_int(dp[v as usize].clone())
}
