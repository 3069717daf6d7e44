//! Ground truth by exhaustive enumeration of factorisations in S_d.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::factorial;
use num_traits::{One, Zero};

use crate::partitions::{
    centralizer_size, compositions_of, contents, partitions_of, Composition, PartitionError, YoungPartition,
};
use crate::{genus_of, HurwitzType, Rational};

pub const DEFAULT_DEGREE_BOUND: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("degree {0} exceeds the enumeration bound {1}")]
    BoundExceeded(u32, u32),
}

/// Which entry of a transposition `(r s)`, `r > s`, the monotonicity conditions read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// Conditions on `s`, the smaller element.
    Smaller,
    /// Conditions on `r`, the larger element.
    Larger,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorizationSpec {
    pub mu: Composition,
    pub nu: Composition,
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub connected: bool,
}

impl FactorizationSpec {
    pub fn new(mu: Composition, nu: Composition, p: u32, q: u32, r: u32, connected: bool) -> Self {
        FactorizationSpec { mu, nu, p, q, r, connected }
    }

    pub fn b(&self) -> u32 {
        self.p + self.q + self.r
    }

    pub fn genus(&self) -> Option<u32> {
        genus_of(self.b(), self.mu.len(), self.nu.len())
    }
}

/// `|𝓕| / d!` for the given factorisation problem.
pub fn count_factorizations(spec: &FactorizationSpec) -> Result<Rational, OracleError> {
    count_factorizations_with(spec, Convention::Smaller, DEFAULT_DEGREE_BOUND)
}

pub fn count_factorizations_with(
    spec: &FactorizationSpec,
    convention: Convention,
    bound: u32,
) -> Result<Rational, OracleError> {
    let d = spec.mu.size();
    if d != spec.nu.size() {
        return Err(PartitionError::SizeMismatch(d, spec.nu.size()).into());
    }
    if d > bound {
        return Err(OracleError::BoundExceeded(d, bound));
    }
    if spec.genus().is_none() {
        return Ok(Rational::from_integer(0.into()));
    }
    let key = HistKey::of(spec, convention);
    let hist = histogram(&key);
    Ok(normalize(&hist, spec))
}

fn normalize(hist: &HashMap<Vec<u32>, BigInt>, spec: &FactorizationSpec) -> Rational {
    let raw = hist.get(spec.nu.to_partition().parts()).cloned().unwrap_or_default();
    let labels = spec.mu.label_factor() * spec.nu.label_factor();
    Rational::new(raw * labels, factorial(spec.mu.size()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct HistKey {
    mu_type: Vec<u32>,
    p: u32,
    q: u32,
    r: u32,
    connected: bool,
    convention: Convention,
}

impl HistKey {
    fn of(spec: &FactorizationSpec, convention: Convention) -> Self {
        HistKey {
            mu_type: spec.mu.to_partition().parts().to_vec(),
            p: spec.p,
            q: spec.q,
            r: spec.r,
            connected: spec.connected,
            convention,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Block {
    Free,
    Weak,
    Strict,
}

struct Enumerator<'a> {
    d: usize,
    blocks: Vec<Block>,
    convention: Convention,
    connected: bool,
    transpositions: Vec<(u8, u8)>,
    sigma1: &'a [u8],
    chosen: Vec<(u8, u8)>,
    hist: HashMap<Vec<u32>, BigInt>,
}

impl Enumerator<'_> {
    fn key(&self, t: (u8, u8)) -> u8 {
        match self.convention {
            Convention::Smaller => t.1,
            Convention::Larger => t.0,
        }
    }

    fn run(&mut self, product: &mut Vec<u8>) {
        let i = self.chosen.len();
        if i == self.blocks.len() {
            self.leaf(product);
            return;
        }
        for ti in 0..self.transpositions.len() {
            let t = self.transpositions[ti];
            if i > 0 && self.blocks[i] == self.blocks[i - 1] {
                let (prev, cur) = (self.key(self.chosen[i - 1]), self.key(t));
                match self.blocks[i] {
                    Block::Free => {}
                    Block::Weak if cur < prev => continue,
                    Block::Strict if cur <= prev => continue,
                    _ => {}
                }
            }
            // left multiplication by (r s): swap the images r and s
            let (a, b) = (t.0, t.1);
            let (pa, pb) = position_pair(product, a, b);
            product.swap(pa, pb);
            self.chosen.push(t);
            self.run(product);
            self.chosen.pop();
            product.swap(pa, pb);
        }
    }

    fn leaf(&mut self, product: &[u8]) {
        if self.connected && !self.transitive() {
            return;
        }
        let ty = cycle_type(product);
        *self.hist.entry(ty).or_default() += 1;
    }

    fn transitive(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.d).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut union = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        };
        for (x, &y) in self.sigma1.iter().enumerate() {
            union(x, y as usize);
        }
        for &(a, b) in &self.chosen {
            union(a as usize, b as usize);
        }
        let root = find(&mut parent, 0);
        (1..self.d).all(|x| find(&mut parent, x) == root)
    }
}

fn position_pair(perm: &[u8], a: u8, b: u8) -> (usize, usize) {
    let pa = perm.iter().position(|&x| x == a).unwrap();
    let pb = perm.iter().position(|&x| x == b).unwrap();
    (pa, pb)
}

/// Cycle type, weakly decreasing.
pub fn cycle_type(perm: &[u8]) -> Vec<u32> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// All permutations of `0..d` as image arrays, lexicographic.
fn all_permutations(d: usize) -> Vec<Vec<u8>> {
    fn rec(d: usize, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for x in 0..d {
            if !used[x] {
                used[x] = true;
                cur.push(x as u8);
                rec(d, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(d, &mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

/// Histogram of cycle types of `τ_b ⋯ τ_1 σ_1` over all admissible tuples,
/// with `σ_1` running over every permutation of the given type.
fn histogram(key: &HistKey) -> HashMap<Vec<u32>, BigInt> {
    let d = key.mu_type.iter().sum::<u32>() as usize;
    let mut blocks = vec![Block::Free; key.p as usize];
    blocks.extend(std::iter::repeat_n(Block::Weak, key.q as usize));
    blocks.extend(std::iter::repeat_n(Block::Strict, key.r as usize));
    // (r, s) with r > s, ordered by s then r
    let mut transpositions = Vec::new();
    for s in 0..d as u8 {
        for r in s + 1..d as u8 {
            transpositions.push((r, s));
        }
    }
    let mut hist = HashMap::new();
    for sigma in all_permutations(d) {
        if cycle_type(&sigma) != key.mu_type {
            continue;
        }
        let mut e = Enumerator {
            d,
            blocks: blocks.clone(),
            convention: key.convention,
            connected: key.connected,
            transpositions: transpositions.clone(),
            sigma1: &sigma,
            chosen: Vec::new(),
            hist: HashMap::new(),
        };
        let mut product = sigma.clone();
        e.run(&mut product);
        for (k, v) in e.hist {
            *hist.entry(k).or_insert_with(BigInt::default) += v;
        }
    }
    hist
}

/// All `(p, q, r)` of the given type with `p + q + r = b`.
pub fn splits(kind: HurwitzType, b: u32) -> Vec<(u32, u32, u32)> {
    match kind {
        HurwitzType::Simple => vec![(b, 0, 0)],
        HurwitzType::Monotone => vec![(0, b, 0)],
        HurwitzType::Strict => vec![(0, 0, b)],
        HurwitzType::Mixed => {
            let mut out = Vec::new();
            for p in 0..=b {
                for q in 0..=b - p {
                    out.push((p, q, b - p - q));
                }
            }
            out
        }
    }
}

/// Caches enumeration histograms so that all `ν` of one problem share a single run.
#[derive(Default)]
pub struct Oracle {
    cache: HashMap<HistKey, HashMap<Vec<u32>, BigInt>>,
    bound: Option<u32>,
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_bound(bound: u32) -> Self {
        Oracle { cache: HashMap::new(), bound: Some(bound) }
    }

    pub fn count(&mut self, spec: &FactorizationSpec, convention: Convention) -> Result<Rational, OracleError> {
        let d = spec.mu.size();
        if d != spec.nu.size() {
            return Err(PartitionError::SizeMismatch(d, spec.nu.size()).into());
        }
        let bound = self.bound.unwrap_or(DEFAULT_DEGREE_BOUND);
        if d > bound {
            return Err(OracleError::BoundExceeded(d, bound));
        }
        if spec.genus().is_none() {
            return Ok(Rational::from_integer(0.into()));
        }
        self.count_any_genus(spec, convention)
    }

    /// Disconnected-or-not count without the `g ≥ 0` cut: covers whose
    /// components are spheres enough to push the total genus below zero are kept.
    pub fn count_any_genus(
        &mut self,
        spec: &FactorizationSpec,
        convention: Convention,
    ) -> Result<Rational, OracleError> {
        let d = spec.mu.size();
        if d != spec.nu.size() {
            return Err(PartitionError::SizeMismatch(d, spec.nu.size()).into());
        }
        let bound = self.bound.unwrap_or(DEFAULT_DEGREE_BOUND);
        if d > bound {
            return Err(OracleError::BoundExceeded(d, bound));
        }
        let key = HistKey::of(spec, convention);
        let hist = self.cache.entry(key.clone()).or_insert_with(|| histogram(&key));
        Ok(normalize(hist, spec))
    }
}

/// Every `(μ, ν, p, q, r)` with `|μ| = |ν| ≤ d_max`, `p + q + r ≤ b_max`, valid
/// genus, and `(p, q, r)` of one of the requested types; deterministic order.
pub fn sweep_specs(d_max: u32, b_max: u32, kinds: &[HurwitzType], connected: bool) -> Vec<FactorizationSpec> {
    let mut triples = Vec::new();
    for b in 0..=b_max {
        for &k in kinds {
            for t in splits(k, b) {
                if !triples.contains(&t) {
                    triples.push(t);
                }
            }
        }
    }
    let mut out = Vec::new();
    for d in 1..=d_max {
        let comps = compositions_of(d);
        for mu in &comps {
            for nu in &comps {
                for &(p, q, r) in &triples {
                    let spec = FactorizationSpec::new(mu.clone(), nu.clone(), p, q, r, connected);
                    if spec.genus().is_some() {
                        out.push(spec);
                    }
                }
            }
        }
    }
    out
}

/// Oracle values over [`sweep_specs`].
pub fn sweep(
    d_max: u32,
    b_max: u32,
    kinds: &[HurwitzType],
    connected: bool,
) -> Result<Vec<(FactorizationSpec, Rational)>, OracleError> {
    let mut oracle = Oracle::new();
    sweep_specs(d_max, b_max, kinds, connected)
        .into_iter()
        .map(|s| {
            let v = oracle.count(&s, Convention::Smaller)?;
            Ok((s, v))
        })
        .collect()
}

/// Symmetric function of bounded degree in the power-sum basis `p_ρ`, `ρ` sorted decreasingly.
type PowerSum = HashMap<Vec<u32>, Rational>;

fn ps_mul(a: &PowerSum, b: &PowerSum) -> PowerSum {
    let mut out = PowerSum::new();
    for (ra, ca) in a {
        for (rb, cb) in b {
            let mut rho: Vec<u32> = ra.iter().chain(rb).copied().collect();
            rho.sort_unstable_by(|x, y| y.cmp(x));
            *out.entry(rho).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `h_k = Σ_{ρ ⊢ k} p_ρ / z_ρ`.
fn complete_in_power_sums(k: i64) -> PowerSum {
    let mut out = PowerSum::new();
    if k < 0 {
        return out;
    }
    if k == 0 {
        out.insert(Vec::new(), Rational::one());
        return out;
    }
    for rho in partitions_of(k as u32) {
        let z = centralizer_size(&rho.as_composition());
        out.insert(rho.parts().to_vec(), Rational::new(1.into(), z));
    }
    out
}

/// Schur function by the Jacobi–Trudi determinant `det(h_{λ_i − i + j})`.
fn schur_in_power_sums(lambda: &YoungPartition) -> PowerSum {
    let l = lambda.parts().len();
    let mut total = PowerSum::new();
    let mut perm: Vec<usize> = (0..l).collect();
    loop {
        let inversions =
            (0..l).flat_map(|i| (i + 1..l).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut term = complete_in_power_sums(0);
        for (i, &j) in perm.iter().enumerate() {
            let k = lambda.parts()[i] as i64 - i as i64 + j as i64;
            term = ps_mul(&term, &complete_in_power_sums(k));
            if term.is_empty() {
                break;
            }
        }
        let sign = if inversions % 2 == 0 { Rational::one() } else { -Rational::one() };
        for (rho, c) in term {
            *total.entry(rho).or_insert_with(Rational::zero) += c * &sign;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    total.retain(|_, c| !c.is_zero());
    total
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Coefficient of `q^n w^c z^d p_μ(t) p_ν(t̃)` in
/// `Σ_n q^n Σ_{λ⊢n} ∏_{boxes} (1 + cr·w)/(1 − cr·z) s_λ(t) s_λ(t̃)`, expanding the
/// Schur functions through Jacobi–Trudi and the box product term by term.
pub fn tau_coefficient_expanded(
    n: u32,
    mu: &Composition,
    nu: &Composition,
    c: u32,
    d: u32,
) -> Result<Rational, PartitionError> {
    if mu.size() != n || nu.size() != n {
        return Err(PartitionError::SizeMismatch(mu.size(), nu.size()));
    }
    let (cw, dz) = (c as usize, d as usize);
    let mut total = Rational::zero();
    for lambda in partitions_of(n) {
        let s = schur_in_power_sums(&lambda);
        let (Some(a), Some(b)) = (s.get(mu.to_partition().parts()), s.get(nu.to_partition().parts())) else {
            continue;
        };
        // coefficients of w^i z^j in the box product
        let mut f = vec![vec![Rational::zero(); dz + 1]; cw + 1];
        f[0][0] = Rational::one();
        for cr in contents(&lambda) {
            let cr = Rational::from_integer(cr.into());
            let mut next = vec![vec![Rational::zero(); dz + 1]; cw + 1];
            for i in 0..=cw {
                for j in 0..=dz {
                    if f[i][j].is_zero() {
                        continue;
                    }
                    for (di, wf) in [(0, Rational::one()), (1, cr.clone())] {
                        if i + di > cw {
                            continue;
                        }
                        let mut zf = Rational::one();
                        for dj in 0..=dz - j {
                            next[i + di][j + dj] += &f[i][j] * &wf * &zf;
                            zf *= &cr;
                        }
                    }
                }
            }
            f = next;
        }
        total += &f[cw][dz] * a * b;
    }
    Ok(total)
}
