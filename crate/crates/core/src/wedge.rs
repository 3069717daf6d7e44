//! Chambers of the wall arrangement, Johnson's commutation patterns for
//! correlators of 𝓔-operators, and chamber polynomials.
//!
//! Indeterminates are ordered `μ_1..μ_m, ν_1..ν_n`. An operator symbol
//! `𝓔'(I, J)` has energy `μ_I − ν_J` and an argument that is a linear
//! combination of expansion variables with coefficients linear in `μ, ν`.
//! Commuting `𝓔_a(x) 𝓔_b(y)` yields the swapped word plus
//! `ς(a·y − b·x) 𝓔_{a+b}(x + y)`; a word ends as `⟨𝓔_a(x) 𝓔_{−a}(y)⟩ = ς(aT)/ς(T)`
//! with `T = x + y` the sum of all arguments.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    falling_factorial, rat_int, rising_factorial, s_power_coeffs, sigma_coeffs, sigma_ratio_coeffs, AlgebraError,
    MultiPoly, SeriesShape, TruncSeries,
};
use crate::partitions::Composition;
use crate::{branch_points, genus_of, HurwitzType, Linear, Poly, Rational, Series};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WedgeError {
    #[error("sample lies on the wall {0}")]
    OnWall(Wall),
    #[error("sample sums differ: {0} vs {1}")]
    SumMismatch(u32, u32),
    #[error("sample entries must be positive and both tuples non-empty")]
    InvalidSample,
    #[error("intermediate operator of zero energy: the chamber does not separate this word")]
    ZeroEnergyIntermediate,
    #[error("(g, m+n) = (0, 2) has no chamber polynomial")]
    DegenerateSignature,
    #[error("p+q+r = {0} is not 2g-2+m+n for an integer g >= 0 with m={1}, n={2}")]
    InvalidGenus(u32, usize, usize),
    #[error("expected {0} + {1} values, got {2} + {3}")]
    ArityMismatch(usize, usize, usize, usize),
    #[error("chamber assembly produced a non-divisible numerator")]
    NotDivisible,
    #[error("no lattice point realises the requested sign pattern")]
    Unrealizable,
}

impl From<AlgebraError> for WedgeError {
    fn from(_: AlgebraError) -> Self {
        WedgeError::NotDivisible
    }
}

/// The indeterminates `μ_1..μ_m, ν_1..ν_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Universe {
    pub m: usize,
    pub n: usize,
}

impl Universe {
    pub fn new(m: usize, n: usize) -> Self {
        Universe { m, n }
    }

    pub fn nvars(&self) -> usize {
        self.m + self.n
    }

    pub fn mu(&self, i: usize) -> Linear {
        Linear::var(self.nvars(), i)
    }

    pub fn nu(&self, j: usize) -> Linear {
        Linear::var(self.nvars(), self.m + j)
    }

    pub fn names(&self) -> Vec<String> {
        (1..=self.m).map(|i| format!("mu{i}")).chain((1..=self.n).map(|j| format!("nu{j}"))).collect()
    }

    /// `μ_I − ν_J` for bitmasks `I`, `J`.
    pub fn energy(&self, i_mask: u32, j_mask: u32) -> Linear {
        let mut e = Linear::zero(self.nvars());
        for i in bits(i_mask) {
            e = &e + &self.mu(i);
        }
        for j in bits(j_mask) {
            e = &e - &self.nu(j);
        }
        e
    }

    /// Restriction to the hyperplane `Σμ = Σν`: substitutes `μ_m = Σν − Σ_{i<m} μ_i`.
    pub fn reduce(&self, p: &Poly) -> Poly {
        let nv = self.nvars();
        let images: Vec<Poly> = (0..nv)
            .map(|k| {
                if k + 1 == self.m {
                    let mut e = Linear::zero(nv);
                    for j in 0..self.n {
                        e = &e + &self.nu(j);
                    }
                    for i in 0..self.m - 1 {
                        e = &e - &self.mu(i);
                    }
                    e.to_poly()
                } else {
                    Poly::var(nv, k)
                }
            })
            .collect();
        p.compose(&images, nv)
    }

    pub fn full_masks(&self) -> (u32, u32) {
        (full(self.m), full(self.n))
    }

    /// Evaluation point `(μ, ν)` as rationals.
    pub fn point(&self, mu: &Composition, nu: &Composition) -> Result<Vec<Rational>, WedgeError> {
        if mu.len() != self.m || nu.len() != self.n {
            return Err(WedgeError::ArityMismatch(self.m, self.n, mu.len(), nu.len()));
        }
        Ok(mu.parts().iter().chain(nu.parts()).map(|&x| rat_int(x)).collect())
    }
}

fn full(k: usize) -> u32 {
    (1u32 << k) - 1
}

pub(crate) fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// Hyperplane `μ_I = ν_J`, stored with `1 ∈ I` (the complement gives the same hyperplane).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wall {
    pub i_mask: u32,
    pub j_mask: u32,
}

impl Wall {
    /// Canonical wall through `μ_I − ν_J`, with a flag telling whether the
    /// representative is the complement (so that `μ_I − ν_J` is minus its function).
    pub fn canonical(universe: Universe, i_mask: u32, j_mask: u32) -> (Wall, bool) {
        let (fm, fn_) = universe.full_masks();
        if i_mask & 1 == 1 {
            (Wall { i_mask, j_mask }, false)
        } else {
            (Wall { i_mask: fm & !i_mask, j_mask: fn_ & !j_mask }, true)
        }
    }

    pub fn i(&self) -> Vec<usize> {
        bits(self.i_mask).map(|i| i + 1).collect()
    }

    pub fn j(&self) -> Vec<usize> {
        bits(self.j_mask).map(|j| j + 1).collect()
    }

    /// Whether `μ_I − ν_J` takes both signs on the positive region.
    pub fn is_genuine(&self, universe: Universe) -> bool {
        let (fm, fn_) = universe.full_masks();
        self.i_mask != 0 && self.j_mask != 0 && self.i_mask != fm && self.j_mask != fn_
    }

    pub fn value(&self, mu: &[u32], nu: &[u32]) -> i64 {
        let a: i64 = bits(self.i_mask).map(|i| mu[i] as i64).sum();
        let b: i64 = bits(self.j_mask).map(|j| nu[j] as i64).sum();
        a - b
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |pre: &str, v: Vec<usize>| {
            if v.is_empty() {
                "0".to_string()
            } else {
                v.iter().map(|k| format!("{pre}{k}")).collect::<Vec<_>>().join("+")
            }
        };
        write!(f, "{} = {}", side("mu", self.i()), side("nu", self.j()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A chamber given by an interior lattice point, with the induced signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    universe: Universe,
    sample: (Vec<u32>, Vec<u32>),
    signs: BTreeMap<Wall, Sign>,
}

/// Every canonical wall function `μ_I − ν_J` with `1 ∈ I`, `(I, J) ≠ ([m], [n])`.
pub fn canonical_walls(universe: Universe) -> Vec<Wall> {
    let (fm, fn_) = universe.full_masks();
    let mut out = Vec::new();
    for i_mask in (1..=fm).filter(|m| m & 1 == 1) {
        for j_mask in 0..=fn_ {
            if i_mask == fm && j_mask == fn_ {
                continue;
            }
            out.push(Wall { i_mask, j_mask });
        }
    }
    out
}

/// Chamber containing the sample `(M*, N*)`.
pub fn chamber_of(mu: &[u32], nu: &[u32]) -> Result<Chamber, WedgeError> {
    if mu.is_empty() || nu.is_empty() || mu.contains(&0) || nu.contains(&0) {
        return Err(WedgeError::InvalidSample);
    }
    let (sm, sn): (u32, u32) = (mu.iter().sum(), nu.iter().sum());
    if sm != sn {
        return Err(WedgeError::SumMismatch(sm, sn));
    }
    let universe = Universe::new(mu.len(), nu.len());
    let mut signs = BTreeMap::new();
    for w in canonical_walls(universe) {
        let v = w.value(mu, nu);
        if v == 0 {
            return Err(WedgeError::OnWall(w));
        }
        signs.insert(w, if v > 0 { Sign::Plus } else { Sign::Minus });
    }
    Ok(Chamber { universe, sample: (mu.to_vec(), nu.to_vec()), signs })
}

impl Chamber {
    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn sample(&self) -> (&[u32], &[u32]) {
        (&self.sample.0, &self.sample.1)
    }

    pub fn signs(&self) -> &BTreeMap<Wall, Sign> {
        &self.signs
    }

    /// Sign of `μ_I − ν_J`; `None` for the trivial pairs `(∅, ∅)` and `([m], [n])`.
    pub fn sign(&self, i_mask: u32, j_mask: u32) -> Option<Sign> {
        let (fm, fn_) = self.universe.full_masks();
        if (i_mask == 0 && j_mask == 0) || (i_mask == fm && j_mask == fn_) {
            return None;
        }
        let (w, flipped) = Wall::canonical(self.universe, i_mask, j_mask);
        let s = *self.signs.get(&w)?;
        Some(if flipped { s.flip() } else { s })
    }

    /// Sign vector, usable as a cache key: equal keys mean equal chambers.
    pub fn key(&self) -> (usize, usize, Vec<bool>) {
        (self.universe.m, self.universe.n, self.signs.values().map(|s| *s == Sign::Plus).collect())
    }

    pub fn contains(&self, mu: &[u32], nu: &[u32]) -> bool {
        chamber_of(mu, nu).map(|c| c.signs == self.signs).unwrap_or(false)
    }

    /// Some lattice chamber that differs from this one exactly on `wall`,
    /// found by searching points with `|μ| ≤ max_size`.
    pub fn across(&self, wall: Wall, max_size: u32) -> Result<Chamber, WedgeError> {
        let mut target = self.signs.clone();
        let s = target.get_mut(&wall).ok_or(WedgeError::Unrealizable)?;
        *s = s.flip();
        find_chamber(self.universe, &target, max_size)
    }
}

/// First lattice point (by size, then lexicographically) with the given signs.
pub fn find_chamber(universe: Universe, signs: &BTreeMap<Wall, Sign>, max_size: u32) -> Result<Chamber, WedgeError> {
    for d in 1..=max_size {
        for mu in tuples_of(d, universe.m) {
            for nu in tuples_of(d, universe.n) {
                if let Ok(c) = chamber_of(&mu, &nu) {
                    if &c.signs == signs {
                        return Ok(c);
                    }
                }
            }
        }
    }
    Err(WedgeError::Unrealizable)
}

/// Ordered `k`-tuples of positive integers summing to `d`.
pub fn tuples_of(d: u32, k: usize) -> Vec<Vec<u32>> {
    fn rec(d: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            if d == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if d < k as u32 {
            return;
        }
        for x in 1..=d - (k as u32 - 1) {
            cur.push(x);
            rec(d - x, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, k, &mut Vec::new(), &mut out);
    out
}

/// Linear combination of expansion variables with coefficients linear in `μ, ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSum {
    nvars: usize,
    terms: BTreeMap<usize, Linear>,
}

impl FormalSum {
    pub fn zero(nvars: usize) -> Self {
        FormalSum { nvars, terms: BTreeMap::new() }
    }

    pub fn with_term(mut self, var: usize, c: Linear) -> Self {
        let v = match self.terms.remove(&var) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(var, v);
        }
        self
    }

    pub fn terms(&self) -> &BTreeMap<usize, Linear> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &FormalSum) -> FormalSum {
        let mut out = self.clone();
        for (&v, c) in &other.terms {
            out = out.with_term(v, c.clone());
        }
        out
    }

    /// `e · self` as a map from expansion variable to polynomial coefficient.
    fn times(&self, e: &Linear) -> BTreeMap<usize, Poly> {
        let ep = e.to_poly();
        self.terms.iter().map(|(&v, c)| (v, &ep * &c.to_poly())).collect()
    }

    pub fn to_series(&self, shape: &Arc<SeriesShape>) -> Series {
        let terms: Vec<(usize, Poly)> = self.terms.iter().map(|(&v, c)| (v, c.to_poly())).collect();
        TruncSeries::linear(shape.clone(), self.nvars, &terms)
    }
}

/// One operator `𝓔'(I, J)` with an explicit argument.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    pub i_mask: u32,
    pub j_mask: u32,
    pub arg: FormalSum,
}

/// An ordered operator word inside a correlator.
#[derive(Debug, Clone, PartialEq)]
pub struct EWord {
    pub universe: Universe,
    pub symbols: Vec<Symbol>,
}

impl EWord {
    /// `⟨∏ 𝓔_{μ_i}(0) ∏ 𝓔_{−ν_j}(a_j)⟩` with the given arguments `a_j`.
    pub fn standard(universe: Universe, args: &[FormalSum]) -> Self {
        assert_eq!(args.len(), universe.n);
        let nv = universe.nvars();
        let mut symbols: Vec<Symbol> =
            (0..universe.m).map(|i| Symbol { i_mask: 1 << i, j_mask: 0, arg: FormalSum::zero(nv) }).collect();
        symbols.extend(args.iter().enumerate().map(|(j, a)| Symbol { i_mask: 0, j_mask: 1 << j, arg: a.clone() }));
        EWord { universe, symbols }
    }

    /// Whether the masks partition `[m] ⊔ [n]`, i.e. the total energy vanishes identically.
    pub fn has_zero_energy(&self) -> bool {
        let (mut im, mut jm) = (0u32, 0u32);
        for s in &self.symbols {
            if im & s.i_mask != 0 || jm & s.j_mask != 0 {
                return false;
            }
            im |= s.i_mask;
            jm |= s.j_mask;
        }
        (im, jm) == self.universe.full_masks()
    }
}

/// `ς(e₁·a₂ − e₂·a₁)` for the commutator `[𝓔_{e₁}(a₁), 𝓔_{e₂}(a₂)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaFactor {
    pub e1: Linear,
    pub a1: FormalSum,
    pub e2: Linear,
    pub a2: FormalSum,
}

impl SigmaFactor {
    /// The argument `e₁·a₂ − e₂·a₁` as expansion-variable coefficients.
    pub fn argument(&self) -> BTreeMap<usize, Poly> {
        let mut out = self.a2.times(&self.e1);
        for (v, c) in self.a1.times(&self.e2) {
            let cur = out.remove(&v).unwrap_or_else(|| MultiPoly::zero(c.nvars()));
            let next = &cur - &c;
            if !next.is_zero() {
                out.insert(v, next);
            }
        }
        out
    }

    /// The factor with its two operators exchanged; its argument is the negative.
    pub fn swapped(&self) -> SigmaFactor {
        SigmaFactor { e1: self.e2.clone(), a1: self.a2.clone(), e2: self.e1.clone(), a2: self.a1.clone() }
    }
}

/// One commutation pattern: `m + n − 1` factors, the last being `ς(final_energy · T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaProduct {
    pub factors: Vec<SigmaFactor>,
    pub final_energy: Linear,
}

/// Commutation patterns of a zero-energy word in the given chamber.
///
/// Words whose masks do not partition `[m] ⊔ [n]` have non-zero energy and
/// yield no pattern.
pub fn johnson_expand(chamber: &Chamber, word: &EWord) -> Result<Vec<SigmaProduct>, WedgeError> {
    if word.universe != chamber.universe || !word.has_zero_energy() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    expand_rec(chamber, word.symbols.clone(), &mut Vec::new(), &mut out)?;
    Ok(out)
}

fn expand_rec(
    chamber: &Chamber,
    word: Vec<Symbol>,
    acc: &mut Vec<SigmaFactor>,
    out: &mut Vec<SigmaProduct>,
) -> Result<(), WedgeError> {
    let universe = chamber.universe;
    let mut first_negative = None;
    for (k, s) in word.iter().enumerate() {
        match chamber.sign(s.i_mask, s.j_mask) {
            Some(Sign::Minus) => {
                first_negative = Some(k);
                break;
            }
            Some(Sign::Plus) => {}
            None => return Err(WedgeError::ZeroEnergyIntermediate),
        }
    }
    // all positive: annihilates the vacuum; negative at the far left: annihilates the covacuum
    let k = match first_negative {
        None | Some(0) => return Ok(()),
        Some(k) => k,
    };
    let (left, right) = (&word[k - 1], &word[k]);
    let e1 = universe.energy(left.i_mask, left.j_mask);
    let e2 = universe.energy(right.i_mask, right.j_mask);

    let mut swapped = word.clone();
    swapped.swap(k - 1, k);
    expand_rec(chamber, swapped, acc, out)?;

    let factor = SigmaFactor { e1: e1.clone(), a1: left.arg.clone(), e2, a2: right.arg.clone() };
    let merged = Symbol {
        i_mask: left.i_mask | right.i_mask,
        j_mask: left.j_mask | right.j_mask,
        arg: left.arg.add(&right.arg),
    };
    acc.push(factor);
    if word.len() == 2 {
        debug_assert_eq!((merged.i_mask, merged.j_mask), universe.full_masks());
        out.push(SigmaProduct { factors: acc.clone(), final_energy: e1 });
    } else {
        let mut next = Vec::with_capacity(word.len() - 1);
        next.extend_from_slice(&word[..k - 1]);
        next.push(merged);
        next.extend_from_slice(&word[k + 1..]);
        expand_rec(chamber, next, acc, out)?;
    }
    acc.pop();
    Ok(())
}

/// Expansion variables and the arguments of the `𝓔_{−ν_j}` operators.
#[derive(Debug, Clone)]
pub struct Layout {
    pub universe: Universe,
    pub shape: Arc<SeriesShape>,
    pub args: Vec<FormalSum>,
}

impl Layout {
    pub fn new(universe: Universe, shape: Arc<SeriesShape>, args: Vec<FormalSum>) -> Self {
        assert_eq!(args.len(), universe.n);
        Layout { universe, shape, args }
    }

    /// Sum of all arguments, the variable of the final `ς(aT)/ς(T)`.
    pub fn total(&self) -> FormalSum {
        self.args.iter().fold(FormalSum::zero(self.universe.nvars()), |a, b| a.add(b))
    }
}

/// Variables `X, y_1..y_n, z_1..z_n` (dropping any whose budget is 0) and the
/// arguments `X ν_j + y_j + z_j`.
#[derive(Debug, Clone)]
pub struct MixedLayout {
    pub layout: Layout,
    pub x: Option<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    pub split: (u32, u32, u32),
}

impl MixedLayout {
    pub fn new(universe: Universe, p: u32, q: u32, r: u32) -> Self {
        Self::with_slack(universe, p, q, r, 0)
    }

    /// As [`MixedLayout::new`] with every truncation order raised by `slack`.
    pub fn with_slack(universe: Universe, p: u32, q: u32, r: u32, slack: u32) -> Self {
        let n = universe.n;
        let mut names = Vec::new();
        let mut orders = Vec::new();
        let x = (p > 0).then(|| {
            names.push("X".to_string());
            orders.push(p + slack);
            0
        });
        let mut y = Vec::new();
        if q > 0 {
            for j in 0..n {
                y.push(names.len());
                names.push(format!("y{}", j + 1));
                orders.push(q + slack);
            }
        }
        let mut z = Vec::new();
        if r > 0 {
            for j in 0..n {
                z.push(names.len());
                names.push(format!("z{}", j + 1));
                orders.push(r + slack);
            }
        }
        let mut shape = SeriesShape::new(names, orders);
        if q > 0 {
            shape = shape.with_group(y.clone(), q + slack);
        }
        if r > 0 {
            shape = shape.with_group(z.clone(), r + slack);
        }
        let nv = universe.nvars();
        let args = (0..n)
            .map(|j| {
                let mut a = FormalSum::zero(nv);
                if let Some(xi) = x {
                    a = a.with_term(xi, universe.nu(j));
                }
                if q > 0 {
                    a = a.with_term(y[j], Linear::constant(nv, Rational::one()));
                }
                if r > 0 {
                    a = a.with_term(z[j], Linear::constant(nv, Rational::one()));
                }
                a
            })
            .collect();
        MixedLayout { layout: Layout::new(universe, Arc::new(shape), args), x, y, z, split: (p, q, r) }
    }
}

/// Cache of `ς`-series keyed by argument, shared across patterns. With a
/// point, coefficients are evaluated there and carry no indeterminates.
struct SigmaCache {
    shape: Arc<SeriesShape>,
    nvars: usize,
    order: u32,
    point: Option<Vec<Rational>>,
    sigma: Vec<(BTreeMap<usize, Poly>, Series)>,
    ratio: Vec<(Poly, Series)>,
    total_powers: Vec<Series>,
}

impl SigmaCache {
    fn new(layout: &Layout, point: Option<&[Rational]>) -> Self {
        let shape = layout.shape.clone();
        let order: u32 = shape.orders().iter().sum();
        let nvars = if point.is_some() { 0 } else { layout.universe.nvars() };
        let mut cache = SigmaCache {
            shape,
            nvars,
            order,
            point: point.map(|p| p.to_vec()),
            sigma: Vec::new(),
            ratio: Vec::new(),
            total_powers: Vec::new(),
        };
        let terms: Vec<(usize, Poly)> =
            layout.total().terms().iter().map(|(&v, c)| (v, cache.fix(&c.to_poly()))).collect();
        let t = TruncSeries::linear(cache.shape.clone(), nvars, &terms);
        let mut powers = vec![TruncSeries::one(cache.shape.clone(), nvars)];
        while !powers.last().unwrap().is_zero() && powers.len() <= order as usize {
            let next = powers.last().unwrap() * &t;
            powers.push(next);
        }
        cache.total_powers = powers;
        cache
    }

    fn fix(&self, p: &Poly) -> Poly {
        match &self.point {
            Some(pt) => MultiPoly::constant(0, p.evaluate(pt)),
            None => p.clone(),
        }
    }

    fn sigma(&mut self, arg: BTreeMap<usize, Poly>) -> Series {
        let arg: BTreeMap<usize, Poly> =
            arg.iter().map(|(&v, c)| (v, self.fix(c))).filter(|(_, c)| !is_zero_poly(c)).collect();
        if let Some((_, s)) = self.sigma.iter().find(|(a, _)| *a == arg) {
            return s.clone();
        }
        let terms: Vec<(usize, Poly)> = arg.iter().map(|(&v, c)| (v, c.clone())).collect();
        let lin = TruncSeries::linear(self.shape.clone(), self.nvars, &terms);
        let coeffs = sigma_coeffs(&MultiPoly::one(self.nvars), self.order);
        let s = lin.compose_univariate(&coeffs);
        self.sigma.push((arg, s.clone()));
        s
    }

    /// `ς(aT)/ς(T)` as a series, `T` the total argument.
    fn ratio(&mut self, a: &Linear) -> Series {
        let a = self.fix(&a.to_poly());
        if let Some((_, s)) = self.ratio.iter().find(|(x, _)| *x == a) {
            return s.clone();
        }
        let coeffs = sigma_ratio_coeffs(&a, self.order);
        let mut s = TruncSeries::zero(self.shape.clone(), self.nvars);
        for (c, p) in coeffs.iter().zip(&self.total_powers) {
            if !c.is_zero() {
                s = &s + &p.scale(c);
            }
        }
        self.ratio.push((a, s.clone()));
        s
    }
}

fn correlator_with(chamber: &Chamber, layout: &Layout, point: Option<&[Rational]>) -> Result<Series, WedgeError> {
    let word = EWord::standard(layout.universe, &layout.args);
    let patterns = johnson_expand(chamber, &word)?;
    let mut cache = SigmaCache::new(layout, point);
    let mut total = TruncSeries::zero(layout.shape.clone(), cache.nvars);
    for pat in &patterns {
        let (last, rest) = pat.factors.split_last().expect("pattern without factors");
        debug_assert_eq!(last.e1, pat.final_energy);
        let mut term = cache.ratio(&pat.final_energy);
        for f in rest {
            if term.is_zero() {
                break;
            }
            term = &term * &cache.sigma(f.argument());
        }
        total = &total + &term;
    }
    Ok(total)
}

/// The correlator `⟨∏ 𝓔_{μ_i}(0) ∏ 𝓔_{−ν_j}(a_j)⟩` in the chamber, as a
/// series whose coefficients are polynomials in `μ, ν`.
pub fn correlator_series(chamber: &Chamber, layout: &Layout) -> Result<Series, WedgeError> {
    correlator_with(chamber, layout, None)
}

/// The chamber's correlator expression evaluated at `point` (which need not
/// lie in the chamber), with rational coefficients.
pub fn correlator_series_at(chamber: &Chamber, layout: &Layout, point: &[Rational]) -> Result<Series, WedgeError> {
    if point.len() != layout.universe.nvars() {
        let u = layout.universe;
        return Err(WedgeError::ArityMismatch(u.m, u.n, point.len(), 0));
    }
    correlator_with(chamber, layout, Some(point))
}

/// `𝒮(v)^c` embedded at variable `var` of `shape`.
pub(crate) fn s_power_in(shape: &Arc<SeriesShape>, nvars: usize, var: usize, exponent: &Poly) -> Series {
    let order = shape.orders()[var];
    let coeffs = s_power_coeffs(exponent, order);
    let mut s = TruncSeries::zero(shape.clone(), nvars);
    for (k, c) in coeffs.into_iter().enumerate() {
        let mut e = vec![0; shape.len()];
        e[var] = k as u32;
        s = &s + &TruncSeries::from_terms(shape.clone(), nvars, [(e, c)]);
    }
    s
}

/// Chamber polynomial of the triply mixed number `h_{p,q,r}` on `chamber`,
/// written without `μ_m` (eliminated through `Σμ = Σν`).
pub fn chamber_polynomial(split: (u32, u32, u32), chamber: &Chamber) -> Result<Poly, WedgeError> {
    chamber_polynomial_with_slack(split, chamber, 0)
}

/// [`chamber_polynomial`] computed with every series truncated `slack` orders
/// beyond what the extraction needs; the result does not depend on `slack`.
pub fn chamber_polynomial_with_slack(
    split: (u32, u32, u32),
    chamber: &Chamber,
    slack: u32,
) -> Result<Poly, WedgeError> {
    let (p, q, r) = split;
    let u = chamber.universe;
    let g = genus_of(p + q + r, u.m, u.n).ok_or(WedgeError::InvalidGenus(p + q + r, u.m, u.n))?;
    if g == 0 && u.m + u.n == 2 {
        return Err(WedgeError::DegenerateSignature);
    }
    let ml = MixedLayout::with_slack(u, p, q, r, slack);
    let nv = u.nvars();
    let shape = ml.layout.shape.clone();
    let mut series = correlator_series(chamber, &ml.layout)?;
    for j in 0..u.n {
        let nu = u.nu(j).to_poly();
        if q > 0 {
            let e = &nu - &Poly::one(nv);
            series = &series * &s_power_in(&shape, nv, ml.y[j], &e);
        }
        if r > 0 {
            let e = -&(&nu + &Poly::one(nv));
            series = &series * &s_power_in(&shape, nv, ml.z[j], &e);
        }
    }
    // p! Σ ∏ rising(ν_j, v_j) falling(ν_j, w_j) [X^p y^v z^w]
    let mut numerator = Poly::zero(nv);
    for (e, c) in series.terms() {
        let xp = ml.x.map(|i| e[i]).unwrap_or(0);
        let yv: Vec<u32> = ml.y.iter().map(|&i| e[i]).collect();
        let zw: Vec<u32> = ml.z.iter().map(|&i| e[i]).collect();
        if xp != p || yv.iter().sum::<u32>() != q || zw.iter().sum::<u32>() != r {
            continue;
        }
        let mut pre = c.clone();
        for j in 0..u.n {
            let nu = u.nu(j).to_poly();
            if q > 0 {
                pre = &pre * &rising_factorial(&nu, yv[j]);
            }
            if r > 0 {
                pre = &pre * &falling_factorial(&nu, zw[j]);
            }
        }
        numerator = &numerator + &pre;
    }
    let p_fact = rat_int(crate::algebra::factorial(p));
    numerator = u.reduce(&numerator.scale(&p_fact));
    let denom = (0..u.m)
        .map(|i| u.mu(i).to_poly())
        .chain((0..u.n).map(|j| u.nu(j).to_poly()))
        .fold(Poly::one(nv), |a, b| &a * &b);
    Ok(numerator.exact_divide(&u.reduce(&denom))?)
}

/// Chamber polynomial of a pure type in genus `g`.
pub fn chamber_polynomial_genus(kind: HurwitzType, g: u32, chamber: &Chamber) -> Result<Poly, WedgeError> {
    let u = chamber.universe;
    let b = branch_points(g, u.m, u.n).ok_or(WedgeError::DegenerateSignature)?;
    let split = kind.pure_split(b).expect("pure type required");
    chamber_polynomial(split, chamber)
}

/// Substitute `(μ, ν)` into a chamber polynomial.
pub fn evaluate(poly: &Poly, universe: Universe, mu: &Composition, nu: &Composition) -> Result<Rational, WedgeError> {
    let point = universe.point(mu, nu)?;
    Ok(poly.evaluate(&point))
}

/// Upper bound `4g − 3 + m + n` on the total degree.
pub fn degree_bound(g: u32, m: usize, n: usize) -> i64 {
    4 * g as i64 - 3 + m as i64 + n as i64
}

/// Memoised chamber polynomials keyed by sign vector and `(p, q, r)`.
type CacheKey = ((usize, usize, Vec<bool>), (u32, u32, u32));

#[derive(Default)]
pub struct PolynomialCache {
    table: HashMap<CacheKey, Poly>,
}

impl PolynomialCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, split: (u32, u32, u32), chamber: &Chamber) -> Result<Poly, WedgeError> {
        let key = (chamber.key(), split);
        if let Some(p) = self.table.get(&key) {
            return Ok(p.clone());
        }
        let p = chamber_polynomial(split, chamber)?;
        self.table.insert(key, p.clone());
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Whether `(μ, ν)` lies on some wall `μ_I = ν_J` with `(I, J)` proper.
pub fn on_some_wall(mu: &[u32], nu: &[u32]) -> bool {
    matches!(chamber_of(mu, nu), Err(WedgeError::OnWall(_)))
}

/// Whether a polynomial is identically zero.
pub fn is_zero_poly(p: &Poly) -> bool {
    p.is_zero() || p.as_constant().is_some_and(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::charactereval::hurwitz_disconnected;

    fn comp(p: &[u32]) -> Composition {
        Composition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn chamber_examples() {
        let c = chamber_of(&[3], &[1, 2]).unwrap();
        assert_eq!(c.sign(1, 1), Some(Sign::Plus));
        assert_eq!(c.sign(1, 2), Some(Sign::Plus));
        let c = chamber_of(&[2], &[1, 1]).unwrap();
        assert_eq!(c.sign(1, 1), Some(Sign::Plus));
        assert_eq!(chamber_of(&[1, 1], &[1, 1]), Err(WedgeError::OnWall(Wall { i_mask: 1, j_mask: 1 })));
        assert_eq!(chamber_of(&[2], &[1]), Err(WedgeError::SumMismatch(2, 1)));
    }

    #[test]
    fn single_pair_pattern() {
        let u = Universe::new(1, 1);
        let c = chamber_of(&[2], &[2]).unwrap();
        let arg = FormalSum::zero(2).with_term(0, Linear::constant(2, rat(1, 1)));
        let pats = johnson_expand(&c, &EWord::standard(u, &[arg])).unwrap();
        assert_eq!(pats.len(), 1);
        assert_eq!(pats[0].factors.len(), 1);
        assert_eq!(pats[0].final_energy, u.mu(0));
    }

    #[test]
    fn nonzero_energy_word_is_empty() {
        let u = Universe::new(1, 2);
        let c = chamber_of(&[3], &[1, 2]).unwrap();
        let mut w = EWord::standard(u, &[FormalSum::zero(3), FormalSum::zero(3)]);
        w.symbols.pop();
        assert!(johnson_expand(&c, &w).unwrap().is_empty());
    }

    #[test]
    fn pattern_factor_counts() {
        let u = Universe::new(1, 2);
        let c = chamber_of(&[3], &[1, 2]).unwrap();
        let args: Vec<FormalSum> =
            (0..2).map(|j| FormalSum::zero(3).with_term(j, Linear::constant(3, rat(1, 1)))).collect();
        let pats = johnson_expand(&c, &EWord::standard(u, &args)).unwrap();
        // E_mu (neg1) (neg2): commute neg1 left once; then only the merged branch survives
        assert_eq!(pats.len(), 1);
        assert!(pats.iter().all(|p| p.factors.len() == 2));
    }

    #[test]
    fn swapped_factor_negates_argument() {
        let u = Universe::new(2, 2);
        let a = FormalSum::zero(4).with_term(0, Linear::constant(4, rat(1, 1)));
        let b = FormalSum::zero(4).with_term(1, u.nu(0));
        let f = SigmaFactor { e1: u.mu(0), a1: a, e2: -&u.nu(1), a2: b };
        let neg: BTreeMap<usize, Poly> = f.argument().into_iter().map(|(k, v)| (k, -&v)).collect();
        assert_eq!(f.swapped().argument(), neg);
    }

    #[test]
    fn chamber_polynomials_match_characters_small() {
        for (mu, nu) in [(vec![3], vec![1, 2]), (vec![5], vec![2, 3]), (vec![2, 1], vec![3]), (vec![4], vec![4])] {
            let c = chamber_of(&mu, &nu).unwrap();
            let u = c.universe();
            for g in 0..=1u32 {
                for kind in [HurwitzType::Simple, HurwitzType::Monotone, HurwitzType::Strict] {
                    let b = branch_points(g, u.m, u.n).unwrap();
                    if b == 0 {
                        continue;
                    }
                    let split = kind.pure_split(b).unwrap();
                    let poly = chamber_polynomial(split, &c).unwrap();
                    let (m, n) = (comp(&mu), comp(&nu));
                    let v = evaluate(&poly, u, &m, &n).unwrap();
                    let expected = hurwitz_disconnected(&m, &n, split.0, split.1, split.2).unwrap();
                    assert_eq!(v, expected, "{kind:?} g={g} {m} {n}");
                    assert!(poly.degree().unwrap_or(0) as i64 <= degree_bound(g, u.m, u.n));
                }
            }
        }
    }

    #[test]
    fn strict_genus_zero_one_two_is_constant() {
        let c = chamber_of(&[3], &[1, 2]).unwrap();
        let p = chamber_polynomial_genus(HurwitzType::Strict, 0, &c).unwrap();
        assert!(p.degree().unwrap_or(0) == 0);
    }

    #[test]
    fn monotone_genus_one_constant_term() {
        let c = chamber_of(&[2], &[2]).unwrap();
        let p = chamber_polynomial_genus(HurwitzType::Monotone, 1, &c).unwrap();
        assert_eq!(p.constant_term(), rat(-1, 12));
    }

    /// The constant term is `−(2g−3+m+n)! (2g−1) B_{2g} / (2g)!` in every chamber.
    #[test]
    fn monotone_constant_term_closed_form() {
        use crate::algebra::{bernoulli, factorial, rat_int};
        for (g, mu, nu) in [
            (0u32, &[3u32][..], &[1u32, 2][..]),
            (0, &[1, 3], &[2, 2]),
            (1, &[2], &[2]),
            (1, &[3], &[1, 2]),
            (1, &[1, 3], &[2, 2]),
            (2, &[1, 2], &[3]),
            (3, &[2], &[2]),
        ] {
            let c = chamber_of(mu, nu).unwrap();
            let p = chamber_polynomial_genus(HurwitzType::Monotone, g, &c).unwrap();
            let top = 2 * g + mu.len() as u32 + nu.len() as u32 - 3;
            let expected = -rat_int(factorial(top)) * rat_int(2 * g as i64 - 1) * bernoulli::<Rational>(2 * g)
                / rat_int(factorial(2 * g));
            assert_eq!(p.constant_term(), expected, "g={g} {mu:?}:{nu:?}");
        }
    }

    #[test]
    fn degenerate_signature() {
        let c = chamber_of(&[2], &[2]).unwrap();
        assert_eq!(chamber_polynomial((0, 0, 0), &c), Err(WedgeError::DegenerateSignature));
        assert_eq!(chamber_polynomial((1, 0, 0), &c), Err(WedgeError::InvalidGenus(1, 1, 1)));
    }

    #[test]
    fn evaluate_examples() {
        let u = Universe::new(1, 1);
        assert_eq!(evaluate(&Poly::zero(2), u, &comp(&[2]), &comp(&[2])).unwrap(), rat(0, 1));
        let p = &u.mu(0).to_poly() * &u.nu(0).to_poly();
        assert_eq!(evaluate(&p, u, &comp(&[2]), &comp(&[2])).unwrap(), rat(4, 1));
        assert!(evaluate(&p, u, &comp(&[1, 1]), &comp(&[2])).is_err());
    }

    #[test]
    fn across_wall() {
        let c2 = chamber_of(&[3, 1], &[2, 2]).unwrap();
        let w = Wall { i_mask: 1, j_mask: 1 };
        let c1 = c2.across(w, 12).unwrap();
        assert_eq!(c1.sign(1, 1), Some(Sign::Minus));
        assert_eq!(c1.sign(1, 2), c2.sign(1, 2));
    }
}
