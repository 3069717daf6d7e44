//! Wall-crossing polynomials and the recursive product formula for the
//! chamber-difference series.
//!
//! A wall `δ = μ_I − ν_J = 0` separates `c1` (`δ < 0`) from `c2` (`δ > 0`).
//! For fixed numeric `(μ, ν)` with `δ > 0` the identity
//!
//! ```text
//! 𝓦𝓒_δ = δ² · R_δ(A_[n]) / (R_δ(A_J + Xδ) R_δ(A_{J^c}))
//!        · [t'^0 u'^0] 𝓗_{μ^I, ν^J+δ} · 𝓗_{μ^{I^c}+δ, ν^{J^c}}
//! ```
//!
//! is checked coefficientwise, where `R_δ(v) = ς(δv)/ς(v)`, `A_j = Xν_j + y_j + z_j`
//! and the `δ` slot of the first factor carries argument `Xδ` only.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{
    factorial, falling_factorial, rat_int, rising_factorial, sigma_ratio_coeffs, MultiPoly, SeriesShape, TruncSeries,
};
use crate::partitions::Composition;
use crate::wedge::{
    bits, chamber_of, chamber_polynomial, correlator_series_at, s_power_in, tuples_of, Chamber, FormalSum, Layout,
    Sign, Universe, Wall, WedgeError,
};
use crate::{branch_points, genus_of, HurwitzType, Linear, Poly, Rational, Series};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WallCrossError {
    #[error(transparent)]
    Wedge(#[from] WedgeError),
    #[error("{0} is not a wall: mu_I - nu_J has constant sign")]
    NotAWall(Wall),
    #[error("delta = {0} at the sample; a positive value is required")]
    InvalidSplit(i64),
    #[error("sample {0:?}:{1:?} is not in the chamber c2")]
    OutsideChamber(Vec<u32>, Vec<u32>),
    #[error("wall-crossing needs the monotone, strict or mixed type")]
    UnsupportedType,
}

/// A wall and the two chambers it separates, with `δ > 0` on `c2`.
#[derive(Debug, Clone)]
pub struct WallCrossingProblem {
    pub wall: Wall,
    pub c1: Chamber,
    pub c2: Chamber,
    pub split: (u32, u32, u32),
}

impl WallCrossingProblem {
    /// Problem for `(p, q, r)` across `wall`, where `c2` contains `sample`
    /// (the wall is oriented so that `δ > 0` there) and `c1` is the lattice
    /// chamber found by flipping that single sign.
    pub fn new(
        split: (u32, u32, u32),
        wall: Wall,
        sample: (&[u32], &[u32]),
        search_size: u32,
    ) -> Result<Self, WallCrossError> {
        let c2 = chamber_of(sample.0, sample.1)?;
        let u = c2.universe();
        if !wall.is_genuine(u) {
            return Err(WallCrossError::NotAWall(wall));
        }
        let (p, q, r) = split;
        genus_of(p + q + r, u.m, u.n).ok_or(WedgeError::InvalidGenus(p + q + r, u.m, u.n))?;
        let wall = match c2.sign(wall.i_mask, wall.j_mask) {
            Some(Sign::Plus) => wall,
            _ => {
                let (fm, fn_) = u.full_masks();
                Wall { i_mask: fm & !wall.i_mask, j_mask: fn_ & !wall.j_mask }
            }
        };
        let (canon, _) = Wall::canonical(u, wall.i_mask, wall.j_mask);
        let c1 = c2.across(canon, search_size)?;
        Ok(WallCrossingProblem { wall, c1, c2, split })
    }

    /// Pure-type problem in genus `g`.
    pub fn pure(
        kind: HurwitzType,
        g: u32,
        wall: Wall,
        sample: (&[u32], &[u32]),
        search_size: u32,
    ) -> Result<Self, WallCrossError> {
        if kind == HurwitzType::Simple || kind == HurwitzType::Mixed {
            return Err(WallCrossError::UnsupportedType);
        }
        let (m, n) = (sample.0.len(), sample.1.len());
        let b = branch_points(g, m, n).ok_or(WedgeError::DegenerateSignature)?;
        Self::new(kind.pure_split(b).unwrap(), wall, sample, search_size)
    }

    pub fn universe(&self) -> Universe {
        self.c2.universe()
    }

    /// The same wall crossed in the other direction.
    pub fn reversed(&self) -> Self {
        let (fm, fn_) = self.universe().full_masks();
        WallCrossingProblem {
            wall: Wall { i_mask: fm & !self.wall.i_mask, j_mask: fn_ & !self.wall.j_mask },
            c1: self.c2.clone(),
            c2: self.c1.clone(),
            split: self.split,
        }
    }

    /// `δ = μ_I − ν_J` at a point.
    pub fn delta(&self, mu: &[u32], nu: &[u32]) -> i64 {
        self.wall.value(mu, nu)
    }
}

/// `P_{c2} − P_{c1}`.
pub fn wallcrossing_polynomial(problem: &WallCrossingProblem) -> Result<Poly, WallCrossError> {
    let p2 = chamber_polynomial(problem.split, &problem.c2)?;
    let p1 = chamber_polynomial(problem.split, &problem.c1)?;
    Ok(&p2 - &p1)
}

/// Variables of the refined series for `n` slots and budgets `(p, q, r)`:
/// `X`, then `t_j, y_j` (monotone), then `u_j, z_j` (strict); a budget of 0
/// drops the corresponding variables.
#[derive(Debug, Clone)]
pub struct RefinedShape {
    pub shape: Arc<SeriesShape>,
    pub n: usize,
    pub split: (u32, u32, u32),
    pub x: Option<usize>,
    pub t: Vec<usize>,
    pub y: Vec<usize>,
    pub u: Vec<usize>,
    pub z: Vec<usize>,
}

impl RefinedShape {
    pub fn new(n: usize, split: (u32, u32, u32)) -> Self {
        let (p, q, r) = split;
        let mixed = [p, q, r].iter().filter(|&&k| k > 0).count() > 1 || p > 0;
        let (tn, yn, un, zn) = if mixed { ("t", "y", "u", "z") } else { ("u", "z", "u", "z") };
        let mut names = Vec::new();
        let mut orders = Vec::new();
        let mut push = |name: String, order: u32| {
            names.push(name);
            orders.push(order);
            names.len() - 1
        };
        let x = (p > 0).then(|| push("X".to_string(), p));
        let (mut t, mut y, mut u, mut z) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        if q > 0 {
            t = (1..=n).map(|j| push(format!("{tn}{j}"), q)).collect();
            y = (1..=n).map(|j| push(format!("{yn}{j}"), q)).collect();
        }
        if r > 0 {
            u = (1..=n).map(|j| push(format!("{un}{j}"), r)).collect();
            z = (1..=n).map(|j| push(format!("{zn}{j}"), r)).collect();
        }
        let mut shape = SeriesShape::new(names, orders);
        for (group, cap) in [(&t, q), (&y, q), (&u, r), (&z, r)] {
            if !group.is_empty() {
                shape = shape.with_group(group.clone(), cap);
            }
        }
        RefinedShape { shape: Arc::new(shape), n, split, x, t, y, u, z }
    }

    fn zero(&self) -> Series {
        TruncSeries::zero(self.shape.clone(), 0)
    }

    fn linear(&self, terms: &[(usize, Rational)]) -> Series {
        let terms: Vec<(usize, Poly)> = terms.iter().map(|(v, c)| (*v, MultiPoly::constant(0, c.clone()))).collect();
        TruncSeries::linear(self.shape.clone(), 0, &terms)
    }

    /// `A_j = Xν_j + y_j + z_j` as a numeric series.
    fn slot_argument(&self, value: u32, slot: Option<usize>) -> Series {
        let mut terms = Vec::new();
        if let Some(x) = self.x {
            terms.push((x, rat_int(value)));
        }
        if let Some(j) = slot {
            if let Some(&y) = self.y.get(j) {
                terms.push((y, Rational::one()));
            }
            if let Some(&z) = self.z.get(j) {
                terms.push((z, Rational::one()));
            }
        }
        self.linear(&terms)
    }

    /// Single-variable series `Σ_k c_k v^k` at variable `var`.
    fn univariate(&self, var: usize, coeffs: impl Iterator<Item = Rational>) -> Series {
        let mut s = self.zero();
        for (k, c) in coeffs.enumerate().take(self.shape.orders()[var] as usize + 1) {
            let mut e = vec![0; self.shape.len()];
            e[var] = k as u32;
            s = &s + &TruncSeries::from_terms(self.shape.clone(), 0, [(e, MultiPoly::constant(0, c))]);
        }
        s
    }
}

/// Multiply a numeric correlator by the slot factors of the refined series
/// and divide by `∏μ ∏ν`. Slots with `None` are the `δ` part, taken at
/// `t' = u' = 0`.
fn dress(rs: &RefinedShape, corr: Series, mu: &[u32], slots: &[(u32, Option<usize>)]) -> Series {
    let mut s = corr;
    let mut denom: Rational = mu.iter().map(|&x| rat_int(x)).product();
    for &(value, slot) in slots {
        denom *= rat_int(value);
        let Some(j) = slot else { continue };
        let nu = MultiPoly::constant(0, rat_int(value));
        let one = Poly::one(0);
        if let (Some(&t), Some(&y)) = (rs.t.get(j), rs.y.get(j)) {
            let rising = rs.univariate(t, (0..).map(|k| rising_factorial(&nu, k).constant_term()));
            s = &(&s * &rising) * &s_power_in(&rs.shape, 0, y, &(&nu - &one));
        }
        if let (Some(&u), Some(&z)) = (rs.u.get(j), rs.z.get(j)) {
            let falling = rs.univariate(u, (0..).map(|k| falling_factorial(&nu, k).constant_term()));
            s = &(&s * &falling) * &s_power_in(&rs.shape, 0, z, &-&(&nu + &one));
        }
    }
    s.scale_scalar(&(Rational::one() / denom))
}

/// Layout placing `ν`-slot `k` of a sub-problem on global slot `slots[k].1`.
fn slot_layout(rs: &RefinedShape, universe: Universe, slots: &[(u32, Option<usize>)]) -> Layout {
    let nv = universe.nvars();
    let args = slots
        .iter()
        .enumerate()
        .map(|(k, &(_, slot))| {
            let mut a = FormalSum::zero(nv);
            if let Some(x) = rs.x {
                a = a.with_term(x, universe.nu(k));
            }
            if let Some(j) = slot {
                for var in [rs.y.get(j), rs.z.get(j)].into_iter().flatten() {
                    a = a.with_term(*var, Linear::constant(nv, Rational::one()));
                }
            }
            a
        })
        .collect();
    Layout::new(universe, rs.shape.clone(), args)
}

fn refined_slots(rs: &RefinedShape, mu: &[u32], slots: &[(u32, Option<usize>)]) -> Result<Series, WallCrossError> {
    let nu: Vec<u32> = slots.iter().map(|s| s.0).collect();
    let chamber = chamber_of(mu, &nu)?;
    let universe = chamber.universe();
    let layout = slot_layout(rs, universe, slots);
    let point: Vec<Rational> = mu.iter().chain(&nu).map(|&x| rat_int(x)).collect();
    let corr = correlator_series_at(&chamber, &layout, &point)?;
    Ok(dress(rs, corr, mu, slots))
}

/// Refined generating series of `(μ, ν)` with variable budgets `split`,
/// computed from the correlator in the chamber of `(μ, ν)`.
pub fn refined_series(rs: &RefinedShape, mu: &Composition, nu: &Composition) -> Result<Series, WallCrossError> {
    if mu.size() != nu.size() {
        return Err(WedgeError::SumMismatch(mu.size(), nu.size()).into());
    }
    assert_eq!(rs.n, nu.len());
    let slots: Vec<(u32, Option<usize>)> = nu.parts().iter().enumerate().map(|(j, &v)| (v, Some(j))).collect();
    refined_slots(rs, mu.parts(), &slots)
}

/// `p! Σ [X^p y^v z^w][t^v u^w]` over `|v| = q`, `|w| = r`: recovers the
/// Hurwitz number (or wall-crossing value) from a refined series.
pub fn extract_number(rs: &RefinedShape, series: &Series) -> Rational {
    let (p, q, r) = rs.split;
    let mut total = Rational::zero();
    for (e, c) in series.terms() {
        let xp = rs.x.map(|i| e[i]).unwrap_or(0);
        let matched = |a: &[usize], b: &[usize], budget: u32| {
            a.iter().zip(b).all(|(&i, &k)| e[i] == e[k]) && b.iter().map(|&k| e[k]).sum::<u32>() == budget
        };
        if xp == p && matched(&rs.t, &rs.y, q) && matched(&rs.u, &rs.z, r) {
            total += c.constant_term();
        }
    }
    total * rat_int(factorial(p))
}

/// Left side: the chamber-difference series at the sample.
pub fn wallcrossing_series(
    problem: &WallCrossingProblem,
    rs: &RefinedShape,
    mu: &[u32],
    nu: &[u32],
) -> Result<Series, WallCrossError> {
    let universe = problem.universe();
    let slots: Vec<(u32, Option<usize>)> = nu.iter().enumerate().map(|(j, &v)| (v, Some(j))).collect();
    let layout = slot_layout(rs, universe, &slots);
    let point: Vec<Rational> = mu.iter().chain(nu).map(|&x| rat_int(x)).collect();
    let q2 = correlator_series_at(&problem.c2, &layout, &point)?;
    let q1 = correlator_series_at(&problem.c1, &layout, &point)?;
    Ok(dress(rs, &q2 - &q1, mu, &slots))
}

/// `R_δ(v) = ς(δv)/ς(v)` composed with a series `v` without constant term.
fn sigma_ratio_of(delta: &Rational, v: &Series) -> Series {
    let order: u32 = v.shape().orders().iter().sum();
    let coeffs = sigma_ratio_coeffs(&MultiPoly::constant(0, delta.clone()), order);
    let mut out = TruncSeries::zero(v.shape().clone(), 0);
    let mut power = TruncSeries::one(v.shape().clone(), 0);
    for c in coeffs {
        if power.is_zero() {
            break;
        }
        out = &out + &power.scale(&c);
        power = &power * v;
    }
    out
}

/// Right side: `δ² · prefactor · [t'^0 u'^0] 𝓗_{μ^I, ν^J+δ} · 𝓗_{μ^{I^c}+δ, ν^{J^c}}`.
pub fn product_series(
    problem: &WallCrossingProblem,
    rs: &RefinedShape,
    mu: &[u32],
    nu: &[u32],
) -> Result<Series, WallCrossError> {
    let delta = problem.delta(mu, nu);
    if delta <= 0 {
        return Err(WallCrossError::InvalidSplit(delta));
    }
    let d = delta as u32;
    let (im, jm) = (problem.wall.i_mask, problem.wall.j_mask);
    let u = problem.universe();
    let (fm, fn_) = u.full_masks();

    let mu_i: Vec<u32> = bits(im).map(|i| mu[i]).collect();
    let mut left_slots: Vec<(u32, Option<usize>)> = bits(jm).map(|j| (nu[j], Some(j))).collect();
    left_slots.push((d, None));
    let mut mu_ic: Vec<u32> = bits(fm & !im).map(|i| mu[i]).collect();
    mu_ic.push(d);
    let right_slots: Vec<(u32, Option<usize>)> = bits(fn_ & !jm).map(|j| (nu[j], Some(j))).collect();

    let left = refined_slots(rs, &mu_i, &left_slots)?;
    let right = refined_slots(rs, &mu_ic, &right_slots)?;

    let arg = |mask: u32| bits(mask).fold(rs.zero(), |acc, j| &acc + &rs.slot_argument(nu[j], Some(j)));
    let dq = rat_int(d);
    let a_all = arg(fn_);
    let a_j = &arg(jm) + &rs.slot_argument(d, None);
    let a_jc = arg(fn_ & !jm);
    let num = sigma_ratio_of(&dq, &a_all);
    let den = &sigma_ratio_of(&dq, &a_j) * &sigma_ratio_of(&dq, &a_jc);
    let inv = den.inverse().expect("ratio series has constant term δ²");
    let prefactor = (&num * &inv).scale_scalar(&(&dq * &dq));
    Ok(&(&prefactor * &left) * &right)
}

/// First coefficient where the two sides differ.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub monomial: String,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub mu: Vec<u32>,
    pub nu: Vec<u32>,
    pub delta: i64,
    pub coefficients: usize,
    pub mismatch: Option<Mismatch>,
    /// Extracted number from the series against `P_{c2} − P_{c1}` at the sample.
    pub number: (Rational, Rational),
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none() && self.number.0 == self.number.1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WallCrossingReport {
    pub samples: Vec<SampleReport>,
}

impl WallCrossingReport {
    pub fn passed(&self) -> bool {
        !self.samples.is_empty() && self.samples.iter().all(|s| s.passed())
    }
}

fn monomial(shape: &SeriesShape, e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(shape.names())
        .filter(|(k, _)| **k > 0)
        .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn verify_sample(
    problem: &WallCrossingProblem,
    wc_poly: &Poly,
    mu: &[u32],
    nu: &[u32],
) -> Result<SampleReport, WallCrossError> {
    let delta = problem.delta(mu, nu);
    if delta <= 0 {
        return Err(WallCrossError::InvalidSplit(delta));
    }
    chamber_of(mu, nu)?;
    if !problem.c2.contains(mu, nu) {
        return Err(WallCrossError::OutsideChamber(mu.to_vec(), nu.to_vec()));
    }
    let rs = RefinedShape::new(nu.len(), problem.split);
    let lhs = wallcrossing_series(problem, &rs, mu, nu)?;
    let rhs = product_series(problem, &rs, mu, nu)?;
    let mut keys: Vec<&Vec<u32>> = lhs.terms().keys().chain(rhs.terms().keys()).collect();
    keys.sort();
    keys.dedup();
    let mismatch = keys.iter().find_map(|e| {
        let (a, b) = (lhs.coeff(e).constant_term(), rhs.coeff(e).constant_term());
        (a != b).then(|| Mismatch { monomial: monomial(&rs.shape, e), lhs: a, rhs: b })
    });
    let point: Vec<Rational> = mu.iter().chain(nu).map(|&x| rat_int(x)).collect();
    let number = (extract_number(&rs, &lhs), wc_poly.evaluate(&point));
    Ok(SampleReport { mu: mu.to_vec(), nu: nu.to_vec(), delta, coefficients: keys.len(), mismatch, number })
}

/// Check the product formula at every sample, in parallel.
pub fn verify_wallcrossing(
    problem: &WallCrossingProblem,
    samples: &[(Vec<u32>, Vec<u32>)],
) -> Result<WallCrossingReport, WallCrossError> {
    let wc_poly = wallcrossing_polynomial(problem)?;
    let results: Vec<Result<SampleReport, WallCrossError>> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            samples.iter().map(|(mu, nu)| scope.spawn(|| verify_sample(problem, &wc_poly, mu, nu))).collect();
        handles.into_iter().map(|h| h.join().expect("sample worker panicked")).collect()
    });
    Ok(WallCrossingReport { samples: results.into_iter().collect::<Result<_, _>>()? })
}

/// Up to `count` lattice points of `chamber` with `|μ| ≤ max_size`, smallest first.
pub fn samples_in(chamber: &Chamber, count: usize, max_size: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    let u = chamber.universe();
    let mut out = Vec::new();
    for d in 1..=max_size {
        for mu in tuples_of(d, u.m) {
            for nu in tuples_of(d, u.n) {
                if chamber.contains(&mu, &nu) {
                    out.push((mu.clone(), nu));
                    if out.len() == count {
                        return out;
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::charactereval::hurwitz_disconnected;

    fn comp(p: &[u32]) -> Composition {
        Composition::new(p.to_vec()).unwrap()
    }

    const W11: Wall = Wall { i_mask: 1, j_mask: 1 };

    #[test]
    fn rejects_non_walls() {
        let e = WallCrossingProblem::new((0, 0, 0), Wall { i_mask: 1, j_mask: 1 }, (&[2], &[2]), 8);
        assert!(matches!(e, Err(WallCrossError::NotAWall(_))));
    }

    #[test]
    fn refined_series_recovers_numbers() {
        for (mu, nu) in [(vec![2], vec![1, 1]), (vec![3], vec![1, 2]), (vec![2, 1], vec![3]), (vec![3, 1], vec![2, 2])]
        {
            let (m, n) = (comp(&mu), comp(&nu));
            for split in [(0, 1, 0), (0, 0, 1), (1, 0, 0), (0, 3, 0), (0, 0, 3), (1, 1, 1), (2, 1, 0)] {
                let (p, q, r) = split;
                if genus_of(p + q + r, m.len(), n.len()).is_none() {
                    continue;
                }
                let rs = RefinedShape::new(n.len(), split);
                let Ok(s) = refined_series(&rs, &m, &n) else { continue };
                let expected = hurwitz_disconnected(&m, &n, p, q, r).unwrap();
                assert_eq!(extract_number(&rs, &s), expected, "{m} {n} {split:?}");
            }
        }
    }

    #[test]
    fn refined_series_trivial_cases() {
        let rs = RefinedShape::new(1, (0, 0, 0));
        let s = refined_series(&rs, &comp(&[1]), &comp(&[1])).unwrap();
        assert_eq!(s.constant_term().constant_term(), rat(1, 1));
        assert_eq!(s.terms().len(), 1);
    }

    #[test]
    fn monotone_genus_zero_wall() {
        let pr = WallCrossingProblem::pure(HurwitzType::Monotone, 0, W11, (&[3, 1], &[2, 2]), 12).unwrap();
        let report = verify_wallcrossing(&pr, &[(vec![3, 1], vec![2, 2])]).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn invalid_split_and_reverse() {
        let pr = WallCrossingProblem::pure(HurwitzType::Strict, 0, W11, (&[3, 1], &[2, 2]), 12).unwrap();
        let rs = RefinedShape::new(2, pr.split);
        assert_eq!(product_series(&pr, &rs, &[2, 2], &[2, 2]).unwrap_err(), WallCrossError::InvalidSplit(0));
        let fwd = wallcrossing_polynomial(&pr).unwrap();
        let back = wallcrossing_polynomial(&pr.reversed()).unwrap();
        assert_eq!(&fwd + &back, Poly::zero(4));
    }
}
