use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::poly::{Exponents, MultiPoly};
use super::scalar::Scalar;

/// Expansion variables with their truncation data.
///
/// A monomial is kept when every exponent is at most its variable's order and,
/// for each group, the exponents of the group's members sum to at most the cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesShape {
    names: Vec<String>,
    orders: Vec<u32>,
    groups: Vec<(Vec<usize>, u32)>,
}

impl SeriesShape {
    pub fn new(names: Vec<String>, orders: Vec<u32>) -> Self {
        assert_eq!(names.len(), orders.len());
        SeriesShape { names, orders, groups: Vec::new() }
    }

    pub fn univariate(name: &str, order: u32) -> Self {
        Self::new(vec![name.to_string()], vec![order])
    }

    pub fn with_group(mut self, members: Vec<usize>, cap: u32) -> Self {
        assert!(members.iter().all(|&i| i < self.names.len()));
        self.groups.push((members, cap));
        self
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn admits(&self, e: &[u32]) -> bool {
        e.iter().zip(&self.orders).all(|(a, o)| a <= o)
            && self.groups.iter().all(|(m, cap)| m.iter().map(|&i| e[i]).sum::<u32>() <= *cap)
    }
}

/// Truncated power series in the variables of a [`SeriesShape`], with
/// polynomial coefficients over a universe of `nvars` indeterminates.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<S> {
    shape: Arc<SeriesShape>,
    nvars: usize,
    coeffs: BTreeMap<Exponents, MultiPoly<S>>,
}

impl<S: Scalar> TruncSeries<S> {
    pub fn zero(shape: Arc<SeriesShape>, nvars: usize) -> Self {
        TruncSeries { shape, nvars, coeffs: BTreeMap::new() }
    }

    pub fn constant(shape: Arc<SeriesShape>, c: MultiPoly<S>) -> Self {
        let nvars = c.nvars();
        let mut s = Self::zero(shape, nvars);
        let e = vec![0; s.shape.len()];
        s.add_term(e, c);
        s
    }

    pub fn one(shape: Arc<SeriesShape>, nvars: usize) -> Self {
        Self::constant(shape, MultiPoly::one(nvars))
    }

    /// `Σ c_v · v` over the given (variable index, coefficient) pairs.
    pub fn linear(shape: Arc<SeriesShape>, nvars: usize, terms: &[(usize, MultiPoly<S>)]) -> Self {
        let mut s = Self::zero(shape, nvars);
        for (i, c) in terms {
            let mut e = vec![0; s.shape.len()];
            e[*i] = 1;
            s.add_term(e, c.clone());
        }
        s
    }

    pub fn from_terms(
        shape: Arc<SeriesShape>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Exponents, MultiPoly<S>)>,
    ) -> Self {
        let mut s = Self::zero(shape, nvars);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn shape(&self) -> &Arc<SeriesShape> {
        &self.shape
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, MultiPoly<S>> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> MultiPoly<S> {
        self.coeffs.get(e).cloned().unwrap_or_else(|| MultiPoly::zero(self.nvars))
    }

    pub fn constant_term(&self) -> MultiPoly<S> {
        self.coeff(&vec![0; self.shape.len()])
    }

    fn add_term(&mut self, e: Exponents, c: MultiPoly<S>) {
        assert_eq!(e.len(), self.shape.len());
        assert_eq!(c.nvars(), self.nvars, "coefficient universe mismatch");
        if c.is_zero() || !self.shape.admits(&e) {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.coeffs.remove(&e);
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert!(Arc::ptr_eq(&self.shape, &other.shape) || self.shape == other.shape, "series over different shapes");
        assert_eq!(self.nvars, other.nvars, "series over different coefficient universes");
    }

    pub fn scale(&self, c: &MultiPoly<S>) -> Self {
        let mut out = Self::zero(self.shape.clone(), self.nvars);
        for (e, v) in &self.coeffs {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn scale_scalar(&self, c: &S) -> Self {
        let mut out = Self::zero(self.shape.clone(), self.nvars);
        for (e, v) in &self.coeffs {
            out.add_term(e.clone(), v.scale(c));
        }
        out
    }

    /// `Σ_k coeffs[k] · self^k`; `self` must have zero constant term.
    pub fn compose_univariate(&self, coeffs: &[MultiPoly<S>]) -> Self {
        assert!(self.constant_term().is_zero(), "substituted series must vanish at the origin");
        let mut out = Self::zero(self.shape.clone(), self.nvars);
        let mut power = Self::one(self.shape.clone(), self.nvars);
        for c in coeffs {
            if power.is_zero() {
                break;
            }
            if !c.is_zero() {
                out = &out + &power.scale(c);
            }
            power = &power * self;
        }
        out
    }

    /// Multiplicative inverse; the constant term must be a nonzero scalar.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.constant_term().as_constant()?;
        let inv = c0.try_inv()?;
        let one = Self::one(self.shape.clone(), self.nvars);
        // 1/(c0 (1 + u)) with u = self/c0 - 1
        let u = &self.scale_scalar(&inv) - &one;
        let mut out = Self::zero(self.shape.clone(), self.nvars);
        let mut power = one;
        let mut sign = S::one();
        while !power.is_zero() {
            out = &out + &power.scale_scalar(&sign);
            power = &power * &u;
            sign = -sign;
        }
        Some(out.scale_scalar(&inv))
    }

    /// Reindex into `target`, sending variable `i` to `map[i]`; terms the
    /// target does not admit are dropped.
    pub fn remap(&self, target: Arc<SeriesShape>, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.shape.len());
        let mut out = Self::zero(target.clone(), self.nvars);
        for (e, c) in &self.coeffs {
            let mut ne = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Part of the series of exact degree `k` in variable `i`, with that variable removed.
    pub fn coefficient_of_var(&self, i: usize, k: u32) -> Self {
        let mut out = Self::zero(self.shape.clone(), self.nvars);
        for (e, c) in &self.coeffs {
            if e[i] == k {
                let mut ne = e.clone();
                ne[i] = 0;
                out.add_term(ne, c.clone());
            }
        }
        out
    }

    /// Apply `f` to every coefficient, moving to a universe of `nvars` indeterminates.
    pub fn map_coeffs(&self, nvars: usize, f: impl Fn(&MultiPoly<S>) -> MultiPoly<S>) -> Self {
        let mut out = Self::zero(self.shape.clone(), nvars);
        for (e, c) in &self.coeffs {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Substitute a numeric point into every coefficient.
    pub fn evaluate_coeffs(&self, point: &[S]) -> Self {
        self.map_coeffs(0, |c| MultiPoly::constant(0, c.evaluate(point)))
    }
}

impl<S: Scalar> Add for &TruncSeries<S> {
    type Output = TruncSeries<S>;
    fn add(self, rhs: &TruncSeries<S>) -> TruncSeries<S> {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &TruncSeries<S> {
    type Output = TruncSeries<S>;
    fn neg(self) -> TruncSeries<S> {
        self.scale_scalar(&-S::one())
    }
}

impl<S: Scalar> Sub for &TruncSeries<S> {
    type Output = TruncSeries<S>;
    fn sub(self, rhs: &TruncSeries<S>) -> TruncSeries<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Mul for &TruncSeries<S> {
    type Output = TruncSeries<S>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &TruncSeries<S>) -> TruncSeries<S> {
        self.check_compatible(rhs);
        let mut out = TruncSeries::zero(self.shape.clone(), self.nvars);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if self.shape.admits(&e) {
                    out.add_term(e, ca * cb);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;
    use num_rational::BigRational;

    type P = MultiPoly<BigRational>;

    fn shape2(order: u32) -> Arc<SeriesShape> {
        Arc::new(SeriesShape::new(vec!["a".into(), "b".into()], vec![order, order]))
    }

    #[test]
    fn truncation_is_enforced() {
        let sh = shape2(2);
        let a = TruncSeries::linear(sh.clone(), 0, &[(0, P::one(0))]);
        let a3 = &(&a * &a) * &a;
        assert!(a3.is_zero());
        let grouped = Arc::new(SeriesShape::new(vec!["a".into(), "b".into()], vec![2, 2]).with_group(vec![0, 1], 2));
        let s = TruncSeries::linear(grouped, 0, &[(0, P::one(0)), (1, P::one(0))]);
        let sq = &s * &s;
        assert_eq!(sq.terms().len(), 3);
        assert!((&sq * &s).is_zero());
    }

    #[test]
    fn inverse_of_geometric() {
        let sh = Arc::new(SeriesShape::univariate("v", 5));
        let one = TruncSeries::one(sh.clone(), 0);
        let v = TruncSeries::linear(sh.clone(), 0, &[(0, P::one(0))]);
        let f = &one - &v;
        let inv = f.inverse().unwrap();
        for k in 0..=5u32 {
            assert_eq!(inv.coeff(&[k]), P::one(0));
        }
        assert_eq!(&f * &inv, one);
        let two = TruncSeries::constant(sh, P::constant(0, rat(2, 1)));
        assert_eq!(two.inverse().unwrap().constant_term(), P::constant(0, rat(1, 2)));
    }

    #[test]
    fn remap_and_extract() {
        let sh = shape2(3);
        let a = TruncSeries::linear(sh.clone(), 0, &[(0, P::one(0)), (1, P::constant(0, rat(2, 1)))]);
        let sq = &a * &a;
        let b_only = sq.coefficient_of_var(0, 0);
        assert_eq!(b_only.terms().len(), 1);
        assert_eq!(b_only.coeff(&[0, 2]), P::constant(0, rat(4, 1)));
        let swapped = sq.remap(sh.clone(), &[1, 0]);
        assert_eq!(swapped.coeff(&[2, 0]), P::constant(0, rat(4, 1)));
    }
}
