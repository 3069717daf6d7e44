use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;
use super::AlgebraError;

/// Exponent vector over a fixed, ordered set of indeterminates.
pub type Exponents = Vec<u32>;

/// Sparse polynomial in `nvars` indeterminates. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<S> {
    nvars: usize,
    terms: BTreeMap<Exponents, S>,
}

impl<S: Scalar> MultiPoly<S> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} indeterminates");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, S::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, S)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector has wrong length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, S> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, e: &[u32]) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&vec![0; self.nvars])
    }

    /// `Some(c)` if the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    fn add_term(&mut self, e: Exponents, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong arity");
        let mut total = S::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t * x.clone();
                }
            }
            total = total + t;
        }
        total
    }

    /// Substitute polynomials (in a possibly different universe) for every indeterminate.
    pub fn compose(&self, images: &[MultiPoly<S>], target_nvars: usize) -> Self {
        assert_eq!(images.len(), self.nvars);
        let mut out = Self::zero(target_nvars);
        for (e, c) in &self.terms {
            let mut t = Self::constant(target_nvars, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    t = &t * &img.pow(k);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Exact quotient `self / q`; fails unless `q` divides `self`.
    pub fn exact_divide(&self, q: &Self) -> Result<Self, AlgebraError> {
        assert_eq!(self.nvars, q.nvars);
        let (lead_e, lead_c) = q.terms.iter().next_back().ok_or(AlgebraError::DivisionByZero)?;
        let inv = lead_c.try_inv().ok_or(AlgebraError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((e, c)) = rem.terms.iter().next_back() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return Err(AlgebraError::NotDivisible);
            }
            let qe: Exponents = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = c.clone() * inv.clone();
            let mono = Self::from_terms(self.nvars, [(qe, qc)]);
            rem = &rem - &(&mono * q);
            quot = &quot + &mono;
        }
        Ok(quot)
    }

    /// Render with the given indeterminate names.
    pub fn display_with(&self, names: &[String]) -> String
    where
        S: fmt::Display,
    {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
                .collect();
            if mono.is_empty() {
                parts.push(format!("({c})"));
            } else {
                parts.push(format!("({c})*{}", mono.join("*")));
            }
        }
        parts.join(" + ")
    }
}

impl<'a, S: Scalar> Add<&'a MultiPoly<S>> for &'a MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn add(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different universes");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Sub<&'a MultiPoly<S>> for &'a MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn sub(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different universes");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Mul<&'a MultiPoly<S>> for &'a MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn mul(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different universes");
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn neg(self) -> MultiPoly<S> {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl<S: Scalar> $tr<MultiPoly<S>> for MultiPoly<S> {
            type Output = MultiPoly<S>;
            fn $f(self, rhs: MultiPoly<S>) -> MultiPoly<S> {
                (&self).$f(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<S: Scalar> Neg for MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn neg(self) -> MultiPoly<S> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;
    use num_rational::BigRational;

    type P = MultiPoly<BigRational>;

    fn x(i: usize) -> P {
        P::var(2, i)
    }

    #[test]
    fn arithmetic_and_evaluation() {
        let p = &(&x(0) * &x(0)) * &x(1);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.evaluate(&[rat(2, 1), rat(3, 1)]), rat(12, 1));
        let z = &p - &p;
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn exact_division() {
        let p = &(&x(0) * &x(0)) * &x(1);
        assert_eq!(p.exact_divide(&x(0)).unwrap(), &x(0) * &x(1));
        let s = &x(0) + &x(1);
        assert_eq!(s.exact_divide(&x(0)), Err(AlgebraError::NotDivisible));
        let prod = &(&s * &s) * &(&x(0) - &P::one(2));
        assert_eq!(prod.exact_divide(&s).unwrap(), &s * &(&x(0) - &P::one(2)));
        assert_eq!(p.exact_divide(&P::zero(2)), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn compose_substitutes() {
        // (x0 + x1) with x0 -> y, x1 -> y^2 in one variable
        let p = &x(0) + &x(1);
        let y = MultiPoly::<BigRational>::var(1, 0);
        let q = p.compose(&[y.clone(), &y * &y], 1);
        assert_eq!(q, &y + &(&y * &y));
    }
}
