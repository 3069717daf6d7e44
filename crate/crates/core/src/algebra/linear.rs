use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use super::poly::MultiPoly;
use super::scalar::Scalar;

/// `c + Σ a_i x_i` over a fixed universe of indeterminates.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm<S> {
    nvars: usize,
    coeffs: BTreeMap<usize, S>,
    constant: S,
}

impl<S: Scalar> LinearForm<S> {
    pub fn zero(nvars: usize) -> Self {
        LinearForm { nvars, coeffs: BTreeMap::new(), constant: S::zero() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        LinearForm { nvars, coeffs: BTreeMap::new(), constant: c }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::zero(nvars).with_coeff(i, S::one())
    }

    pub fn with_coeff(mut self, i: usize, c: S) -> Self {
        assert!(i < self.nvars);
        let v = self.coeffs.remove(&i).unwrap_or_else(S::zero) + c;
        if !v.is_zero() {
            self.coeffs.insert(i, v);
        }
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(&i).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_part(&self) -> &S {
        &self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, S> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::constant(self.nvars, self.constant.clone() * c.clone());
        for (&i, v) in &self.coeffs {
            out = out.with_coeff(i, v.clone() * c.clone());
        }
        out
    }

    pub fn evaluate(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars);
        self.coeffs.iter().fold(self.constant.clone(), |acc, (&i, c)| acc + c.clone() * point[i].clone())
    }

    pub fn to_poly(&self) -> MultiPoly<S> {
        let mut p = MultiPoly::constant(self.nvars, self.constant.clone());
        for (&i, c) in &self.coeffs {
            p = &p + &MultiPoly::var(self.nvars, i).scale(c);
        }
        p
    }
}

impl<S: Scalar> Add for &LinearForm<S> {
    type Output = LinearForm<S>;
    fn add(self, rhs: &LinearForm<S>) -> LinearForm<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = LinearForm::constant(self.nvars, self.constant.clone() + rhs.constant.clone());
        for (&i, c) in self.coeffs.iter().chain(&rhs.coeffs) {
            out = out.with_coeff(i, c.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &LinearForm<S> {
    type Output = LinearForm<S>;
    fn neg(self) -> LinearForm<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Sub for &LinearForm<S> {
    type Output = LinearForm<S>;
    fn sub(self, rhs: &LinearForm<S>) -> LinearForm<S> {
        self + &(-rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;
    use num_rational::BigRational;

    #[test]
    fn canonical_and_evaluate() {
        let a = LinearForm::<BigRational>::var(3, 0);
        let b = LinearForm::var(3, 1);
        let d = &a - &b;
        assert_eq!(d.coeffs().len(), 2);
        assert!((&d - &d).is_zero());
        assert!((&d - &d).coeffs().is_empty());
        assert_eq!(d.evaluate(&[rat(5, 1), rat(2, 1), rat(9, 1)]), rat(3, 1));
        assert_eq!(d.to_poly().degree(), Some(1));
    }
}
