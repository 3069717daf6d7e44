//! Series of ς(z) = e^{z/2} − e^{−z/2}, 𝒮(z) = ς(z)/z, their powers and ratios,
//! factorial polynomials and Bernoulli numbers.

use std::sync::Arc;

use super::linear::LinearForm;
use super::poly::MultiPoly;
use super::scalar::Scalar;
use super::series::{SeriesShape, TruncSeries};

/// Coefficients `s_k` of `𝒮(v) = Σ s_k v^{2k}`, for `2k ≤ order`.
fn s_even_coeffs<S: Scalar>(order: u32) -> Vec<S> {
    let mut out = Vec::new();
    let mut denom = S::one(); // 4^k (2k+1)!
    for k in 0..=order / 2 {
        if k > 0 {
            let k = k as i64;
            denom = denom * S::from_i64(4 * (2 * k) * (2 * k + 1));
        }
        out.push(S::one() / denom.clone());
    }
    out
}

/// Dense univariate product truncated at degree `order`.
fn uni_mul<S: Scalar>(a: &[MultiPoly<S>], b: &[MultiPoly<S>], order: usize, nvars: usize) -> Vec<MultiPoly<S>> {
    let mut out = vec![MultiPoly::zero(nvars); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

/// `exp(f)` for a univariate series `f` with zero constant term.
fn uni_exp<S: Scalar>(f: &[MultiPoly<S>], order: usize, nvars: usize) -> Vec<MultiPoly<S>> {
    assert!(f.first().is_none_or(|c| c.is_zero()));
    let mut out = vec![MultiPoly::zero(nvars); order + 1];
    out[0] = MultiPoly::one(nvars);
    let mut term = out.clone();
    for k in 1..=order {
        term = uni_mul(&term, f, order, nvars);
        let inv_k = S::from_ratio(1, k as i64);
        term = term.iter().map(|c| c.scale(&inv_k)).collect();
        for (o, t) in out.iter_mut().zip(&term) {
            *o = &*o + t;
        }
    }
    out
}

/// `log(f)` for a scalar univariate series with `f(0) = 1`.
fn uni_log_scalar<S: Scalar>(f: &[S], order: usize) -> Vec<S> {
    assert!(f[0] == S::one());
    let polys: Vec<MultiPoly<S>> = f.iter().map(|c| MultiPoly::constant(0, c.clone())).collect();
    let mut u = polys.clone();
    u[0] = MultiPoly::zero(0);
    let mut out = vec![MultiPoly::zero(0); order + 1];
    let mut power = u.clone();
    for k in 1..=order {
        let sign = if k % 2 == 1 { S::one() } else { -S::one() };
        let c = sign * S::from_ratio(1, k as i64);
        for (o, p) in out.iter_mut().zip(&power) {
            *o = &*o + &p.scale(&c);
        }
        power = uni_mul(&power, &u, order, 0);
    }
    out.into_iter().map(|p| p.constant_term()).collect()
}

/// Scalar reciprocal of a univariate series with nonzero constant term.
fn uni_recip_scalar<S: Scalar>(f: &[S], order: usize) -> Vec<S> {
    let inv0 = f[0].try_inv().expect("series with zero constant term has no reciprocal");
    let mut out: Vec<S> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = if k == 0 { S::one() } else { S::zero() };
        for j in 1..=k.min(f.len() - 1) {
            acc = acc - f[j].clone() * out[k - j].clone();
        }
        out.push(acc * inv0.clone());
    }
    out
}

fn pad<S: Scalar>(v: Vec<MultiPoly<S>>, len: usize, nvars: usize) -> Vec<MultiPoly<S>> {
    let mut v = v;
    v.resize(len, MultiPoly::zero(nvars));
    v
}

/// Coefficients of `ς(a·v)` in `v` up to `order`.
pub fn sigma_coeffs<S: Scalar>(a: &MultiPoly<S>, order: u32) -> Vec<MultiPoly<S>> {
    let nvars = a.nvars();
    let s = s_even_coeffs::<S>(order);
    let mut out = vec![MultiPoly::zero(nvars); order as usize + 1];
    for (k, sk) in s.iter().enumerate() {
        let deg = 2 * k + 1;
        if deg <= order as usize {
            out[deg] = a.pow(deg as u32).scale(sk);
        }
    }
    out
}

/// Coefficients of `ς(a·v)/ς(v) = a·𝒮(a v)/𝒮(v)` in `v` up to `order`.
pub fn sigma_ratio_coeffs<S: Scalar>(a: &MultiPoly<S>, order: u32) -> Vec<MultiPoly<S>> {
    let nvars = a.nvars();
    let len = order as usize + 1;
    let s = s_even_coeffs::<S>(order);
    let mut dense_s = vec![S::zero(); len];
    for (k, c) in s.iter().enumerate() {
        dense_s[2 * k] = c.clone();
    }
    let recip = uni_recip_scalar(&dense_s, order as usize);
    let s_av: Vec<MultiPoly<S>> = dense_s
        .iter()
        .enumerate()
        .map(|(d, c)| if c.is_zero() { MultiPoly::zero(nvars) } else { a.pow(d as u32).scale(c) })
        .collect();
    let recip: Vec<MultiPoly<S>> = recip.into_iter().map(|c| MultiPoly::constant(nvars, c)).collect();
    uni_mul(&s_av, &recip, order as usize, nvars).iter().map(|c| c * a).collect()
}

/// Coefficients of `𝒮(v)^c` in `v` up to `order`, with `c` a polynomial exponent.
pub fn s_power_coeffs<S: Scalar>(c: &MultiPoly<S>, order: u32) -> Vec<MultiPoly<S>> {
    let nvars = c.nvars();
    let len = order as usize + 1;
    let mut dense_s = vec![S::zero(); len];
    for (k, v) in s_even_coeffs::<S>(order).into_iter().enumerate() {
        dense_s[2 * k] = v;
    }
    let log_s = uni_log_scalar(&dense_s, order as usize);
    let scaled: Vec<MultiPoly<S>> = log_s.iter().map(|l| c.scale(l)).collect();
    uni_exp(&scaled, order as usize, nvars)
}

fn univariate_series<S: Scalar>(var: &str, order: u32, nvars: usize, coeffs: Vec<MultiPoly<S>>) -> TruncSeries<S> {
    let shape = Arc::new(SeriesShape::univariate(var, order));
    let coeffs = pad(coeffs, order as usize + 1, nvars);
    TruncSeries::from_terms(shape, nvars, coeffs.into_iter().enumerate().map(|(k, c)| (vec![k as u32], c)))
}

/// `ς(a·v)` truncated at `v^order`.
pub fn sigma_series<S: Scalar>(arg: &LinearForm<S>, var: &str, order: u32) -> TruncSeries<S> {
    assert!(order >= 1);
    univariate_series(var, order, arg.nvars(), sigma_coeffs(&arg.to_poly(), order))
}

/// `𝒮(v)^c` truncated at `v^order`.
pub fn s_power_series<S: Scalar>(exponent: &MultiPoly<S>, var: &str, order: u32) -> TruncSeries<S> {
    univariate_series(var, order, exponent.nvars(), s_power_coeffs(exponent, order))
}

/// `ς(a·v)/ς(v)` truncated at `v^order`.
pub fn sigma_ratio_series<S: Scalar>(a: &LinearForm<S>, var: &str, order: u32) -> TruncSeries<S> {
    univariate_series(var, order, a.nvars(), sigma_ratio_coeffs(&a.to_poly(), order))
}

/// `x (x+1) ⋯ (x+k−1)`.
pub fn rising_factorial<S: Scalar>(x: &MultiPoly<S>, k: u32) -> MultiPoly<S> {
    let n = x.nvars();
    (0..k).fold(MultiPoly::one(n), |acc, i| &acc * &(x + &MultiPoly::constant(n, S::from_i64(i as i64))))
}

/// `x (x−1) ⋯ (x−k+1)`.
pub fn falling_factorial<S: Scalar>(x: &MultiPoly<S>, k: u32) -> MultiPoly<S> {
    let n = x.nvars();
    (0..k).fold(MultiPoly::one(n), |acc, i| &acc * &(x - &MultiPoly::constant(n, S::from_i64(i as i64))))
}

/// Coefficients of `(e^t − 1)/t = Σ t^j/(j+1)!`.
fn expm1_over_t<S: Scalar>(order: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(order + 1);
    let mut f = S::one();
    for j in 0..=order {
        f = f * S::from_i64(j as i64 + 1);
        out.push(S::one() / f.clone());
    }
    out
}

/// Bernoulli number `B_k` with `B_1 = −1/2`, read off `t/(e^t − 1)`.
pub fn bernoulli<S: Scalar>(k: u32) -> S {
    let recip = uni_recip_scalar(&expm1_over_t::<S>(k as usize), k as usize);
    let mut fact = S::one();
    for i in 1..=k {
        fact = fact * S::from_i64(i as i64);
    }
    recip[k as usize].clone() * fact
}

/// Generalised Bernoulli polynomial `B_k^{(n)}(x)`, defined by
/// `(t/(e^t − 1))^n e^{x t} = Σ B_k^{(n)}(x) t^k / k!`.
pub fn gen_bernoulli<S: Scalar>(k: u32, n: &MultiPoly<S>, x: &MultiPoly<S>) -> MultiPoly<S> {
    assert_eq!(n.nvars(), x.nvars());
    let nvars = n.nvars();
    let order = k as usize;
    let log_f = uni_log_scalar(&expm1_over_t::<S>(order), order);
    // log of (t/(e^t−1))^n e^{xt} = −n·log((e^t−1)/t) + x t
    let mut exponent: Vec<MultiPoly<S>> = log_f.iter().map(|l| n.scale(&-l.clone())).collect();
    if order >= 1 {
        exponent[1] = &exponent[1] + x;
    }
    let series = uni_exp(&exponent, order, nvars);
    let mut fact = S::one();
    for i in 1..=k {
        fact = fact * S::from_i64(i as i64);
    }
    series[order].scale(&fact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;
    use num_rational::BigRational;

    type Q = BigRational;
    type P = MultiPoly<Q>;

    fn c(q: Q) -> P {
        P::constant(0, q)
    }

    #[test]
    fn sigma_series_of_unit_argument() {
        let s = sigma_series(&LinearForm::<Q>::constant(0, rat(1, 1)), "v", 5);
        assert_eq!(s.coeff(&[1]), c(rat(1, 1)));
        assert_eq!(s.coeff(&[3]), c(rat(1, 24)));
        assert_eq!(s.coeff(&[5]), c(rat(1, 1920)));
        assert!(s.coeff(&[2]).is_zero() && s.coeff(&[4]).is_zero());
        assert!(sigma_series(&LinearForm::<Q>::zero(0), "v", 5).is_zero());
    }

    #[test]
    fn sigma_series_symbolic() {
        let mu = LinearForm::<Q>::var(1, 0);
        let s = sigma_series(&mu, "v", 3);
        let m = P::var(1, 0);
        assert_eq!(s.coeff(&[1]), m);
        assert_eq!(s.coeff(&[3]), m.pow(3).scale(&rat(1, 24)));
    }

    #[test]
    fn s_powers() {
        let one = s_power_series(&c(rat(1, 1)), "v", 4);
        assert_eq!(one.coeff(&[0]), c(rat(1, 1)));
        assert_eq!(one.coeff(&[2]), c(rat(1, 24)));
        assert_eq!(one.coeff(&[4]), c(rat(1, 1920)));
        let zero = s_power_series(&c(rat(0, 1)), "v", 4);
        assert_eq!(zero.terms().len(), 1);
        let m2 = s_power_series(&c(rat(-2, 1)), "v", 2);
        assert_eq!(m2.coeff(&[2]), c(rat(-1, 12)));
    }

    #[test]
    fn s_power_coefficients_have_degree_t() {
        let cvar = P::var(1, 0);
        let s = s_power_coeffs(&cvar, 8);
        for t in 0..=4u32 {
            assert_eq!(s[2 * t as usize].degree(), Some(t));
            if t < 4 {
                assert!(s[2 * t as usize + 1].is_zero());
            }
        }
    }

    #[test]
    fn sigma_ratio() {
        let one = sigma_ratio_series(&LinearForm::<Q>::constant(0, rat(1, 1)), "v", 6);
        assert_eq!(one.terms().len(), 1);
        assert_eq!(one.coeff(&[0]), c(rat(1, 1)));
        let d = LinearForm::<Q>::var(1, 0);
        let r = sigma_ratio_series(&d, "v", 2);
        let dp = P::var(1, 0);
        assert_eq!(r.coeff(&[0]), dp);
        let expected = (&(&dp * &dp) - &P::one(1)).scale(&rat(1, 24));
        assert_eq!(r.coeff(&[2]), &dp * &expected);
        assert!(sigma_ratio_series(&LinearForm::<Q>::zero(0), "v", 4).is_zero());
    }

    #[test]
    fn factorials() {
        let nu = P::var(1, 0);
        let r3 = rising_factorial(&nu, 3);
        let expected = &(&nu * &(&nu + &P::one(1))) * &(&nu + &P::constant(1, rat(2, 1)));
        assert_eq!(r3, expected);
        assert_eq!(rising_factorial(&nu, 0), P::one(1));
        assert_eq!(falling_factorial(&nu, 2), &(&nu * &nu) - &nu);
        assert!(falling_factorial(&nu, 4).exact_divide(&nu).is_ok());
    }

    #[test]
    fn bernoulli_numbers() {
        assert_eq!(bernoulli::<Q>(0), rat(1, 1));
        assert_eq!(bernoulli::<Q>(1), rat(-1, 2));
        assert_eq!(bernoulli::<Q>(2), rat(1, 6));
        assert_eq!(bernoulli::<Q>(3), rat(0, 1));
        assert_eq!(bernoulli::<Q>(4), rat(-1, 30));
        assert_eq!(bernoulli::<Q>(12), rat(-691, 2730));
    }

    #[test]
    fn generalised_bernoulli() {
        let n = P::var(2, 0);
        let x = P::var(2, 1);
        assert_eq!(gen_bernoulli(0, &n, &x), P::one(2));
        assert_eq!(gen_bernoulli(1, &n, &x), &x - &n.scale(&rat(1, 2)));
        for k in 0..=12 {
            assert_eq!(gen_bernoulli(k, &c(rat(1, 1)), &c(rat(0, 1))).constant_term(), bernoulli::<Q>(k));
        }
    }

    #[test]
    fn norlund_order_two_identity() {
        for k in 0..=8u32 {
            let lhs = gen_bernoulli(k, &c(rat(2, 1)), &c(rat(0, 1))).constant_term();
            let km1 = if k == 0 { rat(0, 1) } else { bernoulli::<Q>(k - 1) };
            let rhs = rat(1 - k as i64, 1) * bernoulli::<Q>(k) - rat(k as i64, 1) * km1;
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }
}
