//! Hurwitz numbers as finite sums over Young diagrams, and coefficients of the
//! hypergeometric tau function.
//!
//! On `v_λ` the operators `e^{X𝓕₂}`, `D^{(h)}(Y)` and `D^{(σ)}(Z)` act by
//! `e^{X f₂(λ)}`, `Σ h_q(cr^λ) Y^q` and `Σ e_r(cr^λ) Z^r`, and
//! `α_{−ν_1}⋯α_{−ν_n}|0⟩ = Σ_λ χ^λ_ν v_λ`. The labelled count is therefore
//!
//! ```text
//! h_{p,q,r;μ,ν} = ∏m_ℓ(μ)! ∏m_ℓ(ν)! / (z_μ z_ν) · Σ_λ χ^λ_μ χ^λ_ν f₂(λ)^p h_q(cr^λ) e_r(cr^λ)
//! ```
//!
//! where the label factor over `z_μ z_ν` equals `1/(∏μ_i ∏ν_j)` (checked against
//! the enumeration oracle).

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{binomial, rat_int, MultiPoly, SeriesShape, TruncSeries};
use crate::partitions::{
    centralizer_size, character, complete_homogeneous_at_contents, contents, elementary_at_contents, f2_eigenvalue,
    partitions_of, Composition, PartitionError,
};
use crate::{genus_of, Rational};

/// Σ_λ χ^λ_μ χ^λ_ν · weight(λ), divided by `z_μ z_ν`.
fn character_sum(
    mu: &Composition,
    nu: &Composition,
    weight: impl Fn(&crate::partitions::YoungPartition) -> Rational,
) -> Result<Rational, PartitionError> {
    let d = mu.size();
    if d != nu.size() {
        return Err(PartitionError::SizeMismatch(d, nu.size()));
    }
    let mut total = Rational::zero();
    for lambda in partitions_of(d) {
        let chi = character(&lambda, mu)? * character(&lambda, nu)?;
        if chi.is_zero() {
            continue;
        }
        total += rat_int(chi) * weight(&lambda);
    }
    Ok(total / rat_int(centralizer_size(mu) * centralizer_size(nu)))
}

/// Disconnected count for any `b`, without the genus condition.
fn disconnected_raw(mu: &Composition, nu: &Composition, p: u32, q: u32, r: u32) -> Result<Rational, PartitionError> {
    let labels = rat_int(mu.label_factor() * nu.label_factor());
    let sum = character_sum(mu, nu, |lambda| {
        let f2 = f2_eigenvalue(lambda);
        let mut w = Rational::one();
        for _ in 0..p {
            w *= &f2;
        }
        w * complete_homogeneous_at_contents(lambda, q) * elementary_at_contents(lambda, r)
    })?;
    Ok(labels * sum)
}

/// Triply mixed Hurwitz number `h_{p,q,r;μ,ν}` (not necessarily connected).
///
/// Returns 0 when `p + q + r = 2g − 2 + m + n` has no solution `g ≥ 0`.
pub fn hurwitz_disconnected(
    mu: &Composition,
    nu: &Composition,
    p: u32,
    q: u32,
    r: u32,
) -> Result<Rational, PartitionError> {
    if mu.size() != nu.size() {
        return Err(PartitionError::SizeMismatch(mu.size(), nu.size()));
    }
    if genus_of(p + q + r, mu.len(), nu.len()).is_none() {
        return Ok(Rational::zero());
    }
    disconnected_raw(mu, nu, p, q, r)
}

/// Connected double simple Hurwitz number of genus `g`.
///
/// Inverts the decomposition of a cover into connected components: each
/// component carries a block of the labelled parts of `μ` and `ν` of equal
/// size, and the `b` ordered branch points are shared out among components.
pub fn hurwitz_connected_simple(mu: &Composition, nu: &Composition, g: u32) -> Result<Rational, PartitionError> {
    if mu.size() != nu.size() {
        return Err(PartitionError::SizeMismatch(mu.size(), nu.size()));
    }
    let b = 2 * g as i64 - 2 + mu.len() as i64 + nu.len() as i64;
    if b < 0 {
        return Ok(Rational::zero());
    }
    let mut solver = ConnectedSolver { mu, nu, memo: HashMap::new() };
    let full_mu = (1u32 << mu.len()) - 1;
    let full_nu = (1u32 << nu.len()) - 1;
    solver.connected(full_mu, full_nu, b as u32)
}

struct ConnectedSolver<'a> {
    mu: &'a Composition,
    nu: &'a Composition,
    memo: HashMap<(u32, u32, u32), Rational>,
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

impl ConnectedSolver<'_> {
    fn sub(&self, mm: u32, nm: u32) -> Option<(Composition, Composition)> {
        Some((self.mu.select(&mask_indices(mm))?, self.nu.select(&mask_indices(nm))?))
    }

    fn disconnected(&self, mm: u32, nm: u32, b: u32) -> Result<Rational, PartitionError> {
        if mm == 0 && nm == 0 {
            return Ok(if b == 0 { Rational::one() } else { Rational::zero() });
        }
        match self.sub(mm, nm) {
            Some((m, n)) if m.size() == n.size() => disconnected_raw(&m, &n, b, 0, 0),
            _ => Ok(Rational::zero()),
        }
    }

    fn connected(&mut self, mm: u32, nm: u32, b: u32) -> Result<Rational, PartitionError> {
        if let Some(v) = self.memo.get(&(mm, nm, b)) {
            return Ok(v.clone());
        }
        let mut value = self.disconnected(mm, nm, b)?;
        let anchor = mm & mm.wrapping_neg();
        // proper blocks containing the lowest μ-label
        let mut bm = mm;
        loop {
            if bm & anchor != 0 {
                let mut bn = nm;
                loop {
                    let proper = bm != mm || bn != nm;
                    if bn != 0 && proper && self.balanced(bm, bn) {
                        for b1 in 0..=b {
                            let c = self.connected(bm, bn, b1)?;
                            if c.is_zero() {
                                continue;
                            }
                            let rest = self.disconnected(mm & !bm, nm & !bn, b - b1)?;
                            value -= rat_int(binomial(b, b1)) * c * rest;
                        }
                    }
                    if bn == 0 {
                        break;
                    }
                    bn = (bn - 1) & nm;
                }
            }
            if bm == 0 {
                break;
            }
            bm = (bm - 1) & mm;
        }
        self.memo.insert((mm, nm, b), value.clone());
        Ok(value)
    }

    fn balanced(&self, mm: u32, nm: u32) -> bool {
        let s = |c: &Composition, m: u32| mask_indices(m).iter().map(|&i| c.parts()[i]).sum::<u32>();
        s(self.mu, mm) == s(self.nu, nm)
    }
}

/// Coefficient of `q^n ∏ w_a^{c_a} ∏ z_b^{d_b} p_μ(t) p_ν(t̃)` in
/// `τ = Σ_n q^n Σ_{λ⊢n} ∏_{boxes} ∏_a (1 + cr·w_a) / ∏_b (1 − cr·z_b) s_λ(t) s_λ(t̃)`.
pub fn tau_coefficient(
    n: u32,
    mu: &Composition,
    nu: &Composition,
    c: &[u32],
    d: &[u32],
) -> Result<Rational, PartitionError> {
    if mu.size() != n {
        return Err(PartitionError::SizeMismatch(n, mu.size()));
    }
    if nu.size() != n {
        return Err(PartitionError::SizeMismatch(n, nu.size()));
    }
    let mut names: Vec<String> = (1..=c.len()).map(|a| format!("w{a}")).collect();
    names.extend((1..=d.len()).map(|b| format!("z{b}")));
    let orders: Vec<u32> = c.iter().chain(d).copied().collect();
    let shape = Arc::new(SeriesShape::new(names, orders.clone()));
    let target: Vec<u32> = orders;
    character_sum(mu, nu, |lambda| {
        let mut acc = TruncSeries::one(shape.clone(), 0);
        for cr in contents(lambda) {
            let crq = MultiPoly::constant(0, rat_int(cr));
            for a in 0..c.len() {
                let one = TruncSeries::one(shape.clone(), 0);
                let factor = &one + &TruncSeries::linear(shape.clone(), 0, &[(a, crq.clone())]);
                acc = &acc * &factor;
            }
            for (b, &db) in d.iter().enumerate() {
                let x = TruncSeries::linear(shape.clone(), 0, &[(c.len() + b, crq.clone())]);
                let ones = vec![MultiPoly::one(0); db as usize + 1];
                acc = &acc * &x.compose_univariate(&ones);
            }
        }
        acc.coeff(&target).constant_term()
    })
}

/// `∏ m_ℓ(μ)! ∏ m_ℓ(ν)!`: converts power-sum coefficients into labelled counts.
pub fn label_factor(mu: &Composition, nu: &Composition) -> BigInt {
    mu.label_factor() * nu.label_factor()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::oracle::{count_factorizations, FactorizationSpec};
    use crate::partitions::compositions_of;

    fn comp(p: &[u32]) -> Composition {
        Composition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(hurwitz_disconnected(&comp(&[2]), &comp(&[1, 1]), 1, 0, 0).unwrap(), rat(1, 1));
        assert_eq!(hurwitz_disconnected(&comp(&[1]), &comp(&[1]), 0, 0, 0).unwrap(), rat(1, 1));
        for d in 1..=6 {
            assert_eq!(hurwitz_disconnected(&comp(&[d]), &comp(&[d]), 0, 0, 0).unwrap(), rat(1, d as i64));
        }
        assert!(hurwitz_disconnected(&comp(&[2]), &comp(&[1]), 0, 0, 0).is_err());
    }

    #[test]
    fn normalization_matches_oracle_up_to_degree_three() {
        for d in 1..=3 {
            for mu in compositions_of(d) {
                for nu in compositions_of(d) {
                    for b in 0..=3u32 {
                        for p in 0..=b {
                            for q in 0..=b - p {
                                let r = b - p - q;
                                let spec = FactorizationSpec::new(mu.clone(), nu.clone(), p, q, r, false);
                                let o = count_factorizations(&spec).unwrap();
                                let c = hurwitz_disconnected(&mu, &nu, p, q, r).unwrap();
                                assert_eq!(o, c, "{mu} {nu} ({p},{q},{r})");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn connected_examples() {
        assert_eq!(hurwitz_connected_simple(&comp(&[2]), &comp(&[1, 1]), 0).unwrap(), rat(1, 1));
        assert_eq!(hurwitz_connected_simple(&comp(&[1, 1]), &comp(&[1, 1]), 0).unwrap(), rat(2, 1));
        assert_eq!(hurwitz_connected_simple(&comp(&[1]), &comp(&[1]), 0).unwrap(), rat(1, 1));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_coefficient(1, &comp(&[1]), &comp(&[1]), &[], &[]).unwrap(), rat(1, 1));
        assert_eq!(tau_coefficient(1, &comp(&[1]), &comp(&[1]), &[0], &[0]).unwrap(), rat(1, 1));
        assert!(tau_coefficient(2, &comp(&[1]), &comp(&[2]), &[], &[]).is_err());
    }
}
