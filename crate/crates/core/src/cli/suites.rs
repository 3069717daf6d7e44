//! Verification suites comparing independent routes, each instance recorded.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{bernoulli, factorial, rat_int, s_power_coeffs};
use crate::charactereval::{hurwitz_connected_simple, hurwitz_disconnected, label_factor, tau_coefficient};
use crate::oracle::{
    sweep_specs, tau_coefficient_expanded, Convention, FactorizationSpec, Oracle, OracleError, DEFAULT_DEGREE_BOUND,
};
use crate::partitions::{compositions_of, Composition, PartitionError};
use crate::wallcross::{samples_in, verify_wallcrossing, WallCrossError, WallCrossingProblem};
use crate::wedge::{chamber_of, degree_bound, evaluate, tuples_of, Chamber, PolynomialCache, Wall, WedgeError};
use crate::{branch_points, HurwitzType, Poly, Rational};

use super::json::rational;

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
    #[error(transparent)]
    WallCross(#[from] WallCrossError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub count: usize,
    pub instances: Vec<Instance>,
}

impl SuiteReport {
    fn new(suite: &str, instances: Vec<Instance>) -> Self {
        let passed = !instances.is_empty() && instances.iter().all(|i| i.ok);
        SuiteReport { suite: suite.to_string(), passed, count: instances.len(), instances }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.ok)
    }

    /// Merge several reports under one name.
    pub fn combine(suite: &str, parts: Vec<SuiteReport>) -> Self {
        Self::new(suite, parts.into_iter().flat_map(|r| r.instances).collect())
    }
}

fn instance(label: String, expected: &Rational, actual: &Rational) -> Instance {
    Instance { label, expected: rational(expected), actual: rational(actual), ok: expected == actual }
}

fn check_bound(d_max: u32) -> Result<(), SuiteError> {
    if d_max > DEFAULT_DEGREE_BOUND {
        return Err(OracleError::BoundExceeded(d_max, DEFAULT_DEGREE_BOUND).into());
    }
    Ok(())
}

/// Oracle, character sum and (off walls) chamber polynomial agree.
pub fn equality(d_max: u32, b_max: u32) -> Result<SuiteReport, SuiteError> {
    check_bound(d_max)?;
    let mut oracle = Oracle::new();
    let mut cache = PolynomialCache::new();
    let mut out = Vec::new();
    for spec in sweep_specs(d_max, b_max, &[HurwitzType::Mixed], false) {
        let (p, q, r) = (spec.p, spec.q, spec.r);
        let o = oracle.count(&spec, Convention::Smaller)?;
        let c = hurwitz_disconnected(&spec.mu, &spec.nu, p, q, r)?;
        let g = spec.genus().expect("swept specs have a genus");
        let degenerate = g == 0 && spec.mu.len() + spec.nu.len() == 2;
        let chamber = match chamber_of(spec.mu.parts(), spec.nu.parts()) {
            Ok(ch) if !degenerate => {
                let poly = cache.get((p, q, r), &ch)?;
                Some(evaluate(&poly, ch.universe(), &spec.mu, &spec.nu)?)
            }
            _ => None,
        };
        let ok = o == c && chamber.as_ref().is_none_or(|v| *v == o);
        out.push(Instance {
            label: format!("{} {} ({p},{q},{r})", spec.mu, spec.nu),
            expected: rational(&o),
            actual: format!(
                "character={} chamber={}",
                rational(&c),
                chamber.as_ref().map(rational).unwrap_or_else(|| "n/a".to_string())
            ),
            ok,
        });
    }
    Ok(SuiteReport::new("equality", out))
}

/// Distinct chambers met by lattice points with `|μ| ≤ max_size`.
pub fn lattice_chambers(m: usize, n: usize, max_size: u32) -> Vec<Chamber> {
    let mut seen = BTreeMap::new();
    for d in 1..=max_size {
        for mu in tuples_of(d, m) {
            for nu in tuples_of(d, n) {
                if let Ok(c) = chamber_of(&mu, &nu) {
                    seen.entry(c.key()).or_insert(c);
                }
            }
        }
    }
    seen.into_values().collect()
}

/// Every chamber polynomial for the given `(g, m, n)` and every split of `b`
/// has total degree at most `4g − 3 + m + n`.
pub fn degree(cases: &[(u32, usize, usize)], max_size: u32) -> Result<SuiteReport, SuiteError> {
    let mut out = Vec::new();
    for &(g, m, n) in cases {
        let b = branch_points(g, m, n).ok_or(WedgeError::DegenerateSignature)?;
        let bound = degree_bound(g, m, n);
        for chamber in lattice_chambers(m, n, max_size) {
            let (mu, nu) = chamber.sample();
            for split in crate::oracle::splits(HurwitzType::Mixed, b) {
                let poly = crate::wedge::chamber_polynomial(split, &chamber)?;
                let deg = poly.degree().map(|d| d as i64).unwrap_or(-1);
                out.push(Instance {
                    label: format!("g={g} m={m} n={n} chamber {mu:?}:{nu:?} {split:?}"),
                    expected: format!("<= {bound}"),
                    actual: deg.to_string(),
                    ok: deg <= bound,
                });
            }
        }
    }
    Ok(SuiteReport::new("degree", out))
}

/// `−n (2g−3+m+n)! (2g−3) B_{2g−2} / (2g−2)!` for `g ≥ 1`, and 0 for `g = 0`.
pub fn constant_term_formula(g: u32, m: usize, n: usize) -> Rational {
    if g == 0 {
        return Rational::zero();
    }
    let k = 2 * g - 2;
    let top = (2 * g + m as u32 + n as u32) - 3;
    -rat_int(factorial(top)) * rat_int(n as i64) * rat_int(2 * g as i64 - 3) * bernoulli::<Rational>(k)
        / rat_int(factorial(k))
}

/// Constant term of the monotone chamber polynomial against the closed formula.
pub fn constant_term(gs: &[u32], shapes: &[(usize, usize)]) -> Result<SuiteReport, SuiteError> {
    let mut out = Vec::new();
    for &g in gs {
        for &(m, n) in shapes {
            if g == 0 && m + n == 2 {
                continue;
            }
            let b = branch_points(g, m, n).ok_or(WedgeError::DegenerateSignature)?;
            for chamber in lattice_chambers(m, n, 6) {
                let poly = crate::wedge::chamber_polynomial((0, b, 0), &chamber)?;
                let (mu, nu) = chamber.sample();
                out.push(instance(
                    format!("g={g} m={m} n={n} chamber {mu:?}:{nu:?}"),
                    &constant_term_formula(g, m, n),
                    &poly.constant_term(),
                ));
            }
        }
    }
    Ok(SuiteReport::new("constant-term", out))
}

/// `[z^{2g−2}] 𝒮(z)^{ν−2}` at `ν = 0` against `−(2g−3) B_{2g−2} / (2g−2)!`.
pub fn bernoulli_identity(gs: &[u32]) -> SuiteReport {
    let mut out = Vec::new();
    for &g in gs {
        let k = 2 * g - 2;
        let exponent = &Poly::var(1, 0) - &Poly::constant(1, rat_int(2));
        let coeffs = s_power_coeffs(&exponent, k);
        let actual = coeffs[k as usize].evaluate(&[Rational::zero()]);
        let expected = -rat_int(2 * g as i64 - 3) * bernoulli::<Rational>(k) / rat_int(factorial(k));
        out.push(instance(format!("g={g}"), &expected, &actual));
    }
    SuiteReport::new("bernoulli", out)
}

/// Product formula across the wall `μ_1 = ν_1` for `m = n = 2`.
pub fn wallcross(splits: &[(u32, u32, u32)], samples: usize) -> Result<SuiteReport, SuiteError> {
    let wall = Wall { i_mask: 1, j_mask: 1 };
    let mut out = Vec::new();
    for &split in splits {
        let problem = WallCrossingProblem::new(split, wall, (&[3, 1], &[2, 2]), 16)?;
        let points = samples_in(&problem.c2, samples, 24);
        let report = verify_wallcrossing(&problem, &points)?;
        let found = report.samples.len();
        for s in report.samples {
            let ok = s.passed();
            out.push(Instance {
                label: format!("{split:?} sample {:?}:{:?} delta={}", s.mu, s.nu, s.delta),
                expected: format!("series identity, WC number {}", rational(&s.number.1)),
                actual: match &s.mismatch {
                    None => format!("{} coefficients equal, WC number {}", s.coefficients, rational(&s.number.0)),
                    Some(mm) => format!("{}: {} vs {}", mm.monomial, rational(&mm.lhs), rational(&mm.rhs)),
                },
                ok,
            });
        }
        if found < samples {
            out.push(Instance {
                label: format!("{split:?} samples"),
                expected: format!(">= {samples}"),
                actual: found.to_string(),
                ok: false,
            });
        }
    }
    Ok(SuiteReport::new("wallcross", out))
}

/// Pure wall-crossing splits for `m = n = 2` in genus `g`.
pub fn wallcross_pure_splits(gs: &[u32]) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for &g in gs {
        let b = branch_points(g, 2, 2).expect("m = n = 2");
        out.push((0, b, 0));
        out.push((0, 0, b));
    }
    out
}

/// Tau coefficients against the Jacobi–Trudi expansion and the Hurwitz dictionary.
pub fn tau(n_max: u32, e_max: u32) -> Result<SuiteReport, SuiteError> {
    check_bound(n_max)?;
    let mut oracle = Oracle::new();
    let mut out = Vec::new();
    for n in 1..=n_max {
        let comps = compositions_of(n);
        for mu in &comps {
            for nu in &comps {
                for c in 0..=e_max {
                    for d in 0..=e_max {
                        let a = tau_coefficient(n, mu, nu, &[c], &[d])?;
                        let b = tau_coefficient_expanded(n, mu, nu, c, d)?;
                        out.push(instance(format!("n={n} {mu} {nu} w^{c} z^{d}"), &b, &a));
                    }
                }
                let labels = rat_int(label_factor(mu, nu));
                for e in 1..=e_max {
                    for (kind, split) in [("strict", (0, 0, e)), ("monotone", (0, e, 0))] {
                        let (c, d) = (split.2, split.1);
                        let t = tau_coefficient(n, mu, nu, &[c], &[d])? * &labels;
                        let spec = FactorizationSpec::new(mu.clone(), nu.clone(), split.0, split.1, split.2, false);
                        let h = oracle.count_any_genus(&spec, Convention::Smaller)?;
                        out.push(instance(format!("n={n} {mu} {nu} {kind} b={e} dictionary"), &h, &t));
                    }
                }
            }
        }
    }
    Ok(SuiteReport::new("tau", out))
}

/// Monotone and strict counts read on the smaller or the larger element of each transposition.
pub fn conventions(d_max: u32, b_max: u32, kinds: &[HurwitzType]) -> Result<SuiteReport, SuiteError> {
    check_bound(d_max)?;
    let mut oracle = Oracle::new();
    let mut out = Vec::new();
    for spec in sweep_specs(d_max, b_max, kinds, false) {
        let s = oracle.count(&spec, Convention::Smaller)?;
        let l = oracle.count(&spec, Convention::Larger)?;
        out.push(instance(format!("{} {} ({},{},{})", spec.mu, spec.nu, spec.p, spec.q, spec.r), &s, &l));
    }
    Ok(SuiteReport::new("conventions", out))
}

/// `h_{0;(d),(d)} = 1/d` by the oracle and by characters, for the three pure types.
pub fn one_part(d_max: u32) -> Result<SuiteReport, SuiteError> {
    check_bound(d_max)?;
    let mut out = Vec::new();
    for d in 1..=d_max {
        let c = Composition::new(vec![d])?;
        let expected = Rational::new(1.into(), d.into());
        for kind in [HurwitzType::Simple, HurwitzType::Monotone, HurwitzType::Strict] {
            let (p, q, r) = kind.pure_split(0).unwrap();
            let spec = FactorizationSpec::new(c.clone(), c.clone(), p, q, r, false);
            let o = crate::oracle::count_factorizations(&spec)?;
            let ch = hurwitz_disconnected(&c, &c, p, q, r)?;
            out.push(instance(format!("{kind:?} d={d} oracle"), &expected, &o));
            out.push(instance(format!("{kind:?} d={d} character"), &expected, &ch));
        }
    }
    Ok(SuiteReport::new("one-part", out))
}

/// Transitive counts against the connected character formula (simple type),
/// and connected against disconnected counts off every wall (all types).
pub fn connected(d_max: u32, b_max: u32) -> Result<SuiteReport, SuiteError> {
    check_bound(d_max)?;
    let mut oracle = Oracle::new();
    let mut out = Vec::new();
    for spec in sweep_specs(d_max, b_max, &[HurwitzType::Simple], true) {
        let o = oracle.count(&spec, Convention::Smaller)?;
        let g = spec.genus().unwrap();
        let c = hurwitz_connected_simple(&spec.mu, &spec.nu, g)?;
        out.push(instance(format!("connected simple {} {} g={g}", spec.mu, spec.nu), &o, &c));
    }
    for spec in sweep_specs(d_max, b_max, &[HurwitzType::Mixed], true) {
        if chamber_of(spec.mu.parts(), spec.nu.parts()).is_err() {
            continue;
        }
        let conn = oracle.count(&spec, Convention::Smaller)?;
        let disc = oracle.count(&FactorizationSpec { connected: false, ..spec.clone() }, Convention::Smaller)?;
        out.push(instance(
            format!("off walls {} {} ({},{},{})", spec.mu, spec.nu, spec.p, spec.q, spec.r),
            &disc,
            &conn,
        ));
    }
    Ok(SuiteReport::new("connected", out))
}
