use std::sync::Arc;

use hurwitz::algebra::{
    bernoulli, gen_bernoulli, rat, rat_int, s_power_series, sigma_ratio_series, sigma_series, MultiPoly, SeriesShape,
    TruncSeries,
};
use hurwitz::cli::json::{parse, poly_from_terms, poly_terms, rational};
use hurwitz::partitions::{character, partitions_of, Composition};
use hurwitz::wallcross::{wallcrossing_polynomial, WallCrossingProblem};
use hurwitz::wedge::{chamber_of, chamber_polynomial, chamber_polynomial_with_slack, degree_bound, on_some_wall, Wall};
use hurwitz::{genus_of, Linear, Poly, Rational, Series};
use proptest::prelude::*;

fn shape() -> Arc<SeriesShape> {
    Arc::new(SeriesShape::new(vec!["x".into(), "y".into()], vec![3, 2]))
}

/// Series in `x, y` whose coefficients are polynomials in one indeterminate.
fn series() -> impl Strategy<Value = Series> {
    prop::collection::vec(((0u32..=3, 0u32..=2), 0u32..=2, -4i64..=4), 0..8).prop_map(|terms| {
        let s = shape();
        TruncSeries::from_terms(
            s,
            1,
            terms.into_iter().map(|((ex, ey), k, c)| (vec![ex, ey], Poly::from_terms(1, [(vec![k], rat(c, 1))]))),
        )
    })
}

fn poly3() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..=3, 3), -20i64..=20, 1i64..=6), 0..6)
        .prop_map(|terms| Poly::from_terms(3, terms.into_iter().map(|(e, n, d)| (e, rat(n, d)))))
}

/// An off-wall point `(μ, ν)` with the given lengths, found by bumping the last part.
fn off_wall(mut mu: Vec<u32>, mut nu: Vec<u32>) -> Option<(Vec<u32>, Vec<u32>)> {
    let (sm, sn): (u32, u32) = (mu.iter().sum(), nu.iter().sum());
    if sm < sn {
        *mu.last_mut().unwrap() += sn - sm;
    } else {
        *nu.last_mut().unwrap() += sm - sn;
    }
    (!on_some_wall(&mu, &nu)).then_some((mu, nu))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn s_power_inverse(c in -12i64..=12) {
        let e = Poly::constant(1, rat(c, 1));
        let prod = &s_power_series(&e, "v", 9) * &s_power_series(&-&e, "v", 9);
        prop_assert_eq!(prod, TruncSeries::one(Arc::new(SeriesShape::univariate("v", 9)), 1));
    }

    #[test]
    fn sigma_ratio_times_sigma(n in -9i64..=9, d in 1i64..=5) {
        let a = Linear::constant(1, rat(n, d));
        let one = Linear::constant(1, rat(1, 1));
        let lhs = &sigma_ratio_series(&a, "v", 9) * &sigma_series(&one, "v", 9);
        prop_assert_eq!(lhs, sigma_series(&a, "v", 9));
    }

    #[test]
    fn character_reorder_invariance(parts in prop::collection::vec(1u32..=3, 1..5), rot in 0usize..4) {
        let d: u32 = parts.iter().sum();
        let mut other = parts.clone();
        let k = rot % other.len();
        other.rotate_left(k);
        other.reverse();
        let a = Composition::new(parts).unwrap();
        let b = Composition::new(other).unwrap();
        for lambda in partitions_of(d) {
            prop_assert_eq!(character(&lambda, &a).unwrap(), character(&lambda, &b).unwrap());
        }
    }

    #[test]
    fn json_round_trip(p in poly3(), n in -1000i64..=1000, d in 1i64..=1000) {
        let names: Vec<String> = ["mu1", "nu1", "nu2"].iter().map(|s| s.to_string()).collect();
        let terms = poly_terms(&p, &names);
        let text = serde_json::to_string(&terms).unwrap();
        let back: Vec<hurwitz::cli::json::Term> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(poly_from_terms(&back, &names).unwrap(), p);
        let q = rat(n, d);
        prop_assert_eq!(parse(&rational(&q)).unwrap(), q);
    }

    #[test]
    fn same_signs_same_polynomial(
        mu in prop::collection::vec(1u32..=6, 2),
        nu in prop::collection::vec(1u32..=6, 2),
        mu2 in prop::collection::vec(1u32..=9, 2),
        nu2 in prop::collection::vec(1u32..=9, 2),
    ) {
        let (Some((mu, nu)), Some((mu2, nu2))) = (off_wall(mu, nu), off_wall(mu2, nu2)) else {
            return Ok(());
        };
        let c1 = chamber_of(&mu, &nu).unwrap();
        let c2 = chamber_of(&mu2, &nu2).unwrap();
        prop_assume!(c1.key() == c2.key());
        for split in [(0, 2, 0), (0, 0, 2), (1, 1, 0)] {
            prop_assert_eq!(chamber_polynomial(split, &c1).unwrap(), chamber_polynomial(split, &c2).unwrap());
        }
    }
}

#[test]
fn generalised_bernoulli_at_one() {
    let one = MultiPoly::<Rational>::one(0);
    let zero = MultiPoly::<Rational>::zero(0);
    for k in 0..=12 {
        assert_eq!(gen_bernoulli(k, &one, &zero).constant_term(), bernoulli::<Rational>(k), "k={k}");
    }
}

#[test]
fn symbolic_s_power_inverse() {
    let c = Poly::var(1, 0);
    let prod = &s_power_series(&c, "v", 8) * &s_power_series(&-&c, "v", 8);
    assert_eq!(prod, TruncSeries::one(Arc::new(SeriesShape::univariate("v", 8)), 1));
}

#[test]
fn parity_of_basic_series() {
    let a = Linear::var(1, 0);
    for e in sigma_series(&a, "v", 11).terms().keys() {
        assert_eq!(e[0] % 2, 1);
    }
    for e in s_power_series(&Poly::var(1, 0), "v", 10).terms().keys() {
        assert_eq!(e[0] % 2, 0);
    }
}

#[test]
fn regeneration_with_higher_truncation() {
    for (mu, nu) in [(&[3u32][..], &[1u32, 2][..]), (&[3, 1], &[2, 2]), (&[1, 4], &[2, 3])] {
        let c = chamber_of(mu, nu).unwrap();
        for b in [2u32, 4] {
            let Some(_) = genus_of(b, mu.len(), nu.len()) else { continue };
            for split in [(0, b, 0), (0, 0, b), (1, b - 1, 0), (1, 0, b - 1)] {
                let p = chamber_polynomial(split, &c).unwrap();
                assert_eq!(chamber_polynomial_with_slack(split, &c, 2).unwrap(), p, "{mu:?}:{nu:?} {split:?}");
            }
        }
    }
}

#[test]
fn crossing_back_negates() {
    let wall = Wall { i_mask: 1, j_mask: 1 };
    for split in [(0, 2, 0), (0, 0, 4), (1, 1, 0)] {
        let forward = WallCrossingProblem::new(split, wall, (&[3, 1], &[2, 2]), 16).unwrap();
        let back = forward.reversed();
        let wc = wallcrossing_polynomial(&forward).unwrap();
        assert_eq!(wallcrossing_polynomial(&back).unwrap(), -wc.clone());
        let g = genus_of(split.0 + split.1 + split.2, 2, 2).unwrap();
        assert!(wc.degree().is_none_or(|d| d as i64 <= degree_bound(g, 2, 2)));
    }
}

#[test]
fn wall_crossing_number_matches_difference() {
    let wall = Wall { i_mask: 1, j_mask: 1 };
    let problem = WallCrossingProblem::new((0, 2, 0), wall, (&[3, 1], &[2, 2]), 16).unwrap();
    let wc = wallcrossing_polynomial(&problem).unwrap();
    let u = problem.universe();
    for (mu, nu) in [([3u32, 1u32], [2u32, 2u32]), ([5, 1], [3, 3]), ([4, 2], [3, 3])] {
        let point: Vec<Rational> = mu.iter().chain(&nu).map(|&x| rat_int(x)).collect();
        let report = hurwitz::wallcross::verify_wallcrossing(&problem, &[(mu.to_vec(), nu.to_vec())]).unwrap();
        assert!(report.passed());
        assert_eq!(report.samples[0].number.0, wc.evaluate(&point), "{mu:?}:{nu:?} in {u:?}");
        assert_eq!(report.samples[0].number.1, wc.evaluate(&point));
    }
}
