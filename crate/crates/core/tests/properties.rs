use axcount::axcore::{enumerate_index_sets, IndexSetFamily};
use axcount::rmcode::{binomial, census_brute, rm_dim, RMParams};
use axcount::{monomials, nu_p, parse_poly, Budget, Elem, FieldSpec, MultiPoly};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gf(p: u64, m: u32) -> FieldSpec {
    FieldSpec::new(p, m, None).unwrap()
}

fn small_field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![
        (2u64, 1u32),
        (2, 2),
        (2, 3),
        (3, 1),
        (3, 2),
        (5, 1),
        (5, 2),
        (7, 1),
    ])
    .prop_map(|(p, m)| gf(p, m))
}

fn field_and_elems(k: usize) -> impl Strategy<Value = (FieldSpec, Vec<Elem>)> {
    small_field().prop_flat_map(move |f| {
        let q = f.q();
        (Just(f), prop::collection::vec((0..q).prop_map(Elem), k))
    })
}

/// (p, m, n, d) with a cheap index-set enumeration.
fn family_params() -> impl Strategy<Value = (u32, u32, usize, u32)> {
    prop::sample::select(vec![
        (2u32, 1u32, 3usize, 2u32),
        (2, 1, 4, 2),
        (2, 1, 5, 2),
        (2, 1, 5, 3),
        (2, 2, 3, 2),
        (2, 2, 4, 2),
        (2, 3, 3, 2),
        (3, 1, 2, 2),
        (3, 1, 3, 2),
        (3, 1, 3, 4),
        (3, 2, 2, 2),
        (5, 1, 2, 2),
        (5, 1, 3, 4),
        (7, 1, 2, 3),
    ])
}

fn family(p: u32, m: u32, n: usize, d: u32) -> IndexSetFamily {
    enumerate_index_sets(p, m, n, d, &Budget::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_axioms((f, v) in field_and_elems(3)) {
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.mul(a, b), f.mul_poly(a, b));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            prop_assert_eq!(f.pow(a, f.q() as u64 - 1), Elem::ONE);
        }
        prop_assert_eq!(f.parse_element(&f.render(a)).unwrap(), a);
    }

    #[test]
    fn display_parse_round_trip(
        (f, coeffs) in small_field().prop_flat_map(|f| {
            let q = f.q();
            (Just(f), prop::collection::vec(0..q, 10))
        }),
    ) {
        let basis = monomials(3, 2, None);
        let terms = basis.into_iter().zip(coeffs.into_iter().map(Elem));
        let poly = MultiPoly::from_terms(&f, 3, 2, terms).unwrap();
        let back = parse_poly(&poly.to_string(), &f, 3, 2).unwrap();
        prop_assert_eq!(back, poly);
    }

    #[test]
    fn scaling_invariance((p, m, n, d) in family_params(), seed in any::<u64>(), c in 1u32..64) {
        let field = FieldSpec::new(p as u64, m, None).unwrap();
        let fam = family(p, m, n, d);
        let params = RMParams::new(&field, d, n).unwrap();
        let f = params.random_codeword(&mut ChaCha8Rng::seed_from_u64(seed));
        let c = Elem(1 + c % (field.q() - 1));
        let e = fam.evaluate_e(&f).unwrap();
        prop_assert!(field.in_prime_subfield(e));
        prop_assert_eq!(fam.evaluate_e(&f.scale(c)).unwrap(), e);
    }

    #[test]
    fn tau_sum_identity((p, m, n, d) in family_params()) {
        let fam = family(p, m, n, d);
        let q1 = fam.q() - 1;
        let target = q1 * fam.c() as u64;
        for i in &fam.set_i {
            prop_assert!(i.tau_sums(p, m).iter().all(|&s| s == target), "{}", i);
            prop_assert!(i.weighted_sum(n).iter().all(|&s| s > 0 && s % q1 == 0), "{}", i);
        }
        for i in &fam.set_i_prime {
            let sums = i.weighted_sum(n);
            prop_assert_eq!(sums.iter().filter(|&&s| s == 0).count(), 1);
            prop_assert!(sums.iter().all(|&s| s % q1 == 0));
        }
    }

    #[test]
    fn valuation_of_products(a in 1u64..1_000_000, b in 1u64..1_000_000, p in prop::sample::select(vec![2u32, 3, 5, 7])) {
        let va = nu_p(a as u128, p);
        let vb = nu_p(b as u128, p);
        let vab = nu_p(a as u128 * b as u128, p);
        match (va, vb, vab) {
            (axcount::Valuation::Finite(x), axcount::Valuation::Finite(y), axcount::Valuation::Finite(z)) => {
                prop_assert_eq!(x + y, z)
            }
            _ => prop_assert!(false, "finite inputs have finite valuation"),
        }
    }
}

#[test]
fn census_monotone_in_t() {
    let budget = Budget::default();
    for (field, d, n) in [
        (gf(2, 1), 2, 3),
        (gf(2, 1), 2, 4),
        (gf(3, 1), 2, 2),
        (gf(2, 2), 2, 2),
        (gf(3, 1), 3, 2),
    ] {
        let params = RMParams::new(&field, d, n).unwrap();
        let counts: Vec<BigUint> = (0..=6)
            .map(|t| census_brute(&params, t, &budget, 1).unwrap().count)
            .collect();
        assert!(counts.windows(2).all(|w| w[0] >= w[1]), "{counts:?}");
        assert_eq!(counts[0], params.size_big());
        let c = (n as u32).div_ceil(d);
        for t in 0..=field.m() * (c - 1) {
            assert_eq!(counts[t as usize], params.size_big(), "Ax floor at t = {t}");
        }
    }
}

#[test]
fn dimension_matches_basis() {
    for q in [2u64, 3, 4, 5, 8, 9] {
        let (p, m) = match q {
            4 => (2, 2),
            8 => (2, 3),
            9 => (3, 2),
            p => (p, 1),
        };
        let field = gf(p, m);
        for n in 1..=5u32 {
            let full = monomials(n as usize, n * (q as u32 - 1), Some(q as u32 - 1));
            for d in 0..=n * (q as u32 - 1) {
                let direct = full.iter().filter(|u| u.degree() <= d).count() as u128;
                assert_eq!(rm_dim(q, d as i64, n).unwrap(), direct, "q={q} d={d} n={n}");
                if d >= 1 && direct < 64 {
                    assert_eq!(
                        RMParams::new(&field, d, n as usize).unwrap().dim() as u128,
                        direct
                    );
                }
            }
        }
    }
    // q = 2 degenerates to sums of binomials
    for n in 1..=8u64 {
        for d in 0..=n {
            let expected: u128 = (0..=d).map(|j| binomial(n, j)).sum();
            assert_eq!(rm_dim(2, d as i64, n as u32).unwrap(), expected);
        }
    }
}
