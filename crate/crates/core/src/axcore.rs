//! The next term in the p-adic expansion of |Z(f)|.
//!
//! For f supported on U_d (all exponent vectors of total degree at most d,
//! d >= 2) in n variables over GF(q), q = p^m, write c = ceil(n/d). Then
//!
//! ```text
//! |Z(f)| = q^(c-1) * E(f)   (mod q^(c-1) * p)
//! E(f)   = (-1)^(n + m c) [ -sum_{i in I} prod_u a_u^i(u) / gamma(i(u))
//!                           + (-1)^m sum_{i in I'} prod_u a_u^i(u) / gamma(i(u)) ]
//! ```
//!
//! where I and I' are families of index functions `i: U_d -> [0, q-1]`
//! constrained by the weighted exponent sum `sum_u i(u) u` and by the per
//! digit-plane sums of the base-p digits of `i(u)`. This module enumerates
//! those families and evaluates E(f).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::budget::Budget;
use crate::gf::{Elem, FieldSpec};
use crate::mpoly::{monomials, nu_p, Monomial, MultiPoly, PolyError, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxError {
    #[error("degree bound d = {0} is below 2")]
    DegreeTooSmall(u32),
    #[error("{a} is outside [0, {max}]")]
    DigitRange { a: u64, max: u64 },
    #[error("index-set enumeration needs {needed} plane combinations, budget is {limit}")]
    Budget { needed: u128, limit: u64 },
    #[error("index-set family was built for different parameters than the polynomial")]
    FamilyMismatch,
    #[error("E(f) = {0} does not lie in the prime subfield")]
    NotInPrimeField(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Base-p digits of `a`, least significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitView {
    pub value: u64,
    pub digits: Vec<u32>,
}

pub fn digit_view(a: u64, p: u32, m: u32) -> Result<DigitView, AxError> {
    let q = (p as u64).pow(m);
    if a >= q {
        return Err(AxError::DigitRange { a, max: q - 1 });
    }
    let mut v = a;
    let digits = (0..m)
        .map(|_| {
            let d = (v % p as u64) as u32;
            v /= p as u64;
            d
        })
        .collect();
    Ok(DigitView { value: a, digits })
}

/// s(a): sum of the base-p digits.
pub fn digit_sum(a: u64, p: u32, m: u32) -> Result<u32, AxError> {
    Ok(digit_view(a, p, m)?.digits.iter().sum())
}

/// gamma(a): product of the factorials of the base-p digits.
pub fn gamma(a: u64, p: u32, m: u32) -> Result<BigUint, AxError> {
    let view = digit_view(a, p, m)?;
    Ok(view
        .digits
        .iter()
        .flat_map(|&d| 1..=d)
        .fold(BigUint::from(1u32), |acc, k| acc * k))
}

fn factorial_mod(k: u32, p: u32) -> u64 {
    (1..=k as u64).fold(1u64, |acc, j| acc * j % p as u64)
}

fn inv_mod_prime(a: u64, p: u32) -> u64 {
    let p = p as u64;
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// The inverse of gamma(a) modulo p. Every digit is below p, so each digit
/// factorial is a unit.
pub fn gamma_inverse_mod_p(a: u64, p: u32, m: u32) -> Result<u32, AxError> {
    let view = digit_view(a, p, m)?;
    let g = view
        .digits
        .iter()
        .fold(1u64, |acc, &d| acc * factorial_mod(d, p) % p as u64);
    Ok(inv_mod_prime(g, p) as u32)
}

/// Cyclic digit rotation: the top digit moves to the bottom.
pub fn tau(a: u64, p: u32, m: u32) -> Result<u64, AxError> {
    let view = digit_view(a, p, m)?;
    let mut rotated = Vec::with_capacity(m as usize);
    rotated.push(view.digits[m as usize - 1]);
    rotated.extend_from_slice(&view.digits[..m as usize - 1]);
    Ok(rotated
        .iter()
        .rev()
        .fold(0u64, |acc, &d| acc * p as u64 + d as u64))
}

pub fn ceil_div(a: u32, b: u32) -> u32 {
    a.div_ceil(b)
}

/// A map `i: U_d -> [0, q-1]`; only monomials with `i(u) > 0` are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexFunction {
    support: BTreeMap<Monomial, u32>,
}

impl IndexFunction {
    pub fn new(support: BTreeMap<Monomial, u32>) -> Self {
        let support = support.into_iter().filter(|&(_, v)| v > 0).collect();
        IndexFunction { support }
    }

    pub fn support(&self) -> &BTreeMap<Monomial, u32> {
        &self.support
    }

    pub fn value(&self, u: &Monomial) -> u32 {
        self.support.get(u).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// `sum_u i(u) u`, componentwise.
    pub fn weighted_sum(&self, n: usize) -> Vec<u64> {
        let mut total = vec![0u64; n];
        for (u, &v) in &self.support {
            for (t, &e) in total.iter_mut().zip(u.exps()) {
                *t += v as u64 * e as u64;
            }
        }
        total
    }

    /// `sum_u i(u)^(j)` for each digit plane j.
    pub fn plane_sums(&self, p: u32, m: u32) -> Vec<u32> {
        let mut sums = vec![0u32; m as usize];
        for &v in self.support.values() {
            let view = digit_view(v as u64, p, m).expect("index values lie in [0, q-1]");
            for (s, d) in sums.iter_mut().zip(view.digits) {
                *s += d;
            }
        }
        sums
    }

    /// `sum_u tau^h(i(u))` for h = 0..m.
    pub fn tau_sums(&self, p: u32, m: u32) -> Vec<u64> {
        (0..m)
            .map(|h| {
                self.support
                    .values()
                    .map(|&v| (0..h).fold(v as u64, |a, _| tau(a, p, m).expect("in range")))
                    .sum()
            })
            .collect()
    }
}

impl fmt::Display for IndexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support.iter().map(|(u, v)| format!("{u}: {v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for IndexFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.support.len()))?;
        for (u, v) in &self.support {
            map.serialize_entry(&u.to_string(), v)?;
        }
        map.end()
    }
}

/// The families I and I' for fixed (p, m, n, d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSetFamily {
    pub p: u32,
    pub m: u32,
    pub n: usize,
    pub d: u32,
    pub set_i: Vec<IndexFunction>,
    pub set_i_prime: Vec<IndexFunction>,
}

impl IndexSetFamily {
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.m)
    }

    /// ceil(n/d)
    pub fn c(&self) -> u32 {
        ceil_div(self.n as u32, self.d)
    }

    pub fn matches(&self, f: &MultiPoly) -> bool {
        let field = f.field();
        field.p() == self.p && field.m() == self.m && f.n() == self.n && f.d() == self.d
    }

    /// E(f), using this family.
    pub fn evaluate_e(&self, f: &MultiPoly) -> Result<Elem, AxError> {
        if !self.matches(f) {
            return Err(AxError::FamilyMismatch);
        }
        let field = f.field();
        let sum_over = |set: &[IndexFunction]| {
            set.iter().fold(Elem::ZERO, |acc, i| {
                let mut prod = Elem::ONE;
                for (u, &v) in i.support() {
                    let a = f.coefficient(u);
                    if a.is_zero() {
                        return acc;
                    }
                    let ginv = gamma_inverse_mod_p(v as u64, self.p, self.m).expect("in range");
                    prod = field.mul(prod, field.mul(field.pow(a, v as u64), Elem(ginv)));
                }
                field.add(acc, prod)
            })
        };
        let s_i = sum_over(&self.set_i);
        let s_ip = sum_over(&self.set_i_prime);
        let sign = |k: u64| {
            if k.is_multiple_of(2) {
                Elem::ONE
            } else {
                field.from_int(-1)
            }
        };
        let inner = field.add(field.neg(s_i), field.mul(sign(self.m as u64), s_ip));
        let outer = sign(self.n as u64 + self.m as u64 * self.c() as u64);
        let e = field.mul(outer, inner);
        if !field.in_prime_subfield(e) {
            return Err(AxError::NotInPrimeField(field.render(e)));
        }
        Ok(e)
    }
}

/// One digit plane: a sparse assignment `delta: U_d -> [0, p)`.
struct PlaneAssignment {
    digits: Vec<(usize, u32)>,
    // sum_u delta(u) u
    weight: Vec<u64>,
}

fn count_plane_assignments(slots: usize, total: u32, max_digit: u32) -> u128 {
    // coefficient of x^total in (1 + x + ... + x^max_digit)^slots
    let mut ways = vec![0u128; total as usize + 1];
    ways[0] = 1;
    for _ in 0..slots {
        let mut next = vec![0u128; total as usize + 1];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for dgt in 0..=max_digit as usize {
                if s + dgt > total as usize {
                    break;
                }
                next[s + dgt] = next[s + dgt].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[total as usize]
}

fn plane_assignments(universe: &[Monomial], total: u32, max_digit: u32) -> Vec<PlaneAssignment> {
    fn rec(
        pos: usize,
        rest: u32,
        max_digit: u32,
        universe: &[Monomial],
        cur: &mut Vec<(usize, u32)>,
        out: &mut Vec<Vec<(usize, u32)>>,
    ) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if pos == universe.len() {
            return;
        }
        // remaining slots can absorb at most max_digit each
        if (universe.len() - pos) as u64 * (max_digit as u64) < rest as u64 {
            return;
        }
        for dgt in (1..=rest.min(max_digit)).rev() {
            cur.push((pos, dgt));
            rec(pos + 1, rest - dgt, max_digit, universe, cur, out);
            cur.pop();
        }
        rec(pos + 1, rest, max_digit, universe, cur, out);
    }
    let mut raw = Vec::new();
    rec(0, total, max_digit, universe, &mut Vec::new(), &mut raw);
    let n = universe.first().map_or(0, Monomial::arity);
    raw.into_iter()
        .map(|digits| {
            let mut weight = vec![0u64; n];
            for &(idx, dgt) in &digits {
                for (w, &e) in weight.iter_mut().zip(universe[idx].exps()) {
                    *w += dgt as u64 * e as u64;
                }
            }
            PlaneAssignment { digits, weight }
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// every component a positive multiple of q-1
    AllPositive,
    /// exactly one zero component, the rest positive multiples of q-1
    OneZero,
}

/// Combines per-plane assignments into index functions whose weighted sum is
/// componentwise divisible by q-1 and has the requested shape. The last
/// plane is looked up by residue class instead of scanned.
fn combine_planes(
    universe: &[Monomial],
    planes: &[PlaneAssignment],
    p: u32,
    m: u32,
    shape: Shape,
) -> Vec<IndexFunction> {
    let n = universe.first().map_or(0, Monomial::arity);
    let modulus = (p as u64).pow(m) - 1;
    let top_scale = (p as u64).pow(m - 1);
    // p is a unit mod q-1: p^m = 1, so p^(-(m-1)) = p
    let top_inv = if modulus == 1 { 0 } else { p as u64 % modulus };
    let residue = |w: &[u64]| -> Vec<u64> { w.iter().map(|&x| x % modulus).collect() };

    let mut buckets: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    for (k, a) in planes.iter().enumerate() {
        buckets.entry(residue(&a.weight)).or_default().push(k);
    }

    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(m as usize);
    let mut partial = vec![0u64; n];

    fn descend(
        level: u32,
        ctx: &Ctx,
        chosen: &mut Vec<usize>,
        partial: &mut Vec<u64>,
        out: &mut Vec<IndexFunction>,
    ) {
        let scale = (ctx.p as u64).pow(level);
        if level + 1 < ctx.m {
            for (k, a) in ctx.planes.iter().enumerate() {
                for (s, &w) in partial.iter_mut().zip(&a.weight) {
                    *s += scale * w;
                }
                chosen.push(k);
                descend(level + 1, ctx, chosen, partial, out);
                chosen.pop();
                for (s, &w) in partial.iter_mut().zip(&a.weight) {
                    *s -= scale * w;
                }
            }
            return;
        }
        let need: Vec<u64> = partial
            .iter()
            .map(|&s| {
                if ctx.modulus == 1 {
                    0
                } else {
                    let neg = (ctx.modulus - s % ctx.modulus) % ctx.modulus;
                    neg * ctx.top_inv % ctx.modulus
                }
            })
            .collect();
        let Some(bucket) = ctx.buckets.get(&need) else {
            return;
        };
        for &k in bucket {
            let w = &ctx.planes[k].weight;
            let zeros = partial
                .iter()
                .zip(w)
                .filter(|&(&s, &x)| s + ctx.top_scale * x == 0)
                .count();
            let ok = match ctx.shape {
                Shape::AllPositive => zeros == 0,
                Shape::OneZero => zeros == 1,
            };
            if !ok {
                continue;
            }
            chosen.push(k);
            let mut support: BTreeMap<Monomial, u32> = BTreeMap::new();
            for (j, &plane) in chosen.iter().enumerate() {
                let pj = (ctx.p as u64).pow(j as u32) as u32;
                for &(idx, dgt) in &ctx.planes[plane].digits {
                    *support.entry(ctx.universe[idx].clone()).or_insert(0) += dgt * pj;
                }
            }
            chosen.pop();
            out.push(IndexFunction { support });
        }
    }

    struct Ctx<'a> {
        universe: &'a [Monomial],
        planes: &'a [PlaneAssignment],
        buckets: HashMap<Vec<u64>, Vec<usize>>,
        p: u32,
        m: u32,
        modulus: u64,
        top_scale: u64,
        top_inv: u64,
        shape: Shape,
    }
    let ctx = Ctx {
        universe,
        planes,
        buckets,
        p,
        m,
        modulus,
        top_scale,
        top_inv,
        shape,
    };
    descend(0, &ctx, &mut chosen, &mut partial, &mut out);
    out
}

/// Enumerates I and I' for (p, m, n, d). Each digit plane is enumerated
/// independently as an assignment `U_d -> [0, p)` with the required plane
/// sum, planes are combined into `i(u) = sum_j delta_j(u) p^j`, and the
/// weighted-sum condition filters the result. Output is ordered
/// lexicographically by the tuple of plane assignments.
pub fn enumerate_index_sets(
    p: u32,
    m: u32,
    n: usize,
    d: u32,
    budget: &Budget,
) -> Result<IndexSetFamily, AxError> {
    if d < 2 {
        return Err(AxError::DegreeTooSmall(d));
    }
    let universe = monomials(n, d, None);
    let c = ceil_div(n as u32, d);
    let plane_sum = (p - 1) * c;
    let prime_plane_sum = (n > 1 && (n as u32 - 1).is_multiple_of(d)).then(|| (p - 1) * (n as u32 - 1) / d);

    let check = |total: u32| -> Result<(), AxError> {
        let count = count_plane_assignments(universe.len(), total, p - 1);
        let needed = (0..m).fold(1u128, |acc, _| acc.saturating_mul(count));
        if needed > budget.index_combinations as u128 {
            return Err(AxError::Budget {
                needed,
                limit: budget.index_combinations,
            });
        }
        Ok(())
    };
    check(plane_sum)?;
    if let Some(s) = prime_plane_sum {
        check(s)?;
    }

    let planes = plane_assignments(&universe, plane_sum, p - 1);
    let set_i = combine_planes(&universe, &planes, p, m, Shape::AllPositive);
    let set_i_prime = match prime_plane_sum {
        Some(s) => {
            let planes = plane_assignments(&universe, s, p - 1);
            combine_planes(&universe, &planes, p, m, Shape::OneZero)
        }
        None => Vec::new(),
    };
    Ok(IndexSetFamily {
        p,
        m,
        n,
        d,
        set_i,
        set_i_prime,
    })
}

/// Enumerates the family for f's parameters and evaluates E(f).
pub fn compute_e(f: &MultiPoly, budget: &Budget) -> Result<Elem, AxError> {
    let field = f.field();
    let family = enumerate_index_sets(field.p(), field.m(), f.n(), f.d(), budget)?;
    family.evaluate_e(f)
}

/// Outcome of checking the congruence for one polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxReport {
    pub zcount: u64,
    pub valuation: Valuation,
    /// m (ceil(n/d) - 1) for the declared d
    pub bound: u32,
    /// E(f) lifted to [0, p)
    #[serde(rename = "E")]
    pub e: u32,
    /// |Z(f)| = q^(c-1) E(f) mod q^(c-1) p
    pub congruence_ok: bool,
    /// valuation >= bound + 1 exactly when E(f) = 0
    pub biconditional_ok: bool,
    /// valuation >= m (ceil(n/deg f) - 1) for the effective degree
    pub ax_ok: bool,
}

impl AxReport {
    pub fn agrees(&self) -> bool {
        self.congruence_ok && self.biconditional_ok && self.ax_ok
    }
}

/// Ax's lower bound on the valuation, from the effective degree; `None` when
/// f is constant.
pub fn ax_floor(f: &MultiPoly) -> Option<u32> {
    let deg = f.effective_degree().filter(|&k| k >= 1)?;
    Some(f.field().m() * (ceil_div(f.n() as u32, deg) - 1))
}

pub fn verify_with_family(
    f: &MultiPoly,
    family: &IndexSetFamily,
    budget: &Budget,
) -> Result<AxReport, AxError> {
    let e = family.evaluate_e(f)?;
    let zcount = f.zero_count(budget)?;
    let field = f.field();
    let (p, m) = (field.p(), field.m());
    let c = family.c();
    let valuation = nu_p(zcount as u128, p);
    let bound = m * (c - 1);
    let lead = (field.q() as u128).pow(c - 1);
    let modulus = lead * p as u128;
    let congruence_ok = (zcount as u128) % modulus == (lead * e.0 as u128) % modulus;
    let biconditional_ok = valuation.at_least(bound + 1) == e.is_zero();
    let ax_ok = ax_floor(f).is_none_or(|floor| valuation.at_least(floor));
    Ok(AxReport {
        zcount,
        valuation,
        bound,
        e: e.0,
        congruence_ok,
        biconditional_ok,
        ax_ok,
    })
}

pub fn verify_theorem(f: &MultiPoly, budget: &Budget) -> Result<AxReport, AxError> {
    let field: &FieldSpec = f.field();
    let family = enumerate_index_sets(field.p(), field.m(), f.n(), f.d(), budget)?;
    verify_with_family(f, &family, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;

    fn gf(p: u64, m: u32) -> FieldSpec {
        FieldSpec::new(p, m, None).unwrap()
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn digit_functions() {
        assert_eq!(digit_sum(6, 2, 3).unwrap(), 2);
        assert_eq!(digit_sum(0, 5, 2).unwrap(), 0);
        assert_eq!(digit_sum(26, 3, 3).unwrap(), 6);
        assert_eq!(digit_sum(8, 2, 3), Err(AxError::DigitRange { a: 8, max: 7 }));

        assert_eq!(gamma(5, 3, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(gamma_inverse_mod_p(5, 3, 2).unwrap(), 2);
        assert_eq!(gamma_inverse_mod_p(0, 3, 2).unwrap(), 1);
        assert_eq!(gamma_inverse_mod_p(7, 2, 3).unwrap(), 1);
        // 4! = 24 = 3 mod 7, inverse 5
        assert_eq!(gamma_inverse_mod_p(4, 7, 1).unwrap(), 5);

        assert_eq!(tau(3, 2, 3).unwrap(), 6);
        assert_eq!(tau(0, 2, 3).unwrap(), 0);
        assert_eq!(tau(7, 2, 3).unwrap(), 7);
        assert!(tau(9, 3, 2).is_err());
    }

    #[test]
    fn tau_has_order_dividing_m() {
        for (p, m) in [(2u32, 3u32), (3, 2), (2, 4), (5, 3)] {
            let q = (p as u64).pow(m);
            for a in 0..q {
                let back = (0..m).fold(a, |x, _| tau(x, p, m).unwrap());
                assert_eq!(back, a);
            }
        }
    }

    #[test]
    fn index_sets_gf2_n4_d2() {
        let fam = enumerate_index_sets(2, 1, 4, 2, &Budget::default()).unwrap();
        assert_eq!(fam.set_i.len(), 3);
        assert!(fam.set_i_prime.is_empty());
        for i in &fam.set_i {
            let us: Vec<&Monomial> = i.support().keys().collect();
            assert_eq!(us.len(), 2);
            assert!(us.iter().all(|u| u.degree() == 2));
            let sum: Vec<u32> = (0..4).map(|k| us[0].exps()[k] + us[1].exps()[k]).collect();
            assert_eq!(sum, vec![1, 1, 1, 1]);
        }
    }

    #[test]
    fn index_sets_gf2_n3_d2_prime_set() {
        let fam = enumerate_index_sets(2, 1, 3, 2, &Budget::default()).unwrap();
        let expected: Vec<IndexFunction> = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
            .iter()
            .map(|u| IndexFunction::new([(mono(u), 1)].into_iter().collect()))
            .collect();
        let mut got = fam.set_i_prime.clone();
        got.sort();
        let mut want = expected;
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn index_sets_gf3_n2_d2() {
        let fam = enumerate_index_sets(3, 1, 2, 2, &Budget::default()).unwrap();
        let diag = IndexFunction::new([(mono(&[1, 1]), 2)].into_iter().collect());
        assert!(fam.set_i.contains(&diag));
        let pair = IndexFunction::new([(mono(&[2, 0]), 1), (mono(&[0, 2]), 1)].into_iter().collect());
        assert!(fam.set_i.contains(&pair));
        assert_eq!(fam.set_i.len(), 2);
    }

    #[test]
    fn n_equals_one_has_no_prime_set() {
        let fam = enumerate_index_sets(3, 1, 1, 2, &Budget::default()).unwrap();
        assert!(fam.set_i_prime.is_empty());
    }

    #[test]
    fn rejects_small_d_and_tiny_budget() {
        assert_eq!(
            enumerate_index_sets(2, 1, 4, 1, &Budget::default()).unwrap_err(),
            AxError::DegreeTooSmall(1)
        );
        assert!(matches!(
            enumerate_index_sets(2, 3, 4, 2, &Budget::uniform(1000)),
            Err(AxError::Budget { .. })
        ));
    }

    #[test]
    fn plane_assignment_count_matches_generation() {
        let universe = monomials(3, 3, None);
        for (total, max_digit) in [(2, 1), (2, 2), (4, 2), (3, 4)] {
            let gen = plane_assignments(&universe, total, max_digit).len() as u128;
            assert_eq!(gen, count_plane_assignments(universe.len(), total, max_digit));
        }
    }

    #[test]
    fn compute_e_examples() {
        let b = Budget::default();
        let f2 = gf(2, 1);
        let f = parse_poly("X1*X2 + X3*X4", &f2, 4, 2).unwrap();
        assert_eq!(compute_e(&f, &b).unwrap(), Elem(1));
        let g = parse_poly("X1*X2", &f2, 3, 2).unwrap();
        assert_eq!(compute_e(&g, &b).unwrap(), Elem(1));
        let f3 = gf(3, 1);
        let h = parse_poly("X1*X2", &f3, 2, 2).unwrap();
        assert_eq!(compute_e(&h, &b).unwrap(), Elem(2));
    }

    #[test]
    fn verify_examples() {
        let b = Budget::default();
        let f2 = gf(2, 1);
        let r = verify_theorem(&parse_poly("X1*X2 + X3", &f2, 3, 2).unwrap(), &b).unwrap();
        assert_eq!((r.zcount, r.e, r.congruence_ok), (4, 0, true));
        let r = verify_theorem(&parse_poly("X1*X2 + X3*X4", &f2, 4, 2).unwrap(), &b).unwrap();
        assert_eq!((r.zcount, r.e, r.congruence_ok), (10, 1, true));
        let f3 = gf(3, 1);
        let r = verify_theorem(&MultiPoly::zero(&f3, 2, 2), &b).unwrap();
        assert_eq!(
            (r.zcount, r.valuation, r.bound, r.e),
            (9, Valuation::Finite(2), 0, 0)
        );
        assert!(r.agrees());
    }

    #[test]
    fn family_mismatch_is_reported() {
        let b = Budget::default();
        let fam = enumerate_index_sets(2, 1, 4, 2, &b).unwrap();
        let f = parse_poly("X1*X2", &gf(2, 1), 3, 2).unwrap();
        assert_eq!(fam.evaluate_e(&f).unwrap_err(), AxError::FamilyMismatch);
    }
}
