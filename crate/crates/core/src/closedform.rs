//! Closed forms for E(f) and N_q(d, n; t) in four parameter regimes where
//! every plane of an index function is a "complementary pair" of monomials.
//!
//! In each regime E(f) vanishes exactly when the coefficient vector of f is a
//! root of an explicit quadratic form Q over the prime field, and N_q follows
//! from the number of roots of Q.
//!
//! | case          | field  | degree            | t   | pairing of u, v                                 |
//! |---------------|--------|-------------------|-----|-------------------------------------------------|
//! | `HalfN`       | 2^m    | d = n/2, n even   | m+1 | u, v in {0,1}^n, \|u\| = \|v\| = n/2, u + v = 1     |
//! | `BinaryRange` | 2      | n/2 <= d <= n-2   | 2   | u, v in {0,1}^n, \|u\|,\|v\| in [n-d, d], u + v >= 1 |
//! | `TernaryN`    | 3^m    | d = n             | 1   | u, v in {0,1,2}^n, u + v = 2                     |
//! | `TernaryRange`| 3      | n <= d <= 2n      | 1   | u = v mod 2, u + v >= 2, \|u\|,\|v\| in [2n-d, d]   |
//!
//! In the ternary cases a monomial may pair with itself; such a term enters Q
//! on the diagonal with coefficient 1/gamma(2) = 1/2 = -1 in GF(3).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::axcore::{ceil_div, gamma_inverse_mod_p, AxError, IndexFunction, IndexSetFamily};
use crate::budget::{saturating_pow, Budget};
use crate::gf::{Elem, FieldSpec};
use crate::mpoly::{monomials, Monomial, MultiPoly};
use crate::rmcode::{binomial, rm_dim, RmError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosedFormError {
    #[error("{case} requires {requirement}")]
    Constraint {
        case: CaseTag,
        requirement: &'static str,
    },
    #[error("{case} counts divisibility by p^{expected}, not p^{got}")]
    Exponent { case: CaseTag, expected: u32, got: u32 },
    #[error("{kind:?} characteristic root count needs N of the other parity, got N = {n}")]
    Parity { kind: Characteristic, n: usize },
    #[error("polynomial does not belong to this case's (q, n, d)")]
    CaseMismatch,
    #[error("root count needs {needed} evaluations, budget is {limit}")]
    Budget { needed: u64, limit: u64 },
    #[error("unknown case {0:?}")]
    UnknownCase(String),
    #[error("no closed form for q = {q}, d = {d}, n = {n}, t = {t}")]
    NoFormula { q: u32, d: u32, n: usize, t: u32 },
    #[error(transparent)]
    Rm(#[from] RmError),
    #[error(transparent)]
    Ax(#[from] AxError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseTag {
    #[serde(rename = "half_n")]
    HalfN,
    #[serde(rename = "bin_range")]
    BinaryRange,
    #[serde(rename = "ter_n")]
    TernaryN,
    #[serde(rename = "ter_range")]
    TernaryRange,
}

impl CaseTag {
    pub const ALL: [CaseTag; 4] = [
        CaseTag::HalfN,
        CaseTag::BinaryRange,
        CaseTag::TernaryN,
        CaseTag::TernaryRange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::HalfN => "half_n",
            CaseTag::BinaryRange => "bin_range",
            CaseTag::TernaryN => "ter_n",
            CaseTag::TernaryRange => "ter_range",
        }
    }

    pub fn characteristic(self) -> Characteristic {
        match self {
            CaseTag::HalfN | CaseTag::BinaryRange => Characteristic::Even,
            CaseTag::TernaryN | CaseTag::TernaryRange => Characteristic::Odd,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseTag {
    type Err = ClosedFormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseTag::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ClosedFormError::UnknownCase(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Characteristic {
    Even,
    Odd,
}

/// A case tag bound to concrete (q, n, d) that satisfy its constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseInstance {
    case: CaseTag,
    field: FieldSpec,
    n: usize,
    d: u32,
}

impl CaseInstance {
    /// `d` may be omitted for the two cases where it is determined by n.
    pub fn new(case: CaseTag, field: &FieldSpec, n: usize, d: Option<u32>) -> Result<Self, ClosedFormError> {
        let fail = |requirement| Err(ClosedFormError::Constraint { case, requirement });
        let (p, m) = (field.p(), field.m());
        let n32 = n as u32;
        let d = match case {
            CaseTag::HalfN => {
                if p != 2 {
                    return fail("q = 2^m");
                }
                if n < 4 || !n.is_multiple_of(2) {
                    return fail("n even and at least 4");
                }
                match d {
                    None => n32 / 2,
                    Some(d) if d == n32 / 2 => d,
                    Some(_) => return fail("d = n/2"),
                }
            }
            CaseTag::BinaryRange => {
                if p != 2 || m != 1 {
                    return fail("q = 2");
                }
                if n < 4 {
                    return fail("n >= 4");
                }
                match d {
                    Some(d) if 2 * d >= n32 && d + 2 <= n32 => d,
                    Some(_) => return fail("n/2 <= d <= n-2"),
                    None => return fail("an explicit d"),
                }
            }
            CaseTag::TernaryN => {
                if p != 3 {
                    return fail("q = 3^m");
                }
                if n < 2 {
                    return fail("n >= 2");
                }
                match d {
                    None => n32,
                    Some(d) if d == n32 => d,
                    Some(_) => return fail("d = n"),
                }
            }
            CaseTag::TernaryRange => {
                if p != 3 || m != 1 {
                    return fail("q = 3");
                }
                if n < 2 {
                    return fail("n >= 2");
                }
                match d {
                    Some(d) if d >= n32 && d <= 2 * n32 => d,
                    Some(_) => return fail("n <= d <= 2n"),
                    None => return fail("an explicit d"),
                }
            }
        };
        Ok(CaseInstance {
            case,
            field: field.clone(),
            n,
            d,
        })
    }

    pub fn case(&self) -> CaseTag {
        self.case
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// The t for which the case's count formula holds.
    pub fn exponent(&self) -> u32 {
        match self.case {
            CaseTag::HalfN => self.field.m() + 1,
            CaseTag::BinaryRange => 2,
            CaseTag::TernaryN | CaseTag::TernaryRange => 1,
        }
    }

    fn target(&self) -> u32 {
        match self.case.characteristic() {
            Characteristic::Even => 1,
            Characteristic::Odd => 2,
        }
    }

    fn label_degrees(&self) -> (u32, u32) {
        let n = self.n as u32;
        match self.case {
            CaseTag::HalfN => (n / 2, n / 2),
            CaseTag::BinaryRange => (n - self.d, self.d),
            CaseTag::TernaryN => (n, n),
            CaseTag::TernaryRange => (2 * n - self.d, self.d),
        }
    }

    /// Monomials labelling the indeterminates of Q, in graded-lex order.
    pub fn labels(&self) -> Vec<Monomial> {
        let (lo, hi) = self.label_degrees();
        monomials(self.n, hi, Some(self.target()))
            .into_iter()
            .filter(|u| u.degree() >= lo)
            .collect()
    }

    /// How u and v combine in Q: `None` if not at all, otherwise the
    /// coefficient as an integer mod p.
    fn pairing(&self, u: &Monomial, v: &Monomial) -> Option<i64> {
        let t = self.target();
        let sums = u.exps().iter().zip(v.exps()).map(|(&a, &b)| a + b);
        let paired = match self.case {
            CaseTag::HalfN | CaseTag::TernaryN => sums.clone().all(|s| s == t),
            CaseTag::BinaryRange => u != v && sums.clone().all(|s| s >= t),
            CaseTag::TernaryRange => {
                u.exps().iter().zip(v.exps()).all(|(a, b)| a % 2 == b % 2) && sums.clone().all(|s| s >= t)
            }
        };
        if !paired {
            return None;
        }
        if u == v {
            Some(gamma_inverse_mod_p(2, self.field.p(), 1).expect("2 < p") as i64)
        } else {
            Some(1)
        }
    }

    /// (-1)^(n + m ceil(n/d) + 1): the factor relating the value of the
    /// closed form to E(f).
    pub fn sign(&self) -> i64 {
        let c = ceil_div(self.n as u32, self.d) as u64;
        let k = self.n as u64 + self.field.m() as u64 * c + 1;
        if k.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// `Y A Y^t` with A upper triangular; row/column k belongs to `labels[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    labels: Vec<Monomial>,
    coeffs: BTreeMap<(usize, usize), i64>,
    p: u32,
}

impl QuadraticForm {
    pub fn num_vars(&self) -> usize {
        self.labels.len()
    }

    /// Indeterminate labels; a label and its complement sit at mirrored
    /// positions and degrees increase along the row.
    pub fn labels(&self) -> &[Monomial] {
        &self.labels
    }

    /// Entries (row, col) with row <= col, coefficients in [0, p).
    pub fn coeffs(&self) -> &BTreeMap<(usize, usize), i64> {
        &self.coeffs
    }

    pub fn diagonal_terms(&self) -> usize {
        self.coeffs.keys().filter(|(r, c)| r == c).count()
    }

    pub fn off_diagonal_terms(&self) -> usize {
        self.coeffs.keys().filter(|(r, c)| r != c).count()
    }

    pub fn evaluate(&self, field: &FieldSpec, y: &[Elem]) -> Elem {
        self.coeffs.iter().fold(Elem::ZERO, |acc, (&(r, c), &k)| {
            let term = field.mul(field.from_int(k), field.mul(y[r], y[c]));
            field.add(acc, term)
        })
    }
}

pub fn build_quadratic_form(inst: &CaseInstance) -> QuadraticForm {
    let labels = inst.labels();
    let mut coeffs = BTreeMap::new();
    for (r, u) in labels.iter().enumerate() {
        for (c, v) in labels.iter().enumerate().skip(r) {
            if let Some(k) = inst.pairing(u, v) {
                coeffs.insert((r, c), k.rem_euclid(inst.field.p() as i64));
            }
        }
    }
    QuadraticForm {
        labels,
        coeffs,
        p: inst.field.p(),
    }
}

/// Q evaluated at f's coefficients, raised to 1 + p + ... + p^(m-1).
pub fn e_closed_form(inst: &CaseInstance, f: &MultiPoly) -> Result<Elem, ClosedFormError> {
    let field = &inst.field;
    if f.field() != field || f.n() != inst.n || f.d() != inst.d {
        return Err(ClosedFormError::CaseMismatch);
    }
    let form = build_quadratic_form(inst);
    let y: Vec<Elem> = form.labels.iter().map(|u| f.coefficient(u)).collect();
    let value = form.evaluate(field, &y);
    let exponent = (field.q() as u64 - 1) / (field.p() as u64 - 1);
    Ok(field.pow(value, exponent))
}

/// [`e_closed_form`] times the global sign, directly comparable with
/// `compute_e`.
pub fn e_closed_form_normalized(inst: &CaseInstance, f: &MultiPoly) -> Result<Elem, ClosedFormError> {
    let raw = e_closed_form(inst, f)?;
    let field = &inst.field;
    Ok(field.mul(field.from_int(inst.sign()), raw))
}

/// Number of roots in GF(q)^N of a nondegenerate form of the shape used by
/// the cases: hyperbolic q^(N-1) + (q-1) q^(N/2-1) for even N in
/// characteristic 2, q^(N-1) for odd N in odd characteristic.
pub fn quad_root_count(kind: Characteristic, q: u32, n_vars: usize) -> Result<BigUint, ClosedFormError> {
    let q = BigUint::from(q);
    match kind {
        Characteristic::Even if n_vars.is_multiple_of(2) && n_vars > 0 => {
            let half = (n_vars / 2 - 1) as u32;
            Ok(q.pow(n_vars as u32 - 1) + (&q - 1u32) * q.pow(half))
        }
        Characteristic::Odd if n_vars % 2 == 1 => Ok(q.pow(n_vars as u32 - 1)),
        _ => Err(ClosedFormError::Parity { kind, n: n_vars }),
    }
}

/// Counts roots of Q over GF(q)^N by enumeration.
pub fn quad_root_count_brute(
    form: &QuadraticForm,
    field: &FieldSpec,
    budget: &Budget,
) -> Result<u64, ClosedFormError> {
    let q = field.q();
    let n_vars = form.num_vars();
    let needed = saturating_pow(q as u64, n_vars as u64);
    if needed > budget.evaluations {
        return Err(ClosedFormError::Budget {
            needed,
            limit: budget.evaluations,
        });
    }
    debug_assert_eq!(form.p, field.p());
    let mut y = vec![Elem::ZERO; n_vars];
    let mut roots = 0u64;
    loop {
        if form.evaluate(field, &y).is_zero() {
            roots += 1;
        }
        let mut k = 0;
        loop {
            if k == n_vars {
                return Ok(roots);
            }
            y[k].0 += 1;
            if y[k].0 < q {
                break;
            }
            y[k] = Elem::ZERO;
            k += 1;
        }
    }
}

/// N_q(d, n; t) from the case's closed formula.
pub fn formula_count(inst: &CaseInstance, t: u32) -> Result<BigUint, ClosedFormError> {
    if t != inst.exponent() {
        return Err(ClosedFormError::Exponent {
            case: inst.case,
            expected: inst.exponent(),
            got: t,
        });
    }
    let q = inst.field.q();
    let qb = BigUint::from(q);
    let n = inst.n as u64;
    let dim = rm_dim(q as u64, inst.d as i64, n as u32)? as u32;
    Ok(match inst.case {
        CaseTag::HalfN => {
            let c = binomial(n, n / 2) as u32;
            let roots = qb.pow(c - 1) + (&qb - 1u32) * qb.pow(c / 2 - 1);
            roots * qb.pow(dim - c)
        }
        CaseTag::BinaryRange => {
            let low_weights: u128 = (0..=inst.d as u64).map(|j| binomial(n, j)).sum();
            let two = BigUint::from(2u32);
            two.pow(low_weights as u32 - 1) + two.pow((1u32 << (n - 1)) - 1)
        }
        CaseTag::TernaryN | CaseTag::TernaryRange => qb.pow(dim - 1),
    })
}

/// The first case whose constraints and exponent match (q, d, n, t).
pub fn detect_case(field: &FieldSpec, d: u32, n: usize, t: u32) -> Option<CaseInstance> {
    CaseTag::ALL
        .into_iter()
        .filter_map(|case| CaseInstance::new(case, field, n, Some(d)).ok())
        .find(|inst| inst.exponent() == t)
}

/// How a formula count was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaSource {
    /// t is at most Ax's bound, so every codeword qualifies
    AxFloor,
    Case(CaseTag),
}

/// Closed-form N_q(d, n; t) wherever one is known: below Ax's bound the
/// whole code, otherwise one of the four cases.
pub fn formula_count_for(
    field: &FieldSpec,
    d: u32,
    n: usize,
    t: u32,
) -> Result<(BigUint, FormulaSource), ClosedFormError> {
    let q = field.q();
    if d >= 1 && t <= field.m() * (ceil_div(n as u32, d) - 1) {
        let dim = rm_dim(q as u64, d as i64, n as u32)? as u32;
        return Ok((BigUint::from(q).pow(dim), FormulaSource::AxFloor));
    }
    let inst = detect_case(field, d, n, t).ok_or(ClosedFormError::NoFormula { q, d, n, t })?;
    Ok((formula_count(&inst, t)?, FormulaSource::Case(inst.case)))
}

/// The index set I for q = 2^m, n even, d = n/2, built directly from one
/// complementary pair {u, 1 - u} of weight-n/2 binary vectors per digit
/// plane. I' is empty because d does not divide n - 1.
pub fn complementary_pair_family(field: &FieldSpec, n: usize) -> Result<IndexSetFamily, ClosedFormError> {
    let inst = CaseInstance::new(CaseTag::HalfN, field, n, None)?;
    let (p, m) = (field.p(), field.m());
    let pairs: Vec<(Monomial, Monomial)> = monomials(n, inst.d, Some(1))
        .into_iter()
        .filter(|u| u.degree() == inst.d)
        .filter_map(|u| {
            let v = u.complement(1)?;
            (u < v).then_some((u, v))
        })
        .collect();
    let mut set_i = Vec::new();
    let mut choice = vec![0usize; m as usize];
    'tuples: loop {
        let mut support: BTreeMap<Monomial, u32> = BTreeMap::new();
        for (j, &k) in choice.iter().enumerate() {
            let bit = 1u32 << j;
            let (u, v) = &pairs[k];
            *support.entry(u.clone()).or_insert(0) += bit;
            *support.entry(v.clone()).or_insert(0) += bit;
        }
        set_i.push(IndexFunction::new(support));
        for slot in choice.iter_mut() {
            *slot += 1;
            if *slot < pairs.len() {
                continue 'tuples;
            }
            *slot = 0;
        }
        break;
    }
    Ok(IndexSetFamily {
        p,
        m,
        n,
        d: inst.d,
        set_i,
        set_i_prime: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axcore::{compute_e, enumerate_index_sets};
    use crate::mpoly::parse_poly;

    fn gf(p: u64, m: u32) -> FieldSpec {
        FieldSpec::new(p, m, None).unwrap()
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn half_n_form() {
        let inst = CaseInstance::new(CaseTag::HalfN, &gf(2, 1), 4, None).unwrap();
        let q = build_quadratic_form(&inst);
        assert_eq!(q.num_vars(), 6);
        assert_eq!(q.off_diagonal_terms(), 3);
        assert_eq!(q.diagonal_terms(), 0);
        // complements mirrored
        for (k, u) in q.labels().iter().enumerate() {
            assert_eq!(&q.labels()[5 - k], &u.complement(1).unwrap());
        }
        assert!(q.coeffs().keys().all(|&(r, c)| r + c == 5));
    }

    #[test]
    fn binary_range_form_at_minimum_d() {
        let inst = CaseInstance::new(CaseTag::BinaryRange, &gf(2, 1), 4, Some(2)).unwrap();
        let half = CaseInstance::new(CaseTag::HalfN, &gf(2, 1), 4, None).unwrap();
        assert_eq!(build_quadratic_form(&inst), build_quadratic_form(&half));
    }

    #[test]
    fn ternary_n_form() {
        let inst = CaseInstance::new(CaseTag::TernaryN, &gf(3, 1), 2, None).unwrap();
        let q = build_quadratic_form(&inst);
        assert_eq!(q.labels(), &[mono(&[0, 2]), mono(&[1, 1]), mono(&[2, 0])]);
        let expected: BTreeMap<(usize, usize), i64> = [((0, 2), 1), ((1, 1), 2)].into_iter().collect();
        assert_eq!(q.coeffs(), &expected);
    }

    #[test]
    fn ternary_range_form_n2_d3() {
        // Y10 Y12 + Y01 Y21 + Y20 Y02 - Y11^2 - Y12^2 - Y21^2
        let inst = CaseInstance::new(CaseTag::TernaryRange, &gf(3, 1), 2, Some(3)).unwrap();
        let q = build_quadratic_form(&inst);
        assert_eq!(q.num_vars(), 7);
        assert_eq!(q.off_diagonal_terms(), 3);
        assert_eq!(q.diagonal_terms(), 3);
    }

    #[test]
    fn case_constraints() {
        assert!(CaseInstance::new(CaseTag::HalfN, &gf(2, 1), 5, None).is_err());
        assert!(CaseInstance::new(CaseTag::HalfN, &gf(3, 1), 4, None).is_err());
        assert!(CaseInstance::new(CaseTag::BinaryRange, &gf(2, 1), 6, Some(5)).is_err());
        assert!(CaseInstance::new(CaseTag::BinaryRange, &gf(2, 2), 6, Some(4)).is_err());
        assert!(CaseInstance::new(CaseTag::TernaryN, &gf(3, 2), 3, Some(2)).is_err());
        assert!(CaseInstance::new(CaseTag::TernaryRange, &gf(3, 1), 2, Some(5)).is_err());
        assert!(CaseInstance::new(CaseTag::TernaryRange, &gf(3, 1), 2, None).is_err());
        assert_eq!("ter_range".parse::<CaseTag>().unwrap(), CaseTag::TernaryRange);
        assert!("nope".parse::<CaseTag>().is_err());
    }

    #[test]
    fn closed_form_examples() {
        let f2 = gf(2, 1);
        let inst = CaseInstance::new(CaseTag::HalfN, &f2, 4, None).unwrap();
        let f = parse_poly("X1*X2 + X3*X4", &f2, 4, 2).unwrap();
        assert_eq!(e_closed_form(&inst, &f).unwrap(), Elem(1));
        let g = parse_poly("X1*X2 + X1*X3", &f2, 4, 2).unwrap();
        assert_eq!(e_closed_form(&inst, &g).unwrap(), Elem(0));
        assert_eq!(g.zero_count(&Budget::default()).unwrap(), 12);

        let f3 = gf(3, 1);
        let inst = CaseInstance::new(CaseTag::TernaryN, &f3, 2, None).unwrap();
        let h = parse_poly("X1*X2", &f3, 2, 2).unwrap();
        assert_eq!(e_closed_form(&inst, &h).unwrap(), Elem(2));
        assert_eq!(
            e_closed_form_normalized(&inst, &h).unwrap(),
            compute_e(&h, &Budget::default()).unwrap()
        );
        let wrong = parse_poly("X1*X2", &f3, 3, 3).unwrap();
        assert_eq!(
            e_closed_form(&inst, &wrong).unwrap_err(),
            ClosedFormError::CaseMismatch
        );
    }

    #[test]
    fn root_count_examples() {
        assert_eq!(
            quad_root_count(Characteristic::Even, 2, 2).unwrap(),
            BigUint::from(3u32)
        );
        assert_eq!(
            quad_root_count(Characteristic::Even, 4, 6).unwrap(),
            BigUint::from(1072u32)
        );
        assert_eq!(
            quad_root_count(Characteristic::Odd, 3, 1).unwrap(),
            BigUint::from(1u32)
        );
        assert!(quad_root_count(Characteristic::Even, 2, 3).is_err());
        assert!(quad_root_count(Characteristic::Odd, 3, 2).is_err());
    }

    #[test]
    fn brute_root_count_examples() {
        let b = Budget::default();
        let f2 = gf(2, 1);
        let y1y2 = QuadraticForm {
            labels: vec![mono(&[1, 0]), mono(&[0, 1])],
            coeffs: [((0, 1), 1)].into_iter().collect(),
            p: 2,
        };
        assert_eq!(quad_root_count_brute(&y1y2, &f2, &b).unwrap(), 3);
        let inst = CaseInstance::new(CaseTag::HalfN, &f2, 4, None).unwrap();
        // three hyperbolic pairs: 2^5 + 2^2
        assert_eq!(
            quad_root_count_brute(&build_quadratic_form(&inst), &f2, &b).unwrap(),
            36
        );
        let f3 = gf(3, 1);
        let inst = CaseInstance::new(CaseTag::TernaryN, &f3, 2, None).unwrap();
        assert_eq!(
            quad_root_count_brute(&build_quadratic_form(&inst), &f3, &b).unwrap(),
            9
        );
        // even pair with Y1Y2 + Y3Y4 over GF(2)
        let two_pairs = QuadraticForm {
            labels: (0..4).map(|k| mono(&[k])).collect(),
            coeffs: [((0, 1), 1), ((2, 3), 1)].into_iter().collect(),
            p: 2,
        };
        assert_eq!(quad_root_count_brute(&two_pairs, &f2, &b).unwrap(), 10);
    }

    #[test]
    fn formula_examples() {
        let f2 = gf(2, 1);
        let half = CaseInstance::new(CaseTag::HalfN, &f2, 4, None).unwrap();
        assert_eq!(formula_count(&half, 2).unwrap(), BigUint::from(1152u32));
        let range = CaseInstance::new(CaseTag::BinaryRange, &f2, 4, Some(2)).unwrap();
        assert_eq!(formula_count(&range, 2).unwrap(), BigUint::from(1152u32));
        let f3 = gf(3, 1);
        let ter = CaseInstance::new(CaseTag::TernaryN, &f3, 2, None).unwrap();
        assert_eq!(formula_count(&ter, 1).unwrap(), BigUint::from(243u32));
        assert!(matches!(
            formula_count(&ter, 2),
            Err(ClosedFormError::Exponent { .. })
        ));
        let big = CaseInstance::new(CaseTag::BinaryRange, &f2, 5, Some(3)).unwrap();
        assert_eq!(
            formula_count(&big, 2).unwrap(),
            BigUint::from((1u64 << 25) + (1u64 << 15))
        );
    }

    #[test]
    fn formula_dispatch() {
        let f2 = gf(2, 1);
        let (count, src) = formula_count_for(&f2, 2, 4, 1).unwrap();
        assert_eq!((count, src), (BigUint::from(2048u32), FormulaSource::AxFloor));
        let (count, src) = formula_count_for(&f2, 2, 4, 2).unwrap();
        assert_eq!(count, BigUint::from(1152u32));
        assert!(matches!(src, FormulaSource::Case(_)));
        assert!(matches!(
            formula_count_for(&f2, 2, 4, 3),
            Err(ClosedFormError::NoFormula { .. })
        ));
    }

    #[test]
    fn complementary_pair_counts() {
        assert_eq!(complementary_pair_family(&gf(2, 1), 4).unwrap().set_i.len(), 3);
        assert_eq!(complementary_pair_family(&gf(2, 2), 4).unwrap().set_i.len(), 9);
        assert_eq!(complementary_pair_family(&gf(2, 1), 6).unwrap().set_i.len(), 10);
        assert!(complementary_pair_family(&gf(3, 1), 4).is_err());
        let built = complementary_pair_family(&gf(2, 2), 4).unwrap();
        let enumerated = enumerate_index_sets(2, 2, 4, 2, &Budget::default()).unwrap();
        let mut a = built.set_i.clone();
        let mut b = enumerated.set_i.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
