//! Multivariate polynomials over GF(q): parsing, evaluation, zero counting.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::budget::{saturating_pow, Budget};
use crate::gf::{Elem, FieldSpec, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("term of degree {degree} exceeds the degree bound {bound}")]
    DegreeBound { degree: u32, bound: u32 },
    #[error("variable X{index} out of range 1..={n}")]
    VariableIndex { index: usize, n: usize },
    #[error("expected a point with {expected} coordinates, got {got}")]
    PointLength { expected: usize, got: usize },
    #[error("element {0:?} does not belong to the polynomial's field")]
    ForeignElement(Elem),
    #[error("monomial has {got} exponents, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("enumeration of {needed} points exceeds the budget of {limit}")]
    Budget { needed: u64, limit: u64 },
    #[error(transparent)]
    Field(#[from] GfError),
}

/// An exponent vector. Ordered graded-lexicographically: by total degree,
/// then lexicographically on the exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Every exponent at most `cap`.
    pub fn is_capped(&self, cap: u32) -> bool {
        self.0.iter().all(|&e| e <= cap)
    }

    /// `target - self` when every component of `self` is at most `target`.
    pub fn complement(&self, target: u32) -> Option<Monomial> {
        self.0
            .iter()
            .map(|&e| target.checked_sub(e))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// All exponent vectors in n variables with total degree at most `d` and,
/// when given, every exponent at most `cap`; graded lexicographic order.
pub fn monomials(n: usize, d: u32, cap: Option<u32>) -> Vec<Monomial> {
    fn fill(rest: u32, cap: u32, cur: &mut Vec<u32>, n: usize, out: &mut Vec<Monomial>) {
        if cur.len() == n - 1 {
            if rest <= cap {
                cur.push(rest);
                out.push(Monomial(cur.clone()));
                cur.pop();
            }
            return;
        }
        for e in 0..=rest.min(cap) {
            cur.push(e);
            fill(rest - e, cap, cur, n, out);
            cur.pop();
        }
    }
    let cap = cap.unwrap_or(u32::MAX);
    let mut out = Vec::new();
    if n == 0 {
        out.push(Monomial(Vec::new()));
        return out;
    }
    let mut cur = Vec::with_capacity(n);
    for k in 0..=d {
        fill(k, cap, &mut cur, n, &mut out);
    }
    out
}

/// p-adic valuation; zero has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, t: u32) -> bool {
        self >= Valuation::Finite(t)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u32(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

pub fn nu_p(x: u128, p: u32) -> Valuation {
    if x == 0 {
        return Valuation::Infinite;
    }
    let p = p as u128;
    let (mut x, mut t) = (x, 0);
    while x % p == 0 {
        x /= p;
        t += 1;
    }
    Valuation::Finite(t)
}

/// A polynomial in `n` variables supported on monomials of total degree at
/// most the declared bound `d`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    field: FieldSpec,
    n: usize,
    d: u32,
    terms: BTreeMap<Monomial, Elem>,
}

impl MultiPoly {
    pub fn zero(field: &FieldSpec, n: usize, d: u32) -> Self {
        MultiPoly {
            field: field.clone(),
            n,
            d,
            terms: BTreeMap::new(),
        }
    }

    /// Sums the given terms, combining like monomials.
    pub fn from_terms<I>(field: &FieldSpec, n: usize, d: u32, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, Elem)>,
    {
        let mut f = MultiPoly::zero(field, n, d);
        for (u, c) in terms {
            f.add_term(u, c)?;
        }
        Ok(f)
    }

    pub fn add_term(&mut self, u: Monomial, c: Elem) -> Result<(), PolyError> {
        if u.arity() != self.n {
            return Err(PolyError::Arity {
                expected: self.n,
                got: u.arity(),
            });
        }
        if c.0 >= self.field.q() {
            return Err(PolyError::ForeignElement(c));
        }
        if u.degree() > self.d {
            return Err(PolyError::DegreeBound {
                degree: u.degree(),
                bound: self.d,
            });
        }
        if c.is_zero() {
            return Ok(());
        }
        let sum = match self.terms.get(&u) {
            Some(&old) => self.field.add(old, c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&u);
        } else {
            self.terms.insert(u, sum);
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The declared degree bound.
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Elem> {
        &self.terms
    }

    pub fn coefficient(&self, u: &Monomial) -> Elem {
        self.terms.get(u).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Actual total degree; `None` for the zero polynomial.
    pub fn effective_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// No variable appears with exponent q or more.
    pub fn is_reduced(&self) -> bool {
        let cap = self.field.q() - 1;
        self.terms.keys().all(|u| u.is_capped(cap))
    }

    pub fn scale(&self, c: Elem) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.field, self.n, self.d);
        if c.is_zero() {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(u, &a)| (u.clone(), self.field.mul(a, c)))
            .collect();
        out
    }

    pub fn evaluate(&self, x: &[Elem]) -> Result<Elem, PolyError> {
        if x.len() != self.n {
            return Err(PolyError::PointLength {
                expected: self.n,
                got: x.len(),
            });
        }
        if let Some(&bad) = x.iter().find(|e| e.0 >= self.field.q()) {
            return Err(PolyError::ForeignElement(bad));
        }
        Ok(self.eval_unchecked(x))
    }

    // 0^0 = 1 through pow
    fn eval_unchecked(&self, x: &[Elem]) -> Elem {
        let field = &self.field;
        self.terms.iter().fold(Elem::ZERO, |acc, (u, &a)| {
            let term = u.exps().iter().zip(x).fold(a, |t, (&e, &xi)| {
                if t.is_zero() || e == 0 {
                    t
                } else {
                    field.mul(t, field.pow(xi, e as u64))
                }
            });
            field.add(acc, term)
        })
    }

    /// Exact |Z(f)| over GF(q)^n. Points are visited in odometer order; large
    /// spaces are split by the first coordinate across the rayon pool.
    pub fn zero_count(&self, budget: &Budget) -> Result<u64, PolyError> {
        let q = self.field.q() as u64;
        let needed = saturating_pow(q, self.n as u64);
        if needed > budget.evaluations {
            return Err(PolyError::Budget {
                needed,
                limit: budget.evaluations,
            });
        }
        if self.n == 0 {
            return Ok(u64::from(self.eval_unchecked(&[]).is_zero()));
        }
        let count_slab = |first: u32| -> u64 {
            let mut x = vec![Elem::ZERO; self.n];
            x[0] = Elem(first);
            let mut zeros = 0u64;
            loop {
                if self.eval_unchecked(&x).is_zero() {
                    zeros += 1;
                }
                // odometer over coordinates 1..n, last coordinate fastest
                let mut k = self.n - 1;
                loop {
                    if k == 0 {
                        return zeros;
                    }
                    x[k].0 += 1;
                    if x[k].0 < q as u32 {
                        break;
                    }
                    x[k] = Elem::ZERO;
                    k -= 1;
                }
            }
        };
        if needed >= 1 << 16 {
            Ok((0..q as u32).into_par_iter().map(count_slab).sum())
        } else {
            Ok((0..q as u32).map(count_slab).sum())
        }
    }

    /// Hamming weight q^n - |Z(f)|.
    pub fn weight(&self, budget: &Budget) -> Result<u64, PolyError> {
        let total = saturating_pow(self.field.q() as u64, self.n as u64);
        Ok(total - self.zero_count(budget)?)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (u, &a) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let factors: Vec<String> = u
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        format!("X{}", j + 1)
                    } else {
                        format!("X{}^{}", j + 1, e)
                    }
                })
                .collect();
            let coeff = self.field.render(a);
            match (factors.is_empty(), a == Elem::ONE) {
                (true, _) => f.write_str(&coeff)?,
                (false, true) => f.write_str(&factors.join("*"))?,
                (false, false) => write!(f, "{}*{}", coeff, factors.join("*"))?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64, PolyError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number too large"))
    }

    fn coefficient(&mut self, field: &FieldSpec) -> Result<Elem, PolyError> {
        if self.peek() == Some(b'[') {
            let start = self.pos;
            while self.peek().is_some_and(|b| b != b']') {
                self.pos += 1;
            }
            if !self.eat(b']') {
                return Err(self.err("unterminated coefficient"));
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return Ok(field.parse_element(text)?);
        }
        let k = self.number()?;
        Ok(Elem((k % field.p() as u64) as u32))
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<(), PolyError> {
        if !(self.eat(b'X') || self.eat(b'x')) {
            return Err(self.err("expected a variable X<index>"));
        }
        let index = self.number()? as usize;
        if index == 0 || index > exps.len() {
            return Err(PolyError::VariableIndex { index, n: exps.len() });
        }
        let e = if self.eat(b'^') { self.number()? } else { 1 };
        let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
        exps[index - 1] += e;
        Ok(())
    }

    fn term(&mut self, field: &FieldSpec, n: usize) -> Result<(Monomial, Elem), PolyError> {
        let mut exps = vec![0u32; n];
        let mut coeff = Elem::ONE;
        if matches!(self.peek(), Some(b'0'..=b'9' | b'[')) {
            coeff = self.coefficient(field)?;
            if !self.eat(b'*') {
                return Ok((Monomial(exps), coeff));
            }
        }
        self.factor(&mut exps)?;
        loop {
            let had_star = self.eat(b'*');
            match self.peek() {
                Some(b'X' | b'x') => self.factor(&mut exps)?,
                _ if had_star => return Err(self.err("expected a variable after '*'")),
                _ => break,
            }
        }
        Ok((Monomial(exps), coeff))
    }
}

/// Parses a `+`-separated term list such as `"2*X1^2*X3 + X2 + 1"`.
/// Whitespace is ignored; integer coefficients are reduced mod p and
/// extension-field coefficients are written `[c0,...,c_{m-1}]`.
pub fn parse_poly(text: &str, field: &FieldSpec, n: usize, d: u32) -> Result<MultiPoly, PolyError> {
    let compact: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
    let mut parser = Parser {
        src: &compact,
        pos: 0,
    };
    if compact.is_empty() {
        return Err(parser.err("empty polynomial"));
    }
    let mut f = MultiPoly::zero(field, n, d);
    loop {
        let (u, c) = parser.term(field, n)?;
        f.add_term(u, c)?;
        if parser.peek().is_none() {
            return Ok(f);
        }
        if !parser.eat(b'+') {
            return Err(parser.err("expected '+'"));
        }
    }
}

/// One polynomial per line; blank lines and `#` comments are skipped.
pub fn parse_poly_file(text: &str, field: &FieldSpec, n: usize, d: u32) -> Result<Vec<MultiPoly>, PolyError> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(|line| parse_poly(line, field, n, d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, m: u32) -> FieldSpec {
        FieldSpec::new(p, m, None).unwrap()
    }

    #[test]
    fn parse_examples() {
        let f2 = gf(2, 1);
        let f = parse_poly("X1*X2 + X3*X4", &f2, 4, 2).unwrap();
        let expected: BTreeMap<_, _> = [
            (Monomial::new(vec![1, 1, 0, 0]), Elem(1)),
            (Monomial::new(vec![0, 0, 1, 1]), Elem(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(f.terms(), &expected);

        let f3 = gf(3, 1);
        let g = parse_poly("2*X1^2 + 1", &f3, 1, 2).unwrap();
        assert_eq!(g.coefficient(&Monomial::new(vec![2])), Elem(2));
        assert_eq!(g.coefficient(&Monomial::new(vec![0])), Elem(1));
        assert_eq!(g.terms().len(), 2);

        assert_eq!(
            parse_poly("X1^3", &f2, 1, 2).unwrap_err(),
            PolyError::DegreeBound { degree: 3, bound: 2 }
        );
    }

    #[test]
    fn parse_errors() {
        let f2 = gf(2, 1);
        assert!(matches!(
            parse_poly("X5", &f2, 4, 2),
            Err(PolyError::VariableIndex { index: 5, n: 4 })
        ));
        assert!(matches!(
            parse_poly("X1 +", &f2, 2, 2),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            parse_poly("X1 ** X2", &f2, 2, 2),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(parse_poly("", &f2, 2, 2), Err(PolyError::Syntax { .. })));
        assert!(matches!(
            parse_poly("Y1", &f2, 2, 2),
            Err(PolyError::Syntax { .. })
        ));
    }

    #[test]
    fn like_terms_cancel() {
        let f2 = gf(2, 1);
        assert!(parse_poly("X1+X1", &f2, 1, 1).unwrap().is_zero());
        let f = parse_poly("X1 X2 + X2*X1 + X1*X1", &f2, 2, 2).unwrap();
        assert_eq!(f.to_string(), "X1^2");
    }

    #[test]
    fn extension_coefficients() {
        let f4 = gf(2, 2);
        let f = parse_poly("[0,1]*X1*X2 + [1,1]", &f4, 2, 2).unwrap();
        assert_eq!(f.to_string(), "[0,1]*X1*X2 + [1,1]");
        assert!(matches!(
            parse_poly("[0,2]*X1", &f4, 1, 1),
            Err(PolyError::Field(_))
        ));
    }

    #[test]
    fn evaluate_examples() {
        let f2 = gf(2, 1);
        let f = parse_poly("X1*X2 + X3*X4", &f2, 4, 2).unwrap();
        assert_eq!(
            f.evaluate(&[Elem(1), Elem(1), Elem(0), Elem(0)]).unwrap(),
            Elem(1)
        );
        let z = MultiPoly::zero(&f2, 2, 2);
        assert_eq!(z.evaluate(&[Elem(1), Elem(0)]).unwrap(), Elem(0));
        let f3 = gf(3, 1);
        let g = parse_poly("X1^2 + 1", &f3, 1, 2).unwrap();
        assert_eq!(g.evaluate(&[Elem(1)]).unwrap(), Elem(2));
        // constant monomial at the origin
        let h = parse_poly("1", &f3, 2, 2).unwrap();
        assert_eq!(h.evaluate(&[Elem(0), Elem(0)]).unwrap(), Elem(1));
        assert!(matches!(g.evaluate(&[]), Err(PolyError::PointLength { .. })));
        assert!(matches!(
            g.evaluate(&[Elem(3)]),
            Err(PolyError::ForeignElement(_))
        ));
    }

    #[test]
    fn zero_count_examples() {
        let b = Budget::default();
        let f2 = gf(2, 1);
        let f = parse_poly("X1*X2 + X3*X4", &f2, 4, 2).unwrap();
        assert_eq!(f.zero_count(&b).unwrap(), 10);
        assert_eq!(f.weight(&b).unwrap(), 6);
        let f3 = gf(3, 1);
        assert_eq!(parse_poly("X1*X2", &f3, 2, 2).unwrap().zero_count(&b).unwrap(), 5);
        assert_eq!(MultiPoly::zero(&f3, 2, 2).zero_count(&b).unwrap(), 9);
        let tight = Budget::uniform(8);
        assert_eq!(
            MultiPoly::zero(&f3, 2, 2).zero_count(&tight).unwrap_err(),
            PolyError::Budget { needed: 9, limit: 8 }
        );
    }

    #[test]
    fn parallel_zero_count_matches_brute_force() {
        // 4^8 = 65536 points takes the rayon path
        let f4 = gf(2, 2);
        let f = parse_poly("X1*X2 + [0,1]*X3*X4 + X5^3 + X6*X7*X8 + [1,1]", &f4, 8, 3).unwrap();
        let mut brute = 0u64;
        let mut x = vec![Elem(0); 8];
        for idx in 0..65536u32 {
            let mut v = idx;
            for xi in x.iter_mut() {
                *xi = Elem(v % 4);
                v /= 4;
            }
            if f.evaluate(&x).unwrap().is_zero() {
                brute += 1;
            }
        }
        assert_eq!(f.zero_count(&Budget::default()).unwrap(), brute);
    }

    #[test]
    fn valuation() {
        assert_eq!(nu_p(10, 2), Valuation::Finite(1));
        assert_eq!(nu_p(0, 3), Valuation::Infinite);
        assert_eq!(nu_p(243, 3), Valuation::Finite(5));
        assert!(Valuation::Infinite.at_least(1000));
        assert!(!Valuation::Finite(2).at_least(3));
    }

    #[test]
    fn monomial_enumeration() {
        let all = monomials(2, 2, None);
        let exps: Vec<&[u32]> = all.iter().map(|u| u.exps()).collect();
        assert_eq!(
            exps,
            vec![&[0, 0][..], &[0, 1], &[1, 0], &[0, 2], &[1, 1], &[2, 0]]
        );
        assert_eq!(monomials(4, 2, Some(1)).len(), 11);
        assert_eq!(monomials(3, 2, None).len(), 10);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn file_format() {
        let f2 = gf(2, 1);
        let text = "# header\nX1*X2 + X3\n\n  X1   # trailing\n";
        let polys = parse_poly_file(text, &f2, 3, 2).unwrap();
        assert_eq!(polys.len(), 2);
        assert_eq!(polys[1].to_string(), "X1");
    }
}
