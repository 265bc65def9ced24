//! Reed-Muller codes R_q(d, n): dimension, codeword enumeration and the
//! brute-force census N_q(d, n; t) of codewords whose weight is divisible
//! by p^t.

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::budget::Budget;
use crate::gf::{Elem, FieldSpec};
use crate::mpoly::{monomials, nu_p, Monomial, MultiPoly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RmError {
    #[error("degree {d} outside [-1, {max}] for n = {n}, q = {q}")]
    DegreeRange { d: i64, n: u32, q: u64, max: u64 },
    #[error("n must be positive")]
    NoVariables,
    #[error("{what} needs {needed} steps, budget is {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u64,
    },
    #[error("dimension formula overflowed")]
    Overflow,
    #[error("codeword range {start}..{end} exceeds the {total} codewords")]
    Range { start: u128, end: u128, total: u128 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

/// dim R_q(d, n) = sum_{j <= floor(d/q)} (-1)^j C(n, j) C(d - qj + n, n),
/// with dim R_q(-1, n) = 0.
pub fn rm_dim(q: u64, d: i64, n: u32) -> Result<u128, RmError> {
    let max = n as u64 * (q - 1);
    if d < -1 || d > max as i64 {
        return Err(RmError::DegreeRange { d, n, q, max });
    }
    if d == -1 {
        return Ok(0);
    }
    let d = d as u64;
    let mut total: i128 = 0;
    for j in 0..=(d / q).min(n as u64) {
        let term = binomial(n as u64, j)
            .checked_mul(binomial(d - q * j + n as u64, n as u64))
            .ok_or(RmError::Overflow)? as i128;
        total = if j % 2 == 0 { total + term } else { total - term };
    }
    Ok(total as u128)
}

/// R_q(d, n) with its monomial basis in graded lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMParams {
    field: FieldSpec,
    d: u32,
    n: usize,
    basis: Vec<Monomial>,
}

impl RMParams {
    pub fn new(field: &FieldSpec, d: u32, n: usize) -> Result<Self, RmError> {
        if n == 0 {
            return Err(RmError::NoVariables);
        }
        let q = field.q() as u64;
        let max = n as u64 * (q - 1);
        if d as u64 > max {
            return Err(RmError::DegreeRange {
                d: d as i64,
                n: n as u32,
                q,
                max,
            });
        }
        let basis = monomials(n, d, Some(field.q() - 1));
        Ok(RMParams {
            field: field.clone(),
            d,
            n,
            basis,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// q^dim, when it fits.
    pub fn size(&self) -> Option<u128> {
        (self.field.q() as u128).checked_pow(self.dim() as u32)
    }

    pub fn size_big(&self) -> BigUint {
        BigUint::from(self.field.q()).pow(self.dim() as u32)
    }

    /// The codeword at odometer position `index`: base-q digits of the
    /// index, first basis monomial least significant, are the coefficients.
    pub fn codeword(&self, index: u128) -> MultiPoly {
        let q = self.field.q() as u128;
        let mut rest = index;
        let mut f = MultiPoly::zero(&self.field, self.n, self.d);
        for u in &self.basis {
            let c = Elem((rest % q) as u32);
            rest /= q;
            f.add_term(u.clone(), c)
                .expect("basis monomials respect the bound");
        }
        f
    }

    /// A codeword with independent uniform coefficients on every basis
    /// monomial.
    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> MultiPoly {
        let q = self.field.q();
        let mut f = MultiPoly::zero(&self.field, self.n, self.d);
        for u in &self.basis {
            let c = Elem(rng.gen_range(0..q));
            f.add_term(u.clone(), c)
                .expect("basis monomials respect the bound");
        }
        f
    }

    fn point_count(&self) -> u64 {
        (self.field.q() as u64).pow(self.n as u32)
    }

    /// Values of every basis monomial at every point, points ordered with the
    /// first coordinate least significant.
    fn value_tables(&self) -> Vec<Vec<u32>> {
        let q = self.field.q();
        let points = self.point_count() as usize;
        self.basis
            .iter()
            .map(|u| {
                (0..points)
                    .map(|idx| {
                        let mut v = idx as u32;
                        let mut acc = Elem::ONE;
                        for &e in u.exps() {
                            let x = Elem(v % q);
                            v /= q;
                            if e > 0 {
                                acc = self.field.mul(acc, self.field.pow(x, e as u64));
                            }
                        }
                        acc.0
                    })
                    .collect()
            })
            .collect()
    }
}

/// Codewords in odometer order over a sub-range of positions, so long sweeps
/// can be split and resumed.
pub struct Codewords {
    params: RMParams,
    next: u128,
    end: u128,
}

impl Codewords {
    pub fn position(&self) -> u128 {
        self.next
    }
}

impl Iterator for Codewords {
    type Item = MultiPoly;

    fn next(&mut self) -> Option<MultiPoly> {
        if self.next >= self.end {
            return None;
        }
        let f = self.params.codeword(self.next);
        self.next += 1;
        Some(f)
    }
}

pub fn enumerate_codewords(params: &RMParams, budget: &Budget) -> Result<Codewords, RmError> {
    let total = codeword_total(params, budget)?;
    codeword_range(params, 0, total)
}

/// Positions `start..end` of the full odometer sequence.
pub fn codeword_range(params: &RMParams, start: u128, end: u128) -> Result<Codewords, RmError> {
    let total = params.size().ok_or(RmError::Overflow)?;
    if start > end || end > total {
        return Err(RmError::Range { start, end, total });
    }
    Ok(Codewords {
        params: params.clone(),
        next: start,
        end,
    })
}

fn codeword_total(params: &RMParams, budget: &Budget) -> Result<u128, RmError> {
    match params.size() {
        Some(total) if total <= budget.evaluations as u128 => Ok(total),
        other => Err(RmError::Budget {
            what: "codeword enumeration",
            needed: other.unwrap_or(u128::MAX),
            limit: budget.evaluations,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMethod {
    Brute,
    Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusResult {
    pub q: u32,
    pub d: u32,
    pub n: usize,
    pub t: u32,
    pub count: BigUint,
    pub total: BigUint,
    pub method: CensusMethod,
}

/// For each zero count z, whether nu_p(q^n - z) >= t.
fn divisible_by_zero_count(points: u64, p: u32, t: u32) -> Vec<bool> {
    (0..=points)
        .map(|z| nu_p((points - z) as u128, p).at_least(t))
        .collect()
}

/// How many leading basis coefficients to fix per chunk.
fn split_depth(dim: usize, q: u64, jobs: usize) -> usize {
    if jobs <= 1 {
        return 0;
    }
    let mut k = 0;
    let mut chunks = 1u64;
    while k < dim && chunks < 8 * jobs as u64 {
        chunks *= q;
        k += 1;
    }
    k
}

pub(crate) fn run_in_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> T {
    if jobs <= 1 {
        return work();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

/// N_q(d, n; t) by sweeping every codeword. The value table of the current
/// codeword over GF(q)^n is updated in place as one basis coefficient changes
/// at a time (Gray order over bit-packed tables for q = 2, coefficient
/// odometer otherwise). With `jobs > 1` the sweep is split on the leading
/// coefficients; the total does not depend on the split.
pub fn census_brute(
    params: &RMParams,
    t: u32,
    budget: &Budget,
    jobs: usize,
) -> Result<CensusResult, RmError> {
    let histogram = zero_count_histogram(params, budget, jobs)?;
    let ok = divisible_by_zero_count(params.point_count(), params.field.p(), t);
    let count: u64 = histogram
        .iter()
        .zip(&ok)
        .filter(|(_, &ok)| ok)
        .map(|(&h, _)| h)
        .sum();
    Ok(CensusResult {
        q: params.field.q(),
        d: params.d,
        n: params.n,
        t,
        count: BigUint::from(count),
        total: params.size_big(),
        method: CensusMethod::Brute,
    })
}

/// Entry z is the number of codewords with exactly z zeros over GF(q)^n.
pub fn zero_count_histogram(params: &RMParams, budget: &Budget, jobs: usize) -> Result<Vec<u64>, RmError> {
    let q = params.field.q() as u64;
    let points = params.point_count();
    let needed = params.size().and_then(|s| s.checked_mul(points as u128));
    match needed {
        Some(n) if n <= budget.evaluations as u128 => {}
        other => {
            return Err(RmError::Budget {
                what: "census",
                needed: other.unwrap_or(u128::MAX),
                limit: budget.evaluations,
            })
        }
    }
    let tables = params.value_tables();
    Ok(run_in_pool(jobs, || {
        if q == 2 {
            histogram_gf2(params, &tables, jobs)
        } else {
            histogram_odometer(params, &tables, jobs)
        }
    }))
}

fn merge(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

fn histogram_gf2(params: &RMParams, tables: &[Vec<u32>], jobs: usize) -> Vec<u64> {
    let points = params.point_count() as usize;
    let words = points.div_ceil(64);
    let packed: Vec<Vec<u64>> = tables
        .iter()
        .map(|tab| {
            let mut bits = vec![0u64; words];
            for (i, &v) in tab.iter().enumerate() {
                if v != 0 {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            bits
        })
        .collect();
    let dim = params.dim();
    let high = split_depth(dim, 2, jobs);
    let low = dim - high;
    let chunk = |prefix: u64| -> Vec<u64> {
        let mut hist = vec![0u64; points + 1];
        let mut cur = vec![0u64; words];
        for b in 0..high {
            if prefix >> b & 1 == 1 {
                for (c, &w) in cur.iter_mut().zip(&packed[low + b]) {
                    *c ^= w;
                }
            }
        }
        let ones = |cur: &[u64]| cur.iter().map(|w| w.count_ones()).sum::<u32>() as usize;
        hist[points - ones(&cur)] += 1;
        for k in 1..(1u64 << low) {
            let flip = k.trailing_zeros() as usize;
            for (c, &w) in cur.iter_mut().zip(&packed[flip]) {
                *c ^= w;
            }
            hist[points - ones(&cur)] += 1;
        }
        hist
    };
    let prefixes = 0..(1u64 << high);
    let empty = || vec![0u64; points + 1];
    if jobs > 1 {
        prefixes.into_par_iter().map(chunk).reduce(empty, merge)
    } else {
        prefixes.map(chunk).fold(empty(), merge)
    }
}

fn histogram_odometer(params: &RMParams, tables: &[Vec<u32>], jobs: usize) -> Vec<u64> {
    let field = &params.field;
    let q = field.q();
    let dim = params.dim();
    let points = params.point_count() as usize;
    let high = split_depth(dim, q as u64, jobs);
    let low = dim - high;
    let apply = |cur: &mut [u32], zeros: &mut usize, b: usize, delta: Elem| {
        for (v, &t) in cur.iter_mut().zip(&tables[b]) {
            if t == 0 {
                continue;
            }
            let before = *v == 0;
            *v = field.add(Elem(*v), field.mul(delta, Elem(t))).0;
            match (before, *v == 0) {
                (true, false) => *zeros -= 1,
                (false, true) => *zeros += 1,
                _ => {}
            }
        }
    };
    let chunk = |prefix: u64| -> Vec<u64> {
        let mut hist = vec![0u64; points + 1];
        let mut cur = vec![0u32; points];
        let mut zeros = points;
        let mut rest = prefix;
        for b in 0..high {
            let c = Elem((rest % q as u64) as u32);
            rest /= q as u64;
            if !c.is_zero() {
                apply(&mut cur, &mut zeros, low + b, c);
            }
        }
        let mut digits = vec![0u32; low];
        hist[zeros] += 1;
        'sweep: loop {
            let mut b = 0;
            loop {
                if b == low {
                    break 'sweep;
                }
                let old = Elem(digits[b]);
                let new = Elem((digits[b] + 1) % q);
                digits[b] = new.0;
                apply(&mut cur, &mut zeros, b, field.sub(new, old));
                if !new.is_zero() {
                    break;
                }
                b += 1;
            }
            hist[zeros] += 1;
        }
        hist
    };
    let prefixes = 0..(q as u64).pow(high as u32);
    let empty = || vec![0u64; points + 1];
    if jobs > 1 {
        prefixes.into_par_iter().map(chunk).reduce(empty, merge)
    } else {
        prefixes.map(chunk).fold(empty(), merge)
    }
}

/// Reference census that rebuilds and re-evaluates every codeword.
pub fn census_naive(params: &RMParams, t: u32, budget: &Budget) -> Result<CensusResult, RmError> {
    let p = params.field.p();
    let points = params.point_count();
    let mut count = 0u64;
    for f in enumerate_codewords(params, budget)? {
        let weight = points - f.zero_count(budget)?;
        if nu_p(weight as u128, p).at_least(t) {
            count += 1;
        }
    }
    Ok(CensusResult {
        q: params.field.q(),
        d: params.d,
        n: params.n,
        t,
        count: BigUint::from(count),
        total: params.size_big(),
        method: CensusMethod::Brute,
    })
}
