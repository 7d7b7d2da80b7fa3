//! Symmetric group characters by Murnaghan–Nakayama, dimensions, central
//! characters, rim-hook signs and the constants `c_t`.

use crate::arith::{factorial, Radical, Rational};
use crate::error::{Error, Result};
use crate::partitions::Partition;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cell::RefCell;
use std::collections::HashMap;

/// Memo table for Murnaghan–Nakayama recursions, keyed by the outer and
/// inner bead masks and the remaining content.
#[derive(Default)]
pub struct CharacterCache {
    memo: HashMap<(u128, u128, Vec<u32>), i128>,
}

impl CharacterCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.memo.clear();
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    fn rec(&mut self, outer: u128, inner: u128, content: &[u32]) -> i128 {
        if content.is_empty() {
            return (outer == inner) as i128;
        }
        let key = (outer, inner, content.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let t = content[0];
        let mut total: i128 = 0;
        let mut bits = outer;
        while bits != 0 {
            let x = bits.trailing_zeros();
            bits &= bits - 1;
            if x < t {
                continue;
            }
            let y = x - t;
            if outer >> y & 1 == 1 {
                continue;
            }
            let moved = outer ^ (1u128 << x) ^ (1u128 << y);
            if !dominates(moved, inner) {
                continue;
            }
            let between = outer & (((1u128 << x) - 1) & !((1u128 << (y + 1)) - 1));
            let v = self.rec(moved, inner, &content[1..]);
            if between.count_ones().is_multiple_of(2) {
                total = total.checked_add(v).expect("character overflow");
            } else {
                total = total.checked_sub(v).expect("character overflow");
            }
        }
        self.memo.insert(key, total);
        total
    }

    pub fn chi_skew(&mut self, outer: &Partition, inner: &Partition, content: &[u32]) -> Result<i128> {
        if !outer.contains(inner) {
            return Ok(0);
        }
        let cells = outer.size() - inner.size();
        if content.iter().map(|&x| x as usize).sum::<usize>() != cells {
            return Err(Error::Invalid(format!(
                "content {content:?} does not match {cells} cells of {outer}/{inner}"
            )));
        }
        let l = outer.len().max(1);
        let width = outer.part(1) as usize + l;
        if width > 127 {
            return Err(Error::Unsupported(format!("shape {outer} too wide for the bead mask")));
        }
        let mut c: Vec<u32> = content.iter().copied().filter(|&x| x > 0).collect();
        c.sort_unstable_by(|a, b| b.cmp(a));
        Ok(self.rec(mask(outer, l), mask(inner, l), &c))
    }

    pub fn chi(&mut self, lambda: &Partition, content: &[u32]) -> Result<i128> {
        self.chi_skew(lambda, &Partition::empty(), content)
    }
}

fn mask(p: &Partition, l: usize) -> u128 {
    p.positions(l).iter().fold(0u128, |m, &x| m | 1u128 << (x + l as i64 - 1))
}

/// Whether the k-th highest bead of `a` is at least the k-th highest of `b`.
fn dominates(a: u128, b: u128) -> bool {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let ha = 127 - a.leading_zeros();
        let hb = 127 - b.leading_zeros();
        if ha < hb {
            return false;
        }
        a &= !(1u128 << ha);
        b &= !(1u128 << hb);
    }
    true
}

thread_local! {
    static CACHE: RefCell<CharacterCache> = RefCell::new(CharacterCache::new());
}

/// Drop the thread-local character memo.
pub fn clear_cache() {
    CACHE.with(|c| c.borrow_mut().clear());
}

pub fn chi(lambda: &Partition, content: &[u32]) -> Result<i128> {
    CACHE.with(|c| c.borrow_mut().chi(lambda, content))
}

pub fn chi_skew(outer: &Partition, inner: &Partition, content: &[u32]) -> Result<i128> {
    CACHE.with(|c| c.borrow_mut().chi_skew(outer, inner, content))
}

pub fn dim(lambda: &Partition) -> BigInt {
    let h: BigInt = lambda.hooks().iter().fold(BigInt::one(), |acc, &x| acc * x);
    factorial(lambda.size() as u64) / h
}

/// Number of standard tableaux of the skew shape `outer / inner`.
pub fn dim_skew(outer: &Partition, inner: &Partition) -> BigInt {
    if !outer.contains(inner) {
        return BigInt::zero();
    }
    if inner.is_empty() {
        return dim(outer);
    }
    let ones = vec![1u32; outer.size() - inner.size()];
    BigInt::from(chi_skew(outer, inner, &ones).expect("skew dimension"))
}

/// `prod_m (multiplicity of m)!`
pub fn aut(mu: &[u32]) -> BigInt {
    let mut counts: HashMap<u32, u64> = HashMap::new();
    for &x in mu {
        *counts.entry(x).or_default() += 1;
    }
    counts.values().fold(BigInt::one(), |acc, &m| acc * factorial(m))
}

/// Size of the conjugacy class of cycle type `mu` in `S_|mu|`.
pub fn class_size(mu: &[u32]) -> BigInt {
    let n: u64 = mu.iter().map(|&x| x as u64).sum();
    let prod: BigInt = mu.iter().fold(BigInt::one(), |acc, &x| acc * x);
    factorial(n) / (prod * aut(mu))
}

/// Sign of any full peeling of `t`-rim hooks from `lambda` down to its core.
pub fn sgn_t(lambda: &Partition, t: u32) -> i32 {
    let count = lambda.len() + t as usize;
    let mut beads = lambda.positions(count);
    let floor = 1 - count as i64;
    let t = t as i64;
    let mut sign = 1;
    loop {
        let mut moved = false;
        beads.sort_unstable_by(|a, b| b.cmp(a));
        for k in 0..beads.len() {
            let x = beads[k];
            let y = x - t;
            if y >= floor && !beads.contains(&y) {
                let crossed = beads.iter().filter(|&&b| b > y && b < x).count();
                if crossed % 2 == 1 {
                    sign = -sign;
                }
                beads[k] = y;
                moved = true;
                break;
            }
        }
        if !moved {
            return sign;
        }
    }
}

/// `|chi^lambda(t,...,t)|` from the quotient hook formula.
pub fn abs_chi_t(lambda: &Partition, t: u32) -> BigInt {
    let n = lambda.size();
    if !n.is_multiple_of(t as usize) || !lambda.core_and_quotients(t).core.is_empty() {
        return BigInt::zero();
    }
    let k = (n / t as usize) as u64;
    let divisible: BigInt =
        lambda.hooks().iter().filter(|&&h| h % t == 0).fold(BigInt::one(), |acc, &h| acc * h);
    BigInt::from(t).pow(k as u32) * factorial(k) / divisible
}

/// Pad `nu` with ones up to `n`; `None` if it is already larger.
pub fn pad_with_ones(nu: &[u32], n: usize) -> Option<Vec<u32>> {
    let s: usize = nu.iter().map(|&x| x as usize).sum();
    if s > n {
        return None;
    }
    let mut v = nu.to_vec();
    v.extend(std::iter::repeat_n(1, n - s));
    Some(v)
}

/// `f_nu(lambda) = |C_nu| chi^lambda(nu) / dim lambda`, padding `nu` with ones.
pub fn central_character(nu: &[u32], lambda: &Partition) -> Rational {
    let Some(full) = pad_with_ones(nu, lambda.size()) else {
        return Rational::zero();
    };
    let c = chi(lambda, &full).expect("central character");
    Rational::new(class_size(&full) * BigInt::from(c), dim(lambda))
}

pub fn skew_central_character(nu: &[u32], outer: &Partition, inner: &Partition) -> Rational {
    if !outer.contains(inner) {
        return Rational::zero();
    }
    let cells = outer.size() - inner.size();
    if cells == 0 {
        return Rational::one();
    }
    let Some(full) = pad_with_ones(nu, cells) else {
        return Rational::zero();
    };
    let c = chi_skew(outer, inner, &full).expect("skew character");
    Rational::new(class_size(&full) * BigInt::from(c), dim_skew(outer, inner))
}

/// `c_t(lambda) = sgn_t / t^{|lambda|/t} * |lambda|!/dim * prod dim q_i/|q_i|!`,
/// which is `f_{t,...,t}(lambda)` when `lambda` is `t`-decomposable.
///
/// The power of `t` is fractional when `t` does not divide `|lambda|`, so the
/// value is returned as a [`Radical`].
pub fn c_t(lambda: &Partition, t: u32) -> Radical {
    let cq = lambda.core_and_quotients(t);
    let mut r = Rational::new(factorial(lambda.size() as u64), dim(lambda));
    for q in &cq.quotients {
        r *= Rational::new(dim(q), factorial(q.size() as u64));
    }
    r *= Rational::from_integer(BigInt::from(sgn_t(lambda, t)));
    Radical::power(t as u64, Rational::new(-BigInt::from(lambda.size()), BigInt::from(t))).scale(&r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(dim(&p("3,2")), BigInt::from(5));
        assert_eq!(chi(&p("2,2"), &[2, 2]).unwrap(), 2);
        assert_eq!(chi(&p("2,1"), &[3]).unwrap(), -1);
        assert_eq!(chi(&p("1,1"), &[2]).unwrap(), -1);
        assert!(chi(&p("2,1"), &[2]).is_err());
        assert_eq!(sgn_t(&p("2,1"), 3), -1);
        assert_eq!(sgn_t(&p("3"), 3), 1);
        assert_eq!(sgn_t(&Partition::empty(), 5), 1);
        assert_eq!(abs_chi_t(&p("2,1"), 3), BigInt::from(1));
        assert_eq!(abs_chi_t(&p("1"), 2), BigInt::zero());
    }

    #[test]
    fn central_characters() {
        assert_eq!(central_character(&[2], &p("3")), rat(3, 1));
        assert_eq!(central_character(&[2], &p("2,1")), rat(0, 1));
        assert_eq!(central_character(&[3], &p("2")), rat(0, 1));
        assert_eq!(skew_central_character(&[], &p("2,1"), &p("2,1")), rat(1, 1));
        assert_eq!(skew_central_character(&[2], &p("2,2"), &Partition::empty()), central_character(&[2], &p("2,2")));
    }

    #[test]
    fn c_t_values() {
        assert_eq!(c_t(&p("3"), 3).to_rational(), Some(rat(2, 1)));
        assert_eq!(c_t(&Partition::empty(), 4).to_rational(), Some(rat(1, 1)));
        for n in [3usize, 6, 9] {
            for l in crate::partitions::enumerate_with_core(&Partition::empty(), 3, n).unwrap() {
                assert_eq!(c_t(&l, 3).to_rational(), Some(central_character(&vec![3; n / 3], &l)));
            }
        }
    }

    #[test]
    fn c_t_independent_of_nu() {
        use crate::partitions::enumerate_partitions;
        use crate::shifted::shifted_schur;
        for t in [2u32, 3] {
            for n in 0..=8 {
                for l in enumerate_partitions(n) {
                    let cq = l.core_and_quotients(t);
                    let expect = c_t(&l, t);
                    for m in (cq.core.size()..=n).step_by(t as usize) {
                        for nu in enumerate_partitions(m) {
                            if !l.contains(&nu) || nu.core_and_quotients(t).core != cq.core {
                                continue;
                            }
                            let nq = nu.core_and_quotients(t);
                            if nq.quotients.iter().zip(&cq.quotients).any(|(a, b)| !b.contains(a)) {
                                continue;
                            }
                            let content = vec![t; (n - m) / t as usize];
                            let mut r = skew_central_character(&content, &l, &nu)
                                * shifted_schur(&nu, &l)
                                * Rational::from_integer(BigInt::from(sgn_t(&nu, t)));
                            for (a, b) in nq.quotients.iter().zip(&cq.quotients) {
                                r /= shifted_schur(a, b);
                            }
                            let power = Radical::power(t as u64, Rational::new(-BigInt::from(m), BigInt::from(t)));
                            assert_eq!(power.scale(&r), expect, "t={t} lambda={l} nu={nu}");
                        }
                    }
                }
            }
        }
    }
}
