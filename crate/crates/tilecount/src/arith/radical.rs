use super::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A rational times a product of prime powers with fractional exponents in
/// `[0, 1)`. Products of `t^{k/t}` factors land here until they collapse
/// back to a rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radical {
    coeff: Rational,
    /// prime -> exponent numerator over `den`, kept in `[0, 1)`
    exps: BTreeMap<u64, Rational>,
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl Radical {
    pub fn from_rational(r: Rational) -> Self {
        Radical { coeff: r, exps: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// `base^exponent` for a positive integer base and rational exponent.
    pub fn power(base: u64, exponent: Rational) -> Self {
        let mut out = Self::one();
        for (p, e) in factor(base) {
            let ex = &exponent * Rational::from_integer(BigInt::from(e));
            out = out.mul(&Radical::prime_power(p, ex));
        }
        out
    }

    fn prime_power(p: u64, e: Rational) -> Self {
        let fl = e.floor();
        let frac = &e - &fl;
        let k: BigInt = fl.to_integer();
        let pb = Rational::from_integer(BigInt::from(p));
        let coeff = pow_rational(&pb, &k);
        let mut exps = BTreeMap::new();
        if !frac.is_zero() {
            exps.insert(p, frac);
        }
        Radical { coeff, exps }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Radical { coeff: &self.coeff * &other.coeff, exps: self.exps.clone() };
        for (p, e) in &other.exps {
            let total = out.exps.remove(p).unwrap_or_else(Rational::zero) + e;
            let r = Radical::prime_power(*p, total);
            out.coeff *= r.coeff;
            out.exps.extend(r.exps);
        }
        if out.coeff.is_zero() {
            out.exps.clear();
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = self.clone();
        out.coeff *= r;
        if out.coeff.is_zero() {
            out.exps.clear();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.exps.is_empty() {
            Some(self.coeff.clone())
        } else {
            None
        }
    }

    /// Sum when both summands carry the same radical part.
    pub fn try_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.exps != other.exps {
            return None;
        }
        let mut out = Radical { coeff: &self.coeff + &other.coeff, exps: self.exps.clone() };
        if out.coeff.is_zero() {
            out.exps.clear();
        }
        Some(out)
    }
}

fn pow_rational(b: &Rational, k: &BigInt) -> Rational {
    let neg = k < &BigInt::zero();
    let mut e: BigInt = if neg { -k } else { k.clone() };
    let mut acc = Rational::one();
    let mut base = b.clone();
    let two = BigInt::from(2);
    while !e.is_zero() {
        if e.is_odd() {
            acc *= &base;
        }
        base = &base * &base;
        e = e.div_floor(&two);
    }
    if neg {
        Rational::one() / acc
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn powers_collapse() {
        let a = Radical::power(3, rat(1, 3));
        assert!(a.to_rational().is_none());
        let b = a.mul(&a).mul(&a);
        assert_eq!(b.to_rational(), Some(rat(3, 1)));
        let c = Radical::power(4, rat(-1, 4)).mul(&Radical::power(2, rat(1, 2)));
        assert_eq!(c.to_rational(), Some(rat(1, 1)));
        assert_eq!(Radical::power(6, rat(-2, 1)).to_rational(), Some(rat(1, 36)));
    }
}
