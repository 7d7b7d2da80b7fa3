//! Prime-field helpers: primes with many roots of unity, CRT and rational
//! reconstruction.

use super::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod p");
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(a) {
            return n == a;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'outer: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^bits`, congruent to 1 mod `modulus`, largest first.
pub fn primes_one_mod(modulus: u64, bits: u32, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut k = ((1u64 << bits) - 1) / modulus;
    while out.len() < count && k > 0 {
        let p = k * modulus + 1;
        if is_prime(p) {
            out.push(p);
        }
        k -= 1;
    }
    out
}

/// A primitive `m`-th root of unity mod `p`, requires `m | p - 1`.
pub fn primitive_root_of_unity(m: u64, p: u64) -> u64 {
    assert_eq!((p - 1) % m, 0);
    let factors: Vec<u64> = (2..=m).filter(|&q| m.is_multiple_of(q) && (2..q).all(|d| q % d != 0)).collect();
    for g in 2..p {
        let c = pow_mod(g, (p - 1) / m, p);
        if factors.iter().all(|&q| pow_mod(c, m / q, p) != 1) {
            return c;
        }
    }
    unreachable!("no primitive root found")
}

pub fn rational_mod(x: &Rational, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let n = x.numer().mod_floor(&pb);
    let d = x.denom().mod_floor(&pb);
    let n: u64 = n.try_into().unwrap();
    let d: u64 = d.try_into().unwrap();
    mul_mod(n, inv_mod(d, p), p)
}

/// Combine residues `a mod m` and `b mod p`.
pub fn crt(a: &BigInt, m: &BigInt, b: u64, p: u64) -> BigInt {
    let pb = BigInt::from(p);
    let am: u64 = a.mod_floor(&pb).try_into().unwrap();
    let mm: u64 = m.mod_floor(&pb).try_into().unwrap();
    let diff = (b + p - am) % p;
    let t = mul_mod(diff, inv_mod(mm, p), p);
    a + m * BigInt::from(t)
}

/// Smallest-height rational congruent to `a` modulo `m`, if both numerator
/// and denominator fit below `sqrt(m/2)`.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let a = a.mod_floor(m);
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn roots_and_reconstruction() {
        let ps = primes_one_mod(24, 30, 3);
        assert_eq!(ps.len(), 3);
        for &p in &ps {
            assert_eq!(p % 24, 1);
            let w = primitive_root_of_unity(12, p);
            assert_eq!(pow_mod(w, 12, p), 1);
            assert_ne!(pow_mod(w, 6, p), 1);
            assert_ne!(pow_mod(w, 4, p), 1);
        }
        let x = rat(-355, 113);
        let (p, q) = (ps[0], ps[1]);
        let a = crt(&BigInt::from(rational_mod(&x, p)), &BigInt::from(p), rational_mod(&x, q), q);
        let m = BigInt::from(p) * BigInt::from(q);
        assert_eq!(rational_reconstruct(&a, &m), Some(x));
    }
}
