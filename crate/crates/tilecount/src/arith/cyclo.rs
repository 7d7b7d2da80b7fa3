use super::{lcm_u32, rational_to_f64, rational_to_string, parse_rational, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Integer coefficients of the M-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(m: u32) -> Vec<i64> {
    // x^m - 1 divided by every Phi_d with d | m, d < m
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![0i64; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = r[i + db] / b[db];
        q[i] = c;
        for j in 0..=db {
            r[i + j] -= c * b[j];
        }
    }
    q
}

struct Table {
    phi: usize,
    /// `pow[k]` = x^k mod Phi_M for 0 <= k < M
    pow: Vec<Vec<i64>>,
}

fn table(m: u32) -> Arc<Table> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Table>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&m) {
        return t.clone();
    }
    let phi_poly = cyclotomic_poly(m);
    let phi = phi_poly.len() - 1;
    let mut pow = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..m {
        pow.push(cur.clone());
        // multiply by x and reduce with the monic Phi_M
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        for j in (1..phi).rev() {
            next[j] = cur[j - 1];
        }
        for j in 0..phi {
            next[j] -= top * phi_poly[j];
        }
        cur = next;
    }
    let t = Arc::new(Table { phi, pow });
    cache.lock().unwrap().insert(m, t.clone());
    t
}

/// An element of Q(zeta_M) stored as a residue modulo Phi_M.
///
/// Binary operations on values of different orders embed both into the
/// field of lcm order first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclo {
    pub fn zero(order: u32) -> Self {
        let phi = euler_phi(order) as usize;
        Cyclo { order, coeffs: vec![Rational::zero(); phi] }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, r: Rational) -> Self {
        let mut c = Self::zero(order);
        c.coeffs[0] = r;
        c
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        Self::from_rational(order, Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_coeffs(order: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != euler_phi(order) as usize {
            return Err(Error::Invalid(format!(
                "order {order} needs {} coefficients, got {}",
                euler_phi(order),
                coeffs.len()
            )));
        }
        Ok(Cyclo { order, coeffs })
    }

    /// `zeta_M^e` for any integer exponent.
    pub fn zeta(order: u32, e: i64) -> Self {
        let t = table(order);
        let k = e.rem_euclid(order as i64) as usize;
        let coeffs = t.pow[k].iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        Cyclo { order, coeffs }
    }

    /// `zeta_N - zeta_N^{-1}` as an element of order N.
    pub fn theta(n: u32) -> Self {
        Self::zeta(n, 1) - Self::zeta(n, -1)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Embed into Q(zeta_target); the target order must be a multiple.
    pub fn lift(&self, target: u32) -> Result<Self> {
        if target == self.order {
            return Ok(self.clone());
        }
        if !target.is_multiple_of(self.order) {
            return Err(Error::OrderMismatch(self.order, target));
        }
        let step = (target / self.order) as i64;
        let t = table(target);
        let mut out = vec![Rational::zero(); t.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &t.pow[((i as i64 * step) % target as i64) as usize];
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * Rational::from_integer(BigInt::from(r));
                }
            }
        }
        Ok(Cyclo { order: target, coeffs: out })
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let l = lcm_u32(a.order, b.order);
        (a.lift(l).unwrap(), b.lift(l).unwrap())
    }

    /// Galois image under zeta -> zeta^e with gcd(e, M) = 1.
    pub fn galois(&self, e: i64) -> Self {
        let m = self.order as i64;
        let t = table(self.order);
        let mut out = vec![Rational::zero(); t.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &t.pow[((i as i64 * e).rem_euclid(m)) as usize];
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * Rational::from_integer(BigInt::from(r));
                }
            }
        }
        Cyclo { order: self.order, coeffs: out }
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclo { order: self.order, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.order, Rational::one() / r));
        }
        // solve (multiplication by self) * y = 1
        let phi = self.coeffs.len();
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(phi);
        for j in 0..phi {
            let basis = Self::zeta(self.order, j as i64);
            cols.push((self * &basis).coeffs);
        }
        let mut a: Vec<Vec<Rational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<Rational> = (0..phi).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        for c in 0..phi {
            let p = (c..phi).find(|&r| !a[r][c].is_zero()).ok_or(Error::DivisionByZero)?;
            a.swap(c, p);
            let piv = a[c][c].clone();
            for x in a[c].iter_mut() {
                *x /= &piv;
            }
            for r in 0..phi {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for k in c..=phi {
                        let v = &f * &a[c][k];
                        a[r][k] -= v;
                    }
                }
            }
        }
        Ok(Cyclo { order: self.order, coeffs: a.into_iter().map(|r| r[phi].clone()).collect() })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Value under the embedding zeta_M -> exp(2 pi i / M).
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let a = 2.0 * std::f64::consts::PI * i as f64 / self.order as f64;
            let v = rational_to_f64(c);
            re += v * a.cos();
            im += v * a.sin();
        }
        (re, im)
    }

    fn mul_raw(&self, other: &Self) -> Self {
        debug_assert_eq!(self.order, other.order);
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        let t = table(self.order);
        let m = self.order as usize;
        let mut prod = vec![Rational::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[(i + j) % m] += a * b;
                }
            }
        }
        let mut out = vec![Rational::zero(); t.phi];
        for (k, c) in prod.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < t.phi {
                out[k] += c;
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&t.pow[k]) {
                if r != 0 {
                    *o += c * Rational::from_integer(BigInt::from(r));
                }
            }
        }
        Cyclo { order: self.order, coeffs: out }
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = rational_to_string(c);
            parts.push(match i {
                0 => c,
                1 => format!("{c}*z{}", self.order),
                _ => format!("{c}*z{}^{i}", self.order),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: &Cyclo) -> Cyclo {
                let f: fn(&Cyclo, &Cyclo) -> Cyclo = $body;
                if self.order == rhs.order {
                    f(self, rhs)
                } else {
                    let (a, b) = Cyclo::common(self, rhs);
                    f(&a, &b)
                }
            }
        }
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: Cyclo) -> Cyclo {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: &Cyclo) -> Cyclo {
                (&self).$m(rhs)
            }
        }
        impl $tr<Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: Cyclo) -> Cyclo {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| Cyclo {
    order: a.order,
    coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect()
});
binop!(Sub, sub, |a, b| Cyclo {
    order: a.order,
    coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect()
});
binop!(Mul, mul, |a, b| a.mul_raw(b));
binop!(Div, div, |a, b| a.mul_raw(&b.inv().expect("division by zero cyclotomic")));

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        if self.order == rhs.order {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: &Cyclo) {
        if self.order == rhs.order {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x -= y;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&Cyclo> for Cyclo {
    fn mul_assign(&mut self, rhs: &Cyclo) {
        *self = &*self * rhs;
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo { order: self.order, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -(self.clone())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    order: u32,
    coeffs: Vec<String>,
}

impl Serialize for Cyclo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloJson { order: self.order, coeffs: self.coeffs.iter().map(rational_to_string).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclo {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CycloJson::deserialize(d)?;
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Cyclo::from_coeffs(j.order, coeffs).map_err(serde::de::Error::custom)
    }
}

/// `zeta_{M2}^{r*M2/M1}`, the image of `zeta_{M1}^r` in the larger field.
pub fn cyclo_embed(r: i64, source: u32, target: u32) -> Result<Cyclo> {
    if !target.is_multiple_of(source) {
        return Err(Error::OrderMismatch(source, target));
    }
    Ok(Cyclo::zeta(target, r * (target / source) as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn embedding_and_relations() {
        let z3 = cyclo_embed(1, 3, 6).unwrap();
        assert_eq!(z3, Cyclo::zeta(6, 2));
        let z = Cyclo::zeta(3, 1);
        assert!((&z * &z + &z + Cyclo::one(3)).is_zero());
        let th = Cyclo::theta(3);
        assert_eq!(&th * &th, Cyclo::from_int(3, -3));
        assert!(cyclo_embed(1, 4, 6).is_err());
    }

    #[test]
    fn conjugation() {
        assert_eq!(Cyclo::zeta(4, 1).conj(), -Cyclo::zeta(4, 1));
        assert_eq!(Cyclo::from_int(12, 5).conj(), Cyclo::from_int(12, 5));
        assert_eq!(Cyclo::theta(6).conj(), -Cyclo::theta(6));
    }

    #[test]
    fn inverse_of_zeta3() {
        let x = Cyclo::zeta(3, 1).inv().unwrap();
        assert_eq!(x, Cyclo::from_int(3, -1) - Cyclo::zeta(3, 1));
    }

    #[test]
    fn mixed_orders_lift() {
        let a = Cyclo::zeta(4, 1) + Cyclo::zeta(3, 1);
        assert_eq!(a.order(), 12);
        assert_eq!(&a - &Cyclo::zeta(12, 3), Cyclo::zeta(12, 4));
        assert_eq!(Cyclo::from_int(1, 2).lift(8).unwrap().as_rational(), Some(int(2)));
    }
}
