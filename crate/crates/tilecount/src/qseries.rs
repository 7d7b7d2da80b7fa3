//! Truncated q-series over cyclotomic fields and the classical series built
//! from them: eta products, the theta function around torsion points, and
//! the Eisenstein series extracted from its logarithm.

use crate::arith::{factorial, rational_to_f64, rational_to_string, parse_rational, Cyclo, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write as _;

/// `sum_n c_n q^{offset + n/unit}` for `0 <= n < coeffs.len()`; the series
/// is known exactly below exponent `offset + len/unit`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    order: u32,
    unit: u32,
    offset: Rational,
    coeffs: Vec<Cyclo>,
}

impl QSeries {
    pub fn new(order: u32, unit: u32, offset: Rational, coeffs: Vec<Cyclo>) -> Result<Self> {
        if unit == 0 {
            return Err(Error::Invalid("unit must be positive".into()));
        }
        let coeffs = coeffs.into_iter().map(|c| c.lift(order)).collect::<Result<Vec<_>>>()?;
        Ok(QSeries { order, unit, offset, coeffs })
    }

    /// Integer exponents, no offset.
    pub fn from_coeffs(order: u32, coeffs: Vec<Cyclo>) -> Result<Self> {
        Self::new(order, 1, Rational::zero(), coeffs)
    }

    pub fn from_rationals(coeffs: &[Rational]) -> Self {
        QSeries {
            order: 1,
            unit: 1,
            offset: Rational::zero(),
            coeffs: coeffs.iter().map(|c| Cyclo::from_rational(1, c.clone())).collect(),
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_rationals(&coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect::<Vec<_>>())
    }

    pub fn zero(order: u32, len: usize) -> Self {
        QSeries { order, unit: 1, offset: Rational::zero(), coeffs: vec![Cyclo::zero(order); len] }
    }

    pub fn one(order: u32, len: usize) -> Self {
        let mut s = Self::zero(order, len);
        if len > 0 {
            s.coeffs[0] = Cyclo::one(order);
        }
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn unit(&self) -> u32 {
        self.unit
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Cyclo] {
        &self.coeffs
    }

    /// Coefficient at index `n`, i.e. of `q^{offset + n/unit}`.
    pub fn coeff(&self, n: usize) -> &Cyclo {
        &self.coeffs[n]
    }

    /// The exclusive exponent up to which the series is known.
    pub fn truncation(&self) -> Rational {
        &self.offset + Rational::new(BigInt::from(self.coeffs.len()), BigInt::from(self.unit))
    }

    pub fn exponent(&self, n: usize) -> Rational {
        &self.offset + Rational::new(BigInt::from(n), BigInt::from(self.unit))
    }

    pub fn with_order(&self, order: u32) -> Result<Self> {
        Self::new(order, self.unit, self.offset.clone(), self.coeffs.clone())
    }

    pub fn truncate(&self, len: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(len);
        s
    }

    fn align(&self, o: &Self) -> Result<(Self, Self)> {
        if self.unit != o.unit {
            return Err(Error::Invalid(format!("units differ: {} vs {}", self.unit, o.unit)));
        }
        let m = crate::arith::lcm_u32(self.order, o.order);
        Ok((self.with_order(m)?, o.with_order(m)?))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let (a, b) = self.align(o)?;
        if a.offset != b.offset {
            return Err(Error::Invalid("offsets differ".into()));
        }
        let len = a.len().min(b.len());
        let coeffs = (0..len).map(|i| &a.coeffs[i] + &b.coeffs[i]).collect();
        Ok(QSeries { coeffs, ..a })
    }

    pub fn neg(&self) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        let m = crate::arith::lcm_u32(self.order, c.order());
        QSeries {
            order: m,
            unit: self.unit,
            offset: self.offset.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|x| x.scale(r)).collect(), ..self.clone() }
    }

    /// Product; offsets add and the known range is the smaller one.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let (a, b) = self.align(o)?;
        let len = a.len().min(b.len());
        let mut coeffs = vec![Cyclo::zero(a.order); len];
        for (i, x) in a.coeffs.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                if !y.is_zero() {
                    coeffs[i + j] += &(x * y);
                }
            }
        }
        Ok(QSeries { order: a.order, unit: a.unit, offset: &a.offset + &b.offset, coeffs })
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = QSeries { offset: Rational::zero(), ..Self::one(self.order, self.len()) };
        acc.unit = self.unit;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::Invalid("empty series".into()));
        }
        let inv0 = self.coeffs[0].inv()?;
        let len = self.len();
        let mut b: Vec<Cyclo> = Vec::with_capacity(len);
        b.push(inv0.clone());
        for k in 1..len {
            let mut s = Cyclo::zero(self.order);
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s += &(&self.coeffs[j] * &b[k - j]);
                }
            }
            b.push(-(&s * &inv0));
        }
        Ok(QSeries { order: self.order, unit: self.unit, offset: -self.offset.clone(), coeffs: b })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inverse()?)
    }

    /// `q -> q^s`.
    pub fn substitute(&self, s: u32) -> Self {
        let mut coeffs = vec![Cyclo::zero(self.order); self.len() * s as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * s as usize] = c.clone();
        }
        QSeries {
            order: self.order,
            unit: self.unit,
            offset: &self.offset * Rational::from_integer(BigInt::from(s)),
            coeffs,
        }
    }

    /// Re-express with a finer unit (a multiple of the current one).
    pub fn refine_unit(&self, unit: u32) -> Result<Self> {
        if !unit.is_multiple_of(self.unit) {
            return Err(Error::Invalid(format!("unit {unit} is not a multiple of {}", self.unit)));
        }
        let f = (unit / self.unit) as usize;
        let mut coeffs = vec![Cyclo::zero(self.order); self.len() * f];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * f] = c.clone();
        }
        Ok(QSeries { order: self.order, unit, offset: self.offset.clone(), coeffs })
    }

    /// Collapse to unit 1 when every nonzero coefficient sits at an integer
    /// exponent.
    pub fn to_integer_exponents(&self) -> Result<Self> {
        if !self.offset.is_integer() || !self.offset.is_zero() && self.offset < Rational::zero() {
            return Err(Error::Invalid("offset must be a nonnegative integer".into()));
        }
        let u = self.unit as usize;
        if self.coeffs.iter().enumerate().any(|(i, c)| i % u != 0 && !c.is_zero()) {
            return Err(Error::Invalid("series has fractional exponents".into()));
        }
        let shift = self.offset.to_integer().try_into().unwrap_or(0usize);
        let mut coeffs = vec![Cyclo::zero(self.order); shift];
        coeffs.extend(self.coeffs.iter().step_by(u).cloned());
        // drop the incomplete final block
        let known = shift + self.coeffs.len() / u;
        coeffs.truncate(known);
        Ok(QSeries { order: self.order, unit: 1, offset: Rational::zero(), coeffs })
    }

    /// Coefficients as rationals when they all are.
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                serde_json::json!({
                    "exp": rational_to_string(&self.exponent(i)),
                    "value": c,
                })
            })
            .collect();
        serde_json::json!({
            "unit": self.unit,
            "offset": rational_to_string(&self.offset),
            "truncation": rational_to_string(&self.truncation()),
            "coeffs": coeffs,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: SeriesJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let offset = parse_rational(&j.offset)?;
        let truncation = parse_rational(&j.truncation)?;
        let unit_r = Rational::from_integer(BigInt::from(j.unit));
        let len_r = (&truncation - &offset) * &unit_r;
        if !len_r.is_integer() || len_r < Rational::zero() {
            return Err(Error::Parse("truncation is not on the exponent grid".into()));
        }
        let len: usize = len_r.to_integer().try_into().map_err(|_| Error::Parse("truncation too large".into()))?;
        let order = j.coeffs.iter().map(|c| c.value.order()).fold(1, crate::arith::lcm_u32);
        let mut coeffs = vec![Cyclo::zero(order); len];
        for c in j.coeffs {
            let idx = (parse_rational(&c.exp)? - &offset) * &unit_r;
            if !idx.is_integer() || idx < Rational::zero() {
                return Err(Error::Parse(format!("exponent {} is off the grid", c.exp)));
            }
            let i: usize = idx.to_integer().try_into().map_err(|_| Error::Parse("bad exponent".into()))?;
            if i >= len {
                return Err(Error::Parse(format!("exponent {} is beyond the truncation", c.exp)));
            }
            coeffs[i] = c.value.lift(order)?;
        }
        QSeries::new(order, j.unit, offset, coeffs)
    }

    /// CSV rows `exponent,exact,decimal` (decimal shows real and imaginary parts).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("exponent,exact,decimal\n");
        for (i, c) in self.coeffs.iter().enumerate() {
            let (re, im) = c.to_complex();
            let dec = if im.abs() < 1e-12 { format!("{re:.12e}") } else { format!("{re:.12e}{im:+.12e}i") };
            let _ = writeln!(out, "{},\"{}\",{}", rational_to_string(&self.exponent(i)), c, dec);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    exp: String,
    value: Cyclo,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    unit: u32,
    offset: String,
    truncation: String,
    coeffs: Vec<CoeffJson>,
}

/// `eta(q^s) = q^{s/24} prod_{m>=1} (1 - q^{sm})` known below `q^{s/24 + len}`.
pub fn eta(s: u32, len: usize) -> QSeries {
    let mut c = vec![0i64; len];
    if len > 0 {
        c[0] = 1;
    }
    let mut m = s as usize;
    while m < len {
        for n in (m..len).rev() {
            c[n] -= c[n - m];
        }
        m += s as usize;
    }
    let mut q = QSeries::from_ints(&c);
    q.offset = Rational::new(BigInt::from(s), BigInt::from(24));
    q
}

/// `prod eta(q^s)^e` over the given `(s, e)` pairs.
pub fn eta_quotient(factors: &[(u32, i32)], len: usize) -> Result<QSeries> {
    let mut acc = QSeries::one(1, len);
    for &(s, e) in factors {
        let base = eta(s, len);
        let base = if e < 0 { base.inverse()? } else { base };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
    }
    Ok(acc)
}

pub fn sigma(k: u32, n: u64) -> BigInt {
    let mut s = BigInt::zero();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(k);
        }
    }
    s
}

/// The real odd primitive character of conductor 3 or 4.
pub fn kronecker_chi(f: u32, n: i64) -> i64 {
    match f {
        3 => match n.rem_euclid(3) {
            1 => 1,
            2 => -1,
            _ => 0,
        },
        4 => match n.rem_euclid(4) {
            1 => 1,
            3 => -1,
            _ => 0,
        },
        _ => panic!("unsupported conductor {f}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DivisorSum {
    /// `sum_{d|n} d`
    Sigma1,
    /// `sum_{d|n} chi(d)` for the odd character of the given conductor
    Sigma0Chi(u32),
}

pub fn divisor_sums(kind: DivisorSum, n: u64) -> i64 {
    match kind {
        DivisorSum::Sigma1 => (1..=n).filter(|d| n.is_multiple_of(*d)).sum::<u64>() as i64,
        DivisorSum::Sigma0Chi(f) => (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| kronecker_chi(f, d as i64)).sum(),
    }
}

/// `-1/24 + sum sigma_1(n) q^{sn}`.
pub fn e2(s: u32, len: usize) -> QSeries {
    let mut c = vec![Rational::zero(); len];
    if len > 0 {
        c[0] = Rational::new(BigInt::from(-1), BigInt::from(24));
    }
    let mut n = 1u64;
    while (n * s as u64) < len as u64 {
        c[(n * s as u64) as usize] = Rational::from_integer(sigma(1, n));
        n += 1;
    }
    QSeries::from_rationals(&c)
}

/// Coefficients of `Theta(z + 2 pi i r/N)` in powers of `z`, as q-series
/// with coefficients in `Q(zeta_{2N})`.
#[derive(Clone, Debug)]
pub struct ThetaExpansion {
    pub n: u32,
    pub r: i64,
    pub z_coeffs: Vec<QSeries>,
}

fn bivariate_zero(order: u32, zl: usize, ql: usize) -> Vec<Vec<Cyclo>> {
    vec![vec![Cyclo::zero(order); ql]; zl]
}

/// `Theta(z) = (x^{1/2} - x^{-1/2}) prod (1 - x q^m)(1 - x^{-1} q^m)/(1 - q^m)^2`
/// at `x = zeta_N^r e^z`, with `x^{1/2} = zeta_{2N}^r e^{z/2}`.
pub fn theta_expansion(n: u32, r: i64, z_order: usize, q_len: usize) -> ThetaExpansion {
    let order = 2 * n;
    let zl = z_order + 1;
    let inv_fact: Vec<Rational> = (0..zl).map(|j| Rational::new(BigInt::one(), factorial(j as u64))).collect();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut f = bivariate_zero(order, zl, q_len);
    if q_len > 0 {
        for (j, row) in f.iter_mut().enumerate() {
            let hp = half.pow(j as i32);
            let a = Cyclo::zeta(order, r).scale(&hp);
            let b = Cyclo::zeta(order, -r).scale(&(if j % 2 == 0 { hp.clone() } else { -hp.clone() }));
            row[0] = (a - b).scale(&inv_fact[j]);
        }
    }
    // multiply by (1 - c e^{sign z} q^m) for both factors of every m
    for m in 1..q_len {
        for (c, sign) in [(Cyclo::zeta(order, 2 * r), 1i32), (Cyclo::zeta(order, -2 * r), -1)] {
            let old = f.clone();
            for j in 0..zl {
                for k in m..q_len {
                    let mut acc = Cyclo::zero(order);
                    for i in 0..=j {
                        let src = &old[j - i][k - m];
                        if src.is_zero() {
                            continue;
                        }
                        let w = if sign < 0 && i % 2 == 1 { -inv_fact[i].clone() } else { inv_fact[i].clone() };
                        acc += &src.scale(&w);
                    }
                    if !acc.is_zero() {
                        f[j][k] -= &(&acc * &c);
                    }
                }
            }
        }
    }
    let p2 = eta_quotient(&[(1, -2)], q_len).expect("eta inverse");
    let z_coeffs = f
        .into_iter()
        .map(|row| {
            let s = QSeries::from_coeffs(order, row).unwrap();
            s.mul(&p2).unwrap().with_order(order).unwrap()
        })
        .map(|s| QSeries { offset: Rational::zero(), ..s })
        .collect();
    ThetaExpansion { n, r, z_coeffs }
}

/// `log F` for a z-series with invertible constant coefficient, returned from
/// the `z^1` coefficient on (the `z^0` term is dropped).
fn z_log_tail(f: &[QSeries]) -> Result<Vec<QSeries>> {
    let zl = f.len();
    let order = f[0].order();
    let len = f[0].len();
    let inv0 = f[0].inverse()?;
    let mut g: Vec<QSeries> = Vec::with_capacity(zl);
    for j in 0..zl.saturating_sub(1) {
        let mut acc = f[j + 1].scale_rational(&Rational::from_integer(BigInt::from(j as i64 + 1)));
        for i in 1..=j {
            acc = acc.sub(&f[i].mul(&g[j - i])?)?;
        }
        g.push(acc.mul(&inv0)?);
    }
    let mut out = vec![QSeries::zero(order, len)];
    for (j, gj) in g.iter().enumerate() {
        out.push(gj.scale_rational(&Rational::new(BigInt::one(), BigInt::from(j as i64 + 1))));
    }
    Ok(out)
}

/// `E_k^r` from `ln Theta(2 pi i r/N)/Theta(z + 2 pi i r/N) = sum z^k/k! E_k^r`,
/// or for `r = 0` from `ln z/Theta(z) = sum z^{2k}/(2k)! E_{2k}`.
pub fn eisenstein_kr(n: u32, r: i64, k: u32, len: usize) -> Result<QSeries> {
    let r0 = r.rem_euclid(n as i64) == 0;
    if r0 && (k % 2 == 1 || k == 2) {
        return Err(Error::Domain(format!("E_{k}^0 is not defined here (use e2 for k = 2)")));
    }
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let th = theta_expansion(n, r, k as usize + 1, len);
    let f: Vec<QSeries> = if r0 { th.z_coeffs[1..].to_vec() } else { th.z_coeffs[..=k as usize].to_vec() };
    let log = z_log_tail(&f)?;
    let c = log[k as usize].scale_rational(&-Rational::from_integer(factorial(k as u64)));
    Ok(c)
}

/// Check the Jacobi triple product
/// `sum_n (-x)^n q^{(n^2-n)/2} = prod (1-q^m)(1-x q^{m-1})(1-x^{-1} q^m)`
/// as a bivariate identity below `q^order`.
pub fn jacobi_triple_product_holds(order: usize) -> bool {
    let mut prod: HashMap<(i64, usize), BigInt> = HashMap::new();
    prod.insert((0, 0), BigInt::one());
    let mul = |p: &HashMap<(i64, usize), BigInt>, dx: i64, dq: usize| {
        let mut out = p.clone();
        for ((x, q), c) in p {
            if q + dq < order {
                let e = out.entry((x + dx, q + dq)).or_insert_with(BigInt::zero);
                *e -= c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    for m in 1..=order {
        prod = mul(&prod, 0, m);
        prod = mul(&prod, 1, m - 1);
        prod = mul(&prod, -1, m);
    }
    let mut sum: HashMap<(i64, usize), BigInt> = HashMap::new();
    let bound = (2 * order as i64).max(4);
    for nn in -bound..=bound {
        let e = (nn * nn - nn) / 2;
        if (e as usize) < order {
            let c = if nn.rem_euclid(2) == 0 { 1 } else { -1 };
            sum.insert((nn, e as usize), BigInt::from(c));
        }
    }
    prod == sum
}

/// The eta quotient equal to `Theta(2 pi i/N)/(zeta_{2N} - zeta_{2N}^{-1})`.
pub fn theta_special_value_quotient(n: u32) -> Option<Vec<(u32, i32)>> {
    match n {
        2 => Some(vec![(2, 2), (1, -4)]),
        3 => Some(vec![(3, 1), (1, -3)]),
        4 => Some(vec![(4, 1), (1, -2), (2, -1)]),
        6 => Some(vec![(6, 1), (1, -1), (2, -1), (3, -1)]),
        _ => None,
    }
}

/// `sum_{d|n} chi(d) d^{k-1}` and `sum_{d|n} chi(n/d) d^{k-1}`.
pub fn sigma_chi(f: u32, k: u32, n: u64, dual: bool) -> BigInt {
    let mut s = BigInt::zero();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            let c = if dual { kronecker_chi(f, (n / d) as i64) } else { kronecker_chi(f, d as i64) };
            if c != 0 {
                s += BigInt::from(c) * BigInt::from(d).pow(k - 1);
            }
        }
    }
    s
}


/// Decimal value of a rational-coefficient series at a real `q`.
pub fn eval_real(s: &QSeries, q: f64) -> f64 {
    s.coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| rational_to_f64(&c.as_rational().unwrap_or_default()) * q.powf(rational_to_f64(&s.exponent(i))))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn eta_pentagonal() {
        let e = eta(1, 16);
        let expect = [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1];
        assert_eq!(e.rational_coeffs().unwrap(), QSeries::from_ints(&expect).rational_coeffs().unwrap());
        assert_eq!(e.offset(), &rat(1, 24));
        let q = eta_quotient(&[(2, 2), (1, -4)], 10).unwrap();
        assert_eq!(q.offset(), &rat(0, 1));
    }

    #[test]
    fn e2_values() {
        let e = e2(1, 7);
        let c = e.rational_coeffs().unwrap();
        assert_eq!(c[0], rat(-1, 24));
        assert_eq!(&c[1..], &[rat(1, 1), rat(3, 1), rat(4, 1), rat(7, 1), rat(6, 1), rat(12, 1)]);
        let e3 = e2(3, 10).rational_coeffs().unwrap();
        assert_eq!(e3[3], rat(1, 1));
        assert_eq!(e3[4], rat(0, 1));
    }

    #[test]
    fn divisor_sum_values() {
        assert_eq!(divisor_sums(DivisorSum::Sigma0Chi(3), 2), 0);
        assert_eq!(divisor_sums(DivisorSum::Sigma0Chi(3), 3), 1);
        assert_eq!(divisor_sums(DivisorSum::Sigma0Chi(3), 7), 2);
        assert_eq!(divisor_sums(DivisorSum::Sigma1, 1), 1);
    }

    #[test]
    fn theta_at_zero() {
        let th = theta_expansion(3, 0, 3, 8);
        assert!(th.z_coeffs[0].coeffs().iter().all(|c| c.is_zero()));
        assert_eq!(th.z_coeffs[1].coeff(0), &Cyclo::one(6));
    }

    #[test]
    fn series_arithmetic() {
        let a = QSeries::from_ints(&[1, 2, 3, 4]);
        let b = QSeries::from_ints(&[0, 1, 0, 5, 7]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.rational_coeffs().unwrap(), vec![rat(0, 1), rat(1, 1), rat(2, 1), rat(8, 1)]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), QSeries::one(1, 4));
    }

    #[test]
    fn json_round_trip() {
        let s = eta(3, 6).scale(&Cyclo::zeta(6, 1));
        let back = QSeries::from_json(&s.to_json()).unwrap();
        assert_eq!(back.coeffs(), s.coeffs());
        assert_eq!(back.offset(), s.offset());
    }

    #[test]
    fn triple_product() {
        assert!(jacobi_triple_product_holds(12));
    }

    #[test]
    fn theta_special_values() {
        for n in [2u32, 3, 4, 6] {
            let th = theta_expansion(n, 1, 0, 20);
            let lhs = th.z_coeffs[0].scale(&Cyclo::theta(2 * n).inv().unwrap());
            let rhs = eta_quotient(&theta_special_value_quotient(n).unwrap(), 20).unwrap();
            assert_eq!(rhs.offset(), &rat(0, 1));
            assert_eq!(lhs.with_order(2 * n).unwrap().coeffs(), rhs.with_order(2 * n).unwrap().coeffs(), "N={n}");
        }
    }

    #[test]
    fn eisenstein_matches_divisor_formula() {
        for (n, r, k) in [(3u32, 1i64, 3u32), (3, 2, 4), (4, 1, 3), (6, 1, 5), (3, 1, 1), (4, 1, 2)] {
            let e = eisenstein_kr(n, r, k, 21).unwrap();
            for m in 1..21u64 {
                let mut expect = Cyclo::zero(2 * n);
                for d in 1..=m {
                    if m % d == 0 {
                        let dk = Rational::from_integer(BigInt::from(d).pow(k - 1));
                        let sgn = if k % 2 == 0 { 1 } else { -1 };
                        let term = Cyclo::zeta(2 * n, 2 * r * d as i64)
                            + Cyclo::zeta(2 * n, -2 * r * d as i64).scale(&Rational::from_integer(BigInt::from(sgn)));
                        expect += &term.scale(&dk);
                    }
                }
                assert_eq!(e.coeff(m as usize), &expect, "N={n} r={r} k={k} n={m}");
            }
        }
        assert!(eisenstein_kr(3, 0, 3, 5).is_err());
        assert!(eisenstein_kr(3, 0, 2, 5).is_err());
        assert!(eisenstein_kr(3, 0, 4, 5).is_ok());
    }

    #[test]
    fn weight_one_is_proportional_to_x() {
        let e = eisenstein_kr(3, 1, 1, 31).unwrap().scale(&Cyclo::theta(3));
        let x: Vec<Rational> = (0..31u64)
            .map(|m| if m == 0 { rat(1, 6) } else { Rational::from_integer(BigInt::from(divisor_sums(DivisorSum::Sigma0Chi(3), m))) })
            .collect();
        let ratio = e.coeff(1).clone();
        for (m, xm) in x.iter().enumerate() {
            assert_eq!(e.coeff(m), &ratio.scale(xm), "q^{m}");
        }
    }
}
