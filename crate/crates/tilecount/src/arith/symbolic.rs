use super::{rational_to_f64, rational_to_string, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Polynomial over Q in the formal symbols `pi` and `s = i*theta_N`, where
/// `theta_N = zeta_N - zeta_N^{-1}`.
///
/// For N = 3 and 6, `s = -sqrt(3)` so `s^2` reduces to 3; for N = 4,
/// `s = -2` is rational and is substituted outright.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Symbolic {
    n: u32,
    /// (pi power, s power) -> coefficient
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Symbolic {
    pub fn zero(n: u32) -> Self {
        Symbolic { n, terms: BTreeMap::new() }
    }

    pub fn from_rational(n: u32, r: Rational) -> Self {
        Self::monomial(n, r, 0, 0)
    }

    pub fn one(n: u32) -> Self {
        Self::from_rational(n, Rational::one())
    }

    pub fn monomial(n: u32, c: Rational, pi: u32, s: u32) -> Self {
        let mut out = Self::zero(n);
        out.add_term(c, pi, s);
        out
    }

    pub fn pi(n: u32) -> Self {
        Self::monomial(n, Rational::one(), 1, 0)
    }

    pub fn s(n: u32) -> Self {
        Self::monomial(n, Rational::one(), 0, 1)
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    /// Value of `s^2` when it is rational for this level.
    fn s_square(n: u32) -> Option<Rational> {
        match n {
            3 | 6 => Some(Rational::from_integer(BigInt::from(3))),
            _ => None,
        }
    }

    fn add_term(&mut self, c: Rational, pi: u32, s: u32) {
        if c.is_zero() {
            return;
        }
        let (mut c, mut s) = (c, s);
        if self.n == 4 {
            c *= Rational::from_integer(BigInt::from(-2)).pow(s as i32);
            s = 0;
        } else if let Some(sq) = Self::s_square(self.n) {
            c *= sq.pow((s / 2) as i32);
            s %= 2;
        } else if self.n <= 2 && s > 0 {
            // theta_N vanishes for N = 1, 2
            return;
        }
        let e = self.terms.entry((pi, s)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(pi, s));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((p, s), c) in &o.terms {
            out.add_term(c.clone(), *p, *s);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.n.max(o.n));
        for ((p1, s1), c1) in &self.terms {
            for ((p2, s2), c2) in &o.terms {
                out.add_term(c1 * c2, p1 + p2, s1 + s2);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        for ((p, s), c) in &self.terms {
            out.add_term(c * r, *p, *s);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.n), |acc, _| acc.mul(self))
    }

    /// Exact division by a nonzero element of Q(s) (no `pi` allowed).
    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.terms.keys().any(|(p, _)| *p > 0) {
            return Err(Error::Unsupported("division by a multiple of pi".into()));
        }
        let a = o.terms.get(&(0, 0)).cloned().unwrap_or_else(Rational::zero);
        let b = o.terms.get(&(0, 1)).cloned().unwrap_or_else(Rational::zero);
        if b.is_zero() {
            if a.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(self.scale(&(Rational::one() / a)));
        }
        // 1/(a + b s) = (a - b s)/(a^2 - b^2 s^2)
        let sq = Self::s_square(self.n).ok_or_else(|| Error::Unsupported("irrational s".into()))?;
        let norm = &a * &a - &b * &b * sq;
        let conj = Self::from_rational(self.n, a).sub(&Self::monomial(self.n, b, 0, 1));
        Ok(self.mul(&conj).scale(&(Rational::one() / norm)))
    }

    /// Exact division by `pi`, defined when every term carries a factor of `pi`.
    pub fn div_pi(&self) -> Result<Self> {
        if self.terms.keys().any(|(p, _)| *p == 0) {
            return Err(Error::Unsupported("term without a factor of pi".into()));
        }
        let mut out = Self::zero(self.n);
        for ((p, s), c) in &self.terms {
            out.terms.insert((p - 1, *s), c.clone());
        }
        Ok(out)
    }

    pub fn s_value(n: u32) -> f64 {
        match n {
            3 | 6 => -(3f64).sqrt(),
            4 => -2.0,
            _ => 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let s = Self::s_value(self.n);
        self.terms
            .iter()
            .map(|((p, e), c)| rational_to_f64(c) * std::f64::consts::PI.powi(*p as i32) * s.powi(*e as i32))
            .sum()
    }
}

impl fmt::Display for Symbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for ((p, s), c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            if !(c.is_one() && (*p > 0 || *s > 0)) {
                factors.push(rational_to_string(c));
            }
            match p {
                0 => {}
                1 => factors.push("pi".into()),
                _ => factors.push(format!("pi^{p}")),
            }
            match s {
                0 => {}
                1 => factors.push(format!("itheta{}", self.n)),
                _ => factors.push(format!("itheta{}^{s}", self.n)),
            }
            parts.push(factors.join("*"));
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// Polynomial in `l` with [`Symbolic`] coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CuspPoly {
    pub n: u32,
    pub coeffs: Vec<Symbolic>,
}

impl CuspPoly {
    pub fn constant(c: Symbolic) -> Self {
        CuspPoly { n: c.level(), coeffs: vec![c] }.trimmed()
    }

    pub fn zero(n: u32) -> Self {
        CuspPoly { n, coeffs: vec![] }
    }

    pub fn one(n: u32) -> Self {
        Self::constant(Symbolic::one(n))
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
        self
    }

    /// Degree in `l`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Symbolic {
        self.coeffs.last().cloned().unwrap_or_else(|| Symbolic::zero(self.n))
    }

    pub fn coeff(&self, k: usize) -> Symbolic {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Symbolic::zero(self.n))
    }

    pub fn add(&self, o: &Self) -> Self {
        let len = self.coeffs.len().max(o.coeffs.len());
        let n = self.n.max(o.n);
        CuspPoly { n, coeffs: (0..len).map(|k| self.coeff(k).add(&o.coeff(k))).collect() }.trimmed()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n.max(o.n);
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::zero(n);
        }
        let mut out = vec![Symbolic::zero(n); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        CuspPoly { n, coeffs: out }.trimmed()
    }

    pub fn scale(&self, c: &Symbolic) -> Self {
        CuspPoly { n: self.n, coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }.trimmed()
    }

    pub fn eval_f64(&self, l: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * l + c.to_f64())
    }
}

impl fmt::Display for CuspPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*l"),
                _ => format!("({c})*l^{k}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn ring_laws_and_reduction() {
        let s = Symbolic::s(3);
        assert_eq!(s.mul(&s), Symbolic::from_rational(3, rat(3, 1)));
        let t = Symbolic::s(4);
        assert_eq!(t, Symbolic::from_rational(4, rat(-2, 1)));
        let a = Symbolic::pi(3).pow(2).scale(&rat(2, 3)).add(&Symbolic::from_rational(3, rat(1, 5)));
        assert_eq!(a.mul(&Symbolic::one(3)), a);
        assert_eq!(Symbolic::pi(3).pow(2).scale(&rat(2, 3)).to_string(), "2/3*pi^2");
        let q = a.div(&s.add(&Symbolic::one(3))).unwrap();
        assert_eq!(q.mul(&s.add(&Symbolic::one(3))), a);
    }
}
