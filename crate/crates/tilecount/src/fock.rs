//! Finite truncations of the charge-zero Fock space: the Heisenberg
//! operators `alpha_n` and the diagonal entries of the operator whose
//! matrix coefficients are generated by
//! `1/(1-xy) * (1-x)/(1-x^N)^{1/N} * (1-y^N)^{1/N}/(1-y)`.

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::partitions::Partition;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

/// A finite combination of basis vectors `v_lambda` of energy `|lambda| <= bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    coeffs: BTreeMap<Partition, Rational>,
    bound: usize,
}

impl FockVector {
    pub fn zero(bound: usize) -> Self {
        FockVector { coeffs: BTreeMap::new(), bound }
    }

    pub fn basis(lambda: &Partition, bound: usize) -> Result<Self> {
        let mut v = Self::zero(bound);
        v.add(lambda.clone(), Rational::one())?;
        Ok(v)
    }

    pub fn vacuum() -> Self {
        Self::basis(&Partition::empty(), 0).unwrap()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn add(&mut self, lambda: Partition, c: Rational) -> Result<()> {
        if lambda.size() > self.bound {
            return Err(Error::Invalid(format!("energy {} exceeds bound {}", lambda.size(), self.bound)));
        }
        let e = self.coeffs.entry(lambda.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&lambda);
        }
        Ok(())
    }

    pub fn coeff(&self, lambda: &Partition) -> Rational {
        self.coeffs.get(lambda).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The standard inner product in which the `v_lambda` are orthonormal.
    pub fn inner(&self, other: &FockVector) -> Rational {
        self.coeffs.iter().map(|(l, c)| c * other.coeff(l)).fold(Rational::zero(), |a, b| a + b)
    }
}

/// Apply `alpha_n` (`n != 0`), which moves one bead from `p` to `p - n`.
pub fn alpha(n: i64, v: &FockVector) -> Result<FockVector> {
    if n == 0 {
        return Err(Error::Invalid("alpha_0 acts by the charge and is excluded".into()));
    }
    let bound = (v.bound as i64 - n).max(0) as usize;
    let mut out = FockVector::zero(bound);
    for (lambda, c) in v.terms() {
        let count = lambda.len() + n.unsigned_abs() as usize;
        let beads = lambda.positions(count);
        let floor = 1 - count as i64;
        let occupied = |q: i64| q < floor || beads.contains(&q);
        for (j, &p) in beads.iter().enumerate() {
            let target = p - n;
            if occupied(target) {
                continue;
            }
            let (lo, hi) = if target < p { (target, p) } else { (p, target) };
            let crossed = beads.iter().filter(|&&q| q > lo && q < hi).count();
            let mut moved = beads.clone();
            moved[j] = target;
            moved.push(floor - 1);
            let mu = Partition::from_positions(&moved)?;
            let sign = if crossed % 2 == 0 { c.clone() } else { -c.clone() };
            out.add(mu, sign)?;
        }
    }
    Ok(out)
}

/// The two factor series of `factor_series`, cached per `N`.
type SeriesPair = (Vec<Rational>, Vec<Rational>);

thread_local! {
    static SERIES: RefCell<HashMap<u32, SeriesPair>> = RefCell::new(HashMap::new());
}

/// Coefficients of `(1+u)^a`.
fn binomial_series(a: &Rational, len: usize) -> Vec<Rational> {
    let mut c = vec![Rational::one()];
    for j in 1..len {
        let prev = c[j - 1].clone();
        let jr = Rational::from_integer(BigInt::from(j));
        c.push(prev * (a - &jr + Rational::one()) / jr);
    }
    c
}

/// Coefficient lists of `(1-x)/(1-x^N)^{1/N}` and `(1-y^N)^{1/N}/(1-y)`.
fn factor_series(n: u32, len: usize) -> SeriesPair {
    let nr = Rational::from_integer(BigInt::from(n));
    let expand = |a: Rational| -> Vec<Rational> {
        let b = binomial_series(&a, len);
        let mut s = vec![Rational::zero(); len];
        for (j, bj) in b.iter().enumerate() {
            let idx = n as usize * j;
            if idx < len {
                s[idx] = if j % 2 == 0 { bj.clone() } else { -bj.clone() };
            }
        }
        s
    };
    let s = expand(-Rational::one() / &nr);
    let a: Vec<Rational> =
        (0..len).map(|i| if i == 0 { s[0].clone() } else { &s[i] - &s[i - 1] }).collect();
    let t = expand(Rational::one() / nr);
    let mut c = Vec::with_capacity(len);
    let mut acc = Rational::zero();
    for x in t {
        acc += x;
        c.push(acc.clone());
    }
    (a, c)
}

fn with_series<T>(n: u32, len: usize, f: impl FnOnce(&[Rational], &[Rational]) -> T) -> T {
    SERIES.with(|s| {
        let mut s = s.borrow_mut();
        let e = s.entry(n).or_insert_with(|| (Vec::new(), Vec::new()));
        if e.0.len() < len {
            *e = factor_series(n, len.max(2 * e.0.len()).max(16));
        }
        f(&e.0, &e.1)
    })
}

/// `<e_k|W_N|e_l>` by coefficient extraction from the generating function.
pub fn wn_entry(k: usize, l: usize, n: u32) -> Rational {
    with_series(n, k.max(l) + 1, |a, c| {
        (0..=k.min(l)).map(|j| &a[k - j] * &c[l - j]).fold(Rational::zero(), |x, y| x + y)
    })
}

fn class_ratio(upto: usize, n: u32, numerator_class: i64) -> Rational {
    let mut r = Rational::one();
    for m in 1..=upto as i64 {
        if m.rem_euclid(n as i64) == numerator_class.rem_euclid(n as i64) {
            r *= Rational::from_integer(BigInt::from(m));
        }
        if m % n as i64 == 0 {
            r /= Rational::from_integer(BigInt::from(m));
        }
    }
    r
}

/// Closed form of [`wn_entry`] for `N >= 3`.
pub fn wn_entry_closed(k: usize, l: usize, n: u32) -> Result<Rational> {
    if n < 3 {
        return Err(Error::Domain("the closed formula needs N >= 3".into()));
    }
    let nn = n as usize;
    let b = class_ratio(k, n, 1);
    let c = class_ratio(l, n, -1);
    if k % nn == (l + 1) % nn {
        Ok(b * c / Rational::from_integer(BigInt::from(l as i64 - k as i64)))
    } else if k.is_multiple_of(nn) {
        Ok(b * c)
    } else {
        Ok(Rational::zero())
    }
}

/// Determinant over the rationals by Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// `<v_lambda|W_N|v_lambda>` as the minor on rows and columns
/// `lambda_i - i + N*ell`, with `ell` minimal plus `extra`.
pub fn wn_diagonal_window(lambda: &Partition, n: u32, extra: usize) -> Rational {
    let nn = n as usize;
    let ell = lambda.len().div_ceil(nn).max(1) + extra;
    let width = nn * ell;
    let ks: Vec<usize> = (1..=width).map(|i| (lambda.part(i) as i64 - i as i64 + width as i64) as usize).collect();
    let m = ks.iter().map(|&k| ks.iter().map(|&l| wn_entry(k, l, n)).collect()).collect();
    determinant(m)
}

pub fn wn_diagonal(lambda: &Partition, n: u32) -> Rational {
    wn_diagonal_window(lambda, n, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    #[test]
    fn alpha_basics() {
        let one = alpha(-1, &FockVector::vacuum()).unwrap();
        assert_eq!(one, FockVector::basis(&p("1"), 1).unwrap());
        let v = FockVector::basis(&p("2,1"), 3).unwrap();
        assert_eq!(alpha(3, &v).unwrap().coeff(&Partition::empty()), rat(-1, 1));
        let vac = FockVector::vacuum();
        let a = alpha(2, &alpha(-2, &vac).unwrap()).unwrap();
        assert_eq!(a.coeff(&Partition::empty()), rat(2, 1));
        assert!(alpha(2, &vac).unwrap().is_zero());
    }

    #[test]
    fn energy_bound_enforced() {
        assert!(FockVector::basis(&p("3"), 2).is_err());
    }

    #[test]
    fn entries() {
        assert_eq!(wn_entry(0, 0, 3), rat(1, 1));
        for n in [3u32, 4, 6] {
            for k in 0..14 {
                for l in 0..14 {
                    assert_eq!(wn_entry(k, l, n), wn_entry_closed(k, l, n).unwrap(), "N={n} k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(wn_diagonal(&Partition::empty(), 3), rat(1, 1));
        assert_eq!(wn_diagonal(&p("1"), 3), rat(0, 1));
        assert_eq!(wn_diagonal(&p("2,1"), 3), rat(-1, 9));
        assert_eq!(wn_diagonal_window(&p("2,1"), 3, 1), rat(-1, 9));
    }
}
