//! Shifted-symmetric functions `p_k`, their cyclotomic versions `p_k^r`,
//! shifted Schur functions, and exact fits of partition functions into the
//! monomial basis of the ring generated by the `p_k^r`.

use crate::arith::{factorial, linsolve, Cyclo, Rational};
use crate::characters::{central_character, dim, dim_skew};
use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, enumerate_with_core, Partition};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

fn series_inverse(a: &[Cyclo]) -> Vec<Cyclo> {
    let inv0 = a[0].inv().expect("invertible constant term");
    let mut b = vec![inv0.clone()];
    for k in 1..a.len() {
        let mut s = Cyclo::zero(a[0].order());
        for j in 1..=k {
            s += &(&a[j] * &b[k - j]);
        }
        b.push(-(&s * &inv0));
    }
    b
}

thread_local! {
    static CKR: RefCell<HashMap<(u32, u32), Vec<Cyclo>>> = RefCell::new(HashMap::new());
}

fn ckr_table(n: u32, r: u32, len: usize) -> Vec<Cyclo> {
    let m = 2 * n;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let pw = |x: &Rational, j: usize| -> Rational { (0..j).fold(Rational::one(), |acc, _| acc * x) };
    let fact = |j: usize| Rational::from_integer(factorial(j as u64));
    if !r.is_multiple_of(n) {
        let zr = Cyclo::zeta(m, -2 * r as i64);
        let a: Vec<Cyclo> = (0..len)
            .map(|j| {
                let p = Cyclo::from_rational(m, pw(&half, j));
                let q = zr.scale(&pw(&-half.clone(), j));
                (p - q).scale(&(Rational::one() / fact(j)))
            })
            .collect();
        series_inverse(&a).iter().enumerate().map(|(k, b)| b.scale(&fact(k))).collect()
    } else {
        // (e^{z/2} - e^{-z/2}) / z, inverted, minus the pole
        let a: Vec<Cyclo> = (0..=len)
            .map(|j| {
                let v = (pw(&half, j + 1) - pw(&-half.clone(), j + 1)) / fact(j + 1);
                Cyclo::from_rational(m, v)
            })
            .collect();
        let b = series_inverse(&a);
        (0..len).map(|k| b[k + 1].scale(&fact(k))).collect()
    }
}

/// `c_k^r` from `1/(e^{z/2} - zeta_N^{-r} e^{-z/2}) = sum c_k^r z^k/k!`
/// (with the `1/z` pole removed when `r = 0`). Order `2N`.
pub fn c_k_r(n: u32, r: i64, k: usize) -> Cyclo {
    let r = r.rem_euclid(n as i64) as u32;
    CKR.with(|c| {
        let mut c = c.borrow_mut();
        let e = c.entry((n, r)).or_default();
        if e.len() <= k {
            *e = ckr_table(n, r, (k + 1).max(2 * e.len()).max(8));
        }
        e[k].clone()
    })
}

/// `p_k^r(lambda)` as an element of order `2N`.
pub fn p_k_r(lambda: &Partition, n: u32, r: i64, k: u32) -> Cyclo {
    let m = 2 * n;
    let mut s = c_k_r(n, r, k as usize);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for i in 1..=lambda.len() as i64 {
        let p = lambda.part(i as usize) as i64 - i + 1;
        let a = (Rational::from_integer(BigInt::from(p)) - &half).pow(k as i32);
        let b = (Rational::from_integer(BigInt::from(1 - i)) - &half).pow(k as i32);
        s += &Cyclo::zeta(m, 2 * r * p).scale(&a);
        s -= &Cyclo::zeta(m, 2 * r * (1 - i)).scale(&b);
    }
    s
}

/// `p_k(lambda) = c_k^0 + sum_i [(lambda_i - i + 1/2)^k - (-i + 1/2)^k]`.
pub fn p_k(lambda: &Partition, k: u32) -> Rational {
    p_k_r(lambda, 1, 0, k).as_rational().expect("p_k is rational")
}

/// Shifted Schur function via `dim(lambda/eta)/|lambda/eta|! * |lambda|!/dim lambda`.
pub fn shifted_schur(eta: &Partition, lambda: &Partition) -> Rational {
    if !lambda.contains(eta) {
        return Rational::zero();
    }
    let m = lambda.size() - eta.size();
    Rational::new(dim_skew(lambda, eta), factorial(m as u64))
        * Rational::new(factorial(lambda.size() as u64), dim(lambda))
}

/// Shifted Schur function as a sum over reverse tableaux `T` of shape `eta`
/// (rows weakly decreasing, columns strictly decreasing) of
/// `prod_cells (lambda_{T(cell)} - content(cell))`; an integer.
pub fn shifted_schur_integer(eta: &Partition, lambda: &Partition) -> BigInt {
    if !lambda.contains(eta) {
        return BigInt::zero();
    }
    let rows: Vec<usize> = eta.parts().iter().map(|&x| x as usize).collect();
    let cells: Vec<(usize, usize)> = rows.iter().enumerate().flat_map(|(i, &r)| (0..r).map(move |j| (i, j))).collect();
    let bound = lambda.len().max(eta.len());
    let mut filling = vec![vec![0usize; rows.first().copied().unwrap_or(0)]; rows.len()];
    fn go(
        k: usize,
        cells: &[(usize, usize)],
        filling: &mut Vec<Vec<usize>>,
        bound: usize,
        lambda: &Partition,
        acc: &BigInt,
        total: &mut BigInt,
    ) {
        if acc.is_zero() {
            return;
        }
        let Some(&(i, j)) = cells.get(k) else {
            *total += acc;
            return;
        };
        let mut hi = bound;
        if j > 0 {
            hi = hi.min(filling[i][j - 1]);
        }
        if i > 0 {
            hi = hi.min(filling[i - 1][j] - 1);
        }
        for v in 1..=hi {
            filling[i][j] = v;
            let factor = lambda.part(v) as i64 - (j as i64 - i as i64);
            go(k + 1, cells, filling, bound, lambda, &(acc * factor), total);
        }
    }
    let mut total = BigInt::zero();
    go(0, &cells, &mut filling, bound, lambda, &BigInt::one(), &mut total);
    total
}

/// A monomial `prod p_{k_i}^{r_i}` stored as a sorted list of `(k, r mod N)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(n: u32, mut factors: Vec<(u32, u32)>) -> Self {
        for f in factors.iter_mut() {
            f.1 %= n;
        }
        factors.sort_unstable();
        Monomial(factors)
    }

    pub fn weight(&self, n: u32) -> u32 {
        self.0.iter().map(|&(k, r)| k + (r % n == 0) as u32).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend(o.0.iter().copied());
        v.sort_unstable();
        Monomial(v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let s: Vec<String> = self.0.iter().map(|(k, r)| format!("p{k}^{r}")).collect();
        write!(f, "{}", s.join("*"))
    }
}

/// All monomials of weight at most `w`, ordered by weight then factors.
pub fn monomials_up_to_weight(n: u32, w: u32) -> Vec<Monomial> {
    let mut gens = Vec::new();
    for k in 1..=w {
        for r in 0..n {
            let g = (k, r);
            if k + (r == 0) as u32 <= w {
                gens.push(g);
            }
        }
    }
    let mut out = Vec::new();
    fn rec(n: u32, gens: &[(u32, u32)], start: usize, left: u32, cur: &mut Vec<(u32, u32)>, out: &mut Vec<Monomial>) {
        out.push(Monomial::new(n, cur.clone()));
        for i in start..gens.len() {
            let (k, r) = gens[i];
            let wt = k + (r == 0) as u32;
            if wt <= left {
                cur.push((k, r));
                rec(n, gens, i, left - wt, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, &gens, 0, w, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.weight(n).cmp(&b.weight(n)).then(a.cmp(b)));
    out.dedup();
    out
}

/// A `Q(zeta_{2N})`-linear combination of monomials in the `p_k^r`.
#[derive(Clone, PartialEq, Debug)]
pub struct LambdaNElement {
    pub n: u32,
    pub terms: BTreeMap<Monomial, Cyclo>,
}

impl LambdaNElement {
    pub fn zero(n: u32) -> Self {
        LambdaNElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: u32) -> Self {
        Self::monomial(n, Monomial::one(), Cyclo::one(2 * n))
    }

    pub fn monomial(n: u32, m: Monomial, c: Cyclo) -> Self {
        let mut e = Self::zero(n);
        e.add_term(m, c);
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: Cyclo) {
        let c = c.lift(2 * self.n).expect("coefficient order divides 2N");
        let e = self.terms.entry(m.clone()).or_insert_with(|| Cyclo::zero(2 * self.n));
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        let mut out = Self::zero(self.n);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn weight(&self) -> u32 {
        self.terms.keys().map(|m| m.weight(self.n)).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &Monomial) -> Cyclo {
        self.terms.get(m).cloned().unwrap_or_else(|| Cyclo::zero(2 * self.n))
    }

    /// Distinct generators `(k, r)` appearing in any monomial.
    pub fn generators(&self) -> Vec<(u32, u32)> {
        let mut g: Vec<(u32, u32)> = self.terms.keys().flat_map(|m| m.0.iter().copied()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn eval(&self, lambda: &Partition) -> Cyclo {
        let values: HashMap<(u32, u32), Cyclo> =
            self.generators().into_iter().map(|(k, r)| ((k, r), p_k_r(lambda, self.n, r as i64, k))).collect();
        let mut s = Cyclo::zero(2 * self.n);
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for g in &m.0 {
                v = &v * &values[g];
            }
            s += &v;
        }
        s
    }
}

impl fmt::Display for LambdaNElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", s.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    monomial: Vec<[u32; 2]>,
    coeff: Cyclo,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    #[serde(rename = "N")]
    n: u32,
    terms: Vec<TermJson>,
}

impl Serialize for LambdaNElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson { monomial: m.0.iter().map(|&(k, r)| [k, r]).collect(), coeff: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LambdaNElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ElementJson::deserialize(d)?;
        if j.n == 0 {
            return Err(serde::de::Error::custom("N must be positive"));
        }
        let mut e = LambdaNElement::zero(j.n);
        for t in j.terms {
            if 2 * j.n % t.coeff.order() != 0 {
                return Err(serde::de::Error::custom("coefficient order must divide 2N"));
            }
            e.add_term(Monomial::new(j.n, t.monomial.iter().map(|m| (m[0], m[1])).collect()), t.coeff);
        }
        Ok(e)
    }
}

/// Where fit samples are drawn from.
#[derive(Clone, Debug, PartialEq)]
pub enum SampleDomain {
    All,
    /// partitions with this `N`-core (the empty core gives the
    /// N-decomposable partitions)
    WithCore(Partition),
}

impl SampleDomain {
    /// Partitions of the domain in increasing size, up to `max_size`.
    pub fn stream(&self, n: u32, max_size: usize) -> impl Iterator<Item = Partition> + '_ {
        let sizes: Vec<usize> = match self {
            SampleDomain::All => (0..=max_size).collect(),
            SampleDomain::WithCore(c) => (c.size()..=max_size).step_by(n as usize).collect(),
        };
        sizes.into_iter().flat_map(move |s| match self {
            SampleDomain::All => enumerate_partitions(s),
            SampleDomain::WithCore(c) => enumerate_with_core(c, n, s).unwrap_or_default(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct FitReport {
    pub element: LambdaNElement,
    pub monomials: Vec<Monomial>,
    pub rank: usize,
    /// kernel directions of the evaluation map on the sampled domain
    pub kernel: Vec<LambdaNElement>,
    pub samples: usize,
    pub holdout: usize,
    pub holdout_ok: bool,
}

/// Incrementally reduced row space.
struct RowSpace {
    rows: Vec<(usize, Vec<Cyclo>)>,
}

impl RowSpace {
    fn insert(&mut self, mut v: Vec<Cyclo>) -> bool {
        for (pc, row) in &self.rows {
            if !v[*pc].is_zero() {
                let f = v[*pc].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
        let Some(pc) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pc].inv().unwrap();
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[pc].is_zero() {
                let f = row[pc].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
        self.rows.push((pc, v));
        true
    }
}

/// Fit a partition function into the monomials of weight `<= weight_bound`.
///
/// Samples are drawn from `domain` in increasing size, in batches, until the
/// rank of the evaluation matrix has stopped growing for three batches; the
/// solution is then checked on at least ten further partitions.
pub fn fit_in_basis(
    f: &dyn Fn(&Partition) -> Cyclo,
    n: u32,
    weight_bound: u32,
    domain: &SampleDomain,
    max_size: usize,
) -> Result<FitReport> {
    let monomials = monomials_up_to_weight(n, weight_bound);
    let basis: Vec<LambdaNElement> =
        monomials.iter().map(|m| LambdaNElement::monomial(n, m.clone(), Cyclo::one(2 * n))).collect();
    let m = monomials.len();
    let batch = (m / 2).clamp(4, 12);
    let mut stream = domain.stream(n, max_size);
    let mut rows: Vec<Vec<Cyclo>> = Vec::new();
    let mut rhs: Vec<Cyclo> = Vec::new();
    let mut space = RowSpace { rows: Vec::new() };
    let mut stable = 0;
    let mut exhausted = false;
    while stable < 3 && space.rows.len() < m {
        let before = space.rows.len();
        for _ in 0..batch {
            let Some(lambda) = stream.next() else {
                exhausted = true;
                break;
            };
            let row: Vec<Cyclo> = basis.iter().map(|b| b.eval(&lambda)).collect();
            space.insert(row.clone());
            rows.push(row);
            rhs.push(f(&lambda).lift(2 * n)?);
        }
        if exhausted {
            break;
        }
        stable = if space.rows.len() == before { stable + 1 } else { 0 };
    }
    let sol = match linsolve::solve_linear_exact(&rows, &rhs) {
        Ok(s) => s,
        Err(Error::NoSolution) => {
            return Err(Error::NotRepresentable(format!("not representable at weight bound {weight_bound}")))
        }
        Err(e) => return Err(e),
    };
    let to_element = |v: &[Cyclo]| {
        let mut e = LambdaNElement::zero(n);
        for (mono, c) in monomials.iter().zip(v) {
            e.add_term(mono.clone(), c.clone());
        }
        e
    };
    let element = to_element(&sol.particular);
    let kernel: Vec<LambdaNElement> = sol.kernel.iter().map(|k| to_element(k)).collect();
    let mut holdout = 0;
    let mut holdout_ok = true;
    for lambda in stream.take(10) {
        holdout += 1;
        if element.eval(&lambda) != f(&lambda).lift(2 * n)? {
            holdout_ok = false;
        }
    }
    Ok(FitReport { element, monomials, rank: sol.rank, kernel, samples: rows.len(), holdout, holdout_ok })
}

/// Pad `mu` with parts equal to `t` up to size `n`; `None` if impossible.
pub fn pad_with(mu: &[u32], t: u32, n: usize) -> Option<Vec<u32>> {
    let s: usize = mu.iter().map(|&x| x as usize).sum();
    if s > n || !(n - s).is_multiple_of(t as usize) {
        return None;
    }
    let mut v = vec![t; (n - s) / t as usize];
    v.extend_from_slice(mu);
    Some(v)
}

/// `g^N_mu(lambda) = f_{N,...,N,mu}(lambda) / f_{N,...,N}(lambda)`.
pub fn g_n_mu(lambda: &Partition, n: u32, mu: &[u32]) -> Result<Rational> {
    let Some(den_content) = pad_with(&[], n, lambda.size()) else {
        return Err(Error::Domain(format!("{lambda} is not {n}-decomposable")));
    };
    let den = central_character(&den_content, lambda);
    if den.is_zero() {
        return Err(Error::Domain(format!("{lambda} is not {n}-decomposable")));
    }
    let Some(num_content) = pad_with(mu, n, lambda.size()) else {
        return Ok(Rational::zero());
    };
    Ok(central_character(&num_content, lambda) / den)
}

/// Render a rational coefficient list for reports.
pub fn describe(e: &LambdaNElement) -> Vec<(String, String)> {
    e.terms.iter().map(|(m, c)| (m.to_string(), c.to_string())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    #[test]
    fn tableau_formula_matches_dimensions() {
        for k in 0..=4 {
            for eta in enumerate_partitions(k) {
                for n in 0..=8 {
                    for l in enumerate_partitions(n) {
                        let z = Rational::from_integer(shifted_schur_integer(&eta, &l));
                        assert_eq!(z, shifted_schur(&eta, &l), "eta={eta} lambda={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn constants() {
        assert_eq!(c_k_r(3, 0, 1).as_rational(), Some(rat(-1, 24)));
        assert_eq!(c_k_r(2, 1, 0).as_rational(), Some(rat(1, 2)));
        for n in [3u32, 4, 6] {
            for r in 1..n as i64 {
                let expect = (Cyclo::one(2 * n) - Cyclo::zeta(2 * n, -2 * r)).inv().unwrap();
                assert_eq!(c_k_r(n, r, 0), expect);
            }
        }
    }

    #[test]
    fn p1_is_size_minus_constant() {
        for s in 0..=10 {
            for l in enumerate_partitions(s) {
                assert_eq!(p_k(&l, 1), Rational::from_integer(BigInt::from(s)) - rat(1, 24));
            }
        }
        assert_eq!(p_k(&p("1"), 1), rat(23, 24));
        assert_eq!(p_k(&Partition::empty(), 3), c_k_r(1, 0, 3).as_rational().unwrap());
    }

    #[test]
    fn shifted_schur_values() {
        assert_eq!(shifted_schur(&Partition::empty(), &p("3,1")), rat(1, 1));
        assert_eq!(shifted_schur(&p("1"), &p("2")), rat(2, 1));
        assert_eq!(shifted_schur(&p("3"), &p("2,1")), rat(0, 1));
        for s in 1..=8 {
            for l in enumerate_partitions(s) {
                assert_eq!(shifted_schur(&p("1"), &l), rat(s as i64, 1));
            }
        }
    }

    #[test]
    fn eval_simple() {
        let e = LambdaNElement::monomial(3, Monomial::new(3, vec![(1, 0)]), Cyclo::one(6));
        assert_eq!(e.eval(&p("2,1")).as_rational(), Some(rat(71, 24)));
        assert_eq!(LambdaNElement::one(3).eval(&p("5,2")), Cyclo::one(6));
    }

    #[test]
    fn monomial_counts() {
        let m = monomials_up_to_weight(3, 2);
        assert_eq!(m.len(), 9);
        assert_eq!(monomials_up_to_weight(3, 0), vec![Monomial::one()]);
        let a = Monomial::new(3, vec![(1, 1)]);
        let b = Monomial::new(3, vec![(2, 0)]);
        assert_eq!(a.mul(&b).weight(3), a.weight(3) + b.weight(3));
    }

    #[test]
    fn g_values() {
        assert_eq!(g_n_mu(&p("2,1"), 3, &[]).unwrap(), rat(1, 1));
        assert!(g_n_mu(&p("2"), 3, &[]).is_err());
        for l in enumerate_with_core(&Partition::empty(), 3, 6).unwrap() {
            assert_eq!(g_n_mu(&l, 3, &[1]).unwrap(), rat(0, 1));
        }
    }

    #[test]
    fn json_round_trip() {
        let mut e = LambdaNElement::zero(3);
        e.add_term(Monomial::new(3, vec![(1, 1), (2, 2)]), Cyclo::zeta(6, 1).scale(&rat(1, 81)));
        e.add_term(Monomial::one(), Cyclo::from_rational(6, rat(1, 18)));
        let s = serde_json::to_string(&e).unwrap();
        let back: LambdaNElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
}
