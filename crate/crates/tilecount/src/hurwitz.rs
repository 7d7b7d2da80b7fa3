//! Generating functions for branched covers of elliptic orbifolds, the
//! dictionary from tilings to ramification profiles, brackets against
//! `w_N`, and the passage to connected covers.

use crate::arith::{Cyclo, Radical, Rational};
use crate::characters::{aut, central_character, chi, class_size, dim, pad_with_ones, sgn_t};
use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::partitions::{combine, cores_up_to, enumerate_partitions, enumerate_with_core, multipartitions, Partition};
use crate::qseries::QSeries;
use crate::shifted::{pad_with, shifted_schur_integer, LambdaNElement};
use crate::transfer::{self, RunnerProduct};
use crate::weights::{orbifold_orders, tilde_w_radical, w_n, WeightSpec};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// `H_d(eta^1, ..., eta^n) = sum_{|lambda| = d} (dim lambda / d!)^2 prod f_{eta^i}(lambda)`,
/// each profile padded with ones.
pub fn hurwitz_number(d: usize, profiles: &[Vec<u32>]) -> Rational {
    if profiles.iter().any(|p| pad_with_ones(p, d).is_none()) {
        return Rational::zero();
    }
    let mut total = Rational::zero();
    for l in enumerate_partitions(d) {
        let r = Rational::new(dim(&l), factorial(d as u64));
        let mut term = &r * &r;
        for p in profiles {
            term *= central_character(p, &l);
            if term.is_zero() {
                break;
            }
        }
        total += term;
    }
    total
}

fn cycle_type(perm: &[usize]) -> Vec<u32> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for i in 0..perm.len() {
        if !seen[i] {
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = perm[j];
                len += 1;
            }
            out.push(len);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn permutations_with_type(d: usize, content: &[u32]) -> Vec<Vec<usize>> {
    let mut target = content.to_vec();
    target.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..d).collect();
    fn rec(k: usize, perm: &mut Vec<usize>, target: &[u32], out: &mut Vec<Vec<usize>>) {
        if k == perm.len() {
            if cycle_type(perm) == target {
                out.push(perm.clone());
            }
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, target, out);
            perm.swap(k, i);
        }
    }
    rec(0, &mut perm, &target, &mut out);
    out
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Count tuples `(s_1, ..., s_n)` in the conjugacy classes of the padded
/// profiles with `s_1 ... s_n = 1`, divided by `d!`. With
/// `require_transitive` only tuples generating a transitive subgroup count.
/// `budget` bounds the number of tuples enumerated.
pub fn brute_force_monodromy(d: usize, profiles: &[Vec<u32>], require_transitive: bool, budget: u64) -> Result<Rational> {
    if d > 8 {
        return Err(Error::Budget(format!("degree {d} is above the brute-force limit 8")));
    }
    let mut contents = Vec::with_capacity(profiles.len());
    for p in profiles {
        match pad_with_ones(p, d) {
            Some(c) => contents.push(c),
            None => return Ok(Rational::zero()),
        }
    }
    let Some((last, rest)) = contents.split_last() else {
        let ok = !require_transitive || d <= 1;
        return Ok(Rational::new(BigInt::from(ok as u32), factorial(d as u64)));
    };
    let mut work = BigInt::one();
    for c in rest {
        work *= class_size(c);
    }
    if work > BigInt::from(budget) {
        return Err(Error::Budget(format!("{work} tuples exceed the budget {budget}")));
    }
    let mut target = last.clone();
    target.sort_unstable_by(|a, b| b.cmp(a));
    let classes: Vec<Vec<Vec<usize>>> = rest.iter().map(|c| permutations_with_type(d, c)).collect();
    let mut count: u64 = 0;
    let mut idx = vec![0usize; classes.len()];
    if classes.iter().any(|c| c.is_empty()) {
        return Ok(Rational::zero());
    }
    loop {
        let mut prod: Vec<usize> = (0..d).collect();
        for (c, &i) in classes.iter().zip(&idx) {
            let s = &c[i];
            prod = prod.iter().map(|&x| s[x]).collect();
        }
        if cycle_type(&prod) == target {
            let transitive = !require_transitive || {
                let mut parent: Vec<usize> = (0..d).collect();
                for (c, &i) in classes.iter().zip(&idx) {
                    for (x, &y) in c[i].iter().enumerate() {
                        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                        parent[rx] = ry;
                    }
                }
                (0..d).all(|x| find(&mut parent, x) == find(&mut parent, 0))
            };
            if transitive {
                count += 1;
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(Rational::new(BigInt::from(count), factorial(d as u64)));
            }
            idx[k] += 1;
            if idx[k] < classes[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Ramification data `D = {nu^i | mu^a, mu^b, ...}` over `E/<zeta_N>`:
/// `mu[j]` sits over the orbifold point of order `orders()[j]` and is padded
/// with that order; each `extra` profile is padded with ones. For `N = 1`
/// there are no orbifold points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RamificationProfile {
    pub n: u32,
    pub extra: Vec<Vec<u32>>,
    pub mu: Vec<Vec<u32>>,
}

impl RamificationProfile {
    /// Validates the level and reduces every profile: parts equal to the
    /// padding value are dropped and the rest sorted decreasingly.
    pub fn new(n: u32, extra: Vec<Vec<u32>>, mu: Vec<Vec<u32>>) -> Result<Self> {
        let orders = Self::orders_for(n)?;
        if mu.len() != orders.len() {
            return Err(Error::Invalid(format!("N = {n} has {} orbifold points, got {} profiles", orders.len(), mu.len())));
        }
        if extra.iter().chain(&mu).flatten().any(|&x| x == 0) {
            return Err(Error::Invalid("profile parts must be positive".into()));
        }
        let reduce = |p: &Vec<u32>, pad: u32| {
            let mut v: Vec<u32> = p.iter().copied().filter(|&x| x != pad).collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        };
        let mu = mu.iter().zip(&orders).map(|(p, &t)| reduce(p, t)).collect();
        let extra = extra.iter().map(|p| reduce(p, 1)).filter(|p| !p.is_empty()).collect();
        Ok(RamificationProfile { n, extra, mu })
    }

    pub fn trivial(n: u32) -> Result<Self> {
        let k = Self::orders_for(n)?.len();
        Self::new(n, Vec::new(), vec![Vec::new(); k])
    }

    fn orders_for(n: u32) -> Result<Vec<u32>> {
        if n == 1 {
            return Ok(Vec::new());
        }
        orbifold_orders(n).ok_or_else(|| Error::Domain(format!("N = {n} is not one of 1, 2, 3, 4, 6")))
    }

    pub fn orders(&self) -> Vec<u32> {
        Self::orders_for(self.n).expect("validated level")
    }

    pub fn is_trivial(&self) -> bool {
        self.extra.is_empty() && self.mu.iter().all(|m| m.is_empty())
    }

    /// Full cycle types at `|lambda| = size`, or `None` if some profile
    /// cannot be padded to that size.
    pub fn contents(&self, size: usize) -> Option<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        for (m, &t) in self.mu.iter().zip(&self.orders()) {
            out.push(pad_with(m, t, size)?);
        }
        for nu in &self.extra {
            out.push(pad_with_ones(nu, size)?);
        }
        Some(out)
    }

    /// The nontrivial parts as `(slot, part)`; slots `0..k` are the orbifold
    /// points and `k + i` is `extra[i]`.
    pub fn nontrivial_parts(&self) -> Vec<(usize, u32)> {
        let k = self.mu.len();
        let mut out = Vec::new();
        for (j, m) in self.mu.iter().enumerate() {
            out.extend(m.iter().map(|&x| (j, x)));
        }
        for (i, nu) in self.extra.iter().enumerate() {
            out.extend(nu.iter().map(|&x| (k + i, x)));
        }
        out
    }

    /// The profile keeping only the listed nontrivial parts.
    fn restrict(&self, parts: &[(usize, u32)]) -> Self {
        let k = self.mu.len();
        let mut mu = vec![Vec::new(); k];
        let mut extra = vec![Vec::new(); self.extra.len()];
        for &(slot, x) in parts {
            if slot < k {
                mu[slot].push(x);
            } else {
                extra[slot - k].push(x);
            }
        }
        Self::new(self.n, extra, mu).expect("restriction of a valid profile")
    }

    /// `prod_slots |Aut|` of the nontrivial parts.
    pub fn automorphisms(&self) -> BigInt {
        self.mu.iter().chain(&self.extra).map(|p| aut(p)).product()
    }

    /// Exponent denominator of the series: `q^{|lambda|/N}`.
    pub fn unit(&self) -> u32 {
        self.n
    }
}

impl fmt::Display for RamificationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &Vec<u32>| {
            if p.is_empty() {
                "()".to_string()
            } else {
                format!("({})", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
        };
        let extra: Vec<String> = self.extra.iter().map(show).collect();
        let mu: Vec<String> = self.mu.iter().map(show).collect();
        write!(f, "H_{}{{{} | {}}}", self.n, extra.join(" "), mu.join(", "))
    }
}

/// How [`h_series_with`] evaluates the sum over partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Transfer engine when the profile allows it, otherwise `Cores`.
    Auto,
    /// Every partition, central characters by Murnaghan-Nakayama.
    Direct,
    /// Sum over `N`-cores and quotients with the quotient form of the
    /// central characters.
    Cores,
    /// Modular transfer recursion over runner partitions.
    Transfer,
}

fn series_from(n: u32, coeffs: Vec<Rational>) -> Result<QSeries> {
    let unit = n.max(1);
    QSeries::new(1, unit, Rational::zero(), coeffs.into_iter().map(|c| Cyclo::from_rational(1, c)).collect())
}

fn series_len(n: u32, order: usize) -> usize {
    n.max(1) as usize * (order + 1)
}

/// Def. general summand at one partition.
fn direct_term(d: &RamificationProfile, l: &Partition) -> Rational {
    let Some(contents) = d.contents(l.size()) else {
        return Rational::zero();
    };
    let mut term = if d.n == 1 {
        Rational::one()
    } else {
        let r = Rational::new(dim(l), factorial(l.size() as u64));
        &r * &r
    };
    for c in &contents {
        if term.is_zero() {
            break;
        }
        term *= central_character(c, l);
    }
    term
}

/// `H_N(D)` in `q^{|lambda|/N}`, with coefficients of `q^{j/N}` for
/// `j < N (order + 1)`.
pub fn h_series(d: &RamificationProfile, order: usize) -> Result<QSeries> {
    h_series_with(d, order, Method::Auto)
}

pub fn h_series_with(d: &RamificationProfile, order: usize, method: Method) -> Result<QSeries> {
    let len = series_len(d.n, order);
    match method {
        Method::Direct => {
            let coeffs = (0..len).map(|s| enumerate_partitions(s).iter().map(|l| direct_term(d, l)).sum()).collect();
            series_from(d.n, coeffs)
        }
        Method::Cores => h_series_cores(d, order),
        Method::Transfer => h_series_transfer(d, order),
        Method::Auto => {
            if transfer_terms(d).is_some() && order <= transfer::MAX_DEGREE {
                h_series_transfer(d, order)
            } else {
                h_series_cores(d, order)
            }
        }
    }
}

/// The `N`-cores `eta` for which `F^D_eta` can be nonzero: for every
/// orbifold point some `eta^t` of size `|mu^t|` shares the `t`-core of `eta`.
pub fn contributing_cores(d: &RamificationProfile) -> Vec<Partition> {
    let orders = d.orders();
    if d.n == 1 {
        return vec![Partition::empty()];
    }
    let bound = d.mu.iter().zip(&orders).filter(|(_, &t)| t == d.n).map(|(m, _)| m.iter().sum::<u32>() as usize).min();
    let bound = bound.unwrap_or(0);
    let cands: Vec<Vec<Partition>> = d
        .mu
        .iter()
        .zip(&orders)
        .map(|(m, &t)| {
            let mut cores: Vec<Partition> = enumerate_partitions(m.iter().sum::<u32>() as usize)
                .iter()
                .map(|e| e.core_and_quotients(t).core)
                .collect();
            cores.sort();
            cores.dedup();
            cores
        })
        .collect();
    cores_up_to(d.n, bound)
        .into_iter()
        .filter(|eta| {
            orders.iter().zip(&cands).all(|(&t, cs)| cs.binary_search(&eta.core_and_quotients(t).core).is_ok())
        })
        .collect()
}

/// Terms `(coefficient, eta^t)` of the quotient expansion of
/// `f_{t,...,t,mu}/c_t` for partitions with `t`-core `core`; the common
/// factor `t^{|mu|/t}` is returned separately.
fn quotient_expansion(mu: &[u32], t: u32, core: &Partition) -> (Radical, Vec<(Rational, Vec<Partition>)>) {
    let size: usize = mu.iter().map(|&x| x as usize).sum();
    let norm = Rational::from_integer(aut(mu) * mu.iter().fold(BigInt::one(), |acc, &x| acc * x));
    let mut terms = Vec::new();
    for eta in enumerate_partitions(size) {
        let cq = eta.core_and_quotients(t);
        if &cq.core != core {
            continue;
        }
        let c = chi(&eta, mu).expect("character of a partition of |mu|");
        if c == 0 {
            continue;
        }
        let coef = Rational::from_integer(BigInt::from(c * sgn_t(&eta, t) as i128)) / &norm;
        terms.push((coef, cq.quotients));
    }
    let power = Radical::power(t as u64, Rational::new(BigInt::from(size), BigInt::from(t)));
    (power, terms)
}

type Expansion = (Radical, Vec<(Rational, Vec<Partition>)>);

/// Memo tables for repeated evaluations of [`f_eta_d`] on one profile.
#[derive(Default)]
struct FCache {
    expansions: HashMap<(usize, Partition), Expansion>,
    schur: HashMap<(Partition, Partition), BigInt>,
}

/// `F^D_eta(lambda)`: the product of the `f_{nu^i}(lambda)` and, for each
/// orbifold point, the sum over `eta^t` of
/// `sgn_t(eta^t) t^{|mu^t|/t} chi^{eta^t}(mu^t) / (|Aut mu^t| prod mu^t_i) prod_i s*_{eta^t_i}(lambda_i)`
/// with `lambda_i` the `t`-quotients. Zero unless the `N`-core of `lambda` is `eta`.
pub fn f_eta_d(d: &RamificationProfile, eta: &Partition, lambda: &Partition) -> Radical {
    f_eta_d_cached(d, eta, lambda, &mut FCache::default())
}

fn f_eta_d_cached(d: &RamificationProfile, eta: &Partition, lambda: &Partition, cache: &mut FCache) -> Radical {
    let zero = Radical::from_rational(Rational::zero());
    if d.n >= 2 && &lambda.core_and_quotients(d.n).core != eta {
        return zero;
    }
    let mut value = Radical::one();
    for nu in &d.extra {
        value = value.scale(&central_character(nu, lambda));
    }
    for (slot, (m, &t)) in d.mu.iter().zip(&d.orders()).enumerate() {
        if m.is_empty() {
            continue;
        }
        let cq = lambda.core_and_quotients(t);
        let (power, terms) = cache
            .expansions
            .entry((slot, cq.core.clone()))
            .or_insert_with(|| quotient_expansion(m, t, &cq.core))
            .clone();
        let mut sum = Rational::zero();
        for (coef, qs) in &terms {
            let mut x = coef.clone();
            for (a, b) in qs.iter().zip(&cq.quotients) {
                if x.is_zero() {
                    break;
                }
                let s = cache
                    .schur
                    .entry((a.clone(), b.clone()))
                    .or_insert_with(|| shifted_schur_integer(a, b));
                x *= Rational::from_integer(s.clone());
            }
            sum += x;
        }
        value = value.mul(&power.scale(&sum));
    }
    if value.is_zero() {
        zero
    } else {
        value
    }
}

/// Prop. modify: `sum_eta sum_lambda q^{|lambda|/N} w~_{N,eta}(lambda) F^D_eta(lambda)`,
/// enumerating each core together with its quotients.
fn h_series_cores(d: &RamificationProfile, order: usize) -> Result<QSeries> {
    let len = series_len(d.n, order);
    if d.n == 1 {
        return h_series_with(d, order, Method::Direct);
    }
    let mut coeffs = vec![Rational::zero(); len];
    let mut cache = FCache::default();
    for eta in contributing_cores(d) {
        let spec = WeightSpec::new(d.n, eta.clone())?;
        let mut k = 0;
        while eta.size() + d.n as usize * k < len {
            for qs in multipartitions(d.n as usize, k) {
                let l = combine(&eta, &qs)?;
                if d.contents(l.size()).is_none() {
                    continue;
                }
                let f = f_eta_d_cached(d, &eta, &l, &mut cache);
                if f.is_zero() {
                    continue;
                }
                let term = tilde_w_radical(&l, &spec).mul(&f);
                let r = term
                    .to_rational()
                    .ok_or_else(|| Error::NotRepresentable(format!("irrational summand at {l}")))?;
                coeffs[l.size()] += r;
            }
            k += 1;
        }
    }
    series_from(d.n, coeffs)
}

/// Runner-product form of `F^D_empty` when every ramified orbifold point has
/// order `N`, there are no extra profiles, and only the empty core
/// contributes.
fn transfer_terms(d: &RamificationProfile) -> Option<Vec<RunnerProduct>> {
    if d.n < 2 || !d.extra.is_empty() {
        return None;
    }
    let orders = d.orders();
    if d.mu.iter().zip(&orders).any(|(m, &t)| !m.is_empty() && t != d.n) {
        return None;
    }
    let cores = contributing_cores(d);
    if cores.iter().any(|c| !c.is_empty()) {
        return None;
    }
    if cores.is_empty() {
        return Some(Vec::new());
    }
    let mut terms = vec![RunnerProduct { coef: Rational::one(), shapes: vec![Vec::new(); d.n as usize] }];
    for m in d.mu.iter().filter(|m| !m.is_empty()) {
        let (power, expansion) = quotient_expansion(m, d.n, &Partition::empty());
        let power = power.to_rational()?;
        let mut next = Vec::new();
        for t in &terms {
            for (coef, qs) in &expansion {
                let mut shapes = t.shapes.clone();
                for (s, q) in shapes.iter_mut().zip(qs) {
                    s.push(q.clone());
                }
                next.push(RunnerProduct { coef: &t.coef * coef * &power, shapes });
            }
        }
        terms = next;
    }
    Some(terms)
}

fn h_series_transfer(d: &RamificationProfile, order: usize) -> Result<QSeries> {
    let terms = transfer_terms(d).ok_or_else(|| {
        Error::Unsupported(format!("{d} needs nonempty cores, extra profiles or a point of order below N"))
    })?;
    if terms.is_empty() {
        return series_from(d.n, vec![Rational::zero(); series_len(d.n, order)]);
    }
    let (num, den) = transfer::runner_product_sums(d.n, &terms, order)?;
    unramified_cache().lock().expect("cache lock").entry((d.n, order)).or_insert(den);
    Ok(num)
}

fn unramified_cache() -> &'static Mutex<HashMap<(u32, usize), QSeries>> {
    static C: OnceLock<Mutex<HashMap<(u32, usize), QSeries>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `H_N(empty)`, the generating function of orbifold-unramified covers,
/// memoized per level and order.
pub fn unramified_series(n: u32, order: usize) -> Result<QSeries> {
    if let Some(s) = unramified_cache().lock().expect("cache lock").get(&(n, order)) {
        return Ok(s.clone());
    }
    let s = h_series(&RamificationProfile::trivial(n)?, order)?;
    unramified_cache().lock().expect("cache lock").insert((n, order), s.clone());
    Ok(s)
}

/// `H_N(D) / H_N(empty)`: covers in which every component is ramified.
pub fn ramified_series(d: &RamificationProfile, order: usize) -> Result<QSeries> {
    if d.n >= 2 && contributing_cores(d).is_empty() {
        return series_from(d.n, vec![Rational::zero(); series_len(d.n, order)]);
    }
    let num = h_series(d, order)?;
    num.div(&unramified_series(d.n, order)?)
}

fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; k];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        for b in 0..=max {
            labels[i] = b;
            rec(i + 1, max.max(b + 1), labels, out);
        }
    }
    rec(0, 0, &mut labels, &mut out);
    out
}

/// Connected covers by Moebius inversion over set partitions of the
/// labeled nontrivial parts. Ramified series with labeled parts are
/// `|Aut| H^{ram}`, which is what the exponential formula relates.
pub fn connected_series(d: &RamificationProfile, order: usize) -> Result<QSeries> {
    let parts = d.nontrivial_parts();
    if parts.is_empty() {
        return Err(Error::Invalid("connected series of the unramified profile is not defined".into()));
    }
    if parts.len() > 9 {
        return Err(Error::Budget(format!("{} nontrivial parts give too many set partitions", parts.len())));
    }
    let mut cache: HashMap<RamificationProfile, QSeries> = HashMap::new();
    let mut acc: Option<QSeries> = None;
    for labels in set_partitions(parts.len()) {
        let blocks = labels.iter().max().map_or(0, |m| m + 1);
        let mut term: Option<QSeries> = None;
        for b in 0..blocks {
            let sub: Vec<(usize, u32)> =
                parts.iter().zip(&labels).filter(|(_, &l)| l == b).map(|(p, _)| *p).collect();
            let sd = d.restrict(&sub);
            if !cache.contains_key(&sd) {
                let s = ramified_series(&sd, order)?.scale_rational(&Rational::from_integer(sd.automorphisms()));
                cache.insert(sd.clone(), s);
            }
            let s = &cache[&sd];
            term = Some(match term {
                None => s.clone(),
                Some(t) => t.mul(s)?,
            });
        }
        let mut sign = Rational::from_integer(factorial(blocks as u64 - 1));
        if blocks % 2 == 0 {
            sign = -sign;
        }
        let term = term.expect("at least one block").scale_rational(&sign);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    let acc = acc.expect("at least one set partition");
    Ok(acc.scale_rational(&Rational::new(BigInt::one(), d.automorphisms())).truncate(series_len(d.n, order)))
}

/// `<F>_{w_N} = sum q^{|lambda|/N} w_N F / sum q^{|lambda|/N} w_N` by
/// enumerating partitions with empty `N`-core.
pub fn bracket_fn(n: u32, order: usize, f: impl Fn(&Partition) -> Cyclo) -> Result<QSeries> {
    let len = series_len(n, order);
    let mut num = Vec::with_capacity(len);
    let mut den = Vec::with_capacity(len);
    let mut field = 1;
    for s in 0..len {
        let mut a: Option<Cyclo> = None;
        let mut b = Rational::zero();
        if s % n as usize == 0 {
            for l in enumerate_with_core(&Partition::empty(), n, s)? {
                let w = w_n(&l, n);
                let v = f(&l).scale(&w);
                field = crate::arith::lcm_u32(field, v.order());
                a = Some(match a {
                    None => v,
                    Some(x) => &x + &v,
                });
                b += w;
            }
        }
        num.push(a.unwrap_or_else(|| Cyclo::zero(1)));
        den.push(Cyclo::from_rational(1, b));
    }
    let num = QSeries::new(field, n, Rational::zero(), num)?;
    let den = QSeries::new(1, n, Rational::zero(), den)?;
    num.div(&den)
}

/// `<F>_{w_N}` for an element of `Lambda*_N`: the transfer engine for
/// `N` in {2,3,4,6}, enumeration otherwise.
pub fn bracket_element(e: &LambdaNElement, order: usize) -> Result<QSeries> {
    if orbifold_orders(e.n).is_some() && order <= transfer::MAX_DEGREE {
        transfer::bracket_element(e, order)
    } else {
        bracket_fn(e.n, order, |l| e.eval(l))
    }
}

/// The tiles of Prop. zero together with equilateral triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tile {
    Quad,
    Biquad,
    Bihex,
    Square,
    Hexagon,
    Triangle,
}

impl Tile {
    pub const ALL: [Tile; 6] = [Tile::Quad, Tile::Biquad, Tile::Bihex, Tile::Square, Tile::Hexagon, Tile::Triangle];

    /// Level `N` of the elliptic orbifold the tiled surface covers.
    pub fn level(self) -> u32 {
        match self {
            Tile::Quad => 1,
            Tile::Biquad => 2,
            Tile::Bihex => 3,
            Tile::Square => 4,
            Tile::Hexagon | Tile::Triangle => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Tile::Quad => "quad",
            Tile::Biquad => "biquad",
            Tile::Bihex => "bihex",
            Tile::Square => "square",
            Tile::Hexagon => "hexagon",
            Tile::Triangle => "triangle",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Tile::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown tile '{s}'")))
    }

    /// Quasimodularity of triangle counts is not covered by the
    /// representation-theoretic argument.
    pub fn is_experimental(self) -> bool {
        self == Tile::Triangle
    }

    /// Index of the orbifold point carrying the vertices, `None` for the
    /// torus where vertices lie over the origin.
    fn slot(self) -> Option<usize> {
        match self {
            Tile::Quad => None,
            Tile::Biquad | Tile::Bihex => Some(0),
            Tile::Square | Tile::Hexagon => Some(1),
            Tile::Triangle => Some(2),
        }
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingProblem {
    pub tile: Tile,
    pub curvatures: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    Disconnected,
    RamifiedComponents,
    Connected,
}

impl Connectivity {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "disconnected" => Ok(Connectivity::Disconnected),
            "ramified_components" | "ramified" => Ok(Connectivity::RamifiedComponents),
            "connected" => Ok(Connectivity::Connected),
            _ => Err(Error::Parse(format!("unknown connectivity '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Connectivity::Disconnected => "disconnected",
            Connectivity::RamifiedComponents => "ramified_components",
            Connectivity::Connected => "connected",
        }
    }
}

impl TilingProblem {
    pub fn new(tile: Tile, curvatures: Vec<i64>) -> Self {
        TilingProblem { tile, curvatures }
    }

    /// Genus from `sum kappa_i = N (2 - 2g)`, if integral and nonnegative.
    pub fn genus(&self) -> Option<u64> {
        let n = self.tile.level() as i64;
        let s: i64 = self.curvatures.iter().sum();
        if s % (2 * n) != 0 {
            return None;
        }
        let g = 1 - s / (2 * n);
        u64::try_from(g).ok()
    }

    /// Cycle lengths over the vertex point: `N - kappa_i`, halved for the
    /// hexagon whose vertices lie over the point of order 3.
    pub fn cycle_lengths(&self) -> Result<Vec<u32>> {
        let n = self.tile.level() as i64;
        let mut out = Vec::with_capacity(self.curvatures.len());
        for &k in &self.curvatures {
            if k == 0 {
                return Err(Error::Invalid("curvatures must be nonzero".into()));
            }
            let mut c = n - k;
            if self.tile == Tile::Hexagon {
                if k % 2 != 0 {
                    return Err(Error::Invalid(format!("hexagon curvature {k} is odd")));
                }
                c /= 2;
            }
            if c <= 0 {
                return Err(Error::Invalid(format!("curvature {k} exceeds {n}: no vertex has that cone angle")));
            }
            out.push(c as u32);
        }
        Ok(out)
    }

    /// Profile placement of Prop. zero.
    pub fn profile(&self) -> Result<RamificationProfile> {
        let cycles = self.cycle_lengths()?;
        let n = self.tile.level();
        match self.tile.slot() {
            None => RamificationProfile::new(n, vec![cycles], Vec::new()),
            Some(j) => {
                let k = orbifold_orders(n).expect("tile level").len();
                let mut mu = vec![Vec::new(); k];
                mu[j] = cycles;
                RamificationProfile::new(n, Vec::new(), mu)
            }
        }
    }
}

/// A tiling generating function in the tile variable `q^d` together with
/// notes on how it was produced.
#[derive(Clone, Debug, PartialEq)]
pub struct TilingSeries {
    pub series: QSeries,
    pub profile: Option<RamificationProfile>,
    pub diagnostics: Vec<String>,
    pub experimental: bool,
}

/// Weighted counts of tilings by `d` tiles, `d <= order`.
pub fn tilings_series(p: &TilingProblem, order: usize, connectivity: Connectivity) -> Result<TilingSeries> {
    if connectivity == Connectivity::Connected && p.curvatures.is_empty() {
        return Err(Error::Invalid("connected mode needs at least one curvature".into()));
    }
    let mut diagnostics = Vec::new();
    let experimental = p.tile.is_experimental();
    if experimental {
        diagnostics.push("experimental: quasimodularity is not established for triangulations".to_string());
    }
    let zero = |diagnostics: Vec<String>| TilingSeries {
        series: QSeries::zero(1, order + 1),
        profile: None,
        diagnostics,
        experimental,
    };
    let profile = match p.profile() {
        Ok(d) => d,
        Err(e) => {
            diagnostics.push(format!("identically zero: {e}"));
            return Ok(zero(diagnostics));
        }
    };
    if p.genus().is_none() {
        diagnostics.push(format!(
            "identically zero: curvature sum {} is not {} (2 - 2g) for an integer g >= 0",
            p.curvatures.iter().sum::<i64>(),
            p.tile.level()
        ));
        return Ok(zero(diagnostics));
    }
    let raw = match connectivity {
        Connectivity::Disconnected => h_series(&profile, order)?,
        Connectivity::RamifiedComponents => ramified_series(&profile, order)?,
        Connectivity::Connected => connected_series(&profile, order)?,
    };
    let series = raw.to_integer_exponents()?.truncate(order + 1);
    Ok(TilingSeries { series, profile: Some(profile), diagnostics, experimental })
}

/// Coefficient `k` as a rational, for series with rational coefficients.
pub fn rational_coeff(s: &QSeries, k: usize) -> Option<Rational> {
    if k >= s.len() {
        return None;
    }
    s.coeff(k).as_rational()
}

/// `n! * c` as an integer when it is one.
pub fn times_factorial(c: &Rational, n: usize) -> Option<BigInt> {
    let x = c * Rational::from_integer(factorial(n as u64));
    x.is_integer().then(|| x.to_integer())
}

/// Sign-free check that `c * n!` is a nonnegative integer.
pub fn counts_tuples(c: &Rational, n: usize) -> bool {
    times_factorial(c, n).is_some_and(|x| !x.is_negative())
}

/// Largest coefficient index kept by [`h_series`] at `order`.
pub fn max_size(n: u32, order: usize) -> usize {
    series_len(n, order) - 1
}

/// Decimal rendering helper for diagnostics.
pub fn approx(c: &Rational) -> f64 {
    c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn small_hurwitz_numbers() {
        assert_eq!(hurwitz_number(2, &[vec![2], vec![2]]), rat(1, 2));
        assert_eq!(hurwitz_number(2, &[vec![2]]), rat(0, 1));
        assert_eq!(hurwitz_number(1, &[vec![1], vec![]]), rat(1, 1));
        assert_eq!(brute_force_monodromy(2, &[vec![2], vec![2]], false, 1000).unwrap(), rat(1, 2));
        assert_eq!(brute_force_monodromy(2, &[vec![], vec![]], true, 1000).unwrap(), rat(0, 1));
        let h = hurwitz_number(3, &[vec![3], vec![3], vec![3]]);
        assert_eq!(brute_force_monodromy(3, &[vec![3], vec![3], vec![3]], false, 1000).unwrap(), h);
    }

    #[test]
    fn budget_is_enforced() {
        let r = brute_force_monodromy(8, &[vec![2], vec![2], vec![2], vec![2]], false, 10);
        assert!(matches!(r, Err(Error::Budget(_))));
    }

    #[test]
    fn trivial_bihex_series() {
        let d = RamificationProfile::trivial(3).unwrap();
        let s = h_series_with(&d, 1, Method::Direct).unwrap();
        assert_eq!(s.coeff(0).as_rational(), Some(rat(1, 1)));
        assert_eq!(s.coeff(3).as_rational(), Some(rat(1, 3)));
    }

    #[test]
    fn routes_agree() {
        let cases = [
            RamificationProfile::new(3, vec![], vec![vec![2, 2, 1, 1], vec![], vec![]]).unwrap(),
            RamificationProfile::new(3, vec![], vec![vec![2, 1], vec![1, 1, 1], vec![]]).unwrap(),
            RamificationProfile::new(2, vec![], vec![vec![1, 1], vec![], vec![], vec![]]).unwrap(),
            RamificationProfile::new(4, vec![], vec![vec![], vec![3, 1], vec![]]).unwrap(),
        ];
        for d in &cases {
            let direct = h_series_with(d, 3, Method::Direct).unwrap();
            assert_eq!(h_series_with(d, 3, Method::Cores).unwrap(), direct, "{d}");
            assert_eq!(h_series_with(d, 3, Method::Transfer).unwrap(), direct, "{d}");
        }
        let mixed = [
            RamificationProfile::new(2, vec![vec![2]], vec![vec![1], vec![1], vec![], vec![]]).unwrap(),
            RamificationProfile::new(6, vec![], vec![vec![1, 1], vec![], vec![]]).unwrap(),
            RamificationProfile::new(6, vec![], vec![vec![], vec![2], vec![]]).unwrap(),
            RamificationProfile::new(6, vec![], vec![vec![], vec![], vec![4, 2]]).unwrap(),
        ];
        assert!(contributing_cores(&mixed[3]).contains(&Partition::parse("3,3").unwrap()));
        for d in &mixed {
            assert_eq!(h_series_with(d, 2, Method::Cores).unwrap(), h_series_with(d, 2, Method::Direct).unwrap(), "{d}");
        }
    }

    #[test]
    fn appendix_tilings() {
        let p = TilingProblem::new(Tile::Bihex, vec![2, 2, 1, 1]);
        let s = tilings_series(&p, 4, Connectivity::Connected).unwrap().series;
        let c: Vec<Rational> = (0..5).map(|k| rational_coeff(&s, k).unwrap()).collect();
        assert_eq!(c[..4], [rat(0, 1), rat(0, 1), rat(1, 2), rat(1, 1)]);
        let r = tilings_series(&p, 4, Connectivity::RamifiedComponents).unwrap().series;
        assert_eq!(r, s);
    }

    #[test]
    fn invalid_curvatures_give_zero() {
        let p = TilingProblem::new(Tile::Bihex, vec![1, 1]);
        let t = tilings_series(&p, 3, Connectivity::Disconnected).unwrap();
        assert!(t.series.coeffs().iter().all(|c| c.is_zero()));
        assert!(!t.diagnostics.is_empty());
        let empty = TilingProblem::new(Tile::Square, vec![]);
        assert!(tilings_series(&empty, 3, Connectivity::Connected).is_err());
    }

    #[test]
    fn connected_matches_transitive_monodromy() {
        let cases = [
            RamificationProfile::new(2, vec![], vec![vec![1, 1], vec![1, 1], vec![], vec![]]).unwrap(),
            RamificationProfile::new(2, vec![], vec![vec![1, 1], vec![], vec![], vec![]]).unwrap(),
            RamificationProfile::new(3, vec![], vec![vec![2, 1], vec![1, 1, 1], vec![]]).unwrap(),
            RamificationProfile::new(3, vec![], vec![vec![1; 6], vec![], vec![]]).unwrap(),
        ];
        for d in &cases {
            let con = connected_series(d, 2).unwrap();
            for k in 1..=2usize {
                let size = d.n as usize * k;
                if size > 6 {
                    continue;
                }
                let brute = match d.contents(size) {
                    Some(contents) => brute_force_monodromy(size, &contents, true, 1_000_000).unwrap(),
                    None => Rational::zero(),
                };
                assert_eq!(con.coeff(size).as_rational(), Some(brute), "{d} at size {size}");
            }
        }
    }

    #[test]
    fn set_partition_counts() {
        let bell = [1usize, 1, 2, 5, 15, 52];
        for (k, &b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(k).len(), b);
        }
    }
}
