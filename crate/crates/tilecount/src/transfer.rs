//! Brackets `<F>_{w_N}` of monomials in the `p_k^r`, computed modulo primes
//! by a transfer recursion over the `N` runners of the abacus and lifted
//! back by Chinese remaindering and rational reconstruction.
//!
//! For a partition with empty `N`-core and runner partitions
//! `mu_0, ..., mu_{N-1}`, `w_N` is a product of node terms (hooks inside one
//! runner) and edge terms (hooks between neighbouring runners), and every
//! `p_k^r` is a sum of per-runner terms. The bracket numerator is then a
//! trace of a product of transfer matrices indexed by runner partitions,
//! with the polynomial in the `p_k^r` carried along as a jet of divided
//! powers.

use crate::arith::modp::{crt, rational_reconstruct};
use crate::arith::{binomial, factorial, Cyclo, Rational};
use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, Partition};
use crate::qseries::QSeries;
use crate::shifted::{c_k_r, shifted_schur_integer, LambdaNElement, Monomial};
use crate::weights::orbifold_orders;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Primes below `2^31` congruent to 1 mod 24, so every `N`-th and `2N`-th
/// root of unity needed here exists.
const PRIMES: [u64; 6] = [2013265921, 1811939329, 2113929217, 1711276033, 1107296257, 754974721];

/// Largest supported `d`, that is `|lambda| <= N d`.
pub const MAX_DEGREE: usize = 40;

#[derive(Clone, Debug)]
struct RunnerPart {
    size: usize,
    /// local bead positions `mu_j - j + 1`, `j = 1..len`
    ms: Vec<i64>,
    /// holes at or below `mu_1`
    holes: Vec<i64>,
    top: i64,
    len: usize,
    hooks: Vec<u32>,
}

impl RunnerPart {
    fn new(p: &Partition) -> Self {
        let len = p.len();
        let ms: Vec<i64> = (1..=len).map(|j| p.part(j) as i64 - j as i64 + 1).collect();
        let top = p.part(1) as i64;
        let holes = (1 - len as i64..=top).filter(|m| !ms.contains(m)).collect();
        RunnerPart { size: p.size(), ms, holes, top, len, hooks: p.hooks() }
    }

    /// Bead positions down to `floor` inclusive.
    fn beads_down_to(&self, floor: i64) -> impl Iterator<Item = i64> + '_ {
        let vac = -(self.len as i64);
        self.ms.iter().copied().filter(move |&m| m >= floor).chain((floor..=vac).rev())
    }

    /// Holes in `[1 - len, upto]`, increasing.
    fn holes_up_to(&self, upto: i64) -> impl Iterator<Item = i64> + '_ {
        let above = (self.top + 1).max(1 - self.len as i64);
        self.holes.iter().copied().take_while(move |&h| h <= upto).chain(above..=upto)
    }
}

/// Product of the hook lengths `N (m - m') + delta > 0` over beads `m` of
/// `mu` and holes `m'` of `nu` on two runners whose labels differ by
/// `delta` (a bead at `N m - a`, a hole at `N m' - b`, `delta = b - a`).
fn cross_hooks(n: i64, mu: &RunnerPart, nu: &RunnerPart, delta: i64, mut f: impl FnMut(u64)) {
    let lag = if delta > 0 { 0 } else { 1 };
    let floor = 1 - nu.len as i64 + lag;
    for m in mu.beads_down_to(floor) {
        for h in nu.holes_up_to(m - lag) {
            let len = n * (m - h) + delta;
            debug_assert!(len > 0);
            f(len as u64);
        }
    }
}

/// Runner configuration where only the listed runners are nonempty.
fn config_positions(n: u32, runners: &[(usize, &RunnerPart)]) -> Vec<i64> {
    let k = runners.iter().map(|(_, r)| r.len).max().unwrap_or(0) + 1;
    let mut pos = Vec::with_capacity(n as usize * k);
    for a in 0..n as usize {
        let part = runners.iter().find(|(b, _)| *b == a).map(|(_, r)| *r);
        for j in 1..=k {
            let m = match part {
                Some(r) if j <= r.len => r.ms[j - 1],
                _ => 1 - j as i64,
            };
            pos.push(n as i64 * m - a as i64);
        }
    }
    pos.sort_unstable_by(|x, y| y.cmp(x));
    pos
}

/// `prod_t sgn_t` over the given orders for a partition with empty `t`-cores,
/// given its top `B` bead positions, which must fill `{0, ..., 1 - B}` once
/// compacted. Each `sgn_t` is the sign of the permutation sending beads to
/// their slots after sliding down their `t`-runners.
pub fn orbifold_sign(positions_desc: &[i64], orders: &[u32]) -> i32 {
    let b = positions_desc.len();
    let mut sign = 1;
    let mut perm = vec![0usize; b];
    let mut seen = vec![false; b];
    for &t in orders {
        let t = t as i64;
        let mut rank = vec![0i64; t as usize];
        for (i, &p) in positions_desc.iter().enumerate() {
            let c = (-p).rem_euclid(t);
            perm[i] = (c + t * rank[c as usize]) as usize;
            rank[c as usize] += 1;
        }
        seen.iter_mut().for_each(|s| *s = false);
        let mut cycles = 0;
        for i in 0..b {
            if !seen[i] {
                cycles += 1;
                let mut j = i;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                }
            }
        }
        if (b - cycles) % 2 == 1 {
            sign = -sign;
        }
    }
    sign
}

fn edge_count(n: u32) -> usize {
    if n == 2 {
        1
    } else {
        n as usize
    }
}

/// Label offsets `(delta for beads of the left runner, delta for beads of
/// the right runner)` on edge `a -> a + 1`.
fn edge_deltas(n: u32, a: usize) -> (i64, i64) {
    if a + 1 == n as usize && n > 2 {
        (-(n as i64 - 1), n as i64 - 1)
    } else {
        (1, -1)
    }
}

/// Prime-independent data: runner partitions and the signs of the node and
/// edge factors.
struct Tables {
    n: u32,
    d: usize,
    parts: Vec<RunnerPart>,
    upto: Vec<usize>,
    row_off: Vec<usize>,
    node_sign: Vec<Vec<i8>>,
    edge_sign: Vec<Vec<i8>>,
}

impl Tables {
    fn new(n: u32, d: usize) -> Result<Self> {
        let orders = orbifold_orders(n).ok_or_else(|| Error::Domain(format!("no orbifold for N = {n}")))?;
        let mut parts = Vec::new();
        let mut upto = Vec::with_capacity(d + 1);
        for s in 0..=d {
            parts.extend(enumerate_partitions(s).iter().map(RunnerPart::new));
            upto.push(parts.len());
        }
        let mut row_off = Vec::with_capacity(parts.len() + 1);
        let mut off = 0;
        for p in &parts {
            row_off.push(off);
            off += upto[d - p.size];
        }
        row_off.push(off);
        let single = |a: usize, p: &RunnerPart| orbifold_sign(&config_positions(n, &[(a, p)]), &orders) as i8;
        let node_sign: Vec<Vec<i8>> = (0..n as usize).map(|a| parts.iter().map(|p| single(a, p)).collect()).collect();
        let mut edge_sign = Vec::new();
        for a in 0..edge_count(n) {
            let b = (a + 1) % n as usize;
            let mut row = vec![0i8; off];
            for (i, mu) in parts.iter().enumerate() {
                for (j, nu) in parts[..upto[d - mu.size]].iter().enumerate() {
                    let s = orbifold_sign(&config_positions(n, &[(a, mu), (b, nu)]), &orders) as i8;
                    row[row_off[i] + j] = s * node_sign[a][i] * node_sign[b][j];
                }
            }
            edge_sign.push(row);
        }
        Ok(Tables { n, d, parts, upto, row_off, node_sign, edge_sign })
    }
}

/// Index set for the jets: all exponent vectors below some requested
/// monomial, with the convolution table of the divided-power product.
struct JetPlan {
    gens: Vec<(u32, u32)>,
    index: Vec<Vec<u8>>,
    conv: Vec<(usize, usize, usize)>,
    targets: Vec<Vec<u8>>,
}

impl JetPlan {
    fn new(n: u32, monomials: &[Monomial]) -> Result<Self> {
        let mut gens: Vec<(u32, u32)> = monomials.iter().flat_map(|m| m.0.iter().copied()).collect();
        gens.sort_unstable();
        gens.dedup();
        if let Some(&(k, r)) = gens.iter().find(|&&(k, r)| k == 0 || r >= n) {
            return Err(Error::Invalid(format!("generator p_{k}^{r} is not valid for N = {n}")));
        }
        let targets: Vec<Vec<u8>> = monomials
            .iter()
            .map(|m| gens.iter().map(|g| m.0.iter().filter(|x| *x == g).count() as u8).collect())
            .collect();
        let mut set = BTreeSet::new();
        for t in &targets {
            let mut cur = vec![0u8; gens.len()];
            loop {
                set.insert(cur.clone());
                let mut i = 0;
                while i < cur.len() && cur[i] == t[i] {
                    cur[i] = 0;
                    i += 1;
                }
                if i == cur.len() {
                    break;
                }
                cur[i] += 1;
            }
        }
        let index: Vec<Vec<u8>> = set.into_iter().collect();
        let pos = |v: &Vec<u8>| index.binary_search(v).ok();
        let mut conv = Vec::new();
        for (t, tv) in index.iter().enumerate() {
            for (i, iv) in index.iter().enumerate() {
                if iv.iter().zip(tv).all(|(x, y)| x <= y) {
                    let rest: Vec<u8> = tv.iter().zip(iv).map(|(y, x)| y - x).collect();
                    conv.push((t, i, pos(&rest).expect("index set is a downset")));
                }
            }
        }
        Ok(JetPlan { gens, index, conv, targets })
    }
}

#[inline(always)]
fn mulm<const P: u64>(a: u64, b: u64) -> u64 {
    a * b % P
}

#[inline(always)]
fn addm<const P: u64>(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn powm<const P: u64>(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm::<P>(acc, a);
        }
        a = mulm::<P>(a, a);
        e >>= 1;
    }
    acc
}

fn invm<const P: u64>(a: u64) -> u64 {
    assert!(!a.is_multiple_of(P), "division by zero mod p");
    powm::<P>(a, P - 2)
}

fn from_i128<const P: u64>(x: i128) -> u64 {
    x.rem_euclid(P as i128) as u64
}

fn rational_modp<const P: u64>(x: &Rational) -> u64 {
    let p = BigInt::from(P);
    let num = (x.numer() % &p + &p) % &p;
    let den = (x.denom() % &p + &p) % &p;
    let num: u64 = num.try_into().unwrap();
    let den: u64 = den.try_into().unwrap();
    mulm::<P>(num, invm::<P>(den))
}

fn root_of_unity<const P: u64>(m: u64) -> u64 {
    let primes: Vec<u64> = (2..=m).filter(|&q| m.is_multiple_of(q) && (2..q).all(|d| q % d != 0)).collect();
    for g in 2..P {
        let x = powm::<P>(g, (P - 1) / m);
        if primes.iter().all(|&q| powm::<P>(x, m / q) != 1) {
            return x;
        }
    }
    unreachable!()
}

/// Embeddings of `Q(zeta_N)` as exponents `e'` of a primitive `2N`-th root.
fn embeddings(n: u32) -> Vec<u64> {
    let m = 2 * n as u64;
    let mut seen = BTreeSet::new();
    (1..m)
        .filter(|&e| num_integer::gcd(e, m) == 1)
        .filter(|&e| seen.insert(e % n as u64))
        .collect()
}

fn cyclo_at<const P: u64>(c: &Cyclo, psi: u64) -> u64 {
    let mut acc = 0;
    let mut x = 1;
    for coef in c.coeffs() {
        acc = addm::<P>(acc, mulm::<P>(rational_modp::<P>(coef), x));
        x = mulm::<P>(x, psi);
    }
    acc
}

/// Edge factors with their signs, laid out by `Tables::row_off`.
fn edge_values<const P: u64>(t: &Tables) -> Vec<Vec<u64>> {
    let n = t.n;
    let d = t.d;
    let mut edge = Vec::with_capacity(t.edge_sign.len());
    for a in 0..t.edge_sign.len() {
        let (d1, d2) = edge_deltas(n, a);
        let mut row = vec![0u64; t.edge_sign[a].len()];
        for (i, mu) in t.parts.iter().enumerate() {
            for (j, nu) in t.parts[..t.upto[d - mu.size]].iter().enumerate() {
                let mut v = 1u64;
                cross_hooks(n as i64, mu, nu, d1, |h| v = mulm::<P>(v, h));
                cross_hooks(n as i64, nu, mu, d2, |h| v = mulm::<P>(v, h));
                if n == 2 {
                    v = mulm::<P>(v, v);
                }
                if t.edge_sign[a][t.row_off[i] + j] < 0 {
                    v = (P - v) % P;
                }
                row[t.row_off[i] + j] = v;
            }
        }
        edge.push(row);
    }
    edge
}

/// Trace of the transfer product: `total[s]` is the jet summed over all
/// partitions of size `N s` with empty `N`-core. `node[a]` holds a jet of
/// length `l` per runner partition and `combine(node, incoming, out)`
/// multiplies a node jet into an incoming jet.
fn sweep<const P: u64>(
    t: &Tables,
    node: &[Vec<u64>],
    l: usize,
    edge: &[Vec<u64>],
    combine: impl Fn(&[u64], &[u64], &mut [u64]),
) -> Vec<Vec<u64>> {
    let n = t.n;
    let d = t.d;
    let np = t.parts.len();
    let stride = d + 1;
    let mut total = vec![vec![0u64; l]; d + 1];
    let mut buf = vec![0u64; np * stride * l];
    let mut touched_flag = vec![false; np * stride];
    let mut touched: Vec<usize> = Vec::new();
    let mut tmp = vec![0u64; l];
    for mu0 in 0..np {
        let s0 = t.parts[mu0].size;
        let mut keys: Vec<(usize, usize)> = vec![(mu0, s0)];
        let mut jets: Vec<u64> = node[0][mu0 * l..(mu0 + 1) * l].to_vec();
        for a in 1..n as usize {
            let ed = &edge[a - 1];
            for (kidx, &(mu, s)) in keys.iter().enumerate() {
                let jet = &jets[kidx * l..(kidx + 1) * l];
                let row = &ed[t.row_off[mu]..];
                for nu in 0..t.upto[d - s] {
                    let v = row[nu];
                    if v == 0 {
                        continue;
                    }
                    let key = nu * stride + s + t.parts[nu].size;
                    if !touched_flag[key] {
                        touched_flag[key] = true;
                        touched.push(key);
                    }
                    let dst = &mut buf[key * l..(key + 1) * l];
                    for (x, &y) in dst.iter_mut().zip(jet) {
                        *x = (*x + v * y) % P;
                    }
                }
            }
            keys.clear();
            jets.clear();
            touched.sort_unstable();
            for &key in &touched {
                touched_flag[key] = false;
                let nu = key / stride;
                let s = key % stride;
                let src = &mut buf[key * l..(key + 1) * l];
                combine(&node[a][nu * l..(nu + 1) * l], src, &mut tmp);
                src.iter_mut().for_each(|x| *x = 0);
                keys.push((nu, s));
                jets.extend_from_slice(&tmp);
            }
            touched.clear();
        }
        for (kidx, &(nu, s)) in keys.iter().enumerate() {
            let v = if n == 2 { 1 } else { edge[n as usize - 1][t.row_off[nu] + mu0] };
            if v == 0 {
                continue;
            }
            for (x, &y) in total[s].iter_mut().zip(&jets[kidx * l..(kidx + 1) * l]) {
                *x = (*x + v * y) % P;
            }
        }
    }
    total
}

/// Residues of the bracket coefficients: `[monomial][d][coordinate in Q(zeta_N)]`.
fn run_prime<const P: u64>(t: &Tables, plan: &JetPlan, monomials: &[Monomial]) -> Vec<Vec<Vec<u64>>> {
    let n = t.n;
    let d = t.d;
    let embs = embeddings(n);
    let ne = embs.len();
    let nj = plan.index.len();
    let l = ne * nj;
    let psi = root_of_unity::<P>(2 * n as u64);
    let zeta_n: Vec<u64> = embs.iter().map(|&e| powm::<P>(psi, 2 * e)).collect();
    let np = t.parts.len();

    // inverse factorials and powers of 1/2
    let inv_fact: Vec<u64> = (0..8u64).map(|k| invm::<P>((1..=k).product::<u64>().max(1))).collect();
    let inv_two = invm::<P>(2);

    // node jets: [a][mu][e * nj + j]
    let mut node = vec![vec![0u64; np * l]; n as usize];
    for a in 0..n as usize {
        for (i, mu) in t.parts.iter().enumerate() {
            let mut den = powm::<P>(n as u64, mu.size as u64);
            for &h in &mu.hooks {
                den = mulm::<P>(den, h as u64);
            }
            let mut scalar = invm::<P>(mulm::<P>(den, den));
            if t.node_sign[a][i] < 0 {
                scalar = (P - scalar) % P;
            }
            let phis: Vec<u64> = plan
                .gens
                .iter()
                .map(|&(k, _)| {
                    let mut s: i128 = 0;
                    for (j, &m) in mu.ms.iter().enumerate() {
                        let x = 2 * n as i128 * m as i128 - 2 * a as i128 - 1;
                        let y = 2 * n as i128 * (-(j as i128)) - 2 * a as i128 - 1;
                        s += x.pow(k) - y.pow(k);
                    }
                    mulm::<P>(from_i128::<P>(s), powm::<P>(inv_two, k as u64))
                })
                .collect();
            for (e, &z) in zeta_n.iter().enumerate() {
                let xs: Vec<u64> = plan
                    .gens
                    .iter()
                    .zip(&phis)
                    .map(|(&(_, r), &ph)| {
                        let pw = (n as u64 - (r as u64 * a as u64) % n as u64) % n as u64;
                        mulm::<P>(powm::<P>(z, pw), ph)
                    })
                    .collect();
                for (j, jv) in plan.index.iter().enumerate() {
                    let mut v = scalar;
                    for (g, &ex) in jv.iter().enumerate() {
                        v = mulm::<P>(v, mulm::<P>(powm::<P>(xs[g], ex as u64), inv_fact[ex as usize]));
                    }
                    node[a][i * l + e * nj + j] = v;
                }
            }
        }
    }

    let edge = edge_values::<P>(t);
    let total = sweep::<P>(t, &node, l, &edge, |nd, src, tmp| {
        tmp.iter_mut().for_each(|x| *x = 0);
        for e in 0..ne {
            let o = e * nj;
            for &(tg, i, k) in &plan.conv {
                tmp[o + tg] = (tmp[o + tg] + nd[o + i] * src[o + k]) % P;
            }
        }
    });

    // assemble monomials, divide by the weight sum and solve for coordinates
    let phi = ne;
    let mut out = vec![vec![vec![0u64; phi]; d + 1]; monomials.len()];
    for (e, &emb) in embs.iter().enumerate() {
        let psi_e = powm::<P>(psi, emb);
        let consts: Vec<u64> = plan.gens.iter().map(|&(k, r)| cyclo_at::<P>(&c_k_r(n, r as i64, k as usize), psi_e)).collect();
        let den: Vec<u64> = (0..=d).map(|s| total[s][e * nj]).collect();
        let den_inv0 = invm::<P>(den[0]);
        for (mi, tv) in plan.targets.iter().enumerate() {
            let mut num = vec![0u64; d + 1];
            for (j, jv) in plan.index.iter().enumerate() {
                if !jv.iter().zip(tv).all(|(x, y)| x <= y) {
                    continue;
                }
                let mut c = 1u64;
                for (g, (&jx, &tx)) in jv.iter().zip(tv).enumerate() {
                    let b = binomial(tx as i64, jx as i64);
                    let b: u64 = from_i128::<P>(i128::try_from(b).unwrap());
                    let f: u64 = from_i128::<P>(i128::try_from(factorial(jx as u64)).unwrap());
                    c = mulm::<P>(c, mulm::<P>(mulm::<P>(b, f), powm::<P>(consts[g], (tx - jx) as u64)));
                }
                for s in 0..=d {
                    num[s] = addm::<P>(num[s], mulm::<P>(c, total[s][e * nj + j]));
                }
            }
            // series division num / den
            let mut q = vec![0u64; d + 1];
            for s in 0..=d {
                let mut acc = num[s];
                for i in 1..=s {
                    acc = (acc + P - mulm::<P>(den[i], q[s - i])) % P;
                }
                q[s] = mulm::<P>(acc, den_inv0);
            }
            for s in 0..=d {
                out[mi][s][e] = q[s];
            }
        }
    }
    // values at the embeddings -> coordinates in the basis 1, zeta_N, ...
    let mut vander: Vec<Vec<u64>> = zeta_n.iter().map(|&z| (0..phi).map(|i| powm::<P>(z, i as u64)).collect()).collect();
    let inv = invert_matrix::<P>(&mut vander);
    for series in out.iter_mut() {
        for vals in series.iter_mut() {
            let coords: Vec<u64> =
                (0..phi).map(|i| (0..phi).fold(0, |acc, e| addm::<P>(acc, mulm::<P>(inv[i][e], vals[e])))).collect();
            *vals = coords;
        }
    }
    out
}

fn invert_matrix<const P: u64>(m: &mut [Vec<u64>]) -> Vec<Vec<u64>> {
    let k = m.len();
    let mut inv: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect();
    for c in 0..k {
        let piv = (c..k).find(|&r| m[r][c] != 0).expect("Vandermonde nodes are distinct");
        m.swap(c, piv);
        inv.swap(c, piv);
        let f = invm::<P>(m[c][c]);
        for j in 0..k {
            m[c][j] = mulm::<P>(m[c][j], f);
            inv[c][j] = mulm::<P>(inv[c][j], f);
        }
        for r in 0..k {
            if r != c && m[r][c] != 0 {
                let g = m[r][c];
                for j in 0..k {
                    m[r][j] = (m[r][j] + P - mulm::<P>(g, m[c][j])) % P;
                    inv[r][j] = (inv[r][j] + P - mulm::<P>(g, inv[c][j])) % P;
                }
            }
        }
    }
    inv
}

fn run_prime_index(i: usize, t: &Tables, plan: &JetPlan, monomials: &[Monomial]) -> Vec<Vec<Vec<u64>>> {
    match i {
        0 => run_prime::<{ PRIMES[0] }>(t, plan, monomials),
        1 => run_prime::<{ PRIMES[1] }>(t, plan, monomials),
        2 => run_prime::<{ PRIMES[2] }>(t, plan, monomials),
        3 => run_prime::<{ PRIMES[3] }>(t, plan, monomials),
        4 => run_prime::<{ PRIMES[4] }>(t, plan, monomials),
        _ => run_prime::<{ PRIMES[5] }>(t, plan, monomials),
    }
}

/// `<m>_{w_N}` for each monomial, as series in `q^{|lambda|/N}` (unit `N`,
/// order `2N`) known for `|lambda| < N (d_max + 1)`.
pub fn bracket_monomials(n: u32, monomials: &[Monomial], d_max: usize) -> Result<Vec<QSeries>> {
    if d_max > MAX_DEGREE {
        return Err(Error::Budget(format!("degree {d_max} exceeds the transfer limit {MAX_DEGREE}")));
    }
    let tables = Tables::new(n, d_max)?;
    let plan = JetPlan::new(n, monomials)?;
    let rec = lift_residues(|pi| run_prime_index(pi, &tables, &plan, monomials))?;
    rec.into_iter().map(|s| to_series(n, d_max, s)).collect()
}

/// Exact rationals from the residues `f(i)` modulo `PRIMES[i]`, adding
/// primes until two successive reconstructions agree.
fn lift_residues(f: impl Fn(usize) -> Vec<Vec<Vec<u64>>>) -> Result<Vec<Vec<Vec<Rational>>>> {
    let mut residues: Option<Vec<Vec<Vec<BigInt>>>> = None;
    let mut modulus = BigInt::one();
    let mut previous: Option<Vec<Vec<Vec<Rational>>>> = None;
    for (pi, &p) in PRIMES.iter().enumerate() {
        let r = f(pi);
        residues = Some(match residues {
            None => r.iter().map(|s| s.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect()).collect(),
            Some(old) => old
                .iter()
                .zip(&r)
                .map(|(so, sn)| {
                    so.iter()
                        .zip(sn)
                        .map(|(vo, vn)| vo.iter().zip(vn).map(|(a, &b)| crt(a, &modulus, b, p)).collect())
                        .collect()
                })
                .collect(),
        });
        modulus *= BigInt::from(p);
        let res = residues.as_ref().unwrap();
        let rec: Option<Vec<Vec<Vec<Rational>>>> = res
            .iter()
            .map(|s| s.iter().map(|v| v.iter().map(|a| rational_reconstruct(a, &modulus)).collect()).collect())
            .collect();
        if let Some(rec) = rec {
            if previous.as_ref() == Some(&rec) {
                return Ok(rec);
            }
            previous = Some(rec);
        } else {
            previous = None;
        }
    }
    Err(Error::Budget("rational reconstruction did not stabilise".into()))
}

/// One term `coef * prod_a prod_{rho in shapes[a]} s*_rho(mu_a)` of a
/// function of the runner partitions `mu_0, ..., mu_{N-1}` of a partition
/// with empty `N`-core.
#[derive(Clone, Debug, PartialEq)]
pub struct RunnerProduct {
    pub coef: Rational,
    pub shapes: Vec<Vec<Partition>>,
}

/// Residues of `[numerator, denominator][d][0]` for a sum of runner products.
fn run_prime_products<const P: u64>(t: &Tables, values: &[Vec<Vec<BigInt>>], terms: &[RunnerProduct]) -> Vec<Vec<Vec<u64>>> {
    let n = t.n as usize;
    let d = t.d;
    let np = t.parts.len();
    let l = terms.len() + 1;
    let mut node = vec![vec![0u64; np * l]; n];
    for (a, node_a) in node.iter_mut().enumerate() {
        for (i, mu) in t.parts.iter().enumerate() {
            let mut den = powm::<P>(n as u64, mu.size as u64);
            for &h in &mu.hooks {
                den = mulm::<P>(den, h as u64);
            }
            let mut scalar = invm::<P>(mulm::<P>(den, den));
            if t.node_sign[a][i] < 0 {
                scalar = (P - scalar) % P;
            }
            node_a[i * l] = scalar;
            for c in 0..terms.len() {
                let s = rational_modp::<P>(&Rational::from_integer(values[c][a][i].clone()));
                node_a[i * l + c + 1] = mulm::<P>(scalar, s);
            }
        }
    }
    let edge = edge_values::<P>(t);
    let total = sweep::<P>(t, &node, l, &edge, |nd, src, out| {
        for ((o, &x), &y) in out.iter_mut().zip(nd).zip(src) {
            *o = mulm::<P>(x, y);
        }
    });
    let coefs: Vec<u64> = terms.iter().map(|c| rational_modp::<P>(&c.coef)).collect();
    let num: Vec<Vec<u64>> = (0..=d)
        .map(|s| vec![coefs.iter().enumerate().fold(0, |acc, (c, &k)| addm::<P>(acc, mulm::<P>(k, total[s][c + 1])))])
        .collect();
    let den: Vec<Vec<u64>> = (0..=d).map(|s| vec![total[s][0]]).collect();
    vec![num, den]
}

fn run_products_index(i: usize, t: &Tables, values: &[Vec<Vec<BigInt>>], terms: &[RunnerProduct]) -> Vec<Vec<Vec<u64>>> {
    match i {
        0 => run_prime_products::<{ PRIMES[0] }>(t, values, terms),
        1 => run_prime_products::<{ PRIMES[1] }>(t, values, terms),
        2 => run_prime_products::<{ PRIMES[2] }>(t, values, terms),
        3 => run_prime_products::<{ PRIMES[3] }>(t, values, terms),
        4 => run_prime_products::<{ PRIMES[4] }>(t, values, terms),
        _ => run_prime_products::<{ PRIMES[5] }>(t, values, terms),
    }
}

/// `(sum_lambda q^{|lambda|/N} w_N(lambda) F(lambda), sum_lambda q^{|lambda|/N} w_N(lambda))`
/// for `F` the sum of the runner products, known for `|lambda| < N (d_max + 1)`.
pub fn runner_product_sums(n: u32, terms: &[RunnerProduct], d_max: usize) -> Result<(QSeries, QSeries)> {
    if d_max > MAX_DEGREE {
        return Err(Error::Budget(format!("degree {d_max} exceeds the transfer limit {MAX_DEGREE}")));
    }
    if let Some(bad) = terms.iter().find(|c| c.shapes.len() != n as usize) {
        return Err(Error::Invalid(format!("a runner product needs {n} shapes, got {}", bad.shapes.len())));
    }
    let tables = Tables::new(n, d_max)?;
    let parts: Vec<Partition> = (0..=d_max).flat_map(enumerate_partitions).collect();
    let mut cache: std::collections::HashMap<Partition, Vec<BigInt>> = std::collections::HashMap::new();
    let mut values = Vec::with_capacity(terms.len());
    for c in terms {
        let mut per_runner = Vec::with_capacity(n as usize);
        for shapes in &c.shapes {
            let mut column = vec![BigInt::one(); parts.len()];
            for shape in shapes.iter().filter(|r| !r.is_empty()) {
                let col = cache
                    .entry(shape.clone())
                    .or_insert_with(|| parts.iter().map(|mu| shifted_schur_integer(shape, mu)).collect());
                column.iter_mut().zip(col.iter()).for_each(|(x, y)| *x *= y);
            }
            per_runner.push(column);
        }
        values.push(per_runner);
    }
    let rec = lift_residues(|pi| run_products_index(pi, &tables, &values, terms))?;
    let series = |v: &Vec<Vec<Rational>>| {
        let mut coeffs = vec![Cyclo::zero(1); n as usize * (d_max + 1)];
        for (s, x) in v.iter().enumerate() {
            coeffs[n as usize * s] = Cyclo::from_rational(1, x[0].clone());
        }
        QSeries::new(1, n, Rational::zero(), coeffs)
    };
    Ok((series(&rec[0])?, series(&rec[1])?))
}

fn to_series(n: u32, d_max: usize, coords: Vec<Vec<Rational>>) -> Result<QSeries> {
    let len = n as usize * (d_max + 1);
    let mut coeffs = vec![Cyclo::zero(2 * n); len];
    for (s, c) in coords.into_iter().enumerate() {
        coeffs[n as usize * s] = Cyclo::from_coeffs(n, c)?.lift(2 * n)?;
    }
    QSeries::new(2 * n, n, Rational::zero(), coeffs)
}

/// `<F>_{w_N}` for a linear combination of monomials.
pub fn bracket_element(e: &LambdaNElement, d_max: usize) -> Result<QSeries> {
    let monos: Vec<Monomial> = e.terms.keys().cloned().collect();
    let series = bracket_monomials(e.n, &monos, d_max)?;
    let mut acc = QSeries::zero(2 * e.n, e.n as usize * (d_max + 1)).refine_unit(e.n)?;
    for (s, m) in series.iter().zip(&monos) {
        acc = acc.add(&s.scale(&e.coeff(m)))?;
    }
    Ok(acc)
}

/// `w_N(lambda)` through the runner factorization used by the engine, for
/// the partition with empty `N`-core and runner partitions `runners`.
pub fn factorized_weight(n: u32, runners: &[Partition]) -> Result<Rational> {
    let orders = orbifold_orders(n).ok_or_else(|| Error::Domain(format!("no orbifold for N = {n}")))?;
    if runners.len() != n as usize {
        return Err(Error::Invalid(format!("expected {n} runner partitions")));
    }
    let parts: Vec<RunnerPart> = runners.iter().map(RunnerPart::new).collect();
    let mut value = Rational::one();
    for (a, p) in parts.iter().enumerate() {
        let mut den = BigInt::from(n).pow(p.size as u32);
        for &h in &p.hooks {
            den *= h;
        }
        let sign = orbifold_sign(&config_positions(n, &[(a, p)]), &orders);
        value *= Rational::new(BigInt::from(sign), &den * &den);
    }
    for a in 0..edge_count(n) {
        let b = (a + 1) % n as usize;
        let (d1, d2) = edge_deltas(n, a);
        let mut prod = BigInt::one();
        cross_hooks(n as i64, &parts[a], &parts[b], d1, |h| prod *= h);
        cross_hooks(n as i64, &parts[b], &parts[a], d2, |h| prod *= h);
        if n == 2 {
            prod = &prod * &prod;
        }
        let s = orbifold_sign(&config_positions(n, &[(a, &parts[a]), (b, &parts[b])]), &orders)
            * orbifold_sign(&config_positions(n, &[(a, &parts[a])]), &orders)
            * orbifold_sign(&config_positions(n, &[(b, &parts[b])]), &orders);
        value *= Rational::from_integer(prod * s);
    }
    Ok(value)
}

/// The partition with empty `N`-core whose runner `a` (positions `N m - a`)
/// carries `runners[a]`.
pub fn from_runners(n: u32, runners: &[Partition]) -> Result<Partition> {
    let parts: Vec<RunnerPart> = runners.iter().map(RunnerPart::new).collect();
    let cfg: Vec<(usize, &RunnerPart)> = parts.iter().enumerate().collect();
    Partition::from_positions(&config_positions(n, &cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::sgn_t;
    use crate::partitions::multipartitions;
    use crate::shifted::p_k_r;
    use crate::weights::w_n;

    #[test]
    fn runner_labels_match_quotients() {
        for n in [2u32, 3, 4, 6] {
            for k in 0..=4 {
                for qs in multipartitions(n as usize, k) {
                    let l = from_runners(n, &qs).unwrap();
                    assert_eq!(l.core_and_quotients(n).quotients, qs);
                }
            }
        }
    }

    #[test]
    fn runner_products_match_enumeration() {
        use crate::shifted::shifted_schur;
        let shapes = |a: &str, b: &str, c: &str| {
            [a, b, c].iter().map(|s| vec![Partition::parse(s).unwrap()]).collect::<Vec<_>>()
        };
        let terms = vec![
            RunnerProduct { coef: Rational::one(), shapes: shapes("1", "", "") },
            RunnerProduct { coef: Rational::new(3.into(), 2.into()), shapes: shapes("1", "1", "2") },
            RunnerProduct { coef: -Rational::one(), shapes: shapes("", "1,1", "") },
        ];
        let (num, den) = runner_product_sums(3, &terms, 4).unwrap();
        for k in 0..=4 {
            let mut a = Rational::zero();
            let mut b = Rational::zero();
            for qs in multipartitions(3, k) {
                let l = from_runners(3, &qs).unwrap();
                let w = w_n(&l, 3);
                let f: Rational = terms
                    .iter()
                    .map(|t| {
                        t.shapes.iter().zip(&qs).fold(t.coef.clone(), |acc, (sh, q)| acc * shifted_schur(&sh[0], q))
                    })
                    .sum();
                a += &w * f;
                b += w;
            }
            assert_eq!(num.coeff(3 * k).as_rational(), Some(a));
            assert_eq!(den.coeff(3 * k).as_rational(), Some(b));
        }
    }

    #[test]
    fn primes_are_prime_and_one_mod_24() {
        for &p in &PRIMES {
            assert_eq!(p % 24, 1);
            assert!(p < 1 << 31);
            for a in [2u64, 3, 5, 7, 11] {
                assert_eq!(crate::arith::modp::pow_mod(a, p - 1, p), 1);
            }
        }
    }

    #[test]
    fn sign_matches_rim_hook_signs() {
        for n in [2u32, 3, 4, 6] {
            let orders = orbifold_orders(n).unwrap();
            for m in 0..=3 {
                for qs in multipartitions(n as usize, m) {
                    let lam = from_runners(n, &qs).unwrap();
                    let parts: Vec<RunnerPart> = qs.iter().map(RunnerPart::new).collect();
                    let cfg: Vec<(usize, &RunnerPart)> = parts.iter().enumerate().collect();
                    let s = orbifold_sign(&config_positions(n, &cfg), &orders);
                    let direct: i32 = orders.iter().map(|&t| sgn_t(&lam, t)).product();
                    assert_eq!(s, direct, "N={n} {lam}");
                }
            }
        }
    }

    #[test]
    fn factorization_matches_hook_formula() {
        for (n, max) in [(2u32, 5usize), (3, 4), (4, 3), (6, 2)] {
            for m in 0..=max {
                for qs in multipartitions(n as usize, m) {
                    let lam = from_runners(n, &qs).unwrap();
                    assert_eq!(factorized_weight(n, &qs).unwrap(), w_n(&lam, n), "N={n} {qs:?}");
                }
            }
        }
    }

    fn direct_bracket(n: u32, mono: &Monomial, d: usize) -> Vec<Cyclo> {
        let e = LambdaNElement::monomial(n, mono.clone(), Cyclo::one(2 * n));
        let mut num = vec![Cyclo::zero(2 * n); d + 1];
        let mut den = vec![Cyclo::zero(2 * n); d + 1];
        for s in 0..=d {
            for qs in multipartitions(n as usize, s) {
                let lam = from_runners(n, &qs).unwrap();
                let w = w_n(&lam, n);
                num[s] += &e.eval(&lam).scale(&w);
                den[s] += &Cyclo::from_rational(2 * n, w);
            }
        }
        let num = QSeries::from_coeffs(2 * n, num).unwrap();
        let den = QSeries::from_coeffs(2 * n, den).unwrap();
        num.div(&den).unwrap().coeffs().to_vec()
    }

    #[test]
    fn engine_matches_enumeration() {
        for (n, d) in [(2u32, 5usize), (3, 4), (4, 3), (6, 2)] {
            let monos = vec![
                Monomial::one(),
                Monomial::new(n, vec![(1, 1)]),
                Monomial::new(n, vec![(1, 0), (1, 1)]),
                Monomial::new(n, vec![(2, 1), (1, n - 1)]),
                Monomial::new(n, vec![(1, 1), (1, 1), (1, 1)]),
                Monomial::new(n, vec![(3, 0)]),
            ];
            let got = bracket_monomials(n, &monos, d).unwrap();
            for (m, s) in monos.iter().zip(&got) {
                let s = s.to_integer_exponents().unwrap();
                assert_eq!(s.len(), d + 1);
                assert_eq!(s.coeffs(), &direct_bracket(n, m, d)[..], "N={n} {m}");
            }
        }
    }

    #[test]
    fn p_k_r_splits_over_runners() {
        // the per-runner sums used by the node jets reproduce p_k^r
        let n = 3u32;
        let qs = vec![Partition::new(vec![2, 1]).unwrap(), Partition::empty(), Partition::new(vec![1]).unwrap()];
        let lam = from_runners(n, &qs).unwrap();
        let e = LambdaNElement::monomial(n, Monomial::new(n, vec![(2, 1)]), Cyclo::one(6));
        assert_eq!(e.eval(&lam), p_k_r(&lam, n, 1, 2));
    }
}
