//! Partitions, hook lengths, bead sequences, rim hooks, cores and quotients.
//!
//! Bead positions use the integer convention `p = lambda_i - i + 1`, i.e. the
//! half-integer slot plus 1/2. The vacuum occupies every `p <= 0`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid("partition parts must be weakly decreasing".into()));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zeros; for callers holding an unordered multiset.
    pub fn from_multiset(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad part {x:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `lambda_i` with 1-based `i`, zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return u32::MAX;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Self {
        let first = self.0.first().copied().unwrap_or(0);
        Partition((0..first).map(|j| self.0.iter().filter(|&&x| x > j).count() as u32).collect())
    }

    pub fn contains(&self, inner: &Partition) -> bool {
        inner.len() <= self.len() && inner.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Hook lengths row by row.
    pub fn hook_lengths(&self) -> Vec<Vec<u32>> {
        let c = self.conjugate();
        self.0
            .iter()
            .enumerate()
            .map(|(i, &row)| (0..row).map(|j| (row - j - 1) + (c.0[j as usize] - i as u32 - 1) + 1).collect())
            .collect()
    }

    pub fn hooks(&self) -> Vec<u32> {
        self.hook_lengths().into_iter().flatten().collect()
    }

    /// The first `count` bead positions `lambda_i - i + 1`.
    pub fn positions(&self, count: usize) -> Vec<i64> {
        (1..=count).map(|i| self.part(i) as i64 - i as i64 + 1).collect()
    }

    /// Inverse of [`positions`]: the beads must be distinct and every position
    /// below the smallest one is taken as occupied.
    pub fn from_positions(beads: &[i64]) -> Result<Self> {
        let mut ps = beads.to_vec();
        ps.sort_unstable_by(|a, b| b.cmp(a));
        if ps.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("repeated bead".into()));
        }
        let base = ps.last().copied().unwrap_or(1);
        // charge relative to a full sea below `base`
        let charge = ps.iter().filter(|&&p| p > 0).count() as i64 + (base - 1).max(0)
            - (base..=0).filter(|p| !ps.contains(p)).count() as i64;
        if charge != 0 {
            return Err(Error::Invalid(format!("bead sequence has charge {charge}")));
        }
        let mut parts = Vec::new();
        for (j, &p) in ps.iter().enumerate() {
            let v = p + j as i64;
            if v < 0 {
                return Err(Error::Invalid("bead sequence is not a partition".into()));
            }
            if v > 0 {
                parts.push(v as u32);
            }
        }
        Partition::new(parts)
    }

    pub fn to_beads(&self) -> BeadSequence {
        BeadSequence { occupied: self.positions(self.len()).into_iter().collect(), floor: 1 - self.len() as i64 }
    }

    pub fn from_beads(b: &BeadSequence) -> Result<Self> {
        if b.charge() != 0 {
            return Err(Error::Invalid(format!("bead sequence has charge {}", b.charge())));
        }
        let beads: Vec<i64> = b.occupied.iter().copied().collect();
        let mut ps = beads;
        ps.extend((b.floor - 2..b.floor).rev());
        Partition::from_positions(&ps)
    }

    /// Removable rim hooks of length `t`.
    pub fn rim_hooks(&self, t: u32) -> Vec<RimHook> {
        let count = self.len() + t as usize;
        let ps = self.positions(count);
        let set: BTreeSet<i64> = ps.iter().copied().collect();
        let t = t as i64;
        let mut out = Vec::new();
        for &x in &ps {
            let y = x - t;
            if y >= 1 - count as i64 && !set.contains(&y) {
                let crossed = set.range(y + 1..x).count() as u32;
                out.push(RimHook { length: t as u32, rows_touched: crossed + 1, from: x, to: y });
            }
        }
        out
    }

    pub fn remove_rim_hook(&self, h: &RimHook) -> Result<Self> {
        let count = self.len() + h.length as usize;
        let mut ps = self.positions(count);
        let k = ps.iter().position(|&p| p == h.from).ok_or_else(|| Error::Invalid("hook not on partition".into()))?;
        if ps.contains(&h.to) {
            return Err(Error::Invalid("hook target occupied".into()));
        }
        ps[k] = h.to;
        Partition::from_positions(&ps)
    }

    pub fn is_core(&self, t: u32) -> bool {
        !self.hooks().iter().any(|h| h % t == 0)
    }

    pub fn core_and_quotients(&self, t: u32) -> CoreQuotient {
        core_and_quotients(self, t)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Occupied bead positions above `floor`; every position below `floor` is
/// occupied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeadSequence {
    pub occupied: BTreeSet<i64>,
    pub floor: i64,
}

impl BeadSequence {
    pub fn charge(&self) -> i64 {
        let right = self.occupied.iter().filter(|&&p| p > 0).count() as i64;
        let holes = (self.floor.min(1)..=0).filter(|p| !self.occupied.contains(p)).count() as i64;
        right - holes
    }

    pub fn is_occupied(&self, p: i64) -> bool {
        p < self.floor || self.occupied.contains(&p)
    }

    /// The (01)-sequence from position `hi` down to `lo`, with a bar
    /// between positions 1 and 0.
    pub fn window_string(&self, lo: i64, hi: i64) -> String {
        let mut out = String::new();
        for p in (lo..=hi).rev() {
            if p == 0 {
                out.push_str("| ");
            }
            out.push_str(if self.is_occupied(p) { "1 " } else { "0 " });
        }
        out.trim_end().to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RimHook {
    pub length: u32,
    pub rows_touched: u32,
    /// bead position before removal (slot + 1/2)
    pub from: i64,
    /// bead position after removal
    pub to: i64,
}

impl RimHook {
    pub fn sign(&self) -> i32 {
        if self.rows_touched % 2 == 1 {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreQuotient {
    pub core: Partition,
    pub quotients: Vec<Partition>,
    pub sign: i32,
    pub lattice_point: Vec<i64>,
}

/// Runner `i` holds the positions `p = t*m - i`; the vacuum fills `m <= 0`
/// on every runner.
pub fn core_and_quotients(lambda: &Partition, t: u32) -> CoreQuotient {
    assert!(t >= 1);
    let ti = t as i64;
    let mut count = lambda.len();
    count += (t as usize - count % t as usize) % t as usize;
    count += t as usize;
    let ps = lambda.positions(count);
    let mut runners: Vec<Vec<i64>> = vec![Vec::new(); t as usize];
    for &p in &ps {
        let i = (-p).rem_euclid(ti);
        runners[i as usize].push((p + i) / ti);
    }
    let mut quotients = Vec::with_capacity(t as usize);
    let mut charges = Vec::with_capacity(t as usize);
    for r in &runners {
        let lowest = *r.iter().min().unwrap();
        let above = r.iter().filter(|&&m| m > 0).count() as i64;
        let holes = (lowest..=0).filter(|m| !r.contains(m)).count() as i64;
        let c = above - holes;
        charges.push(c);
        let shifted: Vec<i64> = r.iter().map(|m| m - c).collect();
        quotients.push(Partition::from_positions(&shifted).expect("runner quotient"));
    }
    let mut core_beads = Vec::new();
    for (i, r) in runners.iter().enumerate() {
        for k in 0..r.len() as i64 {
            core_beads.push(ti * (charges[i] - k) - i as i64);
        }
    }
    let core = Partition::from_positions(&core_beads).expect("core");
    let sign = if lambda.size() == core.size() { 1 } else { crate::characters::sgn_t(lambda, t) };
    CoreQuotient { core, quotients, sign, lattice_point: charges }
}

/// The partition with the given t-core and t-quotients.
pub fn combine(core: &Partition, quotients: &[Partition]) -> Result<Partition> {
    let t = quotients.len() as u32;
    if t == 0 {
        return Err(Error::Invalid("need at least one quotient".into()));
    }
    if !core.is_core(t) {
        return Err(Error::Domain(format!("{core} is not a {t}-core")));
    }
    let charges = core_and_quotients(core, t).lattice_point;
    let total: usize = core.size() + t as usize * quotients.iter().map(|q| q.size()).sum::<usize>();
    let depth = total as i64 + quotients.iter().map(|q| q.len() as i64).max().unwrap_or(0)
        + charges.iter().map(|c| c.abs()).max().unwrap_or(0)
        + 2;
    let ti = t as i64;
    let mut beads = Vec::new();
    for (i, q) in quotients.iter().enumerate() {
        for j in 1..=depth {
            let m = charges[i] + q.part(j as usize) as i64 - j + 1;
            beads.push(ti * m - i as i64);
        }
    }
    beads.sort_unstable_by(|a, b| b.cmp(a));
    let mut parts = Vec::new();
    for (j, &p) in beads.iter().enumerate() {
        let v = p + j as i64;
        if v <= 0 {
            break;
        }
        parts.push(v as u32);
    }
    Partition::new(parts)
}

/// All partitions of `n` in decreasing lexicographic order.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    rec(n as u32, n as u32, &mut cur, &mut out);
    out
}

/// Number of partitions of each size up to `n`.
pub fn partition_counts(n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for k in 1..=n {
        for m in k..=n {
            p[m] += p[m - k];
        }
    }
    p
}

/// All `t`-tuples of partitions of total size `m`.
pub fn multipartitions(t: usize, m: usize) -> Vec<Vec<Partition>> {
    let by_size: Vec<Vec<Partition>> = (0..=m).map(enumerate_partitions).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Partition> = Vec::new();
    fn rec(t: usize, m: usize, by: &[Vec<Partition>], cur: &mut Vec<Partition>, out: &mut Vec<Vec<Partition>>) {
        if cur.len() + 1 == t {
            for p in &by[m] {
                cur.push(p.clone());
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for k in (0..=m).rev() {
            for p in &by[k] {
                cur.push(p.clone());
                rec(t, m - k, by, cur, out);
                cur.pop();
            }
        }
    }
    if t == 0 {
        if m == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(t, m, &by_size, &mut cur, &mut out);
    out
}

/// Partitions of `total` whose `t`-core is `core`; empty when the sizes are
/// incongruent.
pub fn enumerate_with_core(core: &Partition, t: u32, total: usize) -> Result<Vec<Partition>> {
    if !core.is_core(t) {
        return Err(Error::Domain(format!("{core} is not a {t}-core")));
    }
    if total < core.size() || !(total - core.size()).is_multiple_of(t as usize) {
        return Ok(Vec::new());
    }
    let m = (total - core.size()) / t as usize;
    multipartitions(t as usize, m).iter().map(|qs| combine(core, qs)).collect()
}

/// All t-cores of size at most `max_size`.
pub fn cores_up_to(t: u32, max_size: usize) -> Vec<Partition> {
    (0..=max_size).flat_map(enumerate_partitions).filter(|p| p.is_core(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    #[test]
    fn hooks_small() {
        assert_eq!(p("2,1").hooks(), vec![3, 1, 1]);
        assert_eq!(p("3,2").hooks(), vec![4, 3, 1, 2, 1]);
        assert!(Partition::empty().hooks().is_empty());
    }

    #[test]
    fn bead_window_of_example() {
        let b = p("6,5,2,2,1").to_beads();
        assert_eq!(b.window_string(-7, 8), "0 0 1 0 1 0 0 0 | 1 1 0 1 0 1 1 1");
        assert_eq!(b.charge(), 0);
        assert_eq!(Partition::from_beads(&b).unwrap(), p("6,5,2,2,1"));
        let vac = Partition::empty().to_beads();
        assert!(vac.is_occupied(0) && vac.is_occupied(-5) && !vac.is_occupied(1));
    }

    #[test]
    fn from_beads_rejects_charge() {
        let b = BeadSequence { occupied: [1].into_iter().collect(), floor: 1 };
        assert!(Partition::from_beads(&b).is_err());
    }

    #[test]
    fn core_quotient_example() {
        let l = p("6,5,2,2,1");
        let cq = l.core_and_quotients(3);
        assert_eq!(cq.core, p("3,1"));
        assert_eq!(cq.lattice_point, vec![1, -1, 0]);
        assert_eq!(combine(&cq.core, &cq.quotients).unwrap(), l);
        let e = Partition::empty().core_and_quotients(4);
        assert_eq!(e.sign, 1);
        assert!(e.quotients.iter().all(|q| q.is_empty()));
    }

    #[test]
    fn combine_single_box() {
        let l = combine(&Partition::empty(), &[p("1"), p(""), p("")]).unwrap();
        assert_eq!(l.size(), 3);
        assert!(l.core_and_quotients(3).core.is_empty());
        assert!(combine(&p("2"), &[p(""), p("")]).is_err());
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_partitions(4).len(), 5);
        let e = enumerate_with_core(&Partition::empty(), 3, 3).unwrap();
        let mut e: Vec<String> = e.iter().map(|x| x.to_string()).collect();
        e.sort();
        assert_eq!(e, vec!["(1,1,1)", "(2,1)", "(3)"]);
        let mut a = enumerate_with_core(&p("1"), 2, 5).unwrap();
        let mut b: Vec<Partition> =
            enumerate_partitions(5).into_iter().filter(|l| l.core_and_quotients(2).core == p("1")).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert!(enumerate_with_core(&Partition::empty(), 3, 4).unwrap().is_empty());
    }

    #[test]
    fn rim_hooks_of_21() {
        let hs = p("2,1").rim_hooks(3);
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].rows_touched, 2);
        assert_eq!(p("2,1").remove_rim_hook(&hs[0]).unwrap(), Partition::empty());
        assert_eq!(p("2,1").rim_hooks(2).len(), 0);
    }
}
