//! The empty-core weight `w_N(lambda)` and its generalizations to a
//! nonempty `N`-core `eta`.

use crate::arith::{Radical, Rational};
use crate::characters::{c_t, dim, sgn_t};
use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::fock::wn_diagonal;
use crate::partitions::Partition;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Orders of the orbifold points of `E/<zeta_N>`.
pub fn orbifold_orders(n: u32) -> Option<Vec<u32>> {
    match n {
        2 => Some(vec![2, 2, 2, 2]),
        3 => Some(vec![3, 3, 3]),
        4 => Some(vec![2, 4, 4]),
        6 => Some(vec![2, 3, 6]),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    pub n: u32,
    pub eta: Partition,
    pub orbifold_orders: Vec<u32>,
}

impl WeightSpec {
    pub fn new(n: u32, eta: Partition) -> Result<Self> {
        let orders = orbifold_orders(n).ok_or_else(|| Error::Domain(format!("N = {n} has no orbifold quotient")))?;
        if !eta.is_core(n) {
            return Err(Error::Invalid(format!("{eta} is not a {n}-core")));
        }
        Ok(WeightSpec { n, eta, orbifold_orders: orders })
    }
}

/// `<a>`: the product of the hook lengths congruent to `a` mod `N`.
pub fn hook_class_product(lambda: &Partition, n: u32, a: u32) -> BigInt {
    lambda.hooks().into_iter().filter(|h| h % n == a % n).fold(BigInt::one(), |acc, h| acc * h)
}

/// `<1><N-1>/<0>^2`.
pub fn unsigned_weight(lambda: &Partition, n: u32) -> Rational {
    let num = hook_class_product(lambda, n, 1) * hook_class_product(lambda, n, n - 1);
    let den = hook_class_product(lambda, n, 0);
    Rational::new(num, &den * &den)
}

fn core_is(lambda: &Partition, n: u32, eta: &Partition) -> bool {
    &lambda.core_and_quotients(n).core == eta
}

/// `w_N(lambda)`, zero unless `lambda` is `N`-decomposable.
///
/// For `N` in {2,3,4,6} the sign is the product of `sgn_t` over the orbifold
/// orders; for other `N` it is read from the Fock-space diagonal entry.
pub fn w_n(lambda: &Partition, n: u32) -> Rational {
    if !core_is(lambda, n, &Partition::empty()) {
        return Rational::zero();
    }
    let value = unsigned_weight(lambda, n);
    let sign = match orbifold_orders(n) {
        Some(orders) => orders.iter().map(|&t| sgn_t(lambda, t)).product::<i32>(),
        None => {
            if wn_diagonal(lambda, n).is_negative() {
                -1
            } else {
                1
            }
        }
    };
    if sign < 0 {
        -value
    } else {
        value
    }
}

/// Unnormalized weight `(dim/|lambda|!)^2 prod_t c_t(lambda)` from the
/// character side; zero when the `N`-core of `lambda` is not `eta`.
pub fn tilde_w_radical(lambda: &Partition, spec: &WeightSpec) -> Radical {
    if !core_is(lambda, spec.n, &spec.eta) {
        return Radical::from_rational(Rational::zero());
    }
    let r = Rational::new(dim(lambda), factorial(lambda.size() as u64));
    let mut acc = Radical::from_rational(&r * &r);
    for &t in &spec.orbifold_orders {
        acc = acc.mul(&c_t(lambda, t));
    }
    acc
}

/// [`tilde_w_radical`] when the value is rational (always the case for the
/// empty core).
pub fn tilde_w(lambda: &Partition, spec: &WeightSpec) -> Result<Rational> {
    tilde_w_radical(lambda, spec)
        .to_rational()
        .ok_or_else(|| Error::NotRepresentable(format!("tilde_w({lambda}) is irrational")))
}

fn u_cache() -> &'static Mutex<HashMap<(u32, Partition), Rational>> {
    static C: OnceLock<Mutex<HashMap<(u32, Partition), Rational>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn signed_core_weight(lambda: &Partition, n: u32) -> Rational {
    let value = unsigned_weight(lambda, n);
    let sign: i32 = orbifold_orders(n).map(|o| o.iter().map(|&t| sgn_t(lambda, t)).product()).unwrap_or(1);
    if sign < 0 {
        -value
    } else {
        value
    }
}

/// Normalized weight on partitions with `N`-core `eta`, equal to 1 at `eta`.
pub fn w_n_eta(lambda: &Partition, n: u32, eta: &Partition) -> Result<Rational> {
    if !eta.is_core(n) {
        return Err(Error::Invalid(format!("{eta} is not a {n}-core")));
    }
    if eta.is_empty() {
        return Ok(w_n(lambda, n));
    }
    if !core_is(lambda, n, eta) {
        return Ok(Rational::zero());
    }
    let u = {
        let mut c = u_cache().lock().unwrap();
        c.entry((n, eta.clone())).or_insert_with(|| Rational::one() / signed_core_weight(eta, n)).clone()
    };
    Ok(u * signed_core_weight(lambda, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::partitions::enumerate_partitions;

    fn p(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(w_n(&Partition::empty(), 3), rat(1, 1));
        assert_eq!(w_n(&p("2,1"), 3), rat(-1, 9));
        assert_eq!(w_n(&p("3"), 3), rat(2, 9));
        let total: Rational = enumerate_partitions(3).iter().map(|l| w_n(l, 3)).sum();
        assert_eq!(total, rat(1, 3));
    }

    #[test]
    fn eta_weights() {
        assert_eq!(w_n_eta(&p("1"), 3, &p("1")).unwrap(), rat(1, 1));
        assert_eq!(w_n_eta(&p("2,1"), 3, &p("1")).unwrap(), rat(0, 1));
        assert!(w_n_eta(&p("3"), 3, &p("3")).is_err());
        for s in 0..=9 {
            for l in enumerate_partitions(s) {
                assert_eq!(w_n_eta(&l, 3, &Partition::empty()).unwrap(), w_n(&l, 3));
            }
        }
    }

    #[test]
    fn tilde_matches_small() {
        let spec = WeightSpec::new(3, Partition::empty()).unwrap();
        assert_eq!(tilde_w(&Partition::empty(), &spec).unwrap(), rat(1, 1));
        assert_eq!(tilde_w(&p("2,1"), &spec).unwrap(), rat(-1, 9));
        assert_eq!(tilde_w(&p("2"), &spec).unwrap(), rat(0, 1));
    }
}
