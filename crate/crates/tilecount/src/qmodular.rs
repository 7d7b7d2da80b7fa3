//! Quasimodular bases for `Gamma_1(3)`, `Gamma_1(4)`, `Gamma_1(6)`, exact
//! fitting of q-series into them, and the polynomial in `l` describing each
//! basis element as `q = e^{-1/l} -> 1`.

use crate::arith::{bernoulli, binomial, factorial, linsolve, rat, CuspPoly, Cyclo, Rational, Symbolic};
use crate::error::{Error, Result};
use crate::qseries::{kronecker_chi, sigma, sigma_chi, QSeries};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Generators of the preset rings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `E_2(q^s) = -1/24 + sum sigma_1(n) q^{sn}`
    E2 { scale: u32 },
    /// `L(1-k, chi)/2 + sum_n (sum_{d|n} chi(d) d^{k-1}) q^{sn}`
    EisChi { conductor: u32, k: u32, scale: u32 },
    /// `sum_n (sum_{d|n} chi(n/d) d^{k-1}) q^{sn}`
    EisChiDual { conductor: u32, k: u32, scale: u32 },
}

impl Generator {
    pub fn weight(&self) -> u32 {
        match *self {
            Generator::E2 { .. } => 2,
            Generator::EisChi { k, .. } | Generator::EisChiDual { k, .. } => k,
        }
    }

    pub fn scale(&self) -> u32 {
        match *self {
            Generator::E2 { scale } | Generator::EisChi { scale, .. } | Generator::EisChiDual { scale, .. } => scale,
        }
    }

    fn constant(&self) -> Rational {
        match *self {
            Generator::E2 { .. } => rat(-1, 24),
            Generator::EisChi { conductor, k, .. } => l_value_nonpositive(conductor, 1 - k as i64) / rat(2, 1),
            Generator::EisChiDual { .. } => Rational::zero(),
        }
    }

    /// Coefficient of `q^{s n}` for `n >= 1`.
    fn coefficient(&self, n: u64) -> BigInt {
        match *self {
            Generator::E2 { .. } => sigma(1, n),
            Generator::EisChi { conductor, k, .. } => sigma_chi(conductor, k, n, false),
            Generator::EisChiDual { conductor, k, .. } => sigma_chi(conductor, k, n, true),
        }
    }

    pub fn series(&self, len: usize) -> QSeries {
        let s = self.scale() as usize;
        let mut c = vec![Rational::zero(); len];
        if len > 0 {
            c[0] = self.constant();
        }
        let mut n = 1usize;
        while n * s < len {
            c[n * s] = Rational::from_integer(self.coefficient(n as u64));
            n += 1;
        }
        QSeries::from_rationals(&c)
    }

    /// Dirichlet series of the non-constant part as a product of two shifted
    /// L-functions `L(w - shift, chi)`.
    fn mellin_factors(&self) -> [LFactor; 2] {
        match *self {
            Generator::E2 { .. } => [LFactor { conductor: 1, shift: 0 }, LFactor { conductor: 1, shift: 1 }],
            Generator::EisChi { conductor, k, .. } => {
                [LFactor { conductor, shift: k as i64 - 1 }, LFactor { conductor: 1, shift: 0 }]
            }
            Generator::EisChiDual { conductor, k, .. } => {
                [LFactor { conductor, shift: 0 }, LFactor { conductor: 1, shift: k as i64 - 1 }]
            }
        }
    }

    /// The polynomial `P(l)` with `f(e^{-1/l}) = P(l) + o(l^{-m})` for all `m`.
    pub fn cusp_polynomial(&self, level: u32) -> Result<CuspPoly> {
        mellin_cusp(level, self.constant(), &self.mellin_factors(), self.scale())
    }

    /// Floating-point value at `q = e^{-1/l}`.
    pub fn eval_at(&self, l: f64) -> f64 {
        let s = self.scale() as f64;
        let nmax = (60.0 * l / s).ceil() as u64 + 1;
        let mut acc = crate::arith::rational_to_f64(&self.constant());
        let coeffs = self.coefficients_f64(nmax);
        for n in 1..=nmax {
            acc += coeffs[n as usize] * (-(s * n as f64) / l).exp();
        }
        acc
    }

    fn coefficients_f64(&self, nmax: u64) -> Vec<f64> {
        let mut c = vec![0f64; nmax as usize + 1];
        for d in 1..=nmax {
            let mut m = d;
            while m <= nmax {
                let add = match *self {
                    Generator::E2 { .. } => d as f64,
                    Generator::EisChi { conductor, k, .. } => {
                        kronecker_chi(conductor, d as i64) as f64 * (d as f64).powi(k as i32 - 1)
                    }
                    Generator::EisChiDual { conductor, k, .. } => {
                        kronecker_chi(conductor, (m / d) as i64) as f64 * (d as f64).powi(k as i32 - 1)
                    }
                };
                c[m as usize] += add;
                m += d;
            }
        }
        c
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = |s: u32| if s == 1 { "q".to_string() } else { format!("q^{s}") };
        match *self {
            Generator::E2 { scale } => write!(f, "E2({})", q(scale)),
            Generator::EisChi { conductor, k, scale } => write!(f, "E{k}[chi{conductor}]({})", q(scale)),
            Generator::EisChiDual { conductor, k, scale } => write!(f, "E{k}*[chi{conductor}]({})", q(scale)),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct LFactor {
    /// 1 for the Riemann zeta function
    conductor: u32,
    shift: i64,
}

fn bernoulli_poly(k: usize, x: &Rational, b: &[Rational]) -> Rational {
    (0..=k).fold(Rational::zero(), |acc, j| {
        acc + Rational::from_integer(binomial(k as i64, j as i64)) * &b[j] * x.pow((k - j) as i32)
    })
}

/// Generalized Bernoulli number `B_{k,chi}`.
fn bernoulli_chi(f: u32, k: usize) -> Rational {
    let b = bernoulli(k);
    let mut s = Rational::zero();
    for a in 1..=f as i64 {
        let c = kronecker_chi(f, a);
        if c != 0 {
            s += Rational::from_integer(BigInt::from(c)) * bernoulli_poly(k, &rat(a, f as i64), &b);
        }
    }
    s * Rational::from_integer(BigInt::from(f).pow(k as u32 - 1))
}

/// `L(n, chi)` for an integer `n <= 0` (`zeta` for conductor 1).
pub fn l_value_nonpositive(conductor: u32, n: i64) -> Rational {
    assert!(n <= 0);
    let m = (1 - n) as usize;
    if conductor == 1 {
        // zeta(-j) = (-1)^j B_{j+1}/(j+1)
        let j = (-n) as usize;
        let b = &bernoulli(j + 1)[j + 1];
        let v = b / Rational::from_integer(BigInt::from(j as i64 + 1));
        if j.is_multiple_of(2) {
            v
        } else {
            -v
        }
    } else {
        -bernoulli_chi(conductor, m) / Rational::from_integer(BigInt::from(m as i64))
    }
}

/// `L(n, chi)` for an integer `n >= 1` where it is a rational multiple of a
/// power of `pi` (times `s = i theta_N` for odd characters).
pub fn l_value_positive(level: u32, conductor: u32, n: i64) -> Result<Symbolic> {
    assert!(n >= 1);
    let k = n as u32;
    if conductor == 1 {
        if k % 2 == 1 {
            return Err(Error::Unsupported(format!("zeta({n}) is not a rational multiple of a power of pi")));
        }
        // zeta(2j) = (-1)^{j+1} B_{2j} (2 pi)^{2j} / (2 (2j)!)
        let j = k / 2;
        let b = &bernoulli(k as usize)[k as usize];
        let sign = if j % 2 == 1 { Rational::one() } else { -Rational::one() };
        let c = sign * b * Rational::from_integer(BigInt::from(2).pow(k))
            / (Rational::from_integer(factorial(k as u64)) * rat(2, 1));
        return Ok(Symbolic::monomial(level, c, k, 0));
    }
    if k.is_multiple_of(2) {
        return Err(Error::Unsupported(format!("L({n}, chi) for an odd character at even n")));
    }
    let theta_level = matches!((conductor, level), (3, 3) | (3, 6) | (4, 4));
    if !theta_level {
        return Err(Error::Unsupported(format!("conductor {conductor} at level {level}")));
    }
    // L(k, chi) = (-1)^{k-1} (s/2) (-1)^{(k-1)/2} (2 pi / f)^k B_{k,chi} / k!
    let mut c = bernoulli_chi(conductor, k as usize) / Rational::from_integer(factorial(k as u64)) / rat(2, 1);
    c *= Rational::new(BigInt::from(2).pow(k), BigInt::from(conductor).pow(k));
    if ((k - 1) / 2) % 2 == 1 {
        c = -c;
    }
    if (k - 1) % 2 == 1 {
        c = -c;
    }
    Ok(Symbolic::monomial(level, c, k, 1))
}

fn l_value(level: u32, f: LFactor, w: i64) -> Result<Symbolic> {
    let n = w - f.shift;
    if n <= 0 {
        Ok(Symbolic::from_rational(level, l_value_nonpositive(f.conductor, n)))
    } else if n == 1 && f.conductor == 1 {
        Err(Error::Domain("pole of zeta".into()))
    } else {
        l_value_positive(level, f.conductor, n)
    }
}

/// Residue calculus for `sum a(n) e^{-s n / l}` with Dirichlet series
/// `D(w) = L_1(w) L_2(w)`: poles of the zeta factors give the positive powers
/// of `l`, the pole of `Gamma` at 0 gives `D(0)`, and the poles at negative
/// integers must all vanish.
fn mellin_cusp(level: u32, constant: Rational, factors: &[LFactor; 2], scale: u32) -> Result<CuspPoly> {
    let mut poly = CuspPoly::constant(Symbolic::from_rational(level, constant));
    let d0 = l_value(level, factors[0], 0)?.mul(&l_value(level, factors[1], 0)?);
    poly = poly.add(&CuspPoly::constant(d0));
    for m in 1..=8i64 {
        let v0 = l_value_nonpositive_or_none(factors[0], -m);
        let v1 = l_value_nonpositive_or_none(factors[1], -m);
        let vanishes = matches!(v0, Some(ref x) if x.is_zero()) || matches!(v1, Some(ref x) if x.is_zero());
        if !vanishes {
            return Err(Error::Unsupported("asymptotic expansion has negative powers of l".into()));
        }
    }
    for (i, f) in factors.iter().enumerate() {
        if f.conductor != 1 {
            continue;
        }
        let pole = f.shift + 1;
        if pole < 1 {
            return Err(Error::Unsupported("pole coincides with a pole of Gamma".into()));
        }
        let other = l_value(level, factors[1 - i], pole)?;
        let gamma = Rational::from_integer(factorial((pole - 1) as u64));
        let scale_pow = Rational::new(BigInt::one(), BigInt::from(scale).pow(pole as u32));
        let mut coeffs = vec![Symbolic::zero(level); pole as usize + 1];
        coeffs[pole as usize] = other.scale(&(gamma * scale_pow));
        poly = poly.add(&CuspPoly { n: level, coeffs });
    }
    Ok(poly)
}

fn l_value_nonpositive_or_none(f: LFactor, w: i64) -> Option<Rational> {
    let n = w - f.shift;
    (n <= 0).then(|| l_value_nonpositive(f.conductor, n))
}

/// A basis element: a monomial in the generators.
#[derive(Clone, Debug)]
pub struct BasisElement {
    pub name: String,
    pub weight: u32,
    pub factors: Vec<Generator>,
    pub series: QSeries,
    pub cusp: CuspPoly,
}

impl BasisElement {
    pub fn eval_at(&self, l: f64) -> f64 {
        self.factors.iter().map(|g| g.eval_at(l)).product()
    }
}

#[derive(Clone, Debug)]
pub struct QMBasis {
    pub n: u32,
    pub weight_bound: u32,
    pub elements: Vec<BasisElement>,
}

/// Named generators and, for each basis element, the indices of its factors.
type PresetLayout = (Vec<(String, Generator)>, Vec<Vec<usize>>);

fn preset_generators(n: u32) -> Result<PresetLayout> {
    use Generator::*;
    let named = |v: Vec<(&str, Generator)>| v.into_iter().map(|(a, b)| (a.to_string(), b)).collect::<Vec<_>>();
    // candidate monomials listed by weight, generators first
    match n {
        3 => Ok((
            named(vec![
                ("X", EisChi { conductor: 3, k: 1, scale: 1 }),
                ("Y", E2 { scale: 1 }),
                ("Z", E2 { scale: 3 }),
                ("W", EisChiDual { conductor: 3, k: 3, scale: 1 }),
            ]),
            vec![vec![0], vec![1], vec![2], vec![0, 0], vec![0, 1], vec![0, 2], vec![3], vec![0, 0, 0]],
        )),
        4 => Ok((
            named(vec![
                ("A", EisChi { conductor: 4, k: 1, scale: 1 }),
                ("Y", E2 { scale: 1 }),
                ("Y2", E2 { scale: 2 }),
                ("Y4", E2 { scale: 4 }),
                ("W", EisChiDual { conductor: 4, k: 3, scale: 1 }),
            ]),
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![3],
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![4],
                vec![0, 0, 0],
            ],
        )),
        6 => Ok((
            named(vec![
                ("A", EisChi { conductor: 3, k: 1, scale: 1 }),
                ("B", EisChi { conductor: 3, k: 1, scale: 2 }),
                ("Y", E2 { scale: 1 }),
                ("Y2", E2 { scale: 2 }),
                ("Y3", E2 { scale: 3 }),
                ("Y6", E2 { scale: 6 }),
                ("W", EisChiDual { conductor: 3, k: 3, scale: 1 }),
                ("W2", EisChiDual { conductor: 3, k: 3, scale: 2 }),
            ]),
            {
                let mut v = vec![vec![0], vec![1], vec![2], vec![3], vec![4], vec![5], vec![0, 0], vec![0, 1], vec![1, 1]];
                for a in 0..2 {
                    for y in 2..6 {
                        v.push(vec![a, y]);
                    }
                }
                v.extend([vec![6], vec![7], vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]);
                v
            },
        )),
        _ => Err(Error::Domain(format!("no quasimodular preset for N = {n}"))),
    }
}

/// Greedy rank selection of candidate monomials of weight `<= weight_bound`.
pub fn qm_basis(n: u32, weight_bound: u32, len: usize) -> Result<QMBasis> {
    let (gens, candidates) = preset_generators(n)?;
    let mut elements = vec![BasisElement {
        name: "1".into(),
        weight: 0,
        factors: vec![],
        series: QSeries::one(1, len),
        cusp: CuspPoly::one(n),
    }];
    let mut rows: Vec<Vec<Cyclo>> = vec![elements[0].series.coeffs().to_vec()];
    for cand in candidates {
        let factors: Vec<Generator> = cand.iter().map(|&i| gens[i].1).collect();
        let weight: u32 = factors.iter().map(|g| g.weight()).sum();
        if weight > weight_bound {
            continue;
        }
        let mut series = QSeries::one(1, len);
        let mut cusp = CuspPoly::one(n);
        for g in &factors {
            series = series.mul(&g.series(len))?;
            cusp = cusp.mul(&g.cusp_polynomial(n)?);
        }
        rows.push(series.coeffs().to_vec());
        if crate::arith::linsolve::rank(&rows) < rows.len() {
            rows.pop();
            continue;
        }
        let name = cand.iter().map(|&i| gens[i].0.clone()).collect::<Vec<_>>().join("*");
        elements.push(BasisElement { name, weight, factors, series, cusp });
    }
    Ok(QMBasis { n, weight_bound, elements })
}

/// Named presets: `appendix` is the basis {1, X, Y, Z} for `Gamma_1(3)`.
pub fn preset(name: &str, len: usize) -> Result<QMBasis> {
    match name {
        "appendix" => qm_basis(3, 2, len),
        _ => Err(Error::Invalid(format!("unknown preset {name}"))),
    }
}

impl QMBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.elements.iter().map(|e| e.name.clone()).collect()
    }

    /// Rebuild the element series to a new length.
    pub fn extend_to(&self, len: usize) -> Result<QMBasis> {
        let mut out = self.clone();
        for e in out.elements.iter_mut() {
            let mut s = QSeries::one(1, len);
            for g in &e.factors {
                s = s.mul(&g.series(len))?;
            }
            e.series = s;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub coefficients: Vec<Cyclo>,
    pub names: Vec<String>,
    pub weight_bound: u32,
    /// number of leading coefficients used to solve
    pub window: usize,
    /// number of further coefficients checked
    pub validated: usize,
    pub residual_ok: bool,
    pub reconstructed: QSeries,
}

/// Solve on the shortest leading window that determines the coefficients,
/// then check every remaining coefficient.
pub fn fit_qseries(s: &QSeries, basis: &QMBasis, margin: usize) -> Result<FitResult> {
    let s = if s.unit() != 1 { s.to_integer_exponents()? } else { s.clone() };
    if !s.offset().is_zero() {
        return Err(Error::Invalid("series must start at q^0".into()));
    }
    let basis = if basis.elements.iter().any(|e| e.series.len() < s.len()) { basis.extend_to(s.len())? } else { basis.clone() };
    let m = basis.len();
    let len = s.len();
    let mut window = m.min(len);
    loop {
        if window + margin > len {
            return Err(Error::Invalid(format!(
                "need at least {} coefficients to fit {m} basis elements with margin {margin}, got {len}",
                window + margin
            )));
        }
        let rows: Vec<Vec<Cyclo>> = (0..window).map(|i| basis.elements.iter().map(|e| e.series.coeff(i).clone()).collect()).collect();
        if linsolve::rank(&rows) == m {
            break;
        }
        window += 1;
    }
    let rows: Vec<Vec<Cyclo>> = (0..window).map(|i| basis.elements.iter().map(|e| e.series.coeff(i).clone()).collect()).collect();
    let rhs: Vec<Cyclo> = (0..window).map(|i| s.coeff(i).clone()).collect();
    let sol = linsolve::solve_linear_exact(&rows, &rhs).map_err(|e| match e {
        Error::NoSolution => Error::NotRepresentable(format!("series is not in the weight <= {} space", basis.weight_bound)),
        other => other,
    })?;
    let order = sol.particular.iter().map(|c| c.order()).fold(s.order(), crate::arith::lcm_u32);
    let mut rec = QSeries::zero(order, len);
    for (c, e) in sol.particular.iter().zip(&basis.elements) {
        rec = rec.add(&e.series.truncate(len).scale(c))?;
    }
    let residual_ok = (window..len).all(|i| rec.coeff(i) == s.coeff(i));
    Ok(FitResult {
        coefficients: sol.particular,
        names: basis.names(),
        weight_bound: basis.weight_bound,
        window,
        validated: len - window,
        residual_ok,
        reconstructed: rec,
    })
}

/// `sum_i c_i P_i(l)`; the fit coefficients must be rational.
pub fn cusp_polynomial(fit: &FitResult, basis: &QMBasis) -> Result<CuspPoly> {
    let mut p = CuspPoly::zero(basis.n);
    for (c, e) in fit.coefficients.iter().zip(&basis.elements) {
        let r = c.as_rational().ok_or_else(|| Error::Unsupported("irrational fit coefficient".into()))?;
        p = p.add(&e.cusp.scale(&Symbolic::from_rational(basis.n, r)));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::e2;

    #[test]
    fn l_values() {
        // L(0, chi_-3) = 1/3, L(0, chi_-4) = 1/2, zeta(0) = -1/2, zeta(-1) = -1/12
        assert_eq!(l_value_nonpositive(3, 0), rat(1, 3));
        assert_eq!(l_value_nonpositive(4, 0), rat(1, 2));
        assert_eq!(l_value_nonpositive(1, 0), rat(-1, 2));
        assert_eq!(l_value_nonpositive(1, -1), rat(-1, 12));
        assert_eq!(l_value_nonpositive(3, -1), rat(0, 1));
        // zeta(2) = pi^2/6
        assert_eq!(l_value_positive(3, 1, 2).unwrap(), Symbolic::monomial(3, rat(1, 6), 2, 0));
        // L(1, chi_-3) = pi/(3 sqrt 3); L(1, chi_-4) = pi/4
        let v = l_value_positive(3, 3, 1).unwrap().to_f64();
        assert!((v - std::f64::consts::PI / (3.0 * 3f64.sqrt())).abs() < 1e-12);
        let v = l_value_positive(4, 4, 1).unwrap().to_f64();
        assert!((v - std::f64::consts::PI / 4.0).abs() < 1e-12);
        // L(3, chi_-4) = pi^3/32
        let v = l_value_positive(4, 4, 3).unwrap().to_f64();
        assert!((v - std::f64::consts::PI.powi(3) / 32.0).abs() < 1e-12);
    }

    #[test]
    fn e2_cusp() {
        let p = Generator::E2 { scale: 1 }.cusp_polynomial(3).unwrap();
        assert_eq!(p.coeff(2), Symbolic::monomial(3, rat(1, 6), 2, 0));
        assert_eq!(p.coeff(1), Symbolic::from_rational(3, rat(-1, 2)));
        assert!(p.coeff(0).is_zero());
        let p3 = Generator::E2 { scale: 3 }.cusp_polynomial(3).unwrap();
        assert_eq!(p3.coeff(2), Symbolic::monomial(3, rat(1, 54), 2, 0));
        assert_eq!(p3.coeff(1), Symbolic::from_rational(3, rat(-1, 6)));
    }

    #[test]
    fn preset_sizes() {
        assert_eq!(qm_basis(3, 2, 30).unwrap().names(), vec!["1", "X", "Y", "Z"]);
        assert_eq!(qm_basis(3, 0, 30).unwrap().len(), 1);
        assert_eq!(qm_basis(3, 3, 40).unwrap().names(), vec!["1", "X", "Y", "Z", "X*Y", "X*Z", "W"]);
        assert_eq!(qm_basis(4, 3, 40).unwrap().len(), 8);
        assert_eq!(qm_basis(6, 3, 60).unwrap().len(), 13);
    }

    #[test]
    fn x_constant() {
        let b = qm_basis(3, 1, 10).unwrap();
        assert_eq!(b.elements[1].series.coeff(0).as_rational(), Some(rat(1, 6)));
        let b4 = qm_basis(4, 1, 10).unwrap();
        assert_eq!(b4.elements[1].series.coeff(0).as_rational(), Some(rat(1, 4)));
    }

    #[test]
    fn cusp_numeric() {
        for (n, len) in [(3u32, 40usize), (4, 40), (6, 60)] {
            let b = qm_basis(n, 3, len).unwrap();
            for e in &b.elements {
                for l in [40.0, 80.0] {
                    let v = e.eval_at(l);
                    let p = e.cusp.eval_f64(l);
                    let lead = e.cusp.leading().to_f64() * l.powi(e.cusp.degree().unwrap_or(0) as i32);
                    assert!(((v - p) / lead).abs() < 1e-6, "N={n} {} l={l}: {v} vs {p}", e.name);
                }
            }
        }
    }

    #[test]
    fn fit_round_trip() {
        let b = qm_basis(3, 2, 30).unwrap();
        let coeffs = [rat(1, 18), rat(-1, 6), rat(1, 6), rat(1, 2)];
        let mut s = QSeries::zero(1, 30);
        for (c, e) in coeffs.iter().zip(&b.elements) {
            s = s.add(&e.series.scale_rational(c)).unwrap();
        }
        let fit = fit_qseries(&s, &b, 1).unwrap();
        assert!(fit.residual_ok);
        let got: Vec<Rational> = fit.coefficients.iter().map(|c| c.as_rational().unwrap()).collect();
        assert_eq!(got, coeffs.to_vec());
        let p = cusp_polynomial(&fit, &b).unwrap();
        assert_eq!(p.leading(), Symbolic::monomial(3, rat(1, 27), 2, 0));
    }

    #[test]
    fn generator_monomials_span_preset() {
        // {1, theta_3 E_1^1, (theta_3 E_1^1)^2, E_2} against {1, X, Y, Z}
        let len = 30;
        let t = crate::qseries::eisenstein_kr(3, 1, 1, len).unwrap().scale(&Cyclo::theta(3));
        let named = [QSeries::one(1, len), t.clone(), t.mul(&t).unwrap(), e2(1, len)];
        let b = qm_basis(3, 2, len).unwrap();
        let mut rows: Vec<Vec<Cyclo>> = b.elements.iter().map(|e| e.series.with_order(6).unwrap().coeffs().to_vec()).collect();
        assert_eq!(linsolve::rank(&rows), 4);
        for p in &named {
            rows.push(p.with_order(6).unwrap().coeffs().to_vec());
            assert_eq!(linsolve::rank(&rows), 4);
            rows.pop();
        }
    }
}
