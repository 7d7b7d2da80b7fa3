//! Masur–Veech volumes of strata of cubic, quartic and sextic differentials
//! from the asymptotics of connected tiling counts as `q -> 1`.
//!
//! The count of connected tilings with prescribed cone angles is fitted into a
//! quasimodular basis, each basis element is replaced by its polynomial in
//! `l = -1/(2 pi i tau)`, and the volume is read off from the leading
//! coefficient of the resulting polynomial `P(l)`.

use crate::arith::{factorial, rat, CuspPoly, Rational, Symbolic};
use crate::error::{Error, Result};
use crate::hurwitz::{tilings_series, Connectivity, Tile, TilingProblem};
use crate::qmodular::{cusp_polynomial, fit_qseries, qm_basis, FitResult, QMBasis};
use num_traits::One;
use serde::Serialize;
use std::fmt;

/// Normalization that reproduces the published volume `2 pi^2 / 3` of the
/// genus-zero cubic stratum with four singularities.
pub fn default_normalization() -> Rational {
    rat(3, 1)
}

/// A stratum `H_N(mu)` of `N`-differentials, with `mu_i` the order of the
/// differential at the `i`-th singularity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub n: u32,
    pub mu: Vec<i64>,
    pub genus: u64,
    pub dim: u32,
}

impl Stratum {
    pub fn new(n: u32, mu: Vec<i64>) -> Result<Self> {
        if !matches!(n, 3 | 4 | 6) {
            return Err(Error::Invalid(format!("volumes are defined for N in {{3, 4, 6}}, got {n}")));
        }
        if mu.is_empty() {
            return Err(Error::Invalid("stratum needs at least one singularity".into()));
        }
        let ni = n as i64;
        for &m in &mu {
            if m == 0 || m <= -ni {
                return Err(Error::Invalid(format!("order {m} is not allowed for N = {n}")));
            }
        }
        let total: i64 = mu.iter().sum();
        if total % (2 * ni) != 0 {
            return Err(Error::Invalid(format!("orders sum to {total}, which is not N(2g - 2) for N = {n}")));
        }
        let genus = total / (2 * ni) + 1;
        if genus < 0 {
            return Err(Error::Invalid(format!("orders sum to {total}, giving negative genus")));
        }
        let dim = 2 * genus - 2 + mu.len() as i64;
        if dim < 1 {
            return Err(Error::Invalid(format!("stratum has dimension {dim}")));
        }
        Ok(Stratum { n, mu, genus: genus as u64, dim: dim as u32 })
    }

    /// Replace the derived dimension.
    pub fn with_dim(mut self, dim: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        self.dim = dim;
        Ok(self)
    }

    /// Cone curvatures `kappa_i = -mu_i`.
    pub fn curvatures(&self) -> Vec<i64> {
        self.mu.iter().map(|m| -m).collect()
    }

    /// The tile whose tilings compute this stratum.
    pub fn tile(&self) -> Tile {
        match self.n {
            3 => Tile::Bihex,
            4 => Tile::Square,
            _ => Tile::Triangle,
        }
    }
}

impl fmt::Display for Stratum {
    /// Written with curvature labels, `H^1_3(2,2,1,1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.curvatures().iter().map(|k| k.to_string()).collect();
        write!(f, "H^1_{}({})", self.n, parts.join(","))
    }
}

/// Stratum for tilings by `tile` with the given cone curvatures.
pub fn stratum_from_curvatures(tile: Tile, curvatures: &[i64]) -> Result<Stratum> {
    let n = tile.level();
    let total: i64 = curvatures.iter().sum();
    if total % (2 * n as i64) != 0 {
        return Err(Error::Invalid(format!("curvatures sum to {total}, which is not {n}(2 - 2g)")));
    }
    Stratum::new(n, curvatures.iter().map(|k| -k).collect())
}

/// Area of a tile in the flat metric, `rational` or `rational / sqrt 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileArea {
    pub rational: Rational,
    pub over_sqrt3: bool,
}

impl TileArea {
    pub fn to_f64(&self) -> f64 {
        let r = crate::arith::rational_to_f64(&self.rational);
        if self.over_sqrt3 {
            r / 3f64.sqrt()
        } else {
            r
        }
    }

    /// `1 / area` at level `n`, where `sqrt 3 = -s` for `n` in {3, 6}.
    pub fn inverse(&self, n: u32) -> Result<Symbolic> {
        let r = Rational::one() / &self.rational;
        if !self.over_sqrt3 {
            return Ok(Symbolic::from_rational(n, r));
        }
        if !matches!(n, 3 | 6) {
            return Err(Error::Unsupported(format!("sqrt 3 is not available at level {n}")));
        }
        Ok(Symbolic::monomial(n, -r, 0, 1))
    }
}

impl fmt::Display for TileArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.over_sqrt3 {
            write!(f, "{}/sqrt(3)", self.rational)
        } else {
            write!(f, "{}", self.rational)
        }
    }
}

pub fn area_of_tile(tile: Tile) -> TileArea {
    let (rational, over_sqrt3) = match tile {
        Tile::Quad => (rat(1, 1), false),
        Tile::Biquad => (rat(1, 2), false),
        Tile::Bihex => (rat(1, 2), true),
        Tile::Square => (rat(1, 4), false),
        Tile::Triangle => (rat(1, 4), true),
        // six triangles
        Tile::Hexagon => (rat(3, 2), true),
    };
    TileArea { rational, over_sqrt3 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VolumeStatus {
    Finite,
    Infinite,
    Degenerate,
}

impl VolumeStatus {
    pub fn name(self) -> &'static str {
        match self {
            VolumeStatus::Finite => "finite",
            VolumeStatus::Infinite => "infinite",
            VolumeStatus::Degenerate => "degenerate",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VolumeResult {
    pub stratum: Stratum,
    pub poly: CuspPoly,
    pub status: VolumeStatus,
    pub normalization: Rational,
    pub hexagon_index: Rational,
    /// `leading / (area^dim dim!)` before normalization
    pub mechanical: Option<Symbolic>,
    pub value: Option<Symbolic>,
    /// volume divided by `2 pi`
    pub projectivized: Option<Symbolic>,
    /// whether `value / s^dim` is a polynomial in `2 pi s`
    pub membership: Option<bool>,
    pub diagnostics: Vec<String>,
}

impl VolumeResult {
    pub fn to_json(&self) -> serde_json::Value {
        let show = |v: &Option<Symbolic>| v.as_ref().map(|s| s.to_string());
        let volume = match self.status {
            VolumeStatus::Infinite => Some("infinity".to_string()),
            _ => show(&self.value),
        };
        serde_json::json!({
            "stratum": self.stratum.to_string(),
            "N": self.stratum.n,
            "genus": self.stratum.genus,
            "dim": self.stratum.dim,
            "P": (0..self.poly.coeffs.len()).map(|k| self.poly.coeff(k).to_string()).collect::<Vec<_>>(),
            "volume": volume,
            "mechanical": show(&self.mechanical),
            "projectivized": show(&self.projectivized),
            "normalization": self.normalization.to_string(),
            "hexagon_index": self.hexagon_index.to_string(),
            "status": self.status.name(),
            "membership": self.membership,
            "diagnostics": self.diagnostics,
        })
    }
}

/// Volume from a fit of the connected tiling series.
pub fn volume(
    stratum: &Stratum,
    fit: &FitResult,
    basis: &QMBasis,
    normalization: &Rational,
    hexagon_index: &Rational,
) -> Result<VolumeResult> {
    if !fit.residual_ok {
        return Err(Error::NotRepresentable("fit residual is not clean".into()));
    }
    if basis.n != stratum.n {
        return Err(Error::Invalid(format!("basis level {} differs from stratum level {}", basis.n, stratum.n)));
    }
    let n = stratum.n;
    let dim = stratum.dim as usize;
    let poly = cusp_polynomial(fit, basis)?;
    let mut out = VolumeResult {
        stratum: stratum.clone(),
        poly: poly.clone(),
        status: VolumeStatus::Finite,
        normalization: normalization.clone(),
        hexagon_index: hexagon_index.clone(),
        mechanical: None,
        value: None,
        projectivized: None,
        membership: None,
        diagnostics: Vec::new(),
    };
    match poly.degree() {
        Some(d) if d > dim => {
            out.status = VolumeStatus::Infinite;
            out.diagnostics.push(format!("deg P = {d} exceeds dim = {dim}"));
            return Ok(out);
        }
        Some(d) if d < dim => {
            out.status = VolumeStatus::Degenerate;
            out.diagnostics.push(format!("deg P = {d} is below dim = {dim}"));
            return Ok(out);
        }
        None => {
            out.status = VolumeStatus::Degenerate;
            out.diagnostics.push("P vanishes".into());
            return Ok(out);
        }
        _ => {}
    }
    let inv_area = area_of_tile(stratum.tile()).inverse(n)?;
    let mechanical = poly.leading().mul(&inv_area.pow(dim as u32)).scale(&(Rational::one() / factorial(dim as u64)));
    let value = mechanical.scale(&(normalization * hexagon_index));
    out.membership = Some(in_theta_ring(&value, dim as u32)?);
    out.projectivized = value.div_pi().ok().map(|v| v.scale(&rat(1, 2)));
    if normalization != &Rational::one() {
        out.diagnostics.push(format!("normalization {normalization} applied to the mechanical value {mechanical}"));
    }
    out.mechanical = Some(mechanical);
    out.value = Some(value);
    Ok(out)
}

/// `value / s^dim` lies in `Q[2 pi s]`.
fn in_theta_ring(value: &Symbolic, dim: u32) -> Result<bool> {
    let n = value.level();
    let reduced = value.div(&Symbolic::s(n).pow(dim))?;
    let ok = n == 4 || reduced.terms().all(|((p, q), _)| (p + q) % 2 == 0);
    Ok(ok)
}

/// Tiling count, fit and volume for a stratum. The series is computed to
/// `order` and fitted in weight at most `weight_bound`.
pub fn volume_from_tilings(
    stratum: &Stratum,
    order: usize,
    weight_bound: u32,
    normalization: &Rational,
    hexagon_index: &Rational,
) -> Result<(VolumeResult, FitResult)> {
    let problem = TilingProblem::new(stratum.tile(), stratum.curvatures());
    let series = tilings_series(&problem, order, Connectivity::Connected)?;
    let basis = qm_basis(stratum.n, weight_bound, order + 1)?;
    let fit = fit_qseries(&series.series, &basis, 2)?;
    let mut result = volume(stratum, &fit, &basis, normalization, hexagon_index)?;
    result.diagnostics.extend(series.diagnostics);
    Ok((result, fit))
}

/// `(1 - q)^dim sum_n c_n q^n` at `q = 1 - 1/l`, summed until the terms are
/// negligible.
pub fn abel_sum(coeff: impl Fn(u64) -> f64, dim: u32, l: f64) -> f64 {
    let q: f64 = 1.0 - 1.0 / l;
    let nmax = (60.0 * l).ceil() as u64;
    let mut acc = 0.0;
    let mut qn = 1.0;
    for n in 0..=nmax {
        acc += coeff(n) * qn;
        qn *= q;
    }
    acc * (1.0 - q).powi(dim as i32)
}

/// Rational multiple of `pi^k`, if the symbolic value has that shape.
pub fn as_pi_multiple(v: &Symbolic) -> Option<(Rational, u32)> {
    let mut terms = v.terms();
    let ((p, s), c) = terms.next()?;
    if terms.next().is_some() || *s != 0 {
        return None;
    }
    Some((c.clone(), *p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{kronecker_chi, sigma};
    use num_traits::ToPrimitive;
    use std::f64::consts::PI;

    fn appendix() -> Stratum {
        stratum_from_curvatures(Tile::Bihex, &[2, 2, 1, 1]).unwrap()
    }

    #[test]
    fn strata() {
        let s = appendix();
        assert_eq!((s.n, s.genus, s.dim), (3, 0, 2));
        assert_eq!(s.mu, vec![-2, -2, -1, -1]);
        assert_eq!(s.to_string(), "H^1_3(2,2,1,1)");
        // sum 12 at N = 6 gives genus 0 and dimension -1
        assert!(stratum_from_curvatures(Tile::Hexagon, &[12]).is_err());
        assert!(stratum_from_curvatures(Tile::Bihex, &[2, 2, 1]).is_err());
        assert!(stratum_from_curvatures(Tile::Bihex, &[3, 3]).is_err());
        let t = stratum_from_curvatures(Tile::Square, &[-8]).unwrap();
        assert_eq!((t.genus, t.dim), (2, 3));
        let u = stratum_from_curvatures(Tile::Bihex, &[1, 1, 1, 1, 1, 1, -6]).unwrap();
        assert_eq!((u.genus, u.dim), (1, 7));
    }

    #[test]
    fn areas() {
        assert_eq!(area_of_tile(Tile::Triangle).to_string(), "1/4/sqrt(3)");
        assert_eq!(area_of_tile(Tile::Square).rational, rat(1, 4));
        assert_eq!(area_of_tile(Tile::Quad).rational, rat(1, 1));
        for t in [Tile::Bihex, Tile::Triangle] {
            let a = area_of_tile(t);
            assert!((a.inverse(t.level()).unwrap().to_f64() * a.to_f64() - 1.0).abs() < 1e-12);
        }
        let hex = area_of_tile(Tile::Hexagon).to_f64();
        assert!((hex - 6.0 * area_of_tile(Tile::Triangle).to_f64()).abs() < 1e-12);
    }

    fn appendix_fit() -> (FitResult, QMBasis) {
        let basis = qm_basis(3, 2, 16).unwrap();
        // -sigma_0^chi(n)/6 + sigma_1(n)/6 + sigma_1(n/3)/2
        let coeffs: Vec<Rational> = (0..16u64)
            .map(|n| if n == 0 { rat(0, 1) } else { appendix_coeff(n) })
            .collect();
        let fit = fit_qseries(&crate::qseries::QSeries::from_rationals(&coeffs), &basis, 2).unwrap();
        (fit, basis)
    }

    fn appendix_coeff(n: u64) -> Rational {
        let chi: i64 = (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| kronecker_chi(3, d as i64)).sum();
        let s3 = if n.is_multiple_of(3) { sigma(1, n / 3) } else { 0.into() };
        rat(-chi, 6) + Rational::from(sigma(1, n)) / rat(6, 1) + Rational::from(s3) / rat(2, 1)
    }

    #[test]
    fn appendix_volume() {
        let (fit, basis) = appendix_fit();
        let want = [rat(1, 18), rat(-1, 6), rat(1, 6), rat(1, 2)];
        for (c, w) in fit.coefficients.iter().zip(&want) {
            assert_eq!(c.as_rational().as_ref(), Some(w));
        }
        let r = volume(&appendix(), &fit, &basis, &default_normalization(), &rat(1, 1)).unwrap();
        assert_eq!(r.status, VolumeStatus::Finite);
        assert_eq!(r.poly.leading(), Symbolic::monomial(3, rat(1, 27), 2, 0));
        assert_eq!(r.mechanical, Some(Symbolic::monomial(3, rat(2, 9), 2, 0)));
        assert_eq!(r.value, Some(Symbolic::monomial(3, rat(2, 3), 2, 0)));
        assert_eq!(r.value.as_ref().unwrap().to_string(), "2/3*pi^2");
        assert_eq!(r.projectivized, Some(Symbolic::monomial(3, rat(1, 3), 1, 0)));
        assert_eq!(r.membership, Some(true));
        let j = r.to_json();
        assert_eq!(j["status"], "finite");
        assert_eq!(j["normalization"], "3");
    }

    #[test]
    fn status_from_degree() {
        let (fit, basis) = appendix_fit();
        let s = appendix().with_dim(1).unwrap();
        let r = volume(&s, &fit, &basis, &rat(1, 1), &rat(1, 1)).unwrap();
        assert_eq!(r.status, VolumeStatus::Infinite);
        assert!(r.value.is_none());
        let s = appendix().with_dim(3).unwrap();
        assert_eq!(volume(&s, &fit, &basis, &rat(1, 1), &rat(1, 1)).unwrap().status, VolumeStatus::Degenerate);
    }

    #[test]
    fn abel_limit_matches_leading_term() {
        let leading = PI * PI / 27.0;
        let mut c = vec![0f64; 60 * 800 + 1];
        for (n, v) in c.iter_mut().enumerate().skip(1) {
            *v = appendix_coeff(n as u64).to_f64().unwrap();
        }
        let f = |l: f64| abel_sum(|n| c[n as usize], 2, l);
        let (a, b, d) = (f(200.0), f(400.0), f(800.0));
        // the error is linear in 1/l, so one Richardson step removes it
        assert!((d - leading).abs() / leading < 5e-3);
        let extrapolated = 2.0 * d - b;
        assert!((extrapolated - leading).abs() / leading < 5e-4, "{a} {b} {d} {extrapolated}");
        assert!(((2.0 * b - a) - leading).abs() > (extrapolated - leading).abs());
    }
}
