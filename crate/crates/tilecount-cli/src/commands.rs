//! One function per subcommand. Each returns a JSON result and the rows of
//! its CSV rendering.

use crate::config::{sha256_hex, JobConfig};
use serde_json::{json, Value};
use std::path::Path;
use tilecount::arith::{parse_rational, rational_to_string, Cyclo, Rational};
use tilecount::hurwitz::{
    brute_force_monodromy, connected_series, h_series_with, hurwitz_number, ramified_series, tilings_series,
    Connectivity, Method, RamificationProfile, Tile, TilingProblem,
};
use tilecount::qmodular::{cusp_polynomial, fit_qseries, preset, qm_basis, FitResult, QMBasis};
use tilecount::qseries::QSeries;
use tilecount::selftest;
use tilecount::shifted::{LambdaNElement, Monomial};
use tilecount::transfer::bracket_element;
use tilecount::volumes::{default_normalization, stratum_from_curvatures, volume_from_tilings};
use tilecount::{Error, Result};

pub struct Report {
    pub result: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// input files by path with their SHA-256
    pub inputs: Vec<(String, String)>,
    /// lines for standard error, such as the experimental banner
    pub notices: Vec<String>,
    pub success: bool,
}

impl Report {
    fn new(result: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Report { result, header, rows, inputs: Vec::new(), notices: Vec::new(), success: true }
    }
}

pub fn run(c: &JobConfig) -> Result<Report> {
    match c.command.as_deref() {
        Some("tilings") => tilings(c),
        Some("hurwitz") => hurwitz(c),
        Some("bracket") => bracket(c),
        Some("fit") => fit(c),
        Some("volume") => volume(c),
        Some("selftest") => run_selftest(c),
        Some(other) => Err(Error::Invalid(format!("unknown command '{other}'"))),
        None => Err(Error::Invalid("no command given".into())),
    }
}

fn need<'a, T>(v: &'a Option<T>, name: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Invalid(format!("missing --{}", name.replace('_', "-"))))
}

fn series_rows(s: &QSeries) -> Vec<Vec<String>> {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (re, im) = c.to_complex();
            let decimal = if im.abs() < 1e-12 { format!("{re:.12e}") } else { format!("{re:.12e}{im:+.12e}i") };
            vec![rational_to_string(&s.exponent(i)), c.to_string(), decimal]
        })
        .collect()
}

const SERIES_HEADER: [&str; 3] = ["exponent", "exact", "decimal"];

fn fit_json(fit: &FitResult, basis: &QMBasis) -> Value {
    let coefficients: Vec<Value> =
        fit.names.iter().zip(&fit.coefficients).map(|(n, c)| json!({"name": n, "value": c.to_string()})).collect();
    let poly = cusp_polynomial(fit, basis).ok();
    json!({
        "N": basis.n,
        "weight_bound": fit.weight_bound,
        "coefficients": coefficients,
        "window": fit.window,
        "validated": fit.validated,
        "residual_ok": fit.residual_ok,
        "P": poly.as_ref().map(|p| (0..p.coeffs.len()).map(|k| p.coeff(k).to_string()).collect::<Vec<_>>()),
    })
}

fn basis_for(c: &JobConfig, n: u32, len: usize) -> Result<QMBasis> {
    match c.preset.as_deref() {
        None | Some("default") => qm_basis(n, c.weight_bound.unwrap_or(2), len),
        Some(name) => {
            let b = preset(name, len)?;
            if b.n != n {
                return Err(Error::Invalid(format!("preset '{name}' is for N = {}, not {n}", b.n)));
            }
            Ok(b)
        }
    }
}

fn tilings(c: &JobConfig) -> Result<Report> {
    let tile = Tile::parse(need(&c.tile, "tile")?)?;
    let curvatures = need(&c.curvatures, "curvatures")?.clone();
    let order = c.require_order(10)?;
    let connectivity = Connectivity::parse(c.connectivity.as_deref().unwrap_or("connected"))?;
    let problem = TilingProblem::new(tile, curvatures.clone());
    let t = tilings_series(&problem, order, connectivity)?;
    let mut result = json!({
        "tile": tile.name(),
        "N": tile.level(),
        "curvatures": curvatures,
        "genus": problem.genus(),
        "profile": t.profile.as_ref().map(|d| d.to_string()),
        "connectivity": connectivity.name(),
        "experimental": t.experimental,
        "diagnostics": t.diagnostics,
        "series": t.series.to_json(),
    });
    if c.fit.unwrap_or(false) {
        let n = tile.level();
        let basis = basis_for(c, n, t.series.len())?;
        let f = fit_qseries(&t.series, &basis, c.margin.unwrap_or(2))?;
        result["fit"] = fit_json(&f, &basis);
    }
    let mut report = Report::new(result, SERIES_HEADER.to_vec(), series_rows(&t.series));
    report.notices = t.diagnostics.iter().filter(|d| d.starts_with("experimental")).cloned().collect();
    Ok(report)
}

fn hurwitz(c: &JobConfig) -> Result<Report> {
    if let Some(d) = c.degree {
        let profiles = c.profiles.clone().unwrap_or_default();
        let exact = hurwitz_number(d, &profiles);
        let mut result = json!({"degree": d, "profiles": profiles, "hurwitz_number": exact.to_string()});
        let mut rows = vec![vec!["hurwitz_number".into(), exact.to_string()]];
        if c.brute_force.unwrap_or(false) {
            let brute = brute_force_monodromy(d, &profiles, false, c.budget())?;
            result["brute_force"] = json!(brute.to_string());
            result["agree"] = json!(brute == exact);
            rows.push(vec!["brute_force".into(), brute.to_string()]);
        }
        return Ok(Report::new(result, vec!["quantity", "value"], rows));
    }
    let n = *need(&c.n, "N")?;
    let mu = need(&c.mu, "mu")?.clone();
    let extra = c.extra.clone().unwrap_or_default();
    let d = RamificationProfile::new(n, extra, mu)?;
    let order = c.require_order(6)?;
    let connectivity = Connectivity::parse(c.connectivity.as_deref().unwrap_or("disconnected"))?;
    let method = match c.method.as_deref().unwrap_or("auto") {
        "auto" => Method::Auto,
        "direct" => Method::Direct,
        "cores" => Method::Cores,
        "transfer" => Method::Transfer,
        other => return Err(Error::Invalid(format!("unknown method '{other}'"))),
    };
    let series = match connectivity {
        Connectivity::Disconnected => h_series_with(&d, order, method)?,
        Connectivity::RamifiedComponents => ramified_series(&d, order)?,
        Connectivity::Connected => connected_series(&d, order)?,
    };
    let result = json!({
        "profile": d.to_string(),
        "N": n,
        "connectivity": connectivity.name(),
        "series": series.to_json(),
    });
    Ok(Report::new(result, SERIES_HEADER.to_vec(), series_rows(&series)))
}

/// `p1^1*p2^0`, or `1` for the constant monomial.
pub fn parse_monomial(n: u32, s: &str) -> Result<Monomial> {
    let s = s.trim();
    if s == "1" {
        return Ok(Monomial::one());
    }
    let mut factors = Vec::new();
    for f in s.split('*') {
        let f = f.trim();
        let body = f.strip_prefix('p').ok_or_else(|| Error::Parse(format!("bad factor '{f}'")))?;
        let (k, r) = body.split_once('^').ok_or_else(|| Error::Parse(format!("bad factor '{f}', expected pK^R")))?;
        let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad index in '{f}'")))?;
        let r: u32 = r.parse().map_err(|_| Error::Parse(format!("bad residue in '{f}'")))?;
        if k == 0 {
            return Err(Error::Parse(format!("index must be positive in '{f}'")));
        }
        factors.push((k, r));
    }
    Ok(Monomial::new(n, factors))
}

fn read_json(path: &str, inputs: &mut Vec<(String, String)>) -> Result<Value> {
    let bytes = std::fs::read(Path::new(path)).map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
    inputs.push((path.to_string(), sha256_hex(&bytes)));
    serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn bracket(c: &JobConfig) -> Result<Report> {
    let n = *need(&c.n, "N")?;
    let order = c.require_order(10)?;
    let mut inputs = Vec::new();
    let element = match (&c.element, &c.monomial) {
        (Some(path), _) => {
            let v = read_json(path, &mut inputs)?;
            let e: LambdaNElement = serde_json::from_value(v).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            if e.n != n {
                return Err(Error::Invalid(format!("element is for N = {}, not {n}", e.n)));
            }
            e
        }
        (None, Some(m)) => LambdaNElement::monomial(n, parse_monomial(n, m)?, Cyclo::one(2 * n)),
        (None, None) => return Err(Error::Invalid("missing --element or --monomial".into())),
    };
    let series = bracket_element(&element, order)?;
    let mut result = json!({"N": n, "element": element.to_string(), "weight": element.weight(), "series": series.to_json()});
    if c.fit.unwrap_or(false) {
        let s = series.to_integer_exponents()?;
        let basis = basis_for(c, n, s.len())?;
        let f = fit_qseries(&s, &basis, c.margin.unwrap_or(2))?;
        result["fit"] = fit_json(&f, &basis);
    }
    let mut report = Report::new(result, SERIES_HEADER.to_vec(), series_rows(&series));
    report.inputs = inputs;
    Ok(report)
}

/// A series from a file: the output of `tilings` or `hurwitz`, a series
/// object, or a plain array of rational coefficients of `q^0, q^1, ...`.
fn series_from_value(v: &Value) -> Result<QSeries> {
    if let Some(s) = v.get("result").and_then(|r| r.get("series")) {
        return QSeries::from_json(s);
    }
    if let Some(s) = v.get("series") {
        return QSeries::from_json(s);
    }
    if let Some(a) = v.as_array() {
        let coeffs = a
            .iter()
            .map(|x| match x {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => n
                    .as_i64()
                    .map(|x| Rational::from_integer(x.into()))
                    .ok_or_else(|| Error::Parse(format!("non-integer number {n}, write it as a string"))),
                other => Err(Error::Parse(format!("bad coefficient {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(QSeries::from_rationals(&coeffs));
    }
    QSeries::from_json(v)
}

fn fit(c: &JobConfig) -> Result<Report> {
    let n = *need(&c.n, "N")?;
    let mut inputs = Vec::new();
    let series = series_from_value(&read_json(need(&c.series, "series")?, &mut inputs)?)?;
    let series = series.to_integer_exponents()?;
    let basis = basis_for(c, n, series.len())?;
    let f = fit_qseries(&series, &basis, c.margin.unwrap_or(2))?;
    let rows = f.names.iter().zip(&f.coefficients).map(|(name, v)| vec![name.clone(), v.to_string()]).collect();
    let mut report = Report::new(fit_json(&f, &basis), vec!["element", "coefficient"], rows);
    report.inputs = inputs;
    report.success = f.residual_ok;
    Ok(report)
}

fn volume(c: &JobConfig) -> Result<Report> {
    let n = *need(&c.n, "N")?;
    let tile = match n {
        3 => Tile::Bihex,
        4 => Tile::Square,
        6 => Tile::Triangle,
        _ => return Err(Error::Invalid(format!("volumes are computed for N in {{3, 4, 6}}, got {n}"))),
    };
    let curvatures = need(&c.curvatures, "mu")?;
    let mut stratum = stratum_from_curvatures(tile, curvatures)?;
    if let Some(d) = c.dim {
        stratum = stratum.with_dim(d)?;
    }
    // triangulations go through the slower core/quotient route
    let order = c.require_order(if n == 6 { 10 } else { 16 })?;
    let weight_bound = c.weight_bound.unwrap_or(stratum.dim);
    let normalization = match &c.normalization {
        Some(s) => parse_rational(s)?,
        None => default_normalization(),
    };
    let hexagon_index = match &c.hexagon_index {
        Some(s) => parse_rational(s)?,
        None => Rational::from_integer(1.into()),
    };
    let (r, f) = volume_from_tilings(&stratum, order, weight_bound, &normalization, &hexagon_index)?;
    let basis = qm_basis(n, weight_bound, order + 1)?;
    let mut result = r.to_json();
    result["fit"] = fit_json(&f, &basis);
    let j = &result;
    let keys = ["stratum", "status", "volume", "mechanical", "projectivized", "normalization", "hexagon_index"];
    let rows = keys
        .iter()
        .map(|k| vec![k.to_string(), j[*k].as_str().map(str::to_string).unwrap_or_else(|| j[*k].to_string())])
        .collect();
    let mut report = Report::new(result, vec!["quantity", "value"], rows);
    report.notices = r.diagnostics.iter().filter(|d| d.starts_with("experimental")).cloned().collect();
    Ok(report)
}

fn run_selftest(c: &JobConfig) -> Result<Report> {
    let ids: Vec<u32> = match &c.criteria {
        Some(v) => v.clone(),
        None => selftest::CRITERIA.iter().map(|(i, _)| *i).collect(),
    };
    let mut results = Vec::new();
    let mut notices = Vec::new();
    for id in ids {
        let r = selftest::run(id)?;
        notices.push(r.to_string());
        results.push(r);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let result = json!({
        "criteria": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "passed": passed,
        "total": results.len(),
    });
    let rows = results
        .iter()
        .map(|r| vec![r.id.to_string(), r.name.to_string(), r.passed.to_string(), r.detail.clone()])
        .collect();
    let mut report = Report::new(result, vec!["id", "name", "passed", "detail"], rows);
    report.success = passed == results.len();
    report.notices = notices;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials() {
        assert_eq!(parse_monomial(3, "p1^1*p2^0").unwrap(), Monomial::new(3, vec![(1, 1), (2, 0)]));
        assert_eq!(parse_monomial(3, "p1^4").unwrap(), Monomial::new(3, vec![(1, 1)]));
        assert_eq!(parse_monomial(3, "1").unwrap(), Monomial::one());
        assert!(parse_monomial(3, "q1^1").is_err());
        assert!(parse_monomial(3, "p0^1").is_err());
    }

    #[test]
    fn series_inputs() {
        let s = series_from_value(&json!(["0", "0", "1/2", 1])).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.coeff(2).to_string(), "1/2");
        let wrapped = json!({"result": {"series": s.to_json()}});
        assert_eq!(series_from_value(&wrapped).unwrap().coeffs(), s.coeffs());
    }
}
