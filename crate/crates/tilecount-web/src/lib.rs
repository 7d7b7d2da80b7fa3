//! Browser bindings for the demo page in `www/`.
//!
//! Every entry point takes plain strings and numbers and returns a JSON
//! document. The `*_json` functions hold the logic and run natively as well,
//! so they are what the tests exercise.

use serde_json::json;
use tilecount::hurwitz::{hurwitz_number, tilings_series, Connectivity, Tile, TilingProblem};
use tilecount::volumes::{default_normalization, stratum_from_curvatures, volume_from_tilings};
use tilecount::{Error, Rational, Result};
use wasm_bindgen::prelude::*;

/// Orders above this would keep a browser tab busy for too long.
pub const MAX_ORDER: usize = 24;

fn parse_ints<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad entry '{x}'"))))
        .collect()
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::Budget(format!("order {order} exceeds the demo limit {MAX_ORDER}")));
    }
    Ok(())
}

pub fn tilings_json(tile: &str, curvatures: &str, order: usize, connectivity: &str) -> Result<String> {
    check_order(order)?;
    let tile = Tile::parse(tile)?;
    let problem = TilingProblem::new(tile, parse_ints(curvatures)?);
    let t = tilings_series(&problem, order, Connectivity::parse(connectivity)?)?;
    let coeffs: Vec<_> = (0..t.series.len())
        .filter(|&i| !t.series.coeffs()[i].is_zero())
        .map(|i| {
            let c = &t.series.coeffs()[i];
            json!({"exponent": tilecount::arith::rational_to_string(&t.series.exponent(i)), "exact": c.to_string(), "approx": c.to_complex().0})
        })
        .collect();
    Ok(json!({
        "tile": tile.name(),
        "genus": problem.genus(),
        "experimental": t.experimental,
        "coefficients": coeffs,
    })
    .to_string())
}

pub fn volume_json(n: u32, curvatures: &str, order: usize) -> Result<String> {
    check_order(order)?;
    let tile = match n {
        3 => Tile::Bihex,
        4 => Tile::Square,
        _ => return Err(Error::Invalid(format!("the demo computes volumes for N = 3 or 4, got {n}"))),
    };
    let stratum = stratum_from_curvatures(tile, &parse_ints(curvatures)?)?;
    let one = Rational::from_integer(1.into());
    let (r, _) = volume_from_tilings(&stratum, order, stratum.dim, &default_normalization(), &one)?;
    Ok(r.to_json().to_string())
}

pub fn hurwitz_json(degree: usize, profiles: &str) -> Result<String> {
    let profiles: Vec<Vec<u32>> = profiles.split(';').map(parse_ints).collect::<Result<_>>()?;
    if degree > 12 {
        return Err(Error::Budget(format!("degree {degree} exceeds the demo limit 12")));
    }
    let h = hurwitz_number(degree, &profiles);
    Ok(json!({"degree": degree, "profiles": profiles, "hurwitz_number": h.to_string()}).to_string())
}

fn js(r: Result<String>) -> std::result::Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn tilings(tile: &str, curvatures: &str, order: usize, connectivity: &str) -> std::result::Result<String, JsValue> {
    js(tilings_json(tile, curvatures, order, connectivity))
}

#[wasm_bindgen]
pub fn volume(n: u32, curvatures: &str, order: usize) -> std::result::Result<String, JsValue> {
    js(volume_json(n, curvatures, order))
}

#[wasm_bindgen]
pub fn hurwitz(degree: usize, profiles: &str) -> std::result::Result<String, JsValue> {
    js(hurwitz_json(degree, profiles))
}
