use serde_json::Value;
use tilecount_web::{hurwitz_json, tilings_json, volume_json};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn bihex_tilings_start_with_one_half() {
    let v = parse(tilings_json("bihex", "2,2,1,1", 6, "connected").unwrap());
    assert_eq!(v["coefficients"][0]["exponent"], "2");
    assert_eq!(v["coefficients"][0]["exact"], "1/2");
    assert_eq!(v["genus"], 0);
}

#[test]
fn volume_of_the_appendix_stratum() {
    let v = parse(volume_json(3, "2,2,1,1", 14).unwrap());
    assert_eq!(v["volume"], "2/3*pi^2");
    assert_eq!(v["status"], "finite");
}

#[test]
fn hurwitz_number_of_simple_covers() {
    // four simple branch points over the sphere in degree 2
    let v = parse(hurwitz_json(2, "2;2").unwrap());
    assert_eq!(v["hurwitz_number"], "1/2");
}

#[test]
fn demo_limits_are_enforced() {
    assert!(tilings_json("bihex", "2,2,1,1", 100, "connected").is_err());
    assert!(volume_json(6, "3,3,3,3", 8).is_err());
    assert!(tilings_json("pentagon", "1", 4, "connected").is_err());
}
