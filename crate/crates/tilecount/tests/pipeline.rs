use tilecount::arith::{rat, Symbolic};
use tilecount::hurwitz::{tilings_series, Connectivity, Tile, TilingProblem};
use tilecount::qmodular::{cusp_polynomial, fit_qseries, qm_basis, QMBasis};
use tilecount::selftest::appendix_closed_form;
use tilecount::volumes::{default_normalization, stratum_from_curvatures, volume, volume_from_tilings, VolumeStatus};
use tilecount::Error;

fn bihex_series(order: usize) -> tilecount::qseries::QSeries {
    let p = TilingProblem::new(Tile::Bihex, vec![2, 2, 1, 1]);
    tilings_series(&p, order, Connectivity::Connected).unwrap().series
}

#[test]
fn bihex_counts_match_divisor_sums() {
    let s = bihex_series(14);
    for n in 0..=14 {
        assert_eq!(s.coeff(n).as_rational(), Some(appendix_closed_form(n as u64)), "q^{n}");
    }
}

#[test]
fn ramified_components_agree_for_the_appendix_profile() {
    let p = TilingProblem::new(Tile::Bihex, vec![2, 2, 1, 1]);
    let con = tilings_series(&p, 8, Connectivity::Connected).unwrap().series;
    let ram = tilings_series(&p, 8, Connectivity::RamifiedComponents).unwrap().series;
    assert_eq!(con, ram);
}

#[test]
fn appendix_volume_end_to_end() {
    let s = stratum_from_curvatures(Tile::Bihex, &[2, 2, 1, 1]).unwrap();
    let (r, fit) = volume_from_tilings(&s, 14, 2, &default_normalization(), &rat(1, 1)).unwrap();
    assert!(fit.residual_ok);
    assert_eq!(r.status, VolumeStatus::Finite);
    assert_eq!(r.value.unwrap().to_string(), "2/3*pi^2");
    assert_eq!(r.mechanical.unwrap().to_string(), "2/9*pi^2");
    assert_eq!(r.projectivized.unwrap().to_string(), "1/3*pi");
}

#[test]
fn leading_term_is_basis_independent() {
    let s = bihex_series(20);
    let leads: Vec<Symbolic> = [2u32, 3]
        .iter()
        .map(|&w| {
            let basis: QMBasis = qm_basis(3, w, 21).unwrap();
            let fit = fit_qseries(&s, &basis, 2).unwrap();
            assert!(fit.residual_ok);
            cusp_polynomial(&fit, &basis).unwrap().leading()
        })
        .collect();
    assert_eq!(leads[0], leads[1]);
    assert_eq!(leads[0], Symbolic::monomial(3, rat(1, 27), 2, 0));
}

#[test]
fn quartic_strata_are_finite_and_rational_in_theta() {
    for k in [vec![2i64, 2, 2, 2], vec![3, 3, 1, 1], vec![2, 2, 2, 1, 1]] {
        let s = stratum_from_curvatures(Tile::Square, &k).unwrap();
        let w = s.dim;
        let (r, _) = volume_from_tilings(&s, 12, w, &rat(1, 1), &rat(1, 1)).unwrap();
        assert_eq!(r.status, VolumeStatus::Finite, "{s}");
        assert_eq!(r.poly.degree(), Some(s.dim as usize));
        assert_eq!(r.membership, Some(true));
        assert!(r.value.unwrap().to_f64() > 0.0);
    }
}

#[test]
fn hexagon_index_scales_the_volume() {
    let s = stratum_from_curvatures(Tile::Bihex, &[2, 2, 1, 1]).unwrap();
    let basis = qm_basis(3, 2, 15).unwrap();
    let fit = fit_qseries(&bihex_series(14), &basis, 2).unwrap();
    let one = volume(&s, &fit, &basis, &rat(1, 1), &rat(1, 1)).unwrap();
    let two = volume(&s, &fit, &basis, &rat(1, 1), &rat(2, 1)).unwrap();
    assert_eq!(two.value.unwrap(), one.value.unwrap().scale(&rat(2, 1)));
}

#[test]
fn connected_mode_needs_curvatures() {
    let p = TilingProblem::new(Tile::Square, vec![]);
    assert!(matches!(tilings_series(&p, 4, Connectivity::Connected), Err(Error::Invalid(_))));
}

#[test]
fn triangles_are_flagged_experimental() {
    let p = TilingProblem::new(Tile::Triangle, vec![2, 2, 2, 2, 2, 2]);
    let t = tilings_series(&p, 2, Connectivity::Disconnected).unwrap();
    assert!(t.experimental);
    assert!(t.diagnostics.iter().any(|d| d.starts_with("experimental")));
}

#[test]
fn unattainable_curvatures_give_zero() {
    let p = TilingProblem::new(Tile::Bihex, vec![2, 2, 1]);
    let t = tilings_series(&p, 6, Connectivity::Disconnected).unwrap();
    assert!(t.series.coeffs().iter().all(|c| c.is_zero()));
    assert!(!t.diagnostics.is_empty());
}
