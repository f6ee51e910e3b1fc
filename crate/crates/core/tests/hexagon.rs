//! Whole-pipeline checks on the regular hexagon and small polygons.

use soapfilm_core::catalog::{generate_catalog, row_anomalies, CatalogStatus};
use soapfilm_core::geom::regular_polygon;
use soapfilm_core::relax::{
    effective_nodal_total, find_all_local_minima, find_local_minima_with, is_stable, Equilibrium, RelaxOptions,
};
use soapfilm_core::spanning::{enumerate_spanning_trees, minimum_spanning_tree, spanning_catalog};
use soapfilm_core::triangulation::build_configuration;

fn has_length(lengths: &[f64], want: f64) -> bool {
    lengths.iter().any(|l| (l - want).abs() < 1e-9)
}

#[test]
fn hexagon_equilibria() {
    let hex = regular_polygon(6, 1.0).unwrap();
    let found = find_all_local_minima(&hex, 6.0).unwrap();
    let lengths: Vec<f64> = found.trees.iter().map(|t| t.total_length()).collect();
    assert!((lengths[0] - 5.0).abs() < 1e-9);
    let s = f64::sqrt;
    for want in [
        s(27.0),
        s(28.0),
        1.0 + s(19.0),
        1.0 + s(21.0),
        2.0 + s(12.0),
        2.0 + s(13.0),
        3.0 + s(7.0),
        4.0 + s(3.0),
        6.0,
    ] {
        assert!(has_length(&lengths, want), "missing {want}");
    }
    assert!(!has_length(&lengths, s(31.0)));
    for t in &found.trees {
        assert!(t.stable() && t.is_planar());
    }
    let d = &found.diagnostics;
    assert_eq!(d.topologies, 5625);
}

#[test]
fn strict_rule_keeps_three_trees() {
    let hex = regular_polygon(6, 1.0).unwrap();
    let found = find_local_minima_with(&hex, 6.0, Equilibrium::Strict, &RelaxOptions::default()).unwrap();
    let lengths: Vec<f64> = found.trees.iter().map(|t| t.total_length()).collect();
    assert_eq!(lengths.len(), 3);
    for (got, want) in lengths.iter().zip([5.0, 27f64.sqrt(), 28f64.sqrt()]) {
        assert!((got - want).abs() < 1e-9);
    }
    assert!(found.trees.iter().all(|t| is_stable(t, 1e-6)));
}

#[test]
fn searched_trees_match_constructions() {
    let hex = regular_polygon(6, 1.0).unwrap();
    let found = find_all_local_minima(&hex, 6.0).unwrap();
    for name in ["fig2a", "fig2b", "fig2c", "cfg_a", "cfg_b", "cfg_c"] {
        let built = build_configuration(name).unwrap();
        let key = soapfilm_core::relax::dihedral_key(&built);
        assert!(
            found.trees.iter().any(|t| soapfilm_core::relax::dihedral_key(t) == key),
            "{name} not found by the search"
        );
    }
}

#[test]
fn nodal_totals() {
    assert_eq!(effective_nodal_total(&build_configuration("fig2b").unwrap()), 0);
    assert_eq!(effective_nodal_total(&build_configuration("cfg_a").unwrap()), 1);
    assert_eq!(effective_nodal_total(&build_configuration("fig2a").unwrap()), 4);
    assert_eq!(effective_nodal_total(&build_configuration("cfg_c").unwrap()), 2);
}

#[test]
fn spanning_minimum_matches_brute_force() {
    for n in 3..=7 {
        let poly = regular_polygon(n, 1.0).unwrap();
        let brute = enumerate_spanning_trees(&poly)
            .unwrap()
            .iter()
            .map(|t| t.total_length())
            .fold(f64::INFINITY, f64::min);
        assert!((minimum_spanning_tree(&poly).total_length() - brute).abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn steiner_minimum_below_spanning_minimum() {
    for n in 3..=7 {
        let poly = regular_polygon(n, 1.0).unwrap();
        let steiner = find_all_local_minima(&poly, f64::INFINITY).unwrap();
        let best = steiner.trees[0].total_length();
        assert!(best <= minimum_spanning_tree(&poly).total_length() + 1e-12, "n = {n}");
    }
}

#[test]
fn spanning_catalog_groups() {
    let hex = regular_polygon(6, 1.0).unwrap();
    let classes = spanning_catalog(&hex, 6.0).unwrap();
    let lengths: Vec<f64> = classes.iter().map(|c| c.length).collect();
    for want in [5.0, 4.0 + 3f64.sqrt(), 6.0] {
        assert!(has_length(&lengths, want));
    }
    assert!(lengths.iter().all(|&l| has_length(&[5.0, 4.0 + 3f64.sqrt(), 6.0], l)));
    let under_cap = enumerate_spanning_trees(&hex)
        .unwrap()
        .iter()
        .filter(|t| t.total_length() <= 6.0 + 1e-9)
        .count();
    assert_eq!(classes.iter().map(|c| c.multiplicity).sum::<usize>(), under_cap);
    for c in &classes {
        assert_eq!(c.representative.edges().len(), 5);
    }
}

#[test]
fn catalog_join() {
    let entries = generate_catalog(6.0).unwrap();
    let exceptions: Vec<_> = entries.iter().filter(|e| e.status == CatalogStatus::Exception).collect();
    assert_eq!(exceptions.len(), 2);
    assert!(exceptions.iter().any(|e| e.p == 6 && e.q == 3 && e.q_alt == Some(5)));
    assert!(exceptions
        .iter()
        .any(|e| e.p == 3 && e.q == 2 && e.matched.as_ref().map(|m| m.q) == Some(1)));
    let unobserved: Vec<_> = entries
        .iter()
        .filter(|e| e.status == CatalogStatus::PredictedUnobserved)
        .collect();
    assert_eq!(unobserved.len(), 1);
    assert!((unobserved[0].predicted_length - 31f64.sqrt()).abs() < 1e-12);
    assert_eq!(unobserved[0].n, 0);

    let anomalies = row_anomalies(&entries);
    assert_eq!(anomalies.len(), 1);
    assert_eq!(anomalies[0].0, 0);
    assert_eq!(anomalies[0].1.len(), 3);

    assert_eq!(generate_catalog(6.0).unwrap(), entries);
}

#[test]
fn every_hexagon_equilibrium_has_a_prediction() {
    let hex = regular_polygon(6, 1.0).unwrap();
    let entries = generate_catalog(6.0).unwrap();
    for t in find_all_local_minima(&hex, 6.0).unwrap().trees {
        assert!(
            entries
                .iter()
                .any(|e| (e.predicted_length - t.total_length()).abs() < 1e-9),
            "no prediction for {}",
            t.total_length()
        );
    }
}
