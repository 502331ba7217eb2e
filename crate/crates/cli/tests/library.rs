use thermalink_cli::config::{Config, Route};
use thermalink_cli::record::{fmt_f64, header, COLUMNS};
use thermalink_cli::run::{point_seed, sweep_points};
use thermalink_cli::{resolve_workers, CliError};

fn config(extra: &str) -> Result<Config, CliError> {
    Config::from_json(&format!(
        r#"{{ "schema_version": 1, "params": {{ "gamma1": 1, "gamma2": 1, "kappa": 0.1, "n_th": 2 }}{extra} }}"#
    ))
}

#[test]
fn workers_prefer_flag_then_environment_then_config() {
    assert_eq!(resolve_workers(Some(3), Some("5"), Some(7)).unwrap(), Some(3));
    assert_eq!(resolve_workers(None, Some("5"), Some(7)).unwrap(), Some(5));
    assert_eq!(resolve_workers(None, None, Some(7)).unwrap(), Some(7));
    assert_eq!(resolve_workers(None, None, None).unwrap(), None);
    assert!(resolve_workers(Some(0), None, None).is_err());
    assert!(resolve_workers(None, Some("x"), None).is_err());
}

#[test]
fn unknown_keys_are_rejected_at_every_level() {
    assert!(config("").is_ok());
    assert!(config(r#", "extra": true"#).is_err());
    assert!(config(r#", "stochastic": { "trajectories": 100, "paths": 3 }"#).is_err());
    assert!(config(r#", "sweep": { "axes": [ { "name": "kappa", "values": [1], "step": 2 } ] }"#).is_err());
    assert!(Config::from_json(
        r#"{ "schema_version": 1, "params": { "gamma1": 1, "gamma2": 1, "kappa": 0.1, "n_th": 2, "g": 1 } }"#
    )
    .is_err());
}

#[test]
fn axes_are_validated() {
    assert!(config(r#", "sweep": { "axes": [ { "name": "temperature", "values": [1] } ] }"#).is_err());
    assert!(config(
        r#", "sweep": { "axes": [ { "name": "kappa", "scale": "log", "start": 0, "stop": 1, "points": 3 } ] }"#
    )
    .is_err());
    assert!(config(r#", "sweep": { "axes": [ { "name": "kappa", "start": 0.1, "points": 3 } ] }"#).is_err());
    assert!(config(r#", "sweep": { "axes": [] }"#).is_err());
}

#[test]
fn sweep_grid_is_row_major() {
    let cfg = config(
        r#", "sweep": { "axes": [
            { "name": "n_th", "values": [1, 2] },
            { "name": "kappa", "scale": "log", "start": 0.01, "stop": 1, "points": 3 } ] }"#,
    )
    .unwrap();
    let pts = sweep_points(&cfg).unwrap();
    let pairs: Vec<(f64, f64)> = pts.iter().map(|p| (p.n_th, p.kappa)).collect();
    assert_eq!(pairs.len(), 6);
    assert_eq!(pairs[0], (1.0, 0.01));
    assert!((pairs[1].1 - 0.1).abs() < 1e-15);
    assert_eq!(pairs[3].0, 2.0);
}

#[test]
fn routes_parse_by_name() {
    for r in Route::ALL {
        assert_eq!(r.name().parse::<Route>().unwrap(), r);
    }
    assert!("nope".parse::<Route>().is_err());
}

#[test]
fn floats_round_trip_with_17_digits() {
    for x in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0] {
        let s = fmt_f64(x);
        assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
        assert_eq!(mantissa.len(), 17, "{s}");
    }
}

#[test]
fn header_names_symbol_and_unit() {
    let h = header();
    assert_eq!(h.len(), COLUMNS.len());
    assert_eq!(h[0], "series (label) [-]");
    assert!(h.iter().any(|c| c == "concurrence (C) [1]"));
}

#[test]
fn point_seeds_are_distinct() {
    assert_eq!(point_seed(42, 0), 42);
    let seeds: std::collections::BTreeSet<u64> = (0..1000).map(|k| point_seed(42, k)).collect();
    assert_eq!(seeds.len(), 1000);
}
