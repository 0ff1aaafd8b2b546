//! Config files through to figure datasets.

use std::fs;

use drunk_games::basins::{estimate_attractiveness, McParams};
use drunk_games::config::{load_game, AbmConfigFile, GameConfigFile};
use drunk_games::equilibria::{equilibria, StabilityClass};
use drunk_games::experiments::{reproduce, verify_manifest, ExperimentSpec, Figure, Manifest};
use drunk_games::{Execution, Preset};

#[test]
fn explicit_config_matches_preset_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("game.json");
    let text =
        GameConfigFile::from_game(&Preset::DrunkPrisoner { s: 0.8 }.build()).to_json_string();
    fs::write(&path, text).unwrap();
    let dg = load_game(&path).unwrap();
    assert_eq!(dg, Preset::DrunkPrisoner { s: 0.8 }.build());

    let interior: Vec<_> = equilibria(&dg).interior().copied().collect();
    assert_eq!(interior.len(), 1);
    assert_eq!(interior[0].stability, StabilityClass::StableSpiral);

    let mc = McParams::with_samples(200);
    let a = estimate_attractiveness(&dg, &mc, Execution::Parallel).unwrap();
    let b = estimate_attractiveness(&dg, &mc, Execution::Sequential).unwrap();
    assert_eq!(a, b);
}

#[test]
fn abm_config_resolves_heterogeneity() {
    let cfg = AbmConfigFile::from_json_str(
        r#"{"game": {"preset": {"name": "drunk_prisoner", "params": {"s": 0.4}}},
            "abm": {"n": 50, "t_max": 3}, "delta0": 0.4}"#,
    )
    .unwrap();
    let (abm, _) = cfg.resolve().unwrap();
    assert!((abm.alpha1 - 0.3).abs() < 1e-15 && (abm.alpha2 - 0.7).abs() < 1e-15);
}

#[test]
fn fig3_datasets_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let spec = ExperimentSpec {
        overrides: [("resolution".to_string(), 5.0), ("t_max".to_string(), 20.0)].into(),
        ..ExperimentSpec::new(Figure::Fig3, dir.path(), 1)
    };
    let m = reproduce(&spec).unwrap();
    assert_eq!(m.files.len(), 1 + 3 * 3);
    let on_disk: Manifest =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fig3/manifest.json")).unwrap())
            .unwrap();
    assert_eq!(on_disk, m);
    assert!(verify_manifest(dir.path(), &m).unwrap());

    for s in ["0.4", "0.5", "0.8"] {
        let eq: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(dir.path().join(format!("fig3/equilibria_s{s}.json"))).unwrap(),
        )
        .unwrap();
        let interior = eq
            .as_array()
            .unwrap()
            .iter()
            .find(|p| p["kind"] == "interior")
            .unwrap();
        assert!((interior["alpha"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    // tampering is detected
    fs::write(dir.path().join("fig3/field_s0.5.csv"), "x\n").unwrap();
    assert!(!verify_manifest(dir.path(), &m).unwrap());
}

#[test]
fn fig7_runs_have_full_length() {
    let dir = tempfile::tempdir().unwrap();
    let spec = ExperimentSpec {
        overrides: [("n".to_string(), 200.0), ("rounds".to_string(), 20.0)].into(),
        ..ExperimentSpec::new(Figure::Fig7, dir.path(), 9)
    };
    reproduce(&spec).unwrap();
    for tag in ["a", "b", "c"] {
        let text = fs::read_to_string(dir.path().join(format!("fig7/run_{tag}.csv"))).unwrap();
        assert!(text.starts_with(
            "t,x_mean,alpha_mean,alpha_g1,alpha_g2,coop_g1,coop_g2,delta_alpha,dist_interior\n"
        ));
        assert_eq!(text.lines().count(), 22);
    }
}
