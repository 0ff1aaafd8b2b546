//! Agent-based runs against their mean-field counterpart.

use drunk_games::abm::{
    compare_with_meanfield, drift_agreement, meanfield_counterpart, run_abm, AbmConfig,
    PerceptionMode,
};
use drunk_games::meanfield::{integrate, IntegrateOptions};
use drunk_games::{Execution, Preset, State};

#[test]
fn pub_dilemma_trace_follows_meanfield() {
    let dg = Preset::PubDilemma.build();
    let cfg = AbmConfig {
        kappa: 1.0,
        t_max: 5000,
        seed: 11,
        ..AbmConfig::default()
    };
    let run = run_abm(&cfg, &dg, Execution::Parallel).unwrap();
    let cmp = compare_with_meanfield(&run.stats, &cfg, &dg).unwrap();
    assert!(cmp.rms < 0.05, "{cmp:?}");

    // oracle: the plain integrator from the realized initial means ends at
    // the same corner as the population
    let (ode, _) = meanfield_counterpart(&cfg, &dg).unwrap();
    let targets = [State::new(0.0, 0.0).unwrap(), State::new(1.0, 1.0).unwrap()];
    let opts = IntegrateOptions {
        t_max: 1e4,
        ..Default::default()
    };
    let tr = integrate(&ode, run.stats[0].mean_state(), &opts, &targets).unwrap();
    let end = tr.final_state();
    let last = run.last();
    assert!(
        (end.x - last.x_mean).abs() < 0.05 && (end.alpha - last.alpha_mean).abs() < 0.05,
        "{end:?} vs {last:?}"
    );
}

#[test]
fn expected_mode_drifts_along_the_field() {
    let cfg = AbmConfig {
        n: 5000,
        t_max: 1500,
        perception_mode: PerceptionMode::Expected,
        seed: 5,
        ..AbmConfig::default()
    };
    for s in [0.4, 0.8] {
        let dg = Preset::DrunkPrisoner { s }.build();
        let run = run_abm(&cfg, &dg, Execution::Parallel).unwrap();
        let (ode, _) = meanfield_counterpart(&cfg, &dg).unwrap();
        // skip rounds next to a fixed point
        let share = drift_agreement(&run.stats, &ode, 0.01).unwrap();
        assert!(share >= 0.95, "s={s}: {share}");
    }
}
