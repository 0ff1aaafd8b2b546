//! Monte Carlo estimates of the attractiveness of cooperation: the share of
//! uniformly drawn initial states whose trajectory reaches full cooperation
//! `(1, 1)`.
//!
//! Sample `i` of an estimate seeded with `seed` draws its initial state from
//! the stream `derive(seed, i)`, so the estimate does not depend on how the
//! samples are scheduled.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::equilibria::{equilibria, StabilityClass, ZERO_TOL};
use crate::error::{Error, Result};
use crate::game::PayoffMatrix;
use crate::meanfield::{
    integrate_endpoint, DrunkGame, IntegrateOptions, QPoly, State, Termination,
};
use crate::par::{map_indexed, Execution};
use crate::preset::{Preset, DEFAULT_MU};
use crate::seed::{derive, derive_path, rng, DEFAULT_SEED};

pub const COOPERATION: State = State::raw(1.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McParams {
    pub n_samples: usize,
    pub seed: u64,
    pub eps: f64,
    pub t_max: f64,
    pub dt: f64,
    /// Keep the initial state and outcome of every sample.
    #[serde(default)]
    pub keep_records: bool,
}

impl Default for McParams {
    fn default() -> Self {
        McParams {
            n_samples: 1000,
            seed: DEFAULT_SEED,
            eps: 1e-3,
            t_max: 1e4,
            dt: 0.01,
            keep_records: false,
        }
    }
}

impl McParams {
    pub fn with_samples(n_samples: usize) -> Self {
        McParams {
            n_samples,
            ..Default::default()
        }
    }

    fn options(&self) -> IntegrateOptions {
        IntegrateOptions {
            dt: self.dt,
            t_max: self.t_max,
            eps: self.eps,
            sample_every: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Cooperation,
    /// Reached another stable equilibrium.
    OtherEquilibrium,
    CycleSuspected,
    MaxTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub x0: f64,
    pub alpha0: f64,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinResult {
    pub attractiveness: f64,
    pub n_samples: usize,
    pub n_cooperative: usize,
    pub seed: u64,
    pub eps: f64,
    pub t_max: f64,
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub records: Option<Vec<SampleRecord>>,
}

/// Uniform initial state of sample `index`.
pub fn sample_initial_state(seed: u64, index: usize) -> State {
    let mut r = rng(derive(seed, index as u64));
    State::raw(r.gen::<f64>(), r.gen::<f64>())
}

/// Count the samples that converge to `(1, 1)`.
///
/// The other stable equilibria are passed to the integrator as extra
/// targets so that samples heading elsewhere stop early; they, cycles and
/// timeouts all count as non-cooperative. When `(1, 1)` is linearly
/// unstable it is not a target at all: passing near it is not convergence.
pub fn estimate_attractiveness(
    dg: &DrunkGame,
    mc: &McParams,
    exec: Execution,
) -> Result<BasinResult> {
    if mc.n_samples == 0 {
        return Err(Error::param("n_samples", "must be at least 1"));
    }
    let opts = mc.options();
    opts.validate()?;
    let report = equilibria(dg);
    let cooperation_attracts = report.points.iter().any(|p| {
        p.state.linf_distance(&COOPERATION) < ZERO_TOL
            && (p.stability.is_stable() || p.stability == StabilityClass::Degenerate)
    });
    let mut targets = Vec::new();
    if cooperation_attracts {
        targets.push(COOPERATION);
    }
    targets.extend(
        report
            .stable_states()
            .into_iter()
            .filter(|s| s.linf_distance(&COOPERATION) >= mc.eps),
    );
    let records = map_indexed(exec, mc.n_samples, |i| {
        let s0 = sample_initial_state(mc.seed, i);
        let end = integrate_endpoint(dg, s0, &opts, &targets).expect("options validated");
        let outcome = match end.termination {
            Termination::Converged { index: 0, .. } if cooperation_attracts => Outcome::Cooperation,
            Termination::Converged { .. } => Outcome::OtherEquilibrium,
            Termination::CycleSuspected => Outcome::CycleSuspected,
            Termination::MaxTime => Outcome::MaxTime,
        };
        SampleRecord {
            x0: s0.x,
            alpha0: s0.alpha,
            outcome,
        }
    });
    let n_cooperative = records
        .iter()
        .filter(|r| r.outcome == Outcome::Cooperation)
        .count();
    Ok(BasinResult {
        attractiveness: n_cooperative as f64 / mc.n_samples as f64,
        n_samples: mc.n_samples,
        n_cooperative,
        seed: mc.seed,
        eps: mc.eps,
        t_max: mc.t_max,
        dt: mc.dt,
        records: mc.keep_records.then_some(records),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    /// One value per axis, in axis order.
    pub coords: Vec<f64>,
    pub kappa: f64,
    pub result: BasinResult,
}

/// Cells are ordered with `kappa` outermost, then the axes in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDataset {
    pub axes: Vec<Axis>,
    pub kappas: Vec<f64>,
    pub master_seed: u64,
    pub cells: Vec<SweepCell>,
}

impl SweepDataset {
    /// Mean attractiveness over the cells with the given `kappa`.
    pub fn mean_attractiveness(&self, kappa: f64) -> Option<f64> {
        let v: Vec<f64> = self
            .cells
            .iter()
            .filter(|c| c.kappa == kappa)
            .map(|c| c.result.attractiveness)
            .collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }

    /// `(coordinate, attractiveness)` along a one-axis sweep at `kappa`.
    pub fn curve(&self, kappa: f64) -> Vec<(f64, f64)> {
        self.cells
            .iter()
            .filter(|c| c.kappa == kappa)
            .map(|c| (c.coords[0], c.result.attractiveness))
            .collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<&str> = self.axes.iter().map(|a| a.name.as_str()).collect();
        header.extend(["kappa", "attractiveness", "n_samples", "seed"]);
        out.write_record(&header)?;
        for c in &self.cells {
            let mut row: Vec<String> = c.coords.iter().map(f64::to_string).collect();
            row.push(c.kappa.to_string());
            row.push(c.result.attractiveness.to_string());
            row.push(c.result.n_samples.to_string());
            row.push(c.result.seed.to_string());
            out.write_record(&row)?;
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn check_grid(name: &str, grid: &[f64], lo: f64, hi: f64) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::param(name, "grid is empty"));
    }
    match grid.iter().find(|v| !(lo..=hi).contains(*v)) {
        Some(v) => Err(Error::param(name, format!("{v} is outside [{lo}, {hi}]"))),
        None => Ok(()),
    }
}

fn check_kappas(kappas: &[f64]) -> Result<()> {
    if kappas.is_empty() {
        return Err(Error::param("kappas", "list is empty"));
    }
    match kappas.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
        Some(k) => Err(Error::param(
            "kappas",
            format!("{k} is not a positive real"),
        )),
        None => Ok(()),
    }
}

/// Attractiveness over a grid of second games `S2 x T2` paired with `g1`,
/// with `q(x) = x - 0.5`.
///
/// The seed of cell `(i, j)` is `derive_path(master, [i, j])` regardless of
/// `kappa`, so every `kappa` is evaluated on the same initial states.
pub fn sweep_g2_grid(
    g1: &PayoffMatrix,
    s2_grid: &[f64],
    t2_grid: &[f64],
    kappas: &[f64],
    mc: &McParams,
    exec: Execution,
) -> Result<SweepDataset> {
    g1.validate()?;
    check_grid("S2", s2_grid, -1.0, 1.0)?;
    check_grid("T2", t2_grid, 0.0, 2.0)?;
    check_kappas(kappas)?;
    let per_kappa = s2_grid.len() * t2_grid.len();
    let n = per_kappa * kappas.len();
    let cells = map_indexed(exec, n, |c| -> Result<SweepCell> {
        let (k, rest) = (c / per_kappa, c % per_kappa);
        let (i, j) = (rest / t2_grid.len(), rest % t2_grid.len());
        let g2 = PayoffMatrix::normalized(s2_grid[i], t2_grid[j])?;
        let dg = DrunkGame::new(*g1, g2, kappas[k], QPoly::linear(DEFAULT_MU))?;
        let cell_mc = McParams {
            seed: derive_path(mc.seed, &[i as u64, j as u64]),
            ..*mc
        };
        Ok(SweepCell {
            coords: vec![s2_grid[i], t2_grid[j]],
            kappa: kappas[k],
            result: estimate_attractiveness(&dg, &cell_mc, exec)?,
        })
    });
    Ok(SweepDataset {
        axes: vec![
            Axis {
                name: "S2".into(),
                grid: s2_grid.to_vec(),
            },
            Axis {
                name: "T2".into(),
                grid: t2_grid.to_vec(),
            },
        ],
        kappas: kappas.to_vec(),
        master_seed: mc.seed,
        cells: cells.into_iter().collect::<Result<_>>()?,
    })
}

/// Attractiveness along the battle's `S1` line for snowdrift temptation
/// `t_sd`.
///
/// Every cell uses the same sample seed `derive(master, 0)` (common random
/// numbers), so differences along the curve reflect the game, not the draw.
pub fn sweep_battle_line(
    s1_grid: &[f64],
    t_sd: f64,
    kappas: &[f64],
    mc: &McParams,
    exec: Execution,
) -> Result<SweepDataset> {
    check_grid("S1", s1_grid, 0.0, 1.0)?;
    check_kappas(kappas)?;
    let n = s1_grid.len() * kappas.len();
    let seed = derive(mc.seed, 0);
    let cells = map_indexed(exec, n, |c| -> Result<SweepCell> {
        let (k, i) = (c / s1_grid.len(), c % s1_grid.len());
        let dg = Preset::Battle {
            s1: s1_grid[i],
            t_sd,
        }
        .build_with(kappas[k], DEFAULT_MU)?;
        Ok(SweepCell {
            coords: vec![s1_grid[i]],
            kappa: kappas[k],
            result: estimate_attractiveness(&dg, &McParams { seed, ..*mc }, exec)?,
        })
    });
    Ok(SweepDataset {
        axes: vec![Axis {
            name: "S1".into(),
            grid: s1_grid.to_vec(),
        }],
        kappas: kappas.to_vec(),
        master_seed: mc.seed,
        cells: cells.into_iter().collect::<Result<_>>()?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub from: f64,
    pub to: f64,
    pub delta: f64,
}

/// Largest increase between consecutive points of a curve.
pub fn largest_jump(curve: &[(f64, f64)]) -> Option<Jump> {
    curve
        .windows(2)
        .map(|w| Jump {
            from: w[0].0,
            to: w[1].0,
            delta: w[1].1 - w[0].1,
        })
        .max_by(|a, b| a.delta.total_cmp(&b.delta))
}
