use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{step_rk4, DrunkGame, State};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    pub dt: f64,
    pub t_max: f64,
    /// L-infinity radius around a target that counts as converged.
    pub eps: f64,
    /// Record every `sample_every`-th step.
    pub sample_every: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            dt: 0.01,
            t_max: 1e4,
            eps: 1e-3,
            sample_every: 10,
        }
    }
}

impl IntegrateOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(name, format!("{v} is not a positive real")))
            }
        };
        positive("dt", self.dt)?;
        positive("t_max", self.t_max)?;
        positive("eps", self.eps)?;
        if self.sample_every == 0 {
            return Err(Error::param("sample_every", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    Converged { target: State, index: usize },
    MaxTime,
    CycleSuspected,
}

impl Termination {
    pub fn converged_to(&self, index: usize) -> bool {
        matches!(self, Termination::Converged { index: i, .. } if *i == index)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub dt: f64,
    pub samples: Vec<(f64, State)>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn final_state(&self) -> State {
        self.samples
            .last()
            .map(|&(_, s)| s)
            .expect("trajectory holds the initial state")
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "x", "alpha"])?;
        for (t, s) in &self.samples {
            out.write_record(&[t.to_string(), s.x.to_string(), s.alpha.to_string()])?;
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Outcome of an integration whose intermediate samples were not kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEnd {
    pub termination: Termination,
    pub state: State,
    pub t: f64,
}

/// Spatial hash of earlier samples for the revisit test. Only the first
/// sample in each cell is kept: elapsed time and path length both grow
/// monotonically, so it is the best candidate for a revisit.
struct RevisitIndex {
    cell: f64,
    radius: f64,
    min_elapsed: f64,
    min_path: f64,
    buckets: HashMap<(i64, i64), (f64, f64, State)>,
}

impl RevisitIndex {
    fn new(opts: &IntegrateOptions) -> Self {
        let radius = opts.eps / 10.0;
        RevisitIndex {
            cell: radius,
            radius,
            min_elapsed: opts.t_max / 100.0,
            // a stall next to an equilibrium is not a cycle
            min_path: 10.0 * opts.eps,
            buckets: HashMap::new(),
        }
    }

    fn key(&self, s: &State) -> (i64, i64) {
        (
            (s.x / self.cell).floor() as i64,
            (s.alpha / self.cell).floor() as i64,
        )
    }

    /// Record the sample; report whether it revisits an earlier one.
    fn visit(&mut self, t: f64, path: f64, s: State) -> bool {
        let (kx, ka) = self.key(&s);
        let mut revisit = false;
        'outer: for dx in -1..=1 {
            for da in -1..=1 {
                if let Some((t0, p0, s0)) = self.buckets.get(&(kx + dx, ka + da)) {
                    if t - t0 >= self.min_elapsed
                        && path - p0 >= self.min_path
                        && s.linf_distance(s0) <= self.radius
                    {
                        revisit = true;
                        break 'outer;
                    }
                }
            }
        }
        self.buckets.entry((kx, ka)).or_insert((t, path, s));
        revisit
    }
}

fn run(
    dg: &DrunkGame,
    s0: State,
    opts: &IntegrateOptions,
    targets: &[State],
    mut record: impl FnMut(f64, State),
) -> TrajectoryEnd {
    let hit = |s: &State| targets.iter().position(|t| s.linf_distance(t) < opts.eps);
    let mut revisits = RevisitIndex::new(opts);
    let mut path = 0.0;
    let mut s = s0;
    record(0.0, s);
    revisits.visit(0.0, 0.0, s);
    if let Some(i) = hit(&s) {
        return TrajectoryEnd {
            termination: Termination::Converged {
                target: targets[i],
                index: i,
            },
            state: s,
            t: 0.0,
        };
    }
    let n_steps = (opts.t_max / opts.dt).ceil() as u64;
    for k in 1..=n_steps {
        let next = step_rk4(dg, s, opts.dt);
        path += next.linf_distance(&s);
        s = next;
        let t = k as f64 * opts.dt;
        let sampled = k % opts.sample_every as u64 == 0;
        if let Some(i) = hit(&s) {
            record(t, s);
            return TrajectoryEnd {
                termination: Termination::Converged {
                    target: targets[i],
                    index: i,
                },
                state: s,
                t,
            };
        }
        if sampled {
            record(t, s);
            if revisits.visit(t, path, s) {
                return TrajectoryEnd {
                    termination: Termination::CycleSuspected,
                    state: s,
                    t,
                };
            }
        } else if k == n_steps {
            record(t, s);
        }
    }
    TrajectoryEnd {
        termination: Termination::MaxTime,
        state: s,
        t: n_steps as f64 * opts.dt,
    }
}

/// Integrate from `s0` until a target is reached, `t_max` elapses, or the
/// trajectory revisits an earlier sample (a suspected closed orbit).
///
/// The cycle label is heuristic: a revisit within `eps / 10` of a sample
/// taken at least `t_max / 100` earlier, with the path having moved at
/// least `10 eps` in between. It only decides when to stop.
pub fn integrate(
    dg: &DrunkGame,
    s0: State,
    opts: &IntegrateOptions,
    targets: &[State],
) -> Result<Trajectory> {
    opts.validate()?;
    let mut samples = Vec::new();
    let end = run(dg, s0, opts, targets, |t, s| samples.push((t, s)));
    Ok(Trajectory {
        dt: opts.dt,
        samples,
        termination: end.termination,
    })
}

/// Same dynamics and termination as [`integrate`], without keeping samples.
pub fn integrate_endpoint(
    dg: &DrunkGame,
    s0: State,
    opts: &IntegrateOptions,
    targets: &[State],
) -> Result<TrajectoryEnd> {
    opts.validate()?;
    Ok(run(dg, s0, opts, targets, |_, _| {}))
}
