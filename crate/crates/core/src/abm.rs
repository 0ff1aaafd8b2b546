//! Finite well-mixed population playing a drunk game.
//!
//! Every round each agent plays every other agent under its own perceived
//! payoff matrix, then all agents update synchronously from the round-`t`
//! state: strategies by the local replicator rule (imitate a random other
//! agent with probability proportional to the positive payoff gap) and
//! perceptions by `alpha += kappa alpha (1 - alpha) (x_bar - mu)`.
//!
//! Payoffs are totals over the `N - 1` games, and the imitation
//! normalization `Phi` is `N - 1` times the payoff range over both
//! matrices, so the imitation probability never exceeds `beta`.
//!
//! Randomness is indexed by agent: agent `i` owns ChaCha stream `i` and
//! draws from it in a fixed order each round, which makes a run independent
//! of how the agent loop is scheduled.

use std::io::Write;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::equilibria::equilibria;
use crate::error::{Error, Result};
use crate::game::PayoffMatrix;
use crate::meanfield::{DrunkGame, QPoly, State};
use crate::par::{map_indexed, map_mut_indexed, Execution};
use crate::seed::{derive, derive_path, rng, DEFAULT_SEED};

/// Largest population for per-interaction perception draws unless the
/// guard is lifted.
pub const PER_INTERACTION_LIMIT: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    C,
    D,
}

impl Strategy {
    pub fn is_cooperator(self) -> bool {
        self == Strategy::C
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub strategy: Strategy,
    pub alpha: f64,
    /// 1 or 2, the agent's initial perception group.
    pub group: u8,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerceptionMode {
    /// One perception draw per agent per round.
    #[default]
    PerRound,
    /// An independent draw for every opponent. O(N^2).
    PerInteraction,
    /// No draw: the agent's matrix is the alpha-weighted blend of both games.
    Expected,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    /// Every agent reacts to the population's cooperator fraction.
    #[default]
    PopulationMean,
    /// Each agent reacts to its own mean beer count `(c_i + x_{-i}) / 2`.
    IndividualExperience,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AbmConfig {
    pub n: usize,
    pub beta: f64,
    pub kappa: f64,
    pub mu: f64,
    pub x0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Fraction of agents in group 1.
    pub split: f64,
    /// Number of rounds.
    pub t_max: usize,
    pub seed: u64,
    pub perception_mode: PerceptionMode,
    pub alpha_rule: AlphaRule,
    /// Lift the population cap on per-interaction perception.
    pub allow_large_interaction: bool,
}

impl Default for AbmConfig {
    fn default() -> Self {
        AbmConfig {
            n: 10_000,
            beta: 0.1,
            kappa: 0.1,
            mu: 0.5,
            x0: 0.5,
            alpha1: 0.5,
            alpha2: 0.5,
            split: 0.5,
            t_max: 5000,
            seed: DEFAULT_SEED,
            perception_mode: PerceptionMode::PerRound,
            alpha_rule: AlphaRule::PopulationMean,
            allow_large_interaction: false,
        }
    }
}

impl AbmConfig {
    /// Groups at `0.5 (1 - delta0)` and `0.5 (1 + delta0)`: mean 0.5 and
    /// heterogeneity exactly `delta0`.
    pub fn with_heterogeneity(self, delta0: f64) -> Self {
        AbmConfig {
            alpha1: 0.5 * (1.0 - delta0),
            alpha2: 0.5 * (1.0 + delta0),
            ..self
        }
    }

    pub fn group1_size(&self) -> usize {
        (self.split * self.n as f64).floor() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name: &str, why: String| Err(Error::param(name, why));
        if self.n < 2 {
            return bad("n", format!("{} < 2", self.n));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return bad("beta", format!("{} is not in (0, 1)", self.beta));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return bad("kappa", format!("{} is not a positive real", self.kappa));
        }
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return bad("mu", format!("{} is not in (0, 1)", self.mu));
        }
        if !(0.0..=1.0).contains(&self.x0) {
            return bad("x0", format!("{} is not in [0, 1]", self.x0));
        }
        if !(0.0 <= self.alpha1 && self.alpha1 <= self.alpha2 && self.alpha2 <= 1.0) {
            return bad(
                "alpha1",
                format!("need 0 <= {} <= {} <= 1", self.alpha1, self.alpha2),
            );
        }
        let n1 = self.group1_size();
        if !(0.0..=1.0).contains(&self.split) || n1 == 0 || n1 == self.n {
            return bad("split", format!("{} leaves a group empty", self.split));
        }
        if self.perception_mode == PerceptionMode::PerInteraction
            && self.n > PER_INTERACTION_LIMIT
            && !self.allow_large_interaction
        {
            return Err(Error::CostGuard {
                n: self.n,
                limit: PER_INTERACTION_LIMIT,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Population {
    agents: Vec<Agent>,
    n_coop: usize,
    /// Cooperators in groups 1 and 2.
    n_coop_group: [usize; 2],
    n_group: [usize; 2],
}

impl Population {
    pub fn from_agents(agents: Vec<Agent>) -> Result<Self> {
        if agents.len() < 2 {
            return Err(Error::param("n", format!("{} < 2", agents.len())));
        }
        if let Some(a) = agents
            .iter()
            .find(|a| !(0.0..=1.0).contains(&a.alpha) || !(a.group == 1 || a.group == 2))
        {
            return Err(Error::param("agent", format!("{a:?} is not a valid agent")));
        }
        let mut p = Population {
            agents,
            n_coop: 0,
            n_coop_group: [0; 2],
            n_group: [0; 2],
        };
        p.recount();
        Ok(p)
    }

    fn recount(&mut self) {
        self.n_coop = 0;
        self.n_coop_group = [0; 2];
        self.n_group = [0; 2];
        for a in &self.agents {
            let g = (a.group - 1) as usize;
            self.n_group[g] += 1;
            if a.strategy.is_cooperator() {
                self.n_coop += 1;
                self.n_coop_group[g] += 1;
            }
        }
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn n_cooperators(&self) -> usize {
        self.n_coop
    }

    pub fn cooperator_fraction(&self) -> f64 {
        self.n_coop as f64 / self.len() as f64
    }

    /// Cooperator fraction within group `g` (1 or 2); 0 for an empty group.
    pub fn group_cooperation(&self, g: u8) -> f64 {
        let i = (g - 1) as usize;
        if self.n_group[i] == 0 {
            0.0
        } else {
            self.n_coop_group[i] as f64 / self.n_group[i] as f64
        }
    }

    pub fn alpha_mean(&self) -> f64 {
        self.agents.iter().map(|a| a.alpha).sum::<f64>() / self.len() as f64
    }

    /// Mean alpha within group `g`; 0 for an empty group.
    pub fn group_alpha(&self, g: u8) -> f64 {
        let i = (g - 1) as usize;
        if self.n_group[i] == 0 {
            return 0.0;
        }
        self.agents
            .iter()
            .filter(|a| a.group == g)
            .map(|a| a.alpha)
            .sum::<f64>()
            / self.n_group[i] as f64
    }

    /// Whether the cached counts match a full recount.
    pub fn counts_consistent(&self) -> bool {
        let mut fresh = self.clone();
        fresh.recount();
        fresh.n_coop == self.n_coop
            && fresh.n_coop_group == self.n_coop_group
            && fresh.n_group == self.n_group
    }
}

/// One ChaCha stream per agent (stream id = agent index), consumed in a
/// fixed order every round.
#[derive(Debug, Clone)]
pub struct AgentStreams {
    rngs: Vec<ChaCha8Rng>,
}

impl AgentStreams {
    pub fn new(seed: u64, n: usize) -> Self {
        let base = rng(seed);
        let rngs = (0..n)
            .map(|i| {
                let mut r = base.clone();
                r.set_stream(i as u64);
                r
            })
            .collect();
        AgentStreams { rngs }
    }

    pub fn len(&self) -> usize {
        self.rngs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rngs.is_empty()
    }
}

/// Group 1 is the first `floor(split N)` agents; strategies are independent
/// Bernoulli(`x0`) draws.
pub fn init_population(cfg: &AbmConfig) -> Result<Population> {
    cfg.validate()?;
    init_population_with(cfg, &mut AgentStreams::new(cfg.seed, cfg.n))
}

/// [`init_population`] drawing from the caller's streams.
pub fn init_population_with(cfg: &AbmConfig, streams: &mut AgentStreams) -> Result<Population> {
    cfg.validate()?;
    if streams.len() != cfg.n {
        return Err(Error::param(
            "streams",
            format!("{} streams for {} agents", streams.len(), cfg.n),
        ));
    }
    let n1 = cfg.group1_size();
    let agents = streams
        .rngs
        .iter_mut()
        .enumerate()
        .map(|(i, r)| {
            let u: f64 = r.gen();
            let (alpha, group) = if i < n1 {
                (cfg.alpha1, 1)
            } else {
                (cfg.alpha2, 2)
            };
            Agent {
                strategy: if u < cfg.x0 { Strategy::C } else { Strategy::D },
                alpha,
                group,
            }
        })
        .collect();
    Population::from_agents(agents)
}

/// Total payoff of every agent against all others when each agent sees a
/// single matrix for the round. O(N).
pub fn payoffs_from_perceptions(pop: &Population, perceived: &[PayoffMatrix]) -> Vec<f64> {
    let n = pop.len() as f64;
    let nc = pop.n_coop as f64;
    pop.agents
        .iter()
        .zip(perceived)
        .map(|(a, m)| match a.strategy {
            Strategy::C => (nc - 1.0) * m.r + (n - nc) * m.s,
            Strategy::D => nc * m.t + (n - nc - 1.0) * m.p,
        })
        .collect()
}

/// The matrix each agent perceives this round (per-round and expected modes).
pub fn perceptions(
    pop: &Population,
    dg: &DrunkGame,
    mode: PerceptionMode,
    streams: &mut AgentStreams,
    exec: Execution,
) -> Vec<PayoffMatrix> {
    map_mut_indexed(exec, &mut streams.rngs, |i, r| {
        let alpha = pop.agents[i].alpha;
        match mode {
            PerceptionMode::Expected => dg.g1.blend(&dg.g2, alpha),
            _ => {
                let u: f64 = r.gen();
                if u < alpha {
                    dg.g2
                } else {
                    dg.g1
                }
            }
        }
    })
}

fn entry(m: &PayoffMatrix, me: Strategy, other: Strategy) -> f64 {
    match (me, other) {
        (Strategy::C, Strategy::C) => m.r,
        (Strategy::C, Strategy::D) => m.s,
        (Strategy::D, Strategy::C) => m.t,
        (Strategy::D, Strategy::D) => m.p,
    }
}

/// Round payoffs under `mode`.
pub fn round_payoffs(
    pop: &Population,
    dg: &DrunkGame,
    mode: PerceptionMode,
    streams: &mut AgentStreams,
    exec: Execution,
) -> Vec<f64> {
    match mode {
        PerceptionMode::PerInteraction => map_mut_indexed(exec, &mut streams.rngs, |i, r| {
            let me = &pop.agents[i];
            let mut total = 0.0;
            for (j, other) in pop.agents.iter().enumerate() {
                if j != i {
                    let m = if r.gen::<f64>() < me.alpha {
                        &dg.g2
                    } else {
                        &dg.g1
                    };
                    total += entry(m, me.strategy, other.strategy);
                }
            }
            total
        }),
        _ => payoffs_from_perceptions(pop, &perceptions(pop, dg, mode, streams, exec)),
    }
}

/// `max(0, beta (pi_j - pi_i) / phi)`.
pub fn imitation_probability(pi_i: f64, pi_j: f64, beta: f64, phi: f64) -> f64 {
    debug_assert!(phi > 0.0);
    (beta * (pi_j - pi_i) / phi).max(0.0)
}

/// `(N - 1)` times the payoff range over both matrices.
pub fn payoff_span(dg: &DrunkGame, n: usize) -> f64 {
    let hi = dg.g1.max_entry().max(dg.g2.max_entry());
    let lo = dg.g1.min_entry().min(dg.g2.min_entry());
    (n - 1) as f64 * (hi - lo)
}

/// One synchronous round.
pub fn step_population(
    pop: &Population,
    dg: &DrunkGame,
    cfg: &AbmConfig,
    streams: &mut AgentStreams,
    exec: Execution,
) -> Population {
    let n = pop.len();
    let payoffs = round_payoffs(pop, dg, cfg.perception_mode, streams, exec);
    let phi = payoff_span(dg, n).max(f64::MIN_POSITIVE);
    let x_bar = pop.cooperator_fraction();
    let nc = pop.n_coop as f64;
    let agents = map_mut_indexed(exec, &mut streams.rngs, |i, r| {
        let me = pop.agents[i];
        let j = (i + 1 + r.gen_range(0..n - 1)) % n;
        let u: f64 = r.gen();
        let strategy = if u < imitation_probability(payoffs[i], payoffs[j], cfg.beta, phi) {
            pop.agents[j].strategy
        } else {
            me.strategy
        };
        let signal = match cfg.alpha_rule {
            AlphaRule::PopulationMean => x_bar,
            AlphaRule::IndividualExperience => {
                let c = if me.strategy.is_cooperator() {
                    1.0
                } else {
                    0.0
                };
                0.5 * (c + (nc - c) / (n - 1) as f64)
            }
        };
        let a = me.alpha;
        Agent {
            strategy,
            alpha: (a + cfg.kappa * a * (1.0 - a) * (signal - cfg.mu)).clamp(0.0, 1.0),
            group: me.group,
        }
    });
    let mut next = Population {
        agents,
        n_coop: 0,
        n_coop_group: [0; 2],
        n_group: pop.n_group,
    };
    next.recount();
    next
}

/// `(a2 - a1) / (a1 + a2)` from the current group means, clamped to
/// `[0, 1]`; 0 when both means vanish.
pub fn delta_alpha(pop: &Population) -> f64 {
    delta_from_means(pop.group_alpha(1), pop.group_alpha(2))
}

pub fn delta_from_means(a1: f64, a2: f64) -> f64 {
    if a1 + a2 <= 0.0 {
        0.0
    } else {
        ((a2 - a1) / (a1 + a2)).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbmStats {
    pub t: usize,
    pub x_mean: f64,
    pub alpha_mean: f64,
    pub alpha_g1: f64,
    pub alpha_g2: f64,
    pub coop_g1: f64,
    pub coop_g2: f64,
    pub delta_alpha: f64,
    /// Euclidean distance of `(x_mean, alpha_mean)` to the interior fixed
    /// point, when there is one.
    pub dist_interior: Option<f64>,
}

impl AbmStats {
    pub fn of(pop: &Population, t: usize, interior: Option<State>) -> Self {
        let x_mean = pop.cooperator_fraction();
        let alpha_mean = pop.alpha_mean();
        AbmStats {
            t,
            x_mean,
            alpha_mean,
            alpha_g1: pop.group_alpha(1),
            alpha_g2: pop.group_alpha(2),
            coop_g1: pop.group_cooperation(1),
            coop_g2: pop.group_cooperation(2),
            delta_alpha: delta_alpha(pop),
            dist_interior: interior.map(|p| (x_mean - p.x).hypot(alpha_mean - p.alpha)),
        }
    }

    pub fn mean_state(&self) -> State {
        State::raw(self.x_mean, self.alpha_mean)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbmRun {
    /// One entry per round, `t = 0..=t_max`.
    pub stats: Vec<AbmStats>,
    pub interior: Option<State>,
    pub final_population: Population,
}

impl AbmRun {
    pub fn last(&self) -> &AbmStats {
        self.stats.last().expect("a run records its initial state")
    }

    /// Mean distance to the interior point over the final tenth of rounds.
    pub fn tail_distance(&self) -> Option<f64> {
        let k = (self.stats.len() / 10).max(1);
        let tail = &self.stats[self.stats.len() - k..];
        let d: Option<Vec<f64>> = tail.iter().map(|s| s.dist_interior).collect();
        d.map(|v| v.iter().sum::<f64>() / v.len() as f64)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_stats_csv(&self.stats, w)
    }
}

pub fn write_stats_csv<W: Write>(stats: &[AbmStats], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "t",
        "x_mean",
        "alpha_mean",
        "alpha_g1",
        "alpha_g2",
        "coop_g1",
        "coop_g2",
        "delta_alpha",
        "dist_interior",
    ])?;
    for s in stats {
        out.write_record(&[
            s.t.to_string(),
            s.x_mean.to_string(),
            s.alpha_mean.to_string(),
            s.alpha_g1.to_string(),
            s.alpha_g2.to_string(),
            s.coop_g1.to_string(),
            s.coop_g2.to_string(),
            s.delta_alpha.to_string(),
            s.dist_interior.map(|d| d.to_string()).unwrap_or_default(),
        ])?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// The game with the ABM's own `kappa` and `q(x) = x - mu`.
pub fn abm_game(cfg: &AbmConfig, dg: &DrunkGame) -> Result<DrunkGame> {
    DrunkGame::new(dg.g1, dg.g2, cfg.kappa, QPoly::linear(cfg.mu))
}

/// Interior fixed point of the population-level game, if any.
pub fn interior_point(cfg: &AbmConfig, dg: &DrunkGame) -> Result<Option<State>> {
    Ok(equilibria(&abm_game(cfg, dg)?)
        .interior()
        .next()
        .map(|p| p.state))
}

/// Run `t_max` rounds. Only the payoff matrices of `dg` are used; the
/// perception dynamics take `kappa` and `mu` from `cfg`.
pub fn run_abm(cfg: &AbmConfig, dg: &DrunkGame, exec: Execution) -> Result<AbmRun> {
    cfg.validate()?;
    let mut streams = AgentStreams::new(cfg.seed, cfg.n);
    let mut pop = init_population_with(cfg, &mut streams)?;
    let interior = interior_point(cfg, dg)?;
    let mut stats = Vec::with_capacity(cfg.t_max + 1);
    stats.push(AbmStats::of(&pop, 0, interior));
    for t in 0..cfg.t_max {
        pop = step_population(&pop, dg, cfg, &mut streams, exec);
        debug_assert!(pop.counts_consistent());
        stats.push(AbmStats::of(&pop, t + 1, interior));
    }
    Ok(AbmRun {
        stats,
        interior,
        final_population: pop,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatmapCell {
    pub s: f64,
    pub delta0: f64,
    pub dist_interior_avg: Option<f64>,
    pub delta_alpha_final: f64,
    pub seed: u64,
}

/// Drunk prisoner runs over `s x delta0`; cell `(i, j)` is seeded with
/// `derive_path(base.seed, [i, j])`.
pub fn heatmap(
    s_grid: &[f64],
    delta_grid: &[f64],
    base: &AbmConfig,
    exec: Execution,
) -> Result<Vec<HeatmapCell>> {
    let n = s_grid.len() * delta_grid.len();
    let cells = map_indexed(exec, n, |c| -> Result<HeatmapCell> {
        let (i, j) = (c / delta_grid.len(), c % delta_grid.len());
        let seed = derive_path(base.seed, &[i as u64, j as u64]);
        let cfg = AbmConfig { seed, ..*base }.with_heterogeneity(delta_grid[j]);
        let dg =
            crate::preset::Preset::DrunkPrisoner { s: s_grid[i] }.build_with(cfg.kappa, cfg.mu)?;
        let run = run_abm(&cfg, &dg, Execution::Sequential)?;
        Ok(HeatmapCell {
            s: s_grid[i],
            delta0: delta_grid[j],
            dist_interior_avg: run.tail_distance(),
            delta_alpha_final: run.last().delta_alpha,
            seed,
        })
    });
    cells.into_iter().collect()
}

pub fn write_heatmap_csv<W: Write>(cells: &[HeatmapCell], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["s", "delta0", "dist_interior_avg", "delta_alpha_final"])?;
    for c in cells {
        out.write_record(&[
            c.s.to_string(),
            c.delta0.to_string(),
            c.dist_interior_avg
                .map(|d| d.to_string())
                .unwrap_or_default(),
            c.delta_alpha_final.to_string(),
        ])?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Mean-field counterpart of a run: the ODE with `kappa_eff = kappa Phi /
/// (beta (N - 1))`, in which one round lasts `tau0 = beta (N - 1) / Phi`
/// time units.
pub fn meanfield_counterpart(cfg: &AbmConfig, dg: &DrunkGame) -> Result<(DrunkGame, f64)> {
    let span = payoff_span(dg, cfg.n) / (cfg.n - 1) as f64;
    if span <= 0.0 {
        return Err(Error::param("game", "payoff range is zero"));
    }
    let tau0 = cfg.beta / span;
    let ode = DrunkGame::new(dg.g1, dg.g2, cfg.kappa / tau0, QPoly::linear(cfg.mu))?;
    Ok((ode, tau0))
}

/// Mean-field states at `t = r tau` for `r = 0..rounds`, integrated with
/// RK4 steps that land exactly on every sample time.
pub fn meanfield_trace(
    ode: &DrunkGame,
    s0: State,
    tau: f64,
    rounds: usize,
    max_dt: f64,
) -> Vec<State> {
    let k = (tau / max_dt).ceil().max(1.0) as usize;
    let dt = tau / k as f64;
    let mut s = s0;
    let mut out = Vec::with_capacity(rounds + 1);
    out.push(s);
    for _ in 0..rounds {
        for _ in 0..k {
            s = crate::meanfield::step_rk4(ode, s, dt);
        }
        out.push(s);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldComparison {
    pub tau0: f64,
    /// Fitted round duration.
    pub tau: f64,
    pub kappa_eff: f64,
    /// Root mean square Euclidean distance between the population means
    /// and the mean-field trajectory.
    pub rms: f64,
}

fn rms_distance(stats: &[AbmStats], mf: &[State]) -> f64 {
    let sum: f64 = stats
        .iter()
        .zip(mf)
        .map(|(s, m)| (s.x_mean - m.x).powi(2) + (s.alpha_mean - m.alpha).powi(2))
        .sum();
    (sum / stats.len() as f64).sqrt()
}

/// Fit the round duration `tau` (a single time-dilation factor around
/// `tau0`) that minimizes the RMS distance between the run's population
/// means and the mean-field trajectory started from the run's initial
/// means.
pub fn compare_with_meanfield(
    stats: &[AbmStats],
    cfg: &AbmConfig,
    dg: &DrunkGame,
) -> Result<MeanFieldComparison> {
    if stats.is_empty() {
        return Err(Error::param("stats", "empty run"));
    }
    let (ode, tau0) = meanfield_counterpart(cfg, dg)?;
    let s0 = stats[0].mean_state();
    let rounds = stats.len() - 1;
    let max_dt = 0.02;
    let eval = |c: f64| rms_distance(stats, &meanfield_trace(&ode, s0, c * tau0, rounds, max_dt));
    // coarse log scan over [0.5, 2], then golden-section refinement
    let grid: Vec<f64> = (0..=40).map(|i| 0.5 * 4f64.powf(i as f64 / 40.0)).collect();
    let (mut best_c, mut best) = (1.0, eval(1.0));
    for &c in &grid {
        let r = eval(c);
        if r < best {
            best = r;
            best_c = c;
        }
    }
    let ratio = 4f64.powf(1.0 / 40.0);
    let (mut lo, mut hi) = (best_c / ratio, best_c * ratio);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..30 {
        let c1 = hi - g * (hi - lo);
        let c2 = lo + g * (hi - lo);
        if eval(c1) < eval(c2) {
            hi = c2;
        } else {
            lo = c1;
        }
    }
    let mid = 0.5 * (lo + hi);
    let r = eval(mid);
    if r < best {
        best = r;
        best_c = mid;
    }
    Ok(MeanFieldComparison {
        tau0,
        tau: best_c * tau0,
        kappa_eff: ode.kappa,
        rms: best,
    })
}

/// Share of rounds, among those where the mean-field speed at the current
/// means exceeds `min_speed`, whose step of the population means points
/// along the mean-field vector field (positive inner product).
pub fn drift_agreement(stats: &[AbmStats], ode: &DrunkGame, min_speed: f64) -> Option<f64> {
    let mut considered = 0usize;
    let mut agree = 0usize;
    for w in stats.windows(2) {
        let (fx, fa) = ode.field(w[0].x_mean, w[0].alpha_mean);
        if fx.hypot(fa) <= min_speed {
            continue;
        }
        considered += 1;
        let (dx, da) = (w[1].x_mean - w[0].x_mean, w[1].alpha_mean - w[0].alpha_mean);
        if dx * fx + da * fa > 0.0 {
            agree += 1;
        }
    }
    (considered > 0).then(|| agree as f64 / considered as f64)
}

/// A seed for run `k` of a batch of repeated runs.
pub fn replicate_seed(master: u64, k: u64) -> u64 {
    derive(master, k)
}
