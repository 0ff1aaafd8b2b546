//! Pipelines that regenerate the data behind each figure.
//!
//! `reproduce` writes `<out>/<figure>/<dataset>.csv` (or `.json`), a
//! `params.json` holding every resolved parameter, and a `manifest.json`
//! listing each file with its SHA-256 digest. Output depends only on the
//! `ExperimentSpec`, seed included. If any step fails, files already written for the
//! figure are removed.
//!
//! Defaults for choices the figures leave open:
//! * fig2 and fig3 sample trajectories start from fixed, documented points
//!   ([`FIG2_STARTS`], [`FIG3_STARTS`]).
//! * fig5 uses snowdrift temptation [`BATTLE_TRANSITION_T_SD`].
//! * fig6 runs at desk scale (`N = 1000`, 1000 rounds, 21 x 21) unless
//!   `full_scale` is set (`N = 10^4`, `10^4` rounds).

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::abm::{self, AbmConfig};
use crate::basins::{linspace, sweep_battle_line, sweep_g2_grid, McParams};
use crate::equilibria::equilibria;
use crate::error::{Error, Result};
use crate::game::{classify_game, single_game_fixed_points, PayoffMatrix, Stability};
use crate::meanfield::{
    field_grid, integrate, integrate_endpoint, write_field_csv, DrunkGame, IntegrateOptions, QPoly,
    State, Termination,
};
use crate::par::{map_indexed, Execution};
use crate::preset::{Preset, BATTLE_TRANSITION_T_SD};
use crate::seed::derive;

pub const FIG2_STARTS: [(f64, f64); 6] = [
    (0.9, 0.9),
    (0.1, 0.1),
    (0.3, 0.8),
    (0.8, 0.3),
    (0.55, 0.5),
    (0.45, 0.5),
];
pub const FIG3_STARTS: [(f64, f64); 2] = [(0.3, 0.3), (0.6, 0.6)];
pub const FIG3_S: [f64; 3] = [0.4, 0.5, 0.8];
pub const FIG4_KAPPAS: [f64; 3] = [0.1, 1.0, 10.0];
pub const FIG5_S1: [f64; 3] = [0.25, 0.5, 0.75];
/// Circle, star and pentagon markers: `(s, delta0)`.
pub const FIG7_RUNS: [(&str, f64, f64); 3] = [("a", 0.4, 0.04), ("b", 0.8, 0.04), ("c", 0.4, 0.4)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl Figure {
    pub const ALL: [Figure; 7] = [
        Figure::Fig1,
        Figure::Fig2,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
        }
    }

    /// Tunable scalar parameters and their defaults.
    pub fn default_params(&self, full_scale: bool) -> BTreeMap<&'static str, f64> {
        let integ = [("dt", 0.01), ("eps", 1e-3)];
        let mut p: BTreeMap<&'static str, f64> = match self {
            Figure::Fig1 => [("grid", 41.0), ("t_max", 1e3), ("x0", 0.5)].into(),
            Figure::Fig2 | Figure::Fig3 => [
                ("resolution", 21.0),
                ("t_max", 200.0),
                ("kappa", 1.0),
                ("mu", 0.5),
            ]
            .into(),
            Figure::Fig4 => [("grid", 41.0), ("samples", 1000.0), ("t_max", 1e4)].into(),
            Figure::Fig5 => [
                ("resolution", 21.0),
                ("s1_points", 21.0),
                ("samples", 1000.0),
                ("t_max", 1e4),
                ("t_sd", BATTLE_TRANSITION_T_SD),
            ]
            .into(),
            Figure::Fig6 => {
                let (n, t) = if full_scale { (1e4, 1e4) } else { (1e3, 1e3) };
                [
                    ("n", n),
                    ("rounds", t),
                    ("s_points", 21.0),
                    ("s_min", 0.3),
                    ("s_max", 0.9),
                    ("delta_points", 21.0),
                    ("delta_max", 0.5),
                ]
                .into()
            }
            Figure::Fig7 => [("n", 1e4), ("rounds", 5e3)].into(),
        };
        match self {
            Figure::Fig6 | Figure::Fig7 => {
                p.extend([("beta", 0.1), ("kappa", 0.1), ("mu", 0.5), ("x0", 0.5)]);
            }
            _ => p.extend(integ),
        }
        p
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub figure: Figure,
    pub out_dir: PathBuf,
    pub seed: u64,
    /// Overrides of [`Figure::default_params`]; unknown keys are rejected.
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
    #[serde(default)]
    pub full_scale: bool,
    #[serde(default)]
    pub exec: Execution,
}

impl ExperimentSpec {
    pub fn new(figure: Figure, out_dir: impl Into<PathBuf>, seed: u64) -> Self {
        ExperimentSpec {
            figure,
            out_dir: out_dir.into(),
            seed,
            overrides: BTreeMap::new(),
            full_scale: false,
            exec: Execution::default(),
        }
    }

    pub fn resolved_params(&self) -> Result<BTreeMap<String, f64>> {
        let mut p: BTreeMap<String, f64> = self
            .figure
            .default_params(self.full_scale)
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        for (k, v) in &self.overrides {
            match p.get_mut(k) {
                Some(slot) if v.is_finite() => *slot = *v,
                Some(_) => {
                    return Err(Error::Config(format!(
                        "parameter `{k}` = {v} is not finite"
                    )))
                }
                None => {
                    let known: Vec<&str> = p.keys().map(String::as_str).collect();
                    return Err(Error::Config(format!(
                        "`{k}` is not a parameter of {} (known: {})",
                        self.figure,
                        known.join(", ")
                    )));
                }
            }
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Relative to the output directory, `/`-separated.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub figure: Figure,
    pub seed: u64,
    pub files: Vec<ManifestEntry>,
}

/// Writes files under `<out>/<figure>/`, remembering them for the manifest
/// and for cleanup.
struct Emitter {
    dir: PathBuf,
    figure: Figure,
    created_dir: bool,
    written: Vec<PathBuf>,
    entries: Vec<ManifestEntry>,
}

impl Emitter {
    fn new(root: &Path, figure: Figure) -> Result<Self> {
        let dir = root.join(figure.id());
        let created_dir = !dir.exists();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Emitter {
            dir,
            figure,
            created_dir,
            written: Vec::new(),
            entries: Vec::new(),
        })
    }

    fn emit(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        self.written.push(path);
        self.entries.push(ManifestEntry {
            path: format!("{}/{}", self.figure.id(), name),
            sha256: hex::encode(Sha256::digest(bytes)),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    fn emit_with(
        &mut self,
        name: &str,
        write: impl FnOnce(&mut Vec<u8>) -> Result<()>,
    ) -> Result<()> {
        let mut buf = Vec::new();
        write(&mut buf)?;
        self.emit(name, &buf)
    }

    fn emit_json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let mut buf = serde_json::to_vec_pretty(value)?;
        buf.push(b'\n');
        self.emit(name, &buf)
    }

    fn cleanup(&self) {
        for p in &self.written {
            let _ = fs::remove_file(p);
        }
        let _ = fs::remove_file(self.dir.join("manifest.json"));
        if self.created_dir {
            let _ = fs::remove_dir(&self.dir);
        }
    }

    fn finish(self, seed: u64) -> Result<Manifest> {
        let manifest = Manifest {
            figure: self.figure,
            seed,
            files: self.entries.clone(),
        };
        let path = self.dir.join("manifest.json");
        let mut buf = serde_json::to_vec_pretty(&manifest)?;
        buf.push(b'\n');
        if let Err(e) = fs::write(&path, &buf) {
            self.cleanup();
            return Err(Error::io(&path, e));
        }
        Ok(manifest)
    }
}

pub fn reproduce(spec: &ExperimentSpec) -> Result<Manifest> {
    let params = spec.resolved_params()?;
    let mut out = Emitter::new(&spec.out_dir, spec.figure)?;
    let run = (|| -> Result<()> {
        out.emit_json(
            "params.json",
            &json!({
                "figure": spec.figure,
                "seed": spec.seed,
                "full_scale": spec.full_scale,
                "params": params,
                "fixed": fixed_params(spec.figure),
            }),
        )?;
        let p = Params(&params);
        match spec.figure {
            Figure::Fig1 => fig1(&p, spec, &mut out),
            Figure::Fig2 => fig2(&p, &mut out),
            Figure::Fig3 => fig3(&p, &mut out),
            Figure::Fig4 => fig4(&p, spec, &mut out),
            Figure::Fig5 => fig5(&p, spec, &mut out),
            Figure::Fig6 => fig6(&p, spec, &mut out),
            Figure::Fig7 => fig7(&p, spec, &mut out),
        }
    })();
    match run {
        Ok(()) => out.finish(spec.seed),
        Err(e) => {
            out.cleanup();
            Err(e)
        }
    }
}

fn fixed_params(fig: Figure) -> serde_json::Value {
    match fig {
        Figure::Fig1 => json!({ "S_range": [-1.0, 1.0], "T_range": [0.0, 2.0] }),
        Figure::Fig2 => json!({ "preset": "pub_dilemma", "starts": FIG2_STARTS }),
        Figure::Fig3 => json!({ "preset": "drunk_prisoner", "s": FIG3_S, "starts": FIG3_STARTS }),
        Figure::Fig4 => json!({
            "g1": PayoffMatrix { r: 1.0, s: -1.0, t: 2.0, p: 0.0 },
            "S2_range": [-1.0, 1.0], "T2_range": [0.0, 2.0], "kappas": FIG4_KAPPAS, "mu": 0.5
        }),
        Figure::Fig5 => {
            json!({ "preset": "battle", "field_s1": FIG5_S1, "kappas": FIG4_KAPPAS, "mu": 0.5 })
        }
        Figure::Fig6 => {
            json!({ "preset": "drunk_prisoner", "split": 0.5, "perception_mode": "per_round" })
        }
        Figure::Fig7 => {
            json!({ "preset": "drunk_prisoner", "runs": FIG7_RUNS, "split": 0.5, "perception_mode": "per_round" })
        }
    }
}

struct Params<'a>(&'a BTreeMap<String, f64>);

impl Params<'_> {
    fn f(&self, k: &str) -> f64 {
        self.0[k]
    }

    fn count(&self, k: &str) -> Result<usize> {
        let v = self.f(k);
        if v >= 1.0 && v.fract() == 0.0 && v <= 1e9 {
            Ok(v as usize)
        } else {
            Err(Error::Config(format!(
                "parameter `{k}` = {v} must be a positive integer"
            )))
        }
    }

    fn integrate(&self) -> IntegrateOptions {
        IntegrateOptions {
            dt: self.f("dt"),
            t_max: self.f("t_max"),
            eps: self.f("eps"),
            sample_every: 10,
        }
    }

    fn mc(&self, seed: u64) -> Result<McParams> {
        Ok(McParams {
            n_samples: self.count("samples")?,
            seed,
            eps: self.f("eps"),
            t_max: self.f("t_max"),
            dt: self.f("dt"),
            keep_records: false,
        })
    }

    fn abm(&self, seed: u64) -> Result<AbmConfig> {
        Ok(AbmConfig {
            n: self.count("n")?,
            beta: self.f("beta"),
            kappa: self.f("kappa"),
            mu: self.f("mu"),
            x0: self.f("x0"),
            t_max: self.count("rounds")?,
            seed,
            ..Default::default()
        })
    }
}

/// Asymptotic cooperation of a single game from `x0`: the equilibrium
/// reached, or the final state when the run ends unconverged.
pub fn single_game_cooperation(
    g: &PayoffMatrix,
    x0: f64,
    opts: &IntegrateOptions,
) -> Result<(f64, bool)> {
    let dg = DrunkGame::new(*g, *g, 1.0, QPoly::zero())?;
    let targets: Vec<State> = match single_game_fixed_points(g) {
        Ok(eq) => eq
            .into_iter()
            .filter(|e| e.stability == Stability::Stable)
            .map(|e| State::new(e.x, 0.0))
            .collect::<Result<_>>()?,
        Err(Error::DegenerateGame) => vec![],
        Err(e) => return Err(e),
    };
    let end = integrate_endpoint(&dg, State::new(x0, 0.0)?, opts, &targets)?;
    Ok(match end.termination {
        Termination::Converged { target, .. } => (target.x, true),
        _ => (end.state.x, false),
    })
}

fn fig1(p: &Params, spec: &ExperimentSpec, out: &mut Emitter) -> Result<()> {
    let n = p.count("grid")?;
    let (s_grid, t_grid) = (linspace(-1.0, 1.0, n), linspace(0.0, 2.0, n));
    let opts = p.integrate();
    opts.validate()?;
    let x0 = p.f("x0");
    let rows = map_indexed(
        spec.exec,
        n * n,
        |c| -> Result<(f64, f64, String, f64, bool)> {
            let (s, t) = (s_grid[c / n], t_grid[c % n]);
            let g = PayoffMatrix::normalized(s, t)?;
            let (coop, converged) = single_game_cooperation(&g, x0, &opts)?;
            Ok((s, t, classify_game(&g)?.to_string(), coop, converged))
        },
    );
    out.emit_with("cooperation.csv", |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["S", "T", "class", "cooperation", "converged"])?;
        for r in rows {
            let (s, t, class, coop, conv) = r?;
            w.write_record(&[
                s.to_string(),
                t.to_string(),
                class,
                coop.to_string(),
                conv.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    })
}

/// Field grid, equilibria and sample trajectories of one game.
fn portrait(
    dg: &DrunkGame,
    starts: &[(f64, f64)],
    p: &Params,
    suffix: &str,
    out: &mut Emitter,
) -> Result<()> {
    let res = p.count("resolution")?;
    let field = field_grid(dg, res)?;
    out.emit_with(&format!("field{suffix}.csv"), |buf| {
        write_field_csv(&field, buf)
    })?;
    let report = equilibria(dg);
    out.emit_with(&format!("equilibria{suffix}.json"), |buf| {
        report.write_json(&mut *buf)?;
        buf.push(b'\n');
        Ok(())
    })?;
    let targets = report.stable_states();
    let opts = p.integrate();
    let mut trajectories = Vec::new();
    for &(x, a) in starts {
        trajectories.push(integrate(dg, State::new(x, a)?, &opts, &targets)?);
    }
    out.emit_with(&format!("trajectories{suffix}.csv"), |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["id", "t", "x", "alpha"])?;
        for (id, tr) in trajectories.iter().enumerate() {
            for (t, s) in &tr.samples {
                w.write_record(&[
                    id.to_string(),
                    t.to_string(),
                    s.x.to_string(),
                    s.alpha.to_string(),
                ])?;
            }
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    })
}

fn fig2(p: &Params, out: &mut Emitter) -> Result<()> {
    let dg = Preset::PubDilemma.build_with(p.f("kappa"), p.f("mu"))?;
    portrait(&dg, &FIG2_STARTS, p, "", out)
}

fn fig3(p: &Params, out: &mut Emitter) -> Result<()> {
    for s in FIG3_S {
        let dg = Preset::DrunkPrisoner { s }.build_with(p.f("kappa"), p.f("mu"))?;
        portrait(&dg, &FIG3_STARTS, p, &format!("_s{s}"), out)?;
    }
    Ok(())
}

fn fig4(p: &Params, spec: &ExperimentSpec, out: &mut Emitter) -> Result<()> {
    let n = p.count("grid")?;
    let g1 = PayoffMatrix::normalized(-1.0, 2.0)?;
    let d = sweep_g2_grid(
        &g1,
        &linspace(-1.0, 1.0, n),
        &linspace(0.0, 2.0, n),
        &FIG4_KAPPAS,
        &p.mc(spec.seed)?,
        spec.exec,
    )?;
    out.emit_with("attractiveness.csv", |buf| d.write_csv(buf))
}

fn fig5(p: &Params, spec: &ExperimentSpec, out: &mut Emitter) -> Result<()> {
    let t_sd = p.f("t_sd");
    let field_params = Params(p.0);
    for s1 in FIG5_S1 {
        let dg = Preset::Battle { s1, t_sd }.build_with(1.0, 0.5)?;
        let res = field_params.count("resolution")?;
        let field = field_grid(&dg, res)?;
        out.emit_with(&format!("field_s1_{s1}.csv"), |buf| {
            write_field_csv(&field, buf)
        })?;
        out.emit_with(&format!("equilibria_s1_{s1}.json"), |buf| {
            equilibria(&dg).write_json(&mut *buf)?;
            buf.push(b'\n');
            Ok(())
        })?;
    }
    let grid = linspace(0.0, 1.0, p.count("s1_points")?);
    let d = sweep_battle_line(&grid, t_sd, &FIG4_KAPPAS, &p.mc(spec.seed)?, spec.exec)?;
    out.emit_with("attractiveness.csv", |buf| d.write_csv(buf))
}

fn fig6(p: &Params, spec: &ExperimentSpec, out: &mut Emitter) -> Result<()> {
    let s_grid = linspace(p.f("s_min"), p.f("s_max"), p.count("s_points")?);
    let d_grid = linspace(0.0, p.f("delta_max"), p.count("delta_points")?);
    if s_grid.iter().any(|s| !(0.0..=1.0).contains(s)) || !(0.0..=1.0).contains(&p.f("delta_max")) {
        return Err(Error::Config("fig6 ranges must lie in [0, 1]".into()));
    }
    let base = p.abm(spec.seed)?;
    let cells = abm::heatmap(&s_grid, &d_grid, &base, spec.exec)?;
    out.emit_with("heatmap.csv", |buf| abm::write_heatmap_csv(&cells, buf))
}

fn fig7(p: &Params, spec: &ExperimentSpec, out: &mut Emitter) -> Result<()> {
    for (k, (tag, s, d0)) in FIG7_RUNS.into_iter().enumerate() {
        let cfg = p.abm(derive(spec.seed, k as u64))?.with_heterogeneity(d0);
        let dg = Preset::DrunkPrisoner { s }.build_with(cfg.kappa, cfg.mu)?;
        let run = abm::run_abm(&cfg, &dg, spec.exec)?;
        out.emit_with(&format!("run_{tag}.csv"), |buf| run.write_csv(buf))?;
    }
    Ok(())
}

/// Read a manifest back and check every digest.
pub fn verify_manifest(out_dir: &Path, manifest: &Manifest) -> Result<bool> {
    for f in &manifest.files {
        let path = out_dir.join(&f.path);
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        if hex::encode(Sha256::digest(&bytes)) != f.sha256 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(fig: Figure, dir: &Path, overrides: &[(&str, f64)]) -> ExperimentSpec {
        ExperimentSpec {
            overrides: overrides.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            ..ExperimentSpec::new(fig, dir, 7)
        }
    }

    #[test]
    fn figure_ids() {
        for f in Figure::ALL {
            assert_eq!(f.id().parse::<Figure>().unwrap(), f);
        }
        assert!(matches!(
            "fig8".parse::<Figure>(),
            Err(Error::UnknownFigure(_))
        ));
    }

    #[test]
    fn single_game_cooperation_by_quadrant() {
        let opts = IntegrateOptions {
            t_max: 1e3,
            ..Default::default()
        };
        let coop = |s, t| {
            single_game_cooperation(&PayoffMatrix::normalized(s, t).unwrap(), 0.5, &opts).unwrap()
        };
        assert_eq!(coop(-0.5, 1.5), (0.0, true));
        assert_eq!(coop(0.5, 0.5), (1.0, true));
        let (x, conv) = coop(0.5, 1.5);
        assert!(conv && (x - 0.5).abs() < 1e-15);
        // the symmetric stag hunt starts on its unstable point
        assert_eq!(coop(-0.5, 0.5), (0.5, false));
    }

    #[test]
    fn fig1_small_grid() {
        let dir = tempfile::tempdir().unwrap();
        let m = reproduce(&spec(Figure::Fig1, dir.path(), &[("grid", 5.0)])).unwrap();
        let paths: Vec<&str> = m.files.iter().map(|f| f.path.as_str()).collect();
        assert_eq!(paths, vec!["fig1/params.json", "fig1/cooperation.csv"]);
        let text = fs::read_to_string(dir.path().join("fig1/cooperation.csv")).unwrap();
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        for rec in rdr.records() {
            let rec = rec.unwrap();
            let coop: f64 = rec[3].parse().unwrap();
            match &rec[2] {
                "PD" => assert_eq!(coop, 0.0),
                "HG" => assert_eq!(coop, 1.0),
                _ => {}
            }
        }
        assert!(verify_manifest(dir.path(), &m).unwrap());
        assert!(dir.path().join("fig1/manifest.json").exists());
    }

    #[test]
    fn fig2_has_the_five_fixed_points() {
        let dir = tempfile::tempdir().unwrap();
        reproduce(&spec(Figure::Fig2, dir.path(), &[])).unwrap();
        let eq: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(dir.path().join("fig2/equilibria.json")).unwrap(),
        )
        .unwrap();
        let eq = eq.as_array().unwrap();
        assert_eq!(eq.len(), 5);
        let count = |st: &str| eq.iter().filter(|p| p["stability"] == st).count();
        assert_eq!(count("stable_node"), 2);
        assert_eq!(count("saddle"), 1);
        assert_eq!(count("unstable_node"), 2);
    }

    #[test]
    fn reproducible_bit_for_bit() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let ov = [
            ("n", 200.0),
            ("rounds", 30.0),
            ("s_points", 2.0),
            ("delta_points", 2.0),
        ];
        let ma = reproduce(&spec(Figure::Fig6, a.path(), &ov)).unwrap();
        let mb = reproduce(&ExperimentSpec {
            exec: Execution::Sequential,
            ..spec(Figure::Fig6, b.path(), &ov)
        })
        .unwrap();
        assert_eq!(ma, mb);
    }

    #[test]
    fn unknown_override_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            reproduce(&spec(Figure::Fig1, dir.path(), &[("gird", 5.0)])),
            Err(Error::Config(_))
        ));
        assert!(!dir.path().join("fig1").exists());
    }

    #[test]
    fn failure_cleans_up() {
        let dir = tempfile::tempdir().unwrap();
        // params.json is written before the invalid resolution is noticed
        let err = reproduce(&spec(Figure::Fig2, dir.path(), &[("resolution", 1.0)]));
        assert!(err.is_err());
        assert!(!dir.path().join("fig2").exists());
        // a pre-existing directory is kept, but emptied of our files
        fs::create_dir(dir.path().join("fig2")).unwrap();
        assert!(reproduce(&spec(Figure::Fig2, dir.path(), &[("resolution", 1.0)])).is_err());
        assert_eq!(fs::read_dir(dir.path().join("fig2")).unwrap().count(), 0);
    }

    #[test]
    fn unwritable_output_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("occupied");
        fs::write(&file, b"x").unwrap();
        assert!(matches!(
            reproduce(&spec(Figure::Fig1, &file, &[("grid", 2.0)])),
            Err(Error::Io { .. })
        ));
    }
}
